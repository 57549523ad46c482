//! Transport-independent session logic: one [`LiveSession`] per connection,
//! all sharing a [`Service`].

use std::sync::{Arc, Mutex};

use h4_core::codec::Direction;
use h4_core::engine::{Engine, Keyboard, Outcome};
use h4_core::experiment::{make_schedule, normalize_phrase, PhraseSet, SessionStore, TrialKey};
use h4_core::metrics::TrialMetrics;

use crate::protocol::{Boxes, ClientFrame, ServerFrame};

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub count_enter: bool,
    pub seed: u64,
    /// Phrases per session when the hello frame does not say.
    pub phrases_per_session: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            count_enter: false,
            seed: 2024,
            phrases_per_session: 3,
        }
    }
}

/// State shared by every session: the keyboard, the phrase set and the
/// single-writer store.
#[derive(Debug)]
pub struct Service {
    keyboard: Arc<Keyboard>,
    phrases: PhraseSet,
    store: Option<Mutex<SessionStore>>,
    config: ServiceConfig,
}

impl Service {
    pub fn new(
        keyboard: Arc<Keyboard>,
        phrases: PhraseSet,
        store: Option<SessionStore>,
        config: ServiceConfig,
    ) -> Arc<Service> {
        Arc::new(Service {
            keyboard,
            phrases,
            store: store.map(Mutex::new),
            config,
        })
    }

    pub fn keyboard(&self) -> &Arc<Keyboard> {
        &self.keyboard
    }

    pub fn session(self: &Arc<Self>) -> LiveSession {
        LiveSession {
            service: Arc::clone(self),
            plan: None,
            engine: None,
            trial: 0,
            last_id: None,
            completed: Vec::new(),
        }
    }

    fn persist(&self, key: &TrialKey, engine: &Engine, metrics: &TrialMetrics) -> Result<(), String> {
        let Some(store) = &self.store else { return Ok(()) };
        let mut store = store.lock().map_err(|_| "store lock poisoned".to_string())?;
        store
            .append(key, engine.trial(), self.config.count_enter, metrics)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone)]
struct Plan {
    participant: String,
    device: String,
    block: u32,
    phrases: Vec<String>,
}

/// One client's view of the service. Frames are handled strictly in order.
#[derive(Debug)]
pub struct LiveSession {
    service: Arc<Service>,
    plan: Option<Plan>,
    engine: Option<Engine>,
    trial: usize,
    last_id: Option<u64>,
    completed: Vec<TrialMetrics>,
}

impl LiveSession {
    /// Handles one text frame. Unparsable input yields a single error frame.
    pub fn handle_text(&mut self, text: &str) -> Vec<ServerFrame> {
        match serde_json::from_str::<ClientFrame>(text) {
            Ok(frame) => self.handle(frame),
            Err(e) => vec![ServerFrame::Error {
                id: None,
                message: format!("bad frame: {e}"),
            }],
        }
    }

    pub fn handle(&mut self, frame: ClientFrame) -> Vec<ServerFrame> {
        match frame {
            ClientFrame::Hello {
                participant,
                device,
                block,
                phrases,
                count,
                seed,
            } => self.hello(participant, device, block, phrases, count, seed),
            ClientFrame::Keystroke { id, d, t } => self.keystroke(id, d, t),
            ClientFrame::Metrics {} => vec![ServerFrame::Metrics {
                trials: self.completed.clone(),
            }],
        }
    }

    fn hello(
        &mut self,
        participant: Option<String>,
        device: Option<String>,
        block: Option<u32>,
        phrases: Option<Vec<String>>,
        count: Option<usize>,
        seed: Option<u64>,
    ) -> Vec<ServerFrame> {
        let error = |message: String| vec![ServerFrame::Error { id: None, message }];
        let device = device.unwrap_or_else(|| "mouse".into());
        let phrases: Vec<String> = match phrases {
            Some(list) => list.iter().map(|p| normalize_phrase(p).0).collect(),
            None => {
                let cfg = &self.service.config;
                let count = count.unwrap_or(cfg.phrases_per_session);
                match make_schedule(
                    &self.service.phrases,
                    1,
                    std::slice::from_ref(&device),
                    1,
                    count as u32,
                    seed.unwrap_or(cfg.seed),
                ) {
                    Ok(s) => s.trials.into_iter().map(|t| t.text).collect(),
                    Err(e) => return error(e.to_string()),
                }
            }
        };
        if phrases.is_empty() || phrases.iter().any(String::is_empty) {
            return error("hello needs at least one non-empty phrase".into());
        }
        for p in &phrases {
            if let Err(e) = self.service.keyboard.check_encodable(p) {
                return error(e.to_string());
            }
        }
        self.plan = Some(Plan {
            participant: participant.unwrap_or_else(|| "anonymous".into()),
            device,
            block: block.unwrap_or(1),
            phrases,
        });
        self.trial = 0;
        self.completed.clear();
        vec![self.start_trial()]
    }

    fn start_trial(&mut self) -> ServerFrame {
        let plan = self.plan.as_ref().expect("plan set before trials start");
        let presented = plan.phrases[self.trial].clone();
        let engine = Engine::new_trial(Arc::clone(&self.service.keyboard), &presented)
            .expect("phrases were checked at hello");
        let frame = ServerFrame::Layout {
            participant: plan.participant.clone(),
            device: plan.device.clone(),
            block: plan.block,
            trial: self.trial,
            trials: plan.phrases.len(),
            presented,
            boxes: Boxes::from_partition(engine.boxes()),
            depth: engine.depth(),
        };
        self.engine = Some(engine);
        frame
    }

    fn keystroke(&mut self, id: u64, d: Direction, t: u64) -> Vec<ServerFrame> {
        let reject = |message: String| vec![ServerFrame::Error { id: Some(id), message }];
        if let Some(last) = self.last_id {
            if id <= last {
                return reject(format!("keystroke id {id} does not follow {last}"));
            }
        }
        let Some(engine) = self.engine.as_mut() else {
            return reject("no active trial; send hello first".into());
        };
        if engine.is_finished() {
            return reject("session finished; send hello to start another".into());
        }
        let press = match engine.press(d, t) {
            Ok(p) => p,
            Err(e) => return reject(e.to_string()),
        };
        self.last_id = Some(id);

        let mut out = Vec::new();
        match press.outcome {
            Outcome::Rejected => out.push(ServerFrame::Rejected { d }),
            Outcome::Emit(symbol) => out.push(ServerFrame::Emitted {
                symbol,
                wrong: press.wrong,
            }),
            Outcome::Descend => {}
        }
        if engine.is_finished() {
            out.extend(self.finish_trial());
        }
        let engine = self.engine.as_ref().expect("engine present");
        out.push(ServerFrame::State {
            id,
            boxes: Boxes::from_partition(engine.boxes()),
            transcribed: engine.trial().transcribed.clone(),
            depth: engine.depth(),
        });
        out
    }

    fn finish_trial(&mut self) -> Vec<ServerFrame> {
        let mut out = Vec::new();
        let engine = self.engine.as_ref().expect("engine present");
        let plan = self.plan.as_ref().expect("plan present");
        let trial = engine.trial();
        let metrics = match TrialMetrics::compute(trial, self.service.keyboard.table(), self.service.config.count_enter) {
            Ok(m) => m,
            Err(e) => {
                out.push(ServerFrame::Error {
                    id: None,
                    message: format!("metrics: {e}"),
                });
                return out;
            }
        };
        let key = TrialKey {
            participant: plan.participant.clone(),
            device: plan.device.clone(),
            block: plan.block,
            phrase: self.trial as u32,
        };
        if let Err(message) = self.service.persist(&key, engine, &metrics) {
            tracing::error!(%message, "could not persist trial");
            out.push(ServerFrame::Error {
                id: None,
                message: format!("store: {message}"),
            });
        }
        out.push(ServerFrame::TrialDone {
            trial: self.trial,
            presented: trial.presented.clone(),
            transcribed: trial.transcribed.clone(),
            metrics: metrics.clone(),
        });
        self.completed.push(metrics);

        let total = plan.phrases.len();
        if self.trial + 1 < total {
            self.trial += 1;
            out.push(self.start_trial());
        } else {
            out.push(ServerFrame::SessionDone { trials: total });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use h4_core::codec::{CodeTable, Symbol};

    const PARTIAL: &str = include_str!("../../core/data/partial.tsv");

    fn service() -> Arc<Service> {
        let kb = Keyboard::new(CodeTable::parse(PARTIAL).unwrap());
        let phrases = PhraseSet::parse("tree\nget bet\nbeget\n").unwrap();
        Service::new(kb, phrases, None, ServiceConfig::default())
    }

    fn key(id: u64, d: &str, t: u64) -> String {
        format!(r#"{{"kind":"keystroke","id":{id},"d":"{d}","t":{t}}}"#)
    }

    #[test]
    fn hello_sends_root_layout() {
        let mut s = service().session();
        let out = s.handle_text(r#"{"kind":"hello","phrases":["e"]}"#);
        let [ServerFrame::Layout { boxes, presented, depth, .. }] = out.as_slice() else {
            panic!("{out:?}")
        };
        assert_eq!(presented, "e");
        assert_eq!(*depth, 0);
        assert_eq!(boxes.get(Direction::Left).len(), 7);
        assert!(boxes.get(Direction::Left).contains(&Symbol::SPACE));
    }

    #[test]
    fn left_right_emits_e_and_enter_finishes() {
        let mut s = service().session();
        s.handle_text(r#"{"kind":"hello","phrases":["e"]}"#);
        let out = s.handle_text(&key(1, "L", 0));
        assert_eq!(out.len(), 1);
        let ServerFrame::State { boxes, depth, .. } = &out[0] else { panic!() };
        assert_eq!(*depth, 1);
        assert_eq!(boxes.get(Direction::Right), &[Symbol::Char('e')]);

        let out = s.handle_text(&key(2, "R", 300));
        assert_eq!(
            out[0],
            ServerFrame::Emitted {
                symbol: Symbol::Char('e'),
                wrong: false
            }
        );
        let ServerFrame::State { transcribed, .. } = &out[1] else { panic!() };
        assert_eq!(transcribed, "e");

        s.handle_text(&key(3, "D", 400));
        let out = s.handle_text(&key(4, "R", 500));
        let kinds: Vec<&str> = out
            .iter()
            .map(|f| match f {
                ServerFrame::Emitted { .. } => "emitted",
                ServerFrame::TrialDone { .. } => "trial-done",
                ServerFrame::SessionDone { .. } => "session-done",
                ServerFrame::State { .. } => "state",
                _ => "other",
            })
            .collect();
        assert_eq!(kinds, ["emitted", "trial-done", "session-done", "state"]);
        let ServerFrame::TrialDone { metrics, .. } = &out[1] else { panic!() };
        assert_eq!(metrics.efficiency, Some(100.0));
    }

    #[test]
    fn rejected_press_leaves_state_unchanged() {
        let mut s = service().session();
        s.handle_text(r#"{"kind":"hello","phrases":["t"]}"#);
        let before = s.handle_text(&key(1, "U", 0));
        // below U only L and R lead anywhere
        let after = s.handle_text(&key(2, "D", 10));
        assert_eq!(after[0], ServerFrame::Rejected { d: Direction::Down });
        let (ServerFrame::State { boxes: a, transcribed: ta, depth: da, .. }, ServerFrame::State { boxes: b, transcribed: tb, depth: db, .. }) =
            (&before[0], &after[1])
        else {
            panic!()
        };
        assert_eq!((a, ta, da), (b, tb, db));
    }

    #[test]
    fn wrong_emission_is_tagged() {
        let mut s = service().session();
        s.handle_text(r#"{"kind":"hello","phrases":["t"]}"#);
        s.handle_text(&key(1, "L", 0));
        let out = s.handle_text(&key(2, "R", 10));
        assert_eq!(
            out[0],
            ServerFrame::Emitted {
                symbol: Symbol::Char('e'),
                wrong: true
            }
        );
    }

    #[test]
    fn ids_must_increase() {
        let mut s = service().session();
        s.handle_text(r#"{"kind":"hello","phrases":["e"]}"#);
        s.handle_text(&key(5, "L", 0));
        let out = s.handle_text(&key(5, "R", 1));
        assert!(matches!(out.as_slice(), [ServerFrame::Error { id: Some(5), .. }]));
        let out = s.handle_text(&key(6, "R", 1));
        assert!(matches!(out.last(), Some(ServerFrame::State { id: 6, .. })));
    }

    #[test]
    fn keystroke_before_hello_and_garbage_are_errors() {
        let mut s = service().session();
        assert!(matches!(s.handle_text(&key(1, "L", 0)).as_slice(), [ServerFrame::Error { id: Some(1), .. }]));
        assert!(matches!(s.handle_text("{nope").as_slice(), [ServerFrame::Error { id: None, .. }]));
        let out = s.handle_text(r#"{"kind":"hello","phrases":["xyz"]}"#);
        assert!(matches!(out.as_slice(), [ServerFrame::Error { .. }]));
    }

    #[test]
    fn sessions_advance_through_phrases_and_report_metrics() {
        let mut s = service().session();
        let out = s.handle_text(r#"{"kind":"hello","count":2,"seed":4}"#);
        let ServerFrame::Layout { trials, .. } = &out[0] else { panic!() };
        assert_eq!(*trials, 2);
        let mut id = 0;
        let mut done = 0;
        for _ in 0..2 {
            loop {
                let engine = s.engine.as_ref().unwrap();
                let d = match engine.expected_next_key() {
                    Some(d) => d,
                    None => Direction::Down,
                };
                id += 1;
                let out = s.handle(ClientFrame::Keystroke { id, d, t: id * 100 });
                if out.iter().any(|f| matches!(f, ServerFrame::TrialDone { .. })) {
                    done += 1;
                    break;
                }
            }
        }
        assert_eq!(done, 2);
        let out = s.handle_text(r#"{"kind":"metrics"}"#);
        let [ServerFrame::Metrics { trials }] = out.as_slice() else { panic!() };
        assert_eq!(trials.len(), 2);
        assert!(trials.iter().all(|m| m.efficiency == Some(100.0)));
    }
}
