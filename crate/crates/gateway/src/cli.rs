//! The `h4` command.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use h4_core::codec::{build_code_table, weighted_code_length, CodeTable, SymbolFrequencyTable};
use h4_core::config::Config;
use h4_core::engine::Keyboard;
use h4_core::experiment::{
    make_schedule, record, report, simulate, PhraseSet, Schedule, SessionStore, Typist,
};
use h4_core::metrics::{kspc_theoretical, KspcMode};

use crate::session::{Service, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "h4", version, about = "Four-key Huffman text entry: codes, experiments and the live keyboard service")]
pub struct Cli {
    /// TOML config (seed, count_enter, letters, alphabet, [commands]).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a code table from symbol frequencies.
    GenCodes {
        /// Frequency file (`symbol<TAB>freq`); defaults to the configured symbol set.
        #[arg(long)]
        freqs: Option<PathBuf>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Theoretical keystrokes per character of a table.
    Kspc {
        #[command(flatten)]
        table: TableArg,
        #[arg(long)]
        freqs: Option<PathBuf>,
        #[arg(long, default_value = "weighted")]
        mode: KspcMode,
    },
    /// Counterbalanced device order and phrase assignment.
    Schedule {
        /// Phrase file, one phrase per line; the bundled set when omitted.
        #[arg(long)]
        phrases: Option<PathBuf>,
        #[arg(long, default_value_t = 9)]
        participants: usize,
        #[arg(long, value_delimiter = ',', default_value = "mouse,gamepad,eye-tracker")]
        devices: Vec<String>,
        #[arg(long, default_value_t = 3)]
        blocks: u32,
        #[arg(long, default_value_t = 3)]
        per_block: u32,
        /// Defaults to the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scripted typist over a schedule and record the session.
    Simulate {
        #[arg(long)]
        schedule: PathBuf,
        /// `perfect` or `noisy`.
        #[arg(long, default_value = "perfect")]
        typist: Typist,
        #[command(flatten)]
        table: TableArg,
        #[arg(long, default_value = "session")]
        store: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Summaries, ANOVA and learning curves for a recorded session.
    Analyze {
        #[arg(long, default_value = "session")]
        store: PathBuf,
        /// Replay every stored log against this table before analysing.
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also write plot-ready block means and trend lines.
        #[arg(long)]
        plot_csv: Option<PathBuf>,
    },
    /// Host the live keyboard over WebSocket (`/ws`) and static assets.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct TableArg {
    /// Code table file; generated from the configured symbol set when omitted.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    #[command(flatten)]
    pub table: TableArg,
    /// Phrase file, one phrase per line; the bundled set when omitted.
    #[arg(long)]
    pub phrases: Option<PathBuf>,
    /// Session directory for completed trials; nothing is stored when omitted.
    #[arg(long)]
    pub store: Option<PathBuf>,
    /// Directory of browser client files.
    #[arg(long)]
    pub assets: Option<PathBuf>,
    /// Phrases drawn for a session whose hello names none.
    #[arg(long, default_value_t = 3)]
    pub per_session: usize,
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(Config::default()),
    }
}

fn load_table(arg: &TableArg, config: &Config) -> Result<CodeTable> {
    match &arg.table {
        Some(p) => CodeTable::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(config.code_table()?),
    }
}

fn load_freqs(path: Option<&Path>, config: &Config) -> Result<SymbolFrequencyTable> {
    match path {
        Some(p) => SymbolFrequencyTable::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(config.frequency_table()?),
    }
}

fn load_phrases(path: Option<&Path>) -> Result<PhraseSet> {
    match path {
        Some(p) => PhraseSet::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(PhraseSet::builtin()),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::GenCodes { freqs, out } => {
            let freqs = load_freqs(freqs.as_deref(), &config)?;
            let table = build_code_table(&freqs)?;
            write_out(out.as_deref(), &table.to_text())?;
            eprintln!(
                "{} symbols, weighted length {:.4}, table {}",
                table.len(),
                weighted_code_length(&table, &freqs)?,
                &table.hash()[..12]
            );
        }
        Command::Kspc { table, freqs, mode } => {
            let table = load_table(&table, &config)?;
            let freqs = load_freqs(freqs.as_deref(), &config)?;
            println!("{}", kspc_theoretical(&table, &freqs, mode)?);
        }
        Command::Schedule {
            phrases,
            participants,
            devices,
            blocks,
            per_block,
            seed,
            out,
        } => {
            let phrases = load_phrases(phrases.as_deref())?;
            let schedule = make_schedule(
                &phrases,
                participants,
                &devices,
                blocks,
                per_block,
                seed.unwrap_or(config.seed),
            )?;
            let mut json = serde_json::to_string_pretty(&schedule)?;
            json.push('\n');
            write_out(out.as_deref(), &json)?;
        }
        Command::Simulate {
            schedule,
            typist,
            table,
            store,
            seed,
        } => {
            let text = std::fs::read_to_string(&schedule)
                .with_context(|| format!("reading {}", schedule.display()))?;
            let schedule: Schedule = serde_json::from_str(&text).context("parsing schedule")?;
            let keyboard = Keyboard::new(load_table(&table, &config)?);
            let trials = simulate(&schedule, &keyboard, typist, config.count_enter, seed.unwrap_or(config.seed))?;
            let mut session = SessionStore::open(&store)?;
            record(&mut session, &trials, config.count_enter)?;
            eprintln!("recorded {} trials in {}", trials.len(), store.display());
        }
        Command::Analyze {
            store,
            verify,
            json,
            plot_csv,
        } => {
            let trials = SessionStore::load(&store).with_context(|| format!("loading {}", store.display()))?;
            if let Some(path) = verify {
                let keyboard = Keyboard::new(CodeTable::load(&path)?);
                for t in &trials {
                    t.verify(&keyboard)?;
                }
                eprintln!("verified {} trials by replay", trials.len());
            }
            let report = report(&trials)?;
            print!("{}", report.to_text());
            if let Some(path) = json {
                let file = BufWriter::new(File::create(&path)?);
                serde_json::to_writer_pretty(file, &report)?;
            }
            if let Some(path) = plot_csv {
                std::fs::write(&path, report.plot_csv())?;
            }
        }
        Command::Serve(args) => serve(args, &config)?,
    }
    Ok(())
}

fn serve(args: ServeArgs, config: &Config) -> Result<()> {
    let keyboard = Keyboard::new(load_table(&args.table, config)?);
    let phrases = load_phrases(args.phrases.as_deref())?;
    if args.per_session == 0 || args.per_session > phrases.len() {
        bail!("--per-session must be between 1 and {}", phrases.len());
    }
    for p in phrases.phrases() {
        keyboard.check_encodable(p).with_context(|| format!("phrase {p:?}"))?;
    }
    let store = args.store.as_ref().map(SessionStore::open).transpose()?;
    let service = Service::new(
        keyboard,
        phrases,
        store,
        ServiceConfig {
            count_enter: config.count_enter,
            seed: config.seed,
            phrases_per_session: args.per_session,
        },
    );
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(args.addr)
            .await
            .with_context(|| format!("binding {}", args.addr))?;
        crate::server::serve(listener, service, args.assets).await?;
        Ok(())
    })
}
