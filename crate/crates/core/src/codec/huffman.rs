use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{Code, CodeTable, CodecError, Direction, Symbol, SymbolFrequencyTable, TableSource};

/// Number of zero-weight placeholders needed so that `symbols + padding - 1`
/// is divisible by `arity - 1`.
pub fn padding_count(symbols: usize, arity: usize) -> usize {
    assert!(arity >= 2);
    if symbols <= 1 {
        return 0;
    }
    let r = (symbols - 1) % (arity - 1);
    if r == 0 {
        0
    } else {
        arity - 1 - r
    }
}

/// Builds the 4-ary minimum-redundancy code for `freqs`.
pub fn build_code_table(freqs: &SymbolFrequencyTable) -> Result<CodeTable, CodecError> {
    build_code_table_with_arity(freqs, 4)
}

struct Item {
    weight: f64,
    // zero-frequency real symbols below this node; they act as epsilon weight
    zeros: usize,
    min_symbol: Option<Symbol>,
    children: Vec<usize>,
    symbol: Option<Symbol>,
}

#[derive(Clone, Copy)]
struct Key<'a> {
    item: &'a Item,
    id: usize,
}

impl Key<'_> {
    fn cmp_weight(a: &Item, b: &Item) -> Ordering {
        a.weight
            .total_cmp(&b.weight)
            .then(a.zeros.cmp(&b.zeros))
    }
}

impl PartialEq for Key<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key<'_> {}

impl PartialOrd for Key<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        Key::cmp_weight(self.item, other.item)
            .then(self.item.min_symbol.cmp(&other.item.min_symbol))
            .then(self.id.cmp(&other.id))
    }
}

/// Huffman construction over an alphabet of `arity` directions (2..=4).
///
/// Ties on weight break by the smallest symbol contained in each node.
/// Within a merge, children take directions in canonical order by
/// descending weight, ties again by smallest contained symbol. Padding
/// placeholders never receive a direction.
pub fn build_code_table_with_arity(
    freqs: &SymbolFrequencyTable,
    arity: usize,
) -> Result<CodeTable, CodecError> {
    if !(2..=4).contains(&arity) {
        return Err(CodecError::UnsupportedArity(arity));
    }
    let m = freqs.len();
    if m == 1 {
        let symbol = freqs.entries()[0].0;
        return CodeTable::from_entries(
            [(symbol, Code::new(vec![Direction::Left]).unwrap())],
            TableSource::Generated,
        );
    }

    let mut items: Vec<Item> = freqs
        .normalized()
        .map(|(symbol, p)| Item {
            weight: p,
            zeros: usize::from(p == 0.0),
            min_symbol: Some(symbol),
            children: Vec::new(),
            symbol: Some(symbol),
        })
        .collect();
    for _ in 0..padding_count(m, arity) {
        items.push(Item {
            weight: 0.0,
            zeros: 0,
            min_symbol: None,
            children: Vec::new(),
            symbol: None,
        });
    }

    let mut live: Vec<usize> = (0..items.len()).collect();
    while live.len() > 1 {
        // Items are appended as merges happen, so re-rank the live set each
        // round; alphabets here are tiny.
        let mut heap: BinaryHeap<Reverse<Key>> = live
            .iter()
            .map(|&id| Reverse(Key { item: &items[id], id }))
            .collect();
        let mut picked = Vec::with_capacity(arity);
        for _ in 0..arity {
            match heap.pop() {
                Some(Reverse(k)) => picked.push(k.id),
                None => break,
            }
        }
        let rest: Vec<usize> = heap.into_iter().map(|Reverse(k)| k.id).collect();

        let mut children: Vec<usize> = picked
            .iter()
            .copied()
            .filter(|&id| items[id].min_symbol.is_some())
            .collect();
        children.sort_by(|&a, &b| {
            Key::cmp_weight(&items[b], &items[a])
                .then(items[a].min_symbol.cmp(&items[b].min_symbol))
        });
        let merged = Item {
            weight: picked.iter().map(|&id| items[id].weight).sum(),
            zeros: picked.iter().map(|&id| items[id].zeros).sum(),
            min_symbol: picked.iter().filter_map(|&id| items[id].min_symbol).min(),
            children,
            symbol: None,
        };
        items.push(merged);
        live = rest;
        live.push(items.len() - 1);
    }

    let mut entries = Vec::with_capacity(m);
    let mut stack = vec![(live[0], Vec::new())];
    while let Some((id, path)) = stack.pop() {
        let item = &items[id];
        if let Some(symbol) = item.symbol {
            entries.push((symbol, Code::new(path).expect("m >= 2 puts leaves below root")));
            continue;
        }
        for (i, &child) in item.children.iter().enumerate() {
            let mut p = path.clone();
            p.push(Direction::from_index(i).expect("arity <= 4"));
            stack.push((child, p));
        }
    }
    CodeTable::from_entries(entries, TableSource::Generated)
}
