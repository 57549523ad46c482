mod common;

use common::{brute_force_min_length, entropy4, table_from};
use h4_core::codec::{
    build_code_table, entropy_base4, padding_count, text_symbols, weighted_code_length, CodeTable,
    Direction, Symbol,
};
use proptest::prelude::*;

fn weights(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..1.0, 2..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_code_is_optimal(w in weights(6)) {
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        let got = weighted_code_length(&table, &freqs).unwrap();
        prop_assert!((got - brute_force_min_length(&w)).abs() <= 1e-12);
    }

    #[test]
    fn integer_weights_with_ties_are_optimal(w in prop::collection::vec(1u8..4, 2..=6)) {
        let w: Vec<f64> = w.into_iter().map(f64::from).collect();
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        let got = weighted_code_length(&table, &freqs).unwrap();
        prop_assert!((got - brute_force_min_length(&w)).abs() <= 1e-12);
    }

    #[test]
    fn entropy_sandwich(w in weights(40)) {
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        let len = weighted_code_length(&table, &freqs).unwrap();
        let h = entropy4(&w);
        prop_assert!((entropy_base4(&freqs) - h).abs() < 1e-12);
        prop_assert!(h <= len + 1e-12);
        prop_assert!(len < h + 1.0);
    }

    #[test]
    fn heavier_symbols_never_get_longer_codes(w in weights(30)) {
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        for &(a, fa) in freqs.entries() {
            for &(b, fb) in freqs.entries() {
                if fa > fb {
                    prop_assert!(table.code(a).unwrap().len() <= table.code(b).unwrap().len());
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic(w in weights(30)) {
        let a = build_code_table(&table_from(&w)).unwrap();
        let b = build_code_table(&table_from(&w)).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
        prop_assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn generated_codes_are_prefix_free_and_cover_every_symbol(w in weights(40)) {
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        prop_assert_eq!(table.len(), freqs.len());
        let codes: Vec<String> = table.iter().map(|(_, c)| c.to_string()).collect();
        for (i, a) in codes.iter().enumerate() {
            for (j, b) in codes.iter().enumerate() {
                if i != j {
                    prop_assert!(!b.starts_with(a.as_str()), "{} prefixes {}", a, b);
                }
            }
        }
        // reloading the text form gives back the same table
        prop_assert_eq!(CodeTable::parse(&table.to_text()).unwrap(), table);
    }

    #[test]
    fn encode_decode_round_trip(w in weights(26), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..60)) {
        let freqs = table_from(&w);
        let table = build_code_table(&freqs).unwrap();
        let symbols: Vec<Symbol> = freqs.symbols().collect();
        let text: Vec<Symbol> = picks.iter().map(|i| *i.get(&symbols)).collect();
        let keys = table.encode(&text).unwrap();
        prop_assert_eq!(table.decode(&keys).unwrap(), text);
    }

    #[test]
    fn padding_completes_the_merge_tree(n in 1usize..200) {
        let d = padding_count(n, 4);
        prop_assert!(d < 3);
        prop_assert_eq!((n + d - 1) % 3, 0);
    }

    #[test]
    fn partitions_split_the_subtree_exactly(w in weights(40)) {
        let table = build_code_table(&table_from(&w)).unwrap();
        let tree = table.tree();
        for id in tree.node_ids() {
            if tree.leaf_symbol(id).is_some() {
                continue;
            }
            let mut below: Vec<Symbol> = tree.leaves(id).to_vec();
            let mut union: Vec<Symbol> = tree.partition(id).iter().flat_map(|b| b.iter().copied()).collect();
            below.sort();
            union.sort();
            prop_assert_eq!(&below, &union);
            for (i, part) in tree.partition(id).iter().enumerate() {
                let d = Direction::from_index(i).unwrap();
                for s in *part {
                    let code = table.code(*s).unwrap();
                    let mut prefix = tree.path(id).to_vec();
                    prefix.push(d);
                    prop_assert!(code.keys().starts_with(&prefix));
                }
            }
        }
    }
}

#[test]
fn six_symbol_fixture_is_optimal() {
    let w = [0.4, 0.2, 0.15, 0.1, 0.1, 0.05];
    let freqs = table_from(&w);
    let table = build_code_table(&freqs).unwrap();
    let got = weighted_code_length(&table, &freqs).unwrap();
    assert!((got - brute_force_min_length(&w)).abs() < 1e-12);
    assert!((got - 1.25).abs() < 1e-12);
}

#[test]
fn oracle_agrees_with_hand_cases() {
    assert_eq!(brute_force_min_length(&[1.0, 1.0, 1.0, 1.0]), 1.0);
    // five equal symbols: three at depth one, two at depth two
    assert!((brute_force_min_length(&[1.0; 5]) - 7.0 / 5.0).abs() < 1e-15);
}

#[test]
fn text_round_trips_through_default_table() {
    let table = h4_core::config::Config::default().code_table().unwrap();
    let text = text_symbols("the quick brown fox jumps over the lazy dog");
    assert_eq!(table.decode(&table.encode(&text).unwrap()).unwrap(), text);
}
