use std::collections::BTreeSet;

use proptest::prelude::*;
use regcount::generator::{corpus_instance, GenConfig};
use regcount::sweep::Extremum;
use regcount::{CounterDfa, DomainStore, Mode, StateId, SweepTable, Symbol};

fn small_cfg(seed: u64) -> GenConfig {
    GenConfig {
        max_states: 5,
        alphabet_size: 2..=4,
        length: 0..=6,
        seed,
        ..GenConfig::default()
    }
}

fn words(domains: &[Vec<Symbol>]) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    for d in domains {
        out = out
            .into_iter()
            .flat_map(|w| {
                d.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

fn domains(store: &DomainStore) -> Vec<Vec<Symbol>> {
    store.vars().iter().map(|d| d.iter().collect()).collect()
}

fn fold(cur: Option<u64>, c: u64, ext: Extremum) -> Option<u64> {
    Some(match (cur, ext) {
        (None, _) => c,
        (Some(x), Extremum::Min) => x.min(c),
        (Some(x), Extremum::Max) => x.max(c),
    })
}

/// Forward row `i` by enumerating all admissible prefixes of length `i`.
fn brute_pre(dfa: &CounterDfa, store: &DomainStore, i: usize, ext: Extremum) -> Vec<Option<u64>> {
    let mut row = vec![None; dfa.num_states()];
    for w in words(&domains(store)[..i]) {
        let r = dfa.run(&w).unwrap();
        row[r.end_state.0] = fold(row[r.end_state.0], r.counter, ext);
    }
    row
}

/// Backward row `i` (1-based) by enumerating suffixes `x_i..x_n` from every state.
fn brute_suf(dfa: &CounterDfa, store: &DomainStore, i: usize, ext: Extremum) -> Vec<Option<u64>> {
    let n = store.len();
    let finals: BTreeSet<StateId> = words(&domains(store))
        .iter()
        .map(|w| dfa.run(w).unwrap().end_state)
        .collect();
    let mut row = vec![None; dfa.num_states()];
    for q in dfa.states() {
        for w in words(&domains(store)[i - 1..n]) {
            let r = dfa.run_from(q, &w).unwrap();
            if finals.contains(&r.end_state) {
                row[q.0] = fold(row[q.0], r.counter, ext);
            }
        }
    }
    row
}

fn table_row(t: &SweepTable, i: usize, pre: bool, ext: Extremum) -> Vec<Option<u64>> {
    let row = match (pre, ext) {
        (true, Extremum::Min) => t.pre_min(i),
        (true, Extremum::Max) => t.pre_max(i),
        (false, Extremum::Min) => t.suf_min(i),
        (false, Extremum::Max) => t.suf_max(i),
    };
    row.values().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rows_match_enumeration(seed in any::<u64>()) {
        let inst = corpus_instance::<u64>(&small_cfg(seed), 0, Mode::AtMost).unwrap();
        let (dfa, store) = (&inst.dfa, &inst.store);
        let t = SweepTable::compute(dfa, store).unwrap();
        let n = store.len();
        for ext in [Extremum::Min, Extremum::Max] {
            for i in 0..=n {
                prop_assert_eq!(table_row(&t, i, true, ext), brute_pre(dfa, store, i, ext));
            }
            for i in 1..=n + 1 {
                prop_assert_eq!(table_row(&t, i, false, ext), brute_suf(dfa, store, i, ext));
            }
        }
    }

    #[test]
    fn forward_and_backward_agree(seed in any::<u64>()) {
        let inst = corpus_instance::<u64>(&small_cfg(seed), 1, Mode::AtMost).unwrap();
        let t = SweepTable::compute(&inst.dfa, &inst.store).unwrap();
        let q0 = inst.dfa.start();
        prop_assert_eq!(t.global_min(), t.suf_min(1).get(q0));
        prop_assert_eq!(t.global_max(), t.suf_max(1).get(q0));
    }

    #[test]
    fn ground_rows_collapse(seed in any::<u64>()) {
        let inst = corpus_instance::<u64>(&small_cfg(seed), 2, Mode::AtMost).unwrap();
        let word: Vec<Symbol> = inst.store.vars().iter().map(|d| d.first().unwrap()).collect();
        let mut ground = inst.store.clone();
        for (i, &s) in word.iter().enumerate() {
            ground.assign_symbol(i, s);
        }
        let t = SweepTable::compute(&inst.dfa, &ground).unwrap();
        for i in 0..=ground.len() {
            prop_assert_eq!(t.pre_min(i), t.pre_max(i));
        }
        let run = inst.dfa.run(&word).unwrap();
        let last: Vec<_> = t.pre_min(ground.len()).reachable().collect();
        prop_assert_eq!(last, vec![(run.end_state, run.counter)]);
        prop_assert_eq!(t.suf_min(1).get(inst.dfa.start()), Some(run.counter));
    }

    #[test]
    fn shrinking_domains_tightens_rows(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let inst = corpus_instance::<u64>(&small_cfg(seed), 3, Mode::AtMost).unwrap();
        let candidates: Vec<(usize, Symbol)> = inst.store.vars().iter().enumerate()
            .filter(|(_, d)| d.len() > 1)
            .flat_map(|(i, d)| d.iter().map(move |s| (i, s)))
            .collect();
        prop_assume!(!candidates.is_empty());
        let (i, s) = *pick.get(&candidates);
        let mut smaller = inst.store.clone();
        smaller.remove_symbol(i, s);
        let big = SweepTable::compute(&inst.dfa, &inst.store).unwrap();
        let small = SweepTable::compute(&inst.dfa, &smaller).unwrap();
        let n = inst.store.len();
        // unreachable ranks as +inf in min rows and -inf in max rows
        let min_le = |a: Option<u64>, b: Option<u64>| match (a, b) { (_, None) => true, (None, Some(_)) => false, (Some(x), Some(y)) => x <= y };
        let max_ge = |a: Option<u64>, b: Option<u64>| match (a, b) { (_, None) => true, (None, Some(_)) => false, (Some(x), Some(y)) => x >= y };
        for q in inst.dfa.states() {
            for k in 0..=n {
                prop_assert!(min_le(big.pre_min(k).get(q), small.pre_min(k).get(q)));
                prop_assert!(max_ge(big.pre_max(k).get(q), small.pre_max(k).get(q)));
            }
            for k in 1..=n + 1 {
                prop_assert!(min_le(big.suf_min(k).get(q), small.suf_min(k).get(q)));
                prop_assert!(max_ge(big.suf_max(k).get(q), small.suf_max(k).get(q)));
            }
        }
    }
}

#[test]
fn generic_counter_types_agree() {
    for k in 0..200 {
        let inst = corpus_instance::<u64>(&small_cfg(5), k, Mode::AtMost).unwrap();
        let dfa32 = inst.dfa.map_counter::<u32>().unwrap();
        let store32 = regcount::domains::DomainStore::<u32>::new(
            inst.store.vars().to_vec(),
            inst.store.counter().iter().map(|&v| v as u32),
        );
        let a = SweepTable::compute(&inst.dfa, &inst.store).unwrap();
        let b = regcount::sweep::SweepTable::compute(&dfa32, &store32).unwrap();
        assert_eq!(a.global_min(), b.global_min().map(u64::from));
        assert_eq!(a.global_max(), b.global_max().map(u64::from));
    }
}
