//! Exhaustive enumeration of ground sequences.
//!
//! This is the reference every consistency claim is checked against. It
//! shares nothing with the sweep code: it walks every admissible sequence
//! and runs the automaton transition by transition.

use std::collections::BTreeSet;

use crate::automaton::{CounterDfa, StateId, Symbol};
use crate::domains::{CounterDomain, DomainStore, Removal};
use crate::error::{Error, Result};
use crate::num::Counter;
use crate::propagators::{PropagationOutcome, Semantics};
use crate::signature::{NativeDomain, SignatureMap};

/// Default limit on the number of ground sequences enumerated.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Exact supports under one semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport<C> {
    /// Supported symbols per 0-based position.
    pub positions: Vec<BTreeSet<Symbol>>,
    pub counter: BTreeSet<C>,
    /// Number of solutions, counting each `(sequence, N)` pair.
    pub solutions: u64,
    pub satisfiable: bool,
}

impl<C: Counter> SupportReport<C> {
    pub fn supports(&self, removal: &Removal<C>) -> bool {
        match removal {
            Removal::Symbol { position, symbol } => self.positions[*position].contains(symbol),
            Removal::Counter(v) => self.counter.contains(v),
        }
    }
}

fn check_cap(count: u128, cap: u64) -> Result<()> {
    if count > u128::from(cap) {
        Err(Error::CapExceeded { count, cap })
    } else {
        Ok(())
    }
}

fn walk<C: Counter>(
    dfa: &CounterDfa<C>,
    domains: &[Vec<Symbol>],
    state: StateId,
    counter: C,
    path: &mut Vec<Symbol>,
    visit: &mut dyn FnMut(&[Symbol], C),
) -> Result<()> {
    let depth = path.len();
    if depth == domains.len() {
        visit(path, counter);
        return Ok(());
    }
    for &s in &domains[depth] {
        let next = dfa.next_state(state, s);
        let c = counter.add_checked(dfa.increment(state, s))?;
        path.push(s);
        walk(dfa, domains, next, c, path, visit)?;
        path.pop();
    }
    Ok(())
}

/// Calls `visit(sequence, final_counter)` for every admissible sequence.
pub fn for_each_sequence<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    cap: u64,
    mut visit: impl FnMut(&[Symbol], C),
) -> Result<()> {
    check_cap(store.sequence_count(), cap)?;
    let domains: Vec<Vec<Symbol>> = store.vars().iter().map(|d| d.iter().collect()).collect();
    let mut path = Vec::with_capacity(domains.len());
    walk(dfa, &domains, dfa.start(), C::zero(), &mut path, &mut visit)
}

/// Computes exact supports by enumerating every admissible sequence.
pub fn enumerate<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    semantics: Semantics,
    cap: u64,
) -> Result<SupportReport<C>> {
    let mut report = SupportReport {
        positions: vec![BTreeSet::new(); store.len()],
        counter: BTreeSet::new(),
        solutions: 0,
        satisfiable: false,
    };
    let n_values: Vec<C> = store.counter().iter().copied().collect();
    for_each_sequence(dfa, store, cap, |seq, c| {
        let mut any = false;
        for &v in &n_values {
            if semantics.accepts(c, v) {
                any = true;
                report.solutions += 1;
                report.counter.insert(v);
            }
        }
        if any {
            for (i, &s) in seq.iter().enumerate() {
                report.positions[i].insert(s);
            }
        }
    })?;
    report.satisfiable = report.solutions > 0;
    Ok(report)
}

/// All `(sequence, N)` solutions, in lexicographic order.
pub fn solutions<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    semantics: Semantics,
    cap: u64,
) -> Result<Vec<(Vec<Symbol>, C)>> {
    let mut out = Vec::new();
    let n_values: Vec<C> = store.counter().iter().copied().collect();
    for_each_sequence(dfa, store, cap, |seq, c| {
        for &v in &n_values {
            if semantics.accepts(c, v) {
                out.push((seq.to_vec(), v));
            }
        }
    })?;
    out.sort();
    Ok(out)
}

/// Comparison of a propagator run with the exact supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<C> {
    /// Removed although supported.
    pub unsound: Vec<Removal<C>>,
    /// Kept although unsupported.
    pub gaps: Vec<Removal<C>>,
    /// The propagator failed on a satisfiable store.
    pub failed_but_satisfiable: bool,
    /// The propagator succeeded on an unsatisfiable store.
    pub missed_failure: bool,
}

impl<C> Verdict<C> {
    pub fn is_sound(&self) -> bool {
        self.unsound.is_empty() && !self.failed_but_satisfiable
    }

    pub fn is_domain_consistent(&self) -> bool {
        self.is_sound() && self.gaps.is_empty() && !self.missed_failure
    }
}

/// Checks `outcome`, produced by propagating `before`, against the oracle.
pub fn check_dc<C: Counter>(
    dfa: &CounterDfa<C>,
    before: &DomainStore<C>,
    semantics: Semantics,
    outcome: &PropagationOutcome<C>,
    cap: u64,
) -> Result<Verdict<C>> {
    let initial = enumerate(dfa, before, semantics, cap)?;
    let unsound = outcome
        .removals
        .iter()
        .copied()
        .filter(|r| initial.supports(r))
        .collect();
    let mut verdict = Verdict {
        unsound,
        gaps: Vec::new(),
        failed_but_satisfiable: outcome.failed() && initial.satisfiable,
        missed_failure: false,
    };
    if outcome.failed() {
        return Ok(verdict);
    }
    let after = before.replay(&outcome.removals);
    let report = enumerate(dfa, &after, semantics, cap)?;
    verdict.missed_failure = !report.satisfiable;
    for (i, d) in after.vars().iter().enumerate() {
        for s in d.iter() {
            if !report.positions[i].contains(&s) {
                verdict.gaps.push(Removal::Symbol { position: i, symbol: s });
            }
        }
    }
    for &v in after.counter() {
        if !report.counter.contains(&v) {
            verdict.gaps.push(Removal::Counter(v));
        }
    }
    Ok(verdict)
}

/// Exact supports over native values seen through a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NativeSupport<C> {
    pub positions: Vec<BTreeSet<i64>>,
    pub counter: BTreeSet<C>,
    pub solutions: u64,
}

/// Enumerates every native assignment, maps it through `sig` and runs the
/// automaton on the image.
pub fn enumerate_native<C: Counter>(
    dfa: &CounterDfa<C>,
    sig: &SignatureMap,
    natives: &[NativeDomain],
    counter: &CounterDomain<C>,
    semantics: Semantics,
    cap: u64,
) -> Result<NativeSupport<C>> {
    let count = natives
        .iter()
        .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    check_cap(count, cap)?;
    let domains: Vec<Vec<i64>> = natives.iter().map(|d| d.iter().copied().collect()).collect();
    let mut support = NativeSupport {
        positions: vec![BTreeSet::new(); natives.len()],
        counter: BTreeSet::new(),
        solutions: 0,
    };
    let mut assignment = vec![0i64; natives.len()];
    native_walk(dfa, sig, &domains, counter, semantics, 0, &mut assignment, &mut support)?;
    Ok(support)
}

#[allow(clippy::too_many_arguments)]
fn native_walk<C: Counter>(
    dfa: &CounterDfa<C>,
    sig: &SignatureMap,
    domains: &[Vec<i64>],
    counter: &CounterDomain<C>,
    semantics: Semantics,
    depth: usize,
    assignment: &mut Vec<i64>,
    support: &mut NativeSupport<C>,
) -> Result<()> {
    if depth == domains.len() {
        let word = assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| sig.image(i, v))
            .collect::<Result<Vec<_>>>()?;
        let c = dfa.run(&word)?.counter;
        let mut any = false;
        for &v in counter {
            if semantics.accepts(c, v) {
                any = true;
                support.solutions += 1;
                support.counter.insert(v);
            }
        }
        if any {
            for (i, &v) in assignment.iter().enumerate() {
                support.positions[i].insert(v);
            }
        }
        return Ok(());
    }
    for &v in &domains[depth] {
        assignment[depth] = v;
        native_walk(dfa, sig, domains, counter, semantics, depth + 1, assignment, support)?;
    }
    Ok(())
}
