//! Oracle-backed checks of one instance, as run by the fuzzer.

use std::collections::BTreeSet;
use std::fmt;

use crate::domains::Removal;
use crate::error::Result;
use crate::instance::Instance;
use crate::num::Counter;
use crate::oracle::check_dc;
use crate::propagators::{propagate, propagate_decomposed, propagate_exact, Mode, Semantics};

/// A property that failed on an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<C> {
    /// A supported value was removed.
    Unsound { mode: Mode, removal: Removal<C> },
    /// The propagator failed although a solution exists.
    FailedButSatisfiable { mode: Mode },
    /// An unsupported value survived a domain-consistent propagator.
    Gap { mode: Mode, removal: Removal<C> },
    /// A domain-consistent propagator accepted an unsatisfiable store.
    MissedFailure { mode: Mode },
    /// A second run of a domain-consistent propagator changed something.
    NotIdempotent { mode: Mode },
    /// The decomposition removed a value the exact propagator kept.
    WeakerThanDecomposition { removal: Removal<C> },
    /// The decomposition failed but the exact propagator did not.
    MissedDecompositionFailure,
}

impl<C: Counter> fmt::Display for Violation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unsound { mode, removal } => write!(f, "{mode}: unsound removal {removal:?}"),
            Violation::FailedButSatisfiable { mode } => write!(f, "{mode}: failed on a satisfiable store"),
            Violation::Gap { mode, removal } => write!(f, "{mode}: unsupported value kept {removal:?}"),
            Violation::MissedFailure { mode } => write!(f, "{mode}: missed a failure"),
            Violation::NotIdempotent { mode } => write!(f, "{mode}: second run removed values"),
            Violation::WeakerThanDecomposition { removal } => {
                write!(f, "exact: kept {removal:?} removed by the decomposition")
            }
            Violation::MissedDecompositionFailure => write!(f, "exact: missed a failure the decomposition found"),
        }
    }
}

/// Checks a domain-consistent propagator (`AtMost` or `AtLeast`):
/// soundness, completeness and idempotency.
pub fn check_bound<C: Counter>(inst: &Instance<C>, mode: Mode, cap: u64) -> Result<Vec<Violation<C>>> {
    let mut store = inst.store.snapshot();
    let out = propagate(&inst.dfa, &mut store, mode)?;
    let verdict = check_dc(&inst.dfa, &inst.store, mode.semantics(), &out, cap)?;
    let mut v: Vec<Violation<C>> = Vec::new();
    v.extend(verdict.unsound.into_iter().map(|removal| Violation::Unsound { mode, removal }));
    v.extend(verdict.gaps.into_iter().map(|removal| Violation::Gap { mode, removal }));
    if verdict.failed_but_satisfiable {
        v.push(Violation::FailedButSatisfiable { mode });
    }
    if verdict.missed_failure {
        v.push(Violation::MissedFailure { mode });
    }
    if !out.failed() {
        let again = propagate(&inst.dfa, &mut store, mode)?;
        if again.failed() || !again.removals.is_empty() {
            v.push(Violation::NotIdempotent { mode });
        }
    }
    Ok(v)
}

/// Checks the exact propagator: soundness, and that it removes everything
/// the decomposition removes.
pub fn check_exact<C: Counter>(inst: &Instance<C>, cap: u64) -> Result<Vec<Violation<C>>> {
    let mut v: Vec<Violation<C>> = Vec::new();
    let mut store = inst.store.snapshot();
    let exact = propagate_exact(&inst.dfa, &mut store)?;
    let verdict = check_dc(&inst.dfa, &inst.store, Semantics::Exact, &exact, cap)?;
    v.extend(
        verdict
            .unsound
            .into_iter()
            .map(|removal| Violation::Unsound { mode: Mode::Exact, removal }),
    );
    if verdict.failed_but_satisfiable {
        v.push(Violation::FailedButSatisfiable { mode: Mode::Exact });
    }

    let mut dec_store = inst.store.snapshot();
    let dec = propagate_decomposed(&inst.dfa, &mut dec_store)?;
    if dec.failed() && !exact.failed() {
        v.push(Violation::MissedDecompositionFailure);
    }
    if !exact.failed() && !dec.failed() {
        let ours: BTreeSet<Removal<C>> = exact.removals.iter().copied().collect();
        v.extend(
            dec.removals
                .iter()
                .filter(|r| !ours.contains(r))
                .map(|&removal| Violation::WeakerThanDecomposition { removal }),
        );
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{corpus_instance, GenConfig};

    #[test]
    fn small_corpus_is_clean() {
        let cfg = GenConfig {
            length: 1..=5,
            seed: 1,
            ..GenConfig::default()
        };
        for k in 0..100 {
            let inst = corpus_instance::<u64>(&cfg, k, Mode::AtMost).unwrap();
            assert!(check_bound(&inst, Mode::AtMost, 1 << 20).unwrap().is_empty());
            assert!(check_bound(&inst, Mode::AtLeast, 1 << 20).unwrap().is_empty());
            assert!(check_exact(&inst, 1 << 20).unwrap().is_empty());
        }
    }
}
