//! Propagators for regular counting constraints.
//!
//! * `propagate_atmost` / `propagate_atleast` enforce domain consistency on
//!   `counter(X) <= N` and `counter(X) >= N` in a single pass.
//! * `propagate_exact` filters `counter(X) = N` using per-state
//!   `[min, max]` completion intervals. It is sound but incomplete
//!   (domain consistency is NP-hard here) and iterates to its own fixpoint.
//! * `propagate_decomposed` runs the two domain-consistent propagators to a
//!   common fixpoint; it is the baseline the exact propagator is measured
//!   against.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{CounterDfa, Symbol};
use crate::domains::{Change, DomainStore, Removal};
use crate::error::{Error, Result};
use crate::num::{sum3, Counter};
use crate::sweep::{global_max, global_min, Extremum, HalfTable, SweepTable};

/// Which constraint is posted, and which propagator enforces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    AtMost,
    AtLeast,
    Exact,
    /// `Exact` semantics, propagated by the atmost/atleast decomposition.
    DecomposedExact,
}

/// The relation between the final counter and `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    AtMost,
    AtLeast,
    Exact,
}

impl Semantics {
    /// Does final counter `c` satisfy the relation with `N = v`?
    #[inline]
    pub fn accepts<C: Ord>(self, c: C, v: C) -> bool {
        match self {
            Semantics::AtMost => c <= v,
            Semantics::AtLeast => c >= v,
            Semantics::Exact => c == v,
        }
    }
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::AtMost, Mode::AtLeast, Mode::Exact, Mode::DecomposedExact];

    pub fn semantics(self) -> Semantics {
        match self {
            Mode::AtMost => Semantics::AtMost,
            Mode::AtLeast => Semantics::AtLeast,
            Mode::Exact | Mode::DecomposedExact => Semantics::Exact,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::AtMost => "atmost",
            Mode::AtLeast => "atleast",
            Mode::Exact => "exact",
            Mode::DecomposedExact => "decomposed",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "atmost" => Ok(Mode::AtMost),
            "atleast" => Ok(Mode::AtLeast),
            "exact" => Ok(Mode::Exact),
            "decomposed" | "decomposed_exact" | "decomposed-exact" => Ok(Mode::DecomposedExact),
            other => Err(Error::InvalidInstance(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Fixpoint,
    Failed,
}

/// Result of one propagator call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationOutcome<C> {
    pub status: Status,
    /// Removals performed by this call, in order.
    pub removals: Vec<Removal<C>>,
    /// Number of sweep rebuilds.
    pub passes: usize,
}

impl<C> PropagationOutcome<C> {
    pub fn failed(&self) -> bool {
        self.status == Status::Failed
    }
}

struct Run<'s, C> {
    store: &'s mut DomainStore<C>,
    log_start: usize,
    passes: usize,
}

impl<'s, C: Counter> Run<'s, C> {
    fn new(store: &'s mut DomainStore<C>) -> Self {
        let log_start = store.log().len();
        Run {
            store,
            log_start,
            passes: 0,
        }
    }

    fn finish(self, status: Status) -> PropagationOutcome<C> {
        PropagationOutcome {
            status,
            removals: self.store.log()[self.log_start..].to_vec(),
            passes: self.passes,
        }
    }
}

/// Is there an admissible sequence whose counter is at most `max(dom(N))`?
pub fn feasible_atmost<C: Counter>(min: &HalfTable<C>, store: &DomainStore<C>) -> bool {
    match (global_min(min), store.max_counter()) {
        (Some(g), Ok(hi)) => g <= hi,
        _ => false,
    }
}

/// Is there an admissible sequence whose counter is at least `min(dom(N))`?
pub fn feasible_atleast<C: Counter>(max: &HalfTable<C>, store: &DomainStore<C>) -> bool {
    match (global_max(max), store.min_counter()) {
        (Some(g), Ok(lo)) => g >= lo,
        _ => false,
    }
}

fn extremal_cost<C: Counter>(
    position: usize,
    symbol: Symbol,
    half: &HalfTable<C>,
    dfa: &CounterDfa<C>,
    ext: Extremum,
) -> Result<Option<C>> {
    let mut best: Option<C> = None;
    for (q, c) in half.pre(position - 1).reachable() {
        let (r, inc) = dfa.step(q, symbol);
        if let Some(total) = sum3(Some(c), inc, half.suf(position + 1).get(r))? {
            best = Some(match (best, ext) {
                (None, _) => total,
                (Some(b), Extremum::Min) => b.min(total),
                (Some(b), Extremum::Max) => b.max(total),
            });
        }
    }
    Ok(best)
}

/// Least counter value over admissible sequences with `x_position = symbol`
/// (`position` is 1-based). `None` when no such sequence exists.
pub fn min_cost<C: Counter>(
    position: usize,
    symbol: Symbol,
    min: &HalfTable<C>,
    dfa: &CounterDfa<C>,
) -> Result<Option<C>> {
    extremal_cost(position, symbol, min, dfa, Extremum::Min)
}

/// Greatest counter value over admissible sequences with `x_position = symbol`.
pub fn max_cost<C: Counter>(
    position: usize,
    symbol: Symbol,
    max: &HalfTable<C>,
    dfa: &CounterDfa<C>,
) -> Result<Option<C>> {
    extremal_cost(position, symbol, max, dfa, Extremum::Max)
}

/// Domain-consistent filtering for `counter(X) <= N`.
pub fn propagate_atmost<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
) -> Result<PropagationOutcome<C>> {
    propagate_bound(dfa, store, Extremum::Min)
}

/// Domain-consistent filtering for `counter(X) >= N`.
pub fn propagate_atleast<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
) -> Result<PropagationOutcome<C>> {
    propagate_bound(dfa, store, Extremum::Max)
}

// `Min` enforces atmost, `Max` enforces atleast.
fn propagate_bound<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
    ext: Extremum,
) -> Result<PropagationOutcome<C>> {
    let mut run = Run::new(store);
    if run.store.has_empty_domain() {
        return Ok(run.finish(Status::Failed));
    }
    let half = HalfTable::compute(dfa, run.store, ext)?;
    run.passes += 1;
    let feasible = match ext {
        Extremum::Min => feasible_atmost(&half, run.store),
        Extremum::Max => feasible_atleast(&half, run.store),
    };
    if !feasible {
        return Ok(run.finish(Status::Failed));
    }
    // the bound of N that every kept value must reach
    let (bound, global) = match ext {
        Extremum::Min => (run.store.max_counter()?, global_min(&half)),
        Extremum::Max => (run.store.min_counter()?, global_max(&half)),
    };
    let global = global.expect("feasible implies a reachable final state");
    let violates = |c: C| match ext {
        Extremum::Min => c > bound,
        Extremum::Max => c < bound,
    };

    for i in 1..=run.store.len() {
        let symbols: Vec<Symbol> = run.store.var(i - 1).iter().collect();
        for s in symbols {
            let cost = extremal_cost(i, s, &half, dfa, ext)?;
            if cost.is_none_or(violates) && run.store.remove_symbol(i - 1, s) == Change::Emptied {
                return Ok(run.finish(Status::Failed));
            }
        }
    }

    let doomed: Vec<C> = match ext {
        Extremum::Min => run.store.counter().range(..global).copied().collect(),
        Extremum::Max => run
            .store
            .counter()
            .iter()
            .copied()
            .filter(|&v| v > global)
            .collect(),
    };
    for v in doomed {
        if run.store.remove_counter(v) == Change::Emptied {
            return Ok(run.finish(Status::Failed));
        }
    }
    Ok(run.finish(Status::Fixpoint))
}

fn meets<C: Counter>(store: &DomainStore<C>, lo: C, hi: C) -> bool {
    lo <= hi && store.counter().range(lo..=hi).next().is_some()
}

/// Incomplete filtering for `counter(X) = N`, iterated until stable.
///
/// A value `l` of `x_i` is removed when, for every state `q` reachable
/// after `i - 1` steps, the interval of completion costs through `q` and
/// `l` misses `dom(N)`. A value of `N` is removed when no state reachable
/// after `n` steps has a `[min, max]` interval covering it.
pub fn propagate_exact<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
) -> Result<PropagationOutcome<C>> {
    let mut run = Run::new(store);
    if run.store.has_empty_domain() {
        return Ok(run.finish(Status::Failed));
    }
    let n = run.store.len();
    loop {
        let table = SweepTable::compute(dfa, run.store)?;
        run.passes += 1;

        match (table.global_min(), table.global_max()) {
            (Some(lo), Some(hi)) if meets(run.store, lo, hi) => {}
            _ => return Ok(run.finish(Status::Failed)),
        }

        let mut changed = false;
        for i in 1..=n {
            let pre_min = table.pre_min(i - 1);
            let pre_max = table.pre_max(i - 1);
            debug_assert!(dfa
                .states()
                .all(|q| pre_min.is_reachable(q) == pre_max.is_reachable(q)));
            let (suf_min, suf_max) = (table.suf_min(i + 1), table.suf_max(i + 1));
            let symbols: Vec<Symbol> = run.store.var(i - 1).iter().collect();
            for s in symbols {
                let mut supported = false;
                for (q, lo_prefix) in pre_min.reachable() {
                    let (r, inc) = dfa.step(q, s);
                    let lo = sum3(Some(lo_prefix), inc, suf_min.get(r))?;
                    let hi = sum3(pre_max.get(q), inc, suf_max.get(r))?;
                    if let (Some(lo), Some(hi)) = (lo, hi) {
                        if meets(run.store, lo, hi) {
                            supported = true;
                            break;
                        }
                    }
                }
                if !supported {
                    changed = true;
                    if run.store.remove_symbol(i - 1, s) == Change::Emptied {
                        return Ok(run.finish(Status::Failed));
                    }
                }
            }
        }

        let (last_min, last_max) = (table.pre_min(n), table.pre_max(n));
        let uncovered: Vec<C> = run
            .store
            .counter()
            .iter()
            .copied()
            .filter(|&v| {
                !last_min
                    .reachable()
                    .any(|(q, lo)| lo <= v && last_max.get(q).is_some_and(|hi| v <= hi))
            })
            .collect();
        for v in uncovered {
            changed = true;
            if run.store.remove_counter(v) == Change::Emptied {
                return Ok(run.finish(Status::Failed));
            }
        }

        if !changed {
            return Ok(run.finish(Status::Fixpoint));
        }
    }
}

/// Common fixpoint of the atmost and atleast propagators.
pub fn propagate_decomposed<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
) -> Result<PropagationOutcome<C>> {
    let mut run = Run::new(store);
    loop {
        let mut changed = false;
        for side in [Extremum::Min, Extremum::Max] {
            let out = propagate_bound(dfa, run.store, side)?;
            run.passes += out.passes;
            if out.failed() {
                return Ok(run.finish(Status::Failed));
            }
            changed |= !out.removals.is_empty();
        }
        if !changed {
            return Ok(run.finish(Status::Fixpoint));
        }
    }
}

/// Runs the propagator selected by `mode`.
pub fn propagate<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &mut DomainStore<C>,
    mode: Mode,
) -> Result<PropagationOutcome<C>> {
    match mode {
        Mode::AtMost => propagate_atmost(dfa, store),
        Mode::AtLeast => propagate_atleast(dfa, store),
        Mode::Exact => propagate_exact(dfa, store),
        Mode::DecomposedExact => propagate_decomposed(dfa, store),
    }
}
