//! Prefix/suffix dynamic programming over the unrolled automaton.
//!
//! Row `i` of the forward sweep holds, for every state `q`, the least
//! (greatest) counter value over all admissible prefixes of length `i`
//! that end in `q`. Row `i` of the backward sweep holds the least
//! (greatest) counter increase over admissible suffixes `x_i..x_n` leaving
//! `q` and ending in a state reachable at position `n`. Rows are dense
//! arrays indexed by state; `None` marks an unreachable state. Keeping only
//! the extremal value per state is folded into the relaxation loop, so each
//! row costs `O(|Σ|·|Q|)`.

use std::fmt::Write as _;

use crate::automaton::{CounterDfa, StateId};
use crate::domains::DomainStore;
use crate::error::Result;
use crate::num::Counter;

/// Which extremum a row tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    #[inline]
    fn improves<C: Ord>(self, candidate: C, current: C) -> bool {
        match self {
            Extremum::Min => candidate < current,
            Extremum::Max => candidate > current,
        }
    }
}

/// One layer of a sweep: an optional counter value per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow<C>(Vec<Option<C>>);

impl<C: Counter> SweepRow<C> {
    pub fn unreachable(num_states: usize) -> Self {
        SweepRow(vec![None; num_states])
    }

    #[inline]
    pub fn get(&self, q: StateId) -> Option<C> {
        self.0[q.0]
    }

    #[inline]
    fn relax(&mut self, q: StateId, candidate: C, ext: Extremum) {
        let cell = &mut self.0[q.0];
        match *cell {
            Some(cur) if !ext.improves(candidate, cur) => {}
            _ => *cell = Some(candidate),
        }
    }

    /// `(state, value)` pairs of reachable states, by increasing state id.
    pub fn reachable(&self) -> impl Iterator<Item = (StateId, C)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(q, c)| c.map(|c| (StateId(q), c)))
    }

    pub fn is_reachable(&self, q: StateId) -> bool {
        self.0[q.0].is_some()
    }

    pub fn values(&self) -> &[Option<C>] {
        &self.0
    }

    /// Extremum over the reachable entries.
    pub fn extremum(&self, ext: Extremum) -> Option<C> {
        let vals = self.0.iter().flatten().copied();
        match ext {
            Extremum::Min => vals.min(),
            Extremum::Max => vals.max(),
        }
    }
}

/// Forward rows `0..=n`.
pub fn forward<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    ext: Extremum,
) -> Result<Vec<SweepRow<C>>> {
    let nq = dfa.num_states();
    let mut rows = Vec::with_capacity(store.len() + 1);
    let mut first = SweepRow::unreachable(nq);
    first.0[dfa.start().0] = Some(C::zero());
    rows.push(first);
    for dom in store.vars() {
        let prev = rows.last().expect("row 0 exists");
        let mut row = SweepRow::unreachable(nq);
        for (q, c) in prev.reachable() {
            for s in dom.iter() {
                let (r, inc) = dfa.step(q, s);
                row.relax(r, c.add_checked(inc)?, ext);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Backward rows `1..=n+1`, returned so that element `k` is row `k + 1`.
/// `last_forward` is forward row `n`; its reachable states seed row `n+1`.
pub fn backward<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    last_forward: &SweepRow<C>,
    ext: Extremum,
) -> Result<Vec<SweepRow<C>>> {
    let nq = dfa.num_states();
    let n = store.len();
    let mut rows = vec![SweepRow::unreachable(nq); n + 1];
    for (q, _) in last_forward.reachable() {
        rows[n].0[q.0] = Some(C::zero());
    }
    for i in (0..n).rev() {
        let (head, tail) = rows.split_at_mut(i + 1);
        let next = &tail[0];
        let row = &mut head[i];
        for q in dfa.states() {
            for s in store.var(i).iter() {
                let (r, inc) = dfa.step(q, s);
                if let Some(c) = next.get(r) {
                    row.relax(q, inc.add_checked(c)?, ext);
                }
            }
        }
    }
    Ok(rows)
}

/// Forward and backward rows for one extremum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfTable<C> {
    pre: Vec<SweepRow<C>>,
    suf: Vec<SweepRow<C>>,
}

impl<C: Counter> HalfTable<C> {
    pub fn compute(dfa: &CounterDfa<C>, store: &DomainStore<C>, ext: Extremum) -> Result<Self> {
        let pre = forward(dfa, store, ext)?;
        let suf = backward(dfa, store, pre.last().expect("row 0 exists"), ext)?;
        Ok(HalfTable { pre, suf })
    }

    /// Forward row `i`, `0 <= i <= n`.
    pub fn pre(&self, i: usize) -> &SweepRow<C> {
        &self.pre[i]
    }

    /// Backward row `i`, `1 <= i <= n + 1`.
    pub fn suf(&self, i: usize) -> &SweepRow<C> {
        &self.suf[i - 1]
    }

    pub fn pre_rows(&self) -> &[SweepRow<C>] {
        &self.pre
    }

    pub fn suf_rows(&self) -> &[SweepRow<C>] {
        &self.suf
    }

    pub fn len(&self) -> usize {
        self.pre.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The four sweep vectors over the current store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepTable<C> {
    pub min: HalfTable<C>,
    pub max: HalfTable<C>,
}

impl<C: Counter> SweepTable<C> {
    pub fn compute(dfa: &CounterDfa<C>, store: &DomainStore<C>) -> Result<Self> {
        Ok(SweepTable {
            min: HalfTable::compute(dfa, store, Extremum::Min)?,
            max: HalfTable::compute(dfa, store, Extremum::Max)?,
        })
    }

    pub fn pre_min(&self, i: usize) -> &SweepRow<C> {
        self.min.pre(i)
    }

    pub fn pre_max(&self, i: usize) -> &SweepRow<C> {
        self.max.pre(i)
    }

    pub fn suf_min(&self, i: usize) -> &SweepRow<C> {
        self.min.suf(i)
    }

    pub fn suf_max(&self, i: usize) -> &SweepRow<C> {
        self.max.suf(i)
    }

    pub fn global_min(&self) -> Option<C> {
        global_min(&self.min)
    }

    pub fn global_max(&self) -> Option<C> {
        global_max(&self.max)
    }
}

/// Least final counter value over all admissible sequences.
pub fn global_min<C: Counter>(min: &HalfTable<C>) -> Option<C> {
    min.pre(min.len()).extremum(Extremum::Min)
}

/// Greatest final counter value over all admissible sequences.
pub fn global_max<C: Counter>(max: &HalfTable<C>) -> Option<C> {
    max.pre(max.len()).extremum(Extremum::Max)
}

/// Renders rows as `i: state=value,...` lines listing reachable states only.
pub fn format_rows<C: Counter>(dfa: &CounterDfa<C>, rows: &[SweepRow<C>], first_index: usize) -> String {
    let mut out = String::new();
    for (k, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .reachable()
            .map(|(q, c)| format!("{}={}", dfa.state_name(q), c))
            .collect();
        let _ = writeln!(out, "{}: {}", first_index + k, cells.join(","));
    }
    out
}
