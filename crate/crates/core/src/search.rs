//! Depth-first propagate-and-branch search, and root-node benchmarking.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::automaton::{CounterDfa, Symbol};
use crate::domains::DomainStore;
use crate::error::Result;
use crate::instance::Instance;
use crate::num::Counter;
use crate::propagators::{propagate, Mode};

/// Variable and value ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    /// Leftmost unfixed sequence variable, then `N`; values ascending.
    #[default]
    LeftmostAscending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub prunings: u64,
    pub solutions: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<C> {
    pub stats: SearchStats,
    /// Solutions in discovery order, when requested.
    pub solutions: Vec<(Vec<Symbol>, C)>,
}

struct Dfs<'a, C> {
    dfa: &'a CounterDfa<C>,
    mode: Mode,
    collect: bool,
    stats: SearchStats,
    solutions: Vec<(Vec<Symbol>, C)>,
}

impl<C: Counter> Dfs<'_, C> {
    fn visit(&mut self, mut store: DomainStore<C>) -> Result<()> {
        self.stats.nodes += 1;
        let out = propagate(self.dfa, &mut store, self.mode)?;
        self.stats.prunings += out.removals.len() as u64;
        if out.failed() {
            self.stats.failures += 1;
            return Ok(());
        }
        if let Some(i) = store.vars().iter().position(|d| d.len() > 1) {
            for s in store.var(i).iter().collect::<Vec<_>>() {
                let mut child = store.snapshot();
                child.assign_symbol(i, s);
                self.visit(child)?;
            }
            return Ok(());
        }
        if store.counter().len() > 1 {
            for v in store.counter().iter().copied().collect::<Vec<_>>() {
                let mut child = store.snapshot();
                child.assign_counter(v);
                self.visit(child)?;
            }
            return Ok(());
        }
        let word: Vec<Symbol> = store
            .vars()
            .iter()
            .map(|d| d.first().expect("nonempty after propagation"))
            .collect();
        let v = store.min_counter()?;
        let c = self.dfa.run(&word)?.counter;
        if self.mode.semantics().accepts(c, v) {
            self.stats.solutions += 1;
            if self.collect {
                self.solutions.push((word, v));
            }
        } else {
            self.stats.failures += 1;
        }
        Ok(())
    }
}

/// Complete DFS; the propagator selected by `mode` runs to its fixpoint at
/// every node.
pub fn solve<C: Counter>(
    dfa: &CounterDfa<C>,
    store: &DomainStore<C>,
    mode: Mode,
    branching: Branching,
    collect_solutions: bool,
) -> Result<SearchResult<C>> {
    let Branching::LeftmostAscending = branching;
    let start = Instant::now();
    let mut dfs = Dfs {
        dfa,
        mode,
        collect: collect_solutions,
        stats: SearchStats::default(),
        solutions: Vec::new(),
    };
    dfs.visit(store.snapshot())?;
    dfs.stats.wall_time = start.elapsed();
    Ok(SearchResult {
        stats: dfs.stats,
        solutions: dfs.solutions,
    })
}

/// Root-node totals for one propagator over one family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeTotals {
    pub seconds: f64,
    pub failures: u64,
    pub prunings: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub instances: u64,
    pub totals: Vec<ModeTotals>,
}

/// Per-family comparison of several propagators at the root node.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub modes: Vec<Mode>,
    pub rows: Vec<BenchRow>,
}

/// Runs every mode once per instance at the root. Failures are counted per
/// mode; prunings only on instances where no mode failed, so the pruning
/// columns compare like with like.
pub fn bench<C: Counter>(corpus: &[Instance<C>], modes: &[Mode]) -> Result<BenchReport> {
    let mut rows: BTreeMap<String, BenchRow> = BTreeMap::new();
    for inst in corpus {
        let family = inst.family.clone().unwrap_or_else(|| "unnamed".into());
        let row = rows.entry(family.clone()).or_insert_with(|| BenchRow {
            family,
            instances: 0,
            totals: vec![ModeTotals::default(); modes.len()],
        });
        row.instances += 1;
        let mut pruned = Vec::with_capacity(modes.len());
        let mut any_failed = false;
        for (k, &mode) in modes.iter().enumerate() {
            let mut store = inst.store.snapshot();
            let start = Instant::now();
            let out = propagate(&inst.dfa, &mut store, mode)?;
            row.totals[k].seconds += start.elapsed().as_secs_f64();
            if out.failed() {
                row.totals[k].failures += 1;
                any_failed = true;
            }
            pruned.push(out.removals.len() as u64);
        }
        if !any_failed {
            for (t, p) in row.totals.iter_mut().zip(pruned) {
                t.prunings += p;
            }
        }
    }
    Ok(BenchReport {
        modes: modes.to_vec(),
        rows: rows.into_values().collect(),
    })
}

impl BenchReport {
    pub fn totals(&self) -> Vec<ModeTotals> {
        let mut acc = vec![ModeTotals::default(); self.modes.len()];
        for row in &self.rows {
            for (a, t) in acc.iter_mut().zip(&row.totals) {
                a.seconds += t.seconds;
                a.failures += t.failures;
                a.prunings += t.prunings;
            }
        }
        acc
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("family\tinstances");
        for col in ["seconds", "failures", "prunings"] {
            for m in &self.modes {
                let _ = write!(out, "\t{col}_{m}");
            }
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}\t{}", row.family, row.instances);
            for t in &row.totals {
                let _ = write!(out, "\t{:.3}", t.seconds);
            }
            for t in &row.totals {
                let _ = write!(out, "\t{}", t.failures);
            }
            for t in &row.totals {
                let _ = write!(out, "\t{}", t.prunings);
            }
            out.push('\n');
        }
        out
    }

    /// Aligned text table: one column group each for seconds, failures and
    /// prunings, with one column per mode inside each group.
    pub fn to_table(&self) -> String {
        let mut header = vec!["family".to_string(), "#inst".to_string()];
        for group in ["sec", "fail", "prune"] {
            for m in &self.modes {
                header.push(format!("{group}:{m}"));
            }
        }
        let mut lines = vec![header];
        for row in &self.rows {
            let mut cells = vec![row.family.clone(), row.instances.to_string()];
            cells.extend(row.totals.iter().map(|t| format!("{:.3}", t.seconds)));
            cells.extend(row.totals.iter().map(|t| t.failures.to_string()));
            cells.extend(row.totals.iter().map(|t| t.prunings.to_string()));
            lines.push(cells);
        }
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (k, l) in lines.iter().enumerate() {
            let cells: Vec<String> = l
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    if c == 0 {
                        format!("{s:<w$}", w = widths[c])
                    } else {
                        format!("{s:>w$}", w = widths[c])
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
            if k == 0 {
                let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }
}
