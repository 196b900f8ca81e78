//! Counter-DFAs: complete deterministic automata whose transitions also
//! increment a single natural-number counter.
//!
//! Symbols and states are interned to dense indices and both transition
//! projections are stored as `|Q| x |Σ|` row-major tables, so a transition
//! lookup is a single index computation.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::num::Counter;

/// Index of a symbol in the alphabet of its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub usize);

/// Index of a state of its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Final state and counter value after consuming a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunResult<C> {
    pub end_state: StateId,
    pub counter: C,
}

/// A validated counter-DFA. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterDfa<C> {
    state_names: Vec<String>,
    alphabet: Vec<String>,
    start: StateId,
    next_state: Vec<StateId>,
    increment: Vec<C>,
    accepting: Vec<bool>,
}

impl<C: Counter> CounterDfa<C> {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.0]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s.0]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|a| a == name).map(Symbol)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q.0]
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.alphabet.len()).map(Symbol)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len()).map(StateId)
    }

    #[inline]
    fn cell(&self, q: StateId, s: Symbol) -> usize {
        q.0 * self.alphabet.len() + s.0
    }

    /// Successor state (the state projection of the transition function).
    #[inline]
    pub fn next_state(&self, q: StateId, s: Symbol) -> StateId {
        self.next_state[self.cell(q, s)]
    }

    /// Counter increment (the counter projection of the transition function).
    #[inline]
    pub fn increment(&self, q: StateId, s: Symbol) -> C {
        self.increment[self.cell(q, s)]
    }

    #[inline]
    pub fn step(&self, q: StateId, s: Symbol) -> (StateId, C) {
        let c = self.cell(q, s);
        (self.next_state[c], self.increment[c])
    }

    /// Runs the automaton on `word` from `from` with the counter at zero.
    pub fn run_from(&self, from: StateId, word: &[Symbol]) -> Result<RunResult<C>> {
        let mut state = from;
        let mut counter = C::zero();
        for &s in word {
            if s.0 >= self.alphabet.len() {
                return Err(Error::MalformedAutomaton(format!(
                    "symbol {} outside alphabet of size {}",
                    s.0,
                    self.alphabet.len()
                )));
            }
            let (next, inc) = self.step(state, s);
            counter = counter.add_checked(inc)?;
            state = next;
        }
        Ok(RunResult {
            end_state: state,
            counter,
        })
    }

    /// Runs the automaton on `word` from the start state.
    pub fn run(&self, word: &[Symbol]) -> Result<RunResult<C>> {
        self.run_from(self.start, word)
    }

    /// Maps symbol names to ids, failing on the first unknown name.
    pub fn parse_word<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Symbol>> {
        names
            .iter()
            .map(|n| {
                self.symbol(n.as_ref()).ok_or_else(|| {
                    Error::InvalidInstance(format!("unknown symbol `{}`", n.as_ref()))
                })
            })
            .collect()
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let (nq, ns) = (self.state_names.len(), self.alphabet.len());
        check_shape(nq, &self.alphabet, self.start)?;
        if self.next_state.len() != nq * ns || self.increment.len() != nq * ns {
            return Err(Error::MalformedAutomaton(
                "transition tables do not have |Q| x |Σ| cells".into(),
            ));
        }
        if self.accepting.len() != nq {
            return Err(Error::MalformedAutomaton(
                "accepting flags do not cover every state".into(),
            ));
        }
        for q in self.states() {
            for s in self.symbols() {
                let r = self.next_state(q, s);
                if r.0 >= nq {
                    return Err(Error::MalformedAutomaton(format!(
                        "transition ({}, {}) targets out-of-range state {}",
                        self.state_name(q),
                        self.symbol_name(s),
                        r.0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Converts every increment to another counter type.
    pub fn map_counter<D: Counter>(&self) -> Result<CounterDfa<D>> {
        let increment = self
            .increment
            .iter()
            .map(|c| D::from_u64(c.to_u64_checked()?))
            .collect::<Result<Vec<_>>>()?;
        Ok(CounterDfa {
            state_names: self.state_names.clone(),
            alphabet: self.alphabet.clone(),
            start: self.start,
            next_state: self.next_state.clone(),
            increment,
            accepting: self.accepting.clone(),
        })
    }
}

fn check_shape(num_states: usize, alphabet: &[String], start: StateId) -> Result<()> {
    if num_states == 0 {
        return Err(Error::MalformedAutomaton("automaton has no states".into()));
    }
    if alphabet.is_empty() {
        return Err(Error::MalformedAutomaton("alphabet is empty".into()));
    }
    let mut seen = HashSet::new();
    for a in alphabet {
        if a.is_empty() {
            return Err(Error::MalformedAutomaton("empty symbol name".into()));
        }
        if !seen.insert(a.as_str()) {
            return Err(Error::MalformedAutomaton(format!("duplicate symbol `{a}`")));
        }
    }
    if start.0 >= num_states {
        return Err(Error::MalformedAutomaton(format!(
            "start state {} out of range (|Q| = {num_states})",
            start.0
        )));
    }
    Ok(())
}

/// Incremental construction of a [`CounterDfa`]; `build` validates.
#[derive(Debug, Clone)]
pub struct DfaBuilder<C> {
    state_names: Vec<String>,
    alphabet: Vec<String>,
    start: StateId,
    cells: Vec<Option<(StateId, C)>>,
    accepting: Vec<bool>,
    duplicate: Option<(usize, usize)>,
    out_of_range: Option<String>,
}

impl<C: Counter> DfaBuilder<C> {
    /// States are named `q0, q1, ...` until renamed.
    pub fn new<S: Into<String>>(num_states: usize, alphabet: impl IntoIterator<Item = S>) -> Self {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        let cells = vec![None; num_states * alphabet.len()];
        DfaBuilder {
            state_names: (0..num_states).map(|q| format!("q{q}")).collect(),
            alphabet,
            start: StateId(0),
            cells,
            accepting: vec![true; num_states],
            duplicate: None,
            out_of_range: None,
        }
    }

    pub fn state_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() == self.state_names.len() {
            self.state_names = names;
        } else {
            self.out_of_range = Some(format!(
                "{} state names given for {} states",
                names.len(),
                self.state_names.len()
            ));
        }
        self
    }

    pub fn start(mut self, start: usize) -> Self {
        self.start = StateId(start);
        self
    }

    pub fn accepting(mut self, accepting: Vec<bool>) -> Self {
        self.accepting = accepting;
        self
    }

    /// Sets the transition `from --symbol--> to` with counter increment `inc`.
    pub fn transition(mut self, from: usize, symbol: usize, to: usize, inc: C) -> Self {
        self.set(from, symbol, to, inc);
        self
    }

    pub fn set(&mut self, from: usize, symbol: usize, to: usize, inc: C) {
        let (nq, ns) = (self.state_names.len(), self.alphabet.len());
        if from >= nq || to >= nq || symbol >= ns {
            self.out_of_range.get_or_insert_with(|| {
                format!("transition ({from}, {symbol}) -> {to} out of range")
            });
            return;
        }
        let cell = &mut self.cells[from * ns + symbol];
        if cell.is_some() {
            self.duplicate.get_or_insert((from, symbol));
        }
        *cell = Some((StateId(to), inc));
    }

    /// Same as [`DfaBuilder::transition`] with symbol and state names.
    pub fn named(mut self, from: &str, symbol: &str, to: &str, inc: C) -> Self {
        let lookup = |names: &[String], n: &str| names.iter().position(|x| x == n);
        match (
            lookup(&self.state_names, from),
            lookup(&self.alphabet, symbol),
            lookup(&self.state_names, to),
        ) {
            (Some(f), Some(s), Some(t)) => self.set(f, s, t, inc),
            _ => {
                self.out_of_range
                    .get_or_insert_with(|| format!("unknown name in ({from}, {symbol}) -> {to}"));
            }
        }
        self
    }

    pub fn build(self) -> Result<CounterDfa<C>> {
        check_shape(self.state_names.len(), &self.alphabet, self.start)?;
        if let Some(msg) = self.out_of_range {
            return Err(Error::MalformedAutomaton(msg));
        }
        if let Some((q, s)) = self.duplicate {
            return Err(Error::MalformedAutomaton(format!(
                "duplicate transition for ({}, {})",
                self.state_names[q], self.alphabet[s]
            )));
        }
        if self.accepting.len() != self.state_names.len() {
            return Err(Error::MalformedAutomaton(
                "accepting flags do not cover every state".into(),
            ));
        }
        let ns = self.alphabet.len();
        let mut next_state = Vec::with_capacity(self.cells.len());
        let mut increment = Vec::with_capacity(self.cells.len());
        for (i, cell) in self.cells.iter().enumerate() {
            match cell {
                Some((to, inc)) => {
                    next_state.push(*to);
                    increment.push(*inc);
                }
                None => {
                    return Err(Error::MalformedAutomaton(format!(
                        "missing transition for ({}, {})",
                        self.state_names[i / ns],
                        self.alphabet[i % ns]
                    )))
                }
            }
        }
        Ok(CounterDfa {
            state_names: self.state_names,
            alphabet: self.alphabet,
            start: self.start,
            next_state,
            increment,
            accepting: self.accepting,
        })
    }
}

/// One-state automaton of the Subset-Sum reduction: symbol `i` (named by
/// its value) adds `values[i]`, and the trailing symbol `0` adds nothing.
///
/// Symbol names are made unique when values repeat (`3`, `3#2`, ...).
pub fn build_subset_sum_dfa<C: Counter>(values: &[C]) -> Result<CounterDfa<C>> {
    if values.is_empty() {
        return Err(Error::MalformedAutomaton(
            "subset-sum reduction needs at least one value".into(),
        ));
    }
    let mut names: Vec<String> = Vec::with_capacity(values.len() + 1);
    for v in values {
        let base = v.to_string();
        let mut name = base.clone();
        let mut k = 1;
        while name == "0" || names.contains(&name) {
            k += 1;
            name = format!("{base}#{k}");
        }
        names.push(name);
    }
    names.push("0".into());
    let mut b = DfaBuilder::new(1, names).state_names(["s"]);
    for (i, v) in values.iter().enumerate() {
        b.set(0, i, 0, *v);
    }
    b.set(0, values.len(), 0, C::zero());
    b.build()
}

/// Name of the end-of-string symbol added by [`lift_accepting`].
pub const END_SYMBOL: &str = "$";

/// Makes every state accepting by adding an end-of-string symbol `$` and a
/// sink state: `$` leads every original state to the sink, costing 0 from
/// accepting states and `penalty` from non-accepting ones. The sink loops
/// on every symbol with increment 0. Callers append `$` to their sequence.
pub fn lift_accepting<C: Counter>(dfa: &CounterDfa<C>, penalty: C) -> Result<CounterDfa<C>> {
    let nq = dfa.num_states();
    let ns = dfa.alphabet_size();
    let mut alphabet = dfa.alphabet.clone();
    if alphabet.iter().any(|a| a == END_SYMBOL) {
        return Err(Error::MalformedAutomaton(format!(
            "alphabet already contains `{END_SYMBOL}`"
        )));
    }
    alphabet.push(END_SYMBOL.into());
    let mut names = dfa.state_names.clone();
    let mut end_name = String::from("end");
    while names.contains(&end_name) {
        end_name.push('\'');
    }
    names.push(end_name);
    let end = nq;

    let mut b = DfaBuilder::new(nq + 1, alphabet)
        .state_names(names)
        .start(dfa.start.0);
    for q in dfa.states() {
        for s in dfa.symbols() {
            let (r, inc) = dfa.step(q, s);
            b.set(q.0, s.0, r.0, inc);
        }
        let cost = if dfa.is_accepting(q) { C::zero() } else { penalty };
        b.set(q.0, ns, end, cost);
    }
    for s in 0..=ns {
        b.set(end, s, end, C::zero());
    }
    b.build()
}

/// Automata used throughout the documentation and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogEntry {
    /// Counts occurrences of the word `aab`.
    Aab,
    /// One state over signature symbols `in`/`notin`; `in` counts.
    Among,
    /// Six states over `r`, `s`, `t` with increments of 1 and 2.
    Rst,
    /// Two states over `1`, `2`; only the `2`-loop on `q` counts.
    B,
}

impl CatalogEntry {
    pub const ALL: [CatalogEntry; 4] = [Self::Aab, Self::Among, Self::Rst, Self::B];

    pub fn name(self) -> &'static str {
        match self {
            Self::Aab => "AAB",
            Self::Among => "AMONG",
            Self::Rst => "RST",
            Self::B => "B",
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CatalogEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownAutomaton(s.to_string()))
    }
}

/// Looks up a catalog automaton by (case-insensitive) name.
pub fn catalog<C: Counter>(name: &str) -> Result<CounterDfa<C>> {
    Ok(catalog_entry(name.parse()?))
}

pub fn catalog_entry<C: Counter>(entry: CatalogEntry) -> CounterDfa<C> {
    let one = C::one();
    let two = one + one;
    let zero = C::zero();
    let b = match entry {
        CatalogEntry::Aab => DfaBuilder::new(3, ["a", "b"])
            .state_names(["eps", "a", "aa"])
            .named("eps", "a", "a", zero)
            .named("eps", "b", "eps", zero)
            .named("a", "a", "aa", zero)
            .named("a", "b", "eps", zero)
            .named("aa", "a", "aa", zero)
            .named("aa", "b", "eps", one),
        CatalogEntry::Among => DfaBuilder::new(1, ["in", "notin"])
            .state_names(["i"])
            .named("i", "in", "i", one)
            .named("i", "notin", "i", zero),
        CatalogEntry::Rst => DfaBuilder::new(6, ["r", "s", "t"])
            .state_names(["eps", "r", "rr", "rrt", "rrs", "rrtr"])
            .named("eps", "r", "r", one)
            .named("eps", "s", "eps", zero)
            .named("eps", "t", "eps", zero)
            .named("r", "r", "rr", zero)
            .named("r", "s", "eps", zero)
            .named("r", "t", "eps", zero)
            .named("rr", "r", "rr", zero)
            .named("rr", "s", "rrs", zero)
            .named("rr", "t", "rrt", zero)
            .named("rrt", "r", "rrtr", two)
            .named("rrt", "s", "rrs", zero)
            .named("rrt", "t", "rrt", zero)
            .named("rrs", "r", "rrtr", two)
            .named("rrs", "s", "eps", zero)
            .named("rrs", "t", "eps", zero)
            .named("rrtr", "r", "rr", zero)
            .named("rrtr", "s", "r", zero)
            .named("rrtr", "t", "rrtr", zero),
        CatalogEntry::B => DfaBuilder::new(2, ["1", "2"])
            .state_names(["eps", "q"])
            .named("eps", "1", "q", zero)
            .named("eps", "2", "q", zero)
            .named("q", "1", "eps", zero)
            .named("q", "2", "q", one),
    };
    b.build().expect("catalog automata are well formed")
}
