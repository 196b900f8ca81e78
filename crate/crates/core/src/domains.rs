//! Finite domains for the sequence variables and the counter variable.

use std::collections::BTreeSet;
use std::fmt;

use crate::automaton::Symbol;
use crate::error::{Error, Result};
use crate::num::Counter;

/// Set of alphabet symbols, stored as a bitset over the alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolDomain {
    words: Vec<u64>,
    universe: usize,
}

impl SymbolDomain {
    pub fn empty(universe: usize) -> Self {
        SymbolDomain {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut d = Self::empty(universe);
        for s in 0..universe {
            d.insert(Symbol(s));
        }
        d
    }

    pub fn from_symbols(universe: usize, symbols: impl IntoIterator<Item = Symbol>) -> Self {
        let mut d = Self::empty(universe);
        for s in symbols {
            d.insert(s);
        }
        d
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Inserts `s`; returns true if it was absent.
    ///
    /// # Panics
    /// If `s` is outside the universe.
    pub fn insert(&mut self, s: Symbol) -> bool {
        assert!(s.0 < self.universe, "symbol {} outside universe", s.0);
        let (w, b) = (s.0 / 64, s.0 % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    /// Removes `s`; returns true if it was present.
    pub fn remove(&mut self, s: Symbol) -> bool {
        if !self.contains(s) {
            return false;
        }
        self.words[s.0 / 64] &= !(1 << (s.0 % 64));
        true
    }

    #[inline]
    pub fn contains(&self, s: Symbol) -> bool {
        s.0 < self.universe && self.words[s.0 / 64] >> (s.0 % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Symbols in increasing id order.
    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.universe).map(Symbol).filter(|&s| self.contains(s))
    }

    pub fn first(&self) -> Option<Symbol> {
        self.iter().next()
    }
}

impl fmt::Debug for SymbolDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|s| s.0)).finish()
    }
}

/// Domain of the counter variable: a sorted set of naturals, holes allowed.
pub type CounterDomain<C> = BTreeSet<C>;

/// A variable of the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Sequence variable at 0-based position.
    X(usize),
    /// The counter variable.
    N,
}

/// A single value removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Removal<C> {
    Symbol { position: usize, symbol: Symbol },
    Counter(C),
}

impl<C: Counter> Removal<C> {
    pub fn var(&self) -> Var {
        match self {
            Removal::Symbol { position, .. } => Var::X(*position),
            Removal::Counter(_) => Var::N,
        }
    }
}

/// Effect of a removal on its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Unchanged,
    Changed,
    Emptied,
}

/// Domains of `x_1..x_n` and `N`, plus the log of every removal made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainStore<C> {
    vars: Vec<SymbolDomain>,
    counter: CounterDomain<C>,
    log: Vec<Removal<C>>,
}

impl<C: Counter> DomainStore<C> {
    pub fn new(vars: Vec<SymbolDomain>, counter: impl IntoIterator<Item = C>) -> Self {
        DomainStore {
            vars,
            counter: counter.into_iter().collect(),
            log: Vec::new(),
        }
    }

    /// Every position gets the full alphabet.
    pub fn full(n: usize, alphabet_size: usize, counter: impl IntoIterator<Item = C>) -> Self {
        Self::new(vec![SymbolDomain::full(alphabet_size); n], counter)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, position: usize) -> &SymbolDomain {
        &self.vars[position]
    }

    pub fn vars(&self) -> &[SymbolDomain] {
        &self.vars
    }

    pub fn counter(&self) -> &CounterDomain<C> {
        &self.counter
    }

    pub fn log(&self) -> &[Removal<C>] {
        &self.log
    }

    pub fn clear_log(&mut self) {
        self.log.clear();
    }

    pub fn remove_symbol(&mut self, position: usize, symbol: Symbol) -> Change {
        let d = &mut self.vars[position];
        if !d.remove(symbol) {
            return Change::Unchanged;
        }
        self.log.push(Removal::Symbol { position, symbol });
        if d.is_empty() {
            Change::Emptied
        } else {
            Change::Changed
        }
    }

    pub fn remove_counter(&mut self, value: C) -> Change {
        if !self.counter.remove(&value) {
            return Change::Unchanged;
        }
        self.log.push(Removal::Counter(value));
        if self.counter.is_empty() {
            Change::Emptied
        } else {
            Change::Changed
        }
    }

    pub fn remove(&mut self, removal: Removal<C>) -> Change {
        match removal {
            Removal::Symbol { position, symbol } => self.remove_symbol(position, symbol),
            Removal::Counter(v) => self.remove_counter(v),
        }
    }

    /// Reduces `x_position` to `{symbol}` (logging the removals).
    pub fn assign_symbol(&mut self, position: usize, symbol: Symbol) -> Change {
        let others: Vec<_> = self.vars[position].iter().filter(|&s| s != symbol).collect();
        let mut change = Change::Unchanged;
        for s in others {
            change = self.remove_symbol(position, s);
        }
        if !self.vars[position].contains(symbol) {
            return Change::Emptied;
        }
        change
    }

    /// Reduces `N` to `{value}` (logging the removals).
    pub fn assign_counter(&mut self, value: C) -> Change {
        let others: Vec<_> = self.counter.iter().copied().filter(|&v| v != value).collect();
        let mut change = Change::Unchanged;
        for v in others {
            change = self.remove_counter(v);
        }
        if !self.counter.contains(&value) {
            return Change::Emptied;
        }
        change
    }

    pub fn min_counter(&self) -> Result<C> {
        self.counter.first().copied().ok_or(Error::EmptyDomain)
    }

    pub fn max_counter(&self) -> Result<C> {
        self.counter.last().copied().ok_or(Error::EmptyDomain)
    }

    pub fn has_empty_domain(&self) -> bool {
        self.counter.is_empty() || self.vars.iter().any(SymbolDomain::is_empty)
    }

    pub fn is_ground(&self) -> bool {
        self.counter.len() == 1 && self.vars.iter().all(|d| d.len() == 1)
    }

    /// Number of ground sequences admitted by the sequence domains.
    pub fn sequence_count(&self) -> u128 {
        self.vars
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    /// Applies `removals` in order to a copy of `self`.
    pub fn replay(&self, removals: &[Removal<C>]) -> Self {
        let mut s = self.clone();
        for &r in removals {
            s.remove(r);
        }
        s
    }

    /// Same domains, empty log.
    pub fn snapshot(&self) -> Self {
        DomainStore {
            vars: self.vars.clone(),
            counter: self.counter.clone(),
            log: Vec::new(),
        }
    }

    /// True when both stores hold the same domains (logs are ignored).
    pub fn same_domains(&self, other: &Self) -> bool {
        self.vars == other.vars && self.counter == other.counter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symbol_domain_basics() {
        let mut d = SymbolDomain::full(70);
        assert_eq!(d.len(), 70);
        assert!(d.remove(Symbol(65)));
        assert!(!d.remove(Symbol(65)));
        assert!(!d.contains(Symbol(65)));
        assert!(!d.contains(Symbol(500)));
        assert_eq!(d.len(), 69);
        let e = SymbolDomain::empty(3);
        assert!(e.is_empty());
        assert_eq!(e.first(), None);
    }

    #[test]
    fn remove_reports_change() {
        let mut s = DomainStore::<u64>::new(vec![SymbolDomain::full(2)], [0, 1, 2]);
        assert_eq!(s.remove_counter(1), Change::Changed);
        assert_eq!(s.counter().iter().copied().collect::<Vec<_>>(), [0, 2]);
        assert_eq!(s.remove_counter(1), Change::Unchanged);
        assert_eq!(s.remove_symbol(0, Symbol(0)), Change::Changed);
        assert_eq!(s.remove_symbol(0, Symbol(1)), Change::Emptied);
        assert_eq!(s.log().len(), 3);
        assert!(s.has_empty_domain());
    }

    #[test]
    fn counter_bounds() {
        let s = DomainStore::<u64>::new(vec![], [0, 1, 2]);
        assert_eq!((s.min_counter().unwrap(), s.max_counter().unwrap()), (0, 2));
        let s = DomainStore::<u64>::new(vec![], [1, 3]);
        assert_eq!((s.min_counter().unwrap(), s.max_counter().unwrap()), (1, 3));
        let s = DomainStore::<u64>::new(vec![], [5]);
        assert_eq!((s.min_counter().unwrap(), s.max_counter().unwrap()), (5, 5));
        let s = DomainStore::<u64>::new(vec![], []);
        assert!(matches!(s.min_counter(), Err(Error::EmptyDomain)));
        assert!(matches!(s.max_counter(), Err(Error::EmptyDomain)));
    }

    #[test]
    fn assignment() {
        let mut s = DomainStore::<u32>::full(2, 3, [0, 1, 2]);
        assert_eq!(s.assign_symbol(1, Symbol(2)), Change::Changed);
        assert_eq!(s.var(1).iter().collect::<Vec<_>>(), [Symbol(2)]);
        assert_eq!(s.assign_counter(7), Change::Emptied);
    }

    proptest! {
        #[test]
        fn replay_reconstructs(ops in proptest::collection::vec((0usize..4, 0usize..3, 0u64..5, any::<bool>()), 0..30)) {
            let initial = DomainStore::<u64>::full(4, 3, 0..5);
            let mut s = initial.clone();
            for (pos, sym, v, on_counter) in ops {
                if on_counter { s.remove_counter(v); } else { s.remove_symbol(pos, Symbol(sym)); }
            }
            let replayed = initial.replay(s.log());
            prop_assert!(replayed.same_domains(&s));
            for (a, b) in initial.vars().iter().zip(s.vars()) {
                prop_assert!(b.iter().all(|x| a.contains(x)));
            }
        }
    }
}
