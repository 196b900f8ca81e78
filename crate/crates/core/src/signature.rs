//! Unary signature channeling.
//!
//! Each position `i` carries a total table from native integer values to
//! automaton symbols. The propagators work on the projected symbol
//! domains; symbol prunings are then mapped back onto native values.

use std::collections::{BTreeMap, BTreeSet};

use crate::automaton::{CounterDfa, Symbol};
use crate::domains::{CounterDomain, DomainStore, Removal, SymbolDomain};
use crate::error::{Error, Result};
use crate::num::Counter;
use crate::propagators::{propagate, Mode, Status};

/// Native domain of one position.
pub type NativeDomain = BTreeSet<i64>;

/// Per-position native value to symbol tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureMap {
    tables: Vec<BTreeMap<i64, Symbol>>,
}

impl SignatureMap {
    pub fn new(tables: Vec<BTreeMap<i64, Symbol>>) -> Self {
        SignatureMap { tables }
    }

    /// Signature for the `AMONG` scheme: values in `set` map to `inside`,
    /// every other value of `universe` maps to `outside`.
    pub fn among(
        n: usize,
        universe: impl IntoIterator<Item = i64>,
        set: &BTreeSet<i64>,
        inside: Symbol,
        outside: Symbol,
    ) -> Self {
        let table: BTreeMap<i64, Symbol> = universe
            .into_iter()
            .map(|v| (v, if set.contains(&v) { inside } else { outside }))
            .collect();
        SignatureMap {
            tables: vec![table; n],
        }
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn table(&self, position: usize) -> &BTreeMap<i64, Symbol> {
        &self.tables[position]
    }

    pub fn image(&self, position: usize, value: i64) -> Result<Symbol> {
        self.tables[position].get(&value).copied().ok_or_else(|| {
            Error::InvalidInstance(format!(
                "native value {value} has no signature symbol at position {}",
                position + 1
            ))
        })
    }
}

/// Symbols reached by the native values of `position`.
pub fn project(
    sig: &SignatureMap,
    native: &NativeDomain,
    position: usize,
    alphabet_size: usize,
) -> Result<SymbolDomain> {
    let mut d = SymbolDomain::empty(alphabet_size);
    for &v in native {
        let s = sig.image(position, v)?;
        if s.0 >= alphabet_size {
            return Err(Error::InvalidInstance(format!(
                "signature symbol {} outside alphabet",
                s.0
            )));
        }
        d.insert(s);
    }
    Ok(d)
}

/// Native values removed by [`channel_back`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channeled {
    pub removed: Vec<i64>,
    /// The native domain became empty.
    pub failed: bool,
}

/// Removes the native values whose image is in `pruned`.
pub fn channel_back(
    sig: &SignatureMap,
    native: &mut NativeDomain,
    pruned: &[Symbol],
    position: usize,
) -> Result<Channeled> {
    let mut removed = Vec::new();
    for &v in native.iter() {
        if pruned.contains(&sig.image(position, v)?) {
            removed.push(v);
        }
    }
    for v in &removed {
        native.remove(v);
    }
    Ok(Channeled {
        removed,
        failed: native.is_empty(),
    })
}

/// Outcome of propagation through a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChanneledOutcome<C> {
    pub status: Status,
    /// `(0-based position, native value)` removals.
    pub native_removals: Vec<(usize, i64)>,
    pub counter_removals: Vec<C>,
    pub rounds: usize,
}

/// Alternates symbol-level propagation and channeling until neither the
/// native domains nor `N` change.
pub fn propagate_channeled<C: Counter>(
    dfa: &CounterDfa<C>,
    sig: &SignatureMap,
    natives: &mut [NativeDomain],
    counter: &mut CounterDomain<C>,
    mode: Mode,
) -> Result<ChanneledOutcome<C>> {
    if sig.len() != natives.len() {
        return Err(Error::InvalidInstance(format!(
            "{} signature tables for {} positions",
            sig.len(),
            natives.len()
        )));
    }
    let mut outcome = ChanneledOutcome {
        status: Status::Fixpoint,
        native_removals: Vec::new(),
        counter_removals: Vec::new(),
        rounds: 0,
    };
    if natives.iter().any(BTreeSet::is_empty) || counter.is_empty() {
        outcome.status = Status::Failed;
        return Ok(outcome);
    }
    loop {
        outcome.rounds += 1;
        let vars = natives
            .iter()
            .enumerate()
            .map(|(i, nd)| project(sig, nd, i, dfa.alphabet_size()))
            .collect::<Result<Vec<_>>>()?;
        let mut store = DomainStore::new(vars, counter.iter().copied());
        let out = propagate(dfa, &mut store, mode)?;

        let mut pruned: Vec<Vec<Symbol>> = vec![Vec::new(); natives.len()];
        for r in &out.removals {
            match *r {
                Removal::Symbol { position, symbol } => pruned[position].push(symbol),
                Removal::Counter(v) => {
                    counter.remove(&v);
                    outcome.counter_removals.push(v);
                }
            }
        }
        let mut changed = false;
        for (i, symbols) in pruned.iter().enumerate() {
            let ch = channel_back(sig, &mut natives[i], symbols, i)?;
            changed |= !ch.removed.is_empty();
            outcome
                .native_removals
                .extend(ch.removed.iter().map(|&v| (i, v)));
            if ch.failed {
                outcome.status = Status::Failed;
                return Ok(outcome);
            }
        }
        if out.failed() {
            outcome.status = Status::Failed;
            return Ok(outcome);
        }
        if !changed && out.removals.is_empty() {
            return Ok(outcome);
        }
    }
}
