//! Regular counting constraints over counter-DFAs.
//!
//! A counter-DFA is a complete DFA whose transitions also add a natural
//! number to a single counter. Posting `counter(x_1..x_n) <= N`, `>= N` or
//! `= N` gives the regular counting constraints propagated here:
//!
//! * [`propagators::propagate_atmost`] and [`propagators::propagate_atleast`]
//!   achieve domain consistency in `O(n·|Σ|·|Q|)` time;
//! * [`propagators::propagate_exact`] is a sound, incomplete filter for the
//!   exact form, whose satisfiability is NP-hard;
//! * [`oracle`] enumerates ground sequences to check all of the above;
//! * [`generator`] and [`search`] drive fuzzing and benchmarking.
//!
//! All algorithms are generic over the counter type (see [`Counter`]);
//! the aliases below fix it to `u64`.

pub mod automaton;
pub mod domains;
pub mod error;
pub mod fuzz;
pub mod generator;
pub mod instance;
pub mod num;
pub mod oracle;
pub mod propagators;
pub mod search;
pub mod signature;
pub mod sweep;

pub use automaton::{
    build_subset_sum_dfa, catalog, catalog_entry, lift_accepting, CatalogEntry, DfaBuilder,
    RunResult, StateId, Symbol,
};
pub use domains::{Change, Removal, SymbolDomain, Var};
pub use error::{Error, Result};
pub use num::Counter;
pub use propagators::{Mode, Semantics, Status};

/// Counter-DFA with 64-bit counters.
pub type CounterDfa = automaton::CounterDfa<u64>;
/// Domain store with 64-bit counter values.
pub type DomainStore = domains::DomainStore<u64>;
pub type CounterDomain = domains::CounterDomain<u64>;
pub type SweepTable = sweep::SweepTable<u64>;
pub type PropagationOutcome = propagators::PropagationOutcome<u64>;
pub type SupportReport = oracle::SupportReport<u64>;
pub type Verdict = oracle::Verdict<u64>;
pub type Instance = instance::Instance<u64>;
pub type SearchResult = search::SearchResult<u64>;
