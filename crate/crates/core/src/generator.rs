//! Random counter-DFAs and random instances.
//!
//! Every generator draws from a ChaCha8 stream. Instance `k` of a corpus
//! with seed `s` uses `ChaCha8Rng::seed_from_u64(s)` switched to stream
//! `k`, so corpora are reproducible across platforms and any single
//! instance can be regenerated without generating its predecessors.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{CounterDfa, DfaBuilder, Symbol};
use crate::domains::{DomainStore, SymbolDomain};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::num::Counter;
use crate::propagators::Mode;
use crate::signature::{NativeDomain, SignatureMap};

/// Shapes of the initial counter domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CounterShape {
    /// `{b}`
    Single,
    /// Two distinct values `{b, v}`, usually with a hole between them.
    Pair,
    /// `{b, b+1}`
    Interval2,
    /// `{b, b+1, b+2}`
    Interval3,
}

impl CounterShape {
    pub const ALL: [CounterShape; 4] = [
        CounterShape::Single,
        CounterShape::Pair,
        CounterShape::Interval2,
        CounterShape::Interval3,
    ];
}

/// Parameters of the random generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub max_states: usize,
    pub alphabet_size: RangeInclusive<usize>,
    pub increment_probability: f64,
    pub increment_value: u64,
    pub length: RangeInclusive<usize>,
    pub counter_shapes: Vec<CounterShape>,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_states: 5,
            alphabet_size: 2..=4,
            increment_probability: 0.2,
            increment_value: 1,
            length: 1..=10,
            counter_shapes: CounterShape::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInstance(format!("generator config: {m}")));
        if self.max_states == 0 {
            return bad("max_states must be positive");
        }
        if self.alphabet_size.is_empty() || *self.alphabet_size.start() == 0 {
            return bad("alphabet size range must be nonempty and positive");
        }
        if !(0.0..=1.0).contains(&self.increment_probability) {
            return bad("increment probability outside [0, 1]");
        }
        if self.length.is_empty() {
            return bad("length range is empty");
        }
        if self.counter_shapes.is_empty() {
            return bad("no counter-domain shapes");
        }
        Ok(())
    }

    /// The RNG for instance `index` of the corpus.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Uniform total transition table: every cell gets a uniform target state
/// and carries `increment_value` with probability `increment_probability`.
/// State 0 is the start state.
pub fn random_cdfa<C: Counter, R: Rng>(cfg: &GenConfig, rng: &mut R) -> Result<CounterDfa<C>> {
    cfg.validate()?;
    let nq = rng.gen_range(1..=cfg.max_states);
    let ns = rng.gen_range(cfg.alphabet_size.clone());
    let inc = C::from_u64(cfg.increment_value)?;
    let mut b = DfaBuilder::new(nq, (0..ns).map(char_name));
    for q in 0..nq {
        for s in 0..ns {
            let to = rng.gen_range(0..nq);
            let counts = rng.gen_bool(cfg.increment_probability);
            b.set(q, s, to, if counts { inc } else { C::zero() });
        }
    }
    b.build()
}

fn char_name(s: usize) -> String {
    if s < 26 {
        ((b'a' + s as u8) as char).to_string()
    } else {
        format!("s{s}")
    }
}

/// A nonempty random subset of `0..universe`: a contiguous interval or an
/// arbitrary set, with equal probability.
pub fn random_symbol_domain<R: Rng>(universe: usize, rng: &mut R) -> SymbolDomain {
    if rng.gen_bool(0.5) {
        let a = rng.gen_range(0..universe);
        let b = rng.gen_range(0..universe);
        let (lo, hi) = (a.min(b), a.max(b));
        SymbolDomain::from_symbols(universe, (lo..=hi).map(Symbol))
    } else {
        loop {
            let d = SymbolDomain::from_symbols(
                universe,
                (0..universe).filter(|_| rng.gen_bool(0.5)).map(Symbol),
            );
            if !d.is_empty() {
                return d;
            }
        }
    }
}

/// Draws a shape and a base uniformly in `[0, n]` and builds the domain.
pub fn random_counter_domain<C: Counter, R: Rng>(
    shapes: &[CounterShape],
    n: usize,
    rng: &mut R,
) -> Result<(CounterShape, BTreeSet<C>)> {
    let shape = *shapes.choose(rng).expect("shapes nonempty");
    let base = rng.gen_range(0..=n as u64);
    let values: Vec<u64> = match shape {
        CounterShape::Single => vec![base],
        CounterShape::Pair => {
            let mut other = rng.gen_range(0..=n as u64 + 1);
            if other == base {
                other = n as u64 + 2;
            }
            vec![base, other]
        }
        CounterShape::Interval2 => vec![base, base + 1],
        CounterShape::Interval3 => vec![base, base + 1, base + 2],
    };
    let set = values
        .into_iter()
        .map(C::from_u64)
        .collect::<Result<BTreeSet<C>>>()?;
    Ok((shape, set))
}

/// Random domains for `dfa` with a length drawn from `cfg.length`.
pub fn random_instance<C: Counter, R: Rng>(
    cfg: &GenConfig,
    dfa: CounterDfa<C>,
    mode: Mode,
    rng: &mut R,
) -> Result<Instance<C>> {
    cfg.validate()?;
    let n = rng.gen_range(cfg.length.clone());
    let vars = (0..n)
        .map(|_| random_symbol_domain(dfa.alphabet_size(), rng))
        .collect();
    let (_, counter) = random_counter_domain(&cfg.counter_shapes, n, rng)?;
    Ok(Instance::new(dfa, DomainStore::new(vars, counter), mode))
}

/// Instance `index` of the corpus described by `cfg`: a fresh random
/// automaton and random domains, both drawn from the instance's stream.
pub fn corpus_instance<C: Counter>(cfg: &GenConfig, index: u64, mode: Mode) -> Result<Instance<C>> {
    let mut rng = cfg.rng(index);
    let dfa = random_cdfa(cfg, &mut rng)?;
    random_instance(cfg, dfa, mode, &mut rng)
}

/// Random `Among`-style instance: native values in `0..universe`, a random
/// value set, random native domains and a random counter domain.
pub fn random_among_instance<C: Counter, R: Rng>(
    cfg: &GenConfig,
    dfa: &CounterDfa<C>,
    universe: i64,
    mode: Mode,
    rng: &mut R,
) -> Result<Instance<C>> {
    let inside = dfa
        .symbol("in")
        .ok_or_else(|| Error::InvalidInstance("automaton lacks symbol `in`".into()))?;
    let outside = dfa
        .symbol("notin")
        .ok_or_else(|| Error::InvalidInstance("automaton lacks symbol `notin`".into()))?;
    let n = rng.gen_range(cfg.length.clone());
    let set: BTreeSet<i64> = (0..universe).filter(|_| rng.gen_bool(0.4)).collect();
    let natives: Vec<NativeDomain> = (0..n)
        .map(|_| {
            random_symbol_domain(universe as usize, rng)
                .iter()
                .map(|s| s.0 as i64)
                .collect()
        })
        .collect();
    let map = SignatureMap::among(n, 0..universe, &set, inside, outside);
    let (_, counter) = random_counter_domain(&cfg.counter_shapes, n, rng)?;
    Instance::with_signature(dfa.clone(), map, natives, counter, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_automaton() {
        let cfg = GenConfig {
            max_states: 1,
            ..GenConfig::default()
        };
        let mut rng = cfg.rng(0);
        let dfa: CounterDfa<u64> = random_cdfa(&cfg, &mut rng).unwrap();
        assert_eq!(dfa.num_states(), 1);
        for s in dfa.symbols() {
            assert_eq!(dfa.next_state(dfa.start(), s), dfa.start());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let cfg = GenConfig {
            seed: 99,
            ..GenConfig::default()
        };
        let a: Instance<u64> = corpus_instance(&cfg, 17, Mode::Exact).unwrap();
        let b: Instance<u64> = corpus_instance(&cfg, 17, Mode::Exact).unwrap();
        assert_eq!(a, b);
        let c: Instance<u64> = corpus_instance(&cfg, 18, Mode::Exact).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn increment_frequency() {
        let cfg = GenConfig {
            max_states: 5,
            alphabet_size: 2..=2,
            ..GenConfig::default()
        };
        let mut rng = cfg.rng(0);
        let (mut arcs, mut counting) = (0u64, 0u64);
        for _ in 0..10_000 {
            let dfa: CounterDfa<u64> = random_cdfa(&cfg, &mut rng).unwrap();
            for q in dfa.states() {
                for s in dfa.symbols() {
                    arcs += 1;
                    counting += dfa.increment(q, s);
                }
            }
        }
        let frac = counting as f64 / arcs as f64;
        assert!((0.18..=0.22).contains(&frac), "{frac}");
    }

    #[test]
    fn domains_are_nonempty_and_shapes_uniform() {
        let cfg = GenConfig::default();
        let mut rng = cfg.rng(3);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            let d = random_symbol_domain(4, &mut rng);
            assert!(!d.is_empty());
            let (shape, set) = random_counter_domain::<u64, _>(&cfg.counter_shapes, 6, &mut rng).unwrap();
            let k = CounterShape::ALL.iter().position(|s| *s == shape).unwrap();
            counts[k] += 1;
            let expected_len = [1, 2, 2, 3][k];
            assert_eq!(set.len(), expected_len);
        }
        for c in counts {
            let f = c as f64 / 10_000.0;
            assert!((0.22..=0.28).contains(&f), "{counts:?}");
        }
    }

    #[test]
    fn invalid_config() {
        let cfg = GenConfig {
            increment_probability: 1.5,
            ..GenConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = GenConfig {
            max_states: 0,
            ..GenConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
