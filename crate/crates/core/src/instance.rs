//! Instances and their JSON file formats.
//!
//! Automaton file:
//!
//! ```json
//! { "states": 2, "alphabet": ["1", "2"], "start": 0, "accepting": [0, 1],
//!   "transitions": [{"from": 0, "symbol": "1", "to": 1, "inc": 0}, ...] }
//! ```
//!
//! `accepting` defaults to every state; `state_names` is optional.
//!
//! Instance file:
//!
//! ```json
//! { "automaton": {...} | "path/to/automaton.json" | "catalog:B",
//!   "vars": [["2"], ["1", "2"]], "counter": [0, 1, 2], "mode": "exact" }
//! ```
//!
//! With a `signature` block, `vars` holds native integers instead of
//! symbol names. The block is either `{"among": {"set": [2, 5]}}` (values
//! in the set map to `in`, others to `notin`) or `{"maps": [{"1": "in",
//! ...}, ...]}` with one table per position.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automaton::{catalog, CounterDfa, DfaBuilder, Symbol};
use crate::domains::{DomainStore, Removal, SymbolDomain};
use crate::error::{Error, Result};
use crate::num::Counter;
use crate::propagators::Mode;
use crate::signature::{project, NativeDomain, SignatureMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionFile {
    pub from: usize,
    pub symbol: String,
    pub to: usize,
    pub inc: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub start: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepting: Option<Vec<usize>>,
    pub transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_names: Option<Vec<String>>,
}

impl AutomatonFile {
    pub fn from_dfa<C: Counter>(dfa: &CounterDfa<C>) -> Result<Self> {
        let mut transitions = Vec::new();
        for q in dfa.states() {
            for s in dfa.symbols() {
                let (r, inc) = dfa.step(q, s);
                let inc = i64::try_from(inc.to_u64_checked()?).map_err(|_| Error::CounterOverflow)?;
                transitions.push(TransitionFile {
                    from: q.0,
                    symbol: dfa.symbol_name(s).to_string(),
                    to: r.0,
                    inc,
                });
            }
        }
        let all_accepting = dfa.states().all(|q| dfa.is_accepting(q));
        Ok(AutomatonFile {
            states: dfa.num_states(),
            alphabet: dfa.alphabet().to_vec(),
            start: dfa.start().0,
            accepting: (!all_accepting)
                .then(|| dfa.states().filter(|&q| dfa.is_accepting(q)).map(|q| q.0).collect()),
            transitions,
            state_names: Some(dfa.state_names().to_vec()),
        })
    }

    /// Builds and validates the automaton.
    pub fn to_dfa<C: Counter>(&self) -> Result<CounterDfa<C>> {
        let mut b = DfaBuilder::<C>::new(self.states, self.alphabet.iter().cloned()).start(self.start);
        if let Some(names) = &self.state_names {
            if names.len() != self.states {
                return Err(Error::MalformedAutomaton(format!(
                    "{} state names for {} states",
                    names.len(),
                    self.states
                )));
            }
            b = b.state_names(names.iter().cloned());
        }
        if let Some(acc) = &self.accepting {
            let mut flags = vec![false; self.states];
            for &q in acc {
                if q >= self.states {
                    return Err(Error::MalformedAutomaton(format!(
                        "accepting state {q} out of range"
                    )));
                }
                flags[q] = true;
            }
            b = b.accepting(flags);
        }
        for t in &self.transitions {
            let symbol = self
                .alphabet
                .iter()
                .position(|a| *a == t.symbol)
                .ok_or_else(|| {
                    Error::MalformedAutomaton(format!("unknown symbol `{}` in transition", t.symbol))
                })?;
            if t.inc < 0 {
                return Err(Error::MalformedAutomaton(format!(
                    "negative increment {} on ({}, {})",
                    t.inc, t.from, t.symbol
                )));
            }
            b.set(t.from, symbol, t.to, C::from_u64(t.inc as u64)?);
        }
        b.build()
    }
}

pub fn parse_automaton<C: Counter>(json: &str) -> Result<CounterDfa<C>> {
    let file: AutomatonFile = serde_json::from_str(json)?;
    file.to_dfa()
}

pub fn automaton_to_json<C: Counter>(dfa: &CounterDfa<C>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&AutomatonFile::from_dfa(dfa)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomatonRef {
    Inline(AutomatonFile),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VarValue {
    Native(i64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmongFile {
    pub set: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub among: Option<AmongFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<BTreeMap<String, String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub automaton: AutomatonRef,
    pub vars: Vec<Vec<VarValue>>,
    pub counter: Vec<u64>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

/// Native domains together with their signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signed {
    pub map: SignatureMap,
    pub natives: Vec<NativeDomain>,
}

/// A posted regular counting constraint with its initial domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<C> {
    pub dfa: CounterDfa<C>,
    /// Symbol domains (projections of the natives when `signed` is set).
    pub store: DomainStore<C>,
    pub mode: Mode,
    pub signed: Option<Signed>,
    pub family: Option<String>,
}

impl<C: Counter> Instance<C> {
    pub fn new(dfa: CounterDfa<C>, store: DomainStore<C>, mode: Mode) -> Self {
        Instance {
            dfa,
            store,
            mode,
            signed: None,
            family: None,
        }
    }

    /// Instance whose symbol domains are the projection of `natives`.
    pub fn with_signature(
        dfa: CounterDfa<C>,
        map: SignatureMap,
        natives: Vec<NativeDomain>,
        counter: impl IntoIterator<Item = C>,
        mode: Mode,
    ) -> Result<Self> {
        if map.len() != natives.len() {
            return Err(Error::InvalidInstance(format!(
                "{} signature tables for {} positions",
                map.len(),
                natives.len()
            )));
        }
        let vars = natives
            .iter()
            .enumerate()
            .map(|(i, d)| project(&map, d, i, dfa.alphabet_size()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            store: DomainStore::new(vars, counter),
            dfa,
            mode,
            signed: Some(Signed { map, natives }),
            family: None,
        })
    }

    /// Parses an instance; relative automaton paths resolve against `base`.
    pub fn from_json(json: &str, base: Option<&Path>) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(json)?;
        Self::from_file(&file, base)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, path.parent())
    }

    pub fn from_file(file: &InstanceFile, base: Option<&Path>) -> Result<Self> {
        let dfa: CounterDfa<C> = match &file.automaton {
            AutomatonRef::Inline(a) => a.to_dfa()?,
            AutomatonRef::Path(p) => match p.strip_prefix("catalog:") {
                Some(name) => catalog(name)?,
                None => {
                    let path = match base {
                        Some(b) => b.join(p),
                        None => p.into(),
                    };
                    parse_automaton(&std::fs::read_to_string(path)?)?
                }
            },
        };
        let mode: Mode = file.mode.parse()?;
        let counter = file
            .counter
            .iter()
            .map(|&v| C::from_u64(v))
            .collect::<Result<Vec<_>>>()?;
        let mut inst = match &file.signature {
            None => {
                let vars = file
                    .vars
                    .iter()
                    .enumerate()
                    .map(|(i, vals)| {
                        let mut d = SymbolDomain::empty(dfa.alphabet_size());
                        for v in vals {
                            let s = match v {
                                VarValue::Name(n) => dfa.symbol(n),
                                VarValue::Native(k) => dfa.symbol(&k.to_string()),
                            }
                            .ok_or_else(|| {
                                Error::InvalidInstance(format!(
                                    "unknown symbol {v:?} in domain of x{}",
                                    i + 1
                                ))
                            })?;
                            d.insert(s);
                        }
                        Ok(d)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Instance::new(dfa, DomainStore::new(vars, counter), mode)
            }
            Some(sig) => {
                let natives = file
                    .vars
                    .iter()
                    .map(|vals| {
                        vals.iter()
                            .map(|v| match v {
                                VarValue::Native(k) => Ok(*k),
                                VarValue::Name(n) => n.parse::<i64>().map_err(|_| {
                                    Error::InvalidInstance(format!(
                                        "native value `{n}` is not an integer"
                                    ))
                                }),
                            })
                            .collect::<Result<NativeDomain>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let map = signature_from_file(&dfa, sig, &natives)?;
                Instance::with_signature(dfa, map, natives, counter, mode)?
            }
        };
        if inst.store.has_empty_domain() {
            return Err(Error::InvalidInstance("instance has an empty domain".into()));
        }
        inst.family = file.family.clone();
        Ok(inst)
    }

    pub fn to_file(&self) -> Result<InstanceFile> {
        let automaton = AutomatonRef::Inline(AutomatonFile::from_dfa(&self.dfa)?);
        let counter = self
            .store
            .counter()
            .iter()
            .map(|c| c.to_u64_checked())
            .collect::<Result<Vec<_>>>()?;
        let (vars, signature) = match &self.signed {
            None => (
                self.store
                    .vars()
                    .iter()
                    .map(|d| {
                        d.iter()
                            .map(|s| VarValue::Name(self.dfa.symbol_name(s).to_string()))
                            .collect()
                    })
                    .collect(),
                None,
            ),
            Some(signed) => {
                let maps = (0..signed.map.len())
                    .map(|i| {
                        signed
                            .map
                            .table(i)
                            .iter()
                            .map(|(v, s)| (v.to_string(), self.dfa.symbol_name(*s).to_string()))
                            .collect()
                    })
                    .collect();
                (
                    signed
                        .natives
                        .iter()
                        .map(|d| d.iter().map(|&v| VarValue::Native(v)).collect())
                        .collect(),
                    Some(SignatureFile {
                        among: None,
                        maps: Some(maps),
                    }),
                )
            }
        };
        Ok(InstanceFile {
            automaton,
            vars,
            counter,
            mode: self.mode.name().to_string(),
            signature,
            family: self.family.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?)?)
    }
}

fn signature_from_file<C: Counter>(
    dfa: &CounterDfa<C>,
    sig: &SignatureFile,
    natives: &[NativeDomain],
) -> Result<SignatureMap> {
    let symbol = |name: &str| {
        dfa.symbol(name)
            .ok_or_else(|| Error::InvalidInstance(format!("signature symbol `{name}` not in alphabet")))
    };
    match (&sig.among, &sig.maps) {
        (Some(among), None) => {
            let set: BTreeSet<i64> = among.set.iter().copied().collect();
            let universe: BTreeSet<i64> = natives.iter().flatten().copied().collect();
            Ok(SignatureMap::among(
                natives.len(),
                universe,
                &set,
                symbol("in")?,
                symbol("notin")?,
            ))
        }
        (None, Some(maps)) => {
            if maps.len() != natives.len() {
                return Err(Error::InvalidInstance(format!(
                    "{} signature maps for {} positions",
                    maps.len(),
                    natives.len()
                )));
            }
            let tables = maps
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|(k, s)| {
                            let v = k.parse::<i64>().map_err(|_| {
                                Error::InvalidInstance(format!("signature key `{k}` is not an integer"))
                            })?;
                            Ok((v, symbol(s)?))
                        })
                        .collect::<Result<BTreeMap<i64, Symbol>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SignatureMap::new(tables))
        }
        _ => Err(Error::InvalidInstance(
            "signature block needs exactly one of `among` or `maps`".into(),
        )),
    }
}

/// Symbol-name rendering of a removal, e.g. `x3 != b` or `N != 1`.
pub fn describe_removal<C: Counter>(dfa: &CounterDfa<C>, removal: &Removal<C>) -> String {
    match removal {
        Removal::Symbol { position, symbol } => {
            format!("x{} != {}", position + 1, dfa.symbol_name(*symbol))
        }
        Removal::Counter(v) => format!("N != {v}"),
    }
}
