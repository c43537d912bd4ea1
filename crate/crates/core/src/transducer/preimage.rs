//! `τ_M^{-1}(L(A))` for linear transducers whose left-hand sides have the
//! shape `q(f(x_{a1},...,x_{ak}))`.
//!
//! The result runs top-down over states `(call, obligations)`: `call` is
//! `Some((q, p))` when the subtree is translated from state `q` and its
//! output must reach `p` in `A`, `None` when the subtree is deleted; the
//! obligations are look-ahead automaton states the subtree must be
//! accepted from. Look-ahead automata that differ only in their final
//! states share obligations.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{Lookahead, Rhs, Transducer};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::fta::{Fta, FtaBuilder, StateId};
use crate::tree::Tree;

type Obligation = (usize, StateId);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    call: Option<(Symbol, StateId)>,
    obligations: BTreeSet<Obligation>,
}

struct Shape<'a> {
    state: &'a Symbol,
    symbol: &'a Symbol,
    /// variable index at each child position
    vars: Vec<usize>,
    rhs: &'a Rhs,
    /// `(automaton, admissible root states)`
    lookahead: Option<(usize, Vec<StateId>)>,
}

struct Lookaheads {
    automata: Vec<Fta>,
    by_target: Vec<HashMap<(StateId, Symbol), Vec<Vec<StateId>>>>,
}

impl Lookaheads {
    fn intern(&mut self, keys: &mut HashMap<String, usize>, a: Fta) -> (usize, Vec<StateId>) {
        let finals: Vec<StateId> = a.finals().iter().copied().collect();
        let key = a.rules().iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join(";");
        let key = format!("{}|{}", a.signature(), key);
        let id = *keys.entry(key).or_insert_with(|| {
            let mut map: HashMap<(StateId, Symbol), Vec<Vec<StateId>>> = HashMap::new();
            for r in a.rules() {
                map.entry((r.target, r.symbol.clone())).or_default().push(r.children.clone());
            }
            self.automata.push(a);
            self.by_target.push(map);
            self.automata.len() - 1
        });
        (id, finals)
    }
}

impl Transducer {
    /// `{s | ∃q ∈ I, t ∈ L(A): q(s) ⇒* t}`.
    pub fn preimage(&self, a: &Fta) -> Result<Fta> {
        if !self.classify().linear {
            return Err(Error::ClassMismatch("preimage needs a linear transducer".into()));
        }
        let mut las = Lookaheads {
            automata: Vec::new(),
            by_target: Vec::new(),
        };
        let mut la_keys = HashMap::new();
        let mut shapes = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let Tree::Node(f, kids) = &r.pattern else {
                return Err(Error::UnsupportedShape(format!(
                    "left-hand side {}({}) has no input symbol",
                    r.state, r.pattern
                )));
            };
            let vars = kids
                .iter()
                .map(|k| match k {
                    Tree::Var(i) => Ok(*i),
                    _ => Err(Error::UnsupportedShape(format!(
                        "left-hand side {}({}) is deeper than one symbol",
                        r.state, r.pattern
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            let lookahead = match &r.lookahead {
                Lookahead::None => None,
                la => Some(las.intern(&mut la_keys, la.to_fta(&self.input)?)),
            };
            shapes.push(Shape {
                state: &r.state,
                symbol: f,
                vars,
                rhs: &r.rhs,
                lookahead,
            });
        }
        let mut a_rules: HashMap<(StateId, &Symbol), Vec<&[StateId]>> = HashMap::new();
        for r in a.rules() {
            a_rules.entry((r.target, &r.symbol)).or_default().push(&r.children);
        }
        let symbols = self.input.symbols();

        let mut keys: Vec<Key> = Vec::new();
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |k: Key, keys: &mut Vec<Key>, queue: &mut VecDeque<usize>| -> usize {
            *index.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                queue.push_back(keys.len() - 1);
                keys.len() - 1
            })
        };
        let mut finals = Vec::new();
        for q in &self.finals {
            for p in a.finals() {
                let k = Key {
                    call: Some((q.clone(), *p)),
                    obligations: BTreeSet::new(),
                };
                finals.push(intern(k, &mut keys, &mut queue));
            }
        }
        let mut transitions: BTreeSet<(usize, Symbol, Vec<usize>)> = BTreeSet::new();
        while let Some(x) = queue.pop_front() {
            let key = keys[x].clone();
            // (symbol, per-child calls, extra obligations at this node)
            let mut steps: Vec<(Symbol, Vec<Option<(Symbol, StateId)>>, Vec<BTreeSet<Obligation>>)> = Vec::new();
            match &key.call {
                None => {
                    for (f, k) in &symbols {
                        steps.push((f.clone(), vec![None; *k], vec![BTreeSet::new()]));
                    }
                }
                Some((q, p)) => {
                    for sh in shapes.iter().filter(|s| s.state == q) {
                        let here: Vec<BTreeSet<Obligation>> = match &sh.lookahead {
                            None => vec![BTreeSet::new()],
                            Some((id, fins)) => fins.iter().map(|s| BTreeSet::from([(*id, *s)])).collect(),
                        };
                        for run in rhs_runs(sh.rhs, *p, &a_rules) {
                            let by_var: BTreeMap<usize, (Symbol, StateId)> =
                                run.into_iter().map(|(i, q2, p2)| (i, (q2, p2))).collect();
                            let calls = sh.vars.iter().map(|v| by_var.get(v).cloned()).collect();
                            steps.push((sh.symbol.clone(), calls, here.clone()));
                        }
                    }
                }
            }
            for (f, calls, extra_choices) in steps {
                for extra in extra_choices {
                    let obligations: Vec<Obligation> = key.obligations.union(&extra).copied().collect();
                    for kids in obligation_choices(&obligations, &f, calls.len(), &las) {
                        let children: Vec<usize> = calls
                            .iter()
                            .zip(kids)
                            .map(|(c, obl)| {
                                intern(
                                    Key {
                                        call: c.clone(),
                                        obligations: obl,
                                    },
                                    &mut keys,
                                    &mut queue,
                                )
                            })
                            .collect();
                        transitions.insert((x, f.clone(), children));
                    }
                }
            }
        }
        let mut b = FtaBuilder::new(self.input.clone());
        let ids: Vec<StateId> = (0..keys.len()).map(|i| b.state(format!("m{i}"))).collect();
        for (x, f, kids) in transitions {
            b.rule(ids[x], f, kids.iter().map(|k| ids[*k]).collect());
        }
        for x in finals {
            b.set_final(ids[x]);
        }
        Ok(b.build()?.trim())
    }
}

/// Runs of `A` on a right-hand side from state `p`: each run assigns an
/// `A`-state to every call, returned as `(variable, called state, A-state)`.
fn rhs_runs(rhs: &Rhs, p: StateId, a_rules: &HashMap<(StateId, &Symbol), Vec<&[StateId]>>) -> Vec<Vec<(usize, Symbol, StateId)>> {
    match rhs {
        Rhs::Call(q, i) => vec![vec![(*i, q.clone(), p)]],
        Rhs::Out(g, kids) => {
            let mut out = Vec::new();
            for children in a_rules.get(&(p, g)).into_iter().flatten() {
                let mut partial: Vec<Vec<(usize, Symbol, StateId)>> = vec![Vec::new()];
                for (kid, pk) in kids.iter().zip(children.iter()) {
                    let sub = rhs_runs(kid, *pk, a_rules);
                    partial = partial
                        .iter()
                        .flat_map(|pre| {
                            sub.iter().map(move |s| {
                                let mut v = pre.clone();
                                v.extend(s.iter().cloned());
                                v
                            })
                        })
                        .collect();
                    if partial.is_empty() {
                        break;
                    }
                }
                out.extend(partial);
            }
            out
        }
    }
}

/// For every way of discharging all obligations through look-ahead rules
/// on `f`, the obligations passed to each of the `k` children.
fn obligation_choices(obligations: &[Obligation], f: &Symbol, k: usize, las: &Lookaheads) -> Vec<Vec<BTreeSet<Obligation>>> {
    let mut partial: Vec<Vec<BTreeSet<Obligation>>> = vec![vec![BTreeSet::new(); k]];
    for &(id, s) in obligations {
        let Some(options) = las.by_target[id].get(&(s, f.clone())) else {
            return Vec::new();
        };
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for pre in &partial {
            for kids in options {
                let mut v = pre.clone();
                for (slot, q) in v.iter_mut().zip(kids) {
                    slot.insert((id, *q));
                }
                next.push(v);
            }
        }
        partial = next;
        partial.sort();
        partial.dedup();
    }
    partial
}
