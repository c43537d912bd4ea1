//! Finite tree automata over `T_Σ(V)`.
//!
//! Rules are kept in the top-down orientation `q -> f(q1,...,qk)`;
//! recognition runs bottom-up over state sets. Leaf symbols are admitted as
//! nullary symbols.

mod format;
mod langops;
mod ops;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::{Signature, Symbol};
use crate::error::{Error, Result};
use crate::tree::Tree;

pub use langops::{lang_top_catenation, lang_v_product, lang_v_quotient};

/// Index of a state inside one automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// `target -> symbol(children...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FtaRule {
    pub target: StateId,
    pub symbol: Symbol,
    pub children: Vec<StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fta {
    signature: Signature,
    states: Vec<Symbol>,
    finals: BTreeSet<StateId>,
    rules: Vec<FtaRule>,
}

/// Incremental construction of an [`Fta`] with named states.
#[derive(Clone, Debug)]
pub struct FtaBuilder {
    signature: Signature,
    states: Vec<Symbol>,
    index: HashMap<Symbol, StateId>,
    finals: BTreeSet<StateId>,
    rules: BTreeSet<FtaRule>,
}

impl FtaBuilder {
    pub fn new(signature: Signature) -> Self {
        FtaBuilder {
            signature,
            states: Vec::new(),
            index: HashMap::new(),
            finals: BTreeSet::new(),
            rules: BTreeSet::new(),
        }
    }

    /// Returns the id of the state called `name`, creating it if needed.
    pub fn state(&mut self, name: impl Into<Symbol>) -> StateId {
        let name = name.into();
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = StateId(self.states.len());
        self.states.push(name.clone());
        self.index.insert(name, id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn rule(&mut self, target: StateId, symbol: impl Into<Symbol>, children: Vec<StateId>) {
        self.rules.insert(FtaRule {
            target,
            symbol: symbol.into(),
            children,
        });
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn build(self) -> Result<Fta> {
        for r in &self.rules {
            match self.signature.arity(r.symbol.as_str()) {
                Some(k) if k == r.children.len() => {}
                Some(k) => {
                    return Err(Error::AlphabetMismatch(format!(
                        "rule on {} has {} children but the symbol has rank {k}",
                        r.symbol,
                        r.children.len()
                    )))
                }
                None => {
                    return Err(Error::AlphabetMismatch(format!(
                        "rule symbol {} is not in the alphabet",
                        r.symbol
                    )))
                }
            }
        }
        Ok(Fta {
            signature: self.signature,
            states: self.states,
            finals: self.finals,
            rules: self.rules.into_iter().collect(),
        })
    }
}

impl Fta {
    /// The automaton with no states, recognizing nothing.
    pub fn empty(signature: Signature) -> Fta {
        Fta {
            signature,
            states: Vec::new(),
            finals: BTreeSet::new(),
            rules: Vec::new(),
        }
    }

    /// Recognizes exactly `{t}`; one state per distinct subtree.
    pub fn singleton(signature: Signature, t: &Tree) -> Result<Fta> {
        signature.check_tree(t, 0)?;
        let mut b = FtaBuilder::new(signature);
        let root = add_subtree_states(&mut b, t);
        b.set_final(root);
        b.build()
    }

    /// Recognizes every tree over the signature with a single state.
    pub fn universal(signature: Signature) -> Fta {
        let mut b = FtaBuilder::new(signature.clone());
        let q = b.state("*");
        for (f, k) in signature.symbols() {
            b.rule(q, f, vec![q; k]);
        }
        b.set_final(q);
        b.build().expect("universal automaton is well-formed")
    }

    /// Recognizes the finite set `ts`.
    pub fn from_trees<'a>(signature: Signature, ts: impl IntoIterator<Item = &'a Tree>) -> Result<Fta> {
        let mut b = FtaBuilder::new(signature);
        for t in ts {
            b.signature().check_tree(t, 0)?;
            let root = add_subtree_states(&mut b, t);
            b.set_final(root);
        }
        b.build()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &Symbol {
        &self.states[q.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.as_str() == name).map(StateId)
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn rules(&self) -> &[FtaRule] {
        &self.rules
    }

    /// Rules grouped by their symbol.
    pub fn rules_by_symbol(&self) -> BTreeMap<&Symbol, Vec<&FtaRule>> {
        let mut out: BTreeMap<&Symbol, Vec<&FtaRule>> = BTreeMap::new();
        for r in &self.rules {
            out.entry(&r.symbol).or_default().push(r);
        }
        out
    }

    /// Rules grouped by `(target, symbol)`.
    pub fn rules_by_target(&self) -> HashMap<(StateId, &Symbol), Vec<&FtaRule>> {
        let mut out: HashMap<(StateId, &Symbol), Vec<&FtaRule>> = HashMap::new();
        for r in &self.rules {
            out.entry((r.target, &r.symbol)).or_default().push(r);
        }
        out
    }

    /// The states reached bottom-up at the root of `t`.
    pub fn run(&self, t: &Tree) -> Result<BTreeSet<StateId>> {
        self.signature.check_tree(t, 0)?;
        let by_symbol = self.rules_by_symbol();
        Ok(self.run_with(&by_symbol, t))
    }

    fn run_with(&self, by_symbol: &BTreeMap<&Symbol, Vec<&FtaRule>>, t: &Tree) -> BTreeSet<StateId> {
        let Tree::Node(f, kids) = t else {
            return BTreeSet::new();
        };
        let child_states: Vec<BTreeSet<StateId>> = kids.iter().map(|c| self.run_with(by_symbol, c)).collect();
        by_symbol
            .get(f)
            .into_iter()
            .flatten()
            .filter(|r| {
                r.children
                    .iter()
                    .zip(&child_states)
                    .all(|(q, set)| set.contains(q))
            })
            .map(|r| r.target)
            .collect()
    }

    /// `t ∈ L(A)`.
    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(self.run(t)?.iter().any(|q| self.finals.contains(q)))
    }

    /// `t ∈ L(A)_q`.
    pub fn accepts_from(&self, q: StateId, t: &Tree) -> Result<bool> {
        Ok(self.run(t)?.contains(&q))
    }

    /// States `q` with `L(A)_q ≠ ∅`.
    pub fn productive_states(&self) -> BTreeSet<StateId> {
        let mut productive = BTreeSet::new();
        loop {
            let before = productive.len();
            for r in &self.rules {
                if !productive.contains(&r.target) && r.children.iter().all(|c| productive.contains(c)) {
                    productive.insert(r.target);
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }

    /// `L(A) = ∅`.
    pub fn is_empty(&self) -> bool {
        let productive = self.productive_states();
        self.finals.iter().all(|q| !productive.contains(q))
    }

    /// Removes states that are unproductive or unreachable from a final
    /// state, renumbering the rest. The language is unchanged.
    pub fn trim(&self) -> Fta {
        let productive = self.productive_states();
        let useful_rules: Vec<&FtaRule> = self
            .rules
            .iter()
            .filter(|r| productive.contains(&r.target) && r.children.iter().all(|c| productive.contains(c)))
            .collect();
        let mut reachable: BTreeSet<StateId> = self.finals.intersection(&productive).copied().collect();
        let mut stack: Vec<StateId> = reachable.iter().copied().collect();
        let mut by_target: HashMap<StateId, Vec<&FtaRule>> = HashMap::new();
        for r in &useful_rules {
            by_target.entry(r.target).or_default().push(r);
        }
        while let Some(q) = stack.pop() {
            for r in by_target.get(&q).into_iter().flatten() {
                for &c in &r.children {
                    if reachable.insert(c) {
                        stack.push(c);
                    }
                }
            }
        }
        let mut b = FtaBuilder::new(self.signature.clone());
        let mut map = BTreeMap::new();
        for &q in &reachable {
            map.insert(q, b.state(self.states[q.0].clone()));
        }
        for r in useful_rules {
            if reachable.contains(&r.target) {
                b.rule(map[&r.target], r.symbol.clone(), r.children.iter().map(|c| map[c]).collect());
            }
        }
        for q in self.finals.intersection(&reachable) {
            b.set_final(map[q]);
        }
        b.build().expect("trimming preserves well-formedness")
    }

    /// Per state, the trees of `L(A)_q` with height at most `h`.
    pub fn enumerate_states(&self, h: usize) -> Vec<BTreeSet<Tree>> {
        let n = self.states.len();
        let mut level: Vec<BTreeSet<Tree>> = vec![BTreeSet::new(); n];
        for d in 0..=h {
            let mut next: Vec<BTreeSet<Tree>> = vec![BTreeSet::new(); n];
            for r in &self.rules {
                if r.children.is_empty() {
                    next[r.target.0].insert(Tree::leaf(r.symbol.clone()));
                } else if d > 0 {
                    let pools: Vec<&BTreeSet<Tree>> = r.children.iter().map(|c| &level[c.0]).collect();
                    for_each_combination(&pools, |kids| {
                        next[r.target.0].insert(Tree::node(r.symbol.clone(), kids.to_vec()));
                    });
                }
            }
            level = next;
        }
        level
    }

    /// Exactly `{t ∈ L(A) | hg(t) ≤ h}`.
    pub fn enumerate(&self, h: usize) -> BTreeSet<Tree> {
        let trimmed = self.trim();
        let per_state = trimmed.enumerate_states(h);
        let mut out = BTreeSet::new();
        for q in &trimmed.finals {
            out.extend(per_state[q.0].iter().cloned());
        }
        out
    }

    /// `true` iff `L(A)` is finite.
    pub fn is_finite(&self) -> bool {
        let trimmed = self.trim();
        !trimmed.has_cycle()
    }

    fn has_cycle(&self) -> bool {
        // colour: 0 unvisited, 1 on stack, 2 done
        let n = self.states.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for r in &self.rules {
            succ[r.target.0].extend(r.children.iter().map(|c| c.0));
        }
        let mut colour = vec![0u8; n];
        fn visit(q: usize, succ: &[BTreeSet<usize>], colour: &mut [u8]) -> bool {
            colour[q] = 1;
            for &c in &succ[q] {
                if colour[c] == 1 || (colour[c] == 0 && visit(c, succ, colour)) {
                    return true;
                }
            }
            colour[q] = 2;
            false
        }
        (0..n).any(|q| colour[q] == 0 && visit(q, &succ, &mut colour))
    }

    /// The whole language when it is finite, `None` otherwise.
    pub fn finite_language(&self) -> Option<BTreeSet<Tree>> {
        let trimmed = self.trim();
        if trimmed.has_cycle() {
            return None;
        }
        // an acyclic trimmed automaton only builds trees shorter than its
        // number of states
        Some(trimmed.enumerate(trimmed.state_count()))
    }

    /// Same rules read over another signature, which must give every rule
    /// symbol the rule's arity. Lets a nullary symbol be re-read as a leaf.
    pub fn with_signature(&self, signature: Signature) -> Result<Fta> {
        for r in &self.rules {
            if signature.arity(r.symbol.as_str()) != Some(r.children.len()) {
                return Err(Error::AlphabetMismatch(format!(
                    "{} with {} children is not in the new signature",
                    r.symbol,
                    r.children.len()
                )));
            }
        }
        Ok(Fta {
            signature,
            ..self.clone()
        })
    }

    /// Same automaton with another set of final states.
    pub fn with_finals(&self, finals: impl IntoIterator<Item = StateId>) -> Fta {
        Fta {
            finals: finals.into_iter().filter(|q| q.0 < self.states.len()).collect(),
            ..self.clone()
        }
    }

    /// Renames every state through `f`.
    pub fn map_state_names(&self, f: impl Fn(&Symbol) -> Symbol) -> Fta {
        Fta {
            states: self.states.iter().map(f).collect(),
            ..self.clone()
        }
    }
}

/// Adds one state per distinct subtree of `t`, named by the subtree itself,
/// and returns the root's state.
fn add_subtree_states(b: &mut FtaBuilder, t: &Tree) -> StateId {
    let kids: Vec<StateId> = t.children().iter().map(|c| add_subtree_states(b, c)).collect();
    let q = b.state(format!("[{t}]"));
    let f = t.symbol().expect("ground tree").clone();
    b.rule(q, f, kids);
    q
}

/// Calls `f` on every element of the cartesian product of `pools`.
pub(crate) fn for_each_combination<T: Clone>(pools: &[&BTreeSet<T>], mut f: impl FnMut(&[T])) {
    if pools.iter().any(|p| p.is_empty()) {
        return;
    }
    let mut iters: Vec<std::collections::btree_set::Iter<'_, T>> = pools.iter().map(|p| p.iter()).collect();
    let mut current: Vec<T> = iters.iter_mut().map(|it| it.next().unwrap().clone()).collect();
    loop {
        f(&current);
        let mut i = pools.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if let Some(next) = iters[i].next() {
                current[i] = next.clone();
                break;
            }
            iters[i] = pools[i].iter();
            current[i] = iters[i].next().unwrap().clone();
        }
    }
}

impl fmt::Display for Fta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_fta(self, f)
    }
}

impl std::str::FromStr for Fta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        format::parse_fta(s)
    }
}
