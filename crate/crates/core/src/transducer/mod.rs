//! Top-down tree transducers with optional per-rule look-ahead.

mod compile;
mod format;
mod preimage;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::{for_each_combination, Fta, FtaBuilder};
use crate::hom::match_pattern;
use crate::tree::Tree;

pub use format::LookaheadResolver;

/// Right-hand side of a rule: output symbols over state calls `q(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rhs {
    Out(Symbol, Vec<Rhs>),
    Call(Symbol, usize),
}

impl Rhs {
    pub fn leaf(symbol: impl Into<Symbol>) -> Rhs {
        Rhs::Out(symbol.into(), Vec::new())
    }

    /// `(state, variable)` of every call, left to right.
    pub fn calls(&self) -> Vec<(&Symbol, usize)> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<(&'a Symbol, usize)>) {
        match self {
            Rhs::Call(q, i) => out.push((q, *i)),
            Rhs::Out(_, kids) => kids.iter().for_each(|k| k.collect_calls(out)),
        }
    }

    /// Replaces each call by the tree chosen for it, in call order.
    fn fill(&self, chosen: &mut std::slice::Iter<'_, Tree>) -> Tree {
        match self {
            Rhs::Call(..) => chosen.next().expect("one tree per call").clone(),
            Rhs::Out(g, kids) => Tree::node(g.clone(), kids.iter().map(|k| k.fill(chosen)).collect()),
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Call(q, i) => write!(f, "{q}(x{i})"),
            Rhs::Out(g, kids) if kids.is_empty() => write!(f, "{g}"),
            Rhs::Out(g, kids) => {
                write!(f, "{g}(")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Restriction on the input subtree at the rewrite site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookahead {
    None,
    /// `L[T_Σ,...,T_Σ]` for a finite pattern set `L`.
    Finite(Vec<Tree>),
    Regular(Arc<Fta>),
}

impl Lookahead {
    pub fn admits(&self, s: &Tree) -> Result<bool> {
        match self {
            Lookahead::None => Ok(true),
            Lookahead::Finite(patterns) => Ok(patterns.iter().any(|p| {
                let mut binding = vec![None; p.variables().last().copied().unwrap_or(0)];
                match_pattern(p, s, &mut binding)
            })),
            Lookahead::Regular(a) => a.accepts(s),
        }
    }

    /// The equivalent automaton over `signature`; finite pattern sets
    /// must be linear.
    pub fn to_fta(&self, signature: &Signature) -> Result<Fta> {
        match self {
            Lookahead::None => Ok(Fta::universal(signature.clone())),
            Lookahead::Regular(a) => a.with_signature(signature.union(a.signature())?),
            Lookahead::Finite(patterns) => patterns_to_fta(signature, patterns),
        }
    }
}

/// Automaton for `L[T_Σ,...,T_Σ]` with `L` a set of linear patterns.
pub fn patterns_to_fta(signature: &Signature, patterns: &[Tree]) -> Result<Fta> {
    let mut b = FtaBuilder::new(signature.clone());
    let any = b.state("*");
    for (f, k) in signature.symbols() {
        b.rule(any, f, vec![any; k]);
    }
    fn add(b: &mut FtaBuilder, p: &Tree, any: crate::fta::StateId) -> crate::fta::StateId {
        match p {
            Tree::Var(_) => any,
            Tree::Node(f, kids) => {
                let ks = kids.iter().map(|c| add(b, c, any)).collect();
                let q = b.state(format!("[{p}]"));
                b.rule(q, f.clone(), ks);
                q
            }
        }
    }
    for p in patterns {
        let n = p.variables().last().copied().unwrap_or(0);
        if !p.is_linear(n) {
            return Err(Error::ClassMismatch(format!("look-ahead pattern {p} is not linear")));
        }
        signature.check_tree(p, n)?;
        let q = add(&mut b, p, any);
        b.set_final(q);
    }
    b.build()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdRule {
    pub state: Symbol,
    pub pattern: Tree,
    pub rhs: Rhs,
    pub lookahead: Lookahead,
}

impl TdRule {
    pub fn new(state: impl Into<Symbol>, pattern: Tree, rhs: Rhs, lookahead: Lookahead) -> TdRule {
        TdRule {
            state: state.into(),
            pattern,
            rhs,
            lookahead,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TdClass {
    pub linear: bool,
    pub nondeleting: bool,
    pub finite_state_relabeling: bool,
    pub relabeling: bool,
    pub fta_shaped: bool,
}

impl TdClass {
    pub fn flags(&self) -> Vec<&'static str> {
        [
            (self.linear, "linear"),
            (self.nondeleting, "nondeleting"),
            (self.finite_state_relabeling, "finite_state_relabeling"),
            (self.relabeling, "relabeling"),
            (self.fta_shaped, "fta_shaped"),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| n)
        .collect()
    }
}

impl fmt::Display for TdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for flag in self.flags() {
            writeln!(f, "{flag}")?;
        }
        Ok(())
    }
}

/// `M = (Q, Σ, Δ, I, R)` with input `(Σ,V)` and output `(Δ,Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    states: BTreeSet<Symbol>,
    input: Signature,
    output: Signature,
    finals: BTreeSet<Symbol>,
    rules: Vec<TdRule>,
}

impl Transducer {
    pub fn new(
        states: BTreeSet<Symbol>,
        input: Signature,
        output: Signature,
        finals: BTreeSet<Symbol>,
        rules: Vec<TdRule>,
    ) -> Result<Transducer> {
        if let Some(q) = finals.iter().find(|q| !states.contains(*q)) {
            return Err(Error::malformed("transducer", format!("final state {q} is not a state")));
        }
        for r in &rules {
            if !states.contains(&r.state) {
                return Err(Error::malformed("transducer", format!("rule state {} is not a state", r.state)));
            }
            let vars = r.pattern.variables();
            let n = vars.last().copied().unwrap_or(0);
            input.check_tree(&r.pattern, n)?;
            if !r.pattern.is_linear(n) {
                return Err(Error::malformed("transducer", format!("left-hand side {} is not linear", r.pattern)));
            }
            check_rhs(&r.rhs, &output, &states, &vars)?;
            if let Lookahead::Finite(ps) = &r.lookahead {
                for p in ps {
                    input.check_tree(p, p.variables().last().copied().unwrap_or(0))?;
                }
            }
        }
        Ok(Transducer {
            states,
            input,
            output,
            finals,
            rules,
        })
    }

    pub fn states(&self) -> &BTreeSet<Symbol> {
        &self.states
    }

    pub fn input(&self) -> &Signature {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn finals(&self) -> &BTreeSet<Symbol> {
        &self.finals
    }

    pub fn rules(&self) -> &[TdRule] {
        &self.rules
    }

    /// `{t | q(s) ⇒* t, q ∈ I}`. Each nested rewrite on one path counts as
    /// a step; exceeding `step_bound` means a rule without input symbols
    /// keeps firing.
    pub fn derive(&self, s: &Tree, step_bound: usize) -> Result<BTreeSet<Tree>> {
        self.input.check_tree(s, 0)?;
        let mut memo = HashMap::new();
        let mut out = BTreeSet::new();
        for q in &self.finals {
            out.extend(self.derive_from(q, s, step_bound, &mut memo)?);
        }
        Ok(out)
    }

    /// `{t | q(s) ⇒* t}` for a single state.
    pub fn derive_state(&self, q: &Symbol, s: &Tree, step_bound: usize) -> Result<BTreeSet<Tree>> {
        self.input.check_tree(s, 0)?;
        self.derive_from(q, s, step_bound, &mut HashMap::new())
    }

    fn derive_from(
        &self,
        q: &Symbol,
        s: &Tree,
        budget: usize,
        memo: &mut HashMap<(Symbol, Tree), BTreeSet<Tree>>,
    ) -> Result<BTreeSet<Tree>> {
        if let Some(done) = memo.get(&(q.clone(), s.clone())) {
            return Ok(done.clone());
        }
        if budget == 0 {
            return Err(Error::NonterminationSuspected(budget));
        }
        let mut out = BTreeSet::new();
        for r in self.rules.iter().filter(|r| &r.state == q) {
            let n = r.pattern.variables().last().copied().unwrap_or(0);
            let mut binding = vec![None; n];
            if !match_pattern(&r.pattern, s, &mut binding) || !r.lookahead.admits(s)? {
                continue;
            }
            let calls = r.rhs.calls();
            let mut pools = Vec::with_capacity(calls.len());
            for (q2, i) in &calls {
                let sub = binding[i - 1].expect("rhs variables occur in the pattern");
                pools.push(self.derive_from(q2, sub, budget - 1, memo).map_err(|e| match e {
                    Error::NonterminationSuspected(_) => Error::NonterminationSuspected(budget),
                    other => other,
                })?);
            }
            if calls.is_empty() {
                out.insert(r.rhs.fill(&mut [].iter()));
            } else {
                let refs: Vec<&BTreeSet<Tree>> = pools.iter().collect();
                for_each_combination(&refs, |chosen| {
                    out.insert(r.rhs.fill(&mut chosen.iter()));
                });
            }
        }
        memo.insert((q.clone(), s.clone()), out.clone());
        Ok(out)
    }

    pub fn classify(&self) -> TdClass {
        let linear = self.rules.iter().all(|r| {
            let calls = r.rhs.calls();
            let used: BTreeSet<usize> = calls.iter().map(|c| c.1).collect();
            used.len() == calls.len()
        });
        let nondeleting = self.rules.iter().all(|r| {
            let used: BTreeSet<usize> = r.rhs.calls().iter().map(|c| c.1).collect();
            used == r.pattern.variables()
        });
        let fsr = self.rules.iter().all(|r| self.relabeling_rule(r).is_some());
        let fta_shaped = fsr
            && self
                .rules
                .iter()
                .all(|r| matches!((&r.pattern, &r.rhs), (Tree::Node(f, _), Rhs::Out(g, _)) if f == g));
        TdClass {
            linear,
            nondeleting,
            finite_state_relabeling: fsr,
            relabeling: fsr && self.states.len() == 1,
            fta_shaped,
        }
    }

    /// For a rule `q(f(x1..xk)) → g(q1(x1),...,qk(xk))` without look-ahead
    /// (input and output leaves corresponding to each other), returns
    /// `(f, g, [q1..qk])`.
    pub(crate) fn relabeling_rule<'a>(&self, r: &'a TdRule) -> Option<(&'a Symbol, &'a Symbol, Vec<&'a Symbol>)> {
        if r.lookahead != Lookahead::None {
            return None;
        }
        let (Tree::Node(f, xs), Rhs::Out(g, ys)) = (&r.pattern, &r.rhs) else {
            return None;
        };
        if xs.len() != ys.len() || self.input.is_leaf(f.as_str()) != self.output.is_leaf(g.as_str()) {
            return None;
        }
        let mut states = Vec::with_capacity(xs.len());
        for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
            match (x, y) {
                (Tree::Var(a), Rhs::Call(q, b)) if *a == i + 1 && *b == i + 1 => states.push(q),
                _ => return None,
            }
        }
        Some((f, g, states))
    }

    /// The transducer computing `id_{L(A)}`.
    pub fn from_fta(a: &Fta) -> Transducer {
        let states = a.state_ids().map(|q| a.state_name(q).clone()).collect();
        let finals = a.finals().iter().map(|q| a.state_name(*q).clone()).collect();
        let rules = a
            .rules()
            .iter()
            .map(|r| {
                let k = r.children.len();
                TdRule::new(
                    a.state_name(r.target).clone(),
                    Tree::node(r.symbol.clone(), (1..=k).map(Tree::var).collect()),
                    Rhs::Out(
                        r.symbol.clone(),
                        r.children
                            .iter()
                            .enumerate()
                            .map(|(i, c)| Rhs::Call(a.state_name(*c).clone(), i + 1))
                            .collect(),
                    ),
                    Lookahead::None,
                )
            })
            .collect();
        Transducer {
            states,
            input: a.signature().clone(),
            output: a.signature().clone(),
            finals,
            rules,
        }
    }

    /// The automaton of an fta-shaped transducer.
    pub fn to_fta(&self) -> Result<Fta> {
        if !self.classify().fta_shaped {
            return Err(Error::ClassMismatch("transducer is not fta-shaped".into()));
        }
        let mut b = FtaBuilder::new(self.input.clone());
        for q in &self.states {
            b.state(q.clone());
        }
        for q in &self.finals {
            let id = b.state(q.clone());
            b.set_final(id);
        }
        for r in &self.rules {
            let (f, _, qs) = self.relabeling_rule(r).expect("fta-shaped");
            let target = b.state(r.state.clone());
            let kids = qs.into_iter().map(|q| b.state(q.clone())).collect();
            b.rule(target, f.clone(), kids);
        }
        b.build()
    }
}

fn check_rhs(rhs: &Rhs, output: &Signature, states: &BTreeSet<Symbol>, vars: &BTreeSet<usize>) -> Result<()> {
    match rhs {
        Rhs::Call(q, i) => {
            if !states.contains(q) {
                return Err(Error::malformed("transducer", format!("call to unknown state {q}")));
            }
            if !vars.contains(i) {
                return Err(Error::UnboundVariable(*i));
            }
            Ok(())
        }
        Rhs::Out(g, kids) => {
            match output.arity(g.as_str()) {
                Some(k) if k == kids.len() => {}
                _ => {
                    return Err(Error::AlphabetMismatch(format!(
                        "output symbol {g} with {} children is not in the output alphabet",
                        kids.len()
                    )))
                }
            }
            kids.iter().try_for_each(|k| check_rhs(k, output, states, vars))
        }
    }
}

impl fmt::Display for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_transducer(self, f)
    }
}

impl std::str::FromStr for Transducer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        format::parse_transducer(s, &|path: &str| {
            Err(Error::parse(0, format!("look-ahead file @{path} cannot be resolved here")))
        })
    }
}

impl Transducer {
    /// Parses a transducer, loading `@file` look-ahead automata through
    /// `resolve`.
    pub fn parse_with(text: &str, resolve: &LookaheadResolver<'_>) -> Result<Transducer> {
        format::parse_transducer(text, resolve)
    }
}

#[cfg(test)]
mod tests;
