use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{for_each_combination, Fta, FtaBuilder, FtaRule, StateId};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::hom::TreeHom;
use crate::tree::Tree;

impl Fta {
    /// Disjoint-state union; `L(A ∪ B) = L(A) ∪ L(B)`.
    pub fn union(&self, other: &Fta) -> Result<Fta> {
        let signature = self.signature.union(&other.signature)?;
        let mut b = FtaBuilder::new(signature);
        for (tag, a) in [("u1", self), ("u2", other)] {
            let ids: Vec<StateId> = a
                .states
                .iter()
                .map(|q| b.state(format!("{tag}.{q}")))
                .collect();
            for r in &a.rules {
                b.rule(ids[r.target.0], r.symbol.clone(), r.children.iter().map(|c| ids[c.0]).collect());
            }
            for q in &a.finals {
                b.set_final(ids[q.0]);
            }
        }
        b.build()
    }

    /// Product automaton restricted to pairs that recognize some tree.
    pub fn intersection(&self, other: &Fta) -> Result<Fta> {
        let signature = self.signature.union(&other.signature)?;
        let left = self.rules_by_symbol();
        let right = other.rules_by_symbol();
        let mut pairs: BTreeSet<(StateId, StateId)> = BTreeSet::new();
        let mut product_rules: BTreeSet<((StateId, StateId), Symbol, Vec<(StateId, StateId)>)> = BTreeSet::new();
        loop {
            let before = product_rules.len();
            for (f, lrules) in &left {
                let Some(rrules) = right.get(f) else { continue };
                for lr in lrules {
                    for rr in rrules {
                        let kids: Vec<(StateId, StateId)> =
                            lr.children.iter().copied().zip(rr.children.iter().copied()).collect();
                        if kids.iter().all(|p| pairs.contains(p)) {
                            let target = (lr.target, rr.target);
                            if product_rules.insert((target, (*f).clone(), kids)) {
                                pairs.insert(target);
                            }
                        }
                    }
                }
            }
            if product_rules.len() == before {
                break;
            }
        }
        let mut b = FtaBuilder::new(signature);
        let name = |p: &(StateId, StateId)| format!("<{},{}>", self.state_name(p.0), other.state_name(p.1));
        let ids: BTreeMap<(StateId, StateId), StateId> = pairs.iter().map(|p| (*p, b.state(name(p)))).collect();
        for (target, f, kids) in product_rules {
            b.rule(ids[&target], f, kids.iter().map(|k| ids[k]).collect());
        }
        for (p, id) in &ids {
            if self.is_final(p.0) && other.is_final(p.1) {
                b.set_final(*id);
            }
        }
        Ok(b.build()?.trim())
    }

    /// `{tφ | t ∈ L(A)}` for a linear homomorphism φ.
    pub fn image(&self, hom: &TreeHom) -> Result<Fta> {
        if !hom.is_linear() {
            return Err(Error::NonlinearHom(
                "the image of a recognizable language under a non-linear homomorphism need not be recognizable".into(),
            ));
        }
        let a = self.trim();
        let mut b = FtaBuilder::new(hom.target().clone());
        let ids: Vec<StateId> = a.states.iter().map(|q| b.state(q.clone())).collect();
        let mut epsilon: Vec<(StateId, StateId)> = Vec::new();
        for (ri, r) in a.rules.iter().enumerate() {
            let rhs = hom
                .image(r.symbol.as_str())
                .ok_or_else(|| Error::UnmappedSymbol(r.symbol.to_string()))?;
            let kids: Vec<StateId> = r.children.iter().map(|c| ids[c.0]).collect();
            match rhs {
                Tree::Var(i) => epsilon.push((ids[r.target.0], kids[i - 1])),
                Tree::Node(g, children) => {
                    let args: Vec<StateId> = children
                        .iter()
                        .enumerate()
                        .map(|(j, c)| pattern_state(&mut b, c, &kids, &format!("{}#{ri}.{}", a.states[r.target.0], j + 1)))
                        .collect();
                    b.rule(ids[r.target.0], g.clone(), args);
                }
            }
        }
        for q in &a.finals {
            b.set_final(ids[q.0]);
        }
        let raw = b.build()?;
        Ok(eliminate_epsilon(raw, &epsilon).trim())
    }

    /// `{t | tφ ∈ L(A)}` for an arbitrary homomorphism φ, by a
    /// deterministic subset construction over `L(A)`'s states.
    pub fn preimage_hom(&self, hom: &TreeHom) -> Result<Fta> {
        let by_symbol = self.rules_by_symbol();
        let symbols = hom.source().symbols();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut index: HashMap<BTreeSet<StateId>, usize> = HashMap::new();
        let mut transitions: BTreeSet<(usize, Symbol, Vec<usize>)> = BTreeSet::new();
        loop {
            let before = (subsets.len(), transitions.len());
            for (f, k) in &symbols {
                let rhs = hom.image(f.as_str()).ok_or_else(|| Error::UnmappedSymbol(f.to_string()))?;
                let ids: BTreeSet<usize> = (0..subsets.len()).collect();
                let pools: Vec<&BTreeSet<usize>> = vec![&ids; *k];
                let mut found: Vec<(BTreeSet<StateId>, Vec<usize>)> = Vec::new();
                let snapshot = &subsets;
                let mut eval = |kids: &[usize]| {
                    let args: Vec<&BTreeSet<StateId>> = kids.iter().map(|i| &snapshot[*i]).collect();
                    found.push((run_pattern(&by_symbol, rhs, &args), kids.to_vec()));
                };
                if *k == 0 {
                    eval(&[]);
                } else {
                    for_each_combination(&pools, &mut eval);
                }
                for (set, kids) in found {
                    let id = *index.entry(set.clone()).or_insert_with(|| {
                        subsets.push(set);
                        subsets.len() - 1
                    });
                    transitions.insert((id, f.clone(), kids));
                }
            }
            if (subsets.len(), transitions.len()) == before {
                break;
            }
        }
        let mut b = FtaBuilder::new(hom.source().clone());
        let ids: Vec<StateId> = subsets
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|q| self.state_name(*q).as_str()).collect();
                b.state(format!("{{{}}}", names.join(",")))
            })
            .collect();
        for (target, f, kids) in transitions {
            b.rule(ids[target], f, kids.iter().map(|k| ids[*k]).collect());
        }
        for (i, s) in subsets.iter().enumerate() {
            if s.iter().any(|q| self.is_final(*q)) {
                b.set_final(ids[i]);
            }
        }
        Ok(b.build()?.trim())
    }
}

/// Adds states for the non-root part of an image pattern. Variable `x_i`
/// resolves to `kids[i-1]`.
fn pattern_state(b: &mut FtaBuilder, t: &Tree, kids: &[StateId], name: &str) -> StateId {
    match t {
        Tree::Var(i) => kids[i - 1],
        Tree::Node(g, children) => {
            let args: Vec<StateId> = children
                .iter()
                .enumerate()
                .map(|(j, c)| pattern_state(b, c, kids, &format!("{name}.{}", j + 1)))
                .collect();
            let q = b.state(name);
            b.rule(q, g.clone(), args);
            q
        }
    }
}

/// Removes `(p, q)` edges meaning `L_p ⊇ L_q`.
fn eliminate_epsilon(a: Fta, epsilon: &[(StateId, StateId)]) -> Fta {
    if epsilon.is_empty() {
        return a;
    }
    let n = a.states.len();
    let mut closure: Vec<BTreeSet<StateId>> = (0..n).map(|q| BTreeSet::from([StateId(q)])).collect();
    loop {
        let mut changed = false;
        for &(p, q) in epsilon {
            let add: Vec<StateId> = closure[q.0].iter().copied().collect();
            for s in add {
                changed |= closure[p.0].insert(s);
            }
        }
        if !changed {
            break;
        }
    }
    let mut by_target: HashMap<StateId, Vec<&FtaRule>> = HashMap::new();
    for r in &a.rules {
        by_target.entry(r.target).or_default().push(r);
    }
    let mut rules = BTreeSet::new();
    for p in 0..n {
        for s in &closure[p] {
            for r in by_target.get(s).into_iter().flatten() {
                rules.insert(FtaRule {
                    target: StateId(p),
                    symbol: r.symbol.clone(),
                    children: r.children.clone(),
                });
            }
        }
    }
    Fta {
        rules: rules.into_iter().collect(),
        ..a
    }
}

/// States reachable at the root of `t` when variable `x_i` stands for
/// any tree with state set `args[i-1]`.
fn run_pattern(
    by_symbol: &BTreeMap<&Symbol, Vec<&FtaRule>>,
    t: &Tree,
    args: &[&BTreeSet<StateId>],
) -> BTreeSet<StateId> {
    match t {
        Tree::Var(i) => args[i - 1].clone(),
        Tree::Node(f, kids) => {
            let child_sets: Vec<BTreeSet<StateId>> = kids.iter().map(|c| run_pattern(by_symbol, c, args)).collect();
            by_symbol
                .get(f)
                .into_iter()
                .flatten()
                .filter(|r| r.children.iter().zip(&child_sets).all(|(q, s)| s.contains(q)))
                .map(|r| r.target)
                .collect()
        }
    }
}
