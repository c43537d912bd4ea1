//! Set-level tree-language operations on explicit finite sets.

use std::collections::BTreeSet;

use super::for_each_combination;
use crate::alphabet::Symbol;
use crate::tree::Tree;

/// `f(L1,...,Lk) = {f(t1,...,tk) | ti ∈ Li}`.
pub fn lang_top_catenation(f: &Symbol, ls: &[BTreeSet<Tree>]) -> BTreeSet<Tree> {
    let mut out = BTreeSet::new();
    if ls.is_empty() {
        out.insert(Tree::leaf(f.clone()));
        return out;
    }
    let pools: Vec<&BTreeSet<Tree>> = ls.iter().collect();
    for_each_combination(&pools, |kids| {
        out.insert(Tree::node(f.clone(), kids.to_vec()));
    });
    out
}

/// `L •_v L'`: every occurrence of `v` is replaced by a member of `L'`,
/// independently per occurrence.
pub fn lang_v_product(l: &BTreeSet<Tree>, l2: &BTreeSet<Tree>, v: &str) -> BTreeSet<Tree> {
    let mut out = BTreeSet::new();
    for t in l {
        let n = t.count_symbol(v);
        if n == 0 {
            out.insert(t.clone());
            continue;
        }
        let pools: Vec<&BTreeSet<Tree>> = vec![l2; n];
        for_each_combination(&pools, |ts| {
            out.insert(t.substitute_leaf(v, ts).expect("occurrence count matches"));
        });
    }
    out
}

/// `{t ∈ candidates | {t} •_v L' ∩ L ≠ ∅}`.
pub fn lang_v_quotient(
    l: &BTreeSet<Tree>,
    l2: &BTreeSet<Tree>,
    candidates: &BTreeSet<Tree>,
    v: &str,
) -> BTreeSet<Tree> {
    candidates
        .iter()
        .filter(|t| {
            let single: BTreeSet<Tree> = std::iter::once((*t).clone()).collect();
            lang_v_product(&single, l2, v).iter().any(|u| l.contains(u))
        })
        .cloned()
        .collect()
}
