use std::collections::BTreeSet;

use super::Bimorphism;
use crate::alphabet::Signature;
use crate::fta::{Fta, FtaBuilder};
use crate::hom::TreeHom;
use crate::tree::{Context, Tree};

/// Two symbol-to-symbol homomorphisms on `{f/2, g/1, e/0}`, one swapping
/// the children of `f`, and `L = {f(gᵐ(e), gⁿ(e))}`.
#[derive(Clone, Debug)]
pub struct NonclosureWitness {
    pub signature: Signature,
    pub psi1: TreeHom,
    pub psi2: TreeHom,
    pub language: Fta,
}

pub fn nonclosure_witness() -> NonclosureWitness {
    let sig = Signature::build(&[("f", 2), ("g", 1), ("e", 0)], &[]).expect("fixed alphabet");
    let hom = |f: &str| {
        TreeHom::from_images(sig.clone(), sig.clone(), &[("f", f), ("g", "g(x1)"), ("e", "e")]).expect("fixed hom")
    };
    let mut b = FtaBuilder::new(sig.clone());
    let p = b.state("p");
    let s = b.state("s");
    b.set_final(s);
    b.rule(p, "e", vec![]);
    b.rule(p, "g", vec![p]);
    b.rule(s, "f", vec![p, p]);
    NonclosureWitness {
        psi1: hom("f(x1,x2)"),
        psi2: hom("f(x2,x1)"),
        language: b.build().expect("fixed automaton"),
        signature: sig,
    }
}

impl NonclosureWitness {
    /// `{(s, sψ1) | s ∈ L, hg(s) ≤ h, sψ1 = sψ2}`, the graph intersection
    /// restricted to `L`, by enumeration.
    pub fn intersection_pairs(&self, h: usize) -> BTreeSet<(Tree, Tree)> {
        self.language
            .enumerate(h)
            .into_iter()
            .filter_map(|s| {
                let a = self.psi1.apply(&s).expect("tree over the fixture alphabet");
                let b = self.psi2.apply(&s).expect("tree over the fixture alphabet");
                (a == b).then_some((s, a))
            })
            .collect()
    }

    /// `(ψ1 ∩ ψ2)(L)` restricted to inputs of height at most `h`.
    pub fn image(&self, h: usize) -> BTreeSet<Tree> {
        self.intersection_pairs(h).into_iter().map(|(_, t)| t).collect()
    }

    /// `f(Cⁿ[e], Cⁿ[e])` for `C = g(x1)`; `Cⁿ` stacks `n + 1` copies of `C`.
    pub fn diagonal_member(n: usize) -> Tree {
        let c = Context::new(Tree::node("g", vec![Tree::var(1)]), 1).expect("one-hole context");
        let arm = c.iterate(n).and_then(|c| c.fill(&[Tree::leaf("e")])).expect("one hole");
        Tree::node("f", vec![arm.clone(), arm])
    }

    /// `f(gⁿ(e), gⁿ(e))` for every `n` with height at most `h`, so
    /// including `f(e,e)`.
    pub fn diagonal(h: usize) -> BTreeSet<Tree> {
        (0..h)
            .map(|n| {
                let arm = Tree::iterate_unary(&"g".into(), n, Tree::leaf("e"));
                Tree::node("f", vec![arm.clone(), arm])
            })
            .collect()
    }
}

/// `(φ, {e}, id)` over `{f/2, e/0}` with `φ(e) = f(v1,v2)`, defining
/// `{(f(v1,v2), e)}`.
pub fn qaln() -> Bimorphism {
    let sigma = Signature::build(&[("f", 2), ("e", 0)], &[]).expect("fixed alphabet");
    let target = Signature::build(&[("f", 2), ("e", 0)], &["v1", "v2"]).expect("fixed alphabet");
    let phi = TreeHom::from_images(sigma.clone(), target, &[("f", "f(x1,x2)"), ("e", "f(v1,v2)")]).expect("fixed hom");
    let center = Fta::singleton(sigma.clone(), &Tree::leaf("e")).expect("tree over the alphabet");
    Bimorphism::new(phi, center, TreeHom::identity(sigma)).expect("shared source")
}
