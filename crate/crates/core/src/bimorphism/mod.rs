//! Tree bimorphisms `B = (φ, L, ψ)` defining `τ_B = {(tφ, tψ) | t ∈ L}`.

mod alphabetic;
mod canonical;
mod cfg_product;
mod fixtures;
mod format;
mod relabeling;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fta::{for_each_combination, Fta};
use crate::hom::TreeHom;
use crate::tree::{Tree, Word};

pub use canonical::ProductAlphabet;
pub use alphabetic::{PAD_V, PAD_Y};
pub use cfg_product::{cfg_product_parts, CfgProductParts, PAD0, PAD1};
pub use fixtures::{nonclosure_witness, qaln, NonclosureWitness};
pub use format::BimorphismResolver;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimorphism {
    phi: TreeHom,
    center: Fta,
    psi: TreeHom,
}

/// Conjunction of the classes of both homomorphisms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BimClass {
    pub quasi_alphabetic: bool,
    pub alphabetic: bool,
    pub strictly_alphabetic: bool,
}

impl BimClass {
    pub fn flags(&self) -> Vec<&'static str> {
        [
            (self.quasi_alphabetic, "quasi_alphabetic"),
            (self.alphabetic, "alphabetic"),
            (self.strictly_alphabetic, "strictly_alphabetic"),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| n)
        .collect()
    }
}

/// A pair of yields `(yd_V(tφ), yd_Y(tψ))`.
pub type WordPair = (Word, Word);

impl Bimorphism {
    /// `φ` and `ψ` must share their source signature; the center is re-read
    /// over it, so nullary center symbols may stand for source leaves.
    pub fn new(phi: TreeHom, center: Fta, psi: TreeHom) -> Result<Bimorphism> {
        if phi.source() != psi.source() {
            return Err(Error::AlphabetMismatch(
                "the two homomorphisms have different source alphabets".into(),
            ));
        }
        let center = center.with_signature(phi.source().clone())?;
        Ok(Bimorphism { phi, center, psi })
    }

    pub fn phi(&self) -> &TreeHom {
        &self.phi
    }

    pub fn center(&self) -> &Fta {
        &self.center
    }

    pub fn psi(&self) -> &TreeHom {
        &self.psi
    }

    pub fn classify(&self) -> BimClass {
        let (a, b) = (self.phi.classify(), self.psi.classify());
        BimClass {
            quasi_alphabetic: a.quasi_alphabetic && b.quasi_alphabetic,
            alphabetic: a.alphabetic && b.alphabetic,
            strictly_alphabetic: a.strictly_alphabetic && b.strictly_alphabetic,
        }
    }

    pub(crate) fn require_quasi_alphabetic(&self) -> Result<()> {
        if self.classify().quasi_alphabetic {
            Ok(())
        } else {
            Err(Error::ClassMismatch("the bimorphism is not quasi-alphabetic".into()))
        }
    }

    /// `{(tφ, tψ) | t ∈ L, hg(t) ≤ h}`.
    pub fn relation(&self, h: usize) -> BTreeSet<(Tree, Tree)> {
        self.center
            .enumerate(h)
            .iter()
            .map(|t| {
                (
                    self.phi.apply(t).expect("center trees are over the source alphabet"),
                    self.psi.apply(t).expect("center trees are over the source alphabet"),
                )
            })
            .collect()
    }

    /// The pairs of `relation(center_h)` whose input tree has height at
    /// most `input_h`. When every center tree producing such a pair has
    /// height at most `center_h`, this is an exact slice of `τ_B`.
    pub fn relation_slice(&self, input_h: usize, center_h: usize) -> BTreeSet<(Tree, Tree)> {
        self.relation(center_h)
            .into_iter()
            .filter(|(s, _)| s.height() <= input_h)
            .collect()
    }

    /// `{(yd_V(tφ), yd_Y(tψ)) | t ∈ L, hg(t) ≤ h}`, computed per center
    /// state and height on yield pairs instead of trees.
    pub fn translation(&self, h: usize) -> BTreeSet<WordPair> {
        let a = self.center.trim();
        let n = a.state_count();
        let by_symbol = a.rules_by_symbol();
        let v = self.phi.target().leaves();
        let y = self.psi.target().leaves();
        let mut level: Vec<BTreeSet<WordPair>> = vec![BTreeSet::new(); n];
        for d in 0..=h {
            let mut next: Vec<BTreeSet<WordPair>> = vec![BTreeSet::new(); n];
            for (f, rules) in &by_symbol {
                let lhs = self.phi.image(f.as_str()).expect("validated");
                let rhs = self.psi.image(f.as_str()).expect("validated");
                for r in rules {
                    if r.children.is_empty() {
                        next[r.target.0].insert((lhs.yield_over(v), rhs.yield_over(y)));
                    } else if d > 0 {
                        let pools: Vec<&BTreeSet<WordPair>> = r.children.iter().map(|c| &level[c.0]).collect();
                        for_each_combination(&pools, |kids| {
                            next[r.target.0].insert((
                                splice_yield(lhs, v, kids, |p| &p.0),
                                splice_yield(rhs, y, kids, |p| &p.1),
                            ));
                        });
                    }
                }
            }
            level = next;
        }
        a.finals().iter().flat_map(|q| level[q.0].iter().cloned()).collect()
    }

    /// `sτ_B = {tψ | t ∈ L, tφ = s}` as an automaton.
    pub fn apply(&self, s: &Tree) -> Result<Fta> {
        if !self.phi.is_linear() {
            return Err(Error::ClassMismatch("apply needs a linear input homomorphism".into()));
        }
        let pre = self.phi.preimage_of(s)?;
        pre.intersection(&self.center)?.image(&self.psi)
    }

    /// `(ψ, L, φ)`.
    pub fn invert(&self) -> Bimorphism {
        Bimorphism {
            phi: self.psi.clone(),
            center: self.center.clone(),
            psi: self.phi.clone(),
        }
    }
}

/// Yield of `pattern` over `leaves`, with `x_i` replaced by the word
/// chosen for child `i`.
fn splice_yield(
    pattern: &Tree,
    leaves: &crate::alphabet::LeafAlphabet,
    kids: &[WordPair],
    pick: impl Fn(&WordPair) -> &Word + Copy,
) -> Word {
    let mut out = Vec::new();
    fn walk(
        t: &Tree,
        leaves: &crate::alphabet::LeafAlphabet,
        kids: &[WordPair],
        pick: impl Fn(&WordPair) -> &Word + Copy,
        out: &mut Word,
    ) {
        match t {
            Tree::Var(i) => out.extend(pick(&kids[i - 1]).iter().cloned()),
            Tree::Node(f, children) => {
                if children.is_empty() && leaves.contains(f.as_str()) {
                    out.push(f.clone());
                }
                for c in children.iter() {
                    walk(c, leaves, kids, pick, out);
                }
            }
        }
    }
    walk(pattern, leaves, kids, pick, &mut out);
    out
}

impl fmt::Display for Bimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format::write_bimorphism(self, f)
    }
}

impl std::str::FromStr for Bimorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        format::parse_bimorphism(s, &|path: &str| {
            Err(Error::parse(0, format!("component file {path} cannot be resolved here")))
        })
    }
}

impl Bimorphism {
    /// Parses a bimorphism whose components may be given as file
    /// references, loaded through `resolve`.
    pub fn parse_with(text: &str, resolve: &BimorphismResolver<'_>) -> Result<Bimorphism> {
        format::parse_bimorphism(text, resolve)
    }
}

#[cfg(test)]
mod tests;
