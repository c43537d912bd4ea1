use std::collections::BTreeMap;

use super::Bimorphism;
use crate::alphabet::{Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::Fta;
use crate::hom::TreeHom;
use crate::tree::Tree;

/// The used part of `[Σ × Δ]` with leaves `V × Y`: symbols `<t,u>` of rank
/// `k` for depth-one `t ∈ C^k_Σ(V)`, `u ∈ C^k_Δ(Y)`, and leaves `<v,y>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductAlphabet {
    left: Signature,
    right: Signature,
    signature: Signature,
    components: BTreeMap<Symbol, (Tree, Tree)>,
}

impl ProductAlphabet {
    pub fn new(left: Signature, right: Signature) -> ProductAlphabet {
        ProductAlphabet {
            left,
            right,
            signature: Signature::default(),
            components: BTreeMap::new(),
        }
    }

    /// `(Σ, V)`.
    pub fn left(&self) -> &Signature {
        &self.left
    }

    /// `(Δ, Y)`.
    pub fn right(&self) -> &Signature {
        &self.right
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn components(&self, symbol: &str) -> Option<&(Tree, Tree)> {
        self.components.get(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, &(Tree, Tree))> {
        self.components.iter()
    }

    /// Adds `<t,u>` (or the leaf `<v,y>`), returning its name.
    pub fn insert(&mut self, t: &Tree, u: &Tree) -> Result<Symbol> {
        let name = Symbol::new(format!("<{t},{u}>"));
        if self.components.contains_key(&name) {
            return Ok(name);
        }
        let is_leaf = |sig: &Signature, x: &Tree| x.symbol().is_some_and(|v| sig.is_leaf(v.as_str()));
        let pair_leaf = is_leaf(&self.left, t) && is_leaf(&self.right, u);
        let k = t.variables().len();
        let well_formed = pair_leaf
            || (!t.is_var()
                && !u.is_var()
                && !is_leaf(&self.left, t)
                && !is_leaf(&self.right, u)
                && t.is_linear(k)
                && t.is_nondeleting(k)
                && u.is_linear(k)
                && u.is_nondeleting(k));
        if !well_formed {
            return Err(Error::ClassMismatch(format!("<{t},{u}> is not a product symbol")));
        }
        self.left.check_tree(t, k)?;
        self.right.check_tree(u, k)?;
        self.signature = if pair_leaf {
            self.signature.with_leaf(name.clone())?
        } else {
            self.signature.with_symbol(name.clone(), k)?
        };
        self.components.insert(name.clone(), (t.clone(), u.clone()));
        Ok(name)
    }

    /// The canonical projections `ρ¹` and `ρ²`.
    pub fn projections(&self) -> Result<(TreeHom, TreeHom)> {
        let mut maps: [(BTreeMap<Symbol, Tree>, BTreeMap<Symbol, Tree>); 2] = Default::default();
        for (name, (t, u)) in &self.components {
            let leaf = self.signature.is_leaf(name.as_str());
            for (i, img) in [t, u].into_iter().enumerate() {
                if leaf {
                    maps[i].0.insert(name.clone(), img.clone());
                } else {
                    maps[i].1.insert(name.clone(), img.clone());
                }
            }
        }
        let [(l1, s1), (l2, s2)] = maps;
        Ok((
            TreeHom::new(self.signature.clone(), self.left.clone(), l1, s1)?,
            TreeHom::new(self.signature.clone(), self.right.clone(), l2, s2)?,
        ))
    }

    /// Union of two product alphabets over compatible bases.
    pub fn merge(&self, other: &ProductAlphabet) -> Result<ProductAlphabet> {
        let mut out = ProductAlphabet::new(self.left.union(&other.left)?, self.right.union(&other.right)?);
        for (_, (t, u)) in self.components.iter().chain(other.components.iter()) {
            out.insert(t, u)?;
        }
        Ok(out)
    }
}

impl Bimorphism {
    /// `η` with `η(z) = <zφ,zψ>` and `η(f) = <φ_k(f),ψ_k(f)>(x1..xk)`, and
    /// `L' = η(L)`, so that `τ_B = {(tρ¹, tρ²) | t ∈ L'}`.
    pub fn canonical_form(&self) -> Result<(ProductAlphabet, Fta)> {
        let (eta, product) = self.eta()?;
        Ok((product, self.center.image(&eta)?))
    }

    /// The homomorphism `η` and the product alphabet it maps into.
    pub fn eta(&self) -> Result<(TreeHom, ProductAlphabet)> {
        self.require_quasi_alphabetic()?;
        let mut product = ProductAlphabet::new(self.phi.target().clone(), self.psi.target().clone());
        let mut leaf_map = BTreeMap::new();
        let mut symbol_map = BTreeMap::new();
        for (f, k) in self.phi.source().symbols() {
            let t = self.phi.image(f.as_str()).expect("validated");
            let u = self.psi.image(f.as_str()).expect("validated");
            let name = product.insert(t, u)?;
            if self.phi.source().is_leaf(f.as_str()) {
                leaf_map.insert(f, Tree::leaf(name));
            } else {
                symbol_map.insert(f, Tree::node(name, (1..=k).map(Tree::var).collect()));
            }
        }
        let eta = TreeHom::new(
            self.phi.source().clone(),
            product.signature().clone(),
            leaf_map,
            symbol_map,
        )?;
        Ok((eta, product))
    }

    /// `(ρ¹, L', ρ²)` over the product alphabet.
    pub fn canonical(&self) -> Result<Bimorphism> {
        let (product, center) = self.canonical_form()?;
        let (rho1, rho2) = product.projections()?;
        Bimorphism::new(rho1, center, rho2)
    }

    /// `(ρ¹, L1' ∪ L2', ρ²)` over the merged product alphabet.
    pub fn union(&self, other: &Bimorphism) -> Result<Bimorphism> {
        let (p1, l1) = self.canonical_form()?;
        let (p2, l2) = other.canonical_form()?;
        let product = p1.merge(&p2)?;
        let sig = product.signature().clone();
        let center = l1.with_signature(sig.clone())?.union(&l2.with_signature(sig)?)?;
        let (rho1, rho2) = product.projections()?;
        Bimorphism::new(rho1, center, rho2)
    }
}
