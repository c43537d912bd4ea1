use std::collections::BTreeMap;

use super::Bimorphism;
use crate::alphabet::{Signature, Symbol};
use crate::error::Result;
use crate::hom::TreeHom;
use crate::tree::Tree;

/// Leaf added to `V` or `Y` when it is empty.
pub const PAD_V: &str = "$v";
pub const PAD_Y: &str = "$y";

fn pair_leaf(v: &Symbol, y: &Symbol) -> Symbol {
    Symbol::new(format!("<{v},{y}>"))
}

fn positions(w: &[usize]) -> String {
    w.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(".")
}

/// Child positions of `t` (a root over leaves and variables): those of
/// `x1..xk` in variable order, then those holding a leaf, left to right.
fn split_children(t: &Tree, k: usize) -> (Vec<usize>, Vec<(usize, Symbol)>) {
    let mut vars = vec![0; k];
    let mut leaves = Vec::new();
    for (p, c) in t.children().iter().enumerate() {
        match c {
            Tree::Var(i) => vars[i - 1] = p + 1,
            Tree::Node(v, _) => leaves.push((p + 1, v.clone())),
        }
    }
    (vars, leaves)
}

/// `g` with child position `w_a` receiving `x_a`.
fn project(g: &Symbol, w: &[usize]) -> Tree {
    let mut kids = vec![Tree::var(1); w.len()];
    for (a, p) in w.iter().enumerate() {
        kids[p - 1] = Tree::var(a + 1);
    }
    Tree::node(g.clone(), kids)
}

fn padded(sig: &Signature, pad: &str) -> Result<Signature> {
    if sig.leaves().is_empty() {
        sig.with_leaf(Symbol::new(pad))
    } else {
        Ok(sig.clone())
    }
}

impl Bimorphism {
    /// An alphabetic bimorphism `(φ_Σ, ρ(L), φ_Δ)` over join symbols
    /// `<g[w],h[w']>` and pair leaves `<v,y>` defining the same relation.
    ///
    /// For `t = φ_k(f)`, `u = ψ_k(f)` with leaf positions `i_1..i_m` and
    /// `j_1..j_n`, `ρ_k(f)` is the join symbol over `x1..xk` followed by
    /// `max(m,n)` pair-leaf fillers carrying the leaves of `t` and `u`;
    /// `φ_Σ` routes `x_a` to child `w_a` of `g` and deletes the rest.
    /// A center tree of height `d` maps to height at most `d + 1`.
    pub fn to_alphabetic(&self) -> Result<Bimorphism> {
        self.require_quasi_alphabetic()?;
        let left = padded(self.phi.target(), PAD_V)?;
        let right = padded(self.psi.target(), PAD_Y)?;
        let least_v = left.leaves().iter().next().expect("padded").clone();
        let least_y = right.leaves().iter().next().expect("padded").clone();

        let mut sig = Signature::default();
        let mut maps: [(BTreeMap<Symbol, Tree>, BTreeMap<Symbol, Tree>); 2] = Default::default();
        let add_pair = |sig: &mut Signature, maps: &mut [(BTreeMap<Symbol, Tree>, BTreeMap<Symbol, Tree>); 2], v: &Symbol, y: &Symbol| -> Result<Symbol> {
            let name = pair_leaf(v, y);
            if !sig.is_leaf(name.as_str()) {
                *sig = sig.with_leaf(name.clone())?;
                maps[0].0.insert(name.clone(), Tree::leaf(v.clone()));
                maps[1].0.insert(name.clone(), Tree::leaf(y.clone()));
            }
            Ok(name)
        };

        let source = self.phi.source();
        let mut rho_leaves = BTreeMap::new();
        let mut rho_symbols = BTreeMap::new();
        for z in source.leaves().iter() {
            let v = self.phi.image(z.as_str()).and_then(Tree::symbol).expect("leaf-to-leaf");
            let y = self.psi.image(z.as_str()).and_then(Tree::symbol).expect("leaf-to-leaf");
            let name = add_pair(&mut sig, &mut maps, v, y)?;
            rho_leaves.insert(z.clone(), Tree::leaf(name));
        }
        for (f, k) in source.ranked().iter() {
            let t = self.phi.image(f.as_str()).expect("validated");
            let u = self.psi.image(f.as_str()).expect("validated");
            let (g, h) = (t.symbol().expect("not a variable"), u.symbol().expect("not a variable"));
            let (mut w, t_leaves) = split_children(t, k);
            let (mut w2, u_leaves) = split_children(u, k);
            w.extend(t_leaves.iter().map(|(p, _)| *p));
            w2.extend(u_leaves.iter().map(|(p, _)| *p));
            let l = t_leaves.len().max(u_leaves.len());
            let name = Symbol::new(format!("<{g}[{}],{h}[{}]>", positions(&w), positions(&w2)));
            if sig.arity(name.as_str()).is_none() {
                sig = sig.with_symbol(name.clone(), k + l)?;
                maps[0].1.insert(name.clone(), project(g, &w));
                maps[1].1.insert(name.clone(), project(h, &w2));
            }
            let mut kids: Vec<Tree> = (1..=k).map(Tree::var).collect();
            for a in 0..l {
                let v = t_leaves.get(a).map_or(&least_v, |(_, v)| v);
                let y = u_leaves.get(a).map_or(&least_y, |(_, y)| y);
                kids.push(Tree::leaf(add_pair(&mut sig, &mut maps, v, y)?));
            }
            rho_symbols.insert(f.clone(), Tree::node(name, kids));
        }
        let rho = TreeHom::new(source.clone(), sig.clone(), rho_leaves, rho_symbols)?;
        let center = self.center.image(&rho)?;
        let [(l1, s1), (l2, s2)] = maps;
        let phi = TreeHom::new(sig.clone(), left, l1, s1)?;
        let psi = TreeHom::new(sig, right, l2, s2)?;
        Bimorphism::new(phi, center, psi)
    }
}
