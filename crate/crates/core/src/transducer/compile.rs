use super::{Lookahead, Rhs, TdRule, Transducer};
use crate::bimorphism::Bimorphism;
use crate::error::Result;
use crate::tree::Tree;

/// `ψ_k(f)` with `x_i` replaced by the call `q_i(x_{j_i})`.
fn output(u: &Tree, calls: &[Rhs]) -> Rhs {
    match u {
        Tree::Var(i) => calls[i - 1].clone(),
        Tree::Node(g, kids) => Rhs::Out(g.clone(), kids.iter().map(|k| output(k, calls)).collect()),
    }
}

impl Transducer {
    /// A linear top-down transducer with finite look-ahead computing `τ_B`.
    ///
    /// A center rule `q → z` becomes `q(zφ) → zψ` with look-ahead `{x1}`; a
    /// rule `q → f(q1..qk)` with `φ_k(f) = g(u1..un)` becomes
    /// `q(g(x1..xn)) → ψ_k(f)[q1(x_{j1}),...,qk(x_{jk})]`, where `x_i` is
    /// the `j_i`-th child of `φ_k(f)`, with look-ahead `{φ_k(f)}`.
    pub fn compile_bimorphism(b: &Bimorphism) -> Result<Transducer> {
        b.require_quasi_alphabetic()?;
        let (phi, psi, n) = (b.phi(), b.psi(), b.center());
        let name = |q| n.state_name(q).clone();
        let mut rules = Vec::with_capacity(n.rules().len());
        for r in n.rules() {
            let t = phi.image(r.symbol.as_str()).expect("validated");
            let u = psi.image(r.symbol.as_str()).expect("validated");
            if phi.source().is_leaf(r.symbol.as_str()) {
                rules.push(TdRule::new(name(r.target), t.clone(), output(u, &[]), Lookahead::Finite(vec![Tree::var(1)])));
                continue;
            }
            let mut calls = vec![Rhs::leaf("?"); r.children.len()];
            for (j, child) in t.children().iter().enumerate() {
                if let Tree::Var(i) = child {
                    calls[i - 1] = Rhs::Call(name(r.children[i - 1]), j + 1);
                }
            }
            let g = t.symbol().expect("quasi-alphabetic image").clone();
            let pattern = Tree::node(g, (1..=t.arity()).map(Tree::var).collect());
            rules.push(TdRule::new(name(r.target), pattern, output(u, &calls), Lookahead::Finite(vec![t.clone()])));
        }
        let states = n.state_ids().map(name).collect();
        let finals = n.finals().iter().map(|q| name(*q)).collect();
        Transducer::new(states, phi.target().clone(), psi.target().clone(), finals, rules)
    }
}
