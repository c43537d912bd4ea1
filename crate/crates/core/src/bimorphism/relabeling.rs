use std::collections::BTreeMap;

use super::Bimorphism;
use crate::alphabet::{RankedAlphabet, LeafAlphabet, Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::FtaBuilder;
use crate::hom::TreeHom;
use crate::transducer::Transducer;
use crate::tree::Tree;

impl Bimorphism {
    /// The strictly alphabetic bimorphism of a finite-state relabeling:
    /// the center holds run trees over rule names `r1, r2, ...`, read by
    /// `φ` as input and by `ψ` as output.
    pub fn from_relabeling(m: &Transducer) -> Result<Bimorphism> {
        if !m.classify().finite_state_relabeling {
            return Err(Error::ClassMismatch("transducer is not a finite-state relabeling".into()));
        }
        let mut ranked = RankedAlphabet::new();
        let mut leaves = LeafAlphabet::new();
        let mut images: [(BTreeMap<Symbol, Tree>, BTreeMap<Symbol, Tree>); 2] = Default::default();
        let mut shapes = Vec::with_capacity(m.rules().len());
        for (i, r) in m.rules().iter().enumerate() {
            let (f, g, qs) = m.relabeling_rule(r).expect("finite-state relabeling");
            let name = Symbol::new(format!("r{}", i + 1));
            let k = qs.len();
            let xs = |s: &Symbol| Tree::node(s.clone(), (1..=k).map(Tree::var).collect());
            if m.input().is_leaf(f.as_str()) {
                leaves.insert(name.clone())?;
                images[0].0.insert(name.clone(), Tree::leaf(f.clone()));
                images[1].0.insert(name.clone(), Tree::leaf(g.clone()));
            } else {
                ranked.insert(name.clone(), k)?;
                images[0].1.insert(name.clone(), xs(f));
                images[1].1.insert(name.clone(), xs(g));
            }
            shapes.push((name, &r.state, qs));
        }
        let source = Signature::new(ranked, leaves)?;
        let mut b = FtaBuilder::new(source.clone());
        for q in m.states() {
            let id = b.state(q.clone());
            if m.finals().contains(q) {
                b.set_final(id);
            }
        }
        for (name, q, qs) in shapes {
            let target = b.state(q.clone());
            let kids = qs.into_iter().map(|q| b.state(q.clone())).collect();
            b.rule(target, name, kids);
        }
        let [(l1, s1), (l2, s2)] = images;
        Bimorphism::new(
            TreeHom::new(source.clone(), m.input().clone(), l1, s1)?,
            b.build()?,
            TreeHom::new(source, m.output().clone(), l2, s2)?,
        )
    }
}
