//! Seeded generators of trees, homomorphisms, automata, bimorphisms and
//! relabelings for randomized checks and benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
use crate::bimorphism::Bimorphism;
use crate::fta::{Fta, FtaBuilder, StateId};
use crate::hom::TreeHom;
use crate::transducer::{Lookahead, Rhs, TdRule, Transducer};
use crate::tree::Tree;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The homomorphism classes with height bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    QuasiAlphabetic,
    SymbolToSymbol,
    StrictlyAlphabetic,
}

/// A random ground tree of height at most `max_height`; leaves (and
/// nullary symbols) are forced at the bound.
pub fn tree(rng: &mut impl Rng, sig: &Signature, max_height: usize) -> Tree {
    let all = sig.symbols();
    let nullary: Vec<&(Symbol, usize)> = all.iter().filter(|(_, k)| *k == 0).collect();
    let pool: Vec<&(Symbol, usize)> = if max_height == 0 { nullary } else { all.iter().collect() };
    let (f, k) = pool.choose(rng).expect("the signature has a nullary symbol");
    let kids = (0..*k).map(|_| tree(rng, sig, max_height - 1)).collect();
    Tree::node(f.clone(), kids)
}

/// Output symbol `{prefix}{rank}{letter}`, two per rank.
fn target_symbol(rng: &mut impl Rng, prefix: &str, rank: usize) -> Symbol {
    let letter = if rng.gen_bool(0.5) { 'a' } else { 'b' };
    Symbol::new(format!("{prefix}{rank}{letter}"))
}

/// Target alphabet with symbols `{prefix}{r}a`, `{prefix}{r}b` for
/// `r ≤ max_rank` and leaves `{leaf}1`, `{leaf}2`.
pub fn target_signature(prefix: &str, leaf: &str, max_rank: usize) -> Signature {
    let mut ranked = RankedAlphabet::new();
    for r in 0..=max_rank {
        for l in ['a', 'b'] {
            ranked.insert(Symbol::new(format!("{prefix}{r}{l}")), r).expect("fresh names");
        }
    }
    let leaves = LeafAlphabet::from_names([format!("{leaf}1"), format!("{leaf}2")]).expect("fresh names");
    Signature::new(ranked, leaves).expect("disjoint names")
}

/// A random homomorphism of the given class from `source` into
/// `target_signature(prefix, leaf, max_rank)`; symbol-to-symbol images
/// may repeat or drop variables, quasi-alphabetic ones add up to two
/// leaf children.
pub fn hom(rng: &mut impl Rng, source: &Signature, kind: HomKind, prefix: &str, leaf: &str) -> TreeHom {
    let max_rank = source.ranked().max_rank() + 2;
    let target = target_signature(prefix, leaf, max_rank);
    let leaves: Vec<Symbol> = target.leaves().iter().cloned().collect();
    let mut leaf_map = BTreeMap::new();
    let mut symbol_map = BTreeMap::new();
    for v in source.leaves().iter() {
        leaf_map.insert(v.clone(), Tree::leaf(leaves.choose(rng).expect("two leaves").clone()));
    }
    for (f, k) in source.ranked().iter() {
        let mut xs: Vec<Tree> = (1..=k).map(Tree::var).collect();
        xs.shuffle(rng);
        let kids = match kind {
            HomKind::StrictlyAlphabetic => xs,
            HomKind::QuasiAlphabetic => {
                for _ in 0..rng.gen_range(0..=2) {
                    let at = rng.gen_range(0..=xs.len());
                    xs.insert(at, Tree::leaf(leaves.choose(rng).expect("two leaves").clone()));
                }
                xs
            }
            HomKind::SymbolToSymbol => {
                if k == 0 {
                    Vec::new()
                } else {
                    let n = rng.gen_range(0..=k + 1).min(max_rank);
                    (0..n).map(|_| Tree::var(rng.gen_range(1..=k))).collect()
                }
            }
        };
        let g = target_symbol(rng, prefix, kids.len());
        symbol_map.insert(f.clone(), Tree::node(g, kids));
    }
    TreeHom::new(source.clone(), target, leaf_map, symbol_map).expect("images over the target")
}

/// A source alphabet of at most three symbols: leaf `z1`, then a unary
/// `a`, a binary `b` or both; without `b` a second nullary symbol (leaf
/// `z2` or ranked `c`) may join. A binary symbol beside two nullary ones
/// makes height-4 enumeration impractically large.
pub fn source_signature(rng: &mut impl Rng) -> Signature {
    let mut ranked = RankedAlphabet::new();
    let mut leaves = LeafAlphabet::new();
    leaves.insert(Symbol::new("z1")).expect("fresh");
    let core: &[(&str, usize)] = match rng.gen_range(0..3) {
        0 => &[("a", 1)],
        1 => &[("b", 2)],
        _ => &[("a", 1), ("b", 2)],
    };
    for (f, k) in core {
        ranked.insert(Symbol::new(*f), *k).expect("fresh");
    }
    if core.len() == 1 && core[0].1 == 1 {
        match rng.gen_range(0..3) {
            0 => leaves.insert(Symbol::new("z2")).expect("fresh"),
            1 => ranked.insert(Symbol::new("c"), 0).expect("fresh"),
            _ => {}
        }
    }
    Signature::new(ranked, leaves).expect("disjoint names")
}

/// A random trimmed automaton with at most `max_states` states; retries
/// until its language is nonempty (or gives up and returns it empty).
pub fn fta(rng: &mut impl Rng, sig: &Signature, max_states: usize) -> Fta {
    let symbols = sig.symbols();
    for _ in 0..32 {
        let n = rng.gen_range(1..=max_states.max(1));
        let mut b = FtaBuilder::new(sig.clone());
        let states: Vec<StateId> = (0..n).map(|i| b.state(format!("q{i}"))).collect();
        b.set_final(states[0]);
        for &q in &states {
            for (f, k) in &symbols {
                if rng.gen_bool(0.5) {
                    let kids = (0..*k).map(|_| *states.choose(rng).expect("nonempty")).collect();
                    b.rule(q, f.clone(), kids);
                }
            }
        }
        let a = b.build().expect("rules over the signature").trim();
        if !a.is_empty() {
            return a;
        }
    }
    Fta::empty(sig.clone())
}

/// A quasi-alphabetic bimorphism over `source_signature` with at most
/// `max_states` center states.
pub fn qa_bimorphism(rng: &mut impl Rng, max_states: usize) -> Bimorphism {
    let gamma = source_signature(rng);
    qa_bimorphism_over(rng, &gamma, max_states)
}

/// Same, over a fixed source alphabet; the targets depend only on it,
/// so two such bimorphisms share their output alphabets.
pub fn qa_bimorphism_over(rng: &mut impl Rng, gamma: &Signature, max_states: usize) -> Bimorphism {
    let phi = hom(rng, gamma, HomKind::QuasiAlphabetic, "s", "v");
    let psi = hom(rng, gamma, HomKind::QuasiAlphabetic, "d", "y");
    let center = fta(rng, gamma, max_states);
    Bimorphism::new(phi, center, psi).expect("shared source")
}

/// A finite-state relabeling with at most `max_states` states over
/// `{f/2, g/1, e/0}` and leaf `v`, output symbols primed and doubled.
pub fn relabeling(rng: &mut impl Rng, max_states: usize) -> Transducer {
    let input = Signature::build(&[("f", 2), ("g", 1), ("e", 0)], &["v"]).expect("fixed alphabet");
    let output = Signature::build(&[("f1", 2), ("f2", 2), ("g1", 1), ("g2", 1), ("e1", 0), ("e2", 0)], &["w1", "w2"])
        .expect("fixed alphabet");
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<Symbol> = (0..n).map(|i| Symbol::new(format!("q{i}"))).collect();
    let mut rules = Vec::new();
    for q in &states {
        for (f, k) in input.symbols() {
            for _ in 0..rng.gen_range(0..=2) {
                let g = if input.is_leaf(f.as_str()) {
                    format!("w{}", rng.gen_range(1..=2))
                } else {
                    format!("{f}{}", rng.gen_range(1..=2))
                };
                let calls = (1..=k).map(|i| Rhs::Call(states.choose(rng).expect("nonempty").clone(), i)).collect();
                let pattern = Tree::node(f.clone(), (1..=k).map(Tree::var).collect());
                let rule = TdRule::new(q.clone(), pattern, Rhs::Out(Symbol::new(g), calls), Lookahead::None);
                if !rules.contains(&rule) {
                    rules.push(rule);
                }
            }
        }
    }
    let finals: BTreeSet<Symbol> = states.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    Transducer::new(states.into_iter().collect(), input, output, finals, rules).expect("well-formed rules")
}
