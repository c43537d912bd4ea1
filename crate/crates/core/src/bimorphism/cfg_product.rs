//! A quasi-alphabetic bimorphism whose translation is `K1 × K2` for two
//! context-free languages.
//!
//! Derivation trees `t1 ∈ L1 ⊆ T_Σ(V)` and `t2 ∈ L2 ⊆ T_Δ(V)` are overlaid
//! in one tree over join symbols `<f,g>` with `f ∈ Σ ∪ Y`, `g ∈ Δ ∪ Y`
//! and rank `max(rk f, rk g)`, where `Y` is a copy of `V` made nullary.
//! Reading first (second) components while discarding surplus children
//! recovers `t1` (`t2`); surplus children must carry no `Y` symbol in the
//! component being read, which a shared look-ahead automaton enforces.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::Bimorphism;
use crate::alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
use crate::cfg::Cfg;
use crate::error::{Error, Result};
use crate::fta::{Fta, FtaBuilder};
use crate::hom::TreeHom;
use crate::transducer::{Lookahead, Rhs, TdRule, Transducer};
use crate::tree::Tree;

/// Nullary and unary symbols added to an alphabet lacking them.
pub const PAD0: &str = "$pad0";
pub const PAD1: &str = "$pad1";

/// Intermediate objects of the product construction.
#[derive(Clone, Debug)]
pub struct CfgProductParts {
    /// Derivation trees of the first grammar, over `Σ` and `V`.
    pub l1: Fta,
    /// Derivation trees of the second grammar, over `Δ` and `V`.
    pub l2: Fta,
    /// `Y` with `φ: Y → V`.
    pub y_to_v: BTreeMap<Symbol, Symbol>,
    /// The join alphabet `Σ̄ ∨ Δ̄`.
    pub join: Signature,
    /// Reads first components.
    pub m_sigma: Transducer,
    /// Reads second components.
    pub m_delta: Transducer,
    pub bimorphism: Bimorphism,
}

/// `Σ ∪ Y` for one side: the production alphabet padded as needed.
struct Side {
    ranked: RankedAlphabet,
}

impl Side {
    fn new(a: &Fta) -> Result<Side> {
        let mut ranked = a.signature().ranked().clone();
        if ranked.of_rank(0).next().is_none() {
            ranked.insert(Symbol::new(PAD0), 0)?;
        }
        if ranked.of_rank(1).next().is_none() {
            ranked.insert(Symbol::new(PAD1), 1)?;
        }
        Ok(Side { ranked })
    }

    /// `(symbol, rank, is in Y)` over `Σ̄`.
    fn barred<'a>(&'a self, y: &'a BTreeMap<Symbol, Symbol>) -> Vec<(Symbol, usize, bool)> {
        let mut out: Vec<(Symbol, usize, bool)> = self.ranked.iter().map(|(f, k)| (f.clone(), k, false)).collect();
        out.extend(y.keys().map(|s| (s.clone(), 0, true)));
        out
    }

    fn least_unary(&self) -> Symbol {
        self.ranked.of_rank(1).min().expect("padded").clone()
    }
}

fn join_name(f: &Symbol, g: &Symbol) -> Symbol {
    Symbol::new(format!("<{f},{g}>"))
}

/// `<h1,h2>` widened to carry `k` further children.
fn carrier_name(h1: &Symbol, h2: &Symbol, k: usize) -> Symbol {
    if k == 0 {
        join_name(h1, h2)
    } else {
        Symbol::new(format!("<{h1},{h2}>^{k}"))
    }
}

struct JoinSymbol {
    name: Symbol,
    rank: usize,
    /// `(symbol, rank, in Y)` of each component
    parts: [(Symbol, usize, bool); 2],
}

/// Look-ahead shared by all rules of the transducer reading component
/// `side`: state `any` accepts every tree, `free` the trees whose
/// `side` components avoid `Y`, and `[<f,g>]` the trees rooted by `<f,g>`
/// whose surplus children are in `free`.
fn lookahead(join: &Signature, symbols: &[JoinSymbol], side: usize) -> Result<(FtaBuilder, BTreeMap<Symbol, crate::fta::StateId>)> {
    let mut b = FtaBuilder::new(join.clone());
    let any = b.state("any");
    let free = b.state("free");
    let mut roots = BTreeMap::new();
    for s in symbols {
        b.rule(any, s.name.clone(), vec![any; s.rank]);
        let (_, kept, in_y) = &s.parts[side];
        if !in_y {
            b.rule(free, s.name.clone(), vec![free; s.rank]);
        }
        let root = b.state(format!("[{}]", s.name));
        let kids = (0..s.rank).map(|i| if i < *kept { any } else { free }).collect();
        b.rule(root, s.name.clone(), kids);
        roots.insert(s.name.clone(), root);
    }
    Ok((b, roots))
}

fn reader(
    join: &Signature,
    symbols: &[JoinSymbol],
    side: usize,
    output: Signature,
    y_to_v: &BTreeMap<Symbol, Symbol>,
) -> Result<Transducer> {
    let (b, roots) = lookahead(join, symbols, side)?;
    let la = b.build()?;
    let star = Symbol::new("*");
    let mut rules = Vec::with_capacity(symbols.len());
    for s in symbols {
        let (f, kept, in_y) = &s.parts[side];
        let rhs = if *in_y {
            Rhs::leaf(y_to_v[f].clone())
        } else {
            Rhs::Out(f.clone(), (1..=*kept).map(|i| Rhs::Call(star.clone(), i)).collect())
        };
        let pattern = Tree::node(s.name.clone(), (1..=s.rank).map(Tree::var).collect());
        let la = Lookahead::Regular(Arc::new(la.with_finals([roots[&s.name]])));
        rules.push(TdRule::new(star.clone(), pattern, rhs, la));
    }
    let stars = BTreeSet::from([star]);
    Transducer::new(stars.clone(), join.clone(), output, stars, rules)
}

/// The quasi-alphabetic homomorphism reading component `side`: a join
/// symbol whose component is in `Σ` maps to itself over all children; one
/// whose component is `y ∈ Y` maps to `<h1,h2>` over `φ(y)` and, when it
/// has children, to a carrier `<h1,h2>^k(φ(y), x1..xk)` keeping them.
fn reading_hom(
    join: &Signature,
    symbols: &[JoinSymbol],
    side: usize,
    carrier: (&Symbol, &Symbol),
    y_to_v: &BTreeMap<Symbol, Symbol>,
) -> Result<TreeHom> {
    let mut ranked = RankedAlphabet::new();
    let mut images = BTreeMap::new();
    for s in symbols {
        let (f, _, in_y) = &s.parts[side];
        let xs: Vec<Tree> = (1..=s.rank).map(Tree::var).collect();
        let image = if *in_y {
            let c = carrier_name(carrier.0, carrier.1, s.rank);
            if ranked.rank(c.as_str()).is_none() {
                ranked.insert(c.clone(), s.rank + 1)?;
            }
            let mut kids = vec![Tree::leaf(y_to_v[f].clone())];
            kids.extend(xs);
            Tree::node(c, kids)
        } else {
            if ranked.rank(s.name.as_str()).is_none() {
                ranked.insert(s.name.clone(), s.rank)?;
            }
            Tree::node(s.name.clone(), xs)
        };
        images.insert(s.name.clone(), image);
    }
    let leaves = LeafAlphabet::from_names(y_to_v.values().cloned())?;
    let target = Signature::new(ranked, leaves)?;
    TreeHom::new(join.clone(), target, BTreeMap::new(), images)
}

/// Builds the product bimorphism and returns every intermediate object.
pub fn cfg_product_parts(g1: &Cfg, g2: &Cfg) -> Result<CfgProductParts> {
    let v: BTreeSet<Symbol> = g1.terminals().union(g2.terminals()).cloned().collect();
    let g1 = g1.with_terminals(&v)?;
    let g2 = g2.with_terminals(&v)?;
    let l1 = g1.derivation_tree_fta()?;
    let l2 = g2.derivation_tree_fta()?;
    let y_to_v: BTreeMap<Symbol, Symbol> = v.iter().map(|a| (Symbol::new(format!("$y.{a}")), a.clone())).collect();
    let sides = [Side::new(&l1)?, Side::new(&l2)?];
    let barred = [sides[0].barred(&y_to_v), sides[1].barred(&y_to_v)];

    let mut join_ranked = RankedAlphabet::new();
    let mut symbols = Vec::new();
    for f in &barred[0] {
        for g in &barred[1] {
            let name = join_name(&f.0, &g.0);
            let rank = f.1.max(g.1);
            join_ranked.insert(name.clone(), rank)?;
            symbols.push(JoinSymbol {
                name,
                rank,
                parts: [f.clone(), g.clone()],
            });
        }
    }
    let join = Signature::new(join_ranked, LeafAlphabet::new())?;
    let output = |side: &Side| -> Result<Signature> {
        Signature::new(side.ranked.clone(), LeafAlphabet::from_names(v.iter().cloned())?)
    };
    let m_sigma = reader(&join, &symbols, 0, output(&sides[0])?, &y_to_v)?;
    let m_delta = reader(&join, &symbols, 1, output(&sides[1])?, &y_to_v)?;
    let center = m_sigma.preimage(&l1)?.intersection(&m_delta.preimage(&l2)?)?;

    let (h1, h2) = (sides[0].least_unary(), sides[1].least_unary());
    let phi = reading_hom(&join, &symbols, 0, (&h1, &h2), &y_to_v)?;
    let psi = reading_hom(&join, &symbols, 1, (&h1, &h2), &y_to_v)?;
    let bimorphism = Bimorphism::new(phi, center.with_signature(join.clone())?, psi)?;
    if !bimorphism.classify().quasi_alphabetic {
        return Err(Error::ClassMismatch("product homomorphisms are not quasi-alphabetic".into()));
    }
    Ok(CfgProductParts {
        l1,
        l2,
        y_to_v,
        join,
        m_sigma,
        m_delta,
        bimorphism,
    })
}

impl Bimorphism {
    /// A quasi-alphabetic bimorphism translating exactly `L(G1) × L(G2)`,
    /// both grammars read over the union of their terminals.
    pub fn from_cfgs(g1: &Cfg, g2: &Cfg) -> Result<Bimorphism> {
        Ok(cfg_product_parts(g1, g2)?.bimorphism)
    }
}
