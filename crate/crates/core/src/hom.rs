//! Tree homomorphisms `φ: T_Σ(V) → T_Δ(Y)` presented by a leaf map and one
//! image per ranked symbol, and the class taxonomy built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::{Fta, FtaBuilder, StateId};
use crate::syntax::{self, header, parse_name_list, parse_name_rank, split_top, strip_comment};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeHom {
    source: Signature,
    target: Signature,
    leaf_map: BTreeMap<Symbol, Tree>,
    symbol_map: BTreeMap<Symbol, Tree>,
}

/// Class flags of a homomorphism.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomClass {
    pub linear: bool,
    pub complete: bool,
    pub symbol_to_symbol: bool,
    pub alphabetic: bool,
    pub strictly_alphabetic: bool,
    pub quasi_alphabetic: bool,
    pub normalized: bool,
}

impl HomClass {
    pub fn flags(&self) -> Vec<&'static str> {
        [
            (self.linear, "linear"),
            (self.complete, "complete"),
            (self.symbol_to_symbol, "symbol_to_symbol"),
            (self.alphabetic, "alphabetic"),
            (self.strictly_alphabetic, "strictly_alphabetic"),
            (self.quasi_alphabetic, "quasi_alphabetic"),
            (self.normalized, "normalized"),
        ]
        .into_iter()
        .filter(|(on, _)| *on)
        .map(|(_, name)| name)
        .collect()
    }
}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for flag in self.flags() {
            writeln!(f, "{flag}")?;
        }
        Ok(())
    }
}

/// Verdicts of the height bounds that apply to a homomorphism's classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightBounds {
    pub input_height: usize,
    pub output_height: usize,
    /// Every applicable lower bound holds.
    pub lower: bool,
    /// Every applicable upper bound holds.
    pub upper: bool,
}

impl TreeHom {
    pub fn new(
        source: Signature,
        target: Signature,
        leaf_map: BTreeMap<Symbol, Tree>,
        symbol_map: BTreeMap<Symbol, Tree>,
    ) -> Result<TreeHom> {
        for v in source.leaves().iter() {
            let image = leaf_map
                .get(v)
                .ok_or_else(|| Error::malformed("homomorphism", format!("leaf {v} has no image")))?;
            target.check_tree(image, 0)?;
        }
        for (f, k) in source.ranked().iter() {
            let image = symbol_map
                .get(f)
                .ok_or_else(|| Error::malformed("homomorphism", format!("symbol {f}/{k} has no image")))?;
            target.check_tree(image, k)?;
        }
        if let Some(v) = leaf_map.keys().find(|v| !source.leaves().contains(v.as_str())) {
            return Err(Error::AlphabetMismatch(format!("{v} is not a source leaf")));
        }
        if let Some(f) = symbol_map.keys().find(|f| !source.ranked().contains(f.as_str())) {
            return Err(Error::AlphabetMismatch(format!("{f} is not a ranked source symbol")));
        }
        Ok(TreeHom {
            source,
            target,
            leaf_map,
            symbol_map,
        })
    }

    /// Builds a homomorphism from `(source name, image)` pairs; names that
    /// are source leaves go to the leaf map, the rest to the symbol map.
    pub fn from_images(source: Signature, target: Signature, images: &[(&str, &str)]) -> Result<TreeHom> {
        let mut leaf_map = BTreeMap::new();
        let mut symbol_map = BTreeMap::new();
        for (name, image) in images {
            let t = Tree::parse(image)?;
            if source.is_leaf(name) {
                leaf_map.insert(Symbol::new(name), t);
            } else {
                symbol_map.insert(Symbol::new(name), t);
            }
        }
        TreeHom::new(source, target, leaf_map, symbol_map)
    }

    /// The identity on a signature.
    pub fn identity(signature: Signature) -> TreeHom {
        let leaf_map = signature.leaves().iter().map(|v| (v.clone(), Tree::leaf(v.clone()))).collect();
        let symbol_map = signature
            .ranked()
            .iter()
            .map(|(f, k)| (f.clone(), Tree::node(f.clone(), (1..=k).map(Tree::var).collect())))
            .collect();
        TreeHom {
            source: signature.clone(),
            target: signature,
            leaf_map,
            symbol_map,
        }
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn leaf_map(&self) -> &BTreeMap<Symbol, Tree> {
        &self.leaf_map
    }

    pub fn symbol_map(&self) -> &BTreeMap<Symbol, Tree> {
        &self.symbol_map
    }

    /// `φ_V(f)` for a leaf, `φ_k(f)` for a ranked symbol.
    pub fn image(&self, f: &str) -> Option<&Tree> {
        self.leaf_map.get(f).or_else(|| self.symbol_map.get(f))
    }

    /// `tφ`.
    pub fn apply(&self, t: &Tree) -> Result<Tree> {
        match t {
            Tree::Var(i) => Err(Error::UnmappedSymbol(format!("variable x{i}"))),
            Tree::Node(f, kids) => {
                let image = self.image(f.as_str()).ok_or_else(|| Error::UnmappedSymbol(f.to_string()))?;
                if kids.len() != self.source.arity(f.as_str()).unwrap_or(0) {
                    return Err(Error::AlphabetMismatch(format!("{f} used with {} children", kids.len())));
                }
                if kids.is_empty() {
                    return Ok(image.clone());
                }
                let args = kids.iter().map(|c| self.apply(c)).collect::<Result<Vec<_>>>()?;
                image.substitute(&args)
            }
        }
    }

    pub fn is_linear(&self) -> bool {
        self.symbol_map
            .iter()
            .all(|(f, t)| t.is_linear(self.source.arity(f.as_str()).unwrap_or(0)))
    }

    pub fn classify(&self) -> HomClass {
        let rank = |f: &Symbol| self.source.arity(f.as_str()).unwrap_or(0);
        let leaves_to_leaves = self
            .leaf_map
            .values()
            .all(|t| t.symbol().is_some_and(|y| self.target.is_leaf(y.as_str())));
        let is_ranked_root = |t: &Tree| t.symbol().is_some_and(|g| !self.target.is_leaf(g.as_str()));
        // g(x_i1,...,x_im) with every child a variable
        let over_vars = |t: &Tree| is_ranked_root(t) && t.children().iter().all(Tree::is_var);
        // g(...) with every child a variable or an output leaf
        let over_leaves_vars = |t: &Tree| {
            is_ranked_root(t)
                && t.children()
                    .iter()
                    .all(|c| c.is_var() || c.symbol().is_some_and(|y| self.target.is_leaf(y.as_str())))
        };
        let linear = self.is_linear();
        let complete = self.symbol_map.iter().all(|(f, t)| t.is_nondeleting(rank(f)));
        let symbol_to_symbol = leaves_to_leaves && self.symbol_map.values().all(over_vars);
        let alphabetic = linear
            && leaves_to_leaves
            && self.symbol_map.values().all(|t| t.is_var() || over_vars(t));
        let strictly_alphabetic = complete && alphabetic && symbol_to_symbol;
        let quasi_alphabetic = linear && complete && leaves_to_leaves && self.symbol_map.values().all(over_leaves_vars);
        let normalized = self.symbol_map.values().all(|t| {
            let ys = t.variable_yield();
            ys.iter().enumerate().all(|(i, x)| *x == i + 1)
        });
        HomClass {
            linear,
            complete,
            symbol_to_symbol,
            alphabetic,
            strictly_alphabetic,
            quasi_alphabetic,
            normalized,
        }
    }

    /// Checks the height bounds implied by the classes of `self` on `t`:
    /// `hg(t) ≤ hg(tφ) ≤ hg(t)+1` when quasi-alphabetic, `hg(tφ) ≤ hg(t)`
    /// when symbol-to-symbol, `hg(tφ) = hg(t)` when strictly alphabetic.
    pub fn height_bounds(&self, t: &Tree) -> Result<HeightBounds> {
        let class = self.classify();
        if !(class.quasi_alphabetic || class.symbol_to_symbol || class.strictly_alphabetic) {
            return Err(Error::ClassMismatch(
                "height bounds need a quasi-alphabetic, symbol-to-symbol or strictly alphabetic homomorphism".into(),
            ));
        }
        let h = t.height();
        let out = self.apply(t)?.height();
        let mut lower = true;
        let mut upper = true;
        if class.quasi_alphabetic {
            lower &= h <= out;
            upper &= out <= h + 1;
        }
        if class.symbol_to_symbol {
            upper &= out <= h;
        }
        if class.strictly_alphabetic {
            lower &= h <= out;
            upper &= out <= h;
        }
        Ok(HeightBounds {
            input_height: h,
            output_height: out,
            lower,
            upper,
        })
    }

    /// Same homomorphism with the source or target signature enlarged.
    pub fn with_signatures(&self, source: Signature, target: Signature) -> Result<TreeHom> {
        if !self.target.is_subset(&target) {
            return Err(Error::AlphabetMismatch("target signature shrinks".into()));
        }
        TreeHom::new(source, target, self.leaf_map.clone(), self.symbol_map.clone())
    }

    /// Automaton for `{t | tφ = s}`. One state per distinct subtree of `s`
    /// plus a universal state for subtrees a deleting image drops.
    pub fn preimage_of(&self, s: &Tree) -> Result<Fta> {
        self.target.check_tree(s, 0)?;
        let subtrees: Vec<Tree> = s.subtrees().into_iter().collect();
        let mut b = FtaBuilder::new(self.source.clone());
        let ids: BTreeMap<&Tree, StateId> = subtrees.iter().map(|u| (u, b.state(format!("[{u}]")))).collect();
        let top = b.state("*");
        let symbols = self.source.symbols();
        for (f, k) in &symbols {
            b.rule(top, f.clone(), vec![top; *k]);
        }
        for (f, k) in &symbols {
            let pattern = self.image(f.as_str()).expect("validated");
            for u in &subtrees {
                let mut binding: Vec<Option<&Tree>> = vec![None; *k];
                if match_pattern(pattern, u, &mut binding) {
                    let kids = binding.iter().map(|x| x.map_or(top, |t| ids[t])).collect();
                    b.rule(ids[u], f.clone(), kids);
                }
            }
        }
        b.set_final(ids[s]);
        Ok(b.build()?.trim())
    }
}

/// Matches a pattern over variables against a ground tree. Repeated
/// variables must bind equal subtrees.
pub(crate) fn match_pattern<'a>(pattern: &Tree, t: &'a Tree, binding: &mut Vec<Option<&'a Tree>>) -> bool {
    match pattern {
        Tree::Var(i) => {
            let slot = &mut binding[i - 1];
            match slot {
                Some(prev) => *prev == t,
                None => {
                    *slot = Some(t);
                    true
                }
            }
        }
        Tree::Node(f, kids) => match t {
            Tree::Node(g, tkids) if f == g && kids.len() == tkids.len() => {
                kids.iter().zip(tkids.iter()).all(|(p, c)| match_pattern(p, c, binding))
            }
            _ => false,
        },
    }
}

impl fmt::Display for TreeHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranked: Vec<String> = self.target.ranked().iter().map(|(s, k)| format!("{s}/{k}")).collect();
        writeln!(f, "{}", syntax::header_line("target-ranked", ranked))?;
        let leaves: Vec<&str> = self.target.leaves().iter().map(|s| s.as_str()).collect();
        writeln!(f, "{}", syntax::header_line("target-leaves", leaves))?;
        for (v, t) in &self.leaf_map {
            writeln!(f, "{v} |-> {t}")?;
        }
        for (g, t) in &self.symbol_map {
            writeln!(f, "{g}/{} |-> {t}", self.source.arity(g.as_str()).unwrap_or(0))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for TreeHom {
    type Err = Error;

    /// Lines `v |-> tree` map source leaves, `f/k |-> tree` map ranked
    /// source symbols. Target symbols are inferred from the images, with
    /// childless ones read as ranked unless listed under `target-leaves:`.
    fn from_str(text: &str) -> Result<TreeHom> {
        let mut target_ranked = RankedAlphabet::new();
        let mut target_leaves = LeafAlphabet::new();
        let mut source_ranked = RankedAlphabet::new();
        let mut source_leaves = LeafAlphabet::new();
        let mut leaf_map = BTreeMap::new();
        let mut symbol_map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let wrap = |e: Error| e.at_line(line_no);
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = header(line, "target-leaves") {
                for name in parse_name_list(rest).map_err(wrap)? {
                    target_leaves.insert(Symbol::new(name)).map_err(wrap)?;
                }
            } else if let Some(rest) = header(line, "target-ranked") {
                for item in parse_name_list(rest).map_err(wrap)? {
                    let (name, rank) = parse_name_rank(&item).map_err(wrap)?;
                    let rank = rank.ok_or_else(|| Error::parse(line_no, format!("`{name}` needs a rank")))?;
                    target_ranked.insert(Symbol::new(name), rank).map_err(wrap)?;
                }
            } else if let Some((lhs, rhs)) = split_top(line, "|->") {
                let (name, rank) = parse_name_rank(lhs).map_err(wrap)?;
                let image = syntax::parse_tree(rhs).map_err(wrap)?;
                let symbol = Symbol::new(&name);
                let duplicate = match rank {
                    None => {
                        source_leaves.insert(symbol.clone()).map_err(wrap)?;
                        leaf_map.insert(symbol, image).is_some()
                    }
                    Some(k) => {
                        source_ranked.insert(symbol.clone(), k).map_err(wrap)?;
                        symbol_map.insert(symbol, image).is_some()
                    }
                };
                if duplicate {
                    return Err(Error::parse(line_no, format!("{name} mapped twice")));
                }
            } else {
                return Err(Error::parse(line_no, format!("unrecognized line `{line}`")));
            }
        }
        let mut seen = BTreeSet::new();
        for t in leaf_map.values().chain(symbol_map.values()) {
            for (_, node) in t.nodes() {
                if let Tree::Node(g, kids) = node {
                    if seen.insert((g.clone(), kids.len())) && !target_leaves.contains(g.as_str()) {
                        match target_ranked.rank(g.as_str()) {
                            Some(_) => {}
                            None => target_ranked.insert(g.clone(), kids.len())?,
                        }
                    }
                }
            }
        }
        let source = Signature::new(source_ranked, source_leaves)?;
        let target = Signature::new(target_ranked, target_leaves)?;
        TreeHom::new(source, target, leaf_map, symbol_map)
    }
}
