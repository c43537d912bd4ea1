//! Symbols, ranked alphabets, leaf alphabets and the pair of both that types
//! trees over `T_Σ(V)`.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax;

/// An interned-by-value symbol name. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A finite set of symbols, each with a fixed rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RankedAlphabet {
    ranks: BTreeMap<Symbol, usize>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, rank)` pairs; a name may not occur
    /// with two different ranks.
    pub fn from_pairs<S: Into<Symbol>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut alphabet = Self::new();
        for (name, rank) in pairs {
            alphabet.insert(name.into(), rank)?;
        }
        Ok(alphabet)
    }

    pub fn insert(&mut self, symbol: Symbol, rank: usize) -> Result<()> {
        syntax::check_symbol_name(symbol.as_str())?;
        match self.ranks.get(&symbol) {
            Some(&r) if r != rank => Err(Error::AlphabetMismatch(format!(
                "symbol {symbol} declared with ranks {r} and {rank}"
            ))),
            _ => {
                self.ranks.insert(symbol, rank);
                Ok(())
            }
        }
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.ranks.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.ranks.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.ranks.iter().map(|(s, &r)| (s, r))
    }

    /// Symbols of rank exactly `k`.
    pub fn of_rank(&self, k: usize) -> impl Iterator<Item = &Symbol> + '_ {
        self.ranks
            .iter()
            .filter(move |(_, &r)| r == k)
            .map(|(s, _)| s)
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.values().copied().max().unwrap_or(0)
    }

    /// Union of two alphabets that agree on every shared name.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (s, r) in other.iter() {
            out.insert(s.clone(), r)?;
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|(s, r)| other.rank(s.as_str()) == Some(r))
    }
}

impl fmt::Display for RankedAlphabet {
    /// One `name/rank` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, r) in self.iter() {
            writeln!(f, "{s}/{r}")?;
        }
        Ok(())
    }
}

/// A finite set of leaf (index) symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LeafAlphabet {
    symbols: BTreeSet<Symbol>,
}

impl LeafAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: Into<Symbol>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out = Self::new();
        for n in names {
            out.insert(n.into())?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<()> {
        syntax::check_symbol_name(symbol.as_str())?;
        self.symbols.insert(symbol);
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains(name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.symbols.iter()
    }

    pub fn union(&self, other: &Self) -> Self {
        LeafAlphabet {
            symbols: self.symbols.union(&other.symbols).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.symbols.is_subset(&other.symbols)
    }
}

impl fmt::Display for LeafAlphabet {
    /// One name per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A ranked alphabet paired with a disjoint leaf alphabet, i.e. the typing
/// of `T_Σ(V)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    ranked: RankedAlphabet,
    leaves: LeafAlphabet,
}

impl Signature {
    pub fn new(ranked: RankedAlphabet, leaves: LeafAlphabet) -> Result<Self> {
        if let Some(clash) = leaves.iter().find(|v| ranked.contains(v.as_str())) {
            return Err(Error::AlphabetMismatch(format!(
                "{clash} is both a ranked symbol and a leaf"
            )));
        }
        Ok(Signature { ranked, leaves })
    }

    /// Convenience constructor from `name/rank` and leaf name lists.
    pub fn build(ranked: &[(&str, usize)], leaves: &[&str]) -> Result<Self> {
        Signature::new(
            RankedAlphabet::from_pairs(ranked.iter().map(|&(s, r)| (s, r)))?,
            LeafAlphabet::from_names(leaves.iter().copied())?,
        )
    }

    pub fn ranked(&self) -> &RankedAlphabet {
        &self.ranked
    }

    pub fn leaves(&self) -> &LeafAlphabet {
        &self.leaves
    }

    pub fn is_leaf(&self, name: &str) -> bool {
        self.leaves.contains(name)
    }

    /// Rank of a symbol, with leaves counted as rank 0.
    pub fn arity(&self, name: &str) -> Option<usize> {
        if self.leaves.contains(name) {
            Some(0)
        } else {
            self.ranked.rank(name)
        }
    }

    /// Every symbol with its arity, leaves included as nullary.
    pub fn symbols(&self) -> Vec<(Symbol, usize)> {
        let mut out: Vec<(Symbol, usize)> = self.ranked.iter().map(|(s, r)| (s.clone(), r)).collect();
        out.extend(self.leaves.iter().map(|v| (v.clone(), 0)));
        out.sort();
        out
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Signature::new(
            self.ranked.union(&other.ranked)?,
            self.leaves.union(&other.leaves),
        )
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.ranked.is_subset(&other.ranked) && self.leaves.is_subset(&other.leaves)
    }

    pub fn with_leaf(&self, leaf: Symbol) -> Result<Self> {
        let mut leaves = self.leaves.clone();
        leaves.insert(leaf)?;
        Signature::new(self.ranked.clone(), leaves)
    }

    pub fn with_symbol(&self, symbol: Symbol, rank: usize) -> Result<Self> {
        let mut ranked = self.ranked.clone();
        ranked.insert(symbol, rank)?;
        Signature::new(ranked, self.leaves.clone())
    }

    /// Checks that `t` is a tree over this signature, allowing variables
    /// `x_1..x_vars`.
    pub fn check_tree(&self, t: &crate::tree::Tree, vars: usize) -> Result<()> {
        use crate::tree::Tree;
        match t {
            Tree::Var(i) if *i >= 1 && *i <= vars => Ok(()),
            Tree::Var(i) => Err(Error::UnboundVariable(*i)),
            Tree::Node(f, children) => {
                match self.arity(f.as_str()) {
                    Some(r) if r == children.len() => {}
                    Some(r) => {
                        return Err(Error::AlphabetMismatch(format!(
                            "{f} has rank {r} but occurs with {} children",
                            children.len()
                        )))
                    }
                    None => {
                        return Err(Error::AlphabetMismatch(format!(
                            "symbol {f} is not in the alphabet"
                        )))
                    }
                }
                children.iter().try_for_each(|c| self.check_tree(c, vars))
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranked: Vec<String> = self.ranked.iter().map(|(s, r)| format!("{s}/{r}")).collect();
        let leaves: Vec<String> = self.leaves.iter().map(|s| s.to_string()).collect();
        write!(f, "ranked: {}\nleaves: {}", ranked.join(" "), leaves.join(" "))
    }
}

/// Parses an alphabet file: `name/rank` lines give ranked symbols, bare
/// `name` lines give leaves. Blank lines and `#` comments are skipped.
pub fn parse_alphabet_file(text: &str) -> Result<Signature> {
    let mut ranked = RankedAlphabet::new();
    let mut leaves = LeafAlphabet::new();
    for (no, raw) in text.lines().enumerate() {
        let line = syntax::strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (name, rank) = syntax::parse_name_rank(line).map_err(|e| e.at_line(no + 1))?;
        match rank {
            Some(r) => ranked.insert(Symbol::new(name), r),
            None => leaves.insert(Symbol::new(name)),
        }
        .map_err(|e| e.at_line(no + 1))?;
    }
    Signature::new(ranked, leaves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_conflicts_are_rejected() {
        let mut a = RankedAlphabet::new();
        a.insert("f".into(), 2).unwrap();
        assert!(a.insert("f".into(), 2).is_ok());
        assert_eq!(a.insert("f".into(), 1).unwrap_err().name(), "alphabet-mismatch");
    }

    #[test]
    fn leaves_must_be_disjoint_from_ranked_symbols() {
        let err = Signature::build(&[("e", 0)], &["e"]).unwrap_err();
        assert_eq!(err.name(), "alphabet-mismatch");
    }

    #[test]
    fn variable_names_are_reserved() {
        assert!(RankedAlphabet::from_pairs([("x1", 0)]).is_err());
        assert!(LeafAlphabet::from_names(["x12"]).is_err());
        assert!(LeafAlphabet::from_names(["x"]).is_ok());
        assert!(LeafAlphabet::from_names(["x0"]).is_ok());
    }

    #[test]
    fn alphabet_file_round_trip() {
        let sig = parse_alphabet_file("f/2\n# comment\ng/1\ne/0\nv1\nv2\n").unwrap();
        assert_eq!(sig.arity("f"), Some(2));
        assert_eq!(sig.arity("v1"), Some(0));
        assert!(sig.is_leaf("v2"));
        assert!(!sig.is_leaf("e"));
        let mut text = sig.ranked().to_string();
        text.push_str(&sig.leaves().to_string());
        assert_eq!(parse_alphabet_file(&text).unwrap(), sig);
    }
}
