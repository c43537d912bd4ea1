//! Ranked trees with leaf symbols and formal variables, positions,
//! substitution, yields and contexts.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{LeafAlphabet, Symbol};
use crate::error::{Error, Result};

/// A finite ordered tree. Leaf symbols and nullary ranked symbols are both
/// childless nodes; the alphabets they are checked against tell them apart.
/// Variables `x_i` (`i >= 1`) are kept apart from every alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Node(Symbol, Arc<[Tree]>),
    Var(usize),
}

/// A string over some alphabet, e.g. a yield.
pub type Word = Vec<Symbol>;

/// Renders a word space-separated, with `~` for the empty word.
pub fn word_to_string(w: &[Symbol]) -> String {
    if w.is_empty() {
        "~".to_string()
    } else {
        w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
    }
}

impl Tree {
    pub fn node(symbol: impl Into<Symbol>, children: Vec<Tree>) -> Tree {
        Tree::Node(symbol.into(), children.into())
    }

    pub fn leaf(symbol: impl Into<Symbol>) -> Tree {
        Tree::Node(symbol.into(), Arc::from(Vec::new()))
    }

    pub fn var(i: usize) -> Tree {
        assert!(i >= 1, "variables are numbered from 1");
        Tree::Var(i)
    }

    /// Parses term syntax, see [`crate::syntax`].
    pub fn parse(src: &str) -> Result<Tree> {
        crate::syntax::parse_tree(src)
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Tree::Node(f, _) => Some(f),
            Tree::Var(_) => None,
        }
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Node(_, c) => c,
            Tree::Var(_) => &[],
        }
    }

    pub fn arity(&self) -> usize {
        self.children().len()
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Tree::Var(_))
    }

    /// Childless non-variable node (a leaf symbol or a nullary symbol).
    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Node(_, c) if c.is_empty())
    }

    /// `pos(t)` in lexicographic order.
    pub fn positions(&self) -> BTreeSet<Position> {
        let mut out = BTreeSet::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut |p, _| {
            out.insert(Position(p.to_vec()));
        });
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &Tree)) {
        f(path, self);
        for (i, c) in self.children().iter().enumerate() {
            path.push(i + 1);
            c.collect_positions(path, f);
            path.pop();
        }
    }

    /// Positions paired with their subtrees, in lexicographic (preorder)
    /// order.
    pub fn nodes(&self) -> Vec<(Position, &Tree)> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut out);
        out
    }

    fn walk<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<(Position, &'a Tree)>) {
        out.push((Position(path.clone()), self));
        for (i, c) in self.children().iter().enumerate() {
            path.push(i + 1);
            c.walk(path, out);
            path.pop();
        }
    }

    /// `t|_w`.
    pub fn subtree_at(&self, w: &Position) -> Result<&Tree> {
        let mut cur = self;
        for &i in &w.0 {
            cur = cur
                .children()
                .get(i.wrapping_sub(1))
                .ok_or_else(|| Error::InvalidPosition(w.clone()))?;
        }
        Ok(cur)
    }

    /// `t(w)`; variables are reported as `None`.
    pub fn label_at(&self, w: &Position) -> Result<Option<&Symbol>> {
        Ok(self.subtree_at(w)?.symbol())
    }

    /// `t[u]_w`.
    pub fn replace_at(&self, w: &Position, u: Tree) -> Result<Tree> {
        self.replace_path(&w.0, u)
            .ok_or_else(|| Error::InvalidPosition(w.clone()))
    }

    fn replace_path(&self, path: &[usize], u: Tree) -> Option<Tree> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(u);
        };
        let Tree::Node(f, children) = self else {
            return None;
        };
        let child = children.get(i.checked_sub(1)?)?;
        let mut kids = children.to_vec();
        kids[i - 1] = child.replace_path(rest, u)?;
        Some(Tree::Node(f.clone(), kids.into()))
    }

    /// `hg(t)`, the length of a longest position.
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Tree::size).sum::<usize>()
    }

    /// `br(t)`: positions of childless nodes (variables excluded).
    pub fn branches(&self) -> BTreeSet<Position> {
        self.nodes()
            .into_iter()
            .filter(|(_, t)| t.is_leaf())
            .map(|(p, _)| p)
            .collect()
    }

    /// `sub(t)`.
    pub fn subtrees(&self) -> BTreeSet<Tree> {
        self.nodes().into_iter().map(|(_, t)| t.clone()).collect()
    }

    /// `|t|_f`.
    pub fn count_symbol(&self, f: &str) -> usize {
        let here = usize::from(self.symbol().is_some_and(|s| s.as_str() == f));
        here + self
            .children()
            .iter()
            .map(|c| c.count_symbol(f))
            .sum::<usize>()
    }

    /// `|t|_{x_i}`.
    pub fn count_var(&self, i: usize) -> usize {
        match self {
            Tree::Var(j) => usize::from(*j == i),
            Tree::Node(_, c) => c.iter().map(|c| c.count_var(i)).sum(),
        }
    }

    /// `pos_f(t)`.
    pub fn positions_of(&self, f: &str) -> Vec<Position> {
        self.nodes()
            .into_iter()
            .filter(|(_, t)| t.symbol().is_some_and(|s| s.as_str() == f))
            .map(|(p, _)| p)
            .collect()
    }

    /// Positions of `x_i` in lexicographic order.
    pub fn var_positions(&self, i: usize) -> Vec<Position> {
        self.nodes()
            .into_iter()
            .filter(|(_, t)| matches!(t, Tree::Var(j) if *j == i))
            .map(|(p, _)| p)
            .collect()
    }

    /// `var(t)` as variable indices.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |i| {
            out.insert(i);
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Tree::Var(i) => f(*i),
            Tree::Node(_, c) => c.iter().for_each(|c| c.visit_vars(f)),
        }
    }

    /// Variables in left-to-right order with repetitions, `yd_X(t)`.
    pub fn variable_yield(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_vars(&mut |i| out.push(i));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.variables().is_empty()
    }

    /// Every variable of `1..=n` occurs at most once.
    pub fn is_linear(&self, n: usize) -> bool {
        (1..=n).all(|i| self.count_var(i) <= 1)
    }

    /// Every variable of `1..=n` occurs at least once.
    pub fn is_nondeleting(&self, n: usize) -> bool {
        (1..=n).all(|i| self.count_var(i) >= 1)
    }

    /// `yd_Y(t)`: the leaves in `y` from left to right.
    pub fn yield_over(&self, y: &LeafAlphabet) -> Word {
        let mut out = Vec::new();
        self.yield_by(&mut |s| y.contains(s.as_str()), &mut out);
        out
    }

    /// Yield of the childless nodes accepted by `keep`.
    pub fn yield_by(&self, keep: &mut impl FnMut(&Symbol) -> bool, out: &mut Word) {
        match self {
            Tree::Node(f, c) if c.is_empty() => {
                if keep(f) {
                    out.push(f.clone());
                }
            }
            Tree::Node(_, c) => c.iter().for_each(|c| c.yield_by(keep, out)),
            Tree::Var(_) => {}
        }
    }

    /// `t[t_1, ..., t_n]`: replaces every occurrence of `x_i` by `ts[i-1]`.
    pub fn substitute(&self, ts: &[Tree]) -> Result<Tree> {
        match self {
            Tree::Var(i) => i
                .checked_sub(1)
                .and_then(|j| ts.get(j))
                .cloned()
                .ok_or(Error::UnboundVariable(*i)),
            Tree::Node(f, c) if c.is_empty() => Ok(Tree::Node(f.clone(), c.clone())),
            Tree::Node(f, c) => {
                let kids = c.iter().map(|c| c.substitute(ts)).collect::<Result<Vec<_>>>()?;
                Ok(Tree::Node(f.clone(), kids.into()))
            }
        }
    }

    /// `t[v ← (t_1, ..., t_n)]`: the i-th occurrence of leaf `v` in
    /// lexicographic position order is replaced by `ts[i-1]`.
    pub fn substitute_leaf(&self, v: &str, ts: &[Tree]) -> Result<Tree> {
        let n = self.count_symbol(v);
        if n != ts.len() {
            return Err(Error::ArityMismatch {
                expected: n,
                found: ts.len(),
            });
        }
        let mut next = 0;
        Ok(self.substitute_leaf_rec(v, ts, &mut next))
    }

    fn substitute_leaf_rec(&self, v: &str, ts: &[Tree], next: &mut usize) -> Tree {
        match self {
            Tree::Node(f, c) if c.is_empty() && f.as_str() == v => {
                *next += 1;
                ts[*next - 1].clone()
            }
            Tree::Node(f, c) => Tree::Node(
                f.clone(),
                c.iter()
                    .map(|c| c.substitute_leaf_rec(v, ts, next))
                    .collect::<Vec<_>>()
                    .into(),
            ),
            Tree::Var(_) => self.clone(),
        }
    }

    /// `f^k(t)` for a unary symbol `f`, with `f^0(t) = t`.
    pub fn iterate_unary(f: &Symbol, k: usize, t: Tree) -> Tree {
        (0..k).fold(t, |acc, _| Tree::node(f.clone(), vec![acc]))
    }

    /// Renames every symbol through `map`; symbols not in the map are kept.
    pub fn relabel(&self, map: &impl Fn(&Symbol) -> Symbol) -> Tree {
        match self {
            Tree::Var(_) => self.clone(),
            Tree::Node(f, c) => Tree::Node(map(f), c.iter().map(|c| c.relabel(map)).collect::<Vec<_>>().into()),
        }
    }
}

impl Ord for Tree {
    /// Variables first (by index); nodes by symbol name, then arity, then
    /// children lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Tree::Var(a), Tree::Var(b)) => a.cmp(b),
            (Tree::Var(_), Tree::Node(..)) => Ordering::Less,
            (Tree::Node(..), Tree::Var(_)) => Ordering::Greater,
            (Tree::Node(f, a), Tree::Node(g, b)) => f
                .cmp(g)
                .then(a.len().cmp(&b.len()))
                .then_with(|| a.iter().cmp(b.iter())),
        }
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Var(i) => write!(f, "x{i}"),
            Tree::Node(s, c) => {
                write!(f, "{s}")?;
                if !c.is_empty() {
                    f.write_str("(")?;
                    for (i, child) in c.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{child}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tree::parse(s)
    }
}

/// A position: a path of 1-based child indices, ordered lexicographically
/// (a prefix precedes its extensions).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn parse(src: &str) -> Result<Position> {
        let src = src.trim();
        if src.is_empty() || src == "ε" || src == "e" {
            return Ok(Position::root());
        }
        let parts: std::result::Result<Vec<usize>, _> = if src.contains('.') {
            src.split('.').map(str::parse).collect()
        } else {
            src.chars().map(|c| c.to_string().parse()).collect()
        };
        match parts {
            Ok(p) if p.iter().all(|&i| i >= 1) => Ok(Position(p)),
            _ => Err(Error::parse(0, format!("bad position `{src}`"))),
        }
    }
}

impl From<&[usize]> for Position {
    fn from(p: &[usize]) -> Self {
        Position(p.to_vec())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

/// A tree in which each of `x_1..x_n` occurs exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    tree: Tree,
    holes: usize,
}

impl Context {
    pub fn new(tree: Tree, holes: usize) -> Result<Self> {
        for i in 1..=holes {
            if tree.count_var(i) != 1 {
                return Err(Error::malformed(
                    "context",
                    format!("x{i} occurs {} times in {tree}", tree.count_var(i)),
                ));
            }
        }
        if let Some(&j) = tree.variables().iter().find(|&&j| j > holes) {
            return Err(Error::UnboundVariable(j));
        }
        Ok(Context { tree, holes })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn holes(&self) -> usize {
        self.holes
    }

    /// `C[t_1, ..., t_n]`.
    pub fn fill(&self, ts: &[Tree]) -> Result<Tree> {
        if ts.len() != self.holes {
            return Err(Error::ArityMismatch {
                expected: self.holes,
                found: ts.len(),
            });
        }
        self.tree.substitute(ts)
    }

    /// `C^k` for a one-hole context with `C^0 = C` and `C^{k+1} = C[C^k]`;
    /// `C^k` therefore stacks `k + 1` copies of `C`.
    pub fn iterate(&self, k: usize) -> Result<Context> {
        if self.holes != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.holes,
            });
        }
        let mut cur = self.tree.clone();
        for _ in 0..k {
            cur = self.tree.substitute(&[cur])?;
        }
        Ok(Context {
            tree: cur,
            holes: 1,
        })
    }
}
