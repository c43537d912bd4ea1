//! Context-free grammars, their derivation-tree automata, and string
//! oracles (bounded generation and CYK membership).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::{Fta, FtaBuilder};
use crate::syntax::{header, parse_name_list, strip_comment};
use crate::tree::Word;

/// `A → α`, named `@A.i` for the `i`-th production of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub name: Symbol,
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    nonterminals: BTreeSet<Symbol>,
    terminals: BTreeSet<Symbol>,
    start: Symbol,
    productions: Vec<Production>,
}

fn invalid(msg: impl fmt::Display) -> Error {
    Error::GrammarInvalid(msg.to_string())
}

impl Cfg {
    /// Builds a grammar from `(lhs, rhs)` pairs; production names are
    /// assigned per left-hand side in order.
    pub fn new(
        nonterminals: BTreeSet<Symbol>,
        terminals: BTreeSet<Symbol>,
        start: Symbol,
        rules: Vec<(Symbol, Vec<Symbol>)>,
    ) -> Result<Cfg> {
        if !nonterminals.contains(&start) {
            return Err(invalid(format!("start symbol {start} is not a nonterminal")));
        }
        if let Some(x) = nonterminals.intersection(&terminals).next() {
            return Err(invalid(format!("{x} is both a terminal and a nonterminal")));
        }
        if let Some(x) = terminals.iter().find(|a| a.as_str().starts_with('@') || a.as_str() == "~") {
            return Err(invalid(format!("terminal {x} uses a reserved name")));
        }
        for x in nonterminals.iter().chain(&terminals) {
            crate::syntax::check_symbol_name(x.as_str()).map_err(|e| invalid(e))?;
        }
        let mut counts: BTreeMap<Symbol, usize> = BTreeMap::new();
        let mut productions = Vec::with_capacity(rules.len());
        for (lhs, rhs) in rules {
            if !nonterminals.contains(&lhs) {
                return Err(invalid(format!("{lhs} is not a nonterminal")));
            }
            if let Some(x) = rhs.iter().find(|x| !nonterminals.contains(*x) && !terminals.contains(*x)) {
                return Err(invalid(format!("{x} in a production of {lhs} is undeclared")));
            }
            let i = counts.entry(lhs.clone()).or_default();
            *i += 1;
            productions.push(Production {
                name: Symbol::new(format!("@{lhs}.{i}")),
                lhs,
                rhs,
            });
        }
        Ok(Cfg {
            nonterminals,
            terminals,
            start,
            productions,
        })
    }

    pub fn nonterminals(&self) -> &BTreeSet<Symbol> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// The same grammar over a larger terminal set.
    pub fn with_terminals(&self, terminals: &BTreeSet<Symbol>) -> Result<Cfg> {
        let mut g = self.clone();
        g.terminals.extend(terminals.iter().cloned());
        if let Some(x) = g.nonterminals.intersection(&g.terminals).next() {
            return Err(invalid(format!("{x} is both a terminal and a nonterminal")));
        }
        Ok(g)
    }

    /// `Σ_G` (production names, ranked by right-hand-side length) with the
    /// terminals as leaves, and the automaton of derivation trees: state
    /// `A` per nonterminal, `'a` per terminal, final state the start.
    pub fn derivation_tree_fta(&self) -> Result<Fta> {
        let mut ranked = RankedAlphabet::new();
        for p in &self.productions {
            ranked.insert(p.name.clone(), p.rhs.len())?;
        }
        let leaves = LeafAlphabet::from_names(self.terminals.iter().cloned())?;
        let mut b = FtaBuilder::new(Signature::new(ranked, leaves)?);
        let state = |b: &mut FtaBuilder, x: &Symbol| {
            if self.terminals.contains(x) {
                b.state(format!("'{x}"))
            } else {
                b.state(x.clone())
            }
        };
        for a in &self.terminals {
            let q = state(&mut b, a);
            b.rule(q, a.clone(), vec![]);
        }
        for n in &self.nonterminals {
            state(&mut b, n);
        }
        let s = state(&mut b, &self.start);
        b.set_final(s);
        for p in &self.productions {
            let target = state(&mut b, &p.lhs);
            let kids = p.rhs.iter().map(|x| state(&mut b, x)).collect();
            b.rule(target, p.name.clone(), kids);
        }
        b.build()
    }

    /// `{w ∈ L(G) | |w| ≤ n}`.
    pub fn generate(&self, n: usize) -> BTreeSet<Word> {
        let mut words: HashMap<&Symbol, BTreeSet<Word>> = self.nonterminals.iter().map(|a| (a, BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut partial: BTreeSet<Word> = BTreeSet::from([Vec::new()]);
                for x in &p.rhs {
                    let options: BTreeSet<Word> = if self.terminals.contains(x) {
                        BTreeSet::from([vec![x.clone()]])
                    } else {
                        words[x].clone()
                    };
                    partial = partial
                        .iter()
                        .flat_map(|pre| {
                            options.iter().filter(move |w| pre.len() + w.len() <= n).map(move |w| {
                                let mut v = pre.clone();
                                v.extend(w.iter().cloned());
                                v
                            })
                        })
                        .collect();
                    if partial.is_empty() {
                        break;
                    }
                }
                let into = words.get_mut(&p.lhs).expect("declared");
                for w in partial {
                    changed |= into.insert(w);
                }
            }
            if !changed {
                break;
            }
        }
        words.remove(&self.start).unwrap_or_default()
    }

    /// Whether `w ∈ L(G)`, by CYK over a binarized copy of the grammar
    /// with nullable symbols and unit productions handled per span.
    pub fn cyk_member(&self, w: &[Symbol]) -> bool {
        Cyk::new(self).member(w)
    }
}

/// `A → B C`, `A → B` and `A → ε` over interned symbols.
struct Cyk {
    index: HashMap<Symbol, usize>,
    /// terminals are interned first
    terminals: usize,
    count: usize,
    binary: Vec<(usize, usize, usize)>,
    unit: Vec<(usize, usize)>,
    nullable: Vec<bool>,
    start: usize,
}

impl Cyk {
    fn new(g: &Cfg) -> Cyk {
        let mut index: HashMap<Symbol, usize> = HashMap::new();
        for x in g.terminals.iter().chain(g.nonterminals.iter()) {
            let n = index.len();
            index.insert(x.clone(), n);
        }
        let mut count = index.len();
        let mut binary = Vec::new();
        let mut unit = Vec::new();
        let mut empty = Vec::new();
        for p in &g.productions {
            let a = index[&p.lhs];
            let xs: Vec<usize> = p.rhs.iter().map(|x| index[x]).collect();
            match xs.len() {
                0 => empty.push(a),
                1 => unit.push((a, xs[0])),
                _ => {
                    // A → X1 X2 ... Xk becomes A → X1 N1, N1 → X2 N2, ...
                    let mut lhs = a;
                    for &x in &xs[..xs.len() - 2] {
                        let fresh = count;
                        count += 1;
                        binary.push((lhs, x, fresh));
                        lhs = fresh;
                    }
                    binary.push((lhs, xs[xs.len() - 2], xs[xs.len() - 1]));
                }
            }
        }
        let mut nullable = vec![false; count];
        for a in empty {
            nullable[a] = true;
        }
        loop {
            let mut changed = false;
            for &(a, b, c) in &binary {
                if !nullable[a] && nullable[b] && nullable[c] {
                    nullable[a] = true;
                    changed = true;
                }
            }
            for &(a, b) in &unit {
                if !nullable[a] && nullable[b] {
                    nullable[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Cyk {
            start: index[&g.start],
            index,
            terminals: g.terminals.len(),
            count,
            binary,
            unit,
            nullable,
        }
    }

    fn member(&self, w: &[Symbol]) -> bool {
        let n = w.len();
        if n == 0 {
            return self.nullable[self.start];
        }
        // table[i][l - 1]: symbols deriving w[i..i+l]
        let mut table: Vec<Vec<Vec<bool>>> = vec![Vec::new(); n];
        for l in 1..=n {
            for i in 0..=n - l {
                let mut cell = vec![false; self.count];
                if l == 1 {
                    match self.index.get(&w[i]) {
                        Some(&a) if a < self.terminals => cell[a] = true,
                        _ => return false,
                    }
                }
                let derives = |cell: &Vec<bool>, x: usize, from: usize, len: usize| -> bool {
                    if len == 0 {
                        self.nullable[x]
                    } else if len == l {
                        cell[x]
                    } else {
                        table[from][len - 1][x]
                    }
                };
                loop {
                    let mut changed = false;
                    for &(a, b, c) in &self.binary {
                        if cell[a] {
                            continue;
                        }
                        let hit = (0..=l).any(|k| derives(&cell, b, i, k) && derives(&cell, c, i + k, l - k));
                        if hit {
                            cell[a] = true;
                            changed = true;
                        }
                    }
                    for &(a, b) in &self.unit {
                        if !cell[a] && cell[b] {
                            cell[a] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                table[i].push(cell);
            }
        }
        table[0][n - 1][self.start]
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        let ts: Vec<&str> = self.terminals.iter().map(Symbol::as_str).collect();
        writeln!(f, "{}", crate::syntax::header_line("terminals", ts))?;
        let mut by_lhs: BTreeMap<&Symbol, Vec<String>> = BTreeMap::new();
        for p in &self.productions {
            let rhs = if p.rhs.is_empty() {
                "~".to_string()
            } else {
                p.rhs.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
            };
            by_lhs.entry(&p.lhs).or_default().push(rhs);
        }
        for (a, alts) in by_lhs {
            writeln!(f, "{a} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}

/// `start: S`, optionally `terminals: a b ...`, then lines `A -> α | β`
/// with space-separated symbols and `~` for the empty word. Without a
/// `terminals:` header every symbol that heads no line is a terminal.
impl std::str::FromStr for Cfg {
    type Err = Error;

    fn from_str(text: &str) -> Result<Cfg> {
        let mut start = None;
        let mut declared: Option<BTreeSet<Symbol>> = None;
        let mut rules: Vec<(Symbol, Vec<Symbol>)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = header(line, "start") {
                start = Some(Symbol::new(rest.trim()));
            } else if let Some(rest) = header(line, "terminals") {
                let names = parse_name_list(rest).map_err(|e| e.at_line(line_no))?;
                declared = Some(names.into_iter().map(Symbol::new).collect());
            } else if let Some((lhs, rest)) = line.split_once("->") {
                let lhs = lhs.trim();
                if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                    return Err(Error::parse(line_no, format!("bad left-hand side `{lhs}`")));
                }
                for alt in rest.split('|') {
                    let syms: Vec<Symbol> = alt.split_whitespace().filter(|s| *s != "~").map(Symbol::new).collect();
                    if syms.is_empty() && !alt.split_whitespace().any(|s| s == "~") {
                        return Err(Error::parse(line_no, "empty alternative; write `~` for ε"));
                    }
                    rules.push((Symbol::new(lhs), syms));
                }
            } else {
                return Err(Error::parse(line_no, format!("unrecognized line `{line}`")));
            }
        }
        let start = start.ok_or_else(|| invalid("missing `start:` line"))?;
        let mut nonterminals: BTreeSet<Symbol> = rules.iter().map(|(a, _)| a.clone()).collect();
        nonterminals.insert(start.clone());
        let terminals = match declared {
            Some(ts) => ts,
            None => rules
                .iter()
                .flat_map(|(_, rhs)| rhs.iter())
                .filter(|x| !nonterminals.contains(*x))
                .cloned()
                .collect(),
        };
        Cfg::new(nonterminals, terminals, start, rules)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::word_to_string;

    fn w(s: &str) -> Word {
        s.chars().map(|c| Symbol::new(c.to_string())).collect()
    }

    fn anbn() -> Cfg {
        "start: S\nS -> a S b | a b\n".parse().unwrap()
    }

    #[test]
    fn single_production() {
        let g: Cfg = "start: S\nS -> a\n".parse().unwrap();
        assert_eq!(g.generate(3), BTreeSet::from([w("a")]));
        let a = g.derivation_tree_fta().unwrap();
        let trees = a.enumerate(3);
        assert_eq!(trees.len(), 1);
        assert_eq!(trees.iter().next().unwrap().to_string(), "@S.1(a)");
    }

    #[test]
    fn cyk_on_anbn() {
        let g = anbn();
        assert!(g.cyk_member(&w("aabb")));
        assert!(g.cyk_member(&w("ab")));
        assert!(!g.cyk_member(&w("aab")));
        assert!(!g.cyk_member(&w("")));
        assert!(!g.cyk_member(&w("abab")));
        assert!(!g.cyk_member(&w("c")));
    }

    #[test]
    fn generation_matches_derivation_yields() {
        let g = anbn();
        let expected: BTreeSet<Word> = (1..=4).map(|n| w(&format!("{}{}", "a".repeat(n), "b".repeat(n)))).collect();
        assert_eq!(g.generate(8), expected);
        let a = g.derivation_tree_fta().unwrap();
        let v = a.signature().leaves().clone();
        let yields: BTreeSet<Word> = a.enumerate(4).iter().map(|t| t.yield_over(&v)).collect();
        assert_eq!(yields, expected);
    }

    #[test]
    fn epsilon_and_units() {
        let g: Cfg = "start: S\nS -> A B | c\nA -> ~ | a\nB -> A | b b\n".parse().unwrap();
        let lang = g.generate(4);
        let rendered: BTreeSet<String> = lang.iter().map(|x| word_to_string(x)).collect();
        let expected: BTreeSet<String> = ["~", "a", "a a", "a b b", "b b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(rendered, expected);
        for x in &lang {
            assert!(g.cyk_member(x), "{}", word_to_string(x));
        }
        assert!(!g.cyk_member(&w("ba")));
        let a = g.derivation_tree_fta().unwrap();
        assert!(a.signature().ranked().rank("@A.1") == Some(0));
    }

    #[test]
    fn invalid_grammars() {
        assert_eq!("S -> a\n".parse::<Cfg>().unwrap_err().name(), "grammar-invalid");
        let bad = "start: S\nterminals: a\nS -> a T\n".parse::<Cfg>().unwrap_err();
        assert_eq!(bad.name(), "grammar-invalid");
        let clash = "start: S\nterminals: S a\nS -> a\n".parse::<Cfg>().unwrap_err();
        assert_eq!(clash.name(), "grammar-invalid");
    }

    #[test]
    fn round_trip() {
        let g = anbn();
        let again: Cfg = g.to_string().parse().unwrap();
        assert_eq!(g, again);
    }
}
