use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Lookahead, Rhs, TdRule, Transducer};
use crate::alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
use crate::error::{Error, Result};
use crate::fta::Fta;
use crate::syntax::{self, find_top, header, parse_name_list, parse_name_rank, split_top, strip_comment};
use crate::tree::Tree;

/// Loads the automaton named by an `@file` look-ahead.
pub type LookaheadResolver<'a> = dyn Fn(&str) -> Result<Fta> + 'a;

pub(super) fn write_transducer(m: &Transducer, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    writeln!(f, "{}", crate::syntax::header_line("states", &m.states))?;
    writeln!(f, "{}", crate::syntax::header_line("final", &m.finals))?;
    for (tag, sig) in [("input", &m.input), ("output", &m.output)] {
        writeln!(f, "{tag}-ranked: {}", join(&mut sig.ranked().iter().map(|(s, k)| format!("{s}/{k}"))))?;
        writeln!(f, "{tag}-leaves: {}", join(&mut sig.leaves().iter().map(|s| s.to_string())))?;
    }
    for r in &m.rules {
        write!(f, "{}({}) -> {}", r.state, r.pattern, r.rhs)?;
        match &r.lookahead {
            Lookahead::None => {}
            Lookahead::Finite(ps) => {
                let ps: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, " [lookahead: {}]", ps.join(" ; "))?;
            }
            Lookahead::Regular(a) => {
                let text = a.to_string();
                let lines: Vec<&str> = text.lines().collect();
                write!(f, " [lookahead: @{{{}}}]", lines.join(" ; "))?;
            }
        }
        writeln!(f)?;
    }
    Ok(())
}

fn to_rhs(t: &Tree, states: &BTreeSet<String>, line: usize) -> Result<Rhs> {
    match t {
        Tree::Var(i) => Err(Error::parse(line, format!("bare variable x{i} in a right-hand side"))),
        Tree::Node(q, kids) if kids.len() == 1 && kids[0].is_var() && states.contains(q.as_str()) => {
            let Tree::Var(i) = kids[0] else { unreachable!() };
            Ok(Rhs::Call(q.clone(), i))
        }
        Tree::Node(g, kids) => Ok(Rhs::Out(
            g.clone(),
            kids.iter().map(|k| to_rhs(k, states, line)).collect::<Result<_>>()?,
        )),
    }
}

fn infer_ranked(t: &Tree, leaves: &LeafAlphabet, ranked: &mut RankedAlphabet) -> Result<()> {
    for (_, node) in t.nodes() {
        if let Tree::Node(g, kids) = node {
            if !leaves.contains(g.as_str()) && ranked.rank(g.as_str()).is_none() {
                ranked.insert(g.clone(), kids.len())?;
            }
        }
    }
    Ok(())
}

fn infer_rhs(r: &Rhs, leaves: &LeafAlphabet, ranked: &mut RankedAlphabet) -> Result<()> {
    if let Rhs::Out(g, kids) = r {
        if !leaves.contains(g.as_str()) && ranked.rank(g.as_str()).is_none() {
            ranked.insert(g.clone(), kids.len())?;
        }
        for k in kids {
            infer_rhs(k, leaves, ranked)?;
        }
    }
    Ok(())
}

fn parse_lookahead(src: &str, line: usize, resolve: &LookaheadResolver<'_>) -> Result<Lookahead> {
    let src = src.trim();
    if let Some(inline) = src.strip_prefix("@{") {
        let body = inline
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line, "unterminated inline look-ahead automaton"))?;
        let a: Fta = body.replace(';', "\n").parse().map_err(|e: Error| e.at_line(line))?;
        return Ok(Lookahead::Regular(Arc::new(a)));
    }
    if let Some(path) = src.strip_prefix('@') {
        return Ok(Lookahead::Regular(Arc::new(resolve(path.trim())?)));
    }
    let patterns = src
        .split(';')
        .map(|p| syntax::parse_tree(p).map_err(|e| e.at_line(line)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Lookahead::Finite(patterns))
}

pub(super) fn parse_transducer(text: &str, resolve: &LookaheadResolver<'_>) -> Result<Transducer> {
    let mut states: Option<Vec<String>> = None;
    let mut finals: Option<Vec<String>> = None;
    let mut input_ranked = RankedAlphabet::new();
    let mut output_ranked = RankedAlphabet::new();
    let mut input_leaves = LeafAlphabet::new();
    let mut output_leaves = LeafAlphabet::new();
    let mut raw_rules: Vec<(usize, String, Tree, Tree, Option<String>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let wrap = |e: Error| e.at_line(line_no);
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let ranked_header = |rest: &str, into: &mut RankedAlphabet| -> Result<()> {
            for item in parse_name_list(rest)? {
                let (name, rank) = parse_name_rank(&item)?;
                let rank = rank.ok_or_else(|| Error::parse(line_no, format!("`{name}` needs a rank")))?;
                into.insert(Symbol::new(name), rank)?;
            }
            Ok(())
        };
        if let Some(rest) = header(line, "states") {
            states = Some(parse_name_list(rest).map_err(wrap)?);
        } else if let Some(rest) = header(line, "final") {
            finals = Some(parse_name_list(rest).map_err(wrap)?);
        } else if let Some(rest) = header(line, "input-ranked") {
            ranked_header(rest, &mut input_ranked).map_err(wrap)?;
        } else if let Some(rest) = header(line, "output-ranked") {
            ranked_header(rest, &mut output_ranked).map_err(wrap)?;
        } else if let Some(rest) = header(line, "input-leaves") {
            for v in parse_name_list(rest).map_err(wrap)? {
                input_leaves.insert(Symbol::new(v)).map_err(wrap)?;
            }
        } else if let Some(rest) = header(line, "output-leaves") {
            for v in parse_name_list(rest).map_err(wrap)? {
                output_leaves.insert(Symbol::new(v)).map_err(wrap)?;
            }
        } else if let Some((lhs, rest)) = split_top(line, "->") {
            let (rhs, la) = match find_top(rest, "[lookahead:") {
                Some(i) => {
                    let la = rest[i + "[lookahead:".len()..].trim_end();
                    let la = la
                        .strip_suffix(']')
                        .ok_or_else(|| Error::parse(line_no, "look-ahead must end with `]`"))?;
                    (&rest[..i], Some(la.to_string()))
                }
                None => (rest, None),
            };
            let lhs = syntax::parse_tree(lhs).map_err(wrap)?;
            let Tree::Node(q, kids) = &lhs else {
                return Err(Error::parse(line_no, "left-hand side must be q(pattern)"));
            };
            if kids.len() != 1 {
                return Err(Error::parse(line_no, "left-hand side must be q(pattern)"));
            }
            let rhs = syntax::parse_tree(rhs).map_err(wrap)?;
            raw_rules.push((line_no, q.to_string(), kids[0].clone(), rhs, la));
        } else {
            return Err(Error::parse(line_no, format!("unrecognized line `{line}`")));
        }
    }
    let states = states.ok_or_else(|| Error::parse(0, "missing `states:` header"))?;
    let finals = finals.ok_or_else(|| Error::parse(0, "missing `final:` header"))?;
    let state_set: BTreeSet<String> = states.iter().cloned().collect();
    let mut rules = Vec::new();
    for (line_no, q, pattern, rhs, la) in raw_rules {
        let wrap = |e: Error| e.at_line(line_no);
        let rhs = to_rhs(&rhs, &state_set, line_no)?;
        let lookahead = match la {
            None => Lookahead::None,
            Some(src) => parse_lookahead(&src, line_no, resolve)?,
        };
        infer_ranked(&pattern, &input_leaves, &mut input_ranked).map_err(wrap)?;
        if let Lookahead::Finite(ps) = &lookahead {
            for p in ps {
                infer_ranked(p, &input_leaves, &mut input_ranked).map_err(wrap)?;
            }
        }
        infer_rhs(&rhs, &output_leaves, &mut output_ranked).map_err(wrap)?;
        rules.push(TdRule::new(q, pattern, rhs, lookahead));
    }
    let input = Signature::new(input_ranked, input_leaves)?;
    let output = Signature::new(output_ranked, output_leaves)?;
    let symbols = |names: Vec<String>| names.into_iter().map(Symbol::new).collect::<BTreeSet<_>>();
    Transducer::new(symbols(states), input, output, symbols(finals), rules)
}
