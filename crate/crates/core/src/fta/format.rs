use std::fmt;

use super::{Fta, FtaBuilder, StateId};
use crate::alphabet::{RankedAlphabet, Signature, Symbol};
use crate::error::{Error, Result};
use crate::syntax::{self, header, parse_name_list, parse_name_rank, split_top, strip_comment};
use crate::tree::Tree;

pub(super) fn write_fta(a: &Fta, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let names: Vec<&str> = a.states.iter().map(|s| s.as_str()).collect();
    writeln!(f, "{}", syntax::header_line("states", names))?;
    let finals: Vec<&str> = a.finals.iter().map(|q| a.states[q.0].as_str()).collect();
    writeln!(f, "{}", syntax::header_line("final", finals))?;
    let ranked: Vec<String> = a
        .signature
        .ranked()
        .iter()
        .map(|(s, k)| format!("{s}/{k}"))
        .collect();
    writeln!(f, "{}", syntax::header_line("ranked", ranked))?;
    let leaves: Vec<&str> = a.signature.leaves().iter().map(|s| s.as_str()).collect();
    writeln!(f, "{}", syntax::header_line("leaves", leaves))?;
    let mut lines: Vec<String> = a
        .rules
        .iter()
        .map(|r| {
            let target = a.state_name(r.target);
            if r.children.is_empty() {
                format!("{target} -> {}", r.symbol)
            } else {
                let kids: Vec<&str> = r.children.iter().map(|c| a.state_name(*c).as_str()).collect();
                format!("{target} -> {}({})", r.symbol, kids.join(","))
            }
        })
        .collect();
    lines.sort();
    for line in lines {
        writeln!(f, "{line}")?;
    }
    Ok(())
}

fn state_of_child(t: &Tree) -> Result<String> {
    match t {
        Tree::Var(i) => Ok(format!("x{i}")),
        Tree::Node(q, kids) if kids.is_empty() => Ok(q.to_string()),
        _ => Err(Error::parse(0, format!("`{t}` is not a state name"))),
    }
}

/// Parses the automaton file format: `states:`, `final:`, optional
/// `ranked:` / `leaves:` declarations, then rules `q -> f(q1,...,qk)`.
/// Symbols used by rules but not declared are added as ranked symbols.
pub(super) fn parse_fta(text: &str) -> Result<Fta> {
    let mut states: Option<Vec<String>> = None;
    let mut finals: Option<Vec<String>> = None;
    let mut ranked = RankedAlphabet::new();
    let mut leaves = Vec::new();
    let mut rules: Vec<(usize, String, String, Vec<String>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let wrap = |e: Error| e.at_line(line_no);
        if let Some(rest) = header(line, "states") {
            states = Some(parse_name_list(rest).map_err(wrap)?);
        } else if let Some(rest) = header(line, "final") {
            finals = Some(parse_name_list(rest).map_err(wrap)?);
        } else if let Some(rest) = header(line, "ranked") {
            for item in parse_name_list(rest).map_err(wrap)? {
                let (name, rank) = parse_name_rank(&item).map_err(wrap)?;
                let rank = rank.ok_or_else(|| Error::parse(line_no, format!("`{name}` needs a rank")))?;
                ranked.insert(Symbol::new(name), rank).map_err(wrap)?;
            }
        } else if let Some(rest) = header(line, "leaves") {
            leaves.extend(parse_name_list(rest).map_err(wrap)?);
        } else if let Some((lhs, rhs)) = split_top(line, "->") {
            let target = lhs.trim().to_string();
            if target.is_empty() {
                return Err(Error::parse(line_no, "rule without a target state"));
            }
            let t = syntax::parse_tree(rhs).map_err(wrap)?;
            let Tree::Node(f, kids) = &t else {
                return Err(Error::parse(line_no, "rule right-hand side must start with a symbol"));
            };
            let kids = kids.iter().map(state_of_child).collect::<Result<Vec<_>>>().map_err(wrap)?;
            rules.push((line_no, target, f.to_string(), kids));
        } else {
            return Err(Error::parse(line_no, format!("unrecognized line `{line}`")));
        }
    }
    let states = states.ok_or_else(|| Error::parse(0, "missing `states:` header"))?;
    let finals = finals.ok_or_else(|| Error::parse(0, "missing `final:` header"))?;
    let leaf_set: std::collections::BTreeSet<&str> = leaves.iter().map(|s| s.as_str()).collect();
    for (line_no, _, f, kids) in &rules {
        if leaf_set.contains(f.as_str()) {
            if !kids.is_empty() {
                return Err(Error::parse(*line_no, format!("leaf {f} used with children")));
            }
        } else if ranked.rank(f).is_none() {
            ranked.insert(Symbol::new(f), kids.len()).map_err(|e| e.at_line(*line_no))?;
        }
    }
    let leaves = crate::alphabet::LeafAlphabet::from_names(leaves)?;
    let signature = Signature::new(ranked, leaves)?;
    let mut b = FtaBuilder::new(signature);
    for s in &states {
        b.state(s.as_str());
    }
    let lookup = |b: &FtaBuilder, name: &str, line: usize| -> Result<StateId> {
        b.lookup(name)
            .ok_or_else(|| Error::parse(line, format!("undeclared state `{name}`")))
    };
    for q in &finals {
        let id = lookup(&b, q, 0)?;
        b.set_final(id);
    }
    for (line_no, target, f, kids) in rules {
        let t = lookup(&b, &target, line_no)?;
        let ks = kids
            .iter()
            .map(|k| lookup(&b, k, line_no))
            .collect::<Result<Vec<_>>>()?;
        b.rule(t, f.as_str(), ks);
    }
    b.build()
}
