//! Term syntax shared by every file format.
//!
//! Trees are written `name(child,...,child)`, nullary symbols as a bare
//! `name`, variables as `x1`, `x2`, ... Whitespace is insignificant. A name
//! is a run of characters other than whitespace, `(`, `)` and `,`; bracket
//! groups `<...>`, `[...]` and `{...}` inside a name may contain those
//! characters, which lets constructed symbols such as `<f(x1,v),g(x1)>` be
//! written back and read again.

use crate::error::{Error, Result};
use crate::tree::Tree;

fn is_open(c: char) -> bool {
    matches!(c, '<' | '[' | '{')
}

fn is_close(c: char) -> bool {
    matches!(c, '>' | ']' | '}')
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::parse(0, format!("{msg} in `{}` at column {}", self.src.trim(), self.pos + 1))
    }

    fn read_name(&mut self) -> Result<String> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if is_open(c) {
                let mut depth = 0usize;
                loop {
                    let Some(c) = self.peek() else {
                        return Err(self.err("unbalanced bracket"));
                    };
                    self.pos += 1;
                    if is_open(c) {
                        depth += 1;
                    } else if is_close(c) {
                        depth -= 1;
                    }
                    if !c.is_whitespace() {
                        name.push(c);
                    }
                    if depth == 0 {
                        break;
                    }
                }
            } else if c.is_whitespace() || matches!(c, '(' | ')' | ',') {
                break;
            } else {
                name.push(c);
                self.pos += 1;
            }
        }
        if name.is_empty() {
            return Err(self.err("expected a symbol name"));
        }
        Ok(name)
    }

    fn parse_tree(&mut self) -> Result<Tree> {
        let name = self.read_name()?;
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    children.push(self.parse_tree()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `)`")),
                    }
                }
            }
        }
        match variable_index(&name) {
            Some(i) if children.is_empty() => Ok(Tree::Var(i)),
            Some(_) => Err(self.err(format!("variable {name} cannot have children"))),
            None => Ok(Tree::node(name.as_str(), children)),
        }
    }
}

/// `Some(i)` if `name` spells the variable `x_i` (`i >= 1`).
pub fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Parses a single tree in term syntax.
pub fn parse_tree(src: &str) -> Result<Tree> {
    let mut cur = Cursor::new(src);
    let t = cur.parse_tree()?;
    cur.skip_ws();
    if cur.pos != cur.chars.len() {
        return Err(cur.err("trailing input"));
    }
    Ok(t)
}

/// Splits a whitespace-separated list of names, honouring bracket groups.
pub fn parse_name_list(src: &str) -> Result<Vec<String>> {
    let mut cur = Cursor::new(src);
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(out);
        }
        out.push(cur.read_name()?);
        cur.skip_ws();
        if cur.peek() == Some(',') {
            cur.pos += 1;
        }
    }
}

/// Rejects names that cannot be written back in term syntax, that collide
/// with variables, or that use the reserved comment/epsilon markers.
pub fn check_symbol_name(name: &str) -> Result<()> {
    if variable_index(name).is_some() {
        return Err(Error::malformed("symbol", format!("{name} is a reserved variable name")));
    }
    if name == "~" || name.starts_with('#') {
        return Err(Error::malformed("symbol", format!("{name} uses a reserved marker")));
    }
    let mut cur = Cursor::new(name);
    match cur.read_name() {
        Ok(n) if cur.pos == cur.chars.len() && n == name => Ok(()),
        _ => Err(Error::malformed("symbol", format!("`{name}` is not a valid symbol name"))),
    }
}

/// Parses `name/rank` (rank given) or a bare `name` (no rank).
pub fn parse_name_rank(src: &str) -> Result<(String, Option<usize>)> {
    let src = src.trim();
    let mut depth = 0i32;
    let mut slash = None;
    for (i, c) in src.char_indices() {
        if is_open(c) {
            depth += 1;
        } else if is_close(c) {
            depth -= 1;
        } else if c == '/' && depth == 0 {
            slash = Some(i);
        }
    }
    match slash {
        Some(i) => {
            let rank = src[i + 1..]
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad rank in `{src}`")))?;
            Ok((src[..i].trim().to_string(), Some(rank)))
        }
        None => Ok((src.to_string(), None)),
    }
}

/// Position of the first top-level occurrence of `sep` (outside brackets and
/// parentheses).
pub fn find_top(line: &str, sep: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in line.char_indices() {
        if depth == 0 && line[i..].starts_with(sep) {
            return Some(i);
        }
        if is_open(c) || c == '(' {
            depth += 1;
        } else if is_close(c) || c == ')' {
            depth -= 1;
        }
    }
    None
}

/// Splits `line` at the first top-level `sep`.
pub fn split_top<'a>(line: &'a str, sep: &str) -> Option<(&'a str, &'a str)> {
    find_top(line, sep).map(|i| (&line[..i], &line[i + sep.len()..]))
}

/// Lines starting with `#` are comments.
pub fn strip_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        ""
    } else {
        line
    }
}

/// `Some(rest)` if `line` is a `key:` header line.
pub fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.trim_start().strip_prefix(key)?;
    rest.trim_start().strip_prefix(':')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_terms() {
        let t = parse_tree(" f( g(e) , v1 ) ").unwrap();
        assert_eq!(t.to_string(), "f(g(e),v1)");
        assert_eq!(parse_tree("x2").unwrap(), Tree::Var(2));
        assert_eq!(parse_tree("e()").unwrap(), Tree::leaf("e"));
    }

    #[test]
    fn bracket_groups_are_single_names() {
        let t = parse_tree("<f(x1,v),g(x1)>(<v, y>)").unwrap();
        match &t {
            Tree::Node(f, kids) => {
                assert_eq!(f.as_str(), "<f(x1,v),g(x1)>");
                assert_eq!(kids[0], Tree::leaf("<v,y>"));
            }
            _ => panic!(),
        }
        assert_eq!(parse_tree(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_tree("f(e").is_err());
        assert!(parse_tree("f(e,)").is_err());
        assert!(parse_tree("f e").is_err());
        assert!(parse_tree("x1(e)").is_err());
        assert!(parse_tree("<f(e)").is_err());
        assert!(parse_tree("").is_err());
    }

    #[test]
    fn top_level_split_ignores_nested_arrows() {
        assert_eq!(split_top("q -> f(q1,q2)", "->"), Some(("q ", " f(q1,q2)")));
        assert_eq!(split_top("<a,b>(q) -> c", "->"), Some(("<a,b>(q) ", " c")));
        assert_eq!(parse_name_rank("<f,g>/2").unwrap(), ("<f,g>".into(), Some(2)));
        assert_eq!(parse_name_rank("v").unwrap(), ("v".into(), None));
    }
}

/// `name: a b c`, or just `name:` for an empty list.
pub(crate) fn header_line<T: std::fmt::Display>(name: &str, items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().fold(format!("{name}:"), |mut out, item| {
        out.push(' ');
        out.push_str(&item.to_string());
        out
    })
}
