use std::fmt;

use super::Bimorphism;
use crate::error::{Error, Result};
use crate::fta::Fta;
use crate::hom::TreeHom;
use crate::syntax::{header, strip_comment};

/// Loads the text of a component file named in a bimorphism file.
pub type BimorphismResolver<'a> = dyn Fn(&str) -> Result<String> + 'a;

pub(super) fn write_bimorphism(b: &Bimorphism, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "[phi]")?;
    write!(f, "{}", b.phi)?;
    writeln!(f, "[center]")?;
    write!(f, "{}", b.center)?;
    writeln!(f, "[psi]")?;
    write!(f, "{}", b.psi)
}

/// Either three references `phi: file`, `center: file`, `psi: file`, or
/// inline sections headed `[phi]`, `[center]`, `[psi]`.
pub(super) fn parse_bimorphism(text: &str, resolve: &BimorphismResolver<'_>) -> Result<Bimorphism> {
    let mut parts: [Option<(usize, String)>; 3] = [None, None, None];
    let names = ["phi", "center", "psi"];
    let mut section: Option<usize> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if let Some(i) = names.iter().position(|s| line == format!("[{s}]")) {
            if parts[i].is_some() {
                return Err(Error::parse(line_no, format!("{} given twice", names[i])));
            }
            parts[i] = Some((line_no, String::new()));
            section = Some(i);
            continue;
        }
        if let Some(i) = section {
            let body = &mut parts[i].as_mut().expect("section opened").1;
            body.push_str(raw);
            body.push('\n');
            continue;
        }
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let Some(i) = names.iter().position(|s| header(line, s).is_some()) else {
            return Err(Error::parse(line_no, format!("unrecognized line `{line}`")));
        };
        if parts[i].is_some() {
            return Err(Error::parse(line_no, format!("{} given twice", names[i])));
        }
        let path = header(line, names[i]).expect("matched").trim();
        parts[i] = Some((line_no, resolve(path)?));
    }
    let mut take = |i: usize| {
        parts[i]
            .take()
            .ok_or_else(|| Error::parse(0, format!("missing {}", names[i])))
    };
    let (l1, phi) = take(0)?;
    let (l2, center) = take(1)?;
    let (l3, psi) = take(2)?;
    let offset = |line: usize| move |e: Error| match e {
        Error::Parse { line: inner, msg } => Error::Parse {
            line: line + inner,
            msg,
        },
        other => other,
    };
    let phi: TreeHom = phi.parse().map_err(offset(l1))?;
    let center: Fta = center.parse().map_err(offset(l2))?;
    let psi: TreeHom = psi.parse().map_err(offset(l3))?;
    Bimorphism::new(phi, center, psi)
}
