//! `qalph`: command-line access to tree automata, homomorphisms,
//! bimorphisms, transducers and grammars stored in text files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qalph_core::bimorphism::{nonclosure_witness, qaln};
use qalph_core::tree::word_to_string;
use qalph_core::{Bimorphism, Cfg, Error, Fta, Symbol, Transducer, Tree, TreeHom};

#[derive(Parser)]
#[command(name = "qalph", version, about = "Tree automata, homomorphisms, bimorphisms and transducers")]
struct Cli {
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class flags of a homomorphism.
    ClassifyHom { hom: PathBuf },
    /// Apply a homomorphism to a tree given in term syntax.
    ApplyHom { hom: PathBuf, tree: String },
    /// List the accepted trees up to a height.
    FtaEnum {
        fta: PathBuf,
        #[arg(long, default_value_t = 3)]
        height: usize,
    },
    FtaUnion { a: PathBuf, b: PathBuf },
    FtaIntersect { a: PathBuf, b: PathBuf },
    /// Image of an automaton under a linear homomorphism.
    FtaImage { fta: PathBuf, hom: PathBuf },
    /// Inverse image of an automaton (over the target) under a homomorphism.
    FtaPreimageHom { fta: PathBuf, hom: PathBuf },
    /// Pairs `(tφ, tψ)` for center trees up to a height.
    BimRelation {
        bim: PathBuf,
        #[arg(long, default_value_t = 3)]
        height: usize,
    },
    /// Yield pairs for center trees up to a height.
    BimTranslate {
        bim: PathBuf,
        #[arg(long, default_value_t = 3)]
        height: usize,
    },
    /// Outputs of a bimorphism on one input tree.
    BimApply {
        bim: PathBuf,
        tree: String,
        /// Listing bound when the output language is infinite.
        #[arg(long, default_value_t = 3)]
        height: usize,
    },
    BimInvert { bim: PathBuf },
    /// Canonical presentation over the product alphabet.
    BimCanonical { bim: PathBuf },
    BimUnion { a: PathBuf, b: PathBuf },
    BimToAlphabetic { bim: PathBuf },
    BimFromRelabeling { td: PathBuf },
    /// Product bimorphism of two grammars, or its translation.
    BimFromCfgs {
        g1: PathBuf,
        g2: PathBuf,
        /// Print yield pairs instead of the bimorphism.
        #[arg(long)]
        translate: bool,
        #[arg(long, default_value_t = 3)]
        height: usize,
    },
    /// Outputs of a transducer on one input tree.
    TdDerive {
        td: PathBuf,
        tree: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    TdClassify { td: PathBuf },
    /// Transducer computing the same relation as a quasi-alphabetic bimorphism.
    TdCompile { bim: PathBuf },
    /// Inputs with an output in the automaton's language.
    TdPreimage { td: PathBuf, fta: PathBuf },
    /// Words of length at most `--length`.
    CfgGenerate {
        cfg: PathBuf,
        #[arg(long, default_value_t = 6)]
        length: usize,
    },
    /// Membership of a space-separated word (`~` for the empty word).
    CfgMember { cfg: PathBuf, word: String },
    /// Print a built-in example.
    Fixture { name: FixtureName },
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureName {
    Nonclosure,
    Qaln,
}

enum Failure {
    Domain(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// Component and look-ahead paths are read relative to the referring file.
fn sibling(of: &Path, name: &str) -> PathBuf {
    of.parent().unwrap_or(Path::new("")).join(name)
}

fn load_fta(path: &Path) -> Outcome<Fta> {
    Ok(read(path)?.parse()?)
}

fn load_hom(path: &Path) -> Outcome<TreeHom> {
    Ok(read(path)?.parse()?)
}

fn load_cfg(path: &Path) -> Outcome<Cfg> {
    Ok(read(path)?.parse()?)
}

fn load_bim(path: &Path) -> Outcome<Bimorphism> {
    let text = read(path)?;
    let resolve = |name: &str| {
        let p = sibling(path, name);
        fs::read_to_string(&p).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read {}: {e}", p.display()),
        })
    };
    Ok(Bimorphism::parse_with(&text, &resolve)?)
}

fn load_td(path: &Path) -> Outcome<Transducer> {
    let text = read(path)?;
    let resolve = |name: &str| {
        let p = sibling(path, name);
        let src = fs::read_to_string(&p).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read {}: {e}", p.display()),
        })?;
        src.parse::<Fta>()
    };
    Ok(Transducer::parse_with(&text, &resolve)?)
}

fn trees(set: &BTreeSet<Tree>) -> String {
    set.iter().fold(String::new(), |mut out, t| {
        let _ = writeln!(out, "{t}");
        out
    })
}

fn pairs<A: std::fmt::Display, B: std::fmt::Display>(set: impl IntoIterator<Item = (A, B)>) -> String {
    set.into_iter().fold(String::new(), |mut out, (a, b)| {
        let _ = writeln!(out, "{a}\t{b}");
        out
    })
}

fn words<'a>(set: impl IntoIterator<Item = &'a (Vec<Symbol>, Vec<Symbol>)>) -> String {
    pairs(set.into_iter().map(|(u, w)| (word_to_string(u), word_to_string(w))))
}

fn lines(items: &[&str]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

/// A language listed exactly when finite, else up to `height`.
fn listing(a: &Fta, height: usize) -> String {
    trees(&a.finite_language().unwrap_or_else(|| a.enumerate(height)))
}

fn run(command: Command) -> Outcome<String> {
    Ok(match command {
        Command::ClassifyHom { hom } => load_hom(&hom)?.classify().to_string(),
        Command::ApplyHom { hom, tree } => format!("{}\n", load_hom(&hom)?.apply(&tree.parse()?)?),
        Command::FtaEnum { fta, height } => trees(&load_fta(&fta)?.enumerate(height)),
        Command::FtaUnion { a, b } => load_fta(&a)?.union(&load_fta(&b)?)?.to_string(),
        Command::FtaIntersect { a, b } => load_fta(&a)?.intersection(&load_fta(&b)?)?.to_string(),
        Command::FtaImage { fta, hom } => load_fta(&fta)?.image(&load_hom(&hom)?)?.to_string(),
        Command::FtaPreimageHom { fta, hom } => load_fta(&fta)?.preimage_hom(&load_hom(&hom)?)?.to_string(),
        Command::BimRelation { bim, height } => pairs(load_bim(&bim)?.relation(height)),
        Command::BimTranslate { bim, height } => words(&load_bim(&bim)?.translation(height)),
        Command::BimApply { bim, tree, height } => listing(&load_bim(&bim)?.apply(&tree.parse()?)?, height),
        Command::BimInvert { bim } => load_bim(&bim)?.invert().to_string(),
        Command::BimCanonical { bim } => load_bim(&bim)?.canonical()?.to_string(),
        Command::BimUnion { a, b } => load_bim(&a)?.union(&load_bim(&b)?)?.to_string(),
        Command::BimToAlphabetic { bim } => load_bim(&bim)?.to_alphabetic()?.to_string(),
        Command::BimFromRelabeling { td } => Bimorphism::from_relabeling(&load_td(&td)?)?.to_string(),
        Command::BimFromCfgs { g1, g2, translate, height } => {
            let b = Bimorphism::from_cfgs(&load_cfg(&g1)?, &load_cfg(&g2)?)?;
            if translate {
                words(&b.translation(height))
            } else {
                b.to_string()
            }
        }
        Command::TdDerive { td, tree, steps } => trees(&load_td(&td)?.derive(&tree.parse()?, steps)?),
        Command::TdClassify { td } => {
            let c = load_td(&td)?.classify();
            let flags = [
                (c.linear, "linear"),
                (c.nondeleting, "nondeleting"),
                (c.finite_state_relabeling, "finite_state_relabeling"),
                (c.relabeling, "relabeling"),
                (c.fta_shaped, "fta_shaped"),
            ];
            lines(&flags.iter().filter(|(on, _)| *on).map(|(_, n)| *n).collect::<Vec<_>>())
        }
        Command::TdCompile { bim } => Transducer::compile_bimorphism(&load_bim(&bim)?)?.to_string(),
        Command::TdPreimage { td, fta } => load_td(&td)?.preimage(&load_fta(&fta)?)?.to_string(),
        Command::CfgGenerate { cfg, length } => {
            let ws = load_cfg(&cfg)?.generate(length);
            ws.iter().map(|w| format!("{}\n", word_to_string(w))).collect()
        }
        Command::CfgMember { cfg, word } => {
            let w: Vec<Symbol> = word.split_whitespace().filter(|s| *s != "~").map(Symbol::new).collect();
            format!("{}\n", load_cfg(&cfg)?.cyk_member(&w))
        }
        Command::Fixture { name: FixtureName::Qaln } => qaln().to_string(),
        Command::Fixture { name: FixtureName::Nonclosure } => {
            let w = nonclosure_witness();
            format!("[psi1]\n{}[psi2]\n{}[language]\n{}", w.psi1, w.psi2, w.language)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: io-error: {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}
