use std::collections::BTreeSet;

use qalph_core::{Bimorphism, Cfg, Symbol, Word};

const GRAMMARS: [&str; 5] = [
    "start: S\nS -> a S b | a b\n",
    "start: S\nS -> c | c c\n",
    "start: S\nS -> l S r S | ~\n",
    "start: S\nS -> A | A S\nA -> B\nB -> x | y B\n",
    "start: E\nE -> E p T | T\nT -> n | l E r\n",
];

fn grammar(text: &str) -> Cfg {
    text.parse().unwrap()
}

fn word(s: &str) -> Word {
    s.chars().map(|c| Symbol::new(c.to_string())).collect()
}

/// Every word over `terminals` of length at most `n`.
fn all_words(terminals: &BTreeSet<Symbol>, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w: &Word| terminals.iter().map(move |a| [w.clone(), vec![a.clone()]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn generation_agrees_with_cyk() {
    for text in GRAMMARS {
        let g = grammar(text);
        let n = 6;
        let generated = g.generate(n);
        for w in all_words(g.terminals(), n) {
            assert_eq!(g.cyk_member(&w), generated.contains(&w), "{text}: {w:?}");
        }
    }
}

#[test]
fn derivation_yields_are_the_language() {
    // doubly branching grammars get short bounds: their tree counts explode
    for (text, n) in GRAMMARS.into_iter().zip([4, 2, 2, 2, 2]) {
        let g = grammar(text);
        let a = g.derivation_tree_fta().unwrap();
        let v = a.signature().leaves().clone();
        let h = n + 2 * g.nonterminals().len();
        let mut yields = BTreeSet::new();
        for t in a.enumerate(h) {
            let w = t.yield_over(&v);
            assert!(g.cyk_member(&w), "{text}: {t}");
            yields.insert(w);
        }
        for w in g.generate(n) {
            assert!(yields.contains(&w), "{text}: {w:?} missing at height {h}");
        }
    }
}

#[test]
fn production_symbols_avoid_terminals() {
    for text in GRAMMARS {
        let g = grammar(text);
        let sig = g.derivation_tree_fta().unwrap().signature().clone();
        for (f, _) in sig.ranked().iter() {
            assert!(!g.terminals().contains(f));
            assert!(f.as_str().starts_with('@'));
        }
    }
}

#[test]
fn product_translations_lie_in_the_product() {
    let pairs = [(0, 1, 6), (1, 0, 6), (0, 2, 4), (3, 1, 6)];
    for (i, j, h) in pairs {
        let (g1, g2) = (grammar(GRAMMARS[i]), grammar(GRAMMARS[j]));
        let b = Bimorphism::from_cfgs(&g1, &g2).unwrap();
        assert!(b.classify().quasi_alphabetic);
        let tr = b.translation(h);
        assert!(!tr.is_empty());
        for (u, w) in &tr {
            assert!(g1.cyk_member(u) && g2.cyk_member(w), "{u:?} {w:?}");
        }
        // yields of derivation trees of height ≤ h - 2 all appear
        let short = |g: &Cfg| -> BTreeSet<Word> {
            let a = g.derivation_tree_fta().unwrap();
            let v = a.signature().leaves().clone();
            a.enumerate(h - 2).iter().map(|t| t.yield_over(&v)).collect()
        };
        for u in short(&g1) {
            for w in short(&g2) {
                assert!(tr.contains(&(u.clone(), w.clone())), "{u:?} {w:?}");
            }
        }
    }
}

#[test]
fn unprintable_terminals_are_rejected() {
    let e = "start: S\nS -> ( S )\n".parse::<Cfg>().unwrap_err();
    assert_eq!(e.name(), "grammar-invalid");
}

#[test]
fn anbn_membership() {
    let g = grammar(GRAMMARS[0]);
    assert!(g.cyk_member(&word("aabb")));
    assert!(!g.cyk_member(&word("aab")));
    assert!(!g.cyk_member(&word("")));
}
