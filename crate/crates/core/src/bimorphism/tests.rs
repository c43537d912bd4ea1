use std::collections::BTreeSet;

use super::*;
use crate::alphabet::Signature;
use crate::cfg::Cfg;
use crate::transducer::Transducer;
use crate::tree::word_to_string;

fn t(s: &str) -> Tree {
    Tree::parse(s).unwrap()
}

fn pairs(items: &[(&str, &str)]) -> BTreeSet<(Tree, Tree)> {
    items.iter().map(|(a, b)| (t(a), t(b))).collect()
}

fn sigma() -> Signature {
    Signature::build(&[("f", 2), ("g", 1), ("e", 0)], &[]).unwrap()
}

fn a_l() -> Fta {
    "states: r p\nfinal: r\nr -> f(p,p)\np -> g(p)\np -> e\n".parse().unwrap()
}

fn identity_over(a: Fta) -> Bimorphism {
    let sig = a.signature().clone();
    Bimorphism::new(TreeHom::identity(sig.clone()), a, TreeHom::identity(sig)).unwrap()
}

fn words(items: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn rendered(ws: &BTreeSet<WordPair>) -> BTreeSet<(String, String)> {
    ws.iter().map(|(a, b)| (word_to_string(a), word_to_string(b))).collect()
}

/// `(φ, {d}, ψ)` with `φ(d) = f(v1,v2)` and `ψ(d) = g(y)`.
fn lifted_variant() -> Bimorphism {
    let gamma = Signature::build(&[("d", 0)], &[]).unwrap();
    let left = Signature::build(&[("f", 2), ("e", 0)], &["v1", "v2"]).unwrap();
    let right = Signature::build(&[("f", 2), ("e", 0), ("g", 1)], &["y"]).unwrap();
    let phi = TreeHom::from_images(gamma.clone(), left, &[("d", "f(v1,v2)")]).unwrap();
    let psi = TreeHom::from_images(gamma.clone(), right, &[("d", "g(y)")]).unwrap();
    Bimorphism::new(phi, Fta::singleton(gamma, &t("d")).unwrap(), psi).unwrap()
}

#[test]
fn qaln_relation_apply_translation() {
    let b = qaln();
    assert_eq!(b.relation(0), pairs(&[("f(v1,v2)", "e")]));
    assert_eq!(b.relation(5), pairs(&[("f(v1,v2)", "e")]));
    assert_eq!(b.apply(&t("f(v1,v2)")).unwrap().enumerate(3), BTreeSet::from([t("e")]));
    assert!(b.apply(&t("e")).unwrap().is_empty());
    assert_eq!(rendered(&b.translation(2)), words(&[("v1 v2", "~")]));
    let c = b.classify();
    assert!(c.quasi_alphabetic && !c.alphabetic);
}

#[test]
fn empty_and_identity_bimorphisms() {
    let empty = identity_over(Fta::empty(sigma()));
    assert!(empty.relation(4).is_empty());
    assert!(empty.translation(4).is_empty());
    let id = identity_over(a_l());
    let expected: BTreeSet<(Tree, Tree)> = a_l().enumerate(3).into_iter().map(|s| (s.clone(), s)).collect();
    assert_eq!(id.relation(3), expected);
    assert_eq!(id.apply(&t("f(g(e),e)")).unwrap().enumerate(4), BTreeSet::from([t("f(g(e),e)")]));
    assert!(id.classify().strictly_alphabetic);

    let sig = Signature::build(&[("f", 2)], &["v1", "v2"]).unwrap();
    let single = identity_over(Fta::singleton(sig, &t("f(v1,v2)")).unwrap());
    assert_eq!(rendered(&single.translation(3)), words(&[("v1 v2", "v1 v2")]));
}

#[test]
fn translation_agrees_with_relation_yields() {
    let b = lifted_variant().union(&qaln()).unwrap();
    let v = b.phi().target().leaves().clone();
    let y = b.psi().target().leaves().clone();
    for h in 0..4 {
        let direct: BTreeSet<WordPair> = b.relation(h).iter().map(|(s, u)| (s.yield_over(&v), u.yield_over(&y))).collect();
        assert_eq!(b.translation(h), direct);
    }
}

#[test]
fn inversion() {
    let b = qaln();
    assert_eq!(b.invert().invert(), b);
    assert_eq!(b.invert().relation(2), pairs(&[("e", "f(v1,v2)")]));
    let id = identity_over(a_l());
    assert_eq!(id.invert(), id);
}

#[test]
fn canonical_form_of_qaln() {
    let b = qaln();
    let (product, center) = b.canonical_form().unwrap();
    let lang = center.enumerate(3);
    assert_eq!(lang, BTreeSet::from([t("<f(v1,v2),e>")]));
    assert_eq!(product.components("<f(v1,v2),e>").unwrap(), &(t("f(v1,v2)"), t("e")));
    let c = b.canonical().unwrap();
    assert!(c.classify().quasi_alphabetic);
    for h in 0..3 {
        assert_eq!(c.relation(h), b.relation(h));
    }
}

#[test]
fn canonical_form_of_a_single_rule() {
    let gamma = Signature::build(&[("a", 0)], &[]).unwrap();
    let left = Signature::build(&[("c", 1)], &["v"]).unwrap();
    let right = Signature::build(&[("c'", 1)], &["y"]).unwrap();
    let phi = TreeHom::from_images(gamma.clone(), left, &[("a", "c(v)")]).unwrap();
    let psi = TreeHom::from_images(gamma.clone(), right, &[("a", "c'(y)")]).unwrap();
    let b = Bimorphism::new(phi, Fta::singleton(gamma, &t("a")).unwrap(), psi).unwrap();
    let (_, center) = b.canonical_form().unwrap();
    assert_eq!(center.enumerate(2), BTreeSet::from([t("<c(v),c'(y)>")]));
    assert_eq!(b.canonical().unwrap().relation(2), pairs(&[("c(v)", "c'(y)")]));
}

#[test]
fn canonical_form_needs_quasi_alphabetic() {
    let deleting = TreeHom::from_images(sigma(), sigma(), &[("f", "g(x1)"), ("g", "g(x1)"), ("e", "e")]).unwrap();
    let b = Bimorphism::new(deleting, a_l(), TreeHom::identity(sigma())).unwrap();
    assert_eq!(b.canonical_form().unwrap_err().name(), "class-mismatch");
    assert_eq!(b.to_alphabetic().unwrap_err().name(), "class-mismatch");
}

#[test]
fn union_of_fixtures() {
    let b1 = qaln();
    let b2 = lifted_variant();
    let u = b1.union(&b2).unwrap();
    assert!(u.classify().quasi_alphabetic);
    assert_eq!(u.relation(2), pairs(&[("f(v1,v2)", "e"), ("f(v1,v2)", "g(y)")]));
    assert_eq!(b1.union(&b1).unwrap().relation(3), b1.relation(3));
    let id = identity_over(a_l());
    let none = identity_over(Fta::empty(sigma()));
    assert_eq!(id.union(&none).unwrap().relation(3), id.relation(3));
}

#[test]
fn alphabetic_embedding_of_qaln() {
    let b = qaln();
    let a = b.to_alphabetic().unwrap();
    assert!(a.phi().classify().alphabetic);
    assert!(a.psi().classify().alphabetic);
    // no leaves in Y, so the filler pairs use the padding leaf
    assert!(a.phi().source().is_leaf(&format!("<v1,{PAD_Y}>")));
    assert_eq!(a.relation(2), b.relation(2));
}

#[test]
fn alphabetic_embedding_of_a_relabeling_is_a_relabeling() {
    let id = identity_over(a_l());
    let a = id.to_alphabetic().unwrap();
    assert!(a.classify().strictly_alphabetic);
    assert_eq!(a.relation(3), id.relation(3));
}

#[test]
fn alphabetic_embedding_with_leaves_on_both_sides() {
    let gamma = Signature::build(&[("a", 1), ("z", 0)], &[]).unwrap();
    let left = Signature::build(&[("c", 3), ("d", 0)], &["v", "w"]).unwrap();
    let right = Signature::build(&[("k", 2), ("d", 0)], &["y"]).unwrap();
    let phi = TreeHom::from_images(gamma.clone(), left, &[("a", "c(v,x1,w)"), ("z", "d")]).unwrap();
    let psi = TreeHom::from_images(gamma.clone(), right, &[("a", "k(x1,y)"), ("z", "d")]).unwrap();
    let center: Fta = "states: q\nfinal: q\nq -> a(q)\nq -> z\n".parse().unwrap();
    let b = Bimorphism::new(phi, center, psi).unwrap();
    let a = b.to_alphabetic().unwrap();
    assert!(a.phi().classify().alphabetic && a.psi().classify().alphabetic);
    assert_eq!(a.phi().source().arity("<c[2.1.3],k[1.2]>"), Some(3));
    for h in 0..4 {
        assert_eq!(a.relation_slice(h, h + 1), b.relation_slice(h, h), "height {h}");
    }
}

fn relabeling(text: &str) -> Transducer {
    text.parse().unwrap()
}

#[test]
fn relabeling_import() {
    let m = relabeling("states: q\nfinal: q\nq(f(x1,x2)) -> f'(q(x1),q(x2))\nq(e) -> e'\n");
    let b = Bimorphism::from_relabeling(&m).unwrap();
    assert!(b.classify().strictly_alphabetic);
    let rel = b.relation(2);
    assert!(rel.contains(&(t("f(e,f(e,e))"), t("f'(e',f'(e',e'))"))));
    assert_eq!(rel.len(), 5);

    let two = relabeling(
        "states: q1 q2\nfinal: q1\nq1(f(x1,x2)) -> g1(q2(x1),q1(x2))\nq2(f(x1,x2)) -> g2(q1(x1),q2(x2))\nq1(e) -> e\nq2(e) -> e\n",
    );
    let b = Bimorphism::from_relabeling(&two).unwrap();
    let inputs: BTreeSet<Tree> = Fta::universal(two.input().clone()).enumerate(3);
    let expected: BTreeSet<(Tree, Tree)> = inputs
        .iter()
        .flat_map(|s| two.derive(s, 64).unwrap().into_iter().map(move |u| (s.clone(), u)))
        .collect();
    assert_eq!(b.relation(3), expected);

    let none = relabeling("states: q\nfinal:\nq(e) -> e\n");
    assert!(Bimorphism::from_relabeling(&none).unwrap().relation(3).is_empty());

    let deleting = relabeling("states: q\nfinal: q\nq(f(x1,x2)) -> q(x1)\nq(e) -> e\n");
    assert_eq!(Bimorphism::from_relabeling(&deleting).unwrap_err().name(), "class-mismatch");
}

fn cfg(text: &str) -> Cfg {
    text.parse().unwrap()
}

#[test]
fn product_of_single_word_grammars() {
    let b = Bimorphism::from_cfgs(&cfg("start: S\nS -> a\n"), &cfg("start: S\nS -> b\n")).unwrap();
    assert!(b.classify().quasi_alphabetic);
    assert_eq!(rendered(&b.translation(4)), words(&[("a", "b")]));
}

#[test]
fn product_with_an_empty_language() {
    let b = Bimorphism::from_cfgs(&cfg("start: S\nS -> a S\n"), &cfg("start: S\nS -> b\n")).unwrap();
    assert!(b.translation(5).is_empty());
}

#[test]
fn product_yields_lie_in_both_languages() {
    let g1 = cfg("start: S\nS -> a S b | a b\n");
    let g2 = cfg("start: S\nS -> c | c c\n");
    let parts = cfg_product_parts(&g1, &g2).unwrap();
    let b = &parts.bimorphism;
    let tr = b.translation(4);
    for (w1, w2) in &tr {
        assert!(g1.cyk_member(w1) && g2.cyk_member(w2));
    }
    let got = rendered(&tr);
    for n in 1..=2 {
        for m in 1..=2 {
            let w1 = format!("{} {}", vec!["a"; n].join(" "), vec!["b"; n].join(" "));
            let w2 = vec!["c"; m].join(" ");
            assert!(got.contains(&(w1, w2)));
        }
    }
    // yields through φ agree with yields through the reading transducer
    let v = parts.l1.signature().leaves().clone();
    for c in b.center().enumerate(2) {
        let via_hom = b.phi().apply(&c).unwrap().yield_over(&v);
        let via_td: BTreeSet<_> = parts.m_sigma.derive(&c, 64).unwrap().iter().map(|u| u.yield_over(&v)).collect();
        assert_eq!(via_td, BTreeSet::from([via_hom]));
    }
}

#[test]
fn nonclosure_fixture() {
    let w = nonclosure_witness();
    assert!(w.psi1.classify().strictly_alphabetic && w.psi2.classify().strictly_alphabetic);
    let img = w.image(3);
    assert!(img.contains(&t("f(g(e),g(e))")));
    assert!(!img.contains(&t("f(g(e),g(g(e)))")));
    assert_eq!(NonclosureWitness::diagonal_member(0), t("f(g(e),g(e))"));
    let diag = w.intersection_pairs(4);
    assert!(diag.iter().all(|(s, u)| s == u && s.children()[0] == s.children()[1]));
    assert_eq!(diag.len(), 4);
    assert_eq!(w.image(5), NonclosureWitness::diagonal(5));
}

#[test]
fn file_format_inline_and_referenced() {
    let b = qaln();
    let again: Bimorphism = b.to_string().parse().unwrap();
    assert_eq!(again.relation(2), b.relation(2));
    let phi = b.phi().to_string();
    let center = b.center().to_string();
    let psi = b.psi().to_string();
    let text = "phi: a.hom\ncenter: c.fta\npsi: b.hom\n";
    let loaded = Bimorphism::parse_with(text, &|p: &str| {
        Ok(match p {
            "a.hom" => phi.clone(),
            "c.fta" => center.clone(),
            _ => psi.clone(),
        })
    })
    .unwrap();
    assert_eq!(loaded.relation(2), b.relation(2));
    assert_eq!("[phi]\n".parse::<Bimorphism>().unwrap_err().name(), "parse-error");
    let mismatched = Bimorphism::new(TreeHom::identity(sigma()), a_l(), qaln().psi().clone());
    assert_eq!(mismatched.unwrap_err().name(), "alphabet-mismatch");
}
