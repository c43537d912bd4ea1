use std::collections::BTreeSet;

use super::*;
use crate::bimorphism::{qaln, Bimorphism};
use crate::hom::TreeHom;

fn t(s: &str) -> Tree {
    Tree::parse(s).unwrap()
}

fn a_l() -> Fta {
    "states: r p\nfinal: r\nr -> f(p,p)\np -> g(p)\np -> e\n".parse().unwrap()
}

fn relabel() -> Transducer {
    "states: q\nfinal: q\nq(f(x1,x2)) -> f'(q(x1),q(x2))\nq(e) -> e'\n".parse().unwrap()
}

/// `{s | derive(M, s) ∩ L(A) ≠ ∅}` over all inputs up to height `h`.
fn filter(m: &Transducer, a: &Fta, h: usize) -> BTreeSet<Tree> {
    Fta::universal(m.input().clone())
        .enumerate(h)
        .into_iter()
        .filter(|s| m.derive(s, 64).unwrap().iter().any(|u| a.accepts(u).unwrap_or(false)))
        .collect()
}

fn restricted(a: &Fta, h: usize) -> BTreeSet<Tree> {
    a.enumerate(h)
}

#[test]
fn relabeling_derivation_and_class() {
    let m = relabel();
    assert_eq!(m.derive(&t("f(e,e)"), 16).unwrap(), BTreeSet::from([t("f'(e',e')")]));
    let c = m.classify();
    assert!(c.linear && c.nondeleting && c.finite_state_relabeling && c.relabeling && !c.fta_shaped);
    assert_eq!(m.to_fta().unwrap_err().name(), "class-mismatch");
}

#[test]
fn compiled_qaln() {
    let m = Transducer::compile_bimorphism(&qaln()).unwrap();
    assert_eq!(m.rules().len(), 1);
    let r = &m.rules()[0];
    assert_eq!(r.pattern, t("f(x1,x2)"));
    assert_eq!(r.rhs, Rhs::leaf("e"));
    assert_eq!(r.lookahead, Lookahead::Finite(vec![t("f(v1,v2)")]));
    assert_eq!(m.derive(&t("f(v1,v2)"), 16).unwrap(), BTreeSet::from([t("e")]));
    assert!(m.derive(&t("e"), 16).unwrap().is_empty());
    assert!(m.derive(&t("f(v2,v1)"), 16).unwrap().is_empty());
    let c = m.classify();
    assert!(c.linear && !c.nondeleting);
}

#[test]
fn compiled_identity_behaves_as_identity() {
    let sig = a_l().signature().clone();
    let b = Bimorphism::new(TreeHom::identity(sig.clone()), a_l(), TreeHom::identity(sig)).unwrap();
    let m = Transducer::compile_bimorphism(&b).unwrap();
    for s in Fta::universal(m.input().clone()).enumerate(3) {
        let expected = if a_l().accepts(&s).unwrap() { BTreeSet::from([s.clone()]) } else { BTreeSet::new() };
        assert_eq!(m.derive(&s, 64).unwrap(), expected, "{s}");
    }
}

#[test]
fn compiled_permuting_bimorphism() {
    let gamma = Signature::build(&[("a", 2)], &["z"]).unwrap();
    let left = Signature::build(&[("c", 3)], &["v", "w"]).unwrap();
    let right = Signature::build(&[("d", 2)], &["y"]).unwrap();
    let phi = TreeHom::from_images(gamma.clone(), left, &[("a", "c(x2,v,x1)"), ("z", "w")]).unwrap();
    let psi = TreeHom::from_images(gamma, right, &[("a", "d(x1,x2)"), ("z", "y")]).unwrap();
    let center: Fta = "states: q p\nfinal: q\nq -> a(p,q)\nq -> z\np -> z\n".parse().unwrap();
    let b = Bimorphism::new(phi, center, psi).unwrap();
    let m = Transducer::compile_bimorphism(&b).unwrap();
    for (s, _) in b.relation(3) {
        let via_td = m.derive(&s, 64).unwrap();
        let via_bim = b.apply(&s).unwrap().finite_language().unwrap();
        assert_eq!(via_td, via_bim, "{s}");
    }
    assert!(m.derive(&t("c(w,v,c(w,v,w))"), 64).unwrap().is_empty());
}

#[test]
fn compile_needs_quasi_alphabetic() {
    let sig = a_l().signature().clone();
    let deleting = TreeHom::from_images(sig.clone(), sig.clone(), &[("f", "g(x1)"), ("g", "g(x1)"), ("e", "e")]).unwrap();
    let b = Bimorphism::new(deleting, a_l(), TreeHom::identity(sig)).unwrap();
    assert_eq!(Transducer::compile_bimorphism(&b).unwrap_err().name(), "class-mismatch");
}

#[test]
fn fta_round_trip() {
    let a = a_l();
    let m = Transducer::from_fta(&a);
    assert!(m.classify().fta_shaped);
    assert_eq!(m.to_fta().unwrap().enumerate(4), a.enumerate(4));
    for s in Fta::universal(a.signature().clone()).enumerate(3) {
        let out = m.derive(&s, 64).unwrap();
        assert_eq!(out.contains(&s), a.accepts(&s).unwrap());
        assert!(out.len() <= 1);
    }
}

#[test]
fn preimage_of_identity_relabeling() {
    let m = Transducer::from_fta(&Fta::universal(a_l().signature().clone()));
    let pre = m.preimage(&a_l()).unwrap();
    assert_eq!(restricted(&pre, 3), restricted(&a_l(), 3));
    let empty = Fta::empty(a_l().signature().clone());
    assert!(m.preimage(&empty).unwrap().is_empty());
}

#[test]
fn preimage_of_relabeling() {
    let m = relabel();
    let target: Fta = "states: q r\nfinal: q\nq -> f'(r,q)\nq -> e'\nr -> e'\n".parse().unwrap();
    let pre = m.preimage(&target).unwrap();
    assert_eq!(restricted(&pre, 3), filter(&m, &target, 3));
}

#[test]
fn preimage_of_deleting_rule_with_lookahead() {
    // ⋆(<a,b>(x1)) → a' keeps only subtrees free of `y`
    let free: Fta = "states: free top\nfinal: top\nranked: <a,b>/1 <y,b>/0 <c,b>/0\ntop -> <a,b>(free)\nfree -> <a,b>(free)\nfree -> <c,b>\n"
        .parse()
        .unwrap();
    let m: Transducer = Transducer::parse_with(
        "states: s\nfinal: s\ns(<a,b>(x1)) -> a' [lookahead: @free]\ns(<y,b>) -> y'\ns(<c,b>) -> c'\n",
        &|_: &str| Ok(free.clone()),
    )
    .unwrap();
    assert!(!m.classify().nondeleting);
    let target = Fta::singleton(m.output().clone(), &t("a'")).unwrap();
    let pre = m.preimage(&target).unwrap();
    let brute = filter(&m, &target, 3);
    assert_eq!(restricted(&pre, 3), brute);
    assert!(brute.contains(&t("<a,b>(<a,b>(<c,b>))")));
    assert!(!brute.contains(&t("<a,b>(<y,b>)")));
}

#[test]
fn preimage_of_compiled_bimorphisms() {
    let m = Transducer::compile_bimorphism(&qaln()).unwrap();
    let any = Fta::universal(m.output().clone());
    let pre = m.preimage(&any).unwrap();
    assert_eq!(restricted(&pre, 3), BTreeSet::from([t("f(v1,v2)")]));
    assert_eq!(restricted(&pre, 3), filter(&m, &any, 3));
}

#[test]
fn preimage_rejects_unsupported_shapes() {
    let deep: Transducer = "states: q\nfinal: q\nq(f(g(x1),x2)) -> h(q(x1))\n".parse().unwrap();
    let any = Fta::universal(deep.output().clone());
    assert_eq!(deep.preimage(&any).unwrap_err().name(), "unsupported-shape");
    let copying: Transducer = "states: q\nfinal: q\nq(g(x1)) -> h(q(x1),q(x1))\nq(e) -> e\n".parse().unwrap();
    assert_eq!(copying.preimage(&Fta::universal(copying.output().clone())).unwrap_err().name(), "class-mismatch");
}

#[test]
fn state_only_rules_need_a_step_bound() {
    let m: Transducer = "states: q\nfinal: q\nq(x1) -> q(x1)\nq(e) -> e\n".parse().unwrap();
    assert_eq!(m.derive(&t("e"), 10).unwrap_err().name(), "nontermination-suspected");
}

#[test]
fn file_format_round_trip() {
    let m = Transducer::compile_bimorphism(&qaln()).unwrap();
    let again: Transducer = m.to_string().parse().unwrap();
    assert_eq!(again, m);
    let free: Fta = "states: q\nfinal: q\nq -> e\n".parse().unwrap();
    let with_regular: Transducer = Transducer::parse_with("states: q\nfinal: q\nq(e) -> e [lookahead: @x.fta]\n", &|_| Ok(free.clone())).unwrap();
    let again: Transducer = with_regular.to_string().parse().unwrap();
    assert_eq!(again.derive(&t("e"), 8).unwrap(), BTreeSet::from([t("e")]));
    assert_eq!("states: q\nfinal: q\nq(e) -> e [lookahead: @x.fta]\n".parse::<Transducer>().unwrap_err().name(), "parse-error");
}
