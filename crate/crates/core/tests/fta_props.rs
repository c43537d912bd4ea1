use std::collections::BTreeSet;

use proptest::prelude::*;
use qalph_core::random::{self, HomKind};
use qalph_core::{Fta, FtaBuilder, Signature, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

fn sig() -> Signature {
    Signature::build(&[("f", 2), ("g", 1), ("e", 0)], &["v"]).unwrap()
}

/// Untrimmed random automaton, possibly empty.
fn raw_fta(rng: &mut impl Rng, sig: &Signature, max_states: usize) -> Fta {
    let mut b = FtaBuilder::new(sig.clone());
    let n = rng.gen_range(1..=max_states);
    let qs: Vec<_> = (0..n).map(|i| b.state(format!("q{i}"))).collect();
    for &q in &qs {
        if rng.gen_bool(0.4) {
            b.set_final(q);
        }
        for (f, k) in sig.symbols() {
            if rng.gen_bool(0.35) {
                let kids = (0..k).map(|_| *qs.choose(rng).unwrap()).collect();
                b.rule(q, f, kids);
            }
        }
    }
    b.build().unwrap()
}

/// Membership by brute force over every tree to height `h`.
fn filter(sig: &Signature, h: usize, keep: impl Fn(&Tree) -> bool) -> BTreeSet<Tree> {
    Fta::universal(sig.clone()).enumerate(h).into_iter().filter(|t| keep(t)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_enumerates_as_set_union(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b) = (raw_fta(&mut rng, &sig(), 4), raw_fta(&mut rng, &sig(), 4));
        let u = a.union(&b).unwrap();
        for h in 0..=3 {
            let expected: BTreeSet<Tree> = a.enumerate(h).union(&b.enumerate(h)).cloned().collect();
            prop_assert_eq!(u.enumerate(h), expected);
        }
    }

    #[test]
    fn intersection_enumerates_as_set_intersection(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b) = (raw_fta(&mut rng, &sig(), 4), raw_fta(&mut rng, &sig(), 4));
        let i = a.intersection(&b).unwrap();
        for h in 0..=3 {
            let expected: BTreeSet<Tree> = a.enumerate(h).intersection(&b.enumerate(h)).cloned().collect();
            prop_assert_eq!(i.enumerate(h), expected);
        }
    }

    #[test]
    fn membership_agrees_with_enumeration(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = raw_fta(&mut rng, &sig(), 4);
        let listed = a.enumerate(3);
        prop_assert_eq!(filter(&sig(), 3, |t| a.accepts(t).unwrap()), listed.clone());
        prop_assert_eq!(a.trim().enumerate(3), listed);
    }

    #[test]
    fn emptiness_agrees_with_bounded_search(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = raw_fta(&mut rng, &sig(), 4);
        // a nonempty language has a member of height below the state count
        let found = (0..a.state_count()).any(|h| !a.enumerate(h).is_empty());
        prop_assert_eq!(a.is_empty(), !found);
    }

    #[test]
    fn image_under_quasi_alphabetic_homs(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let gamma = random::source_signature(&mut rng);
        let a = random::fta(&mut rng, &gamma, 4);
        let phi = random::hom(&mut rng, &gamma, HomKind::QuasiAlphabetic, "s", "v");
        let image = a.image(&phi).unwrap();
        let h = 3;
        let sources = a.enumerate(h);
        let mapped: BTreeSet<Tree> = sources.iter().map(|t| phi.apply(t).unwrap()).collect();
        // hg(tφ) ≤ hg(t) + 1 bounds the slice needed
        prop_assert!(mapped.is_subset(&image.enumerate(h + 1)));
        // hg(t) ≤ hg(tφ) puts every preimage within the same bound
        for s in image.enumerate(h) {
            prop_assert!(mapped.contains(&s), "{} has no preimage", s);
        }
    }

    #[test]
    fn preimage_hom_is_exact(seed in any::<u64>(), kind in 0..3usize) {
        let kind = [HomKind::QuasiAlphabetic, HomKind::SymbolToSymbol, HomKind::StrictlyAlphabetic][kind];
        let mut rng = random::rng(seed);
        let gamma = random::source_signature(&mut rng);
        let phi = random::hom(&mut rng, &gamma, kind, "s", "v");
        let seeds: Vec<Tree> = (0..3).map(|_| phi.apply(&random::tree(&mut rng, &gamma, 3)).unwrap()).collect();
        let a = Fta::from_trees(phi.target().clone(), &seeds).unwrap()
            .union(&random::fta(&mut rng, phi.target(), 3)).unwrap();
        let pre = a.preimage_hom(&phi).unwrap();
        let brute = filter(&gamma, 3, |t| a.accepts(&phi.apply(t).unwrap()).unwrap());
        prop_assert_eq!(pre.enumerate(3), brute);
    }
}

#[test]
fn empty_and_universal() {
    let e = Fta::empty(sig());
    assert!(e.is_empty());
    assert!(e.enumerate(5).is_empty());
    let u = Fta::universal(sig());
    assert_eq!(u.enumerate(1).len(), 2 + 2 + 4);
}

#[test]
fn file_format_round_trip() {
    let mut rng = random::rng(7);
    for _ in 0..20 {
        let a = raw_fta(&mut rng, &sig(), 4);
        let again: Fta = a.to_string().parse().unwrap();
        assert_eq!(again.enumerate(3), a.enumerate(3));
    }
}
