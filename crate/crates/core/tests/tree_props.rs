use proptest::prelude::*;
use qalph_core::random;
use qalph_core::{Fta, LeafAlphabet, Position, Signature, Symbol, Tree};
use rand::Rng;

fn sig() -> Signature {
    Signature::build(&[("f", 2), ("g", 1), ("e", 0)], &["v", "y"]).unwrap()
}

/// Random tree over `sig()` whose leaves may also be `x1..x_vars`.
fn open_tree(rng: &mut impl Rng, h: usize, vars: usize) -> Tree {
    let roll = rng.gen_range(0..6);
    if h == 0 || roll < 3 {
        return match rng.gen_range(0..3 + vars) {
            0 => Tree::leaf("e"),
            1 => Tree::leaf("v"),
            2 => Tree::leaf("y"),
            i => Tree::var(i - 2),
        };
    }
    if roll == 3 {
        Tree::node("g", vec![open_tree(rng, h - 1, vars)])
    } else {
        Tree::node("f", vec![open_tree(rng, h - 1, vars), open_tree(rng, h - 1, vars)])
    }
}

/// Yield over `keep` with each `x_i` spelled as `subst[i-1]`.
fn spelled_yield(t: &Tree, keep: &LeafAlphabet, subst: &[Vec<Symbol>], out: &mut Vec<Symbol>) {
    match t {
        Tree::Var(i) => out.extend(subst[i - 1].iter().cloned()),
        Tree::Node(f, _) if t.children().is_empty() => {
            if keep.contains(f.as_str()) {
                out.push(f.clone());
            }
        }
        Tree::Node(..) => t.children().iter().for_each(|c| spelled_yield(c, keep, subst, out)),
    }
}

/// Every `v` leaf replaced by `u`.
fn replace_all(t: &Tree, v: &str, u: &Tree) -> Tree {
    match t.symbol() {
        Some(f) if t.children().is_empty() && f.as_str() == v => u.clone(),
        Some(f) => Tree::node(f.clone(), t.children().iter().map(|c| replace_all(c, v, u)).collect()),
        None => t.clone(),
    }
}

/// Longest root-to-leaf path, from the position set alone.
fn path_height(t: &Tree) -> usize {
    t.positions().iter().map(Position::len).max().unwrap_or(0)
}

proptest! {
    #[test]
    fn replacing_a_subtree_by_itself(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let t = random::tree(&mut rng, &sig(), 4);
        for w in t.positions() {
            let u = t.subtree_at(&w).unwrap().clone();
            prop_assert_eq!(t.replace_at(&w, u).unwrap(), t.clone());
        }
    }

    #[test]
    fn height_is_the_longest_position(seed in any::<u64>()) {
        let t = random::tree(&mut random::rng(seed), &sig(), 5);
        prop_assert_eq!(t.height(), path_height(&t));
        prop_assert!(t.positions().len() > t.height());
        prop_assert_eq!(t.positions().len(), t.size());
    }

    #[test]
    fn substitution_splices_yields(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let t = open_tree(&mut rng, 3, 2);
        let ts: Vec<Tree> = (0..2).map(|_| random::tree(&mut rng, &sig(), 2)).collect();
        let y = LeafAlphabet::from_names(["y"]).unwrap();
        let subst: Vec<Vec<Symbol>> = ts.iter().map(|u| u.yield_over(&y)).collect();
        let mut expected = Vec::new();
        spelled_yield(&t, &y, &subst, &mut expected);
        prop_assert_eq!(t.substitute(&ts).unwrap().yield_over(&y), expected);
    }

    #[test]
    fn leaf_substitution_with_one_tree(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let t = random::tree(&mut rng, &sig(), 4);
        let u = random::tree(&mut rng, &sig(), 2);
        let n = t.count_symbol("v");
        prop_assert_eq!(t.substitute_leaf("v", &vec![u.clone(); n]).unwrap(), replace_all(&t, "v", &u));
        prop_assert_eq!(t.substitute_leaf("v", &vec![u; n + 1]).unwrap_err().name(), "arity-mismatch");
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let t = open_tree(&mut rng, 4, 3);
        prop_assert_eq!(Tree::parse(&t.to_string()).unwrap(), t);
    }
}

#[test]
fn yields_of_every_tree_to_height_three() {
    let y = LeafAlphabet::from_names(["y"]).unwrap();
    for t in Fta::universal(sig()).enumerate(3) {
        let expected = t.positions().into_iter().filter(|w| {
            let s = t.subtree_at(w).unwrap();
            s.children().is_empty() && s.symbol().is_some_and(|f| f.as_str() == "y")
        });
        assert_eq!(t.yield_over(&y).len(), expected.count(), "{t}");
    }
}
