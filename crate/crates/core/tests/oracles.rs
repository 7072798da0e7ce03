mod common;

use std::collections::{BTreeSet, HashSet};

use affbound::boundedness::{check_bounded_in, choe_bound, BoundMode};
use affbound::catalog::{builtin_algebra, successor_algebra};
use affbound::laws::cyclic_monoid_of;
use affbound::skeleton::{enumerate_skeletons, ClosedSubtrees, Skeleton, DEFAULT_SKELETON_BUDGET};
use affbound::translation::{brute_force_with, BruteForceOptions, ParamStrategy};
use affbound::{
    check_bounded_by, congruence_lattice, is_simple, minimal_bound, translation_monoid, ChoeOrder,
    Element, FiniteAlgebra, Term,
};

/// Every tree of height `<= h` with node arities in `1..=k` over the leaves
/// `x`, `*`, `0`, generated without regard to linearity.
fn all_trees(h: usize, k: usize) -> Vec<Skeleton> {
    let mut level = vec![Skeleton::Var, Skeleton::Star, Skeleton::Zero];
    for _ in 0..h {
        let mut next = vec![Skeleton::Var, Skeleton::Star, Skeleton::Zero];
        for n in 1..=k {
            for ch in common::tuples(level.len(), n) {
                next.push(Skeleton::Node(
                    ch.into_iter().map(|i| level[i].clone()).collect(),
                ));
            }
        }
        level = next;
    }
    level
}

#[test]
fn skeleton_enumeration_matches_filtered_trees() {
    for (h, k) in [(0, 1), (1, 1), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let got = enumerate_skeletons(h, k).unwrap();
        let expected: HashSet<String> = all_trees(h, k)
            .into_iter()
            .filter(|t| t.x_count() == 1)
            .map(|t| t.to_string())
            .collect();
        let as_strings: Vec<String> = got.iter().map(ToString::to_string).collect();
        assert_eq!(as_strings.len(), expected.len(), "duplicates at ({h}, {k})");
        assert_eq!(
            as_strings.iter().cloned().collect::<HashSet<_>>(),
            expected,
            "at ({h}, {k})"
        );
        for w in got.windows(2) {
            assert!(
                w[0].canonical_cmp(&w[1]).is_lt(),
                "{} before {}",
                w[0],
                w[1]
            );
        }
    }
    // one slot for x, the rest filled with closed trees: 1, 1 + 1 + 2*1*2, 1 + 6 + 2*6*8
    assert_eq!(enumerate_skeletons(2, 2).unwrap().len(), 103);
}

/// Proper terms of height `<= h`, spelled out from the signature.
fn literal_proper_terms(a: &FiniteAlgebra, h: usize) -> Vec<Term> {
    let sig = a.signature();
    let leaves: Vec<Term> = (0..a.carrier())
        .map(Term::Const)
        .chain(sig.of_arity(0).into_iter().map(|s| Term::apply(s, vec![])))
        .collect();
    let mut closed = leaves.clone();
    let mut proper = vec![Term::Var];
    for _ in 0..h {
        let mut next_closed = leaves.clone();
        let mut next_proper = vec![Term::Var];
        for (s, sym) in sig.iter().filter(|(_, s)| s.arity >= 1) {
            for ch in common::tuples(closed.len(), sym.arity) {
                next_closed.push(Term::apply(
                    s,
                    ch.iter().map(|&i| closed[i].clone()).collect(),
                ));
            }
            for slot in 0..sym.arity {
                for rest in common::tuples(closed.len(), sym.arity - 1) {
                    for p in &proper {
                        let mut ch: Vec<Term> = rest.iter().map(|&i| closed[i].clone()).collect();
                        ch.insert(slot, p.clone());
                        next_proper.push(Term::apply(s, ch));
                    }
                }
            }
        }
        closed = next_closed;
        proper = next_proper;
    }
    proper
}

#[test]
fn brute_force_agrees_with_literal_terms() {
    for seed in 0..12 {
        let a = common::random_small_algebra(seed, 2, 2, 2);
        for h in 0..=2 {
            let literal: HashSet<Vec<Element>> = literal_proper_terms(&a, h)
                .iter()
                .map(|t| common::image(&a, t))
                .collect();
            for strategy in [ParamStrategy::Literal, ParamStrategy::Compositional] {
                let opts = BruteForceOptions::new(h, 4).strategy(strategy);
                assert_eq!(
                    brute_force_with(&a, &opts).unwrap().image_set(),
                    literal,
                    "seed {seed} h {h}"
                );
            }
            let star = BruteForceOptions::new(h, 4).closed(ClosedSubtrees::StarOnly);
            assert_eq!(brute_force_with(&a, &star).unwrap().image_set(), literal);
        }
    }
}

#[test]
fn brute_force_stabilizes_at_the_monoid() {
    for seed in 0..25 {
        let a = common::random_small_algebra(seed, 4, 3, 3);
        let naive = common::naive_monoid(&a);
        let m = translation_monoid(&a).unwrap();
        let k = a.signature().max_arity().max(1);
        for h in 0..=m.max_depth() + 1 {
            let opts = BruteForceOptions::new(h, k).closed(ClosedSubtrees::StarOnly);
            let found = brute_force_with(&a, &opts).unwrap();
            // exactly the elements whose breadth-first depth fits
            let within: HashSet<Vec<Element>> = (0..m.len())
                .filter(|&i| m.depth(i) <= h)
                .map(|i| m.elements()[i].image().to_vec())
                .collect();
            assert_eq!(found.image_set(), within, "seed {seed} h {h}");
            if h >= m.max_depth() {
                assert_eq!(found.image_set(), naive);
            }
            for f in &found.maps {
                let t = f.provenance().unwrap();
                assert!(t.height() <= h && t.x_count() == 1);
                assert_eq!(common::image(&a, t), f.image());
            }
        }
    }
}

#[test]
fn builtins_monoids_match_naive_closure() {
    let cases: &[(&str, &[u64])] = &[
        ("zn_ring", &[6]),
        ("zn_group", &[5]),
        ("sym_group", &[3]),
        ("left_zero_semigroup", &[3]),
        ("divisor_lattice", &[12]),
        ("boolean_algebra", &[2]),
        ("boolean_semimodule", &[2]),
        ("boolean_semiring", &[]),
        ("random_magma", &[4, 7]),
    ];
    for (kind, params) in cases {
        let a = builtin_algebra(kind, params).unwrap();
        assert_eq!(
            translation_monoid(&a).unwrap().image_set(),
            common::naive_monoid(&a),
            "{kind}"
        );
    }
}

#[test]
fn congruence_lattices_match_full_scan() {
    for seed in 0..30 {
        let a = common::random_small_algebra(seed, 5, 2, 2);
        let got: BTreeSet<_> = congruence_lattice(&a).unwrap().into_iter().collect();
        let expected = common::congruences(&a);
        assert_eq!(got, expected, "seed {seed}");
        let simple = a.carrier() >= 2 && expected.len() == 2;
        assert_eq!(is_simple(&a).unwrap(), simple);
    }
    for (kind, params) in [
        ("zn_ring", 6u64),
        ("zn_group", 4),
        ("divisor_lattice", 12),
        ("boolean_algebra", 2),
    ] {
        let a = builtin_algebra(kind, &[params]).unwrap();
        let got: BTreeSet<_> = congruence_lattice(&a).unwrap().into_iter().collect();
        assert_eq!(got, common::congruences(&a), "{kind}");
    }
}

fn divisor_count(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

#[test]
fn successor_algebras() {
    for n in 1..=7 {
        for m in 0..n {
            let a = successor_algebra(n, m).unwrap();
            let s: Vec<Element> = (0..n).map(|i| if i + 1 < n { i + 1 } else { m }).collect();
            let c = cyclic_monoid_of(&s);
            assert_eq!((c.index, c.period), (m, n - m));
            let monoid = translation_monoid(&a).unwrap();
            assert_eq!(monoid.len(), n);
            // a single unary symbol: the n powers have heights 0..n-1
            assert_eq!(minimal_bound(&a).unwrap().0, n - 1);
            let lattice: BTreeSet<_> = congruence_lattice(&a).unwrap().into_iter().collect();
            assert_eq!(lattice, common::congruences(&a), "succ({n},{m})");
            if m == 0 {
                assert_eq!(lattice.len(), divisor_count(n));
            }
        }
    }
}

fn powers(f: &[Element]) -> usize {
    let mut seen: Vec<Vec<Element>> = vec![(0..f.len()).collect()];
    loop {
        let next: Vec<Element> = seen.last().unwrap().iter().map(|&z| f[z]).collect();
        if seen.contains(&next) {
            return seen.len();
        }
        seen.push(next);
    }
}

#[test]
fn cyclic_monoid_size_is_index_plus_period() {
    let mut rng = affbound::catalog::Lcg::new(11);
    for _ in 0..200 {
        let n = 1 + rng.below(7);
        let f: Vec<Element> = (0..n).map(|_| rng.below(n)).collect();
        let c = cyclic_monoid_of(&f);
        assert_eq!(c.size(), powers(&f));
        let pow = |k: usize| {
            (0..n)
                .map(|z| (0..k).fold(z, |v, _| f[v]))
                .collect::<Vec<_>>()
        };
        assert_eq!(pow(c.index + c.period), pow(c.index));
        assert!(c.period >= 1);
    }
}

fn choe_sound(a: &FiniteAlgebra, order: &[&str]) -> usize {
    let order = ChoeOrder::from_names(a.signature(), order).unwrap();
    let b = choe_bound(a, &order).unwrap();
    let r = check_bounded_by(a, b.bound).unwrap();
    let cert = r
        .certificate()
        .unwrap_or_else(|| panic!("{:?} not bounded by {}", a.name(), b.bound));
    cert.verify(a).unwrap();
    b.bound
}

#[test]
fn choe_bound_is_sound() {
    assert_eq!(
        choe_sound(
            &builtin_algebra("divisor_lattice", &[6]).unwrap(),
            &["join", "meet"]
        ),
        4
    );
    assert_eq!(
        choe_sound(
            &builtin_algebra("divisor_lattice", &[12]).unwrap(),
            &["meet", "join"]
        ),
        4
    );
    assert_eq!(
        choe_sound(
            &builtin_algebra("boolean_semiring", &[]).unwrap(),
            &["+", "*"]
        ),
        4
    );
    for n in 2..=8 {
        assert_eq!(
            choe_sound(&builtin_algebra("zn_ring", &[n]).unwrap(), &["+", "*"]),
            4
        );
    }
    // T0 is constant zero (monoid of size 2), T1 the identity (size 1)
    let sm = builtin_algebra("boolean_semimodule", &[2]).unwrap();
    assert_eq!(choe_sound(&sm, &["+"]), 2 + (2 + 1) - 2);
    // commuting unary maps: powers of one permutation-with-tail
    let mut rng = affbound::catalog::Lcg::new(5);
    for _ in 0..10 {
        let n = 2 + rng.below(4);
        let f: Vec<Element> = (0..n).map(|_| rng.below(n)).collect();
        let g: Vec<Element> = (0..n).map(|z| f[f[z]]).collect();
        let a = FiniteAlgebra::from_fn("pair", n, &[("f", 1), ("g", 1)], |op, t| {
            if op == 0 {
                f[t[0]]
            } else {
                g[t[0]]
            }
        })
        .unwrap();
        let bound = choe_sound(&a, &[]);
        assert_eq!(bound, powers(&f) + powers(&g) - 2);
        let m = translation_monoid(&a).unwrap();
        assert!(
            check_bounded_in(&a, &m, bound, BoundMode::Full, DEFAULT_SKELETON_BUDGET)
                .unwrap()
                .is_bounded()
        );
    }
}
