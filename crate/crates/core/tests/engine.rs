use apartness_core::apartness::{least_apartness_levels, Mutation};
use apartness_core::*;
use proptest::prelude::*;

fn named(names: &[&str], ts: &[(&str, &str, &str)]) -> Lts {
    let id = |s: &str| StateId(names.iter().position(|n| *n == s).unwrap());
    let t = ts.iter().map(|&(a, l, b)| (id(a), if l == "tau" { Label::Tau } else { Label::action(l) }, id(b)));
    Lts::new(names.len(), None, t).unwrap().with_names(names.iter().copied()).unwrap()
}

fn st(l: &Lts, s: &str) -> StateId {
    l.resolve_state(s).unwrap()
}

fn loops() -> Lts {
    named(
        &["p0", "p1", "p2", "p3", "q0", "q1", "q2", "q3", "q4"],
        &[
            ("p0", "d", "p1"),
            ("p0", "tau", "p2"),
            ("p1", "c", "p0"),
            ("p1", "e", "p0"),
            ("p2", "d", "p3"),
            ("p3", "c", "p2"),
            ("q0", "d", "q1"),
            ("q0", "d", "q2"),
            ("q1", "c", "q0"),
            ("q1", "e", "q0"),
            ("q2", "c", "q3"),
            ("q3", "d", "q4"),
            ("q4", "c", "q3"),
        ],
    )
}

#[test]
fn loops_derivation_has_the_expected_shape() {
    let l = loops();
    let (q0, p0) = (st(&l, "q0"), st(&l, "p0"));
    let d = derive(&l, Flavor::Branching, q0, p0).expect("apart");
    assert!(verify(&l, Flavor::Branching, &d), "{:?}", verify_detailed(&l, Flavor::Branching, &d));
    assert_eq!(d.depth(), 4, "{}", d.render(&l));
    assert_eq!(d.rule, RuleTag::InBAct(Label::action("d")));
    assert_eq!(d.step.as_ref().unwrap().to, st(&l, "q2"));
    match &d.obligations[..] {
        [Obligation::Covered { item: RangeItem::Pair(a, b), via: Resolution::Right(r) }, Obligation::Covered { item: RangeItem::Pair(c, e), via: Resolution::Left(m) }] =>
        {
            assert_eq!((*a, *b), (p0, st(&l, "p1")));
            assert_eq!((*c, *e), (st(&l, "p2"), st(&l, "p3")));
            assert_eq!(r.rule, RuleTag::Symm);
            assert_eq!(r.extra.as_ref().unwrap().rule, RuleTag::InBAct(Label::action("e")));
            assert_eq!(m.conclusion, (q0, st(&l, "p2")));
            assert_eq!(m.step.as_ref().unwrap().to, st(&l, "q1"));
        }
        other => panic!("unexpected obligations {other:?}"),
    }
}

#[test]
fn two_cycle_and_self_loop_are_not_apart() {
    let l = named(&["q", "q'", "p"], &[("q", "d", "q'"), ("q'", "d", "q"), ("p", "d", "p")]);
    let (q, p) = (st(&l, "q"), st(&l, "p"));
    assert!(derive(&l, Flavor::Branching, q, p).is_none());
    assert!(greatest_bisimilarity(&l, BisimFlavor::Branching).contains(q, p));
}

#[test]
fn tau_choice_example_separates_weak_from_branching() {
    let l = named(
        &["s", "s1", "s2", "s3", "s4", "r", "r1", "r2", "r3"],
        &[
            ("s", "tau", "s1"),
            ("s", "d", "s3"),
            ("s", "c", "s2"),
            ("s1", "c", "s4"),
            ("r", "tau", "r1"),
            ("r", "d", "r2"),
            ("r1", "c", "r3"),
        ],
    );
    let (s, r) = (st(&l, "s"), st(&l, "r"));
    let d = derive(&l, Flavor::Branching, s, r).unwrap();
    assert!(verify(&l, Flavor::Branching, &d));
    assert_eq!(d.rule, RuleTag::InBAct(Label::action("c")));
    assert!(!least_apartness(&l, Flavor::Weak).contains(s, r));
}

#[test]
fn levels_predict_shortest_depth() {
    let l = loops();
    let sat = least_apartness_levels(&l, Flavor::Branching, Mutation::None);
    for (x, y) in sat.relation.pairs() {
        let d = derive(&l, Flavor::Branching, x, y).unwrap();
        assert_eq!(d.depth() as u32, sat.level(x, y).unwrap() + 1);
    }
}

fn arb_lts() -> impl Strategy<Value = Lts> {
    (1usize..6).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0u8..3, 0..n), 0..(2 * n)).prop_map(move |ts| {
            let t = ts.into_iter().map(|(a, l, b)| {
                let label = if l == 0 { Label::Tau } else { Label::action(["a", "b"][l as usize - 1]) };
                (StateId(a), label, StateId(b))
            });
            Lts::new(n, None, t).unwrap()
        })
    })
}

#[test]
fn rooted_apartness_respects_choice() {
    // c(1,1) and c(1,3) both step silently into branching-equivalent
    // states, so they are not rooted-apart even though 3 -τ-> 2 is.
    let l = named(
        &["x", "y", "z", "w", "c11", "c13"],
        &[
            ("x", "a", "y"),
            ("y", "tau", "w"),
            ("w", "tau", "z"),
            ("c11", "tau", "w"),
            ("c13", "tau", "w"),
            ("c13", "tau", "z"),
        ],
    );
    let rooted = least_apartness(&l, Flavor::RootedBranching);
    assert!(!rooted.contains(st(&l, "y"), st(&l, "w")));
    assert!(rooted.contains(st(&l, "w"), st(&l, "z")));
    assert!(!rooted.contains(st(&l, "c11"), st(&l, "c13")));
    assert!(greatest_bisimilarity(&l, BisimFlavor::RootedBranching).contains(st(&l, "c11"), st(&l, "c13")));
}

#[test]
fn silent_first_step_against_none_is_rooted_apart() {
    let l = named(&["q0", "q'", "q1", "p0", "p1"], &[("q0", "tau", "q'"), ("q'", "a", "q1"), ("p0", "a", "p1")]);
    let d = derive(&l, Flavor::RootedBranching, st(&l, "q0"), st(&l, "p0")).unwrap();
    assert!(verify(&l, Flavor::RootedBranching, &d));
    assert_eq!(d.rule, RuleTag::InRb(Label::Tau));
    assert_eq!(d.obligations, vec![Obligation::Vacuous]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn batch_search_matches_single_queries(l in arb_lts()) {
        for f in Flavor::ALL {
            let mut batch = Deriver::new(&l, f);
            for x in l.states() {
                for y in l.states() {
                    prop_assert_eq!(batch.derive(x, y), derive(&l, f, x, y));
                }
            }
        }
    }

    #[test]
    fn apartness_is_complement_of_bisimilarity(l in arb_lts()) {
        for f in [Flavor::Weak, Flavor::Branching, Flavor::SemiBranching, Flavor::RootedBranching] {
            prop_assert!(gfp_equals_apartness_complement(&l, f), "{f}");
        }
    }

    #[test]
    fn derived_certificates_verify(l in arb_lts()) {
        for f in Flavor::ALL {
            let apart = least_apartness(&l, f);
            for x in l.states() {
                for y in l.states() {
                    let d = derive(&l, f, x, y);
                    prop_assert_eq!(d.is_some(), apart.contains(x, y));
                    if let Some(d) = d {
                        prop_assert!(verify(&l, f, &d), "{:?}", verify_detailed(&l, f, &d));
                    }
                }
            }
        }
    }
}
