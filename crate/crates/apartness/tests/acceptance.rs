//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Runs without the test harness so the lines always show.

use std::process::ExitCode;
use std::time::Instant;

use apartness::fixtures;
use apartness::properties::{check_coalgebra, check_dfa, check_stream, violations};
use apartness::random::{random_coalgebra, random_dfa, random_lts, random_stream, rng, LtsConfig};
use apartness::selftest::DENSITIES;
use apartness_core::apartness::Mutation;
use apartness_core::coalgebra::{
    generic_derivation, greatest_bisimulation, least_apartness_gen, verify_generic, Evidence,
};
use apartness_core::{
    derive, greatest_bisimilarity, is_bisimulation, least_apartness, verify, verify_detailed, BisimFlavor, Derivation,
    Flavor, Label, Lts, Obligation, PairRelation, RangeItem, Resolution, RuleTag, StateId,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn st(l: &Lts, name: &str) -> StateId {
    l.resolve_state(name).unwrap_or_else(|| panic!("no state {name}"))
}

fn verified(l: &Lts, f: Flavor, q: StateId, p: StateId) -> Result<Derivation, String> {
    let d = derive(l, f, q, p).ok_or_else(|| format!("no {f} certificate for ({q}, {p})"))?;
    let errs = verify_detailed(l, f, &d);
    ensure(errs.is_empty(), || format!("certificate rejected: {}", errs[0]))?;
    Ok(d)
}

fn dfa_example() -> Outcome {
    let c = fixtures::da();
    let s = StateId;
    let apart = least_apartness_gen(&c);
    ensure(apart.contains(s(0), s(3)), || "q0 and q3 not apart".into())?;
    let bisim = greatest_bisimulation(&c);
    let off: Vec<_> = bisim.pairs().filter(|(x, y)| x != y).collect();
    ensure(off == [(s(1), s(2))], || format!("off-diagonal bisimilar pairs {off:?}"))?;
    let d = generic_derivation(&c, s(0), s(3)).ok_or("no certificate")?;
    ensure(verify_generic(&c, &d), || "certificate rejected".into())?;
    ensure(d.depth() == 2, || format!("depth {}", d.depth()))?;
    // Both states step on `a` (to q1 and q0), and those differ in output.
    let Evidence::ProdFirst(inner) = &d.evidence else { return Err(format!("root evidence {:?}", d.evidence)) };
    let Evidence::At { point, ev } = &**inner else { return Err(format!("transition evidence {inner:?}")) };
    ensure(point == "a", || format!("letter {point}"))?;
    let Evidence::Var(sub) = &**ev else { return Err(format!("successor evidence {ev:?}")) };
    let (x, y) = sub.conclusion;
    ensure((x.min(y), x.max(y)) == (s(0), s(1)), || format!("premise {:?}", sub.conclusion))?;
    ensure(matches!(&sub.evidence, Evidence::ProdSecond(e) if **e == Evidence::AtomNeq), || format!("premise evidence {:?}", sub.evidence))
}

fn sr_example() -> Outcome {
    let l = fixtures::sr();
    let (s, r) = (st(&l, "s"), st(&l, "r"));
    let d = verified(&l, Flavor::Branching, s, r)?;
    ensure(d.rule == RuleTag::InBAct(Label::action("c")), || format!("root rule {}", d.rule))?;
    ensure(!least_apartness(&l, Flavor::Weak).contains(s, r), || "weakly apart".into())?;
    let ids = |names: &[&str]| names.iter().map(|n| st(&l, n)).collect::<Vec<_>>();
    let classes = [ids(&["s", "r"]), ids(&["s1", "r1"]), ids(&["s2", "s4", "r3"]), ids(&["s3", "r2"])];
    let refs: Vec<&[StateId]> = classes.iter().map(Vec::as_slice).collect();
    let rel = PairRelation::from_classes(l.num_states(), &refs);
    ensure(is_bisimulation(&l, BisimFlavor::Weak, &rel), || "four classes are not a weak bisimulation".into())?;
    ensure(!is_bisimulation(&l, BisimFlavor::Branching, &rel), || "four classes are a branching bisimulation".into())
}

fn qp_example() -> Outcome {
    let l = fixtures::qp();
    let (q, p) = (st(&l, "q"), st(&l, "p"));
    let d = verified(&l, Flavor::Branching, q, p)?;
    ensure(d.rule == RuleTag::InBAct(Label::action("c")), || format!("root rule {}", d.rule))?;
    let premises: Vec<(StateId, StateId)> = d
        .obligations
        .iter()
        .filter_map(|o| match o {
            Obligation::Covered { via, .. } => Some(via.subderivations().into_iter().map(|s| s.conclusion)),
            Obligation::Vacuous => None,
        })
        .flatten()
        .collect();
    let want = (st(&l, "q5"), st(&l, "p1"));
    ensure(premises == [want], || format!("premises {premises:?}"))?;
    ensure(!least_apartness(&l, Flavor::Weak).contains(q, p), || "weakly apart".into())
}

fn loops_example() -> Outcome {
    let l = fixtures::loops();
    let (q0, p0) = (st(&l, "q0"), st(&l, "p0"));
    let d = verified(&l, Flavor::Branching, q0, p0)?;
    ensure(d.depth() == 4, || format!("depth {}\n{}", d.depth(), d.render(&l)))?;
    ensure(d.rule == RuleTag::InBAct(Label::action("d")), || format!("root rule {}", d.rule))?;
    ensure(d.step.as_ref().map(|s| s.to) == Some(st(&l, "q2")), || "root step does not go to q2".into())?;
    match &d.obligations[..] {
        [Obligation::Covered { item: RangeItem::Pair(a, b), via: Resolution::Right(r) }, Obligation::Covered { item: RangeItem::Pair(c, e), via: Resolution::Left(m) }] =>
        {
            ensure((*a, *b) == (p0, st(&l, "p1")), || "first range pair".into())?;
            ensure((*c, *e) == (st(&l, "p2"), st(&l, "p3")), || "second range pair".into())?;
            ensure(r.rule == RuleTag::Symm, || format!("right premise rule {}", r.rule))?;
            let inner = r.extra.as_ref().ok_or("symm without premise")?;
            ensure(inner.rule == RuleTag::InBAct(Label::action("e")), || format!("under symm {}", inner.rule))?;
            ensure(m.conclusion == (q0, st(&l, "p2")), || format!("left premise {:?}", m.conclusion))?;
            ensure(m.step.as_ref().map(|s| s.to) == Some(st(&l, "q1")), || "left premise step".into())?;
        }
        other => return Err(format!("obligations {other:?}")),
    }
    let c = fixtures::cycle();
    let (q, p) = (st(&c, "q"), st(&c, "p"));
    ensure(derive(&c, Flavor::Branching, q, p).is_none(), || "cycle pair derived".into())?;
    ensure(greatest_bisimilarity(&c, BisimFlavor::Branching).contains(q, p), || "oracle separates the cycle pair".into())
}

fn rooted_examples() -> Outcome {
    let l = fixtures::nc_left();
    let (q0, p0) = (st(&l, "q0"), st(&l, "p0"));
    ensure(!least_apartness(&l, Flavor::Branching).contains(q0, p0), || "left pair branching-apart".into())?;
    ensure(least_apartness(&l, Flavor::RootedBranching).contains(q0, p0), || "left pair not rooted-apart".into())?;
    let d = verified(&l, Flavor::RootedBranching, q0, p0)?;
    ensure(verify(&l, Flavor::RootedBranching, &d), || "rooted certificate".into())?;
    let (r, rq, rp) = fixtures::nc_right();
    ensure(least_apartness(&r, Flavor::Branching).contains(rq, rp), || "right pair not branching-apart".into())?;
    verified(&r, Flavor::Branching, rq, rp).map(|_| ())
}

const RUNS: u64 = 200;

fn lts_properties() -> Outcome {
    for i in 0..RUNS {
        let cfg = LtsConfig { max_states: 8, max_labels: 3, density: DENSITIES[i as usize % DENSITIES.len()], tau_share: 1.0 };
        let l = random_lts(&mut rng(i), &cfg);
        ensure(l.num_states() <= 8 && l.visible_labels().count() <= 3, || format!("seed {i} out of bounds"))?;
        if let Some((prop, detail)) = violations(&l, Mutation::None).into_iter().next() {
            return Err(format!("seed {i}: {}: {detail}", prop.name()));
        }
    }
    Ok(())
}

fn coalgebra_properties() -> Outcome {
    for i in 0..RUNS {
        let mut r = rng(i);
        let c = random_coalgebra(&mut r, 6, 4);
        ensure(c.carrier_size <= 6 && c.shape.depth() <= 4, || format!("seed {i} out of bounds"))?;
        if let Some(e) = check_coalgebra(&c, &mut r) {
            return Err(format!("seed {i}: {e}"));
        }
        let d = random_dfa(&mut r, 6);
        if let Some(e) = check_coalgebra(&d.coalgebra(), &mut r).or_else(|| check_dfa(&d)) {
            return Err(format!("seed {i}, automaton: {e}"));
        }
    }
    Ok(())
}

fn distinguishers() -> Outcome {
    for i in 0..RUNS {
        let mut r = rng(i.wrapping_add(1 << 32));
        if let Some(e) = check_stream(&random_stream(&mut r, 6)) {
            return Err(format!("seed {i}, stream: {e}"));
        }
        if let Some(e) = check_dfa(&random_dfa(&mut r, 6)) {
            return Err(format!("seed {i}, automaton: {e}"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("automaton example", dfa_example),
        ("s/r example", sr_example),
        ("q/p example", qp_example),
        ("loops and cycle", loops_example),
        ("rooted and choice", rooted_examples),
        ("transition-system properties", lts_properties),
        ("coalgebra properties", coalgebra_properties),
        ("stream and automaton distinguishers", distinguishers),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", k + 1, t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
