//! The invariant battery run by `selftest` and the acceptance suite.
//!
//! Every check returns `None` when the property holds and a short
//! description of a counterexample otherwise.

use apartness_core::apartness::{least_apartness_levels, Mutation};
use apartness_core::coalgebra::{
    dfa_distinguishing_word, dfa_output, generic_derivation, greatest_bisimulation, least_apartness_gen, lift_apart,
    lift_bisim, stream_distinguisher, stream_unfold, verify_generic, FiniteCoalgebra,
};
use apartness_core::{
    derive, greatest_bisimilarity, Deriver, is_bisimulation, verify_detailed, BisimFlavor, Flavor, Lts,
    PairRelation, StateId,
};

use crate::random::{Prng, RawDfa, RawStream};
use rand::Rng;

/// Invariants of the transition-system engines.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LtsProperty {
    Duality,
    WeakInBranching,
    SemiEqualsBranching,
    ProperApartness,
    Stuttering,
    BranchingInRooted,
    AltSound,
    CombinedEqualsBranching,
    ChoiceExtensional,
    Certificates,
    Equivalence,
}

impl LtsProperty {
    pub const ALL: [LtsProperty; 11] = [
        LtsProperty::Duality,
        LtsProperty::WeakInBranching,
        LtsProperty::SemiEqualsBranching,
        LtsProperty::ProperApartness,
        LtsProperty::Stuttering,
        LtsProperty::BranchingInRooted,
        LtsProperty::AltSound,
        LtsProperty::CombinedEqualsBranching,
        LtsProperty::ChoiceExtensional,
        LtsProperty::Certificates,
        LtsProperty::Equivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LtsProperty::Duality => "apartness is the complement of bisimilarity",
            LtsProperty::WeakInBranching => "weak apartness within branching apartness",
            LtsProperty::SemiEqualsBranching => "semi-branching apartness equals branching apartness",
            LtsProperty::ProperApartness => "branching apartness is irreflexive, symmetric, co-transitive",
            LtsProperty::Stuttering => "branching apartness stutters",
            LtsProperty::BranchingInRooted => "branching apartness within rooted apartness",
            LtsProperty::AltSound => "alternative visible rule is sound",
            LtsProperty::CombinedEqualsBranching => "combined rules give branching apartness",
            LtsProperty::ChoiceExtensional => "choice is strongly extensional for rooted apartness",
            LtsProperty::Certificates => "derive matches membership and its output verifies",
            LtsProperty::Equivalence => "branching bisimilarity is an equivalence",
        }
    }
}

/// Engine relations computed once per system.
pub struct Relations {
    pub weak: PairRelation,
    pub branching: PairRelation,
    pub semi: PairRelation,
    pub rooted: PairRelation,
    pub alt: PairRelation,
    pub combined: PairRelation,
}

impl Relations {
    pub fn new(lts: &Lts, mutation: Mutation) -> Self {
        let f = |flavor| least_apartness_levels(lts, flavor, mutation).relation;
        Relations {
            weak: f(Flavor::Weak),
            branching: f(Flavor::Branching),
            semi: f(Flavor::SemiBranching),
            rooted: f(Flavor::RootedBranching),
            alt: f(Flavor::BranchingAltA),
            combined: f(Flavor::BranchingCombined),
        }
    }

    pub fn of(&self, flavor: Flavor) -> &PairRelation {
        match flavor {
            Flavor::Weak => &self.weak,
            Flavor::Branching => &self.branching,
            Flavor::SemiBranching => &self.semi,
            Flavor::RootedBranching => &self.rooted,
            Flavor::BranchingAltA => &self.alt,
            Flavor::BranchingCombined => &self.combined,
        }
    }
}

fn first_outside(a: &PairRelation, b: &PairRelation) -> Option<(StateId, StateId)> {
    a.pairs().find(|&(x, y)| !b.contains(x, y))
}

/// Adds a fresh root `c(x, y)` with the outgoing steps of `x` and `y` for
/// every pair `x <= y`. Sharing the original states instead of copying
/// them for each side changes nothing, because apartness only looks at
/// forward behaviour and copies are isomorphic.
fn with_choice_roots(lts: &Lts) -> (Lts, Vec<(StateId, StateId, StateId)>) {
    let n = lts.num_states();
    let mut ts: Vec<_> = lts.labelled_transitions().map(|(s, l, d)| (s, l.clone(), d)).collect();
    let mut roots = Vec::new();
    for x in 0..n {
        for y in x..n {
            let c = StateId(n + roots.len());
            for s in [x, y] {
                for &(l, d) in lts.successors(StateId(s)) {
                    ts.push((c, lts.label(l).clone(), d));
                }
            }
            roots.push((StateId(x), StateId(y), c));
        }
    }
    (Lts::new(n + roots.len(), lts.initial(), ts).expect("roots in range"), roots)
}

pub fn check(lts: &Lts, rel: &Relations, prop: LtsProperty, mutation: Mutation) -> Option<String> {
    let n = lts.num_states();
    let states = || lts.states();
    match prop {
        LtsProperty::Duality => {
            for f in [Flavor::Weak, Flavor::Branching, Flavor::SemiBranching, Flavor::RootedBranching] {
                let bisim = greatest_bisimilarity(lts, BisimFlavor::of(f));
                let comp = rel.of(f).complement();
                if bisim != comp {
                    let (x, y) = first_outside(&bisim, &comp).or_else(|| first_outside(&comp, &bisim)).expect("differ");
                    return Some(format!("{f}: oracle and complement of apartness disagree on ({x}, {y})"));
                }
                if !is_bisimulation(lts, BisimFlavor::of(f), &comp) {
                    return Some(format!("{f}: complement of apartness is not a bisimulation"));
                }
            }
            None
        }
        LtsProperty::WeakInBranching => first_outside(&rel.weak, &rel.branching).map(|(x, y)| format!("({x}, {y}) weakly apart only")),
        LtsProperty::SemiEqualsBranching => (rel.semi != rel.branching).then(|| "semi-branching differs".to_string()),
        LtsProperty::ProperApartness => {
            let b = &rel.branching;
            if let Some(x) = states().find(|&x| b.contains(x, x)) {
                return Some(format!("{x} apart from itself"));
            }
            for (x, y) in b.pairs() {
                if let Some(z) = states().find(|&z| !b.contains(x, z) && !b.contains(z, y)) {
                    return Some(format!("({x}, {y}) apart but {z} is apart from neither"));
                }
            }
            None
        }
        LtsProperty::Stuttering => {
            let b = &rel.branching;
            for r in states() {
                for &q in lts.tau_closure(r) {
                    for &t in lts.tau_closure(q) {
                        for p in states() {
                            if b.contains(q, p) && !b.contains(r, p) && !b.contains(t, p) {
                                return Some(format!("{r} ->> {q} ->> {t}, {q} apart from {p} but neither end is"));
                            }
                        }
                    }
                }
            }
            None
        }
        LtsProperty::BranchingInRooted => first_outside(&rel.branching, &rel.rooted).map(|(x, y)| format!("({x}, {y}) not rooted-apart")),
        LtsProperty::AltSound => first_outside(&rel.alt, &rel.branching).map(|(x, y)| format!("({x}, {y}) apart by the alternative rule only")),
        LtsProperty::CombinedEqualsBranching => (rel.combined != rel.branching).then(|| "combined rules differ".to_string()),
        LtsProperty::ChoiceExtensional => {
            let (big, roots) = with_choice_roots(lts);
            let rooted_big = least_apartness_levels(&big, Flavor::RootedBranching, mutation).relation;
            for &(q1, q2, c1) in &roots {
                for &(p1, p2, c2) in &roots {
                    if rooted_big.contains(c1, c2) && !rel.rooted.contains(q1, p1) && !rel.rooted.contains(q2, p2) {
                        return Some(format!("{q1}+{q2} rooted-apart from {p1}+{p2}, components are not"));
                    }
                }
            }
            None
        }
        LtsProperty::Certificates => {
            for f in Flavor::ALL {
                let mut batch = Deriver::new(lts, f);
                let (first, last) = (StateId(0), StateId(n - 1));
                if derive(lts, f, first, last) != batch.derive(first, last) {
                    return Some(format!("{f}: single and batch search differ on ({first}, {last})"));
                }
                for x in states() {
                    for y in states() {
                        let d = batch.derive(x, y);
                        if d.is_some() != rel.of(f).contains(x, y) {
                            return Some(format!("{f}: derive and membership disagree on ({x}, {y})"));
                        }
                        if let Some(d) = d {
                            let errs = verify_detailed(lts, f, &d);
                            if let Some(e) = errs.first() {
                                return Some(format!("{f}: certificate for ({x}, {y}) rejected at {e}"));
                            }
                        }
                    }
                }
            }
            None
        }
        LtsProperty::Equivalence => {
            let e = greatest_bisimilarity(lts, BisimFlavor::Branching);
            (!(e.is_reflexive() && e.is_transitive()) || e.size() != n).then(|| "branching bisimilarity is not an equivalence".into())
        }
    }
}

/// All properties that fail on `lts`.
pub fn violations(lts: &Lts, mutation: Mutation) -> Vec<(LtsProperty, String)> {
    let rel = Relations::new(lts, mutation);
    LtsProperty::ALL.iter().filter_map(|&p| check(lts, &rel, p, mutation).map(|m| (p, m))).collect()
}

/// Coalgebra checks: lifting duality and equality lifting on sampled
/// relations, and least apartness against the complement of greatest
/// bisimulation.
fn check_coalgebra_inner(c: &FiniteCoalgebra, rng: &mut Prng) -> Result<(), String> {
    let n = c.carrier_size;
    for _ in 0..4 {
        let mut q = PairRelation::empty(n);
        for x in 0..n {
            for y in x..n {
                if rng.gen_bool(0.4) {
                    q.insert(StateId(x), StateId(y));
                }
            }
        }
        let nq = q.complement();
        for (i, u) in c.structure.iter().enumerate() {
            for (j, v) in c.structure.iter().enumerate() {
                let apart = lift_apart(&c.shape, &q, u, v).map_err(|e| e.to_string())?;
                let bis = lift_bisim(&c.shape, &nq, u, v).map_err(|e| e.to_string())?;
                if apart == bis {
                    return Err(format!("lifting duality fails at ({i}, {j})"));
                }
            }
        }
    }
    let diag = PairRelation::diagonal(n);
    for (i, u) in c.structure.iter().enumerate() {
        if lift_bisim(&c.shape, &diag, u, u) != Ok(true) {
            return Err(format!("equality lifting fails at {i}"));
        }
    }
    let apart = least_apartness_gen(c);
    if apart != greatest_bisimulation(c).complement() {
        return Err("least apartness is not the complement of greatest bisimulation".into());
    }
    for (x, y) in apart.pairs() {
        match generic_derivation(c, x, y) {
            Some(d) if verify_generic(c, &d) => {}
            _ => return Err(format!("no verifying certificate for ({x}, {y})")),
        }
    }
    Ok(())
}

/// Least relation closed under: different outputs are apart, symmetry,
/// and apart successors on a common letter make their sources apart.
/// Works on the raw tables only.
pub fn dfa_rule_closure(d: &RawDfa) -> Vec<Vec<bool>> {
    let n = d.finals.len();
    let mut q = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            q[x][y] = d.finals[x] != d.finals[y];
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if !q[x][y] && (0..d.alphabet.len()).any(|k| q[d.delta[x][k]][d.delta[y][k]]) {
                    q[x][y] = true;
                    q[y][x] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return q;
        }
    }
}

/// Length of the shortest word that separates `x` and `y`, found by
/// stepping the set of reachable pairs one letter at a time, up to
/// `n²` letters.
pub fn dfa_layered_search(d: &RawDfa, x: usize, y: usize) -> Option<usize> {
    let n = d.finals.len();
    let mut layer = std::collections::BTreeSet::from([(x, y)]);
    for len in 0..=n * n {
        if layer.iter().any(|&(a, b)| d.finals[a] != d.finals[b]) {
            return Some(len);
        }
        layer = layer.iter().flat_map(|&(a, b)| (0..d.alphabet.len()).map(move |k| (d.delta[a][k], d.delta[b][k]))).collect();
    }
    None
}

fn check_dfa_inner(d: &RawDfa) -> Result<(), String> {
    let c = d.coalgebra();
    let n = d.finals.len();
    let apart = least_apartness_gen(&c);
    let rules = dfa_rule_closure(d);
    for x in 0..n {
        for y in 0..n {
            let (sx, sy) = (StateId(x), StateId(y));
            if apart.contains(sx, sy) != rules[x][y] {
                return Err(format!("generic and automaton rules disagree on ({x}, {y})"));
            }
            let layered = dfa_layered_search(d, x, y);
            if layered.is_some() != rules[x][y] {
                return Err(format!("word search and apartness disagree on ({x}, {y})"));
            }
            let word = dfa_distinguishing_word(&c, sx, sy).map_err(|e| e.to_string())?;
            if word.as_ref().map(Vec::len) != layered {
                return Err(format!("distinguishing word for ({x}, {y}) is not shortest"));
            }
            if let Some(w) = word {
                if w.len() + 1 > n * n.max(1) {
                    return Err(format!("word for ({x}, {y}) too long"));
                }
                if dfa_output(&c, sx, &w).map_err(|e| e.to_string())? == dfa_output(&c, sy, &w).map_err(|e| e.to_string())? {
                    return Err(format!("word {w:?} does not separate ({x}, {y})"));
                }
            }
        }
    }
    Ok(())
}

fn check_stream_inner(s: &RawStream) -> Result<(), String> {
    let c = s.coalgebra();
    let n = s.heads.len();
    let apart = least_apartness_gen(&c);
    for x in 0..n {
        for y in 0..n {
            let (sx, sy) = (StateId(x), StateId(y));
            let got = stream_distinguisher(&c, sx, sy).map_err(|e| e.to_string())?;
            if got.is_some() != apart.contains(sx, sy) {
                return Err(format!("distinguisher and apartness disagree on ({x}, {y})"));
            }
            let horizon = got.map_or(n * n, |k| k + 1);
            let (ux, uy) = (stream_unfold(&c, sx, horizon).map_err(|e| e.to_string())?, stream_unfold(&c, sy, horizon).map_err(|e| e.to_string())?);
            let first_diff = ux.iter().zip(&uy).position(|(a, b)| a != b);
            if first_diff != got {
                return Err(format!("unfolding ({x}, {y}) gives {first_diff:?}, distinguisher {got:?}"));
            }
            if got.is_some_and(|k| k >= n * n) {
                return Err(format!("depth for ({x}, {y}) exceeds the pair count"));
            }
        }
    }
    Ok(())
}


pub fn check_coalgebra(c: &FiniteCoalgebra, rng: &mut Prng) -> Option<String> {
    check_coalgebra_inner(c, rng).err()
}

pub fn check_dfa(d: &RawDfa) -> Option<String> {
    check_dfa_inner(d).err()
}

pub fn check_stream(s: &RawStream) -> Option<String> {
    check_stream_inner(s).err()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_satisfy_every_property() {
        for l in [fixtures::sr(), fixtures::qp(), fixtures::loops(), fixtures::cycle(), fixtures::nc_left()] {
            assert_eq!(violations(&l, Mutation::None), vec![]);
        }
    }

    #[test]
    fn dropped_tau_premise_is_noticed() {
        // q -τ-> q' with q' -a->; p -a->. Without the premise q and p look apart.
        let l = apartness_core::Lts::new(
            3,
            None,
            [
                (StateId(0), apartness_core::Label::Tau, StateId(1)),
                (StateId(1), apartness_core::Label::action("a"), StateId(1)),
                (StateId(2), apartness_core::Label::action("a"), StateId(2)),
            ],
        )
        .unwrap();
        let v = violations(&l, Mutation::DropTauPremise);
        assert!(v.iter().any(|(p, _)| *p == LtsProperty::Duality), "{v:?}");
    }
}
