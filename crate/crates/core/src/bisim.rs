//! Bisimulation as a greatest fixpoint, used as an independent oracle.
//!
//! The largest bisimulation is obtained by deleting pairs from the total
//! relation until every remaining pair satisfies the transfer conditions in
//! both directions. Nothing here looks at the apartness rules.

use crate::apartness::Flavor;
use crate::lts::{Lts, StateId};
use crate::relation::PairRelation;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BisimFlavor {
    Weak,
    Branching,
    SemiBranching,
    RootedBranching,
}

impl BisimFlavor {
    pub const ALL: [BisimFlavor; 4] =
        [BisimFlavor::Weak, BisimFlavor::Branching, BisimFlavor::SemiBranching, BisimFlavor::RootedBranching];

    /// The equivalence whose complement the given apartness is meant to be.
    pub fn of(flavor: Flavor) -> BisimFlavor {
        match flavor {
            Flavor::Weak => BisimFlavor::Weak,
            Flavor::SemiBranching => BisimFlavor::SemiBranching,
            Flavor::RootedBranching => BisimFlavor::RootedBranching,
            Flavor::Branching | Flavor::BranchingAltA | Flavor::BranchingCombined => BisimFlavor::Branching,
        }
    }
}

/// `q`'s steps are matched by `p` inside `r`.
fn transfers(lts: &Lts, flavor: BisimFlavor, r: &PairRelation, q: StateId, p: StateId) -> bool {
    lts.successors(q).iter().all(|&(a, q1)| match flavor {
        BisimFlavor::Weak => {
            if a.is_tau() {
                lts.tau_closure(p).iter().any(|&p1| r.contains(q1, p1))
            } else {
                lts.weak_successors(p, a).into_iter().any(|p3| r.contains(q1, p3))
            }
        }
        BisimFlavor::Branching | BisimFlavor::RootedBranching => {
            (a.is_tau() && r.contains(q1, p))
                || lts.stepped_pairs(p, a).iter().copied().any(|(p1, p2)| r.contains(q, p1) && r.contains(q1, p2))
        }
        BisimFlavor::SemiBranching => {
            if a.is_tau() {
                r.contains(q1, p)
                    || lts.stepped_pairs(p, a).iter().copied().any(|(p1, p2)| r.contains(q1, p2) && (r.contains(q, p1) || r.contains(q, p2)))
            } else {
                lts.stepped_pairs(p, a).iter().copied().any(|(p1, p2)| r.contains(q, p1) && r.contains(q1, p2))
            }
        }
    })
}

/// Every single step of `q` is answered by the same single step of `p`
/// into a branching bisimilar state.
fn rooted(lts: &Lts, b: &PairRelation, q: StateId, p: StateId) -> bool {
    lts.successors(q).iter().all(|&(a, q1)| lts.successors_by(p, a).any(|p1| b.contains(q1, p1)))
}

/// Whether the symmetric relation `r` is a bisimulation of the flavor. For
/// the rooted flavor every pair must meet the initial-step condition
/// against branching bisimilarity.
pub fn is_bisimulation(lts: &Lts, flavor: BisimFlavor, r: &PairRelation) -> bool {
    assert_eq!(r.size(), lts.num_states(), "relation and system sizes differ");
    if flavor == BisimFlavor::RootedBranching {
        let b = greatest_bisimilarity(lts, BisimFlavor::Branching);
        return r.pairs().all(|(x, y)| rooted(lts, &b, x, y) && rooted(lts, &b, y, x));
    }
    r.pairs().all(|(x, y)| transfers(lts, flavor, r, x, y) && transfers(lts, flavor, r, y, x))
}

/// The largest bisimulation of the flavor. Rooted bisimilarity keeps the
/// pairs of branching bisimilarity whose initial steps match.
pub fn greatest_bisimilarity(lts: &Lts, flavor: BisimFlavor) -> PairRelation {
    if flavor == BisimFlavor::RootedBranching {
        let b = greatest_bisimilarity(lts, BisimFlavor::Branching);
        let mut r = b.clone();
        for (x, y) in b.pairs() {
            if !(rooted(lts, &b, x, y) && rooted(lts, &b, y, x)) {
                r.remove(x, y);
            }
        }
        return r;
    }
    let mut r = PairRelation::total(lts.num_states());
    loop {
        let doomed: alloc::vec::Vec<_> =
            r.pairs().filter(|&(x, y)| !(transfers(lts, flavor, &r, x, y) && transfers(lts, flavor, &r, y, x))).collect();
        if doomed.is_empty() {
            return r;
        }
        for (x, y) in doomed {
            r.remove(x, y);
        }
    }
}

/// Whether the largest bisimulation is exactly the complement of the least
/// apartness of the flavor.
pub fn gfp_equals_apartness_complement(lts: &Lts, flavor: Flavor) -> bool {
    let bisim = greatest_bisimilarity(lts, BisimFlavor::of(flavor));
    let apart = crate::apartness::least_apartness(lts, flavor);
    bisim == apart.complement()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::Label;

    fn sys(n: usize, ts: &[(usize, &str, usize)]) -> Lts {
        let t = ts.iter().map(|&(a, l, b)| {
            let label = if l == "tau" { Label::Tau } else { Label::action(l) };
            (StateId(a), label, StateId(b))
        });
        Lts::new(n, None, t).unwrap()
    }

    #[test]
    fn tau_prefix_is_weakly_and_branching_equivalent() {
        // 0 -tau-> 1 -a-> 2   versus   3 -a-> 4
        let l = sys(5, &[(0, "tau", 1), (1, "a", 2), (3, "a", 4)]);
        for f in [BisimFlavor::Weak, BisimFlavor::Branching, BisimFlavor::SemiBranching] {
            assert!(greatest_bisimilarity(&l, f).contains(StateId(0), StateId(3)), "{f:?}");
        }
        assert!(!greatest_bisimilarity(&l, BisimFlavor::RootedBranching).contains(StateId(0), StateId(3)));
    }

    #[test]
    fn deadlock_versus_action() {
        let l = sys(2, &[(0, "a", 0)]);
        for f in BisimFlavor::ALL {
            let r = greatest_bisimilarity(&l, f);
            assert!(!r.contains(StateId(0), StateId(1)));
            assert!(is_bisimulation(&l, f, &r));
        }
    }
}
