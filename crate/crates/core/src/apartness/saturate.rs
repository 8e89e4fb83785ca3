use alloc::vec;
use alloc::vec::Vec;

use super::rules::{Disjunct, Goal, Instance, Mutation, Rules};
use super::Flavor;
use crate::lts::{Lts, StateId};
use crate::relation::PairRelation;

/// A saturated apartness together with the round in which each pair entered.
///
/// Rounds are synchronous: round `k` fires every rule instance whose
/// premises hold after round `k - 1`. When the rules only mention their own
/// flavor, a pair first added in round `k` has a shortest derivation of
/// depth `k + 1`; rooted rounds count only the step at the root.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub relation: PairRelation,
    levels: Vec<u32>,
    /// The completed branching apartness consulted by rooted and combined
    /// flavors.
    pub base: Option<PairRelation>,
    pub rounds: u32,
}

impl Saturation {
    /// Round in which `q ⊥ p` was added, or `None` when the pair is not apart.
    pub fn level(&self, q: StateId, p: StateId) -> Option<u32> {
        let l = self.levels[q.0 * self.relation.size() + p.0];
        (l != 0).then_some(l)
    }
}

pub(crate) struct Judge<'r> {
    pub flavor: Flavor,
    pub current: &'r PairRelation,
    pub base: Option<&'r PairRelation>,
}

impl Judge<'_> {
    pub fn holds(&self, g: Goal) -> bool {
        if g.flavor == self.flavor {
            self.current.contains(g.q, g.p)
        } else {
            self.base.expect("foreign goal needs a base relation").contains(g.q, g.p)
        }
    }

    pub fn fires(&self, inst: &Instance) -> bool {
        inst.extra.is_none_or(|g| self.holds(g))
            && inst.cases.iter().all(|c| c.options.iter().any(|d| match *d {
                Disjunct::Left(g) | Disjunct::Right(g) => self.holds(g),
                Disjunct::Both(g, h) => self.holds(g) && self.holds(h),
            }))
    }
}

/// The least apartness of the given flavor.
pub fn least_apartness(lts: &Lts, flavor: Flavor) -> PairRelation {
    least_apartness_levels(lts, flavor, Mutation::None).relation
}

/// Saturation with per-pair levels. `mutation` is for testing the tests.
pub fn least_apartness_levels(lts: &Lts, flavor: Flavor, mutation: Mutation) -> Saturation {
    let n = lts.num_states();
    let base = flavor.base().map(|b| least_apartness_levels(lts, b, mutation).relation);
    let bisim = match flavor {
        Flavor::BranchingCombined => base.as_ref().map(PairRelation::complement),
        _ => None,
    };
    let rules = Rules::new(lts, flavor, bisim, mutation);
    let instances: Vec<Vec<Instance>> =
        (0..n * n).map(|i| rules.instances(StateId(i / n), StateId(i % n))).collect();

    // Pairs whose instances mention a same-flavor goal: only they can
    // change after that goal is added.
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in x..n {
            let pair = x * n + y;
            let goals = instances[pair].iter().chain(&instances[y * n + x]).flat_map(|inst| {
                inst.extra.into_iter().chain(inst.cases.iter().flat_map(|c| c.options.iter().flat_map(|o| o.goals())))
            });
            for g in goals.filter(|g| g.flavor == flavor) {
                let d = &mut dependents[g.q.0.min(g.p.0) * n + g.q.0.max(g.p.0)];
                // Pairs are visited in increasing order, so repeats are adjacent.
                if d.last() != Some(&pair) {
                    d.push(pair);
                }
            }
        }
    }

    let mut current = PairRelation::empty(n);
    let mut levels = vec![0u32; n * n];
    let mut round = 0u32;
    let mut candidates: Vec<usize> = (0..n).flat_map(|x| (x..n).map(move |y| x * n + y)).collect();
    loop {
        let judge = Judge { flavor, current: &current, base: base.as_ref() };
        let mut fresh = Vec::new();
        for &c in &candidates {
            let (x, y) = (c / n, c % n);
            let (sx, sy) = (StateId(x), StateId(y));
            if current.contains(sx, sy) {
                continue;
            }
            let fires = instances[x * n + y].iter().any(|i| judge.fires(i))
                || instances[y * n + x].iter().any(|i| judge.fires(i));
            if fires {
                fresh.push((sx, sy));
            }
        }
        if fresh.is_empty() {
            break;
        }
        round += 1;
        let mut next = Vec::new();
        for (x, y) in fresh {
            current.insert(x, y);
            levels[x.0 * n + y.0] = round;
            levels[y.0 * n + x.0] = round;
            next.extend_from_slice(&dependents[x.0 * n + y.0]);
        }
        next.sort_unstable();
        next.dedup();
        candidates = next;
    }
    Saturation { relation: current, levels, base, rounds: round }
}
