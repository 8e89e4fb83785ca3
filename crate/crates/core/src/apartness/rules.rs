//! Rule instances as data.
//!
//! Saturation, search and verification all consume the same enumeration of
//! instances, so a rule is written down exactly once.

use alloc::vec::Vec;

use super::{Flavor, RangeItem, RuleTag};
use crate::lts::{LabelId, Lts, StateId};
use crate::relation::PairRelation;

/// A judgement `q ⊥ p` of a given flavor.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Goal {
    pub flavor: Flavor,
    pub q: StateId,
    pub p: StateId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Disjunct {
    Left(Goal),
    Right(Goal),
    Both(Goal, Goal),
}

impl Disjunct {
    pub fn goals(&self) -> impl Iterator<Item = Goal> {
        let (a, b) = match *self {
            Disjunct::Left(g) | Disjunct::Right(g) => (g, None),
            Disjunct::Both(g, h) => (g, Some(h)),
        };
        core::iter::once(a).chain(b)
    }
}

/// One or two alternatives, stored inline: cases are numerous and never
/// offer more than two ways out.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Options {
    items: [Disjunct; 2],
    len: u8,
}

impl Options {
    pub fn one(d: Disjunct) -> Self {
        Options { items: [d, d], len: 1 }
    }

    pub fn two(a: Disjunct, b: Disjunct) -> Self {
        Options { items: [a, b], len: 2 }
    }
}

impl core::ops::Deref for Options {
    type Target = [Disjunct];

    fn deref(&self) -> &[Disjunct] {
        &self.items[..self.len as usize]
    }
}

/// One element of the range together with the ways to discharge it.
#[derive(Clone, Debug)]
pub(crate) struct Case {
    pub item: RangeItem,
    pub options: Options,
}

/// A rule applied to `q ⊥ p` with a fixed outgoing step of `q`.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub rule: RuleTag,
    pub label: LabelId,
    pub to: StateId,
    pub extra: Option<Goal>,
    pub cases: Vec<Case>,
}

/// Knobs that deliberately break a rule. Only used to check that the
/// property battery notices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Fire the branching τ rule without its `q' ⊥ p` premise.
    DropTauPremise,
    /// Only demand the first element of each range.
    FirstCaseOnly,
}

pub(crate) struct Rules<'a> {
    lts: &'a Lts,
    flavor: Flavor,
    /// Branching bisimilarity, needed by the combined flavor.
    bisim: Option<PairRelation>,
    mutation: Mutation,
}

impl<'a> Rules<'a> {
    /// `bisim` must be present for [`Flavor::BranchingCombined`].
    pub fn new(lts: &'a Lts, flavor: Flavor, bisim: Option<PairRelation>, mutation: Mutation) -> Self {
        assert!(flavor != Flavor::BranchingCombined || bisim.is_some(), "combined flavor needs branching bisimilarity");
        Rules { lts, flavor, bisim, mutation }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    fn goal(&self, q: StateId, p: StateId) -> Goal {
        Goal { flavor: self.flavor, q, p }
    }

    fn stepped_cases(&self, p: StateId, label: LabelId, mut options: impl FnMut(StateId, StateId) -> Options) -> Vec<Case> {
        self.lts
            .stepped_pairs(p, label)
            .iter()
            .copied()
            .map(|(p1, p2)| Case { item: RangeItem::Pair(p1, p2), options: options(p1, p2) })
            .collect()
    }

    fn filtered_cases(&self, q: StateId, q1: StateId, p: StateId, label: LabelId) -> Vec<Case> {
        let bisim = self.bisim.as_ref().expect("checked in new");
        self.lts
            .stepped_pairs(p, label)
            .iter()
            .copied()
            .filter(|&(_, p2)| bisim.contains(q1, p2))
            .map(|(p1, p2)| Case { item: RangeItem::Pair(p1, p2), options: Options::one(Disjunct::Left(self.goal(q, p1))) })
            .collect()
    }

    /// Instances concluding `q ⊥ p` directly (no `symm`), ordered by step
    /// target, then label, then rule.
    pub fn instances(&self, q: StateId, p: StateId) -> Vec<Instance> {
        let lts = self.lts;
        let mut steps: Vec<(StateId, LabelId)> = lts.successors(q).iter().map(|&(l, t)| (t, l)).collect();
        steps.sort();
        let mut out = Vec::new();
        for (q1, a) in steps {
            let tau = a.is_tau();
            let tag_label = || lts.label(a).clone();
            let mut push = |rule: RuleTag, extra: Option<Goal>, cases: Vec<Case>| {
                out.push(Instance { rule, label: a, to: q1, extra, cases });
            };
            match self.flavor {
                Flavor::Weak => {
                    if tau {
                        let cases = lts
                            .tau_closure(p)
                            .iter()
                            .map(|&p1| Case { item: RangeItem::State(p1), options: Options::one(Disjunct::Left(self.goal(q1, p1))) })
                            .collect();
                        push(RuleTag::InWTau, None, cases);
                    } else {
                        let cases = lts
                            .weak_successors(p, a)
                            .into_iter()
                            .map(|p3| Case { item: RangeItem::State(p3), options: Options::one(Disjunct::Left(self.goal(q1, p3))) })
                            .collect();
                        push(RuleTag::InWAct(tag_label()), None, cases);
                    }
                }
                Flavor::Branching | Flavor::RootedBranching | Flavor::BranchingAltA | Flavor::SemiBranching => {
                    // A rooted pair may also be concluded by a branching rule, but
                    // everything above the root is then branching apartness.
                    let sub = |q, p| Goal { flavor: self.flavor.base().unwrap_or(self.flavor), q, p };
                    let plain = |p1, p2| Options::two(Disjunct::Left(sub(q, p1)), Disjunct::Right(sub(q1, p2)));
                    if tau {
                        let extra = match self.mutation {
                            Mutation::DropTauPremise => None,
                            _ => Some(sub(q1, p)),
                        };
                        if self.flavor == Flavor::SemiBranching {
                            let cases = self.stepped_cases(p, a, |p1, p2| {
                                Options::two(Disjunct::Left(sub(q1, p2)), Disjunct::Both(sub(q, p1), sub(q, p2)))
                            });
                            push(RuleTag::InSbTau, extra, cases);
                        } else {
                            push(RuleTag::InBTau, extra, self.stepped_cases(p, a, plain));
                        }
                    } else if self.flavor == Flavor::BranchingAltA {
                        let cases = self.stepped_cases(p, a, |p1, p2| {
                            Options::two(Disjunct::Left(sub(p, p1)), Disjunct::Right(sub(q1, p2)))
                        });
                        push(RuleTag::InBAltA(tag_label()), None, cases);
                    } else {
                        push(RuleTag::InBAct(tag_label()), None, self.stepped_cases(p, a, plain));
                    }
                    if self.flavor == Flavor::RootedBranching {
                        let cases = lts
                            .successors_by(p, a)
                            .map(|p1| Case {
                                item: RangeItem::State(p1),
                                options: Options::one(Disjunct::Left(sub(q1, p1))),
                            })
                            .collect();
                        push(RuleTag::InRb(tag_label()), None, cases);
                    }
                }
                Flavor::BranchingCombined => {
                    if tau {
                        push(RuleTag::InBTauCombined, Some(self.goal(q1, p)), self.filtered_cases(q, q1, p, a));
                    } else {
                        push(RuleTag::InBActCombined(tag_label()), None, self.filtered_cases(q, q1, p, a));
                    }
                }
            }
        }
        if self.mutation == Mutation::FirstCaseOnly {
            for inst in &mut out {
                inst.cases.truncate(1);
            }
        }
        out
    }
}
