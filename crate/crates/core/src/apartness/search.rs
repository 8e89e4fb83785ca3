//! Shortest-derivation search.
//!
//! The goals reachable from the query through rule premises are collected
//! first. On that finite graph the least height of every derivable goal is
//! computed round by round: a goal gets height `r` in round `r` when one of
//! its rule instances only needs goals settled earlier. A derivation is
//! then read off by always picking premises of smaller height, so it is as
//! short as possible.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::rules::{Disjunct, Goal, Instance, Mutation, Rules};
use super::{Derivation, Flavor, Obligation, Resolution, RuleTag, Step};
use crate::bisim::{greatest_bisimilarity, BisimFlavor};
use crate::lts::{Lts, StateId};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    /// Give up on derivations taller than this. `None` searches until the
    /// question is settled.
    pub max_depth: Option<usize>,
}

type Key = (Flavor, StateId, StateId);

fn key(g: Goal) -> Key {
    (g.flavor, g.q.min(g.p), g.q.max(g.p))
}

/// Flips a derivation of `p ⊥ q` into one of `q ⊥ p`.
fn orient(d: Derivation, q: StateId, p: StateId) -> Derivation {
    if d.conclusion == (q, p) {
        d
    } else if d.rule == RuleTag::Symm {
        *d.extra.expect("symm has a premise")
    } else {
        Derivation { conclusion: (q, p), rule: RuleTag::Symm, step: None, extra: Some(Box::new(d)), obligations: Vec::new() }
    }
}

const NONE: u32 = u32::MAX;
const UNSETTLED: usize = usize::MAX;

/// A rule instance with premises given as node indices. `cases` ranges
/// over `Searcher::cases`, each case ranges over `Searcher::options`, and
/// each option ranges over `Searcher::goals`.
#[derive(Copy, Clone)]
struct Compiled {
    extra: u32,
    cases: (u32, u32),
}

struct Searcher<'a> {
    lts: &'a Lts,
    rules: Vec<Rules<'a>>,
    index: BTreeMap<Key, usize>,
    keys: Vec<Key>,
    /// Per node: its instances concluding `min ⊥ max` are
    /// `insts[start..mid]`, those concluding `max ⊥ min` are `insts[mid..end]`.
    spans: Vec<(u32, u32, u32)>,
    insts: Vec<Compiled>,
    cases: Vec<(u32, u32)>,
    options: Vec<(u32, u32)>,
    goals: Vec<u32>,
    dependents: Vec<Vec<u32>>,
    height: Vec<usize>,
    built: BTreeMap<(Flavor, StateId, StateId), Derivation>,
}

impl<'a> Searcher<'a> {
    fn explore(lts: &'a Lts, flavor: Flavor, roots: impl IntoIterator<Item = Goal>) -> Self {
        let bisim = match flavor {
            Flavor::BranchingCombined => Some(greatest_bisimilarity(lts, BisimFlavor::Branching)),
            _ => None,
        };
        let mut rules = alloc::vec![Rules::new(lts, flavor, bisim, Mutation::None)];
        if let Some(b) = flavor.base() {
            rules.push(Rules::new(lts, b, None, Mutation::None));
        }
        let mut s = Searcher {
            lts,
            rules,
            index: BTreeMap::new(),
            keys: Vec::new(),
            spans: Vec::new(),
            insts: Vec::new(),
            cases: Vec::new(),
            options: Vec::new(),
            goals: Vec::new(),
            dependents: Vec::new(),
            height: Vec::new(),
            built: BTreeMap::new(),
        };
        for g in roots {
            s.intern(key(g));
        }
        // Nodes are numbered on discovery, so `next` walks them breadth first.
        let mut next = 0;
        while next < s.keys.len() {
            let (f, a, b) = s.keys[next];
            let r = s.rules.iter().position(|r| r.flavor() == f).expect("flavor has rules");
            let start = s.insts.len() as u32;
            let forward = s.rules[r].instances(a, b);
            s.compile(next, &forward);
            let mid = s.insts.len() as u32;
            if a != b {
                let backward = s.rules[r].instances(b, a);
                s.compile(next, &backward);
            }
            s.spans.push((start, mid, s.insts.len() as u32));
            next += 1;
        }
        for d in &mut s.dependents {
            d.sort_unstable();
            d.dedup();
        }
        s.height = alloc::vec![UNSETTLED; s.keys.len()];
        s
    }

    fn intern(&mut self, k: Key) -> u32 {
        if let Some(&i) = self.index.get(&k) {
            return i as u32;
        }
        let i = self.keys.len();
        self.index.insert(k, i);
        self.keys.push(k);
        self.dependents.push(Vec::new());
        i as u32
    }

    fn compile(&mut self, node: usize, insts: &[Instance]) {
        for inst in insts {
            let extra = inst.extra.map_or(NONE, |g| self.intern(key(g)));
            if extra != NONE {
                self.dependents[extra as usize].push(node as u32);
            }
            let case_start = self.cases.len() as u32;
            for case in &inst.cases {
                let opt_start = self.options.len() as u32;
                for o in case.options.iter() {
                    let goal_start = self.goals.len() as u32;
                    for g in o.goals() {
                        let i = self.intern(key(g));
                        self.dependents[i as usize].push(node as u32);
                        self.goals.push(i);
                    }
                    self.options.push((goal_start, self.goals.len() as u32));
                }
                self.cases.push((opt_start, self.options.len() as u32));
            }
            self.insts.push(Compiled { extra, cases: (case_start, self.cases.len() as u32) });
        }
    }

    fn below(&self, i: u32, r: usize) -> bool {
        self.height[i as usize] < r
    }

    /// Position (within its case) of the first option usable below height `r`.
    fn usable(&self, case: (u32, u32), r: usize) -> Option<usize> {
        let (a, b) = case;
        (a..b).position(|o| {
            let (x, y) = self.options[o as usize];
            self.goals[x as usize..y as usize].iter().all(|&i| self.below(i, r))
        })
    }

    fn fires(&self, c: Compiled, r: usize) -> bool {
        (c.extra == NONE || self.below(c.extra, r))
            && (c.cases.0..c.cases.1).all(|k| self.usable(self.cases[k as usize], r).is_some())
    }

    /// Runs rounds until node `root` is settled (every node when `root` is
    /// `None`), nothing changes, or the height exceeds `max`. Only nodes
    /// depending on a goal settled in the previous round can fire anew.
    fn settle(&mut self, root: Option<usize>, max: usize) -> Option<usize> {
        let mut candidates: Vec<u32> = (0..self.keys.len() as u32).collect();
        // Two is the height of a rule with no premises.
        for r in 2..=max {
            let fresh: Vec<u32> = candidates
                .iter()
                .copied()
                .filter(|&i| {
                    let (a, _, b) = self.spans[i as usize];
                    self.height[i as usize] == UNSETTLED && (a..b).any(|j| self.fires(self.insts[j as usize], r))
                })
                .collect();
            if fresh.is_empty() {
                return None;
            }
            for &i in &fresh {
                self.height[i as usize] = r;
            }
            if root.is_some_and(|i| self.height[i] != UNSETTLED) {
                return Some(r);
            }
            let mut next: Vec<u32> = fresh.iter().flat_map(|&i| self.dependents[i as usize].iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            candidates = next;
        }
        None
    }

    fn build(&mut self, g: Goal) -> Derivation {
        if let Some(d) = self.built.get(&(g.flavor, g.q, g.p)) {
            return d.clone();
        }
        let i = self.index[&key(g)];
        let r = self.height[i];
        let (f, a, b) = self.keys[i];
        let (start, mid, end) = self.spans[i];
        // Try the orientation of `g` first.
        let order: Vec<u32> = if g.q == a { (start..end).collect() } else { (mid..end).chain(start..mid).collect() };
        let j = order.into_iter().find(|&j| self.fires(self.insts[j as usize], r)).expect("settled goal has a firing instance");
        let rules = self.rules.iter().find(|x| x.flavor() == f).expect("flavor has rules");
        let (q, p, inst) = if j < mid {
            (a, b, rules.instances(a, b).swap_remove((j - start) as usize))
        } else {
            (b, a, rules.instances(b, a).swap_remove((j - mid) as usize))
        };
        let d = self.build_instance(&inst, self.insts[j as usize], q, p, r);
        let d = orient(d, g.q, g.p);
        self.built.insert((g.flavor, g.q, g.p), d.clone());
        d
    }

    fn build_instance(&mut self, inst: &Instance, c: Compiled, q: StateId, p: StateId, r: usize) -> Derivation {
        let extra = inst.extra.map(|g| Box::new(self.build(g)));
        let mut obligations = Vec::with_capacity(inst.cases.len().max(1));
        if inst.cases.is_empty() {
            obligations.push(Obligation::Vacuous);
        }
        for (k, case) in inst.cases.iter().enumerate() {
            let o = self.usable(self.cases[c.cases.0 as usize + k], r).expect("instance fires");
            let via = match case.options[o] {
                Disjunct::Left(g) => Resolution::Left(self.build(g)),
                Disjunct::Right(g) => Resolution::Right(self.build(g)),
                Disjunct::Both(g, h) => Resolution::Both(self.build(g), self.build(h)),
            };
            obligations.push(Obligation::Covered { item: case.item, via });
        }
        Derivation {
            conclusion: (q, p),
            rule: inst.rule.clone(),
            step: Some(Step { to: inst.to, label: self.lts.label(inst.label).clone() }),
            extra,
            obligations,
        }
    }
}

/// A shortest derivation of `q ⊥ p`, or `None` when the states are not apart.
pub fn derive(lts: &Lts, flavor: Flavor, q: StateId, p: StateId) -> Option<Derivation> {
    derive_with(lts, flavor, q, p, SearchLimits::default())
}

/// Like [`derive`], but also `None` when every derivation is taller than
/// `limits.max_depth`.
pub fn derive_with(lts: &Lts, flavor: Flavor, q: StateId, p: StateId, limits: SearchLimits) -> Option<Derivation> {
    let goal = Goal { flavor, q, p };
    let mut s = Searcher::explore(lts, flavor, [goal]);
    // Each round settles at least one goal, so the graph size bounds the height.
    let max = limits.max_depth.unwrap_or(usize::MAX).min(s.keys.len() + 1);
    let root = s.index[&key(goal)];
    s.settle(Some(root), max)?;
    Some(s.build(goal))
}

/// Shortest derivations for many pairs of one system, sharing the goal
/// graph and the computed heights between queries.
pub struct Deriver<'a> {
    flavor: Flavor,
    searcher: Searcher<'a>,
}

impl<'a> Deriver<'a> {
    pub fn new(lts: &'a Lts, flavor: Flavor) -> Self {
        let n = lts.num_states();
        let roots = (0..n).flat_map(|x| (x..n).map(move |y| Goal { flavor, q: StateId(x), p: StateId(y) }));
        let mut searcher = Searcher::explore(lts, flavor, roots);
        let max = searcher.keys.len() + 1;
        searcher.settle(None, max);
        Deriver { flavor, searcher }
    }

    /// Height of a shortest derivation of `q ⊥ p`.
    pub fn height(&self, q: StateId, p: StateId) -> Option<usize> {
        let h = self.searcher.height[self.searcher.index[&key(Goal { flavor: self.flavor, q, p })]];
        (h != UNSETTLED).then_some(h)
    }

    /// Same result as [`derive`].
    pub fn derive(&mut self, q: StateId, p: StateId) -> Option<Derivation> {
        self.height(q, p)?;
        Some(self.searcher.build(Goal { flavor: self.flavor, q, p }))
    }
}
