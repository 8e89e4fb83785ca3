use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::lifting::{lift_apart, lift_bisim};
use super::ty::{FValue, FiniteCoalgebra, Ty};
use crate::lts::StateId;
use crate::relation::PairRelation;

/// Largest `R` with `R(x, y) ⟹ c(x) ≈ c(y)` under the lifting of `R`.
pub fn greatest_bisimulation(c: &FiniteCoalgebra) -> PairRelation {
    let n = c.carrier_size;
    let mut r = PairRelation::total(n);
    loop {
        let doomed: Vec<_> = r
            .pairs()
            .filter(|&(x, y)| !lift_bisim(&c.shape, &r, c.at(x), c.at(y)).expect("validated coalgebra"))
            .collect();
        if doomed.is_empty() {
            return r;
        }
        for (x, y) in doomed {
            r.remove(x, y);
        }
    }
}

/// Least apartness with the round in which each pair was added.
#[derive(Clone, Debug)]
pub struct GenSaturation {
    pub relation: PairRelation,
    levels: Vec<u32>,
}

impl GenSaturation {
    pub fn level(&self, x: StateId, y: StateId) -> Option<u32> {
        let l = self.levels[x.0 * self.relation.size() + y.0];
        (l != 0).then_some(l)
    }
}

pub fn apartness_levels(c: &FiniteCoalgebra) -> GenSaturation {
    let n = c.carrier_size;
    let mut q = PairRelation::empty(n);
    let mut levels = vec![0u32; n * n];
    let mut round = 0;
    loop {
        let fresh: Vec<_> = (0..n)
            .flat_map(|x| (x..n).map(move |y| (StateId(x), StateId(y))))
            .filter(|&(x, y)| !q.contains(x, y) && lift_apart(&c.shape, &q, c.at(x), c.at(y)).expect("validated coalgebra"))
            .collect();
        if fresh.is_empty() {
            return GenSaturation { relation: q, levels };
        }
        round += 1;
        for (x, y) in fresh {
            q.insert(x, y);
            levels[x.0 * n + y.0] = round;
            levels[y.0 * n + x.0] = round;
        }
    }
}

/// Least `Q` with `c(x) ⊥ c(y)` under the lifting of `Q` implying `Q(x, y)`.
pub fn least_apartness_gen(c: &FiniteCoalgebra) -> PairRelation {
    apartness_levels(c).relation
}

/// Why two values are apart under the lifting, following the shape.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Evidence {
    AtomNeq,
    /// The states at this position are apart, by the nested derivation.
    Var(Box<GenDerivation>),
    TagMismatch,
    Inl(Box<Evidence>),
    Inr(Box<Evidence>),
    ProdFirst(Box<Evidence>),
    ProdSecond(Box<Evidence>),
    At { point: alloc::string::String, ev: Box<Evidence> },
    /// `witness` from the left set is apart from every element of the right.
    PowLeft { witness: FValue, against: Vec<(FValue, Evidence)> },
    /// `witness` from the right set is apart from every element of the left.
    PowRight { witness: FValue, against: Vec<(FValue, Evidence)> },
}

/// A derivation of `x ⊥ y` for a coalgebra: evidence that `c(x)` and
/// `c(y)` are apart, whose `Var` leaves are again derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenDerivation {
    pub conclusion: (StateId, StateId),
    pub evidence: Evidence,
}

impl GenDerivation {
    /// One plus the deepest nested derivation.
    pub fn depth(&self) -> usize {
        1 + self.evidence.nested_depth()
    }
}

impl Evidence {
    fn nested_depth(&self) -> usize {
        match self {
            Evidence::AtomNeq | Evidence::TagMismatch => 0,
            Evidence::Var(d) => d.depth(),
            Evidence::Inl(e) | Evidence::Inr(e) | Evidence::ProdFirst(e) | Evidence::ProdSecond(e) => e.nested_depth(),
            Evidence::At { ev, .. } => ev.nested_depth(),
            Evidence::PowLeft { against, .. } | Evidence::PowRight { against, .. } => {
                against.iter().map(|(_, e)| e.nested_depth()).max().unwrap_or(0)
            }
        }
    }
}

struct Explainer<'a> {
    c: &'a FiniteCoalgebra,
    sat: &'a GenSaturation,
}

impl Explainer<'_> {
    fn derivation(&self, x: StateId, y: StateId) -> GenDerivation {
        let bound = self.sat.level(x, y).expect("pair is apart");
        let evidence = self.explain(&self.c.shape, self.c.at(x), self.c.at(y), bound).expect("levels are consistent");
        GenDerivation { conclusion: (x, y), evidence }
    }

    /// Evidence that only uses pairs added before round `bound`.
    fn explain(&self, ty: &Ty, u: &FValue, v: &FValue, bound: u32) -> Option<Evidence> {
        match (ty, u, v) {
            (Ty::Atom(_), _, _) => (u != v).then_some(Evidence::AtomNeq),
            (Ty::Var, FValue::StateRef(a), FValue::StateRef(b)) => match self.sat.level(*a, *b) {
                Some(l) if l < bound => Some(Evidence::Var(Box::new(self.derivation(*a, *b)))),
                _ => None,
            },
            (Ty::Sum(t, _), FValue::Inl(x), FValue::Inl(y)) => self.explain(t, x, y, bound).map(|e| Evidence::Inl(Box::new(e))),
            (Ty::Sum(_, t), FValue::Inr(x), FValue::Inr(y)) => self.explain(t, x, y, bound).map(|e| Evidence::Inr(Box::new(e))),
            (Ty::Sum(..), _, _) => Some(Evidence::TagMismatch),
            (Ty::Prod(a, b), FValue::PairVal(x1, x2), FValue::PairVal(y1, y2)) => self
                .explain(a, x1, y1, bound)
                .map(|e| Evidence::ProdFirst(Box::new(e)))
                .or_else(|| self.explain(b, x2, y2, bound).map(|e| Evidence::ProdSecond(Box::new(e)))),
            (Ty::FunFromAtom(_, t), FValue::FuncVal(f), FValue::FuncVal(g)) => f.iter().find_map(|(k, x)| {
                self.explain(t, x, &g[k], bound).map(|e| Evidence::At { point: k.clone(), ev: Box::new(e) })
            }),
            (Ty::FinPow(t), FValue::SetVal(us), FValue::SetVal(vs)) => {
                let left = us.iter().find_map(|x| {
                    let against: Option<Vec<_>> = vs.iter().map(|y| self.explain(t, x, y, bound).map(|e| (y.clone(), e))).collect();
                    against.map(|against| Evidence::PowLeft { witness: x.clone(), against })
                });
                left.or_else(|| {
                    vs.iter().find_map(|y| {
                        let against: Option<Vec<_>> =
                            us.iter().map(|x| self.explain(t, x, y, bound).map(|e| (x.clone(), e))).collect();
                        against.map(|against| Evidence::PowRight { witness: y.clone(), against })
                    })
                })
            }
            _ => None,
        }
    }
}

/// A shortest derivation of `x ⊥ y`, or `None` when they are bisimilar.
pub fn generic_derivation(c: &FiniteCoalgebra, x: StateId, y: StateId) -> Option<GenDerivation> {
    let sat = apartness_levels(c);
    sat.level(x, y)?;
    Some(Explainer { c, sat: &sat }.derivation(x, y))
}

/// Checks a derivation against the structure map.
pub fn verify_generic(c: &FiniteCoalgebra, d: &GenDerivation) -> bool {
    let (x, y) = d.conclusion;
    x.0 < c.carrier_size && y.0 < c.carrier_size && check(c, &c.shape, c.at(x), c.at(y), &d.evidence)
}

fn check(c: &FiniteCoalgebra, ty: &Ty, u: &FValue, v: &FValue, ev: &Evidence) -> bool {
    match (ty, u, v, ev) {
        (Ty::Atom(_), FValue::AtomElem { .. }, FValue::AtomElem { .. }, Evidence::AtomNeq) => u != v,
        (Ty::Var, FValue::StateRef(a), FValue::StateRef(b), Evidence::Var(d)) => d.conclusion == (*a, *b) && verify_generic(c, d),
        (Ty::Sum(..), FValue::Inl(_), FValue::Inr(_), Evidence::TagMismatch)
        | (Ty::Sum(..), FValue::Inr(_), FValue::Inl(_), Evidence::TagMismatch) => true,
        (Ty::Sum(t, _), FValue::Inl(x), FValue::Inl(y), Evidence::Inl(e)) => check(c, t, x, y, e),
        (Ty::Sum(_, t), FValue::Inr(x), FValue::Inr(y), Evidence::Inr(e)) => check(c, t, x, y, e),
        (Ty::Prod(a, _), FValue::PairVal(x, _), FValue::PairVal(y, _), Evidence::ProdFirst(e)) => check(c, a, x, y, e),
        (Ty::Prod(_, b), FValue::PairVal(_, x), FValue::PairVal(_, y), Evidence::ProdSecond(e)) => check(c, b, x, y, e),
        (Ty::FunFromAtom(_, t), FValue::FuncVal(f), FValue::FuncVal(g), Evidence::At { point, ev }) => {
            match (f.get(point), g.get(point)) {
                (Some(x), Some(y)) => check(c, t, x, y, ev),
                _ => false,
            }
        }
        (Ty::FinPow(t), FValue::SetVal(us), FValue::SetVal(vs), Evidence::PowLeft { witness, against }) => {
            us.contains(witness)
                && against.len() == vs.len()
                && against.iter().zip(vs).all(|((y, e), v)| y == v && check(c, t, witness, y, e))
        }
        (Ty::FinPow(t), FValue::SetVal(us), FValue::SetVal(vs), Evidence::PowRight { witness, against }) => {
            vs.contains(witness)
                && against.len() == us.len()
                && against.iter().zip(us).all(|((x, e), u)| x == u && check(c, t, x, witness, e))
        }
        _ => false,
    }
}
