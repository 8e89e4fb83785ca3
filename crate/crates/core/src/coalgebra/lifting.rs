use super::ty::{FValue, Ty};
use crate::relation::PairRelation;

/// The values do not both inhabit the shape.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ShapeMismatch;

impl core::fmt::Display for ShapeMismatch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("value does not fit the shape")
    }
}

impl core::error::Error for ShapeMismatch {}

/// `u` and `v` are related by the lifting of `rel` along `ty`.
pub fn lift_bisim(ty: &Ty, rel: &PairRelation, u: &FValue, v: &FValue) -> Result<bool, ShapeMismatch> {
    Ok(match (ty, u, v) {
        (Ty::Atom(_), FValue::AtomElem { .. }, FValue::AtomElem { .. }) => u == v,
        (Ty::Var, FValue::StateRef(x), FValue::StateRef(y)) => rel.contains(*x, *y),
        (Ty::Unit, FValue::UnitVal, FValue::UnitVal) => true,
        (Ty::Sum(a, _), FValue::Inl(x), FValue::Inl(y)) => lift_bisim(a, rel, x, y)?,
        (Ty::Sum(_, b), FValue::Inr(x), FValue::Inr(y)) => lift_bisim(b, rel, x, y)?,
        (Ty::Sum(..), FValue::Inl(_) | FValue::Inr(_), FValue::Inl(_) | FValue::Inr(_)) => false,
        (Ty::Prod(a, b), FValue::PairVal(x1, x2), FValue::PairVal(y1, y2)) => {
            let first = lift_bisim(a, rel, x1, y1)?;
            let second = lift_bisim(b, rel, x2, y2)?;
            first && second
        }
        (Ty::FunFromAtom(_, t), FValue::FuncVal(f), FValue::FuncVal(g)) => {
            if f.len() != g.len() {
                return Err(ShapeMismatch);
            }
            let mut all = true;
            for (k, x) in f {
                let y = g.get(k).ok_or(ShapeMismatch)?;
                all &= lift_bisim(t, rel, x, y)?;
            }
            all
        }
        (Ty::FinPow(t), FValue::SetVal(us), FValue::SetVal(vs)) => {
            let mut forth = true;
            for x in us {
                let mut any = false;
                for y in vs {
                    any |= lift_bisim(t, rel, x, y)?;
                }
                forth &= any;
            }
            let mut back = true;
            for y in vs {
                let mut any = false;
                for x in us {
                    any |= lift_bisim(t, rel, x, y)?;
                }
                back &= any;
            }
            forth && back
        }
        _ => return Err(ShapeMismatch),
    })
}

/// `u` and `v` are apart under the lifting of `rel` along `ty`.
///
/// Written clause by clause rather than as `!lift_bisim(complement)` so the
/// two can be tested against each other.
pub fn lift_apart(ty: &Ty, rel: &PairRelation, u: &FValue, v: &FValue) -> Result<bool, ShapeMismatch> {
    Ok(match (ty, u, v) {
        (Ty::Atom(_), FValue::AtomElem { .. }, FValue::AtomElem { .. }) => u != v,
        (Ty::Var, FValue::StateRef(x), FValue::StateRef(y)) => rel.contains(*x, *y),
        (Ty::Unit, FValue::UnitVal, FValue::UnitVal) => false,
        (Ty::Sum(a, _), FValue::Inl(x), FValue::Inl(y)) => lift_apart(a, rel, x, y)?,
        (Ty::Sum(_, b), FValue::Inr(x), FValue::Inr(y)) => lift_apart(b, rel, x, y)?,
        (Ty::Sum(..), FValue::Inl(_) | FValue::Inr(_), FValue::Inl(_) | FValue::Inr(_)) => true,
        (Ty::Prod(a, b), FValue::PairVal(x1, x2), FValue::PairVal(y1, y2)) => {
            let first = lift_apart(a, rel, x1, y1)?;
            let second = lift_apart(b, rel, x2, y2)?;
            first || second
        }
        (Ty::FunFromAtom(_, t), FValue::FuncVal(f), FValue::FuncVal(g)) => {
            if f.len() != g.len() {
                return Err(ShapeMismatch);
            }
            let mut any = false;
            for (k, x) in f {
                let y = g.get(k).ok_or(ShapeMismatch)?;
                any |= lift_apart(t, rel, x, y)?;
            }
            any
        }
        (Ty::FinPow(t), FValue::SetVal(us), FValue::SetVal(vs)) => {
            let mut left = false;
            for x in us {
                let mut all = true;
                for y in vs {
                    all &= lift_apart(t, rel, x, y)?;
                }
                left |= all;
            }
            let mut right = false;
            for y in vs {
                let mut all = true;
                for x in us {
                    all &= lift_apart(t, rel, x, y)?;
                }
                right |= all;
            }
            left || right
        }
        _ => return Err(ShapeMismatch),
    })
}
