use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lts::StateId;

/// Polynomial shapes built from atoms, the state variable, unit, sums,
/// products, exponents by an atom and finite powerset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Ty {
    Atom(String),
    Var,
    Unit,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    FunFromAtom(String, Box<Ty>),
    FinPow(Box<Ty>),
}

impl Ty {
    pub fn atom(name: impl Into<String>) -> Ty {
        Ty::Atom(name.into())
    }

    pub fn sum(a: Ty, b: Ty) -> Ty {
        Ty::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    pub fn fun(atom: impl Into<String>, body: Ty) -> Ty {
        Ty::FunFromAtom(atom.into(), Box::new(body))
    }

    pub fn pow(body: Ty) -> Ty {
        Ty::FinPow(Box::new(body))
    }

    /// Nesting depth; atoms, `Var` and `Unit` have depth zero.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Atom(_) | Ty::Var | Ty::Unit => 0,
            Ty::Sum(a, b) | Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
            Ty::FunFromAtom(_, t) | Ty::FinPow(t) => 1 + t.depth(),
        }
    }

    /// Atom names mentioned anywhere in the shape.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Ty::Atom(a) => {
                out.insert(a);
            }
            Ty::Var | Ty::Unit => {}
            Ty::Sum(a, b) | Ty::Prod(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Ty::FunFromAtom(a, t) => {
                out.insert(a);
                t.collect_atoms(out);
            }
            Ty::FinPow(t) => t.collect_atoms(out),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Atom(a) => f.write_str(a),
            Ty::Var => f.write_str("X"),
            Ty::Unit => f.write_str("1"),
            Ty::Sum(a, b) => write!(f, "({a} + {b})"),
            Ty::Prod(a, b) => write!(f, "({a} × {b})"),
            Ty::FunFromAtom(a, t) => write!(f, "{t}^{a}"),
            Ty::FinPow(t) => write!(f, "P({t})"),
        }
    }
}

/// Finite, ordered element lists for each atom name.
pub type AtomDomains = BTreeMap<String, Vec<String>>;

/// An element of `F(carrier)` for some shape `F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FValue {
    AtomElem { domain: String, element: String },
    StateRef(StateId),
    UnitVal,
    Inl(Box<FValue>),
    Inr(Box<FValue>),
    PairVal(Box<FValue>, Box<FValue>),
    FuncVal(BTreeMap<String, FValue>),
    SetVal(BTreeSet<FValue>),
}

impl FValue {
    pub fn elem(domain: impl Into<String>, element: impl Into<String>) -> FValue {
        FValue::AtomElem { domain: domain.into(), element: element.into() }
    }

    pub fn state(i: usize) -> FValue {
        FValue::StateRef(StateId(i))
    }

    pub fn pair(a: FValue, b: FValue) -> FValue {
        FValue::PairVal(Box::new(a), Box::new(b))
    }

    pub fn inl(a: FValue) -> FValue {
        FValue::Inl(Box::new(a))
    }

    pub fn inr(a: FValue) -> FValue {
        FValue::Inr(Box::new(a))
    }
}

/// Whether `v` is an element of `ty` over a carrier of `n` states.
pub fn shape_check(ty: &Ty, atoms: &AtomDomains, n: usize, v: &FValue) -> bool {
    match (ty, v) {
        (Ty::Atom(a), FValue::AtomElem { domain, element }) => {
            domain == a && atoms.get(a).is_some_and(|d| d.contains(element))
        }
        (Ty::Var, FValue::StateRef(s)) => s.0 < n,
        (Ty::Unit, FValue::UnitVal) => true,
        (Ty::Sum(a, _), FValue::Inl(x)) => shape_check(a, atoms, n, x),
        (Ty::Sum(_, b), FValue::Inr(x)) => shape_check(b, atoms, n, x),
        (Ty::Prod(a, b), FValue::PairVal(x, y)) => shape_check(a, atoms, n, x) && shape_check(b, atoms, n, y),
        (Ty::FunFromAtom(a, t), FValue::FuncVal(m)) => match atoms.get(a) {
            Some(dom) => m.len() == dom.len() && dom.iter().all(|e| m.get(e).is_some_and(|x| shape_check(t, atoms, n, x))),
            None => false,
        },
        (Ty::FinPow(t), FValue::SetVal(s)) => s.iter().all(|x| shape_check(t, atoms, n, x)),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoalgebraError {
    UnknownAtom(String),
    EmptyAtom(String),
    DuplicateElement { atom: String, element: String },
    /// The structure table does not have one entry per carrier element.
    CarrierMismatch { carrier: usize, entries: usize },
    IllShaped { state: usize },
    /// An operation needed a specific shape.
    WrongShape { expected: &'static str },
}

impl fmt::Display for CoalgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoalgebraError::UnknownAtom(a) => write!(f, "atom `{a}` has no domain"),
            CoalgebraError::EmptyAtom(a) => write!(f, "atom `{a}` has an empty domain"),
            CoalgebraError::DuplicateElement { atom, element } => write!(f, "atom `{atom}` lists `{element}` twice"),
            CoalgebraError::CarrierMismatch { carrier, entries } => {
                write!(f, "carrier has {carrier} elements but the structure has {entries} entries")
            }
            CoalgebraError::IllShaped { state } => write!(f, "structure of state {state} does not fit the shape"),
            CoalgebraError::WrongShape { expected } => write!(f, "expected a coalgebra of shape {expected}"),
        }
    }
}

impl core::error::Error for CoalgebraError {}

/// A coalgebra `carrier → shape(carrier)` on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiniteCoalgebra {
    pub carrier_size: usize,
    pub shape: Ty,
    pub atoms: AtomDomains,
    pub structure: Vec<FValue>,
}

impl FiniteCoalgebra {
    pub fn new(shape: Ty, atoms: AtomDomains, structure: Vec<FValue>) -> Result<Self, CoalgebraError> {
        let c = FiniteCoalgebra { carrier_size: structure.len(), shape, atoms, structure };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CoalgebraError> {
        for a in self.shape.atoms() {
            let dom = self.atoms.get(a).ok_or_else(|| CoalgebraError::UnknownAtom(a.into()))?;
            if dom.is_empty() {
                return Err(CoalgebraError::EmptyAtom(a.into()));
            }
            let mut seen = BTreeSet::new();
            for e in dom {
                if !seen.insert(e) {
                    return Err(CoalgebraError::DuplicateElement { atom: a.into(), element: e.clone() });
                }
            }
        }
        if self.structure.len() != self.carrier_size {
            return Err(CoalgebraError::CarrierMismatch { carrier: self.carrier_size, entries: self.structure.len() });
        }
        for (i, v) in self.structure.iter().enumerate() {
            if !shape_check(&self.shape, &self.atoms, self.carrier_size, v) {
                return Err(CoalgebraError::IllShaped { state: i });
            }
        }
        Ok(())
    }

    pub fn at(&self, s: StateId) -> &FValue {
        &self.structure[s.0]
    }
}
