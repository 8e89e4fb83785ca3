//! Coalgebras of polynomial shapes on finite carriers.
//!
//! A [`Ty`] describes a functor; a [`FiniteCoalgebra`] assigns each state a
//! value of that shape. Bisimulation and apartness are obtained by lifting
//! a relation on states along the shape ([`lift_bisim`], [`lift_apart`])
//! and taking the greatest, respectively least, fixpoint.

mod adapters;
mod fixpoint;
mod lifting;
mod ty;

pub use adapters::{
    dfa_coalgebra, dfa_distinguishing_word, dfa_output, lts_as_coalgebra, stream_coalgebra, stream_distinguisher,
    stream_unfold, DFA_SHAPE, STREAM_SHAPE,
};
pub use fixpoint::{
    apartness_levels, generic_derivation, greatest_bisimulation, least_apartness_gen, verify_generic, Evidence,
    GenDerivation, GenSaturation,
};
pub use lifting::{lift_apart, lift_bisim, ShapeMismatch};
pub use ty::{shape_check, AtomDomains, CoalgebraError, FValue, FiniteCoalgebra, Ty};
