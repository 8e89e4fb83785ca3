//! Apartness and bisimulation for finite labelled transition systems.
//!
//! Two states are *apart* when a finite derivation tells them apart; they
//! are bisimilar exactly when they are not apart. This crate computes the
//! apartness relations for weak, branching, semi-branching and rooted
//! branching equivalence as least fixpoints of their derivation rules,
//! extracts shortest derivations as certificates, checks certificates, and
//! cross-checks everything against a greatest-fixpoint bisimulation oracle.
//!
//! The [`coalgebra`] module does the same for coalgebras of polynomial
//! functors (streams, deterministic automata, finite powerset shapes) via
//! relation lifting.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the random
//! generators and the command line live in the `apartness` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod apartness;
pub mod bisim;
pub mod coalgebra;
pub mod lts;
pub mod relation;

pub use apartness::{
    apartness_to_bisimilarity, check_pair, derive, derive_with, Deriver, least_apartness, verify,
    verify_detailed, Derivation, Flavor, Obligation, RangeItem, Resolution, RuleTag, SearchLimits,
    Step, Verdict,
};
pub use bisim::{gfp_equals_apartness_complement, greatest_bisimilarity, is_bisimulation, BisimFlavor};
pub use lts::{Label, LabelId, Lts, LtsError, StateId};
pub use relation::PairRelation;
