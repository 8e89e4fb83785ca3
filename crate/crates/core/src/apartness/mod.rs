//! Least apartness relations, derivation certificates and their checker.
//!
//! Each [`Flavor`] fixes a set of derivation rules. The apartness relation
//! of a flavor is the least symmetric relation closed under those rules;
//! [`least_apartness`] computes it by saturation from the empty relation,
//! [`derive`] searches for a shortest derivation of a single judgement and
//! [`verify`] re-checks a derivation against the system.

mod derivation;
mod rules;
mod saturate;
mod search;
mod verify;

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

pub use derivation::{Derivation, Obligation, RangeItem, Resolution, Step};
pub use rules::Mutation;
pub use saturate::{least_apartness, least_apartness_levels, Saturation};
pub use search::{derive, derive_with, Deriver, SearchLimits};
pub use verify::{verify, verify_detailed, VerifyError};

use crate::lts::{Label, Lts, StateId};
use crate::relation::PairRelation;

/// Which apartness is being computed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Weak,
    Branching,
    SemiBranching,
    /// Branching rules plus the root rule, whose premises are branching
    /// apartness judgements.
    RootedBranching,
    /// Branching with the visible-step rule replaced by its variant that
    /// compares `p` against the intermediate state instead of `q`.
    BranchingAltA,
    /// Branching rules that only demand the `q ⊥ p'` disjunct for targets
    /// branching bisimilar to `q'`.
    BranchingCombined,
}

impl Flavor {
    pub const ALL: [Flavor; 6] = [
        Flavor::Weak,
        Flavor::Branching,
        Flavor::SemiBranching,
        Flavor::RootedBranching,
        Flavor::BranchingAltA,
        Flavor::BranchingCombined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Weak => "weak",
            Flavor::Branching => "branching",
            Flavor::SemiBranching => "semi-branching",
            Flavor::RootedBranching => "rooted-branching",
            Flavor::BranchingAltA => "branching-alt",
            Flavor::BranchingCombined => "branching-combined",
        }
    }

    /// Short subscript used when printing judgements, e.g. `⊥b`.
    pub fn symbol(self) -> &'static str {
        match self {
            Flavor::Weak => "⊥w",
            Flavor::Branching => "⊥b",
            Flavor::SemiBranching => "⊥sb",
            Flavor::RootedBranching => "⊥rb",
            Flavor::BranchingAltA => "⊥bA",
            Flavor::BranchingCombined => "⊥b↔",
        }
    }

    /// The flavor whose completed relation this one consults, if any.
    pub fn base(self) -> Option<Flavor> {
        match self {
            Flavor::RootedBranching | Flavor::BranchingCombined => Some(Flavor::Branching),
            _ => None,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .or(match s {
                "w" => Some(Flavor::Weak),
                "b" => Some(Flavor::Branching),
                "sb" | "semi" => Some(Flavor::SemiBranching),
                "rb" | "rooted" => Some(Flavor::RootedBranching),
                _ => None,
            })
            .ok_or_else(|| alloc::format!("unknown flavor `{s}`"))
    }
}

/// The rule applied at a derivation node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTag {
    Symm,
    InWTau,
    InWAct(Label),
    InBTau,
    InBAct(Label),
    InSbTau,
    InRb(Label),
    InBAltA(Label),
    InBTauCombined,
    InBActCombined(Label),
}

impl RuleTag {
    pub fn name(&self) -> &'static str {
        match self {
            RuleTag::Symm => "symm",
            RuleTag::InWTau => "in_wtau",
            RuleTag::InWAct(_) => "in_w",
            RuleTag::InBTau => "in_btau",
            RuleTag::InBAct(_) => "in_b",
            RuleTag::InSbTau => "in_sbtau",
            RuleTag::InRb(_) => "in_rb",
            RuleTag::InBAltA(_) => "in_b_alt",
            RuleTag::InBTauCombined => "in_btau_bisim",
            RuleTag::InBActCombined(_) => "in_b_bisim",
        }
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            RuleTag::InWAct(l) | RuleTag::InBAct(l) | RuleTag::InRb(l) | RuleTag::InBAltA(l) | RuleTag::InBActCombined(l) => {
                Some(l)
            }
            _ => None,
        }
    }

    /// Rebuilds a tag from its name and the label of the chosen step.
    pub fn from_parts(name: &str, step_label: Option<&Label>) -> Option<RuleTag> {
        let label = || step_label.cloned();
        Some(match name {
            "symm" => RuleTag::Symm,
            "in_wtau" => RuleTag::InWTau,
            "in_btau" => RuleTag::InBTau,
            "in_sbtau" => RuleTag::InSbTau,
            "in_btau_bisim" => RuleTag::InBTauCombined,
            "in_w" => RuleTag::InWAct(label()?),
            "in_b" => RuleTag::InBAct(label()?),
            "in_rb" => RuleTag::InRb(label()?),
            "in_b_alt" => RuleTag::InBAltA(label()?),
            "in_b_bisim" => RuleTag::InBActCombined(label()?),
            _ => return None,
        })
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "{}({})", self.name(), l),
            None => f.write_str(self.name()),
        }
    }
}

/// Answer for one state pair.
#[derive(Clone, Debug)]
pub enum Verdict {
    Apart(Derivation),
    /// The witness is the complement of the least apartness: a bisimulation
    /// of the matching flavor that relates the pair.
    Equivalent(PairRelation),
}

impl Verdict {
    pub fn is_apart(&self) -> bool {
        matches!(self, Verdict::Apart(_))
    }
}

/// Decides `q` against `p` and produces the certificate or the witness.
pub fn check_pair(lts: &Lts, flavor: Flavor, q: StateId, p: StateId) -> Verdict {
    let apart = least_apartness(lts, flavor);
    if apart.contains(q, p) {
        let d = derive(lts, flavor, q, p).expect("member of the least apartness has a derivation");
        Verdict::Apart(d)
    } else {
        Verdict::Equivalent(apartness_to_bisimilarity(&apart))
    }
}

/// Complement of an apartness relation.
pub fn apartness_to_bisimilarity(r: &PairRelation) -> PairRelation {
    r.complement()
}
