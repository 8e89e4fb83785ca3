use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::rules::{Disjunct, Goal, Mutation, Rules};
use super::{Derivation, Flavor, Obligation, Resolution, RuleTag};
use crate::bisim::{greatest_bisimilarity, BisimFlavor};
use crate::lts::Lts;

/// A defect found in a certificate. `path` locates the node, e.g.
/// `root/extra/ob[2].left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Checker<'a> {
    lts: &'a Lts,
    rules: Vec<Rules<'a>>,
    errors: Vec<VerifyError>,
}

impl Checker<'_> {
    fn err(&mut self, path: &str, message: String) {
        self.errors.push(VerifyError { path: path.into(), message });
    }

    fn expect_conclusion(&mut self, d: &Derivation, g: Goal, path: &str) -> bool {
        if d.conclusion != (g.q, g.p) {
            let (a, b) = d.conclusion;
            self.err(path, format!("concludes ({a}, {b}) but ({}, {}) is required", g.q, g.p));
            return false;
        }
        true
    }

    fn check(&mut self, d: &Derivation, flavor: Flavor, path: &str) {
        let n = self.lts.num_states();
        let (q, p) = d.conclusion;
        if q.0 >= n || p.0 >= n {
            self.err(path, format!("conclusion ({q}, {p}) names a missing state"));
            return;
        }
        if d.rule == RuleTag::Symm {
            if d.step.is_some() || !d.obligations.is_empty() {
                self.err(path, "symm takes no step and no range".into());
            }
            match &d.extra {
                None => self.err(path, "symm without premise".into()),
                Some(e) => {
                    let sub = format!("{path}/symm");
                    if self.expect_conclusion(e, Goal { flavor, q: p, p: q }, &sub) {
                        self.check(e, flavor, &sub);
                    }
                }
            }
            return;
        }
        let Some(step) = &d.step else {
            self.err(path, format!("{} needs a step", d.rule));
            return;
        };
        let rules = self.rules.iter().find(|r| r.flavor() == flavor).expect("flavor has rules");
        let Some(label) = self.lts.label_id(&step.label) else {
            self.err(path, format!("label {} does not occur", step.label));
            return;
        };
        let inst = rules.instances(q, p).into_iter().find(|i| i.rule == d.rule && i.to == step.to && i.label == label);
        let Some(inst) = inst else {
            self.err(path, format!("{} with step -{}-> {} is not a {} rule instance here", d.rule, step.label, step.to, flavor));
            return;
        };

        match (&inst.extra, &d.extra) {
            (None, None) => {}
            (Some(g), Some(e)) => {
                let sub = format!("{path}/extra");
                if self.expect_conclusion(e, *g, &sub) {
                    self.check(e, g.flavor, &sub);
                }
            }
            (Some(g), None) => self.err(path, format!("missing premise ({}, {})", g.q, g.p)),
            (None, Some(_)) => self.err(path, "unexpected extra premise".into()),
        }

        if inst.cases.is_empty() {
            if d.obligations != [Obligation::Vacuous] {
                self.err(path, "range is empty, expected a single vacuous obligation".into());
            }
            return;
        }
        if d.obligations.len() != inst.cases.len() {
            self.err(path, format!("range has {} elements, certificate lists {}", inst.cases.len(), d.obligations.len()));
            return;
        }
        for (i, (case, ob)) in inst.cases.iter().zip(&d.obligations).enumerate() {
            let here = format!("{path}/ob[{i}]");
            let Obligation::Covered { item, via } = ob else {
                self.err(&here, "vacuous obligation for a non-empty range".into());
                continue;
            };
            if *item != case.item {
                self.err(&here, format!("range element {:?} expected, found {:?}", case.item, item));
                continue;
            }
            let chosen = case.options.iter().find(|o| match (o, via) {
                (Disjunct::Left(g), Resolution::Left(a)) | (Disjunct::Right(g), Resolution::Right(a)) => a.conclusion == (g.q, g.p),
                (Disjunct::Both(g, h), Resolution::Both(a, b)) => a.conclusion == (g.q, g.p) && b.conclusion == (h.q, h.p),
                _ => false,
            });
            let Some(chosen) = chosen.cloned() else {
                self.err(&here, format!("{} disjunct does not match any premise of the rule", via.tag()));
                continue;
            };
            for (j, (g, sub)) in chosen.goals().zip(via.subderivations()).enumerate() {
                self.check(sub, g.flavor, &format!("{here}.{}{}", via.tag(), if j > 0 { "2" } else { "" }));
            }
        }
    }
}

/// Every defect of `d` as a certificate of its conclusion in `lts`.
pub fn verify_detailed(lts: &Lts, flavor: Flavor, d: &Derivation) -> Vec<VerifyError> {
    let bisim = match flavor {
        Flavor::BranchingCombined => Some(greatest_bisimilarity(lts, BisimFlavor::Branching)),
        _ => None,
    };
    let mut rules = alloc::vec![Rules::new(lts, flavor, bisim, Mutation::None)];
    if let Some(b) = flavor.base() {
        rules.push(Rules::new(lts, b, None, Mutation::None));
    }
    let mut c = Checker { lts, rules, errors: Vec::new() };
    c.check(d, flavor, "root");
    c.errors
}

pub fn verify(lts: &Lts, flavor: Flavor, d: &Derivation) -> bool {
    verify_detailed(lts, flavor, d).is_empty()
}
