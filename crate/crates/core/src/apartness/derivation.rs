use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::RuleTag;
use crate::lts::{Label, Lts, StateId};

/// The transition `q -label-> to` chosen at a rule node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub to: StateId,
    pub label: Label,
}

/// A finite derivation tree concluding `conclusion.0 ⊥ conclusion.1`.
///
/// `extra` holds the single premise of `symm` and the `q' ⊥ p` premise of
/// the branching τ rules. `obligations` lists one entry per element of the
/// universally quantified range, in the order the rules enumerate it, or a
/// single [`Obligation::Vacuous`] when the range is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: (StateId, StateId),
    pub rule: RuleTag,
    pub step: Option<Step>,
    pub extra: Option<Box<Derivation>>,
    pub obligations: Vec<Obligation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obligation {
    Vacuous,
    Covered { item: RangeItem, via: Resolution },
}

/// An element of a rule's range: a stepped pair `(p', p'')` or a single
/// successor state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RangeItem {
    Pair(StateId, StateId),
    State(StateId),
}

/// Which disjunct of a range obligation is established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Left(Derivation),
    Right(Derivation),
    Both(Derivation, Derivation),
}

impl Resolution {
    pub fn subderivations(&self) -> Vec<&Derivation> {
        match self {
            Resolution::Left(d) | Resolution::Right(d) => alloc::vec![d],
            Resolution::Both(a, b) => alloc::vec![a, b],
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Resolution::Left(_) => "left",
            Resolution::Right(_) => "right",
            Resolution::Both(..) => "both",
        }
    }
}

impl Derivation {
    /// Tree height. A vacuous obligation is a leaf of height one and `symm`
    /// nodes are transparent, so `depth(symm(d)) == depth(d)`.
    pub fn depth(&self) -> usize {
        if self.rule == RuleTag::Symm {
            return self.extra.as_ref().map_or(0, |d| d.depth());
        }
        let mut child = 0;
        if let Some(e) = &self.extra {
            child = child.max(e.depth());
        }
        for ob in &self.obligations {
            let h = match ob {
                Obligation::Vacuous => 1,
                Obligation::Covered { via, .. } => via.subderivations().iter().map(|d| d.depth()).max().unwrap_or(0),
            };
            child = child.max(h);
        }
        1 + child
    }

    /// Number of rule nodes, `symm` included.
    pub fn size(&self) -> usize {
        let mut n = 1 + self.extra.as_ref().map_or(0, |d| d.size());
        for ob in &self.obligations {
            if let Obligation::Covered { via, .. } = ob {
                n += via.subderivations().iter().map(|d| d.size()).sum::<usize>();
            }
        }
        n
    }

    /// Indented text rendering that uses the state names of `lts`.
    pub fn render(&self, lts: &Lts) -> String {
        let mut out = String::new();
        self.render_into(lts, 0, &mut out);
        out
    }

    fn render_into(&self, lts: &Lts, indent: usize, out: &mut String) {
        let pad = |out: &mut String, k: usize| {
            for _ in 0..k {
                out.push_str("  ");
            }
        };
        let (q, p) = self.conclusion;
        pad(out, indent);
        let _ = write!(out, "{} ⊥ {}  by {}", lts.state_name(q), lts.state_name(p), self.rule);
        if let Some(st) = &self.step {
            let _ = write!(out, "  [{} -{}-> {}]", lts.state_name(q), st.label, lts.state_name(st.to));
        }
        out.push('\n');
        if let Some(e) = &self.extra {
            e.render_into(lts, indent + 1, out);
        }
        for ob in &self.obligations {
            match ob {
                Obligation::Vacuous => {
                    pad(out, indent + 1);
                    out.push_str("(no matching steps)\n");
                }
                Obligation::Covered { item, via } => {
                    pad(out, indent + 1);
                    match item {
                        RangeItem::Pair(a, b) => {
                            let _ = write!(out, "for ({}, {}): {}", lts.state_name(*a), lts.state_name(*b), via.tag());
                        }
                        RangeItem::State(a) => {
                            let _ = write!(out, "for {}: {}", lts.state_name(*a), via.tag());
                        }
                    }
                    out.push('\n');
                    for d in via.subderivations() {
                        d.render_into(lts, indent + 2, out);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(q: usize, p: usize) -> Derivation {
        Derivation {
            conclusion: (StateId(q), StateId(p)),
            rule: RuleTag::InBAct(Label::action("a")),
            step: Some(Step { to: StateId(9), label: Label::action("a") }),
            extra: None,
            obligations: alloc::vec![Obligation::Vacuous],
        }
    }

    #[test]
    fn depth_counts_vacuous_and_skips_symm() {
        let l = leaf(0, 1);
        assert_eq!(l.depth(), 2);
        let s = Derivation {
            conclusion: (StateId(1), StateId(0)),
            rule: RuleTag::Symm,
            step: None,
            extra: Some(Box::new(l.clone())),
            obligations: Vec::new(),
        };
        assert_eq!(s.depth(), 2);
        assert_eq!(s.size(), 2);
        let top = Derivation {
            conclusion: (StateId(2), StateId(3)),
            rule: RuleTag::InBAct(Label::action("b")),
            step: Some(Step { to: StateId(0), label: Label::action("b") }),
            extra: None,
            obligations: alloc::vec![Obligation::Covered {
                item: RangeItem::Pair(StateId(3), StateId(1)),
                via: Resolution::Right(l),
            }],
        };
        assert_eq!(top.depth(), 3);
    }
}
