//! Finite labelled transition systems with a distinguished silent label.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A state of an [`Lts`], identified by its dense index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct StateId(pub usize);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for StateId {
    fn from(index: usize) -> Self {
        StateId(index)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A transition label: the silent step or a visible action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Action(String),
}

impl Label {
    pub fn action(name: impl Into<String>) -> Self {
        Label::Action(name.into())
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    /// The action name, or `None` for the silent step.
    pub fn name(&self) -> Option<&str> {
        match self {
            Label::Tau => None,
            Label::Action(name) => Some(name),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Action(name) => f.write_str(name),
        }
    }
}

/// Index into the label table of an [`Lts`]. Index 0 is always the silent
/// step; visible labels follow in lexicographic order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub const TAU: LabelId = LabelId(0);

    #[inline]
    pub fn is_tau(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LtsError {
    StateOutOfRange { state: usize, num_states: usize },
    InitialOutOfRange { state: usize, num_states: usize },
    EmptyLabel,
    NameCount { names: usize, num_states: usize },
}

impl fmt::Display for LtsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtsError::StateOutOfRange { state, num_states } => {
                write!(f, "state {state} out of range (system has {num_states} states)")
            }
            LtsError::InitialOutOfRange { state, num_states } => {
                write!(f, "initial state {state} out of range (system has {num_states} states)")
            }
            LtsError::EmptyLabel => f.write_str("empty action label"),
            LtsError::NameCount { names, num_states } => {
                write!(f, "{names} state names given for {num_states} states")
            }
        }
    }
}

impl core::error::Error for LtsError {}

/// An immutable finite LTS.
///
/// Transitions have set semantics and are kept sorted by
/// `(source, label, target)`. The reflexive transitive closure of the
/// silent step is computed once per state at construction.
#[derive(Clone, Debug)]
pub struct Lts {
    num_states: usize,
    initial: Option<StateId>,
    labels: Vec<Label>,
    transitions: Vec<(StateId, LabelId, StateId)>,
    out: Vec<Vec<(LabelId, StateId)>>,
    tau_closure: Vec<Vec<StateId>>,
    /// `stepped[p * labels.len() + u]` holds `stepped_pairs(p, u)`.
    stepped: Vec<Vec<(StateId, StateId)>>,
    names: Option<Vec<String>>,
}

impl PartialEq for Lts {
    fn eq(&self, other: &Self) -> bool {
        self.num_states == other.num_states
            && self.initial == other.initial
            && self.labelled_transitions().eq(other.labelled_transitions())
    }
}

impl Eq for Lts {}

impl Lts {
    /// Builds an LTS, deduplicating transitions.
    pub fn new<I>(num_states: usize, initial: Option<StateId>, transitions: I) -> Result<Self, LtsError>
    where
        I: IntoIterator<Item = (StateId, Label, StateId)>,
    {
        if let Some(init) = initial {
            if init.0 >= num_states {
                return Err(LtsError::InitialOutOfRange { state: init.0, num_states });
            }
        }
        let raw: Vec<(StateId, Label, StateId)> = transitions.into_iter().collect();
        let mut visible = BTreeSet::new();
        for (src, label, dst) in &raw {
            for s in [src, dst] {
                if s.0 >= num_states {
                    return Err(LtsError::StateOutOfRange { state: s.0, num_states });
                }
            }
            match label {
                Label::Tau => {}
                Label::Action(name) if name.is_empty() => return Err(LtsError::EmptyLabel),
                Label::Action(name) => {
                    visible.insert(name.clone());
                }
            }
        }
        let mut labels = vec![Label::Tau];
        labels.extend(visible.into_iter().map(Label::Action));

        let mut transitions: Vec<(StateId, LabelId, StateId)> = raw
            .into_iter()
            .map(|(src, label, dst)| {
                let id = match &label {
                    Label::Tau => LabelId::TAU,
                    Label::Action(_) => {
                        let pos = labels[1..].binary_search(&label).expect("interned label");
                        LabelId(pos as u32 + 1)
                    }
                };
                (src, id, dst)
            })
            .collect();
        transitions.sort_unstable();
        transitions.dedup();

        let mut out = vec![Vec::new(); num_states];
        for &(src, label, dst) in &transitions {
            out[src.0].push((label, dst));
        }
        let tau_closure: Vec<Vec<StateId>> = (0..num_states).map(|q| bfs_tau(&out, StateId(q))).collect();
        let mut stepped = vec![Vec::new(); num_states * labels.len()];
        for p in 0..num_states {
            for &mid in &tau_closure[p] {
                for &(u, dst) in &out[mid.0] {
                    stepped[p * labels.len() + u.0 as usize].push((mid, dst));
                }
            }
        }
        for pairs in &mut stepped {
            pairs.sort_unstable();
            pairs.dedup();
        }

        Ok(Lts { num_states, initial, labels, transitions, out, tau_closure, stepped, names: None })
    }

    /// Attaches display names for the states.
    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Result<Self, LtsError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.num_states {
            return Err(LtsError::NameCount { names: names.len(), num_states: self.num_states });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states).map(StateId)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// The display name of a state: its attached name, or its index.
    pub fn state_name(&self, s: StateId) -> String {
        match &self.names {
            Some(names) => names[s.0].clone(),
            None => s.0.to_string(),
        }
    }

    /// Resolves a state by attached name first, then by numeric index.
    pub fn resolve_state(&self, text: &str) -> Option<StateId> {
        if let Some(names) = &self.names {
            if let Some(pos) = names.iter().position(|n| n == text) {
                return Some(StateId(pos));
            }
        }
        text.parse::<usize>().ok().filter(|&i| i < self.num_states).map(StateId)
    }

    /// All labels, silent step first.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, id: LabelId) -> &Label {
        &self.labels[id.0 as usize]
    }

    pub fn label_id(&self, label: &Label) -> Option<LabelId> {
        match label {
            Label::Tau => Some(LabelId::TAU),
            Label::Action(_) => self.labels[1..].binary_search(label).ok().map(|p| LabelId(p as u32 + 1)),
        }
    }

    /// Visible labels in lexicographic order.
    pub fn visible_labels(&self) -> impl Iterator<Item = (LabelId, &Label)> + '_ {
        self.labels.iter().enumerate().skip(1).map(|(i, l)| (LabelId(i as u32), l))
    }

    pub fn transitions(&self) -> &[(StateId, LabelId, StateId)] {
        &self.transitions
    }

    pub fn labelled_transitions(&self) -> impl Iterator<Item = (StateId, &Label, StateId)> + '_ {
        self.transitions.iter().map(move |&(s, l, d)| (s, self.label(l), d))
    }

    /// Outgoing transitions of `q`, sorted by `(label, target)`.
    pub fn successors(&self, q: StateId) -> &[(LabelId, StateId)] {
        &self.out[q.0]
    }

    pub fn successors_by(&self, q: StateId, label: LabelId) -> impl Iterator<Item = StateId> + '_ {
        self.out[q.0].iter().filter(move |(l, _)| *l == label).map(|&(_, d)| d)
    }

    pub fn has_transition(&self, src: StateId, label: LabelId, dst: StateId) -> bool {
        self.transitions.binary_search(&(src, label, dst)).is_ok()
    }

    /// `{ q' | q ↠τ q' }`, sorted; always contains `q`.
    pub fn tau_closure(&self, q: StateId) -> &[StateId] {
        &self.tau_closure[q.0]
    }

    /// All `(p', p'')` with `p ↠τ p'` and `p' -u-> p''`, sorted.
    pub fn stepped_pairs(&self, p: StateId, label: LabelId) -> &[(StateId, StateId)] {
        &self.stepped[p.0 * self.labels.len() + label.0 as usize]
    }

    /// [`Lts::stepped_pairs`] addressed by label value; unknown labels have
    /// no transitions.
    pub fn stepped_pairs_of(&self, p: StateId, label: &Label) -> &[(StateId, StateId)] {
        match self.label_id(label) {
            Some(id) => self.stepped_pairs(p, id),
            None => &[],
        }
    }

    /// All `p'''` with `p ↠τ · -a-> · ↠τ p'''`, sorted.
    pub fn weak_successors(&self, p: StateId, label: LabelId) -> Vec<StateId> {
        let mut set = BTreeSet::new();
        for &(_, mid) in self.stepped_pairs(p, label) {
            set.extend(self.tau_closure(mid).iter().copied());
        }
        set.into_iter().collect()
    }

    /// Places `other` after `self`; returns the union and the offset of
    /// `other`'s states. The initial state of `self` is kept.
    pub fn disjoint_union(&self, other: &Lts) -> (Lts, usize) {
        let offset = self.num_states;
        let shifted = other
            .labelled_transitions()
            .map(|(s, l, d)| (StateId(s.0 + offset), l.clone(), StateId(d.0 + offset)));
        let transitions: Vec<_> = self.labelled_transitions().map(|(s, l, d)| (s, l.clone(), d)).chain(shifted).collect();
        let initial = self.initial.or(other.initial.map(|s| StateId(s.0 + offset)));
        let mut union = Lts::new(offset + other.num_states, initial, transitions).expect("valid union");
        if self.names.is_some() || other.names.is_some() {
            let names: Vec<String> = self.states().map(|s| self.state_name(s)).chain(other.states().map(|s| other.state_name(s))).collect();
            union.names = Some(names);
        }
        (union, offset)
    }

    /// Non-deterministic choice `r1 + r2`: the disjoint union of both
    /// systems plus a fresh root carrying the outgoing transitions of both
    /// roots. The fresh root is the last state and the new initial state.
    pub fn choice(l1: &Lts, r1: StateId, l2: &Lts, r2: StateId) -> (Lts, StateId) {
        assert!(r1.0 < l1.num_states && r2.0 < l2.num_states, "choice roots out of range");
        let (union, offset) = l1.disjoint_union(l2);
        let root = StateId(union.num_states);
        let mut transitions: Vec<_> = union.labelled_transitions().map(|(s, l, d)| (s, l.clone(), d)).collect();
        for &(label, dst) in l1.successors(r1) {
            transitions.push((root, l1.label(label).clone(), dst));
        }
        for &(label, dst) in l2.successors(r2) {
            transitions.push((root, l2.label(label).clone(), StateId(dst.0 + offset)));
        }
        let mut lts = Lts::new(root.0 + 1, Some(root), transitions).expect("valid choice");
        if let Some(mut names) = union.names {
            names.push(alloc::format!("({} + {})", l1.state_name(r1), l2.state_name(r2)));
            lts.names = Some(names);
        }
        (lts, root)
    }
}

fn bfs_tau(out: &[Vec<(LabelId, StateId)>], q: StateId) -> Vec<StateId> {
    let mut seen = vec![false; out.len()];
    let mut queue = VecDeque::new();
    seen[q.0] = true;
    queue.push_back(q);
    while let Some(s) = queue.pop_front() {
        for &(label, dst) in &out[s.0] {
            if label.is_tau() && !seen[dst.0] {
                seen[dst.0] = true;
                queue.push_back(dst);
            }
        }
    }
    seen.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| StateId(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> StateId {
        StateId(i)
    }

    fn lts(n: usize, ts: &[(usize, &str, usize)]) -> Lts {
        Lts::new(
            n,
            Some(s(0)),
            ts.iter().map(|&(a, l, b)| (s(a), if l == "tau" { Label::Tau } else { Label::action(l) }, s(b))),
        )
        .unwrap()
    }

    #[test]
    fn closure_without_tau_is_singleton() {
        let l = lts(2, &[(0, "a", 1)]);
        assert_eq!(l.tau_closure(s(0)), &[s(0)]);
        assert_eq!(l.tau_closure(s(1)), &[s(1)]);
    }

    #[test]
    fn closure_of_tau_cycle() {
        // brute force: two states, both edges tau, so each reaches both.
        let l = lts(2, &[(0, "tau", 1), (1, "tau", 0)]);
        assert_eq!(l.tau_closure(s(0)), &[s(0), s(1)]);
        assert_eq!(l.tau_closure(s(1)), &[s(0), s(1)]);
    }

    #[test]
    fn stepped_pairs_chain() {
        let l = lts(3, &[(0, "tau", 1), (1, "a", 2)]);
        let a = l.label_id(&Label::action("a")).unwrap();
        assert_eq!(l.stepped_pairs(s(0), a), vec![(s(1), s(2))]);
        assert!(l.stepped_pairs(s(2), a).is_empty());
        assert!(l.stepped_pairs(s(2), LabelId::TAU).is_empty());
    }

    #[test]
    fn duplicates_are_removed_and_labels_sorted() {
        let l = lts(2, &[(0, "b", 1), (0, "a", 1), (0, "b", 1)]);
        assert_eq!(l.num_transitions(), 2);
        assert_eq!(l.labels(), &[Label::Tau, Label::action("a"), Label::action("b")]);
    }

    #[test]
    fn rejects_out_of_range() {
        let err = Lts::new(1, None, [(s(0), Label::action("a"), s(1))]).unwrap_err();
        assert_eq!(err, LtsError::StateOutOfRange { state: 1, num_states: 1 });
        assert!(matches!(Lts::new(1, Some(s(3)), []), Err(LtsError::InitialOutOfRange { .. })));
        assert_eq!(Lts::new(1, None, [(s(0), Label::action(""), s(0))]).unwrap_err(), LtsError::EmptyLabel);
    }

    #[test]
    fn disjoint_union_shapes() {
        let empty = Lts::new(0, None, []).unwrap();
        let l = lts(3, &[(0, "tau", 1), (1, "a", 2)]);
        let (u, off) = empty.disjoint_union(&l);
        assert_eq!(off, 0);
        assert_eq!(u.transitions(), l.transitions());
        let (u, off) = l.disjoint_union(&empty);
        assert_eq!(off, 3);
        assert_eq!(u.num_transitions(), l.num_transitions());
        let (u, off) = l.disjoint_union(&l);
        assert_eq!((u.num_states(), off, u.num_transitions()), (6, 3, 4));
        assert!(u.has_transition(s(4), LabelId(1), s(5)));
    }

    #[test]
    fn choice_of_deadlocks() {
        let d = lts(1, &[]);
        let (c, root) = Lts::choice(&d, s(0), &d, s(0));
        assert_eq!(root, s(2));
        assert_eq!(c.num_states(), 3);
        assert!(c.successors(root).is_empty());
    }

    #[test]
    fn choice_root_out_degree_adds_up() {
        let l1 = lts(3, &[(0, "tau", 1), (0, "a", 2), (1, "a", 2)]);
        let l2 = lts(2, &[(0, "c", 1), (0, "tau", 0)]);
        let (c, root) = Lts::choice(&l1, s(0), &l2, s(0));
        assert_eq!(c.successors(root).len(), 2 + 2);
        // the self-loop of l2's root is retargeted to the copy, not the fresh root
        assert!(c.has_transition(root, LabelId::TAU, s(3)));
        assert!(c.transitions().iter().all(|&(_, _, d)| d != root));
    }
}
