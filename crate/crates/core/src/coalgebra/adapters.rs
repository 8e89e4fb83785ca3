//! Concrete coalgebras: streams, deterministic automata and the encoding of
//! a transition system into `P(X + X × A × X)`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ty::{AtomDomains, CoalgebraError, FValue, FiniteCoalgebra, Ty};
use crate::lts::{Lts, StateId};

pub const STREAM_SHAPE: &str = "A × X";
pub const DFA_SHAPE: &str = "X^A × Two";

fn domains(entries: &[(&str, &[&str])]) -> AtomDomains {
    entries.iter().map(|(k, v)| (k.to_string(), v.iter().map(|e| e.to_string()).collect())).collect()
}

/// Stream coalgebra over the alphabet `A`: state `i` has head `heads[i]`
/// and tail `tails[i]`.
pub fn stream_coalgebra(alphabet: &[&str], heads: &[&str], tails: &[usize]) -> Result<FiniteCoalgebra, CoalgebraError> {
    if heads.len() != tails.len() {
        return Err(CoalgebraError::CarrierMismatch { carrier: heads.len(), entries: tails.len() });
    }
    let structure = heads.iter().zip(tails).map(|(h, &t)| FValue::pair(FValue::elem("A", *h), FValue::state(t))).collect();
    FiniteCoalgebra::new(Ty::prod(Ty::atom("A"), Ty::Var), domains(&[("A", alphabet)]), structure)
}

/// Deterministic automaton: `delta[i][k]` is the successor of state `i` on
/// letter `alphabet[k]`. Outputs live in the atom `Two = {0, 1}`.
pub fn dfa_coalgebra(alphabet: &[&str], delta: &[Vec<usize>], finals: &[bool]) -> Result<FiniteCoalgebra, CoalgebraError> {
    if delta.len() != finals.len() {
        return Err(CoalgebraError::CarrierMismatch { carrier: delta.len(), entries: finals.len() });
    }
    let structure = delta
        .iter()
        .zip(finals)
        .map(|(row, &fin)| {
            let f = alphabet.iter().zip(row).map(|(a, &t)| (a.to_string(), FValue::state(t))).collect();
            FValue::pair(FValue::FuncVal(f), FValue::elem("Two", if fin { "1" } else { "0" }))
        })
        .collect();
    FiniteCoalgebra::new(
        Ty::prod(Ty::fun("A", Ty::Var), Ty::atom("Two")),
        domains(&[("A", alphabet), ("Two", &["0", "1"])]),
        structure,
    )
}

fn stream_parts(c: &FiniteCoalgebra, s: StateId) -> (&FValue, StateId) {
    match c.at(s) {
        FValue::PairVal(h, t) => match **t {
            FValue::StateRef(t) => (h, t),
            _ => unreachable!("validated stream"),
        },
        _ => unreachable!("validated stream"),
    }
}

fn is_stream(c: &FiniteCoalgebra) -> bool {
    matches!(&c.shape, Ty::Prod(a, b) if matches!(**a, Ty::Atom(_)) && **b == Ty::Var)
}

fn is_dfa(c: &FiniteCoalgebra) -> bool {
    matches!(&c.shape, Ty::Prod(f, o) if matches!(&**f, Ty::FunFromAtom(_, t) if **t == Ty::Var) && matches!(**o, Ty::Atom(_)))
}

/// The first `len` heads of the stream at `s`.
pub fn stream_unfold(c: &FiniteCoalgebra, s: StateId, len: usize) -> Result<Vec<FValue>, CoalgebraError> {
    if !is_stream(c) {
        return Err(CoalgebraError::WrongShape { expected: STREAM_SHAPE });
    }
    let mut out = Vec::with_capacity(len);
    let mut cur = s;
    for _ in 0..len {
        let (h, t) = stream_parts(c, cur);
        out.push(h.clone());
        cur = t;
    }
    Ok(out)
}

/// Least `n` such that the `n`-th heads of `x` and `y` differ.
pub fn stream_distinguisher(c: &FiniteCoalgebra, x: StateId, y: StateId) -> Result<Option<usize>, CoalgebraError> {
    if !is_stream(c) {
        return Err(CoalgebraError::WrongShape { expected: STREAM_SHAPE });
    }
    let mut seen = BTreeSet::new();
    let (mut a, mut b) = (x, y);
    let mut n = 0;
    while seen.insert((a, b)) {
        let (ha, ta) = stream_parts(c, a);
        let (hb, tb) = stream_parts(c, b);
        if ha != hb {
            return Ok(Some(n));
        }
        (a, b) = (ta, tb);
        n += 1;
    }
    Ok(None)
}

fn dfa_parts(c: &FiniteCoalgebra, s: StateId) -> (&BTreeMap<String, FValue>, &FValue) {
    match c.at(s) {
        FValue::PairVal(f, o) => match &**f {
            FValue::FuncVal(m) => (m, o),
            _ => unreachable!("validated automaton"),
        },
        _ => unreachable!("validated automaton"),
    }
}

fn dfa_step(c: &FiniteCoalgebra, s: StateId, letter: &str) -> Option<StateId> {
    match dfa_parts(c, s).0.get(letter)? {
        FValue::StateRef(t) => Some(*t),
        _ => None,
    }
}

/// Output of the automaton after reading `word` from `s`; `None` on an
/// unknown letter.
pub fn dfa_output<S: AsRef<str>>(c: &FiniteCoalgebra, s: StateId, word: &[S]) -> Result<Option<FValue>, CoalgebraError> {
    if !is_dfa(c) {
        return Err(CoalgebraError::WrongShape { expected: DFA_SHAPE });
    }
    let mut cur = s;
    for a in word {
        match dfa_step(c, cur, a.as_ref()) {
            Some(t) => cur = t,
            None => return Ok(None),
        }
    }
    Ok(Some(dfa_parts(c, cur).1.clone()))
}

/// A shortest word after which `x` and `y` give different outputs. Letters
/// are tried in domain order, so the result is the least such word in
/// length-lexicographic order.
pub fn dfa_distinguishing_word(c: &FiniteCoalgebra, x: StateId, y: StateId) -> Result<Option<Vec<String>>, CoalgebraError> {
    if !is_dfa(c) {
        return Err(CoalgebraError::WrongShape { expected: DFA_SHAPE });
    }
    let Ty::Prod(f, _) = &c.shape else { unreachable!() };
    let Ty::FunFromAtom(alpha, _) = &**f else { unreachable!() };
    let letters = &c.atoms[alpha];
    // Each visited pair remembers the pair and letter it was reached from.
    type Parent = Option<((StateId, StateId), usize)>;
    let mut parent: BTreeMap<(StateId, StateId), Parent> = BTreeMap::new();
    let mut queue = VecDeque::from([(x, y)]);
    parent.insert((x, y), None);
    while let Some((a, b)) = queue.pop_front() {
        if dfa_parts(c, a).1 != dfa_parts(c, b).1 {
            let mut word = Vec::new();
            let mut cur = (a, b);
            while let Some(&Some((prev, k))) = parent.get(&cur) {
                word.push(letters[k].clone());
                cur = prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for (k, l) in letters.iter().enumerate() {
            let next = (dfa_step(c, a, l).expect("total"), dfa_step(c, b, l).expect("total"));
            if let alloc::collections::btree_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some(((a, b), k)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Encodes `lts` into `P(X + X × A × X)`: a silent step `x -τ-> y` becomes
/// `inl y`, and a visible step `y -a-> z` from any `y` silently reachable
/// from `x` (including `x` itself) becomes `inr (y, (a, z))`. A system
/// without visible labels gets a one-element placeholder alphabet.
pub fn lts_as_coalgebra(lts: &Lts) -> FiniteCoalgebra {
    let mut alphabet: Vec<String> = lts.visible_labels().map(|(_, l)| l.to_string()).collect();
    if alphabet.is_empty() {
        alphabet.push("_".into());
    }
    let shape = Ty::pow(Ty::sum(Ty::Var, Ty::prod(Ty::Var, Ty::prod(Ty::atom("A"), Ty::Var))));
    let mut atoms = AtomDomains::new();
    atoms.insert("A".into(), alphabet);
    let structure = lts
        .states()
        .map(|x| {
            let mut set = BTreeSet::new();
            for &(l, y) in lts.successors(x) {
                if l.is_tau() {
                    set.insert(FValue::inl(FValue::StateRef(y)));
                }
            }
            for &y in lts.tau_closure(x) {
                for &(l, z) in lts.successors(y) {
                    if !l.is_tau() {
                        let act = FValue::elem("A", lts.label(l).to_string());
                        set.insert(FValue::inr(FValue::pair(FValue::StateRef(y), FValue::pair(act, FValue::StateRef(z)))));
                    }
                }
            }
            FValue::SetVal(set)
        })
        .collect();
    FiniteCoalgebra::new(shape, atoms, structure).expect("encoding fits its own shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::least_apartness_gen;
    use crate::lts::Label;
    use alloc::vec;

    #[test]
    fn constant_versus_alternating_stream() {
        // 0: aaaa...   1: abab...
        let c = stream_coalgebra(&["a", "b"], &["a", "a", "b"], &[0, 2, 1]).unwrap();
        assert_eq!(stream_distinguisher(&c, StateId(0), StateId(1)), Ok(Some(1)));
        assert_eq!(stream_distinguisher(&c, StateId(0), StateId(0)), Ok(None));
        assert!(least_apartness_gen(&c).contains(StateId(0), StateId(1)));
    }

    #[test]
    fn distinguisher_rejects_other_shapes() {
        let c = dfa_coalgebra(&["a"], &[vec![0]], &[true]).unwrap();
        assert!(stream_distinguisher(&c, StateId(0), StateId(0)).is_err());
    }

    #[test]
    fn encoding_of_small_systems() {
        let l = Lts::new(3, None, [(StateId(0), Label::Tau, StateId(1))]).unwrap();
        let c = lts_as_coalgebra(&l);
        assert_eq!(c.structure[2], FValue::SetVal(BTreeSet::new()));
        assert_eq!(c.structure[0], FValue::SetVal([FValue::inl(FValue::state(1))].into_iter().collect()));
    }
}
