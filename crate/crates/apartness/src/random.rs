//! Seeded generators for transition systems and coalgebras.

use std::collections::{BTreeMap, BTreeSet};

use apartness_core::coalgebra::{dfa_coalgebra, stream_coalgebra, AtomDomains, FValue, FiniteCoalgebra, Ty};
use apartness_core::{Label, Lts, StateId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Prng = ChaCha8Rng;

pub fn rng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ALPHABET: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Clone, Debug)]
pub struct LtsConfig {
    pub max_states: usize,
    pub max_labels: usize,
    /// Probability of each potential visible transition.
    pub density: f64,
    /// Relative weight of silent transitions: a potential τ-step is kept
    /// with probability `density * tau_share`.
    pub tau_share: f64,
}

impl Default for LtsConfig {
    fn default() -> Self {
        LtsConfig { max_states: 8, max_labels: 3, density: 0.25, tau_share: 1.0 }
    }
}

/// States uniform in `[2, max_states]` (or exactly one when that is the
/// maximum), labels `a, b, …` plus τ.
pub fn random_lts(rng: &mut Prng, cfg: &LtsConfig) -> Lts {
    let n = if cfg.max_states <= 1 { 1 } else { rng.gen_range(2..=cfg.max_states) };
    let k = rng.gen_range(1..=cfg.max_labels.clamp(1, ALPHABET.len()));
    let tau_p = (cfg.density * cfg.tau_share).clamp(0.0, 1.0);
    let mut ts = Vec::new();
    for src in 0..n {
        for dst in 0..n {
            if rng.gen_bool(tau_p) {
                ts.push((StateId(src), Label::Tau, StateId(dst)));
            }
            for a in &ALPHABET[..k] {
                if rng.gen_bool(cfg.density.clamp(0.0, 1.0)) {
                    ts.push((StateId(src), Label::action(*a), StateId(dst)));
                }
            }
        }
    }
    Lts::new(n, Some(StateId(0)), ts).expect("generated in range")
}

const ATOM_NAMES: [&str; 3] = ["A", "B", "C"];

/// Between one and three atoms with one to three elements each.
pub fn random_atoms(rng: &mut Prng) -> AtomDomains {
    let count = rng.gen_range(1..=3);
    ATOM_NAMES[..count]
        .iter()
        .map(|a| {
            let size = rng.gen_range(1..=3);
            (a.to_string(), (0..size).map(|i| format!("{}{i}", a.to_lowercase())).collect())
        })
        .collect()
}

/// A shape of depth at most `depth` that mentions `Var`.
pub fn random_ty(rng: &mut Prng, atoms: &AtomDomains, depth: usize) -> Ty {
    loop {
        let t = ty_rec(rng, atoms, depth);
        if mentions_var(&t) {
            return t;
        }
    }
}

fn mentions_var(t: &Ty) -> bool {
    match t {
        Ty::Var => true,
        Ty::Atom(_) | Ty::Unit => false,
        Ty::Sum(a, b) | Ty::Prod(a, b) => mentions_var(a) || mentions_var(b),
        Ty::FunFromAtom(_, t) | Ty::FinPow(t) => mentions_var(t),
    }
}

fn ty_rec(rng: &mut Prng, atoms: &AtomDomains, depth: usize) -> Ty {
    let names: Vec<&String> = atoms.keys().collect();
    let leaf = |rng: &mut Prng| match rng.gen_range(0..5) {
        0 | 1 => Ty::Var,
        2 => Ty::Unit,
        _ => Ty::Atom((*names.choose(rng).expect("atoms")).clone()),
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => Ty::sum(ty_rec(rng, atoms, depth - 1), ty_rec(rng, atoms, depth - 1)),
        1 => Ty::prod(ty_rec(rng, atoms, depth - 1), ty_rec(rng, atoms, depth - 1)),
        2 => Ty::fun((*names.choose(rng).expect("atoms")).clone(), ty_rec(rng, atoms, depth - 1)),
        _ => Ty::pow(ty_rec(rng, atoms, depth - 1)),
    }
}

/// A value of shape `ty` over `n` states. Sets hold at most three elements.
pub fn random_value(rng: &mut Prng, ty: &Ty, atoms: &AtomDomains, n: usize) -> FValue {
    match ty {
        Ty::Atom(a) => FValue::elem(a.clone(), atoms[a].choose(rng).expect("nonempty").clone()),
        Ty::Var => FValue::state(rng.gen_range(0..n)),
        Ty::Unit => FValue::UnitVal,
        Ty::Sum(a, b) => {
            if rng.gen_bool(0.5) {
                FValue::inl(random_value(rng, a, atoms, n))
            } else {
                FValue::inr(random_value(rng, b, atoms, n))
            }
        }
        Ty::Prod(a, b) => FValue::pair(random_value(rng, a, atoms, n), random_value(rng, b, atoms, n)),
        Ty::FunFromAtom(a, t) => {
            FValue::FuncVal(atoms[a].iter().map(|e| (e.clone(), random_value(rng, t, atoms, n))).collect::<BTreeMap<_, _>>())
        }
        Ty::FinPow(t) => {
            let k = rng.gen_range(0..=3);
            FValue::SetVal((0..k).map(|_| random_value(rng, t, atoms, n)).collect::<BTreeSet<_>>())
        }
    }
}

pub fn random_coalgebra(rng: &mut Prng, max_carrier: usize, max_depth: usize) -> FiniteCoalgebra {
    let atoms = random_atoms(rng);
    let shape = random_ty(rng, &atoms, max_depth);
    let n = rng.gen_range(1..=max_carrier);
    let structure = (0..n).map(|_| random_value(rng, &shape, &atoms, n)).collect();
    FiniteCoalgebra::new(shape, atoms, structure).expect("generated values fit")
}

/// Raw automaton data, kept next to its coalgebra so independent checks
/// can work from the tables.
#[derive(Clone, Debug)]
pub struct RawDfa {
    pub alphabet: Vec<&'static str>,
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

impl RawDfa {
    pub fn coalgebra(&self) -> FiniteCoalgebra {
        dfa_coalgebra(&self.alphabet, &self.delta, &self.finals).expect("generated automaton")
    }
}

pub fn random_dfa(rng: &mut Prng, max_states: usize) -> RawDfa {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=3);
    RawDfa {
        alphabet: ALPHABET[..k].to_vec(),
        delta: (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect(),
        finals: (0..n).map(|_| rng.gen_bool(0.5)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct RawStream {
    pub alphabet: Vec<&'static str>,
    pub heads: Vec<&'static str>,
    pub tails: Vec<usize>,
}

impl RawStream {
    pub fn coalgebra(&self) -> FiniteCoalgebra {
        stream_coalgebra(&self.alphabet, &self.heads, &self.tails).expect("generated stream")
    }
}

pub fn random_stream(rng: &mut Prng, max_states: usize) -> RawStream {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=3);
    let alphabet = ALPHABET[..k].to_vec();
    RawStream {
        heads: (0..n).map(|_| *alphabet.choose(rng).expect("nonempty")).collect(),
        tails: (0..n).map(|_| rng.gen_range(0..n)).collect(),
        alphabet,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_system() {
        let cfg = LtsConfig::default();
        assert_eq!(random_lts(&mut rng(7), &cfg), random_lts(&mut rng(7), &cfg));
    }

    #[test]
    fn generated_coalgebras_are_valid() {
        let mut r = rng(1);
        for _ in 0..50 {
            let c = random_coalgebra(&mut r, 6, 4);
            assert!(c.shape.depth() <= 4);
            assert!(c.validate().is_ok());
        }
    }
}
