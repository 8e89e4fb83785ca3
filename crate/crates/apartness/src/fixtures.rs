//! Small named systems used by the tests, the acceptance suite and the
//! README walkthrough. The `.aut` sources live in `fixtures/`.

use apartness_core::coalgebra::{dfa_coalgebra, FiniteCoalgebra};
use apartness_core::{Lts, StateId};

use crate::aut::{parse_aut, ParseOptions};

fn load(text: &str, names: &[&str]) -> Lts {
    parse_aut(text, &ParseOptions::default())
        .expect("fixture parses")
        .with_names(names.iter().copied())
        .expect("one name per state")
}

pub const SR_AUT: &str = include_str!("../fixtures/sr.aut");
pub const QP_AUT: &str = include_str!("../fixtures/qp.aut");
pub const LOOPS_AUT: &str = include_str!("../fixtures/loops.aut");
pub const CYCLE_AUT: &str = include_str!("../fixtures/cycle.aut");
pub const NC_LEFT_AUT: &str = include_str!("../fixtures/nc_left.aut");
pub const ONE_C_AUT: &str = include_str!("../fixtures/one_c.aut");

/// `s` offers `c` both before and after a silent step; `r` only after.
pub fn sr() -> Lts {
    load(SR_AUT, &["s", "s1", "s2", "s3", "s4", "r", "r1", "r2", "r3"])
}

pub fn qp() -> Lts {
    load(QP_AUT, &["q", "q1", "q2", "q3", "q4", "q5", "q6", "p", "p1", "p2", "p3", "p4"])
}

/// Two systems with cycles whose roots `q0` and `p0` are apart.
pub fn loops() -> Lts {
    load(LOOPS_AUT, &["p0", "p1", "p2", "p3", "q0", "q1", "q2", "q3", "q4"])
}

/// A two-state `d` cycle next to a `d` self-loop.
pub fn cycle() -> Lts {
    load(CYCLE_AUT, &["q", "q'", "p"])
}

/// `q0 -τ-> q' -a-> q1` next to `p0 -a-> p1`.
pub fn nc_left() -> Lts {
    load(NC_LEFT_AUT, &["q0", "q'", "q1", "p0", "p1"])
}

pub fn one_c() -> Lts {
    load(ONE_C_AUT, &["x", "y"])
}

/// `q0 + x` and `p0 + x`, where `x -c-> y`, in one system. Returns the
/// system and the two fresh roots.
pub fn nc_right() -> (Lts, StateId, StateId) {
    let left = nc_left();
    let c = one_c();
    let q0 = left.resolve_state("q0").expect("q0");
    let p0 = left.resolve_state("p0").expect("p0");
    let x = c.resolve_state("x").expect("x");
    let (lq, rq) = Lts::choice(&left, q0, &c, x);
    let (lp, rp) = Lts::choice(&left, p0, &c, x);
    let (u, off) = lq.disjoint_union(&lp);
    (u, rq, StateId(rp.0 + off))
}

/// The four-state automaton over `{a, b}`: `q0 -a-> q1`, `q0 -b-> q3`,
/// `q1 -a,b-> q2`, `q2 -a,b-> q1`, `q3 -a-> q0`, `q3 -b-> q1`, with `q1`
/// and `q2` accepting.
pub fn da() -> FiniteCoalgebra {
    dfa_coalgebra(&["a", "b"], &[vec![1, 3], vec![2, 2], vec![1, 1], vec![0, 1]], &[false, true, true, false])
        .expect("well-formed automaton")
}
