//! Greedy shrinking of counterexamples.

use apartness_core::{Lts, StateId};

/// Removes transitions, then states, one at a time for as long as `keeps`
/// still holds. The result satisfies `keeps` whenever the input does.
pub fn minimize(lts: &Lts, keeps: impl Fn(&Lts) -> bool) -> Lts {
    let mut cur = lts.clone();
    loop {
        let before = (cur.num_states(), cur.num_transitions());
        cur = drop_transitions(cur, &keeps);
        cur = drop_states(cur, &keeps);
        if (cur.num_states(), cur.num_transitions()) == before {
            return cur;
        }
    }
}

fn drop_transitions(mut cur: Lts, keeps: &impl Fn(&Lts) -> bool) -> Lts {
    let mut i = 0;
    while i < cur.num_transitions() {
        let ts = cur.labelled_transitions().enumerate().filter(|&(j, _)| j != i).map(|(_, (s, l, d))| (s, l.clone(), d));
        let candidate = Lts::new(cur.num_states(), cur.initial(), ts).expect("subset of a valid system");
        if keeps(&candidate) {
            cur = candidate;
        } else {
            i += 1;
        }
    }
    cur
}

/// `lts` without state `gone`; later states move down by one.
pub fn remove_state(lts: &Lts, gone: StateId) -> Lts {
    let shift = |s: StateId| StateId(if s.0 > gone.0 { s.0 - 1 } else { s.0 });
    let ts = lts
        .labelled_transitions()
        .filter(|&(s, _, d)| s != gone && d != gone)
        .map(|(s, l, d)| (shift(s), l.clone(), shift(d)));
    let initial = lts.initial().filter(|&s| s != gone).map(shift);
    Lts::new(lts.num_states() - 1, initial, ts).expect("renumbered in range")
}

fn drop_states(mut cur: Lts, keeps: &impl Fn(&Lts) -> bool) -> Lts {
    let mut i = 0;
    while i < cur.num_states() && cur.num_states() > 1 {
        let candidate = remove_state(&cur, StateId(i));
        if keeps(&candidate) {
            cur = candidate;
        } else {
            i += 1;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use apartness_core::Label;

    #[test]
    fn shrinks_to_the_essential_transition() {
        let l = Lts::new(
            4,
            Some(StateId(0)),
            [
                (StateId(0), Label::action("a"), StateId(1)),
                (StateId(1), Label::action("b"), StateId(2)),
                (StateId(2), Label::action("b"), StateId(3)),
            ],
        )
        .unwrap();
        let has_b = |l: &Lts| l.labelled_transitions().any(|(_, lab, _)| lab == &Label::action("b"));
        let m = minimize(&l, has_b);
        assert_eq!(m.num_transitions(), 1);
        assert!(has_b(&m));
        assert!(m.num_states() <= 2);
    }
}
