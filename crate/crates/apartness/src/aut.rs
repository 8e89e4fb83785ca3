//! Aldebaran `.aut` files.
//!
//! ```text
//! des (0, 3, 3)
//! (0, "a", 1)
//! (1, tau, 2)
//! (2, "b c", 0)
//! ```
//!
//! Labels may be double-quoted; unquoted labels run up to the last comma of
//! the line. Comments are not part of the format and are rejected.

use std::fmt::Write as _;

use apartness_core::{Label, Lts, LtsError, StateId};
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Label text that denotes the silent step.
    pub tau_literal: String,
    /// Also read `i` as the silent step.
    pub accept_i: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { tau_literal: "tau".into(), accept_i: false }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct AutError {
    pub line: usize,
    pub kind: AutErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutErrorKind {
    #[error("missing `des (initial, transitions, states)` header")]
    MissingHeader,
    #[error("malformed header")]
    MalformedHeader,
    #[error("malformed transition")]
    MalformedTransition,
    #[error("comments are not supported")]
    Comment,
    #[error("empty label")]
    EmptyLabel,
    #[error("state {state} out of range for {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("header declares {declared} transitions, file has {found}")]
    CountMismatch { declared: usize, found: usize },
}

fn err(line: usize, kind: AutErrorKind) -> AutError {
    AutError { line, kind }
}

/// Returns the text between the outer parentheses of `s`.
fn parenthesized(s: &str) -> Option<&str> {
    s.strip_prefix('(')?.strip_suffix(')')
}

fn parse_header(line: &str) -> Option<(usize, usize, usize)> {
    let rest = line.strip_prefix("des")?.trim_start();
    let inner = parenthesized(rest)?;
    let mut parts = inner.split(',').map(|p| p.trim().parse::<usize>());
    let first = parts.next()?.ok()?;
    let m = parts.next()?.ok()?;
    let n = parts.next()?.ok()?;
    parts.next().is_none().then_some((first, m, n))
}

fn parse_transition(line: &str) -> Result<(usize, String, usize), AutErrorKind> {
    let inner = parenthesized(line).ok_or(AutErrorKind::MalformedTransition)?;
    let (src, rest) = inner.split_once(',').ok_or(AutErrorKind::MalformedTransition)?;
    let (label, dst) = rest.rsplit_once(',').ok_or(AutErrorKind::MalformedTransition)?;
    let src = src.trim().parse().map_err(|_| AutErrorKind::MalformedTransition)?;
    let dst = dst.trim().parse().map_err(|_| AutErrorKind::MalformedTransition)?;
    let label = label.trim();
    let label = match label.strip_prefix('"') {
        Some(q) => q.strip_suffix('"').ok_or(AutErrorKind::MalformedTransition)?,
        None if label.contains('"') => return Err(AutErrorKind::MalformedTransition),
        None => label,
    };
    if label.is_empty() {
        return Err(AutErrorKind::EmptyLabel);
    }
    Ok((src, label.to_string(), dst))
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%') || line.starts_with("//") || line.starts_with(';')
}

pub fn parse_aut(text: &str, opts: &ParseOptions) -> Result<Lts, AutError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(err(1, AutErrorKind::MissingHeader))?;
    if is_comment(header) {
        return Err(err(hline, AutErrorKind::Comment));
    }
    if !header.starts_with("des") {
        return Err(err(hline, AutErrorKind::MissingHeader));
    }
    let (first, m, n) = parse_header(header).ok_or(err(hline, AutErrorKind::MalformedHeader))?;
    if n > 0 && first >= n {
        return Err(err(hline, AutErrorKind::StateOutOfRange { state: first, num_states: n }));
    }
    let mut transitions = Vec::with_capacity(m);
    let mut last_line = hline;
    for (no, line) in lines {
        last_line = no;
        if is_comment(line) {
            return Err(err(no, AutErrorKind::Comment));
        }
        let (src, label, dst) = parse_transition(line).map_err(|k| err(no, k))?;
        for s in [src, dst] {
            if s >= n {
                return Err(err(no, AutErrorKind::StateOutOfRange { state: s, num_states: n }));
            }
        }
        let label = if label == opts.tau_literal || (opts.accept_i && label == "i") { Label::Tau } else { Label::Action(label) };
        transitions.push((StateId(src), label, StateId(dst)));
    }
    if transitions.len() != m {
        return Err(err(last_line, AutErrorKind::CountMismatch { declared: m, found: transitions.len() }));
    }
    let initial = (n > 0).then_some(StateId(first));
    Lts::new(n, initial, transitions).map_err(|e| match e {
        LtsError::EmptyLabel => err(last_line, AutErrorKind::EmptyLabel),
        _ => err(hline, AutErrorKind::MalformedHeader),
    })
}

/// Canonical text: every label quoted, transitions in sorted order. A
/// system without an initial state is written with initial state `0`.
pub fn write_aut(lts: &Lts, tau_literal: &str) -> String {
    let mut out = String::new();
    let first = lts.initial().map_or(0, |s| s.0);
    let _ = writeln!(out, "des ({first},{},{})", lts.num_transitions(), lts.num_states());
    for (s, l, d) in lts.labelled_transitions() {
        let name = match l {
            Label::Tau => tau_literal,
            Label::Action(a) => a.as_str(),
        };
        let _ = writeln!(out, "({s},\"{name}\",{d})");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Lts, AutError> {
        parse_aut(text, &ParseOptions::default())
    }

    #[test]
    fn smallest_file() {
        let l = parse("des (0,1,2)\n(0,\"a\",1)").unwrap();
        assert_eq!(l.num_states(), 2);
        assert_eq!(l.initial(), Some(StateId(0)));
        let ts: Vec<_> = l.labelled_transitions().map(|(s, l, d)| (s.0, l.clone(), d.0)).collect();
        assert_eq!(ts, vec![(0, Label::action("a"), 1)]);
    }

    #[test]
    fn tau_literal_and_alias() {
        let l = parse("des (0,1,1)\n(0,\"tau\",0)").unwrap();
        assert!(l.has_transition(StateId(0), apartness_core::LabelId::TAU, StateId(0)));
        let opts = ParseOptions { tau_literal: "τ".into(), accept_i: true };
        let l = parse_aut("des (0,2,2)\n(0,i,1)\n(1,\"τ\",0)", &opts).unwrap();
        assert_eq!(l.visible_labels().count(), 0);
    }

    #[test]
    fn unquoted_and_spaced_labels() {
        let l = parse("des ( 0 , 2 , 2 )\n  ( 0 , a , 1 )\n(1, \"x, y\", 0)\n").unwrap();
        let names: Vec<_> = l.visible_labels().map(|(_, l)| l.to_string()).collect();
        assert_eq!(names, vec!["a", "x, y"]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse("").unwrap_err().kind, AutErrorKind::MissingHeader);
        assert_eq!(parse("des 0,1,2").unwrap_err(), err(1, AutErrorKind::MalformedHeader));
        assert_eq!(parse("des (0,1,2)\n(0,\"a\",2)").unwrap_err(), err(2, AutErrorKind::StateOutOfRange { state: 2, num_states: 2 }));
        assert_eq!(parse("des (0,2,2)\n(0,a,1)").unwrap_err(), err(2, AutErrorKind::CountMismatch { declared: 2, found: 1 }));
        assert_eq!(parse("des (0,1,2)\n(0,\"\",1)").unwrap_err(), err(2, AutErrorKind::EmptyLabel));
        assert_eq!(parse("des (0,1,2)\n# note\n(0,a,1)").unwrap_err(), err(2, AutErrorKind::Comment));
        assert_eq!(parse("des (0,1,2)\n(0,a,1) x").unwrap_err(), err(2, AutErrorKind::MalformedTransition));
    }

    #[test]
    fn round_trips() {
        for text in ["des (0,1,2)\n(0,\"a\",1)\n", "des (0,0,1)\n", "des (1,3,3)\n(0,\"tau\",1)\n(1,\"b\",2)\n(2,\"a\",0)\n"] {
            let l = parse(text).unwrap();
            let again = parse(&write_aut(&l, "tau")).unwrap();
            assert_eq!(l, again);
        }
    }
}
