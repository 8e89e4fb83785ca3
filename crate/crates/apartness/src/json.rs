//! JSON forms of certificates, relations and coalgebras.
//!
//! A certificate node looks like
//!
//! ```json
//! { "rule": "in_b", "conclusion": [0, 5],
//!   "step": { "to": 2, "label": "c" },
//!   "obligations": [ { "pair": [6, 8], "via": "left", "sub": { "rule": "in_b", "...": "..." } } ] }
//! ```
//!
//! `extra` holds the `symm` premise and the silent-step premise. An
//! obligation over single states uses `"state": n` instead of `"pair"`, a
//! `"both"` obligation carries a two-element `sub` array, and an empty
//! range is written as one `{ "via": "vacuous" }` entry.

use apartness_core::coalgebra::{AtomDomains, CoalgebraError, FValue, FiniteCoalgebra, Ty};
use apartness_core::{Derivation, Label, Obligation, PairRelation, RangeItem, Resolution, RuleTag, StateId, Step};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("coalgebra: {0}")]
    Coalgebra(#[from] CoalgebraError),
}

fn shape(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Shape { path: path.into(), message: message.into() }
}

fn label_text(l: &Label, tau: &str) -> String {
    match l {
        Label::Tau => tau.to_string(),
        Label::Action(a) => a.clone(),
    }
}

pub fn derivation_to_json(d: &Derivation, tau: &str) -> Value {
    let mut m = Map::new();
    m.insert("rule".into(), json!(d.rule.name()));
    m.insert("conclusion".into(), json!([d.conclusion.0 .0, d.conclusion.1 .0]));
    if let Some(st) = &d.step {
        m.insert("step".into(), json!({ "to": st.to.0, "label": label_text(&st.label, tau) }));
    }
    if let Some(e) = &d.extra {
        m.insert("extra".into(), derivation_to_json(e, tau));
    }
    if d.rule != RuleTag::Symm {
        let obs: Vec<Value> = d
            .obligations
            .iter()
            .map(|ob| match ob {
                Obligation::Vacuous => json!({ "via": "vacuous" }),
                Obligation::Covered { item, via } => {
                    let mut o = Map::new();
                    match item {
                        RangeItem::Pair(a, b) => o.insert("pair".into(), json!([a.0, b.0])),
                        RangeItem::State(a) => o.insert("state".into(), json!(a.0)),
                    };
                    o.insert("via".into(), json!(via.tag()));
                    let sub = match via {
                        Resolution::Left(x) | Resolution::Right(x) => derivation_to_json(x, tau),
                        Resolution::Both(x, y) => json!([derivation_to_json(x, tau), derivation_to_json(y, tau)]),
                    };
                    o.insert("sub".into(), sub);
                    Value::Object(o)
                }
            })
            .collect();
        m.insert("obligations".into(), Value::Array(obs));
    }
    Value::Object(m)
}

fn state_of(v: &Value, path: &str) -> Result<StateId, JsonError> {
    v.as_u64().map(|n| StateId(n as usize)).ok_or_else(|| shape(path, "expected a state index"))
}

fn pair_of(v: &Value, path: &str) -> Result<(StateId, StateId), JsonError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((state_of(a, path)?, state_of(b, path)?)),
        _ => Err(shape(path, "expected a pair of state indices")),
    }
}

pub fn derivation_from_json(v: &Value, tau: &str) -> Result<Derivation, JsonError> {
    node_from_json(v, tau, "root")
}

fn node_from_json(v: &Value, tau: &str, path: &str) -> Result<Derivation, JsonError> {
    let o = v.as_object().ok_or_else(|| shape(path, "expected an object"))?;
    let conclusion = pair_of(o.get("conclusion").ok_or_else(|| shape(path, "missing conclusion"))?, path)?;
    let step = match o.get("step") {
        None | Some(Value::Null) => None,
        Some(s) => {
            let to = state_of(s.get("to").ok_or_else(|| shape(path, "step without target"))?, path)?;
            let text = s.get("label").and_then(Value::as_str).ok_or_else(|| shape(path, "step without label"))?;
            let label = if text == tau { Label::Tau } else { Label::action(text) };
            Some(Step { to, label })
        }
    };
    let name = o.get("rule").and_then(Value::as_str).ok_or_else(|| shape(path, "missing rule"))?;
    let rule = RuleTag::from_parts(name, step.as_ref().map(|s| &s.label))
        .ok_or_else(|| shape(path, format!("unknown rule `{name}` or missing step")))?;
    let extra = match o.get("extra") {
        None | Some(Value::Null) => None,
        Some(e) => Some(Box::new(node_from_json(e, tau, &format!("{path}/extra"))?)),
    };
    let mut obligations = Vec::new();
    if let Some(obs) = o.get("obligations") {
        let obs = obs.as_array().ok_or_else(|| shape(path, "obligations must be an array"))?;
        for (i, ob) in obs.iter().enumerate() {
            let here = format!("{path}/ob[{i}]");
            let via = ob.get("via").and_then(Value::as_str).ok_or_else(|| shape(&here, "missing via"))?;
            if via == "vacuous" {
                obligations.push(Obligation::Vacuous);
                continue;
            }
            let item = match (ob.get("pair"), ob.get("state")) {
                (Some(p), None) => {
                    let (a, b) = pair_of(p, &here)?;
                    RangeItem::Pair(a, b)
                }
                (None, Some(s)) => RangeItem::State(state_of(s, &here)?),
                _ => return Err(shape(&here, "exactly one of pair or state is required")),
            };
            let sub = ob.get("sub").ok_or_else(|| shape(&here, "missing sub"))?;
            let via = match via {
                "left" => Resolution::Left(node_from_json(sub, tau, &format!("{here}.left"))?),
                "right" => Resolution::Right(node_from_json(sub, tau, &format!("{here}.right"))?),
                "both" => match sub.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Resolution::Both(
                        node_from_json(a, tau, &format!("{here}.both"))?,
                        node_from_json(b, tau, &format!("{here}.both2"))?,
                    ),
                    _ => return Err(shape(&here, "both needs two sub-derivations")),
                },
                other => return Err(shape(&here, format!("unknown via `{other}`"))),
            };
            obligations.push(Obligation::Covered { item, via });
        }
    }
    Ok(Derivation { conclusion, rule, step, extra, obligations })
}

/// Reads `[[x, y], ...]` and closes it under symmetry.
pub fn relation_from_json(text: &str, n: usize) -> Result<PairRelation, JsonError> {
    let pairs: Vec<(usize, usize)> = serde_json::from_str(text)?;
    let mut r = PairRelation::empty(n);
    for (i, (x, y)) in pairs.into_iter().enumerate() {
        if x >= n || y >= n {
            return Err(shape(&format!("[{i}]"), format!("pair ({x}, {y}) outside {n} states")));
        }
        r.insert(StateId(x), StateId(y));
    }
    Ok(r)
}

pub fn pairs_to_json(r: &PairRelation) -> Value {
    Value::Array(r.pairs().map(|(x, y)| json!([x.0, y.0])).collect())
}

#[derive(Serialize, Deserialize)]
struct CoalgebraFile {
    atoms: AtomDomains,
    shape: Ty,
    carrier: usize,
    structure: Vec<FValue>,
}

pub fn coalgebra_from_json(text: &str) -> Result<FiniteCoalgebra, JsonError> {
    let f: CoalgebraFile = serde_json::from_str(text)?;
    let c = FiniteCoalgebra { carrier_size: f.carrier, shape: f.shape, atoms: f.atoms, structure: f.structure };
    c.validate()?;
    Ok(c)
}

pub fn coalgebra_to_json(c: &FiniteCoalgebra) -> String {
    let f = CoalgebraFile { atoms: c.atoms.clone(), shape: c.shape.clone(), carrier: c.carrier_size, structure: c.structure.clone() };
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use apartness_core::{derive, Flavor};

    #[test]
    fn certificate_round_trip() {
        let l = fixtures::loops();
        let d = derive(&l, Flavor::Branching, StateId(4), StateId(0)).unwrap();
        let v = derivation_to_json(&d, "tau");
        let back = derivation_from_json(&serde_json::from_str(&v.to_string()).unwrap(), "tau").unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn bad_certificates_are_rejected_with_paths() {
        let v = json!({ "rule": "in_b", "conclusion": [0, 1], "step": { "to": 1, "label": "a" },
                         "obligations": [ { "pair": [0, 1], "via": "sideways", "sub": {} } ] });
        let e = derivation_from_json(&v, "tau").unwrap_err().to_string();
        assert!(e.starts_with("root/ob[0]"), "{e}");
        assert!(derivation_from_json(&json!({ "rule": "in_b", "conclusion": [0, 1] }), "tau").is_err());
    }

    #[test]
    fn candidate_relation_is_symmetrised() {
        let r = relation_from_json("[[0, 2]]", 3).unwrap();
        assert!(r.contains(StateId(2), StateId(0)));
        assert!(relation_from_json("[[0, 3]]", 3).is_err());
    }

    #[test]
    fn coalgebra_round_trip() {
        let c = fixtures::da();
        assert_eq!(coalgebra_from_json(&coalgebra_to_json(&c)).unwrap(), c);
    }
}
