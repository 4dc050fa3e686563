//! Structured JSON export of the constructed objects, and import of the
//! exported rule table.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Monomial, PbwWord, RewriteSystem, RootLetter, StraighteningRule};
use crate::borel::{build_aq, build_uqb, Uqb};
use crate::cyclotomic::{CycScalar, CyclotomicField};
use crate::double::{build_double, identify_generators, DoubleElement, DrinfeldDouble};
use crate::error::{Error, Result};
use crate::idempotent::IdempotentAlgebra;
use crate::lie::{validate_params, CartanType};
use crate::twist::{build_twist_j, closed_form_phi, DiagonalTensor};

pub const EXPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportTarget {
    Uqb,
    Aq,
    J,
    Phi,
    DoubleGenerators,
}

impl std::str::FromStr for ExportTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uqb" => Ok(ExportTarget::Uqb),
            "Aq" | "aq" => Ok(ExportTarget::Aq),
            "J" | "j" => Ok(ExportTarget::J),
            "Phi" | "phi" => Ok(ExportTarget::Phi),
            "double-generators" => Ok(ExportTarget::DoubleGenerators),
            other => Err(Error::Unsupported(format!(
                "unknown export target '{other}' (expected uqb, Aq, J, Phi, double-generators)"
            ))),
        }
    }
}

impl ExportTarget {
    pub fn name(&self) -> &'static str {
        match self {
            ExportTarget::Uqb => "uqb",
            ExportTarget::Aq => "Aq",
            ExportTarget::J => "J",
            ExportTarget::Phi => "Phi",
            ExportTarget::DoubleGenerators => "double-generators",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportDocument {
    pub schema_version: u32,
    pub parameters: Value,
    pub entries: Vec<Value>,
}

/// `{order, coeffs: [[num, den], …]}` over the power basis of length φ(m).
/// Integers are written as decimal strings.
pub fn scalar_to_json(c: &CycScalar) -> Value {
    let coeffs: Vec<Value> = c
        .coeffs()
        .iter()
        .map(|r| json!([r.numer().to_string(), r.denom().to_string()]))
        .collect();
    json!({ "order": c.order(), "coeffs": coeffs })
}

pub fn scalar_from_json(v: &Value) -> Result<CycScalar> {
    let bad = |what: &str| Error::Document(format!("malformed scalar: {what}"));
    let order = v["order"].as_u64().ok_or_else(|| bad("order"))? as u32;
    let field = CyclotomicField::get(order);
    let coeffs = v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))?;
    if coeffs.len() != field.degree() {
        return Err(bad("coefficient count"));
    }
    let parse = |x: &Value| -> Result<BigInt> {
        x.as_str()
            .ok_or_else(|| bad("integer"))?
            .parse::<BigInt>()
            .map_err(|_| bad("integer"))
    };
    let mut out = Vec::with_capacity(coeffs.len());
    for pair in coeffs {
        let num = parse(&pair[0])?;
        let den = parse(&pair[1])?;
        if den == BigInt::from(0) {
            return Err(bad("zero denominator"));
        }
        out.push(BigRational::new(num, den));
    }
    Ok(field.from_coeffs(out))
}

pub fn monomial_to_json(b: &Monomial) -> Value {
    json!({ "group_exp": b.group_exp(), "pbw_exp": b.pbw_exp() })
}

pub fn monomial_from_json(v: &Value) -> Result<Monomial> {
    let list = |k: &str| -> Result<Vec<u32>> {
        v[k].as_array()
            .ok_or_else(|| Error::Document(format!("missing {k}")))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| Error::Document(format!("bad {k}"))))
            .collect()
    };
    Ok(Monomial::new(&list("group_exp")?, &list("pbw_exp")?))
}

fn word_to_json(w: &PbwWord, letters: usize) -> Value {
    json!(w[..letters].to_vec())
}

/// The letters and straightening rules of u_q(b).
fn uqb_entries(uqb: &Uqb) -> Vec<Value> {
    let rw = uqb.rewrite();
    let k = rw.letters().len();
    let mut out = Vec::new();
    for (i, l) in rw.letters().iter().enumerate() {
        out.push(json!({
            "kind": "letter",
            "index": i,
            "name": l.name,
            "weight": l.weight,
            "nilpotency": l.bound,
        }));
    }
    for r in rw.rules() {
        let rhs: Vec<Value> = r
            .rhs
            .iter()
            .map(|(w, c)| json!({ "pbw_exp": word_to_json(w, k), "scalar": scalar_to_json(c) }))
            .collect();
        out.push(json!({ "kind": "rule", "later": r.later, "earlier": r.earlier, "rhs": rhs }));
    }
    out
}

fn diagonal_entries(d: &DiagonalTensor) -> Vec<Value> {
    let s = d.space.size();
    let field = CyclotomicField::get(d.order);
    d.exps
        .iter()
        .enumerate()
        .map(|(idx, &e)| {
            let mut rest = idx;
            let mut labels = Vec::with_capacity(d.arity);
            for _ in 0..d.arity {
                labels.push(d.space.label(rest % s));
                rest /= s;
            }
            json!({ "labels": labels, "scalar": scalar_to_json(&field.zeta_pow(e as i64)) })
        })
        .collect()
}

fn double_element_entries(d: &DrinfeldDouble, x: &DoubleElement) -> Vec<Value> {
    x.sorted_terms()
        .iter()
        .map(|(k, c)| {
            let (u, h) = d.key_monomials(k);
            json!({ "dual": monomial_to_json(&u), "elem": monomial_to_json(&h), "scalar": scalar_to_json(c) })
        })
        .collect()
}

pub fn export(t: CartanType, n: i64, what: ExportTarget) -> Result<ExportDocument> {
    validate_params(t, n).map_err(Error::InvalidParameters)?;
    let uqb = build_uqb(t, n)?;
    let mut parameters = json!({ "type": t.to_string(), "n": n, "q_order": uqb.m(), "object": what.name() });
    let entries = match what {
        ExportTarget::Uqb => {
            parameters["dimension"] = json!(uqb.dimension().to_string());
            uqb_entries(&uqb)
        }
        ExportTarget::Aq => {
            let (aq, _) = build_aq(&uqb, 0, 0).map_err(|f| Error::Unsupported(f.detail))?;
            aq.iter().map(|b| monomial_to_json(&b)).collect()
        }
        ExportTarget::J => {
            parameters["basis"] = json!("primitive idempotents 1_z, z in (Z/m)^r");
            diagonal_entries(&build_twist_j(&uqb).diag)
        }
        ExportTarget::Phi => {
            parameters["basis"] = json!("idempotents of A_q, labels in (Z/n)^r");
            let bold = IdempotentAlgebra::new(uqb.clone(), uqb.n());
            diagonal_entries(&closed_form_phi(&uqb, &bold).diag)
        }
        ExportTarget::DoubleGenerators => {
            let d = build_double(&uqb)?;
            let g = identify_generators(&d);
            parameters["basis"] = json!("dual basis functional δ_dual ⊗ monomial elem");
            [("e", &g.e), ("f", &g.f), ("K", &g.k), ("K'", &g.k_prime)]
                .iter()
                .map(|(name, x)| json!({ "generator": name, "terms": double_element_entries(&d, x) }))
                .collect()
        }
    };
    Ok(ExportDocument {
        schema_version: EXPORT_SCHEMA_VERSION,
        parameters,
        entries,
    })
}

impl ExportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Rebuilds u_q(b) from an exported `uqb` document.
pub fn import_uqb(doc: &Value) -> Result<Arc<Uqb>> {
    let bad = |what: &str| Error::Document(format!("malformed uqb document: {what}"));
    let params = &doc["parameters"];
    let t: CartanType = params["type"].as_str().ok_or_else(|| bad("type"))?.parse().map_err(|_| bad("type"))?;
    let n = params["n"].as_u64().ok_or_else(|| bad("n"))? as u32;
    let m = n * n;
    let field = CyclotomicField::get(m);
    let entries = doc["entries"].as_array().ok_or_else(|| bad("entries"))?;
    let mut letters = Vec::new();
    let mut rules = Vec::new();
    for e in entries {
        match e["kind"].as_str() {
            Some("letter") => letters.push(RootLetter {
                name: e["name"].as_str().ok_or_else(|| bad("letter name"))?.to_string(),
                weight: e["weight"]
                    .as_array()
                    .ok_or_else(|| bad("weight"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| bad("weight")))
                    .collect::<Result<_>>()?,
                bound: e["nilpotency"].as_u64().ok_or_else(|| bad("nilpotency"))? as u16,
            }),
            Some("rule") => {
                let mut rhs = Vec::new();
                for term in e["rhs"].as_array().ok_or_else(|| bad("rhs"))? {
                    let mut w: PbwWord = [0; 3];
                    for (i, x) in term["pbw_exp"].as_array().ok_or_else(|| bad("word"))?.iter().enumerate() {
                        *w.get_mut(i).ok_or_else(|| bad("word length"))? = x.as_u64().ok_or_else(|| bad("word"))? as u16;
                    }
                    rhs.push((w, scalar_from_json(&term["scalar"])?));
                }
                rules.push(StraighteningRule {
                    later: e["later"].as_u64().ok_or_else(|| bad("later"))? as usize,
                    earlier: e["earlier"].as_u64().ok_or_else(|| bad("earlier"))? as usize,
                    rhs,
                });
            }
            _ => return Err(bad("entry kind")),
        }
    }
    let rank = crate::lie::lie_datum(t).rank;
    let rewrite = RewriteSystem::new(field, rank, m as u16, letters, rules)?;
    Ok(Arc::new(Uqb::with_rewrite(t, n, rewrite)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::borel::seeded_choice;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_round_trip() {
        let f = CyclotomicField::get(9);
        for k in 0..9 {
            let c = &f.zeta_pow(k) + &f.from_int(-3);
            assert_eq!(scalar_from_json(&scalar_to_json(&c)).unwrap(), c);
        }
        let z = f.zeta_pow(3);
        let v = scalar_to_json(&z);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn export_counts_a1() {
        assert_eq!(export(CartanType::A1, 3, ExportTarget::Aq).unwrap().entries.len(), 27);
        assert_eq!(export(CartanType::A1, 3, ExportTarget::J).unwrap().entries.len(), 81);
        let phi = export(CartanType::A1, 3, ExportTarget::Phi).unwrap();
        assert_eq!(phi.entries.len(), 27);
        let f = CyclotomicField::get(9);
        for e in &phi.entries {
            let c = scalar_from_json(&e["scalar"]).unwrap();
            assert_eq!(c.as_zeta_power().unwrap() % 3, 0);
            assert_ne!(c, f.zero());
        }
        assert_eq!(export(CartanType::A1, 3, ExportTarget::DoubleGenerators).unwrap().entries.len(), 4);
        assert!(export(CartanType::A2, 5, ExportTarget::DoubleGenerators).is_err());
    }

    #[test]
    fn uqb_round_trip() {
        for (t, n) in [(CartanType::A1, 3), (CartanType::A2, 5)] {
            let doc: Value = serde_json::from_str(&export(t, n, ExportTarget::Uqb).unwrap().to_json()).unwrap();
            let rebuilt = import_uqb(&doc).unwrap();
            let original = build_uqb(t, n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let pool: Vec<Monomial> = (0..200).map(|_| original.random_low_degree_monomial(&mut rng, 6)).collect();
            let lefts = seeded_choice(&pool, 50, 1);
            let rights = seeded_choice(&pool, 50, 2);
            for (a, b) in lefts.iter().zip(&rights) {
                assert_eq!(rebuilt.mul_basis(a, b), original.mul_basis(a, b));
            }
        }
    }
}
