//! JSON payloads for `hk4 query`.
//!
//! A degree-4 class is written as a term or a list of terms that are summed:
//!
//! ```json
//! [{"kind": "square", "a": [0, 1, ...]}, {"kind": "q", "coeff": "2/5"}]
//! ```
//!
//! Term kinds: `q`, `v0`, `product` (`a`, `b`), `square` (`a`) and `sparse`
//! (`coords`, a map `"(i,j)" -> "p/q"`). Every term takes an optional
//! rational `coeff`, default 1.

use serde::Deserialize;
use serde_json::{json, Value};

use hk4_core::bb::H2Class;
use hk4_core::h4::{sym2_embed, H4Class, H4Model};
use hk4_core::hodge::{self, PicardData, PicardSpec};
use hk4_core::linalg::parse_rat;
use hk4_core::suites::group_string;
use hk4_core::{Error, Rat, Result};

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum TermKind {
    Q {
        coeff: Option<String>,
    },
    V0 {
        coeff: Option<String>,
    },
    Product {
        a: H2Class,
        b: H2Class,
        coeff: Option<String>,
    },
    Square {
        a: H2Class,
        coeff: Option<String>,
    },
    Sparse {
        coords: H4Class,
        coeff: Option<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ClassExpr {
    One(Box<TermKind>),
    Sum(Vec<TermKind>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassPayload {
    class: ClassExpr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaPayload {
    lambda0: H2Class,
}

fn coeff(c: &Option<String>) -> Result<Rat> {
    match c {
        Some(s) => parse_rat(s),
        None => Ok(Rat::from_integer(1.into())),
    }
}

fn eval_term(t: &TermKind) -> Result<H4Class> {
    let m = H4Model::get();
    let (class, c) = match t {
        TermKind::Q { coeff: c } => (m.q(), c),
        TermKind::V0 { coeff: c } => (m.v0().clone(), c),
        TermKind::Product { a, b, coeff: c } => (sym2_embed(a, b), c),
        TermKind::Square { a, coeff: c } => (sym2_embed(a, a), c),
        TermKind::Sparse { coords, coeff: c } => (coords.clone(), c),
    };
    Ok(class.scaled(&coeff(c)?))
}

fn eval_class(e: &ClassExpr) -> Result<H4Class> {
    match e {
        ClassExpr::One(t) => eval_term(t),
        ClassExpr::Sum(ts) => ts
            .iter()
            .try_fold(H4Class::zero(), |acc, t| Ok(&acc + &eval_term(t)?)),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(payload: &str) -> Result<T> {
    serde_json::from_str(payload).map_err(|e| Error::Parse(format!("payload: {e}")))
}

/// Parse errors are reported separately from computation errors so the
/// caller can map them to distinct exit codes.
pub enum QueryError {
    Parse(String),
    Compute(String),
}

impl From<Error> for QueryError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => QueryError::Parse(m),
            other => QueryError::Compute(other.to_string()),
        }
    }
}

pub fn run(kind: &str, payload: &str) -> std::result::Result<Value, QueryError> {
    let l = H4Model::get().l();
    match kind {
        "membership" => {
            let p: ClassPayload = parse(payload)?;
            let c = eval_class(&p.class)?;
            let coords = l.lattice().coords(c.coords()).ok();
            Ok(json!({
                "class": c,
                "in_L": coords.is_some(),
                "coords": coords.map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            }))
        }
        "divisibility" => {
            let p: ClassPayload = parse(payload)?;
            let c = eval_class(&p.class)?;
            if !l.contains(&c) {
                return Err(QueryError::Compute("class is not in L".into()));
            }
            Ok(json!({
                "class": c,
                "divisibility": l.divisibility(&c)?.to_string(),
            }))
        }
        "vlambda" => {
            let p: LambdaPayload = parse(payload)?;
            let v = hodge::v_lambda0(&p.lambda0)?;
            let expected = hodge::v_lambda0_expected_basis(&p.lambda0)?;
            let exp_lat = hk4_core::Lattice::new(
                &[expected[0].coords().to_vec(), expected[1].coords().to_vec()],
                v.form().clone(),
            )?;
            let basis: Vec<H4Class> = v
                .basis_rows()
                .into_iter()
                .map(H4Class::from_coords)
                .collect::<Result<_>>()?;
            Ok(json!({
                "lambda0": p.lambda0,
                "parity": if hk4_core::bb::is_even(&p.lambda0)? { "even" } else { "odd" },
                "basis": basis,
                "expected_basis": expected,
                "matches_expected": v == exp_lat,
                "image_in_t4": group_string(&hodge::hodge_image_in_t4(&p.lambda0)?),
                "z4_quotient": group_string(&hodge::z4_quotient_bound(&p.lambda0)?),
            }))
        }
        "minimal-search" => {
            let spec: PicardSpec = parse(payload)?;
            let pd = PicardData::from_spec(&spec)?;
            let r = hodge::minimal_class_search(&pd)?;
            Ok(json!({
                "feasible": r.feasible,
                "g": r.image_generator.to_string(),
                "image_in_2Z": r.image_in_even(),
                "report": r,
            }))
        }
        other => Err(QueryError::Parse(format!(
            "unknown query kind {other:?}; expected membership, divisibility, vlambda or minimal-search"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_sum() {
        let e: ClassExpr = serde_json::from_str(
            r#"[{"kind":"q","coeff":"2/5"},{"kind":"sparse","coords":{"(0,0)":"1/2"}}]"#,
        )
        .unwrap();
        let c = eval_class(&e).unwrap();
        assert_eq!(c.get(0, 0), &parse_rat("1/2").unwrap());
    }

    #[test]
    fn unknown_term_rejected() {
        assert!(serde_json::from_str::<ClassExpr>(r#"{"kind":"cube"}"#).is_err());
    }
}
