//! JSON function descriptions.
//!
//! Leaves: `{"type": "gaussian", "cov": [[...]]}` (or `"n"` for the standard
//! Gaussian), `{"type": "lp_exp", "p": p, "scale": a, "n": n}`,
//! `{"type": "indicator", "body": <body>}` and
//! `{"type": "shift_center", "inner": <function>, "shift": [...]}`.
//!
//! Wrappers: `{"op": "delta_out" | "delta_in" | "delta_zero", "function": {...}}`
//! and `{"op": "project" | "restrict", "function": {...}, "basis": [[...]]}`.

use serde_json::Value;

use crate::body::json::{at, dimension, err, field, number, parse_at, rows, square_matrix, vector};
use crate::error::Result;
use crate::functional::{DeltaKind, LogConcaveFn};
use crate::numerics::linalg::Subspace;

pub fn parse_function(v: &Value, default_n: Option<usize>) -> Result<LogConcaveFn> {
    parse(v, "", default_n)
}

pub fn parse_function_str(s: &str, default_n: Option<usize>) -> Result<LogConcaveFn> {
    let v: Value = serde_json::from_str(s).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    parse_function(&v, default_n)
}

fn parse(v: &Value, ptr: &str, default_n: Option<usize>) -> Result<LogConcaveFn> {
    if !v.is_object() {
        return Err(err(ptr, "expected an object"));
    }
    if let Some(op) = v.get("op") {
        let op = op.as_str().ok_or_else(|| err(&format!("{ptr}/op"), "expected a string"))?;
        let f = parse(field(v, ptr, "function")?, &format!("{ptr}/function"), default_n)?;
        return match op {
            "delta_out" => at(ptr, f.delta(DeltaKind::Out)),
            "delta_in" => at(ptr, f.delta(DeltaKind::In)),
            "delta_zero" => at(ptr, f.delta(DeltaKind::Zero)),
            "project" | "restrict" => {
                let bptr = format!("{ptr}/basis");
                let span = rows(field(v, ptr, "basis")?, &bptr)?;
                if span[0].len() != f.dim() {
                    return Err(err(&bptr, format!("basis vectors must have length {}", f.dim())));
                }
                let h = at(&bptr, Subspace::spanned_by(&span))?;
                if op == "project" {
                    at(ptr, f.project(&h))
                } else {
                    at(ptr, f.restrict(&h))
                }
            }
            other => Err(err(&format!("{ptr}/op"), format!("unknown op \"{other}\""))),
        };
    }
    let ty = field(v, ptr, "type")?.as_str().ok_or_else(|| err(&format!("{ptr}/type"), "expected a string"))?;
    match ty {
        "gaussian" => match v.get("cov") {
            Some(c) => {
                let m = square_matrix(c, &format!("{ptr}/cov"), None)?;
                at(ptr, LogConcaveFn::gaussian(m))
            }
            None => at(ptr, LogConcaveFn::standard_gaussian(dimension(v, ptr, default_n)?)),
        },
        "lp_exp" => {
            let p = number(field(v, ptr, "p")?, &format!("{ptr}/p"))?;
            let scale = match v.get("scale") {
                Some(s) => number(s, &format!("{ptr}/scale"))?,
                None => 1.0,
            };
            at(ptr, LogConcaveFn::lp_exp(dimension(v, ptr, default_n)?, p, scale))
        }
        "indicator" => {
            let body = parse_at(field(v, ptr, "body")?, &format!("{ptr}/body"), default_n)?;
            Ok(LogConcaveFn::indicator(body))
        }
        "shift_center" => {
            let inner = parse(field(v, ptr, "inner")?, &format!("{ptr}/inner"), default_n)?;
            let sptr = format!("{ptr}/shift");
            let s = vector(field(v, ptr, "shift")?, &sptr)?;
            if s.len() != inner.dim() {
                return Err(err(&sptr, format!("expected length {}, got {}", inner.dim(), s.len())));
            }
            at(ptr, LogConcaveFn::shift_center(&inner, s))
        }
        other => Err(err(&format!("{ptr}/type"), format!("unknown function type \"{other}\""))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn parses_nested_description() {
        let f = parse_function_str(
            r#"{"op": "delta_out", "function": {"type": "shift_center", "inner": {"type": "lp_exp", "p": 3, "n": 2}, "shift": [0.3, -0.1]}}"#,
            None,
        )
        .unwrap();
        assert_eq!(f.dim(), 2);
        assert!(f.is_symmetric());
        assert!(f.aux_dim() > 0);
        let g = parse_function_str(r#"{"type": "indicator", "body": {"type": "cube"}}"#, Some(3)).unwrap();
        assert!(g.indicator_body().is_some());
        let h = parse_function_str(r#"{"type": "gaussian", "cov": [[2, 0], [0, 1]]}"#, None).unwrap();
        assert!((h.phi(&[2.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors_carry_pointers() {
        let e = parse_function_str(r#"{"op": "delta_in", "function": {"type": "lp_exp", "n": 2}}"#, None).unwrap_err();
        match e {
            Error::Parse { pointer, .. } => assert_eq!(pointer, "/function"),
            other => panic!("{other:?}"),
        }
        let e = parse_function_str(r#"{"type": "shift_center", "inner": {"type": "lp_exp", "p": 2, "n": 2}, "shift": [1]}"#, None)
            .unwrap_err();
        assert!(matches!(e, Error::Parse { ref pointer, .. } if pointer == "/shift"), "{e:?}");
    }
}
