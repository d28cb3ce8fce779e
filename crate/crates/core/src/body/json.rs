//! JSON body descriptions.
//!
//! Leaves: `{"type": "ball", "radius": r}`, `"vpolytope"` (`vertices`),
//! `"hpolytope"` (`facets`, rows `a` of `a·x ≤ 1`), `"lp_ball"` (`p`,
//! `scale`), `"cube"` (`half`), `"cross_polytope"` (`radius`), `"ellipsoid"`
//! (`shape`), `"simplex"`, `"random_vpolytope"` (`m`, `seed`). Leaves without
//! intrinsic dimension take `"n"` or the caller's default dimension.
//!
//! Wrappers: `{"op": "...", "body": {...}}` with `op` one of `polar`,
//! `outer`, `inner`, `difference`, `section`/`project` (`basis`: list of
//! spanning vectors), `linear` (`matrix`, row-major), `translate` (`shift`),
//! `scale` (`factor`).

use serde_json::Value;

use crate::body::{simplex, ConvexBody};
use crate::error::{Error, Result};
use crate::numerics::linalg::{Matrix, Subspace};
use crate::numerics::rng::RngStream;

pub(crate) fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Parse { pointer: if pointer.is_empty() { "/".into() } else { pointer.into() }, message: message.into() }
}

/// Re-anchors errors raised by constructors at the node that triggered them.
pub(crate) fn at<T>(pointer: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => err(pointer, other.to_string()),
    })
}

pub(crate) fn field<'a>(v: &'a Value, ptr: &str, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(ptr, format!("missing field \"{key}\"")))
}

pub(crate) fn number(v: &Value, ptr: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| err(ptr, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(err(ptr, "non-finite number"))
    }
}

pub(crate) fn integer(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| err(ptr, "expected a non-negative integer"))
}

pub(crate) fn vector(v: &Value, ptr: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| err(ptr, "expected an array of numbers"))?;
    arr.iter().enumerate().map(|(i, x)| number(x, &format!("{ptr}/{i}"))).collect()
}

pub(crate) fn rows(v: &Value, ptr: &str) -> Result<Vec<Vec<f64>>> {
    let arr = v.as_array().ok_or_else(|| err(ptr, "expected an array of arrays"))?;
    let out: Vec<Vec<f64>> = arr.iter().enumerate().map(|(i, r)| vector(r, &format!("{ptr}/{i}"))).collect::<Result<_>>()?;
    if let Some(first) = out.first() {
        for (i, r) in out.iter().enumerate() {
            if r.len() != first.len() {
                return Err(err(&format!("{ptr}/{i}"), format!("expected length {}, got {}", first.len(), r.len())));
            }
        }
    } else {
        return Err(err(ptr, "empty list"));
    }
    Ok(out)
}

pub(crate) fn square_matrix(v: &Value, ptr: &str, n: Option<usize>) -> Result<Matrix> {
    let r = rows(v, ptr)?;
    let m = r.len();
    if r[0].len() != m {
        return Err(err(ptr, format!("expected a square matrix, got {}x{}", m, r[0].len())));
    }
    if let Some(n) = n {
        if m != n {
            return Err(err(ptr, format!("expected a {n}x{n} matrix, got {m}x{m}")));
        }
    }
    Ok(Matrix::from_fn(m, m, |i, j| r[i][j]))
}

pub(crate) fn dimension(v: &Value, ptr: &str, default: Option<usize>) -> Result<usize> {
    match v.get("n") {
        Some(n) => {
            let n = integer(n, &format!("{ptr}/n"))? as usize;
            if n == 0 {
                return Err(err(&format!("{ptr}/n"), "dimension must be positive"));
            }
            Ok(n)
        }
        None => default.ok_or_else(|| err(ptr, "dimension \"n\" is required here")),
    }
}

/// Parses a body description; `default_n` supplies the dimension of leaves that omit `"n"`.
pub fn parse_body(v: &Value, default_n: Option<usize>) -> Result<ConvexBody> {
    parse_at(v, "", default_n)
}

pub fn parse_body_str(s: &str, default_n: Option<usize>) -> Result<ConvexBody> {
    let v: Value = serde_json::from_str(s).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    parse_body(&v, default_n)
}

pub(crate) fn parse_at(v: &Value, ptr: &str, default_n: Option<usize>) -> Result<ConvexBody> {
    if !v.is_object() {
        return Err(err(ptr, "expected an object"));
    }
    if let Some(op) = v.get("op") {
        let op = op.as_str().ok_or_else(|| err(&format!("{ptr}/op"), "expected a string"))?;
        let inner_ptr = format!("{ptr}/body");
        let body = parse_at(field(v, ptr, "body")?, &inner_ptr, default_n)?;
        let n = body.dim();
        return match op {
            "polar" => at(ptr, body.polar()),
            "outer" => at(ptr, body.outer_reg()),
            "inner" => at(ptr, body.inner_reg()),
            "difference" => at(ptr, body.difference_body()),
            "section" | "project" => {
                let bptr = format!("{ptr}/basis");
                let span = rows(field(v, ptr, "basis")?, &bptr)?;
                if span[0].len() != n {
                    return Err(err(&bptr, format!("basis vectors must have length {n}")));
                }
                let h = at(&bptr, Subspace::spanned_by(&span))?;
                if op == "section" {
                    at(ptr, body.section(&h))
                } else {
                    at(ptr, body.project(&h))
                }
            }
            "linear" => {
                let mptr = format!("{ptr}/matrix");
                let m = square_matrix(field(v, ptr, "matrix")?, &mptr, Some(n))?;
                at(ptr, body.linear_image(&m))
            }
            "translate" => {
                let sptr = format!("{ptr}/shift");
                let z = vector(field(v, ptr, "shift")?, &sptr)?;
                if z.len() != n {
                    return Err(err(&sptr, format!("expected length {n}, got {}", z.len())));
                }
                at(ptr, body.translate(&z))
            }
            "scale" => {
                let f = number(field(v, ptr, "factor")?, &format!("{ptr}/factor"))?;
                at(ptr, body.scale(f))
            }
            other => Err(err(&format!("{ptr}/op"), format!("unknown op \"{other}\""))),
        };
    }
    let ty = field(v, ptr, "type")?.as_str().ok_or_else(|| err(&format!("{ptr}/type"), "expected a string"))?;
    let num = |key: &str| -> Result<f64> { number(field(v, ptr, key)?, &format!("{ptr}/{key}")) };
    let num_or = |key: &str, d: f64| -> Result<f64> {
        match v.get(key) {
            Some(x) => number(x, &format!("{ptr}/{key}")),
            None => Ok(d),
        }
    };
    let check_n = |n: usize, got: usize, key: &str| -> Result<()> {
        if let Some(expected) = v.get("n") {
            let e = integer(expected, &format!("{ptr}/n"))? as usize;
            if e != n {
                return Err(err(&format!("{ptr}/{key}"), format!("declared n = {e} but data has dimension {got}")));
            }
        }
        Ok(())
    };
    match ty {
        "ball" => at(ptr, ConvexBody::ball(dimension(v, ptr, default_n)?, num_or("radius", 1.0)?)),
        "cube" => at(ptr, ConvexBody::cube(dimension(v, ptr, default_n)?, num_or("half", 1.0)?)),
        "cross_polytope" => at(ptr, ConvexBody::cross_polytope(dimension(v, ptr, default_n)?, num_or("radius", 1.0)?)),
        "lp_ball" => at(ptr, ConvexBody::lp_ball(dimension(v, ptr, default_n)?, num("p")?, num_or("scale", 1.0)?)),
        "simplex" => at(ptr, simplex::regular_simplex(dimension(v, ptr, default_n)?)),
        "vpolytope" => {
            let key = format!("{ptr}/vertices");
            let vs = rows(field(v, ptr, "vertices")?, &key)?;
            check_n(vs[0].len(), vs[0].len(), "vertices")?;
            at(ptr, ConvexBody::vpolytope(vs))
        }
        "hpolytope" => {
            let key = format!("{ptr}/facets");
            let fs = rows(field(v, ptr, "facets")?, &key)?;
            check_n(fs[0].len(), fs[0].len(), "facets")?;
            at(ptr, ConvexBody::hpolytope(fs))
        }
        "ellipsoid" => {
            let key = format!("{ptr}/shape");
            let s = square_matrix(field(v, ptr, "shape")?, &key, None)?;
            check_n(s.nrows(), s.nrows(), "shape")?;
            at(ptr, ConvexBody::ellipsoid(s))
        }
        "random_vpolytope" => {
            let n = dimension(v, ptr, default_n)?;
            let m = match v.get("m") {
                Some(m) => integer(m, &format!("{ptr}/m"))? as usize,
                None => 3 * n,
            };
            let seed = integer(field(v, ptr, "seed")?, &format!("{ptr}/seed"))?;
            let mut rng = RngStream::new(seed).child("random_vpolytope").rng();
            at(ptr, ConvexBody::random_vpolytope(&mut rng, n, m))
        }
        other => Err(err(&format!("{ptr}/type"), format!("unknown body type \"{other}\""))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_description() {
        let b = parse_body_str(r#"{"op":"polar","body":{"type":"cube","n":3,"half":2.0}}"#, None).unwrap();
        assert_eq!(b.dim(), 3);
        assert!((b.gauge(&[1.0, 0.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn default_dimension_applies_to_leaves() {
        let b = parse_body_str(r#"{"type":"simplex"}"#, Some(4)).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(parse_body_str(r#"{"type":"simplex"}"#, None).is_err());
    }

    #[test]
    fn errors_carry_json_pointers() {
        let e = parse_body_str(r#"{"op":"outer","body":{"type":"vpolytope","vertices":[[1,0],[0,1,2]]}}"#, None)
            .unwrap_err();
        match e {
            Error::Parse { pointer, .. } => assert_eq!(pointer, "/body/vertices/1"),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_body_str(r#"{"op":"translate","shift":[5,0],"body":{"type":"ball","n":2}}"#, None).unwrap_err();
        assert!(matches!(e, Error::Parse { ref pointer, .. } if pointer == "/"));
        let e = parse_body_str(r#"{"type":"vpolytope","vertices":[[1,0],[2,0],[3,0]]}"#, None).unwrap_err();
        assert!(matches!(e, Error::Parse { ref message, .. } if message.contains("degenerate")));
    }
}
