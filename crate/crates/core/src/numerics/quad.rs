//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and half-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    Finite(f64),
    Infinity,
}

fn gk15<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = g(c - dx) + g(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integral of `g` over the finite interval `[a, b]` to relative tolerance `tol`.
pub fn adaptive<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, error) = gk15(g, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while total_err > tol * total.abs() && total_err > 1e-300 {
        if !total.is_finite() {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature { estimate: total, error: total_err, tolerance: tol });
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature { estimate: total, error: total_err, tolerance: tol });
        }
        let (v1, e1) = gk15(g, p.a, m);
        let (v2, e2) = gk15(g, m, p.b);
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
        // Refresh the error sum occasionally to avoid cancellation drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    if !total.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    Ok(total)
}

/// Integral of `g` over `[a, b]`, where `b` may be infinite.
///
/// Half-infinite ranges use the substitution `r = a + t / (1 - t)`. When a
/// `tail` bound is supplied (`tail(T) ≥ ∫_T^∞ |g|`), the range is truncated at
/// the first `T` whose bound is below a tenth of the requested accuracy.
pub fn quad_1d<G: Fn(f64) -> f64>(
    g: G,
    a: f64,
    b: UpperLimit,
    tol: f64,
    tail: Option<&dyn Fn(f64) -> f64>,
) -> Result<f64> {
    match b {
        UpperLimit::Finite(b) => adaptive(&g, a, b, tol),
        UpperLimit::Infinity => {
            let h = |t: f64| {
                let s = 1.0 - t;
                let v = g(a + t / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            };
            let Some(tail) = tail else {
                return adaptive(&h, 0.0, 1.0, tol);
            };
            let mut span = 1.0;
            let mut last = None;
            for _ in 0..200 {
                let t_end = span / (1.0 + span);
                let body = adaptive(&h, 0.0, t_end, tol)?;
                let bound = tail(a + span);
                if bound.is_finite() && bound <= 0.1 * tol * body.abs().max(f64::MIN_POSITIVE) {
                    return Ok(body);
                }
                if bound == 0.0 {
                    return Ok(body);
                }
                last = Some(body);
                span *= 2.0;
            }
            Err(Error::Quadrature { estimate: last.unwrap_or(f64::NAN), error: f64::INFINITY, tolerance: tol })
        }
    }
}
