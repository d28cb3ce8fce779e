use crate::error::{Error, Result};

/// Solves `g(t) = target` for a nondecreasing `g` on `[lo, hi]`.
///
/// Uses the Illinois variant of regula falsi with bisection fallback and stops
/// once `|g(t) - target| ≤ tol · (1 + |target|)` or the bracket collapses.
pub fn root_find_increasing<G: Fn(f64) -> f64>(
    g: G,
    target: f64,
    (lo, hi): (f64, f64),
    tol: f64,
) -> Result<f64> {
    let slack = tol * (1.0 + target.abs());
    let (mut a, mut b) = (lo, hi);
    let mut fa = g(a) - target;
    let mut fb = g(b) - target;
    if !fa.is_finite() && !fb.is_finite() {
        return Err(Error::NonFinite("root-finding objective"));
    }
    if fa.abs() <= slack {
        return Ok(a);
    }
    if fb.abs() <= slack {
        return Ok(b);
    }
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::RootNotBracketed { target, lo: fa + target, hi: fb + target });
    }
    let mut side = 0i8;
    for _ in 0..400 {
        let width = b - a;
        let mut t = if fa.is_finite() && fb.is_finite() && fb > fa {
            (a * fb - b * fa) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let ft = g(t) - target;
        if ft.abs() <= slack || b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            return Ok(t);
        }
        if ft < 0.0 {
            a = t;
            fa = ft;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = t;
            fb = ft;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        // Force a bisection whenever the bracket failed to halve.
        if b - a > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = g(m) - target;
            if fm.abs() <= slack {
                return Ok(m);
            }
            if fm < 0.0 {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    Ok(0.5 * (a + b))
}

/// Doubles `hi` until `g(hi) ≥ target`, giving up after `max_doublings`.
pub fn expand_upper<G: Fn(f64) -> f64>(g: &G, target: f64, mut hi: f64, max_doublings: usize) -> Result<f64> {
    for _ in 0..max_doublings {
        if g(hi) >= target {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::RootNotBracketed { target, lo: f64::NAN, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let t = root_find_increasing(|x| x * x * x, 2.0, (0.0, 2.0), 1e-12).unwrap();
        assert!((t - 2f64.cbrt()).abs() < 1e-11);
    }

    #[test]
    fn flat_then_steep() {
        let g = |x: f64| if x < 0.9 { 0.0 } else { 1e6 * (x - 0.9) };
        let t = root_find_increasing(g, 1.0, (0.0, 1.0), 1e-12).unwrap();
        assert!((g(t) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unbracketed_target_fails() {
        assert!(matches!(
            root_find_increasing(|x| x, 5.0, (0.0, 1.0), 1e-10),
            Err(Error::RootNotBracketed { .. })
        ));
    }
}
