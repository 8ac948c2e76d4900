//! Scalar root finding and minimization on positive brackets.

use crate::error::{Error, Result};

/// A located root with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

const MAX_ITER: usize = 200;

/// Brent's method on a bracket `[low, high]` whose endpoints have opposite
/// signs. Converges when the bracket width falls below `xtol` (absolute).
pub fn brent<F>(mut f: F, low: f64, high: f64, xtol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (low, high);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
            bracket: (low, high),
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
            bracket: (low, high),
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure { low, high });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(Root {
                x: b,
                residual: fb,
                iterations: iter,
                bracket: (low, high),
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Optimization("Brent iteration limit reached"))
}

/// Widens `[low, high]` geometrically (low / factor, high * factor) until
/// `f` changes sign, trying at most `max_expansions` times.
pub fn expand_positive_bracket<F>(
    mut f: F,
    mut low: f64,
    mut high: f64,
    factor: f64,
    max_expansions: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    for k in 0..=max_expansions {
        let (fl, fh) = (f(low), f(high));
        if fl.is_finite() && fh.is_finite() && fl.signum() != fh.signum() {
            return Ok((low, high));
        }
        if k < max_expansions {
            low /= factor;
            high *= factor;
        }
    }
    Err(Error::BracketFailure { low, high })
}

/// Golden-section minimization of a unimodal function on `[low, high]`,
/// with the search carried out in log coordinates since the domain is
/// positive and spans decades.
pub fn golden_min_positive<F>(mut f: F, low: f64, high: f64, xtol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (low.ln(), high.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c.exp()), f(d.exp()));
    let mut iterations = 0;
    while (b.exp() - a.exp()).abs() > xtol {
        iterations += 1;
        if iterations > 10 * MAX_ITER {
            return Err(Error::Optimization(
                "golden-section iteration limit reached",
            ));
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp());
        }
    }
    let x = (0.5 * (a + b)).exp();
    Ok(Root {
        x,
        residual: f(x),
        iterations,
        bracket: (low, high),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt_two() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
        assert!(r.iterations < 20);
    }

    #[test]
    fn brent_rejects_same_sign() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-10),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn brent_on_steep_function() {
        let r = brent(|x: f64| (10.0 * (x - 3.0)).tanh(), 0.0, 100.0, 1e-12).unwrap();
        assert!((r.x - 3.0).abs() < 1e-11);
    }

    #[test]
    fn bracket_expansion() {
        let (lo, hi) = expand_positive_bracket(|x| 500.0 - x, 1.0, 2.0, 10.0, 3).unwrap();
        assert!(lo < 500.0 && hi > 500.0);
        assert!(expand_positive_bracket(|x| 1e9 - x, 1.0, 2.0, 10.0, 3).is_err());
    }

    #[test]
    fn golden_section_minimum() {
        let r = golden_min_positive(|x| (x.ln() - 1.0).powi(2), 0.01, 100.0, 1e-10).unwrap();
        assert!((r.x - std::f64::consts::E).abs() < 1e-8);
    }
}
