//! One-dimensional quadrature rules.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("adaptive quadrature on [{a}, {b}] did not converge to tolerance {tol} within depth {depth}")]
    NotConverged { a: f64, b: f64, tol: f64, depth: u32 },
    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },
}

/// Adaptive Simpson integration with Richardson correction.
///
/// The corrected panel estimate is exact for polynomials of degree ≤ 5, so
/// piecewise polynomial integrands converge at the first subdivision.
pub fn adaptive_simpson<S, F>(f: F, a: S, b: S, tol: S, max_depth: u32) -> Result<S, QuadratureError>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    if a == b {
        return Ok(S::zero());
    }
    let eval = |x: S| -> Result<S, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite { at: x.as_f64() })
        }
    };
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = (a + b) * S::lit(0.5);
    let fm = eval(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&eval, a, b, fa, fm, fb, whole, tol, max_depth).map_err(|e| match e {
        QuadratureError::NotConverged { .. } => {
            QuadratureError::NotConverged { a: a.as_f64(), b: b.as_f64(), tol: tol.as_f64(), depth: max_depth }
        }
        other => other,
    })
}

#[inline]
fn simpson<S: Scalar>(a: S, b: S, fa: S, fm: S, fb: S) -> S {
    (b - a) / S::lit(6.0) * (fa + S::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<S, E>(eval: &E, a: S, b: S, fa: S, fm: S, fb: S, whole: S, tol: S, depth: u32) -> Result<S, QuadratureError>
where
    S: Scalar,
    E: Fn(S) -> Result<S, QuadratureError>,
{
    let half = S::lit(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = S::lit(15.0);
    if delta.abs() <= fifteen * tol {
        return Ok(left + right + delta / fifteen);
    }
    if depth == 0 {
        return Err(QuadratureError::NotConverged { a: a.as_f64(), b: b.as_f64(), tol: tol.as_f64(), depth: 0 });
    }
    let l = recurse(eval, a, m, fa, flm, fm, left, tol * half, depth - 1)?;
    let r = recurse(eval, m, b, fm, frm, fb, right, tol * half, depth - 1)?;
    Ok(l + r)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "at least one node");
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (pn, pn1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = n as f64 * (x * pn - pn1) / (x * x - 1.0);
    (pn, d)
}

/// Integrates `f` over `[a, b]` with an `n`-point Gauss–Legendre rule.
pub fn gauss_legendre_integrate<S, F>(f: F, a: S, b: S, rule: &[(f64, f64)]) -> S
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let half = (b - a) * S::lit(0.5);
    let mid = (a + b) * S::lit(0.5);
    rule.iter().map(|&(x, w)| S::lit(w) * f(mid + half * S::lit(x))).sum::<S>() * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_quintic() {
        let f = |x: f64| 3.0 * x.powi(5) - x.powi(2) + 1.0;
        let exact = 0.5 * 2f64.powi(6) - 8.0 / 3.0 + 2.0;
        let got = adaptive_simpson(f, 0.0, 2.0, 1e-14, 30).unwrap();
        assert!((got - exact).abs() < 1e-12, "{got} vs {exact}");
    }

    #[test]
    fn simpson_smooth_function() {
        let got = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 40).unwrap();
        assert!((got - 2.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_reports_nonconvergence() {
        let err = adaptive_simpson(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, 1e-15, 3).unwrap_err();
        assert!(matches!(err, QuadratureError::NotConverged { .. }));
    }

    #[test]
    fn simpson_reports_nonfinite() {
        let err = adaptive_simpson(|x: f64| 1.0 / x, 0.0, 1.0, 1e-8, 10).unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite { .. }));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..12 {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|r| r.1).sum();
            assert!((wsum - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let got = gauss_legendre_integrate(|x: f64| x.powi(deg as i32 - 1) * x + 1.0, 0.0, 1.0, &rule);
            let exact = 1.0 / (deg as f64 + 1.0) + 1.0;
            assert!((got - exact).abs() < 1e-13, "n={n}: {got} vs {exact}");
        }
    }
}
