//! Bracketing root finder (Brent/Dekker: bisection safeguarded secant and
//! inverse quadratic steps).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than this.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            f_tol: 1e-12,
            x_tol: 1e-14,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Finds a root of `f` in `[a, b]`, given `f(a)` and `f(b)` of opposite sign
/// (or one of them zero).
pub fn brent<F>(mut f: F, a: f64, b: f64, opts: SolverOptions) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    brent_with_values(f, a, fa, b, fb, opts)
}

pub fn brent_with_values<F>(
    mut f: F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    opts: SolverOptions,
) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite function value at bracket ends: f({a})={fa}, f({b})={fb}"
        )));
    }
    if fa.abs() <= opts.f_tol {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb.abs() <= opts.f_tol {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "root not bracketed: f({a})={fa}, f({b})={fb}"
        )));
    }

    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=opts.max_iter {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if fb.abs() <= opts.f_tol || m.abs() <= tol {
            return Ok(Root { x: b, fx: fb, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::Domain(format!("non-finite function value at x={b}")));
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        trace: format!("bracket [{b}, {c}], f={fb}"),
    })
}

/// Plain bisection; used where only monotonicity is guaranteed.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo.signum() == fhi.signum() && flo != 0.0 && fhi != 0.0 {
        return Err(Error::Domain(format!(
            "root not bracketed: f({lo})={flo}, f({hi})={fhi}"
        )));
    }
    for iter in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < x_tol {
            return Ok(Root { x: mid, fx: fm, iterations: iter });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok(Root { x: mid, fx: f(mid), iterations: max_iter })
}
