use super::{finite, to_f64};
use crate::{Error, Real, Result};

const MAX_ITER: usize = 200;

/// Interval known to contain a root: `lo < hi` and `f_lo · f_hi <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> Bracket<T> {
    /// Evaluates `f` at both ends and validates the sign change.
    pub fn new<F: FnMut(T) -> T>(mut f: F, lo: T, hi: T) -> Result<Self> {
        let f_lo = finite(lo, f(lo), "bracket endpoint")?;
        let f_hi = finite(hi, f(hi), "bracket endpoint")?;
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Usage(format!(
                "bracket requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        if f_lo * f_hi > T::zero() {
            return Err(Error::Bracket {
                lo: to_f64(lo),
                hi: to_f64(hi),
                f_lo: to_f64(f_lo),
                f_hi: to_f64(f_hi),
            });
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult<T> {
    pub root: T,
    /// `f(root)`, signed.
    pub residual: T,
    pub iterations: usize,
    /// Set only when `|residual| <= tol_f`.
    pub converged: bool,
}

/// Relative step tolerance used when callers have no better choice.
pub fn default_tol_x<T: Real>() -> T {
    T::lit(1e-13).max(T::lit(4.0) * T::epsilon())
}

/// Residual tolerance used when callers have no better choice.
pub fn default_tol_f<T: Real>() -> T {
    T::lit(1e-12).max(T::lit(64.0) * T::epsilon())
}

/// Brent's method: inverse quadratic interpolation and secant steps guarded
/// by bisection, so every iterate stays inside the bracket.
///
/// Stops once `|f(x)| <= tol_f` or the bracket half-width drops below
/// `tol_x · max(1, |x|)`. In the second case `converged` reports whether
/// the residual test also holds.
pub fn find_root<T, F>(mut f: F, bracket: Bracket<T>, tol_x: T, tol_f: T) -> Result<RootResult<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);

    if bracket.f_lo == T::zero() {
        return Ok(RootResult {
            root: bracket.lo,
            residual: T::zero(),
            iterations: 0,
            converged: true,
        });
    }
    if bracket.f_hi == T::zero() {
        return Ok(RootResult {
            root: bracket.hi,
            residual: T::zero(),
            iterations: 0,
            converged: true,
        });
    }

    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=MAX_ITER {
        if (fb > T::zero() && fc > T::zero()) || (fb < T::zero() && fc < T::zero()) {
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
        let tol1 = two * T::epsilon() * b.abs() + half * tol_x * b.abs().max(T::one());
        let xm = half * (c - b);
        if fb.abs() <= tol_f || xm.abs() <= tol1 || fb == T::zero() {
            return Ok(RootResult {
                root: b,
                residual: fb,
                iterations: iter,
                converged: fb.abs() <= tol_f,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
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
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + tol1.copysign(xm);
        }
        fb = finite(b, f(b), "root finder")?;
    }

    Ok(RootResult {
        root: b,
        residual: fb,
        iterations: MAX_ITER,
        converged: fb.abs() <= tol_f,
    })
}

/// [`find_root`] on `[lo, hi]` with the default tolerances.
pub fn find_root_in<T, F>(mut f: F, lo: T, hi: T) -> Result<RootResult<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let bracket = Bracket::new(&mut f, lo, hi)?;
    find_root(f, bracket, default_tol_x(), default_tol_f())
}
