use super::finite;
use crate::{Error, Real, Result};

/// Smallest scan grid used before golden-section refinement.
pub const MIN_GRID_POINTS: usize = 256;

const MAX_GOLDEN_ITER: usize = 500;

/// Minimizes `f` on `[lo, hi]`: a uniform scan over [`MIN_GRID_POINTS`]
/// points picks the best cell, which is then refined by golden-section
/// search down to width `tol`.
pub fn minimize_scalar<T, F>(f: F, lo: T, hi: T, tol: T) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> T,
{
    minimize_scalar_with_grid(f, lo, hi, tol, MIN_GRID_POINTS)
}

/// Maximizes `f` by minimizing `-f`. Returns `(x_max, f_max)`.
pub fn maximize_scalar<T, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (x, neg) = minimize_scalar(|x| -f(x), lo, hi, tol)?;
    Ok((x, -neg))
}

/// [`minimize_scalar`] with an explicit scan size (clamped to at least
/// [`MIN_GRID_POINTS`]).
pub fn minimize_scalar_with_grid<T, F>(
    mut f: F,
    lo: T,
    hi: T,
    tol: T,
    grid_points: usize,
) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !(lo < hi) {
        return Err(Error::Usage(format!(
            "minimize_scalar requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    let n = grid_points.max(MIN_GRID_POINTS);
    let step = (hi - lo) / T::from_count(n - 1);
    let node = |i: usize| if i == n - 1 { hi } else { lo + step * T::from_count(i) };

    let mut best_i = 0;
    let mut best_f = T::infinity();
    for i in 0..n {
        let x = node(i);
        let fx = finite(x, f(x), "minimize_scalar")?;
        if fx < best_f {
            best_f = fx;
            best_i = i;
        }
    }

    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(n - 1));
    let mut best_x = node(best_i);

    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = finite(c, f(c), "minimize_scalar")?;
    let mut fd = finite(d, f(d), "minimize_scalar")?;
    for _ in 0..MAX_GOLDEN_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = finite(c, f(c), "minimize_scalar")?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = finite(d, f(d), "minimize_scalar")?;
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
    }
    Ok((best_x, best_f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parabola_vertex() {
        let (x, fx) = minimize_scalar(|x: f64| (x - 1.0).powi(2), 0.0, 3.0, 1e-10).unwrap();
        assert!((x - 1.0).abs() < 1e-9);
        assert!(fx.abs() < 1e-18);
    }

    #[test]
    fn cosine_minimum() {
        let (x, fx) = minimize_scalar(f64::cos, 0.0, 2.0 * PI, 1e-10).unwrap();
        assert!((x - PI).abs() < 1e-7);
        assert!((fx + 1.0).abs() < 1e-15);
    }

    #[test]
    fn global_minimum_beats_local_one() {
        // local minimum near 0.2, global one near 0.8
        let f = |x: f64| -(-(x - 0.2).powi(2) / 0.001).exp() - 2.0 * (-(x - 0.8).powi(2) / 0.001).exp();
        let (x, _) = minimize_scalar(f, 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.8).abs() < 1e-6);
    }

    #[test]
    fn minimum_at_boundary() {
        let (x, fx) = minimize_scalar(|x: f64| x, 2.0, 5.0, 1e-12).unwrap();
        assert!((x - 2.0).abs() < 1e-11);
        assert!((fx - 2.0).abs() < 1e-11);
    }

    #[test]
    fn maximize_negates() {
        let (x, fx) = maximize_scalar(|x: f64| x * (1.0 - x), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.5).abs() < 1e-7);
        assert!((fx - 0.25).abs() < 1e-15);
    }

    #[test]
    fn non_finite_is_domain_error() {
        let err = minimize_scalar(|x: f64| (x - 0.5).ln(), 0.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
