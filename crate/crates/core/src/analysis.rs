//! Strain regions of hyperbolicity (`P' > 0`) and genuine nonlinearity
//! (`P'' < 0`), and the parameter thresholds that delimit them.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::constitutive::{stress, ModelKind, ModelSpec, StrainPoint};
use crate::numerics::{
    find_root, lambert_w0, maximize_scalar, minimize_scalar_with_grid, Bracket,
};
use crate::{Error, Real, Result};

/// Uniform scan points used by [`scan_regions`].
pub const DEFAULT_GRID_POINTS: usize = 4096;

const GEOMETRIC_POINTS: usize = 512;

/// Sign-definite strain intervals of `P'` and `P''` over a scan range, plus
/// named threshold values of the law.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport<T> {
    pub model: ModelSpec<T>,
    /// Maximal intervals where `P' > 0`.
    pub hyperbolic_intervals: Vec<(T, T)>,
    /// Maximal intervals where `P'' < 0`.
    pub gnl_intervals: Vec<(T, T)>,
    pub scan_range: (T, T),
    pub notes: Vec<(String, T)>,
}

impl<T: Real> RegionReport<T> {
    pub fn threshold(&self, name: &str) -> Option<T> {
        self.notes.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// True when a single hyperbolic interval spans the whole scan range.
    pub fn hyperbolic_everywhere(&self) -> bool {
        covers(&self.hyperbolic_intervals, self.scan_range)
    }

    /// True when a single genuinely nonlinear interval spans the scan range.
    pub fn gnl_everywhere(&self) -> bool {
        covers(&self.gnl_intervals, self.scan_range)
    }
}

fn covers<T: Real>(intervals: &[(T, T)], range: (T, T)) -> bool {
    matches!(intervals, [(lo, hi)] if *lo == range.0 && *hi == range.1)
}

struct Thresholds<'a, T>(&'a [(String, T)]);

impl<T: Serialize> Serialize for Thresholds<'_, T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, value) in self.0 {
            map.serialize_entry(name, value)?;
        }
        map.end()
    }
}

impl<T: Serialize> Serialize for RegionReport<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RegionReport", 3)?;
        st.serialize_field("hyperbolic", &self.hyperbolic_intervals)?;
        st.serialize_field("gnl", &self.gnl_intervals)?;
        st.serialize_field("thresholds", &Thresholds(&self.notes))?;
        st.end()
    }
}

/// Default scan range `(-1 + 1e-6, 10)`.
pub fn default_scan_range<T: Real>() -> (T, T) {
    (T::lit(-1.0 + 1e-6), T::lit(10.0))
}

/// Scans `P'` and `P''` on `[gamma_lo, gamma_hi]` and returns their
/// sign-definite intervals with polished endpoints.
pub fn scan_regions<T: Real>(model: &ModelSpec<T>, gamma_lo: T, gamma_hi: T) -> Result<RegionReport<T>> {
    scan_regions_with_grid(model, gamma_lo, gamma_hi, DEFAULT_GRID_POINTS)
}

/// [`scan_regions`] with an explicit uniform grid size (at least
/// [`DEFAULT_GRID_POINTS`]).
pub fn scan_regions_with_grid<T: Real>(
    model: &ModelSpec<T>,
    gamma_lo: T,
    gamma_hi: T,
    grid_points: usize,
) -> Result<RegionReport<T>> {
    if !(gamma_lo > -T::one() && gamma_lo < gamma_hi && gamma_hi.is_finite()) {
        return Err(Error::Usage(format!(
            "scan range must satisfy -1 < lo < hi < inf, got ({gamma_lo}, {gamma_hi})"
        )));
    }
    let grid = scan_grid(gamma_lo, gamma_hi, grid_points.max(DEFAULT_GRID_POINTS));
    let dp = |g: T| stress(model, StrainPoint::new(g).expect("grid inside domain")).dp;
    let d2p = |g: T| stress(model, StrainPoint::new(g).expect("grid inside domain")).d2p;

    let hyperbolic = sign_intervals(&grid, dp, true)?;
    let gnl = sign_intervals(&grid, d2p, false)?;

    Ok(RegionReport {
        model: *model,
        hyperbolic_intervals: hyperbolic,
        gnl_intervals: gnl,
        scan_range: (gamma_lo, gamma_hi),
        notes: thresholds_for(model),
    })
}

fn scan_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_count(n - 1);
    let mut grid: Vec<T> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * T::from_count(i) })
        .collect();

    // geometric refinement of the distance to -1 over the first cell decade
    let d_lo = lo + T::one();
    let d_hi = (hi + T::one()).min(d_lo * T::lit(1e3)).min(d_lo + T::lit(0.1));
    if d_hi > d_lo {
        let ratio = (d_hi / d_lo).ln() / T::from_count(GEOMETRIC_POINTS);
        grid.extend((1..GEOMETRIC_POINTS).map(|k| d_lo * (ratio * T::from_count(k)).exp() - T::one()));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

/// Maximal intervals of `grid` range where `h > 0` (`positive`) or `h < 0`.
fn sign_intervals<T: Real, F: Fn(T) -> T>(grid: &[T], h: F, positive: bool) -> Result<Vec<(T, T)>> {
    let inside = |v: T| if positive { v > T::zero() } else { v < T::zero() };
    let values: Vec<T> = grid.iter().map(|&g| h(g)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite derivative at Γ = {}", grid[i])));
    }
    let polish = |i: usize| -> Result<T> {
        let (a, b) = (grid[i - 1], grid[i]);
        if values[i] == T::zero() {
            return Ok(b);
        }
        if values[i - 1] == T::zero() {
            return Ok(a);
        }
        let br = Bracket::from_values(a, b, values[i - 1], values[i])?;
        Ok(find_root(&h, br, T::epsilon(), T::zero())?.root)
    };

    let mut out = Vec::new();
    let mut start = if inside(values[0]) { Some(grid[0]) } else { None };
    for (i, &value) in values.iter().enumerate().skip(1) {
        match (start, inside(value)) {
            (Some(s), false) => {
                out.push((s, polish(i)?));
                start = None;
            }
            (None, true) => start = Some(polish(i)?),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, grid[grid.len() - 1]));
    }
    Ok(out)
}

fn thresholds_for<T: Real>(model: &ModelSpec<T>) -> Vec<(String, T)> {
    let mut notes = Vec::new();
    let mut push = |name: &str, v: Result<T>| {
        if let Ok(v) = v {
            notes.push((name.to_string(), v));
        }
    };
    match model.kind() {
        ModelKind::StVenantKirchhoff => push("hyperbolic_onset", Ok(stvk_hyperbolic_threshold())),
        ModelKind::KirchhoffModified => {
            push("alpha", Ok(model.alpha()));
            let bounds = kirchhoff_alpha_bounds::<T>();
            push("alpha_lower", bounds.clone().map(|b| b.0));
            push("alpha_upper", bounds.map(|b| b.1));
            let s_alpha = kirchhoff_s_alpha(model.alpha());
            push("gnl_end", s_alpha.clone().map(|s| s - T::one()));
            push("s_alpha", s_alpha);
        }
        ModelKind::Ogden => push("alpha", Ok(model.alpha())),
        ModelKind::BlatzKoOgden => {
            let beta = model.beta();
            push("beta", Ok(beta));
            if beta < T::lit(0.5) {
                push("s_beta", blatzko_s_beta(beta));
                push("f_beta", blatzko_f_threshold(beta));
            }
            push("s0", blatzko_s0(beta));
        }
        ModelKind::Linear => {
            let c2 = (model.lambda() + T::lit(2.0) * model.mu()) / model.rho0();
            push("wave_speed", Ok(c2.sqrt()));
        }
    }
    notes
}

/// Strain above which the St.Venant-Kirchhoff law is hyperbolic: the larger
/// root of `3Γ² + 6Γ + 2`, i.e. `-1 + 1/√3`.
pub fn stvk_hyperbolic_threshold<T: Real>() -> T {
    -T::one() + T::lit(3.0).sqrt().recip()
}

/// Minimum of `P'` over `ln s ∈ [u_lo, u_hi]`, returned as `(Γ, P'(Γ))`.
pub fn min_wave_speed_squared<T: Real>(model: &ModelSpec<T>, u_lo: T, u_hi: T) -> Result<(T, T)> {
    let dp = |u: T| {
        let g = u.exp_m1();
        match StrainPoint::new(g) {
            Ok(pt) => stress(model, pt).dp,
            Err(_) => T::nan(),
        }
    };
    let (u, v) = minimize_scalar_with_grid(dp, u_lo, u_hi, T::lit(1e-10), 4096)?;
    Ok((u.exp_m1(), v))
}

/// Hyperbolicity margin `min_{s>0} P'(s)` of the Modified Kirchhoff law with
/// `ρ₀ = μ = 1`, `λ = α`.
pub fn kirchhoff_hyperbolicity_margin<T: Real>(alpha: T) -> Result<T> {
    let model = ModelSpec::kirchhoff_modified(T::one(), T::one(), alpha)?;
    Ok(min_wave_speed_squared(&model, T::lit(-12.0), T::lit(12.0))?.1)
}

/// Residual of the closed-form condition
/// `6(5 + 4 ln 6)α = 1 + 12α ln(3 + 3√(1+12α)) + √(1+12α)` whose two positive
/// roots are the Modified Kirchhoff hyperbolicity bounds.
pub fn kirchhoff_alpha_condition<T: Real>(alpha: T) -> T {
    let r = (T::one() + T::lit(12.0) * alpha).sqrt();
    let lhs = T::lit(6.0) * (T::lit(5.0) + T::lit(4.0) * T::lit(6.0).ln()) * alpha;
    let rhs = T::one() + T::lit(12.0) * alpha * (T::lit(3.0) + T::lit(3.0) * r).ln() + r;
    lhs - rhs
}

/// Bounds `(α₁, α₂)` such that the Modified Kirchhoff law is hyperbolic for
/// every `Γ > -1` exactly when `α₁ < λ/μ < α₂`.
pub fn kirchhoff_alpha_bounds<T: Real>() -> Result<(T, T)> {
    let g = |a: T| kirchhoff_hyperbolicity_margin(a).unwrap_or_else(|_| T::nan());
    let tol = T::lit(1e-14).max(T::lit(4.0) * T::epsilon());
    let root = |lo: f64, hi: f64| -> Result<T> {
        // log-scaled α keeps both brackets well conditioned
        let h = |v: T| g(v.exp());
        let br = Bracket::new(h, T::lit(lo).ln(), T::lit(hi).ln())?;
        Ok(find_root(h, br, tol, T::zero())?.root.exp())
    };
    Ok((root(1e-4, 1.0)?, root(1.0, 1e5)?))
}

/// Stretch `S_α = [(α/12) W₀(12e⁶/α)]^{1/4}` where the Modified Kirchhoff
/// `P''` changes sign: negative below, positive above.
pub fn kirchhoff_s_alpha<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(Error::Usage(format!("alpha must be positive, got {alpha}")));
    }
    let twelve = T::lit(12.0);
    let w = lambert_w0(twelve * T::lit(6.0).exp() / alpha)?;
    Ok((alpha / twelve * w).powf(T::lit(0.25)))
}

fn require_small_beta<T: Real>(beta: T) -> Result<()> {
    if beta > T::zero() && beta < T::lit(0.5) {
        Ok(())
    } else if beta >= T::lit(0.5) {
        Err(Error::Usage(format!(
            "beta = {beta} >= 1/2: Blatz-Ko is hyperbolic for every Γ > -1 and f in (0, 1)"
        )))
    } else {
        Err(Error::Usage(format!("beta must be positive, got {beta}")))
    }
}

/// `s_β = (3/(1-2β))^{1/(2β+2)}`, the zero of the numerator of
/// [`blatzko_q`] for `0 < β < 1/2`.
pub fn blatzko_s_beta<T: Real>(beta: T) -> Result<T> {
    require_small_beta(beta)?;
    let two = T::lit(2.0);
    Ok((T::lit(3.0) / (T::one() - two * beta)).powf((two * beta + two).recip()))
}

/// Lower bound on `f` for Blatz-Ko hyperbolicity, as a function of stretch:
/// `P'(s) > 0` exactly when `f > Q(s, β)` (for `s > s_β`).
pub fn blatzko_q<T: Real>(s: T, beta: T) -> T {
    let two = T::lit(2.0);
    let e = two * beta + two;
    let s2b = s.powf(two * beta);
    let num = s2b * ((T::one() - two * beta) * s.powf(e) - T::lit(3.0));
    num / (s * s * ((T::one() + two * beta) + s.powf(e)) + num)
}

/// `f_β = max_{s > s_β} Q(s, β)`: Blatz-Ko with `0 < β < 1/2` is hyperbolic
/// for all `Γ > -1` iff `f > f_β`.
pub fn blatzko_f_threshold<T: Real>(beta: T) -> Result<T> {
    let s_beta = blatzko_s_beta(beta)?;
    let q = |s: T| blatzko_q(s, beta);

    let mut s_max = s_beta * T::lit(2.0);
    let mut prev = q(s_max);
    let mut decreasing = 0;
    for _ in 0..60 {
        s_max = s_max * T::lit(2.0);
        let cur = q(s_max);
        if !cur.is_finite() {
            s_max = s_max / T::lit(2.0);
            break;
        }
        decreasing = if cur < prev { decreasing + 1 } else { 0 };
        prev = cur;
        if decreasing == 3 {
            break;
        }
    }

    let (_, f) = maximize_scalar(|u: T| q(u.exp()), s_beta.ln(), s_max.ln(), T::lit(1e-12))?;
    Ok(f)
}

/// `s₀ = [6/((2β-1)(β-1))]^{1/(2β+2)}`: Blatz-Ko `P''(s) < 0` for every
/// `s ≤ s₀`. Defined for `β ∈ (0, 1/2) ∪ (1, ∞)`; for `β ∈ [1/2, 1]` the
/// law is genuinely nonlinear everywhere.
pub fn blatzko_s0<T: Real>(beta: T) -> Result<T> {
    let half = T::lit(0.5);
    if beta >= half && beta <= T::one() {
        return Err(Error::Usage(format!(
            "beta = {beta} in [1/2, 1]: Blatz-Ko has P'' < 0 for all s > 0"
        )));
    }
    if !(beta > T::zero()) {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    let two = T::lit(2.0);
    let den = (two * beta - T::one()) * (beta - T::one());
    Ok((T::lit(6.0) / den).powf((two * beta + two).recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelSpec64 as ModelSpec;

    fn mk(alpha: f64) -> ModelSpec {
        ModelSpec::kirchhoff_modified(1.0, 1.0, alpha).unwrap()
    }

    #[test]
    fn stvk_onset() {
        let t: f64 = stvk_hyperbolic_threshold();
        assert!((t - (-1.0 + 1.0 / 3f64.sqrt())).abs() < 1e-15);
        let m = ModelSpec::stvk(1.0, 1.0, 1.0).unwrap();
        let r = scan_regions(&m, -0.99, 2.0).unwrap();
        assert_eq!(r.hyperbolic_intervals.len(), 1);
        assert!((r.hyperbolic_intervals[0].0 - t).abs() < 1e-12);
        assert_eq!(r.hyperbolic_intervals[0].1, 2.0);
        assert!(r.gnl_intervals.is_empty());
        assert_eq!(r.threshold("hyperbolic_onset"), Some(t));
    }

    #[test]
    fn ogden_everywhere() {
        let m = ModelSpec::ogden(1.0, 1.0, 0.3).unwrap();
        let r = scan_regions(&m, -0.99, 5.0).unwrap();
        assert!(r.hyperbolic_everywhere());
        assert!(r.gnl_everywhere());
    }

    #[test]
    fn linear_has_no_gnl_region() {
        let m = ModelSpec::linear(1.0, 1.0, 1.0).unwrap();
        let r = scan_regions(&m, -0.99, 5.0).unwrap();
        assert!(r.hyperbolic_everywhere());
        assert!(r.gnl_intervals.is_empty());
    }

    #[test]
    fn kirchhoff_gnl_ends_at_s_alpha() {
        let m = mk(8.0);
        let r = scan_regions(&m, -0.999, 5.0).unwrap();
        let s = kirchhoff_s_alpha(8.0).unwrap();
        assert_eq!(r.gnl_intervals.len(), 1);
        assert!((r.gnl_intervals[0].1 - (s - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn invalid_range() {
        let m = mk(1.0);
        assert!(scan_regions(&m, -1.0, 1.0).unwrap_err().is_usage());
        assert!(scan_regions(&m, 0.5, 0.1).unwrap_err().is_usage());
    }

    #[test]
    fn s_alpha_at_two_is_one() {
        assert!((kirchhoff_s_alpha(2.0f64).unwrap() - 1.0).abs() < 1e-12);
        assert!(kirchhoff_s_alpha(0.0f64).unwrap_err().is_usage());
    }

    #[test]
    fn s_alpha_matches_bisection() {
        let alpha = 8.0f64;
        let h = |s: f64| 6.0 * s.powi(4) + alpha * (2.0 * s.ln() - 3.0);
        let (mut a, mut b) = (0.5, 3.0);
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            if h(a) * h(c) <= 0.0 {
                b = c;
            } else {
                a = c;
            }
        }
        let s = kirchhoff_s_alpha(alpha).unwrap();
        assert!((s - 0.5 * (a + b)).abs() < 1e-10);
        let m = mk(alpha);
        assert!(m.eval(0.9 * s - 1.0).unwrap().d2p < 0.0);
        assert!(m.eval(1.1 * s - 1.0).unwrap().d2p > 0.0);
    }

    #[test]
    fn alpha_bounds_and_margin_signs() {
        let (a1, a2): (f64, f64) = kirchhoff_alpha_bounds().unwrap();
        assert!((a1 / 0.0446567295 - 1.0).abs() < 1e-4);
        assert!((a2 / 1732.05696 - 1.0).abs() < 1e-4);
        assert!(kirchhoff_hyperbolicity_margin(1.0f64).unwrap() > 0.0);
        assert!(kirchhoff_hyperbolicity_margin(a1 - 1e-3).unwrap() < 0.0);
        // the closed-form condition vanishes at both bounds
        for a in [a1, a2] {
            let scale = 6.0 * (5.0 + 4.0 * 6f64.ln()) * a;
            assert!(kirchhoff_alpha_condition(a).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn s_beta_values() {
        assert!((blatzko_s_beta(0.25f64).unwrap() - 6f64.powf(0.4)).abs() < 1e-14);
        assert!((blatzko_s_beta(1.0f64 / 3.0).unwrap() - 9f64.powf(3.0 / 8.0)).abs() < 1e-14);
        assert!(blatzko_q(blatzko_s_beta(0.25f64).unwrap(), 0.25).abs() < 1e-14);
        assert!(blatzko_s_beta(0.5f64).unwrap_err().is_usage());
    }

    #[test]
    fn f_beta_against_dense_grid() {
        let beta: f64 = 0.25;
        let f = blatzko_f_threshold(beta).unwrap();
        let s_beta = blatzko_s_beta(beta).unwrap();
        let n = 1_000_000;
        let (lo, hi) = (s_beta.ln(), 100f64.ln());
        let grid_max = (0..=n)
            .map(|i| blatzko_q((lo + (hi - lo) * i as f64 / n as f64).exp(), beta))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((f - grid_max).abs() < 1e-8);
        let bound = (1.0 - 2.0 * beta) / (1.0 - 2.0 * beta + s_beta.powf(2.0 - 2.0 * beta));
        assert!(f > 0.0 && f <= bound);
    }

    #[test]
    fn f_beta_separates_hyperbolicity() {
        let beta = 0.25;
        let f = blatzko_f_threshold(beta).unwrap();
        let above = ModelSpec::from_beta(ModelKind::BlatzKoOgden, beta, Some(f + 0.01)).unwrap();
        assert!(min_wave_speed_squared(&above, -12.0, 12.0).unwrap().1 > 0.0);
        let below = ModelSpec::from_beta(ModelKind::BlatzKoOgden, beta, Some(f - 0.01)).unwrap();
        assert!(min_wave_speed_squared(&below, -12.0, 12.0).unwrap().1 < 0.0);
    }

    #[test]
    fn s0_values() {
        assert!((blatzko_s0(2.0f64).unwrap() - 2f64.powf(1.0 / 6.0)).abs() < 1e-14);
        assert!(blatzko_s0(0.75f64).unwrap_err().is_usage());
        let s0 = blatzko_s0(0.25f64).unwrap();
        let m = ModelSpec::from_beta(ModelKind::BlatzKoOgden, 0.25, Some(0.25)).unwrap();
        for i in 1..=20 {
            let s = s0 * i as f64 / 20.0;
            assert!(m.eval(s - 1.0).unwrap().d2p < 0.0, "s = {s}");
        }
    }

    #[test]
    fn blatzko_large_beta_changes_gnl_sign_beyond_s0() {
        let s0 = blatzko_s0(5.0f64).unwrap();
        let m = ModelSpec::from_beta(ModelKind::BlatzKoOgden, 5.0, Some(0.25)).unwrap();
        let r = scan_regions(&m, -0.99, 5.0).unwrap();
        let end = r.gnl_intervals[0].1 + 1.0;
        assert!(end > s0);
    }

    #[test]
    fn report_json_shape() {
        let m = ModelSpec::stvk(1.0, 1.0, 1.0).unwrap();
        let r = scan_regions(&m, -0.99, 2.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["hyperbolic"].is_array());
        assert!(v["gnl"].is_array());
        assert!((v["thresholds"]["hyperbolic_onset"].as_f64().unwrap() + 0.42264973).abs() < 1e-8);
    }
}
