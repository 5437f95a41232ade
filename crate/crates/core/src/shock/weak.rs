//! Weak-form integral identities of the p-system with initial data and one
//! of four boundary conditions on `X = 0`, evaluated for a candidate field.

use std::fmt;
use std::sync::Arc;

use super::Candidate;
use crate::constitutive::{stress, ModelSpec, StrainPoint};
use crate::numerics::integrate;
use crate::{Error, Real, Result};

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Boundary condition imposed on `X = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFamily {
    /// `V(0,t) = h(t)`.
    VelocityDirichlet,
    /// `P(Γ(0,t)) = h(t)`.
    StressDirichlet,
    /// `P(Γ(0,t)) + a(t) V(0,t) = c(t)`.
    MixedA,
    /// `V(0,t) + b(t) P(Γ(0,t)) = c(t)`.
    MixedB,
}

/// Initial data `V(X,0) = f(X)`, `Γ(X,0) = g(X)` plus the wall condition.
#[derive(Clone)]
pub struct BoundarySpec<T> {
    pub family: BoundaryFamily,
    pub f: ScalarFn<T>,
    pub g: ScalarFn<T>,
    /// `h` for the Dirichlet families, `c` for the mixed ones.
    pub h_or_c: ScalarFn<T>,
    /// `a(t)` or `b(t)`; zero for the Dirichlet families.
    pub coeff: ScalarFn<T>,
    /// Time derivative of `coeff`.
    pub coeff_rate: ScalarFn<T>,
}

impl<T> fmt::Debug for BoundarySpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundarySpec").field("family", &self.family).finish_non_exhaustive()
    }
}

fn zero_fn<T: Real>() -> ScalarFn<T> {
    Arc::new(|_| T::zero())
}

fn constant<T: Real>(v: T) -> ScalarFn<T> {
    Arc::new(move |_| v)
}

impl<T: Real> BoundarySpec<T> {
    pub fn velocity_dirichlet(f: ScalarFn<T>, g: ScalarFn<T>, h: ScalarFn<T>) -> Self {
        BoundarySpec {
            family: BoundaryFamily::VelocityDirichlet,
            f,
            g,
            h_or_c: h,
            coeff: zero_fn(),
            coeff_rate: zero_fn(),
        }
    }

    pub fn stress_dirichlet(f: ScalarFn<T>, g: ScalarFn<T>, h: ScalarFn<T>) -> Self {
        BoundarySpec {
            family: BoundaryFamily::StressDirichlet,
            f,
            g,
            h_or_c: h,
            coeff: zero_fn(),
            coeff_rate: zero_fn(),
        }
    }

    pub fn mixed_a(f: ScalarFn<T>, g: ScalarFn<T>, c: ScalarFn<T>, a: ScalarFn<T>, a_rate: ScalarFn<T>) -> Self {
        BoundarySpec { family: BoundaryFamily::MixedA, f, g, h_or_c: c, coeff: a, coeff_rate: a_rate }
    }

    pub fn mixed_b(f: ScalarFn<T>, g: ScalarFn<T>, c: ScalarFn<T>, b: ScalarFn<T>, b_rate: ScalarFn<T>) -> Self {
        BoundarySpec { family: BoundaryFamily::MixedB, f, g, h_or_c: c, coeff: b, coeff_rate: b_rate }
    }

    /// Impact data: `V(X,0) = -V₀`, `Γ(X,0) = 0`, `V(0,t) = 0`.
    pub fn impact(v0: T) -> Self {
        Self::velocity_dirichlet(constant(-v0), zero_fn(), zero_fn())
    }

    /// True when the identities need `φ(0,t) = 0` (otherwise `ψ(0,t) = 0`).
    fn needs_phi_zero_on_wall(&self) -> bool {
        matches!(self.family, BoundaryFamily::VelocityDirichlet | BoundaryFamily::MixedB)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    /// Plain bump.
    FreeBump,
    /// Bump times `X`: vanishes on the wall `X = 0`.
    ZeroOnTAxis,
    /// Bump times `t`: vanishes on the initial line `t = 0`.
    ZeroOnXAxis,
}

/// Smooth compactly supported test function on the quadrant
/// `X, t >= 0`: a product of one-dimensional bumps
/// `exp(-1/(1-u²))` centred at `center` with half-width `radius`,
/// optionally multiplied by `X` or `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction<T> {
    pub kind: TestKind,
    pub center: (T, T),
    pub radius: T,
}

/// 1-D bump and its derivative with respect to `u`.
fn bump<T: Real>(u: T) -> (T, T) {
    let one = T::one();
    let q = one - u * u;
    if q <= T::zero() {
        return (T::zero(), T::zero());
    }
    let b = (-one / q).exp();
    (b, b * (-T::lit(2.0) * u / (q * q)))
}

impl<T: Real> TestFunction<T> {
    pub fn new(kind: TestKind, center: (T, T), radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::Usage(format!("test radius must be positive, got {radius}")));
        }
        if !(center.0 >= T::zero() && center.1 >= T::zero() && center.0.is_finite() && center.1.is_finite()) {
            return Err(Error::Usage(format!(
                "test centre must lie in the closed quadrant, got ({}, {})",
                center.0, center.1
            )));
        }
        Ok(TestFunction { kind, center, radius })
    }

    /// `(value, ∂_X, ∂_t)` at `(x, t)`.
    pub fn eval(&self, x: T, t: T) -> (T, T, T) {
        let r = self.radius;
        let (bx, dbx) = bump((x - self.center.0) / r);
        let (bt, dbt) = bump((t - self.center.1) / r);
        let base = bx * bt;
        let base_x = dbx / r * bt;
        let base_t = bx * dbt / r;
        match self.kind {
            TestKind::FreeBump => (base, base_x, base_t),
            TestKind::ZeroOnTAxis => (x * base, base + x * base_x, x * base_t),
            TestKind::ZeroOnXAxis => (t * base, t * base_x, base + t * base_t),
        }
    }

    /// Support in `X`, clipped to `X >= 0`.
    pub fn x_range(&self) -> (T, T) {
        ((self.center.0 - self.radius).max(T::zero()), self.center.0 + self.radius)
    }

    /// Support in `t`, clipped to `t >= 0`.
    pub fn t_range(&self) -> (T, T) {
        ((self.center.1 - self.radius).max(T::zero()), self.center.1 + self.radius)
    }

    /// True when the function is identically zero on `X = 0`.
    pub fn vanishes_on_wall(&self) -> bool {
        self.kind == TestKind::ZeroOnTAxis || self.center.0 - self.radius >= T::zero()
    }

    fn touches_initial_line(&self) -> bool {
        self.kind != TestKind::ZeroOnXAxis && self.center.1 - self.radius < T::zero()
    }

    fn touches_wall(&self) -> bool {
        !self.vanishes_on_wall()
    }
}

/// Interior points of `(lo, hi)` from `cuts`, sorted, with the end points.
fn breakpoints<T: Real>(lo: T, hi: T, cuts: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut pts = vec![lo, hi];
    pts.extend(cuts.into_iter().filter(|&c| c > lo && c < hi));
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup();
    pts
}

fn integrate_pieces<T: Real, F: FnMut(T) -> T>(mut f: F, pts: &[T], tol: T) -> Result<T> {
    let piece_tol = tol / T::from_count(pts.len().max(2) - 1);
    let mut total = T::zero();
    for w in pts.windows(2) {
        total = total + integrate(&mut f, w[0], w[1], piece_tol)?;
    }
    Ok(total)
}

/// `∫∫ integrand(X, t) dX dt` over the rectangle, split along every line
/// `X = c·t` so that each piece is smooth.
fn area_integral<T, F>(integrand: F, xr: (T, T), tr: (T, T), speeds: &[T], tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T) -> T,
{
    if !(xr.0 < xr.1 && tr.0 < tr.1) {
        return Ok(T::zero());
    }
    // kinks of the inner integral in t: where a jump line enters or leaves
    let t_cuts = speeds
        .iter()
        .filter(|&&c| c > T::zero())
        .flat_map(|&c| [xr.0 / c, xr.1 / c]);
    let t_pts = breakpoints(tr.0, tr.1, t_cuts);
    let inner_tol = tol / (T::lit(4.0) * (tr.1 - tr.0).max(T::one()));

    let mut failure: Option<Error> = None;
    let outer = integrate_pieces(
        |t| {
            let x_pts = breakpoints(xr.0, xr.1, speeds.iter().map(|&c| c * t));
            match integrate_pieces(|x| integrand(x, t), &x_pts, inner_tol) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            }
        },
        &t_pts,
        tol / T::lit(2.0),
    );
    match failure {
        Some(e) => Err(e),
        None => outer,
    }
}

fn check_pair<T: Real>(bc: &BoundarySpec<T>, phi: &TestFunction<T>, psi: &TestFunction<T>) -> Result<()> {
    if bc.needs_phi_zero_on_wall() && !phi.vanishes_on_wall() {
        return Err(Error::Usage(format!(
            "{:?} requires φ(0,t) = 0; use a test vanishing on X = 0",
            bc.family
        )));
    }
    if !bc.needs_phi_zero_on_wall() && !psi.vanishes_on_wall() {
        return Err(Error::Usage(format!(
            "{:?} requires ψ(0,t) = 0; use a test vanishing on X = 0",
            bc.family
        )));
    }
    Ok(())
}

/// Residuals of the two weak-form identities of `bc.family` for `candidate`,
/// using each test function both as `φ` and as `ψ`.
///
/// For an exact weak solution both residuals vanish up to quadrature error.
pub fn weak_residual<T, C>(
    candidate: &C,
    model: &ModelSpec<T>,
    bc: &BoundarySpec<T>,
    tests: &[TestFunction<T>],
    quad_tol: T,
) -> Result<Vec<(T, T)>>
where
    T: Real,
    C: Candidate<T> + ?Sized,
{
    let pairs: Vec<_> = tests.iter().map(|&tf| (tf, tf)).collect();
    weak_residual_pairs(candidate, model, bc, &pairs, quad_tol)
}

/// [`weak_residual`] with independent `(φ, ψ)` per entry.
pub fn weak_residual_pairs<T, C>(
    candidate: &C,
    model: &ModelSpec<T>,
    bc: &BoundarySpec<T>,
    pairs: &[(TestFunction<T>, TestFunction<T>)],
    quad_tol: T,
) -> Result<Vec<(T, T)>>
where
    T: Real,
    C: Candidate<T> + ?Sized,
{
    if !(quad_tol > T::zero()) {
        return Err(Error::Usage(format!("quad_tol must be positive, got {quad_tol}")));
    }
    for (phi, psi) in pairs {
        check_pair(bc, phi, psi)?;
    }
    let speeds = candidate.discontinuity_speeds();
    pairs
        .iter()
        .map(|(phi, psi)| residual_pair(candidate, model, bc, phi, psi, &speeds, quad_tol))
        .collect()
}

fn residual_pair<T, C>(
    candidate: &C,
    model: &ModelSpec<T>,
    bc: &BoundarySpec<T>,
    phi: &TestFunction<T>,
    psi: &TestFunction<T>,
    speeds: &[T],
    tol: T,
) -> Result<(T, T)>
where
    T: Real,
    C: Candidate<T> + ?Sized,
{
    let stress_p = |g: T| match StrainPoint::new(g) {
        Ok(pt) => stress(model, pt).p,
        Err(_) => T::nan(),
    };
    let zero = T::zero();
    // pieces: area integrals (tol/2) plus up to two line integrals (tol/4 each)
    let area_tol = tol / T::lit(2.0);
    let line_tol = tol / T::lit(4.0);

    // ∫ w(X) test(X, 0) dX
    let initial = |tf: &TestFunction<T>, w: &dyn Fn(T) -> T| -> Result<T> {
        if !tf.touches_initial_line() {
            return Ok(zero);
        }
        let (a, b) = tf.x_range();
        integrate(|x| w(x) * tf.eval(x, zero).0, a, b, line_tol)
    };
    // ∫ w(t) test(0, t) dt
    let wall = |tf: &TestFunction<T>, w: &dyn Fn(T) -> T| -> Result<T> {
        if !tf.touches_wall() {
            return Ok(zero);
        }
        let (a, b) = tf.t_range();
        integrate(|t| w(t) * tf.eval(zero, t).0, a, b, line_tol)
    };
    let f = |x: T| (bc.f)(x);
    let g = |x: T| (bc.g)(x);
    let hc = |t: T| (bc.h_or_c)(t);

    // momentum identity in the form  -∫f φ(X,0) - ∫∫V φ_t + ∫∫P φ_X
    let momentum_core = |tf: &TestFunction<T>| -> Result<T> {
        let area = area_integral(
            |x, t| {
                let (v, gam) = candidate.state(x, t);
                let (_, px, pt) = tf.eval(x, t);
                -v * pt + stress_p(gam) * px
            },
            tf.x_range(),
            tf.t_range(),
            speeds,
            area_tol,
        )?;
        Ok(area - initial(tf, &f)?)
    };
    // compatibility identity in the form  -∫g ψ(X,0) - ∫∫Γ ψ_t + ∫∫V ψ_X
    let compat_core = |tf: &TestFunction<T>| -> Result<T> {
        let area = area_integral(
            |x, t| {
                let (v, gam) = candidate.state(x, t);
                let (_, px, pt) = tf.eval(x, t);
                -gam * pt + v * px
            },
            tf.x_range(),
            tf.t_range(),
            speeds,
            area_tol,
        )?;
        Ok(area - initial(tf, &g)?)
    };

    match bc.family {
        BoundaryFamily::VelocityDirichlet => {
            let r1 = -momentum_core(phi)?;
            let r2 = -compat_core(psi)? - wall(psi, &hc)?;
            Ok((r1, r2))
        }
        BoundaryFamily::StressDirichlet | BoundaryFamily::MixedA => {
            let r1 = compat_core(psi)?;
            let a0 = (bc.coeff)(zero);
            let coupling = area_integral(
                |x, t| {
                    let (v, gam) = candidate.state(x, t);
                    let (p, px, pt) = phi.eval(x, t);
                    let a = (bc.coeff)(t);
                    let a_rate = (bc.coeff_rate)(t);
                    -(a_rate * p + a * pt) * gam + a * px * v
                },
                phi.x_range(),
                phi.t_range(),
                speeds,
                area_tol,
            )?;
            let r2 = momentum_core(phi)? + wall(phi, &hc)? - a0 * initial(phi, &g)? + coupling;
            Ok((r1, r2))
        }
        BoundaryFamily::MixedB => {
            let r1 = momentum_core(phi)?;
            let b0 = (bc.coeff)(zero);
            let coupling = area_integral(
                |x, t| {
                    let (v, gam) = candidate.state(x, t);
                    let (p, px, pt) = psi.eval(x, t);
                    let b = (bc.coeff)(t);
                    let b_rate = (bc.coeff_rate)(t);
                    -(b_rate * p + b * pt) * v + b * px * stress_p(gam)
                },
                psi.x_range(),
                psi.t_range(),
                speeds,
                area_tol,
            )?;
            let r2 = compat_core(psi)? + wall(psi, &hc)? - b0 * initial(psi, &f)? + coupling;
            Ok((r1, r2))
        }
    }
}
