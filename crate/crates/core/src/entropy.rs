//! Entropy admissibility of the compression shock for the standard pair
//!
//! ```text
//! Φ(V, Γ) = V²/2 + ∫₀^Γ P(w) dw,    Ψ(V, Γ) = -P(Γ) V.
//! ```
//!
//! Across the shock from `(0, Γ_l)` to `(-V₀, 0)` the inequality
//! `σ[Φ] - [Ψ] >= 0` reduces to `2∫₀^{Γ_l} P <= Γ_l P(Γ_l)`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constitutive::{stress_antiderivative, stress_at, ModelKind, ModelSpec};
use crate::numerics::{find_root, Bracket};
use crate::{Error, Real, Result};

/// Margins at or above `-HOLDS_TOLERANCE` count as satisfying the condition.
pub const HOLDS_TOLERANCE: f64 = 1e-12;

const BOUNDARY_LO: f64 = 1e-6;
const BOUNDARY_HI: f64 = 1.0 - 1e-4;
const BOUNDARY_SCAN: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVerdict<T> {
    pub model: ModelSpec<T>,
    pub gamma_l: T,
    /// `Γ_l P(Γ_l) - 2∫₀^{Γ_l} P`.
    pub margin: T,
    pub holds: bool,
    /// Stretch separating admissible from inadmissible shocks for the
    /// Modified Kirchhoff law with `α < 2`.
    pub s_e: Option<T>,
}

impl<T: Serialize> Serialize for EntropyVerdict<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EntropyVerdict", 4)?;
        st.serialize_field("gamma_l", &self.gamma_l)?;
        st.serialize_field("margin", &self.margin)?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("s_e", &self.s_e)?;
        st.end()
    }
}

/// Standard entropy `Φ` and entropy flux `Ψ` at `(V, Γ)`.
pub fn standard_pair<T: Real>(model: &ModelSpec<T>, v: T, gamma: T) -> Result<(T, T)> {
    let p = stress_at(model, gamma)?.p;
    let phi = v * v / T::lit(2.0) + stress_antiderivative(model, gamma)?;
    Ok((phi, -p * v))
}

/// `Γ P(Γ) - 2∫₀^Γ P`; the shock with left strain `Γ` is admissible when
/// this is non-negative.
pub fn entropy_margin<T: Real>(model: &ModelSpec<T>, gamma: T) -> Result<T> {
    let p = stress_at(model, gamma)?.p;
    Ok(gamma * p - T::lit(2.0) * stress_antiderivative(model, gamma)?)
}

/// Entropy production defect
/// `E(Γ) = (ε/Γ)[Φ(0,Γ) - Φ(ε,0)] - [Ψ(0,Γ) - Ψ(ε,0)]` with
/// `ε = -√(Γ P(Γ))`. The jump condition holds iff `E <= 0`.
pub fn jump_excess<T: Real>(model: &ModelSpec<T>, gamma_l: T) -> Result<T> {
    if gamma_l > T::zero() {
        return Err(Error::Usage(format!("left strain must be <= 0, got {gamma_l}")));
    }
    if gamma_l == T::zero() {
        return Ok(T::zero());
    }
    let gp = gamma_l * stress_at(model, gamma_l)?.p;
    if gp < T::zero() {
        return Err(Error::Domain(format!(
            "Γ P(Γ) = {gp} < 0 at Γ = {gamma_l}: no shock has this left state"
        )));
    }
    let eps = -gp.sqrt();
    let (phi_l, psi_l) = standard_pair(model, T::zero(), gamma_l)?;
    let (phi_r, psi_r) = standard_pair(model, eps, T::zero())?;
    Ok(eps / gamma_l * (phi_l - phi_r) - (psi_l - psi_r))
}

/// Decides `2∫₀^{Γ_l} P <= Γ_l P(Γ_l)` for a left strain `Γ_l ∈ (-1, 0]`.
pub fn check_condition<T: Real>(model: &ModelSpec<T>, gamma_l: T) -> Result<EntropyVerdict<T>> {
    if gamma_l > T::zero() {
        return Err(Error::Usage(format!("left strain must be <= 0, got {gamma_l}")));
    }
    let margin = entropy_margin(model, gamma_l)?;
    let s_e = match model.kind() {
        ModelKind::KirchhoffModified if model.alpha() < T::lit(2.0) => {
            kirchhoff_entropy_boundary(model.alpha()).ok()
        }
        _ => None,
    };
    Ok(EntropyVerdict {
        model: *model,
        gamma_l,
        margin,
        holds: margin >= -T::lit(HOLDS_TOLERANCE),
        s_e,
    })
}

/// `L(s) = s(s+1)(1-s)³ / (2(s - 1 - s ln s) ln s)`; for the Modified
/// Kirchhoff law the entropy condition at stretch `s ∈ (0, 1)` holds iff
/// `L(s) <= α`. `L` rises from `0` at `s → 0` to `2` at `s → 1`.
pub fn kirchhoff_entropy_curve<T: Real>(s: T) -> T {
    let one = T::one();
    let ln_s = s.ln();
    let om = one - s;
    s * (s + one) * om * om * om / (T::lit(2.0) * (s - one - s * ln_s) * ln_s)
}

/// Every root of `L(s) = α` in `[1e-6, 1 - 1e-4]`, ascending.
pub fn kirchhoff_entropy_boundaries<T: Real>(alpha: T) -> Result<Vec<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::Usage(format!("alpha must be positive, got {alpha}")));
    }
    if alpha >= T::lit(2.0) {
        return Err(Error::Usage(format!(
            "alpha = {alpha} >= 2: the entropy condition holds for every s in (0, 1)"
        )));
    }
    let h = |s: T| kirchhoff_entropy_curve(s) - alpha;
    let (lo, hi) = (T::lit(BOUNDARY_LO), T::lit(BOUNDARY_HI));
    // uniform in ln s
    let (u_lo, u_hi) = (lo.ln(), hi.ln());
    let n = BOUNDARY_SCAN;
    let node = |i: usize| {
        if i == n {
            hi
        } else {
            (u_lo + (u_hi - u_lo) * T::from_count(i) / T::from_count(n)).exp()
        }
    };
    let mut roots = Vec::new();
    let (mut a, mut fa) = (lo, h(lo));
    for i in 1..=n {
        let b = node(i);
        let fb = h(b);
        if fa == T::zero() {
            roots.push(a);
        } else if fa * fb < T::zero() {
            let br = Bracket::from_values(a, b, fa, fb)?;
            roots.push(find_root(h, br, T::epsilon(), T::zero())?.root);
        }
        a = b;
        fa = fb;
    }
    if roots.is_empty() {
        return Err(Error::NoSolution(format!(
            "L(s) = {alpha} has no root in [{lo}, {hi}]"
        )));
    }
    Ok(roots)
}

/// Stretch `s_e ∈ (0, 1)` for the Modified Kirchhoff law with `0 < α < 2`:
/// the shock is admissible for `s ∈ (0, s_e]` and not on `(s_e, 1)`.
/// When several roots are found the smallest is returned.
pub fn kirchhoff_entropy_boundary<T: Real>(alpha: T) -> Result<T> {
    Ok(kirchhoff_entropy_boundaries(alpha)?[0])
}

/// `lim_{Γ→0⁻} E'''(Γ) = -½ P''(0) √P'(0)` for the standard pair. A
/// positive value means weak shocks are admissible.
pub fn near_zero_certificate<T: Real>(model: &ModelSpec<T>) -> Result<T> {
    let e = stress_at(model, T::zero())?;
    if !(e.dp > T::zero()) {
        return Err(Error::Hypothesis(format!(
            "P'(0) = {} is not positive; the law is not hyperbolic at rest",
            e.dp
        )));
    }
    Ok(-T::lit(0.5) * e.d2p * e.dp.sqrt())
}

/// Experimental scan for Blatz-Ko with `β > 5/2`, where admissibility
/// depends on `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlatzKoEntropyScan<T> {
    pub beta: T,
    /// Smallest sampled `f` above which every stretch in `(0, 1]` passes,
    /// refined by bisection; `None` if no sampled `f` passes everywhere.
    pub f_beta: Option<T>,
}

fn fails_somewhere<T: Real>(beta: T, f: T, grid: &[T]) -> Result<Option<T>> {
    let model = ModelSpec::from_beta(ModelKind::BlatzKoOgden, beta, Some(f))?;
    for &s in grid {
        if entropy_margin(&model, s - T::one())? < -T::lit(HOLDS_TOLERANCE) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn stretch_grid<T: Real>(n: usize) -> Vec<T> {
    (1..n).map(|i| T::from_count(i) / T::from_count(n)).collect()
}

/// First sampled stretch in `(0, 1)` where the Blatz-Ko shock violates the
/// entropy condition, or `None`. Experimental: a grid check, not a proof.
pub fn experimental_blatzko_violation<T: Real>(beta: T, f: T) -> Result<Option<T>> {
    fails_somewhere(beta, f, &stretch_grid(2000))
}

/// Experimental numeric threshold `f_β` for Blatz-Ko with `β > 5/2`, by
/// bisection on `f` of the sampled margin sign over `s ∈ (0, 1)`.
pub fn experimental_blatzko_threshold<T: Real>(beta: T) -> Result<BlatzKoEntropyScan<T>> {
    if !(beta > T::lit(2.5)) {
        return Err(Error::Usage(format!(
            "beta = {beta} <= 5/2: P'' < 0 on (0, 1] and the condition always holds"
        )));
    }
    let grid = stretch_grid::<T>(2000);
    let (mut lo, mut hi) = (T::lit(1e-6), T::one() - T::lit(1e-6));
    if fails_somewhere(beta, hi, &grid)?.is_some() {
        return Ok(BlatzKoEntropyScan { beta, f_beta: None });
    }
    if fails_somewhere(beta, lo, &grid)?.is_none() {
        return Ok(BlatzKoEntropyScan { beta, f_beta: Some(T::zero()) });
    }
    while hi - lo > T::lit(1e-10) {
        let mid = T::lit(0.5) * (lo + hi);
        if fails_somewhere(beta, mid, &grid)?.is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BlatzKoEntropyScan { beta, f_beta: Some(hi) })
}
