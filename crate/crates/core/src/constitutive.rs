//! Stress laws `P(Γ)` of the one-dimensional reduction, written per unit
//! reference density, with exact derivatives and antiderivatives.
//!
//! Internally every law is evaluated in the stretch `s = 1 + Γ`; with
//! `m = μ/ρ₀`, `l = λ/ρ₀`:
//!
//! | kind                 | `P`                                                        |
//! |----------------------|------------------------------------------------------------|
//! | `stvk`               | `(l + 2m)/2 · (s³ - s)`                                    |
//! | `kirchhoff_modified` | `m(s³ - s) + l·ln s / s`                                   |
//! | `ogden`              | `l(s - 1) + m(s - 1/s)`                                    |
//! | `blatz_ko`           | `m[f(s - s^(-2β-1)) + (1 - f)(s^(2β-1) - s^(-3))]`         |
//! | `linear`             | `(l + 2m)Γ`                                                |

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[serde(rename = "stvk")]
    StVenantKirchhoff,
    KirchhoffModified,
    Ogden,
    #[serde(rename = "blatz_ko")]
    BlatzKoOgden,
    Linear,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::StVenantKirchhoff,
        ModelKind::KirchhoffModified,
        ModelKind::Ogden,
        ModelKind::BlatzKoOgden,
        ModelKind::Linear,
    ];

    /// Name used in JSON and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::StVenantKirchhoff => "stvk",
            ModelKind::KirchhoffModified => "kirchhoff_modified",
            ModelKind::Ogden => "ogden",
            ModelKind::BlatzKoOgden => "blatz_ko",
            ModelKind::Linear => "linear",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated material: law plus `(ρ₀, μ, λ)` and, for Blatz-Ko, the
/// mixing fraction `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawModelSpec<T>",
    bound(
        serialize = "T: Serialize",
        deserialize = "T: Real + Deserialize<'de>"
    )
)]
pub struct ModelSpec<T> {
    kind: ModelKind,
    rho0: T,
    mu: T,
    lambda: T,
    f: Option<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelSpec<T> {
    kind: ModelKind,
    rho0: T,
    mu: T,
    lambda: T,
    #[serde(default)]
    f: Option<T>,
}

impl<T: Real> TryFrom<RawModelSpec<T>> for ModelSpec<T> {
    type Error = Error;

    fn try_from(raw: RawModelSpec<T>) -> Result<Self> {
        ModelSpec::new(raw.kind, raw.rho0, raw.mu, raw.lambda, raw.f)
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "field `{name}` must be positive and finite, got {v}"
        )))
    }
}

impl<T: Real> ModelSpec<T> {
    pub fn new(kind: ModelKind, rho0: T, mu: T, lambda: T, f: Option<T>) -> Result<Self> {
        positive("rho0", rho0)?;
        positive("mu", mu)?;
        positive("lambda", lambda)?;
        match (kind, f) {
            (ModelKind::BlatzKoOgden, None) => {
                return Err(Error::Usage("field `f` is required for blatz_ko".into()));
            }
            (ModelKind::BlatzKoOgden, Some(f)) => {
                if !(f > T::zero() && f < T::one()) {
                    return Err(Error::Usage(format!(
                        "field `f` must lie in (0, 1), got {f}"
                    )));
                }
            }
            (_, Some(_)) => {
                return Err(Error::Usage(format!(
                    "field `f` is only meaningful for blatz_ko, not {kind}"
                )));
            }
            (_, None) => {}
        }
        Ok(ModelSpec { kind, rho0, mu, lambda, f })
    }

    /// Non-dimensional form `μ = ρ₀ = 1`, `λ = 2β`.
    pub fn from_beta(kind: ModelKind, beta: T, f: Option<T>) -> Result<Self> {
        Self::new(kind, T::one(), T::one(), T::lit(2.0) * beta, f)
    }

    pub fn stvk(rho0: T, mu: T, lambda: T) -> Result<Self> {
        Self::new(ModelKind::StVenantKirchhoff, rho0, mu, lambda, None)
    }

    pub fn kirchhoff_modified(rho0: T, mu: T, lambda: T) -> Result<Self> {
        Self::new(ModelKind::KirchhoffModified, rho0, mu, lambda, None)
    }

    pub fn ogden(rho0: T, mu: T, lambda: T) -> Result<Self> {
        Self::new(ModelKind::Ogden, rho0, mu, lambda, None)
    }

    pub fn blatz_ko(rho0: T, mu: T, lambda: T, f: T) -> Result<Self> {
        Self::new(ModelKind::BlatzKoOgden, rho0, mu, lambda, Some(f))
    }

    pub fn linear(rho0: T, mu: T, lambda: T) -> Result<Self> {
        Self::new(ModelKind::Linear, rho0, mu, lambda, None)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn rho0(&self) -> T {
        self.rho0
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn f(&self) -> Option<T> {
        self.f
    }

    /// `α = λ/μ`.
    pub fn alpha(&self) -> T {
        self.lambda / self.mu
    }

    /// `β = λ/(2μ)`.
    pub fn beta(&self) -> T {
        self.lambda / (T::lit(2.0) * self.mu)
    }

    /// Same law with `(ρ₀, μ, λ)` all multiplied by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.kind, self.rho0 * c, self.mu * c, self.lambda * c, self.f)
    }

    /// Shorthand for [`stress_at`].
    pub fn eval(&self, gamma: T) -> Result<StressEval<T>> {
        stress_at(self, gamma)
    }
}

/// Strain `Γ` together with the stretch `s = 1 + Γ`, guaranteed `Γ > -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainPoint<T> {
    gamma: T,
    s: T,
}

impl<T: Real> StrainPoint<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !gamma.is_finite() || gamma <= -T::one() {
            return Err(Error::StrainDomain(gamma.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(StrainPoint { gamma, s: gamma + T::one() })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn s(&self) -> T {
        self.s
    }
}

/// `P`, `dP/dΓ` and `d²P/dΓ²` at one strain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressEval<T> {
    pub p: T,
    pub dp: T,
    pub d2p: T,
}

/// Evaluates the stress law and its first two derivatives in closed form.
pub fn stress<T: Real>(model: &ModelSpec<T>, pt: StrainPoint<T>) -> StressEval<T> {
    let (g, s) = (pt.gamma, pt.s);
    let m = model.mu / model.rho0;
    let l = model.lambda / model.rho0;
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    // s² - 1 without cancellation near Γ = 0
    let s2m1 = g * (g + two);
    match model.kind {
        ModelKind::StVenantKirchhoff => {
            let k = (l + two * m) / two;
            StressEval {
                p: k * s * s2m1,
                dp: k * (three * s * s - one),
                d2p: T::lit(6.0) * k * s,
            }
        }
        ModelKind::KirchhoffModified => {
            let ln_s = g.ln_1p();
            let s2 = s * s;
            StressEval {
                p: m * s * s2m1 + l * ln_s / s,
                dp: m * (three * s2 - one) + l * (one - ln_s) / s2,
                d2p: T::lit(6.0) * m * s + l * (two * ln_s - three) / (s2 * s),
            }
        }
        ModelKind::Ogden => StressEval {
            p: l * g + m * s2m1 / s,
            dp: l + m * (one + one / (s * s)),
            d2p: -two * m / (s * s * s),
        },
        ModelKind::BlatzKoOgden => {
            let f = model.f.unwrap_or_else(T::zero);
            let b = model.beta();
            let ln_s = g.ln_1p();
            let e = two * b + two;
            // s^(2β+2) - 1 and 1 - s^(-2β-2), accurate near s = 1
            let up = (e * ln_s).exp_m1();
            let down = -(-e * ln_s).exp_m1();
            let s_m3 = (-three * ln_s).exp();
            let p = m * (f * s * down + (one - f) * s_m3 * up);

            let pw = |k: T| (k * ln_s).exp();
            let dp = m
                * (f * (one + (two * b + one) * pw(-two * b - two))
                    + (one - f) * ((two * b - one) * pw(two * b - two) + three * pw(-T::lit(4.0))));
            let d2p = m
                * (-f * (two * b + one) * (two * b + two) * pw(-two * b - three)
                    + (one - f)
                        * ((two * b - one) * (two * b - two) * pw(two * b - three)
                            - T::lit(12.0) * pw(-T::lit(5.0))));
            StressEval { p, dp, d2p }
        }
        ModelKind::Linear => {
            let c2 = l + two * m;
            StressEval { p: c2 * g, dp: c2, d2p: T::zero() }
        }
    }
}

/// [`stress`] taking a raw strain.
pub fn stress_at<T: Real>(model: &ModelSpec<T>, gamma: T) -> Result<StressEval<T>> {
    Ok(stress(model, StrainPoint::new(gamma)?))
}

/// `∫₀^Γ P(w) dw` in closed form.
pub fn stress_antiderivative<T: Real>(model: &ModelSpec<T>, gamma: T) -> Result<T> {
    let pt = StrainPoint::new(gamma)?;
    let (g, s) = (pt.gamma, pt.s);
    let m = model.mu / model.rho0;
    let l = model.lambda / model.rho0;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let s2m1 = g * (g + two);
    let value = match model.kind {
        ModelKind::StVenantKirchhoff => (l + two * m) / two * s2m1 * s2m1 / four,
        ModelKind::KirchhoffModified => {
            let ln_s = g.ln_1p();
            m * s2m1 * s2m1 / four + l * ln_s * ln_s / two
        }
        ModelKind::Ogden => l * g * g / two + m * (s2m1 / two - g.ln_1p()),
        ModelKind::BlatzKoOgden => {
            let f = model.f.unwrap_or_else(T::zero);
            let b = model.beta();
            let ln_s = g.ln_1p();
            let tb = two * b;
            // (s^k - 1)/k for k = ±2β
            let pw = |k: T| (k * ln_s).exp_m1() / k;
            let first = s2m1 / two - pw(-tb);
            let second = pw(tb) - s2m1 / (two * s * s);
            m * (f * first + (T::one() - f) * second)
        }
        ModelKind::Linear => (l + two * m) * g * g / two,
    };
    Ok(value)
}

/// Dimensionless impact function `Q(Γ) = ρ₀ Γ P(Γ) / μ`, written with
/// `β = λ/(2μ)` only, so that the shock condition reads `Q(Γ_l) = ρ₀V₀²/μ`.
pub fn q_value<T: Real>(model: &ModelSpec<T>, gamma: T) -> Result<T> {
    let pt = StrainPoint::new(gamma)?;
    let (g, s) = (pt.gamma, pt.s);
    let b = model.beta();
    let one = T::one();
    let two = T::lit(2.0);
    let s2m1 = g * (g + two);
    match model.kind {
        ModelKind::KirchhoffModified => Ok(g * (s * s2m1 + two * b * g.ln_1p() / s)),
        ModelKind::Ogden => Ok(g * (two * b * g + s2m1 / s)),
        ModelKind::BlatzKoOgden => {
            let f = model.f.unwrap_or_else(T::zero);
            let ln_s = g.ln_1p();
            let e = two * b + two;
            let down = -(-e * ln_s).exp_m1();
            let up = (e * ln_s).exp_m1();
            let s4 = s * s * s * s;
            Ok(g * s * (f * down + (one - f) * up / s4))
        }
        kind => Err(Error::Usage(format!(
            "q_value is defined for kirchhoff_modified, ogden and blatz_ko, not {kind}"
        ))),
    }
}
