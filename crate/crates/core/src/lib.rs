//! Numerical toolkit for the one-dimensional elasticity p-system
//!
//! ```text
//! V_t - P(Γ)_X = 0,    Γ_t - V_X = 0,    Γ > -1
//! ```
//!
//! The crate is organized bottom-up:
//!
//! * [numerics] holds the scalar kernels (bracketed root finding, grid+golden
//!   minimization, adaptive Gauss-Kronrod quadrature, principal Lambert W).
//! * [constitutive] evaluates the stress laws `P(Γ)` with exact first and
//!   second derivatives and exact antiderivatives.
//! * [analysis] finds strain regions where `P' > 0` (hyperbolicity) and
//!   `P'' < 0` (genuine nonlinearity) together with the parameter thresholds of
//!   each law.
//! * [shock] builds the compression shock of the impact problem from the
//!   Rankine-Hugoniot conditions and checks weak-form integral identities.
//! * [entropy] decides the entropy inequality for the standard
//!   entropy/entropy-flux pair.
//! * [simulator] is a first-order finite-volume solver used as an
//!   independent cross-check of the analytic shock.
//! * [tables] assembles impact-speed tables of the left strain.
//!
//! Every algorithm is generic over the floating-point type through [Real];
//! the `*64` aliases below fix it to `f64`, which is what the command-line
//! front end and the reference tables use.

// NaN-rejecting guards are written as `!(x > y)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constitutive;
pub mod entropy;
mod error;
pub mod numerics;
pub mod shock;
pub mod simulator;
pub mod tables;

pub use error::{Error, Result};

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar accepted by every routine in this crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        // f32 and f64 both accept every finite f64 (with rounding).
        Self::from_f64(v).expect("literal representable as Real")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub use analysis::RegionReport;
pub use constitutive::{ModelKind, ModelSpec, StrainPoint, StressEval};
pub use entropy::EntropyVerdict;
pub use shock::{BoundarySpec, ShockSolution, TestFunction};
pub use simulator::{SimConfig, SimField};

pub type ModelSpec64 = ModelSpec<f64>;
pub type StressEval64 = StressEval<f64>;
pub type RegionReport64 = RegionReport<f64>;
pub type ShockSolution64 = ShockSolution<f64>;
pub type EntropyVerdict64 = EntropyVerdict<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type SimField64 = SimField<f64>;
pub type BoundarySpec64 = BoundarySpec<f64>;
pub type TestFunction64 = TestFunction<f64>;

pub type ModelSpec32 = ModelSpec<f32>;
pub type StressEval32 = StressEval<f32>;
