//! Scalar numerical kernels shared by the rest of the crate.
//!
//! All kernels are pure functions of their inputs.

mod lambert;
mod optimize;
mod quadrature;
mod roots;

pub use lambert::lambert_w0;
pub use optimize::{maximize_scalar, minimize_scalar, minimize_scalar_with_grid, MIN_GRID_POINTS};
pub use quadrature::{integrate, integrate_with_depth, MAX_DEPTH};
pub use roots::{default_tol_f, default_tol_x, find_root, find_root_in, Bracket, RootResult};

use crate::{Error, Real};

/// Evaluates `f(x)` and rejects NaN and infinities.
#[inline]
pub(crate) fn finite<T: Real>(x: T, fx: T, what: &str) -> crate::Result<T> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::Domain(format!(
            "{what}: non-finite value {fx} at x = {x}"
        )))
    }
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
