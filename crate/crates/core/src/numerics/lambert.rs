use crate::{Error, Real, Result};

const MAX_ITER: usize = 64;

/// Principal branch `W₀` of the Lambert W function: the `w >= -1` solving
/// `w·eʷ = x`, defined for `x >= -1/e`.
///
/// Halley iteration on `w·eʷ - x` below `x = 10`, Newton iteration on the
/// overflow-free form `w + ln w = ln x` above it.
pub fn lambert_w0<T: Real>(x: T) -> Result<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let branch = -(-one).exp();
    if x.is_nan() {
        return Err(Error::Domain("lambert_w0 of NaN".into()));
    }
    if x < branch {
        // a few ulps below -1/e is still the branch point
        if branch - x <= T::lit(4.0) * T::epsilon() {
            return Ok(-one);
        }
        return Err(Error::Domain(format!(
            "lambert_w0 requires x >= -1/e, got {x}"
        )));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x == T::infinity() {
        return Ok(T::infinity());
    }

    let tol = T::lit(4.0) * T::epsilon();

    if x > T::lit(10.0) {
        let ln_x = x.ln();
        let l2 = ln_x.ln();
        let mut w = ln_x - l2 + l2 / ln_x;
        for _ in 0..MAX_ITER {
            let g = w + w.ln() - ln_x;
            let step = g / (one + one / w);
            w = w - step;
            if step.abs() <= tol * w {
                break;
            }
        }
        return Ok(w);
    }

    let mut w = if x < T::lit(-0.32) {
        // expansion about the branch point
        let p = (two * (T::E() * x + one)).max(T::zero()).sqrt();
        -one + p - p * p / T::lit(3.0) + T::lit(11.0 / 72.0) * p * p * p
    } else {
        let l = x.ln_1p();
        l * (one - (one + l).ln() / (two + l))
    };

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        if wp1 == T::zero() {
            break;
        }
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w = w - step;
        if step.abs() <= tol * (one + w.abs()) {
            break;
        }
    }
    Ok(w)
}
