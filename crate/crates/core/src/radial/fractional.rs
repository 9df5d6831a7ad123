use crate::error::{Error, Result};
use crate::spectral::SpectralTransform;

use super::RadialField;

/// `|grad|^alpha u` as the spectral multiplier `k^alpha`, for `alpha in (-n, 2]`.
pub fn fractional_power(
    transform: &SpectralTransform,
    u: &RadialField,
    alpha: f64,
) -> Result<RadialField> {
    let n = transform.grid().dimension();
    if !(alpha > -(n as f64) && alpha <= 2.0) {
        return Err(Error::FractionalOrder {
            alpha,
            dimension: n,
        });
    }
    if alpha == 0.0 {
        let c = transform.forward(u)?;
        return Ok(transform.backward(&c));
    }
    transform.apply_multiplier(u, |k| k.powf(alpha))
}

/// Kernel constant `c_{n,alpha}` with `|grad|^alpha f = c_{n,alpha} int f(y) |x-y|^{-n-alpha} dy`
/// for `-n < alpha < 0`.
pub fn riesz_constant(dimension: usize, alpha: f64) -> f64 {
    let n = dimension as f64;
    2f64.powf(alpha) * libm::tgamma((n + alpha) / 2.0)
        / (std::f64::consts::PI.powf(n / 2.0) * libm::tgamma(-alpha / 2.0))
}
