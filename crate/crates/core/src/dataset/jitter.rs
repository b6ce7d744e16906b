use rand::Rng;

use super::seed::rng_for;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

/// Largest gain deviation at strength 1.
pub const MAX_GAIN_DEVIATION: f64 = 0.2;
/// Largest offset magnitude at strength 1.
pub const MAX_OFFSET: f64 = 0.1;

/// Per-channel affine colour perturbation `v * gain + offset`, clamped to
/// `[0, 1]`.
///
/// Gains are drawn from `1 ± 0.2 * strength` and offsets from
/// `± 0.1 * strength`, channel by channel, from a stream keyed by
/// `entry_seed`. Strength 0 returns the input unchanged.
pub fn color_jitter<T: Scalar>(img: &Image<T>, strength: f64, entry_seed: u64) -> Result<Image<T>> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::InvalidParameter(format!(
            "jitter strength {strength} outside [0, 1]"
        )));
    }
    let mut rng = rng_for(entry_seed);
    let mut out = img.clone();
    for c in 0..img.channels() {
        let gain = T::lit(1.0 + MAX_GAIN_DEVIATION * strength * rng.random_range(-1.0..=1.0));
        let offset = T::lit(MAX_OFFSET * strength * rng.random_range(-1.0..=1.0));
        for v in out.plane_mut(c) {
            *v = (*v * gain + offset).max(T::zero()).min(T::one());
        }
    }
    Ok(out)
}
