//! Five-tap separable generating kernel.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Radius of the generating kernel; taps span offsets `-2..=2`.
pub const RADIUS: usize = 2;

/// 1-D generator of the separable 5x5 smoothing weights.
///
/// The 2-D weight at offset `(m, n)` is `tap(m) * tap(n)`. Every kernel is
/// normalized, symmetric, and satisfies the equal-contribution rule
/// `tap(-2) + tap(0) + tap(2) == tap(-1) + tap(1) == 1/2`, which is what makes
/// expand reproduce constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel<T> {
    taps: [T; 5],
}

impl<T: Scalar> Kernel<T> {
    /// Validates user-supplied taps, ordered from offset -2 to +2.
    pub fn new(taps: [T; 5]) -> Result<Self> {
        let tol = T::kernel_tolerance();
        if let Some(t) = taps.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidKernel(format!("non-finite tap {t}")));
        }
        let sum = taps.iter().fold(T::zero(), |s, &t| s + t);
        if (sum - T::one()).abs() > tol {
            return Err(Error::InvalidKernel(format!(
                "taps sum to {sum}, expected 1"
            )));
        }
        if (taps[0] - taps[4]).abs() > tol || (taps[1] - taps[3]).abs() > tol {
            return Err(Error::InvalidKernel("taps are not symmetric".into()));
        }
        let half = T::lit(0.5);
        let even = taps[0] + taps[2] + taps[4];
        let odd = taps[1] + taps[3];
        if (even - half).abs() > tol || (odd - half).abs() > tol {
            return Err(Error::InvalidKernel(format!(
                "unequal contribution: even taps sum to {even}, odd taps to {odd}"
            )));
        }
        Ok(Self { taps })
    }

    /// `[1, 4, 6, 4, 1] / 16`, the 3-tap binomial `(1/4, 1/2, 1/4)` convolved
    /// with itself.
    pub fn binomial() -> Self {
        Self::from_center_weight(T::lit(0.375)).expect("binomial kernel is valid")
    }

    /// The one-parameter family `[1/4 - a/2, 1/4, a, 1/4, 1/4 - a/2]`.
    ///
    /// Every member satisfies the kernel rules; `a = 0.375` is the binomial
    /// kernel and `a = 0.4` the classic Gaussian-like choice.
    pub fn from_center_weight(a: T) -> Result<Self> {
        let q = T::lit(0.25);
        let edge = q - a / T::lit(2.0);
        Self::new([edge, q, a, q, edge])
    }

    #[inline]
    pub fn taps(&self) -> &[T; 5] {
        &self.taps
    }

    /// Tap at signed offset `k` in `-2..=2`.
    #[inline]
    pub fn tap(&self, k: isize) -> T {
        self.taps[(k + RADIUS as isize) as usize]
    }

    /// Separable 2-D weight `w(m, n)`.
    #[inline]
    pub fn weight(&self, m: isize, n: isize) -> T {
        self.tap(m) * self.tap(n)
    }

    pub fn cast<U: Scalar>(&self) -> Kernel<U> {
        Kernel {
            taps: self.taps.map(|t| U::lit(t.to_f64_lossy())),
        }
    }
}

impl<T: Scalar> Default for Kernel<T> {
    fn default() -> Self {
        Self::binomial()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_taps() {
        let k = Kernel::<f64>::binomial();
        assert_eq!(
            k.taps(),
            &[1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0]
        );
        assert_eq!(k.tap(-2), k.tap(2));
        assert_eq!(k.weight(0, 0), 36.0 / 256.0);
    }

    #[test]
    fn binomial_is_three_tap_self_convolution() {
        let b3 = [0.25f64, 0.5, 0.25];
        let mut conv = [0.0; 5];
        for (i, &p) in b3.iter().enumerate() {
            for (j, &q) in b3.iter().enumerate() {
                conv[i + j] += p * q;
            }
        }
        assert_eq!(&conv, Kernel::<f64>::binomial().taps());
    }

    #[test]
    fn weights_sum_to_one_in_2d() {
        let k = Kernel::<f32>::default();
        let mut s = 0.0;
        for m in -2..=2 {
            for n in -2..=2 {
                s += k.weight(m, n);
            }
        }
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_invalid_kernels() {
        // not normalized
        assert!(Kernel::new([0.1f32, 0.25, 0.4, 0.25, 0.1]).is_err());
        // asymmetric
        assert!(Kernel::new([0.0f32, 0.3, 0.5, 0.2, 0.0]).is_err());
        // normalized and symmetric but unequal contribution
        assert!(Kernel::new([0.1f64, 0.2, 0.4, 0.2, 0.1]).is_err());
        assert!(Kernel::new([f32::NAN, 0.25, 0.5, 0.25, 0.0]).is_err());
    }

    #[test]
    fn center_weight_family_is_valid() {
        for a in [0.3f64, 0.375, 0.4, 0.5, 0.6] {
            let k = Kernel::from_center_weight(a).unwrap();
            assert!((k.tap(-2) + k.tap(0) + k.tap(2) - 0.5).abs() < 1e-12);
        }
    }
}
