//! Planar multi-channel raster.
//!
//! Samples are stored channel-major, then row-major: the value of channel
//! `c` at column `x`, row `y` lives at `data[c * w * h + y * w + x]`.
//! Intensities of decoded images are normalized to `[0, 1]`; intermediate
//! results (Laplacian bands, unclamped blends) may leave that range.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Scalar> Image<T> {
    /// Wraps planar sample data, checking the layout and that every sample is
    /// finite.
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if channels == 0 {
            return Err(Error::InvalidImage(
                "image needs at least one channel".into(),
            ));
        }
        let expected = width * height * channels;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} samples for {width}x{height}x{channels}, got {}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidImage(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self::from_raw(width, height, channels, data))
    }

    pub(crate) fn from_raw(width: usize, height: usize, channels: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        Self {
            width,
            height,
            channels,
            data,
        }
    }

    /// An image with every sample set to `value`.
    ///
    /// # Panics
    /// If a dimension is zero or `value` is not finite.
    pub fn filled(width: usize, height: usize, channels: usize, value: T) -> Self {
        assert!(width > 0 && height > 0 && channels > 0, "empty image");
        assert!(value.is_finite(), "non-finite fill value");
        Self::from_raw(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self::filled(width, height, channels, T::zero())
    }

    /// Builds an image by evaluating `f(channel, x, y)` at every sample.
    ///
    /// # Panics
    /// If a dimension is zero or `f` returns a non-finite value.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        assert!(width > 0 && height > 0 && channels > 0, "empty image");
        let mut data = Vec::with_capacity(width * height * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    let v = f(c, x, y);
                    assert!(v.is_finite(), "non-finite sample at ({c}, {x}, {y})");
                    data.push(v);
                }
            }
        }
        Self::from_raw(width, height, channels, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn plane_len(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn plane(&self, c: usize) -> &[T] {
        let n = self.plane_len();
        &self.data[c * n..(c + 1) * n]
    }

    pub(crate) fn plane_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.plane_len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn planes(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.plane_len())
    }

    #[inline]
    pub fn get(&self, c: usize, x: usize, y: usize) -> T {
        self.data[c * self.plane_len() + y * self.width + x]
    }

    /// # Panics
    /// If `v` is not finite or the coordinates are out of range.
    #[inline]
    pub fn set(&mut self, c: usize, x: usize, y: usize, v: T) {
        assert!(v.is_finite(), "non-finite sample");
        let n = self.plane_len();
        self.data[c * n + y * self.width + x] = v;
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub(crate) fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert!(self.same_shape(other));
        Self::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Sample-wise sum. Errors when shapes differ.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    /// Sample-wise difference. Errors when shapes differ.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|v| v * k)
    }

    /// Copy with every sample clamped to `[0, 1]`.
    pub fn clamped(&self) -> Self {
        self.map(|v| v.max(T::zero()).min(T::one()))
    }

    pub fn min_max(&self) -> (T, T) {
        self.data
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Largest absolute sample difference. Errors when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Scalar>(&self) -> Image<U> {
        Image::from_raw(
            self.width,
            self.height,
            self.channels,
            self.data
                .iter()
                .map(|&v| U::lit(v.to_f64_lossy()))
                .collect(),
        )
    }

    /// Single channel `c` as its own image.
    pub fn channel(&self, c: usize) -> Self {
        Self::from_raw(self.width, self.height, 1, self.plane(c).to_vec())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )))
        }
    }
}
