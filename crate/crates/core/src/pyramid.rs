//! Gaussian and Laplacian pyramids.
//!
//! `reduce` blurs with the 5x5 separable kernel and keeps every second
//! sample; `expand` is its interpolating counterpart. Both mirror the signal
//! about the first and last sample (`-1 -> 1`, `len -> len - 2`) so borders
//! are not darkened. Odd sizes are handled by ceil-halving on the way down
//! and by an explicit target size on the way up, which keeps the Laplacian
//! decomposition exactly invertible for every input size.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::kernel::{Kernel, RADIUS};
use crate::scalar::Scalar;

/// Mirror index `i` into `0..len` without repeating the edge sample.
#[inline]
pub(crate) fn reflect(i: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let r = i.rem_euclid(period);
    if r >= len as isize {
        (period - r) as usize
    } else {
        r as usize
    }
}

/// Size of the next coarser level along one axis.
#[inline]
pub fn halve(len: usize) -> usize {
    len.div_ceil(2)
}

/// Deepest legal level count for a `width` x `height` image: every halving
/// must leave at least one pixel per axis, i.e. `floor(log2(min(w, h)))`.
pub fn max_levels(width: usize, height: usize) -> usize {
    let m = width.min(height);
    if m == 0 {
        0
    } else {
        m.ilog2() as usize
    }
}

/// Level count used when the caller does not pick one; keeps the top level
/// at least 4 pixels on its short side.
pub fn default_levels(width: usize, height: usize) -> usize {
    max_levels(width, height).saturating_sub(2)
}

pub(crate) fn check_levels(width: usize, height: usize, requested: usize) -> Result<()> {
    let max = max_levels(width, height);
    if requested > max {
        return Err(Error::TooManyLevels {
            requested,
            max,
            width,
            height,
        });
    }
    Ok(())
}

/// Per-output-sample source indices and weights along one axis.
struct AxisTaps<T> {
    per_output: usize,
    idx: Vec<usize>,
    weight: Vec<T>,
}

impl<T: Scalar> AxisTaps<T> {
    fn reduce(len_in: usize, kernel: &Kernel<T>) -> Self {
        let len_out = halve(len_in);
        let r = RADIUS as isize;
        let mut idx = Vec::with_capacity(len_out * 5);
        let mut weight = Vec::with_capacity(len_out * 5);
        for o in 0..len_out as isize {
            for m in -r..=r {
                idx.push(reflect(2 * o + m, len_in));
                weight.push(kernel.tap(m));
            }
        }
        Self {
            per_output: 5,
            idx,
            weight,
        }
    }

    /// Output sample `o` gathers `2 * tap(m) * in[(o - m) / 2]` over the
    /// offsets where the mirrored fine position `o - m` is even. Mirroring
    /// about `0` and `len_out - 1` preserves parity, so each output has 3
    /// (even `o`) or 2 (odd `o`) contributions; the latter are padded with a
    /// zero weight.
    fn expand(len_in: usize, len_out: usize, kernel: &Kernel<T>) -> Self {
        debug_assert!(len_out == 2 * len_in || len_out + 1 == 2 * len_in);
        let r = RADIUS as isize;
        let two = T::lit(2.0);
        let mut idx = Vec::with_capacity(len_out * 3);
        let mut weight = Vec::with_capacity(len_out * 3);
        for o in 0..len_out as isize {
            let mut n = 0;
            for m in -r..=r {
                let p = reflect(o - m, len_out);
                if p.is_multiple_of(2) {
                    idx.push(p / 2);
                    weight.push(two * kernel.tap(m));
                    n += 1;
                }
            }
            for _ in n..3 {
                idx.push(0);
                weight.push(T::zero());
            }
        }
        Self {
            per_output: 3,
            idx,
            weight,
        }
    }

    #[inline]
    fn len_out(&self) -> usize {
        self.idx.len() / self.per_output
    }
}

/// Horizontal pass then vertical pass, independently per channel.
fn apply_separable<T: Scalar>(img: &Image<T>, h: &AxisTaps<T>, v: &AxisTaps<T>) -> Image<T> {
    let (w_in, h_in) = img.dims();
    let w_out = h.len_out();
    let h_out = v.len_out();
    let mut out = Image::from_raw(
        w_out,
        h_out,
        img.channels(),
        vec![T::zero(); w_out * h_out * img.channels()],
    );
    let mut tmp = vec![T::zero(); w_out * h_in];

    for c in 0..img.channels() {
        let src = img.plane(c);
        for (row_in, row_tmp) in src.chunks_exact(w_in).zip(tmp.chunks_exact_mut(w_out)) {
            for (x, dst) in row_tmp.iter_mut().enumerate() {
                let base = x * h.per_output;
                let mut s = T::zero();
                for k in base..base + h.per_output {
                    s += h.weight[k] * row_in[h.idx[k]];
                }
                *dst = s;
            }
        }

        let dst = out.plane_mut(c);
        for (y, row_out) in dst.chunks_exact_mut(w_out).enumerate() {
            let base = y * v.per_output;
            for k in base..base + v.per_output {
                let wk = v.weight[k];
                if wk == T::zero() {
                    continue;
                }
                let row_src = &tmp[v.idx[k] * w_out..(v.idx[k] + 1) * w_out];
                for (o, &s) in row_out.iter_mut().zip(row_src) {
                    *o += wk * s;
                }
            }
        }
    }
    out
}

/// Blur with the separable kernel and decimate by two.
///
/// Output is `ceil(w/2)` x `ceil(h/2)`; a 1x1 input yields a 1x1 copy.
pub fn reduce<T: Scalar>(img: &Image<T>, kernel: &Kernel<T>) -> Image<T> {
    let h = AxisTaps::reduce(img.width(), kernel);
    let v = AxisTaps::reduce(img.height(), kernel);
    apply_separable(img, &h, &v)
}

/// Interpolate `img` up to `target_w` x `target_h`.
///
/// Each target axis must be `2n - 1` or `2n` for an input axis of length `n`,
/// which covers every size `reduce` can have come from.
pub fn expand<T: Scalar>(
    img: &Image<T>,
    kernel: &Kernel<T>,
    target_w: usize,
    target_h: usize,
) -> Result<Image<T>> {
    let (w, h) = img.dims();
    let legal = |n: usize, t: usize| t == 2 * n || t + 1 == 2 * n;
    if !legal(w, target_w) || !legal(h, target_h) {
        return Err(Error::TargetDimMismatch {
            width: w,
            height: h,
            target_w,
            target_h,
        });
    }
    let ht = AxisTaps::expand(w, target_w, kernel);
    let vt = AxisTaps::expand(h, target_h, kernel);
    Ok(apply_separable(img, &ht, &vt))
}

/// Stack of successively reduced images; level 0 is the input.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPyramid<T> {
    levels: Vec<Image<T>>,
}

impl<T: Scalar> GaussianPyramid<T> {
    pub fn levels(&self) -> &[Image<T>] {
        &self.levels
    }

    pub fn level(&self, l: usize) -> &Image<T> {
        &self.levels[l]
    }

    /// Number of reductions applied (the index of the top level).
    pub fn n_levels(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn top(&self) -> &Image<T> {
        self.levels.last().expect("pyramid has a base level")
    }

    pub fn level_dims(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(Image::dims).collect()
    }

    pub fn into_levels(self) -> Vec<Image<T>> {
        self.levels
    }
}

/// Band-pass levels plus the coarsest Gaussian level as residual.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPyramid<T> {
    bands: Vec<Image<T>>,
    top: Image<T>,
}

impl<T: Scalar> LaplacianPyramid<T> {
    /// Assembles a pyramid from parts, checking that each level is the
    /// ceil-halved size of the one below and that channel counts agree.
    pub fn from_parts(bands: Vec<Image<T>>, top: Image<T>) -> Result<Self> {
        let mut prev: Option<&Image<T>> = None;
        for level in bands.iter().chain(std::iter::once(&top)) {
            if let Some(p) = prev {
                let want = (halve(p.width()), halve(p.height()));
                if level.dims() != want || level.channels() != p.channels() {
                    return Err(Error::DimMismatch(format!(
                        "level of {}x{}x{} cannot sit above {}x{}x{}",
                        level.width(),
                        level.height(),
                        level.channels(),
                        p.width(),
                        p.height(),
                        p.channels()
                    )));
                }
            }
            prev = Some(level);
        }
        Ok(Self { bands, top })
    }

    pub fn bands(&self) -> &[Image<T>] {
        &self.bands
    }

    /// The residual: the smallest Gaussian level, stored as-is.
    pub fn top(&self) -> &Image<T> {
        &self.top
    }

    pub fn n_levels(&self) -> usize {
        self.bands.len()
    }

    /// Level `l` in `0..=n_levels()`, with the residual at the top index.
    pub fn level(&self, l: usize) -> &Image<T> {
        self.bands.get(l).unwrap_or(&self.top)
    }

    pub fn level_dims(&self) -> Vec<(usize, usize)> {
        self.bands
            .iter()
            .chain(std::iter::once(&self.top))
            .map(Image::dims)
            .collect()
    }

    pub fn into_parts(self) -> (Vec<Image<T>>, Image<T>) {
        (self.bands, self.top)
    }
}

pub fn build_gaussian<T: Scalar>(
    img: &Image<T>,
    kernel: &Kernel<T>,
    n_levels: usize,
) -> Result<GaussianPyramid<T>> {
    check_levels(img.width(), img.height(), n_levels)?;
    let mut levels = Vec::with_capacity(n_levels + 1);
    levels.push(img.clone());
    for l in 0..n_levels {
        let next = reduce(&levels[l], kernel);
        levels.push(next);
    }
    Ok(GaussianPyramid { levels })
}

pub fn build_laplacian<T: Scalar>(
    img: &Image<T>,
    kernel: &Kernel<T>,
    n_levels: usize,
) -> Result<LaplacianPyramid<T>> {
    let mut levels = build_gaussian(img, kernel, n_levels)?.into_levels();
    let top = levels.pop().expect("pyramid has a base level");
    let mut bands = Vec::with_capacity(n_levels);
    for (l, g) in levels.iter().enumerate() {
        let coarser = levels.get(l + 1).unwrap_or(&top);
        let up = expand(coarser, kernel, g.width(), g.height())?;
        bands.push(g.zip_map(&up, |a, b| a - b));
    }
    Ok(LaplacianPyramid { bands, top })
}

/// Rebuild the full-resolution image: start from the residual and
/// repeatedly expand and add the next finer band.
pub fn collapse<T: Scalar>(lp: &LaplacianPyramid<T>, kernel: &Kernel<T>) -> Image<T> {
    let mut acc = lp.top.clone();
    for band in lp.bands.iter().rev() {
        let up = expand(&acc, kernel, band.width(), band.height())
            .expect("level dims validated at construction");
        acc = band.zip_map(&up, |a, b| a + b);
    }
    acc
}
