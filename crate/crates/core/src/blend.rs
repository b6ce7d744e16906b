//! Compositing two images under a mask: hard-edged direct blending, the
//! linear-ramp "mix" baseline, and multi-resolution pyramid blending.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::kernel::Kernel;
use crate::pyramid::{build_gaussian, build_laplacian, check_levels, collapse, LaplacianPyramid};
use crate::scalar::Scalar;

/// Direction of the seam between the two halves.
///
/// `Vertical` splits left/right (the seam is a vertical line); `Horizontal`
/// splits top/bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl Orientation {
    /// Length of the axis the blend transitions along.
    pub fn span(self, width: usize, height: usize) -> usize {
        match self {
            Orientation::Vertical => width,
            Orientation::Horizontal => height,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskKind {
    HalfVertical,
    HalfHorizontal,
    Custom,
}

impl MaskKind {
    pub fn orientation(self) -> Option<Orientation> {
        match self {
            MaskKind::HalfVertical => Some(Orientation::Vertical),
            MaskKind::HalfHorizontal => Some(Orientation::Horizontal),
            MaskKind::Custom => None,
        }
    }
}

impl fmt::Display for MaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaskKind::HalfVertical => "half_vertical",
            MaskKind::HalfHorizontal => "half_horizontal",
            MaskKind::Custom => "custom",
        })
    }
}

impl FromStr for MaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_vertical" | "half-vertical" => Ok(MaskKind::HalfVertical),
            "half_horizontal" | "half-horizontal" => Ok(MaskKind::HalfHorizontal),
            "custom" => Ok(MaskKind::Custom),
            _ => Err(Error::InvalidParameter(format!("unknown mask kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlendMethod {
    Direct,
    Mix,
    Glpb,
}

impl fmt::Display for BlendMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlendMethod::Direct => "direct",
            BlendMethod::Mix => "mix",
            BlendMethod::Glpb => "glpb",
        })
    }
}

impl FromStr for BlendMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(BlendMethod::Direct),
            "mix" => Ok(BlendMethod::Mix),
            "glpb" => Ok(BlendMethod::Glpb),
            _ => Err(Error::InvalidParameter(format!(
                "unknown blend method {s:?}"
            ))),
        }
    }
}

/// Single-channel weight map in `[0, 1]`; 0 selects image A, 1 image B.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendMask<T> {
    mask: Image<T>,
}

impl<T: Scalar> BlendMask<T> {
    pub fn new(mask: Image<T>) -> Result<Self> {
        if mask.channels() != 1 {
            return Err(Error::InvalidMask(format!(
                "mask must have one channel, got {}",
                mask.channels()
            )));
        }
        if let Some(v) = mask.data().iter().find(|&&v| v < T::zero() || v > T::one()) {
            return Err(Error::InvalidMask(format!("mask value {v} outside [0, 1]")));
        }
        Ok(Self { mask })
    }

    pub fn image(&self) -> &Image<T> {
        &self.mask
    }

    pub fn dims(&self) -> (usize, usize) {
        self.mask.dims()
    }

    /// `1 - R`, swapping the roles of A and B.
    pub fn inverted(&self) -> Self {
        Self {
            mask: self.mask.map(|v| T::one() - v),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.mask
            .data()
            .iter()
            .all(|&v| v == T::zero() || v == T::one())
    }
}

/// Binary mask that is 0 on the first half and 1 on the second.
///
/// For `Vertical`, columns `[0, floor(w/2))` are 0 and the rest 1; rows for
/// `Horizontal`.
pub fn make_half_mask<T: Scalar>(
    width: usize,
    height: usize,
    orientation: Orientation,
) -> BlendMask<T> {
    let split = orientation.span(width, height) / 2;
    let mask = Image::from_fn(width, height, 1, |_, x, y| {
        let pos = match orientation {
            Orientation::Vertical => x,
            Orientation::Horizontal => y,
        };
        if pos < split {
            T::zero()
        } else {
            T::one()
        }
    });
    BlendMask { mask }
}

/// Mask ramping linearly from 0 to 1 across a band of `transition_width`
/// pixels centered on the half split.
///
/// Weights are sampled at pixel centers, so a full-width ramp on an image of
/// width `W` puts `0.5 + 1/(2W)` on the center column. A width of 0 gives
/// the half mask.
pub fn ramp_mask<T: Scalar>(
    width: usize,
    height: usize,
    orientation: Orientation,
    transition_width: usize,
) -> Result<BlendMask<T>> {
    let span = orientation.span(width, height);
    if transition_width > span {
        return Err(Error::InvalidParameter(format!(
            "transition width {transition_width} exceeds blend span {span}"
        )));
    }
    if transition_width == 0 {
        return Ok(make_half_mask(width, height, orientation));
    }
    let tw = transition_width as f64;
    let start = (span / 2) as f64 - tw / 2.0;
    let profile: Vec<T> = (0..span)
        .map(|i| T::lit(((i as f64 + 0.5 - start) / tw).clamp(0.0, 1.0)))
        .collect();
    let mask = Image::from_fn(width, height, 1, |_, x, y| match orientation {
        Orientation::Vertical => profile[x],
        Orientation::Horizontal => profile[y],
    });
    Ok(BlendMask { mask })
}

fn check_pair<T: Scalar>(a: &Image<T>, b: &Image<T>, mask: Option<&BlendMask<T>>) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::DimMismatch(format!(
            "image A is {}x{}x{}, image B is {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    if let Some(m) = mask {
        if m.dims() != a.dims() {
            return Err(Error::DimMismatch(format!(
                "mask is {}x{}, images are {}x{}",
                m.dims().0,
                m.dims().1,
                a.width(),
                a.height()
            )));
        }
    }
    Ok(())
}

/// `(1 - r) * a + r * b` per sample, with the single-channel `r` shared by
/// every channel.
fn interpolate<T: Scalar>(a: &Image<T>, b: &Image<T>, r: &Image<T>) -> Image<T> {
    let n = a.plane_len();
    let mut out = Vec::with_capacity(a.data().len());
    let weights = r.plane(0);
    for (pa, pb) in a.planes().zip(b.planes()) {
        out.extend(
            pa.iter()
                .zip(pb)
                .zip(weights)
                .map(|((&va, &vb), &w)| (T::one() - w) * va + w * vb),
        );
    }
    debug_assert_eq!(out.len(), n * a.channels());
    Image::from_raw(a.width(), a.height(), a.channels(), out)
}

/// Per-pixel interpolation under the mask; with a binary half mask this is
/// plain concatenation of A's first half and B's second half.
pub fn direct_blend<T: Scalar>(
    a: &Image<T>,
    b: &Image<T>,
    mask: &BlendMask<T>,
) -> Result<Image<T>> {
    check_pair(a, b, Some(mask))?;
    Ok(interpolate(a, b, mask.image()))
}

/// Linear colour transition across a centered band of `transition_width`
/// pixels; A outside the band on the first side, B on the second.
pub fn mix_blend<T: Scalar>(
    a: &Image<T>,
    b: &Image<T>,
    orientation: Orientation,
    transition_width: usize,
) -> Result<Image<T>> {
    check_pair(a, b, None)?;
    let mask = ramp_mask(a.width(), a.height(), orientation, transition_width)?;
    Ok(interpolate(a, b, mask.image()))
}

/// Multi-resolution blend: both images are split into Laplacian pyramids,
/// each level (including the residual) is interpolated under the matching
/// level of the mask's Gaussian pyramid, and the result is collapsed.
///
/// The returned image is not clamped; ringing near strong edges can push
/// samples slightly outside `[0, 1]`.
pub fn pyramid_blend<T: Scalar>(
    a: &Image<T>,
    b: &Image<T>,
    mask: &BlendMask<T>,
    kernel: &Kernel<T>,
    n_levels: usize,
) -> Result<Image<T>> {
    check_pair(a, b, Some(mask))?;
    check_levels(a.width(), a.height(), n_levels)?;
    let la = build_laplacian(a, kernel, n_levels)?;
    let lb = build_laplacian(b, kernel, n_levels)?;
    let rg = build_gaussian(mask.image(), kernel, n_levels)?;

    let bands = (0..n_levels)
        .map(|k| interpolate(la.level(k), lb.level(k), rg.level(k)))
        .collect();
    let top = interpolate(la.top(), lb.top(), rg.top());
    let fl = LaplacianPyramid::from_parts(bands, top)?;
    Ok(collapse(&fl, kernel))
}

/// Largest absolute difference between neighbouring samples along the
/// blend axis (adjacent columns for `Vertical`), over the whole image.
pub fn max_adjacent_jump<T: Scalar>(img: &Image<T>, orientation: Orientation) -> T {
    let (w, h) = img.dims();
    let mut best = T::zero();
    for plane in img.planes() {
        match orientation {
            Orientation::Vertical => {
                for row in plane.chunks_exact(w) {
                    for pair in row.windows(2) {
                        best = best.max((pair[1] - pair[0]).abs());
                    }
                }
            }
            Orientation::Horizontal => {
                for y in 1..h {
                    let (prev, cur) = (&plane[(y - 1) * w..y * w], &plane[y * w..(y + 1) * w]);
                    for (&p, &c) in prev.iter().zip(cur) {
                        best = best.max((c - p).abs());
                    }
                }
            }
        }
    }
    best
}

/// Mean absolute difference across the half split (between positions
/// `floor(span/2) - 1` and `floor(span/2)`), averaged over the seam length
/// and channels. Zero when the span is shorter than 2.
pub fn seam_energy<T: Scalar>(img: &Image<T>, orientation: Orientation) -> T {
    let (w, h) = img.dims();
    let span = orientation.span(w, h);
    if span < 2 {
        return T::zero();
    }
    let s = span / 2;
    let mut total = T::zero();
    let mut count = 0usize;
    for plane in img.planes() {
        match orientation {
            Orientation::Vertical => {
                for row in plane.chunks_exact(w) {
                    total += (row[s] - row[s - 1]).abs();
                    count += 1;
                }
            }
            Orientation::Horizontal => {
                for x in 0..w {
                    total += (plane[s * w + x] - plane[(s - 1) * w + x]).abs();
                    count += 1;
                }
            }
        }
    }
    total / T::lit(count as f64)
}

/// Method and mask choice for a single composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlendSpec {
    pub method: BlendMethod,
    pub mask_kind: MaskKind,
    /// Ramp width in pixels; used by `Mix` only.
    pub transition_width: usize,
    /// Pyramid depth for `Glpb`; `None` picks the default for the image size.
    pub n_levels: Option<usize>,
}

impl Default for BlendSpec {
    fn default() -> Self {
        Self {
            method: BlendMethod::Glpb,
            mask_kind: MaskKind::HalfVertical,
            transition_width: 0,
            n_levels: None,
        }
    }
}

impl BlendSpec {
    /// Checks the spec against the image size it will be applied to.
    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        if self.method == BlendMethod::Mix {
            let orientation = self.mask_kind.orientation().ok_or_else(|| {
                Error::InvalidParameter("mix blending needs a half mask orientation".into())
            })?;
            let span = orientation.span(width, height);
            if self.transition_width > span {
                return Err(Error::InvalidParameter(format!(
                    "transition width {} exceeds blend span {span}",
                    self.transition_width
                )));
            }
        }
        if self.method == BlendMethod::Glpb {
            if let Some(n) = self.n_levels {
                check_levels(width, height, n)?;
            }
        }
        Ok(())
    }

    /// Resolved pyramid depth for a given image size.
    pub fn levels_for(&self, width: usize, height: usize) -> usize {
        self.n_levels
            .unwrap_or_else(|| crate::pyramid::default_levels(width, height))
    }

    /// Blends `a` and `b`. `custom_mask` is required when `mask_kind` is
    /// `Custom` and ignored otherwise.
    pub fn apply<T: Scalar>(
        &self,
        a: &Image<T>,
        b: &Image<T>,
        custom_mask: Option<&BlendMask<T>>,
        kernel: &Kernel<T>,
    ) -> Result<Image<T>> {
        check_pair(a, b, None)?;
        let (w, h) = a.dims();
        self.validate(w, h)?;
        let owned;
        let mask = match self.mask_kind.orientation() {
            Some(o) => {
                owned = make_half_mask(w, h, o);
                &owned
            }
            None => custom_mask.ok_or_else(|| {
                Error::InvalidMask("custom mask kind selected but no mask supplied".into())
            })?,
        };
        match self.method {
            BlendMethod::Direct => direct_blend(a, b, mask),
            BlendMethod::Mix => {
                let o = self.mask_kind.orientation().expect("validated above");
                mix_blend(a, b, o, self.transition_width)
            }
            BlendMethod::Glpb => pyramid_blend(a, b, mask, kernel, self.levels_for(w, h)),
        }
    }
}
