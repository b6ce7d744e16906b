//! Gaussian-Laplacian pyramid blending for image data augmentation.
//!
//! The numeric core ([`pyramid`], [`blend`]) is generic over the sample
//! type through [`Scalar`]; the crate root re-exports `f32` aliases, which
//! is the precision the dataset pipeline renders with. [`dataset`] indexes
//! a BreakHis-style corpus and plans and executes class balancing and
//! multiplication by blending images of different patients.
//!
//! ```
//! use glpb::{make_half_mask, pyramid_blend, Image, Kernel, Orientation};
//!
//! let a = Image::filled(64, 48, 3, 0.2);
//! let b = Image::filled(64, 48, 3, 0.8);
//! let mask = make_half_mask(64, 48, Orientation::Vertical);
//! let out = pyramid_blend(&a, &b, &mask, &Kernel::default(), 4).unwrap();
//! assert_eq!(out.dims(), (64, 48));
//! ```

pub mod blend;
pub mod codec;
pub mod dataset;
mod error;
pub mod image;
pub mod kernel;
pub mod pyramid;
mod scalar;

pub use blend::{
    direct_blend, make_half_mask, max_adjacent_jump, mix_blend, pyramid_blend, ramp_mask,
    seam_energy, BlendMethod, BlendSpec, MaskKind, Orientation,
};
pub use error::{Error, Result};
pub use pyramid::{
    build_gaussian, build_laplacian, collapse, default_levels, expand, max_levels, reduce,
};
pub use scalar::Scalar;

/// Planar image, generic over sample precision.
pub type ImageOf<T> = image::Image<T>;

/// Working-precision aliases.
pub type Image = image::Image<f32>;
pub type Kernel = kernel::Kernel<f32>;
pub type GaussianPyramid = pyramid::GaussianPyramid<f32>;
pub type LaplacianPyramid = pyramid::LaplacianPyramid<f32>;
pub type BlendMask = blend::BlendMask<f32>;

/// Double-precision aliases, used by reference computations.
pub type Image64 = image::Image<f64>;
pub type Kernel64 = kernel::Kernel<f64>;
pub type GaussianPyramid64 = pyramid::GaussianPyramid<f64>;
pub type LaplacianPyramid64 = pyramid::LaplacianPyramid<f64>;
pub type BlendMask64 = blend::BlendMask<f64>;
