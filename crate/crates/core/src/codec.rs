//! PNG decode/encode between files and planar normalized images.
//!
//! Grayscale PNGs decode to one channel, everything else to RGB; alpha is
//! dropped. Encoding clamps to `[0, 1]` and quantizes to 8 bits per channel.

use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

pub fn decode_png_bytes<T: Scalar>(bytes: &[u8], origin: &Path) -> Result<Image<T>> {
    let decoded = image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(|e| {
        Error::Decode {
            path: origin.to_path_buf(),
            reason: e.to_string(),
        }
    })?;
    Ok(from_dynamic(&decoded))
}

pub fn read_png<T: Scalar>(path: &Path) -> Result<Image<T>> {
    let bytes = std::fs::read(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    decode_png_bytes(&bytes, path)
}

fn from_dynamic<T: Scalar>(img: &DynamicImage) -> Image<T> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let wide = img.color().bytes_per_pixel() / img.color().channel_count() > 1;
    let color = img.color().has_color();
    let channels = if color { 3 } else { 1 };

    let interleaved: Vec<f64> = match (color, wide) {
        (true, true) => img
            .to_rgb16()
            .into_raw()
            .iter()
            .map(|&v| v as f64 / 65535.0)
            .collect(),
        (true, false) => img
            .to_rgb8()
            .into_raw()
            .iter()
            .map(|&v| v as f64 / 255.0)
            .collect(),
        (false, true) => img
            .to_luma16()
            .into_raw()
            .iter()
            .map(|&v| v as f64 / 65535.0)
            .collect(),
        (false, false) => img
            .to_luma8()
            .into_raw()
            .iter()
            .map(|&v| v as f64 / 255.0)
            .collect(),
    };
    let mut data = vec![T::zero(); w * h * channels];
    let n = w * h;
    for (i, px) in interleaved.chunks_exact(channels).enumerate() {
        for (c, &v) in px.iter().enumerate() {
            data[c * n + i] = T::lit(v);
        }
    }
    Image::from_raw(w, h, channels, data)
}

/// Nearest 8-bit code for a sample, after clamping to `[0, 1]`.
#[inline]
pub fn quantize<T: Scalar>(v: T) -> u8 {
    let v = v.to_f64_lossy().clamp(0.0, 1.0);
    (v * 255.0).round() as u8
}

pub fn encode_png<T: Scalar>(img: &Image<T>) -> Result<Vec<u8>> {
    let color = match img.channels() {
        1 => ExtendedColorType::L8,
        3 => ExtendedColorType::Rgb8,
        c => {
            return Err(Error::Encode(format!(
                "cannot encode {c}-channel image as PNG"
            )))
        }
    };
    let (w, h) = img.dims();
    let n = w * h;
    let channels = img.channels();
    let mut interleaved = vec![0u8; n * channels];
    for (c, plane) in img.planes().enumerate() {
        for (i, &v) in plane.iter().enumerate() {
            interleaved[i * channels + c] = quantize(v);
        }
    }
    let mut out = Cursor::new(Vec::new());
    PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive)
        .write_image(&interleaved, w as u32, h as u32, color)
        .map_err(|e| Error::Encode(e.to_string()))?;
    Ok(out.into_inner())
}

pub fn write_png<T: Scalar>(path: &Path, img: &Image<T>) -> Result<()> {
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgb_round_trip_is_lossless_on_8bit_codes() {
        let img = Image::<f32>::from_fn(7, 5, 3, |c, x, y| {
            ((c * 50 + x * 30 + y * 7) % 256) as f32 / 255.0
        });
        let bytes = encode_png(&img).unwrap();
        let back: Image<f32> = decode_png_bytes(&bytes, Path::new("mem")).unwrap();
        assert_eq!(back.channels(), 3);
        assert!(back.max_abs_diff(&img).unwrap() < 1e-6);
    }

    #[test]
    fn gray_stays_single_channel_and_clamps() {
        let img = Image::new(3, 1, 1, vec![-0.2f64, 0.5, 1.7]).unwrap();
        let back: Image<f64> =
            decode_png_bytes(&encode_png(&img).unwrap(), Path::new("mem")).unwrap();
        assert_eq!(back.channels(), 1);
        assert_eq!(back.data()[0], 0.0);
        assert_eq!(back.data()[2], 1.0);
        assert!((back.data()[1] - 128.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn encoding_is_deterministic() {
        let img = Image::<f32>::from_fn(16, 16, 3, |c, x, y| ((c + x * y) % 11) as f32 / 10.0);
        assert_eq!(encode_png(&img).unwrap(), encode_png(&img).unwrap());
    }

    #[test]
    fn garbage_fails_to_decode() {
        let r: Result<Image<f32>> = decode_png_bytes(b"not a png", Path::new("x.png"));
        assert!(matches!(r, Err(Error::Decode { .. })));
        assert!(encode_png(&Image::<f32>::zeros(2, 2, 2)).is_err());
    }
}
