//! Test-only reference implementations and fixtures.
//!
//! The oracles here materialize the full 5x5 weight table and convolve
//! directly in two dimensions, sharing no code with the separable kernels
//! they check.

#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use glpb::codec::write_png;
use glpb::{Image64, ImageOf, Kernel64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mirror about the end samples by repeated folding.
pub fn mirror(mut i: i64, n: usize) -> usize {
    let n = n as i64;
    if n == 1 {
        return 0;
    }
    while i < 0 || i >= n {
        if i < 0 {
            i = -i;
        }
        if i >= n {
            i = 2 * (n - 1) - i;
        }
    }
    i as usize
}

pub fn weight_table(kernel: &Kernel64) -> [[f64; 5]; 5] {
    let t = kernel.taps();
    let mut w = [[0.0; 5]; 5];
    for m in 0..5 {
        for n in 0..5 {
            w[m][n] = t[m] * t[n];
        }
    }
    w
}

/// Direct 2-D blur at every pixel followed by keeping even coordinates.
pub fn reduce_oracle(img: &Image64, kernel: &Kernel64) -> Image64 {
    let w = weight_table(kernel);
    let (iw, ih) = img.dims();
    let mut blurred = vec![0.0; iw * ih * img.channels()];
    for c in 0..img.channels() {
        for y in 0..ih {
            for x in 0..iw {
                let mut s = 0.0;
                for m in -2i64..=2 {
                    for n in -2i64..=2 {
                        let sx = mirror(x as i64 + m, iw);
                        let sy = mirror(y as i64 + n, ih);
                        s += w[(m + 2) as usize][(n + 2) as usize] * img.get(c, sx, sy);
                    }
                }
                blurred[c * iw * ih + y * iw + x] = s;
            }
        }
    }
    let (ow, oh) = (iw.div_ceil(2), ih.div_ceil(2));
    ImageOf::from_fn(ow, oh, img.channels(), |c, x, y| {
        blurred[c * iw * ih + (2 * y) * iw + 2 * x]
    })
}

/// Zero-insertion upsampling to `tw` x `th`, then direct 2-D convolution
/// with `4 * w(m, n)`.
pub fn expand_oracle(img: &Image64, kernel: &Kernel64, tw: usize, th: usize) -> Image64 {
    let w = weight_table(kernel);
    let up = ImageOf::from_fn(tw, th, img.channels(), |c, x, y| {
        if x % 2 == 0 && y % 2 == 0 {
            img.get(c, x / 2, y / 2)
        } else {
            0.0
        }
    });
    ImageOf::from_fn(tw, th, img.channels(), |c, x, y| {
        let mut s = 0.0;
        for m in -2i64..=2 {
            for n in -2i64..=2 {
                let sx = mirror(x as i64 - m, tw);
                let sy = mirror(y as i64 - n, th);
                s += 4.0 * w[(m + 2) as usize][(n + 2) as usize] * up.get(c, sx, sy);
            }
        }
        s
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, w: usize, h: usize, c: usize) -> Image64 {
    ImageOf::from_fn(w, h, c, |_, _, _| rng.random::<f64>())
}

/// Smooth gradients plus mild texture, closer to natural images than noise.
pub fn textured_image(rng: &mut impl Rng, w: usize, h: usize, c: usize) -> Image64 {
    let fx: f64 = rng.random_range(0.5..3.0);
    let fy: f64 = rng.random_range(0.5..3.0);
    let base: f64 = rng.random_range(0.2..0.8);
    let phase: f64 = rng.random_range(0.0..TAU);
    ImageOf::from_fn(w, h, c, |ch, x, y| {
        let u = x as f64 / w as f64;
        let v = y as f64 / h as f64;
        let smooth = 0.2 * (fx * TAU * u + phase + ch as f64).sin() * (fy * TAU * v).cos();
        let grain = 0.1 * (rng.random::<f64>() - 0.5);
        (base + smooth + grain).clamp(0.0, 1.0)
    })
}

/// Writes a PNG whose content is a deterministic function of `seed`.
pub fn write_fixture_png(path: &Path, w: usize, h: usize, seed: u64) {
    let mut r = rng(seed);
    let img = textured_image(&mut r, w, h, 3).cast::<f32>();
    write_png(path, &img).unwrap();
}

/// Populates `root` with BreakHis-named PNGs: `benign` images spread over
/// `benign_patients` adenosis patients and `malignant` images over
/// `malignant_patients` ductal-carcinoma patients, all at `mag`.
pub fn write_corpus(
    root: &Path,
    benign: usize,
    benign_patients: usize,
    malignant: usize,
    malignant_patients: usize,
    mag: u16,
    size: (usize, usize),
) -> Vec<PathBuf> {
    let mut paths = Vec::new();
    let dir_b = root.join("benign");
    let dir_m = root.join("malignant");
    std::fs::create_dir_all(&dir_b).unwrap();
    std::fs::create_dir_all(&dir_m).unwrap();
    for i in 0..benign {
        let p = dir_b.join(format!(
            "SOB_B_A-14-{}-{mag}-{:03}.png",
            1000 + i % benign_patients,
            i + 1
        ));
        write_fixture_png(&p, size.0, size.1, i as u64);
        paths.push(p);
    }
    for i in 0..malignant {
        let p = dir_m.join(format!(
            "SOB_M_DC-14-{}-{mag}-{:03}.png",
            2000 + i % malignant_patients,
            i + 1
        ));
        write_fixture_png(&p, size.0, size.1, 1000 + i as u64);
        paths.push(p);
    }
    paths
}

/// Per-subtype (code, images, patients) for the synthetic BreakHis index.
/// Malignant rows follow the BreakHis distribution; tubular adenoma is
/// trimmed so the benign class sums to 2,368.
pub const BREAKHIS_SUBTYPES: [(&str, char, usize, usize); 8] = [
    ("A", 'B', 444, 4),
    ("F", 'B', 1014, 10),
    ("PT", 'B', 453, 3),
    ("TA", 'B', 457, 7),
    ("DC", 'M', 3451, 38),
    ("LC", 'M', 626, 5),
    ("MC", 'M', 792, 9),
    ("PC", 'M', 560, 6),
];

/// In-memory index with the class, subtype and patient totals of
/// `BREAKHIS_SUBTYPES`. Images are dealt round-robin over the four magnifications
/// within each class and round-robin over patients within each subtype.
pub fn breakhis_index() -> glpb::dataset::DatasetIndex {
    use glpb::dataset::{DatasetIndex, SampleRecord};
    let mags = [40, 100, 200, 400];
    let mut records = Vec::new();
    let mut patient_base = 100;
    let mut class_pos = [0usize; 2];
    for (code, class, images, patients) in BREAKHIS_SUBTYPES {
        let ci = (class == 'M') as usize;
        for j in 0..images {
            let mag = mags[class_pos[ci] % 4];
            class_pos[ci] += 1;
            let patient = patient_base + j % patients;
            let name = format!("SOB_{class}_{code}-14-{patient}-{mag}-{}.png", j + 1);
            records.push(SampleRecord::from_path(Path::new(&name)).unwrap());
        }
        patient_base += patients;
    }
    DatasetIndex::from_records(records).unwrap()
}
