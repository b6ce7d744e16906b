mod common;

use common::{random_image, rng, textured_image};
use glpb::{
    direct_blend, make_half_mask, max_adjacent_jump, max_levels, mix_blend, pyramid_blend,
    ramp_mask, seam_energy, BlendMask64, BlendMethod, BlendSpec, Error, Image64, ImageOf, Kernel64,
    MaskKind, Orientation,
};
use proptest::prelude::*;

fn random_mask(seed: u64, w: usize, h: usize) -> BlendMask64 {
    BlendMask64::new(random_image(&mut rng(seed), w, h, 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bilinear_in_the_sources(
        seed in any::<u64>(),
        w in 8usize..48,
        h in 8usize..48,
        alpha in -1.5f64..1.5,
    ) {
        let k = Kernel64::binomial();
        let mut r = rng(seed);
        let a1 = random_image(&mut r, w, h, 3);
        let a2 = random_image(&mut r, w, h, 3);
        let b = random_image(&mut r, w, h, 3);
        let m = random_mask(seed ^ 1, w, h);
        let n = max_levels(w, h).min(4);
        let mixed = a1.scale(alpha).try_add(&a2).unwrap();
        let bz = Image64::zeros(w, h, 3);
        let lhs = pyramid_blend(&mixed, &b, &m, &k, n).unwrap();
        let f1 = pyramid_blend(&a1, &bz, &m, &k, n).unwrap();
        let f2 = pyramid_blend(&a2, &b, &m, &k, n).unwrap();
        let rhs = f1.scale(alpha).try_add(&f2).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn swapping_sources_inverts_the_mask(seed in any::<u64>(), w in 8usize..48, h in 8usize..48) {
        let k = Kernel64::binomial();
        let mut r = rng(seed);
        let a = random_image(&mut r, w, h, 1);
        let b = random_image(&mut r, w, h, 1);
        let m = random_mask(seed ^ 2, w, h);
        let n = max_levels(w, h).min(4);
        let fwd = pyramid_blend(&a, &b, &m, &k, n).unwrap();
        let rev = pyramid_blend(&b, &a, &m.inverted(), &k, n).unwrap();
        prop_assert!(fwd.max_abs_diff(&rev).unwrap() <= 1e-10);
    }

    #[test]
    fn output_stays_near_unit_range(seed in any::<u64>(), w in 16usize..64, h in 16usize..64) {
        let k = Kernel64::binomial();
        let mut r = rng(seed);
        let a = textured_image(&mut r, w, h, 3);
        let b = textured_image(&mut r, w, h, 3);
        let m = make_half_mask(w, h, Orientation::Vertical);
        let out = pyramid_blend(&a, &b, &m, &k, max_levels(w, h)).unwrap();
        let (lo, hi) = out.min_max();
        prop_assert!(lo >= -0.15 && hi <= 1.15, "range [{lo}, {hi}]");
    }

    #[test]
    fn direct_matches_per_pixel_selection(seed in any::<u64>(), w in 1usize..30, h in 1usize..30) {
        let mut r = rng(seed);
        let a = random_image(&mut r, w, h, 3);
        let b = random_image(&mut r, w, h, 3);
        let bits = ImageOf::from_fn(w, h, 1, |_, x, y| (x * 31 + y * 17 + seed as usize).is_multiple_of(3) as u8 as f64);
        let m = BlendMask64::new(bits.clone()).unwrap();
        let out = direct_blend(&a, &b, &m).unwrap();
        for c in 0..3 {
            for y in 0..h {
                for x in 0..w {
                    let src = if bits.get(0, x, y) == 1.0 { &b } else { &a };
                    prop_assert_eq!(out.get(c, x, y), src.get(c, x, y));
                }
            }
        }
    }
}

#[test]
fn identities_hold_at_every_depth() {
    let k = Kernel64::binomial();
    let mut r = rng(11);
    let (w, h) = (64, 48);
    let a = random_image(&mut r, w, h, 3);
    let b = random_image(&mut r, w, h, 3);
    let zero = BlendMask64::new(Image64::zeros(w, h, 1)).unwrap();
    let one = BlendMask64::new(Image64::filled(w, h, 1, 1.0)).unwrap();
    let soft = random_mask(5, w, h);
    for n in 0..=max_levels(w, h) {
        assert!(
            pyramid_blend(&a, &b, &zero, &k, n)
                .unwrap()
                .max_abs_diff(&a)
                .unwrap()
                <= 1e-10
        );
        assert!(
            pyramid_blend(&a, &b, &one, &k, n)
                .unwrap()
                .max_abs_diff(&b)
                .unwrap()
                <= 1e-10
        );
        assert!(
            pyramid_blend(&a, &a, &soft, &k, n)
                .unwrap()
                .max_abs_diff(&a)
                .unwrap()
                <= 1e-10
        );
    }
    assert_eq!(
        pyramid_blend(&a, &b, &soft, &k, 0).unwrap(),
        direct_blend(&a, &b, &soft).unwrap()
    );
}

#[test]
fn seam_jump_shrinks_with_depth() {
    let k = Kernel64::binomial();
    let (w, h) = (128, 96);
    let a = Image64::filled(w, h, 3, 0.2);
    let b = Image64::filled(w, h, 3, 0.8);
    let m = make_half_mask(w, h, Orientation::Vertical);
    let direct = direct_blend(&a, &b, &m).unwrap();
    assert!((max_adjacent_jump(&direct, Orientation::Vertical) - 0.6).abs() <= 1e-12);
    assert!((seam_energy(&direct, Orientation::Vertical) - 0.6).abs() <= 1e-12);
    let jumps: Vec<f64> = (0..=max_levels(w, h))
        .map(|n| {
            max_adjacent_jump(
                &pyramid_blend(&a, &b, &m, &k, n).unwrap(),
                Orientation::Vertical,
            )
        })
        .collect();
    for pair in jumps.windows(2) {
        assert!(pair[1] < pair[0], "{jumps:?}");
    }
}

#[test]
fn horizontal_masks_split_rows() {
    let m = make_half_mask::<f64>(4, 5, Orientation::Horizontal);
    let rows: Vec<f64> = (0..5).map(|y| m.image().get(0, 3, y)).collect();
    assert_eq!(rows, [0.0, 0.0, 1.0, 1.0, 1.0]);
    assert!(m.is_binary());
}

#[test]
fn ramp_is_centered_and_monotone() {
    let m = ramp_mask::<f64>(20, 3, Orientation::Vertical, 8).unwrap();
    let row: Vec<f64> = (0..20).map(|x| m.image().get(0, x, 1)).collect();
    assert!(row[..6].iter().all(|&v| v == 0.0));
    assert!(row[14..].iter().all(|&v| v == 1.0));
    assert!(row.windows(2).all(|p| p[1] >= p[0]));
    assert!((row[9] + row[10] - 1.0).abs() <= 1e-12);
    assert_eq!(
        ramp_mask::<f64>(20, 3, Orientation::Vertical, 0).unwrap(),
        make_half_mask(20, 3, Orientation::Vertical)
    );
    assert!(matches!(
        ramp_mask::<f64>(20, 3, Orientation::Vertical, 21),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn mix_lowers_seam_energy_as_band_widens() {
    let a = Image64::filled(40, 10, 1, 0.1);
    let b = Image64::filled(40, 10, 1, 0.9);
    let energies: Vec<f64> = [0, 4, 10, 20, 40]
        .into_iter()
        .map(|tw| {
            seam_energy(
                &mix_blend(&a, &b, Orientation::Vertical, tw).unwrap(),
                Orientation::Vertical,
            )
        })
        .collect();
    for pair in energies.windows(2) {
        assert!(pair[1] < pair[0], "{energies:?}");
    }
}

#[test]
fn shape_mismatches_are_reported() {
    let k = Kernel64::binomial();
    let a = Image64::zeros(16, 16, 3);
    let b = Image64::zeros(16, 8, 3);
    let m = make_half_mask(16, 16, Orientation::Vertical);
    assert!(matches!(
        pyramid_blend(&a, &b, &m, &k, 2),
        Err(Error::DimMismatch(_))
    ));
    let m_small = make_half_mask(8, 8, Orientation::Vertical);
    assert!(matches!(
        direct_blend(&a, &a, &m_small),
        Err(Error::DimMismatch(_))
    ));
    assert!(matches!(
        pyramid_blend(&a, &a, &m, &k, 5),
        Err(Error::TooManyLevels { .. })
    ));
}

#[test]
fn spec_dispatches_to_each_method() {
    let k = Kernel64::binomial();
    let mut r = rng(21);
    let a = textured_image(&mut r, 32, 32, 3);
    let b = textured_image(&mut r, 32, 32, 3);
    let half = make_half_mask(32, 32, Orientation::Vertical);
    let spec = |method, n_levels| BlendSpec {
        method,
        mask_kind: MaskKind::HalfVertical,
        transition_width: 6,
        n_levels,
    };
    assert_eq!(
        spec(BlendMethod::Direct, None)
            .apply(&a, &b, None, &k)
            .unwrap(),
        direct_blend(&a, &b, &half).unwrap()
    );
    assert_eq!(
        spec(BlendMethod::Mix, None)
            .apply(&a, &b, None, &k)
            .unwrap(),
        mix_blend(&a, &b, Orientation::Vertical, 6).unwrap()
    );
    assert_eq!(
        spec(BlendMethod::Glpb, Some(3))
            .apply(&a, &b, None, &k)
            .unwrap(),
        pyramid_blend(&a, &b, &half, &k, 3).unwrap()
    );
    let custom = BlendSpec {
        mask_kind: MaskKind::Custom,
        ..spec(BlendMethod::Glpb, Some(2))
    };
    assert!(custom.apply(&a, &b, None, &k).is_err());
    let soft = random_mask(3, 32, 32);
    assert_eq!(
        custom.apply(&a, &b, Some(&soft), &k).unwrap(),
        pyramid_blend(&a, &b, &soft, &k, 2).unwrap()
    );
}
