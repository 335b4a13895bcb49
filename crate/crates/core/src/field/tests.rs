use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn grid(n: usize, l: f64) -> Arc<Grid<f64>> {
    Grid::new(GridSpec::new(n, n, l, l).unwrap()).unwrap()
}

fn random(g: &Arc<Grid<f64>>, seed: u64, zero_mean: bool) -> ScalarField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BandLimited {
        max_mode: 8.min(g.nx().min(g.nz()) / 6),
        rms: 1.0,
        zero_mean,
    }
    .sample(g, &mut rng)
    .unwrap()
}

fn bump(x: f64, z: f64, w: f64) -> f64 {
    (-(x * x + z * z) / (w * w)).exp()
}

/// Eighth-order centred difference in x on a periodic sample array.
fn fd8_ddx(vals: &[f64], n: usize, h: f64) -> Vec<f64> {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for (m, c) in C.iter().enumerate() {
                let o = m + 1;
                let ip = (i + o) % n;
                let im = (i + n - o) % n;
                s += c * (vals[ip * n + j] - vals[im * n + j]);
            }
            out[i * n + j] = s / h;
        }
    }
    out
}

#[test]
fn grid_validation_names_the_offending_size() {
    let err = GridSpec::new(7, 16, 1.0, 1.0).unwrap_err().to_string();
    assert!(err.contains("nx must be even and >= 8"), "{err}");
    assert!(GridSpec::new(16, 6, 1.0, 1.0).is_err());
    assert!(GridSpec::new(16, 16, 0.0, 1.0).is_err());
    assert!(GridSpec::new(16, 16, 1.0, f64::NAN).is_err());
}

#[test]
fn coordinates_are_centred() {
    let g = grid(16, 4.0);
    assert_eq!(g.xs()[0], -2.0);
    assert!((g.xs()[8]).abs() < 1e-15);
    // one sample sits at -L/2, none at +L/2
    let sum: f64 = g.xs().iter().sum();
    assert!((sum + 2.0).abs() < 1e-12);
}

#[test]
fn non_finite_samples_are_rejected() {
    let g = grid(8, 1.0);
    let mut v = vec![0.0; 64];
    v[5] = f64::INFINITY;
    assert!(matches!(
        ScalarField::from_values(&g, v),
        Err(crate::Error::NonFinite { index: 5, .. })
    ));
}

#[test]
fn derivative_of_constant_vanishes() {
    let g = grid(32, 3.0);
    let c = ScalarField::constant(&g, 2.5);
    assert!(c.ddx().max_abs() < 1e-14);
    assert!(c.ddz().max_abs() < 1e-14);
    assert!(c.laplacian().max_abs() < 1e-14);
    assert!(c.grad_norm_sq().max_abs() < 1e-14);
}

#[test]
fn ddx_of_sine_is_exact() {
    let l = 3.0;
    let g = grid(64, l);
    let k = TAU / l;
    let f = ScalarField::from_fn(&g, |x, _| (k * x).sin()).unwrap();
    let want = ScalarField::from_fn(&g, |x, _| k * (k * x).cos()).unwrap();
    assert!(f.ddx().max_abs_diff(&want) <= 1e-12);
    let fz = ScalarField::from_fn(&g, |_, z| (k * z).sin()).unwrap();
    let wantz = ScalarField::from_fn(&g, |_, z| k * (k * z).cos()).unwrap();
    assert!(fz.ddz().max_abs_diff(&wantz) <= 1e-12);
}

#[test]
fn ddx_of_gaussian_matches_eighth_order_differences() {
    let l = TAU;
    let w = l / 10.0;
    let n = 128;
    let g = grid(n, l);
    let f = ScalarField::from_fn(&g, |x, z| bump(x, z, w)).unwrap();
    let spectral = f.ddx();

    let fine = grid(2 * n, l);
    let ff = ScalarField::from_fn(&fine, |x, z| bump(x, z, w)).unwrap();
    let fd = fd8_ddx(ff.values(), 2 * n, fine.spec().dx());
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            err = err.max((spectral.at(i, j) - fd[(2 * i) * 2 * n + 2 * j]).abs());
        }
    }
    assert!(err <= 1e-8, "spectral vs fd8 mismatch {err:e}");
}

#[test]
fn laplacian_eigenfunction() {
    let g = grid(32, TAU);
    let f = ScalarField::from_fn(&g, |x, z| x.sin() * z.sin()).unwrap();
    let lap = f.laplacian();
    assert!(lap.max_abs_diff(&f.scale(-2.0)) <= 1e-12);
}

#[test]
fn laplacian_matches_composed_second_derivatives() {
    let g = grid(64, 5.0);
    let f = random(&g, 3, false);
    let composed = f.ddx().ddx() + f.ddz().ddz();
    let scale = f.laplacian().max_abs().max(1.0);
    assert!(f.laplacian().max_abs_diff(&composed) <= 1e-12 * scale);
}

#[test]
fn invert_laplacian_cases() {
    let g = grid(32, TAU);
    let zero = ScalarField::zeros(&g);
    assert!(zero.invert_laplacian().unwrap().max_abs() == 0.0);

    let src = ScalarField::from_fn(&g, |x, z| -2.0 * x.sin() * z.sin()).unwrap();
    let want = ScalarField::from_fn(&g, |x, z| x.sin() * z.sin()).unwrap();
    assert!(src.invert_laplacian().unwrap().max_abs_diff(&want) <= 1e-12);

    let offset = ScalarField::constant(&g, 1e-3) + &src;
    assert!(matches!(
        offset.invert_laplacian(),
        Err(crate::Error::Solvability { .. })
    ));
}

#[test]
fn laplacian_inversion_round_trip() {
    let g = grid(64, TAU);
    let zeta = random(&g, 11, true);
    let psi = zeta.invert_laplacian().unwrap();
    assert!(psi.mean().abs() < 1e-15);
    assert!(psi.laplacian().max_abs_diff(&zeta) <= 1e-11);
}

#[test]
fn jacobian_cases() {
    let g = grid(64, TAU);
    let a = random(&g, 1, true);
    assert!(a.jacobian(&a).unwrap().max_abs() <= 1e-12);

    let sx = ScalarField::from_fn(&g, |x, _| x.sin()).unwrap();
    let sz = ScalarField::from_fn(&g, |_, z| z.sin()).unwrap();
    let want = ScalarField::from_fn(&g, |x, z| x.cos() * z.cos()).unwrap();
    assert!(sx.jacobian(&sz).unwrap().max_abs_diff(&want) <= 1e-10);

    let b = random(&g, 2, true);
    let ab = a.jacobian(&b).unwrap();
    let ba = b.jacobian(&a).unwrap();
    assert!((ab + ba).max_abs() <= 1e-12);
}

#[test]
fn jacobian_rejects_grid_mismatch() {
    let a = ScalarField::zeros(&grid(16, 1.0));
    let b = ScalarField::zeros(&grid(16, 2.0));
    assert!(matches!(a.jacobian(&b), Err(crate::Error::GridMismatch)));
}

#[test]
fn integrate_cases() {
    let g: Arc<Grid<f64>> = Grid::new(GridSpec::new(32, 16, 3.0, 2.0).unwrap()).unwrap();
    assert!((ScalarField::constant(&g, 1.5).integrate() - 9.0).abs() < 1e-13);
    let s = ScalarField::from_fn(&g, |x, _| (TAU * x / 3.0).sin()).unwrap();
    assert!(s.integrate().abs() <= 1e-13);
}

#[test]
fn integrate_gaussian_is_resolution_converged() {
    let l = TAU;
    let w = l / 10.0;
    let coarse = ScalarField::from_fn(&grid(64, l), |x, z| bump(x, z, w)).unwrap().integrate();
    let fine = ScalarField::from_fn(&grid(256, l), |x, z| bump(x, z, w)).unwrap().integrate();
    assert!((coarse - fine).abs() <= 1e-10);
    // and both agree with the closed form up to the truncated tails
    assert!((fine - PI * w * w).abs() < 1e-9);
}

#[test]
fn grad_norm_sq_cases() {
    let g = grid(64, TAU);
    let s = ScalarField::from_fn(&g, |x, _| x.sin()).unwrap();
    let want = ScalarField::from_fn(&g, |x, _| x.cos().powi(2)).unwrap();
    assert!(s.grad_norm_sq().max_abs_diff(&want) <= 1e-11);

    let r = random(&g, 5, true);
    let composed = &r.ddx() * &r.ddx() + &r.ddz() * &r.ddz();
    assert!(r.grad_norm_sq().max_abs_diff(&composed) <= 1e-12 * composed.max_abs().max(1.0));
}

#[test]
fn dealiasing_removes_upper_third() {
    let g = grid(32, TAU);
    let high = ScalarField::from_fn(&g, |x, _| (12.0 * x).cos()).unwrap();
    assert!(high.dealias().max_abs() < 1e-14);
    let low = ScalarField::from_fn(&g, |x, z| (10.0 * x).cos() * (3.0 * z).sin()).unwrap();
    assert!(low.dealias().max_abs_diff(&low) < 1e-13);
}

#[test]
fn weighted_derivatives_apply_product_rule() {
    let g = grid(32, TAU);
    let f = random(&g, 9, false);
    let xf = Weighted::from(&f).times_x();
    let d = xf.ddx().eval();
    let want = &f + &f.ddx().times_x();
    assert!(d.max_abs_diff(&want) < 1e-12);

    let x = Weighted::x(&g);
    assert!((x.ddx().eval() - ScalarField::constant(&g, 1.0)).max_abs() < 1e-15);
    assert!(x.ddz().eval().max_abs() < 1e-15);

    // x^2 z is annihilated by the fourth x-derivative and has d2/dxdz = 2x
    let poly = &(&x * &x) * &Weighted::z(&g);
    assert!(poly.ddx().ddz().eval().max_abs_diff(&ScalarField::coord_x(&g).scale(2.0)) < 1e-12);
    assert_eq!(poly.degree(), 3);
}

#[test]
fn weighted_laplacian_of_weighted_field() {
    // laplacian(x F) = x laplacian(F) + 2 F_x
    let g = grid(32, TAU);
    let f = random(&g, 21, true);
    let lhs = Weighted::from(&f).times_x().laplacian().eval();
    let rhs = f.laplacian().times_x() + f.ddx().scale(2.0);
    assert!(lhs.max_abs_diff(&rhs) < 1e-11);
}

#[test]
fn interpolant_reproduces_samples_and_derivatives() {
    let g = grid(16, TAU);
    let f = ScalarField::from_fn(&g, |x, z| (2.0 * x + z).sin() + 0.5 * (x - 3.0 * z).cos()).unwrap();
    let it = FourierInterpolant::new(&f);
    assert!((it.eval(g.xs()[3], g.zs()[5]) - f.at(3, 5)).abs() < 1e-13);
    let (x, z) = (0.123, -1.7);
    let out = it.eval_orders(x, z, &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]);
    let exact = [
        (2.0 * x + z).sin() + 0.5 * (x - 3.0 * z).cos(),
        2.0 * (2.0 * x + z).cos() - 0.5 * (x - 3.0 * z).sin(),
        (2.0 * x + z).cos() + 1.5 * (x - 3.0 * z).sin(),
        -4.0 * (2.0 * x + z).sin() - 0.5 * (x - 3.0 * z).cos(),
        -2.0 * (2.0 * x + z).sin() + 1.5 * (x - 3.0 * z).cos(),
    ];
    for (a, b) in out.iter().zip(exact) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
    assert_eq!(it.bandwidth(1e-12), (2, 3));
}

#[test]
fn binary_round_trip_and_header() {
    let g = Grid::new(GridSpec::new(16, 8, 2.0, 1.0).unwrap()).unwrap();
    let f = random(&g, 4, false);
    let mut buf = Vec::new();
    io::write_field(&f, &mut buf).unwrap();
    assert_eq!(buf.len(), io::FIELD_HEADER_LEN + 8 * 128);
    assert_eq!(&buf[0..4], b"SWF1");
    let back: ScalarField<f64> = io::read_field(buf.as_slice()).unwrap();
    assert_eq!(back.values(), f.values());
    assert_eq!(back.spec(), f.spec());

    let on = io::read_field_on(&g, buf.as_slice()).unwrap();
    assert!(on.same_grid(&f));
    let other = grid(16, 2.0);
    assert!(io::read_field_on(&other, buf.as_slice()).is_err());

    buf[0] = b'X';
    assert!(matches!(
        io::read_field::<f64, _>(buf.as_slice()),
        Err(crate::Error::Format(_))
    ));
}

#[test]
fn csv_export_has_one_row_per_sample() {
    let g = grid(8, 1.0);
    let f = ScalarField::from_fn(&g, |x, z| x + 10.0 * z).unwrap();
    let mut buf = Vec::new();
    io::write_field_csv(&f, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 65);
    assert!(text.starts_with("x,z,value\n"));
}

#[test]
fn single_precision_derivative() {
    let g: Arc<Grid<f32>> = Grid::new(GridSpec::periodic_2pi(32).unwrap()).unwrap();
    let f = ScalarField::from_fn(&g, |x, z| x.sin() * z.cos()).unwrap();
    let want = ScalarField::from_fn(&g, |x, z| x.cos() * z.cos()).unwrap();
    assert!(f.ddx().max_abs_diff(&want) < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn derivatives_commute(seed in any::<u64>()) {
        let g = grid(32, 4.0);
        let f = random(&g, seed, false);
        let a = f.ddx().ddz();
        let b = f.ddz().ddx();
        prop_assert!(a.max_abs_diff(&b) <= 1e-11);
    }

    #[test]
    fn derivatives_integrate_to_zero(seed in any::<u64>()) {
        let g = grid(32, TAU);
        let f = random(&g, seed, false);
        prop_assert!(f.ddx().integrate().abs() <= 1e-11);
        prop_assert!(f.ddz().integrate().abs() <= 1e-11);
    }

    #[test]
    fn jacobian_integrates_to_zero(seed in any::<u64>()) {
        let g = grid(32, TAU);
        let a = random(&g, seed, false);
        let b = random(&g, seed.wrapping_add(1), false);
        prop_assert!(a.jacobian(&b).unwrap().integrate().abs() <= 1e-10);
    }

    #[test]
    fn inverted_laplacian_has_zero_mean(seed in any::<u64>()) {
        let g = grid(16, 3.0);
        let z = random(&g, seed, true);
        let psi = z.invert_laplacian().unwrap();
        prop_assert!(psi.mean().abs() <= 1e-14);
    }
}
