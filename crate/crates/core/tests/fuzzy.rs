use std::f64::consts::PI;
use std::sync::Arc;

use ncg_core::fuzzy_berezin::*;
use ncg_core::numeric::{c, hermitian_eigen, max_abs, op_norm, trace, CMat, I};
use ncg_core::su2_reps::{sphere_angles, sphere_quadrature, spin_rep, GroupPoint};
use ncg_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    loop {
        let q = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        let r2: f64 = q.iter().map(|v| v * v).sum();
        if r2 > 1e-4 && r2 < 1.0 {
            return GroupPoint::from_quaternion(q).unwrap();
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0)) + I * rng.random_range(-1.0..1.0));
    (&m + m.adjoint()) * c(0.5)
}

fn cartesian(t: f64, p: f64) -> [f64; 3] {
    [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
}

#[test]
fn sphere_relations_at_small_and_large_n() {
    let fs = fuzzy_sphere(2).unwrap();
    for k in 0..3 {
        let expected = fs.rep().generator(k) * c(1.0 / 3f64.sqrt());
        assert!(max_abs(&(fs.coordinate(k) - expected)) < 1e-15);
    }
    let radius: CMat = fs.coordinates().iter().map(|x| x * x).sum();
    assert!(max_abs(&(radius - CMat::identity(2, 2))) < 1e-14);
    let fs = fuzzy_sphere(16).unwrap();
    let [x1, x2, x3] = fs.coordinates();
    let comm = x1 * x2 - x2 * x1 - x3 * (I * (2.0 / 255f64.sqrt()));
    assert!(op_norm(&comm) < 1e-12);
    let trivial = fuzzy_sphere(1).unwrap();
    assert!(trivial.coordinates().iter().all(|x| x[(0, 0)] == c(0.0)));
}

#[test]
fn covariant_symbols_of_simple_operators() {
    let quad = Arc::new(sphere_quadrature(8).unwrap());
    let fs = fuzzy_sphere(2).unwrap();
    let one = covariant_symbol(fs.rep(), &CMat::identity(2, 2), &quad).unwrap();
    assert!(one.values().iter().all(|v| (v - c(1.0)).norm() < 1e-14));
    // ⟨c(p), σ_3 c(p)⟩ = cos θ for the spin-½ coherent state.
    let x3 = covariant_symbol(fs.rep(), fs.coordinate(2), &quad).unwrap();
    for (&(t, _), v) in quad.nodes().iter().zip(x3.values()) {
        assert!((v - c(t.cos() / 3f64.sqrt())).norm() < 1e-12);
    }
    let wrong = covariant_symbol(fs.rep(), &CMat::identity(3, 3), &quad);
    assert!(matches!(wrong, Err(Error::Shape(_))));
}

#[test]
fn covariant_symbol_is_norm_decreasing_and_section_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let quad = Arc::new(sphere_quadrature(8).unwrap());
    for n in [2, 3, 5, 8] {
        let rep = spin_rep(n).unwrap();
        for _ in 0..5 {
            let t = random_hermitian(&mut rng, n);
            let s = covariant_symbol(&rep, &t, &quad).unwrap();
            assert!(s.max_abs() <= op_norm(&t) * (1.0 + 1e-12));
            let twisted = covariant_symbol_with(&rep, &t, &quad, Section { twist: 0.7 }).unwrap();
            assert!(s.max_distance(&twisted).unwrap() < 1e-12);
            let up = contravariant_symbol(&s, &rep).unwrap();
            let up_twisted = contravariant_symbol_with(&s, &rep, Section { twist: -1.3 }).unwrap();
            assert!(max_abs(&(up - up_twisted)) < 1e-12);
        }
    }
}

#[test]
fn covariant_symbol_is_equivariant() {
    // σ_{α_h(T)}(p) = σ_T(h⁻¹·p) for 50 random (h, T).
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let quad = Arc::new(sphere_quadrature(6).unwrap());
    for trial in 0..50 {
        let n = 2 + trial % 5;
        let rep = spin_rep(n).unwrap();
        let h = random_point(&mut rng);
        let t = random_hermitian(&mut rng, n);
        let moved = covariant_symbol(&rep, &rep.conjugate(&h, &t), &quad).unwrap();
        let pulled: Vec<(f64, f64)> = quad
            .nodes()
            .iter()
            .map(|&(th, ph)| sphere_angles(h.inverse().rotate(cartesian(th, ph))))
            .collect();
        let expected = covariant_symbol_at(&rep, &t, &pulled, Section::STANDARD).unwrap();
        let err = moved
            .values()
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "trial {trial}: {err}");
    }
}

#[test]
fn contravariant_symbol_examples() {
    let quad = Arc::new(sphere_quadrature(8).unwrap());
    for n in [2, 4, 7] {
        let rep = spin_rep(n).unwrap();
        let one = contravariant_symbol(&SampledFunction::constant(Arc::clone(&quad), 1.0), &rep).unwrap();
        assert!(max_abs(&(one - CMat::identity(n, n))) < 1e-12);
        let zero = contravariant_symbol(&SampledFunction::constant(Arc::clone(&quad), 0.0), &rep).unwrap();
        assert_eq!(max_abs(&zero), 0.0);
    }
    // n = 2: α(P) = (1 + p·σ)/2, so 2∫cos θ α(P) dμ = σ_3 ∫cos²θ dμ = σ_3/3.
    let rep = spin_rep(2).unwrap();
    let f = SampledFunction::from_real_fn(Arc::clone(&quad), |t, _| t.cos());
    let up = contravariant_symbol(&f, &rep).unwrap();
    assert!(max_abs(&(up - rep.generator(2) * c(1.0 / 3.0))) < 1e-13);
    // Level below n is rejected.
    let coarse = SampledFunction::constant(Arc::new(sphere_quadrature(3).unwrap()), 1.0);
    assert!(contravariant_symbol(&coarse, &spin_rep(5).unwrap()).is_err());
}

#[test]
fn transforms_are_adjoint() {
    // ∫ σ_T f dμ = (1/n) τ(σ̆_f T) for real f and Hermitian T.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let quad = Arc::new(sphere_quadrature(10).unwrap());
    for n in [2, 3, 6, 10] {
        let rep = spin_rep(n).unwrap();
        for _ in 0..5 {
            let t = random_hermitian(&mut rng, n);
            let coeffs = [0; 4].map(|_| rng.random_range(-1.0..1.0));
            let f = SampledFunction::from_real_fn(Arc::clone(&quad), |th, ph| {
                let [x, y, z] = cartesian(th, ph);
                coeffs[0] + coeffs[1] * x * y + coeffs[2] * z * z * z + coeffs[3] * (3.0 * ph).sin()
            });
            let lower = covariant_symbol(&rep, &t, &quad).unwrap();
            let lhs = lower.inner(&f).unwrap();
            let rhs = trace(&(contravariant_symbol(&f, &rep).unwrap() * &t)) / c(n as f64);
            assert!((lhs - rhs).norm() < 1e-12, "n={n}");
        }
    }
}

#[test]
fn contravariant_symbol_is_positive_and_norm_decreasing() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let quad = Arc::new(sphere_quadrature(12).unwrap());
    for n in [2, 5, 9] {
        let rep = spin_rep(n).unwrap();
        for _ in 0..5 {
            let a = [0; 3].map(|_| rng.random_range(-1.0..1.0));
            let f = SampledFunction::from_real_fn(Arc::clone(&quad), |th, ph| {
                let [x, y, z] = cartesian(th, ph);
                (a[0] * x + a[1] * y + a[2] * z).powi(2)
            });
            let up = contravariant_symbol(&f, &rep).unwrap();
            let (values, _) = hermitian_eigen(&((&up + up.adjoint()) * c(0.5)));
            assert!(values[0] > -1e-12, "n={n}: {}", values[0]);
            assert!(op_norm(&up) <= f.max_abs() + 1e-12);
        }
    }
}

#[test]
fn kernel_closed_form_and_normalization() {
    for n in 1..=16 {
        let rep = spin_rep(n).unwrap();
        assert!((berezin_kernel(&rep, 0.0).unwrap() - n as f64).abs() < 1e-12);
        for k in 0..=20 {
            let theta = PI * k as f64 / 20.0;
            let value = berezin_kernel(&rep, theta).unwrap();
            assert!(value >= 0.0);
            assert!((value - berezin_kernel_closed_form(n, theta)).abs() < 1e-10, "n={n}");
        }
        let quad = sphere_quadrature(n.max(2)).unwrap();
        assert!((kernel_integral(&rep, &quad).unwrap() - 1.0).abs() < 1e-10);
    }
    let rep = spin_rep(2).unwrap();
    for theta in [0.3, 1.1, 2.9] {
        let expected = 2.0 * (theta / 2.0f64).cos().powi(2);
        assert!((berezin_kernel(&rep, theta).unwrap() - expected).abs() < 1e-14);
    }
}

#[test]
fn berezin_transform_matches_kernel_convolution() {
    let quad = Arc::new(sphere_quadrature(12).unwrap());
    let rep = spin_rep(8).unwrap();
    let f = SampledFunction::from_real_fn(Arc::clone(&quad), |t, _| t.cos());
    let chained = berezin_transform(&f, &rep).unwrap();
    let convolved = kernel_convolution(&f, 8);
    assert!(chained.max_distance(&convolved).unwrap() < 1e-8);
    let one = SampledFunction::constant(Arc::clone(&quad), 1.0);
    let image = berezin_transform(&one, &rep).unwrap();
    assert!(image.values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));
    let zero = SampledFunction::constant(Arc::clone(&quad), 0.0);
    assert_eq!(berezin_transform(&zero, &rep).unwrap().max_abs(), 0.0);
}

#[test]
fn sampled_function_shape_is_checked() {
    let quad = Arc::new(sphere_quadrature(3).unwrap());
    assert!(SampledFunction::new(Arc::clone(&quad), vec![c(0.0); 5]).is_err());
    assert!(SampledFunction::new(Arc::clone(&quad), vec![c(0.0); quad.len()]).is_ok());
}
