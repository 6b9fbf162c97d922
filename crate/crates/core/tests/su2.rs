use std::f64::consts::PI;

use ncg_core::numeric::{c, max_abs, trace, CMat, I};
use ncg_core::su2_reps::*;
use ncg_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    loop {
        let q = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        let r2: f64 = q.iter().map(|v| v * v).sum();
        // Rejection inside the unit ball makes the direction uniform on S³ (Haar).
        if r2 > 1e-4 && r2 < 1.0 {
            return GroupPoint::from_quaternion(q).unwrap();
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0)) + I * rng.random_range(-1.0..1.0));
    (&m + m.adjoint()) * c(0.5)
}

#[test]
fn spin_one_matches_hand_written_matrices() {
    // L_x, L_y, L_z for spin 1 in the basis m = 1, 0, −1.
    let s = 1.0 / 2f64.sqrt();
    let lx = CMat::from_row_slice(3, 3, &[0.0, s, 0.0, s, 0.0, s, 0.0, s, 0.0].map(c));
    let ly = CMat::from_row_slice(
        3,
        3,
        &[
            c(0.0), -I * s, c(0.0),
            I * s, c(0.0), -I * s,
            c(0.0), I * s, c(0.0),
        ],
    );
    let lz = CMat::from_diagonal(&nalgebra_diag(&[1.0, 0.0, -1.0]));
    let rep = spin_rep(3).unwrap();
    for (k, l) in [lx, ly, lz].iter().enumerate() {
        assert!(max_abs(&(rep.generator(k) - l * c(2.0))) < 1e-14, "J_{}", k + 1);
    }
    let casimir: CMat = rep.generators().iter().map(|j| j * j).sum();
    assert!(max_abs(&(casimir - CMat::identity(3, 3) * c(8.0))) < 1e-13);
}

fn nalgebra_diag(v: &[f64]) -> ncg_core::numeric::CVec {
    ncg_core::numeric::CVec::from_iterator(v.len(), v.iter().map(|&x| c(x)))
}

#[test]
fn pauli_and_trivial_cases() {
    let rep = spin_rep(2).unwrap();
    let sigma3 = CMat::from_diagonal(&nalgebra_diag(&[1.0, -1.0]));
    assert!(max_abs(&(rep.generator(2) - sigma3)) < 1e-15);
    let one = spin_rep(1).unwrap();
    assert!(one.generators().iter().all(|j| j[(0, 0)] == c(0.0)));
    assert!(matches!(spin_rep(0), Err(Error::InvalidDimension(_))));
}

#[test]
fn structure_identities_up_to_64() {
    for n in 1..=64 {
        let rep = spin_rep(n).unwrap();
        let (hermitian, comm, casimir) = rep.identity_residuals();
        assert!(comm < 1e-12 * n as f64, "n={n}: {comm}");
        assert!(hermitian < 1e-13);
        assert!(casimir < 1e-12 * (n * n) as f64, "n={n}: {casimir}");
    }
}

#[test]
fn unitaries_form_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2, 3, 5, 8] {
        let rep = spin_rep(n).unwrap();
        for _ in 0..100 {
            let (g, h) = (random_point(&mut rng), random_point(&mut rng));
            let (ug, uh) = (rep.unitary(&g), rep.unitary(&h));
            assert!(max_abs(&(&ug * ug.adjoint() - CMat::identity(n, n))) < 1e-12);
            assert!(max_abs(&(&ug * &uh - rep.unitary(&g.compose(&h)))) < 1e-10);
            assert!(max_abs(&(rep.unitary(&g.inverse()) - ug.adjoint())) < 1e-12);
        }
    }
}

#[test]
fn closed_form_rotations() {
    let rep = spin_rep(2).unwrap();
    assert!(max_abs(&(rep.unitary(&GroupPoint::identity()) - CMat::identity(2, 2))) < 1e-15);
    let full = rep.unitary(&GroupPoint::rotation_z(2.0 * PI));
    assert!(max_abs(&(full + CMat::identity(2, 2))) < 1e-14);
    // exp(−iπσ_3/2) = diag(−i, i).
    let half = rep.unitary(&GroupPoint::rotation_z(PI));
    let expected = CMat::from_diagonal(&ncg_core::numeric::CVec::from_vec(vec![-I, I]));
    assert!(max_abs(&(half - expected)) < 1e-14);
    // Odd n is a representation of SO(3): 2π acts trivially.
    let rep3 = spin_rep(3).unwrap();
    assert!(max_abs(&(rep3.unitary(&GroupPoint::rotation_y(2.0 * PI)) - CMat::identity(3, 3))) < 1e-13);
}

#[test]
fn exponential_series_agrees_with_euler_factorization() {
    // Independent route: U = exp(−(i/2) ψ n·J) by a truncated Taylor series.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2, 4, 6] {
        let rep = spin_rep(n).unwrap();
        for _ in 0..10 {
            let g = random_point(&mut rng);
            let (axis, angle) = (g.axis(), g.angle());
            let x: CMat = (0..3).map(|k| rep.generator(k) * c(axis[k])).sum::<CMat>() * (-I * (angle / 2.0));
            let mut term = CMat::identity(n, n);
            let mut sum = term.clone();
            for k in 1..80 {
                term = &term * &x * c(1.0 / k as f64);
                sum += &term;
            }
            assert!(max_abs(&(sum - rep.unitary(&g))) < 1e-10, "n={n}");
        }
    }
}

#[test]
fn highest_weight_vectors() {
    let (xi, p) = highest_weight(&spin_rep(2).unwrap()).unwrap();
    assert!((xi[0] - c(1.0)).norm() < 1e-15 && xi[1].norm() < 1e-15);
    assert!(max_abs(&(p - CMat::from_diagonal(&nalgebra_diag(&[1.0, 0.0])))) < 1e-15);
    let rep3 = spin_rep(3).unwrap();
    let (xi, _) = highest_weight(&rep3).unwrap();
    assert!((rep3.generator(2) * &xi - &xi * c(2.0)).norm() < 1e-14);
    for n in [1, 4, 9, 17] {
        let (_, p) = highest_weight(&spin_rep(n).unwrap()).unwrap();
        assert!((trace(&p) - c(1.0)).norm() < 1e-14);
        assert!(max_abs(&(&p * &p - &p)) < 1e-14);
        assert!(max_abs(&(p.adjoint() - &p)) < 1e-15);
    }
}

/// `∫ x^a y^b z^c dμ` on the unit sphere, normalized: zero unless all
/// exponents are even, else `(a−1)!!(b−1)!!(c−1)!!/(a+b+c+1)!!`.
fn monomial_moment(a: u32, b: u32, c: u32) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    let dfact = |k: i64| (1..=k).rev().step_by(2).map(|v| v as f64).product::<f64>();
    dfact(a as i64 - 1) * dfact(b as i64 - 1) * dfact(c as i64 - 1) / dfact((a + b + c) as i64 + 1)
}

#[test]
fn quadrature_integrates_polynomials_exactly() {
    for level in [1, 2, 3, 5, 8] {
        let quad = sphere_quadrature(level).unwrap();
        assert!((quad.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        assert!(quad.weights().iter().all(|&w| w > 0.0));
        let top = 2 * level as u32 - 1;
        for a in 0..=top {
            for b in 0..=top - a {
                for cc in 0..=top - a - b {
                    let got = quad.integrate_fn(|t, p| {
                        (t.sin() * p.cos()).powi(a as i32) * (t.sin() * p.sin()).powi(b as i32) * t.cos().powi(cc as i32)
                    });
                    assert!((got - monomial_moment(a, b, cc)).abs() < 1e-13, "level {level}: x^{a} y^{b} z^{cc}");
                }
            }
        }
    }
    let q2 = sphere_quadrature(2).unwrap();
    assert!((q2.integrate_fn(|t, _| t.cos().powi(2)) - 1.0 / 3.0).abs() < 1e-13);
    assert!(q2.integrate_fn(|t, _| t.cos()).abs() < 1e-13);
}

#[test]
fn haar_average_is_the_normalized_trace() {
    let quad = sphere_quadrature(8).unwrap();
    let rep2 = spin_rep(2).unwrap();
    let id = haar_average(&rep2, &CMat::identity(2, 2), &quad).unwrap();
    assert!(max_abs(&(id - CMat::identity(2, 2))) < 1e-13);
    let s3 = haar_average(&rep2, rep2.generator(2), &quad).unwrap();
    assert!(max_abs(&s3) < 1e-13);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rep4 = spin_rep(4).unwrap();
    let t = random_hermitian(&mut rng, 4);
    let avg = haar_average(&rep4, &t, &quad).unwrap();
    let expected = CMat::identity(4, 4) * (trace(&t) / c(4.0));
    assert!(max_abs(&(&avg - expected)) < 1e-10);
    for _ in 0..10 {
        let u = rep4.unitary(&random_point(&mut rng));
        assert!(max_abs(&(&u * &avg - &avg * &u)) < 1e-10);
    }
    assert!(matches!(haar_average(&rep4, &CMat::identity(3, 3), &quad), Err(Error::Shape(_))));
}

#[test]
fn rotation_action_matches_conjugation() {
    // U_g (v·J) U_g^* = (R_g v)·J ties the quaternion product to the representation.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rep = spin_rep(3).unwrap();
    for _ in 0..20 {
        let g = random_point(&mut rng);
        let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let vj = |w: [f64; 3]| -> CMat { (0..3).map(|k| rep.generator(k) * c(w[k])).sum() };
        let lhs = rep.conjugate(&g, &vj(v));
        assert!(max_abs(&(lhs - vj(g.rotate(v)))) < 1e-12);
    }
}
