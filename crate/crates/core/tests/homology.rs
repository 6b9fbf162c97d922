use ncg_core::exact::{ExactMatrix, GaussRat};
use ncg_core::homology::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn id(n: usize) -> ExactMatrix {
    ExactMatrix::identity(n)
}

fn with_identity_twist(alg: &FiniteAlgebra) -> FiniteAlgebra {
    alg.clone().with_automorphism(id(alg.dim())).unwrap()
}

/// Naive oracle: the Hochschild boundary built from dense products of
/// coordinate vectors, following the face-map definition slot by slot.
fn naive_boundary(alg: &FiniteAlgebra, n: usize) -> ExactMatrix {
    let d = alg.dim();
    let basis = |i: usize| {
        let mut v = vec![GaussRat::zero(); d];
        v[i] = GaussRat::one();
        v
    };
    // Dense tensor of a list of vectors, first factor most significant.
    let tensor = |vs: &[Vec<GaussRat>]| {
        let mut acc = vec![GaussRat::one()];
        for v in vs {
            let mut next = Vec::with_capacity(acc.len() * d);
            for a in &acc {
                for x in v {
                    next.push(a * x);
                }
            }
            acc = next;
        }
        acc
    };
    let rows = d.pow(n as u32);
    let mut columns = Vec::new();
    for idx in 0..d.pow(n as u32 + 1) {
        let mut slots = Vec::new();
        let mut r = idx;
        for _ in 0..=n {
            slots.push(r % d);
            r /= d;
        }
        slots.reverse();
        let a: Vec<Vec<GaussRat>> = slots.iter().map(|&i| basis(i)).collect();
        let mut col = vec![GaussRat::zero(); rows];
        for j in 0..n {
            let mut factors = a[..j].to_vec();
            factors.push(alg.product(&a[j], &a[j + 1]));
            factors.extend_from_slice(&a[j + 2..]);
            let sign = if j % 2 == 0 { GaussRat::one() } else { -GaussRat::one() };
            for (c, v) in col.iter_mut().zip(tensor(&factors)) {
                *c += &(&sign * &v);
            }
        }
        let mut factors = vec![alg.product(&a[n], &a[0])];
        factors.extend_from_slice(&a[1..n]);
        let sign = if n % 2 == 0 { GaussRat::one() } else { -GaussRat::one() };
        for (c, v) in col.iter_mut().zip(tensor(&factors)) {
            *c += &(&sign * &v);
        }
        columns.push(col);
    }
    ExactMatrix::from_columns(rows, &columns)
}

/// Floating-point rank of an exact matrix, used as an independent rank oracle.
fn float_rank(m: &ExactMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.to_complex().svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > 1e-9).count()
}

/// HH_n from float ranks of the naive boundaries.
fn naive_hh(alg: &FiniteAlgebra, max: usize) -> Vec<usize> {
    let d = alg.dim();
    let ranks: Vec<usize> = (0..=max + 1)
        .map(|n| if n == 0 { 0 } else { float_rank(&naive_boundary(alg, n)) })
        .collect();
    (0..=max).map(|n| d.pow(n as u32 + 1) - ranks[n] - ranks[n + 1]).collect()
}

fn algebras() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("C", FiniteAlgebra::complex()),
        ("C2", FiniteAlgebra::c2()),
        ("M2", FiniteAlgebra::m2()),
    ]
}

#[test]
fn boundary_matches_naive_construction() {
    for (name, alg) in algebras() {
        for n in 1..=3 {
            assert_eq!(hochschild_boundary(&alg, n).unwrap().matrix, naive_boundary(&alg, n), "{name} n={n}");
        }
    }
}

#[test]
fn hochschild_dims_match_float_rank_oracle() {
    for (name, alg) in algebras() {
        let max = if alg.dim() == 4 { 2 } else { 3 };
        assert_eq!(
            homology_dims(&alg, max, Variant::Hochschild, Side::Homology).unwrap(),
            naive_hh(&alg, max),
            "{name}"
        );
    }
}

#[test]
fn boundaries_square_to_zero() {
    for (name, alg) in algebras() {
        let top = if alg.dim() == 4 { 3 } else { 4 };
        for n in 1..top {
            let b = hochschild_boundary(&alg, n).unwrap().matrix;
            let b_next = hochschild_boundary(&alg, n + 1).unwrap().matrix;
            assert!(b.mul(&b_next).unwrap().is_zero(), "{name} b² n={n}");
            let bp = bar_boundary(&alg, n).unwrap().matrix;
            let bp_next = bar_boundary(&alg, n + 1).unwrap().matrix;
            assert!(bp.mul(&bp_next).unwrap().is_zero(), "{name} b'² n={n}");
        }
    }
}

#[test]
fn twisted_boundary_squares_to_zero() {
    let alg = FiniteAlgebra::c2_swap();
    for n in 1..4 {
        let b = twisted_boundary(&alg, n).unwrap().matrix;
        let b_next = twisted_boundary(&alg, n + 1).unwrap().matrix;
        assert!(b.mul(&b_next).unwrap().is_zero(), "n={n}");
    }
}

#[test]
fn contracting_homotopy_identity() {
    for (name, alg) in algebras() {
        let top = if alg.dim() == 4 { 2 } else { 4 };
        for n in 0..=top {
            let size = chain_dim(&alg, n).unwrap();
            let s = contracting_homotopy(&alg, n).unwrap().matrix;
            let mut total = bar_boundary(&alg, n + 1).unwrap().matrix.mul(&s).unwrap();
            if n > 0 {
                let s_prev = contracting_homotopy(&alg, n - 1).unwrap().matrix;
                total = total
                    .add(&s_prev.mul(&bar_boundary(&alg, n).unwrap().matrix).unwrap())
                    .unwrap();
            }
            assert_eq!(total, id(size), "{name} n={n}");
        }
    }
}

#[test]
fn cyclic_operator_properties() {
    let c2 = FiniteAlgebra::c2();
    // λ(e_0 ⊗ e_1) = −(e_1 ⊗ e_0)
    let lam = cyclic_operator(&c2, 1, false).unwrap().matrix;
    assert_eq!(lam.get(2, 1), -GaussRat::one());
    assert_eq!(lam.nnz(), 4);

    for (name, alg) in algebras() {
        let top = if alg.dim() == 4 { 2 } else { 3 };
        for n in 0..=top {
            let lam = cyclic_operator(&alg, n, false).unwrap().matrix;
            assert_eq!(lam.pow(n + 1).unwrap(), id(lam.nrows()), "{name} n={n}");
            let twisted = with_identity_twist(&alg);
            assert_eq!(cyclic_operator(&twisted, n, true).unwrap().matrix, lam, "{name} n={n}");
        }
    }

    let swap = FiniteAlgebra::c2_swap();
    for n in 0..=3 {
        let lam = cyclic_operator(&swap, n, true).unwrap().matrix;
        let diag = automorphism_action(&swap, n).unwrap().matrix;
        assert_eq!(lam.pow(n + 1).unwrap(), diag, "n={n}");
    }
}

#[test]
fn cyclic_intertwining_relation() {
    // On cochains (1 − λ) b = b′ (1 − λ); transposed to chains, b (1 − λ) = (1 − λ) b′.
    for (name, alg) in algebras() {
        let top = if alg.dim() == 4 { 2 } else { 3 };
        for n in 1..=top {
            let one_minus = |k: usize| {
                let lam = cyclic_operator(&alg, k, false).unwrap().matrix;
                id(lam.nrows()).sub(&lam).unwrap()
            };
            let lhs = hochschild_boundary(&alg, n).unwrap().matrix.mul(&one_minus(n)).unwrap();
            let rhs = one_minus(n - 1).mul(&bar_boundary(&alg, n).unwrap().matrix).unwrap();
            assert_eq!(lhs, rhs, "{name} n={n}");
        }
    }
}

#[test]
fn coboundary_preserves_cyclic_cochains() {
    for (name, alg) in algebras() {
        let top = if alg.dim() == 4 { 2 } else { 3 };
        for n in 0..top {
            let lam_n = cyclic_operator(&alg, n, false).unwrap().matrix;
            let lam_next = cyclic_operator(&alg, n + 1, false).unwrap().matrix;
            let fixed = id(lam_n.nrows()).sub(&lam_n).unwrap().transpose().nullspace();
            let bt = hochschild_boundary(&alg, n + 1).unwrap().matrix.transpose();
            let test = id(lam_next.nrows()).sub(&lam_next).unwrap().transpose();
            for phi in fixed {
                let image = bt.apply(&phi).unwrap();
                assert!(test.apply(&image).unwrap().iter().all(Zero::is_zero), "{name} n={n}");
            }
        }
    }
}

#[test]
fn trivial_twist_reproduces_untwisted_dims() {
    for (name, alg) in algebras() {
        let max = if alg.dim() == 4 { 2 } else { 3 };
        let twisted = with_identity_twist(&alg);
        for side in [Side::Homology, Side::Cohomology] {
            for v in [Variant::TwistedHochschild, Variant::TwistedCyclic] {
                assert_eq!(
                    homology_dims(&twisted, max, v, side).unwrap(),
                    homology_dims(&alg, max, v.untwisted(), side).unwrap(),
                    "{name} {v} {side}"
                );
            }
        }
    }
}

#[test]
fn swap_twist_on_two_points() {
    // The swap identifies the two points; the twisted Hochschild homology of the
    // quotient complex C_n/im(1−σ) keeps the σ-coinvariants of HH_0 = ℂ², one class.
    let alg = FiniteAlgebra::c2_swap();
    let hh = homology_dims(&alg, 2, Variant::TwistedHochschild, Side::Homology).unwrap();
    assert_eq!(hh, vec![1, 0, 0]);
    // With b_σ every degree-0 class dies: φ(ab) = φ(σ(b)a) forces φ(e_0) = φ(e_1 e_0) = 0,
    // and dually e_0 = e_0 e_0 − σ(e_0) e_0 lies in the image of b_σ.
    assert_eq!(
        homology_dims(&alg, 2, Variant::TwistedHochschild, Side::Cohomology).unwrap(),
        vec![0, 0, 0]
    );
    for side in [Side::Homology, Side::Cohomology] {
        assert_eq!(homology_dims(&alg, 3, Variant::TwistedCyclic, side).unwrap(), vec![0; 4]);
    }
}

#[test]
fn commutator_quotient_matches_degree_zero() {
    for (name, alg) in algebras() {
        let hh = homology_dims(&alg, 0, Variant::Hochschild, Side::Homology).unwrap();
        assert_eq!(commutator_quotient(&alg), hh[0], "{name}");
    }
}

#[test]
fn cohomology_is_dual_for_hochschild() {
    for (name, alg) in algebras() {
        let max = if alg.dim() == 4 { 2 } else { 3 };
        assert_eq!(
            homology_dims(&alg, max, Variant::Hochschild, Side::Homology).unwrap(),
            homology_dims(&alg, max, Variant::Hochschild, Side::Cohomology).unwrap(),
            "{name}"
        );
    }
}

fn small_rational() -> impl Strategy<Value = GaussRat> {
    (-3i64..=3, 1i64..=3, -2i64..=2).prop_map(|(p, q, im)| GaussRat::from_parts((p, q), (im, 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dims_are_basis_independent(entries in proptest::collection::vec(small_rational(), 4), which in 0usize..2) {
        let p = ExactMatrix::from_dense(&[entries[..2].to_vec(), entries[2..].to_vec()]).unwrap();
        prop_assume!(p.inverse().is_some());
        let alg = if which == 0 { FiniteAlgebra::c2() } else { FiniteAlgebra::c2_swap() };
        let changed = alg.change_basis(&p).unwrap();
        for v in Variant::ALL {
            if v.is_twisted() && alg.automorphism().is_none() {
                continue;
            }
            for side in [Side::Homology, Side::Cohomology] {
                prop_assert_eq!(
                    homology_dims(&alg, 2, v, side).unwrap(),
                    homology_dims(&changed, 2, v, side).unwrap()
                );
            }
        }
    }
}

#[test]
fn m2_dims_are_basis_independent() {
    // Unimodular integer change of basis (upper unitriangular with a complex entry),
    // so the transformed structure constants stay Gaussian integers.
    let z = GaussRat::zero;
    let o = GaussRat::one;
    let rows = vec![
        vec![o(), GaussRat::from_int(2), z(), GaussRat::from_parts((1, 1), (1, 1))],
        vec![z(), o(), GaussRat::from_int(-1), z()],
        vec![z(), z(), o(), GaussRat::from_int(3)],
        vec![z(), z(), z(), o()],
    ];
    let p = ExactMatrix::from_dense(&rows).unwrap();
    let alg = FiniteAlgebra::m2();
    let changed = alg.change_basis(&p).unwrap();
    assert_eq!(
        homology_dims(&changed, 2, Variant::Hochschild, Side::Homology).unwrap(),
        vec![1, 0, 0]
    );
    assert_eq!(
        homology_dims(&changed, 2, Variant::Cyclic, Side::Cohomology).unwrap(),
        homology_dims(&alg, 2, Variant::Cyclic, Side::Cohomology).unwrap()
    );
}

#[test]
fn parsed_file_matches_preset() {
    let text = "# functions on two points\ndimension 2\nunit 1 1\nc 0 0 0 1 0\nc 1 1 1 1 0\n";
    assert_eq!(parse_algebra(text).unwrap(), FiniteAlgebra::c2());
}

#[test]
fn cyclic_dims_are_morita_invariant() {
    let c = FiniteAlgebra::complex();
    let m2 = FiniteAlgebra::m2();
    for side in [Side::Homology, Side::Cohomology] {
        assert_eq!(
            homology_dims(&m2, 2, Variant::Cyclic, side).unwrap(),
            homology_dims(&c, 2, Variant::Cyclic, side).unwrap(),
            "{side}"
        );
    }
}
