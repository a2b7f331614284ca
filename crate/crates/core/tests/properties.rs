//! Property tests for the exact linear algebra and the Krawtchouk
//! transform machinery.

use num_bigint::BigInt;
use proptest::prelude::*;
use tightoa::designs::PointSet;
use tightoa::exactmath::{
    invert, rat, rational_eigenvalues, solve_affine, Matrix, Rat,
};
use tightoa::hamming::{binomial, design_strength, krawtchouk, HammingContext};
use tightoa::scheme::{qant4_krein_array, SchemeParameters};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(small_rat(), rows * cols).prop_map(move |data| {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = data[r * cols + c].clone();
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_affine_substitutes_exactly(
        (rows, cols) in (1usize..=4, 1usize..=5),
        seed in proptest::collection::vec(small_rat(), 40),
    ) {
        let a = {
            let mut m = Matrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m[(r, c)] = seed[r * cols + c].clone();
                }
            }
            m
        };
        let x0: Vec<Rat> = seed[rows * cols..rows * cols + cols].to_vec();
        let b = a.mul_vec(&x0);
        let sol = solve_affine(&a, &b).expect("constructed system is solvable");
        prop_assert_eq!(a.mul_vec(&sol.particular), b.clone());
        for v in &sol.basis {
            let shifted: Vec<Rat> = sol.particular.iter().zip(v).map(|(p, d)| p + d).collect();
            prop_assert_eq!(a.mul_vec(&shifted), b.clone());
        }
        // Basis vectors carry the identity pattern on the free indices.
        for (i, v) in sol.basis.iter().enumerate() {
            for (j, &f) in sol.free_indices.iter().enumerate() {
                let expect = if i == j { rat(1) } else { rat(0) };
                prop_assert_eq!(&v[f], &expect);
            }
        }
    }

    #[test]
    fn invert_round_trips(m in small_matrix(3, 3)) {
        if let Ok(inv) = invert(&m) {
            prop_assert_eq!(m.mul(&inv), Matrix::identity(3));
            prop_assert_eq!(inv.mul(&m), Matrix::identity(3));
        }
    }

    #[test]
    fn triangular_spectrum_is_diagonal(
        diag in proptest::collection::vec(-5i64..=5, 4),
        upper in proptest::collection::vec(-4i64..=4, 6),
    ) {
        let mut m = Matrix::zeros(4, 4);
        let mut idx = 0;
        for r in 0..4 {
            m[(r, r)] = rat(diag[r]);
            for c in r + 1..4 {
                m[(r, c)] = rat(upper[idx]);
                idx += 1;
            }
        }
        let eig = rational_eigenvalues(&m).expect("triangular matrices split");
        let mut expected: Vec<Rat> = diag.iter().map(|&d| rat(d)).collect();
        expected.sort_by(|a, b| b.cmp(a));
        let mut found: Vec<Rat> = Vec::new();
        for (value, mult) in eig {
            for _ in 0..mult {
                found.push(value.clone());
            }
        }
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn krawtchouk_symmetry_identity(
        n in 1usize..=9,
        q in 2usize..=5,
        i in 0usize..=9,
        j in 0usize..=9,
    ) {
        prop_assume!(i <= n && j <= n);
        // (q-1)^j C(n,j) K_i(j) = (q-1)^i C(n,i) K_j(i)
        let qm1 = BigInt::from(q as i64 - 1);
        let lhs = qm1.pow(j as u32) * binomial(n as i64, j) * krawtchouk(n, q, i, j as i64);
        let rhs = qm1.pow(i as u32) * binomial(n as i64, i) * krawtchouk(n, q, j, i as i64);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(
            krawtchouk(n, q, i, 0),
            binomial(n as i64, i) * qm1.pow(i as u32)
        );
    }

    #[test]
    fn strength_oracles_agree_on_random_sets(
        words in proptest::collection::btree_set(
            proptest::collection::vec(0u8..3, 4),
            1..=12,
        ),
    ) {
        let ps = PointSet::new(HammingContext::new(4, 3), words.into_iter().collect())
            .expect("distinct words in range");
        // design_strength returns an error only when the transform and the
        // direct counting oracle disagree.
        prop_assert!(design_strength(&ps).is_ok());
    }
}

#[test]
fn qant4_readback_for_rational_spectra() {
    // Family members with rational dual eigenvalues: d^2 = q^2 + 4(n-2)(q-1).
    for (n, q) in [(5u64, 2u64), (11, 3), (10, 6), (34, 6), (50, 2)] {
        let d2 = q * q + 4 * (n - 2) * (q - 1);
        let d = (d2 as f64).sqrt() as u64;
        assert_eq!(d * d, d2, "({n},{q}) must have a perfect-square discriminant");
        let ka = qant4_krein_array(n, q);
        let sp = SchemeParameters::from_krein_array(&ka).unwrap();
        assert_eq!(sp.krein_array_readback().unwrap(), ka);
        sp.verify_algebraic_identities().unwrap();
    }
}
