//! Frozen values from independent oracles.

mod common;

use num_complex::Complex64;

use rosenlin::linalg::{self, c};
use rosenlin::random;
use rosenlin::spaces;
use rosenlin::spectra;
use rosenlin::system::{example_r1, example_r2, BlockDims};
use rosenlin::Space;

#[test]
fn dimension_matches_nullity_for_small_partitions() {
    for (i, d) in common::dims_up_to(8).into_iter().enumerate() {
        let real = random::realization(&mut random::rng(77 + i as u64), d);
        assert_eq!(spaces::dim_space(&d), common::nullity_oracle(&real), "{d:?}");
    }
    // frozen
    assert_eq!(spaces::dim_space(&BlockDims::new(2, 2, 2, 1).unwrap()), 14);
    assert_eq!(spaces::dim_space(&BlockDims::new(1, 5, 1, 3).unwrap()), 2);
    assert_eq!(spaces::dim_space(&BlockDims::new(1, 1, 1, 1).unwrap()), 2);
}

#[test]
fn hundred_samples_span_the_space() {
    let d = BlockDims::new(2, 2, 2, 1).unwrap();
    let real = random::realization(&mut random::rng(11), d);
    let vecs: Vec<Vec<Complex64>> = (0..100u64)
        .map(|s| {
            let p = spaces::sample_space(&real, s, Space::L1G).unwrap();
            let mut v = linalg::to_vec(&p.x);
            v.extend(linalg::to_vec(&p.y));
            v
        })
        .collect();
    let diffs = linalg::zeros(99, vecs[0].len());
    let diffs = {
        let mut m = diffs;
        for i in 1..100 {
            for (j, (a, b)) in vecs[i].iter().zip(&vecs[0]).enumerate() {
                m[(i - 1, j)] = a - b;
            }
        }
        m
    };
    assert_eq!(common::numerical_rank(&diffs), 14);
}

/// Real root of `λ³ + λ + 1` by Cardano; the complex pair follows from the
/// sum and product of the roots.
fn cubic_roots() -> [Complex64; 3] {
    let (p, q) = (1.0f64, 1.0f64);
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let t = (-q / 2.0 + disc.sqrt()).cbrt() + (-q / 2.0 - disc.sqrt()).cbrt();
    // remaining roots solve λ² + tλ + (t² + p) = 0
    let b = t;
    let cc = t * t + p;
    let s = (4.0 * cc - b * b).sqrt() / 2.0;
    [c(t, 0.0), c(-b / 2.0, s), c(-b / 2.0, -s)]
}

#[test]
fn r2_zeros_are_the_cubic_roots() {
    let roots = spectra::system_zeros(&example_r2()).unwrap();
    assert_eq!(roots.len(), 3);
    let want = cubic_roots();
    assert!((want[0].re - -0.682_327_803_828_019_3).abs() < 1e-15);
    for w in want {
        assert!(roots.iter().any(|r| (r - w).norm() < 1e-13), "{w} not in {roots:?}");
    }
    for p in [spaces::build_c1(&example_r2()), spaces::build_c2(&example_r2()), spaces::build_dl(&example_r2())] {
        let sol = spectra::solve_pencil(&p.x, &p.y).unwrap();
        for w in want {
            assert!(sol.eigenvalues.iter().any(|e| (e - w).norm() < 1e-12));
        }
    }
}

#[test]
fn r1_determinant_and_double_zero() {
    let d = spectra::det_scalar_poly(&example_r1().system_matrix()).unwrap();
    let want = [c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)];
    assert_eq!(d.len(), 3);
    for (a, b) in d.iter().zip(want) {
        assert!((a - b).norm() < 1e-14);
    }
    let z = spectra::system_zeros(&example_r1()).unwrap();
    assert!(z.iter().all(|r| (r - c(1.0, 0.0)).norm() < 1e-12));
}

#[test]
fn recovered_vectors_of_c1_r2_annihilate_g() {
    let real = example_r2();
    let p = spaces::build_c1(&real);
    let sol = spectra::solve_pencil(&p.x, &p.y).unwrap();
    for (i, &l) in sol.eigenvalues.iter().enumerate() {
        let rec = spectra::recover_right(&sol.right[i], &p.dims, &real, l).unwrap();
        assert!(spectra::right_transfer_residual(&real, &rec.x, l).unwrap() <= 1e-8);
    }
}
