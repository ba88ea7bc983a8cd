//! Seeded random test data: complex Gaussian matrices, realizations and
//! sample points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMat};
use crate::system::{BlockDims, MatrixPolynomial, Realization};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex entry with independent standard normal parts, scaled by `1/√2`.
pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn real_gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), 0.0)
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn real_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| real_gaussian(rng))
}

pub fn vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

/// Gaussian vector scaled to unit 2-norm.
pub fn unit_vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    loop {
        let v = vector(rng, len);
        let nv = linalg::vec_norm(&v);
        if nv > 1e-3 {
            return v.into_iter().map(|z| z / nv).collect();
        }
    }
}

fn polynomial(rng: &mut impl Rng, size: usize, degree: usize) -> MatrixPolynomial {
    MatrixPolynomial::new((0..=degree).map(|_| matrix(rng, size, size)).collect()).unwrap()
}

/// Complex Gaussian realization with the given partition.
pub fn realization(rng: &mut impl Rng, dims: BlockDims) -> Realization {
    let BlockDims { m, n, k, r } = dims;
    let a = polynomial(rng, n, m);
    let b = matrix(rng, n, r);
    let cm = matrix(rng, r, n);
    let d = polynomial(rng, r, k);
    Realization::new(a, b, cm, d).unwrap()
}

fn symmetrize(a: &CMat) -> CMat {
    linalg::scaled(&linalg::add(a, &linalg::transpose(a)), c(0.5, 0.0))
}

fn hermitize(a: &CMat) -> CMat {
    linalg::scaled(&linalg::add(a, &linalg::adjoint(a)), c(0.5, 0.0))
}

/// Realization with symmetric coefficients and `C = −Bᵀ`, so that `S(λ) = S(λ)ᵀ`.
pub fn symmetric_realization(rng: &mut impl Rng, dims: BlockDims) -> Realization {
    structured(rng, dims, symmetrize, linalg::transpose)
}

/// Realization with Hermitian coefficients and `C = −B*`, so that `S(λ̄)* = S(λ)`.
pub fn hermitian_realization(rng: &mut impl Rng, dims: BlockDims) -> Realization {
    structured(rng, dims, hermitize, linalg::adjoint)
}

fn structured(
    rng: &mut impl Rng,
    dims: BlockDims,
    sym: fn(&CMat) -> CMat,
    flip: fn(&CMat) -> CMat,
) -> Realization {
    let BlockDims { m, n, k, r } = dims;
    let a = MatrixPolynomial::new((0..=m).map(|_| sym(&matrix(rng, n, n))).collect()).unwrap();
    let d = MatrixPolynomial::new((0..=k).map(|_| sym(&matrix(rng, r, r))).collect()).unwrap();
    let b = matrix(rng, n, r);
    let cm = linalg::scaled(&flip(&b), c(-1.0, 0.0));
    Realization::new(a, b, cm, d).unwrap()
}

/// Random points `ρ e^{iθ}` with `ρ ∈ [0.3, 1.5]` at which `A(λ)` is
/// comfortably invertible.
pub fn sample_points(rng: &mut impl Rng, real: &Realization, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let rho: f64 = rng.random_range(0.3..1.5);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(rho, theta);
        if let Ok((smin, smax)) = linalg::extreme_singular_values(&real.a.eval(z)) {
            if smin > 1e-6 * smax.max(1.0) {
                out.push(z);
            }
        }
    }
    out
}
