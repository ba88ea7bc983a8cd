//! Small dense helpers on top of `faer` used across the crate.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Mat<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

/// Builds a matrix from real row-major data.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(nr, nc, |i, j| c(rows[i][j], 0.0))
}

pub fn scalar(z: Complex64) -> CMat {
    Mat::from_fn(1, 1, |_, _| z)
}

pub fn scaled(a: &CMat, s: Complex64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    debug_assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)])
}

pub fn sub(a: &CMat, b: &CMat) -> CMat {
    debug_assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)])
}

pub fn mul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

pub fn transpose(a: &CMat) -> CMat {
    a.transpose().to_owned()
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn conj(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kron(b)
}

/// `v ⊗ B` for a column vector `v`.
pub fn kron_col(v: &[Complex64], b: &CMat) -> CMat {
    kron(&col(v), b)
}

pub fn col(v: &[Complex64]) -> CMat {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

pub fn row(v: &[Complex64]) -> CMat {
    Mat::from_fn(1, v.len(), |_, j| v[j])
}

pub fn to_vec(a: &CMat) -> Vec<Complex64> {
    (0..a.ncols())
        .flat_map(|j| (0..a.nrows()).map(move |i| (i, j)))
        .map(|(i, j)| a[(i, j)])
        .collect()
}

/// Unit vector `e_i` (zero-based) of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<Complex64> {
    let mut e = vec![ZERO; n];
    e[i] = ONE;
    e
}

pub fn block(a: &CMat, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
    a.submatrix(r0, c0, nr, nc).to_owned()
}

pub fn set_block(a: &mut CMat, r0: usize, c0: usize, b: &CMat) {
    a.submatrix_mut(r0, c0, b.nrows(), b.ncols()).copy_from(b);
}

pub fn hcat(parts: &[&CMat]) -> CMat {
    let nr = parts.first().map_or(0, |p| p.nrows());
    let nc = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(nr, nc);
    let mut c0 = 0;
    for p in parts {
        debug_assert_eq!(p.nrows(), nr);
        set_block(&mut out, 0, c0, p);
        c0 += p.ncols();
    }
    out
}

pub fn vcat(parts: &[&CMat]) -> CMat {
    let nc = parts.first().map_or(0, |p| p.ncols());
    let nr = parts.iter().map(|p| p.nrows()).sum();
    let mut out = zeros(nr, nc);
    let mut r0 = 0;
    for p in parts {
        debug_assert_eq!(p.ncols(), nc);
        set_block(&mut out, r0, 0, p);
        r0 += p.nrows();
    }
    out
}

pub fn max_abs(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.norm_max()
}

pub fn fro(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.norm_l2()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    a.singular_values()
        .map_err(|e| Error::SolverFailure(format!("svd: {e:?}")))
}

/// Numerical rank: singular values above `tol`.
pub fn rank(a: &CMat, tol: f64) -> Result<usize> {
    Ok(singular_values(a)?.into_iter().filter(|&s| s > tol).count())
}

/// Returns `(σ_min, σ_max)` of a square matrix.
pub fn extreme_singular_values(a: &CMat) -> Result<(f64, f64)> {
    let s = singular_values(a)?;
    Ok((s.last().copied().unwrap_or(0.0), s.first().copied().unwrap_or(0.0)))
}

/// Solves `a · x = b` by partial-pivot LU after checking that `a` is not
/// singular to `1e-12 · max(σ_max, 1)`. On failure returns the ratio
/// `σ_min / max(σ_max, 1)` so callers can report it.
pub fn checked_solve(a: &CMat, b: &CMat) -> std::result::Result<CMat, f64> {
    let (smin, smax) = extreme_singular_values(a).map_err(|_| 0.0)?;
    let ratio = smin / smax.max(1.0);
    if !(ratio >= 1e-12) {
        return Err(ratio);
    }
    Ok(a.partial_piv_lu().solve(b))
}

pub fn solve(a: &CMat, b: &CMat) -> CMat {
    a.partial_piv_lu().solve(b)
}

/// Determinant by Gaussian elimination with partial pivoting; exactly zero
/// for a matrix with a zero pivot column.
pub fn det(a: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut u = a.clone();
    let mut d = ONE;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| u[(i, k)].norm().total_cmp(&u[(j, k)].norm())).unwrap();
        if u[(p, k)] == ZERO {
            return ZERO;
        }
        if p != k {
            for j in k..n {
                let t = u[(k, j)];
                u[(k, j)] = u[(p, j)];
                u[(p, j)] = t;
            }
            d = -d;
        }
        let piv = u[(k, k)];
        d *= piv;
        for i in k + 1..n {
            let f = u[(i, k)] / piv;
            for j in k + 1..n {
                let t = u[(k, j)];
                u[(i, j)] -= f * t;
            }
        }
    }
    d
}

/// Right and left singular vectors belonging to the smallest singular value.
pub fn null_vectors(a: &CMat) -> Result<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let svd = a
        .svd()
        .map_err(|e| Error::SolverFailure(format!("svd: {e:?}")))?;
    let n = a.ncols();
    let m = a.nrows();
    let k = n.min(m) - 1;
    let v = svd.V();
    let u = svd.U();
    let right = (0..n).map(|i| v[(i, n - 1)]).collect();
    let left = (0..m).map(|i| u[(i, m - 1)]).collect();
    let smin = svd.S().column_vector()[k].re;
    Ok((right, left, smin))
}

/// Nonsingular `M` with `M v = e_1`, built from a Householder reflector.
pub fn householder_to_e1(v: &[Complex64]) -> Option<CMat> {
    let n = v.len();
    let nv = vec_norm(v);
    if n == 0 || nv == 0.0 {
        return None;
    }
    // H v = α e_1 with α = -e^{i arg v_0} ‖v‖.
    let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { ONE };
    let alpha = -phase * nv;
    let mut u: Vec<Complex64> = v.to_vec();
    u[0] -= alpha;
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let h = if uu == 0.0 {
        identity(n)
    } else {
        Mat::from_fn(n, n, |i, j| {
            let d = if i == j { ONE } else { ZERO };
            d - u[i] * u[j].conj() * (2.0 / uu)
        })
    };
    Some(scaled(&h, ONE / alpha))
}

pub fn mat_vec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    to_vec(&(a * &col(x)))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&sub(a, b))
}
