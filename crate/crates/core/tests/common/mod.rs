//! Oracles shared by the integration tests. Nothing here calls the shifted
//! sum or membership code of the library.
#![allow(dead_code)]

use faer::Mat;
use num_complex::Complex64;
use rosenlin::linalg::{CMat, ONE};
use rosenlin::system::BlockDims;
use rosenlin::Realization;

/// Every `(m, n, k, r)` with positive entries and `mn + kr <= limit`.
pub fn dims_up_to(limit: usize) -> Vec<BlockDims> {
    let mut out = Vec::new();
    for m in 1..=limit {
        for n in 1..=limit {
            for k in 1..=limit {
                for r in 1..=limit {
                    if m * n + k * r <= limit {
                        out.push(BlockDims::new(m, n, k, r).unwrap());
                    }
                }
            }
        }
    }
    out
}

/// The defining constraints of `L1(G)` written entry by entry. Unknowns
/// are `vec X`, `vec Y` (row-major), then `v` and `w`. Each row of the returned matrix is one scalar equation.
pub fn l1_constraint_matrix(real: &Realization) -> CMat {
    let d = real.dims();
    let (m, n, k, r) = (d.m, d.n, d.k, d.r);
    let size = m * n + k * r;
    let unknowns = 2 * size * size + m + k;
    let xi = |i: usize, j: usize| i * size + j;
    let yi = |i: usize, j: usize| size * size + i * size + j;
    let vi = |i: usize| 2 * size * size + i;
    let wi = |i: usize| 2 * size * size + m + i;

    let mut rows: Vec<Vec<(usize, Complex64)>> = Vec::new();
    let top = m * n;
    // Column (in the shifted sum) c of a partition of block width b and
    // `blocks` block columns: X contributes its column c when c < blocks*b,
    // Y contributes its column c − b when c >= b.
    for i in 0..size {
        let in_top = i < top;
        let (row_block, row_in) = if in_top { (i / n, i % n) } else { ((i - top) / r, (i - top) % r) };
        // left partition columns: width n, m blocks, shifted sum has m+1 blocks
        for c in 0..(m + 1) * n {
            let mut eq = Vec::new();
            if c < m * n {
                eq.push((xi(i, c), ONE));
            }
            if c >= n {
                eq.push((yi(i, c - n), ONE));
            }
            let (cb, cin) = (c / n, c % n);
            if in_top {
                // v ⊗ [A_m … A_0]
                let coeff = real.a.coeff(m - cb)[(row_in, cin)];
                eq.push((vi(row_block), -coeff));
            } else if cb == m {
                // w ⊗ [0 … 0 C]
                eq.push((wi(row_block), -real.c[(row_in, cin)]));
            }
            rows.push(eq);
        }
        // right partition columns: width r, k blocks
        for c in 0..(k + 1) * r {
            let mut eq = Vec::new();
            if c < k * r {
                eq.push((xi(i, top + c), ONE));
            }
            if c >= r {
                eq.push((yi(i, top + c - r), ONE));
            }
            let (cb, cin) = (c / r, c % r);
            if in_top {
                if cb == k {
                    // v ⊗ [0 … 0 −B]
                    eq.push((vi(row_block), real.b[(row_in, cin)]));
                }
            } else {
                let coeff = real.d.coeff(k - cb)[(row_in, cin)];
                eq.push((wi(row_block), -coeff));
            }
            rows.push(eq);
        }
        // X12 = 0 and X21 = 0
        for j in 0..size {
            if in_top != (j < top) {
                rows.push(vec![(xi(i, j), ONE)]);
            }
        }
    }
    let mut a = Mat::<Complex64>::zeros(rows.len(), unknowns);
    for (ri, eq) in rows.iter().enumerate() {
        for &(col, val) in eq {
            a[(ri, col)] += val;
        }
    }
    a
}

/// Numerical rank from singular values, with a gap-based threshold.
pub fn numerical_rank(a: &CMat) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = a.singular_values().unwrap();
    let smax = s.iter().cloned().fold(0.0, f64::max);
    s.iter().filter(|&&x| x > 1e-9 * smax.max(1.0)).count()
}

/// `dim L1(G)` as the nullity of the constraint matrix.
pub fn nullity_oracle(real: &Realization) -> usize {
    let a = l1_constraint_matrix(real);
    a.ncols() - numerical_rank(&a)
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            best = best.max(a[(i, j)].norm());
        }
    }
    best
}

pub fn diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            best = best.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    best
}

/// Assemble a matrix from a grid of blocks; `None` is a zero block whose
/// shape comes from the other blocks of its row and column.
pub fn grid(blocks: &[Vec<Option<CMat>>]) -> CMat {
    let heights: Vec<usize> = blocks
        .iter()
        .map(|row| row.iter().flatten().next().expect("row has a block").nrows())
        .collect();
    let ncols = blocks[0].len();
    let widths: Vec<usize> = (0..ncols)
        .map(|j| blocks.iter().find_map(|row| row[j].as_ref()).expect("column has a block").ncols())
        .collect();
    let mut out = Mat::<Complex64>::zeros(heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (bi, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (bj, b) in row.iter().enumerate() {
            if let Some(b) = b {
                assert_eq!((b.nrows(), b.ncols()), (heights[bi], widths[bj]));
                out.submatrix_mut(r0, c0, b.nrows(), b.ncols()).copy_from(b);
            }
            c0 += widths[bj];
        }
        r0 += heights[bi];
    }
    out
}

/// `P(λ)` by direct power sums.
pub fn eval_poly(coeffs: &[CMat], lambda: Complex64) -> CMat {
    let mut out = Mat::<Complex64>::zeros(coeffs[0].nrows(), coeffs[0].ncols());
    let mut p = ONE;
    for c in coeffs {
        out += c * faer::Scale(p);
        p *= lambda;
    }
    out
}

/// `G(λ) = C A(λ)⁻¹ B + D(λ)` through an explicit inverse.
pub fn transfer(real: &Realization, lambda: Complex64) -> CMat {
    use faer::linalg::solvers::Solve;
    let a = eval_poly(real.a.coeffs(), lambda);
    let ainv_b = a.partial_piv_lu().solve(&real.b);
    &real.c * &ainv_b + eval_poly(real.d.coeffs(), lambda)
}

pub fn neg(a: &CMat) -> CMat {
    a * faer::Scale(-ONE)
}
