//! Column/row shifted sums, the four-quadrant block shifted sum `⊣⊢`,
//! block transposition and block symmetry.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE};
use crate::system::BlockDims;

/// A dense matrix viewed as a uniform grid of `blk_r × blk_c` blocks.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub data: CMat,
    pub block_rows: usize,
    pub block_cols: usize,
    pub blk_r: usize,
    pub blk_c: usize,
}

impl BlockMatrix {
    pub fn new(data: CMat, blk_r: usize, blk_c: usize) -> Result<Self> {
        if blk_r == 0 || blk_c == 0 || data.nrows() % blk_r != 0 || data.ncols() % blk_c != 0 {
            return Err(Error::dim(format!(
                "{}x{} matrix is not a grid of {blk_r}x{blk_c} blocks",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self {
            block_rows: data.nrows() / blk_r,
            block_cols: data.ncols() / blk_c,
            data,
            blk_r,
            blk_c,
        })
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        linalg::block(&self.data, i * self.blk_r, j * self.blk_c, self.blk_r, self.blk_c)
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.block_rows == other.block_rows
            && self.block_cols == other.block_cols
            && self.blk_r == other.blk_r
            && self.blk_c == other.blk_c
    }
}

/// `X ⊞ Y = [X | 0] + [0 | Y]`, padding by one block column.
pub fn col_shift_sum(x: &BlockMatrix, y: &BlockMatrix) -> Result<CMat> {
    if !x.same_grid(y) {
        return Err(Error::dim("column shifted sum needs identical block grids"));
    }
    Ok(col_shift_raw(&x.data, &y.data, x.blk_c))
}

/// Transpose dual of [`col_shift_sum`]: `[X; 0] + [0; Y]`.
pub fn row_shift_sum(x: &BlockMatrix, y: &BlockMatrix) -> Result<CMat> {
    if !x.same_grid(y) {
        return Err(Error::dim("row shifted sum needs identical block grids"));
    }
    let (nr, nc) = (x.data.nrows(), x.data.ncols());
    let mut out = linalg::zeros(nr + x.blk_r, nc);
    linalg::set_block(&mut out, 0, 0, &x.data);
    let mut tail = linalg::block(&out, x.blk_r, 0, nr, nc);
    tail = linalg::add(&tail, &y.data);
    linalg::set_block(&mut out, x.blk_r, 0, &tail);
    Ok(out)
}

fn col_shift_raw(x: &CMat, y: &CMat, blk_c: usize) -> CMat {
    let (nr, nc) = (x.nrows(), x.ncols());
    let mut out = linalg::zeros(nr, nc + blk_c);
    linalg::set_block(&mut out, 0, 0, x);
    let tail = linalg::add(&linalg::block(&out, 0, blk_c, nr, nc), y);
    linalg::set_block(&mut out, 0, blk_c, &tail);
    out
}

fn check_square(a: &CMat, dims: &BlockDims, what: &str) -> Result<()> {
    let s = dims.size();
    if a.nrows() != s || a.ncols() != s {
        return Err(Error::dim(format!(
            "{what} is {}x{}, partition ({}, {}, {}, {}) needs side {s}",
            a.nrows(),
            a.ncols(),
            dims.m,
            dims.n,
            dims.k,
            dims.r
        )));
    }
    Ok(())
}

/// The four quadrants `(X11, X12, X21, X22)` of a partitioned matrix.
pub fn quadrants(a: &CMat, dims: &BlockDims) -> (CMat, CMat, CMat, CMat) {
    let (t, b) = (dims.top(), dims.bottom());
    (
        linalg::block(a, 0, 0, t, t),
        linalg::block(a, 0, t, t, b),
        linalg::block(a, t, 0, b, t),
        linalg::block(a, t, t, b, b),
    )
}

fn from_quadrants(q11: &CMat, q12: &CMat, q21: &CMat, q22: &CMat) -> CMat {
    linalg::vcat(&[&linalg::hcat(&[q11, q12]), &linalg::hcat(&[q21, q22])])
}

/// Block column shifted sum `X ⊣⊢ Y`.
///
/// Each quadrant is column-shifted with its own column block size (`n` on the
/// left, `r` on the right); the result is `(mn+kr) × ((m+1)n + (k+1)r)`.
pub fn block_shift_sum(x: &CMat, y: &CMat, dims: &BlockDims) -> Result<CMat> {
    check_square(x, dims, "X")?;
    check_square(y, dims, "Y")?;
    let (x11, x12, x21, x22) = quadrants(x, dims);
    let (y11, y12, y21, y22) = quadrants(y, dims);
    Ok(from_quadrants(
        &col_shift_raw(&x11, &y11, dims.n),
        &col_shift_raw(&x12, &y12, dims.r),
        &col_shift_raw(&x21, &y21, dims.n),
        &col_shift_raw(&x22, &y22, dims.r),
    ))
}

fn grid_transpose(a: &CMat, d: usize, blk: usize) -> CMat {
    let mut out = linalg::zeros(a.nrows(), a.ncols());
    for i in 0..d {
        for j in 0..d {
            let b = linalg::block(a, j * blk, i * blk, blk, blk);
            linalg::set_block(&mut out, i * blk, j * blk, &b);
        }
    }
    out
}

/// Factor a `p·br × q·bc` matrix as `P ⊗ X` with `X` the first nonzero block
/// (row-major or column-major scan) and that block's coefficient equal to 1.
fn kron_factor(
    a: &CMat,
    p: usize,
    q: usize,
    br: usize,
    bc: usize,
    col_major: bool,
) -> Result<Option<(CMat, CMat)>> {
    let scale = linalg::max_abs(a);
    if scale == 0.0 {
        return Ok(None);
    }
    let order: Vec<(usize, usize)> = if col_major {
        (0..q).flat_map(|j| (0..p).map(move |i| (i, j))).collect()
    } else {
        (0..p).flat_map(|i| (0..q).map(move |j| (i, j))).collect()
    };
    let blk = |i: usize, j: usize| linalg::block(a, i * br, j * bc, br, bc);
    let (i0, j0) = *order
        .iter()
        .find(|&&(i, j)| linalg::max_abs(&blk(i, j)) > 0.0)
        .unwrap();
    let x = blk(i0, j0);
    let xx: f64 = (0..br)
        .flat_map(|i| (0..bc).map(move |j| (i, j)))
        .map(|(i, j)| x[(i, j)].norm_sqr())
        .sum();
    let tol = 1e-12 * scale;
    let mut coef = linalg::zeros(p, q);
    for &(i, j) in &order {
        let b = blk(i, j);
        let pij: Complex64 = if (i, j) == (i0, j0) {
            ONE
        } else {
            let dot: Complex64 = (0..br)
                .flat_map(|u| (0..bc).map(move |v| (u, v)))
                .map(|(u, v)| x[(u, v)].conj() * b[(u, v)])
                .sum();
            dot / xx
        };
        if linalg::max_abs_diff(&b, &linalg::scaled(&x, pij)) > tol {
            return Err(Error::Structure(format!(
                "off-diagonal block ({i}, {j}) is not a multiple of the leading block"
            )));
        }
        coef[(i, j)] = pij;
    }
    Ok(Some((coef, x)))
}

/// Block transpose: the `m×m` grid of `n×n` blocks and the `k×k` grid of
/// `r×r` blocks are transposed by grid position (contents untouched).
///
/// The off-diagonal quadrants must be Kronecker products `P ⊗ X`
/// (top-right) and `Q ⊗ Y` (bottom-left); they become `Qᵀ ⊗ X` and `Pᵀ ⊗ Y`.
/// Anything else is rejected with [`Error::Structure`].
pub fn block_transpose(a: &CMat, dims: &BlockDims) -> Result<CMat> {
    check_square(a, dims, "matrix")?;
    let BlockDims { m, n, k, r } = *dims;
    let (a11, a12, a21, a22) = quadrants(a, dims);
    let tr = kron_factor(&a12, m, k, n, r, false)?;
    let bl = kron_factor(&a21, k, m, r, n, true)?;
    let new12 = match (&tr, &bl) {
        (Some((_, x)), Some((q, _))) => linalg::kron(&linalg::transpose(q), x),
        _ => linalg::zeros(m * n, k * r),
    };
    let new21 = match (&tr, &bl) {
        (Some((p, _)), Some((_, y))) => linalg::kron(&linalg::transpose(p), y),
        _ => linalg::zeros(k * r, m * n),
    };
    Ok(from_quadrants(&grid_transpose(&a11, m, n), &new12, &new21, &grid_transpose(&a22, k, r)))
}

/// Default tolerance for symmetry tests: `1e-10 · max(1, ‖A‖_max)`.
pub fn default_symmetry_tol(a: &CMat) -> f64 {
    1e-10 * linalg::max_abs(a).max(1.0)
}

/// True iff `‖A − Aᴮ‖_max ≤ tol`; false when the block transpose is undefined.
pub fn is_block_symmetric(a: &CMat, dims: &BlockDims, tol: Option<f64>) -> bool {
    let tol = tol.unwrap_or_else(|| default_symmetry_tol(a));
    match block_transpose(a, dims) {
        Ok(t) => linalg::max_abs_diff(a, &t) <= tol,
        Err(_) => false,
    }
}
