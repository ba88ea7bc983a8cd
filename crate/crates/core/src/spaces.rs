//! Ansatz pencil spaces: builders, membership tests, dimension counts,
//! seeded sampling and the defining residual identities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::random;
use crate::shiftsum::{self, block_shift_sum};
use crate::system::{lambda_vector, padded_identity, BlockDims, MatrixPolynomial, Realization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    L1S,
    L1G,
    L2G,
    #[serde(rename = "dl")]
    DLG,
    SYM,
    HERM,
}

impl Space {
    pub fn as_str(&self) -> &'static str {
        match self {
            Space::L1S => "l1s",
            Space::L1G => "l1g",
            Space::L2G => "l2g",
            Space::DLG => "dl",
            Space::SYM => "sym",
            Space::HERM => "herm",
        }
    }

    /// Spaces whose members satisfy the right (column) identity.
    pub fn is_right(&self) -> bool {
        !matches!(self, Space::L2G)
    }

    /// Spaces whose members satisfy the left (row) identity.
    pub fn is_left(&self) -> bool {
        !matches!(self, Space::L1S | Space::L1G)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1s" => Ok(Space::L1S),
            "l1g" => Ok(Space::L1G),
            "l2g" => Ok(Space::L2G),
            "dl" | "dlg" => Ok(Space::DLG),
            "sym" | "symmetric" => Ok(Space::SYM),
            "herm" | "hermitian" => Ok(Space::HERM),
            other => Err(Error::Structure(format!("unknown space '{other}'"))),
        }
    }
}

/// A pencil `λX + Y` together with its partition, space tag and parameters.
///
/// For `L2G` members `v`, `w` hold the left ansatz vectors `s`, `z` and the
/// free blocks are those of the transposed (`L1` of `Gᵀ`) pencil.
#[derive(Clone, Debug)]
pub struct AnsatzPencil {
    pub x: CMat,
    pub y: CMat,
    pub dims: BlockDims,
    pub space: Space,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub w_a: CMat,
    pub w_d: CMat,
}

impl AnsatzPencil {
    /// Wraps an explicit pair `(X, Y)`; the free blocks are read off `X`.
    pub fn explicit(
        x: CMat,
        y: CMat,
        dims: BlockDims,
        space: Space,
        v: Vec<Complex64>,
        w: Vec<Complex64>,
    ) -> Result<Self> {
        let s = dims.size();
        if x.nrows() != s || x.ncols() != s || y.nrows() != s || y.ncols() != s {
            return Err(Error::dim(format!("pencil side must be {s}")));
        }
        if v.len() != dims.m || w.len() != dims.k {
            return Err(Error::dim("ansatz vectors must have lengths m and k"));
        }
        let (w_a, w_d) = free_blocks(&x, &dims, space);
        Ok(Self { x, y, dims, space, v, w, w_a, w_d })
    }

    pub fn size(&self) -> usize {
        self.dims.size()
    }

    /// `λX + Y`.
    pub fn eval(&self, lambda: Complex64) -> CMat {
        linalg::add(&linalg::scaled(&self.x, lambda), &self.y)
    }

    /// The pencil as a degree-1 matrix polynomial `[Y, X]`.
    pub fn as_polynomial(&self) -> MatrixPolynomial {
        MatrixPolynomial::new(vec![self.y.clone(), self.x.clone()]).unwrap()
    }
}

fn free_blocks(x: &CMat, dims: &BlockDims, space: Space) -> (CMat, CMat) {
    let BlockDims { m, n, k, r } = *dims;
    let xt;
    let src = if space == Space::L2G {
        xt = linalg::transpose(x);
        &xt
    } else {
        x
    };
    let (mn, kr) = (dims.top(), dims.bottom());
    (
        linalg::block(src, 0, n, mn, (m - 1) * n),
        linalg::block(src, mn, mn + r, kr, (k - 1) * r),
    )
}

/// `[P_hi, P_{hi-1}, …, P_lo]` side by side; empty when `hi < lo`.
fn coeff_row(p: &MatrixPolynomial, hi: usize, lo: usize) -> CMat {
    if hi < lo {
        return linalg::zeros(p.rows(), 0);
    }
    let blocks: Vec<CMat> = (lo..=hi).rev().map(|j| p.coeff(j)).collect();
    let refs: Vec<&CMat> = blocks.iter().collect();
    linalg::hcat(&refs)
}

/// `L1` member with right ansatz `(v, w)` and free blocks `W` (mn×(m−1)n),
/// `W1` (kr×(k−1)r).
pub fn build_pencil_l1(
    real: &Realization,
    v: &[Complex64],
    w: &[Complex64],
    w_a: &CMat,
    w_d: &CMat,
    space: Space,
) -> Result<AnsatzPencil> {
    if !matches!(space, Space::L1S | Space::L1G) {
        return Err(Error::Structure(format!("build_pencil_l1 cannot tag a pencil as {space}")));
    }
    let dims = real.dims();
    let BlockDims { m, n, k, r } = dims;
    if space == Space::L1S && r > n {
        return Err(Error::dim(format!("L1(S) needs r <= n, got r = {r}, n = {n}")));
    }
    if v.len() != m || w.len() != k {
        return Err(Error::dim(format!("ansatz vectors need lengths {m} and {k}")));
    }
    let (mn, kr) = (dims.top(), dims.bottom());
    if w_a.nrows() != mn || w_a.ncols() != (m - 1) * n {
        return Err(Error::dim(format!("W must be {mn}x{}", (m - 1) * n)));
    }
    if w_d.nrows() != kr || w_d.ncols() != (k - 1) * r {
        return Err(Error::dim(format!("W1 must be {kr}x{}", (k - 1) * r)));
    }

    let x11 = linalg::hcat(&[&linalg::kron_col(v, &real.a.coeff(m)), w_a]);
    let x22 = linalg::hcat(&[&linalg::kron_col(w, &real.d.coeff(k)), w_d]);
    let y11 = linalg::hcat(&[
        &linalg::sub(&linalg::kron_col(v, &coeff_row(&real.a, m - 1, 1)), w_a),
        &linalg::kron_col(v, &real.a.coeff(0)),
    ]);
    let y22 = linalg::hcat(&[
        &linalg::sub(&linalg::kron_col(w, &coeff_row(&real.d, k - 1, 1)), w_d),
        &linalg::kron_col(w, &real.d.coeff(0)),
    ]);
    let mut y12 = linalg::zeros(mn, kr);
    linalg::set_block(&mut y12, 0, kr - r, &linalg::kron_col(v, &linalg::scaled(&real.b, -ONE)));
    let mut y21 = linalg::zeros(kr, mn);
    linalg::set_block(&mut y21, 0, mn - n, &linalg::kron_col(w, &real.c));

    let x = assemble(&x11, &linalg::zeros(mn, kr), &linalg::zeros(kr, mn), &x22);
    let y = assemble(&y11, &y12, &y21, &y22);
    Ok(AnsatzPencil {
        x,
        y,
        dims,
        space,
        v: v.to_vec(),
        w: w.to_vec(),
        w_a: w_a.clone(),
        w_d: w_d.clone(),
    })
}

fn assemble(q11: &CMat, q12: &CMat, q21: &CMat, q22: &CMat) -> CMat {
    linalg::vcat(&[&linalg::hcat(&[q11, q12]), &linalg::hcat(&[q21, q22])])
}

/// `L2` member with left ansatz `(s, z)`: the transpose of the `L1` member of
/// the transposed realization. `W`, `W1` live in that transposed frame.
pub fn build_pencil_l2(
    real: &Realization,
    s: &[Complex64],
    z: &[Complex64],
    w_a: &CMat,
    w_d: &CMat,
) -> Result<AnsatzPencil> {
    let p = build_pencil_l1(&real.transpose(), s, z, w_a, w_d, Space::L1G)?;
    Ok(AnsatzPencil {
        x: linalg::transpose(&p.x),
        y: linalg::transpose(&p.y),
        space: Space::L2G,
        ..p
    })
}

/// `[0; I_{(d−1)b}]`, the free block of the first companion form.
fn companion_free_block(d: usize, b: usize) -> CMat {
    let mut w = linalg::zeros(d * b, (d - 1) * b);
    linalg::set_block(&mut w, b, 0, &linalg::identity((d - 1) * b));
    w
}

/// First companion form, the `L1` member with ansatz `(e₁, e₁)`.
pub fn build_c1(real: &Realization) -> AnsatzPencil {
    let BlockDims { m, n, k, r } = real.dims();
    build_pencil_l1(
        real,
        &linalg::unit(m, 0),
        &linalg::unit(k, 0),
        &companion_free_block(m, n),
        &companion_free_block(k, r),
        Space::L1G,
    )
    .expect("companion shapes are consistent")
}

/// Second companion form, the `L2` member with ansatz `(e₁, e₁)`.
pub fn build_c2(real: &Realization) -> AnsatzPencil {
    let BlockDims { m, n, k, r } = real.dims();
    build_pencil_l2(
        real,
        &linalg::unit(m, 0),
        &linalg::unit(k, 0),
        &companion_free_block(m, n),
        &companion_free_block(k, r),
    )
    .expect("companion shapes are consistent")
}

/// Hankel-type diagonal partition of the DL pencil for one polynomial of
/// degree `d` with `b×b` coefficients.
fn dl_partition(p: &MatrixPolynomial, d: usize, b: usize) -> (CMat, CMat) {
    let mut x = linalg::zeros(d * b, d * b);
    let mut y = linalg::zeros(d * b, d * b);
    for i in 0..d {
        for j in 0..d {
            let ix = 2 * d - 1 - i - j;
            if ix <= d {
                linalg::set_block(&mut x, i * b, j * b, &p.coeff(ix));
            }
            if i + 1 < d && j + 1 < d {
                let iy = 2 * d - 2 - i - j;
                if iy <= d {
                    linalg::set_block(&mut y, i * b, j * b, &linalg::scaled(&p.coeff(iy), -ONE));
                }
            }
        }
    }
    linalg::set_block(&mut y, (d - 1) * b, (d - 1) * b, &p.coeff(0));
    (x, y)
}

/// The block-symmetric pencil with ansatz `(e_m, e_k)` on both sides.
pub fn build_dl(real: &Realization) -> AnsatzPencil {
    let dims = real.dims();
    let BlockDims { m, n, k, r } = dims;
    let (mn, kr) = (dims.top(), dims.bottom());
    let (x11, y11) = dl_partition(&real.a, m, n);
    let (x22, y22) = dl_partition(&real.d, k, r);
    let mut y12 = linalg::zeros(mn, kr);
    linalg::set_block(&mut y12, mn - n, kr - r, &linalg::scaled(&real.b, -ONE));
    let mut y21 = linalg::zeros(kr, mn);
    linalg::set_block(&mut y21, kr - r, mn - n, &real.c);
    let x = assemble(&x11, &linalg::zeros(mn, kr), &linalg::zeros(kr, mn), &x22);
    let y = assemble(&y11, &y12, &y21, &y22);
    AnsatzPencil::explicit(x, y, dims, Space::DLG, linalg::unit(m, m - 1), linalg::unit(k, k - 1))
        .expect("DL shapes are consistent")
}

fn structure_tol(real: &Realization) -> f64 {
    1e-10 * real.scale().max(1.0)
}

fn check_structure(real: &Realization, flip: fn(&CMat) -> CMat, what: &str) -> Result<()> {
    let tol = structure_tol(real);
    for (name, p) in [("A", &real.a), ("D", &real.d)] {
        for (j, pj) in p.coeffs().iter().enumerate() {
            let dev = linalg::max_abs_diff(pj, &flip(pj));
            if dev > tol {
                return Err(Error::Structure(format!(
                    "{name}_{j} is not {what} (deviation {dev:.3e})"
                )));
            }
        }
    }
    let dev = linalg::max_abs(&linalg::add(&flip(&real.c), &real.b));
    if dev > tol {
        return Err(Error::Structure(format!(
            "coupling is not {what}: C must equal -B flipped (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

/// DL pencil of a realization with `Aᵢᵀ = Aᵢ`, `Dᵢᵀ = Dᵢ`, `Cᵀ = −B`
/// (exactly the realizations with `S(λ)ᵀ = S(λ)`); then `X`, `Y` are symmetric.
pub fn build_symmetric(real: &Realization) -> Result<AnsatzPencil> {
    check_structure(real, linalg::transpose, "symmetric")?;
    let mut p = build_dl(real);
    p.space = Space::SYM;
    Ok(p)
}

/// Hermitian analogue of [`build_symmetric`]: `Aᵢ* = Aᵢ`, `Dᵢ* = Dᵢ`, `C* = −B`.
pub fn build_hermitian(real: &Realization) -> Result<AnsatzPencil> {
    check_structure(real, linalg::adjoint, "hermitian")?;
    let mut p = build_dl(real);
    p.space = Space::HERM;
    Ok(p)
}

/// Fitted ansatz vectors and the worst shifted-sum deviation.
#[derive(Clone, Debug)]
pub struct Fit {
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub residual: f64,
}

/// Default relative tolerance for membership fits.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

fn fit_rows(data: &[CMat], template: &CMat) -> (Vec<Complex64>, f64) {
    let tt: f64 = linalg::fro(template).powi(2);
    let mut coef = Vec::with_capacity(data.len());
    let mut res = 0.0f64;
    for row in data {
        let dot: Complex64 = (0..template.nrows())
            .flat_map(|i| (0..template.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| template[(i, j)].conj() * row[(i, j)])
            .sum();
        let a = dot / tt;
        res = res.max(linalg::max_abs_diff(row, &linalg::scaled(template, a)));
        coef.push(a);
    }
    (coef, res)
}

/// Right-side fit: `X ⊣⊢ Y` against `v ⊗ [A_m … A₀ | 0 … −B]` and
/// `w ⊗ [0 … C | D_k … D₀]`, plus `X₁₂ = X₂₁ = 0`.
fn fit_l1(x: &CMat, y: &CMat, real: &Realization) -> Result<Fit> {
    let dims = real.dims();
    let BlockDims { m, n, k, r } = dims;
    let (mn, kr) = (dims.top(), dims.bottom());
    let sum = block_shift_sum(x, y, &dims)?;
    let width = sum.ncols();

    let mut t_a = linalg::zeros(n, width);
    linalg::set_block(&mut t_a, 0, 0, &coeff_row(&real.a, m, 0));
    linalg::set_block(&mut t_a, 0, width - r, &linalg::scaled(&real.b, -ONE));
    let mut t_d = linalg::zeros(r, width);
    linalg::set_block(&mut t_d, 0, m * n, &real.c);
    linalg::set_block(&mut t_d, 0, (m + 1) * n, &coeff_row(&real.d, k, 0));
    if linalg::max_abs(&t_a) == 0.0 {
        return Err(Error::DegenerateFit("A(λ) and B are all zero, v is unidentifiable".into()));
    }
    if linalg::max_abs(&t_d) == 0.0 {
        return Err(Error::DegenerateFit("D(λ) and C are all zero, w is unidentifiable".into()));
    }

    let top: Vec<CMat> = (0..m).map(|i| linalg::block(&sum, i * n, 0, n, width)).collect();
    let bot: Vec<CMat> = (0..k).map(|i| linalg::block(&sum, mn + i * r, 0, r, width)).collect();
    let (v, res_a) = fit_rows(&top, &t_a);
    let (w, res_d) = fit_rows(&bot, &t_d);
    let off = linalg::max_abs(&linalg::block(x, 0, mn, mn, kr))
        .max(linalg::max_abs(&linalg::block(x, mn, 0, kr, mn)));
    Ok(Fit { v, w, residual: res_a.max(res_d).max(off) })
}

fn fit_for(x: &CMat, y: &CMat, real: &Realization, space: Space) -> Result<Fit> {
    let right = || fit_l1(x, y, real);
    let left = || fit_l1(&linalg::transpose(x), &linalg::transpose(y), &real.transpose());
    match space {
        Space::L1S | Space::L1G => right(),
        Space::L2G => left(),
        Space::DLG | Space::SYM | Space::HERM => {
            let (fr, fl) = (right()?, left()?);
            let gap = fr
                .v
                .iter()
                .zip(&fl.v)
                .chain(fr.w.iter().zip(&fl.w))
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let mut residual = fr.residual.max(fl.residual).max(gap);
            if space == Space::SYM {
                residual = residual
                    .max(linalg::max_abs_diff(x, &linalg::transpose(x)))
                    .max(linalg::max_abs_diff(y, &linalg::transpose(y)));
            }
            if space == Space::HERM {
                residual = residual
                    .max(linalg::max_abs_diff(x, &linalg::adjoint(x)))
                    .max(linalg::max_abs_diff(y, &linalg::adjoint(y)));
            }
            Ok(Fit { v: fr.v, w: fr.w, residual })
        }
    }
}

/// Tests whether `λX + Y` belongs to `space` for `real` and returns the
/// fitted ansatz vectors. `tol` is relative to the data scale.
pub fn membership(x: &CMat, y: &CMat, real: &Realization, space: Space, tol: Option<f64>) -> Result<Fit> {
    let dims = real.dims();
    if x.nrows() != dims.size() || y.nrows() != dims.size() {
        return Err(Error::dim(format!("pencil side must be {}", dims.size())));
    }
    let fit = fit_for(x, y, real, space)?;
    let scale = real.scale().max(linalg::max_abs(x)).max(linalg::max_abs(y)).max(1.0);
    let tol = tol.unwrap_or(MEMBERSHIP_TOL) * scale;
    if fit.residual > tol {
        return Err(Error::NotAMember { residual: fit.residual, tol });
    }
    Ok(fit)
}

/// `dim L1(G) = m + m(m−1)n² + k + k(k−1)r²`.
pub fn dim_space(dims: &BlockDims) -> usize {
    let BlockDims { m, n, k, r } = *dims;
    m + m * (m - 1) * n * n + k + k * (k - 1) * r * r
}

/// Seeded member of `space`: unit-norm Gaussian ansatz vectors and Gaussian
/// free blocks. The DL-type spaces are singletons and ignore the seed.
pub fn sample_space(real: &Realization, seed: u64, space: Space) -> Result<AnsatzPencil> {
    let BlockDims { m, n, k, r } = real.dims();
    let mut rng = random::rng(seed);
    let v = random::unit_vector(&mut rng, m);
    let w = random::unit_vector(&mut rng, k);
    let w_a = random::matrix(&mut rng, m * n, (m - 1) * n);
    let w_d = random::matrix(&mut rng, k * r, (k - 1) * r);
    match space {
        Space::L1S | Space::L1G => build_pencil_l1(real, &v, &w, &w_a, &w_d, space),
        Space::L2G => build_pencil_l2(real, &v, &w, &w_a, &w_d),
        Space::DLG => Ok(build_dl(real)),
        Space::SYM => build_symmetric(real),
        Space::HERM => build_hermitian(real),
    }
}

/// `[Λ_{m−1} ⊗ M; Λ_{k−1} ⊗ N]` for column blocks `M` (n×c) and `N` (r×c).
fn stacked_lambda(dims: &BlockDims, lambda: Complex64, top: &CMat, bottom: &CMat) -> CMat {
    let top = linalg::kron_col(&lambda_vector(dims.m, lambda), top);
    let bottom = linalg::kron_col(&lambda_vector(dims.k, lambda), bottom);
    linalg::vcat(&[&top, &bottom])
}

fn right_residual(p: &AnsatzPencil, real: &Realization, lambda: Complex64) -> Result<f64> {
    let dims = p.dims;
    let lhs = linalg::mul(
        &p.eval(lambda),
        &stacked_lambda(&dims, lambda, &real.resolvent_b(lambda)?, &linalg::identity(dims.r)),
    );
    let g = real.transfer(lambda)?;
    let rhs = linalg::vcat(&[
        &linalg::zeros(dims.top(), dims.r),
        &linalg::kron_col(&p.w, &g),
    ]);
    Ok(linalg::max_abs_diff(&lhs, &rhs))
}

fn left_residual(p: &AnsatzPencil, real: &Realization, lambda: Complex64) -> Result<f64> {
    let dims = p.dims;
    let proj = stacked_lambda(
        &dims,
        lambda,
        &linalg::transpose(&real.c_resolvent(lambda)?),
        &linalg::identity(dims.r),
    );
    let lhs = linalg::mul(&linalg::transpose(&proj), &p.eval(lambda));
    let g = real.transfer(lambda)?;
    let rhs = linalg::hcat(&[
        &linalg::zeros(dims.r, dims.top()),
        &linalg::kron(&linalg::row(&p.w), &g),
    ]);
    Ok(linalg::max_abs_diff(&lhs, &rhs))
}

fn system_residual(p: &AnsatzPencil, real: &Realization, lambda: Complex64) -> Result<f64> {
    let dims = p.dims;
    let pad = padded_identity(dims.r, dims.n)?;
    let lhs = linalg::mul(&p.eval(lambda), &stacked_lambda(&dims, lambda, &linalg::identity(dims.n), &pad));
    let a = real.a.eval(lambda);
    let d = real.d.eval(lambda);
    let top = linalg::sub(&a, &linalg::mul(&real.b, &pad));
    let bottom = linalg::add(&real.c, &linalg::mul(&d, &pad));
    let rhs = linalg::vcat(&[&linalg::kron_col(&p.v, &top), &linalg::kron_col(&p.w, &bottom)]);
    Ok(linalg::max_abs_diff(&lhs, &rhs))
}

/// Worst violation of the defining identity of `p.space` over the samples:
/// right identity for `L1G`, left identity for `L2G`, both for the DL family,
/// and the system-matrix identity for `L1S`.
pub fn residual_ansatz(p: &AnsatzPencil, real: &Realization, samples: &[Complex64]) -> Result<f64> {
    if p.dims != real.dims() {
        return Err(Error::dim("pencil and realization partitions differ"));
    }
    let mut worst = 0.0f64;
    for &z in samples {
        let res = match p.space {
            Space::L1S => system_residual(p, real, z)?,
            Space::L1G => right_residual(p, real, z)?,
            Space::L2G => left_residual(p, real, z)?,
            Space::DLG | Space::SYM | Space::HERM => {
                right_residual(p, real, z)?.max(left_residual(p, real, z)?)
            }
        };
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Elementwise transpose of a pencil, retagged for the transposed realization.
pub fn transpose_pencil(p: &AnsatzPencil) -> AnsatzPencil {
    let space = match p.space {
        Space::L2G => Space::L1G,
        Space::L1G | Space::L1S => Space::L2G,
        s => s,
    };
    AnsatzPencil {
        x: linalg::transpose(&p.x),
        y: linalg::transpose(&p.y),
        space,
        ..p.clone()
    }
}

/// Block transpose of both coefficients.
pub fn block_transpose_pencil(p: &AnsatzPencil) -> Result<(CMat, CMat)> {
    Ok((
        shiftsum::block_transpose(&p.x, &p.dims)?,
        shiftsum::block_transpose(&p.y, &p.dims)?,
    ))
}

/// Zero pencil of the right shape, tagged `space`, with zero ansatz vectors.
pub fn zero_pencil(dims: BlockDims, space: Space) -> AnsatzPencil {
    let s = dims.size();
    AnsatzPencil::explicit(
        linalg::zeros(s, s),
        linalg::zeros(s, s),
        dims,
        space,
        vec![ZERO; dims.m],
        vec![ZERO; dims.k],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows};
    use crate::shiftsum::is_block_symmetric;
    use crate::system::{example_r1, example_r2};

    fn samples() -> Vec<Complex64> {
        vec![ZERO, ONE, c(3.0, 0.0), c(0.4, -0.7)]
    }

    #[test]
    fn c1_of_r1_is_the_system_pencil() {
        let p = build_c1(&example_r1());
        assert_eq!(linalg::max_abs_diff(&p.x, &linalg::identity(2)), 0.0);
        assert_eq!(linalg::max_abs_diff(&p.y, &from_real_rows(&[&[-2., -1.], &[1., 0.]])), 0.0);
        let e = linalg::zeros(1, 0);
        let q = build_pencil_l1(&example_r1(), &[ONE], &[ONE], &e, &e, Space::L1G).unwrap();
        assert_eq!(linalg::max_abs_diff(&p.y, &q.y), 0.0);
    }

    #[test]
    fn c1_of_r2_layout() {
        let p = build_c1(&example_r2());
        assert_eq!(linalg::max_abs_diff(&p.x, &linalg::identity(3)), 0.0);
        let want = from_real_rows(&[&[0., 1., -1.], &[-1., 0., 0.], &[0., 1., 0.]]);
        assert_eq!(linalg::max_abs_diff(&p.y, &want), 0.0);
    }

    #[test]
    fn c2_of_r2_layout() {
        let p = build_c2(&example_r2());
        assert_eq!(p.space, Space::L2G);
        assert_eq!(linalg::max_abs_diff(&p.x, &linalg::identity(3)), 0.0);
        let want = from_real_rows(&[&[0., -1., 0.], &[1., 0., -1.], &[1., 0., 0.]]);
        assert_eq!(linalg::max_abs_diff(&p.y, &want), 0.0);
        let r1 = example_r1();
        assert_eq!(linalg::max_abs_diff(&build_c2(&r1).y, &build_c1(&r1).y), 0.0);
    }

    #[test]
    fn zero_parameters_give_zero_pencil() {
        let mut rng = random::rng(3);
        let real = random::realization(&mut rng, BlockDims::new(2, 2, 2, 1).unwrap());
        let p = build_pencil_l1(
            &real,
            &[ZERO; 2],
            &[ZERO; 2],
            &linalg::zeros(4, 2),
            &linalg::zeros(2, 1),
            Space::L1G,
        )
        .unwrap();
        assert_eq!(linalg::max_abs(&p.x) + linalg::max_abs(&p.y), 0.0);
        let fit = membership(&p.x, &p.y, &real, Space::L1G, None).unwrap();
        assert!(linalg::vec_max_abs(&fit.v) == 0.0 && linalg::vec_max_abs(&fit.w) == 0.0);
        assert_eq!(residual_ansatz(&p, &real, &samples()).unwrap(), 0.0);
    }

    #[test]
    fn builder_rejects_bad_shapes() {
        let real = example_r2();
        let e = linalg::zeros(1, 0);
        assert!(build_pencil_l1(&real, &[ONE], &[ONE], &e, &e, Space::L1G).is_err());
        assert!(build_pencil_l1(&real, &[ONE, ZERO], &[ONE], &linalg::zeros(2, 1), &e, Space::L2G).is_err());
    }

    #[test]
    fn c1_membership_and_perturbation() {
        let real = example_r1();
        let p = build_c1(&real);
        let fit = membership(&p.x, &p.y, &real, Space::L1G, None).unwrap();
        assert!((fit.v[0] - ONE).norm() < 1e-14 && (fit.w[0] - ONE).norm() < 1e-14);
        assert!(residual_ansatz(&p, &real, &samples()).unwrap() <= 1e-14);

        let mut bad = p.clone();
        bad.y[(0, 1)] += ONE;
        assert!(matches!(
            membership(&bad.x, &bad.y, &real, Space::L1G, None),
            Err(Error::NotAMember { .. })
        ));
        assert!(residual_ansatz(&bad, &real, &samples()).unwrap() >= 0.1);
    }

    #[test]
    fn degenerate_fit_when_templates_vanish() {
        let mut real = example_r1();
        real.d = MatrixPolynomial::scalar_real(&[0.0, 0.0]).unwrap();
        real.c = linalg::scalar(ZERO);
        let z = linalg::zeros(2, 2);
        assert!(matches!(membership(&z, &z, &real, Space::L1G, None), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn dimension_formula_examples() {
        assert_eq!(dim_space(&BlockDims::new(1, 5, 1, 3).unwrap()), 2);
        assert_eq!(dim_space(&BlockDims::new(2, 2, 2, 1).unwrap()), 14);
        assert_eq!(dim_space(&BlockDims::new(1, 1, 1, 1).unwrap()), 2);
    }

    #[test]
    fn dl_small_degree_layouts() {
        let real = example_r1();
        let p = build_dl(&real);
        let c1 = build_c1(&real);
        assert_eq!(linalg::max_abs_diff(&p.x, &c1.x) + linalg::max_abs_diff(&p.y, &c1.y), 0.0);

        // m = 2: X₁₁ = [[0, A₂], [A₂, A₁]], Y₁₁ = [[−A₂, 0], [0, A₀]]
        let a = MatrixPolynomial::scalar_real(&[5.0, 3.0, 2.0]).unwrap();
        let d = MatrixPolynomial::scalar_real(&[7.0, 11.0]).unwrap();
        let real = Realization::new(a, linalg::scalar(c(13.0, 0.0)), linalg::scalar(c(17.0, 0.0)), d).unwrap();
        let p = build_dl(&real);
        let x = from_real_rows(&[&[0., 2., 0.], &[2., 3., 0.], &[0., 0., 11.]]);
        let y = from_real_rows(&[&[-2., 0., 0.], &[0., 5., -13.], &[0., 17., 7.]]);
        assert_eq!(linalg::max_abs_diff(&p.x, &x), 0.0);
        assert_eq!(linalg::max_abs_diff(&p.y, &y), 0.0);
    }

    #[test]
    fn dl_is_in_both_spaces_and_block_symmetric() {
        for seed in 0..6 {
            let mut rng = random::rng(seed);
            let dims = BlockDims::new(1 + seed as usize % 3, 2, 1 + (seed as usize + 1) % 3, 2).unwrap();
            let real = random::realization(&mut rng, dims);
            let p = build_dl(&real);
            let fit = membership(&p.x, &p.y, &real, Space::DLG, None).unwrap();
            assert!((fit.v[dims.m - 1] - ONE).norm() < 1e-12);
            assert!(is_block_symmetric(&p.x, &dims, None));
            assert!(is_block_symmetric(&p.y, &dims, None));
            let pts = random::sample_points(&mut rng, &real, 5);
            assert!(residual_ansatz(&p, &real, &pts).unwrap() < 1e-10);
            let q = build_pencil_l1(&real, &p.v, &p.w, &p.w_a, &p.w_d, Space::L1G).unwrap();
            assert!(linalg::max_abs_diff(&p.y, &q.y) < 1e-15);
        }
    }

    #[test]
    fn symmetric_and_hermitian_builders() {
        let mut rng = random::rng(11);
        let dims = BlockDims::new(2, 2, 2, 1).unwrap();
        let real = random::symmetric_realization(&mut rng, dims);
        let p = build_symmetric(&real).unwrap();
        assert!(linalg::max_abs_diff(&p.x, &linalg::transpose(&p.x)) <= 1e-14);
        assert!(linalg::max_abs_diff(&p.y, &linalg::transpose(&p.y)) <= 1e-14);
        assert!(build_hermitian(&real).is_err());

        let real = random::hermitian_realization(&mut rng, dims);
        let p = build_hermitian(&real).unwrap();
        assert!(linalg::max_abs_diff(&p.x, &linalg::adjoint(&p.x)) <= 1e-14);
        assert!(linalg::max_abs_diff(&p.y, &linalg::adjoint(&p.y)) <= 1e-14);
        membership(&p.x, &p.y, &real, Space::HERM, None).unwrap();

        let generic = random::realization(&mut rng, dims);
        assert!(matches!(build_symmetric(&generic), Err(Error::Structure(_))));
        let r1 = example_r1();
        assert!(build_symmetric(&r1).is_err());
    }

    #[test]
    fn l1s_identity_and_restriction() {
        let real = example_r1();
        let mut p = build_c1(&real);
        p.space = Space::L1S;
        assert!(residual_ansatz(&p, &real, &samples()).unwrap() < 1e-14);

        let mut rng = random::rng(5);
        let wide = random::realization(&mut rng, BlockDims::new(1, 1, 1, 2).unwrap());
        let e = linalg::zeros(1, 0);
        let e2 = linalg::zeros(2, 0);
        assert!(build_pencil_l1(&wide, &[ONE], &[ONE], &e, &e2, Space::L1S).is_err());
        assert!(build_pencil_l1(&wide, &[ONE], &[ONE], &e, &e2, Space::L1G).is_ok());
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut rng = random::rng(1);
        let real = random::realization(&mut rng, BlockDims::new(2, 2, 2, 1).unwrap());
        let a = sample_space(&real, 42, Space::L1G).unwrap();
        let b = sample_space(&real, 42, Space::L1G).unwrap();
        assert_eq!(linalg::max_abs_diff(&a.x, &b.x) + linalg::max_abs_diff(&a.y, &b.y), 0.0);
        let fit = membership(&a.x, &a.y, &real, Space::L1G, None).unwrap();
        assert!(linalg::vec_max_abs(&fit.v.iter().zip(&a.v).map(|(p, q)| p - q).collect::<Vec<_>>()) < 1e-10);
    }

    #[test]
    fn space_tags_round_trip() {
        for s in [Space::L1S, Space::L1G, Space::L2G, Space::DLG, Space::SYM, Space::HERM] {
            assert_eq!(s.as_str().parse::<Space>().unwrap(), s);
            let js = serde_json::to_string(&s).unwrap();
            assert_eq!(js, format!("\"{}\"", s.as_str()));
        }
        assert!("l3g".parse::<Space>().is_err());
    }
}
