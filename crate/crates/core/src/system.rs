//! Matrix polynomials, realizations and the system matrix / transfer function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, ONE, ZERO};

/// `Σ λʲ Pⱼ` with dense complex coefficients in ascending degree.
#[derive(Clone, Debug)]
pub struct MatrixPolynomial {
    coeffs: Vec<CMat>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<CMat>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::dim("matrix polynomial needs at least one coefficient"))?;
        let (r, cc) = (first.nrows(), first.ncols());
        if r == 0 || cc == 0 {
            return Err(Error::dim("coefficients must be nonempty matrices"));
        }
        for (j, p) in coeffs.iter().enumerate() {
            if p.nrows() != r || p.ncols() != cc {
                return Err(Error::dim(format!(
                    "coefficient {j} is {}x{}, expected {r}x{cc}",
                    p.nrows(),
                    p.ncols()
                )));
            }
        }
        Ok(Self { coeffs })
    }

    /// Scalar polynomial from ascending coefficients.
    pub fn scalar(coeffs: &[Complex64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&z| linalg::scalar(z)).collect())
    }

    pub fn scalar_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| linalg::scalar(c(x, 0.0))).collect())
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Coefficient of `λʲ`; zero above the stored degree.
    pub fn coeff(&self, j: usize) -> CMat {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.rows(), self.cols()))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs[0].ncols()
    }

    pub fn eval(&self, lambda: Complex64) -> CMat {
        eval_polymat(self, lambda)
    }

    pub fn transpose(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(linalg::transpose).collect() }
    }

    /// Coefficientwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(linalg::adjoint).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }
}

/// Horner evaluation of `Σ λʲ Pⱼ`.
pub fn eval_polymat(p: &MatrixPolynomial, lambda: Complex64) -> CMat {
    let mut acc = p.coeffs.last().unwrap().clone();
    for pj in p.coeffs.iter().rev().skip(1) {
        acc = linalg::add(&linalg::scaled(&acc, lambda), pj);
    }
    acc
}

/// `[λ^{d-1}, …, λ, 1]ᵀ`.
pub fn lambda_vector(d: usize, lambda: Complex64) -> Vec<Complex64> {
    let mut out = vec![ONE; d];
    for i in (0..d.saturating_sub(1)).rev() {
        out[i] = out[i + 1] * lambda;
    }
    out
}

/// `I_{r×n}`: the r×r identity followed by n−r zero columns.
pub fn padded_identity(r: usize, n: usize) -> Result<CMat> {
    if r > n {
        return Err(Error::dim(format!("padded identity needs r <= n, got r = {r}, n = {n}")));
    }
    Ok(CMat::from_fn(r, n, |i, j| if i == j { ONE } else { ZERO }))
}

/// Partition `(m, n, k, r)` of a pencil of side `mn + kr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockDims {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
}

impl BlockDims {
    pub fn new(m: usize, n: usize, k: usize, r: usize) -> Result<Self> {
        if m == 0 || n == 0 || k == 0 || r == 0 {
            return Err(Error::dim(format!("block dims must be positive, got ({m}, {n}, {k}, {r})")));
        }
        Ok(Self { m, n, k, r })
    }

    /// Rows of the top partition, `mn`.
    pub fn top(&self) -> usize {
        self.m * self.n
    }

    /// Rows of the bottom partition, `kr`.
    pub fn bottom(&self) -> usize {
        self.k * self.r
    }

    pub fn size(&self) -> usize {
        self.top() + self.bottom()
    }
}

/// The quadruple `(A(λ), B, C, D(λ))` with `G = C A⁻¹ B + D`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub a: MatrixPolynomial,
    pub b: CMat,
    pub c: CMat,
    pub d: MatrixPolynomial,
}

impl Realization {
    pub fn new(a: MatrixPolynomial, b: CMat, c: CMat, d: MatrixPolynomial) -> Result<Self> {
        let n = a.rows();
        let r = d.rows();
        if a.cols() != n {
            return Err(Error::dim("A(λ) must be square"));
        }
        if d.cols() != r {
            return Err(Error::dim("D(λ) must be square"));
        }
        if a.degree() < 1 || d.degree() < 1 {
            return Err(Error::dim("A(λ) and D(λ) need degree at least 1"));
        }
        if b.nrows() != n || b.ncols() != r {
            return Err(Error::dim(format!("B is {}x{}, expected {n}x{r}", b.nrows(), b.ncols())));
        }
        if c.nrows() != r || c.ncols() != n {
            return Err(Error::dim(format!("C is {}x{}, expected {r}x{n}", c.nrows(), c.ncols())));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn dims(&self) -> BlockDims {
        BlockDims { m: self.a.degree(), n: self.a.rows(), k: self.d.degree(), r: self.d.rows() }
    }

    /// Realization of `Gᵀ` whose system matrix is `S(λ)ᵀ`: `(Aᵀ, −Cᵀ, −Bᵀ, Dᵀ)`.
    pub fn transpose(&self) -> Self {
        Self {
            a: self.a.transpose(),
            b: linalg::scaled(&linalg::transpose(&self.c), -ONE),
            c: linalg::scaled(&linalg::transpose(&self.b), -ONE),
            d: self.d.transpose(),
        }
    }

    /// Largest coefficient magnitude over all blocks.
    pub fn scale(&self) -> f64 {
        self.a
            .max_abs()
            .max(self.d.max_abs())
            .max(linalg::max_abs(&self.b))
            .max(linalg::max_abs(&self.c))
    }

    /// `A(λ)⁻¹ B`, or a pole error if `A(λ)` is numerically singular.
    pub fn resolvent_b(&self, lambda: Complex64) -> Result<CMat> {
        linalg::checked_solve(&self.a.eval(lambda), &self.b)
            .map_err(|ratio| Error::Pole { lambda, ratio })
    }

    /// `−C A(λ)⁻¹` (an r×n matrix).
    pub fn c_resolvent(&self, lambda: Complex64) -> Result<CMat> {
        let at = linalg::transpose(&self.a.eval(lambda));
        let ct = linalg::transpose(&self.c);
        let x = linalg::checked_solve(&at, &ct).map_err(|ratio| Error::Pole { lambda, ratio })?;
        Ok(linalg::scaled(&linalg::transpose(&x), -ONE))
    }

    pub fn transfer(&self, lambda: Complex64) -> Result<CMat> {
        eval_transfer(self, lambda)
    }

    pub fn system_matrix(&self) -> MatrixPolynomial {
        build_system_matrix(self)
    }

    /// Probe whether `det A(λ)` is nonzero at a few fixed points off the real axis.
    pub fn a_is_regular(&self) -> bool {
        [c(0.3141, 0.2718), c(-1.17, 0.61), c(0.77, -1.31)].iter().any(|&z| {
            linalg::extreme_singular_values(&self.a.eval(z))
                .map(|(smin, smax)| smin > 1e-12 * smax.max(1.0))
                .unwrap_or(false)
        })
    }
}

/// `S(λ) = [A(λ), −B; C, D(λ)]` as a matrix polynomial of degree `max(m, k)`.
pub fn build_system_matrix(r: &Realization) -> MatrixPolynomial {
    let n = r.a.rows();
    let rr = r.d.rows();
    let deg = r.a.degree().max(r.d.degree());
    let coeffs = (0..=deg)
        .map(|j| {
            let mut s = linalg::zeros(n + rr, n + rr);
            linalg::set_block(&mut s, 0, 0, &r.a.coeff(j));
            linalg::set_block(&mut s, n, n, &r.d.coeff(j));
            if j == 0 {
                linalg::set_block(&mut s, 0, n, &linalg::scaled(&r.b, -ONE));
                linalg::set_block(&mut s, n, 0, &r.c);
            }
            s
        })
        .collect();
    MatrixPolynomial { coeffs }
}

/// `G(λ) = C A(λ)⁻¹ B + D(λ)` through a linear solve.
pub fn eval_transfer(r: &Realization, lambda: Complex64) -> Result<CMat> {
    let x = r.resolvent_b(lambda)?;
    Ok(linalg::add(&linalg::mul(&r.c, &x), &r.d.eval(lambda)))
}

/// R1: `A = λ − 2, B = 1, C = 1, D = λ`.
pub fn example_r1() -> Realization {
    let a = MatrixPolynomial::scalar_real(&[-2.0, 1.0]).unwrap();
    let d = MatrixPolynomial::scalar_real(&[0.0, 1.0]).unwrap();
    Realization::new(a, linalg::scalar(ONE), linalg::scalar(ONE), d).unwrap()
}

/// R2: `A = λ² + 1, B = 1, C = 1, D = λ`.
pub fn example_r2() -> Realization {
    let a = MatrixPolynomial::scalar_real(&[1.0, 0.0, 1.0]).unwrap();
    let d = MatrixPolynomial::scalar_real(&[0.0, 1.0]).unwrap();
    Realization::new(a, linalg::scalar(ONE), linalg::scalar(ONE), d).unwrap()
}
