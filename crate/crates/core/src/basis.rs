//! Non-monomial polynomial bases and the maps between tilde pencils and
//! their monomial counterparts.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::spaces::{self, AnsatzPencil, Space};
use crate::system::{lambda_vector, BlockDims, Realization};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BasisKind {
    Monomial,
    Chebyshev,
    /// Newton basis `φⱼ = Π_{i<j} (λ − xᵢ)`; at least `d − 1` nodes are used.
    Newton { nodes: Vec<Complex64> },
    /// Explicit coefficient rows against `[λ^{d−1}, …, 1]`.
    Custom { rows: Vec<Vec<Complex64>> },
}

impl FromStr for BasisKind {
    type Err = Error;

    /// `monomial`, `chebyshev` or `newton:<x0>,<x1>,…` with real nodes.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "monomial" => return Ok(BasisKind::Monomial),
            "chebyshev" | "chebyshev_t" => return Ok(BasisKind::Chebyshev),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("newton:") {
            let nodes = rest
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map(|x| Complex64::new(x, 0.0))
                        .map_err(|_| Error::SingularBasis(format!("bad Newton node '{t}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(BasisKind::Newton { nodes });
        }
        if s == "newton" {
            return Ok(BasisKind::Newton { nodes: Vec::new() });
        }
        Err(Error::SingularBasis(format!("unknown basis '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub d: usize,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, d: usize) -> Self {
        Self { kind, d }
    }

    pub fn monomial(d: usize) -> Self {
        Self::new(BasisKind::Monomial, d)
    }

    pub fn chebyshev(d: usize) -> Self {
        Self::new(BasisKind::Chebyshev, d)
    }

    pub fn newton(nodes: Vec<Complex64>, d: usize) -> Self {
        Self::new(BasisKind::Newton { nodes }, d)
    }
}

/// Ascending coefficients of `φ₀, …, φ_{d−1}`.
fn ascending_rows(spec: &BasisSpec) -> Result<Vec<Vec<Complex64>>> {
    let d = spec.d;
    if d == 0 {
        return Err(Error::dim("basis needs d >= 1"));
    }
    let mut rows = vec![vec![ZERO; d]; d];
    match &spec.kind {
        BasisKind::Monomial => {
            for (j, row) in rows.iter_mut().enumerate() {
                row[j] = ONE;
            }
        }
        BasisKind::Chebyshev => {
            rows[0][0] = ONE;
            if d > 1 {
                rows[1][1] = ONE;
            }
            for j in 2..d {
                for p in 0..d {
                    let shifted = if p > 0 { rows[j - 1][p - 1] * 2.0 } else { ZERO };
                    rows[j][p] = shifted - rows[j - 2][p];
                }
            }
        }
        BasisKind::Newton { nodes } => {
            if nodes.len() + 1 < d {
                return Err(Error::SingularBasis(format!(
                    "Newton basis of size {d} needs {} nodes, got {}",
                    d - 1,
                    nodes.len()
                )));
            }
            let used = &nodes[..d - 1];
            for i in 0..used.len() {
                for j in 0..i {
                    if (used[i] - used[j]).norm() <= 1e-12 * used[i].norm().max(1.0) {
                        return Err(Error::SingularBasis(format!("duplicate Newton node {}", used[i])));
                    }
                }
            }
            rows[0][0] = ONE;
            for j in 1..d {
                let x = used[j - 1];
                for p in 0..d {
                    let shifted = if p > 0 { rows[j - 1][p - 1] } else { ZERO };
                    rows[j][p] = shifted - x * rows[j - 1][p];
                }
            }
        }
        BasisKind::Custom { rows: given } => {
            if given.len() != d || given.iter().any(|r| r.len() != d) {
                return Err(Error::dim(format!("custom basis needs {d} rows of length {d}")));
            }
            // given rows are against descending powers
            for (j, row) in given.iter().enumerate() {
                for (col, &c) in row.iter().enumerate() {
                    rows[j][d - 1 - col] = c;
                }
            }
        }
    }
    Ok(rows)
}

/// `Φ` with `Φ · [λ^{d−1}, …, λ, 1]ᵀ = [φ₀(λ), …, φ_{d−1}(λ)]ᵀ`.
pub fn phi_matrix(spec: &BasisSpec) -> Result<CMat> {
    let rows = ascending_rows(spec)?;
    let d = spec.d;
    let phi = CMat::from_fn(d, d, |j, col| rows[j][d - 1 - col]);
    let (smin, smax) = linalg::extreme_singular_values(&phi)?;
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::SingularBasis(format!("σ_min/σ_max = {:.3e}", smin / smax.max(1.0))));
    }
    Ok(phi)
}

/// `[φ₀(λ), …, φ_{d−1}(λ)]` evaluated through `Φ`.
pub fn lambda_phi(spec: &BasisSpec, lambda: Complex64) -> Result<Vec<Complex64>> {
    Ok(linalg::mat_vec(&phi_matrix(spec)?, &lambda_vector(spec.d, lambda)))
}

fn block_diag_kron(pa: &CMat, n: usize, pd: &CMat, r: usize) -> CMat {
    let ta = linalg::kron(pa, &linalg::identity(n));
    let td = linalg::kron(pd, &linalg::identity(r));
    let mut out = linalg::zeros(ta.nrows() + td.nrows(), ta.ncols() + td.ncols());
    linalg::set_block(&mut out, 0, 0, &ta);
    linalg::set_block(&mut out, ta.nrows(), ta.ncols(), &td);
    out
}

fn check_specs(spec_a: &BasisSpec, spec_d: &BasisSpec, dims: &BlockDims) -> Result<()> {
    if spec_a.d != dims.m || spec_d.d != dims.k {
        return Err(Error::dim(format!(
            "basis sizes ({}, {}) do not match degrees ({}, {})",
            spec_a.d, spec_d.d, dims.m, dims.k
        )));
    }
    Ok(())
}

fn inverse(a: &CMat) -> CMat {
    linalg::solve(a, &linalg::identity(a.nrows()))
}

/// `T̃ = T · blockdiag(Φ⁻¹ ⊗ I_n, Ψ⁻¹ ⊗ I_r)` for the `L1` member
/// `T = build_pencil_l1(real, v, w, W, W1)`.
#[allow(clippy::too_many_arguments)]
pub fn build_l1_tilde(
    real: &Realization,
    spec_a: &BasisSpec,
    spec_d: &BasisSpec,
    v: &[Complex64],
    w: &[Complex64],
    w_a: &CMat,
    w_d: &CMat,
) -> Result<AnsatzPencil> {
    let dims = real.dims();
    check_specs(spec_a, spec_d, &dims)?;
    let t = spaces::build_pencil_l1(real, v, w, w_a, w_d, Space::L1G)?;
    let right = block_diag_kron(&inverse(&phi_matrix(spec_a)?), dims.n, &inverse(&phi_matrix(spec_d)?), dims.r);
    Ok(AnsatzPencil { x: linalg::mul(&t.x, &right), y: linalg::mul(&t.y, &right), ..t })
}

/// `T̃ · blockdiag(Φ ⊗ I_n, Ψ ⊗ I_r)`, back to the monomial `L1` space.
pub fn tilde_to_monomial(
    x: &CMat,
    y: &CMat,
    spec_a: &BasisSpec,
    spec_d: &BasisSpec,
    dims: &BlockDims,
) -> Result<(CMat, CMat)> {
    check_specs(spec_a, spec_d, dims)?;
    if x.nrows() != dims.size() || y.nrows() != dims.size() {
        return Err(Error::dim(format!("pencil side must be {}", dims.size())));
    }
    let right = block_diag_kron(&phi_matrix(spec_a)?, dims.n, &phi_matrix(spec_d)?, dims.r);
    Ok((linalg::mul(x, &right), linalg::mul(y, &right)))
}

/// Left analogue: `T̃ = (Φ⁻ᵀ ⊗ I) · T` for an `L2` member `T`, built as the
/// transpose of the `L1` tilde pencil of the transposed realization.
#[allow(clippy::too_many_arguments)]
pub fn build_l2_tilde(
    real: &Realization,
    spec_a: &BasisSpec,
    spec_d: &BasisSpec,
    s: &[Complex64],
    z: &[Complex64],
    w_a: &CMat,
    w_d: &CMat,
) -> Result<AnsatzPencil> {
    let p = build_l1_tilde(&real.transpose(), spec_a, spec_d, s, z, w_a, w_d)?;
    Ok(AnsatzPencil {
        x: linalg::transpose(&p.x),
        y: linalg::transpose(&p.y),
        space: Space::L2G,
        ..p
    })
}

/// `(Φᵀ ⊗ I) · T̃`, back to the monomial `L2` space.
pub fn tilde_to_monomial_l2(
    x: &CMat,
    y: &CMat,
    spec_a: &BasisSpec,
    spec_d: &BasisSpec,
    dims: &BlockDims,
) -> Result<(CMat, CMat)> {
    let (xt, yt) = tilde_to_monomial(&linalg::transpose(x), &linalg::transpose(y), spec_a, spec_d, dims)?;
    Ok((linalg::transpose(&xt), linalg::transpose(&yt)))
}

/// `‖T̃(λ)·[Λ_φ ⊗ A⁻¹B; Λ_ψ ⊗ I_r] − [0; w ⊗ G]‖_max` over the samples.
pub fn tilde_residual(
    p: &AnsatzPencil,
    real: &Realization,
    spec_a: &BasisSpec,
    spec_d: &BasisSpec,
    samples: &[Complex64],
) -> Result<f64> {
    let dims = real.dims();
    check_specs(spec_a, spec_d, &dims)?;
    let mut worst = 0.0f64;
    for &z in samples {
        let top = linalg::kron_col(&lambda_phi(spec_a, z)?, &real.resolvent_b(z)?);
        let bottom = linalg::kron_col(&lambda_phi(spec_d, z)?, &linalg::identity(dims.r));
        let lhs = linalg::mul(&p.eval(z), &linalg::vcat(&[&top, &bottom]));
        let rhs = linalg::vcat(&[
            &linalg::zeros(dims.top(), dims.r),
            &linalg::kron_col(&p.w, &real.transfer(z)?),
        ]);
        worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
    }
    Ok(worst)
}
