//! Determinant oracle, pencil eigensolver, Z-rank certificates, linearization
//! checks and eigenvector lifting/recovery.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::random;
use crate::spaces::{self, AnsatzPencil, Space};
use crate::system::{lambda_vector, BlockDims, MatrixPolynomial, Realization};

/// Relative size below which trailing determinant coefficients are dropped.
pub const DET_TRIM_TOL: f64 = 1e-11;
/// `|β| ≤ INF_TOL · ‖(α, β)‖` marks an infinite eigenvalue.
pub const INF_TOL: f64 = 1e-10;
pub const EIG_TOL: f64 = 1e-6;
pub const RANK_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-10;

fn row_degrees(p: &MatrixPolynomial) -> (usize, usize) {
    let s = p.rows();
    let deg_of = |entry: &dyn Fn(&CMat) -> bool| {
        (0..=p.degree()).rev().find(|&j| entry(&p.coeffs()[j])).unwrap_or(0)
    };
    let rows: usize = (0..s)
        .map(|i| deg_of(&|m: &CMat| (0..s).any(|j| m[(i, j)] != ZERO)))
        .sum();
    let cols: usize = (0..s)
        .map(|j| deg_of(&|m: &CMat| (0..s).any(|i| m[(i, j)] != ZERO)))
        .sum();
    (rows, cols)
}

fn interpolate_det(p: &MatrixPolynomial, count: usize, rho: f64) -> Result<(Vec<Complex64>, f64)> {
    let s = p.rows();
    let mut vals = Vec::with_capacity(count);
    let mut bound = 0.0f64;
    for j in 0..count {
        let z = Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / count as f64);
        let pz = p.eval(z);
        let d = linalg::det(&pz);
        if !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::Interpolation(format!("det P(λ) not finite at λ = {z}")));
        }
        // Hadamard bound on |det P(z)| for deciding "identically zero".
        let had: f64 = (0..s)
            .map(|i| (0..s).map(|k| pz[(i, k)].norm_sqr()).sum::<f64>().sqrt())
            .product();
        bound = bound.max(had);
        vals.push(d);
    }
    let coeffs = (0..count)
        .map(|l| {
            let sum: Complex64 = vals
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    f * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * l) as f64 / count as f64)
                })
                .sum();
            sum / (count as f64 * rho.powi(l as i32))
        })
        .collect();
    Ok((coeffs, bound))
}

/// Coefficients (ascending) of `det P(λ)`, interpolated at scaled roots of
/// unity. The node count is one more than the structural degree bound
/// `min(Σ row degrees, Σ column degrees)`; tiny trailing coefficients are
/// trimmed. Returns `[0]` when the determinant vanishes identically.
pub fn det_scalar_poly(p: &MatrixPolynomial) -> Result<Vec<Complex64>> {
    if p.rows() != p.cols() {
        return Err(Error::dim("determinant needs a square polynomial"));
    }
    let (rd, cd) = row_degrees(p);
    let count = rd.min(cd) + 1;
    let mut rng = random::rng(0x5eed_de7);
    let mut last_err = None;
    for _ in 0..8 {
        let rho: f64 = rng.random_range(0.5..2.0);
        match interpolate_det(p, count, rho) {
            Ok((mut coeffs, bound)) => {
                let big = coeffs
                    .iter()
                    .enumerate()
                    .map(|(l, c)| c.norm() * rho.powi(l as i32))
                    .fold(0.0, f64::max);
                if big <= 1e-12 * bound.max(f64::MIN_POSITIVE) {
                    return Ok(vec![ZERO]);
                }
                let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
                while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= DET_TRIM_TOL * cmax {
                    coeffs.pop();
                }
                return Ok(coeffs);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Diagonal similarity balancing (powers of two) in place.
fn balance(a: &mut CMat) {
    let n = a.nrows();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Roots closer than this (relative) are treated as one multiple root; a
/// double root in floating point splits by about `√ε`.
const CLUSTER_TOL: f64 = 1e-6;

/// Roots of `Σ cᵢ λⁱ` from a balanced companion matrix, Newton-polished.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(expand(&clustered_roots(coeffs)?))
}

fn expand(roots: &[(Complex64, usize)]) -> Vec<Complex64> {
    roots.iter().flat_map(|&(z, k)| std::iter::repeat_n(z, k)).collect()
}

/// Distinct roots with multiplicities. Companion eigenvalues within
/// `CLUSTER_TOL` of each other are merged into their mean and polished with
/// the multiplicity-aware Newton step `k p / p′`.
fn clustered_roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if cmax == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = coeffs.to_vec();
    while c.last().unwrap().norm() <= 1e-14 * cmax {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = c[d];
    let mut comp = linalg::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = -c[d - 1 - j] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    balance(&mut comp);
    let eig = comp
        .eigenvalues()
        .map_err(|e| Error::SolverFailure(format!("companion eigenvalues: {e:?}")))?;
    Ok(cluster(&eig)
        .into_iter()
        .map(|(z, k)| (polish_scalar(&c, z, k), k))
        .collect())
}

/// Single-linkage clusters of `zs` at relative distance `CLUSTER_TOL`.
fn cluster(zs: &[Complex64]) -> Vec<(Complex64, usize)> {
    let n = zs.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (zs[i] - zs[j]).norm() <= CLUSTER_TOL * zs[i].norm().max(1.0) {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for root in 0..n {
        let members: Vec<Complex64> = (0..n).filter(|&i| label[i] == root).map(|i| zs[i]).collect();
        if !members.is_empty() {
            let k = members.len();
            out.push((members.iter().sum::<Complex64>() / k as f64, k));
        }
    }
    out
}

fn polish_scalar(c: &[Complex64], mut z: Complex64, k: usize) -> Complex64 {
    let start = z;
    let (mut pz, _) = horner(c, z);
    for _ in 0..6 {
        let (_, dp) = horner(c, z);
        if dp == ZERO {
            break;
        }
        let t = z - pz / dp * k as f64;
        let (pt, _) = horner(c, t);
        if pt.norm() >= pz.norm() || (t - start).norm() > 1e-4 * start.norm().max(1.0) {
            break;
        }
        z = t;
        pz = pt;
    }
    z
}

fn derivative(p: &MatrixPolynomial) -> Option<MatrixPolynomial> {
    if p.degree() == 0 {
        return None;
    }
    let coeffs = (1..=p.degree())
        .map(|j| linalg::scaled(&p.coeffs()[j], Complex64::new(j as f64, 0.0)))
        .collect();
    Some(MatrixPolynomial::new(coeffs).unwrap())
}

/// Newton on `det P` for a root of multiplicity `k`:
/// `δ = k / tr(P(λ)⁻¹ P′(λ))`, kept only while `|det P|` decreases and the
/// root stays in a small neighbourhood.
fn polish_det(p: &MatrixPolynomial, dp: &MatrixPolynomial, mut z: Complex64, k: usize) -> Complex64 {
    let start = z;
    let mut dz = linalg::det(&p.eval(z)).norm();
    for _ in 0..6 {
        if dz == 0.0 {
            break;
        }
        let pz = p.eval(z);
        let q = linalg::solve(&pz, &dp.eval(z));
        let tr: Complex64 = (0..q.nrows()).map(|i| q[(i, i)]).sum();
        if tr == ZERO || !tr.re.is_finite() || !tr.im.is_finite() {
            break;
        }
        let t = z - k as f64 / tr;
        let dt = linalg::det(&p.eval(t)).norm();
        if !(dt < dz) || (t - start).norm() > 1e-4 * start.norm().max(1.0) {
            break;
        }
        z = t;
        dz = dt;
    }
    z
}

/// Finite zeros of `det S(λ)` for the system matrix of `real`.
pub fn system_zeros(real: &Realization) -> Result<Vec<Complex64>> {
    polynomial_zeros(&real.system_matrix())
}

/// Roots of `det P(λ)` from the interpolation oracle, polished on `det P`.
pub fn polynomial_zeros(p: &MatrixPolynomial) -> Result<Vec<Complex64>> {
    let coeffs = det_scalar_poly(p)?;
    if coeffs.len() == 1 && coeffs[0] == ZERO {
        return Err(Error::SingularSystem);
    }
    let roots = clustered_roots(&coeffs)?;
    Ok(match derivative(p) {
        Some(dp) => expand(&roots.into_iter().map(|(z, k)| (polish_det(p, &dp, z, k), k)).collect::<Vec<_>>()),
        None => expand(&roots),
    })
}

/// Finite spectrum of `λX + Y` with unit-norm eigenvectors.
#[derive(Clone, Debug)]
pub struct PencilSolution {
    pub eigenvalues: Vec<Complex64>,
    pub right: Vec<Vec<Complex64>>,
    pub left: Vec<Vec<Complex64>>,
    pub infinite: usize,
    /// Pairs with `α ≈ β ≈ 0`, the signature of a singular pencil.
    pub indeterminate: usize,
}

/// Solves `(λX + Y) u = 0` through the generalized Schur form of `(−Y, X)`.
pub fn solve_pencil(x: &CMat, y: &CMat) -> Result<PencilSolution> {
    let s = x.nrows();
    if s == 0 || x.ncols() != s || y.nrows() != s || y.ncols() != s {
        return Err(Error::dim("pencil coefficients must be nonempty and square of equal size"));
    }
    let nx = linalg::fro(x);
    let ny = linalg::fro(y);
    if nx == 0.0 {
        return Ok(PencilSolution {
            eigenvalues: Vec::new(),
            right: Vec::new(),
            left: Vec::new(),
            infinite: if ny > 0.0 { s } else { 0 },
            indeterminate: if ny > 0.0 { 0 } else { s },
        });
    }
    let ys = if ny > 0.0 { ny } else { 1.0 };
    let a = linalg::scaled(y, Complex64::new(-1.0 / ys, 0.0));
    let b = linalg::scaled(x, Complex64::new(1.0 / nx, 0.0));
    let ge = a
        .generalized_eigen(&b)
        .map_err(|e| Error::SolverFailure(format!("{e:?}")))?;
    let alpha = ge.S_a().column_vector().to_owned();
    let beta = ge.S_b().column_vector().to_owned();
    let mut out = PencilSolution {
        eigenvalues: Vec::new(),
        right: Vec::new(),
        left: Vec::new(),
        infinite: 0,
        indeterminate: 0,
    };
    for i in 0..s {
        let (al, be) = (alpha[i], beta[i]);
        let mag = al.norm().hypot(be.norm());
        if mag <= INF_TOL {
            out.indeterminate += 1;
        } else if be.norm() <= INF_TOL * mag {
            out.infinite += 1;
        } else {
            let lambda = al / be * (ys / nx);
            if !lambda.re.is_finite() || !lambda.im.is_finite() {
                out.infinite += 1;
                continue;
            }
            let (r, l, _) = linalg::null_vectors(&linalg::add(&linalg::scaled(x, lambda), y))?;
            out.eigenvalues.push(lambda);
            out.right.push(r);
            out.left.push(l);
        }
    }
    Ok(out)
}

/// Z-rank certificate of an `L1`/`L2` member.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZRankCertificate {
    pub rank_l: usize,
    pub full_l: bool,
    pub rank_k: usize,
    pub full_k: bool,
    #[serde(skip)]
    pub transform_m: Option<CMat>,
    #[serde(skip)]
    pub transform_n: Option<CMat>,
}

/// Rank of the `Z` block read from `(M ⊗ I_b) · Y_part`, rows `b..`,
/// columns `..(d−1)b`.
fn z_block_rank(x_part: &CMat, y_part: &CMat, t: &CMat, b: usize, tol: f64) -> Result<usize> {
    let d = t.nrows();
    if d == 1 {
        return Ok(0);
    }
    let lifted = linalg::mul(&linalg::kron(t, &linalg::identity(b)), y_part);
    let z = linalg::block(&lifted, b, 0, (d - 1) * b, (d - 1) * b);
    let scale = linalg::max_abs(x_part).max(linalg::max_abs(y_part)).max(1.0);
    linalg::rank(&z, tol * scale)
}

/// Z-rank with caller-supplied transforms `M v = e₁`, `N w = e₁`.
pub fn z_rank_with(
    p: &AnsatzPencil,
    m_t: &CMat,
    n_t: &CMat,
    tol: Option<f64>,
) -> Result<ZRankCertificate> {
    let tol = tol.unwrap_or(RANK_TOL);
    let dims = p.dims;
    let (x, y) = right_frame(p);
    let (mn, kr) = (dims.top(), dims.bottom());
    let rank_l = z_block_rank(
        &linalg::block(&x, 0, 0, mn, mn),
        &linalg::block(&y, 0, 0, mn, mn),
        m_t,
        dims.n,
        tol,
    )?;
    let rank_k = z_block_rank(
        &linalg::block(&x, mn, mn, kr, kr),
        &linalg::block(&y, mn, mn, kr, kr),
        n_t,
        dims.r,
        tol,
    )?;
    Ok(ZRankCertificate {
        rank_l,
        full_l: rank_l == (dims.m - 1) * dims.n,
        rank_k,
        full_k: rank_k == (dims.k - 1) * dims.r,
        transform_m: Some(m_t.clone()),
        transform_n: Some(n_t.clone()),
    })
}

/// `L2` members are certified through their transpose.
fn right_frame(p: &AnsatzPencil) -> (CMat, CMat) {
    if p.space == Space::L2G {
        (linalg::transpose(&p.x), linalg::transpose(&p.y))
    } else {
        (p.x.clone(), p.y.clone())
    }
}

/// Z-rank certificate with Householder transforms built from the fitted
/// ansatz vectors.
pub fn z_rank(p: &AnsatzPencil, real: &Realization, tol: Option<f64>) -> Result<ZRankCertificate> {
    let fit = spaces::membership(&p.x, &p.y, real, p.space, None)?;
    let m_t = linalg::householder_to_e1(&fit.v).ok_or(Error::ZeroAnsatz("v"))?;
    let n_t = linalg::householder_to_e1(&fit.w).ok_or(Error::ZeroAnsatz("w"))?;
    z_rank_with(p, &m_t, &n_t, tol)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tol_membership: f64,
    pub tol_residual: f64,
    pub tol_eig: f64,
    pub tol_rank: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol_membership: spaces::MEMBERSHIP_TOL,
            tol_residual: RESIDUAL_TOL,
            tol_eig: EIG_TOL,
            tol_rank: RANK_TOL,
            samples: 8,
            seed: 0,
        }
    }
}

impl VerifyOptions {
    /// Every tolerance halved.
    pub fn strict(self) -> Self {
        Self {
            tol_membership: self.tol_membership / 2.0,
            tol_residual: self.tol_residual / 2.0,
            tol_eig: self.tol_eig / 2.0,
            tol_rank: self.tol_rank / 2.0,
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Match {
    pub eig: usize,
    pub root: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub space: Space,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub membership_residual: f64,
    pub ansatz_residual: f64,
    pub residual_ok: bool,
    pub z_rank: Option<ZRankCertificate>,
    pub pencil_eigs: Vec<Complex64>,
    pub infinite_eigs: usize,
    pub oracle_roots: Vec<Complex64>,
    pub matching: Vec<Match>,
    pub max_eig_error: f64,
    pub eig_residuals: Vec<f64>,
    pub spectral_ok: bool,
    pub verdict: Verdict,
    pub reason: String,
}

/// Distance used for matching: `|a − b| / max(1, |b|)`.
pub fn eig_distance(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Greedy nearest-neighbour matching of `eigs` against `roots`, processing
/// `eigs` by increasing magnitude. Not optimal, but clusters of nearly equal
/// values end up matched within the cluster.
pub fn match_multisets(eigs: &[Complex64], roots: &[Complex64]) -> (Vec<Match>, f64) {
    let mut order: Vec<usize> = (0..eigs.len()).collect();
    order.sort_by(|&i, &j| eigs[i].norm().total_cmp(&eigs[j].norm()));
    let mut used = vec![false; roots.len()];
    let mut out = Vec::with_capacity(eigs.len());
    let mut worst = 0.0f64;
    for i in order {
        let best = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| eig_distance(eigs[i], roots[a]).total_cmp(&eig_distance(eigs[i], roots[b])));
        if let Some(j) = best {
            used[j] = true;
            let d = eig_distance(eigs[i], roots[j]);
            worst = worst.max(d);
            out.push(Match { eig: i, root: j, distance: d });
        }
    }
    (out, worst)
}

fn pencil_is_singular(p: &AnsatzPencil, rng: &mut impl Rng) -> Result<bool> {
    for _ in 0..3 {
        let z = Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU));
        let (smin, smax) = linalg::extreme_singular_values(&p.eval(z))?;
        if smin > 1e-11 * smax.max(f64::MIN_POSITIVE) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-sample ansatz residual relative to the data scale.
fn scaled_residual(p: &AnsatzPencil, real: &Realization, samples: &[Complex64]) -> Result<f64> {
    let deg = real.dims().m.max(real.dims().k) as i32;
    let base = (1.0 + real.scale()) * (1.0 + linalg::max_abs(&p.x).max(linalg::max_abs(&p.y)));
    let mut worst = 0.0f64;
    for &z in samples {
        let res = spaces::residual_ansatz(p, real, &[z])?;
        let g = linalg::max_abs(&real.resolvent_b(z)?).max(linalg::max_abs(&real.c_resolvent(z)?));
        worst = worst.max(res / (base * (1.0 + g) * z.norm().max(1.0).powi(deg)));
    }
    Ok(worst)
}

/// Membership, ansatz residual, Z-rank certificate and spectral equivalence
/// with the zeros of `S(λ)`. The verdict needs the residual and the spectral
/// checks; the Z-rank result is reported as a flag.
pub fn verify_linearization(
    p: &AnsatzPencil,
    real: &Realization,
    opts: &VerifyOptions,
) -> Result<SpectralReport> {
    let mut report = SpectralReport {
        space: p.space,
        v: Vec::new(),
        w: Vec::new(),
        membership_residual: f64::NAN,
        ansatz_residual: f64::NAN,
        residual_ok: false,
        z_rank: None,
        pencil_eigs: Vec::new(),
        infinite_eigs: 0,
        oracle_roots: Vec::new(),
        matching: Vec::new(),
        max_eig_error: f64::INFINITY,
        eig_residuals: Vec::new(),
        spectral_ok: false,
        verdict: Verdict::Fail,
        reason: String::new(),
    };
    let mut reasons: Vec<String> = Vec::new();

    let fit = match spaces::membership(&p.x, &p.y, real, p.space, Some(opts.tol_membership)) {
        Ok(f) => f,
        Err(e @ (Error::NotAMember { .. } | Error::DegenerateFit(_))) => {
            report.reason = e.to_string();
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.membership_residual = fit.residual;
    report.v = fit.v.clone();
    report.w = fit.w.clone();
    if linalg::vec_max_abs(&fit.v) == 0.0 && linalg::vec_max_abs(&fit.w) == 0.0 {
        report.reason = "ansatz vectors are zero".into();
        return Ok(report);
    }

    let mut rng = random::rng(opts.seed);
    let samples = random::sample_points(&mut rng, real, opts.samples);
    report.ansatz_residual = scaled_residual(p, real, &samples)?;
    report.residual_ok = report.ansatz_residual <= opts.tol_residual;
    if !report.residual_ok {
        reasons.push(format!("ansatz residual {:.3e} above {:.1e}", report.ansatz_residual, opts.tol_residual));
    }

    report.z_rank = match (
        linalg::householder_to_e1(&fit.v),
        linalg::householder_to_e1(&fit.w),
    ) {
        (Some(mt), Some(nt)) => Some(z_rank_with(p, &mt, &nt, Some(opts.tol_rank))?),
        _ => None,
    };

    let singular = pencil_is_singular(p, &mut rng)?;
    if singular {
        reasons.push("pencil is singular".into());
    }
    let sol = solve_pencil(&p.x, &p.y)?;
    report.infinite_eigs = sol.infinite;
    let (nx, ny) = (linalg::fro(&p.x), linalg::fro(&p.y));
    report.eig_residuals = sol
        .eigenvalues
        .iter()
        .zip(&sol.right)
        .map(|(&l, u)| {
            linalg::vec_norm(&linalg::mat_vec(&p.eval(l), u)) / (l.norm() * nx + ny).max(f64::MIN_POSITIVE)
        })
        .collect();
    report.pencil_eigs = sol.eigenvalues;

    match system_zeros(real) {
        Ok(z) => report.oracle_roots = z,
        Err(Error::SingularSystem) => reasons.push("det S(λ) vanishes identically".into()),
        Err(e) => return Err(e),
    }
    let (ne, nz) = (report.pencil_eigs.len(), report.oracle_roots.len());
    if ne != nz {
        reasons.push(format!("eigenvalue count mismatch: pencil {ne}, system zeros {nz}"));
    }
    let (matching, worst) = match_multisets(&report.pencil_eigs, &report.oracle_roots);
    report.matching = matching;
    report.max_eig_error = if ne == 0 && nz == 0 { 0.0 } else { worst };
    if ne == nz && worst > opts.tol_eig {
        reasons.push(format!("eigenvalue mismatch {worst:.3e} above {:.1e}", opts.tol_eig));
    }
    report.spectral_ok = !singular && ne == nz && report.max_eig_error <= opts.tol_eig;
    if report.residual_ok && report.spectral_ok {
        report.verdict = Verdict::Pass;
        report.reason = "linearization verified".into();
    } else {
        report.reason = reasons.join("; ");
    }
    Ok(report)
}

/// `[Λ_{m−1}(λ₀) ⊗ A(λ₀)⁻¹Bx; Λ_{k−1}(λ₀) ⊗ x]`.
pub fn lift_right(real: &Realization, x: &[Complex64], lambda: Complex64) -> Result<Vec<Complex64>> {
    let dims = real.dims();
    check_len(x.len(), dims.r)?;
    let ab = linalg::mat_vec(&real.resolvent_b(lambda)?, x);
    Ok(stack(&dims, lambda, &ab, x, false))
}

/// `[Λ̄_{m−1}(λ₀) ⊗ (−C A(λ₀)⁻¹)* y; Λ̄_{k−1}(λ₀) ⊗ y]`.
pub fn lift_left(real: &Realization, y: &[Complex64], lambda: Complex64) -> Result<Vec<Complex64>> {
    let dims = real.dims();
    check_len(y.len(), dims.r)?;
    let top = linalg::mat_vec(&linalg::adjoint(&real.c_resolvent(lambda)?), y);
    Ok(stack(&dims, lambda, &top, y, true))
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::dim(format!("vector has length {got}, expected {want}")));
    }
    Ok(())
}

fn stack(dims: &BlockDims, lambda: Complex64, top: &[Complex64], bottom: &[Complex64], conj: bool) -> Vec<Complex64> {
    let lam = |d| {
        let l = lambda_vector(d, lambda);
        if conj { l.iter().map(|z| z.conj()).collect() } else { l }
    };
    let mut out = Vec::with_capacity(dims.size());
    for c in lam(dims.m) {
        out.extend(top.iter().map(|t| c * t));
    }
    for c in lam(dims.k) {
        out.extend(bottom.iter().map(|t| c * t));
    }
    out
}

/// Vector recovered from a pencil eigenvector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Recovered {
    pub x: Vec<Complex64>,
    /// `‖u/s − lift(x)‖ / ‖u/s‖` for the best scale `s`; `None` at a pole.
    pub structural_residual: Option<f64>,
    /// The trailing block was negligible and another bottom block was used.
    pub fallback: bool,
}

fn recover(
    u: &[Complex64],
    dims: &BlockDims,
    lambda: Complex64,
    lift: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
) -> Result<Recovered> {
    check_len(u.len(), dims.size())?;
    let (mn, r) = (dims.top(), dims.r);
    let nu = linalg::vec_norm(u);
    if nu == 0.0 {
        return Err(Error::DegenerateVector("zero vector".into()));
    }
    let blocks: Vec<&[Complex64]> = (0..dims.k).map(|j| &u[mn + j * r..mn + (j + 1) * r]).collect();
    let tail = blocks[dims.k - 1];
    let (x_raw, fallback) = if linalg::vec_norm(tail) > 1e-8 * nu {
        (tail.to_vec(), false)
    } else {
        let best = blocks
            .iter()
            .max_by(|a, b| linalg::vec_norm(a).total_cmp(&linalg::vec_norm(b)))
            .unwrap();
        if linalg::vec_norm(best) <= 1e-8 * nu {
            return Err(Error::DegenerateVector(format!(
                "bottom partition is negligible at λ = {lambda}"
            )));
        }
        (best.to_vec(), true)
    };
    let nx = linalg::vec_norm(&x_raw);
    let x: Vec<Complex64> = x_raw.iter().map(|z| z / nx).collect();
    let structural_residual = lift(&x).ok().map(|l| {
        let ll: f64 = l.iter().map(|z| z.norm_sqr()).sum();
        let s: Complex64 = l.iter().zip(u).map(|(a, b)| a.conj() * b).sum::<Complex64>() / ll;
        let res: f64 = l.iter().zip(u).map(|(a, b)| (b - s * a).norm_sqr()).sum::<f64>().sqrt();
        res / nu
    });
    Ok(Recovered { x, structural_residual, fallback })
}

/// Right eigenvector of `G` from a right eigenvector of an `L1` member.
pub fn recover_right(u: &[Complex64], dims: &BlockDims, real: &Realization, lambda: Complex64) -> Result<Recovered> {
    recover(u, dims, lambda, |x| lift_right(real, x, lambda))
}

/// Left eigenvector of `G` from a left eigenvector of an `L2` member.
pub fn recover_left(u: &[Complex64], dims: &BlockDims, real: &Realization, lambda: Complex64) -> Result<Recovered> {
    recover(u, dims, lambda, |y| lift_left(real, y, lambda))
}

/// `f(x) = [A(λ₀)⁻¹Bx; x]`.
pub fn f_map(real: &Realization, x: &[Complex64], lambda: Complex64) -> Result<Vec<Complex64>> {
    check_len(x.len(), real.dims().r)?;
    let mut out = linalg::mat_vec(&real.resolvent_b(lambda)?, x);
    out.extend_from_slice(x);
    Ok(out)
}

/// `g(y) = [(−C A(λ₀)⁻¹)* y; y]`.
pub fn g_map(real: &Realization, y: &[Complex64], lambda: Complex64) -> Result<Vec<Complex64>> {
    check_len(y.len(), real.dims().r)?;
    let mut out = linalg::mat_vec(&linalg::adjoint(&real.c_resolvent(lambda)?), y);
    out.extend_from_slice(y);
    Ok(out)
}

/// `‖G(λ)x‖` for a unit vector `x`.
pub fn right_transfer_residual(real: &Realization, x: &[Complex64], lambda: Complex64) -> Result<f64> {
    Ok(linalg::vec_norm(&linalg::mat_vec(&real.transfer(lambda)?, x)))
}

/// `‖y* G(λ)‖` for a unit vector `y`.
pub fn left_transfer_residual(real: &Realization, y: &[Complex64], lambda: Complex64) -> Result<f64> {
    let g = real.transfer(lambda)?;
    Ok(linalg::vec_norm(&linalg::mat_vec(&linalg::adjoint(&g), y)))
}
