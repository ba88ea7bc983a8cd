//! Python bindings. Matrices cross the boundary as `list[list[complex]]`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rosenlin::basis::{self, BasisKind, BasisSpec};
use rosenlin::linalg::CMat;
use rosenlin::spaces;
use rosenlin::spectra::{self, VerifyOptions};
use rosenlin::system::{BlockDims, MatrixPolynomial};
use rosenlin::{Error, Space};

type PyMatrix = Vec<Vec<Complex64>>;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_mat(rows: &PyMatrix) -> PyResult<CMat> {
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(PyValueError::new_err("matrix rows have different lengths"));
    }
    Ok(CMat::from_fn(rows.len(), nc, |i, j| rows[i][j]))
}

fn from_mat(a: &CMat) -> PyMatrix {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect()).collect()
}

fn parse_space(s: &str) -> PyResult<Space> {
    s.parse().map_err(err)
}

/// A realization `(A(λ), B, C, D(λ))`; `A` and `D` are coefficient lists in
/// ascending degree.
#[pyclass(name = "Realization", module = "pyrosenlin", from_py_object)]
#[derive(Clone)]
pub struct PyRealization {
    inner: rosenlin::Realization,
}

#[pymethods]
impl PyRealization {
    #[new]
    #[pyo3(signature = (a, b, c, d))]
    fn new(a: Vec<PyMatrix>, b: PyMatrix, c: PyMatrix, d: Vec<PyMatrix>) -> PyResult<Self> {
        let poly = |ms: &[PyMatrix]| -> PyResult<MatrixPolynomial> {
            MatrixPolynomial::new(ms.iter().map(to_mat).collect::<PyResult<Vec<_>>>()?).map_err(err)
        };
        let inner = rosenlin::Realization::new(poly(&a)?, to_mat(&b)?, to_mat(&c)?, poly(&d)?).map_err(err)?;
        Ok(Self { inner })
    }

    /// `(m, n, k, r)`.
    fn dims(&self) -> (usize, usize, usize, usize) {
        let d = self.inner.dims();
        (d.m, d.n, d.k, d.r)
    }

    fn transfer(&self, z: Complex64) -> PyResult<PyMatrix> {
        Ok(from_mat(&self.inner.transfer(z).map_err(err)?))
    }

    fn system_matrix(&self, z: Complex64) -> PyMatrix {
        from_mat(&self.inner.system_matrix().eval(z))
    }

    fn system_zeros(&self) -> PyResult<Vec<Complex64>> {
        spectra::system_zeros(&self.inner).map_err(err)
    }

    fn transpose(&self) -> Self {
        Self { inner: self.inner.transpose() }
    }
}

/// A pencil `λX + Y` with its space tag and ansatz vectors.
#[pyclass(name = "Pencil", module = "pyrosenlin", from_py_object)]
#[derive(Clone)]
pub struct PyPencil {
    inner: spaces::AnsatzPencil,
}

#[pymethods]
impl PyPencil {
    #[getter(X)]
    fn x(&self) -> PyMatrix {
        from_mat(&self.inner.x)
    }

    #[getter(Y)]
    fn y(&self) -> PyMatrix {
        from_mat(&self.inner.y)
    }

    #[getter]
    fn space(&self) -> &'static str {
        self.inner.space.as_str()
    }

    #[getter]
    fn v(&self) -> Vec<Complex64> {
        self.inner.v.clone()
    }

    #[getter]
    fn w(&self) -> Vec<Complex64> {
        self.inner.w.clone()
    }

    fn dims(&self) -> (usize, usize, usize, usize) {
        let d = self.inner.dims;
        (d.m, d.n, d.k, d.r)
    }

    /// Finite eigenvalues of the pencil.
    fn eigenvalues(&self) -> PyResult<Vec<Complex64>> {
        Ok(spectra::solve_pencil(&self.inner.x, &self.inner.y).map_err(err)?.eigenvalues)
    }

    fn __repr__(&self) -> String {
        let d = self.inner.dims;
        format!("Pencil(space={}, dims=({}, {}, {}, {}))", self.inner.space, d.m, d.n, d.k, d.r)
    }
}

/// Outcome of `verify_linearization`.
#[pyclass(name = "Report", module = "pyrosenlin", get_all)]
pub struct PyReport {
    passed: bool,
    reason: String,
    max_eig_error: f64,
    pencil_eigs: Vec<Complex64>,
    oracle_roots: Vec<Complex64>,
    z_rank_full: Option<bool>,
    json: String,
}

#[pyfunction]
fn build_c1(real: &PyRealization) -> PyPencil {
    PyPencil { inner: spaces::build_c1(&real.inner) }
}

#[pyfunction]
fn build_c2(real: &PyRealization) -> PyPencil {
    PyPencil { inner: spaces::build_c2(&real.inner) }
}

#[pyfunction]
fn build_dl(real: &PyRealization) -> PyPencil {
    PyPencil { inner: spaces::build_dl(&real.inner) }
}

#[pyfunction]
fn build_symmetric(real: &PyRealization) -> PyResult<PyPencil> {
    Ok(PyPencil { inner: spaces::build_symmetric(&real.inner).map_err(err)? })
}

#[pyfunction]
fn build_hermitian(real: &PyRealization) -> PyResult<PyPencil> {
    Ok(PyPencil { inner: spaces::build_hermitian(&real.inner).map_err(err)? })
}

fn free_block(m: Option<PyMatrix>, rows: usize, cols: usize) -> PyResult<CMat> {
    match m {
        Some(m) if !m.is_empty() => to_mat(&m),
        _ => Ok(CMat::zeros(rows, cols)),
    }
}

/// `L1` member with right ansatz `(v, w)`; missing free blocks are zero.
#[pyfunction]
#[pyo3(signature = (real, v, w, big_w=None, big_w1=None, space="l1g"))]
fn build_pencil_l1(
    real: &PyRealization,
    v: Vec<Complex64>,
    w: Vec<Complex64>,
    big_w: Option<PyMatrix>,
    big_w1: Option<PyMatrix>,
    space: &str,
) -> PyResult<PyPencil> {
    let d = real.inner.dims();
    let wa = free_block(big_w, d.top(), (d.m - 1) * d.n)?;
    let wd = free_block(big_w1, d.bottom(), (d.k - 1) * d.r)?;
    let inner = spaces::build_pencil_l1(&real.inner, &v, &w, &wa, &wd, parse_space(space)?).map_err(err)?;
    Ok(PyPencil { inner })
}

/// `L2` member with left ansatz `(s, z)`.
#[pyfunction]
#[pyo3(signature = (real, s, z, big_w=None, big_w1=None))]
fn build_pencil_l2(
    real: &PyRealization,
    s: Vec<Complex64>,
    z: Vec<Complex64>,
    big_w: Option<PyMatrix>,
    big_w1: Option<PyMatrix>,
) -> PyResult<PyPencil> {
    let d = real.inner.dims();
    let wa = free_block(big_w, d.top(), (d.m - 1) * d.n)?;
    let wd = free_block(big_w1, d.bottom(), (d.k - 1) * d.r)?;
    let inner = spaces::build_pencil_l2(&real.inner, &s, &z, &wa, &wd).map_err(err)?;
    Ok(PyPencil { inner })
}

#[pyfunction]
#[pyo3(signature = (real, seed, space="l1g"))]
fn sample_space(real: &PyRealization, seed: u64, space: &str) -> PyResult<PyPencil> {
    Ok(PyPencil { inner: spaces::sample_space(&real.inner, seed, parse_space(space)?).map_err(err)? })
}

/// Fitted `(v, w, residual)`; raises when the pencil is not a member.
#[pyfunction]
#[pyo3(signature = (pencil, real, space=None, tol=None))]
fn membership(
    pencil: &PyPencil,
    real: &PyRealization,
    space: Option<&str>,
    tol: Option<f64>,
) -> PyResult<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let space = match space {
        Some(s) => parse_space(s)?,
        None => pencil.inner.space,
    };
    let fit = spaces::membership(&pencil.inner.x, &pencil.inner.y, &real.inner, space, tol).map_err(err)?;
    Ok((fit.v, fit.w, fit.residual))
}

#[pyfunction]
fn residual_ansatz(pencil: &PyPencil, real: &PyRealization, samples: Vec<Complex64>) -> PyResult<f64> {
    spaces::residual_ansatz(&pencil.inner, &real.inner, &samples).map_err(err)
}

#[pyfunction]
fn dim_space(m: usize, n: usize, k: usize, r: usize) -> PyResult<usize> {
    Ok(spaces::dim_space(&BlockDims::new(m, n, k, r).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (pencil, real, tol_eig=None, seed=0))]
fn verify_linearization(
    pencil: &PyPencil,
    real: &PyRealization,
    tol_eig: Option<f64>,
    seed: u64,
) -> PyResult<PyReport> {
    let mut opts = VerifyOptions { seed, ..Default::default() };
    if let Some(t) = tol_eig {
        opts.tol_eig = t;
    }
    let rep = spectra::verify_linearization(&pencil.inner, &real.inner, &opts).map_err(err)?;
    Ok(PyReport {
        passed: rep.verdict == spectra::Verdict::Pass,
        reason: rep.reason.clone(),
        max_eig_error: rep.max_eig_error,
        pencil_eigs: rep.pencil_eigs.clone(),
        oracle_roots: rep.oracle_roots.clone(),
        z_rank_full: rep.z_rank.as_ref().map(|z| z.full_l && z.full_k),
        json: serde_json::to_string(&rep).expect("reports serialize"),
    })
}

/// Recovered right eigenvectors `(λ, x, ‖G(λ)x‖)` of an `L1`/DL pencil.
#[pyfunction]
fn recover_right_eigenvectors(
    pencil: &PyPencil,
    real: &PyRealization,
) -> PyResult<Vec<(Complex64, Vec<Complex64>, f64)>> {
    let p = &pencil.inner;
    let sol = spectra::solve_pencil(&p.x, &p.y).map_err(err)?;
    let mut out = Vec::new();
    for (lambda, u) in sol.eigenvalues.iter().zip(&sol.right) {
        let rec = spectra::recover_right(u, &p.dims, &real.inner, *lambda).map_err(err)?;
        let res = spectra::right_transfer_residual(&real.inner, &rec.x, *lambda).map_err(err)?;
        out.push((*lambda, rec.x, res));
    }
    Ok(out)
}

/// `Φ` for `kind` in {monomial, chebyshev, newton}.
#[pyfunction]
#[pyo3(signature = (kind, d, nodes=None))]
fn phi_matrix(kind: &str, d: usize, nodes: Option<Vec<Complex64>>) -> PyResult<PyMatrix> {
    let kind = match (kind, nodes) {
        ("newton", Some(nodes)) => BasisKind::Newton { nodes },
        (k, _) => k.parse().map_err(err)?,
    };
    Ok(from_mat(&basis::phi_matrix(&BasisSpec::new(kind, d)).map_err(err)?))
}

#[pymodule]
pub fn pyrosenlin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRealization>()?;
    m.add_class::<PyPencil>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(build_c1, m)?)?;
    m.add_function(wrap_pyfunction!(build_c2, m)?)?;
    m.add_function(wrap_pyfunction!(build_dl, m)?)?;
    m.add_function(wrap_pyfunction!(build_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(build_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(build_pencil_l1, m)?)?;
    m.add_function(wrap_pyfunction!(build_pencil_l2, m)?)?;
    m.add_function(wrap_pyfunction!(sample_space, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(residual_ansatz, m)?)?;
    m.add_function(wrap_pyfunction!(dim_space, m)?)?;
    m.add_function(wrap_pyfunction!(verify_linearization, m)?)?;
    m.add_function(wrap_pyfunction!(recover_right_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(phi_matrix, m)?)?;
    Ok(())
}
