//! JSON files: problems (a realization plus options) and pencils.
//!
//! Matrices are row-major arrays of `[re, im]` pairs, matrix polynomials are
//! arrays of matrices in ascending degree, and every file carries
//! `"format": 1`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::spaces::{AnsatzPencil, Space};
use crate::system::{BlockDims, MatrixPolynomial, Realization};

pub const FORMAT: u32 = 1;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(a: &CMat) -> JsonMatrix {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, what: &str) -> Result<CMat> {
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Input(format!("{what}: rows have different lengths")));
    }
    Ok(CMat::from_fn(rows.len(), nc, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn vector_to_json(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationJson {
    #[serde(rename = "A")]
    pub a: Vec<JsonMatrix>,
    #[serde(rename = "B")]
    pub b: JsonMatrix,
    #[serde(rename = "C")]
    pub c: JsonMatrix,
    #[serde(rename = "D")]
    pub d: Vec<JsonMatrix>,
}

impl RealizationJson {
    pub fn from_realization(r: &Realization) -> Self {
        Self {
            a: r.a.coeffs().iter().map(matrix_to_json).collect(),
            b: matrix_to_json(&r.b),
            c: matrix_to_json(&r.c),
            d: r.d.coeffs().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_realization(&self) -> Result<Realization> {
        let poly = |ms: &[JsonMatrix], name: &str| -> Result<MatrixPolynomial> {
            let coeffs = ms
                .iter()
                .enumerate()
                .map(|(j, m)| matrix_from_json(m, &format!("{name}[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            MatrixPolynomial::new(coeffs)
        };
        Realization::new(
            poly(&self.a, "A")?,
            matrix_from_json(&self.b, "B")?,
            matrix_from_json(&self.c, "C")?,
            poly(&self.d, "D")?,
        )
    }
}

/// Optional settings carried by a problem file; command-line flags win.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ProblemOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_eig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    /// Explicit ansatz data for `--source explicit`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<[f64; 2]>>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub w_a: Option<JsonMatrix>,
    #[serde(rename = "W1", skip_serializing_if = "Option::is_none")]
    pub w_d: Option<JsonMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    pub format: u32,
    pub realization: RealizationJson,
    #[serde(default)]
    pub options: ProblemOptions,
}

impl ProblemFile {
    pub fn new(r: &Realization) -> Self {
        Self { format: FORMAT, realization: RealizationJson::from_realization(r), options: ProblemOptions::default() }
    }
}

/// Bases of a tilde pencil, one per diagonal partition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilBasis {
    #[serde(rename = "A")]
    pub a: BasisSpec,
    #[serde(rename = "D")]
    pub d: BasisSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilFile {
    pub format: u32,
    #[serde(rename = "X")]
    pub x: JsonMatrix,
    #[serde(rename = "Y")]
    pub y: JsonMatrix,
    pub dims: BlockDims,
    pub space: Space,
    pub v: Vec<[f64; 2]>,
    pub w: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<PencilBasis>,
}

impl PencilFile {
    pub fn from_pencil(p: &AnsatzPencil, basis: Option<PencilBasis>) -> Self {
        Self {
            format: FORMAT,
            x: matrix_to_json(&p.x),
            y: matrix_to_json(&p.y),
            dims: p.dims,
            space: p.space,
            v: vector_to_json(&p.v),
            w: vector_to_json(&p.w),
            basis,
        }
    }

    pub fn to_pencil(&self) -> Result<AnsatzPencil> {
        let d = self.dims;
        BlockDims::new(d.m, d.n, d.k, d.r).map_err(|e| Error::Input(e.to_string()))?;
        let x = matrix_from_json(&self.x, "X")?;
        let y = matrix_from_json(&self.y, "Y")?;
        AnsatzPencil::explicit(x, y, d, self.space, vector_from_json(&self.v), vector_from_json(&self.w))
            .map_err(|e| Error::Input(e.to_string()))
    }
}

fn check_format(format: u32) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Input(format!("unsupported format {format}, expected {FORMAT}")));
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn read_problem(path: &Path) -> Result<(ProblemFile, Realization)> {
    let pf: ProblemFile = read_json(path)?;
    check_format(pf.format)?;
    let real = pf.realization.to_realization().map_err(|e| match e {
        Error::Input(_) => e,
        other => Error::Input(other.to_string()),
    })?;
    Ok((pf, real))
}

pub fn read_pencil(path: &Path) -> Result<PencilFile> {
    let pf: PencilFile = read_json(path)?;
    check_format(pf.format)?;
    Ok(pf)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
