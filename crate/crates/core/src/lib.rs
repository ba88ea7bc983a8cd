//! Vector spaces of linearizations for Rosenbrock system matrices
//! `S(λ) = [A(λ), −B; C, D(λ)]` and transfer functions `G(λ) = C A(λ)⁻¹ B + D(λ)`.
//!
//! ```
//! use rosenlin::{spaces, spectra, system};
//!
//! let real = system::example_r2();
//! let pencil = spaces::build_c1(&real);
//! let report = spectra::verify_linearization(&pencil, &real, &Default::default()).unwrap();
//! assert_eq!(report.verdict, spectra::Verdict::Pass);
//! ```

pub mod basis;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod random;
pub mod shiftsum;
pub mod spaces;
pub mod spectra;
pub mod system;

pub use error::{Error, Result};
pub use spaces::{AnsatzPencil, Space};
pub use system::{BlockDims, MatrixPolynomial, Realization};
