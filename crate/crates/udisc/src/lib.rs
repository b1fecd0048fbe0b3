//! Unambiguous discrimination of two mixed quantum states.
//!
//! Given density matrices `rho0` and `rho1` with prior probabilities `p0`
//! and `p1`, an unambiguous measurement has three outcomes: two that
//! identify a state with certainty and one inconclusive outcome that
//! absorbs everything the zero-error constraints forbid. The conclusive
//! operators must satisfy `Tr(rho0 E1) = Tr(rho1 E0) = 0`, which confines
//! `E0` to the kernel of `rho1` and `E1` to the kernel of `rho0`; the
//! figure of merit is the average success probability
//! `p0 Tr(rho0 E0) + p1 Tr(rho1 E1)`.
//!
//! The crate provides:
//!
//! - validated state types with cached spectral data ([`states`]),
//! - the canonical-angle geometry of the two kernels and reduction to the
//!   span of the supports ([`geometry`]),
//! - exact solutions for orthogonal kernels, one-dimensional kernels, and
//!   pure-state pairs, plus certified lower and upper bounds with explicit
//!   measurement operators for everything else ([`solvers`]),
//! - an independent numerical maximizer used to cross-check the bounds
//!   ([`oracle`]),
//! - quantum state comparison and state filtering built on the same
//!   pipeline ([`applications`]),
//! - a JSON-file CLI ([`cli`]).
//!
//! # Example
//!
//! ```
//! use nalgebra::DMatrix;
//! use num_complex::Complex64;
//! use udisc::{build_problem, solve, DensityMatrix, Priors};
//!
//! let z = |x: f64| Complex64::new(x, 0.0);
//! let rho0 = DMatrix::from_diagonal_element(3, 3, z(0.0))
//!     + DMatrix::from_partial_diagonal(3, 3, &[z(0.5), z(0.5), z(0.0)]);
//! let rho1 = DMatrix::from_diagonal_element(3, 3, z(0.0))
//!     + DMatrix::from_partial_diagonal(3, 3, &[z(0.0), z(0.5), z(0.5)]);
//! let rho0 = DensityMatrix::new(&rho0, 1e-10).unwrap();
//! let rho1 = DensityMatrix::new(&rho1, 1e-10).unwrap();
//! let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
//! let report = solve(&problem).unwrap();
//! assert!(report.exact());
//! assert!((report.p_lower() - 0.5).abs() < 1e-12);
//! ```

pub mod applications;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod solvers;
pub mod states;

pub use applications::{
    build_comparison, build_filtering, filtering_closed_form, solve_comparison, ComparisonProblem,
    FilteringBranch, FilteringGeometry, FilteringProblem,
};
pub use error::{Error, Result};
pub use geometry::{
    build_problem, canonical_pairing, kernel_overlap_weights, CanonicalPairing,
    DiscriminationProblem,
};
pub use linalg::{min_eigenvalue, CMatrix, CVector, C64};
pub use oracle::{grid_oracle_1d, oracle_maximize, OracleConfig, OracleResult};
pub use solvers::{
    lower_bound_povm, solve, solve_1d, solve_orthogonal_kernels, solve_pure, upper_bound,
    Branch, DiscriminationReport, Method, Rank1Solution, ThreeOutcomePOVM,
};
pub use states::{fidelity, DensityMatrix, Priors, Subspace};
