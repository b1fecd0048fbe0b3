//! Validated quantum state types: density matrices with cached spectral
//! data, orthonormal subspaces, and prior probabilities.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{
    expectation, hermitian_part, hermiticity_error, max_abs_diff, nuclear_norm,
    orthonormality_error, CMatrix, CVector, C64,
};

/// Default tolerance for density matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;

/// Relative eigenvalue threshold separating support from kernel.
pub const RANK_TOL: f64 = 1e-10;

/// A density matrix together with its eigendecomposition.
///
/// Construction validates Hermiticity, unit trace, and positivity, then
/// caches eigenvalues (descending) and matching eigenvectors so that later
/// support and kernel queries cost nothing.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl DensityMatrix {
    /// Validates `raw` as a density matrix within `tol` and caches its
    /// spectral decomposition.
    ///
    /// Hermiticity is enforced entrywise, the trace is renormalized to
    /// exactly 1 when it deviates by less than `tol`, and eigenvalues below
    /// `-tol` reject the input as not positive semidefinite.
    pub fn new(raw: &CMatrix, tol: f64) -> Result<Self> {
        assert!(tol > 0.0, "tolerance must be positive");
        if raw.nrows() != raw.ncols() {
            return Err(Error::NotSquare { rows: raw.nrows(), cols: raw.ncols() });
        }
        let dim = raw.nrows();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let asym = hermiticity_error(raw);
        if asym > tol {
            return Err(Error::NotHermitian(asym));
        }
        let h = hermitian_part(raw);
        let trace = h.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::BadTrace(trace));
        }
        let h = h / C64::new(trace, 0.0);
        let eig = h.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::NotPositive(min));
        }
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .partial_cmp(&eig.eigenvalues[a])
                .expect("eigenvalues are finite")
                .then(a.cmp(&b))
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let columns: Vec<CVector> =
            order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
        Ok(Self { dim, matrix: h, eigenvalues, eigenvectors: CMatrix::from_columns(&columns) })
    }

    /// Builds the pure state `|psi⟩⟨psi|`; `psi` must be unit norm within
    /// [`DENSITY_TOL`].
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotUnit(norm));
        }
        let v = psi / C64::new(norm, 0.0);
        Self::new(&(&v * v.adjoint()), DENSITY_TOL)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector columns matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// Real part of `⟨v|rho|v⟩`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        expectation(&self.matrix, v)
    }

    /// Splits the spectrum into support and kernel at `rank_tol` times the
    /// largest eigenvalue ([`RANK_TOL`] when `None`).
    ///
    /// Returns `(support, kernel)`; the two ranks always sum to the
    /// dimension and the bases are mutually orthogonal eigenvector columns.
    pub fn support_kernel(&self, rank_tol: Option<f64>) -> (Subspace, Subspace) {
        let rel = rank_tol.unwrap_or(RANK_TOL);
        let cutoff = rel * self.eigenvalues[0];
        let rank = self.eigenvalues.iter().filter(|&&l| l > cutoff).count();
        let support = self.eigenvectors.columns(0, rank).into_owned();
        let kernel = self.eigenvectors.columns(rank, self.dim - rank).into_owned();
        (
            Subspace::from_orthonormal(support).expect("eigenvector columns are orthonormal"),
            Subspace::from_orthonormal(kernel).expect("eigenvector columns are orthonormal"),
        )
    }

    /// `√rho` from the cached spectral data.
    ///
    /// Eigenvalues below the support cutoff are treated as exact zeros;
    /// taking the square root of rounding noise (`√1e-17 ≈ 3e-9`) would
    /// otherwise contaminate fidelities far above their intrinsic accuracy.
    pub fn sqrt(&self) -> CMatrix {
        let cutoff = RANK_TOL * self.eigenvalues[0];
        let roots = DVector::from_iterator(
            self.dim,
            self.eigenvalues
                .iter()
                .map(|&l| C64::new(if l > cutoff { l.sqrt() } else { 0.0 }, 0.0)),
        );
        &self.eigenvectors * CMatrix::from_diagonal(&roots) * self.eigenvectors.adjoint()
    }

    /// Largest deviation between the stored matrix and its reconstruction
    /// from the cached spectral data.
    pub fn reconstruction_error(&self) -> f64 {
        let lambdas = DVector::from_iterator(
            self.dim,
            self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)),
        );
        let rebuilt =
            &self.eigenvectors * CMatrix::from_diagonal(&lambdas) * self.eigenvectors.adjoint();
        max_abs_diff(&rebuilt, &self.matrix)
    }
}

/// An orthonormal basis spanning a subspace of an ambient space.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    rank: usize,
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis matrix whose columns must be orthonormal within
    /// `1e-10`.
    pub fn from_orthonormal(basis: CMatrix) -> Result<Self> {
        let err = orthonormality_error(&basis);
        if err > 1e-10 {
            return Err(Error::Internal(format!(
                "basis columns are not orthonormal (error {err:.3e})"
            )));
        }
        Ok(Self { ambient_dim: basis.nrows(), rank: basis.ncols(), basis })
    }

    /// The zero-dimensional subspace of an `ambient_dim`-dimensional space.
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, rank: 0, basis: CMatrix::zeros(ambient_dim, 0) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Basis columns, `ambient_dim × rank`.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn column(&self, j: usize) -> CVector {
        self.basis.column(j).into_owned()
    }

    /// The orthogonal projector onto the subspace; the zero matrix for the
    /// empty subspace.
    pub fn projector(&self) -> CMatrix {
        if self.rank == 0 {
            return CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        &self.basis * self.basis.adjoint()
    }
}

/// Prior probabilities `(p0, p1)` of the two hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priors {
    p0: f64,
    p1: f64,
}

impl Priors {
    /// Requires both priors non-negative and summing to 1 within `1e-12`.
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        if p0 < 0.0 || p1 < 0.0 || (p0 + p1 - 1.0).abs() > 1e-12 {
            return Err(Error::BadPriors(p0, p1));
        }
        Ok(Self { p0, p1 })
    }

    pub fn equal() -> Self {
        Self { p0: 0.5, p1: 0.5 }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn swapped(&self) -> Self {
        Self { p0: self.p1, p1: self.p0 }
    }
}

/// Fidelity `F(rho0, rho1) = Tr|√rho0 √rho1|`, the sum of singular values
/// of `√rho0 √rho1`, clamped to `[0, 1]`.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), rho1.dim()));
    }
    let product = rho0.sqrt() * rho1.sqrt();
    Ok(nuclear_norm(&product).clamp(0.0, 1.0))
}
