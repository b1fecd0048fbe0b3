//! Complex matrix helpers shared by every module: Hermiticity checks,
//! eigenvalue bounds, and orthonormal basis completion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for Hermiticity and orthonormality checks on intermediate
/// operators.
pub const OP_TOL: f64 = 1e-10;

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    let mut max = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        max = max.max((x - y).norm());
    }
    max
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let mut max = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

/// `(m + m†) / 2`, the Hermitian part of `m`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Real part of the trace of `m`.
pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Real part of `⟨v|M|v⟩`.
pub fn expectation(m: &CMatrix, v: &CVector) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

/// Rank-one projector `|v⟩⟨v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Smallest eigenvalue of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when the input deviates from its
/// adjoint by more than [`OP_TOL`]; the Hermitian part is diagonalized so
/// rounding-level asymmetry cannot leak into the spectrum.
pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare { rows: h.nrows(), cols: h.ncols() });
    }
    let asym = hermiticity_error(h);
    if asym > OP_TOL {
        return Err(Error::NotHermitian(asym));
    }
    if h.nrows() == 0 {
        return Ok(0.0);
    }
    let eig = hermitian_part(h).symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Largest eigenvalue of a Hermitian matrix (no validation; internal use on
/// operators that are Hermitian by construction).
pub(crate) fn max_eigenvalue(h: &CMatrix) -> f64 {
    if h.nrows() == 0 {
        return 0.0;
    }
    let eig = hermitian_part(h).symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Projects a Hermitian matrix onto the positive semidefinite cone by
/// clamping negative eigenvalues to zero.
pub(crate) fn clamp_psd(h: &CMatrix) -> CMatrix {
    if h.nrows() == 0 {
        return h.clone();
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let q = &eig.eigenvectors;
    let clamped = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| C64::new(l.max(0.0), 0.0)),
    );
    q * CMatrix::from_diagonal(&clamped) * q.adjoint()
}

/// Hermitian dilation `[[0, m], [m†, 0]]`, whose eigenvalues are `±σᵢ(m)`
/// padded with zeros.
fn hermitian_dilation(m: &CMatrix) -> CMatrix {
    let (nr, nc) = m.shape();
    let mut h = CMatrix::zeros(nr + nc, nr + nc);
    h.view_mut((0, nr), (nr, nc)).copy_from(m);
    h.view_mut((nr, 0), (nc, nr)).copy_from(&m.adjoint());
    h
}

/// Sum of the singular values of `m`.
///
/// Computed through the Hermitian dilation rather than a bidiagonalization
/// SVD, which can mis-converge on complex matrices with clustered spectra,
/// and rather than the normal equations `m†m`, whose near-zero eigenvalues
/// lose half the working precision under the square root.
pub(crate) fn nuclear_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let eig = hermitian_dilation(m).symmetric_eigen();
    eig.eigenvalues.iter().map(|&l| l.max(0.0)).sum()
}

/// Singular triplets of `m` with singular value above `cutoff`, in descending
/// order: `(σ, U, V)` with `m v_j = σ_j u_j` and orthonormal columns.
///
/// Uses the Hermitian dilation for the same accuracy reasons as
/// [`nuclear_norm`]; an eigenvector of the dilation at eigenvalue `σ > 0` is
/// `(u; v)/√2`, and within a degenerate eigenvalue the extracted `u` and `v`
/// sets stay orthonormal. Singular values at or below `cutoff` are excluded
/// because their eigenvectors mix the two blocks arbitrarily.
pub(crate) fn singular_triplets(m: &CMatrix, cutoff: f64) -> (Vec<f64>, CMatrix, CMatrix) {
    let (nr, nc) = m.shape();
    if nr == 0 || nc == 0 {
        return (Vec::new(), CMatrix::zeros(nr, 0), CMatrix::zeros(nc, 0));
    }
    let eig = hermitian_dilation(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > cutoff)
        .collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let mut sigmas = Vec::with_capacity(order.len());
    let mut u_cols: Vec<CVector> = Vec::with_capacity(order.len());
    let mut v_cols: Vec<CVector> = Vec::with_capacity(order.len());
    for &i in &order {
        sigmas.push(eig.eigenvalues[i]);
        let col = eig.eigenvectors.column(i);
        let u = col.rows(0, nr).into_owned();
        let v = col.rows(nr, nc).into_owned();
        u_cols.push(&u / C64::new(u.norm(), 0.0));
        v_cols.push(&v / C64::new(v.norm(), 0.0));
    }
    let u = if u_cols.is_empty() { CMatrix::zeros(nr, 0) } else { CMatrix::from_columns(&u_cols) };
    let v = if v_cols.is_empty() { CMatrix::zeros(nc, 0) } else { CMatrix::from_columns(&v_cols) };
    (sigmas, u, v)
}

/// Completes `cols` (orthonormal columns, k ≤ n) to an n×n unitary whose
/// first k columns are `cols`.
///
/// Completion columns come from greedily orthogonalizing standard basis
/// vectors, always taking the candidate with the largest residual, so the
/// result is deterministic.
pub fn complete_orthonormal(cols: &CMatrix) -> CMatrix {
    let n = cols.nrows();
    let k = cols.ncols();
    assert!(k <= n, "more columns than ambient dimension");
    let mut basis: Vec<CVector> = (0..k).map(|j| cols.column(j).into_owned()).collect();
    while basis.len() < n {
        let mut best: Option<(f64, CVector)> = None;
        for i in 0..n {
            let mut v = CVector::zeros(n);
            v[i] = C64::new(1.0, 0.0);
            for b in &basis {
                let c = (b.adjoint() * &v)[(0, 0)];
                v -= b * c;
            }
            let norm = v.norm();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, v));
            }
        }
        let (norm, mut v) = best.expect("ambient dimension is positive");
        assert!(norm > 1e-8, "no independent candidate found");
        v /= C64::new(norm, 0.0);
        for b in &basis {
            let c = (b.adjoint() * &v)[(0, 0)];
            v -= b * c;
        }
        let second = v.norm();
        basis.push(v / C64::new(second, 0.0));
    }
    CMatrix::from_columns(&basis)
}

/// Largest deviation of `m† m` from the identity.
pub fn orthonormality_error(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    max_abs_diff(&gram, &CMatrix::identity(m.ncols(), m.ncols()))
}
