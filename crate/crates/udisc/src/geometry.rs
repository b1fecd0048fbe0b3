//! Kernel geometry: canonical angles between the states' kernels, removal
//! of the shared kernel intersection, and the per-pair overlap weights the
//! solvers consume.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{complete_orthonormal, singular_triplets, CMatrix, CVector};
use crate::states::{DensityMatrix, Priors, Subspace};

/// Cosine threshold above which a canonical pair counts as a shared kernel
/// direction and is removed by [`build_problem`].
pub const INTERSECTION_COS: f64 = 1.0 - 5e-9;

/// Cosines at or below this are treated as exact right angles when forming
/// paired left vectors.
const SIGMA_NULL: f64 = 1e-8;

/// Canonical angle decomposition of two kernels.
///
/// Roles are ordered so that `basis0` spans the larger kernel (`r0 >= r1`);
/// `swapped` records whether the inputs were exchanged to achieve that.
/// The bases satisfy `⟨basis0_i|basis1_j⟩ = δ_ij cos θ_j`, with angles
/// ascending and one angle per `basis0` column; columns beyond the smaller
/// rank carry the angle `π/2` exactly.
#[derive(Debug, Clone)]
pub struct CanonicalPairing {
    r0: usize,
    r1: usize,
    swapped: bool,
    angles: Vec<f64>,
    cosines: Vec<f64>,
    basis0: Subspace,
    basis1: Subspace,
}

impl CanonicalPairing {
    pub fn r0(&self) -> usize {
        self.r0
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// Canonical angles in ascending order, one per `basis0` column.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Cosines of the canonical angles (zero for the unpaired columns).
    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    pub fn basis0(&self) -> &Subspace {
        &self.basis0
    }

    pub fn basis1(&self) -> &Subspace {
        &self.basis1
    }

    /// True when every canonical angle equals `π/2` within `tol` on the
    /// cosine scale; vacuously true when both kernels are empty.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.cosines.iter().all(|&c| c <= tol)
    }

    /// Largest cosine, i.e. the overlap of the closest canonical pair.
    pub fn max_cosine(&self) -> f64 {
        self.cosines.first().copied().unwrap_or(0.0)
    }
}

/// Computes the canonical angle decomposition of two kernels of a common
/// ambient space.
///
/// The singular value decomposition of the cross-Gram matrix between the
/// two bases yields the paired directions and their cosines; the larger
/// kernel's basis is completed deterministically so that every column has
/// an angle.
pub fn canonical_pairing(k0: &Subspace, k1: &Subspace) -> CanonicalPairing {
    assert_eq!(k0.ambient_dim(), k1.ambient_dim(), "kernels live in different spaces");
    let swapped = k0.rank() < k1.rank();
    let (a, b) = if swapped { (k1, k0) } else { (k0, k1) };
    let (r0, r1) = (a.rank(), b.rank());

    if r1 == 0 {
        return CanonicalPairing {
            r0,
            r1,
            swapped,
            angles: vec![FRAC_PI_2; r0],
            cosines: vec![0.0; r0],
            basis0: a.clone(),
            basis1: Subspace::empty(b.ambient_dim()),
        };
    }

    // Pairs whose cosine falls at or below SIGMA_NULL are right angles up to
    // roundoff; their basis columns come from the deterministic completions
    // instead of the (block-mixing) near-null eigenvectors.
    let cross = a.basis().adjoint() * b.basis();
    let (sigmas, u_paired, v_paired) = singular_triplets(&cross, SIGMA_NULL);

    let mut cosines: Vec<f64> = sigmas.iter().map(|&s| s.clamp(0.0, 1.0)).collect();
    cosines.extend(std::iter::repeat(0.0).take(r0 - cosines.len()));
    let angles: Vec<f64> = cosines.iter().map(|&c| c.acos()).collect();

    let u_full = complete_orthonormal(&u_paired);
    let v_full = complete_orthonormal(&v_paired);
    let basis0 = Subspace::from_orthonormal(a.basis() * u_full)
        .expect("rotation of an orthonormal basis stays orthonormal");
    let basis1 = Subspace::from_orthonormal(b.basis() * v_full)
        .expect("rotation of an orthonormal basis stays orthonormal");

    CanonicalPairing { r0, r1, swapped, angles, cosines, basis0, basis1 }
}

/// A validated two-state discrimination instance, reduced to the span of
/// the supports.
///
/// The `embedding` isometry maps the reduced space back into the original
/// one, so operators built here can be lifted to the caller's dimension.
#[derive(Debug, Clone)]
pub struct DiscriminationProblem {
    dim: usize,
    original_dim: usize,
    rho0: DensityMatrix,
    rho1: DensityMatrix,
    priors: Priors,
    kernel0: Subspace,
    kernel1: Subspace,
    embedding: CMatrix,
    reduced: bool,
}

impl DiscriminationProblem {
    /// Reduced dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn priors(&self) -> &Priors {
        &self.priors
    }

    /// Kernel of `rho0` in the reduced space.
    pub fn kernel0(&self) -> &Subspace {
        &self.kernel0
    }

    /// Kernel of `rho1` in the reduced space.
    pub fn kernel1(&self) -> &Subspace {
        &self.kernel1
    }

    /// Isometry from the reduced space into the original one.
    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Canonical pairing of the two reduced kernels.
    pub fn pairing(&self) -> CanonicalPairing {
        canonical_pairing(&self.kernel0, &self.kernel1)
    }

    /// Lifts a reduced-space operator to the original space.
    pub fn lift(&self, op: &CMatrix) -> CMatrix {
        &self.embedding * op * self.embedding.adjoint()
    }

    /// The problem with the two hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            dim: self.dim,
            original_dim: self.original_dim,
            rho0: self.rho1.clone(),
            rho1: self.rho0.clone(),
            priors: self.priors.swapped(),
            kernel0: self.kernel1.clone(),
            kernel1: self.kernel0.clone(),
            embedding: self.embedding.clone(),
            reduced: self.reduced,
        }
    }
}

/// Assembles a discrimination problem, removing the intersection of the
/// two kernels.
///
/// Canonical pairs of the full-space kernels with cosine above
/// [`INTERSECTION_COS`] span directions where neither state has weight;
/// restricting to their orthogonal complement leaves an equivalent problem
/// on the span of the two supports. Identical supports are legal and
/// produce empty reduced kernels.
pub fn build_problem(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    priors: Priors,
) -> Result<DiscriminationProblem> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), rho1.dim()));
    }
    let n = rho0.dim();
    let (_, kern0_full) = rho0.support_kernel(None);
    let (_, kern1_full) = rho1.support_kernel(None);
    let pairing = canonical_pairing(&kern0_full, &kern1_full);

    let shared: Vec<CVector> = pairing
        .cosines()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > INTERSECTION_COS)
        .map(|(j, _)| pairing.basis0().column(j))
        .collect();

    if shared.is_empty() {
        return Ok(DiscriminationProblem {
            dim: n,
            original_dim: n,
            rho0: rho0.clone(),
            rho1: rho1.clone(),
            priors,
            kernel0: kern0_full,
            kernel1: kern1_full,
            embedding: CMatrix::identity(n, n),
            reduced: true,
        });
    }

    let t = shared.len();
    let full = complete_orthonormal(&CMatrix::from_columns(&shared));
    let embedding = full.columns(t, n - t).into_owned();
    let reduce = |rho: &DensityMatrix| -> Result<DensityMatrix> {
        let m = embedding.adjoint() * rho.matrix() * &embedding;
        DensityMatrix::new(&m, 1e-8)
    };
    let rho0_red = reduce(rho0)?;
    let rho1_red = reduce(rho1)?;
    let (_, kernel0) = rho0_red.support_kernel(None);
    let (_, kernel1) = rho1_red.support_kernel(None);
    Ok(DiscriminationProblem {
        dim: n - t,
        original_dim: n,
        rho0: rho0_red,
        rho1: rho1_red,
        priors,
        kernel0,
        kernel1,
        embedding,
        reduced: true,
    })
}

/// Per-pair overlap weights `(A0_j, A1_j)`.
///
/// In the pairing's role convention, `A0_j = p0 ⟨basis1_j|rho0|basis1_j⟩`
/// for the paired columns (zero beyond the smaller rank) and
/// `A1_j = p1 ⟨basis0_j|rho1|basis0_j⟩` for every column. Rounding-level
/// negatives are clamped to zero.
pub fn kernel_overlap_weights(
    problem: &DiscriminationProblem,
    pairing: &CanonicalPairing,
) -> Result<Vec<(f64, f64)>> {
    if pairing.basis0().ambient_dim() != problem.dim() {
        return Err(Error::PairingMismatch(format!(
            "pairing ambient dimension {} differs from problem dimension {}",
            pairing.basis0().ambient_dim(),
            problem.dim()
        )));
    }
    let (k0, k1) = (problem.kernel0(), problem.kernel1());
    let expect_r0 = k0.rank().max(k1.rank());
    let expect_r1 = k0.rank().min(k1.rank());
    if pairing.r0() != expect_r0 || pairing.r1() != expect_r1 {
        return Err(Error::PairingMismatch(format!(
            "pairing ranks ({}, {}) do not match kernel ranks ({}, {})",
            pairing.r0(),
            pairing.r1(),
            k0.rank(),
            k1.rank()
        )));
    }

    let (rho_a, p_a, rho_b, p_b) = if pairing.swapped() {
        (problem.rho1(), problem.priors().p1(), problem.rho0(), problem.priors().p0())
    } else {
        (problem.rho0(), problem.priors().p0(), problem.rho1(), problem.priors().p1())
    };

    let clamp = |x: f64| if x < 0.0 { 0.0 } else { x };
    let mut weights = Vec::with_capacity(pairing.r0());
    for j in 0..pairing.r0() {
        let a0 = if j < pairing.r1() {
            clamp(p_a * rho_a.expectation(&pairing.basis1().column(j)))
        } else {
            0.0
        };
        let a1 = clamp(p_b * rho_b.expectation(&pairing.basis0().column(j)));
        weights.push((a0, a1));
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, C64};
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag_state(entries: &[f64]) -> DensityMatrix {
        let m = CMatrix::from_diagonal(&DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| c(x, 0.0)),
        ));
        DensityMatrix::new(&m, 1e-10).unwrap()
    }

    fn axes(dim: usize, which: &[usize]) -> Subspace {
        let cols: Vec<CVector> = which
            .iter()
            .map(|&i| {
                let mut v = CVector::zeros(dim);
                v[i] = c(1.0, 0.0);
                v
            })
            .collect();
        Subspace::from_orthonormal(CMatrix::from_columns(&cols)).unwrap()
    }

    fn check_pairing_relation(p: &CanonicalPairing) {
        for i in 0..p.r0() {
            for j in 0..p.r1() {
                let overlap =
                    (p.basis0().column(i).adjoint() * p.basis1().column(j))[(0, 0)].norm();
                let expected = if i == j { p.cosines()[j] } else { 0.0 };
                assert!(
                    (overlap - expected).abs() < 1e-10,
                    "pairing relation broken at ({i}, {j}): {overlap} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn pairing_shared_axis_plus_orthogonal_pair() {
        let k0 = axes(3, &[0, 1]);
        let k1 = axes(3, &[1, 2]);
        let p = canonical_pairing(&k0, &k1);
        assert_eq!(p.r0(), 2);
        assert_eq!(p.r1(), 2);
        assert!(!p.swapped());
        assert!(p.angles()[0].abs() < 1e-12);
        assert!((p.angles()[1] - PI / 2.0).abs() < 1e-7);
        assert!(p.cosines()[1] < 1e-12);
        check_pairing_relation(&p);
    }

    #[test]
    fn pairing_single_pair_at_pi_over_four() {
        let k0 = axes(2, &[0]);
        let s = 1.0 / 2.0f64.sqrt();
        let k1 = Subspace::from_orthonormal(CMatrix::from_row_slice(2, 1, &[c(s, 0.0), c(s, 0.0)]))
            .unwrap();
        let p = canonical_pairing(&k0, &k1);
        assert_eq!((p.r0(), p.r1()), (1, 1));
        assert!((p.angles()[0] - FRAC_PI_4).abs() < 1e-12);
        check_pairing_relation(&p);
    }

    #[test]
    fn pairing_identical_subspaces_all_zero_angles() {
        let k0 = axes(4, &[1, 3]);
        let p = canonical_pairing(&k0, &k0.clone());
        assert_eq!((p.r0(), p.r1()), (2, 2));
        assert!(p.angles().iter().all(|&t| t.abs() < 1e-12));
        check_pairing_relation(&p);
    }

    #[test]
    fn pairing_with_empty_kernel() {
        let k0 = axes(3, &[0, 2]);
        let k1 = Subspace::empty(3);
        let p = canonical_pairing(&k0, &k1);
        assert_eq!((p.r0(), p.r1()), (2, 0));
        assert!(!p.swapped());
        assert!(p.angles().iter().all(|&t| (t - PI / 2.0).abs() < 1e-15));
        assert!(p.is_orthogonal(1e-9));
    }

    #[test]
    fn pairing_swaps_roles_for_larger_second_kernel() {
        let k0 = axes(3, &[0]);
        let k1 = axes(3, &[1, 2]);
        let p = canonical_pairing(&k0, &k1);
        assert!(p.swapped());
        assert_eq!((p.r0(), p.r1()), (2, 1));
        check_pairing_relation(&p);
    }

    #[test]
    fn pairing_angles_match_under_argument_exchange() {
        let k0 = axes(3, &[0, 1]);
        let s = 1.0 / 2.0f64.sqrt();
        let k1 = Subspace::from_orthonormal(CMatrix::from_columns(&[
            CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(s, 0.0)]),
        ]))
        .unwrap();
        let forward = canonical_pairing(&k0, &k1);
        let backward = canonical_pairing(&k1, &k0);
        assert_eq!(forward.swapped(), !backward.swapped() || forward.r0() == forward.r1());
        for (a, b) in forward.angles().iter().zip(backward.angles()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn build_problem_keeps_disjoint_kernels_unreduced() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let rho1 = diag_state(&[0.0, 0.5, 0.5]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        assert_eq!(problem.dim(), 3);
        assert_eq!(problem.original_dim(), 3);
        assert_eq!(problem.kernel0().rank(), 1);
        assert_eq!(problem.kernel1().rank(), 1);
        assert!(problem.is_reduced());
    }

    #[test]
    fn build_problem_reduces_identical_states() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let problem = build_problem(&rho0, &rho0.clone(), Priors::equal()).unwrap();
        assert_eq!(problem.dim(), 2);
        assert_eq!(problem.kernel0().rank(), 0);
        assert_eq!(problem.kernel1().rank(), 0);
    }

    #[test]
    fn build_problem_removes_common_kernel_direction() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0, 0.0, 0.0]);
        let rho1 = diag_state(&[0.0, 0.0, 0.5, 0.5, 0.0]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        assert_eq!(problem.dim(), 4);
        assert_eq!(problem.original_dim(), 5);
        let lifted0 = problem.lift(problem.rho0().matrix());
        assert!(max_abs_diff(&lifted0, rho0.matrix()) < 1e-9);
    }

    #[test]
    fn build_problem_rejects_dimension_mismatch() {
        let rho0 = diag_state(&[0.5, 0.5]);
        let rho1 = diag_state(&[0.5, 0.5, 0.0]);
        assert!(matches!(
            build_problem(&rho0, &rho1, Priors::equal()),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn weights_for_disjoint_diagonal_kernels() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let rho1 = diag_state(&[0.0, 0.5, 0.5]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let pairing = problem.pairing();
        let weights = kernel_overlap_weights(&problem, &pairing).unwrap();
        assert_eq!(weights.len(), 1);
        assert!((weights[0].0 - 0.25).abs() < 1e-12);
        assert!((weights[0].1 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn weights_reject_foreign_pairing() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let rho1 = diag_state(&[0.0, 0.5, 0.5]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let foreign = canonical_pairing(&axes(3, &[0, 1]), &axes(3, &[1, 2]));
        assert!(matches!(
            kernel_overlap_weights(&problem, &foreign),
            Err(Error::PairingMismatch(_))
        ));
    }

    #[test]
    fn embedding_is_isometry() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0, 0.0]);
        let problem = build_problem(&rho0, &rho0.clone(), Priors::equal()).unwrap();
        let b = problem.embedding();
        let gram = b.adjoint() * b;
        assert!(max_abs_diff(&gram, &CMatrix::identity(problem.dim(), problem.dim())) < 1e-12);
    }
}
