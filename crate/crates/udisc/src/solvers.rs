//! Exact solutions and certified bounds for the unambiguous discrimination
//! problem, together with the measurement operators that achieve them.

use crate::error::{Error, Result};
use crate::geometry::{kernel_overlap_weights, CanonicalPairing, DiscriminationProblem};
use crate::linalg::{max_abs_diff, min_eigenvalue, outer, trace_re, CMatrix, CVector, C64};
use crate::states::{fidelity, DensityMatrix, Priors};

/// Which branch of the rank-one optimum applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Both detection weights are strictly between 0 and 1.
    Interior,
    /// One weight saturates at 1 and the other drops to 0.
    Saturated,
}

/// Optimal detection weights for a single canonical pair.
#[derive(Debug, Clone, Copy)]
pub struct Rank1Solution {
    pub alpha: f64,
    pub beta: f64,
    pub p_success: f64,
    pub branch: Branch,
}

/// Optimal unambiguous discrimination when each kernel contributes a single
/// direction: maximize `alpha·A0 + beta·A1` subject to
/// `I - alpha|k1⟩⟨k1| - beta|k0⟩⟨k0| ⪰ 0`, where `cos_theta` is the overlap
/// of the two kernel vectors.
///
/// Below the saturation threshold `cos θ < sqrt(min(A)/max(A))` the optimum
/// is interior:
///
/// ```text
/// alpha = (1 - sqrt(A1/A0) cos θ) / sin²θ
/// beta  = (1 - sqrt(A0/A1) cos θ) / sin²θ
/// ```
///
/// at which the failure operator becomes rank-one. Otherwise the weaker
/// direction is abandoned and all weight goes to the stronger one.
pub fn solve_1d(a0: f64, a1: f64, cos_theta: f64) -> Result<Rank1Solution> {
    if !(-1e-12..=1.0 + 1e-12).contains(&cos_theta) {
        return Err(Error::BadAngle(cos_theta));
    }
    assert!(a0 >= 0.0 && a1 >= 0.0, "overlap weights must be non-negative");
    let c = cos_theta.clamp(0.0, 1.0);

    if a0 == 0.0 && a1 == 0.0 {
        return Ok(Rank1Solution { alpha: 0.0, beta: 0.0, p_success: 0.0, branch: Branch::Saturated });
    }
    if c == 0.0 {
        return Ok(Rank1Solution {
            alpha: 1.0,
            beta: 1.0,
            p_success: a0 + a1,
            branch: Branch::Interior,
        });
    }
    let (amin, amax) = if a0 <= a1 { (a0, a1) } else { (a1, a0) };
    if amin > 0.0 && c < (amin / amax).sqrt() {
        let s2 = 1.0 - c * c;
        let alpha = (1.0 - (a1 / a0).sqrt() * c) / s2;
        let beta = (1.0 - (a0 / a1).sqrt() * c) / s2;
        Ok(Rank1Solution {
            alpha,
            beta,
            p_success: alpha * a0 + beta * a1,
            branch: Branch::Interior,
        })
    } else if a0 >= a1 {
        Ok(Rank1Solution { alpha: 1.0, beta: 0.0, p_success: a0, branch: Branch::Saturated })
    } else {
        Ok(Rank1Solution { alpha: 0.0, beta: 1.0, p_success: a1, branch: Branch::Saturated })
    }
}

/// A three-outcome measurement: identify state 0, identify state 1, or
/// give up.
#[derive(Debug, Clone)]
pub struct ThreeOutcomePOVM {
    e0: CMatrix,
    e1: CMatrix,
    e_fail: CMatrix,
}

impl ThreeOutcomePOVM {
    /// Builds the POVM from the two conclusive elements; the failure
    /// element is the complement to the identity.
    pub fn new(e0: CMatrix, e1: CMatrix) -> Self {
        assert_eq!(e0.shape(), e1.shape(), "POVM elements must share a shape");
        let n = e0.nrows();
        let e_fail = CMatrix::identity(n, n) - &e0 - &e1;
        Self { e0, e1, e_fail }
    }

    pub fn from_parts(e0: CMatrix, e1: CMatrix, e_fail: CMatrix) -> Self {
        Self { e0, e1, e_fail }
    }

    pub fn e0(&self) -> &CMatrix {
        &self.e0
    }

    pub fn e1(&self) -> &CMatrix {
        &self.e1
    }

    pub fn e_fail(&self) -> &CMatrix {
        &self.e_fail
    }

    pub fn dim(&self) -> usize {
        self.e0.nrows()
    }

    /// Checks positivity of all three elements (eigenvalues above `-1e-9`),
    /// completeness within `1e-9`, and the zero-error constraints
    /// `Tr(rho1 E0) = Tr(rho0 E1) = 0` within `1e-9`.
    pub fn validate(&self, rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<()> {
        let n = self.dim();
        if rho0.dim() != n {
            return Err(Error::DimensionMismatch(rho0.dim(), n));
        }
        if rho1.dim() != n {
            return Err(Error::DimensionMismatch(rho1.dim(), n));
        }
        for (name, m) in [("E0", &self.e0), ("E1", &self.e1), ("E_fail", &self.e_fail)] {
            let min = min_eigenvalue(m)?;
            if min < -1e-9 {
                return Err(Error::Internal(format!(
                    "{name} is not positive semidefinite (min eigenvalue {min:.3e})"
                )));
            }
        }
        let sum = &self.e0 + &self.e1 + &self.e_fail;
        let completeness = max_abs_diff(&sum, &CMatrix::identity(n, n));
        if completeness > 1e-9 {
            return Err(Error::Internal(format!(
                "POVM elements do not sum to the identity (deviation {completeness:.3e})"
            )));
        }
        let leak0 = trace_re(&(rho1.matrix() * &self.e0));
        let leak1 = trace_re(&(rho0.matrix() * &self.e1));
        if leak0.abs() > 1e-9 || leak1.abs() > 1e-9 {
            return Err(Error::Internal(format!(
                "zero-error constraint violated (Tr(rho1 E0) = {leak0:.3e}, Tr(rho0 E1) = {leak1:.3e})"
            )));
        }
        Ok(())
    }

    /// Average success probability `p0 Tr(rho0 E0) + p1 Tr(rho1 E1)`.
    pub fn success_probability(
        &self,
        rho0: &DensityMatrix,
        rho1: &DensityMatrix,
        priors: &Priors,
    ) -> f64 {
        priors.p0() * trace_re(&(rho0.matrix() * &self.e0))
            + priors.p1() * trace_re(&(rho1.matrix() * &self.e1))
    }

    /// Lifts the POVM through an isometry `B` into the larger space.
    ///
    /// The conclusive elements map as `B E Bᴴ`; the failure element is the
    /// complement in the larger space, so everything outside the range of
    /// `B` is declared inconclusive.
    pub fn lift(&self, embedding: &CMatrix) -> ThreeOutcomePOVM {
        let e0 = embedding * &self.e0 * embedding.adjoint();
        let e1 = embedding * &self.e1 * embedding.adjoint();
        ThreeOutcomePOVM::new(e0, e1)
    }
}

/// Which solution path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    OrthogonalKernels,
    OneDimKernels,
    PureStates,
    GeneralBounds,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::OrthogonalKernels => "orthogonal-kernels",
            Method::OneDimKernels => "one-dim-kernels",
            Method::PureStates => "pure-states",
            Method::GeneralBounds => "general-bounds",
        }
    }
}

/// Result of solving a discrimination problem: certified bounds on the
/// optimal success probability and a measurement achieving the lower one.
#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    method: Method,
    p_lower: f64,
    p_upper: f64,
    exact: bool,
    povm: ThreeOutcomePOVM,
    fidelity: f64,
    angles: Vec<f64>,
}

impl DiscriminationReport {
    pub fn method(&self) -> Method {
        self.method
    }

    /// Achievable success probability (exactly optimal when [`Self::exact`]).
    pub fn p_lower(&self) -> f64 {
        self.p_lower
    }

    pub fn p_upper(&self) -> f64 {
        self.p_upper
    }

    pub fn gap(&self) -> f64 {
        self.p_upper - self.p_lower
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    /// The measurement achieving [`Self::p_lower`], in the same space as
    /// the problem it was solved on.
    pub fn povm(&self) -> &ThreeOutcomePOVM {
        &self.povm
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    /// Canonical angles of the kernel pairing, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub(crate) fn set_exact(&mut self, exact: bool) {
        self.exact = exact;
    }
}

/// Exact solution when the two kernels are mutually orthogonal (every
/// canonical angle `π/2` within `1e-9` on the cosine scale): project onto
/// the opposite kernel with full weight.
pub fn solve_orthogonal_kernels(problem: &DiscriminationProblem) -> Result<DiscriminationReport> {
    let pairing = problem.pairing();
    if !pairing.is_orthogonal(1e-9) {
        return Err(Error::NotOrthogonal(pairing.max_cosine()));
    }
    let povm = ThreeOutcomePOVM::new(problem.kernel1().projector(), problem.kernel0().projector());
    let p = povm.success_probability(problem.rho0(), problem.rho1(), problem.priors());
    let fid = fidelity(problem.rho0(), problem.rho1()).expect("dimensions match within a problem");
    Ok(DiscriminationReport {
        method: Method::OrthogonalKernels,
        p_lower: p,
        p_upper: p,
        exact: true,
        povm,
        fidelity: fid,
        angles: pairing.angles().to_vec(),
    })
}

pub(crate) fn lower_bound_with_pairing(
    problem: &DiscriminationProblem,
    pairing: &CanonicalPairing,
) -> Result<(f64, ThreeOutcomePOVM)> {
    let weights = kernel_overlap_weights(problem, pairing)?;
    let n = problem.dim();
    let mut e0_role = CMatrix::zeros(n, n);
    let mut e1_role = CMatrix::zeros(n, n);
    let mut p = 0.0;
    for (j, &(a0, a1)) in weights.iter().enumerate() {
        if j < pairing.r1() {
            let sol = solve_1d(a0, a1, pairing.cosines()[j])?;
            p += sol.p_success;
            e0_role += outer(&pairing.basis1().column(j)) * C64::new(sol.alpha, 0.0);
            e1_role += outer(&pairing.basis0().column(j)) * C64::new(sol.beta, 0.0);
        } else {
            p += a1;
            e1_role += outer(&pairing.basis0().column(j));
        }
    }
    let (e0, e1) = if pairing.swapped() { (e1_role, e0_role) } else { (e0_role, e1_role) };
    Ok((p, ThreeOutcomePOVM::new(e0, e1)))
}

/// Achievable lower bound: decompose the kernels into canonical pairs,
/// solve each pair as an independent rank-one problem, and give unpaired
/// kernel directions full weight.
///
/// The canonical pairs span mutually orthogonal planes, so the per-pair
/// feasibility constraints guarantee feasibility of the assembled
/// measurement.
pub fn lower_bound_povm(problem: &DiscriminationProblem) -> Result<(f64, ThreeOutcomePOVM)> {
    let pairing = problem.pairing();
    lower_bound_with_pairing(problem, &pairing)
}

/// Fidelity upper bound on the optimal success probability:
/// `1 - 2 sqrt(p0 p1) F` when `F < sqrt(p_min/p_max)`, otherwise
/// `p_max (1 - F²)`.
pub fn upper_bound(problem: &DiscriminationProblem) -> f64 {
    let f = fidelity(problem.rho0(), problem.rho1()).expect("dimensions match within a problem");
    let (p0, p1) = (problem.priors().p0(), problem.priors().p1());
    let (pmin, pmax) = (p0.min(p1), p0.max(p1));
    if f < (pmin / pmax).sqrt() {
        1.0 - 2.0 * (p0 * p1).sqrt() * f
    } else {
        pmax * (1.0 - f * f)
    }
}

/// Exact solution for two pure states, including the rank-one measurement
/// in the input space.
///
/// With overlap `c = |⟨psi0|psi1⟩|` the weights follow [`solve_1d`] at
/// `A_b = p_b (1 - c²)`; the conclusive directions are the components of
/// each state orthogonal to the other.
pub fn solve_pure(psi0: &CVector, psi1: &CVector, priors: Priors) -> Result<DiscriminationReport> {
    if psi0.len() != psi1.len() {
        return Err(Error::DimensionMismatch(psi0.len(), psi1.len()));
    }
    let n0 = psi0.norm();
    if (n0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(n0));
    }
    let n1 = psi1.norm();
    if (n1 - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(n1));
    }
    let v0 = psi0 / C64::new(n0, 0.0);
    let v1 = psi1 / C64::new(n1, 0.0);
    let n = v0.len();
    let overlap = (v0.adjoint() * &v1)[(0, 0)];
    let c = overlap.norm().min(1.0);

    if c >= 1.0 - 1e-12 {
        let zero = CMatrix::zeros(n, n);
        return Ok(DiscriminationReport {
            method: Method::PureStates,
            p_lower: 0.0,
            p_upper: 0.0,
            exact: true,
            povm: ThreeOutcomePOVM::new(zero.clone(), zero),
            fidelity: c,
            angles: Vec::new(),
        });
    }

    let s2 = 1.0 - c * c;
    let sol = solve_1d(priors.p0() * s2, priors.p1() * s2, c)?;
    let normalize = |v: CVector| {
        let norm = v.norm();
        v / C64::new(norm, 0.0)
    };
    let k0 = normalize(&v1 - &v0 * overlap);
    let k1 = normalize(&v0 - &v1 * overlap.conj());
    let e0 = outer(&k1) * C64::new(sol.alpha, 0.0);
    let e1 = outer(&k0) * C64::new(sol.beta, 0.0);
    Ok(DiscriminationReport {
        method: Method::PureStates,
        p_lower: sol.p_success,
        p_upper: sol.p_success,
        exact: true,
        povm: ThreeOutcomePOVM::new(e0, e1),
        fidelity: c,
        angles: vec![c.acos()],
    })
}

/// Solves a discrimination problem by the strongest applicable method.
///
/// Orthogonal kernels and a pair of one-dimensional kernels admit exact
/// solutions; everything else gets the canonical-pair lower bound and the
/// fidelity upper bound, marked exact when they agree within `1e-9`.
pub fn solve(problem: &DiscriminationProblem) -> Result<DiscriminationReport> {
    let pairing = problem.pairing();
    let fid = fidelity(problem.rho0(), problem.rho1()).expect("dimensions match within a problem");
    if pairing.is_orthogonal(1e-9) {
        return solve_orthogonal_kernels(problem);
    }
    if pairing.r0() == 1 && pairing.r1() == 1 {
        let (p, povm) = lower_bound_with_pairing(problem, &pairing)?;
        return Ok(DiscriminationReport {
            method: Method::OneDimKernels,
            p_lower: p,
            p_upper: p,
            exact: true,
            povm,
            fidelity: fid,
            angles: pairing.angles().to_vec(),
        });
    }
    let (p_lower, povm) = lower_bound_with_pairing(problem, &pairing)?;
    let p_upper = upper_bound(problem);
    let exact = (p_upper - p_lower).abs() <= 1e-9;
    Ok(DiscriminationReport {
        method: Method::GeneralBounds,
        p_lower,
        p_upper,
        exact,
        povm,
        fidelity: fid,
        angles: pairing.angles().to_vec(),
    })
}
