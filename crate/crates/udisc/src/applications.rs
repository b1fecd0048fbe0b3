//! Applications of the discrimination pipeline: comparing two unknown
//! pure states and filtering one target state out of a known set.

use crate::error::{Error, Result};
use crate::geometry::{build_problem, DiscriminationProblem};
use crate::linalg::{outer, CMatrix, CVector, C64};
use crate::solvers::{solve, DiscriminationReport};
use crate::states::{fidelity, DensityMatrix, Priors};

/// Decide whether two systems, each prepared in one of two known pure
/// states with equal odds, carry the same state or different ones.
#[derive(Debug, Clone)]
pub struct ComparisonProblem {
    psi1: CVector,
    psi2: CVector,
}

impl ComparisonProblem {
    /// Requires unit vectors of equal dimension that are not parallel.
    pub fn new(psi1: &CVector, psi2: &CVector) -> Result<Self> {
        if psi1.len() != psi2.len() {
            return Err(Error::DimensionMismatch(psi1.len(), psi2.len()));
        }
        let n1 = psi1.norm();
        if (n1 - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit(n1));
        }
        let n2 = psi2.norm();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnit(n2));
        }
        let psi1 = psi1 / C64::new(n1, 0.0);
        let psi2 = psi2 / C64::new(n2, 0.0);
        let overlap = (psi1.adjoint() * &psi2)[(0, 0)].norm();
        if overlap >= 1.0 - 1e-10 {
            return Err(Error::DegenerateStates(overlap));
        }
        Ok(Self { psi1, psi2 })
    }

    pub fn psi1(&self) -> &CVector {
        &self.psi1
    }

    pub fn psi2(&self) -> &CVector {
        &self.psi2
    }
}

/// Casts state comparison as discrimination of the "same" mixture
/// `(|ψ1ψ1⟩⟨·| + |ψ2ψ2⟩⟨·|)/2` against the "different" mixture
/// `(|ψ1ψ2⟩⟨·| + |ψ2ψ1⟩⟨·|)/2` on the tensor product space, with equal
/// priors. Reduction brings the problem down to the four-dimensional span
/// of the product states.
pub fn build_comparison(cp: &ComparisonProblem) -> Result<DiscriminationProblem> {
    let v11 = cp.psi1.kronecker(&cp.psi1);
    let v22 = cp.psi2.kronecker(&cp.psi2);
    let v12 = cp.psi1.kronecker(&cp.psi2);
    let v21 = cp.psi2.kronecker(&cp.psi1);
    let half = C64::new(0.5, 0.0);
    let rho0 = DensityMatrix::new(&((outer(&v11) + outer(&v22)) * half), 1e-10)?;
    let rho1 = DensityMatrix::new(&((outer(&v12) + outer(&v21)) * half), 1e-10)?;
    build_problem(&rho0, &rho1, Priors::equal())
}

/// Solves the comparison problem and checks that both bounds land on the
/// known optimum `1 - F(rho0, rho1)`, marking the report exact.
pub fn solve_comparison(cp: &ComparisonProblem) -> Result<DiscriminationReport> {
    let problem = build_comparison(cp)?;
    let mut report = solve(&problem)?;
    let expected = 1.0 - report.fidelity();
    let dev_lower = (report.p_lower() - expected).abs();
    let dev_upper = (report.p_upper() - expected).abs();
    if dev_lower > 1e-9 || dev_upper > 1e-9 {
        return Err(Error::Internal(format!(
            "comparison bounds missed 1 - F by ({dev_lower:.3e}, {dev_upper:.3e})"
        )));
    }
    report.set_exact(true);
    Ok(report)
}

/// Which regime the filtering optimum falls in, by the size of the scaled
/// fidelity `F·sqrt(p1/p0)` relative to `cos²θ` and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilteringBranch {
    /// Full weight on detecting the target.
    TargetSaturated,
    /// Both detection operators at interior weight.
    Interior,
    /// Full weight on detecting the alternatives.
    OthersSaturated,
}

/// Geometry extracted from a built filtering problem: the canonical angle
/// between the kernel of the alternatives' mixture and the target's
/// kernel, and the fidelity between the two hypotheses.
#[derive(Debug, Clone, Copy)]
pub struct FilteringGeometry {
    pub cos_theta: f64,
    pub f_tilde: f64,
    pub fidelity: f64,
    pub p0: f64,
    pub p1: f64,
    pub kernel1_rank: usize,
}

impl FilteringGeometry {
    pub fn branch(&self) -> FilteringBranch {
        if self.kernel1_rank == 0 || self.f_tilde > 1.0 {
            FilteringBranch::OthersSaturated
        } else if self.f_tilde <= self.cos_theta * self.cos_theta {
            FilteringBranch::TargetSaturated
        } else {
            FilteringBranch::Interior
        }
    }
}

/// Tell whether a system carries one known target state or any state from
/// a known alternative set.
#[derive(Debug, Clone)]
pub struct FilteringProblem {
    target: CVector,
    others: Vec<CVector>,
    etas: Vec<f64>,
}

impl FilteringProblem {
    /// Requires unit vectors of a common dimension and occurrence
    /// probabilities `etas` (target first) that are non-negative and sum
    /// to 1; the alternatives must exist and carry positive total weight.
    pub fn new(target: &CVector, others: &[CVector], etas: &[f64]) -> Result<Self> {
        if others.is_empty() {
            return Err(Error::EmptyOtherSet);
        }
        if etas.len() != others.len() + 1 {
            return Err(Error::DimensionMismatch(etas.len(), others.len() + 1));
        }
        let sum: f64 = etas.iter().sum();
        if etas.iter().any(|&e| e < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadPriors(etas[0], sum - etas[0]));
        }
        if sum - etas[0] <= 0.0 {
            return Err(Error::EmptyOtherSet);
        }
        let normalize = |v: &CVector| -> Result<CVector> {
            if v.len() != target.len() {
                return Err(Error::DimensionMismatch(v.len(), target.len()));
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::NotUnit(norm));
            }
            Ok(v / C64::new(norm, 0.0))
        };
        let target_n = normalize(&target.clone())?;
        let others_n = others.iter().map(|v| normalize(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self { target: target_n, others: others_n, etas: etas.to_vec() })
    }

    pub fn target(&self) -> &CVector {
        &self.target
    }

    pub fn others(&self) -> &[CVector] {
        &self.others
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }
}

/// Casts filtering as discrimination of the pure target against the
/// normalized mixture of the alternatives, with priors `(η1, 1 - η1)`,
/// and extracts the closed-form geometry from the reduced problem.
pub fn build_filtering(
    fp: &FilteringProblem,
) -> Result<(DiscriminationProblem, FilteringGeometry)> {
    let p0 = fp.etas[0];
    let p1 = 1.0 - p0;
    let rho0 = DensityMatrix::pure(&fp.target)?;
    let n = fp.target.len();
    let mut mix = CMatrix::zeros(n, n);
    for (v, &eta) in fp.others.iter().zip(&fp.etas[1..]) {
        mix += outer(v) * C64::new(eta / p1, 0.0);
    }
    let rho1 = DensityMatrix::new(&mix, 1e-10)?;
    let problem = build_problem(&rho0, &rho1, Priors::new(p0, p1)?)?;
    if problem.dim() < 2 {
        return Err(Error::DegenerateStates(1.0));
    }
    let pairing = problem.pairing();
    let kernel1_rank = problem.kernel1().rank();
    let cos_theta = if kernel1_rank == 0 { 0.0 } else { pairing.cosines()[0] };
    let f = fidelity(problem.rho0(), problem.rho1()).expect("dimensions match within a problem");
    let f_tilde = if p0 > 0.0 { f * (p1 / p0).sqrt() } else { f64::INFINITY };
    let geometry =
        FilteringGeometry { cos_theta, f_tilde, fidelity: f, p0, p1, kernel1_rank };
    Ok((problem, geometry))
}

/// Closed-form optimal success probability for filtering.
///
/// With `F̃ = F·sqrt(p1/p0)` and `θ` the angle between the alternatives'
/// kernel and the target's kernel:
///
/// ```text
/// F̃ ≤ cos²θ      →  1 - p0 cos²θ - p1 F²/cos²θ
/// cos²θ ≤ F̃ ≤ 1  →  1 - 2 sqrt(p0 p1) F
/// F̃ ≥ 1          →  p1 (1 - F²)
/// ```
///
/// When the alternatives' kernel vanishes in the reduced space (the target
/// lies inside their support) only the last branch applies.
pub fn filtering_closed_form(geometry: &FilteringGeometry) -> f64 {
    let FilteringGeometry { cos_theta: c, f_tilde, fidelity: f, p0, p1, kernel1_rank } = *geometry;
    if kernel1_rank == 0 {
        return p1 * (1.0 - f * f);
    }
    let c2 = c * c;
    if f_tilde <= c2 {
        let leak = if f == 0.0 { 0.0 } else { f * f / c2 };
        1.0 - p0 * c2 - p1 * leak
    } else if f_tilde <= 1.0 {
        1.0 - 2.0 * (p0 * p1).sqrt() * f
    } else {
        p1 * (1.0 - f * f)
    }
}
