//! Independent numerical maximizers used to cross-check the solvers: a
//! brute-force grid search for the rank-one problem and a block-coordinate
//! ascent with an interior-point polish over full measurement operators.
//!
//! Neither shares code with the closed forms; they only agree because the
//! mathematics does.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geometry::DiscriminationProblem;
use crate::linalg::{
    clamp_psd, complete_orthonormal, hermitian_part, max_eigenvalue, trace_re, CMatrix, C64,
};
use crate::random::{gaussian_hermitian, gaussian_matrix};
use crate::solvers::ThreeOutcomePOVM;

/// Largest reduced dimension the ascent oracle accepts.
pub const MAX_ORACLE_DIM: usize = 16;

const KICK_SIZE: f64 = 0.1;
const KICK_ROUNDS: usize = 8;
const SWEEP_TOL: f64 = 1e-13;

const BARRIER_MU: f64 = 10.0;
const BARRIER_GAP: f64 = 1e-9;
const NEWTON_TOL: f64 = 1e-11;
const MAX_NEWTON_PER_STAGE: usize = 60;

/// Tuning knobs for [`oracle_maximize`].
#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Base seed; restart `r` uses the stream seeded with `seed + r`.
    pub seed: u64,
    pub restarts: usize,
    /// Cap on block updates per restart.
    pub max_iterations: usize,
    /// Shrink factor applied to the kick size after every corner kick.
    pub step_decay: f64,
    /// Positivity margin the returned measurement is guaranteed to satisfy.
    pub feasibility_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 20,
            max_iterations: 5000,
            step_decay: 0.97,
            feasibility_tol: 1e-9,
        }
    }
}

/// Outcome of the ascent oracle.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub p_star: f64,
    pub povm: ThreeOutcomePOVM,
    /// Total block updates across all restarts, plus the Newton steps of the
    /// interior-point polish when it ran.
    pub iterations_used: usize,
    /// True when every restart ran out of kicks before its update budget and
    /// the interior-point polish, when it ran, reached its gap target.
    pub converged: bool,
}

/// Largest `M` in the positive-semidefinite order with `Y M Yᴴ ⪯ T`, for
/// `T ⪰ 0` and `[Y | Yc]` unitary: the Schur complement of the complement
/// block, `Yᴴ T Y − (Yᴴ T Yc)(Ycᴴ T Yc)⁺(Yᴴ T Yc)ᴴ`.
fn largest_room(t: &CMatrix, y: &CMatrix, yc: &CMatrix) -> CMatrix {
    let a = y.adjoint() * t * y;
    if yc.ncols() == 0 {
        return clamp_psd(&a);
    }
    let b = y.adjoint() * t * yc;
    let c = hermitian_part(&(yc.adjoint() * t * yc));
    let eig = c.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = 1e-12 * lam_max.max(f64::MIN_POSITIVE);
    let mut pinv = CMatrix::zeros(yc.ncols(), yc.ncols());
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > cutoff {
            let v = eig.eigenvectors.column(i).into_owned();
            pinv += &v * v.adjoint() / C64::new(lam, 0.0);
        }
    }
    clamp_psd(&(a - &b * pinv * b.adjoint()))
}

/// Orthonormal basis of the s×s Hermitian matrices under the trace inner
/// product: diagonal units first, then the symmetric and antisymmetric
/// off-diagonal pairs in row-major order.
fn hermitian_basis(s: usize) -> Vec<CMatrix> {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(s * s);
    for i in 0..s {
        let mut m = CMatrix::zeros(s, s);
        m[(i, i)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    for i in 0..s {
        for j in (i + 1)..s {
            let mut m = CMatrix::zeros(s, s);
            m[(i, j)] = C64::new(w, 0.0);
            m[(j, i)] = C64::new(w, 0.0);
            basis.push(m);
            let mut m = CMatrix::zeros(s, s);
            m[(i, j)] = C64::new(0.0, w);
            m[(j, i)] = C64::new(0.0, -w);
            basis.push(m);
        }
    }
    basis
}

/// Inverse and log-determinant of a Hermitian matrix via its Cholesky
/// factorization; `None` when it is not positive definite, which doubles as
/// the strict feasibility test.
///
/// The complex Cholesky factors indefinite Hermitian matrices too, by
/// taking complex square roots, so definiteness is checked on the pivots:
/// for Hermitian input they are real and positive exactly when the leading
/// principal minors are.
fn cholesky_logdet(m: &CMatrix) -> Option<(CMatrix, f64)> {
    let chol = m.clone().cholesky()?;
    let mut logdet = 0.0;
    for i in 0..m.nrows() {
        let d = chol.l_dirty()[(i, i)];
        if !(d.re > 0.0 && d.im.abs() <= 1e-8 * d.re) {
            return None;
        }
        logdet += 2.0 * d.re.ln();
    }
    Some((chol.inverse(), logdet))
}

struct BarrierPolish {
    value: f64,
    m0: CMatrix,
    m1: CMatrix,
    newton_steps: usize,
    reached_gap: bool,
}

/// Maximizes `Tr(G0 M0) + Tr(G1 M1)` over `M0, M1 ⪰ 0` with
/// `L0 M0 L0ᴴ + L1 M1 L1ᴴ ⪯ I` (isometries `L_b`) by a logarithmic-barrier
/// interior-point method from a deterministic strictly feasible start.
///
/// The blocks and the failure operator carry the barrier `−logdet M0 −
/// logdet M1 − logdet S`; each stage centers `−t·(objective) + barrier` by
/// damped Newton over real coordinates in a Hermitian basis, and `t` grows
/// geometrically until the certified gap `ν/t` falls below the target.
/// Blockwise-optimal corners that the coordinate sweep cannot leave are
/// plain central-path limits here, so the polish resolves them without
/// randomness.
fn barrier_polish(g0: &CMatrix, l0: &CMatrix, g1: &CMatrix, l1: &CMatrix) -> BarrierPolish {
    let n = l0.nrows();
    let (s0, s1) = (l0.ncols(), l1.ncols());
    let basis0 = hermitian_basis(s0);
    let basis1 = hermitian_basis(s1);
    let m = basis0.len() + basis1.len();
    let nu = (s0 + s1 + n) as f64;

    let mut coeff = vec![0.0f64; m];
    let mut lifted: Vec<CMatrix> = Vec::with_capacity(m);
    for (k, h) in basis0.iter().enumerate() {
        coeff[k] = trace_re(&(g0 * h));
        lifted.push(l0 * h * l0.adjoint());
    }
    for (k, h) in basis1.iter().enumerate() {
        coeff[basis0.len() + k] = trace_re(&(g1 * h));
        lifted.push(l1 * h * l1.adjoint());
    }

    let assemble = |x: &[f64]| -> (CMatrix, CMatrix, CMatrix) {
        let mut m0 = CMatrix::zeros(s0, s0);
        for (k, h) in basis0.iter().enumerate() {
            m0 += h * C64::new(x[k], 0.0);
        }
        let mut m1 = CMatrix::zeros(s1, s1);
        for (k, h) in basis1.iter().enumerate() {
            m1 += h * C64::new(x[basis0.len() + k], 0.0);
        }
        let mut s = CMatrix::identity(n, n);
        s -= l0 * &m0 * l0.adjoint();
        s -= l1 * &m1 * l1.adjoint();
        (m0, m1, s)
    };
    let objective = |x: &[f64]| -> f64 { coeff.iter().zip(x).map(|(c, v)| c * v).sum() };
    // Inverses of the three constraint blocks plus the barrier value, or
    // `None` outside the strictly feasible region.
    let barrier_state = |x: &[f64]| -> Option<(CMatrix, CMatrix, CMatrix, f64)> {
        let (m0, m1, s) = assemble(x);
        let (inv0, d0) = cholesky_logdet(&m0)?;
        let (inv1, d1) = cholesky_logdet(&m1)?;
        let (invs, ds) = cholesky_logdet(&s)?;
        Some((inv0, inv1, invs, -(d0 + d1 + ds)))
    };

    // M0 = M1 = I/4 keeps the failure operator at or above I/2.
    let mut x = vec![0.0f64; m];
    for k in 0..s0 {
        x[k] = 0.25;
    }
    for k in 0..s1 {
        x[basis0.len() + k] = 0.25;
    }
    let mut state = barrier_state(&x).expect("start point is strictly feasible");
    let mut t = 1.0f64;
    let mut newton_steps = 0usize;
    let mut reached_gap = false;

    'stages: loop {
        for _ in 0..MAX_NEWTON_PER_STAGE {
            let (inv0, inv1, invs, barrier) = &state;
            let mut wm: Vec<CMatrix> = Vec::with_capacity(m);
            for h in &basis0 {
                wm.push(inv0 * h);
            }
            for h in &basis1 {
                wm.push(inv1 * h);
            }
            let ws: Vec<CMatrix> = lifted.iter().map(|a| invs * a).collect();
            let mut grad = DVector::<f64>::zeros(m);
            for k in 0..m {
                grad[k] = -t * coeff[k] - trace_re(&wm[k]) + trace_re(&ws[k]);
            }
            let mut hess = DMatrix::<f64>::zeros(m, m);
            for k in 0..m {
                for l in k..m {
                    let mut v = trace_re(&(&ws[k] * &ws[l]));
                    if (k < basis0.len()) == (l < basis0.len()) {
                        v += trace_re(&(&wm[k] * &wm[l]));
                    }
                    hess[(k, l)] = v;
                    hess[(l, k)] = v;
                }
            }
            let neg_grad = -&grad;
            let delta = hess
                .clone()
                .cholesky()
                .map(|c| c.solve(&neg_grad))
                .or_else(|| hess.lu().solve(&neg_grad));
            let Some(delta) = delta else { break 'stages };
            let lambda2 = -grad.dot(&delta);
            if lambda2 / 2.0 <= NEWTON_TOL {
                break;
            }
            let current = -t * objective(&x) + barrier;
            let mut step = 1.0f64;
            let mut accepted = false;
            while step >= 1e-30 {
                let trial: Vec<f64> =
                    x.iter().zip(delta.iter()).map(|(v, d)| v + step * d).collect();
                if let Some(next) = barrier_state(&trial) {
                    if -t * objective(&trial) + next.3 <= current - 0.25 * step * lambda2 {
                        x = trial;
                        state = next;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            newton_steps += 1;
            if !accepted {
                break 'stages;
            }
        }
        if nu / t <= BARRIER_GAP {
            reached_gap = true;
            break;
        }
        t *= BARRIER_MU;
    }

    let (m0, m1, _) = assemble(&x);
    BarrierPolish { value: objective(&x), m0, m1, newton_steps, reached_gap }
}

/// Maximizes the success probability over zero-error measurements by
/// block-coordinate ascent with random restarts.
///
/// The conclusive elements are parameterized as `E0 = Y1 M0 Y1ᴴ` and
/// `E1 = Y0 M1 Y0ᴴ` with `Y_b` the kernel bases, which enforces the
/// zero-error constraints exactly and leaves a linear objective
/// `Tr(G0 M0) + Tr(G1 M1)` over positive blocks, with `G0 = p0 Y1ᴴ rho0 Y1`
/// and `G1 = p1 Y0ᴴ rho1 Y0` both positive. The objective is therefore
/// monotone in each block, so with one block held fixed the other's optimum
/// is the largest operator the constraint `E0 + E1 ⪯ I` admits, which
/// [`largest_room`] computes in closed form. Each restart alternates these
/// two exact updates until the value stops moving, then applies a few
/// random Hermitian kicks of decaying size to escape blockwise-optimal
/// corners, re-running the sweep after every kick.
///
/// When one block is a scalar the sweep is followed by an exact
/// golden-section search over that scalar; when both blocks are larger the
/// sweep is followed by [`barrier_polish`], whose certified gap covers the
/// corners coordinate ascent cannot leave. The best value found by any
/// stage wins.
pub fn oracle_maximize(
    problem: &DiscriminationProblem,
    config: &OracleConfig,
) -> Result<OracleResult> {
    if !problem.is_reduced() {
        return Err(Error::NotReduced);
    }
    let n = problem.dim();
    if n > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge(n, MAX_ORACLE_DIM));
    }
    let y0 = problem.kernel0().basis().clone();
    let y1 = problem.kernel1().basis().clone();
    let (r0, r1) = (y0.ncols(), y1.ncols());
    if r0 == 0 && r1 == 0 {
        let zero = CMatrix::zeros(n, n);
        return Ok(OracleResult {
            p_star: 0.0,
            povm: ThreeOutcomePOVM::new(zero.clone(), zero),
            iterations_used: 0,
            converged: true,
        });
    }
    let y0c = complete_orthonormal(&y0).columns(r0, n - r0).into_owned();
    let y1c = complete_orthonormal(&y1).columns(r1, n - r1).into_owned();

    let g0 = y1.adjoint() * problem.rho0().matrix() * &y1 * C64::new(problem.priors().p0(), 0.0);
    let g1 = y0.adjoint() * problem.rho1().matrix() * &y0 * C64::new(problem.priors().p1(), 0.0);

    let e0_of = |m0: &CMatrix| {
        if r1 > 0 {
            &y1 * m0 * y1.adjoint()
        } else {
            CMatrix::zeros(n, n)
        }
    };
    let e1_of = |m1: &CMatrix| {
        if r0 > 0 {
            &y0 * m1 * y0.adjoint()
        } else {
            CMatrix::zeros(n, n)
        }
    };
    let objective =
        |m0: &CMatrix, m1: &CMatrix| trace_re(&(&g0 * m0)) + trace_re(&(&g1 * m1));
    let rescale = |m0: CMatrix, m1: CMatrix| -> (CMatrix, CMatrix) {
        let lam = max_eigenvalue(&(e0_of(&m0) + e1_of(&m1)));
        if lam > 1.0 {
            let s = C64::new(1.0 / lam, 0.0);
            (m0 * s, m1 * s)
        } else {
            (m0, m1)
        }
    };

    let id = CMatrix::identity(n, n);
    let updates_per_sweep = usize::from(r0 > 0) + usize::from(r1 > 0);
    let mut best: Option<(f64, CMatrix, CMatrix)> = None;
    let mut total_updates = 0;
    let mut all_converged = true;

    // When one block is a scalar `alpha`, the other block's optimum given
    // `alpha` is closed-form and the value as a function of `alpha` is
    // concave (a partial maximization of a linear objective over a convex
    // set), so a golden-section search over `alpha ∈ [0, 1]` finds the
    // global optimum directly.
    if r1 == 1 || r0 == 1 {
        let scalar_is_block0 = r1 == 1;
        let (ys, yo, yoc) = if scalar_is_block0 { (&y1, &y0, &y0c) } else { (&y0, &y1, &y1c) };
        let gs = if scalar_is_block0 { g0[(0, 0)].re } else { g1[(0, 0)].re };
        let go = if scalar_is_block0 { &g1 } else { &g0 };
        let es_unit = ys * ys.adjoint();
        let mut eval = |alpha: f64| -> (f64, CMatrix, CMatrix) {
            total_updates += 1;
            let ms = CMatrix::from_element(1, 1, C64::new(alpha, 0.0));
            let mo = largest_room(&(&id - &es_unit * C64::new(alpha, 0.0)), yo, yoc);
            let v = alpha * gs + trace_re(&(go * &mo));
            if scalar_is_block0 {
                (v, ms, mo)
            } else {
                (v, mo, ms)
            }
        };
        let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let mut fc = eval(c);
        let mut fd = eval(d);
        let mut incumbent = if fc.0 >= fd.0 { fc.clone() } else { fd.clone() };
        for _ in 0..90 {
            if fc.0 >= fd.0 {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = eval(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = eval(d);
            }
            let better = if fc.0 >= fd.0 { &fc } else { &fd };
            if better.0 > incumbent.0 {
                incumbent = better.clone();
            }
        }
        for corner in [0.0, 1.0] {
            let f = eval(corner);
            if f.0 > incumbent.0 {
                incumbent = f;
            }
        }
        best = Some(incumbent);
    }

    for restart in 0..config.restarts.max(1) {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
        let (mut m0, mut m1) = if restart == 0 {
            (CMatrix::zeros(r1, r1), CMatrix::zeros(r0, r0))
        } else {
            let w0 = gaussian_matrix(r1, r1, &mut rng);
            let w1 = gaussian_matrix(r0, r0, &mut rng);
            rescale(&w0 * w0.adjoint(), &w1 * w1.adjoint())
        };
        let mut value = objective(&m0, &m1);
        let mut best_here = (value, m0.clone(), m1.clone());
        let mut step = KICK_SIZE;
        let mut kicks_left = KICK_ROUNDS;
        let mut updates = 0usize;
        let mut converged = false;

        while updates < config.max_iterations {
            if restart % 2 == 0 {
                if r1 > 0 {
                    m0 = largest_room(&(&id - e1_of(&m1)), &y1, &y1c);
                }
                if r0 > 0 {
                    m1 = largest_room(&(&id - e0_of(&m0)), &y0, &y0c);
                }
            } else {
                if r0 > 0 {
                    m1 = largest_room(&(&id - e0_of(&m0)), &y0, &y0c);
                }
                if r1 > 0 {
                    m0 = largest_room(&(&id - e1_of(&m1)), &y1, &y1c);
                }
            }
            updates += updates_per_sweep;
            let new_value = objective(&m0, &m1);
            if new_value > best_here.0 {
                best_here = (new_value, m0.clone(), m1.clone());
            }
            if new_value - value <= SWEEP_TOL {
                if kicks_left == 0 {
                    converged = true;
                    break;
                }
                kicks_left -= 1;
                let h0 = gaussian_hermitian(r1, &mut rng);
                let h1 = gaussian_hermitian(r0, &mut rng);
                let norm = (h0.norm().powi(2) + h1.norm().powi(2)).sqrt().max(1e-300);
                let s = C64::new(step / norm, 0.0);
                let kicked = rescale(clamp_psd(&(&m0 + h0 * s)), clamp_psd(&(&m1 + h1 * s)));
                m0 = kicked.0;
                m1 = kicked.1;
                step *= config.step_decay;
                value = objective(&m0, &m1);
            } else {
                value = new_value;
            }
        }
        total_updates += updates;
        all_converged &= converged;
        if best.as_ref().is_none_or(|(bv, _, _)| best_here.0 > *bv) {
            best = Some(best_here);
        }
    }

    if r0 >= 2 && r1 >= 2 {
        let polish = barrier_polish(&g0, &y1, &g1, &y0);
        total_updates += polish.newton_steps;
        all_converged &= polish.reached_gap;
        if best.as_ref().is_none_or(|(bv, _, _)| polish.value > *bv) {
            best = Some((polish.value, polish.m0, polish.m1));
        }
    }

    let (p_star, m0, m1) = best.expect("at least one restart ran");
    let (m0, m1) = rescale(m0, m1);
    let povm = ThreeOutcomePOVM::new(e0_of(&m0), e1_of(&m1));
    debug_assert!(
        crate::linalg::min_eigenvalue(povm.e_fail()).unwrap_or(0.0) >= -config.feasibility_tol
    );
    Ok(OracleResult { p_star, povm, iterations_used: total_updates, converged: all_converged })
}

/// Brute-force reference for the rank-one problem: scans detection weights
/// on a uniform grid of spacing `step` and returns the best feasible value
/// of `alpha·A0 + beta·A1`.
///
/// The feasibility boundary `(alpha + beta + sqrt((alpha-beta)² +
/// 4 alpha beta cos²θ)) / 2 ≤ 1` is monotone in each weight, so for each
/// `alpha` the largest feasible `beta` is found by bisection over the
/// grid; the result equals the full two-dimensional scan. The returned
/// value sits within `(A0 + A1)·step` of the true optimum.
pub fn grid_oracle_1d(a0: f64, a1: f64, cos_theta: f64, step: f64) -> f64 {
    assert!(step > 0.0 && step <= 0.01, "step must lie in (0, 0.01]");
    assert!((0.0..=1.0).contains(&cos_theta), "cos(theta) must lie in [0, 1]");
    let c2 = cos_theta * cos_theta;
    let lhs = |alpha: f64, beta: f64| {
        0.5 * (alpha + beta + ((alpha - beta).powi(2) + 4.0 * alpha * beta * c2).sqrt())
    };
    let n = (1.0 / step).floor() as usize;
    let mut best = 0.0f64;
    for i in 0..=n {
        let alpha = i as f64 * step;
        let mut lo = 0usize;
        let mut hi = n;
        if lhs(alpha, n as f64 * step) <= 1.0 + 1e-12 {
            lo = n;
        } else {
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if lhs(alpha, mid as f64 * step) <= 1.0 + 1e-12 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        best = best.max(alpha * a0 + lo as f64 * step * a1);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_problem;
    use crate::solvers::solve_1d;
    use crate::states::{DensityMatrix, Priors};
    use nalgebra::DVector;

    fn diag_state(entries: &[f64]) -> DensityMatrix {
        let m = CMatrix::from_diagonal(&DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ));
        DensityMatrix::new(&m, 1e-10).unwrap()
    }

    fn small_config(seed: u64) -> OracleConfig {
        OracleConfig { seed, restarts: 6, max_iterations: 2000, ..OracleConfig::default() }
    }

    #[test]
    fn grid_matches_interior_closed_form() {
        let exact = solve_1d(0.4, 0.1, 0.3).unwrap().p_success;
        let grid = grid_oracle_1d(0.4, 0.1, 0.3, 1e-3);
        assert!((exact - grid).abs() <= 5e-3 * (0.4 + 0.1) + 1e-12);
        assert!(grid <= exact + 1e-9);
    }

    #[test]
    fn grid_matches_saturated_closed_form() {
        let exact = solve_1d(0.4, 0.1, 0.8).unwrap().p_success;
        let grid = grid_oracle_1d(0.4, 0.1, 0.8, 1e-3);
        assert!((exact - grid).abs() <= 5e-3 * (0.4 + 0.1) + 1e-12);
    }

    #[test]
    fn grid_orthogonal_directions_hit_the_corner() {
        let grid = grid_oracle_1d(0.25, 0.25, 0.0, 1e-3);
        assert!((grid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oracle_confirms_orthogonal_kernel_solution() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let rho1 = diag_state(&[0.0, 0.5, 0.5]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let result = oracle_maximize(&problem, &small_config(5)).unwrap();
        assert!((result.p_star - 0.5).abs() < 1e-4, "oracle found {}", result.p_star);
        result.povm.validate(problem.rho0(), problem.rho1()).unwrap();
    }

    #[test]
    fn oracle_confirms_one_dim_kernel_solution() {
        use crate::linalg::outer;
        use crate::CVector;
        let c = |re: f64, im: f64| C64::new(re, im);
        let psi0 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let cos: f64 = 0.45;
        let sin = (1.0 - cos * cos).sqrt();
        let psi1 = CVector::from_vec(vec![c(cos, 0.0), c(sin, 0.0)]);
        let rho0 = DensityMatrix::new(&outer(&psi0), 1e-10).unwrap();
        let rho1 = DensityMatrix::new(&outer(&psi1), 1e-10).unwrap();
        let problem = build_problem(&rho0, &rho1, Priors::new(0.35, 0.65).unwrap()).unwrap();
        let expected = crate::solvers::solve(&problem).unwrap().p_lower();
        let result = oracle_maximize(&problem, &small_config(9)).unwrap();
        assert!(
            (result.p_star - expected).abs() < 1e-4,
            "oracle {} vs exact {}",
            result.p_star,
            expected
        );
    }

    #[test]
    fn oracle_reaches_the_exact_value_when_one_kernel_is_a_line() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let rho0 = crate::random::random_density(3, 1, &mut rng);
        let rho1 = crate::random::random_density(3, 2, &mut rng);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let report = crate::solvers::solve(&problem).unwrap();
        assert!(report.exact(), "this instance has coinciding bounds");
        let result = oracle_maximize(&problem, &small_config(0)).unwrap();
        assert!(
            result.p_star >= report.p_lower() - 1e-9,
            "oracle {} fell below the exact value {}",
            result.p_star,
            report.p_lower()
        );
        assert!(result.p_star <= report.p_upper() + 1e-9);
        result.povm.validate(problem.rho0(), problem.rho1()).unwrap();
    }

    #[test]
    fn oracle_reaches_the_lower_bound_on_rank_two_kernels() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(303);
        for trial in 0..3 {
            let rho0 = crate::random::random_density(4, 2, &mut rng);
            let rho1 = crate::random::random_density(4, 2, &mut rng);
            let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
            let report = crate::solvers::solve(&problem).unwrap();
            let result = oracle_maximize(&problem, &small_config(trial)).unwrap();
            assert!(
                result.p_star >= report.p_lower() - 1e-7,
                "trial {trial}: oracle {} fell below the lower bound {}",
                result.p_star,
                report.p_lower()
            );
            assert!(result.p_star <= report.p_upper() + 1e-7);
            result.povm.validate(problem.rho0(), problem.rho1()).unwrap();
        }
    }

    #[test]
    fn oracle_is_deterministic() {
        let rho0 = diag_state(&[0.5, 0.5, 0.0]);
        let rho1 = diag_state(&[0.0, 0.5, 0.5]);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let a = oracle_maximize(&problem, &small_config(123)).unwrap();
        let b = oracle_maximize(&problem, &small_config(123)).unwrap();
        assert_eq!(a.p_star.to_bits(), b.p_star.to_bits());
        assert_eq!(a.iterations_used, b.iterations_used);
        for (x, y) in a.povm.e0().iter().zip(b.povm.e0().iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn oracle_rejects_large_dimensions() {
        let entries = vec![1.0 / 17.0; 17];
        let rho = diag_state(&entries);
        let problem = build_problem(&rho, &rho.clone(), Priors::equal()).unwrap();
        assert!(matches!(
            oracle_maximize(&problem, &OracleConfig::default()),
            Err(Error::DimensionTooLarge(17, MAX_ORACLE_DIM))
        ));
    }

    #[test]
    fn oracle_handles_empty_kernels() {
        let rho = diag_state(&[0.5, 0.5]);
        let problem = build_problem(&rho, &rho.clone(), Priors::equal()).unwrap();
        let result = oracle_maximize(&problem, &small_config(1)).unwrap();
        assert_eq!(result.p_star, 0.0);
        assert!(result.converged);
    }
}
