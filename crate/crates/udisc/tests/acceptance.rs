//! Acceptance gate: one test per shipped guarantee, each printing a
//! `ACCEPTANCE <n> <name>: PASS (<metrics>)` line (visible with
//! `--nocapture`) and failing loudly when the guarantee does not hold.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use udisc::cli::{cmd_random, RandomSpec};
use udisc::linalg::{max_abs_diff, outer, trace_re};
use udisc::random::{random_density, random_simplex, random_unit_vector};
use udisc::{
    build_comparison, build_filtering, build_problem, filtering_closed_form, grid_oracle_1d,
    min_eigenvalue, oracle_maximize, solve, solve_1d, solve_comparison, Branch, CMatrix, CVector,
    ComparisonProblem, DensityMatrix, FilteringBranch, FilteringProblem, OracleConfig, Priors,
    ThreeOutcomePOVM, C64,
};

fn pure_closed_form(p0: f64, p1: f64, cos: f64) -> f64 {
    let (pmin, pmax) = (p0.min(p1), p0.max(p1));
    if cos < (pmin / pmax).sqrt() {
        1.0 - 2.0 * (p0 * p1).sqrt() * cos
    } else {
        pmax * (1.0 - cos * cos)
    }
}

fn check_povm(povm: &ThreeOutcomePOVM, rho0: &DensityMatrix, rho1: &DensityMatrix) {
    for e in [povm.e0(), povm.e1(), povm.e_fail()] {
        assert!(min_eigenvalue(e).unwrap() >= -1e-9, "operator not positive");
    }
    let n = povm.dim();
    let sum = povm.e0() + povm.e1() + povm.e_fail();
    assert!(max_abs_diff(&sum, &CMatrix::identity(n, n)) <= 1e-9, "not complete");
    assert!(trace_re(&(rho1.matrix() * povm.e0())).abs() <= 1e-9, "E0 leaks");
    assert!(trace_re(&(rho0.matrix() * povm.e1())).abs() <= 1e-9, "E1 leaks");
}

#[test]
fn acceptance_1_pure_state_regressions() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    for i in 0..500 {
        let dim = 2 + i % 4;
        let psi0 = random_unit_vector(dim, &mut rng);
        let psi1 = random_unit_vector(dim, &mut rng);
        let equal_priors = i % 3 == 0;
        let p0 = if equal_priors { 0.5 } else { rng.random_range(0.05..0.95) };
        let priors = Priors::new(p0, 1.0 - p0).unwrap();
        let cos = (psi0.adjoint() * &psi1)[(0, 0)].norm().clamp(0.0, 1.0);

        let rho0 = DensityMatrix::new(&outer(&psi0), 1e-10).unwrap();
        let rho1 = DensityMatrix::new(&outer(&psi1), 1e-10).unwrap();
        let problem = build_problem(&rho0, &rho1, priors).unwrap();
        let report = solve(&problem).unwrap();

        let expected = pure_closed_form(p0, 1.0 - p0, cos);
        let dev = (report.p_lower() - expected).abs();
        assert!(dev <= 1e-9, "instance {i}: solve gave {} vs closed form {expected}", report.p_lower());
        assert!((report.p_upper() - expected).abs() <= 1e-9, "instance {i}: upper bound off");
        if equal_priors {
            assert!(
                (report.p_lower() - (1.0 - cos)).abs() <= 1e-9,
                "instance {i}: equal priors must give 1 - cos"
            );
        }
        check_povm(report.povm(), problem.rho0(), problem.rho1());
        worst = worst.max(dev);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 5.0, "took {elapsed:?}, limit 5 s");
    println!(
        "ACCEPTANCE 1 pure-state regressions: PASS (500 instances, worst deviation {worst:.2e}, {elapsed:?})"
    );
}

#[test]
fn acceptance_2_rank1_solver_vs_grid_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let step = 1e-4;
    let mut interior = 0usize;
    let mut saturated = 0usize;
    let mut worst = 0.0_f64;
    let mut triples: Vec<(f64, f64, f64)> = vec![(0.4, 0.1, 0.3), (0.4, 0.1, 0.8)];
    for _ in 0..198 {
        triples.push((
            rng.random_range(0.01..0.5),
            rng.random_range(0.01..0.5),
            rng.random_range(0.0..0.999),
        ));
    }
    for &(a0, a1, cos) in &triples {
        let sol = solve_1d(a0, a1, cos).unwrap();
        let grid = grid_oracle_1d(a0, a1, cos, step);
        let dev = (sol.p_success - grid).abs();
        assert!(dev <= 5.0 * step, "({a0}, {a1}, {cos}): solver {} vs grid {grid}", sol.p_success);
        match sol.branch {
            Branch::Interior => interior += 1,
            Branch::Saturated => saturated += 1,
        }
        worst = worst.max(dev);
    }
    assert!(interior > 0 && saturated > 0, "both branches must be exercised");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 30.0, "took {elapsed:?}, limit 30 s");
    println!(
        "ACCEPTANCE 2 rank-1 solver vs grid oracle: PASS (200 triples, {interior} interior / {saturated} saturated, worst deviation {worst:.2e}, {elapsed:?})"
    );
}

#[test]
fn acceptance_3_bound_bracketing() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    let mut gaps = Vec::with_capacity(100);
    for i in 0..100u64 {
        let rho0 = random_density(4, 2, &mut rng);
        let rho1 = random_density(4, 2, &mut rng);
        let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
        let report = solve(&problem).unwrap();
        let config = OracleConfig { seed: i, ..OracleConfig::default() };
        let result = oracle_maximize(&problem, &config).unwrap();
        assert!(
            result.p_star >= report.p_lower() - 1e-6,
            "instance {i}: oracle {} fell below lower bound {}",
            result.p_star,
            report.p_lower()
        );
        assert!(
            result.p_star <= report.p_upper() + 1e-6,
            "instance {i}: oracle {} exceeded upper bound {}",
            result.p_star,
            report.p_upper()
        );
        let lifted = result.povm.lift(problem.embedding());
        check_povm(&lifted, &rho0, &rho1);
        gaps.push(report.p_upper() - report.p_lower());
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let max = gaps.iter().cloned().fold(0.0, f64::max);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 300.0, "took {elapsed:?}, limit 5 min");
    println!(
        "ACCEPTANCE 3 bound bracketing: PASS (100 rank-2 dim-4 instances, mean gap {mean:.3e}, max gap {max:.3e}, {elapsed:?})"
    );
}

#[test]
fn acceptance_4_povm_validity_suite() {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    let mut checked = 0usize;
    for i in 0..25 {
        let dim = 3 + i % 3;
        let rank0 = 1 + i % 3;
        let rank1 = 1 + (i / 2) % 3;
        let rho0 = random_density(dim, rank0.min(dim), &mut rng);
        let rho1 = random_density(dim, rank1.min(dim), &mut rng);
        let p0 = rng.random_range(0.1..0.9);
        let problem = build_problem(&rho0, &rho1, Priors::new(p0, 1.0 - p0).unwrap()).unwrap();

        let report = solve(&problem).unwrap();
        check_povm(report.povm(), problem.rho0(), problem.rho1());
        check_povm(&report.povm().lift(problem.embedding()), &rho0, &rho1);
        checked += 2;

        if problem.dim() <= 6 {
            let config = OracleConfig { seed: i as u64, restarts: 8, ..OracleConfig::default() };
            let result = oracle_maximize(&problem, &config).unwrap();
            check_povm(&result.povm, problem.rho0(), problem.rho1());
            checked += 1;
        }
    }
    println!("ACCEPTANCE 4 POVM validity suite: PASS ({checked} measurements validated)");
}

#[test]
fn acceptance_5_state_comparison() {
    let mut rng = ChaCha12Rng::seed_from_u64(505);
    for i in 0..100 {
        let dim = 2 + i % 2;
        let psi1 = random_unit_vector(dim, &mut rng);
        let psi2 = random_unit_vector(dim, &mut rng);
        let cp = match ComparisonProblem::new(&psi1, &psi2) {
            Ok(cp) => cp,
            Err(_) => continue,
        };
        let report = solve_comparison(&cp).unwrap();
        let expected = 1.0 - report.fidelity();
        assert!((report.p_lower() - expected).abs() <= 1e-9, "instance {i}: lower off");
        assert!((report.p_upper() - expected).abs() <= 1e-9, "instance {i}: upper off");
        assert!(report.exact());

        let problem = build_comparison(&cp).unwrap();
        let has_right_angle = problem
            .pairing()
            .angles()
            .iter()
            .any(|&t| (t - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
        assert!(has_right_angle, "instance {i}: no exact right angle in the pairing");
    }
    println!("ACCEPTANCE 5 state comparison: PASS (100 pairs, bounds coincide with 1 - F)");
}

#[test]
fn acceptance_6_state_filtering() {
    let mut rng = ChaCha12Rng::seed_from_u64(606);
    let e = |dim: usize, k: usize| {
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        v
    };
    let sq = std::f64::consts::FRAC_1_SQRT_2;
    let mix = CVector::from_vec(vec![C64::new(sq, 0.0), C64::new(sq, 0.0), C64::new(0.0, 0.0)]);

    // Three crafted instances pin one branch each; the rest are random.
    let mut instances: Vec<(CVector, Vec<CVector>, Vec<f64>)> = vec![
        (e(3, 0), vec![e(3, 1), e(3, 2)], vec![0.5, 0.25, 0.25]),
        (mix.clone(), vec![e(3, 1), e(3, 2)], vec![0.3, 0.35, 0.35]),
        (mix, vec![e(3, 1), e(3, 2)], vec![0.01, 0.495, 0.495]),
    ];
    for i in 0..97 {
        let dim = 3 + i % 3;
        let count = 1 + i % 4;
        let target = random_unit_vector(dim, &mut rng);
        let others: Vec<CVector> = (0..count).map(|_| random_unit_vector(dim, &mut rng)).collect();
        let etas = random_simplex(count + 1, &mut rng);
        instances.push((target, others, etas));
    }

    let mut seen = [false; 3];
    for (i, (target, others, etas)) in instances.iter().enumerate() {
        let fp = FilteringProblem::new(target, others, etas).unwrap();
        let (problem, geometry) = build_filtering(&fp).unwrap();
        let report = solve(&problem).unwrap();
        let closed = filtering_closed_form(&geometry);
        assert!(
            (closed - report.p_lower()).abs() <= 1e-9,
            "instance {i}: closed form {closed} vs pipeline {}",
            report.p_lower()
        );
        seen[match geometry.branch() {
            FilteringBranch::TargetSaturated => 0,
            FilteringBranch::Interior => 1,
            FilteringBranch::OthersSaturated => 2,
        }] = true;

        // Ensemble independence: re-express the alternatives' mixture
        // through its eigenvectors and demand the same optimum.
        if i % 10 == 0 {
            let p1 = geometry.p1;
            let mut mixture = CMatrix::zeros(target.len(), target.len());
            for (other, &eta) in others.iter().zip(&etas[1..]) {
                mixture += outer(other) * C64::new(eta / p1, 0.0);
            }
            let rho1 = DensityMatrix::new(&mixture, 1e-10).unwrap();
            let mut alt_others = Vec::new();
            let mut alt_etas = vec![etas[0]];
            for (k, &lam) in rho1.eigenvalues().iter().enumerate() {
                if lam > 1e-12 {
                    alt_others.push(rho1.eigenvectors().column(k).into_owned());
                    alt_etas.push(p1 * lam);
                }
            }
            let alt = FilteringProblem::new(target, &alt_others, &alt_etas).unwrap();
            let (_, alt_geometry) = build_filtering(&alt).unwrap();
            let alt_closed = filtering_closed_form(&alt_geometry);
            assert!(
                (closed - alt_closed).abs() <= 1e-9,
                "instance {i}: ensembles disagree ({closed} vs {alt_closed})"
            );
        }
    }
    assert!(seen.iter().all(|&s| s), "all three branches must appear: {seen:?}");
    println!("ACCEPTANCE 6 state filtering: PASS (100 instances, all branches hit, ensemble independent)");
}

#[test]
fn acceptance_7_orthogonal_kernel_exactness() {
    let z = |x: f64| C64::new(x, 0.0);
    let d3 = |a: f64, b: f64, c: f64| {
        DensityMatrix::new(
            &CMatrix::from_partial_diagonal(3, 3, &[z(a), z(b), z(c)]),
            1e-10,
        )
        .unwrap()
    };
    let rho0 = d3(0.5, 0.5, 0.0);
    let rho1 = d3(0.0, 0.5, 0.5);
    let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
    let report = solve(&problem).unwrap();
    assert!((report.p_lower() - 0.5).abs() <= 1e-12, "exact value missed: {}", report.p_lower());
    assert!((report.p_upper() - 0.5).abs() <= 1e-12);
    assert!(report.exact());

    let result = oracle_maximize(&problem, &OracleConfig::default()).unwrap();
    assert!((result.p_star - 0.5).abs() <= 1e-4, "oracle found {}", result.p_star);
    println!(
        "ACCEPTANCE 7 orthogonal-kernel exactness: PASS (P = {}, oracle {})",
        report.p_lower(),
        result.p_star
    );
}

#[test]
fn acceptance_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let spec = RandomSpec { dim: 4, rank0: 2, rank1: 2, seed: 77, p0: 0.5 };
    assert_eq!(cmd_random(&spec, &a), 0);
    assert_eq!(cmd_random(&spec, &b), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "files differ");

    let mut rng = ChaCha12Rng::seed_from_u64(808);
    let rho0 = random_density(4, 2, &mut rng);
    let rho1 = random_density(4, 2, &mut rng);
    let problem = build_problem(&rho0, &rho1, Priors::equal()).unwrap();
    let config = OracleConfig { seed: 9, ..OracleConfig::default() };
    let x = oracle_maximize(&problem, &config).unwrap();
    let y = oracle_maximize(&problem, &config).unwrap();
    assert_eq!(x.p_star.to_bits(), y.p_star.to_bits(), "p_star differs");
    assert_eq!(x.iterations_used, y.iterations_used);
    for (ex, ey) in [(x.povm.e0(), y.povm.e0()), (x.povm.e1(), y.povm.e1())] {
        for (u, v) in ex.iter().zip(ey.iter()) {
            assert_eq!(u.re.to_bits(), v.re.to_bits());
            assert_eq!(u.im.to_bits(), v.im.to_bits());
        }
    }
    println!("ACCEPTANCE 8 determinism: PASS (byte-identical files, bit-identical oracle)");
}
