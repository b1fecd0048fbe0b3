//! Seeded random states and matrices. Everything here is deterministic
//! given the RNG stream, which the CLI and the oracle rely on for
//! reproducible output.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector, C64};
use crate::states::DensityMatrix;

/// One standard complex Gaussian sample (real and imaginary parts
/// `N(0, 1/2)`, unit expected modulus squared).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) / 2.0f64.sqrt()
}

/// Matrix of independent standard complex Gaussians.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random rank-`rank` density matrix `G Gᴴ / Tr(G Gᴴ)` with `G` a
/// `dim × rank` complex Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(rank >= 1 && rank <= dim, "rank must lie in 1..=dim");
    let g = gaussian_matrix(dim, rank, rng);
    let mut m = &g * g.adjoint();
    let trace = m.trace().re;
    m /= C64::new(trace, 0.0);
    DensityMatrix::new(&m, 1e-8).expect("Gaussian construction yields a valid density matrix")
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Haar-random unitary via QR of a Gaussian matrix with the phase
/// convention `R_jj > 0`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random point on the probability simplex (normalized exponentials).
pub fn random_simplex<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Random Hermitian matrix with Gaussian entries (GUE-like, unnormalized).
pub fn gaussian_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}
