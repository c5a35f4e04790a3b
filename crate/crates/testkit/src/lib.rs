//! Seeded random fixtures for tests. Everything here is plain `nalgebra`
//! data so any crate in the workspace can use it without a dependency cycle.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand::seq::SliceRandom;
pub use rand::Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample (Box-Muller).
pub fn normal(rng: &mut TestRng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn complex_normal(rng: &mut TestRng) -> C64 {
    C64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(rng: &mut TestRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn random_unit_vector(rng: &mut TestRng, n: usize) -> Vec<C64> {
    let v = random_vector(rng, n);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_real_matrix(rng: &mut TestRng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), 0.0))
}

/// Matrix with orthonormal columns, `rows >= cols`.
pub fn random_isometry(rng: &mut TestRng, rows: usize, cols: usize) -> DMatrix<C64> {
    assert!(rows >= cols);
    let g = random_matrix(rng, rows, cols);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut q = q.columns(0, cols).into_owned();
    // fix the phase freedom so the distribution is Haar
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            for i in 0..rows {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

pub fn random_unitary(rng: &mut TestRng, d: usize) -> DMatrix<C64> {
    random_isometry(rng, d, d)
}

/// Full-rank density operator.
pub fn random_density(rng: &mut TestRng, d: usize) -> DMatrix<C64> {
    let g = random_matrix(rng, d, d);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

pub fn random_pure_density(rng: &mut TestRng, d: usize) -> DMatrix<C64> {
    let v = DMatrix::from_vec(d, 1, random_unit_vector(rng, d));
    &v * v.adjoint()
}

/// Kraus operators (each `dy x dx`) of a random CPTP map with `k` terms.
pub fn random_kraus(rng: &mut TestRng, dx: usize, dy: usize, k: usize) -> Vec<DMatrix<C64>> {
    assert!(k * dy >= dx, "not enough Kraus terms for a trace-preserving map");
    let v = random_isometry(rng, k * dy, dx);
    (0..k).map(|a| v.rows(a * dy, dy).into_owned()).collect()
}

/// Kraus operators that are not trace preserving.
pub fn random_kraus_non_tp(rng: &mut TestRng, dx: usize, dy: usize, k: usize) -> Vec<DMatrix<C64>> {
    (0..k).map(|_| random_matrix(rng, dy, dx) * C64::new(0.5, 0.0)).collect()
}
