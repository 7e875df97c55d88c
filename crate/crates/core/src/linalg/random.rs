//! Seeded random matrices and states for property checks and benchmarks.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{expm, CMat, Ket, C64};

/// Entries drawn i.i.d. from the standard complex Gaussian (real and
/// imaginary parts each N(0, 1/2)).
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect();
    CMat::from_vec(n, n, data).expect("gaussian entries are finite")
}

pub fn hermitian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// `exp(-i H)` for a random Hermitian `H`.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let h = hermitian_matrix(n, rng);
    expm(&h.scale(C64::new(0.0, -1.0))).expect("expm of a Hermitian generator")
}

/// Haar-distributed unitary via Gram-Schmidt on a Gaussian matrix with the
/// phase correction on the diagonal of R.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, rng);
    let mut q = CMat::zeros(n, n);
    for j in 0..n {
        let mut col = g.column(j);
        for k in 0..j {
            let qk = q.column(k);
            let proj: C64 = qk.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in col.iter_mut().zip(&qk) {
                *x -= proj * y;
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // R_jj = norm is real and positive here, so no extra phase is needed.
        let col: Vec<C64> = col.iter().map(|z| z / norm).collect();
        q.set_column(j, &col);
    }
    q
}

/// Normalized random state of dimension `dim`.
pub fn state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let amp: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    Ket::new(amp)
        .and_then(|k| k.normalized())
        .expect("gaussian state is nonzero")
}
