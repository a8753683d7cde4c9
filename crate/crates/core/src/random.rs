//! Seeded complex Gaussian draws used by sampled bound checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numeric::{norm, DenseMatrix};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Uniformly distributed on the unit sphere of ℂ^dim (dim ≥ 1).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, dim);
        let n = norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    DenseMatrix::from_row_major(rows, cols, data).expect("length is rows*cols")
}

/// Random matrix of exact rank `rank` (as a product of Gaussian factors).
pub fn gaussian_matrix_of_rank<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> DenseMatrix {
    if rank == 0 {
        return DenseMatrix::zeros(rows, cols);
    }
    let a = gaussian_matrix(rng, rows, rank);
    let b = gaussian_matrix(rng, rank, cols);
    a.matmul(&b).expect("inner dimensions agree")
}
