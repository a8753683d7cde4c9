//! Thin singular value decomposition by one-sided (Hestenes) Jacobi, and the
//! Moore–Penrose pseudoinverse built on it.

use num_complex::Complex64;

use super::matrix::DenseMatrix;
use super::tolerances::Tolerances;
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

/// `M = U · diag(σ) · V*` with `k = min(rows, cols)` singular triplets.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × k`, orthonormal columns.
    pub u: DenseMatrix,
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    /// `cols × k`, orthonormal columns.
    pub v: DenseMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `cutoff_rel · σ_max`.
    pub fn rank(&self, cutoff_rel: f64) -> usize {
        let threshold = cutoff_rel * self.sigma_max();
        self.singular_values.iter().take_while(|&&s| s > threshold && s > 0.0).count()
    }

    /// Rank with the cutoff taken from `tol` for a matrix of this shape.
    pub fn numerical_rank(&self, tol: &Tolerances) -> usize {
        self.rank(tol.rank_cutoff_rel.resolve(self.u.rows(), self.v.rows()))
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for j in 0..us.cols() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.singular_values[j];
            }
        }
        us.matmul(&self.v.adjoint()).expect("shapes agree by construction")
    }
}

pub fn svd(m: &DenseMatrix) -> Result<Svd> {
    m.ensure_finite("svd input")?;
    if m.rows() >= m.cols() {
        Ok(tall_svd(m))
    } else {
        let t = tall_svd(&m.adjoint());
        Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u })
    }
}

/// Moore–Penrose pseudoinverse, zeroing singular values at or below
/// `rank_cutoff_rel · σ_max`.
pub fn pinv(m: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    let d = svd(m)?;
    Ok(pinv_from_svd(&d, tol))
}

pub fn pinv_from_svd(d: &Svd, tol: &Tolerances) -> DenseMatrix {
    let r = d.numerical_rank(tol);
    // V_r Σ_r⁻¹ U_r*
    let mut vs = DenseMatrix::zeros(d.v.rows(), r);
    for j in 0..r {
        let inv = 1.0 / d.singular_values[j];
        for i in 0..d.v.rows() {
            vs[(i, j)] = d.v[(i, j)] * inv;
        }
    }
    let idx: Vec<usize> = (0..r).collect();
    let ur = d.u.select_columns(&idx);
    vs.matmul(&ur.adjoint()).expect("shapes agree by construction")
}

fn tall_svd(m: &DenseMatrix) -> Svd {
    let rows = m.rows();
    let n = m.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let mag = gamma.norm();
                if mag <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let u = gamma.conj() / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta.is_infinite() {
                    0.0
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (us, uc) = (u * s, u * c);
                apply_pair(&mut cols, p, q, c, s, us, uc);
                apply_pair(&mut v, p, q, c, s, us, uc);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut singular_values = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        singular_values.push(s);
        v_cols.push(v[j].clone());
        if s > 0.0 {
            u_cols.push(cols[j].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(Vec::new());
        }
    }
    complete_orthonormal(&mut u_cols, rows);

    Svd {
        u: DenseMatrix::from_columns(rows, &u_cols).expect("column lengths agree"),
        singular_values,
        v: DenseMatrix::from_columns(n, &v_cols).expect("column lengths agree"),
    }
}

/// `[x_p, x_q] ← [x_p, x_q] · [[c, s], [-s·u, c·u]]`
fn apply_pair(
    x: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    us: Complex64,
    uc: Complex64,
) {
    let (lo, hi) = x.split_at_mut(q);
    let (xp, xq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (ap, aq) = (*a, *b);
        *a = ap * c - aq * us;
        *b = ap * s + aq * uc;
    }
}

/// Fills empty slots with unit vectors orthogonal to every other column,
/// drawn deterministically from the standard basis.
fn complete_orthonormal(cols: &mut [Vec<Complex64>], dim: usize) {
    let missing: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].is_empty()).collect();
    if missing.is_empty() {
        return;
    }
    let mut candidate = 0;
    for slot in missing {
        loop {
            assert!(candidate < dim, "ran out of basis vectors while completing U");
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            w[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // Two passes of Gram–Schmidt.
            for _ in 0..2 {
                for c in cols.iter().filter(|c| !c.is_empty()) {
                    let proj: Complex64 = c.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi -= proj * ci;
                    }
                }
            }
            let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 0.5 {
                cols[slot] = w.into_iter().map(|z| z / nrm).collect();
                break;
            }
        }
    }
}
