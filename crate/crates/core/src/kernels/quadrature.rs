//! Quadrature for radial weights: integrals over the discs `D_{λ,α}` and
//! over Carleson squares, plus radial monomial moments.
//!
//! Every routine compares the result at `n` and `2n` nodes and refuses to
//! answer when the two disagree beyond its gate.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::weight::WeightFunction;
use crate::error::{Error, Result};

/// Relative change allowed between resolution `n` and `2n`.
pub const CONVERGENCE_GATE: f64 = 1e-3;
/// Gate for the radial moments that define orthonormal bases.
pub const MOMENT_GATE: f64 = 1e-9;
const MOMENT_START: usize = 64;
const MOMENT_MAX: usize = 8192;

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on the
/// Legendre recurrence. `n ≥ 1`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let wt = 2.0 / ((1.0 - z * z) * dp * dp);
        // Map [-1, 1] → [0, 1], nodes ascending.
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wt;
        w[n - 1 - i] = 0.5 * wt;
    }
    (x, w)
}

/// Pairwise summation, so results do not depend on how callers chunk work.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn relative_change(coarse: f64, fine: f64) -> f64 {
    if fine == 0.0 {
        coarse.abs()
    } else {
        (fine - coarse).abs() / fine.abs()
    }
}

/// `D_{λ,α} = {z : |z − λ| < α(1 − |λ|)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSpec {
    pub center: Complex64,
    pub alpha: f64,
}

impl DiscSpec {
    pub fn new(center: Complex64, alpha: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite() && alpha.is_finite()) {
            return Err(Error::NonFinite("disc parameters"));
        }
        if center.norm() >= 1.0 {
            return Err(Error::DomainViolation(format!("disc center {center} not in the unit disc")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidInput(format!("disc alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(DiscSpec { center, alpha })
    }

    pub fn radius(&self) -> f64 {
        self.alpha * (1.0 - self.center.norm())
    }
}

/// `S(θ, h) = {r e^{iφ} : 1 − h < r < 1, |θ − φ| < h/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonSquare {
    pub theta: f64,
    pub h: f64,
}

impl CarlesonSquare {
    pub fn new(theta: f64, h: f64) -> Result<Self> {
        if !(theta.is_finite() && h.is_finite()) {
            return Err(Error::NonFinite("Carleson square"));
        }
        if !(0.0..=2.0 * PI).contains(&theta) || !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidInput(format!(
                "Carleson square needs theta in [0, 2pi] and h in (0, 1), got ({theta}, {h})"
            )));
        }
        Ok(CarlesonSquare { theta, h })
    }
}

/// `theta_count` uniform angles times `h_count` log-spaced sizes in
/// `[1e-3, 0.95]`.
pub fn default_carleson_grid(theta_count: usize, h_count: usize) -> Vec<CarlesonSquare> {
    let (lo, hi) = (1e-3f64.log10(), 0.95f64.log10());
    let mut grid = Vec::with_capacity(theta_count * h_count);
    for j in 0..h_count {
        let frac = if h_count == 1 { 1.0 } else { j as f64 / (h_count - 1) as f64 };
        let h = 10f64.powf(lo + frac * (hi - lo));
        for i in 0..theta_count {
            let theta = 2.0 * PI * i as f64 / theta_count as f64;
            grid.push(CarlesonSquare { theta, h });
        }
    }
    grid
}

fn disc_integral_at(w: &WeightFunction, disc: &DiscSpec, n: usize) -> Result<f64> {
    let radius = disc.radius();
    let (nodes, weights) = gauss_legendre_unit(n);
    let m = 2 * n;
    let mut terms = Vec::with_capacity(n * m);
    for (&t, &wt) in nodes.iter().zip(&weights) {
        let rho = radius * t;
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            let z = disc.center + Complex64::from_polar(rho, phi);
            terms.push(w.eval(z.norm())? * rho * wt);
        }
    }
    // (1/π) · radius (dρ) · 2π/m (dφ)
    Ok(pairwise_sum(&terms) * radius * 2.0 / m as f64)
}

/// `∫_{D_{λ,α}} ω dA` with `dA = dx dy / π`.
pub fn disc_integral(w: &WeightFunction, disc: &DiscSpec, resolution: usize) -> Result<f64> {
    if resolution < 16 {
        return Err(Error::InvalidInput(format!("resolution must be at least 16, got {resolution}")));
    }
    let coarse = disc_integral_at(w, disc, resolution)?;
    let fine = disc_integral_at(w, disc, 2 * resolution)?;
    let change = relative_change(coarse, fine);
    if !(fine.is_finite() && change < CONVERGENCE_GATE) {
        return Err(Error::QuadratureDivergence(format!(
            "disc integral changed by {change:e} between {resolution} and {} nodes",
            2 * resolution
        )));
    }
    Ok(fine)
}

/// The three radial integrals `∫ ω·w_η`, `∫ ω⁻¹·w_η`, `∫ w_η` over
/// `1 − h < r < 1` with `w_η(r) = (1 − r²)^η r`, using `1 − r = h t²`.
fn carleson_moments(w: &WeightFunction, eta: f64, h: f64, n: usize) -> Result<[f64; 3]> {
    let (nodes, weights) = gauss_legendre_unit(n);
    let mut parts = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for (&t, &wt) in nodes.iter().zip(&weights) {
        let one_minus_r = h * t * t;
        let r = 1.0 - one_minus_r;
        let one_minus_r2 = one_minus_r * (1.0 + r);
        let base = one_minus_r2.powf(eta) * r * 2.0 * h * t * wt;
        let om = w.eval(r)?;
        parts[0].push(om * base);
        parts[1].push(base / om);
        parts[2].push(base);
    }
    Ok([pairwise_sum(&parts[0]), pairwise_sum(&parts[1]), pairwise_sum(&parts[2])])
}

fn carleson_ratio_at(w: &WeightFunction, eta: f64, sq: &CarlesonSquare, n: usize) -> Result<f64> {
    // The weight is radial, so the angular factor h/π is common to all three
    // integrals and cancels.
    let [a, b, c] = carleson_moments(w, eta, sq.h, n)?;
    let ratio = a * b / (c * c);
    if !ratio.is_finite() {
        return Err(Error::QuadratureDivergence(format!(
            "Carleson ratio is not finite at h = {}",
            sq.h
        )));
    }
    Ok(ratio)
}

/// `(∫_S ω dA_η)(∫_S ω⁻¹ dA_η) / A_η(S)²` on one square, convergence-gated.
pub fn carleson_ratio(
    w: &WeightFunction,
    eta: f64,
    sq: &CarlesonSquare,
    resolution: usize,
) -> Result<f64> {
    let coarse = carleson_ratio_at(w, eta, sq, resolution)?;
    let fine = carleson_ratio_at(w, eta, sq, 2 * resolution)?;
    let change = relative_change(coarse, fine);
    if change >= CONVERGENCE_GATE {
        return Err(Error::QuadratureDivergence(format!(
            "Carleson ratio at (theta={}, h={}) changed by {change:e} between {resolution} and {} nodes",
            sq.theta,
            sq.h,
            2 * resolution
        )));
    }
    Ok(fine)
}

/// Grid estimate of the B₂(η) constant.
#[derive(Debug, Clone, PartialEq)]
pub struct BekolleReport {
    pub sup_ratio: f64,
    pub argmax: CarlesonSquare,
    pub ratios: Vec<(CarlesonSquare, f64)>,
    pub resolution: usize,
}

impl BekolleReport {
    pub const NOTE: &'static str =
        "supremum over a finite grid of Carleson squares: a lower estimate of the B2(eta) constant";
}

pub fn bekolle_ratio(
    w: &WeightFunction,
    eta: f64,
    grid: &[CarlesonSquare],
    resolution: usize,
) -> Result<BekolleReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("Carleson grid is empty".into()));
    }
    if !(eta.is_finite() && eta > -1.0) {
        return Err(Error::InvalidInput(format!("eta must exceed -1, got {eta}")));
    }
    if resolution < 16 {
        return Err(Error::InvalidInput(format!("resolution must be at least 16, got {resolution}")));
    }
    let mut ratios = Vec::with_capacity(grid.len());
    // Radial weights give the same ratio for every θ at a given h.
    let mut cache: Vec<(f64, f64)> = Vec::new();
    for sq in grid {
        let ratio = match cache.iter().find(|(h, _)| *h == sq.h) {
            Some(&(_, r)) => r,
            None => {
                let r = carleson_ratio(w, eta, sq, resolution)?;
                cache.push((sq.h, r));
                r
            }
        };
        ratios.push((*sq, ratio));
    }
    let (argmax, sup_ratio) = ratios
        .iter()
        .fold((ratios[0].0, ratios[0].1), |best, &(sq, r)| if r > best.1 { (sq, r) } else { best });
    Ok(BekolleReport { sup_ratio, argmax, ratios, resolution })
}

fn radial_moments_at(w: &WeightFunction, max_k: usize, n: usize) -> Result<Vec<f64>> {
    let (nodes, weights) = gauss_legendre_unit(n);
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(n); max_k + 1];
    for (&t, &wt) in nodes.iter().zip(&weights) {
        // 1 − r = t², dr = 2t dt
        let r = 1.0 - t * t;
        let base = 2.0 * w.eval(r)? * 2.0 * t * wt;
        let r2 = r * r;
        let mut p = r;
        for col in columns.iter_mut() {
            col.push(base * p);
            p *= r2;
        }
    }
    Ok(columns.iter().map(|c| pairwise_sum(c)).collect())
}

/// `‖z^k‖² = ∫_𝔻 |z|^{2k} ω dA = 2∫₀¹ r^{2k+1} ω(r) dr` for `k = 0..=max_k`,
/// doubling the node count until every moment settles to `MOMENT_GATE`.
pub fn radial_moments(w: &WeightFunction, max_k: usize) -> Result<Vec<f64>> {
    let mut n = MOMENT_START;
    let mut prev = radial_moments_at(w, max_k, n)?;
    while n < MOMENT_MAX {
        n *= 2;
        let next = radial_moments_at(w, max_k, n)?;
        let worst = prev
            .iter()
            .zip(&next)
            .map(|(&a, &b)| relative_change(a, b))
            .fold(0.0, f64::max);
        if next.iter().all(|m| m.is_finite() && *m > 0.0) && worst < MOMENT_GATE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureDivergence(format!(
        "radial moments of {} did not settle by {MOMENT_MAX} nodes",
        w.label()
    )))
}
