//! Fejér-kernel (Cesàro) reconstruction from cyclic moments.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::borel::BorelSet;
use crate::error::{Error, Result};
use crate::gom::{density, gom_matrix, TrigPolynomial};
use crate::matrix::WindowMatrix;
use crate::structure::StructureMatrix;
use crate::vector::FiniteVector;

/// `K_M(θ) = (1/M)[sin(Mθ/2)/sin(θ/2)]²`, with `K_M(0) = M`.
pub fn fejer_kernel(order: u32, theta: f64) -> f64 {
    let m = order as f64;
    // reduce to (-π, π] so that sin(θ/2) is computed without cancellation
    let t = theta - TAU * ((theta + PI) / TAU).floor();
    let den = (0.5 * t).sin();
    if den == 0.0 {
        return m;
    }
    let ratio = (0.5 * m * t).sin() / den;
    ratio * ratio / m
}

/// Cesàro weight `(1 - |k|/M)₊`.
pub fn fejer_weight(order: u32, k: i64) -> f64 {
    (1.0 - k.unsigned_abs() as f64 / order as f64).max(0.0)
}

fn check_order(order: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidArgument("Cesàro order M must be at least 1".into()));
    }
    Ok(())
}

/// `(1/M) Σ_{N=0}^{M-1} Σ_{|k|<=N} i(X)_{0,k} V_k` on the window.
pub fn cesaro_operator(c: &StructureMatrix, x: &BorelSet, order: u32, radius: usize) -> Result<WindowMatrix> {
    check_order(order)?;
    let realized = c.realize(radius)?;
    let r = 2 * radius as i64;
    // i(X)_{0,k} multiplies V_k, whose entries sit at (m-k, m)
    let weights: Vec<Complex64> = (-r..=r)
        .map(|k| x.fourier_coefficient(-k) * fejer_weight(order, k))
        .collect();
    Ok(realized.map_indexed(|n, m, z| z * weights[(m - n + r) as usize]))
}

/// Fejér mean of the density: `Σ_k (1 - |k|/M)₊ e^{-ikθ} ⟨φ|V_k ψ⟩ / 2π`.
pub fn cesaro_density(c: &StructureMatrix, phi: &FiniteVector, psi: &FiniteVector, order: u32) -> Result<TrigPolynomial> {
    check_order(order)?;
    let mut terms = Vec::new();
    for (n, a) in phi.iter() {
        for (m, b) in psi.iter() {
            // ⟨φ|V_k ψ⟩ collects the terms with m - n = k
            let w = fejer_weight(order, m - n);
            if w > 0.0 {
                terms.push((n - m, a.conj() * c.entry(n, m)? * b * (w / TAU)));
            }
        }
    }
    Ok(TrigPolynomial::from_pairs(terms))
}

/// One row of a reconstruction sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub order: u32,
    /// `max |cesaro_operator - gom_matrix|` over the window.
    pub entry_dev: f64,
    /// `∫ |ĝ_M - g| dθ` on a uniform grid.
    pub l1_err: f64,
}

/// Reconstruction error along the Cesàro orders in `orders`.
pub fn cesaro_sweep(
    c: &StructureMatrix,
    x: &BorelSet,
    radius: usize,
    orders: &[u32],
    phi: &FiniteVector,
    psi: &FiniteVector,
    grid: usize,
) -> Result<Vec<SweepRow>> {
    let target = gom_matrix(c, x, radius)?;
    let exact = density(c, phi, psi)?;
    orders
        .iter()
        .map(|&order| {
            let approx = cesaro_operator(c, x, order, radius)?;
            let smoothed = cesaro_density(c, phi, psi, order)?;
            Ok(SweepRow {
                order,
                entry_dev: approx.max_abs_diff(&target)?,
                l1_err: smoothed.l1_distance(&exact, grid),
            })
        })
        .collect()
}
