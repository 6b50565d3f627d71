//! Largest singular value of window matrices.
//!
//! The Gram form `A* A` is iterated from a fixed seeded start vector. Each new
//! iterate is orthogonalized against the previous ones (Lanczos), so the
//! estimate is the top Ritz value of the Krylov space the plain power method
//! would visit. Convergence is declared when the Ritz residual drops below
//! the relative tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::WindowMatrix;

/// Settings for [`operator_norm_with`].
#[derive(Debug, Clone, Copy)]
pub struct PowerIteration {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            rel_tol: 1e-12,
            max_iter: 100_000,
            restarts: 3,
            seed: 0x00c0_ffee,
        }
    }
}

/// `||A||_{2,2}` with the default settings.
pub fn operator_norm(a: &WindowMatrix) -> Result<f64> {
    operator_norm_with(a, &PowerIteration::default())
}

pub fn operator_norm_with(a: &WindowMatrix, cfg: &PowerIteration) -> Result<f64> {
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    if is_diagonal(a) {
        return Ok(a.indices().map(|n| a.at(n, n).norm()).fold(0.0, f64::max));
    }
    let a = a.scale(Complex64::new(1.0 / scale, 0.0));
    let dim = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(1.0 + 0.1 * rng.gen_range(-1.0..1.0), 0.1 * rng.gen_range(-1.0..1.0)))
        .collect();

    let mut last = 0.0;
    let mut gap = f64::INFINITY;
    let mut budget = cfg.max_iter;
    for _ in 0..=cfg.restarts {
        match lanczos_top(&a, &start, cfg.rel_tol, budget) {
            LanczosOutcome::Converged(theta) => return Ok(theta.max(0.0).sqrt() * scale),
            LanczosOutcome::Stalled { theta, residual, steps } => {
                last = theta.max(0.0).sqrt() * scale;
                gap = residual / theta.max(f64::MIN_POSITIVE);
                budget = budget.saturating_sub(steps);
                if budget == 0 {
                    break;
                }
                for z in start.iter_mut() {
                    *z += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
        }
    }
    Err(Error::NoConvergence { last, gap })
}

fn is_diagonal(a: &WindowMatrix) -> bool {
    let dim = a.dim();
    a.entries().iter().enumerate().all(|(i, z)| i / dim == i % dim || *z == Complex64::new(0.0, 0.0))
}

enum LanczosOutcome {
    Converged(f64),
    Stalled { theta: f64, residual: f64, steps: usize },
}

fn gram_apply(a: &WindowMatrix, x: &[Complex64]) -> Vec<Complex64> {
    a.apply_adjoint(&a.apply(x))
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn lanczos_top(a: &WindowMatrix, start: &[Complex64], tol: f64, budget: usize) -> LanczosOutcome {
    let dim = a.dim();
    let n0 = norm(start);
    let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|z| z / n0).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    let steps = budget.min(dim);
    for j in 0..steps {
        let q = &basis[j];
        let mut w = gram_apply(a, q);
        let aj = dot(q, &w).re;
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi -= qi * aj;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (wi, qi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= qi * b;
            }
        }
        // full reorthogonalization, twice
        for _ in 0..2 {
            for qk in &basis {
                let h = dot(qk, &w);
                for (wi, qi) in w.iter_mut().zip(qk) {
                    *wi -= qi * h;
                }
            }
        }
        let bj = norm(&w);
        alpha.push(aj);
        let (t, last_component) = top_ritz(&alpha, &beta);
        theta = t;
        residual = bj * last_component.abs();
        if residual <= tol * theta.abs() || bj <= 1e-14 * theta.abs().max(1e-300) || j + 1 == dim {
            return LanczosOutcome::Converged(theta);
        }
        beta.push(bj);
        basis.push(w.into_iter().map(|z| z / bj).collect());
    }
    LanczosOutcome::Stalled {
        theta,
        residual,
        steps,
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (length `diag.len() - 1`), together with the last
/// component of its unit eigenvector.
pub(crate) fn top_ritz(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    let mut z = vec![0.0; n];
    z[n - 1] = 1.0;
    tql_row(&mut d, &mut e, &mut z);
    let mut best = 0;
    for i in 1..n {
        if d[i] > d[best] {
            best = i;
        }
    }
    (d[best], z[best])
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
/// `e[i]` couples rows `i` and `i + 1`. Only one row of the eigenvector matrix
/// is accumulated, in `z`.
fn tql_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = z[i + 1];
                z[i + 1] = s * z[i] + c * fz;
                z[i] = c * z[i] - s * fz;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
