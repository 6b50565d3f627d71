//! Cyclic moments `V_k`, polynomial moments `Θ_s`, the auxiliary matrices
//! `A_l`, `B_l`, and the exponential transform `F^C(z)`.
//!
//! `Θ_s` is assembled entrywise from the closed-form basis coefficients
//! `(1/2π)∫θ^s e^{ikθ}dθ`. The `A_l` combination is a second, separate path:
//!
//! ```text
//! Θ_s = (2π)^s/(s+1) · A_0  −  s! Σ_{l=1}^{s} i^l (2π)^{s-l} / (s-l+1)! · A_l
//! ```
//!
//! with the diagonal term entering with a plus sign.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{WindowMatrix, ONE, ZERO};
use crate::structure::{self, StructureMatrix};

/// `(1/2π) ∫_0^{2π} θ^s e^{ikθ} dθ`.
pub fn basis_moment_coefficient(s: u32, k: i64) -> Complex64 {
    if s == 0 {
        return if k == 0 { ONE } else { ZERO };
    }
    if k == 0 {
        return Complex64::new(TAU.powi(s as i32) / (s + 1) as f64, 0.0);
    }
    let kf = k as f64;
    let mut total = ZERO;
    // ratio = s! / (s-l+1)!, built up as l grows
    let mut ratio = 1.0;
    let mut i_pow = ONE;
    let mut k_pow = 1.0;
    for l in 1..=s {
        if l >= 2 {
            ratio *= (s - l + 2) as f64;
        }
        i_pow *= Complex64::new(0.0, 1.0);
        k_pow *= kf;
        total += i_pow * (ratio * TAU.powi((s - l) as i32) / k_pow);
    }
    -total
}

/// Memoized [`basis_moment_coefficient`] values.
#[derive(Debug, Clone, Default)]
pub struct MomentCoefficientTable {
    values: HashMap<(u32, i64), Complex64>,
}

impl MomentCoefficientTable {
    /// Precomputes every `(s, k)` with `s <= max_s`, `|k| <= max_k`.
    pub fn new(max_s: u32, max_k: i64) -> Self {
        let mut values = HashMap::new();
        for s in 0..=max_s {
            for k in -max_k..=max_k {
                values.insert((s, k), basis_moment_coefficient(s, k));
            }
        }
        MomentCoefficientTable { values }
    }

    pub fn get(&self, s: u32, k: i64) -> Complex64 {
        self.values
            .get(&(s, k))
            .copied()
            .unwrap_or_else(|| basis_moment_coefficient(s, k))
    }
}

/// `V_k`: the `k`-th diagonal of `C`, entry `(m-k, m) = c_{m-k,m}`.
pub fn cyclic_moment(c: &StructureMatrix, k: i64, radius: usize) -> Result<WindowMatrix> {
    let realized = c.realize(radius)?;
    Ok(realized.map_indexed(|n, m, z| if m - n == k { z } else { ZERO }))
}

/// `A_0 = diag(c_nn)`; for `l >= 1`, off-diagonal entries `c_nm/(n-m)^l`.
pub fn aux_matrix(c: &StructureMatrix, l: u32, radius: usize) -> Result<WindowMatrix> {
    let realized = c.realize(radius)?;
    Ok(realized.map_indexed(|n, m, z| match (l, n == m) {
        (0, true) => z,
        (0, false) | (_, true) => ZERO,
        _ => z / ((n - m) as f64).powi(l as i32),
    }))
}

/// `B_l = aux_matrix(ones, l, N)`.
pub fn b_matrix(l: u32, radius: usize) -> WindowMatrix {
    aux_matrix(&structure::ones(), l, radius).expect("ones is defined everywhere")
}

/// `Θ_s` on the window: entry `c_nm · (1/2π)∫θ^s e^{i(n-m)θ}dθ`.
pub fn moment_matrix(c: &StructureMatrix, s: u32, radius: usize) -> Result<WindowMatrix> {
    let realized = c.realize(radius)?;
    let r = 2 * radius as i64;
    let coeffs: Vec<Complex64> = (-r..=r).map(|k| basis_moment_coefficient(s, k)).collect();
    Ok(realized.map_indexed(|n, m, z| z * coeffs[(n - m + r) as usize]))
}

/// `Θ_s` as a combination of the auxiliary matrices `A_0, …, A_s`.
pub fn moment_matrix_from_aux(c: &StructureMatrix, s: u32, radius: usize) -> Result<WindowMatrix> {
    let mut total = aux_matrix(c, 0, radius)?.scale(Complex64::new(TAU.powi(s as i32) / (s + 1) as f64, 0.0));
    let s_fact: f64 = (1..=s).map(f64::from).product();
    let mut i_pow = ONE;
    for l in 1..=s {
        i_pow *= Complex64::new(0.0, 1.0);
        let denom: f64 = (1..=(s - l + 1)).map(f64::from).product();
        let weight = -i_pow * (s_fact * TAU.powi((s - l) as i32) / denom);
        total = total.add(&aux_matrix(c, l, radius)?.scale(weight))?;
    }
    Ok(total)
}

/// `R = ||A_0|| + (e² - 1)/(2π) · ||A_1||` on the window.
pub fn exponential_bound_constant(c: &StructureMatrix, radius: usize) -> Result<f64> {
    let a0 = crate::spectral::operator_norm(&aux_matrix(c, 0, radius)?)?;
    let a1 = crate::spectral::operator_norm(&aux_matrix(c, 1, radius)?)?;
    Ok(a0 + 2f64.exp_m1() / TAU * a1)
}

/// `(1/2π) ∫_0^{2π} e^{zθ} e^{ikθ} dθ = (e^{2πz} - 1) / (2π(z + ik))`.
fn exp_coefficient(z: Complex64, k: i64) -> Complex64 {
    let w = z + Complex64::new(0.0, k as f64);
    let x = w * TAU;
    if x.norm() < 1e-3 {
        // (e^x - 1)/x = Σ x^j/(j+1)!
        let mut term = ONE;
        let mut sum = ONE;
        for j in 1..12 {
            term *= x / (j + 1) as f64;
            sum += term;
        }
        return sum;
    }
    // e^{2π(z+ik)} = e^{2πz}
    ((z * TAU).exp() - ONE) / x
}

/// `F^C(z) = ∫ e^{zθ} dG^C(θ)` on the window, for `|z| < 1/π`.
pub fn exp_transform(c: &StructureMatrix, z: Complex64, radius: usize) -> Result<WindowMatrix> {
    let modulus = z.norm();
    if !(modulus < 1.0 / PI) {
        return Err(Error::OutsideDisk { modulus });
    }
    let realized = c.realize(radius)?;
    let r = 2 * radius as i64;
    let coeffs: Vec<Complex64> = (-r..=r).map(|k| exp_coefficient(z, k)).collect();
    Ok(realized.map_indexed(|n, m, v| v * coeffs[(n - m + r) as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::schur_product;
    use crate::structure::{identity, ones, sign_counterexample};

    #[test]
    fn first_moment_coefficients() {
        assert!((basis_moment_coefficient(1, 0) - Complex64::new(PI, 0.0)).norm() < 1e-15);
        for k in [-3i64, -1, 1, 2, 7] {
            let expected = Complex64::new(0.0, -1.0 / k as f64);
            assert!((basis_moment_coefficient(1, k) - expected).norm() < 1e-15);
        }
        assert_eq!(basis_moment_coefficient(0, 0), ONE);
        assert_eq!(basis_moment_coefficient(0, 4), ZERO);
    }

    #[test]
    fn second_moment_closed_form() {
        // (1/2π)∫θ² e^{ikθ} = 2/k² - 2πi/k
        for k in [-2i64, 1, 3] {
            let kf = k as f64;
            let expected = Complex64::new(2.0 / (kf * kf), -TAU / kf);
            assert!((basis_moment_coefficient(2, k) - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for s in 0..6 {
            for k in 1..6 {
                let d = basis_moment_coefficient(s, -k) - basis_moment_coefficient(s, k).conj();
                assert!(d.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_first_moment() {
        let t = moment_matrix(&identity(), 1, 4).unwrap();
        assert!(t.max_abs_diff(&WindowMatrix::identity(4).scale(Complex64::new(PI, 0.0))).unwrap() < 1e-15);
    }

    #[test]
    fn aux_path_agrees() {
        for c in [ones(), sign_counterexample(), identity()] {
            for s in 0..=6 {
                let a = moment_matrix(&c, s, 5).unwrap();
                let b = moment_matrix_from_aux(&c, s, 5).unwrap();
                let scale = a.max_abs().max(1.0);
                assert!(a.max_abs_diff(&b).unwrap() < 1e-12 * scale, "s = {s}");
            }
        }
    }

    #[test]
    fn aux_schur_recursion() {
        let a1 = aux_matrix(&sign_counterexample(), 1, 6).unwrap();
        for l in 1..4 {
            let lhs = aux_matrix(&sign_counterexample(), l + 1, 6).unwrap();
            let rhs = schur_product(&a1, &b_matrix(l, 6)).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
        }
        assert_eq!(aux_matrix(&identity(), 2, 4).unwrap(), WindowMatrix::zeros(4));
    }

    #[test]
    fn cyclic_moment_diagonals() {
        let v0 = cyclic_moment(&sign_counterexample(), 0, 3).unwrap();
        assert_eq!(v0, WindowMatrix::zeros(3));
        let v2 = cyclic_moment(&ones(), 2, 3).unwrap();
        assert_eq!(v2.at(-3, -1), ONE);
        assert_eq!(v2.at(-1, -3), ZERO);
        assert_eq!(cyclic_moment(&ones(), 7, 3).unwrap(), WindowMatrix::zeros(3));
    }

    #[test]
    fn exp_transform_disk_and_origin() {
        let f = exp_transform(&sign_counterexample(), ZERO, 3).unwrap();
        assert_eq!(f, WindowMatrix::zeros(3));
        let f = exp_transform(&ones(), ZERO, 3).unwrap();
        assert!(f.max_abs_diff(&WindowMatrix::identity(3)).unwrap() < 1e-15);
        let err = exp_transform(&ones(), Complex64::new(1.0 / PI, 0.0), 2).unwrap_err();
        assert_eq!(err.name(), "OutsideDisk");
    }

    #[test]
    fn exp_coefficient_series_matches_direct() {
        let z = Complex64::new(1e-4, -5e-5);
        let x = z * TAU;
        let direct = (x.exp() - ONE) / x;
        assert!((exp_coefficient(z, 0) - direct).norm() < 1e-12);
    }
}
