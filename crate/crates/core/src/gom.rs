//! The generalized operator measure `G^C`: set values, sesquilinear forms,
//! densities, integrals, and decompositions into simple measures.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::borel::{interval_matrix, BorelSet};
use crate::error::{Error, Result};
use crate::matrix::{schur_product, WindowMatrix, ZERO};
use crate::structure::{self, StructureMatrix};
use crate::vector::{FiniteVector, GeneralizedVector, Membership};

/// A trigonometric polynomial `θ ↦ Σ_k a_k e^{ikθ}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (k, a) in pairs {
            *coeffs.entry(k).or_insert(ZERO) += a;
        }
        coeffs.retain(|_, a| *a != ZERO);
        TrigPolynomial { coeffs }
    }

    /// `e^{ikθ}`.
    pub fn monomial(k: i64) -> Self {
        Self::from_pairs([(k, Complex64::new(1.0, 0.0))])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_pairs([(0, c)])
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, a)| (*k, *a))
    }

    /// Largest `|k|` with a nonzero coefficient.
    pub fn bandwidth(&self) -> u64 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.iter().map(|(k, a)| a * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// `∫_X p(θ) dθ`, exact arc by arc.
    pub fn integrate_over(&self, x: &BorelSet) -> Complex64 {
        self.iter().map(|(k, a)| a * x.fourier_coefficient(k) * TAU).sum()
    }

    /// Samples on the uniform grid `θ_j = 2πj/points`.
    pub fn sample(&self, points: usize) -> Vec<(f64, Complex64)> {
        (0..points)
            .map(|j| {
                let t = TAU * j as f64 / points as f64;
                (t, self.eval(t))
            })
            .collect()
    }

    /// `∫_0^{2π} |p - q| dθ` by the periodic rectangle rule on `points` nodes.
    pub fn l1_distance(&self, other: &TrigPolynomial, points: usize) -> f64 {
        let h = TAU / points as f64;
        (0..points)
            .map(|j| {
                let t = h * j as f64;
                (self.eval(t) - other.eval(t)).norm()
            })
            .sum::<f64>()
            * h
    }
}

/// A step function `Σ value_i · χ_{X_i}` over pairwise disjoint sets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepFunction {
    pieces: Vec<(BorelSet, Complex64)>,
}

impl StepFunction {
    pub fn new(pieces: Vec<(BorelSet, Complex64)>) -> Result<Self> {
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if !pieces[i].0.is_disjoint(&pieces[j].0) {
                    return Err(Error::OverlappingPieces);
                }
            }
        }
        Ok(StepFunction { pieces })
    }

    pub fn indicator(x: BorelSet) -> Self {
        StepFunction {
            pieces: vec![(x, Complex64::new(1.0, 0.0))],
        }
    }

    pub fn pieces(&self) -> &[(BorelSet, Complex64)] {
        &self.pieces
    }

    pub fn sup_abs(&self) -> f64 {
        self.pieces.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }
}

/// Matrix of `G^C(X)` on the window: `C ∗ i(X)`.
pub fn gom_matrix(c: &StructureMatrix, x: &BorelSet, radius: usize) -> Result<WindowMatrix> {
    schur_product(&c.realize(radius)?, &interval_matrix(x, radius))
}

/// `G^C(X)(φ, ψ) = Σ_{n,m} c_nm i(X)_nm conj(φ_n) ψ_m`.
pub fn form_value(c: &StructureMatrix, x: &BorelSet, phi: &FiniteVector, psi: &FiniteVector) -> Result<Complex64> {
    let mut total = ZERO;
    for (n, a) in phi.iter() {
        for (m, b) in psi.iter() {
            total += a.conj() * c.entry(n, m)? * x.fourier_coefficient(n - m) * b;
        }
    }
    Ok(total)
}

/// Density of `X ↦ G^C(X)(φ, ψ)` with respect to `dθ`:
/// `a_k = (1/2π) Σ_{n-m=k} conj(φ_n) c_nm ψ_m`.
pub fn density(c: &StructureMatrix, phi: &FiniteVector, psi: &FiniteVector) -> Result<TrigPolynomial> {
    let mut terms = Vec::with_capacity(phi.len() * psi.len());
    for (n, a) in phi.iter() {
        for (m, b) in psi.iter() {
            terms.push((n - m, a.conj() * c.entry(n, m)? * b / TAU));
        }
    }
    Ok(TrigPolynomial::from_pairs(terms))
}

/// `∫ f dG^C` for a step function `f`.
pub fn integrate_step(c: &StructureMatrix, f: &StepFunction, radius: usize) -> Result<WindowMatrix> {
    let realized = c.realize(radius)?;
    let mut total = WindowMatrix::zeros(radius);
    for (x, value) in f.pieces() {
        let piece = schur_product(&realized, &interval_matrix(x, radius))?;
        total = total.add(&piece.scale(*value))?;
    }
    Ok(total)
}

/// `∫ f dG^C` for a trigonometric polynomial: entry `(n, m)` is `c_nm a_{m-n}`.
pub fn integrate_trig(c: &StructureMatrix, f: &TrigPolynomial, radius: usize) -> Result<WindowMatrix> {
    let realized = c.realize(radius)?;
    Ok(realized.map_indexed(|n, m, z| z * f.coefficient(m - n)))
}

/// `Σ_k rank_one(v^k, u^k)` on the window.
pub fn sum_rank_one(pairs: &[(GeneralizedVector, GeneralizedVector)], radius: usize) -> WindowMatrix {
    let slices: Vec<(Vec<Complex64>, Vec<Complex64>)> =
        pairs.iter().map(|(v, u)| (v.window(radius), u.window(radius))).collect();
    let r = radius as i64;
    WindowMatrix::from_fn_unchecked(radius, |n, m| {
        let (i, j) = ((n + r) as usize, (m + r) as usize);
        slices.iter().map(|(v, u)| v[i] * u[j].conj()).sum()
    })
}

/// Row decomposition `v^k = φ_k`, `u^k = Σ_m conj(c_km) φ_m`, for `k` in the window.
pub fn row_decompose(c: &StructureMatrix, radius: usize) -> Result<Vec<(GeneralizedVector, GeneralizedVector)>> {
    c.check_radius(radius)?;
    let r = radius as i64;
    Ok((-r..=r)
        .map(|k| {
            let v = GeneralizedVector::from_finite(FiniteVector::basis(k));
            let row = c.clone();
            let u = GeneralizedVector::new(Membership::Vdual, move |m| row.entry(k, m).unwrap_or(ZERO).conj());
            (v, u)
        })
        .collect())
}

/// Decomposition from a factorization `c_nm = ⟨ψ_n|η_m⟩`:
/// `(φ_n|v^k) = conj(ψ_n(k))`, `(φ_m|u^k) = conj(η_m(k))`, with `k` over the
/// union of the vector supports. Indices absent from a table are zero vectors.
pub fn factorization_decompose(
    psi_table: &BTreeMap<i64, FiniteVector>,
    eta_table: &BTreeMap<i64, FiniteVector>,
) -> Vec<(GeneralizedVector, GeneralizedVector)> {
    let ks: BTreeSet<i64> = psi_table
        .values()
        .chain(eta_table.values())
        .flat_map(|v| v.support().collect::<Vec<_>>())
        .collect();
    ks.into_iter()
        .map(|k| {
            let v_coeffs: BTreeMap<i64, Complex64> =
                psi_table.iter().map(|(n, psi)| (*n, psi.get(k).conj())).collect();
            let u_coeffs: BTreeMap<i64, Complex64> =
                eta_table.iter().map(|(m, eta)| (*m, eta.get(k).conj())).collect();
            let v = GeneralizedVector::from_finite(FiniteVector::from_pairs(v_coeffs));
            let u = GeneralizedVector::from_finite(FiniteVector::from_pairs(u_coeffs));
            (v, u)
        })
        .collect()
}

/// The four positive structure matrices of the polarization identity,
/// `C_s = Σ_k (v^k + i^s u^k)(v^k + i^s u^k)*`, realized densely on the window.
/// `G^C = ¼ Σ_s i^s G^{C_s}`.
pub fn polarization(pairs: &[(GeneralizedVector, GeneralizedVector)], radius: usize) -> [StructureMatrix; 4] {
    let slices: Vec<(Vec<Complex64>, Vec<Complex64>)> =
        pairs.iter().map(|(v, u)| (v.window(radius), u.window(radius))).collect();
    let r = radius as i64;
    let mut phase = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(4);
    for _ in 0..4 {
        let combined: Vec<Vec<Complex64>> = slices
            .iter()
            .map(|(v, u)| v.iter().zip(u).map(|(a, b)| a + phase * b).collect())
            .collect();
        let m = WindowMatrix::from_fn_unchecked(radius, |n, m| {
            let (i, j) = ((n + r) as usize, (m + r) as usize);
            combined.iter().map(|w| w[i] * w[j].conj()).sum()
        });
        out.push(structure::dense(m));
        phase *= Complex64::new(0.0, 1.0);
    }
    out.try_into().expect("four polarization terms")
}

/// `¼ Σ_s i^s C_s` on the window.
pub fn depolarize(parts: &[StructureMatrix; 4], radius: usize) -> Result<WindowMatrix> {
    let mut total = WindowMatrix::zeros(radius);
    let mut phase = Complex64::new(0.25, 0.0);
    for part in parts {
        total = total.add(&part.realize(radius)?.scale(phase))?;
        phase *= Complex64::new(0.0, 1.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{identity, ones, sign_counterexample};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn full_circle_gives_diagonal() {
        let s = sign_counterexample();
        let g = gom_matrix(&s, &BorelSet::full(), 3).unwrap();
        assert!(g.max_abs() < 1e-15);
        let g = gom_matrix(&ones(), &BorelSet::full(), 3).unwrap();
        assert!(g.max_abs_diff(&WindowMatrix::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn ones_reproduces_interval_matrix() {
        let x: BorelSet = "0.3:2.1,4:5".parse().unwrap();
        assert_eq!(gom_matrix(&ones(), &x, 4).unwrap(), interval_matrix(&x, 4));
    }

    #[test]
    fn basis_form_value() {
        let x: BorelSet = "1:2.5".parse().unwrap();
        let s = sign_counterexample();
        let v = form_value(&s, &x, &FiniteVector::basis(2), &FiniteVector::basis(-1)).unwrap();
        assert_eq!(v, x.fourier_coefficient(3));
    }

    #[test]
    fn full_circle_normalization() {
        let phi = FiniteVector::from_pairs([(0, c(1.0, 2.0)), (3, c(-0.5, 0.0))]);
        let v = form_value(&ones(), &BorelSet::full(), &phi, &phi).unwrap();
        assert!((v - c(5.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_coefficient_density() {
        let s = sign_counterexample();
        let d = density(&s, &FiniteVector::basis(0), &FiniteVector::basis(1)).unwrap();
        assert_eq!(d.iter().count(), 1);
        assert_eq!(d.coefficient(-1), c(-1.0 / TAU, 0.0));
    }

    #[test]
    fn ones_density_is_raised_cosine() {
        let h = 0.5f64.sqrt();
        let phi = FiniteVector::from_pairs([(0, c(h, 0.0)), (1, c(h, 0.0))]);
        let d = density(&ones(), &phi, &phi).unwrap();
        for j in 0..50 {
            let t = 0.13 * j as f64;
            assert!((d.eval(t) - c((1.0 + t.cos()) / TAU, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn step_function_cases() {
        let x: BorelSet = "0.5:2".parse().unwrap();
        let s = sign_counterexample();
        let ind = integrate_step(&s, &StepFunction::indicator(x.clone()), 3).unwrap();
        assert_eq!(ind, gom_matrix(&s, &x, 3).unwrap());
        let whole = integrate_step(&identity(), &StepFunction::indicator(BorelSet::full()), 3).unwrap();
        assert!(whole.max_abs_diff(&WindowMatrix::identity(3)).unwrap() < 1e-15);
        let overlapping = StepFunction::new(vec![(x.clone(), c(1.0, 0.0)), ("1:3".parse().unwrap(), c(2.0, 0.0))]);
        assert_eq!(overlapping.unwrap_err(), Error::OverlappingPieces);
    }

    #[test]
    fn trig_integral_constant() {
        let s = sign_counterexample();
        let f = TrigPolynomial::constant(c(1.0, 0.0));
        assert!(integrate_trig(&s, &f, 2).unwrap().max_abs() == 0.0);
        assert_eq!(integrate_trig(&identity(), &f, 2).unwrap(), WindowMatrix::identity(2));
    }

    #[test]
    fn row_decomposition_identity_and_ones() {
        let pairs = row_decompose(&identity(), 2).unwrap();
        for (k, (_, u)) in (-2..=2).zip(&pairs) {
            for m in -4..=4 {
                assert_eq!(u.coeff(m), if m == k { c(1.0, 0.0) } else { ZERO });
            }
        }
        let pairs = row_decompose(&ones(), 2).unwrap();
        assert_eq!(pairs.len(), 5);
        assert_eq!(sum_rank_one(&pairs, 2), WindowMatrix::ones(2));
    }

    #[test]
    fn factorization_simple_cases() {
        let zero_table: BTreeMap<i64, FiniteVector> = (-3..=3).map(|n| (n, FiniteVector::basis(0))).collect();
        let pairs = factorization_decompose(&zero_table, &zero_table);
        assert_eq!(pairs.len(), 1);
        assert_eq!(sum_rank_one(&pairs, 3), WindowMatrix::ones(3));
        let basis: BTreeMap<i64, FiniteVector> = (-3..=3).map(|n| (n, FiniteVector::basis(n))).collect();
        let pairs = factorization_decompose(&basis, &basis);
        assert_eq!(sum_rank_one(&pairs, 3), WindowMatrix::identity(3));
    }

    #[test]
    fn polarization_special_pairs() {
        let v = GeneralizedVector::new(Membership::H2, |n| c(1.0 / (1.0 + (n * n) as f64), 0.5));
        let parts = polarization(&[(v.clone(), v.clone())], 3);
        let outer = sum_rank_one(&[(v.clone(), v.clone())], 3);
        assert!(parts[0].realize(3).unwrap().max_abs_diff(&outer.scale(c(4.0, 0.0))).unwrap() < 1e-14);
        assert!(parts[2].realize(3).unwrap().max_abs() < 1e-15);
        let parts = polarization(&[(v.clone(), GeneralizedVector::zero())], 3);
        for p in &parts {
            assert!(p.realize(3).unwrap().max_abs_diff(&outer).unwrap() < 1e-15);
        }
        assert!(depolarize(&parts, 3).unwrap().max_abs() < 1e-15);
        let _ = PI;
    }
}
