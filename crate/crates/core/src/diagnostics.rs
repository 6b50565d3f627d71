//! Window diagnostics: the four norms of a structure matrix, truncation
//! sweeps with growth classification, and extensibility verdicts.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::borel::{interval_matrix, BorelSet};
use crate::error::{Error, Result};
use crate::matrix::{is_psd, pq_norm, schur_product, PNorm, WindowMatrix, PSD_TOL};
use crate::moments::moment_matrix;
use crate::spectral::{operator_norm, operator_norm_with, PowerIteration};
use crate::structure::{Family, StructureMatrix};

/// Slope above which a sweep is classified divergent.
pub const DIVERGENCE_SLOPE: f64 = 0.1;
/// Number of random arc unions tried by [`observable_norm_estimate`].
pub const RANDOM_UNIONS: usize = 64;
/// Number of random adversaries of each kind in [`multiplier_bounds`].
pub const RANDOM_ADVERSARIES: usize = 32;
pub const DEFAULT_GRID: usize = 256;

/// `S^C` on the window: `max |c_nm|`.
pub fn sup_entry(c: &StructureMatrix, radius: usize) -> Result<f64> {
    Ok(c.realize(radius)?.max_abs())
}

/// Bracket `lower <= ||C||_m <= upper` for the Schur-multiplier norm on the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierBracket {
    pub lower: f64,
    pub upper: f64,
}

fn row_col_bound(a: &WindowMatrix) -> f64 {
    let dim = a.dim();
    let e = a.entries();
    let mut rows = vec![0.0f64; dim];
    let mut cols = vec![0.0f64; dim];
    for i in 0..dim {
        for j in 0..dim {
            let v = e[i * dim + j].norm_sqr();
            rows[i] += v;
            cols[j] += v;
        }
    }
    let max_row = rows.into_iter().fold(0.0, f64::max).sqrt();
    let max_col = cols.into_iter().fold(0.0, f64::max).sqrt();
    max_row.min(max_col)
}

/// Operator norm converged as far as rounding allows. Interval matrices have
/// clustered top singular values, where the default tolerance leaves a
/// visible bias in quotients of two norms.
fn tight_norm(a: &WindowMatrix) -> Result<f64> {
    let cfg = PowerIteration {
        rel_tol: 1e-15,
        ..PowerIteration::default()
    };
    match operator_norm_with(a, &cfg) {
        Err(Error::NoConvergence { .. }) => operator_norm(a),
        other => other,
    }
}

fn schur_ratio(a: &WindowMatrix, adversary: &WindowMatrix) -> Result<f64> {
    let den = tight_norm(adversary)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(tight_norm(&schur_product(a, adversary)?)? / den)
}

/// Lower bound from a fixed family of test matrices `A` (`||C ∗ A|| / ||A||`);
/// upper bound from factorizations of the window realization.
pub fn multiplier_bounds(c: &StructureMatrix, radius: usize, seed: u64) -> Result<MultiplierBracket> {
    let a = c.realize(radius)?;
    let mut upper = row_col_bound(&a);
    if is_psd(&a, PSD_TOL) {
        let diag = a.indices().map(|n| a.at(n, n).re).fold(0.0, f64::max);
        upper = upper.min(diag);
    }
    if let Family::RankOne { v, u } = c.family() {
        upper = upper.min(v.window_sup(radius) * u.window_sup(radius));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = 0.0f64;
    let mut fixed = vec![WindowMatrix::identity(radius), WindowMatrix::ones(radius)];
    if a.max_abs() > 0.0 {
        fixed.push(a.clone());
    }
    for adv in &fixed {
        lower = lower.max(schur_ratio(&a, adv)?);
    }
    for _ in 0..RANDOM_ADVERSARIES {
        let signs = WindowMatrix::from_fn_unchecked(radius, |_, _| {
            Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
        });
        lower = lower.max(schur_ratio(&a, &signs)?);
    }
    for _ in 0..RANDOM_ADVERSARIES {
        let x = BorelSet::random(&mut rng, 4);
        lower = lower.max(schur_ratio(&a, &interval_matrix(&x, radius))?);
    }
    Ok(MultiplierBracket { lower, upper })
}

/// Lower bound for `sup_X ||C ∗ i(X)||` with its witness set.
///
/// Single arcs only need their length varied: rotating `X` conjugates
/// `C ∗ i(X)` by a diagonal unitary.
pub fn observable_norm_estimate(
    c: &StructureMatrix,
    radius: usize,
    grid: usize,
    seed: u64,
) -> Result<(f64, BorelSet)> {
    if grid < 8 {
        return Err(Error::InvalidArgument(format!("grid size {grid} is below 8")));
    }
    let a = c.realize(radius)?;
    let eval = |x: &BorelSet| -> Result<f64> { operator_norm(&schur_product(&a, &interval_matrix(x, radius))?) };
    let slack = 1e-12 * a.max_abs().max(f64::MIN_POSITIVE);

    let mut witness = BorelSet::full();
    let mut best = eval(&witness)?;
    let consider = |x: BorelSet, best: &mut f64, witness: &mut BorelSet| -> Result<()> {
        let v = eval(&x)?;
        if v > *best + slack {
            *best = v;
            *witness = x;
        }
        Ok(())
    };
    for j in 1..grid {
        let x = BorelSet::normalize(&[(0.0, TAU * j as f64 / grid as f64)])?;
        consider(x, &mut best, &mut witness)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_UNIONS {
        consider(BorelSet::random(&mut rng, 4), &mut best, &mut witness)?;
    }
    Ok((best, witness))
}

/// `||C||_f = ||Θ_1||` on the window.
pub fn first_moment_norm(c: &StructureMatrix, radius: usize) -> Result<f64> {
    operator_norm(&moment_matrix(c, 1, radius)?)
}

fn check_observable(a: &WindowMatrix) -> Result<()> {
    if !is_psd(a, PSD_TOL) {
        return Err(Error::NotObservableMatrix("window realization is not positive semidefinite".into()));
    }
    for n in a.indices() {
        if (a.at(n, n) - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::NotObservableMatrix(format!("diagonal entry at {n} is {}", a.at(n, n))));
        }
    }
    Ok(())
}

/// The order map `α([C]) = ||Θ_1^C||` for PSD unit-diagonal `C`.
pub fn alpha(c: &StructureMatrix, radius: usize) -> Result<f64> {
    check_observable(&c.realize(radius)?)?;
    first_moment_norm(c, radius)
}

/// For `C = D ∗ E` with `E` PSD and unit-diagonal: whether `α(C) <= α(D)`.
pub fn order_check(c: &StructureMatrix, d: &StructureMatrix, e: &StructureMatrix, radius: usize) -> Result<bool> {
    let (cw, dw, ew) = (c.realize(radius)?, d.realize(radius)?, e.realize(radius)?);
    check_observable(&ew)?;
    let product = schur_product(&dw, &ew)?;
    let scale = product.max_abs().max(1.0);
    if cw.max_abs_diff(&product)? > 1e-12 * scale {
        return Err(Error::InvalidArgument("C is not the Schur product D ∗ E on the window".into()));
    }
    Ok(alpha(c, radius)? <= alpha(d, radius)? + 1e-9)
}

/// Window quantities that can be swept over `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `S^C = max |c_nm|`.
    SupEntry,
    /// `||C||_{2,∞}`.
    TwoInf,
    /// `||Θ_1||`.
    Theta1,
    /// `||Θ_1 - diag Θ_1||`; for the ones family this is `||B_1||`.
    Theta1OffDiagonal,
    /// `||V_k|| = max_n |c_{n,n+k}|`.
    VkMax(i64),
    /// [`observable_norm_estimate`] with a 64-point grid.
    ObsLower,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::SupEntry => f.write_str("S"),
            Quantity::TwoInf => f.write_str("two_inf"),
            Quantity::Theta1 => f.write_str("theta1"),
            Quantity::Theta1OffDiagonal => f.write_str("theta1_offdiag"),
            Quantity::VkMax(k) => write!(f, "vk_max({k})"),
            Quantity::ObsLower => f.write_str("obs_lower"),
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let q = match s {
            "S" => Quantity::SupEntry,
            "two_inf" => Quantity::TwoInf,
            "theta1" => Quantity::Theta1,
            "theta1_offdiag" => Quantity::Theta1OffDiagonal,
            "obs_lower" => Quantity::ObsLower,
            _ => {
                let k = s
                    .strip_prefix("vk_max(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.trim().parse().ok())
                    .ok_or_else(|| Error::UnknownQuantity(s.to_string()))?;
                Quantity::VkMax(k)
            }
        };
        Ok(q)
    }
}

impl Quantity {
    pub fn evaluate(&self, c: &StructureMatrix, radius: usize, seed: u64) -> Result<f64> {
        match *self {
            Quantity::SupEntry => sup_entry(c, radius),
            Quantity::TwoInf => pq_norm(&c.realize(radius)?, PNorm::Two, PNorm::Inf),
            Quantity::Theta1 => first_moment_norm(c, radius),
            Quantity::Theta1OffDiagonal => operator_norm(&moment_matrix(c, 1, radius)?.off_diagonal_part()),
            Quantity::VkMax(k) => {
                let a = c.realize(radius)?;
                let r = radius as i64;
                Ok((-r..=r)
                    .filter(|n| (n + k).abs() <= r)
                    .map(|n| a.at(n, n + k).norm())
                    .fold(0.0, f64::max))
            }
            Quantity::ObsLower => Ok(observable_norm_estimate(c, radius, 64, seed)?.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Bounded,
    Divergent,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Bounded => "bounded",
            Growth::Divergent => "divergent",
        })
    }
}

/// Values of one quantity across windows, with a growth fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub quantity: Quantity,
    pub points: Vec<(usize, f64)>,
    /// Least-squares slope of `ln value` against `ln(2N + 1)`.
    pub slope: f64,
    pub growth: Growth,
}

/// Growth exponent of `values` against window size; 0 for fewer than two points.
pub fn growth_slope(points: &[(usize, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let peak = points.iter().map(|p| p.1).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let xs: Vec<f64> = points.iter().map(|p| ((2 * p.0 + 1) as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Evaluates `quantity` at each radius in `radii`. Windows run concurrently;
/// the result is ordered as `radii`.
pub fn sweep(c: &StructureMatrix, quantity: Quantity, radii: &[usize], seed: u64) -> Result<Sweep> {
    let values: Vec<Result<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = radii
            .iter()
            .map(|&n| scope.spawn(move || quantity.evaluate(c, n, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let points = radii
        .iter()
        .zip(values)
        .map(|(&n, v)| v.map(|v| (n, v)))
        .collect::<Result<Vec<_>>>()?;
    let slope = growth_slope(&points);
    let growth = if slope > DIVERGENCE_SLOPE {
        Growth::Divergent
    } else {
        Growth::Bounded
    };
    Ok(Sweep {
        quantity,
        points,
        slope,
        growth,
    })
}

/// Four-norm summary on one window.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub norm_1inf: f64,
    pub multiplier_lower: f64,
    pub multiplier_upper: f64,
    pub observable_lower: f64,
    pub observable_witness: BorelSet,
    pub first_moment: f64,
}

pub fn norm_report(c: &StructureMatrix, radius: usize, grid: usize, seed: u64) -> Result<NormReport> {
    let bracket = multiplier_bounds(c, radius, seed)?;
    let (observable_lower, observable_witness) = observable_norm_estimate(c, radius, grid, seed)?;
    Ok(NormReport {
        norm_1inf: sup_entry(c, radius)?,
        multiplier_lower: bracket.lower,
        multiplier_upper: bracket.upper,
        observable_lower,
        observable_witness,
        first_moment: first_moment_norm(c, radius)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ExtensibleCertified,
    NotExtensibleEvidence,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ExtensibleCertified => "EXTENSIBLE_CERTIFIED",
            Verdict::NotExtensibleEvidence => "NOT_EXTENSIBLE_EVIDENCE",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// A sufficient criterion that held, with the window data backing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `i`: global PSD with bounded diagonal; `ii`: bounded factorization;
    /// `iii`: bounded row 2-norms.
    pub criterion: &'static str,
    pub window: usize,
    pub value: f64,
    pub detail: String,
}

/// One window of the report sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub radius: usize,
    pub theta1: f64,
    pub sup_entry: f64,
    pub two_inf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensibilityReport {
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
    pub sweep: Vec<SweepRecord>,
    pub fits: Vec<Sweep>,
    /// Window evidence contradicting declared family metadata.
    pub warnings: Vec<String>,
}

pub fn extensibility_report(c: &StructureMatrix, radii: &[usize], seed: u64) -> Result<ExtensibilityReport> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("sweep list is empty".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sweep list must be strictly increasing".into()));
    }
    let s = sweep(c, Quantity::SupEntry, radii, seed)?;
    let two = sweep(c, Quantity::TwoInf, radii, seed)?;
    let theta = sweep(c, Quantity::Theta1, radii, seed)?;
    let last = *radii.last().expect("nonempty");

    let mut certificates = Vec::new();
    let mut warnings = Vec::new();
    if let Family::RankOne { v, u } = c.family() {
        warnings.extend(v.tag_contradiction(last).map(|w| format!("v: {w}")));
        warnings.extend(u.tag_contradiction(last).map(|w| format!("u: {w}")));
    }

    if let Some(bound) = c.declared_psd_diagonal_bound() {
        let mut ok = true;
        let mut diag_max = 0.0f64;
        for &n in radii {
            let a = c.realize(n)?;
            diag_max = a.indices().map(|k| a.at(k, k).re).fold(diag_max, f64::max);
            ok &= is_psd(&a, PSD_TOL);
        }
        if ok && diag_max <= bound * (1.0 + 1e-12) {
            certificates.push(Certificate {
                criterion: "i",
                window: last,
                value: bound,
                detail: format!("PSD on every window, sup c_nn = {diag_max}, declared bound {bound}"),
            });
        } else {
            warnings.push("declared PSD family fails the window check".into());
        }
    }
    if let Some((bp, be)) = c.declared_factorization_bounds() {
        let window_sup = s.points.iter().map(|p| p.1).fold(0.0, f64::max);
        if warnings.is_empty() && window_sup <= bp * be * (1.0 + 1e-12) {
            certificates.push(Certificate {
                criterion: "ii",
                window: last,
                value: bp * be,
                detail: format!("factorization with sup ||ψ_n|| = {bp}, sup ||η_m|| = {be}"),
            });
        }
    }
    if let Some(row) = c.declared_row_bound() {
        let within = two.points.iter().all(|p| p.1 <= row * (1.0 + 1e-12));
        if within && two.growth == Growth::Bounded {
            certificates.push(Certificate {
                criterion: "iii",
                window: last,
                value: row,
                detail: format!("row 2-norms bounded by declared {row}"),
            });
        }
    }

    let verdict = if !certificates.is_empty() {
        Verdict::ExtensibleCertified
    } else if s.growth == Growth::Divergent || theta.growth == Growth::Divergent {
        Verdict::NotExtensibleEvidence
    } else {
        Verdict::Unknown
    };
    let sweep_rows = radii
        .iter()
        .enumerate()
        .map(|(i, &n)| SweepRecord {
            radius: n,
            theta1: theta.points[i].1,
            sup_entry: s.points[i].1,
            two_inf: two.points[i].1,
        })
        .collect();
    Ok(ExtensibilityReport {
        verdict,
        certificates,
        sweep: sweep_rows,
        fits: vec![s, two, theta],
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{identity, log_counterexample, ones, sign_counterexample};
    use std::f64::consts::PI;

    #[test]
    fn quantity_names_round_trip() {
        for q in ["S", "two_inf", "theta1", "theta1_offdiag", "vk_max(-3)", "obs_lower"] {
            assert_eq!(q.parse::<Quantity>().unwrap().to_string(), q);
        }
        assert_eq!("nope".parse::<Quantity>().unwrap_err().name(), "UnknownQuantity");
    }

    #[test]
    fn slope_edge_cases() {
        assert_eq!(growth_slope(&[(4, 2.0)]), 0.0);
        assert_eq!(growth_slope(&[(4, 2.0), (8, 2.0)]), 0.0);
        assert_eq!(growth_slope(&[(4, 0.0), (8, 0.0)]), 0.0);
        let s = growth_slope(&[(4, 81.0), (40, 6561.0)]);
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identity_first_moment_is_pi() {
        assert!((first_moment_norm(&identity(), 6).unwrap() - PI).abs() < 1e-12);
        assert!((alpha(&identity(), 6).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn alpha_rejects_non_observables() {
        let err = alpha(&sign_counterexample(), 3).unwrap_err();
        assert_eq!(err.name(), "NotObservableMatrix");
    }

    #[test]
    fn ones_bracket() {
        let b = multiplier_bounds(&ones(), 4, 0).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!((b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_observable() {
        let (v, w) = observable_norm_estimate(&identity(), 3, 16, 0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(w.is_full());
    }

    #[test]
    fn log_sup_entry() {
        for n in [2usize, 5, 17] {
            assert!((sup_entry(&log_counterexample(), n).unwrap() - (n as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn verdicts() {
        let r = extensibility_report(&identity(), &[4, 8], 0).unwrap();
        assert_eq!(r.verdict, Verdict::ExtensibleCertified);
        let r = extensibility_report(&sign_counterexample(), &[8, 16, 32], 0).unwrap();
        assert_eq!(r.verdict, Verdict::NotExtensibleEvidence);
        assert!(extensibility_report(&ones(), &[], 0).is_err());
        assert!(extensibility_report(&ones(), &[8, 4], 0).is_err());
    }
}
