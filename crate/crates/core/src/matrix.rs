//! Dense complex matrices over a symmetric index window `[-N, N]`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral;

/// Zero constant, shorter than spelling out `Complex64::new(0.0, 0.0)`.
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Unit constant.
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A `(2N+1) x (2N+1)` complex matrix whose rows and columns are labelled
/// by the integers `-N..=N`.
///
/// Entries are stored row-major; entry `(n, m)` lives at
/// `(n + N) * (2N + 1) + (m + N)`.
#[derive(Clone, PartialEq)]
pub struct WindowMatrix {
    radius: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for WindowMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindowMatrix")
            .field("radius", &self.radius)
            .field("entries", &self.entries)
            .finish()
    }
}

impl WindowMatrix {
    pub fn zeros(radius: usize) -> Self {
        let dim = 2 * radius + 1;
        WindowMatrix {
            radius,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(radius: usize) -> Self {
        Self::from_fn_unchecked(radius, |n, m| if n == m { ONE } else { ZERO })
    }

    /// All-ones window.
    pub fn ones(radius: usize) -> Self {
        Self::from_fn_unchecked(radius, |_, _| ONE)
    }

    /// Builds a matrix from an entry generator, rejecting NaN or infinite values.
    pub fn from_fn<F>(radius: usize, f: F) -> Result<Self>
    where
        F: FnMut(i64, i64) -> Complex64,
    {
        let out = Self::from_fn_unchecked(radius, f);
        out.check_finite()?;
        Ok(out)
    }

    pub(crate) fn from_fn_unchecked<F>(radius: usize, mut f: F) -> Self
    where
        F: FnMut(i64, i64) -> Complex64,
    {
        let r = radius as i64;
        let dim = 2 * radius + 1;
        let mut entries = Vec::with_capacity(dim * dim);
        for n in -r..=r {
            for m in -r..=r {
                entries.push(f(n, m));
            }
        }
        WindowMatrix { radius, entries }
    }

    /// Wraps a row-major entry vector of length `(2N+1)^2`.
    pub fn from_entries(radius: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 2 * radius + 1;
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for radius {radius}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let out = WindowMatrix { radius, entries };
        out.check_finite()?;
        Ok(out)
    }

    fn check_finite(&self) -> Result<()> {
        if let Some(pos) = self.entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            let (n, m) = self.position_to_index(pos);
            return Err(Error::NonFinite { n, m });
        }
        Ok(())
    }

    fn position_to_index(&self, pos: usize) -> (i64, i64) {
        let dim = self.dim();
        let r = self.radius as i64;
        ((pos / dim) as i64 - r, (pos % dim) as i64 - r)
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Side length `2N + 1`.
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.radius + 1
    }

    /// Row-major entries, rows ordered `-N..=N`.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// The index range `-N..=N`.
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        let r = self.radius as i64;
        -r..=r
    }

    #[inline]
    pub fn contains(&self, n: i64, m: i64) -> bool {
        let r = self.radius as i64;
        n.abs() <= r && m.abs() <= r
    }

    #[inline]
    fn offset(&self, n: i64, m: i64) -> usize {
        let r = self.radius as i64;
        ((n + r) as usize) * self.dim() + (m + r) as usize
    }

    /// Entry `(n, m)`; errors outside the window.
    pub fn get(&self, n: i64, m: i64) -> Result<Complex64> {
        if !self.contains(n, m) {
            return Err(Error::IndexOutOfWindow {
                n,
                m,
                radius: self.radius,
            });
        }
        Ok(self.entries[self.offset(n, m)])
    }

    /// Entry `(n, m)`.
    ///
    /// # Panics
    /// If `(n, m)` lies outside the window.
    #[inline]
    pub fn at(&self, n: i64, m: i64) -> Complex64 {
        assert!(
            self.contains(n, m),
            "index ({n}, {m}) outside window of radius {}",
            self.radius
        );
        self.entries[self.offset(n, m)]
    }

    /// Returns a copy with entry `(n, m)` replaced.
    pub fn with_entry(mut self, n: i64, m: i64, value: Complex64) -> Result<Self> {
        if !self.contains(n, m) {
            return Err(Error::IndexOutOfWindow {
                n,
                m,
                radius: self.radius,
            });
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite { n, m });
        }
        let off = self.offset(n, m);
        self.entries[off] = value;
        Ok(self)
    }

    /// Applies `f(n, m, entry)` to every entry.
    pub fn map_indexed<F>(&self, mut f: F) -> WindowMatrix
    where
        F: FnMut(i64, i64, Complex64) -> Complex64,
    {
        WindowMatrix::from_fn_unchecked(self.radius, |n, m| f(n, m, self.at(n, m)))
    }

    pub fn scale(&self, c: Complex64) -> WindowMatrix {
        WindowMatrix {
            radius: self.radius,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    fn zip_with<F>(&self, other: &WindowMatrix, f: F) -> Result<WindowMatrix>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        if self.radius != other.radius {
            return Err(Error::WindowMismatch {
                left: self.radius,
                right: other.radius,
            });
        }
        Ok(WindowMatrix {
            radius: self.radius,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn add(&self, other: &WindowMatrix) -> Result<WindowMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &WindowMatrix) -> Result<WindowMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> WindowMatrix {
        WindowMatrix::from_fn_unchecked(self.radius, |n, m| self.at(m, n).conj())
    }

    /// Largest entry modulus (0 for the zero matrix).
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &WindowMatrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn diagonal_part(&self) -> WindowMatrix {
        self.map_indexed(|n, m, z| if n == m { z } else { ZERO })
    }

    pub fn off_diagonal_part(&self) -> WindowMatrix {
        self.map_indexed(|n, m, z| if n == m { ZERO } else { z })
    }

    /// `true` if `|a(n,m) - conj(a(m,n))| <= tol` everywhere.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        for n in self.indices() {
            for m in n..=self.radius as i64 {
                if (self.at(n, m) - self.at(m, n).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction to the smaller window `[-r, r]`.
    pub fn truncate(&self, radius: usize) -> Result<WindowMatrix> {
        if radius > self.radius {
            return Err(Error::RadiusExceeded {
                requested: radius,
                declared: self.radius,
            });
        }
        Ok(WindowMatrix::from_fn_unchecked(radius, |n, m| self.at(n, m)))
    }

    /// `A x` for a coefficient vector ordered like the rows.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        debug_assert_eq!(x.len(), dim);
        self.entries
            .chunks_exact(dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A* x`.
    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        debug_assert_eq!(x.len(), dim);
        let mut out = vec![ZERO; dim];
        for (row, xi) in self.entries.chunks_exact(dim).zip(x) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    /// Dense matrix product on the same window.
    pub fn matmul(&self, other: &WindowMatrix) -> Result<WindowMatrix> {
        if self.radius != other.radius {
            return Err(Error::WindowMismatch {
                left: self.radius,
                right: other.radius,
            });
        }
        let dim = self.dim();
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entries[i * dim + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * dim..(k + 1) * dim];
                for (o, b) in entries[i * dim..(i + 1) * dim].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(WindowMatrix {
            radius: self.radius,
            entries,
        })
    }
}

/// Entrywise (Schur / Hadamard) product.
pub fn schur_product(a: &WindowMatrix, b: &WindowMatrix) -> Result<WindowMatrix> {
    a.zip_with(b, |x, y| x * y)
}

/// The exponents `p` admitted for sequence-space norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PNorm {
    One,
    Two,
    Inf,
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::One => f.write_str("1"),
            PNorm::Two => f.write_str("2"),
            PNorm::Inf => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(PNorm::One),
            "2" => Ok(PNorm::Two),
            "inf" | "∞" => Ok(PNorm::Inf),
            other => Err(Error::Parse(format!("p must be 1, 2 or inf, got `{other}`"))),
        }
    }
}

/// `(p, q)` operator norm `sup { ||A v||_q : ||v||_p <= 1 }`.
///
/// Supported pairs: `(1,2)`, `(1,inf)`, `(2,2)`, `(2,inf)`, `(inf,inf)`.
pub fn pq_norm(a: &WindowMatrix, p: PNorm, q: PNorm) -> Result<f64> {
    let dim = a.dim();
    let rows = || a.entries.chunks_exact(dim);
    let column = |c: usize| (0..dim).map(move |r| a.entries[r * dim + c]);
    match (p, q) {
        (PNorm::One, PNorm::Two) => Ok((0..dim)
            .map(|c| column(c).map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)),
        (PNorm::One, PNorm::Inf) => Ok(a.max_abs()),
        (PNorm::Two, PNorm::Two) => spectral::operator_norm(a),
        (PNorm::Two, PNorm::Inf) => Ok(rows()
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)),
        (PNorm::Inf, PNorm::Inf) => Ok(rows()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)),
        (p, q) => Err(Error::UnsupportedNormPair {
            p: p.to_string(),
            q: q.to_string(),
        }),
    }
}

/// `e^{iθZ} A e^{-iθZ}`: entry `(n, m)` picks up the phase `e^{i(n-m)θ}`.
pub fn conjugate_by_phase(a: &WindowMatrix, theta: f64) -> WindowMatrix {
    a.map_indexed(|n, m, z| {
        if n == m {
            z
        } else {
            z * Complex64::from_polar(1.0, (n - m) as f64 * theta)
        }
    })
}

/// Default relative slack for [`is_psd`].
pub const PSD_TOL: f64 = 1e-10;

/// Positive-semidefiniteness test relative to the largest entry modulus.
///
/// Returns `false` for matrices that are not Hermitian within `tol * scale`;
/// otherwise checks that `A + tol * scale * I` admits a Cholesky factorization,
/// which is equivalent to `λ_min(A) > -tol * scale`.
pub fn is_psd(a: &WindowMatrix, tol: f64) -> bool {
    let scale = match a.max_abs() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    if !a.is_hermitian(tol * scale) {
        return false;
    }
    let dim = a.dim();
    let shift = tol * scale;
    // Hermitian part, shifted; lower-triangular Cholesky in place.
    let mut l = vec![ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let aij = 0.5 * (a.entries[i * dim + j] + a.entries[j * dim + i].conj());
            l[i * dim + j] = aij;
        }
        l[i * dim + i] += shift;
    }
    for j in 0..dim {
        let mut d = l[j * dim + j].re;
        for k in 0..j {
            d -= l[j * dim + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * dim + j] = Complex64::new(d, 0.0);
        for i in (j + 1)..dim {
            let mut s = l[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k].conj();
            }
            l[i * dim + j] = s / d;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accessors_reject_out_of_window() {
        let a = WindowMatrix::identity(2);
        assert_eq!(a.dim(), 5);
        assert_eq!(a.entries().len(), 25);
        assert_eq!(a.get(-2, 2).unwrap(), ZERO);
        assert!(matches!(a.get(3, 0), Err(Error::IndexOutOfWindow { .. })));
        assert!(matches!(a.get(0, -3), Err(Error::IndexOutOfWindow { .. })));
    }

    #[test]
    fn from_fn_rejects_non_finite() {
        let err = WindowMatrix::from_fn(1, |n, m| if n == 1 && m == 0 { c(f64::NAN, 0.0) } else { ONE });
        assert_eq!(err.unwrap_err(), Error::NonFinite { n: 1, m: 0 });
    }

    #[test]
    fn schur_with_ones_is_identity_map() {
        let a = WindowMatrix::from_fn(2, |n, m| c(n as f64, m as f64 * 0.5)).unwrap();
        let out = schur_product(&a, &WindowMatrix::ones(2)).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn schur_single_entry_picks_one_value() {
        let a = WindowMatrix::from_fn(2, |n, m| c(1.0 + n as f64, -(m as f64))).unwrap();
        let s = WindowMatrix::zeros(2).with_entry(0, 1, ONE).unwrap();
        let out = schur_product(&s, &a).unwrap();
        for n in -2..=2 {
            for m in -2..=2 {
                let expected = if (n, m) == (0, 1) { a.at(0, 1) } else { ZERO };
                assert_eq!(out.at(n, m), expected);
            }
        }
    }

    #[test]
    fn schur_window_mismatch() {
        let err = schur_product(&WindowMatrix::zeros(1), &WindowMatrix::zeros(2)).unwrap_err();
        assert_eq!(err, Error::WindowMismatch { left: 1, right: 2 });
    }

    #[test]
    fn pq_norm_closed_forms() {
        let a = WindowMatrix::identity(3);
        assert!((pq_norm(&a, PNorm::Two, PNorm::Two).unwrap() - 1.0).abs() < 1e-12);
        let b = WindowMatrix::from_fn(1, |n, m| c((n - m) as f64 / 2.0, 0.0)).unwrap();
        assert_eq!(pq_norm(&b, PNorm::One, PNorm::Inf).unwrap(), 1.0);
        // rows: [0,-.5,-1], [.5,0,-.5], [1,.5,0]
        assert!((pq_norm(&b, PNorm::Inf, PNorm::Inf).unwrap() - 1.5).abs() < 1e-15);
        assert!((pq_norm(&b, PNorm::Two, PNorm::Inf).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((pq_norm(&b, PNorm::One, PNorm::Two).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pq_norm_rejects_other_pairs() {
        let a = WindowMatrix::identity(1);
        for (p, q) in [
            (PNorm::One, PNorm::One),
            (PNorm::Two, PNorm::One),
            (PNorm::Inf, PNorm::One),
            (PNorm::Inf, PNorm::Two),
        ] {
            assert!(matches!(pq_norm(&a, p, q), Err(Error::UnsupportedNormPair { .. })));
        }
    }

    #[test]
    fn phase_conjugation() {
        let a = WindowMatrix::from_fn(2, |n, m| c(n as f64 + 0.3, m as f64)).unwrap();
        assert_eq!(conjugate_by_phase(&a, 0.0), a);
        let d = a.diagonal_part();
        assert_eq!(conjugate_by_phase(&d, 1.234), d);
        let rotated = conjugate_by_phase(&a, 0.7);
        for n in -2..=2 {
            for m in -2..=2 {
                assert!((rotated.at(n, m).norm() - a.at(n, m).norm()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&WindowMatrix::identity(3), PSD_TOL));
        assert!(is_psd(&WindowMatrix::ones(3), PSD_TOL));
        assert!(is_psd(&WindowMatrix::zeros(3), PSD_TOL));
        let sign = WindowMatrix::from_fn(3, |n, m| c((n - m).signum() as f64, 0.0)).unwrap();
        assert!(!is_psd(&sign, PSD_TOL));
        let neg = WindowMatrix::identity(1).scale(c(-1.0, 0.0));
        assert!(!is_psd(&neg, PSD_TOL));
    }

    #[test]
    fn truncate_and_adjoint() {
        let a = WindowMatrix::from_fn(3, |n, m| c(n as f64, m as f64)).unwrap();
        let t = a.truncate(1).unwrap();
        assert_eq!(t.at(-1, 1), c(-1.0, 1.0));
        assert!(a.truncate(4).is_err());
        assert_eq!(a.adjoint().at(1, 2), c(2.0, -1.0));
    }
}
