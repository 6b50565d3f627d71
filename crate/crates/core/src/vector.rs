//! Coefficient sequences over ℤ: finitely supported vectors and
//! generator-backed generalized vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::matrix::{PNorm, ZERO};

/// A finitely supported sequence `v = Σ v_n φ_n`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteVector {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FiniteVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Basis vector `φ_n`.
    pub fn basis(n: i64) -> Self {
        Self::from_pairs([(n, Complex64::new(1.0, 0.0))])
    }

    /// Builds from `(index, coefficient)` pairs; repeated indices accumulate.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (n, z) in pairs {
            *coeffs.entry(n).or_insert(ZERO) += z;
        }
        coeffs.retain(|_, z| *z != ZERO);
        FiniteVector { coeffs }
    }

    /// Coefficient at `n` (zero off the support).
    pub fn get(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(n, z)| (*n, *z))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n|` in the support (0 for the zero vector).
    pub fn radius(&self) -> usize {
        self.coeffs.keys().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> FiniteVector {
        FiniteVector::from_pairs(self.iter().map(|(n, z)| (n, z * c)))
    }

    pub fn add(&self, other: &FiniteVector) -> FiniteVector {
        FiniteVector::from_pairs(self.iter().chain(other.iter()))
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FiniteVector) -> Complex64 {
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let s: Complex64 = small
            .iter()
            .map(|(n, z)| {
                let w = large.get(n);
                if flip {
                    w.conj() * z
                } else {
                    z.conj() * w
                }
            })
            .sum();
        s
    }

    pub fn p_norm(&self, p: PNorm) -> f64 {
        vector_p_norm(self, p)
    }

    /// Unit vector in the same direction (the zero vector is returned unchanged).
    pub fn normalized(&self) -> FiniteVector {
        let n = self.p_norm(PNorm::Two);
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }
}

/// `ℓ_p` norm of the coefficient sequence.
pub fn vector_p_norm(v: &FiniteVector, p: PNorm) -> f64 {
    match p {
        PNorm::One => v.iter().map(|(_, z)| z.norm()).sum(),
        PNorm::Two => v.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt(),
        PNorm::Inf => v.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max),
    }
}

/// Declared sequence-space membership of a generalized vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Membership {
    H1,
    H2,
    /// Bounded, with the declared bound `sup_n |v_n| <= bound`.
    Hinf { bound: f64 },
    /// Arbitrary sequence (algebraic antidual).
    Vdual,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::H1 => f.write_str("H1"),
            Membership::H2 => f.write_str("H2"),
            Membership::Hinf { bound } => write!(f, "Hinf(bound={bound})"),
            Membership::Vdual => f.write_str("Vdual"),
        }
    }
}

type SeqFn = dyn Fn(i64) -> Complex64 + Send + Sync;

/// A sequence `n ↦ v_n` over all of ℤ with a declared membership tag.
#[derive(Clone)]
pub struct GeneralizedVector {
    generator: Arc<SeqFn>,
    membership: Membership,
}

impl fmt::Debug for GeneralizedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralizedVector")
            .field("membership", &self.membership)
            .finish_non_exhaustive()
    }
}

impl GeneralizedVector {
    pub fn new<F>(membership: Membership, generator: F) -> Self
    where
        F: Fn(i64) -> Complex64 + Send + Sync + 'static,
    {
        GeneralizedVector {
            generator: Arc::new(generator),
            membership,
        }
    }

    /// The finitely supported vector `v`, tagged `H1`.
    pub fn from_finite(v: FiniteVector) -> Self {
        GeneralizedVector::new(Membership::H1, move |n| v.get(n))
    }

    /// The constant sequence `c` (tagged `Hinf` with bound `|c|`).
    pub fn constant(c: Complex64) -> Self {
        GeneralizedVector::new(Membership::Hinf { bound: c.norm() }, move |_| c)
    }

    pub fn zero() -> Self {
        GeneralizedVector::new(Membership::H1, |_| ZERO)
    }

    #[inline]
    pub fn coeff(&self, n: i64) -> Complex64 {
        (self.generator)(n)
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    /// Coefficients on `-radius..=radius`.
    pub fn window(&self, radius: usize) -> Vec<Complex64> {
        let r = radius as i64;
        (-r..=r).map(|n| self.coeff(n)).collect()
    }

    /// `sup_{|n| <= radius} |v_n|`.
    pub fn window_sup(&self, radius: usize) -> f64 {
        self.window(radius).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The window slice as a finite vector.
    pub fn truncate(&self, radius: usize) -> FiniteVector {
        let r = radius as i64;
        FiniteVector::from_pairs((-r..=r).map(|n| (n, self.coeff(n))))
    }

    /// `None` when the window is consistent with the declared tag, otherwise a
    /// description of the contradiction. Only the `Hinf` bound is checkable.
    pub fn tag_contradiction(&self, radius: usize) -> Option<String> {
        match self.membership {
            Membership::Hinf { bound } => {
                let sup = self.window_sup(radius);
                (sup > bound * (1.0 + 1e-12)).then(|| {
                    format!("window sup {sup} at radius {radius} exceeds declared Hinf bound {bound}")
                })
            }
            _ => None,
        }
    }
}
