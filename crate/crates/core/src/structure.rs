//! Structure matrices `C = (c_nm)` as window-independent entry generators.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{WindowMatrix, ONE, ZERO};
use crate::vector::{FiniteVector, GeneralizedVector, Membership};

/// Family labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Ones,
    Identity,
    SignCounterexample,
    LogCounterexample,
    Gram,
    RankOne,
    Phase,
    Dense,
    Custom,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::Ones => "ones",
            FamilyTag::Identity => "identity",
            FamilyTag::SignCounterexample => "sign",
            FamilyTag::LogCounterexample => "log",
            FamilyTag::Gram => "gram",
            FamilyTag::RankOne => "rank_one",
            FamilyTag::Phase => "phase",
            FamilyTag::Dense => "dense",
            FamilyTag::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Vectors `ψ_n` for a Gram family; indices missing from the table use `default`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramTable {
    vectors: BTreeMap<i64, FiniteVector>,
    default: FiniteVector,
}

impl GramTable {
    pub fn new(vectors: BTreeMap<i64, FiniteVector>, default: FiniteVector) -> Self {
        GramTable { vectors, default }
    }

    pub fn vector(&self, n: i64) -> &FiniteVector {
        self.vectors.get(&n).unwrap_or(&self.default)
    }

    pub fn vectors(&self) -> &BTreeMap<i64, FiniteVector> {
        &self.vectors
    }

    pub fn default_vector(&self) -> &FiniteVector {
        &self.default
    }

    /// `sup_n ||ψ_n||²` over the table and the default vector.
    pub fn sup_norm_sqr(&self) -> f64 {
        self.vectors
            .values()
            .chain(std::iter::once(&self.default))
            .map(|v| v.inner(v).re)
            .fold(0.0, f64::max)
    }
}

/// Phase sequence `v_n` for `Y_v = (e^{i(v_n - v_m)})`; missing indices use phase 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseTable {
    phases: BTreeMap<i64, f64>,
}

impl PhaseTable {
    pub fn new<I: IntoIterator<Item = (i64, f64)>>(phases: I) -> Self {
        PhaseTable {
            phases: phases.into_iter().collect(),
        }
    }

    pub fn phase(&self, n: i64) -> f64 {
        self.phases.get(&n).copied().unwrap_or(0.0)
    }

    pub fn phases(&self) -> &BTreeMap<i64, f64> {
        &self.phases
    }

    /// Pointwise sum of phase sequences (the table of `Y_v * Y_w`).
    pub fn add(&self, other: &PhaseTable) -> PhaseTable {
        let mut out = self.phases.clone();
        for (n, w) in &other.phases {
            *out.entry(*n).or_insert(0.0) += w;
        }
        PhaseTable { phases: out }
    }

    pub fn negate(&self) -> PhaseTable {
        PhaseTable {
            phases: self.phases.iter().map(|(n, v)| (*n, -v)).collect(),
        }
    }
}

/// Family metadata carried next to the generator.
#[derive(Debug, Clone)]
pub enum Family {
    Ones,
    Identity,
    SignCounterexample,
    LogCounterexample,
    Gram(Arc<GramTable>),
    RankOne {
        v: GeneralizedVector,
        u: GeneralizedVector,
    },
    Phase(Arc<PhaseTable>),
    Dense(Arc<WindowMatrix>),
    Custom,
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Ones => FamilyTag::Ones,
            Family::Identity => FamilyTag::Identity,
            Family::SignCounterexample => FamilyTag::SignCounterexample,
            Family::LogCounterexample => FamilyTag::LogCounterexample,
            Family::Gram(_) => FamilyTag::Gram,
            Family::RankOne { .. } => FamilyTag::RankOne,
            Family::Phase(_) => FamilyTag::Phase,
            Family::Dense(_) => FamilyTag::Dense,
            Family::Custom => FamilyTag::Custom,
        }
    }
}

type EntryFn = dyn Fn(i64, i64) -> Complex64 + Send + Sync;

/// An infinite complex matrix indexed by ℤ × ℤ.
#[derive(Clone)]
pub struct StructureMatrix {
    generator: Arc<EntryFn>,
    family: Family,
    row_bound: Option<f64>,
}

impl fmt::Debug for StructureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureMatrix")
            .field("family", &self.family.tag())
            .field("row_bound", &self.row_bound)
            .finish_non_exhaustive()
    }
}

impl StructureMatrix {
    fn with_family<F>(family: Family, generator: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        StructureMatrix {
            generator: Arc::new(generator),
            family,
            row_bound: None,
        }
    }

    /// A user-supplied generator with no family guarantees.
    pub fn custom<F>(generator: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        Self::with_family(Family::Custom, generator)
    }

    /// Declares a global bound on the row 2-norms `sup_n (Σ_m |c_nm|²)^{1/2}`.
    pub fn with_row_bound(mut self, bound: f64) -> Self {
        self.row_bound = Some(bound);
        self
    }

    pub fn declared_row_bound(&self) -> Option<f64> {
        self.row_bound
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tag(&self) -> FamilyTag {
        self.family.tag()
    }

    /// The declared radius of a dense payload.
    pub fn dense_radius(&self) -> Option<usize> {
        match &self.family {
            Family::Dense(m) => Some(m.radius()),
            _ => None,
        }
    }

    /// Entry `c_nm`. Dense families refuse indices beyond their radius.
    pub fn entry(&self, n: i64, m: i64) -> Result<Complex64> {
        if let Some(r) = self.dense_radius() {
            let req = n.unsigned_abs().max(m.unsigned_abs()) as usize;
            if req > r {
                return Err(Error::RadiusExceeded {
                    requested: req,
                    declared: r,
                });
            }
        }
        Ok((self.generator)(n, m))
    }

    /// Checks that the family can be realized on the window of radius `radius`.
    pub fn check_radius(&self, radius: usize) -> Result<()> {
        match self.dense_radius() {
            Some(r) if radius > r => Err(Error::RadiusExceeded {
                requested: radius,
                declared: r,
            }),
            _ => Ok(()),
        }
    }

    /// Truncation to the window `[-N, N]`.
    pub fn realize(&self, radius: usize) -> Result<WindowMatrix> {
        self.check_radius(radius)?;
        if let Family::Dense(m) = &self.family {
            return m.truncate(radius);
        }
        WindowMatrix::from_fn(radius, |n, m| (self.generator)(n, m))
    }

    /// For families whose metadata guarantees positive semidefiniteness on all
    /// of ℤ × ℤ: the declared bound on `sup_n c_nn`.
    pub fn declared_psd_diagonal_bound(&self) -> Option<f64> {
        match &self.family {
            Family::Ones | Family::Identity | Family::Phase(_) => Some(1.0),
            Family::Gram(t) => Some(t.sup_norm_sqr()),
            _ => None,
        }
    }

    /// For families that carry a factorization `c_nm = ⟨ψ_n|η_m⟩` with bounded
    /// vector sequences: `(sup ||ψ_n||, sup ||η_m||)`.
    pub fn declared_factorization_bounds(&self) -> Option<(f64, f64)> {
        match &self.family {
            Family::Ones | Family::Identity | Family::Phase(_) => Some((1.0, 1.0)),
            Family::Gram(t) => {
                let b = t.sup_norm_sqr().sqrt();
                Some((b, b))
            }
            Family::RankOne { v, u } => match (v.membership(), u.membership()) {
                (Membership::Hinf { bound: bv }, Membership::Hinf { bound: bu }) => Some((bv, bu)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Entrywise product with another structure matrix. Phase tables combine;
    /// everything else becomes a custom generator.
    pub fn schur(&self, other: &StructureMatrix) -> StructureMatrix {
        if let (Family::Phase(a), Family::Phase(b)) = (&self.family, &other.family) {
            return phase_matrix(a.add(b));
        }
        let (f, g) = (self.generator.clone(), other.generator.clone());
        let mut out = StructureMatrix::custom(move |n, m| f(n, m) * g(n, m));
        if let (Family::Dense(a), Family::Dense(b)) = (&self.family, &other.family) {
            let r = a.radius().min(b.radius());
            if let (Ok(a), Ok(b)) = (a.truncate(r), b.truncate(r)) {
                if let Ok(prod) = crate::matrix::schur_product(&a, &b) {
                    out = dense(prod);
                }
            }
        }
        out
    }
}

/// All entries 1.
pub fn ones() -> StructureMatrix {
    StructureMatrix::with_family(Family::Ones, |_, _| ONE)
}

/// `δ_nm`.
pub fn identity() -> StructureMatrix {
    StructureMatrix::with_family(Family::Identity, |n, m| if n == m { ONE } else { ZERO }).with_row_bound(1.0)
}

/// `c_nm = 1` for `n > m`, `-1` for `n < m`, `0` on the diagonal.
pub fn sign_counterexample() -> StructureMatrix {
    StructureMatrix::with_family(Family::SignCounterexample, |n, m| Complex64::new((n - m).signum() as f64, 0.0))
}

/// The matrix `C^B` whose first-moment form is `B`:
/// `c_nm = i(n - m) b_nm + π⁻¹ b_nn δ_nm`.
pub fn first_moment_preimage<F>(b: F) -> StructureMatrix
where
    F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
{
    StructureMatrix::custom(move |n, m| preimage_entry(&b, n, m))
}

fn preimage_entry<F: Fn(i64, i64) -> Complex64>(b: &F, n: i64, m: i64) -> Complex64 {
    if n == m {
        b(n, n) / PI
    } else {
        Complex64::new(0.0, (n - m) as f64) * b(n, m)
    }
}

/// `γ_n = n⁻¹ ln n` for `n >= 1`, else 0.
pub fn log_gamma(n: i64) -> f64 {
    if n >= 1 {
        (n as f64).ln() / n as f64
    } else {
        0.0
    }
}

/// `C^B` for `B = |γ⟩⟨φ_0|`: bounded first moment but `c_n0 = i ln n` unbounded.
pub fn log_counterexample() -> StructureMatrix {
    let b = |n: i64, m: i64| if m == 0 { Complex64::new(log_gamma(n), 0.0) } else { ZERO };
    StructureMatrix::with_family(Family::LogCounterexample, move |n, m| preimage_entry(&b, n, m))
}

/// Gram matrix `c_nm = ⟨ψ_n|ψ_m⟩`.
pub fn gram<I>(vectors: I, default_vector: FiniteVector) -> StructureMatrix
where
    I: IntoIterator<Item = (i64, FiniteVector)>,
{
    let table = Arc::new(GramTable::new(vectors.into_iter().collect(), default_vector));
    let t = table.clone();
    StructureMatrix::with_family(Family::Gram(table), move |n, m| t.vector(n).inner(t.vector(m)))
}

/// `c_nm = v_n · conj(u_m)`.
pub fn rank_one(v: GeneralizedVector, u: GeneralizedVector) -> StructureMatrix {
    let (gv, gu) = (v.clone(), u.clone());
    StructureMatrix::with_family(Family::RankOne { v, u }, move |n, m| gv.coeff(n) * gu.coeff(m).conj())
}

/// `Y_v = (e^{i(v_n - v_m)})`.
pub fn phase_matrix(phases: PhaseTable) -> StructureMatrix {
    let table = Arc::new(phases);
    let t = table.clone();
    StructureMatrix::with_family(Family::Phase(table), move |n, m| {
        Complex64::from_polar(1.0, t.phase(n) - t.phase(m))
    })
}

/// A finite payload; queries beyond its radius are refused.
pub fn dense(matrix: WindowMatrix) -> StructureMatrix {
    let payload = Arc::new(matrix);
    let p = payload.clone();
    StructureMatrix::with_family(Family::Dense(payload), move |n, m| p.get(n, m).unwrap_or(ZERO))
}

/// Parameterless families by name.
pub fn builtin(name: &str) -> Result<StructureMatrix> {
    match name {
        "ones" => Ok(ones()),
        "identity" => Ok(identity()),
        "sign" | "sign_counterexample" => Ok(sign_counterexample()),
        "log" | "log_counterexample" => Ok(log_counterexample()),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ones_window() {
        assert_eq!(ones().realize(1).unwrap(), WindowMatrix::ones(1));
    }

    #[test]
    fn sign_window() {
        let s = sign_counterexample().realize(1).unwrap();
        let expected = [[0.0, -1.0, -1.0], [1.0, 0.0, -1.0], [1.0, 1.0, 0.0]];
        for (i, n) in (-1..=1).enumerate() {
            for (j, m) in (-1..=1).enumerate() {
                assert_eq!(s.at(n, m), c(expected[i][j], 0.0));
            }
        }
    }

    #[test]
    fn log_entries() {
        let l = log_counterexample();
        assert_eq!(l.entry(0, 0).unwrap(), ZERO);
        assert_eq!(l.entry(1, 0).unwrap(), ZERO);
        for n in 2..50 {
            let z = l.entry(n, 0).unwrap();
            assert!(z.re.abs() < 1e-15);
            assert!((z.im - (n as f64).ln()).abs() < 1e-13);
        }
        assert_eq!(l.entry(3, 1).unwrap(), ZERO);
        assert_eq!(l.entry(-3, 0).unwrap(), ZERO);
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("ones").unwrap().tag(), FamilyTag::Ones);
        assert_eq!(builtin("sign").unwrap().tag(), FamilyTag::SignCounterexample);
        assert_eq!(builtin("log").unwrap().tag(), FamilyTag::LogCounterexample);
        assert!(matches!(builtin("nope"), Err(Error::UnknownFamily(_))));
        let d = sign_counterexample().realize(5).unwrap();
        for n in -5..=5 {
            assert_eq!(d.at(n, n), ZERO);
        }
    }

    #[test]
    fn gram_basic_cases() {
        let g = gram(std::iter::empty(), FiniteVector::basis(0));
        assert_eq!(g.realize(2).unwrap(), WindowMatrix::ones(2));
        let id = gram((-2..=2).map(|n| (n, FiniteVector::basis(n))), FiniteVector::new());
        assert_eq!(id.realize(2).unwrap(), WindowMatrix::identity(2));
    }

    #[test]
    fn rank_one_cases() {
        let one = GeneralizedVector::constant(ONE);
        assert_eq!(rank_one(one.clone(), one.clone()).realize(2).unwrap(), WindowMatrix::ones(2));
        let v = GeneralizedVector::from_finite(FiniteVector::basis(0));
        let u = GeneralizedVector::new(Membership::Vdual, |n| c(n as f64, 1.0));
        let r = rank_one(v, u).realize(3).unwrap();
        for n in -3..=3 {
            for m in -3..=3 {
                if n != 0 {
                    assert_eq!(r.at(n, m), ZERO);
                } else {
                    assert_eq!(r.at(n, m), c(m as f64, -1.0));
                }
            }
        }
    }

    #[test]
    fn phase_cases() {
        assert_eq!(phase_matrix(PhaseTable::default()).realize(2).unwrap(), WindowMatrix::ones(2));
        let t = PhaseTable::new([(-1, 0.3), (0, 2.0), (2, 5.5)]);
        let y = phase_matrix(t.clone());
        let prod = y.schur(&phase_matrix(t.negate()));
        assert_eq!(prod.tag(), FamilyTag::Phase);
        let w = prod.realize(3).unwrap();
        assert!(w.max_abs_diff(&WindowMatrix::ones(3)).unwrap() < 1e-15);
    }

    #[test]
    fn dense_refuses_extrapolation() {
        let d = dense(WindowMatrix::identity(2));
        assert!(d.realize(2).is_ok());
        assert_eq!(d.realize(1).unwrap(), WindowMatrix::identity(1));
        assert_eq!(
            d.realize(3).unwrap_err(),
            Error::RadiusExceeded {
                requested: 3,
                declared: 2
            }
        );
        assert!(d.entry(0, 3).is_err());
    }
}
