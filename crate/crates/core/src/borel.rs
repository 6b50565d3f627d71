//! Finite unions of half-open arcs of `[0, 2π)` and their interval matrices.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::WindowMatrix;

/// Endpoints closer than this are treated as coincident.
pub const ENDPOINT_EPS: f64 = 1e-15;

/// Half-open arc `[start, end)` with `0 <= start < end <= 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// A finite union of arcs in canonical form: sorted, pairwise disjoint and
/// maximally merged (no two arcs share an endpoint).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BorelSet {
    arcs: Vec<Arc>,
}

impl BorelSet {
    pub fn empty() -> Self {
        BorelSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        BorelSet {
            arcs: vec![Arc { start: 0.0, end: TAU }],
        }
    }

    /// Canonical form of a list of raw arcs `(a, b)` read counterclockwise from
    /// `a` to `b`. Values are reduced mod 2π; `a > b` wraps through 0, and
    /// `b - a >= 2π` is the full circle.
    pub fn normalize(raw_arcs: &[(f64, f64)]) -> Result<Self> {
        let mut pieces = Vec::with_capacity(raw_arcs.len() + 1);
        for &(a, b) in raw_arcs {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite arc endpoint in ({a}, {b})")));
            }
            if a < b && b - a >= TAU - ENDPOINT_EPS {
                return Ok(BorelSet::full());
            }
            let len = (b - a).rem_euclid(TAU);
            if len <= ENDPOINT_EPS || TAU - len <= ENDPOINT_EPS && a >= b {
                return Err(Error::EmptyArc { a, b });
            }
            let mut start = a.rem_euclid(TAU);
            if start >= TAU {
                start = 0.0;
            }
            let end = start + len;
            if end > TAU {
                pieces.push(Arc { start, end: TAU });
                if end - TAU > ENDPOINT_EPS {
                    pieces.push(Arc {
                        start: 0.0,
                        end: end - TAU,
                    });
                }
            } else {
                pieces.push(Arc { start, end });
            }
        }
        Ok(Self::merge(pieces))
    }

    fn merge(mut pieces: Vec<Arc>) -> Self {
        pieces.retain(|a| a.length() > ENDPOINT_EPS);
        pieces.sort_by(|x, y| x.start.total_cmp(&y.start));
        let mut arcs: Vec<Arc> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match arcs.last_mut() {
                Some(last) if p.start <= last.end + ENDPOINT_EPS => {
                    last.end = last.end.max(p.end);
                }
                _ => arcs.push(p),
            }
        }
        BorelSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].start <= ENDPOINT_EPS && self.arcs[0].end >= TAU - ENDPOINT_EPS
    }

    /// Lebesgue measure, in `[0, 2π]`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn complement(&self) -> BorelSet {
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        let mut cursor = 0.0;
        for a in &self.arcs {
            if a.start - cursor > ENDPOINT_EPS {
                out.push(Arc {
                    start: cursor,
                    end: a.start,
                });
            }
            cursor = a.end;
        }
        if TAU - cursor > ENDPOINT_EPS {
            out.push(Arc { start: cursor, end: TAU });
        }
        BorelSet { arcs: out }
    }

    pub fn union(&self, other: &BorelSet) -> BorelSet {
        Self::merge(self.arcs.iter().chain(&other.arcs).copied().collect())
    }

    pub fn intersect(&self, other: &BorelSet) -> BorelSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.arcs.len() && j < other.arcs.len() {
            let (x, y) = (self.arcs[i], other.arcs[j]);
            let start = x.start.max(y.start);
            let end = x.end.min(y.end);
            if end - start > ENDPOINT_EPS {
                out.push(Arc { start, end });
            }
            if x.end < y.end {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::merge(out)
    }

    pub fn is_disjoint(&self, other: &BorelSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// The rotated set `X + θ (mod 2π)`.
    pub fn rotate(&self, theta: f64) -> BorelSet {
        if self.is_full() {
            return BorelSet::full();
        }
        let raw: Vec<(f64, f64)> = self.arcs.iter().map(|a| (a.start + theta, a.end + theta)).collect();
        Self::normalize(&raw).unwrap_or_default()
    }

    /// A random union of at most `max_arcs` arcs (possibly overlapping before merging).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_arcs: usize) -> BorelSet {
        let count = rng.gen_range(1..=max_arcs.max(1));
        let raw: Vec<(f64, f64)> = (0..count)
            .map(|_| {
                let a = rng.gen_range(0.0..TAU);
                let len = rng.gen_range(0.01..TAU * 0.6);
                (a, a + len)
            })
            .collect();
        Self::normalize(&raw).expect("random arcs have positive length")
    }

    /// Fourier coefficient `(1/2π) ∫_X e^{ikθ} dθ`, i.e. `i(X)_{nm}` for `n - m = k`.
    pub fn fourier_coefficient(&self, k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(self.measure() / TAU, 0.0);
        }
        if self.is_full() {
            return Complex64::new(0.0, 0.0);
        }
        let kf = k as f64;
        self.arcs
            .iter()
            .map(|a| {
                // (e^{ikb} - e^{ika}) / (2πik) = sin(k(b-a)/2)/(πk) · e^{ik(a+b)/2}
                let amp = (0.5 * kf * a.length()).sin() / (PI * kf);
                Complex64::from_polar(amp, 0.5 * kf * (a.start + a.end))
            })
            .sum()
    }
}

impl fmt::Display for BorelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        if self.is_full() {
            return f.write_str("full");
        }
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", a.start, a.end)?;
        }
        Ok(())
    }
}

/// Parses `full`, `empty`, or comma-separated `a:b` arcs in radians.
impl FromStr for BorelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "full" => return Ok(BorelSet::full()),
            "empty" | "" => return Ok(BorelSet::empty()),
            _ => {}
        }
        let mut raw = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("arc `{part}` is not of the form a:b")))?;
            let a: f64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad arc endpoint `{a}`")))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad arc endpoint `{b}`")))?;
            raw.push((a, b));
        }
        BorelSet::normalize(&raw)
    }
}

/// The interval matrix `i(X)` on the window `[-N, N]`.
///
/// Entries come from closed-form arc integrals; the result is Toeplitz and
/// Hermitian.
pub fn interval_matrix(x: &BorelSet, radius: usize) -> WindowMatrix {
    let r = radius as i64;
    let coeffs: Vec<Complex64> = (-2 * r..=2 * r).map(|k| x.fourier_coefficient(k)).collect();
    WindowMatrix::from_fn_unchecked(radius, |n, m| coeffs[(n - m + 2 * r) as usize])
}
