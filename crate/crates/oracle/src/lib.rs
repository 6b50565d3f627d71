//! Brute-force reference computations for checking `covop-core`.
//!
//! Nothing here shares code with the library under test. Matrices are passed
//! as plain row-major slices so the oracles cannot lean on library types.

use num_complex::Complex64;

/// Panel count used by every quadrature check.
pub const SIMPSON_PANELS: usize = 1 << 14;

/// Composite Simpson rule on `[a, b]` with `panels` subintervals (rounded up to even).
pub fn simpson<F>(f: F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for j in 1..panels {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + h * j as f64) * w;
    }
    acc * (h / 3.0)
}

/// `(1/2π) ∫_a^b e^{ikθ} dθ` by Simpson quadrature.
pub fn interval_coefficient(arcs: &[(f64, f64)], k: i64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for &(a, b) in arcs {
        total += simpson(
            |t| Complex64::from_polar(1.0, k as f64 * t),
            a,
            b,
            SIMPSON_PANELS,
        );
    }
    total / (2.0 * std::f64::consts::PI)
}

/// `(1/2π) ∫_0^{2π} g(θ) e^{ikθ} dθ` by Simpson quadrature.
pub fn fourier_moment<G>(g: G, k: i64) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    let two_pi = 2.0 * std::f64::consts::PI;
    simpson(
        |t| g(t) * Complex64::from_polar(1.0, k as f64 * t),
        0.0,
        two_pi,
        SIMPSON_PANELS,
    ) / two_pi
}

/// Elementwise product written as the most literal double loop.
pub fn elementwise_product(dim: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.len(), dim * dim);
    assert_eq!(b.len(), dim * dim);
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for row in 0..dim {
        for col in 0..dim {
            let idx = row * dim + col;
            out[idx] = Complex64::new(
                a[idx].re * b[idx].re - a[idx].im * b[idx].im,
                a[idx].re * b[idx].im + a[idx].im * b[idx].re,
            );
        }
    }
    out
}

/// Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(dim: usize, entries: &[f64]) -> Vec<f64> {
    assert_eq!(entries.len(), dim * dim);
    let mut a = entries.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Eigenvalues (ascending) of a complex Hermitian matrix.
///
/// Uses the real embedding `[[X, -Y], [Y, X]]` of `H = X + iY`, whose spectrum
/// is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    assert_eq!(entries.len(), dim * dim);
    let big = 2 * dim;
    let mut real = vec![0.0; big * big];
    for r in 0..dim {
        for c in 0..dim {
            let z = entries[r * dim + c];
            real[r * big + c] = z.re;
            real[(r + dim) * big + (c + dim)] = z.re;
            real[r * big + (c + dim)] = -z.im;
            real[(r + dim) * big + c] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(big, &real);
    doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Largest singular value of a square matrix via the eigenvalues of `A* A`.
pub fn largest_singular_value(dim: usize, entries: &[Complex64]) -> f64 {
    let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += entries[k * dim + i].conj() * entries[k * dim + j];
            }
            gram[i * dim + j] = acc;
        }
    }
    let eig = hermitian_eigenvalues(dim, &gram);
    eig.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Fejér kernel by its defining double sum `(1/M) Σ_{N<M} Σ_{|k|≤N} e^{ikθ}`.
pub fn fejer_double_sum(order: usize, theta: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..order as i64 {
        for k in -n..=n {
            acc += Complex64::from_polar(1.0, k as f64 * theta);
        }
    }
    acc.re / order as f64
}
