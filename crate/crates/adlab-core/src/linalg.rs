//! Dense complex linear algebra helpers shared by every module.
//!
//! All matrices are `nalgebra` dynamic matrices over `Complex64`. Transforms
//! use the unnormalized forward DFT, `X[k] = sum_n x[n] exp(-i 2 pi k n / M)`;
//! every identity in the crate is stated against this one convention.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for v in a.iter() {
        s += v.norm_sqr();
    }
    libm::sqrt(s)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Max absolute deviation from Hermitian symmetry.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let m = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..m {
        for j in i..m {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Replace `a` by its Hermitian part `(a + a^H) / 2`.
pub fn hermitize(a: &mut CMatrix) {
    let m = a.nrows();
    for i in 0..m {
        for j in i..m {
            let v = (a[(i, j)] + a[(j, i)].conj()) * Complex64::new(0.5, 0.0);
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
}

/// Unnormalized forward DFT, `X[k] = sum_n x[n] e^{-i 2 pi k n / M}`.
///
/// Direct O(M^2) evaluation; fine at desk scale and keeps the core
/// dependency-free. Twiddles are indexed mod M so large k*n stays exact.
pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let m = x.len();
    let mut tw = Vec::with_capacity(m);
    for j in 0..m {
        let ang = -2.0 * PI * (j as f64) / (m as f64);
        tw.push(Complex64::new(libm::cos(ang), libm::sin(ang)));
    }
    (0..m)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut c = Complex64::new(0.0, 0.0);
            for (n, &xn) in x.iter().enumerate() {
                let term = xn * tw[(k * n) % m];
                // Kahan step keeps 1e-10-level identities honest at M=512.
                let y = term - c;
                let t = acc + y;
                c = (t - acc) - y;
                acc = t;
            }
            acc
        })
        .collect()
}

/// Inverse of [`dft`]: `x[n] = (1/M) sum_k X[k] e^{+i 2 pi k n / M}`.
pub fn idft(x: &[Complex64]) -> Vec<Complex64> {
    let m = x.len() as f64;
    let conj: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
    dft(&conj)
        .iter()
        .map(|v| v.conj() / m)
        .collect()
}

/// Unitary DFT matrix `F[k][n] = e^{-i 2 pi k n / M} / sqrt(M)`.
pub fn unitary_dft_matrix(m: usize) -> CMatrix {
    let s = 1.0 / libm::sqrt(m as f64);
    CMatrix::from_fn(m, m, |k, n| {
        let ang = -2.0 * PI * ((k * n) % m) as f64 / (m as f64);
        Complex64::new(libm::cos(ang) * s, libm::sin(ang) * s)
    })
}

/// Eigendecomposition of a Hermitian matrix with deterministic output:
/// eigenvalues sorted descending, each eigenvector's largest-modulus
/// component rotated to the positive real axis.
pub struct Eigh {
    pub values: Vec<f64>,
    /// Orthonormal eigenvector columns, same order as `values`.
    pub vectors: CMatrix,
}

pub fn eigh(a: &CMatrix) -> Eigh {
    let se = a.clone().symmetric_eigen();
    let m = a.nrows();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());

    let mut values = Vec::with_capacity(m);
    let mut vectors = CMatrix::zeros(m, m);
    for (col, &src) in order.iter().enumerate() {
        values.push(se.eigenvalues[src]);
        let mut v: CVector = se.eigenvectors.column(src).into_owned();
        let mut imax = 0;
        let mut best = 0.0;
        for (i, z) in v.iter().enumerate() {
            let n = z.norm();
            if n > best {
                best = n;
                imax = i;
            }
        }
        if best > 0.0 {
            let phase = v[imax] / Complex64::new(best, 0.0);
            v *= phase.conj();
        }
        vectors.set_column(col, &v);
    }
    Eigh { values, vectors }
}

/// Cosine of the largest principal angle between `span(a)` and `span(b)`
/// (columns assumed orthonormal): the smallest singular value of `a^H b`.
pub fn min_principal_cosine(a: &CMatrix, b: &CMatrix) -> f64 {
    let prod = a.adjoint() * b;
    let svd = prod.svd(false, false);
    svd.singular_values
        .iter()
        .fold(f64::INFINITY, |acc, &s| acc.min(s))
        .min(1.0)
}

/// Check that columns of `s` are orthonormal to `tol` and return `Ok(())`.
pub fn check_orthonormal(s: &CMatrix, tol: f64) -> Result<(), crate::Error> {
    let g = s.adjoint() * s;
    let r = s.ncols();
    for i in 0..r {
        for j in 0..r {
            let want = if i == j { 1.0 } else { 0.0 };
            if (g[(i, j)] - Complex64::new(want, 0.0)).norm() > tol {
                return Err(crate::Error::InvalidBasis);
            }
        }
    }
    Ok(())
}

/// Matrix accumulator with per-entry Kahan compensation so that the
/// element-list summation order gives reproducible 1e-10-level results.
pub struct CompensatedSum {
    sum: CMatrix,
    comp: CMatrix,
}

impl CompensatedSum {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CompensatedSum {
            sum: CMatrix::zeros(rows, cols),
            comp: CMatrix::zeros(rows, cols),
        }
    }

    pub fn add(&mut self, term: &CMatrix) {
        for ((s, c), t) in self
            .sum
            .iter_mut()
            .zip(self.comp.iter_mut())
            .zip(term.iter())
        {
            let y = *t - *c;
            let u = *s + y;
            *c = (u - *s) - y;
            *s = u;
        }
    }

    pub fn finish(self) -> CMatrix {
        self.sum
    }
}

/// Frobenius inner product `<a, b> = Tr(a^H b)`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc
}

/// Ordinary least-squares slope and intercept of `y` against `x`,
/// plus the fit residual (root mean square).
pub fn ols_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut rss = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        let e = yi - (slope * xi + intercept);
        rss += e * e;
    }
    (slope, intercept, libm::sqrt(rss / n))
}
