//! Classical transforms recovered from group-averaged estimators:
//! autocorrelation/periodogram (cyclic), DCT-type spectra (dihedral),
//! scalograms and the reproducing formula (scale family), and the
//! ambiguity surface (time-frequency lattice).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::estimator::group_averaged_estimate;
use crate::groups;
use crate::linalg::{self, CVector};
use crate::model::Signal;
use crate::wavelet::Wavelet;

/// Cyclic autocorrelation `R[k] = dt * sum_n x[(n+k) mod M] conj(x[n])`.
/// `R[0]` is the dt-weighted energy and dominates every other lag.
pub fn autocorrelation(x: &Signal) -> Vec<Complex64> {
    let m = x.len();
    let dt = Complex64::new(x.dt, 0.0);
    (0..m)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..m {
                acc += x.samples[(n + k) % m] * x.samples[n].conj();
            }
            acc * dt
        })
        .collect()
}

/// Power spectral density `|DFT_k(x)|^2 * dt / M` (unnormalized forward DFT).
/// Differs from the cyclic estimator spectrum only by the factor dt.
pub fn periodogram(x: &Signal) -> Vec<f64> {
    let m = x.len() as f64;
    linalg::dft(&x.samples)
        .iter()
        .map(|v| v.norm_sqr() * x.dt / m)
        .collect()
}

/// Eigen-spectrum of the dihedral-group estimator for a real signal.
///
/// For even-symmetric inputs at small M the estimator commutes with index
/// reversal and its eigenvectors split into reversal-even and reversal-odd
/// vectors, the defining property of the cosine basis family.
pub fn dct_spectrum(x: &Signal) -> Result<Vec<f64>, Error> {
    let m = x.len();
    if x.samples.iter().any(|v| v.im.abs() >= 1e-12) {
        return Err(Error::InvalidInput("dct spectrum requires a real signal"));
    }
    let est = group_averaged_estimate(x, &groups::dihedral_group(m)?)?;
    #[cfg(debug_assertions)]
    if m <= 16 {
        let even = (0..m).all(|n| (x.samples[n] - x.samples[m - 1 - n]).norm() < 1e-12);
        if even {
            let j = groups::reversal_matrix(m);
            let f = est.operator.matrix();
            let dev = linalg::frobenius_norm(&linalg::commutator(f, &j));
            debug_assert!(dev <= 1e-10 * est.operator.frobenius_norm().max(1e-300));
            let lmax = est.eigenvalues.first().copied().unwrap_or(0.0);
            for (k, &lam) in est.eigenvalues.iter().enumerate() {
                if lam <= 1e-8 * lmax {
                    break;
                }
                // definite parity is only guaranteed on simple eigenvalues:
                // within a degenerate cluster the solver may mix parities
                let gap = est
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .fold(f64::INFINITY, |a, (_, &o)| a.min((lam - o).abs()));
                if gap <= 1e-8 * lmax {
                    continue;
                }
                let v = est.eigenvectors.column(k).into_owned();
                let jv = &j * &v;
                let d = (&jv - &v).norm().min((&jv + &v).norm());
                debug_assert!(d < 1e-8, "eigenvector {k} not reversal-symmetric: {d}");
            }
        }
    }
    Ok(est.eigenvalues)
}

/// Discrete ambiguity surface, indexed `(delay k, doppler l)`.
pub struct AmbiguitySurface {
    /// `A[k][l] = dt * sum_n x[n] conj(x[(n-k) mod M]) e^{-i 2 pi l n / M}`.
    pub values: Vec<Vec<Complex64>>,
    pub dt: f64,
    pub df: f64,
}

impl AmbiguitySurface {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `sum |A|^2 / A[0][0]^2`; equals M exactly in this normalization
    /// (the discrete Moyal constant).
    pub fn moyal_ratio(&self) -> f64 {
        let e = self.values[0][0].re;
        let mut s = 0.0;
        for row in &self.values {
            for v in row {
                s += v.norm_sqr();
            }
        }
        s / (e * e)
    }
}

pub fn ambiguity(x: &Signal) -> AmbiguitySurface {
    let m = x.len();
    let dt = x.dt;
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        // row k is the DFT of the lag-k product sequence
        let prod: Vec<Complex64> = (0..m)
            .map(|n| x.samples[n] * x.samples[(n + m - k) % m].conj())
            .collect();
        let row: Vec<Complex64> = linalg::dft(&prod)
            .into_iter()
            .map(|v| v * Complex64::new(dt, 0.0))
            .collect();
        values.push(row);
    }
    AmbiguitySurface {
        values,
        dt,
        df: 1.0 / (m as f64 * dt),
    }
}

/// Log-spaced scale grid `a_j = a0 * 2^{j / voices}`, inclusive of both ends,
/// spanning `octaves` octaves.
pub fn log_scale_grid(a0: f64, octaves: u32, voices: u32) -> Vec<f64> {
    let n = (octaves * voices) as usize;
    (0..=n)
        .map(|j| a0 * libm::exp2(j as f64 / voices as f64))
        .collect()
}

/// Scalogram over positive scales with cyclic boundary handling.
#[derive(Debug)]
pub struct Scalogram {
    /// `values[j][n] = |<x, psi_{a_j, b_n}>|^2`, dt-weighted inner product.
    pub values: Vec<Vec<f64>>,
    pub scales: Vec<f64>,
    pub dt: f64,
    /// dt-weighted squared norm of the sampled atom per scale.
    pub atom_norm_sq: Vec<f64>,
}

impl Scalogram {
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut top = f64::NEG_INFINITY;
        for (j, row) in self.values.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                if v > top {
                    top = v;
                    best = (j, n);
                }
            }
        }
        best
    }
}

fn check_scales(scales: &[f64], m: usize, dt: f64) -> Result<(), Error> {
    let min = 2.0 * dt;
    let max = m as f64 * dt / 4.0;
    if scales.is_empty() {
        return Err(Error::InvalidInput("empty scale list"));
    }
    for w in scales.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidInput("scales must be strictly ascending"));
        }
    }
    for &a in scales {
        if !(a >= min && a <= max) {
            return Err(Error::ScaleOutOfRange { scale: a, min, max });
        }
    }
    Ok(())
}

/// Atom `psi_{a,b}(t) = a^{-1/2} psi((t - b) / a)` sampled cyclically at
/// `b = 0`; atoms at `b = n dt` are cyclic shifts of this one.
pub fn sampled_atom(psi: &Wavelet, a: f64, m: usize, dt: f64) -> CVector {
    let period = m as f64 * dt;
    let s = 1.0 / libm::sqrt(a);
    CVector::from_fn(m, |n, _| {
        let t = n as f64 * dt;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in -2i32..=2 {
            acc += psi.psi((t + p as f64 * period) / a);
        }
        acc * Complex64::new(s, 0.0)
    })
}

pub fn scalogram(x: &Signal, psi: &Wavelet, scales: &[f64]) -> Result<Scalogram, Error> {
    let m = x.len();
    let dt = x.dt;
    check_scales(scales, m, dt)?;
    let mut values = Vec::with_capacity(scales.len());
    let mut atom_norm_sq = Vec::with_capacity(scales.len());
    for &a in scales {
        let base = sampled_atom(psi, a, m, dt);
        atom_norm_sq.push(base.norm_squared() * dt);
        let mut row = Vec::with_capacity(m);
        for n in 0..m {
            // atom centered at b_n: base cyclically shifted by n
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                acc += x.samples[i] * base[(i + m - n) % m].conj();
            }
            row.push((acc * Complex64::new(dt, 0.0)).norm_sqr());
        }
        values.push(row);
    }
    Ok(Scalogram {
        values,
        scales: scales.to_vec(),
        dt,
        atom_norm_sq,
    })
}

/// Default spectral window for [`crate::wavelet::calderon_constant`].
pub fn default_omega_max(psi: &Wavelet) -> f64 {
    12.0f64.max(psi.center_frequency() + 8.0)
}

/// Discrete reproducing formula
/// `xhat = c_psi^{-1} sum_{j,n} <x, psi_{a_j,b_n}> psi_{a_j,b_n} da_j dt / a_j^2`
/// over a log-spaced scale grid. Returns the reconstruction and its relative
/// L2 error against `x`.
pub fn calderon_reconstruct(
    x: &Signal,
    psi: &Wavelet,
    scales: &[f64],
) -> Result<(Signal, f64), Error> {
    let m = x.len();
    let dt = x.dt;
    check_scales(scales, m, dt)?;
    if scales.len() < 2 {
        return Err(Error::InvalidInput("reconstruction needs at least 2 scales"));
    }
    // log spacing required so da_j = a_j ln(r) is exact
    let r = scales[1] / scales[0];
    for w in scales.windows(2) {
        if libm::fabs(w[1] / w[0] - r) > 1e-9 * r {
            return Err(Error::InvalidInput("reconstruction needs log-spaced scales"));
        }
    }
    let log_r = libm::log(r);
    let (cpsi, _) = crate::wavelet::calderon_constant(psi, default_omega_max(psi), 512)?;

    let mut out = CVector::zeros(m);
    for &a in scales {
        let base = sampled_atom(psi, a, m, dt);
        // coefficients via cyclic correlation; weight da * db / a^2
        let weight = a * log_r * dt / (a * a) * dt / cpsi;
        for n in 0..m {
            let mut coef = Complex64::new(0.0, 0.0);
            for i in 0..m {
                coef += x.samples[i] * base[(i + m - n) % m].conj();
            }
            coef *= Complex64::new(weight, 0.0);
            for i in 0..m {
                out[i] += coef * base[(i + m - n) % m];
            }
        }
    }
    let xv = x.as_vector();
    let rel = (&out - &xv).norm() / xv.norm();
    let xhat = Signal::new(out.iter().cloned().collect(), dt, x.origin)?;
    Ok((xhat, rel))
}
