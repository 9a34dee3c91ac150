//! Signals, covariance models for the three matched signal classes, and
//! seeded noise generation.
//!
//! The three covariance constructors realize the signal classes that the
//! residual module classifies: circulant (stationary), fractional Brownian
//! motion (self-similar), and quadratic-phase chirp. Time grids:
//! the fBm kernel lives on the midpoint grid `t_i = (i + 1/2) dt` (a grid
//! touching t = 0 would produce a zero row), chirp phases on `t_n = n dt`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::linalg::{self, CMatrix};

/// Acceptable Hermitian asymmetry after construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues above `-PSD_TOL * trace` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;

/// A length-M complex sample vector with spacing `dt` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<Complex64>,
    pub dt: f64,
    pub origin: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, dt: f64, origin: f64) -> Result<Self, Error> {
        if samples.len() < 2 {
            return Err(Error::InvalidModel("signal needs at least 2 samples"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidModel("dt must be positive and finite"));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidModel("non-finite sample"));
        }
        Ok(Signal { samples, dt, origin })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Plain squared 2-norm of the sample vector, no dt weighting.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Discrete L2 energy `sum |x[n]|^2 dt`.
    pub fn energy(&self) -> f64 {
        self.norm_sq() * self.dt
    }

    /// Sample instants `origin + n dt`.
    pub fn times(&self) -> Vec<f64> {
        (0..self.len())
            .map(|n| self.origin + n as f64 * self.dt)
            .collect()
    }

    pub fn as_vector(&self) -> crate::CVector {
        crate::CVector::from_column_slice(&self.samples)
    }
}

/// M x M Hermitian matrix; covariances, estimators, and generators live here.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Symmetrizes exactly; rejects inputs further than [`HERMITIAN_TOL`]
    /// (scaled) from Hermitian.
    pub fn new(mat: CMatrix) -> Result<Self, Error> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        let scale = linalg::frobenius_norm(&mat).max(1.0);
        if linalg::hermitian_deviation(&mat) > 1e-8 * scale {
            return Err(Error::InvalidModel("matrix is not Hermitian"));
        }
        let mut mat = mat;
        linalg::hermitize(&mut mat);
        Ok(HermitianOperator { mat })
    }

    /// Construct without the deviation gate (caller guarantees near-Hermitian);
    /// still symmetrizes exactly.
    pub(crate) fn from_nearly_hermitian(mut mat: CMatrix) -> Self {
        linalg::hermitize(&mut mat);
        HermitianOperator { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius_norm(&self.mat)
    }

    /// Verify eigenvalues are above `-PSD_TOL * trace`.
    pub fn check_psd(&self) -> Result<(), Error> {
        let e = linalg::eigh(&self.mat);
        let floor = -PSD_TOL * self.trace().abs().max(1e-300);
        if e.values.iter().any(|&v| v < floor) {
            return Err(Error::InvalidModel("matrix is not positive semidefinite"));
        }
        Ok(())
    }
}

/// R = F^H diag(psd) F with F the unitary DFT matrix; circulant, PSD,
/// eigenvalues equal to the PSD entries.
pub fn make_circulant_covariance(psd: &[f64]) -> Result<HermitianOperator, Error> {
    if psd.len() < 2 {
        return Err(Error::InvalidModel("psd needs at least 2 entries"));
    }
    if psd.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::InvalidModel("psd entries must be nonnegative"));
    }
    let m = psd.len();
    let f = linalg::unitary_dft_matrix(m);
    let diag = CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            Complex64::new(psd[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let r = f.adjoint() * diag * &f;
    Ok(HermitianOperator::from_nearly_hermitian(r))
}

/// Midpoint time grid used by the fBm kernel: `t_i = (i + 1/2) dt`.
pub fn fbm_grid(m: usize, dt: f64) -> Vec<f64> {
    (0..m).map(|i| (i as f64 + 0.5) * dt).collect()
}

/// Fractional-Brownian-motion covariance
/// `R[i][j] = (sigma2/2)(t_i^{2H} + t_j^{2H} - |t_i - t_j|^{2H})`
/// on the midpoint grid. Exactly self-similar: scaling the grid by
/// `lambda` multiplies every entry by `lambda^{2H}`.
pub fn make_fbm_covariance(
    m: usize,
    dt: f64,
    hurst: f64,
    sigma2: f64,
) -> Result<HermitianOperator, Error> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidModel("Hurst parameter must lie in (0,1)"));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidModel("sigma2 must be positive"));
    }
    if m < 2 || !(dt > 0.0) {
        return Err(Error::InvalidModel("need M >= 2 and dt > 0"));
    }
    let t = fbm_grid(m, dt);
    let h2 = 2.0 * hurst;
    let r = CMatrix::from_fn(m, m, |i, j| {
        let v = 0.5
            * sigma2
            * (libm::pow(t[i], h2) + libm::pow(t[j], h2) - libm::pow((t[i] - t[j]).abs(), h2));
        Complex64::new(v, 0.0)
    });
    Ok(HermitianOperator::from_nearly_hermitian(r))
}

/// Chirp phase grid `t_n = n dt` and the de-chirping unitary
/// `U[n][n] = exp(i pi beta t_n^2)`.
pub fn chirp_unitary(m: usize, beta: f64, dt: f64) -> CMatrix {
    CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            let t = i as f64 * dt;
            let ph = PI * beta * t * t;
            Complex64::new(libm::cos(ph), libm::sin(ph))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Quadratic-phase chirp covariance
/// `R[i][j] = sigma2 A(i - j) exp(i pi beta (t_i^2 - t_j^2))`
/// with a Gaussian envelope `A` evaluated on the circular index distance, so
/// the de-chirped matrix `U^H R U` is exactly circulant and the matched
/// chirp-conjugated shift commutes with R exactly.
pub fn make_chirp_covariance(
    m: usize,
    dt: f64,
    beta: f64,
    width: f64,
    sigma2: f64,
) -> Result<HermitianOperator, Error> {
    if !(width > 0.0) {
        return Err(Error::InvalidModel("envelope width must be positive"));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidModel("sigma2 must be positive"));
    }
    if m < 2 || !(dt > 0.0) {
        return Err(Error::InvalidModel("need M >= 2 and dt > 0"));
    }
    // periodized Gaussian: positive Fourier coefficients, hence a PSD
    // circulant (a min-distance wrap would kink at half period and lose PSD)
    let period = m as f64 * dt;
    let raw: Vec<f64> = (0..m)
        .map(|k| {
            let mut s = 0.0;
            for p in -3i32..=3 {
                let d = k as f64 * dt + p as f64 * period;
                s += libm::exp(-d * d / (2.0 * width * width));
            }
            s
        })
        .collect();
    let envelope: Vec<f64> = raw.iter().map(|&v| sigma2 * v / raw[0]).collect();
    let u = chirp_unitary(m, beta, dt);
    let r = CMatrix::from_fn(m, m, |i, j| {
        let a = envelope[(m + i - j) % m];
        u[(i, i)] * Complex64::new(a, 0.0) * u[(j, j)].conj()
    });
    Ok(HermitianOperator::from_nearly_hermitian(r))
}

/// Complex circular Gaussian noise, `E|n[k]|^2 = sigma2`, independent
/// real/imaginary parts of variance `sigma2 / 2`. Deterministic per seed.
pub fn white_noise(m: usize, sigma2: f64, seed: u64) -> Result<Signal, Error> {
    white_noise_with_dt(m, sigma2, seed, 1.0)
}

pub fn white_noise_with_dt(m: usize, sigma2: f64, seed: u64, dt: f64) -> Result<Signal, Error> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidModel("sigma2 must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sd = libm::sqrt(sigma2 / 2.0);
    let samples = (0..m)
        .map(|_| {
            let (a, b) = gauss_pair(&mut rng);
            Complex64::new(a * sd, b * sd)
        })
        .collect();
    Signal::new(samples, dt, 0.0)
}

/// Box-Muller pair of independent standard normals.
fn gauss_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // u in (0, 1]: map the top 53 bits and offset away from zero.
    let u = ((rng.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
    let v = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let r = libm::sqrt(-2.0 * libm::log(u));
    let ang = 2.0 * PI * v;
    (r * libm::cos(ang), r * libm::sin(ang))
}

/// Deterministic sub-seed for Monte-Carlo trial `trial` of a study run
/// seeded with `master`; parallel and serial execution agree exactly.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    master ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}
