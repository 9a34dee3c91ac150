//! Analytic mother wavelets with closed-form time and frequency expressions,
//! plus the admissibility (Calderon) constant by quadrature.

use num_complex::Complex64;

use crate::error::Error;

/// Mother wavelet. Each kind is L2-normalized in continuous time so that
/// sampled atoms carry unit dt-weighted norm when resolvable on the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wavelet {
    /// Second Hermite wavelet, `(2/(sqrt(3) pi^{1/4})) (1 - t^2) e^{-t^2/2}`.
    /// Zero mean exactly.
    MexicanHat,
    /// `pi^{-1/4} (e^{i w0 t} - kappa) e^{-t^2/2}` with the correction
    /// `kappa = e^{-w0^2/2}` so the spectrum vanishes at 0 exactly.
    Morlet { omega0: f64 },
    /// Plain Gaussian window `pi^{-1/4} e^{-t^2/2}`. Nonzero mean; kept as
    /// the canonical inadmissible example.
    Gaussian,
}

impl Wavelet {
    pub fn morlet_default() -> Self {
        Wavelet::Morlet { omega0: 6.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Wavelet::MexicanHat => "mexican-hat",
            Wavelet::Morlet { .. } => "morlet",
            Wavelet::Gaussian => "gaussian",
        }
    }

    /// Time-domain sample `psi(t)`.
    pub fn psi(&self, t: f64) -> Complex64 {
        let g = libm::exp(-0.5 * t * t);
        match self {
            Wavelet::MexicanHat => {
                let c = 2.0 / (libm::sqrt(3.0) * libm::pow(core::f64::consts::PI, 0.25));
                Complex64::new(c * (1.0 - t * t) * g, 0.0)
            }
            Wavelet::Morlet { omega0 } => {
                let c = libm::pow(core::f64::consts::PI, -0.25);
                let kappa = libm::exp(-0.5 * omega0 * omega0);
                let osc = Complex64::new(libm::cos(omega0 * t), libm::sin(omega0 * t));
                (osc - Complex64::new(kappa, 0.0)) * Complex64::new(c * g, 0.0)
            }
            Wavelet::Gaussian => {
                let c = libm::pow(core::f64::consts::PI, -0.25);
                Complex64::new(c * g, 0.0)
            }
        }
    }

    /// Frequency-domain value `psi_hat(w) = integral psi(t) e^{-i w t} dt`.
    /// Real for all three kinds under this convention.
    pub fn psi_hat(&self, w: f64) -> f64 {
        let root2pi = libm::sqrt(2.0 * core::f64::consts::PI);
        match self {
            Wavelet::MexicanHat => {
                let c = 2.0 / (libm::sqrt(3.0) * libm::pow(core::f64::consts::PI, 0.25));
                c * root2pi * w * w * libm::exp(-0.5 * w * w)
            }
            Wavelet::Morlet { omega0 } => {
                let c = libm::pow(core::f64::consts::PI, -0.25);
                let kappa = libm::exp(-0.5 * omega0 * omega0);
                c * root2pi
                    * (libm::exp(-0.5 * (w - omega0) * (w - omega0))
                        - kappa * libm::exp(-0.5 * w * w))
            }
            Wavelet::Gaussian => {
                let c = libm::pow(core::f64::consts::PI, -0.25);
                c * root2pi * libm::exp(-0.5 * w * w)
            }
        }
    }

    /// Center of the positive-frequency energy, used to place atoms in band.
    pub fn center_frequency(&self) -> f64 {
        match self {
            Wavelet::MexicanHat => libm::sqrt(2.0),
            Wavelet::Morlet { omega0 } => *omega0,
            Wavelet::Gaussian => 0.0,
        }
    }
}

/// Admissibility tolerance on `|psi_hat(0)|`.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Calderon constant `c_psi = integral_0^inf |psi_hat(w)|^2 / w dw` by the
/// midpoint rule on `(0, omega_max]`, with a grid-doubling error estimate.
///
/// Returns `(value, error_estimate)` where the value comes from the doubled
/// grid and the estimate is the absolute difference between the two grids.
pub fn calderon_constant(psi: &Wavelet, omega_max: f64, n_quad: usize) -> Result<(f64, f64), Error> {
    if n_quad < 64 {
        return Err(Error::InvalidInput("quadrature needs at least 64 points"));
    }
    if !(omega_max > 0.0) {
        return Err(Error::InvalidInput("omega_max must be positive"));
    }
    if libm::fabs(psi.psi_hat(0.0)) > ADMISSIBILITY_TOL {
        return Err(Error::NotAdmissible);
    }
    // coverage check: the window must hold essentially all spectral energy
    let inside = spectral_energy(psi, 0.0, omega_max, 4 * n_quad);
    let beyond = spectral_energy(psi, omega_max, 2.0 * omega_max, 4 * n_quad);
    if inside <= 0.0 || beyond > 1e-4 * (inside + beyond) {
        return Err(Error::InvalidInput("omega_max does not cover the spectrum"));
    }
    let coarse = midpoint_cpsi(psi, omega_max, n_quad);
    let fine = midpoint_cpsi(psi, omega_max, 2 * n_quad);
    Ok((fine, libm::fabs(fine - coarse)))
}

fn midpoint_cpsi(psi: &Wavelet, omega_max: f64, n: usize) -> f64 {
    let h = omega_max / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let w = (i as f64 + 0.5) * h;
        let p = psi.psi_hat(w);
        acc += p * p / w;
    }
    acc * h
}

fn spectral_energy(psi: &Wavelet, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let w = lo + (i as f64 + 0.5) * h;
        let p = psi.psi_hat(w);
        acc += p * p;
    }
    acc * h
}
