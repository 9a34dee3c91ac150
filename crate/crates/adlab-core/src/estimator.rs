//! The group-averaged estimator `F_G(x) = sum_g mu(g) (rho(g)x)(rho(g)x)^H`
//! with spectral diagnostics.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::groups::GroupRep;
use crate::linalg::{self, CMatrix, CompensatedSum};
use crate::model::{HermitianOperator, Signal};

/// Group-averaged covariance estimate with its eigendecomposition attached.
pub struct AveragedEstimate {
    pub operator: HermitianOperator,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns ordered as `eigenvalues`; phases fixed so the
    /// largest-modulus component of each column is real positive.
    pub eigenvectors: CMatrix,
    pub group_name: String,
}

/// Builds `F_G(x)`. Terms are accumulated in element-list order with
/// compensated summation, so results are reproducible bit for bit.
pub fn group_averaged_estimate(x: &Signal, group: &GroupRep) -> Result<AveragedEstimate, Error> {
    let m = x.len();
    if group.dim() != m {
        return Err(Error::DimMismatch {
            expected: group.dim(),
            got: m,
        });
    }
    let norm_sq = x.norm_sq();
    let mut acc = CompensatedSum::zeros(m, m);
    let mut term = CMatrix::zeros(m, m);
    for idx in 0..group.order() {
        let gx = group.apply(idx, &x.samples);
        let w = group.weights()[idx];
        for i in 0..m {
            for j in 0..m {
                term[(i, j)] = gx[i] * gx[j].conj() * Complex64::new(w, 0.0);
            }
        }
        debug_assert!({
            // each rank-one summand has Frobenius norm ||x||^2 (before weighting)
            let t = linalg::frobenius_norm(&term) / w;
            (t - norm_sq).abs() <= 1e-9 * norm_sq.max(1e-300)
        });
        acc.add(&term);
    }
    let operator = HermitianOperator::from_nearly_hermitian(acc.finish());
    let eig = linalg::eigh(operator.matrix());
    Ok(AveragedEstimate {
        operator,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        group_name: group.name().into(),
    })
}

/// Eigenvalues of the cyclic-group estimator via the periodogram shortcut
/// `|DFT_k(x)|^2 / M`, cross-checked against the dense eigendecomposition.
///
/// Returned in DFT bin order.
pub fn cyclic_estimate_spectrum(x: &Signal) -> Result<Vec<f64>, Error> {
    let m = x.len();
    let spectrum: Vec<f64> = linalg::dft(&x.samples)
        .iter()
        .map(|v| v.norm_sqr() / m as f64)
        .collect();

    let group = crate::groups::cyclic_group(m)?;
    let est = group_averaged_estimate(x, &group)?;
    let mut sorted = spectrum.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let scale = sorted.first().copied().unwrap_or(0.0).max(1e-300);
    for (a, b) in sorted.iter().zip(est.eigenvalues.iter()) {
        if (a - b).abs() > 1e-9 * scale {
            return Err(Error::NumericalFailure(
                "periodogram shortcut disagrees with dense eigendecomposition",
            ));
        }
    }
    Ok(spectrum)
}

/// Cosine of the largest principal angle between the span of the top-r
/// eigenvectors of `est` and the span of the orthonormal columns `basis`;
/// 1 means perfect containment.
pub fn subspace_alignment(
    est: &AveragedEstimate,
    basis: &CMatrix,
    rank: usize,
) -> Result<f64, Error> {
    let m = est.operator.dim();
    if rank > m || basis.ncols() != rank || basis.nrows() != m {
        return Err(Error::DimMismatch {
            expected: rank,
            got: basis.ncols(),
        });
    }
    linalg::check_orthonormal(basis, 1e-8)?;
    let top = est.eigenvectors.columns(0, rank).into_owned();
    Ok(linalg::min_principal_cosine(&top, basis))
}

/// Count of eigenvalues above `tol * lambda_max`.
pub fn rank_of_signal_estimate(est: &AveragedEstimate, tol: f64) -> usize {
    let lmax = est.eigenvalues.first().copied().unwrap_or(0.0);
    if lmax <= 0.0 {
        return 0;
    }
    est.eigenvalues.iter().filter(|&&v| v > tol * lmax).count()
}

/// Default relative eigenvalue threshold for [`rank_of_signal_estimate`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
