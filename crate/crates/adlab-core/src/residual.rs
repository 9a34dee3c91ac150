//! Normalized commutativity residual in generator and operator form, the
//! matched-generator classifier, and the three-class demonstration table.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::estimator::group_averaged_estimate;
use crate::groups::{self, Generator, GroupRep};
use crate::linalg::{commutator, frobenius_norm};
use crate::model::{self, HermitianOperator, Signal};

/// Absolute gap under which two residuals count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// One classified covariance: residual per candidate plus the argmin.
pub struct ResidualRow {
    pub class_name: String,
    /// `(generator name, delta)` in candidate order.
    pub cells: Vec<(String, f64)>,
    pub matched: String,
    /// True when the winner led by less than [`TIE_TOL`]; broken by order.
    pub tie: bool,
}

pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub m: usize,
    pub hurst: f64,
    pub beta: f64,
    pub dt: f64,
}

/// `delta(A, R) = sqrt(sum_i ||[H_i, R]||_F^2) / (sqrt(sum_i ||H_i||_F^2) ||R||_F)`
/// over the Hermitian parts of the bundle. Always in [0, 2].
pub fn delta_generator(a: &Generator, r: &HermitianOperator) -> Result<f64, Error> {
    if a.dim() != r.dim() {
        return Err(Error::DimMismatch {
            expected: r.dim(),
            got: a.dim(),
        });
    }
    let rn = r.frobenius_norm();
    let mut comm_sq = 0.0;
    let mut part_sq = 0.0;
    for h in &a.parts {
        let c = frobenius_norm(&commutator(h, r.matrix()));
        comm_sq += c * c;
        let n = frobenius_norm(h);
        part_sq += n * n;
    }
    if rn == 0.0 || part_sq == 0.0 {
        return Err(Error::DegenerateInput);
    }
    Ok(libm::sqrt(comm_sq) / (libm::sqrt(part_sq) * rn))
}

/// Residual of the group-averaged estimate itself:
/// `||F_G(x) R - R F_G(x)||_F / (||F_G(x)||_F ||R||_F)`.
pub fn delta_operator(g: &GroupRep, x: &Signal, r: &HermitianOperator) -> Result<f64, Error> {
    let est = group_averaged_estimate(x, g)?;
    let f = est.operator.matrix();
    let fn_norm = est.operator.frobenius_norm();
    let rn = r.frobenius_norm();
    if fn_norm == 0.0 || rn == 0.0 {
        return Err(Error::DegenerateInput);
    }
    if r.dim() != est.operator.dim() {
        return Err(Error::DimMismatch {
            expected: est.operator.dim(),
            got: r.dim(),
        });
    }
    Ok(frobenius_norm(&commutator(f, r.matrix())) / (fn_norm * rn))
}

/// Residual per candidate; `matched` is the argmin, list order breaks ties.
pub fn classify(
    r: &HermitianOperator,
    candidates: &[Generator],
    class_name: &str,
) -> Result<ResidualRow, Error> {
    if candidates.len() < 2 {
        return Err(Error::InvalidInput("classification needs at least 2 candidates"));
    }
    let mut cells = Vec::with_capacity(candidates.len());
    for cand in candidates {
        cells.push((cand.name.clone(), delta_generator(cand, r)?));
    }
    let mut best = 0;
    for i in 1..cells.len() {
        if cells[i].1 < cells[best].1 - TIE_TOL {
            best = i;
        }
    }
    let tie = cells
        .iter()
        .enumerate()
        .any(|(i, c)| i != best && (c.1 - cells[best].1).abs() <= TIE_TOL);
    Ok(ResidualRow {
        class_name: class_name.into(),
        matched: cells[best].0.clone(),
        cells,
        tie,
    })
}

fn standard_candidates(m: usize, beta: f64, dt: f64) -> Vec<Generator> {
    alloc::vec![
        groups::shift_generator(m),
        groups::log_diag_generator(m),
        groups::chirp_conj_shift_generator(m, beta, dt),
    ]
}

/// The three-class table: stationary (circulant), self-similar (fBm), and
/// chirp covariances against the shift, logdiag, and chirpshift generators.
pub fn fig3_table(m: usize, hurst: f64, beta: f64, dt: f64) -> Result<ResidualReport, Error> {
    if m < 16 {
        return Err(Error::InvalidInput("table needs m >= 16"));
    }
    let psd: Vec<f64> = (0..m).map(|k| 1.0 / (1.0 + k as f64)).collect();
    let circ = model::make_circulant_covariance(&psd)?;
    let fbm = model::make_fbm_covariance(m, dt, hurst, 1.0)?;
    let width = m as f64 * dt / 16.0;
    let chirp = model::make_chirp_covariance(m, dt, beta, width, 1.0)?;

    let cands = standard_candidates(m, beta, dt);
    let rows = alloc::vec![
        classify(&circ, &cands, "stationary")?,
        classify(&fbm, &cands, "self-similar")?,
        classify(&chirp, &cands, "chirp")?,
    ];
    Ok(ResidualReport {
        rows,
        m,
        hurst,
        beta,
        dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, hermitize, CMatrix};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circulant(m: usize, seed: u64) -> HermitianOperator {
        let x = model::white_noise(m, 1.0, seed).unwrap();
        let psd: alloc::vec::Vec<f64> = x.samples.iter().map(|v| v.norm_sqr()).collect();
        model::make_circulant_covariance(&psd).unwrap()
    }

    fn random_hermitian(m: usize, seed: u64) -> HermitianOperator {
        let a = model::white_noise(m * m, 1.0, seed).unwrap();
        let mut mat = CMatrix::from_fn(m, m, |i, j| a.samples[i * m + j]);
        hermitize(&mut mat);
        HermitianOperator::new(mat).unwrap()
    }

    #[test]
    fn shift_commutes_with_circulant() {
        let r = circulant(16, 2);
        let d = delta_generator(&groups::shift_generator(16), &r).unwrap();
        assert!(d <= 1e-12, "{d}");
    }

    #[test]
    fn identity_commutes_with_everything() {
        let r = HermitianOperator::new(CMatrix::identity(8, 8)).unwrap();
        for g in standard_candidates(8, 0.02, 0.1) {
            assert!(delta_generator(&g, &r).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn fbm_prefers_logdiag() {
        let m = 64;
        let r = model::make_fbm_covariance(m, 1.0 / m as f64, 0.7, 1.0).unwrap();
        let d_shift = delta_generator(&groups::shift_generator(m), &r).unwrap();
        let d_log = delta_generator(&groups::log_diag_generator(m), &r).unwrap();
        let d_chirp =
            delta_generator(&groups::chirp_conj_shift_generator(m, 0.02, 1.0 / m as f64), &r)
                .unwrap();
        assert!(d_log < d_shift && d_log < d_chirp, "{d_log} {d_shift} {d_chirp}");
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let z = HermitianOperator::new(CMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(
            delta_generator(&groups::shift_generator(4), &z),
            Err(Error::DegenerateInput)
        ));
    }

    #[test]
    fn operator_form_examples() {
        let m = 16;
        let x = model::white_noise(m, 1.0, 5).unwrap();
        let g = groups::cyclic_group(m).unwrap();
        let r = circulant(m, 8);
        // both circulant: commuting algebra
        assert!(delta_operator(&g, &x, &r).unwrap() <= 1e-10);
        // self-commutation
        let est = group_averaged_estimate(&x, &g).unwrap();
        assert!(delta_operator(&g, &x, &est.operator).unwrap() <= 1e-12);
        // trivial group vs circulant: generically far from commuting
        let d = delta_operator(&groups::trivial_group(m).unwrap(), &x, &r).unwrap();
        assert!(d > 0.1, "{d}");
    }

    #[test]
    fn delta_scale_invariance() {
        let m = 12;
        let r = random_hermitian(m, 3);
        let g = groups::log_diag_generator(m);
        let base = delta_generator(&g, &r).unwrap();
        let scaled_r = HermitianOperator::new(r.matrix() * c(10.0, 0.0)).unwrap();
        assert!((delta_generator(&g, &scaled_r).unwrap() - base).abs() <= 1e-12);
        let scaled_g = Generator {
            name: g.name.clone(),
            parts: g.parts.iter().map(|p| p * c(0.25, 0.0)).collect(),
        };
        assert!((delta_generator(&scaled_g, &r).unwrap() - base).abs() <= 1e-12);
    }

    #[test]
    fn delta_unitary_invariance() {
        let m = 10;
        let r = random_hermitian(m, 14);
        let g = groups::shift_generator(m);
        let base = delta_generator(&g, &r).unwrap();
        // unitary from the eigenvectors of an unrelated Hermitian matrix
        let u = eigh(random_hermitian(m, 77).matrix()).vectors;
        let ru = HermitianOperator::new(&u * r.matrix() * u.adjoint()).unwrap();
        let gu = Generator {
            name: g.name.clone(),
            parts: g.parts.iter().map(|p| &u * p * u.adjoint()).collect(),
        };
        assert!((delta_generator(&gu, &ru).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn delta_bounded_by_two() {
        for seed in 0..5 {
            let r = random_hermitian(8, 100 + seed);
            for g in standard_candidates(8, 0.05, 0.2) {
                let d = delta_generator(&g, &r).unwrap();
                assert!((0.0..=2.0).contains(&d));
            }
        }
    }

    #[test]
    fn classify_matches_each_class() {
        let rep = fig3_table(64, 0.7, 0.02, 1.0 / 64.0).unwrap();
        assert_eq!(rep.rows[0].matched, "shift");
        assert_eq!(rep.rows[1].matched, "logdiag");
        assert_eq!(rep.rows[2].matched, "chirpshift");
        for row in &rep.rows {
            assert!(!row.tie);
            for &(_, d) in &row.cells {
                assert!((0.0..=2.0).contains(&d));
            }
        }
        // matched stationary and chirp entries are exact zeros numerically
        assert!(rep.rows[0].cells[0].1 <= 1e-10);
        assert!(rep.rows[2].cells[2].1 <= 1e-10);
    }

    #[test]
    fn table_structure_across_sizes() {
        for m in [32usize, 128] {
            let rep = fig3_table(m, 0.7, 0.02, 1.0 / m as f64).unwrap();
            assert_eq!(rep.rows[0].matched, "shift");
            assert_eq!(rep.rows[1].matched, "logdiag");
            assert_eq!(rep.rows[2].matched, "chirpshift");
        }
    }

    #[test]
    fn beta_zero_collapses_chirpshift_onto_shift() {
        let m = 32;
        let rep = fig3_table(m, 0.7, 0.0, 1.0 / m as f64).unwrap();
        // chirpshift degenerates to shift, so those columns agree in every
        // row and the winning rows are flagged as ties broken by order
        for row in &rep.rows {
            assert!((row.cells[0].1 - row.cells[2].1).abs() <= 1e-12);
        }
        assert_eq!(rep.rows[0].matched, "shift");
        assert!(rep.rows[0].tie);
        assert_eq!(rep.rows[2].matched, "shift");
        assert!(rep.rows[2].tie);
    }

    #[test]
    fn rescaling_covariances_leaves_table_unchanged() {
        let m = 32;
        let dt = 1.0 / m as f64;
        let psd: alloc::vec::Vec<f64> = (0..m).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let r = model::make_circulant_covariance(&psd).unwrap();
        let r10 = HermitianOperator::new(r.matrix() * c(10.0, 0.0)).unwrap();
        for g in standard_candidates(m, 0.02, dt) {
            let a = delta_generator(&g, &r).unwrap();
            let b = delta_generator(&g, &r10).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }
}
