//! Blind symmetry matching: minimize the commutation residual of
//! `A = sum_k c_k B_k` against a covariance R over a Hermitian basis,
//! posed as a symmetric-definite generalized eigenvalue problem.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Error;
use crate::groups;
use crate::linalg::{commutator, frobenius_inner, frobenius_norm, CMatrix};
use crate::model::HermitianOperator;

/// Largest dimension accepted for the full Hermitian basis; beyond this the
/// d = M^2 assembly cost is out of desk range.
pub const FULL_HERMITIAN_MAX_M: usize = 24;

/// Ordered Hermitian basis `B_1..B_d`, linearly independent.
pub struct GeneratorBasis {
    pub name: String,
    pub matrices: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn new(name: &str, matrices: Vec<CMatrix>) -> Result<Self, Error> {
        if matrices.is_empty() {
            return Err(Error::InvalidBasis);
        }
        let m = matrices[0].nrows();
        for b in &matrices {
            if b.nrows() != m || b.ncols() != m {
                return Err(Error::DimMismatch {
                    expected: m,
                    got: b.nrows(),
                });
            }
            if crate::linalg::hermitian_deviation(b) > 1e-12 * frobenius_norm(b).max(1.0) {
                return Err(Error::InvalidBasis);
            }
        }
        let basis = GeneratorBasis {
            name: name.into(),
            matrices,
        };
        let n = basis.gram();
        let eig = n.clone().symmetric_eigen();
        let max = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v));
        let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        if !(min > 1e-10 * max) {
            return Err(Error::SingularGram);
        }
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// `N_ij = Tr(B_i^H B_j)`, real symmetric positive definite.
    pub fn gram(&self) -> DMatrix<f64> {
        let d = self.len();
        DMatrix::from_fn(d, d, |i, j| {
            frobenius_inner(&self.matrices[i], &self.matrices[j]).re
        })
    }

    /// `A(c) = sum_k c_k B_k`.
    pub fn combine(&self, coeffs: &[f64]) -> CMatrix {
        let m = self.dim();
        let mut a = CMatrix::zeros(m, m);
        for (c, b) in coeffs.iter().zip(self.matrices.iter()) {
            a += b * Complex64::new(*c, 0.0);
        }
        a
    }
}

/// First assembly stage: the commutators `C_i = [R, B_i]` (cost O(d M^3)).
pub fn commutator_stage(r: &HermitianOperator, basis: &GeneratorBasis) -> Result<Vec<CMatrix>, Error> {
    if basis.dim() != r.dim() {
        return Err(Error::DimMismatch {
            expected: r.dim(),
            got: basis.dim(),
        });
    }
    Ok(basis
        .matrices
        .iter()
        .map(|b| commutator(r.matrix(), b))
        .collect())
}

/// Second assembly stage: Gram pairings `M_ij = Tr(C_i^H C_j)` together with
/// the basis Gram `N` (cost O(d^2 M^2)). `M` is real symmetric PSD by
/// construction; residual imaginary parts beyond 1e-10 are an error.
pub fn pairing_stage(
    commutators: &[CMatrix],
    basis: &GeneratorBasis,
) -> Result<(DMatrix<f64>, DMatrix<f64>), Error> {
    let d = commutators.len();
    if d != basis.len() {
        return Err(Error::DimMismatch {
            expected: basis.len(),
            got: d,
        });
    }
    let mut mmat = DMatrix::zeros(d, d);
    let mut scale = 0.0f64;
    for i in 0..d {
        for j in i..d {
            let v = frobenius_inner(&commutators[i], &commutators[j]);
            scale = scale.max(v.norm());
            mmat[(i, j)] = v.re;
            mmat[(j, i)] = v.re;
            if v.im.abs() > 1e-10 * scale.max(1.0) {
                return Err(Error::NumericalFailure("pairing matrix not real"));
            }
        }
    }
    Ok((mmat, basis.gram()))
}

/// Both stages of Gram assembly in one call.
pub fn assemble_double_commutator(
    r: &HermitianOperator,
    basis: &GeneratorBasis,
) -> Result<(DMatrix<f64>, DMatrix<f64>), Error> {
    let comms = commutator_stage(r, basis)?;
    pairing_stage(&comms, basis)
}

/// Raw minimal eigenpair of `M c = lambda N c`.
pub struct GevpEigen {
    /// Clipped at 0 when in [-1e-12, 0).
    pub lambda_min: f64,
    /// Normalized so `c^T N c = 1`, first nonzero entry positive.
    pub coeffs: DVector<f64>,
    /// All generalized eigenvalues, ascending.
    pub spectrum: Vec<f64>,
    /// Coefficient vectors spanning the minimal eigenspace (N-orthonormal).
    pub eigenspace: Vec<DVector<f64>>,
    pub degenerate: bool,
}

/// Solves the symmetric-definite problem by Cholesky reduction of N.
///
/// `zero_floor` is an absolute threshold below which eigenvalues count as
/// exact zeros (one shared degenerate cluster); callers with a covariance in
/// hand pass `(1e-12 ||R||_F)^2`, matching the residual module's notion of a
/// numerically exact commutator. Pass 0.0 for the purely relative rule.
pub fn solve_gevp(
    mmat: &DMatrix<f64>,
    nmat: &DMatrix<f64>,
    zero_floor: f64,
) -> Result<GevpEigen, Error> {
    let d = mmat.nrows();
    if nmat.nrows() != d || mmat.ncols() != d || nmat.ncols() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: nmat.nrows(),
        });
    }
    let chol = nalgebra::Cholesky::new(nmat.clone()).ok_or(Error::SingularGram)?;
    let l = chol.l();
    // S = L^{-1} M L^{-T}
    let tmp = l
        .solve_lower_triangular(mmat)
        .ok_or(Error::SingularGram)?;
    let mut s = l
        .solve_lower_triangular(&tmp.transpose())
        .ok_or(Error::SingularGram)?
        .transpose();
    // symmetrize roundoff
    s = (&s + s.transpose()) * 0.5;
    let eig = s.symmetric_eigen();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = spectrum.iter().fold(0.0f64, |a, &v| a.max(v.abs()));

    let mut lambda_min = spectrum[0];
    if lambda_min < -1e-10 * scale.max(1.0) {
        return Err(Error::NumericalFailure("negative minimal eigenvalue"));
    }
    if lambda_min < zero_floor.max(0.0) {
        lambda_min = 0.0;
    }

    let cluster_edge = (spectrum[0] + 1e-10 * scale.max(1e-300)).max(zero_floor);
    let mult = spectrum
        .iter()
        .take_while(|&&v| v <= cluster_edge)
        .count()
        .max(1);
    let back = |y: DVector<f64>| -> Result<DVector<f64>, Error> {
        // c = L^{-T} y keeps c^T N c = y^T y = 1
        l.transpose()
            .solve_upper_triangular(&y)
            .ok_or(Error::SingularGram)
    };
    let mut eigenspace = Vec::with_capacity(mult);
    for k in 0..mult {
        eigenspace.push(back(eig.eigenvectors.column(order[k]).into_owned())?);
    }
    let mut coeffs = eigenspace[0].clone();
    fix_sign(&mut coeffs);
    for c in eigenspace.iter_mut() {
        fix_sign(c);
    }
    Ok(GevpEigen {
        lambda_min,
        coeffs,
        spectrum,
        eigenspace,
        degenerate: mult > 1,
    })
}

fn fix_sign(c: &mut DVector<f64>) {
    if let Some(first) = c.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            *c = -c.clone();
        }
    }
}

/// Minimal-residual generator over a basis, with its interpretation.
pub struct GevpSolution {
    pub lambda_min: f64,
    pub coeffs: Vec<f64>,
    /// `A* = sum c*_k B_k`, unit Frobenius norm.
    pub generator: HermitianOperator,
    /// Implied residual `sqrt(max(lambda_min, 0)) / ||R||_F`.
    pub delta: f64,
    pub degenerate: bool,
    /// Nearest named generator within 10% Frobenius distance, else a
    /// family label or "unnamed".
    pub interpretation: String,
    pub basis_name: String,
}

/// Assembles and solves for `basis`, picking a deterministic representative
/// when the minimal eigenvalue is degenerate.
pub fn solve_for_basis(
    r: &HermitianOperator,
    basis: &GeneratorBasis,
    beta: f64,
    dt: f64,
) -> Result<GevpSolution, Error> {
    let rnorm = r.frobenius_norm();
    if rnorm == 0.0 {
        return Err(Error::DegenerateInput);
    }
    let (mmat, nmat) = assemble_double_commutator(r, basis)?;
    let eig = solve_gevp(&mmat, &nmat, (1e-12 * rnorm) * (1e-12 * rnorm))?;

    let named = named_candidates(basis.dim(), beta, dt);
    let (coeffs, interpretation) = if eig.degenerate {
        pick_degenerate_representative(basis, &eig, &named)
    } else {
        let a = basis.combine(eig.coeffs.as_slice());
        (eig.coeffs.clone(), interpret(&a, &named, &basis.name))
    };

    let a = basis.combine(coeffs.as_slice());
    let generator = HermitianOperator::from_nearly_hermitian(a);
    // consistency: ||[A*, R]||_F^2 = lambda_min at unit N-norm
    let direct = frobenius_norm(&commutator(generator.matrix(), r.matrix()));
    // natural scale: ||[A, R]||^2 <= 4 ||R||^2 at unit ||A||
    let scale = (rnorm * rnorm).max(eig.lambda_min);
    if (direct * direct - eig.lambda_min).abs() > 1e-8 * scale {
        return Err(Error::NumericalFailure("eigenvalue-commutator mismatch"));
    }
    Ok(GevpSolution {
        lambda_min: eig.lambda_min,
        coeffs: coeffs.as_slice().to_vec(),
        generator,
        delta: libm::sqrt(eig.lambda_min.max(0.0)) / rnorm,
        degenerate: eig.degenerate,
        interpretation,
        basis_name: basis.name.clone(),
    })
}

/// Named reference generators for interpretation, unit Frobenius norm,
/// identity direction removed.
fn named_candidates(m: usize, beta: f64, dt: f64) -> Vec<(String, CMatrix)> {
    let mut out = Vec::new();
    let mut push = |name: &str, mat: &CMatrix| {
        let mut g = mat.clone();
        let tr = g.trace() / Complex64::new(m as f64, 0.0);
        for i in 0..m {
            g[(i, i)] -= tr;
        }
        let n = frobenius_norm(&g);
        if n > 1e-12 {
            out.push((String::from(name), g / Complex64::new(n, 0.0)));
        }
    };
    for (base, gen) in [
        ("shift", groups::shift_generator(m)),
        ("logdiag", groups::log_diag_generator(m)),
        ("chirpshift", groups::chirp_conj_shift_generator(m, beta, dt)),
    ] {
        for (i, part) in gen.parts.iter().enumerate() {
            if gen.parts.len() == 1 {
                push(base, part);
            } else if i == 0 {
                push(base, part);
            } else {
                // second Hermitian part of the unitary pair
                let mut name = String::from(base);
                name.push_str("-quad");
                push(&name, part);
            }
        }
    }
    out
}

fn interpret(a: &CMatrix, named: &[(String, CMatrix)], basis_name: &str) -> String {
    let an = frobenius_norm(a);
    if an > 0.0 {
        for (name, g) in named {
            let d1 = frobenius_norm(&(a / Complex64::new(an, 0.0) - g));
            let d2 = frobenius_norm(&(a / Complex64::new(an, 0.0) + g));
            if d1.min(d2) <= 0.1 {
                return name.clone();
            }
        }
    }
    match basis_name {
        "circulant-hermitian" => "shift-polynomial".into(),
        "chirp-circulant" => "chirped-shift-polynomial".into(),
        "diagonal-real" => "diagonal".into(),
        _ => "unnamed".into(),
    }
}

/// Among a degenerate minimal eigenspace, prefer the direction closest to a
/// named generator; fall back to the first eigenvector.
fn pick_degenerate_representative(
    basis: &GeneratorBasis,
    eig: &GevpEigen,
    named: &[(String, CMatrix)],
) -> (DVector<f64>, String) {
    // Frobenius-orthonormalize the eigenspace in matrix form, tracking coeffs
    let mut mats: Vec<CMatrix> = Vec::new();
    let mut coefs: Vec<DVector<f64>> = Vec::new();
    for c in &eig.eigenspace {
        let mut a = basis.combine(c.as_slice());
        let mut cc = c.clone();
        for (q, qc) in mats.iter().zip(coefs.iter()) {
            let p = frobenius_inner(q, &a).re;
            a -= q * Complex64::new(p, 0.0);
            cc -= qc * p;
        }
        let n = frobenius_norm(&a);
        if n > 1e-10 {
            mats.push(a / Complex64::new(n, 0.0));
            coefs.push(cc / n);
        }
    }
    let mut best: Option<(f64, DVector<f64>, String)> = None;
    for (name, g) in named {
        // projection of the named direction onto the eigenspace
        let mut proj: DVector<f64> = DVector::zeros(basis.len());
        let mut norm_sq = 0.0;
        for (q, qc) in mats.iter().zip(coefs.iter()) {
            let p = frobenius_inner(q, g).re;
            proj += qc * p;
            norm_sq += p * p;
        }
        let n = libm::sqrt(norm_sq);
        if n > 0.9 {
            // nearly contained: the representative is the projection itself
            if best.as_ref().map_or(true, |(bn, _, _)| n > *bn) {
                best = Some((n, proj / n, name.clone()));
            }
        }
    }
    match best {
        Some((_, mut c, name)) => {
            fix_sign(&mut c);
            (c, name)
        }
        None => {
            let a = basis.combine(eig.coeffs.as_slice());
            let label = interpret(&a, named, &basis.name);
            (eig.coeffs.clone(), label)
        }
    }
}

/// Orthonormalize `cands` under the Frobenius inner product after removing
/// the identity direction from each, dropping dependent members.
fn identity_projected_orthonormal(m: usize, cands: Vec<CMatrix>) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::new();
    for mut a in cands {
        let tr = a.trace() / Complex64::new(m as f64, 0.0);
        for i in 0..m {
            a[(i, i)] -= tr;
        }
        for q in &out {
            let p = frobenius_inner(q, &a);
            a -= q * p;
        }
        let n = frobenius_norm(&a);
        if n > 1e-8 {
            out.push(a / Complex64::new(n, 0.0));
        }
    }
    out
}

fn circulant_hermitian_matrices(m: usize) -> Vec<CMatrix> {
    let mut cands = Vec::new();
    let s = Complex64::new(1.0 / libm::sqrt(2.0), 0.0);
    for k in 1..=m / 2 {
        let pk = groups::cyclic_shift_power(m, k);
        let pmk = groups::cyclic_shift_power(m, m - k);
        cands.push((&pk + &pmk) * s);
        if 2 * k != m {
            cands.push((&pk - &pmk) * Complex64::new(0.0, -1.0) * s);
        }
    }
    cands
}

/// Builds one of the named bases. `beta`/`dt` parameterize the chirp family.
pub fn built_in_basis(name: &str, m: usize, beta: f64, dt: f64) -> Result<GeneratorBasis, Error> {
    let cands: Vec<CMatrix> = match name {
        "circulant-hermitian" => circulant_hermitian_matrices(m),
        "chirp-circulant" => {
            let u = crate::model::chirp_unitary(m, beta, dt);
            circulant_hermitian_matrices(m)
                .into_iter()
                .map(|b| &u * b * u.adjoint())
                .collect()
        }
        "diagonal-real" => (0..m)
            .map(|i| {
                let mut d = CMatrix::zeros(m, m);
                d[(i, i)] = Complex64::new(1.0, 0.0);
                d
            })
            .collect(),
        "full-hermitian" => {
            if m > FULL_HERMITIAN_MAX_M {
                return Err(Error::InvalidInput(
                    "full-hermitian basis refused above M = 24",
                ));
            }
            let s = Complex64::new(1.0 / libm::sqrt(2.0), 0.0);
            let mut v = Vec::new();
            for i in 0..m {
                let mut d = CMatrix::zeros(m, m);
                d[(i, i)] = Complex64::new(1.0, 0.0);
                v.push(d);
            }
            for i in 0..m {
                for j in i + 1..m {
                    let mut a = CMatrix::zeros(m, m);
                    a[(i, j)] = Complex64::new(1.0, 0.0);
                    a[(j, i)] = Complex64::new(1.0, 0.0);
                    v.push(a * s);
                    let mut b = CMatrix::zeros(m, m);
                    b[(i, j)] = Complex64::new(0.0, 1.0);
                    b[(j, i)] = Complex64::new(0.0, -1.0);
                    v.push(b * s);
                }
            }
            v
        }
        _ => return Err(Error::InvalidInput("unknown basis name")),
    };
    GeneratorBasis::new(name, identity_projected_orthonormal(m, cands))
}

/// End-to-end matching against a named basis.
pub fn match_group(
    r: &HermitianOperator,
    basis_name: &str,
    beta: f64,
    dt: f64,
) -> Result<GevpSolution, Error> {
    let basis = built_in_basis(basis_name, r.dim(), beta, dt)?;
    solve_for_basis(r, &basis, beta, dt)
}
