//! Finite unitary group representations and Lie-algebra generators.
//!
//! Groups are stored by kind and generate their elements by index, caching
//! the dense list only while `|G| * M^2` stays under a storage cap. Weights
//! are the normalized counting measure (finite Haar).

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::CMatrix;
use crate::model::chirp_unitary;

/// Default storage cap: dense element lists above 2^26 complex entries are
/// generated lazily by index instead.
pub const DEFAULT_MAX_DENSE_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Trivial,
    Cyclic,
    Dihedral,
    Reversal,
    TfLattice,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Trivial => "trivial",
            GroupKind::Cyclic => "cyclic",
            GroupKind::Dihedral => "dihedral",
            GroupKind::Reversal => "reversal",
            GroupKind::TfLattice => "tf-lattice",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "trivial" => Some(GroupKind::Trivial),
            "cyclic" => Some(GroupKind::Cyclic),
            "dihedral" => Some(GroupKind::Dihedral),
            "reversal" => Some(GroupKind::Reversal),
            "tf-lattice" => Some(GroupKind::TfLattice),
            _ => None,
        }
    }
}

/// An enumerable finite set of M x M unitary matrices with Haar weights.
pub struct GroupRep {
    kind: GroupKind,
    dim: usize,
    order: usize,
    weights: Vec<f64>,
    cached: Option<Vec<CMatrix>>,
    /// Set when the dense element list exceeded the storage cap and elements
    /// are generated on demand; surfaced as a report flag by callers.
    pub lazy: bool,
}

impl GroupRep {
    fn build(kind: GroupKind, dim: usize, max_dense_entries: usize) -> Result<Self, Error> {
        if dim < 2 {
            return Err(Error::InvalidModel("group dimension must be >= 2"));
        }
        let order = match kind {
            GroupKind::Trivial => 1,
            GroupKind::Cyclic => dim,
            GroupKind::Dihedral => 2 * dim,
            GroupKind::Reversal => 2,
            GroupKind::TfLattice => dim * dim,
        };
        let weights = alloc::vec![1.0 / order as f64; order];
        let lazy = order * dim * dim > max_dense_entries;
        let mut rep = GroupRep {
            kind,
            dim,
            order,
            weights,
            cached: None,
            lazy,
        };
        if !lazy {
            rep.cached = Some((0..order).map(|i| rep.generate(i)).collect());
        }
        Ok(rep)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Element `idx` as a dense unitary matrix.
    pub fn element(&self, idx: usize) -> CMatrix {
        if let Some(cache) = &self.cached {
            return cache[idx].clone();
        }
        self.generate(idx)
    }

    fn generate(&self, idx: usize) -> CMatrix {
        let m = self.dim;
        match self.kind {
            GroupKind::Trivial => CMatrix::identity(m, m),
            GroupKind::Cyclic => cyclic_shift_power(m, idx),
            GroupKind::Dihedral => {
                let p = cyclic_shift_power(m, idx % m);
                if idx < m {
                    p
                } else {
                    reversal_matrix(m) * p
                }
            }
            GroupKind::Reversal => {
                if idx == 0 {
                    CMatrix::identity(m, m)
                } else {
                    reversal_matrix(m)
                }
            }
            GroupKind::TfLattice => {
                // rho(k, l) = W^l P^k with idx = k * M + l
                let k = idx / m;
                let l = idx % m;
                let p = cyclic_shift_power(m, k);
                let mut out = p;
                for row in 0..m {
                    let ang = 2.0 * PI * ((l * row) % m) as f64 / m as f64;
                    let w = Complex64::new(libm::cos(ang), libm::sin(ang));
                    for col in 0..m {
                        out[(row, col)] *= w;
                    }
                }
                out
            }
        }
    }

    /// Apply element `idx` to a vector without materializing the matrix.
    pub fn apply(&self, idx: usize, x: &[Complex64]) -> Vec<Complex64> {
        let m = self.dim;
        debug_assert_eq!(x.len(), m);
        match self.kind {
            GroupKind::Trivial => x.to_owned(),
            GroupKind::Cyclic => shift_vec(x, idx),
            GroupKind::Dihedral => {
                let shifted = shift_vec(x, idx % m);
                if idx < m {
                    shifted
                } else {
                    reverse_vec(&shifted)
                }
            }
            GroupKind::Reversal => {
                if idx == 0 {
                    x.to_owned()
                } else {
                    reverse_vec(x)
                }
            }
            GroupKind::TfLattice => {
                let k = idx / m;
                let l = idx % m;
                let mut out = shift_vec(x, k);
                for (n, v) in out.iter_mut().enumerate() {
                    let ang = 2.0 * PI * ((l * n) % m) as f64 / m as f64;
                    *v *= Complex64::new(libm::cos(ang), libm::sin(ang));
                }
                out
            }
        }
    }
}

/// `(P x)[n] = x[(n - 1) mod M]` raised to the k-th power.
fn shift_vec(x: &[Complex64], k: usize) -> Vec<Complex64> {
    let m = x.len();
    (0..m).map(|n| x[(n + m - k % m) % m]).collect()
}

fn reverse_vec(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().rev().cloned().collect()
}

/// Cyclic permutation matrix power `P^k`, `(P x)[n] = x[(n-1) mod M]`.
pub fn cyclic_shift_power(m: usize, k: usize) -> CMatrix {
    let mut p = CMatrix::zeros(m, m);
    for n in 0..m {
        p[(n, (n + m - k % m) % m)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// Index-reversal permutation `(J x)[n] = x[M - 1 - n]`.
pub fn reversal_matrix(m: usize) -> CMatrix {
    let mut j = CMatrix::zeros(m, m);
    for n in 0..m {
        j[(n, m - 1 - n)] = Complex64::new(1.0, 0.0);
    }
    j
}

pub fn trivial_group(m: usize) -> Result<GroupRep, Error> {
    GroupRep::build(GroupKind::Trivial, m, DEFAULT_MAX_DENSE_ENTRIES)
}

/// `Z_M`: M cyclic shift powers, uniform weights 1/M.
pub fn cyclic_group(m: usize) -> Result<GroupRep, Error> {
    GroupRep::build(GroupKind::Cyclic, m, DEFAULT_MAX_DENSE_ENTRIES)
}

/// 2M elements `{P^k, J P^k}`, uniform weights 1/(2M).
pub fn dihedral_group(m: usize) -> Result<GroupRep, Error> {
    GroupRep::build(GroupKind::Dihedral, m, DEFAULT_MAX_DENSE_ENTRIES)
}

/// `{I, J}` with weights 1/2 each.
pub fn reversal_group(m: usize) -> Result<GroupRep, Error> {
    GroupRep::build(GroupKind::Reversal, m, DEFAULT_MAX_DENSE_ENTRIES)
}

/// `Z_M x Z_M` time-frequency lattice: `rho(k, l) = W^l P^k`.
pub fn tf_lattice_group(m: usize) -> Result<GroupRep, Error> {
    GroupRep::build(GroupKind::TfLattice, m, DEFAULT_MAX_DENSE_ENTRIES)
}

/// As the constructors above but with an explicit dense-storage cap
/// (entries, not bytes); above it, elements are generated lazily.
pub fn group_with_cap(kind: GroupKind, m: usize, max_dense_entries: usize) -> Result<GroupRep, Error> {
    GroupRep::build(kind, m, max_dense_entries)
}

/// A Hermitian generator bundle. A unitary generator U contributes its two
/// Hermitian parts `H1 = (U + U^H)/2`, `H2 = (U - U^H)/(2i)`: `[U, R] = 0`
/// iff both parts commute with R, so residuals over the bundle preserve the
/// matched-group zeros exactly.
pub struct Generator {
    pub name: String,
    pub parts: Vec<CMatrix>,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.parts[0].nrows()
    }
}

fn hermitian_parts(u: &CMatrix) -> Vec<CMatrix> {
    let h1 = (u + u.adjoint()) * Complex64::new(0.5, 0.0);
    let h2 = (u - u.adjoint()) * Complex64::new(0.0, -0.5);
    alloc::vec![h1, h2]
}

/// Hermitian part pair of the cyclic shift `P`.
pub fn shift_generator(m: usize) -> Generator {
    Generator {
        name: "shift".into(),
        parts: hermitian_parts(&cyclic_shift_power(m, 1)),
    }
}

/// Log-index diagonal `D = diag(ln 1, ln 2, ..., ln M)` (dilation surrogate).
pub fn log_diag_generator(m: usize) -> Generator {
    let mut d = CMatrix::zeros(m, m);
    for i in 0..m {
        d[(i, i)] = Complex64::new(libm::log((i + 1) as f64), 0.0);
    }
    Generator {
        name: "logdiag".into(),
        parts: alloc::vec![d],
    }
}

/// Hermitian part pair of the chirp-conjugated shift `U_psi P U_psi^H`,
/// with `U_psi = diag(exp(i pi beta t_n^2))` on the grid `t_n = n dt`.
/// Conjugation direction matches [`crate::model::make_chirp_covariance`],
/// so the pair commutes exactly with the matched chirp covariance.
pub fn chirp_conj_shift_generator(m: usize, beta: f64, dt: f64) -> Generator {
    let u = chirp_unitary(m, beta, dt);
    let p = cyclic_shift_power(m, 1);
    let conj = &u * p * u.adjoint();
    Generator {
        name: "chirpshift".into(),
        parts: hermitian_parts(&conj),
    }
}

pub fn generator_by_name(name: &str, m: usize, beta: f64, dt: f64) -> Option<Generator> {
    match name {
        "shift" => Some(shift_generator(m)),
        "logdiag" => Some(log_diag_generator(m)),
        "chirpshift" => Some(chirp_conj_shift_generator(m, beta, dt)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, frobenius_norm, hermitian_deviation};
    use alloc::vec::Vec;

    fn unitarity_dev(u: &CMatrix) -> f64 {
        let m = u.nrows();
        frobenius_norm(&(u.adjoint() * u - CMatrix::identity(m, m)))
    }

    #[test]
    fn cyclic_m2_elements() {
        let g = cyclic_group(2).unwrap();
        assert_eq!(g.order(), 2);
        let p = g.element(1);
        assert!((p[(0, 1)].re - 1.0).abs() < 1e-15 && (p[(1, 0)].re - 1.0).abs() < 1e-15);
        assert!(p[(0, 0)].norm() < 1e-15 && p[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn cyclic_traces_and_closure() {
        let g = cyclic_group(7).unwrap();
        for k in 0..7 {
            let tr: Complex64 = (0..7).map(|i| g.element(k)[(i, i)]).sum();
            let want = if k == 0 { 7.0 } else { 0.0 };
            assert!((tr.re - want).abs() < 1e-12 && tr.im.abs() < 1e-12);
        }
        // P^M = I
        let p = cyclic_shift_power(7, 1);
        let mut acc = CMatrix::identity(7, 7);
        for _ in 0..7 {
            acc = &acc * &p;
        }
        assert!(frobenius_norm(&(acc - CMatrix::identity(7, 7))) < 1e-12);
    }

    #[test]
    fn dihedral_relations() {
        let m = 5;
        let j = reversal_matrix(m);
        let p = cyclic_shift_power(m, 1);
        assert!(frobenius_norm(&(&j * &j - CMatrix::identity(m, m))) < 1e-15);
        // J P J = P^{-1}
        let pinv = cyclic_shift_power(m, m - 1);
        assert!(frobenius_norm(&(&j * &p * &j - pinv)) < 1e-15);
    }

    #[test]
    fn dihedral_m2_distinct_elements() {
        let g = dihedral_group(2).unwrap();
        assert_eq!(g.order(), 4);
        // enumerate and deduplicate: at M=2, J == P so only 2 distinct matrices
        let mats: Vec<CMatrix> = (0..4).map(|i| g.element(i)).collect();
        let mut distinct = 0;
        for (i, a) in mats.iter().enumerate() {
            if !mats[..i].iter().any(|b| frobenius_norm(&(a - b)) < 1e-12) {
                distinct += 1;
            }
        }
        assert_eq!(distinct, 2);
    }

    #[test]
    fn tf_lattice_unitary_and_weyl_relation() {
        let m = 4;
        let g = tf_lattice_group(m).unwrap();
        assert_eq!(g.order(), 16);
        assert!(frobenius_norm(&(g.element(0) - CMatrix::identity(m, m))) < 1e-15);
        for i in 0..16 {
            assert!(unitarity_dev(&g.element(i)) < 1e-10 * m as f64);
        }
        // W P = e^{i 2 pi / M} P W
        let w = g.element(1); // rho(0, 1) = W
        let p = g.element(m); // rho(1, 0) = P
        let phase = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
        assert!(frobenius_norm(&(&w * &p - (&p * &w) * phase)) < 1e-12);
    }

    #[test]
    fn apply_matches_matrix_action() {
        let m = 6;
        let x: Vec<Complex64> = (0..m)
            .map(|n| Complex64::new(n as f64, -(n as f64) * 0.5))
            .collect();
        for g in [
            cyclic_group(m).unwrap(),
            dihedral_group(m).unwrap(),
            reversal_group(m).unwrap(),
            tf_lattice_group(m).unwrap(),
            trivial_group(m).unwrap(),
        ] {
            for idx in 0..g.order() {
                let via_mat = g.element(idx) * crate::CVector::from_column_slice(&x);
                let direct = g.apply(idx, &x);
                for (a, b) in via_mat.iter().zip(direct.iter()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closure_identity_unitarity_for_small_groups() {
        for g in [
            cyclic_group(6).unwrap(),
            dihedral_group(6).unwrap(),
            reversal_group(8).unwrap(),
            tf_lattice_group(4).unwrap(),
        ] {
            let m = g.dim();
            let elems: Vec<CMatrix> = (0..g.order()).map(|i| g.element(i)).collect();
            assert!(elems
                .iter()
                .any(|e| frobenius_norm(&(e - CMatrix::identity(m, m))) < 1e-12));
            let wsum: f64 = g.weights().iter().sum();
            assert!((wsum - 1.0).abs() < 1e-12);
            for e in &elems {
                assert!(unitarity_dev(e) < 1e-10 * m as f64);
            }
            // tf-lattice products close only up to a global phase
            let up_to_phase = g.kind() == GroupKind::TfLattice;
            for a in &elems {
                for b in &elems {
                    let prod = a * b;
                    let hit = elems.iter().any(|e| {
                        if up_to_phase {
                            let num = crate::linalg::frobenius_inner(e, &prod);
                            let den = frobenius_norm(e);
                            // |<e, prod>| = ||e|| ||prod|| iff prod = phase * e
                            (num.norm() - den * frobenius_norm(&prod)).abs() < 1e-9
                        } else {
                            frobenius_norm(&(&prod - e)) < 1e-9
                        }
                    });
                    assert!(hit, "closure violated for {}", g.name());
                }
            }
        }
    }

    #[test]
    fn haar_weights_left_invariant() {
        // uniform weights: permuting by the multiplication table is a no-op
        let g = dihedral_group(4).unwrap();
        let w = g.weights();
        for i in 1..g.order() {
            assert!((w[i] - w[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn lazy_generation_above_cap() {
        let g = group_with_cap(GroupKind::Cyclic, 8, 10).unwrap();
        assert!(g.lazy);
        let dense = cyclic_group(8).unwrap();
        for i in 0..8 {
            assert!(frobenius_norm(&(g.element(i) - dense.element(i))) < 1e-15);
        }
    }

    #[test]
    fn shift_bundle_parts_hermitian_and_reconstruct() {
        let g = shift_generator(5);
        for p in &g.parts {
            assert!(hermitian_deviation(p) < 1e-12);
        }
        // U = H1 + i H2; the two parts commute for the plain shift
        let u = &g.parts[0] + &g.parts[1] * Complex64::new(0.0, 1.0);
        assert!(frobenius_norm(&(&u - cyclic_shift_power(5, 1))) < 1e-12);
        assert!(frobenius_norm(&commutator(&g.parts[0], &g.parts[1])) < 1e-12);
    }

    #[test]
    fn log_diag_first_entry_zero() {
        let g = log_diag_generator(6);
        let d = &g.parts[0];
        assert!(d[(0, 0)].norm() < 1e-15);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert!(d[(i, j)].norm() < 1e-15);
                }
                assert!(d[(i, j)].im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn chirp_generator_reduces_to_shift_at_zero_beta() {
        let a = shift_generator(8);
        let b = chirp_conj_shift_generator(8, 0.0, 0.1);
        for (x, y) in a.parts.iter().zip(b.parts.iter()) {
            assert!(frobenius_norm(&(x - y)) < 1e-14);
        }
    }
}
