//! The complex adjoint embedding and the dense complex kernels built on it.
//!
//! For `A = A₁ + A₂ j` with complex `A₁, A₂`,
//!
//! ```text
//! χ_A = [  A₁    A₂ ]
//!       [ -Ā₂    Ā₁ ]
//! ```
//!
//! is an injective real-algebra homomorphism `M_n(ℍ) → M_2n(ℂ)` that preserves
//! adjoints, normality, unitarity and the operator norm. Every eigenvalue and
//! norm computation in this crate goes through it.

mod eigen;
mod hermitian;
mod sweep;

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{QMatrix, QVector};
use crate::quat::Quaternion;

pub use eigen::general_eigenvalues;
pub use hermitian::{hermitian_eigen, hermitian_eigen_from, HermitianEigen};
pub use sweep::{complex_range_sweep, SweepResult, DEFAULT_ANGLES};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    m: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![C0; m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out[(i, i)] = C1;
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { m, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| Complex64::new(*x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut out = Self::zeros(entries.len());
        for (i, z) in entries.iter().enumerate() {
            out[(i, i)] = *z;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        let mut out = Self::zeros(m);
        for r in 0..m {
            for c in 0..m {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        let m = self.m;
        let mut out = Self::zeros(m);
        for r in 0..m {
            for k in 0..m {
                let a = self.data[r * m + k];
                if a == C0 {
                    continue;
                }
                for c in 0..m {
                    out.data[r * m + c] += a * rhs.data[k * m + c];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.m, x.len(), "dimension mismatch");
        self.data
            .chunks_exact(self.m.max(1))
            .take(self.m)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Self {
            m: self.m,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Self {
            m: self.m,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            m: self.m,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self - z I`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.m {
            out[(i, i)] -= z;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let m = self.m;
        let mut dev = 0.0f64;
        for r in 0..m {
            for c in r..m {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.frobenius_norm().max(1.0)
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let d = adj.matmul(self).sub(&self.matmul(&adj));
        d.frobenius_norm() <= tol * self.frobenius_norm().powi(2).max(1.0)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.m))
            .frobenius_norm()
            <= tol
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.m).map(|r| self[(r, c)]).collect()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.m == 0 {
            return Ok(0.0);
        }
        let g = self.adjoint().matmul(self);
        let eig = hermitian_eigen(&g)?;
        Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    /// Smallest singular value.
    pub fn min_singular_value(&self) -> Result<f64> {
        if self.m == 0 {
            return Ok(0.0);
        }
        let g = self.adjoint().matmul(self);
        let eig = hermitian_eigen(&g)?;
        Ok(eig.values[0].max(0.0).sqrt())
    }

    /// Solves `self · x = b` by LU with partial pivoting. Pivots below
    /// `floor` are replaced by `floor`, which turns the solve into an inverse
    /// iteration step when the matrix is (nearly) singular.
    pub(crate) fn solve_regularized(&self, b: &[Complex64], floor: f64) -> Vec<Complex64> {
        let m = self.m;
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for k in 0..m {
            let (p, _) = (k..m)
                .map(|r| (r, a[r * m + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for c in 0..m {
                    a.swap(k * m + c, p * m + c);
                }
                x.swap(k, p);
            }
            if a[k * m + k].norm() < floor {
                a[k * m + k] = Complex64::new(floor, 0.0);
            }
            let pivot = a[k * m + k];
            for r in k + 1..m {
                let f = a[r * m + k] / pivot;
                if f == C0 {
                    continue;
                }
                for c in k..m {
                    let v = a[k * m + c];
                    a[r * m + c] -= f * v;
                }
                let xk = x[k];
                x[r] -= f * xk;
            }
        }
        for k in (0..m).rev() {
            let mut s = x[k];
            for c in k + 1..m {
                s -= a[k * m + c] * x[c];
            }
            x[k] = s / a[k * m + k];
        }
        x
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.m + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.m + c]
    }
}

/// `χ_A`.
pub fn chi_embed(a: &QMatrix) -> CMatrix {
    let n = a.dim();
    let mut out = CMatrix::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            let (z1, z2) = a[(r, c)].complex_pair();
            out[(r, c)] = z1;
            out[(r, n + c)] = z2;
            out[(n + r, c)] = -z2.conj();
            out[(n + r, n + c)] = z1.conj();
        }
    }
    out
}

/// Inverse of [`chi_embed`] on its image: reads `A₁` and `A₂` from the top block row.
pub fn chi_unembed(b: &CMatrix) -> Result<QMatrix> {
    if !b.dim().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "complex adjoint must have even dimension, got {}",
            b.dim()
        )));
    }
    let n = b.dim() / 2;
    let mut a = QMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = Quaternion::from_complex_pair(b[(r, c)], b[(r, n + c)]);
        }
    }
    Ok(a)
}

/// `[X₁; -X̄₂]` for `X = X₁ + X₂ j`.
pub fn chi_vector(x: &QVector) -> Vec<Complex64> {
    let n = x.len();
    let mut v = vec![C0; 2 * n];
    for (l, q) in x.iter().enumerate() {
        let (z1, z2) = q.complex_pair();
        v[l] = z1;
        v[n + l] = -z2.conj();
    }
    v
}

/// Inverse of [`chi_vector`]: `X₁ = top`, `X₂ = -conj(bottom)`.
pub fn chi_unvector(v: &[Complex64]) -> QVector {
    let n = v.len() / 2;
    QVector(
        (0..n)
            .map(|l| Quaternion::from_complex_pair(v[l], -v[n + l].conj()))
            .collect(),
    )
}

/// Quaternionic operator norm, `‖A‖ = ‖χ_A‖`.
pub fn operator_norm(a: &QMatrix) -> Result<f64> {
    chi_embed(a).spectral_norm()
}

pub(crate) fn cdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn cnorm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::QVector;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn radius_one_matrix() -> QMatrix {
        let z = Quaternion::ZERO;
        QMatrix::from_rows(vec![
            vec![z, Quaternion::new(1.0, 0.0, 0.0, 3f64.sqrt()), z],
            vec![z, z, z],
            vec![z, z, Quaternion::J],
        ])
        .unwrap()
    }

    #[test]
    fn embed_scalar() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let x = chi_embed(&QMatrix::diag(&[q]));
        let expected = CMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(3.0, 4.0)],
            vec![c(-3.0, 4.0), c(1.0, -2.0)],
        ])
        .unwrap();
        assert_eq!(x, expected);
    }

    #[test]
    fn embed_identity_and_diag_j() {
        assert_eq!(chi_embed(&QMatrix::identity(3)), CMatrix::identity(6));
        let a = QMatrix::diag(&[Quaternion::J, -Quaternion::J]);
        let expected = CMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(chi_embed(&a), expected);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&QMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        assert!((operator_norm(&radius_one_matrix()).unwrap() - 2.0).abs() < 1e-12);
        let mut a = QMatrix::zeros(2);
        a[(0, 1)] = Quaternion::new(0.0, 0.0, 2.0, 0.0);
        assert!((operator_norm(&a).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn vector_shuffle_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = QVector::random_unit(4, &mut rng);
        let v = chi_vector(&x);
        assert!((cnorm(&v) - 1.0).abs() < 1e-14);
        assert_eq!(chi_unvector(&v), x);
    }

    #[test]
    fn projection_of_quadratic_form_is_complex_form() {
        // co(⟨X, AX⟩) = ⟨v, χ_A v⟩ for v = [X₁; -X̄₂]
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..5 {
            let a = QMatrix::random(n, &mut rng);
            let x = QVector::random_unit(n, &mut rng);
            let lhs = a.quadratic_form(&x).unwrap().co();
            let v = chi_vector(&x);
            let rhs = cdot(&v, &chi_embed(&a).matvec(&v));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn chi_eigvec_maps_to_right_eigvec() {
        let a = QMatrix::diag(&[Quaternion::new(1.0, 0.0, 2.0, 0.0), Quaternion::real(3.0)]);
        let x = QVector(vec![Quaternion::ZERO, Quaternion::ONE]);
        let v = chi_vector(&x);
        let lhs = chi_embed(&a).matvec(&v);
        for (l, r) in lhs.iter().zip(&v) {
            assert!((l - r * 3.0).norm() < 1e-14);
        }
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
        prop::collection::vec(prop::array::uniform4(-3.0f64..3.0), n * n).prop_map(move |v| {
            QMatrix::from_row_major(n, v.into_iter().map(Quaternion::from).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn embedding_is_additive_and_multiplicative(a in arb_matrix(3), b in arb_matrix(3)) {
            let sum = chi_embed(&a.add(&b).unwrap()).sub(&chi_embed(&a).add(&chi_embed(&b)));
            prop_assert!(sum.frobenius_norm() < 1e-12);
            let prod = chi_embed(&a.matmul(&b).unwrap()).sub(&chi_embed(&a).matmul(&chi_embed(&b)));
            prop_assert!(prod.frobenius_norm() < 1e-12 * (a.frobenius_norm() * b.frobenius_norm()).max(1.0));
        }

        #[test]
        fn embedding_commutes_with_adjoint(a in arb_matrix(3)) {
            prop_assert_eq!(chi_embed(&a.adjoint()), chi_embed(&a).adjoint());
        }

        #[test]
        fn unembed_inverts_embed(a in arb_matrix(2)) {
            prop_assert_eq!(chi_unembed(&chi_embed(&a)).unwrap(), a);
        }

        #[test]
        fn norm_scales_with_real_factor(a in arb_matrix(3), s in -5.0f64..5.0) {
            let lhs = operator_norm(&a.scale(s)).unwrap();
            let rhs = s.abs() * operator_norm(&a).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn structure_transfers_both_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let tol = 1e-10;
        for n in 1..5 {
            let a = QMatrix::random(n, &mut rng);
            let h = a.add(&a.adjoint()).unwrap();
            let u = QMatrix::random_unitary(n, &mut rng);
            let d = QMatrix::diag(
                &(0..n)
                    .map(|k| Quaternion::new(k as f64, 1.0 + k as f64, 0.0, 0.0))
                    .collect::<Vec<_>>(),
            );
            let normal = u.adjoint().matmul(&d).unwrap().matmul(&u).unwrap();

            for m in [&a, &h, &u, &normal] {
                let x = chi_embed(m);
                assert_eq!(m.is_selfadjoint(tol), x.is_hermitian(tol));
                assert_eq!(m.is_unitary(tol), x.is_unitary(tol));
                assert_eq!(m.is_normal(tol), x.is_normal(tol));
            }
            assert!(h.is_selfadjoint(tol) && chi_embed(&h).is_hermitian(tol));
            assert!(u.is_unitary(tol) && chi_embed(&u).is_unitary(tol));
            assert!(normal.is_normal(tol) && chi_embed(&normal).is_normal(tol));
            if n > 1 {
                assert!(!a.is_normal(tol) && !chi_embed(&a).is_normal(tol));
            }
        }
    }

    #[test]
    fn eigenvalues_come_in_conjugate_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..6 {
            let a = QMatrix::random(n, &mut rng);
            let mut ev = general_eigenvalues(&chi_embed(&a)).unwrap();
            let mut conj: Vec<_> = ev.iter().map(|z| z.conj()).collect();
            let key = |z: &Complex64| (z.re, z.im);
            ev.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            conj.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            // greedy matching within tolerance
            let mut used = vec![false; conj.len()];
            for z in &ev {
                let j = (0..conj.len())
                    .filter(|&j| !used[j])
                    .min_by(|&p, &q| (conj[p] - z).norm().partial_cmp(&(conj[q] - z).norm()).unwrap())
                    .unwrap();
                assert!((conj[j] - z).norm() < 1e-7, "unpaired eigenvalue {z}");
                used[j] = true;
            }
        }
    }
}
