//! Dense vectors and matrices over the quaternions.
//!
//! `ℍⁿ` is treated as a right module: scalars multiply vectors from the right
//! and the inner product `⟨X, Y⟩ = Σ x̄ₗ yₗ` is conjugate linear in its first
//! argument, so `⟨X, Y q⟩ = ⟨X, Y⟩ q`.

use std::ops::{Index, IndexMut};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(pub Vec<Quaternion>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; n])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[index] = Quaternion::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Quaternion> {
        self.0.iter()
    }

    /// `⟨self, other⟩ = Σ conj(selfₗ) otherₗ`.
    pub fn dot(&self, other: &QVector) -> Result<Quaternion> {
        check_len(self.len(), other.len())?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &QVector) -> Quaternion {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Quaternion::ZERO, |acc, (x, y)| acc + x.conj() * *y)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self(self.0.iter().map(|x| *x / n).collect())
    }

    /// `X · q`.
    pub fn right_mul(&self, q: Quaternion) -> Self {
        Self(self.0.iter().map(|x| *x * q).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| *x * s).collect())
    }

    pub fn add(&self, other: &QVector) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, other: &QVector) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect())
    }

    /// Flattens to `4n` real coordinates `(q0, q1, q2, q3)` per entry.
    pub fn to_reals(&self) -> Vec<f64> {
        self.0.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_reals(r: &[f64]) -> Self {
        Self(
            r.chunks_exact(4)
                .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
                .collect(),
        )
    }

    /// Uniform draw on the unit sphere of `ℍⁿ`.
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let v = Self(
                (0..n)
                    .map(|_| {
                        Quaternion::new(
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                        )
                    })
                    .collect(),
            );
            let norm = v.norm();
            if norm > 1e-150 {
                return v.scale(1.0 / norm);
            }
        }
    }
}

impl Index<usize> for QVector {
    type Output = Quaternion;
    fn index(&self, i: usize) -> &Quaternion {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Quaternion {
        &mut self.0[i]
    }
}

/// Deterministic uniform unit vector in `ℍⁿ` for a given seed.
pub fn random_unit_vector(n: usize, seed: u64) -> QVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QVector::random_unit(n, &mut rng)
}

/// Square `n × n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn diag(entries: &[Quaternion]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, q) in entries.iter().enumerate() {
            m[(i, i)] = *q;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            check_len(n, row.len())?;
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_row_major(n: usize, data: Vec<Quaternion>) -> Result<Self> {
        check_len(n * n, data.len())?;
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Quaternion]> {
        self.data.chunks_exact(self.n.max(1))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matvec(&self, x: &QVector) -> Result<QVector> {
        check_len(self.n, x.len())?;
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &QVector) -> QVector {
        QVector(
            self.rows()
                .take(self.n)
                .map(|row| {
                    row.iter()
                        .zip(&x.0)
                        .fold(Quaternion::ZERO, |acc, (a, b)| acc + *a * *b)
                })
                .collect(),
        )
    }

    pub fn matmul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        check_len(self.n, rhs.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &QMatrix) -> Result<QMatrix> {
        check_len(self.n, rhs.n)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn sub(&self, rhs: &QMatrix) -> Result<QMatrix> {
        check_len(self.n, rhs.n)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().map(|q| *q * s).collect(),
        }
    }

    /// `α I + β A` for real `α, β`.
    pub fn affine(&self, alpha: f64, beta: f64) -> QMatrix {
        let mut out = self.scale(beta);
        for i in 0..self.n {
            out[(i, i)] += Quaternion::real(alpha);
        }
        out
    }

    /// `diag(self, other)`.
    pub fn block_diag(&self, other: &QMatrix) -> QMatrix {
        let n = self.n + other.n;
        let mut out = Self::zeros(n);
        for r in 0..self.n {
            for c in 0..self.n {
                out[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..other.n {
            for c in 0..other.n {
                out[(self.n + r, self.n + c)] = other[(r, c)];
            }
        }
        out
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Result<QMatrix> {
        let n = cols.len();
        let mut out = Self::zeros(n);
        for (c, col) in cols.iter().enumerate() {
            check_len(n, col.len())?;
            for r in 0..n {
                out[(r, c)] = col[r];
            }
        }
        Ok(out)
    }

    pub fn column(&self, c: usize) -> QVector {
        QVector((0..self.n).map(|r| self[(r, c)]).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨X, A X⟩` for a unit vector `X`.
    pub fn quadratic_form(&self, x: &QVector) -> Result<Quaternion> {
        check_len(self.n, x.len())?;
        let norm = x.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(self.quadratic_form_unchecked(x))
    }

    /// `⟨X, A X⟩` without the unit-norm check.
    pub fn quadratic_form_unchecked(&self, x: &QVector) -> Quaternion {
        x.dot_unchecked(&self.matvec_unchecked(x))
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        let d = self.sub(&self.adjoint()).expect("same dimension");
        d.frobenius_norm() <= tol * self.frobenius_norm().max(1.0)
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let lhs = adj.matmul(self).expect("same dimension");
        let rhs = self.matmul(&adj).expect("same dimension");
        let scale = self.frobenius_norm().powi(2).max(1.0);
        lhs.sub(&rhs).expect("same dimension").frobenius_norm() <= tol * scale
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let g = self.adjoint().matmul(self).expect("same dimension");
        g.sub(&Self::identity(self.n))
            .expect("same dimension")
            .frobenius_norm()
            <= tol
    }

    /// Matrix with independent standard-normal components.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let data = (0..n * n)
            .map(|_| {
                Quaternion::new(
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                )
            })
            .collect();
        Self { n, data }
    }

    /// Random unitary built from `n` reflections `I - 2 v v*` and a diagonal of unit quaternions.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut u = Self::identity(n);
        for _ in 0..n.max(1) {
            let v = QVector::random_unit(n, rng);
            u = reflection(&v).matmul(&u).expect("same dimension");
        }
        let phases: Vec<Quaternion> = (0..n)
            .map(|_| QVector::random_unit(1, rng)[0])
            .collect();
        Self::diag(&phases).matmul(&u).expect("same dimension")
    }

    /// `P = Q Q*` for an orthonormal set of `rank` random vectors.
    pub fn random_projection<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Self {
        let basis = orthonormalize(&(0..rank.min(n)).map(|_| QVector::random_unit(n, rng)).collect::<Vec<_>>());
        let mut p = Self::zeros(n);
        for v in &basis {
            for r in 0..n {
                for c in 0..n {
                    p[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        p
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.n + c]
    }
}

/// `I - 2 v v*` for unit `v`.
pub fn reflection(v: &QVector) -> QMatrix {
    let n = v.len();
    let mut h = QMatrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] -= (v[r] * v[c].conj()) * 2.0;
        }
    }
    h
}

/// Modified Gram–Schmidt over `ℍ`; drops vectors that are numerically dependent.
pub fn orthonormalize(vectors: &[QVector]) -> Vec<QVector> {
    let mut basis: Vec<QVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &basis {
                let c = e.dot_unchecked(&w);
                w = w.sub(&e.right_mul(c));
            }
        }
        let norm = w.norm();
        if norm > 1e-10 * v.norm().max(f64::MIN_POSITIVE) {
            basis.push(w.scale(1.0 / norm));
        }
    }
    basis
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
