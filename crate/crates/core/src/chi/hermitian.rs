use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition `H V = V diag(values)` of a Hermitian matrix, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Eigenvector paired with `values[index]`.
    pub fn vector(&self, index: usize) -> Vec<Complex64> {
        self.vectors.column(index)
    }
}

/// Cyclic complex Jacobi.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    jacobi(h.clone(), CMatrix::identity(h.dim()))
}

/// Jacobi started from the basis `start` (assumed unitary); converges in a sweep
/// or two when `start` already nearly diagonalizes `h`.
pub fn hermitian_eigen_from(h: &CMatrix, start: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let a = start.adjoint().matmul(h).matmul(start);
    jacobi(a, start.clone())
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail
fn check_hermitian(h: &CMatrix) -> Result<()> {
    let deviation = h.hermitian_deviation();
    if !(deviation <= 1e-10 * h.frobenius_norm().max(1.0)) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn jacobi(mut a: CMatrix, mut v: CMatrix) -> Result<HermitianEigen> {
    let m = a.dim();
    for i in 0..m {
        let d = a[(i, i)].re;
        a[(i, i)] = Complex64::new(d, 0.0);
    }
    let scale = a.frobenius_norm();
    let target = 1e-15 * scale;
    let skip = 1e-18 * scale;

    let mut converged = m < 2 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                algorithm: "Hermitian Jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..m - 1 {
            for q in p + 1..m {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, r);
            }
        }
        converged = off_diagonal(&a) <= target;
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(m);
    for (c, &src) in order.iter().enumerate() {
        for r in 0..m {
            vectors[(r, c)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]`, `a ← G* a G`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, apq: Complex64, r: f64) {
    let m = a.dim();
    let phase = apq / r;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let e = phase.conj();
    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = e * -s;
    let g11 = e * c;

    for k in 0..m {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..m {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    for k in 0..m {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

fn off_diagonal(a: &CMatrix) -> f64 {
    let m = a.dim();
    let mut s = 0.0;
    for r in 0..m {
        for c in 0..m {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}
