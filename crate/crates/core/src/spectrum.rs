//! Spherical spectrum, standard eigenvalues and right eigenvectors.
//!
//! `q` is a right eigenvalue of `A` iff `Δ_q(A) = A² - 2re(q)A + |q|²I` is
//! singular, so the spectrum is a union of classes `[q]`. Each class is
//! represented by its point `re + i|im|` in the closed upper half-plane, and
//! those points are exactly the eigenvalues of `χ_A` folded into ℂ⁺.

use serde::Serialize;

use crate::chi::{chi_embed, chi_unvector, general_eigenvalues, hermitian_eigen, operator_norm};
use crate::error::{Error, Result};
use crate::qmat::{QMatrix, QVector};
use crate::quat::{ComplexNum, Quaternion};

/// Relative tolerance for clustering eigenvalues of `χ_A`.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Standard eigenvalues with multiplicities, sorted by `(re, im)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StdEigenList {
    pub values: Vec<ComplexNum>,
    pub multiplicities: Vec<usize>,
}

impl StdEigenList {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Index and distance of the value nearest to `z`.
    pub fn nearest(&self, z: ComplexNum) -> Option<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// `Δ_q(A) = A² - 2re(q)A + |q|²I`.
pub fn delta_matrix(a: &QMatrix, q: Quaternion) -> QMatrix {
    delta_from_parts(a, q.re(), q.norm_sqr())
}

fn delta_from_parts(a: &QMatrix, re: f64, norm_sqr: f64) -> QMatrix {
    let n = a.dim();
    let mut d = a.matmul(a).expect("square");
    for r in 0..n {
        for c in 0..n {
            d[(r, c)] -= a[(r, c)] * (2.0 * re);
        }
        d[(r, r)] += Quaternion::real(norm_sqr);
    }
    d
}

/// Eigenvalues of `χ_A` folded into ℂ⁺ and grouped into classes.
///
/// Fails if the computed eigenvalues do not come in conjugate pairs, which
/// only happens when the eigensolver lost accuracy.
pub fn spherical_spectrum(a: &QMatrix) -> Result<StdEigenList> {
    let n = a.dim();
    if n == 0 {
        return Ok(StdEigenList {
            values: Vec::new(),
            multiplicities: Vec::new(),
        });
    }
    let ev = general_eigenvalues(&chi_embed(a))?;
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = CLUSTER_TOL * scale;
    let folded: Vec<ComplexNum> = ev.iter().map(|z| ComplexNum::new(z.re, z.im.abs())).collect();

    // single-linkage clustering in the folded half-plane
    let m = folded.len();
    let mut label: Vec<usize> = (0..m).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            if (folded[i] - folded[j]).norm() <= tol {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                label[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for i in 0..m {
        let r = root(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[r]].push(i);
    }

    let mut entries = Vec::with_capacity(clusters.len());
    for members in &clusters {
        let count = members.len();
        let mean = members.iter().map(|&i| folded[i]).sum::<ComplexNum>() / count as f64;
        if count % 2 != 0 {
            return Err(Error::ConjugatePairing {
                detail: format!("{count} eigenvalue(s) near {mean}, expected an even count"),
            });
        }
        if mean.im > tol {
            let upper = members.iter().filter(|&&i| ev[i].im > 0.0).count();
            if 2 * upper != count {
                return Err(Error::ConjugatePairing {
                    detail: format!(
                        "{upper} of {count} eigenvalue(s) near {mean} lie above the real axis"
                    ),
                });
            }
        }
        let value = if mean.im <= tol {
            ComplexNum::new(mean.re, 0.0)
        } else {
            mean
        };
        entries.push((value, count / 2));
    }
    entries.sort_by(|x, y| (x.0.re, x.0.im).partial_cmp(&(y.0.re, y.0.im)).unwrap());
    Ok(StdEigenList {
        values: entries.iter().map(|e| e.0).collect(),
        multiplicities: entries.iter().map(|e| e.1).collect(),
    })
}

/// Unit `X` with `AX = Xz` for a standard eigenvalue `z`, recovered from an
/// eigenvector `[X₁; -X̄₂]` of `χ_A`.
pub fn right_eigenvector(a: &QMatrix, z: ComplexNum) -> Result<QVector> {
    let spectrum = spherical_spectrum(a)?;
    right_eigenvector_in(a, &spectrum, z)
}

fn right_eigenvector_in(a: &QMatrix, spectrum: &StdEigenList, z: ComplexNum) -> Result<QVector> {
    let scale = z.norm().max(1.0);
    let (idx, distance) = spectrum.nearest(z).ok_or(Error::EmptyInput)?;
    if distance > CLUSTER_TOL * scale {
        return Err(Error::NotInSpectrum {
            re: z.re,
            im: z.im,
            distance,
        });
    }
    let z = spectrum.values[idx];
    let chi = chi_embed(a);
    let shifted = chi.shift(z);
    let start = hermitian_eigen(&shifted.adjoint().matmul(&shifted))?;
    let mut v = start.vector(0);
    let floor = 1e-14 * chi.frobenius_norm().max(1.0);
    for _ in 0..2 {
        let w = shifted.solve_regularized(&v, floor);
        let nw = crate::chi::cnorm(&w);
        if !(nw.is_finite() && nw > 0.0) {
            break;
        }
        v = w.iter().map(|x| x / nw).collect();
    }
    let x = chi_unvector(&v).normalized();
    let residual = eigen_residual(a, &x, z);
    let bound = 1e-7 * operator_norm(a)?;
    if residual > bound {
        return Err(Error::EigenvectorResidual { residual, bound });
    }
    Ok(x)
}

/// `‖AX - Xz‖`.
pub fn eigen_residual(a: &QMatrix, x: &QVector, z: ComplexNum) -> f64 {
    a.matvec_unchecked(x)
        .sub(&x.right_mul(Quaternion::from_complex(z)))
        .norm()
}

/// `‖Δ_q(A) X‖`.
pub fn delta_residual(a: &QMatrix, q: Quaternion, x: &QVector) -> f64 {
    delta_matrix(a, q).matvec_unchecked(x).norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCheck {
    pub value: ComplexNum,
    pub multiplicity: usize,
    /// `‖AX - Xz‖` for the recovered eigenvector.
    pub eigen_residual: f64,
    /// `‖Δ_z(A) X‖`.
    pub delta_residual: f64,
    pub bound: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub spectrum: StdEigenList,
    pub checks: Vec<EigenCheck>,
    pub pass: bool,
}

/// Recovers an eigenvector for every standard eigenvalue and tests
/// `‖Δ_z(A) X‖ ≤ 1e-6‖A‖²`.
pub fn verify_spectrum(a: &QMatrix) -> Result<SpectrumReport> {
    let spectrum = spherical_spectrum(a)?;
    let norm = operator_norm(a)?;
    let bound = 1e-6 * norm * norm;
    let mut checks = Vec::with_capacity(spectrum.len());
    for (&z, &mult) in spectrum.values.iter().zip(&spectrum.multiplicities) {
        let check = match right_eigenvector_in(a, &spectrum, z) {
            Ok(x) => {
                let dr = delta_residual(a, Quaternion::from_complex(z), &x);
                EigenCheck {
                    value: z,
                    multiplicity: mult,
                    eigen_residual: eigen_residual(a, &x, z),
                    delta_residual: dr,
                    bound,
                    pass: dr <= bound,
                    error: None,
                }
            }
            Err(e) => EigenCheck {
                value: z,
                multiplicity: mult,
                eigen_residual: f64::NAN,
                delta_residual: f64::NAN,
                bound,
                pass: false,
                error: Some(e.to_string()),
            },
        };
        checks.push(check);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(SpectrumReport {
        spectrum,
        checks,
        pass,
    })
}
