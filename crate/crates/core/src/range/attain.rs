//! Finding unit vectors whose quadratic form hits a prescribed point.
//!
//! The map `Y ↦ ⟨X, AX⟩` with `X = Y/‖Y‖` is smooth on `ℝ^{4n}`. A target is
//! matched by Levenberg–Marquardt on a small residual (2 or 4 components)
//! with the analytic Jacobian, from several random starting vectors.

use rand::Rng;
use serde::Serialize;

use super::chunk_rng;
use crate::error::Result;
use crate::qmat::{orthonormalize, QMatrix, QVector};
use crate::quat::{ComplexNum, Quaternion};

pub const DEFAULT_STARTS: usize = 32;

/// Residual below which a witness counts as found.
pub const ATTAIN_TOL: f64 = 1e-6;

/// Targets with smaller imaginary part are matched as real quaternions.
const REAL_TARGET: f64 = 1e-9;

const MAX_ITER: usize = 400;
const SCREEN_FACTOR: usize = 8;

#[derive(Clone, Copy)]
enum Goal {
    /// `re q = a`, `|im q| = b`.
    Section(f64, f64),
    /// `q = a`.
    Real(f64),
    /// `q₀ = a`, `q₁ = b`.
    Projection(f64, f64),
    /// `im q = 0`.
    Imaginary,
}

impl Goal {
    fn for_section(target: ComplexNum) -> Self {
        if target.im < REAL_TARGET {
            Goal::Real(target.re)
        } else {
            Goal::Section(target.re, target.im)
        }
    }

    fn residual(self, q: Quaternion) -> Vec<f64> {
        match self {
            Goal::Section(a, b) => vec![q.q0 - a, q.im_norm() - b],
            Goal::Real(a) => vec![q.q0 - a, q.q1, q.q2, q.q3],
            Goal::Projection(a, b) => vec![q.q0 - a, q.q1 - b],
            Goal::Imaginary => vec![q.q1, q.q2, q.q3],
        }
    }

    /// Residual row(s) for a directional derivative `dq` of `q`.
    fn derivative(self, q: Quaternion, dq: Quaternion) -> Vec<f64> {
        match self {
            Goal::Section(..) => {
                let v = q.im_norm();
                let dv = if v > 0.0 {
                    (q.q1 * dq.q1 + q.q2 * dq.q2 + q.q3 * dq.q3) / v
                } else {
                    0.0
                };
                vec![dq.q0, dv]
            }
            Goal::Real(_) => vec![dq.q0, dq.q1, dq.q2, dq.q3],
            Goal::Projection(..) => vec![dq.q0, dq.q1],
            Goal::Imaginary => vec![dq.q1, dq.q2, dq.q3],
        }
    }
}

struct Problem<'a> {
    a: &'a QMatrix,
    adj: QMatrix,
    goal: Goal,
}

impl<'a> Problem<'a> {
    fn new(a: &'a QMatrix, goal: Goal) -> Self {
        Self {
            a,
            adj: a.adjoint(),
            goal,
        }
    }

    fn value(&self, y: &[f64]) -> (f64, Quaternion) {
        let x = QVector::from_reals(y);
        let q = self.a.quadratic_form_unchecked(&x);
        (norm(&self.goal.residual(q)), q)
    }

    /// Residual and Jacobian (rows = residual components) at a unit `y`.
    fn linearize(&self, y: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let x = QVector::from_reals(y);
        let ax = self.a.matvec_unchecked(&x);
        let asx = self.adj.matvec_unchecked(&x);
        let q = x.dot_unchecked(&ax);
        let r = self.goal.residual(q);
        let mut jac = vec![vec![0.0; y.len()]; r.len()];
        for row in 0..x.len() {
            for (l, e) in Quaternion::BASIS.iter().enumerate() {
                let dq = e.conj() * ax[row] + asx[row].conj() * *e - q * (2.0 * y[4 * row + l]);
                for (k, d) in self.goal.derivative(q, dq).into_iter().enumerate() {
                    jac[k][4 * row + l] = d;
                }
            }
        }
        (r, jac)
    }

    /// Levenberg–Marquardt in minimum-norm form, `δ = -Jᵀ(JJᵀ + μI)⁻¹ r`,
    /// renormalizing after every step.
    fn solve(&self, mut y: Vec<f64>) -> (f64, Vec<f64>) {
        normalize(&mut y);
        let (mut f, _) = self.value(&y);
        let mut mu = 1e-6;
        for _ in 0..MAX_ITER {
            if f < 1e-13 {
                break;
            }
            let (r, jac) = self.linearize(&y);
            let k = r.len();
            let mut gram = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    gram[i][j] = dot(&jac[i], &jac[j]);
                }
            }
            let scale = (0..k).map(|i| gram[i][i]).fold(0.0, f64::max).max(1e-300);
            let mut accepted = false;
            while mu < 1e8 {
                let mut m = gram.clone();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] += mu * scale;
                }
                let Some(w) = solve_small(m, r.clone()) else {
                    mu *= 4.0;
                    continue;
                };
                let mut cand = y.clone();
                for (i, c) in cand.iter_mut().enumerate() {
                    *c -= (0..k).map(|row| jac[row][i] * w[row]).sum::<f64>();
                }
                normalize(&mut cand);
                let (fc, _) = self.value(&cand);
                if fc < f {
                    y = cand;
                    f = fc;
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                mu *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        (f, y)
    }

    /// Multistart from the best `starts` of `SCREEN_FACTOR · starts` random vectors.
    fn multistart(&self, starts: usize, seed: u64, stop_below: f64) -> (f64, Vec<f64>) {
        let dim = 4 * self.a.dim();
        let mut rng = chunk_rng(seed, 0);
        let mut pool: Vec<(f64, Vec<f64>)> = (0..starts.max(1) * SCREEN_FACTOR)
            .map(|_| {
                let y = QVector::random_unit(self.a.dim(), &mut rng).to_reals();
                (self.value(&y).0, y)
            })
            .collect();
        pool.sort_by(|p, q| p.0.total_cmp(&q.0));
        pool.truncate(starts.max(1));
        let mut best = (f64::INFINITY, vec![0.0; dim]);
        for (_, y) in pool {
            let (f, y) = self.solve(y);
            if f < best.0 {
                best = (f, y);
            }
            if best.0 < stop_below {
                break;
            }
        }
        best
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(y: &mut [f64]) {
    let n = norm(y);
    if n > 0.0 {
        for v in y.iter_mut() {
            *v /= n;
        }
    }
}

/// Gaussian elimination with partial pivoting for a tiny dense system.
fn solve_small(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            for c in col..k {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s = b[r] - (r + 1..k).map(|c| m[r][c] * x[c]).sum::<f64>();
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// A unit `X` with `|class_rep⟨X, AX⟩ - target| < 1e-6`, or `None` once all
/// `starts` have been spent.
pub fn attain_section_point(a: &QMatrix, target: ComplexNum, starts: usize, seed: u64) -> Option<QVector> {
    if a.dim() == 0 || target.im < -REAL_TARGET {
        return None;
    }
    let problem = Problem::new(a, Goal::for_section(target));
    let (_, y) = problem.multistart(starts, seed, 1e-12);
    let x = QVector::from_reals(&y).normalized();
    let residual = (a.quadratic_form_unchecked(&x).class_rep() - target).norm();
    (residual < ATTAIN_TOL).then_some(x)
}

/// Some real value `⟨X, AX⟩` with its witness, or `None` if no start reaches
/// `|im⟨X, AX⟩| < 1e-6`.
pub fn attain_real_point(a: &QMatrix, starts: usize, seed: u64) -> Option<(f64, QVector)> {
    if a.dim() == 0 {
        return None;
    }
    let problem = Problem::new(a, Goal::Imaginary);
    let (_, y) = problem.multistart(starts, seed, 1e-12);
    let x = QVector::from_reals(&y).normalized();
    let q = a.quadratic_form_unchecked(&x);
    (q.im_norm() < ATTAIN_TOL).then_some((q.q0, x))
}

/// Best unit `X` for `|co⟨X, AX⟩ - target|` and the residual it reaches.
pub fn attain_projection_point(a: &QMatrix, target: ComplexNum, starts: usize, seed: u64) -> (QVector, f64) {
    let problem = Problem::new(a, Goal::Projection(target.re, target.im));
    let (_, y) = problem.multistart(starts, seed, 1e-12);
    let x = QVector::from_reals(&y).normalized();
    let residual = (a.quadratic_form_unchecked(&x).co() - target).norm();
    (x, residual)
}

#[derive(Clone, Debug, Serialize)]
pub struct MidpointCheck {
    pub z1: ComplexNum,
    pub z2: ComplexNum,
    pub midpoint: ComplexNum,
    pub residual: f64,
    pub attained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub pairs: usize,
    pub attained: usize,
    pub max_residual: f64,
    /// Pairs that needed the enlarged start budget.
    pub retried: usize,
    pub checks: Vec<MidpointCheck>,
}

impl ConvexityReport {
    pub fn pass(&self) -> bool {
        self.attained == self.pairs
    }
}

/// For random `X, Y` the midpoint of the section points of `⟨X,AX⟩` and
/// `⟨Y,AY⟩` is searched for inside the compression of `A` to `span{X, Y}`.
pub fn section_convexity_check(a: &QMatrix, pairs: usize, seed: u64) -> Result<ConvexityReport> {
    let n = a.dim();
    let mut rng = chunk_rng(seed, 1);
    let mut checks = Vec::with_capacity(pairs);
    let mut retried = 0;
    for pair in 0..pairs {
        let x = QVector::random_unit(n, &mut rng);
        let y = QVector::random_unit(n, &mut rng);
        let z1 = a.quadratic_form_unchecked(&x).class_rep();
        let z2 = a.quadratic_form_unchecked(&y).class_rep();
        let midpoint = (z1 + z2) * 0.5;
        let sub_seed = rng.random::<u64>() ^ pair as u64;
        let mut witness = midpoint_in_span(a, &x, &y, midpoint, DEFAULT_STARTS, sub_seed);
        if witness.is_none() {
            retried += 1;
            witness = midpoint_in_span(a, &x, &y, midpoint, 4 * DEFAULT_STARTS, sub_seed.wrapping_add(1));
        }
        let residual = match &witness {
            Some(w) => (a.quadratic_form_unchecked(w).class_rep() - midpoint).norm(),
            None => f64::INFINITY,
        };
        checks.push(MidpointCheck {
            z1,
            z2,
            midpoint,
            residual,
            attained: residual < ATTAIN_TOL,
        });
    }
    let attained = checks.iter().filter(|c| c.attained).count();
    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(ConvexityReport {
        pairs,
        attained,
        max_residual,
        retried,
        checks,
    })
}

fn midpoint_in_span(
    a: &QMatrix,
    x: &QVector,
    y: &QVector,
    target: ComplexNum,
    starts: usize,
    seed: u64,
) -> Option<QVector> {
    let basis = orthonormalize(&[x.clone(), y.clone()]);
    if basis.len() < 2 {
        return Some(x.clone());
    }
    let mut c = QMatrix::zeros(2);
    for i in 0..2 {
        let aei = a.matvec_unchecked(&basis[i]);
        for j in 0..2 {
            // ⟨E_j, A E_i⟩ sits at (j, i)
            c[(j, i)] = basis[j].dot_unchecked(&aei);
        }
    }
    let w = attain_section_point(&c, target, starts, seed)?;
    Some(basis[0].right_mul(w[0]).add(&basis[1].right_mul(w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> ComplexNum {
        ComplexNum::new(re, im)
    }

    /// Directional derivative of `⟨X,AX⟩` at unit `y` along a tangent direction.
    fn fd_derivative(a: &QMatrix, y: &[f64], k: usize) -> Quaternion {
        let h = 1e-6;
        let eval = |s: f64| {
            let mut z = y.to_vec();
            z[k] += s;
            let n = norm(&z);
            a.quadratic_form_unchecked(&QVector::from_reals(&z)) * (1.0 / (n * n))
        };
        (eval(h) - eval(-h)) * (0.5 / h)
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let a = QMatrix::random(3, &mut rng);
        let y = QVector::random_unit(3, &mut rng).to_reals();
        let p = Problem::new(&a, Goal::Real(0.0));
        let (_, jac) = p.linearize(&y);
        for k in 0..y.len() {
            let fd = fd_derivative(&a, &y, k);
            for (row, want) in fd.to_array().iter().enumerate() {
                assert!((jac[row][k] - want).abs() < 1e-7, "row {row} col {k}");
            }
        }
    }

    #[test]
    fn diag_kk_attains_half_i() {
        let a = QMatrix::diag(&[Quaternion::K, Quaternion::K]);
        let x = attain_section_point(&a, c(0.0, 0.5), DEFAULT_STARTS, 1).unwrap();
        let q = a.quadratic_form(&x).unwrap();
        assert!((q.class_rep() - c(0.0, 0.5)).norm() < 1e-6);
    }

    #[test]
    fn real_points() {
        // diag(i, 1+2i): the only real value is (0·2 + 1·1)/3
        let d = QMatrix::diag(&[Quaternion::I, Quaternion::new(1.0, 2.0, 0.0, 0.0)]);
        let (r, x) = attain_real_point(&d, DEFAULT_STARTS, 3).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-6, "{r}");
        assert!(d.quadratic_form(&x).unwrap().im_norm() < 1e-6);
        assert!(attain_real_point(&QMatrix::diag(&[Quaternion::J]), DEFAULT_STARTS, 3).is_none());
    }

    #[test]
    fn identity_attains_one() {
        assert!(attain_section_point(&QMatrix::identity(2), c(1.0, 0.0), 4, 1).is_some());
    }

    #[test]
    fn origin_not_attained() {
        let a = QMatrix::diag(&[Quaternion::K, Quaternion::ONE, Quaternion::ONE]);
        assert!(attain_section_point(&a, c(0.0, 0.0), DEFAULT_STARTS, 2).is_none());
        let j = QMatrix::diag(&[Quaternion::J]);
        assert!(attain_section_point(&j, c(0.0, 0.0), DEFAULT_STARTS, 3).is_none());
    }

    #[test]
    fn projection_of_rotation_generator_covers_segment() {
        // co⟨X, jX⟩ lies on the imaginary axis and reaches ±i
        let a = QMatrix::diag(&[Quaternion::J]);
        for t in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            let (_, r) = attain_projection_point(&a, c(0.0, t), 8, 4);
            assert!(r < 1e-6, "{t}: {r}");
        }
        let (_, r) = attain_projection_point(&a, c(0.5, 0.0), 8, 4);
        assert!((r - 0.5).abs() < 1e-6);
    }

    #[test]
    fn sections_are_convex_for_nonconvex_range() {
        let a = QMatrix::diag(&[Quaternion::K, Quaternion::ONE, Quaternion::ONE]);
        let r = section_convexity_check(&a, 20, 5).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = section_convexity_check(&QMatrix::identity(3), 5, 5).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn sections_are_convex_for_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let a = QMatrix::random(4, &mut rng);
        let r = section_convexity_check(&a, 50, 6).unwrap();
        assert!(r.pass(), "{} of {} (max residual {:e})", r.attained, r.pairs, r.max_residual);
    }
}
