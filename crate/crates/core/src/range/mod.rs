//! The quaternionic numerical range `W(A) = {⟨X, AX⟩ : ‖X‖ = 1}`.
//!
//! `W(A)` is circular (closed under `q ↦ s⁻¹qs`), so it is determined by its
//! section `W⁺(A)`, the upper half of its intersection with ℂ. The section is
//! obtained from samples by folding each value to `re + i|im|`.

mod attain;
pub mod geometry;
mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chi::{chi_embed, complex_range_sweep, SweepResult};
use crate::error::{Error, Result};
use crate::qmat::{QMatrix, QVector};
use crate::quat::{ComplexNum, Quaternion};

pub use attain::{
    attain_projection_point, attain_real_point, attain_section_point, section_convexity_check, ConvexityReport,
    MidpointCheck, DEFAULT_STARTS,
};
pub use geometry::{hausdorff, hull2d, point_in_hull};
pub use support::{
    normal_hull_check, omega_support, prop_conv_check, NormalHullReport, PropConvReport,
    SupportProbe,
};

/// Default number of sampled unit vectors for hull estimates.
pub const DEFAULT_SAMPLES: usize = 100_000;

const CHUNK: usize = 4096;

/// Independent generator for chunk `chunk` of a seeded sample stream.
pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `⟨X, AX⟩` together with the unit vector producing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplePoint {
    pub value: Quaternion,
    pub witness: QVector,
}

/// `count` uniform draws from the unit sphere of `ℍⁿ` and their values.
pub fn sample_range(a: &QMatrix, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut out = Vec::with_capacity(count);
    for_each_sample(a, count, seed, |x, q| {
        out.push(SamplePoint {
            value: q,
            witness: x.clone(),
        })
    });
    out
}

/// Same stream as [`sample_range`] without keeping the witnesses.
pub fn sample_values(a: &QMatrix, count: usize, seed: u64) -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(count);
    for_each_sample(a, count, seed, |_, q| out.push(q));
    out
}

fn for_each_sample(a: &QMatrix, count: usize, seed: u64, mut f: impl FnMut(&QVector, Quaternion)) {
    let n = a.dim();
    let mut done = 0;
    let mut chunk = 0u64;
    while done < count {
        let mut rng = chunk_rng(seed, chunk);
        let take = CHUNK.min(count - done);
        for _ in 0..take {
            let x = QVector::random_unit(n, &mut rng);
            let q = a.quadratic_form_unchecked(&x);
            f(&x, q);
        }
        done += take;
        chunk += 1;
    }
}

/// Folded sample cloud in ℂ⁺ with its convex hull.
#[derive(Clone, Debug, Serialize)]
pub struct Section2D {
    pub points: Vec<ComplexNum>,
    pub hull: Vec<ComplexNum>,
}

impl Section2D {
    pub fn from_points(points: Vec<ComplexNum>) -> Result<Self> {
        let hull = hull2d(&points)?;
        Ok(Self { points, hull })
    }

    pub fn from_values(values: &[Quaternion]) -> Result<Self> {
        Self::from_points(values.iter().map(|q| q.class_rep()).collect())
    }
}

/// `W⁺(A)` as seen by the samples: `class_rep` of each value.
pub fn section_plus(samples: &[SamplePoint]) -> Result<Section2D> {
    Section2D::from_points(samples.iter().map(|s| s.value.class_rep()).collect())
}

/// `co(q) = q₀ + q₁ i` of each sample.
pub fn complex_projection_samples(samples: &[SamplePoint]) -> Vec<ComplexNum> {
    samples.iter().map(|s| s.value.co()).collect()
}

/// Sweep of `W_ℂ(χ_A)`.
pub fn chi_sweep(a: &QMatrix, angles: usize) -> Result<SweepResult> {
    complex_range_sweep(&chi_embed(a), angles)
}

/// `w(A) = w_ℂ(χ_A)`.
pub fn numerical_radius(a: &QMatrix, angles: usize) -> Result<f64> {
    if a.dim() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(chi_sweep(a, angles)?.radius)
}

/// Lower bound for `w(A)`: best sample, refined by projected finite-difference
/// ascent of `|⟨X, AX⟩|` on the unit sphere.
pub fn radius_lower_bound(
    a: &QMatrix,
    count: usize,
    seed: u64,
    ascent_steps: usize,
) -> Result<(f64, QVector)> {
    if a.dim() == 0 {
        return Err(Error::EmptyInput);
    }
    let mut best: Vec<(f64, QVector)> = Vec::new();
    const KEEP: usize = 4;
    for_each_sample(a, count.max(1), seed, |x, q| {
        let v = q.norm();
        if best.len() < KEEP || v > best[best.len() - 1].0 {
            best.push((v, x.clone()));
            best.sort_by(|p, q| q.0.total_cmp(&p.0));
            best.truncate(KEEP);
        }
    });
    let mut top = (f64::NEG_INFINITY, QVector::zeros(a.dim()));
    for (v, x) in best {
        let refined = ascend(a, x, v, ascent_steps);
        if refined.0 > top.0 {
            top = refined;
        }
    }
    Ok(top)
}

fn modulus_at(a: &QMatrix, y: &[f64]) -> f64 {
    let x = QVector::from_reals(y).normalized();
    a.quadratic_form_unchecked(&x).norm()
}

fn normalize_reals(y: &mut [f64]) {
    let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in y.iter_mut() {
        *v /= n;
    }
}

fn ascend(a: &QMatrix, x: QVector, start: f64, steps: usize) -> (f64, QVector) {
    const H: f64 = 1e-6;
    let mut y = x.to_reals();
    let mut value = start;
    let mut eta = 0.1;
    let dim = y.len();
    for _ in 0..steps {
        let mut g = vec![0.0; dim];
        let mut probe = y.clone();
        for k in 0..dim {
            probe[k] = y[k] + H;
            let up = modulus_at(a, &probe);
            probe[k] = y[k] - H;
            let down = modulus_at(a, &probe);
            probe[k] = y[k];
            g[k] = (up - down) / (2.0 * H);
        }
        let radial: f64 = g.iter().zip(&y).map(|(a, b)| a * b).sum();
        for (gk, yk) in g.iter_mut().zip(&y) {
            *gk -= radial * yk;
        }
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-14 {
            break;
        }
        let mut improved = false;
        while eta > 1e-14 {
            let mut cand: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + eta * b / gnorm).collect();
            normalize_reals(&mut cand);
            let v = modulus_at(a, &cand);
            if v > value {
                let gain = v - value;
                y = cand;
                value = v;
                eta *= 2.0;
                improved = gain >= 1e-12;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let x = QVector::from_reals(&y).normalized();
    (a.quadratic_form_unchecked(&x).norm(), x)
}

/// `Σ_ℓ [⟨Xe_ℓ+Y, A(Xe_ℓ+Y)⟩ - ⟨Xe_ℓ-Y, A(Xe_ℓ-Y)⟩] e_ℓ`.
///
/// Expands to `8 re⟨X,AY⟩ - 4⟨Y,AX⟩`, which equals `4⟨X,AY⟩` when `A` is
/// self-adjoint and differs from it by `4⟨Y,(A*-A)X⟩` in general.
pub fn polarization_sum(a: &QMatrix, x: &QVector, y: &QVector) -> Quaternion {
    let mut total = Quaternion::ZERO;
    for e in Quaternion::BASIS {
        let xe = x.right_mul(e);
        let plus = xe.add(y);
        let minus = xe.sub(y);
        let d = a.quadratic_form_unchecked(&plus) - a.quadratic_form_unchecked(&minus);
        total += d * e;
    }
    total
}

/// Points of `section` in the strip `|re - alpha| < gap_tol/4`, sorted by
/// height, form a single cluster (consecutive gaps below `gap_tol`).
pub fn vertical_line_connectedness(section: &Section2D, alpha: f64, gap_tol: f64) -> bool {
    let width = gap_tol / 4.0;
    let mut heights: Vec<f64> = section
        .points
        .iter()
        .filter(|z| (z.re - alpha).abs() < width)
        .map(|z| z.im)
        .collect();
    heights.sort_by(f64::total_cmp);
    heights.windows(2).all(|w| w[1] - w[0] < gap_tol)
}

/// Results of the sampled set identities for `W(αI + βA)`, `W(A + B)`,
/// `W(U*AU)` and `W(A*)`.
#[derive(Clone, Debug, Serialize)]
pub struct SetOpsReport {
    /// `max |⟨X,(αI+βA)X⟩ - α - β⟨X,AX⟩|`.
    pub affine_deviation: f64,
    /// `max |⟨X,(A+B)X⟩ - ⟨X,AX⟩ - ⟨X,BX⟩|`.
    pub sum_deviation: f64,
    /// `max |⟨X,U*AUX⟩ - ⟨UX,A(UX)⟩|`.
    pub unitary_witness_deviation: f64,
    /// `max |class_rep⟨X,A*X⟩ - class_rep⟨X,AX⟩|`.
    pub adjoint_witness_deviation: f64,
    /// Hull Hausdorff distance between the sections of `U*AU` and `A`.
    pub unitary_hausdorff: f64,
    /// Hull Hausdorff distance between the sections of `A*` and `A`.
    pub adjoint_hausdorff: f64,
    pub exact_tol: f64,
    pub hausdorff_tol: f64,
    /// Witness identities (1)–(4) hold to `exact_tol`.
    pub exact_pass: bool,
    /// Both sampled hull distances are below `hausdorff_tol`.
    pub sampled_pass: bool,
}

impl SetOpsReport {
    pub fn pass(&self) -> bool {
        self.exact_pass && self.sampled_pass
    }
}

pub struct SetOpsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub samples: usize,
    pub hausdorff_tol: f64,
}

impl Default for SetOpsConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 3.0,
            samples: DEFAULT_SAMPLES,
            hausdorff_tol: 2e-2,
        }
    }
}

pub fn set_ops_check(a: &QMatrix, b: &QMatrix, seed: u64, config: &SetOpsConfig) -> Result<SetOpsReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let n = a.dim();
    let scale = 1.0 + a.frobenius_norm() + b.frobenius_norm();
    let exact_tol = 1e-12 * scale * (1.0 + config.alpha.abs() + config.beta.abs());
    let affine = a.affine(config.alpha, config.beta);
    let sum = a.add(b)?;
    let mut rng = chunk_rng(seed, u64::MAX);
    let u = QMatrix::random_unitary(n, &mut rng);
    let uau = u.adjoint().matmul(a)?.matmul(&u)?;
    let adj = a.adjoint();
    let mut affine_deviation: f64 = 0.0;
    let mut sum_deviation: f64 = 0.0;
    let mut unitary_witness_deviation: f64 = 0.0;
    let mut adjoint_witness_deviation: f64 = 0.0;
    let checks = config.samples.min(10_000);
    for_each_sample(a, checks, seed, |x, qa| {
        let lhs = affine.quadratic_form_unchecked(x);
        affine_deviation = affine_deviation.max(lhs.abs_diff(Quaternion::real(config.alpha) + qa * config.beta));
        let qb = b.quadratic_form_unchecked(x);
        sum_deviation = sum_deviation.max(sum.quadratic_form_unchecked(x).abs_diff(qa + qb));
        let ux = u.matvec_unchecked(x);
        unitary_witness_deviation = unitary_witness_deviation
            .max(uau.quadratic_form_unchecked(x).abs_diff(a.quadratic_form_unchecked(&ux)));
        adjoint_witness_deviation = adjoint_witness_deviation
            .max((adj.quadratic_form_unchecked(x).class_rep() - qa.class_rep()).norm());
    });
    let base = Section2D::from_values(&sample_values(a, config.samples, seed))?;
    let rotated = Section2D::from_values(&sample_values(&uau, config.samples, seed.wrapping_add(1)))?;
    let adjoint = Section2D::from_values(&sample_values(&a.adjoint(), config.samples, seed.wrapping_add(2)))?;
    let unitary_hausdorff = geometry::hull_hausdorff(&base.hull, &rotated.hull)?;
    let adjoint_hausdorff = geometry::hull_hausdorff(&base.hull, &adjoint.hull)?;
    let exact_pass = affine_deviation <= exact_tol
        && sum_deviation <= exact_tol
        && unitary_witness_deviation <= exact_tol
        && adjoint_witness_deviation <= exact_tol;
    let sampled_pass = unitary_hausdorff < config.hausdorff_tol && adjoint_hausdorff < config.hausdorff_tol;
    Ok(SetOpsReport {
        affine_deviation,
        sum_deviation,
        unitary_witness_deviation,
        adjoint_witness_deviation,
        unitary_hausdorff,
        adjoint_hausdorff,
        exact_tol,
        hausdorff_tol: config.hausdorff_tol,
        exact_pass,
        sampled_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::operator_norm;
    use crate::chi::DEFAULT_ANGLES;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> ComplexNum {
        ComplexNum::new(re, im)
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

    fn square_norm_matrix() -> QMatrix {
        let z = Quaternion::ZERO;
        QMatrix::from_rows(vec![
            vec![z, z, z],
            vec![Quaternion::J, z, z],
            vec![z, Quaternion::K, z],
        ])
        .unwrap()
    }

    #[test]
    fn identity_samples() {
        let s = sample_range(&QMatrix::identity(3), 200, 1);
        assert!(s.iter().all(|p| p.value.abs_diff(Quaternion::ONE) < 1e-12));
        assert!(s.iter().all(|p| (p.witness.norm() - 1.0).abs() < 1e-12));
        let sec = section_plus(&s).unwrap();
        assert_eq!(sec.hull.len(), 1);
        assert!(complex_projection_samples(&s).iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn samples_are_deterministic_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = QMatrix::random(3, &mut rng);
        let s1 = sample_range(&a, 5000, 9);
        let s2 = sample_range(&a, 5000, 9);
        assert_eq!(s1, s2);
        let v = sample_values(&a, 5000, 9);
        for (p, q) in s1.iter().zip(&v) {
            assert_eq!(p.value, *q);
            assert!(a.quadratic_form(&p.witness).unwrap().abs_diff(p.value) < 1e-10);
        }
    }

    #[test]
    fn diag_k11_avoids_origin() {
        let a = QMatrix::diag(&[Quaternion::K, Quaternion::ONE, Quaternion::ONE]);
        let min = sample_values(&a, 20_000, 4)
            .iter()
            .map(|q| q.norm())
            .fold(f64::INFINITY, f64::min);
        // |q|² = t² + (1-t)² with t = |x|², minimal at t = ½
        assert!(min >= 0.5f64.sqrt() - 1e-12);
        assert!(min < 0.5f64.sqrt() + 1e-2);
    }

    #[test]
    fn rotation_generator_values_are_unimodular() {
        let a = QMatrix::diag(&[Quaternion::J]);
        for q in sample_values(&a, 2000, 5) {
            assert!((q.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn section_of_diag_kk_is_vertical_segment() {
        let a = QMatrix::diag(&[Quaternion::K, Quaternion::K]);
        let sec = Section2D::from_values(&sample_values(&a, 5000, 6)).unwrap();
        for z in &sec.points {
            assert!(z.re.abs() < 1e-12 && z.im <= 1.0 + 1e-12 && z.im >= 0.0);
        }
    }

    #[test]
    fn nilpotent_section_in_half_disk() {
        let mut a = QMatrix::zeros(2);
        a[(0, 1)] = Quaternion::ONE;
        let sec = Section2D::from_values(&sample_values(&a, 20_000, 7)).unwrap();
        assert!(sec.points.iter().all(|z| z.norm() <= 0.5 + 1e-12 && z.im >= 0.0));
        assert!(sec.points.iter().any(|z| z.norm() > 0.45));
    }

    #[test]
    fn radius_examples() {
        assert!((numerical_radius(&QMatrix::identity(2), DEFAULT_ANGLES).unwrap() - 1.0).abs() < 1e-12);
        let w = numerical_radius(&radius_one_matrix(), DEFAULT_ANGLES).unwrap();
        assert!((w - 1.0).abs() < 1e-9, "{w}");
        let w = numerical_radius(&square_norm_matrix(), DEFAULT_ANGLES).unwrap();
        assert!((w - 0.5f64.sqrt()).abs() < 1e-9, "{w}");
    }

    #[test]
    fn lower_bound_examples() {
        let (v, x) = radius_lower_bound(&QMatrix::identity(3), 100, 1, 50).unwrap();
        assert!((v - 1.0).abs() < 1e-12 && (x.norm() - 1.0).abs() < 1e-12);
        let kk = QMatrix::diag(&[Quaternion::K, Quaternion::K]);
        let (v, _) = radius_lower_bound(&kk, 100, 1, 50).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(kk.quadratic_form(&QVector::basis(2, 0)).unwrap().norm(), 1.0);
        let a = radius_one_matrix();
        let (v, _) = radius_lower_bound(&a, 2000, 2, 500).unwrap();
        assert!((1.0 - 1e-4..=1.0 + 1e-8).contains(&v), "{v}");
        assert_eq!(a.quadratic_form(&QVector::basis(3, 2)).unwrap().norm(), 1.0);
    }

    #[test]
    fn polarization_for_selfadjoint_and_general() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let b = QMatrix::random(3, &mut rng);
            let x = QVector::random_unit(3, &mut rng);
            let y = QVector::random_unit(3, &mut rng);
            let h = b.add(&b.adjoint()).unwrap();
            let four = h.matvec(&y).map(|hy| x.dot(&hy).unwrap() * 4.0).unwrap();
            assert!(polarization_sum(&h, &x, &y).abs_diff(four) < 1e-9);
            // general case: the sum is 4⟨X,AY⟩ + 4⟨Y,(A*-A)X⟩
            let skew = b.adjoint().sub(&b).unwrap();
            let expected = x.dot(&b.matvec(&y).unwrap()).unwrap() * 4.0
                + y.dot(&skew.matvec(&x).unwrap()).unwrap() * 4.0;
            assert!(polarization_sum(&b, &x, &y).abs_diff(expected) < 1e-9);
        }
    }

    #[test]
    fn connectedness_checker() {
        let sec = Section2D::from_points((0..100).map(|k| c(0.5, k as f64 / 100.0)).collect()).unwrap();
        assert!(vertical_line_connectedness(&sec, 0.5, 0.05));
        assert!(vertical_line_connectedness(&sec, 3.0, 0.05));
        let split = Section2D::from_points(vec![c(0.0, 0.0), c(0.0, 0.01), c(0.0, 0.5), c(0.0, 0.51)]).unwrap();
        assert!(!vertical_line_connectedness(&split, 0.0, 0.05));
    }

    #[test]
    fn set_ops_on_rotation_generator() {
        let a = QMatrix::diag(&[Quaternion::J]);
        let cfg = SetOpsConfig {
            samples: 2000,
            ..Default::default()
        };
        let r = set_ops_check(&a, &QMatrix::identity(1), 10, &cfg).unwrap();
        assert!(r.pass(), "{r:?}");
        let sec = Section2D::from_values(&sample_values(&a.adjoint(), 100, 1)).unwrap();
        assert_eq!(sec.hull.len(), 1);
        assert!((sec.hull[0] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn set_ops_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = QMatrix::random(3, &mut rng);
        let b = QMatrix::random(3, &mut rng);
        let r = set_ops_check(&a, &b, 12, &SetOpsConfig::default()).unwrap();
        assert!(r.exact_pass, "{r:?}");
        // sampled hulls of a 3×3 matrix underfill at 10⁵ samples; only sanity-bound them
        assert!(r.unitary_hausdorff < 0.5 && r.adjoint_hausdorff < 0.5, "{r:?}");
        let kk = QMatrix::diag(&[Quaternion::K, Quaternion::K]);
        let r = set_ops_check(&kk, &QMatrix::identity(2), 12, &SetOpsConfig::default()).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn radius_inequalities(seed in any::<u64>(), n in 1usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = QMatrix::random(n, &mut rng);
            let w = numerical_radius(&a, 360).unwrap();
            let norm = operator_norm(&a).unwrap();
            let norm2 = operator_norm(&a.matmul(&a).unwrap()).unwrap();
            prop_assert!(w <= norm + 1e-9 * norm);
            prop_assert!(norm <= 2.0 * w + 1e-9 * norm);
            prop_assert!(w <= 0.5 * (norm + norm2.sqrt()) + 1e-9 * norm);
            let (lb, _) = radius_lower_bound(&a, 500, seed, 300).unwrap();
            prop_assert!(lb <= w + 1e-8);
        }

        #[test]
        fn projections_lie_in_sweep(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = QMatrix::random(n, &mut rng);
            let sweep = chi_sweep(&a, 360).unwrap();
            for q in sample_values(&a, 500, seed) {
                prop_assert!(sweep.contains(q.co(), 1e-7));
                let z = q.class_rep();
                prop_assert!(sweep.contains(z, 1e-7) && sweep.contains(z.conj(), 1e-7));
            }
        }
    }
}
