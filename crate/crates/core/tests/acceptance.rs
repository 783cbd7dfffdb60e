//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! (visible with `--nocapture`) and then asserts it.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use quatrange::chi::{operator_norm, DEFAULT_ANGLES};
use quatrange::range::geometry::hull_margin;
use quatrange::range::{
    attain_projection_point, attain_section_point, chi_sweep, hull2d, numerical_radius,
    prop_conv_check, radius_lower_bound, sample_range, sample_values, section_convexity_check,
    DEFAULT_SAMPLES, DEFAULT_STARTS,
};
use quatrange::spectrum::{delta_residual, right_eigenvector, spherical_spectrum};
use quatrange::twobytwo::case_equality_check;
use quatrange::{ComplexNum, QMatrix, QVector, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

fn c(re: f64, im: f64) -> ComplexNum {
    ComplexNum::new(re, im)
}

fn q(z: ComplexNum) -> Quaternion {
    Quaternion::from_complex(z)
}

fn verdict(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n}: {detail}");
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

#[test]
fn criterion_1_double_eigenvalue_spectrum() {
    let t = Instant::now();
    let a = QMatrix::diag(&[Quaternion::J, -Quaternion::J]);
    let s = spherical_spectrum(&a).unwrap();
    let x = right_eigenvector(&a, c(0.0, 1.0)).unwrap();
    let residual = delta_residual(&a, Quaternion::I, &x);
    let elapsed = t.elapsed();
    let pass = s.values.len() == 1
        && (s.values[0] - c(0.0, 1.0)).norm() < 1e-9
        && s.multiplicities == [2]
        && residual < 1e-8
        && within(elapsed, 1);
    verdict(
        1,
        pass,
        format!("spectrum {:?} x{:?}, delta residual {residual:.1e}, {elapsed:?}", s.values, s.multiplicities),
    );
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
fn criterion_2_radius_below_norm() {
    let t = Instant::now();
    let a = radius_one_matrix();
    let w = numerical_radius(&a, DEFAULT_ANGLES).unwrap();
    let norm = operator_norm(&a).unwrap();
    let (lb, _) = radius_lower_bound(&a, DEFAULT_SAMPLES, SEED, 500).unwrap();
    // the maximizers form a continuum; e₃ is checked directly
    let e3 = a.quadratic_form(&QVector::basis(3, 2)).unwrap().norm();
    let square = operator_norm(&a.matmul(&a).unwrap()).unwrap();
    let elapsed = t.elapsed();
    let pass = (w - 1.0).abs() <= 1e-6
        && (norm - 2.0).abs() <= 1e-9
        && lb >= 1.0 - 1e-4
        && (e3 - 1.0).abs() < 1e-12
        && square > 0.0
        && within(elapsed, 5);
    verdict(
        2,
        pass,
        format!("w {w:.12}, norm {norm:.12}, lower bound {lb:.9}, |<e3,Ae3>| {e3}, |A²| {square:.3}, {elapsed:?}"),
    );
}

#[test]
fn criterion_3_square_norm_attained() {
    let t = Instant::now();
    let a = square_norm_matrix();
    let w = numerical_radius(&a, DEFAULT_ANGLES).unwrap();
    let norm = operator_norm(&a).unwrap();
    let square = operator_norm(&a.matmul(&a).unwrap()).unwrap();
    let elapsed = t.elapsed();
    let pass = (w - FRAC_1_SQRT_2).abs() <= 1e-5
        && (square - 1.0).abs() <= 1e-9
        && (norm * norm - 1.0).abs() <= 1e-9
        && within(elapsed, 5);
    verdict(3, pass, format!("w {w:.12}, |A| {norm:.12}, |A²| {square:.12}, {elapsed:?}"));
}

#[test]
fn criterion_4_need_not_attain() {
    let a = QMatrix::diag(&[Quaternion::J]);
    let sweep = chi_sweep(&a, DEFAULT_ANGLES).unwrap();
    let hull = hull2d(&sweep.boundary).unwrap();
    // the range of χ is the segment [-i, i]; margin is taken in its relative interior
    let margin = hull_margin(&hull, c(0.0, 0.0), 1e-9);
    let hit = attain_section_point(&a, c(0.0, 0.0), DEFAULT_STARTS, SEED);
    let worst = sample_values(&a, DEFAULT_SAMPLES, SEED)
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let pass = margin > 0.9 && hit.is_none() && worst <= 1e-10;
    verdict(
        4,
        pass,
        format!("margin {margin:.6}, origin attained {}, max ||q|-1| {worst:.1e}", hit.is_some()),
    );
}

#[test]
fn criterion_5_two_by_two_closed_forms() {
    let t = Instant::now();
    let z = Quaternion::ZERO;
    let case1 = QMatrix::diag(&[Quaternion::K, Quaternion::K]);
    let case2 = QMatrix::diag(&[q(c(0.0, 1.0)), q(c(1.0, 2.0))]);
    let case3 = QMatrix::from_rows(vec![vec![z, Quaternion::J * 2.0], vec![z, z]]).unwrap();
    let r1 = case_equality_check(&case1, DEFAULT_SAMPLES, SEED).unwrap();
    let r2 = case_equality_check(&case2, DEFAULT_SAMPLES, SEED).unwrap();
    let r3 = case_equality_check(&case3, DEFAULT_SAMPLES, SEED).unwrap();
    let v = c(1.0 / 3.0, 0.0);
    let v_residual = attain_section_point(&case2, v, DEFAULT_STARTS, SEED)
        .map(|x| (case2.quadratic_form(&x).unwrap().class_rep() - v).norm());
    let elapsed = t.elapsed();
    let mut lines = Vec::new();
    for (name, r) in [("case 1", &r1), ("case 2", &r2), ("case 3", &r3)] {
        lines.push(format!(
            "{name}: kind {}, outside {:.1e}, fill {:.4} ({})",
            serde_json::to_value(&r.region).unwrap()["kind"],
            r.max_outside,
            r.fill.unwrap_or(f64::NAN),
            if r.pass() { "ok" } else { "over budget" }
        ));
    }
    lines.push(format!("v = 1/3 residual {v_residual:?}, {elapsed:?}"));
    let pass = r1.case == 1
        && r2.case == 2
        && r3.case == 3
        && r1.pass()
        && r2.pass()
        && r3.pass()
        && v_residual.is_some_and(|r| r < 1e-6)
        && within(elapsed, 30);
    verdict(5, pass, lines.join("; "));
}

fn random_normal<R: Rng>(n: usize, rng: &mut R) -> QMatrix {
    let d: Vec<Quaternion> = (0..n)
        .map(|_| q(c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))))
        .collect();
    let u = QMatrix::random_unitary(n, rng);
    u.adjoint().matmul(&QMatrix::diag(&d)).unwrap().matmul(&u).unwrap()
}

#[test]
fn criterion_6_inequality_battery() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = Vec::new();
    let w = |m: &QMatrix| numerical_radius(m, DEFAULT_ANGLES).unwrap();
    let norm = |m: &QMatrix| operator_norm(m).unwrap();
    for k in 0..200 {
        let n = 2 + k % 5;
        let a = QMatrix::random(n, &mut rng);
        let b = QMatrix::random(n, &mut rng);
        let (wa, wb, na) = (w(&a), w(&b), norm(&a));
        let na2 = norm(&a.matmul(&a).unwrap());
        // rounding slack for the unlabelled inequalities
        let slack = 1e-12 * na.max(1.0);
        if !(wa <= na + slack && na <= 2.0 * wa + slack) {
            violations.push(format!("#{k} w {wa} norm {na}"));
        }
        if wa > 0.5 * (na + na2.sqrt()) + slack {
            violations.push(format!("#{k} w {wa} > (|A|+|A²|^½)/2"));
        }
        let nm = random_normal(n, &mut rng);
        if (w(&nm) - norm(&nm)).abs() >= 1e-7 {
            violations.push(format!("#{k} normal w {} norm {}", w(&nm), norm(&nm)));
        }
        let p = QMatrix::random_projection(n, rng.random_range(1..=n), &mut rng);
        let pbp = p.matmul(&b).unwrap().matmul(&p).unwrap();
        if w(&pbp) > wb + 1e-8 {
            violations.push(format!("#{k} w(PBP) {} > w(B) {wb}", w(&pbp)));
        }
        let aba = a.matmul(&b).unwrap().matmul(&a.adjoint()).unwrap();
        if w(&aba) > na * na * wb + 1e-8 {
            violations.push(format!("#{k} w(ABA*) {} > |A|²w(B) {}", w(&aba), na * na * wb));
        }
        let d = w(&a.block_diag(&b));
        if (d - wa.max(wb)).abs() > 1e-8 {
            violations.push(format!("#{k} w(diag) {d} vs max {}", wa.max(wb)));
        }
    }
    let elapsed = t.elapsed();
    let pass = violations.is_empty() && within(elapsed, 120);
    verdict(6, pass, format!("{} violations {:?}, {elapsed:?}", violations.len(), violations));
}

#[test]
fn criterion_7_section_convexity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut pairs, mut attained, mut retried, mut worst) = (0, 0, 0, 0.0f64);
    for k in 0..20u64 {
        let n = 1 + (k as usize) % 5;
        let a = QMatrix::random(n, &mut rng);
        let r = section_convexity_check(&a, 50, SEED + k).unwrap();
        pairs += r.pairs;
        attained += r.attained;
        retried += r.retried;
        worst = worst.max(r.max_residual);
    }
    verdict(
        7,
        attained == pairs && worst < 1e-6,
        format!("{attained}/{pairs} midpoints attained, {retried} retried, max residual {worst:.1e}"),
    );
}

#[test]
fn criterion_8_support_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for k in 0..100u64 {
        let m = rng.random_range(1..=12);
        let s: Vec<ComplexNum> = (0..m)
            .map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(0.0..3.0)))
            .collect();
        worst = worst.max(prop_conv_check(&s, 200, k).unwrap().max_deviation);
    }
    verdict(8, worst < 1e-9, format!("max deviation {worst:.1e} over 100 sets x 200 probes"));
}

#[test]
fn criterion_9_projection_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst_out, mut worst_vertex, mut vertices) = (0.0f64, 0.0f64, 0);
    for k in 0..4u64 {
        let n = 2 + (k as usize) % 3;
        let a = QMatrix::random(n, &mut rng);
        let sweep = chi_sweep(&a, DEFAULT_ANGLES).unwrap();
        for s in sample_range(&a, 10_000, SEED + k) {
            worst_out = worst_out.max(-sweep.support_slack(s.value.co()));
        }
        let hull = hull2d(&sweep.boundary).unwrap();
        for (i, &v) in hull.iter().enumerate() {
            let (_, residual) = attain_projection_point(&a, v, 8, SEED + k * 1000 + i as u64);
            worst_vertex = worst_vertex.max(residual);
        }
        vertices += hull.len();
    }
    verdict(
        9,
        worst_out <= 1e-7 && worst_vertex < 5e-3,
        format!("max outside {:.1e}, worst vertex residual {worst_vertex:.1e} over {vertices} vertices", worst_out.max(0.0)),
    );
}
