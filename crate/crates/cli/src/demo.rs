use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use quatrange::chi::operator_norm;
use quatrange::io::parse_matrix_str;
use quatrange::range::geometry::hull_margin;
use quatrange::range::{
    attain_section_point, chi_sweep, hull2d, numerical_radius, radius_lower_bound, DEFAULT_STARTS,
};
use quatrange::spectrum::{delta_residual, right_eigenvector, spherical_spectrum};
use quatrange::{QMatrix, QVector, Quaternion};

use crate::report::{errored, Battery, Check, Status, VerifyReport};
use crate::verify::{case_check, sample_moduli};
use crate::RunConfig;

/// Registered demo names with the matrix each one loads.
pub const DEMOS: &[(&str, &str)] = &[
    ("diag-j", include_str!("../fixtures/diag-j.json")),
    ("radius-one", include_str!("../fixtures/radius-one.json")),
    ("square-norm", include_str!("../fixtures/square-norm.json")),
    ("neednot", include_str!("../fixtures/neednot.json")),
    ("diag-k11", include_str!("../fixtures/diag-k11.json")),
    ("diag-kk", include_str!("../fixtures/diag-kk.json")),
    ("case1", include_str!("../fixtures/diag-kk.json")),
    ("case2", include_str!("../fixtures/case2.json")),
    ("case3", include_str!("../fixtures/case3.json")),
    ("case4", include_str!("../fixtures/case4.json")),
];

pub fn demo_names() -> Vec<&'static str> {
    DEMOS.iter().map(|d| d.0).collect()
}

pub fn demo_matrix(name: &str) -> Option<QMatrix> {
    DEMOS
        .iter()
        .find(|d| d.0 == name)
        .map(|d| parse_matrix_str(d.1).expect("fixture parses"))
}

/// Runs the checks stated for the named example. `None` for an unknown name.
pub fn run_demo(name: &str, config: &RunConfig) -> Option<VerifyReport> {
    let a = demo_matrix(name)?;
    let mut b = Battery::new(name, a.dim(), config.timings);
    match name {
        "diag-j" => b.run(|| diag_j(&a)),
        "radius-one" => b.run_many(|| radius_one(&a, config)),
        "square-norm" => b.run_many(|| square_norm(&a, config)),
        "neednot" => b.run_many(|| neednot(&a, config)),
        "diag-k11" => b.run_many(|| diag_k11(&a, config)),
        "case2" => {
            b.run(|| case_check(&a, config));
            b.run(|| attained("real_vertex_attained", &a, Complex64::new(1.0 / 3.0, 0.0), config.seed));
        }
        "case3" => {
            b.run(|| case_check(&a, config));
            b.run(|| {
                let (lb, _) = radius_lower_bound(&a, config.samples, config.seed, 200).expect("n = 2");
                Check::new("half_disk_radius_attained", Status::from_bool((lb - 1.0).abs() < 1e-6))
                    .value("max_modulus", lb)
                    .tol(1e-6)
            });
        }
        _ => b.run(|| case_check(&a, config)),
    }
    Some(b.finish())
}

fn diag_j(a: &QMatrix) -> Check {
    let name = "spectrum_is_i_twice";
    let s = match spherical_spectrum(a) {
        Ok(s) => s,
        Err(e) => return errored(name, e),
    };
    let i = Complex64::new(0.0, 1.0);
    let single = s.len() == 1 && (s.values[0] - i).norm() < 1e-9 && s.multiplicities[0] == 2;
    let residual = right_eigenvector(a, i).map(|x| delta_residual(a, Quaternion::I, &x));
    match residual {
        Ok(r) => Check::new(name, Status::from_bool(single && r < 1e-8))
            .value("values", &s.values)
            .value("multiplicities", &s.multiplicities)
            .value("delta_residual", r)
            .tol(1e-8),
        Err(e) => errored(name, e),
    }
}

fn norms(a: &QMatrix) -> (f64, f64) {
    let norm = operator_norm(a).expect("nonempty");
    let sq = operator_norm(&a.matmul(a).expect("square")).expect("nonempty");
    (norm, sq)
}

fn radius_one(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let w = numerical_radius(a, config.angles).expect("nonempty");
    let (norm, sq) = norms(a);
    let (lb, _) = radius_lower_bound(a, config.samples, config.seed, 500).expect("nonempty");
    let e3 = a.quadratic_form(&QVector::basis(3, 2)).expect("n = 3").norm();
    vec![
        Check::new("radius_is_one", Status::from_bool((w - 1.0).abs() < 1e-6)).value("w", w).tol(1e-6),
        Check::new("norm_is_two", Status::from_bool((norm - 2.0).abs() < 1e-9)).value("norm", norm).tol(1e-9),
        Check::new("lower_bound_reaches_one", Status::from_bool(lb >= 1.0 - 1e-4))
            .value("lower_bound", lb)
            .tol(1e-4),
        Check::new("e3_attains_one", Status::from_bool((e3 - 1.0).abs() < 1e-12)).value("modulus", e3),
        Check::new("square_nonzero", Status::from_bool(sq > 1e-9)).value("square_norm", sq),
    ]
}

fn square_norm(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let w = numerical_radius(a, config.angles).expect("nonempty");
    let (norm, sq) = norms(a);
    vec![
        Check::new("radius_is_inv_sqrt2", Status::from_bool((w - FRAC_1_SQRT_2).abs() < 1e-5))
            .value("w", w)
            .tol(1e-5),
        Check::new(
            "square_norm_equals_norm_squared",
            Status::from_bool((sq - 1.0).abs() < 1e-9 && (norm * norm - 1.0).abs() < 1e-9),
        )
        .value("norm", norm)
        .value("square_norm", sq)
        .tol(1e-9),
    ]
}

fn attained(name: &str, a: &QMatrix, target: Complex64, seed: u64) -> Check {
    let hit = attain_section_point(a, target, DEFAULT_STARTS, seed);
    let residual = hit
        .as_ref()
        .map(|x| (a.quadratic_form(x).expect("unit").class_rep() - target).norm());
    Check::new(name, Status::from_bool(hit.is_some()))
        .value("target", target)
        .value("residual", residual)
        .tol(1e-6)
}

fn not_attained(name: &str, a: &QMatrix, target: Complex64, seed: u64) -> Check {
    let hit = attain_section_point(a, target, DEFAULT_STARTS, seed);
    Check::new(name, Status::from_bool(hit.is_none()))
        .value("target", target)
        .value("starts", DEFAULT_STARTS)
}

fn neednot(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let zero = Complex64::new(0.0, 0.0);
    let sweep = chi_sweep(a, config.angles).expect("nonempty");
    let hull = hull2d(&sweep.boundary).expect("nonempty");
    let margin = hull_margin(&hull, zero, 1e-9);
    let moduli = sample_moduli(a, config);
    let worst = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    vec![
        Check::new("origin_inside_chi_range", Status::from_bool(margin > 0.9))
            .value("margin", margin)
            .value("hull", &hull)
            .note("the complex range of the adjoint is the segment [-i, i]; margin is measured in its relative interior"),
        not_attained("origin_not_attained", a, zero, config.seed),
        Check::new("values_unimodular", Status::from_bool(worst <= 1e-10))
            .value("samples", moduli.len())
            .value("max_deviation", worst)
            .tol(1e-10),
    ]
}

fn diag_k11(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let min = sample_moduli(a, config).into_iter().fold(f64::INFINITY, f64::min);
    vec![
        Check::new("min_modulus", Status::from_bool(min >= FRAC_1_SQRT_2 - 1e-3))
            .value("min", min)
            .value("bound", FRAC_1_SQRT_2)
            .tol(1e-3)
            .note("|q|² = t² + (1 - t)² with t = |x|², minimal at t = 1/2"),
        not_attained("origin_not_attained", a, Complex64::new(0.0, 0.0), config.seed),
    ]
}
