use quatrange::chi::operator_norm;
use quatrange::qmat::random_unit_vector;
use quatrange::range::{
    chi_sweep, numerical_radius, polarization_sum, radius_lower_bound, sample_range,
    section_convexity_check, set_ops_check, SetOpsConfig,
};
use quatrange::spectrum::verify_spectrum;
use quatrange::twobytwo::case_equality_check;
use quatrange::{QMatrix, Quaternion};

use crate::report::{errored, Battery, Check, Status, VerifyReport};
use crate::RunConfig;

/// Inequality slack, relative to `max(1, ‖A‖)`.
const INEQ_TOL: f64 = 1e-8;
const PROJECTION_TOL: f64 = 1e-7;
const PROJECTION_SAMPLES: usize = 10_000;
const CONVEXITY_PAIRS: usize = 20;

/// Runs the full property battery on `a`.
pub fn run_verify(a: &QMatrix, subject: &str, config: &RunConfig) -> VerifyReport {
    let mut battery = Battery::new(subject, a.dim(), config.timings);
    if a.dim() == 0 {
        battery.run(|| Check::new("nonempty", Status::Fail).note("matrix has dimension 0"));
        return battery.finish();
    }
    battery.run(|| spectrum_check(a));
    battery.run(|| projection_check(a, config));
    battery.run_many(|| radius_checks(a, config));
    battery.run(|| polarization_check(a, config.seed));
    battery.run(|| convexity_check(a, config.seed));
    battery.run_many(|| set_ops_checks(a, config));
    if a.dim() == 2 {
        battery.run(|| case_check(a, config));
    } else {
        battery.run(|| Check::skip("two_by_two_closed_form", "only defined for n = 2"));
    }
    battery.finish()
}

pub(crate) fn spectrum_check(a: &QMatrix) -> Check {
    match verify_spectrum(a) {
        Ok(r) => {
            let worst = r.checks.iter().map(|c| c.delta_residual).fold(0.0, f64::max);
            Check::new("spectrum_residuals", Status::from_bool(r.pass))
                .value("values", &r.spectrum.values)
                .value("multiplicities", &r.spectrum.multiplicities)
                .value("max_delta_residual", worst)
                .value("per_value", &r.checks)
                .tol(r.checks.first().map_or(0.0, |c| c.bound))
        }
        Err(e) => errored("spectrum_residuals", e),
    }
}

pub(crate) fn projection_check(a: &QMatrix, config: &RunConfig) -> Check {
    let sweep = match chi_sweep(a, config.angles) {
        Ok(s) => s,
        Err(e) => return errored("projection_in_chi_range", e),
    };
    let tol = PROJECTION_TOL * operator_norm(a).unwrap_or(1.0).max(1.0);
    let samples = sample_range(a, config.samples.min(PROJECTION_SAMPLES), config.seed);
    let worst = samples
        .iter()
        .map(|s| -sweep.support_slack(s.value.co()))
        .fold(f64::NEG_INFINITY, f64::max);
    Check::new("projection_in_chi_range", Status::from_bool(worst <= tol))
        .value("samples", samples.len())
        .value("max_outside", worst.max(0.0))
        .tol(tol)
}

pub(crate) fn radius_checks(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let w = match numerical_radius(a, config.angles) {
        Ok(w) => w,
        Err(e) => return vec![errored("numerical_radius", e)],
    };
    let (norm, sq_norm) = match operator_norm(a).and_then(|n| Ok((n, operator_norm(&a.matmul(a)?)?))) {
        Ok(v) => v,
        Err(e) => return vec![errored("operator_norm", e)],
    };
    let tol = INEQ_TOL * norm.max(1.0);
    let mut out = vec![Check::new("numerical_radius", Status::Pass)
        .value("w", w)
        .value("norm", norm)
        .value("square_norm", sq_norm)
        .value("square_is_zero", sq_norm <= tol)];
    match radius_lower_bound(a, config.samples, config.seed, 200) {
        Ok((lb, x)) => out.push(
            Check::new("lower_bound_below_radius", Status::from_bool(lb <= w + tol))
                .value("lower_bound", lb)
                .value("gap", w - lb)
                .value("witness", x)
                .tol(tol),
        ),
        Err(e) => out.push(errored("lower_bound_below_radius", e)),
    }
    out.push(
        Check::new("radius_norm_sandwich", Status::from_bool(w <= norm + tol && norm <= 2.0 * w + tol))
            .value("w", w)
            .value("norm", norm)
            .tol(tol),
    );
    let bound = 0.5 * (norm + sq_norm.sqrt());
    out.push(
        Check::new("radius_square_bound", Status::from_bool(w <= bound + tol))
            .value("w", w)
            .value("bound", bound)
            .tol(tol),
    );
    let scale = a.frobenius_norm().max(1.0);
    if a.is_normal(1e-9 * scale * scale) {
        let d = (w - norm).abs();
        out.push(
            Check::new("normal_radius_equals_norm", Status::from_bool(d < 1e-7))
                .value("deviation", d)
                .tol(1e-7),
        );
    } else {
        out.push(Check::skip("normal_radius_equals_norm", "matrix is not normal"));
    }
    out
}

/// The polarization sum reproduces `4⟨X,HY⟩` for the Hermitian part `H`.
pub(crate) fn polarization_check(a: &QMatrix, seed: u64) -> Check {
    let h = a.add(&a.adjoint()).expect("same size").scale(0.5);
    let n = a.dim();
    let tol = 1e-9 * h.frobenius_norm().max(1.0);
    let mut worst: f64 = 0.0;
    for k in 0..16 {
        let x = random_unit_vector(n, seed.wrapping_add(2 * k));
        let y = random_unit_vector(n, seed.wrapping_add(2 * k + 1));
        let direct = x.dot(&h.matvec(&y).expect("same size")).expect("same size") * 4.0;
        worst = worst.max(polarization_sum(&h, &x, &y).abs_diff(direct));
    }
    Check::new("polarization_hermitian_part", Status::from_bool(worst <= tol))
        .value("max_deviation", worst)
        .tol(tol)
        .note("the identity holds for self-adjoint matrices; it is applied to (A + A*)/2")
}

pub(crate) fn convexity_check(a: &QMatrix, seed: u64) -> Check {
    match section_convexity_check(a, CONVEXITY_PAIRS, seed) {
        Ok(r) => Check::new("section_convexity_midpoints", Status::from_bool(r.pass()))
            .value("pairs", r.pairs)
            .value("attained", r.attained)
            .value("retried", r.retried)
            .value("max_residual", r.max_residual)
            .tol(1e-6),
        Err(e) => errored("section_convexity_midpoints", e),
    }
}

pub(crate) fn set_ops_checks(a: &QMatrix, config: &RunConfig) -> Vec<Check> {
    let b = a.adjoint().matmul(a).expect("same size");
    let mut ops = SetOpsConfig {
        samples: config.samples,
        ..SetOpsConfig::default()
    };
    if let Some(t) = config.tol {
        ops.hausdorff_tol = t;
    }
    match set_ops_check(a, &b, config.seed, &ops) {
        Ok(r) => vec![
            Check::new("set_ops_witness_identities", Status::from_bool(r.exact_pass))
                .value("affine_deviation", r.affine_deviation)
                .value("sum_deviation", r.sum_deviation)
                .value("unitary_witness_deviation", r.unitary_witness_deviation)
                .value("adjoint_witness_deviation", r.adjoint_witness_deviation)
                .tol(r.exact_tol),
            Check::new("set_ops_sampled_hulls", Status::from_bool(r.sampled_pass))
                .value("unitary_hausdorff", r.unitary_hausdorff)
                .value("adjoint_hausdorff", r.adjoint_hausdorff)
                .value("samples", config.samples)
                .tol(r.hausdorff_tol)
                .note("hull distances shrink as the sample count grows"),
        ],
        Err(e) => vec![errored("set_ops", e)],
    }
}

pub(crate) fn case_check(a: &QMatrix, config: &RunConfig) -> Check {
    match case_equality_check(a, config.samples, config.seed) {
        Ok(r) => {
            let mut c = Check::new("two_by_two_closed_form", Status::from_bool(r.pass()))
                .value("case", r.case)
                .value("z1", r.z1)
                .value("z2", r.z2)
                .value("abs_p", r.abs_p)
                .value("region", &r.region)
                .value("max_outside", r.max_outside)
                .value("containment_tol", r.containment_tol)
                .value("fill", r.fill)
                .value("fill_tol", r.fill_tol)
                .value("gap_area", r.gap_area)
                .value("real_axis", &r.real_axis);
            if let Some(n) = &r.note {
                c = c.note(n);
            }
            c
        }
        Err(e) => errored("two_by_two_closed_form", e),
    }
}

/// `|⟨X, AX⟩|` over the samples.
pub(crate) fn sample_moduli(a: &QMatrix, config: &RunConfig) -> Vec<f64> {
    quatrange::range::sample_values(a, config.samples, config.seed)
        .iter()
        .map(|q: &Quaternion| q.norm())
        .collect()
}
