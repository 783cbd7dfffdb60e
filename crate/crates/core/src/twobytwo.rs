//! Closed-form sections for 2×2 matrices.
//!
//! After a unitary triangularization `U*AU = [[z1, p], [0, z2]]` the section
//! `W⁺(A)` is a segment, a triangle or a half-disk, depending on which of
//! `z1 = z2`, `p = 0` hold. The remaining combinations are only bounded.

use serde::Serialize;

use crate::chi::operator_norm;
use crate::error::{Error, Result};
use crate::qmat::{orthonormalize, QMatrix, QVector};
use crate::quat::{conjugator_to, ComplexNum, ImaginaryUnit, Quaternion};
use crate::range::geometry::{
    directed, discretize_boundary, hull2d, hull_distance, polygon_area, segment_distance,
};
use crate::range::{attain_real_point, attain_section_point, sample_values, Section2D, DEFAULT_STARTS};
use crate::spectrum::{right_eigenvector, spherical_spectrum};

/// Absolute tolerance for `z1 = z2` and `p = 0` in [`classify_case`].
pub const CASE_TOL: f64 = 1e-9;
/// Slack for sampled points outside the closed-form region.
pub const CONTAINMENT_TOL: f64 = 5e-3;
/// Bound on the distance from the region boundary to the nearest sample.
pub const FILL_TOL: f64 = 5e-2;

/// `U*AU = [[z1, p], [0, z2]]` with `z1, z2` in the closed upper half-plane.
#[derive(Clone, Debug, Serialize)]
pub struct TriangularForm2 {
    pub z1: ComplexNum,
    pub z2: ComplexNum,
    pub p: Quaternion,
    #[serde(skip)]
    pub u: QMatrix,
    pub residual: f64,
}

impl TriangularForm2 {
    pub fn upper(&self) -> QMatrix {
        let mut t = QMatrix::zeros(2);
        t[(0, 0)] = Quaternion::from_complex(self.z1);
        t[(0, 1)] = self.p;
        t[(1, 1)] = Quaternion::from_complex(self.z2);
        t
    }
}

fn triangular_residual(a: &QMatrix, t: &TriangularForm2) -> Result<f64> {
    let uau = t.u.adjoint().matmul(a)?.matmul(&t.u)?;
    Ok(uau.sub(&t.upper())?.frobenius_norm())
}

/// Unitary triangularization of a 2×2 quaternionic matrix.
pub fn triangularize2(a: &QMatrix) -> Result<TriangularForm2> {
    if a.dim() != 2 {
        return Err(Error::NotTwoByTwo { n: a.dim() });
    }
    let spectrum = spherical_spectrum(a)?;
    let z1 = spectrum.values[0];
    let x = right_eigenvector(a, z1)?;
    let basis = orthonormalize(&[x.clone(), QVector::basis(2, 0), QVector::basis(2, 1)]);
    let mut y = basis[1].clone();
    let z2q = a.quadratic_form(&y)?;
    let z2 = z2q.class_rep();
    if let Ok(m) = ImaginaryUnit::from_direction(z2q.q1, z2q.q2, z2q.q3) {
        if z2q.im_norm() > 0.0 {
            // s⁻¹ i s = m, so s z2q s⁻¹ = re + |im| i
            y = y.right_mul(conjugator_to(m).inv());
        }
    }
    let ay = a.matvec(&y)?;
    let p = x.dot(&ay)?;
    let u = QMatrix::from_columns(&[x, y])?;
    let mut t = TriangularForm2 {
        z1,
        z2,
        p,
        u,
        residual: 0.0,
    };
    t.residual = triangular_residual(a, &t)?;
    let bound = 1e-8 * operator_norm(a)?;
    if t.residual > bound {
        return Err(Error::TriangularResidual {
            residual: t.residual,
            bound,
        });
    }
    Ok(t)
}

/// Closed-form description of `W⁺(A)` for a 2×2 matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region2D {
    Segment { a: ComplexNum, b: ComplexNum },
    Triangle { vertices: [ComplexNum; 3] },
    HalfDisk { center: ComplexNum, radius: f64 },
    /// Points within `radius` of the convex polygon `base`.
    MinkowskiBound { base: Vec<ComplexNum>, radius: f64 },
}

impl Region2D {
    /// Convex hull of the defining points (the base polygon for a bound).
    fn polygon(&self) -> Vec<ComplexNum> {
        match self {
            Region2D::Segment { a, b } => hull2d(&[*a, *b]).unwrap_or_default(),
            Region2D::Triangle { vertices } => hull2d(vertices).unwrap_or_default(),
            Region2D::HalfDisk { center, .. } => vec![*center],
            Region2D::MinkowskiBound { base, .. } => hull2d(base).unwrap_or_default(),
        }
    }

    /// Euclidean distance from `z` to the region, zero inside.
    pub fn distance(&self, z: ComplexNum) -> f64 {
        match self {
            Region2D::Segment { a, b } => segment_distance(*a, *b, z),
            Region2D::Triangle { .. } => hull_distance(&self.polygon(), z),
            Region2D::HalfDisk { center, radius } => {
                let w = z - center;
                if w.im >= 0.0 {
                    (w.norm() - radius).max(0.0)
                } else {
                    // nearest point lies on the diameter
                    let re = w.re.clamp(-radius, *radius);
                    (w - ComplexNum::new(re, 0.0)).norm()
                }
            }
            Region2D::MinkowskiBound { radius, .. } => {
                (hull_distance(&self.polygon(), z) - radius).max(0.0)
            }
        }
    }

    /// Points spaced at most `step` apart along the region boundary.
    pub fn boundary(&self, step: f64) -> Vec<ComplexNum> {
        match self {
            Region2D::HalfDisk { center, radius } => {
                let arc = ((std::f64::consts::PI * radius / step).ceil() as usize).max(1);
                let mut out: Vec<ComplexNum> = (0..=arc)
                    .map(|k| center + ComplexNum::from_polar(*radius, std::f64::consts::PI * k as f64 / arc as f64))
                    .collect();
                out.extend(discretize_boundary(
                    &[center - *radius, center + *radius],
                    step,
                ));
                out
            }
            Region2D::MinkowskiBound { .. } => discretize_boundary(&self.outline(), step),
            _ => discretize_boundary(&self.polygon(), step),
        }
    }

    /// Vertices of a polygon tracing the region in ℂ⁺; arcs become 64-gons.
    pub fn outline(&self) -> Vec<ComplexNum> {
        match self {
            Region2D::HalfDisk { center, radius } => (0..=64)
                .map(|k| center + ComplexNum::from_polar(*radius, std::f64::consts::PI * k as f64 / 64.0))
                .collect(),
            Region2D::MinkowskiBound { radius, .. } => {
                let disk: Vec<ComplexNum> = (0..64)
                    .map(|k| ComplexNum::from_polar(*radius, std::f64::consts::TAU * k as f64 / 64.0))
                    .collect();
                let sum: Vec<ComplexNum> = self
                    .polygon()
                    .iter()
                    .flat_map(|&v| disk.iter().map(move |&d| v + d))
                    .collect();
                clip_upper(&hull2d(&sum).unwrap_or_default())
            }
            _ => self.polygon(),
        }
    }

    /// Corners of a box containing the part of the region in ℂ⁺.
    pub fn bounding_box(&self) -> (ComplexNum, ComplexNum) {
        let (pts, pad) = match self {
            Region2D::HalfDisk { center, radius } => (vec![*center], *radius),
            Region2D::MinkowskiBound { radius, .. } => (self.polygon(), *radius),
            _ => (self.polygon(), 0.0),
        };
        let lo_re = pts.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - pad;
        let hi_re = pts.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + pad;
        let hi_im = pts.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max) + pad;
        (ComplexNum::new(lo_re, 0.0), ComplexNum::new(hi_re, hi_im))
    }

    /// Area of the region within ℂ⁺, by midpoint counting on a `grid`×`grid` lattice.
    pub fn area_upper(&self, grid: usize) -> f64 {
        let (lo, hi) = self.bounding_box();
        let (w, h) = (hi.re - lo.re, hi.im - lo.im);
        if w <= 0.0 || h <= 0.0 {
            return 0.0;
        }
        let mut inside = 0usize;
        for r in 0..grid {
            for c in 0..grid {
                let z = ComplexNum::new(
                    lo.re + w * (c as f64 + 0.5) / grid as f64,
                    lo.im + h * (r as f64 + 0.5) / grid as f64,
                );
                if self.distance(z) == 0.0 {
                    inside += 1;
                }
            }
        }
        w * h * inside as f64 / (grid * grid) as f64
    }
}

/// Part of a convex polygon with `im ≥ 0` (one Sutherland–Hodgman pass).
fn clip_upper(poly: &[ComplexNum]) -> Vec<ComplexNum> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 2);
    for k in 0..m {
        let (a, b) = (poly[k], poly[(k + 1) % m]);
        if a.im >= 0.0 {
            out.push(a);
        }
        if (a.im >= 0.0) != (b.im >= 0.0) {
            let t = a.im / (a.im - b.im);
            out.push(ComplexNum::new(a.re + (b.re - a.re) * t, 0.0));
        }
    }
    out
}

/// The closed-form case a triangular form falls under.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    /// 1: `z1 = z2`, `p = 0`. 2: `z1 ≠ z2`, `p = 0`. 3: `z1 = z2 = 0`, `p ≠ 0`.
    /// 4: anything else (containment only).
    pub case: u8,
    pub region: Region2D,
    /// Set when the combination is not one the closed forms cover exactly.
    pub flagged: bool,
    pub note: Option<String>,
}

/// Region for `[[z1, p], [0, z2]]` with equality tests at `tol` (absolute).
pub fn classify_case(t: &TriangularForm2, tol: f64) -> Result<Classification> {
    let (z1, z2) = (t.z1, t.z2);
    if !(z1.is_finite() && z2.is_finite() && t.p.is_finite()) {
        return Err(Error::InvalidArgument("non-finite triangular form".into()));
    }
    if z1.im < -tol || z2.im < -tol {
        return Err(Error::NegativeImaginary {
            index: if z1.im < -tol { 0 } else { 1 },
            im: z1.im.min(z2.im),
        });
    }
    let same = (z1 - z2).norm() <= tol;
    let p_zero = t.p.norm() <= tol;
    let radius = t.p.norm() / 2.0;
    let out = |case, region, flagged, note: Option<&str>| Classification {
        case,
        region,
        flagged,
        note: note.map(String::from),
    };
    if same && p_zero {
        let z = (z1 + z2) * 0.5;
        return Ok(out(
            1,
            Region2D::Segment {
                a: ComplexNum::new(z.re, 0.0),
                b: z,
            },
            false,
            None,
        ));
    }
    if p_zero {
        return Ok(match diagonal_base(z1, z2, tol) {
            Region2D::Segment { a, b } => out(
                2,
                Region2D::Segment { a, b },
                false,
                Some("both eigenvalues real: section is the real segment between them"),
            ),
            region => out(2, region, false, None),
        });
    }
    if z1.norm() <= tol && z2.norm() <= tol {
        return Ok(out(
            3,
            Region2D::HalfDisk {
                center: ComplexNum::new(0.0, 0.0),
                radius,
            },
            false,
            None,
        ));
    }
    let base = match diagonal_base(z1, z2, tol) {
        Region2D::Segment { a, b } => vec![a, b],
        Region2D::Triangle { vertices } => vertices.to_vec(),
        _ => unreachable!(),
    };
    Ok(out(
        4,
        Region2D::MinkowskiBound { base, radius },
        same,
        same.then_some("z1 = z2 with p ≠ 0: outer bound only"),
    ))
}

/// Section of `diag(z1, z2)`.
fn diagonal_base(z1: ComplexNum, z2: ComplexNum, tol: f64) -> Region2D {
    let (a1, b1) = (z1.re, z1.im.max(0.0));
    let (a2, b2) = (z2.re, z2.im.max(0.0));
    if (z1 - z2).norm() <= tol {
        let z = (z1 + z2) * 0.5;
        return Region2D::Segment {
            a: ComplexNum::new(z.re, 0.0),
            b: z,
        };
    }
    if b1 + b2 <= tol {
        return Region2D::Segment {
            a: ComplexNum::new(a1.min(a2), 0.0),
            b: ComplexNum::new(a1.max(a2), 0.0),
        };
    }
    let v = (a1 * b2 + b1 * a2) / (b1 + b2);
    Region2D::Triangle {
        vertices: [z1, z2, ComplexNum::new(v, 0.0)],
    }
}

/// Membership in `region` with slack `tol`.
pub fn region_contains(region: &Region2D, z: ComplexNum, tol: f64) -> bool {
    region.distance(z) <= tol
}

/// Real points of the section found by attainment on a grid of `W⁺ ∩ ℝ`
/// candidates.
#[derive(Clone, Debug, Serialize)]
pub struct RealAxisCheck {
    pub candidates: Vec<f64>,
    pub attained: Vec<bool>,
    /// Attained candidates form one contiguous run (or none).
    pub connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: u8,
    pub z1: ComplexNum,
    pub z2: ComplexNum,
    pub abs_p: f64,
    pub region: Region2D,
    pub flagged: bool,
    pub note: Option<String>,
    pub samples: usize,
    /// Largest distance from a sampled section point to the region.
    pub max_outside: f64,
    pub containment_tol: f64,
    pub containment_pass: bool,
    /// Largest distance from the region boundary to the nearest sample.
    pub fill: Option<f64>,
    pub fill_tol: f64,
    pub fill_pass: Option<bool>,
    /// Area of the bound in ℂ⁺ minus the area of the sampled hull.
    pub gap_area: Option<f64>,
    pub real_axis: Option<RealAxisCheck>,
}

impl CaseReport {
    pub fn pass(&self) -> bool {
        self.containment_pass
            && self.fill_pass.unwrap_or(true)
            && self.real_axis.as_ref().is_none_or(|r| r.connected)
    }
}

/// Samples `W⁺(A)` and compares it with the closed-form region: containment
/// for every case, boundary fill for cases 1–3.
pub fn case_equality_check(a: &QMatrix, samples: usize, seed: u64) -> Result<CaseReport> {
    let t = triangularize2(a)?;
    let class = classify_case(&t, CASE_TOL)?;
    let values = sample_values(a, samples.max(1), seed);
    let section = Section2D::from_values(&values)?;
    let max_outside = section
        .points
        .iter()
        .map(|&z| class.region.distance(z))
        .fold(0.0, f64::max);
    let exact = class.case != 4;
    let fill = exact.then(|| directed(&class.region.boundary(FILL_TOL / 10.0), &section.points));
    let (gap_area, real_axis) = if exact {
        (None, None)
    } else {
        let gap = class.region.area_upper(400) - polygon_area(&section.hull);
        (Some(gap), Some(real_axis_check(a, &class.region, seed)))
    };
    Ok(CaseReport {
        case: class.case,
        z1: t.z1,
        z2: t.z2,
        abs_p: t.p.norm(),
        region: class.region,
        flagged: class.flagged,
        note: class.note,
        samples: values.len(),
        max_outside,
        containment_tol: CONTAINMENT_TOL,
        containment_pass: max_outside <= CONTAINMENT_TOL,
        fill,
        fill_tol: FILL_TOL,
        fill_pass: fill.map(|f| f < FILL_TOL),
        gap_area,
        real_axis,
    })
}

fn real_axis_check(a: &QMatrix, region: &Region2D, seed: u64) -> RealAxisCheck {
    let (lo, hi) = region.bounding_box();
    let count = 21;
    let mut candidates: Vec<f64> = (0..count)
        .map(|k| lo.re + (hi.re - lo.re) * k as f64 / (count - 1) as f64)
        .filter(|&r| region.distance(ComplexNum::new(r, 0.0)) == 0.0)
        .collect();
    // a real value found without fixing re, so singletons are not missed
    let anchor = attain_real_point(a, DEFAULT_STARTS, seed).map(|(r, _)| r);
    if let Some(r) = anchor {
        candidates.push(r);
        candidates.sort_by(f64::total_cmp);
    }
    let attained: Vec<bool> = candidates
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            Some(r) == anchor
                || attain_section_point(a, ComplexNum::new(r, 0.0), DEFAULT_STARTS, seed.wrapping_add(k as u64))
                    .is_some()
        })
        .collect();
    let first = attained.iter().position(|&b| b);
    let last = attained.iter().rposition(|&b| b);
    let connected = match (first, last) {
        (Some(f), Some(l)) => attained[f..=l].iter().all(|&b| b),
        _ => true,
    };
    RealAxisCheck {
        candidates,
        attained,
        connected,
    }
}
