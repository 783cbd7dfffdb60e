//! Support functions of circularized sets.
//!
//! For `S ⊂ ℂ⁺` the support function of `conv(Ω_S)` in direction
//! `d = (d₀, d₁, d₂, d₃)` is `max_{α+iβ ∈ S} α d₀ + β ‖(d₁, d₂, d₃)‖`, because
//! `sup_{m ∈ 𝕊} ⟨d, βm⟩ = β ‖d_im‖` for `β ≥ 0`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{chi_sweep, chunk_rng, geometry::hull2d};
use crate::error::{Error, Result};
use crate::qmat::QMatrix;
use crate::quat::ComplexNum;
use crate::spectrum::spherical_spectrum;

/// A unit direction in `ℝ⁴` and the support value found there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportProbe {
    pub direction: [f64; 4],
    pub value: f64,
}

impl SupportProbe {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
        loop {
            let d: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 1e-12 {
                return d.map(|v| v / n);
            }
        }
    }
}

/// `h(d) = max_{α+iβ ∈ S} α d₀ + β ‖(d₁,d₂,d₃)‖`.
pub fn omega_support(s: &[ComplexNum], d: [f64; 4]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some((index, z)) = s.iter().enumerate().find(|(_, z)| z.im < 0.0) {
        return Err(Error::NegativeImaginary { index, im: z.im });
    }
    let lateral = (d[1] * d[1] + d[2] * d[2] + d[3] * d[3]).sqrt();
    Ok(s.iter()
        .map(|z| z.re * d[0] + z.im * lateral)
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Debug, Serialize)]
pub struct PropConvReport {
    pub probes: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares the support functions of `Ω_S`, of `Ω` over the hull vertices of
/// `S`, and of `Ω` over a dense sample of `conv(S)`.
pub fn prop_conv_check(s: &[ComplexNum], probes: usize, seed: u64) -> Result<PropConvReport> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let vertices = hull2d(s)?;
    let mut rng = chunk_rng(seed, 2);
    let mut dense = vertices.clone();
    let m = vertices.len();
    for k in 0..m {
        let (a, b) = (vertices[k], vertices[(k + 1) % m]);
        for t in 1..16 {
            dense.push(a + (b - a) * (t as f64 / 16.0));
        }
    }
    for _ in 0..256 {
        let w: Vec<f64> = (0..m).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
        let total: f64 = w.iter().sum();
        dense.push(vertices.iter().zip(&w).map(|(z, wi)| z * (wi / total)).sum());
    }
    for z in dense.iter_mut() {
        // convex combinations of points in ℂ⁺ stay in ℂ⁺ up to rounding
        z.im = z.im.max(0.0);
    }
    let mut max_deviation: f64 = 0.0;
    for _ in 0..probes {
        let d = SupportProbe::random(&mut rng);
        let h = omega_support(s, d)?;
        let hv = omega_support(&vertices, d)?;
        let hd = omega_support(&dense, d)?;
        max_deviation = max_deviation.max((h - hv).abs()).max((h - hd).abs());
    }
    Ok(PropConvReport {
        probes,
        max_deviation,
        pass: max_deviation < 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalHullReport {
    pub probes: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// For normal `A`, the circularized numerical range of `χ_A` and the spherical
/// spectrum have the same convex hull; compared through support functions.
pub fn normal_hull_check(a: &QMatrix, probes: usize, angles: usize, seed: u64) -> Result<NormalHullReport> {
    let scale = a.frobenius_norm().max(1.0);
    if !a.is_normal(1e-9 * scale * scale) {
        return Err(Error::NotNormal);
    }
    let sweep = chi_sweep(a, angles)?;
    let range: Vec<ComplexNum> = sweep.boundary.iter().map(|z| ComplexNum::new(z.re, z.im.abs())).collect();
    let spectrum = spherical_spectrum(a)?.values;
    let mut rng = chunk_rng(seed, 3);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..probes {
        let d = SupportProbe::random(&mut rng);
        let lhs = omega_support(&range, d)?;
        let rhs = omega_support(&spectrum, d)?;
        max_deviation = max_deviation.max((lhs - rhs).abs());
    }
    Ok(NormalHullReport {
        probes,
        max_deviation,
        pass: max_deviation < 1e-6,
    })
}
