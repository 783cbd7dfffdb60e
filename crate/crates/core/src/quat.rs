//! Quaternion scalars, slices, equivalence classes and circularization.
//!
//! A quaternion `q = q0 + q1 i + q2 j + q3 k` is stored by its four real
//! components. Every quaternion splits uniquely as `z1 + z2 j` with complex
//! `z1 = q0 + q1 i` and `z2 = q2 + q3 i`; that split is what the complex
//! adjoint embedding in [`crate::chi`] is built on.
//!
//! Two quaternions are similar (`p = s⁻¹ q s`) exactly when they share the real
//! part and the modulus of the imaginary part. The class `[q]` is represented
//! by the point `re(q) + i |im(q)|` of the closed upper half-plane.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexNum = Complex64;

/// Default tolerance for scalar comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);
    /// `1, i, j, k` in order.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    #[inline]
    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    #[inline]
    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    /// Embeds `z = a + bi` into the slice spanned by `1, i`.
    #[inline]
    pub fn from_complex(z: ComplexNum) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    /// Reassembles `z1 + z2 j`.
    #[inline]
    pub fn from_complex_pair(z1: ComplexNum, z2: ComplexNum) -> Self {
        Self::new(z1.re, z1.im, z2.re, z2.im)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.q0
    }

    /// The imaginary part `q1 i + q2 j + q3 k` as a quaternion.
    #[inline]
    pub fn im(self) -> Self {
        Self::new(0.0, self.q1, self.q2, self.q3)
    }

    #[inline]
    pub fn im_norm(self) -> f64 {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    /// Modulus `|q|`.
    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `q⁻¹ = q̄ / |q|²`; infinite components for `q = 0`.
    #[inline]
    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    /// Euclidean inner product on `ℝ⁴`, equal to `re(p̄ q)`.
    #[inline]
    pub fn dot4(self, other: Self) -> f64 {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }

    /// The unique `(z1, z2)` with `q = z1 + z2 j`.
    #[inline]
    pub fn complex_pair(self) -> (ComplexNum, ComplexNum) {
        (
            ComplexNum::new(self.q0, self.q1),
            ComplexNum::new(self.q2, self.q3),
        )
    }

    /// Projection `q0 + q1 i` onto the complex plane.
    #[inline]
    pub fn co(self) -> ComplexNum {
        ComplexNum::new(self.q0, self.q1)
    }

    /// Representative of `[q]` in the closed upper half-plane: `re(q) + i |im(q)|`.
    #[inline]
    pub fn class_rep(self) -> ComplexNum {
        ComplexNum::new(self.q0, self.im_norm())
    }

    pub fn same_class(self, other: Self, tol: f64) -> bool {
        (self.re() - other.re()).abs() <= tol && (self.im_norm() - other.im_norm()).abs() <= tol
    }

    /// `s⁻¹ q s`.
    #[inline]
    pub fn conjugate_by(self, s: Self) -> Self {
        s.inv() * self * s
    }

    pub fn abs_diff(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(a: f64) -> Self {
        Self::real(a)
    }
}

impl From<ComplexNum> for Quaternion {
    fn from(z: ComplexNum) -> Self {
        Self::from_complex(z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{:+}i{:+}j{:+}k",
            self.q0, self.q1, self.q2, self.q3
        )
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.q0 + r.q0, self.q1 + r.q1, self.q2 + r.q2, self.q3 + r.q3)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.q0 - r.q0, self.q1 - r.q1, self.q2 - r.q2, self.q3 - r.q3)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (r.q0, r.q1, r.q2, r.q3);
        Self::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

/// An element `m` of the unit sphere of purely imaginary quaternions, so `m² = -1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImaginaryUnit {
    u1: f64,
    u2: f64,
    u3: f64,
}

impl ImaginaryUnit {
    pub const I: Self = Self { u1: 1.0, u2: 0.0, u3: 0.0 };
    pub const J: Self = Self { u1: 0.0, u2: 1.0, u3: 0.0 };
    pub const K: Self = Self { u1: 0.0, u2: 0.0, u3: 1.0 };

    /// Accepts components whose modulus is 1 within `1e-12`.
    pub fn new(u1: f64, u2: f64, u3: f64) -> Result<Self> {
        let modulus = (u1 * u1 + u2 * u2 + u3 * u3).sqrt();
        if (modulus - 1.0).abs() > 1e-12 || !modulus.is_finite() {
            return Err(Error::NotImaginaryUnit { modulus });
        }
        Ok(Self { u1, u2, u3 })
    }

    /// Normalizes an arbitrary nonzero direction.
    pub fn from_direction(u1: f64, u2: f64, u3: f64) -> Result<Self> {
        let modulus = (u1 * u1 + u2 * u2 + u3 * u3).sqrt();
        if modulus == 0.0 || !modulus.is_finite() {
            return Err(Error::NotImaginaryUnit { modulus });
        }
        Ok(Self {
            u1: u1 / modulus,
            u2: u2 / modulus,
            u3: u3 / modulus,
        })
    }

    /// Uniform draw on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Ok(m) = Self::from_direction(v[0], v[1], v[2]) {
                return m;
            }
        }
    }

    pub fn components(self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn as_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.u1, self.u2, self.u3)
    }

    /// The point `α + β m` of the slice `ℂ_m`.
    pub fn slice_point(self, z: ComplexNum) -> Quaternion {
        Quaternion::new(z.re, z.im * self.u1, z.im * self.u2, z.im * self.u3)
    }
}

/// Unit `s` with `s⁻¹ i s = m`.
///
/// The rotation taking `i` to `m` has the half-angle form `s = (1 - i m)/|1 - i m|`,
/// which degenerates as `m → -i`. On the hemisphere facing `-i` the conjugator is
/// composed as `j · t` with `t⁻¹ i t = -m` instead, so `m = -i` yields `s = j`.
pub fn conjugator_to(m: ImaginaryUnit) -> Quaternion {
    let mq = m.as_quaternion();
    let (base, target) = if m.u1 >= 0.0 {
        (Quaternion::ONE, mq)
    } else {
        (Quaternion::J, -mq)
    };
    let t = Quaternion::ONE - Quaternion::I * target;
    base * (t / t.norm())
}

/// Samples the circularization `Ω_S`: `m_samples` points `α + β m` per input
/// `α + iβ`, with `m` uniform on the imaginary unit sphere.
pub fn circularize(points: &[ComplexNum], m_samples: usize, seed: u64) -> Result<Vec<Quaternion>> {
    circularize_with_tol(points, m_samples, seed, DEFAULT_TOL)
}

pub fn circularize_with_tol(
    points: &[ComplexNum],
    m_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<Quaternion>> {
    if m_samples == 0 {
        return Err(Error::InvalidArgument("m_samples must be at least 1".into()));
    }
    if let Some((index, z)) = points.iter().enumerate().find(|(_, z)| z.im < -tol) {
        return Err(Error::NegativeImaginary { index, im: z.im });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(points.len() * m_samples);
    for z in points {
        let z = ComplexNum::new(z.re, z.im.max(0.0));
        for _ in 0..m_samples {
            out.push(ImaginaryUnit::random(&mut rng).slice_point(z));
        }
    }
    Ok(out)
}
