use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{cdot, hermitian_eigen, hermitian_eigen_from, CMatrix, HermitianEigen};
use crate::error::{Error, Result};

pub const DEFAULT_ANGLES: usize = 720;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Support data of the complex numerical range `W_ℂ(B)` on an angle grid.
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Complex numerical radius `w_ℂ(B)`.
    pub radius: f64,
    /// `⟨u, Bu⟩` for the top eigenvector `u` at each grid angle, followed by the
    /// points found during refinement.
    pub boundary: Vec<Complex64>,
    pub angles: usize,
    /// Grid angles `θ_k = 2πk/angles`.
    pub thetas: Vec<f64>,
    /// `λ_max(Re(e^{iθ_k} B))`, i.e. the support value of `W_ℂ(B)` in direction `e^{-iθ_k}`.
    pub support: Vec<f64>,
}

impl SweepResult {
    /// Smallest slack `λ_max(θ) - Re(e^{iθ} z)` over the grid. Nonnegative for
    /// points of `W_ℂ(B)`; the grid polygon of support lines is an outer bound.
    pub fn support_slack(&self, z: Complex64) -> f64 {
        self.thetas
            .iter()
            .zip(&self.support)
            .map(|(&t, &h)| h - (Complex64::from_polar(1.0, t) * z).re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership in the outer support polygon with slack `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.support_slack(z) >= -tol
    }
}

/// `(e^{iθ}B + e^{-iθ}B*)/2`, built so that it is exactly Hermitian.
fn real_part(b: &CMatrix, theta: f64) -> CMatrix {
    let m = b.dim();
    let e = Complex64::from_polar(1.0, theta);
    let mut h = CMatrix::zeros(m);
    for r in 0..m {
        h[(r, r)] = Complex64::new((e * b[(r, r)]).re, 0.0);
        for c in r + 1..m {
            let z = (e * b[(r, c)] + e.conj() * b[(c, r)].conj()) * 0.5;
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}

struct Probe {
    lambda: f64,
    point: Complex64,
    eig: HermitianEigen,
}

fn probe(b: &CMatrix, theta: f64, warm: Option<&CMatrix>) -> Result<Probe> {
    let h = real_part(b, theta);
    let eig = match warm {
        Some(v) => hermitian_eigen_from(&h, v)?,
        None => hermitian_eigen(&h)?,
    };
    let u = eig.vector(b.dim() - 1);
    let point = cdot(&u, &b.matvec(&u));
    Ok(Probe {
        lambda: eig.max_value(),
        point,
        eig,
    })
}

/// Sweeps `λ_max(Re(e^{iθ}B))` over a uniform grid of `angles` directions, then
/// refines every near-maximal grid peak by golden-section search.
pub fn complex_range_sweep(b: &CMatrix, angles: usize) -> Result<SweepResult> {
    if angles < 8 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 8 angles, got {angles}"
        )));
    }
    let m = b.dim();
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let thetas: Vec<f64> = (0..angles).map(|k| TAU * k as f64 / angles as f64).collect();
    let mut support = Vec::with_capacity(angles);
    let mut boundary = Vec::with_capacity(angles);
    let mut warm: Option<CMatrix> = None;
    for &t in &thetas {
        let p = probe(b, t, warm.as_ref())?;
        support.push(p.lambda);
        boundary.push(p.point);
        warm = Some(p.eig.vectors);
    }

    let grid_max = support.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut radius = grid_max.max(boundary.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let scale = b.frobenius_norm();
    if scale == 0.0 {
        return Ok(SweepResult {
            radius: 0.0,
            boundary,
            angles,
            thetas,
            support,
        });
    }

    let step = TAU / angles as f64;
    let slack = 1e-3 * scale;
    for k in 0..angles {
        let prev = support[(k + angles - 1) % angles];
        let next = support[(k + 1) % angles];
        let f = support[k];
        if !(f > prev && f >= next) || f < grid_max - slack {
            continue;
        }
        let (value, point) = golden_section(b, thetas[k] - step, thetas[k] + step)?;
        boundary.push(point);
        radius = radius.max(value).max(point.norm());
    }

    Ok(SweepResult {
        radius,
        boundary,
        angles,
        thetas,
        support,
    })
}

/// Maximizes `λ_max(θ)` on `[lo, hi]`; returns the best value and its boundary point.
fn golden_section(b: &CMatrix, mut lo: f64, mut hi: f64) -> Result<(f64, Complex64)> {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut p1 = probe(b, x1, None)?;
    let mut p2 = probe(b, x2, None)?;
    let mut best = if p1.lambda >= p2.lambda {
        (p1.lambda, p1.point)
    } else {
        (p2.lambda, p2.point)
    };
    let mut last = best.0;
    for _ in 0..200 {
        if p1.lambda >= p2.lambda {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - GOLDEN * (hi - lo);
            p1 = probe(b, x1, Some(&p2.eig.vectors))?;
        } else {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + GOLDEN * (hi - lo);
            p2 = probe(b, x2, Some(&p1.eig.vectors))?;
        }
        for p in [&p1, &p2] {
            if p.lambda > best.0 {
                best = (p.lambda, p.point);
            }
        }
        if hi - lo < 1e-9 || (best.0 - last).abs() < 1e-13 && hi - lo < 1e-6 {
            break;
        }
        last = best.0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::chi_embed;
    use crate::qmat::QMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force numerical radius of a 2×2 matrix over `(cos α, e^{iφ} sin α)`.
    fn brute_radius_2x2(b: &CMatrix) -> f64 {
        let steps = 2000;
        let mut best: f64 = 0.0;
        for i in 0..=steps {
            let alpha = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
            for k in 0..steps {
                let phi = TAU * k as f64 / steps as f64;
                let u = [c(alpha.cos(), 0.0), Complex64::from_polar(alpha.sin(), phi)];
                best = best.max(cdot(&u, &b.matvec(&u)).norm());
            }
        }
        best
    }

    #[test]
    fn hermitian_diagonal() {
        let b = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
        assert!((s.radius - 1.0).abs() < 1e-12);
        assert!(s.boundary.iter().all(|z| z.im.abs() < 1e-12 && z.re.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn skew_rotation_contains_origin() {
        let b = CMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
        assert!((s.radius - 1.0).abs() < 1e-10);
        assert!(s.contains(c(0.0, 0.0), 1e-12));
        assert!(s.contains(c(0.0, 0.99), 1e-12));
        assert!(!s.contains(c(0.1, 0.0), 1e-3));
    }

    #[test]
    fn nilpotent_disk() {
        let b = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
        let brute = brute_radius_2x2(&b);
        assert!((brute - 0.5).abs() < 1e-6);
        assert!((s.radius - 0.5).abs() < 1e-10);
        for z in &s.boundary {
            assert!((z.norm() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn random_2x2_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..3 {
            let b = chi_embed(&QMatrix::random(1, &mut rng));
            let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
            assert!((s.radius - brute_radius_2x2(&b)).abs() < 1e-5);
        }
        use rand::Rng;
        let mut b = CMatrix::zeros(2);
        for r in 0..2 {
            for col in 0..2 {
                b[(r, col)] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
        assert!(s.radius + 1e-12 >= brute_radius_2x2(&b));
        assert!(s.radius - brute_radius_2x2(&b) < 1e-5);
    }

    #[test]
    fn hermitian_radius_is_spectral_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let a = QMatrix::random(4, &mut rng);
        let h = a.add(&a.adjoint()).unwrap();
        let b = chi_embed(&h);
        let eig = hermitian_eigen(&b).unwrap();
        let rho = eig.values[0].abs().max(eig.max_value().abs());
        let s = complex_range_sweep(&b, DEFAULT_ANGLES).unwrap();
        assert!((s.radius - rho).abs() < 1e-10 * rho.max(1.0));
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(complex_range_sweep(&CMatrix::identity(2), 7).is_err());
    }

    #[test]
    fn zero_matrix() {
        let s = complex_range_sweep(&CMatrix::zeros(3), 16).unwrap();
        assert_eq!(s.radius, 0.0);
    }
}
