use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// All eigenvalues of a general complex matrix, with multiplicity.
///
/// Householder reduction to upper Hessenberg form followed by single-shift QR
/// iteration (Wilkinson shifts, exceptional shifts on stagnation) with
/// deflation on negligible subdiagonal entries.
pub fn general_eigenvalues(b: &CMatrix) -> Result<Vec<Complex64>> {
    let m = b.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut h = to_rows(b);
    hessenberg(&mut h);
    shifted_qr(&mut h)
}

fn to_rows(b: &CMatrix) -> Vec<Vec<Complex64>> {
    let m = b.dim();
    (0..m).map(|r| (0..m).map(|c| b[(r, c)]).collect()).collect()
}

fn hessenberg(h: &mut [Vec<Complex64>]) {
    let m = h.len();
    for k in 0..m.saturating_sub(2) {
        let alpha_norm: f64 = (k + 1..m).map(|r| h[r][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖ e₁ avoids cancellation
        let mut v: Vec<Complex64> = (k + 1..m).map(|r| h[r][k]).collect();
        v[0] += phase * alpha_norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I - 2vv*) H
        for c in 0..m {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[k + 1 + i][c])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[k + 1 + i][c] -= vi * s * 2.0;
            }
        }
        // H ← H (I - 2vv*)
        for row in h.iter_mut() {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| row[k + 1 + i] * vi)
                .sum();
            for (i, vi) in v.iter().enumerate() {
                row[k + 1 + i] -= s * vi.conj() * 2.0;
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = Complex64::new(0.0, 0.0);
        }
    }
}

fn shifted_qr(h: &mut [Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let m = h.len();
    let cap = 100 * m * m;
    let eps = f64::EPSILON;
    let norm: f64 = h
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut eigen = vec![Complex64::new(0.0, 0.0); m];
    let mut hi = m - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            eigen[0] = h[0][0];
            break;
        }
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == 0.0 { norm } else { s };
            if h[lo][lo - 1].norm() <= eps * s {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigen[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= cap {
            return Err(Error::NoConvergence {
                algorithm: "shifted QR",
                iterations: total,
            });
        }
        total += 1;
        since_deflation += 1;

        let mu = if since_deflation.is_multiple_of(11) {
            // exceptional shift
            h[hi][hi] + Complex64::new(h[hi][hi - 1].norm() * 0.75, h[hi][hi - 1].norm() * 0.5)
        } else {
            wilkinson(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_step(h, lo, hi, mu);
    }
    Ok(eigen)
}

/// Eigenvalue of the trailing 2×2 block closest to its bottom-right entry.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step `H - μI = QR`, `H ← RQ + μI` on rows/cols `lo..=hi`.
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, mu: Complex64) {
    for k in lo..=hi {
        h[k][k] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        // rows k, k+1 ← G* rows
        for col in k..=hi {
            let (x, y) = (h[k][col], h[k + 1][col]);
            h[k][col] = c * x + s.conj() * y;
            h[k + 1][col] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (idx, (c, s)) in rotations.into_iter().enumerate() {
        let k = lo + idx;
        // cols k, k+1 ← cols · G
        for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * s;
            row[k + 1] = -x * s.conj() + y * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += mu;
    }
}

/// Real `c`, complex `s` with `[c, s̄; -s, c] · [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ny = y.norm();
    if ny == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let nx = x.norm();
    if nx == 0.0 {
        // [0, s̄; -s, 0][0; y] = [s̄ y; 0]
        return (0.0, y.conj().inv() * ny);
    }
    let r = nx.hypot(ny);
    let c = nx / r;
    let s = (x.conj() / nx) * y / r;
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::chi_embed;
    use crate::qmat::QMatrix;
    use crate::quat::Quaternion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    fn assert_sigma_min(b: &CMatrix, ev: &[Complex64]) {
        let scale = b.frobenius_norm().max(1e-300);
        for z in ev {
            let s = b.shift(*z).min_singular_value().unwrap();
            assert!(s <= 1e-7 * scale, "σ_min(B - {z} I) = {s:e}");
        }
    }

    #[test]
    fn diagonal() {
        let b = CMatrix::diag(&[c(2.0, 0.0), c(0.0, 3.0)]);
        let ev = sorted(general_eigenvalues(&b).unwrap());
        assert!((ev[0] - c(0.0, 3.0)).norm() < 1e-14);
        assert!((ev[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        let b = chi_embed(&QMatrix::diag(&[Quaternion::J]));
        let ev = sorted(general_eigenvalues(&b).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn diag_j_minus_j() {
        let b = chi_embed(&QMatrix::diag(&[Quaternion::J, -Quaternion::J]));
        let ev = sorted(general_eigenvalues(&b).unwrap());
        for (got, want) in ev.iter().zip([c(0.0, -1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 1.0)]) {
            assert!((got - want).norm() < 1e-12, "{got}");
        }
    }

    #[test]
    fn random_matrices_satisfy_singular_value_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for m in [1, 2, 3, 4, 7, 10, 16, 24] {
            let mut b = CMatrix::zeros(m);
            for r in 0..m {
                for col in 0..m {
                    b[(r, col)] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            let ev = general_eigenvalues(&b).unwrap();
            assert_eq!(ev.len(), m);
            assert_sigma_min(&b, &ev);
            // trace equals the eigenvalue sum
            let tr: Complex64 = (0..m).map(|i| b[(i, i)]).sum();
            let sum: Complex64 = ev.iter().sum();
            assert!((tr - sum).norm() < 1e-10 * b.frobenius_norm());
        }
    }

    #[test]
    fn chi_of_random_quaternion_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=8 {
            let b = chi_embed(&QMatrix::random(n, &mut rng));
            let ev = general_eigenvalues(&b).unwrap();
            assert_sigma_min(&b, &ev);
        }
    }

    #[test]
    fn nilpotent_and_zero() {
        let b = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let ev = general_eigenvalues(&b).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-12));
        let ev = general_eigenvalues(&CMatrix::zeros(4)).unwrap();
        assert!(ev.iter().all(|z| z.norm() == 0.0));
        assert!(general_eigenvalues(&CMatrix::zeros(0)).unwrap().is_empty());
    }

    #[test]
    fn permutation_cycle() {
        // eigenvalues of a cyclic shift are the 5th roots of unity
        let mut b = CMatrix::zeros(5);
        for r in 0..5 {
            b[(r, (r + 1) % 5)] = c(1.0, 0.0);
        }
        let ev = general_eigenvalues(&b).unwrap();
        for z in &ev {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(5) - c(1.0, 0.0)).norm() < 1e-10);
        }
    }
}
