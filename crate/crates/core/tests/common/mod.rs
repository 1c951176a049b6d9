//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's numerical routines.
#![allow(dead_code)]

use hyperdiss::linalg::{CMat, CVec, RMat, C64};

/// Adaptive Dormand–Prince 5(4) integration of `u' = g u` on `[0, t]`.
pub fn integrate(g: &CMat, u0: &CVec, t: f64, tol: f64) -> CVec {
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
    let mut u = u0.clone();
    let mut now = 0.0;
    let mut h: f64 = 1e-3;
    while now < t {
        h = h.min(t - now);
        let mut k: Vec<CVec> = Vec::with_capacity(7);
        for row in &A {
            let mut y = u.clone();
            for (kj, a) in k.iter().zip(row) {
                y += kj * C64::new(a * h, 0.0);
            }
            k.push(g * y);
        }
        let mut hi = u.clone();
        let mut lo = u.clone();
        for i in 0..7 {
            hi += &k[i] * C64::new(B5[i] * h, 0.0);
            lo += &k[i] * C64::new(B4[i] * h, 0.0);
        }
        let err = (&hi - &lo).norm() / (1.0 + hi.norm());
        if err <= tol {
            now += h;
            u = hi;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    u
}

/// Characteristic polynomial `det(λ − M)`, lowest power first, by
/// Faddeev–LeVerrier in complex arithmetic.
pub fn char_poly(m: &CMat) -> Vec<C64> {
    let n = m.nrows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let id = CMat::identity(n, n);
    let mut mk = CMat::zeros(n, n);
    for k in 1..=n {
        mk = m * (&mk + &id * coeffs[n - k + 1]);
        coeffs[n - k] = -mk.trace() / C64::new(k as f64, 0.0);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |z: C64| coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
    let scale = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..5000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Eigenvalues of a small complex matrix via its characteristic polynomial.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    poly_roots(&char_poly(m))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &RMat) -> Vec<f64> {
    let n = a.nrows();
    let mut a = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Smallest eigenvalue of a Hermitian matrix through its real `2m×2m` embedding.
pub fn min_hermitian_eigenvalue(h: &CMat) -> f64 {
    let m = h.nrows();
    let mut r = RMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            r[(i, j)] = z.re;
            r[(i + m, j + m)] = z.re;
            r[(i, j + m)] = -z.im;
            r[(i + m, j)] = z.im;
        }
    }
    jacobi_eigenvalues(&r)[0]
}

/// Numerical rank by Gaussian elimination with full pivoting.
pub fn rank(m: &RMat, rtol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut r = 0;
    for col in 0..cols {
        let mut piv = (r, col, 0.0f64);
        for i in r..rows {
            for j in col..cols {
                if a[(i, j)].abs() > piv.2 {
                    piv = (i, j, a[(i, j)].abs());
                }
            }
        }
        if piv.2 <= rtol * scale {
            break;
        }
        a.swap_rows(r, piv.0);
        a.swap_columns(col, piv.1);
        for i in r + 1..rows {
            let f = a[(i, col)] / a[(r, col)];
            for j in col..cols {
                let v = a[(r, j)];
                a[(i, j)] -= f * v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn rmat(r: usize, c: usize, v: &[f64]) -> RMat {
    RMat::from_row_slice(r, c, v)
}

/// Deterministic pseudo-random complex vector (splitmix64).
pub fn pseudo_random_vec(m: usize, seed: u64) -> CVec {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    CVec::from_fn(m, |_, _| C64::new(next(), next()))
}

/// Largest distance in a greedy nearest matching of two multisets.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, w) in b.iter().enumerate() {
            let d = (z - w).norm();
            if !used[j] && d < best.1 {
                best = (j, d);
            }
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}
