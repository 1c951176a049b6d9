//! Catalog matrices pinned entry by entry against hand-entered literals.
//!
//! Parameters are dyadic (a = 3, γ = 2, β = 1/2; ρ∞ = 2, p′ = 4) so every
//! product is a single rounding and the comparisons can be exact.

use hyperdiss::catalog::{self, EulerMaxwellParams};
use hyperdiss::compensator::CompensatorSpec;
use hyperdiss::conditions;
use hyperdiss::linalg::RMat;
use hyperdiss::system::{kernel_basis_real, sym_skew_split, Direction, KERNEL_TOL};

/// `r × c` matrix with the given 1-indexed nonzero entries.
fn lit(r: usize, c: usize, entries: &[(usize, usize, f64)]) -> RMat {
    let mut m = RMat::zeros(r, c);
    for &(i, j, v) in entries {
        m[(i - 1, j - 1)] = v;
    }
    m
}

fn assert_exact(name: &str, got: &RMat, want: &RMat) {
    assert_eq!(got.shape(), want.shape(), "{name}: shape");
    for i in 0..got.nrows() {
        for j in 0..got.ncols() {
            assert!(got[(i, j)] == want[(i, j)], "{name}[{},{}]: got {}, want {}", i + 1, j + 1, got[(i, j)], want[(i, j)]);
        }
    }
}

fn assert_rounding(name: &str, got: &RMat, want: &RMat) {
    assert_eq!(got.shape(), want.shape(), "{name}: shape");
    for i in 0..got.nrows() {
        for j in 0..got.ncols() {
            let (g, w) = (got[(i, j)], want[(i, j)]);
            assert!((g - w).abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0), "{name}[{},{}]: got {g}, want {w}", i + 1, j + 1);
            assert_eq!(g == 0.0, w == 0.0, "{name}[{},{}]: sparsity", i + 1, j + 1);
        }
    }
}

/// Kernel spanned exactly by the listed (1-indexed) unit vectors.
fn assert_kernel(name: &str, m: &RMat, units: &[usize]) {
    let ker = kernel_basis_real(m, KERNEL_TOL);
    assert_eq!(ker.dim(), units.len(), "{name}: dimension");
    let p = ker.projector();
    for i in 0..m.nrows() {
        let want = if units.contains(&(i + 1)) { 1.0 } else { 0.0 };
        assert!((p[(i, i)].re - want).abs() < 1e-12, "{name}: projector diagonal {}", i + 1);
    }
}

mod timoshenko {
    use super::*;

    const A: f64 = 3.0;
    const GAMMA: f64 = 2.0;

    fn beta() -> f64 {
        let b = catalog::timoshenko_beta(GAMMA);
        assert_eq!(b, 0.5 * 4.0 * GAMMA / (GAMMA * GAMMA + 4.0));
        assert_eq!(b, 0.5);
        b
    }

    fn parts() -> (RMat, RMat, RMat, RMat) {
        let m = catalog::timoshenko(A, GAMMA).unwrap();
        let k = match m.k.as_ref().unwrap() {
            CompensatorSpec::Constant(rows) => hyperdiss::linalg::from_rows(rows).unwrap(),
            other => panic!("unexpected compensator {other:?}"),
        };
        (m.sys.a_matrices()[0].clone(), m.sys.l().clone(), m.s.clone().unwrap(), k)
    }

    #[test]
    fn coefficient_matrices() {
        let m = catalog::timoshenko(A, GAMMA).unwrap();
        assert_exact("A0", m.sys.a0(), &RMat::identity(4, 4));
        let (a, l, _, _) = parts();
        #[rustfmt::skip]
        let a_lit = lit(4, 4, &[(1, 2, -1.0), (2, 1, -1.0), (3, 4, -A), (4, 3, -A)]);
        assert_exact("A", &a, &a_lit);
        assert_exact("L", &l, &lit(4, 4, &[(1, 4, 1.0), (4, 1, -1.0), (4, 4, GAMMA)]));
    }

    #[test]
    fn s_and_k() {
        let b = beta();
        let (_, _, s, k) = parts();
        assert_exact("S", &s, &lit(4, 4, &[(1, 4, -b), (2, 3, -b * A), (3, 2, -b * A), (4, 1, -b)]));
        assert_exact("K", &k, &lit(4, 4, &[(1, 2, 1.0), (2, 1, -1.0), (3, 4, -1.0), (4, 3, 1.0)]));
    }

    #[test]
    fn products_and_their_parts() {
        let b = beta();
        let (a, l, s, k) = parts();
        assert_exact("SA", &(&s * &a), &lit(4, 4, &[(1, 3, b * A), (2, 4, b * A * A), (3, 1, b * A), (4, 2, b)]));
        assert_exact("SL", &(&s * &l), &lit(4, 4, &[(1, 1, b), (1, 4, -b * GAMMA), (4, 4, -b)]));
        let ka = &k * &a;
        assert_exact("KA", &ka, &lit(4, 4, &[(1, 1, -1.0), (2, 2, 1.0), (3, 3, A), (4, 4, -A)]));

        let c = 0.5 * b * (A * A - 1.0);
        assert_exact("(SA)2", &sym_skew_split(&(&s * &a)).1, &lit(4, 4, &[(2, 4, c), (4, 2, -c)]));
        let sl1 = sym_skew_split(&(&s * &l)).0;
        assert_exact("(SL)1", &sl1, &lit(4, 4, &[(1, 1, b), (1, 4, -b * GAMMA / 2.0), (4, 1, -b * GAMMA / 2.0), (4, 4, -b)]));
        assert_exact("(KA)1", &sym_skew_split(&ka).0, &ka);
        let l1 = sym_skew_split(&l).0;
        assert_exact("L1", &l1, &lit(4, 4, &[(4, 4, GAMMA)]));
        assert_exact(
            "(SL)1 + L1",
            &(&sl1 + &l1),
            &lit(4, 4, &[(1, 1, b), (1, 4, -b * GAMMA / 2.0), (4, 1, -b * GAMMA / 2.0), (4, 4, GAMMA - b)]),
        );
    }

    #[test]
    fn a_equal_one_makes_sa_symmetric() {
        let m = catalog::timoshenko(1.0, GAMMA).unwrap();
        let sa = m.s.unwrap() * &m.sys.a_matrices()[0];
        assert_exact("(SA)2 at a = 1", &sym_skew_split(&sa).1, &RMat::zeros(4, 4));
    }

    #[test]
    fn kalman_stack_blocks() {
        let (a, l, _, _) = parts();
        let la = &l * &a;
        let la2 = &la * &a;
        let la3 = &la2 * &a;
        assert_exact("LA", &la, &lit(4, 4, &[(1, 3, -A), (4, 2, 1.0), (4, 3, -GAMMA * A)]));
        assert_exact("LA^2", &la2, &lit(4, 4, &[(1, 4, A * A), (4, 1, -1.0), (4, 4, GAMMA * A * A)]));
        assert_exact("LA^3", &la3, &lit(4, 4, &[(1, 3, -A * A * A), (4, 2, 1.0), (4, 3, -GAMMA * A * A * A)]));
        let stack = conditions::kalman_stack(&catalog::timoshenko(A, GAMMA).unwrap().sys, &Direction::axis(1, 0)).unwrap();
        assert_eq!(stack.shape(), (16, 4));
        assert_exact("stack rows 5..8", &stack.rows(4, 4).into_owned(), &la);
    }

    #[test]
    fn kernels() {
        let (_, l, _, _) = parts();
        assert_kernel("Ker(L)", &l, &[2, 3]);
        assert_kernel("Ker(L1)", &sym_skew_split(&l).0, &[1, 2, 3]);
    }

    #[test]
    fn constant_compensator_is_odd() {
        let m = catalog::timoshenko(A, GAMMA).unwrap();
        let k = m.k.unwrap();
        let plus = k.evaluate(&m.sys, &Direction::axis(1, 0)).unwrap();
        let minus = k.evaluate(&m.sys, &Direction::axis(1, 0).neg()).unwrap();
        assert_exact("K(-1)", &minus, &(-plus));
    }
}

mod euler_maxwell {
    use super::*;

    const RHO: f64 = 2.0;
    const PPRIME: f64 = 4.0;
    const B_INF: [f64; 3] = [0.5, -0.25, 1.0];
    const W: [f64; 3] = [0.48, 0.6, 0.64];

    fn params() -> EulerMaxwellParams {
        EulerMaxwellParams { rho_inf: RHO, p_prime: PPRIME, b_inf: B_INF }
    }

    /// a∞ = p′/ρ∞, b∞ = p′.
    const A_INF: f64 = 2.0;
    const B_COEF: f64 = 4.0;

    fn beta() -> f64 {
        let nb = (B_INF[0] * B_INF[0] + B_INF[1] * B_INF[1] + B_INF[2] * B_INF[2]).sqrt();
        let b = params().beta();
        assert_eq!(b, 0.5 * 4.0 * RHO / (4.0 * RHO + (1.0 + nb) * (1.0 + nb)));
        b
    }

    /// Ω_x as displayed: rows (0, −x₃, x₂), (x₃, 0, −x₁), (−x₂, x₁, 0).
    fn om(x: [f64; 3]) -> [[f64; 3]; 3] {
        [[0.0, -x[2], x[1]], [x[2], 0.0, -x[0]], [-x[1], x[0], 0.0]]
    }

    fn eye(c: f64) -> [[f64; 3]; 3] {
        [[c, 0.0, 0.0], [0.0, c, 0.0], [0.0, 0.0, c]]
    }

    fn scale(c: f64, m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        m.map(|r| r.map(|x| c * x))
    }

    fn add(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = a;
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += b[i][j];
            }
        }
        out
    }

    fn vscale(c: f64, v: [f64; 3]) -> [f64; 3] {
        v.map(|x| c * x)
    }

    enum Blk {
        S(f64),
        Row([f64; 3]),
        Col([f64; 3]),
        M([[f64; 3]; 3]),
    }
    use Blk::*;

    /// Block matrix over the state `(ρ, v, E, B)`; blocks numbered 1..4.
    fn blocks(entries: &[(usize, usize, Blk)]) -> RMat {
        const OFF: [usize; 4] = [0, 1, 4, 7];
        let mut m = RMat::zeros(10, 10);
        for (bi, bj, b) in entries {
            let (r, c) = (OFF[bi - 1], OFF[bj - 1]);
            match b {
                S(x) => m[(r, c)] = *x,
                Row(v) => (0..3).for_each(|k| m[(r, c + k)] = v[k]),
                Col(v) => (0..3).for_each(|k| m[(r + k, c)] = v[k]),
                M(x) => (0..3).for_each(|i| (0..3).for_each(|j| m[(r + i, c + j)] = x[i][j])),
            }
        }
        m
    }

    fn model() -> hyperdiss::model::Model {
        catalog::euler_maxwell(RHO, PPRIME, B_INF).unwrap()
    }

    fn dir() -> Direction {
        Direction::new(W.to_vec()).unwrap()
    }

    #[test]
    fn omega_is_cross_product() {
        let e = [1.5, -2.0, 0.75];
        let o = catalog::omega_matrix(&W);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(o[(i, j)], om(W)[i][j]);
            }
        }
        let cross = [W[1] * e[2] - W[2] * e[1], W[2] * e[0] - W[0] * e[2], W[0] * e[1] - W[1] * e[0]];
        for i in 0..3 {
            let oe: f64 = (0..3).map(|j| o[(i, j)] * e[j]).sum();
            assert!((oe - cross[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficient_matrices() {
        let p = params();
        assert_eq!(p.a_inf(), A_INF);
        assert_eq!(p.b_coef(), B_COEF);
        let m = model();
        assert_exact("A0", m.sys.a0(), &blocks(&[(1, 1, S(A_INF)), (2, 2, M(eye(RHO))), (3, 3, M(eye(1.0))), (4, 4, M(eye(1.0)))]));
        let xi = [1.5, -2.0, 0.25];
        let a_lit = blocks(&[
            (1, 2, Row(vscale(B_COEF, xi))),
            (2, 1, Col(vscale(B_COEF, xi))),
            (3, 4, M(scale(-1.0, om(xi)))),
            (4, 3, M(om(xi))),
        ]);
        assert_exact("A(xi)", &m.sys.combine(&xi), &a_lit);
        let l_lit = blocks(&[(2, 2, M(scale(RHO, add(eye(1.0), scale(-1.0, om(B_INF)))))), (2, 3, M(eye(RHO))), (3, 2, M(eye(-RHO)))]);
        assert_exact("L", m.sys.l(), &l_lit);
    }

    #[test]
    fn constraint_matrices() {
        let m = model();
        let cb = m.constraint.unwrap();
        let xi = [1.5, -2.0, 0.25];
        let q_lit = {
            let mut q = RMat::zeros(2, 10);
            (0..3).for_each(|k| q[(0, 4 + k)] = xi[k]);
            (0..3).for_each(|k| q[(1, 7 + k)] = xi[k]);
            q
        };
        assert_exact("Q(xi)", &cb.q_of(&xi), &q_lit);
        assert_exact("R", cb.r(), &lit(2, 10, &[(1, 1, 1.0)]));
        assert_exact("Pi1", cb.pi1(), &lit(2, 2, &[(1, 1, 1.0)]));
        assert_exact("Pi2", cb.pi2(), &lit(2, 2, &[(2, 2, 1.0)]));
        let mut p2q = RMat::zeros(2, 10);
        (0..3).for_each(|k| p2q[(1, 7 + k)] = W[k]);
        assert_exact("Pi2 Q(omega)", &(cb.pi2() * cb.q_of(&W)), &p2q);
    }

    #[test]
    fn symmetric_part_and_kernels() {
        let m = model();
        let l1 = sym_skew_split(m.sys.l()).0;
        assert_exact("L1", &l1, &blocks(&[(2, 2, M(eye(RHO)))]));
        assert_kernel("Ker(L)", m.sys.l(), &[1, 8, 9, 10]);
        assert_kernel("Ker(L1)", &l1, &[1, 5, 6, 7, 8, 9, 10]);
    }

    #[test]
    fn normalized_coefficients() {
        let m = model();
        let d = dir();
        let inv = m.sys.a0_inv().unwrap();
        let at_lit = blocks(&[
            (1, 2, Row(vscale(RHO, W))),
            (2, 1, Col(vscale(A_INF, W))),
            (3, 4, M(scale(-1.0, om(W)))),
            (4, 3, M(om(W))),
        ]);
        assert_exact("A0^-1 A(omega)", &m.sys.a_tilde(&d).unwrap(), &at_lit);
        let al_lit = blocks(&[(2, 2, M(add(eye(1.0), scale(-1.0, om(B_INF))))), (2, 3, M(eye(1.0))), (3, 2, M(eye(-RHO)))]);
        assert_exact("A0^-1 L", &(inv * m.sys.l()), &al_lit);
    }

    #[test]
    fn s_and_k() {
        let b = beta();
        let m = model();
        let s_lit = blocks(&[(2, 3, M(eye(b))), (3, 2, M(eye(b * (1.0 / RHO))))]);
        assert_exact("S", m.s.as_ref().unwrap(), &s_lit);
        let k_lit = blocks(&[
            (1, 2, Row(vscale(1.0 / RHO, W))),
            (2, 1, Col(vscale(-(1.0 / A_INF), W))),
            (3, 4, M(om(W))),
            (4, 3, M(om(W))),
        ]);
        let k = m.k.as_ref().unwrap().evaluate(&m.sys, &dir()).unwrap();
        assert_exact("K(omega)", &k, &k_lit);
        assert_exact("K(omega) closed form", &catalog::euler_maxwell_k(RHO, A_INF, &W), &k_lit);
    }

    #[test]
    fn products_with_s() {
        let b = beta();
        let m = model();
        let s = m.s.clone().unwrap();
        let a = m.sys.combine(&W);
        let l = m.sys.l();
        assert_exact("SA0", &(&s * m.sys.a0()), &blocks(&[(2, 3, M(eye(b))), (3, 2, M(eye(b)))]));
        let sa_lit = blocks(&[(2, 4, M(scale(-b, om(W)))), (3, 1, Col(vscale(b * A_INF, W)))]);
        assert_exact("SA(omega)", &(&s * &a), &sa_lit);
        let sl_lit = blocks(&[(2, 2, M(eye(-b * RHO))), (3, 2, M(scale(b, add(eye(1.0), scale(-1.0, om(B_INF)))))), (3, 3, M(eye(b)))]);
        assert_exact("SL", &(&s * l), &sl_lit);

        let h = 0.5 * b;
        let sa2_lit = blocks(&[
            (1, 3, Row(vscale(-h * A_INF, W))),
            (2, 4, M(scale(-h, om(W)))),
            (3, 1, Col(vscale(h * A_INF, W))),
            (4, 2, M(scale(-h, om(W)))),
        ]);
        assert_exact("(SA(omega))2", &sym_skew_split(&(&s * &a)).1, &sa2_lit);
        let sl1_lit = blocks(&[
            (2, 2, M(eye(-b * RHO))),
            (2, 3, M(scale(h, add(eye(1.0), om(B_INF))))),
            (3, 2, M(scale(h, add(eye(1.0), scale(-1.0, om(B_INF)))))),
            (3, 3, M(eye(b))),
        ]);
        let sl1 = sym_skew_split(&(&s * l)).0;
        assert_exact("(SL)1", &sl1, &sl1_lit);
        let l1 = sym_skew_split(l).0;
        let sum_lit = blocks(&[
            (2, 2, M(eye((1.0 - b) * RHO))),
            (2, 3, M(scale(h, add(eye(1.0), om(B_INF))))),
            (3, 2, M(scale(h, add(eye(1.0), scale(-1.0, om(B_INF)))))),
            (3, 3, M(eye(b))),
        ]);
        assert_exact("(SL)1 + L1", &(&sl1 + &l1), &sum_lit);
    }

    #[test]
    fn products_with_k() {
        let m = model();
        let k = catalog::euler_maxwell_k(RHO, A_INF, &W);
        let ka0_lit = blocks(&[(1, 2, Row(W)), (2, 1, Col(vscale(-1.0, W))), (3, 4, M(om(W))), (4, 3, M(om(W)))]);
        let ka0 = &k * m.sys.a0();
        assert_exact("K(omega)A0", &ka0, &ka0_lit);
        assert_exact("K(omega)A0 skew", &ka0.transpose(), &(-&ka0));

        let o = catalog::omega_matrix(&W);
        let o2 = &o * &o;
        let o2a: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| o2[(i, j)]));
        let ww: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| -RHO * (W[i] * W[j])));
        let ka_lit = blocks(&[(1, 1, S(A_INF)), (2, 2, M(ww)), (3, 3, M(o2a)), (4, 4, M(scale(-1.0, o2a)))]);
        // entries here are sums of several products (a∞|ω|² in the corner),
        // so agreement is to rounding, not bit for bit
        let ka = &k * m.sys.combine(&W);
        assert_rounding("K(omega)A(omega)", &ka, &ka_lit);
        assert_exact("(K(omega)A(omega))1", &sym_skew_split(&ka).0, &ka);
        let kneg = catalog::euler_maxwell_k(RHO, A_INF, &vscale(-1.0, W));
        assert_exact("K(-omega)", &kneg, &(-&k));
    }

    #[test]
    fn t_matrix_and_shifted_part() {
        let b = beta();
        let m = model();
        let cb = m.constraint.as_ref().unwrap();
        let st = m.s_tilde.as_ref().unwrap();
        assert_exact("S_tilde", st, &lit(2, 2, &[(1, 1, b * A_INF), (2, 2, b * A_INF)]));
        let t = conditions::t_matrix(cb, st, &dir());
        assert_exact("T(omega)", &t, &blocks(&[(3, 1, Col(vscale(b * A_INF, W)))]));
        let s = m.s.clone().unwrap();
        let shifted = sym_skew_split(&(&s * m.sys.combine(&W) - &t)).1;
        let h = -0.5 * b;
        assert_exact("(SA(omega) - T(omega))2", &shifted, &blocks(&[(2, 4, M(scale(h, om(W)))), (4, 2, M(scale(h, om(W))))]));
    }
}
