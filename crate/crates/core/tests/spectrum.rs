mod common;

use hyperdiss::catalog;
use hyperdiss::decay;
use hyperdiss::linalg::{to_complex, CMat, RMat, C64, I};
use hyperdiss::model::Model;
use hyperdiss::props;
use hyperdiss::spectrum::{
    abscissa_at, bound_violation, classify, conjugate_symmetry_residual, eigenvalues_at, log_grid, sweep, Classification, ClassifyConfig,
    SpectrumSweep,
};
use hyperdiss::sphere::SphereSampling;
use hyperdiss::system::{eta, Direction, Envelope, Frequency, HyperbolicSystem};
use hyperdiss::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tim(a: f64) -> Model {
    catalog::timoshenko(a, 1.0).unwrap()
}

fn em() -> Model {
    catalog::euler_maxwell(1.0, 1.0, [0.0, 0.0, 1.0]).unwrap()
}

fn pair() -> SphereSampling {
    SphereSampling::new(1, 2).unwrap()
}

fn grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 61).unwrap()
}

fn classified(sw: &SpectrumSweep) -> hyperdiss::spectrum::DissipativityType {
    match classify(sw, &ClassifyConfig::default()) {
        Classification::Classified(t) => t,
        Classification::Unclassified { reason, .. } => panic!("unclassified: {reason}"),
    }
}

#[test]
fn relaxation_spectrum_at_the_origin() {
    let m = catalog::timoshenko(1.0, 2.0).unwrap();
    let ev = eigenvalues_at(&m.sys, &Frequency::zero(1), None).unwrap();
    let want = [0.0, 0.0, -1.0, -1.0].map(|x| C64::new(x, 0.0));
    assert!(common::multiset_distance(&ev, &want) < 1e-7, "{ev:?}");
}

#[test]
fn origin_abscissa_is_zero_with_nontrivial_kernel() {
    for m in [tim(2.0), tim(1.0), catalog::symmetric_toy().unwrap()] {
        assert_eq!(abscissa_at(&m.sys, &Frequency::zero(1), None).unwrap(), 0.0, "{}", m.name);
    }
}

#[test]
fn pure_transport_has_imaginary_spectrum() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let base = props::random_system(&mut r, 3, 5).unwrap();
    let sys = HyperbolicSystem::new(base.a0().clone(), base.a_matrices().to_vec(), RMat::zeros(5, 5)).unwrap();
    for s in [1e-2, 1.0, 30.0] {
        let d = Direction::normalized(&[0.3, -0.5, 0.8]).unwrap();
        let ev = eigenvalues_at(&sys, &Frequency::from_polar(s, &d), None).unwrap();
        let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(ev.iter().all(|z| z.re.abs() < 1e-12 * scale), "{ev:?}");
    }
}

#[test]
fn euler_maxwell_static_modes_vanish_on_the_constraint_subspace() {
    let m = em();
    let cb = m.constraint.as_ref().unwrap();
    let d = Direction::normalized(&[0.48, 0.6, 0.64]).unwrap();
    for s in log_grid(1e-2, 1e2, 9).unwrap() {
        let f = Frequency::from_polar(s, &d);
        let full = abscissa_at(&m.sys, &f, None).unwrap();
        assert!(full.abs() < 1e-10, "unrestricted abscissa {full:e} at s = {s}");
        let restricted = eigenvalues_at(&m.sys, &f, Some(cb)).unwrap();
        assert!(restricted.iter().all(|z| z.re < -1e-8), "s = {s}: {restricted:?}");
        // N(ξ) has codimension m₁ = 2
        assert_eq!(restricted.len(), 8);
    }
}

#[test]
fn broken_constraint_is_reported_as_not_invariant() {
    let m = em();
    let cb = m.constraint.as_ref().unwrap();
    let mut r = cb.r().clone();
    r[(0, 0)] += 2.0;
    let bad = hyperdiss::constraint::ConstraintBlock::new(cb.q_matrices().to_vec(), r).unwrap();
    let f = Frequency::new(vec![0.3, 0.2, 0.9]);
    let err = eigenvalues_at(&m.sys, &f, Some(&bad)).unwrap_err();
    assert!(matches!(err, Error::NotInvariant(_)));
    assert!(err.to_string().contains("constraint subspace not invariant"));
}

#[test]
fn eigenvalues_are_roots_of_the_dispersion_relation() {
    for (m, raw) in [(tim(2.0), vec![1.7]), (em(), vec![0.4, -1.1, 2.3])] {
        let sys = &m.sys;
        let f = Frequency::new(raw);
        let a0 = to_complex(sys.a0());
        let sym = to_complex(&sys.combine(f.xi())).map(|x| I * x) + to_complex(sys.l());
        for lam in eigenvalues_at(sys, &f, None).unwrap() {
            let p: CMat = &a0 * lam + &sym;
            let scale = p.norm().powi(p.nrows() as i32);
            assert!(p.determinant().norm() < 1e-6 * scale, "{}: λ = {lam}", m.name);
        }
    }
}

#[test]
fn timoshenko_types_follow_the_wave_speed_ratio() {
    for (a, want) in [(2.0, (1, 2)), (1.0, (1, 1)), (0.5, (1, 2))] {
        let m = tim(a);
        let sw = sweep(&m.sys, &grid(), &pair(), None).unwrap();
        let t = classified(&sw);
        assert_eq!((t.p, t.q), want, "a = {a}");
        assert!(t.c > 0.0);
        let (lo, hi) = (t.fit.low.unwrap(), t.fit.high.unwrap());
        assert!(lo.residual < 0.15 && hi.residual < 0.15);
        assert!((lo.slope - 2.0).abs() < 0.2);
        let high_target = if want.1 == 2 { -2.0 } else { 0.0 };
        assert!((hi.slope - high_target).abs() < 0.2, "a = {a}: high slope {}", hi.slope);
        assert!(bound_violation(&sw, &t) <= 1e-12);
        assert!(t.notes.is_empty());
    }
}

#[test]
fn damped_wave_is_standard_type() {
    let m = catalog::symmetric_toy().unwrap();
    let sw = sweep(&m.sys, &grid(), &pair(), None).unwrap();
    let t = classified(&sw);
    assert_eq!((t.p, t.q), (1, 1));
}

#[test]
fn euler_maxwell_restricted_is_regularity_loss_type() {
    let m = em();
    let sph = SphereSampling::new(3, 32).unwrap();
    let sw = sweep(&m.sys, &log_grid(1e-3, 1e3, 48).unwrap(), &sph, m.constraint.as_ref()).unwrap();
    assert!(sw.restricted);
    let t = classified(&sw);
    assert_eq!((t.p, t.q), (1, 2));
    assert!(bound_violation(&sw, &t) <= 1e-12);
    let full = sweep(&m.sys, &log_grid(1e-3, 1e3, 48).unwrap(), &sph, None).unwrap();
    assert!(classify(&full, &ClassifyConfig::default()).pq().is_none());
}

#[test]
fn sweep_rejects_short_or_unordered_grids() {
    let m = tim(2.0);
    assert!(matches!(sweep(&m.sys, &log_grid(1e-3, 1e3, 20).unwrap(), &pair(), None), Err(Error::InvalidParameter(_))));
    let mut g = grid();
    g.swap(3, 4);
    assert!(sweep(&m.sys, &g, &pair(), None).is_err());
    assert!(sweep(&m.sys, &log_grid(1e-5, 1e3, 61).unwrap(), &pair(), None).is_err());
    assert!(matches!(sweep(&m.sys, &grid(), &SphereSampling::new(2, 8).unwrap(), None), Err(Error::Dimension(_))));
}

#[test]
fn sweep_is_deterministic_and_round_trips_through_csv() {
    let m = tim(2.0);
    let a = sweep(&m.sys, &grid(), &pair(), None).unwrap();
    let b = hyperdiss::exec::sequential(|| sweep(&m.sys, &grid(), &pair(), None).unwrap());
    assert_eq!(a, b);
    let mut buf = Vec::new();
    a.write_csv(&mut buf).unwrap();
    let back = SpectrumSweep::read_csv(&buf[..]).unwrap();
    assert_eq!(back.s_grid, a.s_grid);
    assert_eq!(back.abscissa, a.abscissa);
    assert_eq!(classify(&back, &ClassifyConfig::default()), classify(&a, &ClassifyConfig::default()));
}

#[test]
fn spectral_gap_over_eta_dominates_the_lyapunov_rate() {
    // a certified rate c gives |û(t)| ≤ C e^{−c η t}|û₀|, hence Re λ ≤ −c η
    let s_grid = log_grid(1e-3, 1e3, 48).unwrap();
    let m = tim(2.0);
    let k = m.k.as_ref().unwrap();
    let tuned = decay::tune_lyapunov(&m.sys, m.s.as_ref(), k, None, Envelope::Eta, &s_grid, &pair()).unwrap();
    let sw = sweep(&m.sys, &s_grid, &pair(), None).unwrap();
    let ratio = sw.s_grid.iter().zip(sw.max_abscissa()).map(|(s, a)| -a / eta(*s)).fold(f64::INFINITY, f64::min);
    assert!(ratio > 0.0);
    assert!(ratio >= tuned.c * (1.0 - 1e-6), "spectral ratio {ratio} below certified rate {}", tuned.c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_is_conjugate_symmetric(seed in any::<u64>(), n in 1usize..=3, m in 2usize..=6, raw in prop::collection::vec(-1.0f64..1.0, 3), ls in -2.0f64..2.0) {
        let sys = props::random_system(&mut ChaCha8Rng::seed_from_u64(seed), n, m).unwrap();
        let Ok(d) = Direction::normalized(&raw[..n]) else { return Ok(()) };
        let s = 10f64.powf(ls);
        let resid = conjugate_symmetry_residual(&sys, s, &d).unwrap();
        // independent check through the characteristic polynomial
        let f = Frequency::from_polar(s, &d);
        let g = sys.generator(&f).unwrap();
        let g_neg = sys.generator(&Frequency::from_polar(s, &d.neg())).unwrap();
        prop_assert!((g_neg - g.map(|z| z.conj())).norm() <= 1e-12 * (1.0 + g.norm()));
        prop_assert!(resid <= 1e-8 * (1.0 + g.norm()), "residual {}", resid);
    }
}
