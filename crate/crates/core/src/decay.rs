//! Fourier-mode propagation, Lyapunov certificates for the pointwise
//! estimate `|û(t,ξ)| ≤ C e^{−c·env(ξ)t}|û₀(ξ)|`, constraint conservation
//! and L² decay-rate measurements.
//!
//! The Lyapunov form is
//!
//! ```text
//! E(ξ) = A0 + w₁(s)·SA0 + sign2·w₂(s)·iK(ω)A0
//! ```
//!
//! with `w₁ = α₁/(1+s²)`, `w₂ = α₁α₂αs/(1+s²)²` for the `η` envelope and
//! `w₁ = α₁`, `w₂ = α₁α₂αs/(1+s²)` for `ρ`. Along solutions
//! `d/dt⟨Eû,û⟩ = −⟨Dû,û⟩` with `D = −(EG + GᴴE)`, so `D ⪰ 2c·env·E` on the
//! grid certifies the decay with `C = √(C₀/c₀)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compensator::CompensatorSpec;
use crate::conditions::{self, AlphaCertificate};
use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{self, c, herm, to_complex, CMat, CVec, RMat, I};
use crate::spectrum;
use crate::sphere::SphereSampling;
use crate::system::{Direction, Envelope, Frequency, HyperbolicSystem, KERNEL_TOL};

/// Relative slack on a nonnegative certificate margin.
pub const CERTIFY_RTOL: f64 = 1e-12;
/// Largest admissible `C` in the pointwise fit.
pub const POINTWISE_C_CAP: f64 = 100.0;
/// Smallest admissible `c` in the pointwise fit.
pub const POINTWISE_C_FLOOR: f64 = 1e-4;
/// Initial data must satisfy the constraint to this (relative) accuracy.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// `exp(t·G(ξ))·û₀`.
pub fn propagate_mode(sys: &HyperbolicSystem, f: &Frequency, u0: &CVec, t: f64) -> Result<CVec> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if u0.len() != sys.m() {
        return Err(Error::Dimension(format!("initial vector has {} entries, system has m = {}", u0.len(), sys.m())));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let g = sys.generator(f)?;
    Ok(linalg::expm(&(g * c(t))) * u0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovParams {
    /// Weight of `(KA)₁` from [`conditions::find_alpha`].
    pub alpha: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// `±1`, the sign in front of the `iKA0` term.
    pub sign2: f64,
    pub envelope: Envelope,
}

impl LyapunovParams {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if !(self.alpha > 0.0 && self.alpha.is_finite()) || !ok(self.alpha1) || !ok(self.alpha2) {
            return Err(Error::InvalidParameter(format!(
                "need alpha > 0 and alpha1, alpha2 >= 0, got {}, {}, {}",
                self.alpha, self.alpha1, self.alpha2
            )));
        }
        if self.sign2 != 1.0 && self.sign2 != -1.0 {
            return Err(Error::InvalidParameter(format!("sign2 must be +1 or -1, got {}", self.sign2)));
        }
        Ok(())
    }

    /// `(w₁(s), w₂(s))`.
    pub fn weights(&self, s: f64) -> (f64, f64) {
        let d = 1.0 + s * s;
        let w2 = self.alpha1 * self.alpha2 * self.alpha * s;
        match self.envelope {
            Envelope::Eta => (self.alpha1 / d, w2 / (d * d)),
            Envelope::Rho => (self.alpha1, w2 / d),
        }
    }
}

/// The three Hermitian ingredients `A0`, `SA0`, `iK(ω)A0` at `ξ`; the last
/// vanishes at `ξ = 0`.
fn lyapunov_parts(sys: &HyperbolicSystem, s_mat: Option<&RMat>, k: &CompensatorSpec, f: &Frequency) -> Result<[CMat; 3]> {
    let m = sys.m();
    let e0 = to_complex(sys.a0());
    let e1 = match s_mat {
        Some(s) => {
            if s.shape() != (m, m) {
                return Err(Error::Dimension(format!("S is {:?}, expected ({m}, {m})", s.shape())));
            }
            to_complex(&linalg::sym(&(s * sys.a0())))
        }
        None => CMat::zeros(m, m),
    };
    let e2 = match f.omega() {
        Some(d) => herm(&(to_complex(&(k.evaluate(sys, &d)? * sys.a0())) * I)),
        None => CMat::zeros(m, m),
    };
    Ok([e0, e1, e2])
}

fn combine(parts: &[CMat; 3], w1: f64, w2: f64) -> CMat {
    &parts[0] + &parts[1] * c(w1) + &parts[2] * c(w2)
}

/// Matrix of the Lyapunov functional at `ξ`.
pub fn lyapunov_matrix(sys: &HyperbolicSystem, s_mat: Option<&RMat>, k: &CompensatorSpec, f: &Frequency, p: &LyapunovParams) -> Result<CMat> {
    p.validate()?;
    let parts = lyapunov_parts(sys, s_mat, k, f)?;
    let (w1, w2) = p.weights(f.s());
    let e = herm(&combine(&parts, w1, p.sign2 * w2));
    let lmin = linalg::min_hermitian_eigenvalue(&e);
    if !(lmin > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha1/alpha2 too large: Lyapunov matrix not positive definite at s = {} (lambda_min = {lmin:e})",
            f.s()
        )));
    }
    Ok(e)
}

/// `−(EG + GᴴE)`.
fn dissipation_of(e: &CMat, g: &CMat) -> CMat {
    herm(&-(e * g + g.adjoint() * e))
}

fn restrict(m: &CMat, b: &CMat) -> CMat {
    herm(&(b.adjoint() * m * b))
}

/// Orthonormal basis of the modes analysed at `ξ`: `N(ξ)` with a
/// constraint, everything otherwise.
fn mode_basis(sys: &HyperbolicSystem, f: &Frequency, cb: Option<&ConstraintBlock>) -> Result<CMat> {
    match cb {
        Some(cb) => {
            if cb.m() != sys.m() || cb.n() != sys.n() {
                return Err(Error::Dimension("constraint block does not match the system".into()));
            }
            let b = cb.admissible(f, KERNEL_TOL).basis;
            if b.ncols() == 0 {
                return Err(Error::VacuousSubspace);
            }
            Ok(b)
        }
        None => Ok(CMat::identity(sys.m(), sys.m())),
    }
}

fn check_grid(sys: &HyperbolicSystem, s_grid: &[f64], sph: &SphereSampling) -> Result<()> {
    if s_grid.is_empty() || s_grid.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter("s grid must be nonempty with positive entries".into()));
    }
    if sph.n() != sys.n() {
        return Err(Error::Dimension(format!("sphere sampling is in dimension {}, system has n = {}", sph.n(), sys.n())));
    }
    Ok(())
}

/// Per-sample data shared by certification and tuning.
struct Sample {
    s: f64,
    omega: usize,
    env: f64,
    /// `E` ingredients on the full space, for the definiteness check.
    full: [CMat; 3],
    /// `E` and `D` ingredients restricted to the mode basis.
    e: [CMat; 3],
    d: [CMat; 3],
}

fn samples(
    sys: &HyperbolicSystem,
    s_mat: Option<&RMat>,
    k: &CompensatorSpec,
    cb: Option<&ConstraintBlock>,
    envelope: Envelope,
    s_grid: &[f64],
    sph: &SphereSampling,
) -> Result<Vec<Sample>> {
    check_grid(sys, s_grid, sph)?;
    let pts = sph.points();
    let np = pts.len();
    exec::try_map(s_grid.len() * np, |idx| {
        let s = s_grid[idx / np];
        let f = Frequency::from_polar(s, &pts[idx % np]);
        let g = sys.generator(&f)?;
        let b = mode_basis(sys, &f, cb)?;
        let full = lyapunov_parts(sys, s_mat, k, &f)?;
        let e = [restrict(&full[0], &b), restrict(&full[1], &b), restrict(&full[2], &b)];
        let d = [
            restrict(&dissipation_of(&full[0], &g), &b),
            restrict(&dissipation_of(&full[1], &g), &b),
            restrict(&dissipation_of(&full[2], &g), &b),
        ];
        Ok(Sample { s, omega: idx % np, env: envelope.eval(s), full, e, d })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub params: LyapunovParams,
    pub c: f64,
    /// `min λ_min(D − 2c·env·E)` over the grid.
    pub margin: f64,
    pub tolerance: f64,
    pub certified: bool,
    pub worst_s: f64,
    pub worst_omega: Vec<f64>,
    /// Bounds `c₀|z|² ≤ ⟨Ez,z⟩ ≤ C₀|z|²` over the grid.
    pub c0: f64,
    pub c0_upper: f64,
    /// `√(C₀/c₀)`.
    pub constant: f64,
    pub samples: usize,
    pub restricted: bool,
}

fn certify_samples(p: &LyapunovParams, c_rate: f64, smp: &[Sample], sph: &SphereSampling, restricted: bool) -> Result<DecayCertificate> {
    let rows = exec::try_map(smp.len(), |i| -> Result<(f64, f64, f64, f64)> {
        let x = &smp[i];
        let (w1, w2) = p.weights(x.s);
        let w2 = p.sign2 * w2;
        let full = herm(&combine(&x.full, w1, w2));
        let lmin_full = linalg::min_hermitian_eigenvalue(&full);
        if !(lmin_full > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha1/alpha2 too large: Lyapunov matrix not positive definite at s = {} (lambda_min = {lmin_full:e})",
                x.s
            )));
        }
        let e = herm(&combine(&x.e, w1, w2));
        let d = herm(&combine(&x.d, w1, w2));
        let ev = linalg::hermitian_eigenvalues(&e);
        let h = &d - &e * c(2.0 * c_rate * x.env);
        Ok((linalg::min_hermitian_eigenvalue(&h), d.norm(), ev[0], ev[ev.len() - 1]))
    })?;
    let mut worst = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.0 < rows[worst].0 {
            worst = i;
        }
    }
    let margin = rows[worst].0;
    let tolerance = CERTIFY_RTOL * rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let c0 = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let c0_upper = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    Ok(DecayCertificate {
        params: *p,
        c: c_rate,
        margin,
        tolerance,
        certified: margin >= -tolerance,
        worst_s: smp[worst].s,
        worst_omega: sph.points()[smp[worst].omega].as_slice().to_vec(),
        c0,
        c0_upper,
        constant: (c0_upper / c0).sqrt(),
        samples: smp.len(),
        restricted,
    })
}

/// Check `D − 2c·env·E ⪰ 0` at every `(s, ω)` of the grid. With a
/// constraint block both forms are taken on `N(ξ)`.
#[allow(clippy::too_many_arguments)]
pub fn certify_decay(
    sys: &HyperbolicSystem,
    s_mat: Option<&RMat>,
    k: &CompensatorSpec,
    cb: Option<&ConstraintBlock>,
    p: &LyapunovParams,
    c_rate: f64,
    s_grid: &[f64],
    sph: &SphereSampling,
) -> Result<DecayCertificate> {
    p.validate()?;
    if !(c_rate >= 0.0 && c_rate.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay rate must be nonnegative, got {c_rate}")));
    }
    let smp = samples(sys, s_mat, k, cb, p.envelope, s_grid, sph)?;
    certify_samples(p, c_rate, &smp, sph, cb.is_some())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovTuning {
    pub params: LyapunovParams,
    /// Certified rate.
    pub c: f64,
    /// Supremum of certifiable rates for `params` on the grid.
    pub c_star: f64,
    pub alpha: AlphaCertificate,
    pub certificate: DecayCertificate,
    /// Number of distinct `(α₁, α₂, sign2)` evaluated.
    pub evaluations: usize,
}

/// Search `α₁, α₂ ∈ {2⁻¹, …, 2⁻²⁰}`, `sign2 = ±1` for the largest
/// certifiable rate, then certify it.
///
/// For fixed parameters the supremum of certifiable `c` is
/// `min over the grid of λ_min(D, E)/(2·env)` (generalized eigenvalue), so
/// each candidate is scored exactly. Candidates whose `E` drops below half of
/// `λ_min(A0)` are rejected.
#[allow(clippy::too_many_arguments)]
pub fn tune_lyapunov(
    sys: &HyperbolicSystem,
    s_mat: Option<&RMat>,
    k: &CompensatorSpec,
    cb: Option<&ConstraintBlock>,
    envelope: Envelope,
    s_grid: &[f64],
    sph: &SphereSampling,
) -> Result<LyapunovTuning> {
    let alpha = conditions::find_alpha(sys, s_mat, k, sph, cb)?;
    let smp = samples(sys, s_mat, k, cb, envelope, s_grid, sph)?;
    let floor = 0.5 * linalg::sym(sys.a0()).symmetric_eigenvalues().min();
    let params = |j1: u32, j2: u32, sign2: f64| LyapunovParams {
        alpha: alpha.best_alpha,
        alpha1: 0.5f64.powi(j1 as i32),
        alpha2: 0.5f64.powi(j2 as i32),
        sign2,
        envelope,
    };
    // (rate, index of the limiting sample)
    let score = |p: &LyapunovParams| -> (f64, usize) {
        let rows = exec::map(smp.len(), |i| {
            let x = &smp[i];
            let (w1, w2) = p.weights(x.s);
            let w2 = p.sign2 * w2;
            if linalg::min_hermitian_eigenvalue(&combine(&x.full, w1, w2)) < floor {
                return f64::NEG_INFINITY;
            }
            let e = combine(&x.e, w1, w2);
            let d = combine(&x.d, w1, w2);
            match linalg::min_generalized_eigenvalue(&d, &e) {
                Some(l) => l / (2.0 * x.env),
                None => f64::NEG_INFINITY,
            }
        });
        let mut worst = 0;
        for (i, r) in rows.iter().enumerate() {
            if r < &rows[worst] {
                worst = i;
            }
        }
        (rows[worst], worst)
    };

    let mut cache: HashMap<(u32, u32, i8), (f64, usize)> = HashMap::new();
    let mut eval = |j1: u32, j2: u32, sg: f64| -> f64 { cache.entry((j1, j2, sg as i8)).or_insert_with(|| score(&params(j1, j2, sg))).0 };
    let mut best = (f64::NEG_INFINITY, 1, 1, 1.0);
    for sg in [1.0, -1.0] {
        let (mut j1, mut j2) = (1u32, 1u32);
        let mut cur = eval(j1, j2, sg);
        for _round in 0..4 {
            let before = (j1, j2);
            for cand in 1..=20 {
                let v = eval(cand, j2, sg);
                if v > cur {
                    cur = v;
                    j1 = cand;
                }
            }
            for cand in 1..=20 {
                let v = eval(j1, cand, sg);
                if v > cur {
                    cur = v;
                    j2 = cand;
                }
            }
            if (j1, j2) == before {
                break;
            }
        }
        if cur > best.0 {
            best = (cur, j1, j2, sg);
        }
    }
    let evaluations = cache.len();
    let (c_star, j1, j2, sg) = best;
    let p = params(j1, j2, sg);
    if !(c_star > 0.0) {
        let (_, worst) = score(&p);
        let w = &smp[worst];
        return Err(Error::SearchFailed(format!(
            "no Lyapunov parameters certify a positive rate (best {c_star:e}); worst sample s = {:e}, omega = {:?}",
            w.s,
            sph.points()[w.omega].as_slice()
        )));
    }
    let mut rate = 0.99 * c_star;
    for _ in 0..40 {
        let cert = certify_samples(&p, rate, &smp, sph, cb.is_some())?;
        if cert.certified {
            return Ok(LyapunovTuning { params: p, c: rate, c_star, alpha, certificate: cert, evaluations });
        }
        rate *= 0.5;
    }
    Err(Error::SearchFailed(format!("certificate at rate {c_star:e} could not be confirmed")))
}

/// `[0] ∪` 41 log-spaced times on `[1e-2, 1e6]`.
pub fn default_pointwise_times() -> Vec<f64> {
    let mut t = vec![0.0];
    t.extend(spectrum::log_grid(1e-2, 1e6, 41).expect("valid grid"));
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub s: f64,
    pub omega: Vec<f64>,
    pub t: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseFit {
    pub envelope: Envelope,
    /// Largest `c` with `max ‖e^{tG}‖·e^{c·env·t} ≤ 100`, if at least `1e-4`.
    pub c_fit: Option<f64>,
    /// Smallest `C` for `c_fit`.
    pub constant: Option<f64>,
    /// Samples exceeding the cap at `c = 1e-4`; empty when the fit succeeds.
    pub violations: Vec<Violation>,
    pub max_norm: f64,
}

impl PointwiseFit {
    pub fn fits(&self) -> bool {
        self.c_fit.is_some()
    }
}

/// `‖exp(tG(ξ))‖₂` on the mode basis for every `(s, ω)` and `t`.
pub fn propagator_norms(
    sys: &HyperbolicSystem,
    cb: Option<&ConstraintBlock>,
    s_grid: &[f64],
    sph: &SphereSampling,
    t_grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    check_grid(sys, s_grid, sph)?;
    if t_grid.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::InvalidParameter("times must be nonnegative".into()));
    }
    let pts = sph.points();
    let np = pts.len();
    exec::try_map(s_grid.len() * np, |idx| -> Result<Vec<f64>> {
        let f = Frequency::from_polar(s_grid[idx / np], &pts[idx % np]);
        // exp(tG)B = B exp(t BᴴGB) on the invariant subspace
        let h = match cb {
            Some(cb) => spectrum::restricted_generator(sys, &f, cb)?.0,
            None => sys.generator(&f)?,
        };
        Ok(t_grid
            .iter()
            .map(|&t| if t == 0.0 { 1.0 } else { linalg::spectral_norm(&linalg::expm(&(&h * c(t)))) })
            .collect())
    })
}

/// Fit `‖exp(tG)‖ ≤ C e^{−c·env(s)t}` with `C ≤ 100`, `c ≥ 1e-4` over the
/// grid.
pub fn pointwise_check(
    sys: &HyperbolicSystem,
    cb: Option<&ConstraintBlock>,
    s_grid: &[f64],
    sph: &SphereSampling,
    envelope: Envelope,
    t_grid: &[f64],
) -> Result<PointwiseFit> {
    let norms = propagator_norms(sys, cb, s_grid, sph, t_grid)?;
    let np = sph.len();
    let env: Vec<f64> = s_grid.iter().map(|&s| envelope.eval(s)).collect();
    let log_c = |rate: f64| -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (idx, row) in norms.iter().enumerate() {
            let e = env[idx / np];
            for (n, t) in row.iter().zip(t_grid) {
                worst = worst.max(n.ln() + rate * e * t);
            }
        }
        worst
    };
    let cap = POINTWISE_C_CAP.ln();
    let max_norm = norms.iter().flatten().copied().fold(0.0, f64::max);
    if log_c(POINTWISE_C_FLOOR) > cap {
        let mut violations = Vec::new();
        for (idx, row) in norms.iter().enumerate() {
            let e = env[idx / np];
            for (&n, &t) in row.iter().zip(t_grid) {
                if n.ln() + POINTWISE_C_FLOOR * e * t > cap {
                    violations.push(Violation { s: s_grid[idx / np], omega: sph.points()[idx % np].as_slice().to_vec(), t, norm: n });
                }
            }
        }
        return Ok(PointwiseFit { envelope, c_fit: None, constant: None, violations, max_norm });
    }
    let (mut lo, mut hi) = (POINTWISE_C_FLOOR, 2.0 * POINTWISE_C_FLOOR);
    while log_c(hi) <= cap && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
    }
    if log_c(hi) > cap {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if log_c(mid) <= cap {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        lo = hi;
    }
    Ok(PointwiseFit { envelope, c_fit: Some(lo), constant: Some(log_c(lo).exp()), violations: Vec::new(), max_norm })
}

/// `max ‖exp(tG)‖·e^{c·env·t}/C` over the grid; at most 1 when the bound holds.
pub fn pointwise_ratio(norms: &[Vec<f64>], s_grid: &[f64], t_grid: &[f64], envelope: Envelope, constant: f64, rate: f64) -> f64 {
    let np = norms.len() / s_grid.len().max(1);
    let mut worst: f64 = 0.0;
    for (idx, row) in norms.iter().enumerate() {
        let e = envelope.eval(s_grid[idx / np]);
        for (n, t) in row.iter().zip(t_grid) {
            worst = worst.max(n * (rate * e * t).exp() / constant);
        }
    }
    worst
}

/// `max_t |(i|ξ|Q(ω) + R) û(t)|` for admissible initial data.
pub fn constraint_drift(sys: &HyperbolicSystem, cb: &ConstraintBlock, f: &Frequency, u0: &CVec, t_grid: &[f64]) -> Result<f64> {
    if cb.m() != sys.m() || cb.n() != sys.n() {
        return Err(Error::Dimension("constraint block does not match the system".into()));
    }
    let op = cb.operator(f);
    let r0 = (&op * u0).norm();
    if r0 > CONSTRAINT_TOL * u0.norm().max(1.0) {
        return Err(Error::ConstraintViolated(r0));
    }
    let g = sys.generator(f)?;
    let mut drift: f64 = 0.0;
    for &t in t_grid {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
        }
        let u = linalg::expm(&(&g * c(t))) * u0;
        drift = drift.max((&op * u).norm());
    }
    Ok(drift)
}

/// Radial profile `|û₀|(s)` of the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    Gaussian { width: f64 },
    /// Indicator of `s₀ ≤ s ≤ s₁`.
    Ring { s0: f64, s1: f64 },
    /// `(1+s²)^{−σ/2}` on `s ≥ 1`, zero below; `None` picks
    /// `σ = k + ℓ + n/2 + 1/4`.
    Powerlaw { sigma: Option<f64> },
}

impl Profile {
    pub fn eval(&self, s: f64, sigma: f64) -> f64 {
        match *self {
            Profile::Gaussian { width } => (-0.5 * (width * s).powi(2)).exp(),
            Profile::Ring { s0, s1 } => {
                if s >= s0 && s <= s1 {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Powerlaw { .. } => {
                if s >= 1.0 {
                    (1.0 + s * s).powf(-0.5 * sigma)
                } else {
                    0.0
                }
            }
        }
    }

    /// Exponent actually used by the powerlaw profile.
    pub fn sigma(&self, n: usize, k: u32, ell: u32) -> f64 {
        match *self {
            Profile::Powerlaw { sigma: Some(s) } => s,
            _ => k as f64 + ell as f64 + n as f64 / 2.0 + 0.25,
        }
    }

    /// Predicted long-time slope of `log ‖∂ₓᵏu‖` against `log(1+t)`.
    pub fn target_slope(&self, n: usize, k: u32, ell: u32) -> Option<f64> {
        match self {
            Profile::Gaussian { .. } => Some(-(n as f64 / 4.0 + k as f64 / 2.0)),
            Profile::Powerlaw { .. } => Some(-(ell as f64) / 2.0),
            Profile::Ring { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Profile::Gaussian { width } => width > 0.0 && width.is_finite(),
            Profile::Ring { s0, s1 } => s0 > 0.0 && s1 > s0 && s1.is_finite(),
            Profile::Powerlaw { sigma } => sigma.is_none_or(|s| s > 0.0 && s.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid profile {self}")))
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Gaussian { width } => write!(f, "gaussian:{width}"),
            Profile::Ring { s0, s1 } => write!(f, "ring:{s0},{s1}"),
            Profile::Powerlaw { sigma: Some(s) } => write!(f, "powerlaw:{s}"),
            Profile::Powerlaw { sigma: None } => write!(f, "powerlaw"),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    /// `gaussian:<width>`, `ring:<s0>,<s1>`, `powerlaw` or `powerlaw:<sigma>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("profile arguments '{args}' are not numbers")))?
        };
        let p = match (kind, nums.as_slice()) {
            ("gaussian", []) => Profile::Gaussian { width: 1.0 },
            ("gaussian", [w]) => Profile::Gaussian { width: *w },
            ("ring", [a, b]) => Profile::Ring { s0: *a, s1: *b },
            ("powerlaw", []) => Profile::Powerlaw { sigma: None },
            ("powerlaw", [x]) => Profile::Powerlaw { sigma: Some(*x) },
            _ => return Err(Error::Parse(format!("unknown profile '{s}' (gaussian:<w>, ring:<s0>,<s1>, powerlaw[:<sigma>])"))),
        };
        p.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(p)
    }
}

/// Log-spaced radial nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialQuadrature {
    pub nodes: usize,
    pub s_min: f64,
    pub s_max: f64,
}

impl Default for RadialQuadrature {
    fn default() -> Self {
        RadialQuadrature { nodes: 512, s_min: 1e-4, s_max: 1e4 }
    }
}

/// `|S^{n−1}|`.
pub fn sphere_measure(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_measure(n - 2),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub profile: Profile,
    pub k: u32,
    pub ell: u32,
    pub t_grid: Vec<f64>,
    pub norms: Vec<f64>,
    pub local_slope: Vec<f64>,
    pub fitted_slope: f64,
    pub target_slope: Option<f64>,
    pub window: (f64, f64),
}

/// `[0] ∪` 61 log-spaced times on `[1e-2, t_max]`.
pub fn default_decay_times(t_max: f64) -> Result<Vec<f64>> {
    let mut t = vec![0.0];
    t.extend(spectrum::log_grid(1e-2, t_max, 61)?);
    Ok(t)
}

/// Unit initial direction `(1, …, 1)/√m`, projected onto the mode basis.
fn initial_direction(b: &CMat) -> CVec {
    let m = b.nrows();
    let v = CVec::from_element(m, c(1.0 / (m as f64).sqrt()));
    let p = b * (b.adjoint() * &v);
    let n = p.norm();
    if n > 1e-8 {
        p / c(n)
    } else {
        b.column(0).into_owned()
    }
}

/// `‖∂ₓᵏu(t)‖` for radial data `û₀(ξ) = f(|ξ|)·v(ξ)` by log-trapezoid
/// quadrature in `s` and averaging over the sphere sampling, then a
/// least-squares slope of `log‖·‖` against `log(1+t)` over `window`
/// (the last decade of `t_grid` by default).
#[allow(clippy::too_many_arguments)]
pub fn l2_decay_fit(
    sys: &HyperbolicSystem,
    cb: Option<&ConstraintBlock>,
    profile: Profile,
    k: u32,
    ell: u32,
    t_grid: &[f64],
    quad: &RadialQuadrature,
    sph: &SphereSampling,
    window: Option<(f64, f64)>,
) -> Result<DecayFit> {
    profile.validate()?;
    if quad.nodes < 512 || !(quad.s_min > 0.0 && quad.s_max > quad.s_min) {
        return Err(Error::InvalidParameter("radial quadrature needs at least 512 nodes on 0 < s_min < s_max".into()));
    }
    if t_grid.len() < 2 || t_grid[0] < 0.0 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("t grid must be increasing, nonnegative, with at least two points".into()));
    }
    if sph.n() != sys.n() {
        return Err(Error::Dimension(format!("sphere sampling is in dimension {}, system has n = {}", sph.n(), sys.n())));
    }
    let n = sys.n();
    let sigma = profile.sigma(n, k, ell);
    let nodes = spectrum::log_grid(quad.s_min, quad.s_max, quad.nodes)?;
    let h = (quad.s_max / quad.s_min).ln() / (quad.nodes - 1) as f64;
    let pts = sph.points();
    let np = pts.len();
    let radial_power = (2 * k as usize + n - 1) as i32;

    // contribution[node][t] = w_i · s^{2k+n−1} · f² · avg_ω |e^{tG}v|²
    let contrib = exec::try_map(nodes.len(), |i| -> Result<Vec<f64>> {
        let s = nodes[i];
        let f = profile.eval(s, sigma);
        if f == 0.0 {
            return Ok(vec![0.0; t_grid.len()]);
        }
        let mut w = h * s;
        if i == 0 || i == nodes.len() - 1 {
            w *= 0.5;
        }
        let weight = w * s.powi(radial_power) * f * f / np as f64;
        let mut acc = vec![0.0; t_grid.len()];
        for d in pts {
            let freq = Frequency::from_polar(s, d);
            let g = sys.generator(&freq)?;
            let b = mode_basis(sys, &freq, cb)?;
            let v = initial_direction(&b);
            for (j, &t) in t_grid.iter().enumerate() {
                let u = if t == 0.0 { v.clone() } else { linalg::expm(&(&g * c(t))) * &v };
                acc[j] += weight * u.norm_squared();
            }
        }
        Ok(acc)
    })?;

    let measure = sphere_measure(n);
    let first = &contrib[0];
    let mut norms = Vec::with_capacity(t_grid.len());
    for j in 0..t_grid.len() {
        // fixed summation order by node index
        let mut total: f64 = contrib.iter().map(|r| r[j]).sum();
        // ∫₀^{s_min}: the integrand behaves like s^{2k+n−1}
        total += 2.0 * first[j] / (h * (n + 2 * k as usize) as f64);
        let last = contrib[contrib.len() - 1][j];
        if total > 0.0 && last > 1e-6 * total {
            return Err(Error::Quadrature(format!("last node carries {:.2e} of the total at t = {}", last / total, t_grid[j])));
        }
        if !(total > 0.0) {
            return Err(Error::Quadrature(format!("zero norm at t = {}; the profile misses the quadrature range", t_grid[j])));
        }
        norms.push((measure * total).sqrt());
    }

    let x: Vec<f64> = t_grid.iter().map(|t| (1.0 + t).ln()).collect();
    let y: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let local_slope = local_slopes(&x, &y);
    let t_end = t_grid[t_grid.len() - 1];
    let window = window.unwrap_or((t_end / 10.0, t_end));
    let (wx, wy): (Vec<f64>, Vec<f64>) =
        x.iter().zip(&y).zip(t_grid).filter(|(_, t)| **t >= window.0 && **t <= window.1).map(|((a, b), _)| (*a, *b)).unzip();
    let fitted_slope = spectrum::ls_slope(&wx, &wy)
        .ok_or_else(|| Error::InvalidParameter(format!("fit window [{}, {}] holds fewer than two times", window.0, window.1)))?;
    Ok(DecayFit {
        profile,
        k,
        ell,
        t_grid: t_grid.to_vec(),
        norms,
        local_slope,
        fitted_slope,
        target_slope: profile.target_slope(n, k, ell),
        window,
    })
}

/// Central differences of `y` against `x`, one-sided at the ends.
pub fn local_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1.min(n - 1)),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            if a == b {
                0.0
            } else {
                (y[b] - y[a]) / (x[b] - x[a])
            }
        })
        .collect()
}

impl DecayFit {
    /// CSV with columns `t, norm, local_slope`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "norm", "local_slope"])?;
        for ((t, n), s) in self.t_grid.iter().zip(&self.norms).zip(&self.local_slope) {
            wr.write_record([format!("{t:e}"), format!("{n:e}"), format!("{s:e}")])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// `(d/dt ⟨A0û,û⟩, −2⟨L₁û,û⟩)` at time `t` along the mode, the first by
/// central differences with step `h`.
pub fn energy_rates(sys: &HyperbolicSystem, f: &Frequency, u0: &CVec, t: f64, h: f64) -> Result<(f64, f64)> {
    let a0 = to_complex(sys.a0());
    let l1 = to_complex(&sys.l1());
    let energy = |u: &CVec| u.dotc(&(&a0 * u)).re;
    let up = propagate_mode(sys, f, u0, t + h)?;
    let um = propagate_mode(sys, f, u0, (t - h).max(0.0))?;
    let fd = (energy(&up) - energy(&um)) / (t + h - (t - h).max(0.0));
    let u = propagate_mode(sys, f, u0, t)?;
    Ok((fd, -2.0 * u.dotc(&(&l1 * &u)).re))
}

/// Unit direction at `omega`.
pub fn frequency(s: f64, omega: &[f64]) -> Result<Frequency> {
    Ok(Frequency::from_polar(s, &Direction::normalized(omega)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zero_time_is_identity() {
        let m = catalog::timoshenko(2.0, 1.0).unwrap();
        let u = CVec::from_fn(4, |i, _| c(i as f64 + 1.0));
        let f = frequency(1.0, &[1.0]).unwrap();
        assert_eq!(propagate_mode(&m.sys, &f, &u, 0.0).unwrap(), u);
        assert!(propagate_mode(&m.sys, &f, &u, -1.0).is_err());
    }

    #[test]
    fn zero_weights_give_a0() {
        let m = catalog::timoshenko(2.0, 1.0).unwrap();
        let p = LyapunovParams { alpha: 0.5, alpha1: 0.0, alpha2: 0.0, sign2: 1.0, envelope: Envelope::Eta };
        let f = frequency(3.0, &[1.0]).unwrap();
        let e = lyapunov_matrix(&m.sys, m.s.as_ref(), m.k.as_ref().unwrap(), &f, &p).unwrap();
        assert_eq!(e, to_complex(m.sys.a0()));
    }

    #[test]
    fn oversized_weights_are_rejected() {
        let m = catalog::timoshenko(2.0, 1.0).unwrap();
        let p = LyapunovParams { alpha: 1.0, alpha1: 50.0, alpha2: 0.0, sign2: 1.0, envelope: Envelope::Rho };
        let f = frequency(1.0, &[1.0]).unwrap();
        let err = lyapunov_matrix(&m.sys, m.s.as_ref(), m.k.as_ref().unwrap(), &f, &p).unwrap_err();
        assert!(err.to_string().contains("alpha1/alpha2 too large"));
    }

    #[test]
    fn profiles_parse() {
        assert_eq!("gaussian:2".parse::<Profile>().unwrap(), Profile::Gaussian { width: 2.0 });
        assert_eq!("ring:50,100".parse::<Profile>().unwrap(), Profile::Ring { s0: 50.0, s1: 100.0 });
        assert_eq!("powerlaw".parse::<Profile>().unwrap(), Profile::Powerlaw { sigma: None });
        assert!("ring:5".parse::<Profile>().is_err());
        assert!("ring:5,1".parse::<Profile>().is_err());
        assert!("cauchy".parse::<Profile>().is_err());
    }

    #[test]
    fn sphere_measures() {
        use std::f64::consts::PI;
        assert_eq!(sphere_measure(1), 2.0);
        assert!((sphere_measure(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_measure(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn local_slopes_of_a_line() {
        let x = [0.0, 1.0, 2.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| -0.5 * v + 1.0).collect();
        for s in local_slopes(&x, &y) {
            assert!((s + 0.5).abs() < 1e-15);
        }
    }
}
