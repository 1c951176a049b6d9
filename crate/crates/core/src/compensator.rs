//! Compensating matrices `K(ω)`.
//!
//! The Kalman-type construction builds, from the powers of `Ã(ω) = A0⁻¹A(ω)`,
//!
//! ```text
//! K(ω) = Σ_{k=1}^{m−1} μ^{κ_k} {(LÃ^k)ᵀ LÃ^{k−1} − (LÃ^{k−1})ᵀ LÃ^k} A0⁻¹
//! ```
//!
//! which is odd in `ω` and makes `K A0` skew for every `μ`. For small `μ`
//! it satisfies condition (K) whenever the Kalman rank condition holds.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::conditions::{self, KSweep};
use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::linalg::{self, RMat};
use crate::report::{ConditionName, Definiteness};
use crate::sphere::SphereSampling;
use crate::system::{Direction, HyperbolicSystem};

/// Serializable description of `K(ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompensatorSpec {
    /// A closed-form compensator from the catalog.
    Builtin(BuiltinCompensator),
    Kalman(KalmanParams),
    /// `K(ω) = ω·K` for `n = 1`; rows of `K`.
    Constant(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "kebab-case")]
pub enum BuiltinCompensator {
    EulerMaxwell { rho_inf: f64, a_inf: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KalmanParams {
    pub mu: f64,
    pub kappa: Vec<f64>,
    pub nu: f64,
}

impl KalmanParams {
    /// Parameters with the default sequence `κ_k = k(2m − k)`.
    pub fn new(mu: f64, m: usize) -> Result<Self> {
        let kappa = kappa_sequence(m)?;
        let nu = concavity(&kappa);
        let p = KalmanParams { mu, kappa, nu };
        p.validate(m)?;
        Ok(p)
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::InvalidParameter(format!("mu must lie in (0, 1), got {}", self.mu)));
        }
        let k = &self.kappa;
        if k.len() != m + 1 {
            return Err(Error::InvalidParameter(format!("kappa needs m + 1 = {} entries, got {}", m + 1, k.len())));
        }
        if k[0] != 0.0 || k.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("kappa must satisfy 0 = kappa_0 < kappa_1 < ... < kappa_m".into()));
        }
        if !(self.nu > 0.0) || concavity(k) < self.nu - 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "kappa_k - (kappa_(k-1) + kappa_(k+1))/2 >= nu = {} fails (smallest gap {})",
                self.nu,
                concavity(k)
            )));
        }
        Ok(())
    }
}

/// Smallest `κ_k − (κ_{k−1} + κ_{k+1})/2`; `+∞` when the clause is vacuous.
pub fn concavity(kappa: &[f64]) -> f64 {
    kappa.windows(3).map(|w| w[1] - 0.5 * (w[0] + w[2])).fold(f64::INFINITY, f64::min)
}

/// `κ_k = k(2m − k)` for `k = 0..=m`; second difference `−2`, so `ν = 1`.
pub fn kappa_sequence(m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok((0..=m).map(|k| (k * (2 * m - k)) as f64).collect())
}

impl CompensatorSpec {
    /// Kalman spec with the default `κ` sequence; `ν` is 1 (vacuous for `m = 1`).
    pub fn kalman(mu: f64, m: usize) -> Result<Self> {
        let mut p = KalmanParams::new(mu, m)?;
        if !p.nu.is_finite() {
            p.nu = 1.0;
        }
        Ok(CompensatorSpec::Kalman(p))
    }

    pub fn constant(k: &RMat) -> Self {
        CompensatorSpec::Constant(linalg::to_rows(k))
    }

    /// `K(ω)` for the given system.
    pub fn evaluate(&self, sys: &HyperbolicSystem, d: &Direction) -> Result<RMat> {
        let k = match self {
            CompensatorSpec::Constant(rows) => {
                if sys.n() != 1 || d.dim() != 1 {
                    return Err(Error::Dimension("a constant compensator K(omega) = omega K needs n = 1".into()));
                }
                let k = linalg::from_rows(rows).ok_or_else(|| Error::Dimension("ragged rows in constant K".into()))?;
                k * d.as_slice()[0]
            }
            CompensatorSpec::Kalman(p) => build_k(sys, p, d)?,
            CompensatorSpec::Builtin(BuiltinCompensator::EulerMaxwell { rho_inf, a_inf }) => {
                if d.dim() != 3 {
                    return Err(Error::Dimension("the Euler-Maxwell compensator needs n = 3".into()));
                }
                catalog::euler_maxwell_k(*rho_inf, *a_inf, d.as_slice())
            }
        };
        if k.shape() != (sys.m(), sys.m()) {
            return Err(Error::Dimension(format!("K(omega) is {:?}, system has m = {}", k.shape(), sys.m())));
        }
        Ok(k)
    }
}

/// The Kalman-type compensator at `ω`.
pub fn build_k(sys: &HyperbolicSystem, p: &KalmanParams, d: &Direction) -> Result<RMat> {
    let m = sys.m();
    p.validate(m)?;
    let inv = sys.a0_inv()?;
    let at = sys.a_tilde(d)?;
    let mut prev = sys.l().clone();
    let mut sum = RMat::zeros(m, m);
    for k in 1..m {
        let next = &prev * &at;
        let bracket = next.transpose() * &prev - prev.transpose() * &next;
        sum += bracket * p.mu.powf(p.kappa[k]);
        prev = next;
    }
    Ok(sum * inv)
}

/// Characteristic polynomial coefficients `a_0..a_{m−1}` of `M`
/// (`det(λ − M) = λ^m + Σ a_k λ^k`), by Faddeev–LeVerrier.
pub fn char_poly(m: &RMat) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = RMat::zeros(n, n);
    let id = RMat::identity(n, n);
    for k in 1..=n {
        mk = m * (&mk + &id * coeffs[n - k + 1]);
        coeffs[n - k] = -mk.trace() / k as f64;
    }
    coeffs.truncate(n);
    coeffs
}

/// `‖Ã^m + Σ a_k Ã^k‖` for the characteristic coefficients of `Ã(ω)`.
pub fn cayley_hamilton_residual(sys: &HyperbolicSystem, d: &Direction) -> Result<f64> {
    let at = sys.a_tilde(d)?;
    let a = char_poly(&at);
    let m = sys.m();
    let mut pow = RMat::identity(m, m);
    let mut acc = RMat::zeros(m, m);
    for ak in &a {
        acc += &pow * *ak;
        pow = &pow * &at;
    }
    Ok((acc + pow).norm())
}

/// `C₁ = max over sampled ω of max_k |a_k(ω)|²`, the constant controlling
/// how small `μ` must be in the existence argument. Diagnostic only.
pub fn c1_bound(sys: &HyperbolicSystem, sph: &SphereSampling) -> Result<f64> {
    let mut c1 = 0.0f64;
    for d in sph.points() {
        for ak in char_poly(&sys.a_tilde(d)?) {
            c1 = c1.max(ak * ak);
        }
    }
    Ok(c1)
}

/// Positivity test used to accept a candidate `μ`.
#[derive(Debug, Clone, Copy)]
pub enum Acceptance<'a> {
    /// condition (K): positivity on `Ker(L)`
    Full,
    /// condition (K*): positivity on `X_ω ∩ Ker(L)`
    Restricted(&'a ConstraintBlock),
}

impl Acceptance<'_> {
    pub fn condition(&self) -> ConditionName {
        match self {
            Acceptance::Full => ConditionName::K,
            Acceptance::Restricted(_) => ConditionName::Kstar,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunedCompensator {
    pub spec: CompensatorSpec,
    pub margin: f64,
    /// `max ‖(KA)₁‖` over the sampling.
    pub scale: f64,
    pub certified_by: ConditionName,
    /// `(μ, margin)` for each candidate tried.
    pub trajectory: Vec<(f64, f64)>,
}

/// Halving search `μ = 2⁻¹, …, 2⁻⁴⁰` for the first Kalman compensator whose
/// margin is at least `target_margin · max‖(KA)₁‖`.
pub fn tune_mu(sys: &HyperbolicSystem, sph: &SphereSampling, target_margin: f64, acceptance: Acceptance<'_>) -> Result<TunedCompensator> {
    let r = conditions::check_r(sys, sph)?;
    if !r.passed && matches!(acceptance, Acceptance::Full) {
        return Err(Error::Precondition(format!("Kalman rank condition fails ({}); no compensator can be tuned", r.details)));
    }
    let cb = match acceptance {
        Acceptance::Full => None,
        Acceptance::Restricted(cb) => Some(cb),
    };
    let mut trajectory = Vec::new();
    let mut worst_omega = None;
    for j in 1..=40 {
        let mu = 0.5f64.powi(j);
        let spec = CompensatorSpec::kalman(mu, sys.m())?;
        let KSweep { worst, structural, .. } = conditions::k_sweep(sys, &spec, sph, cb)?;
        trajectory.push((mu, worst.margin));
        let (definite, _) = Definiteness::Strict.decide(worst.margin, worst.scale);
        if definite && worst.margin >= target_margin * worst.scale && structural < conditions::IDENTITY_TOL {
            return Ok(TunedCompensator { spec, margin: worst.margin, scale: worst.scale, certified_by: acceptance.condition(), trajectory });
        }
        worst_omega = worst.omega.clone();
    }
    let traj: Vec<String> = trajectory.iter().map(|(mu, m)| format!("{mu:.3e}:{m:.3e}")).collect();
    Err(Error::SearchFailed(format!(
        "no mu >= 2^-40 reaches the target margin; worst omega {:?}; mu:margin {}",
        worst_omega.unwrap_or_default(),
        traj.join(", ")
    )))
}
