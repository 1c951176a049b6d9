//! Built-in example systems with their auxiliary matrices.
//!
//! Each constructor returns a [`Model`] whose `expected` block predicts
//! which conditions pass, the dissipativity type and the decay envelope.
//! Nothing here is verified; the other modules do that.

use crate::compensator::{self, Acceptance, BuiltinCompensator, CompensatorSpec};
use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::linalg::RMat;
use crate::model::{Expected, Model};
use crate::report::ConditionName;
use crate::sphere::SphereSampling;
use crate::system::{Direction, Envelope, HyperbolicSystem};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Half of the admissible bound `4γ/(γ² + 4)`.
pub fn timoshenko_beta(gamma: f64) -> f64 {
    0.5 * 4.0 * gamma / (gamma * gamma + 4.0)
}

pub fn timoshenko_a(a: f64) -> RMat {
    -RMat::from_row_slice(4, 4, &[0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 0., a, 0., 0., a, 0.])
}

pub fn timoshenko_l(gamma: f64) -> RMat {
    RMat::from_row_slice(4, 4, &[0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., -1., 0., 0., gamma])
}

pub fn timoshenko_s(a: f64, beta: f64) -> RMat {
    -RMat::from_row_slice(4, 4, &[0., 0., 0., 1., 0., 0., a, 0., 0., a, 0., 0., 1., 0., 0., 0.]) * beta
}

pub fn timoshenko_k() -> RMat {
    RMat::from_row_slice(4, 4, &[0., 1., 0., 0., -1., 0., 0., 0., 0., 0., 0., -1., 0., 0., 1., 0.])
}

/// Dissipative Timoshenko beam in the state `(w_x − ψ, w_t, aψ_x, ψ_t)`.
pub fn timoshenko(a: f64, gamma: f64) -> Result<Model> {
    positive("a", a)?;
    positive("gamma", gamma)?;
    let sys = HyperbolicSystem::new(RMat::identity(4, 4), vec![timoshenko_a(a)], timoshenko_l(gamma))?;
    let beta = timoshenko_beta(gamma);
    let standard = a == 1.0;
    let mut conditions = vec![ConditionName::A, ConditionName::S, ConditionName::S1, ConditionName::K, ConditionName::R];
    if standard {
        conditions.push(ConditionName::S2);
    }
    Ok(Model {
        name: format!("timoshenko(a={a}, gamma={gamma})"),
        sys,
        constraint: None,
        s: Some(timoshenko_s(a, beta)),
        k: Some(CompensatorSpec::constant(&timoshenko_k())),
        s_tilde: None,
        expected: Expected {
            conditions,
            dissipativity: Some(if standard { (1, 1) } else { (1, 2) }),
            envelope: Some(if standard { Envelope::Rho } else { Envelope::Eta }),
        },
    })
}

/// `Ω_ξ` with `Ω_ξ E = ξ × E`.
pub fn omega_matrix(xi: &[f64]) -> RMat {
    RMat::from_row_slice(3, 3, &[0., -xi[2], xi[1], xi[2], 0., -xi[0], -xi[1], xi[0], 0.])
}

/// Index of the first component of each block of `(ρ, v, E, B)`.
const RHO: usize = 0;
const V: usize = 1;
const E: usize = 4;
const B: usize = 7;

fn put(m: &mut RMat, r: usize, c: usize, block: &RMat) {
    m.view_mut((r, c), block.shape()).copy_from(block);
}

fn row3(v: &[f64]) -> RMat {
    RMat::from_row_slice(1, 3, v)
}

fn col3(v: &[f64]) -> RMat {
    RMat::from_column_slice(3, 1, v)
}

/// Linearized Euler–Maxwell parameters; `a∞ = p′/ρ∞`, `b∞ = p′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaxwellParams {
    pub rho_inf: f64,
    pub p_prime: f64,
    pub b_inf: [f64; 3],
}

impl EulerMaxwellParams {
    pub fn a_inf(&self) -> f64 {
        self.p_prime / self.rho_inf
    }

    pub fn b_coef(&self) -> f64 {
        self.p_prime
    }

    /// Half of the admissible bound `4ρ∞/(4ρ∞ + (1 + |B∞|)²)`.
    pub fn beta(&self) -> f64 {
        let nb = self.b_inf.iter().map(|x| x * x).sum::<f64>().sqrt();
        0.5 * 4.0 * self.rho_inf / (4.0 * self.rho_inf + (1.0 + nb).powi(2))
    }

    pub fn a0(&self) -> RMat {
        let mut d = vec![self.a_inf()];
        d.extend([self.rho_inf; 3]);
        d.extend([1.0; 6]);
        RMat::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    /// `A(ξ) = Σ Aʲ ξⱼ`.
    pub fn a_of(&self, xi: &[f64]) -> RMat {
        let b = self.b_coef();
        let mut m = RMat::zeros(10, 10);
        let bx: Vec<f64> = xi.iter().map(|x| b * x).collect();
        put(&mut m, RHO, V, &row3(&bx));
        put(&mut m, V, RHO, &col3(&bx));
        let om = omega_matrix(xi);
        put(&mut m, E, B, &(-&om));
        put(&mut m, B, E, &om);
        m
    }

    pub fn l(&self) -> RMat {
        let r = self.rho_inf;
        let id = RMat::identity(3, 3);
        let mut m = RMat::zeros(10, 10);
        put(&mut m, V, V, &((&id - omega_matrix(&self.b_inf)) * r));
        put(&mut m, V, E, &(&id * r));
        put(&mut m, E, V, &(&id * -r));
        m
    }

    /// `Q(ξ)`, a `2×10` matrix.
    pub fn q_of(&self, xi: &[f64]) -> RMat {
        let mut q = RMat::zeros(2, 10);
        put(&mut q, 0, E, &row3(xi));
        put(&mut q, 1, B, &row3(xi));
        q
    }

    pub fn r(&self) -> RMat {
        let mut r = RMat::zeros(2, 10);
        r[(0, 0)] = 1.0;
        r
    }

    pub fn s(&self) -> RMat {
        let beta = self.beta();
        let id = RMat::identity(3, 3);
        let mut m = RMat::zeros(10, 10);
        put(&mut m, V, E, &(&id * beta));
        put(&mut m, E, V, &(&id * (beta / self.rho_inf)));
        m
    }

    /// `S̃ = β a∞ I₂`.
    pub fn s_tilde(&self) -> RMat {
        RMat::identity(2, 2) * (self.beta() * self.a_inf())
    }
}

/// Closed-form `K(ω)` of the linearized Euler–Maxwell system.
pub fn euler_maxwell_k(rho_inf: f64, a_inf: f64, omega: &[f64]) -> RMat {
    let mut m = RMat::zeros(10, 10);
    let w1: Vec<f64> = omega.iter().map(|x| x / rho_inf).collect();
    let w2: Vec<f64> = omega.iter().map(|x| -x / a_inf).collect();
    put(&mut m, RHO, V, &row3(&w1));
    put(&mut m, V, RHO, &col3(&w2));
    let om = omega_matrix(omega);
    put(&mut m, E, B, &om);
    put(&mut m, B, E, &om);
    m
}

pub fn euler_maxwell(rho_inf: f64, p_prime: f64, b_inf: [f64; 3]) -> Result<Model> {
    positive("rho_inf", rho_inf)?;
    positive("p_prime", p_prime)?;
    if b_inf.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("B_inf must be finite".into()));
    }
    let p = EulerMaxwellParams { rho_inf, p_prime, b_inf };
    let a: Vec<RMat> = (0..3).map(|j| p.a_of(Direction::axis(3, j).as_slice())).collect();
    let sys = HyperbolicSystem::new(p.a0(), a, p.l())?;
    let q: Vec<RMat> = (0..3).map(|j| p.q_of(Direction::axis(3, j).as_slice())).collect();
    let cb = ConstraintBlock::new(q, p.r())?;
    Ok(Model {
        name: format!("euler-maxwell(rho={rho_inf}, pprime={p_prime}, B={},{},{})", b_inf[0], b_inf[1], b_inf[2]),
        sys,
        constraint: Some(cb),
        s: Some(p.s()),
        k: Some(CompensatorSpec::Builtin(BuiltinCompensator::EulerMaxwell { rho_inf, a_inf: p.a_inf() })),
        s_tilde: Some(p.s_tilde()),
        expected: Expected {
            conditions: vec![ConditionName::A, ConditionName::C, ConditionName::S, ConditionName::Sstar1, ConditionName::Kstar],
            dissipativity: Some((1, 2)),
            envelope: Some(Envelope::Eta),
        },
    })
}

/// Damped wave `u_t − v_x = 0, v_t − u_x + v = 0` with symmetric relaxation;
/// its compensator comes from the Kalman construction.
pub fn symmetric_toy() -> Result<Model> {
    let sys = HyperbolicSystem::new(
        RMat::identity(2, 2),
        vec![RMat::from_row_slice(2, 2, &[0., -1., -1., 0.])],
        RMat::from_row_slice(2, 2, &[0., 0., 0., 1.]),
    )?;
    let sph = SphereSampling::new(1, 2)?;
    let tuned = compensator::tune_mu(&sys, &sph, 1e-6, Acceptance::Full)?;
    Ok(Model {
        name: "damped-wave".into(),
        sys,
        constraint: None,
        s: Some(RMat::zeros(2, 2)),
        k: Some(tuned.spec),
        s_tilde: None,
        expected: Expected {
            conditions: vec![ConditionName::A, ConditionName::A0, ConditionName::K, ConditionName::R, ConditionName::S, ConditionName::S2],
            dissipativity: Some((1, 1)),
            envelope: Some(Envelope::Rho),
        },
    })
}
