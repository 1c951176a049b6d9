//! Constraint block `Σ Qʲ u_{x_j} + R u = 0` and the subspaces it induces.

use crate::error::{Error, Result};
use crate::linalg::{self, to_complex, CMat, RMat, I};
use crate::system::{kernel_basis, Direction, Frequency, SubspaceBasis, KERNEL_TOL};

#[derive(Debug, Clone)]
pub struct ConstraintBlock {
    m1: usize,
    q: Vec<RMat>,
    r: RMat,
    pi1: RMat,
    pi2: RMat,
}

impl ConstraintBlock {
    pub fn new(q: Vec<RMat>, r: RMat) -> Result<Self> {
        let (m1, m) = r.shape();
        if m1 == 0 || m1 >= m {
            return Err(Error::Dimension(format!("constraint needs 0 < m1 < m, got m1 = {m1}, m = {m}")));
        }
        if q.is_empty() {
            return Err(Error::Dimension("constraint needs one Qʲ per spatial dimension".into()));
        }
        for (j, qj) in q.iter().enumerate() {
            if qj.shape() != (m1, m) {
                return Err(Error::Dimension(format!("Q[{j}] is {:?}, expected ({m1}, {m})", qj.shape())));
            }
        }
        let img = linalg::range_space(&to_complex(&r), KERNEL_TOL);
        let pi1 = linalg::projector(&img).map(|z| z.re);
        let pi2 = RMat::identity(m1, m1) - &pi1;
        Ok(ConstraintBlock { m1, q, r, pi1, pi2 })
    }

    /// The trivial block `Q = 0, R = 0` (with `m1 = 1`).
    pub fn zero(n: usize, m: usize) -> Self {
        ConstraintBlock {
            m1: 1,
            q: vec![RMat::zeros(1, m); n],
            r: RMat::zeros(1, m),
            pi1: RMat::zeros(1, 1),
            pi2: RMat::identity(1, 1),
        }
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m(&self) -> usize {
        self.r.ncols()
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q_matrices(&self) -> &[RMat] {
        &self.q
    }

    pub fn r(&self) -> &RMat {
        &self.r
    }

    /// Orthogonal projector onto `Image(R) ⊂ C^{m1}`.
    pub fn pi1(&self) -> &RMat {
        &self.pi1
    }

    pub fn pi2(&self) -> &RMat {
        &self.pi2
    }

    /// `Q(ω) = Σ Qʲ ωⱼ`.
    pub fn q_of(&self, v: &[f64]) -> RMat {
        let mut out = RMat::zeros(self.m1, self.m());
        for (qj, &w) in self.q.iter().zip(v) {
            out += qj * w;
        }
        out
    }

    /// `X_ω = Ker(Π₂ Q(ω))`.
    pub fn subspace_x(&self, d: &Direction, tol: f64) -> SubspaceBasis {
        let pq = &self.pi2 * self.q_of(d.as_slice());
        if pq.norm() == 0.0 {
            return SubspaceBasis::full(self.m());
        }
        kernel_basis(&to_complex(&pq), tol)
    }

    /// `i|ξ|Q(ω) + R`.
    pub fn operator(&self, f: &Frequency) -> CMat {
        self.q_of(f.xi()).map(|x| I * x) + to_complex(&self.r)
    }

    /// `N(ξ) = Ker(i|ξ|Q(ω) + R)`, the constraint-admissible Fourier modes.
    pub fn admissible(&self, f: &Frequency, tol: f64) -> SubspaceBasis {
        let op = self.operator(f);
        if op.norm() == 0.0 {
            return SubspaceBasis::full(self.m());
        }
        kernel_basis(&op, tol)
    }
}
