//! System data, directions and frequencies, kernels and the Fourier-space
//! generator `G(ξ) = −A0⁻¹(i|ξ|A(ω) + L)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, to_complex, CMat, RMat, I};
use crate::report::{ConditionEntry, Definiteness, positivity_rtol};

/// Default relative rank threshold for kernels.
pub const KERNEL_TOL: f64 = 1e-10;

/// Constant-coefficient system `A0 u_t + Σ Aʲ u_{x_j} + L u = 0`.
#[derive(Debug, Clone)]
pub struct HyperbolicSystem {
    n: usize,
    m: usize,
    a0: RMat,
    a: Vec<RMat>,
    l: RMat,
    a0_inv: Option<RMat>,
}

impl HyperbolicSystem {
    pub fn new(a0: RMat, a: Vec<RMat>, l: RMat) -> Result<Self> {
        let m = a0.nrows();
        if m == 0 || !a0.is_square() {
            return Err(Error::Dimension(format!("A0 must be square and nonempty, got {:?}", a0.shape())));
        }
        if a.is_empty() {
            return Err(Error::Dimension("at least one spatial matrix Aʲ is required".into()));
        }
        for (j, aj) in a.iter().enumerate() {
            if aj.shape() != (m, m) {
                return Err(Error::Dimension(format!("A[{j}] is {:?}, expected ({m}, {m})", aj.shape())));
            }
        }
        if l.shape() != (m, m) {
            return Err(Error::Dimension(format!("L is {:?}, expected ({m}, {m})", l.shape())));
        }
        let a0_inv = invert_symmetric(&a0);
        Ok(HyperbolicSystem { n: a.len(), m, a0, a, l, a0_inv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a0(&self) -> &RMat {
        &self.a0
    }

    pub fn a_matrices(&self) -> &[RMat] {
        &self.a
    }

    pub fn l(&self) -> &RMat {
        &self.l
    }

    /// Symmetric part `L₁` of the relaxation matrix.
    pub fn l1(&self) -> RMat {
        linalg::sym(&self.l)
    }

    pub fn a0_inv(&self) -> Result<&RMat> {
        self.a0_inv.as_ref().ok_or(Error::SingularA0)
    }

    /// `A(ω) = Σ Aʲ ωⱼ`.
    pub fn assemble_a(&self, d: &Direction) -> Result<RMat> {
        self.check_dir(d)?;
        Ok(self.combine(d.as_slice()))
    }

    /// `Σ Aʲ vⱼ` for an arbitrary (not necessarily unit) vector.
    pub fn combine(&self, v: &[f64]) -> RMat {
        let mut out = RMat::zeros(self.m, self.m);
        for (aj, &w) in self.a.iter().zip(v) {
            out += aj * w;
        }
        out
    }

    /// `Ã(ω) = A0⁻¹ A(ω)`.
    pub fn a_tilde(&self, d: &Direction) -> Result<RMat> {
        Ok(self.a0_inv()? * self.assemble_a(d)?)
    }

    /// Fourier-space generator `G(ξ)` with `û_t = G(ξ) û`.
    pub fn generator(&self, f: &Frequency) -> Result<CMat> {
        self.check_freq(f)?;
        let inv = to_complex(self.a0_inv()?);
        Ok(-(inv * self.symbol(f)))
    }

    /// `i|ξ|A(ω) + L`, the part of the generator multiplied by `−A0⁻¹`.
    pub fn symbol(&self, f: &Frequency) -> CMat {
        let a = self.combine(f.xi());
        a.map(|x| I * x) + to_complex(&self.l)
    }

    fn check_dir(&self, d: &Direction) -> Result<()> {
        if d.dim() != self.n {
            return Err(Error::Dimension(format!("direction has {} components, system has n = {}", d.dim(), self.n)));
        }
        Ok(())
    }

    fn check_freq(&self, f: &Frequency) -> Result<()> {
        if f.xi().len() != self.n {
            return Err(Error::Dimension(format!("frequency has {} components, system has n = {}", f.xi().len(), self.n)));
        }
        Ok(())
    }
}

fn invert_symmetric(a0: &RMat) -> Option<RMat> {
    let ev = linalg::sym(a0).symmetric_eigenvalues();
    let amax = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let amin = ev.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if amax == 0.0 || amin <= 1e-14 * amax {
        return None;
    }
    a0.clone().try_inverse()
}

/// Unit vector `ω ∈ S^{n−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction {
    omega: Vec<f64>,
}

impl Direction {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        if omega.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("direction must be a unit vector, |ω| = {norm}")));
        }
        Ok(Direction { omega })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(v: &[f64]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        Ok(Direction { omega: v.iter().map(|x| x / norm).collect() })
    }

    /// First coordinate axis in dimension `n`.
    pub fn axis(n: usize, j: usize) -> Self {
        let mut omega = vec![0.0; n];
        omega[j] = 1.0;
        Direction { omega }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.omega
    }

    pub fn neg(&self) -> Self {
        Direction { omega: self.omega.iter().map(|x| -x).collect() }
    }
}

/// Fourier variable `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    xi: Vec<f64>,
}

impl Frequency {
    pub fn new(xi: Vec<f64>) -> Self {
        Frequency { xi }
    }

    pub fn from_polar(s: f64, d: &Direction) -> Self {
        Frequency { xi: d.as_slice().iter().map(|w| s * w).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Frequency { xi: vec![0.0; n] }
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// `|ξ|`
    pub fn s(&self) -> f64 {
        self.xi.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `ξ/|ξ|`, undefined at the origin.
    pub fn omega(&self) -> Option<Direction> {
        let s = self.s();
        (s > 0.0).then(|| Direction { omega: self.xi.iter().map(|x| x / s).collect() })
    }

    /// `ρ(ξ) = |ξ|²/(1+|ξ|²)`
    pub fn rho(&self) -> f64 {
        rho(self.s())
    }

    /// `η(ξ) = |ξ|²/(1+|ξ|²)²`
    pub fn eta(&self) -> f64 {
        eta(self.s())
    }
}

pub fn rho(s: f64) -> f64 {
    s * s / (1.0 + s * s)
}

pub fn eta(s: f64) -> f64 {
    let d = 1.0 + s * s;
    s * s / (d * d)
}

/// Frequency envelope of a decay estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Envelope {
    /// `η(ξ)`: regularity-loss decay
    Eta,
    /// `ρ(ξ)`: standard decay
    Rho,
}

impl Envelope {
    pub fn eval(self, s: f64) -> f64 {
        match self {
            Envelope::Eta => eta(s),
            Envelope::Rho => rho(s),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Envelope::Eta => "eta",
            Envelope::Rho => "rho",
        }
    }
}

impl std::str::FromStr for Envelope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta" => Ok(Envelope::Eta),
            "rho" => Ok(Envelope::Rho),
            _ => Err(Error::InvalidParameter(format!("unknown envelope '{s}' (expected eta or rho)"))),
        }
    }
}

/// Orthonormal basis of a subspace of `C^m`.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub basis: CMat,
    pub tol: f64,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn projector(&self) -> CMat {
        linalg::projector(&self.basis)
    }

    pub fn full(m: usize) -> Self {
        SubspaceBasis { basis: CMat::identity(m, m), tol: 0.0 }
    }

    pub fn intersect(&self, other: &SubspaceBasis, tol: f64) -> SubspaceBasis {
        SubspaceBasis { basis: linalg::intersection(&self.basis, &other.basis, tol), tol }
    }
}

/// Split `M` into exactly symmetric and exactly skew parts; `M₁ + M₂`
/// reproduces `M` to rounding.
pub fn sym_skew_split(m: &RMat) -> (RMat, RMat) {
    (linalg::sym(m), linalg::skew(m))
}

/// Kernel of a complex matrix; rank decided by `σ ≤ tol·σ_max`.
pub fn kernel_basis(m: &CMat, tol: f64) -> SubspaceBasis {
    SubspaceBasis { basis: linalg::null_space(m, tol), tol }
}

pub fn kernel_basis_real(m: &RMat, tol: f64) -> SubspaceBasis {
    kernel_basis(&to_complex(m), tol)
}

/// Symmetry, definiteness and kernel clauses of condition (A).
pub fn validate_condition_a(sys: &HyperbolicSystem) -> ConditionEntry {
    let scale = |m: &RMat| m.norm().max(f64::MIN_POSITIVE);
    let mut sym_resid = (sys.a0() - sys.a0().transpose()).norm() / scale(sys.a0());
    for aj in sys.a_matrices() {
        sym_resid = sym_resid.max((aj - aj.transpose()).norm() / scale(aj));
    }
    let a0_min = linalg::sym(sys.a0()).symmetric_eigenvalues().min();
    let l1 = sys.l1();
    let l1_min = if l1.norm() == 0.0 { 0.0 } else { l1.symmetric_eigenvalues().min() };
    let ker = kernel_basis_real(sys.l(), KERNEL_TOL);
    let l_min_sv = linalg::singular_values(&to_complex(sys.l())).last().copied().unwrap_or(0.0);

    let sym_ok = sym_resid <= 1e-12;
    let (a0_ok, tol_a0) = Definiteness::Strict.decide(a0_min, sys.a0().norm());
    let (l1_ok, tol_l1) = Definiteness::Semi.decide(l1_min, l1.norm());
    let ker_ok = ker.dim() > 0;

    let mut margin = a0_min;
    if !l1_ok {
        margin = margin.min(l1_min);
    }
    if !ker_ok {
        margin = margin.min(-l_min_sv);
    }
    if !sym_ok {
        margin = margin.min(-sym_resid);
    }
    let details = format!(
        "symmetry residual {sym_resid:.3e}; lambda_min(A0) = {a0_min:.6e}; lambda_min(L1) = {l1_min:.6e}; dim Ker(L) = {}; L symmetric: {}",
        ker.dim(),
        (sys.l() - sys.l().transpose()).norm() == 0.0
    );
    let mut entry = ConditionEntry::new(sym_ok && a0_ok && l1_ok && ker_ok, margin, tol_a0.max(tol_l1).max(positivity_rtol()), details);
    if sys.l().norm() == 0.0 {
        entry = entry.warn("L = 0: no dissipation");
    }
    entry
}

/// Condition (A)₀: condition (A) plus a symmetric relaxation matrix.
pub fn validate_condition_a0(sys: &HyperbolicSystem) -> ConditionEntry {
    let base = validate_condition_a(sys);
    let l_skew = (sys.l() - sys.l().transpose()).norm() * 0.5;
    let tol = 1e-12 * sys.l().norm().max(1.0);
    let passed = base.passed && l_skew <= tol;
    let margin = if l_skew <= tol { base.margin } else { base.margin.min(-l_skew) };
    let mut e = ConditionEntry::new(passed, margin, base.tolerance, format!("{}; skew(L) norm {l_skew:.3e}", base.details));
    e.warnings = base.warnings;
    e
}

/// `Re⟨A0 G z, z⟩` and `−Re⟨L z, z⟩`, used by the dissipativity invariant.
pub fn dissipation_pair(sys: &HyperbolicSystem, f: &Frequency, z: &linalg::CVec) -> Result<(f64, f64)> {
    let g = sys.generator(f)?;
    let a0 = to_complex(sys.a0());
    let lhs = (z.adjoint() * a0 * g * z)[(0, 0)].re;
    let rhs = -(z.adjoint() * to_complex(sys.l()) * z)[(0, 0)].re;
    Ok((lhs, rhs))
}
