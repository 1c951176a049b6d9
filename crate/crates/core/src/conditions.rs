//! Structural condition checks over a sampled sphere of directions.
//!
//! Every sampled check evaluates one Hermitian form per direction, takes the
//! smallest eigenvalue on the relevant subspace and keeps the minimum over
//! the sampling together with the direction where it was attained.

use serde::{Deserialize, Serialize};

use crate::compensator::CompensatorSpec;
use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{self, to_complex, CMat, RMat, I};
use crate::report::{ConditionEntry, ConditionName, ConditionReport, Definiteness, WorstCase, positivity_rtol};
use crate::sphere::SphereSampling;
use crate::system::{self, kernel_basis_real, Direction, HyperbolicSystem, SubspaceBasis, KERNEL_TOL};

/// Largest principal-angle sine accepted when two kernels are compared.
pub const SUBSPACE_ANGLE_TOL: f64 = 1e-8;
/// Residual bound for the structural identities of K and of condition (C).
pub const IDENTITY_TOL: f64 = 1e-10;
/// Relative rank threshold for the Kalman stack.
pub const RANK_TOL: f64 = 1e-10;

/// `λ_min(Bᴴ H B)`: the exact test for positivity of `H` on `span(B)`.
pub fn min_eig_on_subspace(h: &CMat, b: &SubspaceBasis) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::VacuousSubspace);
    }
    if h.nrows() != b.ambient() || !h.is_square() {
        return Err(Error::Dimension(format!("form is {:?}, subspace lives in C^{}", h.shape(), b.ambient())));
    }
    Ok(linalg::min_hermitian_eigenvalue(&restrict(h, &b.basis)))
}

fn restrict(h: &CMat, b: &CMat) -> CMat {
    b.adjoint() * h * b
}

fn check_square(name: &str, x: &RMat, m: usize) -> Result<()> {
    if x.shape() != (m, m) {
        return Err(Error::Dimension(format!("{name} is {:?}, expected ({m}, {m})", x.shape())));
    }
    Ok(())
}

/// `i·X₂` for a real matrix `X`: Hermitian since `X₂` is real skew.
fn i_skew(x: &RMat) -> CMat {
    linalg::skew(x).map(|v| I * v)
}

/// Condition (S): `SA0` symmetric, `(SL)₁ + L₁ ⪰ 0`, and
/// `Ker((SL)₁ + L₁) = Ker(L)`.
pub fn check_s(sys: &HyperbolicSystem, s: &RMat) -> Result<ConditionEntry> {
    check_square("S", s, sys.m())?;
    let sa0 = s * sys.a0();
    let sym_resid = (&sa0 - sa0.transpose()).norm() / sa0.norm().max(1.0);
    let h = linalg::sym(&(s * sys.l())) + sys.l1();
    let hc = to_complex(&h);
    let h_min = linalg::min_hermitian_eigenvalue(&hc);
    let (psd, tol) = Definiteness::Semi.decide(h_min, h.norm());

    let ker_l = kernel_basis_real(sys.l(), KERNEL_TOL);
    let ker_h = kernel_basis_real(&h, KERNEL_TOL);
    let angle = linalg::subspace_distance(&ker_l.basis, &ker_h.basis);
    let kernels_equal = angle.is_some_and(|a| a < SUBSPACE_ANGLE_TOL);

    // positivity on the orthogonal complement of Ker(L)
    let perp = SubspaceBasis { basis: linalg::range_space(&to_complex(&sys.l().transpose()), KERNEL_TOL), tol: KERNEL_TOL };
    let perp_min = if perp.is_empty() { 0.0 } else { min_eig_on_subspace(&hc, &perp)? };

    let sym_ok = sym_resid <= IDENTITY_TOL;
    let passed = sym_ok && psd && kernels_equal;
    let mut margin = perp_min;
    if !psd {
        margin = margin.min(h_min);
    }
    if !kernels_equal {
        margin = margin.min(-angle.unwrap_or(1.0));
    }
    if !sym_ok {
        margin = margin.min(-sym_resid);
    }
    let details = format!(
        "SA0 symmetry residual {sym_resid:.3e}; lambda_min((SL)1 + L1) = {h_min:.6e}; dim Ker = {} vs dim Ker(L) = {}; principal angle {}; min on Ker(L)^perp = {perp_min:.6e}",
        ker_h.dim(),
        ker_l.dim(),
        angle.map_or("n/a (dimensions differ)".to_string(), |a| format!("{a:.3e}")),
    );
    let mut e = ConditionEntry::new(passed, margin, tol.max(positivity_rtol()), details);
    if perp.is_empty() {
        e = e.warn("Ker(L) is the whole space; no margin on its complement");
    }
    Ok(e)
}

/// Semidefinite check of `form(ω)` on `space` (or `C^m` when `None`).
fn semidefinite_sweep<F>(sph: &SphereSampling, space: Option<&SubspaceBasis>, form: F) -> Result<WorstCase>
where
    F: Fn(&Direction) -> Result<CMat> + Sync + Send,
{
    let pts = sph.points();
    let rows = exec::try_map(pts.len(), |i| -> Result<(f64, f64)> {
        let h = form(&pts[i])?;
        let margin = match space {
            Some(b) => min_eig_on_subspace(&h, b)?,
            None => linalg::min_hermitian_eigenvalue(&h),
        };
        Ok((margin, h.norm()))
    })?;
    let mut w = WorstCase::default();
    for (i, (margin, scale)) in rows.into_iter().enumerate() {
        w.push(margin, pts[i].as_slice(), scale);
    }
    Ok(w)
}

fn check_sampling(sys: &HyperbolicSystem, sph: &SphereSampling) -> Result<()> {
    if sph.n() != sys.n() {
        return Err(Error::Dimension(format!("sphere sampling is in dimension {}, system has n = {}", sph.n(), sys.n())));
    }
    Ok(())
}

fn l1_kernel(sys: &HyperbolicSystem) -> SubspaceBasis {
    kernel_basis_real(&sys.l1(), KERNEL_TOL)
}

/// Condition (S)₁: `i(SA(ω))₂ ⪰ 0` on `Ker(L₁)`.
pub fn check_s1(sys: &HyperbolicSystem, s: &RMat, sph: &SphereSampling) -> Result<ConditionEntry> {
    check_square("S", s, sys.m())?;
    check_sampling(sys, sph)?;
    let ker = l1_kernel(sys);
    if ker.is_empty() {
        return Ok(ConditionEntry::new(true, 0.0, 0.0, "Ker(L1) = {0}").at(None).warn("vacuous: Ker(L1) is trivial"));
    }
    let w = semidefinite_sweep(sph, Some(&ker), |d| Ok(i_skew(&(s * sys.assemble_a(d)?))))?;
    Ok(w.entry(Definiteness::Semi, format!("min over omega of lambda_min(i(SA)2) on Ker(L1) (dim {})", ker.dim())))
}

/// Condition (S)₂: `i(SA(ω))₂ ⪰ 0` on `C^m`.
pub fn check_s2(sys: &HyperbolicSystem, s: &RMat, sph: &SphereSampling) -> Result<ConditionEntry> {
    check_square("S", s, sys.m())?;
    check_sampling(sys, sph)?;
    let w = semidefinite_sweep(sph, None, |d| Ok(i_skew(&(s * sys.assemble_a(d)?))))?;
    Ok(w.entry(Definiteness::Semi, "min over omega of lambda_min(i(SA)2) on C^m"))
}

/// Raw ingredients of a (K)/(K*) check.
#[derive(Debug, Clone)]
pub(crate) struct KSweep {
    pub worst: WorstCase,
    /// Largest oddness or `K A0`-skewness residual (relative).
    pub structural: f64,
    /// Directions where the test subspace was empty.
    pub vacuous: usize,
}

/// `K(ω)` oddness and `(K A0)ᵀ = −K A0` residuals, relative to `max(1, ‖·‖)`.
pub fn structural_residuals(sys: &HyperbolicSystem, k: &CompensatorSpec, d: &Direction) -> Result<(f64, f64)> {
    let kp = k.evaluate(sys, d)?;
    let km = k.evaluate(sys, &d.neg())?;
    let odd = (&kp + &km).norm() / kp.norm().max(1.0);
    let ka0 = &kp * sys.a0();
    let skew = (&ka0 + ka0.transpose()).norm() / ka0.norm().max(1.0);
    Ok((odd, skew))
}

pub(crate) fn k_sweep(sys: &HyperbolicSystem, k: &CompensatorSpec, sph: &SphereSampling, cb: Option<&ConstraintBlock>) -> Result<KSweep> {
    check_sampling(sys, sph)?;
    let ker_l = kernel_basis_real(sys.l(), KERNEL_TOL);
    if ker_l.is_empty() {
        return Err(Error::VacuousSubspace);
    }
    let pts = sph.points();
    let rows = exec::try_map(pts.len(), |i| -> Result<(Option<f64>, f64, f64)> {
        let d = &pts[i];
        let (odd, skew) = structural_residuals(sys, k, d)?;
        let h = to_complex(&linalg::sym(&(k.evaluate(sys, d)? * sys.assemble_a(d)?)));
        let space = match cb {
            Some(cb) => cb.subspace_x(d, KERNEL_TOL).intersect(&ker_l, KERNEL_TOL),
            None => ker_l.clone(),
        };
        let margin = if space.is_empty() { None } else { Some(min_eig_on_subspace(&h, &space)?) };
        Ok((margin, h.norm(), odd.max(skew)))
    })?;
    let mut out = KSweep { worst: WorstCase::default(), structural: 0.0, vacuous: 0 };
    for (i, (margin, scale, resid)) in rows.into_iter().enumerate() {
        out.structural = out.structural.max(resid);
        match margin {
            Some(mg) => out.worst.push(mg, pts[i].as_slice(), scale),
            None => out.vacuous += 1,
        }
    }
    Ok(out)
}

fn k_entry(sw: &KSweep, space: &str) -> ConditionEntry {
    if sw.worst.omega.is_none() {
        return ConditionEntry::new(true, 0.0, 0.0, format!("{space} is trivial at every sampled direction"))
            .at(None)
            .warn("vacuous: empty test subspace at all directions");
    }
    let mut e = sw.worst.entry(
        Definiteness::Strict,
        format!("min over omega of lambda_min((KA)1) on {space}; structural residual {:.3e}", sw.structural),
    );
    if sw.structural >= IDENTITY_TOL {
        e.passed = false;
        e.margin = e.margin.min(-sw.structural);
        e = e.warn("K is not odd in omega or K A0 is not skew");
    }
    if sw.vacuous > 0 {
        e = e.warn(format!("empty test subspace at {} sampled directions (passed vacuously there)", sw.vacuous));
    }
    e
}

/// Condition (K): `K` odd, `K A0` skew, `(K(ω)A(ω))₁ ≻ 0` on `Ker(L)`.
pub fn check_k(sys: &HyperbolicSystem, k: &CompensatorSpec, sph: &SphereSampling) -> Result<ConditionEntry> {
    Ok(k_entry(&k_sweep(sys, k, sph, None)?, "Ker(L)"))
}

/// Condition (K*): as (K) but positivity only on `X_ω ∩ Ker(L)`.
pub fn check_kstar(sys: &HyperbolicSystem, cb: &ConstraintBlock, k: &CompensatorSpec, sph: &SphereSampling) -> Result<ConditionEntry> {
    check_constraint_dims(sys, cb)?;
    Ok(k_entry(&k_sweep(sys, k, sph, Some(cb))?, "X_omega ∩ Ker(L)"))
}

fn check_constraint_dims(sys: &HyperbolicSystem, cb: &ConstraintBlock) -> Result<()> {
    if cb.m() != sys.m() || cb.n() != sys.n() {
        return Err(Error::Dimension(format!(
            "constraint block is for (n, m) = ({}, {}), system has ({}, {})",
            cb.n(),
            cb.m(),
            sys.n(),
            sys.m()
        )));
    }
    Ok(())
}

/// Result of the search for `α` in `α(KA)₁ + (SL)₁ + L₁ ≻ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    /// Largest certified `α` in `(0, 1]`.
    pub alpha: f64,
    pub margin: f64,
    /// `α` with the largest margin (the margin is concave in `α`).
    pub best_alpha: f64,
    pub best_margin: f64,
}

/// Bisection for the largest `α ∈ (1e-8, 1]` making
/// `α(K(ω)A(ω))₁ + (SL)₁ + L₁` positive definite at every sampled direction.
/// Without `S` the `(SL)₁` term is dropped. With a constraint block the
/// form is tested on `X_ω` only.
pub fn find_alpha(
    sys: &HyperbolicSystem,
    s: Option<&RMat>,
    k: &CompensatorSpec,
    sph: &SphereSampling,
    cb: Option<&ConstraintBlock>,
) -> Result<AlphaCertificate> {
    check_sampling(sys, sph)?;
    if let Some(s) = s {
        check_square("S", s, sys.m())?;
    }
    if let Some(cb) = cb {
        check_constraint_dims(sys, cb)?;
    }
    let base = match s {
        Some(s) => linalg::sym(&(s * sys.l())) + sys.l1(),
        None => sys.l1(),
    };
    let pts = sph.points();
    let forms = exec::try_map(pts.len(), |i| -> Result<Option<(CMat, CMat)>> {
        let d = &pts[i];
        let hk = to_complex(&linalg::sym(&(k.evaluate(sys, d)? * sys.assemble_a(d)?)));
        let hb = to_complex(&base);
        match cb {
            Some(cb) => {
                let x = cb.subspace_x(d, KERNEL_TOL);
                Ok((!x.is_empty()).then(|| (restrict(&hk, &x.basis), restrict(&hb, &x.basis))))
            }
            None => Ok(Some((hk, hb))),
        }
    })?;
    let forms: Vec<(CMat, CMat)> = forms.into_iter().flatten().collect();
    if forms.is_empty() {
        return Err(Error::VacuousSubspace);
    }
    let eval = |alpha: f64| -> (f64, bool) {
        let rows = exec::map(forms.len(), |i| {
            let h = &forms[i].0 * linalg::c(alpha) + &forms[i].1;
            (linalg::min_hermitian_eigenvalue(&h), h.norm())
        });
        let margin = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let scale = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        (margin, Definiteness::Strict.decide(margin, scale).0)
    };

    let mut found = None;
    let mut trajectory = Vec::new();
    for j in 0..=26 {
        let alpha = 0.5f64.powi(j);
        let (margin, ok) = eval(alpha);
        trajectory.push(format!("{alpha:.3e}:{margin:.3e}"));
        if ok {
            found = Some((alpha, margin));
            break;
        }
    }
    let Some((lo, lo_margin)) = found else {
        return Err(Error::SearchFailed(format!(
            "no alpha in (1e-8, 1] certifies positivity; check (K)/(S) or refine the sampling (alpha:margin {})",
            trajectory.join(", ")
        )));
    };

    // the certified set is an interval; push its upper end
    let (mut a_ok, mut m_ok) = (lo, lo_margin);
    if lo < 1.0 {
        let mut a_bad = 2.0 * lo;
        for _ in 0..50 {
            let mid = 0.5 * (a_ok + a_bad);
            let (m, ok) = eval(mid);
            if ok {
                a_ok = mid;
                m_ok = m;
            } else {
                a_bad = mid;
            }
            if a_bad - a_ok <= 1e-12 * a_bad {
                break;
            }
        }
    }

    // golden-section search for the margin maximizer on (0, a_ok]
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x0, mut x1) = (0.0, a_ok);
    let mut xa = x1 - g * (x1 - x0);
    let mut xb = x0 + g * (x1 - x0);
    let (mut fa, mut fb) = (eval(xa).0, eval(xb).0);
    for _ in 0..60 {
        if fa < fb {
            x0 = xa;
            xa = xb;
            fa = fb;
            xb = x0 + g * (x1 - x0);
            fb = eval(xb).0;
        } else {
            x1 = xb;
            xb = xa;
            fb = fa;
            xa = x1 - g * (x1 - x0);
            fa = eval(xa).0;
        }
        if x1 - x0 <= 1e-10 * a_ok {
            break;
        }
    }
    let mid = 0.5 * (x0 + x1);
    let (mut best_alpha, mut best_margin) = (mid, eval(mid).0);
    for (a, m) in [(lo, lo_margin), (a_ok, m_ok)] {
        if m > best_margin {
            best_alpha = a;
            best_margin = m;
        }
    }
    if !eval(best_alpha).1 {
        best_alpha = lo;
        best_margin = lo_margin;
    }
    Ok(AlphaCertificate { alpha: a_ok, margin: m_ok, best_alpha, best_margin })
}

/// `[L; LÃ; …; LÃ^{m−1}]`, an `m²×m` matrix.
pub fn kalman_stack(sys: &HyperbolicSystem, d: &Direction) -> Result<RMat> {
    let m = sys.m();
    let at = sys.a_tilde(d)?;
    let mut out = RMat::zeros(m * m, m);
    let mut block = sys.l().clone();
    for k in 0..m {
        out.view_mut((k * m, 0), (m, m)).copy_from(&block);
        block = &block * &at;
    }
    Ok(out)
}

/// Condition (R): the Kalman stack has full column rank at every sampled direction.
pub fn check_r(sys: &HyperbolicSystem, sph: &SphereSampling) -> Result<ConditionEntry> {
    check_sampling(sys, sph)?;
    let pts = sph.points();
    let rows = exec::try_map(pts.len(), |i| -> Result<(f64, f64, usize)> {
        let sv = linalg::singular_values(&to_complex(&kalman_stack(sys, &pts[i])?));
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&x| smax > 0.0 && x > RANK_TOL * smax).count();
        Ok((smin, smax, rank))
    })?;
    let mut worst = (f64::INFINITY, 0.0, usize::MAX, 0usize);
    let mut passed = true;
    for (i, &(smin, smax, rank)) in rows.iter().enumerate() {
        passed &= rank == sys.m();
        if smin < worst.0 {
            worst = (smin, smax, rank, i);
        }
    }
    let details = format!(
        "min sigma_min of [L; LA~; ...; LA~^(m-1)] = {:.6e} (sigma_max {:.3e}); rank {} of {} at worst direction",
        worst.0,
        worst.1,
        worst.2,
        sys.m()
    );
    let margin = if passed { worst.0 } else { worst.0 - RANK_TOL * worst.1 };
    Ok(ConditionEntry::new(passed, margin, RANK_TOL * worst.1, details).at(Some(pts[worst.3].as_slice().to_vec())))
}

/// Residual norms of `QÃ = 0`, `RA0⁻¹L = 0` and `QA0⁻¹L + RÃ = 0` at `ω`.
pub fn c_residuals(sys: &HyperbolicSystem, cb: &ConstraintBlock, d: &Direction) -> Result<[f64; 3]> {
    let inv = sys.a0_inv()?;
    let q = cb.q_of(d.as_slice());
    let at = sys.a_tilde(d)?;
    let r1 = (&q * &at).norm();
    let r2 = (cb.r() * inv * sys.l()).norm();
    let r3 = (&q * inv * sys.l() + cb.r() * &at).norm();
    Ok([r1, r2, r3])
}

/// Condition (C): the constraint is propagated by the evolution.
pub fn check_c(sys: &HyperbolicSystem, cb: &ConstraintBlock, sph: &SphereSampling) -> Result<ConditionEntry> {
    check_sampling(sys, sph)?;
    check_constraint_dims(sys, cb)?;
    let pts = sph.points();
    let rows = exec::try_map(pts.len(), |i| c_residuals(sys, cb, &pts[i]))?;
    let mut worst = ([0.0; 3], 0usize);
    for (i, r) in rows.iter().enumerate() {
        if r.iter().copied().fold(0.0, f64::max) > worst.0.iter().copied().fold(0.0, f64::max) {
            worst = (*r, i);
        }
    }
    let max_res = worst.0.iter().copied().fold(0.0, f64::max);
    let passed = max_res < IDENTITY_TOL;
    let mut details = format!(
        "max residuals: Q A~ = {:.3e}, R A0^-1 L = {:.3e}, Q A0^-1 L + R A~ = {:.3e}",
        worst.0[0], worst.0[1], worst.0[2]
    );
    if passed {
        details.push_str("; hence d/dt(i|xi|Q u + R u) = 0 along solutions");
    }
    Ok(ConditionEntry::new(passed, IDENTITY_TOL - max_res, IDENTITY_TOL, details).at(Some(pts[worst.1].as_slice().to_vec())))
}

/// `T(ω) = (Π₁Q(ω))ᵀ S̃ R`.
pub fn t_matrix(cb: &ConstraintBlock, s_tilde: &RMat, d: &Direction) -> RMat {
    (cb.pi1() * cb.q_of(d.as_slice())).transpose() * s_tilde * cb.r()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SstarVariant {
    /// nonnegativity on `Ker(L₁)`
    One,
    /// nonnegativity on `C^m`
    Two,
}

/// Conditions (S*)₁/(S*)₂: `S̃₁ ⪰ 0` on `Image(R)` and
/// `i(SA(ω) − T(ω))₂ ⪰ 0` on `Ker(L₁)` or `C^m`.
pub fn check_sstar(
    sys: &HyperbolicSystem,
    cb: &ConstraintBlock,
    s: &RMat,
    s_tilde: &RMat,
    sph: &SphereSampling,
    variant: SstarVariant,
) -> Result<ConditionEntry> {
    check_sampling(sys, sph)?;
    check_constraint_dims(sys, cb)?;
    check_square("S", s, sys.m())?;
    check_square("S_tilde", s_tilde, cb.m1())?;

    let img = SubspaceBasis { basis: linalg::range_space(&to_complex(cb.r()), KERNEL_TOL), tol: KERNEL_TOL };
    let st1 = to_complex(&linalg::sym(s_tilde));
    let st_margin = if img.is_empty() { 0.0 } else { min_eig_on_subspace(&st1, &img)? };
    let (st_ok, _) = Definiteness::Semi.decide(st_margin, st1.norm());

    let ker = l1_kernel(sys);
    let space = match variant {
        SstarVariant::One => Some(&ker),
        SstarVariant::Two => None,
    };
    if space.is_some_and(|b| b.is_empty()) {
        return Ok(ConditionEntry::new(st_ok, st_margin.min(0.0), 0.0, "Ker(L1) = {0}").at(None).warn("vacuous: Ker(L1) is trivial"));
    }
    let w = semidefinite_sweep(sph, space, |d| Ok(i_skew(&(s * sys.assemble_a(d)? - t_matrix(cb, s_tilde, d)))))?;
    let where_ = if variant == SstarVariant::One { "Ker(L1)" } else { "C^m" };
    let mut e = w.entry(
        Definiteness::Semi,
        format!("min over omega of lambda_min(i(SA - T)2) on {where_}; lambda_min(S~1) on Image(R) = {st_margin:.6e}"),
    );
    if !st_ok {
        e.passed = false;
        e.margin = e.margin.min(st_margin);
        e = e.warn("S_tilde is not nonnegative on Image(R)");
    }
    Ok(e)
}

/// Inputs for a full condition suite. Missing `S` is taken as `S = 0`.
#[derive(Debug, Clone, Copy)]
pub struct SuiteInputs<'a> {
    pub sys: &'a HyperbolicSystem,
    pub constraint: Option<&'a ConstraintBlock>,
    pub s: Option<&'a RMat>,
    pub k: Option<&'a CompensatorSpec>,
    pub s_tilde: Option<&'a RMat>,
}

/// Run every condition that applies to the given inputs.
pub fn run_suite(inp: SuiteInputs<'_>, sph: &SphereSampling) -> Result<ConditionReport> {
    let sys = inp.sys;
    let mut rep = ConditionReport::default();
    rep.insert(ConditionName::A, system::validate_condition_a(sys));
    rep.insert(ConditionName::A0, system::validate_condition_a0(sys));
    let zero = RMat::zeros(sys.m(), sys.m());
    let s = inp.s.unwrap_or(&zero);
    rep.insert(ConditionName::S, check_s(sys, s)?);
    rep.insert(ConditionName::S1, check_s1(sys, s, sph)?);
    rep.insert(ConditionName::S2, check_s2(sys, s, sph)?);
    if sys.a0_inv().is_ok() {
        rep.insert(ConditionName::R, check_r(sys, sph)?);
    }
    if let Some(k) = inp.k {
        match k_sweep(sys, k, sph, None) {
            Ok(sw) => rep.insert(ConditionName::K, k_entry(&sw, "Ker(L)")),
            Err(Error::VacuousSubspace) => {
                rep.insert(ConditionName::K, ConditionEntry::new(false, 0.0, 0.0, "Ker(L) = {0}: (K) is not applicable"))
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(cb) = inp.constraint {
        if sys.a0_inv().is_ok() {
            rep.insert(ConditionName::C, check_c(sys, cb, sph)?);
        }
        if let Some(k) = inp.k {
            rep.insert(ConditionName::Kstar, check_kstar(sys, cb, k, sph)?);
        }
        let zt = RMat::zeros(cb.m1(), cb.m1());
        let st = inp.s_tilde.unwrap_or(&zt);
        rep.insert(ConditionName::Sstar1, check_sstar(sys, cb, s, st, sph, SstarVariant::One)?);
        rep.insert(ConditionName::Sstar2, check_sstar(sys, cb, s, st, sph, SstarVariant::Two)?);
    }
    Ok(rep)
}
