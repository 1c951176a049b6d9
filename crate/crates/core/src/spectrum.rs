//! Eigenvalues of the Fourier-space generator, frequency sweeps and the
//! `(p, q)` classification of `Re λ(iξ) ≤ −c|ξ|^{2p}/(1+|ξ|²)^q`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::constraint::ConstraintBlock;
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{self, CMat, C64};
use crate::sphere::SphereSampling;
use crate::system::{Direction, Frequency, HyperbolicSystem, KERNEL_TOL};

/// Bound on `‖(I − BBᴴ)GB‖ / max(1, ‖G‖)` for the constraint subspace.
pub const INVARIANCE_TOL: f64 = 1e-8;
/// Smallest sweep accepted by [`sweep`].
pub const MIN_SWEEP_POINTS: usize = 48;

/// `Bᴴ G(ξ) B` for an orthonormal basis `B` of `N(ξ) = Ker(i|ξ|Q(ω) + R)`,
/// after checking that `N(ξ)` is invariant under `G(ξ)`.
pub fn restricted_generator(sys: &HyperbolicSystem, f: &Frequency, cb: &ConstraintBlock) -> Result<(CMat, CMat)> {
    let g = sys.generator(f)?;
    let b = cb.admissible(f, KERNEL_TOL).basis;
    let gb = &g * &b;
    let leak = &gb - &b * (b.adjoint() * &gb);
    let resid = leak.norm() / g.norm().max(1.0);
    if resid >= INVARIANCE_TOL {
        return Err(Error::NotInvariant(resid));
    }
    Ok((b.adjoint() * gb, b))
}

/// Eigenvalues of `G(ξ)`, or of its restriction to `N(ξ)` when a
/// constraint block is given.
pub fn eigenvalues_at(sys: &HyperbolicSystem, f: &Frequency, cb: Option<&ConstraintBlock>) -> Result<Vec<C64>> {
    match cb {
        None => Ok(linalg::eigenvalues(&sys.generator(f)?)),
        Some(cb) => Ok(linalg::eigenvalues(&restricted_generator(sys, f, cb)?.0)),
    }
}

/// Largest real part of the spectrum at `ξ`.
pub fn abscissa_at(sys: &HyperbolicSystem, f: &Frequency, cb: Option<&ConstraintBlock>) -> Result<f64> {
    Ok(eigenvalues_at(sys, f, cb)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > a) || n < 2 {
        return Err(Error::InvalidParameter(format!("log grid needs 0 < a < b and n >= 2, got a = {a}, b = {b}, n = {n}")));
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => a,
            _ if i == n - 1 => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSweep {
    pub s_grid: Vec<f64>,
    pub omegas: Vec<Vec<f64>>,
    /// `abscissa[i][j]` is the spectral abscissa at `s_grid[i]`, `omegas[j]`.
    pub abscissa: Vec<Vec<f64>>,
    pub restricted: bool,
}

/// Spectral abscissa over `s_grid × sph`.
pub fn sweep(sys: &HyperbolicSystem, s_grid: &[f64], sph: &SphereSampling, cb: Option<&ConstraintBlock>) -> Result<SpectrumSweep> {
    if s_grid.len() < MIN_SWEEP_POINTS {
        return Err(Error::InvalidParameter(format!("a sweep needs at least {MIN_SWEEP_POINTS} points, got {}", s_grid.len())));
    }
    if s_grid.windows(2).any(|w| !(w[1] > w[0])) || s_grid[0] < 1e-4 || s_grid[s_grid.len() - 1] > 1e4 {
        return Err(Error::InvalidParameter("s grid must be strictly increasing within [1e-4, 1e4]".into()));
    }
    sweep_unchecked(sys, s_grid, sph, cb)
}

pub(crate) fn sweep_unchecked(sys: &HyperbolicSystem, s_grid: &[f64], sph: &SphereSampling, cb: Option<&ConstraintBlock>) -> Result<SpectrumSweep> {
    if sph.n() != sys.n() {
        return Err(Error::Dimension(format!("sphere sampling is in dimension {}, system has n = {}", sph.n(), sys.n())));
    }
    let pts = sph.points();
    let k = pts.len();
    let flat = exec::try_map(s_grid.len() * k, |idx| {
        let f = Frequency::from_polar(s_grid[idx / k], &pts[idx % k]);
        abscissa_at(sys, &f, cb)
    })?;
    Ok(SpectrumSweep {
        s_grid: s_grid.to_vec(),
        omegas: pts.iter().map(|d| d.as_slice().to_vec()).collect(),
        abscissa: flat.chunks(k).map(|c| c.to_vec()).collect(),
        restricted: cb.is_some(),
    })
}

impl SpectrumSweep {
    /// `max_ω` abscissa for each `s`.
    pub fn max_abscissa(&self) -> Vec<f64> {
        self.abscissa.iter().map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect()
    }

    /// CSV with columns `s, omega_index, omega_1..omega_n, max_re_lambda`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let n = self.omegas.first().map_or(0, |o| o.len());
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["s".to_string(), "omega_index".to_string()];
        header.extend((1..=n).map(|j| format!("omega_{j}")));
        header.push("max_re_lambda".into());
        wr.write_record(&header)?;
        for (i, s) in self.s_grid.iter().enumerate() {
            for (j, om) in self.omegas.iter().enumerate() {
                let mut rec = vec![format!("{s:e}"), j.to_string()];
                rec.extend(om.iter().map(|x| format!("{x:e}")));
                rec.push(format!("{:e}", self.abscissa[i][j]));
                wr.write_record(&rec)?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<SpectrumSweep> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers()?.clone();
        let ncols = header.len();
        if ncols < 4 || &header[0] != "s" || &header[1] != "omega_index" || &header[ncols - 1] != "max_re_lambda" {
            return Err(Error::Parse("sweep CSV needs columns s, omega_index, omega_*, max_re_lambda".into()));
        }
        let mut sweep = SpectrumSweep { s_grid: Vec::new(), omegas: Vec::new(), abscissa: Vec::new(), restricted: false };
        for (line, rec) in rd.records().enumerate() {
            let rec = rec?;
            let num = |k: usize| -> Result<f64> {
                rec[k].trim().parse().map_err(|_| Error::Parse(format!("sweep CSV row {}: bad number '{}'", line + 2, &rec[k])))
            };
            let s = num(0)?;
            let j: usize = rec[1].trim().parse().map_err(|_| Error::Parse(format!("sweep CSV row {}: bad omega_index", line + 2)))?;
            if sweep.s_grid.last() != Some(&s) {
                sweep.s_grid.push(s);
                sweep.abscissa.push(Vec::new());
            }
            let row = sweep.abscissa.last_mut().expect("row pushed above");
            if j != row.len() {
                return Err(Error::Parse(format!("sweep CSV row {}: omega_index out of order", line + 2)));
            }
            row.push(num(ncols - 1)?);
            if sweep.s_grid.len() == 1 {
                sweep.omegas.push((2..ncols - 1).map(num).collect::<Result<_>>()?);
            }
        }
        if sweep.abscissa.is_empty() || sweep.abscissa.iter().any(|r| r.len() != sweep.omegas.len()) {
            return Err(Error::Parse("sweep CSV is empty or has rows of unequal length".into()));
        }
        Ok(sweep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub low: (f64, f64),
    pub high: (f64, f64),
    /// Bound on the spread of sub-decade slopes around the fitted slope.
    pub residual_tol: f64,
    /// Allowed distance of a slope from its integer target.
    pub slope_tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { low: (1e-3, 1e-1), high: (1e1, 1e3), residual_tol: 0.15, slope_tol: 0.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// Largest deviation of a sub-decade slope from `slope`.
    pub residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub low: Option<SlopeFit>,
    pub high: Option<SlopeFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipativityType {
    pub p: u32,
    pub q: u32,
    pub c: f64,
    pub fit: FitDiagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Classification {
    Classified(DissipativityType),
    Unclassified { reason: String, fit: FitDiagnostics },
}

impl Classification {
    pub fn pq(&self) -> Option<(u32, u32)> {
        match self {
            Classification::Classified(t) => Some((t.p, t.q)),
            Classification::Unclassified { .. } => None,
        }
    }

    pub fn fit(&self) -> &FitDiagnostics {
        match self {
            Classification::Classified(t) => &t.fit,
            Classification::Unclassified { fit, .. } => fit,
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `log y` vs `log s` on `[lo, hi]` with the sub-decade spread.
pub fn fit_window(s: &[f64], y: &[f64], lo: f64, hi: f64) -> Option<SlopeFit> {
    let eps = 1e-9;
    let sel: Vec<(f64, f64)> = s
        .iter()
        .zip(y)
        .filter(|(&si, &yi)| si >= lo * (1.0 - eps) && si <= hi * (1.0 + eps) && yi > 0.0)
        .map(|(&si, &yi)| (si.log10(), yi.log10()))
        .collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) = sel.iter().copied().unzip();
    let slope = ls_slope(&lx, &ly)?;
    let mut residual = 0.0f64;
    let (d0, d1) = (lo.log10().round() as i32, hi.log10().round() as i32);
    for d in d0..d1.max(d0 + 1) {
        let (a, b) = (d as f64 - eps, (d + 1) as f64 + eps);
        let (sx, sy): (Vec<f64>, Vec<f64>) = sel.iter().filter(|(x, _)| *x >= a && *x <= b).copied().unzip();
        if let Some(sub) = ls_slope(&sx, &sy) {
            residual = residual.max((sub - slope).abs());
        }
    }
    Some(SlopeFit { slope, residual, points: lx.len() })
}

/// Classify the uniform dissipativity type from a sweep.
pub fn classify(sw: &SpectrumSweep, cfg: &ClassifyConfig) -> Classification {
    let amax = sw.max_abscissa();
    let pairs: Vec<(f64, f64)> = sw.s_grid.iter().copied().zip(amax.iter().copied()).filter(|(s, _)| *s > 0.0).collect();
    let decay: Vec<f64> = pairs.iter().map(|(_, a)| -a).collect();
    let s: Vec<f64> = pairs.iter().map(|(s, _)| *s).collect();
    let low = fit_window(&s, &decay, cfg.low.0, cfg.low.1);
    let high = fit_window(&s, &decay, cfg.high.0, cfg.high.1);
    let fit = FitDiagnostics { low, high };
    let unclassified = |reason: String| Classification::Unclassified { reason, fit: fit.clone() };

    let span_ok = s.first().is_some_and(|&a| a <= cfg.low.0 * (1.0 + 1e-9)) && s.last().is_some_and(|&b| b >= cfg.high.1 * (1.0 - 1e-9));
    if !span_ok {
        return unclassified(format!("sweep must span [{:e}, {:e}]", cfg.low.0, cfg.high.1));
    }
    if let Some((s0, a0)) = pairs.iter().find(|(_, a)| !(*a < 0.0)) {
        return unclassified(format!("no decay: spectral abscissa {a0:e} >= 0 at s = {s0:e}"));
    }
    let (Some(low), Some(high)) = (low, high) else {
        return unclassified("too few points in a fit window".into());
    };
    for (name, f) in [("low", low), ("high", high)] {
        if f.residual >= cfg.residual_tol {
            return unclassified(format!("{name}-frequency slope {:.4} is not a clean power law (residual {:.4})", f.slope, f.residual));
        }
    }
    let p = (low.slope / 2.0).round();
    if p < 1.0 || (low.slope - 2.0 * p).abs() > cfg.slope_tol {
        return unclassified(format!("low-frequency slope {:.4} is not a positive even integer", low.slope));
    }
    let r = (-high.slope / 2.0).round();
    if r < 0.0 || (high.slope + 2.0 * r).abs() > cfg.slope_tol {
        return unclassified(format!("high-frequency slope {:.4} is not a nonpositive even integer", high.slope));
    }
    let (p, q) = (p as u32, (p + r) as u32);
    let c = pairs
        .iter()
        .map(|(s, a)| -a * (1.0 + s * s).powi(q as i32) / s.powi(2 * p as i32))
        .fold(f64::INFINITY, f64::min);
    if !(c > 0.0) {
        return unclassified(format!("no positive constant c for type ({p}, {q})"));
    }
    let mut notes = Vec::new();
    if p != 1 {
        notes.push(format!("p = {p}: outside the catalog examples (p = 1)"));
    }
    Classification::Classified(DissipativityType { p, q, c, fit, notes })
}

/// Largest violation of `Re λ ≤ −c s^{2p}/(1+s²)^q` over the sweep.
pub fn bound_violation(sw: &SpectrumSweep, t: &DissipativityType) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (s, row) in sw.s_grid.iter().zip(&sw.abscissa) {
        let bound = -t.c * s.powi(2 * t.p as i32) / (1.0 + s * s).powi(t.q as i32);
        for a in row {
            worst = worst.max(a - bound);
        }
    }
    worst
}

/// Spectrum at `ω` and `−ω` is conjugate-symmetric for a real system; returns
/// the largest distance between matched eigenvalues.
pub fn conjugate_symmetry_residual(sys: &HyperbolicSystem, s: f64, d: &Direction) -> Result<f64> {
    let a = eigenvalues_at(sys, &Frequency::from_polar(s, d), None)?;
    let b: Vec<C64> = eigenvalues_at(sys, &Frequency::from_polar(s, &d.neg()), None)?.iter().map(|z| z.conj()).collect();
    // greedy nearest matching
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in &a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if j != usize::MAX {
            used[j] = true;
            worst = worst.max(dist);
        }
    }
    Ok(worst)
}
