//! Dense linear-algebra helpers on top of nalgebra.
//!
//! Everything here works on small dynamic matrices (m ≤ 64). Real data is
//! promoted to complex where a Hermitian form or a Fourier-space operator is
//! needed.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(c)
}

/// `(M + Mᵀ)/2`
pub fn sym(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// `(M − Mᵀ)/2`
pub fn skew(m: &RMat) -> RMat {
    (m - m.transpose()) * 0.5
}

/// `(M + Mᴴ)/2`
pub fn herm(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5)
}

/// Build a matrix from a list of rows.
pub fn from_rows(rows: &[Vec<f64>]) -> Option<RMat> {
    let r = rows.len();
    let k = rows.first().map_or(0, |x| x.len());
    if rows.iter().any(|x| x.len() != k) {
        return None;
    }
    Some(RMat::from_fn(r, k, |i, j| rows[i][j]))
}

pub fn to_rows(m: &RMat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn block_diag(blocks: &[&RMat]) -> RMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let k: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = RMat::zeros(n, k);
    let (mut r, mut q) = (0, 0);
    for b in blocks {
        out.view_mut((r, q), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        q += b.ncols();
    }
    out
}

/// Ascending eigenvalues of a Hermitian matrix. Only the Hermitian part of
/// `h` is used.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let hh = herm(h);
    let mut ev: Vec<f64> = hh.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_hermitian_eigenvalue(h: &CMat) -> f64 {
    hermitian_eigenvalues(h).first().copied().unwrap_or(f64::INFINITY)
}

/// Eigenvalues of a general complex matrix via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100 * n * n)
        .unwrap_or_else(|| m.clone().schur());
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Singular values (descending) and right singular vectors as columns.
fn svd_right(m: &CMat) -> (Vec<f64>, CMat) {
    let (r, k) = m.shape();
    // pad wide matrices with zero rows so the right factor is complete
    let sq = if r < k {
        let mut p = CMat::zeros(k, k);
        p.view_mut((0, 0), (r, k)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    (sv, vt.adjoint())
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis (columns) of `{z : M z = 0}`; rank is decided by
/// singular values at or below `tol · σ_max`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let k = m.ncols();
    if k == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(k, k);
    }
    let (sv, v) = svd_right(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let cols: Vec<usize> = (0..k)
        .filter(|&j| sv.get(j).is_none_or(|&s| s <= tol * smax || smax == 0.0))
        .collect();
    select_columns(&v, &cols)
}

/// Orthonormal basis of the column space of `m`.
pub fn range_space(m: &CMat, tol: f64) -> CMat {
    let (r, k) = m.shape();
    if r == 0 || k == 0 {
        return CMat::zeros(r, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..sv.len()).filter(|&j| smax > 0.0 && sv[j] > tol * smax).collect();
    select_columns(&u, &cols)
}

fn select_columns(m: &CMat, cols: &[usize]) -> CMat {
    let mut out = CMat::zeros(m.nrows(), cols.len());
    for (o, &j) in cols.iter().enumerate() {
        out.set_column(o, &m.column(j));
    }
    out
}

pub fn projector(basis: &CMat) -> CMat {
    basis * basis.adjoint()
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases; `None` when the dimensions differ.
pub fn subspace_distance(b1: &CMat, b2: &CMat) -> Option<f64> {
    if b1.ncols() != b2.ncols() || b1.nrows() != b2.nrows() {
        return None;
    }
    if b1.ncols() == 0 {
        return Some(0.0);
    }
    let p1 = projector(b1);
    let resid = b2 - &p1 * b2;
    Some(spectral_norm(&resid))
}

/// Basis of `span(b1) ∩ span(b2)` as the kernel of `(I − P1) + (I − P2)`.
pub fn intersection(b1: &CMat, b2: &CMat, tol: f64) -> CMat {
    let m = b1.nrows();
    let id = CMat::identity(m, m);
    let h = (&id - projector(b1)) + (&id - projector(b2));
    // the operator is PSD with eigenvalues in [0, 2]; compare absolutely
    let (sv, v) = svd_right(&h);
    let cols: Vec<usize> = (0..m).filter(|&j| sv[j] <= tol.max(1e-12) * 2.0).collect();
    select_columns(&v, &cols)
}

/// Smallest generalized eigenvalue of `D z = λ E z` for Hermitian `D` and
/// positive definite `E`; `None` when `E` is not positive definite.
pub fn min_generalized_eigenvalue(d: &CMat, e: &CMat) -> Option<f64> {
    let chol = herm(e).cholesky()?;
    let l = chol.l();
    // complex Cholesky takes square roots of negative pivots without failing
    if l.diagonal().iter().any(|z| !(z.re > 0.0) || z.im.abs() > 1e-12 * z.re) {
        return None;
    }
    let linv = l.clone().try_inverse()?;
    let w = &linv * herm(d) * linv.adjoint();
    Some(min_hermitian_eigenvalue(&w))
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(m: &CMat) -> CMat {
    m.exp()
}
