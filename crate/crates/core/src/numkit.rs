//! Dense complex linear algebra at small dimensions.
//!
//! Everything in the crate works on `n ≤ 8` systems, so matrices are plain
//! `nalgebra` dynamic matrices of `Complex64`. Vectorisation follows the
//! row-major convention `vec(A)[i·cols + j] = A[(i, j)]`, i.e. the entry
//! `a_ij` sits on the basis vector `|i⟩|j⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;

/// Relative tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Builds a matrix from row slices of complex entries.
pub fn from_rows(rows: &[Vec<Complex64>]) -> CMat {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    CMat::from_fn(r, cols, |i, j| rows[i][j])
}

/// Builds a matrix from row slices of real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, cols, |i, j| cr(rows[i][j]))
}

pub fn diag(entries: &[Complex64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { cr(0.0) })
}

pub fn diag_real(entries: &[f64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { cr(entries[i]) } else { cr(0.0) })
}

/// Pauli matrices in the order (I, X, Y, Z).
pub fn pauli(k: usize) -> CMat {
    let (o, z, i) = (cr(1.0), cr(0.0), c(0.0, 1.0));
    match k {
        0 => from_rows(&[vec![o, z], vec![z, o]]),
        1 => from_rows(&[vec![z, o], vec![o, z]]),
        2 => from_rows(&[vec![z, -i], vec![i, z]]),
        3 => from_rows(&[vec![o, z], vec![z, -o]]),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().sum()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Row-major vectorisation: `vec(A) = (A ⊗ I)|I⟩`.
pub fn mat_to_vec(a: &CMat) -> CVec {
    let (r, cols) = a.shape();
    CVec::from_fn(r * cols, |k, _| a[(k / cols, k % cols)])
}

pub fn vec_to_mat(v: &CVec, rows: usize, cols: usize) -> Result<CMat> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape vector of length {} into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

fn check_bipartite(m: &CMat, dim_a: usize, dim_b: usize) -> Result<()> {
    let d = dim_a * dim_b;
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {d}x{d} for dims {dim_a}x{dim_b}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Partial trace over `subsystem` of an operator on `C^dim_a ⊗ C^dim_b`.
pub fn partial_trace(m: &CMat, dim_a: usize, dim_b: usize, subsystem: Subsystem) -> Result<CMat> {
    check_bipartite(m, dim_a, dim_b)?;
    Ok(match subsystem {
        Subsystem::Second => {
            CMat::from_fn(dim_a, dim_a, |i, j| (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum())
        }
        Subsystem::First => {
            CMat::from_fn(dim_b, dim_b, |i, j| (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum())
        }
    })
}

/// Partial transpose with respect to `subsystem`.
pub fn partial_transpose(m: &CMat, dim_a: usize, dim_b: usize, subsystem: Subsystem) -> Result<CMat> {
    check_bipartite(m, dim_a, dim_b)?;
    let d = dim_a * dim_b;
    Ok(CMat::from_fn(d, d, |r, col| {
        let (i, k) = (r / dim_b, r % dim_b);
        let (j, l) = (col / dim_b, col % dim_b);
        match subsystem {
            Subsystem::First => m[(j * dim_b + k, i * dim_b + l)],
            Subsystem::Second => m[(i * dim_b + l, j * dim_b + k)],
        }
    }))
}

/// Largest entry of `|M − M†|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(m: &CMat, rel_tol: f64) -> bool {
    m.is_square() && hermiticity_defect(m) <= rel_tol * m.norm().max(1.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * cr(0.5)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `k` belongs to `values[k]`.
    pub vectors: CMat,
}

impl Eigh {
    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }
}

pub fn eigh(m: &CMat) -> Result<Eigh> {
    if !is_hermitian(m, HERMITIAN_TOL) {
        return Err(Error::NotHermitian(hermiticity_defect(m)));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Singular value decomposition `m = U·diag(s)·V†` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn reconstruct(&self) -> CMat {
        let k = self.s.len();
        let sigma = CMat::from_fn(k, k, |i, j| if i == j { cr(self.s[i]) } else { cr(0.0) });
        &self.u * sigma * self.v.adjoint()
    }
}

/// Thin SVD: `U` is `rows×k`, `V` is `cols×k` with `k = min(rows, cols)`.
pub fn svd(m: &CMat) -> Svd {
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("requested U");
    let v = dec.v_t.expect("requested V").adjoint();
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    Svd {
        u: CMat::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]),
        s: order.iter().map(|&k| dec.singular_values[k]).collect(),
        v: CMat::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]),
    }
}

/// Orthonormal basis of the right null space of `m`, using the relative
/// threshold `rel_tol · σ_max`.
pub fn nullspace(m: &CMat, rel_tol: f64) -> Vec<CVec> {
    let (rows, cols) = m.shape();
    let padded;
    let target = if rows < cols {
        padded = {
            let mut p = CMat::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(m);
            p
        };
        &padded
    } else {
        m
    };
    let dec = svd(target);
    let top = dec.s.first().copied().unwrap_or(0.0);
    let cut = rel_tol * top.max(f64::MIN_POSITIVE);
    (0..cols).filter(|&k| dec.s[k] <= cut).map(|k| dec.v.column(k).into_owned()).collect()
}

/// Real analogue of [`nullspace`].
pub fn real_nullspace(m: &RMat, rel_tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    let mut target = RMat::zeros(rows.max(cols), cols);
    target.view_mut((0, 0), (rows, cols)).copy_from(m);
    let dec = target.svd(false, true);
    let v = dec.v_t.expect("requested V").transpose();
    let top = dec.singular_values.max();
    let cut = rel_tol * top.max(f64::MIN_POSITIVE);
    (0..cols).filter(|&k| dec.singular_values[k] <= cut).map(|k| v.column(k).into_owned()).collect()
}

/// Takagi factorisation `s = V·diag(σ)·Vᵀ` of a complex symmetric matrix.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub v: CMat,
    /// Descending, nonnegative.
    pub sigma: Vec<f64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> CMat {
        let d = diag_real(&self.sigma);
        &self.v * d * self.v.transpose()
    }
}

/// Takagi factorisation through the real symmetric embedding
/// `[[Re s, Im s], [Im s, −Re s]]`, whose positive eigenpairs `(σ, [x; y])`
/// give Takagi vectors `x + i·y`. The spectrum of the embedding is `±σ`, so
/// the positive half yields mutually orthonormal complex vectors; the
/// kernel part is completed to a unitary.
pub fn takagi(s: &CMat) -> Result<Takagi> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch("takagi needs a square matrix".into()));
    }
    let n = s.nrows();
    let asym = (s - s.transpose()).norm();
    if asym > 1e-12 * s.norm().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (s + s.transpose()) * cr(0.5);
    let mut emb = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = sym[(i, j)];
            emb[(i, j)] = z.re;
            emb[(i, j + n)] = z.im;
            emb[(i + n, j)] = z.im;
            emb[(i + n, j + n)] = -z.re;
        }
    }
    let eig = emb.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]].max(0.0);
    let cut = 1e-13 * top.max(f64::MIN_POSITIVE);

    let mut columns: Vec<CVec> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let lam = eig.eigenvalues[k];
        if lam <= cut {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let u = CVec::from_fn(n, |i, _| c(col[i], col[i + n]));
        columns.push(u);
        sigma.push(lam);
    }
    // Kernel directions: any orthonormal completion works because σ = 0 there.
    complete_orthonormal(&mut columns, n);
    sigma.resize(n, 0.0);
    let v = CMat::from_columns(&columns);
    Ok(Takagi { v, sigma })
}

/// Extends an orthonormal family in `C^n` to an orthonormal basis.
pub fn complete_orthonormal(columns: &mut Vec<CVec>, n: usize) {
    let mut k = 0;
    while columns.len() < n && k < n {
        let mut cand = CVec::from_fn(n, |i, _| if i == k { cr(1.0) } else { cr(0.0) });
        for _ in 0..2 {
            for q in columns.iter() {
                let overlap = q.dotc(&cand);
                cand -= q * overlap;
            }
        }
        let nrm = cand.norm();
        if nrm > 1e-8 {
            columns.push(cand / cr(nrm));
        }
        k += 1;
    }
}

/// Orthonormalises `vectors` (Gram–Schmidt), dropping dependent ones.
pub fn orthonormalize(vectors: &[CVec], tol: f64) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let overlap = q.dotc(&w);
                w -= q * overlap;
            }
        }
        let nrm = w.norm();
        if nrm > tol {
            out.push(w / cr(nrm));
        }
    }
    out
}

/// Default numerical-rank threshold: `1e-9 · λ_max`.
pub fn default_rank_tol(eig: &Eigh) -> f64 {
    1e-9 * eig.max_value().abs().max(f64::MIN_POSITIVE)
}

/// Square root `X` with `m = X·X†`; columns are `√λ_k·v_k` for `λ_k > tol`.
///
/// `tol = None` uses [`default_rank_tol`]. Eigenvalues below `−tol` mean the
/// input is not positive semidefinite.
pub fn sqrt_psd(m: &CMat, tol: Option<f64>) -> Result<CMat> {
    let eig = eigh(m)?;
    let tol = tol.unwrap_or_else(|| default_rank_tol(&eig));
    if eig.min_value() < -tol {
        return Err(Error::NotPositive(eig.min_value()));
    }
    let cols: Vec<CVec> = (0..eig.values.len())
        .rev()
        .filter(|&k| eig.values[k] > tol)
        .map(|k| eig.vector(k) * cr(eig.values[k].sqrt()))
        .collect();
    if cols.is_empty() {
        return Ok(CMat::zeros(m.nrows(), 0));
    }
    Ok(CMat::from_columns(&cols))
}

/// Principal (Hermitian) square root of a PSD matrix; negative noise is clipped.
pub fn herm_sqrt(m: &CMat) -> Result<CMat> {
    herm_fn(m, |x| x.max(0.0).sqrt())
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let eig = eigh(m)?;
    let d = diag_real(&eig.values.iter().map(|&x| f(x)).collect::<Vec<_>>());
    Ok(&eig.vectors * d * eig.vectors.adjoint())
}

/// Number of eigenvalues above `tol`.
pub fn numerical_rank(values: &[f64], tol: f64) -> usize {
    values.iter().filter(|&&x| x > tol).count()
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Outer product `|u⟩⟨v|`.
pub fn outer(u: &CVec, v: &CVec) -> CMat {
    u * v.adjoint()
}

pub fn projector(u: &CVec) -> CMat {
    outer(u, u)
}

/// Unnormalised maximally entangled vector `|I⟩ = Σ_i |ii⟩`.
pub fn max_entangled(n: usize) -> CVec {
    CVec::from_fn(n * n, |k, _| if k / n == k % n { cr(1.0) } else { cr(0.0) })
}

/// Swap operator on `C^n ⊗ C^n`.
pub fn swap(n: usize) -> CMat {
    let d = n * n;
    CMat::from_fn(d, d, |r, col| {
        let (i, j) = (r / n, r % n);
        if col == j * n + i {
            cr(1.0)
        } else {
            cr(0.0)
        }
    })
}
