//! SLOCC (Lorentz) normal forms of qubit maps.
//!
//! A filter `ρ ↦ AρA†` with `A ∈ SL(2,C)` acts on the Pauli coordinates as a
//! proper orthochronous Lorentz transformation. Writing the PTM as
//! `R = scale · L_out·Ω·L_in`, the normal form `Ω` is one of
//!
//! - `diag(1, s₁, s₂, s₃)` (generic),
//! - `[[1,0,0,0],[0,x/√3,0,0],[0,0,x/√3,0],[2/3,0,0,1/3]]` (non-generic),
//! - `[[1,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]` (everything to one point).
//!
//! The filters are `a = A(L_in)` and `b = A(L_out)`, so that
//! `Φ(ρ) ∝ b·Ω(aρa†)·b†`.

use nalgebra::{Matrix4, Rotation3, Vector3, Vector4};

use super::{ptm, Ptm};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, cr, pauli, CMat};

const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::from(ETA))
}

fn ip(u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    (0..4).map(|k| ETA[k] * u[k] * v[k]).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SloccKind {
    Generic { s: [f64; 3] },
    NonGeneric { x: f64 },
    Point,
}

impl SloccKind {
    pub fn omega(&self) -> Matrix4<f64> {
        match *self {
            SloccKind::Generic { s } => Matrix4::from_diagonal(&Vector4::new(1.0, s[0], s[1], s[2])),
            SloccKind::NonGeneric { x } => {
                let a = x / 3f64.sqrt();
                Matrix4::new(
                    1.0,
                    0.0,
                    0.0,
                    0.0, //
                    0.0,
                    a,
                    0.0,
                    0.0, //
                    0.0,
                    0.0,
                    a,
                    0.0, //
                    2.0 / 3.0,
                    0.0,
                    0.0,
                    1.0 / 3.0,
                )
            }
            SloccKind::Point => {
                let mut m = Matrix4::zeros();
                m[(0, 0)] = 1.0;
                m[(3, 0)] = 1.0;
                m
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SloccKind::Generic { .. } => "generic",
            SloccKind::NonGeneric { .. } => "non-generic",
            SloccKind::Point => "point",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SloccNormalForm {
    pub kind: SloccKind,
    /// Input filter.
    pub a: CMat,
    /// Output filter.
    pub b: CMat,
    pub scale: f64,
    pub l_in: Matrix4<f64>,
    pub l_out: Matrix4<f64>,
}

impl SloccNormalForm {
    /// `scale · L_out·Ω·L_in`.
    pub fn reconstruct(&self) -> Matrix4<f64> {
        self.l_out * self.kind.omega() * self.l_in * self.scale
    }

    /// Applies `ρ ↦ b·Ω(aρa†)·b†` (without the scale).
    pub fn apply_filtered(&self, rho: &CMat) -> Result<CMat> {
        let omega = Ptm { r: self.kind.omega() }.to_channel()?;
        let inner = omega.apply(&(&self.a * rho * self.a.adjoint()))?;
        Ok(&self.b * inner * self.b.adjoint())
    }
}

/// Lorentz matrix of `ρ ↦ AρA†`.
pub fn lorentz_of(a: &CMat) -> Matrix4<f64> {
    let mut l = Matrix4::zeros();
    for j in 0..4 {
        let img = a * pauli(j) * a.adjoint();
        for i in 0..4 {
            l[(i, j)] = 0.5 * numkit::trace(&(pauli(i) * &img)).re;
        }
    }
    l
}

/// `A ∈ SL(2,C)` with [`lorentz_of`]`(A) = l` (up to sign).
pub fn sl2_of(l: &Matrix4<f64>) -> Result<CMat> {
    // superoperator on row-major vec(ρ) is A ⊗ Ā; reshuffled it is vec(A)vec(A)†
    let mut sup = CMat::zeros(4, 4);
    for mu in 0..4 {
        for nu in 0..4 {
            if l[(mu, nu)] != 0.0 {
                let pm = numkit::mat_to_vec(&pauli(mu));
                let pn = numkit::mat_to_vec(&pauli(nu));
                sup += pm * pn.adjoint() * cr(0.5 * l[(mu, nu)]);
            }
        }
    }
    let mut y = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    y[(i * 2 + k, j * 2 + m)] = sup[(i * 2 + j, k * 2 + m)];
                }
            }
        }
    }
    let eig = numkit::eigh(&numkit::hermitian_part(&y))?;
    let top = eig.max_value();
    if top <= 0.0 {
        return Err(Error::Numerical("degenerate Lorentz matrix".into()));
    }
    let v = eig.vector(3) * cr(top.sqrt());
    let a = numkit::vec_to_mat(&v, 2, 2)?;
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    if det.norm() < 1e-14 {
        return Err(Error::Numerical("singular filter".into()));
    }
    Ok(a / det.sqrt())
}

/// η-Gram–Schmidt: extends `basis` (η-orthonormal) with candidates from
/// `seeds` until `want` vectors are collected. Null directions are skipped.
fn eta_extend(basis: &mut Vec<Vector4<f64>>, seeds: &[Vector4<f64>], want: usize) {
    for s in seeds {
        if basis.len() >= want {
            return;
        }
        let mut u = *s;
        for _ in 0..2 {
            for b in basis.iter() {
                u -= b * (ip(b, &u) / ip(b, b));
            }
        }
        let nrm = ip(&u, &u);
        if nrm.abs() > 1e-8 * u.norm_squared().max(1e-300) && u.norm() > 1e-8 {
            basis.push(u / nrm.abs().sqrt());
        }
    }
}

fn std_basis() -> Vec<Vector4<f64>> {
    (0..4).map(|k| Vector4::ith(k, 1.0)).collect()
}

/// Completes the columns of `l` listed in `missing` by η-Gram–Schmidt and
/// enforces `det l > 0`.
fn complete_lorentz(l: &mut Matrix4<f64>, missing: &[usize]) {
    if !missing.is_empty() {
        let mut have: Vec<Vector4<f64>> =
            (0..4).filter(|k| !missing.contains(k)).map(|k| l.column(k).into_owned()).collect();
        let known = have.len();
        eta_extend(&mut have, &std_basis(), 4);
        for (slot, k) in missing.iter().enumerate() {
            l.set_column(*k, &have[known + slot]);
        }
    }
    if l.determinant() < 0.0 {
        let k = *missing.last().unwrap_or(&3);
        l.column_mut(k).neg_mut();
    }
}

/// SLOCC normal form of a qubit TP channel.
pub fn slocc_normal_form(ch: &Channel) -> Result<SloccNormalForm> {
    slocc_normal_form_of_ptm(&ptm(ch)?.r)
}

/// SLOCC normal form of any CP qubit map given by its PTM.
pub fn slocc_normal_form_of_ptm(r: &Matrix4<f64>) -> Result<SloccNormalForm> {
    let r0 = r[(0, 0)];
    if r0 <= 0.0 {
        return Err(Error::InvalidInput("PTM must have a positive (0,0) entry".into()));
    }
    let rn = r / r0;
    let form = if let Some(f) = point_form(&rn) {
        f
    } else {
        let k = eta() * rn.transpose() * eta() * rn;
        match eigen_structure(&k)? {
            Structure::Diagonalizable(groups) => generic_form(&rn, &groups)?,
            Structure::Jordan(mu) => non_generic_form(&rn, &k, mu)?,
        }
    };
    let form = SloccNormalForm { scale: form.scale * r0, ..form };
    let err = (form.reconstruct() - r).abs().max();
    if err > 1e-8 * r.abs().max().max(1.0) {
        return Err(Error::Numerical(format!(
            "{} normal form reconstructs the PTM only to {err:.2e}",
            form.kind.name()
        )));
    }
    Ok(form)
}

fn finish(kind: SloccKind, scale: f64, l_in: Matrix4<f64>, l_out: Matrix4<f64>) -> Result<SloccNormalForm> {
    Ok(SloccNormalForm { kind, a: sl2_of(&l_in)?, b: sl2_of(&l_out)?, scale, l_in, l_out })
}

fn point_form(r: &Matrix4<f64>) -> Option<SloccNormalForm> {
    let first_row_ok = (1..4).all(|j| r[(0, j)].abs() < 1e-8);
    let lambda_zero = r.fixed_view::<3, 3>(1, 1).abs().max() < 1e-8;
    let t = Vector3::new(r[(1, 0)], r[(2, 0)], r[(3, 0)]);
    if !(first_row_ok && lambda_zero && (t.norm() - 1.0).abs() < 1e-8) {
        return None;
    }
    let z = Vector3::z();
    let rot = Rotation3::rotation_between(&z, &t)
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI));
    let mut l_out = Matrix4::identity();
    l_out.fixed_view_mut::<3, 3>(1, 1).copy_from(rot.matrix());
    finish(SloccKind::Point, 1.0, Matrix4::identity(), l_out).ok()
}

enum Structure {
    /// Eigenvalue with an orthonormal (Euclidean) basis of its eigenspace.
    Diagonalizable(Vec<(f64, Vec<Vector4<f64>>)>),
    /// Eigenvalue carrying a Jordan block.
    Jordan(f64),
}

fn eigen_structure(k: &Matrix4<f64>) -> Result<Structure> {
    let eig = k.complex_eigenvalues();
    let scale = k.abs().max().max(1.0);
    let cluster_tol = 1e-6 * scale;
    let mut clusters: Vec<Vec<num_complex::Complex64>> = Vec::new();
    for z in eig.iter() {
        if let Some(cl) = clusters.iter_mut().find(|cl| (cl[0] - z).norm() < cluster_tol) {
            cl.push(*z);
        } else {
            clusters.push(vec![*z]);
        }
    }
    let mut groups = Vec::new();
    for cl in clusters {
        let mean = cl.iter().sum::<num_complex::Complex64>() / cl.len() as f64;
        if mean.im.abs() > cluster_tol {
            return Err(Error::Inconsistent("Lorentz form has a complex spectrum".into()));
        }
        let mu = mean.re;
        let shifted = k - Matrix4::identity() * mu;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested V");
        let kernel: Vec<Vector4<f64>> =
            (0..4).filter(|&i| svd.singular_values[i] <= 1e-6 * scale).map(|i| vt.row(i).transpose()).collect();
        if kernel.len() < cl.len() {
            return Ok(Structure::Jordan(mu));
        }
        groups.push((mu, kernel));
    }
    Ok(Structure::Diagonalizable(groups))
}

fn generic_form(r: &Matrix4<f64>, groups: &[(f64, Vec<Vector4<f64>>)]) -> Result<SloccNormalForm> {
    let mut timelike: Option<(f64, Vector4<f64>)> = None;
    let mut spatial: Vec<(f64, Vector4<f64>)> = Vec::new();
    for (mu, space) in groups {
        // prefer projections of the standard basis onto the eigenspace
        let mut seeds: Vec<Vector4<f64>> =
            std_basis().iter().map(|e| space.iter().map(|v| v * v.dot(e)).sum::<Vector4<f64>>()).collect();
        seeds.extend(space.iter().copied());
        let mut basis = Vec::new();
        eta_extend(&mut basis, &seeds, space.len());
        if basis.len() < space.len() {
            return Err(Error::Inconsistent("η-degenerate eigenspace".into()));
        }
        for v in basis {
            if ip(&v, &v) > 0.0 {
                if timelike.is_some() {
                    return Err(Error::Inconsistent("two timelike eigenvectors".into()));
                }
                timelike = Some((*mu, if v[0] < 0.0 { -v } else { v }));
            } else {
                spatial.push((mu.max(0.0), v));
            }
        }
    }
    let (mu0, v0) = timelike.ok_or_else(|| Error::Inconsistent("no timelike eigenvector".into()))?;
    if mu0 <= 1e-12 {
        return Err(Error::Inconsistent("vanishing timelike eigenvalue".into()));
    }
    spatial.sort_by(|a, b| b.0.total_cmp(&a.0));
    let s0 = mu0.sqrt();
    let mut s: [f64; 3] = [0.0; 3];
    let mut inv_in = Matrix4::zeros();
    inv_in.set_column(0, &v0);
    for (k, (mu, v)) in spatial.iter().enumerate() {
        s[k] = (mu / mu0).sqrt();
        inv_in.set_column(k + 1, v);
    }
    if inv_in.determinant() < 0.0 {
        inv_in.column_mut(3).neg_mut();
    }
    let mut l_out = Matrix4::zeros();
    l_out.set_column(0, &(r * v0 / s0));
    let mut missing = Vec::new();
    for (k, &sk) in s.iter().enumerate() {
        if sk > 1e-9 {
            l_out.set_column(k + 1, &(r * inv_in.column(k + 1) / (s0 * sk)));
        } else {
            missing.push(k + 1);
        }
    }
    if missing.is_empty() {
        if l_out.determinant() < 0.0 {
            l_out.column_mut(3).neg_mut();
            s[2] = -s[2];
        }
    } else {
        complete_lorentz(&mut l_out, &missing);
    }
    let l_in = inv_in.try_inverse().ok_or_else(|| Error::Numerical("singular eigenvector frame".into()))?;
    finish(SloccKind::Generic { s }, s0, l_in, l_out)
}

fn non_generic_form(r: &Matrix4<f64>, k: &Matrix4<f64>, mu: f64) -> Result<SloccNormalForm> {
    if mu <= 1e-12 {
        return Err(Error::Inconsistent("Jordan block at zero".into()));
    }
    let scale = k.abs().max().max(1.0);
    let n_mat = k - Matrix4::identity() * mu;
    let svd = n_mat.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V");
    let sv = svd.singular_values;
    let order = {
        let mut idx = [0usize, 1, 2, 3];
        idx.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
        idx
    };
    let nullity = (0..4).filter(|&i| sv[i] <= 1e-6 * scale).count();
    let (n, m0) = if nullity == 1 {
        let n: Vector4<f64> = vt.row(order[3]).transpose();
        let n2 = n_mat * n_mat;
        let s2 = n2.svd(false, true);
        let vt2 = s2.v_t.expect("requested V");
        let mut idx = [0usize, 1, 2, 3];
        idx.sort_by(|&a, &b| s2.singular_values[a].total_cmp(&s2.singular_values[b]));
        let cands = [vt2.row(idx[0]).transpose(), vt2.row(idx[1]).transpose()];
        let m0 = cands
            .iter()
            .map(|c: &Vector4<f64>| c - n * n.dot(c))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("two candidates");
        (n, m0.normalize())
    } else {
        (u.column(order[0]).into_owned(), vt.row(order[0]).transpose())
    };
    let denom = ip(&m0, &n);
    if denom.abs() < 1e-12 {
        return Err(Error::Numerical("null directions are η-orthogonal".into()));
    }
    let m = m0 - n * (ip(&m0, &m0) / (2.0 * denom));
    let nm = n_mat * m;
    let kappa = nm.dot(&n) / n.dot(&n);
    let h = ip(&n, &m);
    let beta2 = 8.0 * mu / (3.0 * kappa * h);
    if beta2 <= 0.0 {
        return Err(Error::Inconsistent("Jordan block has the wrong orientation".into()));
    }
    let mut beta = beta2.sqrt();
    let mut alpha = 3.0 * beta * kappa / (4.0 * mu);
    let mut e0 = (n * alpha + m * beta) / 2.0;
    if e0[0] < 0.0 {
        alpha = -alpha;
        beta = -beta;
        e0 = -e0;
    }
    let e3 = (n * alpha - m * beta) / 2.0;
    let mut frame = vec![e0, e3];
    let seeds: Vec<Vector4<f64>> = [1usize, 2, 0, 3].iter().map(|&k| Vector4::ith(k, 1.0)).collect();
    eta_extend(&mut frame, &seeds, 4);
    if frame.len() < 4 {
        return Err(Error::Numerical("cannot complete the Lorentz frame".into()));
    }
    let mut inv_in = Matrix4::from_columns(&[frame[0], frame[2], frame[3], frame[1]]);
    if inv_in.determinant() < 0.0 {
        inv_in.column_mut(2).neg_mut();
    }
    let c = (3.0 * mu).sqrt();
    let re1 = r * inv_in.column(1);
    let x = (3f64.sqrt() * (-ip(&re1, &re1)).max(0.0).sqrt() / c).min(1.0);
    let mut l_out = Matrix4::zeros();
    let re3 = r * inv_in.column(3);
    l_out.set_column(3, &(re3 * (3.0 / c)));
    l_out.set_column(0, &((r * inv_in.column(0) - re3 * 2.0) / c));
    if x > 1e-9 {
        let f = 3f64.sqrt() / (c * x);
        l_out.set_column(1, &(re1 * f));
        l_out.set_column(2, &(r * inv_in.column(2) * f));
        if l_out.determinant() < 0.0 {
            return Err(Error::Inconsistent("improper output frame".into()));
        }
    } else {
        complete_lorentz(&mut l_out, &[1, 2]);
    }
    let l_in = inv_in.try_inverse().ok_or_else(|| Error::Numerical("singular Jordan frame".into()))?;
    finish(SloccKind::NonGeneric { x }, c, l_in, l_out)
}

/// PTM of `ρ ↦ b·Φ(aρa†)·b†`.
pub fn filtered_ptm(r: &Matrix4<f64>, a: &CMat, b: &CMat) -> Matrix4<f64> {
    lorentz_of(b) * r * lorentz_of(a)
}

/// Choi matrix of `ρ ↦ b·Φ(aρa†)·b†` for a channel given by Kraus operators.
pub fn filtered_kraus(kraus: &[CMat], a: &CMat, b: &CMat) -> Vec<CMat> {
    kraus.iter().map(|k| b * k * a).collect()
}
