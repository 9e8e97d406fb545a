//! Extremal qubit channels: Kraus pair
//! `A₁ = U·diag(s₀, s₁)·V†`, `A₂ = U·[[0, √(1−s₁²)], [√(1−s₀²), 0]]·V†`.
//!
//! The angle form uses the dual-state correlation matrix
//! `[[1,0,0,0],[0,cos α,0,0],[0,0,cos β,0],[sin α sin β,0,0,−cos α cos β]]`;
//! in the action picture the σ_y column changes sign.

use nalgebra::{Matrix3, Matrix4, Vector3};

use super::{ptm, require_qubit_tp, su2_of, Ptm};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::extremal::{is_extremal_tp, INDEPENDENCE_TOL};
use crate::numkit::{self, c, CMat};

#[derive(Debug, Clone)]
pub struct ExtremalQubitForm {
    pub alpha: f64,
    pub beta: f64,
    pub s0: f64,
    pub s1: f64,
    pub u: CMat,
    pub v: CMat,
}

impl ExtremalQubitForm {
    pub fn kraus(&self) -> [CMat; 2] {
        let [a1, a2] = standard_kraus(self.s0, self.s1);
        let vd = self.v.adjoint();
        [&self.u * a1 * &vd, &self.u * a2 * &vd]
    }

    pub fn channel(&self) -> Result<Channel> {
        Channel::from_kraus(self.kraus().to_vec(), true)
    }
}

/// `(s₀, s₁) = (√((1−cos(α+β))/2), √((1−cos(α−β))/2))`.
pub fn s_params(alpha: f64, beta: f64) -> (f64, f64) {
    let s0 = ((1.0 - (alpha + beta).cos()) / 2.0).max(0.0).sqrt();
    let s1 = ((1.0 - (alpha - beta).cos()) / 2.0).max(0.0).sqrt();
    (s0.min(1.0), s1.min(1.0))
}

/// Kraus pair with `U = V = I`.
pub fn standard_kraus(s0: f64, s1: f64) -> [CMat; 2] {
    let a = (1.0 - s1 * s1).max(0.0).sqrt();
    let b = (1.0 - s0 * s0).max(0.0).sqrt();
    [numkit::diag_real(&[s0, s1]), numkit::from_real_rows(&[&[0.0, a], &[b, 0.0]])]
}

/// Action-picture PTM of the angle form.
pub fn canonical_ptm(alpha: f64, beta: f64) -> Matrix4<f64> {
    let (ca, cb) = (alpha.cos(), beta.cos());
    Matrix4::new(
        1.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        ca,
        0.0,
        0.0, //
        0.0,
        0.0,
        -cb,
        0.0, //
        alpha.sin() * beta.sin(),
        0.0,
        0.0,
        -ca * cb,
    )
}

fn z_quarter_turns(k: usize) -> CMat {
    let th = k as f64 * std::f64::consts::FRAC_PI_4;
    numkit::diag(&[c(th.cos(), -th.sin()), c(th.cos(), th.sin())])
}

/// `(U, V)` among quarter turns about z and σ_x flips that bring the standard
/// Kraus pair onto the angle form.
fn canonical_frame(alpha: f64, beta: f64) -> Result<(CMat, CMat)> {
    let (s0, s1) = s_params(alpha, beta);
    let [a1, a2] = standard_kraus(s0, s1);
    let target = canonical_ptm(alpha, beta);
    let flips = [numkit::identity(2), numkit::pauli(1)];
    for fu in &flips {
        for ku in 0..4 {
            let u = z_quarter_turns(ku) * fu;
            for fv in &flips {
                for kv in 0..4 {
                    let v = z_quarter_turns(kv) * fv;
                    let vd = v.adjoint();
                    let ch = Channel::from_kraus(vec![&u * &a1 * &vd, &u * &a2 * &vd], true)?;
                    let p = super::ptm_from_action(&ch)?;
                    if (p.r - target).abs().max() < 1e-12 {
                        return Ok((u, v));
                    }
                }
            }
        }
    }
    Err(Error::Numerical(format!("no Kraus frame for α={alpha}, β={beta}")))
}

/// The channel whose dual state has the angle-form correlation matrix.
pub fn canonical_extremal(alpha: f64, beta: f64) -> Result<Channel> {
    canonical_form(alpha, beta)?.channel()
}

fn canonical_form(alpha: f64, beta: f64) -> Result<ExtremalQubitForm> {
    let (s0, s1) = s_params(alpha, beta);
    let (u, v) = canonical_frame(alpha, beta)?;
    Ok(ExtremalQubitForm { alpha, beta, s0, s1, u, v })
}

/// The 24 rotations of the cube (signed permutations with det +1).
fn cube_rotations() -> Vec<Matrix3<f64>> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for p in perms {
        for signs in 0..8 {
            let mut m = Matrix3::zeros();
            for (row, &col) in p.iter().enumerate() {
                m[(row, col)] = if signs & (1 << row) != 0 { -1.0 } else { 1.0 };
            }
            if m.determinant() > 0.0 {
                out.push(m);
            }
        }
    }
    // identity first
    out.sort_by_key(|m| if *m == Matrix3::identity() { 0 } else { 1 });
    out
}

/// Recovers `(α, β, U, V)` of an extremal qubit channel.
pub fn extremal_form_of(ch: &Channel) -> Result<ExtremalQubitForm> {
    require_qubit_tp(ch)?;
    if !is_extremal_tp(ch, INDEPENDENCE_TOL)? {
        return Err(Error::NotExtremal);
    }
    let p = ptm(ch)?;
    let lam = p.lambda();
    let svd = lam.svd(true, true);
    let mut o1 = svd.u.expect("requested U");
    let mut o2 = svd.v_t.expect("requested V").transpose();
    let mut d = svd.singular_values;
    if o1.determinant() < 0.0 {
        o1.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    if o2.determinant() < 0.0 {
        o2.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    let dm = Matrix3::from_diagonal(&d);
    let flips = [
        Matrix3::identity(),
        Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)),
        Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, -1.0)),
        Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0)),
    ];
    let tol = 1e-7;
    for pm in cube_rotations() {
        for f in &flips {
            let q1 = o1 * pm;
            let q2 = o2 * f * pm;
            let t = q1.transpose() * p.t();
            let diag = pm.transpose() * dm * f * pm;
            if t[0].abs() > tol || t[1].abs() > tol || t[2] < -tol {
                continue;
            }
            let (l1, l2) = (diag[(0, 0)], diag[(1, 1)]);
            if l1.abs() > 1.0 + tol || l2.abs() > 1.0 + tol {
                continue;
            }
            let alpha = l1.clamp(-1.0, 1.0).acos();
            let beta = (-l2).clamp(-1.0, 1.0).acos();
            let target = canonical_ptm(alpha, beta);
            let candidate = Ptm::from_parts(&t, &diag);
            if (candidate.r - target).abs().max() > tol {
                continue;
            }
            let base = canonical_form(alpha, beta)?;
            let u = su2_of(&q1) * &base.u;
            let v = su2_of(&q2) * &base.v;
            let form = ExtremalQubitForm { u, v, ..base };
            let rebuilt = form.channel()?;
            if rebuilt.action_distance(ch) <= 1e-9 {
                return Ok(form);
            }
        }
    }
    Err(Error::Numerical("no canonical frame reproduces the channel".into()))
}
