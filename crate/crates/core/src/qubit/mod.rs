//! Qubit channels in the Pauli (R) picture.
//!
//! The Pauli transfer matrix of a map is `R_ij = ½·Tr(σ_i Φ(σ_j))` with the
//! order `(I, X, Y, Z)`, so that `(1, x') = R·(1, x)` on Bloch vectors.

use nalgebra::{Matrix3, Matrix4, Rotation3, UnitQuaternion, Vector3};

use crate::channel::{Channel, TP_TOL};
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, kron, pauli, CMat};

pub mod concurrence;
pub mod extremal_form;
pub mod slocc;

pub use concurrence::{
    can_distribute_entanglement, concurrence, equal_concurrence_decomposition, is_entanglement_breaking,
    kraus_contraction_form, max_entanglement_fidelity, ConcurrenceDecomp,
};
pub use extremal_form::{canonical_extremal, extremal_form_of, ExtremalQubitForm};
pub use slocc::{slocc_normal_form, SloccKind, SloccNormalForm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ptm {
    pub r: Matrix4<f64>,
}

impl Ptm {
    /// Translation `t = R[1..3, 0]`.
    pub fn t(&self) -> Vector3<f64> {
        Vector3::new(self.r[(1, 0)], self.r[(2, 0)], self.r[(3, 0)])
    }

    /// Distortion `Λ = R[1..3, 1..3]`.
    pub fn lambda(&self) -> Matrix3<f64> {
        self.r.fixed_view::<3, 3>(1, 1).into_owned()
    }

    pub fn from_parts(t: &Vector3<f64>, lambda: &Matrix3<f64>) -> Ptm {
        let mut r = Matrix4::zeros();
        r[(0, 0)] = 1.0;
        r.fixed_view_mut::<3, 1>(1, 0).copy_from(t);
        r.fixed_view_mut::<3, 3>(1, 1).copy_from(lambda);
        Ptm { r }
    }

    pub fn apply_bloch(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.t() + self.lambda() * x
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` of the map with this PTM.
    pub fn choi(&self) -> CMat {
        let mut choi = CMat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let coeff = self.r[(i, j)] / 2.0;
                if coeff != 0.0 {
                    choi += kron(&pauli(j).transpose(), &pauli(i)) * cr(coeff);
                }
            }
        }
        numkit::hermitian_part(&choi)
    }

    pub fn to_channel(&self) -> Result<Channel> {
        Channel::from_choi_matrix(self.choi(), 2, false)
    }

    pub fn max_abs_diff(&self, other: &Ptm) -> f64 {
        (self.r - other.r).abs().max()
    }
}

pub(crate) fn require_qubit_tp(ch: &Channel) -> Result<()> {
    if ch.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("qubit channel expected, got dim {}", ch.dim())));
    }
    let d = ch.tp_defect();
    if d > TP_TOL {
        return Err(Error::NotTracePreserving(d));
    }
    Ok(())
}

/// PTM from the action of the channel on the Pauli matrices.
pub fn ptm_from_action(ch: &Channel) -> Result<Ptm> {
    let mut r = Matrix4::zeros();
    for j in 0..4 {
        let out = ch.apply(&pauli(j))?;
        for i in 0..4 {
            r[(i, j)] = 0.5 * numkit::trace(&(pauli(i) * &out)).re;
        }
    }
    Ok(Ptm { r })
}

/// Correlation matrix of a two-qubit state, `D_ij = Tr(ρ·σ_j ⊗ σ_i)`: rows
/// index the second (output) factor, columns the first (input) factor.
pub fn dual_r_matrix(rho: &CMat) -> Matrix4<f64> {
    let mut d = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            d[(i, j)] = numkit::trace(&(rho * kron(&pauli(j), &pauli(i)))).re;
        }
    }
    d
}

/// PTM of a qubit TP channel, computed from the action and from the dual
/// state (the σ_y column flips sign under the partial transpose); the two
/// must agree within `1e-10`.
pub fn ptm(ch: &Channel) -> Result<Ptm> {
    require_qubit_tp(ch)?;
    let direct = ptm_from_action(ch)?;
    let mut dual = dual_r_matrix(&ch.choi().jam);
    for i in 0..4 {
        dual[(i, 2)] = -dual[(i, 2)];
    }
    let gap = (direct.r - dual).abs().max();
    if gap > 1e-10 {
        return Err(Error::Inconsistent(format!("PTM routes disagree by {gap:.3e}")));
    }
    Ok(direct)
}

/// Rotation `O ∈ SO(3)` induced by `ρ ↦ UρU†` on Bloch vectors.
pub fn rotation_of(u: &CMat) -> Matrix3<f64> {
    let mut o = Matrix3::zeros();
    for j in 0..3 {
        let img = u * pauli(j + 1) * u.adjoint();
        for i in 0..3 {
            o[(i, j)] = 0.5 * numkit::trace(&(pauli(i + 1) * &img)).re;
        }
    }
    o
}

/// An `SU(2)` element whose adjoint action is the rotation `o`.
pub fn su2_of(o: &Matrix3<f64>) -> CMat {
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*o));
    let (w, x, y, z) = (q.w, q.i, q.j, q.k);
    numkit::from_rows(&[vec![c(w, -z), c(-y, -x)], vec![c(y, -x), c(w, z)]])
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    pub center: Vector3<f64>,
    pub semi_axes: [f64; 3],
    /// Columns are the principal directions.
    pub orientation: Matrix3<f64>,
}

impl Ellipsoid {
    /// `true` if `p` lies inside or on the surface, with slack `tol`.
    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        let local = self.orientation.transpose() * (p - self.center);
        let mut s = 0.0;
        for k in 0..3 {
            let a = self.semi_axes[k];
            if a <= tol {
                if local[k].abs() > tol {
                    return false;
                }
            } else {
                s += (local[k] / a).powi(2);
            }
        }
        s.sqrt() <= 1.0 + tol
    }

    pub const CSV_HEADER: &'static str = "center_x,center_y,center_z,axis_1,axis_2,axis_3,\
o_11,o_12,o_13,o_21,o_22,o_23,o_31,o_32,o_33";

    pub fn csv_row(&self) -> String {
        let mut fields: Vec<f64> = self.center.iter().copied().collect();
        fields.extend_from_slice(&self.semi_axes);
        for i in 0..3 {
            for j in 0..3 {
                fields.push(self.orientation[(i, j)]);
            }
        }
        fields.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(",")
    }
}

/// `Λ = U·diag(s)·Vᵀ` with `det U = det V = +1`; `s[2]` may be negative.
fn proper_svd(l: &Matrix3<f64>) -> (Matrix3<f64>, [f64; 3], Matrix3<f64>) {
    let svd = l.svd(true, true);
    let mut u = svd.u.expect("requested U");
    let mut v = svd.v_t.expect("requested V").transpose();
    let sv = svd.singular_values;
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    u = Matrix3::from_columns(&[u.column(idx[0]), u.column(idx[1]), u.column(idx[2])]);
    v = Matrix3::from_columns(&[v.column(idx[0]), v.column(idx[1]), v.column(idx[2])]);
    let mut s = [sv[idx[0]], sv[idx[1]], sv[idx[2]]];
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    (u, s, v)
}

/// Image of the Bloch sphere: centre `t`, semi-axes the singular values of `Λ`.
pub fn ellipsoid(ch: &Channel) -> Result<Ellipsoid> {
    let p = ptm(ch)?;
    let (u, s, _) = proper_svd(&p.lambda());
    Ok(Ellipsoid { center: p.t(), semi_axes: [s[0], s[1], s[2].abs()], orientation: u })
}

#[derive(Debug, Clone)]
pub struct LuNormalForm {
    /// `λ₁ ≥ λ₂ ≥ |λ₃|`.
    pub lambdas: [f64; 3],
    /// `(x, y, z)` with `x, y ≥ 0`.
    pub shift: [f64; 3],
    pub u_in: CMat,
    pub u_out: CMat,
}

impl LuNormalForm {
    pub fn ptm(&self) -> Ptm {
        let t = Vector3::from(self.shift);
        Ptm::from_parts(&t, &Matrix3::from_diagonal(&Vector3::from(self.lambdas)))
    }
}

/// Local-unitary normal form: `u_out·Φ(u_in ρ u_in†)·u_out†` has a diagonal
/// distortion block.
pub fn lu_normal_form(ch: &Channel) -> Result<LuNormalForm> {
    let p = ptm(ch)?;
    let (o1, s, o2) = proper_svd(&p.lambda());
    let t = o1.transpose() * p.t();
    let flips = [
        Matrix3::identity(),
        Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)),
        Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, -1.0)),
        Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0)),
    ];
    let eps = 1e-12;
    let score = |f: &Matrix3<f64>| {
        let x = f * t;
        let ok = x[0] >= -eps && x[1] >= -eps;
        (ok, x[2] >= -eps)
    };
    let f = flips.iter().max_by_key(|f| score(f)).copied().expect("four candidates");
    let shift = f * t;
    let r_out = f * o1.transpose();
    let r_in = o2 * f;
    Ok(LuNormalForm { lambdas: s, shift: [shift[0], shift[1], shift[2]], u_in: su2_of(&r_in), u_out: su2_of(&r_out) })
}
