//! Completely positive maps and their dual states.
//!
//! Conventions: the Choi matrix of `Φ` is `C_Φ = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`,
//! so block `(i, j)` is `Φ(|i⟩⟨j|)`, the first tensor factor is the input
//! index and `Tr_2 C_Φ = I` is the trace-preserving condition. With row-major
//! vectorisation a Kraus operator `A` contributes `vec(Aᵀ)·vec(Aᵀ)†`.

use crate::error::{Error, Result};
use crate::numkit::{
    self, cr, eigh, kron, mat_to_vec, partial_trace, partial_transpose, vec_to_mat, CMat, CVec, Subsystem,
};

/// Tolerance on `‖Σ A†A − I‖` (and the matching Choi marginal test).
pub const TP_TOL: f64 = 1e-10;

/// Choi eigenvalues down to `−CP_TOL·‖C‖` still count as completely positive.
pub const CP_TOL: f64 = 1e-10;

/// The two views of the dual state.
#[derive(Debug, Clone)]
pub struct ChoiPair {
    dim: usize,
    /// Unnormalised, block `(i, j)` is `Φ(|i⟩⟨j|)`.
    pub choi: CMat,
    /// `choi / n`; trace one for trace-preserving maps.
    pub jam: CMat,
}

impl ChoiPair {
    pub fn new(choi: CMat, dim: usize) -> Result<Self> {
        if choi.nrows() != dim * dim || choi.ncols() != dim * dim {
            return Err(Error::DimensionMismatch(format!("Choi matrix must be {0}x{0} for dim {1}", dim * dim, dim)));
        }
        if !numkit::is_hermitian(&choi, 1e-10) {
            return Err(Error::NotHermitian(numkit::hermiticity_defect(&choi)));
        }
        let choi = numkit::hermitian_part(&choi);
        let jam = &choi / cr(dim as f64);
        Ok(ChoiPair { dim, choi, jam })
    }

    /// Builds the dual state of a Jamiolkowski state (`jam = choi / n`).
    pub fn from_jam(jam: CMat, dim: usize) -> Result<Self> {
        Self::new(jam * cr(dim as f64), dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Block `(i, j)`, i.e. `Φ(|i⟩⟨j|)`.
    pub fn block(&self, i: usize, j: usize) -> CMat {
        let n = self.dim;
        self.choi.view((i * n, j * n), (n, n)).into_owned()
    }
}

fn choi_from_kraus(kraus: &[CMat], n: usize) -> CMat {
    let mut choi = CMat::zeros(n * n, n * n);
    for a in kraus {
        let v = mat_to_vec(&a.transpose());
        choi += &v * v.adjoint();
    }
    numkit::hermitian_part(&choi)
}

/// A completely positive map stored as Kraus operators with its cached dual state.
#[derive(Debug, Clone)]
pub struct Channel {
    dim: usize,
    kraus: Vec<CMat>,
    choi: ChoiPair,
}

impl Channel {
    /// Builds a CP map from Kraus operators. With `require_tp` the
    /// trace-preserving condition is enforced.
    pub fn from_kraus(kraus: Vec<CMat>, require_tp: bool) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidInput("empty Kraus list".into()))?;
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("zero-dimensional Kraus operator".into()));
        }
        for a in &kraus {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operators must all be {n}x{n}, got {}x{}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("non-finite Kraus entry".into()));
            }
        }
        let choi = ChoiPair::new(choi_from_kraus(&kraus, n), n)?;
        let ch = Channel { dim: n, kraus, choi };
        if require_tp {
            let defect = ch.tp_defect();
            if defect > TP_TOL {
                return Err(Error::NotTracePreserving(defect));
            }
        }
        Ok(ch)
    }

    /// Builds the channel of a dual state, using its minimal orthogonal Kraus form.
    pub fn from_choi(choi: &ChoiPair, require_tp: bool) -> Result<Self> {
        let kraus = kraus_from_choi(choi, None)?;
        let kraus = if kraus.is_empty() { vec![CMat::zeros(choi.dim(), choi.dim())] } else { kraus };
        Self::from_kraus(kraus, require_tp)
    }

    pub fn from_choi_matrix(choi: CMat, dim: usize, require_tp: bool) -> Result<Self> {
        Self::from_choi(&ChoiPair::new(choi, dim)?, require_tp)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Kraus operators as supplied at construction.
    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn choi(&self) -> &ChoiPair {
        &self.choi
    }

    /// Minimal, Hilbert–Schmidt orthogonal Kraus operators (eigenvectors of the Choi matrix).
    pub fn minimal_kraus(&self) -> Vec<CMat> {
        kraus_from_choi(&self.choi, None).expect("cached Choi matrix is PSD")
    }

    /// `Φ(ρ) = Σ A ρ A†`. Accepts any square matrix (linear extension).
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "input is {}x{}, channel dim is {}",
                rho.nrows(),
                rho.ncols(),
                self.dim
            )));
        }
        let mut out = CMat::zeros(self.dim, self.dim);
        for a in &self.kraus {
            out += a * rho * a.adjoint();
        }
        Ok(out)
    }

    /// `(I_a ⊗ Φ)(ρ)` on a bipartite operator whose second factor has dim `n`.
    pub fn apply_to_second(&self, rho: &CMat, dim_a: usize) -> Result<CMat> {
        let d = dim_a * self.dim;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch("bipartite input has wrong size".into()));
        }
        let id = numkit::identity(dim_a);
        let mut out = CMat::zeros(d, d);
        for a in &self.kraus {
            let big = kron(&id, a);
            out += &big * rho * big.adjoint();
        }
        Ok(out)
    }

    /// `‖Σ A†A − I‖_F`.
    pub fn tp_defect(&self) -> f64 {
        let mut s = CMat::zeros(self.dim, self.dim);
        for a in &self.kraus {
            s += a.adjoint() * a;
        }
        (s - numkit::identity(self.dim)).norm()
    }

    /// `‖Σ A A† − I‖_F`.
    pub fn unital_defect(&self) -> f64 {
        let mut s = CMat::zeros(self.dim, self.dim);
        for a in &self.kraus {
            s += a * a.adjoint();
        }
        (s - numkit::identity(self.dim)).norm()
    }

    /// Trace preservation, checked on the Kraus sum and on `Tr_2 C = I`.
    pub fn is_tp(&self) -> Result<bool> {
        let n = self.dim;
        let kraus_defect = self.tp_defect();
        let marginal = partial_trace(&self.choi.choi, n, n, Subsystem::Second)?;
        let choi_defect = (marginal - numkit::identity(n)).norm();
        agree("trace preservation", kraus_defect, choi_defect)
    }

    /// Unitality (bistochastic), checked on `Σ A A†` and on `Tr_1 C = I`.
    pub fn is_unital(&self) -> Result<bool> {
        let n = self.dim;
        let kraus_defect = self.unital_defect();
        let marginal = partial_trace(&self.choi.choi, n, n, Subsystem::First)?;
        let choi_defect = (marginal - numkit::identity(n)).norm();
        agree("unitality", kraus_defect, choi_defect)
    }

    /// Rank of the dual state = minimal number of Kraus operators.
    pub fn rank(&self) -> usize {
        let eig = eigh(&self.choi.choi).expect("cached Choi matrix is Hermitian");
        numkit::numerical_rank(&eig.values, numkit::default_rank_tol(&eig))
    }

    /// `ρ ↦ outer(inner(ρ))`.
    pub fn compose(outer: &Channel, inner: &Channel) -> Result<Channel> {
        if outer.dim != inner.dim {
            return Err(Error::DimensionMismatch("cannot compose channels of different dims".into()));
        }
        let prod: Vec<CMat> = outer.kraus.iter().flat_map(|a| inner.kraus.iter().map(move |b| a * b)).collect();
        let full = Channel::from_kraus(prod, false)?;
        Channel::from_choi(full.choi(), false)
    }

    /// `ρ ↦ U_out Φ(U_in ρ U_in†) U_out†`.
    pub fn conjugated(&self, u_out: &CMat, u_in: &CMat) -> Result<Channel> {
        let kraus = self.kraus.iter().map(|a| u_out * a * u_in).collect();
        Channel::from_kraus(kraus, false)
    }

    /// Largest entry of the Choi difference: the maximal deviation of the two
    /// maps on the matrix-unit basis.
    pub fn action_distance(&self, other: &Channel) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        numkit::max_abs_diff(&self.choi.choi, &other.choi.choi)
    }

    /// Convex combination `Σ w_k Φ_k` (weights are used as given).
    pub fn mixture(parts: &[(f64, Channel)]) -> Result<Channel> {
        let (_, first) = parts.first().ok_or_else(|| Error::InvalidInput("empty mixture".into()))?;
        let n = first.dim;
        let mut choi = CMat::zeros(n * n, n * n);
        for (w, ch) in parts {
            if ch.dim != n {
                return Err(Error::DimensionMismatch("mixture of different dims".into()));
            }
            choi += &ch.choi.choi * cr(*w);
        }
        Channel::from_choi_matrix(choi, n, false)
    }

    // Builders.

    pub fn identity(n: usize) -> Channel {
        Channel::from_kraus(vec![numkit::identity(n)], true).expect("identity is a channel")
    }

    pub fn unitary(u: &CMat) -> Result<Channel> {
        Channel::from_kraus(vec![u.clone()], true)
    }

    /// `ρ ↦ (1−p)ρ + p·Tr(ρ)·I/n` (qubit default `n = 2`).
    pub fn depolarizing(p: f64) -> Result<Channel> {
        Self::depolarizing_n(2, p)
    }

    pub fn depolarizing_n(n: usize, p: f64) -> Result<Channel> {
        let limit = (n * n) as f64 / ((n * n) as f64 - 1.0);
        if !(0.0..=limit).contains(&p) {
            return Err(Error::InvalidInput(format!("depolarizing p={p} outside [0, {limit}]")));
        }
        let bell = numkit::projector(&numkit::max_entangled(n));
        let choi = bell * cr(1.0 - p) + numkit::identity(n * n) * cr(p / n as f64);
        Channel::from_choi_matrix(choi, n, true)
    }

    /// Kraus `{diag(1, √(1−γ)), [[0, √γ], [0, 0]]}`.
    pub fn amplitude_damping(gamma: f64) -> Result<Channel> {
        check_prob("gamma", gamma)?;
        let a1 = numkit::diag_real(&[1.0, (1.0 - gamma).sqrt()]);
        let a2 = numkit::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]);
        Channel::from_kraus(vec![a1, a2], true)
    }

    /// Kraus `{√(1−p)·I, √p·σ_z}`.
    pub fn phase_flip(p: f64) -> Result<Channel> {
        check_prob("p", p)?;
        Channel::from_kraus(vec![numkit::pauli(0) * cr((1.0 - p).sqrt()), numkit::pauli(3) * cr(p.sqrt())], true)
    }

    /// Kraus `{√(1−p)·I, √p·σ_x}`.
    pub fn bit_flip(p: f64) -> Result<Channel> {
        check_prob("p", p)?;
        Channel::from_kraus(vec![numkit::pauli(0) * cr((1.0 - p).sqrt()), numkit::pauli(1) * cr(p.sqrt())], true)
    }

    /// `ρ ↦ Tr(ρ)·I/n`.
    pub fn completely_depolarizing(n: usize) -> Channel {
        Channel::depolarizing_n(n, 1.0).expect("p = 1 is valid")
    }

    /// `ρ ↦ Tr(ρ)·ρ₂`, dual state `I ⊗ ρ₂`.
    pub fn replacer(rho2: &CMat) -> Result<Channel> {
        let n = rho2.nrows();
        Channel::from_choi_matrix(kron(&numkit::identity(n), rho2), n, true)
    }
}

fn check_prob(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name}={x} outside [0, 1]")))
    }
}

fn agree(what: &str, kraus_defect: f64, choi_defect: f64) -> Result<bool> {
    let a = kraus_defect <= TP_TOL;
    let b = choi_defect <= TP_TOL;
    if a != b && (kraus_defect - choi_defect).abs() > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "{what}: Kraus defect {kraus_defect:.3e} vs Choi marginal defect {choi_defect:.3e}"
        )));
    }
    Ok(a)
}

/// Minimal orthogonal Kraus operators from the eigenvectors of the Choi
/// matrix: `A_kᵀ = unvec(√λ_k·v_k)`.
///
/// `tol` is the numerical-rank threshold (default `1e-9·λ_max`).
pub fn kraus_from_choi(c: &ChoiPair, tol: Option<f64>) -> Result<Vec<CMat>> {
    let n = c.dim();
    let eig = eigh(&c.choi)?;
    if eig.min_value() < -CP_TOL * c.choi.norm().max(1.0) {
        return Err(Error::NotCp(eig.min_value()));
    }
    let tol = tol.unwrap_or_else(|| numkit::default_rank_tol(&eig));
    let mut out = Vec::new();
    for k in (0..eig.values.len()).rev() {
        let lam = eig.values[k];
        if lam <= tol {
            continue;
        }
        let v: CVec = eig.vector(k) * cr(lam.sqrt());
        out.push(vec_to_mat(&v, n, n)?.transpose());
    }
    Ok(out)
}

/// `Φ(ρ) = Tr_1(C^{T_1}·(ρ ⊗ I))`, computed from the dual state alone.
pub fn apply_via_dual(c: &ChoiPair, rho: &CMat) -> Result<CMat> {
    let n = c.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!("input must be {n}x{n}")));
    }
    let pt = partial_transpose(&c.choi, n, n, Subsystem::First)?;
    let prod = pt * kron(rho, &numkit::identity(n));
    partial_trace(&prod, n, n, Subsystem::First)
}

/// Action of a linear map on the matrix units, indexed `i·n + j` for `|i⟩⟨j|`.
pub fn action_on_basis(n: usize, f: impl Fn(&CMat) -> CMat) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(i, j)] = cr(1.0);
            out.push(f(&e));
        }
    }
    out
}

/// Choi matrix assembled from the action on the matrix units.
pub fn choi_from_action(action: &[CMat]) -> Result<(CMat, usize)> {
    let n = (action.len() as f64).sqrt().round() as usize;
    if n * n != action.len() || n == 0 {
        return Err(Error::DimensionMismatch(format!("expected n² output matrices, got {}", action.len())));
    }
    let mut choi = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let out = &action[i * n + j];
            if out.nrows() != n || out.ncols() != n {
                return Err(Error::DimensionMismatch("output matrices must be n×n".into()));
            }
            choi.view_mut((i * n, j * n), (n, n)).copy_from(out);
        }
    }
    Ok((choi, n))
}

/// Hermitian-preserving map in signed Kraus form `Φ(X) = Σ λ_k A_k X A_k†`.
#[derive(Debug, Clone)]
pub struct HermitianMap {
    dim: usize,
    pub signed_kraus: Vec<(f64, CMat)>,
}

impl HermitianMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (lam, a) in &self.signed_kraus {
            out += a * x * a.adjoint() * cr(*lam);
        }
        out
    }

    /// Choi matrix rebuilt from the signed Kraus form.
    pub fn choi(&self) -> CMat {
        let n = self.dim;
        let mut choi = CMat::zeros(n * n, n * n);
        for (lam, a) in &self.signed_kraus {
            let v = mat_to_vec(&a.transpose());
            choi += &v * v.adjoint() * cr(*lam);
        }
        choi
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.signed_kraus.iter().map(|(l, _)| *l).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Transpose map `X ↦ Xᵀ` (positive but not completely positive).
    pub fn transpose_map(n: usize) -> HermitianMap {
        signed_kraus(&action_on_basis(n, |e| e.transpose())).expect("transpose is Hermitian preserving")
    }
}

/// Signed Kraus form of a Hermitian-preserving map given its action on the
/// matrix units `|i⟩⟨j|` (index `i·n + j`).
pub fn signed_kraus(action: &[CMat]) -> Result<HermitianMap> {
    let (choi, n) = choi_from_action(action)?;
    for i in 0..n {
        for j in 0..n {
            let d = numkit::max_abs_diff(&action[i * n + j], &action[j * n + i].adjoint());
            if d > 1e-12 * choi.norm().max(1.0) {
                return Err(Error::NotHermitian(d));
            }
        }
    }
    signed_kraus_from_choi(&choi, n)
}

pub fn signed_kraus_from_choi(choi: &CMat, n: usize) -> Result<HermitianMap> {
    let eig = eigh(choi)?;
    let top = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-12 * top.max(f64::MIN_POSITIVE);
    let mut signed = Vec::new();
    for k in (0..eig.values.len()).rev() {
        let lam = eig.values[k];
        if lam.abs() <= tol {
            continue;
        }
        signed.push((lam, vec_to_mat(&eig.vector(k), n, n)?.transpose()));
    }
    Ok(HermitianMap { dim: n, signed_kraus: signed })
}

/// `Φ(ρ) = (1 + nε)·Φ̃(ρ) − ε·Tr(ρ)·I` with `Φ̃` completely positive.
#[derive(Debug, Clone)]
pub struct CpDeficit {
    pub epsilon: f64,
    pub tilde: Channel,
}

impl CpDeficit {
    /// Rebuilds the source map from `ε` and `Φ̃`.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        let n = self.tilde.dim();
        let t = self.tilde.apply(x)?;
        Ok(t * cr(1.0 + n as f64 * self.epsilon) - numkit::identity(n) * (numkit::trace(x) * self.epsilon))
    }
}

/// `ε = −λ_min(C)` (zero for CP input) and `C̃ = (C + εI)/(1 + nε)`.
pub fn cp_deficit(hm: &HermitianMap) -> Result<CpDeficit> {
    let n = hm.dim();
    let choi = numkit::hermitian_part(&hm.choi());
    let eig = eigh(&choi)?;
    let epsilon = (-eig.min_value()).max(0.0);
    let tilde_choi = (choi + numkit::identity(n * n) * cr(epsilon)) / cr(1.0 + n as f64 * epsilon);
    let tilde = Channel::from_choi_matrix(tilde_choi, n, false)?;
    Ok(CpDeficit { epsilon, tilde })
}
