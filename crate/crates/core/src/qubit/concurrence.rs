//! Concurrence of two-qubit states and what it says about qubit channels.

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, eigh, kron, partial_transpose, pauli, CMat, CVec, Subsystem};

use super::require_qubit_tp;

/// `σ_y ⊗ σ_y` (real).
fn yy() -> CMat {
    kron(&pauli(2), &pauli(2))
}

fn check_density(rho: &CMat, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch(format!("expected a {dim}x{dim} density matrix")));
    }
    if !numkit::is_hermitian(rho, 1e-10) {
        return Err(Error::NotHermitian(numkit::hermiticity_defect(rho)));
    }
    let eig = eigh(&numkit::hermitian_part(rho))?;
    if eig.min_value() < -1e-10 {
        return Err(Error::NotPositive(eig.min_value()));
    }
    let t = numkit::trace(rho).re;
    if (t - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("density matrix has trace {t}")));
    }
    Ok(())
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`. The `λ_k` are the
/// singular values of `Vᵀ(σ_y⊗σ_y)V` for any `ρ = VV†`.
pub fn concurrence(rho: &CMat) -> Result<f64> {
    check_density(rho, 4)?;
    let v = numkit::sqrt_psd(&numkit::hermitian_part(rho), Some(1e-14))?;
    let tau = v.transpose() * yy() * &v;
    let mut l = numkit::svd(&tau).s.to_vec();
    l.resize(4, 0.0);
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Concurrence `|ψᵀ(σ_y⊗σ_y)ψ|` of a normalised two-qubit pure state.
pub fn pure_concurrence(psi: &CVec) -> f64 {
    (psi.transpose() * yy() * psi)[(0, 0)].norm() / psi.norm_squared()
}

/// Smallest eigenvalue of the partial transpose.
pub fn ppt_min_eigenvalue(rho: &CMat) -> Result<f64> {
    let pt = partial_transpose(rho, 2, 2, Subsystem::Second)?;
    Ok(eigh(&numkit::hermitian_part(&pt))?.min_value())
}

#[derive(Debug, Clone)]
pub struct ConcurrenceDecomp {
    pub c: f64,
    pub weights: Vec<f64>,
    /// Unit vectors, each with concurrence `c`.
    pub states: Vec<CVec>,
    /// Channel form only: `(U_i, V_i)` with Kraus `√(n·p_i)·U_i·C̃·V_i`.
    pub unitaries: Vec<(CMat, CMat)>,
    /// `C̃ = ½·diag(√(1+C)+√(1−C), √(1+C)−√(1−C))`.
    pub contraction: CMat,
}

impl ConcurrenceDecomp {
    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn mixture(&self) -> CMat {
        let n = self.states.first().map_or(0, |s| s.len());
        let mut out = CMat::zeros(n, n);
        for (p, s) in self.weights.iter().zip(&self.states) {
            out += numkit::projector(s) * cr(*p);
        }
        out
    }

    /// Kraus operators `√(2p_i)·U_i·C̃·V_i` of the channel form.
    pub fn kraus(&self) -> Vec<CMat> {
        self.weights
            .iter()
            .zip(&self.unitaries)
            .map(|(p, (u, v))| u * &self.contraction * v * cr((2.0 * p).sqrt()))
            .collect()
    }
}

pub fn contraction(conc: f64) -> CMat {
    let a = (1.0 + conc).sqrt();
    let b = (1.0 - conc).max(0.0).sqrt();
    numkit::diag_real(&[(a + b) / 2.0, (a - b) / 2.0])
}

/// Zeroes the diagonal of a traceless real symmetric matrix by plane
/// rotations; returns the accumulated orthogonal matrix.
pub(crate) fn zero_diagonal(m: &nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut o = nalgebra::DMatrix::<f64>::identity(n, n);
    let mut done = vec![false; n];
    for _ in 0..n {
        let Some(i) = (0..n).filter(|&k| !done[k]).max_by(|&x, &y| a[(x, x)].abs().total_cmp(&a[(y, y)].abs())) else {
            break;
        };
        if a[(i, i)].abs() <= 1e-14 {
            done[i] = true;
            continue;
        }
        let sign = a[(i, i)].signum();
        let Some(j) = (0..n)
            .filter(|&k| k != i && !done[k] && a[(k, k)] * sign <= 0.0)
            .max_by(|&x, &y| a[(x, x)].abs().total_cmp(&a[(y, y)].abs()))
        else {
            break;
        };
        // d(θ) = cos²θ·a_ii + 2 sinθ cosθ·a_ij + sin²θ·a_jj; bisect for the root on [0, π/2]
        let d = |th: f64| {
            let (s, c) = th.sin_cos();
            c * c * a[(i, i)] + 2.0 * s * c * a[(i, j)] + s * s * a[(j, j)]
        };
        let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if d(mid) * d(lo) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let th = 0.5 * (lo + hi);
        let (s, cth) = th.sin_cos();
        let mut g = nalgebra::DMatrix::<f64>::identity(n, n);
        g[(i, i)] = cth;
        g[(j, j)] = cth;
        g[(j, i)] = s;
        g[(i, j)] = -s;
        a = g.transpose() * a * &g;
        o *= g;
        done[i] = true;
    }
    o
}

/// Phases `θ_k` (θ₁ = 0) with `Σ σ_k e^{iθ_k} = 0` for `σ₁ ≤ σ₂ + σ₃ + σ₄`.
fn closing_phases(s: &[f64; 4]) -> [f64; 4] {
    let clampc = |x: f64| x.clamp(-1.0, 1.0);
    let r = (s[0] - s[1]).max(s[2] - s[3]).max(0.0);
    let th2 = if s[1] > 0.0 && s[0] > 0.0 {
        clampc((r * r - s[0] * s[0] - s[1] * s[1]) / (2.0 * s[0] * s[1])).acos()
    } else {
        0.0
    };
    let w = c(s[0], 0.0) + c(th2.cos(), th2.sin()) * s[1];
    let target = -w;
    let phi = if target.norm() > 0.0 { target.arg() } else { 0.0 };
    let (d3, d4) = if s[2] > 0.0 && r > 0.0 {
        let d3 = clampc((r * r + s[2] * s[2] - s[3] * s[3]) / (2.0 * r * s[2])).acos();
        let d4 = if s[3] > 0.0 { clampc(s[2] * d3.sin() / s[3]).asin() } else { 0.0 };
        (d3, d4)
    } else if s[2] > 0.0 {
        (0.0, std::f64::consts::PI)
    } else {
        (0.0, 0.0)
    };
    let mut best = [0.0, th2, phi + d3, phi - d4];
    // the asin branch may need its supplement
    let sum = |t: &[f64; 4]| (0..4).map(|k| c(t[k].cos(), t[k].sin()) * s[k]).sum::<num_complex::Complex64>().norm();
    let alt = [0.0, th2, phi + d3, phi - (std::f64::consts::PI - d4)];
    if sum(&alt) < sum(&best) {
        best = alt;
    }
    best
}

/// Decomposition of a two-qubit state into pure states that all have the
/// concurrence of the state.
pub fn equal_concurrence_decomposition(rho: &CMat) -> Result<ConcurrenceDecomp> {
    check_density(rho, 4)?;
    let rho = numkit::hermitian_part(rho);
    let v = numkit::sqrt_psd(&rho, Some(1e-14))?;
    let r = v.ncols();
    let tau = v.transpose() * yy() * &v;
    let tak = numkit::takagi(&((&tau + tau.transpose()) * cr(0.5)))?;
    let mut x = &v * tak.v.conjugate();
    // order by σ descending and pad to four columns
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&a, &b| tak.sigma[b].total_cmp(&tak.sigma[a]));
    let mut cols: Vec<CVec> = idx.iter().map(|&k| x.column(k).into_owned()).collect();
    let mut sig: Vec<f64> = idx.iter().map(|&k| tak.sigma[k]).collect();
    while cols.len() < 4 {
        cols.push(CVec::zeros(4));
        sig.push(0.0);
    }
    let sig4 = [sig[0], sig[1], sig[2], sig[3]];
    let conc = (sig4[0] - sig4[1] - sig4[2] - sig4[3]).max(0.0);

    let t_diag: Vec<num_complex::Complex64> = if conc > 1e-12 {
        for col in cols.iter_mut().skip(1) {
            *col *= c(0.0, 1.0);
        }
        vec![cr(sig4[0]), cr(-sig4[1]), cr(-sig4[2]), cr(-sig4[3])]
    } else {
        let th = closing_phases(&sig4);
        for (k, col) in cols.iter_mut().enumerate() {
            *col *= c((th[k] / 2.0).cos(), (th[k] / 2.0).sin());
        }
        (0..4).map(|k| c(th[k].cos(), th[k].sin()) * sig4[k]).collect()
    };
    x = CMat::from_columns(&cols);
    let gram = x.adjoint() * &x;
    let o = if conc > 1e-12 {
        let m = nalgebra::DMatrix::<f64>::from_fn(4, 4, |i, j| {
            let t = if i == j { t_diag[i].re } else { 0.0 };
            t - conc * gram[(i, j)].re
        });
        zero_diagonal(&m)
    } else {
        let sum: num_complex::Complex64 = t_diag.iter().sum();
        if sum.norm() > 1e-9 {
            return Err(Error::Numerical(format!("phase closure failed ({:.2e})", sum.norm())));
        }
        nalgebra::DMatrix::<f64>::from_fn(4, 4, |i, j| {
            let hadamard =
                [[1.0, 1.0, 1.0, 1.0], [1.0, -1.0, 1.0, -1.0], [1.0, 1.0, -1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
            hadamard[i][j] / 2.0
        })
    };
    let oc = o.map(cr);
    let y = &x * oc;
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for k in 0..4 {
        let col = y.column(k).into_owned();
        let p = col.norm_squared();
        if p > 1e-14 {
            weights.push(p);
            states.push(col / cr(p.sqrt()));
        }
    }
    let out = ConcurrenceDecomp { c: conc, weights, states, unitaries: Vec::new(), contraction: contraction(conc) };
    let err = numkit::max_abs_diff(&out.mixture(), &rho);
    if err > 1e-10 {
        return Err(Error::Numerical(format!("decomposition error {err:.2e}")));
    }
    Ok(out)
}

/// Kraus form `Φ(ρ) = Σ 2p_i (U_i C̃ V_i) ρ (U_i C̃ V_i)†` of a qubit channel.
pub fn kraus_contraction_form(ch: &Channel) -> Result<ConcurrenceDecomp> {
    require_qubit_tp(ch)?;
    let mut d = equal_concurrence_decomposition(&ch.choi().jam)?;
    let ct = &d.contraction;
    let mut unitaries = Vec::new();
    for psi in &d.states {
        let m = numkit::vec_to_mat(psi, 2, 2)?.transpose();
        let svd = numkit::svd(&m);
        if (svd.s[0] - ct[(0, 0)].re).abs() > 1e-6 || (svd.s[1] - ct[(1, 1)].re).abs() > 1e-6 {
            return Err(Error::Numerical("pure state does not have the expected Schmidt form".into()));
        }
        unitaries.push((svd.u.clone(), svd.v.adjoint()));
    }
    d.unitaries = unitaries;
    let rebuilt = Channel::from_kraus(d.kraus(), false)?;
    let err = rebuilt.action_distance(ch);
    if err > 1e-9 {
        return Err(Error::Numerical(format!("contraction form error {err:.2e}")));
    }
    Ok(d)
}

/// Entanglement breaking: the dual state is separable. Concurrence and PPT
/// are both evaluated and must agree.
pub fn is_entanglement_breaking(ch: &Channel) -> Result<bool> {
    require_qubit_tp(ch)?;
    let jam = &ch.choi().jam;
    let conc = concurrence(jam)?;
    let lmin = ppt_min_eigenvalue(jam)?;
    let by_conc = conc <= 1e-9;
    let by_ppt = lmin >= -1e-9;
    if by_conc != by_ppt {
        if conc < 1e-7 && lmin > -1e-7 {
            return Ok(true);
        }
        return Err(Error::Inconsistent(format!("concurrence {conc:.3e} and PPT eigenvalue {lmin:.3e} disagree")));
    }
    Ok(by_conc)
}

/// A channel can distribute entanglement iff `λ_max(J_Φ) > 1/2`.
pub fn can_distribute_entanglement(ch: &Channel) -> Result<bool> {
    require_qubit_tp(ch)?;
    let top = eigh(&ch.choi().jam)?.max_value();
    let can = top > 0.5 + 1e-12;
    if can && is_entanglement_breaking(ch)? {
        return Err(Error::Inconsistent("entanglement-breaking channel with λ_max > 1/2".into()));
    }
    Ok(can)
}

/// `⟨Φ⁺|(I⊗Φ)(|χ⟩⟨χ|)|Φ⁺⟩` with the normalised maximally entangled state.
pub fn entanglement_fidelity(ch: &Channel, chi: &CVec) -> Result<f64> {
    let n = ch.dim();
    let out = ch.apply_to_second(&numkit::projector(chi), n)?;
    let phi = numkit::max_entangled(n) / cr((n as f64).sqrt());
    Ok(phi.dotc(&(&out * &phi)).re)
}

/// Maximal entanglement fidelity `λ_max(J_Φ)` and an optimal input `χ`.
pub fn max_entanglement_fidelity(ch: &Channel) -> Result<(f64, CVec)> {
    let n = ch.dim();
    let eig = eigh(&ch.choi().jam)?;
    let f = eig.max_value();
    let v = eig.vector(n * n - 1);
    let chi = numkit::swap(n) * v.conjugate();
    let direct = entanglement_fidelity(ch, &chi)?;
    if (direct - f).abs() > 1e-10 {
        return Err(Error::Inconsistent(format!("fidelity {direct} vs eigenvalue {f}")));
    }
    Ok((f, chi))
}
