//! Extreme points of the convex set of trace-preserving CP maps.
//!
//! With minimal Kraus operators `A_1..A_m` and `X` the `n²×m` matrix whose
//! columns are `vec(A_kᵀ)`, every TP map with support inside that of `C = XX†`
//! has Choi matrix `X(I + Q)X†` where `Σ_jk Q_jk A_k†A_j = 0`. A map is extremal
//! iff the only such Hermitian `Q` is zero.

use nalgebra::DVector;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, eigh, mat_to_vec, vec_to_mat, CMat, CVec, RMat};
use crate::random;

/// Relative singular-value threshold for linear independence.
pub const INDEPENDENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ExtremalSplit {
    /// Weight of `left`; `right` carries `1 − weight`.
    pub weight: f64,
    pub left: Channel,
    pub right: Channel,
    /// Perturbation direction, `‖Q‖_F = 1`.
    pub q: CMat,
    /// `RR† = (I + t₊Q)/c` with spectrum in `[0, 1]`.
    pub r: CMat,
    /// `S = √(I − RR†)`.
    pub s: CMat,
}

fn ensure_tp(ch: &Channel) -> Result<()> {
    let d = ch.tp_defect();
    if d > crate::channel::TP_TOL {
        return Err(Error::NotTracePreserving(d));
    }
    Ok(())
}

fn smallest_relative_sv(cols: &[CVec]) -> f64 {
    let rows = cols[0].len();
    let mut m = CMat::zeros(rows.max(cols.len()), cols.len());
    for (k, v) in cols.iter().enumerate() {
        m.view_mut((0, k), (rows, 1)).copy_from(v);
    }
    let s = numkit::svd(&m).s;
    let top = s[0];
    if top <= 0.0 {
        return 0.0;
    }
    s[s.len() - 1] / top
}

/// Extremality of a TP channel: `m ≤ n` and `{A_i†A_j}` linearly independent.
pub fn is_extremal_tp(ch: &Channel, tol: f64) -> Result<bool> {
    ensure_tp(ch)?;
    let n = ch.dim();
    let m = ch.rank();
    if m > n {
        return Ok(false);
    }
    let kraus = ch.minimal_kraus();
    let mut cols = Vec::with_capacity(m * m);
    for a in &kraus {
        for b in &kraus {
            cols.push(mat_to_vec(&(a.adjoint() * b)));
        }
    }
    Ok(smallest_relative_sv(&cols) > tol)
}

/// Extremality among TP maps with the extra constraint `Φ(ρ₁) = Φ_0(ρ₁)`:
/// independence of `{A_i†A_j ⊕ A_jρ₁A_i†}`.
pub fn is_extremal_constrained(ch: &Channel, rho1: &CMat, tol: f64) -> Result<bool> {
    ensure_tp(ch)?;
    let n = ch.dim();
    if rho1.nrows() != n || rho1.ncols() != n {
        return Err(Error::DimensionMismatch("ρ₁ must match the channel dimension".into()));
    }
    check_density(rho1)?;
    let m = ch.rank();
    let bound = ((2 * n * n) as f64).sqrt().floor() as usize;
    if m > bound {
        return Ok(false);
    }
    let kraus = ch.minimal_kraus();
    let mut cols = Vec::with_capacity(m * m);
    for ai in &kraus {
        for aj in &kraus {
            let top = mat_to_vec(&(ai.adjoint() * aj));
            let bottom = mat_to_vec(&(aj * rho1 * ai.adjoint()));
            cols.push(CVec::from_iterator(2 * n * n, top.iter().chain(bottom.iter()).copied()));
        }
    }
    Ok(smallest_relative_sv(&cols) > tol)
}

fn check_density(rho: &CMat) -> Result<()> {
    let eig = eigh(rho)?;
    if eig.min_value() < -1e-10 {
        return Err(Error::NotPositive(eig.min_value()));
    }
    let t = numkit::trace(rho).re;
    if (t - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("density matrix has trace {t}")));
    }
    Ok(())
}

/// Real basis of `m×m` Hermitian matrices (orthonormal in Frobenius norm).
fn hermitian_basis(m: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(m * m);
    let h = 1.0 / 2f64.sqrt();
    for j in 0..m {
        let mut b = CMat::zeros(m, m);
        b[(j, j)] = cr(1.0);
        out.push(b);
    }
    for j in 0..m {
        for k in j + 1..m {
            let mut b = CMat::zeros(m, m);
            b[(j, k)] = cr(h);
            b[(k, j)] = cr(h);
            out.push(b);
            let mut b = CMat::zeros(m, m);
            b[(j, k)] = c(0.0, h);
            b[(k, j)] = c(0.0, -h);
            out.push(b);
        }
    }
    out
}

/// `Σ_jk Q_jk A_k†A_j`.
fn constraint_image(kraus: &[CMat], q: &CMat) -> CMat {
    let n = kraus[0].nrows();
    let mut out = CMat::zeros(n, n);
    for (j, aj) in kraus.iter().enumerate() {
        for (k, ak) in kraus.iter().enumerate() {
            out += ak.adjoint() * aj * q[(j, k)];
        }
    }
    out
}

/// A nonzero Hermitian `Q` with `Σ Q_jk A_k†A_j = 0`, or `None` for extremal channels.
///
/// `Q` is expressed in the minimal Kraus basis of [`Channel::minimal_kraus`].
pub fn find_perturbation(ch: &Channel, tol: f64) -> Result<Option<CMat>> {
    if is_extremal_tp(ch, tol)? {
        return Ok(None);
    }
    let kraus = ch.minimal_kraus();
    let m = kraus.len();
    let n = ch.dim();
    let basis = hermitian_basis(m);
    let rows = (2 * n * n).max(m * m);
    let mut sys = RMat::zeros(rows, m * m);
    for (p, b) in basis.iter().enumerate() {
        let img = constraint_image(&kraus, b);
        for (r, z) in img.iter().enumerate() {
            sys[(2 * r, p)] = z.re;
            sys[(2 * r + 1, p)] = z.im;
        }
    }
    let dec = sys.svd(false, true);
    let vt = dec.v_t.ok_or_else(|| Error::Numerical("SVD did not return V".into()))?;
    let (kmin, _) = dec.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let coeffs: DVector<f64> = vt.row(kmin).transpose();
    let mut q = CMat::zeros(m, m);
    for (p, b) in basis.iter().enumerate() {
        q += b * cr(coeffs[p]);
    }
    let norm = q.norm();
    Ok(Some(numkit::hermitian_part(&(q / cr(norm)))))
}

fn kraus_matrix(kraus: &[CMat]) -> CMat {
    let n = kraus[0].nrows();
    let mut x = CMat::zeros(n * n, kraus.len());
    for (k, a) in kraus.iter().enumerate() {
        x.set_column(k, &mat_to_vec(&a.transpose()));
    }
    x
}

/// Splits a non-extremal TP channel into two TP channels of lower rank.
pub fn split_extremal(ch: &Channel) -> Result<ExtremalSplit> {
    let q = find_perturbation(ch, INDEPENDENCE_TOL)?.ok_or(Error::AlreadyExtremal)?;
    let kraus = ch.minimal_kraus();
    let n = ch.dim();
    let m = kraus.len();
    let x = kraus_matrix(&kraus);
    let eq = eigh(&q)?;
    let (lo, hi) = (eq.min_value(), eq.max_value());
    if lo >= -1e-12 || hi <= 1e-12 {
        return Err(Error::Numerical("perturbation is not indefinite".into()));
    }
    let t_plus = 1.0 / lo.abs();
    let t_minus = 1.0 / hi;
    let id = numkit::identity(m);
    let plus = &id + &q * cr(t_plus);
    let minus = &id - &q * cr(t_minus);
    let weight = t_minus / (t_plus + t_minus);
    let left = Channel::from_choi_matrix(&x * &plus * x.adjoint(), n, false)?;
    let right = Channel::from_choi_matrix(&x * &minus * x.adjoint(), n, false)?;
    ensure_tp(&left)?;
    ensure_tp(&right)?;

    let scale = eigh(&plus)?.max_value();
    let rr = numkit::hermitian_part(&(&plus / cr(scale)));
    let r = numkit::herm_sqrt(&rr)?;
    let s = numkit::herm_sqrt(&(&id - &rr))?;
    Ok(ExtremalSplit { weight, left, right, q, r, s })
}

/// Recursive convex decomposition into extremal TP channels.
///
/// Leaves with identical action are merged. Errors with
/// [`Error::AlreadyExtremal`] on extremal input and [`Error::TooManyTerms`]
/// when more than `max_terms` leaves would be needed.
pub fn decompose_into_extremals(ch: &Channel, max_terms: usize) -> Result<Vec<(f64, Channel)>> {
    if is_extremal_tp(ch, INDEPENDENCE_TOL)? {
        return Err(Error::AlreadyExtremal);
    }
    let mut leaves: Vec<(f64, Channel)> = Vec::new();
    let mut stack = vec![(1.0, ch.clone())];
    while let Some((w, part)) = stack.pop() {
        if is_extremal_tp(&part, INDEPENDENCE_TOL)? {
            if let Some(slot) = leaves.iter_mut().find(|(_, l)| l.action_distance(&part) < 1e-9) {
                slot.0 += w;
            } else {
                leaves.push((w, part));
                if leaves.len() > max_terms {
                    return Err(Error::TooManyTerms(max_terms));
                }
            }
            continue;
        }
        let sp = split_extremal(&part)?;
        stack.push((w * sp.weight, sp.left));
        stack.push((w * (1.0 - sp.weight), sp.right));
    }
    Ok(leaves)
}

/// Roots of `det(Σ x_j M_j) = 0` along a random line `a + t·b`, each with a
/// unit kernel vector of the singular combination.
fn singular_combinations(mats: &[CMat], rng: &mut random::Rng) -> Option<Vec<(CVec, CVec)>> {
    let n = mats[0].nrows();
    let m = mats.len();
    let combo = |x: &CVec| -> CMat {
        let mut out = CMat::zeros(n, n);
        for (j, mj) in mats.iter().enumerate() {
            out += mj * x[j];
        }
        out
    };
    let a = random::unit_vector(rng, m);
    let b = random::unit_vector(rng, m);
    let mb = combo(&b);
    let sb = numkit::svd(&mb);
    let scale = sb.s[0].max(f64::MIN_POSITIVE);
    if sb.s[n - 1] < 1e-10 * scale {
        let kernel = sb.v.column(n - 1).into_owned();
        return Some(vec![(b, kernel)]);
    }
    let inv = mb.try_inverse()?;
    let pencil = inv * combo(&a);
    let roots = pencil.clone().schur().eigenvalues()?;
    let mut out = Vec::new();
    for lam in roots.iter() {
        let x = &a - &b * *lam;
        let mx = combo(&x);
        let s = numkit::svd(&mx);
        let top = s.s[0].max(f64::MIN_POSITIVE);
        if s.s[n - 1] > 1e-7 * top {
            continue;
        }
        let nx = x.norm();
        out.push((x / cr(nx), s.v.column(n - 1).into_owned()));
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// A pure input whose output has rank `≤ m − 1`, with an orthonormal basis of
/// the output-kernel directions `χ`.
#[derive(Debug, Clone)]
pub struct RankReducingInput {
    pub psi: CVec,
    /// Orthonormal, `n − m + 1` vectors or more.
    pub chi: Vec<CVec>,
}

fn output_kernel(kraus: &[CMat], psi: &CVec) -> Vec<CVec> {
    let images: Vec<CVec> = kraus.iter().map(|a| a * psi).collect();
    complement(&images, psi.len())
}

/// Pure states whose image under a rank-`m` channel (`2 ≤ m ≤ n`) loses rank.
pub fn rank_reducing_input(ch: &Channel, seed: u64) -> Result<RankReducingInput> {
    let n = ch.dim();
    let m = ch.rank();
    if m > n {
        return Err(Error::Hypothesis(format!("rank {m} exceeds dimension {n}")));
    }
    if m < 2 {
        return Err(Error::Hypothesis("rank-one channels map pure states to pure states".into()));
    }
    let kraus = ch.minimal_kraus();
    let mut rng = random::rng(seed);
    for _ in 0..32 {
        let Some(roots) = singular_combinations(&kraus, &mut rng) else {
            continue;
        };
        for (_, psi) in roots {
            let chi = output_kernel(&kraus, &psi);
            if chi.len() < n - m + 1 {
                continue;
            }
            let out = ch.apply(&numkit::projector(&psi))?;
            let leak = chi.iter().map(|v| v.dotc(&(&out * v)).re).fold(0.0f64, f64::max);
            if leak <= 1e-10 {
                return Ok(RankReducingInput { psi, chi });
            }
        }
    }
    Err(Error::Numerical("no singular Kraus combination found after 32 lines".into()))
}

/// For a rank-2 channel: all pure inputs (up to phase) with pure outputs.
pub fn pure_output_inputs(ch: &Channel, seed: u64) -> Result<Vec<CVec>> {
    if ch.rank() != 2 {
        return Err(Error::Hypothesis("needs a rank-2 channel".into()));
    }
    let kraus = ch.minimal_kraus();
    let mut rng = random::rng(seed);
    for _ in 0..32 {
        let Some(roots) = singular_combinations(&kraus, &mut rng) else {
            continue;
        };
        if roots.len() < ch.dim() {
            continue;
        }
        let mut found: Vec<CVec> = Vec::new();
        for (_, psi) in roots {
            if found.iter().all(|f| f.dotc(&psi).norm() < 1.0 - 1e-7) {
                found.push(psi);
            }
        }
        return Ok(found);
    }
    Err(Error::Numerical("pencil construction failed".into()))
}

/// Product vectors `a ⊗ b` orthogonal to the support of a bipartite state on
/// `n ⊗ n` whose rank `m` satisfies `m ≤ n`; at least `n − m + 1` independent ones.
pub fn orthogonal_product_states(rho: &CMat, n: usize, seed: u64) -> Result<Vec<CVec>> {
    if rho.nrows() != n * n || rho.ncols() != n * n {
        return Err(Error::DimensionMismatch(format!("state must be {0}x{0}", n * n)));
    }
    let x = numkit::sqrt_psd(rho, None)?;
    let m = x.ncols();
    if m > n {
        return Err(Error::Hypothesis(format!("rank {m} exceeds local dimension {n}")));
    }
    let needed = n - m + 1;
    let mats: Vec<CMat> = (0..m).map(|k| vec_to_mat(&x.column(k).into_owned(), n, n)).collect::<Result<_>>()?;
    let mut rng = random::rng(seed);
    let mut candidates_b: Vec<CVec> = Vec::new();
    if m >= 2 {
        for _ in 0..32 {
            if let Some(roots) = singular_combinations(&mats, &mut rng) {
                candidates_b.extend(roots.into_iter().map(|(_, k)| k));
            }
            if candidates_b.len() >= needed {
                break;
            }
        }
    }
    for k in 0..n {
        let mut e = CVec::zeros(n);
        e[k] = cr(1.0);
        candidates_b.push(e);
    }
    for _ in 0..4 * n {
        candidates_b.push(random::unit_vector(&mut rng, n));
    }

    let mut chosen: Vec<CVec> = Vec::new();
    let mut span: Vec<CVec> = Vec::new();
    let threshold = 1e-10 * numkit::trace(rho).re.max(1.0);
    for bbar in candidates_b {
        let images: Vec<CVec> = mats.iter().map(|mk| mk * &bbar).collect();
        for a in complement(&images, n) {
            let v = kron_vec(&a, &bbar.conjugate());
            let leak = v.dotc(&(rho * &v)).re;
            if leak > threshold {
                continue;
            }
            let mut trial = span.clone();
            trial.push(v.clone());
            let ortho = numkit::orthonormalize(&trial, 1e-6);
            if ortho.len() > span.len() {
                span = ortho;
                chosen.push(v);
                if chosen.len() >= needed {
                    return Ok(chosen);
                }
            }
        }
    }
    Err(Error::Numerical(format!("found {} of {needed} product states", chosen.len())))
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in `C^n`.
fn complement(images: &[CVec], n: usize) -> Vec<CVec> {
    let mut basis = numkit::orthonormalize(images, 1e-9);
    let k = basis.len();
    numkit::complete_orthonormal(&mut basis, n);
    basis.split_off(k)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    CVec::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}
