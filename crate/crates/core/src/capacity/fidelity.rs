//! Best local trace-preserving map on one qubit of a shared pair, measured by
//! the overlap with `(|00⟩ + |11⟩)/√2`.

use rand::Rng as _;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, eigh, kron, partial_trace, CMat, CVec, Subsystem};
use crate::optim::NelderMead;
use crate::qubit::extremal_form::standard_kraus;
use crate::random;

#[derive(Debug, Clone)]
pub struct FidelityConfig {
    pub seed: u64,
    /// Restarts of the extremal-parameter search.
    pub restarts: usize,
    pub ascent_iterations: usize,
    /// Largest tolerated gap between the two solvers.
    pub agreement_tol: f64,
}

impl Default for FidelityConfig {
    fn default() -> Self {
        FidelityConfig { seed: 0, restarts: 24, ascent_iterations: 600, agreement_tol: 1e-3 }
    }
}

#[derive(Debug, Clone)]
pub struct FidelityResult {
    pub f_star: f64,
    /// Map on the second qubit achieving `f_star`.
    pub channel: Channel,
    pub initial_fidelity: f64,
    pub ascent_value: f64,
    pub search_value: f64,
}

fn bell() -> CVec {
    numkit::max_entangled(2) / cr(2f64.sqrt())
}

/// `⟨ψ|(I⊗Φ)(ρ)|ψ⟩`.
pub fn fidelity_of_map(rho: &CMat, ch: &Channel) -> Result<f64> {
    let out = ch.apply_to_second(rho, 2)?;
    let psi = bell();
    Ok((psi.adjoint() * out * psi)[(0, 0)].re)
}

/// `W` with `F = Tr(W·C)` for the Choi matrix `C` of the map.
fn fidelity_functional(rho: &CMat) -> CMat {
    let s = numkit::swap(2);
    numkit::hermitian_part(&((&s * rho * &s).transpose() * cr(0.5)))
}

fn project_psd(m: &CMat) -> Result<CMat> {
    numkit::herm_fn(&numkit::hermitian_part(m), |x| x.max(0.0))
}

/// Orthogonal projection onto `Tr₂C = I`.
fn project_affine(m: &CMat) -> Result<CMat> {
    let t = partial_trace(m, 2, 2, Subsystem::Second)? - numkit::identity(2);
    Ok(m - kron(&t, &numkit::identity(2)) * cr(0.5))
}

/// Dykstra's alternating projections onto the feasible set.
fn project_feasible(m: &CMat, rounds: usize) -> Result<CMat> {
    let mut x = m.clone();
    let mut p = CMat::zeros(4, 4);
    let mut q = CMat::zeros(4, 4);
    for _ in 0..rounds {
        let y = project_affine(&(&x + &p))?;
        p = &x + &p - &y;
        x = project_psd(&(&y + &q))?;
        q = &y + &q - &x;
    }
    Ok(x)
}

/// `(T^{-1/2}⊗I)·C·(T^{-1/2}⊗I)` with `T = Tr₂C`: an exactly feasible point.
fn normalize_feasible(m: &CMat) -> Result<Option<CMat>> {
    let m = project_psd(m)?;
    let t = partial_trace(&m, 2, 2, Subsystem::Second)?;
    if eigh(&t)?.min_value() < 1e-9 {
        return Ok(None);
    }
    let s = kron(&numkit::herm_fn(&t, |x| 1.0 / x.sqrt())?, &numkit::identity(2));
    Ok(Some(numkit::hermitian_part(&(&s * m * &s))))
}

/// Projected ascent on `{C ⪰ 0, Tr₂C = I}` with a running average of the
/// iterates; returns the best exactly feasible value seen.
fn ascent(w: &CMat, iterations: usize) -> Result<(f64, CMat)> {
    let scale = numkit::svd(w).s[0].max(1e-12);
    let step = 0.5 / scale;
    let mut x = numkit::identity(4) * cr(0.5);
    let mut avg = x.clone();
    let value = |m: &CMat| numkit::trace(&(w * m)).re;
    let mut best = (value(&x), x.clone());
    for k in 0..iterations {
        x = project_feasible(&(&x + w * cr(step)), 40)?;
        avg = (&avg * cr(k as f64 + 1.0) + &x) / cr(k as f64 + 2.0);
        for cand in [&x, &avg] {
            if let Some(f) = normalize_feasible(cand)? {
                let v = value(&f);
                if v > best.0 {
                    best = (v, f);
                }
            }
        }
    }
    Ok(best)
}

fn su2(q: &[f64]) -> CMat {
    let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt().max(1e-300);
    let (w, x, y, z) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    numkit::from_rows(&[vec![c(w, -z), c(-y, -x)], vec![c(y, -x), c(w, z)]])
}

/// Kraus pair `U·A_k(s₀, s₁)·V†` from `(a, b, q_U, q_V)`, `s₀ = |sin a|`, `s₁ = |sin b|`.
fn extremal_kraus(params: &[f64]) -> [CMat; 2] {
    let [a1, a2] = standard_kraus(params[0].sin().abs(), params[1].sin().abs());
    let u = su2(&params[2..6]);
    let vd = su2(&params[6..10]).adjoint();
    [&u * a1 * &vd, &u * a2 * &vd]
}

/// `Σ_k w_k†ρw_k`, `w_k = (I⊗A_k†)ψ`.
fn kraus_fidelity(rho: &CMat, kraus: &[CMat]) -> f64 {
    let psi = bell();
    let id = numkit::identity(2);
    kraus
        .iter()
        .map(|a| {
            let w = kron(&id, &a.adjoint()) * &psi;
            (w.adjoint() * rho * &w)[(0, 0)].re
        })
        .sum()
}

fn search(rho: &CMat, config: &FidelityConfig) -> (f64, [CMat; 2]) {
    let mut rng = random::rng(config.seed);
    let nm = NelderMead { max_evals: 4000, ftol: 1e-14, initial_step: 0.3 };
    // identity channel: s₀ = s₁ = 1, U = V = I
    let half_pi = std::f64::consts::FRAC_PI_2;
    let identity_start = [half_pi, half_pi, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let mut best = (f64::NEG_INFINITY, extremal_kraus(&identity_start));
    for r in 0..config.restarts.max(1) {
        let x0: Vec<f64> = if r == 0 {
            identity_start.to_vec()
        } else {
            (0..10).map(|i| if i < 2 { rng.random_range(0.0..3.2) } else { random::gaussian(&mut rng) }).collect()
        };
        let m = nm.minimize(&mut |x: &[f64]| -kraus_fidelity(rho, &extremal_kraus(x)), &x0);
        if -m.value > best.0 {
            best = (-m.value, extremal_kraus(&m.x));
        }
    }
    best
}

/// Maximises the fidelity over trace-preserving maps on the second qubit.
/// A projected ascent over dual states and a search over extremal maps are
/// run independently and must agree.
pub fn fidelity_optimize_one_side(rho: &CMat, config: &FidelityConfig) -> Result<FidelityResult> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit state expected".into()));
    }
    super::check_density(rho, 1e-9)?;
    let rho = numkit::hermitian_part(rho);
    let initial_fidelity = fidelity_of_map(&rho, &Channel::identity(2))?;
    let (ascent_value, _) = ascent(&fidelity_functional(&rho), config.ascent_iterations)?;
    let (search_value, kraus) = search(&rho, config);
    if (ascent_value - search_value).abs() > config.agreement_tol {
        return Err(Error::Inconsistent(format!(
            "ascent reached {ascent_value:.6}, extremal search {search_value:.6}"
        )));
    }
    let channel = Channel::from_kraus(kraus.to_vec(), true)?;
    let f_star = fidelity_of_map(&rho, &channel)?;
    Ok(FidelityResult { f_star, channel, initial_fidelity, ascent_value, search_value })
}
