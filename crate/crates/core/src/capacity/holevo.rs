//! Holevo quantity of qubit channels.

use nalgebra::{DMatrix, Vector3};
use rand::Rng as _;

use super::{qubit_entropy_from_bloch, von_neumann_entropy, Ensemble};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, CMat};
use crate::optim::NelderMead;
use crate::qubit::concurrence::zero_diagonal;
use crate::qubit::{ptm, require_qubit_tp, Ptm};
use crate::random;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiMethod {
    Multistart,
    ConcurrenceExact,
}

impl ChiMethod {
    pub fn name(self) -> &'static str {
        match self {
            ChiMethod::Multistart => "multistart",
            ChiMethod::ConcurrenceExact => "concurrence-exact",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChiConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Numbers of pure states tried in the ensemble.
    pub ensemble_sizes: Vec<usize>,
    pub max_evals: usize,
}

impl Default for ChiConfig {
    fn default() -> Self {
        ChiConfig { seed: 0, restarts: 64, ensemble_sizes: vec![2, 3], max_evals: 10_000 }
    }
}

#[derive(Debug, Clone)]
pub struct ChiResult {
    pub chi: f64,
    pub ensemble: Ensemble,
    pub method: ChiMethod,
}

/// `S(Φ(ρ̄)) − Σ p_j S(Φ(ρ_j))`, evaluated with the channel's action.
pub fn chi_of_ensemble(ch: &Channel, ensemble: &Ensemble) -> Result<f64> {
    let avg = ch.apply(&ensemble.average())?;
    let mut chi = von_neumann_entropy(&avg)?;
    for (p, rho) in &ensemble.items {
        chi -= p * von_neumann_entropy(&ch.apply(rho)?)?;
    }
    Ok(chi)
}

fn bloch_direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn bloch_state(x: &Vector3<f64>) -> CMat {
    (numkit::pauli(0) + numkit::pauli(1) * cr(x[0]) + numkit::pauli(2) * cr(x[1]) + numkit::pauli(3) * cr(x[2]))
        * cr(0.5)
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}

/// Parameters: `(θ_k, φ_k)` for each state, then `K` weight logits.
fn unpack(params: &[f64], k: usize) -> (Vec<f64>, Vec<Vector3<f64>>) {
    let dirs = (0..k).map(|j| bloch_direction(params[2 * j], params[2 * j + 1])).collect();
    (softmax(&params[2 * k..3 * k]), dirs)
}

fn chi_bloch(p: &Ptm, weights: &[f64], dirs: &[Vector3<f64>]) -> f64 {
    let mut avg = Vector3::zeros();
    let mut mean_entropy = 0.0;
    for (w, x) in weights.iter().zip(dirs) {
        let y = p.apply_bloch(x);
        avg += y * *w;
        mean_entropy += w * qubit_entropy_from_bloch(y.norm());
    }
    qubit_entropy_from_bloch(avg.norm()) - mean_entropy
}

/// Multi-start search over ensembles of pure states. The value is a lower
/// bound on the product-state capacity.
pub fn holevo_chi(ch: &Channel, config: &ChiConfig) -> Result<ChiResult> {
    require_qubit_tp(ch)?;
    let p = ptm(ch)?;
    let mut rng = random::rng(config.seed);
    let nm = NelderMead { max_evals: config.max_evals, ftol: 1e-14, initial_step: 0.4 };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    for &k in &config.ensemble_sizes {
        if k < 1 {
            return Err(Error::InvalidInput("ensemble size must be positive".into()));
        }
        for restart in 0..config.restarts {
            let mut x0: Vec<f64> = (0..3 * k).map(|_| rng.random_range(-3.0..3.0)).collect();
            if restart < 3 && k >= 2 {
                // antipodal pairs along the coordinate axes
                let (th, ph) = [(0.0, 0.0), (half_pi, 0.0), (half_pi, half_pi)][restart];
                x0[..4].copy_from_slice(&[th, ph, std::f64::consts::PI - th, ph + std::f64::consts::PI]);
                x0[2 * k..].iter_mut().for_each(|l| *l = 0.0);
            }
            let m = nm.minimize(
                &mut |x: &[f64]| {
                    let (w, d) = unpack(x, k);
                    -chi_bloch(&p, &w, &d)
                },
                &x0,
            );
            if best.as_ref().is_none_or(|b| -m.value > b.0) {
                best = Some((-m.value, k, m.x));
            }
        }
    }
    let (_, k, x) = best.ok_or_else(|| Error::InvalidInput("no ensemble sizes configured".into()))?;
    let (w, dirs) = unpack(&x, k);
    let ensemble = Ensemble::new(w.into_iter().zip(dirs.iter().map(bloch_state)).collect())?;
    let chi = chi_of_ensemble(ch, &ensemble)?;
    Ok(ChiResult { chi, ensemble, method: ChiMethod::Multistart })
}

/// Optimum for a prescribed ensemble average.
#[derive(Debug, Clone)]
pub struct FixedAverage {
    pub chi: f64,
    /// Smallest mean of `|ψᵀMψ|` over decompositions of the average.
    pub concurrence: f64,
    pub output_entropy: f64,
    pub ensemble: Ensemble,
}

/// `f(C) = H((1 + √(1 − C²))/2)`: the output entropy of a pure input with
/// determinant value `C`.
fn f_of_c(conc: f64) -> f64 {
    let c2 = conc.clamp(0.0, 1.0).powi(2);
    qubit_entropy_from_bloch((1.0 - c2).sqrt())
}

/// `M = A₁ᵀσ_yA₂ − A₂ᵀσ_yA₁`, for which `det Φ(|ψ⟩⟨ψ|) = |ψᵀMψ|²/4`.
fn determinant_form(ch: &Channel) -> Result<CMat> {
    require_qubit_tp(ch)?;
    let kraus = ch.minimal_kraus();
    if kraus.len() > 2 {
        return Err(Error::Hypothesis(format!("channel has rank {}", kraus.len())));
    }
    let a1 = &kraus[0];
    let zero = CMat::zeros(2, 2);
    let a2 = kraus.get(1).unwrap_or(&zero);
    let y = numkit::pauli(2);
    Ok(a1.transpose() * &y * a2 - a2.transpose() * &y * a1)
}

/// `C² = (σ₁ − σ₂)²` with `σ₁² + σ₂² = Tr(M†ρ̄Mρ)` and `σ₁σ₂ = det ρ·|det M|`.
fn concurrence_of_average(m: &CMat, rho: &CMat) -> f64 {
    let f2 = numkit::trace(&(m.adjoint() * rho.conjugate() * m * rho)).re;
    let det = |a: &CMat| a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let prod = det(rho).re.max(0.0) * det(m).norm();
    (f2 - 2.0 * prod).max(0.0).sqrt()
}

/// Largest Holevo quantity over ensembles with average `rho_avg`, for a qubit
/// channel of rank at most two.
pub fn chi_given_average(ch: &Channel, rho_avg: &CMat) -> Result<FixedAverage> {
    let m = determinant_form(ch)?;
    super::check_density(rho_avg, 1e-9)?;
    if rho_avg.nrows() != 2 {
        return Err(Error::DimensionMismatch("qubit average expected".into()));
    }
    let rho = numkit::hermitian_part(rho_avg);
    let x = numkit::sqrt_psd(&rho, Some(1e-13))?;
    let tau = x.transpose() * &m * &x;
    let tak = numkit::takagi(&((&tau + tau.transpose()) * cr(0.5)))?;
    let mut xp = &x * tak.v.conjugate();
    let sigma = tak.sigma.clone();
    let conc = if sigma.len() > 1 { (sigma[0] - sigma[1]).max(0.0) } else { sigma[0] };
    if xp.ncols() == 2 {
        let col = xp.column(1) * c(0.0, 1.0);
        xp.set_column(1, &col);
        let gram = xp.adjoint() * &xp;
        let a = DMatrix::<f64>::from_fn(2, 2, |i, j| {
            let d = match (i, j) {
                (0, 0) => sigma[0],
                (1, 1) => -sigma[1],
                _ => 0.0,
            };
            d - conc * gram[(i, j)].re
        });
        xp *= zero_diagonal(&a).map(cr);
    }
    let mut items = Vec::new();
    for col in xp.column_iter() {
        let w = col.norm_squared();
        if w > 1e-15 {
            items.push((w, numkit::projector(&(col / cr(w.sqrt())))));
        }
    }
    let total: f64 = items.iter().map(|(w, _)| w).sum();
    items.iter_mut().for_each(|(w, _)| *w /= total);
    let ensemble = Ensemble::new(items)?;

    let output_entropy = von_neumann_entropy(&ch.apply(&rho)?)?;
    let chi = output_entropy - f_of_c(conc);
    let direct = chi_of_ensemble(ch, &ensemble)?;
    if (direct - chi).abs() > 1e-9 {
        return Err(Error::Inconsistent(format!("fixed-average optimum {chi} but its ensemble gives {direct}")));
    }
    Ok(FixedAverage { chi, concurrence: conc, output_entropy, ensemble })
}

/// Holevo quantity of a rank ≤ 2 qubit channel, maximising the exact
/// fixed-average value over the Bloch ball.
pub fn holevo_chi_extremal(ch: &Channel, config: &ChiConfig) -> Result<ChiResult> {
    let m = determinant_form(ch)?;
    let p = ptm(ch)?;
    let value = |u: &[f64]| -> f64 {
        let v = Vector3::new(u[0], u[1], u[2]);
        let r = v.norm();
        let x = if r > 0.0 { v * (r.tanh() / r) } else { v };
        let rho = bloch_state(&x);
        qubit_entropy_from_bloch(p.apply_bloch(&x).norm()) - f_of_c(concurrence_of_average(&m, &rho))
    };
    let mut rng = random::rng(config.seed);
    let nm = NelderMead { max_evals: config.max_evals, ftol: 1e-15, initial_step: 0.3 };
    let mut best = (f64::NEG_INFINITY, vec![0.0; 3]);
    for _ in 0..config.restarts.max(1) {
        let x0: Vec<f64> = (0..3).map(|_| rng.random_range(-1.5..1.5)).collect();
        let r = nm.minimize(&mut |u: &[f64]| -value(u), &x0);
        if -r.value > best.0 {
            best = (-r.value, r.x);
        }
    }
    let v = Vector3::new(best.1[0], best.1[1], best.1[2]);
    let r = v.norm();
    let x = if r > 0.0 { v * (r.tanh() / r) } else { v };
    let fixed = chi_given_average(ch, &bloch_state(&x))?;
    Ok(ChiResult { chi: fixed.chi, ensemble: fixed.ensemble, method: ChiMethod::ConcurrenceExact })
}
