//! Classical correlations of two-qubit states: the entropy reduction on one
//! side achievable by measuring the other.

use super::{von_neumann_entropy, Povm};
use crate::error::{Error, Result};
use crate::numkit::{self, c, cr, kron, partial_trace, CMat, CVec, Subsystem};
use crate::optim::NelderMead;
use crate::random;

/// The subsystem the measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredSide {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct CorrelationResult {
    pub value: f64,
    pub povm: Povm,
    /// Entropy of the unmeasured marginal, an upper bound on `value`.
    pub marginal_entropy: f64,
}

/// Unnormalised conditional states of the unmeasured side.
fn conditional_states(rho: &CMat, side: MeasuredSide, elements: &[CMat]) -> Result<Vec<CMat>> {
    let id = numkit::identity(2);
    elements
        .iter()
        .map(|e| match side {
            MeasuredSide::A => partial_trace(&(rho * kron(e, &id)), 2, 2, Subsystem::First),
            MeasuredSide::B => partial_trace(&(rho * kron(&id, e)), 2, 2, Subsystem::Second),
        })
        .collect()
}

/// Bloch length of `m / Tr m` for a 2×2 positive `m`, with its trace.
fn qubit_trace_and_radius(m: &CMat) -> (f64, f64) {
    let t = (m[(0, 0)] + m[(1, 1)]).re;
    if t <= 1e-300 {
        return (0.0, 0.0);
    }
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re / (t * t);
    (t, (1.0 - 4.0 * det).max(0.0).sqrt())
}

fn mean_conditional_entropy(states: &[CMat]) -> f64 {
    states
        .iter()
        .map(|s| {
            let (p, r) = qubit_trace_and_radius(s);
            p * super::qubit_entropy_from_bloch(r)
        })
        .sum()
}

fn projective(theta: f64, phi: f64) -> Vec<CMat> {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let s = numkit::pauli(1) * cr(n[0]) + numkit::pauli(2) * cr(n[1]) + numkit::pauli(3) * cr(n[2]);
    let id = numkit::identity(2);
    vec![(&id + &s) * cr(0.5), (&id - &s) * cr(0.5)]
}

/// Rank-one POVM `E_j = S^{-1/2}v_jv_j†S^{-1/2}` from `K` vectors, `S = Σv_jv_j†`.
fn frame_povm(params: &[f64]) -> Option<Vec<CMat>> {
    let vs: Vec<CVec> = params.chunks(4).map(|q| CVec::from_vec(vec![c(q[0], q[1]), c(q[2], q[3])])).collect();
    let s = vs.iter().fold(CMat::zeros(2, 2), |acc, v| acc + numkit::projector(v));
    let e = numkit::eigh(&s).ok()?;
    if e.min_value() < 1e-9 * e.max_value().max(1e-300) {
        return None;
    }
    let inv = numkit::herm_fn(&s, |x| 1.0 / x.sqrt()).ok()?;
    Some(vs.iter().map(|v| &inv * numkit::projector(v) * &inv).collect())
}

/// `max_E S(ρ_rest) − Σ_j p_j S(ρ_rest^j)` over measurements `E` on `side`.
/// Projective measurements are searched first, then three- and four-outcome
/// rank-one POVMs from seeded random frames; the best value is kept, so the
/// result is a certified lower bound.
pub fn classical_correlations(rho: &CMat, side: MeasuredSide, seed: u64) -> Result<CorrelationResult> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit state expected".into()));
    }
    super::check_density(rho, 1e-9)?;
    let rho = numkit::hermitian_part(rho);
    let rest = match side {
        MeasuredSide::A => partial_trace(&rho, 2, 2, Subsystem::First)?,
        MeasuredSide::B => partial_trace(&rho, 2, 2, Subsystem::Second)?,
    };
    let marginal_entropy = von_neumann_entropy(&rest)?;
    let cost = |elements: &[CMat]| -> f64 {
        conditional_states(&rho, side, elements).map_or(f64::INFINITY, |s| mean_conditional_entropy(&s))
    };

    let pi = std::f64::consts::PI;
    let grid = 24;
    let mut start = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..=grid {
        for j in 0..2 * grid {
            let (th, ph) = (pi * i as f64 / grid as f64, pi * j as f64 / grid as f64);
            let v = cost(&projective(th, ph));
            if v < start.0 {
                start = (v, [th, ph]);
            }
        }
    }
    let nm = NelderMead { max_evals: 4000, ftol: 1e-15, initial_step: 0.05 };
    let m = nm.minimize(&mut |x: &[f64]| cost(&projective(x[0], x[1])), &start.1);
    let mut best_povm = projective(m.x[0], m.x[1]);
    let mut best_cost = cost(&best_povm);

    let mut rng = random::rng(seed);
    let nm = NelderMead { max_evals: 6000, ftol: 1e-15, initial_step: 0.3 };
    for k in [3, 4] {
        for _ in 0..8 {
            let x0: Vec<f64> = (0..4 * k).map(|_| random::gaussian(&mut rng)).collect();
            let m = nm.minimize(&mut |x: &[f64]| frame_povm(x).map_or(f64::INFINITY, |e| cost(&e)), &x0);
            if let Some(e) = frame_povm(&m.x) {
                let v = cost(&e);
                if v < best_cost {
                    best_cost = v;
                    best_povm = e;
                }
            }
        }
    }
    let value = (marginal_entropy - best_cost).clamp(0.0, marginal_entropy);
    Ok(CorrelationResult { value, povm: Povm::new(best_povm)?, marginal_entropy })
}
