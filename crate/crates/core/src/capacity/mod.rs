//! Capacities and correlation measures for qubit channels and two-qubit states.
//! All entropies are in bits.

mod correlations;
mod fidelity;
mod holevo;

pub use correlations::{classical_correlations, CorrelationResult, MeasuredSide};
pub use fidelity::{fidelity_of_map, fidelity_optimize_one_side, FidelityConfig, FidelityResult};
pub use holevo::{
    chi_given_average, chi_of_ensemble, holevo_chi, holevo_chi_extremal, ChiConfig, ChiMethod, ChiResult, FixedAverage,
};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{self, eigh, CMat};

/// Shannon entropy `H(p)` of a binary distribution.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) || p.is_nan() {
        return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(xlog(p) + xlog(1.0 - p))
}

fn xlog(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Entropy of a probability vector; tiny negative entries are treated as zero.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| xlog(p)).sum()
}

/// Von Neumann entropy from the spectrum.
pub fn von_neumann_entropy(rho: &CMat) -> Result<f64> {
    let e = eigh(&numkit::hermitian_part(rho))?;
    Ok(shannon_entropy(e.values.as_slice()))
}

/// Entropy of a qubit state with Bloch vector length `r`.
pub fn qubit_entropy_from_bloch(r: f64) -> f64 {
    let p = (0.5 * (1.0 + r)).clamp(0.0, 1.0);
    xlog(p) + xlog(1.0 - p)
}

fn check_density(rho: &CMat, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} state", rho.nrows(), rho.ncols())));
    }
    if !numkit::is_hermitian(rho, 1e-10) {
        return Err(Error::NotHermitian(numkit::hermiticity_defect(rho)));
    }
    let tr = numkit::trace(rho).re;
    if (tr - 1.0).abs() > tol {
        return Err(Error::InvalidInput(format!("state has trace {tr}")));
    }
    let lmin = eigh(&numkit::hermitian_part(rho))?.min_value();
    if lmin < -tol {
        return Err(Error::NotPositive(lmin));
    }
    Ok(())
}

/// Probabilities with density matrices.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub items: Vec<(f64, CMat)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, CMat)>) -> Result<Self> {
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("ensemble weights sum to {total}")));
        }
        for (p, rho) in &items {
            if *p < -1e-15 {
                return Err(Error::InvalidInput(format!("negative weight {p}")));
            }
            check_density(rho, 1e-10)?;
        }
        Ok(Ensemble { items })
    }

    pub fn average(&self) -> CMat {
        let n = self.items.first().map_or(0, |(_, r)| r.nrows());
        self.items.iter().fold(CMat::zeros(n, n), |acc, (p, r)| acc + r * numkit::cr(*p))
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    pub elements: Vec<CMat>,
}

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self> {
        let n = elements.first().map(|e| e.nrows()).ok_or_else(|| Error::InvalidInput("empty POVM".into()))?;
        let mut sum = CMat::zeros(n, n);
        for e in &elements {
            if e.nrows() != n || !e.is_square() {
                return Err(Error::DimensionMismatch("POVM elements differ in size".into()));
            }
            let lmin = eigh(&numkit::hermitian_part(e))?.min_value();
            if lmin < -1e-10 {
                return Err(Error::NotPositive(lmin));
            }
            sum += e;
        }
        let err = numkit::max_abs_diff(&sum, &numkit::identity(n));
        if err > 1e-10 {
            return Err(Error::InvalidInput(format!("POVM sums to identity only within {err:.2e}")));
        }
        Ok(Povm { elements })
    }
}

/// `1 − H(p)` with `p` the top eigenvalue of the normalised dual state. Only
/// defined here for unital qubit channels of rank at most two.
pub fn quantum_capacity_rank2_unital(ch: &Channel) -> Result<f64> {
    if ch.dim() != 2 {
        return Err(Error::Hypothesis(format!("qubit channel required, got dimension {}", ch.dim())));
    }
    if !ch.is_tp()? {
        return Err(Error::NotTracePreserving(ch.tp_defect()));
    }
    if !ch.is_unital()? {
        return Err(Error::Hypothesis("channel is not unital".into()));
    }
    if ch.rank() > 2 {
        return Err(Error::Hypothesis(format!("channel has rank {}", ch.rank())));
    }
    let p = eigh(&ch.choi().jam)?.max_value();
    Ok(1.0 - binary_entropy(p.min(1.0))?)
}
