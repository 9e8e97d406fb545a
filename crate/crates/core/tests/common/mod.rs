//! Oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Vector3;
use qdual::channel::Channel;
use qdual::numkit::{self, cr, CMat, CVec};
use qdual::optim::golden_max;
use qdual::qubit;

/// Binary entropy in bits from natural logarithms.
pub fn h2(p: f64) -> f64 {
    let t = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    (t(p) + t(1.0 - p)) / std::f64::consts::LN_2
}

pub fn bloch_state(x: &Vector3<f64>) -> CMat {
    (numkit::pauli(0) + numkit::pauli(1) * cr(x[0]) + numkit::pauli(2) * cr(x[1]) + numkit::pauli(3) * cr(x[2]))
        * cr(0.5)
}

/// Best two-state ensemble in the x–z plane (states on opposite azimuths),
/// by grid at step 2·10⁻² then 10⁻³ with an exact weight search.
pub fn amplitude_damping_grid_oracle(ch: &Channel) -> f64 {
    let p = qubit::ptm(ch).unwrap();
    let h = |r: f64| h2((1.0 + r.min(1.0)) / 2.0);
    let chi = |t1: f64, t2: f64| {
        let y1 = p.apply_bloch(&Vector3::new(t1.sin(), 0.0, t1.cos()));
        let y2 = p.apply_bloch(&Vector3::new(-t2.sin(), 0.0, t2.cos()));
        let mixed = |w: f64| h((y1 * w + y2 * (1.0 - w)).norm()) - w * h(y1.norm()) - (1.0 - w) * h(y2.norm());
        golden_max(mixed, 0.0, 1.0, 1e-9).1
    };
    let pi = std::f64::consts::PI;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let coarse = 0.02;
    let n = (pi / coarse) as usize;
    for i in 0..=n {
        for j in 0..=n {
            let (t1, t2) = (i as f64 * coarse, j as f64 * coarse);
            let v = chi(t1, t2);
            if v > best.0 {
                best = (v, t1, t2);
            }
        }
    }
    let (c1, c2) = (best.1, best.2);
    for i in -30..=30 {
        for j in -30..=30 {
            let v = chi(c1 + i as f64 * 1e-3, c2 + j as f64 * 1e-3);
            best.0 = best.0.max(v);
        }
    }
    best.0
}

pub fn bell_state() -> CMat {
    numkit::projector(&(numkit::max_entangled(2) / cr(2f64.sqrt())))
}

/// `a|φ⟩⟨φ| + (1−a)|11⟩⟨11|` with `|φ⟩ = cos θ|01⟩ + sin θ|10⟩`.
pub fn badziag_like(a: f64, theta: f64) -> CMat {
    let phi = CVec::from_vec(vec![cr(0.0), cr(theta.cos()), cr(theta.sin()), cr(0.0)]);
    let e11 = numkit::diag_real(&[0.0, 0.0, 0.0, 1.0]);
    numkit::projector(&phi) * cr(a) + e11 * cr(1.0 - a)
}
