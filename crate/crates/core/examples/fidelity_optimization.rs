//! Local filtering of one side to raise the fidelity with a Bell state.

use qdual::capacity::{fidelity_optimize_one_side, FidelityConfig};
use qdual::numkit::{self, cr, CVec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a|φ⟩⟨φ| + (1−a)|11⟩⟨11| with |φ⟩ = cos θ|01⟩ + sin θ|10⟩
    let (a, theta) = (0.3f64, 0.5f64);
    let phi = CVec::from_vec(vec![cr(0.0), cr(theta.cos()), cr(theta.sin()), cr(0.0)]);
    let rho = numkit::projector(&phi) * cr(a) + numkit::diag_real(&[0.0, 0.0, 0.0, 1.0 - a]);

    let r = fidelity_optimize_one_side(&rho, &FidelityConfig::default())?;
    println!("untouched fidelity {:.6}", r.initial_fidelity);
    println!("optimum {:.6} (ascent {:.6}, search {:.6})", r.f_star, r.ascent_value, r.search_value);
    println!("optimal channel has Kraus rank {}", r.channel.rank());
    Ok(())
}
