//! Best input for entanglement fidelity and the quantum capacity of rank-two unital channels.

use qdual::capacity::quantum_capacity_rank2_unital;
use qdual::channel::Channel;
use qdual::numkit::{self, cr};
use qdual::qubit::{self, concurrence::entanglement_fidelity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ad = Channel::amplitude_damping(0.5)?;
    let (f, input) = qubit::max_entanglement_fidelity(&ad)?;
    let bell = numkit::max_entangled(2) / cr(2f64.sqrt());
    println!("f_max = {f:.6} (Bell input gives {:.6})", entanglement_fidelity(&ad, &bell)?);
    let amps: Vec<String> = input.iter().map(|z| format!("{:.4}", z)).collect();
    println!("optimal input [{}]", amps.join(", "));

    for p in [0.05, 0.1, 0.25, 0.5] {
        println!("phase flip {p}: quantum capacity {:.6}", quantum_capacity_rank2_unital(&Channel::phase_flip(p)?)?);
    }
    Ok(())
}
