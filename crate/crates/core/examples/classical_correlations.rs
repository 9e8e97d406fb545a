//! Classical correlations of a two-qubit state, measured on either side.

use qdual::capacity::{classical_correlations, MeasuredSide};
use qdual::channel::Channel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rho = Channel::amplitude_damping(0.5)?.choi().jam.clone();
    for side in [MeasuredSide::A, MeasuredSide::B] {
        let r = classical_correlations(&rho, side, 0)?;
        println!(
            "{side:?}: J = {:.6}, marginal entropy {:.6}, {} POVM elements",
            r.value,
            r.marginal_entropy,
            r.povm.elements.len()
        );
    }
    Ok(())
}
