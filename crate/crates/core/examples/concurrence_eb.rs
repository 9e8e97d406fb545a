//! Concurrence of the dual state decides entanglement breaking.

use qdual::channel::Channel;
use qdual::qubit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [0.0, 0.3, 0.6, 2.0 / 3.0, 0.8, 1.0] {
        let ch = Channel::depolarizing(p)?;
        let c = qubit::concurrence(&ch.choi().jam)?;
        println!("depolarizing {p:.4}: C = {c:.6}, EB = {}", qubit::is_entanglement_breaking(&ch)?);
    }

    let ch = Channel::amplitude_damping(0.5)?;
    let form = qubit::kraus_contraction_form(&ch)?;
    println!("amplitude damping 0.5: C = {:.6}, {} Kraus operators of equal concurrence", form.c, form.kraus().len());
    let d = qubit::equal_concurrence_decomposition(&ch.choi().jam)?;
    println!("pure-state weights {:.4?}", d.weights);
    Ok(())
}
