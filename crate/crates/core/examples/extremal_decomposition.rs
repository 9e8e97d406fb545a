//! Test extremality and split a channel into extremal pieces.

use qdual::channel::Channel;
use qdual::extremal::{decompose_into_extremals, is_extremal_tp, INDEPENDENCE_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, ch) in [
        ("amplitude damping 0.4", Channel::amplitude_damping(0.4)?),
        ("depolarizing 0.5", Channel::depolarizing(0.5)?),
        ("phase flip 0.3", Channel::phase_flip(0.3)?),
    ] {
        println!("{name}: extremal = {}", is_extremal_tp(&ch, INDEPENDENCE_TOL)?);
    }

    let ch = Channel::depolarizing(0.5)?;
    let parts = decompose_into_extremals(&ch, 64)?;
    for (w, leaf) in &parts {
        println!("  weight {w:.4}, Kraus rank {}", leaf.rank());
    }
    let err = Channel::mixture(&parts)?.action_distance(&ch);
    println!("{} components, reconstruction error {err:.2e}", parts.len());
    Ok(())
}
