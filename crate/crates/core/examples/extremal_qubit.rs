//! Angle form of extremal qubit channels.

use qdual::channel::Channel;
use qdual::qubit::{canonical_extremal, extremal_form_of};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ad = Channel::amplitude_damping(0.36)?;
    let form = extremal_form_of(&ad)?;
    println!("α = {:.6}, β = {:.6}, s = ({:.6}, {:.6})", form.alpha, form.beta, form.s0, form.s1);
    println!("rebuilt from the form: distance {:.2e}", form.channel()?.action_distance(&ad));

    let ch = canonical_extremal(0.3, 1.1)?;
    println!("canonical(0.3, 1.1): Kraus rank {}", ch.rank());
    Ok(())
}
