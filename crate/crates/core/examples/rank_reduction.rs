//! Find an input whose output has lower rank than the Kraus rank.

use qdual::extremal::rank_reducing_input;
use qdual::numkit::{self, eigh};
use qdual::random;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = random::rng(4);
    let ch = random::channel(&mut rng, 3, 3)?;
    let r = rank_reducing_input(&ch, 0)?;
    let out = ch.apply(&numkit::projector(&r.psi))?;
    let spectrum = eigh(&out)?.values;
    println!(
        "Kraus rank {}, output spectrum [{}]",
        ch.rank(),
        spectrum.as_slice().iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
