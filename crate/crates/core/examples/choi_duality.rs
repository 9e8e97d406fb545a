//! Kraus operators and the Choi matrix describe the same channel.

use qdual::channel::{apply_via_dual, kraus_from_choi, Channel};
use qdual::numkit;
use qdual::random;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = random::rng(1);
    let ch = random::channel(&mut rng, 3, 2)?;
    let rho = random::density_matrix(&mut rng, 3, 3);

    let direct = ch.apply(&rho)?;
    let dual = apply_via_dual(ch.choi(), &rho)?;
    println!("|Φ(ρ) via Kraus − via Choi| = {:.2e}", numkit::max_abs_diff(&direct, &dual));

    let back = Channel::from_kraus(kraus_from_choi(ch.choi(), None)?, true)?;
    println!("Kraus rank {} recovered, action distance {:.2e}", back.kraus().len(), back.action_distance(&ch));
    println!("trace preserving: {}, unital: {}", ch.is_tp()?, ch.is_unital()?);
    Ok(())
}
