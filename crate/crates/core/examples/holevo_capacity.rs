//! Holevo χ by multistart search and by the fixed-average formula.

use qdual::capacity::{holevo_chi, holevo_chi_extremal, ChiConfig};
use qdual::channel::Channel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChiConfig::default();
    for g in [0.1, 0.5, 0.9] {
        let ch = Channel::amplitude_damping(g)?;
        let search = holevo_chi(&ch, &cfg)?;
        let exact = holevo_chi_extremal(&ch, &cfg)?;
        println!(
            "amplitude damping {g}: {} {:.6}, {} {:.6}, {} states",
            search.method.name(),
            search.chi,
            exact.method.name(),
            exact.chi,
            search.ensemble.items.len()
        );
    }
    Ok(())
}
