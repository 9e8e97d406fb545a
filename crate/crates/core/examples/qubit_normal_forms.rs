//! Pauli transfer matrix, output ellipsoid, LU and SLOCC normal forms.

use qdual::channel::Channel;
use qdual::qubit;
use qdual::random;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = random::rng(5);
    let ch = random::channel(&mut rng, 2, 2)?;
    println!("transfer matrix:{:.4}", qubit::ptm(&ch)?.r);

    let e = qubit::ellipsoid(&ch)?;
    println!("ellipsoid center {:.4?}, semi-axes {:.4?}", e.center.as_slice(), e.semi_axes);

    let lu = qubit::lu_normal_form(&ch)?;
    println!("LU: lambdas {:.4?}, shift {:.4?}", lu.lambdas, lu.shift);

    for (name, ch) in [
        ("random", ch),
        ("depolarizing 0.3", Channel::depolarizing(0.3)?),
        ("amplitude damping 0.4", Channel::amplitude_damping(0.4)?),
        ("amplitude damping 1", Channel::amplitude_damping(1.0)?),
    ] {
        let f = qubit::slocc_normal_form(&ch)?;
        println!("SLOCC {name}: {} ({:?})", f.kind.name(), f.kind);
    }
    Ok(())
}
