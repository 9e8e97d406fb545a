//! Hermiticity-preserving maps: signed Kraus form and the distance to a channel.

use qdual::channel::{cp_deficit, HermitianMap};
use qdual::numkit::{self, cr, CMat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = HermitianMap::transpose_map(2);
    println!("signed Kraus weights of the transpose: {:?}", t.eigenvalues());

    let d = cp_deficit(&t)?;
    println!("epsilon = {:.6}", d.epsilon);
    let x = numkit::from_rows(&[vec![cr(0.7), numkit::c(0.1, 0.3)], vec![numkit::c(0.1, -0.3), cr(0.3)]]);
    let rebuilt: CMat = d.apply(&x)?;
    println!("reconstruction error on a test state: {:.2e}", numkit::max_abs_diff(&rebuilt, &x.transpose()));
    Ok(())
}
