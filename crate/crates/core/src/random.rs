//! Seeded random states, unitaries and channels.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::Channel;
use crate::error::Result;
use crate::numkit::{self, c, cr, CMat, CVec};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Haar-random unit vector.
pub fn unit_vector(rng: &mut Rng, n: usize) -> CVec {
    let v = CVec::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)));
    let norm = v.norm();
    v / cr(norm)
}

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
pub fn unitary(rng: &mut Rng, n: usize) -> CMat {
    isometry(rng, n, n)
}

/// Random `rows×cols` isometry (`rows ≥ cols`), `V†V = I`.
pub fn isometry(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    let g = ginibre(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / cr(d.norm()) } else { cr(1.0) };
        for i in 0..rows {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random density matrix of the given rank (induced measure).
pub fn density_matrix(rng: &mut Rng, n: usize, rank: usize) -> CMat {
    let g = ginibre(rng, n, rank.max(1));
    let rho = &g * g.adjoint();
    let t = numkit::trace(&rho);
    numkit::hermitian_part(&(rho / t))
}

/// Random pure state projector.
pub fn pure_state(rng: &mut Rng, n: usize) -> CMat {
    numkit::projector(&unit_vector(rng, n))
}

/// Random trace-preserving channel with `m` Kraus operators, cut from a
/// random `mn × n` isometry.
pub fn channel(rng: &mut Rng, n: usize, m: usize) -> Result<Channel> {
    let v = isometry(rng, m * n, n);
    let kraus = (0..m).map(|k| v.view((k * n, 0), (n, n)).into_owned()).collect();
    Channel::from_kraus(kraus, true)
}
