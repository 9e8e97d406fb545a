//! Quantum channels through their dual (Choi) states.
//!
//! A completely positive map `Φ` on `n×n` matrices is stored as a list of
//! Kraus operators together with its Choi matrix
//! `C_Φ = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` (trace `n` for trace-preserving maps) and
//! the normalised Jamiolkowski state `J_Φ = C_Φ / n`.
//!
//! Modules:
//!
//! - [`numkit`]: small dense complex linear algebra (kron, partial trace and
//!   transpose, eigh, svd, Takagi, PSD square roots).
//! - [`channel`]: Kraus/Choi duality, signed Kraus forms of Hermitian-preserving
//!   maps, CP-deficit decomposition, channel builders.
//! - [`extremal`]: extremality tests, convex splits into extremal channels,
//!   rank-reducing inputs.
//! - [`qubit`]: Pauli transfer matrices, Bloch ellipsoids, LU and SLOCC normal
//!   forms, extremal qubit channels, concurrence machinery.
//! - [`capacity`]: entropies, quantum and Holevo capacities, classical
//!   correlations, fidelity-maximising local maps.
//! - [`cli`]: channel files and the analysis reports behind the `qdual` binary.

pub mod capacity;
pub mod channel;
pub mod channel_file;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod numkit;
pub mod optim;
pub mod qubit;
pub mod random;

pub use channel::{Channel, ChoiPair, CpDeficit, HermitianMap};
pub use error::{Error, Result};
pub use numkit::{CMat, CVec};
