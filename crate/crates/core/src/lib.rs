//! Group-equivariant quantum channels and equivariant quantum convolutional
//! classifiers.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: complex matrices, Pauli bases, vectorization, nullspaces.
//! * [`group`]: representations, adjoint actions, commutants, isotypic
//!   decompositions, Haar sampling.
//! * [`channel`]: transfer matrix, Choi, Kraus and Stinespring forms.
//! * [`equiv`]: nullspace, twirling and Choi-block constructions of
//!   equivariant maps, parameter counting and layer taxonomy.
//! * [`su2`]: SU(2)-specific convolutions, poolings and the CPTP feasible
//!   region of the 2→1 pooling family.
//! * [`spin`]: bond-alternating Heisenberg chains, Lanczos, datasets.
//! * [`train`]: EQCNN and hardware-efficient baselines, gradients, ADAM.

pub mod channel;
pub mod equiv;
pub mod error;
pub mod exec;
pub mod group;
pub mod linalg;
pub mod spin;
pub mod su2;
pub mod train;

pub use error::{EqnnError, Result};
pub use exec::Exec;
