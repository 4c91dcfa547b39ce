//! Symbolic engine for non-adaptive Clifford channels.
//!
//! The crate builds up from phased Pauli algebra over bit-packed GF(2)
//! vectors to Clifford tableaux, stabilizer-group states, channels in
//! Stinespring and Choi form, a circuit language that compiles to channels,
//! and a dense-matrix oracle that cross-checks every symbolic result by brute
//! force at small qubit counts.
//!
//! Typical flow: parse a circuit, compile it to a [`channel::StinespringForm`],
//! reduce with [`channel::normal_form`], read off capacities, and (optionally)
//! hand everything to [`oracle`] for a dense verification pass.

pub mod channel;
pub mod circuit;
pub mod clifford;
pub mod gf2;
pub mod oracle;
pub mod pauli;
pub mod random;
pub mod report;
pub mod stabstate;

pub use channel::{Capacities, ChannelClass, ChoiTableau, NormalForm, StinespringForm};
pub use circuit::Circuit;
pub use clifford::{CliffordUnitary, Gate};
pub use pauli::PauliOperator;
pub use stabstate::StabilizerGroupState;
