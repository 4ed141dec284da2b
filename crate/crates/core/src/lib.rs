//! Catalytic quantum randomness: exact and approximate dephasing with reusable
//! sources of randomness, simulated on dense complex matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`] dense linear algebra, states, norms, entropies, majorization.
//! * [`weylops`] clock and shift operators, Weyl bases, mutually unbiased bases.
//! * [`dephaser`] pinching, optimal dephasing channels, the dephasing machine.
//! * [`recurrence`] recurrence unitaries and continuous-time evolution.
//! * [`pqc`] the entanglement-keyed private quantum channel.
//! * [`expander`] Margulis walks and phase-space dephasing.
//! * [`bounds`] epsilon-dephasing and lower bounds on the randomness needed.

pub mod bounds;
pub mod dephaser;
pub mod error;
pub mod expander;
pub mod pqc;
pub mod qcore;
pub mod recurrence;
pub mod tolerance;
pub mod weylops;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
