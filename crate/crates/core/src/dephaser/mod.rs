//! Pinching, optimal quantum and classical dephasing, catalytic reuse of the
//! source of randomness, state transitions, the universal dephasing machine,
//! and minimal decoherence and measurement models.

mod chain;
mod channel;
mod controlled;
mod environment;
mod machine;
mod transition;

pub use chain::{catalytic_chain, ChainReport, PairInformation};
pub use channel::{
    ancilla_dim_for, apply, build_dephasing_unitary, classical_dephasing_channel, dephasing_unitary, pinch,
    NoisyChannel,
};
pub use controlled::ControlledUnitary;
pub use environment::{
    decohere, decoherence_unitary, maximally_entangled_ket, measurement_process, DecoherenceOutcome,
    MeasurementOutcome,
};
pub use machine::{
    machine_iterate, machine_step, DephasingMachine, DistillationReport, MachineReport, MachineRow,
};
pub use transition::{transition_channel, Mode, TransitionChannel};
