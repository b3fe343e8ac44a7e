//! Spin-1 chain Hamiltonians with a purified right edge, adiabatic schedules,
//! and logical-gate extraction by ground-space transport.
//!
//! Layouts place the spin-1 sites first (site 0 is the free left boundary)
//! and the terminal spin-½ last. A two-chain layout is two such blocks side by
//! side. All energies are in units of `J`.

mod ground;
mod layout;
mod models;
mod schedule;
mod transport;

use alloc::string::String;

use thiserror::Error;

use crate::eigen::EigenError;

pub use ground::{ground_space, GroundSpace, GroundSolver, GAP_FLOOR};
pub use layout::{ChainLayout, OperatorTerm, ProductOperator, SpinSite, DEFAULT_DIM_CAP};
pub use models::{
    bond_term, conserved_operator, edge_coupled_chain, edge_term, elementary_gate_schedule, haldane_hamiltonian, logical_qubit,
    rotation_operator, single_qubit_holonomy_schedule, transistor_schedule, two_chain_conserved, two_qubit_coupling,
    two_qubit_gate_schedule, uniform_field_term, xi_state, EdgeChain, GateProtocol, HolonomyStages,
};
pub use schedule::{Ramp, Schedule, ScheduledHamiltonian, ScheduledTerm};
pub use transport::{gap_profile, logical_frame, transport_holonomy, HolonomyResult, LogicalQubit, TransportOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("chain length {0} is too short")]
    BadChainLength(usize),
    #[error("boundary index {j} out of range for a chain of {n} spin-1 sites")]
    BadBoundaryIndex { j: usize, n: usize },
    #[error("axis is not a unit vector")]
    AxisNotUnit,
    #[error("axes are not orthogonal")]
    AxesNotOrthogonal,
    #[error("Hilbert-space dimension exceeds the cap {cap}")]
    DimensionCap { cap: usize },
    #[error("term `{label}` is not Hermitian (residual {residual:e})")]
    NotHermitian { label: String, residual: f64 },
    #[error("term `{0}` has an invalid support")]
    BadSupport(String),
    #[error("schedule value is not finite at t = {0}")]
    NonFiniteSchedule(f64),
    #[error("no spectral gap at t = {t}: {gap:e}")]
    NoGap { t: f64, gap: f64 },
    #[error("ground degeneracy changed from {expected} to {found} at t = {t}")]
    DegeneracyChange { t: f64, expected: usize, found: usize },
    #[error("step doubling changed the logical gate by {change:e}")]
    NonConvergent { change: f64 },
    #[error("logical frame: {0}")]
    Frame(String),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}
