//! Braids of fixed points of Hamiltonian maps of the disk, a combinatorial
//! obstruction to being generated by an autonomous flow, and the action
//! spectrum used to show the obstruction survives small perturbations.
//!
//! The numerical modules are generic over the scalar type; the aliases
//! below fix it to `f64`.

pub mod braids;
pub mod dynamics;
pub mod geometry;
pub mod obstruction;
pub mod profiles;
pub mod quadrature;
pub mod scalar;
pub mod scenarios;
pub mod spectrum;

pub use braids::{BraidError, BraidOptions, SurfaceModel, WindingMatrix};
pub use dynamics::DynamicsError;
pub use obstruction::{find_obstruction, ObstructionCertificate};
pub use scalar::Scalar;
pub use scenarios::{run_scenario, ScenarioConfig, ScenarioError, ScenarioResult};

pub type Point = geometry::Point2<f64>;
pub type RadialProfile = profiles::RadialProfile<f64>;
pub type RadialHamiltonian = profiles::RadialHamiltonian<f64>;
pub type HamiltonianSystem = dynamics::HamiltonianSystem<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type Strand = braids::Strand<f64>;
pub type StrandSet = braids::StrandSet<f64>;
pub type FixedSetComponent = dynamics::FixedSetComponent<f64>;
pub type ActionSpectrum = spectrum::ActionSpectrum<f64>;
