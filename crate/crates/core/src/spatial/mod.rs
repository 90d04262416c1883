//! Quadratic Lagrange finite elements for `i B u' = A u` in one dimension.

pub mod assemble;
pub mod mesh;
pub mod spectral;
pub mod state;

pub use assemble::{
    assemble_full, assemble_system, element_matrices, PhysicalConstants, PotentialSpec,
    SystemMatrices,
};
pub use mesh::{build_mesh, Mesh1D};
pub use spectral::{spectral_radius_estimate, SpectralEstimate, SAFETY_FACTOR};
pub use state::{
    b_norm, evaluate_wavefunction, probability_density, project_initial, wave_packet_eval,
    StateVector, WavePacketParams,
};
