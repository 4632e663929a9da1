//! Benchmark problems: state preparation, Bell-like state discrimination and
//! the Heisenberg ground-state search.

mod discrimination;
mod heisenberg;
mod targets;

pub use discrimination::{discrimination_cost, discrimination_fidelity, DiscriminationSet, LabeledPair};
pub use heisenberg::{
    build_hamiltonian, exact_ground_energy, sample_lattice_model, sample_lattice_model_on, vqe_cost, vqe_energy,
    Hamiltonian, HeisenbergModel, LatticeFragment, MAX_SPINS,
};
pub use targets::{fidelity, fidelity_cost, haar_amplitudes, target_ghz, target_haar_random};
