use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fock::{DualRail, StateVector};
use crate::network::Circuit;
use crate::{Error, Real, Result};

/// Largest spin count accepted by [`build_hamiltonian`].
pub const MAX_SPINS: usize = 10;

/// Heisenberg model with isotropic couplings and transverse fields:
/// `H = -sum_(ij) J_ij (XX + YY + ZZ) - sum_i h_i X_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergModel {
    pub spins: usize,
    /// `(i, j, J_ij)` with zero-based spin indices.
    pub edges: Vec<(usize, usize, f64)>,
    pub fields: Vec<f64>,
    /// Intra-chain coupling, when sampled on a lattice fragment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j1: Option<f64>,
    /// Inter-chain coupling, when sampled on a lattice fragment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2: Option<f64>,
}

impl HeisenbergModel {
    pub fn validate(&self) -> Result<()> {
        if self.fields.len() != self.spins {
            return Err(Error::Config(format!("{} fields for {} spins", self.fields.len(), self.spins)));
        }
        for &(i, j, _) in &self.edges {
            if i == j {
                return Err(Error::Config(format!("self-loop on spin {i}")));
            }
            if i >= self.spins || j >= self.spins {
                return Err(Error::Config(format!("edge ({i}, {j}) outside {} spins", self.spins)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: HeisenbergModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }
}

/// Edge list of a lattice fragment split into intra- and inter-chain bonds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFragment {
    pub spins: usize,
    pub intra: Vec<(usize, usize)>,
    pub inter: Vec<(usize, usize)>,
}

impl Default for LatticeFragment {
    /// Five spins on two chain segments `0-1-2` and `3-4` of a triangular lattice.
    fn default() -> Self {
        LatticeFragment {
            spins: 5,
            intra: vec![(0, 1), (1, 2), (3, 4)],
            inter: vec![(0, 3), (1, 3), (1, 4), (2, 4)],
        }
    }
}

/// Real symmetric Hamiltonian matrix over `2^n` computational states, spin 0
/// being the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    spins: usize,
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn spins(&self) -> usize {
        self.spins
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn ground_energy(&self) -> f64 {
        exact_ground_energy(&self.matrix)
    }

    /// Lowest eigenpair.
    pub fn ground_state(&self) -> (f64, Vec<f64>) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let k = eig.eigenvalues.imin();
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
    }

    /// `<psi|H|psi>` for normalized qubit amplitudes.
    pub fn expectation<T: Real>(&self, amps: &[Complex<T>]) -> Result<T> {
        let dim = self.matrix.nrows();
        if amps.len() != dim {
            return Err(Error::shape(format!("{} amplitudes for dimension {dim}", amps.len())));
        }
        let v: Vec<Complex<f64>> = amps.iter().map(|c| Complex::new(c.re.as_f64(), c.im.as_f64())).collect();
        let mut e = 0.0;
        for r in 0..dim {
            let mut row = Complex::new(0.0, 0.0);
            for c in 0..dim {
                let h = self.matrix[(r, c)];
                if h != 0.0 {
                    row += v[c] * h;
                }
            }
            e += (v[r].conj() * row).re;
        }
        Ok(T::lit(e))
    }

    /// Bound on the spectral radius from Gershgorin discs.
    pub fn gershgorin_bound(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn build_hamiltonian(model: &HeisenbergModel) -> Result<Hamiltonian> {
    if model.spins > MAX_SPINS {
        return Err(Error::TooManySpins(model.spins));
    }
    model.validate()?;
    let n = model.spins;
    let dim = 1usize << n;
    let bit = |s: usize| 1usize << (n - 1 - s);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim {
        for &(i, j, coupling) in &model.edges {
            let (mi, mj) = (bit(i), bit(j));
            let equal = (b & mi == 0) == (b & mj == 0);
            let flipped = b ^ mi ^ mj;
            // ZZ is diagonal; XX and YY both flip the two spins, with YY
            // contributing -1 when the spins agree and +1 when they differ.
            h[(b, b)] -= coupling * if equal { 1.0 } else { -1.0 };
            let xx_plus_yy = if equal { 0.0 } else { 2.0 };
            h[(flipped, b)] -= coupling * xx_plus_yy;
        }
        for (s, &field) in model.fields.iter().enumerate() {
            h[(b ^ bit(s), b)] -= field;
        }
    }
    Ok(Hamiltonian { spins: n, matrix: h })
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn exact_ground_energy(matrix: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(matrix.clone()).eigenvalues.min()
}

/// Random fragment model: `J1`, `J2` and every `h_i` uniform in `[0, 1]`.
pub fn sample_lattice_model_on(fragment: &LatticeFragment, seed: u64) -> HeisenbergModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j1: f64 = rng.random();
    let j2: f64 = rng.random();
    let fields = (0..fragment.spins).map(|_| rng.random()).collect();
    let edges = fragment
        .intra
        .iter()
        .map(|&(i, j)| (i, j, j1))
        .chain(fragment.inter.iter().map(|&(i, j)| (i, j, j2)))
        .collect();
    HeisenbergModel { spins: fragment.spins, edges, fields, j1: Some(j1), j2: Some(j2) }
}

pub fn sample_lattice_model(seed: u64) -> HeisenbergModel {
    sample_lattice_model_on(&LatticeFragment::default(), seed)
}

/// Energy of the renormalized dual-rail projection of `out`.
pub fn vqe_energy<T: Real>(out: &StateVector<T>, hamiltonian: &Hamiltonian, code: &DualRail) -> Result<T> {
    let projection = code.project(out)?;
    hamiltonian.expectation(&projection.amplitudes)
}

/// Run the circuit on `|0...0>` (every qubit in `|10>`) and return the energy.
pub fn vqe_cost<T: Real, C: Circuit<T> + ?Sized>(circuit: &C, hamiltonian: &Hamiltonian, code: &DualRail) -> Result<T> {
    let input = code.encode(&vec![false; code.qubits()])?;
    vqe_energy(&circuit.apply(&input)?, hamiltonian, code)
}
