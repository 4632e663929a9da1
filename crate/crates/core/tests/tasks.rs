use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use qonn::fock::DualRail;
use qonn::network::{apply_qonn, corrections_identity};
use qonn::tasks::{
    build_hamiltonian, discrimination_cost, discrimination_fidelity, exact_ground_energy, fidelity, fidelity_cost,
    haar_amplitudes, sample_lattice_model, target_ghz, target_haar_random, vqe_cost, vqe_energy, DiscriminationSet,
    HeisenbergModel, LatticeFragment,
};
use qonn::{Complex64, Error, Mesh, State};

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

fn pauli(k: char) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match k {
        'x' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => DMatrix::identity(2, 2),
    }
}

// Kronecker product of single-site operators, spin 0 leftmost.
fn string(n: usize, ops: &[(usize, char)]) -> DMatrix<Complex64> {
    (0..n).fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, s| {
        let k = ops.iter().find(|(site, _)| *site == s).map_or('i', |&(_, k)| k);
        acc.kronecker(&pauli(k))
    })
}

fn kron_hamiltonian(model: &HeisenbergModel) -> DMatrix<Complex64> {
    let n = model.spins;
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for &(i, j, coupling) in &model.edges {
        for k in ['x', 'y', 'z'] {
            h -= string(n, &[(i, k), (j, k)]) * c(coupling, 0.0);
        }
    }
    for (s, &f) in model.fields.iter().enumerate() {
        h -= string(n, &[(s, 'x')]) * c(f, 0.0);
    }
    h
}

// Lowest eigenvalue by power iteration on (shift - H).
fn power_ground(h: &DMatrix<f64>) -> f64 {
    let shift = h.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let a = DMatrix::identity(h.nrows(), h.ncols()) * shift - h;
    let mut v = nalgebra::DVector::from_fn(h.nrows(), |k, _| 1.0 + 0.01 * k as f64);
    let mut lambda = 0.0;
    for _ in 0..20000 {
        let w = &a * &v;
        let next = w.norm();
        v = w / next;
        if (next - lambda).abs() < 1e-14 * next {
            break;
        }
        lambda = next;
    }
    shift - lambda
}

fn model(spins: usize, edges: Vec<(usize, usize, f64)>, fields: Vec<f64>) -> HeisenbergModel {
    HeisenbergModel { spins, edges, fields, j1: None, j2: None }
}

#[test]
fn hamiltonian_matches_pauli_strings() {
    for seed in 0..15 {
        let m = sample_lattice_model(seed);
        let h = build_hamiltonian(&m).unwrap();
        let reference = kron_hamiltonian(&m);
        for r in 0..32 {
            for col in 0..32 {
                assert!(reference[(r, col)].im.abs() < 1e-15);
                assert!((reference[(r, col)].re - h.matrix()[(r, col)]).abs() < 1e-12);
            }
        }
        assert!((h.ground_energy() - power_ground(h.matrix())).abs() < 1e-8, "seed {seed}");
    }
}

#[test]
fn single_bond_spectrum() {
    let h = build_hamiltonian(&model(2, vec![(0, 1, 1.0)], vec![0.0, 0.0])).unwrap();
    let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(h.matrix().clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    for (e, x) in eig.iter().zip([-1.0, -1.0, -1.0, 3.0]) {
        assert!((e - x).abs() < 1e-12);
    }
    assert!((h.ground_energy() + 1.0).abs() < 1e-12);
}

#[test]
fn all_zero_state_energy_is_minus_total_coupling() {
    for seed in 0..5 {
        let m = sample_lattice_model(seed);
        let h = build_hamiltonian(&m).unwrap();
        let mut amps = vec![c(0.0, 0.0); 32];
        amps[0] = c(1.0, 0.0);
        let total: f64 = m.edges.iter().map(|e| e.2).sum();
        assert!((h.expectation(&amps).unwrap() + total).abs() < 1e-12);
    }
}

#[test]
fn disconnected_parts_add() {
    let a = model(2, vec![(0, 1, 0.7)], vec![0.3, 0.1]);
    let b = model(3, vec![(0, 1, 0.2), (1, 2, 0.9)], vec![0.5, 0.0, 0.4]);
    let joint = model(
        5,
        vec![(0, 1, 0.7), (2, 3, 0.2), (3, 4, 0.9)],
        vec![0.3, 0.1, 0.5, 0.0, 0.4],
    );
    let sum = build_hamiltonian(&a).unwrap().ground_energy() + build_hamiltonian(&b).unwrap().ground_energy();
    assert!((build_hamiltonian(&joint).unwrap().ground_energy() - sum).abs() < 1e-10);
}

#[test]
fn default_fragment_and_sampling() {
    let f = LatticeFragment::default();
    assert_eq!(f.spins, 5);
    assert_eq!(f.intra.len() + f.inter.len(), 7);
    let m = sample_lattice_model(3);
    assert_eq!(m, sample_lattice_model(3));
    assert_ne!(m, sample_lattice_model(4));
    let (j1, j2) = (m.j1.unwrap(), m.j2.unwrap());
    assert!((0.0..1.0).contains(&j1) && (0.0..1.0).contains(&j2));
    assert!(m.fields.iter().all(|h| (0.0..1.0).contains(h)));
    assert_eq!(m.edges.iter().filter(|e| e.2 == j1).count(), 3);
}

#[test]
fn model_files_validate() {
    let m = sample_lattice_model(1);
    assert_eq!(HeisenbergModel::from_json(&m.to_json().unwrap()).unwrap(), m);
    let bad = r#"{"spins": 2, "edges": [[0, 2, 1.0]], "fields": [0.0, 0.0]}"#;
    assert!(matches!(HeisenbergModel::from_json(bad), Err(Error::Config(_))));
    let looped = r#"{"spins": 2, "edges": [[1, 1, 1.0]], "fields": [0.0, 0.0]}"#;
    assert!(HeisenbergModel::from_json(looped).is_err());
    let big = model(11, vec![], vec![0.0; 11]);
    assert!(matches!(build_hamiltonian(&big), Err(Error::TooManySpins(11))));
}

#[test]
fn exact_energy_of_a_diagonal_matrix() {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, -0.5, 1.0]));
    assert_eq!(exact_ground_energy(&d), -0.5);
}

#[test]
fn identity_circuit_vqe_energy() {
    let m = sample_lattice_model(7);
    let h = build_hamiltonian(&m).unwrap();
    let code = DualRail::new(5).unwrap();
    let identity = |s: &State| Ok(s.clone());
    let e = vqe_cost(&identity, &h, &code).unwrap();
    assert!((e + m.edges.iter().map(|e| e.2).sum::<f64>()).abs() < 1e-12);
    // the exact ground state embedded in the code reaches the exact energy
    let (e0, v) = h.ground_state();
    let state = code.embed(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()).unwrap();
    assert!((vqe_energy(&state, &h, &code).unwrap() - e0).abs() < 1e-10);
}

#[test]
fn ghz_targets() {
    let t: State = target_ghz(3, FRAC_PI_4).unwrap();
    assert!((t.amplitude(&[1, 0, 1, 0, 1, 0]).unwrap() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    assert!((t.amplitude(&[0, 1, 0, 1, 0, 1]).unwrap() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    let sep: State = target_ghz(2, 0.0).unwrap();
    assert_eq!(sep.amplitude(&[1, 0, 1, 0]).unwrap(), c(1.0, 0.0));
    assert!(target_ghz::<f64>(3, 1.0).is_err());
    assert!(target_ghz::<f64>(3, -0.1).is_err());
    assert_eq!(fidelity(&t, &t).unwrap(), 1.0);
    assert!((fidelity_cost(&t, &sep_like(3)).unwrap() - 0.5).abs() < 1e-15);
}

fn sep_like(n: usize) -> State {
    target_ghz(n, 0.0).unwrap()
}

#[test]
fn haar_targets_average_to_uniform_weight() {
    let n = 3;
    let seeds = 4000;
    let mut mean = vec![0.0; 1 << n];
    for seed in 0..seeds {
        let amps = haar_amplitudes::<f64>(n, seed);
        assert!((amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        for (m, a) in mean.iter_mut().zip(&amps) {
            *m += a.norm_sqr() / seeds as f64;
        }
    }
    for m in mean {
        assert!((m - 0.125).abs() < 0.01, "{m}");
    }
    let a: State = target_haar_random(3, 9).unwrap();
    let b: State = target_haar_random(3, 9).unwrap();
    assert_eq!(a.amplitudes(), b.amplitudes());
}

#[test]
fn discriminator_oracles() {
    for size in [4, 6] {
        let set = DiscriminationSet::<f64>::new(size).unwrap();
        assert_eq!(set.len(), size);
        // partial isometry sending every input to its target
        let pairs = set.pairs().to_vec();
        let perfect = move |s: &State| {
            let mut out = State::zeros(s.basis().clone());
            for p in &pairs {
                let w = p.input.overlap(s)?;
                for (o, t) in out.amplitudes_mut().iter_mut().zip(p.target.amplitudes()) {
                    *o += w * t;
                }
            }
            Ok(out)
        };
        assert!((discrimination_fidelity(&perfect, &set).unwrap() - 1.0).abs() < 1e-15);
        assert!(discrimination_cost(&perfect, &set).unwrap().abs() < 1e-15);
    }
    let labels: Vec<_> = DiscriminationSet::<f64>::new(6).unwrap().pairs().iter().map(|p| p.label).collect();
    assert_eq!(labels, ["phi+", "phi-", "psi+", "psi-", "theta+", "theta-"]);
}

#[test]
fn cz_block_alone_does_not_discriminate() {
    let set = DiscriminationSet::<f64>::new(4).unwrap();
    let mesh = Mesh::new(4, 1, 0.0).unwrap();
    let cost = |theta: &[f64]| {
        let circuit = |s: &State| apply_qonn(s, &mesh, &[PI, PI], theta);
        discrimination_cost(&circuit, &set).unwrap()
    };
    assert!(cost(&corrections_identity(2)) > 0.1);
}

proptest! {
    #[test]
    fn variational_bound(seed in 0u64..50, raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32)) {
        let h = build_hamiltonian(&sample_lattice_model(seed)).unwrap();
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps: Vec<_> = raw.iter().map(|&(a, b)| c(a / norm, b / norm)).collect();
        prop_assert!(h.expectation(&amps).unwrap() >= h.ground_energy() - 1e-12);
        prop_assert!(h.expectation(&amps).unwrap() <= h.gershgorin_bound() + 1e-12);
    }
}
