use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex;
use proptest::prelude::*;
use qonn::fock::{DualRail, FockBasis};
use qonn::network::{
    apply_core, apply_lo_qonn, apply_nmzi_closed, apply_qonn, corrections_identity, count_params, lo_depth,
    record_layer_amplitudes, record_lo_layer_amplitudes, Architecture, Circuit, LinOptQonn, LoQonn, NmziMesh,
    NmziParams, Qonn,
};
use qonn::optics::{apply_multimode, apply_ns, apply_phase, apply_two_mode, NsGate, TransferMatrix, TwoModeUnitary};
use qonn::{Complex64, Error, Mesh, Mesh32, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

fn random_state(basis: Arc<FockBasis>, rng: &mut impl Rng) -> State {
    let amps = (0..basis.dim()).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let mut s = State::from_amplitudes(basis, amps).unwrap();
    s.normalize();
    s
}

fn compositional_nmzi(s: &State, p: &NmziParams<f64>, (i, j): (usize, usize)) -> State {
    let dc = TwoModeUnitary::dc();
    let s = apply_two_mode(s, &dc, (i, j)).unwrap();
    let s = apply_ns(&s, &NsGate::new(p.chi1, i)).unwrap();
    let s = apply_phase(&s, i, p.phi_b).unwrap();
    let s = apply_ns(&s, &NsGate::new(p.chi2, j)).unwrap();
    apply_two_mode(&s, &dc, (i, j)).unwrap()
}

// Mode-vector 2x2 matrix of a qubit correction MZI acting on a single photon.
fn mzi_on_qubit(t1: f64, t2: f64, amps: [Complex64; 2]) -> [Complex64; 2] {
    TwoModeUnitary::mzi(t1, t2).apply(amps)
}

#[test]
fn nmzi_closed_form_on_every_pair_occupation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let p = NmziParams::new(rng.random_range(0.0..PI), rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
        for photons in 0..=5 {
            let b = Arc::new(FockBasis::new(3, photons).unwrap());
            for k in 0..b.dim() {
                let s = State::basis_state(b.clone(), b.state(k)).unwrap();
                for pair in [(0, 1), (1, 2)] {
                    let closed = apply_nmzi_closed(&s, &p, pair).unwrap();
                    assert!(closed.max_deviation(&compositional_nmzi(&s, &p, pair)).unwrap() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn nmzi_parameters_are_clamped() {
    let p = NmziParams::new(-0.5, 4.0, 1.0);
    assert_eq!((p.chi1, p.chi2, p.phi_b), (0.0, PI, 1.0));
}

#[test]
fn cz_on_dual_rail_pair() {
    let code = DualRail::new(2).unwrap();
    let p = NmziParams::new(PI, PI, 0.0);
    let expected = [1.0, 1.0, 1.0, -1.0];
    for (k, e) in expected.iter().enumerate() {
        let bits = [k >> 1 == 1, k & 1 == 1];
        let input: State = code.encode(&bits).unwrap();
        let out = apply_nmzi_closed(&input, &p, (1, 3)).unwrap();
        let occ = code.occupation(&bits).unwrap();
        assert!((out.amplitude(&occ).unwrap() - c(*e, 0.0)).norm() < 1e-10);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mesh_parameter_counts_follow_the_formula() {
    for m in (4..=10).step_by(2) {
        for d in 0..=12 {
            let mesh = Mesh::new(m, d, 0.0).unwrap();
            let blocks: usize = mesh.layers().iter().map(|l| l.pairs.len()).sum();
            assert_eq!(2 * blocks, mesh.nonlinear_params());
            assert_eq!(mesh.nonlinear_params(), count_params(m, d, Architecture::Nonlinear));
            assert_eq!(mesh.correction_params(), 2 * m);
            assert_eq!(mesh.with_corrections(false).trainable_params(), count_params(m, d, Architecture::Nonlinear));
        }
    }
}

#[test]
fn accounting_examples() {
    assert_eq!(count_params(8, 9, Architecture::Nonlinear), 62);
    assert_eq!(count_params(10, 7, Architecture::Nonlinear), 62);
    assert_eq!(count_params(4, 1, Architecture::Nonlinear), 2);
    assert_eq!(count_params(4, 1, Architecture::Linear), 24);
    assert_eq!(count_params(6, 4, Architecture::Linear), 150);
    assert_eq!(count_params(10, 1, Architecture::Linear), 180);
    assert_eq!(lo_depth(4, 1), 10);
    assert_eq!(lo_depth(6, 4), 35);
    assert_eq!(lo_depth(10, 1), 22);
}

#[test]
fn layer_layout_alternates() {
    let mesh = Mesh::new(6, 3, 0.0).unwrap();
    let layers: Vec<_> = mesh.layers().iter().map(|l| l.pairs.clone()).collect();
    assert_eq!(layers[0], vec![(1, 2), (3, 4)]);
    assert_eq!(layers[1], vec![(0, 1), (2, 3), (4, 5)]);
    assert_eq!(layers[2], vec![(1, 2), (3, 4)]);
    assert!(Mesh::new(5, 1, 0.0).is_err());
}

#[test]
fn zero_nonlinearity_core_is_a_linear_circuit() {
    // With chi = 0 every block reduces to DC . diag(e^{i phi}, 1) . DC.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (modes, depth) = (6, 4);
    let b = Arc::new(FockBasis::new(modes, 3).unwrap());
    let mesh = Mesh::new(modes, depth, PI).unwrap();
    let block = TwoModeUnitary::dc().mul(&TwoModeUnitary::phase(PI)).mul(&TwoModeUnitary::dc());
    let mut v = TransferMatrix::identity(modes);
    for layer in mesh.layers() {
        for &(i, j) in &layer.pairs {
            v = TransferMatrix::embed(modes, &block, i, j).matmul(&v);
        }
    }
    for _ in 0..3 {
        let s = random_state(b.clone(), &mut rng);
        let core = apply_core(&s, &mesh, &vec![0.0; mesh.nonlinear_params()]).unwrap();
        assert!(core.max_deviation(&apply_multimode(&s, &v).unwrap()).unwrap() < 1e-10);
    }
}

#[test]
fn identity_core_leaves_corrections_as_a_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for qubits in 2..=3 {
        let code = DualRail::new(qubits).unwrap();
        let mesh = Mesh::new(2 * qubits, 3, 0.0).unwrap();
        let chi = vec![0.0; mesh.nonlinear_params()];
        for _ in 0..5 {
            let theta: Vec<f64> = (0..4 * qubits).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let bits: Vec<bool> = (0..qubits).map(|_| rng.random()).collect();
            let out = apply_qonn(&code.encode(&bits).unwrap(), &mesh, &chi, &theta).unwrap();
            let p = code.project(&out).unwrap();
            assert!((p.weight - 1.0).abs() < 1e-12);
            let single: Vec<[Complex64; 2]> = (0..qubits)
                .map(|q| {
                    let start = if bits[q] { [c(0.0, 0.0), c(1.0, 0.0)] } else { [c(1.0, 0.0), c(0.0, 0.0)] };
                    let mid = mzi_on_qubit(theta[2 * q], theta[2 * q + 1], start);
                    let o = 2 * qubits + 2 * q;
                    mzi_on_qubit(theta[o], theta[o + 1], mid)
                })
                .collect();
            for (k, amp) in p.amplitudes.iter().enumerate() {
                let expected = (0..qubits).fold(c(1.0, 0.0), |acc, q| acc * single[q][(k >> (qubits - 1 - q)) & 1]);
                assert!((amp - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn single_cz_block_entangles_two_qubits() {
    let code = DualRail::new(2).unwrap();
    let mesh = Mesh::new(4, 1, 0.0).unwrap();
    let mut theta = corrections_identity::<f64>(2);
    theta[1] = FRAC_PI_2;
    theta[3] = FRAC_PI_2;
    let out = apply_qonn(&code.encode(&[false, false]).unwrap(), &mesh, &[PI, PI], &theta).unwrap();
    let p = code.project(&out).unwrap();
    assert!((p.weight - 1.0).abs() < 1e-12);
    let a = &p.amplitudes;
    let concurrence = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
    assert!((concurrence - 1.0).abs() < 1e-12);
    // without the nonlinearity the same circuit is a product
    let out = apply_qonn(&code.encode(&[false, false]).unwrap(), &mesh, &[0.0, 0.0], &theta).unwrap();
    let a = code.project(&out).unwrap().amplitudes;
    assert!((a[0] * a[3] - a[1] * a[2]).norm() < 1e-12);
}

#[test]
fn shape_errors() {
    let code = DualRail::new(2).unwrap();
    let s: State = code.encode(&[false, true]).unwrap();
    let mesh = Mesh::new(4, 2, 0.0).unwrap();
    assert!(matches!(apply_core(&s, &mesh, &[0.0; 3]), Err(Error::ParamCount { expected: 6, got: 3 })));
    assert!(apply_qonn(&s, &mesh, &[0.0; 6], &[0.0; 7]).is_err());
    let wrong = State::basis_state(Arc::new(FockBasis::new(6, 3).unwrap()), &[1, 0, 1, 0, 1, 0]).unwrap();
    assert!(apply_qonn(&wrong, &mesh, &[0.0; 6], &[0.0; 8]).is_err());
}

#[test]
fn mesh_description_round_trip() {
    let mesh = Mesh::new(8, 5, PI / 4.0).unwrap().with_corrections(false);
    let desc = mesh.describe();
    assert_eq!(desc.layout.len(), 5);
    assert!(!desc.corrections);
    let text = mesh.to_json().unwrap();
    let back: Mesh = NmziMesh::from_description(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, mesh);
}

#[test]
fn circuit_wrappers_match_free_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let code = DualRail::new(2).unwrap();
    let s: State = code.encode(&[true, false]).unwrap();
    let mesh = Mesh::new(4, 3, PI / 2.0).unwrap();
    let chi: Vec<f64> = (0..mesh.nonlinear_params()).map(|_| rng.random_range(0.0..PI)).collect();
    let theta: Vec<f64> = (0..8).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let q = Qonn { mesh: &mesh, chi: &chi, theta: &theta };
    assert_eq!(q.apply(&s).unwrap().amplitudes(), apply_qonn(&s, &mesh, &chi, &theta).unwrap().amplitudes());
    let net = LinOptQonn::new(4, 1).unwrap();
    let phases: Vec<f64> = (0..net.param_count()).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    let lo = LoQonn { net: &net, theta: &phases };
    assert_eq!(lo.apply(&s).unwrap().amplitudes(), apply_lo_qonn(&s, &net, &phases).unwrap().amplitudes());
}

#[test]
fn zero_phase_baseline_is_the_static_ns_layer() {
    // Zero-phase MZIs are identities, so only NS(pi) on every mode remains.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = Arc::new(FockBasis::new(4, 2).unwrap());
    let s = random_state(b.clone(), &mut rng);
    for depth in 0..=3 {
        let net = LinOptQonn::new(4, depth).unwrap();
        assert_eq!(net.param_count(), count_params(4, depth, Architecture::Linear));
        let out = apply_lo_qonn(&s, &net, &vec![0.0; net.param_count()]).unwrap();
        for k in 0..b.dim() {
            let pairs: usize = b.state(k).iter().map(|&t| (t as usize) * (t as usize).saturating_sub(1) / 2).sum();
            let sign = if (pairs * depth) % 2 == 1 { -1.0 } else { 1.0 };
            assert!((out.amplitudes()[k] - s.amplitudes()[k] * sign).norm() < 1e-12);
        }
    }
}

#[test]
fn baseline_interferometers_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let net = LinOptQonn::new(6, 2).unwrap();
    assert_eq!(net.interferometers(), 3);
    assert_eq!(net.phases_per_interferometer(), 30);
    let theta: Vec<f64> = (0..net.param_count()).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    for v in net.transfer_matrices(&theta).unwrap() {
        assert!(v.unitarity_deviation() < 1e-12);
    }
}

#[test]
fn layer_snapshots() {
    let code = DualRail::new(2).unwrap();
    let input: State = code.encode(&[true, false]).unwrap();
    let mesh = Mesh::new(4, 3, 0.0).unwrap();
    let chi = vec![1.0; mesh.nonlinear_params()];
    let snaps = record_layer_amplitudes(&input, &mesh, &chi, &corrections_identity(2)).unwrap();
    assert_eq!(snaps.len(), 3);
    for snap in &snaps {
        assert!((snap.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
    // photons meet at the first coupler column and bunch
    let b = code.basis();
    let bunched: f64 = (0..b.dim()).filter(|&k| b.state(k).iter().any(|&t| t > 1)).map(|k| snaps[0][k].powi(2)).sum();
    assert!(bunched > 0.1);
    let net = LinOptQonn::new(4, 2).unwrap();
    let lo = record_lo_layer_amplitudes(&input, &net, &vec![0.0; net.param_count()]).unwrap();
    assert_eq!(lo.len(), 2);
}

#[test]
fn single_precision_mesh() {
    let code = DualRail::new(2).unwrap();
    let input = code.encode::<f32>(&[false, true]).unwrap();
    let mesh = Mesh32::new(4, 2, 0.5).unwrap();
    let out = apply_qonn(&input, &mesh, &[0.3, 2.0, 1.0, 0.1, 2.5, 0.7], &[0.2f32; 8]).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_pipeline(chi1 in 0.0f64..PI, chi2 in 0.0f64..PI, phi in 0.0f64..(2.0 * PI), photons in 0usize..=5) {
        let p = NmziParams::new(chi1, chi2, phi);
        let b = Arc::new(FockBasis::new(2, photons).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64((chi1 * 1e6) as u64);
        let s = random_state(b, &mut rng);
        let closed = apply_nmzi_closed(&s, &p, (0, 1)).unwrap();
        prop_assert!(closed.max_deviation(&compositional_nmzi(&s, &p, (0, 1))).unwrap() < 1e-12);
    }

    #[test]
    fn qonn_preserves_norm(seed in any::<u64>(), qubits in 2usize..=3, depth in 0usize..=5, phi in 0.0f64..(2.0 * PI)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = Mesh::new(2 * qubits, depth, phi).unwrap();
        let b = Arc::new(FockBasis::new(2 * qubits, qubits).unwrap());
        let s = random_state(b, &mut rng);
        let chi: Vec<f64> = (0..mesh.nonlinear_params()).map(|_| rng.random_range(0.0..PI)).collect();
        let theta: Vec<f64> = (0..4 * qubits).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let out = apply_qonn(&s, &mesh, &chi, &theta).unwrap();
        prop_assert_eq!(out.basis().photons(), qubits);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
