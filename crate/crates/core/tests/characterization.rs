use holonomic_core::characterization::{
    gate_fidelity_from_decays, pauli_transfer, process_fidelity, rb_gate_fidelity, rb_run, simulate_qpt, Channel,
    RbConfig, RbTarget,
};
use holonomic_core::linalg::{c, identity, kron, ComplexMatrix, PauliString};
use holonomic_core::propagation::eigenframe_propagator;
use holonomic_core::synthesis::{evaluate, named_gate, synthesize, SynthesisProblem, TargetSpec};
use holonomic_core::tables::load_tables;

fn table_cnot() -> ComplexMatrix {
    let t = load_tables().unwrap();
    let seq = t.two.iter().find(|t| t.name == "CNOT").unwrap().sequence().unwrap();
    seq.segments
        .iter()
        .fold(identity(4), |u, s| eigenframe_propagator(s).unwrap() * u)
}

/// CNOT transfer matrix straight from its action on Pauli strings.
fn cnot_transfer_by_hand() -> Vec<Vec<f64>> {
    let cnot = named_gate("CNOT").unwrap();
    let paulis = PauliString::all(2);
    let mut out = vec![vec![0.0; 16]; 16];
    for (j, pj) in paulis.iter().enumerate() {
        let image = &cnot * pj.matrix() * cnot.adjoint();
        // the image is ± another Pauli string; find it by overlap
        for (i, pi) in paulis.iter().enumerate() {
            let mut tr = c(0.0, 0.0);
            let m = pi.matrix();
            for a in 0..4 {
                for b in 0..4 {
                    tr += m[(a, b)] * image[(b, a)];
                }
            }
            out[i][j] = tr.re / 4.0;
        }
    }
    out
}

#[test]
fn synthesized_cnot_transfer_matches_ideal() {
    let r = pauli_transfer(&Channel::Unitary(table_cnot())).unwrap();
    let ideal = cnot_transfer_by_hand();
    let worst = r
        .entries
        .iter()
        .flatten()
        .zip(ideal.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
    let ideal_r = pauli_transfer(&Channel::Unitary(named_gate("CNOT").unwrap())).unwrap();
    assert!(process_fidelity(&r, &ideal_r).unwrap() >= 0.99);
}

#[test]
fn qpt_of_synthesized_cnot() {
    let rep = simulate_qpt(&Channel::Unitary(table_cnot())).unwrap();
    assert_eq!(rep.settings, 240);
    let ideal = pauli_transfer(&Channel::Unitary(named_gate("CNOT").unwrap())).unwrap();
    assert!(process_fidelity(&rep.transfer, &ideal).unwrap() >= 0.99);
}

#[test]
fn product_channel_transfer_factorizes() {
    let h = named_gate("H").unwrap();
    let t = named_gate("T").unwrap();
    let joint = pauli_transfer(&Channel::Unitary(kron(&h, &t))).unwrap();
    let rh = pauli_transfer(&Channel::Unitary(h)).unwrap();
    let rt = pauli_transfer(&Channel::Unitary(t)).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            let expect = rh.entries[i / 4][j / 4] * rt.entries[i % 4][j % 4];
            assert!((joint.entries[i][j] - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn rb_depolarizing_oracle() {
    let mut last_p = 1.0;
    for eps in [0.005, 0.01, 0.02] {
        let cfg = RbConfig {
            clifford_eps: eps,
            seed: 4,
            ..Default::default()
        };
        let fit = rb_run(&cfg, None).unwrap().fit.unwrap();
        assert!(
            (fit.p - (1.0 - eps)).abs() <= 2.0 * fit.p_stderr.max(1e-12),
            "{eps}: {fit:?}"
        );
        assert!(fit.p < last_p);
        last_p = fit.p;
    }
}

#[test]
fn rb_recovers_target_error() {
    let eps = 0.01;
    let cfg = RbConfig {
        clifford_eps: 0.0,
        target_eps: eps,
        n_sequences: 10,
        ..Default::default()
    };
    let x = named_gate("X").unwrap();
    let target = RbTarget {
        implemented: x.clone(),
        ideal: x,
    };
    let reference = rb_run(&cfg, None).unwrap();
    let inter = rb_run(&cfg, Some(&target)).unwrap();
    let f = rb_gate_fidelity(&reference, &inter, 1).unwrap();
    assert!((f - (1.0 - eps / 2.0)).abs() < 1e-9, "{f}");
}

#[test]
fn rb_on_synthesized_gates() {
    let cfg = RbConfig::default();
    let reference = rb_run(&cfg, None).unwrap();
    for (k, name) in ["X", "H", "P", "T"].into_iter().enumerate() {
        let mut prob = SynthesisProblem::new(TargetSpec::Named(name.into()), 2, 10 + k as u64);
        prob.restarts = 64;
        let r = synthesize(&prob).unwrap();
        let ideal = named_gate(name).unwrap();
        let implemented = evaluate(&ideal, &r.sequence).unwrap().unitary;
        let target = RbTarget { implemented, ideal };
        let inter = rb_run(&cfg, Some(&target)).unwrap();
        let f = rb_gate_fidelity(&reference, &inter, 1).unwrap();
        assert!(f >= 0.999, "{name}: {f} {:?}", inter.fit);
    }
}

#[test]
fn gate_fidelity_formula() {
    assert_eq!(gate_fidelity_from_decays(0.9, 0.9, 2).unwrap(), 1.0);
    let f = gate_fidelity_from_decays(0.98, 0.99 * 0.98, 2).unwrap();
    assert!((f - 0.995).abs() < 1e-12);
    let f4 = gate_fidelity_from_decays(1.0, 0.96, 4).unwrap();
    assert!((f4 - 0.97).abs() < 1e-12);
}
