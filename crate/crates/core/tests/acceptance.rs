//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test -p stabchan --test acceptance -- --nocapture` to see
//! the per-criterion report.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabchan::channel::{capacities, decompose_bipartite, normal_form};
use stabchan::circuit::{Circuit, Instruction};
use stabchan::oracle::{
    check_stabilizer_preserving_dense, classify_observable_dense, clifford_orbit_states,
    dense_max_entangled, dense_of_clifford, dense_of_pauli, dense_of_state,
    enumerate_mixed_stabilizer_states, enumerate_pure_stabilizer_states,
    is_mixed_stabilizer_dense, simulate_density, C64, DenseChannel, DenseMatrix, StabilizerVerdict,
    ObservableClass, TOL,
};
use stabchan::pauli::{pauli, PauliLetter};
use stabchan::random::{random_nonadaptive_circuit, random_state_of_rank};
use stabchan::{ChannelClass, StabilizerGroupState, StinespringForm};
use std::time::Instant;

fn compile(text: &str) -> StinespringForm {
    Circuit::parse_text(text).unwrap().compile().unwrap().channel
}

fn tableau(ch: &StinespringForm) -> Vec<String> {
    ch.choi()
        .state()
        .generators()
        .iter()
        .map(|g| g.to_string())
        .collect()
}

fn pass(number: u32, label: &str, detail: String) {
    println!("[acceptance] criterion {number:02} ({label}): PASS {detail}");
}

/// The shared random-circuit corpus of criteria 2 and 3.
fn corpus_500() -> Vec<Circuit> {
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let mut out = Vec::new();
    while out.len() < 500 {
        let n_in = rng.random_range(0..=3);
        let c = random_nonadaptive_circuit(n_in, 8, &mut rng);
        let ch = c.compile().unwrap().channel;
        if ch.n_out() <= 3 {
            out.push(c);
        }
    }
    out
}

#[test]
fn criterion_01_elementary_choi_table() {
    let start = Instant::now();
    let prep_zero = compile("qubits 0\nprep0\n");
    assert_eq!(tableau(&prep_zero), vec!["+Z"]);
    let prep_chaotic = compile("qubits 0\nprepx\n");
    assert_eq!(tableau(&prep_chaotic), Vec::<String>::new());
    assert_eq!(prep_chaotic.choi().state().num_qubits(), 1);
    let erase = compile("qubits 1\ndiscard 0\n");
    assert_eq!(tableau(&erase), Vec::<String>::new());
    assert_eq!(erase.choi().state().num_qubits(), 1);
    let identity = compile("qubits 1\n");
    assert_eq!(tableau(&identity), vec!["+XX", "+ZZ"]);
    let dephase = compile("qubits 1\ndephase 0\n");
    assert_eq!(tableau(&dephase), vec!["+ZZ"]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, "elementary-choi-table", format!("(5 channels, {elapsed:?})"));
}

#[test]
fn criterion_02_normal_form_reconstruction() {
    let start = Instant::now();
    let corpus = corpus_500();
    assert_eq!(corpus.len(), 500);
    for circuit in &corpus {
        let ch = circuit.compile().unwrap().channel;
        let nf = normal_form(&ch);
        let (a, b, c, d, e) = nf.counts();
        assert_eq!(a + b + d + e, ch.n_out(), "{circuit:?}");
        assert_eq!(c + d + e, ch.n_in(), "{circuit:?}");
        let rebuilt = nf.reconstruct();
        assert_eq!(
            rebuilt.choi().state().generators(),
            ch.choi().state().generators(),
            "choi tableau mismatch for {circuit:?}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(2, "normal-form-reconstruction", format!("(500 circuits, {elapsed:?})"));
}

#[test]
fn criterion_03_dense_oracle_agreement() {
    let corpus = corpus_500();
    let mut checked = 0usize;
    for circuit in &corpus {
        let ch = circuit.compile().unwrap().channel;
        if ch.total_qubits() > 8 {
            continue;
        }
        let rebuilt = normal_form(&ch).reconstruct();
        let dense_original = DenseChannel::from_stinespring(&ch).unwrap().choi();
        let dense_rebuilt = DenseChannel::from_stinespring(&rebuilt).unwrap().choi();
        let dist = dense_original.frobenius_distance(&dense_rebuilt);
        assert!(dist <= TOL, "distance {dist:.2e} for {circuit:?}");
        checked += 1;
    }
    assert!(checked >= 400, "corpus too small after the dilation cut: {checked}");
    pass(3, "dense-oracle-agreement", format!("({checked} channels <= 1e-9)"));
}

#[test]
fn criterion_04_capacity_formulas() {
    let id = StinespringForm::identity(1);
    let caps = capacities(&normal_form(&id));
    assert_eq!(
        (caps.classical, caps.entanglement_assisted, caps.quantum),
        (1, 2, 1)
    );
    let d = StinespringForm::dephase();
    let caps = capacities(&normal_form(&d));
    assert_eq!(
        (caps.classical, caps.entanglement_assisted, caps.quantum),
        (1, 1, 0)
    );
    let both = id.tensor(&d);
    let caps = capacities(&normal_form(&both));
    assert_eq!(
        (caps.classical, caps.entanglement_assisted, caps.quantum),
        (2, 3, 1)
    );
    // additivity of the underlying counts under tensor
    let nf_id = normal_form(&id);
    let nf_d = normal_form(&d);
    let nf_both = normal_form(&both);
    assert_eq!(nf_both.d, nf_id.d + nf_d.d);
    assert_eq!(nf_both.e, nf_id.e + nf_d.e);
    pass(4, "capacity-formulas", "(Id, D, Id (x) D exact)".into());
}

#[test]
fn criterion_05_bipartite_decomposition_dense() {
    let mut rng = StdRng::seed_from_u64(0x7E0);
    for trial in 0..200 {
        let n_a = rng.random_range(1..=3);
        let n_b = rng.random_range(1..=3);
        let n = n_a + n_b;
        let k = rng.random_range(0..=n);
        let s = random_state_of_rank(n, k, &mut rng);
        let dec = decompose_bipartite(&s, n_a).unwrap();
        let u = dense_of_clifford(&dec.local_unitary());
        let lhs = u.mul(&dense_of_state(&s).unwrap()).mul(&u.dagger());
        let rhs = dense_of_state(&dec.factor_state()).unwrap();
        let dist = lhs.frobenius_distance(&rhs);
        assert!(dist <= TOL, "trial {trial}: {dist:.2e}");
    }
    pass(5, "bipartite-decomposition-dense", "(200 states <= 1e-9)".into());
}

#[test]
fn criterion_06_stabilizerness_suites() {
    // Every symbolic stabilizer state at n <= 3 passes the dense test.
    let mut total = 0usize;
    for n in 0..=3 {
        for s in enumerate_mixed_stabilizer_states(n).unwrap() {
            let rho = dense_of_state(&s).unwrap();
            match is_mixed_stabilizer_dense(&rho).unwrap() {
                StabilizerVerdict::Stabilizer(back) => assert!(back.equiv(&s)),
                other => panic!("{s:?} rejected: {other:?}"),
            }
            total += 1;
        }
    }

    // T|+> fails with witness X at 1/sqrt(2).
    let f = std::f64::consts::FRAC_1_SQRT_2;
    let mut t_plus = DenseMatrix::zeros(2, 2);
    t_plus.set(0, 0, C64::new(0.5, 0.0));
    t_plus.set(1, 1, C64::new(0.5, 0.0));
    t_plus.set(0, 1, C64::new(0.5 * f, -0.5 * f));
    t_plus.set(1, 0, C64::new(0.5 * f, 0.5 * f));
    match is_mixed_stabilizer_dense(&t_plus).unwrap() {
        StabilizerVerdict::OffLattice {
            witness,
            expectation,
        } => {
            assert_eq!(witness, pauli("X"));
            assert!((expectation - f).abs() < 1e-6);
        }
        other => panic!("T|+> accepted: {other:?}"),
    }

    // The even mixture of |0> and |+> fails with witness X at 1/2.
    let mix = dense_of_state(&StabilizerGroupState::zero(1))
        .unwrap()
        .add(&dense_of_state(&StabilizerGroupState::plus()).unwrap())
        .scale(C64::new(0.5, 0.0));
    match is_mixed_stabilizer_dense(&mix).unwrap() {
        StabilizerVerdict::OffLattice {
            witness,
            expectation,
        } => {
            assert_eq!(witness, pauli("X"));
            assert!((expectation - 0.5).abs() < 1e-6);
        }
        other => panic!("mixture accepted: {other:?}"),
    }

    // All signed Pauli observables at n <= 2 classify as themselves.
    let mut observables = 0usize;
    for n in 1..=2usize {
        for idx in 1..(1usize << (2 * n)) {
            let mut p = stabchan::PauliOperator::identity(n);
            let mut rest = idx;
            for q in 0..n {
                let letter = match rest % 4 {
                    0 => PauliLetter::I,
                    1 => PauliLetter::X,
                    2 => PauliLetter::Y,
                    _ => PauliLetter::Z,
                };
                rest /= 4;
                if letter != PauliLetter::I {
                    p = p
                        .multiply(&stabchan::PauliOperator::single(n, q, letter))
                        .unwrap();
                }
            }
            for signed in [p.clone(), p.negated()] {
                match classify_observable_dense(&dense_of_pauli(&signed)).unwrap() {
                    ObservableClass::Pauli(found) => assert_eq!(found, signed),
                    other => panic!("{signed} classified as {other:?}"),
                }
                observables += 1;
            }
        }
    }

    // (X + Z)/sqrt(2) is Other with witness |0> at 1/sqrt(2).
    let q = dense_of_pauli(&pauli("X"))
        .add(&dense_of_pauli(&pauli("Z")))
        .scale(C64::new(f, 0.0));
    match classify_observable_dense(&q).unwrap() {
        ObservableClass::Other {
            witness,
            expectation,
        } => {
            assert!(witness.equiv(&StabilizerGroupState::zero(1)));
            assert!((expectation - f).abs() < 1e-6);
        }
        other => panic!("(X+Z)/sqrt2 classified as {other:?}"),
    }
    pass(
        6,
        "stabilizerness-suites",
        format!("({total} states pass, magic states fail, {observables} observables classify)"),
    );
}

#[test]
fn criterion_07_preservation_agreement() {
    let mut rng = StdRng::seed_from_u64(0x8EED);
    let mut checked = 0usize;
    while checked < 200 {
        let n_in = rng.random_range(0..=2);
        let circuit = random_nonadaptive_circuit(n_in, 5, &mut rng);
        let ch = circuit.compile().unwrap().channel;
        if ch.n_out() > 3 || ch.n_in() + ch.n_out() > 5 || ch.total_qubits() > 8 {
            continue;
        }
        let dense = DenseChannel::from_stinespring(&ch).unwrap();
        let report = check_stabilizer_preserving_dense(&dense).unwrap();
        assert!(
            report.stabilizer_preserving && report.choi_stabilizer,
            "compiled circuit failed: {circuit:?}"
        );
        assert!(report.agree());
        checked += 1;
    }

    // A T-gate unitary fails both checks, on its own and inside a wider wire.
    let mut t = DenseMatrix::identity(2);
    t.set(1, 1, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4));
    let t_channel = DenseChannel::unitary(1, t.clone());
    let report = check_stabilizer_preserving_dense(&t_channel).unwrap();
    assert!(!report.stabilizer_preserving && !report.choi_stabilizer && report.agree());
    let wide = DenseChannel::unitary(2, DenseMatrix::identity(2).kron(&t));
    let report = check_stabilizer_preserving_dense(&wide).unwrap();
    assert!(!report.stabilizer_preserving && !report.choi_stabilizer && report.agree());

    // Injecting the T into random compiled channels never breaks agreement.
    let mut injected = 0usize;
    while injected < 50 {
        let n_in = rng.random_range(1..=2);
        let circuit = random_nonadaptive_circuit(n_in, 4, &mut rng);
        let ch = circuit.compile().unwrap().channel;
        if ch.n_out() > 3 || ch.n_in() + ch.n_out() > 5 || ch.total_qubits() > 8 {
            continue;
        }
        let mut t_wide = DenseMatrix::identity(1 << n_in);
        // put the T on the last input wire
        for j in 0..(1usize << n_in) {
            if j & 1 == 1 {
                let v = t_wide.get(j, j);
                t_wide.set(j, j, v * C64::from_polar(1.0, std::f64::consts::FRAC_PI_4));
            }
        }
        let composed = DenseChannel::unitary(n_in, t_wide)
            .then(&DenseChannel::from_stinespring(&ch).unwrap());
        let report = check_stabilizer_preserving_dense(&composed).unwrap();
        assert!(report.agree(), "disagreement on {circuit:?}");
        injected += 1;
    }
    pass(
        7,
        "preservation-agreement",
        "(200 clean + 2 designed + 50 injected, 100% agreement)".into(),
    );
}

#[test]
fn criterion_08_deferred_measurement_rewrite() {
    // Equation-style pattern: measure, classically controlled X, measure.
    let pattern = Circuit::parse_text("qubits 2\nmeasure 0 -> m\npctrl m x 1\nmeasure 1 -> k\n")
        .unwrap();
    check_rewrite_dense(&pattern);

    // Pauli-control corpus over the restricted class.
    let mut rng = StdRng::seed_from_u64(0xADA);
    let mut checked = 0usize;
    while checked < 40 {
        let Some(circuit) = random_restricted_adaptive(&mut rng) else {
            continue;
        };
        check_rewrite_dense(&circuit);
        checked += 1;
    }

    // The ancilla dephasing circuit is channel-equivalent to the primitive.
    let ancilla = compile("qubits 1\nprep0\ncnot 0 1\ndiscard 1\n");
    let primitive = compile("qubits 1\ndephase 0\n");
    assert!(ancilla.equivalent(&primitive).unwrap());
    assert!(primitive.equivalent(&StinespringForm::dephase()).unwrap());
    pass(
        8,
        "deferred-measurement-rewrite",
        "(pattern + 40 corpus circuits <= 1e-9, dephasing identity holds)".into(),
    );
}

fn check_rewrite_dense(circuit: &Circuit) {
    let rewritten = circuit.rewrite_adaptive().unwrap();
    assert!(rewritten.is_non_adaptive());
    let n_in = circuit.n_in();
    let original = simulate_density(circuit, &dense_max_entangled(n_in), n_in).unwrap();
    let compiled = rewritten.compile().unwrap().channel;
    let dense = DenseChannel::from_stinespring(&compiled).unwrap().choi();
    let dist = original.frobenius_distance(&dense);
    assert!(dist <= TOL, "rewrite changed the channel by {dist:.2e}: {circuit:?}");
}

/// Random circuit over the restricted adaptive class: measurements, random
/// bits, affine bit operations and Pauli controls.
fn random_restricted_adaptive(rng: &mut StdRng) -> Option<Circuit> {
    let n_in = rng.random_range(1..=2);
    let mut instructions: Vec<Instruction> = Vec::new();
    let mut live: Vec<usize> = (0..n_in).collect();
    let mut next = n_in;
    let mut bits: Vec<String> = Vec::new();
    let mut classical_ops = 0usize;
    for step in 0..rng.random_range(2..=6) {
        match rng.random_range(0..8) {
            0 => {
                instructions.push(Instruction::PrepZero);
                live.push(next);
                next += 1;
            }
            1 if !live.is_empty() => {
                let q = live[rng.random_range(0..live.len())];
                instructions.push(Instruction::Gate(stabchan::Gate::H(q)));
            }
            2 if live.len() >= 2 => {
                let a = live[rng.random_range(0..live.len())];
                let b = live.iter().copied().find(|&w| w != a).unwrap();
                instructions.push(Instruction::Gate(stabchan::Gate::Cnot(a, b)));
            }
            3 if !live.is_empty() && classical_ops < 2 => {
                let i = rng.random_range(0..live.len());
                let q = live.remove(i);
                let name = format!("m{step}");
                instructions.push(Instruction::Measure(q, name.clone()));
                bits.push(name);
                classical_ops += 1;
            }
            4 if classical_ops < 2 => {
                let name = format!("r{step}");
                instructions.push(Instruction::RandBit(name.clone()));
                bits.push(name);
                classical_ops += 1;
            }
            5 if !bits.is_empty() => {
                let b = bits[rng.random_range(0..bits.len())].clone();
                instructions.push(Instruction::ClassicalNot(b));
            }
            6 if bits.len() >= 2 => {
                let s = bits[rng.random_range(0..bits.len())].clone();
                let d = bits.iter().find(|x| **x != s).unwrap().clone();
                instructions.push(Instruction::ClassicalCnot(s, d));
            }
            7 if !bits.is_empty() && !live.is_empty() => {
                let b = bits[rng.random_range(0..bits.len())].clone();
                let q = live[rng.random_range(0..live.len())];
                let letter = match rng.random_range(0..3) {
                    0 => PauliLetter::X,
                    1 => PauliLetter::Y,
                    _ => PauliLetter::Z,
                };
                instructions.push(Instruction::PauliCtrl(b, letter, q));
            }
            _ => {}
        }
    }
    if !instructions.iter().any(Instruction::is_adaptive) {
        return None;
    }
    Circuit::new(n_in, instructions).ok()
}

#[test]
fn criterion_09_classification() {
    let h = compile("qubits 1\nh 0\n");
    assert_eq!(h.classify(), ChannelClass::UnitaryClifford);
    let append = compile("qubits 1\nprep0\n");
    assert_eq!(append.classify(), ChannelClass::CliffordIsometry);
    let reset = compile("qubits 1\ndiscard 0\nprep0\nh 1\n");
    assert_eq!(reset.classify(), ChannelClass::StateReset);
    let dephase = compile("qubits 1\ndephase 0\n");
    assert_eq!(dephase.classify(), ChannelClass::GeneralClifford);
    pass(9, "classification", "(4 classes exact)".into());
}

#[test]
fn criterion_10_enumeration() {
    let start = Instant::now();
    let direct_1 = enumerate_pure_stabilizer_states(1).unwrap();
    let direct_2 = enumerate_pure_stabilizer_states(2).unwrap();
    assert_eq!(direct_1.len(), 6);
    assert_eq!(direct_2.len(), 60);
    let orbit_1 = clifford_orbit_states(1).unwrap();
    let orbit_2 = clifford_orbit_states(2).unwrap();
    assert_eq!(orbit_1.len(), 6);
    assert_eq!(orbit_2.len(), 60);
    // all states validate and are pairwise distinct in canonical form
    for states in [&direct_1, &direct_2] {
        let mut keys: Vec<String> = states
            .iter()
            .map(|s| {
                assert!(s.is_pure());
                StabilizerGroupState::new(s.num_qubits(), s.generators().to_vec())
                    .unwrap()
                    .canonicalize()
                    .to_text()
            })
            .collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), states.len());
    }
    // the two strategies produce the same state sets
    for (direct, orbit) in [(&direct_1, &orbit_1), (&direct_2, &orbit_2)] {
        let mut a: Vec<String> = direct.iter().map(|s| s.canonicalize().to_text()).collect();
        let mut b: Vec<String> = orbit.iter().map(|s| s.canonicalize().to_text()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(10, "enumeration", format!("(6 and 60 via two strategies, {elapsed:?})"));
}
