//! Property tests for the algebraic invariants.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabchan::channel::normal_form;
use stabchan::clifford::{CliffordUnitary, Gate};
use stabchan::gf2::BitVec;
use stabchan::pauli::PauliOperator;
use stabchan::random::{random_nonadaptive_circuit, random_state};
use stabchan::StabilizerGroupState;

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (
        prop::collection::vec(any::<bool>(), n),
        prop::collection::vec(any::<bool>(), n),
        0u8..4,
    )
        .prop_map(move |(x, z, phase)| {
            PauliOperator::from_bits(BitVec::from_bools(&x), BitVec::from_bools(&z), phase)
        })
}

fn arb_hermitian_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (arb_pauli(n), any::<bool>()).prop_map(|(p, neg)| {
        let p = p.unsigned();
        if neg {
            p.negated()
        } else {
            p
        }
    })
}

fn arb_gates(n: usize, len: usize) -> impl Strategy<Value = Vec<Gate>> {
    prop::collection::vec(
        (0usize..7, 0..n, 0..n.max(2) - 1).prop_map(move |(kind, q, other)| {
            let t = if other >= q { other + 1 } else { other };
            let t = t % n.max(1);
            match kind {
                0 => Gate::H(q),
                1 => Gate::S(q),
                2 => Gate::X(q),
                3 => Gate::Y(q),
                4 => Gate::Z(q),
                5 if t != q => Gate::Cz(q, t),
                _ if t != q => Gate::Cnot(q, t),
                _ => Gate::H(q),
            }
        }),
        0..len,
    )
}

proptest! {
    #[test]
    fn multiplication_is_associative(
        p in arb_pauli(4),
        q in arb_pauli(4),
        r in arb_pauli(4),
    ) {
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn parse_format_round_trip(p in arb_pauli(5)) {
        let text = p.to_string();
        let back: PauliOperator = text.parse().unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn commutation_is_symmetric_and_consistent(
        p in arb_hermitian_pauli(3),
        q in arb_hermitian_pauli(3),
    ) {
        prop_assert_eq!(p.commutes(&q).unwrap(), q.commutes(&p).unwrap());
        // pq = ±qp with the sign given by the symplectic form
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        if p.commutes(&q).unwrap() {
            prop_assert_eq!(pq, qp);
        } else {
            prop_assert_eq!(pq, qp.negated());
        }
    }

    #[test]
    fn synthesis_round_trips(gates in arb_gates(4, 24)) {
        let u = CliffordUnitary::from_gates(4, &gates).unwrap();
        let rebuilt = CliffordUnitary::from_gates(4, &u.synthesize()).unwrap();
        prop_assert_eq!(rebuilt, u);
    }

    #[test]
    fn conjugation_distributes(
        gates in arb_gates(3, 16),
        p in arb_hermitian_pauli(3),
        q in arb_hermitian_pauli(3),
    ) {
        let u = CliffordUnitary::from_gates(3, &gates).unwrap();
        let lhs = u.conjugate_pauli(&p.multiply(&q).unwrap()).unwrap();
        let rhs = u.conjugate_pauli(&p).unwrap()
            .multiply(&u.conjugate_pauli(&q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_composes_to_identity(gates in arb_gates(3, 20)) {
        let u = CliffordUnitary::from_gates(3, &gates).unwrap();
        prop_assert!(u.compose(&u.inverse()).unwrap().is_identity());
        // double transpose is the identity operation
        prop_assert_eq!(u.transpose().transpose(), u);
    }
}

#[test]
fn canonicalize_is_idempotent_and_row_op_invariant() {
    // 1000 random row-operation trials across sizes up to 5 qubits
    let mut rng = StdRng::seed_from_u64(101);
    for trial in 0..1000 {
        let n = rng.random_range(1..=5);
        let s = random_state(n, &mut rng);
        let canon = s.canonicalize();
        assert_eq!(
            canon.canonicalize().generators(),
            canon.generators(),
            "idempotence, trial {trial}"
        );
        let mut gens = s.generators().to_vec();
        if gens.is_empty() {
            continue;
        }
        for _ in 0..6 {
            let i = rng.random_range(0..gens.len());
            let j = rng.random_range(0..gens.len());
            if i == j {
                gens.swap(0, i);
            } else {
                gens[i] = gens[i].multiply(&gens[j]).unwrap();
            }
        }
        let t = StabilizerGroupState::new(n, gens).unwrap();
        assert_eq!(
            t.canonicalize().generators(),
            canon.generators(),
            "row-op invariance, trial {trial}"
        );
    }
}

#[test]
fn choi_marginal_always_chaotic() {
    // trace preservation, enforced on every constructed Choi tableau
    let mut rng = StdRng::seed_from_u64(103);
    for _ in 0..100 {
        let n_in = rng.random_range(0..=3);
        let ch = random_nonadaptive_circuit(n_in, 7, &mut rng)
            .compile()
            .unwrap()
            .channel;
        let choi = ch.choi();
        let a_wires: Vec<usize> = (0..ch.n_in()).collect();
        let marginal = choi.state().partial_trace(&a_wires).unwrap();
        assert_eq!(marginal.rank(), 0);
    }
}

#[test]
fn capacity_ordering_holds() {
    let mut rng = StdRng::seed_from_u64(107);
    for _ in 0..100 {
        let n_in = rng.random_range(0..=3);
        let ch = random_nonadaptive_circuit(n_in, 7, &mut rng)
            .compile()
            .unwrap()
            .channel;
        let caps = normal_form(&ch).capacities();
        assert!(caps.quantum <= caps.classical);
        assert!(caps.classical <= caps.entanglement_assisted);
        assert!(caps.entanglement_assisted <= 2 * caps.classical);
    }
}

#[test]
fn normal_form_counts_are_additive_under_tensor() {
    let mut rng = StdRng::seed_from_u64(109);
    for _ in 0..30 {
        let f = random_nonadaptive_circuit(rng.random_range(0..=2), 4, &mut rng)
            .compile()
            .unwrap()
            .channel;
        let g = random_nonadaptive_circuit(rng.random_range(0..=2), 4, &mut rng)
            .compile()
            .unwrap()
            .channel;
        let nf = normal_form(&f.tensor(&g));
        let (fa, fb, fc, fd, fe) = normal_form(&f).counts();
        let (ga, gb, gc, gd, ge) = normal_form(&g).counts();
        assert_eq!(
            nf.counts(),
            (fa + ga, fb + gb, fc + gc, fd + gd, fe + ge)
        );
    }
}

#[test]
fn tensor_then_trace_recovers_factors() {
    let mut rng = StdRng::seed_from_u64(113);
    for _ in 0..50 {
        let a = random_state(rng.random_range(1..=3), &mut rng);
        let b = random_state(rng.random_range(1..=3), &mut rng);
        let joint = a.tensor(&b);
        let left: Vec<usize> = (0..a.num_qubits()).collect();
        let right: Vec<usize> = (a.num_qubits()..joint.num_qubits()).collect();
        assert!(joint.partial_trace(&left).unwrap().equiv(&a));
        assert!(joint.partial_trace(&right).unwrap().equiv(&b));
    }
}

#[test]
fn wide_registers_cross_word_boundaries() {
    // 96 and 130 qubits span multiple packed words; everything here is
    // symbolic, so it must stay fast and exact.
    let mut rng = StdRng::seed_from_u64(131);
    for n in [96usize, 130] {
        let u = CliffordUnitary::random(n, &mut rng);
        assert!(u.compose(&u.inverse()).unwrap().is_identity());
        let rebuilt = CliffordUnitary::from_gates(n, &u.synthesize()).unwrap();
        assert_eq!(rebuilt, u);

        let s = random_state(n, &mut rng);
        let canon = s.canonicalize();
        assert_eq!(canon.canonicalize().generators(), canon.generators());
        let keep: Vec<usize> = (0..n / 2).collect();
        let reduced = s.partial_trace(&keep).unwrap();
        assert_eq!(reduced.num_qubits(), n / 2);
    }
}

#[test]
fn circuit_text_round_trips() {
    let mut rng = StdRng::seed_from_u64(127);
    for _ in 0..100 {
        let c = random_nonadaptive_circuit(rng.random_range(0..=3), 8, &mut rng);
        let text = c.to_text();
        let back = stabchan::Circuit::parse_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
    }
}
