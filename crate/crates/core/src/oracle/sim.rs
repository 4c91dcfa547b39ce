//! Branch-based dense simulation of (possibly adaptive) circuits.
//!
//! Measurements split the state into explicitly tracked classical branches,
//! so this path shares no machinery with the tableau compiler and serves as
//! its ground truth. Output wires appear in allocation order; a measured bit
//! occupies the slot of the qubit it consumed, a `randbit` takes a fresh
//! slot, mirroring the wire layout the deferred-measurement rewrite produces.

use super::dense::DenseMatrix;
use super::{guard, C64, OracleError};
use crate::circuit::{Circuit, Instruction};
use crate::clifford::Gate;
use crate::pauli::PauliLetter;
use std::collections::HashMap;

struct Branch {
    /// Unnormalized density over `idle + live` wires.
    rho: DenseMatrix,
    bits: HashMap<String, bool>,
}

/// Project wire `pos` onto `|v>` and drop it.
fn take_bit(rho: &DenseMatrix, pos: usize, v: usize) -> DenseMatrix {
    let n = rho.num_qubits();
    let out_n = n - 1;
    let dim = 1usize << out_n;
    let insert = |idx: usize| -> usize {
        let high = idx >> (out_n - pos);
        let low = idx & ((1 << (out_n - pos)) - 1);
        (high << (n - pos)) | (v << (n - 1 - pos)) | low
    };
    let mut out = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, rho.get(insert(i), insert(j)));
        }
    }
    out
}

/// Simulate `circuit` on `input`, a density over `idle + n_in` qubits where
/// the circuit consumes the trailing `n_in` wires and the first `idle` wires
/// ride along untouched (for Choi-style amplified inputs).
pub fn simulate_density(
    circuit: &Circuit,
    input: &DenseMatrix,
    idle: usize,
) -> Result<DenseMatrix, OracleError> {
    let n_in = circuit.n_in();
    if input.num_qubits() != idle + n_in {
        return Err(OracleError::InvalidDensity(
            "input density does not match idle + n_in wires",
        ));
    }

    // Output slots in allocation-event order: a measured bit takes over the
    // slot of the qubit it consumed, a random bit opens a fresh slot. Gate
    // instructions keep addressing qubits by the circuit's own numbering.
    #[derive(Clone, PartialEq)]
    enum Slot {
        Qubit(usize),
        Bit(String),
        Gone,
    }
    let mut slots: Vec<Slot> = (0..n_in).map(Slot::Qubit).collect();
    // circuit qubit index -> slot position
    let mut slot_of_qubit: Vec<usize> = (0..n_in).collect();

    // live qubit wires by circuit index; matrix layout = idles ++ layout
    let mut layout: Vec<usize> = (0..n_in).collect();
    let mut branches = vec![Branch {
        rho: input.clone(),
        bits: HashMap::new(),
    }];

    let pos_of = |layout: &[usize], alloc: usize| -> usize {
        idle + layout
            .iter()
            .position(|&a| a == alloc)
            .expect("validated circuits only touch live wires")
    };

    for instr in circuit.instructions() {
        let width = idle + layout.len();
        guard("simulate_density", width + 2, 12)?;
        match instr {
            Instruction::PrepZero | Instruction::PrepChaotic => {
                let qubit = slot_of_qubit.len();
                slot_of_qubit.push(slots.len());
                slots.push(Slot::Qubit(qubit));
                let fresh = if matches!(instr, Instruction::PrepZero) {
                    let mut m = DenseMatrix::zeros(2, 2);
                    m.set(0, 0, C64::new(1.0, 0.0));
                    m
                } else {
                    DenseMatrix::identity(2).scale(C64::new(0.5, 0.0))
                };
                for b in branches.iter_mut() {
                    b.rho = b.rho.insert_wire(width, &fresh);
                }
                layout.push(qubit);
            }
            Instruction::Gate(g) => {
                let mapped = match *g {
                    Gate::H(q) => Gate::H(pos_of(&layout, q)),
                    Gate::S(q) => Gate::S(pos_of(&layout, q)),
                    Gate::X(q) => Gate::X(pos_of(&layout, q)),
                    Gate::Y(q) => Gate::Y(pos_of(&layout, q)),
                    Gate::Z(q) => Gate::Z(pos_of(&layout, q)),
                    Gate::Cz(a, b) => Gate::Cz(pos_of(&layout, a), pos_of(&layout, b)),
                    Gate::Cnot(a, b) => Gate::Cnot(pos_of(&layout, a), pos_of(&layout, b)),
                };
                for b in branches.iter_mut() {
                    b.rho.conjugate_by_gate(mapped);
                }
            }
            Instruction::Dephase(q) => {
                let z = Gate::Z(pos_of(&layout, *q));
                for b in branches.iter_mut() {
                    let mut flipped = b.rho.clone();
                    flipped.conjugate_by_gate(z);
                    b.rho = b.rho.add(&flipped).scale(C64::new(0.5, 0.0));
                }
            }
            Instruction::Discard(q) => {
                let pos = pos_of(&layout, *q);
                let keep: Vec<usize> = (0..width).filter(|&w| w != pos).collect();
                for b in branches.iter_mut() {
                    b.rho = b.rho.partial_trace(&keep);
                }
                layout.retain(|&a| a != *q);
                slots[slot_of_qubit[*q]] = Slot::Gone;
            }
            Instruction::Measure(q, name) => {
                let pos = pos_of(&layout, *q);
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    for v in 0..2usize {
                        let rho = take_bit(&b.rho, pos, v);
                        if rho.max_abs() < 1e-15 {
                            continue;
                        }
                        let mut bits = b.bits.clone();
                        bits.insert(name.clone(), v == 1);
                        next.push(Branch { rho, bits });
                    }
                }
                branches = next;
                slots[slot_of_qubit[*q]] = Slot::Bit(name.clone());
                layout.retain(|&a| a != *q);
            }
            Instruction::RandBit(name) => {
                slots.push(Slot::Bit(name.clone()));
                let mut next = Vec::with_capacity(branches.len() * 2);
                for b in branches {
                    for v in [false, true] {
                        let mut bits = b.bits.clone();
                        bits.insert(name.clone(), v);
                        next.push(Branch {
                            rho: b.rho.scale(C64::new(0.5, 0.0)),
                            bits,
                        });
                    }
                }
                branches = next;
            }
            Instruction::ClassicalNot(name) => {
                for b in branches.iter_mut() {
                    let v = b.bits[name];
                    b.bits.insert(name.clone(), !v);
                }
            }
            Instruction::ClassicalCnot(src, dst) => {
                for b in branches.iter_mut() {
                    let v = b.bits[src] ^ b.bits[dst];
                    b.bits.insert(dst.clone(), v);
                }
            }
            Instruction::ClassicalAnd(src, dst) => {
                for b in branches.iter_mut() {
                    let v = b.bits[src] & b.bits[dst];
                    b.bits.insert(dst.clone(), v);
                }
            }
            Instruction::PauliCtrl(name, letter, q) => {
                let pos = pos_of(&layout, *q);
                let gate = match letter {
                    PauliLetter::X => Gate::X(pos),
                    PauliLetter::Y => Gate::Y(pos),
                    PauliLetter::Z => Gate::Z(pos),
                    PauliLetter::I => continue,
                };
                for b in branches.iter_mut() {
                    if b.bits[name] {
                        b.rho.conjugate_by_gate(gate);
                    }
                }
            }
        }
    }

    // Assemble: surviving slots in allocation-event order, bits as projectors.
    let outputs: Vec<&Slot> = slots.iter().filter(|s| **s != Slot::Gone).collect();
    let n_out = outputs.len();
    let dim = 1usize << (idle + n_out);
    let mut total = DenseMatrix::zeros(dim, dim);
    for b in &branches {
        let mut rho = b.rho.clone();
        for (out_idx, slot) in outputs.iter().enumerate() {
            if let Slot::Bit(name) = slot {
                let v = b.bits[name];
                let mut proj = DenseMatrix::zeros(2, 2);
                let i = usize::from(v);
                proj.set(i, i, C64::new(1.0, 0.0));
                rho = rho.insert_wire(idle + out_idx, &proj);
            }
        }
        total = total.add(&rho);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::{dense_max_entangled, dense_of_state, DenseChannel, TOL};
    use super::*;
    use crate::stabstate::StabilizerGroupState;

    fn choi_of_circuit_dense(text: &str) -> DenseMatrix {
        let c = Circuit::parse_text(text).unwrap();
        simulate_density(&c, &dense_max_entangled(c.n_in()), c.n_in()).unwrap()
    }

    #[test]
    fn simulator_matches_compiler_on_nonadaptive_circuits() {
        for text in [
            "qubits 1\nh 0\n",
            "qubits 1\ndephase 0\n",
            "qubits 2\ncnot 0 1\ndiscard 1\n",
            "qubits 1\nprep0\ncnot 0 1\n",
            "qubits 0\nprepx\n",
        ] {
            let c = Circuit::parse_text(text).unwrap();
            let dense_choi = choi_of_circuit_dense(text);
            let compiled = c.compile().unwrap();
            let dc = DenseChannel::from_stinespring(&compiled.channel).unwrap();
            assert!(
                dense_choi.frobenius_distance(&dc.choi()) < TOL,
                "{text}"
            );
        }
    }

    #[test]
    fn measurement_produces_classical_mixture() {
        let c = Circuit::parse_text("qubits 1\nh 0\nmeasure 0 -> m\n").unwrap();
        let zero = dense_of_state(&StabilizerGroupState::zero(1)).unwrap();
        let out = simulate_density(&c, &zero, 0).unwrap();
        let chi = DenseMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(out.frobenius_distance(&chi) < TOL);
    }

    #[test]
    fn deferred_measurement_identity() {
        // measure then classically-controlled X equals CNOT then measure
        let adaptive =
            Circuit::parse_text("qubits 2\nmeasure 0 -> m\npctrl m x 1\nmeasure 1 -> k\n")
                .unwrap();
        let deferred =
            Circuit::parse_text("qubits 2\ncnot 0 1\nmeasure 0 -> m\nmeasure 1 -> k\n").unwrap();
        let omega = dense_max_entangled(2);
        let a = simulate_density(&adaptive, &omega, 2).unwrap();
        let b = simulate_density(&deferred, &omega, 2).unwrap();
        assert!(a.frobenius_distance(&b) < TOL);
    }

    #[test]
    fn randbit_is_a_uniform_bit() {
        let c = Circuit::parse_text("qubits 0\nrandbit b\n").unwrap();
        let scalar = DenseMatrix::identity(1);
        let out = simulate_density(&c, &scalar, 0).unwrap();
        let chi = DenseMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(out.frobenius_distance(&chi) < TOL);
    }
}
