//! Seeded random generators for states, Paulis and circuits; used heavily by
//! the test corpora.

use crate::circuit::{Circuit, Instruction};
use crate::clifford::CliffordUnitary;
use crate::gf2::BitVec;
use crate::pauli::PauliOperator;
use crate::stabstate::StabilizerGroupState;
use rand::Rng;

/// Uniform random Pauli; `hermitian` restricts the phase to observable signs.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, hermitian: bool, rng: &mut R) -> PauliOperator {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for q in 0..n {
        x.set(q, rng.random::<bool>());
        z.set(q, rng.random::<bool>());
    }
    let p = PauliOperator::from_bits(x, z, 0);
    if hermitian {
        let p = p.unsigned();
        if rng.random::<bool>() {
            p.negated()
        } else {
            p
        }
    } else {
        let phase = rng.random_range(0..4u8);
        let base = p.unsigned();
        PauliOperator::from_bits(base.x_bits().clone(), base.z_bits().clone(), base.phase() + phase)
    }
}

/// Random mixed stabilizer state of a random rank: a random Clifford applied
/// to `|0^k> (x) chi^{n-k}`.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StabilizerGroupState {
    let k = rng.random_range(0..=n);
    random_state_of_rank(n, k, rng)
}

pub fn random_state_of_rank<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> StabilizerGroupState {
    let base = StabilizerGroupState::zero(k).tensor(&StabilizerGroupState::chaotic(n - k));
    let u = CliffordUnitary::random(n, rng);
    base.apply_clifford(&u).expect("sizes match")
}

/// Random non-adaptive circuit: preparations, gates, dephasings and discards.
///
/// Keeps at least one wire alive while instructions remain so that gate
/// choices always apply; the result may still end with zero outputs when the
/// final instruction is a discard.
pub fn random_nonadaptive_circuit<R: Rng + ?Sized>(
    n_in: usize,
    max_instructions: usize,
    rng: &mut R,
) -> Circuit {
    use crate::clifford::Gate;
    let mut instructions: Vec<Instruction> = Vec::new();
    let mut live: Vec<usize> = (0..n_in).collect();
    let mut next = n_in;
    let count = rng.random_range(0..=max_instructions);
    for _ in 0..count {
        let choice = rng.random_range(0..10);
        match choice {
            0 => {
                instructions.push(Instruction::PrepZero);
                live.push(next);
                next += 1;
            }
            1 => {
                instructions.push(Instruction::PrepChaotic);
                live.push(next);
                next += 1;
            }
            2 if !live.is_empty() => {
                let q = live[rng.random_range(0..live.len())];
                instructions.push(Instruction::Dephase(q));
            }
            3 if !live.is_empty() => {
                let i = rng.random_range(0..live.len());
                let q = live.remove(i);
                instructions.push(Instruction::Discard(q));
            }
            _ if !live.is_empty() => {
                let q = live[rng.random_range(0..live.len())];
                let gate = match rng.random_range(0..7) {
                    0 => Gate::H(q),
                    1 => Gate::S(q),
                    2 => Gate::X(q),
                    3 => Gate::Y(q),
                    4 => Gate::Z(q),
                    _ => {
                        if live.len() > 1 {
                            let mut j = rng.random_range(0..live.len() - 1);
                            let qs: Vec<usize> =
                                live.iter().copied().filter(|&w| w != q).collect();
                            j = j.min(qs.len() - 1);
                            let t = qs[j];
                            if rng.random::<bool>() {
                                Gate::Cz(q, t)
                            } else {
                                Gate::Cnot(q, t)
                            }
                        } else {
                            Gate::H(q)
                        }
                    }
                };
                instructions.push(Instruction::Gate(gate));
            }
            _ => {
                instructions.push(Instruction::PrepZero);
                live.push(next);
                next += 1;
            }
        }
    }
    Circuit::new(n_in, instructions).expect("generator respects wire bookkeeping")
}
