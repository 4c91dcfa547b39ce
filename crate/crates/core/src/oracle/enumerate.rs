//! Exhaustive enumeration of stabilizer states at desk scale.
//!
//! Groups are enumerated as reduced row-echelon tableaux over the 2n GF(2)
//! columns, Z block before X block, filtered to isotropic (pairwise
//! commuting) row spaces, then expanded over all sign patterns. RREF
//! uniqueness means every group appears exactly once, and the column order
//! puts `|0^n>` first, which fixes witness ordering downstream.

use super::{guard, OracleError};
use crate::clifford::Gate;
use crate::gf2::BitVec;
use crate::pauli::PauliOperator;
use crate::stabstate::StabilizerGroupState;
use std::collections::HashSet;

/// Unsigned isotropic RREF tableaux of rank `k` on `n` qubits.
fn isotropic_tableaux(n: usize, k: usize) -> Vec<Vec<PauliOperator>> {
    let cols = 2 * n;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    enumerate_pivot_sets(cols, k, 0, &mut pivots, &mut |pivots| {
        // free positions: in row i, columns past its pivot that are not pivots
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                (pivots[i] + 1..cols)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        for assign in 0..(1u64 << free.len()) {
            let mut rows: Vec<BitVec> = (0..k)
                .map(|i| {
                    let mut v = BitVec::zeros(cols);
                    v.set(pivots[i], true);
                    v
                })
                .collect();
            for (bit, &(row, col)) in free.iter().enumerate() {
                if (assign >> bit) & 1 == 1 {
                    rows[row].set(col, true);
                }
            }
            let paulis: Vec<PauliOperator> = rows
                .iter()
                .map(|v| {
                    let mut x = BitVec::zeros(n);
                    let mut z = BitVec::zeros(n);
                    for q in 0..n {
                        z.set(q, v.get(q));
                        x.set(q, v.get(n + q));
                    }
                    PauliOperator::from_bits(x, z, 0).unsigned()
                })
                .collect();
            let isotropic = (0..k).all(|i| {
                (i + 1..k).all(|j| paulis[i].commutes(&paulis[j]).expect("sizes match"))
            });
            if isotropic {
                out.push(paulis);
            }
        }
    });
    out
}

fn enumerate_pivot_sets(
    cols: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if acc.len() == k {
        f(acc);
        return;
    }
    let remaining = k - acc.len();
    for c in start..=cols.saturating_sub(remaining) {
        acc.push(c);
        enumerate_pivot_sets(cols, k, c + 1, acc, f);
        acc.pop();
    }
}

fn states_of_rank(n: usize, k: usize) -> Vec<StabilizerGroupState> {
    let mut out = Vec::new();
    for tableau in isotropic_tableaux(n, k) {
        for signs in 0..(1u32 << k) {
            let gens: Vec<PauliOperator> = tableau
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    if (signs >> i) & 1 == 1 {
                        p.negated()
                    } else {
                        p.clone()
                    }
                })
                .collect();
            out.push(
                StabilizerGroupState::new(n, gens)
                    .expect("independent commuting rows form a valid group"),
            );
        }
    }
    out
}

/// All pure stabilizer states on `n <= 4` qubits, `|0^n>` first.
pub fn enumerate_pure_stabilizer_states(
    n: usize,
) -> Result<Vec<StabilizerGroupState>, OracleError> {
    guard("enumerate_pure_stabilizer_states", n, 4)?;
    Ok(states_of_rank(n, n))
}

/// All mixed stabilizer states (every rank) on `n <= 4` qubits.
pub fn enumerate_mixed_stabilizer_states(
    n: usize,
) -> Result<Vec<StabilizerGroupState>, OracleError> {
    guard("enumerate_mixed_stabilizer_states", n, 4)?;
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(states_of_rank(n, k));
    }
    Ok(out)
}

/// Independent cross-check: the Clifford orbit of `|0^n>` under H, S and
/// CNOT generators, deduplicated by canonical tableau.
pub fn clifford_orbit_states(n: usize) -> Result<Vec<StabilizerGroupState>, OracleError> {
    guard("clifford_orbit_states", n, 3)?;
    let start = StabilizerGroupState::zero(n).canonicalize();
    let mut gates: Vec<Gate> = Vec::new();
    for q in 0..n {
        gates.push(Gate::H(q));
        gates.push(Gate::S(q));
        for t in 0..n {
            if t != q {
                gates.push(Gate::Cnot(q, t));
            }
        }
    }
    let mut seen: HashSet<String> = HashSet::new();
    let mut order: Vec<StabilizerGroupState> = Vec::new();
    let mut frontier = vec![start.clone()];
    seen.insert(start.to_text());
    order.push(start);
    while let Some(s) = frontier.pop() {
        for &g in &gates {
            let gens = s
                .generators()
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    g.conjugate(&mut q);
                    q
                })
                .collect();
            let next = StabilizerGroupState::new(n, gens)
                .expect("gate conjugation preserves validity")
                .canonicalize();
            let key = next.to_text();
            if seen.insert(key) {
                order.push(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(order)
}
