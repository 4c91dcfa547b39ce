//! Bipartite structure of mixed stabilizer states.
//!
//! Any stabilizer group over a cut `A|B` splits into generators local to `A`,
//! generators local to `B`, and cross-cut generators. On the cross part the
//! A-side symplectic form is alternating; its hyperbolic pairs become
//! maximally entangled factors and its radical becomes maximally correlated
//! factors. Local Cliffords found by the target sweep move everything onto a
//! fixed wire layout, after which one local Pauli correction repairs all
//! signs. The wire layout per side is `[local |0>, chaotic, entangled,
//! correlated]`.

use super::ChannelError;
use crate::clifford::{sweep_to_targets, CliffordUnitary, Target};
use crate::gf2::BitVec;
use crate::pauli::{PauliLetter, PauliOperator};
use crate::stabstate::StabilizerGroupState;

/// One factor of the decomposed product, with side-local wire indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// `|0>` on an A-side wire.
    ZeroA(usize),
    /// `|0>` on a B-side wire.
    ZeroB(usize),
    /// Chaotic state on an A-side wire.
    ChiA(usize),
    /// Chaotic state on a B-side wire.
    ChiB(usize),
    /// Maximally entangled pair across the cut.
    Bell(usize, usize),
    /// Maximally correlated pair across the cut.
    Sigma(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BipartiteCounts {
    pub zero_a: usize,
    pub zero_b: usize,
    pub chi_a: usize,
    pub chi_b: usize,
    pub bell: usize,
    pub sigma: usize,
}

/// Local Cliffords and the factor multiset they expose:
/// `(u_a (x) u_b) s (u_a (x) u_b)† = factor_state()`.
#[derive(Debug, Clone)]
pub struct BipartiteDecomposition {
    pub n_a: usize,
    pub n_b: usize,
    pub u_a: CliffordUnitary,
    pub u_b: CliffordUnitary,
    pub counts: BipartiteCounts,
    pub factors: Vec<Factor>,
}

impl BipartiteDecomposition {
    /// The canonical product state the locals map onto.
    pub fn factor_state(&self) -> StabilizerGroupState {
        let n = self.n_a + self.n_b;
        let mut gens = Vec::new();
        for f in &self.factors {
            match *f {
                Factor::ZeroA(w) => gens.push(PauliOperator::single(n, w, PauliLetter::Z)),
                Factor::ZeroB(w) => {
                    gens.push(PauliOperator::single(n, self.n_a + w, PauliLetter::Z))
                }
                Factor::ChiA(_) | Factor::ChiB(_) => {}
                Factor::Bell(wa, wb) => {
                    let bx = PauliOperator::single(n, wa, PauliLetter::X)
                        .multiply(&PauliOperator::single(n, self.n_a + wb, PauliLetter::X))
                        .unwrap();
                    let bz = PauliOperator::single(n, wa, PauliLetter::Z)
                        .multiply(&PauliOperator::single(n, self.n_a + wb, PauliLetter::Z))
                        .unwrap();
                    gens.push(bx);
                    gens.push(bz);
                }
                Factor::Sigma(wa, wb) => {
                    gens.push(
                        PauliOperator::single(n, wa, PauliLetter::Z)
                            .multiply(&PauliOperator::single(n, self.n_a + wb, PauliLetter::Z))
                            .unwrap(),
                    );
                }
            }
        }
        StabilizerGroupState::new(n, gens).expect("factor generators are valid")
    }

    /// The combined local Clifford `u_a (x) u_b` on all wires.
    pub fn local_unitary(&self) -> CliffordUnitary {
        let n = self.n_a + self.n_b;
        let a_pos: Vec<usize> = (0..self.n_a).collect();
        let b_pos: Vec<usize> = (self.n_a..n).collect();
        self.u_a
            .embedded(n, &a_pos)
            .compose(&self.u_b.embedded(n, &b_pos))
            .expect("disjoint embeddings commute")
    }
}

fn symp_on(p: &PauliOperator, q: &PauliOperator, wires: &[usize]) -> bool {
    !p.restricted(wires)
        .commutes(&q.restricted(wires))
        .expect("restrictions share size")
}

/// Decompose a stabilizer state over the cut `first n_a qubits | rest`.
pub fn decompose_bipartite(
    s: &StabilizerGroupState,
    n_a: usize,
) -> Result<BipartiteDecomposition, ChannelError> {
    let n = s.num_qubits();
    if n_a > n {
        return Err(ChannelError::SizeMismatch(n_a, n));
    }
    let n_b = n - n_a;
    let a_wires: Vec<usize> = (0..n_a).collect();
    let b_wires: Vec<usize> = (n_a..n).collect();

    use crate::stabstate::{rref_in_place, Col};
    let cols_a: Vec<Col> = a_wires.iter().flat_map(|&q| [Col::X(q), Col::Z(q)]).collect();
    let cols_b: Vec<Col> = b_wires.iter().flat_map(|&q| [Col::X(q), Col::Z(q)]).collect();

    // Rows with pivots on B columns first; the rest are supported on A only.
    let mut rows = s.canonicalize().generators().to_vec();
    let rank_b = rref_in_place(&mut rows, &cols_b);
    let mut local_a: Vec<PauliOperator> = rows[rank_b..].to_vec();
    let mut cands: Vec<PauliOperator> = rows[..rank_b].to_vec();
    rref_in_place(&mut local_a, &cols_a);

    // Reduce candidate A-parts modulo the A-local subgroup, then split off the
    // candidates that collapse onto B only.
    for la in &local_a {
        let pivot = cols_a
            .iter()
            .copied()
            .find(|&c| crate::stabstate::col_bit(la, c))
            .expect("local rows are non-trivial");
        for cand in cands.iter_mut() {
            if crate::stabstate::col_bit(cand, pivot) {
                *cand = cand.multiply(la).expect("sizes match");
            }
        }
    }
    let rank_cross = rref_in_place(&mut cands, &cols_a);
    let mut cross: Vec<PauliOperator> = cands[..rank_cross].to_vec();
    let mut local_b: Vec<PauliOperator> = cands[rank_cross..].to_vec();
    rref_in_place(&mut local_b, &cols_b);
    debug_assert!(local_b
        .iter()
        .all(|g| g.restricted(&a_wires).is_identity_support()));

    // Split the cross generators into hyperbolic pairs and the radical of the
    // A-side form.
    let mut pairs: Vec<(PauliOperator, PauliOperator)> = Vec::new();
    loop {
        let mut found = None;
        'outer: for i in 0..cross.len() {
            for j in i + 1..cross.len() {
                if symp_on(&cross[i], &cross[j], &a_wires) {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = found else { break };
        let h = cross.remove(j);
        let g = cross.remove(i);
        for v in cross.iter_mut() {
            // both flags are read before either multiplication shifts them
            let vs_h = symp_on(v, &h, &a_wires);
            let vs_g = symp_on(v, &g, &a_wires);
            if vs_h {
                *v = v.multiply(&g).expect("sizes match");
            }
            if vs_g {
                *v = v.multiply(&h).expect("sizes match");
            }
        }
        pairs.push((g, h));
    }
    let radical = cross;

    let counts = BipartiteCounts {
        zero_a: local_a.len(),
        zero_b: local_b.len(),
        bell: pairs.len(),
        sigma: radical.len(),
        chi_a: n_a - local_a.len() - pairs.len() - radical.len(),
        chi_b: n_b - local_b.len() - pairs.len() - radical.len(),
    };
    let d = counts.bell;
    let e = counts.sigma;

    // Wire layout per side: locals, chaotic, entangled pairs, correlated pairs.
    let bell_a0 = counts.zero_a + counts.chi_a;
    let sigma_a0 = bell_a0 + d;
    let bell_b0 = counts.zero_b + counts.chi_b;
    let sigma_b0 = bell_b0 + d;

    let mut targets_a: Vec<Target> = Vec::new();
    let mut targets_b: Vec<Target> = Vec::new();
    for (i, (g, h)) in pairs.iter().enumerate() {
        targets_a.push(Target::Pair {
            x_like: g.restricted(&a_wires),
            z_like: h.restricted(&a_wires),
            wire: bell_a0 + i,
        });
        targets_b.push(Target::Pair {
            x_like: g.restricted(&b_wires),
            z_like: h.restricted(&b_wires),
            wire: bell_b0 + i,
        });
    }
    for (i, g) in local_a.iter().enumerate() {
        targets_a.push(Target::Single {
            op: g.restricted(&a_wires),
            wire: i,
        });
    }
    for (j, r) in radical.iter().enumerate() {
        targets_a.push(Target::Single {
            op: r.restricted(&a_wires),
            wire: sigma_a0 + j,
        });
    }
    for (i, g) in local_b.iter().enumerate() {
        targets_b.push(Target::Single {
            op: g.restricted(&b_wires),
            wire: i,
        });
    }
    for (j, r) in radical.iter().enumerate() {
        targets_b.push(Target::Single {
            op: r.restricted(&b_wires),
            wire: sigma_b0 + j,
        });
    }

    let gates_a = sweep_to_targets(n_a, targets_a, false);
    let gates_b = sweep_to_targets(n_b, targets_b, false);

    // Conjugate the (full-width) generating set to read off residual signs.
    let mut working: Vec<(PauliOperator, PauliOperator)> = Vec::new(); // (row, target pattern)
    let total = n;
    let pattern_z = |w: usize| PauliOperator::single(total, w, PauliLetter::Z);
    let pattern_cross = |wa: usize, wb: usize, letter: PauliLetter| {
        PauliOperator::single(total, wa, letter)
            .multiply(&PauliOperator::single(total, n_a + wb, letter))
            .unwrap()
    };
    for (i, g) in local_a.iter().enumerate() {
        working.push((g.clone(), pattern_z(i)));
    }
    for (i, g) in local_b.iter().enumerate() {
        working.push((g.clone(), pattern_z(n_a + i)));
    }
    for (i, (g, h)) in pairs.iter().enumerate() {
        working.push((g.clone(), pattern_cross(bell_a0 + i, bell_b0 + i, PauliLetter::X)));
        working.push((h.clone(), pattern_cross(bell_a0 + i, bell_b0 + i, PauliLetter::Z)));
    }
    for (j, r) in radical.iter().enumerate() {
        working.push((r.clone(), pattern_cross(sigma_a0 + j, sigma_b0 + j, PauliLetter::Z)));
    }
    for g in &gates_a {
        for (row, _) in working.iter_mut() {
            g.conjugate(row);
        }
    }
    for g in &gates_b {
        let shifted = shift_gate(*g, n_a);
        for (row, _) in working.iter_mut() {
            shifted.conjugate(row);
        }
    }

    // One local Pauli repairs every sign: factor supports are disjoint.
    let mut fix_x = BitVec::zeros(n);
    let mut fix_z = BitVec::zeros(n);
    for (row, pattern) in &working {
        debug_assert_eq!(row.x_bits(), pattern.x_bits(), "sweep must land on the pattern");
        debug_assert_eq!(row.z_bits(), pattern.z_bits(), "sweep must land on the pattern");
        debug_assert!(row.phase() == 0 || row.phase() == 2);
        if row.phase() != 2 {
            continue;
        }
        // Flip this row only: act on its first support wire with the
        // anticommuting partner letter.
        let w = (0..n)
            .find(|&w| row.x_bit(w) || row.z_bit(w))
            .expect("patterns are non-trivial");
        if row.x_bit(w) {
            fix_z.set(w, !fix_z.get(w));
        } else {
            fix_x.set(w, !fix_x.get(w));
        }
    }
    let fix = PauliOperator::from_bits(fix_x, fix_z, 0).unsigned();

    let mut u_a = CliffordUnitary::from_gates(n_a, &gates_a).expect("sweep gates are valid");
    u_a.apply_pauli(&fix.restricted(&a_wires));
    let mut u_b = CliffordUnitary::from_gates(n_b, &gates_b).expect("sweep gates are valid");
    u_b.apply_pauli(&fix.restricted(&b_wires));

    let mut factors: Vec<Factor> = Vec::new();
    for i in 0..counts.zero_a {
        factors.push(Factor::ZeroA(i));
    }
    for i in 0..counts.chi_a {
        factors.push(Factor::ChiA(counts.zero_a + i));
    }
    for i in 0..counts.zero_b {
        factors.push(Factor::ZeroB(i));
    }
    for i in 0..counts.chi_b {
        factors.push(Factor::ChiB(counts.zero_b + i));
    }
    for i in 0..d {
        factors.push(Factor::Bell(bell_a0 + i, bell_b0 + i));
    }
    for j in 0..e {
        factors.push(Factor::Sigma(sigma_a0 + j, sigma_b0 + j));
    }

    let dec = BipartiteDecomposition {
        n_a,
        n_b,
        u_a,
        u_b,
        counts,
        factors,
    };
    debug_assert!(
        s.apply_clifford(&dec.local_unitary())
            .expect("sizes match")
            .equiv(&dec.factor_state()),
        "local conjugation must reach the factor state"
    );
    Ok(dec)
}

/// Re-index a gate on the B side to global wires.
fn shift_gate(g: crate::clifford::Gate, offset: usize) -> crate::clifford::Gate {
    use crate::clifford::Gate::*;
    match g {
        H(q) => H(q + offset),
        S(q) => S(q + offset),
        X(q) => X(q + offset),
        Y(q) => Y(q + offset),
        Z(q) => Z(q + offset),
        Cz(a, b) => Cz(a + offset, b + offset),
        Cnot(a, b) => Cnot(a + offset, b + offset),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;
    use rand::rngs::StdRng;
    use rand::{RngCore, SeedableRng};

    fn check(s: &StabilizerGroupState, n_a: usize) -> BipartiteDecomposition {
        let dec = decompose_bipartite(s, n_a).unwrap();
        let moved = s.apply_clifford(&dec.local_unitary()).unwrap();
        assert!(moved.equiv(&dec.factor_state()), "{s:?} over {n_a}|{}", s.num_qubits() - n_a);
        let c = dec.counts;
        assert_eq!(c.zero_a + c.chi_a + c.bell + c.sigma, dec.n_a);
        assert_eq!(c.zero_b + c.chi_b + c.bell + c.sigma, dec.n_b);
        dec
    }

    #[test]
    fn sigma_is_one_correlated_factor() {
        let dec = check(&StabilizerGroupState::sigma(), 1);
        assert_eq!(dec.counts.sigma, 1);
        assert_eq!(dec.counts.bell, 0);
        assert_eq!(dec.factors, vec![Factor::Sigma(0, 0)]);
    }

    #[test]
    fn bell_is_one_entangled_factor() {
        let dec = check(&StabilizerGroupState::bell(), 1);
        assert_eq!(dec.counts.bell, 1);
        assert_eq!(dec.factors, vec![Factor::Bell(0, 0)]);
    }

    #[test]
    fn product_states_split_into_locals() {
        let s = StabilizerGroupState::zero(1).tensor(&StabilizerGroupState::plus());
        let dec = check(&s, 1);
        assert_eq!(dec.counts.zero_a, 1);
        assert_eq!(dec.counts.zero_b, 1);
        let s = StabilizerGroupState::chaotic(1).tensor(&StabilizerGroupState::zero(1));
        let dec = check(&s, 1);
        assert_eq!((dec.counts.chi_a, dec.counts.zero_b), (1, 1));
    }

    #[test]
    fn ghz_over_one_two_cut() {
        let ghz = StabilizerGroupState::ghz(3).unwrap();
        let dec = check(&ghz, 1);
        // one Bell pair across the cut, one |0> left on the B side
        assert_eq!(dec.counts.bell, 1);
        assert_eq!(dec.counts.zero_b, 1);
    }

    #[test]
    fn x_basis_correlation_is_sigma_up_to_locals() {
        let s = StabilizerGroupState::new(2, vec![pauli("XX")]).unwrap();
        let dec = check(&s, 1);
        assert_eq!(dec.counts.sigma, 1);
    }

    #[test]
    fn random_states_decompose() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..60 {
            let n_a = 1 + (rng.next_u64() % 3) as usize;
            let n_b = 1 + (rng.next_u64() % 3) as usize;
            let s = crate::random::random_state(n_a + n_b, &mut rng);
            check(&s, n_a);
        }
    }

    #[test]
    fn counts_are_basis_independent() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let s = crate::random::random_state(4, &mut rng);
            let base = decompose_bipartite(&s, 2).unwrap().counts;
            // multiply generators pairwise to get another presentation
            let gens = s.generators().to_vec();
            let mut shuffled = gens.clone();
            if shuffled.len() >= 2 {
                shuffled[0] = gens[0].multiply(&gens[1]).unwrap();
                shuffled.reverse();
            }
            let s2 = StabilizerGroupState::new(s.num_qubits(), shuffled).unwrap();
            assert_eq!(decompose_bipartite(&s2, 2).unwrap().counts, base);
        }
    }
}
