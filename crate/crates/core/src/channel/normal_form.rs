//! Channel normal form: encoder, elementary wires, decoder.
//!
//! Decomposing the Choi tableau over the `A'|B` cut exposes counts
//! `(a, b, c, d, e)`: the channel is unitarily equivalent to `a` fresh `|0>`
//! preparations, `b` chaotic preparations, `c` erasures, `d` identity wires
//! and `e` dephasing wires. Capacities read off directly: a classical bit per
//! identity-or-dephasing wire, a qubit only per identity wire.

use super::{decompose_bipartite, StinespringForm};
use crate::circuit::{Circuit, Instruction};
use crate::clifford::CliffordUnitary;
use serde::Serialize;

/// Classical, entanglement-assisted classical and quantum capacities in
/// bits/qubits per use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Capacities {
    #[serde(rename = "C")]
    pub classical: u64,
    #[serde(rename = "C_ea")]
    pub entanglement_assisted: u64,
    #[serde(rename = "Q")]
    pub quantum: u64,
}

/// Wire counts plus the local encoder/decoder Cliffords.
#[derive(Clone)]
pub struct NormalForm {
    /// `|0>` preparations on the output side.
    pub a: usize,
    /// chaotic preparations on the output side.
    pub b: usize,
    /// erased input wires.
    pub c: usize,
    /// identity wires.
    pub d: usize,
    /// dephasing wires.
    pub e: usize,
    /// Clifford applied to the input before the elementary wires.
    pub encoder: CliffordUnitary,
    /// Clifford applied to the elementary wires to produce the output.
    pub decoder: CliffordUnitary,
}

impl NormalForm {
    pub fn counts(&self) -> (usize, usize, usize, usize, usize) {
        (self.a, self.b, self.c, self.d, self.e)
    }

    pub fn n_in(&self) -> usize {
        self.c + self.d + self.e
    }

    pub fn n_out(&self) -> usize {
        self.a + self.b + self.d + self.e
    }

    pub fn capacities(&self) -> Capacities {
        Capacities {
            classical: (self.d + self.e) as u64,
            entanglement_assisted: (2 * self.d + self.e) as u64,
            quantum: self.d as u64,
        }
    }

    /// Roles of the input wires after the encoder, in wire order.
    pub fn input_roles(&self) -> Vec<&'static str> {
        let mut roles = vec!["erase"; self.c];
        roles.extend(std::iter::repeat_n("identity", self.d));
        roles.extend(std::iter::repeat_n("dephase", self.e));
        roles
    }

    /// Roles of the output wires before the decoder, in wire order.
    pub fn output_roles(&self) -> Vec<&'static str> {
        let mut roles = vec!["prep_zero"; self.a];
        roles.extend(std::iter::repeat_n("prep_chaotic", self.b));
        roles.extend(std::iter::repeat_n("identity", self.d));
        roles.extend(std::iter::repeat_n("dephase", self.e));
        roles
    }

    /// Rebuild the channel as a circuit: encoder gates, elementary wire
    /// instructions, decoder gates.
    ///
    /// Circuit outputs appear in allocation order (identity and dephasing
    /// wires first, then the preparations), so the wire permutation between
    /// that order and the decoder's `[a, b, d, e]` layout is folded into the
    /// synthesized decoder.
    pub fn to_circuit(&self) -> Circuit {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        let n_in = self.n_in();
        let n_out = self.n_out();
        let mut instructions: Vec<Instruction> = Vec::new();
        for g in self.encoder.synthesize() {
            instructions.push(Instruction::Gate(g));
        }
        for q in 0..c {
            instructions.push(Instruction::Discard(q));
        }
        for q in 0..e {
            instructions.push(Instruction::Dephase(c + d + q));
        }
        for _ in 0..a {
            instructions.push(Instruction::PrepZero);
        }
        for _ in 0..b {
            instructions.push(Instruction::PrepChaotic);
        }
        // Physical wire of decoder-layout wire w: preparations live after the
        // inputs, surviving input wires keep their ids.
        let phys = |w: usize| -> usize {
            if w < a + b {
                n_in + w
            } else {
                c + (w - a - b)
            }
        };
        // Circuit output position p holds decoder-layout wire L(p).
        let mut layout_of_position = vec![0usize; n_out];
        for (p, slot) in layout_of_position.iter_mut().enumerate() {
            *slot = if p < d + e { a + b + p } else { p - (d + e) };
        }
        let decoder_eff = CliffordUnitary::permutation(&layout_of_position)
            .compose(&self.decoder)
            .expect("sizes match");
        for g in decoder_eff.synthesize() {
            instructions.push(Instruction::Gate(remap_gate(g, &phys)));
        }
        Circuit::new(n_in, instructions).expect("normal-form circuit is well-formed")
    }

    /// Compile the reconstruction circuit back to a channel.
    pub fn reconstruct(&self) -> StinespringForm {
        self.to_circuit()
            .compile()
            .expect("normal-form circuit is non-adaptive")
            .channel
    }
}

impl std::fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "NormalForm(a={}, b={}, c={}, d={}, e={})",
            self.a, self.b, self.c, self.d, self.e
        )
    }
}

fn remap_gate(g: crate::clifford::Gate, phys: &impl Fn(usize) -> usize) -> crate::clifford::Gate {
    use crate::clifford::Gate::*;
    match g {
        H(q) => H(phys(q)),
        S(q) => S(phys(q)),
        X(q) => X(phys(q)),
        Y(q) => Y(phys(q)),
        Z(q) => Z(phys(q)),
        Cz(p, q) => Cz(phys(p), phys(q)),
        Cnot(p, q) => Cnot(phys(p), phys(q)),
    }
}

/// Reduce a channel to its normal form via the Choi decomposition. The
/// encoder is the conjugate of the input-side local Clifford (its transpose
/// composed through the maximally entangled pairs), the decoder the inverse
/// of the output-side one.
pub fn normal_form(ch: &StinespringForm) -> NormalForm {
    let choi = ch.choi();
    let dec = decompose_bipartite(choi.state(), ch.n_in()).expect("valid split");
    debug_assert_eq!(
        dec.counts.zero_a, 0,
        "trace preservation forbids input-side local generators"
    );
    let nf = NormalForm {
        a: dec.counts.zero_b,
        b: dec.counts.chi_b,
        c: dec.counts.chi_a,
        d: dec.counts.bell,
        e: dec.counts.sigma,
        encoder: dec.u_a.inverse().transpose(),
        decoder: dec.u_b.inverse(),
    };
    debug_assert_eq!(nf.n_in(), ch.n_in());
    debug_assert_eq!(nf.n_out(), ch.n_out());
    nf
}

/// Capacity formulas from the wire counts.
pub fn capacities(nf: &NormalForm) -> Capacities {
    nf.capacities()
}
