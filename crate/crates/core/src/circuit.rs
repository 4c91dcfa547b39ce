//! Circuit intermediate representation, text format, compilation to channels
//! and the deferred-measurement rewrite for the restricted adaptive class.
//!
//! Qubit indices are allocation-ordered and stable across discards: inputs
//! take `0..n_in`, every preparation takes the next index. Classical bits are
//! named wires created by `measure` or `randbit`. A circuit is non-adaptive
//! when it contains no measurement, classical or controlled instruction.

use crate::channel::{ChannelError, StinespringForm};
use crate::clifford::{CliffordUnitary, Gate, TableauError};
use crate::pauli::PauliLetter;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("line {0}: syntax error: {1}")]
    Syntax(usize, String),
    #[error("line {0}: dead or unknown qubit wire {1}")]
    DeadWire(usize, usize),
    #[error("line {0}: repeated qubit index {1}")]
    RepeatedIndex(usize, usize),
    #[error("line {0}: duplicate bit name {1:?}")]
    DuplicateBit(usize, String),
    #[error("line {0}: unknown bit {1:?}")]
    UnknownBit(usize, String),
    #[error("line {0}: adaptive instruction; apply the rewrite first")]
    Adaptive(usize),
    #[error("line {0}: non-affine classical operation, outside the restricted class")]
    OutsideRestrictedClass(usize),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
}

impl CircuitError {
    fn at(self, pos: usize) -> CircuitError {
        use CircuitError::*;
        match self {
            Syntax(_, m) => Syntax(pos, m),
            DeadWire(_, q) => DeadWire(pos, q),
            RepeatedIndex(_, q) => RepeatedIndex(pos, q),
            DuplicateBit(_, b) => DuplicateBit(pos, b),
            UnknownBit(_, b) => UnknownBit(pos, b),
            Adaptive(_) => Adaptive(pos),
            OutsideRestrictedClass(_) => OutsideRestrictedClass(pos),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instruction {
    PrepZero,
    PrepChaotic,
    Gate(Gate),
    Dephase(usize),
    Discard(usize),
    Measure(usize, String),
    ClassicalNot(String),
    ClassicalCnot(String, String),
    /// Parseable for error reporting; rejected by both compilation and the
    /// rewrite (non-affine).
    ClassicalAnd(String, String),
    RandBit(String),
    PauliCtrl(String, PauliLetter, usize),
}

impl Instruction {
    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            Instruction::Measure(..)
                | Instruction::ClassicalNot(..)
                | Instruction::ClassicalCnot(..)
                | Instruction::ClassicalAnd(..)
                | Instruction::RandBit(..)
                | Instruction::PauliCtrl(..)
        )
    }

    fn mnemonic(&self) -> String {
        match self {
            Instruction::PrepZero => "prep0".into(),
            Instruction::PrepChaotic => "prepx".into(),
            Instruction::Gate(g) => g.mnemonic(),
            Instruction::Dephase(q) => format!("dephase {q}"),
            Instruction::Discard(q) => format!("discard {q}"),
            Instruction::Measure(q, b) => format!("measure {q} -> {b}"),
            Instruction::ClassicalNot(b) => format!("notbit {b}"),
            Instruction::ClassicalCnot(s, d) => format!("cnotbit {s} {d}"),
            Instruction::ClassicalAnd(s, d) => format!("andbit {s} {d}"),
            Instruction::RandBit(b) => format!("randbit {b}"),
            Instruction::PauliCtrl(b, p, q) => {
                let letter = match p {
                    PauliLetter::X => "x",
                    PauliLetter::Y => "y",
                    PauliLetter::Z => "z",
                    PauliLetter::I => "i",
                };
                format!("pctrl {b} {letter} {q}")
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum WireStatus {
    Live,
    /// Destructively measured: carries a classical output, no longer gateable.
    Classical,
    Dead,
}

/// A validated circuit: every referenced wire is live at its use site and
/// every bit is defined exactly once before use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_in: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_in: usize, instructions: Vec<Instruction>) -> Result<Self, CircuitError> {
        let c = Circuit { n_in, instructions };
        c.validate()?;
        Ok(c)
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn is_non_adaptive(&self) -> bool {
        !self.instructions.iter().any(Instruction::is_adaptive)
    }

    /// Wire bookkeeping: positions in errors are instruction indices
    /// (rewritten to line numbers by the parser).
    fn validate(&self) -> Result<(), CircuitError> {
        let mut status: Vec<WireStatus> = vec![WireStatus::Live; self.n_in];
        let mut bits: Vec<String> = Vec::new();
        for (pos, instr) in self.instructions.iter().enumerate() {
            let check_live = |q: usize, status: &[WireStatus]| {
                if q >= status.len() || status[q] != WireStatus::Live {
                    Err(CircuitError::DeadWire(pos, q))
                } else {
                    Ok(())
                }
            };
            let check_bit = |b: &str, bits: &[String]| {
                if bits.iter().any(|x| x == b) {
                    Ok(())
                } else {
                    Err(CircuitError::UnknownBit(pos, b.into()))
                }
            };
            match instr {
                Instruction::PrepZero | Instruction::PrepChaotic => {
                    status.push(WireStatus::Live);
                }
                Instruction::Gate(g) => match *g {
                    Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                        check_live(q, &status)?;
                    }
                    Gate::Cz(a, b) | Gate::Cnot(a, b) => {
                        check_live(a, &status)?;
                        check_live(b, &status)?;
                        if a == b {
                            return Err(CircuitError::RepeatedIndex(pos, a));
                        }
                    }
                },
                Instruction::Dephase(q) => check_live(*q, &status)?,
                Instruction::Discard(q) => {
                    check_live(*q, &status)?;
                    status[*q] = WireStatus::Dead;
                }
                Instruction::Measure(q, b) => {
                    check_live(*q, &status)?;
                    if bits.iter().any(|x| x == b) {
                        return Err(CircuitError::DuplicateBit(pos, b.clone()));
                    }
                    status[*q] = WireStatus::Classical;
                    bits.push(b.clone());
                }
                Instruction::ClassicalNot(b) => check_bit(b, &bits)?,
                Instruction::ClassicalCnot(s, d) | Instruction::ClassicalAnd(s, d) => {
                    check_bit(s, &bits)?;
                    check_bit(d, &bits)?;
                    if s == d {
                        return Err(CircuitError::Syntax(
                            pos,
                            "classical two-bit operation needs distinct bits".into(),
                        ));
                    }
                }
                Instruction::RandBit(b) => {
                    if bits.iter().any(|x| x == b) {
                        return Err(CircuitError::DuplicateBit(pos, b.clone()));
                    }
                    bits.push(b.clone());
                }
                Instruction::PauliCtrl(b, _, q) => {
                    check_bit(b, &bits)?;
                    check_live(*q, &status)?;
                }
            }
        }
        Ok(())
    }

    // ---- text format ----

    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_in);
        for instr in &self.instructions {
            let _ = writeln!(out, "{}", instr.mnemonic());
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Circuit, CircuitError> {
        let mut n_in: Option<usize> = None;
        let mut instructions: Vec<Instruction> = Vec::new();
        let mut lines_of: Vec<usize> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse_q = |tok: &str| {
                tok.parse::<usize>()
                    .map_err(|_| CircuitError::Syntax(lineno, format!("bad qubit index {tok:?}")))
            };
            let arity = |want: usize| {
                if toks.len() == want + 1 {
                    Ok(())
                } else {
                    Err(CircuitError::Syntax(
                        lineno,
                        format!("{} expects {} argument(s)", toks[0], want),
                    ))
                }
            };
            if toks[0] == "qubits" {
                arity(1)?;
                if n_in.is_some() || !instructions.is_empty() {
                    return Err(CircuitError::Syntax(
                        lineno,
                        "qubits header must come first, once".into(),
                    ));
                }
                n_in = Some(parse_q(toks[1])?);
                continue;
            }
            if n_in.is_none() {
                return Err(CircuitError::Syntax(
                    lineno,
                    "expected `qubits <n>` header".into(),
                ));
            }
            let instr = match toks[0] {
                "prep0" => {
                    arity(0)?;
                    Instruction::PrepZero
                }
                "prepx" => {
                    arity(0)?;
                    Instruction::PrepChaotic
                }
                "h" | "s" | "x" | "y" | "z" => {
                    arity(1)?;
                    let q = parse_q(toks[1])?;
                    Instruction::Gate(match toks[0] {
                        "h" => Gate::H(q),
                        "s" => Gate::S(q),
                        "x" => Gate::X(q),
                        "y" => Gate::Y(q),
                        _ => Gate::Z(q),
                    })
                }
                "cz" => {
                    arity(2)?;
                    Instruction::Gate(Gate::Cz(parse_q(toks[1])?, parse_q(toks[2])?))
                }
                "cnot" => {
                    arity(2)?;
                    Instruction::Gate(Gate::Cnot(parse_q(toks[1])?, parse_q(toks[2])?))
                }
                "dephase" => {
                    arity(1)?;
                    Instruction::Dephase(parse_q(toks[1])?)
                }
                "discard" => {
                    arity(1)?;
                    Instruction::Discard(parse_q(toks[1])?)
                }
                "measure" => {
                    if toks.len() != 4 || toks[2] != "->" {
                        return Err(CircuitError::Syntax(
                            lineno,
                            "measure expects `measure <q> -> <bit>`".into(),
                        ));
                    }
                    Instruction::Measure(parse_q(toks[1])?, toks[3].to_string())
                }
                "notbit" => {
                    arity(1)?;
                    Instruction::ClassicalNot(toks[1].to_string())
                }
                "cnotbit" => {
                    arity(2)?;
                    Instruction::ClassicalCnot(toks[1].to_string(), toks[2].to_string())
                }
                "andbit" => {
                    arity(2)?;
                    Instruction::ClassicalAnd(toks[1].to_string(), toks[2].to_string())
                }
                "randbit" => {
                    arity(1)?;
                    Instruction::RandBit(toks[1].to_string())
                }
                "pctrl" => {
                    arity(3)?;
                    let letter = match toks[2] {
                        "x" => PauliLetter::X,
                        "y" => PauliLetter::Y,
                        "z" => PauliLetter::Z,
                        other => {
                            return Err(CircuitError::Syntax(
                                lineno,
                                format!("bad pauli letter {other:?}"),
                            ))
                        }
                    };
                    Instruction::PauliCtrl(toks[1].to_string(), letter, parse_q(toks[3])?)
                }
                other => {
                    return Err(CircuitError::Syntax(
                        lineno,
                        format!("unknown instruction {other:?}"),
                    ))
                }
            };
            instructions.push(instr);
            lines_of.push(lineno);
        }
        let n_in = n_in.ok_or_else(|| CircuitError::Syntax(1, "missing qubits header".into()))?;
        let circuit = Circuit { n_in, instructions };
        circuit.validate().map_err(|e| {
            let pos = position_of(&e);
            e.at(lines_of.get(pos).copied().unwrap_or(0))
        })?;
        Ok(circuit)
    }

    // ---- compilation ----

    /// Compile a (non-adaptive) circuit to its Stinespring dilation.
    ///
    /// A `measure` whose bit is never consumed is a classical output wire:
    /// it compiles as a dephasing and the output is flagged classical.
    /// Anything genuinely adaptive is an error; rewrite first.
    pub fn compile(&self) -> Result<CompiledCircuit, CircuitError> {
        for (pos, instr) in self.instructions.iter().enumerate() {
            match instr {
                Instruction::ClassicalAnd(..) => {
                    return Err(CircuitError::OutsideRestrictedClass(pos))
                }
                Instruction::ClassicalNot(..)
                | Instruction::ClassicalCnot(..)
                | Instruction::RandBit(..)
                | Instruction::PauliCtrl(..) => return Err(CircuitError::Adaptive(pos)),
                _ => {}
            }
        }
        // Total dilation width: every prep, dephasing ancilla and measurement
        // copy gets a physical wire.
        let mut total = self.n_in;
        for instr in &self.instructions {
            total += match instr {
                Instruction::PrepZero => 1,
                Instruction::PrepChaotic => 2,
                Instruction::Dephase(_) | Instruction::Measure(..) => 1,
                _ => 0,
            };
        }

        let mut phys: Vec<usize> = (0..self.n_in).collect();
        let mut status: Vec<WireStatus> = vec![WireStatus::Live; self.n_in];
        let mut bit_of: Vec<Option<String>> = vec![None; self.n_in];
        let mut next = self.n_in;
        let mut env: Vec<usize> = Vec::new();
        let mut u = CliffordUnitary::identity(total);
        for instr in &self.instructions {
            match instr {
                Instruction::PrepZero => {
                    phys.push(next);
                    status.push(WireStatus::Live);
                    bit_of.push(None);
                    next += 1;
                }
                Instruction::PrepChaotic => {
                    let w = next;
                    let partner = next + 1;
                    next += 2;
                    u.apply_gate(Gate::H(w));
                    u.apply_gate(Gate::Cnot(w, partner));
                    phys.push(w);
                    status.push(WireStatus::Live);
                    bit_of.push(None);
                    env.push(partner);
                }
                Instruction::Gate(g) => {
                    let mapped = match *g {
                        Gate::H(q) => Gate::H(phys[q]),
                        Gate::S(q) => Gate::S(phys[q]),
                        Gate::X(q) => Gate::X(phys[q]),
                        Gate::Y(q) => Gate::Y(phys[q]),
                        Gate::Z(q) => Gate::Z(phys[q]),
                        Gate::Cz(a, b) => Gate::Cz(phys[a], phys[b]),
                        Gate::Cnot(a, b) => Gate::Cnot(phys[a], phys[b]),
                    };
                    u.apply_gate(mapped);
                }
                Instruction::Dephase(q) => {
                    let w = next;
                    next += 1;
                    u.apply_gate(Gate::Cnot(phys[*q], w));
                    env.push(w);
                }
                Instruction::Discard(q) => {
                    env.push(phys[*q]);
                    status[*q] = WireStatus::Dead;
                }
                Instruction::Measure(q, b) => {
                    let w = next;
                    next += 1;
                    u.apply_gate(Gate::Cnot(phys[*q], w));
                    env.push(w);
                    status[*q] = WireStatus::Classical;
                    bit_of[*q] = Some(b.clone());
                }
                _ => unreachable!("adaptive instructions rejected above"),
            }
        }
        debug_assert_eq!(next, total);

        let mut outputs: Vec<usize> = Vec::new();
        let mut classical_outputs: Vec<bool> = Vec::new();
        let mut output_bits: Vec<Option<String>> = Vec::new();
        for (alloc, &st) in status.iter().enumerate() {
            if st != WireStatus::Dead {
                outputs.push(phys[alloc]);
                classical_outputs.push(st == WireStatus::Classical);
                output_bits.push(bit_of[alloc].clone());
            }
        }
        let n_out = outputs.len();
        let mut perm = vec![0usize; total];
        for (idx, &w) in outputs.iter().chain(env.iter()).enumerate() {
            perm[w] = idx;
        }
        let u = CliffordUnitary::permutation(&perm).compose(&u)?;
        let channel = StinespringForm::new(self.n_in, n_out, env.len(), u)?;
        Ok(CompiledCircuit {
            channel,
            classical_outputs,
            output_bits,
        })
    }

    // ---- restricted-adaptivity rewrite ----

    /// Rewrite measurements, affine classical processing and Pauli controls
    /// into a non-adaptive circuit representing the same channel.
    ///
    /// Classical wires become dephased qubit wires (a measurement dephases in
    /// place and the wire carries the bit from then on), `randbit` becomes a
    /// chaotic preparation, affine bit operations become X/CNOT gates and
    /// classical Pauli controls become the corresponding controlled-Pauli
    /// gates.
    pub fn rewrite_adaptive(&self) -> Result<Circuit, CircuitError> {
        let mut out: Vec<Instruction> = Vec::new();
        let mut old2new: Vec<usize> = (0..self.n_in).collect();
        let mut next = self.n_in;
        let mut bit_wire: HashMap<String, usize> = HashMap::new();
        for (pos, instr) in self.instructions.iter().enumerate() {
            match instr {
                Instruction::PrepZero => {
                    out.push(Instruction::PrepZero);
                    old2new.push(next);
                    next += 1;
                }
                Instruction::PrepChaotic => {
                    out.push(Instruction::PrepChaotic);
                    old2new.push(next);
                    next += 1;
                }
                Instruction::Gate(g) => {
                    let mapped = match *g {
                        Gate::H(q) => Gate::H(old2new[q]),
                        Gate::S(q) => Gate::S(old2new[q]),
                        Gate::X(q) => Gate::X(old2new[q]),
                        Gate::Y(q) => Gate::Y(old2new[q]),
                        Gate::Z(q) => Gate::Z(old2new[q]),
                        Gate::Cz(a, b) => Gate::Cz(old2new[a], old2new[b]),
                        Gate::Cnot(a, b) => Gate::Cnot(old2new[a], old2new[b]),
                    };
                    out.push(Instruction::Gate(mapped));
                }
                Instruction::Dephase(q) => out.push(Instruction::Dephase(old2new[*q])),
                Instruction::Discard(q) => out.push(Instruction::Discard(old2new[*q])),
                Instruction::Measure(q, b) => {
                    let w = old2new[*q];
                    out.push(Instruction::Dephase(w));
                    bit_wire.insert(b.clone(), w);
                }
                Instruction::RandBit(b) => {
                    out.push(Instruction::PrepChaotic);
                    bit_wire.insert(b.clone(), next);
                    next += 1;
                }
                Instruction::ClassicalNot(b) => {
                    out.push(Instruction::Gate(Gate::X(bit_wire[b])));
                }
                Instruction::ClassicalCnot(s, d) => {
                    out.push(Instruction::Gate(Gate::Cnot(bit_wire[s], bit_wire[d])));
                }
                Instruction::ClassicalAnd(..) => {
                    return Err(CircuitError::OutsideRestrictedClass(pos));
                }
                Instruction::PauliCtrl(b, letter, q) => {
                    let c = bit_wire[b];
                    let t = old2new[*q];
                    match letter {
                        PauliLetter::X => out.push(Instruction::Gate(Gate::Cnot(c, t))),
                        PauliLetter::Z => out.push(Instruction::Gate(Gate::Cz(c, t))),
                        PauliLetter::Y => {
                            // controlled-Y = (I (x) S) CX (I (x) S†)
                            out.push(Instruction::Gate(Gate::S(t)));
                            out.push(Instruction::Gate(Gate::Z(t)));
                            out.push(Instruction::Gate(Gate::Cnot(c, t)));
                            out.push(Instruction::Gate(Gate::S(t)));
                        }
                        PauliLetter::I => {}
                    }
                }
            }
        }
        Circuit::new(self.n_in, out)
    }
}

fn position_of(e: &CircuitError) -> usize {
    use CircuitError::*;
    match e {
        Syntax(p, _) | DeadWire(p, _) | RepeatedIndex(p, _) | DuplicateBit(p, _)
        | UnknownBit(p, _) | Adaptive(p) | OutsideRestrictedClass(p) => *p,
        _ => 0,
    }
}

/// Result of compiling a circuit: the channel plus per-output classical
/// flags (and bit names) for measured wires kept as outputs.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    pub channel: StinespringForm,
    pub classical_outputs: Vec<bool>,
    pub output_bits: Vec<Option<String>>,
}
