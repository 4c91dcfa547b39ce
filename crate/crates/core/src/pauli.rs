//! Phased Pauli operators on `n` qubits.
//!
//! An operator is stored as two bit vectors plus a power of `i`:
//!
//! ```text
//!     P = i^phase  *  prod_j  X_j^{x_j} Z_j^{z_j}
//! ```
//!
//! with the X factor to the left of the Z factor on every qubit. Under this
//! convention the unsigned part is a real matrix, `Y = i * XZ` carries
//! `phase = 1`, and an operator is Hermitian exactly when `phase` and the
//! number of Y positions have the same parity. All group operations are
//! word-parallel over the packed bits.

use crate::gf2::BitVec;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid pauli string {0:?}: {1}")]
    Parse(String, &'static str),
    #[error("operator is not hermitian")]
    NotHermitian,
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }
}

/// A phased `n`-qubit Pauli operator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: BitVec,
    z: BitVec,
    /// Exponent of `i` in the canonical ordering, in `{0,1,2,3}`.
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// Build from explicit bit vectors; `phase` is reduced mod 4.
    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z supports must have equal length");
        PauliOperator {
            n: x.len(),
            x,
            z,
            phase: phase & 3,
        }
    }

    /// The Hermitian single-letter operator `letter` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: PauliLetter) -> Self {
        assert!(q < n, "qubit index out of range");
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        let (xb, zb) = letter.bits();
        x.set(q, xb);
        z.set(q, zb);
        // Y = i * XZ
        let phase = if xb && zb { 1 } else { 0 };
        PauliOperator { n, x, z, phase }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x.get(q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z.get(q)
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x.get(q), self.z.get(q))
    }

    /// Number of qubits where the operator acts as Y.
    pub fn y_count(&self) -> usize {
        let mut c = 0;
        for q in 0..self.n {
            if self.x.get(q) && self.z.get(q) {
                c += 1;
            }
        }
        c
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        (0..self.n)
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .count()
    }

    /// True when x = z = 0, i.e. the operator is `i^phase * I`.
    pub fn is_identity_support(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_support() && self.phase == 0
    }

    /// Hermiticity is decidable from the bits alone: `phase` must match the
    /// Y-count parity.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.y_count()).is_multiple_of(2)
    }

    /// Sign of a Hermitian operator: `+1` or `-1`.
    pub fn sign(&self) -> Result<i8, PauliError> {
        if !self.is_hermitian() {
            return Err(PauliError::NotHermitian);
        }
        Ok(if (self.phase as usize + 3 * self.y_count()).is_multiple_of(4) {
            1
        } else {
            -1
        })
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + 2) & 3;
        p
    }

    /// Complex conjugate in the computational basis (the unsigned part is real,
    /// so only the phase flips).
    pub fn conjugated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (4 - p.phase) & 3;
        p
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        if self.n != other.n {
            return Err(PauliError::SizeMismatch(self.n, other.n));
        }
        // Moving other's X block through self's Z block picks up a sign per
        // overlap; everything else multiplies freely.
        let swaps = self.z.and_parity(&other.x);
        let mut x = self.x.clone();
        x.xor_with(&other.x);
        let mut z = self.z.clone();
        z.xor_with(&other.z);
        let phase = (self.phase + other.phase + if swaps { 2 } else { 0 }) & 3;
        Ok(PauliOperator {
            n: self.n,
            x,
            z,
            phase,
        })
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        if self.n != other.n {
            return Err(PauliError::SizeMismatch(self.n, other.n));
        }
        Ok(self.x.and_parity(&other.z) == other.x.and_parity(&self.z))
    }

    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            n: self.n + other.n,
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) & 3,
        }
    }

    /// Embed into `n_total` qubits, placing qubit `j` at `positions[j]`.
    pub fn embedded(&self, n_total: usize, positions: &[usize]) -> PauliOperator {
        assert_eq!(positions.len(), self.n);
        PauliOperator {
            n: n_total,
            x: self.x.scatter(n_total, positions),
            z: self.z.scatter(n_total, positions),
            phase: self.phase,
        }
    }

    /// Restriction to the listed qubits; the operator must be trivial elsewhere
    /// for this to preserve the dense semantics, which callers ensure.
    pub fn restricted(&self, positions: &[usize]) -> PauliOperator {
        PauliOperator {
            n: positions.len(),
            x: self.x.gather(positions),
            z: self.z.gather(positions),
            phase: self.phase,
        }
    }

    /// Unsigned copy (phase adjusted so the operator is Hermitian with + sign).
    pub fn unsigned(&self) -> PauliOperator {
        let mut p = self.clone();
        p.phase = (p.y_count() % 4) as u8;
        p
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Displayed sign times the displayed letters: each Y letter carries an
        // i of its own, so the prefix exponent is phase minus the Y count.
        let prefix = (self.phase as usize + 3 * self.y_count()) % 4;
        f.write_str(match prefix {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.n {
            f.write_str(match self.letter(q) {
                PauliLetter::I => "I",
                PauliLetter::X => "X",
                PauliLetter::Y => "Y",
                PauliLetter::Z => "Z",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(PauliError::Parse(s.into(), "empty string"));
        }
        let (prefix, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1u8, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0u8, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2u8, r)
        } else {
            (0u8, s)
        };
        let mut x = Vec::new();
        let mut z = Vec::new();
        let mut ys = 0usize;
        for c in rest.chars() {
            let letter = match c {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                _ => return Err(PauliError::Parse(s.into(), "invalid character")),
            };
            if letter == PauliLetter::Y {
                ys += 1;
            }
            let (xb, zb) = letter.bits();
            x.push(xb);
            z.push(zb);
        }
        Ok(PauliOperator::from_bits(
            BitVec::from_bools(&x),
            BitVec::from_bools(&z),
            ((prefix as usize + ys) % 4) as u8,
        ))
    }
}

/// Convenience parser that panics on malformed input; for literals in tests
/// and internal tables.
pub fn pauli(s: &str) -> PauliOperator {
    s.parse().expect("valid pauli literal")
}
