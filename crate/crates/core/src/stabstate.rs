//! Mixed and pure stabilizer states as signed stabilizer groups.
//!
//! A state on `n` qubits is a list of `k` independent, pairwise commuting
//! Pauli observables whose group avoids `-I`; `k = n` is a pure state and
//! `k = 0` the chaotic state. The canonical form is the unique reduced
//! row-echelon tableau over the 2n GF(2) columns, X block before Z block,
//! with signs carried exactly through the row multiplications.

use crate::clifford::{sweep_to_targets, CliffordUnitary, Target};
use crate::gf2::{nullspace_gf2, solve_gf2, BitVec};
use crate::pauli::{PauliError, PauliLetter, PauliOperator};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("generator {0} acts on {1} qubits, expected {2}")]
    GeneratorSize(String, usize, usize),
    #[error("generator {0} is not hermitian")]
    NotHermitian(String),
    #[error("generators {0} and {1} anticommute")]
    AnticommutingPair(String, String),
    #[error("stabilizer group contains -I")]
    ContainsMinusI,
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("qubit index {0} out of range for {1} qubits")]
    IndexOutOfRange(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("tableau parse error at line {0}: {1}")]
    TableauParse(usize, String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// GF(2) column of a tableau: X or Z support of one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Col {
    X(usize),
    Z(usize),
}

pub(crate) fn col_bit(p: &PauliOperator, col: Col) -> bool {
    match col {
        Col::X(q) => p.x_bit(q),
        Col::Z(q) => p.z_bit(q),
    }
}

/// In-place reduced row echelon form over the given column order.
///
/// Returns the number of pivot rows; rows `0..rank` end up in pivot order and
/// fully reduced, rows `rank..` have zero support on every listed column.
pub(crate) fn rref_in_place(rows: &mut [PauliOperator], cols: &[Col]) -> usize {
    let mut next = 0;
    for &col in cols {
        let Some(r) = (next..rows.len()).find(|&r| col_bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(next, r);
        for r2 in 0..rows.len() {
            if r2 != next && col_bit(&rows[r2], col) {
                rows[r2] = rows[r2].multiply(&rows[next]).expect("sizes match");
            }
        }
        next += 1;
    }
    next
}

pub(crate) fn x_major_cols(n: usize) -> Vec<Col> {
    (0..n).map(Col::X).chain((0..n).map(Col::Z)).collect()
}

/// Affine subspace of GF(2)^n: `offset + span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSupport {
    pub offset: BitVec,
    pub basis: Vec<BitVec>,
}

impl AffineSupport {
    /// Enumerate all member bit strings (for small subspaces).
    pub fn members(&self) -> Vec<BitVec> {
        let mut out = vec![self.offset.clone()];
        for b in &self.basis {
            let mut doubled = Vec::with_capacity(out.len() * 2);
            for v in &out {
                doubled.push(v.clone());
                let mut w = v.clone();
                w.xor_with(b);
                doubled.push(w);
            }
            out = doubled;
        }
        out
    }
}

/// A mixed stabilizer state: `k` independent commuting Pauli observables on
/// `n` qubits, `-I` excluded.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerGroupState {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroupState {
    /// Validates hermiticity, commutation and independence; dependent but
    /// consistent generators are deduplicated, a dependent product equal to
    /// `-I` is rejected.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self, StateError> {
        for g in &generators {
            if g.num_qubits() != n {
                return Err(StateError::GeneratorSize(g.to_string(), g.num_qubits(), n));
            }
            if !g.is_hermitian() {
                return Err(StateError::NotHermitian(g.to_string()));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes(&generators[j])? {
                    return Err(StateError::AnticommutingPair(
                        generators[i].to_string(),
                        generators[j].to_string(),
                    ));
                }
            }
        }
        let cols = x_major_cols(n);
        let mut echelon: Vec<PauliOperator> = Vec::new();
        let mut kept: Vec<PauliOperator> = Vec::new();
        for g in generators {
            let mut r = g.clone();
            for row in &echelon {
                let pivot = cols
                    .iter()
                    .copied()
                    .find(|&c| col_bit(row, c))
                    .expect("echelon rows are non-trivial");
                if col_bit(&r, pivot) {
                    r = r.multiply(row)?;
                }
            }
            if r.is_identity_support() {
                match r.phase() {
                    0 => continue, // duplicate of the group so far
                    2 => return Err(StateError::ContainsMinusI),
                    _ => unreachable!("commuting hermitian products stay hermitian"),
                }
            }
            // keep echelon reduced so pivots stay distinct
            let my_pivot = cols
                .iter()
                .copied()
                .find(|&c| col_bit(&r, c))
                .expect("non-trivial row");
            for row in echelon.iter_mut() {
                if col_bit(row, my_pivot) {
                    *row = row.multiply(&r)?;
                }
            }
            echelon.push(r);
            kept.push(g);
        }
        Ok(StabilizerGroupState { n, generators: kept })
    }

    /// Infer the qubit count from the first generator.
    pub fn from_generators(generators: Vec<PauliOperator>) -> Result<Self, StateError> {
        let n = generators
            .first()
            .map(|g| g.num_qubits())
            .ok_or(StateError::InvalidArgument(
                "cannot infer qubit count from an empty generator list; use new(n, ..)",
            ))?;
        Self::new(n, generators)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    // ---- named states ----

    /// `|0^n>`.
    pub fn zero(n: usize) -> Self {
        StabilizerGroupState {
            n,
            generators: (0..n).map(|q| PauliOperator::single(n, q, PauliLetter::Z)).collect(),
        }
    }

    /// Chaotic (maximally mixed) state on `n` qubits.
    pub fn chaotic(n: usize) -> Self {
        StabilizerGroupState {
            n,
            generators: Vec::new(),
        }
    }

    /// `|+>` on one qubit.
    pub fn plus() -> Self {
        StabilizerGroupState {
            n: 1,
            generators: vec![PauliOperator::single(1, 0, PauliLetter::X)],
        }
    }

    /// Maximally entangled two-qubit state, stabilized by `{XX, ZZ}`.
    pub fn bell() -> Self {
        StabilizerGroupState {
            n: 2,
            generators: vec!["+XX".parse().unwrap(), "+ZZ".parse().unwrap()],
        }
    }

    /// GHZ state on `n >= 1` qubits: Z-chains plus the all-X row.
    pub fn ghz(n: usize) -> Result<Self, StateError> {
        if n == 0 {
            return Err(StateError::InvalidArgument("ghz requires at least one qubit"));
        }
        let mut gens = Vec::new();
        for q in 0..n - 1 {
            let mut z = BitVec::zeros(n);
            z.set(q, true);
            z.set(q + 1, true);
            gens.push(PauliOperator::from_bits(BitVec::zeros(n), z, 0));
        }
        let mut x = BitVec::zeros(n);
        for q in 0..n {
            x.set(q, true);
        }
        gens.push(PauliOperator::from_bits(x, BitVec::zeros(n), 0));
        Ok(StabilizerGroupState { n, generators: gens })
    }

    /// Maximally correlated two-qubit state `(|00><00| + |11><11|)/2`,
    /// stabilized by `{ZZ}`.
    pub fn sigma() -> Self {
        StabilizerGroupState {
            n: 2,
            generators: vec!["+ZZ".parse().unwrap()],
        }
    }

    // ---- operations ----

    /// Unique canonical tableau; idempotent and invariant under row operations.
    pub fn canonicalize(&self) -> StabilizerGroupState {
        let mut rows = self.generators.clone();
        let cols = x_major_cols(self.n);
        let rank = rref_in_place(&mut rows, &cols);
        debug_assert_eq!(rank, rows.len(), "valid states have independent generators");
        StabilizerGroupState {
            n: self.n,
            generators: rows,
        }
    }

    /// Same group (canonical forms equal)?
    pub fn equiv(&self, other: &StabilizerGroupState) -> bool {
        self.n == other.n && self.canonicalize().generators == other.canonicalize().generators
    }

    /// `+1` if `P` in the group, `-1` if `-P` is, `0` otherwise; equals the
    /// dense expectation `Tr(rho P)`.
    pub fn expectation_pauli(&self, p: &PauliOperator) -> Result<i8, StateError> {
        if p.num_qubits() != self.n {
            return Err(StateError::SizeMismatch(p.num_qubits(), self.n));
        }
        if !p.is_hermitian() {
            return Err(StateError::Pauli(PauliError::NotHermitian));
        }
        let canon = self.canonicalize();
        let cols = x_major_cols(self.n);
        let mut q = p.clone();
        for row in &canon.generators {
            let pivot = cols
                .iter()
                .copied()
                .find(|&c| col_bit(row, c))
                .expect("non-trivial row");
            if col_bit(&q, pivot) {
                q = q.multiply(row)?;
            }
        }
        if !q.is_identity_support() {
            return Ok(0);
        }
        // q = P * g for some group element g; P in S iff q = +I.
        Ok(match q.phase() {
            0 => 1,
            2 => -1,
            _ => unreachable!("hermitian reduction"),
        })
    }

    pub fn tensor(&self, other: &StabilizerGroupState) -> StabilizerGroupState {
        let n = self.n + other.n;
        let left: Vec<usize> = (0..self.n).collect();
        let right: Vec<usize> = (self.n..n).collect();
        let mut gens: Vec<PauliOperator> =
            self.generators.iter().map(|g| g.embedded(n, &left)).collect();
        gens.extend(other.generators.iter().map(|g| g.embedded(n, &right)));
        StabilizerGroupState { n, generators: gens }
    }

    /// Restrict to the subgroup supported on `keep` and drop the other qubits.
    /// Agrees with the dense partial trace.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<StabilizerGroupState, StateError> {
        for &q in keep {
            if q >= self.n {
                return Err(StateError::IndexOutOfRange(q, self.n));
            }
        }
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let cols: Vec<Col> = traced
            .iter()
            .flat_map(|&q| [Col::X(q), Col::Z(q)])
            .collect();
        let mut rows = self.generators.clone();
        let rank = rref_in_place(&mut rows, &cols);
        let sub: Vec<PauliOperator> = rows[rank..]
            .iter()
            .map(|g| g.restricted(keep))
            .collect();
        Ok(StabilizerGroupState {
            n: keep.len(),
            generators: sub,
        }
        .canonicalize())
    }

    /// Conjugate every generator.
    pub fn apply_clifford(&self, u: &CliffordUnitary) -> Result<StabilizerGroupState, StateError> {
        if u.num_qubits() != self.n {
            return Err(StateError::SizeMismatch(u.num_qubits(), self.n));
        }
        Ok(StabilizerGroupState {
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|g| u.conjugate_pauli(g).expect("sizes match"))
                .collect(),
        })
    }

    /// Pure state on `2n - k` qubits whose trace over the appended `n - k`
    /// environment qubits gives back this state.
    pub fn purify(&self) -> StabilizerGroupState {
        let n = self.n;
        let k = self.rank();
        let canon = self.canonicalize();
        let targets: Vec<Target> = canon
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| Target::Single {
                op: g.clone(),
                wire: i,
            })
            .collect();
        // V sends generator i to Z_i; U = V^{-1} realizes the state as
        // U (|0^k> (x) chi^{n-k}) U†.
        let v = CliffordUnitary::from_gates(n, &sweep_to_targets(n, targets, true))
            .expect("sweep emits valid gates");
        let u = v.inverse();
        let total = 2 * n - k;
        let sys: Vec<usize> = (0..n).collect();
        let mut gens: Vec<PauliOperator> = canon
            .generators
            .iter()
            .map(|g| g.embedded(total, &sys))
            .collect();
        for j in k..n {
            let env = n + (j - k);
            let a = u
                .conjugate_pauli(&PauliOperator::single(n, j, PauliLetter::X))
                .unwrap()
                .embedded(total, &sys);
            let b = u
                .conjugate_pauli(&PauliOperator::single(n, j, PauliLetter::Z))
                .unwrap()
                .embedded(total, &sys);
            gens.push(
                a.multiply(&PauliOperator::single(total, env, PauliLetter::X))
                    .unwrap(),
            );
            gens.push(
                b.multiply(&PauliOperator::single(total, env, PauliLetter::Z))
                    .unwrap(),
            );
        }
        let out = StabilizerGroupState {
            n: total,
            generators: gens,
        };
        debug_assert!(out.is_pure());
        out
    }

    /// For classical (all-Z) states, the affine subspace the state is uniform
    /// over; `None` when any generator has X support.
    pub fn classical_affine_support(&self) -> Option<AffineSupport> {
        if self.generators.iter().any(|g| !g.x_bits().is_zero()) {
            return None;
        }
        let rows: Vec<BitVec> = self.generators.iter().map(|g| g.z_bits().clone()).collect();
        let rhs: Vec<bool> = self
            .generators
            .iter()
            .map(|g| g.sign().expect("validated hermitian") < 0)
            .collect();
        let offset = solve_gf2(&rows, &rhs, self.n).expect("-I-free group is consistent");
        Some(AffineSupport {
            offset,
            basis: nullspace_gf2(&rows, self.n),
        })
    }

    /// If the two states differ only by generator signs, a Pauli `P` with
    /// `other = P self P†`; `None` when the unsigned tableaux differ.
    pub fn is_similar(&self, other: &StabilizerGroupState) -> Option<PauliOperator> {
        if self.n != other.n {
            return None;
        }
        let a = self.canonicalize();
        let b = other.canonicalize();
        if a.rank() != b.rank() {
            return None;
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (ga, gb) in a.generators.iter().zip(&b.generators) {
            if ga.x_bits() != gb.x_bits() || ga.z_bits() != gb.z_bits() {
                return None;
            }
            // symp(P, G) as a functional of P's (x|z) bits is (z_G | x_G)
            rows.push(ga.z_bits().concat(ga.x_bits()));
            rhs.push(ga.phase() != gb.phase());
        }
        let bits = solve_gf2(&rows, &rhs, 2 * self.n).expect("independent constraints");
        let x = bits.gather(&(0..self.n).collect::<Vec<_>>());
        let z = bits.gather(&(self.n..2 * self.n).collect::<Vec<_>>());
        Some(PauliOperator::from_bits(x, z, 0).unsigned())
    }

    // ---- text format ----

    /// One signed Pauli string per line, with a `qubits <n>` header so that
    /// low-rank states are unambiguous. `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<StabilizerGroupState, StateError> {
        let mut n: Option<usize> = None;
        let mut gens: Vec<PauliOperator> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("qubits") {
                let count: usize = rest.trim().parse().map_err(|_| {
                    StateError::TableauParse(lineno + 1, "invalid qubit count".into())
                })?;
                if n.is_some() {
                    return Err(StateError::TableauParse(
                        lineno + 1,
                        "duplicate qubits header".into(),
                    ));
                }
                n = Some(count);
                continue;
            }
            let p: PauliOperator = line
                .parse()
                .map_err(|e: PauliError| StateError::TableauParse(lineno + 1, e.to_string()))?;
            gens.push(p);
        }
        match n {
            Some(n) => Self::new(n, gens),
            None => Self::from_generators(gens),
        }
    }
}

impl std::fmt::Debug for StabilizerGroupState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StabilizerGroupState(n={}, k={}) [", self.n, self.rank())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}
