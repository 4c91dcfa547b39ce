//! Clifford unitaries as symplectic tableaux with sign tracking.
//!
//! A Clifford `U` on `n` qubits is stored by the images `U X_j U†` and
//! `U Z_j U†`, each a Hermitian [`PauliOperator`]. Tableaux identify unitaries
//! up to global phase; every equality below means tableau equality.

use crate::gf2::BitVec;
use crate::pauli::{PauliError, PauliOperator};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("qubit index {0} out of range for {1} qubits")]
    IndexOutOfRange(usize, usize),
    #[error("repeated qubit index {0}")]
    RepeatedIndex(usize),
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Elementary Clifford gate on named wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn validate(&self, n: usize) -> Result<(), TableauError> {
        let check = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(TableauError::IndexOutOfRange(q, n))
            }
        };
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => check(q),
            Gate::Cz(a, b) | Gate::Cnot(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(TableauError::RepeatedIndex(a));
                }
                Ok(())
            }
        }
    }

    /// Conjugate `p` by this gate in place: `p <- g p g†`.
    ///
    /// Phase bookkeeping follows the `i^phase * X^x Z^z` convention; each rule
    /// below is the commutation count of the per-qubit factors.
    pub fn conjugate(&self, p: &mut PauliOperator) {
        let (mut x, mut z, mut phase) = (p.x_bits().clone(), p.z_bits().clone(), p.phase());
        match *self {
            Gate::H(q) => {
                let (xb, zb) = (x.get(q), z.get(q));
                if xb && zb {
                    phase = (phase + 2) & 3;
                }
                x.set(q, zb);
                z.set(q, xb);
            }
            Gate::S(q) => {
                if x.get(q) {
                    z.set(q, !z.get(q));
                    phase = (phase + 1) & 3;
                }
            }
            Gate::X(q) => {
                if z.get(q) {
                    phase = (phase + 2) & 3;
                }
            }
            Gate::Y(q) => {
                if x.get(q) != z.get(q) {
                    phase = (phase + 2) & 3;
                }
            }
            Gate::Z(q) => {
                if x.get(q) {
                    phase = (phase + 2) & 3;
                }
            }
            Gate::Cz(a, b) => {
                if x.get(a) && x.get(b) {
                    phase = (phase + 2) & 3;
                }
                let (xa, xb) = (x.get(a), x.get(b));
                z.set(a, z.get(a) ^ xb);
                z.set(b, z.get(b) ^ xa);
            }
            Gate::Cnot(c, t) => {
                x.set(t, x.get(t) ^ x.get(c));
                z.set(c, z.get(c) ^ z.get(t));
            }
        }
        *p = PauliOperator::from_bits(x, z, phase);
    }

    /// Gate sequence realizing the inverse, in application order.
    pub fn inverse_gates(&self) -> Vec<Gate> {
        match *self {
            // S† = Z S (apply S, then Z)
            Gate::S(q) => vec![Gate::S(q), Gate::Z(q)],
            g => vec![g],
        }
    }

    /// Circuit-text mnemonic, e.g. `"cnot 0 1"`.
    pub fn mnemonic(&self) -> String {
        match *self {
            Gate::H(q) => format!("h {q}"),
            Gate::S(q) => format!("s {q}"),
            Gate::X(q) => format!("x {q}"),
            Gate::Y(q) => format!("y {q}"),
            Gate::Z(q) => format!("z {q}"),
            Gate::Cz(a, b) => format!("cz {a} {b}"),
            Gate::Cnot(c, t) => format!("cnot {c} {t}"),
        }
    }
}

/// Clifford unitary as the signed images of the `X_j` and `Z_j` generators.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordUnitary {
    n: usize,
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
}

impl CliffordUnitary {
    pub fn identity(n: usize) -> Self {
        CliffordUnitary {
            n,
            x_images: (0..n)
                .map(|q| PauliOperator::single(n, q, crate::pauli::PauliLetter::X))
                .collect(),
            z_images: (0..n)
                .map(|q| PauliOperator::single(n, q, crate::pauli::PauliLetter::Z))
                .collect(),
        }
    }

    pub fn from_gate(gate: Gate, n: usize) -> Result<Self, TableauError> {
        gate.validate(n)?;
        let mut u = CliffordUnitary::identity(n);
        u.apply_gate(gate);
        Ok(u)
    }

    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Self, TableauError> {
        let mut u = CliffordUnitary::identity(n);
        for g in gates {
            g.validate(n)?;
            u.apply_gate(*g);
        }
        Ok(u)
    }

    /// Left-multiply by a gate: `U <- g U`.
    pub fn apply_gate(&mut self, gate: Gate) {
        for p in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            gate.conjugate(p);
        }
    }

    /// Left-multiply by a Pauli: `U <- P U` (conjugation flips signs of
    /// anticommuting images).
    pub fn apply_pauli(&mut self, p: &PauliOperator) {
        for img in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            if !p.commutes(img).expect("sizes match") {
                *img = img.negated();
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, j: usize) -> &PauliOperator {
        &self.x_images[j]
    }

    pub fn z_image(&self, j: usize) -> &PauliOperator {
        &self.z_images[j]
    }

    /// Build directly from images. Checks the symplectic condition and that
    /// every image is a Pauli observable.
    pub fn from_images(
        x_images: Vec<PauliOperator>,
        z_images: Vec<PauliOperator>,
    ) -> Result<Self, TableauError> {
        let n = x_images.len();
        if z_images.len() != n {
            return Err(TableauError::SizeMismatch(n, z_images.len()));
        }
        let u = CliffordUnitary {
            n,
            x_images,
            z_images,
        };
        if !u.is_valid() {
            return Err(TableauError::Pauli(PauliError::NotHermitian));
        }
        Ok(u)
    }

    /// Symplectic condition: images reproduce the generator (anti)commutation
    /// relations and are Hermitian.
    pub fn is_valid(&self) -> bool {
        let all = |p: &PauliOperator| p.num_qubits() == self.n && p.is_hermitian();
        if !self.x_images.iter().all(all) || !self.z_images.iter().all(all) {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let xx = self.x_images[i].commutes(&self.x_images[j]).unwrap();
                let zz = self.z_images[i].commutes(&self.z_images[j]).unwrap();
                let xz = self.x_images[i].commutes(&self.z_images[j]).unwrap();
                if !xx || !zz || xz != (i != j) {
                    return false;
                }
            }
        }
        // full rank is implied by the nondegenerate pairing above
        true
    }

    /// `U P U†`, exact including phase.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<PauliOperator, TableauError> {
        if p.num_qubits() != self.n {
            return Err(TableauError::SizeMismatch(p.num_qubits(), self.n));
        }
        let mut acc = PauliOperator::from_bits(
            BitVec::zeros(self.n),
            BitVec::zeros(self.n),
            p.phase(),
        );
        for q in 0..self.n {
            if p.x_bit(q) {
                acc = acc.multiply(&self.x_images[q])?;
            }
            if p.z_bit(q) {
                acc = acc.multiply(&self.z_images[q])?;
            }
        }
        Ok(acc)
    }

    /// Composition `U ∘ V` (apply `V` first).
    pub fn compose(&self, v: &CliffordUnitary) -> Result<CliffordUnitary, TableauError> {
        if self.n != v.n {
            return Err(TableauError::SizeMismatch(self.n, v.n));
        }
        Ok(CliffordUnitary {
            n: self.n,
            x_images: v
                .x_images
                .iter()
                .map(|p| self.conjugate_pauli(p).expect("sizes match"))
                .collect(),
            z_images: v
                .z_images
                .iter()
                .map(|p| self.conjugate_pauli(p).expect("sizes match"))
                .collect(),
        })
    }

    /// Inverse tableau via the symplectic transpose, with signs restored by
    /// conjugating each candidate preimage through `self`.
    pub fn inverse(&self) -> CliffordUnitary {
        let n = self.n;
        let unsigned_preimage = |want_x: bool, j: usize| {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for q in 0..n {
                if want_x {
                    x.set(q, self.z_images[q].z_bit(j));
                    z.set(q, self.x_images[q].z_bit(j));
                } else {
                    x.set(q, self.z_images[q].x_bit(j));
                    z.set(q, self.x_images[q].x_bit(j));
                }
            }
            let mut p = PauliOperator::from_bits(x, z, 0);
            p = p.unsigned();
            // fix sign: U p U† must be exactly +X_j (or +Z_j)
            let img = self.conjugate_pauli(&p).expect("sizes match");
            debug_assert!(img.weight() == 1);
            if img.sign().expect("hermitian image") < 0 {
                p = p.negated();
            }
            p
        };
        CliffordUnitary {
            n,
            x_images: (0..n).map(|j| unsigned_preimage(true, j)).collect(),
            z_images: (0..n).map(|j| unsigned_preimage(false, j)).collect(),
        }
    }

    /// Computational-basis transpose, again a Clifford: `U^T = conj(U^{-1})`,
    /// and conjugation on a tableau negates every image phase (the sign of an
    /// image flips exactly when its Y-count is odd).
    pub fn transpose(&self) -> CliffordUnitary {
        let inv = self.inverse();
        CliffordUnitary {
            n: inv.n,
            x_images: inv.x_images.iter().map(|p| p.conjugated()).collect(),
            z_images: inv.z_images.iter().map(|p| p.conjugated()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordUnitary::identity(self.n)
    }

    /// Wire permutation as a Clifford: `X_i -> X_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> CliffordUnitary {
        let n = perm.len();
        CliffordUnitary {
            n,
            x_images: (0..n)
                .map(|i| PauliOperator::single(n, perm[i], crate::pauli::PauliLetter::X))
                .collect(),
            z_images: (0..n)
                .map(|i| PauliOperator::single(n, perm[i], crate::pauli::PauliLetter::Z))
                .collect(),
        }
    }

    /// Embed into `n_total` qubits with wire `j` of `self` at `positions[j]`;
    /// identity on all other wires.
    pub fn embedded(&self, n_total: usize, positions: &[usize]) -> CliffordUnitary {
        assert_eq!(positions.len(), self.n);
        let mut u = CliffordUnitary::identity(n_total);
        for (j, &pos) in positions.iter().enumerate() {
            u.x_images[pos] = self.x_images[j].embedded(n_total, positions);
            u.z_images[pos] = self.z_images[j].embedded(n_total, positions);
        }
        u
    }

    /// Gate sequence recomposing to exactly this tableau, via a
    /// Gaussian-elimination sweep; O(n²) gates.
    pub fn synthesize(&self) -> Vec<Gate> {
        let targets: Vec<Target> = (0..self.n)
            .map(|j| Target::Pair {
                x_like: self.x_images[j].clone(),
                z_like: self.z_images[j].clone(),
                wire: j,
            })
            .collect();
        let forward = sweep_to_targets(self.n, targets, true);
        // forward reduces self to the identity; invert and reverse to rebuild
        let mut out = Vec::new();
        for g in forward.iter().rev() {
            out.extend(g.inverse_gates());
        }
        out
    }

    /// Random Clifford from a random gate word (mixing, not uniform).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordUnitary {
        let mut u = CliffordUnitary::identity(n);
        if n == 0 {
            return u;
        }
        let steps = 2 * n * n + 16;
        for _ in 0..steps {
            let q = rng.random_range(0..n);
            match rng.random_range(0..5) {
                0 => u.apply_gate(Gate::H(q)),
                1 => u.apply_gate(Gate::S(q)),
                2 => u.apply_gate(Gate::X(q)),
                3 => u.apply_gate(Gate::Z(q)),
                _ => {
                    if n > 1 {
                        let mut t = rng.random_range(0..n - 1);
                        if t >= q {
                            t += 1;
                        }
                        u.apply_gate(Gate::Cnot(q, t));
                    } else {
                        u.apply_gate(Gate::H(q));
                    }
                }
            }
        }
        u
    }
}

impl std::fmt::Debug for CliffordUnitary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CliffordUnitary on {} qubits:", self.n)?;
        for j in 0..self.n {
            writeln!(f, "  X{j} -> {}   Z{j} -> {}", self.x_images[j], self.z_images[j])?;
        }
        Ok(())
    }
}

/// All 24 single-qubit Clifford tableaux.
pub fn single_qubit_cliffords() -> Vec<CliffordUnitary> {
    let letters = ["+X", "-X", "+Y", "-Y", "+Z", "-Z"];
    let mut out = Vec::new();
    for xi in letters {
        for zi in letters {
            let x: PauliOperator = xi.parse().unwrap();
            let z: PauliOperator = zi.parse().unwrap();
            if !x.commutes(&z).unwrap() {
                out.push(CliffordUnitary::from_images(vec![x], vec![z]).unwrap());
            }
        }
    }
    debug_assert_eq!(out.len(), 24);
    out
}

/// A canonical destination for the sweep: send `x_like -> X_wire` and
/// `z_like -> Z_wire`, or a lone `op -> Z_wire`.
#[derive(Clone)]
pub(crate) enum Target {
    Pair {
        x_like: PauliOperator,
        z_like: PauliOperator,
        wire: usize,
    },
    Single {
        op: PauliOperator,
        wire: usize,
    },
}

#[derive(Clone, Copy)]
enum PlanItem {
    PairX(usize),
    PairZ(usize),
    Single(usize),
}

struct Sweep {
    n: usize,
    ops: Vec<PauliOperator>,
    gates: Vec<Gate>,
    /// wires with both X and Z placed
    fixed_pair: Vec<bool>,
    /// wires with only Z placed
    fixed_single: Vec<bool>,
    /// first op index that still needs conjugating
    active_from: usize,
}

impl Sweep {
    fn emit(&mut self, g: Gate) {
        for p in self.ops[self.active_from..].iter_mut() {
            g.conjugate(p);
        }
        self.gates.push(g);
    }

    fn is_free(&self, w: usize) -> bool {
        !self.fixed_pair[w] && !self.fixed_single[w]
    }

    fn has_support(&self, idx: usize, w: usize) -> bool {
        self.ops[idx].x_bit(w) || self.ops[idx].z_bit(w)
    }

    /// Reduce `ops[idx]` to (a sign times) `X_t`, using only free wires.
    fn place_as_x(&mut self, idx: usize, t: usize) {
        debug_assert!((0..self.n)
            .filter(|&w| self.has_support(idx, w))
            .all(|w| self.is_free(w)));
        if !self.has_support(idx, t) {
            let w = (0..self.n)
                .find(|&w| self.has_support(idx, w))
                .expect("independent operator has support");
            // SWAP(t, w)
            self.emit(Gate::Cnot(t, w));
            self.emit(Gate::Cnot(w, t));
            self.emit(Gate::Cnot(t, w));
        }
        if !self.ops[idx].x_bit(t) {
            self.emit(Gate::H(t));
        }
        for w in 0..self.n {
            if w == t || !self.has_support(idx, w) {
                continue;
            }
            if self.ops[idx].x_bit(w) && self.ops[idx].z_bit(w) {
                self.emit(Gate::S(w));
            } else if self.ops[idx].z_bit(w) {
                self.emit(Gate::H(w));
            }
            self.emit(Gate::Cnot(t, w));
        }
        if self.ops[idx].z_bit(t) {
            self.emit(Gate::S(t));
        }
    }

    /// Reduce `ops[idx]` to (a sign times) `Z_t` while preserving the already
    /// placed `X_t`.
    fn place_as_z_partner(&mut self, idx: usize, t: usize) {
        debug_assert!(self.ops[idx].z_bit(t), "partner must anticommute with X_t");
        for w in 0..self.n {
            if w == t || !self.has_support(idx, w) {
                continue;
            }
            debug_assert!(self.is_free(w));
            if self.ops[idx].x_bit(w) && self.ops[idx].z_bit(w) {
                self.emit(Gate::S(w));
            }
            if self.ops[idx].x_bit(w) {
                self.emit(Gate::H(w));
            }
            // pure Z at w: CNOT(w -> t) clears it and fixes X_t
            self.emit(Gate::Cnot(w, t));
        }
        if self.ops[idx].x_bit(t) {
            // sqrt-X on t maps (x,z) -> (x^z, z): Y_t -> Z_t, X_t -> X_t
            self.emit(Gate::H(t));
            self.emit(Gate::S(t));
            self.emit(Gate::H(t));
        }
    }

    /// Reduce `ops[idx]` to (a sign times) `Z_t`. The operator may carry
    /// Z-support on already placed single wires, which commutes with their
    /// placed `Z`s and is cleared at the end.
    fn place_as_lone_z(&mut self, idx: usize, t: usize) {
        debug_assert!(
            (0..self.n).any(|w| self.has_support(idx, w) && self.is_free(w)),
            "dependent single operator"
        );
        if !self.has_support(idx, t) {
            let w = (0..self.n)
                .find(|&w| self.has_support(idx, w) && self.is_free(w))
                .expect("free support exists");
            self.emit(Gate::Cnot(t, w));
            self.emit(Gate::Cnot(w, t));
            self.emit(Gate::Cnot(t, w));
        }
        if !self.ops[idx].x_bit(t) {
            self.emit(Gate::H(t));
        }
        for w in 0..self.n {
            if w == t || !self.is_free(w) || !self.has_support(idx, w) {
                continue;
            }
            if self.ops[idx].x_bit(w) && self.ops[idx].z_bit(w) {
                self.emit(Gate::S(w));
            } else if self.ops[idx].z_bit(w) {
                self.emit(Gate::H(w));
            }
            self.emit(Gate::Cnot(t, w));
        }
        if self.ops[idx].z_bit(t) {
            self.emit(Gate::S(t));
        }
        self.emit(Gate::H(t));
        for w in 0..self.n {
            if self.fixed_single[w] && self.ops[idx].z_bit(w) {
                self.emit(Gate::Cnot(w, t));
            }
        }
    }
}

/// Gaussian-elimination sweep: returns gates `g_1..g_m` such that conjugating
/// every listed operator by `g_m ∘ ... ∘ g_1` lands it on its target.
///
/// Callers must list operators with the symplectic relations of their targets
/// (pair partners anticommute, everything else commutes, all independent) and
/// must put all pairs before all singles. With `fix_signs` the inputs must be
/// Hermitian and the placed operators come out with `+` sign; without it,
/// signs are the caller's problem.
pub(crate) fn sweep_to_targets(n: usize, targets: Vec<Target>, fix_signs: bool) -> Vec<Gate> {
    let mut ops: Vec<PauliOperator> = Vec::new();
    let mut plan: Vec<(PlanItem, usize)> = Vec::new();
    let mut single_seen = false;
    for t in targets {
        match t {
            Target::Pair { x_like, z_like, wire } => {
                assert!(!single_seen, "pairs must precede singles");
                plan.push((PlanItem::PairX(ops.len()), wire));
                ops.push(x_like);
                plan.push((PlanItem::PairZ(ops.len()), wire));
                ops.push(z_like);
            }
            Target::Single { op, wire } => {
                single_seen = true;
                plan.push((PlanItem::Single(ops.len()), wire));
                ops.push(op);
            }
        }
    }

    let mut sweep = Sweep {
        n,
        ops,
        gates: Vec::new(),
        fixed_pair: vec![false; n],
        fixed_single: vec![false; n],
        active_from: 0,
    };

    for (item, t) in plan {
        match item {
            PlanItem::PairX(idx) => {
                sweep.active_from = idx;
                sweep.place_as_x(idx, t);
                if fix_signs && sweep.ops[idx].phase() == 2 {
                    sweep.emit(Gate::Z(t));
                }
                debug_assert!(
                    sweep.ops[idx].x_bit(t) && !sweep.ops[idx].z_bit(t) && sweep.ops[idx].weight() == 1
                );
            }
            PlanItem::PairZ(idx) => {
                sweep.active_from = idx;
                sweep.place_as_z_partner(idx, t);
                if fix_signs && sweep.ops[idx].phase() == 2 {
                    sweep.emit(Gate::X(t));
                }
                debug_assert!(
                    !sweep.ops[idx].x_bit(t) && sweep.ops[idx].z_bit(t) && sweep.ops[idx].weight() == 1
                );
                sweep.fixed_pair[t] = true;
            }
            PlanItem::Single(idx) => {
                sweep.active_from = idx;
                sweep.place_as_lone_z(idx, t);
                if fix_signs && sweep.ops[idx].phase() == 2 {
                    sweep.emit(Gate::X(t));
                }
                debug_assert!(
                    !sweep.ops[idx].x_bit(t) && sweep.ops[idx].z_bit(t) && sweep.ops[idx].weight() == 1
                );
                sweep.fixed_single[t] = true;
            }
        }
    }
    sweep.gates
}
