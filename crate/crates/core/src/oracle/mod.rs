//! Dense-matrix brute-force oracle.
//!
//! Ground truth for the symbolic layers: every tableau-level object converts
//! to an explicit complex matrix here (behind hard size guards), and the
//! lattice verifiers decide stabilizerness of arbitrary densities by
//! enumerating Pauli expectations.

mod dense;
mod enumerate;
mod stabilizerness;
mod sim;

pub use dense::{C64, DenseMatrix};
pub use enumerate::{
    clifford_orbit_states, enumerate_mixed_stabilizer_states, enumerate_pure_stabilizer_states,
};
pub use stabilizerness::{
    check_stabilizer_preserving_dense, classify_observable_dense, is_mixed_stabilizer_dense,
    ObservableClass, PreservationReport, StabilizerVerdict,
};
pub use sim::simulate_density;

use crate::channel::StinespringForm;
use crate::clifford::{CliffordUnitary, Gate};
use crate::pauli::PauliOperator;
use crate::stabstate::{StabilizerGroupState, StateError};
use thiserror::Error;

/// Absolute tolerance for all dense comparisons.
pub const TOL: f64 = 1e-9;
/// Snapping tolerance when reading expectations off the `{-1, 0, +1}` lattice.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("size guard: {what} allows at most {limit} qubits, got {n}")]
    SizeGuard {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(&'static str),
    #[error("observable spectrum outside [-1, 1]")]
    SpectrumOutOfRange,
    #[error(transparent)]
    State(#[from] StateError),
}

fn guard(what: &'static str, n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        return Err(OracleError::SizeGuard { what, n, limit });
    }
    Ok(())
}

/// Dense matrix of a phased Pauli: a signed permutation with
/// `P[j^x, j] = i^phase (-1)^(z.j)`.
pub fn dense_of_pauli(p: &PauliOperator) -> DenseMatrix {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let phase = C64::new(0.0, 1.0).powu(p.phase() as u32);
    let mut x_mask = 0usize;
    let mut z_mask = 0usize;
    for q in 0..n {
        if p.x_bit(q) {
            x_mask |= 1 << (n - 1 - q);
        }
        if p.z_bit(q) {
            z_mask |= 1 << (n - 1 - q);
        }
    }
    let mut m = DenseMatrix::zeros(dim, dim);
    for j in 0..dim {
        let sign = if ((j & z_mask).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        m.set(j ^ x_mask, j, phase * sign);
    }
    m
}

/// `Tr(rho P)` without materializing the Pauli matrix.
pub fn dense_pauli_expectation(rho: &DenseMatrix, p: &PauliOperator) -> C64 {
    let n = p.num_qubits();
    debug_assert_eq!(rho.num_qubits(), n);
    let dim = 1usize << n;
    let phase = C64::new(0.0, 1.0).powu(p.phase() as u32);
    let mut x_mask = 0usize;
    let mut z_mask = 0usize;
    for q in 0..n {
        if p.x_bit(q) {
            x_mask |= 1 << (n - 1 - q);
        }
        if p.z_bit(q) {
            z_mask |= 1 << (n - 1 - q);
        }
    }
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..dim {
        let sign = if ((j & z_mask).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        acc += rho.get(j, j ^ x_mask) * phase * sign;
    }
    acc
}

const GATE_FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Dense matrix of a gate embedded on `n` qubits.
pub fn dense_of_gate(g: Gate, n: usize) -> DenseMatrix {
    let dim = 1usize << n;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut m = DenseMatrix::zeros(dim, dim);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match g {
        Gate::H(q) => {
            let b = bit(q);
            for j in 0..dim {
                let s = C64::new(GATE_FRAC, 0.0);
                if j & b == 0 {
                    m.add_at(j, j, s);
                    m.add_at(j | b, j, s);
                } else {
                    m.add_at(j ^ b, j, s);
                    m.add_at(j, j, -s);
                }
            }
        }
        Gate::S(q) => {
            let b = bit(q);
            for j in 0..dim {
                m.set(j, j, if j & b == 0 { one } else { i });
            }
        }
        Gate::X(q) => {
            let b = bit(q);
            for j in 0..dim {
                m.set(j ^ b, j, one);
            }
        }
        Gate::Y(q) => {
            let b = bit(q);
            for j in 0..dim {
                m.set(j ^ b, j, if j & b == 0 { i } else { -i });
            }
        }
        Gate::Z(q) => {
            let b = bit(q);
            for j in 0..dim {
                m.set(j, j, if j & b == 0 { one } else { -one });
            }
        }
        Gate::Cz(a, bq) => {
            let (ba, bb) = (bit(a), bit(bq));
            for j in 0..dim {
                let v = if j & ba != 0 && j & bb != 0 { -one } else { one };
                m.set(j, j, v);
            }
        }
        Gate::Cnot(c, t) => {
            let (bc, bt) = (bit(c), bit(t));
            for j in 0..dim {
                let out = if j & bc != 0 { j ^ bt } else { j };
                m.set(out, j, one);
            }
        }
    }
    m
}

/// Dense unitary of a Clifford tableau (via its synthesized gate word),
/// defined up to global phase.
pub fn dense_of_clifford(u: &CliffordUnitary) -> DenseMatrix {
    let mut m = DenseMatrix::identity(1 << u.num_qubits());
    for g in u.synthesize() {
        m.apply_gate_left(g);
    }
    m
}

/// Dense density matrix of a stabilizer state: the normalized sum over the
/// whole group, walked in Gray-code order.
pub fn dense_of_state(s: &StabilizerGroupState) -> Result<DenseMatrix, OracleError> {
    let n = s.num_qubits();
    guard("dense_of_state", n, 12)?;
    let k = s.rank();
    let dim = 1usize << n;
    let mut acc = DenseMatrix::zeros(dim, dim);
    let mut current = PauliOperator::identity(n);
    let add_current = |p: &PauliOperator, acc: &mut DenseMatrix| {
        let phase = C64::new(0.0, 1.0).powu(p.phase() as u32);
        let mut x_mask = 0usize;
        let mut z_mask = 0usize;
        for q in 0..n {
            if p.x_bit(q) {
                x_mask |= 1 << (n - 1 - q);
            }
            if p.z_bit(q) {
                z_mask |= 1 << (n - 1 - q);
            }
        }
        for j in 0..dim {
            let sign = if ((j & z_mask).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            acc.add_at(j ^ x_mask, j, phase * sign);
        }
    };
    add_current(&current, &mut acc);
    for code in 1..(1usize << k) {
        let flip = code.trailing_zeros() as usize;
        current = current
            .multiply(&s.generators()[flip])
            .expect("sizes match");
        add_current(&current, &mut acc);
    }
    Ok(acc.scale(C64::new(1.0 / dim as f64, 0.0)))
}

/// A channel as an explicit isometry `V : 2^n_in -> 2^(n_out + n_env)`
/// followed by tracing the trailing environment.
#[derive(Clone)]
pub struct DenseChannel {
    pub n_in: usize,
    pub n_out: usize,
    pub n_env: usize,
    /// `2^(n_out+n_env) x 2^n_in` isometry.
    pub v: DenseMatrix,
}

impl DenseChannel {
    /// Build the thin isometry directly: ancilla-padded basis columns pushed
    /// through the synthesized gate word.
    pub fn from_stinespring(ch: &StinespringForm) -> Result<Self, OracleError> {
        guard("dense_of_channel", ch.total_qubits(), 10)?;
        let total = ch.total_qubits();
        let anc = total - ch.n_in();
        let mut v = DenseMatrix::zeros(1 << total, 1 << ch.n_in());
        for x in 0..(1usize << ch.n_in()) {
            v.set(x << anc, x, C64::new(1.0, 0.0));
        }
        for g in ch.unitary().synthesize() {
            v.apply_gate_left(g);
        }
        Ok(DenseChannel {
            n_in: ch.n_in(),
            n_out: ch.n_out(),
            n_env: ch.n_env(),
            v,
        })
    }

    pub fn from_kraus(n_in: usize, n_out: usize, kraus: &[DenseMatrix]) -> Self {
        let env_bits = kraus.len().next_power_of_two().trailing_zeros() as usize;
        let env_bits = env_bits.max(if kraus.len() > 1 { 1 } else { 0 });
        let mut v = DenseMatrix::zeros(1 << (n_out + env_bits), 1 << n_in);
        for (m, k) in kraus.iter().enumerate() {
            for i in 0..(1usize << n_out) {
                for j in 0..(1usize << n_in) {
                    v.set((i << env_bits) | m, j, k.get(i, j));
                }
            }
        }
        DenseChannel {
            n_in,
            n_out,
            n_env: env_bits,
            v,
        }
    }

    pub fn unitary(n: usize, u: DenseMatrix) -> Self {
        DenseChannel {
            n_in: n,
            n_out: n,
            n_env: 0,
            v: u,
        }
    }

    pub fn apply(&self, rho: &DenseMatrix) -> DenseMatrix {
        let din = 1usize << self.n_in;
        let dout = 1usize << self.n_out;
        let denv = 1usize << self.n_env;
        // contract the environment directly instead of forming V rho V†
        let w = self.v.mul(rho);
        let mut out = DenseMatrix::zeros(dout, dout);
        for b in 0..dout {
            for b2 in 0..dout {
                let mut acc = C64::new(0.0, 0.0);
                for e in 0..denv {
                    for k in 0..din {
                        acc += w.get((b << self.n_env) | e, k)
                            * self.v.get((b2 << self.n_env) | e, k).conj();
                    }
                }
                out.set(b, b2, acc);
            }
        }
        out
    }

    /// `(Id_m (x) channel)` applied to a density on `m + n_in` qubits.
    pub fn apply_amplified(&self, m: usize, rho: &DenseMatrix) -> DenseMatrix {
        let lift = DenseMatrix::identity(1 << m).kron(&self.v);
        let big = lift.mul(rho).mul(&lift.dagger());
        let keep: Vec<usize> = (0..m + self.n_out).collect();
        big.partial_trace(&keep)
    }

    /// Dense Choi state on `n_in + n_out` qubits. The input pairs are pure,
    /// so the Choi density is assembled from the purification vector
    /// `w[(j,b),e] = V[(b,e),j] / sqrt(2^n_in)` as `w w†`.
    pub fn choi(&self) -> DenseMatrix {
        let din = 1usize << self.n_in;
        let dout = 1usize << self.n_out;
        let denv = 1usize << self.n_env;
        let scale = C64::new(1.0 / (din as f64).sqrt(), 0.0);
        let mut w = DenseMatrix::zeros(din * dout, denv);
        for j in 0..din {
            for b in 0..dout {
                for e in 0..denv {
                    w.set(
                        j * dout + b,
                        e,
                        self.v.get((b << self.n_env) | e, j) * scale,
                    );
                }
            }
        }
        w.mul(&w.dagger())
    }

    /// Sequential composition: `self` then `g`.
    pub fn then(&self, g: &DenseChannel) -> DenseChannel {
        assert_eq!(self.n_out, g.n_in);
        let lift = g.v.kron(&DenseMatrix::identity(1 << self.n_env));
        DenseChannel {
            n_in: self.n_in,
            n_out: g.n_out,
            n_env: self.n_env + g.n_env,
            v: lift.mul(&self.v),
        }
    }
}

/// Maximally entangled density on `2n` qubits, pairing qubit `i` with `n+i`.
pub fn dense_max_entangled(n: usize) -> DenseMatrix {
    let dim = 1usize << (2 * n);
    let block = 1usize << n;
    let amp = C64::new(1.0 / block as f64, 0.0);
    let mut m = DenseMatrix::zeros(dim, dim);
    for j in 0..block {
        for k in 0..block {
            m.set(j * block + j, k * block + k, amp);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;

    #[test]
    fn pauli_products_match_dense_multiplication() {
        let cases = [
            ("X", "Z"),
            ("Y", "Y"),
            ("XI", "ZZ"),
            ("XY", "YZ"),
            ("-iXYZ", "+iZZY"),
        ];
        for (a, b) in cases {
            let p = pauli(a);
            let q = pauli(b);
            let lhs = dense_of_pauli(&p.multiply(&q).unwrap());
            let rhs = dense_of_pauli(&p).mul(&dense_of_pauli(&q));
            assert!(lhs.frobenius_distance(&rhs) < TOL, "{a} * {b}");
        }
    }

    #[test]
    fn hermiticity_matches_dense() {
        for s in ["X", "Y", "-Z", "+iX", "-iY", "XY", "+iXZ"] {
            let p = pauli(s);
            assert_eq!(p.is_hermitian(), dense_of_pauli(&p).is_hermitian(TOL), "{s}");
        }
    }

    #[test]
    fn named_states_have_expected_densities() {
        let zero = dense_of_state(&StabilizerGroupState::zero(1)).unwrap();
        assert!((zero.get(0, 0) - C64::new(1.0, 0.0)).norm() < TOL);
        assert!(zero.get(1, 1).norm() < TOL);

        let chi = dense_of_state(&StabilizerGroupState::chaotic(1)).unwrap();
        assert!(chi.frobenius_distance(&DenseMatrix::identity(2).scale(C64::new(0.5, 0.0))) < TOL);

        let sigma = dense_of_state(&StabilizerGroupState::sigma()).unwrap();
        for (idx, want) in [(0usize, 0.5), (1, 0.0), (2, 0.0), (3, 0.5)] {
            assert!((sigma.get(idx, idx).re - want).abs() < TOL);
        }
        assert!(sigma.get(0, 3).norm() < TOL, "classical state is diagonal");

        let bell = dense_of_state(&StabilizerGroupState::bell()).unwrap();
        assert!((bell.get(0, 3).re - 0.5).abs() < TOL, "bell has coherence");
    }

    #[test]
    fn size_guard_is_loud() {
        let s = StabilizerGroupState::chaotic(13);
        assert!(matches!(
            dense_of_state(&s),
            Err(OracleError::SizeGuard { .. })
        ));
    }

    #[test]
    fn dephasing_channel_acts_analytically() {
        let d = DenseChannel::from_stinespring(&StinespringForm::dephase()).unwrap();
        let plus = dense_of_state(&StabilizerGroupState::plus()).unwrap();
        let out = d.apply(&plus);
        let chi = DenseMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(out.frobenius_distance(&chi) < TOL);
        // D[rho] = (rho + Z rho Z)/2 on a generic density
        let mut rho = DenseMatrix::zeros(2, 2);
        rho.set(0, 0, C64::new(0.7, 0.0));
        rho.set(1, 1, C64::new(0.3, 0.0));
        rho.set(0, 1, C64::new(0.1, 0.2));
        rho.set(1, 0, C64::new(0.1, -0.2));
        let z = dense_of_pauli(&pauli("Z"));
        let analytic = rho.add(&z.mul(&rho).mul(&z)).scale(C64::new(0.5, 0.0));
        assert!(d.apply(&rho).frobenius_distance(&analytic) < TOL);
    }

    #[test]
    fn choi_of_identity_is_max_entangled() {
        let id = DenseChannel::from_stinespring(&StinespringForm::identity(1)).unwrap();
        assert!(id.choi().frobenius_distance(&dense_max_entangled(1)) < TOL);
    }

    #[test]
    fn expectation_shortcut_matches_full_trace() {
        let s = StabilizerGroupState::ghz(3).unwrap();
        let rho = dense_of_state(&s).unwrap();
        for text in ["XXX", "ZZI", "IZZ", "YYX", "XIZ", "-YXY"] {
            let p = pauli(text);
            let fast = dense_pauli_expectation(&rho, &p);
            let slow = rho.mul(&dense_of_pauli(&p)).trace();
            assert!((fast - slow).norm() < TOL, "{text}");
        }
    }
}
