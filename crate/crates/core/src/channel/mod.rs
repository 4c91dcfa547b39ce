//! Clifford channels: Stinespring dilations, Choi tableaux, composition,
//! bipartite decomposition, normal form, capacities and classification.

mod bipartite;
mod normal_form;

pub use bipartite::{decompose_bipartite, BipartiteCounts, BipartiteDecomposition, Factor};
pub use normal_form::{capacities, normal_form, Capacities, NormalForm};

use crate::clifford::{CliffordUnitary, Gate, TableauError};
use crate::pauli::{PauliLetter, PauliOperator};
use crate::stabstate::{StabilizerGroupState, StateError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("channel size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not trace-preserving: Choi marginal on the input copy is not chaotic")]
    NotTracePreserving,
    #[error("invalid stinespring form: {0}")]
    InvalidForm(&'static str),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
}

/// A Clifford channel as a unitary dilation.
///
/// Convention: the `n_in` input qubits enter first, followed by
/// `n_out + n_env - n_in` ancillas prepared in `|0>`; `unitary` acts on all
/// `n_out + n_env` wires; the first `n_out` wires of the result are the
/// output and the trailing `n_env` wires are traced out.
#[derive(Clone, PartialEq, Eq)]
pub struct StinespringForm {
    n_in: usize,
    n_out: usize,
    n_env: usize,
    unitary: CliffordUnitary,
}

impl StinespringForm {
    pub fn new(
        n_in: usize,
        n_out: usize,
        n_env: usize,
        unitary: CliffordUnitary,
    ) -> Result<Self, ChannelError> {
        if unitary.num_qubits() != n_out + n_env {
            return Err(ChannelError::InvalidForm(
                "unitary must act on n_out + n_env qubits",
            ));
        }
        if n_out + n_env < n_in {
            return Err(ChannelError::InvalidForm("n_out + n_env must cover n_in"));
        }
        Ok(StinespringForm {
            n_in,
            n_out,
            n_env,
            unitary,
        })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    /// Total dilation width `n_out + n_env`.
    pub fn total_qubits(&self) -> usize {
        self.n_out + self.n_env
    }

    pub fn unitary(&self) -> &CliffordUnitary {
        &self.unitary
    }

    // ---- elementary channels ----

    pub fn identity(n: usize) -> Self {
        StinespringForm {
            n_in: n,
            n_out: n,
            n_env: 0,
            unitary: CliffordUnitary::identity(n),
        }
    }

    pub fn unitary_channel(u: CliffordUnitary) -> Self {
        StinespringForm {
            n_in: u.num_qubits(),
            n_out: u.num_qubits(),
            n_env: 0,
            unitary: u,
        }
    }

    /// One-qubit dephasing: copy onto a fresh ancilla, trace the ancilla.
    pub fn dephase() -> Self {
        StinespringForm {
            n_in: 1,
            n_out: 1,
            n_env: 1,
            unitary: CliffordUnitary::from_gates(2, &[Gate::Cnot(0, 1)]).unwrap(),
        }
    }

    /// Erasure of `n` qubits (trace into the empty system).
    pub fn erase(n: usize) -> Self {
        StinespringForm {
            n_in: n,
            n_out: 0,
            n_env: n,
            unitary: CliffordUnitary::identity(n),
        }
    }

    /// Preparation of `|0>`.
    pub fn prep_zero() -> Self {
        StinespringForm {
            n_in: 0,
            n_out: 1,
            n_env: 0,
            unitary: CliffordUnitary::identity(1),
        }
    }

    /// Preparation of the chaotic state via half a Bell pair.
    pub fn prep_chaotic() -> Self {
        StinespringForm {
            n_in: 0,
            n_out: 1,
            n_env: 1,
            unitary: CliffordUnitary::from_gates(2, &[Gate::H(0), Gate::Cnot(0, 1)]).unwrap(),
        }
    }

    // ---- channel action ----

    /// Apply to a stabilizer state: append ancillas, conjugate, trace.
    pub fn apply(&self, s: &StabilizerGroupState) -> Result<StabilizerGroupState, ChannelError> {
        if s.num_qubits() != self.n_in {
            return Err(ChannelError::SizeMismatch(s.num_qubits(), self.n_in));
        }
        let anc = self.total_qubits() - self.n_in;
        let full = s.tensor(&StabilizerGroupState::zero(anc));
        let evolved = full.apply_clifford(&self.unitary)?;
        let keep: Vec<usize> = (0..self.n_out).collect();
        Ok(evolved.partial_trace(&keep)?)
    }

    /// Choi tableau: feed half of `n_in` Bell pairs through the channel.
    /// Qubit order is the input copy `A'` first, then the output block `B`.
    pub fn choi(&self) -> ChoiTableau {
        let n_in = self.n_in;
        let total = n_in + self.total_qubits();
        let anc = self.total_qubits() - n_in;
        let mut gens: Vec<PauliOperator> = Vec::new();
        for i in 0..n_in {
            let x = PauliOperator::single(total, i, PauliLetter::X)
                .multiply(&PauliOperator::single(total, n_in + i, PauliLetter::X))
                .unwrap();
            let z = PauliOperator::single(total, i, PauliLetter::Z)
                .multiply(&PauliOperator::single(total, n_in + i, PauliLetter::Z))
                .unwrap();
            gens.push(x);
            gens.push(z);
        }
        for j in 0..anc {
            gens.push(PauliOperator::single(total, 2 * n_in + j, PauliLetter::Z));
        }
        let initial = StabilizerGroupState::new(total, gens).expect("bell pairs are valid");
        let positions: Vec<usize> = (n_in..total).collect();
        let embedded = self.unitary.embedded(total, &positions);
        let evolved = initial.apply_clifford(&embedded).expect("sizes match");
        let keep: Vec<usize> = (0..n_in + self.n_out).collect();
        let state = evolved.partial_trace(&keep).expect("indices valid");
        ChoiTableau::new(state, n_in, self.n_out).expect("dilations are trace-preserving")
    }

    /// Sequential composition: apply `self` first, then `g`.
    pub fn compose(&self, g: &StinespringForm) -> Result<StinespringForm, ChannelError> {
        if self.n_out != g.n_in {
            return Err(ChannelError::SizeMismatch(self.n_out, g.n_in));
        }
        let anc_f = self.total_qubits() - self.n_in;
        let anc_g = g.total_qubits() - g.n_in;
        let total = self.n_in + anc_f + anc_g;

        let map_f: Vec<usize> = (0..self.total_qubits()).collect();
        let mut map_g: Vec<usize> = (0..g.n_in).collect(); // f's outputs
        map_g.extend(self.total_qubits()..self.total_qubits() + anc_g);

        let mut u = self.unitary.embedded(total, &map_f);
        u = g.unitary.embedded(total, &map_g).compose(&u)?;

        // g outputs, then f's environment, then g's environment.
        let mut order: Vec<usize> = Vec::with_capacity(total);
        order.extend(map_g[..g.n_out].iter().copied());
        order.extend(self.n_out..self.total_qubits());
        order.extend(map_g[g.n_out..].iter().copied());
        debug_assert_eq!(order.len(), total);
        let mut perm = vec![0usize; total];
        for (idx, &pos) in order.iter().enumerate() {
            perm[pos] = idx;
        }
        let u = CliffordUnitary::permutation(&perm).compose(&u)?;
        StinespringForm::new(self.n_in, g.n_out, self.n_env + g.n_env, u)
    }

    /// Parallel composition `self (x) g`.
    pub fn tensor(&self, g: &StinespringForm) -> StinespringForm {
        let anc_f = self.total_qubits() - self.n_in;
        let anc_g = g.total_qubits() - g.n_in;
        let n_in = self.n_in + g.n_in;
        let total = n_in + anc_f + anc_g;

        let mut map_f: Vec<usize> = (0..self.n_in).collect();
        map_f.extend(n_in..n_in + anc_f);
        let mut map_g: Vec<usize> = (self.n_in..n_in).collect();
        map_g.extend(n_in + anc_f..total);

        let mut u = self.unitary.embedded(total, &map_f);
        u = g
            .unitary
            .embedded(total, &map_g)
            .compose(&u)
            .expect("sizes match");

        let mut order: Vec<usize> = Vec::with_capacity(total);
        order.extend(map_f[..self.n_out].iter().copied());
        order.extend(map_g[..g.n_out].iter().copied());
        order.extend(map_f[self.n_out..].iter().copied());
        order.extend(map_g[g.n_out..].iter().copied());
        let mut perm = vec![0usize; total];
        for (idx, &pos) in order.iter().enumerate() {
            perm[pos] = idx;
        }
        let u = CliffordUnitary::permutation(&perm)
            .compose(&u)
            .expect("sizes match");
        StinespringForm::new(n_in, self.n_out + g.n_out, self.n_env + g.n_env, u)
            .expect("tensor dimensions are consistent")
    }

    /// Same channel? Decided on canonical Choi tableaux.
    pub fn equivalent(&self, other: &StinespringForm) -> Result<bool, ChannelError> {
        if self.n_in != other.n_in {
            return Err(ChannelError::SizeMismatch(self.n_in, other.n_in));
        }
        if self.n_out != other.n_out {
            return Err(ChannelError::SizeMismatch(self.n_out, other.n_out));
        }
        Ok(self.choi().state().generators() == other.choi().state().generators())
    }

    /// Coarse class of the channel, decided on the Choi tableau.
    pub fn classify(&self) -> ChannelClass {
        let choi = self.choi();
        let st = choi.state();
        let pure = st.rank() == st.num_qubits();
        let b_wires: Vec<usize> = (self.n_in..self.n_in + self.n_out).collect();
        if pure && self.n_in == self.n_out {
            let b_marginal = st.partial_trace(&b_wires).expect("indices valid");
            if b_marginal.rank() == 0 {
                return ChannelClass::UnitaryClifford;
            }
        }
        if pure {
            return ChannelClass::CliffordIsometry;
        }
        let b_marginal = st.partial_trace(&b_wires).expect("indices valid");
        if b_marginal.rank() == self.n_out {
            let product = StabilizerGroupState::chaotic(self.n_in).tensor(&b_marginal);
            if product.equiv(st) {
                return ChannelClass::StateReset;
            }
        }
        ChannelClass::GeneralClifford
    }
}

impl std::fmt::Debug for StinespringForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "StinespringForm(in={}, out={}, env={})",
            self.n_in, self.n_out, self.n_env
        )
    }
}

/// Channel classes in decreasing strictness; checked in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ChannelClass {
    UnitaryClifford,
    CliffordIsometry,
    StateReset,
    GeneralClifford,
}

impl ChannelClass {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelClass::UnitaryClifford => "UnitaryClifford",
            ChannelClass::CliffordIsometry => "CliffordIsometry",
            ChannelClass::StateReset => "StateReset",
            ChannelClass::GeneralClifford => "GeneralClifford",
        }
    }
}

/// Choi state of a channel, canonicalized, with the `A'|B` split marker.
#[derive(Clone, PartialEq, Eq)]
pub struct ChoiTableau {
    state: StabilizerGroupState,
    n_in: usize,
    n_out: usize,
}

impl ChoiTableau {
    /// Validates the trace-preserving marginal: tracing out `B` must leave the
    /// chaotic state on `A'`.
    pub fn new(
        state: StabilizerGroupState,
        n_in: usize,
        n_out: usize,
    ) -> Result<Self, ChannelError> {
        if state.num_qubits() != n_in + n_out {
            return Err(ChannelError::SizeMismatch(state.num_qubits(), n_in + n_out));
        }
        let a_wires: Vec<usize> = (0..n_in).collect();
        let marginal = state.partial_trace(&a_wires)?;
        if marginal.rank() != 0 {
            return Err(ChannelError::NotTracePreserving);
        }
        Ok(ChoiTableau {
            state: state.canonicalize(),
            n_in,
            n_out,
        })
    }

    pub fn state(&self) -> &StabilizerGroupState {
        &self.state
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }
}

impl std::fmt::Debug for ChoiTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChoiTableau(A'={}, B={}) {:?}", self.n_in, self.n_out, self.state)
    }
}

/// Minimal Stinespring dilation of a valid Choi tableau; the environment size
/// is the rank deficiency of the Choi state.
pub fn channel_from_choi(choi: &ChoiTableau) -> Result<StinespringForm, ChannelError> {
    let n_in = choi.n_in;
    let n_out = choi.n_out;
    let k = choi.state.canonicalize().rank();
    let n_env = n_in + n_out - k;

    // Purify, then split the purification as A' versus output-plus-environment.
    let psi = choi.state.purify();
    debug_assert_eq!(psi.num_qubits(), n_in + n_out + n_env);
    let dec = decompose_bipartite(&psi, n_in)?;
    let m = n_out + n_env - n_in; // |0> block size on the right side
    debug_assert_eq!(dec.counts.bell, n_in, "chaotic marginal forces Bell pairs");
    debug_assert_eq!(dec.counts.zero_b, m);
    debug_assert_eq!(dec.counts.sigma + dec.counts.chi_a + dec.counts.chi_b, 0);

    // psi = (W_A'† (x) W_B†) [ |0^m> at wires 0..m, Bell halves at m.. ] (..)
    // so the channel is W_B† ∘ (wire placement) ∘ conj(W_A') on the input.
    let right = n_out + n_env;
    let mut perm = vec![0usize; right];
    for (i, slot) in perm.iter_mut().take(n_in).enumerate() {
        *slot = m + i;
    }
    for j in 0..m {
        perm[n_in + j] = j;
    }
    let placement = CliffordUnitary::permutation(&perm);
    let encoder = dec.u_a.inverse().transpose(); // conj(W_A')
    let u = dec
        .u_b
        .inverse()
        .compose(&placement)?
        .compose(&encoder.embedded(right, &(0..n_in).collect::<Vec<_>>()))?;
    StinespringForm::new(n_in, n_out, n_env, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;

    fn tableau_strings(c: &ChoiTableau) -> Vec<String> {
        c.state().generators().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn table_of_elementary_choi_states() {
        assert_eq!(
            tableau_strings(&StinespringForm::prep_zero().choi()),
            vec!["+Z"]
        );
        assert!(tableau_strings(&StinespringForm::prep_chaotic().choi()).is_empty());
        assert!(tableau_strings(&StinespringForm::erase(1).choi()).is_empty());
        assert_eq!(
            tableau_strings(&StinespringForm::identity(1).choi()),
            vec!["+XX", "+ZZ"]
        );
        assert_eq!(
            tableau_strings(&StinespringForm::dephase().choi()),
            vec!["+ZZ"]
        );
    }

    #[test]
    fn choi_marginal_is_enforced() {
        // |0><0| on A'B is not a valid Choi state: the A' marginal is pure.
        let state = StabilizerGroupState::zero(2);
        assert_eq!(
            ChoiTableau::new(state, 1, 1).unwrap_err(),
            ChannelError::NotTracePreserving
        );
    }

    #[test]
    fn apply_examples() {
        let d = StinespringForm::dephase();
        let out = d.apply(&StabilizerGroupState::plus()).unwrap();
        assert!(out.equiv(&StabilizerGroupState::chaotic(1)));

        let id_d = StinespringForm::identity(1).tensor(&d);
        let out = id_d.apply(&StabilizerGroupState::bell()).unwrap();
        assert!(out.equiv(&StabilizerGroupState::sigma()));

        let tr = StinespringForm::erase(1);
        let out = tr.apply(&StabilizerGroupState::plus()).unwrap();
        assert_eq!(out.num_qubits(), 0);
    }

    #[test]
    fn composition_examples() {
        let d = StinespringForm::dephase();
        let dd = d.compose(&d).unwrap();
        assert!(dd.equivalent(&d).unwrap());

        let h = StinespringForm::unitary_channel(
            CliffordUnitary::from_gate(Gate::H(0), 1).unwrap(),
        );
        let hdh = h.compose(&d).unwrap().compose(&h).unwrap();
        assert!(!hdh.equivalent(&d).unwrap());
        assert_eq!(tableau_strings(&hdh.choi()), vec!["+XX"]);

        let id2 = StinespringForm::identity(1).tensor(&StinespringForm::identity(1));
        assert!(id2.equivalent(&StinespringForm::identity(2)).unwrap());
    }

    #[test]
    fn equivalence_size_mismatch() {
        let d = StinespringForm::dephase();
        let tr = StinespringForm::erase(1);
        assert!(d.equivalent(&tr).is_err());
    }

    #[test]
    fn size_mismatches_are_errors() {
        let d = StinespringForm::dephase();
        assert_eq!(
            d.apply(&StabilizerGroupState::bell()).unwrap_err(),
            ChannelError::SizeMismatch(2, 1)
        );
        let id2 = StinespringForm::identity(2);
        assert_eq!(
            d.compose(&id2).unwrap_err(),
            ChannelError::SizeMismatch(1, 2)
        );
        assert!(StinespringForm::new(2, 1, 0, CliffordUnitary::identity(1)).is_err());
    }

    #[test]
    fn from_choi_round_trip_elementary() {
        for ch in [
            StinespringForm::identity(1),
            StinespringForm::dephase(),
            StinespringForm::erase(1),
            StinespringForm::prep_zero(),
            StinespringForm::prep_chaotic(),
        ] {
            let choi = ch.choi();
            let rebuilt = channel_from_choi(&choi).unwrap();
            assert_eq!(rebuilt.n_in(), ch.n_in());
            assert_eq!(rebuilt.n_out(), ch.n_out());
            assert!(rebuilt.equivalent(&ch).unwrap(), "{ch:?}");
        }
        // identity has a pure Choi state: minimal dilation needs no environment
        let id_rebuilt = channel_from_choi(&StinespringForm::identity(1).choi()).unwrap();
        assert_eq!(id_rebuilt.n_env(), 0);
        // dephasing has Choi rank 1 on 2 qubits: one environment qubit
        let d_rebuilt = channel_from_choi(&StinespringForm::dephase().choi()).unwrap();
        assert_eq!(d_rebuilt.n_env(), 1);
    }

    #[test]
    fn from_choi_product_state() {
        // chi_{A'} (x) |0><0|_B: discard the input, prepare |0>.
        let state = StabilizerGroupState::new(2, vec![pauli("IZ")]).unwrap();
        let choi = ChoiTableau::new(state, 1, 1).unwrap();
        let ch = channel_from_choi(&choi).unwrap();
        let out = ch.apply(&StabilizerGroupState::plus()).unwrap();
        assert!(out.equiv(&StabilizerGroupState::zero(1)));
        let nf = normal_form(&ch);
        assert_eq!(nf.counts(), (1, 0, 1, 0, 0));
    }

    #[test]
    fn classification_examples() {
        let h = StinespringForm::unitary_channel(
            CliffordUnitary::from_gate(Gate::H(0), 1).unwrap(),
        );
        assert_eq!(h.classify(), ChannelClass::UnitaryClifford);

        // append |0>: identity unitary on 2 wires, 1 input
        let append = StinespringForm::new(1, 2, 0, CliffordUnitary::identity(2)).unwrap();
        assert_eq!(append.classify(), ChannelClass::CliffordIsometry);

        // discard then prepare |+>
        let prep_plus = crate::circuit::Circuit::parse_text("qubits 1\ndiscard 0\nprep0\nh 1\n")
            .unwrap()
            .compile()
            .unwrap()
            .channel;
        assert_eq!(prep_plus.classify(), ChannelClass::StateReset);

        assert_eq!(
            StinespringForm::dephase().classify(),
            ChannelClass::GeneralClifford
        );
    }
}
