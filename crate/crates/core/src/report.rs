//! JSON-facing report payloads. Field layout is stable and deterministic:
//! the same channel always serializes to the same bytes.

use crate::channel::{capacities, normal_form, Capacities, StinespringForm};
use crate::circuit::CompiledCircuit;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CountsReport {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
}

/// Full analysis of one channel.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelReport {
    pub n_in: usize,
    pub n_out: usize,
    pub counts: CountsReport,
    pub capacities: Capacities,
    pub class: &'static str,
    pub encoder_gates: Vec<String>,
    pub decoder_gates: Vec<String>,
    pub choi_tableau: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_outputs: Option<Vec<bool>>,
}

impl ChannelReport {
    pub fn from_channel(ch: &StinespringForm) -> Self {
        let nf = normal_form(ch);
        let (a, b, c, d, e) = nf.counts();
        let choi = ch.choi();
        ChannelReport {
            n_in: ch.n_in(),
            n_out: ch.n_out(),
            counts: CountsReport { a, b, c, d, e },
            capacities: capacities(&nf),
            class: ch.classify().name(),
            encoder_gates: nf.encoder.synthesize().iter().map(|g| g.mnemonic()).collect(),
            decoder_gates: nf.decoder.synthesize().iter().map(|g| g.mnemonic()).collect(),
            choi_tableau: choi
                .state()
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect(),
            classical_outputs: None,
        }
    }

    pub fn from_compiled(compiled: &CompiledCircuit) -> Self {
        let mut report = Self::from_channel(&compiled.channel);
        report.classical_outputs = Some(compiled.classical_outputs.clone());
        report
    }
}
