// SPDX-License-Identifier: Apache-2.0
//! Quantum secret sharing and SPIR over qudits of prime dimension.
//!
//! Two backends: an exact dense state-vector oracle for tiny instances, and
//! a symplectic track that follows only the Weyl displacement and works
//! over any F_q. The dense core is generic over the real scalar; the
//! protocol layer uses f64.
//!
//! Conventions: W(a, b) = X(a)Z(b) with X(a)|j> = |j+a>, Z(b)|j> = w^{bj}|j>,
//! so W(v)W(w) = w^{-<v,w>} W(w)W(v) for <v,w> = v_x.w_z - w_x.v_z.

pub mod channel;
pub mod dense;
pub mod info;
mod protocols;
pub mod povm;
mod qqss;
mod spir;
pub mod stabilizer;
pub mod symp;

pub use channel::{gamma_bar, lemma_l6_check, max_entangled, Channel};
pub use dense::{weyl, Cx, DenseState, DensityMatrix, Layout, Roots, MAX_DIM};
pub use info::{entropy, fidelity_pure, mutual_information, relative_entropy, trace_distance};
pub use povm::{bell_povm, measure, Measurement, Povm};
pub use protocols::{
    audit_ss, backend_agreement, backend_agreement_set, run_cqss, run_eass, run_feass, run_modified_eass, run_ss, Backend, EaSim, QuantumReport,
    Scheme,
};
pub use qqss::{audit_qqss, run_qqss, QqSim};
pub use spir::{audit_spir, convert_flow5, flow5_agreement, run_cqspir, run_easpir, run_feaspir, run_spir, ConvertedEass, QSpir, QuantumSpirReport, SpirScheme};
pub use stabilizer::{ea_resource, modified_resource, stabilizer_state, CodeBasis};
pub use symp::{symp_decode, symp_track, symp_track_spir, SympOutcome, WeylIndex};

pub type DenseStateF64 = DenseState<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type ChannelF64 = Channel<f64>;
pub type PovmF64 = Povm<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("local dimension {0} is not an odd prime")]
    NonPrimeLocalDim(u32),
    #[error("dense simulation needs dimension {0} (limit {MAX_DIM})")]
    TooLarge(u128),
    #[error("not a maximal isotropic generator set: {0}")]
    NotMaximalIsotropic(String),
    #[error("no joint fixed vector of the aligned generators")]
    NoFixedVector,
    #[error("bad registers: {0}")]
    BadRegisters(String),
    #[error("POVM is incomplete (error {0:e})")]
    IncompletePovm(f64),
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bundle class does not fit the protocol: {0}")]
    ClassMismatch(String),
    #[error("query is not in standard form")]
    NonStandardQuery,
    #[error("{0} is not an accept set")]
    NotQualified(String),
    #[error(transparent)]
    Linalg(#[from] symplinalg::LinalgError),
    #[error(transparent)]
    Mmsp(#[from] mmsp::MmspError),
    #[error(transparent)]
    Protocol(#[from] classical_protocols::ProtocolError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;
