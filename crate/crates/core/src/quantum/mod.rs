//! Labelled Choi matrices, the link product, and the quantum supermap that
//! computes `f6q` with three queries.

mod choi;
mod embedding;
mod gates;
mod supermap;

pub use choi::{link_product, trace_distance, ChoiMatrix, LabeledSpace, DENSE_LIMIT, PRUNE};
pub use embedding::{
    check_classical_normalization, embed_process_function, DiagonalProcessMatrix, EmbeddedSlot, NormalizationReport,
};
pub use gates::{choi_of_operator, h_ij, parity_query, phase_oracle, unitarity_error, Completion, QUERY_DIM};
pub use supermap::{
    f6q_row, f6q_rows, g_subroutine, measure_and_decode, oracle_choi, plugged_subroutine, pure_state_amplitudes,
    reproduce_registers, run_f6q, state_csv, w_tilde_lugano, Decoded, QuantumRow, Readout, CLASSICAL_TOL,
};
