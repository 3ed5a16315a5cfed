//! Query-complexity workbench for classical-deterministic process functions
//! and quantum supermaps.
//!
//! The crate is organised bottom-up:
//!
//! * [`boolean`]: Boolean functions, classical oracles, decision trees and
//!   the complexity measures `D`, `deg` and `C`.
//! * [`process`]: table-backed process functions with validity by fixed-point
//!   enumeration, reductions, link products, causal definiteness and the
//!   decision-tree correspondence.
//! * [`lugano`]: the Lugano process, its six-input extension and the
//!   functions `f6c` / `f6q`, with golden reference tables.
//! * [`composition`]: recursive functions `f^(l)` and composed processes.
//! * [`quantum`]: labelled Choi matrices, the link product, the phase
//!   oracle and the three-query quantum supermap computing `f6q`.
//! * [`sdp`]: the sequential-query SDP, SDPA export/import and solution
//!   verification.
//! * [`cli`]: the `workbench` command-line front end.

pub mod boolean;
pub mod cli;
pub mod composition;
pub mod error;
pub mod lugano;
pub mod process;
pub mod quantum;
pub mod sdp;

pub use error::{Error, Result};
