//! Desk-scale simulator and kernel library for row-wise-product (Gustavson)
//! sparse tensor accelerators.
//!
//! The crate models the Maple processing element — several MAC units fed
//! from CSR-metadata-driven row buffers, accumulating into a per-column
//! partial-sum register file — next to single-MAC baseline PE designs in
//! Matraptor- and Extensor-style accelerator topologies. Runs report cycle
//! counts, per-kind event tallies, and energy under a configurable
//! per-action cost table.
//!
//! Module map:
//! * [`csr`] — CSR representation, validation, conversions, synthesis.
//! * [`mtx`] — Matrix Market ingestion.
//! * [`kernel`] — Gustavson row products plus a dense brute-force oracle.
//! * [`pe`] — the Maple PE functional/timing model.
//! * [`sim`] — accelerator configurations and whole-array simulation.
//! * [`cost`] — event kinds, energy tables, report comparison.
//! * [`datasets`] — benchmark-shaped synthetic matrix presets.

pub mod cost;
pub mod csr;
pub mod datasets;
pub mod error;
pub mod kernel;
pub mod mtx;
pub mod pe;
pub mod sim;

pub use cost::{
    compare_reports, compute_energy, load_energy_table, Comparison, CostReport, EnergyTable,
    EventCounts, EventKind,
};
pub use csr::{
    csr_from_triplets, generate_synthetic, matrices_equal, to_dense, validate_csr, CsrMatrix,
    CsrRow, DenseMatrix, Triplet,
};
pub use error::{Error, Result};
pub use kernel::{
    dense_matmul_oracle, derive_j_indices, derive_k_indices, row_product, spgemm_reference,
    SparseRowAccumulator,
};
pub use mtx::parse_matrix_market;
pub use pe::MaplePeState;
pub use sim::{build_config, simulate, AcceleratorConfig, PeKind, SimReport, PRESET_NAMES};
