//! Accelerator-level simulation: PE arrays, row scheduling, memory-level
//! event accounting, and the reference baseline/Maple configurations.
//!
//! All processing-element models execute the identical Gustavson dataflow —
//! the same intersection checks, the same multiplications in the same
//! floating-point order — so outputs are bit-identical across
//! configurations and only cycle counts and movement events differ. The
//! per-kind event algebra is spelled out on each row model so the numbers
//! stay auditable.
//!
//! Shared per-row accounting (every PE kind):
//! * one intersection event per candidate `k'`;
//! * one compress/decompress event per contributing row stream (the A row,
//!   each surviving B row, and the output row);
//! * one L1 movement event per staged A operand, per staged B operand, and
//!   per written-back output element.
//!
//! Kind-specific accounting is documented on [`matraptor_baseline_row`],
//! [`extensor_baseline_row`], and [`MaplePeState`](crate::pe::MaplePeState).
//! At the accelerator level each PE additionally streams its operands from
//! DRAM — one L2 event per element of `A` and per element of `B` it
//! consumes (deduplicated within a PE, not across PEs) — and one L2 event
//! per element of `C` written back.

use serde::{Deserialize, Serialize};

use crate::cost::{EventCounts, EventKind};
use crate::csr::{CsrMatrix, CsrRow};
use crate::error::{Error, Result};
use crate::kernel::{row_product, SparseRowAccumulator};
use crate::pe::{required_capacities, MaplePeState};

/// Behavioral model a PE runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeKind {
    /// Multi-MAC PE with ARB/BRB/PSB buffers.
    Maple,
    /// Single-MAC PE with sorting queues and round-robin merge passes.
    MatraptorBaseline,
    /// Single-MAC PE with a partial-output buffer at L1.
    ExtensorBaseline,
}

/// Memory level a storage element lives at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemLevel {
    L0,
    L1,
    L2,
}

/// Descriptive tag for one storage element of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryLevelDesc {
    pub level: MemLevel,
    pub role: String,
}

impl MemoryLevelDesc {
    pub fn new(level: MemLevel, role: &str) -> Self {
        MemoryLevelDesc {
            level,
            role: role.to_string(),
        }
    }
}

/// Interconnect style. Accounting tag only; no contention is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interconnect {
    Crossbar,
    Noc,
}

/// How many merge passes the Matraptor baseline spends per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeModel {
    /// Balanced merge tree: `ceil(log2(max(2, distinct k')))` passes.
    #[default]
    LogTree,
    /// One pass regardless of fan-in.
    SinglePass,
    /// One pass per additional selected row: `distinct k' - 1`.
    Linear,
}

/// Topology descriptor for one simulated accelerator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceleratorConfig {
    pub name: String,
    pub pe_count: usize,
    pub macs_per_pe: usize,
    pub pe_kind: PeKind,
    pub memory_levels: Vec<MemoryLevelDesc>,
    pub interconnect: Interconnect,
    #[serde(default)]
    pub merge_model: MergeModel,
}

/// The four reference preset names.
pub const PRESET_NAMES: [&str; 4] = [
    "baseline-matraptor",
    "maple-matraptor",
    "baseline-extensor",
    "maple-extensor",
];

impl AcceleratorConfig {
    /// Look up one of the reference configurations:
    ///
    /// * `baseline-matraptor` — 8 PEs x 1 MAC, SpAL/SpBL at L1, sorting
    ///   queues at L0, crossbar.
    /// * `maple-matraptor` — 4 PEs x 2 MACs, Maple buffers as the only
    ///   memory level, crossbar (8 MACs total, matching its baseline).
    /// * `baseline-extensor` — 128 PEs x 1 MAC (a 16x8 array), LLB and POB
    ///   at L1, PEB at L0, NoC.
    /// * `maple-extensor` — 8 PEs x 16 MACs, LLB at L1, Maple buffers at
    ///   L0, NoC (128 MACs total, matching its baseline).
    pub fn preset(name: &str) -> Result<Self> {
        let config = match name {
            "baseline-matraptor" => AcceleratorConfig {
                name: name.to_string(),
                pe_count: 8,
                macs_per_pe: 1,
                pe_kind: PeKind::MatraptorBaseline,
                memory_levels: vec![
                    MemoryLevelDesc::new(MemLevel::L1, "SpAL"),
                    MemoryLevelDesc::new(MemLevel::L1, "SpBL"),
                    MemoryLevelDesc::new(MemLevel::L0, "sorting-queues"),
                ],
                interconnect: Interconnect::Crossbar,
                merge_model: MergeModel::LogTree,
            },
            "maple-matraptor" => AcceleratorConfig {
                name: name.to_string(),
                pe_count: 4,
                macs_per_pe: 2,
                pe_kind: PeKind::Maple,
                memory_levels: vec![MemoryLevelDesc::new(MemLevel::L0, "ARB/BRB/PSB")],
                interconnect: Interconnect::Crossbar,
                merge_model: MergeModel::LogTree,
            },
            "baseline-extensor" => AcceleratorConfig {
                name: name.to_string(),
                pe_count: 128,
                macs_per_pe: 1,
                pe_kind: PeKind::ExtensorBaseline,
                memory_levels: vec![
                    MemoryLevelDesc::new(MemLevel::L1, "LLB"),
                    MemoryLevelDesc::new(MemLevel::L1, "POB"),
                    MemoryLevelDesc::new(MemLevel::L0, "PEB"),
                ],
                interconnect: Interconnect::Noc,
                merge_model: MergeModel::LogTree,
            },
            "maple-extensor" => AcceleratorConfig {
                name: name.to_string(),
                pe_count: 8,
                macs_per_pe: 16,
                pe_kind: PeKind::Maple,
                memory_levels: vec![
                    MemoryLevelDesc::new(MemLevel::L1, "LLB"),
                    MemoryLevelDesc::new(MemLevel::L0, "ARB/BRB/PSB"),
                ],
                interconnect: Interconnect::Noc,
                merge_model: MergeModel::LogTree,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown preset {:?}; expected one of {:?}",
                    other, PRESET_NAMES
                )))
            }
        };
        debug_assert!(config.validate().is_ok());
        Ok(config)
    }

    /// Parse an explicit configuration from JSON and validate it.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: AcceleratorConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pe_count < 1 {
            return Err(Error::Config("pe_count must be at least 1".into()));
        }
        if self.macs_per_pe < 1 {
            return Err(Error::Config("macs_per_pe must be at least 1".into()));
        }
        if self.pe_kind != PeKind::Maple && self.macs_per_pe != 1 {
            return Err(Error::Config(format!(
                "baseline PE kinds use a single MAC, got {}",
                self.macs_per_pe
            )));
        }
        Ok(())
    }
}

/// Build a configuration from a preset name.
pub fn build_config(descriptor: &str) -> Result<AcceleratorConfig> {
    AcceleratorConfig::preset(descriptor)
}

/// Result of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub config_name: String,
    /// Max over PEs of the sum of its per-row cycles: PEs run concurrently,
    /// rows within a PE serialize.
    pub total_cycles: u64,
    pub events: EventCounts,
    /// L1 traffic attributable to a partial-output buffer; nonzero only
    /// for the Extensor baseline.
    pub pob_l1_mac: u64,
    /// Sum of absolute values of the output, used to pair comparable runs.
    pub output_checksum: f64,
    pub output: CsrMatrix,
}

/// State of one baseline (single-MAC) PE while it processes its rows.
#[derive(Debug)]
pub struct BaselinePeState {
    acc: SparseRowAccumulator,
    pub trace: EventCounts,
    pub cycles: u64,
    pub pob_l1_mac: u64,
    merge_model: MergeModel,
}

impl BaselinePeState {
    pub fn new(output_width: usize, merge_model: MergeModel) -> Self {
        BaselinePeState {
            acc: SparseRowAccumulator::new(output_width),
            trace: EventCounts::new(),
            cycles: 0,
            pob_l1_mac: 0,
            merge_model,
        }
    }

    /// The dataflow phase every PE kind shares: intersect, stage operands,
    /// multiply into the row accumulator, drain the finished row. Returns
    /// the surviving-row count and the number of products formed.
    fn stage_and_multiply(
        &mut self,
        a: &CsrMatrix,
        b: &CsrMatrix,
        i: usize,
    ) -> Result<(usize, u64, CsrRow)> {
        if a.cols != b.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let candidates = a.row_col_ids(i);
        self.trace
            .record(EventKind::Intersection, candidates.len() as u64);
        let surviving = candidates.iter().filter(|&&k| b.row_nnz(k) > 0).count();

        let mut products = 0u64;
        if surviving > 0 {
            self.trace.incr(EventKind::CompressDecompress); // A row decode
            self.trace.record(EventKind::L1Mac, surviving as u64); // A operands
            for &k in candidates {
                let nnz = b.row_nnz(k) as u64;
                if nnz == 0 {
                    continue;
                }
                self.trace.incr(EventKind::CompressDecompress); // B row decode
                self.trace.record(EventKind::L1Mac, nnz); // B operands
                products += nnz;
            }
        }
        let mac_count = row_product(a, b, i, &mut self.acc)? as u64;
        debug_assert_eq!(mac_count, products);
        self.trace.record(EventKind::MacOp, mac_count);

        let row = self.acc.drain_sorted();
        if !row.is_empty() {
            self.trace.incr(EventKind::CompressDecompress); // output compress
            self.trace.record(EventKind::L1Mac, row.len() as u64); // writeback
        }
        Ok((surviving, products, row))
    }
}

fn ceil_log2(x: usize) -> u64 {
    debug_assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as u64
}

/// One row on the Matraptor-style baseline PE.
///
/// Every product is appended to a sorting queue (one L0 event), then the
/// queued partial sums are merged over
/// `passes = ceil(log2(max(2, distinct k')))` sequential passes; each pass
/// re-reads every element from the queue (one L0 event) and circulates the
/// result through the systolic ring (one PE-to-PE event). The single
/// accumulate unit handles one element per cycle, so
/// `cycles = products * (1 + passes)`.
pub fn matraptor_baseline_row(
    pe: &mut BaselinePeState,
    a: &CsrMatrix,
    b: &CsrMatrix,
    i: usize,
) -> Result<CsrRow> {
    let (surviving, products, row) = pe.stage_and_multiply(a, b, i)?;
    if products > 0 {
        let passes = match pe.merge_model {
            MergeModel::LogTree => ceil_log2(surviving.max(2)),
            MergeModel::SinglePass => 1,
            MergeModel::Linear => surviving.saturating_sub(1) as u64,
        };
        pe.trace
            .record(EventKind::L0Mac, products + passes * products);
        pe.trace.record(EventKind::PeMac, passes * products);
        pe.cycles += products * (1 + passes);
    }
    Ok(row)
}

/// One row on the Extensor-style baseline PE.
///
/// Each partial sum is written to the partial-output buffer at L1 and read
/// back for the final accumulation (two POB-tagged L1 events per product);
/// each product also makes two PEB operand accesses (two L0 events). The
/// single MAC spends a multiply cycle plus an accumulate cycle per product,
/// so `cycles = 2 * products`.
pub fn extensor_baseline_row(
    pe: &mut BaselinePeState,
    a: &CsrMatrix,
    b: &CsrMatrix,
    i: usize,
) -> Result<CsrRow> {
    let (_surviving, products, row) = pe.stage_and_multiply(a, b, i)?;
    pe.trace.record(EventKind::L1Mac, 2 * products);
    pe.pob_l1_mac += 2 * products;
    pe.trace.record(EventKind::L0Mac, 2 * products);
    pe.cycles += 2 * products;
    Ok(row)
}

enum PeModel {
    Maple(MaplePeState),
    Baseline(BaselinePeState),
}

/// Run `A * B` on the given accelerator configuration.
///
/// Rows of `A` go to PEs round-robin by row index; PEs are fully
/// concurrent and rows within a PE serialize, so `total_cycles` is the max
/// over PEs of their per-row cycle sums. The simulation is sequential and
/// deterministic: identical inputs yield an identical report.
pub fn simulate(config: &AcceleratorConfig, a: &CsrMatrix, b: &CsrMatrix) -> Result<SimReport> {
    config.validate()?;
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }

    let (arb_cap, brb_cap) = required_capacities(a, b);
    let mut rows: Vec<CsrRow> = vec![CsrRow::default(); a.rows];
    let mut events = EventCounts::new();
    let mut pob_l1_mac = 0u64;
    let mut cycles_per_pe = Vec::with_capacity(config.pe_count);
    // dedup stamp for per-PE B-row DRAM fetches
    let mut fetched_by = vec![usize::MAX; b.rows];
    let mut l2_b_elements = 0u64;

    for p in 0..config.pe_count {
        let mut model = match config.pe_kind {
            PeKind::Maple => PeModel::Maple(MaplePeState::with_capacities(
                config.macs_per_pe,
                b.cols,
                arb_cap,
                brb_cap,
            )),
            PeKind::MatraptorBaseline | PeKind::ExtensorBaseline => {
                PeModel::Baseline(BaselinePeState::new(b.cols, config.merge_model))
            }
        };
        for i in (p..a.rows).step_by(config.pe_count) {
            rows[i] = match &mut model {
                PeModel::Maple(pe) => pe.process_row(a, b, i)?,
                PeModel::Baseline(pe) => match config.pe_kind {
                    PeKind::MatraptorBaseline => matraptor_baseline_row(pe, a, b, i)?,
                    PeKind::ExtensorBaseline => extensor_baseline_row(pe, a, b, i)?,
                    PeKind::Maple => unreachable!(),
                },
            };
            for &k in a.row_col_ids(i) {
                if fetched_by[k] != p {
                    fetched_by[k] = p;
                    l2_b_elements += b.row_nnz(k) as u64;
                }
            }
        }
        match model {
            PeModel::Maple(pe) => {
                cycles_per_pe.push(pe.cycle);
                events += pe.trace;
            }
            PeModel::Baseline(pe) => {
                cycles_per_pe.push(pe.cycles);
                events += pe.trace;
                pob_l1_mac += pe.pob_l1_mac;
            }
        }
    }

    let output = CsrMatrix::from_rows(a.rows, b.cols, rows);
    events.record(
        EventKind::L2Mac,
        a.nnz() as u64 + l2_b_elements + output.nnz() as u64,
    );
    let output_checksum: f64 = output.value.iter().map(|v| v.abs()).sum();

    Ok(SimReport {
        config_name: config.name.clone(),
        total_cycles: cycles_per_pe.iter().copied().max().unwrap_or(0),
        events,
        pob_l1_mac,
        output_checksum,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{compare_reports, compute_energy, EnergyTable};
    use crate::csr::{csr_from_triplets, generate_synthetic, matrices_equal, Triplet};
    use crate::kernel::spgemm_reference;

    fn identity(n: usize) -> CsrMatrix {
        let entries: Vec<Triplet> = (0..n).map(|i| Triplet::new(i, i, 1.0)).collect();
        csr_from_triplets(&entries, n, n).unwrap()
    }

    fn paired_fixture() -> (CsrMatrix, CsrMatrix) {
        let a =
            csr_from_triplets(&[Triplet::new(0, 0, 1.0), Triplet::new(0, 2, 2.0)], 3, 3).unwrap();
        let b = csr_from_triplets(
            &[
                Triplet::new(0, 0, 3.0),
                Triplet::new(0, 2, 4.0),
                Triplet::new(2, 2, 5.0),
            ],
            3,
            3,
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn presets_match_reference_topologies() {
        let bm = AcceleratorConfig::preset("baseline-matraptor").unwrap();
        assert_eq!((bm.pe_count, bm.macs_per_pe), (8, 1));
        let mm = AcceleratorConfig::preset("maple-matraptor").unwrap();
        assert_eq!((mm.pe_count, mm.macs_per_pe), (4, 2));
        let be = AcceleratorConfig::preset("baseline-extensor").unwrap();
        assert_eq!((be.pe_count, be.macs_per_pe), (128, 1));
        let me = AcceleratorConfig::preset("maple-extensor").unwrap();
        assert_eq!((me.pe_count, me.macs_per_pe), (8, 16));
        // each pair fields the same number of MAC units
        assert_eq!(bm.pe_count * bm.macs_per_pe, mm.pe_count * mm.macs_per_pe);
        assert_eq!(be.pe_count * be.macs_per_pe, me.pe_count * me.macs_per_pe);
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(matches!(
            AcceleratorConfig::preset("gamma"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn explicit_single_pe_config_is_valid() {
        let config = AcceleratorConfig {
            name: "single".into(),
            pe_count: 1,
            macs_per_pe: 4,
            pe_kind: PeKind::Maple,
            memory_levels: vec![MemoryLevelDesc::new(MemLevel::L0, "ARB/BRB/PSB")],
            interconnect: Interconnect::Crossbar,
            merge_model: MergeModel::LogTree,
        };
        assert!(config.validate().is_ok());
    }

    #[test]
    fn baseline_kind_requires_single_mac() {
        let mut config = AcceleratorConfig::preset("baseline-matraptor").unwrap();
        config.macs_per_pe = 2;
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn config_json_round_trip() {
        let config = AcceleratorConfig::preset("maple-extensor").unwrap();
        let text = serde_json::to_string(&config).unwrap();
        assert_eq!(AcceleratorConfig::from_json(&text).unwrap(), config);
    }

    #[test]
    fn identity_product_on_every_preset() {
        let eye = identity(4);
        for name in PRESET_NAMES {
            let config = AcceleratorConfig::preset(name).unwrap();
            let report = simulate(&config, &eye, &eye).unwrap();
            assert!(matrices_equal(&report.output, &eye, 0.0), "{}", name);
            assert_eq!(report.events.get(EventKind::MacOp), 4, "{}", name);
            assert_eq!(report.output_checksum, 4.0);
        }
    }

    #[test]
    fn single_pe_maple_matches_reference() {
        let a = generate_synthetic(32, 32, 0.1, 21);
        let config = AcceleratorConfig {
            name: "single".into(),
            pe_count: 1,
            macs_per_pe: 4,
            pe_kind: PeKind::Maple,
            memory_levels: vec![MemoryLevelDesc::new(MemLevel::L0, "ARB/BRB/PSB")],
            interconnect: Interconnect::Crossbar,
            merge_model: MergeModel::LogTree,
        };
        let report = simulate(&config, &a, &a).unwrap();
        let reference = spgemm_reference(&a, &a).unwrap();
        assert!(matrices_equal(&report.output, &reference, 1e-10));
    }

    #[test]
    fn matraptor_row_model_hand_examples() {
        let (a, b) = paired_fixture();
        // fixture row: 3 products over 2 surviving rows -> 1 merge pass
        let mut pe = BaselinePeState::new(3, MergeModel::LogTree);
        matraptor_baseline_row(&mut pe, &a, &b, 0).unwrap();
        assert_eq!(pe.trace.get(EventKind::MacOp), 3);
        assert_eq!(pe.cycles, 6);
        assert_eq!(pe.trace.get(EventKind::L0Mac), 3 + 3);
        assert_eq!(pe.trace.get(EventKind::PeMac), 3);

        // single-product row: one merge pass over one element
        let a1 = csr_from_triplets(&[Triplet::new(0, 0, 2.0)], 1, 1).unwrap();
        let b1 = csr_from_triplets(&[Triplet::new(0, 0, 3.0)], 1, 1).unwrap();
        let mut pe = BaselinePeState::new(1, MergeModel::LogTree);
        matraptor_baseline_row(&mut pe, &a1, &b1, 0).unwrap();
        assert_eq!(pe.trace.get(EventKind::MacOp), 1);
        assert_eq!(pe.cycles, 2);

        // empty row: nothing happens
        let mut pe = BaselinePeState::new(3, MergeModel::LogTree);
        matraptor_baseline_row(&mut pe, &a, &b, 1).unwrap();
        assert_eq!(pe.trace.total(), 0);
        assert_eq!(pe.cycles, 0);
    }

    #[test]
    fn extensor_row_model_hand_examples() {
        let (a, b) = paired_fixture();
        let mut pe = BaselinePeState::new(3, MergeModel::LogTree);
        extensor_baseline_row(&mut pe, &a, &b, 0).unwrap();
        assert_eq!(pe.trace.get(EventKind::MacOp), 3);
        assert_eq!(pe.cycles, 6);
        assert_eq!(pe.pob_l1_mac, 6);
        // operand loads (2 + 3) + writeback 2 + POB write/read 6
        assert_eq!(pe.trace.get(EventKind::L1Mac), 5 + 2 + 6);

        let a1 = csr_from_triplets(&[Triplet::new(0, 0, 2.0)], 1, 1).unwrap();
        let b1 = csr_from_triplets(&[Triplet::new(0, 0, 3.0)], 1, 1).unwrap();
        let mut pe = BaselinePeState::new(1, MergeModel::LogTree);
        extensor_baseline_row(&mut pe, &a1, &b1, 0).unwrap();
        assert_eq!(pe.cycles, 2);
        assert_eq!(pe.pob_l1_mac, 2);

        let mut pe = BaselinePeState::new(3, MergeModel::LogTree);
        extensor_baseline_row(&mut pe, &a, &b, 1).unwrap();
        assert_eq!(pe.trace.total(), 0);
        assert_eq!(pe.cycles, 0);
    }

    #[test]
    fn outputs_identical_across_all_presets() {
        let a = generate_synthetic(40, 40, 0.08, 33);
        let reference = spgemm_reference(&a, &a).unwrap();
        for name in PRESET_NAMES {
            let config = AcceleratorConfig::preset(name).unwrap();
            let report = simulate(&config, &a, &a).unwrap();
            assert_eq!(report.output, reference, "{} must match bit-for-bit", name);
        }
    }

    #[test]
    fn dataflow_fixes_compute_events_across_presets() {
        let a = generate_synthetic(30, 30, 0.12, 9);
        let mut mac = None;
        let mut intersections = None;
        for name in PRESET_NAMES {
            let config = AcceleratorConfig::preset(name).unwrap();
            let report = simulate(&config, &a, &a).unwrap();
            let m = report.events.get(EventKind::MacOp);
            let n = report.events.get(EventKind::Intersection);
            assert_eq!(*mac.get_or_insert(m), m, "{}", name);
            assert_eq!(*intersections.get_or_insert(n), n, "{}", name);
        }
    }

    #[test]
    fn maple_moves_less_than_matraptor_baseline() {
        let a = generate_synthetic(48, 48, 0.1, 17);
        let baseline = simulate(
            &AcceleratorConfig::preset("baseline-matraptor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        let maple = simulate(
            &AcceleratorConfig::preset("maple-matraptor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        assert_eq!(
            baseline.events.get(EventKind::MacOp),
            maple.events.get(EventKind::MacOp)
        );
        let baseline_moves =
            baseline.events.get(EventKind::L1Mac) + baseline.events.get(EventKind::PeMac);
        let maple_moves = maple.events.get(EventKind::L1Mac) + maple.events.get(EventKind::PeMac);
        assert!(maple_moves < baseline_moves);
        assert!(maple.total_cycles < baseline.total_cycles);
    }

    #[test]
    fn pob_traffic_exists_only_on_extensor_baseline() {
        let a = generate_synthetic(32, 32, 0.1, 2);
        let baseline = simulate(
            &AcceleratorConfig::preset("baseline-extensor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        let maple = simulate(
            &AcceleratorConfig::preset("maple-extensor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        let products = baseline.events.get(EventKind::MacOp);
        assert!(products > 0);
        assert_eq!(baseline.pob_l1_mac, 2 * products);
        assert_eq!(maple.pob_l1_mac, 0);
    }

    #[test]
    fn simulate_is_deterministic() {
        let a = generate_synthetic(25, 25, 0.15, 5);
        let config = AcceleratorConfig::preset("maple-matraptor").unwrap();
        let r1 = simulate(&config, &a, &a).unwrap();
        let r2 = simulate(&config, &a, &a).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn simulate_rejects_shape_mismatch() {
        let a = CsrMatrix::zero(2, 3);
        let b = CsrMatrix::zero(2, 2);
        let config = AcceleratorConfig::preset("maple-matraptor").unwrap();
        assert!(matches!(simulate(&config, &a, &b), Err(Error::Shape(_))));
    }

    #[test]
    fn comparison_of_paired_reports() {
        let a = generate_synthetic(40, 40, 0.1, 77);
        let table = EnergyTable::default_table();
        let base_sim = simulate(
            &AcceleratorConfig::preset("baseline-matraptor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        let maple_sim = simulate(
            &AcceleratorConfig::preset("maple-matraptor").unwrap(),
            &a,
            &a,
        )
        .unwrap();
        let base_cost = compute_energy(&base_sim.events, &table);
        let maple_cost = compute_energy(&maple_sim.events, &table);

        let same = compare_reports((&base_sim, &base_cost), (&base_sim, &base_cost)).unwrap();
        assert_eq!(same.energy_benefit_pct, 0.0);
        assert_eq!(same.speedup_pct, 0.0);

        let cmp = compare_reports((&maple_sim, &maple_cost), (&base_sim, &base_cost)).unwrap();
        assert!(cmp.energy_benefit_pct > 0.0);
        assert!(cmp.speedup_pct > 0.0);
    }

    #[test]
    fn comparison_rejects_mismatched_inputs() {
        let a = generate_synthetic(20, 20, 0.2, 1);
        let c = generate_synthetic(20, 20, 0.2, 2);
        let table = EnergyTable::default_table();
        let config = AcceleratorConfig::preset("maple-matraptor").unwrap();
        let ra = simulate(&config, &a, &a).unwrap();
        let rc = simulate(&config, &c, &c).unwrap();
        let ca = compute_energy(&ra.events, &table);
        let cc = compute_energy(&rc.events, &table);
        assert!(matches!(
            compare_reports((&ra, &ca), (&rc, &cc)),
            Err(Error::Comparison(_))
        ));
    }
}
