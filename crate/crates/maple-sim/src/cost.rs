//! Per-action energy accounting.
//!
//! Every simulated action falls into one of seven categories: three compute
//! kinds (MAC, CSR compress/decompress, intersection) and four data-movement
//! kinds keyed by how far the operand travels (L0, across PEs, L1, L2).
//! Energy is `count * cost` per kind under a user-supplied table; the
//! shipped default is a placeholder that respects the required ordering
//! (compute cheapest, movement increasingly expensive with distance), not a
//! technology characterization. Published comparisons should state the
//! table used.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::sim::SimReport;

/// The seven cost categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// One multiply-accumulate.
    MacOp,
    /// One CSR stream compression or decompression of a row.
    CompressDecompress,
    /// One intersection check of a candidate row pairing.
    Intersection,
    /// Register-level traffic between L0 storage and a MAC.
    L0Mac,
    /// Traffic between processing elements.
    PeMac,
    /// Traffic between level-1 storage and a MAC.
    L1Mac,
    /// Traffic between level-2 storage (DRAM) and a MAC.
    L2Mac,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::MacOp,
        EventKind::CompressDecompress,
        EventKind::Intersection,
        EventKind::L0Mac,
        EventKind::PeMac,
        EventKind::L1Mac,
        EventKind::L2Mac,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::MacOp => "MacOp",
            EventKind::CompressDecompress => "CompressDecompress",
            EventKind::Intersection => "Intersection",
            EventKind::L0Mac => "L0Mac",
            EventKind::PeMac => "PeMac",
            EventKind::L1Mac => "L1Mac",
            EventKind::L2Mac => "L2Mac",
        }
    }

    /// Exact, case-sensitive name lookup (the energy-table file format).
    pub fn from_name(name: &str) -> Option<Self> {
        EventKind::ALL.into_iter().find(|k| k.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tally of events per kind. Addition is elementwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventCounts([u64; 7]);

impl EventCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, kind: EventKind) -> u64 {
        self.0[kind.index()]
    }

    pub fn record(&mut self, kind: EventKind, n: u64) {
        self.0[kind.index()] += n;
    }

    pub fn incr(&mut self, kind: EventKind) {
        self.record(kind, 1);
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EventKind, u64)> + '_ {
        EventKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }
}

impl Add for EventCounts {
    type Output = EventCounts;

    fn add(self, rhs: EventCounts) -> EventCounts {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for EventCounts {
    fn add_assign(&mut self, rhs: EventCounts) {
        for i in 0..7 {
            self.0[i] += rhs.0[i];
        }
    }
}

/// Energy cost per action, one positive entry per [`EventKind`].
///
/// Valid tables satisfy
/// `max(MacOp, CompressDecompress, Intersection) <= L0Mac <= PeMac <= L1Mac <= L2Mac`:
/// compute never costs more than register traffic, and movement cost grows
/// with distance from the MAC.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable([f64; 7]);

impl EnergyTable {
    /// Placeholder defaults honoring the ordering constraint.
    pub fn default_table() -> Self {
        let mut t = EnergyTable([0.0; 7]);
        t.0[EventKind::MacOp.index()] = 1.0;
        t.0[EventKind::CompressDecompress.index()] = 1.0;
        t.0[EventKind::Intersection.index()] = 1.0;
        t.0[EventKind::L0Mac.index()] = 2.0;
        t.0[EventKind::PeMac.index()] = 6.0;
        t.0[EventKind::L1Mac.index()] = 20.0;
        t.0[EventKind::L2Mac.index()] = 200.0;
        t
    }

    /// Build a table from `(kind, cost)` pairs; all seven kinds required.
    pub fn from_entries(entries: &[(EventKind, f64)]) -> Result<Self> {
        let mut costs = [None; 7];
        for &(kind, cost) in entries {
            if costs[kind.index()].replace(cost).is_some() {
                return Err(Error::Table(format!("duplicate entry for {}", kind)));
            }
        }
        let mut table = [0.0; 7];
        for kind in EventKind::ALL {
            table[kind.index()] = costs[kind.index()]
                .ok_or_else(|| Error::Table(format!("missing entry for {}", kind)))?;
        }
        let table = EnergyTable(table);
        table.validate()?;
        Ok(table)
    }

    pub fn get(&self, kind: EventKind) -> f64 {
        self.0[kind.index()]
    }

    /// Enforce positivity and the cost-ordering constraint.
    pub fn validate(&self) -> Result<()> {
        for kind in EventKind::ALL {
            let v = self.get(kind);
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Table(format!(
                    "{} must be a positive finite cost, got {}",
                    kind, v
                )));
            }
        }
        let compute_max = self
            .get(EventKind::MacOp)
            .max(self.get(EventKind::CompressDecompress))
            .max(self.get(EventKind::Intersection));
        let chain = [
            ("compute", compute_max),
            ("L0Mac", self.get(EventKind::L0Mac)),
            ("PeMac", self.get(EventKind::PeMac)),
            ("L1Mac", self.get(EventKind::L1Mac)),
            ("L2Mac", self.get(EventKind::L2Mac)),
        ];
        for pair in chain.windows(2) {
            if pair[0].1 > pair[1].1 {
                return Err(Error::Table(format!(
                    "cost ordering violated: {} ({}) > {} ({})",
                    pair[0].0, pair[0].1, pair[1].0, pair[1].1
                )));
            }
        }
        Ok(())
    }

    /// Parse the flat `kind = value` text format. Keys are the exact
    /// case-sensitive kind names; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `kind = value`", lineno + 1))
            })?;
            let kind = EventKind::from_name(key.trim()).ok_or_else(|| {
                Error::Table(format!(
                    "line {}: unknown kind {:?}",
                    lineno + 1,
                    key.trim()
                ))
            })?;
            let cost: f64 = val.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: bad cost {:?}", lineno + 1, val.trim()))
            })?;
            entries.push((kind, cost));
        }
        EnergyTable::from_entries(&entries)
    }
}

impl Default for EnergyTable {
    fn default() -> Self {
        Self::default_table()
    }
}

/// Load a table from a file path, or return the default for `"default"`.
pub fn load_energy_table(source: &str) -> Result<EnergyTable> {
    if source == "default" {
        return Ok(EnergyTable::default_table());
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::io(source, e))?;
    EnergyTable::parse(&text)
}

/// Relative metrics of a candidate run against a baseline run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// `100 * (1 - E_candidate / E_baseline)`.
    pub energy_benefit_pct: f64,
    /// `100 * (cycles_baseline / cycles_candidate - 1)`.
    pub speedup_pct: f64,
}

/// Energy totals for one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub total_energy: f64,
    breakdown: [f64; 7],
    pub vs_baseline: Option<Comparison>,
}

impl CostReport {
    pub fn breakdown(&self, kind: EventKind) -> f64 {
        self.breakdown[kind.index()]
    }
}

/// Price an event tally under a table. The total is the breakdown summed in
/// fixed kind order, so it can be re-derived exactly from emitted reports.
pub fn compute_energy(events: &EventCounts, table: &EnergyTable) -> CostReport {
    let mut breakdown = [0.0; 7];
    let mut total = 0.0;
    for kind in EventKind::ALL {
        let e = events.get(kind) as f64 * table.get(kind);
        breakdown[kind.index()] = e;
        total += e;
    }
    CostReport {
        total_energy: total,
        breakdown,
        vs_baseline: None,
    }
}

/// Compare a candidate run against a baseline run of the same input.
///
/// The runs must describe the same product (checked through the output
/// checksum, which is bit-deterministic across execution models).
pub fn compare_reports(
    candidate: (&SimReport, &CostReport),
    baseline: (&SimReport, &CostReport),
) -> Result<Comparison> {
    let (cand_sim, cand_cost) = candidate;
    let (base_sim, base_cost) = baseline;
    if cand_sim.output_checksum != base_sim.output_checksum {
        return Err(Error::Comparison(format!(
            "output checksums differ ({} vs {}); runs are not of the same input",
            cand_sim.output_checksum, base_sim.output_checksum
        )));
    }
    if base_cost.total_energy <= 0.0 {
        return Err(Error::Comparison(
            "baseline energy is zero; nothing to compare against".into(),
        ));
    }
    if cand_sim.total_cycles == 0 || base_sim.total_cycles == 0 {
        return Err(Error::Comparison(
            "zero cycle count; nothing to compare against".into(),
        ));
    }
    Ok(Comparison {
        energy_benefit_pct: 100.0 * (1.0 - cand_cost.total_energy / base_cost.total_energy),
        speedup_pct: 100.0 * (base_sim.total_cycles as f64 / cand_sim.total_cycles as f64 - 1.0),
    })
}
