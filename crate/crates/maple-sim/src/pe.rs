//! Functional and timing model of one Maple processing element.
//!
//! A Maple PE multiplies one row of `A` against the matching rows of `B`
//! entirely inside the PE:
//!
//! * **ARB** (A-row buffer) holds the current row's nonzeros with their
//!   metadata. Each entry carries `reps`, the number of multiplications it
//!   performs, derived from adjacent `row_ptr` entries of `B` — the same
//!   quantity the hardware control logic counts down.
//! * **BRB** (B-rows buffer) holds the concatenated nonzeros of the selected
//!   rows of `B`, so each ARB entry pairs with the next `reps` BRB entries
//!   in FIFO order.
//! * **PSB** (partial-sum buffer) is a `1 x N` register file indexed by the
//!   output column `j'`; each register has its own adder, so two products
//!   aimed at the same register cannot issue in the same cycle.
//!
//! Products issue to the `P` MAC units strictly in FIFO order, up to `P`
//! per cycle, cutting a new cycle on a register conflict. Timing charges
//! MAC issue cycles only; buffer fills and drains appear as movement events
//! in the trace rather than as cycles.

use std::collections::VecDeque;

use crate::cost::{EventCounts, EventKind};
use crate::csr::{CsrMatrix, CsrRow};
use crate::error::{Error, Result};

/// One A-row nonzero staged for multiplication, with its CSR metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArbEntry {
    pub value: f64,
    /// Column of this value in `A`, i.e. the row of `B` it selects.
    pub k_prime: usize,
    /// Row of `A` being processed.
    pub row_i: usize,
    /// Multiplications this entry performs: the nonzero count of `B`'s row
    /// `k_prime`, from adjacent `row_ptr` entries.
    pub reps: usize,
}

/// One staged nonzero of a selected `B` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrbEntry {
    pub value: f64,
    /// Output column this value contributes to.
    pub j_prime: usize,
    /// Source row of `B`.
    pub k_prime: usize,
}

/// One partial-sum register. `value` is meaningful only while `occupied`.
#[derive(Debug, Clone, Copy)]
pub struct PsbRegister {
    pub value: f64,
    pub occupied: bool,
    /// Position of this register in the 1xN file.
    pub j: usize,
}

/// State of a single Maple PE: buffers, register file, cycle counter, and
/// event trace.
#[derive(Debug, Clone)]
pub struct MaplePeState {
    mac_count: usize,
    arb: VecDeque<ArbEntry>,
    brb: VecDeque<BrbEntry>,
    psb: Vec<PsbRegister>,
    touched: Vec<usize>,
    arb_capacity: usize,
    brb_capacity: usize,
    pub cycle: u64,
    pub trace: EventCounts,
}

impl MaplePeState {
    /// PE with `mac_count` MAC units and a PSB spanning `psb_width` output
    /// columns, with unbounded staging buffers.
    pub fn new(mac_count: usize, psb_width: usize) -> Self {
        Self::with_capacities(mac_count, psb_width, usize::MAX, usize::MAX)
    }

    /// PE with explicit ARB/BRB capacities. Use
    /// [`required_capacities`] to size them for a given input pair.
    pub fn with_capacities(
        mac_count: usize,
        psb_width: usize,
        arb_capacity: usize,
        brb_capacity: usize,
    ) -> Self {
        assert!(mac_count >= 1, "a PE needs at least one MAC unit");
        MaplePeState {
            mac_count,
            arb: VecDeque::new(),
            brb: VecDeque::new(),
            psb: (0..psb_width)
                .map(|j| PsbRegister {
                    value: 0.0,
                    occupied: false,
                    j,
                })
                .collect(),
            touched: Vec::new(),
            arb_capacity,
            brb_capacity,
            cycle: 0,
            trace: EventCounts::new(),
        }
    }

    pub fn mac_count(&self) -> usize {
        self.mac_count
    }

    pub fn psb_width(&self) -> usize {
        self.psb.len()
    }

    /// True when both FIFOs are empty and the PSB holds no live partials.
    pub fn is_idle(&self) -> bool {
        self.arb.is_empty() && self.brb.is_empty() && self.touched.is_empty()
    }

    pub fn arb_entries(&self) -> impl Iterator<Item = &ArbEntry> {
        self.arb.iter()
    }

    pub fn brb_entries(&self) -> impl Iterator<Item = &BrbEntry> {
        self.brb.iter()
    }

    pub fn psb_register(&self, j: usize) -> &PsbRegister {
        &self.psb[j]
    }

    /// Filter a row's `k'` indices down to those whose `B` row is
    /// non-empty. One intersection event fires per candidate checked.
    pub fn intersect_rows(&mut self, a_row_colids: &[usize], b: &CsrMatrix) -> Result<Vec<usize>> {
        let mut surviving = Vec::with_capacity(a_row_colids.len());
        for &k in a_row_colids {
            if k >= b.rows {
                return Err(Error::Bounds(format!(
                    "k' {} out of range for B with {} rows",
                    k, b.rows
                )));
            }
            self.trace.incr(EventKind::Intersection);
            if b.row_nnz(k) > 0 {
                surviving.push(k);
            }
        }
        Ok(surviving)
    }

    /// Stage row `i` of `A` and the matching rows of `B` into ARB/BRB.
    ///
    /// Emits one L1 movement event per staged element and one
    /// compress/decompress event per row stream that contributes elements
    /// (the A row if anything survived, plus each surviving B row).
    pub fn load_row_buffers(&mut self, a: &CsrMatrix, b: &CsrMatrix, i: usize) -> Result<()> {
        assert!(self.is_idle(), "load_row_buffers requires an idle PE");
        if a.cols != b.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        if i >= a.rows {
            return Err(Error::Bounds(format!(
                "row {} out of range for {} rows",
                i, a.rows
            )));
        }
        assert_eq!(self.psb.len(), b.cols, "PSB width must equal B.cols");

        let row = a.row_range(i);
        let surviving = self.intersect_rows(&a.col_id[row.clone()], b)?;
        if surviving.len() > self.arb_capacity {
            return Err(Error::Capacity(format!(
                "row {} needs {} ARB slots but only {} are configured",
                i,
                surviving.len(),
                self.arb_capacity
            )));
        }
        let staged_b: usize = surviving.iter().map(|&k| b.row_nnz(k)).sum();
        if staged_b > self.brb_capacity {
            return Err(Error::Capacity(format!(
                "row {} needs {} BRB slots but only {} are configured",
                i, staged_b, self.brb_capacity
            )));
        }

        if !surviving.is_empty() {
            self.trace.incr(EventKind::CompressDecompress); // A row stream decode
        }
        for (&k, &a_val) in a.col_id[row.clone()].iter().zip(&a.value[row]) {
            if b.row_nnz(k) == 0 {
                continue;
            }
            self.arb.push_back(ArbEntry {
                value: a_val,
                k_prime: k,
                row_i: i,
                reps: b.row_nnz(k),
            });
            self.trace.incr(EventKind::L1Mac);
        }
        for &k in &surviving {
            self.trace.incr(EventKind::CompressDecompress); // B row stream decode
            for (j, b_val) in b.iter_row(k) {
                self.brb.push_back(BrbEntry {
                    value: b_val,
                    j_prime: j,
                    k_prime: k,
                });
                self.trace.incr(EventKind::L1Mac);
            }
        }
        Ok(())
    }

    /// Run the staged products through the MAC units.
    ///
    /// Products issue in FIFO order (ascending `k'`, then ascending `j'`
    /// within a selected row), at most `mac_count` per cycle and never two
    /// products onto the same PSB register in one cycle. Each product adds
    /// one MAC event and one L0 event for the register read-modify-write.
    /// Empty buffers are a no-op costing zero cycles.
    pub fn schedule_and_execute(&mut self) {
        let mut group: Vec<usize> = Vec::with_capacity(self.mac_count);
        let mut groups = 0u64;
        while let Some(entry) = self.arb.pop_front() {
            for _ in 0..entry.reps {
                let b = self
                    .brb
                    .pop_front()
                    .expect("BRB underrun: reps out of sync with staged B rows");
                debug_assert_eq!(b.k_prime, entry.k_prime);
                if group.len() == self.mac_count || group.contains(&b.j_prime) {
                    groups += 1;
                    group.clear();
                }
                group.push(b.j_prime);

                let product = entry.value * b.value;
                let reg = &mut self.psb[b.j_prime];
                if reg.occupied {
                    reg.value += product;
                } else {
                    reg.value = product;
                    reg.occupied = true;
                    self.touched.push(b.j_prime);
                }
                self.trace.incr(EventKind::MacOp);
                self.trace.incr(EventKind::L0Mac);
            }
        }
        if !group.is_empty() {
            groups += 1;
        }
        self.cycle += groups;
    }

    /// Pull the finished row of `C` out of the PSB in ascending column
    /// order and reset the register file.
    ///
    /// A non-empty row costs one compress event for the output stream plus
    /// one L1 movement event per emitted element. Registers that cancelled
    /// to exactly 0.0 are still occupied and are emitted.
    pub fn drain_psb(&mut self) -> CsrRow {
        self.touched.sort_unstable();
        let mut row = CsrRow {
            col_id: Vec::with_capacity(self.touched.len()),
            value: Vec::with_capacity(self.touched.len()),
        };
        for &j in &self.touched {
            let reg = &mut self.psb[j];
            row.col_id.push(j);
            row.value.push(reg.value);
            reg.value = 0.0;
            reg.occupied = false;
        }
        self.touched.clear();
        if !row.is_empty() {
            self.trace.incr(EventKind::CompressDecompress);
            self.trace.record(EventKind::L1Mac, row.len() as u64);
        }
        row
    }

    /// Convenience: load, execute, and drain one row.
    pub fn process_row(&mut self, a: &CsrMatrix, b: &CsrMatrix, i: usize) -> Result<CsrRow> {
        self.load_row_buffers(a, b, i)?;
        self.schedule_and_execute();
        Ok(self.drain_psb())
    }
}

/// ARB/BRB capacities sufficient for every row of `A * B`: the widest
/// surviving A row and the widest concatenation of selected B rows.
pub fn required_capacities(a: &CsrMatrix, b: &CsrMatrix) -> (usize, usize) {
    let mut arb = 0;
    let mut brb = 0;
    for i in 0..a.rows {
        let mut row_arb = 0;
        let mut row_brb = 0;
        for &k in a.row_col_ids(i) {
            let nnz = b.row_nnz(k);
            if nnz > 0 {
                row_arb += 1;
                row_brb += nnz;
            }
        }
        arb = arb.max(row_arb);
        brb = brb.max(row_brb);
    }
    (arb, brb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csr::{csr_from_triplets, Triplet};
    use crate::kernel::spgemm_reference;

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
    fn intersect_keeps_nonempty_rows() {
        let (_, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        let surviving = pe.intersect_rows(&[0, 2], &b).unwrap();
        assert_eq!(surviving, vec![0, 2]);
        assert_eq!(pe.trace.get(EventKind::Intersection), 2);
    }

    #[test]
    fn intersect_drops_empty_rows() {
        let (_, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        let surviving = pe.intersect_rows(&[1], &b).unwrap();
        assert!(surviving.is_empty());
        assert_eq!(pe.trace.get(EventKind::Intersection), 1);
    }

    #[test]
    fn intersect_vacuous_input() {
        let (_, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        assert!(pe.intersect_rows(&[], &b).unwrap().is_empty());
        assert_eq!(pe.trace.total(), 0);
    }

    #[test]
    fn intersect_bounds_check() {
        let (_, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        assert!(matches!(pe.intersect_rows(&[7], &b), Err(Error::Bounds(_))));
    }

    #[test]
    fn load_stages_fixture_row() {
        let (a, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        let arb: Vec<_> = pe.arb_entries().copied().collect();
        assert_eq!(arb.len(), 2);
        assert_eq!((arb[0].k_prime, arb[0].reps), (0, 2));
        assert_eq!((arb[1].k_prime, arb[1].reps), (2, 1));
        assert_eq!(pe.brb_entries().count(), 3);
        // two ARB + three BRB element fetches
        assert_eq!(pe.trace.get(EventKind::L1Mac), 5);
    }

    #[test]
    fn load_empty_row_stages_nothing() {
        let (a, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        pe.load_row_buffers(&a, &b, 1).unwrap();
        assert!(pe.is_idle());
        assert_eq!(pe.trace.get(EventKind::L1Mac), 0);
        assert_eq!(pe.trace.get(EventKind::L0Mac), 0);
        assert_eq!(pe.trace.get(EventKind::PeMac), 0);
    }

    #[test]
    fn load_single_entry_against_wide_row() {
        let a = csr_from_triplets(&[Triplet::new(0, 0, 2.0)], 1, 1).unwrap();
        let b = csr_from_triplets(
            &[
                Triplet::new(0, 0, 1.0),
                Triplet::new(0, 1, 2.0),
                Triplet::new(0, 2, 3.0),
                Triplet::new(0, 3, 4.0),
            ],
            1,
            4,
        )
        .unwrap();
        let mut pe = MaplePeState::new(2, 4);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        let arb: Vec<_> = pe.arb_entries().copied().collect();
        assert_eq!(arb.len(), 1);
        assert_eq!(arb[0].reps, 4);
        assert_eq!(pe.brb_entries().count(), 4);
    }

    #[test]
    fn load_respects_capacity() {
        let (a, b) = paired_fixture();
        let mut pe = MaplePeState::with_capacities(4, 3, 1, 16);
        assert!(matches!(
            pe.load_row_buffers(&a, &b, 0),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn schedule_fixture_takes_two_cycles() {
        let (a, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        pe.schedule_and_execute();
        // three products, two of them on register 2, so one conflict split
        assert_eq!(pe.trace.get(EventKind::MacOp), 3);
        assert_eq!(pe.cycle, 2);
        assert_eq!(pe.psb_register(0).value, 3.0);
        assert_eq!(pe.psb_register(2).value, 14.0);
        assert!(!pe.psb_register(1).occupied);
    }

    #[test]
    fn schedule_distinct_targets_fill_all_macs() {
        // 8 products with pairwise-distinct output columns
        let a = csr_from_triplets(&[Triplet::new(0, 0, 1.0)], 1, 1).unwrap();
        let b_entries: Vec<Triplet> = (0..8).map(|j| Triplet::new(0, j, 1.0 + j as f64)).collect();
        let b = csr_from_triplets(&b_entries, 1, 8).unwrap();
        let mut pe = MaplePeState::new(4, 8);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        pe.schedule_and_execute();
        assert_eq!(pe.trace.get(EventKind::MacOp), 8);
        assert_eq!(pe.cycle, 2);
    }

    #[test]
    fn schedule_single_product_single_mac() {
        let a = csr_from_triplets(&[Triplet::new(0, 0, 2.0)], 1, 1).unwrap();
        let b = csr_from_triplets(&[Triplet::new(0, 0, 3.0)], 1, 1).unwrap();
        let mut pe = MaplePeState::new(1, 1);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        pe.schedule_and_execute();
        assert_eq!(pe.cycle, 1);
        assert_eq!(pe.psb_register(0).value, 6.0);
    }

    #[test]
    fn schedule_empty_is_noop() {
        let mut pe = MaplePeState::new(4, 4);
        pe.schedule_and_execute();
        assert_eq!(pe.cycle, 0);
        assert_eq!(pe.trace.total(), 0);
    }

    #[test]
    fn drain_returns_sorted_row_and_resets() {
        let (a, b) = paired_fixture();
        let mut pe = MaplePeState::new(4, 3);
        pe.load_row_buffers(&a, &b, 0).unwrap();
        pe.schedule_and_execute();
        let row = pe.drain_psb();
        assert_eq!(row.col_id, vec![0, 2]);
        assert_eq!(row.value, vec![3.0, 14.0]);
        assert!(pe.is_idle());
        // drain adds one writeback movement per element
        assert_eq!(pe.trace.get(EventKind::L1Mac), 5 + 2);
    }

    #[test]
    fn drain_untouched_psb_is_empty() {
        let mut pe = MaplePeState::new(2, 4);
        let row = pe.drain_psb();
        assert!(row.is_empty());
        assert_eq!(pe.trace.total(), 0);
    }

    #[test]
    fn drain_emits_cancelled_registers() {
        let a =
            csr_from_triplets(&[Triplet::new(0, 0, 1.0), Triplet::new(0, 1, 1.0)], 1, 2).unwrap();
        let b =
            csr_from_triplets(&[Triplet::new(0, 0, 5.0), Triplet::new(1, 0, -5.0)], 2, 1).unwrap();
        let mut pe = MaplePeState::new(4, 1);
        let row = pe.process_row(&a, &b, 0).unwrap();
        assert_eq!(row.col_id, vec![0]);
        assert_eq!(row.value, vec![0.0]);
    }

    #[test]
    fn pe_rows_match_reference_kernel() {
        let a = crate::csr::generate_synthetic(24, 24, 0.15, 11);
        let b = crate::csr::generate_synthetic(24, 24, 0.15, 12);
        let reference = spgemm_reference(&a, &b).unwrap();
        let mut pe = MaplePeState::new(4, b.cols);
        for i in 0..a.rows {
            let row = pe.process_row(&a, &b, i).unwrap();
            assert_eq!(row.col_id, reference.row_col_ids(i));
            assert_eq!(row.value, reference.row_values(i), "row {} values", i);
        }
    }

    #[test]
    fn mac_count_equals_reps_sum() {
        let a = crate::csr::generate_synthetic(16, 16, 0.2, 3);
        let b = crate::csr::generate_synthetic(16, 16, 0.2, 4);
        let mut pe = MaplePeState::new(2, b.cols);
        let mut reps_total = 0u64;
        for i in 0..a.rows {
            pe.load_row_buffers(&a, &b, i).unwrap();
            reps_total += pe.arb_entries().map(|e| e.reps as u64).sum::<u64>();
            pe.schedule_and_execute();
            pe.drain_psb();
        }
        assert_eq!(pe.trace.get(EventKind::MacOp), reps_total);
    }

    #[test]
    fn cycles_lower_bound_and_monotonic_parallelism() {
        let a = crate::csr::generate_synthetic(20, 20, 0.25, 5);
        let b = crate::csr::generate_synthetic(20, 20, 0.25, 6);
        let mut cycles_by_p = Vec::new();
        for p in [1, 2, 4, 8] {
            let mut pe = MaplePeState::new(p, b.cols);
            for i in 0..a.rows {
                pe.process_row(&a, &b, i).unwrap();
            }
            let products = pe.trace.get(EventKind::MacOp);
            let mut lower = 0u64;
            for i in 0..a.rows {
                let row_products: usize = a.row_col_ids(i).iter().map(|&k| b.row_nnz(k)).sum();
                lower += (row_products as u64).div_ceil(p as u64);
            }
            assert!(pe.cycle >= lower, "P={}: {} < {}", p, pe.cycle, lower);
            assert!(pe.cycle <= products);
            cycles_by_p.push(pe.cycle);
        }
        for pair in cycles_by_p.windows(2) {
            assert!(pair[1] <= pair[0], "doubling MACs may not cost cycles");
        }
    }

    #[test]
    fn required_capacities_cover_fixture() {
        let (a, b) = paired_fixture();
        assert_eq!(required_capacities(&a, &b), (2, 3));
        let (arb, brb) = required_capacities(&a, &b);
        let mut pe = MaplePeState::with_capacities(4, 3, arb, brb);
        for i in 0..a.rows {
            pe.process_row(&a, &b, i).unwrap();
        }
    }
}
