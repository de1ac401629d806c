//! Synthetic stand-ins for the SuiteSparse benchmark set.
//!
//! The real matrices are multi-megabyte downloads, so the harness ships
//! their shapes instead: square dimension and density for each of the 14
//! benchmark matrices, to be fed through
//! [`generate_synthetic`](crate::csr::generate_synthetic). A linear scale
//! divisor shrinks the dimension while keeping the density, for desk-sized
//! sweeps.

use crate::csr::{generate_synthetic, CsrMatrix};

/// Shape of one benchmark matrix: square dimension and nonzero density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetShape {
    /// Short tag, e.g. `fb`.
    pub tag: &'static str,
    /// Full matrix name in the benchmark collection.
    pub name: &'static str,
    pub dim: usize,
    pub density: f64,
}

/// The 14 benchmark shapes, sparsest first.
pub const DATASET_SHAPES: [DatasetShape; 14] = [
    DatasetShape {
        tag: "wg",
        name: "web-Google",
        dim: 916_000,
        density: 6.1e-6,
    },
    DatasetShape {
        tag: "m2",
        name: "mario002",
        dim: 390_000,
        density: 1.3e-5,
    },
    DatasetShape {
        tag: "az",
        name: "amazon0312",
        dim: 401_000,
        density: 1.9e-5,
    },
    DatasetShape {
        tag: "mb",
        name: "m133-b3",
        dim: 200_000,
        density: 2.0e-5,
    },
    DatasetShape {
        tag: "sc",
        name: "scircuit",
        dim: 171_000,
        density: 3.2e-5,
    },
    DatasetShape {
        tag: "pg",
        name: "p2pGnutella31",
        dim: 63_000,
        density: 3.7e-5,
    },
    DatasetShape {
        tag: "of",
        name: "offshore",
        dim: 260_000,
        density: 6.2e-5,
    },
    DatasetShape {
        tag: "cg",
        name: "cage12",
        dim: 130_000,
        density: 1.1e-4,
    },
    DatasetShape {
        tag: "cs",
        name: "2cubes-sphere",
        dim: 101_000,
        density: 1.5e-4,
    },
    DatasetShape {
        tag: "f3",
        name: "filter3D",
        dim: 106_000,
        density: 2.4e-4,
    },
    DatasetShape {
        tag: "cc",
        name: "ca-CondMat",
        dim: 23_000,
        density: 3.5e-4,
    },
    DatasetShape {
        tag: "wv",
        name: "wikiVote",
        dim: 8_300,
        density: 1.5e-3,
    },
    DatasetShape {
        tag: "p3",
        name: "poisson3Da",
        dim: 14_000,
        density: 1.8e-3,
    },
    DatasetShape {
        tag: "fb",
        name: "facebook",
        dim: 4_000,
        density: 1.1e-2,
    },
];

impl DatasetShape {
    /// Look a shape up by its short tag or full name.
    pub fn by_name(name: &str) -> Option<&'static DatasetShape> {
        DATASET_SHAPES
            .iter()
            .find(|s| s.tag == name || s.name == name)
    }

    /// Dimension after dividing linearly by `scale_div` (at least 1).
    pub fn scaled_dim(&self, scale_div: usize) -> usize {
        (self.dim / scale_div.max(1)).max(1)
    }

    /// Deterministic synthetic matrix of this shape at `1/scale_div` linear
    /// scale, density preserved.
    pub fn synthesize(&self, scale_div: usize, seed: u64) -> CsrMatrix {
        let dim = self.scaled_dim(scale_div);
        generate_synthetic(dim, dim, self.density, seed)
    }
}
