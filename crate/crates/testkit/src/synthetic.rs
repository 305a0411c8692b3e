//! Oracle functions that do not come from a welded tree.

use welded_core::rng::{rng_from_seed, uniform_u64};
use welded_core::welded_tree::{ColorCode, Label};

/// A uniformly random table `K(x, c)` over `2n`-bit labels and 4-bit
/// colors. Lets query circuits run at `n = 1`, where no tree exists.
#[derive(Debug, Clone)]
pub struct SyntheticOracle {
    pub n: u32,
    table: Vec<Label>,
}

impl SyntheticOracle {
    pub fn random(n: u32, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let labels = 1u64 << (2 * n);
        let table = (0..labels * 16).map(|_| Label(uniform_u64(&mut rng, 0, labels))).collect();
        Self { n, table }
    }

    pub fn answer(&self, x: Label, c: ColorCode) -> Label {
        self.table[(x.0 as usize) * 16 + (c as usize & 15)]
    }
}
