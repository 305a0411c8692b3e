use std::collections::HashSet;
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::uniform_u64;

/// A `2n`-bit vertex label stored in the low bits of a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Label(pub u64);

impl Label {
    pub const ENTRANCE: Label = Label(0);

    /// The all-ones string of length `2n`.
    pub fn invalid(n: u32) -> Label {
        Label(label_mask(n))
    }

    pub fn is_invalid(self, n: u32) -> bool {
        self == Label::invalid(n)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Zero-padded lowercase hex, `ceil(2n/4)` digits.
    pub fn to_hex(self, n: u32) -> String {
        format!("{:0width$x}", self.0, width = hex_width(n))
    }

    pub fn from_hex(n: u32, s: &str) -> Result<Label> {
        if s.len() != hex_width(n) {
            return Err(Error::TreeDocument(format!("label {s:?} should have {} hex digits", hex_width(n))));
        }
        let v = u64::from_str_radix(s, 16).map_err(|e| Error::TreeDocument(format!("label {s:?}: {e}")))?;
        if v > label_mask(n) {
            return Err(Error::TreeDocument(format!("label {s:?} exceeds {} bits", 2 * n)));
        }
        Ok(Label(v))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

pub fn label_mask(n: u32) -> u64 {
    if 2 * n >= 64 {
        u64::MAX
    } else {
        (1u64 << (2 * n)) - 1
    }
}

fn hex_width(n: u32) -> usize {
    (2 * n as usize).div_ceil(4)
}

/// Number of strings usable for non-entrance vertices: all except `0` and INVALID.
pub fn usable_labels(n: u32) -> u64 {
    label_mask(n) - 1
}

/// Draws `count` distinct labels uniformly from `[1, 2^(2n) - 2]`.
pub(crate) fn draw_distinct<R: RngCore>(n: u32, count: usize, rng: &mut R) -> Result<Vec<Label>> {
    let available = usable_labels(n);
    if (count as u64) > available {
        return Err(Error::LabelSpaceTooSmall {
            n,
            available,
            needed: count as u64,
        });
    }
    draw_distinct_avoiding(n, count, &HashSet::new(), rng)
}

/// Draws `count` distinct labels from `[1, 2^(2n) - 2]` minus `taken`.
pub(crate) fn draw_distinct_avoiding<R: RngCore>(
    n: u32,
    count: usize,
    taken: &HashSet<Label>,
    rng: &mut R,
) -> Result<Vec<Label>> {
    let hi = label_mask(n);
    let available = usable_labels(n) - taken.iter().filter(|l| (1..hi).contains(&l.0)).count() as u64;
    if count as u64 > available {
        return Err(Error::LabelSpaceTooSmall {
            n,
            available,
            needed: count as u64,
        });
    }
    // dense partial shuffle when the pool is small or nearly exhausted
    if available <= 1 << 16 || (count as u64) * 4 > available {
        let mut pool: Vec<Label> = (1..hi).map(Label).filter(|l| !taken.contains(l)).collect();
        for i in 0..count {
            let j = uniform_u64(rng, i as u64, pool.len() as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(count);
        return Ok(pool);
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l = Label(uniform_u64(rng, 1, hi));
        if !taken.contains(&l) && seen.insert(l) {
            out.push(l);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn invalid_is_all_ones() {
        assert_eq!(Label::invalid(1), Label(0b11));
        assert_eq!(Label::invalid(3), Label(0x3f));
    }

    #[test]
    fn hex_round_trip() {
        let l = Label(0x2a);
        assert_eq!(l.to_hex(3), "2a");
        assert_eq!(l.to_hex(5), "02a");
        assert_eq!(Label::from_hex(5, "02a").unwrap(), l);
        assert!(Label::from_hex(3, "ff").is_err());
    }

    #[test]
    fn draws_are_distinct_and_in_range() {
        let mut rng = rng_from_seed(1);
        for n in [2, 3, 9] {
            let count = (1usize << (n + 2)) - 3;
            let ls = draw_distinct(n, count, &mut rng).unwrap();
            let set: HashSet<_> = ls.iter().collect();
            assert_eq!(set.len(), count);
            assert!(ls.iter().all(|l| l.0 != 0 && !l.is_invalid(n)));
        }
    }

    #[test]
    fn n1_labels_do_not_fit() {
        let mut rng = rng_from_seed(1);
        assert!(matches!(
            draw_distinct(1, 5, &mut rng),
            Err(Error::LabelSpaceTooSmall { available: 2, .. })
        ));
    }
}
