use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::hybrid_sim::KnownVertices;

use super::labels::{label_mask, Label};

/// `N (N-1) ... (N-k+1)`, zero when `k > N`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
    }
    acc
}

/// Rejects entries that no welded tree can produce.
pub fn check_entries(entries: &KnownVertices) -> Result<()> {
    let n = entries.height();
    let inv = entries.invalid();
    let bad = |m: String| Err(Error::InconsistentEntries(m));
    for (x, answers) in entries.iter() {
        if x == inv || x.0 > inv.0 {
            return bad(format!("{x} is not a usable label"));
        }
        let valid: Vec<(u8, Label)> = (1u8..=9)
            .zip(answers.iter().copied())
            .filter(|&(_, y)| y != inv)
            .collect();
        let degree = valid.len();
        let want = if x == Label::ENTRANCE { 2..=2 } else { 2..=3 };
        if !want.contains(&degree) {
            return bad(format!("{x} has {degree} recorded neighbours"));
        }
        let mut ys: Vec<Label> = valid.iter().map(|p| p.1).collect();
        ys.sort_unstable();
        ys.dedup();
        if ys.len() != degree || ys.contains(&x) {
            return bad(format!("{x} has repeated or self neighbours"));
        }
        for &(c, y) in &valid {
            if y.0 > label_mask(n) {
                return bad(format!("answer {y} exceeds {} bits", 2 * n));
            }
            if entries.is_key_vertex(y) && entries.get(y, c) != x {
                return bad(format!("edge {x} -{c}- {y} is not symmetric"));
            }
        }
    }
    let labeled = entries.labels();
    let vertex_count = (1u64 << (n + 2)) - 2;
    if labeled.len() as u64 > vertex_count {
        return bad("more labeled vertices than the tree has".into());
    }
    Ok(())
}

/// Number of labelings of the remaining vertices consistent with `entries`.
///
/// The entrance always counts as labeled. With `L` distinct labels fixed,
/// `N = 2^(2n) - 1 - L` strings remain for `k = 2^(n+2) - 2 - L` vertices
/// and the count is the falling factorial `P(N, k)`.
pub fn count_consistent(entries: &KnownVertices) -> Result<BigUint> {
    check_entries(entries)?;
    let n = entries.height();
    let mut labeled = entries.labels();
    labeled.insert(Label::ENTRANCE);
    let fixed = labeled.len() as u64;
    let available = label_mask(n) - fixed;
    let unlabeled = (1u64 << (n + 2)) - 2 - fixed;
    Ok(falling_factorial(available, unlabeled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::welded_tree::BlackBoxTree;

    #[test]
    fn small_falling_factorials() {
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial(7, 0), BigUint::one());
        assert_eq!(falling_factorial(2, 3), BigUint::ZERO);
    }

    #[test]
    fn each_new_label_divides_by_available() {
        let t = BlackBoxTree::generate(3, 5).unwrap();
        let mut h = t.handle();
        let mut v = KnownVertices::entrance(&mut h);
        let before = count_consistent(&v).unwrap();
        let fixed_before = v.labels().len() as u64;
        let child = *v.frontier().iter().next().unwrap();
        v.expand(child, &mut h);
        let after = count_consistent(&v).unwrap();
        let added = v.labels().len() as u64 - fixed_before;
        let mut expect = after.clone();
        for i in 0..added {
            expect *= label_mask(3) - fixed_before - i;
        }
        assert_eq!(expect, before);
    }

    #[test]
    fn asymmetric_entries_rejected() {
        let t = BlackBoxTree::generate(2, 5).unwrap();
        let mut h = t.handle();
        let mut v = KnownVertices::entrance(&mut h);
        let child = *v.frontier().iter().next().unwrap();
        v.expand(child, &mut h);
        let mut ans = *v.answers(child).unwrap();
        let pos = ans.iter().position(|&l| l == Label::ENTRANCE).unwrap();
        ans[pos] = t.invalid();
        v.insert_vertex(child, ans);
        assert!(count_consistent(&v).is_err());
    }
}
