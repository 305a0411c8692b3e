use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, shuffle};

use super::MAX_HEIGHT;

/// Index of a vertex in a [`TreeStructure`].
pub type Vertex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Label-free random welded tree.
///
/// Vertices `0..half` are the left tree in heap order (root `0` is the
/// entrance), vertices `half..2*half` are the right tree in heap order (root
/// `half` is the exit), where `half = 2^(n+1) - 1`. Left depth `k` sits in
/// column `k`, right depth `k` in column `2n+1-k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStructure {
    n: u32,
    weld_cycle: Vec<Vertex>,
    adjacency: Vec<Vec<Vertex>>,
}

fn heap_depth(i: usize) -> u32 {
    (usize::BITS - 1) - (i + 1).leading_zeros()
}

impl TreeStructure {
    /// Samples a uniformly random alternating welding cycle.
    pub fn generate(n: u32, seed: u64) -> Result<Self> {
        check_height(n)?;
        let mut rng = rng_from_seed(seed);
        Self::generate_with(n, &mut rng)
    }

    pub(crate) fn generate_with<R: RngCore>(n: u32, rng: &mut R) -> Result<Self> {
        check_height(n)?;
        let half = (1usize << (n + 1)) - 1;
        let first_leaf = (1usize << n) - 1;
        let mut left: Vec<Vertex> = (first_leaf..half).collect();
        let mut right: Vec<Vertex> = (first_leaf..half).map(|i| half + i).collect();
        shuffle(rng, &mut left);
        shuffle(rng, &mut right);
        let cycle = left
            .iter()
            .zip(&right)
            .flat_map(|(&l, &r)| [l, r])
            .collect();
        Self::from_weld_cycle(n, cycle)
    }

    /// Builds the structure from an explicit welding cycle `l0 r0 l1 r1 ...`.
    pub fn from_weld_cycle(n: u32, weld_cycle: Vec<Vertex>) -> Result<Self> {
        check_height(n)?;
        let half = (1usize << (n + 1)) - 1;
        let leaves = 1usize << n;
        let first_leaf = leaves - 1;
        if weld_cycle.len() != 2 * leaves {
            return Err(Error::InvalidWeld(format!(
                "cycle length {} != {}",
                weld_cycle.len(),
                2 * leaves
            )));
        }
        let mut seen = vec![false; 2 * half];
        for (pos, &v) in weld_cycle.iter().enumerate() {
            let want_left = pos % 2 == 0;
            let ok = if want_left {
                (first_leaf..half).contains(&v)
            } else {
                (half + first_leaf..2 * half).contains(&v)
            };
            if !ok {
                return Err(Error::InvalidWeld(format!(
                    "position {pos} holds vertex {v}, expected a {} leaf",
                    if want_left { "left" } else { "right" }
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidWeld(format!("leaf {v} repeated")));
            }
        }

        let mut adjacency = vec![Vec::with_capacity(3); 2 * half];
        for offset in [0, half] {
            for i in 0..first_leaf {
                for child in [2 * i + 1, 2 * i + 2] {
                    adjacency[offset + i].push(offset + child);
                    adjacency[offset + child].push(offset + i);
                }
            }
        }
        let len = weld_cycle.len();
        for k in 0..len {
            let (a, b) = (weld_cycle[k], weld_cycle[(k + 1) % len]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Ok(Self {
            n,
            weld_cycle,
            adjacency,
        })
    }

    pub fn height(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    fn half(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn entrance(&self) -> Vertex {
        0
    }

    pub fn exit(&self) -> Vertex {
        self.half()
    }

    pub fn side(&self, v: Vertex) -> Side {
        if v < self.half() {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn column(&self, v: Vertex) -> u32 {
        match self.side(v) {
            Side::Left => heap_depth(v),
            Side::Right => 2 * self.n + 1 - heap_depth(v - self.half()),
        }
    }

    pub fn column_count(&self) -> usize {
        2 * self.n as usize + 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn weld_cycle(&self) -> &[Vertex] {
        &self.weld_cycle
    }

    /// Vertices of column `j`, in increasing index order.
    pub fn column_vertices(&self, j: u32) -> Vec<Vertex> {
        (0..self.vertex_count()).filter(|&v| self.column(v) == j).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Checks degree, column and weld-cycle invariants. Returns the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let last = 2 * self.n + 1;
        for v in 0..self.vertex_count() {
            let col = self.column(v);
            let expected = if col == 0 || col == last { 2 } else { 3 };
            if self.adjacency[v].len() != expected {
                return Err(format!("vertex {v} has degree {}", self.adjacency[v].len()));
            }
            for &w in &self.adjacency[v] {
                if self.column(w).abs_diff(col) != 1 {
                    return Err(format!("edge {v}-{w} skips columns"));
                }
            }
            let mut ns = self.adjacency[v].clone();
            ns.sort_unstable();
            ns.dedup();
            if ns.len() != self.adjacency[v].len() {
                return Err(format!("vertex {v} has a repeated neighbour"));
            }
        }
        if self.column(self.entrance()) != 0 || self.column(self.exit()) != last {
            return Err("entrance/exit misplaced".into());
        }
        self.check_weld_is_single_cycle()
    }

    /// Follows weld edges from one leaf and checks they trace a single
    /// alternating cycle through every leaf.
    pub fn check_weld_is_single_cycle(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let leaves: Vec<Vertex> = (0..self.vertex_count())
            .filter(|&v| {
                let c = self.column(v);
                c == n || c == n + 1
            })
            .collect();
        let weld_neighbors = |v: Vertex| -> Vec<Vertex> {
            let c = self.column(v);
            self.adjacency[v]
                .iter()
                .copied()
                .filter(|&w| {
                    let cw = self.column(w);
                    (c == n && cw == n + 1) || (c == n + 1 && cw == n)
                })
                .collect()
        };
        for &v in &leaves {
            if weld_neighbors(v).len() != 2 {
                return Err(format!("leaf {v} has {} weld edges", weld_neighbors(v).len()));
            }
        }
        let start = leaves[0];
        let mut prev = start;
        let mut cur = weld_neighbors(start)[0];
        let mut steps = 1;
        while cur != start {
            if self.side(cur) == self.side(prev) {
                return Err("weld does not alternate".into());
            }
            let ns = weld_neighbors(cur);
            let next = if ns[0] == prev { ns[1] } else { ns[0] };
            prev = cur;
            cur = next;
            steps += 1;
            if steps > leaves.len() {
                return Err("weld walk does not close".into());
            }
        }
        if steps != leaves.len() {
            return Err(format!("weld has a cycle of length {steps} < {}", leaves.len()));
        }
        Ok(())
    }
}

fn check_height(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroHeight);
    }
    if n > MAX_HEIGHT {
        return Err(Error::HeightTooLarge(n));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_shape() {
        let s = TreeStructure::generate(1, 0).unwrap();
        assert_eq!(s.vertex_count(), 6);
        assert_eq!(s.neighbors(s.entrance()).len(), 2);
        assert_eq!(s.neighbors(s.exit()).len(), 2);
        assert_eq!(s.weld_cycle().len(), 4);
        s.check_invariants().unwrap();
    }

    #[test]
    fn n3_seed7() {
        let s = TreeStructure::generate(3, 7).unwrap();
        assert_eq!(s.vertex_count(), 30);
        s.check_invariants().unwrap();
        assert_eq!(s.column_vertices(0), vec![0]);
        assert_eq!(s.column_vertices(7), vec![15]);
        assert_eq!(s.column_vertices(3).len(), 8);
        assert_eq!(s.column_vertices(4).len(), 8);
    }

    #[test]
    fn zero_height_rejected() {
        assert_eq!(TreeStructure::generate(0, 1), Err(Error::ZeroHeight));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = TreeStructure::generate(4, 99).unwrap();
        let b = TreeStructure::generate(4, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_non_alternating_cycle() {
        let s = TreeStructure::generate(2, 1).unwrap();
        let mut cycle = s.weld_cycle().to_vec();
        cycle.swap(0, 1);
        assert!(TreeStructure::from_weld_cycle(2, cycle).is_err());
    }

    #[test]
    fn every_weld_is_a_single_alternating_cycle() {
        for seed in 0..10_000 {
            let s = TreeStructure::generate(3, seed).unwrap();
            s.check_weld_is_single_cycle().unwrap();
        }
    }
}
