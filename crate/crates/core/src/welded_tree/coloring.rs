use std::collections::HashMap;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, shuffle, uniform_index};

use super::structure::{TreeStructure, Vertex};

/// Edge color code. Codes `1..=9` are colors; anything else names no edge.
pub type ColorCode = u8;

pub const NUM_COLORS: u8 = 9;

pub fn is_valid_color(c: ColorCode) -> bool {
    (1..=NUM_COLORS).contains(&c)
}

/// Proper edge coloring of a welded tree with the nine colors.
///
/// Each edge sees at most four other edges at its endpoints, so a random
/// greedy pass over the edges never runs out of colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    // edge_colors[v][k] is the color of the edge to structure.neighbors(v)[k]
    edge_colors: Vec<Vec<ColorCode>>,
    by_code: Vec<[Option<Vertex>; 9]>,
}

/// Undirected edge key with the smaller endpoint first.
pub type EdgeKey = (Vertex, Vertex);

pub fn edge_key(u: Vertex, v: Vertex) -> EdgeKey {
    (u.min(v), u.max(v))
}

impl EdgeColoring {
    pub fn generate(structure: &TreeStructure, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        Self::generate_with(structure, &HashMap::new(), &mut rng)
    }

    /// Random proper coloring extending the `pinned` edge colors.
    pub(crate) fn generate_with<R: RngCore>(
        structure: &TreeStructure,
        pinned: &HashMap<EdgeKey, ColorCode>,
        rng: &mut R,
    ) -> Result<Self> {
        let mut used = vec![[false; 10]; structure.vertex_count()];
        let mut colors: HashMap<EdgeKey, ColorCode> = HashMap::with_capacity(structure.vertex_count() * 3 / 2);
        let mut pins: Vec<(&EdgeKey, &ColorCode)> = pinned.iter().collect();
        pins.sort_unstable();
        for (&(u, v), &c) in pins {
            if !is_valid_color(c) || !structure.neighbors(u).contains(&v) {
                return Err(Error::InvalidColoring(format!("pinned edge {u}-{v} color {c}")));
            }
            if used[u][c as usize] || used[v][c as usize] {
                return Err(Error::InvalidColoring(format!("pinned color {c} repeats at {u}-{v}")));
            }
            used[u][c as usize] = true;
            used[v][c as usize] = true;
            colors.insert((u, v), c);
        }
        let mut edges: Vec<EdgeKey> = structure.edges().filter(|e| !colors.contains_key(e)).collect();
        shuffle(rng, &mut edges);
        for (u, v) in edges {
            let free: Vec<ColorCode> = (1..=NUM_COLORS)
                .filter(|&c| !used[u][c as usize] && !used[v][c as usize])
                .collect();
            let c = free[uniform_index(rng, free.len())];
            used[u][c as usize] = true;
            used[v][c as usize] = true;
            colors.insert((u, v), c);
        }
        let edge_colors = (0..structure.vertex_count())
            .map(|u| structure.neighbors(u).iter().map(|&v| colors[&edge_key(u, v)]).collect())
            .collect();
        Self::from_edge_colors(structure, edge_colors)
    }

    /// Builds the coloring from per-vertex color lists in adjacency order.
    pub fn from_edge_colors(structure: &TreeStructure, edge_colors: Vec<Vec<ColorCode>>) -> Result<Self> {
        if edge_colors.len() != structure.vertex_count() {
            return Err(Error::InvalidColoring(format!(
                "{} color lists for {} vertices",
                edge_colors.len(),
                structure.vertex_count()
            )));
        }
        let mut by_code = vec![[None; 9]; structure.vertex_count()];
        for (u, cs) in edge_colors.iter().enumerate() {
            let ns = structure.neighbors(u);
            if cs.len() != ns.len() {
                return Err(Error::InvalidColoring(format!("vertex {u} has {} colors for {} edges", cs.len(), ns.len())));
            }
            for (&v, &c) in ns.iter().zip(cs) {
                if !is_valid_color(c) {
                    return Err(Error::InvalidColoring(format!("edge {u}-{v} has color {c}")));
                }
                if let Some(prev) = by_code[u][(c - 1) as usize].replace(v) {
                    return Err(Error::InvalidColoring(format!(
                        "vertex {u} has two edges of color {c} (to {prev} and {v})"
                    )));
                }
            }
        }
        for (u, cs) in edge_colors.iter().enumerate() {
            for (&v, &c) in structure.neighbors(u).iter().zip(cs) {
                if by_code[v][(c - 1) as usize] != Some(u) {
                    return Err(Error::InvalidColoring(format!("endpoints of {u}-{v} disagree on its color")));
                }
            }
        }
        Ok(Self { edge_colors, by_code })
    }

    /// One digit string per vertex, colors in adjacency order.
    pub fn to_strings(&self) -> Vec<String> {
        self.edge_colors
            .iter()
            .map(|cs| cs.iter().map(|c| char::from(b'0' + c)).collect())
            .collect()
    }

    pub fn from_strings(structure: &TreeStructure, strings: &[String]) -> Result<Self> {
        let lists = strings
            .iter()
            .enumerate()
            .map(|(v, s)| {
                s.chars()
                    .map(|ch| match ch.to_digit(10) {
                        Some(d) if d >= 1 => Ok(d as u8),
                        _ => Err(Error::InvalidColoring(format!("vertex {v}: bad color {ch:?}"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_edge_colors(structure, lists)
    }

    /// The `c`-neighbour of `v`, if any.
    pub fn neighbor(&self, v: Vertex, c: ColorCode) -> Option<Vertex> {
        if is_valid_color(c) {
            self.by_code[v][(c - 1) as usize]
        } else {
            None
        }
    }

    /// Colors of the edges at `v`, ascending.
    pub fn incident_colors(&self, v: Vertex) -> Vec<ColorCode> {
        let mut cs = self.edge_colors[v].clone();
        cs.sort_unstable();
        cs
    }

    pub fn edge_color(&self, structure: &TreeStructure, u: Vertex, w: Vertex) -> Option<ColorCode> {
        let k = structure.neighbors(u).iter().position(|&x| x == w)?;
        Some(self.edge_colors[u][k])
    }

    /// Brute-force scan: every vertex sees pairwise distinct colors on its edges.
    pub fn check_invariants(&self, structure: &TreeStructure) -> std::result::Result<(), String> {
        for v in 0..structure.vertex_count() {
            let mut seen = [false; 10];
            for &w in structure.neighbors(v) {
                let c = self.edge_color(structure, v, w).ok_or("missing edge")?;
                if !is_valid_color(c) {
                    return Err(format!("edge {v}-{w} has color {c}"));
                }
                if std::mem::replace(&mut seen[c as usize], true) {
                    return Err(format!("vertex {v} repeats color {c}"));
                }
                if self.edge_color(structure, w, v) != Some(c) {
                    return Err(format!("edge {v}-{w} colored differently at its ends"));
                }
                if self.neighbor(v, c) != Some(w) {
                    return Err(format!("lookup table disagrees at {v} color {c}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entrance_edges_distinct_n1() {
        let s = TreeStructure::generate(1, 3).unwrap();
        let col = EdgeColoring::generate(&s, 3).unwrap();
        let cs = col.incident_colors(s.entrance());
        assert_eq!(cs.len(), 2);
        assert_ne!(cs[0], cs[1]);
    }

    #[test]
    fn n4_hundred_seeds() {
        for seed in 0..100 {
            let s = TreeStructure::generate(4, seed).unwrap();
            let col = EdgeColoring::generate(&s, seed ^ 0xabc).unwrap();
            col.check_invariants(&s).unwrap();
        }
    }

    #[test]
    fn uses_more_than_three_colors() {
        let s = TreeStructure::generate(4, 1).unwrap();
        let col = EdgeColoring::generate(&s, 1).unwrap();
        let mut seen = [false; 10];
        for v in 0..s.vertex_count() {
            for c in col.incident_colors(v) {
                seen[c as usize] = true;
            }
        }
        assert_eq!(seen.iter().filter(|&&b| b).count(), 9);
    }

    #[test]
    fn string_round_trip() {
        let s = TreeStructure::generate(3, 5).unwrap();
        let col = EdgeColoring::generate(&s, 5).unwrap();
        assert_eq!(EdgeColoring::from_strings(&s, &col.to_strings()).unwrap(), col);
    }

    #[test]
    fn rejects_clashing_colors() {
        let s = TreeStructure::generate(2, 5).unwrap();
        let mut strings = EdgeColoring::generate(&s, 5).unwrap().to_strings();
        let first = strings[0].chars().next().unwrap();
        strings[0] = format!("{first}{first}");
        assert!(EdgeColoring::from_strings(&s, &strings).is_err());
    }

    #[test]
    fn pinned_colors_are_kept() {
        let s = TreeStructure::generate(3, 2).unwrap();
        let mut rng = rng_from_seed(4);
        let pinned = HashMap::from([(edge_key(0, 1), 7u8), (edge_key(0, 2), 3u8)]);
        let col = EdgeColoring::generate_with(&s, &pinned, &mut rng).unwrap();
        assert_eq!(col.neighbor(0, 7), Some(1));
        assert_eq!(col.neighbor(0, 3), Some(2));
        let clash = HashMap::from([(edge_key(0, 1), 7u8), (edge_key(0, 2), 7u8)]);
        assert!(EdgeColoring::generate_with(&s, &clash, &mut rng).is_err());
    }
}
