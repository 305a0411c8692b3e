use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::hybrid_sim::KnownVertices;
use crate::rng::{rng_from_seed, shuffle, uniform_index, Rng64};

use super::coloring::{edge_key, ColorCode, EdgeColoring, EdgeKey, NUM_COLORS};
use super::counting::check_entries;
use super::labels::{draw_distinct_avoiding, Label};
use super::oracle::BlackBoxTree;
use super::structure::{TreeStructure, Vertex};

/// Which part of the tree is resampled.
#[derive(Debug, Clone, Copy)]
pub enum SamplingMode<'a> {
    /// Keep the template's welding and coloring; resample labels only.
    LabelsOnly(&'a BlackBoxTree),
    /// Resample the welding, the coloring and the labels.
    Structures,
}

const STRUCTURE_ATTEMPTS: usize = 256;

/// Samples a black-box tree whose oracle reproduces every entry.
///
/// Known vertices are placed by following recorded edges from the entrance.
/// In labels-only mode placement is forced by the colors; in structure mode
/// each unplaced neighbour goes to a random free slot and the attempt is
/// retried on a clash. Remaining vertices get uniformly random unused labels.
/// Structure mode is therefore close to, not exactly, uniform over consistent
/// trees.
pub fn sample_consistent(entries: &KnownVertices, mode: SamplingMode<'_>, seed: u64) -> Result<BlackBoxTree> {
    let mut rng = rng_from_seed(seed);
    sample_consistent_with(entries, mode, &mut rng)
}

pub fn sample_consistent_with(
    entries: &KnownVertices,
    mode: SamplingMode<'_>,
    rng: &mut Rng64,
) -> Result<BlackBoxTree> {
    check_entries(entries)?;
    match mode {
        SamplingMode::LabelsOnly(template) => {
            if template.height() != entries.height() {
                return Err(Error::InconsistentEntries("template height differs".into()));
            }
            let pos = embed_along_colors(entries, template.structure(), template.coloring())?;
            finish_labels(
                template.shared_structure().clone(),
                template.shared_coloring().clone(),
                &pos,
                rng,
            )
        }
        SamplingMode::Structures => {
            for _ in 0..STRUCTURE_ATTEMPTS {
                if let Some(tree) = try_structure(entries, rng)? {
                    return Ok(tree);
                }
            }
            Err(Error::EmbeddingFailed(STRUCTURE_ATTEMPTS))
        }
    }
}

/// Checks every entry against the tree's oracle.
pub fn replays(entries: &KnownVertices, tree: &BlackBoxTree) -> bool {
    entries.triples().all(|(x, c, y)| tree.answer(x, c) == y)
}

type Placement = HashMap<Label, Vertex>;

fn embed_along_colors(
    entries: &KnownVertices,
    structure: &TreeStructure,
    coloring: &EdgeColoring,
) -> Result<Placement> {
    let fail = |m: String| Err(Error::InconsistentEntries(m));
    let mut pos: Placement = HashMap::new();
    let mut used: HashSet<Vertex> = HashSet::new();
    pos.insert(Label::ENTRANCE, structure.entrance());
    used.insert(structure.entrance());
    let mut queue = VecDeque::from([Label::ENTRANCE]);
    let mut visited = HashSet::from([Label::ENTRANCE]);
    while let Some(x) = queue.pop_front() {
        let Some(answers) = entries.answers(x) else { continue };
        let p = pos[&x];
        for c in 1..=NUM_COLORS {
            let y = answers[(c - 1) as usize];
            let slot = coloring.neighbor(p, c);
            match (y == entries.invalid(), slot) {
                (true, None) => {}
                (true, Some(_)) | (false, None) => {
                    return fail(format!("{x} color {c} disagrees with the template coloring"))
                }
                (false, Some(q)) => match pos.get(&y) {
                    Some(&existing) if existing != q => {
                        return fail(format!("{y} would sit at two vertices"));
                    }
                    Some(_) => {}
                    None => {
                        if !used.insert(q) {
                            return fail(format!("vertex {q} would carry two labels"));
                        }
                        pos.insert(y, q);
                    }
                },
            }
            if y != entries.invalid() && visited.insert(y) {
                queue.push_back(y);
            }
        }
    }
    if let Some(x) = entries.key_vertices().find(|x| !pos.contains_key(x)) {
        return fail(format!("key vertex {x} is not connected to the entrance"));
    }
    Ok(pos)
}

fn finish_labels<R: RngCore>(
    structure: Arc<TreeStructure>,
    coloring: Arc<EdgeColoring>,
    pos: &Placement,
    rng: &mut R,
) -> Result<BlackBoxTree> {
    let n = structure.height();
    let mut labels = vec![None; structure.vertex_count()];
    for (&l, &v) in pos {
        labels[v] = Some(l);
    }
    let taken: HashSet<Label> = pos.keys().copied().collect();
    let free = labels.iter().filter(|l| l.is_none()).count();
    let mut fresh = draw_distinct_avoiding(n, free, &taken, rng)?.into_iter();
    let labels = labels
        .into_iter()
        .map(|l| l.unwrap_or_else(|| fresh.next().unwrap()))
        .collect();
    BlackBoxTree::from_parts(structure, coloring, labels)
}

fn try_structure(entries: &KnownVertices, rng: &mut Rng64) -> Result<Option<BlackBoxTree>> {
    let n = entries.height();
    let structure = TreeStructure::generate_with(n, rng)?;
    let Some(pos) = embed_randomly(entries, &structure, rng) else { return Ok(None) };

    let mut pinned: HashMap<EdgeKey, ColorCode> = HashMap::new();
    for (x, c, y) in entries.triples() {
        if y != entries.invalid() {
            pinned.insert(edge_key(pos[&x], pos[&y]), c);
        }
    }
    let Ok(coloring) = EdgeColoring::generate_with(&structure, &pinned, rng) else { return Ok(None) };
    let tree = finish_labels(Arc::new(structure), Arc::new(coloring), &pos, rng)?;
    Ok(replays(entries, &tree).then_some(tree))
}

/// Greedy random placement of known labels onto `structure`, following
/// recorded edges breadth-first from the entrance.
fn embed_randomly(entries: &KnownVertices, structure: &TreeStructure, rng: &mut Rng64) -> Option<Placement> {
    let mut pos: Placement = HashMap::new();
    let mut used: HashSet<Vertex> = HashSet::new();
    pos.insert(Label::ENTRANCE, structure.entrance());
    used.insert(structure.entrance());
    let mut queue = VecDeque::from([Label::ENTRANCE]);
    let mut visited = HashSet::from([Label::ENTRANCE]);
    while let Some(x) = queue.pop_front() {
        let neighbors = entries.neighbors(x);
        if neighbors.is_empty() && !entries.is_key_vertex(x) {
            continue;
        }
        let p = pos[&x];
        if entries.is_key_vertex(x) && neighbors.len() != structure.neighbors(p).len() {
            return None;
        }
        let mut order: Vec<(u8, Label)> = neighbors;
        shuffle(rng, &mut order);
        for (_, y) in order {
            match pos.get(&y) {
                Some(&q) => {
                    if !structure.neighbors(p).contains(&q) {
                        return None;
                    }
                }
                None => {
                    let free: Vec<Vertex> = structure
                        .neighbors(p)
                        .iter()
                        .copied()
                        .filter(|q| !used.contains(q))
                        .collect();
                    if free.is_empty() {
                        return None;
                    }
                    let q = free[uniform_index(rng, free.len())];
                    used.insert(q);
                    pos.insert(y, q);
                }
            }
            if visited.insert(y) {
                queue.push_back(y);
            }
        }
    }
    if entries.key_vertices().any(|x| !pos.contains_key(&x)) {
        return None;
    }
    Some(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explored(tree: &BlackBoxTree, steps: usize) -> KnownVertices {
        let mut h = tree.handle();
        let mut v = KnownVertices::entrance(&mut h);
        for _ in 0..steps {
            let next = *v.frontier().iter().next().unwrap();
            v.expand(next, &mut h);
        }
        v
    }

    #[test]
    fn labels_only_replays() {
        let t = BlackBoxTree::generate(3, 21).unwrap();
        let v = explored(&t, 3);
        for seed in 0..50 {
            let p = sample_consistent(&v, SamplingMode::LabelsOnly(&t), seed).unwrap();
            assert!(replays(&v, &p));
            p.check_invariants().unwrap();
        }
    }

    #[test]
    fn structures_replay() {
        let t = BlackBoxTree::generate(3, 22).unwrap();
        let v = explored(&t, 4);
        for seed in 0..50 {
            let p = sample_consistent(&v, SamplingMode::Structures, seed).unwrap();
            assert!(replays(&v, &p));
            p.structure().check_invariants().unwrap();
            p.coloring().check_invariants(p.structure()).unwrap();
        }
    }

    #[test]
    fn empty_entries_give_a_fresh_tree() {
        let v = KnownVertices::new(2);
        let p = sample_consistent(&v, SamplingMode::Structures, 3).unwrap();
        p.check_invariants().unwrap();
    }

    #[test]
    fn foreign_entries_rejected_in_labels_mode() {
        let t = BlackBoxTree::generate(3, 1).unwrap();
        let other = BlackBoxTree::generate(3, 2).unwrap();
        let v = explored(&other, 2);
        // colors at the entrance generally differ between two random trees
        let same = (1..=9).all(|c| (t.answer(Label::ENTRANCE, c) == t.invalid()) == (v.get(Label::ENTRANCE, c) == v.invalid()));
        if !same {
            assert!(sample_consistent(&v, SamplingMode::LabelsOnly(&t), 0).is_err());
        }
    }
}
