//! Brute-force count of labelings that replay a dictionary.

use welded_core::hybrid_sim::KnownVertices;
use welded_core::welded_tree::{label_mask, BlackBoxTree, Label, Vertex, NUM_COLORS};

/// Number of labelings of `template`'s welding and coloring, entrance fixed
/// to `0`, under which every entry of `v` replays. Labels are assigned
/// vertex by vertex with every unused string tried, pruning as soon as a
/// recorded answer is contradicted. Returns `None` past `cap` leaves.
pub fn brute_count_labelings(v: &KnownVertices, template: &BlackBoxTree, cap: u64) -> Option<u64> {
    let n = v.height();
    let s = template.structure();
    let order: Vec<Vertex> = bfs_order(template);
    let mut labels: Vec<Option<Label>> = vec![None; s.vertex_count()];
    labels[s.entrance()] = Some(Label::ENTRANCE);
    let mut used = vec![false; label_mask(n) as usize];
    used[0] = true;
    let mut count = 0u64;
    let mut leaves = 0u64;
    if !locally_ok(v, template, &labels, s.entrance()) {
        return Some(0);
    }
    dfs(v, template, &order[1..], &mut labels, &mut used, &mut count, &mut leaves, cap)?;
    Some(count)
}

fn bfs_order(t: &BlackBoxTree) -> Vec<Vertex> {
    let s = t.structure();
    let mut seen = vec![false; s.vertex_count()];
    let mut order = vec![s.entrance()];
    seen[s.entrance()] = true;
    let mut i = 0;
    while i < order.len() {
        for &w in s.neighbors(order[i]) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    order
}

/// Checks the entries touching vertex `p` against the labels assigned so far.
fn locally_ok(v: &KnownVertices, t: &BlackBoxTree, labels: &[Option<Label>], p: Vertex) -> bool {
    let inv = v.invalid();
    let Some(lp) = labels[p] else { return true };
    for c in 1..=NUM_COLORS {
        let q = t.coloring().neighbor(p, c);
        if let Some(ans) = v.answers(lp) {
            let y = ans[(c - 1) as usize];
            match q {
                None if y != inv => return false,
                Some(_) if y == inv => return false,
                Some(q) => {
                    if let Some(lq) = labels[q] {
                        if lq != y {
                            return false;
                        }
                    }
                }
                None => {}
            }
        }
        if let Some(q) = q {
            if let Some(ans) = labels[q].and_then(|lq| v.answers(lq)) {
                if ans[(c - 1) as usize] != lp {
                    return false;
                }
            }
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    v: &KnownVertices,
    t: &BlackBoxTree,
    rest: &[Vertex],
    labels: &mut Vec<Option<Label>>,
    used: &mut Vec<bool>,
    count: &mut u64,
    leaves: &mut u64,
    cap: u64,
) -> Option<()> {
    let Some((&p, rest)) = rest.split_first() else {
        *leaves += 1;
        if *leaves > cap {
            return None;
        }
        let all_placed = v.labels().iter().all(|l| labels.contains(&Some(*l)));
        if all_placed {
            *count += 1;
        }
        return Some(());
    };
    for s in 0..used.len() {
        if used[s] {
            continue;
        }
        labels[p] = Some(Label(s as u64));
        if locally_ok(v, t, labels, p) {
            used[s] = true;
            dfs(v, t, rest, labels, used, count, leaves, cap)?;
            used[s] = false;
        }
    }
    labels[p] = None;
    Some(())
}
