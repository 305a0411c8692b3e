use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::welded_tree::{ColorCode, Label, Oracle, NUM_COLORS};

/// Recorded oracle answers, keyed by `(label, color)`.
///
/// Vertices are always recorded whole: a key vertex carries the answers for
/// all nine colors. Absent keys read as INVALID.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KnownVertices {
    n: u32,
    entries: BTreeMap<Label, [Label; 9]>,
}

impl KnownVertices {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// The entrance's nine answers, spending nine queries.
    pub fn entrance<O: Oracle + ?Sized>(oracle: &mut O) -> Self {
        let mut v = Self::new(oracle.height());
        v.expand(Label::ENTRANCE, oracle);
        v
    }

    pub fn height(&self) -> u32 {
        self.n
    }

    pub fn invalid(&self) -> Label {
        Label::invalid(self.n)
    }

    /// Stored answer for `(x, c)`, INVALID if absent.
    pub fn get(&self, x: Label, c: ColorCode) -> Label {
        match (self.entries.get(&x), c) {
            (Some(ans), 1..=NUM_COLORS) => ans[(c - 1) as usize],
            _ => self.invalid(),
        }
    }

    pub fn contains_key(&self, x: Label, c: ColorCode) -> bool {
        (1..=NUM_COLORS).contains(&c) && self.entries.contains_key(&x)
    }

    pub fn is_key_vertex(&self, x: Label) -> bool {
        self.entries.contains_key(&x)
    }

    pub fn answers(&self, x: Label) -> Option<&[Label; 9]> {
        self.entries.get(&x)
    }

    /// Number of distinct key vertices.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored `(label, color)` keys.
    pub fn key_count(&self) -> usize {
        9 * self.entries.len()
    }

    pub fn key_vertices(&self) -> impl Iterator<Item = Label> + '_ {
        self.entries.keys().copied()
    }

    /// Every valid label appearing as a key or a value, ascending.
    pub fn labels(&self) -> BTreeSet<Label> {
        let inv = self.invalid();
        let mut out = BTreeSet::new();
        for (&k, ans) in &self.entries {
            out.insert(k);
            out.extend(ans.iter().copied().filter(|&a| a != inv));
        }
        out
    }

    /// Valid labels that appear only as values.
    pub fn frontier(&self) -> BTreeSet<Label> {
        let mut ls = self.labels();
        ls.retain(|l| !self.entries.contains_key(l));
        ls
    }

    /// Whether `x` is a key vertex or a recorded non-INVALID answer.
    pub fn is_known_vertex(&self, x: Label) -> bool {
        if x == self.invalid() {
            return false;
        }
        self.entries.contains_key(&x) || self.entries.values().any(|a| a.contains(&x))
    }

    /// Records a whole vertex.
    pub fn insert_vertex(&mut self, x: Label, answers: [Label; 9]) {
        self.entries.insert(x, answers);
    }

    pub fn remove_vertex(&mut self, x: Label) -> Option<[Label; 9]> {
        self.entries.remove(&x)
    }

    /// Queries all nine colors of `x` unless it is already a key vertex.
    /// Returns the number of queries spent.
    pub fn expand<O: Oracle + ?Sized>(&mut self, x: Label, oracle: &mut O) -> u64 {
        if self.entries.contains_key(&x) {
            return 0;
        }
        let mut ans = [self.invalid(); 9];
        for c in 1..=NUM_COLORS {
            ans[(c - 1) as usize] = oracle.query(x, c);
        }
        self.entries.insert(x, ans);
        9
    }

    /// Key-wise union. Entries of `other` win on conflict, which never
    /// happens when both replay against the same oracle.
    pub fn merge(&mut self, other: &KnownVertices) {
        for (&k, &a) in &other.entries {
            self.entries.insert(k, a);
        }
    }

    pub fn merged(&self, other: &KnownVertices) -> KnownVertices {
        let mut out = self.clone();
        out.merge(other);
        out
    }

    /// Key-wise inclusion.
    pub fn is_subset_of(&self, other: &KnownVertices) -> bool {
        self.entries.iter().all(|(k, a)| other.entries.get(k) == Some(a))
    }

    /// Keeps only the given key vertices.
    pub fn restricted_to(&self, keep: &BTreeSet<Label>) -> KnownVertices {
        KnownVertices {
            n: self.n,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep.contains(k))
                .map(|(&k, &a)| (k, a))
                .collect(),
        }
    }

    /// Valid neighbours of a key vertex, by color.
    pub fn neighbors(&self, x: Label) -> Vec<(ColorCode, Label)> {
        let inv = self.invalid();
        self.entries
            .get(&x)
            .map(|a| {
                (1..=NUM_COLORS)
                    .zip(a.iter().copied())
                    .filter(|&(_, l)| l != inv)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Key vertices reachable from the entrance through key vertices.
    pub fn reachable_keys(&self) -> BTreeSet<Label> {
        let mut seen = BTreeSet::new();
        if !self.entries.contains_key(&Label::ENTRANCE) {
            return seen;
        }
        let mut queue = VecDeque::from([Label::ENTRANCE]);
        seen.insert(Label::ENTRANCE);
        while let Some(x) = queue.pop_front() {
            for (_, y) in self.neighbors(x) {
                if self.entries.contains_key(&y) && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Whether the key vertices form a connected set containing the entrance.
    pub fn is_entrance_rooted(&self) -> bool {
        self.reachable_keys().len() == self.entries.len() && !self.entries.is_empty()
    }

    /// Smallest set of key vertices containing the entrance, every key vertex
    /// of `targets`, and shortest key-vertex paths joining them to the entrance.
    pub fn rooted_closure(&self, targets: &BTreeSet<Label>) -> BTreeSet<Label> {
        let mut parent: BTreeMap<Label, Label> = BTreeMap::new();
        let mut queue = VecDeque::new();
        if self.entries.contains_key(&Label::ENTRANCE) {
            parent.insert(Label::ENTRANCE, Label::ENTRANCE);
            queue.push_back(Label::ENTRANCE);
        }
        while let Some(x) = queue.pop_front() {
            for (_, y) in self.neighbors(x) {
                if self.entries.contains_key(&y) && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        let mut keep = BTreeSet::new();
        if parent.contains_key(&Label::ENTRANCE) {
            keep.insert(Label::ENTRANCE);
        }
        for &t in targets {
            let mut cur = t;
            while let Some(&p) = parent.get(&cur) {
                if !keep.insert(cur) || cur == p {
                    break;
                }
                cur = p;
            }
        }
        keep
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &[Label; 9])> + '_ {
        self.entries.iter().map(|(&k, a)| (k, a))
    }

    /// Flat `(label, color, answer)` triples in key order.
    pub fn triples(&self) -> impl Iterator<Item = (Label, ColorCode, Label)> + '_ {
        self.entries
            .iter()
            .flat_map(|(&k, a)| (1..=NUM_COLORS).map(move |c| (k, c, a[(c - 1) as usize])))
    }
}
