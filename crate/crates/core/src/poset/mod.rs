//! Finite pointed posets.
//!
//! A poset is given by objects, a base point and a (not necessarily reduced)
//! list of cover pairs; the order is the reflexive-transitive closure. Object
//! indices follow input order and every derived listing (vertices, chains,
//! witnesses) uses that order.

mod classify;
mod iso;
mod random;
mod reduce;

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify, PosetReport, Witnesses};
pub use iso::{find_isomorphism, is_isomorphic};
pub use random::{face_poset, random_poset, random_simplicial_complex_poset, RandomPosetConfig};
pub use reduce::{collapse, collapse_candidates, reduce, reduce_by, Reduction};

/// Bitmask of vertices; bit `i` is the `i`-th vertex in object order.
pub type VertexMask = u64;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("object `{0}` is not above the base point")]
    NoBasePoint(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("object identifiers must be nonempty")]
    EmptyName,
    #[error("{0} vertices exceed the supported maximum of 64")]
    TooManyVertices(usize),
    #[error("malformed poset file: {0}")]
    Format(String),
}

/// The on-disk form of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPoset {
    pub objects: Vec<String>,
    pub base: String,
    pub covers: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct PointedPoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    base: usize,
    /// `up[x]` has bit `y` iff `x <= y`.
    up: Vec<FixedBitSet>,
    /// `down[y]` has bit `x` iff `x <= y`.
    down: Vec<FixedBitSet>,
    hasse: Vec<(usize, usize)>,
    topo: Vec<usize>,
    vertices: Vec<usize>,
    masks: Vec<VertexMask>,
}

/// Maximal lower and minimal upper bounds of a set of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_lower: Vec<usize>,
    pub min_upper: Vec<usize>,
    pub meet: Option<usize>,
    pub join: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

impl PointedPoset {
    pub fn from_raw(raw: &RawPoset) -> Result<Self, PosetError> {
        let mut index = HashMap::new();
        for (i, name) in raw.objects.iter().enumerate() {
            if name.is_empty() {
                return Err(PosetError::EmptyName);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::DuplicateObject(name.clone()));
            }
        }
        let look = |s: &String| index.get(s).copied().ok_or_else(|| PosetError::UnknownObject(s.clone()));
        let base = look(&raw.base)?;
        let mut pairs = Vec::with_capacity(raw.covers.len());
        for (a, b) in &raw.covers {
            pairs.push((look(a)?, look(b)?));
        }
        Self::from_indices(raw.objects.clone(), base, &pairs)
    }

    /// Convenience constructor from string slices.
    pub fn new(objects: &[&str], base: &str, covers: &[(&str, &str)]) -> Result<Self, PosetError> {
        Self::from_raw(&RawPoset {
            objects: objects.iter().map(|s| s.to_string()).collect(),
            base: base.to_string(),
            covers: covers.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, PosetError> {
        let raw: RawPoset = serde_json::from_str(text).map_err(|e| PosetError::Format(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn to_raw(&self) -> RawPoset {
        RawPoset {
            objects: self.names.clone(),
            base: self.names[self.base].clone(),
            covers: self
                .hasse
                .iter()
                .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("poset serializes")
    }

    pub(crate) fn from_indices(names: Vec<String>, base: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = names.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in pairs {
            if a == b {
                return Err(PosetError::Cycle(names[a].clone()));
            }
            if !succ[a].contains(&b) {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() < n {
            let bad = (0..n).find(|&i| indeg[i] > 0).expect("cycle member");
            return Err(PosetError::Cycle(names[bad].clone()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in topo.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(x);
            for &y in &succ[x] {
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        if let Some(x) = (0..n).find(|&x| !up[base].contains(x)) {
            return Err(PosetError::NoBasePoint(names[x].clone()));
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in up[x].ones() {
                down[y].insert(x);
            }
        }
        let mut hasse = Vec::new();
        for x in 0..n {
            for y in up[x].ones() {
                if y == x {
                    continue;
                }
                // x < z < y for some z?
                let mut between = up[x].clone();
                between.intersect_with(&down[y]);
                if between.count_ones(..) == 2 {
                    hasse.push((x, y));
                }
            }
        }
        let vertices: Vec<usize> = (0..n)
            .filter(|&v| v != base && down[v].count_ones(..) == 2)
            .collect();
        if vertices.len() > MAX_VERTICES {
            return Err(PosetError::TooManyVertices(vertices.len()));
        }
        let mut masks = vec![0u64; n];
        for (bit, &v) in vertices.iter().enumerate() {
            for y in up[v].ones() {
                masks[y] |= 1 << bit;
            }
        }
        let index = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(PointedPoset { names, index, base, up, down, hasse, topo, vertices, masks })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PosetError> {
        self.index.get(name).copied().ok_or_else(|| PosetError::UnknownObject(name.to_string()))
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Cover pairs of the Hasse diagram, sorted by (lower, upper) index.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    /// Objects in a linear extension of the order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// `{y : y >= x}` in index order.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        self.up[x].ones().collect()
    }

    /// `{y : y <= x}` in index order.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        self.down[x].ones().collect()
    }

    pub fn maximal_objects(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].count_ones(..) == 1).collect()
    }

    /// The vertex set `V_P` in index order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_bit(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    pub fn vertex_mask(&self, x: usize) -> VertexMask {
        self.masks[x]
    }

    /// `V(x)` as object indices in index order.
    pub fn vertex_set(&self, x: usize) -> Vec<usize> {
        self.mask_to_vertices(self.masks[x])
    }

    pub fn mask_to_vertices(&self, mask: VertexMask) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn vertex_count(&self, x: usize) -> usize {
        self.masks[x].count_ones() as usize
    }

    /// `‖P‖ = max |V(x)| - 1`; `-1` for the one-object poset.
    pub fn norm(&self) -> i64 {
        self.masks.iter().map(|m| m.count_ones() as i64).max().unwrap_or(0) - 1
    }

    fn common(&self, s: &[usize], rows: &[FixedBitSet]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.len());
        acc.insert_range(..);
        for &x in s {
            acc.intersect_with(&rows[x]);
        }
        acc
    }

    pub fn upper_bounds(&self, s: &[usize]) -> Vec<usize> {
        self.common(s, &self.up).ones().collect()
    }

    pub fn lower_bounds(&self, s: &[usize]) -> Vec<usize> {
        self.common(s, &self.down).ones().collect()
    }

    pub fn have_upper_bound(&self, s: &[usize]) -> bool {
        self.common(s, &self.up).count_ones(..) > 0
    }

    /// `[∨S]`.
    pub fn min_upper(&self, s: &[usize]) -> Vec<usize> {
        let ub = self.upper_bounds(s);
        ub.iter()
            .copied()
            .filter(|&z| !ub.iter().any(|&w| self.lt(w, z)))
            .collect()
    }

    /// `[∧S]`.
    pub fn max_lower(&self, s: &[usize]) -> Vec<usize> {
        let lb = self.lower_bounds(s);
        lb.iter()
            .copied()
            .filter(|&z| !lb.iter().any(|&w| self.lt(z, w)))
            .collect()
    }

    pub fn meet(&self, s: &[usize]) -> Option<usize> {
        match self.max_lower(s).as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn join(&self, s: &[usize]) -> Option<usize> {
        match self.min_upper(s).as_slice() {
            [j] => Some(*j),
            _ => None,
        }
    }

    pub fn bounds(&self, s: &[usize]) -> Bounds {
        let max_lower = self.max_lower(s);
        let min_upper = self.min_upper(s);
        Bounds {
            meet: (max_lower.len() == 1).then(|| max_lower[0]),
            join: (min_upper.len() == 1).then(|| min_upper[0]),
            max_lower,
            min_upper,
        }
    }

    pub fn bounds_by_name(&self, s: &[&str]) -> Result<Bounds, PosetError> {
        let idx = s.iter().map(|n| self.index_of(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.bounds(&idx))
    }

    /// Full sub-poset on `P_{<=x}` (base `*`) or `P_{>=x}` (base `x`), with
    /// the map from new indices to old ones.
    pub fn sub_poset(&self, x: usize, dir: Direction) -> (PointedPoset, Vec<usize>) {
        let (keep, base) = match dir {
            Direction::Down => (self.down_set(x), self.base),
            Direction::Up => (self.up_set(x), x),
        };
        self.induced(&keep, base)
    }

    /// The full sub-poset on `keep` (which must contain `base` and be above it).
    pub fn induced(&self, keep: &[usize], base: usize) -> (PointedPoset, Vec<usize>) {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut pairs = Vec::new();
        for &a in keep {
            for &b in keep {
                if self.lt(a, b) {
                    pairs.push((pos[&a], pos[&b]));
                }
            }
        }
        let names = keep.iter().map(|&o| self.names[o].clone()).collect();
        let sub = PointedPoset::from_indices(names, pos[&base], &pairs).expect("induced sub-poset is valid");
        (sub, keep.to_vec())
    }

    /// Objects strictly between `x` and `y`.
    pub fn interval_interior(&self, x: usize, y: usize) -> Vec<usize> {
        let mut b = self.up[x].clone();
        b.intersect_with(&self.down[y]);
        b.ones().filter(|&z| z != x && z != y).collect()
    }

    /// Strict chains `x_0 < ... < x_n` of length `n` (n + 1 objects), in
    /// lexicographic index order.
    pub fn strict_chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        for x in 0..self.len() {
            cur.push(x);
            self.extend_chains(&mut cur, n, &mut out);
            cur.pop();
        }
        out
    }

    fn extend_chains(&self, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().expect("nonempty chain");
        for y in self.up[last].ones() {
            if y != last {
                cur.push(y);
                self.extend_chains(cur, n, out);
                cur.pop();
            }
        }
    }

    /// Length of the longest strict chain.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.len()];
        for &x in &self.topo {
            for y in self.down[x].ones() {
                if y != x {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h.into_iter().max().unwrap_or(0)
    }

    /// Names of a set of objects, sorted.
    pub fn name_set(&self, objs: &[usize]) -> BTreeSet<String> {
        objs.iter().map(|&o| self.names[o].clone()).collect()
    }

    /// Same poset with objects renamed by `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> PointedPoset {
        let names = self.names.iter().map(|s| f(s)).collect();
        PointedPoset::from_indices(names, self.base, &self.hasse).expect("renaming preserves validity")
    }

    /// Same poset with objects listed in the order `perm` (new index `i` is
    /// old object `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> PointedPoset {
        let mut inv = vec![0; self.len()];
        for (i, &o) in perm.iter().enumerate() {
            inv[o] = i;
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        let pairs: Vec<(usize, usize)> = self.hasse.iter().map(|&(a, b)| (inv[a], inv[b])).collect();
        PointedPoset::from_indices(names, inv[self.base], &pairs).expect("permutation preserves validity")
    }
}

impl PartialEq for PointedPoset {
    /// Equality of labelled posets: same names, base and order.
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() || self.names[self.base] != other.names[other.base] {
            return false;
        }
        let mut mine: Vec<(&str, &str)> =
            self.hasse.iter().map(|&(a, b)| (self.name(a), self.name(b))).collect();
        let mut theirs: Vec<(&str, &str)> =
            other.hasse.iter().map(|&(a, b)| (other.name(a), other.name(b))).collect();
        mine.sort();
        theirs.sort();
        let mut n1 = self.names.clone();
        let mut n2 = other.names.clone();
        n1.sort();
        n2.sort();
        n1 == n2 && mine == theirs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix_a() -> PointedPoset {
        PointedPoset::new(
            &["*", "1", "2", "3", "4", "5", "6"],
            "*",
            &[
                ("*", "1"), ("*", "2"), ("1", "3"), ("1", "4"), ("2", "3"),
                ("2", "4"), ("3", "5"), ("3", "6"), ("4", "5"), ("4", "6"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validates_and_rejects() {
        assert!(PointedPoset::new(&["*"], "*", &[]).is_ok());
        assert!(matches!(
            PointedPoset::new(&["*", "a", "b"], "*", &[("a", "b"), ("b", "a")]),
            Err(PosetError::Cycle(_))
        ));
        assert!(matches!(
            PointedPoset::new(&["*", "a"], "*", &[]),
            Err(PosetError::NoBasePoint(a)) if a == "a"
        ));
        assert!(matches!(
            PointedPoset::new(&["*", "a", "a"], "*", &[]),
            Err(PosetError::DuplicateObject(_))
        ));
        assert!(matches!(
            PointedPoset::new(&["*"], "*", &[("*", "q")]),
            Err(PosetError::UnknownObject(_))
        ));
    }

    #[test]
    fn redundant_covers_normalized() {
        let p = PointedPoset::new(&["*", "a", "b"], "*", &[("*", "a"), ("a", "b"), ("*", "b")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.leq(0, 2));
    }

    #[test]
    fn vertex_sets_and_bounds() {
        let p = fix_a();
        let five = p.index_of("5").unwrap();
        assert_eq!(p.name_set(&p.vertex_set(five)), ["1", "2"].iter().map(|s| s.to_string()).collect());
        assert!(p.vertex_set(p.base()).is_empty());
        let b = p.bounds_by_name(&["3", "4"]).unwrap();
        assert_eq!(p.name_set(&b.min_upper).len(), 2);
        assert_eq!(p.name_set(&b.max_lower), ["1", "2"].iter().map(|s| s.to_string()).collect());
        assert_eq!((b.meet, b.join), (None, None));
        let three = p.index_of("3").unwrap();
        let s = p.bounds(&[three]);
        assert_eq!((s.meet, s.join), (Some(three), Some(three)));
        assert_eq!(p.height(), 3);
        assert_eq!(p.norm(), 1);
    }

    #[test]
    fn sub_posets() {
        let p = fix_a();
        let (d, map) = p.sub_poset(p.index_of("3").unwrap(), Direction::Down);
        assert_eq!(d.len(), 4);
        assert_eq!(map.len(), 4);
        let (u, _) = p.sub_poset(p.index_of("3").unwrap(), Direction::Up);
        assert_eq!(u.len(), 3);
        assert_eq!(u.name(u.base()), "3");
        let (b, _) = p.sub_poset(p.base(), Direction::Down);
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let p = fix_a();
        let q = PointedPoset::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn strict_chain_counts() {
        let p = PointedPoset::new(&["*", "a", "b"], "*", &[("*", "a"), ("a", "b")]).unwrap();
        assert_eq!(p.strict_chains(0).len(), 3);
        assert_eq!(p.strict_chains(1).len(), 3);
        assert_eq!(p.strict_chains(2).len(), 1);
        assert!(p.strict_chains(3).is_empty());
    }
}
