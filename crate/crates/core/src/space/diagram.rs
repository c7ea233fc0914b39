use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::poset::PointedPoset;
use crate::tensor::vertex_names;

use super::pairs::SimplicialPair;
use super::sset::SimplicialSet;
use super::SpaceError;

/// `Z_{P,(X,A)}`: every value is a sub-simplicial set of `∏_v X_v`, namely
/// the tuples whose support lies in `V(x)`.
#[derive(Clone, Debug)]
pub struct SpaceDiagram {
    poset: PointedPoset,
    factors: Vec<String>,
    ambient: SimplicialSet,
    /// `support[m][σ]`: factors where `σ` leaves `A_v`, as a bitmask.
    support: Vec<Vec<u64>>,
    /// Factor mask of `V(x)` per object.
    masks: Vec<u64>,
    /// Simplices of `Z(x)` per object and dimension, ascending.
    members: Vec<Vec<Vec<usize>>>,
}

/// Builds the diagram from pairs keyed by vertex name; `order` fixes the
/// factor order of the ambient product.
pub fn build_space_diagram(
    p: &PointedPoset,
    pairs: &BTreeMap<String, SimplicialPair>,
    order: Option<&[String]>,
) -> Result<SpaceDiagram, SpaceError> {
    let mut names = vertex_names(p);
    let keys: Vec<String> = pairs.keys().cloned().collect();
    let mut sorted = names.clone();
    sorted.sort();
    if sorted != keys {
        return Err(SpaceError::IndexMismatch { expected: sorted, found: keys });
    }
    if let Some(o) = order {
        let mut os = o.to_vec();
        os.sort();
        if os != sorted {
            return Err(SpaceError::BadOrder);
        }
        names = o.to_vec();
    }
    let chosen: Vec<&SimplicialPair> = names.iter().map(|n| &pairs[n]).collect();
    let top = chosen.first().map(|c| c.top()).unwrap_or(0);
    let ambient = if chosen.is_empty() {
        SimplicialSet::point(top)
    } else {
        SimplicialSet::product(&chosen.iter().map(|c| &c.total).collect::<Vec<_>>())?
    };
    let support: Vec<Vec<u64>> = (0..=top)
        .map(|m| {
            let radix: Vec<usize> = chosen.iter().map(|c| c.total.count(m)).collect();
            (0..ambient.count(m))
                .map(|s| {
                    SimplicialSet::decode_product(s, &radix)
                        .iter()
                        .zip(&chosen)
                        .enumerate()
                        .filter(|(_, (&x, c))| !c.sub[m].contains(x))
                        .fold(0u64, |acc, (k, _)| acc | (1 << k))
                })
                .collect()
        })
        .collect();
    let position: HashMap<&str, usize> = names.iter().enumerate().map(|(k, n)| (n.as_str(), k)).collect();
    let masks: Vec<u64> = (0..p.len())
        .map(|x| p.vertex_set(x).iter().fold(0u64, |acc, &v| acc | (1 << position[p.name(v)])))
        .collect();
    let members = masks
        .iter()
        .map(|&mask| {
            support.iter().map(|level| (0..level.len()).filter(|&s| level[s] & !mask == 0).collect()).collect()
        })
        .collect();
    Ok(SpaceDiagram { poset: p.clone(), factors: names, ambient, support, masks, members })
}

/// The same pair at every vertex.
pub fn uniform_pairs(p: &PointedPoset, pair: &SimplicialPair) -> BTreeMap<String, SimplicialPair> {
    vertex_names(p).into_iter().map(|n| (n, pair.clone())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportCheck {
    /// Every simplex of `Z(x)` has support inside `V(x)`.
    pub within_vertex_sets: bool,
    /// Cover inclusions keep simplices and their supports.
    pub maps_preserve_support: bool,
    /// Each `Z(x)` injects into the colimit.
    pub colimit_injective: bool,
}

impl SpaceDiagram {
    pub fn poset(&self) -> &PointedPoset {
        &self.poset
    }

    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    pub fn ambient(&self) -> &SimplicialSet {
        &self.ambient
    }

    pub fn top(&self) -> usize {
        self.ambient.top()
    }

    /// Support of an ambient simplex as factor names.
    pub fn support(&self, m: usize, s: usize) -> Vec<&str> {
        (0..self.factors.len())
            .filter(|k| self.support[m][s] >> k & 1 == 1)
            .map(|k| self.factors[k].as_str())
            .collect()
    }

    /// Ambient indices of `Z(x)_m`.
    pub fn members(&self, x: usize, m: usize) -> &[usize] {
        &self.members[x][m]
    }

    /// `Z(x)` materialized.
    pub fn value(&self, x: usize) -> SimplicialSet {
        let bits = self
            .members[x]
            .iter()
            .enumerate()
            .map(|(m, l)| {
                let mut b = fixedbitset::FixedBitSet::with_capacity(self.ambient.count(m));
                b.extend(l.iter().copied());
                b
            })
            .collect::<Vec<_>>();
        self.ambient.restrict(&bits).0
    }

    fn position(&self, x: usize, m: usize, s: usize) -> Option<usize> {
        self.members[x][m].binary_search(&s).ok()
    }

    pub fn support_check(&self) -> SupportCheck {
        let top = self.top();
        let within = (0..self.poset.len())
            .all(|x| (0..=top).all(|m| self.members[x][m].iter().all(|&s| self.support[m][s] & !self.masks[x] == 0)));
        let preserve = self.poset.covers().iter().all(|&(x, y)| {
            (0..=top).all(|m| self.members[x][m].iter().all(|&s| self.position(y, m, s).is_some()))
        });
        let colimit_injective = self.colimit_classes().1;
        SupportCheck { within_vertex_sets: within, maps_preserve_support: preserve, colimit_injective }
    }

    /// Union-find classes of `⊔_x Z(x)_m` per dimension, and whether every
    /// `Z(x)` injects.
    fn colimit_classes(&self) -> (Vec<ColimLevel>, bool) {
        let top = self.top();
        let n = self.poset.len();
        let mut injective = true;
        let mut levels = Vec::new();
        for m in 0..=top {
            let mut offsets = Vec::with_capacity(n + 1);
            let mut acc = 0;
            for x in 0..n {
                offsets.push(acc);
                acc += self.members[x][m].len();
            }
            offsets.push(acc);
            let mut uf = UnionFind::new(acc);
            for &(x, y) in self.poset.covers() {
                for (i, &s) in self.members[x][m].iter().enumerate() {
                    let j = self.position(y, m, s).expect("cover maps are inclusions");
                    uf.union(offsets[x] + i, offsets[y] + j);
                }
            }
            let mut class_id = HashMap::new();
            let mut class = vec![0; acc];
            let mut reps = Vec::new();
            for x in 0..n {
                for (i, &s) in self.members[x][m].iter().enumerate() {
                    let root = uf.find(offsets[x] + i);
                    let id = *class_id.entry(root).or_insert_with(|| {
                        reps.push((x, s));
                        reps.len() - 1
                    });
                    class[offsets[x] + i] = id;
                }
            }
            for x in 0..n {
                let mut seen: Vec<usize> = class[offsets[x]..offsets[x + 1]].to_vec();
                seen.sort_unstable();
                seen.dedup();
                injective &= seen.len() == offsets[x + 1] - offsets[x];
            }
            levels.push(ColimLevel { offsets, class, reps });
        }
        (levels, injective)
    }

    /// The colimit, glued along the cover inclusions.
    pub fn colimit(&self) -> SimplicialSet {
        let top = self.top();
        let (levels, _) = self.colimit_classes();
        let class_of = |m: usize, x: usize, s: usize| -> usize {
            let i = self.position(x, m, s).expect("closed under faces and degeneracies");
            levels[m].class[levels[m].offsets[x] + i]
        };
        let mut faces = vec![Vec::new(); top + 1];
        for m in 1..=top {
            faces[m] = levels[m]
                .reps
                .iter()
                .flat_map(|&(x, s)| (0..=m).map(move |i| (x, s, i)))
                .map(|(x, s, i)| class_of(m - 1, x, self.ambient.face(m, s, i)))
                .collect();
        }
        let mut degens = vec![Vec::new(); top + 1];
        for m in 0..top {
            degens[m] = levels[m]
                .reps
                .iter()
                .flat_map(|&(x, s)| (0..=m).map(move |j| (x, s, j)))
                .map(|(x, s, j)| class_of(m + 1, x, self.ambient.degeneracy(m, s, j)))
                .collect();
        }
        let count = levels.iter().map(|l| l.reps.len()).collect();
        SimplicialSet::from_tables(count, faces, degens)
    }

    /// The diagonal of the simplicial replacement: `m`-simplices are pairs
    /// of a weak chain `x_0 <= ... <= x_m` and an `m`-simplex of `Z(x_0)`.
    pub fn hocolim(&self) -> SimplicialSet {
        let top = self.top();
        let p = &self.poset;
        let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..p.len()).map(|x| vec![x]).collect()];
        for _ in 0..top {
            let next = chains
                .last()
                .expect("nonempty")
                .iter()
                .flat_map(|c| {
                    let last = *c.last().expect("nonempty");
                    p.up_set(last).into_iter().map(move |y| {
                        let mut e = c.clone();
                        e.push(y);
                        e
                    })
                })
                .collect();
            chains.push(next);
        }
        let chain_id: Vec<HashMap<&[usize], usize>> =
            chains.iter().map(|l| l.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect()).collect();
        let offsets: Vec<Vec<usize>> = chains
            .iter()
            .enumerate()
            .map(|(m, l)| {
                let mut acc = 0;
                let mut o: Vec<usize> = l
                    .iter()
                    .map(|c| {
                        let start = acc;
                        acc += self.members[c[0]][m].len();
                        start
                    })
                    .collect();
                o.push(acc);
                o
            })
            .collect();
        let index = |m: usize, c: &[usize], s: usize| -> usize {
            offsets[m][chain_id[m][c]] + self.position(c[0], m, s).expect("chain value contains simplex")
        };
        let elements = |m: usize| {
            chains[m].iter().flat_map(move |c| self.members[c[0]][m].iter().map(move |&s| (c, s)))
        };
        let mut faces = vec![Vec::new(); top + 1];
        for m in 1..=top {
            let mut table = Vec::with_capacity(offsets[m][chains[m].len()] * (m + 1));
            for (c, s) in elements(m) {
                for i in 0..=m {
                    let mut d = c.clone();
                    d.remove(i);
                    table.push(index(m - 1, &d, self.ambient.face(m, s, i)));
                }
            }
            faces[m] = table;
        }
        let mut degens = vec![Vec::new(); top + 1];
        for m in 0..top {
            let mut table = Vec::with_capacity(offsets[m][chains[m].len()] * (m + 1));
            for (c, s) in elements(m) {
                for j in 0..=m {
                    let mut d = c.clone();
                    d.insert(j + 1, c[j]);
                    table.push(index(m + 1, &d, self.ambient.degeneracy(m, s, j)));
                }
            }
            degens[m] = table;
        }
        let count = offsets.iter().zip(&chains).map(|(o, l)| o[l.len()]).collect();
        SimplicialSet::from_tables(count, faces, degens)
    }
}

struct ColimLevel {
    offsets: Vec<usize>,
    class: Vec<usize>,
    reps: Vec<(usize, usize)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
