//! The simplicial transform `s(P)`, f-vectors and the correction counts
//! `ν_{i,k}`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::poset::{classify, Direction, PointedPoset, PosetError, VertexMask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("transform order is not antisymmetric at `{0}`")]
    OrderNotAntisymmetric(String),
    #[error("poset is not regular: `{0}` and `{1}`")]
    NotRegular(String, String),
    #[error("poset is not polyhedral")]
    NotPolyhedral,
    #[error("no object with {0} vertices")]
    NoSuchRank(usize),
    #[error("need 0 <= i < k, got i = {0}, k = {1}")]
    BadIndices(usize, usize),
}

/// `s(P)` with the class of every pair `(x, S)`.
#[derive(Clone, Debug)]
pub struct TransformResult {
    pub transform: PointedPoset,
    /// Per class: a representative object of `P` and the vertex mask `S`.
    pub classes: Vec<(usize, VertexMask)>,
    /// `(x, S)` to class index.
    pub class_of: HashMap<(usize, VertexMask), usize>,
    /// `x` to the class of `(x, V(x))`.
    pub embedding: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn submasks(mask: VertexMask) -> impl Iterator<Item = VertexMask> {
    let mut sub = Some(mask);
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == 0 { None } else { Some((s - 1) & mask) };
        Some(s)
    })
}

fn mask_names(p: &PointedPoset, mask: VertexMask) -> String {
    let names: Vec<&str> = p.mask_to_vertices(mask).iter().map(|&v| p.name(v)).collect();
    names.join(",")
}

pub fn simplicial_transform(p: &PointedPoset) -> Result<TransformResult, TransformError> {
    let n = p.len();
    // every (x, S) with S ⊆ V(x), grouped by S
    let mut by_mask: HashMap<VertexMask, Vec<usize>> = HashMap::new();
    for x in 0..n {
        for s in submasks(p.vertex_mask(x)) {
            by_mask.entry(s).or_default().push(x);
        }
    }
    let mut masks: Vec<VertexMask> = by_mask.keys().copied().collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut classes: Vec<(usize, VertexMask)> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut class_of = HashMap::new();
    for &s in &masks {
        let objs = &by_mask[&s];
        let mut uf = UnionFind::new(objs.len());
        for i in 0..objs.len() {
            for j in i + 1..objs.len() {
                if p.have_upper_bound(&[objs[i], objs[j]]) {
                    uf.union(i, j);
                }
            }
        }
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        for (i, &x) in objs.iter().enumerate() {
            let r = uf.find(i);
            let c = *root_class.entry(r).or_insert_with(|| {
                classes.push((x, s));
                members.push(Vec::new());
                classes.len() - 1
            });
            members[c].push(x);
            class_of.insert((x, s), c);
        }
    }
    // objects above some member of each class
    let reach: Vec<FixedBitSet> = members
        .iter()
        .map(|ms| {
            let mut b = FixedBitSet::with_capacity(n);
            for &x in ms {
                for y in p.up_set(x) {
                    b.insert(y);
                }
            }
            b
        })
        .collect();
    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in 0..classes.len() {
            if a == b {
                continue;
            }
            let (sa, sb) = (classes[a].1, classes[b].1);
            if sa & !sb == 0 && !reach[a].is_disjoint(&reach[b]) {
                pairs.push((a, b));
            }
        }
    }
    let embedding: Vec<usize> = (0..n).map(|x| class_of[&(x, p.vertex_mask(x))]).collect();
    let names = class_names(p, &classes, &members);
    let base = class_of[&(p.base(), 0)];
    let transform = PointedPoset::from_indices(names, base, &pairs).map_err(|e| match e {
        PosetError::Cycle(at) => TransformError::OrderNotAntisymmetric(at),
        other => TransformError::Poset(other),
    })?;
    Ok(TransformResult { transform, classes, class_of, embedding })
}

/// A class containing `(x, V(x))` is named after the first such `x`; other
/// classes are written `[x:{vertices}]`.
fn class_names(p: &PointedPoset, classes: &[(usize, VertexMask)], members: &[Vec<usize>]) -> Vec<String> {
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::with_capacity(classes.len());
    for (c, &(rep, s)) in classes.iter().enumerate() {
        let own = members[c].iter().copied().filter(|&x| p.vertex_mask(x) == s).min();
        let mut name = match own {
            Some(x) => p.name(x).to_string(),
            None => format!("[{}:{{{}}}]", p.name(rep), mask_names(p, s)),
        };
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        out.push(name);
    }
    out
}

/// Result of checking that `x -> [x, V(x)]` is an order embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    /// Whether `P` is reduced and polyhedral.
    pub precondition: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_injective: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_order_embedding: Option<(String, String)>,
}

impl EmbeddingCheck {
    pub fn is_ok(&self) -> bool {
        self.not_injective.is_none() && self.not_order_embedding.is_none()
    }
}

pub fn check_embedding(p: &PointedPoset) -> Result<EmbeddingCheck, TransformError> {
    let report = classify(p);
    let t = simplicial_transform(p)?;
    let s = &t.transform;
    let mut out = EmbeddingCheck {
        precondition: report.reduced && report.polyhedral,
        not_injective: None,
        not_order_embedding: None,
    };
    let names = |x: usize, y: usize| (p.name(x).to_string(), p.name(y).to_string());
    for x in 0..p.len() {
        for y in 0..p.len() {
            if x < y && out.not_injective.is_none() && t.embedding[x] == t.embedding[y] {
                out.not_injective = Some(names(x, y));
            }
            if out.not_order_embedding.is_none() && p.leq(x, y) != s.leq(t.embedding[x], t.embedding[y]) {
                out.not_order_embedding = Some(names(x, y));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FVector {
    pub f: Vec<usize>,
    pub norm: i64,
}

pub fn f_vector(p: &PointedPoset) -> FVector {
    let norm = p.norm();
    let mut f = vec![0; (norm + 1).max(0) as usize];
    for x in 0..p.len() {
        let k = p.vertex_count(x);
        if k > 0 {
            f[k - 1] += 1;
        }
    }
    FVector { f, norm }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuMode {
    Direct,
    Recursive,
}

fn require_regular_polyhedral(p: &PointedPoset) -> Result<(), TransformError> {
    let r = classify(p);
    if !r.polyhedral {
        return Err(TransformError::NotPolyhedral);
    }
    if let Some((a, b)) = r.witnesses.regular {
        return Err(TransformError::NotRegular(a, b));
    }
    Ok(())
}

/// `P[k] = P_{<=x}` for the first `x` with `|V(x)| = k + 1`.
fn rank_down_set(p: &PointedPoset, k: usize) -> Result<PointedPoset, TransformError> {
    let x = (0..p.len())
        .find(|&x| p.vertex_count(x) == k + 1)
        .ok_or(TransformError::NoSuchRank(k + 1))?;
    Ok(p.sub_poset(x, Direction::Down).0)
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `ν_{i,k}(P)` for a regular polyhedral `P`.
pub fn nu(p: &PointedPoset, i: usize, k: usize, mode: NuMode) -> Result<i64, TransformError> {
    require_regular_polyhedral(p)?;
    if i >= k {
        return Err(TransformError::BadIndices(i, k));
    }
    let pk = rank_down_set(p, k)?;
    match mode {
        NuMode::Direct => Ok(nu_direct(&pk, i)?),
        NuMode::Recursive => nu_recursive(&pk, i),
    }
}

/// Classes `[x, S]` of `s(P_{<=x})`, `x` the top, with `|S| = i + 1` and `S`
/// in no `V(y)`, `y < x`.
fn nu_direct(px: &PointedPoset, i: usize) -> Result<i64, TransformError> {
    if i == 0 {
        return Ok(0);
    }
    let top = *px.maximal_objects().first().expect("down-set has a top");
    let t = simplicial_transform(px)?;
    let count = t
        .classes
        .iter()
        .filter(|&&(_, s)| {
            s.count_ones() as usize == i + 1
                && !(0..px.len()).any(|y| y != top && s & !px.vertex_mask(y) == 0)
        })
        .count();
    Ok(count as i64)
}

fn nu_recursive(pn: &PointedPoset, i: usize) -> Result<i64, TransformError> {
    if i == 0 {
        return Ok(0);
    }
    let n = pn.norm() as usize;
    let f = f_vector(pn).f;
    let mut acc = f[i] as i64;
    for k in i + 1..n {
        if f[k] > 0 {
            acc += f[k] as i64 * nu_recursive(&rank_down_set(pn, k)?, i)?;
        }
    }
    Ok(binomial(n + 1, i + 1) - acc)
}

/// `f_i(s(P)) = f_i(P) + Σ_{k > i} f_k(P) ν_{i,k}(P)`.
pub fn f_transform_predict(p: &PointedPoset, mode: NuMode) -> Result<FVector, TransformError> {
    require_regular_polyhedral(p)?;
    let fv = f_vector(p);
    let mut out = fv.f.clone();
    for (i, slot) in out.iter_mut().enumerate() {
        for k in i + 1..fv.f.len() {
            if fv.f[k] > 0 {
                *slot += fv.f[k] * nu(p, i, k, mode)? as usize;
            }
        }
    }
    Ok(FVector { f: out, norm: fv.norm })
}

/// Coefficients of `Σ_{j>=0} f_{j-1} t^j / (1 - t)^j` through `t^D`, with
/// `f_{-1} = 1`.
pub fn hilbert_series_from_f(f: &[usize], max_degree: usize) -> Vec<u64> {
    let mut out = vec![0u64; max_degree + 1];
    out[0] = 1;
    for (idx, &fi) in f.iter().enumerate() {
        let j = idx + 1;
        for (d, slot) in out.iter_mut().enumerate().skip(j) {
            *slot += fi as u64 * binomial(d - 1, j - 1) as u64;
        }
    }
    out
}

/// The pushout comparison for one maximal object `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushoutCheck {
    pub object: String,
    pub union_ok: bool,
    pub intersection_ok: bool,
}

/// For every maximal `x`: the classes of `s(P \ x)` and `s(P_{<=x})` cover
/// `s(P)` and meet exactly in those of `s(P_{<x})`.
pub fn pushout_checks(p: &PointedPoset) -> Result<Vec<PushoutCheck>, TransformError> {
    let t = simplicial_transform(p)?;
    let image = |keep: &[usize]| -> Result<BTreeSet<usize>, TransformError> {
        let (q, old) = p.induced(keep, p.base());
        let tq = simplicial_transform(&q)?;
        Ok(tq
            .classes
            .iter()
            .map(|&(rep, s)| {
                let mask = q
                    .mask_to_vertices(s)
                    .iter()
                    .map(|&v| 1u64 << p.vertex_bit(old[v]).expect("vertex of P"))
                    .fold(0, |a, b| a | b);
                t.class_of[&(old[rep], mask)]
            })
            .collect())
    };
    let all: BTreeSet<usize> = (0..t.classes.len()).collect();
    let mut out = Vec::new();
    for x in p.maximal_objects() {
        if x == p.base() {
            continue;
        }
        let without: Vec<usize> = (0..p.len()).filter(|&y| y != x).collect();
        let below = p.down_set(x);
        let strictly: Vec<usize> = below.iter().copied().filter(|&y| y != x).collect();
        let a = image(&without)?;
        let b = image(&below)?;
        let c = image(&strictly)?;
        out.push(PushoutCheck {
            object: p.name(x).to_string(),
            union_ok: a.union(&b).copied().collect::<BTreeSet<_>>() == all,
            intersection_ok: a.intersection(&b).copied().collect::<BTreeSet<_>>() == c,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::is_isomorphic;

    fn square() -> PointedPoset {
        PointedPoset::new(
            &["*", "v1", "v2", "v3", "v4", "e12", "e23", "e34", "e41", "top"],
            "*",
            &[
                ("*", "v1"), ("*", "v2"), ("*", "v3"), ("*", "v4"),
                ("v1", "e12"), ("v2", "e12"), ("v2", "e23"), ("v3", "e23"),
                ("v3", "e34"), ("v4", "e34"), ("v4", "e41"), ("v1", "e41"),
                ("e12", "top"), ("e23", "top"), ("e34", "top"), ("e41", "top"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn square_transform_is_a_simplex() {
        let p = square();
        let t = simplicial_transform(&p).unwrap();
        assert_eq!(t.transform.len(), 16);
        assert!(classify(&t.transform).simplicial);
        assert_eq!(f_vector(&t.transform).f, vec![4, 6, 4, 1]);
        assert!(t.transform.index_of("[top:{v1,v3}]").is_ok());
        assert!(check_embedding(&p).unwrap().is_ok());
    }

    #[test]
    fn square_nu() {
        let p = square();
        for mode in [NuMode::Direct, NuMode::Recursive] {
            assert_eq!(nu(&p, 2, 3, mode).unwrap(), 4);
            assert_eq!(nu(&p, 1, 3, mode).unwrap(), 2);
            assert_eq!(nu(&p, 0, 3, mode).unwrap(), 0);
            assert_eq!(f_transform_predict(&p, mode).unwrap().f, vec![4, 6, 4, 1]);
        }
        assert_eq!(f_vector(&p).f, vec![4, 4, 0, 1]);
        assert!(matches!(nu(&p, 1, 2, NuMode::Direct), Err(TransformError::NoSuchRank(3))));
        assert_eq!(hilbert_series_from_f(&[4, 6, 4, 1], 3), vec![1, 4, 10, 20]);
    }

    #[test]
    fn simplicial_posets_are_fixed() {
        let p = PointedPoset::new(
            &["*", "a", "b", "c", "d"],
            "*",
            &[("*", "a"), ("*", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")],
        )
        .unwrap();
        let t = simplicial_transform(&p).unwrap();
        assert!(is_isomorphic(&p, &t.transform));
        assert_eq!(hilbert_series_from_f(&f_vector(&p).f, 4), vec![1, 2, 4, 6, 8]);
    }

    #[test]
    fn chain_embedding_not_injective() {
        let p = PointedPoset::new(&["*", "v", "w"], "*", &[("*", "v"), ("v", "w")]).unwrap();
        let e = check_embedding(&p).unwrap();
        assert!(!e.precondition);
        assert_eq!(e.not_injective, Some(("v".into(), "w".into())));
    }

    #[test]
    fn pushouts() {
        for c in pushout_checks(&square()).unwrap() {
            assert!(c.union_ok && c.intersection_ok);
        }
    }
}
