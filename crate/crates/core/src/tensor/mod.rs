//! Polyhedral tensor products: the diagrams `T_{P,a}` and `S_{P,s}` and
//! their limits.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::limits::{higher_limits, DiagramSection, HigherLimits, LimitsError, PosetDiagram};
use crate::linalg::{
    find_section, rank, tensor_collection, tensor_map_collection, truncated_polynomial, FieldSpec, GradedMap,
    GradedSpace, LinalgError, Matrix,
};
use crate::poset::{collapse, collapse_candidates, PointedPoset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Limits(#[from] LimitsError),
    #[error("collection is indexed by {found:?}, poset vertices are {expected:?}")]
    IndexMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("no section for vertex `{0}`")]
    MissingSection(String),
    #[error("vertex order must be a permutation of the vertices")]
    BadOrder,
    #[error("poset is already reduced")]
    NoCollapseAvailable,
}

/// `a_v: M_v -> N_v` with an optional section `s_v`.
#[derive(Clone, Debug)]
pub struct VertexMorphism {
    pub map: GradedMap,
    pub section: Option<GradedMap>,
}

impl VertexMorphism {
    pub fn source(&self) -> &GradedSpace {
        self.map.source()
    }

    pub fn target(&self) -> &GradedSpace {
        self.map.target()
    }
}

/// A family of morphisms indexed by vertex names.
#[derive(Clone, Debug)]
pub struct MorphismCollection {
    max_degree: usize,
    entries: BTreeMap<String, VertexMorphism>,
}

impl MorphismCollection {
    pub fn new(max_degree: usize, entries: BTreeMap<String, VertexMorphism>) -> Result<Self, TensorError> {
        for m in entries.values() {
            if m.map.max_degree() != max_degree {
                return Err(LinalgError::MixedTruncation(max_degree, m.map.max_degree()).into());
            }
        }
        Ok(MorphismCollection { max_degree, entries })
    }

    /// The same morphism at every named vertex.
    pub fn uniform<S: AsRef<str>>(names: &[S], morphism: &VertexMorphism) -> Self {
        MorphismCollection {
            max_degree: morphism.map.max_degree(),
            entries: names.iter().map(|n| (n.as_ref().to_string(), morphism.clone())).collect(),
        }
    }

    /// Augmentations `k[v] -> k` (generator degree `gen_degree`) with their
    /// unit sections.
    pub fn augmentations<S: AsRef<str>>(names: &[S], gen_degree: usize, max_degree: usize) -> Result<Self, TensorError> {
        let mut entries = BTreeMap::new();
        for n in names {
            let (_, aug) = truncated_polynomial(n.as_ref(), gen_degree, max_degree)?;
            let section = find_section(FieldSpec::Rationals, &aug)?;
            entries.insert(n.as_ref().to_string(), VertexMorphism { map: aug, section });
        }
        Ok(MorphismCollection { max_degree, entries })
    }

    /// `H*(S^1) -> H*(pt)` at every vertex, with its section.
    pub fn circle<S: AsRef<str>>(names: &[S], max_degree: usize) -> Result<Self, TensorError> {
        let mut dims = vec![0; max_degree + 1];
        dims[0] = 1;
        if max_degree >= 1 {
            dims[1] = 1;
        }
        let m = GradedSpace::from_dims(&dims)?;
        let n = GradedSpace::unit(max_degree);
        let mut blocks: Vec<Matrix> = (0..=max_degree).map(|d| Matrix::zeros(n.dim(d), m.dim(d))).collect();
        blocks[0] = Matrix::identity(1);
        let map = GradedMap::new(m, n, blocks)?;
        let section = find_section(FieldSpec::Rationals, &map)?;
        Ok(Self::uniform(names, &VertexMorphism { map, section }))
    }

    /// Random surjective integer morphisms with `dim M_v,d <= 2` in each
    /// degree, sections attached.
    pub fn random_surjective<R: Rng, S: AsRef<str>>(
        rng: &mut R,
        names: &[S],
        max_degree: usize,
    ) -> Result<Self, TensorError> {
        let mut entries = BTreeMap::new();
        for name in names {
            let mdims: Vec<usize> = (0..=max_degree).map(|_| rng.gen_range(0..=2)).collect();
            let ndims: Vec<usize> = mdims.iter().map(|&m| rng.gen_range(0..=m)).collect();
            let m = GradedSpace::from_dims(&mdims)?;
            let n = GradedSpace::from_dims(&ndims)?;
            let mut blocks = Vec::new();
            for d in 0..=max_degree {
                loop {
                    let entries: Vec<i64> = (0..ndims[d] * mdims[d]).map(|_| rng.gen_range(-2..=2)).collect();
                    let b = Matrix::from_i64(ndims[d], mdims[d], &entries);
                    if rank(FieldSpec::Rationals, &b)? == ndims[d] {
                        blocks.push(b);
                        break;
                    }
                }
            }
            let map = GradedMap::new(m, n, blocks)?;
            let section = find_section(FieldSpec::Rationals, &map)?;
            entries.insert(name.as_ref().to_string(), VertexMorphism { map, section });
        }
        Ok(MorphismCollection { max_degree, entries })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, name: &str) -> Option<&VertexMorphism> {
        self.entries.get(name)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    /// Recomputes every section over `field`.
    pub fn with_sections(mut self, field: FieldSpec) -> Result<Self, TensorError> {
        for m in self.entries.values_mut() {
            m.section = find_section(field, &m.map)?;
        }
        Ok(self)
    }
}

/// Vertex positions (object indices) in the order used for tensor factors.
fn vertex_order(p: &PointedPoset, a: &MorphismCollection, order: Option<&[String]>) -> Result<Vec<usize>, TensorError> {
    let mut expected: Vec<String> = p.vertices().iter().map(|&v| p.name(v).to_string()).collect();
    let mut found = a.names();
    expected.sort();
    found.sort();
    if expected != found {
        return Err(TensorError::IndexMismatch { expected, found });
    }
    match order {
        None => Ok(p.vertices().to_vec()),
        Some(names) => {
            let mut sorted: Vec<String> = names.to_vec();
            sorted.sort();
            if sorted != expected {
                return Err(TensorError::BadOrder);
            }
            names.iter().map(|n| p.index_of(n).map_err(|_| TensorError::BadOrder)).collect()
        }
    }
}

/// The diagram `T_{P,a}` with factors in the given vertex order (default:
/// object order).
pub fn build_t(p: &PointedPoset, a: &MorphismCollection, order: Option<&[String]>) -> Result<PosetDiagram, TensorError> {
    let verts = vertex_order(p, a, order)?;
    let top = a.max_degree();
    let morph = |v: usize| a.get(p.name(v)).expect("checked index");
    let values = (0..p.len())
        .map(|x| {
            let factors: Vec<GradedSpace> = verts
                .iter()
                .map(|&v| if p.leq(v, x) { morph(v).source().clone() } else { morph(v).target().clone() })
                .collect();
            tensor_collection(&factors, top)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut maps = BTreeMap::new();
    for &(x, y) in p.covers() {
        let factors: Vec<GradedMap> = verts
            .iter()
            .map(|&v| {
                let m = morph(v);
                if p.leq(v, x) {
                    GradedMap::identity(m.source())
                } else if p.leq(v, y) {
                    m.map.clone()
                } else {
                    GradedMap::identity(m.target())
                }
            })
            .collect();
        maps.insert((x, y), tensor_map_collection(&factors, top)?);
    }
    Ok(PosetDiagram::new(p.clone(), values, maps)?)
}

/// The section `S_{P,s}` of `T_{P,a}` built from the vertex sections.
pub fn build_section_s(
    p: &PointedPoset,
    a: &MorphismCollection,
    t: &PosetDiagram,
    order: Option<&[String]>,
) -> Result<DiagramSection, TensorError> {
    let verts = vertex_order(p, a, order)?;
    let top = a.max_degree();
    for &v in &verts {
        if a.get(p.name(v)).and_then(|m| m.section.as_ref()).is_none() {
            return Err(TensorError::MissingSection(p.name(v).to_string()));
        }
    }
    let mut maps = BTreeMap::new();
    for &(x, y) in p.covers() {
        let factors: Vec<GradedMap> = verts
            .iter()
            .map(|&v| {
                let m = a.get(p.name(v)).expect("checked index");
                if p.leq(v, x) {
                    GradedMap::identity(m.source())
                } else if p.leq(v, y) {
                    m.section.clone().expect("checked section")
                } else {
                    GradedMap::identity(m.target())
                }
            })
            .collect();
        maps.insert((x, y), tensor_map_collection(&factors, top)?);
    }
    Ok(DiagramSection::new(t, maps)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyhedralTensor {
    /// `dim T_P(a)` per degree.
    pub dims: Vec<usize>,
    /// `dim lim^n` per `(n, degree)`, `n <= n_max`.
    pub higher: Vec<Vec<usize>>,
}

/// `T_P(a) = lim T_{P,a}` together with `lim^n` for `n <= n_max`.
pub fn polyhedral_tensor(
    p: &PointedPoset,
    a: &MorphismCollection,
    n_max: usize,
    field: FieldSpec,
) -> Result<PolyhedralTensor, TensorError> {
    let t = build_t(p, a, None)?;
    from_limits(higher_limits(&t, n_max, field)?)
}

fn from_limits(l: HigherLimits) -> Result<PolyhedralTensor, TensorError> {
    Ok(PolyhedralTensor { dims: l.dims[0].clone(), higher: l.dims })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionInvariance {
    pub collapsed: (String, String),
    pub before: Vec<usize>,
    pub after: Vec<usize>,
    pub equal: bool,
}

/// Compares `T_P(a)` before and after the first collapse step.
pub fn reduction_invariance(
    p: &PointedPoset,
    a: &MorphismCollection,
    field: FieldSpec,
) -> Result<ReductionInvariance, TensorError> {
    let Some(&(x, y)) = collapse_candidates(p).first() else {
        return Err(TensorError::NoCollapseAvailable);
    };
    let (q, _) = collapse(p, x, y);
    let before = polyhedral_tensor(p, a, 0, field)?.dims;
    let after = polyhedral_tensor(&q, a, 0, field)?.dims;
    Ok(ReductionInvariance {
        collapsed: (p.name(x).to_string(), p.name(y).to_string()),
        equal: before == after,
        before,
        after,
    })
}

/// Vertex names of a poset in object order.
pub fn vertex_names(p: &PointedPoset) -> Vec<String> {
    p.vertices().iter().map(|&v| p.name(v).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::verify_lower_factoring;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn fix_b() -> PointedPoset {
        PointedPoset::new(
            &["*", "a", "b", "c", "d"],
            "*",
            &[("*", "a"), ("*", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")],
        )
        .unwrap()
    }

    #[test]
    fn two_points() {
        let p = PointedPoset::new(&["*", "v1", "v2"], "*", &[("*", "v1"), ("*", "v2")]).unwrap();
        let a = MorphismCollection::augmentations(&vertex_names(&p), 1, 2).unwrap();
        let t = build_t(&p, &a, None).unwrap();
        assert_eq!(t.value(1).dims(), vec![1, 1, 1]);
        assert_eq!(t.value(0).dims(), vec![1, 0, 0]);
        assert!(t.check(Q).unwrap().is_none());
    }

    #[test]
    fn parallel_edges() {
        let p = fix_b();
        let c = MorphismCollection::circle(&vertex_names(&p), 2).unwrap();
        let t = build_t(&p, &c, None).unwrap();
        assert_eq!(t.value(3).dims(), vec![1, 2, 1]);
        let r = polyhedral_tensor(&p, &c, 2, Q).unwrap();
        assert_eq!(r.dims, vec![1, 2, 2]);
        assert!(r.higher[1..].iter().flatten().all(|&x| x == 0));
        let a = MorphismCollection::augmentations(&vertex_names(&p), 1, 3).unwrap();
        assert_eq!(polyhedral_tensor(&p, &a, 1, Q).unwrap().dims, vec![1, 2, 4, 6]);
        let t = build_t(&p, &a, None).unwrap();
        let s = build_section_s(&p, &a, &t, None).unwrap();
        assert!(verify_lower_factoring(&t, &s, Q).unwrap().is_ok());
    }

    #[test]
    fn one_object() {
        let p = PointedPoset::new(&["*"], "*", &[]).unwrap();
        let a = MorphismCollection::augmentations::<String>(&[], 1, 2).unwrap();
        let t = build_t(&p, &a, None).unwrap();
        assert_eq!(t.value(0).dims(), vec![1, 0, 0]);
    }

    #[test]
    fn index_mismatch() {
        let p = fix_b();
        let a = MorphismCollection::augmentations(&["a"], 1, 2).unwrap();
        assert!(matches!(build_t(&p, &a, None), Err(TensorError::IndexMismatch { .. })));
    }

    #[test]
    fn reductions() {
        let chain = PointedPoset::new(&["*", "v", "w"], "*", &[("*", "v"), ("v", "w")]).unwrap();
        let a = MorphismCollection::augmentations(&["v"], 1, 3).unwrap();
        let r = reduction_invariance(&chain, &a, Q).unwrap();
        assert!(r.equal);
        let b = MorphismCollection::augmentations(&vertex_names(&fix_b()), 1, 2).unwrap();
        assert!(matches!(reduction_invariance(&fix_b(), &b, Q), Err(TensorError::NoCollapseAvailable)));
    }
}
