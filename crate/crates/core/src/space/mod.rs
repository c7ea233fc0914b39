//! Finite simplicial sets, polyhedral products of pairs and their homology.

mod diagram;
mod homology;
mod pairs;
mod sset;

pub use diagram::{build_space_diagram, uniform_pairs, SpaceDiagram, SupportCheck};
pub use homology::{homology, restriction_map};
pub use pairs::{pair_from_json, simplicial_set_from_json, sphere3, standard_pair, SimplicialPair, PAIR_NAMES};
pub use sset::{CoreRef, SimplicialSet};

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{FieldSpec, LinalgError};
use crate::poset::PointedPoset;
use crate::tensor::{polyhedral_tensor, MorphismCollection, TensorError, VertexMorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("malformed simplicial set: {0}")]
    Malformed(String),
    #[error("simplicial identity fails: {0}")]
    Identity(String),
    #[error("subset is not closed under faces and degeneracies")]
    NotSubcomplex,
    #[error("factors are truncated at different dimensions")]
    MixedTruncation,
    #[error("simplices through dimension {needed} required, have {found}")]
    InsufficientTruncation { needed: usize, found: usize },
    #[error("unknown pair `{0}`")]
    UnknownPair(String),
    #[error("pairs are indexed by {found:?}, poset vertices are {expected:?}")]
    IndexMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("vertex order must be a permutation of the vertices")]
    BadOrder,
    #[error("unknown construction `{0}` (expected `colim` or `hocolim`)")]
    BadVia(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which model of the polyhedral product to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Via {
    #[default]
    Colimit,
    Hocolim,
}

impl FromStr for Via {
    type Err = SpaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "colim" => Ok(Via::Colimit),
            "hocolim" => Ok(Via::Hocolim),
            other => Err(SpaceError::BadVia(other.to_string())),
        }
    }
}

/// `dim H_m(Z_P(X,A))` for `m <= n_max`; pairs must be truncated at
/// `n_max + 1` or above.
pub fn polyprod_homology(
    p: &PointedPoset,
    pairs: &BTreeMap<String, SimplicialPair>,
    field: FieldSpec,
    n_max: usize,
    via: Via,
) -> Result<Vec<usize>, SpaceError> {
    let d = build_space_diagram(p, pairs, None)?;
    let space = match via {
        Via::Colimit => d.colimit(),
        Via::Hocolim => d.hocolim(),
    };
    homology(&space, field, n_max)
}

/// The collection `H^*(X_v) -> H^*(A_v)` of restriction maps, with sections
/// where they exist.
pub fn cohomology_collection(
    pairs: &BTreeMap<String, SimplicialPair>,
    field: FieldSpec,
    n_max: usize,
) -> Result<MorphismCollection, SpaceError> {
    let mut entries = BTreeMap::new();
    for (name, pair) in pairs {
        let map = restriction_map(pair, field, n_max)?;
        let section = crate::linalg::find_section(field, &map)?;
        entries.insert(name.clone(), VertexMorphism { map, section });
    }
    Ok(MorphismCollection::new(n_max, entries)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyComparison {
    pub homology: Vec<usize>,
    /// `T_P` of the cohomology collection, when every restriction is onto.
    pub tensor: Option<Vec<usize>>,
    pub agree: Option<bool>,
}

/// Homology of the polyhedral product next to the polyhedral tensor
/// product of the cohomology restrictions.
pub fn compare_with_tensor(
    p: &PointedPoset,
    pairs: &BTreeMap<String, SimplicialPair>,
    field: FieldSpec,
    n_max: usize,
    via: Via,
) -> Result<HomologyComparison, SpaceError> {
    let homology = polyprod_homology(p, pairs, field, n_max, via)?;
    let a = cohomology_collection(pairs, field, n_max)?;
    let onto = a.names().iter().all(|n| a.get(n).is_some_and(|m| m.section.is_some()));
    let tensor = if onto { Some(polyhedral_tensor(p, &a, 0, field)?.dims) } else { None };
    let agree = tensor.as_ref().map(|t| *t == homology);
    Ok(HomologyComparison { homology, tensor, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::get;

    const F2: FieldSpec = FieldSpec::Prime(2);

    fn pairs(p: &PointedPoset, name: &str, top: usize) -> BTreeMap<String, SimplicialPair> {
        uniform_pairs(p, &standard_pair(name, top).unwrap())
    }

    #[test]
    fn circle_wedges_and_tori() {
        let e = get("fix-e");
        let c = pairs(&e, "circle-point", 3);
        assert_eq!(polyprod_homology(&e, &c, F2, 2, Via::Colimit).unwrap(), vec![1, 2, 0]);
        assert_eq!(polyprod_homology(&e, &c, F2, 2, Via::Hocolim).unwrap(), vec![1, 2, 0]);
        let b = get("fix-b");
        let c = pairs(&b, "circle-point", 3);
        let cmp = compare_with_tensor(&b, &c, F2, 2, Via::Colimit).unwrap();
        assert_eq!(cmp.homology, vec![1, 2, 2]);
        assert_eq!(cmp.agree, Some(true));
    }

    #[test]
    fn sphere_from_disks() {
        let e = get("fix-e");
        let d = pairs(&e, "disk2-circle", 4);
        assert_eq!(polyprod_homology(&e, &d, F2, 3, Via::Colimit).unwrap(), vec![1, 0, 0, 1]);
        assert_eq!(polyprod_homology(&e, &d, F2, 3, Via::Hocolim).unwrap(), vec![1, 0, 0, 1]);
        assert_eq!(compare_with_tensor(&e, &d, F2, 3, Via::Colimit).unwrap().tensor, None);
    }

    #[test]
    fn diagram_values_and_supports() {
        let b = get("fix-b");
        let d = build_space_diagram(&b, &pairs(&b, "circle-point", 3), None).unwrap();
        let check = d.support_check();
        assert!(check.within_vertex_sets && check.maps_preserve_support && check.colimit_injective);
        let base = d.value(b.base());
        assert_eq!(homology(&base, F2, 2).unwrap(), vec![1, 0, 0]);
        let top = d.value(b.index_of("c").unwrap());
        assert_eq!(homology(&top, F2, 2).unwrap(), vec![1, 2, 1]);
        let a = b.index_of("a").unwrap();
        let edge = *d.members(a, 1).iter().find(|&&s| !d.support(1, s).is_empty()).unwrap();
        assert_eq!(d.support(1, edge), vec!["a"]);
    }

    #[test]
    fn bad_inputs() {
        let b = get("fix-b");
        let mut c = pairs(&b, "circle-point", 3);
        c.remove("a");
        assert!(matches!(build_space_diagram(&b, &c, None), Err(SpaceError::IndexMismatch { .. })));
        assert!("nope".parse::<Via>().is_err());
    }
}
