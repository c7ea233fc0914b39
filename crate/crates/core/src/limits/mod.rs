//! Diagrams over finite posets and their higher limits, computed from the
//! normalized cochain complex on strict chains.

mod complex;
mod diagram;
mod factoring;
mod io;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::poset::PosetError;

pub use complex::{
    cochain_complex, higher_limits, higher_limits_with_basis, lim0_tuples_compatible, limits_of, split_tuple,
    unnormalized_cochain_complex, ChainKind, CochainComplex, HigherLimits,
};
pub use diagram::{indicator_diagram, DiagramSection, FunctorialityViolation, PosetDiagram};
pub use factoring::{verify_lower_factoring, LowerFactoring};
pub use io::diagram_from_json;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("`{0}` < `{1}` is not a cover")]
    NotACover(String, String),
    #[error("diagram needs {expected} values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("map for `{0}` < `{1}` has the wrong shape")]
    MapShape(String, String),
    #[error("section has no map for `{0}` < `{1}`")]
    MissingSectionMap(String, String),
    #[error("malformed diagram file: {0}")]
    Format(String),
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::linalg::{FieldSpec, GradedMap, GradedSpace, Matrix};
    use crate::poset::PointedPoset;

    const Q: FieldSpec = FieldSpec::Rationals;

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

    fn example_diagram() -> PosetDiagram {
        let p = fix_a();
        let k = GradedSpace::from_dims(&[1]).unwrap();
        let values = (0..7).map(|x| if x >= 3 { k.clone() } else { GradedSpace::zero(0) }).collect();
        let maps = p
            .covers()
            .iter()
            .filter(|c| c.0 >= 3)
            .map(|&c| (c, GradedMap::identity(&k)))
            .collect();
        PosetDiagram::new(p, values, maps).unwrap()
    }

    #[test]
    fn example_complex() {
        let f = example_diagram();
        assert!(f.check(Q).unwrap().is_none());
        let c = cochain_complex(&f, 1);
        assert_eq!(c.dims[0][0], 4);
        assert_eq!(c.dims[1][0], 4);
        assert_eq!(c.dims[2][0], 0);
        assert_eq!(c.rank(Q, 0, 0).unwrap(), 3);
        assert!(c.squares_to_zero(Q).unwrap());
        let lim = higher_limits_with_basis(&f, 2, Q).unwrap();
        assert_eq!(lim.dims[0], vec![1]);
        assert_eq!(lim.dims[1], vec![1]);
        assert!(lim0_tuples_compatible(&f, &lim, Q).unwrap());
    }

    #[test]
    fn one_object() {
        let p = PointedPoset::new(&["*"], "*", &[]).unwrap();
        let f = PosetDiagram::constant(p, &GradedSpace::from_dims(&[1]).unwrap());
        let c = cochain_complex(&f, 2);
        assert_eq!(c.dims.iter().map(|d| d[0]).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
        assert_eq!(higher_limits(&f, 2, Q).unwrap().dims, vec![vec![1], vec![0], vec![0]]);
    }

    #[test]
    fn mismatched_square_detected() {
        let p = PointedPoset::new(
            &["*", "a", "b", "t"],
            "*",
            &[("*", "a"), ("*", "b"), ("a", "t"), ("b", "t")],
        )
        .unwrap();
        let k = GradedSpace::from_dims(&[1]).unwrap();
        let mut maps = BTreeMap::new();
        for &c in p.covers() {
            maps.insert(c, GradedMap::identity(&k));
        }
        let two = GradedMap::new(k.clone(), k.clone(), vec![Matrix::from_i64(1, 1, &[2])]).unwrap();
        maps.insert((2, 3), two);
        let f = PosetDiagram::new(p, vec![k; 4], maps).unwrap();
        let v = f.check(Q).unwrap().unwrap();
        assert_eq!((v.lower.as_str(), v.upper.as_str()), ("*", "t"));
    }

    #[test]
    fn indicator_and_restriction() {
        let p = fix_a();
        let k = GradedSpace::from_dims(&[1]).unwrap();
        let a3 = indicator_diagram(&p, 3, &k);
        let support: Vec<usize> = (0..7).filter(|&x| a3.value(x).total_dim() > 0).collect();
        assert_eq!(support, vec![3, 5, 6]);
        assert!(a3.check(Q).unwrap().is_none());
        let lim = higher_limits(&a3, 3, Q).unwrap();
        assert!(lim.acyclic());
        let r = higher_limits(&a3.restrict_up(3), 3, Q).unwrap();
        assert_eq!(lim.dims, r.dims);
    }

    #[test]
    fn normalized_matches_weak_chains() {
        let f = example_diagram();
        let a = limits_of(&cochain_complex(&f, 3), Q).unwrap();
        let b = limits_of(&unnormalized_cochain_complex(&f, 3), Q).unwrap();
        assert_eq!(a.dims, b.dims);
    }

    #[test]
    fn constant_diagram_factors() {
        let p = fix_a();
        let k = GradedSpace::from_dims(&[1]).unwrap();
        let f = PosetDiagram::constant(p.clone(), &k);
        let s = DiagramSection::new(&f, p.covers().iter().map(|&c| (c, GradedMap::identity(&k))).collect()).unwrap();
        assert!(verify_lower_factoring(&f, &s, Q).unwrap().is_ok());
    }

    #[test]
    fn reads_diagram_files() {
        let text = r#"{
            "poset": {"objects": ["*", "a"], "base": "*", "covers": [["*", "a"]]},
            "values": {"*": [1, 1], "a": [1, 2]},
            "maps": {"*<a": {"0": [[1]], "1": [["1/2", 3]]}}
        }"#;
        let f = diagram_from_json(text, None).unwrap();
        assert_eq!(f.max_degree(), 1);
        assert_eq!(f.cover_map(0, 1).block(1).cols(), 2);
        assert!(diagram_from_json(r#"{"poset": {"objects": ["*"], "base": "*", "covers": []}, "maps": {"*": {}}}"#, None).is_err());
    }
}
