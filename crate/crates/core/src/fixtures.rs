//! The bundled fixture posets.

use crate::poset::PointedPoset;

const FILES: &[(&str, &str)] = &[
    ("fix-a", include_str!("../../../fixtures/fix-a.json")),
    ("fix-b", include_str!("../../../fixtures/fix-b.json")),
    ("fix-c", include_str!("../../../fixtures/fix-c.json")),
    ("fix-d", include_str!("../../../fixtures/fix-d.json")),
    ("fix-e", include_str!("../../../fixtures/fix-e.json")),
    ("cube1", include_str!("../../../fixtures/cube1.json")),
    ("cube2", include_str!("../../../fixtures/cube2.json")),
    ("cube3", include_str!("../../../fixtures/cube3.json")),
];

/// Fixture names in a fixed order.
pub fn names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

/// A bundled fixture by name.
pub fn fixture(name: &str) -> Option<PointedPoset> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| PointedPoset::from_json(text).expect("bundled fixture is valid"))
}

/// Panicking shorthand for tests and the suite.
pub fn get(name: &str) -> PointedPoset {
    fixture(name).unwrap_or_else(|| panic!("no fixture named {name}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::classify;
    use crate::transform::f_vector;

    #[test]
    fn fixtures_classify_as_expected() {
        let a = classify(&get("fix-a"));
        assert!(!a.lower_saturated);
        assert_eq!(a.witnesses.lower_saturated, Some(("3".into(), "4".into())));
        let b = classify(&get("fix-b"));
        assert!(b.simplicial && b.polyhedral && b.lower_saturated);
        let c = classify(&get("fix-c"));
        assert!(c.polyhedral && !c.simplicial && c.regular);
        assert_eq!(c.norm, 3);
        assert!(classify(&get("fix-d")).simplicial);
        for n in 1..=3 {
            let p = get(&format!("cube{n}"));
            let r = classify(&p);
            assert!(r.polyhedral && r.regular && r.reduced);
            assert_eq!(p.vertices().len(), 1 << n);
        }
        assert_eq!(f_vector(&get("fix-d")).f, vec![3, 3, 1]);
        assert_eq!(f_vector(&get("fix-b")).f, vec![2, 2]);
        assert_eq!(f_vector(&get("fix-c")).f, vec![4, 4, 0, 1]);
    }
}
