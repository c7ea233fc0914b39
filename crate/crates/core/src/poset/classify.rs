use std::collections::HashMap;

use serde::Serialize;

use super::{is_isomorphic, Direction, PointedPoset};

/// Counterexamples for the predicates that fail, by object name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// `x < y` with `V(x) = V(y)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<(String, String)>,
    /// An object whose down-set is not boolean.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplicial: Option<String>,
    /// `(x, y, z)`: `y, z <= x` without a meet.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polyhedral: Option<(String, String, String)>,
    /// A pair with a common upper bound but no meet.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polyhedral_pairs: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_saturated: Option<(String, String)>,
    /// Objects with equally many vertices and non-isomorphic down-sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetReport {
    pub reduced: bool,
    pub simplicial: bool,
    pub polyhedral: bool,
    /// Verdict of the pairwise meet test; always equal to `polyhedral`.
    pub polyhedral_pairs: bool,
    pub lower_saturated: bool,
    pub regular: bool,
    pub norm: i64,
    pub witnesses: Witnesses,
}

fn names(p: &PointedPoset, a: usize, b: usize) -> (String, String) {
    (p.name(a).to_string(), p.name(b).to_string())
}

fn reduced_witness(p: &PointedPoset) -> Option<(usize, usize)> {
    p.covers()
        .iter()
        .copied()
        .find(|&(x, y)| p.vertex_mask(x) == p.vertex_mask(y))
}

fn is_boolean_below(p: &PointedPoset, x: usize) -> bool {
    let down = p.down_set(x);
    let k = p.vertex_count(x);
    if k >= 32 || down.len() != 1usize << k {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !down.iter().all(|&y| seen.insert(p.vertex_mask(y))) {
        return false;
    }
    down.iter().all(|&a| {
        down.iter().all(|&b| {
            let (ma, mb) = (p.vertex_mask(a), p.vertex_mask(b));
            p.leq(a, b) == (ma & !mb == 0)
        })
    })
}

fn semilattice_witness(p: &PointedPoset) -> Option<(usize, usize, usize)> {
    for x in 0..p.len() {
        let down = p.down_set(x);
        for (i, &y) in down.iter().enumerate() {
            for &z in &down[i + 1..] {
                if p.meet(&[y, z]).is_none() {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

fn pairs_with_upper_bound(p: &PointedPoset) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..p.len()).flat_map(move |x| {
        (x + 1..p.len())
            .filter(move |&y| p.have_upper_bound(&[x, y]))
            .map(move |y| (x, y))
    })
}

fn pair_meet_witness(p: &PointedPoset) -> Option<(usize, usize)> {
    pairs_with_upper_bound(p).find(|&(x, y)| p.meet(&[x, y]).is_none())
}

fn lower_saturation_witness(p: &PointedPoset) -> Option<(usize, usize)> {
    pairs_with_upper_bound(p).find(|&(x, y)| {
        let target = p.vertex_mask(x) & p.vertex_mask(y);
        !p.max_lower(&[x, y]).iter().any(|&w| p.vertex_mask(w) == target)
    })
}

fn regularity_witness(p: &PointedPoset) -> Option<(usize, usize)> {
    let mut rep: HashMap<usize, (usize, PointedPoset)> = HashMap::new();
    for x in 0..p.len() {
        let k = p.vertex_count(x);
        let (down, _) = p.sub_poset(x, Direction::Down);
        match rep.get(&k) {
            Some((y, dy)) => {
                if !is_isomorphic(dy, &down) {
                    return Some((*y, x));
                }
            }
            None => {
                rep.insert(k, (x, down));
            }
        }
    }
    None
}

pub fn classify(p: &PointedPoset) -> PosetReport {
    let mut w = Witnesses::default();
    let red = reduced_witness(p);
    w.reduced = red.map(|(a, b)| names(p, a, b));
    let simp = (0..p.len()).find(|&x| !is_boolean_below(p, x));
    w.simplicial = simp.map(|x| p.name(x).to_string());
    let poly = semilattice_witness(p);
    w.polyhedral = poly.map(|(x, y, z)| (p.name(x).to_string(), p.name(y).to_string(), p.name(z).to_string()));
    let pairs = pair_meet_witness(p);
    w.polyhedral_pairs = pairs.map(|(a, b)| names(p, a, b));
    let ls = lower_saturation_witness(p);
    w.lower_saturated = ls.map(|(a, b)| names(p, a, b));
    let reg = regularity_witness(p);
    w.regular = reg.map(|(a, b)| names(p, a, b));
    PosetReport {
        reduced: red.is_none(),
        simplicial: simp.is_none(),
        polyhedral: poly.is_none(),
        polyhedral_pairs: pairs.is_none(),
        lower_saturated: ls.is_none(),
        regular: reg.is_none(),
        norm: p.norm(),
        witnesses: w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_not_reduced() {
        let p = PointedPoset::new(&["*", "v", "w"], "*", &[("*", "v"), ("v", "w")]).unwrap();
        let r = classify(&p);
        assert!(!r.reduced);
        assert_eq!(r.witnesses.reduced, Some(("v".into(), "w".into())));
        assert!(!r.simplicial);
        assert!(r.polyhedral && r.lower_saturated);
    }

    #[test]
    fn boolean_lattice_is_simplicial() {
        let p = PointedPoset::new(
            &["*", "a", "b", "ab"],
            "*",
            &[("*", "a"), ("*", "b"), ("a", "ab"), ("b", "ab")],
        )
        .unwrap();
        let r = classify(&p);
        assert!(r.simplicial && r.polyhedral && r.reduced && r.regular && r.lower_saturated);
        assert_eq!(r.norm, 1);
    }
}
