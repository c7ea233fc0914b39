use super::PointedPoset;

/// A reduced poset with the composite projection of objects.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub poset: PointedPoset,
    /// Old object index to new object index.
    pub projection: Vec<usize>,
    /// Collapsed pairs `(x, y)` by name, in the order performed.
    pub steps: Vec<(String, String)>,
}

/// Covers `x < y` with `x != *` and `V(x) = V(y)`, ordered by names.
pub fn collapse_candidates(p: &PointedPoset) -> Vec<(usize, usize)> {
    let mut c: Vec<(usize, usize)> = p
        .covers()
        .iter()
        .copied()
        .filter(|&(x, y)| x != p.base() && p.vertex_mask(x) == p.vertex_mask(y))
        .collect();
    c.sort_by(|a, b| (p.name(a.0), p.name(a.1)).cmp(&(p.name(b.0), p.name(b.1))));
    c
}

/// Removes `y` and places everything below `y` below `x`; returns the new
/// poset and the object projection (`y` goes to `x`).
pub fn collapse(p: &PointedPoset, x: usize, y: usize) -> (PointedPoset, Vec<usize>) {
    let n = p.len();
    let new_index = |o: usize| if o > y { o - 1 } else { o };
    let projection: Vec<usize> = (0..n).map(|o| if o == y { new_index(x) } else { new_index(o) }).collect();
    let mut pairs = Vec::new();
    for u in 0..n {
        if u == y {
            continue;
        }
        for v in 0..n {
            if v == y || u == v {
                continue;
            }
            if p.lt(u, v) || (p.lt(u, y) && v == x) {
                pairs.push((new_index(u), new_index(v)));
            }
        }
    }
    let names: Vec<String> = (0..n).filter(|&o| o != y).map(|o| p.name(o).to_string()).collect();
    let q = PointedPoset::from_indices(names, new_index(p.base()), &pairs).expect("collapse stays a pointed poset");
    (q, projection)
}

/// Collapses until reduced, always taking the candidate chosen by `pick`.
pub fn reduce_by(p: &PointedPoset, mut pick: impl FnMut(&[(usize, usize)]) -> usize) -> Reduction {
    let mut cur = p.clone();
    let mut projection: Vec<usize> = (0..p.len()).collect();
    let mut steps = Vec::new();
    loop {
        let cands = collapse_candidates(&cur);
        if cands.is_empty() {
            return Reduction { poset: cur, projection, steps };
        }
        let (x, y) = cands[pick(&cands)];
        steps.push((cur.name(x).to_string(), cur.name(y).to_string()));
        let (next, proj) = collapse(&cur, x, y);
        for o in projection.iter_mut() {
            *o = proj[*o];
        }
        cur = next;
    }
}

/// Collapses candidates in lexicographic name order until reduced.
pub fn reduce(p: &PointedPoset) -> Reduction {
    reduce_by(p, |_| 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::classify;

    #[test]
    fn chain_collapses() {
        let p = PointedPoset::new(&["*", "v", "w"], "*", &[("*", "v"), ("v", "w")]).unwrap();
        let r = reduce(&p);
        assert_eq!(r.poset, PointedPoset::new(&["*", "v"], "*", &[("*", "v")]).unwrap());
        assert_eq!(r.projection, vec![0, 1, 1]);
    }

    #[test]
    fn reduced_is_fixed() {
        let p = PointedPoset::new(&["*", "a", "b"], "*", &[("*", "a"), ("*", "b")]).unwrap();
        let r = reduce(&p);
        assert_eq!(r.poset, p);
        assert_eq!(r.projection, vec![0, 1, 2]);
        assert!(classify(&r.poset).reduced);
    }
}
