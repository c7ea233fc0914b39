use super::PointedPoset;

fn signature(p: &PointedPoset, x: usize) -> (usize, usize, usize) {
    (p.down_set(x).len(), p.up_set(x).len(), p.vertex_count(x))
}

/// A base-point preserving order isomorphism `p -> q` as an index map.
pub fn find_isomorphism(p: &PointedPoset, q: &PointedPoset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.covers().len() != q.covers().len() {
        return None;
    }
    let sp: Vec<_> = (0..p.len()).map(|x| signature(p, x)).collect();
    let sq: Vec<_> = (0..q.len()).map(|x| signature(q, x)).collect();
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let order: Vec<usize> = p.topological_order().to_vec();
    let mut map = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    map[p.base()] = q.base();
    used[q.base()] = true;
    if sp[p.base()] != sq[q.base()] {
        return None;
    }
    fn go(
        k: usize,
        order: &[usize],
        p: &PointedPoset,
        q: &PointedPoset,
        sp: &[(usize, usize, usize)],
        sq: &[(usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&x) = order.get(k) else { return true };
        if map[x] != usize::MAX {
            return go(k + 1, order, p, q, sp, sq, map, used);
        }
        for y in 0..q.len() {
            if used[y] || sp[x] != sq[y] {
                continue;
            }
            let consistent = order[..k].iter().all(|&w| {
                let fw = map[w];
                p.leq(w, x) == q.leq(fw, y) && p.leq(x, w) == q.leq(y, fw)
            }) && (p.leq(p.base(), x) == q.leq(q.base(), y));
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(k + 1, order, p, q, sp, sq, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    go(0, &order, p, q, &sp, &sq, &mut map, &mut used).then_some(map)
}

pub fn is_isomorphic(p: &PointedPoset, q: &PointedPoset) -> bool {
    find_isomorphism(p, q).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_relabelings() {
        let p = PointedPoset::new(&["*", "a", "b", "c"], "*", &[("*", "a"), ("*", "b"), ("a", "c"), ("b", "c")]).unwrap();
        let q = PointedPoset::new(&["t", "o", "x", "y"], "o", &[("o", "y"), ("o", "x"), ("x", "t"), ("y", "t")]).unwrap();
        let m = find_isomorphism(&p, &q).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(p.leq(x, y), q.leq(m[x], m[y]));
            }
        }
        let chain = PointedPoset::new(&["*", "a", "b", "c"], "*", &[("*", "a"), ("a", "b"), ("b", "c")]).unwrap();
        assert!(!is_isomorphic(&p, &chain));
    }
}
