use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::SpaceError;

/// A simplicial set materialized in dimensions `0..=top`, degenerate
/// simplices included, with face and degeneracy index tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    count: Vec<usize>,
    /// `faces[m][σ (m+1) + i] = d_i σ` for `m >= 1`.
    faces: Vec<Vec<usize>>,
    /// `degens[m][σ (m+1) + j] = s_j σ` for `m < top`.
    degens: Vec<Vec<usize>>,
    nondegenerate: Vec<Vec<usize>>,
}

/// A face of a core simplex: core `(dim, index)` under a monotone
/// surjection, listed by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoreRef {
    pub dim: usize,
    pub core: usize,
    pub surjection: Vec<usize>,
}

impl CoreRef {
    pub fn nondegenerate(dim: usize, core: usize) -> Self {
        CoreRef { dim, core, surjection: (0..=dim).collect() }
    }

    /// `s_{j_1} s_{j_2} ... s_{j_r}` applied to a core of dimension `dim`.
    pub fn degenerate(dim: usize, core: usize, word: &[usize]) -> Result<Self, SpaceError> {
        let mut eta: Vec<usize> = (0..=dim).collect();
        for &j in word.iter().rev() {
            if j >= eta.len() {
                return Err(SpaceError::Malformed(format!("degeneracy s_{j} on a {}-simplex", eta.len() - 1)));
            }
            eta.insert(j + 1, eta[j]);
        }
        Ok(CoreRef { dim, core, surjection: eta })
    }

    fn target_dim(&self) -> usize {
        self.surjection.len() - 1
    }
}

fn valid_surjection(eta: &[usize], onto: usize) -> bool {
    eta.first() == Some(&0)
        && eta.last() == Some(&onto)
        && eta.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

/// Monotone surjections `[m] -> [k]`.
fn surjections(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize];
    fn go(m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().expect("nonempty");
        if cur.len() == m + 1 {
            if last == k {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = m + 1 - cur.len();
        if last + remaining > k {
            cur.push(last);
            go(m, k, cur, out);
            cur.pop();
        }
        if last < k {
            cur.push(last + 1);
            go(m, k, cur, out);
            cur.pop();
        }
    }
    if k <= m {
        go(m, k, &mut cur, &mut out);
    }
    out
}

impl SimplicialSet {
    /// Builds a simplicial set from the faces of its nondegenerate simplices.
    /// `cores[k][t]` lists the `k + 1` faces of core `t` of dimension `k`
    /// (empty for vertices). Simplices are generated through dimension `top`
    /// and all simplicial identities are verified.
    pub fn from_cores(cores: &[Vec<Vec<CoreRef>>], top: usize) -> Result<Self, SpaceError> {
        for (k, level) in cores.iter().enumerate() {
            for faces in level {
                let expected = if k == 0 { 0 } else { k + 1 };
                if faces.len() != expected {
                    return Err(SpaceError::Malformed(format!("a {k}-simplex needs {expected} faces")));
                }
                for f in faces {
                    if f.dim >= cores.len()
                        || f.core >= cores[f.dim].len()
                        || f.target_dim() + 1 != k
                        || !valid_surjection(&f.surjection, f.dim)
                    {
                        return Err(SpaceError::Malformed(format!("bad face of a {k}-simplex")));
                    }
                }
            }
        }
        type Key = (usize, usize, Vec<usize>);
        let mut keys: Vec<Vec<Key>> = Vec::new();
        let mut index: Vec<HashMap<Key, usize>> = Vec::new();
        for m in 0..=top {
            let mut list = Vec::new();
            for k in 0..=m.min(cores.len().saturating_sub(1)) {
                let surj = surjections(m, k);
                for t in 0..cores[k].len() {
                    for eta in &surj {
                        list.push((k, t, eta.clone()));
                    }
                }
            }
            index.push(list.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect());
            keys.push(list);
        }
        let mut faces = vec![Vec::new(); top + 1];
        for m in 1..=top {
            let mut table = Vec::with_capacity(keys[m].len() * (m + 1));
            for (k, t, eta) in &keys[m] {
                for i in 0..=m {
                    let mut e: Vec<usize> = eta.clone();
                    let removed = e.remove(i);
                    let still_onto = e.contains(&removed);
                    let key = if still_onto {
                        (*k, *t, e)
                    } else {
                        let reduced: Vec<usize> = e.iter().map(|&v| if v > removed { v - 1 } else { v }).collect();
                        let f = &cores[*k][*t][removed];
                        (f.dim, f.core, reduced.iter().map(|&v| f.surjection[v]).collect())
                    };
                    table.push(index[m - 1][&key]);
                }
            }
            faces[m] = table;
        }
        let mut degens = vec![Vec::new(); top + 1];
        for m in 0..top {
            let mut table = Vec::with_capacity(keys[m].len() * (m + 1));
            for (k, t, eta) in &keys[m] {
                for j in 0..=m {
                    let mut e = eta.clone();
                    e.insert(j + 1, eta[j]);
                    table.push(index[m + 1][&(*k, *t, e)]);
                }
            }
            degens[m] = table;
        }
        let count = keys.iter().map(|l| l.len()).collect();
        let s = SimplicialSet::from_tables(count, faces, degens);
        s.check_identities()?;
        Ok(s)
    }

    /// Wraps raw tables; see [`SimplicialSet::check_identities`].
    pub fn from_tables(count: Vec<usize>, faces: Vec<Vec<usize>>, degens: Vec<Vec<usize>>) -> Self {
        let mut s = SimplicialSet { count, faces, degens, nondegenerate: Vec::new() };
        s.nondegenerate = (0..s.count.len())
            .map(|m| (0..s.count[m]).filter(|&x| !s.is_degenerate(m, x)).collect())
            .collect();
        s
    }

    pub fn top(&self) -> usize {
        self.count.len() - 1
    }

    pub fn count(&self, m: usize) -> usize {
        self.count[m]
    }

    pub fn counts(&self) -> &[usize] {
        &self.count
    }

    pub fn face(&self, m: usize, x: usize, i: usize) -> usize {
        self.faces[m][x * (m + 1) + i]
    }

    pub fn degeneracy(&self, m: usize, x: usize, j: usize) -> usize {
        self.degens[m][x * (m + 1) + j]
    }

    /// `x` is degenerate iff `s_j d_j x = x` for some `j < m`.
    pub fn is_degenerate(&self, m: usize, x: usize) -> bool {
        m > 0 && (0..m).any(|j| self.degeneracy(m - 1, self.face(m, x, j), j) == x)
    }

    pub fn nondegenerate(&self, m: usize) -> &[usize] {
        &self.nondegenerate[m]
    }

    /// Nondegenerate core and degeneracy word `[j_1, ..., j_r]` with
    /// `x = s_{j_1} ... s_{j_r} core`, largest index peeled first.
    pub fn normal_form(&self, m: usize, x: usize) -> (usize, usize, Vec<usize>) {
        let mut word = Vec::new();
        let (mut dim, mut cur) = (m, x);
        'outer: while dim > 0 {
            for j in (0..dim).rev() {
                let f = self.face(dim, cur, j);
                if self.degeneracy(dim - 1, f, j) == cur {
                    word.push(j);
                    cur = f;
                    dim -= 1;
                    continue 'outer;
                }
            }
            break;
        }
        (dim, cur, word)
    }

    /// Applies `s_{j_1} ... s_{j_r}` to `x`.
    pub fn apply_word(&self, m: usize, x: usize, word: &[usize]) -> usize {
        let (mut dim, mut cur) = (m, x);
        for &j in word.iter().rev() {
            cur = self.degeneracy(dim, cur, j);
            dim += 1;
        }
        cur
    }

    /// Checks every simplicial identity on the stored data.
    pub fn check_identities(&self) -> Result<(), SpaceError> {
        let top = self.top();
        let fail = |what: &str, m: usize, x: usize| Err(SpaceError::Identity(format!("{what} at {m}-simplex {x}")));
        for m in 0..=top {
            for x in 0..self.count[m] {
                if m >= 2 {
                    for j in 0..=m {
                        for i in 0..j {
                            if self.face(m - 1, self.face(m, x, j), i) != self.face(m - 1, self.face(m, x, i), j - 1) {
                                return fail("d_i d_j = d_{j-1} d_i", m, x);
                            }
                        }
                    }
                }
                if m < top {
                    for j in 0..=m {
                        let sx = self.degeneracy(m, x, j);
                        for i in 0..=m + 1 {
                            let lhs = self.face(m + 1, sx, i);
                            let ok = if i == j || i == j + 1 {
                                lhs == x
                            } else if i < j {
                                lhs == self.degeneracy(m - 1, self.face(m, x, i), j - 1)
                            } else {
                                lhs == self.degeneracy(m - 1, self.face(m, x, i - 1), j)
                            };
                            if !ok {
                                return fail("d_i s_j", m, x);
                            }
                        }
                    }
                }
                if m + 1 < top {
                    for j in 0..=m {
                        for i in 0..=j {
                            let a = self.degeneracy(m + 1, self.degeneracy(m, x, j), i);
                            let b = self.degeneracy(m + 1, self.degeneracy(m, x, i), j + 1);
                            if a != b {
                                return fail("s_i s_j = s_{j+1} s_i", m, x);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A point truncated at `top`.
    pub fn point(top: usize) -> Self {
        SimplicialSet::from_cores(&[vec![vec![]]], top).expect("point is valid")
    }

    /// Level-wise product of factors; index of `(x_1, ..., x_r)` is mixed
    /// radix with the first factor most significant.
    pub fn product(factors: &[&SimplicialSet]) -> Result<Self, SpaceError> {
        let Some(first) = factors.first() else {
            return Err(SpaceError::Malformed("empty product".into()));
        };
        let top = first.top();
        if factors.iter().any(|f| f.top() != top) {
            return Err(SpaceError::MixedTruncation);
        }
        let count: Vec<usize> = (0..=top).map(|m| factors.iter().map(|f| f.count[m]).product()).collect();
        let radix = |m: usize| -> Vec<usize> { factors.iter().map(|f| f.count[m]).collect() };
        let decode = |mut x: usize, r: &[usize]| -> Vec<usize> {
            let mut out = vec![0; r.len()];
            for (slot, &b) in out.iter_mut().zip(r).rev() {
                *slot = x % b;
                x /= b;
            }
            out
        };
        let encode = |xs: &[usize], r: &[usize]| -> usize { xs.iter().zip(r).fold(0, |acc, (&x, &b)| acc * b + x) };
        let mut faces = vec![Vec::new(); top + 1];
        for m in 1..=top {
            let (rm, rl) = (radix(m), radix(m - 1));
            let mut table = Vec::with_capacity(count[m] * (m + 1));
            for x in 0..count[m] {
                let parts = decode(x, &rm);
                for i in 0..=m {
                    let img: Vec<usize> = parts.iter().zip(factors).map(|(&p, f)| f.face(m, p, i)).collect();
                    table.push(encode(&img, &rl));
                }
            }
            faces[m] = table;
        }
        let mut degens = vec![Vec::new(); top + 1];
        for m in 0..top {
            let (rm, ru) = (radix(m), radix(m + 1));
            let mut table = Vec::with_capacity(count[m] * (m + 1));
            for x in 0..count[m] {
                let parts = decode(x, &rm);
                for j in 0..=m {
                    let img: Vec<usize> = parts.iter().zip(factors).map(|(&p, f)| f.degeneracy(m, p, j)).collect();
                    table.push(encode(&img, &ru));
                }
            }
            degens[m] = table;
        }
        Ok(SimplicialSet::from_tables(count, faces, degens))
    }

    /// Component indices of a product simplex, given the factor counts.
    pub fn decode_product(x: usize, radix: &[usize]) -> Vec<usize> {
        let mut x = x;
        let mut out = vec![0; radix.len()];
        for (slot, &b) in out.iter_mut().zip(radix).rev() {
            *slot = x % b;
            x /= b;
        }
        out
    }

    /// The smallest sub-simplicial set containing `generators` (dimension,
    /// index), as membership sets per dimension.
    pub fn closure(&self, generators: &[(usize, usize)]) -> Vec<FixedBitSet> {
        let top = self.top();
        let mut member: Vec<FixedBitSet> = self.count.iter().map(|&n| FixedBitSet::with_capacity(n)).collect();
        let mut stack: Vec<(usize, usize)> = generators.to_vec();
        while let Some((m, x)) = stack.pop() {
            if member[m].contains(x) {
                continue;
            }
            member[m].insert(x);
            if m > 0 {
                for i in 0..=m {
                    stack.push((m - 1, self.face(m, x, i)));
                }
            }
            if m < top {
                for j in 0..=m {
                    stack.push((m + 1, self.degeneracy(m, x, j)));
                }
            }
        }
        member
    }

    /// Whether `member` is closed under faces and degeneracies.
    pub fn is_subcomplex(&self, member: &[FixedBitSet]) -> bool {
        let top = self.top();
        (0..=top).all(|m| {
            member[m].ones().all(|x| {
                (m == 0 || (0..=m).all(|i| member[m - 1].contains(self.face(m, x, i))))
                    && (m == top || (0..=m).all(|j| member[m + 1].contains(self.degeneracy(m, x, j))))
            })
        })
    }

    /// The sub-simplicial set on `member`, with the new-to-old index maps.
    pub fn restrict(&self, member: &[FixedBitSet]) -> (SimplicialSet, Vec<Vec<usize>>) {
        let top = self.top();
        let old: Vec<Vec<usize>> = member.iter().map(|b| b.ones().collect()).collect();
        let new: Vec<HashMap<usize, usize>> =
            old.iter().map(|l| l.iter().enumerate().map(|(i, &o)| (o, i)).collect()).collect();
        let mut faces = vec![Vec::new(); top + 1];
        for m in 1..=top {
            faces[m] = old[m]
                .iter()
                .flat_map(|&x| (0..=m).map(move |i| (x, i)))
                .map(|(x, i)| new[m - 1][&self.face(m, x, i)])
                .collect();
        }
        let mut degens = vec![Vec::new(); top + 1];
        for m in 0..top {
            degens[m] = old[m]
                .iter()
                .flat_map(|&x| (0..=m).map(move |j| (x, j)))
                .map(|(x, j)| new[m + 1][&self.degeneracy(m, x, j)])
                .collect();
        }
        let count = old.iter().map(|l| l.len()).collect();
        (SimplicialSet::from_tables(count, faces, degens), old)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn circle(top: usize) -> SimplicialSet {
        SimplicialSet::from_cores(
            &[vec![vec![]], vec![vec![CoreRef::nondegenerate(0, 0), CoreRef::nondegenerate(0, 0)]]],
            top,
        )
        .unwrap()
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 2).len(), 6);
        assert_eq!(surjections(2, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn circle_tables() {
        let s = circle(3);
        assert_eq!(s.counts(), &[1, 2, 3, 4]);
        assert_eq!(s.nondegenerate(1).len(), 1);
        assert!(s.nondegenerate(2).is_empty());
        for m in 0..=3 {
            for x in 0..s.count(m) {
                let (d, core, word) = s.normal_form(m, x);
                assert_eq!(s.apply_word(d, core, &word), x);
                assert!(!s.is_degenerate(d, core));
            }
        }
    }

    #[test]
    fn product_and_closure() {
        let s = circle(3);
        let t = SimplicialSet::product(&[&s, &s]).unwrap();
        assert!(t.check_identities().is_ok());
        assert_eq!(t.nondegenerate(2).len(), 2);
        let base = t.closure(&[(0, 0)]);
        assert!(t.is_subcomplex(&base));
        let (pt, _) = t.restrict(&base);
        assert_eq!(pt.counts(), &[1, 1, 1, 1]);
    }

    #[test]
    fn inconsistent_faces_rejected() {
        // a 2-simplex whose edges do not match up at the vertices
        let v = |i| CoreRef::nondegenerate(0, i);
        let e = |i| CoreRef::nondegenerate(1, i);
        let cores = vec![
            vec![vec![], vec![]],
            vec![vec![v(1), v(0)], vec![v(0), v(0)]],
            vec![vec![e(0), e(1), e(1)]],
        ];
        assert!(matches!(SimplicialSet::from_cores(&cores, 3), Err(SpaceError::Identity(_))));
    }
}
