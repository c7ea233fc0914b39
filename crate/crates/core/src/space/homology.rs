use std::collections::HashMap;

use num_traits::Zero;

use crate::linalg::{kernel, q, rank, solve, FieldSpec, GradedMap, GradedSpace, Matrix, Rational, SparseMatrix};

use super::pairs::SimplicialPair;
use super::sset::SimplicialSet;
use super::SpaceError;

/// Normalized boundary `∂_m: N_m -> N_{m-1}`, one row per nondegenerate
/// `m`-simplex.
fn boundary(s: &SimplicialSet, m: usize) -> SparseMatrix {
    let below: HashMap<usize, usize> = s.nondegenerate(m - 1).iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut out = SparseMatrix::new(below.len());
    for &x in s.nondegenerate(m) {
        let row = (0..=m)
            .filter_map(|i| {
                let f = s.face(m, x, i);
                below.get(&f).map(|&c| (c, q(if i % 2 == 0 { 1 } else { -1 })))
            })
            .collect();
        out.push_row(row);
    }
    out
}

fn check_top(s: &SimplicialSet, n_max: usize) -> Result<(), SpaceError> {
    if s.top() < n_max + 1 {
        return Err(SpaceError::InsufficientTruncation { needed: n_max + 1, found: s.top() });
    }
    Ok(())
}

/// `dim H_m(X; k)` for `m <= n_max`, from normalized chains.
pub fn homology(s: &SimplicialSet, field: FieldSpec, n_max: usize) -> Result<Vec<usize>, SpaceError> {
    check_top(s, n_max)?;
    let ranks: Vec<usize> = (0..=n_max + 1)
        .map(|m| if m == 0 { Ok(0) } else { boundary(s, m).rank(field) })
        .collect::<Result<_, _>>()?;
    Ok((0..=n_max).map(|m| s.nondegenerate(m).len() - ranks[m] - ranks[m + 1]).collect())
}

/// Cochain data of one space: `δ^m` as dense matrices and a basis of
/// `H^m` given by cocycle representatives.
struct Cohomology {
    /// `coboundary[m]`: `C^m -> C^{m+1}`.
    coboundary: Vec<Matrix>,
    basis: Vec<Vec<Vec<Rational>>>,
}

fn column_matrix(rows: usize, cols: &[Vec<Rational>]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m
}

fn columns(m: &Matrix) -> Vec<Vec<Rational>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect()).collect()
}

fn cohomology(s: &SimplicialSet, field: FieldSpec, n_max: usize) -> Result<Cohomology, SpaceError> {
    check_top(s, n_max)?;
    let coboundary: Vec<Matrix> = (0..=n_max).map(|m| boundary(s, m + 1).to_dense()).collect();
    let mut basis = Vec::new();
    for m in 0..=n_max {
        let n = s.nondegenerate(m).len();
        let mut span: Vec<Vec<Rational>> = if m == 0 { Vec::new() } else { columns(&coboundary[m - 1]) };
        let mut r = rank(field, &column_matrix(n, &span))?;
        let mut reps = Vec::new();
        for z in kernel(field, &coboundary[m])? {
            span.push(z.clone());
            let r2 = rank(field, &column_matrix(n, &span))?;
            if r2 > r {
                r = r2;
                reps.push(z);
            } else {
                span.pop();
            }
        }
        basis.push(reps);
    }
    Ok(Cohomology { coboundary, basis })
}

/// The restriction `H^*(X) -> H^*(A)` for degrees `<= n_max`, in cocycle
/// bases.
pub fn restriction_map(pair: &SimplicialPair, field: FieldSpec, n_max: usize) -> Result<GradedMap, SpaceError> {
    let x = &pair.total;
    let (a, incl) = pair.sub_set();
    let hx = cohomology(x, field, n_max)?;
    let ha = cohomology(&a, field, n_max)?;
    let mut blocks = Vec::new();
    for m in 0..=n_max {
        let x_pos: HashMap<usize, usize> = x.nondegenerate(m).iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let a_cols: Vec<usize> = a.nondegenerate(m).iter().map(|&s| x_pos[&incl[m][s]]).collect();
        let na = a_cols.len();
        let mut gens = ha.basis[m].clone();
        let h_dim = gens.len();
        if m > 0 {
            gens.extend(columns(&ha.coboundary[m - 1]));
        }
        let system = column_matrix(na, &gens);
        let mut block = Matrix::zeros(h_dim, hx.basis[m].len());
        for (j, z) in hx.basis[m].iter().enumerate() {
            let restricted: Vec<Rational> = a_cols.iter().map(|&c| z[c].clone()).collect();
            let coeffs = if restricted.iter().all(Zero::is_zero) {
                vec![Rational::zero(); gens.len()]
            } else {
                solve(field, &system, &restricted)?.ok_or(SpaceError::NotSubcomplex)?
            };
            for (i, c) in coeffs.into_iter().take(h_dim).enumerate() {
                block.set(i, j, c);
            }
        }
        blocks.push(block);
    }
    let dims = |h: &Cohomology| h.basis.iter().map(Vec::len).collect::<Vec<_>>();
    Ok(GradedMap::new(GradedSpace::from_dims(&dims(&hx))?, GradedSpace::from_dims(&dims(&ha))?, blocks)?)
}

#[cfg(test)]
mod tests {
    use super::super::pairs::{sphere3, standard_pair};
    use super::*;

    const F2: FieldSpec = FieldSpec::Prime(2);

    #[test]
    fn basic_homology() {
        let s1 = standard_pair("circle-point", 4).unwrap().total;
        assert_eq!(homology(&s1, F2, 3).unwrap(), vec![1, 1, 0, 0]);
        let torus = SimplicialSet::product(&[&s1, &s1]).unwrap();
        assert_eq!(homology(&torus, F2, 3).unwrap(), vec![1, 2, 1, 0]);
        assert_eq!(homology(&torus, FieldSpec::Rationals, 2).unwrap(), vec![1, 2, 1]);
        assert_eq!(homology(&sphere3(4), F2, 3).unwrap(), vec![1, 0, 0, 1]);
        let disk = standard_pair("disk2-circle", 4).unwrap().total;
        assert_eq!(homology(&disk, F2, 3).unwrap(), vec![1, 0, 0, 0]);
        assert!(matches!(homology(&disk, F2, 4), Err(SpaceError::InsufficientTruncation { .. })));
    }

    #[test]
    fn restriction_maps() {
        let r = restriction_map(&standard_pair("circle-point", 3).unwrap(), F2, 2).unwrap();
        assert_eq!(r.source().dims(), vec![1, 1, 0]);
        assert_eq!(r.target().dims(), vec![1, 0, 0]);
        assert!(r.block(0).equals_in(F2, &Matrix::identity(1)).unwrap());
        let r = restriction_map(&standard_pair("disk2-circle", 3).unwrap(), FieldSpec::Rationals, 2).unwrap();
        assert_eq!(r.source().dims(), vec![1, 0, 0]);
        assert_eq!(r.target().dims(), vec![1, 1, 0]);
        let r = restriction_map(&standard_pair("interval-endpoints", 3).unwrap(), FieldSpec::Rationals, 1).unwrap();
        assert_eq!(r.source().dims(), vec![1, 0]);
        assert_eq!(r.target().dims(), vec![2, 0]);
    }
}
