//! Dense and sparse exact matrices with rank, kernel and right-inverse routines.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{make_primitive, primitive_integer_row, q, FieldOps, FieldSpec, FpOps, QOps, Rational};
use super::LinalgError;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape { expected: (rows, cols), found: shape_of(&entries) });
        }
        Ok(Matrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        Matrix { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Kronecker product; the row index of `self` varies slowest.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Rational)>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Entry-wise equality after reduction into `field`.
    pub fn equals_in(&self, field: FieldSpec, other: &Matrix) -> Result<bool, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Ok(false);
        }
        match field {
            FieldSpec::Rationals => Ok(self == other),
            FieldSpec::Prime(p) => {
                let ops = FpOps { p };
                for (a, b) in self.data.iter().zip(&other.data) {
                    if ops.from_rational(a)? != ops.from_rational(b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn is_zero_in(&self, field: FieldSpec) -> Result<bool, LinalgError> {
        self.equals_in(field, &Matrix::zeros(self.rows, self.cols))
    }
}

fn shape_of(entries: &[Vec<Rational>]) -> (usize, usize) {
    (entries.len(), entries.first().map(|r| r.len()).unwrap_or(0))
}

/// A sparse matrix given by rows of `(column, value)` pairs.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Pushes a row, merging repeated columns and dropping zeros.
    pub fn push_row(&mut self, mut entries: Vec<(usize, Rational)>) {
        entries.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (c, x) in entries {
            debug_assert!(c < self.ncols);
            match merged.last_mut() {
                Some((lc, lx)) if *lc == c => *lx += x,
                _ => merged.push((c, x)),
            }
        }
        merged.retain(|(_, x)| !x.is_zero());
        self.rows.push(merged);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows.len(), self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                m.set(i, *j, x.clone());
            }
        }
        m
    }

    pub fn rank(&self, field: FieldSpec) -> Result<usize, LinalgError> {
        sparse_rank(field, &self.rows)
    }
}

/// Exact rank of a matrix over `field`.
pub fn rank(field: FieldSpec, m: &Matrix) -> Result<usize, LinalgError> {
    sparse_rank(field, &m.sparse_rows())
}

/// Exact rank of a sparse matrix given by rows. Over the rationals the rows are
/// cleared to primitive integer rows and eliminated without fractions.
pub fn sparse_rank(field: FieldSpec, rows: &[Vec<(usize, Rational)>]) -> Result<usize, LinalgError> {
    match field {
        FieldSpec::Rationals => Ok(fraction_free_rank(rows)),
        FieldSpec::Prime(p) => prime_rank(&FpOps { p }, rows),
    }
}

fn fraction_free_rank(rows: &[Vec<(usize, Rational)>]) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for row in rows {
        let mut r = primitive_integer_row(row);
        while let Some(&(lead, _)) = r.first() {
            match pivots.get(&lead) {
                Some(p) => r = integer_eliminate(&r, p),
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a * r - b * p` where `a`, `b` are the leading coefficients of `p` and `r`.
fn integer_eliminate(r: &[(usize, BigInt)], p: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let a = &p[0].1;
    let b = &r[0].1;
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = p.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, a * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(out)
}

fn prime_rank(ops: &FpOps, rows: &[Vec<(usize, Rational)>]) -> Result<usize, LinalgError> {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for row in rows {
        let mut r: Vec<(usize, u64)> = Vec::with_capacity(row.len());
        for (c, x) in row {
            let v = ops.from_rational(x)?;
            if v != 0 {
                r.push((*c, v));
            }
        }
        r.sort_by_key(|e| e.0);
        while let Some(&(lead, coeff)) = r.first() {
            match pivots.get(&lead) {
                Some(piv) => r = fp_eliminate(ops, &r, piv, coeff),
                None => {
                    let inv = ops.inv(&coeff);
                    for e in r.iter_mut() {
                        e.1 = e.1 * inv % ops.p;
                    }
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    Ok(pivots.len())
}

/// `r - c * p` for a pivot row `p` with leading coefficient one.
fn fp_eliminate(ops: &FpOps, r: &[(usize, u64)], p: &[(usize, u64)], c: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    let neg_c = (ops.p - c) % ops.p;
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = p.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(r[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, neg_c * p[j].1 % ops.p));
            j += 1;
        } else {
            let v = (r[i].1 + neg_c * p[j].1) % ops.p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
fn rref<F: FieldOps>(ops: &F, mut a: Vec<Vec<F::E>>, cols: usize) -> (Vec<Vec<F::E>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !ops.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = ops.inv(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = ops.mul(x, &inv);
        }
        for i in 0..a.len() {
            if i != r && !ops.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let t = ops.mul(&f, &a[r][j]);
                    a[i][j] = ops.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn lift<F: FieldOps>(ops: &F, m: &Matrix) -> Result<Vec<Vec<F::E>>, LinalgError> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| ops.from_rational(x)).collect())
        .collect()
}

fn kernel_in<F: FieldOps>(ops: &F, m: &Matrix) -> Result<Vec<Vec<Rational>>, LinalgError> {
    let (r, pivots) = rref(ops, lift(ops, m)?, m.cols());
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ops.zero(); m.cols()];
        v[free] = ops.one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = ops.sub(&ops.zero(), &r[i][free]);
        }
        basis.push(v.iter().map(|x| ops.to_rational(x)).collect());
    }
    Ok(basis)
}

/// Basis of the null space `{x : m x = 0}`. Over a prime field the entries are
/// canonical residues.
pub fn kernel(field: FieldSpec, m: &Matrix) -> Result<Vec<Vec<Rational>>, LinalgError> {
    match field {
        FieldSpec::Rationals => kernel_in(&QOps, m),
        FieldSpec::Prime(p) => kernel_in(&FpOps { p }, m),
    }
}

fn right_inverse_in<F: FieldOps>(ops: &F, m: &Matrix) -> Result<Option<Matrix>, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = lift(ops, m)?;
    for (i, row) in aug.iter_mut().enumerate() {
        row.extend((0..rows).map(|j| if i == j { ops.one() } else { ops.zero() }));
    }
    let (r, pivots) = rref(ops, aug, cols);
    if pivots.len() < rows {
        return Ok(None);
    }
    let mut x = Matrix::zeros(cols, rows);
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..rows {
            x.set(pc, j, ops.to_rational(&r[i][cols + j]));
        }
    }
    Ok(Some(x))
}

/// A matrix `s` with `m * s = 1`, when `m` has full row rank.
pub fn right_inverse(field: FieldSpec, m: &Matrix) -> Result<Option<Matrix>, LinalgError> {
    match field {
        FieldSpec::Rationals => right_inverse_in(&QOps, m),
        FieldSpec::Prime(p) => right_inverse_in(&FpOps { p }, m),
    }
}

/// Expresses `v` in the column span of `basis` (columns), if possible.
pub fn solve(field: FieldSpec, a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    fn go<F: FieldOps>(ops: &F, a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        let mut aug = lift(ops, a)?;
        for (row, x) in aug.iter_mut().zip(b) {
            row.push(ops.from_rational(x)?);
        }
        let cols = a.cols();
        let (r, pivots) = rref(ops, aug, cols + 1);
        if pivots.last() == Some(&cols) {
            return Ok(None);
        }
        let mut x = vec![ops.zero(); cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[i][cols].clone();
        }
        Ok(Some(x.iter().map(|e| ops.to_rational(e)).collect()))
    }
    match field {
        FieldSpec::Rationals => go(&QOps, a, b),
        FieldSpec::Prime(p) => go(&FpOps { p }, a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIELDS: [FieldSpec; 3] = [FieldSpec::Rationals, FieldSpec::Prime(2), FieldSpec::Prime(101)];

    #[test]
    fn zero_and_identity_ranks() {
        for f in FIELDS {
            assert_eq!(rank(f, &Matrix::zeros(2, 2)).unwrap(), 0);
            assert_eq!(kernel(f, &Matrix::zeros(2, 2)).unwrap().len(), 2);
            assert_eq!(rank(f, &Matrix::identity(3)).unwrap(), 3);
            assert!(kernel(f, &Matrix::identity(3)).unwrap().is_empty());
        }
    }

    #[test]
    fn rank_of_non_saturated_differential() {
        // rows 3->5, 3->6, 4->5, 4->6; columns objects 3, 4, 5, 6
        let m = Matrix::from_i64(4, 4, &[-1, 0, 1, 0, -1, 0, 0, 1, 0, -1, 1, 0, 0, -1, 0, 1]);
        for f in FIELDS {
            assert_eq!(rank(f, &m).unwrap(), 3);
        }
    }

    #[test]
    fn field_dependent_rank() {
        let m = Matrix::from_i64(2, 2, &[1, 1, 1, -1]);
        assert_eq!(rank(FieldSpec::Rationals, &m).unwrap(), 2);
        assert_eq!(rank(FieldSpec::Prime(2), &m).unwrap(), 1);
    }

    #[test]
    fn kernel_vectors_map_to_zero() {
        let m = Matrix::from_i64(2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        for f in FIELDS {
            let k = kernel(f, &m).unwrap();
            assert_eq!(k.len() + rank(f, &m).unwrap(), 4);
            for v in k {
                let img = Matrix::from_rows(4, 1, v.into_iter().map(|x| vec![x]).collect()).unwrap();
                assert!(m.mul(&img).is_zero_in(f).unwrap());
            }
        }
    }

    #[test]
    fn right_inverse_when_surjective() {
        let m = Matrix::from_i64(2, 3, &[1, 0, 2, 0, 3, 1]);
        for f in [FieldSpec::Rationals, FieldSpec::Prime(101)] {
            let s = right_inverse(f, &m).unwrap().unwrap();
            assert!(m.mul(&s).equals_in(f, &Matrix::identity(2)).unwrap());
        }
        let not_onto = Matrix::from_i64(2, 1, &[1, 1]);
        assert!(right_inverse(FieldSpec::Rationals, &not_onto).unwrap().is_none());
    }

    #[test]
    fn solve_finds_preimages() {
        let a = Matrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1]);
        let x = solve(FieldSpec::Rationals, &a, &[q(2), q(3), q(5)]).unwrap().unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve(FieldSpec::Rationals, &a, &[q(2), q(3), q(4)]).unwrap().is_none());
    }

    #[test]
    fn kron_shapes_and_entries() {
        let a = Matrix::from_i64(1, 2, &[1, 2]);
        let b = Matrix::from_i64(2, 1, &[3, 4]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k, Matrix::from_i64(2, 2, &[3, 6, 4, 8]));
    }
}
