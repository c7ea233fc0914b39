use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::{kernel, FieldSpec, GradedMap, Matrix, Rational, SparseMatrix};

use super::{LimitsError, PosetDiagram};

/// Chains indexing the cochains: strictly increasing (normalized) or weakly
/// increasing (unnormalized).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Strict,
    Weak,
}

/// `C^n(P, F)` for `n <= n_max + 1` and the differentials `δ^n`, `n <= n_max`,
/// one block per internal degree.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub n_max: usize,
    pub kind: ChainKind,
    /// Chains of each level.
    pub chains: Vec<Vec<Vec<usize>>>,
    /// `dims[n][d] = dim C^n_d`.
    pub dims: Vec<Vec<usize>>,
    /// `differentials[n][d]: C^n_d -> C^{n+1}_d`, rows indexing the target.
    pub differentials: Vec<Vec<SparseMatrix>>,
}

fn weak_chains(f: &PosetDiagram, n: usize) -> Vec<Vec<usize>> {
    let p = f.poset();
    let mut out: Vec<Vec<usize>> = (0..p.len()).map(|x| vec![x]).collect();
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().expect("nonempty");
                p.up_set(last).into_iter().map(move |y| {
                    let mut e = c.clone();
                    e.push(y);
                    e
                })
            })
            .collect();
    }
    out
}

pub fn cochain_complex(f: &PosetDiagram, n_max: usize) -> CochainComplex {
    build(f, n_max, ChainKind::Strict)
}

/// The complex on weakly increasing chains; same cohomology, larger.
pub fn unnormalized_cochain_complex(f: &PosetDiagram, n_max: usize) -> CochainComplex {
    build(f, n_max, ChainKind::Weak)
}

fn build(f: &PosetDiagram, n_max: usize, kind: ChainKind) -> CochainComplex {
    let top = f.max_degree();
    let chains: Vec<Vec<Vec<usize>>> = (0..=n_max + 1)
        .map(|n| match kind {
            ChainKind::Strict => f.poset().strict_chains(n),
            ChainKind::Weak => weak_chains(f, n),
        })
        .collect();
    // offsets[n][d][chain index]
    let mut offsets: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut dims = Vec::new();
    for level in &chains {
        let mut per_d = Vec::new();
        let mut dim_d = Vec::new();
        for d in 0..=top {
            let mut acc = 0;
            let offs = level
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += f.value(c[0]).dim(d);
                    o
                })
                .collect();
            per_d.push(offs);
            dim_d.push(acc);
        }
        offsets.push(per_d);
        dims.push(dim_d);
    }
    let comp = f.composites();
    let mut differentials = Vec::new();
    for n in 0..=n_max {
        let index: HashMap<&[usize], usize> =
            chains[n].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut per_d = Vec::new();
        for d in 0..=top {
            let mut m = SparseMatrix::new(dims[n][d]);
            for c in &chains[n + 1] {
                let head: &GradedMap = &comp[&(c[0], c[1])];
                let block = head.block(d);
                let tail = index[&c[1..]];
                let faces: Vec<(usize, Rational)> = (1..c.len())
                    .map(|k| {
                        let mut face = c.clone();
                        face.remove(k);
                        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                        (index[face.as_slice()], sign)
                    })
                    .collect();
                for i in 0..f.value(c[0]).dim(d) {
                    let mut row: Vec<(usize, Rational)> = Vec::new();
                    for j in 0..block.cols() {
                        let x = block.get(i, j);
                        if !x.is_zero() {
                            row.push((offsets[n][d][tail] + j, x.clone()));
                        }
                    }
                    for (face, sign) in &faces {
                        row.push((offsets[n][d][*face] + i, sign.clone()));
                    }
                    m.push_row(row);
                }
            }
            per_d.push(m);
        }
        differentials.push(per_d);
    }
    CochainComplex { n_max, kind, chains, dims, differentials }
}

impl CochainComplex {
    /// Checks `δ^{n+1} δ^n = 0` in every degree.
    pub fn squares_to_zero(&self, field: FieldSpec) -> Result<bool, LimitsError> {
        for n in 0..self.n_max {
            for d in 0..self.differentials[n].len() {
                let a = self.differentials[n][d].to_dense();
                let b = self.differentials[n + 1][d].to_dense();
                if !b.mul(&a).is_zero_in(field)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn rank(&self, field: FieldSpec, n: usize, d: usize) -> Result<usize, LimitsError> {
        Ok(self.differentials[n][d].rank(field)?)
    }
}

/// `dims[n][d] = dim lim^n F` in internal degree `d`, and optionally a basis
/// of `lim^0` as compatible tuples in `C^0 = ⊕_x F(x)`, one list per degree.
#[derive(Clone, Debug, Serialize)]
pub struct HigherLimits {
    pub dims: Vec<Vec<usize>>,
    #[serde(skip)]
    pub lim0_basis: Vec<Vec<Vec<Rational>>>,
}

impl HigherLimits {
    /// `dim lim^n` summed over internal degrees.
    pub fn total(&self, n: usize) -> usize {
        self.dims[n].iter().sum()
    }

    /// Whether `lim^n` vanishes for all `1 <= n <= n_max`.
    pub fn acyclic(&self) -> bool {
        self.dims.iter().skip(1).all(|row| row.iter().all(|&x| x == 0))
    }

    /// `lim^0` dimensions per internal degree.
    pub fn lim0(&self) -> &[usize] {
        &self.dims[0]
    }
}

pub fn higher_limits(f: &PosetDiagram, n_max: usize, field: FieldSpec) -> Result<HigherLimits, LimitsError> {
    limits_of(&cochain_complex(f, n_max), field)
}

/// As [`higher_limits`], also filling in the `lim^0` basis.
pub fn higher_limits_with_basis(
    f: &PosetDiagram,
    n_max: usize,
    field: FieldSpec,
) -> Result<HigherLimits, LimitsError> {
    let c = cochain_complex(f, n_max);
    let mut lim = limits_of(&c, field)?;
    for d in 0..c.dims[0].len() {
        let dense: Matrix = c.differentials[0][d].to_dense();
        lim.lim0_basis.push(kernel(field, &dense)?);
    }
    Ok(lim)
}

/// Cohomology dimensions of a complex through level `n_max`.
pub fn limits_of(c: &CochainComplex, field: FieldSpec) -> Result<HigherLimits, LimitsError> {
    let degrees = c.dims[0].len();
    let mut ranks = vec![vec![0usize; degrees]; c.n_max + 1];
    for n in 0..=c.n_max {
        for d in 0..degrees {
            ranks[n][d] = c.rank(field, n, d)?;
        }
    }
    let dims = (0..=c.n_max)
        .map(|n| {
            (0..degrees)
                .map(|d| c.dims[n][d] - ranks[n][d] - if n > 0 { ranks[n - 1][d] } else { 0 })
                .collect()
        })
        .collect();
    Ok(HigherLimits { dims, lim0_basis: Vec::new() })
}

/// Splits a vector of `C^0_d` into its per-object components.
pub fn split_tuple(f: &PosetDiagram, d: usize, v: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut at = 0;
    for x in 0..f.poset().len() {
        let n = f.value(x).dim(d);
        out.push(v[at..at + n].to_vec());
        at += n;
    }
    out
}

/// Checks that `F(x <= y)` carries the `y` entry of every `lim^0` basis
/// tuple to its `x` entry.
pub fn lim0_tuples_compatible(f: &PosetDiagram, lim: &HigherLimits, field: FieldSpec) -> Result<bool, LimitsError> {
    let comp = f.composites();
    for (d, basis) in lim.lim0_basis.iter().enumerate() {
        for v in basis {
            let parts = split_tuple(f, d, v);
            for (&(x, y), m) in &comp {
                let img = m.block(d).apply(&parts[y]);
                let mut col = Matrix::zeros(img.len(), 1);
                for (i, (a, b)) in img.iter().zip(&parts[x]).enumerate() {
                    col.set(i, 0, a - b);
                }
                if !col.is_zero_in(field)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
