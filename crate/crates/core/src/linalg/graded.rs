//! Truncated graded vector spaces, degree-preserving maps and their tensor
//! products.
//!
//! Every space carries an explicit truncation degree `D`; degrees above `D`
//! are never represented. Tensor products of families are realized in a
//! fixed order of the factors: any two orders give canonically isomorphic
//! results, and the property tests check that no dimension depends on it.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{FieldSpec, Rational};
use super::matrix::{kernel, rank, right_inverse, Matrix};
use super::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    labels: Vec<Vec<String>>,
}

impl GradedSpace {
    /// A space from per-degree basis labels for degrees `0..=D`.
    pub fn new(labels: Vec<Vec<String>>) -> Result<Self, LinalgError> {
        if labels.is_empty() {
            return Err(LinalgError::EmptyGrading);
        }
        Ok(GradedSpace { labels })
    }

    /// A space with the given dimensions and generated labels `e<d>.<i>`.
    pub fn from_dims(dims: &[usize]) -> Result<Self, LinalgError> {
        Self::new(
            dims.iter()
                .enumerate()
                .map(|(d, &n)| (0..n).map(|i| format!("e{d}.{i}")).collect())
                .collect(),
        )
    }

    pub fn zero(max_degree: usize) -> Self {
        GradedSpace { labels: vec![Vec::new(); max_degree + 1] }
    }

    /// The ground field concentrated in degree zero.
    pub fn unit(max_degree: usize) -> Self {
        let mut labels = vec![Vec::new(); max_degree + 1];
        labels[0].push("1".to_string());
        GradedSpace { labels }
    }

    pub fn max_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.labels.get(d).map(|l| l.len()).unwrap_or(0)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d]
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Same space with truncation raised or lowered to `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        let mut labels: Vec<Vec<String>> = self.labels.iter().take(max_degree + 1).cloned().collect();
        labels.resize(max_degree + 1, Vec::new());
        GradedSpace { labels }
    }
}

/// A degree-preserving linear map, one matrix per degree (target rows,
/// source columns).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    blocks: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(source: GradedSpace, target: GradedSpace, blocks: Vec<Matrix>) -> Result<Self, LinalgError> {
        if source.max_degree() != target.max_degree() {
            return Err(LinalgError::MixedTruncation(source.max_degree(), target.max_degree()));
        }
        if blocks.len() != source.max_degree() + 1 {
            return Err(LinalgError::BlockCount { expected: source.max_degree() + 1, found: blocks.len() });
        }
        for (d, b) in blocks.iter().enumerate() {
            if b.rows() != target.dim(d) || b.cols() != source.dim(d) {
                return Err(LinalgError::Shape {
                    expected: (target.dim(d), source.dim(d)),
                    found: (b.rows(), b.cols()),
                });
            }
        }
        Ok(GradedMap { source, target, blocks })
    }

    pub fn identity(space: &GradedSpace) -> Self {
        GradedMap {
            source: space.clone(),
            target: space.clone(),
            blocks: space.dims().iter().map(|&n| Matrix::identity(n)).collect(),
        }
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            blocks: (0..=source.max_degree())
                .map(|d| Matrix::zeros(target.dim(d), source.dim(d)))
                .collect(),
        }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn block(&self, d: usize) -> &Matrix {
        &self.blocks[d]
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn max_degree(&self) -> usize {
        self.source.max_degree()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(other.target.dims(), self.source.dims(), "composable maps");
        GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn equals_in(&self, field: FieldSpec, other: &GradedMap) -> Result<bool, LinalgError> {
        if self.blocks.len() != other.blocks.len() {
            return Ok(false);
        }
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            if !a.equals_in(field, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity_in(&self, field: FieldSpec) -> Result<bool, LinalgError> {
        if self.source.dims() != self.target.dims() {
            return Ok(false);
        }
        self.equals_in(field, &GradedMap::identity(&self.target))
    }

    pub fn is_zero_in(&self, field: FieldSpec) -> Result<bool, LinalgError> {
        for b in &self.blocks {
            if !b.is_zero_in(field)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Per-degree rank and kernel basis of a graded map.
#[derive(Clone, Debug)]
pub struct RankKernel {
    pub ranks: Vec<usize>,
    pub kernels: Vec<Vec<Vec<Rational>>>,
}

impl RankKernel {
    pub fn kernel_dims(&self) -> Vec<usize> {
        self.kernels.iter().map(|k| k.len()).collect()
    }
}

pub fn rank_kernel(field: FieldSpec, map: &GradedMap) -> Result<RankKernel, LinalgError> {
    let mut ranks = Vec::new();
    let mut kernels = Vec::new();
    for b in &map.blocks {
        ranks.push(rank(field, b)?);
        kernels.push(kernel(field, b)?);
    }
    Ok(RankKernel { ranks, kernels })
}

/// Offsets of the `(i, d - i)` summands inside degree `d` of `a ⊗ b`.
fn summand_offsets(a: &[usize], b: &[usize], d: usize) -> Vec<usize> {
    let mut offs = Vec::with_capacity(d + 1);
    let mut acc = 0;
    for i in 0..=d {
        offs.push(acc);
        acc += a[i] * b[d - i];
    }
    offs
}

/// Graded tensor product of two spaces with the same truncation.
pub fn tensor(a: &GradedSpace, b: &GradedSpace) -> Result<GradedSpace, LinalgError> {
    if a.max_degree() != b.max_degree() {
        return Err(LinalgError::MixedTruncation(a.max_degree(), b.max_degree()));
    }
    let top = a.max_degree();
    let labels = (0..=top)
        .map(|d| {
            let mut out = Vec::new();
            for i in 0..=d {
                for x in a.labels(i) {
                    for y in b.labels(d - i) {
                        out.push(join_label(x, y));
                    }
                }
            }
            out
        })
        .collect();
    Ok(GradedSpace { labels })
}

fn join_label(x: &str, y: &str) -> String {
    format!("{x}⊗{y}")
}

/// Graded tensor product of two maps: block diagonal over the summands.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap) -> Result<GradedMap, LinalgError> {
    let source = tensor(&f.source, &g.source)?;
    let target = tensor(&f.target, &g.target)?;
    let (fs, gs, ft, gt) = (f.source.dims(), g.source.dims(), f.target.dims(), g.target.dims());
    let blocks = (0..=source.max_degree())
        .map(|d| {
            let mut m = Matrix::zeros(target.dim(d), source.dim(d));
            let so = summand_offsets(&fs, &gs, d);
            let to = summand_offsets(&ft, &gt, d);
            for i in 0..=d {
                let k = f.blocks[i].kron(&g.blocks[d - i]);
                for r in 0..k.rows() {
                    for c in 0..k.cols() {
                        let x = k.get(r, c);
                        if !x.is_zero() {
                            m.set(to[i] + r, so[i] + c, x.clone());
                        }
                    }
                }
            }
            m
        })
        .collect();
    GradedMap::new(source, target, blocks)
}

/// Tensor product of an ordered family; the empty family is the unit.
pub fn tensor_collection(spaces: &[GradedSpace], max_degree: usize) -> Result<GradedSpace, LinalgError> {
    let mut acc = GradedSpace::unit(max_degree);
    let mut first = true;
    for s in spaces {
        if s.max_degree() != max_degree {
            return Err(LinalgError::MixedTruncation(max_degree, s.max_degree()));
        }
        acc = if first { s.clone() } else { tensor(&acc, s)? };
        first = false;
    }
    Ok(acc)
}

/// Factor-wise tensor product of an ordered family of maps.
pub fn tensor_map_collection(maps: &[GradedMap], max_degree: usize) -> Result<GradedMap, LinalgError> {
    let mut acc = GradedMap::identity(&GradedSpace::unit(max_degree));
    let mut first = true;
    for f in maps {
        if f.max_degree() != max_degree {
            return Err(LinalgError::MixedTruncation(max_degree, f.max_degree()));
        }
        acc = if first { f.clone() } else { tensor_maps(&acc, f)? };
        first = false;
    }
    Ok(acc)
}

/// The polynomial algebra on one generator of degree `gen_degree`, truncated
/// at `max_degree`, with its augmentation onto the ground field.
pub fn truncated_polynomial(
    name: &str,
    gen_degree: usize,
    max_degree: usize,
) -> Result<(GradedSpace, GradedMap), LinalgError> {
    if gen_degree == 0 {
        return Err(LinalgError::ZeroGeneratorDegree);
    }
    let mut labels = vec![Vec::new(); max_degree + 1];
    for i in 0..=max_degree / gen_degree {
        labels[i * gen_degree].push(match i {
            0 => "1".to_string(),
            1 => name.to_string(),
            _ => format!("{name}^{i}"),
        });
    }
    let ring = GradedSpace { labels };
    let unit = GradedSpace::unit(max_degree);
    let mut aug = GradedMap::zero(&ring, &unit);
    aug.blocks[0] = Matrix::identity(1);
    Ok((ring, aug))
}

/// A map `s` with `a ∘ s = 1`, or `None` when `a` is not onto in some degree.
pub fn find_section(field: FieldSpec, a: &GradedMap) -> Result<Option<GradedMap>, LinalgError> {
    let mut blocks = Vec::new();
    for b in &a.blocks {
        match right_inverse(field, b)? {
            Some(s) => blocks.push(s),
            None => return Ok(None),
        }
    }
    GradedMap::new(a.target.clone(), a.source.clone(), blocks).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_cohomology(d: usize) -> GradedSpace {
        let mut dims = vec![0; d + 1];
        dims[0] = 1;
        if d >= 1 {
            dims[1] = 1;
        }
        GradedSpace::from_dims(&dims).unwrap()
    }

    #[test]
    fn tensor_with_unit() {
        let (ring, _) = truncated_polynomial("u", 1, 2).unwrap();
        let t = tensor(&ring, &GradedSpace::unit(2)).unwrap();
        assert_eq!(t.dims(), vec![1, 1, 1]);
    }

    #[test]
    fn tensor_of_rank_two_factors() {
        let t = tensor(&circle_cohomology(2), &circle_cohomology(2)).unwrap();
        assert_eq!(t.dims(), vec![1, 2, 1]);
    }

    #[test]
    fn mixed_truncation_rejected() {
        assert!(matches!(
            tensor(&GradedSpace::unit(2), &GradedSpace::unit(3)),
            Err(LinalgError::MixedTruncation(2, 3))
        ));
    }

    #[test]
    fn truncated_polynomials() {
        let (r, aug) = truncated_polynomial("v", 1, 3).unwrap();
        assert_eq!(r.dims(), vec![1, 1, 1, 1]);
        for d in 1..=3 {
            assert!(aug.block(d).is_zero());
        }
        let (r2, aug2) = truncated_polynomial("v", 2, 5).unwrap();
        assert_eq!(r2.dims(), vec![1, 0, 1, 0, 1, 0]);
        for a in [&aug, &aug2] {
            let s = find_section(FieldSpec::Rationals, a).unwrap().unwrap();
            assert!(a.compose(&s).is_identity_in(FieldSpec::Rationals).unwrap());
        }
    }

    #[test]
    fn sections_of_simple_maps() {
        // H*(pt) -> H*(S^0) in degree zero: k -> k^2 is not onto
        let pt = GradedSpace::from_dims(&[1]).unwrap();
        let s0 = GradedSpace::from_dims(&[2]).unwrap();
        let inc = GradedMap::new(pt.clone(), s0, vec![Matrix::from_i64(2, 1, &[1, 1])]).unwrap();
        assert!(find_section(FieldSpec::Rationals, &inc).unwrap().is_none());
        let zero = GradedSpace::zero(0);
        let to_zero = GradedMap::zero(&pt, &zero);
        assert!(find_section(FieldSpec::Rationals, &to_zero).unwrap().is_some());
    }

    #[test]
    fn tensor_maps_act_factorwise() {
        let (r, aug) = truncated_polynomial("v", 1, 2).unwrap();
        let id = GradedMap::identity(&r);
        let m = tensor_maps(&aug, &id).unwrap();
        assert_eq!(m.source().dims(), vec![1, 2, 3]);
        assert_eq!(m.target().dims(), vec![1, 1, 1]);
        // kills every basis element containing a positive power of the first factor
        for d in 0..=2 {
            assert_eq!(rank(FieldSpec::Rationals, m.block(d)).unwrap(), 1);
        }
    }

    #[test]
    fn rank_kernel_counts() {
        let (r, aug) = truncated_polynomial("v", 1, 3).unwrap();
        let rk = rank_kernel(FieldSpec::Rationals, &aug).unwrap();
        assert_eq!(rk.ranks, vec![1, 0, 0, 0]);
        assert_eq!(rk.kernel_dims(), vec![0, 1, 1, 1]);
        for d in 0..=3 {
            assert_eq!(rk.ranks[d] + rk.kernels[d].len(), r.dim(d));
        }
    }
}
