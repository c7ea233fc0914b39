//! Stanley-Reisner presentations of polyhedral posets and graded quotient
//! dimensions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{sparse_rank, FieldSpec, LinalgError, Rational};
use crate::poset::{classify, reduce, PointedPoset};
use crate::tensor::{polyhedral_tensor, vertex_names, MorphismCollection, TensorError};
use crate::transform::{f_transform_predict, f_vector, simplicial_transform, NuMode, TransformError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StanleyError {
    #[error("poset is not polyhedral")]
    NotPolyhedral,
    #[error("poset is not simplicial")]
    NotSimplicial,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("grading scale must be positive")]
    BadScale,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Sorted `(generator, exponent)` pairs.
pub type Monomial = Vec<(usize, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<usize, u32> = a.iter().copied().collect();
    for &(g, e) in b {
        *out.entry(g).or_insert(0) += e;
    }
    out.into_iter().collect()
}

/// A polynomial in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub BTreeMap<Monomial, Rational>);

impl Poly {
    fn monomial(m: Monomial) -> Self {
        let mut p = Poly::default();
        p.0.insert(m, Rational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        let e = self.0.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    fn sub(mut self, other: &Poly) -> Self {
        for (m, c) in &other.0 {
            self.add_term(m.clone(), -c.clone());
        }
        self
    }

    fn mul(&self, other: &Poly) -> Self {
        let mut out = Poly::default();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out.add_term(mono_mul(a, b), x * y);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.0 {
            let body = if m.is_empty() {
                "1".to_string()
            } else {
                m.iter()
                    .map(|&(g, e)| if e == 1 { names[g].clone() } else { format!("{}^{e}", names[g]) })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            let term = if c.is_one() {
                body
            } else if *c == -Rational::one() {
                format!("-{body}")
            } else {
                format!("{c}*{body}")
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `x - y` for a cover with equal vertex sets.
    Collapse,
    /// Product of a minimal set without an upper bound.
    NoUpperBound,
    /// Inclusion-exclusion relation for a set with an upper bound.
    MeetJoin,
    /// Stanley: `xy` when `x, y` have no upper bound.
    StanleyProduct,
    /// Stanley: `xy - (x ∧ y) Σ z`.
    StanleyMeetJoin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub clause: Clause,
    pub poly: Poly,
    pub degree: usize,
}

/// Generators are the non-base objects; the base point is eliminated as 1.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub generators: Vec<String>,
    /// Object index of each generator.
    pub objects: Vec<usize>,
    pub degrees: Vec<usize>,
    pub relations: Vec<Relation>,
    pub grading_scale: usize,
    /// Antichain size bound used for the set-indexed clauses.
    pub antichain_bound: usize,
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            writeln!(f, "{:?}: {}", r.clause, r.poly.render(&self.generators))?;
        }
        Ok(())
    }
}

impl RingPresentation {
    pub fn render_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.poly.render(&self.generators)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SrOptions {
    pub antichain_bound: usize,
    pub grading_scale: usize,
    /// Relations above this degree are not generated.
    pub degree_limit: Option<usize>,
}

impl Default for SrOptions {
    fn default() -> Self {
        SrOptions { antichain_bound: 3, grading_scale: 1, degree_limit: None }
    }
}

struct Gens {
    objects: Vec<usize>,
    index: HashMap<usize, usize>,
    degrees: Vec<usize>,
}

fn generators(p: &PointedPoset, scale: usize) -> Gens {
    let objects: Vec<usize> = (0..p.len()).filter(|&x| x != p.base()).collect();
    let index = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let degrees = objects.iter().map(|&o| p.vertex_count(o) * scale).collect();
    Gens { objects, index, degrees }
}

impl Gens {
    /// The generator of an object; the base point is the unit.
    fn poly(&self, x: usize) -> Poly {
        match self.index.get(&x) {
            Some(&g) => Poly::monomial(vec![(g, 1)]),
            None => Poly::monomial(Vec::new()),
        }
    }
}

/// Sets of `k` generators in index order with total degree within `limit`.
fn subsets_within(degrees: &[usize], k: usize, limit: usize, mut visit: impl FnMut(&[usize])) {
    fn go(
        degrees: &[usize],
        start: usize,
        k: usize,
        room: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for g in start..degrees.len() {
            if degrees[g] <= room {
                cur.push(g);
                go(degrees, g + 1, k, room - degrees[g], cur, visit);
                cur.pop();
            }
        }
    }
    go(degrees, 0, k, limit, &mut Vec::new(), &mut visit);
}

/// The presentation `k[P] = k[Obj P] / I_P` of a polyhedral poset, with the
/// set-indexed clauses enumerated over pairs and antichains of size at most
/// `opts.antichain_bound`; see `meet_join_relations` for sets with minimal
/// upper bounds of differing vertex sets.
pub fn ideal_generators(p: &PointedPoset, opts: &SrOptions) -> Result<RingPresentation, StanleyError> {
    if opts.grading_scale == 0 {
        return Err(StanleyError::BadScale);
    }
    if !classify(p).polyhedral {
        return Err(StanleyError::NotPolyhedral);
    }
    let g = generators(p, opts.grading_scale);
    let limit = opts.degree_limit.unwrap_or(usize::MAX);
    let mut relations = Vec::new();
    for &(x, y) in p.covers() {
        if x != p.base() && p.vertex_mask(x) == p.vertex_mask(y) && g.degrees[g.index[&x]] <= limit {
            relations.push(Relation {
                clause: Clause::Collapse,
                poly: g.poly(x).sub(&g.poly(y)),
                degree: g.degrees[g.index[&x]],
            });
        }
    }
    for k in 2..=opts.antichain_bound.max(2) {
        subsets_within(&g.degrees, k, limit, |set| {
            let objs: Vec<usize> = set.iter().map(|&i| g.objects[i]).collect();
            let antichain = objs.iter().enumerate().all(|(i, &a)| objs[i + 1..].iter().all(|&b| !p.comparable(a, b)));
            if k > 2 && !antichain {
                return;
            }
            let degree: usize = set.iter().map(|&i| g.degrees[i]).sum();
            if !p.have_upper_bound(&objs) {
                let minimal = antichain
                    && (0..k).all(|drop| {
                        let rest: Vec<usize> = objs.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &o)| o).collect();
                        p.have_upper_bound(&rest)
                    });
                if minimal {
                    let poly = objs.iter().fold(Poly::monomial(Vec::new()), |acc, &o| acc.mul(&g.poly(o)));
                    relations.push(Relation { clause: Clause::NoUpperBound, poly, degree });
                }
                return;
            }
            for (poly, degree) in meet_join_relations(p, &g, &objs) {
                if !poly.is_zero() && degree <= limit {
                    relations.push(Relation { clause: Clause::MeetJoin, poly, degree });
                }
            }
        });
    }
    Ok(RingPresentation {
        generators: g.objects.iter().map(|&o| p.name(o).to_string()).collect(),
        objects: g.objects,
        degrees: g.degrees,
        relations,
        grading_scale: opts.grading_scale,
        antichain_bound: opts.antichain_bound,
    })
}

/// `Π_{|R| odd} ∧R - Π_{|R| even, R ≠ ∅} ∧R · Σ z` over `z ∈ [∨S]` with
/// `V(z) = ∪ V(s)`. When some minimal upper bound has a larger vertex set the
/// relation is only emitted multiplied by each such `z`.
fn meet_join_relations(p: &PointedPoset, g: &Gens, s: &[usize]) -> Vec<(Poly, usize)> {
    let union = s.iter().fold(0, |m, &x| m | p.vertex_mask(x));
    let bounds = p.min_upper(s);
    let zs: Vec<usize> = bounds.iter().copied().filter(|&z| p.vertex_mask(z) == union).collect();
    if zs.is_empty() {
        return Vec::new();
    }
    let mut odd = Poly::monomial(Vec::new());
    let mut even = Poly::monomial(Vec::new());
    for r in 1u32..(1 << s.len()) {
        let sub: Vec<usize> = (0..s.len()).filter(|i| r >> i & 1 == 1).map(|i| s[i]).collect();
        let m = p.meet(&sub).expect("sets with an upper bound have meets in a polyhedral poset");
        if r.count_ones() % 2 == 1 {
            odd = odd.mul(&g.poly(m));
        } else {
            even = even.mul(&g.poly(m));
        }
    }
    let mut sum = Poly::default();
    for &z in &zs {
        for (m, c) in g.poly(z).0 {
            sum.add_term(m, c);
        }
    }
    let rel = odd.sub(&even.mul(&sum));
    let degree: usize = s.iter().map(|&x| g.degrees[g.index[&x]]).sum();
    if zs.len() == bounds.len() {
        vec![(rel, degree)]
    } else {
        zs.iter().map(|&z| (g.poly(z).mul(&rel), degree + g.degrees[g.index[&z]])).collect()
    }
}

/// Stanley's presentation of a simplicial poset.
pub fn simplicial_ideal_generators(p: &PointedPoset, grading_scale: usize) -> Result<RingPresentation, StanleyError> {
    if grading_scale == 0 {
        return Err(StanleyError::BadScale);
    }
    if !classify(p).simplicial {
        return Err(StanleyError::NotSimplicial);
    }
    let g = generators(p, grading_scale);
    let mut relations = Vec::new();
    for (i, &x) in g.objects.iter().enumerate() {
        for &y in &g.objects[i + 1..] {
            let xy = g.poly(x).mul(&g.poly(y));
            let degree = g.degrees[g.index[&x]] + g.degrees[g.index[&y]];
            let ups = p.min_upper(&[x, y]);
            if ups.is_empty() {
                relations.push(Relation { clause: Clause::StanleyProduct, poly: xy, degree });
                continue;
            }
            let meet = p.meet(&[x, y]).expect("simplicial posets have meets under upper bounds");
            let mut sum = Poly::default();
            for z in ups {
                for (m, c) in g.poly(z).0 {
                    sum.add_term(m, c);
                }
            }
            let poly = xy.sub(&g.poly(meet).mul(&sum));
            if !poly.is_zero() {
                relations.push(Relation { clause: Clause::StanleyMeetJoin, poly, degree });
            }
        }
    }
    Ok(RingPresentation {
        generators: g.objects.iter().map(|&o| p.name(o).to_string()).collect(),
        objects: g.objects,
        degrees: g.degrees,
        relations,
        grading_scale,
        antichain_bound: 2,
    })
}

/// Monomials of weighted degree exactly `d`.
pub fn monomials(degrees: &[usize], d: usize) -> Vec<Monomial> {
    fn go(degrees: &[usize], g: usize, room: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if room == 0 {
            out.push(cur.clone());
            return;
        }
        if g == degrees.len() {
            return;
        }
        go(degrees, g + 1, room, cur, out);
        let w = degrees[g];
        let mut e = 1;
        while w * e as usize <= room {
            cur.push((g, e));
            go(degrees, g + 1, room - w * e as usize, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, d, &mut Vec::new(), &mut out);
    out
}

/// `dim (k[generators] / (relations))_d` for `d <= D`.
pub fn quotient_dims(pres: &RingPresentation, max_degree: usize, field: FieldSpec) -> Result<Vec<usize>, StanleyError> {
    let mut out = Vec::with_capacity(max_degree + 1);
    let mut mons_by_degree: Vec<Vec<Monomial>> = Vec::new();
    for d in 0..=max_degree {
        mons_by_degree.push(monomials(&pres.degrees, d));
    }
    for d in 0..=max_degree {
        let cols: HashMap<&Monomial, usize> = mons_by_degree[d].iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for r in pres.relations.iter().filter(|r| r.degree <= d) {
            for m in &mons_by_degree[d - r.degree] {
                let row: Vec<(usize, Rational)> = r
                    .poly
                    .0
                    .iter()
                    .map(|(t, c)| (cols[&mono_mul(t, m)], c.clone()))
                    .collect();
                let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
                for (c, v) in row {
                    *merged.entry(c).or_insert_with(Rational::zero) += v;
                }
                rows.push(merged.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
        }
        out.push(mons_by_degree[d].len() - sparse_rank(field, &rows)?);
    }
    Ok(out)
}

/// First relation (by index) that does not vanish under
/// `x -> Π_{v ∈ V(x)} v` in `k[V(z)]` (zero unless `x <= z`) for some
/// maximal `z`, with that `z`.
pub fn pi_evaluation_failure(p: &PointedPoset, pres: &RingPresentation) -> Option<(usize, String)> {
    let nv = p.vertices().len();
    for z in p.maximal_objects() {
        for (ri, r) in pres.relations.iter().enumerate() {
            let mut image: HashMap<Vec<u32>, Rational> = HashMap::new();
            for (m, c) in &r.poly.0 {
                let mut exps = vec![0u32; nv];
                let mut alive = true;
                for &(g, e) in m {
                    let x = pres.objects[g];
                    if !p.leq(x, z) {
                        alive = false;
                        break;
                    }
                    for (bit, slot) in exps.iter_mut().enumerate() {
                        if p.vertex_mask(x) >> bit & 1 == 1 {
                            *slot += e;
                        }
                    }
                }
                if alive {
                    *image.entry(exps).or_insert_with(Rational::zero) += c;
                }
            }
            if image.values().any(|c| !c.is_zero()) {
                return Some((ri, p.name(z).to_string()));
            }
        }
    }
    None
}

/// Comparison of presentation dimensions with the polyhedral tensor product
/// of the augmentations.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationCheck {
    pub presentation: Vec<usize>,
    pub limit: Vec<usize>,
    pub antichain_bound: usize,
    pub bound_raised: bool,
    /// The presentation was built on the reduction of a non-reduced input.
    pub via_reduction: bool,
    pub agree: bool,
}

/// Computes `quotient_dims` of the presentation and the limit dimensions,
/// raising the antichain bound while they disagree. A non-reduced poset is
/// presented through its reduction.
pub fn presentation_check(
    p: &PointedPoset,
    max_degree: usize,
    grading_scale: usize,
    field: FieldSpec,
) -> Result<PresentationCheck, StanleyError> {
    let aug = MorphismCollection::augmentations(&vertex_names(p), grading_scale, max_degree)?;
    let limit = polyhedral_tensor(p, &aug, 0, field)?.dims;
    let via_reduction = !classify(p).reduced;
    let reduced;
    let p = if via_reduction {
        reduced = reduce(p).poset;
        &reduced
    } else {
        p
    };
    let widest = p.len().saturating_sub(1).max(2);
    let mut bound = 3.min(widest).max(2);
    loop {
        let opts = SrOptions { antichain_bound: bound, grading_scale, degree_limit: Some(max_degree) };
        let pres = ideal_generators(p, &opts)?;
        let dims = quotient_dims(&pres, max_degree, field)?;
        if dims == limit || bound >= widest {
            return Ok(PresentationCheck {
                agree: dims == limit,
                presentation: dims,
                limit,
                antichain_bound: bound,
                bound_raised: bound > 3,
                via_reduction,
            });
        }
        bound += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FRoute {
    /// f-vector of the transform, computed directly.
    Transform,
    /// f-vector of the transform predicted from `f(P)` and `ν`.
    Formula,
}

/// Hilbert function of `k[P]` from the f-vector of `s(P)`; generators have
/// degree `grading_scale` per vertex.
pub fn hilbert_from_fvector(
    p: &PointedPoset,
    max_degree: usize,
    grading_scale: usize,
    route: FRoute,
) -> Result<Vec<u64>, StanleyError> {
    if grading_scale == 0 {
        return Err(StanleyError::BadScale);
    }
    let report = classify(p);
    if !report.polyhedral {
        return Err(StanleyError::NotApplicable("poset is not polyhedral".into()));
    }
    let f = match route {
        FRoute::Transform => f_vector(&simplicial_transform(p)?.transform).f,
        FRoute::Formula => {
            if !report.regular {
                return Err(StanleyError::NotApplicable("the formula route needs a regular poset".into()));
            }
            f_transform_predict(p, NuMode::Direct)?.f
        }
    };
    let coarse = crate::transform::hilbert_series_from_f(&f, max_degree / grading_scale);
    let mut out = vec![0; max_degree + 1];
    for (d, c) in coarse.into_iter().enumerate() {
        out[d * grading_scale] = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn fix_b() -> PointedPoset {
        PointedPoset::new(
            &["*", "a", "b", "c", "d"],
            "*",
            &[("*", "a"), ("*", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")],
        )
        .unwrap()
    }

    #[test]
    fn polynomial_ring_dims() {
        let pres = RingPresentation {
            generators: vec!["x".into(), "y".into()],
            objects: vec![1, 2],
            degrees: vec![1, 1],
            relations: vec![],
            grading_scale: 1,
            antichain_bound: 2,
        };
        assert_eq!(quotient_dims(&pres, 3, Q).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn two_points() {
        let p = PointedPoset::new(&["*", "v1", "v2"], "*", &[("*", "v1"), ("*", "v2")]).unwrap();
        let pres = ideal_generators(&p, &SrOptions::default()).unwrap();
        assert_eq!(pres.render_relations(), vec!["v1*v2"]);
        assert_eq!(quotient_dims(&pres, 3, Q).unwrap(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn parallel_edges() {
        let p = fix_b();
        let pres = ideal_generators(&p, &SrOptions::default()).unwrap();
        assert_eq!(pres.render_relations(), vec!["a*b - c - d", "c*d"]);
        assert_eq!(quotient_dims(&pres, 4, Q).unwrap(), vec![1, 2, 4, 6, 8]);
        assert!(pi_evaluation_failure(&p, &pres).is_none());
        let st = simplicial_ideal_generators(&p, 1).unwrap();
        assert_eq!(quotient_dims(&st, 4, Q).unwrap(), vec![1, 2, 4, 6, 8]);
        let check = presentation_check(&p, 3, 1, Q).unwrap();
        assert!(check.agree && !check.bound_raised);
        assert_eq!(hilbert_from_fvector(&p, 4, 1, FRoute::Transform).unwrap(), vec![1, 2, 4, 6, 8]);
        assert_eq!(hilbert_from_fvector(&p, 4, 2, FRoute::Formula).unwrap(), vec![1, 0, 2, 0, 4]);
    }

    #[test]
    fn rejects_non_polyhedral() {
        let p = PointedPoset::new(
            &["*", "1", "2", "3", "4", "5", "6"],
            "*",
            &[
                ("*", "1"), ("*", "2"), ("1", "3"), ("1", "4"), ("2", "3"),
                ("2", "4"), ("3", "5"), ("3", "6"), ("4", "5"), ("4", "6"),
            ],
        )
        .unwrap();
        assert!(matches!(ideal_generators(&p, &SrOptions::default()), Err(StanleyError::NotPolyhedral)));
        assert!(matches!(simplicial_ideal_generators(&p, 1), Err(StanleyError::NotSimplicial)));
    }

    #[test]
    fn scale_two_spreads_degrees() {
        let p = PointedPoset::new(&["*", "v1", "v2"], "*", &[("*", "v1"), ("*", "v2")]).unwrap();
        let pres = ideal_generators(&p, &SrOptions { grading_scale: 2, ..SrOptions::default() }).unwrap();
        assert_eq!(quotient_dims(&pres, 4, Q).unwrap(), vec![1, 0, 2, 0, 2]);
        let aug = MorphismCollection::augmentations(&["v1", "v2"], 2, 4).unwrap();
        assert_eq!(polyhedral_tensor(&p, &aug, 0, Q).unwrap().dims, vec![1, 0, 2, 0, 2]);
    }

    #[test]
    fn upper_bounds_with_larger_vertex_sets() {
        // {p1, p3} has minimal upper bounds p5 = {p1, p3} and p6 = {p1, p3, p4}
        let p = PointedPoset::new(
            &["*", "p1", "p3", "p4", "p5", "p6"],
            "*",
            &[
                ("*", "p1"), ("*", "p3"), ("*", "p4"), ("p1", "p5"),
                ("p1", "p6"), ("p3", "p5"), ("p3", "p6"), ("p4", "p6"),
            ],
        )
        .unwrap();
        let pres = ideal_generators(&p, &SrOptions { degree_limit: Some(4), ..SrOptions::default() }).unwrap();
        assert!(pi_evaluation_failure(&p, &pres).is_none());
        let check = presentation_check(&p, 4, 1, Q).unwrap();
        assert!(check.agree);
        assert_eq!(check.limit, vec![1, 3, 7, 12, 18]);
    }

    #[test]
    fn non_reduced_goes_through_reduction() {
        let p = PointedPoset::new(
            &["*", "p1", "p2", "p3", "p4"],
            "*",
            &[("*", "p1"), ("p1", "p2"), ("p1", "p3"), ("p3", "p4")],
        )
        .unwrap();
        let check = presentation_check(&p, 4, 1, Q).unwrap();
        assert!(check.via_reduction && check.agree);
        assert_eq!(check.limit, vec![1, 1, 1, 1, 1]);
    }
}
