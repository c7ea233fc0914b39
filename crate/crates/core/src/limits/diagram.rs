use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::linalg::{FieldSpec, GradedMap, GradedSpace};
use crate::poset::{Direction, PointedPoset};

use super::LimitsError;

/// A contravariant diagram `P^op -> graded spaces`. Cover `(x, y)` carries
/// `F(y) -> F(x)`.
#[derive(Clone, Debug)]
pub struct PosetDiagram {
    poset: PointedPoset,
    values: Vec<GradedSpace>,
    maps: BTreeMap<(usize, usize), GradedMap>,
    max_degree: usize,
}

/// A covariant diagram with the same values; cover `(x, y)` carries
/// `S(x) -> S(y)`.
#[derive(Clone, Debug)]
pub struct DiagramSection {
    maps: BTreeMap<(usize, usize), GradedMap>,
}

/// Two cover paths from `x` up to `y` whose composites differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialityViolation {
    pub lower: String,
    pub first_step: String,
    pub other_step: String,
    pub upper: String,
}

fn check_cover(p: &PointedPoset, x: usize, y: usize) -> Result<(), LimitsError> {
    if p.covers().binary_search(&(x, y)).is_err() {
        return Err(LimitsError::NotACover(p.name(x).to_string(), p.name(y).to_string()));
    }
    Ok(())
}

impl PosetDiagram {
    /// Builds a diagram; covers without a map get the zero map.
    pub fn new(
        poset: PointedPoset,
        values: Vec<GradedSpace>,
        mut maps: BTreeMap<(usize, usize), GradedMap>,
    ) -> Result<Self, LimitsError> {
        if values.len() != poset.len() {
            return Err(LimitsError::ValueCount { expected: poset.len(), found: values.len() });
        }
        let max_degree = values[0].max_degree();
        if let Some(v) = values.iter().find(|v| v.max_degree() != max_degree) {
            return Err(LimitsError::Linalg(crate::linalg::LinalgError::MixedTruncation(max_degree, v.max_degree())));
        }
        for (&(x, y), f) in &maps {
            check_cover(&poset, x, y)?;
            if f.source().dims() != values[y].dims() || f.target().dims() != values[x].dims() {
                return Err(LimitsError::MapShape(poset.name(x).to_string(), poset.name(y).to_string()));
            }
        }
        for &(x, y) in poset.covers() {
            maps.entry((x, y)).or_insert_with(|| GradedMap::zero(&values[y], &values[x]));
        }
        Ok(PosetDiagram { poset, values, maps, max_degree })
    }

    /// Every value `space`, every map the identity.
    pub fn constant(poset: PointedPoset, space: &GradedSpace) -> Self {
        let values = vec![space.clone(); poset.len()];
        let maps = poset.covers().iter().map(|&c| (c, GradedMap::identity(space))).collect();
        PosetDiagram::new(poset, values, maps).expect("constant diagram is well formed")
    }

    pub fn poset(&self) -> &PointedPoset {
        &self.poset
    }

    pub fn value(&self, x: usize) -> &GradedSpace {
        &self.values[x]
    }

    pub fn values(&self) -> &[GradedSpace] {
        &self.values
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn cover_map(&self, x: usize, y: usize) -> &GradedMap {
        &self.maps[&(x, y)]
    }

    /// `F(x <= y): F(y) -> F(x)` for every comparable pair, along the first
    /// cover path.
    pub fn composites(&self) -> HashMap<(usize, usize), GradedMap> {
        composites(&self.poset, &self.values, |x, x1, rest: &GradedMap| {
            self.maps[&(x, x1)].compose(rest)
        })
    }

    /// Verifies that all cover paths between two objects compose to the same
    /// map over `field`.
    pub fn check(&self, field: FieldSpec) -> Result<Option<FunctorialityViolation>, LimitsError> {
        let comp = self.composites();
        let p = &self.poset;
        for &x in p.topological_order().iter().rev() {
            let ups: Vec<usize> = p.covers().iter().filter(|c| c.0 == x).map(|c| c.1).collect();
            for y in p.up_set(x) {
                let steps: Vec<usize> = ups.iter().copied().filter(|&u| p.leq(u, y)).collect();
                let Some((&first, rest)) = steps.split_first() else { continue };
                for &other in rest {
                    let via = self.maps[&(x, other)].compose(&comp[&(other, y)]);
                    if !via.equals_in(field, &comp[&(x, y)])? {
                        return Ok(Some(FunctorialityViolation {
                            lower: p.name(x).to_string(),
                            first_step: p.name(first).to_string(),
                            other_step: p.name(other).to_string(),
                            upper: p.name(y).to_string(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The restriction to `P_{>=x}`.
    pub fn restrict_up(&self, x: usize) -> PosetDiagram {
        let (q, old) = self.poset.sub_poset(x, Direction::Up);
        let values = old.iter().map(|&o| self.values[o].clone()).collect();
        let maps = q
            .covers()
            .iter()
            .map(|&(a, b)| ((a, b), self.maps[&(old[a], old[b])].clone()))
            .collect();
        PosetDiagram::new(q, values, maps).expect("restriction is well formed")
    }
}

impl DiagramSection {
    pub fn new(
        diagram: &PosetDiagram,
        maps: BTreeMap<(usize, usize), GradedMap>,
    ) -> Result<Self, LimitsError> {
        let p = diagram.poset();
        for &(x, y) in p.covers() {
            let Some(s) = maps.get(&(x, y)) else {
                return Err(LimitsError::MissingSectionMap(p.name(x).to_string(), p.name(y).to_string()));
            };
            if s.source().dims() != diagram.value(x).dims() || s.target().dims() != diagram.value(y).dims() {
                return Err(LimitsError::MapShape(p.name(x).to_string(), p.name(y).to_string()));
            }
        }
        for &(x, y) in maps.keys() {
            check_cover(p, x, y)?;
        }
        Ok(DiagramSection { maps })
    }

    pub fn cover_map(&self, x: usize, y: usize) -> &GradedMap {
        &self.maps[&(x, y)]
    }

    /// `S(x <= y): S(x) -> S(y)` for every comparable pair.
    pub fn composites(&self, diagram: &PosetDiagram) -> HashMap<(usize, usize), GradedMap> {
        composites(diagram.poset(), diagram.values(), |x, x1, rest: &GradedMap| {
            rest.compose(&self.maps[&(x, x1)])
        })
    }
}

/// Composites along the first cover path, built from the top down; `step`
/// combines the cover `(x, x1)` with the composite for `(x1, y)`.
fn composites(
    p: &PointedPoset,
    values: &[GradedSpace],
    step: impl Fn(usize, usize, &GradedMap) -> GradedMap,
) -> HashMap<(usize, usize), GradedMap> {
    let mut out: HashMap<(usize, usize), GradedMap> = HashMap::new();
    for &x in p.topological_order().iter().rev() {
        out.insert((x, x), GradedMap::identity(&values[x]));
        let ups: Vec<usize> = p.covers().iter().filter(|c| c.0 == x).map(|c| c.1).collect();
        for y in p.up_set(x) {
            if y == x {
                continue;
            }
            let x1 = *ups.iter().find(|&&u| p.leq(u, y)).expect("a cover towards y");
            let m = step(x, x1, &out[&(x1, y)]);
            out.insert((x, y), m);
        }
    }
    out
}

/// `A_x`: `value` on `P_{>=x}` with identities there, zero elsewhere.
pub fn indicator_diagram(p: &PointedPoset, x: usize, value: &GradedSpace) -> PosetDiagram {
    let zero = GradedSpace::zero(value.max_degree());
    let values: Vec<GradedSpace> = (0..p.len())
        .map(|y| if p.leq(x, y) { value.clone() } else { zero.clone() })
        .collect();
    let maps = p
        .covers()
        .iter()
        .filter(|&&(a, _)| p.leq(x, a))
        .map(|&c| (c, GradedMap::identity(value)))
        .collect();
    PosetDiagram::new(p.clone(), values, maps).expect("indicator diagram is well formed")
}
