use serde::Serialize;

use crate::linalg::FieldSpec;

use super::{DiagramSection, LimitsError, PosetDiagram};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LowerFactoring {
    Ok,
    /// `F(x <= y) ∘ S(x <= y)` is not the identity.
    NotASection { lower: String, upper: String },
    /// No common lower bound of `x, y` makes both squares under `z` commute.
    NoFactorization { x: String, y: String, z: String },
}

impl LowerFactoring {
    pub fn is_ok(&self) -> bool {
        matches!(self, LowerFactoring::Ok)
    }
}

/// Checks the section axiom on covers and, for every pair `x, y` (by index)
/// and every common upper bound `z`, searches the common lower bounds `w`
/// for one with `F(y,z) S(x,z) = S(w,y) F(w,x)` and
/// `F(x,z) S(y,z) = S(w,x) F(w,y)`.
pub fn verify_lower_factoring(
    f: &PosetDiagram,
    s: &DiagramSection,
    field: FieldSpec,
) -> Result<LowerFactoring, LimitsError> {
    let p = f.poset();
    for &(x, y) in p.covers() {
        if !f.cover_map(x, y).compose(s.cover_map(x, y)).is_identity_in(field)? {
            return Ok(LowerFactoring::NotASection { lower: p.name(x).to_string(), upper: p.name(y).to_string() });
        }
    }
    let fc = f.composites();
    let sc = s.composites(f);
    for x in 0..p.len() {
        for y in x + 1..p.len() {
            let lower = p.lower_bounds(&[x, y]);
            for z in p.upper_bounds(&[x, y]) {
                let left = fc[&(y, z)].compose(&sc[&(x, z)]);
                let right = fc[&(x, z)].compose(&sc[&(y, z)]);
                let mut found = false;
                for &w in &lower {
                    if left.equals_in(field, &sc[&(w, y)].compose(&fc[&(w, x)]))?
                        && right.equals_in(field, &sc[&(w, x)].compose(&fc[&(w, y)]))?
                    {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(LowerFactoring::NoFactorization {
                        x: p.name(x).to_string(),
                        y: p.name(y).to_string(),
                        z: p.name(z).to_string(),
                    });
                }
            }
        }
    }
    Ok(LowerFactoring::Ok)
}
