use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::Deserialize;

use super::sset::{CoreRef, SimplicialSet};
use super::SpaceError;

/// A simplicial set `X` with a sub-simplicial set `A`.
#[derive(Clone, Debug)]
pub struct SimplicialPair {
    pub name: String,
    pub total: SimplicialSet,
    /// Membership of `A` per dimension.
    pub sub: Vec<FixedBitSet>,
}

impl SimplicialPair {
    pub fn new(name: impl Into<String>, total: SimplicialSet, sub: Vec<FixedBitSet>) -> Result<Self, SpaceError> {
        if sub.len() != total.top() + 1 || !total.is_subcomplex(&sub) {
            return Err(SpaceError::NotSubcomplex);
        }
        Ok(SimplicialPair { name: name.into(), total, sub })
    }

    pub fn top(&self) -> usize {
        self.total.top()
    }

    /// `A` materialized, with its inclusion into `X`.
    pub fn sub_set(&self) -> (SimplicialSet, Vec<Vec<usize>>) {
        self.total.restrict(&self.sub)
    }
}

/// Names accepted by [`standard_pair`].
pub const PAIR_NAMES: &[&str] = &["circle-point", "disk2-circle", "interval-endpoints", "point-point"];

fn v(i: usize) -> CoreRef {
    CoreRef::nondegenerate(0, i)
}

fn e(i: usize) -> CoreRef {
    CoreRef::nondegenerate(1, i)
}

/// One of the built-in pairs, truncated at `top`.
pub fn standard_pair(name: &str, top: usize) -> Result<SimplicialPair, SpaceError> {
    // (cores, generators of A as (dim, core))
    let (cores, gens): (Vec<Vec<Vec<CoreRef>>>, Vec<(usize, usize)>) = match name {
        "circle-point" => (vec![vec![vec![]], vec![vec![v(0), v(0)]]], vec![(0, 0)]),
        // cone on the one-vertex circle; apex is vertex 1
        "disk2-circle" => (
            vec![vec![vec![], vec![]], vec![vec![v(0), v(0)], vec![v(1), v(0)]], vec![vec![e(1), e(1), e(0)]]],
            vec![(1, 0)],
        ),
        "interval-endpoints" => (vec![vec![vec![], vec![]], vec![vec![v(1), v(0)]]], vec![(0, 0), (0, 1)]),
        "point-point" => (vec![vec![vec![]]], vec![(0, 0)]),
        other => return Err(SpaceError::UnknownPair(other.to_string())),
    };
    let total = SimplicialSet::from_cores(&cores, top)?;
    let gens: Vec<(usize, usize)> = gens.into_iter().map(|(d, c)| (d, core_index(&total, d, c))).collect();
    let sub = total.closure(&gens);
    SimplicialPair::new(name, total, sub)
}

/// Index of the `c`-th nondegenerate simplex of dimension `d`.
fn core_index(s: &SimplicialSet, d: usize, c: usize) -> usize {
    s.nondegenerate(d)[c]
}

/// The one-vertex model of `S^3`: a single 3-simplex with totally
/// degenerate boundary.
pub fn sphere3(top: usize) -> SimplicialSet {
    let collapsed = CoreRef::degenerate(0, 0, &[1, 0]).expect("valid word");
    SimplicialSet::from_cores(&[vec![vec![]], vec![], vec![], vec![vec![collapsed; 4]]], top)
        .expect("sphere model is valid")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FaceSpec {
    Name(String),
    Degenerate { of: String, word: Vec<usize> },
}

#[derive(Deserialize)]
struct SetFile {
    dims: BTreeMap<usize, Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, Vec<FaceSpec>>,
    #[serde(default)]
    degeneracies: BTreeMap<String, FaceSpec>,
    /// Generators of `A` in pair files.
    sub: Option<Vec<String>>,
}

fn resolve(
    spec: &FaceSpec,
    cores: &HashMap<String, (usize, usize)>,
    aliases: &BTreeMap<String, FaceSpec>,
    depth: usize,
) -> Result<CoreRef, SpaceError> {
    if depth > aliases.len() + 1 {
        return Err(SpaceError::Malformed("cyclic degeneracy aliases".into()));
    }
    match spec {
        FaceSpec::Name(n) => {
            if let Some(&(d, c)) = cores.get(n) {
                Ok(CoreRef::nondegenerate(d, c))
            } else if let Some(a) = aliases.get(n) {
                resolve(a, cores, aliases, depth + 1)
            } else {
                Err(SpaceError::Malformed(format!("unknown simplex `{n}`")))
            }
        }
        FaceSpec::Degenerate { of, word } => {
            let base = resolve(&FaceSpec::Name(of.clone()), cores, aliases, depth + 1)?;
            let inner = CoreRef::degenerate(base.surjection.len() - 1, 0, word)?;
            Ok(CoreRef {
                dim: base.dim,
                core: base.core,
                surjection: inner.surjection.iter().map(|&i| base.surjection[i]).collect(),
            })
        }
    }
}

fn build_set(file: &SetFile, top: usize) -> Result<(SimplicialSet, HashMap<String, (usize, usize)>), SpaceError> {
    let max_dim = file.dims.keys().copied().max().unwrap_or(0);
    let mut index = HashMap::new();
    for (&d, names) in &file.dims {
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), (d, i)).is_some() {
                return Err(SpaceError::Malformed(format!("duplicate simplex `{n}`")));
            }
        }
    }
    let mut cores: Vec<Vec<Vec<CoreRef>>> = vec![Vec::new(); max_dim + 1];
    for d in 0..=max_dim {
        for n in file.dims.get(&d).map(Vec::as_slice).unwrap_or(&[]) {
            let faces = match file.faces.get(n) {
                Some(fs) => fs.iter().map(|f| resolve(f, &index, &file.degeneracies, 0)).collect::<Result<_, _>>()?,
                None if d == 0 => Vec::new(),
                None => return Err(SpaceError::Malformed(format!("no faces given for `{n}`"))),
            };
            cores[d].push(faces);
        }
    }
    let set = SimplicialSet::from_cores(&cores, top)?;
    Ok((set, index))
}

/// Parses a simplicial set file; see the README for the format.
pub fn simplicial_set_from_json(text: &str, top: usize) -> Result<SimplicialSet, SpaceError> {
    let file: SetFile = serde_json::from_str(text).map_err(|e| SpaceError::Malformed(e.to_string()))?;
    Ok(build_set(&file, top)?.0)
}

/// Parses a pair file: a simplicial set plus `"sub"`, the nondegenerate
/// simplices generating `A`.
pub fn pair_from_json(name: &str, text: &str, top: usize) -> Result<SimplicialPair, SpaceError> {
    let file: SetFile = serde_json::from_str(text).map_err(|e| SpaceError::Malformed(e.to_string()))?;
    let (total, index) = build_set(&file, top)?;
    let Some(sub) = &file.sub else {
        return Err(SpaceError::Malformed("pair file needs `sub`".into()));
    };
    let gens = sub
        .iter()
        .map(|n| {
            index
                .get(n)
                .map(|&(d, c)| (d, core_index(&total, d, c)))
                .ok_or_else(|| SpaceError::Malformed(format!("unknown simplex `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sub = total.closure(&gens);
    SimplicialPair::new(name, total, sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_pairs_are_valid() {
        for name in PAIR_NAMES {
            let p = standard_pair(name, 3).unwrap();
            assert!(p.total.check_identities().is_ok());
            let (a, incl) = p.sub_set();
            assert!(a.check_identities().is_ok());
            assert_eq!(incl[0].len(), a.count(0));
        }
        let d = standard_pair("disk2-circle", 3).unwrap();
        assert_eq!(d.total.nondegenerate(2).len(), 1);
        assert_eq!(d.sub_set().0.nondegenerate(1).len(), 1);
        assert!(standard_pair("torus", 3).is_err());
    }

    #[test]
    fn file_format_matches_library() {
        let text = r#"{
            "dims": {"0": ["b", "c"], "1": ["e", "f"], "2": ["t"]},
            "faces": {"e": ["b", "b"], "f": ["c", "b"], "t": ["f", "f", "e"]},
            "sub": ["e"]
        }"#;
        let p = pair_from_json("disk", text, 3).unwrap();
        let q = standard_pair("disk2-circle", 3).unwrap();
        assert_eq!(p.total, q.total);
        assert_eq!(p.sub, q.sub);
    }

    #[test]
    fn degenerate_faces_in_files() {
        let text = r#"{
            "dims": {"0": ["v"], "3": ["w"]},
            "degeneracies": {"vv": {"of": "v", "word": [1, 0]}},
            "faces": {"w": ["vv", "vv", {"of": "v", "word": [0, 0]}, "vv"]}
        }"#;
        assert_eq!(simplicial_set_from_json(text, 4).unwrap(), sphere3(4));
    }
}
