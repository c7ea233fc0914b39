use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use posetprod::limits::{cochain_complex, diagram_from_json, higher_limits};
use posetprod::linalg::FieldSpec;
use posetprod::poset::{classify, reduce, PointedPoset};
use posetprod::space::{
    build_space_diagram, cohomology_collection, homology, pair_from_json, standard_pair, SimplicialPair, Via,
    PAIR_NAMES,
};
use posetprod::stanley::{
    hilbert_from_fvector, ideal_generators, quotient_dims, simplicial_ideal_generators, FRoute, SrOptions,
};
use posetprod::suite::{run_criterion, SuiteOptions, CRITERIA};
use posetprod::tensor::{polyhedral_tensor, vertex_names, MorphismCollection};
use posetprod::transform::{check_embedding, f_transform_predict, f_vector, nu, simplicial_transform, NuMode};

use crate::report::{agreement_matrix, sha256_hex, RunReport};
use crate::{Command, Method};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

/// A computation failed; the message becomes the report's witness.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.0.insert(path.display().to_string(), sha256_hex(&bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))
    }

    fn poset(&mut self, path: &Path) -> Result<PointedPoset, CliError> {
        let text = self.read(path)?;
        PointedPoset::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

struct Outcome {
    results: Value,
    ok: bool,
    agreement: Option<BTreeMap<String, BTreeMap<String, bool>>>,
}

impl Outcome {
    fn plain(results: Value, ok: bool) -> Self {
        Outcome { results, ok, agreement: None }
    }
}

pub fn run(command: &Command) -> Result<RunReport, CliError> {
    let mut inputs = Inputs(BTreeMap::new());
    let (name, outcome) = match command {
        Command::Check { poset } => ("check", with_poset(&mut inputs, poset, check)?),
        Command::Reduce { poset } => ("reduce", with_poset(&mut inputs, poset, reduce_cmd)?),
        Command::Stransform { poset } => ("stransform", with_poset(&mut inputs, poset, stransform)?),
        Command::Fvector { poset } => ("fvector", with_poset(&mut inputs, poset, fvector)?),
        Command::Hilbert { poset, max_degree, method, field, grading } => {
            if *grading == 0 {
                return Err(CliError::Usage("--grading must be positive".into()));
            }
            let p = inputs.poset(poset)?;
            ("hilbert", hilbert(&p, *max_degree, method, *field, *grading))
        }
        Command::Limits { diagram, max_dim, field } => {
            let text = inputs.read(diagram)?;
            let dir = diagram.parent().map(Path::to_path_buf);
            if let Some(d) = &dir {
                // a poset referenced by path is an input too
                if let Ok(Value::Object(m)) = serde_json::from_str::<Value>(&text) {
                    if let Some(Value::String(rel)) = m.get("poset") {
                        let _ = inputs.read(&d.join(rel));
                    }
                }
            }
            ("limits", failing(limits(&text, dir.as_deref(), *max_dim, *field)))
        }
        Command::Tensor { poset, collection, max_degree, max_dim, field, seed } => {
            let p = inputs.poset(poset)?;
            let a = parse_collection(&p, collection, *max_degree, *seed)?;
            ("tensor", failing(tensor(&p, &a, *max_dim, *field)))
        }
        Command::Homology { poset, pair, per_vertex, via, max_dim, field } => {
            let p = inputs.poset(poset)?;
            let vias = via
                .iter()
                .map(|v| v.parse::<Via>().map(|x| (v.clone(), x)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let pairs = load_pairs(&mut inputs, &p, pair, per_vertex, max_dim + 1)?;
            ("homology", failing(homology_cmd(&p, &pairs, &vias, *max_dim, *field)))
        }
        Command::Suite { seed, only } => {
            let ids: Vec<usize> = if only.is_empty() { (1..=CRITERIA.len()).collect() } else { only.clone() };
            if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA.len()) {
                return Err(CliError::Usage(format!("no criterion {bad}")));
            }
            ("suite", suite(*seed, &ids))
        }
    };
    Ok(RunReport {
        command: name.to_string(),
        inputs: inputs.0,
        results: outcome.results,
        agreement: outcome.agreement,
        ok: outcome.ok,
        wall_time_seconds: None,
    })
}

fn with_poset(
    inputs: &mut Inputs,
    path: &Path,
    f: impl Fn(&PointedPoset) -> Result<Outcome, Failure>,
) -> Result<Outcome, CliError> {
    let p = inputs.poset(path)?;
    Ok(failing(f(&p)))
}

fn failing(r: Result<Outcome, Failure>) -> Outcome {
    r.unwrap_or_else(|Failure(msg)| Outcome::plain(json!({ "error": msg }), false))
}

fn check(p: &PointedPoset) -> Result<Outcome, Failure> {
    let r = classify(p);
    let mut v = serde_json::to_value(&r)?;
    v["objects"] = json!(p.len());
    v["vertices"] = json!(vertex_names(p));
    Ok(Outcome::plain(v, true))
}

fn reduce_cmd(p: &PointedPoset) -> Result<Outcome, Failure> {
    let r = reduce(p);
    let projection: BTreeMap<&str, &str> =
        (0..p.len()).map(|x| (p.name(x), r.poset.name(r.projection[x]))).collect();
    Ok(Outcome::plain(
        json!({ "steps": r.steps, "poset": r.poset.to_raw(), "projection": projection, "already_reduced": r.steps.is_empty() }),
        true,
    ))
}

fn stransform(p: &PointedPoset) -> Result<Outcome, Failure> {
    let t = simplicial_transform(p)?;
    let s = &t.transform;
    let classes: Vec<Value> = t
        .classes
        .iter()
        .enumerate()
        .map(|(i, &(rep, mask))| {
            let verts: Vec<&str> = p.mask_to_vertices(mask).iter().map(|&v| p.name(v)).collect();
            json!({ "name": s.name(i), "representative": p.name(rep), "vertices": verts })
        })
        .collect();
    let embedding = check_embedding(p)?;
    let simplicial = classify(s).simplicial;
    let ok = simplicial && (!embedding.precondition || embedding.is_ok());
    Ok(Outcome::plain(
        json!({ "transform": s.to_raw(), "classes": classes, "simplicial": simplicial, "embedding": embedding }),
        ok,
    ))
}

fn fvector(p: &PointedPoset) -> Result<Outcome, Failure> {
    let report = classify(p);
    let fp = f_vector(p);
    let mut results = json!({ "f": fp.f, "norm": fp.norm });
    let mut methods = BTreeMap::new();
    if report.polyhedral {
        let direct = f_vector(&simplicial_transform(p)?.transform).f;
        methods.insert("transform".to_string(), json!(direct));
    }
    if report.regular {
        for (label, mode) in [("formula-direct", NuMode::Direct), ("formula-recursive", NuMode::Recursive)] {
            methods.insert(label.to_string(), json!(f_transform_predict(p, mode)?.f));
        }
        let mut table = BTreeMap::new();
        for k in 0..fp.f.len() {
            if fp.f[k] == 0 {
                continue;
            }
            for i in 0..k {
                table.insert(format!("{i},{k}"), nu(p, i, k, NuMode::Direct)?);
            }
        }
        results["nu"] = json!(table);
    }
    let agreement = (methods.len() > 1).then(|| agreement_matrix(&methods));
    let ok = agreement.as_ref().is_none_or(|m| m.values().all(|r| r.values().all(|&x| x)));
    results["transform_f"] = json!(methods);
    Ok(Outcome { results, ok, agreement })
}

fn hilbert(p: &PointedPoset, d: usize, methods: &[Method], field: FieldSpec, grading: usize) -> Outcome {
    let mut values = BTreeMap::new();
    let mut errors = BTreeMap::new();
    for m in methods {
        let (label, r): (&str, Result<Vec<usize>, Failure>) = match m {
            Method::Presentation => ("presentation", presentation_dims(p, d, field, grading)),
            Method::Limit => ("limit", limit_dims(p, d, field, grading)),
            Method::Fvector => (
                "fvector",
                hilbert_from_fvector(p, d, grading, FRoute::Transform)
                    .map(|v| v.into_iter().map(|x| x as usize).collect())
                    .map_err(Failure::from),
            ),
            Method::Stanley => (
                "stanley",
                simplicial_ideal_generators(p, grading)
                    .and_then(|pres| quotient_dims(&pres, d, field))
                    .map_err(Failure::from),
            ),
        };
        match r {
            Ok(v) => {
                values.insert(label.to_string(), json!(v));
            }
            Err(Failure(e)) => {
                errors.insert(label.to_string(), e);
            }
        }
    }
    let agreement = (values.len() > 1).then(|| agreement_matrix(&values));
    let all_agree = agreement.as_ref().is_none_or(|m| m.values().all(|r| r.values().all(|&x| x)));
    let mut results = json!({ "max_degree": d, "field": field.to_string(), "grading": grading, "dims": values });
    if !errors.is_empty() {
        results["errors"] = json!(errors);
    }
    Outcome { results, ok: errors.is_empty() && all_agree, agreement }
}

fn presentation_dims(p: &PointedPoset, d: usize, field: FieldSpec, grading: usize) -> Result<Vec<usize>, Failure> {
    let q = if classify(p).reduced { p.clone() } else { reduce(p).poset };
    let opts = SrOptions { antichain_bound: q.len().max(2), grading_scale: grading, degree_limit: Some(d) };
    Ok(quotient_dims(&ideal_generators(&q, &opts)?, d, field)?)
}

fn limit_dims(p: &PointedPoset, d: usize, field: FieldSpec, grading: usize) -> Result<Vec<usize>, Failure> {
    let a = MorphismCollection::augmentations(&vertex_names(p), grading, d)?;
    Ok(polyhedral_tensor(p, &a, 0, field)?.dims)
}

fn limits(text: &str, dir: Option<&Path>, max_dim: usize, field: FieldSpec) -> Result<Outcome, Failure> {
    let f = diagram_from_json(text, dir)?;
    if let Some(v) = f.check(field)? {
        return Ok(Outcome::plain(json!({ "not_a_functor": format!("{v:?}") }), false));
    }
    let lim = higher_limits(&f, max_dim, field)?;
    let c = cochain_complex(&f, max_dim);
    let ranks = (0..=max_dim)
        .map(|n| (0..=f.max_degree()).map(|d| c.rank(field, n, d)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome::plain(
        json!({ "field": field.to_string(), "lim": lim.dims, "acyclic": lim.acyclic(), "cochain_dims": c.dims, "differential_ranks": ranks }),
        true,
    ))
}

fn parse_collection(p: &PointedPoset, spec: &str, d: usize, seed: u64) -> Result<MorphismCollection, CliError> {
    let names = vertex_names(p);
    let r = match spec.split_once(':') {
        Some(("aug", deg)) => {
            let g: usize = deg.parse().map_err(|_| CliError::Usage(format!("bad generator degree `{deg}`")))?;
            MorphismCollection::augmentations(&names, g, d)
        }
        None if spec == "circle" => MorphismCollection::circle(&names, d),
        None if spec == "random" => MorphismCollection::random_surjective(&mut ChaCha8Rng::seed_from_u64(seed), &names, d),
        _ => return Err(CliError::Usage(format!("unknown collection `{spec}` (aug:<d>, circle, random)"))),
    };
    r.map_err(|e| CliError::Usage(e.to_string()))
}

fn tensor(p: &PointedPoset, a: &MorphismCollection, max_dim: usize, field: FieldSpec) -> Result<Outcome, Failure> {
    let t = polyhedral_tensor(p, a, max_dim, field)?;
    let acyclic = t.higher[1..].iter().flatten().all(|&x| x == 0);
    Ok(Outcome::plain(
        json!({ "field": field.to_string(), "dims": t.dims, "higher": t.higher, "acyclic": acyclic, "lower_saturated": classify(p).lower_saturated }),
        true,
    ))
}

fn pair_by_spec(inputs: &mut Inputs, spec: &str, top: usize) -> Result<SimplicialPair, CliError> {
    if PAIR_NAMES.contains(&spec) {
        return standard_pair(spec, top).map_err(|e| CliError::Usage(e.to_string()));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!("`{spec}` is neither a built-in pair ({}) nor a file", PAIR_NAMES.join(", "))));
    }
    let text = inputs.read(&path)?;
    pair_from_json(spec, &text, top).map_err(|e| CliError::Usage(format!("{spec}: {e}")))
}

fn load_pairs(
    inputs: &mut Inputs,
    p: &PointedPoset,
    default: &str,
    per_vertex: &[String],
    top: usize,
) -> Result<BTreeMap<String, SimplicialPair>, CliError> {
    let base = pair_by_spec(inputs, default, top)?;
    let mut pairs: BTreeMap<String, SimplicialPair> = vertex_names(p).into_iter().map(|v| (v, base.clone())).collect();
    for item in per_vertex {
        let (v, spec) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("expected <vertex>=<pair>, got `{item}`")))?;
        if !pairs.contains_key(v) {
            return Err(CliError::Usage(format!("`{v}` is not a vertex")));
        }
        let pair = pair_by_spec(inputs, spec, top)?;
        pairs.insert(v.to_string(), pair);
    }
    Ok(pairs)
}

fn homology_cmd(
    p: &PointedPoset,
    pairs: &BTreeMap<String, SimplicialPair>,
    vias: &[(String, Via)],
    max_dim: usize,
    field: FieldSpec,
) -> Result<Outcome, Failure> {
    let d = build_space_diagram(p, pairs, None)?;
    let mut values = BTreeMap::new();
    for (label, via) in vias {
        let space = match via {
            Via::Colimit => d.colimit(),
            Via::Hocolim => d.hocolim(),
        };
        values.insert(label.clone(), json!(homology(&space, field, max_dim)?));
    }
    let a = cohomology_collection(pairs, field, max_dim)?;
    let sectioned = a.names().iter().all(|n| a.get(n).is_some_and(|m| m.section.is_some()));
    if sectioned {
        values.insert("tensor".to_string(), json!(polyhedral_tensor(p, &a, 0, field)?.dims));
    }
    let agreement = (values.len() > 1).then(|| agreement_matrix(&values));
    let ok = agreement.as_ref().is_none_or(|m| m.values().all(|r| r.values().all(|&x| x)));
    let pair_names: BTreeMap<&String, &str> = pairs.iter().map(|(v, pr)| (v, pr.name.as_str())).collect();
    Ok(Outcome {
        results: json!({ "field": field.to_string(), "max_dim": max_dim, "pairs": pair_names, "dims": values, "support": d.support_check() }),
        ok,
        agreement,
    })
}

fn suite(seed: u64, ids: &[usize]) -> Outcome {
    let opts = SuiteOptions { seed, ..SuiteOptions::default() };
    let results: Vec<_> = ids.iter().map(|&i| run_criterion(i, &opts)).collect();
    let ok = results.iter().all(|r| r.passed);
    let summary: BTreeMap<String, Value> = results
        .iter()
        .map(|r| (format!("{:02} {}", r.id, r.name), json!({ "passed": r.passed, "details": r.details })))
        .collect();
    Outcome::plain(json!({ "seed": seed, "criteria": summary }), ok)
}
