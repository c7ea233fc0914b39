use rand::seq::SliceRandom;
use rand::Rng;

use super::PointedPoset;

#[derive(Clone, Copy, Debug)]
pub struct RandomPosetConfig {
    /// Number of objects including the base point.
    pub objects: usize,
    /// Probability of a cover from an earlier non-base object.
    pub edge_probability: f64,
    /// Probability that an object is placed directly above the base.
    pub vertex_probability: f64,
}

impl Default for RandomPosetConfig {
    fn default() -> Self {
        RandomPosetConfig { objects: 7, edge_probability: 0.35, vertex_probability: 0.3 }
    }
}

/// A random layered DAG over `*`, `p1`, `p2`, ...; objects without a chosen
/// predecessor sit directly above the base.
pub fn random_poset<R: Rng>(rng: &mut R, cfg: &RandomPosetConfig) -> PointedPoset {
    let n = cfg.objects.max(1);
    let mut names = vec!["*".to_string()];
    names.extend((1..n).map(|i| format!("p{i}")));
    let mut pairs = Vec::new();
    for i in 1..n {
        let mut preds: Vec<usize> = (1..i).filter(|_| rng.gen_bool(cfg.edge_probability)).collect();
        if i == 1 || rng.gen_bool(cfg.vertex_probability) {
            preds.clear();
        }
        if preds.is_empty() {
            pairs.push((0, i));
        } else {
            pairs.extend(preds.into_iter().map(|j| (j, i)));
        }
    }
    PointedPoset::from_indices(names, 0, &pairs).expect("layered DAG is a pointed poset")
}

/// Face poset of a random simplicial complex on `vertices` vertices whose
/// facets are `facets` random nonempty subsets of size at most `max_dim + 1`.
pub fn random_simplicial_complex_poset<R: Rng>(
    rng: &mut R,
    vertices: usize,
    facets: usize,
    max_dim: usize,
) -> PointedPoset {
    let mut faces: Vec<u64> = Vec::new();
    let all: Vec<usize> = (0..vertices).collect();
    for v in 0..vertices {
        faces.push(1 << v);
    }
    for _ in 0..facets {
        let k = rng.gen_range(1..=(max_dim + 1).min(vertices));
        let pick: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
        let mask = pick.iter().fold(0u64, |m, &v| m | 1 << v);
        let mut sub = mask;
        loop {
            if sub != 0 && !faces.contains(&sub) {
                faces.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    faces.sort_by_key(|m| (m.count_ones(), *m));
    face_poset(&faces, |m| {
        let vs: Vec<String> = (0..vertices).filter(|v| m >> v & 1 == 1).map(|v| format!("v{v}")).collect();
        vs.join("")
    })
}

/// The pointed poset of the given faces (bitmasks) under inclusion, with
/// the empty face as base point named `*`.
pub fn face_poset(faces: &[u64], name: impl Fn(u64) -> String) -> PointedPoset {
    let mut all = vec![0u64];
    all.extend(faces.iter().copied().filter(|&m| m != 0));
    let names: Vec<String> = all.iter().map(|&m| if m == 0 { "*".to_string() } else { name(m) }).collect();
    let mut pairs = Vec::new();
    for (i, &a) in all.iter().enumerate() {
        for (j, &b) in all.iter().enumerate() {
            if a != b && a & !b == 0 && (b & !a).count_ones() == 1 {
                pairs.push((i, j));
            }
        }
    }
    PointedPoset::from_indices(names, 0, &pairs).expect("face poset is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::classify;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let a = random_poset(&mut ChaCha8Rng::seed_from_u64(7), &RandomPosetConfig::default());
        let b = random_poset(&mut ChaCha8Rng::seed_from_u64(7), &RandomPosetConfig::default());
        assert_eq!(a, b);
    }

    #[test]
    fn complexes_are_simplicial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_simplicial_complex_poset(&mut rng, 4, 3, 2);
            assert!(classify(&p).simplicial);
        }
    }
}
