//! Seeded random instances and matchings.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, so a seed always
//! reproduces the same bytes within a build.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::model::{Matching, RoommatesInstance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Complete,
    /// Each pair is an edge independently with this probability.
    Gnp(f64),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws the edge set per `model`, then an independent uniformly random
/// strict ranking at every node.
pub fn generate(n: usize, model: Model, seed: u64) -> Result<RoommatesInstance> {
    generate_with(n, model, &mut rng(seed))
}

pub fn generate_with<R: Rng>(n: usize, model: Model, rng: &mut R) -> Result<RoommatesInstance> {
    if n == 0 {
        return Err(invalid("instance needs at least one node"));
    }
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    match model {
        Model::Complete => {
            for (v, list) in lists.iter_mut().enumerate() {
                list.extend((0..n).filter(|&w| w != v));
            }
        }
        Model::Gnp(p) => {
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid(format!("edge probability {p} is not in (0, 1]")));
            }
            for (v, w) in gnp_edges(n, p, rng) {
                lists[v].push(w);
                lists[w].push(v);
            }
        }
    }
    for list in &mut lists {
        list.sort_unstable();
        list.shuffle(rng);
    }
    RoommatesInstance::new(lists)
}

/// Pairs `(v, w)` with `w < v` of G(n, p), by geometric skipping over the
/// lower triangle (Batagelj and Brandes), in expected O(n + m) time.
fn gnp_edges<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (v, w)));
        }
        return edges;
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize));
        }
    }
    edges
}

/// Nodes in id order each take their most preferred neighbor that is still
/// free.
pub fn greedy_matching(inst: &RoommatesInstance) -> Matching {
    let n = inst.node_count();
    let mut mate = vec![None; n];
    for v in 0..n {
        if mate[v].is_some() {
            continue;
        }
        if let Some(&w) = inst.preferences(v).iter().find(|&&w| mate[w].is_none()) {
            mate[v] = Some(w);
            mate[w] = Some(v);
        }
    }
    Matching::from_mates(inst, mate).expect("greedy pairs are edges")
}

/// Adds the edges in random order whenever both ends are free.
pub fn random_maximal_matching<R: Rng>(inst: &RoommatesInstance, rng: &mut R) -> Matching {
    let mut edges: Vec<(usize, usize)> = inst.edges().collect();
    edges.shuffle(rng);
    let mut mate = vec![None; inst.node_count()];
    for (a, b) in edges {
        if mate[a].is_none() && mate[b].is_none() {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
    }
    Matching::from_mates(inst, mate).expect("chosen pairs are edges")
}

/// A uniformly random matching-sized subset: random maximal, then each pair
/// kept with probability one half. Useful for exercising unmatched nodes.
pub fn random_matching<R: Rng>(inst: &RoommatesInstance, rng: &mut R) -> Matching {
    let maximal = random_maximal_matching(inst, rng);
    let kept: Vec<(usize, usize)> = maximal.pairs().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    Matching::from_pairs(inst, &kept).expect("subset of a matching")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = generate(30, Model::Gnp(0.3), 7).unwrap();
        let b = generate(30, Model::Gnp(0.3), 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate(30, Model::Gnp(0.3), 8).unwrap());
    }

    #[test]
    fn complete_and_single() {
        let k = generate(6, Model::Complete, 1).unwrap();
        assert_eq!(k.edge_count(), 15);
        assert_eq!(generate(1, Model::Complete, 3).unwrap().edge_count(), 0);
        assert!(generate(0, Model::Complete, 3).is_err());
        assert!(generate(5, Model::Gnp(0.0), 3).is_err());
    }

    #[test]
    fn gnp_density_is_plausible() {
        let inst = generate(400, Model::Gnp(0.05), 11).unwrap();
        let expected = 0.05 * 400.0 * 399.0 / 2.0;
        let m = inst.edge_count() as f64;
        assert!((m - expected).abs() < 0.1 * expected, "{m} vs {expected}");
    }

    #[test]
    fn matchings_are_maximal() {
        let inst = generate(40, Model::Gnp(0.2), 5).unwrap();
        for m in [greedy_matching(&inst), random_maximal_matching(&inst, &mut rng(2))] {
            m.validate(&inst).unwrap();
            for (a, b) in inst.edges() {
                assert!(m.is_matched(a) || m.is_matched(b));
            }
        }
    }
}
