//! Scaling measurements for the popularity check.

use std::time::Instant;

use crate::error::Result;
use crate::gen::{generate_with, greedy_matching, random_maximal_matching, rng, Model};
use crate::model::Matching;
use crate::popularity::is_popular;

/// Average degree of the generated G(n, p) instances.
pub const AVERAGE_DEGREE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingKind {
    Greedy,
    RandomMaximal,
}

impl MatchingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchingKind::Greedy => "greedy",
            MatchingKind::RandomMaximal => "random-maximal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub target_edges: usize,
    pub nodes: usize,
    pub edges: usize,
    pub matching: MatchingKind,
    pub popular: bool,
    pub median_ns: u128,
    pub ns_per_edge: f64,
    /// `ns_per_edge` over that of the smallest size with the same matching kind.
    pub ratio: f64,
}

/// Times the full popularity check (certificate included, parsing excluded)
/// on G(n, p) instances with about `target` edges each. One warm-up run per
/// instance is discarded.
pub fn measure(sizes: &[usize], seed: u64, reps: usize) -> Result<Vec<BenchRow>> {
    let reps = reps.max(1);
    let mut rows: Vec<BenchRow> = Vec::new();
    for (i, &target) in sizes.iter().enumerate() {
        let mut r = rng(seed.wrapping_add(i as u64));
        let nodes = ((2.0 * target as f64 / AVERAGE_DEGREE).round() as usize).max(2);
        let p = (AVERAGE_DEGREE / (nodes - 1) as f64).min(1.0);
        let inst = generate_with(nodes, Model::Gnp(p), &mut r)?;
        let edges = inst.edge_count().max(1);
        let cases: [(MatchingKind, Matching); 2] = [
            (MatchingKind::Greedy, greedy_matching(&inst)),
            (MatchingKind::RandomMaximal, random_maximal_matching(&inst, &mut r)),
        ];
        for (kind, m) in cases {
            let popular = is_popular(&inst, &m)?.is_popular();
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                let start = Instant::now();
                let verdict = is_popular(&inst, &m)?;
                times.push(start.elapsed().as_nanos());
                std::hint::black_box(verdict);
            }
            times.sort_unstable();
            let median_ns = times[times.len() / 2];
            let ns_per_edge = median_ns as f64 / edges as f64;
            let base = rows
                .iter()
                .find(|row| row.matching == kind)
                .map_or(ns_per_edge, |row| row.ns_per_edge);
            rows.push(BenchRow {
                target_edges: target,
                nodes,
                edges: inst.edge_count(),
                matching: kind,
                popular,
                median_ns,
                ns_per_edge,
                ratio: ns_per_edge / base,
            });
        }
    }
    Ok(rows)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>10} {:>9} {:>10} {:>15} {:>8} {:>12} {:>9} {:>7}\n",
        "target", "nodes", "edges", "matching", "popular", "median_ms", "ns/edge", "ratio"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>10} {:>9} {:>10} {:>15} {:>8} {:>12.3} {:>9.1} {:>7.2}\n",
            r.target_edges,
            r.nodes,
            r.edges,
            r.matching.as_str(),
            r.popular,
            r.median_ns as f64 / 1e6,
            r.ns_per_edge,
            r.ratio
        ));
    }
    out
}
