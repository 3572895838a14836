//! Exhaustive referees for small inputs. Nothing here shares code with the
//! fast algorithms beyond the instance and matching types.

use crate::engine::{DComponent, GeDecomposition, Graph};
use crate::error::{Error, Result};
use crate::model::{loop_weight, HalfIntegralMatching, Halves, Matching, RoommatesInstance};

/// Environment variable that overrides every oracle size limit.
pub const LIMIT_ENV: &str = "POPMATCH_ORACLE_LIMIT";

pub const DEFAULT_POPULAR_LIMIT: usize = 12;
pub const DEFAULT_FRACTIONAL_LIMIT: usize = 10;
pub const DEFAULT_GRAPH_LIMIT: usize = 16;

fn limit(default: usize) -> usize {
    std::env::var(LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

fn guard(nodes: usize, default: usize) -> Result<()> {
    let limit = limit(default);
    if nodes > limit {
        return Err(Error::SizeGuard { nodes, limit });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alternative {
    Integral(Matching),
    HalfIntegral(HalfIntegralMatching),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// True when nothing beats the matching.
    pub verdict: bool,
    /// The first best alternative found, when it beats the matching.
    pub best_alternative: Option<Alternative>,
    /// Largest improvement over all alternatives (0 when none improves).
    pub best_value: Halves,
}

/// Vote of `v` for option `x` against its current partner, from 0-based
/// ranks where `deg(v)` stands for being unmatched.
fn vote_table(inst: &RoommatesInstance, m: &Matching) -> Vec<Vec<i8>> {
    (0..inst.node_count())
        .map(|v| {
            let deg = inst.degree(v);
            let current = m.partner(v).and_then(|w| inst.rank(v, w)).unwrap_or(deg);
            (0..=deg).map(|r| (current as i64 - r as i64).signum() as i8).collect()
        })
        .collect()
}

/// Enumerates every matching and reports the largest popularity margin.
pub fn brute_popular(inst: &RoommatesInstance, m: &Matching) -> Result<OracleReport> {
    m.validate(inst)?;
    let n = inst.node_count();
    guard(n, DEFAULT_POPULAR_LIMIT)?;
    let votes = vote_table(inst, m);
    let mut walk = MatchingWalk {
        inst,
        votes: &votes,
        mate: vec![None; n],
        decided: vec![false; n],
        best: 0,
        best_mate: None,
    };
    walk.visit(0, 0);
    let best_alternative = match walk.best_mate {
        Some(mate) if walk.best > 0 => Some(Alternative::Integral(Matching::from_mates(inst, mate)?)),
        _ => None,
    };
    Ok(OracleReport {
        verdict: walk.best <= 0,
        best_alternative,
        best_value: Halves::from_int(walk.best),
    })
}

struct MatchingWalk<'a> {
    inst: &'a RoommatesInstance,
    votes: &'a [Vec<i8>],
    mate: Vec<Option<usize>>,
    decided: Vec<bool>,
    best: i64,
    best_mate: Option<Vec<Option<usize>>>,
}

impl MatchingWalk<'_> {
    /// Branches on the lowest undecided node: leave it single or pair it
    /// with a later undecided neighbor. `acc` is the margin so far.
    fn visit(&mut self, from: usize, acc: i64) {
        let n = self.mate.len();
        let Some(v) = (from..n).find(|&v| !self.decided[v]) else {
            if self.best_mate.is_none() || acc > self.best {
                self.best = acc;
                self.best_mate = Some(self.mate.clone());
            }
            return;
        };
        self.decided[v] = true;
        self.visit(v + 1, acc + self.votes[v][self.inst.degree(v)] as i64);
        for (rv, &w) in self.inst.preferences(v).iter().enumerate() {
            if w > v && !self.decided[w] {
                let rw = self.inst.rank(w, v).expect("symmetric instance");
                let gain = self.votes[v][rv] as i64 + self.votes[w][rw] as i64;
                self.decided[w] = true;
                self.mate[v] = Some(w);
                self.mate[w] = Some(v);
                self.visit(v + 1, acc + gain);
                self.mate[v] = None;
                self.mate[w] = None;
                self.decided[w] = false;
            }
        }
        self.decided[v] = false;
    }
}

/// Enumerates every half-integral perfect matching of the graph with loops
/// and reports the largest fractional improvement.
pub fn brute_fractional_popular(inst: &RoommatesInstance, m: &Matching) -> Result<OracleReport> {
    m.validate(inst)?;
    let n = inst.node_count();
    guard(n, DEFAULT_FRACTIONAL_LIMIT)?;
    // Edge weights, indexed densely; absent edges are None.
    let mut weight = vec![vec![None; n]; n];
    let votes = vote_table(inst, m);
    for (u, v) in inst.edges() {
        let ru = inst.rank(u, v).expect("edge");
        let rv = inst.rank(v, u).expect("edge");
        let w = votes[u][ru] as i64 + votes[v][rv] as i64;
        weight[u][v] = Some(w);
        weight[v][u] = Some(w);
    }
    let loops: Vec<i64> = (0..n).map(|v| loop_weight(m, v) as i64).collect();
    let mut walk = HalfWalk {
        weight: &weight,
        loops: &loops,
        covered: vec![false; n],
        current: HalfIntegralMatching::default(),
        best: Halves(0),
        best_p: None,
    };
    walk.visit(0, 0);
    let best = walk.best;
    Ok(OracleReport {
        verdict: best.0 <= 0,
        best_alternative: walk.best_p.filter(|_| best.0 > 0).map(Alternative::HalfIntegral),
        best_value: best,
    })
}

struct HalfWalk<'a> {
    weight: &'a [Vec<Option<i64>>],
    loops: &'a [i64],
    covered: Vec<bool>,
    current: HalfIntegralMatching,
    best: Halves,
    best_p: Option<HalfIntegralMatching>,
}

impl HalfWalk<'_> {
    /// `acc` is twice the value so far.
    fn visit(&mut self, from: usize, acc: i64) {
        let n = self.covered.len();
        let Some(v) = (from..n).find(|&v| !self.covered[v]) else {
            if self.best_p.is_none() || acc > self.best.0 {
                self.best = Halves(acc);
                let mut p = self.current.clone();
                p.ones.sort_unstable();
                p.loop_ones.sort_unstable();
                self.best_p = Some(p);
            }
            return;
        };
        self.covered[v] = true;

        self.current.loop_ones.push(v);
        self.visit(v + 1, acc + 2 * self.loops[v]);
        self.current.loop_ones.pop();

        for w in v + 1..n {
            if let (false, Some(x)) = (self.covered[w], self.weight[v][w]) {
                self.covered[w] = true;
                self.current.ones.push((v, w));
                self.visit(v + 1, acc + 2 * x);
                self.current.ones.pop();
                self.covered[w] = false;
            }
        }

        let mut cycle = vec![v];
        self.extend_cycle(&mut cycle, acc);
        self.covered[v] = false;
    }

    /// Grows a path from the cycle's lowest node through higher uncovered
    /// nodes, closing it whenever the length is odd; the second node must be
    /// lower than the last so each cycle is produced once.
    fn extend_cycle(&mut self, cycle: &mut Vec<usize>, acc: i64) {
        let n = self.covered.len();
        let first = cycle[0];
        let last = cycle[cycle.len() - 1];
        if cycle.len() >= 3 && cycle.len() % 2 == 1 && cycle[1] < last {
            if let Some(close) = self.weight[last][first] {
                self.current.half_cycles.push(cycle.clone());
                self.visit(first + 1, acc + close);
                self.current.half_cycles.pop();
            }
        }
        for w in first + 1..n {
            if let (false, Some(x)) = (self.covered[w], self.weight[last][w]) {
                self.covered[w] = true;
                cycle.push(w);
                self.extend_cycle(cycle, acc + x);
                cycle.pop();
                self.covered[w] = false;
            }
        }
    }
}

/// All matchings of a plain graph: calls `leaf` with each partner array.
fn each_matching(g: &Graph, leaf: &mut dyn FnMut(&[Option<usize>])) {
    fn go(g: &Graph, v: usize, mate: &mut Vec<Option<usize>>, decided: &mut Vec<bool>, leaf: &mut dyn FnMut(&[Option<usize>])) {
        let n = mate.len();
        let mut v = v;
        while v < n && decided[v] {
            v += 1;
        }
        if v == n {
            leaf(mate);
            return;
        }
        decided[v] = true;
        go(g, v + 1, mate, decided, leaf);
        for &w in g.neighbors(v) {
            if w > v && !decided[w] {
                decided[w] = true;
                mate[v] = Some(w);
                mate[w] = Some(v);
                go(g, v + 1, mate, decided, leaf);
                mate[v] = None;
                mate[w] = None;
                decided[w] = false;
            }
        }
        decided[v] = false;
    }
    let n = g.node_count();
    go(g, 0, &mut vec![None; n], &mut vec![false; n], leaf);
}

pub fn brute_max_matching_size(g: &Graph) -> Result<usize> {
    guard(g.node_count(), DEFAULT_GRAPH_LIMIT)?;
    let mut best = 0;
    each_matching(g, &mut |mate| {
        best = best.max(mate.iter().filter(|p| p.is_some()).count() / 2);
    });
    Ok(best)
}

/// Gallai–Edmonds decomposition straight from the definition: `D` holds the
/// nodes some maximum matching leaves uncovered. Component roots are taken
/// with respect to the first maximum matching in enumeration order.
pub fn brute_gallai_edmonds(g: &Graph) -> Result<GeDecomposition> {
    guard(g.node_count(), DEFAULT_GRAPH_LIMIT)?;
    let n = g.node_count();
    let mut best = 0;
    let mut missed = vec![false; n];
    let mut reference: Vec<Option<usize>> = vec![None; n];
    each_matching(g, &mut |mate| {
        let size = mate.iter().filter(|p| p.is_some()).count() / 2;
        if size > best {
            missed.iter_mut().for_each(|x| *x = false);
            best = size;
            reference = mate.to_vec();
        }
        if size == best {
            for (v, p) in mate.iter().enumerate() {
                if p.is_none() {
                    missed[v] = true;
                }
            }
        }
    });
    let d: Vec<usize> = (0..n).filter(|&v| missed[v]).collect();
    let a: Vec<usize> = (0..n)
        .filter(|&v| !missed[v] && g.neighbors(v).iter().any(|&w| missed[w]))
        .collect();
    let in_a: Vec<bool> = {
        let mut f = vec![false; n];
        a.iter().for_each(|&v| f[v] = true);
        f
    };
    let c: Vec<usize> = (0..n).filter(|&v| !missed[v] && !in_a[v]).collect();
    let mut components = Vec::new();
    let mut seen = vec![false; n];
    for &s in &d {
        if seen[s] {
            continue;
        }
        let mut nodes = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < nodes.len() {
            for &w in g.neighbors(nodes[i]) {
                if missed[w] && !seen[w] {
                    seen[w] = true;
                    nodes.push(w);
                }
            }
            i += 1;
        }
        nodes.sort_unstable();
        let root = nodes
            .iter()
            .copied()
            .find(|&v| !matches!(reference[v], Some(w) if nodes.binary_search(&w).is_ok()))
            .ok_or_else(|| Error::Internal("D-component without a root".into()))?;
        components.push(DComponent { nodes, root });
    }
    Ok(GeDecomposition { d, a, c, components })
}
