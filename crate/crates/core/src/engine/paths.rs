//! Odd alternating cycles inside factor-critical components and shortest
//! alternating paths from a seed set.

use std::collections::VecDeque;

use super::search::{Forest, Label, SearchEnd, NIL};
use super::{check_matching, AltCycle, AltPath, Graph};
use crate::error::{invalid, Error, Result};

/// Node expansions the exact shortest-path search may spend before falling
/// back to the search-forest path.
const EXACT_BUDGET: usize = 1 << 20;

/// An odd alternating cycle through `root` inside `component`, whose two edges
/// at the root are non-matching. The component must be factor-critical with
/// `root` as its only node not matched inside it.
pub fn odd_cycle_through_root(
    component: &[usize],
    root: usize,
    g: &Graph,
    mate: &[Option<usize>],
) -> Result<AltCycle> {
    check_matching(g, mate)?;
    let mut nodes = component.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.len() < 3 {
        return Err(invalid("component must have at least three nodes"));
    }
    if nodes.iter().any(|&v| v >= g.node_count()) {
        return Err(invalid("component node out of range"));
    }
    let local_root = nodes
        .binary_search(&root)
        .map_err(|_| invalid(format!("root {root} is not in the component")))?;
    let local = g.induced(&nodes);
    let mut local_mate = vec![NIL; nodes.len()];
    for (i, &v) in nodes.iter().enumerate() {
        if let Some(w) = mate[v] {
            if let Ok(j) = nodes.binary_search(&w) {
                local_mate[i] = j;
            }
        }
    }
    if local_mate[local_root] != NIL || (0..nodes.len()).any(|i| i != local_root && local_mate[i] == NIL) {
        return Err(invalid("root is not the only node left unmatched inside the component"));
    }

    let mut forest = Forest::new(&local, &local_mate, &[local_root]);
    let (x, y) = match forest.run(true) {
        SearchEnd::RootBlossom(x, y) => (x, y),
        _ => return Err(invalid("component is not factor-critical")),
    };
    let mut cycle = forest.path_to_root(x);
    cycle.reverse();
    let mut tail = forest.path_to_root(y);
    tail.pop();
    cycle.extend(tail);
    if cycle[1] > cycle[cycle.len() - 1] {
        cycle[1..].reverse();
    }
    let cycle = AltCycle {
        nodes: cycle.into_iter().map(|i| nodes[i]).collect(),
    };
    cycle.validate(g, mate).map_err(|e| Error::Internal(format!("odd cycle: {e}")))?;
    Ok(cycle)
}

/// A shortest alternating path from one of the unmatched `seeds` to `target`
/// whose last edge is a matching edge. Ties are broken towards lower ids.
pub fn shortest_alt_path_to_root(
    g: &Graph,
    mate: &[Option<usize>],
    seeds: &[usize],
    target: usize,
) -> Result<AltPath> {
    shortest_alt_path_avoiding(g, mate, seeds, target, &vec![false; g.node_count()])
}

/// As [`shortest_alt_path_to_root`], never visiting nodes flagged in `avoid`.
pub(crate) fn shortest_alt_path_avoiding(
    g: &Graph,
    mate: &[Option<usize>],
    seeds: &[usize],
    target: usize,
    avoid: &[bool],
) -> Result<AltPath> {
    let raw = check_matching(g, mate)?;
    let n = g.node_count();
    if target >= n || avoid[target] {
        return Err(invalid(format!("target {target} is out of range or excluded")));
    }
    let mut seeds: Vec<usize> = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    for &s in &seeds {
        if s >= n || raw[s] != NIL {
            return Err(invalid(format!("seed {s} is not an unmatched node")));
        }
    }
    if seeds.binary_search(&target).is_ok() {
        return Ok(AltPath { nodes: vec![target] });
    }
    if raw[target] == NIL {
        return Err(invalid(format!("target {target} is unmatched and not a seed")));
    }

    let h = even_distance_bound(g, &raw, target, avoid);
    let start = seeds.iter().filter(|&&s| !avoid[s]).map(|&s| h[s]).min().unwrap_or(usize::MAX);
    if start == usize::MAX {
        return Err(invalid(format!("target {target} is not reachable from the seeds")));
    }
    let mut exact = ExactSearch {
        g,
        mate: &raw,
        target,
        avoid,
        h: &h,
        visited: vec![false; n],
        expansions: 0,
    };
    let mut bound = start;
    while bound < n {
        for &s in &seeds {
            if avoid[s] || h[s] > bound {
                continue;
            }
            match exact.probe_from(s, bound) {
                Probe::Found(nodes) => return Ok(AltPath { nodes }),
                Probe::NotFound => {}
                Probe::OutOfBudget => return forest_path(g, &raw, &seeds, target, avoid),
            }
        }
        bound += 2;
    }
    Err(invalid(format!("target {target} is not reachable from the seeds")))
}

/// Lower bound on the remaining length from an even-position node to
/// `target`, counted over alternating walks.
fn even_distance_bound(g: &Graph, mate: &[usize], target: usize, avoid: &[bool]) -> Vec<usize> {
    let mut h = vec![usize::MAX; g.node_count()];
    h[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(t) = queue.pop_front() {
        let m = mate[t];
        if m == NIL || avoid[m] {
            continue;
        }
        for &y in g.neighbors(m) {
            if y != t && !avoid[y] && h[y] == usize::MAX {
                h[y] = h[t] + 2;
                queue.push_back(y);
            }
        }
    }
    h
}

enum Probe {
    Found(Vec<usize>),
    NotFound,
    OutOfBudget,
}

struct ExactSearch<'a> {
    g: &'a Graph,
    mate: &'a [usize],
    target: usize,
    avoid: &'a [bool],
    h: &'a [usize],
    visited: Vec<bool>,
    expansions: usize,
}

impl ExactSearch<'_> {
    /// Depth-first search over simple alternating paths of length at most
    /// `bound`, pruned by the walk-distance bound.
    fn probe_from(&mut self, seed: usize, bound: usize) -> Probe {
        // Path holds even-position nodes and the odd node before each.
        let mut path = vec![seed];
        let mut cursor = vec![0usize];
        self.visited[seed] = true;
        let result = loop {
            let depth = cursor.len() - 1;
            let v = path[path.len() - 1];
            let neighbors = self.g.neighbors(v);
            let i = cursor[depth];
            if i == neighbors.len() {
                self.visited[v] = false;
                cursor.pop();
                path.pop();
                if let Some(w) = path.pop() {
                    self.visited[w] = false;
                }
                if cursor.is_empty() {
                    break Probe::NotFound;
                }
                continue;
            }
            cursor[depth] += 1;
            let w = neighbors[i];
            if w == self.mate[v] || w == self.target || self.visited[w] || self.avoid[w] {
                continue;
            }
            let m = self.mate[w];
            if m == NIL || self.visited[m] || self.avoid[m] {
                continue;
            }
            let len = 2 * depth + 2;
            if m == self.target {
                path.push(w);
                path.push(m);
                break Probe::Found(path.clone());
            }
            if self.h[m] == usize::MAX || len + self.h[m] > bound {
                continue;
            }
            self.expansions += 1;
            if self.expansions > EXACT_BUDGET {
                break Probe::OutOfBudget;
            }
            self.visited[w] = true;
            self.visited[m] = true;
            path.push(w);
            path.push(m);
            cursor.push(0);
        };
        for &v in &path {
            self.visited[v] = false;
        }
        result
    }
}

/// The even alternating path the search forest grown from `seeds` assigns to
/// `target`. Used when the exact search exceeds its budget.
fn forest_path(g: &Graph, mate: &[usize], seeds: &[usize], target: usize, avoid: &[bool]) -> Result<AltPath> {
    let roots: Vec<usize> = seeds.iter().copied().filter(|&s| !avoid[s]).collect();
    let mut forest = Forest::new(g, mate, &roots);
    if let SearchEnd::Augmenting(_) = forest.run(false) {
        return Err(Error::PreconditionViolated("matching is not maximum".into()));
    }
    if forest.label(target) != Label::Even {
        return Err(invalid(format!("target {target} is not reachable from the seeds")));
    }
    let mut nodes = forest.path_to_root(target);
    nodes.reverse();
    if nodes.iter().any(|&v| avoid[v]) {
        return Err(Error::Internal("forest path enters an excluded node".into()));
    }
    Ok(AltPath { nodes })
}
