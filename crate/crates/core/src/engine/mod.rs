//! General-graph matching machinery: augmenting-path search with blossom
//! contraction, the Gallai–Edmonds decomposition, alternating reachability,
//! and the alternating paths and cycles certificates are built from.
//!
//! Matchings are passed as partner arrays (`None` = unmatched). Neighbors are
//! scanned in ascending id order, so every result is deterministic.

pub mod graph;
mod paths;
pub(crate) mod search;

use std::collections::VecDeque;

pub use graph::Graph;
pub use paths::{odd_cycle_through_root, shortest_alt_path_to_root};
pub(crate) use paths::shortest_alt_path_avoiding;

use crate::error::{invalid, Error, Result};
use search::{Forest, Label, SearchEnd, NIL};

/// Sequence of distinct nodes whose edges alternate between non-matching and
/// matching edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltPath {
    pub nodes: Vec<usize>,
}

impl AltPath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Checks simplicity, edge membership and alternation. `first_matched`
    /// says whether the first edge must be a matching edge.
    pub fn validate(&self, g: &Graph, mate: &[Option<usize>], first_matched: bool) -> Result<()> {
        check_simple(&self.nodes)?;
        for (i, pair) in self.nodes.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if !g.has_edge(a, b) {
                return Err(invalid(format!("path step {a} {b} is not an edge")));
            }
            let matched = mate[a] == Some(b);
            if matched != (first_matched == (i % 2 == 0)) {
                return Err(invalid(format!("path does not alternate at {a} {b}")));
            }
        }
        Ok(())
    }

    /// Checks that this is an augmenting path: alternating, starting with a
    /// non-matching edge, both ends unmatched.
    pub fn validate_augmenting(&self, g: &Graph, mate: &[Option<usize>]) -> Result<()> {
        if self.nodes.len() < 2 || !self.nodes.len().is_multiple_of(2) {
            return Err(invalid("augmenting path must have an odd number of edges"));
        }
        self.validate(g, mate, false)?;
        let (s, t) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if mate[s].is_some() || mate[t].is_some() {
            return Err(invalid("augmenting path endpoints must be unmatched"));
        }
        Ok(())
    }
}

/// Odd cycle `nodes[0] - nodes[1] - ... - nodes[k-1] - nodes[0]` through its
/// first node, alternating so that both edges at `nodes[0]` are non-matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltCycle {
    pub nodes: Vec<usize>,
}

impl AltCycle {
    pub fn root(&self) -> usize {
        self.nodes[0]
    }

    pub fn validate(&self, g: &Graph, mate: &[Option<usize>]) -> Result<()> {
        let k = self.nodes.len();
        if k < 3 || k.is_multiple_of(2) {
            return Err(invalid(format!("cycle length {k} is not odd and >= 3")));
        }
        check_simple(&self.nodes)?;
        for i in 0..k {
            let (a, b) = (self.nodes[i], self.nodes[(i + 1) % k]);
            if !g.has_edge(a, b) {
                return Err(invalid(format!("cycle step {a} {b} is not an edge")));
            }
            let should_match = i % 2 == 1;
            if (mate[a] == Some(b)) != should_match {
                return Err(invalid(format!("cycle does not alternate at {a} {b}")));
            }
        }
        Ok(())
    }
}

pub fn check_simple(nodes: &[usize]) -> Result<()> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("node sequence repeats a node"));
    }
    Ok(())
}

/// Converts a partner array to the internal form after validating it.
pub(crate) fn check_matching(g: &Graph, mate: &[Option<usize>]) -> Result<Vec<usize>> {
    if mate.len() != g.node_count() {
        return Err(invalid(format!(
            "matching has {} entries, graph has {} nodes",
            mate.len(),
            g.node_count()
        )));
    }
    let mut out = vec![NIL; mate.len()];
    for (v, &p) in mate.iter().enumerate() {
        if let Some(w) = p {
            if w >= mate.len() || mate[w] != Some(v) || !g.has_edge(v, w) {
                return Err(invalid(format!("{v} {w} is not a valid matched pair")));
            }
            out[v] = w;
        }
    }
    Ok(out)
}

fn free_nodes(mate: &[usize]) -> Vec<usize> {
    (0..mate.len()).filter(|&v| mate[v] == NIL).collect()
}

/// Returns an augmenting path, or `None` when the matching is maximum.
pub fn find_augmenting_path(g: &Graph, mate: &[Option<usize>]) -> Result<Option<AltPath>> {
    let raw = check_matching(g, mate)?;
    let roots = free_nodes(&raw);
    let mut forest = Forest::new(g, &raw, &roots);
    Ok(match forest.run(false) {
        SearchEnd::Augmenting(nodes) => Some(AltPath { nodes }),
        _ => None,
    })
}

pub fn is_maximum(g: &Graph, mate: &[Option<usize>]) -> Result<bool> {
    Ok(find_augmenting_path(g, mate)?.is_none())
}

/// Flips the matching along an augmenting path.
pub fn augment(mate: &mut [Option<usize>], path: &AltPath) {
    for pair in path.nodes.chunks(2) {
        mate[pair[0]] = Some(pair[1]);
        mate[pair[1]] = Some(pair[0]);
    }
}

/// A maximum matching, grown from the greedy one by repeated augmentation.
pub fn maximum_matching(g: &Graph) -> Vec<Option<usize>> {
    let mut mate = vec![None; g.node_count()];
    for v in 0..g.node_count() {
        if mate[v].is_none() {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| mate[w].is_none()) {
                mate[v] = Some(w);
                mate[w] = Some(v);
            }
        }
    }
    while let Some(path) = find_augmenting_path(g, &mate).expect("internally built matching") {
        augment(&mut mate, &path);
    }
    mate
}

/// Connected component of the subgraph induced by `D`, with its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DComponent {
    /// Sorted ascending.
    pub nodes: Vec<usize>,
    /// The single node that is unmatched or matched outside the component.
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeDecomposition {
    pub d: Vec<usize>,
    pub a: Vec<usize>,
    pub c: Vec<usize>,
    /// Ordered by smallest member.
    pub components: Vec<DComponent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GePart {
    D,
    A,
    C,
}

impl GeDecomposition {
    pub fn part_of(&self, n: usize) -> Vec<GePart> {
        let mut part = vec![GePart::C; n];
        for &v in &self.d {
            part[v] = GePart::D;
        }
        for &v in &self.a {
            part[v] = GePart::A;
        }
        part
    }

    /// Checks the structural properties a decomposition of a maximum matching
    /// must have: A matched into D, unmatched nodes in D, one root per
    /// component, odd D-components and even C-components.
    pub fn check_properties(&self, g: &Graph, mate: &[Option<usize>]) -> Result<()> {
        let n = g.node_count();
        let part = self.part_of(n);
        if self.d.len() + self.a.len() + self.c.len() != n {
            return Err(invalid("D, A, C do not partition the nodes"));
        }
        for &v in &self.a {
            match mate[v] {
                Some(w) if part[w] == GePart::D => {}
                _ => return Err(invalid(format!("A-node {v} is not matched into D"))),
            }
            if !g.neighbors(v).iter().any(|&w| part[w] == GePart::D) {
                return Err(invalid(format!("A-node {v} has no neighbor in D")));
            }
        }
        for &v in &self.c {
            if g.neighbors(v).iter().any(|&w| part[w] == GePart::D) {
                return Err(invalid(format!("C-node {v} is adjacent to D")));
            }
            if !matches!(mate[v], Some(w) if part[w] == GePart::C) {
                return Err(invalid(format!("C-node {v} is not matched within C")));
            }
        }
        for v in 0..n {
            if mate[v].is_none() && part[v] != GePart::D {
                return Err(invalid(format!("unmatched node {v} is not in D")));
            }
        }
        for comp in &self.components {
            if comp.nodes.len() % 2 == 0 {
                return Err(invalid("even D-component"));
            }
            let inside = |x: usize| comp.nodes.binary_search(&x).is_ok();
            let roots: Vec<usize> = comp
                .nodes
                .iter()
                .copied()
                .filter(|&v| !matches!(mate[v], Some(w) if inside(w)))
                .collect();
            if roots != [comp.root] {
                return Err(invalid(format!("component {:?} does not have exactly one root", comp.nodes)));
            }
        }
        Ok(())
    }
}

/// Connected components of the subgraph induced by `members`, each with the
/// node that is not matched inside it (`None` when there is not exactly one).
pub(crate) fn induced_components(
    g: &Graph,
    mate: &[Option<usize>],
    members: &[bool],
) -> Vec<(Vec<usize>, Option<usize>)> {
    let n = g.node_count();
    let mut comp_of = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !members[s] || comp_of[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut nodes = vec![s];
        comp_of[s] = id;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if members[w] && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    nodes.push(w);
                    queue.push_back(w);
                }
            }
        }
        nodes.sort_unstable();
        let mut roots = nodes
            .iter()
            .copied()
            .filter(|&v| !matches!(mate[v], Some(w) if comp_of[w] == id));
        let root = match (roots.next(), roots.next()) {
            (Some(r), None) => Some(r),
            _ => None,
        };
        out.push((nodes, root));
    }
    out
}

/// Gallai–Edmonds decomposition read off a completed search from all
/// unmatched nodes. Requires `mate` to be maximum.
pub fn gallai_edmonds(g: &Graph, mate: &[Option<usize>]) -> Result<GeDecomposition> {
    let raw = check_matching(g, mate)?;
    let roots = free_nodes(&raw);
    let mut forest = Forest::new(g, &raw, &roots);
    if let SearchEnd::Augmenting(_) = forest.run(false) {
        return Err(Error::PreconditionViolated("matching is not maximum".into()));
    }
    let n = g.node_count();
    let (mut d, mut a, mut c) = (Vec::new(), Vec::new(), Vec::new());
    let mut in_d = vec![false; n];
    for v in 0..n {
        match forest.label(v) {
            Label::Even => {
                d.push(v);
                in_d[v] = true;
            }
            Label::Odd => a.push(v),
            Label::Unreached => c.push(v),
        }
    }
    let mut components = Vec::new();
    for (nodes, root) in induced_components(g, mate, &in_d) {
        let root = root.ok_or_else(|| {
            Error::Internal(format!("D-component {nodes:?} does not have exactly one root"))
        })?;
        components.push(DComponent { nodes, root });
    }
    Ok(GeDecomposition { d, a, c, components })
}

/// Nodes reachable by alternating paths from a set of unmatched seeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    /// Sorted ascending.
    pub members: Vec<usize>,
    /// Reachable by a path ending in a matching edge (or a seed).
    pub even: Vec<bool>,
    /// Reachable by a path ending in a non-matching edge.
    pub odd: Vec<bool>,
}

impl ReachSet {
    pub fn contains(&self, v: usize) -> bool {
        self.even[v] || self.odd[v]
    }
}

pub fn reachable_set(g: &Graph, mate: &[Option<usize>], seeds: &[usize]) -> Result<ReachSet> {
    let raw = check_matching(g, mate)?;
    for &s in seeds {
        if s >= g.node_count() || raw[s] != NIL {
            return Err(invalid(format!("seed {s} is not an unmatched node")));
        }
    }
    let mut forest = Forest::new(g, &raw, seeds);
    if let SearchEnd::Augmenting(_) = forest.run(false) {
        return Err(Error::PreconditionViolated("matching is not maximum".into()));
    }
    let n = g.node_count();
    let mut even = vec![false; n];
    let mut odd = vec![false; n];
    let mut members = Vec::new();
    for v in 0..n {
        match forest.label(v) {
            Label::Unreached => continue,
            Label::Even => {
                even[v] = true;
                odd[v] = forest.in_blossom_interior(v);
            }
            Label::Odd => odd[v] = true,
        }
        members.push(v);
    }
    Ok(ReachSet { members, even, odd })
}
