//! Popularity verdicts with certificates in both directions.
//!
//! A matching is popular exactly when it is maximum in the auxiliary graph.
//! An augmenting path there is turned into a blocking structure and a more
//! popular matching; its absence yields a dual witness read off the
//! Gallai–Edmonds decomposition of the auxiliary graph.

use std::fmt;

use crate::aux_graph::{AuxGraph, AuxNode};
use crate::engine::{
    find_augmenting_path, gallai_edmonds, induced_components, reachable_set, AltPath, GeDecomposition, GePart,
    ReachSet,
};
use crate::error::{internal, invalid, Error, Result};
use crate::model::{edge_weight, local_delta, loop_weight, switch_tracked, Matching, RoommatesInstance, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    /// Even alternating cycle `nodes[0] .. nodes[k-1]`; `nodes[0] nodes[1]` is
    /// matched and the closing edge `nodes[k-1] nodes[0]` is blocking.
    Cycle,
    /// Alternating path whose first and last edges are blocking.
    PathTwoBlocking,
    /// Alternating path whose first edge is blocking and whose last node is
    /// unmatched.
    PathToUnmatched,
}

impl StructureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Cycle => "cycle",
            StructureKind::PathTwoBlocking => "path-two-blocking",
            StructureKind::PathToUnmatched => "path-to-unmatched",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cycle" => Some(StructureKind::Cycle),
            "path-two-blocking" => Some(StructureKind::PathTwoBlocking),
            "path-to-unmatched" => Some(StructureKind::PathToUnmatched),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingStructure {
    pub kind: StructureKind,
    pub nodes: Vec<usize>,
}

impl BlockingStructure {
    pub fn new(kind: StructureKind, nodes: Vec<usize>) -> Self {
        BlockingStructure { kind, nodes }
    }

    /// The blocking edges the structure is built around.
    pub fn blocking_edges(&self) -> Vec<(usize, usize)> {
        let n = &self.nodes;
        let k = n.len();
        if k < 2 {
            return Vec::new();
        }
        match self.kind {
            StructureKind::Cycle => vec![(n[k - 1], n[0])],
            StructureKind::PathTwoBlocking => vec![(n[0], n[1]), (n[k - 2], n[k - 1])],
            StructureKind::PathToUnmatched => vec![(n[0], n[1])],
        }
    }

    pub fn unmatched_end(&self) -> Option<usize> {
        match self.kind {
            StructureKind::PathToUnmatched => self.nodes.last().copied(),
            _ => None,
        }
    }

    /// Checks the structure against its definition: distinct nodes, every
    /// edge present with weight above -2, alternation, and blocking edges and
    /// unmatched end where the kind demands them.
    pub fn validate(&self, inst: &RoommatesInstance, m: &Matching) -> Result<()> {
        let nodes = &self.nodes;
        let k = nodes.len();
        crate::engine::check_simple(nodes)?;
        if nodes.iter().any(|&v| v >= inst.node_count()) {
            return Err(invalid("structure node out of range"));
        }
        let min_len = match self.kind {
            StructureKind::PathToUnmatched => 2,
            _ => 4,
        };
        if k < min_len || !k.is_multiple_of(2) {
            return Err(invalid(format!("{} with {k} nodes", self.kind.as_str())));
        }
        let closing = matches!(self.kind, StructureKind::Cycle);
        let steps = if closing { k } else { k - 1 };
        for i in 0..steps {
            let (a, b) = (nodes[i], nodes[(i + 1) % k]);
            let w = edge_weight(inst, m, a, b)?;
            if w == -2 {
                return Err(invalid(format!("edge {a} {b} has weight -2")));
            }
            // Cycles start on a matching edge, paths on a non-matching one.
            let should_match = (i % 2 == 0) == closing;
            if (m.partner(a) == Some(b)) != should_match {
                return Err(invalid(format!("structure does not alternate at {a} {b}")));
            }
        }
        for (a, b) in self.blocking_edges() {
            if edge_weight(inst, m, a, b)? != 2 {
                return Err(invalid(format!("edge {a} {b} is not blocking")));
            }
        }
        if let Some(end) = self.unmatched_end() {
            if m.is_matched(end) {
                return Err(invalid(format!("end node {end} is matched")));
            }
        }
        Ok(())
    }
}

/// Dual solution with node values in {-1, 0, 1} and value 2 on each listed
/// odd set (0 on every other set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWitness {
    pub alpha: Vec<i8>,
    pub two_sets: Vec<Vec<usize>>,
}

impl DualWitness {
    /// `sum alpha + sum (|Z| - 1) / 2 * y_Z`.
    pub fn objective(&self) -> i64 {
        let alpha: i64 = self.alpha.iter().map(|&a| a as i64).sum();
        let sets: i64 = self.two_sets.iter().map(|z| z.len() as i64 - 1).sum();
        alpha + sets
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessFailure {
    WrongLength { expected: usize, found: usize },
    AlphaOutOfRange(usize),
    SetTooSmallOrEven(usize),
    NodeOutOfRange(usize),
    SetsOverlap(usize),
    EdgeConstraint(usize, usize),
    LoopConstraint(usize),
    NonZeroObjective(i64),
}

impl fmt::Display for WitnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFailure::WrongLength { expected, found } => {
                write!(f, "alpha has {found} entries, expected {expected}")
            }
            WitnessFailure::AlphaOutOfRange(v) => write!(f, "alpha of node {v} is outside -1..=1"),
            WitnessFailure::SetTooSmallOrEven(i) => write!(f, "set {i} is not odd with at least 3 nodes"),
            WitnessFailure::NodeOutOfRange(v) => write!(f, "node {v} is out of range"),
            WitnessFailure::SetsOverlap(v) => write!(f, "node {v} lies in two sets"),
            WitnessFailure::EdgeConstraint(a, b) => write!(f, "edge {a} {b} is not covered"),
            WitnessFailure::LoopConstraint(v) => write!(f, "loop constraint fails at node {v}"),
            WitnessFailure::NonZeroObjective(x) => write!(f, "objective is {x}, not 0"),
        }
    }
}

/// Checks feasibility and zero objective of a dual witness for `m`.
pub fn verify_witness(
    inst: &RoommatesInstance,
    m: &Matching,
    w: &DualWitness,
) -> std::result::Result<(), WitnessFailure> {
    let n = inst.node_count();
    if w.alpha.len() != n {
        return Err(WitnessFailure::WrongLength {
            expected: n,
            found: w.alpha.len(),
        });
    }
    if let Some(v) = w.alpha.iter().position(|&a| !(-1..=1).contains(&a)) {
        return Err(WitnessFailure::AlphaOutOfRange(v));
    }
    let mut set_of = vec![usize::MAX; n];
    for (i, z) in w.two_sets.iter().enumerate() {
        if z.len() < 3 || z.len() % 2 == 0 {
            return Err(WitnessFailure::SetTooSmallOrEven(i));
        }
        for &v in z {
            if v >= n {
                return Err(WitnessFailure::NodeOutOfRange(v));
            }
            if set_of[v] != usize::MAX {
                return Err(WitnessFailure::SetsOverlap(v));
            }
            set_of[v] = i;
        }
    }
    let weights = WeightTable::compute(inst, m);
    for (a, b, weight) in weights.edges(inst) {
        let y = if set_of[a] != usize::MAX && set_of[a] == set_of[b] { 2 } else { 0 };
        if (w.alpha[a] as i32 + w.alpha[b] as i32 + y) < weight {
            return Err(WitnessFailure::EdgeConstraint(a, b));
        }
    }
    for v in 0..n {
        if (w.alpha[v] as i32) < loop_weight(m, v) {
            return Err(WitnessFailure::LoopConstraint(v));
        }
    }
    match w.objective() {
        0 => Ok(()),
        x => Err(WitnessFailure::NonZeroObjective(x)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PopularityVerdict {
    Popular {
        witness: DualWitness,
    },
    Unpopular {
        structure: BlockingStructure,
        better: Matching,
        margin: i64,
    },
}

impl PopularityVerdict {
    pub fn is_popular(&self) -> bool {
        matches!(self, PopularityVerdict::Popular { .. })
    }
}

/// Decides popularity of `m`. Both outcomes are re-verified before return.
pub fn is_popular(inst: &RoommatesInstance, m: &Matching) -> Result<PopularityVerdict> {
    m.validate(inst)?;
    let aux = AuxGraph::build(inst, m);
    match find_augmenting_path(aux.graph(), aux.mate())? {
        Some(path) => {
            let structure = extract_blocking_structure(inst, m, &aux, &path)?;
            let (better, margin) = switch_along(inst, m, &structure)?;
            Ok(PopularityVerdict::Unpopular {
                structure,
                better,
                margin,
            })
        }
        None => {
            let (ge, reach) = popular_structure(&aux)?;
            let witness = build_dual_witness(inst, m, &aux, &ge, &reach)?;
            verify_witness(inst, m, &witness).map_err(|f| Error::Internal(format!("witness rejected: {f}")))?;
            Ok(PopularityVerdict::Popular { witness })
        }
    }
}

/// Gallai–Edmonds decomposition of the auxiliary graph and the set reachable
/// from its blocking and star nodes, with the reachable set's structural
/// properties checked.
pub(crate) fn popular_structure(aux: &AuxGraph) -> Result<(GeDecomposition, ReachSet)> {
    let ge = gallai_edmonds(aux.graph(), aux.mate())?;
    let reach = reachable_set(aux.graph(), aux.mate(), &aux.seeds())?;
    check_reach_properties(aux, &ge, &reach)?;
    Ok((ge, reach))
}

fn check_reach_properties(aux: &AuxGraph, ge: &GeDecomposition, reach: &ReachSet) -> Result<()> {
    let g = aux.graph();
    let part = ge.part_of(g.node_count());
    if let Some(u) = aux.u_node() {
        if reach.contains(u) {
            return Err(internal("u is reachable from a blocking node"));
        }
    }
    for &v in &reach.members {
        if let Some(w) = aux.mate()[v] {
            if !reach.contains(w) {
                return Err(internal(format!("partner of reachable node {v} is not reachable")));
            }
        }
        if part[v] == GePart::C {
            return Err(internal(format!("reachable node {v} is in C")));
        }
        if part[v] == GePart::D && g.neighbors(v).iter().any(|&w| !reach.contains(w)) {
            return Err(internal(format!("reachable D-node {v} has an unreachable neighbor")));
        }
    }
    for comp in &ge.components {
        let inside = comp.nodes.iter().filter(|&&v| reach.contains(v)).count();
        if inside != 0 && inside != comp.nodes.len() {
            return Err(internal("D-component only partly reachable"));
        }
    }
    Ok(())
}

/// The blocking partner of `v` that the unmatched endpoint `w` stands for:
/// the star's middle for a star node, else the lowest blocking partner.
fn blocking_partner(aux: &AuxGraph, w: usize, v: usize) -> Result<usize> {
    match aux.node(w) {
        AuxNode::StarNode(k) => Ok(aux.blocking().stars()[k].middle),
        AuxNode::BlockingNode(owner) if owner == v => aux
            .blocking()
            .partners(v)
            .first()
            .copied()
            .ok_or_else(|| internal(format!("blocking node of {v} without blocking edge"))),
        _ => Err(internal(format!("aux node {w} does not stand for a blocking edge at {v}"))),
    }
}

/// Turns an augmenting path of the auxiliary graph into a blocking structure.
pub fn extract_blocking_structure(
    inst: &RoommatesInstance,
    m: &Matching,
    aux: &AuxGraph,
    path: &AltPath,
) -> Result<BlockingStructure> {
    path.validate_augmenting(aux.graph(), aux.mate())?;
    let mut p = path.nodes.clone();
    let u = aux.u_node();
    if u.is_some() && p.last().copied() == u {
        p.reverse();
    }
    let (w1, w2) = (p[0], p[p.len() - 1]);
    let vs = p[1..p.len() - 1]
        .iter()
        .map(|&a| aux.original(a).ok_or_else(|| internal("inner path node is not an original node")))
        .collect::<Result<Vec<usize>>>()?;
    let structure = if Some(w1) == u {
        from_path_at_u(inst, m, aux, w2, &vs)?
    } else {
        from_path_between_seeds(aux, w1, w2, &vs)?
    };
    structure
        .validate(inst, m)
        .map_err(|e| Error::Internal(format!("extracted structure rejected: {e}")))?;
    Ok(structure)
}

/// Path `u - v_1 - ... - v_k - w2`.
fn from_path_at_u(
    inst: &RoommatesInstance,
    m: &Matching,
    aux: &AuxGraph,
    w2: usize,
    vs: &[usize],
) -> Result<BlockingStructure> {
    use StructureKind::*;
    let k = vs.len();
    if k == 0 {
        // w2 is the blocking or star node of an unmatched node.
        let x = match aux.node(w2) {
            AuxNode::BlockingNode(v) => v,
            AuxNode::StarNode(s) => aux.blocking().stars()[s]
                .leaves
                .iter()
                .copied()
                .find(|&l| !m.is_matched(l))
                .ok_or_else(|| internal("star node next to u has no unmatched leaf"))?,
            _ => return Err(internal("u adjacent to a node that is not a seed")),
        };
        let y = blocking_partner(aux, w2, x)?;
        return Ok(BlockingStructure::new(PathToUnmatched, vec![y, x]));
    }
    let (v1, vk) = (vs[0], vs[k - 1]);
    let x = inst
        .preferences(v1)
        .iter()
        .enumerate()
        .filter(|&(slot, &x)| !m.is_matched(x) && aux.weights().at(v1, slot) == 0)
        .map(|(_, &x)| x)
        .min()
        .ok_or_else(|| internal(format!("{v1} has no weight-0 edge to an unmatched node")))?;
    let y = blocking_partner(aux, w2, vk)?;
    if y == x {
        return Ok(BlockingStructure::new(PathToUnmatched, vec![vk, x]));
    }
    Ok(match vs.iter().position(|&v| v == y) {
        None => {
            let mut nodes = vec![y];
            nodes.extend(vs.iter().rev());
            nodes.push(x);
            BlockingStructure::new(PathToUnmatched, nodes)
        }
        // Odd position counting from 1.
        Some(i) if i % 2 == 0 => BlockingStructure::new(Cycle, vs[i..].to_vec()),
        Some(i) => {
            let mut nodes = vec![vk];
            nodes.extend(vs[..=i].iter().rev());
            nodes.push(x);
            BlockingStructure::new(PathToUnmatched, nodes)
        }
    })
}

/// Path `w1 - v_1 - ... - v_k - w2` between two blocking or star nodes.
fn from_path_between_seeds(aux: &AuxGraph, w1: usize, w2: usize, vs: &[usize]) -> Result<BlockingStructure> {
    use StructureKind::*;
    let blocking = aux.blocking();
    let k = vs.len();
    if k < 2 {
        return Err(internal("augmenting path between seeds is too short"));
    }
    let (v1, vk) = (vs[0], vs[k - 1]);
    if blocking.is_blocking(v1, vk) {
        return Ok(BlockingStructure::new(Cycle, vs.to_vec()));
    }
    let z1 = blocking_partner(aux, w1, v1)?;
    let z2 = blocking_partner(aux, w2, vk)?;
    let other = |v: usize, not: usize| blocking.partners(v).iter().copied().find(|&z| z != not);
    let (y1, y2) = if z1 != z2 {
        (z1, z2)
    } else if let Some(z3) = other(v1, z2).filter(|_| !blocking.is_leaf(v1)) {
        (z3, z2)
    } else if let Some(z3) = other(vk, z1).filter(|_| !blocking.is_leaf(vk)) {
        (z1, z3)
    } else {
        return Err(internal("both path ends are leaves of the same star"));
    };

    let pos = |y: usize| vs.iter().position(|&v| v == y);
    // 0-based positions: an even index is an odd position counting from 1.
    Ok(match (pos(y1), pos(y2)) {
        (None, None) => {
            let mut nodes = vec![y1];
            nodes.extend_from_slice(vs);
            nodes.push(y2);
            BlockingStructure::new(PathTwoBlocking, nodes)
        }
        (Some(j), _) if j % 2 == 1 => BlockingStructure::new(Cycle, vs[..=j].to_vec()),
        (Some(j), None) => {
            let mut nodes = vec![v1];
            nodes.extend_from_slice(&vs[j..]);
            nodes.push(y2);
            BlockingStructure::new(PathTwoBlocking, nodes)
        }
        (_, Some(l)) if l % 2 == 0 => BlockingStructure::new(Cycle, vs[l..].to_vec()),
        (None, Some(l)) => {
            let mut nodes = vec![y1];
            nodes.extend_from_slice(&vs[..=l]);
            nodes.push(vk);
            BlockingStructure::new(PathTwoBlocking, nodes)
        }
        (Some(j), Some(l)) => {
            let mut nodes = if j < l {
                let mut nodes = vec![v1];
                nodes.extend_from_slice(&vs[j..=l]);
                nodes
            } else {
                let mut nodes = vec![vs[j]];
                nodes.extend_from_slice(&vs[..=l]);
                nodes
            };
            nodes.push(vk);
            BlockingStructure::new(PathTwoBlocking, nodes)
        }
    })
}

/// Switches `m` along the structure. The result is checked to be strictly
/// more popular.
pub fn more_popular_matching(inst: &RoommatesInstance, m: &Matching, s: &BlockingStructure) -> Result<Matching> {
    m.validate(inst)?;
    switch_along(inst, m, s).map(|(better, _)| better)
}

/// `more_popular_matching` for a valid `m`, also returning the margin.
pub(crate) fn switch_along(inst: &RoommatesInstance, m: &Matching, s: &BlockingStructure) -> Result<(Matching, i64)> {
    s.validate(inst, m)?;
    let nodes = &s.nodes;
    let k = nodes.len();
    let new_edges: Vec<(usize, usize)> = match s.kind {
        StructureKind::Cycle => (0..k / 2).map(|i| (nodes[2 * i + 1], nodes[(2 * i + 2) % k])).collect(),
        _ => nodes.chunks(2).map(|c| (c[0], c[1])).collect(),
    };
    let (better, touched) = switch_tracked(m, &new_edges);
    let margin = local_delta(inst, m, &better, &touched)?;
    if margin < 1 {
        return Err(Error::Internal(format!("switched matching has margin {margin}")));
    }
    Ok((better, margin))
}

/// The dual witness of a popular matching: value 2 on the odd components of
/// the reachable part of `D` (star nodes replaced by their middles), alpha -1
/// on reachable `D`-nodes and +1 on reachable `A`-nodes.
pub fn build_dual_witness(
    inst: &RoommatesInstance,
    m: &Matching,
    aux: &AuxGraph,
    ge: &GeDecomposition,
    reach: &ReachSet,
) -> Result<DualWitness> {
    let g = aux.graph();
    let count = g.node_count();
    if ge.d.len() + ge.a.len() + ge.c.len() != count || reach.even.len() != count {
        return Err(invalid("decomposition or reachable set does not belong to this graph"));
    }
    let part = ge.part_of(count);
    let in_xd: Vec<bool> = (0..count).map(|v| reach.contains(v) && part[v] == GePart::D).collect();
    let mut two_sets = Vec::new();
    for (nodes, root) in induced_components(g, aux.mate(), &in_xd) {
        if nodes.len() < 3 {
            continue;
        }
        let root = root.ok_or_else(|| Error::PreconditionViolated("component without a single root".into()))?;
        let mut set = Vec::with_capacity(nodes.len());
        for &a in &nodes {
            match aux.node(a) {
                AuxNode::Original(v) => set.push(v),
                AuxNode::StarNode(k) if a == root => set.push(aux.blocking().stars()[k].middle),
                _ => {
                    return Err(Error::PreconditionViolated(format!(
                        "component {nodes:?} holds an auxiliary node other than a star-node root"
                    )))
                }
            }
        }
        set.sort_unstable();
        two_sets.push(set);
    }
    let mut alpha = vec![0i8; inst.node_count()];
    for (v, a) in alpha.iter_mut().enumerate() {
        if !m.is_matched(v) {
            continue;
        }
        let id = aux.aux_id(v).expect("matched node has an aux id");
        if reach.contains(id) {
            *a = match part[id] {
                GePart::D => -1,
                GePart::A => 1,
                GePart::C => 0,
            };
        }
    }
    Ok(DualWitness { alpha, two_sets })
}
