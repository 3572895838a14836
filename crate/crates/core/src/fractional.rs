//! Fractional popularity of a popular matching.
//!
//! A popular matching fails to be fractional popular exactly when the
//! reachable part of `D` in the auxiliary graph has a component with at least
//! three nodes. Such a component yields either an odd alternating cycle
//! through a star, or an alternating path from a blocking edge to the
//! component's root followed by an odd cycle at the root. Either one gives a
//! half-integral matching of value exactly 1.

use crate::aux_graph::{AuxGraph, AuxNode};
use crate::engine::{find_augmenting_path, induced_components, odd_cycle_through_root, shortest_alt_path_avoiding};
use crate::engine::{check_simple, GeDecomposition, GePart, ReachSet};
use crate::error::{internal, invalid, Error, Result};
use crate::model::{
    edge_weight, fractional_value, BlockingProfile, HalfIntegralMatching, Halves, Matching, RoommatesInstance,
    WeightTable,
};
use crate::popularity::{
    build_dual_witness, extract_blocking_structure, popular_structure, switch_along, verify_witness,
    BlockingStructure, DualWitness,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionalStructure {
    /// Odd alternating cycle `cycle[0] .. cycle[k-1]` whose first node is the
    /// middle of a star; both edges at the middle are blocking edges of the
    /// star, the remaining edges alternate starting with a matching edge.
    StarCycle { cycle: Vec<usize> },
    /// Alternating path `x - v_1 - ... - r` with blocking first edge and
    /// matching last edge, and an odd alternating cycle starting at `r` whose
    /// two edges at `r` are non-matching. The two share only `r`.
    PathCycle { path: Vec<usize>, cycle: Vec<usize> },
}

impl FractionalStructure {
    pub fn kind(&self) -> &'static str {
        match self {
            FractionalStructure::StarCycle { .. } => "star-cycle",
            FractionalStructure::PathCycle { .. } => "path-cycle",
        }
    }

    pub fn validate(&self, inst: &RoommatesInstance, m: &Matching) -> Result<()> {
        let weights = WeightTable::compute(inst, m);
        let blocking = BlockingProfile::compute(inst, &weights);
        let n = inst.node_count();
        let edge = |a: usize, b: usize| -> Result<i32> {
            if a >= n || b >= n {
                return Err(invalid("structure node out of range"));
            }
            edge_weight(inst, m, a, b)
        };
        match self {
            FractionalStructure::StarCycle { cycle } => {
                let k = cycle.len();
                if k < 3 || k % 2 == 0 {
                    return Err(invalid("star cycle must be odd with at least 3 nodes"));
                }
                check_simple(cycle)?;
                let x = cycle[0];
                let (l1, l2) = (cycle[1], cycle[k - 1]);
                if edge(x, l1)? != 2 || edge(l2, x)? != 2 {
                    return Err(invalid("star cycle edges at the middle are not blocking"));
                }
                let star = blocking.star_of(l1);
                if star.is_none() || star != blocking.star_of(l2) || blocking.stars()[star.unwrap()].middle != x {
                    return Err(invalid("star cycle does not pass through two leaves of one star"));
                }
                check_alternating(inst, m, &cycle[1..])?;
            }
            FractionalStructure::PathCycle { path, cycle } => {
                if path.len() < 3 || path.len() % 2 == 0 {
                    return Err(invalid("path must have an odd number of nodes, at least 3"));
                }
                let k = cycle.len();
                if k < 3 || k % 2 == 0 {
                    return Err(invalid("cycle must be odd with at least 3 nodes"));
                }
                let r = path[path.len() - 1];
                if cycle[0] != r {
                    return Err(invalid("cycle does not start at the end of the path"));
                }
                let mut all = path.clone();
                all.extend_from_slice(&cycle[1..]);
                check_simple(&all)?;
                if edge(path[0], path[1])? != 2 {
                    return Err(invalid("first path edge is not blocking"));
                }
                check_alternating(inst, m, &path[1..])?;
                for i in 0..k {
                    let (a, b) = (cycle[i], cycle[(i + 1) % k]);
                    if edge(a, b)? != 0 || (m.partner(a) == Some(b)) != (i % 2 == 1) {
                        return Err(invalid(format!("cycle edge {a} {b} breaks alternation")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Path starting with a matching edge and alternating, with weight-0
/// non-matching edges; it must end on a matching edge.
fn check_alternating(inst: &RoommatesInstance, m: &Matching, nodes: &[usize]) -> Result<()> {
    if !nodes.len().is_multiple_of(2) {
        return Err(invalid("alternating segment must end on a matching edge"));
    }
    for (i, w) in nodes.windows(2).enumerate() {
        let matched = m.partner(w[0]) == Some(w[1]);
        if matched != (i % 2 == 0) || (!matched && edge_weight(inst, m, w[0], w[1])? != 0) {
            return Err(invalid(format!("edge {} {} breaks alternation", w[0], w[1])));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionalCertificate {
    Structure(FractionalStructure),
    /// `m` is not even popular; the integral improvement is reused.
    Unpopular {
        structure: BlockingStructure,
        better: Matching,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionalVerdict {
    FractionalPopular {
        witness: DualWitness,
    },
    NotFractionalPopular {
        certificate: FractionalCertificate,
        p: HalfIntegralMatching,
        /// Exactly 1 for a structure; the popularity margin when lifted.
        value: Halves,
    },
}

impl FractionalVerdict {
    pub fn is_fractional_popular(&self) -> bool {
        matches!(self, FractionalVerdict::FractionalPopular { .. })
    }
}

pub fn is_fractional_popular(inst: &RoommatesInstance, m: &Matching) -> Result<FractionalVerdict> {
    m.validate(inst)?;
    let aux = AuxGraph::build(inst, m);
    if let Some(path) = find_augmenting_path(aux.graph(), aux.mate())? {
        let structure = extract_blocking_structure(inst, m, &aux, &path)?;
        let (better, _) = switch_along(inst, m, &structure)?;
        let p = HalfIntegralMatching::from_matching(&better);
        let value = fractional_value(inst, m, &p)?;
        return Ok(FractionalVerdict::NotFractionalPopular {
            certificate: FractionalCertificate::Unpopular { structure, better },
            p,
            value,
        });
    }
    let (ge, reach) = popular_structure(&aux)?;
    if has_large_component(&aux, &ge, &reach) {
        let structure = extract_fractional_structure(inst, m, &aux, &ge, &reach)?;
        let p = structure_to_fractional_matching(inst, m, &structure)?;
        let value = fractional_value(inst, m, &p)?;
        if value != Halves(2) {
            return Err(Error::Internal(format!("fractional certificate has value {value}")));
        }
        return Ok(FractionalVerdict::NotFractionalPopular {
            certificate: FractionalCertificate::Structure(structure),
            p,
            value,
        });
    }
    let witness = build_dual_witness(inst, m, &aux, &ge, &reach)?;
    verify_witness(inst, m, &witness).map_err(|f| Error::Internal(format!("witness rejected: {f}")))?;
    if !witness.two_sets.is_empty() {
        return Err(internal("fractional witness carries odd sets"));
    }
    Ok(FractionalVerdict::FractionalPopular { witness })
}

fn reachable_d(aux: &AuxGraph, ge: &GeDecomposition, reach: &ReachSet) -> Vec<bool> {
    let count = aux.node_count();
    let part = ge.part_of(count);
    (0..count).map(|v| reach.contains(v) && part[v] == GePart::D).collect()
}

fn has_large_component(aux: &AuxGraph, ge: &GeDecomposition, reach: &ReachSet) -> bool {
    induced_components(aux.graph(), aux.mate(), &reachable_d(aux, ge, reach))
        .iter()
        .any(|(nodes, _)| nodes.len() >= 3)
}

/// Builds the structure from the reachable `D`-component with at least three
/// nodes whose smallest auxiliary id is lowest.
pub fn extract_fractional_structure(
    inst: &RoommatesInstance,
    m: &Matching,
    aux: &AuxGraph,
    ge: &GeDecomposition,
    reach: &ReachSet,
) -> Result<FractionalStructure> {
    let g = aux.graph();
    let mate = aux.mate();
    let in_xd = reachable_d(aux, ge, reach);
    let (comp, root) = induced_components(g, mate, &in_xd)
        .into_iter()
        .find(|(nodes, _)| nodes.len() >= 3)
        .ok_or_else(|| Error::PreconditionViolated("no reachable D-component with three or more nodes".into()))?;
    let root = root.ok_or_else(|| internal("component without a single root"))?;
    let original = |a: usize| aux.original(a).ok_or_else(|| internal(format!("aux node {a} is not original")));

    let c0 = odd_cycle_through_root(&comp, root, g, mate)?;
    let structure = match aux.node(root) {
        AuxNode::StarNode(k) => {
            let mut cycle = vec![aux.blocking().stars()[k].middle];
            for &a in &c0.nodes[1..] {
                cycle.push(original(a)?);
            }
            if cycle[1] > cycle[cycle.len() - 1] {
                cycle[1..].reverse();
            }
            FractionalStructure::StarCycle { cycle }
        }
        AuxNode::Original(r) => {
            let mut avoid = vec![false; g.node_count()];
            for &a in &comp {
                avoid[a] = a != root;
            }
            let p0 = shortest_alt_path_avoiding(g, mate, &aux.seeds(), root, &avoid)?;
            let seed = p0.nodes[0];
            let mut vs = p0.nodes[1..].iter().map(|&a| original(a)).collect::<Result<Vec<usize>>>()?;
            let v1 = vs[0];
            let x = match aux.node(seed) {
                AuxNode::StarNode(k) => aux.blocking().stars()[k].middle,
                AuxNode::BlockingNode(_) => {
                    let partners = aux.blocking().partners(v1);
                    partners
                        .iter()
                        .copied()
                        .find(|z| !vs.contains(z))
                        .or_else(|| partners.first().copied())
                        .ok_or_else(|| internal("blocking node without blocking edge"))?
                }
                _ => return Err(internal("path does not start at a seed")),
            };
            let x = match vs.iter().position(|&v| v == x) {
                None => x,
                // x sits at an odd position counting from 1: start over from
                // the blocking edge v_1 x instead.
                Some(j) if j % 2 == 0 => {
                    vs.drain(..j);
                    v1
                }
                Some(_) => return Err(internal("blocking edge closes an alternating cycle")),
            };
            let mut path = vec![x];
            path.extend(vs);
            let mut cycle = Vec::with_capacity(c0.nodes.len());
            for &a in &c0.nodes {
                cycle.push(original(a)?);
            }
            debug_assert_eq!(cycle[0], r);
            if cycle[1] > cycle[cycle.len() - 1] {
                cycle[1..].reverse();
            }
            FractionalStructure::PathCycle { path, cycle }
        }
        _ => return Err(internal("component root is neither an original nor a star node")),
    };
    structure
        .validate(inst, m)
        .map_err(|e| Error::Internal(format!("extracted fractional structure rejected: {e}")))?;
    Ok(structure)
}

/// The half-integral matching the structure certifies: `m` switched along the
/// path, 1/2 on the odd cycle, and loops on nodes whose partner was taken.
pub fn structure_to_fractional_matching(
    inst: &RoommatesInstance,
    m: &Matching,
    s: &FractionalStructure,
) -> Result<HalfIntegralMatching> {
    s.validate(inst, m)?;
    let (new_edges, cycle): (Vec<(usize, usize)>, &Vec<usize>) = match s {
        FractionalStructure::StarCycle { cycle } => (Vec::new(), cycle),
        FractionalStructure::PathCycle { path, cycle } => {
            let pairs = path[..path.len() - 1].chunks(2).map(|c| (c[0], c[1])).collect();
            (pairs, cycle)
        }
    };
    let n = inst.node_count();
    let mut touched = vec![false; n];
    for &(a, b) in &new_edges {
        touched[a] = true;
        touched[b] = true;
    }
    for &v in cycle {
        touched[v] = true;
    }
    let mut p = HalfIntegralMatching {
        ones: new_edges,
        loop_ones: Vec::new(),
        half_cycles: vec![cycle.clone()],
    };
    for v in 0..n {
        if touched[v] {
            continue;
        }
        match m.partner(v) {
            Some(w) if !touched[w] => {
                if v < w {
                    p.ones.push((v, w));
                }
            }
            _ => p.loop_ones.push(v),
        }
    }
    p.ones.sort_unstable();
    p.validate(inst)?;
    Ok(p)
}
