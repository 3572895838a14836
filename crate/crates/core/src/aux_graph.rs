//! The auxiliary graph in which popularity of `M` becomes maximality of `M`.
//!
//! Starting from the reduced graph, every node incident to a blocking edge gets
//! a pendant blocking node, except star leaves which share one star node per
//! star; all unmatched nodes are then contracted into a single node `u` and the
//! blocking edges are removed.

use std::fmt::Write as _;

use crate::engine::graph::Graph;
use crate::error::{invalid, Result};
use crate::model::{BlockingProfile, Matching, RoommatesInstance, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxNode {
    Original(usize),
    /// `b_v` for a node `v` incident to a blocking edge that is not a star leaf.
    BlockingNode(usize),
    /// `b_S` for the star with the given index.
    StarNode(usize),
    /// The contraction of all unmatched nodes.
    UNode,
}

#[derive(Debug, Clone)]
pub struct AuxGraph {
    nodes: Vec<AuxNode>,
    graph: Graph,
    mate: Vec<Option<usize>>,
    aux_of: Vec<Option<usize>>,
    b_map: Vec<Option<usize>>,
    u_node: Option<usize>,
    weights: WeightTable,
    blocking: BlockingProfile,
}

impl AuxGraph {
    pub fn build(inst: &RoommatesInstance, m: &Matching) -> Self {
        let n = inst.node_count();
        let weights = WeightTable::compute(inst, m);
        let blocking = BlockingProfile::compute(inst, &weights);

        let mut nodes = Vec::new();
        let mut aux_of = vec![None; n];
        for v in 0..n {
            if m.is_matched(v) {
                aux_of[v] = Some(nodes.len());
                nodes.push(AuxNode::Original(v));
            }
        }
        let mut b_map = vec![None; n];
        for v in 0..n {
            if blocking.in_blocking(v) && blocking.star_of(v).is_none() {
                b_map[v] = Some(nodes.len());
                nodes.push(AuxNode::BlockingNode(v));
            }
        }
        for (k, star) in blocking.stars().iter().enumerate() {
            let id = nodes.len();
            nodes.push(AuxNode::StarNode(k));
            for &leaf in &star.leaves {
                b_map[leaf] = Some(id);
            }
        }
        let u_node = (m.size() * 2 < n).then(|| {
            nodes.push(AuxNode::UNode);
            nodes.len() - 1
        });
        let place = |v: usize| aux_of[v].or(u_node).expect("unmatched node without u");

        // Matched originals get ascending ids below every added node, so
        // their rows come out sorted straight from the id-sorted lists.
        let originals = 2 * m.size();
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::with_capacity(2 * inst.edge_count() + n);
        let mut extra: Vec<Vec<usize>> = vec![Vec::new(); nodes.len() - originals];
        offsets.push(0);
        for v in (0..n).filter(|&v| m.is_matched(v)) {
            let mut to_u = false;
            for &(w, slot) in inst.id_row(v) {
                if weights.at(v, slot) == 0 {
                    match aux_of[w] {
                        Some(a) => targets.push(a),
                        None => to_u = true,
                    }
                }
            }
            if let Some(bv) = b_map[v] {
                targets.push(bv);
                extra[bv - originals].push(place(v));
            }
            if let (true, Some(u)) = (to_u, u_node) {
                targets.push(u);
                extra[u - originals].push(place(v));
            }
            offsets.push(targets.len());
        }
        for v in (0..n).filter(|&v| !m.is_matched(v)) {
            if let (Some(bv), Some(u)) = (b_map[v], u_node) {
                extra[bv - originals].push(u);
                extra[u - originals].push(bv);
            }
        }
        for mut row in extra {
            row.sort_unstable();
            row.dedup();
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        let graph = Graph::from_sorted_rows(offsets, targets);

        let mut mate = vec![None; nodes.len()];
        for v in 0..n {
            if let (Some(a), Some(w)) = (aux_of[v], m.partner(v)) {
                mate[a] = aux_of[w];
            }
        }

        AuxGraph {
            nodes,
            graph,
            mate,
            aux_of,
            b_map,
            u_node,
            weights,
            blocking,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `M` expressed on auxiliary node ids.
    pub fn mate(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn nodes(&self) -> &[AuxNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> AuxNode {
        self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn u_node(&self) -> Option<usize> {
        self.u_node
    }

    /// Auxiliary id of an original node; unmatched nodes live in `u`.
    pub fn aux_id(&self, v: usize) -> Option<usize> {
        self.aux_of.get(v).copied().flatten().or(self.u_node)
    }

    /// Original node behind an auxiliary id, if it is one.
    pub fn original(&self, id: usize) -> Option<usize> {
        match self.nodes[id] {
            AuxNode::Original(v) => Some(v),
            _ => None,
        }
    }

    /// `b(v)` for a node incident to a blocking edge.
    pub fn b_of(&self, v: usize) -> Result<usize> {
        self.b_map
            .get(v)
            .copied()
            .flatten()
            .ok_or_else(|| invalid(format!("node {v} is not incident to a blocking edge")))
    }

    /// Blocking nodes and star nodes, ascending.
    pub fn seeds(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&id| matches!(self.nodes[id], AuxNode::BlockingNode(_) | AuxNode::StarNode(_)))
            .collect()
    }

    pub fn blocking(&self) -> &BlockingProfile {
        &self.blocking
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn label(&self, inst: &RoommatesInstance, id: usize) -> String {
        match self.nodes[id] {
            AuxNode::Original(v) => inst.name(v),
            AuxNode::BlockingNode(v) => format!("b_{}", inst.name(v)),
            AuxNode::StarNode(k) => format!("b_S{k}"),
            AuxNode::UNode => "u".to_string(),
        }
    }

    /// Graphviz rendering; matched edges are drawn bold.
    pub fn to_dot(&self, inst: &RoommatesInstance) -> String {
        let mut out = String::from("graph aux {\n");
        for id in 0..self.nodes.len() {
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", self.label(inst, id));
        }
        for (a, b) in self.graph.edges() {
            let style = if self.mate[a] == Some(b) { " [style=bold]" } else { "" };
            let _ = writeln!(out, "  n{a} -- n{b}{style};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_aux(inst: &RoommatesInstance, m: &Matching) -> AuxGraph {
    AuxGraph::build(inst, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocking_path() -> (RoommatesInstance, Matching) {
        let inst = RoommatesInstance::new(vec![
            vec![2, 1],
            vec![0, 2],
            vec![1, 0, 3],
            vec![4, 5, 2, 6],
            vec![3, 5],
            vec![3, 4, 7],
            vec![3],
            vec![5],
        ])
        .unwrap();
        let m = Matching::from_pairs(&inst, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        (inst, m)
    }

    fn edge_labels(aux: &AuxGraph, inst: &RoommatesInstance) -> Vec<(String, String)> {
        let mut out: Vec<_> = aux
            .graph()
            .edges()
            .map(|(a, b)| {
                let (x, y) = (aux.label(inst, a), aux.label(inst, b));
                if x < y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn blocking_path_construction() {
        let (inst, m) = blocking_path();
        let aux = build_aux(&inst, &m);
        assert_eq!(aux.node_count(), 6 + 3 + 1 + 1);
        let b_a = aux.b_of(0).unwrap();
        let b_c = aux.b_of(2).unwrap();
        let b_d = aux.b_of(3).unwrap();
        let b_s = aux.b_of(4).unwrap();
        assert_eq!(aux.node(b_a), AuxNode::BlockingNode(0));
        assert_eq!(aux.node(b_c), AuxNode::BlockingNode(2));
        assert_eq!(aux.node(b_d), AuxNode::BlockingNode(3));
        assert_eq!(aux.node(b_s), AuxNode::StarNode(0));
        assert_eq!(aux.b_of(5).unwrap(), b_s);
        assert!(aux.b_of(1).is_err());

        let mut expected: Vec<(String, String)> = [
            ("0", "1"),
            ("1", "2"),
            ("2", "3"),
            ("4", "5"),
            ("0", "b_0"),
            ("2", "b_2"),
            ("3", "b_3"),
            ("4", "b_S0"),
            ("5", "b_S0"),
            ("3", "u"),
            ("5", "u"),
        ]
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect();
        expected.sort();
        assert_eq!(edge_labels(&aux, &inst), expected);

        let unmatched: Vec<usize> = (0..aux.node_count()).filter(|&i| aux.mate()[i].is_none()).collect();
        let mut seeds = aux.seeds();
        seeds.push(aux.u_node().unwrap());
        assert_eq!(unmatched, seeds);
    }

    #[test]
    fn empty_matching_on_single_edge() {
        let inst = RoommatesInstance::new(vec![vec![1], vec![0]]).unwrap();
        let aux = build_aux(&inst, &Matching::empty(2));
        assert_eq!(aux.node_count(), 3);
        let u = aux.u_node().unwrap();
        let (bx, by) = (aux.b_of(0).unwrap(), aux.b_of(1).unwrap());
        assert_ne!(bx, by);
        assert_eq!(aux.graph().neighbors(u), &[bx, by]);
        assert_eq!(aux.graph().edge_count(), 2);
    }

    #[test]
    fn stable_perfect_matching_adds_nothing() {
        // 4-cycle where everyone gets a first choice.
        let inst = RoommatesInstance::new(vec![vec![1, 3], vec![0, 2], vec![3, 1], vec![2, 0]]).unwrap();
        let m = Matching::from_pairs(&inst, &[(0, 1), (2, 3)]).unwrap();
        let aux = build_aux(&inst, &m);
        assert_eq!(aux.node_count(), 4);
        assert!(aux.u_node().is_none());
        assert!(aux.seeds().is_empty());
        assert!(aux.to_dot(&inst).contains("n0 -- n1 [style=bold]"));
    }
}
