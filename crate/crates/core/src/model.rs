//! Roommates instances, matchings, votes and the vote-derived weights.
//!
//! Unmatched nodes are represented by `None` partners; the loop of an
//! unmatched node is never stored explicitly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::graph::Graph;
use crate::error::{invalid, Error, Result};

const NO_RANK: usize = usize::MAX;

/// A graph with a strict preference list at every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoommatesInstance {
    offsets: Vec<usize>,
    /// Neighbors of each node, most preferred first.
    prefs: Vec<usize>,
    /// `mirror[k]` is the rank that neighbor `prefs[k]` gives to the owner of slot `k`.
    mirror: Vec<usize>,
    /// `(neighbor, rank)` per node, sorted by neighbor id.
    by_id: Vec<(usize, usize)>,
    labels: BTreeMap<usize, String>,
}

impl RoommatesInstance {
    /// Builds an instance from per-node preference lists (most preferred first).
    pub fn new(lists: Vec<Vec<usize>>) -> Result<Self> {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut prefs = Vec::new();
        let mut slot = vec![NO_RANK; n];
        for (v, list) in lists.iter().enumerate() {
            for (i, &w) in list.iter().enumerate() {
                if w >= n {
                    return Err(invalid(format!("node {v} lists {w}, which is out of range 0..{n}")));
                }
                if w == v {
                    return Err(invalid(format!("node {v} lists itself")));
                }
                if slot[w] != NO_RANK {
                    return Err(invalid(format!("node {v} lists {w} twice")));
                }
                slot[w] = i;
            }
            for &w in list {
                slot[w] = NO_RANK;
            }
            prefs.extend_from_slice(list);
            offsets.push(prefs.len());
        }

        // incoming[x] = (v, rank of x in v's list), v ascending.
        let mut in_offsets = vec![0usize; n + 1];
        for &x in &prefs {
            in_offsets[x + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut incoming = vec![(0usize, 0usize); prefs.len()];
        let mut cursor = in_offsets.clone();
        for v in 0..n {
            for (j, &x) in prefs[offsets[v]..offsets[v + 1]].iter().enumerate() {
                incoming[cursor[x]] = (v, j);
                cursor[x] += 1;
            }
        }

        let mut mirror = vec![0usize; prefs.len()];
        let mut by_id = Vec::with_capacity(prefs.len());
        let mut seen = vec![false; n];
        for x in 0..n {
            let own = &prefs[offsets[x]..offsets[x + 1]];
            for (i, &w) in own.iter().enumerate() {
                slot[w] = i;
            }
            for &(v, j) in &incoming[in_offsets[x]..in_offsets[x + 1]] {
                if slot[v] == NO_RANK {
                    return Err(Error::Asymmetric { lists: v, missing: x });
                }
                mirror[offsets[x] + slot[v]] = j;
                by_id.push((v, slot[v]));
                seen[v] = true;
            }
            for &w in own {
                if !seen[w] {
                    return Err(Error::Asymmetric { lists: x, missing: w });
                }
            }
            for &w in own {
                slot[w] = NO_RANK;
                seen[w] = false;
            }
        }

        Ok(RoommatesInstance {
            offsets,
            prefs,
            mirror,
            by_id,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Display name of a node: its label if one was given, else its id.
    pub fn name(&self, v: usize) -> String {
        self.labels.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.prefs.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v`, most preferred first.
    pub fn preferences(&self, v: usize) -> &[usize] {
        &self.prefs[self.offsets[v]..self.offsets[v + 1]]
    }

    /// 0-based rank of `w` in the list of `v` (0 = most preferred).
    pub fn rank(&self, v: usize, w: usize) -> Option<usize> {
        if v >= self.node_count() {
            return None;
        }
        let row = &self.by_id[self.offsets[v]..self.offsets[v + 1]];
        row.binary_search_by_key(&w, |&(x, _)| x).ok().map(|k| row[k].1)
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.rank(u, v).is_some()
    }

    /// `(neighbor, slot)` pairs of `v`, ascending by neighbor.
    pub(crate) fn id_row(&self, v: usize) -> &[(usize, usize)] {
        &self.by_id[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.by_id[self.offsets[u]..self.offsets[u + 1]]
                .iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, _)| (u, v))
        })
    }

    /// The underlying graph, ignoring preferences.
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.node_count(), &self.edges().collect::<Vec<_>>())
    }

    /// Iterates `(u, slot, v, rank of u at v)` over all arcs.
    fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            (self.offsets[u]..self.offsets[u + 1])
                .map(move |k| (u, k - self.offsets[u], self.prefs[k], self.mirror[k]))
        })
    }
}

/// Partner assignment; `None` marks an unmatched node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(node_count: usize) -> Self {
        Matching {
            mate: vec![None; node_count],
        }
    }

    /// Builds a matching of `inst` from a list of pairs.
    pub fn from_pairs(inst: &RoommatesInstance, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(inst.node_count());
        for &(u, v) in pairs {
            if !inst.is_edge(u, v) {
                return Err(invalid(format!("pair {u} {v} is not an edge of the instance")));
            }
            for x in [u, v] {
                if m.mate[x].is_some() {
                    return Err(invalid(format!("node {x} appears in more than one pair")));
                }
            }
            m.mate[u] = Some(v);
            m.mate[v] = Some(u);
        }
        Ok(m)
    }

    /// Wraps a partner array after checking symmetry and edge membership.
    pub fn from_mates(inst: &RoommatesInstance, mate: Vec<Option<usize>>) -> Result<Self> {
        let m = Matching { mate };
        m.validate(inst)?;
        Ok(m)
    }

    pub fn validate(&self, inst: &RoommatesInstance) -> Result<()> {
        if self.mate.len() != inst.node_count() {
            return Err(invalid(format!(
                "matching covers {} nodes, instance has {}",
                self.mate.len(),
                inst.node_count()
            )));
        }
        for (v, &p) in self.mate.iter().enumerate() {
            if let Some(w) = p {
                if w >= self.mate.len() || self.mate[w] != Some(v) {
                    return Err(invalid(format!("partner of {v} is {w}, but not conversely")));
                }
                if !inst.is_edge(v, w) {
                    return Err(invalid(format!("matched pair {v} {w} is not an edge")));
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.mate.len()
    }

    #[inline]
    pub fn partner(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn is_matched(&self, v: usize) -> bool {
        self.mate[v].is_some()
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|p| p.is_some()).count() / 2
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, &p)| p.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }
}

/// Value of a vote comparison for node `u` between `v` and `w`.
pub fn vote(inst: &RoommatesInstance, u: usize, v: Option<usize>, w: Option<usize>) -> Result<i32> {
    if u >= inst.node_count() {
        return Err(invalid(format!("node {u} out of range")));
    }
    let rank_of = |x: Option<usize>| -> Result<usize> {
        match x {
            None => Ok(NO_RANK),
            Some(x) => inst
                .rank(u, x)
                .ok_or_else(|| invalid(format!("{x} is not a neighbor of {u}"))),
        }
    };
    Ok(compare_ranks(rank_of(v)?, rank_of(w)?))
}

#[inline]
fn compare_ranks(new: usize, old: usize) -> i32 {
    match new.cmp(&old) {
        Ordering::Less => 1,
        Ordering::Equal => 0,
        Ordering::Greater => -1,
    }
}

fn partner_ranks(inst: &RoommatesInstance, m: &Matching) -> Vec<usize> {
    (0..inst.node_count())
        .map(|v| m.partner(v).and_then(|w| inst.rank(v, w)).unwrap_or(NO_RANK))
        .collect()
}

/// `w_M(uv)`: the sum of both endpoint votes for `uv` against their partners.
pub fn edge_weight(inst: &RoommatesInstance, m: &Matching, u: usize, v: usize) -> Result<i32> {
    if !inst.is_edge(u, v) {
        return Err(invalid(format!("{u} {v} is not an edge")));
    }
    Ok(vote(inst, u, Some(v), m.partner(u))? + vote(inst, v, Some(u), m.partner(v))?)
}

/// Weight of the loop at `v`: 0 when `v` is unmatched, -1 otherwise.
pub fn loop_weight(m: &Matching, v: usize) -> i32 {
    if m.is_matched(v) {
        -1
    } else {
        0
    }
}

/// Weights of all edges relative to one matching, computed in O(|E|).
#[derive(Debug, Clone)]
pub struct WeightTable {
    /// Per arc, aligned with the instance's preference slots.
    arc: Vec<i8>,
    offsets: Vec<usize>,
}

impl WeightTable {
    pub fn compute(inst: &RoommatesInstance, m: &Matching) -> Self {
        let pr = partner_ranks(inst, m);
        let mut arc = Vec::with_capacity(inst.prefs.len());
        for u in 0..inst.node_count() {
            let (lo, hi) = (inst.offsets[u], inst.offsets[u + 1]);
            for k in lo..hi {
                let (v, j) = (inst.prefs[k], inst.mirror[k]);
                arc.push((compare_ranks(k - lo, pr[u]) + compare_ranks(j, pr[v])) as i8);
            }
        }
        WeightTable {
            arc,
            offsets: inst.offsets.clone(),
        }
    }

    /// Weight of the edge between `u` and its `slot`-th ranked neighbor.
    #[inline]
    pub fn at(&self, u: usize, slot: usize) -> i32 {
        self.arc[self.offsets[u] + slot] as i32
    }

    /// `(u, v, weight)` for every edge with `u < v`.
    pub fn edges<'a>(&'a self, inst: &'a RoommatesInstance) -> impl Iterator<Item = (usize, usize, i32)> + 'a {
        inst.arcs()
            .filter(|&(u, _, v, _)| u < v)
            .map(move |(u, i, v, _)| (u, v, self.at(u, i)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Star {
    pub middle: usize,
    pub leaves: Vec<usize>,
}

/// The blocking edges of a matching with the derived leaf and star data.
#[derive(Debug, Clone)]
pub struct BlockingProfile {
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    partners: Vec<usize>,
    stars: Vec<Star>,
    star_of: Vec<Option<usize>>,
}

impl BlockingProfile {
    pub fn compute(inst: &RoommatesInstance, weights: &WeightTable) -> Self {
        let n = inst.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut partners = Vec::new();
        offsets.push(0);
        for u in 0..n {
            partners.extend(
                inst.id_row(u)
                    .iter()
                    .filter(|&&(_, slot)| weights.at(u, slot) == 2)
                    .map(|&(v, _)| v),
            );
            offsets.push(partners.len());
        }
        let mut profile = BlockingProfile {
            edges: Vec::new(),
            offsets,
            partners,
            stars: Vec::new(),
            star_of: vec![None; n],
        };
        profile.edges = (0..n)
            .flat_map(|u| profile.partners(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect();
        for z in 0..n {
            let leaves: Vec<usize> = profile
                .partners(z)
                .iter()
                .copied()
                .filter(|&v| profile.is_leaf(v))
                .collect();
            if leaves.len() >= 2 {
                let k = profile.stars.len();
                for &l in &leaves {
                    profile.star_of[l] = Some(k);
                }
                profile.stars.push(Star { middle: z, leaves });
            }
        }
        profile
    }

    /// Blocking edges `(u, v)`, `u < v`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Blocking neighbors of `v`, ascending.
    pub fn partners(&self, v: usize) -> &[usize] {
        &self.partners[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn is_blocking(&self, u: usize, v: usize) -> bool {
        self.partners(u).binary_search(&v).is_ok()
    }

    /// True when `v` is incident to exactly one blocking edge.
    pub fn is_leaf(&self, v: usize) -> bool {
        self.offsets[v + 1] - self.offsets[v] == 1
    }

    pub fn in_blocking(&self, v: usize) -> bool {
        self.offsets[v + 1] > self.offsets[v]
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    /// Index of the star in which `v` is a leaf.
    pub fn star_of(&self, v: usize) -> Option<usize> {
        self.star_of[v]
    }
}

pub fn blocking_edges(inst: &RoommatesInstance, m: &Matching) -> Vec<(usize, usize)> {
    BlockingProfile::compute(inst, &WeightTable::compute(inst, m)).edges
}

pub fn stars(inst: &RoommatesInstance, m: &Matching) -> Vec<Star> {
    BlockingProfile::compute(inst, &WeightTable::compute(inst, m)).stars
}

/// The instance graph with every weight -2 edge removed.
pub fn reduced_graph(inst: &RoommatesInstance, m: &Matching) -> Graph {
    let weights = WeightTable::compute(inst, m);
    let kept: Vec<(usize, usize)> = weights
        .edges(inst)
        .filter(|&(_, _, w)| w != -2)
        .map(|(u, v, _)| (u, v))
        .collect();
    Graph::from_edges(inst.node_count(), &kept)
}

/// Number of nodes preferring `other` minus the number preferring `m`.
pub fn delta(inst: &RoommatesInstance, m: &Matching, other: &Matching) -> Result<i64> {
    m.validate(inst)?;
    other.validate(inst)?;
    let mut total = 0i64;
    for v in 0..inst.node_count() {
        total += vote(inst, v, other.partner(v), m.partner(v))? as i64;
    }
    Ok(total)
}

/// `delta` for a matching `other` that agrees with the valid matching `m`
/// outside `touched`: validates `other` on `touched` and sums only those votes.
pub(crate) fn local_delta(inst: &RoommatesInstance, m: &Matching, other: &Matching, touched: &[usize]) -> Result<i64> {
    let mut total = 0i64;
    for &v in touched {
        if let Some(w) = other.mate[v] {
            if other.mate[w] != Some(v) || !inst.is_edge(v, w) {
                return Err(invalid(format!("switched partner of {v} is inconsistent")));
            }
        }
        total += vote(inst, v, other.partner(v), m.partner(v))? as i64;
    }
    Ok(total)
}

/// A number stored as twice its value; the only fractions needed are halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Halves(pub i64);

impl Halves {
    pub fn from_int(v: i64) -> Self {
        Halves(2 * v)
    }

    pub fn times_two(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Halves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A vertex of the fractional perfect-matching polytope of the graph with loops:
/// 1 on some edges and loops, 1/2 on the edges of vertex-disjoint odd cycles.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalfIntegralMatching {
    pub ones: Vec<(usize, usize)>,
    pub loop_ones: Vec<usize>,
    pub half_cycles: Vec<Vec<usize>>,
}

impl HalfIntegralMatching {
    /// The 0/1 vector of `m` with loops on its unmatched nodes.
    pub fn from_matching(m: &Matching) -> Self {
        HalfIntegralMatching {
            ones: m.pairs(),
            loop_ones: (0..m.node_count()).filter(|&v| !m.is_matched(v)).collect(),
            half_cycles: Vec::new(),
        }
    }

    /// Checks that every node is covered exactly once and all parts are edges.
    pub fn validate(&self, inst: &RoommatesInstance) -> Result<()> {
        let n = inst.node_count();
        let mut covered = vec![false; n];
        let mut cover = |v: usize| -> Result<()> {
            if v >= n {
                return Err(invalid(format!("node {v} out of range")));
            }
            if covered[v] {
                return Err(invalid(format!("node {v} is covered more than once")));
            }
            covered[v] = true;
            Ok(())
        };
        for &(u, v) in &self.ones {
            if !inst.is_edge(u, v) {
                return Err(invalid(format!("{u} {v} is not an edge")));
            }
            cover(u)?;
            cover(v)?;
        }
        for &v in &self.loop_ones {
            cover(v)?;
        }
        for cycle in &self.half_cycles {
            if cycle.len() < 3 || cycle.len() % 2 == 0 {
                return Err(invalid(format!("half cycle of length {} is not odd and >= 3", cycle.len())));
            }
            for (i, &v) in cycle.iter().enumerate() {
                let w = cycle[(i + 1) % cycle.len()];
                if !inst.is_edge(v, w) {
                    return Err(invalid(format!("cycle step {v} {w} is not an edge")));
                }
                cover(v)?;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(invalid(format!("node {v} is not covered")));
        }
        Ok(())
    }
}

/// Exact value of `sum_e w_M(e) p_e`, loops included.
pub fn fractional_value(inst: &RoommatesInstance, m: &Matching, p: &HalfIntegralMatching) -> Result<Halves> {
    p.validate(inst)?;
    m.validate(inst)?;
    let mut twice = 0i64;
    for &(u, v) in &p.ones {
        twice += 2 * edge_weight(inst, m, u, v)? as i64;
    }
    for &v in &p.loop_ones {
        twice += 2 * loop_weight(m, v) as i64;
    }
    for cycle in &p.half_cycles {
        for (i, &v) in cycle.iter().enumerate() {
            twice += edge_weight(inst, m, v, cycle[(i + 1) % cycle.len()])? as i64;
        }
    }
    Ok(Halves(twice))
}

/// Matching obtained by adding `new_edges` and dropping every old pair that touches them.
/// Switches `m` to `new_edges`, also returning every node whose partner may
/// change.
pub(crate) fn switch_tracked(m: &Matching, new_edges: &[(usize, usize)]) -> (Matching, Vec<usize>) {
    let mut mate = m.mate.clone();
    let ends: BTreeSet<usize> = new_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut touched: BTreeSet<usize> = ends.clone();
    for &v in &ends {
        if let Some(w) = m.mate[v] {
            mate[w] = None;
            touched.insert(w);
        }
    }
    for &(a, b) in new_edges {
        mate[a] = Some(b);
        mate[b] = Some(a);
    }
    (Matching { mate }, touched.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocking_path() -> (RoommatesInstance, Matching) {
        // a b c d e f g h = 0..7
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

    #[test]
    fn votes_on_blocking_path() {
        let (inst, _) = blocking_path();
        assert_eq!(vote(&inst, 0, Some(2), Some(1)).unwrap(), 1);
        assert_eq!(vote(&inst, 0, Some(1), Some(2)).unwrap(), -1);
        assert_eq!(vote(&inst, 3, Some(6), Some(6)).unwrap(), 0);
        assert_eq!(vote(&inst, 3, Some(6), None).unwrap(), 1);
        assert_eq!(vote(&inst, 3, None, None).unwrap(), 0);
        assert!(matches!(vote(&inst, 0, Some(7), None), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn weights_on_blocking_path() {
        let (inst, m) = blocking_path();
        assert_eq!(edge_weight(&inst, &m, 0, 2).unwrap(), 2);
        assert_eq!(edge_weight(&inst, &m, 0, 1).unwrap(), 0);
        assert_eq!(edge_weight(&inst, &m, 1, 2).unwrap(), 0);
        assert_eq!(loop_weight(&m, 6), 0);
        assert_eq!(loop_weight(&m, 0), -1);
        let table = WeightTable::compute(&inst, &m);
        for (u, v, w) in table.edges(&inst) {
            assert_eq!(w, edge_weight(&inst, &m, u, v).unwrap());
        }
    }

    #[test]
    fn blocking_and_stars_on_blocking_path() {
        let (inst, m) = blocking_path();
        assert_eq!(blocking_edges(&inst, &m), vec![(0, 2), (3, 4), (3, 5)]);
        assert_eq!(
            stars(&inst, &m),
            vec![Star {
                middle: 3,
                leaves: vec![4, 5]
            }]
        );
    }

    #[test]
    fn delta_on_blocking_path() {
        let (inst, m) = blocking_path();
        let better = Matching::from_pairs(&inst, &[(0, 2), (3, 5)]).unwrap();
        assert_eq!(delta(&inst, &m, &better).unwrap(), 2);
        assert_eq!(delta(&inst, &better, &m).unwrap(), -2);
        assert_eq!(delta(&inst, &m, &m).unwrap(), 0);
    }

    #[test]
    fn empty_matching_makes_every_edge_blocking() {
        let (inst, _) = blocking_path();
        let empty = Matching::empty(inst.node_count());
        assert_eq!(blocking_edges(&inst, &empty).len(), inst.edge_count());
        assert_eq!(reduced_graph(&inst, &empty), inst.graph());
        assert_eq!(loop_weight(&empty, 3), 0);
    }

    #[test]
    fn rejects_bad_lists() {
        assert!(matches!(
            RoommatesInstance::new(vec![vec![1], vec![]]),
            Err(Error::Asymmetric { lists: 0, missing: 1 })
        ));
        assert!(matches!(
            RoommatesInstance::new(vec![vec![], vec![0]]),
            Err(Error::Asymmetric { lists: 1, missing: 0 })
        ));
        assert!(RoommatesInstance::new(vec![vec![0]]).is_err());
        assert!(RoommatesInstance::new(vec![vec![1, 1], vec![0]]).is_err());
        assert!(RoommatesInstance::new(vec![vec![5], vec![0]]).is_err());
    }

    #[test]
    fn matching_validation() {
        let (inst, _) = blocking_path();
        assert!(Matching::from_pairs(&inst, &[(0, 3)]).is_err());
        assert!(Matching::from_pairs(&inst, &[(0, 1), (1, 2)]).is_err());
        let mut mate = vec![None; 8];
        mate[0] = Some(1);
        assert!(Matching::from_mates(&inst, mate).is_err());
    }

    #[test]
    fn halves_display() {
        assert_eq!(Halves(2).to_string(), "1");
        assert_eq!(Halves(3).to_string(), "3/2");
        assert_eq!(Halves(-1).to_string(), "-1/2");
    }

    #[test]
    fn half_integral_validation() {
        let (inst, m) = blocking_path();
        let p = HalfIntegralMatching::from_matching(&m);
        assert_eq!(fractional_value(&inst, &m, &p).unwrap(), Halves(0));
        let mut bad = p.clone();
        bad.loop_ones.push(0);
        assert!(bad.validate(&inst).is_err());
        let even = HalfIntegralMatching {
            ones: vec![(4, 5), (3, 6)],
            loop_ones: vec![7],
            half_cycles: vec![vec![0, 1, 2, 0]],
        };
        assert!(even.validate(&inst).is_err());
    }
}
