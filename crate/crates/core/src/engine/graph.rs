/// Simple undirected graph in compressed adjacency form. Neighbor lists are
/// sorted ascending, without duplicates or self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds the graph from an undirected edge list. Parallel edges are merged
    /// and self-loops dropped. Runs in O(n + m).
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Self {
        let (offsets, targets) = sorted_adjacency(node_count, edges);
        Graph { offsets, targets }
    }

    /// Wraps adjacency rows that are already sorted, deduplicated and
    /// symmetric.
    pub(crate) fn from_sorted_rows(offsets: Vec<usize>, targets: Vec<usize>) -> Self {
        debug_assert!(offsets.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!((0..offsets.len() - 1).all(|v| targets[offsets[v]..offsets[v + 1]].windows(2).all(|w| w[0] < w[1])));
        Graph { offsets, targets }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && v < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `nodes`; node `nodes[i]` becomes `i`.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(nodes.len(), &edges)
    }
}

/// Counting-sort construction of sorted, deduplicated adjacency lists.
pub(crate) fn sorted_adjacency(node_count: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    // Bucket arcs by target first, then scatter them by source: every source
    // list then receives its targets in ascending order.
    let mut by_target = vec![0usize; node_count + 1];
    for &(a, b) in edges {
        if a != b {
            by_target[a + 1] += 1;
            by_target[b + 1] += 1;
        }
    }
    for i in 0..node_count {
        by_target[i + 1] += by_target[i];
    }
    let mut sources = vec![0usize; by_target[node_count]];
    let mut cursor = by_target.clone();
    for &(a, b) in edges {
        if a != b {
            sources[cursor[b]] = a;
            cursor[b] += 1;
            sources[cursor[a]] = b;
            cursor[a] += 1;
        }
    }

    let mut offsets = vec![0usize; node_count + 1];
    for &s in &sources {
        offsets[s + 1] += 1;
    }
    for i in 0..node_count {
        offsets[i + 1] += offsets[i];
    }
    let mut targets = vec![0usize; sources.len()];
    let mut cursor = offsets.clone();
    for t in 0..node_count {
        for &s in &sources[by_target[t]..by_target[t + 1]] {
            targets[cursor[s]] = t;
            cursor[s] += 1;
        }
    }

    // Duplicates are now adjacent; compact in place.
    let mut write = 0;
    let mut compact_offsets = vec![0usize; node_count + 1];
    for v in 0..node_count {
        let (lo, hi) = (offsets[v], offsets[v + 1]);
        let mut last = usize::MAX;
        for r in lo..hi {
            let t = targets[r];
            if t != last {
                targets[write] = t;
                write += 1;
                last = t;
            }
        }
        compact_offsets[v + 1] = write;
    }
    targets.truncate(write);
    (compact_offsets, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedupes_and_sorts() {
        let g = Graph::from_edges(4, &[(3, 0), (0, 1), (1, 0), (2, 2), (0, 2)]);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(1), &[0]);
        assert_eq!(g.neighbors(2), &[0]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let h = g.induced(&[4, 0, 1]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
