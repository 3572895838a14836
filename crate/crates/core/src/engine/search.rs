//! One phase of Edmonds' alternating-forest search.
//!
//! Blossoms are tracked with a union-find structure whose set representative
//! stores the current base. Even vertices remember how they were reached,
//! which is enough to expand any even vertex's path to its tree root into a
//! simple alternating path of the original graph.

use std::collections::VecDeque;

use super::graph::Graph;

pub(crate) const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Label {
    Unreached,
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    None,
    Root,
    /// Reached as the partner of an odd vertex.
    Mate,
    /// Odd vertex turned even when the blossom closed by edge `(x, y)` formed;
    /// `x` lies on this vertex's side of the blossom.
    Bridge(usize, usize),
}

pub(crate) enum SearchEnd {
    /// An alternating path between two free vertices, in graph ids.
    Augmenting(Vec<usize>),
    /// Edge `(x, y)` would close the first blossom based at an untouched root.
    RootBlossom(usize, usize),
    Exhausted,
}

pub(crate) struct Forest<'g> {
    g: &'g Graph,
    mate: &'g [usize],
    label: Vec<Label>,
    origin: Vec<Origin>,
    parent: Vec<usize>,
    tree: Vec<usize>,
    uf: Vec<usize>,
    rank: Vec<u8>,
    base: Vec<usize>,
    absorbed: Vec<bool>,
    mark: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl<'g> Forest<'g> {
    pub(crate) fn new(g: &'g Graph, mate: &'g [usize], roots: &[usize]) -> Self {
        let n = g.node_count();
        let mut forest = Forest {
            g,
            mate,
            label: vec![Label::Unreached; n],
            origin: vec![Origin::None; n],
            parent: vec![NIL; n],
            tree: vec![NIL; n],
            uf: (0..n).collect(),
            rank: vec![0; n],
            base: (0..n).collect(),
            absorbed: vec![false; n],
            mark: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        };
        for &r in roots {
            debug_assert_eq!(mate[r], NIL);
            forest.label[r] = Label::Even;
            forest.origin[r] = Origin::Root;
            forest.tree[r] = r;
            forest.queue.push_back(r);
        }
        forest
    }

    pub(crate) fn label(&self, v: usize) -> Label {
        self.label[v]
    }

    /// True for vertices inside a blossom other than the base of their
    /// outermost blossom.
    pub(crate) fn in_blossom_interior(&mut self, v: usize) -> bool {
        let r = self.find(v);
        self.absorbed[v] && self.base[r] != v
    }

    /// Runs the search to completion, stopping at the first augmenting path
    /// (and, when asked, at the first blossom based at a root).
    pub(crate) fn run(&mut self, stop_at_root_blossom: bool) -> SearchEnd {
        let g = self.g;
        while let Some(v) = self.queue.pop_front() {
            for &w in g.neighbors(v) {
                if self.mate[v] == w {
                    continue;
                }
                match self.label[w] {
                    Label::Odd => {}
                    Label::Unreached => {
                        if self.mate[w] == NIL {
                            let mut path = self.path_to_root(v);
                            path.reverse();
                            path.push(w);
                            return SearchEnd::Augmenting(path);
                        }
                        let m = self.mate[w];
                        self.label[w] = Label::Odd;
                        self.parent[w] = v;
                        self.tree[w] = self.tree[v];
                        self.label[m] = Label::Even;
                        self.origin[m] = Origin::Mate;
                        self.tree[m] = self.tree[v];
                        self.queue.push_back(m);
                    }
                    Label::Even => {
                        let (rv, rw) = (self.find(v), self.find(w));
                        if rv == rw {
                            continue;
                        }
                        if self.tree[v] != self.tree[w] {
                            let mut path = self.path_to_root(v);
                            path.reverse();
                            path.extend(self.path_to_root(w));
                            return SearchEnd::Augmenting(path);
                        }
                        let b = self.lca(self.base[rv], self.base[rw]);
                        if stop_at_root_blossom && self.origin[b] == Origin::Root && !self.absorbed[b] {
                            return SearchEnd::RootBlossom(v, w);
                        }
                        self.mark_side(v, w, b);
                        self.mark_side(w, v, b);
                    }
                }
            }
        }
        SearchEnd::Exhausted
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.uf[r] != r {
            r = self.uf[r];
        }
        let mut x = v;
        while self.uf[x] != r {
            let next = self.uf[x];
            self.uf[x] = r;
            x = next;
        }
        r
    }

    /// Merges the set of `x` into the set of `b`, keeping `b` as base.
    fn merge_into(&mut self, x: usize, b: usize) {
        let (rx, rb) = (self.find(x), self.find(b));
        if rx == rb {
            return;
        }
        let root = if self.rank[rx] < self.rank[rb] {
            self.uf[rx] = rb;
            rb
        } else if self.rank[rx] > self.rank[rb] {
            self.uf[rb] = rx;
            rx
        } else {
            self.uf[rb] = rx;
            self.rank[rx] += 1;
            rx
        };
        self.base[root] = b;
    }

    fn step_up(&mut self, base: usize) -> usize {
        if self.origin[base] == Origin::Root {
            NIL
        } else {
            let p = self.parent[self.mate[base]];
            let r = self.find(p);
            self.base[r]
        }
    }

    fn lca(&mut self, a: usize, c: usize) -> usize {
        self.stamp += 1;
        let (mut a, mut c) = (a, c);
        loop {
            if a != NIL {
                if self.mark[a] == self.stamp {
                    return a;
                }
                self.mark[a] = self.stamp;
                a = self.step_up(a);
            }
            std::mem::swap(&mut a, &mut c);
        }
    }

    fn mark_side(&mut self, x: usize, y: usize, b: usize) {
        let r = self.find(x);
        let mut u = self.base[r];
        while u != b {
            let m = self.mate[u];
            self.label[m] = Label::Even;
            self.origin[m] = Origin::Bridge(x, y);
            self.queue.push_back(m);
            self.absorbed[u] = true;
            self.absorbed[m] = true;
            let next = self.parent[m];
            self.merge_into(u, b);
            self.merge_into(m, b);
            let rn = self.find(next);
            u = self.base[rn];
        }
        self.absorbed[b] = true;
    }

    /// Even alternating path from even vertex `v` to its tree root.
    pub(crate) fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(v, NIL, &mut out);
        out
    }

    /// Appends the path from `v` towards the root, stopping after `stop`.
    fn walk(&self, mut v: usize, stop: usize, out: &mut Vec<usize>) {
        loop {
            out.push(v);
            if v == stop {
                return;
            }
            match self.origin[v] {
                Origin::Root | Origin::None => return,
                Origin::Mate => {
                    let m = self.mate[v];
                    out.push(m);
                    if m == stop {
                        return;
                    }
                    v = self.parent[m];
                }
                Origin::Bridge(x, y) => {
                    let mut seg = Vec::new();
                    self.walk(x, self.mate[v], &mut seg);
                    seg.reverse();
                    if let Some(pos) = seg.iter().position(|&z| z == stop) {
                        out.extend_from_slice(&seg[..=pos]);
                        return;
                    }
                    out.extend_from_slice(&seg);
                    v = y;
                }
            }
        }
    }
}
