use popmatch::engine::{
    augment, find_augmenting_path, gallai_edmonds, is_maximum, odd_cycle_through_root, reachable_set,
    shortest_alt_path_to_root, AltPath, Graph,
};
use popmatch::oracle::{brute_gallai_edmonds, brute_max_matching_size};
use proptest::prelude::*;

fn random_graph(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if bits[k % bits.len()] {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Greedy matching over edges in the order given by `order`.
fn greedy(g: &Graph, order: &[usize]) -> Vec<Option<usize>> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut mate = vec![None; g.node_count()];
    for &i in order {
        if edges.is_empty() {
            break;
        }
        let (a, b) = edges[i % edges.len()];
        if mate[a].is_none() && mate[b].is_none() {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
    }
    mate
}

fn size(mate: &[Option<usize>]) -> usize {
    mate.iter().filter(|p| p.is_some()).count() / 2
}

fn maximize(g: &Graph, mate: &mut [Option<usize>]) {
    while let Some(p) = find_augmenting_path(g, mate).unwrap() {
        p.validate_augmenting(g, mate).unwrap();
        let before = size(mate);
        augment(mate, &p);
        assert_eq!(size(mate), before + 1);
    }
}

/// Length of the shortest simple alternating path from a seed to `target`
/// ending with a matching edge, by exhaustive depth-first enumeration.
fn brute_shortest(g: &Graph, mate: &[Option<usize>], seeds: &[usize], target: usize) -> Option<usize> {
    fn go(
        g: &Graph,
        mate: &[Option<usize>],
        v: usize,
        target: usize,
        len: usize,
        seen: &mut Vec<bool>,
        best: &mut Option<usize>,
    ) {
        for &w in g.neighbors(v) {
            if Some(w) == mate[v] || seen[w] {
                continue;
            }
            let Some(m) = mate[w] else { continue };
            if seen[m] {
                continue;
            }
            if m == target {
                *best = Some(best.map_or(len + 2, |b| b.min(len + 2)));
                continue;
            }
            seen[w] = true;
            seen[m] = true;
            go(g, mate, m, target, len + 2, seen, best);
            seen[w] = false;
            seen[m] = false;
        }
    }
    if seeds.contains(&target) {
        return Some(0);
    }
    let mut best = None;
    for &s in seeds {
        let mut seen = vec![false; g.node_count()];
        seen[s] = true;
        go(g, mate, s, target, 0, &mut seen, &mut best);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn maximality_and_decomposition(
        n in 1usize..=10,
        bits in prop::collection::vec(prop::bool::weighted(0.35), 45),
        order in prop::collection::vec(0usize..1000, 0..40),
    ) {
        let g = random_graph(n, &bits);
        let mut mate = greedy(&g, &order);
        let best = brute_max_matching_size(&g).unwrap();
        prop_assert_eq!(is_maximum(&g, &mate).unwrap(), size(&mate) == best);
        maximize(&g, &mut mate);
        prop_assert_eq!(size(&mate), best);

        let ge = gallai_edmonds(&g, &mate).unwrap();
        ge.check_properties(&g, &mate).unwrap();
        let brute = brute_gallai_edmonds(&g).unwrap();
        prop_assert_eq!(&ge.d, &brute.d);
        prop_assert_eq!(&ge.a, &brute.a);
        prop_assert_eq!(&ge.c, &brute.c);
        let sets: Vec<_> = ge.components.iter().map(|c| c.nodes.clone()).collect();
        let brute_sets: Vec<_> = brute.components.iter().map(|c| c.nodes.clone()).collect();
        prop_assert_eq!(sets, brute_sets);

        for comp in ge.components.iter().filter(|c| c.nodes.len() >= 3) {
            let cycle = odd_cycle_through_root(&comp.nodes, comp.root, &g, &mate).unwrap();
            prop_assert_eq!(cycle.root(), comp.root);
            cycle.validate(&g, &mate).unwrap();
        }
    }

    #[test]
    fn reachability_and_shortest_paths(
        n in 2usize..=10,
        bits in prop::collection::vec(prop::bool::weighted(0.4), 45),
        order in prop::collection::vec(0usize..1000, 0..40),
        pick in prop::collection::vec(any::<bool>(), 10),
    ) {
        let g = random_graph(n, &bits);
        let mut mate = greedy(&g, &order);
        maximize(&g, &mut mate);
        let free: Vec<usize> = (0..n).filter(|&v| mate[v].is_none()).collect();
        let seeds: Vec<usize> = free.iter().copied().filter(|&v| pick[v]).collect();
        let reach = reachable_set(&g, &mate, &seeds).unwrap();
        for v in 0..n {
            let expected = brute_shortest(&g, &mate, &seeds, v);
            prop_assert_eq!(reach.even[v], expected.is_some(), "even reach of {}", v);
            if let Some(len) = expected {
                let path = shortest_alt_path_to_root(&g, &mate, &seeds, v).unwrap();
                prop_assert_eq!(path.len(), len);
                prop_assert!(seeds.contains(&path.nodes[0]));
                prop_assert_eq!(*path.nodes.last().unwrap(), v);
                if len > 0 {
                    path.validate(&g, &mate, false).unwrap();
                }
            } else {
                prop_assert!(shortest_alt_path_to_root(&g, &mate, &seeds, v).is_err());
            }
        }
        // Odd reachability: some simple alternating path ends at v on a
        // non-matching edge, i.e. v is next to an even-reachable node other
        // than its partner along a path avoiding v.
        for &v in &reach.members {
            prop_assert!(reach.even[v] || reach.odd[v]);
            if let Some(w) = mate[v] {
                prop_assert!(reach.contains(w));
            }
        }
    }
}

#[test]
fn blocking_path_auxiliary_path() {
    use popmatch::aux_graph::build_aux;
    use popmatch::model::{Matching, RoommatesInstance};
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
    let aux = build_aux(&inst, &m);
    let path = find_augmenting_path(aux.graph(), aux.mate()).unwrap().unwrap();
    path.validate_augmenting(aux.graph(), aux.mate()).unwrap();
    let b_c = aux.b_of(2).unwrap();
    let b_d = aux.b_of(3).unwrap();
    let given = AltPath {
        nodes: vec![b_c, aux.aux_id(2).unwrap(), aux.aux_id(3).unwrap(), b_d],
    };
    given.validate_augmenting(aux.graph(), aux.mate()).unwrap();
}
