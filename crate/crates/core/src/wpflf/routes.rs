use std::collections::{BTreeSet, VecDeque};

use crate::wpflf::network::Link;

/// Up to `k` loopless paths from `source` to `target`, ordered by hop count
/// and then by arc-index sequence (Yen's algorithm).
pub fn k_shortest_routes(node_count: usize, arcs: &[Link], source: usize, target: usize, k: usize) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    if k == 0 || source == target {
        return found;
    }
    let no_arcs = vec![false; arcs.len()];
    let no_nodes = vec![false; node_count];
    let Some(first) = best_path(node_count, arcs, source, target, &no_arcs, &no_nodes) else {
        return found;
    };
    found.push(first);
    // (hops, arcs) orders candidates exactly as required
    let mut candidates: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    while found.len() < k {
        let last = found.last().expect("non-empty").clone();
        let mut banned_nodes = vec![false; node_count];
        let mut spur = source;
        for i in 0..last.len() {
            let root = &last[..i];
            let mut banned_arcs = vec![false; arcs.len()];
            for p in &found {
                if p.len() > i && p[..i] == *root {
                    banned_arcs[p[i]] = true;
                }
            }
            if let Some(tail) = best_path(node_count, arcs, spur, target, &banned_arcs, &banned_nodes) {
                let mut path = root.to_vec();
                path.extend(tail);
                if !found.contains(&path) {
                    candidates.insert((path.len(), path));
                }
            }
            banned_nodes[spur] = true;
            spur = arcs[last[i]].dest;
        }
        match candidates.pop_first() {
            Some((_, p)) => found.push(p),
            None => break,
        }
    }
    found
}

/// Fewest-hop path avoiding banned arcs and nodes; among those, the
/// lexicographically smallest arc sequence.
fn best_path(
    node_count: usize,
    arcs: &[Link],
    source: usize,
    target: usize,
    banned_arcs: &[bool],
    banned_nodes: &[bool],
) -> Option<Vec<usize>> {
    if banned_nodes[source] || banned_nodes[target] {
        return None;
    }
    let usable = |a: usize| !banned_arcs[a] && !banned_nodes[arcs[a].origin] && !banned_nodes[arcs[a].dest];
    // hop distance to target over reversed arcs
    let mut dist = vec![usize::MAX; node_count];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for (a, link) in arcs.iter().enumerate() {
            if link.dest == v && usable(a) && dist[link.origin] == usize::MAX {
                dist[link.origin] = dist[v] + 1;
                queue.push_back(link.origin);
            }
        }
    }
    if dist[source] == usize::MAX {
        return None;
    }
    let mut path = Vec::with_capacity(dist[source]);
    let mut cur = source;
    while cur != target {
        let a = (0..arcs.len())
            .find(|&a| usable(a) && arcs[a].origin == cur && dist[arcs[a].dest] == dist[cur] - 1)
            .expect("distance labels guarantee a next arc");
        path.push(a);
        cur = arcs[a].dest;
    }
    Some(path)
}
