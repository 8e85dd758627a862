use rand::Rng;

use crate::linkage::dsm::DependencyMatrix;

/// Binary merge hierarchy over gene clusters.
///
/// Clusters are stored in creation order: the `n` singletons first, then one
/// cluster per merge, ending with the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkageTree {
    n: usize,
    clusters: Vec<Vec<usize>>,
    children: Vec<Option<(usize, usize)>>,
    parent: Vec<Option<usize>>,
}

impl LinkageTree {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All `2n - 1` clusters, each sorted.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn children(&self, cluster: usize) -> Option<(usize, usize)> {
        self.children[cluster]
    }

    pub fn parent(&self, cluster: usize) -> Option<usize> {
        self.parent[cluster]
    }

    pub fn root(&self) -> usize {
        self.clusters.len() - 1
    }

    /// Optimal Mixing masks: every cluster except the root.
    pub fn mixing_masks(&self) -> &[Vec<usize>] {
        let end = if self.n > 1 { self.clusters.len() - 1 } else { 1 };
        &self.clusters[..end]
    }

    /// Merged clusters below the root (non-singleton, non-root).
    pub fn internal_masks(&self) -> &[Vec<usize>] {
        if self.n > 2 {
            &self.clusters[self.n..self.clusters.len() - 1]
        } else {
            &[]
        }
    }

    /// One cluster per line as space-separated sorted gene indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clusters {
            let line: Vec<String> = c.iter().map(|g| g.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Average-linkage agglomerative clustering of `dsm`.
///
/// Each step merges the two current clusters with the largest mean
/// cross-pair strength. Exact ties pick a random cluster among those with a
/// maximal pair, then a random maximal partner.
pub fn build_linkage_tree<R: Rng + ?Sized>(dsm: &DependencyMatrix, rng: &mut R) -> LinkageTree {
    let n = dsm.n();
    let total = if n == 0 { 0 } else { 2 * n - 1 };
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|g| vec![g]).collect();
    clusters.reserve(total.saturating_sub(n));
    let mut children = vec![None; n];
    let mut parent = vec![None; total];

    // slot s holds cluster id[s]; a merge reuses the lower slot
    let mut id: Vec<usize> = (0..n).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sim = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sim[i * n + j] = dsm.get(i, j);
            }
        }
    }
    let mut row_max = vec![f64::NEG_INFINITY; n];
    let mut row_arg = vec![usize::MAX; n];
    let rescan = |s: usize, active: &[usize], sim: &[f64], row_max: &mut [f64], row_arg: &mut [usize]| {
        row_max[s] = f64::NEG_INFINITY;
        row_arg[s] = usize::MAX;
        for &t in active {
            if t != s && sim[s * n + t] > row_max[s] {
                row_max[s] = sim[s * n + t];
                row_arg[s] = t;
            }
        }
    };
    for &s in &active {
        rescan(s, &active, &sim, &mut row_max, &mut row_arg);
    }

    let mut tied: Vec<usize> = Vec::new();
    while active.len() > 1 {
        let best = active.iter().map(|&s| row_max[s]).fold(f64::NEG_INFINITY, f64::max);
        tied.clear();
        tied.extend(active.iter().copied().filter(|&s| row_max[s] == best));
        let s = pick(&tied, rng);
        tied.clear();
        tied.extend(active.iter().copied().filter(|&t| t != s && sim[s * n + t] == best));
        let t = pick(&tied, rng);
        let (a, b) = (s.min(t), s.max(t));
        let (size_a, size_b) = (clusters[id[a]].len() as f64, clusters[id[b]].len() as f64);

        let mut merged: Vec<usize> = clusters[id[a]].iter().chain(&clusters[id[b]]).copied().collect();
        merged.sort_unstable();
        let new_id = clusters.len();
        clusters.push(merged);
        children.push(Some((id[a], id[b])));
        parent[id[a]] = Some(new_id);
        parent[id[b]] = Some(new_id);

        active.retain(|&s| s != b);
        id[a] = new_id;
        for &t in &active {
            if t != a {
                let v = (size_a * sim[a * n + t] + size_b * sim[b * n + t]) / (size_a + size_b);
                sim[a * n + t] = v;
                sim[t * n + a] = v;
            }
        }
        rescan(a, &active, &sim, &mut row_max, &mut row_arg);
        for i in 0..active.len() {
            let t = active[i];
            if t == a {
                continue;
            }
            if row_arg[t] == a || row_arg[t] == b {
                rescan(t, &active, &sim, &mut row_max, &mut row_arg);
            } else if sim[t * n + a] > row_max[t] {
                row_max[t] = sim[t * n + a];
                row_arg[t] = a;
            }
        }
    }

    LinkageTree {
        n,
        clusters,
        children,
        parent,
    }
}

fn pick<R: Rng + ?Sized>(items: &[usize], rng: &mut R) -> usize {
    if items.len() == 1 {
        items[0]
    } else {
        items[rng.gen_range(0..items.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn check_structure(t: &LinkageTree) {
        let n = t.n();
        assert_eq!(t.clusters().len(), 2 * n - 1);
        for g in 0..n {
            assert_eq!(t.clusters()[g], vec![g]);
            assert_eq!(t.children(g), None);
        }
        for c in n..t.clusters().len() {
            let (l, r) = t.children(c).unwrap();
            assert!(l < c && r < c);
            let mut u: Vec<usize> = t.clusters()[l].iter().chain(&t.clusters()[r]).copied().collect();
            let len = u.len();
            u.sort();
            u.dedup();
            assert_eq!(u.len(), len, "children overlap");
            assert_eq!(u, t.clusters()[c]);
            assert_eq!(t.parent(l), Some(c));
            assert_eq!(t.parent(r), Some(c));
        }
        assert_eq!(t.clusters()[t.root()], (0..n).collect::<Vec<_>>());
        assert_eq!(t.parent(t.root()), None);
    }

    #[test]
    fn two_genes() {
        let t = build_linkage_tree(&DependencyMatrix::zeros(2), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(t.clusters(), &[vec![0], vec![1], vec![0, 1]]);
        assert_eq!(t.mixing_masks().len(), 2);
        assert!(t.internal_masks().is_empty());
    }

    #[test]
    fn single_gene() {
        let t = build_linkage_tree(&DependencyMatrix::zeros(1), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(t.clusters(), &[vec![0]]);
        assert_eq!(t.mixing_masks(), &[vec![0]]);
    }

    #[test]
    fn block_diagonal_blocks_merge_first() {
        let dsm = DependencyMatrix::from_fn(6, |i, j| if i / 3 == j / 3 { 1.0 } else { 0.0 }).unwrap();
        for seed in 0..20 {
            let t = build_linkage_tree(&dsm, &mut ChaCha8Rng::seed_from_u64(seed));
            check_structure(&t);
            let merges = &t.clusters()[6..];
            // four merges complete the blocks, the last joins them
            let blocks: Vec<&Vec<usize>> = merges[..4].iter().filter(|c| c.len() == 3).collect();
            assert_eq!(blocks.len(), 2);
            assert!(merges[..4].iter().all(|c| c.iter().all(|&g| g / 3 == c[0] / 3)));
        }
    }

    #[test]
    fn unweighted_average_linkage() {
        // {0,1} forms first; avg({0,1},2) = (0.6+0.0)/2 = 0.3 < s(2,3) = 0.4
        let mut d = DependencyMatrix::zeros(4);
        d.set(0, 1, 0.9).unwrap();
        d.set(0, 2, 0.6).unwrap();
        d.set(2, 3, 0.4).unwrap();
        let t = build_linkage_tree(&d, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(t.clusters()[4], vec![0, 1]);
        assert_eq!(t.clusters()[5], vec![2, 3]);
    }

    #[test]
    fn flat_matrix_ties_depend_on_rng() {
        let dsm = DependencyMatrix::zeros(12);
        let trees: Vec<LinkageTree> = (0..8)
            .map(|s| build_linkage_tree(&dsm, &mut ChaCha8Rng::seed_from_u64(s)))
            .collect();
        trees.iter().for_each(check_structure);
        assert!(trees.iter().any(|t| t != &trees[0]));
        let again = build_linkage_tree(&dsm, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(again, trees[3]);
    }

    #[test]
    fn text_dump() {
        let t = build_linkage_tree(&DependencyMatrix::zeros(2), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(t.to_text(), "0\n1\n0 1\n");
    }
}
