//! Consistency graphs over reads, clique-partition enumeration, consensus
//! merging and edge statistics.
//!
//! Two reads are consistent when they agree at every position where neither
//! is erased. Reads of the same input strand are always consistent, so every
//! true cluster is a clique of the consistency graph, and a candidate
//! clustering is any partition of the reads into cliques.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::channel::{gamma, Strand};
use crate::gf2::BitVector;

/// True iff `a` and `b` agree at every position where both are non-erased.
///
/// # Panics
///
/// Panics if the strands have different lengths.
pub fn consistent(a: &Strand, b: &Strand) -> bool {
    assert_eq!(a.len(), b.len(), "cannot compare strands of different length");
    a.values()
        .words()
        .iter()
        .zip(b.values().words())
        .zip(a.known().words().iter().zip(b.known().words()))
        .all(|((va, vb), (ka, kb))| (va ^ vb) & ka & kb == 0)
}

/// Undirected graph on reads with an edge between every consistent pair.
#[derive(Clone, PartialEq, Eq)]
pub struct ConsistencyGraph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
    edges: usize,
}

impl core::fmt::Debug for ConsistencyGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ConsistencyGraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl ConsistencyGraph {
    fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64);
        Self {
            n,
            stride,
            adj: vec![0; n * stride],
            edges: 0,
        }
    }

    fn link(&mut self, i: usize, j: usize) {
        if !self.has_edge(i, j) {
            self.adj[i * self.stride + j / 64] |= 1 << (j % 64);
            self.adj[j * self.stride + i / 64] |= 1 << (i % 64);
            self.edges += 1;
        }
    }

    /// Evaluates consistency for every pair of reads.
    pub fn build(reads: &[Strand]) -> Self {
        let mut g = Self::empty(reads.len());
        for i in 0..reads.len() {
            for j in i + 1..reads.len() {
                if consistent(&reads[i], &reads[j]) {
                    g.link(i, j);
                }
            }
        }
        g
    }

    /// A graph with the given edge list; repeated edges count once.
    ///
    /// # Panics
    ///
    /// Panics on self-loops or out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            assert!(i < n && j < n, "edge ({i}, {j}) out of range");
            assert_ne!(i, j, "self-loop at {i}");
            g.link(i, j);
        }
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `U`, the number of edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.adj[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    fn neighbor_words(&self, i: usize) -> &[u64] {
        &self.adj[i * self.stride..(i + 1) * self.stride]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbor_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for (u, s) in seen.iter_mut().enumerate() {
                    if !*s && self.has_edge(v, u) {
                        *s = true;
                        stack.push(u);
                    }
                }
            }
        }
        components
    }

    /// True iff every pair within `members` is adjacent.
    pub fn is_clique(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(k, &i)| members[k + 1..].iter().all(|&j| self.has_edge(i, j)))
    }
}

/// A partition of read indices into groups.
///
/// Kept in canonical form: each group sorted ascending, groups ordered by
/// their smallest member, no empty groups. Two clusterings are equal iff
/// they describe the same partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clustering {
    groups: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn new(mut groups: Vec<Vec<usize>>) -> Self {
        groups.retain(|g| !g.is_empty());
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_unstable_by_key(|g| g[0]);
        Self { groups }
    }

    /// Groups reads sharing a label, e.g. the oracle origins of a pool.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(i);
        }
        Self::new(by_label.into_values().collect())
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// True iff the groups are disjoint and cover exactly `0..n`.
    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &i in self.groups.iter().flatten() {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Partition of the graph's vertices into cliques.
    pub fn is_valid_for(&self, graph: &ConsistencyGraph) -> bool {
        self.is_partition_of(graph.vertex_count()) && self.groups.iter().all(|g| graph.is_clique(g))
    }
}

/// Merges consistent reads: each position takes the non-erased value if any
/// member has one, otherwise stays erased.
///
/// # Panics
///
/// Panics if the group is empty, lengths differ, or two members disagree on
/// a position where both are known.
pub fn consensus<'a, I>(group: I) -> Strand
where
    I: IntoIterator<Item = &'a Strand>,
{
    let mut iter = group.into_iter();
    let first = iter.next().expect("consensus of an empty group");
    let len = first.len();
    let mut values = first.values().words().to_vec();
    let mut known = first.known().words().to_vec();
    for s in iter {
        assert_eq!(s.len(), len, "consensus over strands of different length");
        for (k, (sv, sk)) in s.values().words().iter().zip(s.known().words()).enumerate() {
            assert!(
                (values[k] ^ sv) & known[k] & sk == 0,
                "consensus over inconsistent reads"
            );
            values[k] |= sv;
            known[k] |= sk;
        }
    }
    Strand::from_parts(&BitVector::from_words(len, values), &BitVector::from_words(len, known))
}

/// Streams every partition of the graph's vertices into cliques whose group
/// count lies in `[min_clusters, max_clusters]`.
///
/// Vertices are placed in index order, each into an existing compatible group
/// or a new one, so every partition is produced exactly once. Branches that
/// can no longer reach `min_clusters` groups are cut.
///
/// # Panics
///
/// Panics if `min_clusters > max_clusters`.
pub fn enumerate_clusterings(
    graph: &ConsistencyGraph,
    min_clusters: usize,
    max_clusters: usize,
) -> CliquePartitions<'_> {
    assert!(min_clusters <= max_clusters, "empty cluster-count range");
    CliquePartitions {
        graph,
        min: min_clusters,
        max: max_clusters,
        groups: Vec::new(),
        frames: Vec::new(),
        next_choice: 0,
        finished: false,
    }
}

/// Number of clique partitions with group count in range.
pub fn count_clusterings(graph: &ConsistencyGraph, min_clusters: usize, max_clusters: usize) -> u64 {
    enumerate_clusterings(graph, min_clusters, max_clusters).count() as u64
}

struct OpenGroup {
    members: Vec<usize>,
    // vertices adjacent to every member
    compat: Vec<u64>,
}

struct Frame {
    group: usize,
    saved_compat: Option<Vec<u64>>,
}

/// Iterator returned by [`enumerate_clusterings`].
pub struct CliquePartitions<'g> {
    graph: &'g ConsistencyGraph,
    min: usize,
    max: usize,
    groups: Vec<OpenGroup>,
    frames: Vec<Frame>,
    next_choice: usize,
    finished: bool,
}

impl CliquePartitions<'_> {
    fn backtrack(&mut self) {
        match self.frames.pop() {
            None => self.finished = true,
            Some(frame) => {
                match frame.saved_compat {
                    None => {
                        self.groups.pop();
                    }
                    Some(saved) => {
                        let g = &mut self.groups[frame.group];
                        g.members.pop();
                        g.compat = saved;
                    }
                }
                self.next_choice = frame.group + 1;
            }
        }
    }

    fn place(&mut self, v: usize, group: usize) {
        let adj = self.graph.neighbor_words(v);
        if group == self.groups.len() {
            self.groups.push(OpenGroup {
                members: vec![v],
                compat: adj.to_vec(),
            });
            self.frames.push(Frame {
                group,
                saved_compat: None,
            });
        } else {
            let g = &mut self.groups[group];
            let saved = g.compat.clone();
            for (c, a) in g.compat.iter_mut().zip(adj) {
                *c &= a;
            }
            g.members.push(v);
            self.frames.push(Frame {
                group,
                saved_compat: Some(saved),
            });
        }
        self.next_choice = 0;
    }

    fn accepts(&self, group: usize, v: usize) -> bool {
        (self.groups[group].compat[v / 64] >> (v % 64)) & 1 == 1
    }
}

impl Iterator for CliquePartitions<'_> {
    type Item = Clustering;

    fn next(&mut self) -> Option<Clustering> {
        let n = self.graph.vertex_count();
        while !self.finished {
            let v = self.frames.len();
            if v == n {
                let found = (self.groups.len() >= self.min).then(|| Clustering {
                    groups: self.groups.iter().map(|g| g.members.clone()).collect(),
                });
                self.backtrack();
                if found.is_some() {
                    return found;
                }
                continue;
            }
            if self.groups.len() + (n - v) < self.min {
                self.backtrack();
                continue;
            }
            let open = self.groups.len();
            let choice =
                (self.next_choice..=open).find(|&c| if c < open { self.accepts(c, v) } else { open < self.max });
            match choice {
                Some(c) => self.place(v, c),
                None => self.backtrack(),
            }
        }
        None
    }
}

/// Reads prepared for clustering: identical reads collapsed into one vertex
/// and all-erased reads set aside.
#[derive(Debug, Clone)]
pub struct ReducedPool {
    /// One representative per distinct non-erased read, in order of first
    /// appearance.
    pub distinct: Vec<Strand>,
    /// Original read indices behind each distinct read.
    pub members: Vec<Vec<usize>>,
    /// Reads with every position erased. They are consistent with everything
    /// and carry no information.
    pub all_erased: Vec<usize>,
}

impl ReducedPool {
    pub fn new(reads: &[Strand]) -> Self {
        let mut index: BTreeMap<&Strand, usize> = BTreeMap::new();
        let mut distinct = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut all_erased = Vec::new();
        for (i, r) in reads.iter().enumerate() {
            if r.is_all_erased() {
                all_erased.push(i);
                continue;
            }
            let slot = *index.entry(r).or_insert_with(|| {
                distinct.push(r.clone());
                members.push(Vec::new());
                distinct.len() - 1
            });
            members[slot].push(i);
        }
        Self {
            distinct,
            members,
            all_erased,
        }
    }

    /// Maps a clustering of the distinct reads back to original indices.
    /// All-erased reads join the first group (or form one if there is none).
    pub fn expand(&self, clustering: &Clustering) -> Clustering {
        let mut groups: Vec<Vec<usize>> = clustering
            .groups()
            .iter()
            .map(|g| g.iter().flat_map(|&d| self.members[d].iter().copied()).collect())
            .collect();
        if !self.all_erased.is_empty() {
            match groups.first_mut() {
                Some(first) => first.extend_from_slice(&self.all_erased),
                None => groups.push(self.all_erased.clone()),
            }
        }
        Clustering::new(groups)
    }
}

/// Correct/incorrect split of the graph's edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeStats {
    /// Edges between reads of the same input strand.
    pub correct_edges: usize,
    /// `Z`: edges between reads of different input strands.
    pub incorrect_edges: usize,
    pub gamma: f64,
}

impl EdgeStats {
    pub fn total(&self) -> usize {
        self.correct_edges + self.incorrect_edges
    }
}

/// Classifies every edge by oracle origin. Analysis only; decoders never
/// see origins.
///
/// # Panics
///
/// Panics if `origins` does not have one entry per vertex.
pub fn edge_stats(graph: &ConsistencyGraph, origins: &[usize], p: f64, beta: f64) -> EdgeStats {
    assert_eq!(origins.len(), graph.vertex_count(), "one origin per read");
    let (correct, incorrect) = graph.edges().into_iter().fold((0, 0), |(c, z), (i, j)| {
        if origins[i] == origins[j] {
            (c + 1, z)
        } else {
            (c, z + 1)
        }
    });
    EdgeStats {
        correct_edges: correct,
        incorrect_edges: incorrect,
        gamma: gamma(p, beta),
    }
}

/// Probability that reads of two independent uniform strands of length `l`
/// are consistent: `(1 - (1 - p)^2 / 2)^l`.
pub fn pair_consistency_probability(p: f64, l: usize) -> f64 {
    let q = 1.0 - p;
    libm::pow(1.0 - 0.5 * q * q, l as f64)
}

/// Counts consistent pairs among `pairs` draws of two independent uniform
/// strands, each passed through BEC(`p`).
pub fn empirical_pair_consistency<R: Rng + ?Sized>(p: f64, l: usize, pairs: usize, rng: &mut R) -> usize {
    (0..pairs)
        .filter(|_| {
            let a = Strand::random(l, rng).erase(p, rng);
            let b = Strand::random(l, rng).erase(p, rng);
            consistent(&a, &b)
        })
        .count()
}

/// Code-oblivious single pass: each read joins the first group it is
/// consistent with in full, otherwise opens a new group.
pub fn greedy_cluster(reads: &[Strand]) -> Clustering {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, r) in reads.iter().enumerate() {
        match groups.iter_mut().find(|g| g.iter().all(|&j| consistent(r, &reads[j]))) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    Clustering::new(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, ChannelParams, SamplingDistribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(text: &str) -> Strand {
        text.parse().unwrap()
    }

    #[test]
    fn consistency_examples() {
        assert!(consistent(&s("0 1 ε"), &s("0 1 1")));
        assert!(!consistent(&s("0 1"), &s("0 0")));
        assert!(consistent(&s("ε ε"), &s("1 0")));
        assert!(consistent(&s("ε ε"), &s("ε 1")));
    }

    #[test]
    #[should_panic(expected = "different length")]
    fn consistency_length_mismatch_panics() {
        consistent(&s("01"), &s("011"));
    }

    #[test]
    fn graph_small_cases() {
        assert_eq!(ConsistencyGraph::build(&[s("0101")]).edge_count(), 0);
        let g = ConsistencyGraph::build(&[s("0101"), s("0101")]);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(!g.has_edge(0, 0));
    }

    #[test]
    fn graph_matches_naive_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let params = ChannelParams::new(10, 6, 0.5).unwrap();
        let input: Vec<Strand> = (0..10).map(|_| Strand::random(6, &mut rng)).collect();
        let pool = transmit(&input, &params, &SamplingDistribution::fixed(2).unwrap(), &mut rng);
        let reads = pool.reads();
        assert_eq!(reads.len(), 20);
        let g = ConsistencyGraph::build(reads);
        let mut naive = 0;
        for i in 0..20 {
            for j in 0..20 {
                let expect = i != j
                    && (0..6).all(|k| {
                        let (a, b) = (reads[i].symbol(k), reads[j].symbol(k));
                        a == b || a == crate::channel::Symbol::Erased || b == crate::channel::Symbol::Erased
                    });
                assert_eq!(g.has_edge(i, j), expect, "pair ({i}, {j})");
                if expect && i < j {
                    naive += 1;
                }
            }
        }
        assert_eq!(g.edge_count(), naive);
    }

    #[test]
    fn consensus_examples() {
        assert_eq!(consensus([&s("0εε"), &s("ε1ε")]), s("01ε"));
        assert_eq!(consensus([&s("1ε0")]), s("1ε0"));
    }

    #[test]
    #[should_panic(expected = "inconsistent")]
    fn consensus_rejects_inconsistent_group() {
        consensus([&s("01"), &s("00")]);
    }

    #[test]
    #[should_panic(expected = "empty group")]
    fn consensus_rejects_empty_group() {
        consensus(core::iter::empty::<&Strand>());
    }

    #[test]
    fn enumeration_edge_free_and_triangle() {
        let g = ConsistencyGraph::from_edges(4, &[]);
        let all: Vec<_> = enumerate_clusterings(&g, 4, 4).collect();
        assert_eq!(all, vec![Clustering::new(vec![vec![0], vec![1], vec![2], vec![3]])]);
        assert_eq!(count_clusterings(&g, 1, 3), 0);

        let tri = ConsistencyGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let parts: Vec<_> = enumerate_clusterings(&tri, 1, 3).collect();
        assert_eq!(parts.len(), 5);
        assert_eq!(count_clusterings(&tri, 2, 2), 3);
        assert_eq!(count_clusterings(&tri, 1, 1), 1);
    }

    #[test]
    fn enumeration_of_empty_graph() {
        let g = ConsistencyGraph::from_edges(0, &[]);
        assert_eq!(count_clusterings(&g, 0, 3), 1);
        assert_eq!(count_clusterings(&g, 1, 3), 0);
    }

    #[test]
    fn enumeration_yields_cliques_only() {
        // path 0-1-2: {0,1,2} is not a clique
        let path = ConsistencyGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let parts: Vec<_> = enumerate_clusterings(&path, 1, 3).collect();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|c| c.is_valid_for(&path)));
    }

    #[test]
    fn reduced_pool_collapses_duplicates() {
        let reads = [s("01ε"), s("εεε"), s("01ε"), s("110")];
        let r = ReducedPool::new(&reads);
        assert_eq!(r.distinct, vec![s("01ε"), s("110")]);
        assert_eq!(r.members, vec![vec![0, 2], vec![3]]);
        assert_eq!(r.all_erased, vec![1]);
        let c = r.expand(&Clustering::new(vec![vec![0], vec![1]]));
        assert_eq!(c, Clustering::new(vec![vec![0, 1, 2], vec![3]]));
    }

    #[test]
    fn edge_stats_single_draw_has_no_correct_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let params = ChannelParams::new(16, 4, 0.5).unwrap();
        let input: Vec<Strand> = (0..16).map(|_| Strand::random(4, &mut rng)).collect();
        let pool = transmit(&input, &params, &SamplingDistribution::fixed(1).unwrap(), &mut rng);
        let g = ConsistencyGraph::build(pool.reads());
        let st = edge_stats(&g, pool.origins(), 0.5, params.beta());
        assert_eq!(st.correct_edges, 0);
        assert_eq!(st.total(), g.edge_count());
    }

    #[test]
    fn noiseless_long_strands_have_no_incorrect_edges() {
        // consistency of distinct uniform strands at p = 0 has probability 2^-64
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let params = ChannelParams::new(32, 64, 0.0).unwrap();
        let input: Vec<Strand> = (0..32).map(|_| Strand::random(64, &mut rng)).collect();
        let pool = transmit(&input, &params, &SamplingDistribution::fixed(3).unwrap(), &mut rng);
        let g = ConsistencyGraph::build(pool.reads());
        let st = edge_stats(&g, pool.origins(), 0.0, params.beta());
        assert_eq!(st.incorrect_edges, 0);
        assert_eq!(st.correct_edges, 32 * 3);
    }

    #[test]
    fn pair_probability_examples() {
        assert_eq!(pair_consistency_probability(1.0, 17), 1.0);
        assert_eq!(pair_consistency_probability(0.0, 1), 0.5);
        assert_eq!(pair_consistency_probability(0.3, 0), 1.0);
    }

    #[test]
    fn greedy_examples() {
        let reads = [s("00"), s("01"), s("10"), s("11")];
        assert_eq!(greedy_cluster(&reads).group_count(), 4);
        let reads = [s("0ε1"), s("111"), s("001"), s("11ε")];
        let c = greedy_cluster(&reads);
        assert_eq!(c, Clustering::new(vec![vec![0, 2], vec![1, 3]]));
        assert!(c.group_count() >= ConsistencyGraph::build(&reads).component_count());
    }
}
