use super::paths::geodesics_of;
use super::{Adjacency, GroupKind, GroupStructure, MetricError};
use crate::graph::{NodeId, SocialGraph};

/// Maximal-subgroup enumeration is exponential in the worst case; graphs
/// above this many nodes are refused unless the limit is raised.
pub const DEFAULT_MAX_ENUMERATION_NODES: usize = 128;

/// Weakly connected components, ordered by their smallest member.
/// Isolated nodes form singleton components.
pub fn components(g: &SocialGraph) -> Vec<GroupStructure> {
    let matrix_free = Adjacency::new(g);
    let n = matrix_free.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in matrix_free.out[v].iter().chain(&matrix_free.inc[v]) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(GroupStructure::new(GroupKind::Component, members, None));
    }
    out
}

/// Directed 3-cycles (either orientation), each node triple once.
pub fn triads(g: &SocialGraph) -> Result<Vec<GroupStructure>, MetricError> {
    if !g.is_directed() {
        return Err(MetricError::RequiresDirected);
    }
    let n = g.node_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let forward = g.has_tie(a, b) && g.has_tie(b, c) && g.has_tie(c, a);
                let backward = g.has_tie(a, c) && g.has_tie(c, b) && g.has_tie(b, a);
                if forward || backward {
                    out.push(GroupStructure::new(GroupKind::Triad, vec![a, b, c], None));
                }
            }
        }
    }
    Ok(out)
}

/// Enumerates maximal cliques, n-cliques and k-plexes on undirected graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupEnumerator {
    pub max_nodes: usize,
}

impl Default for GroupEnumerator {
    fn default() -> Self {
        GroupEnumerator {
            max_nodes: DEFAULT_MAX_ENUMERATION_NODES,
        }
    }
}

impl GroupEnumerator {
    pub fn with_limit(max_nodes: usize) -> Self {
        GroupEnumerator { max_nodes }
    }

    fn check(&self, g: &SocialGraph) -> Result<(), MetricError> {
        if g.is_directed() {
            return Err(MetricError::RequiresUndirected);
        }
        if g.node_count() > self.max_nodes {
            return Err(MetricError::TooLarge {
                nodes: g.node_count(),
                limit: self.max_nodes,
            });
        }
        Ok(())
    }

    /// Maximal complete subgraphs with at least `min_size` (>= 3) members.
    pub fn cliques(&self, g: &SocialGraph, min_size: usize) -> Result<Vec<GroupStructure>, MetricError> {
        self.check(g)?;
        check_min_size(min_size)?;
        let matrix = Adjacency::new(g).undirected_matrix();
        Ok(maximal_cliques(&matrix, min_size)
            .into_iter()
            .map(|m| GroupStructure::new(GroupKind::Clique, m, None))
            .collect())
    }

    /// Maximal sets whose members are pairwise within `n` hops, measured in
    /// the whole graph.
    pub fn n_cliques(
        &self,
        g: &SocialGraph,
        n: u32,
        min_size: usize,
    ) -> Result<Vec<GroupStructure>, MetricError> {
        self.check(g)?;
        check_min_size(min_size)?;
        if n == 0 {
            return Err(MetricError::InvalidParameter("n-clique distance must be at least 1".into()));
        }
        let geo = geodesics_of(&Adjacency::new(g));
        let size = g.node_count();
        let matrix: Vec<Vec<bool>> = (0..size)
            .map(|u| {
                (0..size)
                    .map(|v| u != v && geo.get(u, v).is_some_and(|d| d <= n))
                    .collect()
            })
            .collect();
        Ok(maximal_cliques(&matrix, min_size)
            .into_iter()
            .map(|m| GroupStructure::new(GroupKind::NClique, m, Some(n)))
            .collect())
    }

    /// Maximal sets `S` in which every member has at least `|S| - k`
    /// neighbours inside `S`.
    pub fn k_plexes(&self, g: &SocialGraph, k: u32, min_size: usize) -> Result<Vec<GroupStructure>, MetricError> {
        self.check(g)?;
        if k == 0 {
            return Err(MetricError::InvalidParameter("k must be at least 1".into()));
        }
        if min_size <= k as usize {
            return Err(MetricError::InvalidParameter(format!(
                "min_size ({min_size}) must exceed k ({k})"
            )));
        }
        let matrix = Adjacency::new(g).undirected_matrix();
        let mut search = KPlexSearch {
            matrix: &matrix,
            k: k as usize,
            min_size,
            inside: vec![0; matrix.len()],
            current: Vec::new(),
            found: Vec::new(),
        };
        search.extend((0..matrix.len()).collect(), Vec::new());
        let mut found = search.found;
        found.sort();
        Ok(found
            .into_iter()
            .map(|m| GroupStructure::new(GroupKind::KPlex, m, Some(k)))
            .collect())
    }
}

fn check_min_size(min_size: usize) -> Result<(), MetricError> {
    if min_size < 3 {
        return Err(MetricError::InvalidParameter(format!(
            "min_size must be at least 3, got {min_size}"
        )));
    }
    Ok(())
}

pub fn cliques(g: &SocialGraph, min_size: usize) -> Result<Vec<GroupStructure>, MetricError> {
    GroupEnumerator::default().cliques(g, min_size)
}

pub fn n_cliques(g: &SocialGraph, n: u32, min_size: usize) -> Result<Vec<GroupStructure>, MetricError> {
    GroupEnumerator::default().n_cliques(g, n, min_size)
}

pub fn k_plexes(g: &SocialGraph, k: u32, min_size: usize) -> Result<Vec<GroupStructure>, MetricError> {
    GroupEnumerator::default().k_plexes(g, k, min_size)
}

/// Bron–Kerbosch with Tomita pivoting; results sorted.
fn maximal_cliques(matrix: &[Vec<bool>], min_size: usize) -> Vec<Vec<NodeId>> {
    fn recurse(
        matrix: &[Vec<bool>],
        min_size: usize,
        r: &mut Vec<NodeId>,
        p: Vec<NodeId>,
        x: Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if p.is_empty() && x.is_empty() {
            if r.len() >= min_size {
                let mut clique = r.clone();
                clique.sort_unstable();
                out.push(clique);
            }
            return;
        }
        if r.len() + p.len() < min_size {
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (p.iter().filter(|&&v| matrix[u][v]).count(), std::cmp::Reverse(u)))
            .expect("p or x is non-empty");
        let candidates: Vec<NodeId> = p.iter().copied().filter(|&v| !matrix[pivot][v]).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            let next_p = p.iter().copied().filter(|&u| matrix[v][u]).collect();
            let next_x = x.iter().copied().filter(|&u| matrix[v][u]).collect();
            r.push(v);
            recurse(matrix, min_size, r, next_p, next_x, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }

    let mut out = Vec::new();
    recurse(matrix, min_size, &mut Vec::new(), (0..matrix.len()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

/// Bron–Kerbosch style search for the maximal sets of a hereditary property
/// (every subset of a k-plex is a k-plex).
struct KPlexSearch<'a> {
    matrix: &'a [Vec<bool>],
    k: usize,
    min_size: usize,
    /// Neighbours of each node inside `current`.
    inside: Vec<usize>,
    current: Vec<NodeId>,
    found: Vec<Vec<NodeId>>,
}

impl KPlexSearch<'_> {
    fn can_add(&self, u: NodeId) -> bool {
        let size = self.current.len() + 1;
        let need = size.saturating_sub(self.k);
        self.inside[u] >= need
            && self
                .current
                .iter()
                .all(|&w| self.inside[w] + usize::from(self.matrix[w][u]) >= need)
    }

    fn push(&mut self, v: NodeId) {
        for (u, row) in self.matrix[v].iter().enumerate() {
            if *row {
                self.inside[u] += 1;
            }
        }
        self.current.push(v);
    }

    fn pop(&mut self) {
        let v = self.current.pop().expect("non-empty");
        for (u, row) in self.matrix[v].iter().enumerate() {
            if *row {
                self.inside[u] -= 1;
            }
        }
    }

    fn extend(&mut self, mut candidates: Vec<NodeId>, mut excluded: Vec<NodeId>) {
        if candidates.is_empty() && excluded.is_empty() {
            if self.current.len() >= self.min_size {
                let mut set = self.current.clone();
                set.sort_unstable();
                self.found.push(set);
            }
            return;
        }
        while let Some(&v) = candidates.first() {
            if self.current.len() + candidates.len() < self.min_size {
                return;
            }
            candidates.remove(0);
            self.push(v);
            let next_candidates = candidates.iter().copied().filter(|&u| self.can_add(u)).collect();
            let next_excluded = excluded.iter().copied().filter(|&u| self.can_add(u)).collect();
            self.extend(next_candidates, next_excluded);
            self.pop();
            excluded.push(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn members(groups: &[GroupStructure]) -> Vec<Vec<NodeId>> {
        groups.iter().map(|g| g.members.clone()).collect()
    }

    #[test]
    fn component_examples() {
        assert_eq!(members(&components(&line4())), vec![vec![0, 1, 2, 3]]);
        let g = graph("c", true, &["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(members(&components(&g)), vec![vec![0, 1, 2], vec![3]]);
        assert!(components(&graph("e", true, &[], &[])).is_empty());
    }

    #[test]
    fn clique_examples() {
        let tri = graph("t", false, &["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(members(&cliques(&tri, 3).unwrap()), vec![vec![0, 1, 2]]);
        assert!(cliques(&line4(), 3).unwrap().is_empty());
        // K4 minus edge {a, d}
        let k4m = graph("k", false, &["a", "b", "c", "d"], &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(members(&cliques(&k4m, 3).unwrap()), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert_eq!(cliques(&cyc3(), 3), Err(MetricError::RequiresUndirected));
    }

    #[test]
    fn n_clique_examples() {
        assert_eq!(
            members(&n_cliques(&line4(), 2, 3).unwrap()),
            vec![vec![0, 1, 2], vec![1, 2, 3]]
        );
        assert_eq!(members(&n_cliques(&star4(), 2, 4).unwrap()), vec![vec![0, 1, 2, 3]]);
        let k4m = graph("k", false, &["a", "b", "c", "d"], &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(members(&n_cliques(&k4m, 1, 3).unwrap()), members(&cliques(&k4m, 3).unwrap()));
    }

    #[test]
    fn k_plex_examples() {
        let c4 = graph("c4", false, &["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(members(&k_plexes(&c4, 2, 3).unwrap()), vec![vec![0, 1, 2, 3]]);
        assert!(k_plexes(&line4(), 2, 4).unwrap().is_empty());
        let tri = graph("t", false, &["a", "b", "c", "d"], &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(members(&k_plexes(&tri, 1, 3).unwrap()), members(&cliques(&tri, 3).unwrap()));
        assert!(matches!(k_plexes(&c4, 2, 2), Err(MetricError::InvalidParameter(_))));
    }

    #[test]
    fn triad_examples() {
        assert_eq!(members(&triads(&cyc3()).unwrap()), vec![vec![0, 1, 2]]);
        let transitive = graph("t", true, &["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)]);
        assert!(triads(&transitive).unwrap().is_empty());
        assert_eq!(members(&triads(&k3d()).unwrap()), vec![vec![0, 1, 2]]);
        assert_eq!(triads(&line4()), Err(MetricError::RequiresDirected));
    }

    #[test]
    fn enumeration_limit() {
        let e = GroupEnumerator::with_limit(3);
        assert_eq!(
            e.cliques(&line4(), 3),
            Err(MetricError::TooLarge { nodes: 4, limit: 3 })
        );
    }
}
