//! Directed graphs, docsets, rooted `K_{2,t}` models and the change of
//! variables from cographic circulations to vertex potentials.

mod models;
mod transform;

use std::collections::VecDeque;

use crate::config::Configuration;
use crate::error::{cap, Error, Result};

pub use models::{find_rooted_k2t_model, verify_no_rooted_model_bound, RootedModel, MODEL_CAP};
pub use transform::{
    cographic_to_mcipp, fundamental_cycle_matrix, is_cographic_for, mcipp_solution_to_mcicp, mcipp_to_mcicp,
    tree_flow, tree_potentials, McippInstance,
};

/// Largest vertex count for docset enumeration.
pub const DOCSET_CAP: usize = 22;

/// Vertices with labels and directed edges `(tail, head)`. Parallel and
/// antiparallel edges are allowed, loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Precondition("graph has no vertices".into()));
        }
        if n > 64 {
            return Err(cap("graph vertices", n, 64usize));
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::Dimension(format!("edge {i} has an endpoint out of range")));
            }
            if a == b {
                return Err(Error::Precondition(format!("edge {i} is a loop")));
            }
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::Precondition("duplicate vertex labels".into()));
        }
        Ok(DirectedGraph { labels, edges })
    }

    /// Vertices `v1..vn`.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("v{i}")).collect(), edges)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn full_mask(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }

    /// Undirected neighbourhoods as bitmasks.
    pub fn neighbour_masks(&self) -> Vec<u64> {
        let mut nb = vec![0u64; self.n()];
        for &(a, b) in &self.edges {
            nb[a] |= 1 << b;
            nb[b] |= 1 << a;
        }
        nb
    }

    /// `G[mask]` is nonempty and connected.
    pub fn induces_connected(&self, mask: u64) -> bool {
        connected_in(&self.neighbour_masks(), mask)
    }

    pub fn is_connected(&self) -> bool {
        self.induces_connected(self.full_mask())
    }

    /// Connected with at least three vertices and no cut vertex, or two
    /// vertices joined by at least two edges.
    pub fn is_two_connected(&self) -> bool {
        let n = self.n();
        if n == 2 {
            return self.m() >= 2;
        }
        if n < 2 || !self.is_connected() {
            return false;
        }
        let nb = self.neighbour_masks();
        (0..n).all(|v| connected_in(&nb, self.full_mask() & !(1 << v)))
    }

    /// Breadth-first spanning tree from vertex 0: the visiting order and,
    /// per vertex, the edge to its parent.
    pub fn spanning_tree(&self) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
        let n = self.n();
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut order = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                let other = if a == v { b } else if b == v { a } else { continue };
                if !seen[other] {
                    seen[other] = true;
                    parent_edge[other] = Some(e);
                    order.push(other);
                    queue.push_back(other);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        Ok((order, parent_edge))
    }

    pub fn mask_to_vertices(&self, mask: u64) -> Vec<usize> {
        (0..self.n()).filter(|v| mask >> v & 1 == 1).collect()
    }
}

pub(crate) fn connected_in(nb: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = 1u64 << mask.trailing_zeros();
    loop {
        let mut grow = seen;
        let mut bits = seen;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            grow |= nb[v] & mask;
        }
        if grow == seen {
            return seen == mask;
        }
        seen = grow;
    }
}

/// One column `e_v - e_w` per edge `(v, w)`.
pub fn incidence_configuration(g: &DirectedGraph) -> Configuration {
    let mut rows = vec![vec![0i64; g.m()]; g.n()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        rows[a][e] += 1;
        rows[b][e] -= 1;
    }
    Configuration::from_i64_rows(&rows, g.m()).expect("rectangular")
}

/// Docsets as bitmasks: both `G[S]` and `G[V - S]` connected. With
/// `include_trivial`, the empty set and `V` are listed too.
pub fn docset_masks(g: &DirectedGraph, include_trivial: bool) -> Result<Vec<u64>> {
    let n = g.n();
    if n > DOCSET_CAP {
        return Err(cap("vertices for docset enumeration", n, DOCSET_CAP));
    }
    let nb = g.neighbour_masks();
    let full = g.full_mask();
    let mut out: Vec<u64> = (1..full).filter(|&s| connected_in(&nb, s) && connected_in(&nb, full & !s)).collect();
    if include_trivial {
        out.push(0);
        out.push(full);
    }
    out.sort_by_key(|&s| (s.count_ones(), g.mask_to_vertices(s)));
    Ok(out)
}

/// Docsets as sorted vertex lists, ordered by size and then lexicographically.
pub fn docsets(g: &DirectedGraph, include_trivial: bool) -> Result<Vec<Vec<usize>>> {
    Ok(docset_masks(g, include_trivial)?.into_iter().map(|s| g.mask_to_vertices(s)).collect())
}

/// `max(0, max_S a(S))` over nontrivial docsets.
pub fn beta(g: &DirectedGraph, a: &[i64]) -> Result<i64> {
    if a.len() != g.n() {
        return Err(Error::Dimension("one weight per vertex".into()));
    }
    if a.iter().sum::<i64>() != 0 {
        return Err(Error::Precondition("vertex weights must sum to zero".into()));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    let mut best = 0;
    for s in docset_masks(g, false)? {
        best = best.max((0..g.n()).filter(|v| s >> v & 1 == 1).map(|v| a[v]).sum());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path3() -> DirectedGraph {
        DirectedGraph::from_edges(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    pub(crate) fn complete(n: usize) -> DirectedGraph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        DirectedGraph::from_edges(n, e).unwrap()
    }

    #[test]
    fn incidence_ranks() {
        let tri = DirectedGraph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = incidence_configuration(&tri);
        assert_eq!((c.dim(), c.n(), c.rank()), (3, 3, 2));
        let one = DirectedGraph::from_edges(2, vec![(0, 1)]).unwrap();
        assert_eq!(incidence_configuration(&one).column(0), crate::rational::rat_vec(&[1, -1]));
    }

    #[test]
    fn antiparallel_edges_form_a_circuit() {
        let g = DirectedGraph::from_edges(2, vec![(0, 1), (1, 0)]).unwrap();
        let cs = crate::circuits::circuits(&incidence_configuration(&g), 24).unwrap();
        let coeffs: Vec<Vec<i64>> = cs.into_iter().map(|c| c.coeffs).collect();
        assert_eq!(coeffs, vec![vec![1, 1], vec![-1, -1]]);
    }

    #[test]
    fn docsets_of_small_graphs() {
        assert_eq!(docsets(&path3(), false).unwrap(), vec![vec![0], vec![2], vec![0, 1], vec![1, 2]]);
        assert_eq!(docsets(&complete(3), false).unwrap().len(), 6);
        let star = DirectedGraph::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            docsets(&star, false).unwrap(),
            vec![vec![1], vec![2], vec![3], vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]
        );
        let with = docsets(&path3(), true).unwrap();
        assert_eq!(with.first(), Some(&vec![]));
        assert_eq!(with.last(), Some(&vec![0, 1, 2]));
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(&complete(3), &[0, 0, 0]).unwrap(), 0);
        assert_eq!(beta(&complete(3), &[1, -1, 0]).unwrap(), 1);
        assert_eq!(beta(&complete(4), &[2, -1, -1, 0]).unwrap(), 2);
    }

    #[test]
    fn two_connectivity() {
        assert!(!path3().is_two_connected());
        assert!(complete(3).is_two_connected());
        assert!(DirectedGraph::from_edges(2, vec![(0, 1), (1, 0)]).unwrap().is_two_connected());
    }
}
