//! Rooted tree-decompositions with bounded adhesion and branching.

use std::collections::BTreeSet;

use crate::cographic::DirectedGraph;
use crate::error::{Error, Result};

/// Bags over a rooted tree given by parent pointers. `ell` bounds every
/// adhesion and the number of children of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialTreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub ell: usize,
}

impl SpecialTreeDecomposition {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> Result<usize> {
        let roots: Vec<usize> = (0..self.len()).filter(|&t| self.parent[t].is_none()).collect();
        match roots.as_slice() {
            [r] => Ok(*r),
            _ => Err(Error::Precondition(format!("decomposition has {} roots", roots.len()))),
        }
    }

    pub fn children(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(t)).collect()
    }

    /// `B_t ∩ B_parent`, sorted; empty at the root.
    pub fn adhesion(&self, t: usize) -> Vec<usize> {
        match self.parent[t] {
            None => Vec::new(),
            Some(s) => {
                let other: BTreeSet<usize> = self.bags[s].iter().copied().collect();
                let mut out: Vec<usize> = self.bags[t].iter().copied().filter(|v| other.contains(v)).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    /// Children before parents.
    pub fn post_order(&self) -> Result<Vec<usize>> {
        let root = self.root()?;
        let mut out = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                for c in self.children(t).into_iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        Ok(out)
    }

    /// Vertices of all bags below and at `t`.
    pub fn subtree_vertices(&self, t: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            out.extend(self.bags[s].iter().copied());
            stack.extend(self.children(s));
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TdReport {
    pub violations: Vec<String>,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the tree-decomposition axioms, the adhesion bound and the
/// child bound, listing every violation found.
pub fn validate_special_td(g: &DirectedGraph, td: &SpecialTreeDecomposition) -> TdReport {
    let mut v = Vec::new();
    let n = td.len();
    if td.parent.len() != n {
        v.push(format!("{} bags but {} parent entries", n, td.parent.len()));
        return TdReport { violations: v };
    }
    if n == 0 {
        v.push("no bags".into());
        return TdReport { violations: v };
    }
    if let Some(t) = (0..n).find(|&t| td.parent[t].is_some_and(|p| p >= n || p == t)) {
        v.push(format!("node {t} has an invalid parent"));
        return TdReport { violations: v };
    }
    let root = match td.root() {
        Ok(r) => r,
        Err(e) => {
            v.push(e.to_string());
            return TdReport { violations: v };
        }
    };
    for t in 0..n {
        let mut s = t;
        let mut steps = 0;
        while let Some(p) = td.parent[s] {
            s = p;
            steps += 1;
            if steps > n {
                break;
            }
        }
        if s != root {
            v.push(format!("node {t} does not reach the root"));
            return TdReport { violations: v };
        }
    }
    for (t, bag) in td.bags.iter().enumerate() {
        if let Some(x) = bag.iter().find(|&&x| x >= g.n()) {
            v.push(format!("bag {t} contains unknown vertex {x}"));
        }
    }
    if !v.is_empty() {
        return TdReport { violations: v };
    }
    for x in 0..g.n() {
        let holders: Vec<usize> = (0..n).filter(|&t| td.bags[t].contains(&x)).collect();
        if holders.is_empty() {
            v.push(format!("vertex {x} is in no bag"));
            continue;
        }
        let tops = holders.iter().filter(|&&t| td.parent[t].map_or(true, |p| !td.bags[p].contains(&x))).count();
        if tops != 1 {
            v.push(format!("bags containing vertex {x} do not form a subtree"));
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if !td.bags.iter().any(|bag| bag.contains(&a) && bag.contains(&b)) {
            v.push(format!("edge {e} ({a}, {b}) lies in no bag"));
        }
    }
    for t in 0..n {
        let adh = td.adhesion(t).len();
        if adh > td.ell {
            v.push(format!("adhesion of node {t} has {adh} vertices, above {}", td.ell));
        }
        let ch = td.children(t).len();
        if ch > td.ell {
            v.push(format!("node {t} has {ch} children, above {}", td.ell));
        }
    }
    TdReport { violations: v }
}

/// One bag holding every vertex.
pub fn trivial_td(g: &DirectedGraph) -> SpecialTreeDecomposition {
    SpecialTreeDecomposition { bags: vec![(0..g.n()).collect()], parent: vec![None], ell: 0 }
}

/// Two bags: `X ∪ N(X)` below `V - X`, so the adhesion is `N(X)`.
pub fn two_bag_td(g: &DirectedGraph, x: &[usize]) -> Result<SpecialTreeDecomposition> {
    let xs: BTreeSet<usize> = x.iter().copied().collect();
    if xs.is_empty() || xs.len() >= g.n() || xs.iter().any(|&v| v >= g.n()) {
        return Err(Error::Precondition("X must be a nonempty proper vertex subset".into()));
    }
    let mut child: BTreeSet<usize> = xs.clone();
    for &(a, b) in g.edges() {
        if xs.contains(&a) && !xs.contains(&b) {
            child.insert(b);
        }
        if xs.contains(&b) && !xs.contains(&a) {
            child.insert(a);
        }
    }
    let root: Vec<usize> = (0..g.n()).filter(|v| !xs.contains(v)).collect();
    let adh = child.len() - xs.len();
    Ok(SpecialTreeDecomposition { bags: vec![root, child.into_iter().collect()], parent: vec![None, Some(0)], ell: adh.max(1) })
}
