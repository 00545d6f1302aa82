//! Decomposition trees of 2-connected configurations along 2-separations.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::circuits::conformal_decompose;
use crate::config::{Configuration, Label};
use crate::duality::standardize;
use crate::error::{Error, Result};
use crate::matrix::{is_zero_vec, RatVector};
use crate::rational::{rat, ExtendedBound, Rational};
use crate::tu::is_totally_unimodular;

use super::separation::find_with_order;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub config: Configuration,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Label of the virtual column shared with the parent.
    pub parent_label: Option<Label>,
}

/// Pieces joined along shared virtual labels; each virtual label occurs in
/// exactly two adjacent nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTree {
    pub nodes: Vec<TreeNode>,
    pub root: usize,
    pub virtual_labels: Vec<Label>,
}

impl DecompositionTree {
    pub fn is_virtual(&self, l: Label) -> bool {
        self.virtual_labels.contains(&l)
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.nodes[t].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Real labels in the subtree of `t`.
    pub fn subtree_real_labels(&self, t: usize) -> Vec<Label> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            out.extend(self.nodes[s].config.labels().iter().copied().filter(|l| !self.is_virtual(*l)));
            stack.extend(self.nodes[s].children.iter().copied());
        }
        out.sort();
        out
    }

    /// Height of the tree and the number of nodes, for reports.
    pub fn shape(&self) -> (usize, usize) {
        fn depth(tree: &DecompositionTree, t: usize) -> usize {
            1 + tree.nodes[t].children.iter().map(|&c| depth(tree, c)).max().unwrap_or(0)
        }
        (depth(self, self.root), self.nodes.len())
    }

    /// Kernel of the recomposed configuration restricted to the real labels,
    /// listed in `real` order. Every virtual column becomes one flow variable
    /// that enters the parent with `-1` and the child with `+1`.
    pub fn recomposed_kernel(&self, real: &[Label]) -> Result<Vec<RatVector>> {
        let nv = self.virtual_labels.len();
        let nr = real.len();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for node in &self.nodes {
            let c = &node.config;
            for i in 0..c.dim() {
                let mut row = vec![Rational::zero(); nr + nv];
                for j in 0..c.n() {
                    let l = c.label(j);
                    let v = c.matrix().get(i, j).clone();
                    if let Some(pos) = real.iter().position(|&x| x == l) {
                        row[pos] += v;
                    } else {
                        let k = self.virtual_labels.iter().position(|&x| x == l).ok_or_else(|| Error::Invariant("unknown label".into()))?;
                        let sign = if node.parent_label == Some(l) { rat(1) } else { rat(-1) };
                        row[nr + k] += v * sign;
                    }
                }
                rows.push(row);
            }
        }
        let m = crate::matrix::RatMatrix::from_rows_with_width(rows, Some(nr + nv))?;
        Ok(m.kernel_basis().into_iter().map(|v| v[..nr].to_vec()).collect())
    }

    /// Every piece has a TU standard form.
    pub fn pieces_are_regular(&self) -> Result<bool> {
        for node in &self.nodes {
            let s = standardize(&node.config);
            if s.d.rows() == 0 || s.d.cols() == 0 {
                continue;
            }
            if !is_totally_unimodular(&Configuration::from_matrix(s.d))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Virtual vector of a 2-separation: `A1 c1` for the first crossing circuit
/// in a conformal decomposition of a kernel vector with nonzero image on
/// side 1.
pub(crate) fn virtual_vector(a: &Configuration, side1: &[usize]) -> Result<RatVector> {
    let n = a.n();
    let zero = vec![Rational::zero(); n];
    let image = |v: &[Rational]| -> Result<RatVector> {
        let mut part = zero.clone();
        for &j in side1 {
            part[j] = v[j].clone();
        }
        a.matrix().mul_vec(&part)
    };
    let inf_l = vec![ExtendedBound::NegInf; n];
    let inf_u = vec![ExtendedBound::PosInf; n];
    for kv in a.matrix().kernel_basis() {
        if is_zero_vec(&image(&kv)?) {
            continue;
        }
        for (c, _) in conformal_decompose(a, &zero, &kv, &inf_l, &inf_u)? {
            let cr: RatVector = c.coeffs.iter().map(|&x| rat(x)).collect();
            let y = image(&cr)?;
            if !is_zero_vec(&y) {
                return Ok(y);
            }
        }
    }
    Err(Error::Precondition("separation has no crossing circuit".into()))
}

/// Splits `a` along 2-separations until every piece is 3-connected or has
/// three columns, then roots the tree at the node holding `root`.
/// Virtual labels are numbered from `first_virtual`.
pub fn build_decomposition_tree(a: &Configuration, root: Label, first_virtual: u32) -> Result<DecompositionTree> {
    if a.n() < 3 {
        return Err(Error::Precondition("decomposition trees need at least 3 columns".into()));
    }
    if !crate::circuits::is_connected(a) {
        return Err(Error::Precondition("configuration is not 2-connected".into()));
    }
    if a.position(root).is_none() {
        return Err(Error::Precondition(format!("root {root} is not a column")));
    }
    let mut pieces = vec![a.clone()];
    let mut virtual_labels = Vec::new();
    let mut next = first_virtual;
    let mut i = 0;
    while i < pieces.len() {
        let piece = &pieces[i];
        if piece.n() <= 3 {
            i += 1;
            continue;
        }
        match find_with_order(piece, 2, 2)? {
            None => i += 1,
            Some(sep) => {
                let s1: Vec<usize> = sep.side1.iter().map(|l| piece.position(*l).expect("label")).collect();
                let s2: Vec<usize> = sep.side2.iter().map(|l| piece.position(*l).expect("label")).collect();
                let v = virtual_vector(piece, &s1)?;
                let label = Label(next);
                next += 1;
                virtual_labels.push(label);
                let p1 = piece.select(&s1).with_column(&v, label)?;
                let p2 = piece.select(&s2).with_column(&v, label)?;
                pieces[i] = p1;
                pieces.push(p2);
            }
        }
    }
    let holder = |l: Label| -> Vec<usize> { (0..pieces.len()).filter(|&t| pieces[t].position(l).is_some()).collect() };
    let root_node = holder(root)[0];
    let mut adj: Vec<Vec<(usize, Label)>> = vec![Vec::new(); pieces.len()];
    for &l in &virtual_labels {
        let h = holder(l);
        if h.len() != 2 {
            return Err(Error::Invariant(format!("virtual label {l} is held by {} pieces", h.len())));
        }
        adj[h[0]].push((h[1], l));
        adj[h[1]].push((h[0], l));
    }
    let mut nodes: Vec<TreeNode> = pieces
        .into_iter()
        .map(|config| TreeNode { config, parent: None, children: Vec::new(), parent_label: None })
        .collect();
    let mut seen = vec![false; nodes.len()];
    seen[root_node] = true;
    let mut queue = VecDeque::from([root_node]);
    while let Some(t) = queue.pop_front() {
        let mut nb = adj[t].clone();
        nb.sort_by_key(|&(s, l)| (l, s));
        for (s, l) in nb {
            if !seen[s] {
                seen[s] = true;
                nodes[s].parent = Some(t);
                nodes[s].parent_label = Some(l);
                nodes[t].children.push(s);
                queue.push_back(s);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Invariant("pieces do not form a tree".into()));
    }
    Ok(DecompositionTree { nodes, root: root_node, virtual_labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rows: &[Vec<i64>]) -> Configuration {
        Configuration::from_i64_rows(rows, rows[0].len()).unwrap()
    }

    fn same_space(a: &[RatVector], b: &[RatVector]) -> bool {
        let n = a.first().or(b.first()).map_or(0, |v| v.len());
        let ra = crate::matrix::RatMatrix::from_rows_with_width(a.to_vec(), Some(n)).unwrap().rank();
        let rb = crate::matrix::RatMatrix::from_rows_with_width(b.to_vec(), Some(n)).unwrap().rank();
        let mut both = a.to_vec();
        both.extend_from_slice(b);
        let rab = crate::matrix::RatMatrix::from_rows_with_width(both, Some(n)).unwrap().rank();
        ra == rb && rb == rab
    }

    fn check_recomposition(a: &Configuration, t: &DecompositionTree) {
        let kernel = t.recomposed_kernel(a.labels()).unwrap();
        assert!(same_space(&kernel, &a.matrix().kernel_basis()));
        for node in &t.nodes {
            assert!(node.config.n() >= 3);
        }
        assert!(t.pieces_are_regular().unwrap());
    }

    #[test]
    fn k4_is_a_single_node() {
        let k4 = cfg(&[
            vec![1, 1, 1, 0, 0, 0],
            vec![-1, 0, 0, 1, 1, 0],
            vec![0, -1, 0, -1, 0, 1],
            vec![0, 0, -1, 0, -1, -1],
        ]);
        let t = build_decomposition_tree(&k4, Label(0), 100).unwrap();
        assert_eq!(t.nodes.len(), 1);
        check_recomposition(&k4, &t);
    }

    #[test]
    fn two_triangles_sharing_an_edge() {
        // vertices 1..4, edges 12 23 31 24 43; triangles 123 and 243 share 23
        let g = cfg(&[
            vec![1, 0, -1, 0, 0],
            vec![-1, 1, 0, 1, 0],
            vec![0, -1, 1, 0, -1],
            vec![0, 0, 0, -1, 1],
        ]);
        let t = build_decomposition_tree(&g, Label(0), 100).unwrap();
        check_recomposition(&g, &t);
        assert!(t.nodes.len() >= 2);
    }

    #[test]
    fn chain_of_pieces() {
        // 4-cycle with a parallel edge: splits into several pieces
        let g = cfg(&[
            vec![1, 0, 0, -1, 1],
            vec![-1, 1, 0, 0, -1],
            vec![0, -1, 1, 0, 0],
            vec![0, 0, -1, 1, 0],
        ]);
        let t = build_decomposition_tree(&g, Label(0), 100).unwrap();
        check_recomposition(&g, &t);
        assert!(t.nodes.len() >= 3);
        let order = t.post_order();
        assert_eq!(*order.last().unwrap(), t.root);
    }
}
