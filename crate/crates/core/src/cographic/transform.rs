//! Change of variables `x = M' y` between cographic circulations on the
//! edges and integer potentials on the vertices.

use num_traits::Zero;

use crate::config::{Configuration, WeightMatrix};
use crate::error::{Error, Result};
use crate::oracle::PotentialProblem;
use crate::sumdecomp::McicpInstance;

use super::{docset_masks, incidence_configuration, DirectedGraph};

/// `max p'y s.t. l_e <= y(v) - y(w) <= u_e` on every edge `e = (v, w)`,
/// `Wy = d`, with `p` and the rows of `W` summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McippInstance {
    pub graph: DirectedGraph,
    pub p: Vec<i64>,
    pub w: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    pub delta: i64,
}

impl McippInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.w.len()
    }

    /// Vertices with a nonzero weight in some row.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.w.iter().any(|r| r[v] != 0)).collect()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let (n, m) = (self.n(), self.graph.m());
        if self.p.len() != n || self.w.iter().any(|r| r.len() != n) || self.d.len() != self.w.len() {
            return Err(Error::Dimension("vertex data lengths".into()));
        }
        if self.l.len() != m || self.u.len() != m {
            return Err(Error::Dimension("one bound pair per edge".into()));
        }
        if let Some(e) = (0..m).find(|&e| self.l[e] > self.u[e]) {
            return Err(Error::Precondition(format!("bounds of edge {e} are crossed")));
        }
        if self.delta < 1 {
            return Err(Error::Precondition("delta must be positive".into()));
        }
        Ok(())
    }

    /// Dimensions, zero sums, connectivity and the docset weight bound.
    pub fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        if self.p.iter().sum::<i64>() != 0 {
            return Err(Error::Precondition("vertex profits must sum to zero".into()));
        }
        if let Some(i) = self.w.iter().position(|r| r.iter().sum::<i64>() != 0) {
            return Err(Error::Precondition(format!("weight row {i} does not sum to zero")));
        }
        if !self.graph.is_connected() {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        for s in docset_masks(&self.graph, false)? {
            for (i, row) in self.w.iter().enumerate() {
                let v: i64 = (0..self.n()).filter(|v| s >> v & 1 == 1).map(|v| row[v]).sum();
                if v.abs() > self.delta {
                    let set = self.graph.mask_to_vertices(s);
                    return Err(Error::Precondition(format!("docset {set:?} has weight {v} in row {i}, above {}", self.delta)));
                }
            }
        }
        Ok(())
    }

    pub fn is_feasible(&self, y: &[i64]) -> bool {
        y.len() == self.n()
            && self.graph.edges().iter().enumerate().all(|(e, &(a, b))| self.l[e] <= y[a] - y[b] && y[a] - y[b] <= self.u[e])
            && self.w.iter().zip(&self.d).all(|(r, &di)| r.iter().zip(y).map(|(a, b)| a * b).sum::<i64>() == di)
    }

    pub fn objective(&self, y: &[i64]) -> i64 {
        self.p.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn to_potential_problem(&self) -> PotentialProblem {
        PotentialProblem {
            vertices: self.n(),
            edges: self.graph.edges().to_vec(),
            l: self.l.clone(),
            u: self.u.clone(),
            p: self.p.clone(),
            w: self.w.clone(),
            d: self.d.clone(),
        }
    }
}

/// `ker A` equals the cut space of `g`: every vertex row of the incidence
/// matrix lies in `ker A` and the dimensions agree.
pub fn is_cographic_for(a: &Configuration, g: &DirectedGraph) -> bool {
    if a.n() != g.m() {
        return false;
    }
    let m = incidence_configuration(g);
    for v in 0..g.n() {
        let row: Vec<_> = m.matrix().row(v).to_vec();
        match a.matrix().mul_vec(&row) {
            Ok(img) if img.iter().all(|x| x.is_zero()) => {}
            _ => return false,
        }
    }
    g.m() - a.rank() == m.rank()
}

/// One signed cycle per non-tree edge of the breadth-first spanning tree:
/// `+1` on the edge itself and `±1` along the tree path closing it.
pub fn fundamental_cycle_matrix(g: &DirectedGraph) -> Result<Vec<Vec<i64>>> {
    let (order, pe) = g.spanning_tree()?;
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for &v in &order {
        if let Some(e) = pe[v] {
            let (a, b) = g.edges()[e];
            parent[v] = if a == v { b } else { a };
            depth[v] = depth[parent[v]] + 1;
        }
    }
    let tree: Vec<bool> = (0..g.m()).map(|e| pe.contains(&Some(e))).collect();
    let mut rows = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if tree[e] {
            continue;
        }
        let mut c = vec![0i64; g.m()];
        c[e] = 1;
        // close the cycle from b back to a through the tree
        let (mut x, mut y) = (b, a);
        while x != y {
            if depth[x] >= depth[y] {
                let f = pe[x].expect("non-root");
                c[f] += if g.edges()[f].0 == x { 1 } else { -1 };
                x = parent[x];
            } else {
                let f = pe[y].expect("non-root");
                c[f] += if g.edges()[f].1 == y { 1 } else { -1 };
                y = parent[y];
            }
        }
        rows.push(c);
    }
    let inc = incidence_configuration(g);
    for r in &rows {
        if !inc.is_circulation(r) {
            return Err(Error::Invariant("fundamental cycle is not a circulation".into()));
        }
    }
    Ok(rows)
}

/// Edge flow on the spanning tree with net outflow `b(v)` at every vertex.
pub fn tree_flow(g: &DirectedGraph, b: &[i64]) -> Result<Vec<i64>> {
    if b.len() != g.n() {
        return Err(Error::Dimension("one demand per vertex".into()));
    }
    if b.iter().sum::<i64>() != 0 {
        return Err(Error::Precondition("demands must sum to zero".into()));
    }
    let (order, pe) = g.spanning_tree()?;
    let mut x = vec![0i64; g.m()];
    let mut out = vec![0i64; g.n()];
    for &v in order.iter().rev() {
        let Some(e) = pe[v] else { continue };
        let (a, h) = g.edges()[e];
        let r = b[v] - out[v];
        if a == v {
            x[e] = r;
            out[v] += r;
            out[h] -= r;
        } else {
            x[e] = -r;
            out[v] += r;
            out[a] -= r;
        }
    }
    if out != b {
        return Err(Error::Invariant("tree flow misses its demands".into()));
    }
    Ok(x)
}

/// Potentials `y` with `y(0) = 0` and `x_e = y(v) - y(w)` on every edge,
/// if `x` is a cut vector.
pub fn tree_potentials(g: &DirectedGraph, x: &[i64]) -> Result<Option<Vec<i64>>> {
    if x.len() != g.m() {
        return Err(Error::Dimension("one value per edge".into()));
    }
    let (order, pe) = g.spanning_tree()?;
    let mut y = vec![0i64; g.n()];
    for &v in &order {
        if let Some(e) = pe[v] {
            let (a, b) = g.edges()[e];
            y[v] = if a == v { y[b] + x[e] } else { y[a] - x[e] };
        }
    }
    Ok(if mcipp_solution_to_mcicp(&y, g) == x { Some(y) } else { None })
}

/// `x(v, w) = y(v) - y(w)`.
pub fn mcipp_solution_to_mcicp(y: &[i64], g: &DirectedGraph) -> Vec<i64> {
    g.edges().iter().map(|&(a, b)| y[a] - y[b]).collect()
}

fn divergence(g: &DirectedGraph, x: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; g.n()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        out[a] += x[e];
        out[b] -= x[e];
    }
    out
}

/// Potential form of a circulation instance whose configuration is
/// cographic for `g`: profits `M p`, weights `M w`, the same edge bounds.
pub fn cographic_to_mcipp(inst: &McicpInstance, g: &DirectedGraph) -> Result<McippInstance> {
    inst.check_dimensions()?;
    if !is_cographic_for(&inst.a, g) {
        return Err(Error::Precondition("configuration is not cographic for the supplied graph".into()));
    }
    let p = divergence(g, &inst.p);
    let w: Vec<Vec<i64>> = inst.w.rows().iter().map(|r| divergence(g, r)).collect();
    if p.iter().sum::<i64>() != 0 || w.iter().any(|r| r.iter().sum::<i64>() != 0) {
        return Err(Error::Invariant("transformed data does not sum to zero".into()));
    }
    let out = McippInstance { graph: g.clone(), p, w, d: inst.d.clone(), l: inst.l.clone(), u: inst.u.clone(), delta: inst.delta };
    for v in 0..g.n() {
        let mut chi = vec![0i64; g.n()];
        chi[v] = 1;
        let x = mcipp_solution_to_mcicp(&chi, g);
        if inst.objective(&x) != out.objective(&chi) || inst.w.apply(&x) != out.w.iter().map(|r| r[v]).collect::<Vec<_>>() {
            return Err(Error::Invariant("objective or weights differ under x = M'y".into()));
        }
    }
    Ok(out)
}

/// Circulation form of a potential instance: the fundamental cycle matrix
/// of `g`, with profits and weights pulled back along tree flows.
pub fn mcipp_to_mcicp(inst: &McippInstance) -> Result<McicpInstance> {
    inst.check_dimensions()?;
    let g = &inst.graph;
    let rows = fundamental_cycle_matrix(g)?;
    let a = Configuration::from_i64_rows(&rows, g.m())?;
    let p = tree_flow(g, &inst.p)?;
    let w = inst.w.iter().map(|r| tree_flow(g, r)).collect::<Result<Vec<_>>>()?;
    Ok(McicpInstance {
        p,
        a,
        w: WeightMatrix::new(w, g.m())?,
        d: inst.d.clone(),
        l: inst.l.clone(),
        u: inst.u.clone(),
        delta: inst.delta,
    })
}
