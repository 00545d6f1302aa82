//! Local completion: optimize one bag with some vertices fixed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lp::{lp_solve, LpOutcome};
use crate::matrix::RatMatrix;
use crate::rational::{rat, to_i64, ExtendedBound};

/// `max p'y` over the vertices of a bag, subject to
/// `l <= y(a) - y(b) <= u` on each listed edge and `y = fixed` on the
/// fixed vertices. Profits of adhesion vertices are expected to be zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInstance {
    pub bag: Vec<usize>,
    /// `(tail, head, l, u)` with both ends in the bag.
    pub edges: Vec<(usize, usize, i64, i64)>,
    /// One profit per bag position.
    pub p: Vec<i64>,
    pub fixed: BTreeMap<usize, i64>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Optimal value and `y` per bag position, or `None` if infeasible.
pub fn solve_ldcp(local: &LocalInstance) -> Result<Option<(i64, Vec<i64>)>> {
    let nb = local.bag.len();
    if local.p.len() != nb {
        return Err(Error::Dimension("one profit per bag vertex".into()));
    }
    let pos: BTreeMap<usize, usize> = local.bag.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    if pos.len() != nb {
        return Err(Error::Precondition("bag repeats a vertex".into()));
    }
    let mut val: Vec<Option<i64>> = vec![None; nb];
    for (&v, &y) in &local.fixed {
        let &i = pos.get(&v).ok_or_else(|| Error::Precondition(format!("fixed vertex {v} is outside the bag")))?;
        val[i] = Some(y);
    }
    let mut edges = Vec::with_capacity(local.edges.len());
    for &(a, b, l, u) in &local.edges {
        match (pos.get(&a), pos.get(&b)) {
            (Some(&i), Some(&j)) => edges.push((i, j, l, u)),
            _ => return Err(Error::Precondition(format!("edge ({a}, {b}) leaves the bag"))),
        }
    }

    // pin one vertex of every free component that touches nothing fixed
    let mut uf: Vec<usize> = (0..nb).collect();
    for &(i, j, _, _) in &edges {
        if val[i].is_none() && val[j].is_none() {
            let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
            uf[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut anchored = vec![false; nb];
    for &(i, j, _, _) in &edges {
        if val[i].is_none() != val[j].is_none() {
            let f = if val[i].is_none() { i } else { j };
            let r = find(&mut uf, f);
            anchored[r] = true;
        }
    }
    for i in 0..nb {
        if val[i].is_none() && find(&mut uf, i) == i && !anchored[i] {
            let psum: i64 = (0..nb).filter(|&j| val[j].is_none() && find(&mut uf, j) == i).map(|j| local.p[j]).sum();
            if psum != 0 {
                return Err(Error::Unbounded("a free component with nonzero profit touches no fixed vertex".into()));
            }
            val[i] = Some(0);
        }
    }

    let free: Vec<usize> = (0..nb).filter(|&i| val[i].is_none()).collect();
    let col: BTreeMap<usize, usize> = free.iter().enumerate().map(|(c, &i)| (i, c)).collect();
    let mut lo = vec![ExtendedBound::NegInf; free.len()];
    let mut hi = vec![ExtendedBound::PosInf; free.len()];
    let tighten = |lo: &mut ExtendedBound, hi: &mut ExtendedBound, a: i64, b: i64| {
        if lo.cmp_rat(&rat(a)).is_lt() {
            *lo = ExtendedBound::int(a);
        }
        if hi.cmp_rat(&rat(b)).is_gt() {
            *hi = ExtendedBound::int(b);
        }
    };
    let mut slack_rows = Vec::new();
    for &(i, j, l, u) in &edges {
        match (val[i], val[j]) {
            (Some(a), Some(b)) => {
                if a - b < l || a - b > u {
                    return Ok(None);
                }
            }
            (None, Some(b)) => {
                let c = col[&i];
                tighten(&mut lo[c], &mut hi[c], l + b, u + b);
            }
            (Some(a), None) => {
                let c = col[&j];
                tighten(&mut lo[c], &mut hi[c], a - u, a - l);
            }
            (None, None) => slack_rows.push((col[&i], col[&j], l, u)),
        }
    }
    if free.is_empty() {
        let value = (0..nb).map(|i| local.p[i] * val[i].expect("all fixed")).sum();
        return Ok(Some((value, val.into_iter().map(|y| y.expect("all fixed")).collect())));
    }

    let nf = free.len();
    let nv = nf + slack_rows.len();
    let mut a = RatMatrix::zeros(slack_rows.len(), nv);
    let mut obj = vec![rat(0); nv];
    for (c, &i) in free.iter().enumerate() {
        obj[c] = rat(local.p[i]);
    }
    for (r, &(ci, cj, l, u)) in slack_rows.iter().enumerate() {
        a.set(r, ci, rat(1));
        a.set(r, cj, rat(-1));
        a.set(r, nf + r, rat(-1));
        lo.push(ExtendedBound::int(l));
        hi.push(ExtendedBound::int(u));
    }
    let b = vec![rat(0); slack_rows.len()];
    match lp_solve(&obj, &a, &b, &lo, &hi)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Invariant("local completion is unbounded".into())),
        LpOutcome::Optimal { point, .. } => {
            for (c, &i) in free.iter().enumerate() {
                let y = to_i64(&point[c]).ok_or_else(|| Error::Invariant("local completion vertex is fractional".into()))?;
                val[i] = Some(y);
            }
            let y: Vec<i64> = val.into_iter().map(|y| y.expect("assigned")).collect();
            let value = y.iter().zip(&local.p).map(|(a, b)| a * b).sum();
            Ok(Some((value, y)))
        }
    }
}
