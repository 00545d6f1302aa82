//! Brute-force ground truth. Nothing here calls into the solver modules.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteBudget {
    pub lattice_points: u128,
    pub subsets: u128,
    pub submatrices: u128,
}

impl Default for BruteBudget {
    fn default() -> Self {
        BruteBudget { lattice_points: 10_000_000, subsets: 1 << 22, submatrices: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal { value: i64, x: Vec<i64> },
    Infeasible,
}

impl OracleOutcome {
    pub fn value(&self) -> Option<i64> {
        match self {
            OracleOutcome::Optimal { value, .. } => Some(*value),
            OracleOutcome::Infeasible => None,
        }
    }
}

fn box_size(l: &[i64], u: &[i64]) -> u128 {
    l.iter().zip(u).map(|(a, b)| if b < a { 0 } else { (b - a + 1) as u128 }).fold(1u128, |acc, s| acc.saturating_mul(s))
}

struct Rows<'a> {
    rows: Vec<&'a [i64]>,
    rhs: Vec<i64>,
    equality: Vec<bool>,
}

/// Shared lexicographic search: variables in index order, values ascending,
/// rows pruned by the interval of what the unassigned tail can still add.
fn search(p: &[i64], rows: &Rows, l: &[i64], u: &[i64]) -> OracleOutcome {
    let n = p.len();
    let m = rows.rows.len();
    let mut tail_min = vec![vec![0i128; n + 1]; m];
    let mut tail_max = vec![vec![0i128; n + 1]; m];
    for i in 0..m {
        for j in (0..n).rev() {
            let (a, b) = (rows.rows[i][j] as i128 * l[j] as i128, rows.rows[i][j] as i128 * u[j] as i128);
            tail_min[i][j] = tail_min[i][j + 1] + a.min(b);
            tail_max[i][j] = tail_max[i][j + 1] + a.max(b);
        }
    }
    let mut x = vec![0i64; n];
    let mut partial = vec![0i128; m];
    let mut best: Option<(i128, Vec<i64>)> = None;
    fn rec(
        j: usize,
        p: &[i64],
        rows: &Rows,
        l: &[i64],
        u: &[i64],
        tmin: &[Vec<i128>],
        tmax: &[Vec<i128>],
        x: &mut [i64],
        partial: &mut [i128],
        best: &mut Option<(i128, Vec<i64>)>,
    ) {
        for i in 0..partial.len() {
            let lo = partial[i] + tmin[i][j];
            let hi = partial[i] + tmax[i][j];
            let r = rows.rhs[i] as i128;
            if lo > r || (rows.equality[i] && hi < r) {
                return;
            }
        }
        if j == p.len() {
            let v: i128 = p.iter().zip(x.iter()).map(|(a, b)| *a as i128 * *b as i128).sum();
            if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                *best = Some((v, x.to_vec()));
            }
            return;
        }
        for v in l[j]..=u[j] {
            x[j] = v;
            for i in 0..partial.len() {
                partial[i] += rows.rows[i][j] as i128 * v as i128;
            }
            rec(j + 1, p, rows, l, u, tmin, tmax, x, partial, best);
            for i in 0..partial.len() {
                partial[i] -= rows.rows[i][j] as i128 * v as i128;
            }
        }
    }
    rec(0, p, rows, l, u, &tail_min, &tail_max, &mut x, &mut partial, &mut best);
    match best {
        None => OracleOutcome::Infeasible,
        Some((v, x)) => OracleOutcome::Optimal { value: v as i64, x },
    }
}

/// `max p'x s.t. Ax = b, Wx = d, l <= x <= u` by full enumeration; the
/// representative optimum is the lexicographically smallest.
#[allow(clippy::too_many_arguments)]
pub fn brute_ip(
    p: &[i64],
    a: &[Vec<i64>],
    b: &[i64],
    w: &[Vec<i64>],
    d: &[i64],
    l: &[i64],
    u: &[i64],
    budget: &BruteBudget,
) -> Result<OracleOutcome> {
    let n = p.len();
    if l.len() != n || u.len() != n || a.len() != b.len() || w.len() != d.len() || a.iter().chain(w).any(|r| r.len() != n) {
        return Err(Error::Dimension("oracle instance lengths".into()));
    }
    let size = box_size(l, u);
    if size > budget.lattice_points {
        return Err(Error::Budget(format!("{size} lattice points exceed {}", budget.lattice_points)));
    }
    let rows = Rows {
        rows: a.iter().chain(w).map(|r| r.as_slice()).collect(),
        rhs: b.iter().chain(d).copied().collect(),
        equality: vec![true; a.len() + w.len()],
    };
    Ok(search(p, &rows, l, u))
}

/// `max p'x s.t. Mx <= b` over the box `l <= x <= u`.
pub fn brute_ip_leq(p: &[i64], m: &[Vec<i64>], b: &[i64], l: &[i64], u: &[i64], budget: &BruteBudget) -> Result<OracleOutcome> {
    let n = p.len();
    if l.len() != n || u.len() != n || m.len() != b.len() || m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("oracle instance lengths".into()));
    }
    let size = box_size(l, u);
    if size > budget.lattice_points {
        return Err(Error::Budget(format!("{size} lattice points exceed {}", budget.lattice_points)));
    }
    let rows = Rows { rows: m.iter().map(|r| r.as_slice()).collect(), rhs: b.to_vec(), equality: vec![false; m.len()] };
    Ok(search(p, &rows, l, u))
}

/// Every integer point of `{Ax = b, Wx = d, l <= x <= u}` attaining `value`.
#[allow(clippy::too_many_arguments)]
pub fn brute_ip_all_optima(
    p: &[i64],
    a: &[Vec<i64>],
    b: &[i64],
    w: &[Vec<i64>],
    d: &[i64],
    l: &[i64],
    u: &[i64],
    budget: &BruteBudget,
) -> Result<Vec<Vec<i64>>> {
    let Some(best) = brute_ip(p, a, b, w, d, l, u, budget)?.value() else {
        return Ok(Vec::new());
    };
    let n = p.len();
    let mut out = Vec::new();
    let mut x = l.to_vec();
    if box_size(l, u) == 0 {
        return Ok(out);
    }
    loop {
        let ok = a.iter().zip(b).chain(w.iter().zip(d)).all(|(r, &rhs)| r.iter().zip(&x).map(|(c, v)| c * v).sum::<i64>() == rhs);
        if ok && p.iter().zip(&x).map(|(c, v)| c * v).sum::<i64>() == best {
            out.push(x.clone());
        }
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if x[j] < u[j] {
                x[j] += 1;
                for q in j + 1..n {
                    x[q] = l[q];
                }
                break;
            }
        }
    }
}

/// Potential problem `max p'y s.t. l_e <= y(v) - y(w) <= u_e` for every
/// edge `e = (v, w)`, `Wy = d`, with `y(0) = 0`. Vertices are visited in
/// breadth-first order so that each one has an assigned neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialProblem {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    pub p: Vec<i64>,
    pub w: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

/// All optimal potentials with `y(0) = 0`, and the optimum.
pub fn brute_mcipp_all(pr: &PotentialProblem, budget: &BruteBudget) -> Result<Option<(i64, Vec<Vec<i64>>)>> {
    let n = pr.vertices;
    if pr.l.len() != pr.edges.len() || pr.u.len() != pr.edges.len() || pr.p.len() != n || pr.w.len() != pr.d.len() {
        return Err(Error::Dimension("potential problem lengths".into()));
    }
    if n == 0 {
        return Ok(None);
    }
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(a, b) in &pr.edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::Precondition("potential problem needs a connected graph".into()));
    }
    let mut y = vec![0i64; n];
    let mut assigned = vec![false; n];
    assigned[0] = true;
    let mut best: Option<(i64, Vec<Vec<i64>>)> = None;
    let mut steps: u128 = 0;
    rec_pot(pr, &order, 1, &mut y, &mut assigned, &mut best, &mut steps, budget.lattice_points)?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn rec_pot(
    pr: &PotentialProblem,
    order: &[usize],
    i: usize,
    y: &mut [i64],
    assigned: &mut [bool],
    best: &mut Option<(i64, Vec<Vec<i64>>)>,
    steps: &mut u128,
    cap: u128,
) -> Result<()> {
    *steps += 1;
    if *steps > cap {
        return Err(Error::Budget(format!("potential search exceeded {cap} nodes")));
    }
    if i == order.len() {
        let ok = pr.w.iter().zip(&pr.d).all(|(r, &di)| r.iter().zip(y.iter()).map(|(a, b)| a * b).sum::<i64>() == di);
        if !ok {
            return Ok(());
        }
        let v: i64 = pr.p.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        match best {
            Some((bv, list)) if *bv == v => list.push(y.to_vec()),
            Some((bv, _)) if *bv > v => {}
            _ => *best = Some((v, vec![y.to_vec()])),
        }
        return Ok(());
    }
    let v = order[i];
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (e, &(a, b)) in pr.edges.iter().enumerate() {
        // l <= y(a) - y(b) <= u
        if a == v && assigned[b] {
            lo = lo.max(y[b] + pr.l[e]);
            hi = hi.min(y[b] + pr.u[e]);
        } else if b == v && assigned[a] {
            lo = lo.max(y[a] - pr.u[e]);
            hi = hi.min(y[a] - pr.l[e]);
        }
    }
    if has_violated_loop(pr, v) {
        return Ok(());
    }
    assigned[v] = true;
    for val in lo..=hi {
        y[v] = val;
        rec_pot(pr, order, i + 1, y, assigned, best, steps, cap)?;
    }
    assigned[v] = false;
    y[v] = 0;
    Ok(())
}

fn has_violated_loop(pr: &PotentialProblem, v: usize) -> bool {
    pr.edges.iter().enumerate().any(|(e, &(a, b))| a == v && b == v && (pr.l[e] > 0 || pr.u[e] < 0))
}

/// Largest `|det|` over all square submatrices, by Laplace expansion.
pub fn max_abs_subdeterminant(m: &[Vec<i64>], size_cap: usize) -> Result<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    if rows.min(cols) > size_cap {
        return Err(Error::Cap { what: "matrix side for subdeterminant scan", size: rows.min(cols) as u128, limit: size_cap as u128 });
    }
    let mut best: i128 = 0;
    for size in 1..=rows.min(cols) {
        for rs in subsets(rows, size) {
            for cs in subsets(cols, size) {
                best = best.max(laplace(m, &rs, &cs).abs());
            }
        }
    }
    i64::try_from(best).map_err(|_| Error::Invariant("determinant overflow".into()))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

fn laplace(m: &[Vec<i64>], rs: &[usize], cs: &[usize]) -> i128 {
    if rs.len() == 1 {
        return m[rs[0]][cs[0]] as i128;
    }
    let r = rs[0];
    let rest: Vec<usize> = rs[1..].to_vec();
    let mut total = 0i128;
    for (idx, &c) in cs.iter().enumerate() {
        let a = m[r][c] as i128;
        if a == 0 {
            continue;
        }
        let sub: Vec<usize> = cs.iter().copied().filter(|&x| x != c).collect();
        let sign = if idx % 2 == 0 { 1 } else { -1 };
        total += sign * a * laplace(m, &rest, &sub);
    }
    total
}

fn connected_within(adj: &[Vec<usize>], mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == mask
}

/// Nonempty proper vertex sets `S` with both sides connected, as bitmasks.
pub fn brute_docsets(n: usize, edges: &[(usize, usize)], budget: &BruteBudget) -> Result<Vec<u64>> {
    if n >= 63 || (1u128 << n) > budget.subsets {
        return Err(Error::Budget(format!("2^{n} vertex subsets")));
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let full = (1u64 << n) - 1;
    Ok((1..full).filter(|&s| connected_within(&adj, s) && connected_within(&adj, full & !s)).collect())
}
