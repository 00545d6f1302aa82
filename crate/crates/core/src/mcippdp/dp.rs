//! Bottom-up composition of local solutions over a tree-decomposition.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cographic::McippInstance;
use crate::error::{Error, Result};
use crate::proximity::f_bound;

use super::ldcp::{solve_ldcp, LocalInstance};
use super::profile::{check_superprofile_shape, exact_superprofile, node_roots, DocsetSuperprofile, SumChecker};
use super::td::{validate_special_td, SpecialTreeDecomposition};

/// Steps allowed per pattern check before the guess is let through.
pub const PATTERN_STEPS: u64 = 100_000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct McippDpStats {
    pub nodes: usize,
    pub guesses: u64,
    pub pattern_rejected: u64,
    pub pattern_fallbacks: u64,
    pub ldcp_solves: u64,
    pub ldcp_cache_hits: u64,
    pub entries: u64,
    pub compliance_checks: u64,
    pub outside_box: u64,
}

/// Best rooted solution found for one key: profit over the owned vertices
/// and values on every vertex of the subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McippEntry {
    pub value: i64,
    pub y: BTreeMap<usize, i64>,
}

/// Per node: adhesion values (minimum zero), then the weight of the owned
/// vertices.
pub type McippDpTable = BTreeMap<Vec<i64>, BTreeMap<Vec<i64>, McippEntry>>;

/// Shifts so the minimum is zero.
pub fn shift_normalize(y: &[i64]) -> Vec<i64> {
    let m = y.iter().copied().min().unwrap_or(0);
    y.iter().map(|v| v - m).collect()
}

/// Closure of the edge constraints: every feasible `y` has
/// `y(a) - y(b) <= D[a][b]`. `None` when the constraints contain a
/// negative cycle.
pub fn difference_bounds(inst: &McippInstance) -> Option<Vec<Vec<Option<i64>>>> {
    let n = inst.n();
    let mut d: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    let relax = |slot: &mut Option<i64>, x: i64| {
        if slot.map_or(true, |s| x < s) {
            *slot = Some(x);
        }
    };
    for (e, &(a, b)) in inst.graph.edges().iter().enumerate() {
        relax(&mut d[a][b], inst.u[e]);
        relax(&mut d[b][a], -inst.l[e]);
    }
    for m in 0..n {
        for a in 0..n {
            let Some(am) = d[a][m] else { continue };
            for b in 0..n {
                if let Some(mb) = d[m][b] {
                    relax(&mut d[a][b], am + mb);
                }
            }
        }
    }
    if (0..n).any(|v| d[v][v].is_some_and(|x| x < 0)) {
        return None;
    }
    Some(d)
}

fn better(value: i64, y: &BTreeMap<usize, i64>, old: &(i64, BTreeMap<usize, i64>)) -> bool {
    value > old.0 || (value == old.0 && *y < old.1)
}

fn weight_of(inst: &McippInstance, vs: &BTreeSet<usize>, y: impl Fn(usize) -> i64) -> Vec<i64> {
    inst.w.iter().map(|row| vs.iter().map(|&v| row[v] * y(v)).sum()).collect()
}

struct Ctx<'a> {
    inst: &'a McippInstance,
    td: &'a SpecialTreeDecomposition,
    sp: &'a DocsetSuperprofile,
    dist: Vec<Vec<Option<i64>>>,
    node_roots: Vec<Vec<usize>>,
    f: i64,
    radius: i64,
    root: usize,
}

struct ChildInfo {
    adh: Vec<usize>,
    wsum: Vec<i64>,
    psum: i64,
}

/// Maximizes the instance over the decomposition. Returns the optimum and
/// an optimal `y`, or `None` when no candidate reaches `d`.
///
/// Without `superprofiles` the exact profiles are enumerated.
pub fn dp_solve(
    inst: &McippInstance,
    td: &SpecialTreeDecomposition,
    superprofiles: Option<&DocsetSuperprofile>,
    budget: &mut u64,
    stats: &mut McippDpStats,
) -> Result<Option<(i64, Vec<i64>)>> {
    inst.check_dimensions()?;
    let report = validate_special_td(&inst.graph, td);
    if !report.is_valid() {
        return Err(Error::Precondition(format!("invalid tree-decomposition: {}", report.violations.join("; "))));
    }
    let root = td.root()?;
    if let Some(t) = (0..td.len()).find(|&t| t != root && td.adhesion(t).is_empty()) {
        return Err(Error::Precondition(format!("node {t} shares no vertex with its parent")));
    }
    let exact;
    let sp = match superprofiles {
        Some(s) => {
            check_superprofile_shape(inst, td, s)?;
            s
        }
        None => {
            exact = exact_superprofile(inst, td)?;
            &exact
        }
    };
    let Some(dist) = difference_bounds(inst) else { return Ok(None) };
    let f = f_bound(inst.k(), inst.delta);
    let ctx = Ctx {
        inst,
        td,
        sp,
        dist,
        node_roots: node_roots(inst, td),
        f,
        radius: inst.n() as i64 * inst.delta * f,
        root,
    };
    let mut tables: Vec<Option<McippDpTable>> = vec![None; td.len()];
    for t in td.post_order()? {
        let table = solve_node(&ctx, t, &tables, budget, stats)?;
        for c in td.children(t) {
            tables[c] = None;
        }
        tables[t] = Some(table);
        stats.nodes += 1;
    }
    let top = tables[root].take().expect("root solved");
    let Some(entry) = top.get(&Vec::new()).and_then(|m| m.get(&inst.d)) else { return Ok(None) };
    let y: Vec<i64> = (0..inst.n()).map(|v| entry.y[&v]).collect();
    if !inst.is_feasible(&y) || inst.objective(&y) != entry.value {
        return Err(Error::Invariant("root witness is not a feasible solution of its value".into()));
    }
    Ok(Some((entry.value, y)))
}

/// Guesses on `ys`, adhesion first, within the spread `f` and the
/// difference bounds. Non-root guesses have minimum zero on the adhesion,
/// root guesses minimum zero overall.
fn guesses(ctx: &Ctx, ys: &[usize], n_adh: usize, is_root: bool, budget: &mut u64) -> Result<Vec<Vec<i64>>> {
    let f = ctx.f;
    let mut out = Vec::new();
    let mut cur: Vec<i64> = Vec::with_capacity(ys.len());
    fn rec(
        ctx: &Ctx,
        ys: &[usize],
        n_adh: usize,
        is_root: bool,
        f: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        budget: &mut u64,
    ) -> Result<()> {
        let i = cur.len();
        if i == n_adh && !is_root && n_adh > 0 && cur.iter().min() != Some(&0) {
            return Ok(());
        }
        if i == ys.len() {
            if is_root && !cur.is_empty() && cur.iter().min() != Some(&0) {
                return Ok(());
            }
            out.push(cur.clone());
            return Ok(());
        }
        if *budget == 0 {
            return Err(Error::Budget("guess enumeration exhausted the step budget".into()));
        }
        *budget -= 1;
        let (mut lo, mut hi) = if i < n_adh || is_root { (0, f) } else { (-f, 2 * f) };
        if let (Some(&mx), Some(&mn)) = (cur.iter().max(), cur.iter().min()) {
            lo = lo.max(mx - f);
            hi = hi.min(mn + f);
        }
        let v = ys[i];
        for (j, &w) in ys[..i].iter().enumerate() {
            if let Some(dvw) = ctx.dist[v][w] {
                hi = hi.min(cur[j] + dvw);
            }
            if let Some(dwv) = ctx.dist[w][v] {
                lo = lo.max(cur[j] - dwv);
            }
        }
        for x in lo..=hi {
            cur.push(x);
            rec(ctx, ys, n_adh, is_root, f, cur, out, budget)?;
            cur.pop();
        }
        Ok(())
    }
    rec(ctx, ys, n_adh, is_root, f, &mut cur, &mut out, budget)?;
    Ok(out)
}

fn solve_node(
    ctx: &Ctx,
    t: usize,
    tables: &[Option<McippDpTable>],
    budget: &mut u64,
    stats: &mut McippDpStats,
) -> Result<McippDpTable> {
    let inst = ctx.inst;
    let td = ctx.td;
    let is_root = t == ctx.root;
    let bag: BTreeSet<usize> = td.bags[t].iter().copied().collect();
    let bag_vec: Vec<usize> = bag.iter().copied().collect();
    let adh = td.adhesion(t);
    let adh_set: BTreeSet<usize> = adh.iter().copied().collect();
    let children = td.children(t);
    let infos: Vec<ChildInfo> = children
        .iter()
        .map(|&c| {
            let a = td.adhesion(c);
            let owned: BTreeSet<usize> = td.subtree_vertices(c).into_iter().filter(|v| !a.contains(v)).collect();
            ChildInfo {
                wsum: weight_of(inst, &owned, |_| 1),
                psum: owned.iter().map(|&v| inst.p[v]).sum(),
                adh: a,
            }
        })
        .collect();
    let roots = &ctx.node_roots[t];
    let mut ys: Vec<usize> = adh.clone();
    let rest: BTreeSet<usize> =
        infos.iter().flat_map(|c| c.adh.iter().copied()).chain(roots.iter().copied()).filter(|v| !adh_set.contains(v)).collect();
    ys.extend(rest);
    let owned: BTreeSet<usize> = td.subtree_vertices(t).into_iter().filter(|v| !adh_set.contains(v)).collect();
    let local_owned: BTreeSet<usize> = bag.iter().copied().filter(|v| !adh_set.contains(v)).collect();

    let rpos: Vec<usize> = roots.iter().map(|r| ys.iter().position(|v| v == r).expect("roots are guessed")).collect();
    let members: Vec<u64> = ctx.sp.entries[t]
        .iter()
        .map(|s| s.iter().fold(0u64, |m, v| m | 1 << roots.iter().position(|r| r == v).expect("shape checked")))
        .collect();
    let mut checker = SumChecker::new(members, PATTERN_STEPS);

    let edges: Vec<(usize, usize, i64, i64)> = inst
        .graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| bag.contains(a) && bag.contains(b))
        .map(|(e, &(a, b))| (a, b, inst.l[e], inst.u[e]))
        .collect();
    let p_local: Vec<i64> = bag_vec.iter().map(|v| if adh_set.contains(v) { 0 } else { inst.p[*v] }).collect();
    let p_local_sum: i64 = p_local.iter().sum();
    let mut cache: HashMap<Vec<i64>, Option<(i64, Vec<i64>)>> = HashMap::new();

    let child_tables: Vec<&McippDpTable> =
        children.iter().map(|&c| tables[c].as_ref().expect("children come first")).collect();
    let mut best: BTreeMap<Vec<i64>, BTreeMap<Vec<i64>, (i64, BTreeMap<usize, i64>)>> = BTreeMap::new();

    'guess: for phi in guesses(ctx, &ys, adh.len(), is_root, budget)? {
        stats.guesses += 1;
        if !rpos.is_empty() {
            let vals: Vec<i64> = rpos.iter().map(|&i| phi[i]).collect();
            let (mx, mn) = (*vals.iter().max().unwrap(), *vals.iter().min().unwrap());
            let mut ok = false;
            for c in mx - ctx.f..=mn {
                checker.reset();
                let target: Vec<i64> = vals.iter().map(|v| v - c).collect();
                match checker.min_terms(&target) {
                    Ok(Some(m)) if m as i64 <= ctx.f => {
                        ok = true;
                        break;
                    }
                    Ok(_) => {}
                    Err(_) => {
                        stats.pattern_fallbacks += 1;
                        ok = true;
                        break;
                    }
                }
            }
            if !ok {
                stats.pattern_rejected += 1;
                continue;
            }
        }
        let val_of = |v: usize| phi[ys.iter().position(|&u| u == v).expect("guessed")];
        let mut keys = Vec::with_capacity(infos.len());
        for (ci, info) in infos.iter().enumerate() {
            let vals: Vec<i64> = info.adh.iter().map(|&v| val_of(v)).collect();
            let m = *vals.iter().min().expect("nonempty adhesion");
            let key: Vec<i64> = vals.iter().map(|v| v - m).collect();
            if !child_tables[ci].contains_key(&key) {
                continue 'guess;
            }
            keys.push((key, m));
        }

        let shift = phi.iter().copied().min().unwrap_or(0);
        let norm: Vec<i64> = phi.iter().map(|v| v - shift).collect();
        let solved = match cache.get(&norm) {
            Some(r) => {
                stats.ldcp_cache_hits += 1;
                r.clone()
            }
            None => {
                if *budget == 0 {
                    return Err(Error::Budget("local completions exhausted the step budget".into()));
                }
                *budget -= 1;
                stats.ldcp_solves += 1;
                let local = LocalInstance {
                    bag: bag_vec.clone(),
                    edges: edges.clone(),
                    p: p_local.clone(),
                    fixed: ys.iter().copied().zip(norm.iter().copied()).collect(),
                };
                let r = solve_ldcp(&local)?;
                cache.insert(norm, r.clone());
                r
            }
        };
        let Some((val_norm, y_norm)) = solved else { continue };
        let local_value = val_norm + shift * p_local_sum;
        let y_local: BTreeMap<usize, i64> = bag_vec.iter().zip(&y_norm).map(|(&v, &y)| (v, y + shift)).collect();
        let d_local = weight_of(inst, &local_owned, |v| y_local[&v]);

        let mut acc: BTreeMap<Vec<i64>, (i64, BTreeMap<usize, i64>)> = BTreeMap::new();
        acc.insert(d_local, (local_value, y_local));
        for (ci, info) in infos.iter().enumerate() {
            let (key, m) = &keys[ci];
            let rows = &child_tables[ci][key];
            let mut next: BTreeMap<Vec<i64>, (i64, BTreeMap<usize, i64>)> = BTreeMap::new();
            for (d0, (v0, y0)) in &acc {
                for (d1, e) in rows {
                    let d: Vec<i64> = (0..inst.k()).map(|i| d0[i] + d1[i] + m * info.wsum[i]).collect();
                    let value = v0 + e.value + m * info.psum;
                    let mut y = y0.clone();
                    for (&v, &yv) in &e.y {
                        if let Some(old) = y.insert(v, yv + m) {
                            if old != yv + m {
                                return Err(Error::Invariant(format!("child witness disagrees with the guess at vertex {v}")));
                            }
                        }
                    }
                    match next.get(&d) {
                        Some(old) if !better(value, &y, old) => {}
                        _ => {
                            next.insert(d, (value, y));
                        }
                    }
                }
            }
            acc = next;
        }

        let up: Vec<i64> = phi[..adh.len()].to_vec();
        for (d, (value, y)) in acc {
            if is_root && d != inst.d {
                continue;
            }
            if d.iter().any(|x| x.abs() > ctx.radius) {
                stats.outside_box += 1;
                continue;
            }
            let slot = best.entry(up.clone()).or_default();
            match slot.get(&d) {
                Some(old) if !better(value, &y, old) => {}
                _ => {
                    slot.insert(d, (value, y));
                }
            }
        }
    }

    let mut table = McippDpTable::new();
    let subtree = td.subtree_vertices(t);
    for (up, row) in best {
        let mut out = BTreeMap::new();
        for (d, (value, y)) in row {
            stats.compliance_checks += 1;
            let domain_ok = y.keys().copied().eq(subtree.iter().copied());
            let adh_ok = adh.iter().zip(&up).all(|(v, u)| y.get(v) == Some(u));
            let weight_ok = weight_of(inst, &owned, |v| y[&v]) == d;
            let profit_ok = owned.iter().map(|&v| inst.p[v] * y[&v]).sum::<i64>() == value;
            if !(domain_ok && adh_ok && weight_ok && profit_ok) {
                return Err(Error::Invariant(format!("stored solution at node {t} does not comply with its key")));
            }
            stats.entries += 1;
            out.insert(d, McippEntry { value, y });
        }
        table.insert(up, out);
    }
    Ok(table)
}
