//! The 2-sum dynamic program over a decomposition tree.
//!
//! Every node `t` other than the root shares a virtual column `v_t` with its
//! parent. Its table maps the flow `phi` through `v_t` and a weight vector
//! `d` to the best assignment of the real columns below `t`, where
//! `d = W x_sub + U_t phi` and `U_t` is the weight that the outside must
//! carry along its reference circuit.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::config::{Configuration, Label, WeightMatrix};
use crate::duality::{is_tame, reference_circuit};
use crate::error::{Error, Result};
use crate::rational::{rat, to_i64, Rational};

use super::enumerate::{enumerate_circulations, Domain};
use super::tree::DecompositionTree;
use super::{RootedMcicpInstance, TableEntry, WeightTable, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildKind {
    Tame,
    Wild,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpStats {
    pub nodes: u64,
    pub tame: u64,
    pub wild: u64,
    pub gadgets_verified: u64,
    pub gadgets_skipped: u64,
    pub local_solutions: u64,
    pub entries: u64,
}

/// Tables of one node: `phi -> d -> best`.
pub type PhiTable = BTreeMap<i64, WeightTable>;

/// `-W c` where `c` is the reference circuit of `side` extended by `vbar`,
/// normalized to `+1` at `vbar`.
pub fn upper_weight(side: &Configuration, w_side: &WeightMatrix, vbar: &[Rational]) -> Result<Vec<i64>> {
    let label = Label(side.max_label().map_or(0, |l| l.0 + 1));
    let c = side.with_column(vbar, label)?;
    let r = c.n() - 1;
    let fc = reference_circuit(&c, r).ok_or_else(|| Error::Precondition("virtual column is a coloop".into()))?;
    w_side
        .rows()
        .iter()
        .map(|row| {
            let s = row.iter().zip(&fc).fold(Rational::zero(), |acc, (w, c)| acc + rat(*w) * c);
            to_i64(&-s).ok_or_else(|| Error::Invariant("fractional crossing weight".into()))
        })
        .collect()
}

struct ChildData {
    vbar: Vec<Rational>,
    up: Vec<i64>,
    w0: Vec<i64>,
    kind: ChildKind,
}

fn child_data(rinst: &RootedMcicpInstance, tree: &DecompositionTree, c: usize) -> Result<ChildData> {
    let inst = &rinst.inst;
    let sub_pos = tree
        .subtree_real_labels(c)
        .iter()
        .map(|l| inst.a.position(*l).ok_or_else(|| Error::Invariant(format!("unknown label {l}"))))
        .collect::<Result<Vec<usize>>>()?;
    let out_pos: Vec<usize> = (0..inst.n()).filter(|j| !sub_pos.contains(j)).collect();
    let node = &tree.nodes[c];
    let pl = node.parent_label.ok_or_else(|| Error::Invariant("child without a parent label".into()))?;
    let vbar = node.config.column(node.config.position(pl).expect("parent label in node"));
    let sub = inst.a.select(&sub_pos);
    let w_sub = inst.w.select(&sub_pos);
    let up = upper_weight(&inst.a.select(&out_pos), &inst.w.select(&out_pos), &vbar)?;
    let w0 = upper_weight(&sub, &w_sub, &vbar)?;
    let mut ww = w_sub;
    ww.push_column(&vec![0; inst.k()]);
    let kind = if is_tame(&sub.with_column(&vbar, pl)?, &ww, pl)? { ChildKind::Tame } else { ChildKind::Wild };
    Ok(ChildData { vbar, up, w0, kind })
}

/// Tame or wild, for every child of node `t`.
pub fn classify_children(rinst: &RootedMcicpInstance, tree: &DecompositionTree, t: usize) -> Result<Vec<ChildKind>> {
    tree.nodes[t].children.iter().map(|&c| Ok(child_data(rinst, tree, c)?.kind)).collect()
}

/// Parallel copies of a virtual column whose value function is a given
/// concave `f` with `f(0) = 0`.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub config: Configuration,
    pub root: Label,
    pub profits: Vec<i64>,
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    fmax: usize,
}

impl Gadget {
    /// Best profit with flow `phi` on the root column.
    ///
    /// The root carries `phi = #minus - #plus` where `plus` are the copies of
    /// `vbar` and `minus` the copies of `-vbar`. Concavity makes the best
    /// choice on each side a prefix of the highest profits.
    pub fn value(&self, phi: i64) -> Option<i64> {
        let side = |range: std::ops::Range<usize>| -> Vec<i64> {
            let mut v: Vec<i64> = range.filter(|&j| self.u[j] == 1).map(|j| self.profits[j]).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            let mut pre = vec![0];
            for x in v {
                pre.push(pre.last().unwrap() + x);
            }
            pre
        };
        let plus = side(1..1 + self.fmax);
        let minus = side(1 + self.fmax..1 + 2 * self.fmax);
        let mut best = None;
        for na in 0..plus.len() {
            let nb = na as i64 + phi;
            if nb < 0 || nb as usize >= minus.len() {
                continue;
            }
            let v = plus[na] + minus[nb as usize];
            best = best.max(Some(v));
        }
        best
    }
}

fn is_concave(f: &BTreeMap<i64, i64>) -> bool {
    let keys: Vec<i64> = f.keys().copied().collect();
    if keys.windows(2).any(|w| w[1] != w[0] + 1) {
        return false;
    }
    let inc: Vec<i64> = keys.windows(2).map(|w| f[&w[1]] - f[&w[0]]).collect();
    inc.windows(2).all(|w| w[1] <= w[0])
}

/// Gadget for `f` on `[-fmax, fmax]`: a root copy of `vbar`, then `fmax`
/// copies of `vbar` with profits `f(-j) - f(-j+1)` and `fmax` copies of
/// `-vbar` with profits `f(j) - f(j-1)`. Copies whose profit would involve a
/// value outside the domain of `f` are fixed to zero.
pub fn build_gadget(vbar: &[Rational], f: &BTreeMap<i64, i64>, fmax: i64) -> Result<Gadget> {
    if f.get(&0) != Some(&0) {
        return Err(Error::Precondition("gadget needs f(0) = 0".into()));
    }
    if !is_concave(f) {
        return Err(Error::Precondition("gadget needs a concave f".into()));
    }
    let m = fmax.max(0) as usize;
    let neg: Vec<Rational> = vbar.iter().map(|x| -x).collect();
    let mut cols = vec![vbar.to_vec()];
    let mut profits = vec![0];
    let mut u = vec![0];
    for (sign, col) in [(-1i64, vbar.to_vec()), (1, neg)] {
        for j in 1..=m as i64 {
            cols.push(col.clone());
            match (f.get(&(sign * j)), f.get(&(sign * (j - 1)))) {
                (Some(a), Some(b)) => {
                    profits.push(a - b);
                    u.push(1);
                }
                _ => {
                    profits.push(0);
                    u.push(0);
                }
            }
        }
    }
    let n = cols.len();
    let config = Configuration::from_columns(&cols, vbar.len(), (0..n as u32).map(Label).collect())?;
    Ok(Gadget { config, root: Label(0), profits, l: vec![0; n], u, fmax: m })
}

enum Col {
    Real(usize),
    Parent,
    Child(usize),
}

struct ChildView<'a> {
    table: &'a PhiTable,
    kind: ChildKind,
    shift: Vec<i64>,
    w0: Vec<i64>,
    tame_f: BTreeMap<i64, &'a TableEntry>,
}

/// Runs the DP bottom-up and returns the root table `d -> best` for the
/// prescribed root flow. Entries keep `|d|_inf <= Δ f` and `|phi| <= f`.
pub fn solve_2sum_dp(
    rinst: &RootedMcicpInstance,
    tree: &DecompositionTree,
    f: i64,
    budget: &mut u64,
    stats: &mut DpStats,
) -> Result<WeightTable> {
    let inst = &rinst.inst;
    inst.check_dimensions()?;
    let mut data: Vec<Option<ChildData>> = Vec::with_capacity(tree.nodes.len());
    for t in 0..tree.nodes.len() {
        data.push(if t == tree.root { None } else { Some(child_data(rinst, tree, t)?) });
    }
    let mut tables: Vec<Option<PhiTable>> = vec![None; tree.nodes.len()];
    for t in tree.post_order() {
        let table = solve_node(rinst, tree, &data, &tables, t, f, budget, stats)?;
        stats.nodes += 1;
        stats.entries += table.values().map(|w| w.len() as u64).sum::<u64>();
        tables[t] = Some(table);
    }
    Ok(tables[tree.root].take().and_then(|mut t| t.remove(&0)).unwrap_or_default())
}

fn add_scaled(acc: &mut [i64], v: &[i64], s: i64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b * s;
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_node(
    rinst: &RootedMcicpInstance,
    tree: &DecompositionTree,
    data: &[Option<ChildData>],
    tables: &[Option<PhiTable>],
    t: usize,
    f: i64,
    budget: &mut u64,
    stats: &mut DpStats,
) -> Result<PhiTable> {
    let inst = &rinst.inst;
    let k = inst.k();
    let bound = inst.delta * f;
    let wild_cap = 2 * k as i64 * inst.delta * f;
    let node = &tree.nodes[t];
    let cfg = &node.config;
    let up_t = data[t].as_ref().map_or(vec![0; k], |d| d.up.clone());

    let mut views: Vec<ChildView> = Vec::new();
    for &c in &node.children {
        let cd = data[c].as_ref().expect("child data");
        let table = tables[c].as_ref().ok_or_else(|| Error::Invariant("child table missing".into()))?;
        let shift: Vec<i64> = cd.up.iter().zip(&cd.w0).map(|(a, b)| a - b).collect();
        let mut tame_f = BTreeMap::new();
        match cd.kind {
            ChildKind::Tame => {
                stats.tame += 1;
                for (&phi, wt) in table {
                    let line: Vec<i64> = shift.iter().map(|s| s * phi).collect();
                    if wt.keys().any(|d| *d != line) {
                        return Err(Error::Invariant("tame child has an entry off its weight line".into()));
                    }
                    if let Some(e) = wt.get(&line) {
                        tame_f.insert(phi, e);
                    }
                }
                let fmap: BTreeMap<i64, i64> = tame_f.iter().map(|(p, e)| (*p, e.value)).collect();
                if fmap.get(&0) == Some(&0) && is_concave(&fmap) {
                    let g = build_gadget(&cd.vbar, &fmap, f)?;
                    for phi in -f..=f {
                        if g.value(phi) != fmap.get(&phi).copied() {
                            return Err(Error::Invariant("gadget value function differs".into()));
                        }
                    }
                    stats.gadgets_verified += 1;
                } else {
                    stats.gadgets_skipped += 1;
                }
            }
            ChildKind::Wild => stats.wild += 1,
        }
        views.push(ChildView { table, kind: cd.kind, shift, w0: cd.w0.clone(), tame_f });
    }

    let mut cols = Vec::with_capacity(cfg.n());
    let mut domains = Vec::with_capacity(cfg.n());
    let mut wloc: Vec<Vec<i64>> = Vec::with_capacity(cfg.n());
    for j in 0..cfg.n() {
        let label = cfg.label(j);
        if node.parent_label == Some(label) {
            cols.push(Col::Parent);
            domains.push(Domain::interval(-f, f));
            wloc.push(up_t.clone());
        } else if let Some(ci) = node.children.iter().position(|&c| tree.nodes[c].parent_label == Some(label)) {
            let v = &views[ci];
            let phis: Vec<i64> = match v.kind {
                ChildKind::Tame => v.tame_f.keys().copied().collect(),
                ChildKind::Wild => v.table.iter().filter(|(_, w)| !w.is_empty()).map(|(p, _)| *p).collect(),
            };
            cols.push(Col::Child(ci));
            domains.push(Domain::set(phis.iter().map(|p| -p).collect()));
            wloc.push(v.w0.clone());
        } else {
            let pos = inst.a.position(label).ok_or_else(|| Error::Invariant(format!("unknown label {label}")))?;
            cols.push(Col::Real(pos));
            domains.push(if label == rinst.root {
                Domain::interval(rinst.phi, rinst.phi)
            } else {
                Domain::interval(inst.l[pos], inst.u[pos])
            });
            wloc.push(inst.w.column(pos));
        }
    }
    let wild: Vec<usize> = (0..views.len()).filter(|&i| views[i].kind == ChildKind::Wild).collect();
    let col_of_child: Vec<usize> = (0..views.len())
        .map(|ci| cols.iter().position(|c| matches!(c, Col::Child(x) if *x == ci)).expect("child column"))
        .collect();

    // (phi_t, wild phis, d0) -> (value, local x)
    let mut groups: BTreeMap<(i64, Vec<i64>, Vec<i64>), (i64, Vec<i64>)> = BTreeMap::new();
    let mut visited = 0u64;
    enumerate_circulations(cfg, &domains, budget, &mut |x| {
        visited += 1;
        let wphis: Vec<i64> = wild.iter().map(|&ci| -x[col_of_child[ci]]).collect();
        if wphis.iter().map(|p| p.abs()).sum::<i64>() > wild_cap {
            return;
        }
        let mut phi_t = 0;
        let mut value = 0;
        let mut d0 = vec![0; k];
        for (j, c) in cols.iter().enumerate() {
            add_scaled(&mut d0, &wloc[j], x[j]);
            match c {
                Col::Parent => phi_t = x[j],
                Col::Real(pos) => value += inst.p[*pos] * x[j],
                Col::Child(ci) => {
                    if let Some(e) = views[*ci].tame_f.get(&-x[j]) {
                        value += e.value;
                    }
                }
            }
        }
        let key = (phi_t, wphis, d0);
        match groups.get(&key) {
            Some((v, old)) if *v > value || (*v == value && old.as_slice() <= x) => {}
            _ => {
                groups.insert(key, (value, x.to_vec()));
            }
        }
    })?;
    stats.local_solutions += visited;

    let groups: Vec<((i64, Vec<i64>, Vec<i64>), (i64, Vec<i64>))> = groups.into_iter().collect();
    let build = |gi: usize, chosen: &[Vec<i64>]| -> Witness {
        let ((_, wphis, _), (_, x)) = &groups[gi];
        let mut w = Witness::new();
        for (j, c) in cols.iter().enumerate() {
            match c {
                Col::Real(pos) => {
                    w.insert(inst.a.label(*pos), x[j]);
                }
                Col::Child(ci) if views[*ci].kind == ChildKind::Tame => {
                    w.extend(views[*ci].tame_f[&-x[j]].witness.iter().map(|(a, b)| (*a, *b)));
                }
                _ => {}
            }
        }
        for (wi, &ci) in wild.iter().enumerate() {
            w.extend(views[ci].table[&wphis[wi]][&chosen[wi]].witness.iter().map(|(a, b)| (*a, *b)));
        }
        w
    };

    // (phi_t, d) -> (value, group, chosen child weights)
    let mut cands: BTreeMap<(i64, Vec<i64>), (i64, usize, Vec<Vec<i64>>)> = BTreeMap::new();
    for (gi, ((phi_t, wphis, d0), (val, _))) in groups.iter().enumerate() {
        if phi_t.abs() > f {
            continue;
        }
        let mut acc: BTreeMap<(Vec<i64>, i64), (i64, Vec<Vec<i64>>)> = BTreeMap::new();
        acc.insert((d0.clone(), 0), (*val, Vec::new()));
        for (wi, &ci) in wild.iter().enumerate() {
            let phi = wphis[wi];
            let v = &views[ci];
            let tbl = &v.table[&phi];
            let mut next: BTreeMap<(Vec<i64>, i64), (i64, Vec<Vec<i64>>)> = BTreeMap::new();
            for ((d, zc), (value, chosen)) in &acc {
                for (dc, e) in tbl {
                    if *budget == 0 {
                        return Err(Error::Budget("wild child combination".into()));
                    }
                    *budget -= 1;
                    let nzc = zc + i64::from(phi == 0 && dc.iter().any(|x| *x != 0));
                    if nzc > f {
                        continue;
                    }
                    let mut nd = d.clone();
                    add_scaled(&mut nd, dc, 1);
                    add_scaled(&mut nd, &v.shift, -phi);
                    let nv = value + e.value;
                    match next.get(&(nd.clone(), nzc)) {
                        Some((old, _)) if *old >= nv => {}
                        _ => {
                            let mut ch = chosen.clone();
                            ch.push(dc.clone());
                            next.insert((nd, nzc), (nv, ch));
                        }
                    }
                }
            }
            acc = next;
        }
        for ((d, _), (value, chosen)) in acc {
            if d.iter().any(|x| x.abs() > bound) {
                continue;
            }
            let key = (*phi_t, d);
            let better = match cands.get(&key) {
                None => true,
                Some((old, _, _)) if value > *old => true,
                Some((old, ogi, och)) if value == *old => build(gi, &chosen) < build(*ogi, och),
                _ => false,
            };
            if better {
                cands.insert(key, (value, gi, chosen));
            }
        }
    }

    let mut out = PhiTable::new();
    for ((phi_t, d), (value, gi, chosen)) in cands {
        let witness = build(gi, &chosen);
        let mut profit = 0;
        let mut weight = vec![0; k];
        add_scaled(&mut weight, &up_t, phi_t);
        for (l, v) in &witness {
            let pos = inst.a.position(*l).expect("real label");
            profit += inst.p[pos] * v;
            add_scaled(&mut weight, &inst.w.column(pos), *v);
        }
        if profit != value || weight != d {
            return Err(Error::Invariant("table entry does not match its witness".into()));
        }
        out.entry(phi_t).or_default().insert(d, TableEntry { value, witness });
    }
    Ok(out)
}
