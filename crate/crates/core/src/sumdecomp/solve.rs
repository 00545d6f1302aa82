//! Anchored circulation search: 1-sum over components, 2-sum DP inside.

use crate::circuits::components;
use crate::error::{Error, Result};

use super::enumerate::{enumerate_circulations, Domain};
use super::one_sum::solve_1sum;
use super::tree::build_decomposition_tree;
use super::two_sum::{solve_2sum_dp, DpStats};
use super::{offer, McicpInstance, RootedMcicpInstance, TableEntry, WeightTable};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub components: u64,
    pub direct: u64,
    pub trees: u64,
    pub max_tree_nodes: u64,
    pub dp: DpStats,
}

/// Best `x` with `Ax = 0`, `Wx = d`, `l <= x <= u`, searching weight
/// vectors in `[-Δ f, Δ f]^k`. Ties are broken towards the
/// lexicographically smallest `x` by label.
pub fn solve_anchored(inst: &McicpInstance, f: i64, budget: &mut u64, stats: &mut SolveStats) -> Result<Option<(i64, Vec<i64>)>> {
    inst.check_dimensions()?;
    let bound = inst.delta * f;
    let mut tables: Vec<WeightTable> = Vec::new();
    for comp in components(&inst.a) {
        stats.components += 1;
        let sub = McicpInstance {
            p: comp.iter().map(|&j| inst.p[j]).collect(),
            a: inst.a.select(&comp),
            w: inst.w.select(&comp),
            d: vec![0; inst.k()],
            l: comp.iter().map(|&j| inst.l[j]).collect(),
            u: comp.iter().map(|&j| inst.u[j]).collect(),
            delta: inst.delta,
        };
        let mut table = WeightTable::new();
        if comp.len() <= 2 {
            stats.direct += 1;
            let domains: Vec<Domain> = (0..sub.n()).map(|j| Domain::interval(sub.l[j], sub.u[j])).collect();
            enumerate_circulations(&sub.a, &domains, budget, &mut |x| {
                let d = sub.w.apply(x);
                if d.iter().all(|v| v.abs() <= bound) {
                    let witness = (0..x.len()).map(|j| (sub.a.label(j), x[j])).collect();
                    offer(&mut table, d, TableEntry { value: sub.objective(x), witness });
                }
            })?;
        } else {
            stats.trees += 1;
            let rinst = RootedMcicpInstance::duplicate_column(&sub, 0)?;
            let first_virtual = rinst.root.0 + 1;
            let tree = build_decomposition_tree(&rinst.inst.a, rinst.root, first_virtual)?;
            stats.max_tree_nodes = stats.max_tree_nodes.max(tree.nodes.len() as u64);
            for (d, mut e) in solve_2sum_dp(&rinst, &tree, f, budget, &mut stats.dp)? {
                e.witness.remove(&rinst.root);
                offer(&mut table, d, e);
            }
        }
        tables.push(table);
    }
    let Some(best) = solve_1sum(&tables, &inst.d, bound) else {
        return Ok(None);
    };
    let mut x = vec![0; inst.n()];
    for (l, v) in &best.witness {
        let pos = inst.a.position(*l).ok_or_else(|| Error::Invariant(format!("unknown label {l}")))?;
        x[pos] = *v;
    }
    if !inst.is_feasible(&x) || inst.objective(&x) != best.value {
        return Err(Error::Invariant("anchored solution fails its own checks".into()));
    }
    Ok(Some((best.value, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Configuration, WeightMatrix};

    fn brute(inst: &McicpInstance) -> Option<i64> {
        let domains: Vec<Domain> = (0..inst.n()).map(|j| Domain::interval(inst.l[j], inst.u[j])).collect();
        let mut best = None;
        let mut budget = 10_000_000;
        enumerate_circulations(&inst.a, &domains, &mut budget, &mut |x| {
            if inst.w.apply(x) == inst.d {
                best = best.max(Some(inst.objective(x)));
            }
        })
        .unwrap();
        best
    }

    #[test]
    fn k4_with_a_parallel_edge_and_a_loop() {
        // K4 edges 12 13 14 23 24 34, a copy of 12, and a zero column
        let a = Configuration::from_i64_rows(
            &[
                vec![1, 1, 1, 0, 0, 0, 1, 0],
                vec![-1, 0, 0, 1, 1, 0, -1, 0],
                vec![0, -1, 0, -1, 0, 1, 0, 0],
                vec![0, 0, -1, 0, -1, -1, 0, 0],
            ],
            8,
        )
        .unwrap();
        let w = WeightMatrix::new(vec![vec![1, 0, 1, 0, 0, 1, 1, 1]], 8).unwrap();
        for d in -2..=2 {
            let inst = McicpInstance {
                p: vec![3, -1, 2, 1, -2, 1, -1, 1],
                a: a.clone(),
                w: w.clone(),
                d: vec![d],
                l: vec![-2, -1, -2, -1, -2, -2, -1, -1],
                u: vec![2, 1, 2, 2, 1, 2, 1, 1],
                delta: 1,
            };
            let mut budget = 50_000_000;
            let mut stats = SolveStats::default();
            let got = solve_anchored(&inst, 10, &mut budget, &mut stats).unwrap();
            assert_eq!(got.map(|g| g.0), brute(&inst), "d = {d}");
            assert_eq!(stats.components, 2);
        }
    }
}
