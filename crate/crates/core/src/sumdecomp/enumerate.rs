//! Lattice enumeration of bounded circulations of a small configuration.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::circuits::greedy_basis;
use crate::config::Configuration;
use crate::error::{Error, Result};

/// Values a column may take: an interval, optionally restricted to a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub lo: i64,
    pub hi: i64,
    pub allowed: Option<BTreeSet<i64>>,
}

impl Domain {
    pub fn interval(lo: i64, hi: i64) -> Self {
        Domain { lo, hi, allowed: None }
    }

    pub fn set(values: BTreeSet<i64>) -> Self {
        let lo = values.first().copied().unwrap_or(1);
        let hi = values.last().copied().unwrap_or(0);
        Domain { lo, hi, allowed: Some(values) }
    }

    fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi && self.allowed.as_ref().map_or(true, |s| s.contains(&v))
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || self.allowed.as_ref().is_some_and(|s| s.is_empty())
    }

    fn values(&self) -> Vec<i64> {
        match &self.allowed {
            Some(s) => s.iter().copied().collect(),
            None => (self.lo..=self.hi).collect(),
        }
    }
}

/// Calls `visit` on every integer circulation `x` of `a` with `x_j` in
/// `domains[j]`, in no particular order.
///
/// Columns with the widest domains are made basic; the remaining ones are
/// enumerated with interval pruning on the basic values. `budget` counts
/// search nodes and the call fails once it is exhausted.
pub fn enumerate_circulations(
    a: &Configuration,
    domains: &[Domain],
    budget: &mut u64,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<()> {
    let n = a.n();
    if domains.len() != n {
        return Err(Error::Dimension("one domain per column".into()));
    }
    if domains.iter().any(Domain::is_empty) {
        return Ok(());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(domains[j].hi - domains[j].lo), j));
    let basis = greedy_basis(a, &order);
    let mut nonbasic: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
    nonbasic.sort_by_key(|&j| (domains[j].hi - domains[j].lo, j));
    let mut cols = basis.clone();
    cols.extend_from_slice(&nonbasic);
    let (rr, _) = a.matrix().select_columns(&cols).rref();
    let r = basis.len();
    // scale[i] * x_{basis[i]} = sum_t coef[i][t] * x_{nonbasic[t]}
    let mut scale = vec![1i128; r];
    let mut coef = vec![vec![0i128; nonbasic.len()]; r];
    for i in 0..r {
        let mut l = num_bigint::BigInt::from(1);
        for t in 0..nonbasic.len() {
            l = l.lcm(rr.get(i, r + t).denom());
        }
        scale[i] = l.to_i128().ok_or_else(|| Error::Invariant("denominator overflow".into()))?;
        for t in 0..nonbasic.len() {
            let v = -rr.get(i, r + t) * crate::rational::Rational::from_integer(l.clone());
            debug_assert!(v.denom() == &num_bigint::BigInt::from(1));
            coef[i][t] = v.numer().to_i128().ok_or_else(|| Error::Invariant("coefficient overflow".into()))?;
        }
    }
    let m = nonbasic.len();
    let mut suf_min = vec![vec![0i128; m + 1]; r];
    let mut suf_max = vec![vec![0i128; m + 1]; r];
    for i in 0..r {
        for t in (0..m).rev() {
            let d = &domains[nonbasic[t]];
            let (x, y) = (coef[i][t] * d.lo as i128, coef[i][t] * d.hi as i128);
            suf_min[i][t] = suf_min[i][t + 1] + x.min(y);
            suf_max[i][t] = suf_max[i][t + 1] + x.max(y);
        }
    }
    let ctx = Ctx { basis: &basis, nonbasic: &nonbasic, domains, scale: &scale, coef: &coef, suf_min: &suf_min, suf_max: &suf_max };
    let values: Vec<Vec<i64>> = nonbasic.iter().map(|&j| domains[j].values()).collect();
    let mut partial = vec![0i128; r];
    let mut x = vec![0i64; n];
    dfs(&ctx, &values, 0, &mut partial, &mut x, budget, visit)
}

struct Ctx<'a> {
    basis: &'a [usize],
    nonbasic: &'a [usize],
    domains: &'a [Domain],
    scale: &'a [i128],
    coef: &'a [Vec<i128>],
    suf_min: &'a [Vec<i128>],
    suf_max: &'a [Vec<i128>],
}

fn dfs(
    ctx: &Ctx,
    values: &[Vec<i64>],
    t: usize,
    partial: &mut [i128],
    x: &mut [i64],
    budget: &mut u64,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::Budget("local enumeration".into()));
    }
    *budget -= 1;
    for (i, &b) in ctx.basis.iter().enumerate() {
        let d = &ctx.domains[b];
        let (lo, hi) = (partial[i] + ctx.suf_min[i][t], partial[i] + ctx.suf_max[i][t]);
        if hi < ctx.scale[i] * d.lo as i128 || lo > ctx.scale[i] * d.hi as i128 {
            return Ok(());
        }
    }
    if t == ctx.nonbasic.len() {
        for (i, &b) in ctx.basis.iter().enumerate() {
            if !(partial[i] % ctx.scale[i]).is_zero() {
                return Ok(());
            }
            let v = (partial[i] / ctx.scale[i]) as i64;
            if !ctx.domains[b].contains(v) {
                return Ok(());
            }
            x[b] = v;
        }
        visit(x);
        return Ok(());
    }
    let j = ctx.nonbasic[t];
    for &v in &values[t] {
        x[j] = v;
        for i in 0..partial.len() {
            partial[i] += ctx.coef[i][t] * v as i128;
        }
        let res = dfs(ctx, values, t + 1, partial, x, budget, visit);
        for i in 0..partial.len() {
            partial[i] -= ctx.coef[i][t] * v as i128;
        }
        res?;
    }
    Ok(())
}
