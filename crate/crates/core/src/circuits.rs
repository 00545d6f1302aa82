//! Circuit enumeration, circuit weights and conformal decomposition.

use num_traits::{Signed, Zero};

use crate::config::{Circuit, Configuration, WeightMatrix};
use crate::error::{cap, Error, Result};
use crate::matrix::{primitive_integer_vector, RatMatrix, RatVector};
use crate::rational::{rat, ExtendedBound, Rational};

/// Default column cap for circuit enumeration.
pub const CIRCUIT_CAP: usize = 24;

/// All circuits of `a`, both signs, ordered by support then sign.
///
/// Enumeration grows independent column sets in increasing index order; a
/// set `I + e` that becomes dependent is a circuit exactly when its kernel is
/// one-dimensional with full support.
pub fn circuits(a: &Configuration, support_cap: usize) -> Result<Vec<Circuit>> {
    let n = a.n();
    if n > support_cap || n > 63 {
        return Err(cap("columns for circuit enumeration", n, support_cap.min(63)));
    }
    let mut found: Vec<Circuit> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    grow(a, &mut stack, 0, &mut found);
    found.sort_by(|x, y| {
        let (sx, sy) = (x.support(), y.support());
        sx.len().cmp(&sy.len()).then(sx.cmp(&sy)).then(y.coeffs.cmp(&x.coeffs))
    });
    let mut out = Vec::with_capacity(found.len() * 2);
    for c in found {
        let neg = c.negated();
        out.push(c);
        out.push(neg);
    }
    Ok(out)
}

fn grow(a: &Configuration, indep: &mut Vec<usize>, start: usize, found: &mut Vec<Circuit>) {
    for e in start..a.n() {
        indep.push(e);
        let k = kernel_on(a, indep);
        match k.len() {
            0 => grow(a, indep, e + 1, found),
            1 => {
                let v = &k[0];
                if v.iter().all(|&c| c != 0) {
                    let mut coeffs = vec![0i64; a.n()];
                    for (pos, &j) in indep.iter().enumerate() {
                        coeffs[j] = v[pos];
                    }
                    let first = coeffs.iter().find(|&&c| c != 0).copied().unwrap_or(1);
                    if first < 0 {
                        coeffs.iter_mut().for_each(|c| *c = -*c);
                    }
                    found.push(Circuit::new(coeffs));
                }
            }
            _ => unreachable!("independent set plus one column has nullity at most one"),
        }
        indep.pop();
    }
}

/// Primitive integer kernel basis of the columns at `positions`.
pub(crate) fn kernel_on(a: &Configuration, positions: &[usize]) -> Vec<Vec<i64>> {
    match a.int() {
        Some(m) => m.kernel_of(positions),
        None => a
            .matrix()
            .select_columns(positions)
            .kernel_basis()
            .into_iter()
            .map(|v| primitive_integer_vector(&v))
            .collect(),
    }
}

/// `max ||Wc||_inf` over all circuits `c`; zero when there are none.
pub fn max_circuit_weight(a: &Configuration, w: &WeightMatrix) -> Result<i64> {
    if w.n() != a.n() {
        return Err(Error::Dimension(format!("weights over {} columns, configuration has {}", w.n(), a.n())));
    }
    let mut best = 0;
    for c in circuits(a, CIRCUIT_CAP)? {
        for x in w.apply(&c.coeffs) {
            best = best.max(x.abs());
        }
    }
    Ok(best)
}

/// Circuit-side test of total Δ-modularity of `[A; w']` for TU `A`: every
/// circuit `(x, y)` of `[A | I]` has `|w'x| <= Δ`.
pub fn is_totally_delta_modular_stacked(a: &Configuration, w: &[i64], delta: i64) -> Result<bool> {
    if w.len() != a.n() {
        return Err(Error::Dimension("weight vector length".into()));
    }
    let ext = a.concat(&identity_configuration(a.dim(), a.n() as u32)?)?;
    for c in circuits(&ext, CIRCUIT_CAP)? {
        let v: i64 = c.coeffs[..a.n()].iter().zip(w).map(|(x, y)| x * y).sum();
        if v.abs() > delta {
            return Ok(false);
        }
    }
    Ok(true)
}

fn identity_configuration(m: usize, first_label: u32) -> Result<Configuration> {
    Configuration::new(
        RatMatrix::identity(m),
        (0..m as u32).map(|i| crate::config::Label(first_label + i)).collect(),
    )
}

/// A circuit conformal to the nonzero kernel vector `r` with support inside
/// `supp(r)`, oriented like `r`.
pub fn conformal_circuit(a: &Configuration, r: &[Rational]) -> Result<Vec<i64>> {
    let mut cur: RatVector = r.to_vec();
    loop {
        let supp: Vec<usize> = (0..cur.len()).filter(|&j| !cur[j].is_zero()).collect();
        if supp.is_empty() {
            return Err(Error::Precondition("zero vector has no conformal circuit".into()));
        }
        let kernel = kernel_on(a, &supp);
        if kernel.is_empty() {
            return Err(Error::Precondition("vector is not in the kernel".into()));
        }
        if kernel.len() == 1 {
            let v = &kernel[0];
            let sign = if (rat(v[0]) * &cur[supp[0]]).is_positive() { 1 } else { -1 };
            let mut c = vec![0i64; cur.len()];
            for (pos, &j) in supp.iter().enumerate() {
                c[j] = sign * v[pos];
            }
            return Ok(c);
        }
        // A kernel direction not parallel to `cur`; move along it until a
        // coordinate of `cur` vanishes, which keeps conformality.
        let restricted: Vec<Rational> = supp.iter().map(|&j| cur[j].clone()).collect();
        let k = kernel
            .iter()
            .find(|k| !parallel(k, &restricted))
            .expect("two independent kernel vectors cannot both be parallel to cur");
        let mut theta: Option<Rational> = None;
        let mut flip = false;
        for attempt in 0..2 {
            let s = if attempt == 0 { 1 } else { -1 };
            for (pos, &kv) in k.iter().enumerate() {
                if kv == 0 {
                    continue;
                }
                let q = &restricted[pos] / rat(s * kv);
                if q.is_positive() && theta.as_ref().map_or(true, |t| q < *t) {
                    theta = Some(q);
                }
            }
            if theta.is_some() {
                flip = s < 0;
                break;
            }
        }
        let theta = theta.expect("a kernel vector has entries of both signs relative to cur or shares one");
        for (pos, &j) in supp.iter().enumerate() {
            let kv = if flip { -k[pos] } else { k[pos] };
            if kv != 0 {
                cur[j] = &cur[j] - &theta * rat(kv);
            }
        }
    }
}

fn parallel(k: &[i64], r: &[Rational]) -> bool {
    let Some(p) = k.iter().position(|&x| x != 0) else {
        return true;
    };
    let f = &r[p] / rat(k[p]);
    k.iter().zip(r).all(|(&x, y)| rat(x) * &f == *y)
}

/// Writes `x' = x + sum λ_j c_j` with pairwise conformal circuits and
/// `λ_j > 0`, using at most `dim(P)` terms.
pub fn conformal_decompose(
    a: &Configuration,
    x: &[Rational],
    x_prime: &[Rational],
    l: &[ExtendedBound],
    u: &[ExtendedBound],
) -> Result<Vec<(Circuit, Rational)>> {
    let n = a.n();
    if x.len() != n || x_prime.len() != n || l.len() != n || u.len() != n {
        return Err(Error::Dimension("conformal_decompose lengths".into()));
    }
    let within = |v: &[Rational]| v.iter().zip(l.iter().zip(u)).all(|(xi, (lo, hi))| lo.cmp_rat(xi).is_le() && hi.cmp_rat(xi).is_ge());
    if !within(x) || !within(x_prime) {
        return Err(Error::Precondition("endpoints violate bounds".into()));
    }
    let mut r: RatVector = x_prime.iter().zip(x).map(|(a, b)| a - b).collect();
    if !a.matrix().mul_vec(&r)?.iter().all(|v| v.is_zero()) {
        return Err(Error::Precondition("endpoints have different images under A".into()));
    }
    let mut out = Vec::new();
    while r.iter().any(|v| !v.is_zero()) {
        let c = conformal_circuit(a, &r)?;
        let mut lambda: Option<Rational> = None;
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0 {
                let q = &r[j] / rat(cj);
                if lambda.as_ref().map_or(true, |l| q < *l) {
                    lambda = Some(q);
                }
            }
        }
        let lambda = lambda.expect("circuit has support");
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0 {
                r[j] = &r[j] - &lambda * rat(cj);
            }
        }
        out.push((Circuit::new(c), lambda));
    }
    Ok(out)
}

/// Fundamental circuit of the column at `e` with respect to the independent
/// columns `basis` spanning it, normalized to coefficient `+1` at `e`.
/// Returns rational coefficients indexed by position.
pub fn fundamental_circuit(a: &Configuration, basis: &[usize], e: usize) -> Result<RatVector> {
    let mut cols = basis.to_vec();
    cols.push(e);
    let k = a.matrix().select_columns(&cols).kernel_basis();
    if k.len() != 1 || k[0].last().map_or(true, |v| v.is_zero()) {
        return Err(Error::Precondition("column is not spanned by the given independent set".into()));
    }
    let scale = k[0].last().expect("nonempty").clone();
    let mut out = vec![Rational::zero(); a.n()];
    for (pos, &j) in cols.iter().enumerate() {
        out[j] = &k[0][pos] / &scale;
    }
    Ok(out)
}

/// Greedy basis: scan `order` and keep each column that raises the rank.
pub fn greedy_basis(a: &Configuration, order: &[usize]) -> Vec<usize> {
    let mut basis = Vec::new();
    for &j in order {
        basis.push(j);
        if a.rank_of(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Connected components (1-sum components) of the configuration, each a
/// sorted list of positions, ordered by smallest element.
///
/// Two columns share a component iff they are linked through fundamental
/// circuits of one basis; zero columns and coloops are singletons.
pub fn components(a: &Configuration) -> Vec<Vec<usize>> {
    let n = a.n();
    let all: Vec<usize> = (0..n).collect();
    let basis = greedy_basis(a, &all);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let in_basis: Vec<bool> = (0..n).map(|j| basis.contains(&j)).collect();
    for e in (0..n).filter(|&j| !in_basis[j]) {
        let c = fundamental_circuit(a, &basis, e).expect("nonbasic columns are spanned by the basis");
        for (j, v) in c.iter().enumerate() {
            if !v.is_zero() {
                let (x, y) = (find(&mut parent, j), find(&mut parent, e));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for j in 0..n {
        let r = find(&mut parent, j);
        groups.entry(r).or_default().push(j);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

pub fn is_connected(a: &Configuration) -> bool {
    a.n() <= 1 || components(a).len() == 1
}
