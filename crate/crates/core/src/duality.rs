//! Standard form `[D | I]`, cocircuits, weight equivalence and tameness.

use num_traits::{One, Zero};

use crate::circuits::{circuits, components, fundamental_circuit, greedy_basis, CIRCUIT_CAP};
use crate::config::{Circuit, Configuration, Label, WeightMatrix};
use crate::error::{Error, Result};
use crate::matrix::{RatMatrix, RatVector};
use crate::rational::{rat, to_i64, Rational};

/// `A P` is row-equivalent (after dropping dependent rows) to `[D | I_r]`,
/// where `perm` lists the original positions of the columns of `[D | I_r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Standardized {
    pub d: RatMatrix,
    pub perm: Vec<usize>,
    pub basis: Vec<Label>,
}

/// Basis selection prefers unit columns (by the row of their 1), then the
/// remaining columns left to right.
pub fn standardize(a: &Configuration) -> Standardized {
    let n = a.n();
    let mut units: Vec<(usize, usize)> = Vec::new();
    for j in 0..n {
        let col = a.column(j);
        let nz: Vec<usize> = (0..col.len()).filter(|&i| !col[i].is_zero()).collect();
        if nz.len() == 1 && col[nz[0]].is_one() {
            units.push((nz[0], j));
        }
    }
    units.sort();
    let mut order: Vec<usize> = units.iter().map(|&(_, j)| j).collect();
    let rest: Vec<usize> = (0..n).filter(|j| !order.contains(j)).collect();
    order.extend(rest);
    let mut basis = greedy_basis(a, &order);
    basis.sort_unstable();
    let nonbasic: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
    let mut cols = basis.clone();
    cols.extend_from_slice(&nonbasic);
    let (r, pivots) = a.matrix().select_columns(&cols).rref();
    debug_assert_eq!(pivots, (0..basis.len()).collect::<Vec<_>>());
    let rank = basis.len();
    let d = r.select_columns(&(rank..n).collect::<Vec<_>>());
    let mut perm = nonbasic;
    perm.extend_from_slice(&basis);
    Standardized { d, perm, basis: basis.iter().map(|&j| a.label(j)).collect() }
}

/// Dual configuration `[I_{n-r} | -D']` with columns in `perm` order.
pub fn dual_configuration(a: &Configuration) -> (Configuration, Vec<usize>) {
    let s = standardize(a);
    let r = s.d.rows();
    let k = a.n() - r;
    let mut m = RatMatrix::zeros(k, a.n());
    for i in 0..k {
        m.set(i, i, Rational::one());
        for j in 0..r {
            m.set(i, k + j, -s.d.get(j, i).clone());
        }
    }
    let labels = s.perm.iter().map(|&j| a.label(j)).collect();
    (Configuration::new(m, labels).expect("labels from a valid configuration"), s.perm)
}

/// Circuits of the dual configuration, reindexed to the positions of `a`.
pub fn cocircuits(a: &Configuration) -> Result<Vec<Circuit>> {
    let (dual, perm) = dual_configuration(a);
    let mut out = Vec::new();
    for c in circuits(&dual, CIRCUIT_CAP)? {
        let mut coeffs = vec![0i64; a.n()];
        for (k, &j) in perm.iter().enumerate() {
            coeffs[j] = c.coeffs[k];
        }
        out.push(Circuit::new(coeffs));
    }
    Ok(out)
}

fn basis_positions(a: &Configuration, basis: &[Label]) -> Result<Vec<usize>> {
    let pos = basis
        .iter()
        .map(|l| a.position(*l).ok_or_else(|| Error::Precondition(format!("label {l} not in configuration"))))
        .collect::<Result<Vec<_>>>()?;
    let r = a.rank();
    if pos.len() != r || a.rank_of(&pos) != r {
        return Err(Error::Precondition("labels do not form a basis".into()));
    }
    Ok(pos)
}

/// Fundamental cocircuits of a basis: row `i` has a 1 at `basis[i]` and
/// zeros on the other basis columns.
pub fn fundamental_cocircuits(a: &Configuration, basis: &[Label]) -> Result<Vec<RatVector>> {
    let pos = basis_positions(a, basis)?;
    let mut cols = pos.clone();
    cols.extend((0..a.n()).filter(|j| !pos.contains(j)));
    let (r, _) = a.matrix().select_columns(&cols).rref();
    Ok((0..pos.len())
        .map(|i| {
            let mut v = vec![Rational::zero(); a.n()];
            for (k, &j) in cols.iter().enumerate() {
                v[j] = r.get(i, k).clone();
            }
            v
        })
        .collect())
}

/// Rational form of [`zero_on_basis`].
pub fn zero_on_basis_rat(a: &Configuration, basis: &[Label], w: &[Rational]) -> Result<RatVector> {
    if w.len() != a.n() {
        return Err(Error::Dimension("weight length".into()));
    }
    let pos = basis_positions(a, basis)?;
    let cocirc = fundamental_cocircuits(a, basis)?;
    let mut out = w.to_vec();
    for (i, &b) in pos.iter().enumerate() {
        let f = w[b].clone();
        if f.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(&cocirc[i]) {
            if !c.is_zero() {
                *o -= &f * c;
            }
        }
    }
    Ok(out)
}

/// A weight vector equivalent to `w` on all circuits that vanishes on the
/// basis, obtained by subtracting `w(v)` times the fundamental cocircuit of
/// each basis element `v`.
pub fn zero_on_basis(a: &Configuration, basis: &[Label], w: &[i64]) -> Result<Vec<i64>> {
    let wr: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
    zero_on_basis_rat(a, basis, &wr)?
        .iter()
        .map(|x| to_i64(x).ok_or_else(|| Error::Precondition("fundamental cocircuits are not integral".into())))
        .collect()
}

/// Reference circuit through `root`: the fundamental circuit of `root` with
/// respect to the left-to-right greedy basis of the other columns,
/// normalized to `+1` at `root`. `None` when `root` is a coloop.
pub fn reference_circuit(a: &Configuration, root: usize) -> Option<RatVector> {
    let others: Vec<usize> = (0..a.n()).filter(|&j| j != root).collect();
    let basis = greedy_basis(a, &others);
    fundamental_circuit(a, &basis, root).ok()
}

/// True iff all circuits `c` with `c(root) = 1` carry the same weight vector.
///
/// The root column of `W` is redefined so the reference circuit has zero
/// weight; the configuration is then tame exactly when the redefined weights
/// vanish on every circuit, which is checked on the fundamental circuits of
/// one basis through [`zero_on_basis_rat`].
pub fn is_tame(a: &Configuration, w: &WeightMatrix, root: Label) -> Result<bool> {
    let r = a
        .position(root)
        .ok_or_else(|| Error::Precondition(format!("root {root} not in configuration")))?;
    if w.n() != a.n() {
        return Err(Error::Dimension("weights and configuration differ in length".into()));
    }
    if a.n() >= 2 && components(a).len() != 1 {
        return Err(Error::Precondition("configuration is not 2-connected".into()));
    }
    let Some(cbar) = reference_circuit(a, r) else {
        return Ok(true);
    };
    let all: Vec<usize> = (0..a.n()).collect();
    let basis: Vec<Label> = greedy_basis(a, &all).iter().map(|&j| a.label(j)).collect();
    for row in w.rows() {
        let mut wr: Vec<Rational> = row.iter().map(|&x| rat(x)).collect();
        let through: Rational = wr.iter().zip(&cbar).fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        wr[r] = &wr[r] - through;
        if zero_on_basis_rat(a, &basis, &wr)?.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_zero_vec;

    fn cfg(rows: &[Vec<i64>]) -> Configuration {
        Configuration::from_i64_rows(rows, rows[0].len()).unwrap()
    }

    fn same_kernel(a: &RatMatrix, b: &RatMatrix) -> bool {
        let kb = b.kernel_basis();
        kb.iter().all(|v| is_zero_vec(&a.mul_vec(v).unwrap())) && a.kernel_basis().len() == kb.len()
    }

    fn reassemble(s: &Standardized, n: usize) -> RatMatrix {
        let r = s.d.rows();
        let k = n - r;
        let mut m = RatMatrix::zeros(r, n);
        for i in 0..r {
            for j in 0..k {
                m.set(i, s.perm[j], s.d.get(i, j).clone());
            }
            m.set(i, s.perm[k + i], Rational::one());
        }
        m
    }

    #[test]
    fn standardize_examples() {
        let a = cfg(&[vec![1, 2, 1, 0], vec![3, 4, 0, 1]]);
        let s = standardize(&a);
        assert_eq!(s.perm, vec![0, 1, 2, 3]);
        assert_eq!(s.d, RatMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]).unwrap());

        let b = cfg(&[vec![1, 0, 1, 1], vec![0, 1, 1, -1]]);
        let s = standardize(&b);
        assert_eq!(s.perm, vec![2, 3, 0, 1]);

        let c = cfg(&[vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]]);
        let s = standardize(&c);
        assert_eq!(s.d.rows(), 2);
        assert!(same_kernel(c.matrix(), &reassemble(&s, 3)));
    }

    #[test]
    fn cocircuit_examples() {
        let mut got: Vec<Vec<i64>> = cocircuits(&cfg(&[vec![1, 1]])).unwrap().into_iter().map(|c| c.coeffs).collect();
        got.sort();
        assert_eq!(got, vec![vec![-1, -1], vec![1, 1]]);

        let mut got: Vec<Vec<i64>> = cocircuits(&cfg(&[vec![1, 0], vec![0, 1]])).unwrap().into_iter().map(|c| c.coeffs).collect();
        got.sort();
        assert_eq!(got, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn triangle_cocircuits_are_vertex_cuts() {
        // edges (v1,v2), (v2,v3), (v3,v1)
        let tri = cfg(&[vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1]]);
        let mut got: Vec<Vec<i64>> = cocircuits(&tri).unwrap().into_iter().map(|c| c.coeffs).collect();
        got.sort();
        let mut want = vec![vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1]];
        want.extend(want.clone().into_iter().map(|v| v.into_iter().map(|x| -x).collect::<Vec<_>>()));
        want.sort();
        assert_eq!(got, want);
        for c in circuits(&tri, 10).unwrap() {
            for d in &got {
                assert_eq!(c.coeffs.iter().zip(d).map(|(x, y)| x * y).sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn zero_on_basis_examples() {
        let a = cfg(&[vec![1, 1]]);
        let w2 = zero_on_basis(&a, &[Label(1)], &[0, 5]).unwrap();
        assert_eq!(w2[1], 0);
        assert_eq!(w2[0] - w2[1], 0 - 5);
        assert_eq!(zero_on_basis(&a, &[Label(1)], &[3, 0]).unwrap(), vec![3, 0]);
        assert_eq!(zero_on_basis(&a, &[Label(0)], &[0, 0]).unwrap(), vec![0, 0]);
        assert!(zero_on_basis(&a, &[Label(0), Label(1)], &[0, 0]).is_err());
    }

    #[test]
    fn tameness_examples() {
        let a = cfg(&[vec![1, 1, 1]]);
        assert!(is_tame(&a, &WeightMatrix::new(vec![vec![0, 0, 0]], 3).unwrap(), Label(0)).unwrap());
        assert!(!is_tame(&a, &WeightMatrix::new(vec![vec![0, 1, 2]], 3).unwrap(), Label(0)).unwrap());
        assert!(is_tame(&a, &WeightMatrix::new(vec![vec![4, 2, 2]], 3).unwrap(), Label(0)).unwrap());
        let b = cfg(&[vec![1, 1]]);
        assert!(is_tame(&b, &WeightMatrix::new(vec![vec![7, -3]], 2).unwrap(), Label(0)).unwrap());
        let split = cfg(&[vec![1, 0], vec![0, 1]]);
        assert!(is_tame(&split, &WeightMatrix::empty(2), Label(0)).is_err());
    }
}
