//! Total unimodularity by subdeterminant enumeration.

use crate::config::Configuration;
use crate::error::{cap, Error, Result};
use crate::matrix::IntMat;

/// Largest `min(m, n)` accepted by [`is_totally_unimodular`].
pub const TU_CAP: usize = 8;

/// True iff every square submatrix has determinant in `{-1, 0, 1}`.
///
/// Rows and columns with at most one nonzero, and repeated (or negated)
/// rows and columns, do not affect total unimodularity once all entries are
/// in `{-1, 0, 1}`, so they are stripped before the enumeration.
pub fn is_totally_unimodular(a: &Configuration) -> Result<bool> {
    let Some(m) = a.int() else {
        return Ok(false);
    };
    if m.data.iter().any(|&x| x.abs() > 1) {
        return Ok(false);
    }
    let (rows, cols) = core_of(m);
    if rows.len().min(cols.len()) > TU_CAP {
        return Err(cap("min(rows, cols) for the TU test", rows.len().min(cols.len()), TU_CAP));
    }
    let k_max = rows.len().min(cols.len());
    for k in 2..=k_max {
        let mut ok = true;
        for_each_subset(rows.len(), k, &mut |rs| {
            for_each_subset(cols.len(), k, &mut |cs| {
                let d = det_small(m, &rs.iter().map(|&i| rows[i]).collect::<Vec<_>>(), &cs.iter().map(|&j| cols[j]).collect::<Vec<_>>());
                if d.abs() > 1 {
                    ok = false;
                }
                ok
            });
            ok
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `|det|` over square submatrices of an integer matrix with
/// `min(rows, cols) <= cap`.
pub fn max_minor(m: &IntMat, cap_size: usize) -> Result<i64> {
    let k_max = m.rows.min(m.cols);
    if k_max > cap_size {
        return Err(cap("min(rows, cols) for the minor scan", k_max, cap_size));
    }
    let mut best = 0i128;
    for k in 1..=k_max {
        for_each_subset(m.rows, k, &mut |rs| {
            for_each_subset(m.cols, k, &mut |cs| {
                best = best.max(det_small(m, rs, cs).abs());
                true
            });
            true
        });
    }
    i64::try_from(best).map_err(|_| Error::Invariant("minor exceeds i64".into()))
}

/// A smallest square submatrix with `|det| > 1`, as row indices, column
/// indices and determinant.
pub fn violating_minor(m: &IntMat, cap_size: usize) -> Result<Option<(Vec<usize>, Vec<usize>, i64)>> {
    let k_max = m.rows.min(m.cols);
    if k_max > cap_size {
        return Err(cap("min(rows, cols) for the minor scan", k_max, cap_size));
    }
    let mut found = None;
    for k in 1..=k_max {
        for_each_subset(m.rows, k, &mut |rs| {
            for_each_subset(m.cols, k, &mut |cs| {
                let d = det_small(m, rs, cs);
                if d.abs() > 1 {
                    found = Some((rs.to_vec(), cs.to_vec(), d as i64));
                }
                found.is_none()
            })
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// Row and column indices left after repeatedly removing lines with at most
/// one nonzero and duplicate lines up to sign.
fn core_of(m: &IntMat) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = (0..m.rows).collect();
    let mut cols: Vec<usize> = (0..m.cols).collect();
    loop {
        let before = (rows.len(), cols.len());
        rows.retain(|&i| cols.iter().filter(|&&j| m.get(i, j) != 0).count() > 1);
        cols.retain(|&j| rows.iter().filter(|&&i| m.get(i, j) != 0).count() > 1);
        rows = dedup_lines(&rows, |i| cols.iter().map(|&j| m.get(i, j)).collect());
        cols = dedup_lines(&cols, |j| rows.iter().map(|&i| m.get(i, j)).collect());
        if (rows.len(), cols.len()) == before {
            return (rows, cols);
        }
    }
}

fn dedup_lines(idx: &[usize], line: impl Fn(usize) -> Vec<i64>) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &i in idx {
        let mut v = line(i);
        if let Some(f) = v.iter().find(|&&x| x != 0) {
            if *f < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        if seen.insert(v) {
            out.push(i);
        }
    }
    out
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return true;
    }
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn det_small(m: &IntMat, rows: &[usize], cols: &[usize]) -> i128 {
    let k = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j) as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..k {
        if a[c][c] == 0 {
            match (c + 1..k).find(|&i| a[i][c] != 0) {
                Some(p) => {
                    a.swap(c, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in c + 1..k {
            for j in c + 1..k {
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
            }
        }
        prev = a[c][c];
    }
    sign * a[k - 1][k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rows: &[Vec<i64>]) -> Configuration {
        Configuration::from_i64_rows(rows, rows[0].len()).unwrap()
    }

    #[test]
    fn violating_minor_is_smallest() {
        let m = IntMat::from_rows(&[vec![1, 1, 0], vec![-1, 1, 2]], 3);
        assert_eq!(violating_minor(&m, 4).unwrap(), Some((vec![1], vec![2], 2)));
        let m = IntMat::from_rows(&[vec![1, 1], vec![-1, 1]], 2);
        assert_eq!(violating_minor(&m, 4).unwrap(), Some((vec![0, 1], vec![0, 1], 2)));
        assert_eq!(violating_minor(&IntMat::from_rows(&[vec![1, -1]], 2), 4).unwrap(), None);
    }

    #[test]
    fn examples() {
        assert!(!is_totally_unimodular(&cfg(&[vec![1, 1], vec![1, 2]])).unwrap());
        assert!(!is_totally_unimodular(&cfg(&[vec![1, 1], vec![-1, 1]])).unwrap());
        // incidence matrix of a directed 4-cycle with a chord
        let inc = cfg(&[
            vec![1, 0, 0, -1, 1],
            vec![-1, 1, 0, 0, 0],
            vec![0, -1, 1, 0, -1],
            vec![0, 0, -1, 1, 0],
        ]);
        assert!(is_totally_unimodular(&inc).unwrap());
    }

    #[test]
    fn minor_scan() {
        let m = IntMat::from_rows(&[vec![1, 1], vec![1, 2]], 2);
        assert_eq!(max_minor(&m, 4).unwrap(), 2);
        assert_eq!(max_minor(&IntMat::from_rows(&[vec![0, 0]], 2), 4).unwrap(), 0);
    }

    #[test]
    fn odd_cycle_matrix_is_not_tu() {
        let odd = cfg(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert!(!is_totally_unimodular(&odd).unwrap());
    }

    #[test]
    fn subsets_are_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, &mut |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }
}
