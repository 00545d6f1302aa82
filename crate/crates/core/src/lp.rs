//! Exact LP over `{Ax = b, l <= x <= u}` by a bounded-variable primal simplex
//! with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{RatMatrix, RatVector};
use crate::rational::{ExtendedBound, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// `ray` satisfies `A ray = 0`, respects the bound directions and has
    /// positive objective.
    Unbounded { ray: RatVector },
    Optimal { point: RatVector, value: Rational },
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&RatVector, &Rational)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, value)),
            _ => None,
        }
    }
}

const ITERATION_CAP: usize = 200_000;

/// How an original variable is expressed through nonnegative internal ones.
#[derive(Debug, Clone)]
enum VarMap {
    /// x = offset + s
    Shift { s: usize, offset: Rational },
    /// x = offset - s
    Flip { s: usize, offset: Rational },
    /// x = s_plus - s_minus
    Split { plus: usize, minus: usize },
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    value: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
    /// Reduced costs `c - c_B B^-1 A`.
    d: Vec<Rational>,
}

enum Step {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn set_costs(&mut self, cost: &[Rational]) {
        let n = cost.len();
        let mut d = cost.to_vec();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.t[i][j].is_zero() {
                    d[j] -= cb * &self.t[i][j];
                }
            }
        }
        self.d = d;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let n = self.t[r].len();
        let inv = self.t[r][j].recip();
        for k in 0..n {
            if !self.t[r][k].is_zero() {
                let v = &self.t[r][k] * &inv;
                self.t[r][k] = v;
            }
        }
        let pivot_row = self.t[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][j].is_zero() {
                continue;
            }
            let f = self.t[i][j].clone();
            for k in 0..n {
                if !pivot_row[k].is_zero() {
                    let v = &self.t[i][k] - &f * &pivot_row[k];
                    self.t[i][k] = v;
                }
            }
        }
        if !self.d[j].is_zero() {
            let f = self.d[j].clone();
            for k in 0..n {
                if !pivot_row[k].is_zero() {
                    let v = &self.d[k] - &f * &pivot_row[k];
                    self.d[k] = v;
                }
            }
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }

    fn run(&mut self) -> Result<Step> {
        let n = self.d.len();
        for _ in 0..ITERATION_CAP {
            let entering = (0..n).find(|&j| {
                if self.is_basic[j] || self.upper[j].as_ref().is_some_and(|u| u.is_zero()) {
                    return false;
                }
                if self.at_upper[j] {
                    self.d[j].is_negative()
                } else {
                    self.d[j].is_positive()
                }
            });
            let Some(j) = entering else {
                return Ok(Step::Optimal);
            };
            let sigma = if self.at_upper[j] { -Rational::one() } else { Rational::one() };

            // Ratio test. `best` holds (theta, row or None for a bound flip, leaves at upper).
            let mut best: Option<(Rational, Option<usize>, bool)> = self.upper[j].clone().map(|u| (u, None, false));
            for i in 0..self.t.len() {
                let a = &self.t[i][j];
                if a.is_zero() {
                    continue;
                }
                let delta = -(&sigma * a);
                let bv = self.basis[i];
                let (limit, to_upper) = if delta.is_negative() {
                    (&self.value[bv] / -&delta, false)
                } else {
                    match &self.upper[bv] {
                        Some(u) => ((u - &self.value[bv]) / &delta, true),
                        None => continue,
                    }
                };
                let better = match &best {
                    None => true,
                    Some((th, row, _)) => match limit.cmp(th) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => match row {
                            None => false,
                            Some(r) => bv < self.basis[*r],
                        },
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((limit, Some(i), to_upper));
                }
            }
            let Some((theta, row, to_upper)) = best else {
                return Ok(Step::Unbounded { entering: j });
            };
            if !theta.is_zero() {
                let step = &sigma * &theta;
                self.value[j] += &step;
                for i in 0..self.t.len() {
                    if !self.t[i][j].is_zero() {
                        let bv = self.basis[i];
                        let v = &self.value[bv] - &self.t[i][j] * &step;
                        self.value[bv] = v;
                    }
                }
            }
            match row {
                None => self.at_upper[j] = !self.at_upper[j],
                Some(r) => {
                    let leaving = self.basis[r];
                    self.value[leaving] = if to_upper {
                        self.upper[leaving].clone().expect("upper bound")
                    } else {
                        Rational::zero()
                    };
                    self.at_upper[leaving] = to_upper;
                    self.pivot(r, j);
                }
            }
        }
        Err(Error::Invariant("simplex iteration cap reached".into()))
    }
}

/// Solves `max p'x s.t. Ax = b, l <= x <= u` exactly.
///
/// When the feasible region is pointed, an `Optimal` point is a vertex.
pub fn lp_solve(
    p: &[Rational],
    a: &RatMatrix,
    b: &[Rational],
    l: &[ExtendedBound],
    u: &[ExtendedBound],
) -> Result<LpOutcome> {
    let n = a.cols();
    let m = a.rows();
    if p.len() != n || l.len() != n || u.len() != n || b.len() != m {
        return Err(Error::Dimension(format!(
            "lp with {m}x{n} matrix, |p|={}, |b|={}, |l|={}, |u|={}",
            p.len(),
            b.len(),
            l.len(),
            u.len()
        )));
    }
    for j in 0..n {
        if l[j] > u[j] || l[j] == ExtendedBound::PosInf || u[j] == ExtendedBound::NegInf {
            return Ok(LpOutcome::Infeasible);
        }
    }

    let mut maps = Vec::with_capacity(n);
    let mut upper: Vec<Option<Rational>> = Vec::new();
    let mut cost: Vec<Rational> = Vec::new();
    let mut cols: Vec<(usize, Rational)> = Vec::new(); // (original column, sign)
    for j in 0..n {
        match (&l[j], &u[j]) {
            (ExtendedBound::Finite(lo), hi) => {
                let s = upper.len();
                upper.push(hi.finite().map(|h| h - lo));
                cost.push(p[j].clone());
                cols.push((j, Rational::one()));
                maps.push(VarMap::Shift { s, offset: lo.clone() });
            }
            (ExtendedBound::NegInf, ExtendedBound::Finite(hi)) => {
                let s = upper.len();
                upper.push(None);
                cost.push(-p[j].clone());
                cols.push((j, -Rational::one()));
                maps.push(VarMap::Flip { s, offset: hi.clone() });
            }
            _ => {
                let plus = upper.len();
                upper.push(None);
                cost.push(p[j].clone());
                cols.push((j, Rational::one()));
                upper.push(None);
                cost.push(-p[j].clone());
                cols.push((j, -Rational::one()));
                maps.push(VarMap::Split { plus, minus: plus + 1 });
            }
        }
    }
    let ns = upper.len();

    // b' = b - A * offsets
    let mut rhs = b.to_vec();
    for (j, map) in maps.iter().enumerate() {
        let off = match map {
            VarMap::Shift { offset, .. } | VarMap::Flip { offset, .. } => offset,
            VarMap::Split { .. } => continue,
        };
        if off.is_zero() {
            continue;
        }
        for (i, r) in rhs.iter_mut().enumerate() {
            let aij = a.get(i, j);
            if !aij.is_zero() {
                *r -= aij * off;
            }
        }
    }

    let total = ns + m;
    let mut t = vec![vec![Rational::zero(); total]; m];
    for i in 0..m {
        let flip = rhs[i].is_negative();
        for (s, (j, sign)) in cols.iter().enumerate() {
            let aij = a.get(i, *j);
            if !aij.is_zero() {
                let v = aij * sign;
                t[i][s] = if flip { -v } else { v };
            }
        }
        t[i][ns + i] = Rational::one();
        if flip {
            rhs[i] = -rhs[i].clone();
        }
    }
    let mut value = vec![Rational::zero(); total];
    for i in 0..m {
        value[ns + i] = rhs[i].clone();
    }
    let mut all_upper = upper.clone();
    all_upper.extend(std::iter::repeat(None).take(m));
    let mut is_basic = vec![false; total];
    for i in 0..m {
        is_basic[ns + i] = true;
    }
    let mut tab = Tableau {
        t,
        basis: (ns..ns + m).collect(),
        value,
        upper: all_upper,
        at_upper: vec![false; total],
        is_basic,
        d: Vec::new(),
    };

    // Phase 1: maximize minus the sum of artificials.
    let mut phase1 = vec![Rational::zero(); total];
    for c in phase1.iter_mut().skip(ns) {
        *c = -Rational::one();
    }
    tab.set_costs(&phase1);
    if let Step::Unbounded { .. } = tab.run()? {
        return Err(Error::Invariant("phase one cannot be unbounded".into()));
    }
    if tab.value[ns..].iter().any(|v| v.is_positive()) {
        return Ok(LpOutcome::Infeasible);
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= ns {
            match (0..ns).find(|&j| !tab.is_basic[j] && !tab.t[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    let art = tab.basis[r];
                    tab.is_basic[art] = false;
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for j in ns..total {
        tab.upper[j] = Some(Rational::zero());
        tab.value[j] = Rational::zero();
        tab.at_upper[j] = false;
    }

    let mut phase2 = cost.clone();
    phase2.extend(std::iter::repeat(Rational::zero()).take(m));
    tab.set_costs(&phase2);
    match tab.run()? {
        Step::Optimal => {
            let point: RatVector = maps
                .iter()
                .map(|map| match map {
                    VarMap::Shift { s, offset } => offset + &tab.value[*s],
                    VarMap::Flip { s, offset } => offset - &tab.value[*s],
                    VarMap::Split { plus, minus } => &tab.value[*plus] - &tab.value[*minus],
                })
                .collect();
            let value = point.iter().zip(p).fold(Rational::zero(), |acc, (x, c)| acc + x * c);
            Ok(LpOutcome::Optimal { point, value })
        }
        Step::Unbounded { entering } => {
            let mut rs = vec![Rational::zero(); total];
            rs[entering] = Rational::one();
            for (i, &bv) in tab.basis.iter().enumerate() {
                if !tab.t[i][entering].is_zero() {
                    rs[bv] = -tab.t[i][entering].clone();
                }
            }
            let ray: RatVector = maps
                .iter()
                .map(|map| match map {
                    VarMap::Shift { s, .. } => rs[*s].clone(),
                    VarMap::Flip { s, .. } => -rs[*s].clone(),
                    VarMap::Split { plus, minus } => &rs[*plus] - &rs[*minus],
                })
                .collect();
            Ok(LpOutcome::Unbounded { ray })
        }
    }
}

/// Checks `Ax = b` and `l <= x <= u`.
pub fn is_feasible_point(a: &RatMatrix, b: &[Rational], l: &[ExtendedBound], u: &[ExtendedBound], x: &[Rational]) -> bool {
    if x.len() != a.cols() || b.len() != a.rows() {
        return false;
    }
    let ax = match a.mul_vec(x) {
        Ok(v) => v,
        Err(_) => return false,
    };
    ax.as_slice() == b
        && x.iter()
            .zip(l.iter().zip(u))
            .all(|(xi, (lo, hi))| lo.cmp_rat(xi).is_le() && hi.cmp_rat(xi).is_ge())
}

/// Bounds of the minimal face of `{Ax = b, l <= x <= u}` containing `x`:
/// coordinates sitting at a bound are fixed.
pub fn minimal_face_bounds(
    a: &RatMatrix,
    b: &[Rational],
    l: &[ExtendedBound],
    u: &[ExtendedBound],
    x: &[Rational],
) -> Result<(Vec<ExtendedBound>, Vec<ExtendedBound>)> {
    if l.len() != x.len() || u.len() != x.len() {
        return Err(Error::Dimension("bounds and point lengths differ".into()));
    }
    if !is_feasible_point(a, b, l, u, x) {
        return Err(Error::Precondition("point is not feasible".into()));
    }
    let mut lo = l.to_vec();
    let mut hi = u.to_vec();
    for i in 0..x.len() {
        if l[i].cmp_rat(&x[i]).is_eq() || u[i].cmp_rat(&x[i]).is_eq() {
            lo[i] = ExtendedBound::Finite(x[i].clone());
            hi[i] = ExtendedBound::Finite(x[i].clone());
        }
    }
    Ok((lo, hi))
}

/// The lexicographically smallest vertex of a nonempty polytope with finite
/// bounds, found by fixing coordinates one at a time at their minimum.
pub fn vertex_of_polytope(a: &RatMatrix, b: &[Rational], l: &[ExtendedBound], u: &[ExtendedBound]) -> Result<RatVector> {
    let n = a.cols();
    if l.len() != n || u.len() != n {
        return Err(Error::Dimension("bounds length".into()));
    }
    for i in 0..n {
        if !l[i].is_finite() || !u[i].is_finite() {
            return Err(Error::InfiniteBound(i));
        }
    }
    let mut lo = l.to_vec();
    let mut hi = u.to_vec();
    let mut current: Option<RatVector> = None;
    for i in 0..n {
        if lo[i] == hi[i] {
            continue;
        }
        if let Some(x) = &current {
            if lo[i].cmp_rat(&x[i]).is_eq() {
                hi[i] = lo[i].clone();
                continue;
            }
        }
        let mut obj = vec![Rational::zero(); n];
        obj[i] = -Rational::one();
        match lp_solve(&obj, a, b, &lo, &hi)? {
            LpOutcome::Optimal { point, .. } => {
                lo[i] = ExtendedBound::Finite(point[i].clone());
                hi[i] = lo[i].clone();
                current = Some(point);
            }
            LpOutcome::Infeasible => return Err(Error::Infeasible("polytope is empty".into())),
            LpOutcome::Unbounded { .. } => return Err(Error::Invariant("bounded polytope reported unbounded".into())),
        }
    }
    let x: RatVector = lo.iter().map(|v| v.finite().expect("fixed").clone()).collect();
    if !is_feasible_point(a, b, l, u, &x) {
        return Err(Error::Infeasible("polytope is empty".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{finite_bounds, rat, rat_vec, ratio};

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn optimal_example() {
        let out = lp_solve(&rat_vec(&[1, 0]), &m(&[vec![1, 1]]), &rat_vec(&[1]), &finite_bounds(&[0, 0]), &finite_bounds(&[1, 1]))
            .unwrap();
        assert_eq!(out, LpOutcome::Optimal { point: rat_vec(&[1, 0]), value: rat(1) });
    }

    #[test]
    fn infeasible_example() {
        let out = lp_solve(&rat_vec(&[1]), &m(&[vec![1]]), &rat_vec(&[2]), &finite_bounds(&[0]), &finite_bounds(&[1])).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_example() {
        let a = RatMatrix::zeros(0, 1);
        let out = lp_solve(&rat_vec(&[1]), &a, &[], &finite_bounds(&[0]), &[ExtendedBound::PosInf]).unwrap();
        assert_eq!(out, LpOutcome::Unbounded { ray: rat_vec(&[1]) });
    }

    #[test]
    fn free_and_flipped_variables() {
        // max x1 + x2, x1 - x2 = 1, x1 <= 3, x2 free
        let out = lp_solve(
            &rat_vec(&[1, 1]),
            &m(&[vec![1, -1]]),
            &rat_vec(&[1]),
            &[ExtendedBound::NegInf, ExtendedBound::NegInf],
            &[ExtendedBound::int(3), ExtendedBound::PosInf],
        )
        .unwrap();
        assert_eq!(out, LpOutcome::Optimal { point: rat_vec(&[3, 2]), value: rat(5) });
    }

    #[test]
    fn redundant_rows_are_handled() {
        let a = m(&[vec![1, 1, 0], vec![2, 2, 0], vec![0, 1, 1]]);
        let out = lp_solve(&rat_vec(&[0, 1, 0]), &a, &rat_vec(&[2, 4, 3]), &finite_bounds(&[0, 0, 0]), &finite_bounds(&[5, 5, 5]))
            .unwrap();
        assert_eq!(out, LpOutcome::Optimal { point: rat_vec(&[0, 2, 1]), value: rat(2) });
    }

    #[test]
    fn fractional_vertex() {
        // max x1 s.t. 2 x1 + 2 x2 = 1
        let out = lp_solve(&rat_vec(&[1, 0]), &m(&[vec![2, 2]]), &rat_vec(&[1]), &finite_bounds(&[0, 0]), &finite_bounds(&[1, 1]))
            .unwrap();
        assert_eq!(out, LpOutcome::Optimal { point: vec![ratio(1, 2), rat(0)], value: ratio(1, 2) });
    }

    #[test]
    fn minimal_face_examples() {
        let a = m(&[vec![1, 1]]);
        let b = rat_vec(&[1]);
        let (l, u) = (finite_bounds(&[0, 0]), finite_bounds(&[1, 1]));
        let (lo, hi) = minimal_face_bounds(&a, &b, &l, &u, &rat_vec(&[1, 0])).unwrap();
        assert_eq!(lo, finite_bounds(&[1, 0]));
        assert_eq!(hi, finite_bounds(&[1, 0]));
        let half = vec![ratio(1, 2), ratio(1, 2)];
        let (lo, hi) = minimal_face_bounds(&a, &b, &l, &u, &half).unwrap();
        assert_eq!((lo, hi), (l.clone(), u.clone()));
        let box_only = RatMatrix::zeros(0, 2);
        let (lo, hi) = minimal_face_bounds(&box_only, &[], &l, &u, &half).unwrap();
        assert_eq!((lo, hi), (l.clone(), u.clone()));
        assert!(minimal_face_bounds(&a, &b, &l, &u, &rat_vec(&[1, 1])).is_err());
    }

    #[test]
    fn vertex_examples() {
        let box_only = RatMatrix::zeros(0, 2);
        let (l, u) = (finite_bounds(&[0, 0]), finite_bounds(&[1, 1]));
        assert_eq!(vertex_of_polytope(&box_only, &[], &l, &u).unwrap(), rat_vec(&[0, 0]));
        assert_eq!(vertex_of_polytope(&m(&[vec![1, 1]]), &rat_vec(&[1]), &l, &u).unwrap(), rat_vec(&[0, 1]));
        let p = finite_bounds(&[2, 3]);
        assert_eq!(vertex_of_polytope(&box_only, &[], &p, &p).unwrap(), rat_vec(&[2, 3]));
        assert!(vertex_of_polytope(&m(&[vec![1, 1]]), &rat_vec(&[5]), &l, &u).is_err());
    }
}
