//! Inequality to equality form, extra-column elimination, anchor rounding and
//! the translation to circuit search around the anchor.

use num_traits::{Signed, Zero};

use crate::circuits::conformal_decompose;
use crate::config::{Configuration, WeightMatrix};
use crate::error::{cap, Error, Result};
use crate::lp::{is_feasible_point, lp_solve, minimal_face_bounds, vertex_of_polytope, LpOutcome};
use crate::matrix::{IntMat, RatMatrix, RatVector};
use crate::rational::{ceil_i64, finite_bounds, floor_i64, fract, rat, rat_vec, to_i64, ExtendedBound, Rational};
use crate::sumdecomp::McicpInstance;
use crate::tu::{is_totally_unimodular, max_minor};

/// Largest number of extra-column assignments enumerated.
pub const ELIMINATION_CAP: u128 = 100_000;
/// Largest matrix side scanned for subdeterminants.
pub const MINOR_CAP: usize = 8;

/// `k (2 k Δ + 1)^k`, and `0` for `k = 0`.
pub fn f_bound(k: usize, delta: i64) -> i64 {
    if k == 0 {
        return 0;
    }
    let base = 2 * k as i64 * delta + 1;
    k as i64 * base.pow(k as u32)
}

pub fn proximity_bound(k: usize, delta: i64) -> i64 {
    1 + k as i64 + f_bound(k, delta)
}

/// `max p'x s.t. Mx <= b, x integer` with `M` split into TU rows, `k` weight
/// rows and a few extra columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralIpInstance {
    pub m: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub p: Vec<i64>,
    pub w_rows: Vec<usize>,
    pub extra_cols: Vec<usize>,
    pub delta: i64,
}

impl GeneralIpInstance {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.w_rows.len()
    }

    pub fn a_rows(&self) -> Vec<usize> {
        (0..self.m.len()).filter(|i| !self.w_rows.contains(i)).collect()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.n();
        if self.m.len() != self.b.len() {
            return Err(Error::Dimension(format!("{} rows but {} right-hand sides", self.m.len(), self.b.len())));
        }
        if let Some(i) = self.m.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", self.m[i].len())));
        }
        if self.w_rows.iter().any(|&i| i >= self.m.len()) || self.extra_cols.iter().any(|&j| j >= n) {
            return Err(Error::Dimension("split metadata out of range".into()));
        }
        if self.delta < 1 {
            return Err(Error::Precondition("delta must be positive".into()));
        }
        Ok(())
    }

    /// Dimension checks, TU of the core block and the subdeterminant bound.
    pub fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        let keep: Vec<usize> = (0..self.n()).filter(|j| !self.extra_cols.contains(j)).collect();
        let core: Vec<Vec<i64>> = self.a_rows().iter().map(|&i| keep.iter().map(|&j| self.m[i][j]).collect()).collect();
        if !core.is_empty() && !keep.is_empty() {
            let c = Configuration::from_i64_rows(&core, keep.len())?;
            if !is_totally_unimodular(&c)? {
                return Err(Error::Precondition("the A block is not totally unimodular".into()));
            }
        }
        let minor = max_minor(&IntMat::from_rows(&self.m, self.n()), MINOR_CAP)?;
        if minor > self.delta {
            return Err(Error::Precondition(format!("a subdeterminant of M has absolute value {minor} > {}", self.delta)));
        }
        Ok(())
    }

    /// LP relaxation in the original variables.
    pub fn lp_relaxation(&self) -> Result<LpOutcome> {
        let n = self.n();
        let rows = self.m.len();
        let mut full = Vec::with_capacity(rows);
        for (i, r) in self.m.iter().enumerate() {
            let mut row = r.clone();
            row.extend((0..rows).map(|j| i64::from(i == j)));
            full.push(row);
        }
        let a = RatMatrix::from_i64_rows_with_width(&full, n + rows)?;
        let mut p = rat_vec(&self.p);
        p.extend(std::iter::repeat_with(Rational::zero).take(rows));
        let mut l = vec![ExtendedBound::NegInf; n];
        l.extend(std::iter::repeat(ExtendedBound::int(0)).take(rows));
        let u = vec![ExtendedBound::PosInf; n + rows];
        Ok(match lp_solve(&p, &a, &rat_vec(&self.b), &l, &u)? {
            LpOutcome::Optimal { point, value } => LpOutcome::Optimal { point: point[..n].to_vec(), value },
            LpOutcome::Unbounded { ray } => LpOutcome::Unbounded { ray: ray[..n].to_vec() },
            LpOutcome::Infeasible => LpOutcome::Infeasible,
        })
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.n() && self.m.iter().zip(&self.b).all(|(r, &bi)| dot(r, x) <= bi as i128)
    }

    pub fn objective(&self, x: &[i64]) -> i128 {
        dot(&self.p, x)
    }
}

fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&u, &v)| u as i128 * v as i128).sum()
}

/// `max p'x s.t. Ax <= b, Wx <= d, l <= x <= u` with `A` TU.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityInstance {
    pub p: Vec<i64>,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub w: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub l: Vec<ExtendedBound>,
    pub u: Vec<ExtendedBound>,
    pub delta: i64,
}

impl InequalityInstance {
    /// No variable bounds.
    pub fn free(p: Vec<i64>, a: Vec<Vec<i64>>, b: Vec<i64>, w: Vec<Vec<i64>>, d: Vec<i64>, delta: i64) -> Self {
        let n = p.len();
        InequalityInstance { p, a, b, w, d, l: vec![ExtendedBound::NegInf; n], u: vec![ExtendedBound::PosInf; n], delta }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }
}

/// Equality form `max p'x s.t. Ax = b, Wx = d, l <= x <= u` (Problem IP1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityInstance {
    pub p: Vec<i64>,
    pub a: Configuration,
    pub b: Vec<i64>,
    pub w: WeightMatrix,
    pub d: Vec<i64>,
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    pub delta: i64,
}

impl EqualityInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p: Vec<i64>,
        a_rows: &[Vec<i64>],
        b: Vec<i64>,
        w_rows: Vec<Vec<i64>>,
        d: Vec<i64>,
        l: Vec<i64>,
        u: Vec<i64>,
        delta: i64,
    ) -> Result<Self> {
        let n = p.len();
        let a = Configuration::from_i64_rows(a_rows, n)?;
        let w = WeightMatrix::new(w_rows, n)?;
        let inst = EqualityInstance { p, a, b, w, d, l, u, delta };
        inst.check_dimensions()?;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.w.k()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.n();
        if self.a.n() != n || self.w.n() != n || self.l.len() != n || self.u.len() != n {
            return Err(Error::Dimension("equality instance column counts differ".into()));
        }
        if self.b.len() != self.a.dim() || self.d.len() != self.w.k() {
            return Err(Error::Dimension("right-hand side lengths".into()));
        }
        if let Some(j) = (0..n).find(|&j| self.l[j] > self.u[j]) {
            return Err(Error::Precondition(format!("bounds of variable {j} are crossed")));
        }
        if self.a.int().is_none() {
            return Err(Error::Precondition("A must be integral".into()));
        }
        if self.delta < 1 {
            return Err(Error::Precondition("delta must be positive".into()));
        }
        Ok(())
    }

    /// TU of `A` and the circuit-weight bound.
    pub fn validate(&self) -> Result<()> {
        self.check_dimensions()?;
        if self.a.dim() > 0 && !is_totally_unimodular(&self.a)? {
            return Err(Error::Precondition("A is not totally unimodular".into()));
        }
        let mcw = crate::circuits::max_circuit_weight(&self.a, &self.w)?;
        if mcw > self.delta {
            return Err(Error::Precondition(format!("a circuit has weight {mcw} > {}", self.delta)));
        }
        Ok(())
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        let int = self.a.int().expect("validated integral");
        x.len() == self.n()
            && (0..self.n()).all(|j| self.l[j] <= x[j] && x[j] <= self.u[j])
            && (0..int.rows).all(|i| (0..self.n()).map(|j| int.get(i, j) as i128 * x[j] as i128).sum::<i128>() == self.b[i] as i128)
            && self.w.apply(x) == self.d
    }

    pub fn objective(&self, x: &[i64]) -> i64 {
        self.p.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `[A; W]`, `[b; d]` and finite bounds of the LP relaxation (LP1).
    pub fn lp_data(&self) -> Result<(RatMatrix, RatVector, Vec<ExtendedBound>, Vec<ExtendedBound>)> {
        let wm = RatMatrix::from_i64_rows_with_width(self.w.rows(), self.n())?;
        let m = self.a.matrix().vstack(&wm)?;
        let mut rhs = rat_vec(&self.b);
        rhs.extend(rat_vec(&self.d));
        Ok((m, rhs, finite_bounds(&self.l), finite_bounds(&self.u)))
    }

    pub fn lp(&self) -> Result<LpOutcome> {
        let (m, rhs, l, u) = self.lp_data()?;
        lp_solve(&rat_vec(&self.p), &m, &rhs, &l, &u)
    }
}

/// MCICP obtained by translating an equality instance to its anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredInstance {
    pub inst: McicpInstance,
    pub z: Vec<i64>,
    pub t_max: i64,
}

/// One assignment of the extra columns and the remaining inequality system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubInstance {
    pub fixed: Vec<(usize, i64)>,
    pub kept: Vec<usize>,
    pub offset: i64,
    pub inst: InequalityInstance,
}

fn cook_range(x: &Rational, radius: i64) -> Result<(i64, i64)> {
    let lo = ceil_i64(x).ok_or_else(|| Error::Invariant("LP coordinate out of range".into()))? - radius;
    let hi = floor_i64(x).ok_or_else(|| Error::Invariant("LP coordinate out of range".into()))? + radius;
    Ok((lo, hi))
}

/// Fixes the extra columns to every integer point of the box of radius
/// `n Δ` around their LP values.
pub fn eliminate_columns(inst: &GeneralIpInstance, xstar: &[Rational]) -> Result<Vec<SubInstance>> {
    inst.check_dimensions()?;
    let n = inst.n();
    if xstar.len() != n {
        return Err(Error::Dimension("LP point length".into()));
    }
    let radius = n as i64 * inst.delta;
    let mut extras = inst.extra_cols.clone();
    extras.sort_unstable();
    extras.dedup();
    let ranges: Vec<(i64, i64)> = extras.iter().map(|&j| cook_range(&xstar[j], radius)).collect::<Result<_>>()?;
    let total: u128 = ranges.iter().map(|(a, b)| (b - a + 1) as u128).product();
    if total > ELIMINATION_CAP {
        return Err(cap("extra-column assignments", total, ELIMINATION_CAP));
    }
    let kept: Vec<usize> = (0..n).filter(|j| !extras.contains(j)).collect();
    let a_rows = inst.a_rows();
    let mut out = Vec::new();
    let mut vals: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let fixed: Vec<(usize, i64)> = extras.iter().copied().zip(vals.iter().copied()).collect();
        let shifted = |i: usize| inst.b[i] - fixed.iter().map(|&(j, v)| inst.m[i][j] * v).sum::<i64>();
        let restrict = |i: usize| kept.iter().map(|&j| inst.m[i][j]).collect::<Vec<_>>();
        let sub = InequalityInstance::free(
            kept.iter().map(|&j| inst.p[j]).collect(),
            a_rows.iter().map(|&i| restrict(i)).collect(),
            a_rows.iter().map(|&i| shifted(i)).collect(),
            inst.w_rows.iter().map(|&i| restrict(i)).collect(),
            inst.w_rows.iter().map(|&i| shifted(i)).collect(),
            inst.delta,
        );
        let offset = fixed.iter().map(|&(j, v)| inst.p[j] * v).sum();
        out.push(SubInstance { fixed, kept: kept.clone(), offset, inst: sub });
        let mut pos = vals.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if vals[pos] < ranges[pos].1 {
                vals[pos] += 1;
                for q in pos + 1..vals.len() {
                    vals[q] = ranges[q].0;
                }
                break;
            }
        }
    }
}

/// Slack form `[A I 0; W 0 I]` with all bounds finite.
///
/// A rows with a single nonzero become variable bounds. Original variables
/// are boxed to radius `n Δ` around the LP optimum, where `Δ` bounds the
/// subdeterminants of `[A; W]`; slack bounds follow by interval arithmetic.
/// The first `inst.n()` variables of the result are the original ones.
pub fn to_equality_form(inst: &InequalityInstance) -> Result<EqualityInstance> {
    let n = inst.n();
    if inst.l.len() != n || inst.u.len() != n || inst.a.len() != inst.b.len() || inst.w.len() != inst.d.len() {
        return Err(Error::Dimension("inequality instance lengths".into()));
    }
    if inst.a.iter().chain(&inst.w).any(|r| r.len() != n) {
        return Err(Error::Dimension("row length".into()));
    }
    let mut l = inst.l.clone();
    let mut u = inst.u.clone();
    let mut a_rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for (row, &bi) in inst.a.iter().zip(&inst.b) {
        let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0).collect();
        match nz.as_slice() {
            [] if bi < 0 => return Err(Error::Infeasible("constraint 0 <= negative".into())),
            [] => {}
            [j] if row[*j].abs() == 1 => {
                if row[*j] == 1 {
                    u[*j] = u[*j].clone().min(ExtendedBound::int(bi));
                } else {
                    l[*j] = l[*j].clone().max(ExtendedBound::int(-bi));
                }
            }
            _ => a_rows.push((row.clone(), bi)),
        }
    }
    if (0..n).any(|j| l[j] > u[j]) {
        return Err(Error::Infeasible("variable bounds are crossed".into()));
    }
    let stacked: Vec<Vec<i64>> = a_rows.iter().map(|r| r.0.clone()).chain(inst.w.iter().cloned()).collect();
    if !stacked.is_empty() && n > 0 {
        let minor = max_minor(&IntMat::from_rows(&stacked, n), MINOR_CAP)?;
        if minor > inst.delta {
            return Err(Error::Precondition(format!("a subdeterminant of [A; W] has absolute value {minor} > {}", inst.delta)));
        }
    }
    let ma = a_rows.len();
    let k = inst.w.len();
    let total = n + ma + k;
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(ma + k);
    for (i, (r, _)) in a_rows.iter().enumerate() {
        let mut row = r.clone();
        row.extend((0..ma + k).map(|j| i64::from(j == i)));
        rows.push(row);
    }
    for (i, r) in inst.w.iter().enumerate() {
        let mut row = r.clone();
        row.extend((0..ma + k).map(|j| i64::from(j == ma + i)));
        rows.push(row);
    }
    let mut p = rat_vec(&inst.p);
    p.extend(std::iter::repeat_with(Rational::zero).take(ma + k));
    let mut lb = l.clone();
    lb.extend(std::iter::repeat(ExtendedBound::int(0)).take(ma + k));
    let mut ub = u.clone();
    ub.extend(std::iter::repeat(ExtendedBound::PosInf).take(ma + k));
    let mut rhs: Vec<i64> = a_rows.iter().map(|r| r.1).collect();
    rhs.extend(&inst.d);
    let lp = lp_solve(&p, &RatMatrix::from_i64_rows_with_width(&rows, total)?, &rat_vec(&rhs), &lb, &ub)?;
    let xstar = match lp {
        LpOutcome::Infeasible => return Err(Error::Infeasible("LP relaxation is infeasible".into())),
        LpOutcome::Unbounded { .. } => return Err(Error::Unbounded("LP relaxation is unbounded".into())),
        LpOutcome::Optimal { point, .. } => point,
    };
    let radius = n as i64 * inst.delta;
    let mut lo = Vec::with_capacity(total);
    let mut hi = Vec::with_capacity(total);
    for j in 0..n {
        let (a, b) = cook_range(&xstar[j], radius)?;
        lo.push(match &l[j] {
            ExtendedBound::Finite(v) => a.max(ceil_i64(v).expect("integer bound")),
            _ => a,
        });
        hi.push(match &u[j] {
            ExtendedBound::Finite(v) => b.min(floor_i64(v).expect("integer bound")),
            _ => b,
        });
    }
    let range = |row: &[i64]| -> (i64, i64) {
        let mut mn = 0i64;
        let mut mx = 0i64;
        for j in 0..n {
            let (x, y) = (row[j] * lo[j], row[j] * hi[j]);
            mn += x.min(y);
            mx += x.max(y);
        }
        (mn, mx)
    };
    let mut slack_lo = Vec::new();
    let mut slack_hi = Vec::new();
    for (row, &rhs_i) in a_rows.iter().map(|r| (&r.0, &r.1)).chain(inst.w.iter().zip(&inst.d)) {
        let (mn, mx) = range(row);
        let s_lo = 0.max(rhs_i - mx);
        let s_hi = rhs_i - mn;
        if s_hi < s_lo {
            return Err(Error::Infeasible("a constraint cannot hold inside the proximity box".into()));
        }
        slack_lo.push(s_lo);
        slack_hi.push(s_hi);
    }
    lo.extend(slack_lo);
    hi.extend(slack_hi);
    let mut pe = inst.p.clone();
    pe.extend(std::iter::repeat(0).take(ma + k));
    let (a_part, w_part) = rows.split_at(ma);
    EqualityInstance::new(pe, a_part, a_rows.iter().map(|r| r.1).collect(), w_part.to_vec(), inst.d.clone(), lo, hi, inst.delta)
}

/// Rounds an optimal vertex of LP1 to an integral point of
/// `{Ax = b, l <= x <= u}` at max-norm distance below `k`.
///
/// Takes the lexicographically smallest vertex `z'` of the minimal face
/// containing `x*`, writes `z' - x*` as a conformal sum of circuits
/// `sum λ_j c_j` and keeps only the fractional parts of the `λ_j`.
pub fn round_to_anchor(inst: &EqualityInstance, xstar: &[Rational]) -> Result<Vec<i64>> {
    let n = inst.n();
    if xstar.len() != n {
        return Err(Error::Dimension("LP point length".into()));
    }
    let (m1, rhs, l, u) = inst.lp_data()?;
    if !is_feasible_point(&m1, &rhs, &l, &u, xstar) {
        return Err(Error::Precondition("point is not feasible for LP1".into()));
    }
    let a = inst.a.matrix();
    let b = rat_vec(&inst.b);
    let k = inst.k();
    if k == 0 {
        return xstar
            .iter()
            .map(|v| to_i64(v).ok_or_else(|| Error::Precondition("LP point is not a vertex".into())))
            .collect();
    }
    let (lf, uf) = minimal_face_bounds(a, &b, &l, &u, xstar)?;
    let free: Vec<usize> = (0..n).filter(|&j| lf[j] != uf[j]).collect();
    let face_dim = free.len() - inst.a.rank_of(&free);
    if face_dim > k {
        return Err(Error::Precondition(format!("minimal face has dimension {face_dim} > k = {k}; point is not a vertex")));
    }
    let zp = vertex_of_polytope(a, &b, &lf, &uf)?;
    let terms = conformal_decompose(&inst.a, xstar, &zp, &lf, &uf)?;
    let mut z: RatVector = xstar.to_vec();
    for (c, lambda) in &terms {
        let fr = fract(lambda);
        if fr.is_zero() {
            continue;
        }
        for (j, &cj) in c.coeffs.iter().enumerate() {
            if cj != 0 {
                z[j] += &fr * rat(cj);
            }
        }
    }
    let z: Vec<i64> = z
        .iter()
        .map(|v| to_i64(v).ok_or_else(|| Error::Invariant("anchor is not integral".into())))
        .collect::<Result<_>>()?;
    let int = inst.a.int_or_err()?;
    let az_ok = (0..int.rows).all(|i| (0..n).map(|j| int.get(i, j) * z[j]).sum::<i64>() == inst.b[i]);
    let box_ok = (0..n).all(|j| inst.l[j] <= z[j] && z[j] <= inst.u[j]);
    let dist_ok = (0..n).all(|j| (rat(z[j]) - &xstar[j]).abs() < rat(k as i64));
    if !(az_ok && box_ok && dist_ok) {
        return Err(Error::Invariant("anchor violates Az = b, the bounds or the distance bound".into()));
    }
    Ok(z)
}

/// Translates by the anchor so that `b = 0` and the origin is feasible.
pub fn reduce_to_circuit_search(inst: &EqualityInstance, xstar: &[Rational]) -> Result<AnchoredInstance> {
    let z = round_to_anchor(inst, xstar)?;
    let wz = inst.w.apply(&z);
    let d: Vec<i64> = inst.d.iter().zip(&wz).map(|(a, b)| a - b).collect();
    let l: Vec<i64> = inst.l.iter().zip(&z).map(|(a, b)| a - b).collect();
    let u: Vec<i64> = inst.u.iter().zip(&z).map(|(a, b)| a - b).collect();
    let mcicp = McicpInstance { p: inst.p.clone(), a: inst.a.clone(), w: inst.w.clone(), d, l, u, delta: inst.delta };
    Ok(AnchoredInstance { inst: mcicp, z, t_max: f_bound(inst.k(), inst.delta) })
}

/// Outcome of the unbounded-relaxation protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnboundedVerdict {
    Unbounded,
    Infeasible,
}

/// For an instance whose LP relaxation is unbounded: the IP is unbounded iff
/// it has an integer point, which is decided by solving with zero objective.
pub fn handle_unbounded(inst: &GeneralIpInstance) -> Result<UnboundedVerdict> {
    match inst.lp_relaxation()? {
        LpOutcome::Unbounded { .. } => {}
        _ => return Err(Error::Precondition("LP relaxation is not unbounded".into())),
    }
    let mut zero = inst.clone();
    zero.p = vec![0; inst.n()];
    let mut trace = crate::pipeline::Trace::default();
    Ok(match crate::pipeline::solve_general(&zero, &mut trace)? {
        crate::pipeline::Status::Optimal { .. } => UnboundedVerdict::Unbounded,
        _ => UnboundedVerdict::Infeasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn bound_formulas() {
        assert_eq!(f_bound(1, 1), 3);
        assert_eq!(f_bound(1, 2), 5);
        assert_eq!(f_bound(2, 1), 50);
        assert_eq!(proximity_bound(1, 1), 5);
        assert_eq!(proximity_bound(1, 2), 7);
        assert_eq!(proximity_bound(2, 1), 53);
        assert_eq!(f_bound(0, 3), 0);
    }

    #[test]
    fn equality_form_of_a_single_upper_bound() {
        // max x1 s.t. x1 - x2 <= 2, x2 <= 0, x2 >= 0
        let inst = InequalityInstance::free(vec![1, 0], vec![vec![1, -1], vec![0, 1], vec![0, -1]], vec![2, 0, 0], vec![], vec![], 1);
        let eq = to_equality_form(&inst).unwrap();
        assert_eq!(eq.n(), 3);
        assert!(eq.l.iter().zip(&eq.u).all(|(a, b)| a <= b));
        let (_, v) = eq.lp().unwrap().optimal().map(|(p, v)| (p.clone(), v.clone())).unwrap();
        assert_eq!(v, rat(2));
        assert!(eq.is_feasible(&[2, 0, 0]));
    }

    #[test]
    fn equality_form_reports_infeasibility() {
        let inst = InequalityInstance::free(vec![1], vec![vec![1, ], vec![-1]], vec![0, -1], vec![], vec![], 1);
        assert!(matches!(to_equality_form(&inst), Err(Error::Infeasible(_))));
        let unb = InequalityInstance::free(vec![1, 1], vec![vec![1, -1]], vec![0], vec![], vec![], 1);
        assert!(matches!(to_equality_form(&unb), Err(Error::Unbounded(_))));
    }

    #[test]
    fn elimination_box_sizes() {
        let inst = GeneralIpInstance {
            m: vec![vec![1, 1], vec![-1, -1]],
            b: vec![0, 0],
            p: vec![0, 0],
            w_rows: vec![],
            extra_cols: vec![1],
            delta: 1,
        };
        let subs = eliminate_columns(&inst, &[rat(0), rat(0)]).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs.iter().map(|s| s.fixed[0].1).collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        let none = GeneralIpInstance { extra_cols: vec![], ..inst.clone() };
        assert_eq!(eliminate_columns(&none, &[rat(0), rat(0)]).unwrap().len(), 1);
        let two = GeneralIpInstance {
            m: vec![vec![1, 1, 1]],
            b: vec![0],
            p: vec![0, 0, 0],
            w_rows: vec![],
            extra_cols: vec![0, 2],
            delta: 1,
        };
        assert_eq!(eliminate_columns(&two, &[rat(0), rat(0), ratio(1, 2)]).unwrap().len(), 7 * 6);
    }

    #[test]
    fn anchor_of_the_half_point() {
        let eq = EqualityInstance::new(vec![0, 0], &[vec![1, 1]], vec![1], vec![vec![1, -1]], vec![0], vec![0, 0], vec![1, 1], 2).unwrap();
        let x = vec![ratio(1, 2), ratio(1, 2)];
        let z = round_to_anchor(&eq, &x).unwrap();
        assert!(z == vec![0, 1] || z == vec![1, 0]);
        let anchored = reduce_to_circuit_search(&eq, &x).unwrap();
        assert_eq!(anchored.t_max, f_bound(1, 2));
        assert!(anchored.inst.l.iter().zip(&anchored.inst.u).all(|(a, b)| *a <= 0 && 0 <= *b));
    }

    #[test]
    fn anchor_of_an_integral_vertex_is_itself() {
        let eq = EqualityInstance::new(vec![1, 0], &[vec![1, 1]], vec![1], vec![vec![1, 0]], vec![1], vec![0, 0], vec![1, 1], 1).unwrap();
        assert_eq!(round_to_anchor(&eq, &[rat(1), rat(0)]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn unbounded_protocol() {
        let ray = GeneralIpInstance { m: vec![vec![-1]], b: vec![0], p: vec![1], w_rows: vec![], extra_cols: vec![], delta: 1 };
        assert_eq!(handle_unbounded(&ray).unwrap(), UnboundedVerdict::Unbounded);
        let parity = GeneralIpInstance {
            m: vec![vec![2, 0], vec![-2, 0]],
            b: vec![1, -1],
            p: vec![1, 1],
            w_rows: vec![0, 1],
            extra_cols: vec![],
            delta: 2,
        };
        assert_eq!(handle_unbounded(&parity).unwrap(), UnboundedVerdict::Infeasible);
        let bounded = GeneralIpInstance { m: vec![vec![1], vec![-1]], b: vec![1, 0], p: vec![1], w_rows: vec![], extra_cols: vec![], delta: 1 };
        assert!(handle_unbounded(&bounded).is_err());
    }
}
