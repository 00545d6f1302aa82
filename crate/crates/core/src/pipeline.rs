//! End-to-end drivers from each problem form down to the dynamic programs.

use crate::cographic::{
    cographic_to_mcipp, is_cographic_for, mcipp_solution_to_mcicp, mcipp_to_mcicp, tree_potentials, DirectedGraph,
    McippInstance,
};
use crate::error::{Error, Result};
use crate::lp::LpOutcome;
use crate::mcippdp::{dp_solve, trivial_td, DocsetSuperprofile, McippDpStats, SpecialTreeDecomposition};
use crate::proximity::{
    eliminate_columns, f_bound, handle_unbounded, reduce_to_circuit_search, to_equality_form, EqualityInstance,
    GeneralIpInstance, UnboundedVerdict,
};
use crate::rational::to_i64;
use crate::sumdecomp::{solve_anchored, McicpInstance, SolveStats};

/// Search nodes allowed per solve unless the caller says otherwise.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Optimal { value: i64, x: Vec<i64> },
    Infeasible,
    Unbounded,
}

impl Status {
    pub fn value(&self) -> Option<i64> {
        match self {
            Status::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Optimal { .. } => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        }
    }
}

/// Step log, remaining budget and counters of one solve.
#[derive(Debug, Clone)]
pub struct Trace {
    pub steps: Vec<String>,
    pub budget: u64,
    pub stats: SolveStats,
    pub mcipp: McippDpStats,
}

impl Default for Trace {
    fn default() -> Self {
        Trace::with_budget(DEFAULT_BUDGET)
    }
}

impl Trace {
    pub fn with_budget(budget: u64) -> Self {
        Trace { steps: Vec::new(), budget, stats: SolveStats::default(), mcipp: McippDpStats::default() }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.steps.push(s.into());
    }
}

fn better(value: i64, x: &[i64], best: &Option<(i64, Vec<i64>)>) -> bool {
    match best {
        None => true,
        Some((v, bx)) => value > *v || (value == *v && x < bx.as_slice()),
    }
}

/// `max p'x s.t. Mx <= b`.
pub fn solve_general(inst: &GeneralIpInstance, trace: &mut Trace) -> Result<Status> {
    inst.validate()?;
    let xstar = match inst.lp_relaxation()? {
        LpOutcome::Infeasible => {
            trace.note("LP relaxation infeasible");
            return Ok(Status::Infeasible);
        }
        LpOutcome::Unbounded { .. } => {
            trace.note("LP relaxation unbounded; deciding feasibility");
            return Ok(match handle_unbounded(inst)? {
                UnboundedVerdict::Unbounded => Status::Unbounded,
                UnboundedVerdict::Infeasible => Status::Infeasible,
            });
        }
        LpOutcome::Optimal { point, .. } => point,
    };
    let subs = eliminate_columns(inst, &xstar)?;
    trace.note(format!("{} extra-column assignments", subs.len()));
    let mut best: Option<(i64, Vec<i64>)> = None;
    for sub in subs {
        let eq = match to_equality_form(&sub.inst) {
            Ok(eq) => eq,
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Status::Optimal { x, .. } = solve_equality(&eq, trace)? {
            let mut full = vec![0; inst.n()];
            for (i, &j) in sub.kept.iter().enumerate() {
                full[j] = x[i];
            }
            for &(j, v) in &sub.fixed {
                full[j] = v;
            }
            let value = i64::try_from(inst.objective(&full)).map_err(|_| Error::Invariant("objective overflow".into()))?;
            if better(value, &full, &best) {
                best = Some((value, full));
            }
        }
    }
    Ok(match best {
        None => Status::Infeasible,
        Some((value, x)) => {
            if !inst.is_feasible(&x) {
                return Err(Error::Invariant("general solution violates Mx <= b".into()));
            }
            Status::Optimal { value, x }
        }
    })
}

/// `max p'x s.t. Ax = b, Wx = d, l <= x <= u`: LP, anchor, circuit search.
pub fn solve_equality(inst: &EqualityInstance, trace: &mut Trace) -> Result<Status> {
    inst.check_dimensions()?;
    let xstar = match inst.lp()? {
        LpOutcome::Infeasible => {
            trace.note("LP1 infeasible");
            return Ok(Status::Infeasible);
        }
        LpOutcome::Unbounded { .. } => return Err(Error::Invariant("LP1 with finite bounds is unbounded".into())),
        LpOutcome::Optimal { point, .. } => point,
    };
    let x = if inst.k() == 0 {
        trace.note("k = 0: LP vertex is integral");
        xstar
            .iter()
            .map(|v| to_i64(v).ok_or_else(|| Error::Invariant("TU vertex is fractional".into())))
            .collect::<Result<Vec<i64>>>()?
    } else {
        let anchored = reduce_to_circuit_search(inst, &xstar)?;
        let f = f_bound(inst.k(), inst.delta);
        trace.note(format!("anchored at z = {:?}, f = {f}", anchored.z));
        match solve_anchored(&anchored.inst, f, &mut trace.budget, &mut trace.stats)? {
            None => {
                trace.note("no circulation reaches the target");
                return Ok(Status::Infeasible);
            }
            Some((_, xp)) => anchored.z.iter().zip(&xp).map(|(a, b)| a + b).collect(),
        }
    };
    if !inst.is_feasible(&x) {
        return Err(Error::Invariant("equality solution is infeasible".into()));
    }
    Ok(Status::Optimal { value: inst.objective(&x), x })
}

/// Circulation form, solved as an equality instance with `b = 0`.
pub fn solve_mcicp(inst: &McicpInstance, trace: &mut Trace) -> Result<Status> {
    solve_equality(&inst.to_equality(), trace)
}

/// Circulation form with a cographic configuration: anchor, move to vertex
/// potentials on `g` and run the decomposition DP. `td` defaults to a
/// single bag and `superprofiles` to the exact profiles.
pub fn solve_cographic(
    inst: &McicpInstance,
    g: &DirectedGraph,
    td: Option<&SpecialTreeDecomposition>,
    superprofiles: Option<&DocsetSuperprofile>,
    trace: &mut Trace,
) -> Result<Status> {
    inst.check_dimensions()?;
    if !is_cographic_for(&inst.a, g) {
        return Err(Error::Precondition("configuration is not cographic for the supplied graph".into()));
    }
    let eq = inst.to_equality();
    let xstar = match eq.lp()? {
        LpOutcome::Infeasible => {
            trace.note("LP1 infeasible");
            return Ok(Status::Infeasible);
        }
        LpOutcome::Unbounded { .. } => return Err(Error::Invariant("LP1 with finite bounds is unbounded".into())),
        LpOutcome::Optimal { point, .. } => point,
    };
    let x = if eq.k() == 0 {
        trace.note("k = 0: LP vertex is integral");
        xstar
            .iter()
            .map(|v| to_i64(v).ok_or_else(|| Error::Invariant("TU vertex is fractional".into())))
            .collect::<Result<Vec<i64>>>()?
    } else {
        let anchored = reduce_to_circuit_search(&eq, &xstar)?;
        trace.note(format!("anchored at z = {:?}, f = {}", anchored.z, anchored.t_max));
        let ip3 = cographic_to_mcipp(&anchored.inst, g)?;
        trace.note(format!("potential form with roots {:?}", ip3.roots()));
        let own;
        let td = match td {
            Some(td) => td,
            None => {
                own = trivial_td(g);
                &own
            }
        };
        match dp_solve(&ip3, td, superprofiles, &mut trace.budget, &mut trace.mcipp)? {
            None => {
                trace.note("no potential reaches the target");
                return Ok(Status::Infeasible);
            }
            Some((_, y)) => {
                let xp = mcipp_solution_to_mcicp(&y, g);
                anchored.z.iter().zip(&xp).map(|(a, b)| a + b).collect()
            }
        }
    };
    if !eq.is_feasible(&x) {
        return Err(Error::Invariant("cographic solution is infeasible".into()));
    }
    Ok(Status::Optimal { value: eq.objective(&x), x })
}

/// Potential form: solved through its circulation form. The returned
/// vector holds potentials with `y(0) = 0`.
pub fn solve_mcipp(
    inst: &McippInstance,
    td: Option<&SpecialTreeDecomposition>,
    superprofiles: Option<&DocsetSuperprofile>,
    trace: &mut Trace,
) -> Result<Status> {
    inst.check_dimensions()?;
    if !inst.graph.is_connected() {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    let mcicp = mcipp_to_mcicp(inst)?;
    Ok(match solve_cographic(&mcicp, &inst.graph, td, superprofiles, trace)? {
        Status::Optimal { x, .. } => {
            let y = tree_potentials(&inst.graph, &x)?.ok_or_else(|| Error::Invariant("solution is not a cut vector".into()))?;
            if !inst.is_feasible(&y) {
                return Err(Error::Invariant("potential solution is infeasible".into()));
            }
            Status::Optimal { value: inst.objective(&y), x: y }
        }
        other => other,
    })
}
