//! Independent re-solve by the brute-force oracles and exact comparison.

use ntu_core::circuits::max_circuit_weight;
use ntu_core::lp::LpOutcome;
use ntu_core::oracle::{brute_docsets, brute_ip, brute_ip_all_optima, brute_ip_leq, brute_mcipp_all, max_abs_subdeterminant, BruteBudget, OracleOutcome};
use ntu_core::pipeline::Status;
use ntu_core::proximity::{proximity_bound, round_to_anchor, EqualityInstance, MINOR_CAP};
use ntu_core::rational::{abs, rat, Rational};
use serde::Serialize;

use crate::format::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub oracle_status: Option<String>,
    pub oracle_value: Option<i64>,
    /// A point that contradicts the pipeline, when one exists.
    pub witness: Option<Vec<i64>>,
    pub checks: Vec<Check>,
    pub message: String,
}

impl VerifyReport {
    fn unverified(message: String) -> Self {
        VerifyReport { verdict: Verdict::Unverified, oracle_status: None, oracle_value: None, witness: None, checks: Vec::new(), message }
    }
}

fn int_rows(a: &ntu_core::config::Configuration) -> Vec<Vec<i64>> {
    let m = a.int().expect("validated integral");
    (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j)).collect()).collect()
}

/// Box implied by rows that are multiples of unit vectors.
fn implied_box(m: &[Vec<i64>], b: &[i64], n: usize) -> Option<(Vec<i64>, Vec<i64>)> {
    let mut lo: Vec<Option<i64>> = vec![None; n];
    let mut hi: Vec<Option<i64>> = vec![None; n];
    for (row, &bi) in m.iter().zip(b) {
        let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0).collect();
        if let [j] = nz[..] {
            let c = row[j];
            if c > 0 {
                let v = bi.div_euclid(c);
                hi[j] = Some(hi[j].map_or(v, |h| h.min(v)));
            } else {
                let v = -bi.div_euclid(-c);
                lo[j] = Some(lo[j].map_or(v, |h| h.max(v)));
            }
        }
    }
    let lo: Vec<i64> = lo.into_iter().collect::<Option<_>>()?;
    let hi: Vec<i64> = hi.into_iter().collect::<Option<_>>()?;
    Some((lo.iter().zip(&hi).map(|(&l, &h)| l.min(h)).collect(), hi))
}

fn oracle(problem: &Problem, budget: &BruteBudget) -> Result<OracleOutcome, String> {
    let r = match problem {
        Problem::General(i) => {
            let Some((l, u)) = implied_box(&i.m, &i.b, i.n()) else {
                return Err("the constraints imply no finite box".into());
            };
            brute_ip_leq(&i.p, &i.m, &i.b, &l, &u, budget)
        }
        Problem::Equality(i) => brute_ip(&i.p, &int_rows(&i.a), &i.b, i.w.rows(), &i.d, &i.l, &i.u, budget),
        Problem::Mcicp { inst, .. } => {
            let a = int_rows(&inst.a);
            brute_ip(&inst.p, &a, &vec![0; a.len()], inst.w.rows(), &inst.d, &inst.l, &inst.u, budget)
        }
        Problem::Mcipp(i) => brute_mcipp_all(&i.to_potential_problem(), budget).map(|r| match r {
            None => OracleOutcome::Infeasible,
            Some((value, mut optima)) => OracleOutcome::Optimal { value, x: optima.swap_remove(0) },
        }),
    };
    r.map_err(|e| e.to_string())
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

fn equality_checks(inst: &EqualityInstance, budget: &BruteBudget) -> Result<Vec<Check>, String> {
    let mut out = Vec::new();
    let mcw = max_circuit_weight(&inst.a, &inst.w).map_err(|e| e.to_string())?;
    out.push(check("circuit weights", mcw <= inst.delta, format!("max circuit weight {mcw}, delta {}", inst.delta)));
    let LpOutcome::Optimal { point: xstar, .. } = inst.lp().map_err(|e| e.to_string())? else {
        return Ok(out);
    };
    let k = inst.k();
    if k > 0 {
        let z = round_to_anchor(inst, &xstar).map_err(|e| e.to_string())?;
        let dist = max_dist(&z, &xstar);
        out.push(check("anchor distance", dist < rat(k as i64), format!("|z - x*| = {dist}, k = {k}")));
    }
    let a = int_rows(&inst.a);
    let optima = brute_ip_all_optima(&inst.p, &a, &inst.b, inst.w.rows(), &inst.d, &inst.l, &inst.u, budget).map_err(|e| e.to_string())?;
    if let Some(best) = optima.iter().map(|x| max_dist(x, &xstar)).min() {
        let bound = proximity_bound(k, inst.delta);
        out.push(check("proximity", best <= rat(bound), format!("nearest optimum at {best}, bound {bound}")));
    }
    Ok(out)
}

fn max_dist(x: &[i64], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(&a, b)| abs(&(rat(a) - b))).max().unwrap_or_else(|| rat(0))
}

fn structural_checks(problem: &Problem, budget: &BruteBudget) -> Result<Vec<Check>, String> {
    match problem {
        Problem::General(i) => {
            let det = max_abs_subdeterminant(&i.m, MINOR_CAP).map_err(|e| e.to_string())?;
            Ok(vec![check("subdeterminants", det <= i.delta, format!("max |det| {det}, delta {}", i.delta))])
        }
        Problem::Equality(i) => equality_checks(i, budget),
        Problem::Mcicp { inst, .. } => equality_checks(&inst.to_equality(), budget),
        Problem::Mcipp(i) => {
            let sets = brute_docsets(i.n(), i.graph.edges(), budget).map_err(|e| e.to_string())?;
            let worst = sets
                .iter()
                .flat_map(|&s| i.w.iter().map(move |row| (0..row.len()).filter(|v| s >> v & 1 == 1).map(|v| row[v]).sum::<i64>().abs()))
                .max()
                .unwrap_or(0);
            Ok(vec![check("docset weights", worst <= i.delta, format!("max |w(S)| {worst} over {} docsets, delta {}", sets.len(), i.delta))])
        }
    }
}

/// Re-solves `problem` by enumeration and compares with `status` exactly.
pub fn verify_pipeline(problem: &Problem, status: &Status, budget: &BruteBudget) -> VerifyReport {
    let truth = match oracle(problem, budget) {
        Ok(t) => t,
        Err(e) => return VerifyReport::unverified(format!("oracle not run: {e}")),
    };
    let (oracle_status, oracle_value) = match &truth {
        OracleOutcome::Optimal { value, .. } => ("optimal".to_string(), Some(*value)),
        OracleOutcome::Infeasible => ("infeasible".to_string(), None),
    };
    let mut witness = None;
    let message = match (status, &truth) {
        (Status::Optimal { value, x }, OracleOutcome::Optimal { value: ov, x: ox }) => {
            if problem.evaluate(x) != Some(*value) {
                witness = Some(x.clone());
                format!("pipeline solution is infeasible or misvalued (claimed {value})")
            } else if value != ov {
                witness = Some(ox.clone());
                format!("pipeline value {value} differs from oracle value {ov}")
            } else {
                String::new()
            }
        }
        (Status::Optimal { x, .. }, OracleOutcome::Infeasible) => {
            witness = Some(x.clone());
            "pipeline reports a solution of an infeasible instance".into()
        }
        (Status::Infeasible, OracleOutcome::Optimal { x, .. }) => {
            witness = Some(x.clone());
            "pipeline reports infeasible but the oracle found a feasible point".into()
        }
        (Status::Unbounded, OracleOutcome::Optimal { x, .. }) => {
            witness = Some(x.clone());
            "pipeline reports unbounded but the feasible region is bounded".into()
        }
        (Status::Unbounded, OracleOutcome::Infeasible) => "pipeline reports unbounded but no feasible point exists".into(),
        (Status::Infeasible, OracleOutcome::Infeasible) => String::new(),
    };
    let checks = match structural_checks(problem, budget) {
        Ok(c) => c,
        Err(e) => {
            let mut r = VerifyReport::unverified(format!("structural checks not run: {e}"));
            r.oracle_status = Some(oracle_status);
            r.oracle_value = oracle_value;
            return r;
        }
    };
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let verdict = if message.is_empty() && failed.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let message = match (message.is_empty(), failed.is_empty()) {
        (true, true) => "values agree".into(),
        (false, true) => message,
        (true, false) => format!("failed checks: {}", failed.join(", ")),
        (false, false) => format!("{message}; failed checks: {}", failed.join(", ")),
    };
    VerifyReport { verdict, oracle_status: Some(oracle_status), oracle_value, witness, checks, message }
}
