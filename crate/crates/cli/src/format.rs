//! JSON instance files and their conversion to solver instances.

use std::collections::{BTreeMap, BTreeSet};

use ntu_core::cographic::{is_cographic_for, DirectedGraph, McippInstance};
use ntu_core::config::{Configuration, WeightMatrix};
use ntu_core::matrix::IntMat;
use ntu_core::mcippdp::{check_superprofile, validate_special_td, DocsetSuperprofile, SpecialTreeDecomposition};
use ntu_core::proximity::{EqualityInstance, GeneralIpInstance, MINOR_CAP};
use ntu_core::sumdecomp::McicpInstance;
use ntu_core::tu::{is_totally_unimodular, violating_minor};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    IpGeneral,
    IpEquality,
    Mcicp,
    Mcipp,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::IpGeneral => "ip_general",
            InstanceKind::IpEquality => "ip_equality",
            InstanceKind::Mcicp => "mcicp",
            InstanceKind::Mcipp => "mcipp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// Bags as vertex labels; tree edges as `[parent, child]` node indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdSpec {
    pub bags: Vec<Vec<String>>,
    pub tree_edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
}

/// Row indices of `m` that carry weight constraints, and the extra columns.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub w_rows: Vec<usize>,
    #[serde(default)]
    pub extra_cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub instance_kind: InstanceKind,
    pub k: usize,
    pub delta: i64,
    pub p: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_decomposition: Option<TdSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superprofiles: Option<Vec<Vec<Vec<String>>>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &str) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    /// Checks dimensions and declared constants and builds the solver
    /// instance.
    pub fn load(&self) -> CliResult<Loaded> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Invalid(format!("format_version {} is not supported", self.format_version)));
        }
        let problem = match self.instance_kind {
            InstanceKind::IpGeneral => self.load_general()?,
            InstanceKind::IpEquality => self.load_equality()?,
            InstanceKind::Mcicp => self.load_mcicp()?,
            InstanceKind::Mcipp => self.load_mcipp()?,
        };
        let graph = problem.graph();
        let td = match (&self.tree_decomposition, graph) {
            (None, _) => None,
            (Some(_), None) => return Err(CliError::Invalid("a tree-decomposition needs a graph".into())),
            (Some(spec), Some(g)) => Some(td_from_spec(spec, g)?),
        };
        let superprofiles = match &self.superprofiles {
            None => None,
            Some(sets) => {
                let (Problem::Mcipp(inst), Some(td)) = (&problem, &td) else {
                    return Err(CliError::Invalid("superprofiles need an mcipp instance with a tree-decomposition".into()));
                };
                let mut entries = Vec::new();
                for node in sets {
                    let mut e = BTreeSet::new();
                    for set in node {
                        let mut vs = labels_to_indices(&inst.graph, set)?;
                        vs.sort_unstable();
                        e.insert(vs);
                    }
                    entries.push(e);
                }
                let sp = DocsetSuperprofile { entries };
                check_superprofile(inst, td, &sp)?;
                Some(sp)
            }
        };
        Ok(Loaded { kind: self.instance_kind, problem, td, superprofiles })
    }

    fn need_k(&self, rows: usize) -> CliResult<()> {
        if rows != self.k {
            return Err(CliError::Invalid(format!("k = {} but {rows} weight rows are given", self.k)));
        }
        Ok(())
    }

    fn load_general(&self) -> CliResult<Problem> {
        let split = self.split.clone().unwrap_or_default();
        self.need_k(split.w_rows.len())?;
        let inst = GeneralIpInstance {
            m: self.m.clone(),
            b: self.b.clone(),
            p: self.p.clone(),
            w_rows: split.w_rows,
            extra_cols: split.extra_cols,
            delta: self.delta,
        };
        inst.check_dimensions()?;
        let keep: Vec<usize> = (0..inst.n()).filter(|j| !inst.extra_cols.contains(j)).collect();
        let core: Vec<Vec<i64>> = inst.a_rows().iter().map(|&i| keep.iter().map(|&j| inst.m[i][j]).collect()).collect();
        if !core.is_empty() && !keep.is_empty() {
            let rows: Vec<usize> = inst.a_rows();
            require_tu(&core, keep.len(), |r| rows[r], |c| keep[c])?;
        }
        inst.validate()?;
        Ok(Problem::General(inst))
    }

    fn load_equality(&self) -> CliResult<Problem> {
        self.need_k(self.w.len())?;
        let n = self.p.len();
        if self.a.iter().any(|r| r.len() != n) {
            return Err(CliError::Invalid("every row of a needs one entry per variable".into()));
        }
        let inst = EqualityInstance::new(
            self.p.clone(),
            &self.a,
            self.b.clone(),
            self.w.clone(),
            self.d.clone(),
            self.l.clone(),
            self.u.clone(),
            self.delta,
        )?;
        if !self.a.is_empty() {
            require_tu(&self.a, n, |r| r, |c| c)?;
        }
        inst.validate()?;
        Ok(Problem::Equality(inst))
    }

    fn load_mcicp(&self) -> CliResult<Problem> {
        self.need_k(self.w.len())?;
        let n = self.p.len();
        if self.b.iter().any(|&x| x != 0) {
            return Err(CliError::Invalid("a circulation instance has b = 0".into()));
        }
        if self.a.iter().any(|r| r.len() != n) {
            return Err(CliError::Invalid("every row of a needs one entry per variable".into()));
        }
        let inst = McicpInstance {
            p: self.p.clone(),
            a: Configuration::from_i64_rows(&self.a, n)?,
            w: WeightMatrix::new(self.w.clone(), n)?,
            d: self.d.clone(),
            l: self.l.clone(),
            u: self.u.clone(),
            delta: self.delta,
        };
        inst.check_dimensions()?;
        if !self.a.is_empty() {
            require_tu(&self.a, n, |r| r, |c| c)?;
        }
        inst.to_equality().validate()?;
        let graph = match &self.graph {
            None => None,
            Some(spec) => {
                let g = graph_from_spec(spec)?;
                if !is_cographic_for(&inst.a, &g) {
                    return Err(CliError::Invalid("the kernel of a is not the cut space of the graph".into()));
                }
                Some(g)
            }
        };
        Ok(Problem::Mcicp { inst, graph })
    }

    fn load_mcipp(&self) -> CliResult<Problem> {
        self.need_k(self.w.len())?;
        let spec = self.graph.as_ref().ok_or_else(|| CliError::Invalid("an mcipp instance needs a graph".into()))?;
        let graph = graph_from_spec(spec)?;
        let inst = McippInstance {
            graph,
            p: self.p.clone(),
            w: self.w.clone(),
            d: self.d.clone(),
            l: self.l.clone(),
            u: self.u.clone(),
            delta: self.delta,
        };
        inst.validate()?;
        Ok(Problem::Mcipp(inst))
    }
}

fn require_tu(rows: &[Vec<i64>], n: usize, row_of: impl Fn(usize) -> usize, col_of: impl Fn(usize) -> usize) -> CliResult<()> {
    let c = Configuration::from_i64_rows(rows, n)?;
    if is_totally_unimodular(&c)? {
        return Ok(());
    }
    let detail = match violating_minor(&IntMat::from_rows(rows, n), MINOR_CAP)? {
        Some((rs, cs, det)) => {
            let rs: Vec<usize> = rs.into_iter().map(&row_of).collect();
            let cs: Vec<usize> = cs.into_iter().map(&col_of).collect();
            format!("rows {rs:?}, columns {cs:?} have determinant {det}")
        }
        None => "no violating submatrix within the scan cap".into(),
    };
    Err(CliError::Invalid(format!("A is not totally unimodular: {detail}")))
}

pub fn graph_from_spec(spec: &GraphSpec) -> CliResult<DirectedGraph> {
    let index: BTreeMap<&str, usize> = spec.vertices.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut edges = Vec::new();
    for [a, b] in &spec.edges {
        match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&x), Some(&y)) => edges.push((x, y)),
            _ => return Err(CliError::Invalid(format!("edge ({a}, {b}) names an unknown vertex"))),
        }
    }
    Ok(DirectedGraph::new(spec.vertices.clone(), edges)?)
}

pub fn graph_to_spec(g: &DirectedGraph) -> GraphSpec {
    let l = g.labels();
    GraphSpec { vertices: l.to_vec(), edges: g.edges().iter().map(|&(a, b)| [l[a].clone(), l[b].clone()]).collect() }
}

fn labels_to_indices(g: &DirectedGraph, labels: &[String]) -> CliResult<Vec<usize>> {
    labels
        .iter()
        .map(|s| g.labels().iter().position(|x| x == s).ok_or_else(|| CliError::Invalid(format!("unknown vertex {s}"))))
        .collect()
}

/// Builds and validates a decomposition; `ell` defaults to the smallest
/// value the tree admits.
pub fn td_from_spec(spec: &TdSpec, g: &DirectedGraph) -> CliResult<SpecialTreeDecomposition> {
    let nodes = spec.bags.len();
    let mut parent = vec![None; nodes];
    for &[p, c] in &spec.tree_edges {
        if p >= nodes || c >= nodes {
            return Err(CliError::Invalid(format!("tree edge ({p}, {c}) names an unknown node")));
        }
        if parent[c].replace(p).is_some() {
            return Err(CliError::Invalid(format!("node {c} has two parents")));
        }
    }
    let bags = spec.bags.iter().map(|b| labels_to_indices(g, b)).collect::<CliResult<Vec<_>>>()?;
    let mut td = SpecialTreeDecomposition { bags, parent, ell: spec.ell.unwrap_or(0) };
    if spec.ell.is_none() {
        td.ell = (0..nodes).map(|t| td.adhesion(t).len().max(td.children(t).len())).max().unwrap_or(0);
    }
    let report = validate_special_td(g, &td);
    if !report.is_valid() {
        return Err(CliError::Invalid(format!("tree-decomposition: {}", report.violations.join("; "))));
    }
    Ok(td)
}

pub fn td_to_spec(td: &SpecialTreeDecomposition, g: &DirectedGraph) -> TdSpec {
    TdSpec {
        bags: td.bags.iter().map(|b| b.iter().map(|&v| g.labels()[v].clone()).collect()).collect(),
        tree_edges: (0..td.len()).filter_map(|c| td.parent[c].map(|p| [p, c])).collect(),
        ell: Some(td.ell),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    General(GeneralIpInstance),
    Equality(EqualityInstance),
    Mcicp { inst: McicpInstance, graph: Option<DirectedGraph> },
    Mcipp(McippInstance),
}

impl Problem {
    pub fn graph(&self) -> Option<&DirectedGraph> {
        match self {
            Problem::Mcicp { graph, .. } => graph.as_ref(),
            Problem::Mcipp(inst) => Some(&inst.graph),
            _ => None,
        }
    }

    /// Feasibility and the objective value of a candidate solution.
    pub fn evaluate(&self, x: &[i64]) -> Option<i64> {
        match self {
            Problem::General(i) => i.is_feasible(x).then(|| i64::try_from(i.objective(x)).ok()).flatten(),
            Problem::Equality(i) => i.is_feasible(x).then(|| i.objective(x)),
            Problem::Mcicp { inst, .. } => inst.is_feasible(x).then(|| inst.objective(x)),
            Problem::Mcipp(i) => i.is_feasible(x).then(|| i.objective(x)),
        }
    }
}

/// A validated instance with its optional decomposition data.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub kind: InstanceKind,
    pub problem: Problem,
    pub td: Option<SpecialTreeDecomposition>,
    pub superprofiles: Option<DocsetSuperprofile>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = r#"{
        "format_version": 1, "instance_kind": "mcipp", "k": 1, "delta": 1,
        "p": [1, -1, 0], "w": [[1, -1, 0]], "d": [1], "l": [-1, -1, -1], "u": [1, 1, 1],
        "graph": {"vertices": ["v1", "v2", "v3"], "edges": [["v1", "v2"], ["v2", "v3"], ["v3", "v1"]]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let f = InstanceFile::parse(TRIANGLE).unwrap();
        assert_eq!(InstanceFile::parse(&f.emit()).unwrap(), f);
        let loaded = f.load().unwrap();
        assert!(matches!(loaded.problem, Problem::Mcipp(_)));
    }

    #[test]
    fn rejects_wrong_k_and_unknown_fields() {
        let mut f = InstanceFile::parse(TRIANGLE).unwrap();
        f.k = 2;
        assert!(matches!(f.load(), Err(CliError::Invalid(_))));
        assert!(InstanceFile::parse(&TRIANGLE.replace("\"k\"", "\"kk\"")).is_err());
    }

    #[test]
    fn non_tu_matrix_names_a_submatrix() {
        let f = InstanceFile {
            format_version: 1,
            instance_kind: InstanceKind::IpEquality,
            k: 0,
            delta: 1,
            p: vec![0, 0],
            m: vec![],
            a: vec![vec![1, 1], vec![-1, 1]],
            b: vec![0, 0],
            w: vec![],
            d: vec![],
            l: vec![0, 0],
            u: vec![1, 1],
            split: None,
            graph: None,
            tree_decomposition: None,
            superprofiles: None,
        };
        let err = f.load().unwrap_err().to_string();
        assert!(err.contains("rows [0, 1], columns [0, 1]"), "{err}");
    }

    #[test]
    fn decompositions_are_validated() {
        let mut f = InstanceFile::parse(TRIANGLE).unwrap();
        f.tree_decomposition = Some(TdSpec { bags: vec![vec!["v1".into(), "v2".into()], vec!["v3".into()]], tree_edges: vec![[0, 1]], ell: None });
        assert!(f.load().is_err());
        f.tree_decomposition = Some(TdSpec { bags: vec![vec!["v1".into(), "v2".into(), "v3".into()]], tree_edges: vec![], ell: None });
        let loaded = f.load().unwrap();
        assert_eq!(loaded.td.unwrap().len(), 1);
    }
}
