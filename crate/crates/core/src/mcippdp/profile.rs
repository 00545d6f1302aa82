//! Docset profiles: the traces that docsets leave on a set of roots.

use std::collections::{BTreeSet, HashMap};

use crate::cographic::{docset_masks, DirectedGraph, McippInstance};
use crate::error::{Error, Result};

use super::td::SpecialTreeDecomposition;

/// Subsets of a root set, each a sorted vertex list.
pub type ProfileEntry = BTreeSet<Vec<usize>>;

/// One collection of root subsets per decomposition node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocsetSuperprofile {
    pub entries: Vec<ProfileEntry>,
}

/// `{R' ∩ S : S nontrivial docset}`.
pub fn brute_superprofile(g: &DirectedGraph, r_prime: &[usize]) -> Result<ProfileEntry> {
    if r_prime.iter().any(|&v| v >= g.n()) {
        return Err(Error::Dimension("root outside the graph".into()));
    }
    let rm: u64 = r_prime.iter().fold(0, |m, &v| m | 1 << v);
    Ok(docset_masks(g, false)?.into_iter().map(|s| g.mask_to_vertices(s & rm)).collect())
}

/// `R ∩ B_t` per node.
pub fn node_roots(inst: &McippInstance, td: &SpecialTreeDecomposition) -> Vec<Vec<usize>> {
    let roots: BTreeSet<usize> = inst.roots().into_iter().collect();
    td.bags
        .iter()
        .map(|b| {
            let mut r: Vec<usize> = b.iter().copied().filter(|v| roots.contains(v)).collect();
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect()
}

/// Exact profiles on every `R ∩ B_t`, each with the empty pattern added.
pub fn exact_superprofile(inst: &McippInstance, td: &SpecialTreeDecomposition) -> Result<DocsetSuperprofile> {
    let mut entries = Vec::new();
    for r in node_roots(inst, td) {
        let mut e = brute_superprofile(&inst.graph, &r)?;
        e.insert(Vec::new());
        entries.push(e);
    }
    Ok(DocsetSuperprofile { entries })
}

/// Every member lies in `R ∩ B_t`.
pub fn check_superprofile_shape(inst: &McippInstance, td: &SpecialTreeDecomposition, sp: &DocsetSuperprofile) -> Result<()> {
    if sp.entries.len() != td.len() {
        return Err(Error::Dimension(format!("{} superprofile entries for {} nodes", sp.entries.len(), td.len())));
    }
    for (t, (e, r)) in sp.entries.iter().zip(node_roots(inst, td)).enumerate() {
        if let Some(bad) = e.iter().find(|s| s.iter().any(|v| !r.contains(v))) {
            return Err(Error::Precondition(format!("superprofile member {bad:?} of node {t} leaves R ∩ B_t")));
        }
    }
    Ok(())
}

/// Shape check plus containment of the exact profile at every node.
pub fn check_superprofile(inst: &McippInstance, td: &SpecialTreeDecomposition, sp: &DocsetSuperprofile) -> Result<()> {
    check_superprofile_shape(inst, td, sp)?;
    for (t, (e, r)) in sp.entries.iter().zip(node_roots(inst, td)).enumerate() {
        if let Some(miss) = brute_superprofile(&inst.graph, &r)?.into_iter().find(|s| !e.contains(s)) {
            return Err(Error::Precondition(format!("superprofile of node {t} misses the docset trace {miss:?}")));
        }
    }
    Ok(())
}

/// Fewest members (bitmasks over target positions) summing to a target,
/// memoized, with a step budget.
pub(crate) struct SumChecker {
    members: Vec<u64>,
    memo: HashMap<Vec<i64>, Option<u32>>,
    steps: u64,
    limit: u64,
}

pub(crate) struct OutOfSteps;

impl SumChecker {
    pub fn new(members: Vec<u64>, limit: u64) -> Self {
        let mut members: Vec<u64> = members.into_iter().filter(|&m| m != 0).collect();
        members.sort_unstable();
        members.dedup();
        SumChecker { members, memo: HashMap::new(), steps: 0, limit }
    }

    /// Restarts the step count; memoized answers are kept.
    pub fn reset(&mut self) {
        self.steps = 0;
    }

    pub fn min_terms(&mut self, target: &[i64]) -> std::result::Result<Option<u32>, OutOfSteps> {
        if target.iter().any(|&v| v < 0) {
            return Ok(None);
        }
        let Some(first) = target.iter().position(|&v| v > 0) else { return Ok(Some(0)) };
        if let Some(&r) = self.memo.get(target) {
            return Ok(r);
        }
        self.steps += 1;
        if self.steps > self.limit {
            return Err(OutOfSteps);
        }
        let support: u64 = target.iter().enumerate().filter(|(_, &v)| v > 0).fold(0, |m, (i, _)| m | 1 << i);
        let mut best: Option<u32> = None;
        for idx in 0..self.members.len() {
            let m = self.members[idx];
            if m >> first & 1 == 0 || m & !support != 0 {
                continue;
            }
            let rest: Vec<i64> = target.iter().enumerate().map(|(i, &v)| v - (m >> i & 1) as i64).collect();
            if let Some(r) = self.min_terms(&rest)? {
                best = Some(best.map_or(r + 1, |b| b.min(r + 1)));
            }
        }
        self.memo.insert(target.to_vec(), best);
        Ok(best)
    }
}
