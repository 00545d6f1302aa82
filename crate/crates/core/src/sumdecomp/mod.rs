//! Separations, decomposition trees and the 1-sum and 2-sum dynamic
//! programs for constrained circulation problems.

mod enumerate;
pub mod one_sum;
pub mod separation;
pub mod solve;
pub mod tree;
pub mod two_sum;

use std::collections::BTreeMap;

use crate::config::{Configuration, Label, WeightMatrix};
use crate::error::{Error, Result};

pub use enumerate::{enumerate_circulations, Domain};
pub use one_sum::solve_1sum;
pub use separation::{find_separation, Separation};
pub use solve::{solve_anchored, SolveStats};
pub use tree::{build_decomposition_tree, DecompositionTree, TreeNode};
pub use two_sum::{build_gadget, classify_children, solve_2sum_dp, upper_weight, ChildKind, Gadget};

/// Assignment of real columns by label.
pub type Witness = BTreeMap<Label, i64>;

/// A table cell: best value and an assignment achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub value: i64,
    pub witness: Witness,
}

impl TableEntry {
    /// Higher value wins; ties go to the lexicographically smaller witness.
    pub fn beats(&self, other: &TableEntry) -> bool {
        self.value > other.value || (self.value == other.value && self.witness < other.witness)
    }
}

/// Best entry per weight vector.
pub type WeightTable = BTreeMap<Vec<i64>, TableEntry>;

pub(crate) fn offer(table: &mut WeightTable, d: Vec<i64>, e: TableEntry) {
    match table.get(&d) {
        Some(old) if !e.beats(old) => {}
        _ => {
            table.insert(d, e);
        }
    }
}

/// `max p'x s.t. Ax = 0, Wx = d, l <= x <= u, x integer` (Problem IP2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McicpInstance {
    pub p: Vec<i64>,
    pub a: Configuration,
    pub w: WeightMatrix,
    pub d: Vec<i64>,
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    pub delta: i64,
}

impl McicpInstance {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.w.k()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let n = self.n();
        if self.a.n() != n || self.w.n() != n || self.l.len() != n || self.u.len() != n || self.d.len() != self.w.k() {
            return Err(Error::Dimension("circulation instance lengths".into()));
        }
        if (0..n).any(|j| self.l[j] > self.u[j]) {
            return Err(Error::Precondition("crossed bounds".into()));
        }
        if self.a.int().is_none() {
            return Err(Error::Precondition("A must be integral".into()));
        }
        Ok(())
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.n()
            && (0..self.n()).all(|j| self.l[j] <= x[j] && x[j] <= self.u[j])
            && self.a.is_circulation(x)
            && self.w.apply(x) == self.d
    }

    pub fn objective(&self, x: &[i64]) -> i64 {
        self.p.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// The same problem as an equality instance with `b = 0`.
    pub fn to_equality(&self) -> crate::proximity::EqualityInstance {
        crate::proximity::EqualityInstance {
            p: self.p.clone(),
            a: self.a.clone(),
            b: vec![0; self.a.dim()],
            w: self.w.clone(),
            d: self.d.clone(),
            l: self.l.clone(),
            u: self.u.clone(),
            delta: self.delta,
        }
    }
}

/// An instance with a distinguished root column whose flow is prescribed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedMcicpInstance {
    pub inst: McicpInstance,
    pub root: Label,
    pub phi: i64,
}

impl RootedMcicpInstance {
    /// Duplicates the column at `pos` as a new root with flow `0`, zero
    /// profit and the weights of the original column.
    pub fn duplicate_column(inst: &McicpInstance, pos: usize) -> Result<Self> {
        let label = Label(inst.a.max_label().map_or(0, |l| l.0 + 1));
        let a = inst.a.with_column(&inst.a.column(pos), label)?;
        let mut w = inst.w.clone();
        w.push_column(&inst.w.column(pos));
        let mut p = inst.p.clone();
        p.push(0);
        let mut l = inst.l.clone();
        l.push(0);
        let mut u = inst.u.clone();
        u.push(0);
        Ok(RootedMcicpInstance {
            inst: McicpInstance { p, a, w, d: inst.d.clone(), l, u, delta: inst.delta },
            root: label,
            phi: 0,
        })
    }

    pub fn root_position(&self) -> usize {
        self.inst.a.position(self.root).expect("root label is a column")
    }
}
