//! Labelled vector configurations, circuits and weight matrices.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{IntMat, RatMatrix, RatVector};
use crate::rational::{rat, Rational};

/// Stable column identity. Real columns of an input get their index; columns
/// created during decomposition get fresh labels above those.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// An ordered multiset of column vectors in `Q^dim`, each with a unique label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    matrix: RatMatrix,
    labels: Vec<Label>,
    int: Option<IntMat>,
}

impl Configuration {
    pub fn new(matrix: RatMatrix, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != matrix.cols() {
            return Err(Error::Dimension(format!("{} labels for {} columns", labels.len(), matrix.cols())));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(*l) {
                return Err(Error::Precondition(format!("duplicate label {l}")));
            }
        }
        let int = matrix.to_int();
        Ok(Configuration { matrix, labels, int })
    }

    /// Columns labelled `0..n`.
    pub fn from_matrix(matrix: RatMatrix) -> Self {
        let labels = (0..matrix.cols() as u32).map(Label).collect();
        Self::new(matrix, labels).expect("fresh labels are unique")
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], width: usize) -> Result<Self> {
        Ok(Self::from_matrix(RatMatrix::from_i64_rows_with_width(rows, width)?))
    }

    pub fn from_columns(columns: &[RatVector], dim: usize, labels: Vec<Label>) -> Result<Self> {
        Self::new(RatMatrix::from_columns(columns, dim)?, labels)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn int(&self) -> Option<&IntMat> {
        self.int.as_ref()
    }

    /// Integer matrix or a descriptive error.
    pub fn int_or_err(&self) -> Result<&IntMat> {
        self.int.as_ref().ok_or_else(|| Error::Precondition("configuration has non-integer entries".into()))
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> Label {
        self.labels[j]
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn column(&self, j: usize) -> RatVector {
        self.matrix.column(j)
    }

    pub fn max_label(&self) -> Option<Label> {
        self.labels.iter().copied().max()
    }

    pub fn rank(&self) -> usize {
        match &self.int {
            Some(m) => m.rank_of(&(0..self.n()).collect::<Vec<_>>()),
            None => self.matrix.rank(),
        }
    }

    pub fn rank_of(&self, positions: &[usize]) -> usize {
        match &self.int {
            Some(m) => m.rank_of(positions),
            None => self.matrix.select_columns(positions).rank(),
        }
    }

    /// Sub-configuration on the given positions, keeping labels.
    pub fn select(&self, positions: &[usize]) -> Configuration {
        let labels = positions.iter().map(|&j| self.labels[j]).collect();
        Configuration::new(self.matrix.select_columns(positions), labels).expect("labels stay unique")
    }

    pub fn delete(&self, labels: &[Label]) -> Configuration {
        let keep: Vec<usize> = (0..self.n()).filter(|&j| !labels.contains(&self.labels[j])).collect();
        self.select(&keep)
    }

    pub fn concat(&self, other: &Configuration) -> Result<Configuration> {
        let matrix = self.matrix.hstack(&other.matrix)?;
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Configuration::new(matrix, labels)
    }

    pub fn with_column(&self, column: &[Rational], label: Label) -> Result<Configuration> {
        let c = RatMatrix::from_columns(&[column.to_vec()], self.dim())?;
        let mut labels = self.labels.clone();
        labels.push(label);
        Configuration::new(self.matrix.hstack(&c)?, labels)
    }

    /// `sum_j x_j a_j` for an integer coefficient vector.
    pub fn combine_i64(&self, x: &[i64]) -> RatVector {
        let mut out = vec![Rational::zero(); self.dim()];
        for (j, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.matrix.get(i, j);
                if !a.is_zero() {
                    *o += a * rat(c);
                }
            }
        }
        out
    }

    pub fn is_circulation(&self, x: &[i64]) -> bool {
        x.len() == self.n() && self.combine_i64(x).iter().all(|v| v.is_zero())
    }
}

/// Support-minimal integer kernel vector with coprime entries, indexed by the
/// column positions of its configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit {
    pub coeffs: Vec<i64>,
}

impl Circuit {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Circuit { coeffs }
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, _)| j).collect()
    }

    pub fn support_mask(&self) -> u64 {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).fold(0u64, |m, (j, _)| m | (1 << j))
    }

    pub fn negated(&self) -> Circuit {
        Circuit { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn is_conformal_to(&self, other: &[i64]) -> bool {
        conformal_i64(&self.coeffs, other)
    }
}

pub fn conformal_i64(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.signum() * y.signum() >= 0)
}

/// `k` integer rows indexed by column position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<i64>>, n: usize) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension(format!("weight row {i} has {} entries, expected {n}", r.len())));
            }
        }
        Ok(WeightMatrix { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        WeightMatrix { n, rows: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_rat(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| if *a == 0 { acc } else { acc + rat(*a) * b }))
            .collect()
    }

    pub fn select(&self, positions: &[usize]) -> WeightMatrix {
        WeightMatrix {
            n: positions.len(),
            rows: self.rows.iter().map(|r| positions.iter().map(|&j| r[j]).collect()).collect(),
        }
    }

    pub fn push_column(&mut self, col: &[i64]) {
        assert_eq!(col.len(), self.k());
        for (r, &c) in self.rows.iter_mut().zip(col) {
            r.push(c);
        }
        self.n += 1;
    }

    pub fn set_column(&mut self, j: usize, col: &[i64]) {
        for (r, &c) in self.rows.iter_mut().zip(col) {
            r[j] = c;
        }
    }
}
