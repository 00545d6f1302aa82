//! Dense exact matrices.
//!
//! `RatMatrix` carries rational entries and backs the LP and every exact
//! kernel computation. `IntMat` is a small integer matrix used on hot paths
//! (rank of column subsets, circuit kernels); it works in `i128` and reports
//! overflow instead of wrapping, so callers can fall back to `RatMatrix`.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, rat, Rational};

pub type RatVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::from_rows_with_width(rows, None)
    }

    /// Like `from_rows` but fixes the column count, which matters for
    /// matrices with zero rows.
    pub fn from_rows_with_width(rows: Vec<Vec<Rational>>, width: Option<usize>) -> Result<Self> {
        let cols = width.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(RatMatrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn from_i64_rows_with_width(rows: &[Vec<i64>], width: usize) -> Result<Self> {
        Self::from_rows_with_width(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), Some(width))
    }

    pub fn from_columns(cols: &[RatVector], height: usize) -> Result<Self> {
        let mut m = Self::zeros(height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != height {
                return Err(Error::Dimension(format!("column {j} has {} entries, expected {height}", c.len())));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<RatVector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        RatMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn hstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack with different row counts".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RatMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer copy when every entry is an integer fitting in `i64`.
    pub fn to_int(&self) -> Option<IntMat> {
        let data = self
            .data
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMat { rows: self.rows, cols: self.cols, data })
    }

    /// Reduced row echelon form and pivot columns (Gauss-Jordan over Q).
    /// Zero rows are dropped from the returned matrix.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        if !m.get(r, j).is_zero() {
                            let v = m.get(i, j) - &f * m.get(r, j);
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let keep: Vec<usize> = (0..pivots.len()).collect();
        (m.select_rows(&keep), pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Rows scaled to integers (each by the lcm of its denominators).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let l = lcm_of_denominators(self.row(i));
                self.row(i).iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows.
    pub fn rank(&self) -> usize {
        if let Some(im) = self.to_int() {
            if let Some(r) = im.rank_checked() {
                return r;
            }
        }
        bareiss_rank(self.integer_rows(), self.cols)
    }

    /// A basis of `{x : Mx = 0}`: one vector per non-pivot column, with a 1
    /// in that column.
    pub fn kernel_basis(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            out.push(v);
        }
        out
    }

    /// Exact determinant via Bareiss elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let l = lcm_of_denominators(self.row(i));
            a.push(self.row(i).iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect());
            scale *= l;
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
    }
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Small dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMat {
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        IntMat { rows: rows.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| rat(x)).collect(),
        }
    }

    /// Rank, or `None` on `i128` overflow.
    pub fn rank_checked(&self) -> Option<usize> {
        let all: Vec<usize> = (0..self.cols).collect();
        echelon(self, &all).map(|e| e.pivots.len())
    }

    /// Rank of a column subset; falls back to exact rationals on overflow.
    pub fn rank_of(&self, cols: &[usize]) -> usize {
        match echelon(self, cols) {
            Some(e) => e.pivots.len(),
            None => self.to_rat().select_columns(cols).rank(),
        }
    }

    /// Primitive integer kernel basis of the column subset `cols`, one vector
    /// per free column, each indexed by position within `cols`.
    pub fn kernel_of(&self, cols: &[usize]) -> Vec<Vec<i64>> {
        if let Some(e) = echelon(self, cols) {
            if let Some(k) = e.kernel() {
                return k;
            }
        }
        self.to_rat()
            .select_columns(cols)
            .kernel_basis()
            .into_iter()
            .map(|v| primitive_integer_vector(&v))
            .collect()
    }
}

struct Echelon {
    /// Row-echelon integer matrix (fraction-free), restricted to the rank rows.
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    width: usize,
}

fn echelon(m: &IntMat, cols: &[usize]) -> Option<Echelon> {
    let w = cols.len();
    let mut a: Vec<Vec<i128>> = (0..m.rows).map(|i| cols.iter().map(|&j| m.get(i, j) as i128).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..w {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let g = gcd_i128(a[r][c], a[i][c]);
            let fr = a[i][c] / g;
            let fi = a[r][c] / g;
            for j in c..w {
                let v = a[i][j].checked_mul(fi)?.checked_sub(a[r][j].checked_mul(fr)?)?;
                a[i][j] = v;
            }
            reduce_row(&mut a[i]);
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Some(Echelon { rows: a, pivots, width: w })
}

impl Echelon {
    fn kernel(&self) -> Option<Vec<Vec<i64>>> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.width).filter(|&j| !is_pivot[j]) {
            let mut x = vec![0i128; self.width];
            x[f] = 1;
            for (ri, &p) in self.pivots.iter().enumerate().rev() {
                let row = &self.rows[ri];
                let mut s: i128 = 0;
                for j in p + 1..self.width {
                    if row[j] != 0 && x[j] != 0 {
                        s = s.checked_add(row[j].checked_mul(x[j])?)?;
                    }
                }
                // row[p] * x[p] + s = 0
                if s == 0 {
                    x[p] = 0;
                    continue;
                }
                let g = gcd_i128(s, row[p]);
                let scale = (row[p] / g).abs();
                if scale != 1 {
                    for v in x.iter_mut() {
                        *v = v.checked_mul(scale)?;
                    }
                }
                let s2 = s.checked_mul(scale)?;
                x[p] = -s2 / row[p];
            }
            let g = x.iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
            let out_v = x
                .iter()
                .map(|&v| i64::try_from(v / g).ok())
                .collect::<Option<Vec<_>>>()?;
            out.push(out_v);
        }
        Some(out)
    }
}

fn reduce_row(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
    if g > 1 {
        for v in row.iter_mut() {
            *v /= g;
        }
    }
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_i128(a as i128, b as i128) as i64
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction and sign.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<i64> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("circuit entry exceeds i64")
        })
        .collect()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs_i64(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[allow(dead_code)]
pub(crate) fn signum(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(&[vec![1, 1], vec![2, 2]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let a = m(&[vec![1, 1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v).unwrap()));
        }
        let span = RatMatrix::from_rows(k.clone()).unwrap();
        let both = span.vstack(&m(&[vec![1, -1, 0], vec![1, 0, -1]])).unwrap();
        assert_eq!(both.rank(), 2);

        assert!(RatMatrix::identity(2).kernel_basis().is_empty());

        let k = m(&[vec![1, -1], vec![-1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(m(&[vec![1, 1], vec![1, 2]]).determinant().unwrap(), rat(1));
        assert_eq!(RatMatrix::identity(4).determinant().unwrap(), rat(1));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(), rat(-1));
        assert!(m(&[vec![1, 2, 3]]).determinant().is_err());
        let r = RatMatrix::from_rows(vec![vec![ratio(1, 2), rat(1)], vec![rat(3), ratio(2, 3)]]).unwrap();
        assert_eq!(r.determinant().unwrap(), ratio(1, 3) - rat(3));
    }

    #[test]
    fn int_kernel_matches_rational() {
        let a = IntMat::from_rows(&[vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]], 3);
        let k = a.kernel_of(&[0, 1, 2]);
        assert_eq!(k.len(), 1);
        assert!(k[0] == vec![1, 1, 1] || k[0] == vec![-1, -1, -1]);
        assert_eq!(a.rank_of(&[0, 1, 2]), 2);
        let b = IntMat::from_rows(&[vec![2, 3, 5]], 3);
        for v in b.kernel_of(&[0, 1, 2]) {
            assert_eq!(dot_i64(&v, &[2, 3, 5]), 0);
            assert_eq!(v.iter().fold(0, |g, &x| gcd_i64(g, x)), 1);
        }
    }
}
