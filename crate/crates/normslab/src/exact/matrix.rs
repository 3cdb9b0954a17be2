use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

/// Dense matrix with arbitrary-precision integer entries, row-major storage.
///
/// The whole crate uses the row-vector convention: vectors act on the left,
/// `x * M`, so the row span of `M` is the module generated by its rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMat { rows, cols, data: entries.iter().map(|&e| BigInt::from(e)).collect() }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, c)]);
            self[(i, c)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }

    /// row_i += q * row_k
    pub fn add_row_multiple(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * &self[(k, c)];
            self[(i, c)] += add;
        }
    }

    /// col_j += q * col_k
    pub fn add_col_multiple(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * &self[(r, k)];
            self[(r, j)] += add;
        }
    }

    /// Replace rows (i, k) by (a*row_i + b*row_k, c*row_i + d*row_k).
    /// The caller guarantees ad - bc = ±1 when unimodularity matters.
    pub fn two_row_transform(
        &mut self,
        i: usize,
        k: usize,
        a: &BigInt,
        b: &BigInt,
        c: &BigInt,
        d: &BigInt,
    ) {
        for col in 0..self.cols {
            let x = self[(i, col)].clone();
            let y = self[(k, col)].clone();
            self[(i, col)] = a * &x + b * &y;
            self[(k, col)] = c * &x + d * &y;
        }
    }

    /// Replace cols (j, k) by (a*col_j + b*col_k, c*col_j + d*col_k).
    pub fn two_col_transform(
        &mut self,
        j: usize,
        k: usize,
        a: &BigInt,
        b: &BigInt,
        c: &BigInt,
        d: &BigInt,
    ) {
        for row in 0..self.rows {
            let x = self[(row, j)].clone();
            let y = self[(row, k)].clone();
            self[(row, j)] = a * &x + b * &y;
            self[(row, k)] = c * &x + d * &y;
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] += a * b;
                }
            }
        }
        out
    }

    pub fn row_times(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows, "row-vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[j] += xi * a;
                }
            }
        }
        out
    }

    /// Vertical stack: self on top of other.
    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Horizontal stack: self left of other.
    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        IntMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> IntMat {
        IntMat::from_fn(row_range.len(), col_range.len(), |i, j| {
            self[(row_range.start + i, col_range.start + j)].clone()
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        IntMat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        IntMat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> IntMat {
        self.map(|e| e * c)
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    /// Maximum absolute value of the entries, used for pivot heuristics.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|e| e.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Drop any rows that are identically zero.
    pub fn drop_zero_rows(&self) -> IntMat {
        let keep: Vec<usize> =
            (0..self.rows).filter(|&i| self.row(i).iter().any(|e| !e.is_zero())).collect();
        self.select_rows(&keep)
    }

    /// Determinant by fraction-free Bareiss elimination; square matrices only.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_det() {
        let a = IntMat::from_i64(2, 2, &[1, 2, 3, 4]);
        let b = IntMat::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.mul(&b), IntMat::from_i64(2, 2, &[2, 1, 4, 3]));
        assert_eq!(a.det(), BigInt::from(-2));
        assert_eq!(IntMat::identity(3).det(), BigInt::one());
        assert_eq!(IntMat::from_i64(2, 2, &[2, 4, 1, 2]).det(), BigInt::zero());
    }

    #[test]
    fn det_bareiss_5x5() {
        let a = IntMat::from_i64(
            5,
            5,
            &[
                -20, -7, -27, 2, 29, 17, 8, 14, -4, -10, 13, 8, 10, -4, -6, -9, -2, -14, 0, 16, 5,
                0, 5, -1, -4,
            ],
        );
        // invariant factors of this matrix are 1,1,1,2,60 so |det| = 120
        assert_eq!(a.det().abs(), BigInt::from(120));
    }

    #[test]
    fn row_times_follows_row_convention() {
        let m = IntMat::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let x = vec![BigInt::from(1), BigInt::from(-1)];
        assert_eq!(m.row_times(&x), vec![BigInt::from(-3), BigInt::from(-3), BigInt::from(-3)]);
    }
}
