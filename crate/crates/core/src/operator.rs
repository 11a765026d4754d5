//! Sparse matrix operators in compressed-row form.
//!
//! Structural operators (incidence, adjacency, Laplacians) are built over
//! `i64` so identities like `L = B Bᵀ` can be checked exactly; solvers work on
//! the `f64` conversion. Entries are kept sorted by `(row, col)` and explicit
//! zeros are never stored, so two operators with the same entries have
//! identical internal representations and identical serialized output.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

/// Scalar types that can be stored in an [`Operator`].
pub trait Entry:
    Copy
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
}

impl Entry for i64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn abs(self) -> Self {
        i64::abs(self)
    }
}

impl Entry for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// A sparse `rows × cols` matrix in CSR layout.
#[derive(Clone, PartialEq)]
pub struct Operator<T: Entry = f64> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
    symmetric: bool,
}

/// Exact integer operator, used for the structural matrices of a graph.
pub type IntOperator = Operator<i64>;

impl<T: Entry> Operator<T> {
    /// Builds an operator from `(row, col, value)` triplets. Duplicate
    /// positions are summed; entries that end up zero are dropped.
    ///
    /// Panics if a triplet lies outside `rows × cols`.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut trips: Vec<(usize, usize, T)> = triplets.into_iter().collect();
        for &(r, c, _) in &trips {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
        }
        trips.sort_by_key(|t| (t.0, t.1));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(trips.len());
        let mut values: Vec<T> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows_of: Vec<usize> = Vec::with_capacity(trips.len());
        for (r, c, v) in trips {
            if last == Some((r, c)) {
                let top = values.len() - 1;
                values[top] = values[top] + v;
            } else {
                rows_of.push(r);
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        // drop zeros after summation
        let mut keep_rows = Vec::with_capacity(rows_of.len());
        let mut keep_cols = Vec::with_capacity(rows_of.len());
        let mut keep_vals = Vec::with_capacity(rows_of.len());
        for ((r, c), v) in rows_of.into_iter().zip(col_idx).zip(values) {
            if v != T::ZERO {
                keep_rows.push(r);
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for &r in &keep_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut op = Operator {
            rows,
            cols,
            row_ptr,
            col_idx: keep_cols,
            values: keep_vals,
            symmetric: false,
        };
        op.symmetric = op.check_symmetric();
        op
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_triplets(rows, cols, std::iter::empty())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, T::ONE)))
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True when the stored entries satisfy `M = Mᵀ` exactly.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    fn check_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        self.triplets().all(|(r, c, v)| self.get(c, r) == v)
    }

    /// Entry at `(row, col)`, zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> T {
        let (cols, vals) = self.row(row);
        match cols.binary_search(&col) {
            Ok(k) => vals[k],
            Err(_) => T::ZERO,
        }
    }

    /// Column indices and values of one row.
    pub fn row(&self, row: usize) -> (&[usize], &[T]) {
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    /// All stored entries in `(row, col)` order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v)),
        )
    }

    /// Elementwise absolute value.
    pub fn abs(&self) -> Self {
        self.map(Entry::abs)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().map(|(r, c, v)| (r, c, f(v))),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// Row sums, `M·1`.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|r| self.row(r).1.iter().fold(T::ZERO, |acc, &v| acc + v))
            .collect()
    }

    /// Column sums, `1ᵀ·M`.
    pub fn col_sums(&self) -> Vec<T> {
        let mut out = vec![T::ZERO; self.cols];
        for (_, c, v) in self.triplets() {
            out[c] = out[c] + v;
        }
        out
    }

    /// Sparse sum `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.shape(),
            other.shape(),
            "operator shape mismatch in add"
        );
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets()),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            self.shape(),
            other.shape(),
            "operator shape mismatch in sub"
        );
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets()
                .chain(other.triplets().map(|(r, c, v)| (r, c, -v))),
        )
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "operator shape mismatch in matmul");
        let mut trips = Vec::new();
        let mut acc = vec![T::ZERO; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; other.cols];
        for r in 0..self.rows {
            let (cols_a, vals_a) = self.row(r);
            for (&k, &a) in cols_a.iter().zip(vals_a) {
                let (cols_b, vals_b) = other.row(k);
                for (&c, &b) in cols_b.iter().zip(vals_b) {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] = acc[c] + a * b;
                }
            }
            for &c in &touched {
                trips.push((r, c, acc[c]));
                acc[c] = T::ZERO;
                seen[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.rows, other.cols, trips)
    }

    /// Converts to a real-valued operator.
    pub fn to_real(&self) -> Operator<f64> {
        Operator::from_triplets(
            self.rows,
            self.cols,
            self.triplets().map(|(r, c, v)| (r, c, v.to_f64())),
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v.to_f64();
        }
        m
    }

    /// Dense row-major copy in the stored scalar type.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::ZERO; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    /// Coordinate-triplet text, one `row col value` line per stored entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in self.triplets() {
            s.push_str(&format!("{r} {c} {v}\n"));
        }
        s
    }
}

impl Operator<f64> {
    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(
            x.len(),
            self.cols,
            "vector length does not match operator columns"
        );
        assert_eq!(
            y.len(),
            self.rows,
            "output length does not match operator rows"
        );
        for (r, out) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            *out = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `y = Mᵀ x` without forming the transpose.
    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(
            x.len(),
            self.rows,
            "vector length does not match operator rows"
        );
        let mut y = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * xr;
            }
        }
        y
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Builds a real operator from a dense matrix, dropping exact zeros.
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut trips = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                if v != 0.0 {
                    trips.push((r, c, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), trips)
    }

    /// `I + Σ cᵢ Mᵢ`, skipping terms with a zero coefficient.
    pub fn identity_plus(n: usize, terms: &[(f64, &Operator<f64>)]) -> Self {
        let mut trips: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, 1.0)).collect();
        for &(coef, op) in terms {
            assert_eq!(
                op.shape(),
                (n, n),
                "operator shape mismatch in identity_plus"
            );
            if coef != 0.0 {
                trips.extend(op.triplets().map(|(r, c, v)| (r, c, coef * v)));
            }
        }
        Self::from_triplets(n, n, trips)
    }
}

impl<T: Entry> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("nnz", &self.nnz())
            .field("symmetric", &self.symmetric)
            .finish()
    }
}
