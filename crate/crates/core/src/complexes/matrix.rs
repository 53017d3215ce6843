use std::collections::HashMap;
use std::fmt;

use crate::geometry::{AmbientForm, ChartSet, GeometryError, LocalFraction};

/// Values a matrix can hold: functions or forms on one chart set, a module
/// over the functions.
pub trait Entry: Clone + fmt::Debug {
    fn zero_on(chart: &ChartSet) -> Self;
    fn chart(&self) -> &ChartSet;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn times(&self, a: &LocalFraction) -> Self;
    fn restrict(&self, target: &ChartSet) -> Result<Self, GeometryError>;
    /// Representation-level zero; semantic tests live in the scheme.
    fn is_zero_repr(&self) -> bool;
    fn scale_int(&self, c: i64) -> Self;
}

impl Entry for LocalFraction {
    fn zero_on(chart: &ChartSet) -> Self {
        LocalFraction::zero(chart)
    }
    fn chart(&self) -> &ChartSet {
        LocalFraction::chart(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn times(&self, a: &LocalFraction) -> Self {
        a * self
    }
    fn restrict(&self, target: &ChartSet) -> Result<Self, GeometryError> {
        LocalFraction::restrict(self, target)
    }
    fn is_zero_repr(&self) -> bool {
        self.is_zero()
    }
    fn scale_int(&self, c: i64) -> Self {
        LocalFraction::scale_int(self, c)
    }
}

impl Entry for AmbientForm {
    fn zero_on(chart: &ChartSet) -> Self {
        AmbientForm::zero(chart)
    }
    fn chart(&self) -> &ChartSet {
        AmbientForm::chart(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn times(&self, a: &LocalFraction) -> Self {
        self.try_mul_fraction(a).expect("chart mismatch")
    }
    fn restrict(&self, target: &ChartSet) -> Result<Self, GeometryError> {
        AmbientForm::restrict(self, target)
    }
    fn is_zero_repr(&self) -> bool {
        self.is_zero()
    }
    fn scale_int(&self, c: i64) -> Self {
        AmbientForm::scale_int(self, c)
    }
}

/// Dense row-major matrix with entries on one chart set.
#[derive(Clone, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    chart: ChartSet,
    data: Vec<T>,
}

pub type FractionMatrix = Matrix<LocalFraction>;
pub type FormMatrix = Matrix<AmbientForm>;

impl<T: Entry> Matrix<T> {
    pub fn zero(rows: usize, cols: usize, chart: &ChartSet) -> Self {
        Matrix { rows, cols, chart: chart.clone(), data: vec![T::zero_on(chart); rows * cols] }
    }

    /// Entries in row-major order; all must live on `chart`.
    pub fn from_vec(rows: usize, cols: usize, chart: &ChartSet, data: Vec<T>) -> Result<Self, GeometryError> {
        if data.len() != rows * cols {
            return Err(GeometryError::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|e| e.chart() != chart) {
            return Err(GeometryError::ChartMismatch);
        }
        Ok(Matrix { rows, cols, chart: chart.clone(), data })
    }

    pub fn from_fn(rows: usize, cols: usize, chart: &ChartSet, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, chart: chart.clone(), data }
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

    pub fn chart(&self) -> &ChartSet {
        &self.chart
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero_repr(&self) -> bool {
        self.data.iter().all(Entry::is_zero_repr)
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        assert_eq!(self.chart, other.chart, "chart mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, chart: self.chart.clone(), data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(Entry::neg)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.map(|e| e.scale_int(c))
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, chart: self.chart.clone(), data: self.data.iter().map(f).collect() }
    }

    pub fn restrict(&self, target: &ChartSet) -> Result<Self, GeometryError> {
        if self.chart == *target {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|e| e.restrict(target)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, chart: target.clone(), data })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, &self.chart, |r, c| self.get(c, r).clone())
    }

    /// Block-diagonal assembly in the given order.
    pub fn block_diag(blocks: &[Matrix<T>], chart: &ChartSet) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(rows, cols, chart);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(&b.chart, chart, "chart mismatch");
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, &self.chart, |r, c| self.get(r0 + r, c0 + c).clone())
    }
}

impl FractionMatrix {
    pub fn identity(n: usize, chart: &ChartSet) -> Self {
        Matrix::from_fn(n, n, chart, |r, c| if r == c { LocalFraction::one(chart) } else { LocalFraction::zero(chart) })
    }

    /// `self · m` for any entry type.
    pub fn lmul<T: Entry>(&self, m: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, m.rows, "inner dimension mismatch");
        assert_eq!(self.chart, m.chart, "chart mismatch");
        Matrix::from_fn(self.rows, m.cols, &self.chart, |r, c| {
            let mut acc = T::zero_on(&self.chart);
            for k in 0..self.cols {
                let a = self.get(r, k);
                let b = m.get(k, c);
                if a.is_zero() || b.is_zero_repr() {
                    continue;
                }
                acc = acc.add(&b.times(a));
            }
            acc
        })
    }

    /// `m · self` for any entry type.
    pub fn rmul<T: Entry>(&self, m: &Matrix<T>) -> Matrix<T> {
        assert_eq!(m.cols, self.rows, "inner dimension mismatch");
        assert_eq!(self.chart, m.chart, "chart mismatch");
        Matrix::from_fn(m.rows, self.cols, &self.chart, |r, c| {
            let mut acc = T::zero_on(&self.chart);
            for k in 0..m.cols {
                let a = m.get(r, k);
                let b = self.get(k, c);
                if b.is_zero() || a.is_zero_repr() {
                    continue;
                }
                acc = acc.add(&a.times(b));
            }
            acc
        })
    }

    pub fn mul(&self, other: &FractionMatrix) -> FractionMatrix {
        self.lmul(other)
    }

    /// Row-major Kronecker product: block `(u, v)` is `a_uv·B`.
    pub fn kronecker(&self, b: &FractionMatrix) -> FractionMatrix {
        assert_eq!(self.chart, b.chart, "chart mismatch");
        Matrix::from_fn(self.rows * b.rows, self.cols * b.cols, &self.chart, |r, c| {
            let a = self.get(r / b.rows, c / b.cols);
            let e = b.get(r % b.rows, c % b.cols);
            a * e
        })
    }

    pub fn trace(&self) -> LocalFraction {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).fold(LocalFraction::zero(&self.chart), |acc, k| &acc + self.get(k, k))
    }

    /// Entrywise `d`, a matrix of forms.
    pub fn derivative(&self) -> FormMatrix {
        self.map(LocalFraction::derivative)
    }

    /// Laplace expansion along rows, memoized on the set of used columns;
    /// zero entries are skipped, which keeps block-diagonal inputs cheap.
    pub fn det(&self) -> LocalFraction {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        assert!(n < 63, "matrix too large");
        let mut memo: HashMap<u64, LocalFraction> = HashMap::new();
        self.det_rec(0, 0, &mut memo)
    }

    fn det_rec(&self, row: usize, used: u64, memo: &mut HashMap<u64, LocalFraction>) -> LocalFraction {
        let n = self.rows;
        if row == n {
            return LocalFraction::one(&self.chart);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = LocalFraction::zero(&self.chart);
        let mut free_idx = 0usize;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let a = self.get(row, c);
            if !a.is_zero() {
                let minor = self.det_rec(row + 1, used | (1 << c), memo);
                if !minor.is_zero() {
                    let term = a * &minor;
                    acc = if free_idx % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
            free_idx += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }
}

impl<T: Entry + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}
