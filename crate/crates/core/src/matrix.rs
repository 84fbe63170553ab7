//! Dense exact matrices over F_p or Q with deterministic Gauss-Jordan
//! elimination (first nonzero pivot in column order), plus directed systems
//! of linear maps and the eventual-rank oracle for constant systems.
//!
//! Entries are stored packed per field so prime-field work stays on machine
//! words; rationals auto-reduce on every operation, which keeps coefficient
//! growth bounded at the scales this crate targets.

use crate::error::LinalgError;
use crate::scalar::{mod_inverse, ExactScalar, FieldSpec};
use num_rational::BigRational;
use num_traits::{One, Zero};

trait Arith {
    type El: Clone + PartialEq;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Self::El;
}

struct FpArith {
    p: u64,
}

impl Arith for FpArith {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inverse(*a, self.p)
    }
}

struct RatArith;

impl Arith for RatArith {
    type El = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

fn mat_mul<A: Arith>(ar: &A, a: &[A::El], b: &[A::El], m: usize, n: usize, k: usize) -> Vec<A::El> {
    let mut out = vec![ar.zero(); m * k];
    for i in 0..m {
        for t in 0..n {
            let av = &a[i * n + t];
            if ar.is_zero(av) {
                continue;
            }
            for j in 0..k {
                let bv = &b[t * k + j];
                if ar.is_zero(bv) {
                    continue;
                }
                out[i * k + j] = ar.add(&out[i * k + j], &ar.mul(av, bv));
            }
        }
    }
    out
}

/// Gauss-Jordan on the augmented matrix [data | I]; returns the reduced rows
/// and the pivot columns. Pivot choice is the first nonzero entry in column
/// order, scanning rows top-down, so the result is fully deterministic.
fn echelon_generic<A: Arith>(
    ar: &A,
    data: &[A::El],
    rows: usize,
    cols: usize,
) -> (Vec<A::El>, Vec<usize>) {
    let w_cols = cols + rows;
    let mut w = vec![ar.zero(); rows * w_cols];
    for r in 0..rows {
        for c in 0..cols {
            w[r * w_cols + c] = data[r * cols + c].clone();
        }
        w[r * w_cols + cols + r] = ar.one();
    }
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..cols {
        let pr = pivots.len();
        if pr == rows {
            break;
        }
        let Some(r0) = (pr..rows).find(|&r| !ar.is_zero(&w[r * w_cols + col])) else {
            continue;
        };
        if r0 != pr {
            for j in 0..w_cols {
                w.swap(r0 * w_cols + j, pr * w_cols + j);
            }
        }
        let inv = ar.inv(&w[pr * w_cols + col]);
        for j in col..w_cols {
            let v = ar.mul(&w[pr * w_cols + j], &inv);
            w[pr * w_cols + j] = v;
        }
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let m = w[r * w_cols + col].clone();
            if ar.is_zero(&m) {
                continue;
            }
            for j in col..w_cols {
                let v = ar.sub(&w[r * w_cols + j], &ar.mul(&m, &w[pr * w_cols + j]));
                w[r * w_cols + j] = v;
            }
        }
        pivots.push(col);
    }
    (w, pivots)
}

#[derive(Debug, Clone, PartialEq)]
enum Store {
    Fp { p: u64, vals: Vec<u64> },
    Rat(Vec<BigRational>),
}

impl Store {
    fn field(&self) -> FieldSpec {
        match self {
            Store::Fp { p, .. } => FieldSpec::Prime(*p as u32),
            Store::Rat(_) => FieldSpec::Rational,
        }
    }

    fn zeros(field: FieldSpec, len: usize) -> Store {
        match field {
            FieldSpec::Prime(p) => Store::Fp {
                p: p as u64,
                vals: vec![0; len],
            },
            FieldSpec::Rational => Store::Rat(vec![BigRational::zero(); len]),
        }
    }

    fn get(&self, idx: usize) -> ExactScalar {
        match self {
            Store::Fp { p, vals } => ExactScalar::Fp {
                p: *p as u32,
                val: vals[idx],
            },
            Store::Rat(vals) => ExactScalar::Rat(vals[idx].clone()),
        }
    }

    fn set(&mut self, idx: usize, value: &ExactScalar) {
        match (self, value) {
            (Store::Fp { vals, .. }, ExactScalar::Fp { val, .. }) => vals[idx] = *val,
            (Store::Rat(vals), ExactScalar::Rat(r)) => vals[idx] = r.clone(),
            _ => panic!("scalar field mismatch"),
        }
    }

    fn is_zero_at(&self, idx: usize) -> bool {
        match self {
            Store::Fp { vals, .. } => vals[idx] == 0,
            Store::Rat(vals) => vals[idx].is_zero(),
        }
    }
}

/// A dense exact matrix. All entries share one field descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    store: Store,
}

impl ExactMatrix {
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<ExactScalar>,
    ) -> Result<ExactMatrix, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        let mut store = Store::zeros(field, rows * cols);
        for (i, e) in entries.iter().enumerate() {
            if e.field() != field {
                return Err(LinalgError::FieldMismatch);
            }
            store.set(i, e);
        }
        Ok(ExactMatrix { rows, cols, store })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            store: Store::zeros(field, rows * cols),
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        let one = ExactScalar::one(field);
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ExactScalar,
    ) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, &f(i, j));
            }
        }
        m
    }

    /// Convenience constructor from small signed integers.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, entries: &[i64]) -> ExactMatrix {
        assert_eq!(entries.len(), rows * cols);
        ExactMatrix::from_fn(field, rows, cols, |i, j| {
            ExactScalar::from_i64(field, entries[i * cols + j])
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.store.field()
    }

    pub fn get(&self, i: usize, j: usize) -> ExactScalar {
        assert!(i < self.rows && j < self.cols);
        self.store.get(i * self.cols + j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: &ExactScalar) {
        assert!(i < self.rows && j < self.cols);
        self.store.set(i * self.cols + j, value);
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.store.is_zero_at(i * self.cols + j)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows * self.cols).all(|i| self.store.is_zero_at(i))
    }

    fn check_same_field(&self, other: &ExactMatrix) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let store = match (&self.store, &other.store) {
            (Store::Fp { p, vals: a }, Store::Fp { vals: b, .. }) => Store::Fp {
                p: *p,
                vals: mat_mul(&FpArith { p: *p }, a, b, self.rows, self.cols, other.cols),
            },
            (Store::Rat(a), Store::Rat(b)) => {
                Store::Rat(mat_mul(&RatArith, a, b, self.rows, self.cols, other.cols))
            }
            _ => unreachable!(),
        };
        Ok(ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            store,
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.zip(other, |ar: &FpArith, a, b| ar.add(a, b), |a, b| a + b)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.zip(other, |ar: &FpArith, a, b| ar.sub(a, b), |a, b| a - b)
    }

    fn zip(
        &self,
        other: &ExactMatrix,
        fp: impl Fn(&FpArith, &u64, &u64) -> u64,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<ExactMatrix, LinalgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let store = match (&self.store, &other.store) {
            (Store::Fp { p, vals: a }, Store::Fp { vals: b, .. }) => {
                let ar = FpArith { p: *p };
                Store::Fp {
                    p: *p,
                    vals: a.iter().zip(b).map(|(x, y)| fp(&ar, x, y)).collect(),
                }
            }
            (Store::Rat(a), Store::Rat(b)) => {
                Store::Rat(a.iter().zip(b).map(|(x, y)| rat(x, y)).collect())
            }
            _ => unreachable!(),
        };
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            store,
        })
    }

    pub fn neg(&self) -> ExactMatrix {
        let store = match &self.store {
            Store::Fp { p, vals } => {
                let ar = FpArith { p: *p };
                Store::Fp {
                    p: *p,
                    vals: vals.iter().map(|v| ar.neg(v)).collect(),
                }
            }
            Store::Rat(vals) => Store::Rat(vals.iter().map(|v| -v).collect()),
        };
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            store,
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> ExactMatrix {
        assert_eq!(s.field(), self.field(), "scalar field mismatch");
        let store = match (&self.store, s) {
            (Store::Fp { p, vals }, ExactScalar::Fp { val, .. }) => {
                let ar = FpArith { p: *p };
                Store::Fp {
                    p: *p,
                    vals: vals.iter().map(|v| ar.mul(v, val)).collect(),
                }
            }
            (Store::Rat(vals), ExactScalar::Rat(r)) => {
                Store::Rat(vals.iter().map(|v| v * r).collect())
            }
            _ => unreachable!(),
        };
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            store,
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.is_zero_at(i, j) {
                    out.set(j, i, &self.get(i, j));
                }
            }
        }
        out
    }

    pub fn hstack(field: FieldSpec, parts: &[&ExactMatrix]) -> Result<ExactMatrix, LinalgError> {
        let rows = parts.first().map(|m| m.rows()).unwrap_or(0);
        let cols = parts.iter().map(|m| m.cols()).sum();
        let mut out = ExactMatrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            if m.field() != field {
                return Err(LinalgError::FieldMismatch);
            }
            if m.rows() != rows {
                return Err(LinalgError::ShapeMismatch("hstack row count".into()));
            }
            for i in 0..rows {
                for j in 0..m.cols() {
                    if !m.is_zero_at(i, j) {
                        out.set(i, off + j, &m.get(i, j));
                    }
                }
            }
            off += m.cols();
        }
        Ok(out)
    }

    pub fn vstack(field: FieldSpec, parts: &[&ExactMatrix]) -> Result<ExactMatrix, LinalgError> {
        let cols = parts.first().map(|m| m.cols()).unwrap_or(0);
        let rows = parts.iter().map(|m| m.rows()).sum();
        let mut out = ExactMatrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            if m.field() != field {
                return Err(LinalgError::FieldMismatch);
            }
            if m.cols() != cols {
                return Err(LinalgError::ShapeMismatch("vstack column count".into()));
            }
            for i in 0..m.rows() {
                for j in 0..cols {
                    if !m.is_zero_at(i, j) {
                        out.set(off + i, j, &m.get(i, j));
                    }
                }
            }
            off += m.rows();
        }
        Ok(out)
    }

    pub fn block_diag(field: FieldSpec, parts: &[&ExactMatrix]) -> Result<ExactMatrix, LinalgError> {
        let rows = parts.iter().map(|m| m.rows()).sum();
        let cols = parts.iter().map(|m| m.cols()).sum();
        let mut out = ExactMatrix::zeros(field, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for m in parts {
            if m.field() != field {
                return Err(LinalgError::FieldMismatch);
            }
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if !m.is_zero_at(i, j) {
                        out.set(ro + i, co + j, &m.get(i, j));
                    }
                }
            }
            ro += m.rows();
            co += m.cols();
        }
        Ok(out)
    }

    pub fn col(&self, j: usize) -> ExactMatrix {
        assert!(j < self.cols);
        let mut out = ExactMatrix::zeros(self.field(), self.rows, 1);
        for i in 0..self.rows {
            if !self.is_zero_at(i, j) {
                out.set(i, 0, &self.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, sel: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.field(), self.rows, sel.len());
        for (jo, &j) in sel.iter().enumerate() {
            assert!(j < self.cols);
            for i in 0..self.rows {
                if !self.is_zero_at(i, j) {
                    out.set(i, jo, &self.get(i, j));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Result<ExactMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = ExactMatrix::identity(self.field(), self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Rank over the matrix's field. Matrices whose nonzero entries form
    /// disjointly-supported columns (or rows) are counted directly; everything
    /// else goes through elimination.
    pub fn rank(&self) -> usize {
        if let Some(r) = self.sparse_rank() {
            return r;
        }
        self.echelon().rank()
    }

    fn sparse_rank(&self) -> Option<usize> {
        // At most one nonzero per row => nonzero columns have disjoint
        // supports and are therefore independent. Dually for columns.
        let mut row_ok = true;
        let mut col_nnz = vec![0usize; self.cols];
        let mut row_nnz = vec![0usize; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.is_zero_at(i, j) {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
            if row_nnz[i] > 1 {
                row_ok = false;
            }
        }
        if row_ok {
            return Some(col_nnz.iter().filter(|&&c| c > 0).count());
        }
        if col_nnz.iter().all(|&c| c <= 1) {
            return Some(row_nnz.iter().filter(|&&c| c > 0).count());
        }
        None
    }

    /// Columns form a basis of the null space; the number of columns is
    /// always `cols - rank`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        self.echelon().kernel_basis()
    }

    pub fn echelon(&self) -> Echelon {
        let (w, pivots) = match &self.store {
            Store::Fp { p, vals } => {
                let (w, piv) = echelon_generic(&FpArith { p: *p }, vals, self.rows, self.cols);
                (Store::Fp { p: *p, vals: w }, piv)
            }
            Store::Rat(vals) => {
                let (w, piv) = echelon_generic(&RatArith, vals, self.rows, self.cols);
                (Store::Rat(w), piv)
            }
        };
        Echelon {
            rows: self.rows,
            cols: self.cols,
            work: ExactMatrix {
                rows: self.rows,
                cols: self.cols + self.rows,
                store: w,
            },
            pivots,
        }
    }
}

/// The reduced row echelon form of a matrix together with the row transform
/// that produced it, cached for repeated solves against the same matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: usize,
    cols: usize,
    /// Augmented reduced matrix [R | T] with T * A = R.
    work: ExactMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rref(&self) -> ExactMatrix {
        self.work.select_cols(&(0..self.cols).collect::<Vec<_>>())
    }

    /// Non-pivot columns, ascending; these index the kernel basis columns.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut piv = self.pivots.iter().peekable();
        let mut free = Vec::with_capacity(self.cols - self.pivots.len());
        for c in 0..self.cols {
            if piv.peek() == Some(&&c) {
                piv.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    pub fn kernel_basis(&self) -> ExactMatrix {
        let field = self.work.field();
        let free = self.free_cols();
        let mut out = ExactMatrix::zeros(field, self.cols, free.len());
        let one = ExactScalar::one(field);
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, &one);
            for (r, &pc) in self.pivots.iter().enumerate() {
                if !self.work.is_zero_at(r, f) {
                    out.set(pc, k, &self.work.get(r, f).neg());
                }
            }
        }
        out
    }

    /// Transform a right-hand side by the recorded row operations.
    fn reduce_rhs(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if rhs.rows() != self.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "rhs has {} rows, system has {}",
                rhs.rows(),
                self.rows
            )));
        }
        let transform = self
            .work
            .select_cols(&(self.cols..self.cols + self.rows).collect::<Vec<_>>());
        transform.matmul(rhs)
    }

    /// Does every column of `rhs` lie in the column space of the matrix?
    pub fn in_image(&self, rhs: &ExactMatrix) -> Result<bool, LinalgError> {
        let c = self.reduce_rhs(rhs)?;
        for r in self.rank()..self.rows {
            for j in 0..c.cols() {
                if !c.is_zero_at(r, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Solve `A x = rhs` column-wise; `None` when inconsistent. Free
    /// variables are fixed to `free_val` (use zero for the canonical lift).
    pub fn solve_with_free(
        &self,
        rhs: &ExactMatrix,
        free_val: &ExactScalar,
    ) -> Result<Option<ExactMatrix>, LinalgError> {
        let field = self.work.field();
        if free_val.field() != field {
            return Err(LinalgError::FieldMismatch);
        }
        let c = self.reduce_rhs(rhs)?;
        for r in self.rank()..self.rows {
            for j in 0..c.cols() {
                if !c.is_zero_at(r, j) {
                    return Ok(None);
                }
            }
        }
        let free = self.free_cols();
        let mut x = ExactMatrix::zeros(field, self.cols, rhs.cols());
        for j in 0..rhs.cols() {
            for &f in &free {
                x.set(f, j, free_val);
            }
            for (r, &pc) in self.pivots.iter().enumerate() {
                let mut v = c.get(r, j);
                if !free_val.is_zero() {
                    for &f in &free {
                        if !self.work.is_zero_at(r, f) {
                            v = v.sub(&self.work.get(r, f).mul(free_val));
                        }
                    }
                }
                x.set(pc, j, &v);
            }
        }
        Ok(Some(x))
    }

    pub fn solve(&self, rhs: &ExactMatrix) -> Result<Option<ExactMatrix>, LinalgError> {
        self.solve_with_free(rhs, &ExactScalar::zero(self.work.field()))
    }
}

/// A finite directed system of vector spaces and linear maps
/// `V_0 -> V_1 -> ... -> V_q`; map `i` has shape `d_{i+1} x d_i`.
#[derive(Debug, Clone)]
pub struct DirectSystem {
    field: FieldSpec,
    spaces: Vec<usize>,
    maps: Vec<ExactMatrix>,
}

impl DirectSystem {
    pub fn new(
        field: FieldSpec,
        spaces: Vec<usize>,
        maps: Vec<ExactMatrix>,
    ) -> Result<DirectSystem, LinalgError> {
        if spaces.is_empty() || maps.len() + 1 != spaces.len() {
            return Err(LinalgError::ShapeMismatch(
                "maps.len() must equal spaces.len() - 1".into(),
            ));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.field() != field {
                return Err(LinalgError::FieldMismatch);
            }
            if m.rows() != spaces[i + 1] || m.cols() != spaces[i] {
                return Err(LinalgError::ShapeMismatch(format!(
                    "map {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    spaces[i + 1],
                    spaces[i]
                )));
            }
        }
        Ok(DirectSystem {
            field,
            spaces,
            maps,
        })
    }

    /// The system `V -> V -> ...` with `len` copies of a fixed square map.
    pub fn constant(t: &ExactMatrix, len: usize) -> Result<DirectSystem, LinalgError> {
        if t.rows() != t.cols() {
            return Err(LinalgError::NonSquare {
                rows: t.rows(),
                cols: t.cols(),
            });
        }
        DirectSystem::new(
            t.field(),
            vec![t.rows(); len + 1],
            vec![t.clone(); len],
        )
    }

    pub fn spaces(&self) -> &[usize] {
        &self.spaces
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }

    pub fn composite(&self, p: usize, q: usize) -> Result<ExactMatrix, LinalgError> {
        if p > q || q >= self.spaces.len() {
            return Err(LinalgError::BadIndex(format!(
                "composite {p}..{q} of a system with {} spaces",
                self.spaces.len()
            )));
        }
        let mut acc = ExactMatrix::identity(self.field, self.spaces[p]);
        for i in p..q {
            acc = self.maps[i].matmul(&acc)?;
        }
        Ok(acc)
    }

    /// Rank of `map_{q-1} o ... o map_p` (the identity on `V_p` when p = q).
    pub fn composite_rank(&self, p: usize, q: usize) -> Result<usize, LinalgError> {
        Ok(self.composite(p, q)?.rank())
    }
}

/// Rank of `t^n` for `n = rows(t)`: the dimension of the colimit of the
/// constant directed system `V -> V -> ...` with transition map `t`.
pub fn eventual_rank(t: &ExactMatrix) -> Result<usize, LinalgError> {
    if t.rows() != t.cols() {
        return Err(LinalgError::NonSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    Ok(t.pow(t.rows())?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(ExactMatrix::identity(f7(), 2).rank(), 2);
        assert_eq!(ExactMatrix::zeros(f7(), 3, 4).rank(), 0);
    }

    #[test]
    fn rank_rational_dependent_rows() {
        // Hand row-reduction: [[1,2],[2,4]] -> [[1,2],[0,0]], one pivot.
        let m = ExactMatrix::from_i64(FieldSpec::Rational, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let k = ExactMatrix::identity(f7(), 3).kernel_basis();
        assert_eq!(k.cols(), 0);
        assert_eq!(k.rows(), 3);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = ExactMatrix::zeros(f7(), 2, 2).kernel_basis();
        assert_eq!(k.cols(), 2);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn kernel_of_dependent_rational_matrix() {
        // Same oracle as the rank test: null space spanned by (2, -1)^T,
        // elimination normalises it to (-2, 1)^T.
        let m = ExactMatrix::from_i64(FieldSpec::Rational, 2, 2, &[1, 2, 2, 4]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let expected = ExactMatrix::from_i64(FieldSpec::Rational, 2, 1, &[-2, 1]);
        assert_eq!(k, expected);
        assert!(m.matmul(&k).unwrap().is_zero());
    }

    #[test]
    fn composite_rank_examples() {
        let d = ExactMatrix::from_i64(f7(), 2, 2, &[1, 0, 0, 0]);
        let sys = DirectSystem::constant(&d, 3).unwrap();
        // Empty composite is the identity on V_0.
        assert_eq!(sys.composite_rank(0, 0).unwrap(), 2);
        assert_eq!(sys.composite_rank(0, 3).unwrap(), 1);

        let z = ExactMatrix::zeros(f7(), 2, 2);
        let zsys = DirectSystem::constant(&z, 2).unwrap();
        assert_eq!(zsys.composite_rank(0, 2).unwrap(), 0);
        assert!(zsys.composite_rank(0, 3).is_err());
    }

    #[test]
    fn eventual_rank_examples() {
        assert_eq!(eventual_rank(&ExactMatrix::identity(f7(), 4)).unwrap(), 4);
        // Strictly upper triangular 3x3 is nilpotent.
        let n = ExactMatrix::from_i64(f7(), 3, 3, &[0, 1, 2, 0, 0, 3, 0, 0, 0]);
        assert_eq!(eventual_rank(&n).unwrap(), 0);
        // diag(1, 0): powers computed directly all have rank 1.
        let d = ExactMatrix::from_i64(f7(), 2, 2, &[1, 0, 0, 0]);
        for k in 1..5 {
            assert_eq!(d.pow(k).unwrap().rank(), 1);
        }
        assert_eq!(eventual_rank(&d).unwrap(), 1);
        assert!(eventual_rank(&ExactMatrix::zeros(f7(), 2, 3)).is_err());
    }

    #[test]
    fn solve_and_in_image() {
        let a = ExactMatrix::from_i64(f7(), 3, 2, &[1, 0, 0, 1, 1, 1]);
        let ech = a.echelon();
        let b = ExactMatrix::from_i64(f7(), 3, 1, &[2, 3, 5]);
        let x = ech.solve(&b).unwrap().unwrap();
        assert_eq!(a.matmul(&x).unwrap(), b);
        let bad = ExactMatrix::from_i64(f7(), 3, 1, &[2, 3, 6]);
        assert!(ech.solve(&bad).unwrap().is_none());
        assert!(!ech.in_image(&bad).unwrap());
        assert!(ech.in_image(&b).unwrap());
    }

    #[test]
    fn solve_with_alternative_free_values() {
        // Underdetermined system: both lifts must solve it.
        let a = ExactMatrix::from_i64(f7(), 1, 2, &[1, 1]);
        let b = ExactMatrix::from_i64(f7(), 1, 1, &[3]);
        let ech = a.echelon();
        let x0 = ech.solve(&b).unwrap().unwrap();
        let x1 = ech
            .solve_with_free(&b, &ExactScalar::from_i64(f7(), 1))
            .unwrap()
            .unwrap();
        assert_ne!(x0, x1);
        assert_eq!(a.matmul(&x0).unwrap(), b);
        assert_eq!(a.matmul(&x1).unwrap(), b);
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = ExactMatrix::identity(f7(), 2);
        let b = ExactMatrix::identity(FieldSpec::Rational, 2);
        assert_eq!(a.matmul(&b), Err(LinalgError::FieldMismatch));
        let mixed = ExactMatrix::new(
            f7(),
            1,
            2,
            vec![
                ExactScalar::one(f7()),
                ExactScalar::one(FieldSpec::Rational),
            ],
        );
        assert_eq!(mixed, Err(LinalgError::FieldMismatch));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(-3i64..4, rows * cols)
            .prop_map(move |v| ExactMatrix::from_i64(FieldSpec::prime(7).unwrap(), rows, cols, &v))
    }

    proptest! {
        #[test]
        fn rank_bounds(m in small_matrix(4, 3)) {
            let r = m.rank();
            prop_assert!(r <= 3);
            let k = m.kernel_basis();
            prop_assert_eq!(k.cols(), 3 - r);
            prop_assert_eq!(k.rank(), 3 - r);
            prop_assert!(m.matmul(&k).unwrap().is_zero());
        }

        #[test]
        fn composite_rank_monotone(maps in proptest::collection::vec(
            proptest::collection::vec(-2i64..3, 9), 4)
        ) {
            let f = FieldSpec::prime(7).unwrap();
            let mats: Vec<_> = maps.iter()
                .map(|v| ExactMatrix::from_i64(f, 3, 3, v))
                .collect();
            let sys = DirectSystem::new(f, vec![3; 5], mats).unwrap();
            for p in 0..5 {
                for q in p..4 {
                    // Non-increasing in q for fixed p.
                    prop_assert!(
                        sys.composite_rank(p, q + 1).unwrap() <= sys.composite_rank(p, q).unwrap()
                    );
                }
            }
            for q in 0..5 {
                for p in 1..=q {
                    // Images grow along the system.
                    prop_assert!(
                        sys.composite_rank(p, q).unwrap() >= sys.composite_rank(p - 1, q).unwrap()
                    );
                }
            }
        }

        #[test]
        fn eventual_rank_is_stable(v in proptest::collection::vec(-2i64..3, 16)) {
            let f = FieldSpec::prime(7).unwrap();
            let t = ExactMatrix::from_i64(f, 4, 4, &v);
            let n = 4;
            prop_assert_eq!(t.pow(n).unwrap().rank(), t.pow(n + 1).unwrap().rank());
            prop_assert_eq!(eventual_rank(&t).unwrap(), t.pow(n).unwrap().rank());
        }
    }
}
