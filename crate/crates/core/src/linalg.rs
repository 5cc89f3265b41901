//! Dense matrices over [`CycNum`] and exact row reduction.

use std::fmt;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};

pub type Vector = Vec<CycNum>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![CycNum::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CycNum::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &CycNum) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Matrix unit `E_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = CycNum::one();
        m
    }

    pub fn diag(entries: &[CycNum]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CycNum) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| CycNum::from_int(rows[i][j]))
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<CycNum>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn block_diag(blocks: &[Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn flat(&self) -> &[CycNum] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<CycNum> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycNum]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = CycNum::zero();
                for (a, b) in self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    pub fn scale(&self, c: &CycNum) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&CycNum) -> CycNum) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> CycNum {
        let mut s = CycNum::zero();
        for i in 0..self.rows.min(self.cols) {
            s += self.get(i, i);
        }
        s
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vector> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut inv: Vec<Vector> = (0..n).map(|i| Matrix::identity(n).data[i * n..(i + 1) * n].to_vec()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(c, p);
            inv.swap(c, p);
            let s = a[c][c].inv()?;
            a[c] = a[c].iter().map(|x| x * &s).collect();
            inv[c] = inv[c].iter().map(|x| x * &s).collect();
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    let (ac, ic) = (a[c].clone(), inv[c].clone());
                    axpy(&mut a[r], &f, &ac);
                    axpy(&mut inv[r], &f, &ic);
                }
            }
        }
        Ok(Matrix { rows: n, cols: n, data: inv.into_iter().flatten().collect() })
    }

    pub fn det(&self) -> CycNum {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vector> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut d = CycNum::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return CycNum::zero() };
            if p != c {
                a.swap(c, p);
                d = -d;
            }
            d = &d * &a[c][c];
            let s = a[c][c].inv().expect("nonzero pivot");
            for r in c + 1..n {
                if !a[r][c].is_zero() {
                    let f = &a[r][c] * &s;
                    let ac = a[c].clone();
                    axpy(&mut a[r], &f, &ac);
                }
            }
        }
        d
    }

    /// `true` when `self = c * other` for some scalar `c`, returning `c`.
    pub fn proportional_to(&self, other: &Matrix) -> Option<CycNum> {
        let k = other.data.iter().position(|x| !x.is_zero())?;
        let c = self.data[k].div(&other.data[k]).ok()?;
        (other.scale(&c) == *self).then_some(c)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `y -= f * x`
pub fn axpy(y: &mut [CycNum], f: &CycNum, x: &[CycNum]) {
    for (a, b) in y.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = &*a - &(f * b);
        }
    }
}

pub fn is_zero_vec(v: &[CycNum]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Incrementally built subspace with membership and coordinate queries.
#[derive(Clone, Debug, Default)]
pub struct Span {
    len: usize,
    basis: Vec<Vector>,
    // echelon rows: pivot, row (pivot entry 1), combination of `basis` giving the row
    rows: Vec<(usize, Vector, Vector)>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Span { len, basis: Vec::new(), rows: Vec::new() }
    }

    pub fn from_vectors(len: usize, vs: impl IntoIterator<Item = Vector>) -> Self {
        let mut s = Self::new(len);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    fn reduce(&self, v: &[CycNum]) -> (Vector, Vector) {
        let mut r = v.to_vec();
        let mut coeffs = vec![CycNum::zero(); self.rows.len()];
        for (k, (p, row, _)) in self.rows.iter().enumerate() {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                axpy(&mut r, &f, row);
                coeffs[k] = f;
            }
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        is_zero_vec(&self.reduce(v).0)
    }

    /// Adds `v`; returns `false` (and keeps the span) when `v` is dependent.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.len, "span vector length");
        let (r, coeffs) = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let s = r[p].inv().expect("nonzero");
        let row: Vector = r.iter().map(|x| x * &s).collect();
        let k = self.basis.len();
        let mut combo = vec![CycNum::zero(); k + 1];
        combo[k] = CycNum::one();
        for (c, (_, _, cb)) in coeffs.iter().zip(&self.rows) {
            if !c.is_zero() {
                for (i, x) in cb.iter().enumerate() {
                    combo[i] = &combo[i] - &(c * x);
                }
            }
        }
        let combo = combo.iter().map(|x| x * &s).collect();
        for (_, _, cb) in self.rows.iter_mut() {
            cb.push(CycNum::zero());
        }
        self.rows.push((p, row, combo));
        self.basis.push(v);
        true
    }

    /// Coordinates of `v` with respect to the inserted basis.
    pub fn coordinates(&self, v: &[CycNum]) -> Option<Vector> {
        let (r, coeffs) = self.reduce(v);
        if !is_zero_vec(&r) {
            return None;
        }
        let mut out = vec![CycNum::zero(); self.basis.len()];
        for (c, (_, _, cb)) in coeffs.iter().zip(&self.rows) {
            if !c.is_zero() {
                for (i, x) in cb.iter().enumerate() {
                    out[i] = &out[i] + &(c * x);
                }
            }
        }
        Some(out)
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vector>, cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let s = rows[r][c].inv().expect("nonzero");
        rows[r] = rows[r].iter().map(|x| x * &s).collect();
        let pivot_row = rows[r].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                axpy(&mut rows[i], &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : A x = 0}` for `A` given by its rows.
pub fn nullspace_rows(rows: Vec<Vector>, cols: usize) -> Vec<Vector> {
    let (red, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![CycNum::zero(); cols];
            x[f] = CycNum::one();
            for (row, &p) in red.iter().zip(&pivots) {
                x[p] = -&row[f];
            }
            x
        })
        .collect()
}

pub fn nullspace(m: &Matrix) -> Vec<Vector> {
    let rows = (0..m.rows()).map(|i| m.flat()[i * m.cols()..(i + 1) * m.cols()].to_vec()).collect();
    nullspace_rows(rows, m.cols())
}

pub fn rank(m: &Matrix) -> usize {
    let rows = (0..m.rows()).map(|i| m.flat()[i * m.cols()..(i + 1) * m.cols()].to_vec()).collect();
    rref(rows, m.cols()).1.len()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[CycNum]) -> Option<Vector> {
    let n = m.cols();
    let rows: Vec<Vector> = (0..m.rows())
        .map(|i| {
            let mut r = m.flat()[i * n..(i + 1) * n].to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (red, pivots) = rref(rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![CycNum::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}
