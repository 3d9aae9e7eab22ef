//! Dense exact linear algebra over a generic field, plus a small set of
//! routines for matrices over a table-driven finite field.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{Gf, Scalar};
use crate::error::{Error, Result};

/// Field operations needed by Gaussian elimination. `zero_like`/`one_like`
/// take a witness so that context-carrying fields (e.g. `Z/p`) work.
pub trait Field: Clone + PartialEq + core::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.recip())
        }
    }
}

impl Field for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
}

/// Residues modulo a prime `p < 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Zp {
    pub v: u64,
    pub p: u64,
}

impl Zp {
    pub fn new(v: i64, p: u64) -> Zp {
        Zp { v: v.rem_euclid(p as i64) as u64, p }
    }
    pub fn from_bigint(v: &BigInt, p: u64) -> Zp {
        let r = v % BigInt::from(p);
        let r: i64 = (&r).try_into().unwrap();
        Zp::new(r, p)
    }
    pub fn pow(&self, mut e: u64) -> Zp {
        let mut acc = Zp { v: 1 % self.p, p: self.p };
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }
}

impl Field for Zp {
    fn zero_like(&self) -> Self {
        Zp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Zp { v: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Zp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Zp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Zp { v: self.v * o.v % self.p, p: self.p }
    }
    fn neg(&self) -> Self {
        Zp { v: (self.p - self.v) % self.p, p: self.p }
    }
    fn inv(&self) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.p - 2))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn filled(rows: usize, cols: usize, v: F) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn zeros(rows: usize, cols: usize, proto: &F) -> Self {
        Self::filled(rows, cols, proto.zero_like())
    }

    pub fn identity(n: usize, proto: &F) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m.data[i * n + i] = proto.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Shape(alloc::format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let proto = self.data.first().or(o.data.first());
        let Some(proto) = proto else {
            return Ok(Matrix { rows: self.rows, cols: o.cols, data: Vec::new() });
        };
        let mut out = Self::zeros(self.rows, o.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape("addition of different shapes".into()));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape("subtraction of different shapes".into()));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> Option<F> {
        let proto = self.data.first()?;
        let mut t = proto.zero_like();
        for i in 0..self.rows.min(self.cols) {
            t = t.add(self.get(i, i));
        }
        Some(t)
    }

    /// Reduced row echelon form in place; returns pivot columns. Pivots are
    /// the first nonzero entry in row order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = self.get(r, j).mul(&f);
                    if !t.is_zero() {
                        let v = self.get(i, j).sub(&t);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let proto = self.data[0].clone();
        let mut aug = Self::zeros(n, 2 * n, &proto);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, proto.one_like());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(n, n, &proto);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Some solution `x` of `self · x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::Shape("right-hand side length".into()));
        }
        let Some(proto) = self.data.first().or(b.first()).cloned() else {
            return Ok(Some(Vec::new()));
        };
        let mut aug = Self::zeros(self.rows, self.cols + 1, &proto);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![proto.zero_like(); self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// A basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let Some(proto) = self.data.first().cloned() else {
            return Vec::new();
        };
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![proto.zero_like(); self.cols];
                v[f] = proto.one_like();
                for (r, &c) in piv.iter().enumerate() {
                    v[c] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rank of an integer matrix over `Q`, via reduction modulo a large prime
/// (a lower bound that is exact unless the prime divides a minor), confirmed
/// by exact rational elimination when not full.
pub fn integer_rank(rows: usize, cols: usize, entries: &[i64]) -> usize {
    let p = 2_147_483_629u64;
    let m = Matrix { rows, cols, data: entries.iter().map(|&v| Zp::new(v, p)).collect() };
    let r = m.rank();
    if r == rows.min(cols) {
        return r;
    }
    let q = Matrix { rows, cols, data: entries.iter().map(|&v| rational(v)).collect() };
    q.rank()
}

/// Square matrices over a [`Gf`], stored row-major as `u32` indices.
pub mod gfmat {
    use super::*;

    pub fn identity(n: usize) -> Vec<u32> {
        let mut m = vec![0u32; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        m
    }

    pub fn mul(f: &Gf, a: &[u32], b: &[u32], n: usize) -> Vec<u32> {
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b[k * n + j];
                    if y != 0 {
                        out[i * n + j] = f.add(out[i * n + j], f.mul(x, y));
                    }
                }
            }
        }
        out
    }

    /// Rectangular product `(r x m) · (m x c)`.
    pub fn mul_rect(f: &Gf, a: &[u32], b: &[u32], r: usize, m: usize, c: usize) -> Vec<u32> {
        let mut out = vec![0u32; r * c];
        for i in 0..r {
            for k in 0..m {
                let x = a[i * m + k];
                if x == 0 {
                    continue;
                }
                for j in 0..c {
                    let y = b[k * c + j];
                    if y != 0 {
                        out[i * c + j] = f.add(out[i * c + j], f.mul(x, y));
                    }
                }
            }
        }
        out
    }

    /// Row-reduces `m` (r x c) in place to reduced echelon form; returns pivots.
    pub fn rref(f: &Gf, m: &mut [u32], r: usize, c: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| m[i * c + col] != 0) else { continue };
            if p != row {
                for j in 0..c {
                    m.swap(p * c + j, row * c + j);
                }
            }
            let inv = f.inv(m[row * c + col]).unwrap();
            for j in col..c {
                m[row * c + j] = f.mul(m[row * c + j], inv);
            }
            for i in 0..r {
                if i == row {
                    continue;
                }
                let fac = m[i * c + col];
                if fac == 0 {
                    continue;
                }
                for j in col..c {
                    let t = f.mul(fac, m[row * c + j]);
                    m[i * c + j] = f.sub(m[i * c + j], t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(f: &Gf, m: &[u32], r: usize, c: usize) -> usize {
        let mut w = m.to_vec();
        rref(f, &mut w, r, c).len()
    }

    pub fn det(f: &Gf, m: &[u32], n: usize) -> u32 {
        let mut w = m.to_vec();
        let mut d = 1u32;
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| w[i * n + col] != 0) else { return 0 };
            if p != col {
                for j in 0..n {
                    w.swap(p * n + j, col * n + j);
                }
                d = f.neg(d);
            }
            let pv = w[col * n + col];
            d = f.mul(d, pv);
            let inv = f.inv(pv).unwrap();
            for i in col + 1..n {
                let fac = f.mul(w[i * n + col], inv);
                if fac == 0 {
                    continue;
                }
                for j in col..n {
                    let t = f.mul(fac, w[col * n + j]);
                    w[i * n + j] = f.sub(w[i * n + j], t);
                }
            }
        }
        d
    }

    pub fn inverse(f: &Gf, m: &[u32], n: usize) -> Result<Vec<u32>> {
        let mut aug = vec![0u32; n * 2 * n];
        for i in 0..n {
            for j in 0..n {
                aug[i * 2 * n + j] = m[i * n + j];
            }
            aug[i * 2 * n + n + i] = 1;
        }
        let piv = rref(f, &mut aug, n, 2 * n);
        if piv.len() < n || (n > 0 && piv[n - 1] >= n) {
            return Err(Error::Singular);
        }
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = aug[i * 2 * n + n + j];
            }
        }
        Ok(out)
    }

    /// Basis of the right kernel of the `r x c` matrix `m`.
    pub fn nullspace(f: &Gf, m: &[u32], r: usize, c: usize) -> Vec<Vec<u32>> {
        let mut w = m.to_vec();
        let piv = rref(f, &mut w, r, c);
        (0..c)
            .filter(|j| !piv.contains(j))
            .map(|fc| {
                let mut v = vec![0u32; c];
                v[fc] = 1;
                for (row, &pc) in piv.iter().enumerate() {
                    v[pc] = f.neg(w[row * c + fc]);
                }
                v
            })
            .collect()
    }

    /// Some solution of `m · x = b` (`m` is `r x c`).
    pub fn solve(f: &Gf, m: &[u32], b: &[u32], r: usize, c: usize) -> Option<Vec<u32>> {
        let mut aug = vec![0u32; r * (c + 1)];
        for i in 0..r {
            aug[i * (c + 1)..i * (c + 1) + c].copy_from_slice(&m[i * c..(i + 1) * c]);
            aug[i * (c + 1) + c] = b[i];
        }
        let piv = rref(f, &mut aug, r, c + 1);
        if piv.last() == Some(&c) {
            return None;
        }
        let mut x = vec![0u32; c];
        for (row, &pc) in piv.iter().enumerate() {
            x[pc] = aug[row * (c + 1) + c];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_inverse_roundtrip() {
        let m = Matrix::from_rows(vec![
            vec![rational(2), rational(1), rational(0)],
            vec![rational(1), rational(3), rational(1)],
            vec![rational(0), rational(1), rational(4)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3, &rational(0)));
    }

    #[test]
    fn nullspace_and_rank() {
        let m = Matrix::from_rows(vec![vec![rational(1), rational(2)], vec![rational(2), rational(4)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let x = Matrix::from_rows(ns.iter().map(|v| vec![v[0].clone()]).chain(ns.iter().map(|v| vec![v[1].clone()])).collect()).unwrap();
        assert!(m.mul(&x).unwrap().is_zero());
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn integer_rank_detects_dependency() {
        assert_eq!(integer_rank(2, 2, &[1, 2, 2, 4]), 1);
        assert_eq!(integer_rank(2, 3, &[1, 0, 1, 0, 1, 1]), 2);
    }

    #[test]
    fn gf_matrix_ops() {
        let f = Gf::prime(3).unwrap();
        let m = vec![1, 2, 0, 1];
        let inv = gfmat::inverse(&f, &m, 2).unwrap();
        assert_eq!(gfmat::mul(&f, &m, &inv, 2), gfmat::identity(2));
        assert_eq!(gfmat::det(&f, &m, 2), 1);
        assert_eq!(gfmat::rank(&f, &[1, 1, 1, 1], 2, 2), 1);
        assert_eq!(gfmat::nullspace(&f, &[1, 1, 1, 1], 2, 2), vec![vec![2, 1]]);
    }
}
