//! Laurent polynomials and matrices of Laurent polynomials over a finite
//! field, the Cartan decomposition over `k[[t]]`, and row reduction over
//! `k[z]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::gfpoly::{self, Poly};
use crate::arith::Gf;
use crate::error::{Error, Result};
use crate::linalg::gfmat;

/// `Σ c_j t^{low + j}`; zero is `low = 0, c = []`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPoly {
    pub low: i64,
    pub c: Poly,
}

impl LPoly {
    pub fn zero() -> LPoly {
        LPoly { low: 0, c: Vec::new() }
    }

    pub fn constant(v: u32) -> LPoly {
        LPoly::monomial(v, 0)
    }

    pub fn monomial(v: u32, e: i64) -> LPoly {
        if v == 0 {
            LPoly::zero()
        } else {
            LPoly { low: e, c: vec![v] }
        }
    }

    pub fn from_coeffs(low: i64, c: Poly) -> LPoly {
        let mut p = LPoly { low, c };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&x| x == 0).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Lowest exponent (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.c.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> u32 {
        let k = e - self.low;
        if k < 0 {
            0
        } else {
            *self.c.get(k as usize).unwrap_or(&0)
        }
    }

    pub fn add(&self, f: &Gf, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.degree().unwrap().max(o.degree().unwrap());
        let c = (low..=high).map(|e| f.add(self.coeff(e), o.coeff(e))).collect();
        LPoly::from_coeffs(low, c)
    }

    pub fn neg(&self, f: &Gf) -> LPoly {
        LPoly { low: self.low, c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn sub(&self, f: &Gf, o: &LPoly) -> LPoly {
        self.add(f, &o.neg(f))
    }

    pub fn mul(&self, f: &Gf, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        LPoly::from_coeffs(self.low + o.low, gfpoly::mul(f, &self.c, &o.c))
    }

    pub fn scale(&self, f: &Gf, s: u32) -> LPoly {
        LPoly::from_coeffs(self.low, self.c.iter().map(|&x| f.mul(x, s)).collect())
    }

    pub fn shift(&self, e: i64) -> LPoly {
        if self.is_zero() {
            return self.clone();
        }
        LPoly { low: self.low + e, c: self.c.clone() }
    }

    /// Substitutes `t ↦ s / t` (for `s ∈ k^×`).
    pub fn invert_variable(&self, f: &Gf, s: u32) -> LPoly {
        if self.is_zero() {
            return self.clone();
        }
        let high = self.degree().unwrap();
        // t^e -> s^e t^{-e}
        let c: Vec<u32> = (0..self.c.len())
            .map(|k| {
                let e = high - k as i64;
                let se = if e >= 0 { f.pow(s, e as u64) } else { f.pow(f.inv(s).unwrap(), (-e) as u64) };
                f.mul(self.coeff(e), se)
            })
            .collect();
        LPoly::from_coeffs(-high, c)
    }

    /// Value at `t = x` for a Laurent polynomial and `x ≠ 0` in `f`.
    pub fn eval(&self, f: &Gf, x: u32) -> u32 {
        let v = gfpoly::eval(f, &self.c, x);
        if self.low >= 0 {
            f.mul(v, f.pow(x, self.low as u64))
        } else {
            f.mul(v, f.pow(f.inv(x).unwrap(), (-self.low) as u64))
        }
    }
}

/// An `n x n` matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LMat {
    pub n: usize,
    pub e: Vec<LPoly>,
}

impl LMat {
    pub fn identity(n: usize) -> LMat {
        LMat::from_const(&gfmat::identity(n), n)
    }

    pub fn from_const(m: &[u32], n: usize) -> LMat {
        LMat { n, e: m.iter().map(|&x| LPoly::constant(x)).collect() }
    }

    /// `diag(t^{λ_1}, ..., t^{λ_n})`.
    pub fn diag_power(lambda: &[i64]) -> LMat {
        let n = lambda.len();
        let mut e = vec![LPoly::zero(); n * n];
        for (i, &l) in lambda.iter().enumerate() {
            e[i * n + i] = LPoly::monomial(1, l);
        }
        LMat { n, e }
    }

    pub fn get(&self, i: usize, j: usize) -> &LPoly {
        &self.e[i * self.n + j]
    }

    pub fn mul(&self, f: &Gf, o: &LMat) -> LMat {
        let n = self.n;
        let mut e = vec![LPoly::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.e[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.e[k * n + j];
                    if !b.is_zero() {
                        e[i * n + j] = e[i * n + j].add(f, &a.mul(f, b));
                    }
                }
            }
        }
        LMat { n, e }
    }

    pub fn map(&self, g: impl Fn(&LPoly) -> LPoly) -> LMat {
        LMat { n: self.n, e: self.e.iter().map(g).collect() }
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.e.iter().filter_map(|p| p.valuation()).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.e.iter().filter_map(|p| p.degree()).max()
    }

    pub fn shift(&self, s: i64) -> LMat {
        self.map(|p| p.shift(s))
    }

    /// Coefficient matrix of `t^e`.
    pub fn coeff_matrix(&self, e: i64) -> Vec<u32> {
        self.e.iter().map(|p| p.coeff(e)).collect()
    }

    /// Determinant (Leibniz expansion; intended for small `n`).
    pub fn det(&self, f: &Gf) -> LPoly {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = LPoly::zero();
        permute(&mut perm, 0, &mut |p: &[usize], sign: bool| {
            let mut term = LPoly::constant(1);
            for (i, &j) in p.iter().enumerate() {
                term = term.mul(f, self.get(i, j));
                if term.is_zero() {
                    return;
                }
            }
            total = if sign { total.sub(f, &term) } else { total.add(f, &term) };
        });
        total
    }

    /// Inverse when the determinant is a monomial `c t^d`.
    pub fn inverse(&self, f: &Gf) -> Result<LMat> {
        let d = self.det(f);
        if d.c.len() != 1 {
            return Err(Error::Singular);
        }
        let dinv = LPoly::monomial(f.inv(d.c[0])?, -d.low);
        let n = self.n;
        let mut e = vec![LPoly::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                // cofactor C_{ji}
                let minor = self.minor(j, i);
                let mut c = minor.det(f);
                if (i + j) % 2 == 1 {
                    c = c.neg(f);
                }
                e[i * n + j] = c.mul(f, &dinv);
            }
        }
        Ok(LMat { n, e })
    }

    fn minor(&self, r: usize, c: usize) -> LMat {
        let n = self.n;
        if n == 1 {
            return LMat { n: 0, e: Vec::new() };
        }
        let mut e = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                e.push(self.get(i, j).clone());
            }
        }
        LMat { n: n - 1, e }
    }

    /// Substitutes `t ↦ s/t` entrywise.
    pub fn invert_variable(&self, f: &Gf, s: u32) -> LMat {
        self.map(|p| p.invert_variable(f, s))
    }

    pub fn is_constant(&self) -> bool {
        self.e.iter().all(|p| p.is_zero() || (p.low == 0 && p.c.len() == 1))
    }
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], bool)) {
    // Heap-free recursive generation with parity tracking by inversion count.
    if k == p.len() {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        visit(p, inv % 2 == 1);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Truncated power series arithmetic modulo `t^m`.
mod series {
    use super::*;

    pub fn mul(f: &Gf, a: &[u32], b: &[u32], m: usize) -> Vec<u32> {
        let mut out = vec![0u32; m];
        for (i, &x) in a.iter().enumerate().take(m) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(m - i) {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        out
    }

    pub fn inv(f: &Gf, a: &[u32], m: usize) -> Vec<u32> {
        let mut out = vec![0u32; m];
        let a0inv = f.inv(a[0]).expect("unit");
        out[0] = a0inv;
        for k in 1..m {
            let mut s = 0u32;
            for j in 1..=k.min(a.len() - 1) {
                s = f.add(s, f.mul(a[j], out[k - j]));
            }
            out[k] = f.neg(f.mul(s, a0inv));
        }
        out
    }

    pub fn valuation(a: &[u32]) -> Option<usize> {
        a.iter().position(|&x| x != 0)
    }
}

/// `κ = a · t^λ · b` with `a, b ∈ GL_n(k[[t]])`, `λ` decreasing; only the
/// reductions `a(0)`, `b(0)` are recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cartan {
    pub lambda: Vec<i64>,
    pub a0: Vec<u32>,
    pub b0: Vec<u32>,
}

/// Cartan decomposition of an invertible Laurent polynomial matrix in `t`,
/// computed by minimal-valuation pivoting on truncated power series.
pub fn cartan(f: &Gf, kappa: &LMat) -> Result<Cartan> {
    let n = kappa.n;
    let det = kappa.det(f);
    let Some(vdet) = det.valuation() else { return Err(Error::Singular) };
    let s = -kappa.min_valuation().ok_or(Error::Singular)?;
    // t^s κ is integral with determinant valuation vdet + n s
    let e = vdet + n as i64 * s;
    let m = (e + 1) as usize;
    cartan_at_precision(f, kappa, s, m)
}

/// As [`cartan`], with explicit truncation `t^m` of the shifted matrix.
pub fn cartan_at_precision(f: &Gf, kappa: &LMat, s: i64, m: usize) -> Result<Cartan> {
    let n = kappa.n;
    let mut sm: Vec<Vec<u32>> = kappa
        .e
        .iter()
        .map(|p| (0..m as i64).map(|k| p.coeff(k - s)).collect())
        .collect();
    let mut lbar = gfmat::identity(n);
    let mut rbar = gfmat::identity(n);
    let mut vals = vec![0i64; n];
    let mut units = vec![0u32; n];
    for step in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in step..n {
            for j in step..n {
                if let Some(v) = series::valuation(&sm[i * n + j]) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, i, j)) = best else { return Err(Error::InsufficientPrecision) };
        if i != step {
            for c in 0..n {
                sm.swap(i * n + c, step * n + c);
                lbar.swap(i * n + c, step * n + c);
            }
        }
        if j != step {
            for r in 0..n {
                sm.swap(r * n + j, r * n + step);
                rbar.swap(r * n + j, r * n + step);
            }
        }
        let piv = sm[step * n + step].clone();
        let unit: Vec<u32> = piv[v..].to_vec();
        let uinv = series::inv(f, &unit, m - v);
        vals[step] = v as i64;
        units[step] = unit[0];
        for r in step + 1..n {
            let x = &sm[r * n + step];
            if series::valuation(x).is_none() {
                continue;
            }
            let fac = series::mul(f, &x[v..], &uinv, m - v);
            let f0 = fac[0];
            for c in step..n {
                let prod = series::mul(f, &fac, &sm[step * n + c], m);
                let row = &mut sm[r * n + c];
                for k in 0..m {
                    row[k] = f.sub(row[k], prod[k]);
                }
            }
            if f0 != 0 {
                for c in 0..n {
                    let t = f.mul(f0, lbar[step * n + c]);
                    lbar[r * n + c] = f.sub(lbar[r * n + c], t);
                }
            }
        }
        for c in step + 1..n {
            let x = sm[step * n + c].clone();
            if series::valuation(&x).is_none() {
                continue;
            }
            let fac = series::mul(f, &x[v..], &uinv, m - v);
            let f0 = fac[0];
            // only row `step` has a nonzero entry in column `step` now
            let prod = series::mul(f, &sm[step * n + step], &fac, m);
            let entry = &mut sm[step * n + c];
            for k in 0..m {
                entry[k] = f.sub(entry[k], prod[k]);
            }
            if f0 != 0 {
                for r in 0..n {
                    let t = f.mul(rbar[r * n + step], f0);
                    rbar[r * n + c] = f.sub(rbar[r * n + c], t);
                }
            }
        }
    }
    // sort valuations decreasingly (stable)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].cmp(&vals[a]));
    let lambda: Vec<i64> = order.iter().map(|&k| vals[k] - s).collect();
    // Q[k][order[k]] = 1
    let mut q = vec![0u32; n * n];
    for (k, &o) in order.iter().enumerate() {
        q[k * n + o] = 1;
    }
    let qinv = gfmat::inverse(f, &q, n)?;
    let mut du = vec![0u32; n * n];
    for i in 0..n {
        du[i * n + i] = units[i];
    }
    let linv = gfmat::inverse(f, &lbar, n)?;
    let rinv = gfmat::inverse(f, &rbar, n)?;
    let a0 = gfmat::mul(f, &gfmat::mul(f, &linv, &du, n), &qinv, n);
    let b0 = gfmat::mul(f, &q, &rinv, n);
    Ok(Cartan { lambda, a0, b0 })
}

/// Row reduction over `k[z]`: for a polynomial matrix `p` with determinant
/// `c z^e`, returns `(u_inv, r, d)` with `p = u_inv · r`, `u_inv`
/// unimodular and `r` row-reduced with row degrees `d` (leading row
/// coefficient matrix invertible).
pub fn row_reduce(f: &Gf, p: &LMat) -> Result<(LMat, LMat, Vec<i64>)> {
    let n = p.n;
    if p.min_valuation().unwrap_or(0) < 0 {
        return Err(Error::Invalid("row reduction needs a polynomial matrix".into()));
    }
    let mut r = p.clone();
    let mut uinv = LMat::identity(n);
    loop {
        let degs: Vec<i64> = (0..n)
            .map(|i| (0..n).filter_map(|j| r.get(i, j).degree()).max().unwrap_or(i64::MIN))
            .collect();
        if degs.contains(&i64::MIN) {
            return Err(Error::Singular);
        }
        // leading row coefficient matrix
        let lc: Vec<u32> = (0..n * n).map(|k| r.e[k].coeff(degs[k / n])).collect();
        // left kernel: x^T lc = 0  <=> lc^T x = 0
        let mut lct = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                lct[j * n + i] = lc[i * n + j];
            }
        }
        let ker = gfmat::nullspace(f, &lct, n, n);
        let Some(x) = ker.first() else {
            return Ok((uinv, r, degs));
        };
        // row to replace: maximal degree among support of x
        let piv = (0..n).filter(|&i| x[i] != 0).max_by_key(|&i| (degs[i], core::cmp::Reverse(i))).unwrap();
        let dp = degs[piv];
        let cp = x[piv];
        let mut new_row: Vec<LPoly> = vec![LPoly::zero(); n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let coef = LPoly::monomial(x[i], dp - degs[i]);
            for j in 0..n {
                new_row[j] = new_row[j].add(f, &coef.mul(f, r.get(i, j)));
            }
        }
        for j in 0..n {
            r.e[piv * n + j] = new_row[j].clone();
        }
        // uinv ← uinv · E^{-1}; E^{-1} row piv: -x_i/c z^{dp-d_i} (i≠piv), 1/c at piv
        let cinv = f.inv(cp)?;
        let mut new_uinv = uinv.clone();
        for row in 0..n {
            // column piv of uinv·E^{-1} = uinv[:,piv] * (1/c)
            let base = uinv.get(row, piv).scale(f, cinv);
            new_uinv.e[row * n + piv] = base.clone();
            for i in 0..n {
                if i == piv || x[i] == 0 {
                    continue;
                }
                let coef = LPoly::monomial(f.neg(f.mul(x[i], cinv)), dp - degs[i]);
                let add = uinv.get(row, piv).mul(f, &coef);
                new_uinv.e[row * n + i] = new_uinv.get(row, i).add(f, &add);
            }
        }
        uinv = new_uinv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Gf {
        Gf::prime(3).unwrap()
    }

    #[test]
    fn laurent_arithmetic() {
        let f = f3();
        let a = LPoly::from_coeffs(-1, vec![1, 2]); // t^-1 + 2
        let b = LPoly::from_coeffs(0, vec![1, 1]); // 1 + t
        let p = a.mul(&f, &b); // t^-1 + 1 + 2... = t^-1 + 3 + 2t -> t^-1 + 0 + 2t
        assert_eq!(p, LPoly::from_coeffs(-1, vec![1, 0, 2]));
        assert_eq!(p.sub(&f, &p), LPoly::zero());
        assert_eq!(a.invert_variable(&f, 1), LPoly::from_coeffs(0, vec![2, 1]));
    }

    #[test]
    fn cartan_diagonal_and_swap() {
        let f = f3();
        let k = LMat::diag_power(&[0, 2]);
        let c = cartan(&f, &k).unwrap();
        assert_eq!(c.lambda, vec![2, 0]);
        // reassemble a0 t^λ b0 up to the relevant reduction: a0 and b0 are invertible
        assert_ne!(gfmat::det(&f, &c.a0, 2), 0);
        assert_ne!(gfmat::det(&f, &c.b0, 2), 0);
        let mut m = LMat::identity(2);
        m.e[1] = LPoly::monomial(1, -1); // [[1, t^-1], [0, 1]] has type (1,-1)
        m.e[3] = LPoly::constant(1);
        m.e[0] = LPoly::constant(1);
        let c = cartan(&f, &m).unwrap();
        assert_eq!(c.lambda, vec![1, -1]);
    }

    #[test]
    fn inverse_of_unimodular() {
        let f = f3();
        let mut m = LMat::identity(2);
        m.e[1] = LPoly::from_coeffs(0, vec![1, 2, 1]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), LMat::identity(2));
    }

    #[test]
    fn row_reduce_reassembles() {
        let f = f3();
        // [[1 + z, z^2], [1, z]] has det z + z^2 - z^2 = z
        let p = LMat {
            n: 2,
            e: vec![
                LPoly::from_coeffs(0, vec![1, 1]),
                LPoly::from_coeffs(2, vec![1]),
                LPoly::constant(1),
                LPoly::from_coeffs(1, vec![1]),
            ],
        };
        let (uinv, r, d) = row_reduce(&f, &p).unwrap();
        assert_eq!(uinv.mul(&f, &r), p);
        assert_eq!(d.iter().sum::<i64>(), 1);
        assert_eq!(uinv.det(&f).degree(), Some(0));
    }
}
