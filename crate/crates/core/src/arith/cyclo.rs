//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! A [`Scalar`] is an element of `Q(ζ_m)` written in the power basis
//! `1, ζ, …, ζ^{φ(m)-1}` and reduced modulo the cyclotomic polynomial, so
//! coefficient comparison decides equality within a conductor. Operands of
//! different conductors are lifted to the lcm. Square roots of prime powers
//! live in `Q(ζ_{4p})` (or `Q(ζ_8)` for `p = 2`) through quadratic Gauss
//! sums, which makes `√q` an ordinary cyclotomic number with `√q·√q = q`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug)]
struct CycloField {
    m: u32,
    phi: usize,
    /// `ζ^k mod Φ_m` for `k in 0..m`, each of length `phi`.
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // monic denominator
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd];
        q[k] = c;
        for (j, &d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    let mut acc = num;
    for d in 1..m {
        if m.is_multiple_of(d) {
            acc = poly_div_exact(&acc, &cyclotomic_poly(d));
        }
    }
    acc
}

impl CycloField {
    fn new(m: u32) -> CycloField {
        let phi_poly = cyclotomic_poly(m);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi.max(1)];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by ζ
            let top = if phi > 0 { cur[phi - 1] } else { 0 };
            let mut next = vec![0i64; phi.max(1)];
            for j in (1..phi).rev() {
                next[j] = cur[j - 1];
            }
            if phi > 0 {
                for j in 0..phi {
                    next[j] -= top * phi_poly[j];
                }
            }
            if phi == 1 && m == 1 {
                next = vec![1];
            }
            cur = next;
        }
        CycloField { m, phi, powers }
    }
}

#[derive(Clone)]
pub struct Scalar {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

fn phi_of(m: u32) -> usize {
    let mut n = m as u64;
    let mut res = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            res -= res / d;
        }
        d += 1;
    }
    if n > 1 {
        res -= res / n;
    }
    res as usize
}

impl Scalar {
    fn field(m: u32) -> Arc<CycloField> {
        Arc::new(CycloField::new(m))
    }

    pub fn zero() -> Scalar {
        Scalar { field: Self::field(1), coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Scalar {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Scalar {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar { field: Self::field(1), coeffs: vec![r] }
    }

    /// `ζ_m^k`.
    pub fn zeta(m: u32, k: i64) -> Scalar {
        assert!(m > 0);
        let f = Self::field(m);
        let e = k.rem_euclid(m as i64) as usize;
        let coeffs = f.powers[e].iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        Scalar { field: f, coeffs }
    }

    /// The square root of the prime power `q`, realised by a Gauss sum.
    pub fn sqrt_q(q: u64) -> Result<Scalar> {
        let (p, r) = super::gf::prime_power(q)?;
        let p = p as i64;
        let pow = Scalar::from_int(p.pow(r / 2));
        if r % 2 == 0 {
            return Ok(pow);
        }
        let sqrt_p = if p == 2 {
            Scalar::zeta(8, 1).add(&Scalar::zeta(8, 7))
        } else {
            let mut g = Scalar::zero();
            for a in 1..p {
                let leg = legendre(a, p);
                g = g.add(&Scalar::zeta(p as u32, a).scale_int(leg));
            }
            if p % 4 == 1 {
                g
            } else {
                // g^2 = -p, so sqrt(p) = -i g
                g.mul(&Scalar::zeta(4, 3))
            }
        };
        Ok(sqrt_p.mul(&pow))
    }

    pub fn conductor(&self) -> u32 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn lift(&self, m: u32) -> Scalar {
        if m == self.field.m {
            return self.clone();
        }
        debug_assert_eq!(m % self.field.m, 0);
        let f = Self::field(m);
        self.lift_into(&f)
    }

    fn lift_into(&self, f: &Arc<CycloField>) -> Scalar {
        if Arc::ptr_eq(f, &self.field) || f.m == self.field.m {
            return Scalar { field: f.clone(), coeffs: self.coeffs.clone() };
        }
        let step = (f.m / self.field.m) as usize;
        let mut out = vec![Rational::zero(); f.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.powers[(j * step) % f.m as usize];
            for (k, &v) in row.iter().enumerate() {
                if v != 0 {
                    out[k] += c * Rational::from_integer(BigInt::from(v));
                }
            }
        }
        Scalar { field: f.clone(), coeffs: out }
    }

    fn align(&self, other: &Scalar) -> (Scalar, Scalar) {
        if self.field.m == other.field.m {
            return (self.clone(), other.clone());
        }
        let m = (self.field.m as u64).lcm(&(other.field.m as u64)) as u32;
        if m == self.field.m {
            return (self.clone(), other.lift_into(&self.field));
        }
        if m == other.field.m {
            return (self.lift_into(&other.field), other.clone());
        }
        let f = Self::field(m);
        (self.lift_into(&f), other.lift_into(&f))
    }

    /// Lifts into `Q(ζ_m)` (requires `conductor | m`).
    pub fn in_conductor(&self, m: u32) -> Result<Scalar> {
        if !m.is_multiple_of(self.field.m) {
            return Err(Error::Invalid("conductor does not divide target".into()));
        }
        Ok(self.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let (a, b) = self.align(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Scalar { field: a.field, coeffs }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Scalar {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let (a, b) = self.align(other);
        let f = &a.field;
        let m = f.m as usize;
        // accumulate coefficients of ζ^k, k mod m
        let mut raw: Vec<Rational> = vec![Rational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[(i + j) % m] += x * y;
            }
        }
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < f.phi {
                out[k] += c;
                continue;
            }
            for (t, &v) in f.powers[k].iter().enumerate() {
                if v != 0 {
                    out[t] += &c * Rational::from_integer(BigInt::from(v));
                }
            }
        }
        Scalar { field: a.field.clone(), coeffs: out }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let f = self.field.clone();
        let n = f.phi;
        if n == 1 {
            return Ok(Scalar { field: f, coeffs: vec![self.coeffs[0].recip()] });
        }
        // columns: self * ζ^k
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut cur = self.clone();
        let zeta = Scalar::zeta(f.m, 1).lift_into(&f);
        for _ in 0..n {
            cols.push(cur.coeffs.clone());
            cur = cur.mul(&zeta);
        }
        // solve sum_k x_k cols[k] = e_0
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational> = (0..n).map(|k| cols[k][r].clone()).collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let fac = a[r][col].clone();
                    for c in col..=n {
                        let t = &a[col][c] * &fac;
                        a[r][c] -= t;
                    }
                }
            }
        }
        Ok(Scalar { field: f, coeffs: a.into_iter().map(|row| row[n].clone()).collect() })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The Galois automorphism `ζ_m ↦ ζ_m^k` (`gcd(k, m) = 1`).
    pub fn galois(&self, k: i64) -> Result<Scalar> {
        let m = self.field.m as i64;
        if (k.rem_euclid(m.max(1)) as u64).gcd(&(m as u64)) != 1 && m > 1 {
            return Err(Error::Invalid("Galois exponent not coprime to conductor".into()));
        }
        let mut out = Scalar::zero().lift_into(&self.field);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((j as i64) * k).rem_euclid(m);
            let row = &self.field.powers[e as usize];
            for (t, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.coeffs[t] += c * Rational::from_integer(BigInt::from(v));
                }
            }
        }
        Ok(out)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Scalar {
        self.galois(-1).expect("-1 is a unit")
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        let f = &self.field;
        // an element is rational iff it is fixed by all Galois automorphisms;
        // cheaper: reduce to minimal conductor by checking the lift of its constant
        let c = Scalar::from_rational(self.coeffs[0].clone());
        let phi = phi_of(f.m);
        if phi == 1 {
            return Some(self.coeffs[0].clone());
        }
        if (0..f.m as i64).filter(|k| (*k as u64).gcd(&(f.m as u64)) == 1).all(|k| self.galois(k).unwrap() == *self)
        {
            // trace / φ(m)
            let mut tr = Scalar::zero();
            for k in (0..f.m as i64).filter(|k| (*k as u64).gcd(&(f.m as u64)) == 1) {
                tr = tr.add(&self.galois(k).unwrap());
            }
            let _ = c;
            return Some(tr.coeffs[0].clone() / Rational::from_integer(BigInt::from(phi as i64)));
        }
        None
    }

    /// Coefficient list as `(numerator, denominator)` strings, for export.
    pub fn coefficient_strings(&self) -> Vec<(String, String)> {
        self.coeffs.iter().map(|c| (alloc::format!("{}", c.numer()), alloc::format!("{}", c.denom()))).collect()
    }
}

fn legendre(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = (p - 1) / 2;
    let mut acc = 1i64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == p - 1 {
        r = -1;
    } else if acc == 0 {
        r = 0;
    }
    r
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}
impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            if j == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.field.m, j)?;
            } else {
                write!(f, "{a}*z{}^{}", self.field.m, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta4_squared() {
        let i = Scalar::zeta(4, 1);
        assert_eq!(i.mul(&i), Scalar::from_int(-1));
    }

    #[test]
    fn cube_root_relation() {
        let s = Scalar::one().add(&Scalar::zeta(3, 1)).add(&Scalar::zeta(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn sqrt_q_squares() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 27] {
            let r = Scalar::sqrt_q(q).unwrap();
            assert_eq!(r.mul(&r), Scalar::from_int(q as i64), "q = {q}");
        }
    }

    #[test]
    fn mixed_conductors_lift() {
        let a = Scalar::zeta(3, 1);
        let b = Scalar::zeta(4, 1);
        let c = a.mul(&b);
        assert_eq!(c.conductor(), 12);
        assert_eq!(c, Scalar::zeta(12, 4 + 3));
    }

    #[test]
    fn inverse_and_errors() {
        let x = Scalar::from_int(2).add(&Scalar::zeta(5, 2));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), Scalar::one());
        assert_eq!(Scalar::zero().inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn galois_and_rationality() {
        let z = Scalar::zeta(7, 1);
        let tr: Scalar = (1..7).fold(Scalar::zero(), |acc, k| acc.add(&z.galois(k).unwrap()));
        assert_eq!(tr, Scalar::from_int(-1));
        assert_eq!(tr.to_rational(), Some(Rational::from_integer((-1).into())));
        assert_eq!(z.to_rational(), None);
        assert_eq!(z.conj().mul(&z), Scalar::one());
    }
}
