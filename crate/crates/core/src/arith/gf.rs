//! Table-driven arithmetic in small finite fields.
//!
//! Elements are `u32` indices. An element of a field of size `p^d` is
//! encoded by its base-`p` digits, so index `0` is zero, `1` is one, and
//! addition is digit-wise modulo `p`. For an extension `K[X]/(f)` over a
//! field `K` of size `s`, the index is `sum c_j s^j` with `c_j` the
//! coefficient indices, which keeps the base-`p` digit encoding intact.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    dim: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_tab: Option<Vec<u32>>,
}

const ADD_TABLE_LIMIT: u32 = 256;

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let d = smallest_prime_factor(n);
        if out.last() != Some(&d) {
            out.push(d);
        }
        n /= d;
    }
    out
}

/// Splits `q = p^r`, rejecting anything that is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::BadFieldSize(q));
    }
    let p = smallest_prime_factor(q);
    let mut r = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    if m != 1 || q > u32::MAX as u64 {
        return Err(Error::BadFieldSize(q));
    }
    Ok((p as u32, r))
}

impl Gf {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Gf> {
        let (pp, r) = prime_power(p as u64)?;
        if r != 1 || pp != p {
            return Err(Error::BadFieldSize(p as u64));
        }
        let mulf = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
        Ok(Self::from_mul(p, 1, p, mulf))
    }

    /// `base[X]/(modulus)` with `modulus` monic and irreducible over `base`.
    /// Coefficients are listed from the constant term up.
    pub fn extension(base: &Gf, modulus: &[u32]) -> Result<Gf> {
        let deg = modulus.len().saturating_sub(1);
        if deg == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::Invalid("modulus must be monic of positive degree".into()));
        }
        if !super::gfpoly::is_irreducible(base, modulus) {
            return Err(Error::Invalid("modulus is not irreducible".into()));
        }
        let s = base.size as u64;
        let size = s.checked_pow(deg as u32).filter(|&n| n <= (1 << 26)).ok_or(Error::BadFieldSize(s))?;
        let size = size as u32;
        let digits = |mut x: u32| {
            let mut c = vec![0u32; deg];
            for cj in c.iter_mut() {
                *cj = x % base.size;
                x /= base.size;
            }
            c
        };
        let undigits = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * base.size + d);
        let mulf = |a: u32, b: u32| {
            let pa = digits(a);
            let pb = digits(b);
            let prod = super::gfpoly::mul(base, &pa, &pb);
            let (_, r) = super::gfpoly::divrem(base, &prod, modulus);
            let mut r = r;
            r.resize(deg, 0);
            undigits(&r)
        };
        Ok(Self::from_mul(base.p, base.dim * deg as u32, size, mulf))
    }

    fn from_mul(p: u32, dim: u32, size: u32, mulf: impl Fn(u32, u32) -> u32) -> Gf {
        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let pow = |mut b: u32, mut e: u64| {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulf(acc, b);
                }
                b = mulf(b, b);
                e >>= 1;
            }
            acc
        };
        let gen = (1..size)
            .find(|&c| factors.iter().all(|&l| pow(c, order / l) != 1))
            .expect("finite field has a primitive element");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for e in 0..order as u32 {
            exp.push(x);
            log[x as usize] = e;
            x = mulf(x, gen);
        }
        let mut f = Gf { p, dim, size, exp, log, add_tab: None };
        if size <= ADD_TABLE_LIMIT {
            let mut tab = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    tab[(a * size + b) as usize] = f.add_digits(a, b);
                }
            }
            f.add_tab = Some(tab);
        }
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    /// Degree over the prime field.
    pub fn prime_degree(&self) -> u32 {
        self.dim
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn order(&self) -> u32 {
        self.size - 1
    }
    /// The primitive element with smallest index.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }
    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.size
    }
    pub fn units(&self) -> core::ops::Range<u32> {
        1..self.size
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_tab {
            Some(t) => t[(a * self.size + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, mut a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let o = self.order();
        let e = (self.log[a as usize] + self.log[b as usize]) % o;
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let o = self.order();
        Ok(self.exp[((o - self.log[a as usize]) % o) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let o = self.order() as u64;
        let l = (self.log[a as usize] as u64 * (e % o)) % o;
        self.exp[l as usize]
    }

    /// Discrete logarithm to the base [`Gf::generator`].
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, e: u64) -> u32 {
        self.exp[(e % self.order() as u64) as usize]
    }

    /// Embeds an integer through the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        (n.rem_euclid(self.p as i64)) as u32
    }

    /// For elements of the prime subfield, the integer representative in `0..p`.
    pub fn prime_value(&self, a: u32) -> Option<u32> {
        (a < self.p).then_some(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Gf::prime(7).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.add(4, 5), 2);
        assert_eq!(f.neg(3), 4);
        assert!(f.inv(0).is_err());
        assert_eq!(f.generator(), 3);
    }

    #[test]
    fn f4_extension() {
        let f2 = Gf::prime(2).unwrap();
        let f4 = Gf::extension(&f2, &[1, 1, 1]).unwrap();
        assert_eq!(f4.size(), 4);
        for a in f4.units() {
            assert_eq!(f4.mul(a, f4.inv(a).unwrap()), 1);
            assert_eq!(f4.pow(a, 3), 1);
        }
        // u^2 = u + 1
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn rejects_reducible_modulus() {
        let f3 = Gf::prime(3).unwrap();
        assert!(Gf::extension(&f3, &[2, 0, 1]).is_err()); // X^2 - 1
        assert!(Gf::extension(&f3, &[1, 0, 1]).is_ok()); // X^2 + 1
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(4).unwrap(), (2, 2));
        assert!(prime_power(6).is_err());
    }
}
