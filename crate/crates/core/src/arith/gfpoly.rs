//! Dense univariate polynomials over a [`Gf`], coefficients from the
//! constant term up. The zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

use super::gf::{prime_factors, Gf};

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &Gf, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &Gf, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(f: &Gf, a: &[u32], c: u32) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &Gf, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(f: &Gf, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u32; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        quot[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[dr - db + j] = f.sub(r[dr - db + j], f.mul(c, bj));
        }
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn rem(f: &Gf, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &Gf, a: &[u32]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(f, a, f.inv(a[d]).unwrap()),
    }
}

pub fn gcd(f: &Gf, a: &[u32], b: &[u32]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn mulmod(f: &Gf, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Gf, a: &[u32], mut e: u64, m: &[u32]) -> Poly {
    let mut acc: Poly = rem(f, &[1], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn eval(f: &Gf, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `X^(s^k) mod m` where `s` is the field size.
fn frob_power_x(f: &Gf, k: u64, m: &[u32]) -> Poly {
    let mut x: Poly = rem(f, &[0, 1], m);
    for _ in 0..k {
        x = powmod(f, &x, f.size() as u64, m);
    }
    x
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Gf, m: &[u32]) -> bool {
    let m = trim(m.to_vec());
    let Some(n) = degree(&m) else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let full = frob_power_x(f, n as u64, &m);
    if sub(f, &full, &rem(f, &x, &m)).iter().any(|&c| c != 0) {
        return false;
    }
    for l in prime_factors(n as u64) {
        let h = frob_power_x(f, n as u64 / l, &m);
        let g = gcd(f, &sub(f, &h, &x), &m);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The least monic irreducible polynomial of degree `n` over `f`, ordering
/// candidates by the coefficient vector `(c_{n-1}, ..., c_0)` read as a
/// base-`|f|` numeral.
pub fn least_irreducible(f: &Gf, n: usize) -> Poly {
    let s = f.size() as u64;
    let total = s.pow(n as u32);
    for code in 0..total {
        let mut c = vec![0u32; n + 1];
        c[n] = 1;
        let mut x = code;
        for k in 0..n {
            c[k] = (x % s) as u32;
            x /= s;
        }
        if is_irreducible(f, &c) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let f = Gf::prime(5).unwrap();
        let a = vec![1, 2, 3, 4, 1];
        let b = vec![2, 0, 1];
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), trim(a));
        assert!(degree(&r).is_none_or(|d| d < 2));
    }

    #[test]
    fn least_irreducibles() {
        let f2 = Gf::prime(2).unwrap();
        assert_eq!(least_irreducible(&f2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(&f2, 3), vec![1, 1, 0, 1]);
        let f3 = Gf::prime(3).unwrap();
        assert_eq!(least_irreducible(&f3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn irreducible_count_degree_four_over_f2() {
        // (2^4 - 2^2) / 4 = 3 irreducible quartics
        let f2 = Gf::prime(2).unwrap();
        let count = (0..16u32)
            .filter(|code| {
                let c: Vec<u32> = (0..4).map(|k| (code >> k) & 1).chain([1]).collect();
                is_irreducible(&f2, &c)
            })
            .count();
        assert_eq!(count, 3);
    }
}
