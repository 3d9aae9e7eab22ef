//! The tower `k = F_q ⊂ k_i = F_{q^i}` with compatible embeddings, norms,
//! Frobenius and discrete logarithms.
//!
//! Every level `k_i` is modelled as `k[X]/(f_i)` with `f_i` the least monic
//! irreducible of degree `i` (see [`gfpoly::least_irreducible`]). All levels
//! are placed inside one top field `k_L`, `L = lcm` of the requested degrees,
//! through a single primitive element `G` of `k_L`: the distinguished
//! generator of `k_i^×` is the element sent to `G^{(q^L-1)/(q^i-1)}`. This
//! makes all embeddings commute.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::gf::{prime_power, Gf};
use super::gfpoly::{self, Poly};
use crate::error::{Error, Result};

/// An element of `k_i`, tagged with its level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElem {
    pub level: usize,
    pub value: u32,
}

#[derive(Clone, Debug)]
struct Level {
    modulus: Poly,
    field: Gf,
    /// `log_table(g_i)`, where `g_i` is the tower generator of this level.
    gen_log: u64,
    gen_log_inv: u64,
}

/// Serializable description of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerDescription {
    pub q: u32,
    pub base_modulus: Poly,
    pub levels: Vec<(usize, Poly)>,
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    q: u32,
    prime: Gf,
    base: Gf,
    base_modulus: Poly,
    top: usize,
    levels: BTreeMap<usize, Level>,
}

/// A Frobenius orbit `{x, x^q, ..., x^{q^{d-1}}}` of a point of `k̄^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Divisor {
    pub degree: usize,
    /// Representative inside `k_degree`.
    pub rep: ExtElem,
}

fn modinv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

impl FieldTower {
    /// Builds `k = F_q` and the levels `k_i` for each requested degree (degree
    /// 1 is always present).
    pub fn new(q: u32, degrees: &[usize]) -> Result<FieldTower> {
        let (p, r) = prime_power(q as u64)?;
        let prime = Gf::prime(p)?;
        let (base, base_modulus) = if r == 1 {
            (prime.clone(), vec![0, 1])
        } else {
            let m = gfpoly::least_irreducible(&prime, r as usize);
            (Gf::extension(&prime, &m)?, m)
        };
        let mut degs: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
        degs.push(1);
        degs.sort_unstable();
        degs.dedup();
        let top = degs.iter().fold(1usize, |acc, &d| acc.lcm(&d));
        let qq = q as u64;
        let size_top = qq.checked_pow(top as u32).ok_or(Error::BadFieldSize(qq))?;
        if size_top > (1 << 24) {
            return Err(Error::BudgetExceeded { required: size_top, budget: 1 << 24 });
        }
        let mk = |d: usize| -> Result<(Poly, Gf)> {
            if d == 1 {
                Ok((vec![0, 1], base.clone()))
            } else {
                let m = gfpoly::least_irreducible(&base, d);
                let f = Gf::extension(&base, &m)?;
                Ok((m, f))
            }
        };
        let (top_mod, top_field) = mk(top)?;
        let big = top_field.generator();
        let order_top = top_field.order() as u64;
        let mut levels = BTreeMap::new();
        let mut want = degs.clone();
        want.push(top);
        want.sort_unstable();
        want.dedup();
        for &d in &want {
            let (m, f) = if d == top { (top_mod.clone(), top_field.clone()) } else { mk(d)? };
            let e = order_top / (f.order() as u64);
            let target = top_field.pow(big, e);
            // minimal polynomial of `target` over k, coefficients are constants of k_L
            let minpoly = minimal_polynomial(&top_field, &base, target, q);
            let root = f
                .elements()
                .find(|&x| gfpoly::eval(&f, &minpoly_in(&minpoly), x) == 0)
                .expect("minimal polynomial splits in the level field");
            let gen_log = f.log(root).unwrap() as u64;
            let gen_log_inv = modinv(gen_log, f.order() as u64);
            levels.insert(d, Level { modulus: m, field: f, gen_log, gen_log_inv });
        }
        Ok(FieldTower { q, prime, base, base_modulus, top, levels })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn base(&self) -> &Gf {
        &self.base
    }
    pub fn prime_field(&self) -> &Gf {
        &self.prime
    }
    pub fn degrees(&self) -> Vec<usize> {
        self.levels.keys().copied().collect()
    }
    pub fn has_degree(&self, i: usize) -> bool {
        self.levels.contains_key(&i)
    }

    fn level(&self, i: usize) -> Result<&Level> {
        self.levels.get(&i).ok_or(Error::MissingDegree(i))
    }

    pub fn field(&self, i: usize) -> Result<&Gf> {
        Ok(&self.level(i)?.field)
    }

    pub fn modulus(&self, i: usize) -> Result<&[u32]> {
        Ok(&self.level(i)?.modulus)
    }

    pub fn describe(&self) -> TowerDescription {
        TowerDescription {
            q: self.q,
            base_modulus: self.base_modulus.clone(),
            levels: self.levels.iter().map(|(&d, l)| (d, l.modulus.clone())).collect(),
        }
    }

    pub fn elem(&self, level: usize, value: u32) -> ExtElem {
        ExtElem { level, value }
    }

    /// `|k_i^×| = q^i - 1`.
    pub fn unit_count(&self, i: usize) -> u64 {
        (self.q as u64).pow(i as u32) - 1
    }

    /// The distinguished generator of `k_i^×`.
    pub fn generator(&self, i: usize) -> Result<ExtElem> {
        let l = self.level(i)?;
        Ok(ExtElem { level: i, value: l.field.exp(l.gen_log) })
    }

    /// Discrete log with respect to [`FieldTower::generator`].
    pub fn dlog(&self, x: ExtElem) -> Result<u64> {
        let l = self.level(x.level)?;
        let raw = l.field.log(x.value).ok_or(Error::ZeroElement)? as u64;
        Ok((raw * l.gen_log_inv) % l.field.order() as u64)
    }

    /// `g_i^e`.
    pub fn gen_pow(&self, i: usize, e: u64) -> Result<ExtElem> {
        let l = self.level(i)?;
        let o = l.field.order() as u64;
        Ok(ExtElem { level: i, value: l.field.exp(((e % o) * l.gen_log) % o) })
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> Result<ExtElem> {
        if a.level != b.level {
            return Err(Error::BaseMismatch);
        }
        Ok(ExtElem { level: a.level, value: self.field(a.level)?.mul(a.value, b.value) })
    }

    pub fn pow(&self, a: ExtElem, e: u64) -> Result<ExtElem> {
        Ok(ExtElem { level: a.level, value: self.field(a.level)?.pow(a.value, e) })
    }

    /// `x ↦ x^q` on `k_i`.
    pub fn frobenius(&self, x: ExtElem) -> Result<ExtElem> {
        self.pow(x, self.q as u64)
    }

    /// The embedding `k_j → k_i` for `j | i`.
    pub fn embed(&self, x: ExtElem, i: usize) -> Result<ExtElem> {
        let j = x.level;
        if !i.is_multiple_of(j) {
            return Err(Error::NotDivisor { i, j });
        }
        if x.value == 0 {
            self.level(i)?;
            return Ok(ExtElem { level: i, value: 0 });
        }
        let a = self.dlog(x)?;
        let e = (self.unit_count(i)) / (self.unit_count(j));
        self.gen_pow(i, a * e)
    }

    /// Inverse of [`FieldTower::embed`]: returns the preimage in `k_j` when
    /// `x ∈ k_i` lies in the image of `k_j`.
    pub fn restrict(&self, x: ExtElem, j: usize) -> Result<Option<ExtElem>> {
        let i = x.level;
        if !i.is_multiple_of(j) {
            return Err(Error::NotDivisor { i, j });
        }
        if x.value == 0 {
            self.level(j)?;
            return Ok(Some(ExtElem { level: j, value: 0 }));
        }
        let a = self.dlog(x)?;
        let e = self.unit_count(i) / self.unit_count(j);
        if a % e != 0 {
            return Ok(None);
        }
        Ok(Some(self.gen_pow(j, a / e)?))
    }

    /// `Norm_{i,j}(x) = prod_{l < i/j} x^{q^{j l}}`, as an element of `k_j`.
    pub fn norm(&self, x: ExtElem, j: usize) -> Result<ExtElem> {
        let i = x.level;
        if j == 0 || !i.is_multiple_of(j) {
            return Err(Error::NotDivisor { i, j });
        }
        if x.value == 0 {
            return Err(Error::ZeroElement);
        }
        let f = self.field(i)?;
        let qj = (self.q as u64).pow(j as u32);
        let mut acc = 1u32;
        let mut conj = x.value;
        for _ in 0..(i / j) {
            acc = f.mul(acc, conj);
            conj = f.pow(conj, qj);
        }
        self.restrict(ExtElem { level: i, value: acc }, j)?
            .ok_or_else(|| Error::CheckFailed("norm not in subfield".into()))
    }

    /// Smallest `d` with `x ∈ k_d`.
    pub fn degree_of(&self, x: ExtElem) -> Result<usize> {
        let f = self.field(x.level)?;
        let mut y = x.value;
        for d in 1..=x.level {
            y = f.pow(y, self.q as u64);
            if y == x.value {
                return Ok(d);
            }
        }
        unreachable!("x^(q^i) = x in k_i")
    }

    /// The Frobenius orbit of a nonzero `x`, represented inside `k_d`,
    /// `d = degree_of(x)` (which must be a level of the tower).
    pub fn frobenius_orbit(&self, x: ExtElem) -> Result<Divisor> {
        if x.value == 0 {
            return Err(Error::ZeroElement);
        }
        let d = self.degree_of(x)?;
        let rep = self.restrict(x, d)?.expect("x lies in k_d");
        Ok(Divisor { degree: d, rep })
    }

    /// All orbit members, inside the representative's level.
    pub fn orbit_members(&self, d: &Divisor) -> Result<Vec<ExtElem>> {
        let mut out = vec![d.rep];
        let mut y = self.frobenius(d.rep)?;
        while y != d.rep {
            out.push(y);
            y = self.frobenius(y)?;
        }
        Ok(out)
    }

    /// All divisors of exact degree `i` (needs level `i`).
    pub fn divisors_of_degree(&self, i: usize) -> Result<Vec<Divisor>> {
        let f = self.field(i)?;
        let mut seen = alloc::collections::BTreeSet::new();
        let mut out = Vec::new();
        for v in f.units() {
            let x = ExtElem { level: i, value: v };
            if seen.contains(&v) || self.degree_of(x)? != i {
                continue;
            }
            let d = Divisor { degree: i, rep: x };
            for m in self.orbit_members(&d)? {
                seen.insert(m.value);
            }
            out.push(d);
        }
        Ok(out)
    }

    /// Minimal polynomial over `k` of `x` (monic, coefficients in `k`).
    pub fn minimal_polynomial(&self, x: ExtElem) -> Result<Poly> {
        let f = self.field(x.level)?;
        let coeffs = minimal_polynomial(f, &self.base, x.value, self.q);
        Ok(minpoly_in(&coeffs))
    }

    /// Element of `k_i` given by its coordinate vector over `k` in the
    /// power basis of `X` modulo `f_i`.
    pub fn from_coords(&self, i: usize, coords: &[u32]) -> Result<ExtElem> {
        self.level(i)?;
        let s = self.q;
        let v = coords.iter().rev().fold(0u32, |acc, &c| acc * s + c);
        Ok(ExtElem { level: i, value: v })
    }

    pub fn coords(&self, x: ExtElem) -> Vec<u32> {
        let mut v = x.value;
        (0..x.level)
            .map(|_| {
                let c = v % self.q;
                v /= self.q;
                c
            })
            .collect()
    }

    /// Level of the top field.
    pub fn top(&self) -> usize {
        self.top
    }
}

/// The minimal polynomial of `x ∈ big` over the constants `base ⊂ big`;
/// returned coefficient indices are valid in both `big` and `base`.
fn minimal_polynomial(big: &Gf, base: &Gf, x: u32, q: u32) -> Vec<u32> {
    let mut conj = vec![x];
    let mut y = big.pow(x, q as u64);
    while y != x {
        conj.push(y);
        y = big.pow(y, q as u64);
    }
    let mut poly: Vec<u32> = vec![1];
    for &c in &conj {
        let lin = [big.neg(c), 1];
        poly = gfpoly::mul(big, &poly, &lin);
    }
    debug_assert!(poly.iter().all(|&c| c < base.size()));
    poly
}

fn minpoly_in(coeffs: &[u32]) -> Poly {
    coeffs.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_norm_of_u() {
        // F_9 = F_3[u]/(u^2+1): N(u) = u * u^3 = u^4 = 1
        let t = FieldTower::new(3, &[2]).unwrap();
        assert_eq!(t.modulus(2).unwrap(), &[1, 0, 1]);
        let u = t.from_coords(2, &[0, 1]).unwrap();
        let n = t.norm(u, 1).unwrap();
        assert_eq!(n, ExtElem { level: 1, value: 1 });
    }

    #[test]
    fn norm_identity_case() {
        let t = FieldTower::new(2, &[3]).unwrap();
        for v in 1..8 {
            let x = t.elem(3, v);
            assert_eq!(t.norm(x, 3).unwrap(), x);
        }
    }

    #[test]
    fn norm_transitive_exhaustive() {
        for q in [2u32, 3] {
            let t = FieldTower::new(q, &[2, 4]).unwrap();
            for v in t.field(4).unwrap().units() {
                let x = t.elem(4, v);
                let direct = t.norm(x, 1).unwrap();
                let via = t.norm(t.norm(x, 2).unwrap(), 1).unwrap();
                assert_eq!(direct, via);
            }
        }
    }

    #[test]
    fn embeddings_commute() {
        let t = FieldTower::new(2, &[2, 4]).unwrap();
        for v in 0..2 {
            let x = t.elem(1, v);
            let a = t.embed(t.embed(x, 2).unwrap(), 4).unwrap();
            assert_eq!(a, t.embed(x, 4).unwrap());
        }
        for v in 0..4 {
            let x = t.elem(2, v);
            let y = t.embed(x, 4).unwrap();
            assert_eq!(t.restrict(y, 2).unwrap(), Some(x));
        }
        // embedding respects multiplication
        for a in 1..4 {
            for b in 1..4 {
                let (x, y) = (t.elem(2, a), t.elem(2, b));
                let lhs = t.embed(t.mul(x, y).unwrap(), 4).unwrap();
                let rhs = t.mul(t.embed(x, 4).unwrap(), t.embed(y, 4).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn generator_norm_compatible() {
        let t = FieldTower::new(3, &[2, 4]).unwrap();
        let g4 = t.generator(4).unwrap();
        let g2 = t.generator(2).unwrap();
        assert_eq!(t.norm(g4, 2).unwrap(), g2);
        assert_eq!(t.norm(g2, 1).unwrap(), t.generator(1).unwrap());
    }

    #[test]
    fn frobenius_fixes_exact_subfields() {
        let t = FieldTower::new(2, &[2, 4]).unwrap();
        let f4 = t.field(4).unwrap();
        for j in [1usize, 2, 4] {
            let fixed = f4
                .elements()
                .filter(|&v| {
                    let x = t.elem(4, v);
                    t.pow(x, 2u64.pow(j as u32)).unwrap() == x
                })
                .count();
            assert_eq!(fixed, 2usize.pow(j as u32));
        }
    }

    #[test]
    fn frobenius_orbits() {
        let t = FieldTower::new(2, &[4]).unwrap();
        let g = t.generator(4).unwrap();
        let d = t.frobenius_orbit(g).unwrap();
        assert_eq!(d.degree, 4);
        assert_eq!(t.orbit_members(&d).unwrap().len(), 4);
        assert_eq!(t.minimal_polynomial(g).unwrap().len(), 5);
        let one = t.elem(4, 1);
        assert_eq!(t.frobenius_orbit(one).unwrap().degree, 1);
        assert!(t.frobenius_orbit(t.elem(4, 0)).is_err());
        // 3 quartic irreducibles over F_2 -> 3 degree-4 divisors
        assert_eq!(t.divisors_of_degree(4).unwrap().len(), 3);
    }

    #[test]
    fn norm_errors() {
        let t = FieldTower::new(3, &[2]).unwrap();
        assert!(matches!(t.norm(t.elem(2, 1), 3), Err(Error::NotDivisor { .. })));
        assert!(matches!(t.norm(t.elem(2, 0), 1), Err(Error::ZeroElement)));
    }
}
