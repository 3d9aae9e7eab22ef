//! Finite matrix groups `GL(N, q)` and `PGL(N, q)`, dominant coweights,
//! parabolic data, twisted products `G/U ×_M G/U'`, and elliptic classes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::arith::{ExtElem, FieldTower, Gf};
use crate::error::{Error, Result};
use crate::linalg::gfmat;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    GL,
    PGL,
}

/// `|GL(N, q)| = prod_{j<N} (q^N - q^j)`.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n).map(|j| qn - q.pow(j as u32)).product()
}

pub fn group_order(n: usize, q: u64, kind: Kind) -> u64 {
    match kind {
        Kind::GL => gl_order(n, q),
        Kind::PGL => gl_order(n, q) / (q - 1),
    }
}

/// An enumerated `GL(N, q)` or `PGL(N, q)`. Elements are indices into a
/// lexicographically sorted list of (scalar-normalised, for PGL) matrices.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    q: u32,
    kind: Kind,
    field: Gf,
    mats: Vec<u32>,
    /// matrix code -> index + 1 (0 = absent)
    lookup: Vec<u32>,
    mul_tab: Vec<u32>,
    inv_tab: Vec<u32>,
    identity: usize,
}

const LOOKUP_LIMIT: u64 = 1 << 24;

impl FiniteGroup {
    pub fn new(n: usize, q: u32, kind: Kind) -> Result<FiniteGroup> {
        Self::with_budget(n, q, kind, DEFAULT_BUDGET)
    }

    pub fn with_budget(n: usize, q: u32, kind: Kind, budget: u64) -> Result<FiniteGroup> {
        let tower = FieldTower::new(q, &[1])?;
        let field = tower.base().clone();
        Self::over_field(n, field, kind, budget)
    }

    /// Builds the group over an explicit model of `k`.
    pub fn over_field(n: usize, field: Gf, kind: Kind, budget: u64) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        let q = field.size();
        let order = group_order(n, q as u64, kind);
        if order > budget {
            return Err(Error::BudgetExceeded { required: order, budget });
        }
        let nn = n * n;
        let codes = (q as u64).checked_pow(nn as u32).filter(|&c| c <= LOOKUP_LIMIT).ok_or(
            Error::BudgetExceeded { required: (q as u64).saturating_pow(nn as u32), budget: LOOKUP_LIMIT },
        )?;
        let mut mats = Vec::with_capacity(order as usize * nn);
        let mut lookup = vec![0u32; codes as usize];
        let mut m = vec![0u32; nn];
        let mut count = 0u32;
        for code in 0..codes {
            let mut c = code;
            for k in (0..nn).rev() {
                m[k] = (c % q as u64) as u32;
                c /= q as u64;
            }
            if gfmat::det(&field, &m, n) == 0 {
                continue;
            }
            if kind == Kind::PGL && !is_normalized(&m, n) {
                continue;
            }
            mats.extend_from_slice(&m);
            count += 1;
            lookup[code as usize] = count;
        }
        debug_assert_eq!(count as u64, order);
        let mut g = FiniteGroup {
            n,
            q,
            kind,
            field,
            mats,
            lookup,
            mul_tab: Vec::new(),
            inv_tab: Vec::new(),
            identity: 0,
        };
        g.identity = g.index_of(&gfmat::identity(n)).expect("identity present");
        let ord = count as usize;
        if (ord as u64) * (ord as u64) <= 4_000_000 {
            let mut tab = vec![0u32; ord * ord];
            for a in 0..ord {
                for b in 0..ord {
                    tab[a * ord + b] = g.mul_slow(a, b) as u32;
                }
            }
            g.mul_tab = tab;
        }
        g.inv_tab = (0..ord)
            .map(|a| {
                let inv = gfmat::inverse(&g.field, g.matrix(a), n).unwrap();
                g.index_of(&inv).unwrap() as u32
            })
            .collect();
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn kind(&self) -> Kind {
        self.kind
    }
    pub fn field(&self) -> &Gf {
        &self.field
    }
    pub fn order(&self) -> usize {
        self.inv_tab.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order()
    }

    pub fn matrix(&self, g: usize) -> &[u32] {
        let nn = self.n * self.n;
        &self.mats[g * nn..(g + 1) * nn]
    }

    fn code(&self, m: &[u32]) -> u64 {
        m.iter().fold(0u64, |acc, &x| acc * self.q as u64 + x as u64)
    }

    /// Index of an invertible matrix (normalised first for PGL).
    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        let owned;
        let m = if self.kind == Kind::PGL {
            owned = normalize(&self.field, m, self.n)?;
            &owned[..]
        } else {
            m
        };
        let c = self.code(m) as usize;
        match self.lookup.get(c) {
            Some(&v) if v > 0 => Some(v as usize - 1),
            _ => None,
        }
    }

    fn mul_slow(&self, a: usize, b: usize) -> usize {
        let p = gfmat::mul(&self.field, self.matrix(a), self.matrix(b), self.n);
        self.index_of(&p).expect("product is invertible")
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if self.mul_tab.is_empty() {
            self.mul_slow(a, b)
        } else {
            self.mul_tab[a * self.order() + b] as usize
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv_tab[a] as usize
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let cls: BTreeSet<usize> = self.elements().map(|g| self.conj(g, x)).collect();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls.into_iter().collect());
        }
        out
    }

    /// Scalar matrices `c·1`, `c ∈ k^×` (for PGL only the identity).
    pub fn center_scalars(&self) -> Vec<(u32, usize)> {
        self.field
            .units()
            .filter_map(|c| {
                let mut m = vec![0u32; self.n * self.n];
                for i in 0..self.n {
                    m[i * self.n + i] = c;
                }
                self.index_of(&m).map(|g| (c, g))
            })
            .filter(|&(c, _)| self.kind == Kind::GL || c == 1)
            .collect()
    }
}

fn is_normalized(m: &[u32], n: usize) -> bool {
    // first nonzero entry of the first nonzero column equals 1
    for j in 0..n {
        for i in 0..n {
            let v = m[i * n + j];
            if v != 0 {
                return v == 1;
            }
        }
    }
    false
}

/// The scalar-normalised representative of the class of `m` in `PGL`.
pub fn normalize(f: &Gf, m: &[u32], n: usize) -> Option<Vec<u32>> {
    for j in 0..n {
        for i in 0..n {
            let v = m[i * n + j];
            if v != 0 {
                let s = f.inv(v).ok()?;
                return Some(m.iter().map(|&x| f.mul(x, s)).collect());
            }
        }
    }
    None
}

/// A weakly decreasing integer tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn new(v: Vec<i64>) -> Result<Coweight> {
        let c = Coweight(v);
        if !c.is_dominant() {
            return Err(Error::NonDominant);
        }
        Ok(c)
    }

    pub fn zero(n: usize) -> Coweight {
        Coweight(vec![0; n])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Normal form for PGL: shift so that the last entry is zero.
    pub fn pgl_normal(&self) -> Coweight {
        let last = *self.0.last().unwrap_or(&0);
        Coweight(self.0.iter().map(|x| x - last).collect())
    }

    pub fn normal(&self, kind: Kind) -> Coweight {
        match kind {
            Kind::GL => self.clone(),
            Kind::PGL => self.pgl_normal(),
        }
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `n_1 - n_N`.
    pub fn spread(&self) -> i64 {
        self.0.first().unwrap_or(&0) - self.0.last().unwrap_or(&0)
    }

    /// Dominance order: `self ≥ o` iff partial sums dominate and the totals
    /// agree (for PGL after normalising, totals agree modulo `N`).
    pub fn dominates(&self, o: &Coweight, kind: Kind) -> bool {
        let n = self.rank() as i64;
        let (a, b) = match kind {
            Kind::GL => (self.clone(), o.clone()),
            Kind::PGL => {
                let d = self.degree() - o.degree();
                if d.rem_euclid(n) != 0 {
                    return false;
                }
                // shift o by the scalar making degrees equal
                let s = d / n;
                (self.clone(), Coweight(o.0.iter().map(|x| x + s).collect()))
            }
        };
        if a.degree() != b.degree() {
            return false;
        }
        let mut sa = 0;
        let mut sb = 0;
        for (x, y) in a.0.iter().zip(&b.0) {
            sa += x;
            sb += y;
            if sa < sb {
                return false;
            }
        }
        true
    }

    /// Block sizes of equal entries, in order (entries are decreasing).
    pub fn blocks(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 && self.0[i - 1] == *x {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
            }
        }
        out
    }

    /// All dominant coweights `μ ≤ self` (same degree, GL convention).
    pub fn below(&self) -> Vec<Coweight> {
        let n = self.rank();
        let d = self.degree();
        let lo = *self.0.last().unwrap_or(&0);
        let hi = *self.0.first().unwrap_or(&0);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(n: usize, lo: i64, hi: i64, d: i64, cur: &mut Vec<i64>, out: &mut Vec<Coweight>, top: &Coweight) {
            if cur.len() == n {
                let c = Coweight(cur.clone());
                if c.degree() == d && top.dominates(&c, Kind::GL) {
                    out.push(c);
                }
                return;
            }
            let max = cur.last().copied().unwrap_or(hi);
            let mut v = max;
            while v >= lo {
                cur.push(v);
                rec(n, lo, hi, d, cur, out, top);
                cur.pop();
                v -= 1;
            }
        }
        rec(n, lo, hi, d, &mut cur, &mut out, self);
        out.sort_by(dominance_sort_key);
        out
    }
}

fn dominance_sort_key(a: &Coweight, b: &Coweight) -> Ordering {
    a.spread().cmp(&b.spread()).then(b.0.cmp(&a.0))
}

impl core::fmt::Display for Coweight {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of dominant coweights closed under going down in
/// dominance order, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    kind: Kind,
    members: Vec<Coweight>,
}

impl Window {
    /// The smallest window containing the given generators.
    pub fn generated(gens: &[Coweight], kind: Kind) -> Result<Window> {
        let mut set = BTreeSet::new();
        for g in gens {
            if !g.is_dominant() {
                return Err(Error::NonDominant);
            }
            for mu in g.below() {
                set.insert(mu.normal(kind));
            }
        }
        let mut members: Vec<Coweight> = set.into_iter().collect();
        members.sort_by(|a, b| dominance_sort_key(a, b).then(a.0.cmp(&b.0)));
        Ok(Window { kind, members })
    }

    pub fn members(&self) -> &[Coweight] {
        &self.members
    }

    pub fn contains(&self, c: &Coweight) -> bool {
        self.members.contains(&c.normal(self.kind))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }
}

/// The parabolic data attached to a dominant coweight.
#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    pub lambda: Coweight,
    pub blocks: Vec<usize>,
    block_of: Vec<usize>,
    pub p: Vec<usize>,
    pub u: Vec<usize>,
    pub m: Vec<usize>,
    pub p_minus: Vec<usize>,
    pub u_minus: Vec<usize>,
    in_p: Vec<bool>,
    in_pm: Vec<bool>,
}

impl ParabolicDatum {
    pub fn new(lambda: &Coweight, g: &FiniteGroup) -> Result<ParabolicDatum> {
        if !lambda.is_dominant() {
            return Err(Error::NonDominant);
        }
        if lambda.rank() != g.rank() {
            return Err(Error::Shape(format!("coweight of rank {} for GL({})", lambda.rank(), g.rank())));
        }
        let blocks = lambda.blocks();
        let mut block_of = Vec::new();
        for (b, &s) in blocks.iter().enumerate() {
            block_of.extend(core::iter::repeat_n(b, s));
        }
        let n = g.rank();
        let mut d = ParabolicDatum {
            lambda: lambda.clone(),
            blocks,
            block_of,
            p: Vec::new(),
            u: Vec::new(),
            m: Vec::new(),
            p_minus: Vec::new(),
            u_minus: Vec::new(),
            in_p: vec![false; g.order()],
            in_pm: vec![false; g.order()],
        };
        for x in g.elements() {
            let mat = g.matrix(x);
            let upper = d.zero_pattern(mat, n, |bi, bj| bi > bj);
            let lower = d.zero_pattern(mat, n, |bi, bj| bi < bj);
            let diag_id = d.diag_blocks_identity(mat, n);
            if upper {
                d.p.push(x);
                d.in_p[x] = true;
                if diag_id {
                    d.u.push(x);
                }
            }
            if lower {
                d.p_minus.push(x);
                d.in_pm[x] = true;
                if diag_id {
                    d.u_minus.push(x);
                }
            }
            if upper && lower {
                d.m.push(x);
            }
        }
        Ok(d)
    }

    fn zero_pattern(&self, m: &[u32], n: usize, off: impl Fn(usize, usize) -> bool) -> bool {
        (0..n).all(|i| (0..n).all(|j| !off(self.block_of[i], self.block_of[j]) || m[i * n + j] == 0))
    }

    fn diag_blocks_identity(&self, m: &[u32], n: usize) -> bool {
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.block_of[i] != self.block_of[j] || m[i * n + j] == if i == j { 1 } else { 0 }
            })
        })
    }

    pub fn in_p(&self, x: usize) -> bool {
        self.in_p[x]
    }
    pub fn in_p_minus(&self, x: usize) -> bool {
        self.in_pm[x]
    }

    /// Levi block index of each row.
    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    /// `π_λ : P → M` (or `P^- → M`): keep the diagonal blocks.
    pub fn levi_part(&self, g: &FiniteGroup, x: usize) -> Result<usize> {
        if !self.in_p[x] && !self.in_pm[x] {
            return Err(Error::Invalid("element not in P or P^-".into()));
        }
        let n = g.rank();
        let mut m = g.matrix(x).to_vec();
        for i in 0..n {
            for j in 0..n {
                if self.block_of[i] != self.block_of[j] {
                    m[i * n + j] = 0;
                }
            }
        }
        g.index_of(&m).ok_or(Error::Singular)
    }

    /// `i_λ : M → P` is the inclusion of indices.
    pub fn include_levi(&self, x: usize) -> usize {
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `(U, U)`: the global (bundle) side.
    PlusPlus,
    /// `(U, U^-)`: the local (loop group) side.
    PlusMinus,
}

/// Orbits of `(U × U^±)·ΔM` acting on `G × G` by right translation.
#[derive(Clone, Debug)]
pub struct TwistedProductSpace {
    pub sign: Sign,
    pub lambda: Coweight,
    order: usize,
    /// pair index `g1 * |G| + g2` -> point
    point_of: Vec<u32>,
    reps: Vec<(usize, usize)>,
}

impl TwistedProductSpace {
    pub fn new(g: &FiniteGroup, d: &ParabolicDatum, sign: Sign) -> TwistedProductSpace {
        let o = g.order();
        let second = match sign {
            Sign::PlusPlus => &d.u,
            Sign::PlusMinus => &d.u_minus,
        };
        let um: Vec<(usize, usize)> = d
            .m
            .iter()
            .flat_map(|&m| {
                d.u.iter().flat_map(move |&u1| second.iter().map(move |&u2| (u1, u2, m)))
            })
            .map(|(u1, u2, m)| (g.mul(u1, m), g.mul(u2, m)))
            .collect();
        let mut point_of = vec![u32::MAX; o * o];
        let mut reps = Vec::new();
        for g1 in 0..o {
            for g2 in 0..o {
                if point_of[g1 * o + g2] != u32::MAX {
                    continue;
                }
                let id = reps.len() as u32;
                reps.push((g1, g2));
                for &(a, b) in &um {
                    point_of[g.mul(g1, a) * o + g.mul(g2, b)] = id;
                }
            }
        }
        TwistedProductSpace { sign, lambda: d.lambda.clone(), order: o, point_of, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn point(&self, g1: usize, g2: usize) -> usize {
        self.point_of[g1 * self.order + g2] as usize
    }

    /// Canonical (lexicographically least) representative.
    pub fn rep(&self, pt: usize) -> (usize, usize) {
        self.reps[pt]
    }

    /// Left action of `(h1, h2) ∈ G × G`.
    pub fn act(&self, g: &FiniteGroup, h1: usize, h2: usize, pt: usize) -> usize {
        let (a, b) = self.reps[pt];
        self.point(g.mul(h1, a), g.mul(h2, b))
    }

    /// The expected size `|G|^2 / (|U| |U^±| |M|)`.
    pub fn expected_len(g: &FiniteGroup, d: &ParabolicDatum, sign: Sign) -> usize {
        let second = match sign {
            Sign::PlusPlus => d.u.len(),
            Sign::PlusMinus => d.u_minus.len(),
        };
        g.order() * g.order() / (d.u.len() * second * d.m.len())
    }
}

/// The conjugacy class `Ω_x` of the companion matrix of the minimal
/// polynomial of a degree-`N` element `x`.
#[derive(Clone, Debug)]
pub struct ConjClass {
    pub x: ExtElem,
    pub representative: usize,
    pub members: Vec<usize>,
}

pub fn companion(f: &Gf, poly: &[u32]) -> Vec<u32> {
    let n = poly.len() - 1;
    let mut m = vec![0u32; n * n];
    for i in 1..n {
        m[i * n + (i - 1)] = 1;
    }
    for i in 0..n {
        m[i * n + (n - 1)] = f.neg(poly[i]);
    }
    m
}

pub fn elliptic_class(tower: &FieldTower, x: ExtElem, g: &FiniteGroup) -> Result<ConjClass> {
    let d = tower.degree_of(x)?;
    if x.value == 0 || d != g.rank() {
        return Err(Error::DegreeMismatch { expected: g.rank(), got: d });
    }
    let poly = tower.minimal_polynomial(x)?;
    let c = companion(tower.base(), &poly);
    let rep = g.index_of(&c).ok_or(Error::Singular)?;
    let members: BTreeSet<usize> = g.elements().map(|h| g.conj(h, rep)).collect();
    Ok(ConjClass { x, representative: rep, members: members.into_iter().collect() })
}

/// `Ω_x`: the `GL(N, k)`-conjugacy class of the companion matrix of `x`,
/// mapped into `g` with multiplicity. For `PGL` this is a multiset: when
/// `x` is conjugate to a scalar multiple of itself the image of the class is
/// smaller than the class, and every element is hit equally often.
pub fn elliptic_orbit(tower: &FieldTower, x: ExtElem, g: &FiniteGroup) -> Result<Vec<usize>> {
    if g.kind() == Kind::GL {
        return Ok(elliptic_class(tower, x, g)?.members);
    }
    let gl = FiniteGroup::over_field(g.rank(), g.field().clone(), Kind::GL, g.order() as u64 * g.q() as u64)?;
    let cls = elliptic_class(tower, x, &gl)?;
    let mut out: Vec<usize> = cls.members.iter().map(|&m| g.index_of(gl.matrix(m)).ok_or(Error::Singular)).collect::<Result<_>>()?;
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::new(2, 3, Kind::GL).unwrap().order(), 48);
        assert_eq!(FiniteGroup::new(2, 3, Kind::PGL).unwrap().order(), 24);
        assert_eq!(FiniteGroup::new(1, 5, Kind::GL).unwrap().order(), 4);
        assert_eq!(FiniteGroup::new(3, 2, Kind::GL).unwrap().order(), 168);
        assert!(matches!(
            FiniteGroup::with_budget(2, 5, Kind::GL, 100),
            Err(Error::BudgetExceeded { required: 480, budget: 100 })
        ));
    }

    #[test]
    fn group_axioms_gl2_f3() {
        let g = FiniteGroup::new(2, 3, Kind::PGL).unwrap();
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements().step_by(5) {
                for c in g.elements().step_by(7) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn parabolics() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let d = ParabolicDatum::new(&cw(&[1, 0]), &g).unwrap();
        assert_eq!(d.u.len(), 3);
        assert_eq!(d.m.len(), 4);
        assert_eq!(d.p.len(), d.u.len() * d.m.len());
        let z = ParabolicDatum::new(&cw(&[0, 0]), &g).unwrap();
        assert_eq!((z.p.len(), z.u.len()), (48, 1));
        assert_eq!(cw(&[2, 2, 0]).blocks(), vec![2, 1]);
        assert_eq!(Coweight::new(vec![0, 1]), Err(Error::NonDominant));
        for &m in &d.m {
            assert_eq!(d.levi_part(&g, d.include_levi(m)).unwrap(), m);
        }
    }

    #[test]
    fn twisted_product_counts() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let d = ParabolicDatum::new(&cw(&[1, 0]), &g).unwrap();
        assert_eq!(TwistedProductSpace::new(&g, &d, Sign::PlusMinus).len(), 9);
        let g3 = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let d3 = ParabolicDatum::new(&cw(&[1, 0]), &g3).unwrap();
        assert_eq!(TwistedProductSpace::new(&g3, &d3, Sign::PlusMinus).len(), 64);
        let z = ParabolicDatum::new(&cw(&[0, 0]), &g3).unwrap();
        assert_eq!(TwistedProductSpace::new(&g3, &z, Sign::PlusPlus).len(), 48);
    }

    #[test]
    fn dominance() {
        assert!(cw(&[2, 0]).dominates(&cw(&[1, 1]), Kind::GL));
        assert!(!cw(&[1, 1]).dominates(&cw(&[2, 0]), Kind::GL));
        assert!(!cw(&[1, 0]).dominates(&cw(&[0, 0]), Kind::GL));
        assert!(!cw(&[1, 0]).dominates(&cw(&[0, 0]), Kind::PGL));
        assert!(cw(&[2, 0]).dominates(&cw(&[0, 0]), Kind::PGL));
        assert_eq!(cw(&[2, 0]).below(), vec![cw(&[1, 1]), cw(&[2, 0])]);
    }

    #[test]
    fn elliptic_class_size() {
        let t = FieldTower::new(3, &[2]).unwrap();
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        for dv in t.divisors_of_degree(2).unwrap() {
            let c = elliptic_class(&t, dv.rep, &g).unwrap();
            assert_eq!(c.members.len(), 6);
        }
        let x = t.elem(1, 2);
        assert!(elliptic_class(&t, x, &g).is_err());
    }
}
