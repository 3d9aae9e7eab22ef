//! Hecke operators at divisors `D ⊂ G_m` away from `0` and `∞`.
//!
//! A point `E` is modified to every `E ⊂ E'` with `E'/E ≅ O_D`. Over the
//! chart at `0` these are the lattices `E + k[z]·v/p`, one for each
//! `k_i`-line `v` in the fiber `E|_D = (k[z]/p)^N`, where `p` is the
//! minimal polynomial of the place. The trivializations at `0` and `∞` are
//! untouched by the modification, so after rewriting the transition matrix
//! in the new frames it is corrected by the constant frame changes at the
//! two marked points.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::arith::gfpoly::{self, Poly};
use crate::arith::{Divisor, ExtElem, FieldTower, Gf, Scalar};
use crate::bundles::{BundleModel, Side};
use crate::error::{Error, Result};
use crate::groups::Kind;
use crate::linalg::gfmat;
use crate::loophecke::{HeckeElement, Label};
use crate::poly::{LMat, LPoly};

/// The function `f` on the dual group defining `h_{D,f}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeFn {
    /// Trace of the standard representation.
    StdTrace,
    /// `z^m` on the dual of `GL(1)`; `m = 0` is the constant `1`.
    Monomial(u32),
}

/// Choice of the scalar in front of the correspondence sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `(-q^{-1/2})^{(N-1)·i}`.
    Literal,
    /// `q^{-iN/2}`, kept only to show that it is the wrong one.
    Inline,
}

pub fn normalization(q: u32, n: usize, i: usize, which: Normalization) -> Result<Scalar> {
    let sq = Scalar::sqrt_q(q as u64)?;
    match which {
        Normalization::Literal => sq.neg().inv()?.pow(((n - 1) * i) as i64),
        Normalization::Inline => sq.inv()?.pow((i * n) as i64),
    }
}

fn lpoly(c: &[u32]) -> LPoly {
    LPoly::from_coeffs(0, c.to_vec())
}

/// `w^i p(1/w)`; its constant term is the leading coefficient of `p`.
fn reversed(p: &[u32]) -> Poly {
    let mut r = p.to_vec();
    r.reverse();
    gfpoly::trim(r)
}

fn adjugate(f: &Gf, m: &LMat) -> LMat {
    let n = m.n;
    if n == 1 {
        return LMat::identity(1);
    }
    let mut e = vec![LPoly::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for r in (0..n).filter(|&r| r != i) {
                for c in (0..n).filter(|&c| c != j) {
                    minor.push(m.get(r, c).clone());
                }
            }
            let d = LMat { n: n - 1, e: minor }.det(f);
            e[j * n + i] = if (i + j) % 2 == 0 { d } else { d.neg(f) };
        }
    }
    LMat { n, e }
}

fn exact_div(f: &Gf, a: &LPoly, p: &[u32]) -> Result<LPoly> {
    if a.is_zero() {
        return Ok(LPoly::zero());
    }
    let (quot, r) = gfpoly::divrem(f, &a.c, p);
    if !r.is_empty() {
        return Err(Error::CheckFailed("modified transition is not integral".into()));
    }
    Ok(LPoly::from_coeffs(a.low, quot))
}

/// Residues of degree `< i`, in a fixed order.
fn residues(f: &Gf, i: usize) -> Vec<Poly> {
    let s = f.size() as usize;
    let total = s.pow(i as u32);
    (0..total)
        .map(|mut k| {
            let mut c = Vec::with_capacity(i);
            for _ in 0..i {
                c.push((k % s) as u32);
                k /= s;
            }
            gfpoly::trim(c)
        })
        .collect()
}

/// Normalized representatives of the lines of `R^N`, `R = k[z]/(p)` a field:
/// the first nonzero entry is `1`.
fn lines(f: &Gf, n: usize, i: usize) -> Vec<Vec<Poly>> {
    let res = residues(f, i);
    let mut out = Vec::new();
    for r in 0..n {
        let free = n - 1 - r;
        let mut idx = vec![0usize; free];
        loop {
            let mut v = vec![Vec::new(); n];
            v[r] = vec![1];
            for (k, &j) in idx.iter().enumerate() {
                v[r + 1 + k] = res[j].clone();
            }
            out.push(v);
            let mut k = 0;
            while k < free {
                idx[k] += 1;
                if idx[k] < res.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
    out
}

/// Inverse in the field `k[w]/(m)`.
fn residue_inverse(f: &Gf, a: &[u32], m: &[u32]) -> Poly {
    let i = gfpoly::degree(m).unwrap_or(0) as u32;
    let order = (f.size() as u64).pow(i) - 1;
    gfpoly::powmod(f, a, order - 1, m)
}

/// The matrix whose column `r` is `v` (with `v_r = 1`) and whose other
/// columns are `p·e_j`: its columns divided by `p` span the modified lattice.
fn modification_matrix(n: usize, v: &[Poly], p: &[u32]) -> LMat {
    let r = v.iter().position(|x| !x.is_empty()).unwrap();
    let mut e = vec![LPoly::zero(); n * n];
    for j in 0..n {
        if j == r {
            for (k, vk) in v.iter().enumerate() {
                e[k * n + j] = lpoly(vk);
            }
        } else {
            e[j * n + j] = lpoly(p);
        }
    }
    LMat { n, e }
}

/// All upper modifications of `P` at the place with minimal polynomial
/// `p`, each re-canonicalized. There are `(q^{iN} - 1)/(q^i - 1)`.
pub fn modifications(model: &BundleModel, point: &Label, p: &[u32]) -> Result<Vec<Label>> {
    let f = model.field();
    let n = model.group().rank();
    let i = gfpoly::degree(p).ok_or(Error::ZeroElement)?;
    if i == 0 || p[0] == 0 || p[i] != 1 {
        return Err(Error::Invalid("place polynomial must be monic of positive degree with p(0) ≠ 0".into()));
    }
    let pt = reversed(p);
    let pt_monic = gfpoly::monic(f, &pt);
    let g = model.transition(point)?;
    let ginv = g.inverse(f)?;
    let p0inv = f.inv(p[0])?;
    let mut out = Vec::new();
    for v in lines(f, n, i) {
        // the same line in the frame at ∞, as residues in w = 1/z
        let comps: Vec<LPoly> = (0..n)
            .map(|a| {
                let mut s = LPoly::zero();
                for (b, vb) in v.iter().enumerate() {
                    s = s.add(f, &ginv.get(a, b).mul(f, &lpoly(vb)));
                }
                s.invert_variable(f, 1)
            })
            .collect();
        let low = comps.iter().filter_map(|c| c.valuation()).min().ok_or(Error::Singular)?;
        let mut u: Vec<Poly> = comps
            .iter()
            .map(|c| if c.is_zero() { Vec::new() } else { gfpoly::rem(f, &c.shift(-low).c_from_zero(), &pt_monic) })
            .collect();
        let lead = u.iter().position(|x| !x.is_empty()).ok_or(Error::Singular)?;
        let inv = residue_inverse(f, &u[lead], &pt_monic);
        for x in u.iter_mut() {
            *x = gfpoly::rem(f, &gfpoly::mul(f, x, &inv), &pt_monic);
        }
        let c0 = modification_matrix(n, &v, p);
        let cinf = modification_matrix(n, &u, &pt);
        let cinf_z = cinf.map(|e| e.invert_variable(f, 1));
        let m = adjugate(f, &c0).mul(f, &g).mul(f, &cinf_z).shift(i as i64);
        let mut pn = vec![1u32];
        for _ in 1..n {
            pn = gfpoly::mul(f, &pn, p);
        }
        let mut e = Vec::with_capacity(n * n);
        for x in &m.e {
            e.push(exact_div(f, x, &pn)?);
        }
        let core = LMat { n, e };
        let left: Vec<u32> = c0.coeff_matrix(0).iter().map(|&x| f.mul(x, p0inv)).collect();
        let right = gfmat::inverse(f, &cinf.coeff_matrix(0), n)?;
        let gp = LMat::from_const(&left, n).mul(f, &core).mul(f, &LMat::from_const(&right, n));
        out.push(model.canonical_form(&gp)?);
    }
    Ok(out)
}

trait FromZero {
    fn c_from_zero(&self) -> Poly;
}

impl FromZero for LPoly {
    /// Coefficients of a polynomial with nonnegative valuation, from `z^0`.
    fn c_from_zero(&self) -> Poly {
        if self.is_zero() {
            return Vec::new();
        }
        let mut c = vec![0u32; self.low as usize];
        c.extend_from_slice(&self.c);
        c
    }
}

/// `h_{D,f}` acting on functions on bundle points:
/// `(h φ)(E) = c · Σ_{E ⊂ E'} φ(E')`, iterated `m` times for `f = z^m`.
#[derive(Debug)]
pub struct DivisorHeckeOp<'a> {
    pub model: &'a BundleModel,
    pub divisor: Divisor,
    pub poly: Poly,
    pub f: HeckeFn,
    pub c: Scalar,
    mods: RefCell<BTreeMap<Label, Rc<Vec<Label>>>>,
}

impl<'a> DivisorHeckeOp<'a> {
    pub fn new(
        model: &'a BundleModel,
        tower: &FieldTower,
        divisor: Divisor,
        f: HeckeFn,
        which: Normalization,
    ) -> Result<DivisorHeckeOp<'a>> {
        let n = model.group().rank();
        if tower.q() != model.group().q() {
            return Err(Error::BaseMismatch);
        }
        if let HeckeFn::Monomial(_) = f {
            if n != 1 {
                return Err(Error::Unsupported("monomial f only for GL(1)".into()));
            }
        }
        let poly = tower.minimal_polynomial(divisor.rep)?;
        if gfpoly::degree(&poly) != Some(divisor.degree) {
            return Err(Error::DegreeMismatch { expected: divisor.degree, got: gfpoly::degree(&poly).unwrap_or(0) });
        }
        let c = normalization(tower.q(), n, divisor.degree, which)?;
        Ok(DivisorHeckeOp { model, divisor, poly, f, c, mods: RefCell::new(BTreeMap::new()) })
    }

    pub fn degree(&self) -> usize {
        self.divisor.degree
    }

    fn steps(&self) -> u32 {
        match self.f {
            HeckeFn::StdTrace => 1,
            HeckeFn::Monomial(m) => m,
        }
    }

    /// How far the operator moves the degree of the bundle: points at
    /// degree `d` only see values at degree `d + shift`.
    pub fn degree_shift(&self) -> i64 {
        (self.steps() as usize * self.divisor.degree) as i64
    }

    /// One correspondence step from `P`.
    pub fn modifications(&self, p: &Label) -> Result<Rc<Vec<Label>>> {
        if let Some(v) = self.mods.borrow().get(p) {
            return Ok(v.clone());
        }
        let rc = Rc::new(modifications(self.model, p, &self.poly)?);
        self.mods.borrow_mut().insert(p.clone(), rc.clone());
        Ok(rc)
    }

    /// The functional `φ ↦ (h φ)(P)` as scalar weights on points.
    pub fn functional(&self, p: &Label) -> Result<BTreeMap<Label, Scalar>> {
        let mut cur: BTreeMap<Label, Scalar> = BTreeMap::new();
        cur.insert(p.clone(), Scalar::one());
        for _ in 0..self.steps() {
            let mut next: BTreeMap<Label, Scalar> = BTreeMap::new();
            for (q, w) in &cur {
                let cw = w.mul(&self.c);
                for e in self.modifications(q)?.iter() {
                    let slot = next.entry(e.clone()).or_insert_with(Scalar::zero);
                    *slot = slot.add(&cw);
                }
            }
            cur = next;
        }
        cur.retain(|_, v| !v.is_zero());
        Ok(cur)
    }

    pub fn apply_at(&self, v: &dyn Fn(&Label) -> Result<Scalar>, p: &Label) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (q, w) in self.functional(p)? {
            acc = acc.add(&w.mul(&v(&q)?));
        }
        Ok(acc)
    }

    /// Checks `h ∘ T = T ∘ h` at `P` as functionals, for `T = δ_x` acting at
    /// `side`. Returns the witness point of a mismatch, if any.
    pub fn commutes_at(&self, side: Side, x: &Label, p: &Label) -> Result<bool> {
        let model = self.model;
        let mut lhs: BTreeMap<Label, Scalar> = BTreeMap::new();
        for (e, w) in self.functional(p)? {
            for q in model.row(side, x, &e)?.iter() {
                let slot = lhs.entry(q.clone()).or_insert_with(Scalar::zero);
                *slot = slot.add(&w);
            }
        }
        let mut rhs: BTreeMap<Label, Scalar> = BTreeMap::new();
        for e in model.row(side, x, p)?.iter() {
            for (q, w) in self.functional(e)? {
                let slot = rhs.entry(q).or_insert_with(Scalar::zero);
                *slot = slot.add(&w);
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        Ok(lhs == rhs)
    }
}

/// `G(k) × G(k)` acting on points by changing the trivializations at `0`
/// and `∞`.
pub fn translate(model: &BundleModel, h1: usize, h2: usize, p: &Label) -> Result<Label> {
    let s = model.cache.stratum(&p.lambda)?;
    let g = model.group();
    Ok(Label { lambda: p.lambda.clone(), point: s.space.act(g, h1, h2, p.point) })
}

/// A character `θ` of `k_N^×`: `θ(γ^j) = ζ_{q^N-1}^{a j}` for the primitive
/// element `γ` of the level-`N` field, which does not depend on the tower.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Theta {
    pub q: u32,
    pub level: usize,
    pub a: u64,
}

impl Theta {
    pub fn modulus(&self) -> u64 {
        (self.q as u64).pow(self.level as u32) - 1
    }

    pub fn eval(&self, tower: &FieldTower, y: ExtElem) -> Result<Scalar> {
        if y.level != self.level {
            return Err(Error::DegreeMismatch { expected: self.level, got: y.level });
        }
        let f = tower.field(self.level)?;
        let l = f.log(y.value).ok_or(Error::ZeroElement)? as u64;
        let m = self.modulus();
        Ok(Scalar::zeta(m as u32, ((self.a % m) * l % m) as i64))
    }

    /// `θ^{q^j}`.
    pub fn frobenius_twist(&self, j: u32) -> Theta {
        let m = self.modulus();
        let mut a = self.a % m;
        for _ in 0..j {
            a = a * self.q as u64 % m;
        }
        Theta { a, ..self.clone() }
    }
}

/// Where the sign `(-1)^{N-1}` of the elliptic parameter is placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// `u = (-1)^{N-1} diag(θ, θ^q, ...)` and `s` the plain cyclic
    /// permutation, which has determinant `(-1)^{N-1}`.
    InsideU,
    /// No sign anywhere.
    Absent,
    /// `s` the cyclic permutation with one entry `(-1)^{N-1}`, so that
    /// `det s = 1` and `s^N = (-1)^{N-1}`; `u` unsigned. This is the
    /// placement that keeps `(s, u)` inside `SL(N)`.
    InsideS,
}

#[derive(Clone, Debug)]
pub enum ParamShape {
    /// `GL(1)`: `s ∈ F^×` and `u = χ_u ∘ Norm_{n,1}` with
    /// `χ_u(γ^j) = ζ_{q-1}^{b j}`.
    Torus { s: Scalar, b: u64 },
    /// `s` the cyclic permutation and `u(y)` diagonal with entries
    /// `θ(Norm_{n,N} y)^{q^{-j}}`, up to the sign.
    Elliptic { theta: Theta, sign: SignConvention },
}

/// A pair `(s, u)` given by a rule that realizes it at any level `n`.
#[derive(Clone, Debug)]
pub struct LanglandsParam {
    pub q: u32,
    pub rank: usize,
    pub shape: ParamShape,
}

/// `s` as a permutation with scalars: `s e_j = d_j e_{π(j)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub diag: Vec<Scalar>,
}

impl Monomial {
    fn mul(&self, o: &Monomial) -> Monomial {
        // (self ∘ o) e_j = self(o_j e_{π_o j})
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut diag = vec![Scalar::zero(); n];
        for j in 0..n {
            let k = o.perm[j];
            perm[j] = self.perm[k];
            diag[j] = o.diag[j].mul(&self.diag[k]);
        }
        Monomial { perm, diag }
    }

    fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for (j, &p) in self.perm.iter().enumerate() {
            if p == j {
                t = t.add(&self.diag[j]);
            }
        }
        t
    }
}

impl LanglandsParam {
    pub fn s(&self) -> Monomial {
        match &self.shape {
            ParamShape::Torus { s, .. } => Monomial { perm: vec![0], diag: vec![s.clone()] },
            ParamShape::Elliptic { sign, .. } => {
                let n = self.rank;
                let mut diag = vec![Scalar::one(); n];
                if *sign == SignConvention::InsideS && n.is_multiple_of(2) {
                    diag[n - 1] = Scalar::from_int(-1);
                }
                Monomial { perm: (0..n).map(|j| (j + 1) % n).collect(), diag }
            }
        }
    }

    /// `u(y)` for `y ∈ k_n^×` (so `y.level = n`).
    pub fn u(&self, tower: &FieldTower, y: ExtElem) -> Result<Monomial> {
        match &self.shape {
            ParamShape::Torus { b, .. } => {
                let x = tower.norm(y, 1)?;
                let l = tower.base().log(x.value).ok_or(Error::ZeroElement)? as u64;
                let m = self.q as u64 - 1;
                Ok(Monomial { perm: vec![0], diag: vec![Scalar::zeta(m as u32, ((b % m) * l % m) as i64)] })
            }
            ParamShape::Elliptic { theta, sign } => {
                let n = self.rank;
                let t = theta.eval(tower, tower.norm(y, n)?)?;
                let sgn = if *sign == SignConvention::InsideU && (n - 1) % 2 == 1 { -1 } else { 1 };
                let diag = (0..n)
                    .map(|j| {
                        let e = ((n - j) % n) as u32;
                        let v = t.pow((self.q as i64).pow(e))?;
                        Ok(v.scale_int(sgn))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Monomial { perm: (0..n).collect(), diag })
            }
        }
    }

    /// `s u(y) s^{-1} = u(y)^q` at one element.
    pub fn relation_holds(&self, tower: &FieldTower, y: ExtElem) -> Result<bool> {
        let u = self.u(tower, y)?;
        let s = self.s();
        for j in 0..self.rank {
            if u.diag[j] != u.diag[s.perm[j]].pow(self.q as i64)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One realization `(n, y)` used for `φ_{D,f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: usize,
    pub y: u32,
}

#[derive(Clone, Debug)]
pub struct PhiValue {
    pub value: Scalar,
    pub witnesses: [Witness; 2],
}

fn lcm(a: usize, b: usize) -> usize {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let r = x % y;
        x = y;
        y = r;
    }
    a / x * b
}

/// `φ_{D,f}(s, u) = f(s^i u(y))` with `Norm_{n,i}(y) = x`, evaluated for two
/// different `(n, y)`; a disagreement is an error.
pub fn eval_phi(param: &LanglandsParam, d: &Divisor, f: HeckeFn) -> Result<PhiValue> {
    let i = d.degree;
    let n1 = lcm(i, param.rank);
    let mut vals = Vec::new();
    let mut wits = Vec::new();
    for (n, j) in [(n1, 0u64), (2 * n1, 1u64)] {
        let tower = FieldTower::new(param.q, &[i, n, param.rank])?;
        let x = tower.elem(i, d.rep.value);
        let e = tower.dlog(x)? + j * tower.unit_count(i);
        let y = tower.gen_pow(n, e)?;
        if tower.norm(y, i)? != x {
            return Err(Error::CheckFailed(format!("no norm preimage found at level {n}")));
        }
        let s = param.s();
        let mut si = Monomial { perm: (0..param.rank).collect(), diag: vec![Scalar::one(); param.rank] };
        for _ in 0..i {
            si = s.mul(&si);
        }
        let g = si.mul(&param.u(&tower, y)?);
        let v = match f {
            HeckeFn::StdTrace => g.trace(),
            HeckeFn::Monomial(m) => {
                if param.rank != 1 {
                    return Err(Error::Unsupported("monomial f only for GL(1)".into()));
                }
                g.diag[0].pow(m as i64)?
            }
        };
        vals.push(v);
        wits.push(Witness { n, y: y.value });
    }
    if vals[0] != vals[1] {
        return Err(Error::CheckFailed(format!(
            "φ depends on the choice of (n, y): levels {} and {}",
            wits[0].n, wits[1].n
        )));
    }
    let w1 = wits.pop().unwrap();
    let w0 = wits.pop().unwrap();
    Ok(PhiValue { value: vals.swap_remove(0), witnesses: [w0, w1] })
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: alloc::string::String,
    pub passed: bool,
    pub witness: Option<alloc::string::String>,
}

impl Check {
    pub fn new(name: impl Into<alloc::string::String>, passed: bool, witness: Option<alloc::string::String>) -> Check {
        Check { name: name.into(), passed, witness }
    }
}

/// Eigenvalues of `h_{D,z^m}` for `GL(1)` against `φ_{D,f}` for every
/// character of `A = F[k^× × Z]`, every place of degree `≤ i_max`, and
/// `m ∈ {0, 1, 2}`. The eigenfunction of the character `(s, χ_u)` is
/// `E ↦ χ_A(g_E^{-1})` with `χ_A(c t^j) = s^{-j} χ_u((-1)^j c)`.
pub fn gl1_centdiv_suite(q: u32, i_max: usize, s_samples: &[Scalar], degrees: i64) -> Result<Vec<Check>> {
    let g = crate::groups::FiniteGroup::new(1, q, Kind::GL)?;
    let model = BundleModel::new(g, 1)?;
    let f = model.field().clone();
    let m = q as u64 - 1;
    let mut points = Vec::new();
    for d in -degrees..=degrees {
        for c in f.units() {
            points.push(model.canonical_form(&LMat { n: 1, e: vec![LPoly::monomial(c, d)] })?);
        }
    }
    let chi_u = |b: u64, c: u32| -> Scalar {
        let l = f.log(c).unwrap() as u64;
        Scalar::zeta(m as u32, ((b * l) % m) as i64)
    };
    let mut out = Vec::new();
    for i in 1..=i_max {
        let tower = FieldTower::new(q, &[i])?;
        for d in tower.divisors_of_degree(i)? {
            for mm in [0u32, 1, 2] {
                let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::Monomial(mm), Normalization::Literal)?;
                for s in s_samples {
                    for b in 0..m {
                        let eigenfn = |p: &Label| -> Result<Scalar> {
                            let t = model.transition(p)?;
                            let e = t.get(0, 0);
                            let j = e.valuation().ok_or(Error::ZeroElement)?;
                            let c = e.coeff(j);
                            // χ_A of c^{-1} t^{-j}
                            let arg = f.inv(c)?;
                            let arg = if j % 2 == 0 { arg } else { f.neg(arg) };
                            Ok(s.pow(j)?.mul(&chi_u(b, arg)))
                        };
                        let param = LanglandsParam { q, rank: 1, shape: ParamShape::Torus { s: s.clone(), b } };
                        let phi = eval_phi(&param, &d, HeckeFn::Monomial(mm))?;
                        let mut ok = true;
                        let mut witness = None;
                        for p in &points {
                            let lhs = op.apply_at(&eigenfn, p)?;
                            let rhs = phi.value.mul(&eigenfn(p)?);
                            if lhs != rhs {
                                ok = false;
                                witness = Some(format!("point {p}"));
                                break;
                            }
                        }
                        out.push(Check::new(
                            format!("gl1 q={q} i={i} x={} m={mm} b={b} s={:?}", d.rep.value, s.coefficient_strings()),
                            ok,
                            witness,
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Commutators of `h` with `δ_x` at both sides, at every point of `points`.
pub fn centrality_check(op: &DivisorHeckeOp, gens: &[Label], points: &[Label]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for side in [Side::Zero, Side::Infinity] {
        for x in gens {
            let mut bad = None;
            for p in points {
                if !op.commutes_at(side, x, p)? {
                    bad = Some(format!("point {p}"));
                    break;
                }
            }
            out.push(Check::new(format!("commutes {side:?} {x}"), bad.is_none(), bad));
        }
    }
    Ok(out)
}

/// `a` as a sparse element, for callers that build generator lists.
pub fn generator(l: Label) -> HeckeElement {
    HeckeElement::basis(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Coweight, FiniteGroup, Window};

    #[test]
    fn normalizations() {
        assert_eq!(normalization(3, 2, 2, Normalization::Literal).unwrap(), Scalar::from_frac(1, 3));
        assert_eq!(normalization(3, 2, 2, Normalization::Inline).unwrap(), Scalar::from_frac(1, 9));
        assert_eq!(normalization(5, 1, 3, Normalization::Literal).unwrap(), Scalar::one());
        let c = normalization(2, 2, 1, Normalization::Literal).unwrap();
        assert_eq!(c.mul(&c), Scalar::from_frac(1, 2));
    }

    #[test]
    fn modification_counts_and_types() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let model = BundleModel::new(g, 1).unwrap();
        let tower = FieldTower::new(3, &[2]).unwrap();
        let d = tower.divisors_of_degree(2).unwrap()[0];
        let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal).unwrap();
        let delta = model.delta_point().unwrap();
        let mods = op.modifications(&delta).unwrap();
        assert_eq!(mods.len(), 10);
        // k-rational lines give O ⊕ O(2), the others O(1) ⊕ O(1)
        let balanced = mods.iter().filter(|l| l.lambda == Coweight(vec![1, 1])).count();
        let split = mods.iter().filter(|l| l.lambda == Coweight(vec![2, 0])).count();
        assert_eq!((balanced, split), (6, 4));

        let d1 = tower.divisors_of_degree(1).unwrap()[0];
        let op1 = DivisorHeckeOp::new(&model, &tower, d1, HeckeFn::StdTrace, Normalization::Literal).unwrap();
        let mods = op1.modifications(&delta).unwrap();
        assert_eq!(mods.len(), 4);
        assert!(mods.iter().all(|l| l.lambda == Coweight(vec![1, 0])));
    }

    #[test]
    fn pgl_grading_shift() {
        let g = FiniteGroup::new(2, 3, Kind::PGL).unwrap();
        let model = BundleModel::new(g, 1).unwrap();
        let tower = FieldTower::new(3, &[1]).unwrap();
        let d = tower.divisors_of_degree(1).unwrap()[1];
        let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal).unwrap();
        let w = Window::generated(&[Coweight(vec![1, 0])], Kind::PGL).unwrap();
        for p in model.basis(&w).unwrap() {
            let parity = p.lambda.degree().rem_euclid(2);
            for e in op.modifications(&p).unwrap().iter() {
                let e_par = e.lambda.0.iter().sum::<i64>().rem_euclid(2);
                assert_eq!(e_par, (parity + 1) % 2);
            }
        }
    }

    #[test]
    fn sign_placements() {
        let tower = FieldTower::new(2, &[2, 4]).unwrap();
        let theta = Theta { q: 2, level: 2, a: 1 };
        let mk = |sign| LanglandsParam { q: 2, rank: 2, shape: ParamShape::Elliptic { theta: theta.clone(), sign } };
        let (on_u, on_s) = (mk(SignConvention::InsideU), mk(SignConvention::InsideS));
        let y = tower.generator(2).unwrap();
        assert!(!on_u.relation_holds(&tower, y).unwrap());
        assert!(on_s.relation_holds(&tower, y).unwrap());
        for d in tower.divisors_of_degree(2).unwrap() {
            let a = eval_phi(&on_u, &d, HeckeFn::StdTrace).unwrap().value;
            assert_eq!(a, eval_phi(&on_s, &d, HeckeFn::StdTrace).unwrap().value);
        }
        for d in tower.divisors_of_degree(4).unwrap() {
            let a = eval_phi(&on_u, &d, HeckeFn::StdTrace).unwrap().value;
            assert_eq!(a.neg(), eval_phi(&on_s, &d, HeckeFn::StdTrace).unwrap().value);
        }
    }

    #[test]
    fn phi_examples() {
        let tower = FieldTower::new(3, &[1, 2]).unwrap();
        for d in tower.divisors_of_degree(1).unwrap() {
            for b in 0..2 {
                let param = LanglandsParam { q: 3, rank: 1, shape: ParamShape::Torus { s: Scalar::one(), b } };
                let v = eval_phi(&param, &d, HeckeFn::Monomial(1)).unwrap().value;
                let l = tower.base().log(d.rep.value).unwrap() as i64;
                assert_eq!(v, Scalar::zeta(2, b as i64 * l));
            }
        }
        let theta = Theta { q: 3, level: 2, a: 2 };
        let param = LanglandsParam {
            q: 3,
            rank: 2,
            shape: ParamShape::Elliptic { theta: theta.clone(), sign: SignConvention::InsideU },
        };
        for d in tower.divisors_of_degree(2).unwrap() {
            let v = eval_phi(&param, &d, HeckeFn::StdTrace).unwrap().value;
            let t = theta.eval(&tower, d.rep).unwrap();
            assert_eq!(v, t.add(&t.pow(3).unwrap()).neg());
            assert!(param.relation_holds(&tower, d.rep).unwrap());
        }
        for d in tower.divisors_of_degree(1).unwrap() {
            assert!(eval_phi(&param, &d, HeckeFn::StdTrace).unwrap().value.is_zero());
        }
    }

    #[test]
    fn gl1_suite_small() {
        let samples = [Scalar::one(), Scalar::from_int(-2), Scalar::zeta(3, 1)];
        let checks = gl1_centdiv_suite(3, 2, &samples, 1).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn centrality_small() {
        let g = FiniteGroup::new(2, 2, Kind::PGL).unwrap();
        let model = BundleModel::new(g.clone(), 1).unwrap();
        let tower = FieldTower::new(2, &[2]).unwrap();
        let d = tower.divisors_of_degree(2).unwrap()[0];
        let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal).unwrap();
        let w = Window::generated(&[Coweight(vec![1, 0])], Kind::PGL).unwrap();
        let points = model.basis(&w).unwrap();
        let mut gens: Vec<Label> = Vec::new();
        for x in g.elements().step_by(2) {
            gens.push(model.local.label(&LMat::from_const(g.matrix(x), 2)).unwrap());
        }
        let a10 = model.local.cache.basis(&w).unwrap();
        gens.extend(a10.into_iter().filter(|l| l.lambda != Coweight::zero(2)).take(6));
        for c in centrality_check(&op, &gens, &points).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
