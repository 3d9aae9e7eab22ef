//! The Hecke algebra of `G(k((t)))` with respect to the first congruence
//! subgroup `K_1`: labels of double cosets, convolution, the independent
//! lattice-and-frame census, and Jantzen filtrations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::arith::{Gf, Scalar};
use crate::error::{Error, Result};
use crate::groups::{Coweight, FiniteGroup, Kind, ParabolicDatum, Sign, TwistedProductSpace, Window};
use crate::linalg::gfmat;
use crate::poly::{cartan, LMat, LPoly};

/// A stratum: the parabolic datum of `λ` and a twisted product space.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub lambda: Coweight,
    pub datum: ParabolicDatum,
    pub space: TwistedProductSpace,
}

/// A basis element of `A` (or a point of `V`): a coweight and a point of the
/// corresponding twisted product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub lambda: Coweight,
    pub point: usize,
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}", self.lambda, self.point)
    }
}

/// Lazily built strata over one finite group, for one sign.
#[derive(Debug)]
pub struct StrataCache {
    pub group: FiniteGroup,
    sign: Sign,
    strata: RefCell<BTreeMap<Coweight, Rc<Stratum>>>,
}

impl StrataCache {
    pub fn new(group: FiniteGroup, sign: Sign) -> StrataCache {
        StrataCache { group, sign, strata: RefCell::new(BTreeMap::new()) }
    }

    pub fn kind(&self) -> Kind {
        self.group.kind()
    }

    pub fn field(&self) -> &Gf {
        self.group.field()
    }

    pub fn normal(&self, lambda: &Coweight) -> Coweight {
        lambda.normal(self.group.kind())
    }

    pub fn stratum(&self, lambda: &Coweight) -> Result<Rc<Stratum>> {
        let lam = self.normal(lambda);
        if let Some(s) = self.strata.borrow().get(&lam) {
            return Ok(s.clone());
        }
        let datum = ParabolicDatum::new(&lam, &self.group)?;
        let space = TwistedProductSpace::new(&self.group, &datum, self.sign);
        let s = Rc::new(Stratum { lambda: lam.clone(), datum, space });
        self.strata.borrow_mut().insert(lam, s.clone());
        Ok(s)
    }

    /// Label of the pair `(g1, g2)` of constant matrices in stratum `λ`.
    pub fn label_of_pair(&self, lambda: &Coweight, g1: &[u32], g2: &[u32]) -> Result<Label> {
        let s = self.stratum(lambda)?;
        let a = self.group.index_of(g1).ok_or(Error::Singular)?;
        let b = self.group.index_of(g2).ok_or(Error::Singular)?;
        Ok(Label { lambda: s.lambda.clone(), point: s.space.point(a, b) })
    }

    /// All labels in a window, ordered by stratum then point.
    pub fn basis(&self, window: &Window) -> Result<Vec<Label>> {
        let mut out = Vec::new();
        for lam in window.members() {
            let s = self.stratum(lam)?;
            out.extend((0..s.space.len()).map(|p| Label { lambda: s.lambda.clone(), point: p }));
        }
        Ok(out)
    }
}

/// A finitely supported function on `K_1\G(K)/K_1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElement {
    values: BTreeMap<Label, Scalar>,
}

impl HeckeElement {
    pub fn zero() -> HeckeElement {
        HeckeElement::default()
    }

    pub fn basis(l: Label) -> HeckeElement {
        let mut h = HeckeElement::zero();
        h.add_at(l, &Scalar::one());
        h
    }

    pub fn add_at(&mut self, l: Label, c: &Scalar) {
        let v = self.get(&l).add(c);
        if v.is_zero() {
            self.values.remove(&l);
        } else {
            self.values.insert(l, v);
        }
    }

    pub fn get(&self, l: &Label) -> Scalar {
        self.values.get(l).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Label, &Scalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        let mut r = self.clone();
        for (l, c) in &o.values {
            r.add_at(l.clone(), c);
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> HeckeElement {
        let mut r = HeckeElement::zero();
        for (l, v) in &self.values {
            r.add_at(l.clone(), &v.mul(c));
        }
        r
    }

    /// Coweights occurring in the support.
    pub fn types(&self) -> BTreeSet<Coweight> {
        self.values.keys().map(|l| l.lambda.clone()).collect()
    }
}

/// The Hecke algebra `A` over one finite group.
#[derive(Debug)]
pub struct LocalModel {
    pub cache: StrataCache,
    structure: RefCell<BTreeMap<(Label, Label), Vec<(Label, i64)>>>,
}

fn scalar_matrix(n: usize, c: u32) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    for i in 0..n {
        m[i * n + i] = c;
    }
    m
}

impl LocalModel {
    pub fn new(group: FiniteGroup) -> LocalModel {
        LocalModel { cache: StrataCache::new(group, Sign::PlusMinus), structure: RefCell::new(BTreeMap::new()) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.cache.group
    }

    pub fn n(&self) -> usize {
        self.cache.group.rank()
    }

    /// The double-coset label of an invertible Laurent matrix in `t`:
    /// with `κ = a t^λ b`, the point of `(b(0)^{-1}, a(0))`.
    pub fn label(&self, kappa: &LMat) -> Result<Label> {
        let f = self.cache.field();
        let c = cartan(f, kappa)?;
        let n = kappa.n;
        let lam = Coweight(c.lambda);
        let binv = gfmat::inverse(f, &c.b0, n)?;
        self.cache.label_of_pair(&lam, &binv, &c.a0)
    }

    /// `g2 · t^λ · g1^{-1}` for the canonical representative `(g1, g2)`.
    pub fn representative(&self, l: &Label) -> Result<LMat> {
        let s = self.cache.stratum(&l.lambda)?;
        let (g1, g2) = s.space.rep(l.point);
        let g = &self.cache.group;
        let n = g.rank();
        let a = LMat::from_const(g.matrix(g2), n);
        let binv = LMat::from_const(g.matrix(g.inv(g1)), n);
        let f = self.cache.field();
        Ok(a.mul(f, &LMat::diag_power(&l.lambda.0)).mul(f, &binv))
    }

    /// Number of left `K_1`-cosets in a double coset of type `λ`.
    pub fn coset_count(lambda: &Coweight) -> u64 {
        let q_exp: i64 = (0..lambda.rank())
            .flat_map(|i| (i + 1..lambda.rank()).map(move |j| (i, j)))
            .map(|(i, j)| lambda.0[i] - lambda.0[j])
            .sum();
        q_exp as u64
    }

    /// Left coset representatives `h K_1` of the double coset:
    /// `a · (1 + Σ_{i<j} c_ij E_ij) · t^λ · b` with `c_ij ∈ t k[t]` of degree
    /// at most `λ_i - λ_j`.
    pub fn coset_reps(&self, l: &Label) -> Result<Vec<LMat>> {
        let s = self.cache.stratum(&l.lambda)?;
        let (g1, g2) = s.space.rep(l.point);
        let g = &self.cache.group;
        let f = self.cache.field();
        let n = g.rank();
        let lam = &l.lambda.0;
        let a = LMat::from_const(g.matrix(g2), n);
        let tl_b = LMat::diag_power(lam).mul(f, &LMat::from_const(g.matrix(g.inv(g1)), n));
        let slots: Vec<(usize, usize, i64)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .flat_map(|(i, j)| (1..=lam[i] - lam[j]).map(move |d| (i, j, d)))
            .collect();
        let q = f.size() as u64;
        let total = q.checked_pow(slots.len() as u32).ok_or(Error::BudgetExceeded { required: u64::MAX, budget: 1 << 20 })?;
        if total > 1 << 20 {
            return Err(Error::BudgetExceeded { required: total, budget: 1 << 20 });
        }
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut k = LMat::identity(n);
            let mut c = code;
            for &(i, j, d) in &slots {
                let v = (c % q) as u32;
                c /= q;
                if v != 0 {
                    k.e[i * n + j] = k.e[i * n + j].add(f, &LPoly::monomial(v, d));
                }
            }
            out.push(a.mul(f, &k).mul(f, &tl_b));
        }
        Ok(out)
    }

    pub fn unit(&self) -> HeckeElement {
        self.delta_group(self.cache.group.identity()).unwrap()
    }

    /// `δ_{K_1 g K_1}` for `g ∈ G(k)`.
    pub fn delta_group(&self, g: usize) -> Result<HeckeElement> {
        let n = self.n();
        let m = LMat::from_const(self.cache.group.matrix(g), n);
        Ok(HeckeElement::basis(self.label(&m)?))
    }

    /// `e_fin = (1/|G|) Σ_g δ_g`.
    pub fn e_fin(&self) -> Result<HeckeElement> {
        let g = &self.cache.group;
        let c = Scalar::from_frac(1, g.order() as i64);
        let mut out = HeckeElement::zero();
        for x in g.elements() {
            out = out.add(&self.delta_group(x)?.scale(&c));
        }
        Ok(out)
    }

    /// Structure constants `T_x ∗ T_y = Σ_z c_z T_z` (integers).
    pub fn product(&self, x: &Label, y: &Label) -> Result<Vec<(Label, i64)>> {
        if let Some(v) = self.structure.borrow().get(&(x.clone(), y.clone())) {
            return Ok(v.clone());
        }
        let f = self.cache.field();
        let hx = self.coset_reps(x)?;
        let hy = self.coset_reps(y)?;
        let mut counts: BTreeMap<Label, u64> = BTreeMap::new();
        for a in &hx {
            for b in &hy {
                *counts.entry(self.label(&a.mul(f, b))?).or_default() += 1;
            }
        }
        let q = f.size() as u64;
        let mut out = Vec::new();
        for (z, c) in counts {
            let nz = q.pow(Self::coset_count(&z.lambda) as u32);
            if c % nz != 0 {
                return Err(Error::CheckFailed(format!("non-integral structure constant at {z}: {c}/{nz}")));
            }
            out.push((z, (c / nz) as i64));
        }
        self.structure.borrow_mut().insert((x.clone(), y.clone()), out.clone());
        Ok(out)
    }

    /// Convolution; when a window is given, a result outside it is an error.
    pub fn convolve(&self, a: &HeckeElement, b: &HeckeElement, window: Option<&Window>) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (x, ca) in a.support() {
            for (y, cb) in b.support() {
                let ab = ca.mul(cb);
                for (z, c) in self.product(x, y)? {
                    if let Some(w) = window {
                        if !w.contains(&z.lambda) {
                            return Err(Error::WindowOverflow(format!("{z} outside window")));
                        }
                    }
                    out.add_at(z, &ab.scale_int(c));
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Independent census: K_1-orbits on (lattice, frame of L/tL).

struct TruncSpace<'a> {
    f: &'a Gf,
    n: usize,
    m: usize,
}

impl TruncSpace<'_> {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn apply(&self, x: &LMat, v: &[u32]) -> Vec<u32> {
        let (n, m, f) = (self.n, self.m, self.f);
        let mut out = vec![0u32; n * m];
        for i in 0..n {
            for j in 0..n {
                let p = x.get(i, j);
                if p.is_zero() {
                    continue;
                }
                for (k, &c) in p.c.iter().enumerate() {
                    let a = p.low + k as i64;
                    if c == 0 || a < 0 || a as usize >= m {
                        continue;
                    }
                    for b in 0..m - a as usize {
                        let y = v[j * m + b];
                        if y != 0 {
                            let idx = i * m + a as usize + b;
                            out[idx] = f.add(out[idx], f.mul(c, y));
                        }
                    }
                }
            }
        }
        out
    }

    fn shift(&self, v: &[u32]) -> Vec<u32> {
        let (n, m) = (self.n, self.m);
        let mut out = vec![0u32; n * m];
        for i in 0..n {
            for d in 1..m {
                out[i * m + d] = v[i * m + d - 1];
            }
        }
        out
    }

    fn rref(&self, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let c = self.dim();
        let mut flat: Vec<u32> = rows.iter().flatten().copied().collect();
        let piv = gfmat::rref(self.f, &mut flat, rows.len(), c);
        (0..piv.len()).map(|r| flat[r * c..(r + 1) * c].to_vec()).collect()
    }

    fn reduce(&self, basis: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for row in basis {
            let p = row.iter().position(|&x| x != 0).unwrap();
            let c = v[p];
            if c != 0 {
                for (k, &r) in row.iter().enumerate() {
                    v[k] = self.f.sub(v[k], self.f.mul(c, r));
                }
            }
        }
        v
    }

    fn t_lattice(&self, l: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let shifted: Vec<Vec<u32>> = l.iter().map(|v| self.shift(v)).collect();
        self.rref(&shifted)
    }
}

/// An additive basis of `k` over its prime field.
fn additive_basis(f: &Gf) -> Vec<u32> {
    let p = f.characteristic();
    (0..f.prime_degree()).map(|k| p.pow(k)).collect()
}

/// Raw census of `K_1`-double cosets of type `λ` (independent of the Cartan
/// labels): orbits of `K_1` (times scalars for PGL) on pairs (lattice of
/// type `λ`, frame of `L/tL`), computed modulo `t^m`. Returns one integral
/// representative `κ` per orbit.
pub fn raw_double_coset_census(g: &FiniteGroup, lambda: &Coweight, m: usize) -> Result<Vec<LMat>> {
    if !lambda.is_dominant() {
        return Err(Error::NonDominant);
    }
    let n = g.rank();
    let f = g.field();
    let low = *lambda.0.last().unwrap();
    let lam: Vec<i64> = lambda.0.iter().map(|x| x - low).collect();
    if m < lam[0] as usize + 1 {
        return Err(Error::InsufficientPrecision);
    }
    let sp = TruncSpace { f, n, m };
    let basis_k = additive_basis(f);
    let mut k1_gens: Vec<LMat> = Vec::new();
    for j in 1..m as i64 {
        for a in 0..n {
            for b in 0..n {
                for &c in &basis_k {
                    let mut x = LMat::identity(n);
                    x.e[a * n + b] = x.e[a * n + b].add(f, &LPoly::monomial(c, j));
                    k1_gens.push(x);
                }
            }
        }
    }
    let mut const_gens: Vec<LMat> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                for &c in &basis_k {
                    let mut x = scalar_matrix(n, 1);
                    x[a * n + b] = c;
                    const_gens.push(LMat::from_const(&x, n));
                }
            }
        }
    }
    let mut d = scalar_matrix(n, 1);
    d[0] = f.generator();
    const_gens.push(LMat::from_const(&d, n));
    // lattices: G(O)-orbit of t^λ O^N
    let lattice_of = |x: &LMat| -> Vec<Vec<u32>> {
        let mut rows = Vec::new();
        for j in 0..n {
            let mut e = vec![0u32; n * m];
            e[j * m] = 1;
            let col = sp.apply(x, &e);
            let mut v = col;
            for _ in 0..m {
                rows.push(v.clone());
                v = sp.shift(&v);
            }
        }
        sp.rref(&rows)
    };
    let start = lattice_of(&LMat::diag_power(&lam));
    let mut lattices: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    let mut queue = vec![start.clone()];
    lattices.insert(start);
    let all_gens: Vec<&LMat> = const_gens.iter().chain(k1_gens.iter()).collect();
    while let Some(l) = queue.pop() {
        for x in &all_gens {
            let img: Vec<Vec<u32>> = l.iter().map(|v| sp.apply(x, v)).collect();
            let r = sp.rref(&img);
            if lattices.insert(r.clone()) {
                queue.push(r);
            }
        }
    }
    // frames
    let gl = if g.kind() == Kind::GL { None } else { Some(FiniteGroup::over_field(n, f.clone(), Kind::GL, u64::MAX)?) };
    let glg = gl.as_ref().unwrap_or(g);
    type State = (Vec<Vec<u32>>, Vec<Vec<u32>>);
    let mut states: Vec<State> = Vec::new();
    let mut index: BTreeMap<State, usize> = BTreeMap::new();
    for l in &lattices {
        let tl = sp.t_lattice(l);
        let mut cur = tl.clone();
        let mut ell: Vec<Vec<u32>> = Vec::new();
        for v in l {
            let r = sp.reduce(&cur, v);
            if r.iter().any(|&x| x != 0) {
                ell.push(v.clone());
                let mut nb = cur.clone();
                nb.push(r);
                cur = sp.rref(&nb);
            }
        }
        if ell.len() != n {
            return Err(Error::CheckFailed("lattice quotient of wrong dimension".into()));
        }
        for h in glg.elements() {
            let gm = glg.matrix(h);
            let frame: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut v = vec![0u32; n * m];
                    for i in 0..n {
                        let c = gm[i * n + j];
                        if c != 0 {
                            for (k, &x) in ell[i].iter().enumerate() {
                                v[k] = f.add(v[k], f.mul(c, x));
                            }
                        }
                    }
                    sp.reduce(&tl, &v)
                })
                .collect();
            let st = (l.clone(), frame);
            index.insert(st.clone(), states.len());
            states.push(st);
        }
    }
    // union-find over K_1 (and scalars for PGL)
    let mut gens: Vec<LMat> = k1_gens;
    if g.kind() == Kind::PGL {
        gens.push(LMat::from_const(&scalar_matrix(n, f.generator()), n));
    }
    let mut parent: Vec<usize> = (0..states.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (sidx, (l, frame)) in states.iter().enumerate() {
        for x in &gens {
            let img: Vec<Vec<u32>> = l.iter().map(|v| sp.apply(x, v)).collect();
            let nl = sp.rref(&img);
            let tl = sp.t_lattice(&nl);
            let nf: Vec<Vec<u32>> = frame.iter().map(|v| sp.reduce(&tl, &sp.apply(x, v))).collect();
            let key = (nl, nf);
            let Some(&t) = index.get(&key) else {
                return Err(Error::CheckFailed("orbit left the enumerated state space".into()));
            };
            let (ra, rb) = (find(&mut parent, sidx), find(&mut parent, t));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut reps = Vec::new();
    for sidx in 0..states.len() {
        if find(&mut parent, sidx) == sidx {
            let (_, frame) = &states[sidx];
            let mut e = vec![LPoly::zero(); n * n];
            for (j, v) in frame.iter().enumerate() {
                for i in 0..n {
                    let coeffs: Vec<u32> = v[i * m..(i + 1) * m].to_vec();
                    e[i * n + j] = LPoly::from_coeffs(low, coeffs);
                }
            }
            reps.push(LMat { n, e });
        }
    }
    Ok(reps)
}

// ---------------------------------------------------------------------------
// Jantzen filtrations.

/// The Jantzen filtrations of `κ`: `E_i` on the source fiber (`v` with a lift
/// `s` such that `t^{-i} κ s` is integral) and `E'_i` on the target fiber
/// (defined through `κ^{-1}`). Both are decreasing in `i`. `levels` lists the
/// indices `i_min..=i_max` covered; `e[k]`, `e_prime[k]` are reduced bases
/// of the subspaces at `i = i_min + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JantzenFlag {
    pub n: usize,
    pub i_min: i64,
    pub e: Vec<Vec<Vec<u32>>>,
    pub e_prime: Vec<Vec<Vec<u32>>>,
}

impl JantzenFlag {
    fn at(list: &[Vec<Vec<u32>>], i_min: i64, i: i64, n: usize) -> Vec<Vec<u32>> {
        if i < i_min {
            return (0..n).map(|j| (0..n).map(|k| (j == k) as u32).collect()).collect();
        }
        let k = (i - i_min) as usize;
        list.get(k).cloned().unwrap_or_default()
    }

    pub fn e_at(&self, i: i64) -> Vec<Vec<u32>> {
        Self::at(&self.e, self.i_min, i, self.n)
    }

    /// `E'_i`; above the range `E'_i = E'`, below it `0`.
    pub fn e_prime_at(&self, i: i64) -> Vec<Vec<u32>> {
        let top = self.i_min + self.e_prime.len() as i64;
        if i >= top {
            return Vec::new();
        }
        Self::at(&self.e_prime, self.i_min, i, self.n)
    }

    /// `dim gr_i(E) = dim E_i - dim E_{i+1}`, as a decreasing list of `i`
    /// with multiplicity: the type of the flag.
    pub fn flag_type(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let top = self.i_min + self.e.len() as i64;
        for i in (self.i_min..top).rev() {
            let d = self.e_at(i).len() - self.e_at(i + 1).len();
            out.extend(core::iter::repeat_n(i, d));
        }
        out
    }

    /// `dim gr_i(E')` with `gr_i(E') = E'_i / E'_{i+1}`.
    pub fn prime_graded_dims(&self) -> BTreeMap<i64, usize> {
        let top = self.i_min + self.e_prime.len() as i64;
        let mut out = BTreeMap::new();
        for i in self.i_min..top {
            let d = self.e_prime_at(i).len() - self.e_prime_at(i + 1).len();
            if d > 0 {
                out.insert(i, d);
            }
        }
        out
    }
}

/// Unknown layout: `s_0, ..., s_b` each in `k^n`; returns the nullspace of
/// the conditions `(κ s)_e = 0` for `e_lo <= e < e_hi`.
fn lift_solutions(f: &Gf, kappa: &LMat, b: usize, e_lo: i64, e_hi: i64) -> (Vec<Vec<u32>>, usize) {
    let n = kappa.n;
    let cols = n * (b + 1);
    let a_min = kappa.min_valuation().unwrap_or(0);
    let mut rows: Vec<u32> = Vec::new();
    let mut nrows = 0;
    for e in e_lo..e_hi {
        for i in 0..n {
            let mut r = vec![0u32; cols];
            for bb in 0..=b {
                let a = e - bb as i64;
                if a < a_min {
                    continue;
                }
                for j in 0..n {
                    r[bb * n + j] = f.add(r[bb * n + j], kappa.get(i, j).coeff(a));
                }
            }
            rows.extend(r);
            nrows += 1;
        }
    }
    if nrows == 0 {
        let ns = (0..cols).map(|c| (0..cols).map(|k| (k == c) as u32).collect()).collect();
        return (ns, cols);
    }
    (gfmat::nullspace(f, &rows, nrows, cols), cols)
}

fn span_basis(f: &Gf, vs: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let mut flat: Vec<u32> = vs.iter().flatten().copied().collect();
    let piv = gfmat::rref(f, &mut flat, vs.len(), n);
    (0..piv.len()).map(|r| flat[r * n..(r + 1) * n].to_vec()).collect()
}

/// `(κ s)_e` for a lift vector laid out as in [`lift_solutions`].
fn kappa_coeff(f: &Gf, kappa: &LMat, s: &[u32], b: usize, e: i64) -> Vec<u32> {
    let n = kappa.n;
    (0..n)
        .map(|i| {
            let mut acc = 0u32;
            for bb in 0..=b {
                for j in 0..n {
                    let c = kappa.get(i, j).coeff(e - bb as i64);
                    if c != 0 {
                        acc = f.add(acc, f.mul(c, s[bb * n + j]));
                    }
                }
            }
            acc
        })
        .collect()
}

fn e_subspace(f: &Gf, kappa: &LMat, i: i64) -> Vec<Vec<u32>> {
    let n = kappa.n;
    let a_min = kappa.min_valuation().unwrap_or(0);
    if i <= a_min {
        return span_basis(f, &(0..n).map(|j| (0..n).map(|k| (j == k) as u32).collect()).collect::<Vec<_>>(), n);
    }
    let b = (i - 1 - a_min) as usize;
    let (ns, _) = lift_solutions(f, kappa, b, a_min, i);
    let proj: Vec<Vec<u32>> = ns.iter().map(|v| v[..n].to_vec()).collect();
    span_basis(f, &proj, n)
}

fn e_prime_subspace(f: &Gf, kappa: &LMat, i: i64) -> Vec<Vec<u32>> {
    // {(κ s)_{-i} : (κ s)_e = 0 for e < -i}
    let n = kappa.n;
    let a_min = kappa.min_valuation().unwrap_or(0);
    if -i < a_min {
        return Vec::new();
    }
    let b = (-i - a_min) as usize;
    let (ns, _) = lift_solutions(f, kappa, b, a_min, -i);
    let img: Vec<Vec<u32>> = ns.iter().map(|s| kappa_coeff(f, kappa, s, b, -i)).collect();
    span_basis(f, &img, n)
}

pub fn jantzen_flag(f: &Gf, kappa: &LMat) -> Result<JantzenFlag> {
    let n = kappa.n;
    let det = kappa.det(f);
    let vdet = det.valuation().ok_or(Error::Singular)?;
    let a_min = kappa.min_valuation().ok_or(Error::Singular)?;
    let i_min = a_min;
    let i_max = vdet - (n as i64 - 1) * a_min + 1;
    let e: Vec<Vec<Vec<u32>>> = (i_min..=i_max).map(|i| e_subspace(f, kappa, i)).collect();
    // E'_i is nonzero only for -i >= a_min; it grows as i decreases
    let lo = -i_max;
    let e_prime_all: Vec<(i64, Vec<Vec<u32>>)> = (lo..=-a_min).map(|i| (i, e_prime_subspace(f, kappa, i))).collect();
    // store E' on the same index range as E, shifting the base
    let i0 = i_min.min(lo);
    let mut ee = Vec::new();
    let mut ep = Vec::new();
    for i in i0..=i_max.max(-a_min) {
        ee.push(match i.checked_sub(i_min).and_then(|k| e.get(k as usize)) {
            Some(v) if i >= i_min => v.clone(),
            _ => e_subspace(f, kappa, i),
        });
        ep.push(
            e_prime_all
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| if i < lo { e_prime_subspace(f, kappa, i) } else { Vec::new() }),
        );
    }
    Ok(JantzenFlag { n, i_min: i0, e: ee, e_prime: ep })
}

/// The graded matching `gr_i(E) → gr_{-i}(E')`: for `v ∈ E_i`, the value
/// `(t^{-i} κ s)(0)` for some lift `s` of `v`.
pub fn jantzen_match(f: &Gf, kappa: &LMat, i: i64, v: &[u32]) -> Result<Vec<u32>> {
    let n = kappa.n;
    let a_min = kappa.min_valuation().ok_or(Error::Singular)?;
    if i <= a_min {
        // no conditions below degree i beyond integrality; s = v works
        let mut s = vec![0u32; n * ((i - a_min).max(0) as usize + 1)];
        s[..n].copy_from_slice(v);
        let b = (i - a_min).max(0) as usize;
        return Ok(kappa_coeff(f, kappa, &s, b, i));
    }
    let b = (i - a_min) as usize;
    // conditions: (κ s)_e = 0 for e < i, s_0 = v
    let (ns, cols) = lift_solutions(f, kappa, b, a_min, i);
    // find combination of nullspace vectors with prefix v
    let k = ns.len();
    let mut m = vec![0u32; n * k];
    for (c, s) in ns.iter().enumerate() {
        for r in 0..n {
            m[r * k + c] = s[r];
        }
    }
    let x = gfmat::solve(f, &m, v, n, k).ok_or_else(|| Error::Invalid("vector not in E_i".into()))?;
    let mut s = vec![0u32; cols];
    for (c, sv) in ns.iter().enumerate() {
        if x[c] != 0 {
            for (idx, &val) in sv.iter().enumerate() {
                s[idx] = f.add(s[idx], f.mul(x[c], val));
            }
        }
    }
    Ok(kappa_coeff(f, kappa, &s, b, i))
}

/// The point of `G/U ×_M G/U^-` attached to `κ` through its Jantzen data:
/// a frame `g1` adapted to the flag `E_•`, and `g2` whose columns are the
/// graded matchings of the columns of `g1`.
pub fn jantzen_label(model: &LocalModel, kappa: &LMat) -> Result<Label> {
    let f = model.cache.field();
    let n = kappa.n;
    let flag = jantzen_flag(f, kappa)?;
    let ty = flag.flag_type();
    if ty.len() != n {
        return Err(Error::CheckFailed("flag type has wrong rank".into()));
    }
    let mut g1_cols: Vec<Vec<u32>> = Vec::new();
    let mut g2_cols: Vec<Vec<u32>> = Vec::new();
    let mut distinct: Vec<i64> = ty.clone();
    distinct.dedup();
    for &i in &distinct {
        let ei = flag.e_at(i);
        // extend the span of previous columns to E_i
        for v in &ei {
            let mut trial = g1_cols.clone();
            trial.push(v.clone());
            if span_basis(f, &trial, n).len() > g1_cols.len() {
                g2_cols.push(jantzen_match(f, kappa, i, v)?);
                g1_cols.push(v.clone());
            }
        }
    }
    let to_mat = |cols: &[Vec<u32>]| -> Vec<u32> {
        let mut m = vec![0u32; n * n];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[i * n + j] = c[i];
            }
        }
        m
    };
    model.cache.label_of_pair(&Coweight(ty), &to_mat(&g1_cols), &to_mat(&g2_cols))
}

/// A random element of `G(O)` with entries of degree at most `deg`.
pub fn random_g_o<R: rand_core::RngCore>(f: &Gf, n: usize, deg: usize, rng: &mut R) -> LMat {
    let q = f.size();
    let c0 = loop {
        let m: Vec<u32> = (0..n * n).map(|_| rng.next_u32() % q).collect();
        if gfmat::det(f, &m, n) != 0 {
            break m;
        }
    };
    let mut out = LMat::from_const(&c0, n);
    for d in 1..=deg as i64 {
        for idx in 0..n * n {
            let v = rng.next_u32() % q;
            if v != 0 {
                out.e[idx] = out.e[idx].add(f, &LPoly::monomial(v, d));
            }
        }
    }
    out
}

/// `m · V` for a constant matrix and a subspace given by basis rows.
pub fn transport(f: &Gf, m: &[u32], basis: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
    let imgs: Vec<Vec<u32>> = basis.iter().map(|v| gfmat::mul_rect(f, m, v, n, n, 1)).collect();
    span_basis(f, &imgs, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn labels_of_group_elements() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let model = LocalModel::new(g.clone());
        let mut seen = BTreeSet::new();
        for x in g.elements() {
            let l = model.label(&LMat::from_const(g.matrix(x), 2)).unwrap();
            assert_eq!(l.lambda, cw(&[0, 0]));
            seen.insert(l.point);
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn raw_census_matches_twisted_count() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let reps = raw_double_coset_census(&g, &cw(&[1, 0]), 3).unwrap();
        assert_eq!(reps.len(), 9);
        let model = LocalModel::new(g);
        let labels: BTreeSet<Label> = reps.iter().map(|k| model.label(k).unwrap()).collect();
        assert_eq!(labels.len(), 9);
    }

    #[test]
    fn unit_and_group_algebra() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let model = LocalModel::new(g.clone());
        let one = model.unit();
        let w = Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap();
        for l in model.cache.basis(&w).unwrap() {
            let b = HeckeElement::basis(l);
            assert_eq!(model.convolve(&one, &b, None).unwrap(), b);
            assert_eq!(model.convolve(&b, &one, None).unwrap(), b);
        }
        for x in g.elements().step_by(2) {
            for y in g.elements() {
                let p = model.convolve(&model.delta_group(x).unwrap(), &model.delta_group(y).unwrap(), None).unwrap();
                assert_eq!(p, model.delta_group(g.mul(x, y)).unwrap());
            }
        }
    }

    #[test]
    fn jantzen_diagonal() {
        let f = Gf::prime(3).unwrap();
        let k = LMat::diag_power(&[1, 0]);
        let fl = jantzen_flag(&f, &k).unwrap();
        assert_eq!(fl.flag_type(), vec![1, 0]);
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let model = LocalModel::new(g);
        assert_eq!(jantzen_label(&model, &k).unwrap(), model.label(&k).unwrap());
        let id = LMat::identity(2);
        assert_eq!(jantzen_flag(&f, &id).unwrap().flag_type(), vec![0, 0]);
    }

    #[test]
    fn raw_census_gl2_f3_and_precision() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let model = LocalModel::new(g.clone());
        for (lam, want) in [(vec![1, 0], 64), (vec![1, 1], 48)] {
            let l = cw(&lam);
            let m = l.spread() as usize + 2;
            let a = raw_double_coset_census(&g, &l, m).unwrap();
            let b = raw_double_coset_census(&g, &l, m + 1).unwrap();
            assert_eq!((a.len(), b.len()), (want, want));
            let labels: BTreeSet<Label> = a.iter().map(|k| model.label(k).unwrap()).collect();
            assert_eq!(labels.len(), want);
            for k in &a {
                assert_eq!(jantzen_label(&model, k).unwrap(), model.label(k).unwrap());
            }
        }
    }

    #[test]
    fn jantzen_random_and_transport() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (n, q) in [(2usize, 3u32), (3, 2)] {
            let g = FiniteGroup::new(n, q, Kind::GL).unwrap();
            let f = g.field().clone();
            let model = LocalModel::new(g);
            for trial in 0..30 {
                let mut lam: Vec<i64> = (0..n).map(|_| (rng.next_u32() % 4) as i64 - 1).collect();
                lam.sort_by(|a, b| b.cmp(a));
                let u = random_g_o(&f, n, 2, &mut rng);
                let v = random_g_o(&f, n, 2, &mut rng);
                let k = u.mul(&f, &LMat::diag_power(&lam)).mul(&f, &v);
                let fl = jantzen_flag(&f, &k).unwrap();
                assert_eq!(fl.flag_type(), lam, "trial {trial}");
                let pd = fl.prime_graded_dims();
                for i in lam.iter() {
                    let c = lam.iter().filter(|x| *x == i).count();
                    assert_eq!(pd.get(&-i), Some(&c));
                }
                assert_eq!(jantzen_label(&model, &k).unwrap(), model.label(&k).unwrap());
                let base = jantzen_flag(&f, &LMat::diag_power(&lam)).unwrap();
                let vinv = gfmat::inverse(&f, &v.coeff_matrix(0), n).unwrap();
                let u0 = u.coeff_matrix(0);
                for i in lam[n - 1] - 1..=lam[0] + 1 {
                    assert_eq!(fl.e_at(i), transport(&f, &vinv, &base.e_at(i), n));
                    assert_eq!(fl.e_prime_at(i), transport(&f, &u0, &base.e_prime_at(i), n));
                }
            }
        }
    }

    #[test]
    fn associativity_and_filtration() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let model = LocalModel::new(g);
        let w = Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap();
        let basis = model.cache.basis(&w).unwrap();
        let pick = |k: usize| HeckeElement::basis(basis[(k * 7 + 3) % basis.len()].clone());
        for k in 0..6 {
            let (a, b, c) = (pick(k), pick(k + 5), pick(3 * k + 1));
            let ab_c = model.convolve(&model.convolve(&a, &b, None).unwrap(), &c, None).unwrap();
            let a_bc = model.convolve(&a, &model.convolve(&b, &c, None).unwrap(), None).unwrap();
            assert_eq!(ab_c, a_bc);
        }
        let top = cw(&[1, 0]);
        let w2 = Window::generated(&[cw(&[2, 0])], Kind::GL).unwrap();
        let deg1: Vec<&Label> = basis.iter().filter(|l| l.lambda == top).collect();
        for x in deg1.iter().take(4) {
            for y in &deg1 {
                let p = model.convolve(&HeckeElement::basis((*x).clone()), &HeckeElement::basis((*y).clone()), Some(&w2)).unwrap();
                assert!(p.types().iter().all(|t| cw(&[2, 0]).dominates(t, Kind::GL)));
            }
        }
        let small = Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap();
        let x = HeckeElement::basis(deg1[0].clone());
        assert!(matches!(model.convolve(&x, &x, Some(&small)), Err(Error::WindowOverflow(_))));
    }
}
