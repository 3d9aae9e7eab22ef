//! Bundles on the projective line with trivializations at `0` and `∞`,
//! presented by transition matrices `g ∈ G(k[z, z^{-1}])` (sections satisfy
//! `s_0 = g s_∞`), modulo `g ~ α g β` with `α ∈ G[z]`, `α(0) = 1` and
//! `β ∈ G[z^{-1}]`, `β(∞) = 1`.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::arith::{Gf, Rational, Scalar};
use crate::error::{Error, Result};
use crate::funspace::{BaseTag, LinearMap};
use crate::groups::{Coweight, FiniteGroup, Kind, Sign, Window};
use crate::linalg::{gfmat, Matrix};
use crate::loophecke::{HeckeElement, Label, LocalModel, StrataCache};
use crate::poly::{row_reduce, LMat, LPoly};

/// Functions on bundle points share the sparse representation of `A`.
pub type VElement = HeckeElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Zero,
    Infinity,
}

/// `g = a · z^λ · b` with `a ∈ G[z]`, `b ∈ G[z^{-1}]`, `λ` decreasing.
#[derive(Clone, Debug)]
pub struct Birkhoff {
    pub a: LMat,
    pub lambda: Vec<i64>,
    pub b: LMat,
}

fn perm_matrix(perm: &[usize]) -> Vec<u32> {
    let n = perm.len();
    let mut m = vec![0u32; n * n];
    for (i, &p) in perm.iter().enumerate() {
        m[i * n + p] = 1;
    }
    m
}

pub fn birkhoff(f: &Gf, g: &LMat) -> Result<Birkhoff> {
    let n = g.n;
    let c = -g.min_valuation().ok_or(Error::Singular)?.min(0);
    let det = g.det(f);
    if det.is_zero() || det.c.iter().filter(|&&x| x != 0).count() != 1 {
        return Err(Error::Invalid("transition matrix is not invertible over k[z, 1/z]".into()));
    }
    let p = g.shift(c);
    let (uinv, r, degs) = row_reduce(f, &p)?;
    let mut rt = r.clone();
    for i in 0..n {
        for j in 0..n {
            rt.e[i * n + j] = r.get(i, j).shift(-degs[i]);
        }
    }
    let mu: Vec<i64> = degs.iter().map(|d| d - c).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| mu[y].cmp(&mu[x]).then(x.cmp(&y)));
    // Q e_order[i] = e_i
    let q = LMat::from_const(&perm_matrix(&order), n);
    let mut qinv_v = vec![0u32; n * n];
    for (i, &o) in order.iter().enumerate() {
        qinv_v[o * n + i] = 1;
    }
    let qinv = LMat::from_const(&qinv_v, n);
    let a = uinv.mul(f, &qinv);
    let b = q.mul(f, &rt);
    let lambda: Vec<i64> = order.iter().map(|&o| mu[o]).collect();
    Ok(Birkhoff { a, lambda, b })
}

impl Birkhoff {
    pub fn reassemble(&self, f: &Gf) -> LMat {
        self.a.mul(f, &LMat::diag_power(&self.lambda)).mul(f, &self.b)
    }
}

/// `diag((-z/z0)^{λ_i})`, the transition of `O(λ)` with the trivializations
/// induced away from the marked point `z0`.
pub fn standard_transition(f: &Gf, lambda: &[i64], z0: u32) -> Result<LMat> {
    let n = lambda.len();
    let c = f.neg(f.inv(z0)?);
    let mut m = LMat::identity(n);
    for (i, &l) in lambda.iter().enumerate() {
        let coeff = if l >= 0 { f.pow(c, l as u64) } else { f.pow(f.inv(c)?, (-l) as u64) };
        m.e[i * n + i] = LPoly::monomial(coeff, l);
    }
    Ok(m)
}

type RowMemo = BTreeMap<(Side, Label, Label), Rc<Vec<Label>>>;

/// Bundle points of one group, with Hecke actions of `A` at `0` and `∞`.
#[derive(Debug)]
pub struct BundleModel {
    pub local: LocalModel,
    pub cache: StrataCache,
    pub z0: u32,
    reps: RefCell<BTreeMap<Label, Rc<Vec<(LMat, LMat)>>>>,
    rows: RefCell<RowMemo>,
}

impl BundleModel {
    pub fn new(group: FiniteGroup, z0: u32) -> Result<BundleModel> {
        if z0 == 0 || z0 >= group.field().size() {
            return Err(Error::Invalid("marked point must be a nonzero field element".into()));
        }
        Ok(BundleModel {
            local: LocalModel::new(group.clone()),
            cache: StrataCache::new(group, Sign::PlusPlus),
            z0,
            reps: RefCell::new(BTreeMap::new()),
            rows: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.cache.group
    }

    pub fn field(&self) -> &Gf {
        self.cache.field()
    }

    /// The point of a transition matrix: `(λ, [g_0, g_∞^{-1}])` where
    /// `g = a (-z/z0)^λ b` with `g_0 = a(0)`, `g_∞ = b(∞)`.
    pub fn canonical_form(&self, g: &LMat) -> Result<Label> {
        let f = self.field();
        let n = g.n;
        let bk = birkhoff(f, g)?;
        let a0 = bk.a.coeff_matrix(0);
        // z^λ = (-z0)^λ · (-z/z0)^λ
        let mz0 = f.neg(self.z0);
        let mut scale = vec![0u32; n * n];
        for i in 0..n {
            let l = bk.lambda[i];
            scale[i * n + i] = if l >= 0 { f.pow(mz0, l as u64) } else { f.pow(f.inv(mz0)?, (-l) as u64) };
        }
        let g0 = gfmat::mul(f, &a0, &scale, n);
        let binf = bk.b.coeff_matrix(0);
        let ginf_inv = gfmat::inverse(f, &binf, n)?;
        self.cache.label_of_pair(&Coweight(bk.lambda), &g0, &ginf_inv)
    }

    /// A transition matrix presenting the point.
    pub fn transition(&self, p: &Label) -> Result<LMat> {
        let s = self.cache.stratum(&p.lambda)?;
        let (x, y) = s.space.rep(p.point);
        let g = self.group();
        let n = g.rank();
        let f = self.field();
        let std = standard_transition(f, &p.lambda.0, self.z0)?;
        Ok(LMat::from_const(g.matrix(x), n).mul(f, &std).mul(f, &LMat::from_const(g.matrix(g.inv(y)), n)))
    }

    /// The trivial bundle with its tautological trivializations.
    pub fn delta_point(&self) -> Result<Label> {
        self.canonical_form(&LMat::identity(self.group().rank()))
    }

    pub fn basis(&self, window: &Window) -> Result<Vec<Label>> {
        self.cache.basis(window)
    }

    /// Pullback along `z ↦ z0/z`: transition `g(z0/z)^{-1}`.
    pub fn inv_point(&self, p: &Label) -> Result<Label> {
        let f = self.field();
        let g = self.transition(p)?;
        self.canonical_form(&g.invert_variable(f, self.z0).inverse(f)?)
    }

    fn coset_data(&self, x: &Label) -> Result<Rc<Vec<(LMat, LMat)>>> {
        if let Some(v) = self.reps.borrow().get(x) {
            return Ok(v.clone());
        }
        let f = self.field();
        let mut out = Vec::new();
        for h in self.local.coset_reps(x)? {
            out.push((h.inverse(f)?, h.invert_variable(f, self.z0)));
        }
        let rc = Rc::new(out);
        self.reps.borrow_mut().insert(x.clone(), rc.clone());
        Ok(rc)
    }

    /// The points `Q` entering `(T_x ⋆ f)(P) = Σ_Q f(Q)`: at `0` the points of
    /// `h^{-1} g_P`, at `∞` those of `g_P h(z0/z)`, over left coset
    /// representatives `h K_1` of the double coset `x`.
    pub fn row(&self, side: Side, x: &Label, p: &Label) -> Result<Rc<Vec<Label>>> {
        let key = (side, x.clone(), p.clone());
        if let Some(v) = self.rows.borrow().get(&key) {
            return Ok(v.clone());
        }
        let f = self.field();
        let g = self.transition(p)?;
        let mut out = Vec::new();
        for (hinv, hw) in self.coset_data(x)?.iter() {
            let m = match side {
                Side::Zero => hinv.mul(f, &g),
                Side::Infinity => g.mul(f, hw),
            };
            out.push(self.canonical_form(&m)?);
        }
        let rc = Rc::new(out);
        self.rows.borrow_mut().insert(key, rc.clone());
        Ok(rc)
    }

    /// `(a ⋆ v)(P)` for a function given by an evaluator.
    pub fn apply_at(
        &self,
        side: Side,
        a: &HeckeElement,
        v: &dyn core::ops::Fn(&Label) -> Result<Scalar>,
        p: &Label,
    ) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (x, c) in a.support() {
            let mut inner = Scalar::zero();
            for q in self.row(side, x, p)?.iter() {
                inner = inner.add(&v(q)?);
            }
            acc = acc.add(&c.mul(&inner));
        }
        Ok(acc)
    }

    /// The window that must contain the support of `a ⋆ v`.
    pub fn output_window(&self, a: &HeckeElement, v: &VElement) -> Result<Window> {
        let kind = self.group().kind();
        let mut gens = Vec::new();
        for s in v.types() {
            for t in a.types() {
                gens.push(s.add(&t));
            }
        }
        Window::generated(&gens, kind)
    }

    pub fn hecke_act(&self, side: Side, a: &HeckeElement, v: &VElement) -> Result<VElement> {
        let mut out = VElement::zero();
        if a.is_zero() || v.is_zero() {
            return Ok(out);
        }
        let w = self.output_window(a, v)?;
        for p in self.basis(&w)? {
            let c = self.apply_at(side, a, &|q| Ok(v.get(q)), &p)?;
            out.add_at(p, &c);
        }
        Ok(out)
    }

    pub fn delta(&self) -> Result<VElement> {
        Ok(VElement::basis(self.delta_point()?))
    }

    /// `act(a) = a ⋆_0 δ`.
    pub fn act(&self, a: &HeckeElement) -> Result<VElement> {
        self.hecke_act(Side::Zero, a, &self.delta()?)
    }

    /// Matrix of `act` from `A_{≤W}` to `V_{≤W}` in the canonical bases.
    pub fn act_map(&self, window: &Window) -> Result<(LinearMap<Rational>, Vec<Label>, Vec<Label>)> {
        let abasis = self.local.cache.basis(window)?;
        let vbasis = self.basis(window)?;
        let vindex: BTreeMap<&Label, usize> = vbasis.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let d = self.delta_point()?;
        let kind = self.group().kind();
        let n = self.group().rank() as i64;
        let same_component = |a: &Coweight, b: &Coweight| match kind {
            Kind::GL => a.degree() == b.degree(),
            Kind::PGL => (a.degree() - b.degree()).rem_euclid(n) == 0,
        };
        let mut m = Matrix::zeros(vbasis.len(), abasis.len(), &Rational::from_integer(0.into()));
        for (j, x) in abasis.iter().enumerate() {
            for p in &vbasis {
                if !same_component(&x.lambda, &p.lambda) || !x.lambda.dominates(&p.lambda, kind) {
                    continue;
                }
                let cnt = self.row(Side::Zero, x, p)?.iter().filter(|q| **q == d).count();
                if cnt > 0 {
                    m.set(vindex[p], j, Rational::from_integer((cnt as i64).into()));
                }
            }
        }
        let map = LinearMap {
            domain: BaseTag::new("A", abasis.len()),
            codomain: BaseTag::new("V", vbasis.len()),
            matrix: m,
        };
        Ok((map, abasis, vbasis))
    }

    /// The graded piece `act_λ : A_λ → V_λ` in the canonical point orders of
    /// the twisted products.
    pub fn graded_act(&self, lambda: &Coweight) -> Result<Matrix<Rational>> {
        let sa = self.local.cache.stratum(lambda)?;
        let sv = self.cache.stratum(lambda)?;
        let d = self.delta_point()?;
        let mut m = Matrix::zeros(sv.space.len(), sa.space.len(), &Rational::from_integer(0.into()));
        for j in 0..sa.space.len() {
            let x = Label { lambda: sa.lambda.clone(), point: j };
            for i in 0..sv.space.len() {
                let p = Label { lambda: sv.lambda.clone(), point: i };
                let cnt = self.row(Side::Zero, &x, &p)?.iter().filter(|q| **q == d).count();
                if cnt > 0 {
                    m.set(i, j, Rational::from_integer((cnt as i64).into()));
                }
            }
        }
        Ok(m)
    }

    /// Compares `act_λ` with the intertwining operator `Φ` of the pair
    /// `(P_λ, P_λ^-)` acting on the `U^-` slot, under the identifications
    /// `(g1, g2) ↦ (g1, g2 (-z0)^λ)` on `A_λ` and the factor swap
    /// `(x, y) ↦ (y, x)` on `V_λ`. Returns the scalar `s` with
    /// `act_λ = s · swap ∘ Φ ∘ twist`, or `None` if there is none.
    pub fn graded_act_scalar(&self, lambda: &Coweight) -> Result<Option<Rational>> {
        let act = self.graded_act(lambda)?;
        let g = self.group();
        let f = self.field();
        let n = g.rank();
        let sa = self.local.cache.stratum(lambda)?;
        let sv = self.cache.stratum(lambda)?;
        let phi = crate::funspace::twisted_radon(g, &sa.datum, &sa.space, &sv.space).matrix;
        let mz0 = f.neg(self.z0);
        let mut cm = vec![0u32; n * n];
        for i in 0..n {
            let l = sa.lambda.0[i];
            cm[i * n + i] = if l >= 0 { f.pow(mz0, l as u64) } else { f.pow(f.inv(mz0)?, (-l) as u64) };
        }
        let c = g.index_of(&cm).ok_or(Error::Singular)?;
        let twist: Vec<usize> = (0..sa.space.len())
            .map(|j| {
                let (g1, g2) = sa.space.rep(j);
                sa.space.point(g1, g.mul(g2, c))
            })
            .collect();
        let swap: Vec<usize> = (0..sv.space.len())
            .map(|i| {
                let (x, y) = sv.space.rep(i);
                sv.space.point(y, x)
            })
            .collect();
        let mut ratio: Option<Rational> = None;
        for i in 0..act.rows {
            for j in 0..act.cols {
                let a = act.get(i, j);
                let b = phi.get(swap[i], twist[j]);
                if num_traits::Zero::is_zero(b) {
                    if !num_traits::Zero::is_zero(a) {
                        return Ok(None);
                    }
                    continue;
                }
                let r = a / b;
                match &ratio {
                    None => ratio = Some(r),
                    Some(x) if *x != r => return Ok(None),
                    _ => {}
                }
            }
        }
        Ok(ratio)
    }

    /// `ι(a)`, defined by `act(ι(a)) = inv^*(act(a))`.
    pub fn iota(&self, a: &HeckeElement, window: &Window, act: &ActInverse) -> Result<HeckeElement> {
        let v = self.act(a)?;
        let mut pulled = VElement::zero();
        for p in self.basis(window)? {
            let c = v.get(&self.inv_point(&p)?);
            pulled.add_at(p, &c);
        }
        act.solve(&pulled)
    }
}

/// Basis of the cuspidal part of `V_λ` for the `G × G` action on
/// trivializations: functions killed by averaging over every conjugate of a
/// proper unipotent radical, at `0` and at `∞`.
pub fn cuspidal_part(model: &BundleModel, lambda: &Coweight) -> Result<Vec<Vec<Rational>>> {
    let g = model.group();
    let s = model.cache.stratum(lambda)?;
    let len = s.space.len();
    let one = g.identity();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for us in crate::funspace::conjugate_unipotents(g)? {
        for side in [Side::Zero, Side::Infinity] {
            for r in 0..len {
                let mut row = vec![Rational::from_integer(0.into()); len];
                for &u in &us {
                    let p = match side {
                        Side::Zero => s.space.act(g, u, one, r),
                        Side::Infinity => s.space.act(g, one, u, r),
                    };
                    row[p] += Rational::from_integer(1.into());
                }
                if !rows.contains(&row) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Ok((0..len).map(|i| (0..len).map(|j| Rational::from_integer(((i == j) as i64).into())).collect()).collect());
    }
    Ok(Matrix::from_rows(rows)?.nullspace())
}

/// On the trivial stratum, `(x, y) ↦ x y^{-1}` identifies `V_0` with `F(G)`;
/// the cuspidal part of `V_0` must be the image of the cuspidal projector.
pub fn cusp_matches_group(model: &BundleModel) -> Result<bool> {
    let g = model.group();
    let zero = Coweight::zero(g.rank());
    let s = model.cache.stratum(&zero)?;
    let basis = cuspidal_part(model, &zero)?;
    let proj = crate::funspace::cuspidal_projector(g)?.matrix;
    let to_group: Vec<usize> = (0..s.space.len())
        .map(|i| {
            let (x, y) = s.space.rep(i);
            g.mul(x, g.inv(y))
        })
        .collect();
    let mut mapped: Vec<Vec<Rational>> = Vec::new();
    for v in &basis {
        let mut w = vec![Rational::from_integer(0.into()); g.order()];
        for (i, c) in v.iter().enumerate() {
            w[to_group[i]] += c.clone();
        }
        mapped.push(w);
    }
    let pr = proj.rank();
    if mapped.len() != pr {
        return Ok(false);
    }
    let mut all = mapped.clone();
    for c in 0..proj.cols {
        all.push((0..proj.rows).map(|r| proj.get(r, c).clone()).collect());
    }
    Ok(pr == 0 || Matrix::from_rows(all)?.rank() == pr)
}

/// The inverse of `act` on a window.
#[derive(Clone, Debug)]
pub struct ActInverse {
    inverse: Matrix<Rational>,
    abasis: Vec<Label>,
    vindex: BTreeMap<Label, usize>,
}

impl ActInverse {
    pub fn new(model: &BundleModel, window: &Window) -> Result<ActInverse> {
        let (m, abasis, vbasis) = model.act_map(window)?;
        let inverse = m.matrix.inverse().map_err(|_| Error::CheckFailed("act is singular on the window".into()))?;
        let vindex = vbasis.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(ActInverse { inverse, abasis, vindex })
    }

    pub fn solve(&self, v: &VElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (i, a) in self.abasis.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (p, c) in v.support() {
                let Some(&j) = self.vindex.get(p) else {
                    return Err(Error::WindowOverflow(alloc::format!("{p} outside window")));
                };
                let r = self.inverse.get(i, j);
                if !num_traits::Zero::is_zero(r) {
                    acc = acc.add(&c.mul(&Scalar::from_rational(r.clone())));
                }
            }
            out.add_at(a.clone(), &acc);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Independent point census from transition matrices.

/// Splitting type of the bundle of a polynomial transition matrix, from
/// `h^0(E(-m)) - h^0(E(-m-1)) = #{i : λ_i >= m}`.
pub fn splitting_type(f: &Gf, g: &LMat) -> Result<Vec<i64>> {
    let n = g.n;
    if g.min_valuation().unwrap_or(0) < 0 {
        return Err(Error::Invalid("polynomial transition expected".into()));
    }
    let e = g.det(f).valuation().ok_or(Error::Singular)?;
    let h0 = |m: i64| -> usize {
        let j = e - m;
        if j < 0 {
            return 0;
        }
        let jj = j as usize;
        let cols = n * (jj + 1);
        let mut rows = Vec::new();
        let mut nr = 0;
        for eps in -j..m {
            for i in 0..n {
                let mut r = vec![0u32; cols];
                for d in 0..=jj {
                    for k in 0..n {
                        r[d * n + k] = g.get(i, k).coeff(eps + d as i64);
                    }
                }
                rows.extend(r);
                nr += 1;
            }
        }
        if nr == 0 {
            return cols;
        }
        cols - gfmat::rank(f, &rows, nr, cols)
    };
    let mut out = Vec::new();
    let mut prev = h0(0);
    for m in 0..=e + 1 {
        let next = h0(m + 1);
        let ge = prev - next;
        // ge = #{λ_i >= m}
        let cur = out.len();
        let _ = cur;
        out.push(ge);
        prev = next;
    }
    // convert counts #{λ_i >= m} into the partition
    let mut lam = vec![0i64; n];
    for (m, &cnt) in out.iter().enumerate() {
        if m == 0 {
            if cnt != n {
                return Err(Error::CheckFailed("negative splitting type".into()));
            }
            continue;
        }
        for l in lam.iter_mut().take(cnt) {
            *l = m as i64;
        }
    }
    Ok(lam)
}

/// Whether `h ~ g`: solve for `β' = 1 + Σ_{1..=d} B_j z^{-j}` with
/// `h β' g^{-1} ∈ G[z]` taking the value `1` at `0`.
pub fn equivalent(f: &Gf, g: &LMat, h: &LMat, d: usize) -> Result<bool> {
    let n = g.n;
    let dg = g.det(f);
    let dh = h.det(f);
    if dg != dh {
        return Ok(false);
    }
    let m = dg.valuation().ok_or(Error::Singular)?;
    let c = dg.coeff(m);
    // adj(g) = det(g) g^{-1}
    let adj = g.inverse(f)?.map(|p| p.mul(f, &dg));
    let base = h.mul(f, &adj);
    let lo = -(d as i64) + base.min_valuation().unwrap_or(0).min(0) - 1;
    let eqs: Vec<(i64, usize)> = (lo..=m).flat_map(|e| (0..n * n).map(move |k| (e, k))).collect();
    let unknowns = d * n * n;
    let mut a = vec![0u32; eqs.len() * unknowns];
    let mut b = vec![0u32; eqs.len()];
    for (r, &(e, k)) in eqs.iter().enumerate() {
        let target = if e == m && k / n == k % n { c } else { 0 };
        b[r] = f.sub(target, base.e[k].coeff(e));
    }
    for j in 1..=d {
        for kk in 0..n {
            for l in 0..n {
                let col = (j - 1) * n * n + kk * n + l;
                for i in 0..n {
                    for jj in 0..n {
                        let p = h.get(i, kk).mul(f, adj.get(l, jj)).shift(-(j as i64));
                        if p.is_zero() {
                            continue;
                        }
                        for (r, &(e, k)) in eqs.iter().enumerate() {
                            if k == i * n + jj {
                                let v = p.coeff(e);
                                if v != 0 {
                                    a[r * unknowns + col] = f.add(a[r * unknowns + col], v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(gfmat::solve(f, &a, &b, eqs.len(), unknowns).is_some())
}

/// Number of classes of type `λ` among polynomial transition matrices of
/// degree at most `max(λ_1 - λ_N, 1)` (after shifting `λ_N` to `0`),
/// classified by [`equivalent`] and [`splitting_type`] only.
pub fn raw_point_census(g: &FiniteGroup, lambda: &Coweight) -> Result<usize> {
    if g.kind() != Kind::GL {
        return Err(Error::Unsupported("raw point census is implemented for GL".into()));
    }
    let n = g.rank();
    let f = g.field();
    let low = *lambda.0.last().ok_or(Error::Singular)?;
    let lam: Vec<i64> = lambda.0.iter().map(|x| x - low).collect();
    let deg = (lam[0] as usize).max(1);
    let e: i64 = lam.iter().sum();
    let q = f.size() as u64;
    let slots = n * n * (deg + 1);
    let total = q.checked_pow(slots as u32).filter(|&t| t <= 1 << 24).ok_or(Error::BudgetExceeded {
        required: u64::MAX,
        budget: 1 << 24,
    })?;
    let mut reps: Vec<LMat> = Vec::new();
    let bound = 3 * deg + 2;
    for code in 0..total {
        let mut c = code;
        let mut m = LMat::identity(n);
        for k in 0..n * n {
            let mut coeffs = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                coeffs.push((c % q) as u32);
                c /= q;
            }
            m.e[k] = LPoly::from_coeffs(0, coeffs);
        }
        let det = m.det(f);
        if det.is_zero() || det.valuation() != Some(e) || det.degree() != Some(e) {
            continue;
        }
        if splitting_type(f, &m)? != lam {
            continue;
        }
        let mut found = false;
        for r in &reps {
            if equivalent(f, r, &m, bound)? {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(m);
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loophecke::random_g_o;
    use rand_chacha::rand_core::{RngCore, SeedableRng};

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec()).unwrap()
    }

    fn random_g_poly(f: &Gf, n: usize, rng: &mut impl RngCore) -> LMat {
        let mut m = LMat::from_const(&random_g_o(f, n, 0, rng).coeff_matrix(0), n);
        for _ in 0..3 {
            let (a, b) = ((rng.next_u32() as usize) % n, (rng.next_u32() as usize) % n);
            if a == b {
                continue;
            }
            let mut e = LMat::identity(n);
            e.e[a * n + b] = LPoly::monomial(1 + rng.next_u32() % (f.size() - 1), (rng.next_u32() % 3) as i64);
            m = m.mul(f, &e);
        }
        m
    }

    #[test]
    fn birkhoff_examples() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let m = BundleModel::new(g, 1).unwrap();
        let f = m.field().clone();
        let d = m.canonical_form(&LMat::identity(2)).unwrap();
        assert_eq!(d.lambda, cw(&[0, 0]));
        let p = m.canonical_form(&LMat::diag_power(&[1, 0])).unwrap();
        assert_eq!(p.lambda, cw(&[1, 0]));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a = random_g_poly(&f, 2, &mut rng);
            let b = random_g_poly(&f, 2, &mut rng).invert_variable(&f, 1);
            let lam = [(rng.next_u32() % 3) as i64, 0];
            let lam = if lam[0] >= lam[1] { lam } else { [lam[1], lam[0]] };
            let x = a.mul(&f, &LMat::diag_power(&lam)).mul(&f, &b);
            let bk = birkhoff(&f, &x).unwrap();
            assert_eq!(bk.reassemble(&f), x);
            assert_eq!(bk.lambda, lam.to_vec());
            let pt = m.canonical_form(&x).unwrap();
            assert_eq!(m.canonical_form(&m.transition(&pt).unwrap()).unwrap(), pt);
            // α x β with α(0) = 1, β(∞) = 1
            let mut al = LMat::identity(2);
            al.e[1] = LPoly::monomial(1, 1 + (rng.next_u32() % 2) as i64);
            let mut be = LMat::identity(2);
            be.e[2] = LPoly::monomial(2, -1);
            assert_eq!(m.canonical_form(&al.mul(&f, &x).mul(&f, &be)).unwrap(), pt);
            if x.min_valuation().unwrap() >= 0 {
                assert_eq!(splitting_type(&f, &x).unwrap(), lam.to_vec());
            }
        }
    }

    #[test]
    fn graded_act_is_radon() {
        for (q, kind) in [(2u32, Kind::GL), (3, Kind::PGL)] {
            let g = FiniteGroup::new(2, q, kind).unwrap();
            for z0 in 1..q {
                let m = BundleModel::new(g.clone(), z0).unwrap();
                let s1 = m.graded_act_scalar(&cw(&[1, 0])).unwrap();
                let s2 = m.graded_act_scalar(&cw(&[2, 0])).unwrap();
                assert_eq!(s1, Some(Rational::from_integer(1.into())));
                assert_eq!(s2, Some(Rational::from_integer((q as i64).into())));
            }
        }
    }

    #[test]
    fn iota_properties() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let m = BundleModel::new(g.clone(), 1).unwrap();
        let w = Window::generated(&[cw(&[0, 0]), cw(&[1, 0]), cw(&[2, 0])], Kind::GL).unwrap();
        let inv = ActInverse::new(&m, &w).unwrap();
        for x in g.elements() {
            let d = m.local.delta_group(x).unwrap();
            assert_eq!(m.iota(&d, &w, &inv).unwrap(), m.local.delta_group(g.inv(x)).unwrap());
        }
        let e = m.local.e_fin().unwrap();
        let small = Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap();
        let basis = m.local.cache.basis(&small).unwrap();
        for x in basis.iter().step_by(4) {
            let s = m.local.convolve(&m.local.convolve(&e, &HeckeElement::basis(x.clone()), None).unwrap(), &e, None).unwrap();
            assert_eq!(m.iota(&s, &w, &inv).unwrap(), s);
        }
        for (i, x) in basis.iter().enumerate().step_by(3) {
            let y = &basis[(i * 5 + 2) % basis.len()];
            let (a, b) = (HeckeElement::basis(x.clone()), HeckeElement::basis(y.clone()));
            let ab = m.local.convolve(&a, &b, None).unwrap();
            let lhs = m.iota(&ab, &w, &inv).unwrap();
            let rhs = m.local.convolve(&m.iota(&b, &w, &inv).unwrap(), &m.iota(&a, &w, &inv).unwrap(), None).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cusp_lemma_pgl2() {
        for q in [2u32, 3] {
            let g = FiniteGroup::new(2, q, Kind::PGL).unwrap();
            let m = BundleModel::new(g, 1).unwrap();
            assert!(cusp_matches_group(&m).unwrap());
            assert_eq!(cuspidal_part(&m, &cw(&[0, 0])).unwrap().len(), if q == 2 { 1 } else { 4 });
            for lam in [cw(&[1, 0]), cw(&[2, 0]), cw(&[3, 0])] {
                assert!(cuspidal_part(&m, &lam).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn raw_census_small() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        assert_eq!(raw_point_census(&g, &cw(&[0, 0])).unwrap(), 6);
        assert_eq!(raw_point_census(&g, &cw(&[1, 0])).unwrap(), 9);
    }

    #[test]
    fn act_small_window() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let m = BundleModel::new(g.clone(), 1).unwrap();
        let w = Window::generated(&[cw(&[0, 0]), cw(&[1, 0])], Kind::GL).unwrap();
        let (map, a, v) = m.act_map(&w).unwrap();
        assert_eq!((a.len(), v.len()), (15, 15));
        assert_eq!(map.rank(), 15);
        let one = m.local.unit();
        assert_eq!(m.act(&one).unwrap(), m.delta().unwrap());
        // actions commute
        let basis = m.local.cache.basis(&Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap()).unwrap();
        let pts = m.basis(&Window::generated(&[cw(&[1, 0])], Kind::GL).unwrap()).unwrap();
        let f0 = VElement::basis(pts[2].clone());
        for x in basis.iter().take(4) {
            for y in basis.iter().skip(2).take(3) {
                let ax = HeckeElement::basis(x.clone());
                let by = HeckeElement::basis(y.clone());
                for p in m.basis(&Window::generated(&[cw(&[3, 0])], Kind::GL).unwrap()).unwrap().iter().step_by(5) {
                    let l = m
                        .apply_at(Side::Zero, &ax, &|q| m.apply_at(Side::Infinity, &by, &|r| Ok(f0.get(r)), q), p)
                        .unwrap();
                    let r = m
                        .apply_at(Side::Infinity, &by, &|q| m.apply_at(Side::Zero, &ax, &|r| Ok(f0.get(r)), q), p)
                        .unwrap();
                    assert_eq!(l, r);
                }
            }
        }
        let _ = g;
    }
}
