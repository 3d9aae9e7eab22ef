//! Cuspidal characters of `GL(N, k)` and `PGL(N, k)` computed from the
//! Gelfand–Graev module `Ind_U^G ψ`, and the scalars `η_{D,f}` by which
//! divisor Hecke operators act on the cuspidal blocks of `F(G)`.
//!
//! The module is multiplicity free, so its commutant, spanned by the
//! operators `R_g = (· e_ψ g e_ψ)` for `g ∈ U\G/U`, splits it into
//! irreducibles. All of this is done modulo a prime `ℓ ≡ 1 (mod e)`, `e` the
//! exponent of `G`; the character values are then lifted exactly by reading
//! the eigenvalues `ω^k` of each group element as `ζ_e^k`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{ExtElem, FieldTower, Scalar};
use crate::bundles::{cuspidal_part, BundleModel};
use crate::divhecke::{translate, Check, DivisorHeckeOp, Theta};
use crate::error::{Error, Result};
use crate::funspace::conjugate_unipotents;
use crate::groups::{elliptic_class, Coweight, FiniteGroup, Kind, Window};
use crate::linalg::{Field, Matrix, Zp};
use crate::loophecke::Label;

/// A pair `(T, θ)` with `T(k) = k_N^×` (modulo `k^×` for `PGL`) and `θ` in
/// general position, up to `θ ~ θ^q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DLPair {
    pub kind: Kind,
    pub theta: Theta,
}

impl DLPair {
    pub fn rank(&self) -> usize {
        self.theta.level
    }

    pub fn q(&self) -> u32 {
        self.theta.q
    }

    /// `(-1)^{N-1} Σ_{j<N} θ(x)^{q^j}` for `x ∈ k_N^×`.
    pub fn elliptic_value(&self, tower: &FieldTower, x: ExtElem) -> Result<Scalar> {
        elliptic_sum(&self.theta, self.rank(), tower, x)
    }
}

fn elliptic_sum(theta: &Theta, n: usize, tower: &FieldTower, x: ExtElem) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for j in 0..n {
        acc = acc.add(&theta.frobenius_twist(j as u32).eval(tower, x)?);
    }
    Ok(if n.is_multiple_of(2) { acc.neg() } else { acc })
}

fn in_general_position(theta: &Theta, n: usize) -> bool {
    (1..n).all(|j| theta.frobenius_twist(j as u32).a != theta.a % theta.modulus())
}

pub fn cuspidal_pairs(n: usize, q: u32, kind: Kind) -> Result<Vec<DLPair>> {
    if n != 2 {
        return Err(Error::Unsupported(format!("cuspidal pairs for N = {n}")));
    }
    let m = (q as u64).pow(n as u32) - 1;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in 0..m {
        // trivial on k^× = <γ^{(q^N-1)/(q-1)}>
        if kind == Kind::PGL && !(a * (m / (q as u64 - 1))).is_multiple_of(m) {
            continue;
        }
        let theta = Theta { q, level: n, a };
        if !in_general_position(&theta, n) || seen.contains(&a) {
            continue;
        }
        for j in 0..n {
            seen.insert(theta.frobenius_twist(j as u32).a);
        }
        out.push(DLPair { kind, theta });
    }
    Ok(out)
}

/// `Lift_a` of a pair: `θ_a = θ ∘ Norm_{aN,N}` on `k_{aN}^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPair {
    pub base: DLPair,
    pub a: usize,
    pub theta: Theta,
}

pub fn lift(pair: &DLPair, a: usize) -> Result<LiftedPair> {
    if a == 0 {
        return Err(Error::Invalid("lift degree must be positive".into()));
    }
    let n = pair.rank();
    let q = pair.q();
    if a == 1 {
        return Ok(LiftedPair { base: pair.clone(), a, theta: pair.theta.clone() });
    }
    let tower = FieldTower::new(q, &[n, a * n])?;
    let big = tower.field(a * n)?;
    let gamma = ExtElem { level: a * n, value: big.generator() };
    let t = tower.field(n)?.log(tower.norm(gamma, n)?.value).ok_or(Error::ZeroElement)? as u128;
    let big_m = (q as u128).pow((a * n) as u32) - 1;
    let small_m = (q as u128).pow(n as u32) - 1;
    let e = (pair.theta.a as u128 * t % small_m) * (big_m / small_m) % big_m;
    Ok(LiftedPair { base: pair.clone(), a, theta: Theta { q, level: a * n, a: e as u64 } })
}

impl LiftedPair {
    /// `(-1)^{N-1} Σ_{j<N} θ(Norm_{aN,N} x)^{q^j}` for `x ∈ k_{aN}^×`.
    pub fn elliptic_value(&self, tower: &FieldTower, x: ExtElem) -> Result<Scalar> {
        elliptic_sum(&self.theta, self.base.rank(), tower, x)
    }

    /// Whether `θ_a` is in general position for the Frobenius of `k_a`.
    pub fn is_cuspidal(&self) -> bool {
        let n = self.base.rank();
        (1..n).all(|j| self.theta.frobenius_twist((j * self.a) as u32).a != self.theta.a % self.theta.modulus())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn element_order(g: &FiniteGroup, x: usize) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != g.identity() {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Restriction of an operator to an invariant subspace with basis `b`
/// (columns), using rows where `b` is invertible.
struct Block {
    basis: Matrix<Zp>,
    rows: Vec<usize>,
    inv: Matrix<Zp>,
}

impl Block {
    fn new(basis: Matrix<Zp>) -> Result<Block> {
        let rows = basis.transpose().clone().rref_pivots();
        let k = basis.cols;
        let mut sq = Matrix::zeros(k, k, &basis.data[0]);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..k {
                sq.set(i, j, *basis.get(r, j));
            }
        }
        let inv = sq.inverse()?;
        Ok(Block { basis, rows, inv })
    }

    /// The matrix of `op` on the block, `op` given by its action on columns.
    fn restrict(&self, apply: &dyn Fn(&[Zp]) -> Vec<Zp>) -> Result<Matrix<Zp>> {
        let k = self.basis.cols;
        let proto = self.basis.data[0];
        let mut img = Matrix::zeros(k, k, &proto);
        for j in 0..k {
            let col: Vec<Zp> = (0..self.basis.rows).map(|r| *self.basis.get(r, j)).collect();
            let out = apply(&col);
            for (i, &r) in self.rows.iter().enumerate() {
                img.set(i, j, out[r]);
            }
        }
        self.inv.mul(&img)
    }
}

trait Pivots {
    fn rref_pivots(self) -> Vec<usize>;
}

impl Pivots for Matrix<Zp> {
    fn rref_pivots(mut self) -> Vec<usize> {
        self.rref()
    }
}

fn eigenspaces(m: &Matrix<Zp>, candidates: &[Zp]) -> Vec<(Zp, Vec<Vec<Zp>>)> {
    let k = m.rows;
    let mut out = Vec::new();
    let mut found = 0;
    for &lam in candidates {
        let mut a = m.clone();
        for i in 0..k {
            let v = a.get(i, i).sub(&lam);
            a.set(i, i, v);
        }
        let ns = a.nullspace();
        if !ns.is_empty() {
            found += ns.len();
            out.push((lam, ns));
        }
        if found == k {
            break;
        }
    }
    out
}

/// One irreducible constituent of the Gelfand–Graev module.
#[derive(Clone, Debug)]
pub struct Component {
    pub dim: usize,
    /// Values on the conjugacy classes, in the oracle's class order.
    pub chi: Vec<Scalar>,
    pub cuspidal: bool,
}

#[derive(Clone, Debug)]
pub struct CharacterOracle {
    pub group: FiniteGroup,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub components: Vec<Component>,
    pub ell: u64,
    pub exponent: u64,
}

impl CharacterOracle {
    pub fn new(group: FiniteGroup) -> Result<CharacterOracle> {
        let g = &group;
        let n = g.rank();
        let f = g.field().clone();
        let order = g.order();
        let mut e = 1u64;
        for x in g.elements() {
            let o = element_order(g, x);
            e = e / gcd(e, o) * o;
        }
        let mut ell = e + 1;
        while !(is_prime(ell) && ell > 2 * order as u64) {
            ell += e;
        }
        let root = (2..ell)
            .find(|&r| prime_factors(ell - 1).iter().all(|&p| Zp::new(r as i64, ell).pow((ell - 1) / p).v != 1))
            .unwrap();
        let omega = Zp::new(root as i64, ell).pow((ell - 1) / e);
        let zero = Zp::new(0, ell);

        // the upper unitriangular group and ψ(u) = ω_p^{Tr Σ u_{i,i+1}}
        let p = f.characteristic() as u64;
        let omega_p = omega.pow(e / p);
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        let mut unip = Vec::new();
        let mut psi = Vec::new();
        let sz = f.size() as usize;
        for code in 0..sz.pow(upper.len() as u32) {
            let mut m = crate::linalg::gfmat::identity(n);
            let mut c = code;
            for &(i, j) in &upper {
                m[i * n + j] = (c % sz) as u32;
                c /= sz;
            }
            let mut s = 0u32;
            for i in 0..n.saturating_sub(1) {
                s = f.add(s, m[i * n + i + 1]);
            }
            let mut tr = 0u32;
            let mut y = s;
            for _ in 0..f.prime_degree() {
                tr = f.add(tr, y);
                y = f.pow(y, p);
            }
            let t = f.prime_value(tr).ok_or_else(|| Error::CheckFailed("trace not in prime field".into()))?;
            unip.push(g.index_of(&m).ok_or(Error::Singular)?);
            psi.push(omega_p.pow(t as u64));
        }

        // G = ⊔ r_c U; decomposition x = r_c u
        let mut decomp = vec![(usize::MAX, 0usize); order];
        let mut reps = Vec::new();
        for x in g.elements() {
            if decomp[x].0 != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for (k, &u) in unip.iter().enumerate() {
                decomp[g.mul(x, u)] = (c, k);
            }
        }
        let d = reps.len();
        // left multiplication: h r_c e_ψ = ψ(u) r_{c'} e_ψ
        let left = |h: usize, v: &[Zp]| -> Vec<Zp> {
            let mut out = vec![zero; d];
            for c in 0..d {
                if v[c].v == 0 {
                    continue;
                }
                let (c2, k) = decomp[g.mul(h, reps[c])];
                out[c2] = out[c2].add(&v[c].mul(&psi[k]));
            }
            out
        };
        // right multiplication by e_ψ w e_ψ, up to the factor 1/|U|
        let psi_inv: Vec<Zp> = psi.iter().map(|x| x.inv().unwrap()).collect();
        let right = |w: usize, v: &[Zp]| -> Vec<Zp> {
            let mut out = vec![zero; d];
            for c in 0..d {
                if v[c].v == 0 {
                    continue;
                }
                for (k, &u) in unip.iter().enumerate() {
                    let (c2, k2) = decomp[g.mul(g.mul(reps[c], u), w)];
                    let coef = psi_inv[k].mul(&psi[k2]).mul(&v[c]);
                    out[c2] = out[c2].add(&coef);
                }
            }
            out
        };
        // double coset representatives U\G/U
        let mut dc_seen = vec![false; order];
        let mut dcs = Vec::new();
        for x in g.elements() {
            if dc_seen[x] {
                continue;
            }
            dcs.push(x);
            for &u in &unip {
                for &u2 in &unip {
                    dc_seen[g.mul(g.mul(u, x), u2)] = true;
                }
            }
        }

        let candidates: Vec<Zp> = (0..ell).map(|v| Zp::new(v as i64, ell)).collect();
        let mut blocks = vec![Block::new(Matrix::identity(d, &zero))?];
        for &w in &dcs {
            let mut next = Vec::new();
            for b in &blocks {
                let m = b.restrict(&|v| right(w, v))?;
                let spaces = eigenspaces(&m, &candidates);
                let total: usize = spaces.iter().map(|s| s.1.len()).sum();
                if total != m.rows {
                    return Err(Error::CheckFailed("commutant element not diagonalizable".into()));
                }
                if spaces.len() == 1 {
                    next.push(Block::new(b.basis.clone())?);
                    continue;
                }
                for (_, ns) in spaces {
                    let k = ns.len();
                    let mut basis = Matrix::zeros(d, k, &zero);
                    for (j, vec_j) in ns.iter().enumerate() {
                        for r in 0..d {
                            let mut acc = zero;
                            for (t, x) in vec_j.iter().enumerate() {
                                acc = acc.add(&b.basis.get(r, t).mul(x));
                            }
                            basis.set(r, j, acc);
                        }
                    }
                    next.push(Block::new(basis)?);
                }
            }
            blocks = next;
        }

        let classes = g.conjugacy_classes();
        let mut class_of = vec![0usize; order];
        for (ci, cl) in classes.iter().enumerate() {
            for &x in cl {
                class_of[x] = ci;
            }
        }
        let roots: Vec<Zp> = (0..e).map(|k| omega.pow(k)).collect();
        let mut components = Vec::new();
        for b in &blocks {
            let dim = b.basis.cols;
            let mut chi = Vec::with_capacity(classes.len());
            for cl in &classes {
                let m = b.restrict(&|v| left(cl[0], v))?;
                let mut val = Scalar::zero();
                let mut count = 0;
                for (k, lam) in roots.iter().enumerate() {
                    let mut a = m.clone();
                    for i in 0..dim {
                        let v = a.get(i, i).sub(lam);
                        a.set(i, i, v);
                    }
                    let mult = a.nullspace().len();
                    if mult > 0 {
                        count += mult;
                        val = val.add(&Scalar::zeta(e as u32, k as i64).scale_int(mult as i64));
                    }
                }
                if count != dim {
                    return Err(Error::CheckFailed("group element not semisimple on a component".into()));
                }
                chi.push(val);
            }
            components.push(Component { dim, chi, cuspidal: false });
        }
        let mut oracle = CharacterOracle { group: group.clone(), classes, class_of, components, ell, exponent: e };
        let unipotent_sets = if n > 1 { conjugate_unipotents(&group)? } else { Vec::new() };
        for k in 0..oracle.components.len() {
            let mut cusp = true;
            for us in &unipotent_sets {
                let mut s = Scalar::zero();
                for &u in us {
                    s = s.add(oracle.value(k, u));
                }
                if !s.is_zero() {
                    cusp = false;
                    break;
                }
            }
            oracle.components[k].cuspidal = cusp;
        }
        Ok(oracle)
    }

    pub fn value(&self, component: usize, x: usize) -> &Scalar {
        &self.components[component].chi[self.class_of[x]]
    }

    /// `⟨a, b⟩ = |G|^{-1} Σ_C |C| a(C) conj(b(C))`.
    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (ci, cl) in self.classes.iter().enumerate() {
            acc = acc.add(&a[ci].mul(&b[ci].conj()).scale_int(cl.len() as i64));
        }
        let n = crate::linalg::rational(self.group.order() as i64);
        acc.scale(&num_traits::Inv::inv(n))
    }

    pub fn cuspidal_components(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&k| self.components[k].cuspidal).collect()
    }

    /// Orthonormality of all constituents, and the sum of their squared
    /// dimensions against the size of the module.
    pub fn self_checks(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let k = self.components.len();
        let mut ok = true;
        for a in 0..k {
            for b in 0..k {
                let want = if a == b { Scalar::one() } else { Scalar::zero() };
                if self.inner(&self.components[a].chi, &self.components[b].chi) != want {
                    ok = false;
                }
            }
        }
        out.push(Check::new("orthonormal constituents", ok, None));
        let dsum: usize = self.components.iter().map(|c| c.dim).sum();
        let module = self.group.order() / (self.group.field().size() as usize).pow((self.group.rank() * (self.group.rank() - 1) / 2) as u32);
        out.push(Check::new("multiplicity free", dsum == module, Some(format!("{dsum} vs {module}"))));
        let proj = crate::funspace::cuspidal_projector(&self.group)?.matrix.rank();
        let sq: usize = self.cuspidal_components().iter().map(|&c| self.components[c].dim.pow(2)).sum();
        out.push(Check::new("cuspidal dimension count", sq == proj, Some(format!("{sq} vs {proj}"))));
        Ok(out)
    }
}

/// The character of one cuspidal representation.
#[derive(Clone, Debug)]
pub struct CharacterSheet {
    pub pair: DLPair,
    pub dim: usize,
    pub chi: Vec<Scalar>,
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
}

impl CharacterSheet {
    pub fn value(&self, x: usize) -> &Scalar {
        &self.chi[self.class_of[x]]
    }
}

fn elliptic_elements(tower: &FieldTower, n: usize) -> Result<Vec<ExtElem>> {
    let f = tower.field(n)?;
    let mut out = Vec::new();
    for v in f.units() {
        let x = ExtElem { level: n, value: v };
        if tower.degree_of(x)? == n {
            out.push(x);
        }
    }
    Ok(out)
}

/// Matches the cuspidal constituents with the pairs by their values on
/// elliptic elements; every pair must match exactly one constituent.
pub fn cuspidal_sheets(oracle: &CharacterOracle) -> Result<Vec<CharacterSheet>> {
    let g = &oracle.group;
    let n = g.rank();
    let q = g.q();
    let pairs = cuspidal_pairs(n, q, g.kind())?;
    let tower = FieldTower::new(q, &[n])?;
    let ell = elliptic_elements(&tower, n)?;
    let mut classes_of_x = Vec::new();
    for &x in &ell {
        classes_of_x.push(elliptic_class(&tower, x, g)?.representative);
    }
    let cusp = oracle.cuspidal_components();
    if cusp.len() != pairs.len() {
        return Err(Error::CheckFailed(format!("{} cuspidal constituents for {} pairs", cusp.len(), pairs.len())));
    }
    let mut out = Vec::new();
    let mut used = BTreeSet::new();
    for pair in pairs {
        let mut hits = Vec::new();
        for &c in &cusp {
            let mut ok = true;
            for (x, &rep) in ell.iter().zip(&classes_of_x) {
                if *oracle.value(c, rep) != pair.elliptic_value(&tower, *x)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                hits.push(c);
            }
        }
        if hits.len() != 1 || !used.insert(hits[0]) {
            return Err(Error::CheckFailed(format!("pair θ = {} matches {} constituents", pair.theta.a, hits.len())));
        }
        let comp = &oracle.components[hits[0]];
        out.push(CharacterSheet {
            pair,
            dim: comp.dim,
            chi: comp.chi.clone(),
            class_of: oracle.class_of.clone(),
            class_reps: oracle.classes.iter().map(|c| c[0]).collect(),
        });
    }
    Ok(out)
}

pub fn cuspidal_character(pair: &DLPair) -> Result<CharacterSheet> {
    let g = FiniteGroup::new(pair.rank(), pair.q(), pair.kind)?;
    let oracle = CharacterOracle::new(g)?;
    cuspidal_sheets(&oracle)?
        .into_iter()
        .find(|s| s.pair == *pair)
        .ok_or_else(|| Error::Invalid("not a cuspidal pair of this group".into()))
}

/// `e_π = dim/|G| Σ_g χ(g^{-1}) δ_g`.
pub fn central_idempotent(g: &FiniteGroup, sheet: &CharacterSheet) -> Vec<Scalar> {
    let c = Scalar::from_frac(sheet.dim as i64, g.order() as i64);
    g.elements().map(|x| sheet.value(g.inv(x)).mul(&c)).collect()
}

/// The scalar by which `Σ_{w ∈ Ω} δ_w` acts on `e_π` under convolution.
pub fn class_sum_scalar(g: &FiniteGroup, omega: &[usize], e: &[Scalar]) -> Result<Scalar> {
    let conv: Vec<Scalar> = g
        .elements()
        .map(|x| {
            let mut acc = Scalar::zero();
            for &w in omega {
                acc = acc.add(&e[g.mul(g.inv(w), x)]);
            }
            acc
        })
        .collect();
    let one = g.identity();
    let c = conv[one].div(&e[one])?;
    for x in g.elements() {
        if conv[x] != c.mul(&e[x]) {
            return Err(Error::CheckFailed("class sum is not scalar on the block".into()));
        }
    }
    Ok(c)
}

#[derive(Clone, Debug)]
pub struct EtaValue {
    pub value: Scalar,
    /// `h e_π = η e_π` on the trivial stratum and `h e_π` vanishes elsewhere.
    pub consistent: bool,
}

fn trivial_stratum_labels(model: &BundleModel) -> Result<(Vec<Label>, Vec<usize>)> {
    let g = model.group();
    let zero = Coweight::zero(g.rank());
    let s = model.cache.stratum(&zero)?;
    let mut labels = Vec::new();
    let mut to_group = Vec::new();
    for pt in 0..s.space.len() {
        let (x, y) = s.space.rep(pt);
        labels.push(Label { lambda: s.lambda.clone(), point: pt });
        to_group.push(g.mul(x, g.inv(y)));
    }
    Ok((labels, to_group))
}

/// The points whose modifications can reach the trivial stratum.
fn feeding_points(model: &BundleModel, shift: i64) -> Result<Vec<Label>> {
    let g = model.group();
    let n = g.rank();
    let mut top = vec![0i64; n];
    top[n - 1] = -shift;
    let w = Window::generated(&[Coweight(top)], g.kind())?;
    let zero = Coweight::zero(n).normal(g.kind());
    Ok(model.basis(&w)?.into_iter().filter(|l| l.lambda != zero).collect())
}

/// `η_{D,f}(π)`: `h` applied to `e_π`, viewed on the trivial stratum.
pub fn eta(op: &DivisorHeckeOp, sheet: &CharacterSheet) -> Result<EtaValue> {
    let model = op.model;
    let g = model.group();
    let e = central_idempotent(g, sheet);
    let (labels, to_group) = trivial_stratum_labels(model)?;
    let zero = labels[0].lambda.clone();
    let idx: BTreeMap<Label, usize> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let func = |p: &Label| -> Result<Scalar> {
        if p.lambda != zero {
            return Ok(Scalar::zero());
        }
        Ok(e[to_group[idx[p]]].clone())
    };
    let image: Vec<Scalar> = labels.iter().map(|p| op.apply_at(&func, p)).collect::<Result<_>>()?;
    let one = labels.iter().position(|l| to_group[idx[l]] == g.identity()).unwrap();
    let value = image[one].div(&e[g.identity()])?;
    let mut consistent = true;
    for (i, p) in labels.iter().enumerate() {
        if image[i] != value.mul(&func(p)?) {
            consistent = false;
        }
    }
    if consistent {
        for p in feeding_points(model, op.degree_shift())? {
            if !op.apply_at(&func, &p)?.is_zero() {
                consistent = false;
                break;
            }
        }
    }
    Ok(EtaValue { value, consistent })
}

/// `h` restricted to the cuspidal part of the trivial stratum commutes with
/// the `G × G` action on trivializations, and maps it into itself.
pub fn cusp_equivariance(op: &DivisorHeckeOp, gens: &[usize]) -> Result<Check> {
    let model = op.model;
    let g = model.group();
    let zero = Coweight::zero(g.rank());
    let basis = cuspidal_part(model, &zero)?;
    let (labels, _) = trivial_stratum_labels(model)?;
    let zl = labels[0].lambda.clone();
    let feed = feeding_points(model, op.degree_shift())?;
    let one = g.identity();
    let mut pairs = Vec::new();
    for &h in gens {
        pairs.push((h, one));
        pairs.push((one, h));
    }
    for v in &basis {
        let vs: Vec<Scalar> = v.iter().map(|c| Scalar::from_rational(c.clone())).collect();
        let func = |p: &Label| -> Result<Scalar> {
            if p.lambda != zl {
                return Ok(Scalar::zero());
            }
            Ok(vs[p.point].clone())
        };
        let hv: Vec<Scalar> = labels.iter().map(|p| op.apply_at(&func, p)).collect::<Result<_>>()?;
        for p in &feed {
            if !op.apply_at(&func, p)?.is_zero() {
                return Ok(Check::new("cusp equivariance", false, Some(format!("leaves the trivial stratum at {p}"))));
            }
        }
        for &(h1, h2) in &pairs {
            let moved = |p: &Label| -> Result<Scalar> { func(&translate(model, h1, h2, p)?) };
            for p in &labels {
                let lhs = op.apply_at(&moved, p)?;
                let rhs = hv[translate(model, h1, h2, p)?.point].clone();
                if lhs != rhs {
                    return Ok(Check::new("cusp equivariance", false, Some(format!("({h1}, {h2}) at {p}"))));
                }
            }
        }
    }
    Ok(Check::new("cusp equivariance", true, Some(format!("{} cuspidal vectors", basis.len()))))
}

/// The trivial-to-trivial part of the correspondence at a place of degree
/// `N`, as pairs `(g_1, g_2)` of the source and target group elements with
/// multiplicity, compared with `{g_1 g_2^{-1} ∈ Ω}` for the multiset `omega`
/// (see [`crate::groups::elliptic_orbit`]).
pub fn orbit_correspondence(op: &DivisorHeckeOp, omega: &[usize]) -> Result<Check> {
    let model = op.model;
    let g = model.group();
    let (labels, to_group) = trivial_stratum_labels(model)?;
    let zl = labels[0].lambda.clone();
    let mut got: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, p) in labels.iter().enumerate() {
        for e in op.modifications(p)?.iter() {
            if e.lambda == zl {
                *got.entry((to_group[i], to_group[e.point])).or_default() += 1;
            }
        }
    }
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &w in omega {
        *mult.entry(w).or_default() += 1;
    }
    let mut want: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for a in g.elements() {
        for b in g.elements() {
            if let Some(&m) = mult.get(&g.mul(a, g.inv(b))) {
                want.insert((a, b), m);
            }
        }
    }
    let total: usize = got.values().sum();
    Ok(Check::new(
        "orbit correspondence",
        got == want,
        Some(format!(
            "{total} modifications over {} pairs, {} pairs expected, |Ω| = {} on {} elements",
            got.len(),
            want.len(),
            omega.len(),
            mult.len()
        )),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divhecke::{HeckeFn, Normalization};

    #[test]
    fn pair_counts() {
        assert_eq!(cuspidal_pairs(2, 3, Kind::GL).unwrap().len(), 3);
        assert_eq!(cuspidal_pairs(2, 3, Kind::PGL).unwrap().len(), 1);
        assert_eq!(cuspidal_pairs(2, 2, Kind::GL).unwrap().len(), 1);
        assert_eq!(cuspidal_pairs(2, 5, Kind::GL).unwrap().len(), 10);
        assert!(cuspidal_pairs(3, 2, Kind::GL).is_err());
    }

    #[test]
    fn oracle_gl2_f3() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let oracle = CharacterOracle::new(g.clone()).unwrap();
        for c in oracle.self_checks().unwrap() {
            assert!(c.passed, "{c:?}");
        }
        let sheets = cuspidal_sheets(&oracle).unwrap();
        assert_eq!(sheets.len(), 3);
        let tower = FieldTower::new(3, &[2]).unwrap();
        for s in &sheets {
            assert_eq!(s.dim, 2);
            assert_eq!(s.value(g.identity()), &Scalar::from_int(2));
            // central values (q - 1) θ(z)
            for (z, idx) in g.center_scalars() {
                let zz = tower.embed(ExtElem { level: 1, value: z }, 2).unwrap();
                assert_eq!(s.value(idx), &s.pair.theta.eval(&tower, zz).unwrap().scale_int(2));
            }
        }
    }

    #[test]
    fn oracle_small_groups() {
        for (q, kind) in [(2, Kind::GL), (3, Kind::PGL)] {
            let g = FiniteGroup::new(2, q, kind).unwrap();
            let oracle = CharacterOracle::new(g).unwrap();
            for c in oracle.self_checks().unwrap() {
                assert!(c.passed, "{c:?}");
            }
            let sheets = cuspidal_sheets(&oracle).unwrap();
            assert_eq!(sheets.len(), 1);
            assert_eq!(sheets[0].dim, q as usize - 1);
        }
    }

    #[test]
    fn lifts() {
        let pair = cuspidal_pairs(2, 3, Kind::PGL).unwrap().remove(0);
        assert_eq!(lift(&pair, 1).unwrap().theta, pair.theta);
        let l = lift(&pair, 2).unwrap();
        let tower = FieldTower::new(3, &[2, 4]).unwrap();
        for v in tower.field(4).unwrap().units() {
            let y = ExtElem { level: 4, value: v };
            let direct = pair.theta.eval(&tower, tower.norm(y, 2).unwrap()).unwrap();
            assert_eq!(l.theta.eval(&tower, y).unwrap(), direct);
        }
        assert!(!l.is_cuspidal());
    }

    #[test]
    fn eta_degree_two_pgl2_f2() {
        let g = FiniteGroup::new(2, 2, Kind::PGL).unwrap();
        let oracle = CharacterOracle::new(g.clone()).unwrap();
        let sheet = cuspidal_sheets(&oracle).unwrap().remove(0);
        let model = BundleModel::new(g.clone(), 1).unwrap();
        let tower = FieldTower::new(2, &[2]).unwrap();
        for d in tower.divisors_of_degree(2).unwrap() {
            let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal).unwrap();
            let eta = eta(&op, &sheet).unwrap();
            assert!(eta.consistent);
            let x = elliptic_class(&tower, d.rep, &g).unwrap().representative;
            assert_eq!(eta.value, *sheet.value(x));
            let omega = crate::groups::elliptic_orbit(&tower, d.rep, &g).unwrap();
            assert_eq!(omega.len(), 2);
            let c = orbit_correspondence(&op, &omega).unwrap();
            assert!(c.passed, "{c:?}");
        }
    }
}
