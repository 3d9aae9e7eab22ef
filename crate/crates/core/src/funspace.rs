//! Finitely supported functions on finite sets, group-algebra convolution,
//! intertwining (Radon) operators and the cuspidal projector.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{Rational, Scalar};
use crate::error::{Error, Result};
use crate::groups::{Coweight, FiniteGroup, ParabolicDatum, TwistedProductSpace};
use crate::linalg::{rational, Field, Matrix, Zp};

/// Identifies a finite base set by name and size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseTag {
    pub name: String,
    pub len: usize,
}

impl BaseTag {
    pub fn new(name: impl Into<String>, len: usize) -> BaseTag {
        BaseTag { name: name.into(), len }
    }
}

/// A sparse function `point -> Scalar` with zero values pruned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fn {
    pub base: BaseTag,
    values: BTreeMap<usize, Scalar>,
}

impl Fn {
    pub fn zero(base: BaseTag) -> Fn {
        Fn { base, values: BTreeMap::new() }
    }

    pub fn delta(base: BaseTag, x: usize) -> Fn {
        let mut f = Fn::zero(base);
        f.set(x, Scalar::one());
        f
    }

    pub fn from_values(base: BaseTag, v: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Fn> {
        let mut f = Fn::zero(base);
        for (x, c) in v {
            if x >= f.base.len {
                return Err(Error::Shape("support outside base".into()));
            }
            f.add_at(x, &c);
        }
        Ok(f)
    }

    pub fn get(&self, x: usize) -> Scalar {
        self.values.get(&x).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, x: usize, c: Scalar) {
        if c.is_zero() {
            self.values.remove(&x);
        } else {
            self.values.insert(x, c);
        }
    }

    pub fn add_at(&mut self, x: usize, c: &Scalar) {
        let v = self.get(x).add(c);
        self.set(x, v);
    }

    pub fn support(&self) -> impl Iterator<Item = (&usize, &Scalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, o: &Fn) -> Result<Fn> {
        if self.base != o.base {
            return Err(Error::BaseMismatch);
        }
        let mut r = self.clone();
        for (x, c) in &o.values {
            r.add_at(*x, c);
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Scalar) -> Fn {
        let mut r = Fn::zero(self.base.clone());
        for (x, v) in &self.values {
            r.set(*x, v.mul(c));
        }
        r
    }

    pub fn dense(&self) -> Vec<Scalar> {
        (0..self.base.len).map(|x| self.get(x)).collect()
    }
}

pub fn group_tag(g: &FiniteGroup) -> BaseTag {
    BaseTag::new(alloc::format!("{:?}({},{})", g.kind(), g.rank(), g.q()), g.order())
}

/// `(f1 ∗ f2)(g) = Σ_h f1(h) f2(h^{-1} g)`.
pub fn convolve(g: &FiniteGroup, f1: &Fn, f2: &Fn) -> Result<Fn> {
    let tag = group_tag(g);
    if f1.base != tag || f2.base != tag {
        return Err(Error::BaseMismatch);
    }
    let mut out = Fn::zero(tag);
    for (&h, a) in f1.support() {
        for (&k, b) in f2.support() {
            out.add_at(g.mul(h, k), &a.mul(b));
        }
    }
    Ok(out)
}

/// `(1/|G|) Σ_g δ_g`.
pub fn e_fin(g: &FiniteGroup) -> Fn {
    let c = Scalar::from_frac(1, g.order() as i64);
    Fn::from_values(group_tag(g), g.elements().map(|x| (x, c.clone()))).unwrap()
}

/// A linear map between function spaces, as a dense matrix whose columns
/// are indexed by the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<F> {
    pub domain: BaseTag,
    pub codomain: BaseTag,
    pub matrix: Matrix<F>,
}

impl<F: Field> LinearMap<F> {
    pub fn compose(&self, inner: &LinearMap<F>) -> Result<LinearMap<F>> {
        if inner.codomain != self.domain {
            return Err(Error::BaseMismatch);
        }
        Ok(LinearMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }
}

impl LinearMap<Rational> {
    /// Rank over `Q`, using a modular certificate when the map has full rank.
    pub fn rank(&self) -> usize {
        let p = 2_147_483_629u64;
        let m = &self.matrix;
        if m.data.iter().all(|x| x.is_integer()) {
            let z = m.map(|x| Zp::from_bigint(x.numer(), p));
            let r = z.rank();
            if r == m.rows.min(m.cols) {
                return r;
            }
        }
        m.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rows == self.matrix.cols && self.rank() == self.matrix.rows
    }

    pub fn to_scalar(&self) -> LinearMap<Scalar> {
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.map(|x| Scalar::from_rational(x.clone())),
        }
    }
}

impl LinearMap<Scalar> {
    /// Row-major export with every scalar as a list of coefficient strings.
    pub fn export(&self) -> Vec<Vec<Vec<(String, String)>>> {
        (0..self.matrix.rows)
            .map(|i| self.matrix.row(i).iter().map(|s| s.coefficient_strings()).collect())
            .collect()
    }

    pub fn apply(&self, f: &Fn) -> Result<Fn> {
        if f.base != self.domain {
            return Err(Error::BaseMismatch);
        }
        let mut out = Fn::zero(self.codomain.clone());
        for (&x, c) in f.support() {
            for i in 0..self.matrix.rows {
                let a = self.matrix.get(i, x);
                if !a.is_zero() {
                    out.add_at(i, &a.mul(c));
                }
            }
        }
        Ok(out)
    }
}

/// Left cosets `gH` of a subgroup, indexed by first appearance.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub coset_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl CosetSpace {
    pub fn left(g: &FiniteGroup, h: &[usize]) -> CosetSpace {
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &y in h {
                coset_of[g.mul(x, y)] = id;
            }
        }
        CosetSpace { coset_of, reps }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

fn count_matrix(rows: usize, cols: usize, entries: impl Iterator<Item = (usize, usize)>) -> Matrix<Rational> {
    let mut counts = vec![0i64; rows * cols];
    for (i, j) in entries {
        counts[i * cols + j] += 1;
    }
    Matrix { rows, cols, data: counts.into_iter().map(rational).collect() }
}

/// The correspondence `G/U^- ← G → G/U`: entry `[gU][aU^-] = |gU ∩ aU^-|`.
pub fn radon(g: &FiniteGroup, d: &ParabolicDatum) -> (LinearMap<Rational>, CosetSpace, CosetSpace) {
    let cu = CosetSpace::left(g, &d.u);
    let cm = CosetSpace::left(g, &d.u_minus);
    let m = count_matrix(cu.len(), cm.len(), g.elements().map(|h| (cu.coset_of[h], cm.coset_of[h])));
    let map = LinearMap {
        domain: BaseTag::new(alloc::format!("G/U-{}", d.lambda), cm.len()),
        codomain: BaseTag::new(alloc::format!("G/U{}", d.lambda), cu.len()),
        matrix: m,
    };
    (map, cu, cm)
}

/// The permutation matrix of a map on points (`perm[x]` = image of `x`).
pub fn permutation_matrix(perm: &[usize]) -> Matrix<Rational> {
    count_matrix(perm.len(), perm.len(), perm.iter().enumerate().map(|(x, &y)| (y, x)))
}

/// Checks `Φ ∘ L_h = L_h ∘ Φ` for all `h ∈ G` and `Φ ∘ R_m = R_m ∘ Φ` for
/// all `m ∈ M`, where `L`/`R` are left/right translation of cosets.
pub fn radon_equivariant(g: &FiniteGroup, d: &ParabolicDatum) -> Result<bool> {
    let (phi, cu, cm) = radon(g, d);
    let left = |cs: &CosetSpace, h: usize| -> Vec<usize> {
        cs.reps.iter().map(|&x| cs.coset_of[g.mul(h, x)]).collect()
    };
    let right = |cs: &CosetSpace, m: usize| -> Vec<usize> {
        cs.reps.iter().map(|&x| cs.coset_of[g.mul(x, m)]).collect()
    };
    for h in g.elements() {
        let a = phi.matrix.mul(&permutation_matrix(&left(&cm, h)))?;
        let b = permutation_matrix(&left(&cu, h)).mul(&phi.matrix)?;
        if a != b {
            return Ok(false);
        }
    }
    for &m in &d.m {
        let a = phi.matrix.mul(&permutation_matrix(&right(&cm, m)))?;
        let b = permutation_matrix(&right(&cu, m)).mul(&phi.matrix)?;
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The intertwining operator on the second factor,
/// `F(G/U ×_M G/U^-) → F(G/U ×_M G/U)`:
/// `(Φf)[x, y] = Σ_{h ∈ yU} f[x, h]`.
pub fn twisted_radon(
    g: &FiniteGroup,
    d: &ParabolicDatum,
    pm: &TwistedProductSpace,
    pp: &TwistedProductSpace,
) -> LinearMap<Rational> {
    let entries = (0..pp.len()).flat_map(|r| {
        let (x, y) = pp.rep(r);
        d.u.iter().map(move |&u| (r, pm.point(x, g.mul(y, u))))
    });
    LinearMap {
        domain: BaseTag::new(alloc::format!("A{}", d.lambda), pm.len()),
        codomain: BaseTag::new(alloc::format!("V{}", d.lambda), pp.len()),
        matrix: count_matrix(pp.len(), pm.len(), entries),
    }
}

/// All coweights `(1^{b_1}, 0^{b_2}, ...)`-style representatives of the
/// proper standard parabolics of `GL(N)`.
pub fn proper_parabolic_coweights(n: usize) -> Vec<Coweight> {
    // compositions of n with at least two parts
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n.saturating_sub(1))) {
        if mask == 0 {
            continue;
        }
        let mut v = Vec::with_capacity(n);
        let mut level = n as i64;
        v.push(level);
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                level -= 1;
            }
            v.push(level);
        }
        out.push(Coweight(v));
    }
    out
}

/// All conjugates `h U_P h^{-1}` of unipotent radicals of proper standard
/// parabolics, as sorted element lists.
pub fn conjugate_unipotents(g: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for lam in proper_parabolic_coweights(g.rank()) {
        let d = ParabolicDatum::new(&lam, g)?;
        for h in g.elements() {
            let mut s: Vec<usize> = d.u.iter().map(|&u| g.conj(h, u)).collect();
            s.sort_unstable();
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// The orthogonal projector (standard pairing on `F(G)`) onto the cuspidal
/// functions `{f : Σ_{u∈U_P} f(g u h) = 0 for all proper P, g, h}`.
pub fn cuspidal_projector(g: &FiniteGroup) -> Result<LinearMap<Rational>> {
    let o = g.order();
    let tag = group_tag(g);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    // translates g·(h^{-1} U h) cover all g U h
    for s in conjugate_unipotents(g)? {
        for x in g.elements() {
            let mut r = vec![BigRational::zero(); o];
            for &u in &s {
                r[g.mul(x, u)] = rational(1);
            }
            if !rows.contains(&r) {
                rows.push(r);
            }
        }
    }
    let proj = if rows.is_empty() {
        Matrix::identity(o, &rational(0))
    } else {
        let b = Matrix::from_rows(rows)?;
        let basis = b.nullspace();
        if basis.is_empty() {
            Matrix::zeros(o, o, &rational(0))
        } else {
            let c = Matrix::from_rows(basis)?.transpose(); // o x k
            let ctc = c.transpose().mul(&c)?;
            c.mul(&ctc.inverse()?)?.mul(&c.transpose())?
        }
    };
    Ok(LinearMap { domain: tag.clone(), codomain: tag, matrix: proj })
}

/// Matrix of left translation `L_h f(x) = f(h^{-1} x)` on `F(G)`.
pub fn left_translation(g: &FiniteGroup, h: usize) -> Matrix<Rational> {
    let perm: Vec<usize> = g.elements().map(|x| g.mul(h, x)).collect();
    permutation_matrix(&perm)
}

/// Matrix of right translation `R_h f(x) = f(x h)` on `F(G)`.
pub fn right_translation(g: &FiniteGroup, h: usize) -> Matrix<Rational> {
    let perm: Vec<usize> = g.elements().map(|x| g.mul(x, g.inv(h))).collect();
    permutation_matrix(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Kind;

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn delta_convolution() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let t = group_tag(&g);
        for a in g.elements() {
            for b in g.elements() {
                let c = convolve(&g, &Fn::delta(t.clone(), a), &Fn::delta(t.clone(), b)).unwrap();
                assert_eq!(c, Fn::delta(t.clone(), g.mul(a, b)));
            }
        }
        let e = e_fin(&g);
        assert_eq!(convolve(&g, &e, &e).unwrap(), e);
    }

    #[test]
    fn class_indicator_is_central() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let t = group_tag(&g);
        for cls in g.conjugacy_classes() {
            let ind = Fn::from_values(t.clone(), cls.iter().map(|&x| (x, Scalar::one()))).unwrap();
            for h in g.elements() {
                let d = Fn::delta(t.clone(), h);
                assert_eq!(convolve(&g, &ind, &d).unwrap(), convolve(&g, &d, &ind).unwrap());
            }
        }
    }

    #[test]
    fn radon_small_cases() {
        let g = FiniteGroup::new(2, 2, Kind::GL).unwrap();
        let d = ParabolicDatum::new(&cw(&[1, 0]), &g).unwrap();
        let (phi, _, _) = radon(&g, &d);
        assert_eq!((phi.matrix.rows, phi.matrix.cols), (3, 3));
        assert!(phi.is_invertible());
        let z = ParabolicDatum::new(&cw(&[0, 0]), &g).unwrap();
        let (id, _, _) = radon(&g, &z);
        assert_eq!(id.matrix, Matrix::identity(6, &rational(0)));
        assert!(radon_equivariant(&g, &d).unwrap());
    }

    #[test]
    fn cuspidal_projector_ranks() {
        let g1 = FiniteGroup::new(1, 3, Kind::GL).unwrap();
        let p1 = cuspidal_projector(&g1).unwrap();
        assert_eq!(p1.matrix, Matrix::identity(2, &rational(0)));
        let g = FiniteGroup::new(2, 3, Kind::PGL).unwrap();
        let p = cuspidal_projector(&g).unwrap();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.matrix.mul(&p.matrix).unwrap(), p.matrix);
        for h in g.elements() {
            let l = left_translation(&g, h);
            let r = right_translation(&g, h);
            assert_eq!(l.mul(&p.matrix).unwrap(), p.matrix.mul(&l).unwrap());
            assert_eq!(r.mul(&p.matrix).unwrap(), p.matrix.mul(&r).unwrap());
        }
    }
}
