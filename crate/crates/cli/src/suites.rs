//! Named verification suites. Each one composes the core modules for one
//! group and one window and turns every comparison into a [`CheckRecord`].

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use k1hecke_core::arith::{FieldTower, Scalar};
use k1hecke_core::bundles::{cusp_matches_group, cuspidal_part, raw_point_census, ActInverse, BundleModel, Side, VElement};
use k1hecke_core::characters::{
    central_idempotent, class_sum_scalar, cusp_equivariance, cuspidal_sheets, eta, lift, orbit_correspondence,
    CharacterOracle, CharacterSheet,
};
use k1hecke_core::divhecke::{
    centrality_check, eval_phi, gl1_centdiv_suite, normalization, Check, DivisorHeckeOp, HeckeFn, LanglandsParam,
    Normalization, ParamShape, SignConvention,
};
use k1hecke_core::error::{Error, Result};
use k1hecke_core::funspace::{proper_parabolic_coweights, radon, radon_equivariant};
use k1hecke_core::groups::{elliptic_class, elliptic_orbit, Coweight, FiniteGroup, Kind, ParabolicDatum, Sign, TwistedProductSpace, Window};
use k1hecke_core::linalg::{gfmat, rational};
use k1hecke_core::loophecke::{
    jantzen_flag, random_g_o, raw_double_coset_census, transport, HeckeElement, Label,
};
use k1hecke_core::poly::{cartan, LMat};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cache::Cache;
use crate::config::{ConfigError, RunConfig};
use crate::report::{CheckRecord, Report};

/// All suites, in execution (dependency) order.
pub const SUITES: &[&str] = &[
    "radon",
    "jantzen",
    "census",
    "loc-glob",
    "bimodule",
    "cusp",
    "gl1-centdiv",
    "centrality",
    "gln-orbit",
    "lift-gln",
    "lift-vanish",
    "lift-degree",
];

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub cache: Option<Cache>,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.cfg.group.n
    }

    fn q(&self) -> u32 {
        self.cfg.group.q
    }

    fn kind(&self) -> Kind {
        self.cfg.kind()
    }

    fn group(&self) -> Result<FiniteGroup> {
        FiniteGroup::new(self.n(), self.q(), self.kind())
    }

    fn model(&self) -> Result<BundleModel> {
        BundleModel::new(self.group()?, self.cfg.z)
    }

    fn unit(&self, k: i64) -> Coweight {
        let mut v = vec![0; self.n()];
        v[0] = k;
        Coweight(v)
    }

    /// The configured window together with the trivial and minuscule strata.
    fn full_window(&self) -> Result<Window> {
        let gens = [Coweight::zero(self.n()), self.unit(1), self.cfg.window_generator()];
        Window::generated(&gens, self.kind())
    }

    fn degrees(&self, default: &[usize]) -> Vec<usize> {
        self.cfg.degrees.clone().unwrap_or_else(|| default.to_vec())
    }

    fn cached(&self, key: &str, f: impl FnOnce() -> Result<u64>) -> Result<u64> {
        match &self.cache {
            Some(c) => c.get_or(key, f),
            None => f(),
        }
    }
}

fn from_check(suite: &str, prefix: &str, c: Check) -> CheckRecord {
    let id = if prefix.is_empty() { c.name } else { format!("{prefix} {}", c.name) };
    CheckRecord::new(suite, id, c.passed, c.witness)
}

/// Counts passes over many trials and keeps the first failure.
struct Tally {
    total: usize,
    passed: usize,
    first_bad: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { total: 0, passed: 0, first_bad: None }
    }

    fn add(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_bad.is_none() {
            self.first_bad = Some(witness());
        }
    }

    fn record(self, suite: &str, id: impl Into<String>) -> CheckRecord {
        let w = match self.first_bad {
            Some(b) => format!("{}/{} passed; first failure: {b}", self.passed, self.total),
            None => format!("{}/{} passed", self.passed, self.total),
        };
        CheckRecord::new(suite, id, self.passed == self.total, Some(w))
    }
}

/// A small generating set, chosen greedily in element order.
pub fn group_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut closure: BTreeSet<usize> = [g.identity()].into_iter().collect();
    for x in g.elements() {
        if closure.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut stack: Vec<usize> = closure.iter().copied().collect();
        while let Some(y) = stack.pop() {
            for &s in &gens {
                let z = g.mul(y, s);
                if closure.insert(z) {
                    stack.push(z);
                }
            }
        }
    }
    gens
}

pub fn run_suite(name: &str, ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    match name {
        "radon" => radon_suite(ctx),
        "jantzen" => jantzen_suite(ctx),
        "census" => census_suite(ctx),
        "loc-glob" => loc_glob_suite(ctx),
        "bimodule" => bimodule_suite(ctx),
        "cusp" => cusp_suite(ctx),
        "gl1-centdiv" => gl1_suite(ctx),
        "centrality" => centrality_suite(ctx),
        "gln-orbit" => gln_orbit_suite(ctx),
        "lift-gln" => lift_gln_suite(ctx),
        "lift-vanish" => lift_vanish_suite(ctx),
        "lift-degree" => lift_degree_suite(ctx),
        _ => Err(Error::Invalid(format!("unknown suite {name}"))),
    }
}

/// Runs the requested suites in dependency order. A hard error fails the
/// suite and skips the remaining ones; a budget error only skips its suite.
/// `on_suite` receives the wall time of each suite.
pub fn run(cfg: &RunConfig, cache: Option<Cache>, mut on_suite: impl FnMut(&str, Duration)) -> std::result::Result<Report, ConfigError> {
    cfg.validate()?;
    let ctx = Ctx { cfg, cache };
    let mut checks = Vec::new();
    let mut aborted: Option<String> = None;
    for &name in SUITES.iter().filter(|s| cfg.suites.iter().any(|c| c == *s)) {
        if let Some(prev) = &aborted {
            checks.push(CheckRecord::skipped(name, "suite", format!("not run after a hard error in {prev}")));
            continue;
        }
        let t = Instant::now();
        match run_suite(name, &ctx) {
            Ok(r) => checks.extend(r),
            Err(e @ Error::BudgetExceeded { .. }) => checks.push(CheckRecord::skipped(name, "suite", e.to_string())),
            Err(Error::Unsupported(s)) => checks.push(CheckRecord::skipped(name, "suite", s)),
            Err(e) => {
                checks.push(CheckRecord::new(name, "suite", false, Some(format!("error: {e}"))));
                aborted = Some(name.to_string());
            }
        }
        on_suite(name, t.elapsed());
    }
    Ok(Report::new(cfg.clone(), checks))
}

fn radon_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let g = ctx.group()?;
    let mut out = Vec::new();
    for lam in proper_parabolic_coweights(g.rank()) {
        let d = ParabolicDatum::new(&lam, &g)?;
        let (phi, src, dst) = radon(&g, &d);
        out.push(CheckRecord::new(
            "radon",
            format!("invertible {lam}"),
            phi.is_invertible(),
            Some(format!("{}x{}", dst.len(), src.len())),
        ));
        out.push(CheckRecord::new("radon", format!("equivariant {lam}"), radon_equivariant(&g, &d)?, None));
    }
    Ok(out)
}

fn jantzen_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "jantzen";
    let (n, q) = (ctx.n(), ctx.q());
    let g = FiniteGroup::new(n, q, Kind::GL)?;
    let f = g.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed ^ ((n as u64) << 32 | q as u64));
    let trials = ctx.cfg.trials.unwrap_or(500);
    let (mut ty, mut sym, mut tr) = (Tally::new(), Tally::new(), Tally::new());
    for trial in 0..trials {
        let mut lam: Vec<i64> = (0..n).map(|_| (rng.next_u32() % 4) as i64 - 1).collect();
        lam.sort_by(|a, b| b.cmp(a));
        let u = random_g_o(&f, n, 2, &mut rng);
        let v = random_g_o(&f, n, 2, &mut rng);
        let k = u.mul(&f, &LMat::diag_power(&lam)).mul(&f, &v);
        let fl = jantzen_flag(&f, &k)?;
        let ed = cartan(&f, &k)?.lambda;
        let ft = fl.flag_type();
        ty.add(ft == ed && ed == lam, || format!("trial {trial}: flag type {ft:?}, elementary divisors {ed:?}"));
        let pd = fl.prime_graded_dims();
        let ok = lam.iter().all(|i| pd.get(&-i) == Some(&lam.iter().filter(|x| *x == i).count()))
            && pd.values().sum::<usize>() == n;
        sym.add(ok, || format!("trial {trial}: type {lam:?}, gr(E') dims {pd:?}"));
        let a = random_g_o(&f, n, 2, &mut rng);
        let b = random_g_o(&f, n, 2, &mut rng);
        let moved = jantzen_flag(&f, &a.mul(&f, &k).mul(&f, &b))?;
        let b0inv = gfmat::inverse(&f, &b.coeff_matrix(0), n)?;
        let a0 = a.coeff_matrix(0);
        let ok = (lam[n - 1] - 1..=lam[0] + 1).all(|i| {
            moved.e_at(i) == transport(&f, &b0inv, &fl.e_at(i), n)
                && moved.e_prime_at(i) == transport(&f, &a0, &fl.e_prime_at(i), n)
        });
        tr.add(ok, || format!("trial {trial}: type {lam:?}"));
    }
    let tag = format!("GL({n},{q})");
    Ok(vec![
        ty.record(S, format!("{tag} flag type = elementary divisor type")),
        sym.record(S, format!("{tag} gr_i(E) and gr_-i(E') dimensions agree")),
        tr.record(S, format!("{tag} G(O) x G(O) acts through reduction mod t")),
    ])
}

/// One row of the census table. Raw oracle entries carry the reason when
/// they were not computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub lambda: Coweight,
    pub a: u64,
    pub a_expected: u64,
    pub raw_a: std::result::Result<(u64, u64), String>,
    pub precision: usize,
    pub v: u64,
    pub v_expected: u64,
    pub raw_v: std::result::Result<u64, String>,
}

fn coweight_key(c: &Coweight) -> String {
    c.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}

pub fn census_rows(ctx: &Ctx) -> Result<Vec<CensusRow>> {
    let g = ctx.group()?;
    let model = ctx.model()?;
    let w = ctx.full_window()?;
    let (n, q, kind) = (ctx.n(), ctx.q(), ctx.kind());
    let mut rows = Vec::new();
    for lam in w.members() {
        let d = ParabolicDatum::new(lam, &g)?;
        let a = model.local.cache.stratum(lam)?.space.len() as u64;
        let a_expected = TwistedProductSpace::expected_len(&g, &d, Sign::PlusMinus) as u64;
        let v = model.cache.stratum(lam)?.space.len() as u64;
        let v_expected = TwistedProductSpace::expected_len(&g, &d, Sign::PlusPlus) as u64;
        let m = ctx.cfg.precision.unwrap_or(lam.spread() as usize + 2);
        let raw = |m: usize| {
            let key = format!("raw-a-{kind:?}-n{n}-q{q}-l{}-m{m}", coweight_key(lam));
            ctx.cached(&key, || Ok(raw_double_coset_census(&g, lam, m)?.len() as u64))
        };
        let raw_a = match (raw(m), raw(m + 1)) {
            (Ok(x), Ok(y)) => Ok((x, y)),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        };
        let raw_v = if kind == Kind::GL {
            let key = format!("raw-v-GL-n{n}-q{q}-l{}", coweight_key(lam));
            ctx.cached(&key, || Ok(raw_point_census(&g, lam)? as u64)).map_err(|e| e.to_string())
        } else {
            Err("raw point census is implemented for GL".into())
        };
        rows.push(CensusRow { lambda: lam.clone(), a, a_expected, raw_a, precision: m, v, v_expected, raw_v });
    }
    rows.sort_by_key(|r| (r.lambda.degree(), r.lambda.clone()));
    Ok(rows)
}

fn census_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "census";
    let mut out = Vec::new();
    for r in census_rows(ctx)? {
        let l = &r.lambda;
        out.push(CheckRecord::new(S, format!("|A_{l}| = twisted (+,-) count"), r.a == r.a_expected, Some(format!("{} vs {}", r.a, r.a_expected))));
        out.push(CheckRecord::new(S, format!("|V_{l}| = twisted (+,+) count"), r.v == r.v_expected, Some(format!("{} vs {}", r.v, r.v_expected))));
        match &r.raw_a {
            Ok((x, y)) => {
                out.push(CheckRecord::new(S, format!("raw double cosets {l} at M={}", r.precision), *x == r.a, Some(format!("{x} vs {}", r.a))));
                out.push(CheckRecord::new(S, format!("raw double cosets {l} stable at M={}", r.precision + 1), x == y, Some(format!("{y} vs {x}"))));
            }
            Err(e) => out.push(CheckRecord::skipped(S, format!("raw double cosets {l}"), e.clone())),
        }
        match &r.raw_v {
            Ok(x) => out.push(CheckRecord::new(S, format!("raw transition census {l}"), *x == r.v, Some(format!("{x} vs {}", r.v)))),
            Err(e) if ctx.kind() == Kind::GL => out.push(CheckRecord::skipped(S, format!("raw transition census {l}"), e.clone())),
            Err(_) => {}
        }
    }
    Ok(out)
}

/// `q^{Σ_{i<j}(λ_i - λ_j) - #{i<j : λ_i > λ_j}}`, the scalar of the graded
/// pieces of `act` against the Radon transform.
pub fn graded_act_expected(q: u32, lam: &Coweight) -> i64 {
    let l = &lam.0;
    let mut e = 0i64;
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            e += l[i] - l[j];
            if l[i] > l[j] {
                e -= 1;
            }
        }
    }
    (q as i64).pow(e as u32)
}

fn loc_glob_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "loc-glob";
    let model = ctx.model()?;
    let w = ctx.full_window()?;
    let (map, a, v) = model.act_map(&w)?;
    let mut out = vec![CheckRecord::new(
        S,
        format!("act invertible on window {}", ctx.cfg.window_generator()),
        map.is_invertible(),
        Some(format!("dim A = {}, dim V = {}, rank {}", a.len(), v.len(), map.rank())),
    )];
    for lam in w.members() {
        let got = model.graded_act_scalar(lam)?;
        let want = rational(graded_act_expected(ctx.q(), lam));
        out.push(CheckRecord::new(
            S,
            format!("graded act {lam} = scalar x Radon"),
            got.as_ref() == Some(&want),
            Some(format!("{} vs {want}", got.map_or("not a scalar multiple".to_string(), |r| r.to_string()))),
        ));
    }
    Ok(out)
}

fn bimodule_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "bimodule";
    let model = ctx.model()?;
    let g = model.group().clone();
    let kind = ctx.kind();
    let w = ctx.full_window()?;
    let inv = ActInverse::new(&model, &w)?;
    let small = Window::generated(&[ctx.unit(1)], kind)?;
    let basis = model.local.cache.basis(&small)?;
    let pts = model.basis(&small)?;
    let f0 = VElement::basis(pts[pts.len() / 2].clone());
    let probe_w = Window::generated(&[ctx.cfg.window_generator().add(&ctx.unit(1))], kind)?;
    let probe = model.basis(&probe_w)?;
    let probe_step = (probe.len() / 40).max(1);
    let mut out = Vec::new();

    let mut t = Tally::new();
    for x in basis.iter().step_by((basis.len() / 4).max(1)) {
        for y in basis.iter().skip(1).step_by((basis.len() / 3).max(1)) {
            let (ax, by) = (HeckeElement::basis(x.clone()), HeckeElement::basis(y.clone()));
            for p in probe.iter().step_by(probe_step) {
                let l = model.apply_at(Side::Zero, &ax, &|r| model.apply_at(Side::Infinity, &by, &|s| Ok(f0.get(s)), r), p)?;
                let r = model.apply_at(Side::Infinity, &by, &|r| model.apply_at(Side::Zero, &ax, &|s| Ok(f0.get(s)), r), p)?;
                t.add(l == r, || format!("{x} at 0, {y} at ∞, point {p}"));
            }
        }
    }
    out.push(t.record(S, "actions at 0 and ∞ commute"));

    let mut t = Tally::new();
    for x in g.elements() {
        let d = model.local.delta_group(x)?;
        t.add(model.iota(&d, &w, &inv)? == model.local.delta_group(g.inv(x))?, || format!("g = {x}"));
    }
    out.push(t.record(S, "ι(δ_g) = δ_g^-1"));

    let e = model.local.e_fin()?;
    let mut t = Tally::new();
    for x in basis.iter().step_by((basis.len() / 8).max(1)) {
        let s = model.local.convolve(&model.local.convolve(&e, &HeckeElement::basis(x.clone()), None)?, &e, None)?;
        t.add(model.iota(&s, &w, &inv)? == s, || format!("e {x} e"));
    }
    out.push(t.record(S, "ι = id on e_fin A e_fin"));

    let mut t = Tally::new();
    for (i, x) in basis.iter().enumerate().step_by((basis.len() / 8).max(1)) {
        let y = &basis[(i * 5 + 2) % basis.len()];
        let (a, b) = (HeckeElement::basis(x.clone()), HeckeElement::basis(y.clone()));
        let ab = model.local.convolve(&a, &b, None)?;
        if !ab.types().iter().all(|l| w.contains(l)) {
            continue;
        }
        let lhs = model.iota(&ab, &w, &inv)?;
        let rhs = model.local.convolve(&model.iota(&b, &w, &inv)?, &model.iota(&a, &w, &inv)?, None)?;
        t.add(lhs == rhs, || format!("a = {x}, b = {y}"));
    }
    out.push(t.record(S, "ι(ab) = ι(b)ι(a)"));

    // ι depends on the marked point; measure how much
    let z2 = g.field().generator();
    if z2 != ctx.cfg.z {
        let other = BundleModel::new(g.clone(), z2)?;
        let inv2 = ActInverse::new(&other, &w)?;
        let mut t = Tally::new();
        for x in g.elements() {
            let d = model.local.delta_group(x)?;
            t.add(other.iota(&d, &w, &inv2)? == model.local.delta_group(g.inv(x))?, || format!("g = {x}"));
        }
        out.push(t.record(S, format!("ι(δ_g) = δ_g^-1 for z = {z2}")));
        let (mut differ, mut t) = (0, Tally::new());
        for x in &basis {
            let a = HeckeElement::basis(x.clone());
            let i2 = other.iota(&a, &w, &inv2)?;
            if model.iota(&a, &w, &inv)? != i2 {
                differ += 1;
            }
            let s = model.local.convolve(&model.local.convolve(&e, &a, None)?, &e, None)?;
            t.add(other.iota(&s, &w, &inv2)? == s, || format!("e {x} e, z = {z2}"));
        }
        let mut r = t.record(S, &format!("ι for z = {z2} is again id on e_fin A e_fin"));
        let note = format!("ι_z differs from ι_{} on {differ} of {} basis elements", ctx.cfg.z, basis.len());
        r.witness = Some(match r.witness {
            Some(w) => format!("{w}; {note}"),
            None => note,
        });
        out.push(r);
    }
    Ok(out)
}

fn cusp_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "cusp";
    let model = ctx.model()?;
    let mut out = vec![CheckRecord::new(S, "cuspidal part of stratum 0 = F_cusp(G)", cusp_matches_group(&model)?, None)];
    let zero = Coweight::zero(ctx.n()).normal(ctx.kind());
    let w = Window::generated(&[ctx.cfg.window_generator().add(&ctx.unit(1))], ctx.kind())?;
    let mut members: Vec<Coweight> = ctx.full_window()?.members().to_vec();
    members.extend(w.members().iter().cloned());
    members.sort();
    members.dedup();
    let d0 = cuspidal_part(&model, &zero)?.len();
    for lam in members.iter().filter(|l| **l != zero) {
        let c = cuspidal_part(&model, lam)?.len();
        if lam.spread() == 0 {
            // a central translate of the trivial stratum
            out.push(CheckRecord::new(S, format!("central stratum {lam} matches stratum 0"), c == d0, Some(format!("dim {c} vs {d0}"))));
        } else {
            out.push(CheckRecord::new(S, format!("no cuspidal vectors on stratum {lam}"), c == 0, Some(format!("dim {c}"))));
        }
    }
    Ok(out)
}

fn gl1_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let i_max = ctx.degrees(&[1, 2, 3]).into_iter().max().unwrap_or(0);
    let samples = [Scalar::one(), Scalar::from_int(-1), Scalar::from_frac(2, 3), Scalar::zeta(5, 1)];
    Ok(gl1_centdiv_suite(ctx.q(), i_max, &samples, 2)?.into_iter().map(|c| from_check("gl1-centdiv", "", c)).collect())
}

/// `G(k)` generators followed by every basis element of the minuscule
/// strata of `A` (both signs, and the central ones for GL).
fn algebra_generators(model: &BundleModel, ctx: &Ctx) -> Result<Vec<Label>> {
    let g = model.group();
    let n = ctx.n();
    let mut out = Vec::new();
    for x in group_generators(g) {
        out.push(model.local.label(&LMat::from_const(g.matrix(x), n))?);
    }
    let mut strata = vec![ctx.unit(1)];
    if ctx.kind() == Kind::GL {
        let mut m = vec![0; n];
        m[n - 1] = -1;
        strata.push(Coweight(m));
        strata.push(Coweight(vec![1; n]));
        strata.push(Coweight(vec![-1; n]));
    }
    for lam in strata {
        let lam = lam.normal(ctx.kind());
        let s = model.local.cache.stratum(&lam)?;
        out.extend((0..s.space.len()).map(|p| Label { lambda: lam.clone(), point: p }));
    }
    Ok(out)
}

fn first_and_last<T: Clone>(v: &[T]) -> Vec<T> {
    match v.len() {
        0 => Vec::new(),
        1 => vec![v[0].clone()],
        k => vec![v[0].clone(), v[k - 1].clone()],
    }
}

fn centrality_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "centrality";
    let model = ctx.model()?;
    let g = model.group().clone();
    let gens = algebra_generators(&model, ctx)?;
    let points = model.basis(&Window::generated(&[ctx.unit(1)], ctx.kind())?)?;
    let gg = group_generators(&g);
    let mut out = Vec::new();
    for i in ctx.degrees(&[1, 2, 4]) {
        let tower = FieldTower::new(ctx.q(), &[i])?;
        for d in first_and_last(&tower.divisors_of_degree(i)?) {
            let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal)?;
            let tag = format!("i={i} x={}", d.rep.value);
            let mut t = Tally::new();
            for c in centrality_check(&op, &gens, &points)? {
                t.add(c.passed, || format!("{} {}", c.name, c.witness.unwrap_or_default()));
            }
            out.push(t.record(S, format!("{tag} commutes with A ⊗ A generators at 0 and ∞")));
            // V_cusp = F_cusp(G) needs a semisimple group
            if ctx.kind() == Kind::PGL {
                out.push(from_check(S, &tag, cusp_equivariance(&op, &gg)?));
            }
        }
    }
    Ok(out)
}

fn require_pgl2(ctx: &Ctx, what: &str) -> Result<()> {
    if ctx.kind() != Kind::PGL || ctx.n() != 2 {
        return Err(Error::Unsupported(format!(
            "{what} is computed for PGL(2): in GL the operator moves the trivial stratum to another degree"
        )));
    }
    Ok(())
}

fn gln_orbit_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    require_pgl2(ctx, "the trivial-stratum correspondence")?;
    let model = ctx.model()?;
    let g = model.group().clone();
    let n = ctx.n();
    let tower = FieldTower::new(ctx.q(), &[n])?;
    let mut out = Vec::new();
    for d in tower.divisors_of_degree(n)? {
        let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal)?;
        let omega = elliptic_orbit(&tower, d.rep, &g)?;
        out.push(from_check("gln-orbit", &format!("x={}", d.rep.value), orbit_correspondence(&op, &omega)?));
    }
    Ok(out)
}

struct Characters {
    model: BundleModel,
    sheets: Vec<CharacterSheet>,
    checks: Vec<Check>,
}

fn characters(ctx: &Ctx) -> Result<Characters> {
    require_pgl2(ctx, "η")?;
    let model = ctx.model()?;
    let oracle = CharacterOracle::new(model.group().clone())?;
    let checks = oracle.self_checks()?;
    let sheets = cuspidal_sheets(&oracle)?;
    Ok(Characters { model, sheets, checks })
}

fn param(sheet: &CharacterSheet, sign: SignConvention) -> LanglandsParam {
    LanglandsParam {
        q: sheet.pair.q(),
        rank: sheet.pair.rank(),
        shape: ParamShape::Elliptic { theta: sheet.pair.theta.clone(), sign },
    }
}

fn lift_gln_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "lift-gln";
    let ch = characters(ctx)?;
    let g = ch.model.group().clone();
    let (n, q) = (ctx.n(), ctx.q() as i64);
    let mut out: Vec<CheckRecord> = ch.checks.into_iter().map(|c| from_check(S, "oracle", c)).collect();
    let tower = FieldTower::new(ctx.q(), &[n])?;
    let lit = normalization(ctx.q(), n, n, Normalization::Literal)?;
    let inl = normalization(ctx.q(), n, n, Normalization::Inline)?;
    let mut inline_rejected = false;
    for s in &ch.sheets {
        out.push(CheckRecord::new(S, format!("θ={} dim π = q - 1", s.pair.theta.a), s.dim as i64 == q - 1, Some(format!("{}", s.dim))));
    }
    for d in tower.divisors_of_degree(n)? {
        let op = DivisorHeckeOp::new(&ch.model, &tower, d, HeckeFn::StdTrace, Normalization::Literal)?;
        let cls = elliptic_class(&tower, d.rep, &g)?;
        let x = cls.representative;
        let omega_set = elliptic_orbit(&tower, d.rep, &g)?;
        let omega = omega_set.len() as i64;
        let tag = format!("x={}", d.rep.value);
        out.push(CheckRecord::new(
            S,
            format!("{tag} |Ω_x| = q^2 - q"),
            omega == q * q - q,
            Some(format!("{omega} with multiplicity, {} distinct", cls.members.len())),
        ));
        for s in &ch.sheets {
            let tag = format!("{tag} θ={}", s.pair.theta.a);
            let ev = eta(&op, s)?;
            let chi = s.value(x).clone();
            out.push(CheckRecord::new(
                S,
                format!("{tag} η = χ_π(x)"),
                ev.consistent && ev.value == chi,
                Some(format!("η = {}, χ = {chi}, block-scalar {}", ev.value, ev.consistent)),
            ));
            if ev.value.mul(&inl).div(&lit)? != chi {
                inline_rejected = true;
            }
            let c = class_sum_scalar(&g, &omega_set, &central_idempotent(&g, s))?;
            let lhs = chi.scale_int(omega);
            let rhs = c.scale_int(s.dim as i64);
            out.push(CheckRecord::new(S, format!("{tag} |Ω|χ(x) = dim·c(π,x)"), lhs == rhs, Some(format!("{lhs} vs {rhs}"))));
            for sign in [SignConvention::InsideU, SignConvention::InsideS] {
                let phi = eval_phi(&param(s, sign), &d, HeckeFn::StdTrace)?;
                out.push(CheckRecord::new(
                    S,
                    format!("{tag} η = φ(s, u), sign {sign:?}"),
                    phi.value == ev.value,
                    Some(format!("φ = {}, witnesses {:?}", phi.value, phi.witnesses)),
                ));
            }
        }
    }
    out.push(CheckRecord::new(
        S,
        "inline normalization q^(-iN/2) contradicts χ_π",
        inline_rejected,
        Some(format!("ratio to the literal constant: {}", inl.div(&lit)?)),
    ));
    Ok(out)
}

fn lift_vanish_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "lift-vanish";
    let ch = characters(ctx)?;
    let n = ctx.n();
    let mut out = Vec::new();
    for i in ctx.degrees(&[1, 3]).into_iter().filter(|i| i % n != 0) {
        let tower = FieldTower::new(ctx.q(), &[i])?;
        for s in &ch.sheets {
            let mut t = Tally::new();
            for d in tower.divisors_of_degree(i)? {
                let op = DivisorHeckeOp::new(&ch.model, &tower, d, HeckeFn::StdTrace, Normalization::Literal)?;
                let ev = eta(&op, s)?;
                let phi = eval_phi(&param(s, SignConvention::InsideS), &d, HeckeFn::StdTrace)?.value;
                t.add(ev.consistent && ev.value.is_zero() && phi.is_zero(), || {
                    format!("x={}: η = {}, φ = {phi}", d.rep.value, ev.value)
                });
            }
            out.push(t.record(S, format!("i={i} θ={} η = φ = 0", s.pair.theta.a)));
        }
    }
    Ok(out)
}

fn lift_degree_suite(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    const S: &str = "lift-degree";
    let ch = characters(ctx)?;
    let n = ctx.n();
    let mut out = Vec::new();
    for i in ctx.degrees(&[4]).into_iter().filter(|i| i % n == 0 && *i > n) {
        let a = i / n;
        let tower = FieldTower::new(ctx.q(), &[n, i])?;
        let ops: Vec<DivisorHeckeOp> = tower
            .divisors_of_degree(i)?
            .into_iter()
            .map(|d| DivisorHeckeOp::new(&ch.model, &tower, d, HeckeFn::StdTrace, Normalization::Literal))
            .collect::<Result<_>>()?;
        for s in &ch.sheets {
            let lifted = lift(&s.pair, a)?;
            let th = &s.pair.theta;
            let (mut cons, mut lit, mut lifts, mut on_s, mut on_u) = (Tally::new(), Tally::new(), Tally::new(), Tally::new(), Tally::new());
            for op in &ops {
                let d = op.divisor;
                let x = d.rep.value;
                let ev = eta(op, s)?;
                let nx = tower.norm(d.rep, n)?;
                let tv = th.eval(&tower, nx)?;
                let formula = tv.add(&tv.pow(ctx.q() as i64)?).neg();
                let chi_lift = lifted.elliptic_value(&tower, d.rep)?;
                let phi_s = eval_phi(&param(s, SignConvention::InsideS), &d, HeckeFn::StdTrace)?.value;
                let phi_u = eval_phi(&param(s, SignConvention::InsideU), &d, HeckeFn::StdTrace)?.value;
                cons.add(ev.consistent, || format!("x={x}"));
                lit.add(ev.value == formula, || format!("x={x}: η = {}, -(θ(Nx) + θ(Nx)^q) = {formula}", ev.value));
                lifts.add(formula == chi_lift && phi_u == chi_lift, || format!("x={x}: {formula}, χ_Lift {chi_lift}, φ {phi_u}"));
                on_s.add(ev.value == phi_s, || format!("x={x}: η = {}, φ = {phi_s}", ev.value));
                on_u.add(ev.value == phi_u, || format!("x={x}: η = {}, φ = {phi_u}", ev.value));
            }
            let tag = format!("i={i} θ={}", th.a);
            out.push(cons.record(S, format!("{tag} h acts on the cuspidal block by a scalar")));
            out.push(lifts.record(S, format!("{tag} -(θ(Nx) + θ(Nx)^q) = χ_Lift_{a}(x) = φ(s, u) with u signed")));
            out.push(lit.record(S, format!("{tag} η = -(θ(Nx) + θ(Nx)^q) = χ_Lift_{a}(x)")));
            out.push(on_u.record(S, format!("{tag} η = φ(s, u), sign inside u")));
            out.push(on_s.record(S, format!("{tag} η = φ(s, u), sign inside s (det s = 1)")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GroupKind;
    use crate::report::Status;

    #[test]
    fn expected_graded_scalars() {
        assert_eq!(graded_act_expected(3, &Coweight(vec![1, 0])), 1);
        assert_eq!(graded_act_expected(3, &Coweight(vec![2, 0])), 3);
        assert_eq!(graded_act_expected(3, &Coweight(vec![1, 1])), 1);
        assert_eq!(graded_act_expected(2, &Coweight(vec![2, 1, 0])), 2);
    }

    #[test]
    fn generators_generate() {
        let g = FiniteGroup::new(2, 3, Kind::GL).unwrap();
        let gens = group_generators(&g);
        assert!(gens.len() <= 3);
    }

    #[test]
    fn empty_and_ordered_runs() {
        let cfg = RunConfig::new(2, 2, GroupKind::GL);
        let r = run(&cfg, None, |_, _| {}).unwrap();
        assert!(r.checks.is_empty());
        assert_eq!(r.exit_code(), 0);
        let mut cfg = RunConfig::new(2, 2, GroupKind::GL);
        cfg.suites = vec!["gln-orbit".into(), "radon".into()];
        let r = run(&cfg, None, |_, _| {}).unwrap();
        assert_eq!(r.checks[0].suite, "radon");
        let last = r.checks.last().unwrap();
        assert_eq!((last.suite.as_str(), last.status), ("gln-orbit", Status::Skipped));
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn census_gl2_f2() {
        let mut cfg = RunConfig::new(2, 2, GroupKind::GL);
        cfg.window = Some(vec![1, 0]);
        let rows = census_rows(&Ctx { cfg: &cfg, cache: None }).unwrap();
        let got: Vec<(Vec<i64>, u64, u64, u64)> =
            rows.iter().map(|r| (r.lambda.0.clone(), r.a, r.v, *r.raw_v.as_ref().unwrap())).collect();
        assert_eq!(got, vec![(vec![0, 0], 6, 6, 6), (vec![1, 0], 9, 9, 9)]);
    }
}
