use k1hecke_core::arith::cyclo::Scalar;
use k1hecke_core::arith::gf::Gf;
use k1hecke_core::arith::tower::FieldTower;
use k1hecke_core::bundles::{birkhoff, BundleModel};
use k1hecke_core::divhecke::{DivisorHeckeOp, HeckeFn, Normalization};
use k1hecke_core::groups::{Coweight, FiniteGroup, Kind, Window};
use k1hecke_core::loophecke::{jantzen_flag, random_g_o};
use k1hecke_core::poly::{cartan, LMat, LPoly};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn field(q: u32) -> Gf {
    FieldTower::new(q, &[1]).unwrap().base().clone()
}

fn scalar(m: u32, coeffs: &[i64]) -> Scalar {
    coeffs
        .iter()
        .enumerate()
        .fold(Scalar::zero(), |acc, (k, &c)| acc.add(&Scalar::zeta(m, k as i64).scale_int(c)))
}

/// A product of elementary matrices with Laurent entries and a diagonal
/// twist: an arbitrary element of `GL_n(k[z, 1/z])`.
fn laurent_unit(f: &Gf, n: usize, seed: u64) -> LMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |m: u32| rand_core::RngCore::next_u32(&mut rng) % m;
    let q = f.size();
    let mut g = LMat::identity(n);
    for _ in 0..6 {
        let (i, j) = (draw(n as u32) as usize, draw(n as u32) as usize);
        let mut e = LMat::identity(n);
        if i == j {
            let c = 1 + draw(q - 1);
            e.e[i * n + i] = LPoly::monomial(c, draw(3) as i64 - 1);
        } else {
            e.e[i * n + j] = LPoly::monomial(draw(q), draw(5) as i64 - 2);
        }
        g = g.mul(f, &e);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_field_axioms(qi in 0..QS.len(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = field(QS[qi]);
        let q = f.size();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, q as u64 - 1), 1);
        }
        // Frobenius is additive
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn cyclotomic_ring(x in prop::collection::vec(-3i64..=3, 12),
                       y in prop::collection::vec(-3i64..=3, 12),
                       z in prop::collection::vec(-3i64..=3, 12),
                       k in prop::sample::select(vec![1i64, 5, 7, 11])) {
        let (x, y, z) = (scalar(12, &x), scalar(12, &y), scalar(12, &z));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.sub(&x), Scalar::zero());
        prop_assert_eq!(x.mul(&y).galois(k).unwrap(), x.galois(k).unwrap().mul(&y.galois(k).unwrap()));
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.inv().unwrap()), Scalar::one());
        }
    }

    #[test]
    fn birkhoff_reassembles(qi in 0..3usize, n in 1usize..=3, seed in any::<u64>()) {
        let f = field(QS[qi]);
        let g = laurent_unit(&f, n, seed);
        let b = birkhoff(&f, &g).unwrap();
        prop_assert_eq!(b.reassemble(&f), g.clone());
        prop_assert!(b.lambda.windows(2).all(|w| w[0] >= w[1]));
        // a is invertible over k[z], b over k[1/z]
        prop_assert!(b.a.min_valuation().unwrap_or(0) >= 0);
        prop_assert!(b.b.max_degree().unwrap_or(0) <= 0);
        let (da, db) = (b.a.det(&f), b.b.det(&f));
        prop_assert_eq!((da.valuation(), da.degree()), (Some(0), Some(0)));
        prop_assert_eq!((db.valuation(), db.degree()), (Some(0), Some(0)));
        prop_assert_eq!(g.det(&f).valuation(), Some(b.lambda.iter().sum::<i64>()));
    }

    #[test]
    fn jantzen_type_is_cartan_type(qi in 0..2usize, n in 1usize..=3,
                                   lam in prop::collection::vec(-2i64..=3, 3), seed in any::<u64>()) {
        let f = field(QS[qi]);
        let mut lam: Vec<i64> = lam[..n].to_vec();
        lam.sort_unstable_by(|a, b| b.cmp(a));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = random_g_o(&f, n, 2, &mut rng);
        let k2 = random_g_o(&f, n, 2, &mut rng);
        let kappa = k1.mul(&f, &LMat::diag_power(&lam)).mul(&f, &k2);
        prop_assert_eq!(cartan(&f, &kappa).unwrap().lambda, lam.clone());
        let flag = jantzen_flag(&f, &kappa).unwrap();
        prop_assert_eq!(flag.flag_type(), lam.clone());
        // E' has the negated type
        let dims = flag.prime_graded_dims();
        for (&i, &d) in &dims {
            prop_assert_eq!(d, lam.iter().filter(|&&l| l == -i).count());
        }
        prop_assert_eq!(dims.values().sum::<usize>(), n);
    }

    #[test]
    fn dominance_is_a_partial_order(a in prop::collection::vec(-2i64..=2, 3),
                                    b in prop::collection::vec(-2i64..=2, 3)) {
        let sorted = |mut v: Vec<i64>| { v.sort_unstable_by(|x, y| y.cmp(x)); Coweight(v) };
        let (a, b) = (sorted(a), sorted(b));
        prop_assert!(a.dominates(&a, Kind::GL));
        if a.dominates(&b, Kind::GL) && b.dominates(&a, Kind::GL) {
            prop_assert_eq!(&a, &b);
        }
        for c in a.below() {
            prop_assert!(a.dominates(&c, Kind::GL));
            prop_assert_eq!(c.degree(), a.degree());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modification_count(q in 2u32..=3, i in 1usize..=2, which in any::<prop::sample::Index>(),
                          point in any::<prop::sample::Index>()) {
        let g = FiniteGroup::new(2, q, Kind::GL).unwrap();
        let model = BundleModel::new(g, 1).unwrap();
        let tower = FieldTower::new(q, &[i]).unwrap();
        let divs = tower.divisors_of_degree(i).unwrap();
        let d = divs[which.index(divs.len())];
        let op = DivisorHeckeOp::new(&model, &tower, d, HeckeFn::StdTrace, Normalization::Literal).unwrap();
        let w = Window::generated(&[Coweight(vec![1, 0])], Kind::GL).unwrap();
        let pts = model.basis(&w).unwrap();
        let p = &pts[point.index(pts.len())];
        let mods = op.modifications(p).unwrap();
        let qi = (q as usize).pow(i as u32);
        prop_assert_eq!(mods.len(), (qi * qi - 1) / (qi - 1));
        for e in mods.iter() {
            prop_assert_eq!(e.lambda.degree(), p.lambda.degree() + i as i64);
        }
    }
}
