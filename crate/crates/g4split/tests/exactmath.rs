use g4split::exactmath::linalg::{det, det_cofactor, inverse, mat_mul, nullspace, identity};
use g4split::exactmath::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

#[test]
fn resultant_examples() {
    assert_eq!(resultant(&qpoly(&[-1, 0, 1]), &qpoly(&[-2, 1])).unwrap(), rat_int(3));
    assert_eq!(resultant(&qpoly(&[-1, 1]), &qpoly(&[-1, 1])).unwrap(), rat_int(0));
    let p = qpoly(&[7, 2, 0, 1]);
    let q = qpoly(&[2, 0, 3]);
    let syl = p.sylvester_matrix(&q);
    assert_eq!(syl.len(), 5);
    let oracle = linalg::det_cofactor(&Rationals, &syl);
    assert_eq!(oracle, rat_int(1355));
    assert_eq!(resultant(&p, &q).unwrap(), oracle);
}

#[test]
fn resultant_of_two_zeros_is_an_error() {
    let z = UniPoly::zero(Rationals);
    assert!(resultant(&z, &z).is_err());
    assert_eq!(resultant(&z, &qpoly(&[1, 1])).unwrap(), rat_int(0));
}

#[test]
fn discriminant_examples() {
    let uv = qform(2, &[0, 1, 0]);
    assert!(!discriminant(&uv).unwrap().is_zero());
    let u2 = qform(2, &[0, 0, 1]);
    assert!(discriminant(&u2).unwrap().is_zero());
    // 2(x-7)x(x+2)(x+1)(x-4) as a sextic with a root at infinity
    let f = qform(6, &[0, 112, 124, -6, -16, 2]);
    let roots = [7i64, 0, -2, -1, 4];
    let mut prod = BigRational::one();
    for i in 0..5 {
        for j in i + 1..5 {
            let d = rat_int(roots[i] - roots[j]);
            prod = prod * &d * &d;
        }
    }
    // a^(2n-2) Π (ri - rj)^2 for the quintic, times a^2 for the root at infinity
    let oracle = prod * rat_int(2i64.pow(8)) * rat_int(4);
    assert_eq!(discriminant(&f).unwrap(), oracle);
}

#[test]
fn squarefree_part_examples() {
    // u^2 v^4 with u = x, v = z
    let f = qform(6, &[0, 0, 1]);
    let s = squarefree_part(&f);
    assert_eq!(s, qform(2, &[0, 1, 0]));
    let g = qform(5, &[-3, 1, -6, 2, -3, 1]); // (x^2+1)^2 (x-3)
    assert_eq!(squarefree_part(&g), qform(3, &[-3, 1, -3, 1]));
    let h = qform(3, &[1, 2, 0, 3]);
    let sh = squarefree_part(&h);
    assert!(sh.is_proportional(&h));
}

#[test]
fn fp_root_examples() {
    let f7 = fp(7);
    assert_eq!(fp_roots(&UniPoly::from_ints(f7, &[-1, 0, 1])), vec![(1, 1), (6, 1)]);
    let f5 = fp(5);
    assert!(fp_roots(&UniPoly::from_ints(f5, &[-3, 0, 1])).is_empty());
    let f11 = fp(11);
    assert_eq!(
        fp_roots(&UniPoly::from_ints(f11, &[0, -1, 0, 1])),
        vec![(0, 1), (1, 1), (10, 1)]
    );
    let sq = UniPoly::from_ints(fp(10007), &[4, -4, 1]); // (x-2)^2
    assert_eq!(fp_roots(&sq), vec![(2, 2)]);
}

#[test]
fn prime_field_rejects_small_or_composite() {
    assert!(PrimeField::new(2).is_err());
    assert!(PrimeField::new(1).is_err());
    assert!(PrimeField::new(15).is_err());
    assert!(PrimeField::new(3).is_ok());
}

#[test]
fn quadratic_residues_match_table() {
    let f = fp(13);
    let residues: Vec<u64> = (1..13).map(|x| x * x % 13).collect();
    for a in 1..13u64 {
        assert_eq!(f.sqrt(&a).is_some(), residues.contains(&a));
        if let Some(r) = f.sqrt(&a) {
            assert_eq!(r * r % 13, a);
        }
    }
    let g = fp(10009); // 10009 ≡ 1 mod 8 exercises the general Tonelli-Shanks branch
    for a in [2u64, 3, 5, 7, 11, 9999] {
        if let Some(r) = g.sqrt(&a) {
            assert_eq!(r * r % 10009, a);
        }
    }
}

#[test]
fn rational_roots_large_coefficients() {
    // (3x - 1234567)(7x + 8910)(x^2 + 1)
    let a = qpoly(&[-1234567, 3]);
    let b = qpoly(&[8910, 7]);
    let c = qpoly(&[1, 0, 1]);
    let f = &(&a * &b) * &c;
    let roots = rational_roots(&f);
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0].0, rat(-8910, 7));
    assert_eq!(roots[1].0, rat(1234567, 3));
    let g = &f * &a;
    assert_eq!(rational_roots(&g)[1].1, 2);
}

#[test]
fn form_roots_include_infinity() {
    let f = qform(6, &[0, 112, 124, -6, -16, 2]);
    let r = form_rational_roots(&f);
    assert_eq!(r.len(), 6);
    assert_eq!(r[5].0[1], rat_int(0));
    assert!(roots::splits_over_q(&f));
}

#[test]
fn mobius_order_three() {
    // μ(x) = 1/(1-x): matrix [[0,1],[-1,1]]
    let q = Rationals;
    let m: Mobius<BigRational> = [[rat_int(0), rat_int(1)], [rat_int(-1), rat_int(1)]];
    let f = qform(6, &[3, -1, 4, 1, -5, 9, 2]);
    let f3 = f.mobius_apply(&m).unwrap().mobius_apply(&m).unwrap().mobius_apply(&m).unwrap();
    assert_eq!(f3, f);
    let m3 = mobius_compose(&q, &m, &mobius_compose(&q, &m, &m));
    assert!(q.is_zero(&m3[0][1]) && q.is_zero(&m3[1][0]));
}

#[test]
fn linear_algebra_basics() {
    let q = Rationals;
    let m = vec![qvec(&[2, 1, 0]), qvec(&[1, 3, 1]), qvec(&[0, 1, 4])];
    assert_eq!(det(&q, &m), det_cofactor(&q, &m));
    let inv = inverse(&q, &m).unwrap();
    assert_eq!(mat_mul(&q, &m, &inv), identity(&q, 3));
    let n = vec![qvec(&[1, 1, 1, 1])];
    let ns = nullspace(&q, &n, 4);
    assert_eq!(ns.len(), 3);
    assert_eq!(ns[0], qvec(&[-1, 1, 0, 0]));
}

#[test]
fn scalar_serialization() {
    let s = Scalar::rational(rat(-3, 6));
    assert_eq!(serde_json::to_string(&s).unwrap(), "\"-1/2\"");
    let t = Scalar::fp(10010, 10007).unwrap();
    assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"residue":3,"p":10007}"#);
    let back: Scalar = serde_json::from_str("\"5\"").unwrap();
    assert_eq!(back, Scalar::rational(rat_int(5)));
    let back: Scalar = serde_json::from_str(r#"{"residue":3,"p":10007}"#).unwrap();
    assert_eq!(back, t);
}

#[test]
fn number_field_inverse() {
    let k = NumberField::cyclotomic(5);
    let z = k.gen();
    let z5 = k.pow(&z, 5);
    assert!(k.is_one(&z5));
    let a = k.add(&z, &k.from_int(3));
    let ai = k.inv(&a).unwrap();
    assert!(k.is_one(&k.mul(&a, &ai)));
}

#[test]
fn rational_function_field_cancels() {
    let k = RatFuncField::new(&["u", "v"]);
    let u = k.var(0);
    let v = k.var(1);
    let s = k.add(&u, &v);
    let q = k.div(&k.mul(&s, &s), &s).unwrap();
    assert_eq!(q, s);
    assert!(k.as_poly(&q).is_some());
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 1..=max_deg + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn resultant_vanishes_iff_common_factor(a in small_poly(3), b in small_poly(3), c in small_poly(2)) {
        let (pa, pb, pc) = (qpoly(&a), qpoly(&b), qpoly(&c));
        prop_assume!(pc.deg() >= 1 && pa.deg() >= 0 && pb.deg() >= 0);
        let p = &pa * &pc;
        let q = &pb * &pc;
        prop_assert!(resultant(&p, &q).unwrap().is_zero());
        let r = resultant(&pa, &pb);
        if let Ok(r) = r {
            prop_assert_eq!(r.is_zero(), pa.gcd(&pb).deg() > 0);
        }
    }

    #[test]
    fn resultant_matches_sylvester(a in small_poly(4), b in small_poly(3)) {
        let (pa, pb) = (qpoly(&a), qpoly(&b));
        prop_assume!(pa.deg() >= 1 && pb.deg() >= 1);
        let syl = pa.sylvester_matrix(&pb);
        prop_assert_eq!(resultant(&pa, &pb).unwrap(), linalg::det(&Rationals, &syl));
    }

    #[test]
    fn discriminant_multiplicativity(a in small_poly(3), b in small_poly(3)) {
        let (pa, pb) = (qpoly(&a), qpoly(&b));
        prop_assume!(pa.deg() >= 1 && pb.deg() >= 1);
        let prod = &pa * &pb;
        let dp = prod.discriminant().unwrap();
        let da = pa.discriminant().unwrap();
        let db = pb.discriminant().unwrap();
        let r = resultant(&pa, &pb).unwrap();
        prop_assert_eq!(dp, da * db * &r * &r);
    }

    #[test]
    fn squarefree_part_square_does_not_divide(cs in prop::collection::vec(-4i64..=4, 2..=11)) {
        let f = qpoly(&cs);
        prop_assume!(f.deg() >= 1);
        let s = f.squarefree_part();
        prop_assert!(s.divides(&f));
        prop_assert!(s.is_squarefree());
        let s2 = &s * &s;
        if s.deg() >= 1 {
            prop_assert!(!s2.divides(&f) || f.gcd(&f.derivative()).deg() > 0);
        }
        // every root of f is a root of s: f divides s^deg f
        prop_assert!(f.divides(&s.pow(f.deg() as u32)));
    }

    #[test]
    fn fp_roots_agree_with_scan(cs in prop::collection::vec(0u64..101, 2..=9)) {
        let f = UniPoly::new(fp(101), cs);
        prop_assume!(f.deg() >= 1);
        prop_assert_eq!(f.fp_roots(), f.fp_roots_scan());
    }

    #[test]
    fn rational_roots_recover_planted(roots in prop::collection::vec((-50i64..50, 1i64..20), 1..5), extra in small_poly(2)) {
        let mut f = qpoly(&[1]);
        for (n, d) in &roots {
            f = &f * &qpoly(&[-*n, *d]);
        }
        let e = qpoly(&extra);
        prop_assume!(!e.is_zero());
        let g = &f * &e;
        let found = rational_roots(&g);
        for (n, d) in &roots {
            let r = rat(*n, *d);
            prop_assert!(found.iter().any(|(x, _)| x == &r));
        }
        for (x, m) in &found {
            prop_assert!(g.eval(x).is_zero());
            prop_assert_eq!(*m, g.root_multiplicity(x));
        }
    }

    #[test]
    fn mobius_respects_composition(cs in prop::collection::vec(-6i64..=6, 7), m1 in prop::array::uniform4(-4i64..=4), m2 in prop::array::uniform4(-4i64..=4)) {
        let q = Rationals;
        let a: Mobius<BigRational> = [[rat_int(m1[0]), rat_int(m1[1])], [rat_int(m1[2]), rat_int(m1[3])]];
        let b: Mobius<BigRational> = [[rat_int(m2[0]), rat_int(m2[1])], [rat_int(m2[2]), rat_int(m2[3])]];
        prop_assume!(m1[0] * m1[3] != m1[1] * m1[2] && m2[0] * m2[3] != m2[1] * m2[2]);
        let f = qform(6, &cs);
        let lhs = f.mobius_apply(&b).unwrap().mobius_apply(&a).unwrap();
        let rhs = f.mobius_apply(&mobius_compose(&q, &a, &b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn bigint_helpers() {
    assert_eq!(field::bigint_sqrt_exact(&BigInt::from(144)), Some(BigInt::from(12)));
    assert_eq!(field::bigint_sqrt_exact(&BigInt::from(145)), None);
    assert_eq!(field::squarefree_class(&rat(18, 1)), Some(BigInt::from(2)));
    assert_eq!(field::squarefree_class(&rat(-3, 12)), Some(BigInt::from(-1)));
}
