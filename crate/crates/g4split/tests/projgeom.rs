use g4split::exactmath::{linalg, qvec, rat_int, Field, MultiPoly, PrimeField, Rationals, UniPoly};
use g4split::projgeom::*;
use g4split::Error;
use num_rational::BigRational;
use proptest::prelude::*;

fn q() -> Rationals {
    Rationals
}

fn conic_from(ints: [[i64; 3]; 3]) -> Conic<Rationals> {
    Conic::new(q(), ints.map(|r| r.map(rat_int))).unwrap()
}

#[test]
fn subspace_from_equations() {
    let eqs = vec![qvec(&[1, 1, 1, 1, 1, 1]), qvec(&[1, 2, 3, 4, 5, 6])];
    let s = LinearSubspace::from_equations(q(), 6, eqs.clone()).unwrap();
    assert_eq!(s.dim(), 4);
    assert_eq!(s.dim() + s.equations().len(), 6);
    for b in s.basis() {
        for e in &eqs {
            assert_eq!(linalg::dot(&q(), e, b), rat_int(0));
        }
        assert!(s.contains(b));
    }
    assert!(!s.contains(&qvec(&[1, 0, 0, 0, 0, 0])));
    let j = s.to_json();
    assert_eq!(j["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn subspace_rejects_dependent_basis() {
    let r = LinearSubspace::from_basis(q(), 3, vec![qvec(&[1, 2, 3]), qvec(&[2, 4, 6])]);
    assert!(matches!(r, Err(Error::InvalidSubspace(_))));
    let r = LinearSubspace::from_equations(q(), 2, vec![qvec(&[1, 0]), qvec(&[0, 1])]);
    assert!(matches!(r, Err(Error::InvalidSubspace(_))));
}

#[test]
fn zero_point_rejected() {
    assert!(ProjPoint::from_ints(q(), &[0, 0, 0]).is_err());
    let a = ProjPoint::from_ints(q(), &[2, -4, 6]).unwrap();
    let b = ProjPoint::from_ints(q(), &[-1, 2, -3]).unwrap();
    assert!(a.proj_eq(&b));
    assert_eq!(a.primitive(), vec![1.into(), (-2).into(), 3.into()]);
}

#[test]
fn conic_parametrization_round_trip() {
    let c = conic_from([[1, 0, 0], [0, 1, 0], [0, 0, -1]]);
    let p0 = ProjPoint::from_ints(q(), &[1, 0, 1]).unwrap();
    let par = conic_parametrize(&c, &p0).unwrap();
    for (s, t) in [(1, 0), (0, 1), (1, 1), (3, -7), (2, 5)] {
        let v = par.eval(&rat_int(s), &rat_int(t));
        assert_eq!(c.eval(&v), rat_int(0));
        let pt = ProjPoint::new(q(), v).unwrap();
        let st = par.inverse(&pt).unwrap();
        let back = ProjPoint::new(q(), par.eval(&st[0], &st[1])).unwrap();
        assert!(back.proj_eq(&pt));
    }
    let st = par.inverse(&p0).unwrap();
    let back = ProjPoint::new(q(), par.eval(&st[0], &st[1])).unwrap();
    assert!(back.proj_eq(&p0));
    // pullback of the conic vanishes identically
    assert!(par.pullback(&c.to_form()).unwrap().is_zero());
}

#[test]
fn tangent_line_meets_once() {
    let c = conic_from([[2, 1, 0], [1, -3, 1], [0, 1, 1]]);
    let p = conic_rational_point(&c, 50).unwrap();
    let l = conic_tangent_line(&c, &p).unwrap();
    assert_eq!(linalg::dot(&q(), &l, p.coords()), rat_int(0));
    let par = conic_parametrize(&c, &p).unwrap();
    let lf = MultiPoly::linear_form(q(), &l);
    let restricted = par.pullback(&lf).unwrap();
    // the tangent meets the conic only at p, doubly
    assert!(!restricted.is_squarefree());
}

#[test]
fn conic_point_search() {
    let c = conic_from([[2, 0, 0], [0, 3, 0], [0, 0, -5]]);
    let p = conic_rational_point(&c, 100).unwrap();
    assert!(c.contains(&p));
    let c = conic_from([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    assert!(matches!(conic_rational_point(&c, DEFAULT_HEIGHT_BOUND), Err(Error::NoRationalPointFound(_))));
    // x² + y² = 3 z² has no rational points
    let c = conic_from([[1, 0, 0], [0, 1, 0], [0, 0, -3]]);
    assert!(matches!(conic_rational_point(&c, 60), Err(Error::NoRationalPointFound(60))));
    let c = conic_from([[0, 1, 0], [1, 5, 0], [0, 0, 7]]);
    assert!(c.contains(&conic_rational_point(&c, 1).unwrap()));
}

#[test]
fn conic_point_fp_scan() {
    let f = PrimeField::new(10007).unwrap();
    let c = Conic::new(f, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
    let p = conic_point_fp(&c).unwrap();
    assert!(c.contains(&p));
}

#[test]
fn project_cone_and_eliminate() {
    let f = q();
    let x = |i| MultiPoly::var(f, 4, i);
    let cone = &(&x(0) * &x(0)) + &(&x(1) * &x(2));
    let v = ProjPoint::from_ints(f, &[0, 0, 0, 1]).unwrap();
    let out = project_from_point(std::slice::from_ref(&cone), &v, false).unwrap();
    assert_eq!(out[0].nvars(), 3);
    let not_cone = &cone + &(&x(3) * &x(0));
    assert!(matches!(project_from_point(std::slice::from_ref(&not_cone), &v, false), Err(Error::NotACone(_))));
    // eliminate: x3·x0 + x1² and x3 - x2 give x2·x0 + x1² up to sign
    let lin = &x(3) - &x(2);
    let g = &(&x(3) * &x(0)) + &(&x(1) * &x(1));
    let out = project_from_point(&[g, lin], &v, true).unwrap();
    let x3 = |i| MultiPoly::var(f, 3, i);
    let expect = &(&x3(2) * &x3(0)) + &(&x3(1) * &x3(1));
    assert!(out[0] == expect || out[0] == -&expect);
}

#[test]
fn poly_resultant_matches_univariate() {
    let f = q();
    // p(x, y) = x² + y x + 3, q = x - y²; substitute y = 2 after eliminating x
    let x = MultiPoly::var(f, 2, 0);
    let y = MultiPoly::var(f, 2, 1);
    let p = &(&(&x * &x) + &(&y * &x)) + &MultiPoly::constant(f, 2, rat_int(3));
    let qq = &x - &(&y * &y);
    let r = poly_resultant(&p, &qq, 0).unwrap();
    for yv in -3..4 {
        let pu = UniPoly::new(f, vec![rat_int(3), rat_int(yv), rat_int(1)]);
        let qu = UniPoly::new(f, vec![rat_int(-yv * yv), rat_int(1)]);
        let expect = pu.resultant(&qu).unwrap();
        assert_eq!(r.eval(&[rat_int(0), rat_int(yv)]), expect);
    }
}

proptest! {
    #[test]
    fn restrict_form_commutes_with_eval(
        coeffs in prop::collection::vec(-5i64..6, 10),
        b in prop::collection::vec(-4i64..5, 8),
        y in prop::collection::vec(-4i64..5, 2),
    ) {
        let f = q();
        let basis = vec![qvec(&b[0..4]), qvec(&b[4..8])];
        prop_assume!(linalg::rank(&f, &basis) == 2);
        let s = LinearSubspace::from_basis(f, 4, basis).unwrap();
        let mut form = MultiPoly::zero(f, 4);
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                let mut e = vec![0; 4];
                e[i] += 1;
                e[j] += 1;
                form.add_term(e, rat_int(coeffs[k]));
                k += 1;
            }
        }
        let r = restrict_form(&form, &s).unwrap();
        let yv: Vec<BigRational> = qvec(&y);
        prop_assert_eq!(r.eval(&yv), form.eval(&s.point(&yv)));
    }

    #[test]
    fn poly_det_matches_cofactor(m in prop::collection::vec(-6i64..7, 16)) {
        let f = q();
        let rows: Vec<Vec<BigRational>> = m.chunks(4).map(qvec).collect();
        let prow: Vec<Vec<MultiPoly<Rationals>>> = rows
            .iter()
            .map(|r| r.iter().map(|c| MultiPoly::constant(f, 1, c.clone())).collect())
            .collect();
        let d = poly_det(&prow).unwrap();
        prop_assert_eq!(d.eval(&[f.zero()]), linalg::det_cofactor(&f, &rows));
    }
}
