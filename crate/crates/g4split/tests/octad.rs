use g4split::exactmath::{linalg, qvec, BinaryForm, Field, MultiPoly, PrimeField, Rationals};
use g4split::genus2::HypCurve;
use g4split::octad::*;
use g4split::projgeom::{LinearSubspace, ProjPoint, DEFAULT_HEIGHT_BOUND};
use g4split::Error;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: Rationals = Rationals;

fn same(a: &[BigRational], b: &[BigRational]) -> bool {
    ProjPoint::new(Q, a.to_vec()).unwrap().proj_eq(&ProjPoint::new(Q, b.to_vec()).unwrap())
}

fn worked() -> CayleyOctad<Rationals> {
    octad_quartic(&Q, &qvec(&[1, 2, 3, 5]), &qvec(&[2, 7, 1, 3])).unwrap()
}

#[test]
fn segre_cubic_vanishes_on_psi() {
    let c = segre_cubic(&Q).substitute(&psi_quadrics(&Q)).unwrap();
    assert!(c.is_zero());
}

#[test]
fn gram_matrix_and_determinant() {
    let a = gram_matrix(&Q, &qvec(&[1, 0, 0, 0, 0])).unwrap();
    assert_eq!(a[2][3], qvec(&[-1])[0]);
    let det = symmetroid_form(&Q);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x: Vec<i64> = (0..5).map(|_| rng.gen_range(-9..=9)).collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let m = gram_matrix(&Q, &qvec(&x)).unwrap();
        assert!((0..4).all(|i| m[i][i] == qvec(&[0])[0]));
        assert_eq!(linalg::det(&Q, &m), linalg::det_cofactor(&Q, &m));
        assert_eq!(det.eval(&qvec(&x)), linalg::det_cofactor(&Q, &m));
    }
    assert!(gram_matrix(&Q, &qvec(&[0, 0, 0, 0, 0])).is_err());
}

#[test]
fn psi_values() {
    // y2y3 = 12: (2, 3, 4, 6, 8) - 12
    assert_eq!(psi(&Q, &qvec(&[1, 2, 3, 4])).unwrap(), qvec(&[-10, -9, -8, -6, -4]));
    assert!(Q.is_zero(&segre_cubic(&Q).eval(&qvec(&[-10, -9, -8, -6, -4]))));
    for p in g4split::igusa::base_points(&Q) {
        assert_eq!(psi(&Q, &p), Err(Error::IndeterminacyPoint));
    }
}

#[test]
fn standard_system_basis_is_the_printed_quadrics() {
    let net = QuadricNet::standard(&Q);
    assert_eq!(net.quadrics(), psi_quadrics(&Q));
    let y: Vec<MultiPoly<Rationals>> = (0..4).map(|i| MultiPoly::var(Q, 4, i)).collect();
    for (g, q) in net.gram_matrices().iter().zip(net.quadrics()) {
        // yᵀ 𝒜 y = 2 q(y)
        let mut form = MultiPoly::zero(Q, 4);
        for i in 0..4 {
            for j in 0..4 {
                form = &form + &(&y[i] * &y[j]).scale(&g[i][j]);
            }
        }
        assert_eq!(form, q.scale(&qvec(&[2])[0]));
    }
    for p in &net.base {
        assert!(net.vanishes_at(p));
    }
}

#[test]
fn worked_octad() {
    let o = worked();
    // cubic-deflation oracle (computed independently with a CAS)
    assert!(same(o.p8(), &qvec(&[561085, 742305, 1272107, 1526855])));
    assert!(o.checks.net_vanishes && o.checks.containment && o.checks.tangency && o.checks.general_position);
    let c = o.tangency.c.clone().unwrap();
    assert!(same(&c, &qvec(&[4095564, -28877475, 22068291, 20021155, -18185755])));
    assert_eq!(o.d.total_degree(), Some(4));
    assert!(o.d.is_homogeneous());
    assert!(smooth_flag(&o.d, &SMOOTHNESS_PRIMES));
    for q in o.net.quadrics() {
        for p in &o.points {
            assert!(Q.is_zero(&q.eval(p)));
        }
    }
    let j = o.to_json();
    assert_eq!(j["checks"]["tangency"], true);
    assert_eq!(j["D"].as_array().unwrap().len(), 15);
}

#[test]
fn printed_pair_is_special() {
    // p8 lands on the plane y3 = 0 through p1, p2, p3
    let o = octad_quartic(&Q, &qvec(&[1, 2, 3, 5]), &qvec(&[1, 3, 5, 7])).unwrap();
    assert!(same(o.p8(), &qvec(&[99, 143, 117, 0])));
    assert!(o.checks.net_vanishes && o.checks.containment);
    assert!(!o.checks.general_position);
    assert!(!o.checks.tangency);
    assert!(matches!(rnc_genus2(&o), Err(Error::NotGeneralPosition(_))));
}

#[test]
fn octad_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 20 {
        let a: Vec<i64> = (0..4).map(|_| rng.gen_range(-12..=12)).collect();
        let b: Vec<i64> = (0..4).map(|_| rng.gen_range(-12..=12)).collect();
        let (p, q) = (qvec(&a), qvec(&b));
        match (third_point(&Q, &p, &q), third_point(&Q, &q, &p)) {
            (Ok(x), Ok(y)) => {
                assert!(same(&x, &y));
                done += 1;
            }
            (Err(e1), Err(e2)) => assert_eq!(std::mem::discriminant(&e1), std::mem::discriminant(&e2)),
            _ => panic!("asymmetric outcome for {a:?} {b:?}"),
        }
    }
}

#[test]
fn degenerate_inputs() {
    let p = qvec(&[1, 2, 3, 5]);
    assert!(matches!(octad_quartic(&Q, &p, &p), Err(Error::NotGeneralPosition(_))));
    assert!(matches!(octad_quartic(&Q, &p, &qvec(&[2, 4, 6, 10])), Err(Error::NotGeneralPosition(_))));
    assert_eq!(octad_quartic(&Q, &p, &qvec(&[1, 1, 1, 1])).unwrap_err(), Error::IndeterminacyPoint);
    assert!(matches!(third_point(&Q, &p, &qvec(&[1, 2])), Err(Error::InvalidInput(_))));
}

#[test]
fn dual_triple_on_octad_plane() {
    let o = worked();
    let r = three_pryms_of_plane_section(&Q, &o.net.system).unwrap();
    assert!(r.residual.is_none());
    assert_eq!(r.points.len(), 3);
    for s in &o.dual {
        assert!(r.points.iter().any(|t| same(&t.s, s)));
    }
    assert!(r.points.iter().all(|t| t.passed()));
}

#[test]
fn random_plane_sections() {
    let fp = PrimeField::new(10007).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut seen = 0;
    while seen < 30 {
        let basis: Vec<Vec<u64>> = (0..3).map(|_| (0..5).map(|_| rng.gen_range(0..10007)).collect()).collect();
        let Ok(w) = LinearSubspace::from_basis(fp, 5, basis) else { continue };
        match three_pryms_of_plane_section(&fp, &w) {
            Ok(r) => {
                let deg = r.points.len() + r.residual.as_ref().map_or(0, |f| f.degree());
                assert_eq!(deg, 3);
                for t in &r.points {
                    assert!(t.passed());
                }
                seen += 1;
            }
            Err(e) => assert_eq!(e, Error::NonReducedDual),
        }
    }
}

#[test]
fn rnc_genus2_and_cross_check() {
    let o = worked();
    let r = rnc_genus2(&o).unwrap();
    assert_eq!(r.params.len(), 6);
    // six parameters from an independent parametrization (projection from p1
    // composed with a Möbius map), computed with a CAS
    let oracle = [(12325, 1748), (-1, 0), (0, 1), (255, 437), (425, 138), (255 * 425, 437 * 138)];
    let f = oracle.iter().fold(BinaryForm::one(Q), |acc, &(a, b)| {
        acc.mul(&BinaryForm::vanishing_at(Q, &qvec(&[a])[0], &qvec(&[b])[0]))
    });
    let oracle_inv = HypCurve::new(f).unwrap().igusa_clebsch().unwrap();
    assert!(r.invariants().unwrap().weighted_eq(&oracle_inv));
    let x = cross_check(&o, &r, DEFAULT_HEIGHT_BOUND).unwrap();
    assert!(x.agree);
    let (j, ok) = complete_json(&o, DEFAULT_HEIGHT_BOUND);
    assert!(ok);
    assert_eq!(j["p8"][0], "561085");
    assert_eq!(j["genus2"]["pipelines_agree"], true);
}

#[test]
fn batch_keeps_input_order() {
    let pairs: Vec<(Vec<BigRational>, Vec<BigRational>)> = vec![
        (qvec(&[1, 2, 3, 5]), qvec(&[2, 7, 1, 3])),
        (qvec(&[1, 2, 3, 5]), qvec(&[1, 2, 3, 5])),
        (qvec(&[1, 2, 3, 5]), qvec(&[1, 3, 5, 7])),
    ];
    let out = octad_batch(&Q, &pairs);
    assert!(same(out[0].as_ref().unwrap().p8(), &qvec(&[561085, 742305, 1272107, 1526855])));
    assert!(out[1].is_err());
    assert!(same(out[2].as_ref().unwrap().p8(), &qvec(&[99, 143, 117, 0])));
}

#[test]
fn singular_point_scan() {
    let v = |i| MultiPoly::var(Q, 3, i);
    let conic = &(&v(0) * &v(1)) - &(&v(2) * &v(2));
    assert!(!smooth_flag(&conic.pow(2), &SMOOTHNESS_PRIMES));
    let fermat = &(&v(0).pow(4) + &v(1).pow(4)) + &v(2).pow(4);
    assert!(smooth_flag(&fermat, &SMOOTHNESS_PRIMES));
    assert_eq!(singular_points_mod_p(&fermat, 2), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The cone with vertex y lies on the symmetroid, and its tangent
    /// hyperplane is ψ(y).
    #[test]
    fn vertex_cone_is_gauss_preimage(y in prop::collection::vec(0u64..10007, 4)) {
        let fp = PrimeField::new(10007).unwrap();
        prop_assume!(psi(&fp, &y).is_ok());
        let x = match vertex_quadric(&fp, &y) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        let det = symmetroid_form(&fp);
        prop_assert_eq!(det.eval(&x), 0);
        prop_assert_eq!(quadric_value(&fp, &x, &y), 0);
        let g: Vec<u64> = det.gradient().iter().map(|d| d.eval(&x)).collect();
        let s = psi(&fp, &y).unwrap();
        prop_assert_eq!(linalg::rank(&fp, &vec![g, s]), 1);
    }

    #[test]
    fn psi_inverse_round_trip(y in prop::collection::vec(1u64..10007, 4)) {
        let fp = PrimeField::new(10007).unwrap();
        prop_assume!(psi(&fp, &y).is_ok());
        let s = psi(&fp, &y).unwrap();
        let back = psi_inverse(&fp, &s).unwrap();
        let (a, b) = (ProjPoint::new(fp, back).unwrap(), ProjPoint::new(fp, y).unwrap());
        prop_assert!(a.proj_eq(&b));
    }
}
