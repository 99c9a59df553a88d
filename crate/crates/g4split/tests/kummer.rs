use g4split::exactmath::{qform, qvec, rat_int, BinaryForm, Field, MultiPoly, PrimeField, Rationals, UniPoly};
use g4split::genus2::same_curve_up_to_twist;
use g4split::igusa::QuarticThreefold;
use g4split::kummer::*;
use g4split::projgeom::{self, ProjPoint, DEFAULT_HEIGHT_BOUND};
use g4split::Error;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};

fn a_pt() -> Vec<BigRational> {
    qvec(&[-55, -29, 49, 36, 20, -21])
}

fn b_pt() -> Vec<BigRational> {
    qvec(&[-29, 49, -55, 36, 20, -21])
}

fn worked_curve() -> BinaryForm<Rationals> {
    qform(5, &[0, 112, 124, -6, -16, 2])
}

#[test]
fn worked_extraction_matches_worked_curve() {
    let i = QuarticThreefold::classical(Rationals);
    for p in [a_pt(), b_pt()] {
        let ex = extract(&i, &p, DEFAULT_HEIGHT_BOUND).unwrap();
        assert_eq!(ex.branch.degree(), 6);
        assert!(ex.branch.is_squarefree());
        assert!(ex.polar.conic.is_nonsingular());
        assert!(same_curve_up_to_twist(&ex.branch, &worked_curve()).unwrap());
        let j = ex.to_json();
        assert_eq!(j["branch_sextic"].as_array().unwrap().len(), 7);
        assert_eq!(j["cubic"].as_array().unwrap().len(), 10);
        assert!(j["twist"].is_null());
    }
}

#[test]
fn node_polar_data_is_cached_and_consistent() {
    let i = QuarticThreefold::classical(Rationals);
    let ks = i.kummer_section(&b_pt()).unwrap();
    let d1 = node_polar_data(&i, &ks).unwrap().clone();
    let d2 = node_polar_data(&i, &ks).unwrap();
    assert_eq!(d1.c3, d2.c3);
    // the tangent cone is the cone of the second polar: projecting it from the node gives Q_b
    let p2 = projgeom::restrict_form(&i.iterated_polar(&b_pt(), 2).unwrap(), &ks.space).unwrap();
    let node = ProjPoint::from_ints(Rationals, &[0, 0, 0, 1]).unwrap();
    let q = projgeom::project_from_point(&[p2], &node, false).unwrap();
    let (e, c) = d1.c2.leading_term().unwrap();
    assert_eq!(q[0].scale(c), d1.c2.scale(&q[0].coeff(e)));
    assert!(matches!(
        projgeom::project_from_point(std::slice::from_ref(&ks.quartic), &node, false),
        Err(Error::NotACone(_))
    ));
}

#[test]
fn six_lines_restrict_to_branch_squared() {
    let i = QuarticThreefold::classical(Rationals);
    let ks = i.kummer_section(&a_pt()).unwrap();
    let ex = extract(&i, &a_pt(), DEFAULT_HEIGHT_BOUND).unwrap();
    let node = ProjPoint::from_ints(Rationals, &[0, 0, 0, 1]).unwrap();
    let dw = ks.quartic.partial(3);
    let elim = projgeom::project_from_point(&[ks.quartic.clone(), dw], &node, true).unwrap();
    let d = &ex.polar;
    let six = &d.c3.pow(2) - &(&d.c2 * &d.c4).scale(&rat_int(4));
    let direct = &d.c2 * &six;
    let (e, c) = direct.leading_term().unwrap();
    assert_eq!(elim[0].scale(c), direct.scale(&elim[0].coeff(e)));
    // on Q_b the six tangent lines cut out B twice
    let on_conic = ex.param.pullback(&six).unwrap();
    assert!(on_conic.is_proportional(&ex.branch.pow(2)));
}

#[test]
fn worked_tropes_are_double_conics() {
    let i = QuarticThreefold::classical(Rationals);
    let ks = i.kummer_section(&a_pt()).unwrap();
    let ex = extract(&i, &a_pt(), DEFAULT_HEIGHT_BOUND).unwrap();
    let t = tropes_through_node(&ks, &ex).unwrap();
    assert!(!t.symbolic);
    assert_eq!(t.planes.len(), 6);
    for (plane, q) in t.planes.iter().zip(&t.conics) {
        // every trope passes through the node (0:0:0:1) and six of the sixteen nodes
        assert_eq!(plane[3], rat_int(0));
        let on = ks
            .nodes
            .iter()
            .filter(|n| g4split::exactmath::linalg::dot(&Rationals, plane, n.coords()) == rat_int(0))
            .count();
        assert_eq!(on, 6);
        assert_eq!(q.total_degree(), Some(2));
    }
}

#[test]
fn nodal_quartic_c3_zero() {
    let q = Rationals;
    let v = |i| MultiPoly::var(q, 3, i);
    let form = &(&v(2).pow(2) * &(&v(0) * &v(1))) + &(&v(0).pow(4) + &v(1).pow(4));
    let d = NodalPlaneQuartic::from_ternary(&form).unwrap();
    let (b, c2) = nodal_quartic_branch(&d).unwrap();
    let expect = qform(2, &[0, 1, 0]).mul(&qform(4, &[1, 0, 0, 0, 1])).scale(&rat_int(-4));
    assert_eq!(b, expect);
    assert_eq!(c2, qform(2, &[0, 1, 0]));
    let bad = &v(0).pow(4) + &v(1).pow(4);
    let d = NodalPlaneQuartic::from_ternary(&bad).unwrap();
    assert!(matches!(nodal_quartic_branch(&d), Err(Error::WorseSingularity)));
}

#[test]
fn square_root_helper() {
    let q = Rationals;
    let v = |i| MultiPoly::var(q, 3, i);
    let s = &(&v(0) * &v(1)) - &(&v(2).pow(2) + &v(0).scale(&rat_int(3)).pow(1));
    let _ = s;
    let base = &(&v(0) * &v(1)) + &(&v(2).pow(2) - &(&v(0) * &v(2)).scale(&rat_int(3)));
    let r = base.pow(2).scale(&rat_int(-5));
    let (c, root) = square_root_up_to_scalar(&r).unwrap();
    assert_eq!(root.pow(2).scale(&c), r);
    assert!(square_root_up_to_scalar(&(&base.pow(2) + &v(1).pow(4))).is_none());
}

#[test]
fn dual_kummer_of_x5_plus_1() {
    let f = qform(5, &[1, 0, 0, 0, 0, 1]);
    let dk = kummer_dual_from_curve(&f).unwrap();
    assert!(dk.g.is_homogeneous());
    assert_eq!(dk.g.total_degree(), Some(4));
    // the distinguished trope η4 = 0 is a double conic
    let q = Rationals;
    let subs = [MultiPoly::var(q, 3, 0), MultiPoly::var(q, 3, 1), MultiPoly::var(q, 3, 2), MultiPoly::zero(q, 3)];
    let trope = dk.g.substitute(&subs).unwrap();
    assert!(square_root_up_to_scalar(&trope).is_some());
    // determinant against the cofactor oracle at a sample point
    let eta = qvec(&[2, -1, 3, 5]);
    let m = dk.member(&eta);
    assert_eq!(dk.g.eval(&eta), g4split::exactmath::linalg::det_cofactor(&q, &m));
    assert_eq!(g4split::exactmath::linalg::rank(&q, &m), 4);
    assert!(matches!(kummer_dual_from_curve(&qform(5, &[0, 0, 1, 0, 0, 1])), Err(Error::NotSquareFree)));
}

#[test]
fn no_low_rank_members_over_small_field() {
    let fp = PrimeField::new(13).unwrap();
    let f = BinaryForm::new(fp, 6, vec![1, 0, 0, 0, 0, 1, 0]).unwrap();
    let dk = kummer_dual_from_curve(&f).unwrap();
    let p = 13u64;
    for lead in 0..4 {
        let total = p.pow(3 - lead as u32);
        for mut k in 0..total {
            let mut eta = vec![0u64; 4];
            eta[lead] = 1;
            for j in lead + 1..4 {
                eta[j] = k % p;
                k /= p;
            }
            assert!(g4split::exactmath::linalg::rank(&fp, &dk.member(&eta)) >= 3);
        }
    }
}

fn random_quintic(rng: &mut impl Rng) -> BinaryForm<Rationals> {
    loop {
        let mut c: Vec<i64> = (0..5).map(|_| rng.gen_range(-5..=5)).collect();
        c.push(1);
        let f = qform(5, &c);
        if f.with_degree(6).unwrap().is_squarefree() {
            return f;
        }
    }
}

#[test]
fn normalized_kummer_round_trip() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let f = random_quintic(&mut rng);
        let gk = kummer_from_curve_normalized(&f).unwrap();
        let grad = gk.gradient();
        let node = qvec(&[0, 0, 0, 1]);
        assert!(grad.iter().all(|g| g.eval(&node) == rat_int(0)));
        let data = node_polar_from_quartic(&gk).unwrap();
        let ex = extract_from_polar(&data, DEFAULT_HEIGHT_BOUND).unwrap();
        assert!(same_curve_up_to_twist(&ex.branch, &f).unwrap());
    }
}

#[test]
fn normalization_precondition() {
    assert!(matches!(
        kummer_from_curve_normalized(&qform(6, &[1, 0, 0, 0, 0, 1, 1])),
        Err(Error::NotNormalized)
    ));
    assert!(matches!(
        kummer_from_curve_normalized(&qform(5, &[1, 0, 0, 0, 0, 2])),
        Err(Error::NotNormalized)
    ));
}

#[test]
fn substitution_twice_is_sign_change() {
    let f = qform(5, &[3, -1, 0, 2, 1, 1]);
    let g = kummer_dual_from_curve(&f).unwrap().g;
    let twice = normalized_substitution(&normalized_substitution(&g));
    // applying (η4, −η3, η2, −η1) twice negates every coordinate; G has even degree
    assert_eq!(twice, g);
}

/// A random F_p point on {G = 0}: restrict to a random line and take a root.
fn sample_surface_point(g: &MultiPoly<PrimeField>, rng: &mut impl Rng) -> Option<Vec<u64>> {
    let fp = g.field;
    let p = fp.modulus();
    let u: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
    let v: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
    let subs: Vec<MultiPoly<PrimeField>> = (0..4)
        .map(|i| {
            &MultiPoly::constant(fp, 1, u[i]) + &MultiPoly::var(fp, 1, 0).scale(&v[i])
        })
        .collect();
    let uni: UniPoly<PrimeField> = g.substitute(&subs).ok()?.to_unipoly().ok()?;
    if uni.is_zero() {
        return None;
    }
    let (t, _) = *uni.fp_roots().first()?;
    Some((0..4).map(|i| fp.add(&u[i], &fp.mul(&v[i], &t))).collect())
}

#[test]
fn gauss_map_lands_on_normalized_kummer() {
    let fp = PrimeField::new(10007).unwrap();
    let f = BinaryForm::new(fp, 6, vec![fp.elem(3), fp.elem(-1), 0, 2, 1, 1, 0]).unwrap();
    let dk = kummer_dual_from_curve(&f).unwrap();
    let gk = kummer_from_curve_normalized(&f).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut n = 0;
    while n < 200 {
        let Some(pt) = sample_surface_point(&dk.g, &mut rng) else { continue };
        let Ok(p) = ProjPoint::new(fp, pt) else { continue };
        let Ok(img) = gauss_map(&dk.g, &p) else { continue };
        assert_eq!(gk.eval(img.coords()), 0);
        // projective invariance of the Gauss map
        let scaled = ProjPoint::new(fp, p.coords().iter().map(|c| fp.mul(c, &5)).collect()).unwrap();
        assert!(gauss_map(&dk.g, &scaled).unwrap().proj_eq(&img));
        n += 1;
    }
}
