use g4split::exactmath::{qvec, rat_int, Field, MultiPoly, PrimeField, Rationals, UniPoly};
use g4split::igusa::*;
use g4split::Error;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn a_pt() -> Vec<BigRational> {
    qvec(&[-55, -29, 49, 36, 20, -21])
}

fn b_pt() -> Vec<BigRational> {
    qvec(&[-29, 49, -55, 36, 20, -21])
}

/// ∂F/∂x_i = 4 x_i S − 16 x_i³, reduced by eliminating x5.
fn reduced_gradient_oracle(a: &[i64]) -> Vec<i64> {
    let s: i64 = a.iter().map(|x| x * x).sum();
    let g: Vec<i64> = a.iter().map(|x| 4 * x * s - 16 * x * x * x).collect();
    (0..5).map(|i| g[i] - g[5]).collect()
}

#[test]
fn classical_membership() {
    let i = QuarticThreefold::classical(Rationals);
    assert!(i.contains(&a_pt()).unwrap());
    assert!(i.contains(&b_pt()).unwrap());
    assert!(!i.contains(&qvec(&[1, -1, 0, 0, 0, 0])).unwrap());
    assert_eq!(i.value(&qvec(&[1, -1, 0, 0, 0, 0])).unwrap(), rat_int(-4));
    assert!(matches!(i.contains(&qvec(&[1, 1, 0, 0, 0, 0])), Err(Error::NotOnHyperplane)));
}

#[test]
fn worked_polar_pair() {
    let i = QuarticThreefold::classical(Rationals);
    let (a, b) = (a_pt(), b_pt());
    assert_eq!(i.polar_pair(&a, &b).unwrap(), rat_int(0));
    assert_eq!(i.polar_pair(&a, &a).unwrap(), rat_int(0));
    let g = reduced_gradient_oracle(&[-29, 49, -55, 36, 20, -21]);
    let oracle: i64 = g.iter().zip([-55i64, -29, 49, 36, 20]).map(|(x, y)| x * y).sum();
    assert_eq!(i.polar_pair(&b, &a).unwrap(), rat_int(oracle));
    assert_eq!(oracle, 118110720);
}

#[test]
fn sigma_on_worked_point() {
    let s = SigmaAction::parse("(0,1,2)").unwrap();
    assert_eq!(s.apply(&a_pt()), b_pt());
    assert_eq!(SigmaAction::identity().apply(&a_pt()), a_pt());
    assert_eq!(s.then(&s).then(&s), SigmaAction::identity());
    assert_eq!(s.to_string(), "(0,1,2)");
    assert_eq!(SigmaAction::parse("(01)(23)").unwrap().cycle_type(), vec![2, 2, 1, 1]);
    assert!(SigmaAction::parse("(0,1)(1,2)").is_err());
    assert_eq!(SigmaAction::parse("(0,1,2,3,4,5)").unwrap().order(), 6);
}

#[test]
fn euler_identity_symbolic() {
    for i in [QuarticThreefold::classical(Rationals), QuarticThreefold::symmetroid(Rationals)] {
        let n = i.nvars();
        let euler = (0..n).fold(MultiPoly::zero(Rationals, n), |acc, k| {
            &acc + &(&MultiPoly::var(Rationals, n, k) * &i.form().partial(k))
        });
        assert_eq!(euler, i.form().scale(&rat_int(4)));
    }
}

#[test]
fn sigma_preserves_form_symbolically() {
    let i = QuarticThreefold::classical(Rationals);
    for s in ["(0,1)", "(0,1,2,3,4,5)", "(0,3)(1,4,2)"] {
        let s = SigmaAction::parse(s).unwrap();
        let subs: Vec<MultiPoly<Rationals>> = s.perm().iter().map(|&k| MultiPoly::var(Rationals, 6, k)).collect();
        assert_eq!(i.form().substitute(&subs).unwrap(), i.form().clone());
    }
}

fn assert_lines_singular(i: &QuarticThreefold<Rationals>) {
    let n = i.nvars();
    assert_eq!(i.singular_lines().len(), 15);
    let mut grad = i.form().gradient();
    if i.model == Model::Classical {
        // on Σx = 0 only the gradient modulo (1, ..., 1) has to vanish
        let last = grad[5].clone();
        grad = grad.iter().map(|g| g - &last).collect();
    }
    for l in i.singular_lines() {
        let (u, v) = (&l.basis()[0], &l.basis()[1]);
        let subs: Vec<MultiPoly<Rationals>> = (0..n)
            .map(|k| MultiPoly::linear_form(Rationals, &[u[k].clone(), v[k].clone()]))
            .collect();
        assert!(i.form().substitute(&subs).unwrap().is_zero());
        for g in &grad {
            assert!(g.substitute(&subs).unwrap().is_zero());
        }
    }
}

#[test]
fn singular_lines_symbolic() {
    assert_lines_singular(&QuarticThreefold::classical(Rationals));
    assert_lines_singular(&QuarticThreefold::symmetroid(Rationals));
}

#[test]
fn syntheme_and_elliptic_tests() {
    let i = QuarticThreefold::classical(Rationals);
    assert_eq!(synthemes().len(), 15);
    assert_eq!(synthemes()[0], [[0, 1], [2, 3], [4, 5]]);
    let t = 7;
    let p = qvec(&[1, 1, t, t, -1 - t, -1 - t]);
    assert_eq!(i.is_on_singular_line(&p).unwrap(), Some(0));
    // x0 + x2 + x4 vanishes identically on this line: every syntheme line lies in the elliptic locus
    assert!(i.is_elliptic(&p).unwrap());
    assert_eq!(i.is_on_singular_line(&a_pt()).unwrap(), None);
    assert!(!i.is_elliptic(&a_pt()).unwrap());
    assert!(i.is_elliptic(&qvec(&[1, 2, -3, 4, 5, -9])).unwrap());
    // {01|23|45} and {01|24|35} meet where x2 = x3 = x4 = x5
    let meet = qvec(&[-2, -2, 1, 1, 1, 1]);
    let hits: Vec<usize> = (0..15)
        .filter(|&k| {
            let l = &i.singular_lines()[k];
            let mut m = l.basis().to_vec();
            m.push(meet.clone());
            g4split::exactmath::linalg::rank(&Rationals, &m) == 2
        })
        .collect();
    assert_eq!(hits, vec![0, 1, 2]);
}

#[test]
fn iterated_polars() {
    let i = QuarticThreefold::classical(Rationals);
    let b = b_pt();
    let p3 = i.iterated_polar(&b, 3).unwrap();
    let grad = i.gradient(&b);
    let lin = MultiPoly::linear_form(Rationals, &grad);
    assert_eq!(p3, lin.scale(&rat_int(6)));
    let p1 = i.iterated_polar(&b, 1).unwrap();
    assert_eq!(p1.eval(&b), rat_int(0));
    assert!(matches!(i.iterated_polar(&b, 4), Err(Error::InvalidInput(_))));
    let x = qvec(&[1, 2, 3, -1, -2, -3]);
    assert_eq!(p1.eval(&x), i.polar_pair(&x, &b).unwrap());
}

#[test]
fn kummer_section_of_worked_point() {
    let i = QuarticThreefold::classical(Rationals);
    let ks = i.kummer_section(&a_pt()).unwrap();
    assert_eq!(ks.nodes.len(), 16);
    assert_eq!(ks.distinct_node_count(), 16);
    assert_eq!(ks.space.basis()[3], a_pt());
    // node at (0:0:0:1): no monomials of degree ≥ 3 in the last variable
    assert!(ks.quartic.as_poly_in(3).len() <= 3);
    assert!(matches!(i.kummer_section(&qvec(&[1, 1, 7, 7, -8, -8])), Err(Error::OnSingularLine(0))));
}

#[test]
fn elliptic_point_rejected() {
    let i = QuarticThreefold::classical(Rationals);
    // on x0 + x1 + x2 = 0 the quartic restricts to −(A − B)² with A, B the two
    // halves of Σx², and A = B = 14 here
    let p = qvec(&[1, 2, -3, -1, 3, -2]);
    assert_eq!(i.is_on_singular_line(&p).unwrap(), None);
    assert!(i.contains(&p).unwrap());
    assert!(matches!(i.kummer_section(&p), Err(Error::EllipticLocus)));
}

/// A random point of the classical quartic over F_p with the first four
/// coordinates chosen freely.
pub fn random_fp_point(f: PrimeField, rng: &mut impl Rng) -> Option<Vec<u64>> {
    let p = f.modulus();
    let head: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
    let i = QuarticThreefold::classical(f);
    // x4 = t, x5 = −(Σ head) − t
    let s: u64 = head.iter().fold(0, |acc, c| f.add(&acc, c));
    let mut subs: Vec<MultiPoly<PrimeField>> = head.iter().map(|&c| MultiPoly::constant(f, 1, c)).collect();
    subs.push(MultiPoly::var(f, 1, 0));
    subs.push(&MultiPoly::constant(f, 1, f.neg(&s)) - &MultiPoly::var(f, 1, 0));
    let u: UniPoly<PrimeField> = i.form().substitute(&subs).ok()?.to_unipoly().ok()?;
    let roots = u.fp_roots();
    let (t, _) = roots.first()?;
    let mut pt = head;
    pt.push(*t);
    pt.push(f.sub(&f.neg(&s), t));
    Some(pt)
}

#[test]
fn node_count_over_small_field() {
    let f = PrimeField::new(23).unwrap();
    let i = QuarticThreefold::classical(f);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 2 {
        let Some(a) = random_fp_point(f, &mut rng) else { continue };
        let Ok(ks) = i.kummer_section(&a) else { continue };
        if ks.distinct_node_count() != 16 {
            continue;
        }
        // enumerate P³(F_23) and count singular points of the section
        let grad = ks.quartic.gradient();
        let p = 23u64;
        let mut count = 0;
        for lead in 0..4 {
            let free = 3 - lead;
            let total = p.pow(free as u32);
            for mut k in 0..total {
                let mut v = vec![0u64; 4];
                v[lead] = 1;
                for j in lead + 1..4 {
                    v[j] = k % p;
                    k /= p;
                }
                if ks.quartic.eval(&v) == 0 && grad.iter().all(|g| g.eval(&v) == 0) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 16);
        done += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polar_matches_tangent_membership(seed in any::<u64>()) {
        let f = PrimeField::new(10007).unwrap();
        let i = QuarticThreefold::classical(f);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let Some(a) = random_fp_point(f, &mut rng) else { return Ok(()) };
        let mut b: Vec<u64> = (0..5).map(|_| rng.gen_range(0..10007)).collect();
        let s = b.iter().fold(0, |acc, c| f.add(&acc, c));
        b.push(f.neg(&s));
        prop_assume!(b.iter().any(|&c| c != 0));
        let pab = i.polar_pair(&a, &b).unwrap();
        let p3 = i.iterated_polar(&a, 3).unwrap().eval(&b);
        prop_assert_eq!(p3, f.mul(&6, &pab));
        // force b into T_a by a correction along a direction off the tangent space
        let grad = i.gradient(&a);
        let e: Vec<u64> = {
            let mut e = vec![0u64; 6];
            let k = (0..5).find(|&k| f.sub(&grad[k], &grad[5]) != 0);
            let Some(k) = k else { return Ok(()) };
            e[k] = 1;
            e[5] = f.neg(&1);
            e
        };
        let ge = i.polar_pair(&a, &e).unwrap();
        let lam = f.div(&pab, &ge).unwrap();
        let bt: Vec<u64> = b.iter().zip(&e).map(|(x, y)| f.sub(x, &f.mul(&lam, y))).collect();
        prop_assume!(bt.iter().any(|&c| c != 0));
        prop_assert_eq!(i.polar_pair(&a, &bt).unwrap(), 0);
    }
}
