//! Root extraction over Q (rational roots only) and over F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::binform::BinaryForm;
use super::field::{is_prime_u64, Field, PrimeField, Rationals};
use super::upoly::UniPoly;

/// Primitive integer polynomial proportional to f (positive leading coefficient).
pub fn primitive_integer_poly(f: &UniPoly<Rationals>) -> Vec<BigInt> {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c /= &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -c.clone();
        }
    }
    ints
}

fn eval_mod(poly: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Smallest a/b with a ≡ b r (mod m), |a| ≤ n_bound, 0 < b ≤ d_bound.
fn rational_reconstruct(r: &BigInt, m: &BigInt, n_bound: &BigInt, d_bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > n_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || &t1.abs() > d_bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Distinct rational roots with multiplicities, sorted increasingly.
///
/// Uses roots modulo a good prime, Newton lifting and rational reconstruction;
/// every candidate is verified by exact evaluation.
pub fn rational_roots(f: &UniPoly<Rationals>) -> Vec<(BigRational, usize)> {
    if f.deg() <= 0 {
        return vec![];
    }
    let q = Rationals;
    let mut out = vec![];
    let sf = f.squarefree_part();
    let zero_mult = f.root_multiplicity(&q.zero());
    let mut g = sf.clone();
    if zero_mult > 0 {
        out.push((BigRational::zero(), zero_mult));
        g = g.exact_div(&UniPoly::x(q)).expect("x divides");
    }
    if g.deg() <= 0 {
        return out;
    }
    let ints = primitive_integer_poly(&g);
    let n = ints.len() - 1;
    let c0 = ints[0].abs();
    let cn = ints[n].abs();
    let deriv: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();

    let mut p = 1009u64;
    let (fp, roots_p) = loop {
        p += 2;
        if !is_prime_u64(p) {
            continue;
        }
        let fp = PrimeField::new(p).expect("prime");
        if fp.from_bigint(&cn) == 0 {
            continue;
        }
        let gp = UniPoly::new(fp, ints.iter().map(|c| fp.from_bigint(c)).collect());
        if !gp.is_squarefree() {
            continue;
        }
        break (fp, gp.fp_roots());
    };
    let pb = BigInt::from(fp.modulus());
    let target = BigInt::from(2) * &c0 * &cn + 1;
    for (r, _) in roots_p {
        let mut m = pb.clone();
        let mut x = BigInt::from(r);
        while m < target {
            m = &m * &m;
            let fx = eval_mod(&ints, &x, &m);
            let dfx = eval_mod(&deriv, &x, &m);
            let Some(inv) = mod_inverse(&dfx, &m) else { break };
            x = (&x - fx * inv).mod_floor(&m);
        }
        if let Some(cand) = rational_reconstruct(&x, &m, &c0, &cn) {
            if g.eval(&cand).is_zero() {
                let mult = f.root_multiplicity(&cand);
                out.push((cand, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

/// Rational points of a binary form on P¹, with multiplicities; ∞ = (1 : 0) last.
pub fn form_rational_roots(f: &BinaryForm<Rationals>) -> Vec<([BigRational; 2], usize)> {
    let mut out: Vec<([BigRational; 2], usize)> = rational_roots(&f.to_poly())
        .into_iter()
        .map(|(r, m)| ([r, BigRational::one()], m))
        .collect();
    let inf = f.infinity_multiplicity();
    if inf > 0 && !f.is_zero() {
        out.push(([BigRational::one(), BigRational::zero()], inf));
    }
    out
}

/// Roots on P¹ over F_p with multiplicities; ∞ = (1 : 0) last.
pub fn form_fp_roots(f: &BinaryForm<PrimeField>) -> Vec<([u64; 2], usize)> {
    let mut out: Vec<([u64; 2], usize)> = f.to_poly().fp_roots().into_iter().map(|(r, m)| ([r, 1], m)).collect();
    let inf = f.infinity_multiplicity();
    if inf > 0 && !f.is_zero() {
        out.push(([1, 0], inf));
    }
    out
}

/// True when every root on P¹ is rational (counted with multiplicity).
pub fn splits_over_q(f: &BinaryForm<Rationals>) -> bool {
    form_rational_roots(f).iter().map(|(_, m)| m).sum::<usize>() == f.degree()
}

/// Base fields where the rational points of a binary form can be listed.
pub trait RootField: Field {
    fn form_roots(&self, f: &BinaryForm<Self>) -> Vec<([Self::Elem; 2], usize)>;
}

impl RootField for Rationals {
    fn form_roots(&self, f: &BinaryForm<Self>) -> Vec<([BigRational; 2], usize)> {
        form_rational_roots(f)
    }
}

impl RootField for PrimeField {
    fn form_roots(&self, f: &BinaryForm<Self>) -> Vec<([u64; 2], usize)> {
        form_fp_roots(f)
    }
}
