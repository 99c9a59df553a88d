//! Extension fields used by the family tables: simple algebraic extensions
//! Q[t]/(m) and rational function fields Q(u_1, ..., u_n).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::field::{format_rational, Field, Rationals};
use super::mpoly::MultiPoly;
use super::upoly::UniPoly;

/// Q[t]/(m(t)) for an irreducible m; elements are reduced coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    modulus: UniPoly<Rationals>,
    name: String,
}

impl NumberField {
    /// Caller guarantees irreducibility of the modulus.
    pub fn new(modulus: UniPoly<Rationals>, name: &str) -> Self {
        NumberField {
            modulus: modulus.monic(),
            name: name.to_string(),
        }
    }

    /// Q(ζ_n) for n ∈ {3, 4, 5, 8, 12}: the cyclotomic polynomial Φ_n.
    pub fn cyclotomic(n: u32) -> Self {
        let q = Rationals;
        let coeffs: &[i64] = match n {
            3 => &[1, 1, 1],
            4 => &[1, 0, 1],
            5 => &[1, 1, 1, 1, 1],
            8 => &[1, 0, 0, 0, 1],
            12 => &[1, 0, -1, 0, 1],
            _ => panic!("cyclotomic field {n} not tabulated"),
        };
        Self::new(UniPoly::from_ints(q, coeffs), &format!("zeta{n}"))
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg() as usize
    }

    /// Name of the generator, e.g. "zeta5".
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> &UniPoly<Rationals> {
        &self.modulus
    }

    /// The generator t.
    pub fn gen(&self) -> Vec<BigRational> {
        self.reduce(&UniPoly::x(Rationals))
    }

    pub fn embed(&self, q: &BigRational) -> Vec<BigRational> {
        self.reduce(&UniPoly::constant(Rationals, q.clone()))
    }

    fn to_poly(&self, a: &[BigRational]) -> UniPoly<Rationals> {
        UniPoly::new(Rationals, a.to_vec())
    }

    fn reduce(&self, p: &UniPoly<Rationals>) -> Vec<BigRational> {
        let r = p.rem(&self.modulus).expect("nonzero modulus");
        let mut v = r.into_coeffs();
        v.resize(self.degree(), BigRational::zero());
        v
    }

    /// The element as a rational number, when it lies in Q.
    pub fn as_rational(&self, a: &[BigRational]) -> Option<BigRational> {
        a[1..].iter().all(|c| c.is_zero()).then(|| a[0].clone())
    }
}

impl Field for NumberField {
    type Elem = Vec<BigRational>;

    fn zero(&self) -> Self::Elem {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&BigRational::one())
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.embed(&BigRational::from_integer(n.clone()))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        Some(self.embed(q))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(&(&self.to_poly(a) * &self.to_poly(b)))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let pa = self.to_poly(a);
        if pa.is_zero() {
            return None;
        }
        // extended Euclid: s·a + t·m = g
        let (mut r0, mut r1) = (self.modulus.clone(), pa);
        let (mut s0, mut s1) = (UniPoly::zero(Rationals), UniPoly::one(Rationals));
        while !r1.is_zero() {
            let (q, r2) = r0.divrem(&r1).ok()?;
            let s2 = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        if r0.deg() != 0 {
            return None;
        }
        let c = r0.coeff(0).recip();
        Some(self.reduce(&s0.scale(&c)))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_json(&self, a: &Self::Elem) -> Value {
        Value::String(self.display(a))
    }
    fn display(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})*{}", format_rational(c), self.name),
                _ => format!("({})*{}^{i}", format_rational(c), self.name),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Element of Q(u_1..u_n): num/den with den ≠ 0. Not kept in lowest terms;
/// equality is tested by cross multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: MultiPoly<Rationals>,
    pub den: MultiPoly<Rationals>,
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField {
    nvars: usize,
    names: Vec<String>,
}

impl RatFuncField {
    pub fn new(names: &[&str]) -> Self {
        RatFuncField {
            nvars: names.len(),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc {
            num: MultiPoly::var(Rationals, self.nvars, i),
            den: MultiPoly::one(Rationals, self.nvars),
        }
    }

    pub fn from_poly(&self, p: MultiPoly<Rationals>) -> RatFunc {
        RatFunc {
            num: p,
            den: MultiPoly::one(Rationals, self.nvars),
        }
    }

    /// Numerator when the element is a polynomial.
    pub fn as_poly(&self, a: &RatFunc) -> Option<MultiPoly<Rationals>> {
        if let Some(c) = a.den.as_constant() {
            return Some(a.num.scale(&c.recip()));
        }
        a.num.exact_div(&a.den).ok()
    }

    fn normalize(&self, num: MultiPoly<Rationals>, den: MultiPoly<Rationals>) -> RatFunc {
        let one = MultiPoly::one(Rationals, self.nvars);
        if num.is_zero() {
            return RatFunc { num, den: one };
        }
        if let Some(c) = den.as_constant() {
            return RatFunc { num: num.scale(&c.recip()), den: one };
        }
        if let Ok(q) = num.exact_div(&den) {
            return RatFunc { num: q, den: one };
        }
        if num.as_constant().is_none() {
            if let Ok(q) = den.exact_div(&num) {
                return self.normalize(MultiPoly::one(Rationals, self.nvars), q);
            }
        }
        // make the denominator's leading coefficient 1
        let lc = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero den");
        let inv = lc.recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl Field for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc {
            num: MultiPoly::zero(Rationals, self.nvars),
            den: MultiPoly::one(Rationals, self.nvars),
        }
    }
    fn one(&self) -> RatFunc {
        RatFunc {
            num: MultiPoly::one(Rationals, self.nvars),
            den: MultiPoly::one(Rationals, self.nvars),
        }
    }
    fn from_bigint(&self, n: &BigInt) -> RatFunc {
        self.from_poly(MultiPoly::constant(Rationals, self.nvars, BigRational::from_integer(n.clone())))
    }
    fn from_rational(&self, q: &BigRational) -> Option<RatFunc> {
        Some(self.from_poly(MultiPoly::constant(Rationals, self.nvars, q.clone())))
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return self.normalize(&a.num + &b.num, a.den.clone());
        }
        self.normalize(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.normalize(&a.num * &b.num, &a.den * &b.den)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: -&a.num, den: a.den.clone() }
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_zero() {
            return None;
        }
        Some(self.normalize(a.den.clone(), a.num.clone()))
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_json(&self, a: &RatFunc) -> Value {
        Value::String(self.display(a))
    }
    fn display(&self, a: &RatFunc) -> String {
        let names: Vec<&str> = self.names.iter().map(|s| s.as_str()).collect();
        if a.den.as_constant().is_some_and(|c| c.is_one()) {
            a.num.display_with(&names)
        } else {
            format!("({})/({})", a.num.display_with(&names), a.den.display_with(&names))
        }
    }
}
