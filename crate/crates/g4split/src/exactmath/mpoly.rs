use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial keyed by exponent vectors.
#[derive(Clone, Debug)]
pub struct MultiPoly<F: Field> {
    pub field: F,
    nvars: usize,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars
            && self.terms.len() == o.terms.len()
            && self
                .terms
                .iter()
                .zip(&o.terms)
                .all(|((e1, c1), (e2, c2))| e1 == e2 && self.field.eq_elem(c1, c2))
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(field: F, nvars: usize) -> Self {
        let one = field.one();
        Self::constant(field, nvars, one)
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let one = field.one();
        let mut p = Self::zero(field, nvars);
        p.add_term(e, one);
        p
    }

    pub fn monomial(field: F, exp: Exponent, c: F::Elem) -> Self {
        let mut p = Self::zero(field, exp.len());
        p.add_term(exp, c);
        p
    }

    /// Σ c_i x_i.
    pub fn linear_form(field: F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Exponent, F::Elem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: Exponent, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        let f = self.field.clone();
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = f.add(v, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), f.mul(a, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, pt: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, f.mul(c, &f.from_int(e[var] as i64)));
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Replace variable i by subs[i]; all substitutes share one variable count.
    pub fn substitute(&self, subs: &[MultiPoly<F>]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::InvalidInput("substitution arity mismatch".into()));
        }
        let f = &self.field;
        let m = subs.first().map_or(0, |s| s.nvars);
        let mut powers: Vec<Vec<MultiPoly<F>>> = subs.iter().map(|s| vec![Self::one(f.clone(), m), s.clone()]).collect();
        let mut out = Self::zero(f.clone(), m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(f.clone(), m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Coefficient of var^k, as a polynomial in the same variables (var absent).
    pub fn coeff_of_var(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Delete variable var (must not occur).
    pub fn drop_var(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.field.clone(), self.nvars - 1);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                return Err(Error::NotACone(self.monomial_string(e)));
            }
            let mut e2 = e.clone();
            e2.remove(var);
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// View as a univariate polynomial in var with coefficients in the other variables.
    pub fn as_poly_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0);
        (0..=d).map(|k| self.coeff_of_var(var, k)).collect()
    }

    pub fn to_unipoly(&self) -> Result<UniPoly<F>> {
        if self.nvars != 1 {
            return Err(Error::InvalidInput("not univariate".into()));
        }
        let d = self.degree_in(0).unwrap_or(0) as usize;
        let mut c = vec![self.field.zero(); d + 1];
        for (e, a) in &self.terms {
            c[e[0] as usize] = a.clone();
        }
        Ok(UniPoly::new(self.field.clone(), c))
    }

    /// Constant term, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Leading term in lexicographic order of exponents.
    pub fn leading_term(&self) -> Option<(&Exponent, &F::Elem)> {
        self.terms.iter().next_back()
    }

    /// Exact division by d (lex order); errors when d does not divide.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let f = &self.field;
        let (de, dc) = d
            .leading_term()
            .ok_or_else(|| Error::Arithmetic("division by zero polynomial".into()))?;
        let dinv = f.inv(dc).ok_or_else(|| Error::Arithmetic("non-invertible coefficient".into()))?;
        let mut r = self.clone();
        let mut q = Self::zero(f.clone(), self.nvars);
        while let Some((e, c)) = r.leading_term() {
            if !e.iter().zip(de).all(|(a, b)| a >= b) {
                return Err(Error::Arithmetic("inexact multivariate division".into()));
            }
            let qe: Exponent = e.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = f.mul(c, &dinv);
            let t = Self::monomial(f.clone(), qe, qc);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Ok(q)
    }

    pub fn map_coeffs<G: Field>(&self, g: G, mut m: impl FnMut(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(g, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), m(c));
        }
        out
    }

    /// Insert new variables; position map sends old index i to new index map[i].
    pub fn embed(&self, new_nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(self.field.clone(), new_nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; new_nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    fn monomial_string(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string());
                    if k == 1 { n } else { format!("{n}^{k}") }
                })
                .collect();
            let cs = self.field.display(c);
            if mono.is_empty() {
                parts.push(cs);
            } else {
                parts.push(format!("({cs})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl<'a, F: Field> Add for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, o: &'a MultiPoly<F>) -> MultiPoly<F> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, F: Field> Sub for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, o: &'a MultiPoly<F>) -> MultiPoly<F> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }
}

impl<'a, F: Field> Mul for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, o: &'a MultiPoly<F>) -> MultiPoly<F> {
        let f = &self.field;
        let mut out = MultiPoly::zero(f.clone(), self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}
