use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Field, PrimeField};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug)]
pub struct UniPoly<F: Field> {
    pub field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| self.field.eq_elem(a, b))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_ints(field: F, cs: &[i64]) -> Self {
        let coeffs = cs.iter().map(|&c| field.from_int(c)).collect();
        Self::new(field, coeffs)
    }

    pub fn zero(field: F) -> Self {
        UniPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::constant(field, one)
    }

    /// The monomial c·x^k.
    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    pub fn x(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    /// x - r
    pub fn linear_root(field: F, r: &F::Elem) -> Self {
        let c = vec![field.neg(r), field.one()];
        Self::new(field, c)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial reported as -1.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lc()) {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_int(i as i64)))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(self.field.clone(), v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// self(g(x)).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(self.field.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(self.field.clone(), c.clone());
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        if d.is_zero() {
            return Err(Error::Arithmetic("polynomial division by zero".into()));
        }
        let dl = d.coeffs.len();
        let inv = f
            .inv(&d.lc())
            .ok_or_else(|| Error::Arithmetic("non-invertible leading coefficient".into()))?;
        let mut r = self.coeffs.clone();
        if r.len() < dl {
            return Ok((Self::zero(f.clone()), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dl - 1], &inv);
            if !f.is_zero(&c) {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = f.sub(&r[k + j], &f.mul(&c, dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dl - 1);
        Ok((Self::new(f.clone(), q), Self::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient when d divides self exactly.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Arithmetic("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, g: &Self) -> bool {
        if self.is_zero() {
            return g.is_zero();
        }
        g.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> Result<F::Elem> {
        let f = &self.field;
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidInput("resultant of two zero polynomials".into()));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(f.zero());
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut res = f.one();
        while b.deg() > 0 {
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(f.zero());
            }
            let (da, db, dr) = (a.deg() as u64, b.deg() as u64, r.deg() as u64);
            if (da * db) % 2 == 1 {
                res = f.neg(&res);
            }
            res = f.mul(&res, &f.pow(&b.lc(), da - dr));
            a = b;
            b = r;
        }
        Ok(f.mul(&res, &f.pow(&b.lc(), a.deg() as u64)))
    }

    /// Sylvester matrix with the formal degrees of the inputs.
    pub fn sylvester_matrix(&self, other: &Self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let m = self.deg().max(0) as usize;
        let n = other.deg().max(0) as usize;
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![f.zero(); size];
            for j in 0..=m {
                row[i + j] = self.coeff(m - j);
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![f.zero(); size];
            for j in 0..=n {
                row[i + j] = other.coeff(n - j);
            }
            rows.push(row);
        }
        rows
    }

    pub fn discriminant(&self) -> Result<F::Elem> {
        let f = &self.field;
        let d = match self.degree() {
            None | Some(0) => return Err(Error::InvalidInput("discriminant needs degree >= 1".into())),
            Some(d) => d as u64,
        };
        if d == 1 {
            return Ok(f.one());
        }
        let r = self.resultant(&self.derivative())?;
        let mut v = f
            .div(&r, &self.lc())
            .ok_or_else(|| Error::Arithmetic("zero leading coefficient".into()))?;
        if (d * (d - 1) / 2) % 2 == 1 {
            v = f.neg(&v);
        }
        Ok(v)
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.deg() <= 0 {
            return Self::one(self.field.clone());
        }
        let d = self.derivative();
        if d.is_zero() {
            // only reachable in characteristic p with f a p-th power; callers keep deg < p
            return self.monic();
        }
        let g = self.gcd(&d);
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.deg() <= 0 || self.gcd(&self.derivative()).deg() == 0
    }

    /// Multiplicity of the root r.
    pub fn root_multiplicity(&self, r: &F::Elem) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear_root(self.field.clone(), r);
        let mut g = self.clone();
        let mut m = 0;
        while let Ok((q, rem)) = g.divrem(&lin) {
            if !rem.is_zero() {
                break;
            }
            g = q;
            m += 1;
        }
        m
    }

    /// Interpolation through (x_i, y_i) with distinct x_i.
    pub fn interpolate(field: F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<Self> {
        let mut acc = Self::zero(field.clone());
        for (i, xi) in xs.iter().enumerate() {
            let mut basis = Self::one(field.clone());
            let mut denom = field.one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = &basis * &Self::linear_root(field.clone(), xj);
                    denom = field.mul(&denom, &field.sub(xi, xj));
                }
            }
            let c = field
                .div(&ys[i], &denom)
                .ok_or_else(|| Error::InvalidInput("repeated interpolation node".into()))?;
            acc = &acc + &basis.scale(&c);
        }
        Ok(acc)
    }

    pub fn map_coeffs<G: Field>(&self, g: G, m: impl FnMut(&F::Elem) -> G::Elem) -> UniPoly<G> {
        let c = self.coeffs.iter().map(m).collect();
        UniPoly::new(g, c)
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.display(c);
            parts.push(match i {
                0 => cs,
                1 => format!("({cs})*{var}"),
                _ => format!("({cs})*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl<'a, F: Field> Add for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| f.add(&self.coeff(i), &o.coeff(i))).collect();
        UniPoly::new(f.clone(), c)
    }
}

impl<'a, F: Field> Sub for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| f.sub(&self.coeff(i), &o.coeff(i))).collect();
        UniPoly::new(f.clone(), c)
    }
}

impl<'a, F: Field> Mul for &'a UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, o: &'a UniPoly<F>) -> UniPoly<F> {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(f.clone());
        }
        let mut c = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(f.clone(), c)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        let f = &self.field;
        UniPoly::new(f.clone(), self.coeffs.iter().map(|a| f.neg(a)).collect())
    }
}

impl UniPoly<PrimeField> {
    /// (base)^e mod m.
    fn powmod(base: &Self, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::one(base.field);
        let mut b = base.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &b).rem(m).expect("nonzero modulus");
            }
            e >>= 1;
            if e > 0 {
                b = (&b * &b).rem(m).expect("nonzero modulus");
            }
        }
        acc
    }

    /// Distinct roots in F_p of a square-free polynomial that splits into linear factors.
    fn split_linear(g: &Self, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
        let fld = g.field;
        let p = fld.modulus();
        match g.deg() {
            d if d <= 0 => {}
            1 => {
                let r = fld.neg(&fld.div(&g.coeff(0), &g.coeff(1)).expect("unit"));
                out.push(r);
            }
            _ => loop {
                let delta = rng.gen_range(0..p);
                let shifted = Self::new(fld, vec![delta, 1]);
                let h = &Self::powmod(&shifted, (p - 1) / 2, g) - &Self::one(fld);
                let d = g.gcd(&h);
                if d.deg() > 0 && d.deg() < g.deg() {
                    let e = g.exact_div(&d).expect("gcd divides");
                    Self::split_linear(&d, rng, out);
                    Self::split_linear(&e, rng, out);
                    return;
                }
            },
        }
    }

    /// All roots in F_p with multiplicity, sorted by residue.
    pub fn fp_roots(&self) -> Vec<(u64, usize)> {
        if self.deg() <= 0 {
            return vec![];
        }
        let fld = self.field;
        let p = fld.modulus();
        let x = Self::x(fld);
        let xp = Self::powmod(&x, p, self);
        let g = self.gcd(&(&xp - &x));
        let mut roots = vec![];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
        Self::split_linear(&g, &mut rng, &mut roots);
        roots.sort_unstable();
        roots
            .into_iter()
            .map(|r| (r, self.root_multiplicity(&r)))
            .collect()
    }

    /// Exhaustive root scan; intended for small p.
    pub fn fp_roots_scan(&self) -> Vec<(u64, usize)> {
        if self.deg() <= 0 {
            return vec![];
        }
        (0..self.field.modulus())
            .filter(|r| self.eval(r) == 0)
            .map(|r| (r, self.root_multiplicity(&r)))
            .collect()
    }
}
