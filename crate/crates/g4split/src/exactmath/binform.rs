use super::field::Field;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// Binary form of fixed degree d in (x, z); `coeffs[i]` multiplies x^i z^(d-i).
/// Vanishing top coefficients encode roots at infinity (z = 0).
#[derive(Clone, Debug)]
pub struct BinaryForm<F: Field> {
    pub field: F,
    degree: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for BinaryForm<F> {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .all(|(a, b)| self.field.eq_elem(a, b))
    }
}

/// A 2x2 matrix acting on (x : z) by (x, z) ↦ (m00 x + m01 z, m10 x + m11 z).
pub type Mobius<E> = [[E; 2]; 2];

impl<F: Field> BinaryForm<F> {
    pub fn new(field: F, degree: usize, mut coeffs: Vec<F::Elem>) -> Result<Self> {
        while coeffs.len() > degree + 1 {
            if !field.is_zero(coeffs.last().unwrap()) {
                return Err(Error::InvalidInput("coefficient list longer than degree".into()));
            }
            coeffs.pop();
        }
        while coeffs.len() < degree + 1 {
            coeffs.push(field.zero());
        }
        Ok(BinaryForm { field, degree, coeffs })
    }

    pub fn from_ints(field: F, degree: usize, cs: &[i64]) -> Result<Self> {
        let c = cs.iter().map(|&v| field.from_int(v)).collect();
        Self::new(field, degree, c)
    }

    pub fn from_poly(p: &UniPoly<F>, degree: usize) -> Result<Self> {
        if p.deg() > degree as isize {
            return Err(Error::InvalidInput(format!(
                "polynomial of degree {} does not fit a form of degree {degree}",
                p.deg()
            )));
        }
        Self::new(p.field.clone(), degree, p.coeffs().to_vec())
    }

    pub fn zero(field: F, degree: usize) -> Self {
        let c = vec![field.zero(); degree + 1];
        BinaryForm { field, degree, coeffs: c }
    }

    pub fn one(field: F) -> Self {
        let c = vec![field.one()];
        BinaryForm { field, degree: 0, coeffs: c }
    }

    /// The linear form vanishing at (a : b): b x - a z.
    pub fn vanishing_at(field: F, a: &F::Elem, b: &F::Elem) -> Self {
        let c = vec![field.neg(a), b.clone()];
        BinaryForm { field, degree: 1, coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    /// Dehomogenization at z = 1.
    pub fn to_poly(&self) -> UniPoly<F> {
        UniPoly::new(self.field.clone(), self.coeffs.clone())
    }

    pub fn eval(&self, x: &F::Elem, z: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..=self.degree {
            let t = f.mul(&self.coeffs[i], &f.mul(&f.pow(x, i as u64), &f.pow(z, (self.degree - i) as u64)));
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Multiplicity of the root (1 : 0).
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| self.field.is_zero(c)).count()
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        BinaryForm {
            field: f.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.degree != o.degree {
            return Err(Error::InvalidInput("adding forms of different degree".into()));
        }
        let f = &self.field;
        Ok(BinaryForm {
            field: f.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        let d = self.degree + o.degree;
        let mut c = vec![f.zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        BinaryForm { field: f.clone(), degree: d, coeffs: c }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// f(X(s,t), Z(s,t)) for forms X, Z of a common degree.
    pub fn compose(&self, xf: &Self, zf: &Self) -> Result<Self> {
        if xf.degree != zf.degree {
            return Err(Error::InvalidInput("composition needs X and Z of equal degree".into()));
        }
        let f = &self.field;
        let k = xf.degree;
        let mut out = Self::zero(f.clone(), self.degree * k);
        let xp: Vec<Self> = (0..=self.degree).scan(Self::one(f.clone()), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(xf);
            Some(cur)
        }).collect();
        let zp: Vec<Self> = (0..=self.degree).scan(Self::one(f.clone()), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(zf);
            Some(cur)
        }).collect();
        for i in 0..=self.degree {
            if f.is_zero(&self.coeffs[i]) {
                continue;
            }
            let t = xp[i].mul(&zp[self.degree - i]).scale(&self.coeffs[i]);
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// f ∘ m⁻¹, so that roots are carried forward by m.
    pub fn mobius_apply(&self, m: &Mobius<F::Elem>) -> Result<Self> {
        let f = &self.field;
        let det = f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]));
        let di = f
            .inv(&det)
            .ok_or_else(|| Error::InvalidInput("singular Mobius matrix".into()))?;
        // m⁻¹ = (1/det) [[m11, -m01], [-m10, m00]]
        let xf = Self::new(f.clone(), 1, vec![f.mul(&m[1][1], &di), f.neg(&f.mul(&m[0][1], &di))].into_iter().rev().collect())?;
        let zf = Self::new(f.clone(), 1, vec![f.neg(&f.mul(&m[1][0], &di)), f.mul(&m[0][0], &di)].into_iter().rev().collect())?;
        self.compose(&xf, &zf)
    }

    pub fn discriminant(&self) -> Result<F::Elem> {
        let f = &self.field;
        let d = self.degree;
        if d == 0 {
            return Err(Error::InvalidInput("discriminant needs degree >= 1".into()));
        }
        if self.is_zero() {
            return Ok(f.zero());
        }
        match self.infinity_multiplicity() {
            0 => self.to_poly().discriminant(),
            1 => {
                let a = self.coeffs[d - 1].clone();
                let g = self.to_poly();
                let dg = if g.deg() >= 1 { g.discriminant()? } else { f.one() };
                Ok(f.mul(&dg, &f.mul(&a, &a)))
            }
            _ => Ok(f.zero()),
        }
    }

    /// Resultant with the formal degrees (Sylvester determinant), so that
    /// a common root at infinity is seen.
    pub fn resultant(&self, o: &Self) -> F::Elem {
        let f = &self.field;
        let (m, n) = (self.degree, o.degree);
        let size = m + n;
        if size == 0 {
            return f.one();
        }
        let mut rows = vec![vec![f.zero(); size]; size];
        for i in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + k] = c.clone();
            }
        }
        for j in 0..m {
            for (k, c) in o.coeffs.iter().rev().enumerate() {
                rows[n + j][j + k] = c.clone();
            }
        }
        super::linalg::det(f, &rows)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.infinity_multiplicity() <= 1 && self.to_poly().is_squarefree()
    }

    /// Product of the distinct linear factors over the closure, with monic affine part.
    pub fn squarefree_part(&self) -> Self {
        let p = self.to_poly().squarefree_part();
        let inf = usize::from(self.infinity_multiplicity() > 0);
        let deg = p.deg().max(0) as usize + inf;
        Self::from_poly(&p, deg).expect("degree fits")
    }

    /// Monic gcd as forms, including the common multiplicity at infinity.
    pub fn gcd(&self, o: &Self) -> Self {
        let g = self.to_poly().gcd(&o.to_poly());
        let inf = self.infinity_multiplicity().min(o.infinity_multiplicity());
        let deg = g.deg().max(0) as usize + inf;
        Self::from_poly(&g, deg).expect("degree fits")
    }

    /// Quotient self / d as forms, erroring if d does not divide self.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        if d.degree > self.degree || d.infinity_multiplicity() > self.infinity_multiplicity() {
            return Err(Error::Arithmetic("form does not divide".into()));
        }
        let q = self.to_poly().exact_div(&d.to_poly())?;
        Self::from_poly(&q, self.degree - d.degree)
    }

    pub fn divides(&self, g: &Self) -> bool {
        g.exact_div(self).is_ok()
    }

    /// λ with o = λ·self, if one exists.
    pub fn proportionality(&self, o: &Self) -> Option<F::Elem> {
        let f = &self.field;
        if self.degree != o.degree {
            return None;
        }
        let k = self.coeffs.iter().position(|c| !f.is_zero(c))?;
        let lam = f.div(&o.coeffs[k], &self.coeffs[k])?;
        self.coeffs
            .iter()
            .zip(&o.coeffs)
            .all(|(a, b)| f.eq_elem(&f.mul(a, &lam), b))
            .then_some(lam)
    }

    pub fn is_proportional(&self, o: &Self) -> bool {
        self.proportionality(o).is_some_and(|l| !self.field.is_zero(&l))
    }

    /// Swap x and z.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryForm { field: self.field.clone(), degree: self.degree, coeffs: c }
    }

    /// d^a d^b / dx^a dz^b.
    pub fn derivative(&self, a: usize, b: usize) -> Self {
        let f = &self.field;
        if a + b > self.degree {
            return Self::zero(f.clone(), 0);
        }
        let nd = self.degree - a - b;
        let mut c = vec![f.zero(); nd + 1];
        for i in a..=self.degree {
            let j = self.degree - i;
            if j < b {
                continue;
            }
            let mut k: i64 = 1;
            for t in 0..a {
                k *= (i - t) as i64;
            }
            for t in 0..b {
                k *= (j - t) as i64;
            }
            c[i - a] = f.mul(&self.coeffs[i], &f.from_int(k));
        }
        BinaryForm { field: f.clone(), degree: nd, coeffs: c }
    }

    /// Transvectant (self, g)_k with the normalization
    /// (m-k)!(n-k)!/(m! n!) Σ (-1)^i C(k,i) ∂^k self/∂x^(k-i)∂z^i · ∂^k g/∂x^i∂z^(k-i).
    pub fn transvectant(&self, g: &Self, k: usize) -> Result<Self> {
        let f = &self.field;
        let (m, n) = (self.degree, g.degree);
        if k > m || k > n {
            return Err(Error::InvalidInput("transvectant order exceeds degree".into()));
        }
        let mut acc = Self::zero(f.clone(), m + n - 2 * k);
        for i in 0..=k {
            let t = self.derivative(k - i, i).mul(&g.derivative(i, k - i));
            let c = f.from_int(binomial(k, i) as i64);
            let t = t.scale(&if i % 2 == 1 { f.neg(&c) } else { c });
            acc = acc.add(&t)?;
        }
        let num = factorial(m - k) * factorial(n - k);
        let den = factorial(m) * factorial(n);
        let scale = f
            .div(&f.from_bigint(&num.into()), &f.from_bigint(&den.into()))
            .ok_or_else(|| Error::Arithmetic("transvectant normalization not invertible".into()))?;
        Ok(acc.scale(&scale))
    }

    pub fn map_coeffs<G: Field>(&self, g: G, m: impl FnMut(&F::Elem) -> G::Elem) -> BinaryForm<G> {
        let c = self.coeffs.iter().map(m).collect();
        BinaryForm { field: g, degree: self.degree, coeffs: c }
    }

    /// Pure relabelling of the degree: pads with zeros (adds roots at infinity).
    pub fn with_degree(&self, d: usize) -> Result<Self> {
        Self::new(self.field.clone(), d, self.coeffs.clone())
    }

    pub fn display(&self) -> String {
        self.to_poly().display("x")
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn binomial(n: usize, k: usize) -> u128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Compose two Möbius matrices: (a ∘ b).
pub fn mobius_compose<F: Field>(f: &F, a: &Mobius<F::Elem>, b: &Mobius<F::Elem>) -> Mobius<F::Elem> {
    let e = |i: usize, j: usize| f.add(&f.mul(&a[i][0], &b[0][j]), &f.mul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Image of (x : z) under m.
pub fn mobius_point<F: Field>(f: &F, m: &Mobius<F::Elem>, p: &[F::Elem; 2]) -> [F::Elem; 2] {
    [
        f.add(&f.mul(&m[0][0], &p[0]), &f.mul(&m[0][1], &p[1])),
        f.add(&f.mul(&m[1][0], &p[0]), &f.mul(&m[1][1], &p[1])),
    ]
}

pub fn p1_equal<F: Field>(f: &F, a: &[F::Elem; 2], b: &[F::Elem; 2]) -> bool {
    f.eq_elem(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[0]))
}
