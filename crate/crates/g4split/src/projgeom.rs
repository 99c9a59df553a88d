//! Projective points, linear subspaces, projections and conics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::exactmath::linalg::{self, Matrix};
use crate::exactmath::{BinaryForm, Field, MultiPoly, PrimeField, Rationals, SqrtField};
use crate::error::{Error, Result};

/// Default height bound for rational conic point searches.
pub const DEFAULT_HEIGHT_BOUND: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct ProjPoint<F: Field> {
    pub field: F,
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: F, coords: Vec<F::Elem>) -> Result<Self> {
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(Error::InvalidInput("projective point with all coordinates zero".into()));
        }
        Ok(ProjPoint { field, coords })
    }

    pub fn from_ints(field: F, cs: &[i64]) -> Result<Self> {
        let c = cs.iter().map(|&v| field.from_int(v)).collect();
        Self::new(field, c)
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Equality up to a global scalar.
    pub fn proj_eq(&self, o: &Self) -> bool {
        let f = &self.field;
        if self.coords.len() != o.coords.len() {
            return false;
        }
        let n = self.coords.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                f.eq_elem(&f.mul(&self.coords[i], &o.coords[j]), &f.mul(&self.coords[j], &o.coords[i]))
            })
        }) && (0..n).all(|i| f.is_zero(&self.coords[i]) == f.is_zero(&o.coords[i]))
    }

    /// Scaled so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Self {
        let f = &self.field;
        let k = self.coords.iter().position(|c| !f.is_zero(c)).expect("nonzero point");
        let inv = f.inv(&self.coords[k]).expect("nonzero");
        ProjPoint {
            field: f.clone(),
            coords: self.coords.iter().map(|c| f.mul(c, &inv)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(|c| self.field.to_json(c)).collect())
    }
}

impl ProjPoint<Rationals> {
    /// Primitive integer representative with positive first nonzero entry.
    pub fn primitive(&self) -> Vec<BigInt> {
        use num_integer::Integer;
        let l = self.coords.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let mut v: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let first_neg = v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        for c in v.iter_mut() {
            *c /= &g;
            if first_neg {
                *c = -c.clone();
            }
        }
        v
    }
}

/// A linear subspace of F^(n+1), kept both as a span and as a kernel.
#[derive(Clone, Debug)]
pub struct LinearSubspace<F: Field> {
    pub field: F,
    ambient: usize,
    basis: Vec<Vec<F::Elem>>,
    equations: Vec<Vec<F::Elem>>,
}

impl<F: Field> LinearSubspace<F> {
    /// From spanning vectors; the basis is kept as given when independent.
    pub fn from_basis(field: F, ambient: usize, basis: Vec<Vec<F::Elem>>) -> Result<Self> {
        if basis.iter().any(|b| b.len() != ambient) {
            return Err(Error::InvalidSubspace("basis vector of wrong length".into()));
        }
        if linalg::rank(&field, &basis) != basis.len() {
            return Err(Error::InvalidSubspace("dependent basis vectors".into()));
        }
        let equations = linalg::nullspace(&field, &basis, ambient);
        Ok(LinearSubspace { field, ambient, basis, equations })
    }

    /// From cutting linear forms; the basis is the deterministic nullspace basis.
    pub fn from_equations(field: F, ambient: usize, equations: Vec<Vec<F::Elem>>) -> Result<Self> {
        if equations.iter().any(|b| b.len() != ambient) {
            return Err(Error::InvalidSubspace("equation of wrong length".into()));
        }
        let basis = linalg::nullspace(&field, &equations, ambient);
        if basis.is_empty() {
            return Err(Error::InvalidSubspace("equations cut out the zero subspace".into()));
        }
        let mut eq = equations.clone();
        let piv = linalg::rref(&field, &mut eq);
        eq.truncate(piv.len());
        Ok(LinearSubspace { field, ambient, basis, equations: eq })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    pub fn equations(&self) -> &[Vec<F::Elem>] {
        &self.equations
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.equations
            .iter()
            .all(|e| self.field.is_zero(&linalg::dot(&self.field, e, v)))
    }

    pub fn contains_subspace(&self, o: &Self) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    /// Point with the given coordinates in the basis.
    pub fn point(&self, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.ambient)
            .map(|i| {
                self.basis
                    .iter()
                    .zip(coeffs)
                    .fold(f.zero(), |acc, (b, c)| f.add(&acc, &f.mul(&b[i], c)))
            })
            .collect()
    }

    /// Basis coordinates of a vector in the subspace.
    pub fn coordinates_of(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let m = linalg::transpose(&self.basis);
        linalg::solve(&self.field, &m, v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis.iter().map(|b| b.iter().map(|c| self.field.to_json(c)).collect::<Vec<_>>()).collect::<Vec<_>>()
        })
    }
}

/// F restricted to the span of the basis: F(Σ y_i b_i).
pub fn restrict_form<F: Field>(form: &MultiPoly<F>, s: &LinearSubspace<F>) -> Result<MultiPoly<F>> {
    if form.nvars() != s.ambient {
        return Err(Error::InvalidSubspace("ambient dimension does not match the form".into()));
    }
    let f = &form.field;
    let k = s.dim();
    let subs: Vec<MultiPoly<F>> = (0..s.ambient)
        .map(|i| {
            let c: Vec<F::Elem> = s.basis.iter().map(|b| b[i].clone()).collect();
            MultiPoly::linear_form(f.clone(), &c)
        })
        .collect();
    if k == 0 {
        return Err(Error::InvalidSubspace("empty basis".into()));
    }
    form.substitute(&subs)
}

/// Invertible matrix whose last column is v and whose other columns are
/// standard basis vectors, skipping the index of the last nonzero entry of v.
pub fn frame_with_last<F: Field>(f: &F, v: &[F::Elem]) -> Result<Matrix<F::Elem>> {
    let n = v.len();
    let piv = (0..n)
        .rev()
        .find(|&i| !f.is_zero(&v[i]))
        .ok_or_else(|| Error::InvalidInput("zero vertex".into()))?;
    let mut cols: Vec<Vec<F::Elem>> = (0..n)
        .filter(|&i| i != piv)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    cols.push(v.to_vec());
    Ok(linalg::transpose(&cols))
}

/// Pull back a form along the linear map y ↦ M y.
pub fn pullback_linear<F: Field>(form: &MultiPoly<F>, m: &Matrix<F::Elem>) -> Result<MultiPoly<F>> {
    let f = &form.field;
    let subs: Vec<MultiPoly<F>> = m.iter().map(|row| MultiPoly::linear_form(f.clone(), row)).collect();
    form.substitute(&subs)
}

/// Determinant of a matrix of polynomials (fraction-free Bareiss elimination).
pub fn poly_det<F: Field>(m: &[Vec<MultiPoly<F>>]) -> Result<MultiPoly<F>> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let field = m[0][0].field.clone();
    let nv = m[0][0].nvars();
    let mut a: Vec<Vec<MultiPoly<F>>> = m.to_vec();
    let mut sign = false;
    let mut prev = MultiPoly::one(field.clone(), nv);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(MultiPoly::zero(field, nv));
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -&d } else { d })
}

/// Resultant of two polynomials with respect to one variable, as a polynomial
/// in the remaining variables (Sylvester determinant).
pub fn poly_resultant<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>, var: usize) -> Result<MultiPoly<F>> {
    let pc = p.as_poly_in(var);
    let qc = q.as_poly_in(var);
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let field = p.field.clone();
    let nv = p.nvars();
    if m == 0 && n == 0 {
        return Err(Error::InvalidInput("neither polynomial involves the variable".into()));
    }
    if m == 0 {
        return Ok(pc[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(qc[0].pow(m as u32));
    }
    let size = m + n;
    let zero = MultiPoly::zero(field, nv);
    let mut rows = vec![];
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for j in 0..=m {
            row[i + j] = pc[m - j].clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for j in 0..=n {
            row[i + j] = qc[n - j].clone();
        }
        rows.push(row);
    }
    poly_det(&rows)
}

/// Projection from v: returns the forms in the coordinates of frame_with_last(v)
/// with the last variable removed. Cone inputs lose the variable directly; with
/// `eliminate`, consecutive pairs are combined by resultants in the last variable.
pub fn project_from_point<F: Field>(
    forms: &[MultiPoly<F>],
    v: &ProjPoint<F>,
    eliminate: bool,
) -> Result<Vec<MultiPoly<F>>> {
    let f = &v.field;
    let frame = frame_with_last(f, v.coords())?;
    let pulled: Vec<MultiPoly<F>> = forms.iter().map(|g| pullback_linear(g, &frame)).collect::<Result<_>>()?;
    let last = v.coords().len() - 1;
    if !eliminate {
        return pulled.iter().map(|g| g.drop_var(last)).collect();
    }
    let mut out = vec![];
    for w in pulled.windows(2) {
        let r = poly_resultant(&w[0], &w[1], last)?;
        out.push(r.drop_var(last)?);
    }
    Ok(out)
}

/// Plane conic given by its symmetric Gram matrix: C(v) = vᵀ M v.
#[derive(Clone, Debug)]
pub struct Conic<F: Field> {
    pub field: F,
    pub gram: [[F::Elem; 3]; 3],
}

impl<F: Field> Conic<F> {
    pub fn new(field: F, gram: [[F::Elem; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if !field.eq_elem(&gram[i][j], &gram[j][i]) {
                    return Err(Error::InvalidInput("Gram matrix not symmetric".into()));
                }
            }
        }
        Ok(Conic { field, gram })
    }

    /// From a ternary quadratic form.
    pub fn from_form(q: &MultiPoly<F>) -> Result<Self> {
        let f = q.field.clone();
        if q.nvars() != 3 || q.total_degree().is_some_and(|d| d != 2) || !q.is_homogeneous() {
            return Err(Error::InvalidInput("not a ternary quadratic form".into()));
        }
        let half = f.inv(&f.from_int(2)).ok_or_else(|| Error::Arithmetic("characteristic 2".into()))?;
        let mut g: [[F::Elem; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| f.zero()));
        for i in 0..3 {
            for j in 0..3 {
                let mut e = vec![0; 3];
                e[i] += 1;
                e[j] += 1;
                let c = q.coeff(&e);
                g[i][j] = if i == j { c } else { f.mul(&c, &half) };
            }
        }
        Ok(Conic { field: f, gram: g })
    }

    pub fn to_form(&self) -> MultiPoly<F> {
        let f = &self.field;
        let mut q = MultiPoly::zero(f.clone(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut e = vec![0; 3];
                e[i] += 1;
                e[j] += 1;
                q.add_term(e, self.gram[i][j].clone());
            }
        }
        q
    }

    pub fn matrix(&self) -> Matrix<F::Elem> {
        self.gram.iter().map(|r| r.to_vec()).collect()
    }

    pub fn eval(&self, v: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mv = linalg::mat_vec(f, &self.matrix(), v);
        linalg::dot(f, v, &mv)
    }

    pub fn bilinear(&self, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        linalg::dot(f, a, &linalg::mat_vec(f, &self.matrix(), b))
    }

    pub fn det(&self) -> F::Elem {
        linalg::det(&self.field, &self.matrix())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, &self.matrix())
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.field.is_zero(&self.det())
    }

    pub fn contains(&self, p: &ProjPoint<F>) -> bool {
        self.field.is_zero(&self.eval(p.coords()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.gram
                .iter()
                .map(|r| Value::Array(r.iter().map(|c| self.field.to_json(c)).collect()))
                .collect(),
        )
    }
}

/// Tangent line M·pt at a point of a nonsingular conic.
pub fn conic_tangent_line<F: Field>(c: &Conic<F>, pt: &ProjPoint<F>) -> Result<Vec<F::Elem>> {
    if !c.contains(pt) {
        return Err(Error::InvalidInput("point not on conic".into()));
    }
    Ok(linalg::mat_vec(&c.field, &c.matrix(), pt.coords()))
}

/// Rational parametrization of a conic by lines through a point P0.
#[derive(Clone, Debug)]
pub struct ConicParam<F: Field> {
    pub conic: Conic<F>,
    pub base: ProjPoint<F>,
    /// Indices (a, b) of the coordinate directions swept, and the skipped index c.
    pub sweep: (usize, usize, usize),
    /// Coordinate forms X_i(s, t), each of degree 2.
    pub comps: [BinaryForm<F>; 3],
}

/// Sweep lines through pt with direction D = s e_a + t e_b:
/// (s:t) ↦ (DᵀMD)·P0 − 2(P0ᵀMD)·D.
pub fn conic_parametrize<F: Field>(c: &Conic<F>, pt: &ProjPoint<F>) -> Result<ConicParam<F>> {
    let f = &c.field;
    if !c.contains(pt) {
        return Err(Error::InvalidInput("point not on conic".into()));
    }
    if !c.is_nonsingular() {
        return Err(Error::InvalidInput("conic is singular".into()));
    }
    let p0 = pt.coords();
    let (a, b, cidx) = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .find(|&(_, _, k)| !f.is_zero(&p0[k]))
        .expect("nonzero point");
    let m = &c.gram;
    let two = f.from_int(2);
    // DᵀMD = m_aa s² + 2 m_ab s t + m_bb t²
    let dmd = [m[b][b].clone(), f.mul(&two, &m[a][b]), m[a][a].clone()];
    // P0ᵀMD = s (P0ᵀM)_a + t (P0ᵀM)_b
    let pm = linalg::mat_vec(f, &c.matrix(), p0);
    let comps: [BinaryForm<F>; 3] = std::array::from_fn(|i| {
        // coefficient order: index k multiplies s^k t^(2-k)
        let mut co: Vec<F::Elem> = dmd.iter().map(|x| f.mul(x, &p0[i])).collect();
        let di_s = if i == a { f.one() } else { f.zero() };
        let di_t = if i == b { f.one() } else { f.zero() };
        // -2 (pm_a s + pm_b t)(di_s s + di_t t)
        let s2 = f.mul(&pm[a], &di_s);
        let st = f.add(&f.mul(&pm[a], &di_t), &f.mul(&pm[b], &di_s));
        let t2 = f.mul(&pm[b], &di_t);
        co[2] = f.sub(&co[2], &f.mul(&two, &s2));
        co[1] = f.sub(&co[1], &f.mul(&two, &st));
        co[0] = f.sub(&co[0], &f.mul(&two, &t2));
        BinaryForm::new(f.clone(), 2, co).expect("degree 2")
    });
    Ok(ConicParam {
        conic: c.clone(),
        base: pt.clone(),
        sweep: (a, b, cidx),
        comps,
    })
}

impl<F: Field> ConicParam<F> {
    pub fn eval(&self, s: &F::Elem, t: &F::Elem) -> Vec<F::Elem> {
        self.comps.iter().map(|q| q.eval(s, t)).collect()
    }

    /// Parameter (s : t) of a point on the conic.
    pub fn inverse(&self, q: &ProjPoint<F>) -> Result<[F::Elem; 2]> {
        let f = &self.field();
        if !self.conic.contains(q) {
            return Err(Error::InvalidInput("point not on conic".into()));
        }
        let (a, b, c) = self.sweep;
        let p0 = self.base.coords();
        if q.proj_eq(&self.base) {
            let l = linalg::mat_vec(f, &self.conic.matrix(), p0);
            return Ok([l[b].clone(), f.neg(&l[a])]);
        }
        let lam = f.div(&q.coords()[c], &p0[c]).expect("nonzero");
        let d: Vec<F::Elem> = q.coords().iter().zip(p0).map(|(x, y)| f.sub(x, &f.mul(&lam, y))).collect();
        Ok([d[a].clone(), d[b].clone()])
    }

    pub fn field(&self) -> F {
        self.conic.field.clone()
    }

    /// Pull back a ternary form along the parametrization.
    pub fn pullback(&self, g: &MultiPoly<F>) -> Result<BinaryForm<F>> {
        let f = self.field();
        let deg = g.total_degree().unwrap_or(0) as usize;
        let mut out = BinaryForm::zero(f.clone(), 2 * deg);
        for (e, c) in g.terms() {
            let mut t = BinaryForm::one(f.clone()).scale(c);
            for (i, &k) in e.iter().enumerate() {
                t = t.mul(&self.comps[i].pow(k));
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }
}

/// Point search on a conic over F_p: scan of the three affine charts.
pub fn conic_point_fp(c: &Conic<PrimeField>) -> Result<ProjPoint<PrimeField>> {
    let f = c.field;
    for i in 0..3 {
        if f.is_zero(&c.gram[i][i]) {
            let mut v = vec![0; 3];
            v[i] = 1;
            return ProjPoint::new(f, v);
        }
    }
    let p = f.modulus();
    let g = &c.gram;
    for x in 0..p {
        // C(x, y, 1) = g11 y² + 2(g01 x + g12) y + (g00 x² + 2 g02 x + g22)
        let a = g[1][1];
        let b = f.mul(&2, &f.add(&f.mul(&g[0][1], &x), &g[1][2]));
        let c0 = f.add(&f.add(&f.mul(&g[0][0], &f.mul(&x, &x)), &f.mul(&f.mul(&2, &g[0][2]), &x)), &g[2][2]);
        let disc = f.sub(&f.mul(&b, &b), &f.mul(&4, &f.mul(&a, &c0)));
        if let Some(r) = f.sqrt(&disc) {
            let y = f.div(&f.sub(&r, &b), &f.mul(&2, &a)).expect("a nonzero");
            return ProjPoint::new(f, vec![x, y, 1]);
        }
    }
    Err(Error::NoRationalPointFound(p))
}

fn fits_i64(x: &BigInt) -> Option<i128> {
    x.to_i64().map(|v| v as i128)
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    // quick residue filter mod 64
    if (0x0202_0213_0203_0213u64 >> (n & 63)) & 1 == 0 {
        return false;
    }
    let r = num_integer::Roots::sqrt(&n);
    r * r == n
}

/// Rational point search over Q up to height `bound` in each affine chart.
/// Real-definite conics are rejected immediately (no real points).
pub fn conic_rational_point(c: &Conic<Rationals>, bound: u64) -> Result<ProjPoint<Rationals>> {
    let q = Rationals;
    for i in 0..3 {
        if c.gram[i][i].is_zero() {
            let mut v = vec![q.zero(); 3];
            v[i] = q.one();
            return ProjPoint::new(q, v);
        }
    }
    if is_definite(c) {
        return Err(Error::NoRationalPointFound(bound));
    }
    // charts: (x, y, 1), (x, 1, y), (1, x, y) with y solved from a quadratic
    for (xi, yi, one) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        let g = &c.gram;
        // C = A y² + (B1 x + B0) y + (C2 x² + C1 x + C0), with x = a/b:
        // disc·b² = (B1 a + B0 b)² - 4A(C2 a² + C1 a b + C0 b²)
        let a_ = g[yi][yi].clone();
        let b1 = &g[xi][yi] * BigRational::from_integer(2.into());
        let b0 = &g[yi][one] * BigRational::from_integer(2.into());
        let c2 = g[xi][xi].clone();
        let c1 = &g[xi][one] * BigRational::from_integer(2.into());
        let c0 = g[one][one].clone();
        let four = BigRational::from_integer(4.into());
        let alpha = &b1 * &b1 - &four * &a_ * &c2;
        let beta = BigRational::from_integer(2.into()) * &b1 * &b0 - &four * &a_ * &c1;
        let gamma = &b0 * &b0 - &four * &a_ * &c0;
        let l = alpha.denom().clone() * beta.denom() * gamma.denom();
        let to_int = |x: &BigRational| (x * BigRational::from_integer(l.clone())).to_integer();
        let (ai, bi, gi) = (to_int(&alpha), to_int(&beta), to_int(&gamma));
        // value N(a,b) = l·disc·b²; square test on l·N
        let small = match (fits_i64(&ai), fits_i64(&bi), fits_i64(&gi), fits_i64(&l)) {
            (Some(x), Some(y), Some(z), Some(w)) if x.abs() < 1 << 40 && y.abs() < 1 << 40 && z.abs() < 1 << 40 && w < 1 << 20 => Some((x, y, z, w)),
            _ => None,
        };
        let found = |a: i64, b: i64| -> Option<ProjPoint<Rationals>> {
            let (ab, bb) = (BigInt::from(a), BigInt::from(b));
            let n = &ai * &ab * &ab + &bi * &ab * &bb + &gi * &bb * &bb;
            let sq = crate::exactmath::field::bigint_sqrt_exact(&(&n * &l))?;
            // disc = (sq / l)² / b², y = (-(B1 x + B0) ± sqrt disc) / 2A
            let x = BigRational::new(ab.clone(), bb.clone());
            let sd = BigRational::new(sq, l.clone() * &bb);
            let y = (-(&b1 * &x + &b0) + sd) / (BigRational::from_integer(2.into()) * &a_);
            let mut v = vec![q.zero(); 3];
            v[xi] = x;
            v[yi] = y;
            v[one] = q.one();
            let p = ProjPoint::new(q, v).ok()?;
            c.contains(&p).then_some(p)
        };
        for h in 0..=bound as i64 {
            for (a, b) in height_ring(h) {
                let hit = match small {
                    Some((x, y, z, w)) => {
                        let (a2, b2) = (a as i128, b as i128);
                        let n = x * a2 * a2 + y * a2 * b2 + z * b2 * b2;
                        is_square_i128(n.saturating_mul(w))
                    }
                    None => true,
                };
                if hit {
                    if let Some(p) = found(a, b) {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::NoRationalPointFound(bound))
}

/// Reduced fractions a/b (b > 0) with max(|a|, b) = h.
fn height_ring(h: i64) -> Vec<(i64, i64)> {
    use num_integer::Integer;
    if h == 0 {
        return vec![(0, 1)];
    }
    let mut v = vec![];
    for b in 1..=h {
        for a in [-h, h] {
            if b <= h && a.gcd(&b) == 1 {
                v.push((a, b));
            }
        }
        if b == h {
            for a in -(h - 1)..=(h - 1) {
                if a.gcd(&b) == 1 {
                    v.push((a, b));
                }
            }
        }
    }
    v
}

/// True when the quadratic form is positive or negative definite over R.
fn is_definite(c: &Conic<Rationals>) -> bool {
    let g = &c.gram;
    let m1 = g[0][0].clone();
    let m2 = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    let m3 = c.det();
    let pos = m1.is_positive() && m2.is_positive() && m3.is_positive();
    let neg = m1.is_negative() && m2.is_positive() && m3.is_negative();
    pos || neg
}

/// Base fields with a point-finding strategy for plane conics.
pub trait ConicPoints: Field {
    /// A point on C. An optional plane curve meeting C in rational points is
    /// tried first (its intersection is found by elimination), then a search.
    fn conic_point(c: &Conic<Self>, hint: Option<&MultiPoly<Self>>, bound: u64) -> Result<ProjPoint<Self>>;
}

impl ConicPoints for PrimeField {
    fn conic_point(c: &Conic<Self>, _hint: Option<&MultiPoly<Self>>, _bound: u64) -> Result<ProjPoint<Self>> {
        conic_point_fp(c)
    }
}

impl ConicPoints for Rationals {
    fn conic_point(c: &Conic<Self>, hint: Option<&MultiPoly<Self>>, bound: u64) -> Result<ProjPoint<Self>> {
        for i in 0..3 {
            if c.gram[i][i].is_zero() {
                let mut v = vec![BigRational::zero(); 3];
                v[i] = BigRational::from_integer(1.into());
                return ProjPoint::new(Rationals, v);
            }
        }
        if let Some(h) = hint {
            if let Some(p) = intersection_point(c, h)? {
                return Ok(p);
            }
        }
        conic_rational_point(c, bound)
    }
}

/// A rational point of C ∩ {h = 0}, via the resultant in the last variable.
fn intersection_point(c: &Conic<Rationals>, h: &MultiPoly<Rationals>) -> Result<Option<ProjPoint<Rationals>>> {
    use crate::exactmath::{form_rational_roots, UniPoly};
    let q = Rationals;
    let cf = c.to_form();
    let r = poly_resultant(&cf, h, 2)?;
    if r.is_zero() {
        return Ok(None);
    }
    let deg = r.total_degree().unwrap_or(0) as usize;
    let mut co = vec![q.zero(); deg + 1];
    for (e, v) in r.terms() {
        co[e[0] as usize] = v.clone();
    }
    let bf = BinaryForm::new(q, deg, co)?;
    for (root, _) in form_rational_roots(&bf) {
        let sub = |g: &MultiPoly<Rationals>| -> Result<UniPoly<Rationals>> {
            let s = [
                MultiPoly::constant(q, 1, root[0].clone()),
                MultiPoly::constant(q, 1, root[1].clone()),
                MultiPoly::var(q, 1, 0),
            ];
            g.substitute(&s)?.to_unipoly()
        };
        let g = sub(&cf)?.gcd(&sub(h)?);
        if g.deg() == 1 {
            let z = -g.coeff(0) / g.coeff(1);
            let p = ProjPoint::new(q, vec![root[0].clone(), root[1].clone(), z])?;
            if c.contains(&p) {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}
