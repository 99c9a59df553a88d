//! Genus-2 curves y² = d·f(x) as binary sextics, Igusa–Clebsch invariants
//! and isomorphism testing up to quadratic twist.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{linalg, BinaryForm, Field, Mobius};

/// y² = d·f(x, z) with f a square-free sextic (a quintic gets a root at ∞).
#[derive(Clone, Debug)]
pub struct HypCurve<F: Field> {
    pub f: BinaryForm<F>,
    pub twist: Option<F::Elem>,
}

impl<F: Field> HypCurve<F> {
    pub fn new(f: BinaryForm<F>) -> Result<Self> {
        let f = match f.degree() {
            5 => f.with_degree(6)?,
            6 => f,
            d => return Err(Error::InvalidInput(format!("genus-2 model needs degree 5 or 6, got {d}"))),
        };
        if !f.is_squarefree() {
            return Err(Error::NotSquareFree);
        }
        Ok(HypCurve { f, twist: None })
    }

    pub fn with_twist(mut self, d: F::Elem) -> Result<Self> {
        if self.f.field.is_zero(&d) {
            return Err(Error::InvalidInput("zero twist".into()));
        }
        self.twist = Some(d);
        Ok(self)
    }

    pub fn igusa_clebsch(&self) -> Result<ICInvariants<F>> {
        igusa_clebsch(&self.f)
    }

    pub fn to_json(&self) -> Value {
        let fld = &self.f.field;
        json!({
            "f": self.f.coeffs().iter().map(|c| fld.to_json(c)).collect::<Vec<_>>(),
            "twist": self.twist.as_ref().map(|d| fld.to_json(d)),
        })
    }
}

/// Igusa–Clebsch invariants (I2, I4, I6, I10), compared as a point of
/// weighted projective space with weights (1, 2, 3, 5).
#[derive(Clone, Debug)]
pub struct ICInvariants<F: Field> {
    pub field: F,
    pub i: [F::Elem; 4],
}

const WEIGHTS: [u64; 4] = [1, 2, 3, 5];

impl<F: Field> ICInvariants<F> {
    pub fn i2(&self) -> &F::Elem {
        &self.i[0]
    }
    pub fn i4(&self) -> &F::Elem {
        &self.i[1]
    }
    pub fn i6(&self) -> &F::Elem {
        &self.i[2]
    }
    pub fn i10(&self) -> &F::Elem {
        &self.i[3]
    }

    /// ∃λ ≠ 0 with I_{2k} = λ^{2k} J_{2k}, tested by cross multiplication.
    pub fn weighted_eq(&self, o: &Self) -> bool {
        let f = &self.field;
        for a in 0..4 {
            if f.is_zero(&self.i[a]) != f.is_zero(&o.i[a]) {
                return false;
            }
            for b in a + 1..4 {
                let l = f.mul(&f.pow(&self.i[a], WEIGHTS[b]), &f.pow(&o.i[b], WEIGHTS[a]));
                let r = f.mul(&f.pow(&o.i[a], WEIGHTS[b]), &f.pow(&self.i[b], WEIGHTS[a]));
                if !f.eq_elem(&l, &r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "I2": f.to_json(&self.i[0]),
            "I4": f.to_json(&self.i[1]),
            "I6": f.to_json(&self.i[2]),
            "I10": f.to_json(&self.i[3]),
        })
    }
}

/// Clebsch invariants A, B, C, D of a sextic from transvectants, then the
/// standard conversion to Igusa–Clebsch invariants.
pub fn igusa_clebsch<F: Field>(f: &BinaryForm<F>) -> Result<ICInvariants<F>> {
    let f = match f.degree() {
        5 => f.with_degree(6)?,
        6 => f.clone(),
        d => return Err(Error::InvalidInput(format!("sextic expected, got degree {d}"))),
    };
    if !f.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    let fld = f.field.clone();
    let c0 = |form: &BinaryForm<F>| form.coeff(0);
    let i = f.transvectant(&f, 4)?;
    let delta = i.transvectant(&i, 2)?;
    let y1 = f.transvectant(&i, 4)?;
    let y2 = i.transvectant(&y1, 2)?;
    let y3 = i.transvectant(&y2, 2)?;
    let a = c0(&f.transvectant(&f, 6)?);
    let b = c0(&i.transvectant(&i, 4)?);
    let c = c0(&i.transvectant(&delta, 4)?);
    let d = c0(&y3.transvectant(&y1, 2)?);

    let k = |n: i64| fld.from_int(n);
    let m = |x: &F::Elem, y: &F::Elem| fld.mul(x, y);
    let a2 = m(&a, &a);
    let a3 = m(&a2, &a);
    let a5 = m(&a3, &a2);
    let lin = |terms: &[(i64, F::Elem)]| {
        terms.iter().fold(fld.zero(), |acc, (n, t)| fld.add(&acc, &m(&k(*n), t)))
    };
    let i2 = lin(&[(-120, a.clone())]);
    let i4 = lin(&[(-720, a2.clone()), (6750, b.clone())]);
    let i6 = lin(&[(8640, a3.clone()), (-108000, m(&a, &b)), (202500, c.clone())]);
    let i10 = lin(&[
        (-62208, a5),
        (972000, m(&a3, &b)),
        (1620000, m(&a2, &c)),
        (-3037500, m(&a, &m(&b, &b))),
        (-6075000, m(&b, &c)),
        (-4556250, d),
    ]);
    Ok(ICInvariants { field: fld, i: [i2, i4, i6, i10] })
}

/// Same geometric curve over the algebraic closure, detected by invariants.
/// Curves with extra automorphisms are not distinguished further.
pub fn same_curve_up_to_twist<F: Field>(f1: &BinaryForm<F>, f2: &BinaryForm<F>) -> Result<bool> {
    Ok(igusa_clebsch(f1)?.weighted_eq(&igusa_clebsch(f2)?))
}

/// f∘m⁻¹: roots move forward under m.
pub fn mobius_apply<F: Field>(f: &BinaryForm<F>, m: &Mobius<F::Elem>) -> Result<BinaryForm<F>> {
    let fld = &f.field;
    let mm: linalg::Matrix<F::Elem> = m.iter().map(|r| r.to_vec()).collect();
    if fld.is_zero(&linalg::det(fld, &mm)) {
        return Err(Error::InvalidInput("singular Möbius matrix".into()));
    }
    f.mobius_apply(m)
}
