//! Exact coefficient arithmetic and polynomial algebra.

pub mod binform;
pub mod extfield;
pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod roots;
pub mod upoly;

pub use binform::{mobius_compose, mobius_point, p1_equal, BinaryForm, Mobius};
pub use extfield::{NumberField, RatFunc, RatFuncField};
pub use field::{
    format_rational, parse_rational, rat, rat_int, Field, PrimeField, Rationals, Scalar, SqrtField,
};
pub use mpoly::MultiPoly;
pub use roots::{form_fp_roots, form_rational_roots, rational_roots, RootField};
pub use upoly::UniPoly;

use num_rational::BigRational;

/// Resultant of two univariate polynomials.
pub fn resultant<F: Field>(p: &UniPoly<F>, q: &UniPoly<F>) -> crate::Result<F::Elem> {
    p.resultant(q)
}

/// Discriminant of a binary form (zero iff a repeated root on P¹).
pub fn discriminant<F: Field>(f: &BinaryForm<F>) -> crate::Result<F::Elem> {
    f.discriminant()
}

pub fn squarefree_part<F: Field>(f: &BinaryForm<F>) -> BinaryForm<F> {
    f.squarefree_part()
}

/// Roots in F_p with multiplicities.
pub fn fp_roots(f: &UniPoly<PrimeField>) -> Vec<(u64, usize)> {
    f.fp_roots()
}

/// Rational polynomial from integer coefficients, lowest degree first.
pub fn qpoly(cs: &[i64]) -> UniPoly<Rationals> {
    UniPoly::from_ints(Rationals, cs)
}

/// Rational binary form of the given degree from integer coefficients.
pub fn qform(degree: usize, cs: &[i64]) -> BinaryForm<Rationals> {
    BinaryForm::from_ints(Rationals, degree, cs).expect("coefficients fit the degree")
}

pub fn qvec(cs: &[i64]) -> Vec<BigRational> {
    cs.iter().map(|&c| rat_int(c)).collect()
}
