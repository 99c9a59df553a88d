//! The determinantal model of the Igusa quartic as the system of quadrics
//! through five base points of P³: the Gram matrix 𝒜(x), the map ψ onto the
//! Segre cubic, Cayley octads from two extra points, plane-section tangency
//! points, and the genus-2 curve over the twisted cubic through six of them.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{linalg, BinaryForm, Field, MultiPoly, PrimeField, Rationals, RootField};
use crate::genus2::{self, HypCurve, ICInvariants};
use crate::igusa::{self, QuarticThreefold};
use crate::kummer::{self, KummerExtract};
use crate::par;
use crate::projgeom::{self, Conic, ConicPoints, LinearSubspace, ProjPoint};

/// Monomials y_i y_j (i < j) in the order matching x0..x5.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn check_len<E>(v: &[E], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvalidInput(format!("{what} needs {n} coordinates, got {}", v.len())));
    }
    Ok(())
}

fn nonzero<F: Field>(f: &F, v: &[F::Elem], what: &str) -> Result<()> {
    if v.iter().all(|c| f.is_zero(c)) {
        return Err(Error::InvalidInput(format!("{what} is the zero vector")));
    }
    Ok(())
}

fn proportional<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    linalg::rank(f, &vec![a.to_vec(), b.to_vec()]) <= 1
}

fn same_point<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    match (ProjPoint::new(f.clone(), a.to_vec()), ProjPoint::new(f.clone(), b.to_vec())) {
        (Ok(p), Ok(q)) => p.proj_eq(&q),
        _ => false,
    }
}

/// The zero-diagonal symmetric matrix 𝒜(x) with x5 = −(x0 + ... + x4).
pub fn gram_matrix<F: Field>(f: &F, x: &[F::Elem]) -> Result<linalg::Matrix<F::Elem>> {
    check_len(x, 5, "system point")?;
    nonzero(f, x, "system point")?;
    let x5 = x.iter().fold(f.zero(), |acc, c| f.sub(&acc, c));
    let z = f.zero();
    Ok(vec![
        vec![z.clone(), x[0].clone(), x[1].clone(), x[2].clone()],
        vec![x[0].clone(), z.clone(), x[3].clone(), x[4].clone()],
        vec![x[1].clone(), x[3].clone(), z.clone(), x5.clone()],
        vec![x[2].clone(), x[4].clone(), x5, z],
    ])
}

/// det 𝒜 as a quartic form in x0..x4.
pub fn symmetroid_form<F: Field>(f: &F) -> MultiPoly<F> {
    projgeom::poly_det(&igusa::symmetroid_matrix(f)).expect("4x4 matrix")
}

/// The Segre cubic in the coordinates of ψ.
pub fn segre_cubic<F: Field>(f: &F) -> MultiPoly<F> {
    let terms: [([u32; 5], i64); 6] = [
        ([1, 0, 1, 1, 0], 1),
        ([0, 1, 1, 1, 0], -1),
        ([1, 1, 0, 0, 1], -1),
        ([0, 1, 1, 0, 1], 1),
        ([0, 1, 0, 1, 1], 1),
        ([0, 0, 1, 1, 1], -1),
    ];
    MultiPoly::from_terms(f.clone(), 5, terms.iter().map(|(e, c)| (e.to_vec(), f.from_int(*c))))
}

/// The five quadrics y0y1 − y2y3, y0y2 − y2y3, y0y3 − y2y3, y1y2 − y2y3, y1y3 − y2y3.
pub fn psi_quadrics<F: Field>(f: &F) -> Vec<MultiPoly<F>> {
    let m = |i: usize, j: usize| {
        let mut e = vec![0u32; 4];
        e[i] += 1;
        e[j] += 1;
        MultiPoly::monomial(f.clone(), e, f.one())
    };
    let last = m(2, 3);
    PAIRS[..5].iter().map(|&(i, j)| &m(i, j) - &last).collect()
}

fn psi_unchecked<F: Field>(f: &F, y: &[F::Elem]) -> Vec<F::Elem> {
    let t = f.mul(&y[2], &y[3]);
    PAIRS[..5].iter().map(|&(i, j)| f.sub(&f.mul(&y[i], &y[j]), &t)).collect()
}

/// ψ(y): the hyperplane of quadrics through y, as a point of the dual space.
pub fn psi<F: Field>(f: &F, y: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_len(y, 4, "point of P³")?;
    nonzero(f, y, "point of P³")?;
    let s = psi_unchecked(f, y);
    if s.iter().all(|c| f.is_zero(c)) {
        return Err(Error::IndeterminacyPoint);
    }
    Ok(s)
}

/// Value at y of the quadric with system coordinates x, i.e. x·ψ(y).
pub fn quadric_value<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    linalg::dot(f, x, &psi_unchecked(f, y))
}

/// The member of the system singular at y (a cone with vertex y).
pub fn vertex_quadric<F: Field>(f: &F, y: &[F::Elem]) -> Result<Vec<F::Elem>> {
    psi(f, y)?;
    // 𝒜(x)·y = 0 is linear in x: column i is 𝒜(e_i)·y
    let cols: Vec<Vec<F::Elem>> = (0..5)
        .map(|i| {
            let e: Vec<F::Elem> = (0..5).map(|j| if i == j { f.one() } else { f.zero() }).collect();
            linalg::mat_vec(f, &gram_matrix(f, &e).expect("unit vector"), y)
        })
        .collect();
    let ns = linalg::nullspace(f, &linalg::transpose(&cols), 5);
    if ns.len() != 1 {
        return Err(Error::NotGeneralPosition(format!("{} cones with vertex at the point", ns.len())));
    }
    Ok(ns.into_iter().next().expect("one vector"))
}

/// The ten quadratic monomials of y, ordered y_i y_j with i ≤ j.
fn quadric_monomials<F: Field>(f: &F, y: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![];
    for i in 0..4 {
        for j in i..4 {
            out.push(f.mul(&y[i], &y[j]));
        }
    }
    out
}

/// Number of independent conditions the points impose on quadrics of P³.
pub fn quadric_conditions<F: Field>(f: &F, pts: &[Vec<F::Elem>]) -> usize {
    let rows: Vec<Vec<F::Elem>> = pts.iter().map(|p| quadric_monomials(f, p)).collect();
    linalg::rank(f, &rows)
}

/// True when some four of the points are coplanar.
pub fn has_coplanar_four<F: Field>(f: &F, pts: &[Vec<F::Elem>]) -> bool {
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let m = vec![pts[a].clone(), pts[b].clone(), pts[c].clone(), pts[d].clone()];
                    if f.is_zero(&linalg::det(f, &m)) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Quadrics through p1..p5 and any extra points, in system coordinates.
#[derive(Clone, Debug)]
pub struct QuadricNet<F: Field> {
    pub base: Vec<Vec<F::Elem>>,
    pub system: LinearSubspace<F>,
}

impl<F: Field> QuadricNet<F> {
    pub fn standard(f: &F) -> Self {
        let basis = (0..5)
            .map(|i| (0..5).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        QuadricNet {
            base: igusa::base_points(f),
            system: LinearSubspace::from_basis(f.clone(), 5, basis).expect("unit vectors"),
        }
    }

    pub fn through(f: &F, extra: &[Vec<F::Elem>]) -> Result<Self> {
        let eqs: Vec<Vec<F::Elem>> = extra.iter().map(|p| psi(f, p)).collect::<Result<_>>()?;
        let mut base = igusa::base_points(f);
        base.extend(extra.iter().cloned());
        if eqs.is_empty() {
            return Ok(Self::standard(f));
        }
        Ok(QuadricNet { base, system: LinearSubspace::from_equations(f.clone(), 5, eqs)? })
    }

    pub fn field(&self) -> &F {
        &self.system.field
    }

    /// The basis members as quadrics in y0..y3.
    pub fn quadrics(&self) -> Vec<MultiPoly<F>> {
        let f = self.field();
        let q = psi_quadrics(f);
        self.system
            .basis()
            .iter()
            .map(|x| {
                q.iter()
                    .zip(x)
                    .fold(MultiPoly::zero(f.clone(), 4), |acc, (qi, c)| &acc + &qi.scale(c))
            })
            .collect()
    }

    pub fn gram_matrices(&self) -> Vec<linalg::Matrix<F::Elem>> {
        self.system
            .basis()
            .iter()
            .map(|x| gram_matrix(self.field(), x).expect("basis vectors are nonzero"))
            .collect()
    }

    pub fn vanishes_at(&self, y: &[F::Elem]) -> bool {
        let f = self.field();
        self.system.basis().iter().all(|x| f.is_zero(&quadric_value(f, x, y)))
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        json!({
            "base_points": self.base.iter().map(|p| p.iter().map(|c| f.to_json(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "system": self.system.to_json(),
        })
    }
}

/// Third point of the Segre cubic on the line through s6 and s7.
pub fn dual_third_point<F: Field>(f: &F, s6: &[F::Elem], s7: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let g = line_restriction(f, &segre_cubic(f), s6, s7);
    if !f.is_zero(&g.coeff(0)) || !f.is_zero(&g.coeff(3)) {
        return Err(Error::InvalidInput("line endpoints are not on the cubic".into()));
    }
    // g = λμ(c21 λ + c12 μ) with λ = x, μ = z
    let (c21, c12) = (g.coeff(2), g.coeff(1));
    if f.is_zero(&c21) && f.is_zero(&c12) {
        return Err(Error::DegenerateLine);
    }
    if f.is_zero(&c21) || f.is_zero(&c12) {
        return Err(Error::NotGeneralPosition("line is tangent to the cubic at ψ(p6) or ψ(p7)".into()));
    }
    Ok(s6
        .iter()
        .zip(s7)
        .map(|(a, b)| f.sub(&f.mul(&c12, a), &f.mul(&c21, b)))
        .collect())
}

/// g(x, z) = form(x·u + z·v) as a binary form.
fn line_restriction<F: Field>(f: &F, form: &MultiPoly<F>, u: &[F::Elem], v: &[F::Elem]) -> BinaryForm<F> {
    let subs: Vec<MultiPoly<F>> = u
        .iter()
        .zip(v)
        .map(|(a, b)| MultiPoly::linear_form(f.clone(), &[a.clone(), b.clone()]))
        .collect();
    let r = form.substitute(&subs).expect("matching variable count");
    let d = form.total_degree().unwrap_or(0) as usize;
    let co = (0..=d).map(|i| r.coeff(&[i as u32, (d - i) as u32])).collect();
    BinaryForm::new(f.clone(), d, co).expect("degree matches")
}

/// Inverse of ψ on the Segre cubic away from its ten nodes.
pub fn psi_inverse<F: Field>(f: &F, s: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_len(s, 5, "point of the dual space")?;
    nonzero(f, s, "point of the dual space")?;
    // with m = y2y3 the monomials are S_k + m; the two relations
    // (y0y1)(y2y3) = (y0y2)(y1y3) = (y0y3)(y1y2) are linear in m
    let r1 = (f.sub(&f.sub(&s[0], &s[1]), &s[4]), f.mul(&s[1], &s[4]));
    let r2 = (f.sub(&f.sub(&s[0], &s[2]), &s[3]), f.mul(&s[2], &s[3]));
    let m = [&r1, &r2]
        .iter()
        .find(|(a, _)| !f.is_zero(a))
        .map(|(a, b)| f.div(b, a).expect("nonzero"))
        .ok_or_else(|| Error::NotGeneralPosition("point is a node of the Segre cubic".into()))?;
    for (a, b) in [&r1, &r2] {
        if !f.eq_elem(&f.mul(a, &m), b) {
            return Err(Error::InvalidInput("point is not on the Segre cubic".into()));
        }
    }
    let mut mono: Vec<F::Elem> = s.iter().map(|c| f.add(c, &m)).collect();
    mono.push(m);
    let pair = |i: usize, j: usize| {
        let k = PAIRS.iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).expect("pair");
        mono[k].clone()
    };
    // a triple with all pairwise products nonzero fixes the scale y_i y_j y_k
    let triple = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].into_iter().find(|t| {
        !f.is_zero(&pair(t[0], t[1])) && !f.is_zero(&pair(t[0], t[2])) && !f.is_zero(&pair(t[1], t[2]))
    });
    let [i, j, k] = triple.ok_or_else(|| Error::NotGeneralPosition("fibre of ψ is a line".into()))?;
    let y: Vec<F::Elem> = (0..4)
        .map(|l| {
            if l == i {
                f.mul(&pair(i, j), &pair(i, k))
            } else if l == j {
                f.mul(&pair(i, j), &pair(j, k))
            } else if l == k {
                f.mul(&pair(i, k), &pair(j, k))
            } else {
                f.mul(&pair(l, i), &pair(j, k))
            }
        })
        .collect();
    let back = psi(f, &y)?;
    if !proportional(f, &back, s) {
        return Err(Error::StructuralAssertionFailed("ψ does not return the input point".into()));
    }
    Ok(y)
}

/// The eighth base point of the net of quadrics through p1..p7.
pub fn third_point<F: Field>(f: &F, p6: &[F::Elem], p7: &[F::Elem]) -> Result<Vec<F::Elem>> {
    Ok(octad_points(f, p6, p7)?.0)
}

fn octad_points<F: Field>(f: &F, p6: &[F::Elem], p7: &[F::Elem]) -> Result<(Vec<F::Elem>, [Vec<F::Elem>; 3])> {
    let s6 = psi(f, p6)?;
    let s7 = psi(f, p7)?;
    if proportional(f, &s6, &s7) {
        return Err(Error::NotGeneralPosition("ψ(p6) = ψ(p7)".into()));
    }
    let mut seven = igusa::base_points(f);
    seven.push(p6.to_vec());
    seven.push(p7.to_vec());
    if quadric_conditions(f, &seven) != 7 {
        return Err(Error::NotGeneralPosition("seven points impose dependent conditions on quadrics".into()));
    }
    let s8 = dual_third_point(f, &s6, &s7)?;
    let p8 = psi_inverse(f, &s8)?;
    // base-locus confirmation: the net vanishes at p8, p8 is new, and the
    // eight points impose only seven conditions
    let net = linalg::nullspace(f, &vec![s6.clone(), s7.clone()], 5);
    let on_net = net.iter().all(|x| f.is_zero(&quadric_value(f, x, &p8)));
    let new = seven.iter().all(|p| !same_point(f, p, &p8));
    seven.push(p8.clone());
    if !on_net || !new || quadric_conditions(f, &seven) != 7 {
        return Err(Error::NotGeneralPosition("base locus of the net disagrees with the dual third point".into()));
    }
    let p8 = ProjPoint::new(f.clone(), p8)?.normalized().coords().to_vec();
    let s8 = psi(f, &p8)?;
    Ok((p8, [s6, s7, s8]))
}

/// Biduality data at a point s of the Segre cubic: c = ∇cubic(s) lies on the
/// symmetroid and its tangent hyperplane is s^⊥.
#[derive(Clone, Debug)]
pub struct TangencyPoint<F: Field> {
    pub s: Vec<F::Elem>,
    /// `None` when s is a node of the cubic.
    pub c: Option<Vec<F::Elem>>,
    pub on_symmetroid: bool,
    pub tangent: bool,
}

impl<F: Field> TangencyPoint<F> {
    fn at(f: &F, s: &[F::Elem], plane: &[Vec<F::Elem>]) -> Self {
        let c: Vec<F::Elem> = segre_cubic(f).gradient().iter().map(|g| g.eval(s)).collect();
        if c.iter().all(|v| f.is_zero(v)) {
            return TangencyPoint { s: s.to_vec(), c: None, on_symmetroid: false, tangent: false };
        }
        let det = symmetroid_form(f);
        let on_symmetroid = f.is_zero(&det.eval(&c));
        let grad: Vec<F::Elem> = det.gradient().iter().map(|g| g.eval(&c)).collect();
        let tangent = grad.iter().any(|v| !f.is_zero(v))
            && proportional(f, &grad, s)
            && plane.iter().all(|w| f.is_zero(&linalg::dot(f, &grad, w)));
        TangencyPoint { s: s.to_vec(), c: Some(c), on_symmetroid, tangent }
    }

    pub fn passed(&self) -> bool {
        self.on_symmetroid && self.tangent
    }

    pub fn to_json(&self, f: &F) -> Value {
        let v = |x: &[F::Elem]| x.iter().map(|c| f.to_json(c)).collect::<Vec<_>>();
        json!({
            "s": v(&self.s),
            "c": self.c.as_ref().map(|c| v(c)),
            "on_symmetroid": self.on_symmetroid,
            "tangent": self.tangent,
        })
    }
}

#[derive(Clone, Debug)]
pub struct OctadChecks {
    pub net_vanishes: bool,
    pub containment: bool,
    pub tangency: bool,
    pub general_position: bool,
}

impl OctadChecks {
    pub fn all_passed(&self) -> bool {
        self.net_vanishes && self.containment && self.tangency
    }
}

/// Eight base points of a net of quadrics, with the plane quartic D cut on
/// the net by the symmetroid.
#[derive(Clone, Debug)]
pub struct CayleyOctad<F: Field> {
    pub field: F,
    /// p1..p8; p6, p7 as given and p8 normalized.
    pub points: Vec<Vec<F::Elem>>,
    /// ψ(p6), ψ(p7), ψ(p8).
    pub dual: [Vec<F::Elem>; 3],
    pub net: QuadricNet<F>,
    /// det 𝒜 restricted to the net basis, a ternary quartic.
    pub d: MultiPoly<F>,
    pub tangency: TangencyPoint<F>,
    pub checks: OctadChecks,
}

pub fn octad_quartic<F: Field>(f: &F, p6: &[F::Elem], p7: &[F::Elem]) -> Result<CayleyOctad<F>> {
    let (p8, dual) = octad_points(f, p6, p7)?;
    let net = QuadricNet::through(f, &[p6.to_vec(), p7.to_vec()])?;
    let mut points = igusa::base_points(f);
    points.extend([p6.to_vec(), p7.to_vec(), p8]);
    let l8 = LinearSubspace::from_equations(f.clone(), 5, vec![dual[2].clone()])?;
    let d = projgeom::restrict_form(&symmetroid_form(f), &net.system)?;
    let tangency = TangencyPoint::at(f, &dual[2], net.system.basis());
    let checks = OctadChecks {
        net_vanishes: points.iter().all(|p| net.vanishes_at(p)),
        containment: l8.contains_subspace(&net.system),
        tangency: tangency.passed(),
        general_position: !has_coplanar_four(f, &points),
    };
    Ok(CayleyOctad { field: f.clone(), points, dual, net, d, tangency, checks })
}

/// Coefficients of a ternary quartic in the order v0⁴, v0³v1, v0³v2, v0²v1², ..., v2⁴.
pub fn quartic_coefficients<F: Field>(q: &MultiPoly<F>) -> Vec<F::Elem> {
    let mut out = vec![];
    for a in (0..=4u32).rev() {
        for b in (0..=4 - a).rev() {
            out.push(q.coeff(&[a, b, 4 - a - b]));
        }
    }
    out
}

impl<F: Field> CayleyOctad<F> {
    pub fn p8(&self) -> &[F::Elem] {
        &self.points[7]
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let v = |x: &[F::Elem]| x.iter().map(|c| f.to_json(c)).collect::<Vec<_>>();
        json!({
            "points": self.points.iter().map(|p| v(p)).collect::<Vec<_>>(),
            "p8": v(self.p8()),
            "psi": self.dual.iter().map(|s| v(s)).collect::<Vec<_>>(),
            "net": self.net.system.to_json(),
            "D": v(&quartic_coefficients(&self.d)),
            "tangency_point": self.tangency.to_json(f),
            "checks": {
                "net_vanishes": self.checks.net_vanishes,
                "containment": self.checks.containment,
                "tangency": self.checks.tangency,
                "general_position": self.checks.general_position,
            },
        })
    }
}

/// Count of F_p-rational singular points of a ternary form over Q reduced mod p,
/// or `None` when the reduction is undefined or zero.
pub fn singular_points_mod_p(q: &MultiPoly<Rationals>, p: u64) -> Option<usize> {
    let fp = PrimeField::new(p).ok()?;
    let mut bad = false;
    let r = q.map_coeffs(fp, |c| {
        fp.from_rational(c).unwrap_or_else(|| {
            bad = true;
            0
        })
    });
    if bad || r.is_zero() {
        return None;
    }
    let grad = r.gradient();
    let sing = |v: &[u64]| grad.iter().all(|g| g.eval(v) == 0);
    let mut n = 0;
    for a in 0..p {
        for b in 0..p {
            n += sing(&[1, a, b]) as usize;
        }
        n += sing(&[0, 1, a]) as usize;
    }
    n += sing(&[0, 0, 1]) as usize;
    Some(n)
}

/// Smoothness flag for D: no singular point over F_p at any prime of good
/// coefficient reduction among `primes`. Not a certificate.
pub fn smooth_flag(q: &MultiPoly<Rationals>, primes: &[u64]) -> bool {
    primes.iter().filter_map(|&p| singular_points_mod_p(q, p)).all(|n| n == 0)
}

pub const SMOOTHNESS_PRIMES: [u64; 3] = [101, 103, 107];

/// Line W^∨ ∩ Segre cubic for a plane W of the system, with the tangency
/// point of each rational intersection.
#[derive(Clone, Debug)]
pub struct PlaneSectionPryms<F: Field> {
    pub plane: LinearSubspace<F>,
    pub dual_line: LinearSubspace<F>,
    /// The cubic restricted to the dual line, in its basis.
    pub cubic: BinaryForm<F>,
    pub points: Vec<TangencyPoint<F>>,
    /// Factor of the cubic with no rational roots, if any.
    pub residual: Option<BinaryForm<F>>,
}

impl<F: Field> PlaneSectionPryms<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.plane.field;
        json!({
            "dual_line": self.dual_line.to_json(),
            "cubic": self.cubic.coeffs().iter().map(|c| f.to_json(c)).collect::<Vec<_>>(),
            "points": self.points.iter().map(|t| t.to_json(f)).collect::<Vec<_>>(),
            "residual": self.residual.as_ref().map(|r| r.coeffs().iter().map(|c| f.to_json(c)).collect::<Vec<_>>()),
        })
    }
}

pub fn three_pryms_of_plane_section<F: RootField>(f: &F, w: &LinearSubspace<F>) -> Result<PlaneSectionPryms<F>> {
    if w.ambient() != 5 || w.dim() != 3 {
        return Err(Error::InvalidSubspace("need a plane in the system P⁴".into()));
    }
    let dual = LinearSubspace::from_equations(f.clone(), 5, w.basis().to_vec())?;
    let (u, v) = (&dual.basis()[0], &dual.basis()[1]);
    let cubic = line_restriction(f, &segre_cubic(f), u, v);
    if cubic.is_zero() {
        return Err(Error::DegenerateLine);
    }
    let roots = f.form_roots(&cubic);
    if roots.iter().any(|(_, m)| *m > 1) {
        return Err(Error::NonReducedDual);
    }
    let mut linear = BinaryForm::one(f.clone());
    let mut points = vec![];
    for ([a, b], _) in &roots {
        linear = linear.mul(&BinaryForm::vanishing_at(f.clone(), a, b));
        let s: Vec<F::Elem> = u.iter().zip(v).map(|(x, y)| f.add(&f.mul(a, x), &f.mul(b, y))).collect();
        points.push(TangencyPoint::at(f, &s, w.basis()));
    }
    let residual = if linear.degree() < 3 {
        let r = cubic.exact_div(&linear)?;
        if !r.is_squarefree() {
            return Err(Error::NonReducedDual);
        }
        Some(r)
    } else {
        None
    };
    Ok(PlaneSectionPryms { plane: w.clone(), dual_line: dual, cubic, points, residual })
}

/// The twisted cubic through p1..p5, p8 and the genus-2 curve branched over
/// the parameters of those six points.
#[derive(Clone, Debug)]
pub struct RncGenus2<F: Field> {
    /// Parameters (s : t) of p1..p5, p8 in that order.
    pub params: Vec<[F::Elem; 2]>,
    /// Coordinate forms φ_j(s, t) of degree 3.
    pub map: Vec<BinaryForm<F>>,
    pub curve: HypCurve<F>,
}

impl<F: Field> RncGenus2<F> {
    pub fn invariants(&self) -> Result<ICInvariants<F>> {
        self.curve.igusa_clebsch()
    }

    pub fn to_json(&self) -> Result<Value> {
        let f = &self.curve.f.field;
        Ok(json!({
            "params": self.params.iter().map(|[s, t]| vec![f.to_json(s), f.to_json(t)]).collect::<Vec<_>>(),
            "sextic": self.curve.to_json(),
            "ic_invariants": self.invariants()?.to_json(),
        }))
    }
}

fn eval_map<F: Field>(map: &[BinaryForm<F>], s: &F::Elem, t: &F::Elem) -> Vec<F::Elem> {
    map.iter().map(|q| q.eval(s, t)).collect()
}

pub fn rnc_genus2<F: Field>(octad: &CayleyOctad<F>) -> Result<RncGenus2<F>> {
    let f = &octad.field;
    let p8 = octad.p8().to_vec();
    let mut six: Vec<Vec<F::Elem>> = octad.points[..5].to_vec();
    six.push(p8.clone());
    if has_coplanar_four(f, &six) {
        return Err(Error::NotGeneralPosition("four of p1..p5, p8 are coplanar".into()));
    }
    // project from p8 onto the conic through the images of p1..p5
    let proj = linalg::nullspace(f, &vec![p8.clone()], 4);
    let img: Vec<Vec<F::Elem>> = six[..5].iter().map(|p| linalg::mat_vec(f, &proj, p)).collect();
    let rows: Vec<Vec<F::Elem>> = img
        .iter()
        .map(|u| {
            vec![
                f.mul(&u[0], &u[0]),
                f.mul(&u[1], &u[1]),
                f.mul(&u[2], &u[2]),
                f.mul(&u[0], &u[1]),
                f.mul(&u[0], &u[2]),
                f.mul(&u[1], &u[2]),
            ]
        })
        .collect();
    let ns = linalg::nullspace(f, &rows, 6);
    if ns.len() != 1 {
        return Err(Error::NotGeneralPosition("no unique conic through the projected points".into()));
    }
    let c = &ns[0];
    let half = |x: &F::Elem| f.div(x, &f.from_int(2)).expect("odd characteristic");
    let gram = [
        [c[0].clone(), half(&c[3]), half(&c[4])],
        [half(&c[3]), c[1].clone(), half(&c[5])],
        [half(&c[4]), half(&c[5]), c[2].clone()],
    ];
    let conic = Conic::new(f.clone(), gram)?;
    if !conic.is_nonsingular() {
        return Err(Error::NotGeneralPosition("projected conic is singular".into()));
    }
    let param = projgeom::conic_parametrize(&conic, &ProjPoint::new(f.clone(), img[0].clone())?)?;
    let mut params: Vec<[F::Elem; 2]> = img
        .iter()
        .map(|u| param.inverse(&ProjPoint::new(f.clone(), u.clone())?))
        .collect::<Result<_>>()?;
    // φ_j = Σ_k C[k][j] s^k t^(3-k); unknown C[k][j] sits at index 4k + j
    let mut eqs = vec![];
    for (p, [s, t]) in six[..5].iter().zip(&params) {
        let ann = linalg::nullspace(f, &vec![p.clone()], 4);
        let mons: Vec<F::Elem> = (0..4).map(|k| f.mul(&f.pow(s, k as u64), &f.pow(t, 3 - k as u64))).collect();
        for a in &ann {
            let mut row = vec![f.zero(); 16];
            for k in 0..4 {
                for j in 0..4 {
                    row[4 * k + j] = f.mul(&a[j], &mons[k]);
                }
            }
            eqs.push(row);
        }
    }
    let sol = linalg::nullspace(f, &eqs, 16);
    if sol.len() != 1 {
        return Err(Error::NotGeneralPosition(format!("{} twisted cubics through the five parameters", sol.len())));
    }
    let map: Vec<BinaryForm<F>> = (0..4)
        .map(|j| BinaryForm::new(f.clone(), 3, (0..4).map(|k| sol[0][4 * k + j].clone()).collect()))
        .collect::<Result<_>>()?;
    for (p, [s, t]) in six[..5].iter().zip(&params) {
        if !same_point(f, &eval_map(&map, s, t), p) {
            return Err(Error::StructuralAssertionFailed("twisted cubic misses a base point".into()));
        }
    }
    // the parameter of p8: common root of the minors φ_j p8_k − φ_k p8_j
    let mut g = BinaryForm::zero(f.clone(), 3);
    for j in 0..4 {
        for k in j + 1..4 {
            let minor = map[j].scale(&p8[k]).sub(&map[k].scale(&p8[j]))?;
            if !minor.is_zero() {
                g = if g.is_zero() { minor } else { g.gcd(&minor) };
            }
        }
    }
    if g.degree() != 1 || g.is_zero() {
        return Err(Error::NotGeneralPosition("elimination for the parameter of p8 is inconsistent".into()));
    }
    let t8 = [f.neg(&g.coeff(0)), g.coeff(1)];
    if !same_point(f, &eval_map(&map, &t8[0], &t8[1]), &p8) {
        return Err(Error::StructuralAssertionFailed("twisted cubic misses p8".into()));
    }
    params.push(t8);
    let sextic = params
        .iter()
        .fold(BinaryForm::one(f.clone()), |acc, [s, t]| acc.mul(&BinaryForm::vanishing_at(f.clone(), s, t)));
    let curve = HypCurve::new(sextic).map_err(|e| match e {
        Error::NotSquareFree => Error::NotGeneralPosition("two of the six parameters coincide".into()),
        e => e,
    })?;
    Ok(RncGenus2 { params, map, curve })
}

/// The second pipeline: the Kummer section of the symmetroid at the tangency
/// point of p8, whose distinguished node gives the same genus-2 curve.
#[derive(Clone, Debug)]
pub struct OctadCrossCheck<F: Field> {
    pub kummer: KummerExtract<F>,
    pub rnc: ICInvariants<F>,
    pub via_kummer: ICInvariants<F>,
    pub agree: bool,
}

pub fn cross_check<F: ConicPoints>(octad: &CayleyOctad<F>, rnc: &RncGenus2<F>, bound: u64) -> Result<OctadCrossCheck<F>> {
    let f = &octad.field;
    let c = octad
        .tangency
        .c
        .clone()
        .ok_or_else(|| Error::NotGeneralPosition("ψ(p8) is a node of the Segre cubic".into()))?;
    let sym = QuarticThreefold::symmetroid(f.clone());
    let kummer = kummer::extract(&sym, &c, bound)?;
    let via_kummer = genus2::igusa_clebsch(&kummer.branch)?;
    let rnc_inv = rnc.invariants()?;
    let agree = rnc_inv.weighted_eq(&via_kummer);
    Ok(OctadCrossCheck { kummer, rnc: rnc_inv, via_kummer, agree })
}

/// Octads for many pairs, in input order.
pub fn octad_batch<F: Field>(f: &F, pairs: &[(Vec<F::Elem>, Vec<F::Elem>)]) -> Vec<Result<CayleyOctad<F>>> {
    par::map_slice(pairs, |(a, b)| octad_quartic(f, a, b))
}

/// Everything the CLI reports for `octad complete` over Q.
pub fn complete_json(octad: &CayleyOctad<Rationals>, bound: u64) -> (Value, bool) {
    let mut out = octad.to_json();
    let smooth = smooth_flag(&octad.d, &SMOOTHNESS_PRIMES);
    out["D_smooth_flag"] = json!(smooth);
    let p8 = ProjPoint::new(octad.field, octad.p8().to_vec()).expect("nonzero").primitive();
    out["p8"] = json!(p8.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    let mut ok = octad.checks.all_passed();
    match rnc_genus2(octad) {
        Ok(r) => {
            let mut g = r.to_json().unwrap_or(Value::Null);
            match cross_check(octad, &r, bound) {
                Ok(x) => {
                    ok &= x.agree;
                    g["kummer_invariants"] = x.via_kummer.to_json();
                    g["pipelines_agree"] = json!(x.agree);
                }
                Err(e) => {
                    ok = false;
                    g["pipelines_agree"] = json!(false);
                    g["kummer_error"] = json!(e.to_string());
                }
            }
            out["genus2"] = g;
        }
        Err(e) => {
            ok = false;
            out["genus2"] = json!({ "error": e.to_string() });
        }
    }
    (out, ok)
}
