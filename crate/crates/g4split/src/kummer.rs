//! Kummer quartic surfaces with a distinguished node: node-polar data, the
//! branch sextic, tropes, the dual Kummer of a genus-2 curve and the Gauss map.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{linalg, BinaryForm, Field, MultiPoly, RootField};
use crate::igusa::{KummerSection, QuarticThreefold};
use crate::projgeom::{self, Conic, ConicParam, ConicPoints, LinearSubspace, ProjPoint};

/// Tangent-cone conic Q_b and cubic c3 at the node, with G = w²c2 + w c3 + c4.
#[derive(Clone, Debug)]
pub struct NodePolarData<F: Field> {
    pub conic: Conic<F>,
    pub c2: MultiPoly<F>,
    pub c3: MultiPoly<F>,
    pub c4: MultiPoly<F>,
}

/// Split a quartic in (v0, v1, v2, w) with a node at (0:0:0:1) as w²c2 + w c3 + c4.
pub fn node_expansion<F: Field>(g: &MultiPoly<F>) -> Result<[MultiPoly<F>; 3]> {
    if g.nvars() != 4 {
        return Err(Error::InvalidInput("quartic surface needs four variables".into()));
    }
    let parts = g.as_poly_in(3);
    if parts.len() > 3 {
        return Err(Error::StructuralAssertionFailed(
            "terms of degree ≥ 3 in the node coordinate".into(),
        ));
    }
    let get = |k: usize| -> Result<MultiPoly<F>> {
        match parts.get(k) {
            Some(p) => p.drop_var(3),
            None => Ok(MultiPoly::zero(g.field.clone(), 3)),
        }
    };
    Ok([get(2)?, get(1)?, get(0)?])
}

/// Node-polar data of a quartic with a node at the last coordinate point.
pub fn node_polar_from_quartic<F: Field>(g: &MultiPoly<F>) -> Result<NodePolarData<F>> {
    let [c2, c3, c4] = node_expansion(g)?;
    if c2.is_zero() {
        return Err(Error::WorseSingularity);
    }
    let conic = Conic::from_form(&c2)?;
    if !conic.is_nonsingular() {
        return Err(Error::EllipticLocus);
    }
    Ok(NodePolarData { conic, c2, c3, c4 })
}

/// (Q_b, c3) from the polars p^(2), p^(1) restricted to T_b𝓘 with b last.
/// The polar restrictions are checked against the direct expansion of G_b.
pub fn node_polar_data<'a, F: Field>(
    i: &QuarticThreefold<F>,
    ks: &'a KummerSection<F>,
) -> Result<&'a NodePolarData<F>> {
    if let Some(d) = ks.polar.get() {
        return Ok(d);
    }
    let f = ks.field();
    let b = ks.base.coords();
    let p2 = projgeom::restrict_form(&i.iterated_polar(b, 2)?, &ks.space)?;
    let q_b = p2
        .drop_var(3)
        .map_err(|e| Error::StructuralAssertionFailed(format!("second polar is not a cone at b: {e}")))?;
    let p1 = projgeom::restrict_form(&i.iterated_polar(b, 1)?, &ks.space)?;
    let parts = p1.as_poly_in(3);
    if parts.len() > 2 {
        return Err(Error::StructuralAssertionFailed("first polar has w² terms on T_b".into()));
    }
    let q1 = parts.get(1).map(|p| p.drop_var(3)).transpose()?.unwrap_or(MultiPoly::zero(f.clone(), 3));
    let c3_polar = parts[0].drop_var(3)?;
    let data = node_polar_from_quartic(&ks.quartic)?;
    if !proportional(&q1, &q_b) {
        return Err(Error::StructuralAssertionFailed("linear part of the first polar is not ∝ Q_b".into()));
    }
    if !proportional(&q_b, &data.c2) || !proportional(&c3_polar, &data.c3) {
        return Err(Error::StructuralAssertionFailed("polars disagree with the node expansion".into()));
    }
    let _ = ks.polar.set(data);
    Ok(ks.polar.get().expect("just set"))
}

fn proportional<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let f = &a.field;
    let (ea, ca) = a.leading_term().expect("nonzero");
    let cb = b.coeff(ea);
    if f.is_zero(&cb) {
        return false;
    }
    a.scale(&cb) == b.scale(ca)
}

/// c3 pulled back along a parametrization of Q_b: the branch sextic B.
pub fn branch_divisor<F: Field>(c3: &MultiPoly<F>, param: &ConicParam<F>) -> Result<BinaryForm<F>> {
    let b = param.pullback(c3)?;
    if b.is_zero() {
        return Err(Error::DegenerateBranch("cubic vanishes on the conic".into()));
    }
    if b.degree() != 6 {
        return Err(Error::DegenerateBranch(format!("pullback has degree {}", b.degree())));
    }
    Ok(b)
}

/// Everything extracted from a Kummer section at its distinguished node.
#[derive(Clone, Debug)]
pub struct KummerExtract<F: Field> {
    pub polar: NodePolarData<F>,
    pub point: ProjPoint<F>,
    pub param: ConicParam<F>,
    pub branch: BinaryForm<F>,
}

impl<F: Field> KummerExtract<F> {
    pub fn to_json(&self) -> Value {
        let f = self.point.field.clone();
        json!({
            "conic": self.polar.conic.to_json(),
            "cubic": cubic_json(&self.polar.c3),
            "branch_sextic": self.branch.coeffs().iter().map(|c| f.to_json(c)).collect::<Vec<_>>(),
            "twist": Value::Null,
        })
    }
}

/// Coefficients of a ternary cubic in the order v0³, v0²v1, v0²v2, v0v1², ..., v2³.
pub fn cubic_json<F: Field>(c: &MultiPoly<F>) -> Value {
    let mut out = vec![];
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            out.push(c.field.to_json(&c.coeff(&[a, b, 3 - a - b])));
        }
    }
    Value::Array(out)
}

/// Branch sextic from node-polar data, choosing a conic point deterministically.
pub fn extract_from_polar<F: ConicPoints>(data: &NodePolarData<F>, bound: u64) -> Result<KummerExtract<F>> {
    let point = F::conic_point(&data.conic, Some(&data.c3), bound)?;
    let param = projgeom::conic_parametrize(&data.conic, &point)?;
    let branch = branch_divisor(&data.c3, &param)?;
    Ok(KummerExtract { polar: data.clone(), point, param, branch })
}

/// The full pipeline at a point of the Igusa quartic.
pub fn extract<F: ConicPoints>(i: &QuarticThreefold<F>, a: &[F::Elem], bound: u64) -> Result<KummerExtract<F>> {
    let ks = i.kummer_section(a)?;
    let data = node_polar_data(i, &ks)?;
    extract_from_polar(data, bound)
}

/// A plane quartic w²c2 + w c3 + c4 with a node at (0:0:1).
#[derive(Clone, Debug)]
pub struct NodalPlaneQuartic<F: Field> {
    pub c2: BinaryForm<F>,
    pub c3: BinaryForm<F>,
    pub c4: BinaryForm<F>,
}

impl<F: Field> NodalPlaneQuartic<F> {
    /// From a ternary quartic in (v0, v1, w).
    pub fn from_ternary(q: &MultiPoly<F>) -> Result<Self> {
        if q.nvars() != 3 {
            return Err(Error::InvalidInput("plane quartic needs three variables".into()));
        }
        let parts = q.as_poly_in(2);
        if parts.len() > 3 {
            return Err(Error::WorseSingularity);
        }
        let f = q.field.clone();
        let bin = |k: usize, deg: usize| -> Result<BinaryForm<F>> {
            let mut co = vec![f.zero(); deg + 1];
            if let Some(p) = parts.get(k) {
                for (e, c) in p.terms() {
                    co[e[0] as usize] = c.clone();
                }
            }
            BinaryForm::new(f.clone(), deg, co)
        };
        Ok(NodalPlaneQuartic { c2: bin(2, 2)?, c3: bin(1, 3)?, c4: bin(0, 4)? })
    }
}

/// Branch sextic c3² − 4c2c4 of the projection from the node, and c2.
pub fn nodal_quartic_branch<F: Field>(d: &NodalPlaneQuartic<F>) -> Result<(BinaryForm<F>, BinaryForm<F>)> {
    if d.c2.is_zero() {
        return Err(Error::WorseSingularity);
    }
    let f = &d.c2.field;
    let b = d.c3.mul(&d.c3).sub(&d.c2.mul(&d.c4).scale(&f.from_int(4)))?;
    Ok((b, d.c2.clone()))
}

/// r = c·q² with the leading monomial of q having coefficient 1.
pub fn square_root_up_to_scalar<F: Field>(r: &MultiPoly<F>) -> Option<(F::Elem, MultiPoly<F>)> {
    let f = r.field.clone();
    let n = r.nvars();
    let (e, c) = r.leading_term()?;
    if e.iter().any(|k| k % 2 == 1) {
        return None;
    }
    let c = c.clone();
    let rn = r.scale(&f.inv(&c)?);
    let lead: Vec<u32> = e.iter().map(|k| k / 2).collect();
    let two_inv = f.inv(&f.from_int(2))?;
    let mut q = MultiPoly::monomial(f.clone(), lead.clone(), f.one());
    let cap = r.num_terms() * 4 + 64;
    for _ in 0..cap {
        let rem = &rn - &q.pow(2);
        let Some((e2, c2)) = rem.leading_term() else {
            return Some((c, q));
        };
        if e2.iter().zip(&lead).any(|(a, b)| a < b) {
            return None;
        }
        let m: Vec<u32> = e2.iter().zip(&lead).map(|(a, b)| a - b).collect();
        if m >= lead {
            return None;
        }
        q.add_term(m, f.mul(c2, &two_inv));
        let _ = n;
    }
    None
}

/// The six tropes through the node: planes spanned by b and the tangent line
/// to Q_b at a contact point. Contact points that are not rational leave the
/// set described by (Q_b, c3) only.
#[derive(Clone, Debug)]
pub struct TropeSet<F: Field> {
    /// Planes as linear forms in the T_b coordinates (v0, v1, v2, w).
    pub planes: Vec<Vec<F::Elem>>,
    /// Conics q with G_b|plane = const·q², in the plane's own coordinates.
    pub conics: Vec<MultiPoly<F>>,
    /// True when some contact points were not rational.
    pub symbolic: bool,
}

pub fn tropes_through_node<F: RootField>(ks: &KummerSection<F>, ex: &KummerExtract<F>) -> Result<TropeSet<F>> {
    let f = ks.field();
    let roots = f.form_roots(&ex.branch);
    let mut planes = vec![];
    let mut conics = vec![];
    let mut count = 0;
    for (r, m) in &roots {
        count += m;
        let p = ProjPoint::new(f.clone(), ex.param.eval(&r[0], &r[1]))?;
        let l = projgeom::conic_tangent_line(&ex.polar.conic, &p)?;
        let plane = vec![l[0].clone(), l[1].clone(), l[2].clone(), f.zero()];
        let sub = LinearSubspace::from_equations(f.clone(), 4, vec![plane.clone()])?;
        let section = projgeom::restrict_form(&ks.quartic, &sub)?;
        let (_, q) = square_root_up_to_scalar(&section).ok_or_else(|| {
            Error::StructuralAssertionFailed("trope section is not a double conic".into())
        })?;
        planes.push(plane);
        conics.push(q);
    }
    Ok(TropeSet { planes, conics, symbolic: count < 6 })
}

/// The dual Kummer det(η1Q1 + ... + η4Q4) of y² = f.
#[derive(Clone, Debug)]
pub struct DualKummer<F: Field> {
    pub f: BinaryForm<F>,
    pub grams: [linalg::Matrix<F::Elem>; 4],
    pub g: MultiPoly<F>,
}

pub fn kummer_dual_from_curve<F: Field>(f: &BinaryForm<F>) -> Result<DualKummer<F>> {
    let f6 = match f.degree() {
        5 => f.with_degree(6)?,
        6 => f.clone(),
        d => return Err(Error::InvalidInput(format!("curve needs degree 5 or 6, got {d}"))),
    };
    if !f6.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    let k = &f6.field;
    let half = k.inv(&k.from_int(2)).ok_or_else(|| Error::Arithmetic("characteristic 2".into()))?;
    let mhalf = k.neg(&half);
    let zero = || vec![vec![k.zero(); 4]; 4];
    let set = |m: &mut linalg::Matrix<F::Elem>, i: usize, j: usize, v: F::Elem| {
        m[i][j] = v.clone();
        m[j][i] = v;
    };
    let mut q1 = zero();
    set(&mut q1, 1, 1, k.one());
    set(&mut q1, 0, 2, mhalf.clone());
    let mut q2 = zero();
    set(&mut q2, 0, 3, half.clone());
    set(&mut q2, 1, 2, mhalf.clone());
    let mut q3 = zero();
    set(&mut q3, 2, 2, k.one());
    set(&mut q3, 1, 3, mhalf.clone());
    let c = |i: usize| f6.coeff(i);
    let mut q4 = zero();
    set(&mut q4, 0, 0, c(0));
    set(&mut q4, 0, 1, k.mul(&c(1), &half));
    set(&mut q4, 1, 1, c(2));
    set(&mut q4, 1, 2, k.mul(&c(3), &half));
    set(&mut q4, 2, 2, c(4));
    set(&mut q4, 2, 3, k.mul(&c(5), &half));
    set(&mut q4, 3, 3, c(6));
    let grams = [q1, q2, q3, q4];
    let m: Vec<Vec<MultiPoly<F>>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let co: Vec<F::Elem> = grams.iter().map(|g| g[i][j].clone()).collect();
                    MultiPoly::linear_form(k.clone(), &co)
                })
                .collect()
        })
        .collect();
    let g = projgeom::poly_det(&m)?;
    Ok(DualKummer { f: f6, grams, g })
}

impl<F: Field> DualKummer<F> {
    /// Gram matrix of η1Q1 + ... + η4Q4.
    pub fn member(&self, eta: &[F::Elem]) -> linalg::Matrix<F::Elem> {
        let k = &self.f.field;
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        (0..4).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&eta[t], &self.grams[t][i][j])))
                    })
                    .collect()
            })
            .collect()
    }
}

/// G_K(ξ) = G(−ξ4, ξ3, −ξ2, ξ1) for f with f6 = 0, f5 = 1.
pub fn kummer_from_curve_normalized<F: Field>(f: &BinaryForm<F>) -> Result<MultiPoly<F>> {
    let k = &f.field;
    let f6 = match f.degree() {
        5 => f.with_degree(6)?,
        6 => f.clone(),
        _ => return Err(Error::NotNormalized),
    };
    if !k.is_zero(&f6.coeff(6)) || !k.eq_elem(&f6.coeff(5), &k.one()) {
        return Err(Error::NotNormalized);
    }
    let dk = kummer_dual_from_curve(&f6)?;
    Ok(normalized_substitution(&dk.g))
}

/// The coordinate change (ξ1:ξ2:ξ3:ξ4) = (η4 : −η3 : η2 : −η1), as a substitution.
pub fn normalized_substitution<F: Field>(g: &MultiPoly<F>) -> MultiPoly<F> {
    let k = g.field.clone();
    let xi = |i: usize| MultiPoly::var(k.clone(), 4, i);
    let subs = [-&xi(3), xi(2), -&xi(1), xi(0)];
    g.substitute(&subs).expect("four variables")
}

/// γ(p) = ∇G(p).
pub fn gauss_map<F: Field>(g: &MultiPoly<F>, p: &ProjPoint<F>) -> Result<ProjPoint<F>> {
    let v: Vec<F::Elem> = g.gradient().iter().map(|d| d.eval(p.coords())).collect();
    if v.iter().all(|c| g.field.is_zero(c)) {
        return Err(Error::SingularPoint);
    }
    ProjPoint::new(g.field.clone(), v)
}
