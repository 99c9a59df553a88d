//! Gluing two genus-2 curves along their 2-torsion from a pair of points on
//! the Igusa quartic: the D4 construction (non-hyperelliptic X) and the V4
//! construction (hyperelliptic X), plus explicit genus-4 models.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactmath::{
    linalg, mobius_point, p1_equal, BinaryForm, Field, Mobius, MultiPoly, RootField, SqrtField, UniPoly,
};
use crate::genus2::HypCurve;
use crate::igusa::{Model, QuarticThreefold};
use crate::kummer::{self, KummerExtract, NodalPlaneQuartic};
use crate::projgeom::{self, ConicParam, ConicPoints, LinearSubspace, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlueCase {
    D4,
    V4,
    Invalid,
}

impl GlueCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            GlueCase::D4 => "D4",
            GlueCase::V4 => "V4",
            GlueCase::Invalid => "Invalid",
        }
    }
}

/// Case tag together with both polar values.
#[derive(Clone, Debug)]
pub struct PairClass<F: Field> {
    pub case: GlueCase,
    pub ab: F::Elem,
    pub ba: F::Elem,
}

fn check_point<F: Field>(i: &QuarticThreefold<F>, a: &[F::Elem]) -> Result<()> {
    if !i.contains(a)? {
        return Err(Error::InvalidInput("point is not on the quartic".into()));
    }
    if let Some(k) = i.is_on_singular_line(a)? {
        return Err(Error::OnSingularLine(k));
    }
    if i.model == Model::Classical && i.is_elliptic(a)? {
        return Err(Error::EllipticLocus);
    }
    Ok(())
}

pub fn classify_pair<F: Field>(i: &QuarticThreefold<F>, a: &[F::Elem], b: &[F::Elem]) -> Result<PairClass<F>> {
    let f = &i.field;
    let pa = ProjPoint::new(f.clone(), a.to_vec())?;
    let pb = ProjPoint::new(f.clone(), b.to_vec())?;
    if pa.proj_eq(&pb) {
        return Err(Error::DegeneratePair);
    }
    check_point(i, a)?;
    check_point(i, b)?;
    let ab = i.polar_pair(a, b)?;
    let ba = i.polar_pair(b, a)?;
    let case = match (f.is_zero(&ab), f.is_zero(&ba)) {
        (true, false) => GlueCase::D4,
        (true, true) => GlueCase::V4,
        _ => GlueCase::Invalid,
    };
    Ok(PairClass { case, ab, ba })
}

fn invalid_pair<F: Field>(f: &F, c: &PairClass<F>) -> Error {
    Error::InvalidPair { ab: f.display(&c.ab), ba: f.display(&c.ba) }
}

/// Push a divisor forward along (s:t) ↦ (N(s,t) : D(s,t)): the form
/// Res_{s,t}(B, Y·N − X·D) in (X, Y).
pub fn pushforward<F: Field>(b: &BinaryForm<F>, num: &BinaryForm<F>, den: &BinaryForm<F>) -> Result<BinaryForm<F>> {
    let f = &b.field;
    if num.degree() != den.degree() {
        return Err(Error::InvalidInput("map components need equal degrees".into()));
    }
    let out_deg = b.degree();
    let xs: Vec<F::Elem> = (0..=out_deg as i64).map(|k| f.from_int(k)).collect();
    let mut ys = vec![];
    for x in &xs {
        let g = num.sub(&den.scale(x))?;
        ys.push(b.resultant(&g));
    }
    let p = UniPoly::interpolate(f.clone(), &xs, &ys)?;
    BinaryForm::from_poly(&p, out_deg)
}

/// Branch values of a degree-2 map (N : D): the discriminant in (s,t) of Y·N − X·D.
pub fn quadratic_map_branch<F: Field>(num: &BinaryForm<F>, den: &BinaryForm<F>) -> Result<BinaryForm<F>> {
    if num.degree() != 2 || den.degree() != 2 {
        return Err(Error::InvalidInput("degree-2 map expected".into()));
    }
    let f = &num.field;
    // coefficient of s^k t^(2-k) as a linear form in (X, Y)
    let lin = |k: usize| BinaryForm::new(f.clone(), 1, vec![num.coeff(k), f.neg(&den.coeff(k))]);
    let (c0, c1, c2) = (lin(0)?, lin(1)?, lin(2)?);
    c1.mul(&c1).sub(&c2.mul(&c0).scale(&f.from_int(4)))
}

/// A Möbius map m ↦ (a x + b z : c x + d z) applied to the variables of a form.
pub(crate) fn substitute_mobius<F: Field>(g: &BinaryForm<F>, m: &Mobius<F::Elem>) -> Result<BinaryForm<F>> {
    let f = &g.field;
    let xf = BinaryForm::new(f.clone(), 1, vec![m[0][1].clone(), m[0][0].clone()])?;
    let zf = BinaryForm::new(f.clone(), 1, vec![m[1][1].clone(), m[1][0].clone()])?;
    g.compose(&xf, &zf)
}

pub(crate) fn simple_roots<F: RootField>(g: &BinaryForm<F>) -> Option<Vec<[F::Elem; 2]>> {
    let r = g.field.form_roots(g);
    (r.len() == g.degree() && r.iter().all(|(_, m)| *m == 1)).then(|| r.into_iter().map(|(p, _)| p).collect())
}

/// All Möbius maps carrying the point set src onto dst (both of size ≥ 3).
pub fn mobius_maps_between<F: Field>(f: &F, src: &[[F::Elem; 2]], dst: &[[F::Elem; 2]]) -> Vec<Mobius<F::Elem>> {
    let mut out = vec![];
    if src.len() < 3 || src.len() != dst.len() {
        return out;
    }
    let n = dst.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let rows: linalg::Matrix<F::Elem> = [(0, i), (1, j), (2, k)]
                    .iter()
                    .map(|&(s, d)| {
                        let (p, q) = (&src[s], &dst[d]);
                        // (a p0 + b p1) q1 − (c p0 + d p1) q0 = 0
                        vec![
                            f.mul(&p[0], &q[1]),
                            f.mul(&p[1], &q[1]),
                            f.neg(&f.mul(&p[0], &q[0])),
                            f.neg(&f.mul(&p[1], &q[0])),
                        ]
                    })
                    .collect();
                let ns = linalg::nullspace(f, &rows, 4);
                if ns.len() != 1 {
                    continue;
                }
                let v = &ns[0];
                let m: Mobius<F::Elem> = [[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]];
                let det = f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]));
                if f.is_zero(&det) {
                    continue;
                }
                if src.iter().all(|p| {
                    let im = mobius_point(f, &m, p);
                    dst.iter().any(|q| p1_equal(f, &im, q))
                }) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Permutation of the branch points of C_b induced by μ after identifying
/// the base of C_a with the base of C_b through a Möbius map.
#[derive(Clone, Debug)]
pub struct BranchPermutation<F: Field> {
    pub roots_b: Vec<[F::Elem; 2]>,
    pub roots_a: Vec<[F::Elem; 2]>,
    /// Möbius map from the L_a coordinate to the Q_b coordinate.
    pub identification: Mobius<F::Elem>,
    pub perm: Vec<usize>,
}

impl<F: Field> BranchPermutation<F> {
    /// Cycle lengths, descending, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Output of the D4 construction at a pair (a, b) with 𝒫(a,b) = 0 ≠ 𝒫(b,a).
#[derive(Clone, Debug)]
pub struct D4Datum<F: Field> {
    pub a: ProjPoint<F>,
    pub b: ProjPoint<F>,
    pub class: PairClass<F>,
    /// T_a restricted to T_b in the coordinates (v0, v1, v2) of the projection from b.
    pub la_equation: Vec<F::Elem>,
    /// L_a = {X e1 + Y e2}; C_a lives on this (X : Y) line.
    pub la_basis: [Vec<F::Elem>; 2],
    pub d_a: NodalPlaneQuartic<F>,
    pub c_a: HypCurve<F>,
    /// c2 restricted to L_a: the tangent cone of D_a at b.
    pub tangent_cone: BinaryForm<F>,
    pub extract_b: KummerExtract<F>,
    pub c_b: HypCurve<F>,
    /// μ: Q_b → L_a, (s : t) ↦ (num : den).
    pub mu: [BinaryForm<F>; 2],
    pub mu_branch: BinaryForm<F>,
    pub transported: BinaryForm<F>,
    pub check_branch_quadratic: bool,
    pub check_transport: bool,
    pub permutation: Option<BranchPermutation<F>>,
}

pub fn d4_construct<F: ConicPoints + RootField>(
    i: &QuarticThreefold<F>,
    a: &[F::Elem],
    b: &[F::Elem],
    bound: u64,
) -> Result<D4Datum<F>> {
    let f = i.field.clone();
    let class = classify_pair(i, a, b)?;
    if class.case != GlueCase::D4 {
        return Err(invalid_pair(&f, &class));
    }
    let ks = i.kummer_section(b)?;
    let data = kummer::node_polar_data(i, &ks)?;
    let ga = i.gradient(a);
    let ell: Vec<F::Elem> = ks.space.basis().iter().map(|v| linalg::dot(&f, &ga, v)).collect();
    if !f.is_zero(&ell[3]) {
        return Err(Error::StructuralAssertionFailed("b is not in the tangent space at a".into()));
    }
    let la_equation = ell[..3].to_vec();
    let ns = linalg::nullspace(&f, &vec![la_equation.clone()], 3);
    if ns.len() != 2 {
        return Err(Error::StructuralAssertionFailed("T_a ∩ T_b is not a plane".into()));
    }
    let la_basis = [ns[0].clone(), ns[1].clone()];

    // D_a in coordinates (X, Y, w) with v = X e1 + Y e2
    let v = |k: usize| MultiPoly::var(f.clone(), 3, k);
    let subs: Vec<MultiPoly<F>> = (0..3)
        .map(|j| &v(0).scale(&la_basis[0][j]) + &v(1).scale(&la_basis[1][j]))
        .chain(std::iter::once(v(2)))
        .collect();
    let d_form = ks.quartic.substitute(&subs)?;
    let d_a = NodalPlaneQuartic::from_ternary(&d_form)?;
    let (sextic_a, tangent_cone) = kummer::nodal_quartic_branch(&d_a)?;
    if sextic_a.is_zero() || !sextic_a.is_squarefree() {
        return Err(Error::DegenerateBranch("branch sextic of D_a is not square-free".into()));
    }
    let c_a = HypCurve::new(sextic_a)?;

    let extract_b = kummer::extract_from_polar(data, bound)?;
    if !extract_b.branch.is_squarefree() {
        return Err(Error::DegenerateBranch("branch sextic of K_b is not square-free".into()));
    }
    let c_b = HypCurve::new(extract_b.branch.clone())?;

    // μ(P) = T_P Q_b ∩ L_a
    let m = extract_b.polar.conic.matrix();
    let me1 = linalg::mat_vec(&f, &m, &la_basis[0]);
    let me2 = linalg::mat_vec(&f, &m, &la_basis[1]);
    let along = |w: &[F::Elem]| -> Result<BinaryForm<F>> {
        let mut acc = BinaryForm::zero(f.clone(), 2);
        for (c, wk) in extract_b.param.comps.iter().zip(w) {
            acc = acc.add(&c.scale(wk))?;
        }
        Ok(acc)
    };
    let num = along(&me2)?;
    let den = along(&me1)?.scale(&f.neg(&f.one()));
    if num.gcd(&den).degree() > 0 {
        return Err(Error::StructuralAssertionFailed("tangent-line map has a base point".into()));
    }
    let mu_branch = quadratic_map_branch(&num, &den)?;
    let check_branch_quadratic = mu_branch.is_proportional(&tangent_cone);
    let transported = pushforward(&extract_b.branch, &num, &den)?;
    let check_transport = transported.is_proportional(&c_a.f);
    let mut datum = D4Datum {
        a: ProjPoint::new(f.clone(), a.to_vec())?,
        b: ProjPoint::new(f.clone(), b.to_vec())?,
        class,
        la_equation,
        la_basis,
        d_a,
        c_a,
        tangent_cone,
        extract_b,
        c_b,
        mu: [num, den],
        mu_branch,
        transported,
        check_branch_quadratic,
        check_transport,
        permutation: None,
    };
    datum.permutation = branch_permutation(&datum);
    Ok(datum)
}

fn branch_permutation<F: RootField>(d: &D4Datum<F>) -> Option<BranchPermutation<F>> {
    let f = &d.c_a.f.field;
    let roots_b = simple_roots(&d.c_b.f)?;
    let roots_a = simple_roots(&d.c_a.f)?;
    let identification = mobius_maps_between(f, &roots_a, &roots_b).into_iter().next()?;
    let mut perm = vec![];
    for r in &roots_b {
        let img = [d.mu[0].eval(&r[0], &r[1]), d.mu[1].eval(&r[0], &r[1])];
        let back = mobius_point(f, &identification, &img);
        perm.push(roots_b.iter().position(|q| p1_equal(f, q, &back))?);
    }
    Some(BranchPermutation { roots_b, roots_a, identification, perm })
}

impl<F: RootField> D4Datum<F> {
    /// Charts (m1, m2) with μ ∘ m1 = m2 ∘ target, where target is a degree-2
    /// map on the line carrying the target sextic's roots to both C_b and C_a.
    pub fn chart_match(
        &self,
        target_sextic: &BinaryForm<F>,
        target_mu: &[BinaryForm<F>; 2],
    ) -> Option<(Mobius<F::Elem>, Mobius<F::Elem>)> {
        let f = &self.c_a.f.field;
        let target = if target_sextic.degree() == 5 { target_sextic.with_degree(6).ok()? } else { target_sextic.clone() };
        let rt = simple_roots(&target)?;
        let rb = simple_roots(&self.c_b.f)?;
        let ra = simple_roots(&self.c_a.f)?;
        for m1 in mobius_maps_between(f, &rt, &rb) {
            let n1 = substitute_mobius(&self.mu[0], &m1).ok()?;
            let d1 = substitute_mobius(&self.mu[1], &m1).ok()?;
            for m2 in mobius_maps_between(f, &rt, &ra) {
                let n2 = target_mu[0].scale(&m2[0][0]).add(&target_mu[1].scale(&m2[0][1])).ok()?;
                let d2 = target_mu[0].scale(&m2[1][0]).add(&target_mu[1].scale(&m2[1][1])).ok()?;
                if n1.mul(&d2).sub(&d1.mul(&n2)).ok()?.is_zero() {
                    return Some((m1, m2));
                }
            }
        }
        None
    }
}

fn form_json<F: Field>(g: &BinaryForm<F>) -> Value {
    Value::Array(g.coeffs().iter().map(|c| g.field.to_json(c)).collect())
}

fn vec_json<F: Field>(f: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|c| f.to_json(c)).collect())
}

pub fn mobius_json<F: Field>(f: &F, m: &Mobius<F::Elem>) -> Value {
    json!([vec_json(f, &m[0]), vec_json(f, &m[1])])
}

impl<F: Field> D4Datum<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.c_a.f.field;
        json!({
            "case": "D4",
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "polar": {"ab": f.to_json(&self.class.ab), "ba": f.to_json(&self.class.ba)},
            "L_a": {
                "equation": vec_json(f, &self.la_equation),
                "basis": [vec_json(f, &self.la_basis[0]), vec_json(f, &self.la_basis[1])],
            },
            "C_a": self.c_a.to_json(),
            "C_b": self.c_b.to_json(),
            "kummer_b": self.extract_b.to_json(),
            "conic_point": self.extract_b.point.to_json(),
            "mu": {"num": form_json(&self.mu[0]), "den": form_json(&self.mu[1])},
            "branch_quadratic": form_json(&self.mu_branch),
            "tangent_cone": form_json(&self.tangent_cone),
            "checks": {
                "branch_quadratic": self.check_branch_quadratic,
                "transport": self.check_transport,
            },
            "permutation": self.permutation.as_ref().map(|p| json!({
                "perm": p.perm,
                "cycle_type": p.cycle_type(),
                "identification": mobius_json(f, &p.identification),
            })),
        })
    }
}

/// Output of the V4 construction at a pair with 𝒫(a,b) = 𝒫(b,a) = 0.
#[derive(Clone, Debug)]
pub struct V4Datum<F: Field> {
    pub a: ProjPoint<F>,
    pub b: ProjPoint<F>,
    pub class: PairClass<F>,
    /// T_a ∩ T_b with basis (a, b, w).
    pub plane: LinearSubspace<F>,
    /// The section of the quartic is square_const · conic².
    pub conic: MultiPoly<F>,
    pub square_const: F::Elem,
    /// (singular line index, point) for the five shared nodes.
    pub shared: Vec<(usize, ProjPoint<F>)>,
    pub param: ConicParam<F>,
    pub shared_params: Vec<[F::Elem; 2]>,
    pub marker_a: [F::Elem; 2],
    pub marker_b: [F::Elem; 2],
    /// Sends marker(a) to ∞ and marker(b) to 0.
    pub normalization: Mobius<F::Elem>,
    /// Quintic with roots at the normalized shared points.
    pub f: BinaryForm<F>,
    pub c1: HypCurve<F>,
    pub c2: HypCurve<F>,
}

pub fn v4_construct<F: Field>(i: &QuarticThreefold<F>, a: &[F::Elem], b: &[F::Elem]) -> Result<V4Datum<F>> {
    let f = i.field.clone();
    let class = classify_pair(i, a, b)?;
    if class.case != GlueCase::V4 {
        return Err(invalid_pair(&f, &class));
    }
    let n = i.nvars();
    let (ga, gb) = (i.gradient(a), i.gradient(b));
    let mut eqs = i.ambient_equations();
    eqs.push(ga.clone());
    eqs.push(gb);
    let raw = LinearSubspace::from_equations(f.clone(), n, eqs)?;
    if raw.dim() != 3 {
        return Err(Error::StructuralAssertionFailed("T_a ∩ T_b is not a plane".into()));
    }
    let mut basis = vec![a.to_vec(), b.to_vec()];
    for w in raw.basis() {
        let mut cand = basis.clone();
        cand.push(w.clone());
        if linalg::rank(&f, &cand) == 3 {
            basis = cand;
            break;
        }
    }
    let plane = LinearSubspace::from_basis(f.clone(), n, basis)?;
    let section = projgeom::restrict_form(i.form(), &plane)?;
    let (square_const, conic) = kummer::square_root_up_to_scalar(&section)
        .ok_or_else(|| Error::StructuralAssertionFailed("plane section is not a double conic".into()))?;
    let e = |k: usize| -> Vec<F::Elem> { (0..3).map(|j| if j == k { f.one() } else { f.zero() }).collect() };
    if !f.is_zero(&conic.eval(&e(0))) || !f.is_zero(&conic.eval(&e(1))) {
        return Err(Error::StructuralAssertionFailed("conic misses a or b".into()));
    }
    let mut shared: Vec<(usize, ProjPoint<F>)> = vec![];
    let mut shared_plane = vec![];
    for (idx, l) in i.singular_lines().iter().enumerate() {
        let (u, v) = (&l.basis()[0], &l.basis()[1]);
        let (gu, gv) = (linalg::dot(&f, &ga, u), linalg::dot(&f, &ga, v));
        if f.is_zero(&gu) && f.is_zero(&gv) {
            return Err(Error::StructuralAssertionFailed(format!("singular line {idx} lies in T_a")));
        }
        let p: Vec<F::Elem> = u.iter().zip(v).map(|(x, y)| f.sub(&f.mul(&gv, x), &f.mul(&gu, y))).collect();
        let Some(pc) = plane.coordinates_of(&p) else { continue };
        let pp = ProjPoint::new(f.clone(), p)?;
        if shared.iter().any(|(_, q)| q.proj_eq(&pp)) {
            continue;
        }
        if !f.is_zero(&conic.eval(&pc)) {
            return Err(Error::StructuralAssertionFailed("shared node off the conic".into()));
        }
        shared.push((idx, pp));
        shared_plane.push(pc);
    }
    if shared.len() != 5 {
        return Err(Error::StructuralAssertionFailed(format!("{} shared nodes instead of 5", shared.len())));
    }
    let cn = projgeom::Conic::from_form(&conic)?;
    let base = ProjPoint::new(f.clone(), e(0))?;
    let param = projgeom::conic_parametrize(&cn, &base)?;
    let marker_a = param.inverse(&base)?;
    let marker_b = param.inverse(&ProjPoint::new(f.clone(), e(1))?)?;
    let shared_params = shared_plane
        .iter()
        .map(|pc| param.inverse(&ProjPoint::new(f.clone(), pc.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let cols: Mobius<F::Elem> = [
        [marker_a[0].clone(), marker_b[0].clone()],
        [marker_a[1].clone(), marker_b[1].clone()],
    ];
    let inv = linalg::inverse(&f, &cols.iter().map(|r| r.to_vec()).collect())
        .map_err(|_| Error::StructuralAssertionFailed("markers of a and b coincide".into()))?;
    let normalization: Mobius<F::Elem> = [
        [inv[0][0].clone(), inv[0][1].clone()],
        [inv[1][0].clone(), inv[1][1].clone()],
    ];
    let mut quintic = BinaryForm::one(f.clone());
    for p in &shared_params {
        let im = mobius_point(&f, &normalization, p);
        if f.is_zero(&im[1]) || f.is_zero(&im[0]) {
            return Err(Error::StructuralAssertionFailed("shared point collides with a marker".into()));
        }
        quintic = quintic.mul(&BinaryForm::vanishing_at(f.clone(), &im[0], &im[1]));
    }
    let c1 = HypCurve::new(quintic.clone())?;
    let x = BinaryForm::vanishing_at(f.clone(), &f.zero(), &f.one());
    let c2 = HypCurve::new(x.mul(&quintic))?;
    Ok(V4Datum {
        a: ProjPoint::new(f.clone(), a.to_vec())?,
        b: ProjPoint::new(f.clone(), b.to_vec())?,
        class,
        plane,
        conic,
        square_const,
        shared,
        param,
        shared_params,
        marker_a,
        marker_b,
        normalization,
        f: quintic,
        c1,
        c2,
    })
}

impl<F: Field> V4Datum<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.f.field;
        json!({
            "case": "V4",
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "polar": {"ab": f.to_json(&self.class.ab), "ba": f.to_json(&self.class.ba)},
            "plane": self.plane.to_json(),
            "conic": self.conic.display_with(&["u0", "u1", "u2"]),
            "square_const": f.to_json(&self.square_const),
            "shared": self.shared.iter().map(|(k, p)| json!({"line": k, "point": p.to_json()})).collect::<Vec<_>>(),
            "params": {
                "shared": self.shared_params.iter().map(|p| vec_json(f, p)).collect::<Vec<_>>(),
                "a": vec_json(f, &self.marker_a),
                "b": vec_json(f, &self.marker_b),
            },
            "normalization": mobius_json(f, &self.normalization),
            "f": form_json(&self.f),
            "C_1": self.c1.to_json(),
            "C_2": self.c2.to_json(),
        })
    }
}

#[derive(Clone, Debug)]
pub enum GluingDatum<F: Field> {
    D4(Box<D4Datum<F>>),
    V4(Box<V4Datum<F>>),
}

impl<F: Field> GluingDatum<F> {
    pub fn case(&self) -> GlueCase {
        match self {
            GluingDatum::D4(_) => GlueCase::D4,
            GluingDatum::V4(_) => GlueCase::V4,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GluingDatum::D4(d) => d.to_json(),
            GluingDatum::V4(d) => d.to_json(),
        }
    }
}

/// Classify and run the matching construction.
pub fn construct<F: ConicPoints + RootField>(
    i: &QuarticThreefold<F>,
    a: &[F::Elem],
    b: &[F::Elem],
    bound: u64,
) -> Result<GluingDatum<F>> {
    let class = classify_pair(i, a, b)?;
    match class.case {
        GlueCase::D4 => Ok(GluingDatum::D4(Box::new(d4_construct(i, a, b, bound)?))),
        GlueCase::V4 => Ok(GluingDatum::V4(Box::new(v4_construct(i, a, b)?))),
        GlueCase::Invalid => Err(invalid_pair(&i.field, &class)),
    }
}

/// X = {y² = f(x), z² = c(x) + d·y}, with c² − d²f = λ q s².
#[derive(Clone, Debug)]
pub struct D4Model<F: Field> {
    pub f: BinaryForm<F>,
    pub q: BinaryForm<F>,
    pub lambda: F::Elem,
    pub c: BinaryForm<F>,
    pub s: BinaryForm<F>,
    pub d_squared: F::Elem,
    /// √(d²) when it lies in the field; otherwise X is glued to the twist y² = d²·f.
    pub d: Option<F::Elem>,
}

#[derive(Clone, Debug)]
pub enum Genus4Curve<F: Field> {
    Hyperelliptic { f10: BinaryForm<F> },
    D4(D4Model<F>),
}

impl<F: Field> D4Model<F> {
    /// c² − d²·f − λ·q·s² vanishes identically.
    pub fn norm_identity(&self) -> bool {
        let fl = &self.f.field;
        let lhs = self.c.mul(&self.c).sub(&self.f.scale(&self.d_squared));
        let rhs = self.q.mul(&self.s).mul(&self.s).scale(&self.lambda);
        matches!((lhs, rhs), (Ok(l), r) if l.sub(&r).is_ok_and(|z| z.is_zero())) && !fl.is_zero(&self.d_squared)
    }

    /// (c', d') = r·(c, ±d) for some constant r: the same X up to twist.
    pub fn same_twist_orbit(&self, c: &BinaryForm<F>, d: &F::Elem) -> bool {
        let f = &self.f.field;
        let Some(r) = self.c.proportionality(c) else { return false };
        !f.is_zero(&r) && f.eq_elem(&f.mul(d, d), &f.mul(&f.mul(&r, &r), &self.d_squared))
    }
}

impl<F: Field> Genus4Curve<F> {
    /// Genus-4 sanity check: square-free of degree 10 (or 9 plus ∞), or a
    /// verified norm identity with d ≠ 0.
    pub fn is_valid(&self) -> bool {
        match self {
            Genus4Curve::Hyperelliptic { f10 } => f10.degree() == 10 && f10.is_squarefree(),
            Genus4Curve::D4(m) => m.norm_identity(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Genus4Curve::Hyperelliptic { f10 } => json!({
                "model": "hyperelliptic",
                "f10": form_json(f10),
                "checks": {"degree_10": f10.degree() == 10, "square_free": f10.is_squarefree()},
            }),
            Genus4Curve::D4(m) => {
                let f = &m.f.field;
                json!({
                    "model": "D4",
                    "f": form_json(&m.f),
                    "c": form_json(&m.c),
                    "d": m.d.as_ref().map(|d| f.to_json(d)),
                    "d_squared": f.to_json(&m.d_squared),
                    "q": form_json(&m.q),
                    "s": form_json(&m.s),
                    "lambda": f.to_json(&m.lambda),
                    "checks": {"norm_identity": m.norm_identity()},
                })
            }
        }
    }
}

/// Solve c² − d²·f = λ·q·s² with c cubic, s quadratic and d a nonzero
/// constant. On the roots r of f this reads c(r) = ±√(λq(r))·s(r), so each
/// sign pattern gives a linear system. f must split over the base field.
/// λ defaults to the square class forced by the roots.
pub fn genus4_d4<F: RootField + SqrtField>(
    f: &BinaryForm<F>,
    q: &BinaryForm<F>,
    lambda: Option<F::Elem>,
) -> Result<Vec<D4Model<F>>> {
    let fl = f.field.clone();
    let f = match f.degree() {
        5 => f.with_degree(6)?,
        6 => f.clone(),
        d => return Err(Error::InvalidInput(format!("sextic expected, got degree {d}"))),
    };
    if !f.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    if q.degree() != 2 || !q.is_squarefree() {
        return Err(Error::InvalidBranch("q must be a square-free quadratic".into()));
    }
    if f.gcd(q).degree() > 0 {
        return Err(Error::InvalidBranch("q shares a root with f".into()));
    }
    let roots = simple_roots(&f)
        .ok_or_else(|| Error::InvalidInput("genus4_d4 needs a branch sextic that splits over the base field".into()))?;
    let qv: Vec<F::Elem> = roots.iter().map(|r| q.eval(&r[0], &r[1])).collect();
    let lambda = lambda.unwrap_or_else(|| qv[0].clone());
    if fl.is_zero(&lambda) {
        return Err(Error::InvalidInput("λ must be nonzero".into()));
    }
    let mut rho = vec![];
    for v in &qv {
        rho.push(fl.sqrt(&fl.mul(&lambda, v)).ok_or(Error::TwistNotRepresented)?);
    }
    let mut out: Vec<D4Model<F>> = vec![];
    for mask in 0u32..32 {
        let rows: linalg::Matrix<F::Elem> = roots
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let sign = j > 0 && (mask >> (j - 1)) & 1 == 1;
                let rr = if sign { fl.neg(&rho[j]) } else { rho[j].clone() };
                let mut row = vec![];
                for k in 0..4 {
                    row.push(fl.mul(&fl.pow(&r[0], k), &fl.pow(&r[1], 3 - k)));
                }
                for k in 0..3 {
                    row.push(fl.neg(&fl.mul(&rr, &fl.mul(&fl.pow(&r[0], k), &fl.pow(&r[1], 2 - k)))));
                }
                row
            })
            .collect();
        for v in linalg::nullspace(&fl, &rows, 7) {
            let c = BinaryForm::new(fl.clone(), 3, v[..4].to_vec())?;
            let s = BinaryForm::new(fl.clone(), 2, v[4..].to_vec())?;
            if c.is_zero() {
                continue;
            }
            let norm = c.mul(&c).sub(&q.mul(&s).mul(&s).scale(&lambda))?;
            let Some(k) = f.proportionality(&norm) else { continue };
            if fl.is_zero(&k) {
                continue;
            }
            let lc = c.coeffs().iter().rev().find(|x| !fl.is_zero(x)).cloned().expect("nonzero");
            let li = fl.inv(&lc).expect("nonzero");
            let c = c.scale(&li);
            let s = s.scale(&li);
            let d_squared = fl.mul(&k, &fl.mul(&li, &li));
            let dup = out.iter().any(|m| {
                m.c == c && fl.eq_elem(&m.d_squared, &d_squared) && (m.s == s || m.s == s.scale(&fl.neg(&fl.one())))
            });
            if dup {
                continue;
            }
            let d = fl.sqrt(&d_squared);
            out.push(D4Model { f: f.clone(), q: q.clone(), lambda: lambda.clone(), c, s, d_squared, d });
        }
    }
    if out.is_empty() {
        return Err(Error::TwistNotRepresented);
    }
    Ok(out)
}

/// X: y² = d1·f(u²/(d1d2) + β), cleared to the degree-10 form
/// d1·D·Σ f_i (u² + βD)^i D^(5−i) with D = d1·d2.
pub fn genus4_v4<F: Field>(f: &BinaryForm<F>, beta: &F::Elem, d1: &F::Elem, d2: &F::Elem) -> Result<Genus4Curve<F>> {
    let fl = f.field.clone();
    let p = f.to_poly();
    if p.degree() != Some(5) || f.degree() > 6 || (f.degree() == 6 && f.infinity_multiplicity() != 1) {
        return Err(Error::InvalidInput("f must be a quintic (plus the point at ∞)".into()));
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    if fl.is_zero(d1) || fl.is_zero(d2) {
        return Err(Error::InvalidInput("twists must be nonzero".into()));
    }
    if fl.is_zero(&p.eval(beta)) {
        return Err(Error::BranchCollision);
    }
    let dd = fl.mul(d1, d2);
    let u2 = UniPoly::new(fl.clone(), vec![fl.mul(beta, &dd), fl.zero(), fl.one()]);
    let mut acc = UniPoly::zero(fl.clone());
    for k in 0..=5usize {
        let t = u2.pow(k as u32).scale(&fl.mul(&p.coeff(k), &fl.pow(&dd, (5 - k) as u64)));
        acc = &acc + &t;
    }
    let acc = acc.scale(&fl.mul(d1, &dd));
    let f10 = BinaryForm::from_poly(&acc, 10)?;
    if !f10.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    Ok(Genus4Curve::Hyperelliptic { f10 })
}

/// The square factor of a univariate norm: h = k·s² with s returned monic-led.
pub fn square_factor<F: Field>(h: &BinaryForm<F>) -> Option<(F::Elem, BinaryForm<F>)> {
    let f = &h.field;
    let d = h.degree();
    if d % 2 == 1 {
        return None;
    }
    let mp = MultiPoly::from_terms(
        f.clone(),
        2,
        h.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32, (d - i) as u32], c.clone())),
    );
    let (k, r) = kummer::square_root_up_to_scalar(&mp)?;
    let mut co = vec![f.zero(); d / 2 + 1];
    for (e, c) in r.terms() {
        co[e[0] as usize] = c.clone();
    }
    Some((k, BinaryForm::new(f.clone(), d / 2, co).ok()?))
}
