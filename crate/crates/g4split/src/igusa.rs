//! The Igusa quartic: the classical model in P⁵ on the hyperplane Σx = 0 and
//! the determinantal (symmetroid) model in P⁴, with polars, singular lines,
//! the elliptic locus, the S6 action and Kummer sections.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactmath::{linalg, Field, MultiPoly};
use crate::projgeom::{self, LinearSubspace, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// (Σx²)² − 4Σx⁴ on Σx = 0 in P⁵.
    Classical,
    /// det 𝒜(x) in P⁴, x5 := −(x0 + ... + x4).
    Symmetroid,
}

/// A syntheme {ab|cd|ef}: three disjoint pairs covering {0..5}.
pub type Syntheme = [[usize; 2]; 3];

/// The 15 synthemes in lexicographic order; index 0 is {01|23|45}.
pub fn synthemes() -> Vec<Syntheme> {
    let mut out = vec![];
    for b in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&x| x != b).collect();
        for k in 1..4 {
            let (c, d) = (rest[0], rest[k]);
            let ef: Vec<usize> = rest.iter().copied().filter(|&x| x != c && x != d).collect();
            out.push([[0, b], [c, d], [ef[0], ef[1]]]);
        }
    }
    out
}

/// The 10 triples containing 0; x_a + x_b + x_c = 0 cuts the elliptic locus
/// (the complementary triple gives the same hyperplane on Σx = 0).
pub fn elliptic_triples() -> Vec<[usize; 3]> {
    let mut out = vec![];
    for b in 1..6 {
        for c in b + 1..6 {
            out.push([0, b, c]);
        }
    }
    out
}

/// Symbolic 4×4 matrix 𝒜(x) in the five variables x0..x4.
pub fn symmetroid_matrix<F: Field>(f: &F) -> Vec<Vec<MultiPoly<F>>> {
    let x = |i: usize| MultiPoly::var(f.clone(), 5, i);
    let x5 = (0..5).fold(MultiPoly::zero(f.clone(), 5), |acc, i| &acc - &x(i));
    let z = MultiPoly::zero(f.clone(), 5);
    vec![
        vec![z.clone(), x(0), x(1), x(2)],
        vec![x(0), z.clone(), x(3), x(4)],
        vec![x(1), x(3), z.clone(), x5.clone()],
        vec![x(2), x(4), x5, z],
    ]
}

/// Base points of the quadric system: the coordinate points and (1:1:1:1).
pub fn base_points<F: Field>(f: &F) -> Vec<Vec<F::Elem>> {
    let mut pts: Vec<Vec<F::Elem>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    pts.push(vec![f.one(); 4]);
    pts
}

/// System coordinates x of a quadric Σ c_ij y_i y_j through the base points.
fn quadric_coords<F: Field>(q: &MultiPoly<F>) -> Vec<F::Elem> {
    let pair = |i: usize, j: usize| {
        let mut e = vec![0u32; 4];
        e[i] += 1;
        e[j] += 1;
        q.coeff(&e)
    };
    vec![pair(0, 1), pair(0, 2), pair(0, 3), pair(1, 2), pair(1, 3)]
}

/// Singular lines of the symmetroid: ten plane pairs (a plane through three base
/// points times the pencil through the other two), then five cone pencils with
/// vertex at a base point.
fn symmetroid_lines<F: Field>(f: &F) -> Result<Vec<LinearSubspace<F>>> {
    let pts = base_points(f);
    let mut lines = vec![];
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                let rest: Vec<usize> = (0..5).filter(|i| ![a, b, c].contains(i)).collect();
                let plane = linalg::nullspace(f, &vec![pts[a].clone(), pts[b].clone(), pts[c].clone()], 4);
                let pencil = linalg::nullspace(f, &vec![pts[rest[0]].clone(), pts[rest[1]].clone()], 4);
                let p = MultiPoly::linear_form(f.clone(), &plane[0]);
                let basis: Vec<Vec<F::Elem>> = pencil
                    .iter()
                    .map(|l| quadric_coords(&(&p * &MultiPoly::linear_form(f.clone(), l))))
                    .collect();
                lines.push(LinearSubspace::from_basis(f.clone(), 5, basis)?);
            }
        }
    }
    let m = symmetroid_matrix(f);
    for p in &pts {
        // rows of 𝒜(x)·p as linear forms in x
        let eqs: Vec<Vec<F::Elem>> = m
            .iter()
            .map(|row| {
                let lin = row
                    .iter()
                    .zip(p)
                    .fold(MultiPoly::zero(f.clone(), 5), |acc, (e, c)| &acc + &e.scale(c));
                (0..5)
                    .map(|i| {
                        let mut e = vec![0u32; 5];
                        e[i] = 1;
                        lin.coeff(&e)
                    })
                    .collect()
            })
            .collect();
        lines.push(LinearSubspace::from_equations(f.clone(), 5, eqs)?);
    }
    Ok(lines)
}

#[derive(Clone, Debug)]
pub struct QuarticThreefold<F: Field> {
    pub field: F,
    pub model: Model,
    form: MultiPoly<F>,
    lines: Vec<LinearSubspace<F>>,
}

impl<F: Field> QuarticThreefold<F> {
    pub fn classical(field: F) -> Self {
        let f = &field;
        let x = |i| MultiPoly::var(f.clone(), 6, i);
        let s2 = (0..6).fold(MultiPoly::zero(f.clone(), 6), |acc, i| &acc + &x(i).pow(2));
        let s4 = (0..6).fold(MultiPoly::zero(f.clone(), 6), |acc, i| &acc + &x(i).pow(4));
        let form = &s2.pow(2) - &s4.scale(&f.from_int(4));
        let lines = synthemes()
            .iter()
            .map(|s| {
                let mut u = vec![f.zero(); 6];
                let mut v = vec![f.zero(); 6];
                // x_a = x_b = s, x_c = x_d = t, x_e = x_f = −s − t
                for k in s[0] {
                    u[k] = f.one();
                }
                for k in s[1] {
                    v[k] = f.one();
                }
                for k in s[2] {
                    u[k] = f.from_int(-1);
                    v[k] = f.from_int(-1);
                }
                LinearSubspace::from_basis(f.clone(), 6, vec![u, v]).expect("independent")
            })
            .collect();
        QuarticThreefold { field, model: Model::Classical, form, lines }
    }

    pub fn symmetroid(field: F) -> Self {
        let form = projgeom::poly_det(&symmetroid_matrix(&field)).expect("nonempty");
        let lines = symmetroid_lines(&field).expect("base points in general position");
        QuarticThreefold { field, model: Model::Symmetroid, form, lines }
    }

    pub fn form(&self) -> &MultiPoly<F> {
        &self.form
    }

    pub fn nvars(&self) -> usize {
        self.form.nvars()
    }

    pub fn singular_lines(&self) -> &[LinearSubspace<F>] {
        &self.lines
    }

    /// Linear relations cutting the ambient space of the model.
    pub fn ambient_equations(&self) -> Vec<Vec<F::Elem>> {
        match self.model {
            Model::Classical => vec![vec![self.field.one(); 6]],
            Model::Symmetroid => vec![],
        }
    }

    pub fn validate(&self, a: &[F::Elem]) -> Result<()> {
        let f = &self.field;
        if a.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "point needs {} coordinates, got {}",
                self.nvars(),
                a.len()
            )));
        }
        if a.iter().all(|c| f.is_zero(c)) {
            return Err(Error::InvalidInput("zero point".into()));
        }
        if self.model == Model::Classical {
            let s = a.iter().fold(f.zero(), |acc, c| f.add(&acc, c));
            if !f.is_zero(&s) {
                return Err(Error::NotOnHyperplane);
            }
        }
        Ok(())
    }

    pub fn value(&self, a: &[F::Elem]) -> Result<F::Elem> {
        self.validate(a)?;
        Ok(self.form.eval(a))
    }

    pub fn contains(&self, a: &[F::Elem]) -> Result<bool> {
        Ok(self.field.is_zero(&self.value(a)?))
    }

    /// Ambient gradient ∇F(a).
    pub fn gradient(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        self.form.gradient().iter().map(|g| g.eval(a)).collect()
    }

    /// 𝒫(a, b) = ∇F(a)·b. For the classical model this equals the gradient of
    /// F with x5 eliminated, taken in x0..x4, since b lies on Σx = 0.
    pub fn polar_pair(&self, a: &[F::Elem], b: &[F::Elem]) -> Result<F::Elem> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(linalg::dot(&self.field, &self.gradient(a), b))
    }

    /// The j-fold polar (b·∇)^j F, of degree 4 − j.
    pub fn iterated_polar(&self, b: &[F::Elem], j: u32) -> Result<MultiPoly<F>> {
        if !(1..=3).contains(&j) {
            return Err(Error::InvalidInput(format!("polar order {j} outside 1..3")));
        }
        self.validate(b)?;
        let mut g = self.form.clone();
        for _ in 0..j {
            g = g
                .gradient()
                .iter()
                .zip(b)
                .fold(MultiPoly::zero(self.field.clone(), self.nvars()), |acc, (d, c)| &acc + &d.scale(c));
        }
        Ok(g)
    }

    /// Classical model only: some triple of coordinates sums to zero.
    pub fn is_elliptic(&self, a: &[F::Elem]) -> Result<bool> {
        if self.model != Model::Classical {
            return Err(Error::InvalidInput("elliptic test is defined for the classical model".into()));
        }
        self.validate(a)?;
        let f = &self.field;
        Ok(elliptic_triples()
            .iter()
            .any(|t| f.is_zero(&t.iter().fold(f.zero(), |acc, &i| f.add(&acc, &a[i])))))
    }

    pub fn is_on_singular_line(&self, a: &[F::Elem]) -> Result<Option<usize>> {
        self.validate(a)?;
        Ok(self.lines.iter().position(|l| {
            let mut m: Vec<Vec<F::Elem>> = l.basis().to_vec();
            m.push(a.to_vec());
            linalg::rank(&self.field, &m) == 2
        }))
    }

    /// The Kummer surface T_a𝓘 ∩ 𝓘 with a moved to (0:0:0:1).
    pub fn kummer_section(&self, a: &[F::Elem]) -> Result<KummerSection<F>> {
        let f = &self.field;
        if !self.contains(a)? {
            return Err(Error::InvalidInput("point is not on the quartic".into()));
        }
        // singular lines lie inside the elliptic locus, so test them first
        if let Some(i) = self.is_on_singular_line(a)? {
            return Err(Error::OnSingularLine(i));
        }
        if self.model == Model::Classical && self.is_elliptic(a)? {
            return Err(Error::EllipticLocus);
        }
        let grad = self.gradient(a);
        let mut eqs = self.ambient_equations();
        eqs.push(grad.clone());
        if linalg::rank(f, &eqs) != eqs.len() {
            return Err(Error::SingularPoint);
        }
        let t = LinearSubspace::from_equations(f.clone(), self.nvars(), eqs)?;
        let c = t
            .coordinates_of(a)
            .ok_or_else(|| Error::StructuralAssertionFailed("point not in its tangent space".into()))?;
        let frame = projgeom::frame_with_last(f, &c)?;
        let basis: Vec<Vec<F::Elem>> = (0..4).map(|j| {
            let col: Vec<F::Elem> = frame.iter().map(|r| r[j].clone()).collect();
            t.point(&col)
        }).collect();
        let space = LinearSubspace::from_basis(f.clone(), self.nvars(), basis)?;
        let quartic = projgeom::restrict_form(&self.form, &space)?;
        let node_grad = quartic.gradient();
        let is_node = |v: &[F::Elem]| node_grad.iter().all(|g| f.is_zero(&g.eval(v)));
        let e3: Vec<F::Elem> = (0..4).map(|i| if i == 3 { f.one() } else { f.zero() }).collect();
        if !is_node(&e3) {
            return Err(Error::StructuralAssertionFailed("base point is not singular on the section".into()));
        }
        let mut nodes = vec![ProjPoint::new(f.clone(), e3)?];
        for (idx, l) in self.lines.iter().enumerate() {
            let (u, v) = (&l.basis()[0], &l.basis()[1]);
            let (gu, gv) = (linalg::dot(f, &grad, u), linalg::dot(f, &grad, v));
            if f.is_zero(&gu) && f.is_zero(&gv) {
                return Err(Error::StructuralAssertionFailed(format!("singular line {idx} lies in the tangent space")));
            }
            let p: Vec<F::Elem> = u.iter().zip(v).map(|(x, y)| f.sub(&f.mul(&gv, x), &f.mul(&gu, y))).collect();
            let rc = space
                .coordinates_of(&p)
                .ok_or_else(|| Error::StructuralAssertionFailed("node outside the tangent space".into()))?;
            if !is_node(&rc) {
                return Err(Error::StructuralAssertionFailed(format!("node from line {idx} is not singular")));
            }
            nodes.push(ProjPoint::new(f.clone(), rc)?);
        }
        Ok(KummerSection {
            base: ProjPoint::new(f.clone(), a.to_vec())?,
            space,
            quartic,
            nodes,
            polar: OnceLock::new(),
        })
    }
}

/// Quartic surface in the tangent space at its distinguished node; the node
/// is the last coordinate point. Node-polar data is cached on first use.
#[derive(Debug)]
pub struct KummerSection<F: Field> {
    pub base: ProjPoint<F>,
    /// Basis of T_a𝓘 whose last vector is a.
    pub space: LinearSubspace<F>,
    pub quartic: MultiPoly<F>,
    /// Restricted coordinates of the 16 nodes; the first is (0:0:0:1).
    pub nodes: Vec<ProjPoint<F>>,
    pub(crate) polar: OnceLock<crate::kummer::NodePolarData<F>>,
}

impl<F: Field> Clone for KummerSection<F> {
    fn clone(&self) -> Self {
        let polar = OnceLock::new();
        if let Some(p) = self.polar.get() {
            let _ = polar.set(p.clone());
        }
        KummerSection {
            base: self.base.clone(),
            space: self.space.clone(),
            quartic: self.quartic.clone(),
            nodes: self.nodes.clone(),
            polar,
        }
    }
}

impl<F: Field> KummerSection<F> {
    pub fn field(&self) -> F {
        self.base.field.clone()
    }

    pub fn distinct_node_count(&self) -> usize {
        let mut seen: Vec<&ProjPoint<F>> = vec![];
        for n in &self.nodes {
            if !seen.iter().any(|m| m.proj_eq(n)) {
                seen.push(n);
            }
        }
        seen.len()
    }
}

/// A permutation of {0..5} acting by (σa)_i = a_{σ(i)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SigmaAction {
    perm: [usize; 6],
}

impl SigmaAction {
    pub fn identity() -> Self {
        SigmaAction { perm: [0, 1, 2, 3, 4, 5] }
    }

    pub fn new(perm: [usize; 6]) -> Result<Self> {
        let mut seen = [false; 6];
        for &p in &perm {
            if p > 5 || seen[p] {
                return Err(Error::InvalidInput(format!("not a permutation of 0..5: {perm:?}")));
            }
            seen[p] = true;
        }
        Ok(SigmaAction { perm })
    }

    /// Product of disjoint cycles, e.g. "(0,1,2)", "(01)(23)", "()" for the identity.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut perm = [0, 1, 2, 3, 4, 5];
        let mut used = [false; 6];
        let bad = || Error::InvalidInput(format!("cannot parse permutation {s:?}"));
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(bad)?;
            if !rest[..open].trim().is_empty() {
                return Err(bad());
            }
            let close = rest.find(')').ok_or_else(bad)?;
            let body = &rest[open + 1..close];
            let items: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            for (k, &i) in items.iter().enumerate() {
                if i > 5 || used[i] {
                    return Err(bad());
                }
                used[i] = true;
                perm[i] = items[(k + 1) % items.len()];
            }
            rest = &rest[close + 1..];
        }
        Self::new(perm)
    }

    pub fn perm(&self) -> [usize; 6] {
        self.perm
    }

    pub fn apply<E: Clone>(&self, a: &[E]) -> Vec<E> {
        (0..6).map(|i| a[self.perm[i]].clone()).collect()
    }

    pub fn apply_point<F: Field>(&self, a: &ProjPoint<F>) -> Result<ProjPoint<F>> {
        if a.coords().len() != 6 {
            return Err(Error::InvalidInput("σ acts on six coordinates".into()));
        }
        ProjPoint::new(a.field.clone(), self.apply(a.coords()))
    }

    /// (self ∘ other) as actions: apply other first.
    pub fn then(&self, other: &Self) -> Self {
        // (τ(σa))_i = (σa)_{τ(i)} = a_{σ(τ(i))}
        let mut perm = [0; 6];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = self.perm[other.perm[i]];
        }
        SigmaAction { perm }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 6];
        let mut out = vec![];
        for s in 0..6 {
            if seen[s] {
                continue;
            }
            let mut c = vec![];
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.perm[i];
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycle_type().iter().fold(1, |acc, &l| num_integer::lcm(acc, l))
    }

    pub fn is_involution(&self) -> bool {
        self.order() <= 2
    }
}

impl fmt::Display for SigmaAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let items: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", items.join(","))?;
        }
        Ok(())
    }
}
