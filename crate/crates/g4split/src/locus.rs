//! Sampling the polar locus {a ∈ 𝓘 : 𝒫(a, σa) = 0} over F_p and testing
//! whether 𝒫(σa, a) = 0 follows.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::exactmath::{linalg, Field, MultiPoly, PrimeField, UniPoly};
use crate::igusa::{QuarticThreefold, SigmaAction};
use crate::{par, Error, Result};

/// One representative per conjugacy class of S6.
pub const CLASS_REPRESENTATIVES: [&str; 11] = [
    "()",
    "(0,1)",
    "(0,1)(2,3)",
    "(0,1)(2,3)(4,5)",
    "(0,1,2)",
    "(0,1,2)(3,4)",
    "(0,1,2)(3,4,5)",
    "(0,1,2,3)",
    "(0,1,2,3)(4,5)",
    "(0,1,2,3,4)",
    "(0,1,2,3,4,5)",
];

pub fn class_representatives() -> Vec<SigmaAction> {
    CLASS_REPRESENTATIVES.iter().map(|s| SigmaAction::parse(s).expect("valid")).collect()
}

#[derive(Clone, Debug)]
pub struct SurveyConfig {
    pub p: u64,
    /// Target number of samples per σ.
    pub n: usize,
    pub seed: u64,
    /// Planes processed per round.
    pub batch: usize,
    /// Plane budget per σ; 0 means 50·n + 200.
    pub max_planes: usize,
    pub sequential: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { p: 10007, n: 500, seed: 42, batch: 64, max_planes: 0, sequential: false }
    }
}

impl SurveyConfig {
    fn budget(&self) -> usize {
        if self.max_planes == 0 {
            50 * self.n + 200
        } else {
            self.max_planes
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusSample {
    /// Normalized so the first nonzero coordinate is 1.
    pub point: Vec<u64>,
    pub fixed: bool,
    pub elliptic: bool,
    pub singular_line: Option<usize>,
    /// 𝒫(σa, a) = 0.
    pub implication: bool,
}

impl LocusSample {
    pub fn degenerate(&self) -> bool {
        self.fixed || self.elliptic || self.singular_line.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point,
            "fixed": self.fixed,
            "elliptic": self.elliptic,
            "singular_line": self.singular_line,
            "implication": self.implication,
        })
    }
}

/// F, ∇F and G_σ = ∇F(x)·σx, evaluated pointwise.
struct Slicer {
    field: PrimeField,
    qt: QuarticThreefold<PrimeField>,
    grad: Vec<MultiPoly<PrimeField>>,
    sigma: SigmaAction,
}

impl Slicer {
    fn new(field: PrimeField, sigma: SigmaAction) -> Self {
        let qt = QuarticThreefold::classical(field);
        let grad = qt.form().gradient();
        Slicer { field, qt, grad, sigma }
    }

    fn f_at(&self, x: &[u64]) -> u64 {
        self.qt.form().eval(x)
    }

    fn polar(&self, a: &[u64], b: &[u64]) -> u64 {
        let g: Vec<u64> = self.grad.iter().map(|d| d.eval(a)).collect();
        linalg::dot(&self.field, &g, b)
    }

    fn g_at(&self, x: &[u64]) -> u64 {
        self.polar(x, &self.sigma.apply(x))
    }

    fn point(&self, u: &[u64], v: &[u64], w: &[u64], al: u64, be: u64) -> Vec<u64> {
        let f = &self.field;
        (0..6).map(|i| f.add(&f.add(&f.mul(&al, &u[i]), &f.mul(&be, &v[i])), &w[i])).collect()
    }

    /// F and G restricted to the line α = al of the plane, as quartics in β.
    fn restrict(&self, u: &[u64], v: &[u64], w: &[u64], al: u64) -> (UniPoly<PrimeField>, UniPoly<PrimeField>) {
        let f = self.field;
        let xs: Vec<u64> = (0..5).collect();
        let pts: Vec<Vec<u64>> = xs.iter().map(|&be| self.point(u, v, w, al, be)).collect();
        let fy: Vec<u64> = pts.iter().map(|p| self.f_at(p)).collect();
        let gy: Vec<u64> = pts.iter().map(|p| self.g_at(p)).collect();
        (
            UniPoly::interpolate(f, &xs, &fy).expect("distinct nodes"),
            UniPoly::interpolate(f, &xs, &gy).expect("distinct nodes"),
        )
    }

    fn classify(&self, x: &[u64]) -> LocusSample {
        let f = &self.field;
        let sx = self.sigma.apply(x);
        let fixed = linalg::rank(f, &vec![x.to_vec(), sx.clone()]) == 1;
        LocusSample {
            point: normalize(f, x),
            fixed,
            elliptic: self.qt.is_elliptic(x).unwrap_or(false),
            singular_line: self.qt.is_on_singular_line(x).unwrap_or(None),
            implication: f.is_zero(&self.polar(&sx, x)),
        }
    }
}

fn normalize(f: &PrimeField, x: &[u64]) -> Vec<u64> {
    let lead = x.iter().find(|c| **c != 0).copied().unwrap_or(1);
    let inv = f.inv(&lead).expect("nonzero");
    x.iter().map(|c| f.mul(c, &inv)).collect()
}

fn hyperplane_vector(f: &PrimeField, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let p = f.modulus();
    let mut v: Vec<u64> = (0..5).map(|_| rng.gen_range(0..p)).collect();
    let s = v.iter().fold(0u64, |acc, c| f.add(&acc, c));
    v.push(f.neg(&s));
    v
}

fn plane_rng(seed: u64, sigma: &SigmaAction, index: usize) -> ChaCha8Rng {
    let key = sigma.perm().iter().fold(0u64, |acc, &i| acc * 6 + i as u64);
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8..16].copy_from_slice(&key.to_le_bytes());
    s[16..24].copy_from_slice(&(index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(s)
}

/// Points of 𝓘 ∩ {G_σ = 0} on one random plane inside Σx = 0.
fn slice_plane(sl: &Slicer, seed: u64, index: usize) -> Vec<Vec<u64>> {
    let f = sl.field;
    let mut rng = plane_rng(seed, &sl.sigma, index);
    let u = hyperplane_vector(&f, &mut rng);
    let v = hyperplane_vector(&f, &mut rng);
    let w = hyperplane_vector(&f, &mut rng);
    // constant β⁴ coefficients keep the specialized resultant honest
    if f.is_zero(&sl.f_at(&v)) || f.is_zero(&sl.g_at(&v)) {
        return vec![];
    }
    if linalg::rank(&f, &vec![u.clone(), v.clone(), w.clone()]) < 3 {
        return vec![];
    }
    let nodes: Vec<u64> = (0..17).collect();
    let res: Vec<u64> = nodes
        .iter()
        .map(|&al| {
            let (fa, ga) = sl.restrict(&u, &v, &w, al);
            fa.resultant(&ga).unwrap_or(0)
        })
        .collect();
    let r = UniPoly::interpolate(f, &nodes, &res).expect("distinct nodes");
    let alphas: Vec<u64> = if r.is_zero() {
        // F and G_σ share a component through this plane
        (0..8).map(|_| rng.gen_range(0..f.modulus())).collect()
    } else {
        r.fp_roots().into_iter().map(|(a, _)| a).collect()
    };
    let mut out = vec![];
    for al in alphas {
        let (fa, ga) = sl.restrict(&u, &v, &w, al);
        let g = fa.gcd(&ga);
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (be, _) in g.fp_roots() {
            let x = sl.point(&u, &v, &w, al, be);
            if x.iter().all(|c| *c == 0) {
                continue;
            }
            debug_assert!(f.is_zero(&sl.f_at(&x)) && f.is_zero(&sl.g_at(&x)));
            out.push(x);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusSampleSet {
    pub sigma: SigmaAction,
    pub p: u64,
    pub planes: usize,
    pub samples: Vec<LocusSample>,
}

/// Deterministic in (p, seed, σ) and independent of the worker count.
pub fn sample_locus(sigma: &SigmaAction, cfg: &SurveyConfig) -> Result<LocusSampleSet> {
    let field = PrimeField::new(cfg.p)?;
    if cfg.n == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let sl = Slicer::new(field, *sigma);
    let budget = cfg.budget();
    let batch = cfg.batch.max(1);
    let mut seen = BTreeSet::new();
    let mut samples = vec![];
    let mut planes = 0;
    'outer: while planes < budget {
        let end = (planes + batch).min(budget);
        let found = if cfg.sequential {
            par::map_range_seq(planes, end, |i| slice_plane(&sl, cfg.seed, i))
        } else {
            par::map_range(planes, end, |i| slice_plane(&sl, cfg.seed, i))
        };
        for pts in found {
            planes += 1;
            for x in pts {
                if seen.insert(normalize(&field, &x)) {
                    samples.push(sl.classify(&x));
                    if samples.len() == cfg.n {
                        break 'outer;
                    }
                }
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::SamplingFailed { planes });
    }
    Ok(LocusSampleSet { sigma: *sigma, p: cfg.p, planes, samples })
}

/// Re-checks a sample from scratch: on 𝓘, on Σx = 0, on the σ-polar locus.
pub fn verify_sample(sigma: &SigmaAction, p: u64, s: &LocusSample) -> Result<bool> {
    let field = PrimeField::new(p)?;
    if s.point.len() != 6 {
        return Err(Error::InvalidInput("sample needs six coordinates".into()));
    }
    let sl = Slicer::new(field, *sigma);
    let x = &s.point;
    let on = field.is_zero(&x.iter().fold(0, |acc, c| field.add(&acc, c)))
        && field.is_zero(&sl.f_at(x))
        && field.is_zero(&sl.g_at(x));
    Ok(on && sl.classify(x) == *s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub sigma: SigmaAction,
    pub planes: usize,
    pub samples: usize,
    pub fixed: usize,
    pub elliptic: usize,
    pub singular_line: usize,
    pub degenerate: usize,
    pub nondegenerate: usize,
    /// Non-degenerate samples with 𝒫(σa, a) = 0.
    pub implication: usize,
    pub set: LocusSampleSet,
}

impl SurveyRow {
    fn from_set(set: LocusSampleSet) -> Self {
        let s = &set.samples;
        let count = |pred: &dyn Fn(&LocusSample) -> bool| s.iter().filter(|x| pred(x)).count();
        let degenerate = count(&|x| x.degenerate());
        SurveyRow {
            sigma: set.sigma,
            planes: set.planes,
            samples: s.len(),
            fixed: count(&|x| x.fixed),
            elliptic: count(&|x| x.elliptic),
            singular_line: count(&|x| x.singular_line.is_some()),
            degenerate,
            nondegenerate: s.len() - degenerate,
            implication: count(&|x| !x.degenerate() && x.implication),
            set,
        }
    }

    /// "k/m" over the non-degenerate samples, or None when there are none.
    pub fn rate(&self) -> Option<(usize, usize)> {
        (self.nondegenerate > 0).then_some((self.implication, self.nondegenerate))
    }

    pub fn rate_string(&self) -> String {
        match self.rate() {
            Some((k, m)) => format!("{k}/{m}"),
            None => "n/a".into(),
        }
    }

    /// Rate ≥ num/den, exactly.
    pub fn rate_at_least(&self, num: usize, den: usize) -> bool {
        self.rate().is_some_and(|(k, m)| k * den >= num * m)
    }

    pub fn to_json(&self, with_samples: bool) -> Value {
        let mut v = json!({
            "sigma": self.sigma.to_string(),
            "cycle_type": self.sigma.cycle_type(),
            "planes": self.planes,
            "samples": self.samples,
            "fixed": self.fixed,
            "elliptic": self.elliptic,
            "singular_line": self.singular_line,
            "degenerate": self.degenerate,
            "nondegenerate": self.nondegenerate,
            "implication": self.implication,
            "rate": self.rate_string(),
        });
        if with_samples {
            v["points"] = Value::Array(self.set.samples.iter().map(|s| s.to_json()).collect());
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyReport {
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    /// Classes whose every non-degenerate sample satisfies the implication.
    pub fn attributed(&self) -> Vec<SigmaAction> {
        self.rows.iter().filter(|r| r.rate_at_least(1, 1)).map(|r| r.sigma).collect()
    }

    pub fn row(&self, sigma: &SigmaAction) -> Option<&SurveyRow> {
        self.rows.iter().find(|r| r.sigma == *sigma)
    }

    pub fn to_json(&self, with_samples: bool) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "seed": self.seed,
            "rows": self.rows.iter().map(|r| r.to_json(with_samples)).collect::<Vec<_>>(),
            "attributed": self.attributed().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn implication_survey(sigmas: &[SigmaAction], cfg: &SurveyConfig) -> Result<SurveyReport> {
    let rows = sigmas
        .iter()
        .map(|s| sample_locus(s, cfg).map(SurveyRow::from_set))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurveyReport { p: cfg.p, n: cfg.n, seed: cfg.seed, rows })
}
