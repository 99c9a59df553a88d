use g4split::exactmath::{parse_rational, Field, Rationals};
use g4split::genus2::HypCurve;
use g4split::glue::{self, Genus4Curve, GluingDatum};
use g4split::igusa::{QuarticThreefold, SigmaAction};
use g4split::locus::{self, SurveyConfig, SurveyReport};
use g4split::octad;
use g4split::squares::{self, BatchConfig, TABLE1};
use g4split::{kummer, Error, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::parse;
use crate::report::RunReport;

const Q: Rationals = Rationals;

fn model_for(point: &[BigRational]) -> Result<QuarticThreefold<Rationals>> {
    match point.len() {
        6 => Ok(QuarticThreefold::classical(Q)),
        5 => Ok(QuarticThreefold::symmetroid(Q)),
        n => Err(Error::InvalidInput(format!("points have 6 (classical) or 5 (symmetroid) coordinates, got {n}"))),
    }
}

fn vec_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|c| Q.to_json(c)).collect())
}

/// The four fields every igusa subcommand reports.
fn point_summary(i: &QuarticThreefold<Rationals>, a: &[BigRational]) -> Result<(Value, BigRational)> {
    let value = i.value(a)?;
    let elliptic = match i.model {
        g4split::igusa::Model::Classical => json!(i.is_elliptic(a)?),
        g4split::igusa::Model::Symmetroid => Value::Null,
    };
    let v = json!({
        "point": vec_json(a),
        "model": format!("{:?}", i.model).to_lowercase(),
        "on_igusa": Q.is_zero(&value),
        "value": Q.to_json(&value),
        "elliptic": elliptic,
        "syntheme": i.is_on_singular_line(a)?,
        "polar_value": Value::Null,
    });
    Ok((v, value))
}

pub enum IgusaMode {
    CheckPoint,
    Polar,
    KummerSection,
}

pub fn igusa(mode: IgusaMode, point: &str, other: Option<&str>, sigma: Option<&str>) -> Result<RunReport> {
    let a = parse::rationals(point)?;
    let i = model_for(&a)?;
    let name = match mode {
        IgusaMode::CheckPoint => "igusa check-point",
        IgusaMode::Polar => "igusa polar",
        IgusaMode::KummerSection => "igusa kummer-section",
    };
    let mut rep = RunReport::new(name, json!({"point": point, "other": other, "sigma": sigma}));
    let (mut res, value) = point_summary(&i, &a)?;
    rep.check("on_igusa", Q.is_zero(&value), Q.to_json(&value));
    let b = match (other, sigma) {
        (Some(o), _) => Some(parse::rationals(o)?),
        (None, Some(s)) => Some(SigmaAction::parse(s)?.apply(&a)),
        _ => None,
    };
    match mode {
        IgusaMode::CheckPoint => {
            if let Some(b) = &b {
                res["polar_value"] = Q.to_json(&i.polar_pair(&a, b)?);
            }
        }
        IgusaMode::Polar => {
            let b = b.ok_or_else(|| Error::InvalidInput("polar needs --other or --sigma".into()))?;
            let ab = i.polar_pair(&a, &b)?;
            let ba = i.polar_pair(&b, &a)?;
            let vb = i.value(&b)?;
            res["other"] = vec_json(&b);
            res["polar_value"] = Q.to_json(&ab);
            res["reverse_polar_value"] = Q.to_json(&ba);
            res["case"] = match glue::classify_pair(&i, &a, &b) {
                Ok(c) => json!(c.case.as_str()),
                Err(_) => Value::Null,
            };
            rep.check("other_on_igusa", Q.is_zero(&vb), Q.to_json(&vb));
        }
        IgusaMode::KummerSection => {
            if let Some(b) = &b {
                res["polar_value"] = Q.to_json(&i.polar_pair(&a, b)?);
            }
            let ks = i.kummer_section(&a)?;
            let n = ks.distinct_node_count();
            res["section"] = json!({
                "space": ks.space.to_json(),
                "quartic": ks.quartic.display_with(&["v0", "v1", "v2", "w"]),
                "nodes": ks.nodes.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
                "distinct_nodes": n,
            });
            rep.check("sixteen_nodes", n == 16, json!(n));
        }
    }
    rep.result = res;
    Ok(rep)
}

pub fn kummer_extract(point: &str, bound: u64) -> Result<RunReport> {
    let a = parse::rationals(point)?;
    let i = model_for(&a)?;
    let mut rep = RunReport::new("kummer extract", json!({"point": point, "height_bound": bound}));
    let ex = kummer::extract(&i, &a, bound)?;
    let mut res = ex.to_json();
    res["conic_point"] = ex.point.to_json();
    rep.check("conic_point_on_conic", ex.polar.conic.contains(&ex.point), ex.point.to_json());
    match HypCurve::new(ex.branch.clone()) {
        Ok(c) => {
            let inv = c.igusa_clebsch()?;
            res["ic_invariants"] = inv.to_json();
            res["curve"] = c.to_json();
            rep.check("branch_squarefree", true, json!(ex.branch.degree()));
        }
        Err(e) => rep.check("branch_squarefree", false, json!(e.to_string())),
    }
    rep.result = res;
    Ok(rep)
}

pub fn glue_construct(a: &str, b: &str, sigma: Option<&str>, bound: u64) -> Result<RunReport> {
    let pa = parse::rationals(a)?;
    let i = model_for(&pa)?;
    let pb = if b.trim() == "auto-sigma" {
        SigmaAction::parse(sigma.unwrap_or("(0,1,2)"))?.apply(&pa)
    } else {
        parse::rationals(b)?
    };
    let mut rep = RunReport::new("glue construct", json!({"a": a, "b": b, "sigma": sigma, "height_bound": bound}));
    let d = glue::construct(&i, &pa, &pb, bound)?;
    match &d {
        GluingDatum::D4(x) => {
            rep.check("polar_ab_zero", Q.is_zero(&x.class.ab), Q.to_json(&x.class.ab));
            rep.check("polar_ba_nonzero", !Q.is_zero(&x.class.ba), Q.to_json(&x.class.ba));
            rep.check("branch_quadratic", x.check_branch_quadratic, json!(x.mu_branch.coeffs().iter().map(|c| Q.to_json(c)).collect::<Vec<_>>()));
            rep.check("transport", x.check_transport, json!(x.transported.coeffs().iter().map(|c| Q.to_json(c)).collect::<Vec<_>>()));
            let ia = x.c_a.igusa_clebsch()?;
            let ib = x.c_b.igusa_clebsch()?;
            rep.check("C_a_isomorphic_C_b", ia.weighted_eq(&ib), json!({"C_a": ia.to_json(), "C_b": ib.to_json()}));
        }
        GluingDatum::V4(x) => {
            rep.check("polar_ab_zero", Q.is_zero(&x.class.ab), Q.to_json(&x.class.ab));
            rep.check("polar_ba_zero", Q.is_zero(&x.class.ba), Q.to_json(&x.class.ba));
            rep.check("five_shared_nodes", x.shared.len() == 5, json!(x.shared.len()));
        }
    }
    rep.result = d.to_json();
    Ok(rep)
}

pub struct Genus4Args<'a> {
    pub case: &'a str,
    pub f: Option<&'a str>,
    pub q: Option<&'a str>,
    pub lambda: Option<&'a str>,
    pub g_c: Option<&'a str>,
    pub g_d: Option<&'a str>,
    pub beta: &'a str,
    pub d1: &'a str,
    pub d2: &'a str,
}

pub fn glue_genus4(args: &Genus4Args) -> Result<RunReport> {
    let mut rep = RunReport::new(
        "glue genus4",
        json!({
            "case": args.case, "f": args.f, "q": args.q, "lambda": args.lambda,
            "g_c": args.g_c, "g_d": args.g_d, "beta": args.beta, "d1": args.d1, "d2": args.d2,
        }),
    );
    match args.case {
        "d4" => {
            let f = parse::form(args.f.unwrap_or("0,112,124,-6,-16,2"))?;
            let q = parse::form(args.q.unwrap_or("3721,478,121"))?;
            let lambda = args.lambda.map(parse_rational).transpose()?;
            let sols = glue::genus4_d4(&f, &q, lambda)?;
            for (k, m) in sols.iter().enumerate() {
                rep.check(format!("norm_identity[{k}]"), m.norm_identity(), json!(null));
            }
            if let (Some(c), Some(d)) = (args.g_c, args.g_d) {
                let c = parse::form(c)?;
                let d = parse_rational(d)?;
                let hit = sols.iter().position(|m| m.same_twist_orbit(&c, &d));
                rep.check("given_g_in_twist_orbit", hit.is_some(), json!(hit));
            }
            rep.result = json!({
                "case": "d4",
                "solutions": sols.into_iter().map(|m| Genus4Curve::D4(m).to_json()).collect::<Vec<_>>(),
            });
        }
        "v4" => {
            let f = parse::form(args.f.unwrap_or("-1,0,0,0,0,1"))?;
            let x = glue::genus4_v4(&f, &parse_rational(args.beta)?, &parse_rational(args.d1)?, &parse_rational(args.d2)?)?;
            if let Genus4Curve::Hyperelliptic { f10 } = &x {
                rep.check("degree_10", f10.degree() == 10, json!(f10.degree()));
                rep.check("square_free", f10.is_squarefree(), json!(null));
            }
            let mut res = x.to_json();
            res["case"] = json!("v4");
            rep.result = res;
        }
        c => return Err(Error::InvalidInput(format!("unknown case {c:?}; use d4 or v4"))),
    }
    Ok(rep)
}

fn add_gluing_checks<F: Field>(rep: &mut RunReport, g: &squares::SquareGluing<F>) {
    for (name, ok) in &g.checks {
        if rep.checks.iter().any(|c| c.name == *name) {
            continue;
        }
        rep.check(*name, *ok, json!(null));
    }
}

pub fn squares_family(row: &str, u: Option<&str>, v: Option<&str>) -> Result<RunReport> {
    let idx = squares::table1_row(row)?;
    let spec = &TABLE1[idx];
    let mut params = vec![];
    for (name, val) in spec.params.iter().zip([u, v]) {
        let val = val.ok_or_else(|| Error::InvalidInput(format!("row {} needs --{name}", spec.label)))?;
        params.push(parse_rational(val)?);
    }
    let mut rep = RunReport::new("squares family", json!({"row": row, "u": u, "v": v}));
    let (inst, g) = squares::family_gluing(idx, &params)?;
    let fl = &inst.field;
    rep.check("overlap_is_5", g.overlap == 5, json!(g.overlap));
    add_gluing_checks(&mut rep, &g);
    let mut res = g.to_json();
    res["row"] = json!(spec.label);
    res["f"] = json!(spec.f);
    res["params"] = vec_json(&params);
    res["field"] = json!({"generator": fl.name(), "degree": fl.degree()});
    res["B"] = Value::Array(inst.b.coeffs().iter().map(|c| fl.to_json(c)).collect());
    res["mu_display"] = json!(squares::mobius_display(fl, &inst.mu));
    res["mu_prime"] = match &inst.mu_prime {
        Some(m) => json!({
            "corrected": squares::mobius_display(fl, m),
            "printed": inst.mu_prime_printed.as_ref().map(|p| squares::mobius_display(fl, p)),
            "printed_overlap": inst.mu_prime_printed.as_ref().map(|p| squares::overlap_degree(&inst.b, p)).transpose()?,
        }),
        None => Value::Null,
    };
    rep.result = res;
    Ok(rep)
}

pub fn squares_example(name: &str, u: &str, v: &str, symbolic: bool) -> Result<RunReport> {
    let mut rep = RunReport::new("squares example", json!({"name": name, "u": u, "v": v, "symbolic": symbolic}));
    match name {
        "m2-nonhyp" => {
            let g = squares::example_m2_nonhyp()?;
            add_gluing_checks(&mut rep, &g);
            rep.result = g.to_json();
            rep.result["example"] = json!("m2-nonhyp");
        }
        "2dim" => {
            let (u, v) = (parse_rational(u)?, parse_rational(v)?);
            let g = squares::example_2dim(&u, &v)?;
            add_gluing_checks(&mut rep, &g);
            rep.result = g.to_json();
            rep.result["example"] = json!("2dim");
            rep.result["printed_model"] = squares::example_2dim_printed(&Q, &u, &v)?
                .coeffs()
                .iter()
                .map(|c| Q.to_json(c))
                .collect();
            if symbolic {
                let (_, same) = squares::example_2dim_symbolic()?;
                rep.check("symbolic_identity_in_u_v", same, json!(null));
            }
        }
        n => return Err(Error::InvalidInput(format!("unknown example {n:?}; use m2-nonhyp or 2dim"))),
    }
    Ok(rep)
}

pub fn squares_table(cfg: &BatchConfig) -> Result<RunReport> {
    let mut rep = RunReport::new(
        "squares table",
        json!({"seed": cfg.seed, "per_row": cfg.per_row, "mu_prime_per_row": cfg.mu_prime_per_row, "build_x": cfg.build_x}),
    );
    rep.seed = Some(cfg.seed);
    let rows = squares::table_batch(cfg)?;
    for r in &rows {
        let ov: Vec<usize> = r.samples.iter().map(|s| s.overlap).collect();
        rep.check(format!("row {}", r.label), r.passed(), json!({"overlaps": ov, "mu_prime": r.mu_prime.len()}));
    }
    rep.result = json!({"rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>()});
    Ok(rep)
}

/// Checks a full survey against the expected shape: the degenerate classes
/// stay inside fixed ∪ elliptic, exactly one class has rate 1, the rest < 1/10.
pub fn survey_checks(rep: &mut RunReport, s: &SurveyReport) {
    let degenerate = ["()", "(0,1)", "(0,1)(2,3)(4,5)"];
    for d in degenerate {
        let sigma = SigmaAction::parse(d).expect("valid");
        if let Some(r) = s.row(&sigma) {
            rep.check(format!("degenerate class {d}"), r.degenerate == r.samples, json!({"degenerate": r.degenerate, "samples": r.samples}));
        }
    }
    let full: Vec<String> = s.rows.iter().filter(|r| r.rate_at_least(1, 1)).map(|r| r.sigma.to_string()).collect();
    let unique = full.len() == 1
        && s.rows.iter().any(|r| r.rate_at_least(1, 1) && r.sigma.cycle_type() == vec![2, 2, 1, 1]);
    rep.check("unique_full_rate_class", unique, json!(full));
    let high: Vec<String> = s
        .rows
        .iter()
        .filter(|r| !r.rate_at_least(1, 1) && r.rate().is_some_and(|(k, m)| 10 * k >= m))
        .map(|r| format!("{} {}", r.sigma, r.rate_string()))
        .collect();
    rep.check("other_rates_below_0.1", high.is_empty(), json!(high));
}

pub fn locus_survey(cfg: &SurveyConfig, sigma: Option<&str>, with_samples: bool) -> Result<RunReport> {
    let mut rep = RunReport::new(
        "locus survey",
        json!({"p": cfg.p, "n": cfg.n, "seed": cfg.seed, "sigma": sigma, "batch": cfg.batch, "sequential": cfg.sequential}),
    );
    rep.seed = Some(cfg.seed);
    let sigmas = match sigma {
        Some(s) => vec![SigmaAction::parse(s)?],
        None => locus::class_representatives(),
    };
    let s = locus::implication_survey(&sigmas, cfg)?;
    let mut bad = 0;
    for r in &s.rows {
        for x in &r.set.samples {
            if !locus::verify_sample(&r.sigma, cfg.p, x)? {
                bad += 1;
            }
        }
    }
    rep.check("samples_verified", bad == 0, json!({"failed": bad}));
    if sigma.is_none() {
        survey_checks(&mut rep, &s);
    }
    rep.result = s.to_json(with_samples);
    Ok(rep)
}

pub fn octad_complete(p6: &str, p7: &str, bound: u64) -> Result<RunReport> {
    let a = parse::rationals(p6)?;
    let b = parse::rationals(p7)?;
    let mut rep = RunReport::new("octad complete", json!({"p6": p6, "p7": p7, "height_bound": bound}));
    let o = octad::octad_quartic(&Q, &a, &b)?;
    let (res, _) = octad::complete_json(&o, bound);
    rep.check("net_vanishes", o.checks.net_vanishes, res["p8"].clone());
    rep.check("containment", o.checks.containment, res["psi"].clone());
    rep.check("tangency", o.checks.tangency, res["tangency_point"].clone());
    let agree = res["genus2"]["pipelines_agree"].as_bool().unwrap_or(false);
    rep.check(
        "pipelines_agree",
        agree,
        json!({"rnc": res["genus2"]["ic_invariants"], "kummer": res["genus2"]["kummer_invariants"], "error": res["genus2"]["error"]}),
    );
    rep.result = res;
    Ok(rep)
}
