//! Verb implementations. Artifacts are written atomically per verb; all
//! randomness derives from (base seed, job index).

use crate::config;
use clap::Args;
use loewner_lab::conditions::{
    self, detect_six_arm, fit_power_law, test_condition_g2, G2Config, Verdict,
};
use loewner_lab::geometry::{Curve, CurveMeta, Point};
use loewner_lab::lattice::{DiscreteDomain, DomainSpec, MedialDomain, SquareDomain, TriDomain};
use loewner_lab::loewner::{
    extract_driving, hcap_curve, hcap_hull, hcap_rect_oracle, rect_width_convention, solve_trace,
};
use loewner_lab::models::{ModelParams, ModelSpec, ModelTag};
use loewner_lab::rng::mix64;
use loewner_lab::runner::run_jobs;
use loewner_lab::sle::{
    driving_tail_report, estimate_kappa, kappa_continuity_experiment, sample_sle_driving, SleSpec,
};
use loewner_lab::{io, Error, Result};
use serde_json::{json, Value};
use std::process::ExitCode;

const OK: ExitCode = ExitCode::SUCCESS;

fn write(path: &str, contents: &str) -> Result<()> {
    if let Some(parent) = std::path::Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn load_domain(path: &str) -> Result<DiscreteDomain> {
    config::require_file(path)?;
    let text = std::fs::read_to_string(path)?;
    let spec: DomainSpec = serde_json::from_str(&text)?;
    DiscreteDomain::from_spec(&spec)
}

fn pick<T>(flag: Option<T>, from_cfg: Option<T>, default: T) -> T {
    flag.or(from_cfg).unwrap_or(default)
}

fn model_spec(
    model: &str,
    domain: &str,
    seed: u64,
    p: Option<f64>,
    q: Option<f64>,
    sweeps: Option<u32>,
) -> Result<ModelSpec> {
    let tag = ModelTag::parse(model)?;
    let domain = load_domain(domain)?;
    Ok(ModelSpec { tag, domain, params: ModelParams { p, q, sweeps }, seed })
}

// ----------------------------------------------------------------- sample

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    sweeps: Option<u32>,
}

pub fn sample(a: &SampleArgs, cfg_path: Option<&str>, workers: usize) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let model = pick(a.model.clone(), config::str_field(&cfg, "model"), String::new());
    if model.is_empty() {
        return Err(Error::invalid("sample needs --model"));
    }
    let domain = pick(a.domain.clone(), config::str_field(&cfg, "domain"), String::new());
    if domain.is_empty() {
        return Err(Error::invalid("sample needs --domain"));
    }
    let n = pick(a.n, config::u64_field(&cfg, "n"), 1);
    let seed = pick(a.seed, config::u64_field(&cfg, "seed"), 0);
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "curves.ndjson".into());
    let spec = model_spec(&model, &domain, seed, a.p, a.q, a.sweeps)?;
    let lines = run_jobs(n, workers, |i| {
        let mut s = spec.clone();
        s.seed = mix64(seed ^ mix64(i));
        loewner_lab::models::sample(&s).map(|c| io::curve_to_ndjson(&c))
    });
    let mut text = String::new();
    for line in lines {
        text.push_str(&line?);
        text.push('\n');
    }
    write(&out, &text)?;
    println!("wrote {n} curves to {out}");
    Ok(OK)
}

// ------------------------------------------------------------------ trace

#[derive(Args)]
pub struct TraceArgs {
    /// Driving function CSV ("t,w").
    #[arg(long)]
    driving: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    /// Tip offset; defaults to sqrt(dt).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

pub fn trace(a: &TraceArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let driving = pick(a.driving.clone(), config::str_field(&cfg, "driving"), String::new());
    if driving.is_empty() {
        return Err(Error::invalid("trace needs --driving"));
    }
    config::require_file(&driving)?;
    let w = io::driving_from_csv(&std::fs::read_to_string(&driving)?)?;
    let dt = pick(a.dt, config::f64_field(&cfg, "dt"), w.duration() / 1000.0);
    let eps = pick(a.eps, config::f64_field(&cfg, "eps"), dt.sqrt());
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "trace.ndjson".into());
    let c = solve_trace(&w, dt, eps)?;
    write(&out, &(io::curve_to_ndjson(&c) + "\n"))?;
    println!("traced {} points to {out}", c.len());
    Ok(OK)
}

// --------------------------------------------------------- extract-driving

#[derive(Args)]
pub struct ExtractArgs {
    /// Curve NDJSON (one curve per line).
    #[arg(long)]
    curves: Option<String>,
    /// Extract only this line (default: all).
    #[arg(long)]
    index: Option<usize>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

pub fn extract(a: &ExtractArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let curves_path = pick(a.curves.clone(), config::str_field(&cfg, "curves"), String::new());
    if curves_path.is_empty() {
        return Err(Error::invalid("extract-driving needs --curves"));
    }
    config::require_file(&curves_path)?;
    let curves = io::curves_from_ndjson(&std::fs::read_to_string(&curves_path)?)?;
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "driving.csv".into());
    let tol = pick(a.tol, config::f64_field(&cfg, "tol"), 1e-9);
    let selected: Vec<(usize, &Curve)> = match a.index {
        Some(i) => vec![(
            i,
            curves.get(i).ok_or_else(|| Error::invalid(format!("no curve at index {i}")))?,
        )],
        None => curves.iter().enumerate().collect(),
    };
    for (i, c) in &selected {
        let w = extract_driving(c, tol)?;
        let path = if selected.len() == 1 {
            out.clone()
        } else {
            numbered(&out, *i)
        };
        write(&path, &io::driving_to_csv(&w))?;
    }
    println!("extracted {} driving function(s)", selected.len());
    Ok(OK)
}

fn numbered(path: &str, i: usize) -> String {
    match path.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}.{i}.{ext}"),
        None => format!("{path}.{i}"),
    }
}

// --------------------------------------------------------- check-condition

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    /// Annulus ratio threshold C (outer radius = C * r).
    #[arg(long)]
    c_ratio: Option<f64>,
    /// Comma-separated inner radii.
    #[arg(long)]
    radii: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output prefix: writes <prefix>.csv, <prefix>.json, <prefix>_plot.py.
    #[arg(long)]
    out_prefix: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    sweeps: Option<u32>,
}

pub fn check_condition(a: &CheckArgs, cfg_path: Option<&str>, workers: usize) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let model = pick(a.model.clone(), config::str_field(&cfg, "model"), String::new());
    let domain = pick(a.domain.clone(), config::str_field(&cfg, "domain"), String::new());
    if model.is_empty() || domain.is_empty() {
        return Err(Error::invalid("check-condition needs --model and --domain"));
    }
    let c_ratio = pick(a.c_ratio, config::f64_field(&cfg, "c_ratio"), 8.0);
    let radii = match (&a.radii, config::f64_list(&cfg, "radii")) {
        (Some(s), _) => config::parse_f64_list(s)?,
        (None, Some(v)) => v,
        (None, None) => vec![2.5],
    };
    let n = pick(a.n, config::u64_field(&cfg, "n"), 500);
    let seed = pick(a.seed, config::u64_field(&cfg, "seed"), 0);
    let prefix = pick(a.out_prefix.clone(), config::str_field(&cfg, "out_prefix"), "g2".into());
    let spec = model_spec(&model, &domain, seed, a.p, a.q, a.sweeps)?;
    let mut g2 = G2Config::new(c_ratio, radii, n, seed);
    if spec.tag == ModelTag::HarmonicExplorer {
        g2.resample_budget = 1;
    }
    // fixed shard structure keeps outputs identical for any worker count
    let n_shards = n.min(16);
    let bounds: Vec<(u64, u64)> = (0..n_shards)
        .map(|s| (s * n / n_shards, (s + 1) * n / n_shards))
        .collect();
    let shards = run_jobs(n_shards, workers, |s| {
        let (lo, hi) = bounds[s as usize];
        test_condition_g2(&spec, &g2.shard(lo, hi))
    });
    let mut row_shards = Vec::new();
    let mut binding = String::new();
    for shard in shards {
        let rep = shard?;
        binding = rep.binding_rule.clone();
        row_shards.push(rep.rows);
    }
    let rows = io::merge_reports(&row_shards)?;
    let verdict = conditions::verdict_of(&rows, &binding);
    // fitted power law over the binding rows, grouped by ratio
    let mut per_ratio: std::collections::BTreeMap<i64, (f64, u64, u64)> = Default::default();
    for r in rows.iter().filter(|r| r.tau_rule == binding) {
        let ratio = r.r / r.big_r;
        let e = per_ratio.entry((ratio * 1e9) as i64).or_insert((ratio, 0, 0));
        e.1 += r.hits;
        e.2 += r.trials;
    }
    let fit_rows: Vec<(f64, u64, u64)> = per_ratio.values().copied().collect();
    let fitted = if fit_rows.len() >= 3 {
        fit_power_law(&fit_rows).ok().map(|f| json!({"k": f.k, "delta": f.delta}))
    } else {
        None
    };
    write(&format!("{prefix}.csv"), &io::report_to_csv(&rows))?;
    let summary = json!({
        "version": 1,
        "verb": "check-condition",
        "model": model,
        "c_ratio": c_ratio,
        "n_samples": n,
        "base_seed": seed,
        "binding_rule": binding,
        "verdict": format!("{verdict:?}"),
        "fitted_power_law": fitted,
        "rows_csv": format!("{prefix}.csv"),
    });
    write(&format!("{prefix}.json"), &pretty(&summary))?;
    write(&format!("{prefix}_plot.py"), &report_plot_script(&format!("{prefix}.csv")))?;
    println!("verdict: {verdict:?} ({} rows)", rows.len());
    Ok(exit_for(verdict))
}

fn exit_for(v: Verdict) -> ExitCode {
    match v {
        Verdict::Pass | Verdict::VacuousPass => OK,
        Verdict::Fail | Verdict::Inconclusive => ExitCode::from(2),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn report_plot_script(csv: &str) -> String {
    format!(
        "#!/usr/bin/env python3\n\
         # plot crossing-report cells: upper CI per cell, binding threshold 1/2\n\
         import csv\n\
         import matplotlib.pyplot as plt\n\
         rows = list(csv.DictReader(open({csv:?})))\n\
         for rule in sorted(set(r['tau_rule'] for r in rows)):\n\
         \x20   sel = [r for r in rows if r['tau_rule'] == rule and int(r['trials']) > 0]\n\
         \x20   xs = range(len(sel))\n\
         \x20   plt.scatter(xs, [float(r['ci_hi']) for r in sel], label=rule, s=12)\n\
         plt.axhline(0.5, color='red', ls='--', label='1/2')\n\
         plt.xlabel('cell'); plt.ylabel('upper CI'); plt.legend(); plt.tight_layout()\n\
         plt.savefig({csv:?}.replace('.csv', '.png'), dpi=150)\n"
    )
}

// --------------------------------------------------------------- capacity

#[derive(Args)]
pub struct CapacityArgs {
    /// rect | halfdisc | slit (or use --curves).
    #[arg(long)]
    shape: Option<String>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    /// Curve NDJSON: capacity of each hull via the zipper.
    #[arg(long)]
    curves: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

pub fn capacity(a: &CapacityArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "capacity.json".into());
    let shape = pick(a.shape.clone(), config::str_field(&cfg, "shape"), String::new());
    let summary = if let Some(curves_path) = &a.curves {
        config::require_file(curves_path)?;
        let curves = io::curves_from_ndjson(&std::fs::read_to_string(curves_path)?)?;
        let reports: Vec<Value> = curves
            .iter()
            .map(|c| {
                hcap_curve(c).map(|r| {
                    json!({"hcap": r.hcap, "method": r.method, "est_error": r.est_error})
                })
            })
            .collect::<Result<_>>()?;
        json!({"version": 1, "verb": "capacity", "curves": curves_path, "reports": reports})
    } else {
        match shape.as_str() {
            "rect" => {
                let w = pick(a.w, config::f64_field(&cfg, "w"), 100.0);
                let h = pick(a.h, config::f64_field(&cfg, "h"), 2.0);
                let poly = vec![
                    Point::new(-w / 2.0, 0.0),
                    Point::new(w / 2.0, 0.0),
                    Point::new(w / 2.0, h),
                    Point::new(-w / 2.0, h),
                ];
                let rep = hcap_hull(&poly)?;
                let (l_over_w, conv_ratio) = rect_width_convention(rep.hcap, w, h);
                json!({
                    "version": 1, "verb": "capacity", "shape": "rect", "w": w, "h": h,
                    "hcap": rep.hcap, "method": rep.method, "est_error": rep.est_error,
                    "ratio_to_wh_over_2pi": rep.hcap / (w * h / (2.0 * std::f64::consts::PI)),
                    "measured_width_convention": {
                        "l_over_w": l_over_w,
                        "ratio_at_convention": conv_ratio,
                        "note": "quoted h*l/(2*pi) holds with l = l_over_w * w; \
                                 measured asymptotic is w*h/pi for the full width w"
                    },
                    "thin_rect_reference": hcap_rect_oracle(w, h),
                })
            }
            "halfdisc" => {
                let radius = pick(a.radius, config::f64_field(&cfg, "radius"), 1.0);
                let n = 128;
                let poly: Vec<Point> = (0..=n)
                    .map(|i| {
                        let th = std::f64::consts::PI * i as f64 / n as f64;
                        Point::new(radius * th.cos(), radius * th.sin())
                    })
                    .collect();
                let rep = hcap_hull(&poly)?;
                json!({
                    "version": 1, "verb": "capacity", "shape": "halfdisc", "radius": radius,
                    "hcap": rep.hcap, "method": rep.method, "est_error": rep.est_error,
                    "exact": radius * radius,
                })
            }
            "slit" => {
                let h = pick(a.h, config::f64_field(&cfg, "h"), 1.0);
                let n = 400;
                let pts: Vec<Point> =
                    (0..=n).map(|i| Point::new(0.0, h * i as f64 / n as f64)).collect();
                let c = Curve::new(pts, CurveMeta::default())?;
                let rep = hcap_curve(&c)?;
                json!({
                    "version": 1, "verb": "capacity", "shape": "slit", "h": h,
                    "hcap": rep.hcap, "method": rep.method, "est_error": rep.est_error,
                    "exact": h * h / 2.0,
                })
            }
            other => {
                return Err(Error::invalid(format!(
                    "unknown shape '{other}' (rect | halfdisc | slit, or --curves)"
                )))
            }
        }
    };
    write(&out, &pretty(&summary))?;
    println!("wrote {out}");
    Ok(OK)
}

// ---------------------------------------------------------------- six-arm

#[derive(Args)]
pub struct SixArmArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated crosscut diameters r.
    #[arg(long)]
    r_list: Option<String>,
    #[arg(long)]
    big_r: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Candidate-time subsampling stride.
    #[arg(long)]
    stride: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

pub fn six_arm(a: &SixArmArgs, cfg_path: Option<&str>, workers: usize) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let model = pick(a.model.clone(), config::str_field(&cfg, "model"), String::new());
    let domain_path = pick(a.domain.clone(), config::str_field(&cfg, "domain"), String::new());
    if model.is_empty() || domain_path.is_empty() {
        return Err(Error::invalid("six-arm needs --model and --domain"));
    }
    let n = pick(a.n, config::u64_field(&cfg, "n"), 200);
    let seed = pick(a.seed, config::u64_field(&cfg, "seed"), 0);
    let big_r = pick(a.big_r, config::f64_field(&cfg, "big_r"), 16.0);
    let rho = pick(a.rho, config::f64_field(&cfg, "rho"), big_r);
    let stride = pick(a.stride, config::u64_field(&cfg, "stride"), 2) as usize;
    let r_list = match (&a.r_list, config::f64_list(&cfg, "r_list")) {
        (Some(s), _) => config::parse_f64_list(s)?,
        (None, Some(v)) => v,
        (None, None) => vec![8.0, 4.0, 2.0],
    };
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "sixarm.json".into());
    let spec = model_spec(&model, &domain_path, seed, None, None, None)?;
    let graph = match &spec.domain {
        DiscreteDomain::Triangular(d) => conditions::tri_route_graph(d)?,
        DiscreteDomain::Square(d) if spec.tag == ModelTag::UstPeano => {
            conditions::peano_route_graph(d)?
        }
        DiscreteDomain::Square(d) => conditions::square_route_graph(d)?,
        DiscreteDomain::Medial(d) => conditions::medial_route_graph(d)?,
    };
    let results = run_jobs(n, workers, |i| -> Result<Vec<bool>> {
        let mut s = spec.clone();
        s.seed = mix64(seed ^ mix64(i));
        let curve = loewner_lab::models::sample(&s)?;
        r_list
            .iter()
            .map(|&r| detect_six_arm(&curve, &graph, r, big_r, rho, stride).map(|w| w.is_some()))
            .collect()
    });
    let mut hits = vec![0u64; r_list.len()];
    for res in results {
        for (k, hit) in res?.into_iter().enumerate() {
            hits[k] += u64::from(hit);
        }
    }
    let rows: Vec<Value> = r_list
        .iter()
        .zip(&hits)
        .map(|(&r, &h)| json!({"r": r, "big_r": big_r, "trials": n, "hits": h, "freq": h as f64 / n as f64}))
        .collect();
    let summary = json!({
        "version": 1, "verb": "six-arm", "model": model, "base_seed": seed,
        "rho": rho, "stride": stride, "rows": rows,
    });
    write(&out, &pretty(&summary))?;
    println!("wrote {out}");
    Ok(OK)
}

// ------------------------------------------------------------------ kappa

#[derive(Args)]
pub struct KappaArgs {
    /// Extract drivings from sampled interfaces of this model.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    /// Or: synthetic SLE drivings with this kappa.
    #[arg(long)]
    synthetic_kappa: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Capacity-time cutoff for extracted drivings.
    #[arg(long)]
    t_cut: Option<f64>,
    /// Literature reference value to record alongside (external input).
    #[arg(long)]
    reference: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

pub fn kappa(a: &KappaArgs, cfg_path: Option<&str>, workers: usize) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let n = pick(a.n, config::u64_field(&cfg, "n"), 500);
    let seed = pick(a.seed, config::u64_field(&cfg, "seed"), 0);
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "kappa.json".into());
    let (drivings, source, reference): (Vec<_>, String, Option<f64>) =
        if let Some(k) = a.synthetic_kappa.or(config::f64_field(&cfg, "synthetic_kappa")) {
            let ds = run_jobs(n, workers, |i| {
                sample_sle_driving(&SleSpec::new(k, 0.5, 1e-3, mix64(seed ^ mix64(i))))
            });
            let ds: Result<Vec<_>> = ds.into_iter().collect();
            (ds?, format!("synthetic kappa={k}"), Some(k))
        } else {
            let model = pick(a.model.clone(), config::str_field(&cfg, "model"), "lerw".into());
            let domain_path =
                pick(a.domain.clone(), config::str_field(&cfg, "domain"), String::new());
            if domain_path.is_empty() {
                return Err(Error::invalid("kappa needs --domain (or --synthetic-kappa)"));
            }
            let spec = model_spec(&model, &domain_path, seed, None, None, None)?;
            let t_cut = pick(a.t_cut, config::f64_field(&cfg, "t_cut"), default_t_cut(&spec));
            let ds = run_jobs(n, workers, |i| -> Result<_> {
                let mut s = spec.clone();
                s.seed = mix64(seed ^ mix64(i));
                let c = loewner_lab::models::sample(&s)?;
                let w = extract_driving(&c, 1e-9)?;
                // strictly common uniform grid across the ensemble
                w.sampled_on(t_cut / 50.0, 50)
            });
            let ds: Result<Vec<_>> = ds.into_iter().collect();
            let reference = a
                .reference
                .or(config::f64_field(&cfg, "reference"))
                .or(match model.as_str() {
                    "lerw" => Some(2.0),
                    "percolation" => Some(6.0),
                    _ => None,
                });
            (ds?, format!("{model} extracted"), reference)
        };
    let est = estimate_kappa(&drivings, seed)?;
    let stats = driving_tail_report(&drivings)?;
    let summary = json!({
        "version": 1, "verb": "kappa", "source": source, "n": n, "base_seed": seed,
        "kappa_hat": est.kappa_hat, "ci_lo": est.ci_lo, "ci_hi": est.ci_hi,
        "ci_width": est.ci_hi - est.ci_lo,
        "lag1_autocorr": est.lag1_autocorr,
        "reference_external": reference,
        "tail_rows": stats.tail_rows,
        "fitted_tail_decay": stats.fitted_decay,
        "exp_moment": stats.exp_moment,
    });
    write(&out, &pretty(&summary))?;
    println!("kappa_hat = {:.4} [{:.4}, {:.4}]", est.kappa_hat, est.ci_lo, est.ci_hi);
    Ok(OK)
}

fn default_t_cut(spec: &ModelSpec) -> f64 {
    let scale = match &spec.domain {
        DiscreteDomain::Square(d) => d.w.max(d.h) as f64,
        DiscreteDomain::Triangular(d) => d.interior.len() as f64 / 8.0,
        DiscreteDomain::Medial(d) => d.m.max(d.n) as f64,
    };
    (0.25 * scale).powi(2) / 4.0
}


// ------------------------------------------------------------- continuity

#[derive(Args)]
pub struct ContinuityArgs {
    #[arg(long)]
    kappa: Option<f64>,
    /// Comma-separated deltas.
    #[arg(long)]
    deltas: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    n_seeds: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

pub fn continuity(a: &ContinuityArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let kappa = pick(a.kappa, config::f64_field(&cfg, "kappa"), 2.0);
    let deltas = match (&a.deltas, config::f64_list(&cfg, "deltas")) {
        (Some(s), _) => config::parse_f64_list(s)?,
        (None, Some(v)) => v,
        (None, None) => vec![0.5, 0.25, 0.125],
    };
    let t = pick(a.t, config::f64_field(&cfg, "t"), 0.25);
    let dt = pick(a.dt, config::f64_field(&cfg, "dt"), 5e-4);
    let n_seeds = pick(a.n_seeds, config::u64_field(&cfg, "n_seeds"), 40);
    let seed = pick(a.seed, config::u64_field(&cfg, "seed"), 0);
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "continuity.json".into());
    let rows = kappa_continuity_experiment(kappa, &deltas, t, dt, n_seeds, seed)?;
    let monotone = rows.windows(2).all(|w| w[1].mean_distance <= w[0].mean_distance);
    let summary = json!({
        "version": 1, "verb": "continuity", "kappa": kappa, "t": t, "dt": dt,
        "n_seeds": n_seeds, "base_seed": seed,
        "rows": rows.iter().map(|r| json!({
            "delta": r.delta, "mean_distance": r.mean_distance,
            "max_distance": r.max_distance, "mean_diameter": r.mean_diameter,
        })).collect::<Vec<_>>(),
        "monotone_decreasing": monotone,
    });
    write(&out, &pretty(&summary))?;
    println!("wrote {out} (monotone: {monotone})");
    Ok(OK)
}

// ---------------------------------------------------------- merge-reports

#[derive(Args)]
pub struct MergeArgs {
    /// Input report CSV shards.
    #[arg(long, num_args = 1..)]
    inputs: Vec<String>,
    #[arg(long)]
    out: Option<String>,
    /// Recompute a verdict over the merged rows with this binding rule.
    #[arg(long)]
    binding_rule: Option<String>,
    #[arg(long)]
    summary_out: Option<String>,
}

pub fn merge_reports(a: &MergeArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let inputs = if a.inputs.is_empty() {
        config::str_field(&cfg, "inputs")
            .map(|s| s.split(',').map(str::to_string).collect::<Vec<_>>())
            .unwrap_or_default()
    } else {
        a.inputs.clone()
    };
    if inputs.is_empty() {
        return Err(Error::invalid("merge-reports needs --inputs"));
    }
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), "merged.csv".into());
    let mut shards = Vec::new();
    for path in &inputs {
        config::require_file(path)?;
        shards.push(io::report_from_csv(&std::fs::read_to_string(path)?)?);
    }
    let rows = io::merge_reports(&shards)?;
    write(&out, &io::report_to_csv(&rows))?;
    let binding = pick(a.binding_rule.clone(), config::str_field(&cfg, "binding_rule"), String::new());
    if !binding.is_empty() {
        let verdict = conditions::verdict_of(&rows, &binding);
        if let Some(sp) = &a.summary_out {
            write(
                sp,
                &pretty(&json!({
                    "version": 1, "verb": "merge-reports",
                    "binding_rule": binding, "verdict": format!("{verdict:?}"),
                })),
            )?;
        }
        println!("merged {} shards; verdict {verdict:?}", inputs.len());
        return Ok(exit_for(verdict));
    }
    println!("merged {} shards into {out}", inputs.len());
    Ok(OK)
}

// ------------------------------------------------------------- gen-domain

#[derive(Args)]
pub struct GenDomainArgs {
    /// rhombus | corridor | box | wired-box | column | medial-rect.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    size: Option<i64>,
    /// Second dimension (defaults to size).
    #[arg(long)]
    size2: Option<i64>,
    #[arg(long)]
    out: Option<String>,
}

pub fn gen_domain(a: &GenDomainArgs, cfg_path: Option<&str>) -> Result<ExitCode> {
    let cfg = config::load(cfg_path)?;
    let kind = pick(a.kind.clone(), config::str_field(&cfg, "kind"), "rhombus".into());
    let size = pick(a.size, cfg.get("size").and_then(Value::as_i64), 64) as i32;
    let size2 = pick(a.size2, cfg.get("size2").and_then(Value::as_i64), size as i64) as i32;
    let out = pick(a.out.clone(), config::str_field(&cfg, "out"), format!("{kind}{size}.json"));
    let spec = match kind.as_str() {
        "rhombus" => TriDomain::rhombus(size, size2).to_spec(),
        "corridor" => TriDomain::rhombus(size, 0).to_spec(),
        "box" => {
            SquareDomain::box_domain(size, size2, (size / 2, 0), (size / 2, size2))?.to_spec()
        }
        "wired-box" => SquareDomain::wired_bottom(size, size2)?.to_spec(),
        "column" => {
            let mut d = SquareDomain::box_domain(0, size2.max(2), (0, 0), (0, size2.max(2)))?;
            d.wired_arc = vec![((0, 0), (0, 1))];
            d.to_spec()
        }
        "medial-rect" => MedialDomain::rectangle(size, size2)?.to_spec(),
        other => return Err(Error::invalid(format!("unknown domain kind '{other}'"))),
    };
    let mut text = serde_json::to_string_pretty(&spec).expect("domain json");
    text.push('\n');
    write(&out, &text)?;
    println!("wrote {out}");
    Ok(OK)
}
