//! Experiment dispatch: one kind per run, deterministic reports.

use crate::config::{parse_function_literal, Config};
use crate::report::{f_cell, Report, Rows, Verdict};
use rdlab_core::conv::mozes::mozes_obstruction;
use rdlab_core::conv::norms::{l1, l2};
use rdlab_core::conv::opnorm::{opnorm_witness, DEFAULT_MAX_ITER, DEFAULT_TOL};
use rdlab_core::conv::rdprofile::{rd_profile, RdSampler};
use rdlab_core::conv::SparseGroupFunction;
use rdlab_core::cube::blowup::{blowup_check, BlowupSpace};
use rdlab_core::cube::hyperplane::{compute_hyperplanes, sageev_distance_check};
use rdlab_core::cube::median::DistanceMatrix;
use rdlab_core::cube::propmax::{prop_max_check, PropMaxSample};
use rdlab_core::cube::resolve_complex;
use rdlab_core::group::growth::{growth_profile, subgroup_distortion, DistortionClass, GrowthOptions};
use rdlab_core::group::metric::WordMetric;
use rdlab_core::group::registry::{builtin_keys, key_templates, resolve};
use rdlab_core::relhyp::bcp::{bcp_probe, BcpCaps};
use rdlab_core::relhyp::cset::{
    delta_calibrate, triple_intersection_check, CalibrateOpts, CsetCaps, CsetEngine,
};
use rdlab_core::relhyp::quasiconv::quasiconvexity_probe;
use rdlab_core::relhyp::resolve_family;
use rdlab_core::{Error, RealFn, Result};
use rand::Rng;
use rand::SeedableRng;

pub const KINDS: &[&str] = &[
    "bcp",
    "blowup",
    "c-set-triples",
    "distortion",
    "growth",
    "median-suite",
    "mozes",
    "prop-max",
    "quasiconvexity",
    "rd-profile",
];

pub struct Outcome {
    pub report: Report,
    pub rows: Rows,
}

pub fn run(config: &Config, budget: usize) -> Result<Outcome> {
    let kind = config.require("kind")?.to_string();
    let name = config.require("name")?.to_string();
    let (verdicts, rows, measurements) = match kind.as_str() {
        "growth" => growth_experiment(config, budget)?,
        "rd-profile" => rd_profile_experiment(config, budget)?,
        "mozes" => mozes_experiment(config, budget)?,
        "median-suite" => median_suite(config)?,
        "prop-max" => prop_max_experiment(config)?,
        "bcp" => bcp_experiment(config, budget)?,
        "c-set-triples" => cset_triples(config, budget)?,
        "distortion" => distortion_experiment(config, budget)?,
        "blowup" => blowup_experiment(config)?,
        "quasiconvexity" => quasiconvexity_experiment(config, budget)?,
        other => return Err(Error::Config(format!("unknown experiment kind `{other}`"))),
    };
    let pass = verdicts.iter().all(|v| v.pass);
    Ok(Outcome {
        report: Report {
            name: name.clone(),
            kind,
            config: config.entries.clone(),
            budget_max_elements: budget,
            verdicts,
            pass,
            measurements,
            rows_file: format!("{name}.rows.csv"),
        },
        rows,
    })
}

type Parts = (Vec<Verdict>, Rows, serde_json::Value);

fn growth_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let r_max = config.get_u32("r_max", 12)?;
    let model = resolve(key)?;
    let mut metric = WordMetric::with_budget(model, budget);
    let mut verdicts = Vec::new();
    let mut rows = Rows::new(vec!["r", "ball_size", "ratio_to_previous"]);
    match growth_profile(&mut metric, r_max, GrowthOptions::default()) {
        Ok(p) => {
            for (r, &size) in p.ball_sizes.iter().enumerate() {
                let ratio = if r == 0 {
                    String::new()
                } else {
                    f_cell(size as f64 / p.ball_sizes[r - 1] as f64)
                };
                rows.push(vec![r.to_string(), size.to_string(), ratio]);
            }
            let slope = p.fit.map(|f| f.slope);
            if let Some(expect) = config.get("expect_slope") {
                let expect: f64 = expect
                    .parse()
                    .map_err(|_| Error::Config("bad expect_slope".into()))?;
                let tol = config.get_f64("slope_tol", 0.2)?;
                let got = slope.unwrap_or(f64::NAN);
                verdicts.push(Verdict::new(
                    format!("slope within {tol} of {expect}"),
                    (got - expect).abs() <= tol,
                    format!("fitted {got}"),
                ));
            }
            if let Some(expect) = config.get("expect_superpolynomial") {
                let expect: bool = expect
                    .parse()
                    .map_err(|_| Error::Config("bad expect_superpolynomial".into()))?;
                verdicts.push(Verdict::new(
                    "superpolynomial flag",
                    p.superpolynomial == expect,
                    format!(
                        "flag {} (min window ratio {})",
                        p.superpolynomial, p.min_window_ratio
                    ),
                ));
            }
            if verdicts.is_empty() {
                verdicts.push(Verdict::new("profile computed", true, ""));
            }
            let m = serde_json::to_value(&p).expect("serializable");
            Ok((verdicts, rows, m))
        }
        Err(Error::BudgetExceeded { context, cap }) => {
            verdicts.push(Verdict::new(
                "within budget",
                false,
                format!("budget exceeded: {context} (cap {cap})"),
            ));
            Ok((verdicts, rows, serde_json::Value::Null))
        }
        Err(e) => Err(e),
    }
}

fn rd_profile_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let r_max = config.get_u32("r_max", 5)?;
    let model = resolve(key)?;
    let mut metric = WordMetric::with_budget(model.clone(), budget);
    let sampler = RdSampler {
        random_per_radius: config.get_u32("random_per_radius", 20)?,
        seed: config.get_u64("seed", 0)?,
        max_elements: config.get_usize("truncation_elements", 200_000)?,
        tol: config.get_f64("tol", DEFAULT_TOL)?,
        max_iter: config.get_u32("max_iter", DEFAULT_MAX_ITER)?,
    };
    let profile = rd_profile(&mut metric, r_max, sampler)?;
    let mut rows = Rows::new(vec![
        "r",
        "sample_id",
        "l1",
        "l2",
        "ratio_lower",
        "truncation_R",
        "iterations",
        "converged",
    ]);
    for row in &profile.rows {
        rows.push(vec![
            row.r.to_string(),
            row.sample_id.to_string(),
            f_cell(row.l1),
            f_cell(row.l2),
            f_cell(row.ratio_lower),
            row.truncation.to_string(),
            row.iterations.to_string(),
            row.converged.to_string(),
        ]);
    }
    // optional extra witness sample from a function literal
    if let Some(lit) = config.get("extra_sample") {
        let f = parse_function_literal(&model, lit)?;
        let rf: RealFn = f.map_values(|q| {
            use num_traits::ToPrimitive;
            q.to_f64().unwrap_or(f64::NAN)
        });
        let g = RealFn::ball_indicator(&mut metric, r_max)?;
        let w = opnorm_witness(&metric, &rf, &g)?;
        rows.push(vec![
            r_max.to_string(),
            "literal".to_string(),
            f_cell(l1(&rf)),
            f_cell(l2(&rf)),
            f_cell(w / l2(&rf)),
            r_max.to_string(),
            "0".to_string(),
            "true".to_string(),
        ]);
    }
    let mut verdicts = Vec::new();
    if let Some(expect) = config.get("expect_exponent") {
        let expect: f64 = expect
            .parse()
            .map_err(|_| Error::Config("bad expect_exponent".into()))?;
        let tol = config.get_f64("exponent_tol", 0.2)?;
        let got = profile.fit.map(|f| f.slope).unwrap_or(f64::NAN);
        verdicts.push(Verdict::new(
            format!("exponent within {tol} of {expect}"),
            (got - expect).abs() <= tol,
            format!("fitted {got}"),
        ));
    }
    if let Some(bound) = config.get("ratio_bound_exponent") {
        let e: f64 = bound
            .parse()
            .map_err(|_| Error::Config("bad ratio_bound_exponent".into()))?;
        let mut worst = ("", 0.0f64, 0.0f64);
        let mut ok = true;
        for row in &profile.rows {
            let cap = f64::from(row.r + 1).powf(e);
            if row.ratio_lower > cap {
                ok = false;
            }
            if row.ratio_lower / cap > worst.1 {
                worst = ("", row.ratio_lower / cap, row.ratio_lower);
            }
        }
        verdicts.push(Verdict::new(
            format!("all ratios <= (r+1)^{e}"),
            ok,
            format!("max ratio/bound = {}", worst.1),
        ));
    }
    if verdicts.is_empty() {
        verdicts.push(Verdict::new("profile computed", true, ""));
    }
    let m = serde_json::to_value(&profile).expect("serializable");
    Ok((verdicts, rows, m))
}

fn mozes_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let p = config.get_u32("p", 2)? as u8;
    let n_max = config.get_u32("n_max", 3)?;
    let report = mozes_obstruction(p, n_max, budget)?;
    let mut rows = Rows::new(vec![
        "n",
        "subgroup_order",
        "order_ok",
        "convolution_identity_ok",
        "ratio_identity_ok",
        "three_factor_identity_ok",
        "word_length_bound",
        "bfs_word_length",
    ]);
    let mut verdicts = Vec::new();
    for r in &report.rows {
        rows.push(vec![
            r.n.to_string(),
            r.subgroup_order.to_string(),
            r.order_ok.to_string(),
            r.convolution_identity_ok.to_string(),
            r.ratio_identity_ok.to_string(),
            r.three_factor_identity_ok.to_string(),
            r.word_length_bound.to_string(),
            r.bfs_word_length.map(|l| l.to_string()).unwrap_or_default(),
        ]);
        verdicts.push(Verdict::new(
            format!("n={}: |L_n| = {}^{} and exact ratio identity", r.n, p, r.n + 1),
            r.order_ok && r.convolution_identity_ok && r.ratio_identity_ok,
            format!("|L_n| = {}", r.subgroup_order),
        ));
        verdicts.push(Verdict::new(
            format!("n={}: word length of [[1,t^{}],[0,1]] <= {}", r.n, r.n, r.word_length_bound),
            r.three_factor_identity_ok && !r.bfs_violation,
            match r.bfs_word_length {
                Some(l) => format!("bfs length {l}"),
                None => "verified by the three-factor identity".to_string(),
            },
        ));
    }
    verdicts.push(Verdict::new(
        "ratio grows geometrically while support radius grows linearly",
        report.superpolynomial_vs_linear,
        "",
    ));
    let m = serde_json::to_value(&report).expect("serializable");
    Ok((verdicts, rows, m))
}

fn median_suite(config: &Config) -> Result<Parts> {
    let key = config.require("complex")?;
    let cx = resolve_complex(key)?;
    let hp = compute_hyperplanes(&cx)?;
    let dm = DistanceMatrix::build(&cx)?;
    let sample = PropMaxSample {
        exhaustive_threshold: config.get_usize("exhaustive_threshold", 500)?,
        sample_triples: config.get_u64("sample_triples", 10_000)?,
        sample_pairs: config.get_u64("sample_pairs", 1_000)?,
        seed: config.get_u64("seed", 0)?,
        growth_c: config.get_f64("growth_c", 1.0)?,
    };
    // medians + Sageev on all pairs
    let rep = prop_max_check(&cx, &hp, &dm, sample)?;
    let mut sageev_fail = None;
    for p in 0..cx.n_vertices as u32 {
        for q in (p + 1)..cx.n_vertices as u32 {
            let c = sageev_distance_check(&cx, &hp, p, q);
            if !c.equal && sageev_fail.is_none() {
                sageev_fail = Some((p, q, c));
            }
        }
    }
    let mut rows = Rows::new(vec!["quantity", "value"]);
    rows.push(vec!["vertices".into(), cx.n_vertices.to_string()]);
    rows.push(vec!["hyperplanes".into(), hp.count.to_string()]);
    rows.push(vec!["triples_checked".into(), rep.triples_checked.to_string()]);
    rows.push(vec![
        "median_failures".into(),
        rep.median_failures.len().to_string(),
    ]);
    let verdicts = vec![
        Verdict::new(
            "median nonempty for all checked triples",
            rep.median_failures.is_empty(),
            rep.median_failures
                .first()
                .map(|w| format!("empty median at {w:?}"))
                .unwrap_or_default(),
        ),
        Verdict::new(
            "graph distance equals separating-hyperplane count on all pairs",
            sageev_fail.is_none(),
            sageev_fail
                .map(|(p, q, c)| format!("pair ({p},{q}): bfs {} vs sep {}", c.bfs_distance, c.separating))
                .unwrap_or_default(),
        ),
    ];
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

fn prop_max_experiment(config: &Config) -> Result<Parts> {
    let key = config.require("complex")?;
    let cx = resolve_complex(key)?;
    let hp = compute_hyperplanes(&cx)?;
    let dm = DistanceMatrix::build(&cx)?;
    let sample = PropMaxSample {
        exhaustive_threshold: config.get_usize("exhaustive_threshold", 500)?,
        sample_triples: config.get_u64("sample_triples", 10_000)?,
        sample_pairs: config.get_u64("sample_pairs", 1_000)?,
        seed: config.get_u64("seed", 0)?,
        growth_c: config.get_f64("growth_c", 1.0)?,
    };
    let rep = prop_max_check(&cx, &hp, &dm, sample)?;
    let mut rows = Rows::new(vec!["condition", "checked", "failures"]);
    rows.push(vec![
        "median-nonempty".into(),
        rep.triples_checked.to_string(),
        rep.median_failures.len().to_string(),
    ]);
    rows.push(vec![
        "interval-growth".into(),
        rep.pairs_checked.to_string(),
        rep.growth_failures.len().to_string(),
    ]);
    rows.push(vec![
        "interval-diameter".into(),
        rep.pairs_checked.to_string(),
        rep.diameter_failures.len().to_string(),
    ]);
    let mut verdicts = vec![
        Verdict::new(
            "(i) medians nonempty",
            rep.median_failures.is_empty(),
            rep.median_failures
                .first()
                .map(|w| format!("{w:?}"))
                .unwrap_or_default(),
        ),
        Verdict::new(
            "(ii) interval growth polynomially bounded",
            rep.growth_failures.is_empty(),
            rep.growth_failures
                .first()
                .map(|w| format!("{w:?}"))
                .unwrap_or_default(),
        ),
        Verdict::new(
            "(iii) interval diameter equals endpoint distance",
            rep.diameter_failures.is_empty(),
            rep.diameter_failures
                .first()
                .map(|w| format!("{w:?}"))
                .unwrap_or_default(),
        ),
    ];
    if let Some(expect) = config.get("expect_exponent") {
        let expect: f64 = expect
            .parse()
            .map_err(|_| Error::Config("bad expect_exponent".into()))?;
        let tol = config.get_f64("exponent_tol", 0.5)?;
        let got = rep.fitted_exponent.unwrap_or(f64::NAN);
        verdicts.push(Verdict::new(
            format!("interval exponent within {tol} of {expect}"),
            (got - expect).abs() <= tol,
            format!("fitted {got}"),
        ));
    }
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

fn bcp_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let model = resolve(key)?;
    let family = resolve_family(&model)?;
    let mut metric = WordMetric::with_budget(model, budget);
    let p = config.get_u32("p", 1)?;
    let r = config.get_u32("r", 5)?;
    let caps = BcpCaps {
        max_paths: config.get_usize("max_paths", 10_000)?,
        max_signatures: config.get_usize("max_signatures", 32)?,
        max_pairs_per_coset: config.get_usize("max_pairs_per_coset", 4_000)?,
    };
    let rep = bcp_probe(&mut metric, &family, p, r, caps)?;
    let mut rows = Rows::new(vec![
        "pair_id",
        "d",
        "d_hat",
        "cosets_penetrated",
        "K_case1",
        "K_case2",
        "backtracked",
    ]);
    for radius in &rep.trend {
        for row in &radius.rows {
            rows.push(vec![
                row.pair_id.to_string(),
                row.d.to_string(),
                row.d_hat.to_string(),
                row.cosets_penetrated.to_string(),
                row.k_case1.to_string(),
                row.k_case2.to_string(),
                row.backtracked.to_string(),
            ]);
        }
    }
    let mut verdicts = Vec::new();
    let trend: Vec<u64> = rep.trend.iter().map(|t| t.k).collect();
    if let Some(expect) = config.get("expect_stable") {
        let expect: bool = expect
            .parse()
            .map_err(|_| Error::Config("bad expect_stable".into()))?;
        verdicts.push(Verdict::new(
            "observed K non-increasing across radii",
            rep.stable == expect,
            format!("trend {trend:?}"),
        ));
    }
    if let Some(expect) = config.get("expect_k") {
        let expect: u64 = expect
            .parse()
            .map_err(|_| Error::Config("bad expect_k".into()))?;
        verdicts.push(Verdict::new(
            format!("observed K = {expect}"),
            rep.k == expect,
            format!("K = {}", rep.k),
        ));
    }
    if verdicts.is_empty() {
        verdicts.push(Verdict::new("probe completed", true, format!("trend {trend:?}")));
    }
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

fn cset_triples(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let model = resolve(key)?;
    let family = resolve_family(&model)?;
    let mut metric = WordMetric::with_budget(model.clone(), budget);
    let r = config.get_u32("r", 4)?;
    let seed = config.get_u64("seed", 0)?;
    let sample_triples = config.get_u64("sample_triples", 300)?;
    let expect_failure = config
        .get("expect_calibration_failure")
        .map(|v| v.parse::<bool>())
        .transpose()
        .map_err(|_| Error::Config("bad expect_calibration_failure".into()))?
        .unwrap_or(false);
    let opts = CalibrateOpts {
        delta2_max: config.get_u32("delta2_max", 8)?,
        sample_triples,
        seed,
        caps: CsetCaps {
            max_paths: config.get_usize("max_paths", 10_000)?,
            max_blocks: config.get_usize("max_blocks", 10_000)?,
        },
        bcp_caps: BcpCaps::default(),
    };
    let mut rows = Rows::new(vec!["triple_id", "x", "y", "z", "nonempty", "witness"]);
    match delta_calibrate(&mut metric, &family, r, opts) {
        Err(Error::CalibrationFailed(msg)) => {
            let verdicts = vec![Verdict::new(
                "calibration fails (negative control)",
                expect_failure,
                msg.clone(),
            )];
            Ok((
                verdicts,
                rows,
                serde_json::json!({ "calibration_failed": msg }),
            ))
        }
        Err(e) => Err(e),
        Ok(cal) => {
            // verify on a fresh seeded sample with the calibrated constants
            let mut engine = CsetEngine::new(model.clone(), family.clone(), opts.caps)?;
            metric.ensure_radius(r)?;
            let ball: Vec<_> = metric.ball_iter(r).cloned().collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xc0ffee);
            let mut failures = 0u64;
            for i in 0..sample_triples {
                let x = ball[rng.gen_range(0..ball.len())].clone();
                let y = ball[rng.gen_range(0..ball.len())].clone();
                let z = ball[rng.gen_range(0..ball.len())].clone();
                let chk = triple_intersection_check(&mut engine, &x, &y, &z, cal.delta2, cal.k)?;
                if !chk.nonempty {
                    failures += 1;
                }
                rows.push(vec![
                    i.to_string(),
                    model.render(&x),
                    model.render(&y),
                    model.render(&z),
                    chk.nonempty.to_string(),
                    chk.witness.map(|w| model.render(&w)).unwrap_or_default(),
                ]);
            }
            let verdicts = vec![
                Verdict::new(
                    "calibration succeeded",
                    !expect_failure,
                    format!("delta2 = {}, K = {}", cal.delta2, cal.k),
                ),
                Verdict::new(
                    "all sampled triples have nonempty intersections",
                    failures == 0,
                    format!("{failures} failures"),
                ),
            ];
            let m = serde_json::to_value(&cal).expect("serializable");
            Ok((verdicts, rows, m))
        }
    }
}

fn distortion_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let model = resolve(key)?;
    let mut metric = WordMetric::with_budget(model.clone(), budget);
    let r_max = config.get_u32("r_max", 10)?;
    let sub = config.require("subgroup")?;
    let gens: Vec<_> = sub
        .split(';')
        .map(|w| model.parse_word(w.trim()))
        .collect::<Result<_>>()?;
    let rep = subgroup_distortion(&mut metric, &gens, r_max)?;
    let mut rows = Rows::new(vec!["intrinsic", "induced"]);
    for row in &rep.rows {
        rows.push(vec![row.intrinsic.to_string(), row.induced.to_string()]);
    }
    let mut verdicts = Vec::new();
    if let Some(expect) = config.get("expect_class") {
        let want = match expect {
            "distorted" => DistortionClass::Distorted,
            "undistorted" => DistortionClass::Undistorted,
            other => return Err(Error::Config(format!("bad expect_class `{other}`"))),
        };
        verdicts.push(Verdict::new(
            format!("classified {expect}"),
            rep.class == want,
            format!("slope {:?}", rep.fit.map(|f| f.slope)),
        ));
    } else {
        verdicts.push(Verdict::new("table computed", true, ""));
    }
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

fn blowup_experiment(config: &Config) -> Result<Parts> {
    let key = config.require("complex")?;
    let cx = resolve_complex(key)?;
    let hp = compute_hyperplanes(&cx)?;
    let dm = DistanceMatrix::build(&cx)?;
    let dim = rdlab_core::cube::hyperplane::dimension_estimate(&hp, 10_000_000).dimension;
    let c = config.get_u32("c", 3)?;
    let sizes_spec = config.require("sizes")?;
    let sizes: Vec<u32> = if let Some(k) = sizes_spec.strip_prefix("const:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Config("bad const size".into()))?;
        vec![k; cx.n_vertices]
    } else {
        let v: Vec<u32> = sizes_spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad size `{t}`")))
            })
            .collect::<Result<_>>()?;
        if v.len() == cx.n_vertices {
            v
        } else {
            // cycle the pattern over the vertices
            (0..cx.n_vertices).map(|i| v[i % v.len()]).collect()
        }
    };
    let bs = BlowupSpace::new(&cx, sizes, c)?;
    let rep = blowup_check(
        &cx,
        &dm,
        &bs,
        dim,
        config.get_u64("seed", 0)?,
        config.get_u64("samples", 2_000)?,
    )?;
    let mut rows = Rows::new(vec!["quantity", "value"]);
    rows.push(vec!["total_points".into(), rep.total_points.to_string()]);
    rows.push(vec!["triples_checked".into(), rep.triples_checked.to_string()]);
    rows.push(vec!["pairs_checked".into(), rep.pairs_checked.to_string()]);
    let verdicts = vec![
        Verdict::new("(i) lifted medians nonempty", rep.median_failures == 0, ""),
        Verdict::new(
            format!("(ii) lifted growth bounded by c={c} times (r+1)^{dim}"),
            rep.growth_failures.is_empty() && rep.scaling_ok,
            rep.growth_failures
                .first()
                .map(|w| format!("{w:?}"))
                .unwrap_or_default(),
        ),
        Verdict::new(
            "(ii) scaling factor exactly c for uniform stabilizers",
            !rep.uniform || rep.exact_scaling,
            "",
        ),
        Verdict::new("(iii) lifted diameters within 1", rep.diameter_ok, ""),
    ];
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

fn quasiconvexity_experiment(config: &Config, budget: usize) -> Result<Parts> {
    let key = config.require("key")?;
    let model = resolve(key)?;
    let family = resolve_family(&model)?;
    let mut metric = WordMetric::with_budget(model, budget);
    let r = config.get_u32("r", 6)?;
    let idx = config.get_usize("parabolic", 0)?;
    let rep = quasiconvexity_probe(
        &mut metric,
        &family,
        idx,
        r,
        config.get_u64("max_pairs", 10_000)?,
    )?;
    let mut rows = Rows::new(vec!["radius", "max_offset"]);
    for &(radius, off) in &rep.trend {
        rows.push(vec![radius.to_string(), off.to_string()]);
    }
    let mut verdicts = Vec::new();
    if let Some(bound) = config.get("expect_offset_at_most") {
        let bound: u64 = bound
            .parse()
            .map_err(|_| Error::Config("bad expect_offset_at_most".into()))?;
        verdicts.push(Verdict::new(
            format!("max offset <= {bound}"),
            rep.max_offset <= bound,
            format!("observed {}", rep.max_offset),
        ));
    } else {
        verdicts.push(Verdict::new("probe completed", true, ""));
    }
    let m = serde_json::to_value(&rep).expect("serializable");
    Ok((verdicts, rows, m))
}

/// Stable sorted catalog of models, complexes and experiment kinds.
pub fn catalog() -> String {
    let mut out = String::new();
    out.push_str("group model key templates:\n");
    for k in key_templates() {
        out.push_str(&format!("  {k}\n"));
    }
    out.push_str("built-in group instances:\n");
    for k in builtin_keys() {
        out.push_str(&format!("  {k}\n"));
    }
    out.push_str("complex key templates:\n");
    for k in rdlab_core::cube::complex_templates() {
        out.push_str(&format!("  {k}\n"));
    }
    out.push_str("experiment kinds:\n");
    for k in KINDS {
        out.push_str(&format!("  {k}\n"));
    }
    out
}
