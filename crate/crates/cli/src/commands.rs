use serde::Serialize;

use alphaindex::distribution::{
    build_histogram, default_beta_grid, default_k_grid, fit_beta, fit_giddings, giddings_eval, kurtosis,
    power_law_slope, shapiro_wilk, skewness, theoretical_moment_ratio, BinningMode, MomentObjective,
};
use alphaindex::ingest::write_dataset;
use alphaindex::metrics::{group_metrics, h_group, lorenz_curve, psi_curve};
use alphaindex::ranking::{rank, RankingConfig};
use alphaindex::synth::{
    sample_stretched_exp_rounded, sample_stretched_exp_with_form, StretchedExpForm, StretchedExpParams,
};
use alphaindex::{Dataset, GiddingsFit, Group, NormalityReport, ResearcherProfile, SeedStream, StretchedExpFit};

use crate::input::{ingest, load_dataset, load_input, Input};
use crate::output::{blocks, json, num, Format, Table};
use crate::{Analysis, Binning, Cli, CliError, Command, DistfitArgs, Form, Objective, RankArgs, SynthArgs};

type Done = Result<(String, i32), CliError>;

pub fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Done {
    match &cli.command {
        Command::Metrics(a) => metrics(&load_dataset(&a.input, cli.tab, warnings)?, cli.format),
        Command::Rank(a) => rank_cmd(&load_dataset(&a.input, cli.tab, warnings)?, a, cli.format),
        Command::Lorenz(a) => lorenz(&load_dataset(&a.input, cli.tab, warnings)?, cli.format),
        Command::Psi(a) => psi(&load_dataset(&a.input, cli.tab, warnings)?, cli.format),
        Command::Distfit(a) => distfit(load_input(&a.input, cli.tab, warnings)?, a, cli.format),
        Command::Synth(a) => synth(a, cli.format),
        Command::Validate(a) => validate(&a.input, cli.tab, cli.format),
    }
}

fn ok(text: String) -> Done {
    Ok((text, 0))
}

#[derive(Serialize)]
struct MetricsRow<'a> {
    group_id: &'a str,
    label: &'a str,
    quality_tag: Option<&'a str>,
    n: usize,
    mean_h: f64,
    stderr_h: f64,
    h_group: u32,
    gini: f64,
}

#[derive(Serialize)]
struct GroupsDoc<T> {
    groups: Vec<T>,
}

fn metrics(dataset: &Dataset, format: Format) -> Done {
    let rows = dataset
        .groups
        .iter()
        .map(|g| {
            let m = group_metrics::<f64>(g)?;
            Ok(MetricsRow {
                group_id: g.id(),
                label: g.label(),
                quality_tag: g.quality_tag(),
                n: m.n,
                mean_h: m.mean_h,
                stderr_h: m.stderr_h,
                h_group: m.h_group,
                gini: m.gini,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if format == Format::Json {
        return ok(json(&GroupsDoc { groups: rows }));
    }
    let mut t = Table::new(&["group_id", "n", "mean_h", "stderr_h", "h_group", "gini"]);
    for r in &rows {
        t.push(vec![
            r.group_id.to_string(),
            r.n.to_string(),
            num(r.mean_h),
            num(r.stderr_h),
            r.h_group.to_string(),
            num(r.gini),
        ]);
    }
    ok(t.render(format))
}

fn rank_cmd(dataset: &Dataset, args: &RankArgs, format: Format) -> Done {
    let config = RankingConfig {
        n_sample: args.samples,
        seed: args.seed,
        reference_size: args.ref_size,
        gini_floor: args.gini_floor,
    };
    let report = rank(&dataset.groups, &config)?;
    if format == Format::Json {
        return ok(json(&report));
    }
    let reference = match (&report.reference_group_id, report.reference_size) {
        (Some(id), Some(size)) => format!("reference group {id}, size {size}"),
        (None, Some(size)) => format!("reference size {size}"),
        _ => "no reference".to_string(),
    };
    let mut t = Table::new(&["rank", "group_id", "gini", "h_group", "relative_h_group", "alpha"])
        .comment(format!(
            "{reference}; n_sample {}; seed {}; gini floor {}",
            args.samples,
            args.seed,
            num(args.gini_floor)
        ));
    if !report.provenance.floored_groups.is_empty() {
        t = t.comment(format!("gini floored: {}", report.provenance.floored_groups.join(", ")));
    }
    for r in &report.rows {
        t.push(vec![
            r.rank.to_string(),
            r.group_id.clone(),
            num(r.gini),
            r.h_group.map_or_else(String::new, |h| h.to_string()),
            num(r.relative_h_group),
            num(r.alpha),
        ]);
    }
    ok(t.render(format))
}

#[derive(Serialize)]
struct LorenzDoc {
    identity: [[f64; 2]; 2],
    groups: Vec<LorenzGroup>,
}

#[derive(Serialize)]
struct LorenzGroup {
    group_id: String,
    points: Vec<alphaindex::LorenzPoint>,
}

fn lorenz(dataset: &Dataset, format: Format) -> Done {
    let groups = dataset
        .groups
        .iter()
        .map(|g| {
            Ok(LorenzGroup {
                group_id: g.id().to_string(),
                points: lorenz_curve::<f64>(g)?.points,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match format {
        Format::Json => ok(json(&LorenzDoc {
            identity: [[0.0, 0.0], [1.0, 1.0]],
            groups,
        })),
        Format::Csv => {
            let mut t = Table::new(&["series", "f", "phi"]);
            t.push(vec!["identity".into(), "0".into(), "0".into()]);
            t.push(vec!["identity".into(), "1".into(), "1".into()]);
            for g in &groups {
                for p in &g.points {
                    t.push(vec![g.group_id.clone(), num(p.f), num(p.phi)]);
                }
            }
            ok(t.csv())
        }
        Format::Table => {
            let mut tables = vec![{
                let mut t = Table::new(&["f", "phi"]).comment("identity");
                t.push(vec!["0".into(), "0".into()]);
                t.push(vec!["1".into(), "1".into()]);
                t
            }];
            for g in &groups {
                let mut t = Table::new(&["f", "phi"]).comment(format!("group {}", g.group_id));
                for p in &g.points {
                    t.push(vec![num(p.f), num(p.phi)]);
                }
                tables.push(t);
            }
            ok(blocks(&tables, format))
        }
    }
}

#[derive(Serialize)]
struct PsiPoint {
    h: u32,
    psi: usize,
}

#[derive(Serialize)]
struct PsiGroup {
    group_id: String,
    h_group: u32,
    points: Vec<PsiPoint>,
}

fn psi(dataset: &Dataset, format: Format) -> Done {
    let groups: Vec<PsiGroup> = dataset
        .groups
        .iter()
        .map(|g| PsiGroup {
            group_id: g.id().to_string(),
            h_group: h_group(g),
            points: psi_curve(g).into_iter().map(|(h, psi)| PsiPoint { h, psi }).collect(),
        })
        .collect();
    match format {
        Format::Json => ok(json(&GroupsDoc { groups })),
        Format::Csv => {
            let mut t = Table::new(&["group_id", "h", "psi", "h_group"]);
            for g in &groups {
                for p in &g.points {
                    t.push(vec![g.group_id.clone(), p.h.to_string(), p.psi.to_string(), g.h_group.to_string()]);
                }
            }
            ok(t.csv())
        }
        Format::Table => {
            let tables: Vec<Table> = groups
                .iter()
                .map(|g| {
                    let mut t = Table::new(&["h", "psi"]).comment(format!("group {} h_group {}", g.group_id, g.h_group));
                    for p in &g.points {
                        t.push(vec![p.h.to_string(), p.psi.to_string()]);
                    }
                    t
                })
                .collect();
            ok(blocks(&tables, format))
        }
    }
}

fn selected<'a>(dataset: &'a Dataset, group: &Option<String>) -> Result<Vec<&'a Group>, CliError> {
    match group {
        None => Ok(dataset.groups.iter().collect()),
        Some(id) => dataset
            .group(id)
            .map(|g| vec![g])
            .ok_or_else(|| CliError::invalid(format!("no group `{id}` in the dataset"))),
    }
}

/// Total citations of every selected member; fails naming members without one.
fn citation_pairs(groups: &[&Group]) -> Result<Vec<(u64, u64)>, CliError> {
    let mut missing = Vec::new();
    let mut pairs = Vec::new();
    for g in groups {
        for m in g.members() {
            match m.total_citations() {
                Some(t) => pairs.push((u64::from(m.h_index()), t)),
                None => missing.push(format!("{}/{}", g.id(), m.id())),
            }
        }
    }
    if missing.is_empty() {
        Ok(pairs)
    } else {
        Err(CliError::invalid(format!(
            "this analysis needs total_citations, missing for {} member(s): {}",
            missing.len(),
            missing.join(", ")
        )))
    }
}

/// `(series name, values)`: one series per group, or the whole column.
fn h_series(input: &Input, group: &Option<String>) -> Result<Vec<(String, Vec<f64>)>, CliError> {
    match input {
        Input::Column(x) => Ok(vec![("column".into(), x.clone())]),
        Input::Dataset(d) => Ok(selected(d, group)?
            .into_iter()
            .map(|g| (g.id().to_string(), g.h_indexes().into_iter().map(f64::from).collect()))
            .collect()),
    }
}

fn distfit(input: Input, args: &DistfitArgs, format: Format) -> Done {
    match args.analysis {
        Analysis::Slope => slope(&input, args, format),
        Analysis::Beta => beta(&input, args, format),
        Analysis::Giddings => giddings(&input, args, format),
        Analysis::Normality => normality(&input, args, format),
        Analysis::Moments => moments(&input, args, format),
    }
}

#[derive(Serialize)]
struct SlopeDoc {
    analysis: &'static str,
    slope: f64,
    intercept: f64,
    points_used: usize,
    dropped: usize,
}

fn slope(input: &Input, args: &DistfitArgs, format: Format) -> Done {
    let Input::Dataset(d) = input else {
        return Err(CliError::invalid("slope needs a dataset with h_index and total_citations"));
    };
    let fit = power_law_slope::<f64>(&citation_pairs(&selected(d, &args.group)?)?)?;
    if format == Format::Json {
        return ok(json(&SlopeDoc {
            analysis: "slope",
            slope: fit.slope,
            intercept: fit.intercept,
            points_used: fit.points_used,
            dropped: fit.dropped,
        }));
    }
    let mut t = Table::new(&["slope", "intercept", "points_used", "dropped"]);
    t.push(vec![
        num(fit.slope),
        num(fit.intercept),
        fit.points_used.to_string(),
        fit.dropped.to_string(),
    ]);
    ok(t.render(format))
}

#[derive(Serialize)]
struct BetaDoc {
    analysis: &'static str,
    #[serde(flatten)]
    fit: StretchedExpFit,
    /// `M_k` at the selected beta on `k_grid`.
    theoretical: Vec<f64>,
}

fn beta(input: &Input, args: &DistfitArgs, format: Format) -> Done {
    let x: Vec<f64> = match input {
        Input::Column(x) => x.clone(),
        Input::Dataset(d) => citation_pairs(&selected(d, &args.group)?)?
            .into_iter()
            .map(|(_, t)| t as f64)
            .collect(),
    };
    let objective = match args.objective {
        Objective::Log => MomentObjective::Log,
        Objective::Raw => MomentObjective::Raw,
    };
    let fit = fit_beta(&x, &default_beta_grid(), &default_k_grid(), objective)?;
    let theoretical = fit
        .k_grid
        .iter()
        .map(|&k| theoretical_moment_ratio(k, fit.beta))
        .collect::<Result<Vec<f64>, _>>()?;
    if format == Format::Json {
        return ok(json(&BetaDoc {
            analysis: "beta",
            fit,
            theoretical,
        }));
    }
    let summary = format!(
        "beta {} ({} objective; {} values used, {} non-positive excluded)",
        num(fit.beta),
        match objective {
            MomentObjective::Log => "log",
            MomentObjective::Raw => "raw",
        },
        fit.points_used,
        fit.excluded
    );
    let mut grid = Table::new(&["beta", "objective"]).comment(summary);
    for (b, o) in fit.grid.iter().zip(&fit.objective_per_beta) {
        grid.push(vec![num(*b), num(*o)]);
    }
    let mut ratios = Table::new(&["k", "empirical", "theoretical"]).comment("moment ratios at the selected beta");
    for ((k, r), m) in fit.k_grid.iter().zip(&fit.empirical).zip(&theoretical) {
        ratios.push(vec![num(*k), num(*r), num(*m)]);
    }
    ok(blocks(&[grid, ratios], format))
}

#[derive(Serialize)]
struct GiddingsDoc {
    analysis: &'static str,
    #[serde(flatten)]
    fit: GiddingsFit,
    histogram: alphaindex::Histogram,
    fitted: Vec<f64>,
}

fn giddings(input: &Input, args: &DistfitArgs, format: Format) -> Done {
    let h: Vec<f64> = h_series(input, &args.group)?.into_iter().flat_map(|(_, v)| v).collect();
    let (mode, default_param) = match args.binning {
        Binning::Linear => (BinningMode::Linear, 1.0),
        Binning::Geometric => (BinningMode::Geometric, 2.0),
    };
    let hist = build_histogram(&h, mode, args.bin_width.unwrap_or(default_param))?;
    let fit = fit_giddings(&hist)?;
    let centers = hist.centers();
    let fitted = centers
        .iter()
        .map(|&c| giddings_eval(c, &fit.params))
        .collect::<Result<Vec<f64>, _>>()?;
    if format == Format::Json {
        return ok(json(&GiddingsDoc {
            analysis: "giddings",
            fit,
            histogram: hist,
            fitted,
        }));
    }
    let p = &fit.params;
    let mut t = Table::new(&["center", "count", "fitted"])
        .comment(format!(
            "H0 {} A {} w {} h_c {}",
            num(p.baseline),
            num(p.amplitude),
            num(p.width),
            num(p.center)
        ))
        .comment(format!("residual_ss {} converged {}", num(fit.residual_ss), fit.converged));
    for ((c, n), f) in centers.iter().zip(&hist.counts).zip(&fitted) {
        t.push(vec![num(*c), n.to_string(), num(*f)]);
    }
    ok(t.render(format))
}

#[derive(Serialize)]
struct NormalityRow {
    group_id: String,
    #[serde(flatten)]
    report: NormalityReport,
}

fn normality(input: &Input, args: &DistfitArgs, format: Format) -> Done {
    let rows = h_series(input, &args.group)?
        .into_iter()
        .map(|(id, x)| {
            shapiro_wilk(&x)
                .map(|report| NormalityRow { group_id: id.clone(), report })
                .map_err(|e| CliError::invalid(format!("group `{id}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if format == Format::Json {
        return ok(json(&GroupsDoc { groups: rows }));
    }
    let mut t = Table::new(&["group_id", "n", "w", "p_value", "kurtosis", "skewness", "normal_at_5pct"]);
    for r in &rows {
        let q = &r.report;
        t.push(vec![
            r.group_id.clone(),
            q.n.to_string(),
            num(q.w),
            num(q.p_value),
            num(q.kurtosis),
            num(q.skewness),
            q.normal_at_5pct.to_string(),
        ]);
    }
    ok(t.render(format))
}

#[derive(Serialize)]
struct MomentsRow {
    group_id: String,
    n: usize,
    mean: f64,
    variance: f64,
    skewness: f64,
    kurtosis: f64,
}

fn moments(input: &Input, args: &DistfitArgs, format: Format) -> Done {
    let rows = h_series(input, &args.group)?
        .into_iter()
        .map(|(id, x)| {
            let wrap = |e: alphaindex::Error| CliError::invalid(format!("group `{id}`: {e}"));
            let n = x.len() as f64;
            let mean = x.iter().sum::<f64>() / n;
            let variance = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            Ok(MomentsRow {
                skewness: skewness(&x).map_err(wrap)?,
                kurtosis: kurtosis(&x).map_err(wrap)?,
                group_id: id.clone(),
                n: x.len(),
                mean,
                variance,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if format == Format::Json {
        return ok(json(&GroupsDoc { groups: rows }));
    }
    let mut t = Table::new(&["group_id", "n", "mean", "variance", "skewness", "kurtosis"]);
    for r in &rows {
        t.push(vec![
            r.group_id.clone(),
            r.n.to_string(),
            num(r.mean),
            num(r.variance),
            num(r.skewness),
            num(r.kurtosis),
        ]);
    }
    ok(t.render(format))
}

#[derive(Serialize)]
struct SampleDoc {
    beta: f64,
    x0: f64,
    form: StretchedExpForm,
    seed: u64,
    samples: Vec<f64>,
}

fn synth(args: &SynthArgs, format: Format) -> Done {
    let params = StretchedExpParams::new(args.beta, args.x0)?;
    if args.n == 0 {
        return Err(CliError::invalid("--n must be at least 1"));
    }
    let form = match args.form {
        Form::Density => StretchedExpForm::Density,
        Form::Survival => StretchedExpForm::Survival,
    };
    let stream = SeedStream::new(args.seed);

    if args.round {
        let x = sample_stretched_exp_rounded(&params, form, args.n, &stream);
        let members = x
            .iter()
            .enumerate()
            .map(|(i, &t)| ResearcherProfile::summary(format!("synth-{}", i + 1), t.isqrt() as u32, Some(t)))
            .collect();
        let group = Group::unlabeled("synth", members)?;
        let dataset = Dataset::new(vec![group]);
        if format == Format::Json {
            return ok(write_dataset(&dataset));
        }
        let mut t = Table::new(&["group_id", "researcher_id", "h_index", "total_citations"]);
        for m in dataset.groups[0].members() {
            t.push(vec![
                "synth".into(),
                m.id().to_string(),
                m.h_index().to_string(),
                m.total_citations().unwrap_or(0).to_string(),
            ]);
        }
        return ok(t.csv());
    }

    let x: Vec<f64> = sample_stretched_exp_with_form(&params, form, args.n, &stream);
    if format == Format::Json {
        return ok(json(&SampleDoc {
            beta: args.beta,
            x0: args.x0,
            form,
            seed: args.seed,
            samples: x,
        }));
    }
    let mut t = Table::new(&["x"]);
    for v in x {
        t.push(vec![num(v)]);
    }
    ok(t.render(format))
}

#[derive(Serialize)]
struct ValidationDoc {
    valid: bool,
    groups: usize,
    members: usize,
    errors: Vec<String>,
    warnings: Vec<String>,
}

fn validate(path: &std::path::Path, tab: bool, format: Format) -> Done {
    let report = ingest(path, tab)?;
    let (groups, members) = report
        .dataset
        .as_ref()
        .map_or((0, 0), |d| (d.groups.len(), d.groups.iter().map(Group::len).sum()));
    let doc = ValidationDoc {
        valid: report.errors.is_empty(),
        groups,
        members,
        errors: report.errors,
        warnings: report.warnings,
    };
    let code = if doc.valid { 0 } else { 1 };
    let text = match format {
        Format::Json => json(&doc),
        _ => {
            let mut t = Table::new(&["kind", "message"]).comment(format!(
                "{}: {} ({groups} groups, {members} members)",
                path.display(),
                if doc.valid { "valid" } else { "invalid" }
            ));
            for e in &doc.errors {
                t.push(vec!["error".into(), e.clone()]);
            }
            for w in &doc.warnings {
                t.push(vec!["warning".into(), w.clone()]);
            }
            t.render(format)
        }
    };
    Ok((text, code))
}
