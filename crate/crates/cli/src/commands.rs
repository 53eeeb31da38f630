//! Subcommand adapters: parse inputs, call the library, package the report.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use pseudorank::analytic::{exact_effects, noncentralities, subgroup_table, NonCentralityReport};
use pseudorank::analytic::{NonCentralityRequest, SubgroupTable};
use pseudorank::confidence::{effect_intervals, IntervalOptions, IntervalReport};
use pseudorank::effects::{estimate, EffectKind, EffectVector};
use pseudorank::hypothesis::{self, parse_vector, Contrast, Side, TestReport};
use pseudorank::io::{read_long_csv, Scenario};
use pseudorank::simulate::{self, Metric, SimulationPlan, SimulationResult};
use pseudorank::{GroupedData, RankKind};

use crate::bundled::{self, Kind};
use crate::error::{CliResult, Failure};
use crate::render::{self, cell, num, opt, vector};
use crate::{usage, AnalyticArgs, BundledArgs, EffectsArgs, Format, KindArg, MethodArg};
use crate::{RanksArgs, SimulateArgs, TestArgs};

pub struct Output {
    command: &'static str,
    seed: Option<u64>,
    payload: Value,
    text: String,
    csv: String,
    /// Set when the report carries a degenerate statistic.
    pub degenerate: Option<String>,
    /// Printed verbatim in every format.
    raw: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    payload: &'a Value,
}

impl Output {
    fn new<T: Serialize>(command: &'static str, payload: &T, text: String, csv: String) -> Self {
        Output {
            command,
            seed: None,
            payload: serde_json::to_value(payload).expect("reports serialize"),
            text,
            csv,
            degenerate: None,
            raw: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        match format {
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let env = Envelope {
                    tool: "pseudorank",
                    version: pseudorank::VERSION,
                    command: self.command,
                    seed: self.seed,
                    payload: &self.payload,
                };
                serde_json::to_string_pretty(&env).expect("envelope serializes") + "\n"
            }
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))?;
    Ok(s)
}

fn read_data(path: &Path) -> CliResult<GroupedData> {
    let text = read_text(path)?;
    read_long_csv(text.as_bytes()).map_err(|e| match Failure::from(e) {
        Failure::Usage(m) | Failure::Data(m) => Failure::Data(format!("{}: {m}", path.display())),
    })
}

/// Deserializes JSON, naming the offending path on failure.
fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        usage(format!("{origin}: at '{path}': {}", e.into_inner()))
    })
}

fn load_json<T: DeserializeOwned>(
    file: Option<&Path>,
    name: Option<&str>,
    kind: Kind,
) -> CliResult<T> {
    match (file, name) {
        (_, Some(name)) => {
            let b = bundled::find(kind, name).ok_or_else(|| {
                usage(format!(
                    "no bundled {} named '{name}' (available: {})",
                    kind.as_str(),
                    bundled::names(kind).join(", ")
                ))
            })?;
            parse_json(b.text, name)
        }
        (Some(path), None) => parse_json(&read_text(path)?, &path.display().to_string()),
        (None, None) => Err(usage(format!("a {} file or --bundled name is required", kind.as_str()))),
    }
}

#[derive(Serialize)]
struct RankedGroup {
    label: String,
    values: Vec<f64>,
    ranks: Vec<f64>,
    mean_rank: f64,
}

#[derive(Serialize)]
struct RanksPayload {
    kind: RankKind,
    n_total: usize,
    groups: Vec<RankedGroup>,
}

pub fn ranks(a: &RanksArgs) -> CliResult<Output> {
    let data = read_data(&a.file)?;
    let kind = if a.pseudo { RankKind::Pseudo } else { RankKind::Ordinary };
    let r = pseudorank::ranking::rank(&data, kind);
    let groups: Vec<RankedGroup> = data
        .groups()
        .iter()
        .zip(&r.ranks)
        .zip(r.group_means())
        .map(|((g, rk), m)| RankedGroup {
            label: g.label.clone(),
            values: g.values.clone(),
            ranks: rk.clone(),
            mean_rank: m,
        })
        .collect();

    let rows: Vec<Vec<String>> = groups
        .iter()
        .flat_map(|g| {
            g.values
                .iter()
                .zip(&g.ranks)
                .map(|(v, r)| vec![g.label.clone(), num(*v), num(*r)])
        })
        .collect();
    let means: Vec<Vec<String>> = groups
        .iter()
        .map(|g| vec![g.label.clone(), g.values.len().to_string(), num(g.mean_rank)])
        .collect();
    let label = if a.pseudo { "pseudo-rank" } else { "rank" };
    let text = format!(
        "{}\n{}",
        render::table(&["group", "value", label], &rows),
        render::table(&["group", "n", &format!("mean {label}")], &means)
    );
    let csv_rows: Vec<Vec<String>> = groups
        .iter()
        .flat_map(|g| {
            g.values
                .iter()
                .zip(&g.ranks)
                .map(|(v, r)| vec![g.label.clone(), v.to_string(), r.to_string()])
        })
        .collect();
    let csv = render::csv(&["group", "value", "rank"], &csv_rows);
    let payload = RanksPayload {
        kind,
        n_total: data.total(),
        groups,
    };
    Ok(Output::new("ranks", &payload, text, csv))
}

#[derive(Serialize)]
struct EffectsPayload {
    groups: Vec<String>,
    sizes: Vec<usize>,
    balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighted: Option<EffectVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unweighted: Option<EffectVector>,
    intervals: Vec<IntervalReport>,
}

pub fn effects(a: &EffectsArgs) -> CliResult<Output> {
    if let Some(level) = a.level {
        if !(level > 0.5 && level < 1.0) {
            return Err(usage(format!("--level must lie in (0.5, 1), got {level}")));
        }
    }
    let data = read_data(&a.file)?;
    let kinds: Vec<EffectKind> = match a.kind {
        KindArg::Weighted => vec![EffectKind::WeightedP],
        KindArg::Unweighted => vec![EffectKind::UnweightedPsi],
        KindArg::Both => vec![EffectKind::WeightedP, EffectKind::UnweightedPsi],
    };
    let mut payload = EffectsPayload {
        groups: data.groups().iter().map(|g| g.label.clone()).collect(),
        sizes: data.sizes(),
        balanced: data.is_balanced(),
        weighted: None,
        unweighted: None,
        intervals: Vec::new(),
    };
    for &k in &kinds {
        let est = estimate(&data, k);
        match k {
            EffectKind::WeightedP => payload.weighted = Some(est),
            EffectKind::UnweightedPsi => payload.unweighted = Some(est),
        }
        if let Some(level) = a.level {
            let opts = IntervalOptions { logit: a.logit };
            payload.intervals.push(effect_intervals(&data, level, k, opts)?);
        }
    }

    let mut headers = vec!["group", "n"];
    if payload.weighted.is_some() {
        headers.push("p_hat");
    }
    if payload.unweighted.is_some() {
        headers.push("psi_hat");
    }
    let rows: Vec<Vec<String>> = (0..data.num_groups())
        .map(|i| {
            let mut row = vec![payload.groups[i].clone(), payload.sizes[i].to_string()];
            for e in [&payload.weighted, &payload.unweighted].into_iter().flatten() {
                row.push(num(e.values[i]));
            }
            row
        })
        .collect();
    let mut text = render::table(&headers, &rows);
    for rep in &payload.intervals {
        let what = match rep.kind {
            pseudorank::confidence::IntervalKind::PsiCi => "confidence intervals for psi",
            pseudorank::confidence::IntervalKind::PInterval => "intervals for p",
        };
        let scale = if rep.logit { ", logit scale" } else { "" };
        text += &format!("\n{}% {what}{scale}\n", num(100.0 * rep.level));
        let rows: Vec<Vec<String>> = rep
            .intervals
            .iter()
            .map(|g| vec![g.label.clone(), num(g.lower), num(g.estimate), num(g.upper), num(g.std_error)])
            .collect();
        text += &render::table(&["group", "lower", "estimate", "upper", "se"], &rows);
        if let Some(note) = &rep.note {
            text += &format!("note: {note}\n");
        }
    }

    let mut csv_rows = Vec::new();
    for e in [&payload.weighted, &payload.unweighted].into_iter().flatten() {
        let (name, ik) = match e.kind {
            EffectKind::WeightedP => ("weighted_p", pseudorank::confidence::IntervalKind::PInterval),
            EffectKind::UnweightedPsi => ("unweighted_psi", pseudorank::confidence::IntervalKind::PsiCi),
        };
        let rep = payload.intervals.iter().find(|r| r.kind == ik);
        for i in 0..data.num_groups() {
            let g = rep.map(|r| &r.intervals[i]);
            csv_rows.push(vec![
                payload.groups[i].clone(),
                payload.sizes[i].to_string(),
                name.to_string(),
                e.values[i].to_string(),
                cell(g.map(|g| g.lower)),
                cell(g.map(|g| g.upper)),
                cell(g.map(|g| g.std_error)),
            ]);
        }
    }
    let csv = render::csv(
        &["group", "n", "kind", "estimate", "lower", "upper", "std_error"],
        &csv_rows,
    );
    Ok(Output::new("effects", &payload, text, csv))
}

pub fn test(a: &TestArgs) -> CliResult<Output> {
    let side: Side = a.side.parse().map_err(|e: pseudorank::Error| usage(e.to_string()))?;
    let ranking = if a.pseudo { RankKind::Pseudo } else { RankKind::Ordinary };
    let contrast = || -> CliResult<Contrast> {
        let s = a
            .contrast
            .as_deref()
            .ok_or_else(|| usage("--contrast is required for this method"))?;
        s.parse().map_err(|e: pseudorank::Error| usage(e.to_string()))
    };
    let data = read_data(&a.file)?;
    let needs_2x2 = matches!(a.method, MethodArg::Contrast | MethodArg::Anova);
    if needs_2x2 && !data.is_factorial() {
        return Err(usage("contrast and anova need a 2x2 file with header a,b,value"));
    }
    if a.method == MethodArg::Anova && a.pseudo {
        return Err(usage("--pseudo does not apply to the ANOVA comparator"));
    }
    let report = match a.method {
        MethodArg::Kw => hypothesis::kruskal_wallis(&data, ranking)?,
        MethodArg::Hn => {
            let t = a
                .trend
                .as_deref()
                .ok_or_else(|| usage("--trend is required for method hn"))?;
            let trend = parse_vector(t).map_err(|e| usage(e.to_string()))?;
            hypothesis::hn_trend(&data, &trend, ranking, side)?
        }
        MethodArg::Contrast => hypothesis::contrast_test(&data, &contrast()?, ranking)?,
        MethodArg::Anova => hypothesis::anova_2x2(&data, &contrast()?)?,
    };
    let text = test_text(&report);
    let csv = render::csv(
        &[
            "method", "ranking", "statistic", "reference", "df", "df2", "p_value", "numerator",
            "statistic_squared", "p_increasing", "p_decreasing", "degenerate",
        ],
        &[vec![
            serde_json::to_value(report.method).unwrap().as_str().unwrap().to_string(),
            report.ranking.map(|r| r.as_str().to_string()).unwrap_or_default(),
            report.statistic.to_string(),
            report.reference.clone(),
            cell(report.df),
            cell(report.df2),
            report.p_value.to_string(),
            cell(report.numerator),
            cell(report.statistic_squared),
            cell(report.p_increasing),
            cell(report.p_decreasing),
            report.degenerate.to_string(),
        ]],
    );
    let mut out = Output::new("test", &report, text, csv);
    if report.degenerate {
        out.degenerate = Some(report.note.clone().unwrap_or_else(|| "degenerate".into()));
    }
    Ok(out)
}

fn test_text(r: &TestReport) -> String {
    use pseudorank::hypothesis::Method;
    let method = match r.method {
        Method::KruskalWallis => "Kruskal-Wallis",
        Method::HnTrend => "trend (Hettmansperger-Norton type)",
        Method::Contrast => "rank contrast",
        Method::Anova => "ANOVA contrast F",
    };
    let mut pairs = vec![("method", method.to_string())];
    if let Some(k) = r.ranking {
        pairs.push(("ranking", k.as_str().to_string()));
    }
    if let Some(c) = &r.contrast_used {
        pairs.push(("coefficients", vector(c)));
    }
    pairs.push(("statistic", num(r.statistic)));
    if let Some(s) = r.statistic_squared {
        pairs.push(("statistic^2", num(s)));
    }
    let reference = match (r.df, r.df2) {
        (Some(a), Some(b)) => format!("{}({}, {})", r.reference, num(a), num(b)),
        (Some(a), None) => format!("{}({})", r.reference, num(a)),
        _ => r.reference.clone(),
    };
    pairs.push(("reference", reference));
    if let Some(n) = r.numerator {
        pairs.push(("numerator", num(n)));
    }
    pairs.push(("p-value", num(r.p_value)));
    if let (Some(i), Some(d)) = (r.p_increasing, r.p_decreasing) {
        pairs.push(("p increasing", num(i)));
        pairs.push(("p decreasing", num(d)));
    }
    if r.degenerate {
        pairs.push(("degenerate", r.note.clone().unwrap_or_default()));
    }
    render::fields(&pairs)
}

#[derive(Serialize)]
struct AnalyticRow {
    label: String,
    w: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w_exact: Option<Vec<Vec<String>>>,
    report: NonCentralityReport,
}

#[derive(Serialize)]
struct AnalyticPayload {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    mode: &'static str,
    rows: Vec<AnalyticRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subgroup: Option<SubgroupTable>,
}

pub fn analytic(a: &AnalyticArgs) -> CliResult<Output> {
    let sc: Scenario = load_json(a.scenario.as_deref(), a.bundled.as_deref(), Kind::Scenario)?;
    sc.validate()?;
    let mode = if a.allocations {
        "allocations"
    } else if a.subgroup {
        "subgroup"
    } else {
        "raw"
    };
    let mut allocations = Vec::new();
    if mode != "subgroup" {
        if let Some(al) = &sc.allocation {
            if mode == "raw" {
                allocations.push(("allocation".to_string(), al.clone()));
            }
        }
        if let Some(list) = &sc.allocations {
            allocations.extend(list.iter().map(|n| (n.label.clone(), n.sizes.clone())));
        }
        if mode == "allocations" && allocations.is_empty() {
            return Err(usage("--allocations needs a scenario with named 'allocations'"));
        }
    }
    let request = NonCentralityRequest {
        trend: sc.trend.clone(),
        contrast: sc.contrast.clone(),
        n_total: a.n_total.or(sc.n_total),
    };
    let rows = allocations
        .into_iter()
        .map(|(label, alloc)| {
            let eff = exact_effects(&sc.specs, &alloc)?;
            let report = noncentralities(&sc.specs, &alloc, &request)?;
            Ok(AnalyticRow {
                label,
                w: eff.w,
                w_exact: eff.exact.map(|e| e.w),
                report,
            })
        })
        .collect::<pseudorank::Result<Vec<_>>>()?;
    let subgroup = match (&sc.subgroup, mode) {
        (Some(s), "subgroup" | "raw") => Some(subgroup_table(&sc.specs, s.fixed, &s.growing, &s.contrast)?),
        (None, "subgroup") => return Err(usage("--subgroup needs a scenario with a 'subgroup' block")),
        _ => None,
    };
    let payload = AnalyticPayload {
        name: sc.name.clone(),
        mode,
        rows,
        subgroup,
    };
    let (text, csv) = analytic_tables(&payload);
    Ok(Output::new("analytic", &payload, text, csv))
}

/// Rounding noise below 1e-12 is shown as zero in text tables.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn snapped(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| snap(x)).collect()
}

fn analytic_tables(p: &AnalyticPayload) -> (String, String) {
    let mut text = String::new();
    let mut csv = String::new();
    if !p.rows.is_empty() {
        let rows: Vec<Vec<String>> = p
            .rows
            .iter()
            .map(|r| {
                let e = r.report.exact.as_ref();
                vec![
                    r.label.clone(),
                    vector(&snapped(&r.report.allocation)),
                    vector(&snapped(&r.report.p)),
                    vector(&snapped(&r.report.psi)),
                    num(snap(r.report.c_p)),
                    e.map(|e| e.c_p.clone()).unwrap_or_default(),
                    num(snap(r.report.c_psi)),
                    opt(r.report.c_hn.map(snap)),
                    e.and_then(|e| e.c_hn.clone()).unwrap_or_default(),
                    opt(r.report.c_contrast_p.map(snap)),
                    opt(r.report.c_contrast_psi.map(snap)),
                    opt(r.report.sqrt_n_scaled.map(snap)),
                ]
            })
            .collect();
        text += &render::table(
            &[
                "setting", "allocation", "p", "psi", "c_p", "c_p exact", "c_psi", "c_HN",
                "c_HN exact", "c'p", "c'psi", "sqrt(N) c",
            ],
            &rows,
        );
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        let csv_rows: Vec<Vec<String>> = p
            .rows
            .iter()
            .map(|r| {
                let e = r.report.exact.as_ref();
                vec![
                    r.label.clone(),
                    join(&r.report.allocation),
                    join(&r.report.p),
                    join(&r.report.psi),
                    r.report.c_p.to_string(),
                    e.map(|e| e.c_p.clone()).unwrap_or_default(),
                    r.report.c_psi.to_string(),
                    cell(r.report.c_hn),
                    e.and_then(|e| e.c_hn.clone()).unwrap_or_default(),
                    cell(r.report.c_contrast_p),
                    cell(r.report.c_contrast_psi),
                    cell(r.report.c_contrast_mu),
                    cell(r.report.sqrt_n_scaled),
                ]
            })
            .collect();
        csv += &render::csv(
            &[
                "setting", "allocation", "p", "psi", "c_p", "c_p_exact", "c_psi", "c_hn",
                "c_hn_exact", "c_contrast_p", "c_contrast_psi", "c_contrast_mu", "sqrt_n_scaled",
            ],
            &csv_rows,
        );
    }
    if let Some(t) = &p.subgroup {
        if !text.is_empty() {
            text.push('\n');
            csv.push('\n');
        }
        let rows: Vec<Vec<String>> = t
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n11.to_string(),
                    r.n12.to_string(),
                    r.n21.to_string(),
                    r.n22.to_string(),
                    r.n_total.to_string(),
                    opt(r.c_mu.map(snap)),
                    num(snap(r.c_psi)),
                    format!("{:.4}", snap(r.c_p)),
                    format!("{:.3}", snap(r.sqrt_n_c_p)),
                ]
            })
            .collect();
        text += &render::table(
            &["n11", "n12", "n21", "n22", "N", "c_mu", "c_psi", "c_p", "sqrt(N) c_p"],
            &rows,
        );
        if let Some(note) = &t.note {
            text += &format!("note: {note}\n");
        }
        let csv_rows: Vec<Vec<String>> = t
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n11.to_string(),
                    r.n12.to_string(),
                    r.n21.to_string(),
                    r.n22.to_string(),
                    r.n_total.to_string(),
                    cell(r.c_mu),
                    r.c_psi.to_string(),
                    r.c_p.to_string(),
                    r.sqrt_n_c_p.to_string(),
                ]
            })
            .collect();
        csv += &render::csv(
            &["n11", "n12", "n21", "n22", "n_total", "c_mu", "c_psi", "c_p", "sqrt_n_c_p"],
            &csv_rows,
        );
    }
    (text, csv)
}

pub fn simulate(a: &SimulateArgs) -> CliResult<Output> {
    let mut plan: SimulationPlan = load_json(a.plan.as_deref(), a.bundled.as_deref(), Kind::Plan)?;
    if let Some(r) = a.reps {
        plan.reps = r;
    }
    if let Some(s) = a.seed {
        plan.seed = s;
    }
    if a.keep_replications {
        plan.keep_replications = true;
    }
    let result = match a.threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(t) => simulate::run_with_threads(&plan, t)?,
        None => simulate::run(&plan)?,
    };
    let text = simulate_text(&plan, &result);
    let csv = result.to_csv()?;
    let mut out = Output::new("simulate", &result, text, csv);
    out.seed = Some(result.seed);
    if result.degenerate > 0 {
        out.degenerate = Some(format!("{} of {} replications were degenerate", result.degenerate, result.reps));
    }
    Ok(out)
}

fn simulate_text(plan: &SimulationPlan, r: &SimulationResult) -> String {
    let metric = match r.metric {
        Metric::RejectionRate => "rejection rate",
        Metric::SignFrequency => "positive-sign frequency",
        Metric::Coverage => "coverage",
    };
    let sizes: Vec<String> = plan.sizes.iter().map(ToString::to_string).collect();
    let mut pairs = vec![];
    if let Some(n) = &r.name {
        pairs.push(("plan", n.clone()));
    }
    pairs.extend([
        ("sizes", sizes.join(", ")),
        ("seed", r.seed.to_string()),
        ("reps", r.reps.to_string()),
        (metric, format!("{} (MC se {})", num(r.value), num(r.mc_se))),
    ]);
    if let (Some(v), Some(t)) = (&r.values, &r.target) {
        pairs.push(("per group", vector(v)));
        pairs.push(("target", vector(t)));
    }
    if let (Some(m), Some(se)) = (r.mean_numerator, r.numerator_se) {
        pairs.push(("mean numerator", format!("{} (se {})", num(m), num(se))));
    }
    pairs.push(("degenerate", r.degenerate.to_string()));
    render::fields(&pairs)
}

pub fn bundled(a: &BundledArgs) -> CliResult<Output> {
    if let Some(name) = &a.name {
        let b = bundled::ALL
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| usage(format!("no bundled file named '{name}'")))?;
        let mut out = Output::new("bundled", &Value::Null, String::new(), String::new());
        out.raw = Some(b.text.to_string());
        return Ok(out);
    }
    #[derive(Serialize)]
    struct Entry {
        name: &'static str,
        kind: &'static str,
    }
    let entries: Vec<Entry> = bundled::ALL
        .iter()
        .map(|b| Entry {
            name: b.name,
            kind: b.kind.as_str(),
        })
        .collect();
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| vec![e.name.to_string(), e.kind.to_string()])
        .collect();
    let text = render::table(&["name", "kind"], &rows);
    let csv = render::csv(&["name", "kind"], &rows);
    Ok(Output::new("bundled", &entries, text, csv))
}
