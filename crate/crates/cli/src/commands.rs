use std::fmt::Write as _;
use std::path::PathBuf;

use cumdir::bench::{emit_report, run_benchmark, BenchPlan, ReportFormat};
use cumdir::identify::InferenceResult;
use cumdir::model::{generate_data, sample_model, Case, ModelSpec, NoiseFamily};
use cumdir::seed::derive_seed;
use cumdir::theorems::{run_theorem_suite, SuiteOptions, SuiteReport};
use cumdir::{identify_direction, IdentifyConfig};
use serde::Serialize;

use crate::args::{
    BenchmarkArgs, GlobalArgs, InferArgs, OracleArgs, OutputFormat, ReportKind, SimulateArgs,
};
use crate::data::{read_pair_csv, write_pair_csv};
use crate::error::CliError;

type CmdResult = Result<String, CliError>;

fn to_json<T: Serialize>(value: &T) -> CmdResult {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Config(e.to_string()))
}

fn apply_overrides(config: &mut IdentifyConfig, global: &GlobalArgs) {
    if let Some(e) = global.epsilon {
        config.epsilon = e;
    }
    if let Some(t) = global.rank_tol {
        config.rank_rel_tol = t;
    }
    if let Some(k) = global.k_max {
        config.k_max = k;
    }
    if global.assume_m.is_some() {
        config.assumed_m = global.assume_m;
    }
}

pub fn infer(args: &InferArgs, global: &GlobalArgs) -> CmdResult {
    let mut config = IdentifyConfig::default();
    apply_overrides(&mut config, global);
    config.validate().map_err(CliError::from_lib)?;
    let sample = read_pair_csv(&args.input, !global.no_header)?;
    let result = identify_direction(&sample, &config).map_err(CliError::from_lib)?;
    match global.format {
        OutputFormat::Json => to_json(&result),
        OutputFormat::Text => Ok(inference_text(&result)),
        OutputFormat::Csv => Ok(inference_csv(&result)),
    }
}

fn fmt_m(m: Option<usize>) -> String {
    m.map_or_else(|| "-".into(), |m| m.to_string())
}

fn inference_text(r: &InferenceResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict:    {}", r.verdict);
    let _ = writeln!(out, "latents m:  {}", fmt_m(r.m));
    let _ = writeln!(
        out,
        "k used:     {}{}",
        r.k_used,
        if r.forced { " (assumed m)" } else { "" }
    );
    let _ = writeln!(out, "|det| xy:   {:.6e}", r.det_xy);
    let _ = writeln!(out, "|det| yx:   {:.6e}", r.det_yx);
    let _ = writeln!(out, "decided by: {}", r.decided_by.as_str());
    let _ = writeln!(out, "\n  k  rank_xy  rank_yx  singular values xy | yx");
    for step in &r.trajectory {
        let sv = |v: &[f64]| {
            v.iter()
                .map(|s| format!("{s:.3e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            out,
            "{:>3}  {:>7}  {:>7}  {} | {}",
            step.k,
            step.xy.rank,
            step.yx.rank,
            sv(&step.xy.singular_values),
            sv(&step.yx.singular_values)
        );
    }
    out
}

fn inference_csv(r: &InferenceResult) -> String {
    let ranks = r.final_step();
    format!(
        "verdict,m,k_used,det_xy,det_yx,rank_xy,rank_yx,decided_by,forced\n{},{},{},{:e},{:e},{},{},{},{}\n",
        r.verdict,
        r.m.map(|m| m.to_string()).unwrap_or_default(),
        r.k_used,
        r.det_xy,
        r.det_yx,
        ranks.xy.rank,
        ranks.yx.rank,
        r.decided_by.as_str(),
        r.forced
    )
}

#[derive(Serialize)]
struct SimulationRecord<'a> {
    case: Case,
    m: usize,
    n: usize,
    families: &'a [NoiseFamily],
    seed: u64,
    data_seed: u64,
    data: String,
    model: &'a ModelSpec,
}

pub fn simulate(args: &SimulateArgs, global: &GlobalArgs) -> CmdResult {
    let case = Case::try_from(args.case).map_err(CliError::Config)?;
    let m = args.m.unwrap_or_else(|| case.default_m());
    let families = args
        .family
        .iter()
        .map(|f| f.parse::<NoiseFamily>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from_lib)?;
    if args.n < 2 {
        return Err(CliError::Config(format!(
            "n must be at least 2, got {}",
            args.n
        )));
    }
    let seed = global.seed.unwrap_or(0);
    let model = sample_model(case, m, &families, seed).map_err(CliError::from_lib)?;
    let data_seed = derive_seed(seed, &[args.n as u64]);
    let sample = generate_data(&model, args.n, data_seed).map_err(CliError::from_lib)?;
    let sidecar = args
        .sidecar
        .clone()
        .unwrap_or_else(|| args.out.with_extension("model.json"));

    write_pair_csv(&args.out, &sample, !global.no_header)?;
    let record = SimulationRecord {
        case,
        m,
        n: args.n,
        families: &families,
        seed,
        data_seed,
        data: args.out.display().to_string(),
        model: &model,
    };
    std::fs::write(&sidecar, to_json(&record)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", sidecar.display())))?;

    match global.format {
        OutputFormat::Json => to_json(&serde_json::json!({
            "data": args.out,
            "sidecar": sidecar,
            "rows": args.n,
            "direction": model.direction,
            "m": m,
        })),
        OutputFormat::Text => Ok(format!(
            "wrote {} rows to {}\nmodel: {} with m = {} -> {}\n",
            args.n,
            args.out.display(),
            model.direction,
            m,
            sidecar.display()
        )),
        OutputFormat::Csv => Ok(format!(
            "data,sidecar,rows,direction,m\n{},{},{},{},{}\n",
            args.out.display(),
            sidecar.display(),
            args.n,
            model.direction,
            m
        )),
    }
}

pub fn benchmark(args: &BenchmarkArgs, global: &GlobalArgs) -> CmdResult {
    let mut plan = match &args.plan {
        Some(path) => BenchPlan::from_path(path).map_err(|e| match e {
            cumdir::Error::Io(io) => CliError::Input(format!("{}: {io}", path.display())),
            other => CliError::Config(other.to_string()),
        })?,
        None if args.fast => BenchPlan::fast(),
        None => BenchPlan::table1(),
    };
    apply_overrides(&mut plan.config, global);
    if let Some(m) = global.assume_m {
        plan.config.assumed_m = None;
        plan.assumed_counts = Some(vec![m]);
    }
    if let Some(seed) = global.seed {
        plan.seed = seed;
    }
    let report = run_benchmark(&plan).map_err(CliError::from_lib)?;
    let format = match (args.report_format, global.format) {
        (Some(ReportKind::Csv), _) | (None, OutputFormat::Csv) => ReportFormat::Csv,
        (Some(ReportKind::Json), _) | (None, OutputFormat::Json) => ReportFormat::Json,
        (Some(ReportKind::Markdown), _) | (None, OutputFormat::Text) => ReportFormat::Markdown,
    };
    let text = emit_report(&report, format, args.timing).map_err(CliError::from_lib)?;
    write_or_return(args.out.as_ref(), text)
}

fn write_or_return(path: Option<&PathBuf>, text: String) -> CmdResult {
    match path {
        Some(p) => {
            std::fs::write(p, &text)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Runs the suite; the rendered report is returned alongside the failure
/// count so it can be printed before exiting.
pub fn oracle_check(args: &OracleArgs, global: &GlobalArgs) -> Result<(String, usize), CliError> {
    if args.m_min > args.m_max {
        return Err(CliError::Config(format!(
            "m range {}..={} is empty",
            args.m_min, args.m_max
        )));
    }
    let defaults = SuiteOptions::default();
    let options = SuiteOptions {
        m_values: (args.m_min..=args.m_max).collect(),
        models_per_m: args.models_per_m,
        seed: global.seed.unwrap_or(defaults.seed),
        rank_tol: global.rank_tol.unwrap_or(defaults.rank_tol),
        cause_det_max: args.cause_det_max,
        effect_det_min: args.effect_det_min,
        inject_reducible: args.inject_reducible,
    };
    let report = run_theorem_suite(&options).map_err(CliError::from_lib)?;
    let failures = report.failures().count();
    let text = match global.format {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Text => suite_text(&report),
        OutputFormat::Csv => suite_csv(&report),
    };
    Ok((text, failures))
}

fn suite_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    for &m in &report.options.m_values {
        let models: Vec<_> = report.models.iter().filter(|o| o.m == m).collect();
        let passed = models.iter().filter(|o| o.passed()).count();
        let _ = writeln!(out, "m = {m}: {passed}/{} models pass", models.len());
        for t in report
            .tallies()
            .iter()
            .filter(|t| t.m == m && t.passed < t.total)
        {
            let _ = writeln!(out, "    {}: {}/{}", t.name, t.passed, t.total);
        }
    }
    for outcome in report.failures() {
        let _ = writeln!(
            out,
            "FAIL m = {} model {} (seed {}, {})",
            outcome.m, outcome.index, outcome.seed, outcome.direction
        );
        for c in outcome.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(out, "    {}: {}", c.name, c.detail);
        }
    }
    let _ = writeln!(
        out,
        "{}",
        if report.passed() {
            "all checks pass"
        } else {
            "some checks failed"
        }
    );
    out
}

fn suite_csv(report: &SuiteReport) -> String {
    let mut out = String::from("m,check,passed,total\n");
    for t in report.tallies() {
        let _ = writeln!(out, "{},{},{},{}", t.m, t.name, t.passed, t.total);
    }
    out
}
