//! `pmconv`: validate instance files, run convergence checks, generate random
//! instances, and run certification campaigns.
//!
//! Exit codes: 0 success, 1 a certified property failed (counterexample
//! found), 2 input error. Human-readable tables are rendered from the JSON
//! reports, never computed separately.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pmconv_core::convergence::{
    classical_p_conv, classical_p_minus, classical_p_plus, classical_set_conv, graph_ideal_conv,
    lower_set_ideal_conv, p_ideal_conv, p_ideal_minus_naive, p_ideal_minus_supinf,
    p_ideal_plus_naive, p_ideal_plus_supinf, pointwise_ideal_conv, sup_sup_condition,
    upper_set_ideal_conv, ConvergenceVerdict, FailingWitness, Instance, Side,
};
use pmconv_core::harness::{
    certify, random_instance, CampaignConfig, Caps, IdealStrategy, PropertyId,
};
use pmconv_core::instance_file::{parse_instance, InstanceFile};
use pmconv_core::metric::FiniteMetricSpace;
use pmconv_core::Subset;

#[derive(Parser)]
#[command(
    name = "pmconv",
    version,
    about = "Decidable bornological ideal-convergence checks for nets of partial maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant of an instance file and list all violations.
    Validate { path: PathBuf },
    /// Run convergence checkers against an instance file.
    Check {
        path: PathBuf,
        /// Comma-separated mode list, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        modes: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run a certification campaign over seeded random instances.
    Certify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Size caps as `|X|,|Y|,|Gamma|,|base|`.
        #[arg(long, default_value = "5,4,6,3")]
        caps: String,
        /// Comma-separated property list, or `all` (the mutation smoke check
        /// is only run when named explicitly).
        #[arg(long, value_delimiter = ',', default_value = "all")]
        theorems: Vec<String>,
        /// `i0`, `random`, `generated`, `empty`, or a path to a JSON array of
        /// generator index arrays.
        #[arg(long, default_value = "random")]
        ideal: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write a random valid instance file.
    Generate {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "5,4,6,3")]
        caps: String,
        #[arg(long, default_value = "random")]
        ideal: String,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Check { path, modes, format } => cmd_check(&path, &modes, format),
        Command::Certify { seed, trials, caps, theorems, ideal, out, format } => {
            cmd_certify(seed, trials, &caps, &theorems, &ideal, out.as_deref(), format)
        }
        Command::Generate { path, seed, caps, ideal } => {
            cmd_generate(&path, seed, &caps, &ideal)
        }
    };
    ExitCode::from(code)
}

fn load_instance(path: &std::path::Path) -> Result<Instance, u8> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_INPUT);
        }
    };
    match parse_instance(&text) {
        Ok(inst) => Ok(inst),
        Err(diags) => {
            for d in &diags {
                eprintln!("invalid: {d}");
            }
            Err(EXIT_INPUT)
        }
    }
}

fn cmd_validate(path: &std::path::Path) -> u8 {
    match load_instance(path) {
        Ok(_) => {
            println!("ok: {} satisfies every invariant", path.display());
            EXIT_OK
        }
        Err(code) => code,
    }
}

const ALL_MODES: &[&str] = &[
    "lower-set",
    "upper-set",
    "p-minus",
    "p-plus",
    "p",
    "naive-minus",
    "naive-plus",
    "graph-lower",
    "graph-upper",
    "pointwise",
    "sup-sup",
    "classical-lower-set",
    "classical-upper-set",
    "classical-p-minus",
    "classical-p-plus",
    "classical-p",
];

/// Which space the witness member of a mode lives in.
enum MemberSpace {
    Source,
    BoxProduct,
}

fn cmd_check(path: &std::path::Path, modes: &[String], format: Format) -> u8 {
    let inst = match load_instance(path) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let selected: Vec<String> = if modes.iter().any(|m| m == "all") {
        ALL_MODES.iter().map(|s| s.to_string()).collect()
    } else {
        modes.to_vec()
    };
    for m in &selected {
        if !ALL_MODES.contains(&m.as_str()) {
            eprintln!("error: unknown mode {m:?}; known modes: {}", ALL_MODES.join(", "));
            return EXIT_INPUT;
        }
    }

    let mut rows = Vec::new();
    for mode in &selected {
        rows.push(run_mode(&inst, mode));
    }
    let report = Value::Array(rows);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Table => print_check_table(&report),
    }
    EXIT_OK
}

fn run_mode(inst: &Instance, mode: &str) -> Value {
    let domains = inst.net.domains();
    let d = inst.limit.domain();
    let (verdict, member_space) = match mode {
        "lower-set" => (
            Ok(lower_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &inst.ideal)),
            MemberSpace::Source,
        ),
        "upper-set" => (
            Ok(upper_set_ideal_conv(&inst.x, &domains, d, &inst.bornology, &inst.ideal)),
            MemberSpace::Source,
        ),
        "p-minus" => (Ok(p_ideal_minus_supinf(inst)), MemberSpace::Source),
        "p-plus" => (Ok(p_ideal_plus_supinf(inst)), MemberSpace::Source),
        "p" => (Ok(p_ideal_conv(inst)), MemberSpace::Source),
        "naive-minus" => (p_ideal_minus_naive(inst), MemberSpace::Source),
        "naive-plus" => (p_ideal_plus_naive(inst), MemberSpace::Source),
        "graph-lower" => (Ok(graph_ideal_conv(inst, Side::Lower)), MemberSpace::BoxProduct),
        "graph-upper" => (Ok(graph_ideal_conv(inst, Side::Upper)), MemberSpace::BoxProduct),
        "pointwise" => (Ok(pointwise_ideal_conv(inst)), MemberSpace::Source),
        "sup-sup" => (Ok(sup_sup_condition(inst)), MemberSpace::Source),
        "classical-lower-set" => (
            Ok(classical_set_conv(&inst.x, &domains, d, &inst.bornology, &inst.directed, Side::Lower)),
            MemberSpace::Source,
        ),
        "classical-upper-set" => (
            Ok(classical_set_conv(&inst.x, &domains, d, &inst.bornology, &inst.directed, Side::Upper)),
            MemberSpace::Source,
        ),
        "classical-p-minus" => (classical_p_minus(inst), MemberSpace::Source),
        "classical-p-plus" => (classical_p_plus(inst), MemberSpace::Source),
        "classical-p" => (classical_p_conv(inst), MemberSpace::Source),
        other => unreachable!("mode {other} validated against the known list"),
    };
    match verdict {
        Ok(v) => verdict_json(inst, mode, &v, member_space),
        Err(e) => json!({ "mode": mode, "error": e.to_string() }),
    }
}

fn point_labels(space: &FiniteMetricSpace, s: &Subset) -> Vec<String> {
    s.iter().map(|i| space.label(i).to_string()).collect()
}

fn gamma_labels(inst: &Instance, s: &Subset) -> Vec<String> {
    s.iter().map(|i| inst.directed.label(i).to_string()).collect()
}

fn verdict_json(
    inst: &Instance,
    mode: &str,
    verdict: &ConvergenceVerdict,
    member_space: MemberSpace,
) -> Value {
    let member_labels = |s: &Subset| -> Vec<String> {
        match member_space {
            MemberSpace::Source => point_labels(&inst.x, s),
            MemberSpace::BoxProduct => point_labels(&inst.box_space(), s),
        }
    };
    let witness = match &verdict.failing_witness {
        None => Value::Null,
        Some(FailingWitness::FilterMembership { member, epsilon, gamma_set }) => json!({
            "type": "filter-membership",
            "member": member_labels(member),
            "epsilon": epsilon.to_string(),
            "gamma_set": gamma_labels(inst, gamma_set),
        }),
        Some(FailingWitness::PointNotInLimitDomain { point, cofinal }) => json!({
            "type": "point-not-in-limit-domain",
            "point": inst.x.label(*point),
            "cofinal": gamma_labels(inst, cofinal),
        }),
        Some(FailingWitness::PointValueMismatch { point, cofinal, epsilon, gamma_set }) => json!({
            "type": "point-value-mismatch",
            "point": inst.x.label(*point),
            "cofinal": gamma_labels(inst, cofinal),
            "epsilon": epsilon.to_string(),
            "gamma_set": gamma_labels(inst, gamma_set),
        }),
    };
    json!({
        "mode": mode,
        "holds": verdict.holds,
        "witness": witness,
        "thresholds": verdict.thresholds_used.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "degenerate_traces": verdict
            .degenerate_traces
            .iter()
            .map(|d| json!({
                "point": inst.x.label(d.point),
                "cofinal": gamma_labels(inst, &d.cofinal),
            }))
            .collect::<Vec<_>>(),
    })
}

fn print_check_table(report: &Value) {
    let rows = report.as_array().expect("report is an array");
    let width = rows
        .iter()
        .filter_map(|r| r["mode"].as_str().map(str::len))
        .max()
        .unwrap_or(4);
    println!("{:width$}  {:7}  detail", "mode", "holds");
    for row in rows {
        let mode = row["mode"].as_str().unwrap_or("?");
        if let Some(err) = row.get("error").and_then(Value::as_str) {
            println!("{mode:width$}  {:7}  {err}", "error");
            continue;
        }
        let holds = row["holds"].as_bool().unwrap_or(false);
        let detail = match &row["witness"] {
            Value::Null => {
                let degen = row["degenerate_traces"].as_array().map(Vec::len).unwrap_or(0);
                if degen > 0 {
                    format!("{degen} degenerate trace(s) reported")
                } else {
                    String::new()
                }
            }
            w => summarize_witness(w),
        };
        println!("{mode:width$}  {holds:7}  {detail}");
    }
}

fn summarize_witness(w: &Value) -> String {
    let join = |key: &str| {
        w[key]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(Value::as_str)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default()
    };
    match w["type"].as_str() {
        Some("filter-membership") => format!(
            "member {{{}}} eps {} indices {{{}}} not in the dual filter",
            join("member"),
            w["epsilon"].as_str().unwrap_or("?"),
            join("gamma_set"),
        ),
        Some("point-not-in-limit-domain") => format!(
            "point {} covered cofinally {{{}}} but missing from the limit domain",
            w["point"].as_str().unwrap_or("?"),
            join("cofinal"),
        ),
        Some("point-value-mismatch") => format!(
            "values at {} miss the limit value at eps {} along {{{}}}",
            w["point"].as_str().unwrap_or("?"),
            w["epsilon"].as_str().unwrap_or("?"),
            join("cofinal"),
        ),
        _ => "unrecognized witness".into(),
    }
}

fn parse_caps(spec: &str) -> Result<Caps, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("caps must be `|X|,|Y|,|Gamma|,|base|`, got {spec:?}"));
    }
    let mut nums = [0usize; 4];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("bad cap value {part:?}"))?;
    }
    Ok(Caps { x: nums[0], y: nums[1], gamma: nums[2], base: nums[3] })
}

fn parse_ideal_flag(flag: &str) -> Result<IdealStrategy, String> {
    match flag {
        "i0" => Ok(IdealStrategy::TailIdeal),
        "random" => Ok(IdealStrategy::RandomNontrivial),
        "generated" => Ok(IdealStrategy::Generated),
        "empty" => Ok(IdealStrategy::Empty),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("--ideal {path:?} is not a keyword and not readable: {e}"))?;
            let gens: Vec<Vec<usize>> = serde_json::from_str(&text)
                .map_err(|e| format!("{path}: expected a JSON array of index arrays: {e}"))?;
            Ok(IdealStrategy::FromGenerators(gens))
        }
    }
}

fn parse_theorems(theorems: &[String]) -> Result<Vec<PropertyId>, String> {
    if theorems.iter().any(|t| t == "all") {
        return Ok(PropertyId::all());
    }
    theorems.iter().map(|t| t.parse::<PropertyId>()).collect()
}

fn cmd_certify(
    seed: u64,
    trials: usize,
    caps: &str,
    theorems: &[String],
    ideal: &str,
    out: Option<&std::path::Path>,
    format: Format,
) -> u8 {
    let cfg = (|| -> Result<CampaignConfig, String> {
        Ok(CampaignConfig {
            seed,
            trials,
            caps: parse_caps(caps)?,
            ideal_strategy: parse_ideal_flag(ideal)?,
            properties: parse_theorems(theorems)?,
            ..CampaignConfig::default()
        })
    })();
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let report = match certify(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let report_json = serde_json::to_value(&report).expect("report serializes");
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(&report_json).expect("serializable");
        text.push('\n');
        if let Err(e) = fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
        print_certify_table(&report_json);
        println!("report written to {}", path.display());
    } else {
        match format {
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(&report_json).expect("serializable"))
            }
            Format::Table => print_certify_table(&report_json),
        }
    }
    if report.failures() == 0 {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn print_certify_table(report: &Value) {
    let props = report["properties"].as_object().expect("properties object");
    let width = props.keys().map(String::len).max().unwrap_or(8).max(8);
    println!(
        "{:width$}  {:>6}  {:>6}  {:>7}  {:>10}",
        "property", "pass", "fail", "skipped", "hyp-true"
    );
    for (name, tally) in props {
        println!(
            "{name:width$}  {:>6}  {:>6}  {:>7}  {:>10}",
            tally["pass"].as_u64().unwrap_or(0),
            tally["fail"].as_u64().unwrap_or(0),
            tally["skipped"].as_u64().unwrap_or(0),
            tally["hypothesis_checked_true"].as_u64().unwrap_or(0),
        );
    }
    let counterexamples = report["counterexamples"].as_array().map(Vec::len).unwrap_or(0);
    let degenerate = report["degenerate_traces"].as_u64().unwrap_or(0);
    let ms = report["duration_ms"].as_u64().unwrap_or(0);
    println!("counterexamples: {counterexamples}   degenerate traces: {degenerate}   duration: {ms} ms");
}

fn cmd_generate(path: &std::path::Path, seed: u64, caps: &str, ideal: &str) -> u8 {
    let cfg = (|| -> Result<CampaignConfig, String> {
        Ok(CampaignConfig {
            seed,
            trials: 1,
            caps: parse_caps(caps)?,
            ideal_strategy: parse_ideal_flag(ideal)?,
            ..CampaignConfig::default()
        })
    })();
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    let inst = random_instance(&cfg, 0);
    let text = InstanceFile::from_instance(&inst).to_json();
    if let Err(e) = fs::write(path, text) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return EXIT_INPUT;
    }
    println!("wrote {}", path.display());
    EXIT_OK
}
