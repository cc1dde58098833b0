//! Subcommand implementations behind [`run`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use mslab_core::arith::{summatory, summatory_direct, SumKind};
use mslab_core::constants::{
    closed_form_ab, main_term_coefficients, scan_error_term_with_checkpoint, Series,
};
use mslab_core::estermann::{
    estermann_dirichlet, estermann_hurwitz, functional_equation_residual, laurent_at_one,
    FareyArg, MIN_DIRICHLET_REAL_PART,
};
use mslab_core::zeta::{fourth_moment, ratio_moment, IntegralEstimate};
use mslab_core::constants::stieltjes;
use mslab_core::Complex128;

use crate::cache::{cache_path, ensure_dir, VERSION};
use crate::config::{CommandKind, RunConfig};
use crate::error::{CliError, CliResult, ErrorKind};
use crate::output::{
    atomic_write, emit_scan_csv, fmt_real, summary_path_for, ReportArtifact, Summary, Table,
};
use crate::svg::{emit_svg_plot, x_column};
use crate::verify::{run_suite, Suite};

pub const ENV_TIMING: &str = "MSLAB_TIMING";
pub const MAX_DIGITS: u32 = 17;
/// Dirichlet-series cutoff used by `estermann --check value`.
pub const ESTERMANN_L_CUT: u64 = 1_000_000;

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub artifact: ReportArtifact,
    pub stdout: String,
    /// Set when the run completed but a verified property failed.
    pub failure: Option<CliError>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(0, CliError::exit_code)
    }
}

/// Executes one validated configuration on a pool of `config.threads` workers.
pub fn run(config: &RunConfig) -> CliResult<RunOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::new(ErrorKind::Resource, format!("thread pool: {e}")))?;
    let timing = std::env::var(ENV_TIMING).is_ok_and(|v| v == "1");
    let start = Instant::now();
    let mut out = pool.install(|| dispatch(config))?;
    if let Some(summary) = out.summary.as_mut() {
        if timing {
            summary.wall_ms = Some(start.elapsed().as_millis() as u64);
        }
    }
    out.finish()
}

struct Partial {
    artifact: ReportArtifact,
    /// Raw stdout for commands without a summary.
    text: Option<String>,
    summary: Option<Summary>,
    failure: Option<CliError>,
}

impl Partial {
    fn finish(self) -> CliResult<RunOutput> {
        let mut stdout = self.text.unwrap_or_default();
        if let Some(summary) = &self.summary {
            let body = summary.to_pretty();
            if let Some(path) = &self.artifact.json_summary_path {
                atomic_write(path, body.as_bytes())?;
            }
            stdout.push_str(&body);
        }
        Ok(RunOutput {
            artifact: self.artifact,
            stdout,
            failure: self.failure,
        })
    }
}

fn summary(config: &RunConfig, results: Value, warnings: Vec<String>) -> Summary {
    Summary {
        version: VERSION,
        command: config.command.name(),
        params: serde_json::to_value(&config.params).expect("params serialize"),
        results,
        wall_ms: None,
        warnings,
    }
}

fn dispatch(config: &RunConfig) -> CliResult<Partial> {
    match config.command {
        CommandKind::Sum => cmd_sum(config),
        CommandKind::Scan => cmd_scan(config),
        CommandKind::Constants => cmd_constants(config),
        CommandKind::Moments => cmd_moments(config),
        CommandKind::Estermann => cmd_estermann(config),
        CommandKind::Verify => cmd_verify(config),
        CommandKind::Report => cmd_report(config),
    }
}

fn sum_kind(name: &str) -> CliResult<SumKind> {
    match name {
        "d2" => Ok(SumKind::D2),
        "d4" => Ok(SumKind::D4),
        "dcube" => Ok(SumKind::DCube),
        _ => Err(CliError::validation(format!(
            "--kind must be one of d2, d4, dcube; got `{name}`"
        ))),
    }
}

fn series(flag: &str, name: &str) -> CliResult<Series> {
    match name {
        "d2" => Ok(Series::D2),
        "dcube" => Ok(Series::DCube),
        _ => Err(CliError::validation(format!(
            "--{flag} must be one of d2, dcube; got `{name}`"
        ))),
    }
}

fn cmd_sum(config: &RunConfig) -> CliResult<Partial> {
    let kind = sum_kind(&config.required::<String>("kind")?)?;
    let x: u64 = config.required("x")?;
    let method: String = config.required("method")?;
    let sum = match method.as_str() {
        "sublinear" => summatory(x, kind)?,
        "direct" => summatory_direct(x, kind)?,
        other => {
            return Err(CliError::validation(format!(
                "--method must be direct or sublinear; got `{other}`"
            )))
        }
    };
    Ok(Partial {
        artifact: ReportArtifact::default(),
        text: Some(format!("{sum}\n")),
        summary: None,
        failure: None,
    })
}

fn out_path(config: &RunConfig) -> CliResult<PathBuf> {
    let out: PathBuf = config.required("out")?;
    if out.is_dir() {
        return Err(CliError::validation(format!("--out {} is a directory", out.display())));
    }
    Ok(out)
}

fn cmd_scan(config: &RunConfig) -> CliResult<Partial> {
    let kind: String = config.required("kind")?;
    let series = series("kind", &kind)?;
    let from: u64 = config.required("from")?;
    let to: u64 = config.required("to")?;
    let points: usize = config.required("points")?;
    let out = out_path(config)?;

    ensure_dir(&config.cache_dir)?;
    // the output path does not affect the rows, so it stays out of the key
    let key = json!({"kind": kind, "from": from, "to": to, "points": points});
    let checkpoint = cache_path(&config.cache_dir, "scan", &key, "jsonl");
    let outcome = scan_error_term_with_checkpoint(from, to, points, series, Some(&checkpoint))?;
    emit_scan_csv(&outcome.rows, &out)?;

    let (max_ratio, at_x) = outcome
        .rows
        .iter()
        .map(|r| (r.ratio.abs(), r.x))
        .fold((0.0, 0), |best, cur| if cur.0 > best.0 { cur } else { best });
    let results = json!({
        "rows": outcome.rows.len(),
        "max_abs_ratio": max_ratio,
        "max_abs_ratio_at": at_x,
        "within_unit_bound": max_ratio <= 1.0,
    });
    Ok(Partial {
        artifact: ReportArtifact {
            csv_path: Some(out.clone()),
            json_summary_path: Some(summary_path_for(&out)),
            svg_path: None,
        },
        text: None,
        summary: Some(summary(config, results, outcome.warnings)),
        failure: None,
    })
}

/// `v` rounded to `digits` significant digits.
pub fn round_sig(v: f64, digits: u32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1) as usize, v)
        .parse()
        .expect("formatted float parses")
}

fn cmd_constants(config: &RunConfig) -> CliResult<Partial> {
    let series = series("series", &config.required::<String>("series")?)?;
    let digits: u32 = config.required("digits")?;
    if !(1..=MAX_DIGITS).contains(&digits) {
        return Err(CliError::validation(format!(
            "--digits must be in 1..={MAX_DIGITS}, got {digits}"
        )));
    }
    let poly = main_term_coefficients(series)?;
    let mut warnings = Vec::new();
    if digits > poly.digits_valid {
        warnings.push(format!(
            "requested {digits} digits but only {} are stable under a radius change",
            poly.digits_valid
        ));
    }
    let [a, b, c, d] = poly.coeffs.map(|v| round_sig(v, digits));
    let mut results = json!({
        "A": a,
        "B": b,
        "C": c,
        "D": d,
        "digits": digits,
        "digits_valid": poly.digits_valid,
    });
    if series == Series::D2 {
        let (ca, cb) = closed_form_ab()?;
        results["closed_form"] = json!({
            "A": round_sig(ca, digits),
            "B": round_sig(cb, digits),
            "abs_diff_A": (poly.coeffs[0] - ca).abs(),
            "abs_diff_B": (poly.coeffs[1] - cb).abs(),
        });
    }
    Ok(Partial {
        artifact: ReportArtifact::default(),
        text: None,
        summary: Some(summary(config, results, warnings)),
        failure: None,
    })
}

fn cmd_moments(config: &RunConfig) -> CliResult<Partial> {
    let which: String = config.required("which")?;
    let t_max: f64 = config.required("t-max")?;
    let k: Option<f64> = config.optional("k")?;
    let out = out_path(config)?;
    let (est, k): (IntegralEstimate, Option<f64>) = match which.as_str() {
        "fourth" => {
            if k.is_some() {
                return Err(CliError::validation("--k applies only to --which ratio"));
            }
            (fourth_moment(t_max)?, None)
        }
        "ratio" => {
            let k = k.unwrap_or(1.0);
            (ratio_moment(t_max, k)?, Some(k))
        }
        other => {
            return Err(CliError::validation(format!(
                "--which must be fourth or ratio; got `{other}`"
            )))
        }
    };
    let normalized = est.value / (t_max * t_max.ln().powi(4));
    let mut header = vec!["t_max"];
    let mut row = vec![fmt_real(t_max)];
    if let Some(k) = k {
        header.push("k");
        row.push(fmt_real(k));
    }
    header.extend(["value", "abs_err", "panels", "normalized"]);
    row.extend([
        fmt_real(est.value),
        fmt_real(est.abs_err),
        est.panels.to_string(),
        fmt_real(normalized),
    ]);
    let csv = format!("{}\n{}\n", header.join(","), row.join(","));
    atomic_write(&out, csv.as_bytes())?;
    let results = json!({
        "value": est.value,
        "abs_err": est.abs_err,
        "panels": est.panels,
        "normalized": normalized,
    });
    Ok(Partial {
        artifact: ReportArtifact {
            csv_path: Some(out.clone()),
            json_summary_path: Some(summary_path_for(&out)),
            svg_path: None,
        },
        text: None,
        summary: Some(summary(config, results, Vec::new())),
        failure: None,
    })
}

/// Parses `<re>`, `<im>i` or `<re>±<im>i`.
pub fn parse_complex(text: &str) -> CliResult<Complex128> {
    let bad = || CliError::validation(format!("--s expects <re>+<im>i, got `{text}`"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex128::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    // last sign that is neither leading nor part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (num(&body[..j])?, &body[j..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => num(s)?,
    };
    let z = Complex128::new(re, im);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

fn complex_json(z: Complex128) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cmd_estermann(config: &RunConfig) -> CliResult<Partial> {
    let s = parse_complex(&config.required::<String>("s")?)?;
    let h: i64 = config.required("h")?;
    let k: u64 = config.required("k")?;
    let check: String = config.required("check")?;
    let arg = FareyArg::new(h, k)?;
    let results = match check.as_str() {
        "value" => {
            let value = estermann_hurwitz(s, arg)?;
            let mut r = json!({"value": complex_json(value)});
            if s.re >= MIN_DIRICHLET_REAL_PART {
                let d = estermann_dirichlet(s, arg, ESTERMANN_L_CUT)?;
                r["dirichlet"] = json!({
                    "value": complex_json(d.value),
                    "l_cut": ESTERMANN_L_CUT,
                    "tail_bound": d.tail_bound,
                    "abs_diff": (d.value - value).norm(),
                });
            }
            r
        }
        "functional" => json!({"residual": functional_equation_residual(s, arg)?}),
        "laurent" => {
            let c = laurent_at_one(arg)?;
            let gamma = stieltjes(0)?;
            let kf = k as f64;
            let (e2, e1) = (1.0 / kf, 2.0 * (gamma - kf.ln()) / kf);
            json!({
                "c_m2": c.c_m2,
                "c_m1": c.c_m1,
                "expected_c_m2": e2,
                "expected_c_m1": e1,
                "abs_diff_c_m2": (c.c_m2 - e2).abs(),
                "abs_diff_c_m1": (c.c_m1 - e1).abs(),
            })
        }
        other => {
            return Err(CliError::validation(format!(
                "--check must be value, functional or laurent; got `{other}`"
            )))
        }
    };
    Ok(Partial {
        artifact: ReportArtifact::default(),
        text: None,
        summary: Some(summary(config, results, Vec::new())),
        failure: None,
    })
}

fn cmd_verify(config: &RunConfig) -> CliResult<Partial> {
    let suite = Suite::parse(&config.required::<String>("suite")?)?;
    let trials: u64 = config.required("trials")?;
    let report = run_suite(suite, trials, config.seed)?;
    let failure = (!report.passed).then(|| {
        CliError::new(
            ErrorKind::VerificationFailed,
            format!(
                "suite {} failed on {} of {} trials",
                suite.name(),
                report.failures,
                trials
            ),
        )
    });
    let results = serde_json::to_value(&report).expect("report serializes");
    Ok(Partial {
        artifact: ReportArtifact::default(),
        text: None,
        summary: Some(summary(config, results, Vec::new())),
        failure,
    })
}

/// `ratio`, else `normalized`, else the last column.
fn default_y_field(table: &Table) -> String {
    ["ratio", "normalized"]
        .into_iter()
        .find(|f| table.columns.iter().any(|c| c == f))
        .map(str::to_string)
        .unwrap_or_else(|| table.columns.last().cloned().unwrap_or_default())
}

fn cmd_report(config: &RunConfig) -> CliResult<Partial> {
    let input: PathBuf = config.required("in")?;
    let svg: PathBuf = config.required("svg")?;
    let table = Table::load(Path::new(&input))?;
    let y_field = match config.optional::<String>("y-field")? {
        Some(f) => f,
        None => default_y_field(&table),
    };
    emit_svg_plot(&table, &y_field, &svg)?;
    let ys = table.column(&y_field)?;
    let results = json!({
        "rows": table.rows.len(),
        "x_field": x_column(&table),
        "y_field": y_field,
        "y_min": ys.iter().cloned().fold(f64::INFINITY, f64::min),
        "y_max": ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    });
    Ok(Partial {
        artifact: ReportArtifact {
            csv_path: Some(input),
            json_summary_path: Some(summary_path_for(&svg)),
            svg_path: Some(svg),
        },
        text: None,
        summary: Some(summary(config, results, Vec::new())),
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex128::new(re, im);
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("0.5+3i").unwrap(), c(0.5, 3.0));
        assert_eq!(parse_complex("-1-2.5i").unwrap(), c(-1.0, -2.5));
        assert_eq!(parse_complex("1e-3+2e1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert!(parse_complex("1+xi").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(0.101321183642337771, 5), 0.10132);
        assert_eq!(round_sig(123456.0, 2), 120000.0);
        assert_eq!(round_sig(-0.0, 3), 0.0);
    }
}
