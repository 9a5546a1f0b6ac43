//! Batch experiment driver.
//!
//! `haarforge <command> [--config path|-] [--seed u64] [--out path] [--format json|csv]`
//! plus flags mirroring [`ExperimentConfig`]. Exit codes: 0 success, 1 invalid
//! input, 2 numerical or I/O failure; failures print a JSON error object on stderr.
//! `HAARFORGE_THREADS` caps the worker pool.

mod commands;
mod config;
mod report;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use num_complex::Complex64;

pub use config::{Command, ExperimentConfig, Format, SamplerKind, DEFAULT_SEED};
pub use report::{
    artifact_version, emit, to_csv, validate_report, Check, ExperimentReport, Provenance,
    SCHEMA_VERSION,
};

use crate::ensembles::ThetaChoice;
use crate::{Error, Result};

pub const THREADS_ENV: &str = "HAARFORGE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "haarforge",
    version,
    about = "Random-unitary ensembles and Haar-moment experiments"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON config file, or `-` for standard input.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    sampler: Option<SamplerKind>,
    #[arg(long, visible_alias = "N")]
    dim: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "T", visible_alias = "t")]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Explicit angle; see `--theta-index` for calibrated values.
    #[arg(long, conflicts_with = "theta_index")]
    theta: Option<f64>,
    /// Use the k-th calibrated angle.
    #[arg(long)]
    theta_index: Option<usize>,
    /// Target moments as `re,im` pairs separated by `;`, e.g. `0.1,0;0,0.05`.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    best_effort: bool,
}

fn parse_alpha(s: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let num = |x: &str| {
                x.parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad alpha entry {pair:?}")))
            };
            match parts.as_slice() {
                [re] => Ok(Complex64::new(num(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(Error::InvalidConfig(format!("bad alpha entry {pair:?}"))),
            }
        })
        .collect()
}

impl Args {
    /// Merge flags over the config document.
    fn into_config(self, stdin: &mut dyn Read) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) if p.as_os_str() == "-" => {
                let mut text = String::new();
                stdin
                    .read_to_string(&mut text)
                    .map_err(|e| Error::InvalidConfig(format!("stdin: {e}")))?;
                ExperimentConfig::from_json(&text)?
            }
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        match cfg.command {
            Some(c) if c != self.command => {
                return Err(Error::InvalidConfig(format!(
                    "config is for {}, command line says {}",
                    c.name(),
                    self.command.name()
                )))
            }
            _ => cfg.command = Some(self.command),
        }
        macro_rules! over {
            ($($f:ident),*) => { $( if self.$f.is_some() { cfg.$f = self.$f; } )* };
        }
        over!(seed, format, sampler, dim, samples, p_max, p, t, k, q);
        if let Some(out) = self.out {
            cfg.output_path = Some(out);
        }
        if let Some(theta) = self.theta {
            cfg.theta = Some(ThetaChoice::Value(theta));
        }
        if let Some(calibrated) = self.theta_index {
            cfg.theta = Some(ThetaChoice::Calibrated { calibrated });
        }
        if let Some(a) = self.alpha {
            cfg.alpha = Some(parse_alpha(&a)?);
        }
        cfg.best_effort |= self.best_effort;
        Ok(cfg)
    }
}

/// Run one experiment on the current rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (results, checks) = commands::dispatch(config)?;
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        version: artifact_version(),
        config: config.clone(),
        results,
        checks,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Worker count from `HAARFORGE_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::InvalidConfig(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// [`run`] inside a pool of `threads` workers (rayon's default when `None`).
pub fn run_with_threads(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run(config))
}

fn write_error(err: &mut dyn Write, e: &Error) {
    let obj = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } });
    let _ = writeln!(err, "{obj}");
}

fn execute(args: Args, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<()> {
    let cfg = args.into_config(stdin)?;
    let report = run_with_threads(&cfg, threads_from_env()?)?;
    let format = cfg.format.unwrap_or_default();
    match &cfg.output_path {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            emit(&report, format, &mut file)?;
            file.flush()?;
            Ok(())
        }
        None => emit(&report, format, out),
    }
}

/// Full command-line behaviour with injectable streams; returns the exit code.
pub fn main_with(
    args: &[String],
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            write_error(
                err,
                &Error::InvalidArgument(e.to_string().trim_end().to_string()),
            );
            return 1;
        }
    };
    match execute(args, stdin, out) {
        Ok(()) => 0,
        Err(e) => {
            write_error(err, &e);
            e.exit_code()
        }
    }
}

/// Entry point for the `haarforge` binary.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    main_with(
        &args,
        &mut std::io::stdin(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let args: Vec<String> = std::iter::once("haarforge")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(&args, &mut stdin.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn calibrate_theta_report() {
        let (code, out, _) = call(&["calibrate-theta", "--k", "1"], "");
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        validate_report(&doc).unwrap();
        assert!(doc["results"]["theta"]
            .as_f64()
            .unwrap()
            .to_string()
            .starts_with("1.915"));
    }

    #[test]
    fn weingarten_from_stdin() {
        let (code, out, _) = call(
            &["weingarten", "--config", "-"],
            r#"{"command": "weingarten", "q": 2, "N": 5}"#,
        );
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let vals: Vec<&str> = doc["results"]["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v["value"].as_str().unwrap())
            .collect();
        assert_eq!(vals, ["-1/120", "1/24"]);
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = call(&["no-such-command"], "");
        assert_eq!(code, 1);
        assert!(err.contains("\"exit_code\":1"));
        assert_eq!(call(&["weingarten"], "").0, 1);
        assert_eq!(call(&["moments", "--config", "-"], "{not json").0, 1);
        assert_eq!(
            call(
                &["moments", "--config", "-"],
                r#"{"command": "weingarten"}"#
            )
            .0,
            1
        );
        assert_eq!(call(&["moments", "--samples", "1"], "").0, 1);
        assert_eq!(
            call(&["momentsolve", "--alpha", "0.2;0.2", "--N", "2000"], "").0,
            2
        );
        assert_eq!(
            call(
                &[
                    "calibrate-theta",
                    "--k",
                    "2",
                    "--out",
                    "/nonexistent-dir/x.json"
                ],
                ""
            )
            .0,
            2
        );
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn untagged_threshold_fails_validation() {
        let report = run(&ExperimentConfig {
            k: Some(1),
            ..ExperimentConfig::for_command(Command::CalibrateTheta)
        })
        .unwrap();
        let mut doc = serde_json::to_value(&report).unwrap();
        validate_report(&doc).unwrap();
        doc["checks"][0]
            .as_object_mut()
            .unwrap()
            .remove("provenance");
        assert!(validate_report(&doc).is_err());
    }

    #[test]
    fn alpha_flag_parsing() {
        assert_eq!(
            parse_alpha("0.1,0.2; -0.3").unwrap(),
            vec![Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0)]
        );
        assert!(parse_alpha("x").is_err());
    }
}
