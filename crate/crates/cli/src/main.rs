mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use cache::{Cache, CacheStatus};
use commands::{Check, Command, CommandError};
use config::{load_group, parse_field, parse_wall, parse_word, InputError, RunConfig};

/// Exact checks on multiplicative Soergel bimodules.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on invalid input.
#[derive(Parser, Debug)]
#[command(name = "soergel-cli", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Preset name (PGL2, PGL3, PGL4, SL2, SL3, B2, G2) or a TOML datum file.
    #[arg(long, default_value = "PGL2")]
    group: String,
    /// `Q` or a prime such as `F5`.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Support radius for bounded Hom computations.
    #[arg(long = "box", default_value_t = 2)]
    box_radius: i64,
    /// `all` or a 1-based index into the positive coroots.
    #[arg(long, default_value = "all")]
    wall: String,
    /// Comma-separated 1-based simple reflections, e.g. `1,2,1`.
    #[arg(long)]
    word: Option<String>,
    /// Torus point for soergel-split, comma-separated, e.g. `3,9`.
    #[arg(long)]
    point: Option<String>,
    /// Print one JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Directory for cached bimodules.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Include wall-clock time and cache status in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
    cache: CacheStatus,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    passed: bool,
    checks: &'a [Check],
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

fn build_config(cli: &Cli) -> Result<RunConfig, InputError> {
    if cli.box_radius < 0 {
        return Err(InputError("--box must be nonnegative".into()));
    }
    let datum = load_group(&cli.group)?;
    let field_spec = parse_field(&cli.field)?;
    let wall = parse_wall(&cli.wall, &datum)?;
    let word = cli
        .word
        .as_deref()
        .map(|w| parse_word(w, &datum))
        .transpose()?;
    let point = cli.point.as_deref().map(|p| {
        p.split(',')
            .map(|x| x.trim().to_string())
            .collect::<Vec<_>>()
    });
    if let Some(p) = &point {
        if p.len() != datum.lattice_rank() {
            return Err(InputError(format!(
                "--point needs {} coordinates",
                datum.lattice_rank()
            )));
        }
    }
    Ok(RunConfig {
        group: datum.name().to_string(),
        field: field_spec.to_string(),
        box_radius: cli.box_radius,
        wall,
        word,
        point,
        cache_dir: cli.cache_dir.clone(),
        datum,
        field_spec,
    })
}

fn print_text(command: &str, cfg: &RunConfig, checks: &[Check], timing: Option<&Timing>) {
    let mut header = format!("{command}: group {} over {}", cfg.group, cfg.field);
    if cfg.word.is_some() {
        header.push_str(&format!(", word [{}]", cfg.word_label()));
    }
    println!("{header}");
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", c.name, c.summary);
    }
    if let Some(t) = timing {
        println!("time {} ms, cache {:?}", t.elapsed_ms, t.cache);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut cache = Cache::new(cfg.cache_dir.clone());
    let checks = match commands::run(cli.command, &cfg, &mut cache) {
        Ok(c) => c,
        Err(CommandError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CommandError::Failed(msg)) => {
            eprintln!("check failed: {msg}");
            return ExitCode::from(1);
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    let timing = cli.timing.then(|| Timing {
        elapsed_ms: start.elapsed().as_millis(),
        cache: cache.status,
    });
    if cli.json {
        let report = Report {
            command: cli.command.name(),
            version: env!("CARGO_PKG_VERSION"),
            config: &cfg,
            passed,
            checks: &checks,
            timing,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        print_text(cli.command.name(), &cfg, &checks, timing.as_ref());
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
