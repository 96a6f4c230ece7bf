//! `gasket`: spectra, constants, gap certificates and oracle checks.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 inconclusive,
//! 4 oracle mismatch.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gasket_core::gaps::{self, table1};
use gasket_core::limits::{self, named_constant, NamedConstant};
use gasket_core::oracle::{self, GasketGraph, ORACLE_LEVEL_CAP};
use gasket_core::report::GapReport;
use gasket_core::{spectra, Ball, BoundaryCondition, Certified, Config, Error};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

/// Largest level for claims that enumerate a whole spectrum.
const ENUMERATION_CAP: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "gasket", version, about = "Certified spectral gaps on the Sierpinski gasket")]
struct Cli {
    /// Starting working precision in bits.
    #[arg(long, global = true, env = "GASKET_PRECISION", default_value_t = 128)]
    precision: u32,
    /// Precision cap for automatic escalation.
    #[arg(long, global = true, default_value_t = 4096)]
    precision_cap: u32,
    /// Absolute radius requested for renormalized limits.
    #[arg(long, global = true, default_value = "1e-30")]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

fn bcs(bc: Option<Bc>) -> Vec<BoundaryCondition> {
    match bc {
        Some(b) => vec![b.into()],
        None => vec![BoundaryCondition::Dirichlet, BoundaryCondition::Neumann],
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Claim {
    Key1,
    Key2,
    Induction,
    Prelowest,
    Fullmin,
    Theorem,
    Dyadic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decimation spectrum of one level.
    Spectrum {
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum)]
        bc: Bc,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Decimal digits after the point.
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },
    /// Named limit eigenvalues and the large-gap ratios.
    Constants {
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Certify a claim over a range of parameters; one JSON object per line.
    Verify {
        #[arg(long, value_enum)]
        claim: Claim,
        #[arg(long)]
        min_m: Option<usize>,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long, default_value_t = 5)]
        max_k: usize,
        #[arg(long, value_enum)]
        bc: Option<Bc>,
        /// Fixation level for `theorem`.
        #[arg(long, default_value_t = 6)]
        fixation: usize,
    },
    /// Spacings of the base case minus the level-5 spectral gap.
    Table1,
    /// Compare the decimation set with a dense diagonalization.
    Oracle {
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum)]
        bc: Option<Bc>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Export the level-m graph as an edge list, or its matrix.
    Graph {
        #[arg(long)]
        level: usize,
        /// Print the matrix of -Δ_m instead of the edges.
        #[arg(long, value_enum)]
        matrix: Option<Bc>,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config {
        precision_bits: cli.precision,
        precision_cap: cli.precision_cap,
        limit_tolerance: cli.tolerance,
    };
    let outcome = cfg.validate().map_err(Failure::from).and_then(|_| run(cli.command, &cfg));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("gasket: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, cfg: &Config) -> Outcome {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match command {
        Command::Spectrum {
            level,
            bc,
            format,
            digits,
        } => cmd_spectrum(&mut out, level, bc.into(), format, digits, cfg)?,
        Command::Constants { digits } => cmd_constants(&mut out, digits, cfg)?,
        Command::Verify {
            claim,
            min_m,
            max_m,
            max_k,
            bc,
            fixation,
        } => cmd_verify(&mut out, claim, min_m, max_m, max_k, bc, fixation, cfg)?,
        Command::Table1 => cmd_table1(&mut out, cfg)?,
        Command::Oracle { level, bc, tol } => cmd_oracle(&mut out, level, bc, tol)?,
        Command::Graph { level, matrix } => cmd_graph(&mut out, level, matrix)?,
    };
    out.flush()?;
    Ok(code)
}

fn cmd_spectrum(
    out: &mut impl Write,
    level: usize,
    bc: BoundaryCondition,
    format: Format,
    digits: u32,
    cfg: &Config,
) -> Outcome {
    if level > 20 {
        return Err(usage(format!("level {level} is above the supported 20")));
    }
    let s = spectra::level(bc, level, cfg.precision_bits)?;
    match format {
        Format::Csv => write!(out, "{}", s.to_csv(digits))?,
        Format::Json => {
            let rows: Vec<Value> = s
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    json!({
                        "index": i,
                        "value": e.value.mid_decimal(digits),
                        "radius": e.value.rad_decimal(),
                        "descriptor": e.descriptor.to_string(),
                        "seed": e.descriptor.seed,
                        "birth": e.descriptor.birth,
                        "word": e.descriptor.word,
                        "fixation": e.descriptor.fixation,
                    })
                })
                .collect();
            let doc = json!({
                "level": level,
                "bc": bc,
                "precision_bits": s.precision,
                "values": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Enclosure {
    midpoint: String,
    radius: String,
}

fn enclosure(b: &Ball, digits: u32) -> Enclosure {
    Enclosure {
        midpoint: b.mid_decimal(digits),
        radius: b.rad_decimal(),
    }
}

fn cmd_constants(out: &mut impl Write, digits: u32, cfg: &Config) -> Outcome {
    let mut constants = serde_json::Map::new();
    let mut values = Vec::new();
    for c in NamedConstant::ALL {
        let v = named_constant(c, cfg)?;
        constants.insert(
            c.name().to_string(),
            json!({
                "descriptor": c.descriptor().to_string(),
                "value": enclosure(&v, digits),
            }),
        );
        values.push(v);
    }
    let [l02, l05, _l15, l6] = <[Ball; 4]>::try_from(values).expect("four constants");
    let (r1, r2) = limits::gap_ratios(cfg)?;
    let neumann_gap = limits::renormalized_limit_with(|p| Ok(Ball::from_int(3, p)), 1, cfg)?;
    let less = |a: &Ball, b: &Ball| a.certified_cmp(b) == Certified::Less;
    let doc = json!({
        "precision_bits": cfg.precision_bits,
        "constants": constants,
        "ratios": {
            "lambda6_over_5_lambda0_5": enclosure(&r1, digits),
            "5_lambda1_5_over_lambda6": enclosure(&r2, digits),
        },
        "ordering": {
            "lambda0_2 < lambda0_5": less(&l02, &l05),
            "lambda0_5 < lambda6": less(&l05, &l6),
        },
        "dirichlet_min_gap": enclosure(&l05.sub(&l02), digits),
        "neumann_min_gap": enclosure(&neumann_gap, digits),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    Ok(0)
}

type Job = Box<dyn Fn(&Config) -> gasket_core::Result<GapReport> + Send + Sync>;

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    out: &mut impl Write,
    claim: Claim,
    min_m: Option<usize>,
    max_m: Option<usize>,
    max_k: usize,
    bc: Option<Bc>,
    fixation: usize,
    cfg: &Config,
) -> Outcome {
    let (floor, default_max, enumerates) = match claim {
        Claim::Key1 | Claim::Key2 => (1, 40, false),
        Claim::Induction => (3, 10, true),
        Claim::Prelowest => (3, 6, true),
        Claim::Fullmin => (1, 10, true),
        Claim::Dyadic => (2, 8, false),
        Claim::Theorem => (0, 0, true),
    };
    let lo = min_m.unwrap_or(floor).max(floor);
    let hi = max_m.unwrap_or(default_max);
    let deepest = if claim == Claim::Theorem { fixation } else { hi };
    if enumerates && deepest > ENUMERATION_CAP {
        return Err(usage(format!("levels above {ENUMERATION_CAP} are not supported for {claim:?}")));
    }
    let mut jobs: Vec<Job> = Vec::new();
    match claim {
        Claim::Key1 => jobs.extend((lo..=hi).map(|m| Box::new(move |c: &Config| gaps::verify_key1(m, c)) as Job)),
        Claim::Key2 => jobs.extend((lo..=hi).map(|m| Box::new(move |c: &Config| gaps::verify_key2(m, c)) as Job)),
        Claim::Induction => {
            jobs.extend((lo..=hi).map(|m| Box::new(move |c: &Config| gaps::verify_induction_step(m, c)) as Job))
        }
        Claim::Prelowest => {
            for m in lo..=hi {
                for k in 2..=max_k {
                    jobs.push(Box::new(move |c: &Config| gaps::verify_pre_lowest(m, k, c)));
                }
            }
        }
        Claim::Fullmin => {
            for m in lo..=hi {
                for b in bcs(bc) {
                    jobs.push(Box::new(move |c: &Config| gaps::verify_full_level_minimum(m, b, c)));
                }
            }
        }
        Claim::Theorem => {
            for b in bcs(bc) {
                jobs.push(Box::new(move |c: &Config| gaps::verify_min_gap_theorem(fixation, b, c)));
            }
        }
        Claim::Dyadic => {
            for m in lo..=hi {
                for m2 in m..=hi {
                    if m < m2 {
                        jobs.push(Box::new(move |c: &Config| limits::check_interval_separation(m as u32, m2 as u32, c)));
                    }
                    jobs.push(Box::new(move |c: &Config| limits::check_sum_closure(m as u32, m2 as u32, c)));
                }
            }
        }
    }
    if jobs.is_empty() {
        return Err(usage("empty parameter range"));
    }
    let reports: Vec<gasket_core::Result<GapReport>> = jobs.par_iter().map(|job| job(cfg)).collect();
    let mut code = 0;
    for r in reports {
        let r = r?;
        if !r.is_certified() {
            code = EXIT_INCONCLUSIVE;
        }
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(code)
}

fn cmd_table1(out: &mut impl Write, cfg: &Config) -> Outcome {
    let rows = table1(cfg.precision_bits)?;
    writeln!(out, "gap,rounded,truncated,raw,radius,lower,upper")?;
    let mut flagged = Vec::new();
    for r in &rows {
        let d = &r.difference;
        let rounded = d.mid_decimal(4);
        if d.is_positive() && rounded == "0.0000" {
            flagged.push(r.index);
        }
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.index,
            rounded,
            d.mid().to_decimal_truncated(4),
            d.mid().to_scientific(12),
            d.rad_decimal(),
            r.lower,
            r.upper
        )?;
    }
    for i in flagged {
        writeln!(
            out,
            "# row {i}: difference {} is positive but below four-digit resolution",
            rows[i - 1].difference.mid().to_scientific(5)
        )?;
    }
    Ok(0)
}

fn cmd_oracle(out: &mut impl Write, level: usize, bc: Option<Bc>, tol: f64) -> Outcome {
    if level > ORACLE_LEVEL_CAP {
        return Err(usage(format!("oracle level {level} is above the cap {ORACLE_LEVEL_CAP}")));
    }
    let checks: Vec<_> = bcs(bc)
        .into_par_iter()
        .map(|b| oracle::cross_check(level, b, tol))
        .collect();
    for c in checks {
        let c = c?;
        writeln!(out, "{}", serde_json::to_string(&c).expect("json"))?;
    }
    Ok(0)
}

fn cmd_graph(out: &mut impl Write, level: usize, matrix: Option<Bc>) -> Outcome {
    if level > ORACLE_LEVEL_CAP + 1 {
        return Err(usage(format!("graph level {level} is above {}", ORACLE_LEVEL_CAP + 1)));
    }
    let g = GasketGraph::build(level);
    match matrix {
        None => write!(out, "{}", g.edge_list())?,
        Some(b) => write!(out, "{}", oracle::laplacian_matrix(&g, b.into()).to_text())?,
    }
    Ok(0)
}
