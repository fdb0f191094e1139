use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bottlab_core::degree::{column_degrees, degree_mc_with, DegreeConfig, DegreeEstimate, DEFAULT_H};
use bottlab_core::maps::{column, lookup, registry_listing, SphereMap};
use bottlab_core::verify::{run_suite, RunConfig, Status};
use bottlab_core::{table, ComplexMatrix, Error, SpherePoint};

const EXIT_FAIL: u8 = 1;
const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "bottlab", version, about = "Explicit sphere maps into unitary groups, checked numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every registered map with its signature.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a map at a point given as comma-separated reals.
    Eval {
        map: String,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Monte-Carlo degree of one or all columns of a map.
    Degree {
        map: String,
        /// Column index (1-based) or "all".
        #[arg(long, default_value = "all")]
        column: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_H)]
        h: f64,
        /// 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Run a check suite, or one check as suite/check.
    Verify {
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_H)]
        h: f64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// A tolerance for every check, or suite/check=value; repeatable.
        #[arg(long)]
        tol: Vec<String>,
        /// Range of n for the cylinder-map suite, as A..B or a single value.
        #[arg(long, default_value = "2..5")]
        n: String,
    },
    /// Print the table of the first homotopy groups of U(n).
    Table {
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pretty,
    Data,
}

/// A failed command: message and exit code.
struct Failure(String, u8);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownMap(_)
            | Error::UnknownSuite(_)
            | Error::DomainMismatch(_)
            | Error::OutOfRange { .. }
            | Error::InvalidPoint(_) => EXIT_USAGE,
            Error::InsufficientBudget { .. } => EXIT_UNCERTIFIED,
            _ => EXIT_FAIL,
        };
        Failure(e.to_string(), code)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(msg.into(), EXIT_USAGE)
}

/// Shortest decimal with at most `digits` significant digits.
fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{v:.decimals$}"))
    } else {
        let s = format!("{:.*e}", digits - 1, v);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{e}", trim(mantissa.to_string()))
    }
}

fn format_entry(re: f64, im: f64) -> String {
    let (re, im) = (if re == 0.0 { 0.0 } else { re }, if im == 0.0 { 0.0 } else { im });
    if im == 0.0 {
        sig(re, 15)
    } else if re == 0.0 {
        format!("{}i", sig(im, 15))
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", sig(re, 15), sig(im.abs(), 15))
    }
}

fn print_matrix(m: &ComplexMatrix) {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_entry(m[(i, j)].re, m[(i, j)].im)).collect())
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        println!("{}", line.join("  "));
    }
}

fn parse_point(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("not a number: {s:?}"))))
        .collect()
}

fn cmd_list(json: bool) -> Result<(), Failure> {
    let listing = registry_listing()?;
    if json {
        println!("{}", serde_json::to_string_pretty(&listing).expect("listing serializes"));
    } else {
        for e in listing {
            println!("{} {}\t{}", e.name, e.signature, e.provenance);
        }
    }
    Ok(())
}

fn cmd_eval(name: &str, point: &str) -> Result<(), Failure> {
    let map = lookup(name)?;
    let coords = parse_point(point)?;
    let ambient = map.domain_dim() + 1;
    if coords.len() != ambient {
        return Err(usage(format!(
            "{name} is {} and needs {ambient} coordinates, got {}",
            map.signature(),
            coords.len()
        )));
    }
    let len = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(len > 0.0 && len.is_finite()) {
        return Err(usage("point must be a nonzero finite vector"));
    }
    if (len - 1.0).abs() > 1e-9 {
        eprintln!("note: point has norm {}, renormalized onto the sphere", sig(len, 15));
    }
    let x = SpherePoint::normalized(&coords, map.view())?;
    print_matrix(&map.eval(&x));
    Ok(())
}

/// Self-maps addressable by name in `degree`.
fn sphere_map(name: &str) -> Option<SphereMap> {
    let (kind, dim) = name.split_once(".S")?;
    let m: usize = dim.parse().ok()?;
    if m == 0 || m > 15 {
        return None;
    }
    match kind {
        "identity" => Some(SphereMap::identity(m)),
        "antipodal" => Some(SphereMap::antipodal(m)),
        "conjugation" if m % 2 == 1 => Some(SphereMap::complex_conjugation(m.div_ceil(2))),
        _ => None,
    }
}

fn print_estimate(label: &str, e: &DegreeEstimate) {
    println!(
        "{label}: degree {} ({}), raw {:.6} ± {:.6}, {} samples, seed {}{}",
        e.rounded,
        if e.certified { "certified" } else { "uncertified" },
        e.raw,
        e.stderr,
        e.samples,
        e.seed,
        if e.flagged > 0 { format!(", {} flagged by the step-halving check", e.flagged) } else { String::new() }
    );
}

fn cmd_degree(name: &str, col: &str, cfg: DegreeConfig) -> Result<(), Failure> {
    let estimates: Vec<(String, DegreeEstimate)> = if let Some(f) = sphere_map(name) {
        vec![(name.to_string(), degree_mc_with(&f, &cfg)?)]
    } else {
        let map = lookup(name)?;
        if col == "all" {
            column_degrees(&map, &cfg)?
                .into_iter()
                .enumerate()
                .map(|(j, e)| (format!("column {}", j + 1), e))
                .collect()
        } else {
            let j: usize = col
                .parse()
                .map_err(|_| usage(format!("--column takes an index or \"all\", got {col:?}")))?;
            let f = column(&map, j)?;
            if !f.is_self_map() {
                return Err(usage(format!("{name} is {}; columns are not self-maps", map.signature())));
            }
            vec![(format!("column {j}"), degree_mc_with(&f, &cfg)?)]
        }
    };
    for (label, e) in &estimates {
        print_estimate(label, e);
    }
    if estimates.iter().all(|(_, e)| e.certified) {
        Ok(())
    } else {
        Err(Failure("not every degree is certified".into(), EXIT_UNCERTIFIED))
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("--n takes A..B or a single value, got {text:?}"));
    let (a, b) = text.split_once("..").unwrap_or((text, text));
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn run_config(
    samples: Option<usize>,
    seed: u64,
    h: f64,
    threads: usize,
    tol: &[String],
    n: &str,
    out: Option<PathBuf>,
) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig {
        seed,
        samples,
        h,
        threads,
        n_range: parse_range(n)?,
        out,
        ..RunConfig::default()
    };
    for t in tol {
        let value = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("bad tolerance {t:?}")));
        match t.split_once('=') {
            Some((path, v)) => {
                cfg.tolerances.insert(path.trim().to_string(), value(v)?);
            }
            None => cfg.tolerance = Some(value(t)?),
        }
    }
    Ok(cfg)
}

fn cmd_verify(suite: &str, cfg: &RunConfig) -> Result<(), Failure> {
    let report = run_suite(suite, cfg)?;
    for c in &report.checks {
        let residual = c.max_residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
        println!("{:<12} {:<40} {:>10}  {}", c.status.as_str(), c.name, residual, c.details);
    }
    println!("overall: {}", report.overall);
    if let Some(path) = &cfg.out {
        std::fs::write(path, report.to_json())
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display()), EXIT_FAIL))?;
        println!("report written to {}", path.display());
    }
    match report.overall {
        Status::Pass => Ok(()),
        Status::Inconclusive => Err(Failure("some checks are inconclusive".into(), EXIT_INCONCLUSIVE)),
        Status::Fail | Status::Error => Err(Failure("some checks failed".into(), EXIT_FAIL)),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::List { json } => cmd_list(json),
        Command::Eval { map, point } => cmd_eval(&map, &point),
        Command::Degree {
            map,
            column,
            samples,
            seed,
            h,
            threads,
        } => cmd_degree(
            &map,
            &column,
            DegreeConfig {
                samples,
                seed,
                h,
                threads,
            },
        ),
        Command::Verify {
            suite,
            out,
            samples,
            seed,
            h,
            threads,
            tol,
            n,
        } => {
            let cfg = run_config(samples, seed, h, threads, &tol, &n, out)?;
            cmd_verify(&suite, &cfg)
        }
        Command::Table { format } => {
            match format {
                Format::Pretty => print!("{}", table::render_pretty()),
                Format::Data => print!("{}", table::render_data()),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg, code)) => {
            eprintln!("bottlab: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(1.0, 15), "1");
        assert_eq!(sig(-0.5, 15), "-0.5");
        assert_eq!(sig(std::f64::consts::PI, 15), "3.14159265358979");
        assert_eq!(sig(1.5e-9, 15), "1.5e-9");
        assert_eq!(format_entry(0.0, -1.0), "-1i");
        assert_eq!(format_entry(0.5, -0.25), "0.5-0.25i");
    }

    #[test]
    fn ranges() {
        assert!(matches!(parse_range("2..5"), Ok((2, 5))));
        assert!(matches!(parse_range("3"), Ok((3, 3))));
        assert!(matches!(parse_range("2..=4"), Ok((2, 4))));
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn named_sphere_maps() {
        assert_eq!(sphere_map("identity.S5").unwrap().domain_dim(), 5);
        assert_eq!(sphere_map("conjugation.S3").unwrap().target_dim(), 3);
        assert!(sphere_map("conjugation.S4").is_none());
        assert!(sphere_map("eta_cross").is_none());
    }
}
