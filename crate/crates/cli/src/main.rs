use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use foliasep_core::real::SignRule;
use foliasep_core::report::{analyze, parse_input, AnalyzeOptions, Command, Report, Status};

/// Reduction of singularities, separatrices, polar invariants and real
/// separatrix certificates for a plane vector field `P d/dx + Q d/dy`.
#[derive(Parser, Debug)]
#[command(name = "foliasep", version)]
struct Cli {
    /// invariants, reduce, separatrices, balanced, polar-check, certify or all
    command: Command,
    /// Input file with `P = <expr>; Q = <expr>;` (standard input if absent)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed of the polar sample order and the random test branches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truncation order of the separatrices (default 2 mu_0 + 4)
    #[arg(long)]
    trunc: Option<usize>,
    /// Write the dual graph of the reduction in DOT syntax
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    json: Option<PathBuf>,
    /// Leave odd weak indices untyped instead of applying the saddle/node sign rule
    #[arg(long)]
    no_sign_rule: bool,
    /// Polar direction a:b to try first
    #[arg(long, value_parser = parse_hint)]
    polar_hint: Option<(i64, i64)>,
}

fn parse_hint(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a == 0 && b == 0 {
        return Err("a and b cannot both vanish".into());
    }
    Ok((a, b))
}

fn read_input(path: &Option<PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn summary(r: &Report) -> String {
    let mut out = vec![format!("{}: {:?} (exit {})", r.command, r.status, r.exit_code)];
    if let Some(i) = &r.invariants {
        out.push(format!(
            "nu0 = {}, mu0 = {} (oracle {}), tau0 = {}",
            i.nu0.value, i.mu0.value, i.mu0_oracle.value, i.tau0_complex.value
        ));
    }
    if let Some(t) = &r.tree {
        out.push(format!("{} blow-ups, {} components", t.blowups, t.components.len()));
    }
    if let Some(c) = &r.certificate {
        out.push(format!("certificate: {:?} via {:?}", c.verdict, c.theorem));
    }
    out.extend(r.failed_checks.iter().map(|f| format!("failed: {f}")));
    out.extend(r.errors.iter().map(|e| format!("error {}: {}", e.code, e.message)));
    out.join("\n")
}

fn run(cli: Cli) -> Result<i32, String> {
    let text = read_input(&cli.input).map_err(|e| format!("cannot read input: {e}"))?;
    let spec = parse_input(&text).map_err(|e| format!("{}: {e}", e.code()))?;
    let opts = AnalyzeOptions {
        seed: cli.seed,
        trunc: cli.trunc,
        sign_rule: SignRule(!cli.no_sign_rule),
        polar_hint: cli.polar_hint,
        ..AnalyzeOptions::default()
    };
    let report = analyze(&spec, cli.command, &opts);
    if let (Some(path), Some(dot)) = (&cli.dot, &report.dot) {
        fs::write(path, dot).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let json = report.to_json();
    match &cli.json {
        Some(path) => {
            fs::write(path, json + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("{}", summary(&report));
        }
        None => {
            println!("{json}");
            eprintln!("{}", summary(&report));
        }
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("foliasep: {msg}");
            ExitCode::from(Status::InputError.exit_code() as u8)
        }
    }
}
