//! mcflab: scenario runner for the mean curvature flow laboratory.
//!
//! Commands:
//!   mcflab run   <scenario-file> [--out DIR] [--seed N] [--quiet]
//!   mcflab verify <dir-of-scenarios> [--out DIR] [--quiet]
//!   mcflab sweep <scenario-file> --axis KEY --values a,b,c [--out DIR]
//!   mcflab audit <scenario-file> [--out DIR] [--quiet]

mod emit;
mod runner;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

struct Args {
    command: String,
    target: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    axis: Option<String>,
    values: Vec<String>,
    quiet: bool,
}

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or("usage: mcflab <run|verify|sweep|audit> <path> [flags]")?;
    let target = PathBuf::from(argv.next().ok_or("missing scenario path")?);
    let mut out = None;
    let mut seed = None;
    let mut axis = None;
    let mut values = Vec::new();
    let mut quiet = false;
    while let Some(flag) = argv.next() {
        match flag.as_str() {
            "--out" => out = Some(PathBuf::from(argv.next().ok_or("--out needs a value")?)),
            "--seed" => {
                seed = Some(
                    argv.next()
                        .ok_or("--seed needs a value")?
                        .parse::<u64>()
                        .map_err(|_| "--seed must be an unsigned integer")?,
                )
            }
            "--axis" => axis = Some(argv.next().ok_or("--axis needs a value")?),
            "--values" => {
                values = argv
                    .next()
                    .ok_or("--values needs a list")?
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .collect()
            }
            "--quiet" => quiet = true,
            other => return Err(format!("unknown flag `{other}`")),
        }
    }
    Ok(Args { command, target, out, seed, axis, values, quiet })
}

fn load_scenario(path: &PathBuf, seed: Option<u64>) -> Result<scenario::Scenario, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let mut s = scenario::parse_scenario(&text).map_err(|e| e.to_string())?;
    if let Some(seed) = seed {
        s.keys.insert("seed".into(), format!("{seed}"));
    }
    Ok(s)
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let started = std::time::Instant::now();
    let code = match run_command(&args) {
        Ok(true) => 0u8,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    if !args.quiet {
        println!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    }
    ExitCode::from(code)
}

fn run_command(args: &Args) -> Result<bool, String> {
    match args.command.as_str() {
        "run" | "audit" => {
            let s = load_scenario(&args.target, args.seed)?;
            let out_dir = args
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(s.get("output.dir").unwrap_or("out")));
            if args.command == "audit" && s.get("audit.kind").is_none() {
                return Err("audit command needs an audit.* block in the scenario".into());
            }
            let outcome = runner::execute(&s, &out_dir, args.quiet)?;
            Ok(outcome.passed)
        }
        "verify" => {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(&args.target)
                .map_err(|e| format!("reading {}: {e}", args.target.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "scn").unwrap_or(false))
                .collect();
            entries.sort();
            if entries.is_empty() {
                return Err("no .scn scenarios in the directory".into());
            }
            let out_root = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let mut all = true;
            let mut table = Vec::new();
            for path in &entries {
                let name = path.file_stem().unwrap().to_string_lossy().to_string();
                let s = load_scenario(path, args.seed)?;
                let out_dir = out_root.join(&name);
                let outcome = runner::execute(&s, &out_dir, true)?;
                for c in &outcome.checks {
                    table.push((name.clone(), c.clone()));
                }
                all &= outcome.passed;
            }
            if !args.quiet {
                println!("{:<28} {:<24} {:>6}  value", "scenario", "check", "status");
                for (name, c) in &table {
                    println!(
                        "{:<28} {:<24} {:>6}  {} (expected {})",
                        name,
                        c.name,
                        if c.passed { "pass" } else { "FAIL" },
                        emit::fmt_f64(c.value),
                        c.expected
                    );
                }
                println!("verify: {}", if all { "all checks passed" } else { "FAILURES present" });
            }
            Ok(all)
        }
        "sweep" => {
            let s = load_scenario(&args.target, args.seed)?;
            let axis = args.axis.clone().ok_or("sweep needs --axis")?;
            if args.values.is_empty() {
                return Err("sweep needs --values".into());
            }
            let out_dir = args
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(s.get("output.dir").unwrap_or("out")));
            let (_rows, order, monotone) =
                runner::sweep(&s, &axis, &args.values, &out_dir, args.quiet)?;
            let min_order = s.f64_key("expect.order-min")?.unwrap_or(0.9);
            Ok(monotone && order >= min_order)
        }
        other => Err(format!("unknown command `{other}`")),
    }
}
