use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use supercalc::checks::{criterion_grid, full_grid, run_check, run_grid, CheckParams, IDENTITY_IDS};
use supercalc::error::{Error, Result};
use supercalc::report::ReportFile;

#[derive(Parser)]
#[command(name = "supercalc", version, about = "Numerical verification of supermatrix integral identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one identity check.
    Verify {
        /// Identity id, e.g. duality, theorem1, theorem4.
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a grid of checks.
    Report {
        /// Every acceptance check.
        #[arg(long)]
        all: bool,
        /// Only the checks of one acceptance criterion (1-14).
        #[arg(long)]
        criterion: Option<u8>,
        #[command(flatten)]
        opts: Opts,
    },
    /// List identity ids.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    beta: Option<u8>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    e: Option<usize>,
    #[arg(long = "m-max")]
    m_max: Option<u32>,
    /// Superfunction: one, str, str2 or exp.
    #[arg(long = "F")]
    f: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of key=value lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("bad value '{v}' for {key}")))
}

fn apply(p: &mut CheckParams, key: &str, v: &str) -> Result<()> {
    match key {
        "beta" => p.beta = parse(key, v)?,
        "a" => p.a = parse(key, v)?,
        "b" => p.b = parse(key, v)?,
        "c" => p.c = parse(key, v)?,
        "d" => p.d = parse(key, v)?,
        "e" => p.e = parse(key, v)?,
        "m_max" | "m-max" => p.m_max = parse(key, v)?,
        "F" | "f" => p.f = v.to_string(),
        "eps" => p.eps = parse(key, v)?,
        "psi" => p.psi = parse(key, v)?,
        "nodes" => p.nodes = parse(key, v)?,
        "samples" => p.samples = parse(key, v)?,
        "seed" => p.seed = parse(key, v)?,
        "tol" => p.tol = Some(parse(key, v)?),
        _ => return Err(Error::Config(format!("unknown config key '{key}'"))),
    }
    Ok(())
}

impl Opts {
    fn params(&self) -> Result<CheckParams> {
        let mut p = CheckParams::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
                apply(&mut p, k.trim(), v.trim())?;
            }
        }
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field.clone() { p.$field = v; })* };
        }
        set!(beta, a, b, c, d, e, m_max, f, eps, psi, nodes, samples, seed);
        if self.tol.is_some() {
            p.tol = self.tol;
        }
        Ok(p)
    }

    fn emit(&self, file: &ReportFile) -> Result<()> {
        let text = match self.format {
            Format::Json => file.to_json() + "\n",
            Format::Csv => file.to_csv(),
        };
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            for id in IDENTITY_IDS {
                println!("{id}");
            }
            Ok(true)
        }
        Command::Verify { id, opts } => {
            let p = opts.params()?;
            let reports = run_check(&id, &p)?;
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let file = ReportFile::new(p.seed, reports);
            opts.emit(&file)?;
            Ok(file.all_passed())
        }
        Command::Report { all, criterion, opts } => {
            let p = opts.params()?;
            let grid = match (all, criterion) {
                (true, _) => full_grid(p.seed),
                (false, Some(k)) if (1..=14).contains(&k) => criterion_grid(k, p.seed),
                (false, Some(k)) => return Err(Error::Config(format!("criterion {k} is outside 1-14"))),
                (false, None) => Vec::new(),
            };
            if grid.is_empty() {
                return Err(Error::Config("no checks selected".into()));
            }
            let file = ReportFile::new(p.seed, run_grid(&grid)?);
            eprintln!("{} passed, {} failed", file.summary.pass, file.summary.fail);
            opts.emit(&file)?;
            Ok(file.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Config(_)) {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(2)
        }
    }
}
