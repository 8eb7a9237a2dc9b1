use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use miop::Error;
use miop_cli::config::{parse_deletions, parse_params, parse_suites};
use miop_cli::{exit, run, tabulate, write_report, write_table, Format, RunConfig};

#[derive(Parser)]
#[command(name = "miop", version)]
#[command(about = "Exact construction and verification of multi-indexed Meixner and little q-Jacobi/Laguerre polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a report; exit 1 if any check fails
    Verify(ConfigArgs),
    /// Tabulate Xi_D, P_(D,n), energies, norms and weights
    Tabulate(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON run configuration; the flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// M, lqJ or lqL
    #[arg(long)]
    family: Option<String>,
    /// Exact parameters, e.g. "beta=1,c=1/2" or "a=1/32,b=1/3,q=1/2"
    #[arg(long)]
    params: Option<String>,
    /// Deleted virtual-state labels, e.g. "1,3"; "none" for the undeformed system
    #[arg(long)]
    deletions: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    xmax: Option<i64>,
    /// Relative tolerance of the orthogonality sums, e.g. "1e-20" or "1/1000"
    #[arg(long)]
    rtol: Option<String>,
    /// Comma-separated suites (base, virtual, casoratian, chain, multi, limits) or "all"
    #[arg(long)]
    suite: Option<String>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("bad config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(f) = &self.family {
            let family = f.parse()?;
            if family != cfg.family && self.params.is_none() {
                return Err(Error::Parse(format!("--family {f} needs --params")));
            }
            cfg.family = family;
        }
        if let Some(p) = &self.params {
            cfg.params = parse_params(p)?;
        }
        if let Some(d) = &self.deletions {
            cfg.deletions = parse_deletions(d)?;
        }
        if let Some(n) = self.nmax {
            cfg.n_max = n;
        }
        if let Some(x) = self.xmax {
            cfg.x_max = x;
        }
        if let Some(t) = &self.rtol {
            cfg.rel_tol = t.clone();
        }
        if let Some(s) = &self.suite {
            cfg.suites = parse_suites(s)?;
        }
        if let Some(f) = &self.format {
            cfg.format = f.parse::<Format>()?;
        }
        Ok(cfg)
    }

    fn output(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, verify) = match &cli.command {
        Command::Verify(a) => (a, true),
        Command::Tabulate(a) => (a, false),
    };
    let setup = args.resolve().and_then(|cfg| cfg.setup().map(|s| (cfg, s)));
    let (cfg, setup) = match setup {
        Ok(v) => v,
        Err(e) => {
            eprintln!("miop: {e}");
            return ExitCode::from(exit::INVALID as u8);
        }
    };
    let mut out = match args.output() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("miop: cannot open output: {e}");
            return ExitCode::from(exit::INVALID as u8);
        }
    };
    let code = if verify {
        let report = run(&cfg, &setup);
        let code = if report.passed() { exit::PASS } else { exit::FAIL };
        write_report(&report, cfg.format, &mut out).map(|_| code)
    } else {
        match tabulate(&cfg, &setup) {
            Ok(t) => write_table(&t, cfg.format, &mut out).map(|_| exit::PASS),
            Err(e) => {
                eprintln!("miop: {e}");
                return ExitCode::from(exit::FAIL as u8);
            }
        }
    };
    match code.and_then(|c| out.flush().map(|_| c)) {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("miop: write failed: {e}");
            ExitCode::from(exit::FAIL as u8)
        }
    }
}
