use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use dimer_resonance::enumerate::enumerate_covers;
use dimer_resonance::polylog::{li, BranchSide, PolylogOrder};
use dimer_resonance::scan::{
    scan_alpha, scan_aspect, scan_melt, write_csv, write_jsonl, AlphaScan, AspectScan,
    BranchChoice, MeltScan, ScanRecord,
};
use dimer_resonance::verify::{self, Level};

#[derive(Parser)]
#[command(name = "dimer-resonance", version, about = "Resonant spikes of the honeycomb dimer model on a torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the aspect ratio n/m at fixed area.
    ScanAspect(AspectArgs),
    /// Theory curves against the resonance offset alpha at fixed log A^q.
    ScanAlpha(AlphaArgs),
    /// Sweep log A^q through 0 at alpha = 0.
    ScanMelt(MeltArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
    #[command(hide = true)]
    PolylogEval(PolylogArgs),
    #[command(hide = true)]
    DumpCovers(CoverArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct AspectArgs {
    /// Edge weights `a,b,c`.
    #[arg(long, value_parser = parse_weights, default_value = "1,0.5,0.5")]
    weights: (f64, f64, f64),
    #[arg(long, default_value_t = 1_000_000)]
    area: u64,
    #[arg(long, default_value_t = 0.8)]
    ratio_min: f64,
    #[arg(long, default_value_t = 1.25)]
    ratio_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Largest denominator considered when matching the aspect to a rational.
    #[arg(long, default_value_t = 20)]
    qmax: u64,
    /// Theory values are emitted only for |alpha| below this.
    #[arg(long, default_value_t = 10.0)]
    alpha_max: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Plus,
    Minus,
    Max,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long, allow_hyphen_values = true)]
    log_aq: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha_min: f64,
    #[arg(long, default_value_t = 6.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 121)]
    steps: usize,
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    q: u64,
    /// Weight `a`; `b` and `c` are solved from alpha and log A^q.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, value_enum, default_value_t = Branch::Max)]
    branch: Branch,
    /// Add exact values at the weights realising each point.
    #[arg(long)]
    exact: bool,
    /// Leave out the nonanalyticity and crossover points.
    #[arg(long)]
    no_markers: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MeltArgs {
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    q: u64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    log_aq_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    log_aq_max: f64,
    #[arg(long, default_value_t = 81)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value_t = VerifyLevel::Quick)]
    level: VerifyLevel,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Above,
    Below,
}

#[derive(Args)]
struct PolylogArgs {
    #[arg(long, allow_hyphen_values = true)]
    order: f64,
    #[arg(long, allow_hyphen_values = true)]
    re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    im: f64,
    #[arg(long, value_enum, default_value_t = Side::Below)]
    side: Side,
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

fn parse_weights(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected a,b,c, got {} values", parts.len())),
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<dimer_resonance::Error> for Failure {
    fn from(e: dimer_resonance::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(output: &Output, records: &[ScanRecord]) -> Result<(), Failure> {
    let sink: Box<dyn Write> = if output.out == "-" {
        Box::new(io::stdout().lock())
    } else {
        Box::new(File::create(PathBuf::from(&output.out))?)
    };
    let mut sink = BufWriter::new(sink);
    match output.format {
        Format::Csv => write_csv(&mut sink, records)?,
        Format::Jsonl => write_jsonl(&mut sink, records)?,
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ScanAspect(args) => {
            let (a, b, c) = args.weights;
            let cfg = AspectScan {
                a,
                b,
                c,
                area: args.area,
                ratio_min: args.ratio_min,
                ratio_max: args.ratio_max,
                steps: args.steps,
                qmax: args.qmax,
                alpha_max: args.alpha_max,
            };
            if !(cfg.ratio_min > 0.0 && cfg.ratio_min <= cfg.ratio_max) {
                return Err(Failure::Usage("need 0 < ratio-min <= ratio-max".into()));
            }
            emit(&args.output, &scan_aspect(&cfg)?)
        }
        Command::ScanAlpha(args) => {
            let cfg = AlphaScan {
                a: args.a,
                m: args.m,
                n: args.n,
                p: args.p,
                q: args.q,
                log_aq: args.log_aq,
                alpha_min: args.alpha_min,
                alpha_max: args.alpha_max,
                steps: args.steps,
                branch: match args.branch {
                    Branch::Plus => BranchChoice::Plus,
                    Branch::Minus => BranchChoice::Minus,
                    Branch::Max => BranchChoice::Max,
                },
                exact: args.exact,
                markers: !args.no_markers,
            };
            emit(&args.output, &scan_alpha(&cfg)?)
        }
        Command::ScanMelt(args) => {
            let cfg = MeltScan {
                a: args.a,
                m: args.m,
                n: args.n,
                p: args.p,
                q: args.q,
                log_aq_min: args.log_aq_min,
                log_aq_max: args.log_aq_max,
                steps: args.steps,
            };
            emit(&args.output, &scan_melt(&cfg)?)
        }
        Command::Verify(args) => {
            let report = verify::run(match args.level {
                VerifyLevel::Quick => Level::Quick,
                VerifyLevel::Full => Level::Full,
            });
            let mut out = io::stdout().lock();
            match args.format {
                ReportFormat::Json => {
                    let text = serde_json::to_string_pretty(&report)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    writeln!(out, "{text}")?;
                }
                ReportFormat::Text => {
                    for c in &report.checks {
                        writeln!(
                            out,
                            "{:>2} {} {}: {} (target {})",
                            c.id,
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.measured,
                            c.target
                        )?;
                    }
                }
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::PolylogEval(args) => {
            let order = PolylogOrder::from_value(args.order)?;
            let side = match args.side {
                Side::Above => BranchSide::AboveCut,
                Side::Below => BranchSide::BelowCut,
            };
            let v = li(order, Complex64::new(args.re, args.im), side)?;
            println!("{:.16e} {:.16e}", v.re, v.im);
            Ok(())
        }
        Command::DumpCovers(args) => {
            let mut out = BufWriter::new(io::stdout().lock());
            for s in enumerate_covers(args.m, args.n)? {
                writeln!(out, "{s}")?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("RESONANCE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Usage(format!("RESONANCE_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
