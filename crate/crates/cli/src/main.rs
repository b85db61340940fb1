use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polya_pila::arcs::{decompose_arcs, Location};
use polya_pila::differential::{wronskians, TangentOperator};
use polya_pila::interpolation::{chebyshev_certify, cover_arc_points, Covering};
use polya_pila::pipeline::{
    dgc_csv, dgc_demo, family_csv, report_csv, run_family, run_pipeline, Family, Mode, PipelineConfig,
};
use polya_pila::points::{enumerate_integral_points, enumerate_rational_points, parse_trivariate, RationalPoint};
use polya_pila::solve::Rect;
use polya_pila::{mu, BiPoly, Error, PlaneCurve, Result};

#[derive(Parser)]
#[command(name = "polya-pila", version, about = "Rational points of bounded height on plane curves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV output where the command has a tabular form.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for generated curve families.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Override the interpolation degree k.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Override the derivative order r.
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Ignore guardrails.
    #[arg(long, global = true)]
    force: bool,
    /// JSON pipeline configuration; command line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ExactCount,
    CertifyOnly,
    BruteOnly,
}

#[derive(Subcommand)]
enum Command {
    /// Count the rational points of height at most H.
    Count {
        #[arg(long)]
        curve: String,
        #[arg(long = "H")]
        h: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// List the rational (or integral) points of height at most H.
    Points {
        #[arg(long)]
        curve: String,
        #[arg(long = "H")]
        h: u64,
        #[arg(long)]
        integral: bool,
        /// Only points in the closed unit box.
        #[arg(long = "unit-box")]
        unit_box: bool,
    },
    /// The Wronskians W_1..W_mu(k) and their degree bounds.
    Wronskians {
        #[arg(long)]
        curve: String,
    },
    /// Arc decomposition of the curve inside the unit box.
    Arcs {
        #[arg(long)]
        curve: String,
    },
    /// Cover the unit-box points of height at most H on each arc by degree-k curves.
    Cover {
        #[arg(long)]
        curve: String,
        #[arg(long = "H")]
        h: u64,
    },
    /// Chebyshev certificates for a polynomial q of degree at most k.
    Certify {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        q: String,
    },
    /// Run the pipeline over a family of curves and a list of heights.
    Family {
        /// fermat:3-6, random-dense:5[:count], circle-like or file:PATH
        #[arg(long)]
        family: String,
        /// Comma separated heights.
        #[arg(long = "H", value_delimiter = ',')]
        h: Vec<u64>,
        /// Write CSV to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integral points on a surface in three variables, directly and by slices.
    DgcDemo {
        /// Polynomial in x, y, z.
        #[arg(long)]
        f: String,
        /// Comma separated bounds on |x|, |y|, |z|.
        #[arg(long = "H", value_delimiter = ',')]
        h: Vec<u64>,
    },
}

/// Write to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn print_json<T: Serialize>(v: &T) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn config(g: &Global) -> Result<PipelineConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            PipelineConfig::from_json(&text)?
        }
        None => PipelineConfig::default(),
    };
    if g.k.is_some() {
        cfg.k_override = g.k;
    }
    if g.r.is_some() {
        cfg.r_override = g.r;
    }
    cfg.force |= g.force;
    Ok(cfg)
}

fn need_k(g: &Global) -> Result<usize> {
    g.k.ok_or_else(|| Error::Precondition("this command needs --k".into()))
}

#[derive(Serialize)]
struct ArcCovering {
    arc: usize,
    points: usize,
    covering: Covering,
}

fn cover(curve: &PlaneCurve, h: u64, k: usize, r: usize) -> Result<Vec<ArcCovering>> {
    let dec = decompose_arcs(curve, k, r)?;
    let mut per_arc: Vec<Vec<RationalPoint>> = vec![Vec::new(); dec.arcs.len()];
    for p in enumerate_rational_points(curve, h, Some(&Rect::unit())) {
        if let Some(Location::OnArc(a)) = dec.locate_rational(&p.x, &p.y)? {
            per_arc[a].push(p);
        }
    }
    per_arc
        .into_iter()
        .enumerate()
        .filter(|(_, pts)| !pts.is_empty())
        .map(|(arc, mut pts)| {
            if dec.arcs[arc].direction == polya_pila::arcs::Direction::YMonotone {
                pts.sort_by(|a, b| (&a.y, &a.x).cmp(&(&b.y, &b.x)));
            }
            Ok(ArcCovering { arc, points: pts.len(), covering: cover_arc_points(&pts, k)? })
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Count { curve, h, mode } => {
            let mut cfg = config(g)?;
            if let Some(h) = h {
                cfg.h = h;
            }
            if let Some(m) = mode {
                cfg.mode = match m {
                    ModeArg::ExactCount => Mode::ExactCount,
                    ModeArg::CertifyOnly => Mode::CertifyOnly,
                    ModeArg::BruteOnly => Mode::BruteOnly,
                };
            }
            let report = run_pipeline(&PlaneCurve::parse(&curve)?, &cfg)?;
            if g.csv {
                emit(&report_csv(&report));
            } else {
                print_json(&report);
            }
        }
        Command::Points { curve, h, integral, unit_box } => {
            if h == 0 {
                return Err(Error::Precondition("H must be positive".into()));
            }
            let c = PlaneCurve::parse(&curve)?;
            let mut pts = if integral {
                enumerate_integral_points(&c, h)
            } else {
                enumerate_rational_points(&c, h, unit_box.then(Rect::unit).as_ref())
            };
            if integral && unit_box {
                pts.retain(|p| Rect::unit().contains_rational(&p.x, &p.y));
            }
            if g.csv {
                let mut text = String::from("#polya-pila v1\nx,y,height\n");
                for p in &pts {
                    text += &format!("{},{},{}\n", p.x, p.y, p.height);
                }
                emit(&text);
            } else {
                print_json(&serde_json::json!({"curve": c.defining().to_string(), "H": h, "count": pts.len(), "points": pts}));
            }
        }
        Command::Wronskians { curve } => {
            let c = PlaneCurve::parse(&curve)?;
            let w = wronskians(&TangentOperator::new(&c), need_k(g)?)?;
            print_json(&serde_json::json!({"curve": c.defining().to_string(), "k": w.k, "entries": w.entries}));
        }
        Command::Arcs { curve } => {
            let c = PlaneCurve::parse(&curve)?;
            let k = need_k(g)?;
            let dec = decompose_arcs(&c, k, g.r.unwrap_or_else(|| mu(k)))?;
            print_json(&dec);
        }
        Command::Cover { curve, h } => {
            let c = PlaneCurve::parse(&curve)?;
            let k = need_k(g)?;
            let covers = cover(&c, h, k, g.r.unwrap_or_else(|| mu(k)))?;
            let n: usize = covers.iter().map(|c| c.covering.n).sum();
            print_json(&serde_json::json!({"curve": c.defining().to_string(), "H": h, "k": k, "N": n, "arcs": covers}));
        }
        Command::Certify { curve, q } => {
            let c = PlaneCurve::parse(&curve)?;
            let k = need_k(g)?;
            let q = BiPoly::parse(&q)?;
            let dec = decompose_arcs(&c, k, g.r.unwrap_or_else(|| mu(k)))?;
            print_json(&chebyshev_certify(&dec, &q)?);
        }
        Command::Family { family, h, output } => {
            let cfg = config(g)?;
            let curves = Family::parse(&family, g.seed)?.curves();
            let rows = run_family(&curves, &h, &cfg);
            let text = if g.csv || output.is_some() {
                family_csv(&rows)
            } else {
                serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
                }
                None => emit(&text),
            }
        }
        Command::DgcDemo { f, h } => {
            let rows = dgc_demo(&parse_trivariate(&f)?, &h)?;
            if g.csv {
                emit(&dgc_csv(&rows));
            } else {
                print_json(&rows);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

