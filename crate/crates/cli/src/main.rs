use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linksig_core::catalog::{self, Expected};
use linksig_core::invariants::{hosokawa, hosokawa_normalized, slope};
use linksig_core::sampler::{self, SampleRecord};
use linksig_core::strata::{PresentationMatrix, Stratification, StratumFlag};
use linksig_core::{ColoredLinkData, Error, LaurentPoly, SlopeData, TorusPoint};

const EXIT_INPUT: u8 = 2;
const EXIT_UNCERTAIN: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(name = "linksig", version, about = "Signatures and nullities of colored links on the torus")]
struct Cli {
    /// Threshold for eigenvalue and pivot decisions, relative to the matrix scale.
    #[arg(long, global = true, default_value_t = linksig_core::DEFAULT_TAU)]
    tau: f64,
    /// Threshold for deciding that a polynomial vanishes at a point.
    #[arg(long, global = true, default_value_t = linksig_core::DEFAULT_TAU_POLY)]
    tau_poly: f64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Ppm,
}

#[derive(Subcommand)]
enum Command {
    /// Sample signature and nullity on the grid of N-th roots of unity.
    Sigmap {
        link: PathBuf,
        #[arg(long)]
        grid: i64,
        /// Include points with a coordinate equal to 1.
        #[arg(long)]
        faces: bool,
        #[arg(long)]
        slope: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slope of the distinguished component at a point (turns as fractions).
    Slope {
        slope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Hosokawa polynomial, up to units or normalized from the Conway potential.
    Hosokawa {
        link: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        conway: Option<String>,
        #[arg(long)]
        normalized: bool,
    },
    /// Elementary-ideal strata of a presentation matrix.
    Ideals {
        presentation: PathBuf,
        #[arg(long, conflicts_with = "classify")]
        omega: Option<String>,
        #[arg(long, requires = "grid")]
        classify: bool,
        #[arg(long)]
        grid: Option<i64>,
    },
    /// Look for a signature obstruction to concordance with the mirror image.
    Report {
        link: PathBuf,
        #[arg(long)]
        slope: Option<PathBuf>,
        #[arg(long)]
        prime: i64,
        #[arg(long)]
        depth: u32,
    },
    /// Write the mirror image of a link file.
    Mirror {
        link: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Show {
        key: String,
        /// Write the entry's link, slope and presentation files here.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHermitian { .. } | Error::NotReal { .. } | Error::AmbiguousSlope => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            EXIT_NUMERICAL
        }
    };
    ExitCode::from(code)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("LINKSIG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("LINKSIG_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Numerical(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    for (name, v) in [("tau", cli.tau), ("tau-poly", cli.tau_poly)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Failure::Input(format!("--{name} must be positive")));
        }
    }
    configure_threads()?;
    let (tau, tau_poly) = (cli.tau, cli.tau_poly);
    match cli.cmd {
        Command::Sigmap { link, grid, faces, slope, format, out } => {
            let link = read_link(&link)?;
            let slope = slope.as_deref().map(read_slope).transpose()?;
            let points: Vec<TorusPoint> = sampler::grid(grid, link.mu(), faces)?.collect();
            let records = sampler::sample_map(&link, &points, slope.as_ref(), tau);
            let text = match format {
                Format::Csv => sampler::records_to_csv(&records, link.mu()),
                Format::Json => sampler::records_to_json(&records) + "\n",
                Format::Ppm => sampler::heatmap_ppm(&records, grid, faces)?,
            };
            emit(out.as_deref(), &text)?;
            Ok(summarize(&records))
        }
        Command::Slope { slope: path, omega } => {
            let data = read_slope(&path)?;
            let w: TorusPoint = omega.parse()?;
            println!("{}", format_value(slope(&data, &w, tau)?));
            Ok(0)
        }
        Command::Hosokawa { link, delta, conway, normalized } => {
            let mut link = read_link(&link)?;
            if let Some(d) = delta {
                if link.alexander.is_some() {
                    eprintln!("warning: --delta overrides the Alexander polynomial in the link file");
                }
                link.alexander = Some(LaurentPoly::parse(&d, link.mu())?);
            }
            if let Some(c) = conway {
                if link.conway.is_some() {
                    eprintln!("warning: --conway overrides the Conway potential in the link file");
                }
                let c = LaurentPoly::parse_half_step(&c, link.mu())?;
                link = link.with_conway(c)?;
            }
            let result = if normalized {
                let c = link
                    .conway
                    .as_ref()
                    .ok_or_else(|| Failure::Input("no Conway potential: pass --conway".into()))?;
                hosokawa_normalized(c, &link)?
            } else {
                let d = link
                    .alexander
                    .as_ref()
                    .ok_or_else(|| Failure::Input("no Alexander polynomial: pass --delta".into()))?;
                hosokawa(d, &link)?
            };
            println!("{result}");
            Ok(0)
        }
        Command::Ideals { presentation, omega, classify, grid } => {
            let p = PresentationMatrix::from_json(&read(&presentation)?)?;
            let strata = Stratification::new(&p);
            if let Some(o) = omega {
                let w: TorusPoint = o.parse()?;
                let r = strata.classify(&w, tau_poly)?;
                println!("point: {}", r.point);
                println!("stratum index: {}", r.index);
                match r.predicted_nullity {
                    Some(n) => println!("predicted nullity: {n}"),
                    None => println!("predicted nullity: suppressed"),
                }
                for f in &r.flags {
                    println!("flag: {}", flag_name(*f));
                }
                return Ok(if r.flags.contains(&StratumFlag::Uncertain) { EXIT_UNCERTAIN } else { 0 });
            }
            if !classify {
                return Err(Failure::Input("pass --omega or --classify --grid N".into()));
            }
            let n = grid.expect("clap enforces --grid");
            let mut out = String::new();
            let header: Vec<String> = (1..=p.mu()).map(|j| format!("q{j}")).collect();
            out.push_str(&format!("{},index,predicted,flags\n", header.join(",")));
            let mut uncertain = false;
            for w in sampler::grid(n, p.mu(), true)?.filter(|w| !w.is_base_point()) {
                let r = strata.classify(&w, tau_poly)?;
                uncertain |= r.flags.contains(&StratumFlag::Uncertain);
                let q: Vec<String> = w.turns().iter().map(|t| t.to_string()).collect();
                let flags: Vec<&str> = r.flags.iter().map(|f| flag_name(*f)).collect();
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    q.join(","),
                    r.index,
                    r.predicted_nullity.map_or("NA".to_string(), |n| n.to_string()),
                    flags.join(";")
                ));
            }
            emit(None, &out)?;
            Ok(if uncertain { EXIT_UNCERTAIN } else { 0 })
        }
        Command::Report { link, slope, prime, depth } => {
            let link = read_link(&link)?;
            let slope = slope.as_deref().map(read_slope).transpose()?;
            let r = sampler::concordance_report(&link, slope.as_ref(), prime, depth, tau)?;
            println!("link: {}", r.link);
            println!("roots of unity of order {prime}^{depth}");
            println!("evaluated: {}, skipped: {}, uncertain: {}", r.evaluated, r.skipped, r.uncertain);
            println!(
                "verdict: {}",
                match r.verdict {
                    sampler::Verdict::Obstructed => "OBSTRUCTED",
                    sampler::Verdict::Inconclusive => "INCONCLUSIVE",
                }
            );
            for w in &r.witnesses {
                let mirror = match w.mirror_consistent {
                    Some(true) => ", mirror checked",
                    Some(false) => ", mirror MISMATCH",
                    None => "",
                };
                println!("witness {} sigma={}{mirror}", w.point, w.sigma);
            }
            if r.witnesses.is_empty() {
                println!("no nonzero certified signature found; the signature gives no obstruction at these points");
            } else {
                println!("the signature is a concordance invariant at these points and changes sign under mirroring, so the link is not concordant to its mirror image");
            }
            Ok(if r.uncertain > 0 { EXIT_UNCERTAIN } else { 0 })
        }
        Command::Mirror { link, out } => {
            let link = read_link(&link)?;
            if !link.has_seifert() {
                return Err(Failure::Input("mirror needs Seifert data".into()));
            }
            emit(Some(&out), &(link.mirror().to_json() + "\n"))?;
            Ok(0)
        }
        Command::Catalog { cmd } => match cmd {
            CatalogCommand::List => {
                for k in catalog::list() {
                    println!("{k}");
                }
                Ok(0)
            }
            CatalogCommand::Show { key, export } => {
                let e = catalog::get(&key)?;
                show_entry(&e);
                if let Some(dir) = export {
                    export_entry(&e, &dir)?;
                }
                Ok(0)
            }
        },
    }
}

fn flag_name(f: StratumFlag) -> &'static str {
    match f {
        StratumFlag::MoreThanTwoOnes => "more-than-two-ones",
        StratumFlag::Uncertain => "uncertain",
    }
}

fn summarize(records: &[SampleRecord]) -> u8 {
    let uncertain = records.iter().filter(|r| r.is_uncertain()).count();
    let skipped = records.iter().filter(|r| !r.is_evaluated()).count();
    if skipped > 0 {
        eprintln!("note: {skipped} point(s) skipped");
    }
    if uncertain > 0 {
        eprintln!("warning: {uncertain} uncertain sample(s)");
        EXIT_UNCERTAIN
    } else {
        0
    }
}

/// Rounds away last-digit noise: `3.9999999999999996` prints as `4`.
fn format_value(v: linksig_core::invariants::SlopeValue) -> String {
    match v.finite() {
        None => v.to_string(),
        Some(x) => {
            let s = format!("{x:.10}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            if s == "-0" { "0".to_string() } else { s.to_string() }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_link(path: &Path) -> Result<ColoredLinkData, Failure> {
    Ok(ColoredLinkData::from_json(&read(path)?)?)
}

fn read_slope(path: &Path) -> Result<SlopeData, Failure> {
    Ok(SlopeData::from_json(&read(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn show_entry(e: &catalog::CatalogEntry) {
    println!("key: {}", e.key);
    println!("kind: {:?}", e.kind);
    if let Some(l) = &e.link {
        println!("colors: {}", l.mu());
        println!("components: {}", l.components().len());
        match l.g() {
            Some(g) => println!("seifert rank: {g}"),
            None => println!("seifert rank: none"),
        }
        if let Some(a) = &l.alexander {
            println!("alexander: {a}");
        }
        if let Some(c) = &l.conway {
            println!("conway: {c}");
        }
    }
    if let Some(s) = &e.slope {
        println!("slope data: distinguished color {}, k = {:?}", s.distinguished_color, s.k_class);
    }
    if let Some(p) = &e.presentation {
        println!("presentation: {} x {}", p.n_relations(), p.m_generators());
    }
    for x in &e.expected {
        let v = match &x.value {
            Expected::Polynomial(p) => format!("{p} (up to units)"),
            Expected::HalfStep(p) => p.to_string(),
            Expected::Signature(law) => format!("{law:?}"),
            Expected::Nullity(n) => n.to_string(),
            Expected::BrunnianSlope(n) => format!("2*{n}*Re((1 - w1)(1 - conj w2))"),
            Expected::StratumIndex(i) => i.to_string(),
            Expected::Nu(v) => format!("{v:?}"),
        };
        println!("expected {}: {v} [{:?}]", x.name, x.provenance);
    }
}

fn export_entry(e: &catalog::CatalogEntry, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|err| Failure::Input(format!("{}: {err}", dir.display())))?;
    let stem = e.file_stem();
    let mut written = Vec::new();
    if let Some(l) = &e.link {
        let p = dir.join(format!("{stem}.link.json"));
        emit(Some(&p), &(l.to_json() + "\n"))?;
        written.push(p);
    }
    if let Some(s) = &e.slope {
        let p = dir.join(format!("{stem}.slope.json"));
        emit(Some(&p), &(s.to_json() + "\n"))?;
        written.push(p);
    }
    if let Some(pm) = &e.presentation {
        let p = dir.join(format!("{stem}.presentation.json"));
        emit(Some(&p), &(pm.to_json() + "\n"))?;
        written.push(p);
    }
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
