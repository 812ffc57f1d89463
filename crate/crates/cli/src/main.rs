use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use divide_forge::census::{
    census_cap, enumerate_divides, enumerate_genus_one, family, CensusEntry, CensusError,
    FamilyKind,
};
use divide_forge::divide::Divide;
use divide_forge::fiber::{build_fiber, CycleFamily, FiberComplex, MonodromyWord};
use divide_forge::homology::homological_monodromy;
use divide_forge::invariants::{heegaard_check, page_invariants};
use divide_forge::io::{emit_dot, emit_svg, parse_divide, DivideDocument, IoError};

#[derive(Parser)]
#[command(name = "divide-forge", version, about = "Open books and Lefschetz fibrations from admissible divides")]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a divide is connected and checkerboard colorable.
    Validate { file: PathBuf },
    /// Page invariants and Heegaard data of the open book.
    Invariants { file: PathBuf },
    /// Traced A'Campo fiber and vanishing cycle counts.
    Fiber { file: PathBuf },
    /// Monodromy as an ordered product of Dehn twists.
    Monodromy {
        file: PathBuf,
        /// Also print the action on first homology.
        #[arg(long)]
        homology: bool,
        /// Invert every twist.
        #[arg(long)]
        negate: bool,
    },
    /// List divides on a surface of the given genus.
    Enumerate(EnumerateArgs),
    /// Write one of the three genus-one families as a document.
    Family {
        #[arg(long, value_parser = parse_kind)]
        kind: FamilyKind,
        #[arg(long)]
        genus: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw the dual graph (DOT) or the fiber (SVG).
    Render {
        file: PathBuf,
        #[arg(long, conflicts_with = "svg", required_unless_present = "svg")]
        dot: bool,
        #[arg(long)]
        svg: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    genus: u32,
    /// Every admissible divide from the census instead of genus-one pages.
    #[arg(long)]
    all: bool,
    /// Largest number of double points for `--all`.
    #[arg(long, requires = "all")]
    max_v: Option<usize>,
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    FamilyKind::from_name(s).ok_or_else(|| "expected birkhoff-fried, brunella or minimal".to_string())
}

enum Failure {
    /// Well-formed input that fails a domain check.
    Domain(String),
    /// Unreadable or malformed input.
    Usage(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::InvariantMismatch { .. } => Failure::Domain(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// A report in both renderings.
struct Report {
    text: String,
    json: Value,
}

fn load(path: &Path) -> Result<Divide, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_divide(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn validate(p: &Divide) -> Result<Report, Failure> {
    let report = p.validate_admissible();
    let json = json!({
        "admissible": report.admissible(),
        "connected": report.connected,
        "faces_are_disks": report.faces_are_disks,
        "colorable": report.colorable,
        "failures": report.failures(),
    });
    if report.admissible() {
        Ok(Report {
            text: "admissible\n".into(),
            json,
        })
    } else {
        Err(Failure::Domain(format!("not admissible: {report}")))
    }
}

fn invariants(p: &Divide) -> Result<Report, Failure> {
    let page = page_invariants(p).map_err(domain)?;
    let (heegaard, consistent) = heegaard_check(p).map_err(domain)?;
    let c = p.circle_count();
    let v = p.double_points();
    let mut text = String::new();
    writeln!(text, "g\tc\tv\tk\th\tchi\theegaard\tbound\tconsistent").unwrap();
    writeln!(
        text,
        "{}\t{c}\t{v}\t{}\t{}\t{}\t{}\t{}\t{consistent}",
        page.ambient_genus,
        page.binding_components,
        page.genus,
        page.euler_char,
        heegaard.heegaard_genus_from_openbook,
        heegaard.heegaard_genus_lower_bound
    )
    .unwrap();
    let json = json!({
        "ambient_genus": page.ambient_genus,
        "circles": c,
        "double_points": v,
        "binding_components": page.binding_components,
        "page_genus": page.genus,
        "euler_char": page.euler_char,
        "heegaard_genus_from_openbook": heegaard.heegaard_genus_from_openbook,
        "heegaard_genus_lower_bound": heegaard.heegaard_genus_lower_bound,
        "consistent": consistent,
    });
    Ok(Report { text, json })
}

fn fiber_of(p: &Divide) -> Result<FiberComplex, Failure> {
    let coloring = p.checkerboard(false).map_err(domain)?;
    build_fiber(p, &coloring).map_err(domain)
}

fn fiber(p: &Divide) -> Result<Report, Failure> {
    let fiber = fiber_of(p)?;
    let (m0, m1, m2) = fiber.vanishing_cycles().counts();
    let boundary: Vec<usize> = fiber.boundary_cycles().iter().map(Vec::len).collect();
    let mut text = String::new();
    writeln!(text, "euler characteristic\t{}", fiber.euler_characteristic()).unwrap();
    writeln!(text, "boundary components\t{}", boundary.len()).unwrap();
    writeln!(text, "genus\t{}", fiber.genus()).unwrap();
    writeln!(text, "roundabouts\t{}", fiber.roundabouts().len()).unwrap();
    writeln!(text, "bands\t{}", fiber.bands().len()).unwrap();
    writeln!(text, "vanishing cycles\t{m0} + {m1} + {m2}").unwrap();
    let json = json!({
        "euler_char": fiber.euler_characteristic(),
        "boundary_components": boundary.len(),
        "boundary_lengths": boundary,
        "genus": fiber.genus(),
        "roundabouts": fiber.roundabouts().len(),
        "bands": fiber.bands().len(),
        "alphas": m0,
        "betas": m1,
        "gammas": m2,
    });
    Ok(Report { text, json })
}

fn monodromy(p: &Divide, homology: bool, negate: bool) -> Result<Report, Failure> {
    let fiber = fiber_of(p)?;
    let mut word = MonodromyWord::from_cycles(&fiber.vanishing_cycles());
    if negate {
        word = word.negated();
    }
    let mut text = format!("{word}\n");
    let twists: Vec<Value> = word
        .twists
        .iter()
        .map(|t| {
            let family = match t.family {
                CycleFamily::Alpha => "alpha",
                CycleFamily::Beta => "beta",
                CycleFamily::Gamma => "gamma",
            };
            json!({
                "family": family,
                "index": t.index,
                "positive": t.positive,
                "cycle": t.cycle,
            })
        })
        .collect();
    let mut json = json!({ "length": word.len(), "twists": twists });
    if homology {
        let (basis, m) = homological_monodromy(&fiber, &word).map_err(domain)?;
        let form = basis.form();
        writeln!(text, "rank {}", basis.rank()).unwrap();
        writeln!(text, "intersection form").unwrap();
        write_matrix(&mut text, &form.rows());
        writeln!(text, "action on homology").unwrap();
        write_matrix(&mut text, &m.rows());
        json["homology"] = json!({
            "rank": basis.rank(),
            "intersection_form": to_strings(&form.rows()),
            "matrix": to_strings(&m.rows()),
            "preserves_form": m.preserves_form(form),
        });
    }
    Ok(Report { text, json })
}

fn write_matrix(out: &mut String, rows: &[Vec<i128>]) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
}

/// Entries as JSON numbers when they fit in `i64`.
fn to_strings(rows: &[Vec<i128>]) -> Value {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|&x| i64::try_from(x).map_or_else(|_| json!(x.to_string()), |x| json!(x)))
                .collect::<Value>()
        })
        .collect()
}

fn enumerate(args: &EnumerateArgs) -> Result<Report, Failure> {
    let census_failure = |e: CensusError| match e {
        CensusError::CapExceeded { .. } | CensusError::GenusTooSmall(_) => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Domain(e.to_string()),
    };
    let entries: Vec<CensusEntry> = if args.all {
        let max_v = args.max_v.unwrap_or_else(census_cap);
        enumerate_divides(max_v)
            .map_err(census_failure)?
            .into_iter()
            .filter(|e| e.invariants.ambient_genus == args.genus)
            .collect()
    } else {
        enumerate_genus_one(args.genus).map_err(census_failure)?
    };
    let mut text = String::from("family\tc\tv\tk\th\tcanonical\n");
    let mut rows = Vec::new();
    for e in &entries {
        let i = e.invariants;
        let family = e.family.map_or("-", FamilyKind::name);
        writeln!(
            text,
            "{family}\t{}\t{}\t{}\t{}\t{}",
            i.circles,
            i.double_points,
            i.binding_components,
            i.page_genus,
            e.canonical.to_hex()
        )
        .unwrap();
        rows.push(json!({
            "family": e.family.map(FamilyKind::name),
            "ambient_genus": i.ambient_genus,
            "circles": i.circles,
            "double_points": i.double_points,
            "binding_components": i.binding_components,
            "page_genus": i.page_genus,
            "canonical": e.canonical.to_hex(),
            "document": serde_json::to_value(DivideDocument::from_divide(&e.divide)).expect("documents serialize"),
        }));
    }
    Ok(Report {
        text,
        json: Value::Array(rows),
    })
}

fn run(cli: &Cli) -> Result<Option<Report>, Failure> {
    let report = match &cli.command {
        Command::Validate { file } => validate(&load(file)?)?,
        Command::Invariants { file } => invariants(&load(file)?)?,
        Command::Fiber { file } => fiber(&load(file)?)?,
        Command::Monodromy {
            file,
            homology,
            negate,
        } => monodromy(&load(file)?, *homology, *negate)?,
        Command::Enumerate(args) => enumerate(args)?,
        Command::Family {
            kind,
            genus,
            output,
        } => {
            let p = family(*kind, *genus).map_err(|e| Failure::Usage(e.to_string()))?;
            let doc = DivideDocument::from_divide(&p)
                .with_name(&format!("{kind}-g{genus}"))
                .with_expected(&p)
                .to_text();
            match output {
                Some(path) => write_file(path, &doc)?,
                None => print!("{doc}"),
            }
            return Ok(None);
        }
        Command::Render {
            file,
            dot,
            output,
            ..
        } => {
            let p = load(file)?;
            let contents = if *dot {
                emit_dot(&p.dual_graph())
            } else {
                emit_svg(&fiber_of(&p)?)
            };
            write_file(output, &contents)?;
            return Ok(None);
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(report)) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("reports serialize")
                ),
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
