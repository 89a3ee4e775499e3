//! `atfkit`: exact lattice geometry for almost toric base diagrams.
//!
//! Exit codes: 0 success, 1 verification/operation failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use atfkit_core::atbd::{self, Atbd, Side};
use atfkit_core::markov::{MarkovEqn, Triple};
use atfkit_core::num::{rat_from_str, rat_to_string};
use atfkit_core::orbifold;
use atfkit_core::render::{render_svg, RenderOptions};
use atfkit_core::suites::{run_suite, SuiteSpec, SUITES};
use atfkit_core::{catalog, io};

#[derive(Parser)]
#[command(name = "atfkit", version, about = "Almost toric base diagram toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markov type I/II equation tooling.
    Markov(MarkovArgs),
    /// Diagram operations on a file.
    Atbd(AtbdArgs),
    /// Construction-script catalog.
    Catalog(CatalogArgs),
    /// Limit-orbifold intersection theory.
    Orbifold(OrbifoldArgs),
    /// Deterministic SVG rendering.
    Render(RenderArgs),
    /// Named verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct MarkovArgs {
    #[command(subcommand)]
    cmd: MarkovCmd,
}

#[derive(Subcommand)]
enum MarkovCmd {
    /// Test whether a triple solves the equation.
    Solve {
        #[arg(long)]
        eq: String,
        #[arg(long)]
        triple: String,
    },
    /// Vieta mutation at a slot (1-based).
    Mutate {
        #[arg(long)]
        eq: String,
        #[arg(long)]
        triple: String,
        #[arg(long)]
        index: usize,
    },
    /// Enumerate the solution tree below a component bound.
    Tree {
        #[arg(long)]
        eq: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Greedy descent to the minimal solution.
    Minimize {
        #[arg(long)]
        eq: String,
        #[arg(long)]
        triple: String,
    },
    /// The sum-12 classification of type I equations.
    Classify,
}

#[derive(Args)]
struct AtbdArgs {
    #[command(subcommand)]
    cmd: AtbdCmd,
}

#[derive(Subcommand)]
enum AtbdCmd {
    /// Structural validation report.
    Validate { file: PathBuf },
    /// Node type, length type and lambda.
    Profile { file: PathBuf },
    /// Nodal trade at a Delzant vertex.
    Trade {
        file: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Move the nodes of a cut to new eigenline parameters.
    Slide {
        file: PathBuf,
        #[arg(long)]
        cut: usize,
        /// Comma-separated rational parameters.
        #[arg(long)]
        positions: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Transfer a cut to the opposite eigenray.
    Transfer {
        file: PathBuf,
        #[arg(long)]
        cut: usize,
        #[arg(long, default_value = "left")]
        side: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Mutation (nodal slides through the monotone fibre + transfer).
    Mutate {
        file: PathBuf,
        #[arg(long)]
        cut: usize,
        #[arg(long, default_value = "left")]
        side: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Toric blowup at a Delzant vertex.
    Blowup {
        file: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        length: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Almost toric blowup on a boundary edge.
    Atblowup {
        file: PathBuf,
        #[arg(long)]
        edge: usize,
        /// Fraction of the way along the edge, e.g. 1/2.
        #[arg(long, default_value = "1/2")]
        at: String,
        #[arg(long)]
        length: String,
        #[arg(long, default_value = "left")]
        side: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Canonical form under translation and SL(2,Z).
    Canon {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CatalogArgs {
    #[command(subcommand)]
    cmd: CatalogCmd,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List the construction scripts.
    List,
    /// Replay a script through a step (defaults to the last).
    Build {
        #[arg(long)]
        id: String,
        #[arg(long)]
        step: Option<usize>,
        /// Markov pair for parameterized families, e.g. 2,5.
        #[arg(long)]
        params: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replay and verify all scripts against the goldens.
    Verify,
}

#[derive(Args)]
struct OrbifoldArgs {
    #[command(subcommand)]
    cmd: OrbifoldCmd,
}

#[derive(Subcommand)]
enum OrbifoldCmd {
    /// Corner orders and edge data of the limit orbifold.
    Limit { file: PathBuf },
    /// Divisor intersection matrix.
    Matrix { file: PathBuf },
    /// Anticanonical degree.
    Degree { file: PathBuf },
    /// Predicted boundary Maslov-2 convex hull.
    Hull { file: PathBuf },
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid: bool,
    #[arg(long)]
    labels: bool,
    #[arg(long, default_value_t = 40)]
    scale: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 8)]
    depth: u32,
    #[arg(long, default_value_t = 0xA7F)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(d: &Atbd, out: &Option<PathBuf>) -> atfkit_core::Result<()> {
    match out {
        Some(path) => io::write_file(d, path)?,
        None => print!("{}", io::to_string(d)),
    }
    Ok(())
}

fn parse_side(s: &str) -> atfkit_core::Result<Side> {
    Side::from_str(s)
}

fn run(cli: Cli) -> atfkit_core::Result<ExitCode> {
    match cli.command {
        Command::Markov(args) => {
            match args.cmd {
                MarkovCmd::Solve { eq, triple } => {
                    let eq: MarkovEqn = eq.parse()?;
                    let t: Triple = triple.parse()?;
                    println!("{}", eq.is_solution(&t));
                }
                MarkovCmd::Mutate { eq, triple, index } => {
                    let eq: MarkovEqn = eq.parse()?;
                    let t: Triple = triple.parse()?;
                    if !(1..=3).contains(&index) {
                        return Err(atfkit_core::Error::parse("index must be 1, 2 or 3"));
                    }
                    println!("{}", eq.mutate(&t, index - 1)?);
                }
                MarkovCmd::Tree { eq, bound } => {
                    let eq: MarkovEqn = eq.parse()?;
                    for t in eq.enumerate_tree(bound)? {
                        println!("{t}");
                    }
                }
                MarkovCmd::Minimize { eq, triple } => {
                    let eq: MarkovEqn = eq.parse()?;
                    let t: Triple = triple.parse()?;
                    let (min, word) = eq.minimize(&t)?;
                    let word: Vec<String> = word.iter().map(|i| (i + 1).to_string()).collect();
                    println!("{min} via [{}]", word.join(","));
                }
                MarkovCmd::Classify => {
                    for c in atfkit_core::markov::classify_type_i() {
                        println!("{} minimal {}", c.eqn, c.minimal);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Atbd(args) => {
            match args.cmd {
                AtbdCmd::Validate { file } => {
                    let d = io::read_file(&file)?;
                    let report = d.validate();
                    println!("{report}");
                    if !report.ok() {
                        return Ok(ExitCode::from(1));
                    }
                }
                AtbdCmd::Profile { file } => {
                    let d = io::read_file(&file)?;
                    let p = d.profile()?;
                    let nodes: Vec<String> = p
                        .node_type
                        .iter()
                        .map(|(n, q)| format!("({n},{q})"))
                        .collect();
                    let lens: Vec<String> = p.length_type.iter().map(rat_to_string).collect();
                    println!("node type: {}", nodes.join(" "));
                    println!("length type: {}", lens.join(" "));
                    match &p.lambda {
                        Some(l) => println!("lambda: {}", rat_to_string(l)),
                        None => println!("lambda: absent"),
                    }
                }
                AtbdCmd::Trade { file, vertex, out } => {
                    let d = io::read_file(&file)?;
                    emit(&atbd::nodal_trade(&d, vertex)?, &out)?;
                }
                AtbdCmd::Slide {
                    file,
                    cut,
                    positions,
                    out,
                } => {
                    let d = io::read_file(&file)?;
                    let ts = positions
                        .split(',')
                        .map(rat_from_str)
                        .collect::<atfkit_core::Result<Vec<_>>>()?;
                    emit(&atbd::nodal_slide(&d, cut, ts)?, &out)?;
                }
                AtbdCmd::Transfer { file, cut, side, out } => {
                    let d = io::read_file(&file)?;
                    emit(&atbd::transfer_cut(&d, cut, parse_side(&side)?)?, &out)?;
                }
                AtbdCmd::Mutate { file, cut, side, out } => {
                    let d = io::read_file(&file)?;
                    emit(&atbd::mutate(&d, cut, parse_side(&side)?)?, &out)?;
                }
                AtbdCmd::Blowup {
                    file,
                    vertex,
                    length,
                    out,
                } => {
                    let d = io::read_file(&file)?;
                    emit(&atbd::toric_blowup(&d, vertex, &rat_from_str(&length)?)?, &out)?;
                }
                AtbdCmd::Atblowup {
                    file,
                    edge,
                    at,
                    length,
                    side,
                    out,
                } => {
                    let d = io::read_file(&file)?;
                    let frac = rat_from_str(&at)?;
                    let a = d.vertex(edge).clone();
                    let b = d.vertex(d.next_idx(edge)).clone();
                    let p = atfkit_core::lattice::RationalPoint::new(
                        &a.x + &frac * (&b.x - &a.x),
                        &a.y + &frac * (&b.y - &a.y),
                    );
                    emit(
                        &atbd::almost_toric_blowup(
                            &d,
                            edge,
                            &p,
                            &rat_from_str(&length)?,
                            parse_side(&side)?,
                        )?,
                        &out,
                    )?;
                }
                AtbdCmd::Canon { file, out } => {
                    let d = io::read_file(&file)?;
                    emit(&atbd::canonicalize(&d)?, &out)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog(args) => match args.cmd {
            CatalogCmd::List => {
                for info in catalog::list_scripts() {
                    let mut tags = Vec::new();
                    if info.parameterized {
                        tags.push("parameterized");
                    }
                    if info.unverifiable {
                        tags.push("unverifiable");
                    }
                    let tags = if tags.is_empty() {
                        String::new()
                    } else {
                        format!(" [{}]", tags.join(", "))
                    };
                    println!("{} ({} steps){tags}", info.id, info.steps);
                }
                Ok(ExitCode::SUCCESS)
            }
            CatalogCmd::Build {
                id,
                step,
                params,
                out,
            } => {
                let d = if id == catalog::FAMILY_ID {
                    let params = params.ok_or_else(|| {
                        atfkit_core::Error::parse("cp2x1.family needs --params a,b")
                    })?;
                    let parts: Vec<&str> = params.split(',').collect();
                    if parts.len() != 2 {
                        return Err(atfkit_core::Error::parse("--params must be a,b"));
                    }
                    let a: BigInt = parts[0]
                        .trim()
                        .parse()
                        .map_err(|_| atfkit_core::Error::parse("bad a"))?;
                    let b: BigInt = parts[1]
                        .trim()
                        .parse()
                        .map_err(|_| atfkit_core::Error::parse("bad b"))?;
                    catalog::build_family(&a, &b)?
                } else {
                    let scripts = catalog::scripts();
                    let script = scripts
                        .iter()
                        .find(|s| s.id == id)
                        .ok_or_else(|| atfkit_core::Error::UnknownScript(id.clone()))?;
                    let step = step.unwrap_or(script.steps.len());
                    catalog::build(&id, step)?
                };
                emit(&d, &out)?;
                Ok(ExitCode::SUCCESS)
            }
            CatalogCmd::Verify => {
                let report = catalog::verify_catalog();
                print!("{report}");
                Ok(if report.ok() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
        },
        Command::Orbifold(args) => {
            match args.cmd {
                OrbifoldCmd::Limit { file } => {
                    let d = io::read_file(&file)?;
                    let o = orbifold::limit_orbifold(&d)?;
                    println!("corner orders: {:?}", o.corner_orders);
                    for i in 0..o.len() {
                        println!(
                            "edge {i}: dir {} length {}",
                            o.edge_dirs[i],
                            rat_to_string(&o.edge_lengths[i])
                        );
                    }
                }
                OrbifoldCmd::Matrix { file } => {
                    let d = io::read_file(&file)?;
                    let o = orbifold::limit_orbifold(&d)?;
                    let m = orbifold::intersection_matrix(&o);
                    let cells: Vec<Vec<String>> = m
                        .entries
                        .iter()
                        .map(|row| row.iter().map(rat_to_string).collect())
                        .collect();
                    let width = cells
                        .iter()
                        .flatten()
                        .map(|s| s.len())
                        .max()
                        .unwrap_or(1);
                    for row in cells {
                        let padded: Vec<String> =
                            row.iter().map(|s| format!("{s:>width$}")).collect();
                        println!("{}", padded.join("  "));
                    }
                }
                OrbifoldCmd::Degree { file } => {
                    let d = io::read_file(&file)?;
                    let o = orbifold::limit_orbifold(&d)?;
                    println!("{}", rat_to_string(&orbifold::degree(&o)?));
                }
                OrbifoldCmd::Hull { file } => {
                    let d = io::read_file(&file)?;
                    let h = orbifold::predicted_hull(&d)?;
                    for v in &h.vertices {
                        println!("{v}");
                    }
                    let lens: Vec<String> =
                        h.edge_lengths().iter().map(|l| l.to_string()).collect();
                    println!("edge lengths: {}", lens.join(" "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render(args) => {
            let d = io::read_file(&args.file)?;
            let svg = render_svg(
                &d,
                &RenderOptions {
                    scale: args.scale,
                    show_grid: args.grid,
                    show_labels: args.labels,
                },
            )?;
            match args.out {
                Some(path) => std::fs::write(path, svg)?,
                None => print!("{svg}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            if !SUITES.contains(&args.suite.as_str()) {
                eprintln!("unknown suite {:?}; available: {}", args.suite, SUITES.join(", "));
                return Ok(ExitCode::from(2));
            }
            let report = run_suite(&SuiteSpec {
                name: args.suite,
                depth: args.depth,
                seed: args.seed,
            })?;
            print!("{report}");
            Ok(if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
