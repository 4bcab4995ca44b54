mod input;
mod report;
mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use persistent_cycles::cubical::{lower_star_filtration, CubicalComplex, WeightMode};
use persistent_cycles::export::{export_cycle_mesh, write_simplicial_obj};
use persistent_cycles::geometry::{Coordinates, EmbeddedComplex};
use persistent_cycles::inf::{min_cycle_born_at, min_pers_cyc_inf_in, InfOptions};
use persistent_cycles::suspension::lift_fin_instance;
use persistent_cycles::voids::void_boundaries;
use persistent_cycles::{
    compute_pairs, fin, CellComplex, CellId, Death, Diagram, Filtration, Interval, PersistentCycle,
};
use rayon::prelude::*;
use serde::Serialize;

use report::{CliError, CycleOut, DiagramOut, IntervalOut, OrientedCellOut, VoidOut, VoidsOut};

/// Relative tolerance when matching `--by-value` bounds.
const VALUE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "pcyc",
    version,
    about = "Minimal persistent cycles of filtered complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the persistence intervals of a filtration.
    Diagram {
        #[command(flatten)]
        source: SourceArgs,
        /// Only intervals of this dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Also draw the barcode as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimal persistent cycles of finite intervals.
    Fin(CycleArgs),
    /// Minimal persistent cycles of infinite intervals of an embedded complex.
    ///
    /// For a finite interval only the birth is used and the result is the
    /// minimal cycle created at that index.
    Inf {
        #[command(flatten)]
        cycle: CycleArgs,
        /// Keep dangling top cells instead of pruning them first.
        #[arg(long)]
        no_prune: bool,
    },
    /// Oriented boundaries of the voids of an embedded complex.
    Voids {
        #[command(flatten)]
        source: SourceArgs,
        /// Dimension of the boundary cells; defaults to one below the ambient space.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Write the filtration of the suspension that carries a finite interval
    /// one dimension up.
    Suspend {
        /// Filtration file.
        input: PathBuf,
        /// `birth,death` of the interval to lift.
        #[arg(long)]
        interval: String,
        /// Output file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Filtration file.
    #[arg(required_unless_present = "volume")]
    input: Option<PathBuf>,
    /// Volume header; the input is the sublevel filtration of the grid.
    #[arg(long, conflicts_with = "input")]
    volume: Option<PathBuf>,
    /// Vertex coordinates for a filtration file.
    #[arg(long, conflicts_with = "volume")]
    coords: Option<PathBuf>,
    /// Weights of the square faces of a volume.
    #[arg(long, value_enum, default_value_t = Weights::Unit)]
    weights: Weights,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Unit,
    Value,
}

#[derive(Args)]
struct CycleArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// `birth,death`, `birth,inf` or just `birth`. Repeatable.
    #[arg(long = "interval", required = true)]
    intervals: Vec<String>,
    /// Cycle dimension; must match the birth cell.
    #[arg(long)]
    dim: Option<usize>,
    /// Read interval bounds as filtration values rather than indices.
    #[arg(long)]
    by_value: bool,
    /// Worker threads when several intervals are given.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write each cycle as an OBJ mesh; `name.obj` becomes `name-<k>.obj`
    /// for several intervals.
    #[arg(long)]
    obj: Option<PathBuf>,
}

enum Body {
    Simplicial {
        complex: CellComplex,
        coords: Option<Arc<Coordinates>>,
    },
    Cubical(CubicalComplex),
}

struct Instance {
    body: Body,
    filtration: Filtration,
    values: Option<Vec<f64>>,
}

impl Instance {
    fn load(src: &SourceArgs) -> Result<Self, CliError> {
        if let Some(header) = &src.volume {
            let grid = input::read_volume(header)?;
            let mode = match src.weights {
                Weights::Unit => WeightMode::Unit,
                Weights::Value => WeightMode::Value,
            };
            let cf = lower_star_filtration(&grid, mode)?;
            return Ok(Instance {
                body: Body::Cubical(cf.cubical),
                filtration: cf.filtration,
                values: Some(cf.values),
            });
        }
        let path = src.input.as_deref().expect("clap requires an input");
        let ff = input::read_filtration(path)?;
        let coords = match &src.coords {
            Some(p) => Some(Arc::new(input::read_coordinates(p)?)),
            None => None,
        };
        Ok(Instance {
            body: Body::Simplicial {
                complex: ff.complex,
                coords,
            },
            filtration: ff.filtration,
            values: ff.values,
        })
    }

    fn complex(&self) -> &CellComplex {
        match &self.body {
            Body::Simplicial { complex, .. } => complex,
            Body::Cubical(c) => &c.complex,
        }
    }

    fn embedded(&self) -> Result<Option<EmbeddedComplex>, CliError> {
        match &self.body {
            Body::Simplicial { coords: None, .. } => Ok(None),
            Body::Simplicial {
                complex,
                coords: Some(c),
            } => Ok(Some(EmbeddedComplex::new(complex.clone(), c.clone())?)),
            Body::Cubical(c) => Ok(Some(c.embedded())),
        }
    }

    fn require_embedded(&self) -> Result<EmbeddedComplex, CliError> {
        self.embedded()?
            .ok_or_else(|| CliError::usage("this command needs --coords or --volume".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Bound {
    Index(usize),
    Value(f64),
    Never,
}

fn parse_bound(tok: &str, by_value: bool) -> Result<Bound, CliError> {
    let tok = tok.trim();
    if matches!(tok, "inf" | "+inf" | "never") {
        return Ok(Bound::Never);
    }
    let bad = || CliError::usage(format!("bad interval bound {tok:?}"));
    if by_value {
        tok.parse().map(Bound::Value).map_err(|_| bad())
    } else {
        tok.parse().map(Bound::Index).map_err(|_| bad())
    }
}

fn parse_interval(s: &str, by_value: bool) -> Result<(Bound, Option<Bound>), CliError> {
    let (b, d) = match s.split_once(',') {
        Some((b, d)) => (b, Some(d)),
        None => (s, None),
    };
    let birth = parse_bound(b, by_value)?;
    if birth == Bound::Never {
        return Err(CliError::usage(format!("interval {s:?} has no birth")));
    }
    Ok((birth, d.map(|d| parse_bound(d, by_value)).transpose()?))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= VALUE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Looks up the diagram interval named by a command-line bound pair.
fn resolve(
    inst: &Instance,
    diagram: &Diagram,
    bounds: (Bound, Option<Bound>),
    dim: Option<usize>,
) -> Result<Interval, CliError> {
    let f = &inst.filtration;
    let iv = match bounds {
        (Bound::Index(b), death) => {
            let q = f.try_cell(b)?.dim;
            if let Some(d) = dim.filter(|&d| d != q) {
                return Err(CliError::precondition(format!(
                    "the cell at index {b} has dimension {q}, not {d}"
                )));
            }
            match death {
                None => diagram.born_at(q, b).ok_or_else(|| {
                    CliError::precondition(format!("no interval is born at index {b}"))
                })?,
                Some(Bound::Index(j)) => Interval::finite(q, b, j),
                Some(Bound::Never) => Interval::infinite(q, b),
                Some(Bound::Value(_)) => unreachable!("index mode yields no values"),
            }
        }
        (Bound::Value(b), death) => {
            let values = inst.values.as_deref().ok_or_else(|| {
                CliError::precondition("--by-value needs filtration values (f=)".into())
            })?;
            let value = |i: usize| values[i - 1];
            diagram
                .iter()
                .filter(|iv| dim.is_none_or(|d| iv.dim == d))
                .find(|iv| {
                    close(value(iv.birth), b)
                        && match (death, iv.death) {
                            (None, _) | (Some(Bound::Never), Death::Never) => true,
                            (Some(Bound::Value(x)), Death::At(j)) => close(value(j), x),
                            _ => false,
                        }
                })
                .copied()
                .ok_or_else(|| {
                    CliError::precondition(format!(
                        "no interval matches the values {b} and {death:?}"
                    ))
                })?
        }
        (Bound::Never, _) => unreachable!("rejected when parsing"),
    };
    diagram.require(&iv)?;
    Ok(iv)
}

fn obj_path(base: &Path, k: usize, n: usize) -> PathBuf {
    if n == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().unwrap_or_default().to_string_lossy();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{k}"),
    };
    base.with_file_name(name)
}

fn write_obj(
    inst: &Instance,
    ec: Option<&EmbeddedComplex>,
    cycle: &PersistentCycle,
    path: &Path,
) -> Result<(), CliError> {
    match (&inst.body, ec) {
        (Body::Cubical(c), _) => export_cycle_mesh(c, &cycle.chain, path)?,
        (Body::Simplicial { .. }, Some(ec)) => {
            let mut buf = Vec::new();
            write_simplicial_obj(&mut buf, ec, &cycle.chain)?;
            std::fs::write(path, buf).map_err(|e| CliError::io(path, e))?;
        }
        (Body::Simplicial { .. }, None) => {
            return Err(CliError::usage("--obj needs --coords or --volume".into()));
        }
    }
    Ok(())
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value)
        .map_err(|e| CliError::from(persistent_cycles::Error::Io(e.to_string())))?;
    emit(&format!("{text}\n"));
    Ok(())
}

fn run_cycles(args: &CycleArgs, inf: Option<InfOptions>) -> Result<(), CliError> {
    let inst = Instance::load(&args.source)?;
    let k = inst.complex();
    let f = &inst.filtration;
    let diagram = compute_pairs(k, f);
    let ivs = args
        .intervals
        .iter()
        .map(|s| resolve(&inst, &diagram, parse_interval(s, args.by_value)?, args.dim))
        .collect::<Result<Vec<_>, _>>()?;
    let ec = match inf {
        Some(_) => Some(inst.require_embedded()?),
        None => inst.embedded()?,
    };
    if args.obj.is_some() && ec.is_none() {
        return Err(CliError::usage("--obj needs --coords or --volume".into()));
    }
    let solve = |(n, iv): (usize, &Interval)| -> Result<CycleOut, CliError> {
        let cycle = match (inf, &ec) {
            (None, _) => fin::min_pers_cyc_fin_in(k, iv.dim, f, &diagram, iv)?,
            (Some(opts), Some(ec)) if iv.is_finite() => {
                min_cycle_born_at(ec, iv.dim, f, iv.birth, opts)?
            }
            (Some(_), Some(ec)) => min_pers_cyc_inf_in(ec, iv.dim, f, &diagram, iv)?,
            (Some(_), None) => unreachable!("checked above"),
        };
        let mut out = CycleOut::new(k, IntervalOut::new(iv, inst.values.as_deref()), &cycle);
        if let Some(base) = &args.obj {
            let path = obj_path(base, n + 1, ivs.len());
            write_obj(&inst, ec.as_ref(), &cycle, &path)?;
            out.obj = Some(path.display().to_string());
        }
        Ok(out)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let results: Vec<Result<CycleOut, CliError>> =
        pool.install(|| ivs.par_iter().enumerate().map(solve).collect());
    let mut outs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    if outs.len() == 1 {
        print_json(&outs.remove(0))
    } else {
        print_json(&outs)
    }
}

fn run_diagram(
    source: &SourceArgs,
    dim: Option<usize>,
    svg_path: Option<&Path>,
) -> Result<(), CliError> {
    let inst = Instance::load(source)?;
    let diagram = compute_pairs(inst.complex(), &inst.filtration);
    let ivs: Vec<Interval> = diagram
        .iter()
        .filter(|iv| dim.is_none_or(|d| iv.dim == d))
        .copied()
        .collect();
    if let Some(path) = svg_path {
        std::fs::write(path, svg::barcode(&ivs, inst.filtration.len()))
            .map_err(|e| CliError::io(path, e))?;
    }
    print_json(&DiagramOut {
        intervals: ivs
            .iter()
            .map(|iv| IntervalOut::new(iv, inst.values.as_deref()))
            .collect(),
    })
}

fn run_voids(source: &SourceArgs, dim: Option<usize>) -> Result<(), CliError> {
    let inst = Instance::load(source)?;
    let ec = inst.require_embedded()?;
    let d = dim.unwrap_or(ec.ambient_dim().saturating_sub(1));
    let voids = void_boundaries(&ec, d)?
        .into_iter()
        .map(|v| VoidOut {
            cells: v
                .cells
                .iter()
                .map(|oc| OrientedCellOut {
                    vertices: ec.complex.vertices(CellId::new(d, oc.cell)).to_vec(),
                    orientation: if oc.positive { "+" } else { "-" },
                })
                .collect(),
        })
        .collect();
    print_json(&VoidsOut { dim: d, voids })
}

fn run_suspend(path: &Path, interval: &str, output: Option<&Path>) -> Result<(), CliError> {
    let ff = input::read_filtration(path)?;
    let inst = Instance {
        body: Body::Simplicial {
            complex: ff.complex,
            coords: None,
        },
        filtration: ff.filtration,
        values: None,
    };
    let diagram = compute_pairs(inst.complex(), &inst.filtration);
    let iv = resolve(&inst, &diagram, parse_interval(interval, false)?, None)?;
    let lifted = lift_fin_instance(inst.complex(), &inst.filtration, &iv, iv.dim + 1)?;
    let s = &lifted.suspension;
    let li = &lifted.interval;
    let mut text = format!(
        "# suspension carrying {}-interval {iv}\n# lifted interval [{}, {}) in dimension {}\n# apexes {} {}\n# weak pseudomanifold: {}\n",
        iv.dim, li.birth, li.death, li.dim, s.omega[0], s.omega[1], lifted.weak_pseudomanifold
    );
    text.push_str(&input::format_filtration(
        &s.complex,
        &lifted.filtration,
        None,
    ));
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Diagram { source, dim, svg } => run_diagram(source, *dim, svg.as_deref()),
        Command::Fin(args) => run_cycles(args, None),
        Command::Inf { cycle, no_prune } => {
            run_cycles(cycle, Some(InfOptions { prune: !no_prune }))
        }
        Command::Voids { source, dim } => run_voids(source, *dim),
        Command::Suspend {
            input,
            interval,
            output,
        } => run_suspend(input, interval, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            let msg = e.to_string();
            let head: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect();
            let head = head.join(" ");
            let head = head.strip_prefix("error: ").unwrap_or(&head);
            emit(&format!(
                "{}\n",
                CliError::usage(head.to_string()).to_json()
            ));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit(&format!("{}\n", e.to_json()));
            eprintln!("pcyc: {}", e.message);
            ExitCode::from(e.exit_code())
        }
    }
}
