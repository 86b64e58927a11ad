//! Command-line front end: every subcommand reads its parameters from an
//! optional scenario file, overridden by flags, runs one library operation
//! and writes its report to standard output or to a file in `--out`.
//!
//! Exit codes: 0 success, 2 schema error (arguments, scenario or input
//! files), 3 domain error, 4 blocked tiling.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use interwoven::brackets::build_rows;
use interwoven::harp::{
    meta_tile_counts, run_embedded, window_tileable, Outcome, Tileability, TuringMachine, ValidMachine,
};
use interwoven::render::{render_brackets, render_grid, render_scene, RenderOptions};
use interwoven::scenario::{parse_axis, parse_range, Model, NamedModel, Resolved, Scenario, ScenarioError};
use interwoven::tile_algebra::{
    count_formula, euclid_catalog, euclid_corpus, euclid_families, expand_formula, hyper_count_report,
    parse_formula_with, EUCLID_FAMILIES,
};
use interwoven::tiler::{
    force_complete, intended_tiling, realize, verify, Forced, TileGrid, DEFAULT_NODE_LIMIT,
};
use interwoven::trilaterals::{build_scene, generate, Scene, Status, Trilateral};

#[derive(Parser)]
#[command(name = "interwoven", version, about = "Brackets, interwoven triangles, tile counts, a brick tiler and the harp")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON); flags override its fields.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Directory for the outputs (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Named model.
    #[arg(long, global = true, value_enum, conflicts_with_all = ["phase", "bits"])]
    model: Option<ModelArg>,
    /// Row-0 phase of an explicit model.
    #[arg(long, global = true, requires = "bits")]
    phase: Option<u8>,
    /// Phase bits of an explicit model, as 0s and 1s (`-` for none).
    #[arg(long, global = true, requires = "phase")]
    bits: Option<String>,
    /// Maximal generation.
    #[arg(long, global = true)]
    generation: Option<u32>,
    /// Half-open row range `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    rows: Option<String>,
    /// Half-open column range `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    columns: Option<String>,
    /// Axis `column` or `column@start_row` (repeatable).
    #[arg(long = "axis", global = true, allow_hyphen_values = true)]
    axes: Vec<String>,
    /// Turing machine file.
    #[arg(long, global = true)]
    machine: Option<PathBuf>,
    /// Instruction budget of harp runs.
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Node budget of the forcing search.
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Tile grid file (JSON).
    #[arg(long, global = true)]
    grid: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModelArg {
    Butterfly,
    Sunset,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket rows, intervals and free letters.
    Brackets,
    /// Trilaterals of the axis, or of the scene when axes are given.
    Trilaterals,
    /// Tile formulas and counts.
    #[command(subcommand)]
    Tiles(TilesCommand),
    /// The brick-layout tiler.
    #[command(subcommand)]
    Tile(TileCommand),
    /// Turing runs in red triangles.
    #[command(subcommand)]
    Harp(HarpCommand),
    /// SVG figure.
    Render {
        #[arg(long, value_enum, default_value = "scene")]
        target: RenderTarget,
        /// Overlay the horizontal signals.
        #[arg(long)]
        signals: bool,
    },
}

#[derive(Subcommand)]
enum TilesCommand {
    /// Euclidean family counts and the catalog size, or the hyperbolic table.
    Count {
        #[arg(long)]
        hyperbolic: bool,
    },
    /// Prototiles of a formula or of a Euclidean family name.
    Expand { formula: Option<String> },
    /// The Euclidean catalog.
    Catalog,
}

#[derive(Subcommand)]
enum TileCommand {
    /// The construction's tiling of the scene window.
    Intended {
        /// Skip the catalog check (multi-axis scenes).
        #[arg(long)]
        unchecked: bool,
    },
    /// Mismatched contacts of a grid.
    Verify,
    /// Every completion of a partial grid by catalog tiles.
    Force,
}

#[derive(Subcommand)]
enum HarpCommand {
    /// Run a machine in a red triangle of the given generation.
    Run {
        #[arg(long)]
        triangle_generation: Option<u32>,
    },
    /// Whether the scene window tiles once every red triangle computes.
    Tileable,
    /// The computing meta-tile count.
    Counts,
}

#[derive(Copy, Clone, ValueEnum)]
enum RenderTarget {
    Scene,
    Grid,
    Brackets,
}

/// A failure and its exit code.
enum Failure {
    Schema(String),
    Domain(String),
    Blocked(String),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Schema(format!("scenario: {e}"))
    }
}

fn domain(module: &str) -> impl Fn(&dyn std::fmt::Display) -> Failure + '_ {
    move |e| Failure::Domain(format!("{module}: {e}"))
}

/// Report files: name and content.
type Outputs = Vec<(String, String)>;

fn scenario(common: &Common) -> Result<Scenario, Failure> {
    let mut s = match &common.scenario {
        Some(p) => Scenario::load(p)?,
        None => Scenario::new(),
    };
    if let Some(m) = common.model {
        let named = match m {
            ModelArg::Butterfly => NamedModel::Butterfly,
            ModelArg::Sunset => NamedModel::Sunset,
        };
        s.model = Some(Model::Named { named });
    }
    if let (Some(phase), Some(bits)) = (common.phase, &common.bits) {
        let bits = bits
            .chars()
            .filter(|c| *c != '-')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Failure::Schema(format!("--bits: `{c}` is not 0 or 1"))),
            })
            .collect::<Result<_, _>>()?;
        s.model = Some(Model::Explicit { phase, bits });
    }
    s.max_generation = common.generation.or(s.max_generation);
    if let Some(r) = &common.rows {
        s.rows = Some(parse_range(r)?);
    }
    if let Some(c) = &common.columns {
        s.columns = Some(parse_range(c)?);
    }
    if !common.axes.is_empty() {
        s.axes = Some(common.axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?);
    }
    s.machine = common.machine.clone().or(s.machine);
    s.max_steps = common.max_steps.or(s.max_steps);
    s.node_limit = common.node_limit.or(s.node_limit);
    s.grid = common.grid.clone().or(s.grid);
    Ok(s)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

fn machine(r: &Resolved) -> Result<ValidMachine, Failure> {
    let path = r.scenario.machine.as_ref().ok_or_else(|| Failure::Schema("a machine file is required".into()))?;
    let tm: TuringMachine = read(path)?.parse().map_err(|e| Failure::Schema(format!("machine: {e}")))?;
    tm.validate().map_err(|e| Failure::Domain(format!("machine: {e}")))
}

fn grid(r: &Resolved) -> Result<TileGrid, Failure> {
    let path = r.scenario.grid.as_ref().ok_or_else(|| Failure::Schema("a grid file is required".into()))?;
    TileGrid::from_json(&read(path)?).map_err(|e| Failure::Schema(format!("grid: {e}")))
}

fn scene(r: &Resolved) -> Result<Scene, Failure> {
    build_scene(&r.axes, &r.choices, r.generation, r.window).map_err(|e| domain("trilaterals")(&e))
}

fn brackets(r: &Resolved) -> Result<Outputs, Failure> {
    let m = build_rows(&r.choices, r.generation, r.window.rows).map_err(|e| domain("brackets")(&e))?;
    let mut s = m.dump();
    for g in 0..=r.generation {
        for iv in m.intervals_of(g).map_err(|e| domain("brackets")(&e))? {
            let _ = write!(s, "gen={g} {:?} {:?} [{}, {}] mid {}", iv.kind, iv.colour, iv.left, iv.right, iv.mid);
            if let Ok(free) = m.free_positions(&iv) {
                let _ = write!(s, " free {}", free.count);
            }
            s.push('\n');
        }
    }
    Ok(vec![("brackets.txt".into(), s)])
}

fn trilaterals(r: &Resolved) -> Result<Outputs, Failure> {
    let ts: Vec<Trilateral> = if r.scenario.axes.is_some() {
        scene(r)?.trilaterals
    } else {
        generate(&r.choices, r.generation, r.window.rows).map_err(|e| domain("trilaterals")(&e))?
    };
    let json = serde_json::to_string_pretty(&ts).expect("trilaterals serialize") + "\n";
    Ok(vec![("trilaterals.json".into(), json)])
}

fn tiles(cmd: &TilesCommand, r: &Resolved) -> Result<Outputs, Failure> {
    match cmd {
        TilesCommand::Count { hyperbolic: true } => Ok(vec![("hyperbolic_counts.txt".into(), hyper_count_report().to_text())]),
        TilesCommand::Count { hyperbolic: false } => {
            let c = euclid_corpus();
            let mut s = String::new();
            for name in EUCLID_FAMILIES {
                let _ = writeln!(s, "({name}) {}", count_formula(c.get(name).expect("family")));
            }
            let _ = writeln!(s, "families {}", euclid_families().len());
            let _ = writeln!(s, "catalog {}", euclid_catalog().len());
            Ok(vec![("counts.txt".into(), s)])
        }
        TilesCommand::Expand { formula } => {
            let text = formula
                .clone()
                .or_else(|| r.scenario.formula.clone())
                .ok_or_else(|| Failure::Schema("a formula or a family name is required".into()))?;
            let corpus = euclid_corpus();
            let f = match corpus.get(&text) {
                Some(f) => f.clone(),
                None => parse_formula_with(&text, &corpus).map_err(|e| Failure::Schema(format!("formula: {e}")))?,
            };
            let s: String = expand_formula(&f).iter().map(|t| format!("{t}\n")).collect();
            Ok(vec![("expand.txt".into(), s)])
        }
        TilesCommand::Catalog => {
            let s: String = euclid_catalog().iter().map(|t| format!("{t}\n")).collect();
            Ok(vec![("catalog.txt".into(), s)])
        }
    }
}

fn tile(cmd: &TileCommand, r: &Resolved) -> Result<Outputs, Failure> {
    match cmd {
        TileCommand::Intended { unchecked } => {
            let s = scene(r)?;
            let g = if *unchecked { realize(&s) } else { intended_tiling(&s) };
            Ok(vec![("grid.json".into(), g.map_err(|e| domain("tiler")(&e))?.to_json())])
        }
        TileCommand::Verify => {
            let bad = verify(&grid(r)?);
            if bad.is_empty() {
                return Ok(vec![("verify.txt".into(), "0 violations\n".into())]);
            }
            let mut s = format!("{} violations\n", bad.len());
            for v in &bad {
                let _ = writeln!(
                    s,
                    "({}, {}) `{}` / ({}, {}) `{}` across {:?}",
                    v.a.row, v.a.column, v.a_tile, v.b.row, v.b.column, v.b_tile, v.contact
                );
            }
            Err(Failure::Domain(format!("tiler: {s}")))
        }
        TileCommand::Force => {
            let partial = grid(r)?;
            let limit = r.scenario.node_limit.unwrap_or(DEFAULT_NODE_LIMIT);
            let forced = force_complete(&partial, &euclid_catalog(), limit).map_err(|e| domain("tiler")(&e))?;
            let found = forced.completions();
            let json = format!("[\n{}]\n", found.iter().map(|g| g.to_json()).collect::<Vec<_>>().join(",\n"));
            match forced {
                Forced::Exhausted { nodes, .. } => {
                    Err(Failure::Domain(format!("tiler: node budget exhausted after {nodes} nodes, {} completions so far", found.len())))
                }
                Forced::Complete(v) if v.is_empty() => Err(Failure::Blocked("no completion".into())),
                Forced::Complete(v) => Ok(vec![
                    ("force.txt".into(), format!("{} completions\n", v.len())),
                    ("completions.json".into(), json),
                ]),
            }
        }
    }
}

fn harp(cmd: &HarpCommand, r: &Resolved) -> Result<Outputs, Failure> {
    let steps = r.scenario.max_steps.unwrap_or(10_000);
    match cmd {
        HarpCommand::Counts => Ok(vec![("meta_tile_counts.txt".into(), meta_tile_counts().to_text())]),
        HarpCommand::Run { triangle_generation } => {
            let tm = machine(r)?;
            let g = triangle_generation.or(r.scenario.triangle_generation).unwrap_or(3);
            let t = Trilateral::new(0, g, Status::Triangle, 0);
            let sim = run_embedded(&tm, &t, steps).map_err(|e| domain("harp")(&e))?;
            let mut s = format!(
                "red triangle generation {g}: {} free rows, {} instructions, {:?}\n",
                sim.capacity(),
                sim.steps,
                sim.outcome
            );
            for st in &sim.trace {
                let _ = writeln!(s, "row {:>4} square {:>4} {}", st.row, st.square, st.tile);
            }
            let json = serde_json::to_string_pretty(&sim).expect("runs serialize") + "\n";
            let out = vec![("harp.txt".into(), s), ("harp.json".into(), json)];
            match sim.outcome {
                Outcome::Blocked { .. } => Err(Failure::Blocked(out[0].1.clone())),
                Outcome::Running => Err(Failure::Domain(format!("harp: still running after {steps} instructions"))),
                Outcome::Interrupted { .. } => Ok(out),
            }
        }
        HarpCommand::Tileable => {
            let tm = machine(r)?;
            let s = scene(r)?;
            match window_tileable(&tm, &s, steps).map_err(|e| domain("harp")(&e))? {
                Tileability::Tileable { grid, runs } => Ok(vec![
                    ("tileable.txt".into(), format!("tileable: {} red triangles computed\n", runs.len())),
                    ("grid.json".into(), grid.to_json()),
                ]),
                Tileability::Blocked { site, run } => Err(Failure::Blocked(format!(
                    "blocked at row {} column {} by the run of {:?} after {} instructions",
                    site.row, site.column, run.triangle, run.steps
                ))),
                Tileability::Exhausted => Err(Failure::Domain(format!("harp: budget of {steps} instructions exhausted"))),
            }
        }
    }
}

fn render(target: RenderTarget, signals: bool, r: &Resolved) -> Result<Outputs, Failure> {
    let signals = signals || r.scenario.signals.unwrap_or(false);
    let svg = match target {
        RenderTarget::Scene => render_scene(&scene(r)?, RenderOptions { signals }),
        RenderTarget::Grid => render_grid(&grid(r)?),
        RenderTarget::Brackets => {
            render_brackets(&build_rows(&r.choices, r.generation, r.window.rows).map_err(|e| domain("brackets")(&e))?)
        }
    };
    let name = match target {
        RenderTarget::Scene => "scene.svg",
        RenderTarget::Grid => "grid.svg",
        RenderTarget::Brackets => "brackets.svg",
    };
    Ok(vec![(name.into(), svg)])
}

fn run(cli: &Cli) -> Result<Outputs, Failure> {
    let r = scenario(&cli.common)?.resolve()?;
    let mut out = match &cli.command {
        Command::Brackets => brackets(&r)?,
        Command::Trilaterals => trilaterals(&r)?,
        Command::Tiles(c) => tiles(c, &r)?,
        Command::Tile(c) => tile(c, &r)?,
        Command::Harp(c) => harp(c, &r)?,
        Command::Render { target, signals } => render(*target, *signals, &r)?,
    };
    if cli.common.out.is_some() {
        out.push(("scenario.json".into(), r.to_json()));
    }
    Ok(out)
}

fn emit(out: &Option<PathBuf>, outputs: &Outputs) -> std::io::Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, content) in outputs {
                let path = dir.join(name);
                std::fs::write(&path, content)?;
                println!("{}", path.display());
            }
        }
        None => {
            // JSON companions repeat the text report.
            let text: Vec<_> = outputs.iter().filter(|(n, _)| !n.ends_with(".json")).collect();
            let shown = if text.is_empty() { outputs.iter().collect() } else { text };
            for (_, content) in shown {
                print!("{content}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outputs) => match emit(&cli.common.out, &outputs) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: writing outputs: {e}");
                ExitCode::from(3)
            }
        },
        Err(Failure::Schema(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Blocked(m)) => {
            print!("{m}");
            if !m.ends_with('\n') {
                println!();
            }
            ExitCode::from(4)
        }
    }
}
