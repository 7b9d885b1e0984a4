//! `efl`: envy-free division search from the command line.
//!
//! Exit status is 0 when a command ran (even if it found nothing) and 2 for
//! any input or validation error.

mod instance;
mod plot;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use efl_core::hybrid::{
    closed_form_coloring_count, coloring_count, configuration_space_facets, configuration_space_formula,
    chessboard_complex_facets, lower_bound, search_favourable,
};
use efl_core::solver::search_envy_free;
use efl_core::{
    certify_extremal_structure, count_distinct_divisions, extremal_preferences, find_certified_cut,
    utility_preferences, CertifyMode, EflError, ExtremalInstance, Measure, PreferenceOracle,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use instance::{default_grid, resolve_params, Overrides, ParamsFile, default_refine, CERTIFY_REFINE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] EflError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Parser)]
#[command(name = "efl", version, about = "Find, count and certify envy-free divisions of [0,1]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Lattice denominator q.
    #[arg(long, global = true)]
    grid: Option<u64>,
    /// Cut clustering radius (default 3/q).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Refinement levels around hits (solve: 6 for r<=3, 4 for r=4, else 0; secretive/expelled: 16).
    #[arg(long, global = true)]
    refine: Option<u32>,
    /// Worker threads; EFL_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for instances with randomly drawn players.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report runtime_ms as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Envy-free divisions of a tile-preference instance.
    Solve { instance: PathBuf },
    /// Two-division structure of the extremal construction.
    Extremal {
        r: usize,
        /// eps_1 > ... > eps_{r-2}; defaults to 0.9 (1 - k/(r-1)) / r.
        eps: Vec<f64>,
        /// Use r identical uniform valuations instead.
        #[arg(long)]
        uniform: bool,
    },
    /// A cut where r-1 players can be matched whatever tile is removed.
    Secretive { instance: PathBuf },
    /// A cut where r of r+1 players can be matched whoever is removed.
    Expelled { instance: PathBuf },
    /// Favourable divisions of a box instance and the counting bound.
    Hybrid {
        instance: PathBuf,
        /// Number of tiles, 2p-1 (default) or 2p-2.
        #[arg(long)]
        tiles: Option<usize>,
    },
    /// Facets of the chessboard complex on an m×n board, or of the join for prime p.
    ComplexFacets {
        m: Option<usize>,
        n: Option<usize>,
        #[arg(long, conflicts_with_all = ["m", "n"])]
        join: Option<usize>,
        /// Include the facets themselves.
        #[arg(long)]
        list: bool,
    },
    /// SVG of each player's preferred tiles over the triangle (three tiles only).
    Plot { instance: PathBuf },
}

fn overrides(c: &Common) -> Overrides {
    Overrides {
        grid: c.grid,
        tol: c.tol,
        refine: c.refine,
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var("EFL_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Invalid(format!("EFL_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(flag),
    }
}

fn runtime(start: Instant, c: &Common) -> u64 {
    if c.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(path: &Path, c: &Common) -> Result<Value, CliError> {
    let start = Instant::now();
    let file = instance::read(path)?;
    let tiles = file.body.tiles(c.seed)?;
    let params = resolve_params(&file.params, overrides(c), default_grid(tiles.r), default_refine(tiles.r));
    let search = search_envy_free(tiles.oracle.as_ref(), &params)?;
    let count = count_distinct_divisions(&search.divisions, efl_core::simplex::DEFAULT_CUT_TOL);
    let clusters: Vec<Value> = search
        .clusters
        .iter()
        .map(|cl| {
            json!({
                "cut": render::cut(&cl.cut),
                "hits": cl.hits,
                "allocations": cl.allocations.iter().map(|a| a.one_based()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let divisions: Vec<Value> = search
        .divisions
        .iter()
        .map(|d| json!({"cut": render::cut(&d.cut), "allocation": d.allocation.one_based()}))
        .collect();
    let warning = if count == 0 {
        Value::String(format!(
            "no envy-free division found at grid {} with {} refinement levels",
            params.grid, params.refine_levels
        ))
    } else {
        Value::Null
    };
    Ok(json!({
        "schema": instance::SCHEMA,
        "cut_clusters": clusters,
        "divisions": divisions,
        "count": count,
        "params": render::params(&params),
        "runtime_ms": runtime(start, c),
        "warning": warning,
    }))
}

fn extremal(r: usize, eps: &[f64], uniform: bool, c: &Common) -> Result<Value, CliError> {
    let start = Instant::now();
    let params = resolve_params(&ParamsFile::default(), overrides(c), default_grid(r), 0);
    let inst = if eps.is_empty() {
        ExtremalInstance::with_default_eps(r)?
    } else {
        ExtremalInstance::new(r, eps.to_vec())?
    };
    let oracle: Box<dyn PreferenceOracle> = if uniform {
        Box::new(utility_preferences(r, vec![Measure::uniform(); r])?)
    } else {
        Box::new(extremal_preferences(&inst))
    };
    let report = certify_extremal_structure(oracle.as_ref(), &params)?;
    Ok(json!({
        "schema": instance::SCHEMA,
        "r": r,
        "preferences": if uniform { "uniform" } else { "extremal" },
        "eps": inst.eps(),
        "cut_clusters": report.cut_clusters,
        "allocations_per_cluster": report.allocations_per_cluster,
        "cut": report.cut.as_ref().map(render::cut),
        "player_degrees": report.player_degrees,
        "tile_degrees": report.tile_degrees,
        "players_prefer_at_least_two": report.players_prefer_at_least_two,
        "tiles_preferred_by_at_least_two": report.tiles_preferred_by_at_least_two,
        "graph_is_cycle": report.graph_is_cycle,
        "cycle_length": report.cycle_length,
        "alternating_cycles": report.alternating_cycles,
        "verdict": report.conforms,
        "params": render::params(&params),
        "runtime_ms": runtime(start, c),
    }))
}

fn certify(path: &Path, mode: CertifyMode, c: &Common) -> Result<Value, CliError> {
    let start = Instant::now();
    let file = instance::read(path)?;
    let tiles = file.body.tiles(c.seed)?;
    let q = if tiles.r <= 3 { 30 } else { default_grid(tiles.r) };
    let params = resolve_params(&file.params, overrides(c), q, CERTIFY_REFINE);
    let found = find_certified_cut(tiles.oracle.as_ref(), mode, &params)?;
    let (cut, family, warning) = match &found {
        Some((cut, family)) => (render::cut(cut), json!(family.one_based()), Value::Null),
        None => (
            Value::Null,
            Value::Null,
            Value::String(format!(
                "no certified cut at grid {} with {} refinement levels",
                params.grid, params.refine_levels
            )),
        ),
    };
    Ok(json!({
        "schema": instance::SCHEMA,
        "mode": mode,
        "found": found.is_some(),
        "cut": cut,
        "family": family,
        "params": render::params(&params),
        "runtime_ms": runtime(start, c),
        "warning": warning,
    }))
}

fn hybrid(path: &Path, tiles: Option<usize>, c: &Common) -> Result<Value, CliError> {
    let start = Instant::now();
    let file = instance::read(path)?;
    let p = file
        .body
        .hybrid_p()
        .ok_or_else(|| CliError::Invalid("the `hybrid` command needs a hybrid instance".into()))?;
    let tiles = tiles.unwrap_or(2 * p.max(1) - 1);
    let default_q = match p {
        2 => 24,
        3 => 12,
        _ => tiles as u64,
    };
    let params = resolve_params(&file.params, overrides(c), default_q, 0);
    let inst = file.body.hybrid(params.grid)?;
    let search = search_favourable(&inst, &params, tiles)?;
    let bound = lower_bound(p)?;
    let ceiling = bound.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    let mut found = Vec::new();
    let mut colorings = Vec::new();
    for d in &search.divisions {
        found.push(Value::Object(render::favourable(d)));
        if d.boxes.tiles() == 2 * p - 1 {
            colorings.push(json!({
                "exhaustive": coloring_count(&d.boxes)?,
                "closed_form": closed_form_coloring_count(&d.boxes.profile()),
            }));
        } else {
            colorings.push(Value::Null);
        }
    }
    let count = search.divisions.len();
    Ok(json!({
        "schema": instance::SCHEMA,
        "p": p,
        "tiles": tiles,
        "equi_tol": inst.equi_tol(),
        "found": found,
        "count_distinct": count,
        "lower_bound": {
            "exact": bound.to_string(),
            "value": bound.to_f64(),
            "ceiling": ceiling,
        },
        "meets_bound": count as u64 >= ceiling,
        "colorings_per_division": colorings,
        "params": render::params(&params),
        "runtime_ms": runtime(start, c),
    }))
}

fn complex_facets(m: Option<usize>, n: Option<usize>, join: Option<usize>, list: bool) -> Result<Value, CliError> {
    if let Some(p) = join {
        return Ok(json!({
            "schema": instance::SCHEMA,
            "p": p,
            "board": [p, 2 * p.max(1) - 1],
            "facets": configuration_space_facets(p)?.to_string(),
            "formula": configuration_space_formula(p)?.to_string(),
        }));
    }
    let (Some(m), Some(n)) = (m, n) else {
        return Err(CliError::Invalid("give M and N, or --join P".into()));
    };
    let facets = chessboard_complex_facets(m, n)?;
    let mut v = json!({
        "schema": instance::SCHEMA,
        "m": m,
        "n": n,
        "count": facets.len(),
    });
    if list {
        v["facets"] = json!(facets
            .iter()
            .map(|f| f.rows.iter().map(|r| r + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    Ok(v)
}

fn plot_svg(path: &Path, c: &Common) -> Result<String, CliError> {
    let file = instance::read(path)?;
    let tiles = file.body.tiles(c.seed)?;
    if tiles.r != 3 {
        return Err(CliError::Invalid("plot supports r=3 only".into()));
    }
    let oracle = tiles.oracle.as_ref();
    let cuts = if oracle.players() == 3 {
        let params = resolve_params(&file.params, overrides(c), default_grid(3), default_refine(3));
        search_envy_free(oracle, &params)?
            .clusters
            .into_iter()
            .map(|cl| cl.cut)
            .collect()
    } else {
        Vec::new()
    };
    Ok(plot::render(oracle, &cuts))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    if let Some(n) = threads(c.threads)? {
        if n == 0 {
            return Err(CliError::Invalid("thread count must be positive".into()));
        }
        // a second call in one process keeps the first pool, which is fine for a CLI
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let value = match &cli.command {
        Command::Solve { instance } => solve(instance, c)?,
        Command::Extremal { r, eps, uniform } => extremal(*r, eps, *uniform, c)?,
        Command::Secretive { instance } => certify(instance, CertifyMode::Secretive, c)?,
        Command::Expelled { instance } => certify(instance, CertifyMode::Expelled, c)?,
        Command::Hybrid { instance, tiles } => hybrid(instance, *tiles, c)?,
        Command::ComplexFacets { m, n, join, list } => complex_facets(*m, *n, *join, *list)?,
        Command::Plot { instance } => {
            let svg = plot_svg(instance, c)?;
            return emit(&svg, c.out.as_deref());
        }
    };
    emit(&render::to_text(value), c.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
