use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perclab::generators::Family;
use perclab::harmonic::DEFAULT_TOL;
use perclab::harness::config::{
    ArcCrossParams, CrossTilingParams, GraphSection, HvoronoiParams, MacroClusterParams, OneArmParams,
    PcSweepParams, ResistanceParams,
};
use perclab::harness::render;
use perclab::harness::seed;
use perclab::harness::{run, ExperimentConfig, ExperimentKind, HarnessError};
use perclab::hyperbolic::{build_tessellation, sample_poisson_hyperbolic, IdealBoundaryQuad, RadiusRule};
use perclab::network::{GraphFile, TwoTerminalGraph};
use perclab::packing::{pack, validate_packing, CirclePacking, PackingOptions};
use perclab::percolation::{clusters, sample_sites};
use perclab::tiling::{tile_from_two_terminal, validate_tiling, SquareTiling, TileColoring};
use perclab::triangulation::Triangulation;

#[derive(Parser)]
#[command(name = "perclab", version, about = "Percolation, packing and tiling experiments")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trials.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// A graph from a file or from a generator.
#[derive(Args, Clone, Default)]
struct GraphArgs {
    /// Graph file (triangulation or two-terminal format).
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    width: Option<usize>,
    /// Seed of randomized generators.
    #[arg(long)]
    graph_seed: Option<u64>,
}

impl GraphArgs {
    fn section(&self) -> GraphSection {
        GraphSection {
            path: self.graph.clone(),
            family: self.family,
            size: self.size,
            degree: self.degree,
            width: self.width,
            seed: self.graph_seed,
        }
    }
}

#[derive(Args, Clone)]
struct QuadArgs {
    /// Boundary angles a,b,c,d in counterclockwise order.
    #[arg(long, value_delimiter = ',', num_args = 4, conflicts_with = "eta")]
    angles: Option<Vec<f64>>,
    /// Symmetric quad with this cross-ratio.
    #[arg(long)]
    eta: Option<f64>,
}

impl QuadArgs {
    fn quad(&self) -> Result<IdealBoundaryQuad, HarnessError> {
        match (&self.angles, self.eta) {
            (Some(a), _) => Ok(IdealBoundaryQuad::new(a[0], a[1], a[2], a[3])?),
            (None, Some(eta)) => Ok(IdealBoundaryQuad::symmetric_with_cross_ratio(eta)?),
            (None, None) => Ok(IdealBoundaryQuad::symmetric_with_cross_ratio(0.5)?),
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::ALL
        .iter()
        .copied()
        .find(|f| f.tag() == s)
        .ok_or_else(|| {
            let tags: Vec<&str> = Family::ALL.iter().map(|f| f.tag()).collect();
            format!("unknown family {s:?}; expected one of {}", tags.join(", "))
        })
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in the text format.
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Resistance curve from a center to the spheres of a triangulation.
    Resistance {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        center: usize,
        #[arg(long)]
        r_max: usize,
    },
    /// Circle packing of a triangulation (JSON).
    Pack {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Square tiling of a two-terminal graph, or of a triangulation from a
    /// root to its boundary (JSON).
    Tile {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Left-right crossing probability of a square tiling.
    CrossTiling {
        #[command(flatten)]
        graph: GraphArgs,
        /// Tiling JSON instead of a graph.
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// One-arm probabilities at several radii.
    OneArm {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        center: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Crossing and one-arm curves over a grid of p, with p_c estimates.
    PcSweep {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        p_grid: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Crossing probability between opposite arcs of a ball's boundary.
    ArcCross {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        center: usize,
        #[arg(long)]
        r: usize,
        /// Arc start indices on the boundary cycle; quarters when absent.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        arcs: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Mean number of clusters of diameter at least r/2 in a ball.
    MacroClusters {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        center: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Poisson-Voronoi crossing estimates over a ladder of intensities.
    Hvoronoi {
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        /// Fixed truncation radius; the default rule when absent.
        #[arg(long)]
        radius: Option<f64>,
        /// `uniform`, `const:<k>` or `wave:<amp>:<freq>`.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// SVG of a packing (JSON file, or packed from a graph).
    RenderPacking {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        packing: Option<PathBuf>,
    },
    /// SVG of a tiling, optionally colored at probability p.
    RenderTiling {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        p: Option<f64>,
    },
    /// SVG of one tessellation's sites, colored at probability p.
    RenderVoronoi {
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Packing and tiling of the same ball of a regular triangulation.
    RenderFigure1 {
        #[arg(long, default_value_t = 7)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// SVG of the open clusters of one configuration on a packing.
    RenderClusters {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Run an experiment from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn triangulation(g: &GraphArgs) -> Result<Triangulation, HarnessError> {
    match g.section().load()? {
        GraphFile::Triangulation(t) => Ok(t),
        GraphFile::TwoTerminal(_) => Err(HarnessError::Config("graph: a triangulation is required".into())),
    }
}

fn packing_of(t: &Triangulation) -> Result<CirclePacking, HarnessError> {
    let p = pack(t, None, PackingOptions::default())?;
    let report = validate_packing(&p, t);
    eprintln!(
        "angle error {:e}, tangency error {:e}, overlap {:e}, sweeps {}",
        report.angle_error, report.tangency_error, report.overlap, p.sweeps
    );
    Ok(p)
}

/// Runs a configured experiment and writes the CSV, sidecars and the
/// replay config.
fn execute(cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    let report = run(cfg)?;
    for line in &report.summary {
        eprintln!("{line}");
    }
    write_out(cfg.run.out.as_deref(), &report.csv)?;
    if let Some(out) = &cfg.run.out {
        for (suffix, text) in &report.sidecars {
            write_out(Some(&out.with_extension(suffix)), text)?;
        }
        write_out(Some(&out.with_extension("config.toml")), &cfg.to_toml())?;
    }
    Ok(())
}

fn experiment(cli: &Cli, kind: ExperimentKind, trials: u64, graph: Option<&GraphArgs>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, cli.seed, trials);
    cfg.run.workers = cli.workers;
    cfg.run.out = cli.out.clone();
    cfg.graph = graph.map(GraphArgs::section);
    cfg
}

fn dispatch(cli: &Cli) -> Result<(), HarnessError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate { graph } => {
            let g = graph.section().spec_with_size(None)?.generate()?;
            write_out(out, &g.to_text())
        }
        Command::Resistance { graph, center, r_max } => {
            let mut cfg = experiment(cli, ExperimentKind::Resistance, 1, Some(graph));
            cfg.resistance = Some(ResistanceParams {
                center: *center,
                r_max: *r_max,
            });
            execute(&cfg)
        }
        Command::Pack { graph, tol } => {
            let t = triangulation(graph)?;
            let p = pack(
                &t,
                None,
                PackingOptions {
                    tol: *tol,
                    ..PackingOptions::default()
                },
            )?;
            let report = validate_packing(&p, &t);
            eprintln!(
                "angle error {:e}, tangency error {:e}, overlap {:e}, sweeps {}",
                report.angle_error, report.tangency_error, report.overlap, p.sweeps
            );
            write_out(out, &p.to_json())
        }
        Command::Tile { graph, root } => {
            let g = match graph.section().load()? {
                GraphFile::TwoTerminal(g) => g,
                GraphFile::Triangulation(t) => TwoTerminalGraph::from_triangulation(&t, *root),
            };
            let tiling = tile_from_two_terminal(&g, DEFAULT_TOL)?;
            let v = validate_tiling(&tiling);
            eprintln!(
                "{} tiles, {}x{}, corner incidence {} ({}), area residual {:e}, overlaps {}",
                tiling.len(),
                tiling.width,
                tiling.height,
                v.max_corner_incidence,
                if v.pass { "pass" } else { "fail" },
                v.area_residual,
                v.overlapping_pairs
            );
            write_out(out, &tiling.to_json())
        }
        Command::CrossTiling { graph, tiling, p, trials } => {
            let g = tiling.is_none().then_some(graph);
            let mut cfg = experiment(cli, ExperimentKind::CrossTiling, *trials, g);
            cfg.cross_tiling = Some(CrossTilingParams {
                tiling: tiling.clone(),
                p: *p,
            });
            execute(&cfg)
        }
        Command::OneArm {
            graph,
            center,
            radii,
            p,
            trials,
        } => {
            let mut cfg = experiment(cli, ExperimentKind::OneArm, *trials, Some(graph));
            cfg.one_arm = Some(OneArmParams {
                center: *center,
                radii: radii.clone(),
                p: *p,
            });
            execute(&cfg)
        }
        Command::PcSweep {
            graph,
            sizes,
            p_grid,
            bootstrap,
            trials,
        } => {
            let mut cfg = experiment(cli, ExperimentKind::PcSweep, *trials, Some(graph));
            cfg.pc_sweep = Some(PcSweepParams {
                sizes: sizes.clone(),
                p_grid: p_grid.clone(),
                bootstrap: *bootstrap,
            });
            execute(&cfg)
        }
        Command::ArcCross {
            graph,
            center,
            r,
            arcs,
            p,
            trials,
        } => {
            let mut cfg = experiment(cli, ExperimentKind::ArcCross, *trials, Some(graph));
            cfg.arc_cross = Some(ArcCrossParams {
                center: *center,
                r: *r,
                arcs: arcs.as_ref().map(|a| [a[0], a[1], a[2], a[3]]),
                p: *p,
            });
            execute(&cfg)
        }
        Command::MacroClusters {
            graph,
            center,
            r,
            p,
            trials,
        } => {
            let mut cfg = experiment(cli, ExperimentKind::MacroClusters, *trials, Some(graph));
            cfg.macro_clusters = Some(MacroClusterParams {
                center: *center,
                r: *r,
                p: *p,
            });
            execute(&cfg)
        }
        Command::Hvoronoi {
            quad,
            lambdas,
            radius,
            weight,
            p,
            trials,
        } => {
            let q = quad.quad()?;
            let [a, b, c, d] = q.angles();
            let mut cfg = experiment(cli, ExperimentKind::Hvoronoi, *trials, None);
            cfg.hvoronoi = Some(HvoronoiParams {
                a,
                b,
                c,
                d,
                lambdas: lambdas.clone(),
                p: *p,
                weight: weight.clone(),
                radius: *radius,
            });
            execute(&cfg)
        }
        Command::RenderPacking { graph, packing } => {
            let p = match packing {
                Some(path) => CirclePacking::from_json(&read(path)?)?,
                None => packing_of(&triangulation(graph)?)?,
            };
            write_out(out, &render::render_packing(&p))
        }
        Command::RenderTiling { tiling, p } => {
            let t = SquareTiling::from_json(&read(tiling)?)?;
            let coloring = p.map(|p| TileColoring::sample(t.len(), p, seed::trial_seed(cli.seed, "render", 0)));
            write_out(out, &render::render_tiling(&t, coloring.as_ref()))
        }
        Command::RenderVoronoi { quad, lambda, radius, p } => {
            let q = quad.quad()?;
            let r = radius.unwrap_or_else(|| RadiusRule::Default.radius(*lambda));
            let s = seed::trial_seed(cli.seed, "render", 0);
            let sample = sample_poisson_hyperbolic(*lambda, r, s, None)?;
            let v = build_tessellation(&sample, &q);
            let colors = v.colors(*p, seed::substream(s, "colors"));
            write_out(out, &render::render_tessellation(&v, Some(&colors)))
        }
        Command::RenderFigure1 { degree, r } => {
            let t = perclab::generators::regular_hyperbolic_triangulation(*degree, *r)?;
            let p = packing_of(&t)?;
            let tiling = tile_from_two_terminal(&TwoTerminalGraph::from_triangulation(&t, 0), DEFAULT_TOL)?;
            write_out(out, &render::render_pair(&p, &tiling))
        }
        Command::RenderClusters { graph, p } => {
            let t = triangulation(graph)?;
            let packing = packing_of(&t)?;
            let config = sample_sites(t.vertex_count(), *p, seed::trial_seed(cli.seed, "render", 0));
            let labels = clusters(t.rotation(), &config);
            write_out(out, &render::render_clusters(&packing, &config, &labels))
        }
        Command::Run { config } => {
            let mut cfg = ExperimentConfig::from_toml(&read(config)?)?;
            if cli.workers != 1 {
                cfg.run.workers = cli.workers;
            }
            if cli.out.is_some() {
                cfg.run.out = cli.out.clone();
            }
            execute(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
