//! Dispatch from a configuration to an experiment and its CSV report.
//!
//! Every trial-based row ends with `seed,trial_start,trial_end`: the master
//! seed and the half-open trial range, which is all that is needed to replay
//! the row through [`crate::harness::seed::trial_seed`].

use std::fmt::Write as _;

use super::config::{ExperimentConfig, ExperimentKind, GraphSection};
use super::error::HarnessError;
use super::runner::Runner;
use super::stats::EstimateWithCI;
use crate::harmonic::classify_walk;
use crate::hyperbolic::{lambda_ladder, DensityWeight, IdealBoundaryQuad, RadiusRule, LADDER_HEADER};
use crate::network::{GraphFile, TwoTerminalGraph};
use crate::percolation::{
    boundary_arc_crossing, macroscopic_cluster_count, one_arm_curve, pc_sweep, CrossingDomain,
};
use crate::tiling::{crossing_probability_tiling, tile_from_two_terminal, SquareTiling};
use crate::triangulation::Triangulation;

/// Output of one run: the main CSV plus named sidecar files.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: ExperimentKind,
    pub csv: String,
    /// `(suffix, contents)`; the CLI writes each next to the main output as
    /// `<stem>.<suffix>`.
    pub sidecars: Vec<(String, String)>,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
}

fn graph(cfg: &ExperimentConfig) -> Result<&GraphSection, HarnessError> {
    cfg.graph
        .as_ref()
        .ok_or_else(|| HarnessError::Config("[graph]: section required".into()))
}

fn triangulation(cfg: &ExperimentConfig) -> Result<Triangulation, HarnessError> {
    match graph(cfg)?.load()? {
        GraphFile::Triangulation(t) => Ok(t),
        GraphFile::TwoTerminal(_) => Err(HarnessError::Config(
            "[graph]: experiment needs a triangulation, not a two-terminal graph".into(),
        )),
    }
}

fn replay(s: &mut String, seed: u64, trials: u64) {
    let _ = write!(s, ",{seed},0,{trials}");
}

fn estimate_cols(s: &mut String, e: &EstimateWithCI) {
    let _ = write!(
        s,
        ",{},{},{},{},{}",
        e.trials, e.successes, e.estimate, e.ci_lo, e.ci_hi
    );
}

/// Tiling for `cross-tiling`: a saved file, or the BSST tiling of the graph
/// (a triangulation is tiled from vertex 0 to its boundary).
pub fn tiling_for(cfg: &ExperimentConfig) -> Result<SquareTiling, HarnessError> {
    if let Some(path) = cfg.cross_tiling.as_ref().and_then(|c| c.tiling.as_ref()) {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        return Ok(SquareTiling::from_json(&text)?);
    }
    let g = match graph(cfg)?.load()? {
        GraphFile::TwoTerminal(g) => g,
        GraphFile::Triangulation(t) => TwoTerminalGraph::from_triangulation(&t, 0),
    };
    Ok(tile_from_two_terminal(&g, crate::harmonic::DEFAULT_TOL)?)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let runner = Runner::new(cfg.run.workers).map_err(|e| HarnessError::Config(format!("run.workers: {e}")))?;
    let (seed, trials) = (cfg.run.seed, cfg.run.trials);
    let mut csv = String::new();
    let mut sidecars = Vec::new();
    let mut summary = Vec::new();
    match cfg.run.experiment {
        ExperimentKind::OneArm => {
            let p = cfg.one_arm.as_ref().expect("validated");
            let t = triangulation(cfg)?;
            let curve = one_arm_curve(&t, p.center, &p.radii, p.p, trials, seed, &runner)?;
            csv.push_str("r,p,trials,successes,estimate,ci_lo,ci_hi,seed,trial_start,trial_end\n");
            for (r, e) in &curve {
                let _ = write!(csv, "{r},{}", p.p);
                estimate_cols(&mut csv, e);
                replay(&mut csv, seed, trials);
                csv.push('\n');
            }
        }
        ExperimentKind::ArcCross => {
            let p = cfg.arc_cross.as_ref().expect("validated");
            let t = triangulation(cfg)?;
            let e = boundary_arc_crossing(&t, p.center, p.r, p.arcs, p.p, trials, seed, &runner)?;
            csv.push_str("r,p,trials,successes,estimate,ci_lo,ci_hi,seed,trial_start,trial_end\n");
            let _ = write!(csv, "{},{}", p.r, p.p);
            estimate_cols(&mut csv, &e);
            replay(&mut csv, seed, trials);
            csv.push('\n');
        }
        ExperimentKind::MacroClusters => {
            let p = cfg.macro_clusters.as_ref().expect("validated");
            let t = triangulation(cfg)?;
            let m = macroscopic_cluster_count(&t, p.center, p.r, p.p, trials, seed, &runner)?;
            csv.push_str("r,p,trials,mean,std_dev,ci_lo,ci_hi,seed,trial_start,trial_end\n");
            let _ = write!(
                csv,
                "{},{},{},{},{},{},{}",
                p.r, p.p, m.samples, m.mean, m.std_dev, m.ci_lo, m.ci_hi
            );
            replay(&mut csv, seed, trials);
            csv.push('\n');
        }
        ExperimentKind::PcSweep => {
            let p = cfg.pc_sweep.as_ref().expect("validated");
            let g = graph(cfg)?;
            let domains = p
                .sizes
                .iter()
                .map(|&n| Ok((n, g.spec_with_size(Some(n))?.crossing_domain()?)))
                .collect::<Result<Vec<(usize, CrossingDomain)>, HarnessError>>()?;
            let sweep = pc_sweep(&domains, &p.p_grid, trials, seed, p.bootstrap, &runner)?;
            csv.push_str(
                "size,p,trials,crossing,crossing_lo,crossing_hi,arm_radius,one_arm,one_arm_half,seed,trial_start,trial_end\n",
            );
            for row in &sweep.rows {
                let _ = write!(
                    csv,
                    "{},{},{},{},{},{},{},{},{}",
                    row.size,
                    row.p,
                    row.crossing.trials,
                    row.crossing.estimate,
                    row.crossing.ci_lo,
                    row.crossing.ci_hi,
                    row.arm_radius,
                    row.one_arm.estimate,
                    row.one_arm_half.estimate
                );
                replay(&mut csv, seed, trials);
                csv.push('\n');
            }
            let mut pc = String::from("estimator,value,ci_lo,ci_hi\n");
            let na = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), |v| v.to_string());
            match &sweep.pc_crossing {
                Some(e) => {
                    let _ = writeln!(pc, "crossing,{},{},{}", e.value, e.ci_lo, e.ci_hi);
                }
                None => pc.push_str("crossing,NA,NA,NA\n"),
            }
            let _ = writeln!(pc, "arm,{},NA,NA", na(sweep.pc_arm));
            summary.push(format!(
                "pc (crossing) = {}, pc (arm) = {}",
                na(sweep.pc_crossing.as_ref().map(|e| e.value)),
                na(sweep.pc_arm)
            ));
            sidecars.push(("pc.csv".to_string(), pc));
        }
        ExperimentKind::CrossTiling => {
            let p = cfg.cross_tiling.as_ref().expect("validated");
            let tiling = tiling_for(cfg)?;
            let e = crossing_probability_tiling(&tiling, p.p, trials, seed, &runner)?;
            csv.push_str("p,trials,successes,estimate,ci_lo,ci_hi,seed,trial_start,trial_end,aspect,tiles\n");
            let _ = write!(csv, "{}", p.p);
            estimate_cols(&mut csv, &e);
            replay(&mut csv, seed, trials);
            let _ = writeln!(csv, ",{},{}", tiling.height / tiling.width, tiling.len());
        }
        ExperimentKind::Hvoronoi => {
            let h = cfg.hvoronoi.as_ref().expect("validated");
            let quad = IdealBoundaryQuad::new(h.a, h.b, h.c, h.d)?;
            let weight = h
                .weight
                .as_deref()
                .map(str::parse::<DensityWeight>)
                .transpose()?;
            let rule = h.radius.map_or(RadiusRule::Default, RadiusRule::Fixed);
            let rows = lambda_ladder(&quad, &h.lambdas, rule, trials, seed, h.p, weight, &runner)?;
            let _ = writeln!(csv, "{LADDER_HEADER},seed,trial_start,trial_end");
            for row in &rows {
                csv.push_str(&row.csv());
                replay(&mut csv, seed, trials);
                csv.push('\n');
            }
        }
        ExperimentKind::Resistance => {
            let p = cfg.resistance.as_ref().expect("validated");
            let t = triangulation(cfg)?;
            let (curve, verdict) = classify_walk(&t, p.center, p.r_max)?;
            csv = curve.to_csv();
            summary.push(format!("verdict: {verdict}"));
        }
    }
    Ok(Report {
        experiment: cfg.run.experiment,
        csv,
        sidecars,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_arm_config(workers: usize) -> ExperimentConfig {
        let text = format!(
            r#"
[run]
experiment = "one-arm"
seed = 3
trials = 200
workers = {workers}

[graph]
family = "triangular-lattice-disk"
size = 6

[one-arm]
radii = [1, 2, 4]
"#
        );
        ExperimentConfig::from_toml(&text).unwrap()
    }

    #[test]
    fn one_arm_rows_and_replay_columns() {
        let r = run(&one_arm_config(1)).unwrap();
        let lines: Vec<&str> = r.csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,0.5,200,"));
        assert!(lines[1].ends_with(",3,0,200"));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        assert_eq!(run(&one_arm_config(1)).unwrap().csv, run(&one_arm_config(3)).unwrap().csv);
    }
}
