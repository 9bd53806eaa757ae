//! Crossing estimates between arcs A and C, and λ-ladders.

use std::fmt::Write as _;

use super::cardy::cardy;
use super::poisson::{sample_poisson_hyperbolic, DensityWeight};
use super::voronoi::build_tessellation;
use super::{HyperbolicError, IdealBoundaryQuad};
use crate::harness::runner::Runner;
use crate::harness::seed;
use crate::harness::stats::EstimateWithCI;

/// Truncation radius as a function of intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    /// `R = max(3, ln(λ) / 2 + 1.5)`.
    Default,
    Fixed(f64),
}

impl RadiusRule {
    pub fn radius(&self, lambda: f64) -> f64 {
        match *self {
            RadiusRule::Default => (0.5 * lambda.ln() + 1.5).max(3.0),
            RadiusRule::Fixed(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicEstimate {
    pub lambda: f64,
    pub radius: f64,
    pub eta: f64,
    pub estimate: EstimateWithCI,
    pub excluded: u64,
    /// Predicted A-C crossing probability, `cardy(1 - η)`.
    pub cardy: f64,
}

impl HyperbolicEstimate {
    pub fn gap(&self) -> f64 {
        (self.estimate.estimate - self.cardy).abs()
    }
}

/// Outcome of one trial: `None` when arc A or C touches no site.
pub fn trial(
    quad: &IdealBoundaryQuad,
    lambda: f64,
    radius: f64,
    p: f64,
    weight: Option<DensityWeight>,
    trial_seed: u64,
) -> Result<Option<bool>, HyperbolicError> {
    let sample = sample_poisson_hyperbolic(lambda, radius, trial_seed, weight)?;
    let tess = build_tessellation(&sample, quad);
    let colors = tess.colors(p, seed::substream(trial_seed, "colors"));
    Ok(tess.crossing(0, 2, |s| colors[s]))
}

#[allow(clippy::too_many_arguments)]
pub fn crossing_probability_hyperbolic(
    quad: &IdealBoundaryQuad,
    lambda: f64,
    radius: f64,
    trials: u64,
    seed: u64,
    p: f64,
    weight: Option<DensityWeight>,
    runner: &Runner,
) -> Result<HyperbolicEstimate, HyperbolicError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HyperbolicError::BadProbability(p));
    }
    if !(lambda > 0.0 && radius > 0.0) {
        return Err(HyperbolicError::BadParameters { lambda, radius });
    }
    let outcomes = runner.map(0..trials, |i| {
        trial(quad, lambda, radius, p, weight, seed::trial_seed(seed, "hvoronoi", i))
    });
    let outcomes: Vec<Option<bool>> = outcomes.into_iter().collect::<Result<_, _>>()?;
    let excluded = outcomes.iter().filter(|o| o.is_none()).count() as u64;
    if excluded == trials && trials > 0 {
        return Err(HyperbolicError::AllExcluded);
    }
    let eta = quad.cross_ratio();
    Ok(HyperbolicEstimate {
        lambda,
        radius,
        eta,
        estimate: EstimateWithCI::from_outcomes(outcomes.into_iter().flatten()),
        excluded,
        cardy: cardy(1.0 - eta),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow(pub HyperbolicEstimate);

pub const LADDER_HEADER: &str = "lambda,R,eta,trials,successes,estimate,ci_lo,ci_hi,cardy,gap,excluded_trials";

impl LadderRow {
    pub fn csv(&self) -> String {
        let h = &self.0;
        let e = &h.estimate;
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            h.lambda,
            h.radius,
            h.eta,
            e.trials,
            e.successes,
            e.estimate,
            e.ci_lo,
            e.ci_hi,
            h.cardy,
            h.gap(),
            h.excluded
        );
        s
    }
}

#[allow(clippy::too_many_arguments)]
pub fn lambda_ladder(
    quad: &IdealBoundaryQuad,
    lambdas: &[f64],
    rule: RadiusRule,
    trials: u64,
    seed: u64,
    p: f64,
    weight: Option<DensityWeight>,
    runner: &Runner,
) -> Result<Vec<LadderRow>, HyperbolicError> {
    if lambdas.is_empty() || lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HyperbolicError::BadLadder);
    }
    lambdas
        .iter()
        .map(|&l| {
            crossing_probability_hyperbolic(quad, l, rule.radius(l), trials, seed, p, weight, runner).map(LadderRow)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn all_black_crosses() {
        let q = IdealBoundaryQuad::new(0.0, PI / 2.0, PI, 1.5 * PI).unwrap();
        let e = crossing_probability_hyperbolic(&q, 5.0, 2.0, 20, 1, 1.0, None, &Runner::serial()).unwrap();
        assert_eq!(e.estimate.estimate, 1.0);
        assert!((e.cardy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn default_rule() {
        assert_eq!(RadiusRule::Default.radius(1.0), 3.0);
        assert!((RadiusRule::Default.radius(200.0) - (0.5 * 200f64.ln() + 1.5)).abs() < 1e-15);
    }
}
