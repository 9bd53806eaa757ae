//! Poisson processes in a hyperbolic disc of radius `R`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::HyperbolicError;

/// A bounded density `w` relative to hyperbolic area, with `1/M <= w <= M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityWeight {
    Uniform,
    Constant(f64),
    /// `1 + amp cos(freq θ)`, with `amp <= 1/2` so that `M = 2`.
    Wave { amp: f64, freq: u32 },
}

impl DensityWeight {
    pub fn bound(&self) -> f64 {
        match *self {
            DensityWeight::Uniform => 1.0,
            DensityWeight::Constant(k) => k.max(1.0 / k),
            DensityWeight::Wave { .. } => 2.0,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            DensityWeight::Uniform => 1.0,
            DensityWeight::Constant(k) => k,
            DensityWeight::Wave { amp, freq } => 1.0 + amp * (freq as f64 * theta).cos(),
        }
    }

    fn is_one(&self) -> bool {
        matches!(*self, DensityWeight::Uniform) || matches!(*self, DensityWeight::Constant(k) if k == 1.0)
    }
}

impl fmt::Display for DensityWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityWeight::Uniform => write!(f, "uniform"),
            DensityWeight::Constant(k) => write!(f, "const:{k}"),
            DensityWeight::Wave { amp, freq } => write!(f, "wave:{amp}:{freq}"),
        }
    }
}

impl FromStr for DensityWeight {
    type Err = HyperbolicError;

    /// `uniform`, `const:<k>` or `wave:<amp>:<freq>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HyperbolicError::BadWeight(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["uniform"] => Ok(DensityWeight::Uniform),
            ["const", k] => {
                let k: f64 = k.parse().map_err(|_| bad())?;
                if k > 0.0 && k.is_finite() {
                    Ok(DensityWeight::Constant(k))
                } else {
                    Err(bad())
                }
            }
            ["wave", amp, freq] => {
                let amp: f64 = amp.parse().map_err(|_| bad())?;
                let freq: u32 = freq.parse().map_err(|_| bad())?;
                if (0.0..=0.5).contains(&amp) {
                    Ok(DensityWeight::Wave { amp, freq })
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSample {
    pub lambda: f64,
    pub radius: f64,
    /// Hyperbolic polar coordinates `(ρ, θ)`.
    pub polar: Vec<(f64, f64)>,
    pub seed: u64,
}

impl PoissonSample {
    pub fn len(&self) -> usize {
        self.polar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polar.is_empty()
    }

    /// Euclidean coordinates in the Poincaré disc.
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.polar
            .iter()
            .map(|&(rho, theta)| {
                let t = (rho / 2.0).tanh();
                [t * theta.cos(), t * theta.sin()]
            })
            .collect()
    }
}

/// Hyperbolic area of a disc of radius `R`.
pub fn disc_area(radius: f64) -> f64 {
    TAU * (radius.cosh() - 1.0)
}

/// Radius with `P(ρ <= r) = (cosh r - 1) / (cosh R - 1)` at level `u`.
pub fn radius_quantile(u: f64, radius: f64) -> f64 {
    2.0 * (u.sqrt() * (radius / 2.0).sinh()).asinh()
}

/// Poisson process of intensity `λ w` (per unit hyperbolic area) on the
/// disc of radius `R`. Weighted processes thin a process of intensity
/// `λ M`.
pub fn sample_poisson_hyperbolic(
    lambda: f64,
    radius: f64,
    seed: u64,
    weight: Option<DensityWeight>,
) -> Result<PoissonSample, HyperbolicError> {
    use rand::SeedableRng;
    if !(lambda > 0.0) || !(radius >= 0.0) || !lambda.is_finite() || !radius.is_finite() {
        return Err(HyperbolicError::BadParameters { lambda, radius });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = weight.filter(|w| !w.is_one());
    let bound = weight.map_or(1.0, |w| w.bound());
    let mean = lambda * bound * disc_area(radius);
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("positive mean").sample(&mut rng) as usize
    } else {
        0
    };
    let mut polar = Vec::with_capacity(count);
    for _ in 0..count {
        let rho = radius_quantile(rng.gen::<f64>(), radius);
        let theta = rng.gen::<f64>() * TAU;
        if let Some(w) = weight {
            if rng.gen::<f64>() * bound >= w.eval(theta) {
                continue;
            }
        }
        polar.push((rho, theta));
    }
    Ok(PoissonSample {
        lambda,
        radius,
        polar,
        seed,
    })
}
