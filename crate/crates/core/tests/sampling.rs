//! Distributional checks of the hyperbolic Poisson sampler.

use std::f64::consts::TAU;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use perclab::hyperbolic::poisson::disc_area;
use perclab::hyperbolic::{sample_poisson_hyperbolic, DensityWeight};

/// Kolmogorov-Smirnov statistic of `xs` against a continuous CDF.
fn ks(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn counts_have_poisson_mean_and_variance() {
    let (lambda, radius) = (2.0, 2.5);
    let mean = lambda * disc_area(radius);
    let counts: Vec<f64> = (0..400)
        .map(|s| sample_poisson_hyperbolic(lambda, radius, s, None).unwrap().len() as f64)
        .collect();
    let m = counts.iter().sum::<f64>() / counts.len() as f64;
    let var = counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!((m - mean).abs() < 4.0 * (mean / 400.0).sqrt(), "{m} vs {mean}");
    assert!((var / mean - 1.0).abs() < 0.3, "variance ratio {}", var / mean);
}

#[test]
fn radii_and_angles_follow_hyperbolic_area() {
    let radius = 3.0;
    let s = sample_poisson_hyperbolic(30.0, radius, 4, None).unwrap();
    let n = s.len() as f64;
    // 99.9% critical value of the KS statistic.
    let crit = 1.95 / n.sqrt();
    let rho: Vec<f64> = s.polar.iter().map(|p| p.0).collect();
    let d = ks(rho, |r| (r.cosh() - 1.0) / (radius.cosh() - 1.0));
    assert!(d < crit, "radial KS {d} vs {crit}");
    let theta: Vec<f64> = s.polar.iter().map(|p| p.1).collect();
    let d = ks(theta, |t| t / TAU);
    assert!(d < crit, "angular KS {d} vs {crit}");
}

#[test]
fn weighted_angles_follow_the_density() {
    let (amp, freq) = (0.5, 3u32);
    let w = DensityWeight::Wave { amp, freq };
    let bins = 12;
    let mut observed = vec![0.0; bins];
    for seed in 0..20 {
        for &(_, th) in &sample_poisson_hyperbolic(5.0, 3.0, seed, Some(w)).unwrap().polar {
            observed[((th / TAU) * bins as f64) as usize % bins] += 1.0;
        }
    }
    let total: f64 = observed.iter().sum();
    // Integral of 1 + amp cos(freq θ) over each bin.
    let mass = |a: f64, b: f64| (b - a) + amp / freq as f64 * ((freq as f64 * b).sin() - (freq as f64 * a).sin());
    let chi2: f64 = (0..bins)
        .map(|k| {
            let (a, b) = (TAU * k as f64 / bins as f64, TAU * (k + 1) as f64 / bins as f64);
            let expected = total * mass(a, b) / TAU;
            (observed[k] - expected).powi(2) / expected
        })
        .sum();
    let crit = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(chi2 < crit, "chi-square {chi2} vs {crit}");
}
