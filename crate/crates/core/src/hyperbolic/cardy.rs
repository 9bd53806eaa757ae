//! Crossing probability of a conformal quad with cross-ratio `η`:
//! `Γ(2/3) / (Γ(1/3) Γ(4/3)) η^{1/3} ₂F₁(1/3, 2/3; 4/3; η)`.
//!
//! This is the regularized incomplete beta function `I_η(1/3, 1/3)`, so
//! `P(η) + P(1 - η) = 1`. The series is summed for `η <= 1/2` and the
//! reflection is used above.

use statrs::function::gamma::gamma;

fn hypergeometric_series(z: f64) -> f64 {
    // ₂F₁(1/3, 2/3; 4/3; z)
    let (a, b, c) = (1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..10_000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn lower_half(eta: f64) -> f64 {
    let norm = gamma(2.0 / 3.0) / (gamma(1.0 / 3.0) * gamma(4.0 / 3.0));
    norm * eta.cbrt() * hypergeometric_series(eta)
}

pub fn cardy(eta: f64) -> f64 {
    let eta = eta.clamp(0.0, 1.0);
    if eta == 0.0 {
        0.0
    } else if eta == 1.0 {
        1.0
    } else if eta <= 0.5 {
        lower_half(eta)
    } else {
        1.0 - lower_half(1.0 - eta)
    }
}
