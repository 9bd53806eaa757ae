//! Poisson-Voronoi percolation in the Poincaré disc.

pub mod cardy;
pub mod experiment;
pub mod poisson;
pub mod voronoi;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

pub use cardy::cardy;
pub use experiment::{
    crossing_probability_hyperbolic, lambda_ladder, HyperbolicEstimate, LadderRow, RadiusRule, LADDER_HEADER,
};
pub use poisson::{sample_poisson_hyperbolic, DensityWeight, PoissonSample};
pub use voronoi::{build_tessellation, VoronoiTessellation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("boundary points {0:?} are not strictly cyclically ordered")]
    NotCyclic([f64; 4]),
    #[error("intensity and truncation radius must be positive (got λ = {lambda}, R = {radius})")]
    BadParameters { lambda: f64, radius: f64 },
    #[error("invalid density weight `{0}`")]
    BadWeight(String),
    #[error("cross-ratio {0} outside (0, 1)")]
    BadCrossRatio(f64),
    #[error("Möbius parameter must lie inside the unit disc")]
    BadMobius,
    #[error("λ list must be nonempty and increasing")]
    BadLadder,
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("every trial had an empty arc incidence set")]
    AllExcluded,
}

/// Four points on the ideal boundary, given by angles, with arcs
/// `A = (a, b)`, `B = (b, c)`, `C = (c, d)`, `D = (d, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealBoundaryQuad {
    angles: [f64; 4],
}

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

impl IdealBoundaryQuad {
    /// Angles may be any reals; they are reduced mod 2π and must be
    /// strictly increasing counterclockwise starting from `a`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HyperbolicError> {
        let raw = [a, b, c, d];
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(HyperbolicError::NotCyclic(raw));
        }
        let angles = raw.map(|x| x.rem_euclid(TAU));
        let off = |x: f64| (x - angles[0]).rem_euclid(TAU);
        let (ob, oc, od) = (off(angles[1]), off(angles[2]), off(angles[3]));
        let eps = 1e-12;
        if !(ob > eps && oc > ob + eps && od > oc + eps && od < TAU - eps) {
            return Err(HyperbolicError::NotCyclic(raw));
        }
        Ok(Self { angles })
    }

    /// `a = 0, b = β, c = π, d = π + β` with `β` chosen so the cross-ratio
    /// equals `eta`.
    pub fn symmetric_with_cross_ratio(eta: f64) -> Result<Self, HyperbolicError> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(HyperbolicError::BadCrossRatio(eta));
        }
        // The cross-ratio decreases from 1 to 0 as β runs over (0, π).
        let eta_of = |beta: f64| Self::new(0.0, beta, PI, PI + beta).map(|q| q.cross_ratio());
        let (mut lo, mut hi) = (1e-9, PI - 1e-9);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eta_of(mid)? > eta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::new(0.0, 0.5 * (lo + hi), PI, PI + 0.5 * (lo + hi))
    }

    pub fn angles(&self) -> [f64; 4] {
        self.angles
    }

    pub fn points(&self) -> [Complex64; 4] {
        self.angles.map(unit)
    }

    /// `(z_c - z_b)(z_d - z_a) / ((z_c - z_a)(z_d - z_b))`.
    pub fn cross_ratio(&self) -> f64 {
        let [za, zb, zc, zd] = self.points();
        (((zc - zb) * (zd - za)) / ((zc - za) * (zd - zb))).re
    }

    /// Arc index (0 = A, 1 = B, 2 = C, 3 = D) containing angle `theta`;
    /// arcs are half-open `[start, end)`.
    pub fn arc_of(&self, theta: f64) -> usize {
        let off = |x: f64| (x - self.angles[0]).rem_euclid(TAU);
        let t = off(theta);
        (1..4).rev().find(|&i| t >= off(self.angles[i])).unwrap_or(0)
    }

    /// The same quad with the roles of `(A, C)` and `(B, D)` swapped.
    pub fn rotate_labels(&self) -> Self {
        let [a, b, c, d] = self.angles;
        Self { angles: [b, c, d, a] }
    }

    pub fn map(&self, m: &Mobius) -> Self {
        Self {
            angles: self.angles.map(|t| m.apply(unit(t)).arg().rem_euclid(TAU)),
        }
    }
}

/// Disc automorphism `z -> e^{iφ} (z - α) / (1 - conj(α) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub rotation: f64,
    pub alpha: Complex64,
}

impl Mobius {
    pub fn new(rotation: f64, alpha: Complex64) -> Result<Self, HyperbolicError> {
        if !(alpha.norm() < 1.0) {
            return Err(HyperbolicError::BadMobius);
        }
        Ok(Self { rotation, alpha })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        unit(self.rotation) * (z - self.alpha) / (Complex64::new(1.0, 0.0) - self.alpha.conj() * z)
    }
}

/// Hyperbolic distance between two points of the Poincaré disc.
pub fn hyperbolic_distance(u: [f64; 2], v: [f64; 2]) -> f64 {
    let d2 = (u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2);
    let nu = 1.0 - (u[0] * u[0] + u[1] * u[1]);
    let nv = 1.0 - (v[0] * v[0] + v[1] * v[1]);
    (1.0 + 2.0 * d2 / (nu * nv)).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_quad_is_one_half() {
        let q = IdealBoundaryQuad::new(0.0, PI / 2.0, PI, 1.5 * PI).unwrap();
        assert!((q.cross_ratio() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn relabeling_complements() {
        let q = IdealBoundaryQuad::new(0.1, 0.7, 2.9, 4.0).unwrap();
        let s = q.rotate_labels();
        assert!((q.cross_ratio() + s.cross_ratio() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(IdealBoundaryQuad::new(0.0, 2.0, 1.0, 3.0).is_err());
        assert!(IdealBoundaryQuad::new(0.0, 0.0, 1.0, 3.0).is_err());
        assert!(IdealBoundaryQuad::new(1.0, 2.0, 3.0, 1.0 + TAU).is_err());
    }

    #[test]
    fn arcs_partition() {
        let q = IdealBoundaryQuad::new(0.0, 1.0, 2.0, 3.0).unwrap();
        assert_eq!(q.arc_of(0.5), 0);
        assert_eq!(q.arc_of(1.0), 1);
        assert_eq!(q.arc_of(2.5), 2);
        assert_eq!(q.arc_of(5.0), 3);
        assert_eq!(q.arc_of(-0.1), 3);
    }

    #[test]
    fn target_cross_ratio() {
        let q = IdealBoundaryQuad::symmetric_with_cross_ratio(0.25).unwrap();
        assert!((q.cross_ratio() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn distance_from_origin() {
        let t: f64 = 0.5;
        let d = hyperbolic_distance([0.0, 0.0], [t, 0.0]);
        assert!((d - 2.0 * t.atanh()).abs() < 1e-14);
    }
}
