//! Percolation, circle packing and square tiling experiments on planar
//! triangulations and Poisson-Voronoi tessellations of the hyperbolic disc.

pub mod embedding;
pub mod generators;
pub mod harmonic;
pub mod harness;
pub mod hyperbolic;
pub mod network;
pub mod packing;
pub mod percolation;
pub mod tiling;
pub mod triangulation;

/// The guide's chapters, compiled as doc-tests so their snippets stay in
/// step with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/triangulations.md")]
    pub struct Triangulations;
    #[doc = include_str!("../../../book/src/harmonic.md")]
    pub struct Harmonic;
    #[doc = include_str!("../../../book/src/tilings.md")]
    pub struct Tilings;
    #[doc = include_str!("../../../book/src/packing.md")]
    pub struct Packing;
    #[doc = include_str!("../../../book/src/percolation.md")]
    pub struct Percolation;
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    pub struct Hyperbolic;
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub struct Experiments;
}
