//! Maximal operators built from dyadic dilations of Fourier multipliers:
//! an exact bump calculus, a periodic-grid spectral engine, a lower-bound
//! construction with its verification harness, an integer tiling scheme,
//! and the rearrangement/decomposition pipeline behind the sufficiency
//! criterion.

pub mod bump;
pub mod dyadic;
pub mod counterexample;
pub mod decomposition;
pub mod envelope;
pub mod grid;
pub mod jet;
pub mod parallel;
pub mod profile;
pub mod report;
pub mod tiling;
