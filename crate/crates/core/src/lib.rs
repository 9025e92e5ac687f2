//! Exact homological algebra over standard-graded quotients of polynomial rings
//! over `F_p`: Koszul complexes and their homology, two-step Tate complexes,
//! minimal resolutions over rings and over the Koszul dg algebra, and a battery
//! of coefficient-wise checks on truncated Poincaré series.
//!
//! Everything is computed one internal degree at a time with exact linear
//! algebra, so every result is valid inside an explicit window of homological
//! and internal degrees.

pub mod checks;
pub mod complex;
pub mod e_resolution;
pub mod exactlin;
pub mod graded;
pub mod harness;
pub mod koszul;
pub mod resolution;
pub mod series;

pub use complex::FreeComplex;
pub use e_resolution::{minimal_e_resolution, SemifreeDgModule};
pub use exactlin::{FMatrix, PrimeField};
pub use graded::{GradedRing, HomogeneousIdeal, PresentedModule, RingElem};
pub use koszul::KoszulAlgebra;
pub use resolution::{minimal_free_resolution, oracle_resolution, BettiTable, Caps};
pub use series::{cmp_coefficientwise, Comparison, TruncatedSeries};

/// Poincaré and Hilbert series: Betti numbers are machine-sized.
pub type PoincareSeries = TruncatedSeries<i64>;
