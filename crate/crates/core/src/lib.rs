//! Donaldson-Thomas partition functions of toric local Calabi-Yau threefolds,
//! computed exactly by localization to torus-fixed ideal sheaves.
//!
//! - [`partitions`]: 2D and 3D partitions with leg asymptotics.
//! - [`charcalc`]: Laurent-polynomial characters of the virtual tangent space.
//! - [`geometry`]: toric Calabi-Yau graphs (built-in and file-based).
//! - [`dtsum`]: fixed-point sums, reduced series, rational reconstruction.
//! - [`gwref`]: Gromov-Witten side reference values.

pub mod charcalc;
pub mod dtsum;
pub mod geometry;
pub mod gwref;
pub mod partitions;
