//! Quaternionic construction of the binary dodecahedral group and the
//! spherical 120-cell, its layers and Hopf rings, the rib burr puzzles
//! built from them, and printable rib meshes.

pub mod cell120;
pub mod check;
pub mod dodeca;
pub mod meshgen;
pub mod puzzle;
pub mod quat;
pub mod strata;

pub use cell120::{CellGeometry, Complex120, ComplexError, FlagPolytope, PoleSymmetry, SymmetryKind};
pub use check::{Check, Report};
pub use dodeca::{BinaryDodecGroup, GroupError};
pub use meshgen::{DesignParams, FaceKind, Mesh, MeshError, MeshReport};
pub use puzzle::{Assembly, Equivalence, Placement, PuzzleContext, PuzzleError, PuzzleSpec, SolutionCounts, SolveOptions};
pub use quat::{QuatError, Quaternion, UnitQuaternion};
pub use strata::{Layer, Rib, RibType, RingName, Rings, StrataError};

pub use nalgebra;
