//! RHG lattice geometry in doubled coordinates, its decorated version, the
//! stepwise CZ schedule and the primal cube structure used for syndromes.

mod cells;
mod coord;
mod rhg;
mod schedule;

pub use cells::{cubes_per_face, defect_region, primal_cubes, PrimalCube, Z_PATTERN};
pub use coord::{CellKind, Coord, DecoratedId};
pub use rhg::{build_rhg, decorate, Boundary, EdgeDoc, EdgeKind, Lattice, LatticeDocument, LatticeEdge, RoundDoc};
pub use schedule::{cz_schedule, CzRound, CzSchedule, LATTICE_STEPS};
