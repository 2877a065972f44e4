use std::collections::BTreeSet;

use super::coord::{CellKind, Coord, DecoratedId};
use super::rhg::{Boundary, Lattice};
use crate::error::LatticeError;
use crate::math::Angle8;

/// A primal cube and the site indices of its six face qubits, ordered
/// `-x, +x, -y, +y, -z, +z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalCube {
    pub center: Coord,
    pub faces: [usize; 6],
}

/// All primal cubes: centres at all-odd doubled coordinates inside the lattice.
pub fn primal_cubes(lattice: &Lattice) -> Vec<PrimalCube> {
    let [lx, ly, lz] = lattice.sizes();
    let mut cubes = Vec::with_capacity(lx * ly * lz);
    for i in 0..lx as i64 {
        for j in 0..ly as i64 {
            for k in 0..lz as i64 {
                let center = Coord::new(2 * i + 1, 2 * j + 1, 2 * k + 1);
                let mut faces = [0usize; 6];
                for axis in 0..3 {
                    for (side, delta) in [-1i64, 1].into_iter().enumerate() {
                        faces[2 * axis + side] = lattice
                            .site_index(center.shifted(axis, delta))
                            .expect("cube faces are lattice sites");
                    }
                }
                cubes.push(PrimalCube { center, faces });
            }
        }
    }
    cubes
}

/// Chain angles `(π/2, π/2, π/2)` realising an effective Z measurement.
pub const Z_PATTERN: [Angle8; 3] = [Angle8::PI_2, Angle8::PI_2, Angle8::PI_2];

/// Full decoration chains of the edge qubits in a primal defect region.
/// These are measured with [`Z_PATTERN`].
pub fn defect_region(lattice: &Lattice, region: &[Coord]) -> Result<BTreeSet<DecoratedId>, LatticeError> {
    let mut out = BTreeSet::new();
    for &c in region {
        let site = lattice.site_index(c).ok_or(LatticeError::UnknownSite(c.to_array()))?;
        let coord = lattice.sites()[site];
        if coord.kind() == CellKind::Face {
            return Err(LatticeError::FaceInPrimalDefect(coord.to_array()));
        }
        for chain in 1..=3 {
            out.insert(DecoratedId::new(coord, chain));
        }
    }
    Ok(out)
}

/// Number of primal cubes containing a given face site.
pub fn cubes_per_face(lattice: &Lattice, site: usize) -> usize {
    let c = lattice.sites()[site];
    if c.kind() != CellKind::Face {
        return 0;
    }
    let axis = (0..3)
        .find(|&a| c.get(a).rem_euclid(2) == 0)
        .expect("face has one even axis");
    match lattice.boundary() {
        Boundary::Periodic => 2,
        Boundary::Open => {
            let max = 2 * lattice.sizes()[axis] as i64;
            if c.get(axis) == 0 || c.get(axis) == max {
                1
            } else {
                2
            }
        }
    }
}
