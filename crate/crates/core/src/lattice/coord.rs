use std::fmt;

use serde::{Deserialize, Serialize};

/// Position in doubled coordinates: unit cells have side 2, primal-lattice
/// vertices sit at all-even points and primal cubes are centred on all-odd points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

/// Role of a doubled-coordinate point, by how many of its components are odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    /// all even
    Vertex,
    /// one odd: qubit on a primal edge
    Edge,
    /// two odd: qubit on a primal face
    Face,
    /// all odd: primal cube centre
    Cube,
}

impl Coord {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Coord { x, y, z }
    }

    pub fn get(&self, axis: usize) -> i64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn with(mut self, axis: usize, value: i64) -> Self {
        match axis {
            0 => self.x = value,
            1 => self.y = value,
            _ => self.z = value,
        }
        self
    }

    pub fn shifted(self, axis: usize, delta: i64) -> Self {
        let v = self.get(axis) + delta;
        self.with(axis, v)
    }

    pub fn odd_count(&self) -> usize {
        [self.x, self.y, self.z].iter().filter(|v| v.rem_euclid(2) == 1).count()
    }

    pub fn kind(&self) -> CellKind {
        match self.odd_count() {
            0 => CellKind::Vertex,
            1 => CellKind::Edge,
            2 => CellKind::Face,
            _ => CellKind::Cube,
        }
    }

    /// Qubit sites are the edge and face points.
    pub fn hosts_qubit(&self) -> bool {
        matches!(self.kind(), CellKind::Edge | CellKind::Face)
    }

    pub fn to_array(self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[i64; 3]> for Coord {
    fn from(a: [i64; 3]) -> Self {
        Coord::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A qubit of the decorated lattice: chain index 1 is the lattice-embedded
/// qubit, 2 and 3 form the pendant chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DecoratedId {
    pub site: Coord,
    pub chain: u8,
}

impl DecoratedId {
    pub const fn new(site: Coord, chain: u8) -> Self {
        DecoratedId { site, chain }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_rule() {
        assert_eq!(Coord::new(0, 0, 0).kind(), CellKind::Vertex);
        assert_eq!(Coord::new(1, 0, 2).kind(), CellKind::Edge);
        assert_eq!(Coord::new(1, 1, 0).kind(), CellKind::Face);
        assert_eq!(Coord::new(1, 3, 5).kind(), CellKind::Cube);
        assert_eq!(Coord::new(-1, 0, 0).kind(), CellKind::Edge);
        assert!(Coord::new(0, 1, 1).hosts_qubit());
        assert!(!Coord::new(1, 1, 1).hosts_qubit());
    }
}
