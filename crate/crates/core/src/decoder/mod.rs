//! Primal-lattice decoding: cube-parity syndromes, minimum-weight perfect
//! matching of defects, geodesic corrections and the homology test.

mod blossom;
mod exact;

use serde::{Deserialize, Serialize};

pub use blossom::max_weight_matching;
pub use exact::{min_weight_perfect_matching, EXACT_LIMIT};

use crate::error::DecodeError;
use crate::lattice::{primal_cubes, Boundary, CellKind, Coord, Lattice, PrimalCube};

/// Default number of matching vertices at or below which the exact subset DP
/// is used instead of blossom.
pub const DEFAULT_EXACT_CROSSOVER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub exact_crossover: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            exact_crossover: DEFAULT_EXACT_CROSSOVER,
        }
    }
}

/// Which periodic planes count as logical cuts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalSurface {
    /// The plane of faces at coordinate 0 normal to this axis.
    Axis(usize),
    /// Failure if any of the three planes is crossed an odd number of times.
    #[default]
    Any,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    /// Centres of cubes with odd face-error parity, sorted.
    pub defects: Vec<Coord>,
}

impl Syndrome {
    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }
}

/// A lattice side: `axis` and whether it is the upper (`2L`) plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundarySide {
    pub axis: usize,
    pub upper: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMethod {
    Exact,
    Blossom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(Coord, Coord)>,
    /// Open lattices only.
    #[serde(default)]
    pub boundary_matches: Vec<(Coord, BoundarySide)>,
    pub weight: u64,
    pub method: MatchMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOutcome {
    pub failed: bool,
    /// Odd crossing of the plane normal to each axis.
    pub crossings: [bool; 3],
    /// Face sites flipped by the correction, sorted.
    pub correction: Vec<usize>,
}

/// Everything one decode produces, in the shape the CLI prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub defects: Vec<Coord>,
    pub matching: Matching,
    pub weight: u64,
    pub failed: Option<bool>,
}

/// Vertex pairs, total weight, and the method that found them.
type Solved = (Vec<(usize, usize)>, u64, MatchMethod);

/// Decoder bound to one lattice; reusable across trials, no per-call state.
#[derive(Clone, Debug)]
pub struct Decoder<'a> {
    lattice: &'a Lattice,
    config: DecoderConfig,
    cubes: Vec<PrimalCube>,
    /// Cube indices adjacent to each site (empty for edge sites).
    face_cubes: Vec<Vec<usize>>,
}

impl<'a> Decoder<'a> {
    pub fn new(lattice: &'a Lattice) -> Self {
        Self::with_config(lattice, DecoderConfig::default())
    }

    pub fn with_config(lattice: &'a Lattice, config: DecoderConfig) -> Self {
        let cubes = primal_cubes(lattice);
        let mut face_cubes = vec![Vec::new(); lattice.sites().len()];
        for (ci, cube) in cubes.iter().enumerate() {
            for &f in &cube.faces {
                face_cubes[f].push(ci);
            }
        }
        Decoder {
            lattice,
            config,
            cubes,
            face_cubes,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        self.lattice
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn sizes(&self) -> [i64; 3] {
        self.lattice.sizes().map(|s| s as i64)
    }

    fn periodic(&self) -> bool {
        self.lattice.boundary() == Boundary::Periodic
    }

    fn cube_cell(c: Coord) -> [i64; 3] {
        [(c.x - 1) / 2, (c.y - 1) / 2, (c.z - 1) / 2]
    }

    fn check_len(&self, errors: &[bool]) -> Result<(), DecodeError> {
        let n = self.lattice.sites().len();
        if errors.len() != n {
            return Err(DecodeError::MaskLength {
                expected: n,
                got: errors.len(),
            });
        }
        Ok(())
    }

    /// Syndrome of a per-site error mask. Entries on edge sites are ignored.
    pub fn syndrome(&self, errors: &[bool]) -> Result<Syndrome, DecodeError> {
        self.check_len(errors)?;
        let mut parity = vec![false; self.cubes.len()];
        for (site, _) in errors.iter().enumerate().filter(|(_, &e)| e) {
            for &c in &self.face_cubes[site] {
                parity[c] ^= true;
            }
        }
        let mut defects: Vec<Coord> = parity
            .iter()
            .zip(&self.cubes)
            .filter(|(&p, _)| p)
            .map(|(_, cube)| cube.center)
            .collect();
        defects.sort_unstable();
        Ok(Syndrome { defects })
    }

    /// Turns a list of face sites into a per-site mask.
    pub fn mask_from_faces(&self, faces: &[usize]) -> Result<Vec<bool>, DecodeError> {
        let sites = self.lattice.sites();
        let mut mask = vec![false; sites.len()];
        for &f in faces {
            let c = sites.get(f).ok_or(DecodeError::SiteOutOfRange(f))?;
            if c.kind() != CellKind::Face {
                return Err(DecodeError::NotAFace(f));
            }
            mask[f] ^= true;
        }
        Ok(mask)
    }

    /// Per-axis Manhattan distance in cube units (periodic axes wrap).
    pub fn distance(&self, a: Coord, b: Coord) -> u64 {
        let (ca, cb) = (Self::cube_cell(a), Self::cube_cell(b));
        let sizes = self.sizes();
        (0..3)
            .map(|ax| {
                let d = (ca[ax] - cb[ax]).abs();
                if self.periodic() {
                    d.min(sizes[ax] - d) as u64
                } else {
                    d as u64
                }
            })
            .sum()
    }

    /// Nearest lattice side of a cube on an open lattice and the number of
    /// faces crossed to reach it. Ties go to the lowest axis, lower side.
    pub fn boundary_distance(&self, c: Coord) -> (u64, BoundarySide) {
        let cell = Self::cube_cell(c);
        let sizes = self.sizes();
        let mut best = (u64::MAX, BoundarySide { axis: 0, upper: false });
        for axis in 0..3 {
            let down = (cell[axis] + 1) as u64;
            let up = (sizes[axis] - cell[axis]) as u64;
            if down < best.0 {
                best = (down, BoundarySide { axis, upper: false });
            }
            if up < best.0 {
                best = (up, BoundarySide { axis, upper: true });
            }
        }
        best
    }

    pub fn match_defects(&self, syndrome: &Syndrome) -> Result<Matching, DecodeError> {
        let defects = &syndrome.defects;
        let n = defects.len();
        if self.periodic() {
            if n % 2 == 1 {
                return Err(DecodeError::OddDefects(n));
            }
            let (pairs, weight, method) = self.solve(n, |i, j| Some(self.distance(defects[i], defects[j])))?;
            let pairs = pairs.into_iter().map(|(i, j)| (defects[i], defects[j])).collect();
            return Ok(Matching {
                pairs,
                boundary_matches: Vec::new(),
                weight,
                method,
            });
        }
        // open lattice: every defect gets a twin on the boundary; twins pair freely
        let bd: Vec<(u64, BoundarySide)> = defects.iter().map(|&d| self.boundary_distance(d)).collect();
        let weight_of = |i: usize, j: usize| -> Option<u64> {
            match (i < n, j < n) {
                (true, true) => Some(self.distance(defects[i], defects[j])),
                (false, false) => Some(0),
                (true, false) => (j - n == i).then_some(bd[i].0),
                (false, true) => (i - n == j).then_some(bd[j].0),
            }
        };
        let (raw, weight, method) = self.solve(2 * n, weight_of)?;
        let mut pairs = Vec::new();
        let mut boundary_matches = Vec::new();
        for (i, j) in raw {
            let (i, j) = (i.min(j), i.max(j));
            if j < n {
                pairs.push((defects[i], defects[j]));
            } else if i < n {
                boundary_matches.push((defects[i], bd[i].1));
            }
        }
        Ok(Matching {
            pairs,
            boundary_matches,
            weight,
            method,
        })
    }

    /// Minimum-weight perfect matching on `n` vertices; `None` marks a
    /// forbidden pair.
    fn solve<F>(&self, n: usize, weight: F) -> Result<Solved, DecodeError>
    where
        F: Fn(usize, usize) -> Option<u64>,
    {
        if n <= self.config.exact_crossover.min(EXACT_LIMIT) {
            const FORBIDDEN: u64 = 1 << 40;
            let (pairs, w) = min_weight_perfect_matching(n, |i, j| weight(i, j).unwrap_or(FORBIDDEN));
            if w >= FORBIDDEN {
                return Err(DecodeError::Matching("no perfect matching exists".into()));
            }
            return Ok((pairs, w, MatchMethod::Exact));
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                if let Some(w) = weight(i, j) {
                    edges.push((i, j, w));
                }
            }
        }
        let top = edges.iter().map(|e| e.2).max().unwrap_or(0) as i64 + 1;
        let flipped: Vec<(usize, usize, i64)> = edges.iter().map(|&(i, j, w)| (i, j, top - w as i64)).collect();
        let mate = max_weight_matching(n, &flipped);
        let mut pairs = Vec::with_capacity(n / 2);
        let mut total = 0;
        for (i, m) in mate.iter().enumerate() {
            let j = m.ok_or_else(|| DecodeError::Matching(format!("vertex {i} left unmatched")))?;
            if i < j {
                total += weight(i, j).ok_or_else(|| DecodeError::Matching("forbidden pair chosen".into()))?;
                pairs.push((i, j));
            }
        }
        Ok((pairs, total, MatchMethod::Blossom))
    }

    fn face_site(&self, c: Coord) -> usize {
        self.lattice.site_index(c).expect("geodesic faces are lattice sites")
    }

    /// Faces crossed by the axis-ordered geodesic from cube `a` to cube `b`.
    pub fn geodesic(&self, a: Coord, b: Coord) -> Vec<usize> {
        let sizes = self.sizes();
        let target = Self::cube_cell(b);
        let mut cur = Self::cube_cell(a);
        let mut faces = Vec::new();
        for axis in 0..3 {
            let l = sizes[axis];
            let (step, count) = if self.periodic() {
                let fwd = (target[axis] - cur[axis]).rem_euclid(l);
                if fwd <= l - fwd {
                    (1, fwd)
                } else {
                    (-1, l - fwd)
                }
            } else {
                let d = target[axis] - cur[axis];
                (d.signum(), d.abs())
            };
            for _ in 0..count {
                let center = Coord::new(2 * cur[0] + 1, 2 * cur[1] + 1, 2 * cur[2] + 1);
                let face_coord = if step > 0 { 2 * cur[axis] + 2 } else { 2 * cur[axis] };
                faces.push(self.face_site(center.with(axis, face_coord)));
                cur[axis] = (cur[axis] + step).rem_euclid(l);
            }
        }
        faces
    }

    /// Faces from a cube straight out to a lattice side.
    pub fn boundary_path(&self, c: Coord, side: BoundarySide) -> Vec<usize> {
        let cell = Self::cube_cell(c)[side.axis];
        let l = self.sizes()[side.axis];
        let coords: Vec<i64> = if side.upper {
            (cell + 1..=l).map(|i| 2 * i).collect()
        } else {
            (0..=cell).map(|i| 2 * i).collect()
        };
        coords
            .into_iter()
            .map(|v| self.face_site(c.with(side.axis, v)))
            .collect()
    }

    /// Per-site correction mask for a matching.
    pub fn correction(&self, matching: &Matching) -> Vec<bool> {
        let mut mask = vec![false; self.lattice.sites().len()];
        for &(a, b) in &matching.pairs {
            for f in self.geodesic(a, b) {
                mask[f] ^= true;
            }
        }
        for &(c, side) in &matching.boundary_matches {
            for f in self.boundary_path(c, side) {
                mask[f] ^= true;
            }
        }
        mask
    }

    /// Parity of residual faces on the coordinate-0 plane normal to each axis.
    pub fn crossings(&self, residual: &[bool]) -> [bool; 3] {
        let mut out = [false; 3];
        for (site, c) in self.lattice.sites().iter().enumerate() {
            if !residual[site] || c.kind() != CellKind::Face {
                continue;
            }
            let normal = (0..3)
                .find(|&a| c.get(a).rem_euclid(2) == 0)
                .expect("face has one even axis");
            if c.get(normal) == 0 {
                out[normal] ^= true;
            }
        }
        out
    }

    pub fn decide_logical(
        &self,
        errors: &[bool],
        matching: &Matching,
        surface: LogicalSurface,
    ) -> Result<LogicalOutcome, DecodeError> {
        if !self.periodic() {
            return Err(DecodeError::NotPeriodic);
        }
        self.check_len(errors)?;
        let correction = self.correction(matching);
        let residual: Vec<bool> = errors
            .iter()
            .zip(&correction)
            .zip(self.lattice.sites())
            .map(|((&e, &c), s)| (e ^ c) && s.kind() == CellKind::Face)
            .collect();
        let left = self.syndrome(&residual)?;
        if !left.is_empty() {
            return Err(DecodeError::ResidualSyndrome(left.len()));
        }
        let crossings = self.crossings(&residual);
        let failed = match surface {
            LogicalSurface::Axis(a) => crossings[a.min(2)],
            LogicalSurface::Any => crossings.iter().any(|&c| c),
        };
        let correction = correction
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| i)
            .collect();
        Ok(LogicalOutcome {
            failed,
            crossings,
            correction,
        })
    }

    /// Syndrome, matching and (periodic lattices) the logical decision.
    pub fn decode(&self, errors: &[bool], surface: LogicalSurface) -> Result<DecodeReport, DecodeError> {
        let syndrome = self.syndrome(errors)?;
        let matching = self.match_defects(&syndrome)?;
        let failed = if self.periodic() {
            Some(self.decide_logical(errors, &matching, surface)?.failed)
        } else {
            None
        };
        Ok(DecodeReport {
            defects: syndrome.defects,
            weight: matching.weight,
            matching,
            failed,
        })
    }

    /// Fast path for Monte Carlo: only the failure flag.
    pub fn fails(&self, errors: &[bool], surface: LogicalSurface) -> Result<bool, DecodeError> {
        let syndrome = self.syndrome(errors)?;
        let matching = self.match_defects(&syndrome)?;
        Ok(self.decide_logical(errors, &matching, surface)?.failed)
    }
}

pub fn extract_syndrome(errors: &[bool], lattice: &Lattice) -> Result<Syndrome, DecodeError> {
    Decoder::new(lattice).syndrome(errors)
}

pub fn match_defects(syndrome: &Syndrome, lattice: &Lattice) -> Result<Matching, DecodeError> {
    Decoder::new(lattice).match_defects(syndrome)
}

pub fn decide_logical(
    errors: &[bool],
    matching: &Matching,
    lattice: &Lattice,
    surface: LogicalSurface,
) -> Result<LogicalOutcome, DecodeError> {
    Decoder::new(lattice).decide_logical(errors, matching, surface)
}
