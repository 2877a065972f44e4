use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::coord::{Coord, DecoratedId};
use crate::error::LatticeError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// CZ of the underlying RHG lattice (between chain-1 qubits).
    Lattice,
    /// CZ inside a decoration chain.
    Decoration,
}

/// A CZ edge between two qubit indices, `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeEdge {
    pub a: usize,
    pub b: usize,
}

impl LatticeEdge {
    pub fn new(a: usize, b: usize) -> Self {
        LatticeEdge {
            a: a.min(b),
            b: a.max(b),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        self.a == q || self.b == q
    }
}

/// RHG lattice, optionally decorated with a two-qubit pendant chain on every site.
///
/// Sites are ordered lexicographically by `(x, y, z)`. Undecorated lattices
/// have one qubit per site (index = site index); decorated lattices have
/// qubits `3s, 3s+1, 3s+2` for chain positions 1, 2, 3 of site `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    sizes: [usize; 3],
    boundary: Boundary,
    decorated: bool,
    sites: Vec<Coord>,
    site_index: HashMap<Coord, usize>,
    lattice_edges: Vec<LatticeEdge>,
    decoration_edges: Vec<LatticeEdge>,
}

impl Lattice {
    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_decorated(&self) -> bool {
        self.decorated
    }

    pub fn sites(&self) -> &[Coord] {
        &self.sites
    }

    pub fn site_index(&self, c: Coord) -> Option<usize> {
        self.site_index.get(&self.wrap(c)).copied()
    }

    /// Number of qubits (sites × 3 when decorated).
    pub fn qubit_count(&self) -> usize {
        self.sites.len() * self.chain_len()
    }

    fn chain_len(&self) -> usize {
        if self.decorated {
            3
        } else {
            1
        }
    }

    /// Qubit index of the chain-1 (lattice-embedded) qubit of `site`.
    pub fn embedded_qubit(&self, site: usize) -> usize {
        site * self.chain_len()
    }

    pub fn qubit_index(&self, id: DecoratedId) -> Option<usize> {
        let s = self.site_index(id.site)?;
        match (self.decorated, id.chain) {
            (false, 1) => Some(s),
            (true, 1..=3) => Some(3 * s + usize::from(id.chain) - 1),
            _ => None,
        }
    }

    pub fn qubit_id(&self, q: usize) -> DecoratedId {
        let l = self.chain_len();
        DecoratedId::new(self.sites[q / l], (q % l) as u8 + 1)
    }

    pub fn qubits(&self) -> impl Iterator<Item = DecoratedId> + '_ {
        (0..self.qubit_count()).map(|q| self.qubit_id(q))
    }

    /// CZ edges of the RHG lattice itself, in qubit indices.
    pub fn lattice_edges(&self) -> &[LatticeEdge] {
        &self.lattice_edges
    }

    pub fn decoration_edges(&self) -> &[LatticeEdge] {
        &self.decoration_edges
    }

    pub fn edges(&self) -> impl Iterator<Item = (LatticeEdge, EdgeKind)> + '_ {
        self.lattice_edges
            .iter()
            .map(|&e| (e, EdgeKind::Lattice))
            .chain(self.decoration_edges.iter().map(|&e| (e, EdgeKind::Decoration)))
    }

    pub fn edge_count(&self) -> usize {
        self.lattice_edges.len() + self.decoration_edges.len()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges().filter(|(e, _)| e.touches(q)).count()
    }

    /// Reduces a coordinate into the fundamental domain on periodic axes.
    pub fn wrap(&self, c: Coord) -> Coord {
        match self.boundary {
            Boundary::Open => c,
            Boundary::Periodic => Coord::new(
                c.x.rem_euclid(2 * self.sizes[0] as i64),
                c.y.rem_euclid(2 * self.sizes[1] as i64),
                c.z.rem_euclid(2 * self.sizes[2] as i64),
            ),
        }
    }

    /// Graph view (for the statevector backend and protocol engines).
    pub fn to_graph(&self) -> Graph {
        Graph::new(self.qubit_count(), self.edges().map(|(e, _)| (e.a, e.b)))
            .expect("lattice edges form a simple graph")
    }

    pub fn to_document(&self, schedule: Option<&super::CzSchedule>) -> LatticeDocument {
        LatticeDocument {
            sizes: self.sizes,
            boundary: self.boundary,
            decorated: self.decorated,
            qubits: self
                .qubits()
                .map(|id| [id.site.x, id.site.y, id.site.z, i64::from(id.chain)])
                .collect(),
            edges: self
                .edges()
                .map(|(e, k)| EdgeDoc {
                    a: e.a,
                    b: e.b,
                    kind: k,
                })
                .collect(),
            schedule: schedule.map(|s| {
                s.rounds()
                    .iter()
                    .map(|r| RoundDoc {
                        step: r.step,
                        edges: r.edges.iter().map(|e| [e.a, e.b]).collect(),
                    })
                    .collect()
            }),
        }
    }

    /// Rebuilds a lattice from its document, checking the stored structure
    /// against a fresh construction.
    pub fn from_document(doc: &LatticeDocument) -> Result<Lattice, LatticeError> {
        let mut l = build_rhg(doc.sizes, doc.boundary)?;
        if doc.decorated {
            l = decorate(&l)?;
        }
        if l.to_document(None).qubits != doc.qubits || l.to_document(None).edges != doc.edges {
            return Err(LatticeError::DocumentMismatch);
        }
        Ok(l)
    }
}

/// Serialised lattice: stable field order for golden files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub sizes: [usize; 3],
    pub boundary: Boundary,
    pub decorated: bool,
    /// `[x, y, z, chain]` per qubit, in qubit-index order.
    pub qubits: Vec<[i64; 4]>,
    pub edges: Vec<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub schedule: Option<Vec<RoundDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundDoc {
    pub step: u8,
    pub edges: Vec<[usize; 2]>,
}

/// Builds the (undecorated) RHG lattice of `Lx × Ly × Lz` unit cells.
///
/// Periodic axes use coordinates `0..2L`; open axes `0..=2L`, so a single
/// open cell is one cube with its 6 faces and 12 edges.
pub fn build_rhg(sizes: [usize; 3], boundary: Boundary) -> Result<Lattice, LatticeError> {
    if sizes.contains(&0) {
        return Err(LatticeError::BadSize(sizes));
    }
    let extent = |axis: usize| -> i64 {
        let e = 2 * sizes[axis] as i64;
        match boundary {
            Boundary::Periodic => e,
            Boundary::Open => e + 1,
        }
    };
    let mut sites = Vec::new();
    for x in 0..extent(0) {
        for y in 0..extent(1) {
            for z in 0..extent(2) {
                let c = Coord::new(x, y, z);
                if c.hosts_qubit() {
                    sites.push(c);
                }
            }
        }
    }
    let site_index: HashMap<Coord, usize> = sites.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut lattice = Lattice {
        sizes,
        boundary,
        decorated: false,
        sites,
        site_index,
        lattice_edges: Vec::new(),
        decoration_edges: Vec::new(),
    };

    let mut edges = BTreeSet::new();
    for (i, &c) in lattice.sites.iter().enumerate() {
        for axis in 0..3 {
            for delta in [-1, 1] {
                let n = lattice.wrap(c.shifted(axis, delta));
                if let Some(&j) = lattice.site_index.get(&n) {
                    if i != j {
                        edges.insert(LatticeEdge::new(i, j));
                    }
                }
            }
        }
    }
    lattice.lattice_edges = edges.into_iter().collect();
    Ok(lattice)
}

/// Replaces every qubit by a three-qubit chain `(q,1)-(q,2)-(q,3)`; chain
/// position 1 keeps the lattice adjacency.
pub fn decorate(lattice: &Lattice) -> Result<Lattice, LatticeError> {
    if lattice.decorated {
        return Err(LatticeError::AlreadyDecorated);
    }
    let mut out = lattice.clone();
    out.decorated = true;
    out.lattice_edges = lattice
        .lattice_edges
        .iter()
        .map(|e| LatticeEdge::new(3 * e.a, 3 * e.b))
        .collect();
    out.decoration_edges = (0..lattice.sites.len())
        .flat_map(|s| {
            [
                LatticeEdge::new(3 * s, 3 * s + 1),
                LatticeEdge::new(3 * s + 1, 3 * s + 2),
            ]
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CellKind;

    fn brute_force_site_count(l: usize, boundary: Boundary) -> usize {
        let ext = match boundary {
            Boundary::Periodic => 2 * l as i64,
            Boundary::Open => 2 * l as i64 + 1,
        };
        let mut n = 0;
        for x in 0..ext {
            for y in 0..ext {
                for z in 0..ext {
                    let odd = [x, y, z].iter().filter(|v| *v % 2 == 1).count();
                    if odd == 1 || odd == 2 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(build_rhg([1, 1, 1], Boundary::Periodic).unwrap().qubit_count(), 6);
        assert_eq!(build_rhg([2, 2, 2], Boundary::Periodic).unwrap().qubit_count(), 48);
        let cell = build_rhg([1, 1, 1], Boundary::Open).unwrap();
        assert_eq!(cell.qubit_count(), 18);
        let faces = cell.sites().iter().filter(|c| c.kind() == CellKind::Face).count();
        assert_eq!(faces, 6);
        for l in 1..=4 {
            for b in [Boundary::Periodic, Boundary::Open] {
                let lat = build_rhg([l, l, l], b).unwrap();
                assert_eq!(lat.qubit_count(), brute_force_site_count(l, b));
            }
            assert_eq!(
                build_rhg([l, l, l], Boundary::Periodic).unwrap().qubit_count(),
                6 * l * l * l
            );
        }
    }

    #[test]
    fn bulk_degree_is_four() {
        for l in 2..=4 {
            let lat = build_rhg([l, l + 1, l], Boundary::Periodic).unwrap();
            for q in 0..lat.qubit_count() {
                assert_eq!(lat.degree(q), 4);
            }
        }
    }

    #[test]
    fn edges_join_edge_and_face_sites() {
        let lat = build_rhg([3, 2, 2], Boundary::Periodic).unwrap();
        for e in lat.lattice_edges() {
            assert_ne!(e.a, e.b);
            let kinds = [lat.sites()[e.a].kind(), lat.sites()[e.b].kind()];
            assert!(kinds.contains(&CellKind::Edge) && kinds.contains(&CellKind::Face));
        }
    }

    #[test]
    fn decoration() {
        let cell = build_rhg([1, 1, 1], Boundary::Periodic).unwrap();
        let d = decorate(&cell).unwrap();
        assert_eq!(d.qubit_count(), 18);
        assert_eq!(decorate(&d), Err(LatticeError::AlreadyDecorated));

        let lat = build_rhg([2, 2, 2], Boundary::Periodic).unwrap();
        let dec = decorate(&lat).unwrap();
        assert_eq!(dec.qubit_count(), 3 * lat.qubit_count());
        assert_eq!(dec.edge_count(), lat.edge_count() + 2 * lat.qubit_count());
        for s in 0..lat.sites().len() {
            assert_eq!(dec.degree(3 * s), lat.degree(s) + 1);
            assert_eq!(dec.degree(3 * s + 1), 2);
            assert_eq!(dec.degree(3 * s + 2), 1);
        }
        let id = dec.qubit_id(7);
        assert_eq!(id.chain, 2);
        assert_eq!(dec.qubit_index(id), Some(7));
    }

    #[test]
    fn document_is_deterministic_and_round_trips() {
        let a = decorate(&build_rhg([2, 1, 2], Boundary::Open).unwrap()).unwrap();
        let b = decorate(&build_rhg([2, 1, 2], Boundary::Open).unwrap()).unwrap();
        let ja = serde_json::to_string(&a.to_document(None)).unwrap();
        let jb = serde_json::to_string(&b.to_document(None)).unwrap();
        assert_eq!(ja, jb);
        let doc: LatticeDocument = serde_json::from_str(&ja).unwrap();
        assert_eq!(Lattice::from_document(&doc).unwrap(), a);
    }

    #[test]
    fn rejects_zero_size() {
        assert!(build_rhg([0, 1, 1], Boundary::Open).is_err());
    }
}
