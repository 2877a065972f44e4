//! Stepwise CZ schedule for the decorated lattice.
//!
//! Steps 1–4 are a proper 4-edge-coloring of the RHG lattice edges, so every
//! bulk qubit takes part in exactly one CZ per step. Step 5 entangles the
//! decoration chains in two rounds, `(1,2)` edges then `(2,3)` edges.
//!
//! The particular coloring does not affect the first-order error rates,
//! which only count CZs per qubit. We obtain it with the alternating-path
//! method for bipartite graphs (edge qubits vs face qubits), which always
//! succeeds with `Δ` colors.

use serde::{Deserialize, Serialize};

use super::rhg::{Lattice, LatticeEdge};
use crate::error::LatticeError;

pub const LATTICE_STEPS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CzRound {
    /// 1–4 for lattice colors, 5 for both decoration rounds.
    pub step: u8,
    pub edges: Vec<LatticeEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CzSchedule {
    rounds: Vec<CzRound>,
}

impl CzSchedule {
    pub fn rounds(&self) -> &[CzRound] {
        &self.rounds
    }

    pub fn lattice_rounds(&self) -> impl Iterator<Item = &CzRound> {
        self.rounds.iter().filter(|r| r.step as usize <= LATTICE_STEPS)
    }

    pub fn total_cz(&self) -> usize {
        self.rounds.iter().map(|r| r.edges.len()).sum()
    }

    /// Checks that rounds partition the lattice's edge set and that no
    /// qubit appears twice within a round.
    pub fn validate(&self, lattice: &Lattice) -> Result<(), LatticeError> {
        let mut seen: Vec<LatticeEdge> = self.rounds.iter().flat_map(|r| r.edges.iter().copied()).collect();
        let before = seen.len();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != before {
            return Err(LatticeError::Coloring("an edge is scheduled twice".into()));
        }
        let mut all: Vec<LatticeEdge> = lattice.edges().map(|(e, _)| e).collect();
        all.sort_unstable();
        if all != seen {
            return Err(LatticeError::Coloring(
                "scheduled edges differ from lattice edges".into(),
            ));
        }
        let mut busy = vec![usize::MAX; lattice.qubit_count()];
        for (ri, round) in self.rounds.iter().enumerate() {
            for e in &round.edges {
                for q in [e.a, e.b] {
                    if busy[q] == ri {
                        return Err(LatticeError::Coloring(format!("qubit {q} acts twice in round {ri}")));
                    }
                    busy[q] = ri;
                }
            }
        }
        Ok(())
    }
}

/// Proper edge coloring of a bipartite multigraph-free edge list with `colors` colors.
fn bipartite_edge_coloring(vertices: usize, edges: &[LatticeEdge], colors: usize) -> Result<Vec<usize>, LatticeError> {
    // at[v][c] = (neighbor, edge index) reached from v along color c
    let mut at: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; colors]; vertices];
    let mut color = vec![usize::MAX; edges.len()];

    for (ei, e) in edges.iter().enumerate() {
        let (u, v) = (e.a, e.b);
        let free_u = (0..colors)
            .find(|&c| at[u][c].is_none())
            .ok_or_else(|| LatticeError::Coloring(format!("qubit {u} has degree above {colors}")))?;
        let free_v = (0..colors)
            .find(|&c| at[v][c].is_none())
            .ok_or_else(|| LatticeError::Coloring(format!("qubit {v} has degree above {colors}")))?;
        let (a, b) = (free_u, free_v);
        if at[v][a].is_some() {
            // Swap a/b along the alternating path from v; bipartiteness keeps u off it.
            let mut path = Vec::new();
            let (mut cur, mut c) = (v, a);
            while let Some((next, idx)) = at[cur][c] {
                path.push(idx);
                if next == u {
                    return Err(LatticeError::Coloring("graph is not bipartite".into()));
                }
                cur = next;
                c = if c == a { b } else { a };
            }
            for &idx in &path {
                let ed = edges[idx];
                at[ed.a][color[idx]] = None;
                at[ed.b][color[idx]] = None;
            }
            for &idx in &path {
                let ed = edges[idx];
                let nc = if color[idx] == a { b } else { a };
                color[idx] = nc;
                at[ed.a][nc] = Some((ed.b, idx));
                at[ed.b][nc] = Some((ed.a, idx));
            }
        }
        color[ei] = a;
        at[u][a] = Some((v, ei));
        at[v][a] = Some((u, ei));
    }
    Ok(color)
}

pub fn cz_schedule(lattice: &Lattice) -> Result<CzSchedule, LatticeError> {
    if !lattice.is_decorated() {
        return Err(LatticeError::NotDecorated);
    }
    let edges = lattice.lattice_edges();
    let colors = bipartite_edge_coloring(lattice.qubit_count(), edges, LATTICE_STEPS)?;
    let mut rounds: Vec<CzRound> = (0..LATTICE_STEPS)
        .map(|c| CzRound {
            step: c as u8 + 1,
            edges: Vec::new(),
        })
        .collect();
    for (e, c) in edges.iter().zip(colors) {
        rounds[c].edges.push(*e);
    }
    for r in &mut rounds {
        r.edges.sort_unstable();
    }
    let (first, second): (Vec<_>, Vec<_>) = lattice.decoration_edges().iter().partition(|e| e.a % 3 == 0);
    rounds.push(CzRound { step: 5, edges: first });
    rounds.push(CzRound { step: 5, edges: second });
    let schedule = CzSchedule { rounds };
    schedule.validate(lattice)?;
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_rhg, decorate, Boundary};

    fn schedule_for(sizes: [usize; 3], b: Boundary) -> (Lattice, CzSchedule) {
        let lat = decorate(&build_rhg(sizes, b).unwrap()).unwrap();
        let s = cz_schedule(&lat).unwrap();
        (lat, s)
    }

    #[test]
    fn periodic_bulk_counts() {
        let (lat, s) = schedule_for([2, 2, 2], Boundary::Periodic);
        assert_eq!(s.rounds().len(), 6);
        let sites = lat.sites().len();
        for site in 0..sites {
            let q1 = 3 * site;
            for r in s.rounds().iter().take(LATTICE_STEPS) {
                assert_eq!(r.edges.iter().filter(|e| e.touches(q1)).count(), 1);
            }
            let deco: usize = s.rounds()[4..]
                .iter()
                .map(|r| r.edges.iter().filter(|e| e.touches(q1)).count())
                .sum();
            assert_eq!(deco, 1);
            let q3 = 3 * site + 2;
            let total: usize = s
                .rounds()
                .iter()
                .map(|r| r.edges.iter().filter(|e| e.touches(q3)).count())
                .sum();
            assert_eq!(total, 1);
        }
        assert_eq!(s.total_cz(), lat.lattice_edges().len() + 2 * sites);
    }

    #[test]
    fn colorings_validate_on_many_shapes() {
        for sizes in [[1, 1, 1], [2, 3, 2], [3, 3, 3], [4, 2, 3]] {
            for b in [Boundary::Periodic, Boundary::Open] {
                let (lat, s) = schedule_for(sizes, b);
                s.validate(&lat).unwrap();
            }
        }
    }

    #[test]
    fn needs_decoration() {
        let lat = build_rhg([2, 2, 2], Boundary::Periodic).unwrap();
        assert_eq!(cz_schedule(&lat), Err(LatticeError::NotDecorated));
    }

    #[test]
    fn deterministic() {
        let (_, a) = schedule_for([3, 2, 2], Boundary::Periodic);
        let (_, b) = schedule_for([3, 2, 2], Boundary::Periodic);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
