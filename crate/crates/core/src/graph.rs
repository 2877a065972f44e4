use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Undirected simple graph on qubits `0..qubits`, the public structure of a
/// graph state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    qubits: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalising every edge to `(min, max)` and rejecting
    /// self-loops, duplicates and out-of-range endpoints.
    pub fn new(qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= qubits || b >= qubits {
                return Err(GraphError::VertexOutOfRange {
                    vertex: a.max(b),
                    qubits,
                });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            out.push((a.min(b), a.max(b)));
        }
        let before = out.len();
        let mut sorted = out.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != before {
            return Err(GraphError::DuplicateEdge);
        }
        Ok(Graph { qubits, edges: out })
    }

    pub fn empty(qubits: usize) -> Self {
        Graph {
            qubits,
            edges: Vec::new(),
        }
    }

    /// Linear cluster `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph {
            qubits: n,
            edges: (1..n).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}
