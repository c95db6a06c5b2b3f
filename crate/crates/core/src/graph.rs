//! 4-connected search graph over the passable cells of a grid.

use crate::map::{GridMap, VertexId};

/// Adjacency over passable cells. Waiting in place is modeled as a separate
/// action by the search, so the neighbor lists never contain self-loops.
#[derive(Debug, Clone)]
pub struct SearchGraph {
    neighbors: Vec<Vec<VertexId>>,
}

impl SearchGraph {
    pub fn num_vertices(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v.index()]
    }

    pub fn are_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors[u.index()].contains(&v)
    }
}

/// Builds the 4-connected graph (no diagonals) from a grid.
pub fn build_graph(map: &GridMap) -> SearchGraph {
    let mut neighbors = vec![Vec::new(); map.num_vertices()];
    for (v, adjacency) in neighbors.iter_mut().enumerate() {
        let (x, y) = map.coords_of(VertexId(v as u32));
        let candidates = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in candidates {
            if let Some(n) = map.vertex_at(nx, ny) {
                adjacency.push(n);
            }
        }
        adjacency.sort_unstable();
    }
    SearchGraph { neighbors }
}
