//! Stable graphs: dual graphs of nodal curves. Vertices carry genera, legs
//! carry marking labels, and edges are pairs of half-edges (loops and
//! parallel edges are first-class).

use crate::error::{Error, Result};
use crate::space::{vertex_stable, MarkedSpace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type VertexId = usize;

/// Half-edges are global indices: edge `k` owns half-edges `2k` (at the
/// first endpoint) and `2k + 1` (at the second).
pub type HalfEdge = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StableGraph {
    genus: Vec<u32>,
    /// (marking label, incident vertex), kept sorted by label.
    legs: Vec<(u32, VertexId)>,
    edges: Vec<(VertexId, VertexId)>,
}

/// Result of contracting a set of edges: the contracted graph plus the
/// correspondence needed to transport decorations.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: StableGraph,
    /// Old half-edge -> new half-edge; `None` exactly for contracted edges.
    pub he_map: Vec<Option<HalfEdge>>,
    /// Old vertex -> new vertex.
    pub vertex_map: Vec<VertexId>,
}

/// How an edge of a stable graph sits inside the curve: a non-separating
/// node, or a separating node with side data (h, J) (stored normalized).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    NonSeparating,
    Separating { h: u32, side: BTreeSet<u32> },
}

impl StableGraph {
    pub fn new(
        genus: Vec<u32>,
        mut legs: Vec<(u32, VertexId)>,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Self {
        legs.sort_unstable();
        StableGraph { genus, legs, edges }
    }

    /// The smooth stratum: one vertex of full genus carrying all legs.
    pub fn smooth(space: MarkedSpace) -> Self {
        StableGraph::new(
            vec![space.g],
            (1..=space.n).map(|m| (m, 0)).collect(),
            Vec::new(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn genus_of(&self, v: VertexId) -> u32 {
        self.genus[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn legs(&self) -> &[(u32, VertexId)] {
        &self.legs
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertex_of(&self, h: HalfEdge) -> VertexId {
        let (a, b) = self.edges[h / 2];
        if h % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn other_half(h: HalfEdge) -> HalfEdge {
        h ^ 1
    }

    pub fn half_edges_at(&self, v: VertexId) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push(2 * k);
            }
            if b == v {
                out.push(2 * k + 1);
            }
        }
        out
    }

    pub fn legs_at(&self, v: VertexId) -> Vec<u32> {
        self.legs
            .iter()
            .filter(|&&(_, w)| w == v)
            .map(|&(m, _)| m)
            .collect()
    }

    pub fn valence(&self, v: VertexId) -> u32 {
        (self.legs_at(v).len() + self.half_edges_at(v).len()) as u32
    }

    /// First Betti number; only meaningful when connected.
    pub fn betti(&self) -> u32 {
        (self.edges.len() as i64 - self.genus.len() as i64 + 1) as u32
    }

    pub fn total_genus(&self) -> u32 {
        self.genus.iter().sum::<u32>() + self.betti()
    }

    pub fn is_connected(&self) -> bool {
        if self.genus.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.genus.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks every stable-graph invariant against the ambient space.
    pub fn validate(&self, space: MarkedSpace) -> Result<()> {
        for &(_, v) in &self.legs {
            if v >= self.genus.len() {
                return Err(Error::InvalidGraph(format!(
                    "leg attached to missing vertex {v}"
                )));
            }
        }
        for &(a, b) in &self.edges {
            if a >= self.genus.len() || b >= self.genus.len() {
                return Err(Error::InvalidGraph("edge endpoint out of range".into()));
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        let labels: Vec<u32> = self.legs.iter().map(|&(m, _)| m).collect();
        let expect: Vec<u32> = (1..=space.n).collect();
        if labels != expect {
            return Err(Error::InvalidGraph(format!(
                "legs carry labels {labels:?}, expected 1..={}",
                space.n
            )));
        }
        for v in 0..self.num_vertices() {
            if !vertex_stable(self.genus[v], self.valence(v)) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} unstable: genus {} valence {}",
                    self.genus[v],
                    self.valence(v)
                )));
            }
        }
        if self.total_genus() != space.g {
            return Err(Error::InvalidGraph(format!(
                "genus identity fails: sum {} + b1 {} != {}",
                self.genus.iter().sum::<u32>(),
                self.betti(),
                space.g
            )));
        }
        Ok(())
    }

    /// Contracts one edge: a loop raises its vertex genus, a separating or
    /// cycle edge merges its endpoints.
    pub fn contract_edge(&self, e: usize) -> Contraction {
        let (u, v) = self.edges[e];
        let nv = self.num_vertices();
        let mut vertex_map: Vec<VertexId> = (0..nv).collect();
        let mut genus = self.genus.clone();
        if u == v {
            genus[u] += 1;
        } else {
            let (keep, drop) = (u.min(v), u.max(v));
            genus[keep] += genus[drop];
            genus.remove(drop);
            for (w, slot) in vertex_map.iter_mut().enumerate() {
                *slot = if w == drop {
                    keep
                } else if w > drop {
                    w - 1
                } else {
                    w
                };
            }
        }
        let legs = self
            .legs
            .iter()
            .map(|&(m, w)| (m, vertex_map[w]))
            .collect::<Vec<_>>();
        let mut he_map = vec![None; 2 * self.edges.len()];
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if k == e {
                continue;
            }
            let new_k = edges.len();
            he_map[2 * k] = Some(2 * new_k);
            he_map[2 * k + 1] = Some(2 * new_k + 1);
            edges.push((vertex_map[a], vertex_map[b]));
        }
        Contraction {
            graph: StableGraph::new(genus, legs, edges),
            he_map,
            vertex_map,
        }
    }

    /// Contracts a set of edges, composing the correspondences.
    pub fn contract_edges(&self, mut to_contract: Vec<usize>) -> Contraction {
        to_contract.sort_unstable();
        to_contract.dedup();
        let mut graph = self.clone();
        let mut he_map: Vec<Option<HalfEdge>> = (0..2 * self.edges.len()).map(Some).collect();
        let mut vertex_map: Vec<VertexId> = (0..self.num_vertices()).collect();
        // Contract from the highest index so earlier indices stay valid.
        for &e in to_contract.iter().rev() {
            let c = graph.contract_edge(e);
            for slot in he_map.iter_mut() {
                *slot = slot.and_then(|h| c.he_map[h]);
            }
            for slot in vertex_map.iter_mut() {
                *slot = c.vertex_map[*slot];
            }
            graph = c.graph;
        }
        Contraction {
            graph,
            he_map,
            vertex_map,
        }
    }

    /// Applies a permutation of marking labels (`perm[old - 1] = new`).
    pub fn relabel_markings(&self, perm: &[u32]) -> StableGraph {
        let legs = self
            .legs
            .iter()
            .map(|&(m, v)| (perm[m as usize - 1], v))
            .collect();
        StableGraph::new(self.genus.clone(), legs, self.edges.clone())
    }

    /// Whether removing edge `e` (not contracting it) disconnects the graph.
    pub fn edge_separates(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        if u == v {
            return false;
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(w) = stack.pop() {
            for (k, &(a, b)) in self.edges.iter().enumerate() {
                if k == e {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == w && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        !seen[v]
    }

    /// The divisor type of edge `e`: which one-edge graph it contracts onto.
    /// For a separating edge the side data is normalized so that
    /// (h, J) and (g - h, J^c) name the same kind.
    pub fn edge_kind(&self, e: usize) -> EdgeKind {
        if !self.edge_separates(e) {
            return EdgeKind::NonSeparating;
        }
        let (u, v) = self.edges[e];
        // Collect the side containing u (excluding edge e).
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(w) = stack.pop() {
            for (k, &(a, b)) in self.edges.iter().enumerate() {
                if k == e {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == w && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        let g_total = self.total_genus();
        let mut side_edges = 0u32;
        for (k, &(a, _)) in self.edges.iter().enumerate() {
            if k != e && seen[a] {
                side_edges += 1;
            }
        }
        let side_vertices = seen.iter().filter(|&&s| s).count() as u32;
        let side_genus: u32 = (0..self.num_vertices())
            .filter(|&w| seen[w])
            .map(|w| self.genus[w])
            .sum::<u32>()
            + (side_edges + 1 - side_vertices);
        let side_legs: BTreeSet<u32> = self
            .legs
            .iter()
            .filter(|&&(_, w)| seen[w])
            .map(|&(m, _)| m)
            .collect();
        let n = self.legs.len() as u32;
        let _ = v;
        normalized_sep(g_total, n, side_genus, side_legs)
    }

    /// All concrete one-edge degenerations (not deduplicated up to
    /// isomorphism): genus-reducing loops and vertex splittings.
    pub fn raw_degenerations(&self) -> Vec<StableGraph> {
        let mut out = Vec::new();
        for v in 0..self.num_vertices() {
            if self.genus[v] >= 1 {
                let mut genus = self.genus.clone();
                genus[v] -= 1;
                let mut edges = self.edges.clone();
                edges.push((v, v));
                out.push(StableGraph::new(genus, self.legs.clone(), edges));
            }
            // Split vertex v: distribute its flags over two new vertices.
            let legs_here: Vec<u32> = self.legs_at(v);
            let hes_here: Vec<HalfEdge> = self.half_edges_at(v);
            let flags = legs_here.len() + hes_here.len();
            let gv = self.genus[v];
            for g1 in 0..=gv {
                for mask in 0..(1u32 << flags) {
                    let side1 = mask.count_ones();
                    let side2 = flags as u32 - side1;
                    // Quick stability screen for the two halves.
                    if !vertex_stable(g1, side1 + 1) || !vertex_stable(gv - g1, side2 + 1) {
                        continue;
                    }
                    let w = self.num_vertices();
                    let mut genus = self.genus.clone();
                    genus[v] = g1;
                    genus.push(gv - g1);
                    let mut edges = self.edges.clone();
                    let move_half = |h: HalfEdge, edges: &mut Vec<(VertexId, VertexId)>| {
                        if h % 2 == 0 {
                            edges[h / 2].0 = w;
                        } else {
                            edges[h / 2].1 = w;
                        }
                    };
                    let mut legs = self.legs.clone();
                    for (i, &m) in legs_here.iter().enumerate() {
                        if mask & (1 << i) == 0 {
                            // Flag moves to the new vertex.
                            for slot in legs.iter_mut() {
                                if slot.0 == m {
                                    slot.1 = w;
                                }
                            }
                        }
                    }
                    for (i, &h) in hes_here.iter().enumerate() {
                        if mask & (1 << (legs_here.len() + i)) == 0 {
                            move_half(h, &mut edges);
                        }
                    }
                    edges.push((v, w));
                    out.push(StableGraph::new(genus, legs, edges));
                }
            }
        }
        out
    }
}

/// Normalizes separating-side data: (h, J) and (g - h, J^c) name the same
/// divisor; the representative is the lexicographically smaller pair.
pub fn normalized_sep(g: u32, n: u32, h: u32, side: BTreeSet<u32>) -> EdgeKind {
    let comp: BTreeSet<u32> = (1..=n).filter(|m| !side.contains(m)).collect();
    let mirror_h = g - h;
    let a = (h, side.iter().copied().collect::<Vec<_>>());
    let b = (mirror_h, comp.iter().copied().collect::<Vec<_>>());
    if a <= b {
        EdgeKind::Separating { h, side }
    } else {
        EdgeKind::Separating {
            h: mirror_h,
            side: comp,
        }
    }
}

/// JSON interchange form of a stable graph (used by the CLI).
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub legs: Vec<LegJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
pub struct VertexJson {
    pub genus: u32,
}

#[derive(Serialize, Deserialize)]
pub struct LegJson {
    pub marking: u32,
    pub vertex: usize,
}

#[derive(Serialize, Deserialize)]
pub struct EdgeJson {
    pub v0: usize,
    pub v1: usize,
}

impl From<&StableGraph> for GraphJson {
    fn from(g: &StableGraph) -> Self {
        GraphJson {
            vertices: g.genus.iter().map(|&genus| VertexJson { genus }).collect(),
            legs: g
                .legs
                .iter()
                .map(|&(marking, vertex)| LegJson { marking, vertex })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|&(v0, v1)| EdgeJson { v0, v1 })
                .collect(),
        }
    }
}

impl From<&GraphJson> for StableGraph {
    fn from(j: &GraphJson) -> Self {
        StableGraph::new(
            j.vertices.iter().map(|v| v.genus).collect(),
            j.legs.iter().map(|l| (l.marking, l.vertex)).collect(),
            j.edges.iter().map(|e| (e.v0, e.v1)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(g: u32, n: u32) -> MarkedSpace {
        MarkedSpace::new(g, n).unwrap()
    }

    #[test]
    fn smooth_graph_is_valid() {
        let g = StableGraph::smooth(space(2, 3));
        g.validate(space(2, 3)).unwrap();
        assert_eq!(g.total_genus(), 2);
    }

    #[test]
    fn rejects_unstable_vertex() {
        // Genus-0 vertex of valence 2: two parallel edges to a genus-1
        // vertex carrying both legs.
        let g = StableGraph::new(vec![1, 0], vec![(1, 0), (2, 0)], vec![(0, 1), (0, 1)]);
        assert!(g.validate(space(2, 2)).is_err());
    }

    #[test]
    fn rejects_genus_mismatch_and_disconnected() {
        let g = StableGraph::new(vec![1], vec![(1, 0)], vec![]);
        assert!(g.validate(space(2, 1)).is_err());
        let h = StableGraph::new(vec![1, 1], vec![(1, 0)], vec![]);
        assert!(h.validate(space(2, 1)).is_err());
    }

    #[test]
    fn edge_kinds() {
        // gamma graph on (2,2): two parallel edges are both non-separating.
        let g = StableGraph::new(vec![1, 0], vec![(1, 1), (2, 1)], vec![(0, 1), (0, 1)]);
        g.validate(space(2, 2)).unwrap();
        assert_eq!(g.edge_kind(0), EdgeKind::NonSeparating);
        assert_eq!(g.edge_kind(1), EdgeKind::NonSeparating);

        // Separating edge of delta_{1:{1}} on (2,2).
        let s = StableGraph::new(vec![1, 1], vec![(1, 0), (2, 1)], vec![(0, 1)]);
        s.validate(space(2, 2)).unwrap();
        match s.edge_kind(0) {
            EdgeKind::Separating { h, side } => {
                assert_eq!(h, 1);
                assert_eq!(side, BTreeSet::from([1]));
            }
            _ => panic!("expected separating"),
        }
    }

    #[test]
    fn sep_normalization_identifies_mirror() {
        // On (2,2): (1, {2}) normalizes to (1, {1}).
        let k = normalized_sep(2, 2, 1, BTreeSet::from([2]));
        assert_eq!(
            k,
            EdgeKind::Separating {
                h: 1,
                side: BTreeSet::from([1])
            }
        );
    }

    #[test]
    fn contraction_round_trip() {
        let g = StableGraph::new(vec![1, 0], vec![(1, 1), (2, 1)], vec![(0, 1), (0, 1)]);
        let c = g.contract_edge(1);
        // Contracting one of two parallel edges leaves a loop-free merge?
        // No: the other edge becomes a loop on the merged vertex.
        assert_eq!(c.graph.num_vertices(), 1);
        assert_eq!(c.graph.num_edges(), 1);
        assert_eq!(c.graph.edges()[0], (0, 0));
        assert_eq!(c.graph.total_genus(), 2);
    }

    #[test]
    fn degenerations_of_smooth_genus_two() {
        // The two 1-edge graphs of the genus-2 space: an irreducible node
        // and the separating (1,1) split.
        let g = StableGraph::smooth(space(2, 0));
        let degens = g.raw_degenerations();
        let valid: Vec<_> = degens
            .iter()
            .filter(|d| d.validate(space(2, 0)).is_ok())
            .collect();
        assert!(!valid.is_empty());
        assert!(valid.iter().any(|d| d.num_vertices() == 1)); // loop
        assert!(valid.iter().any(|d| d.num_vertices() == 2)); // split
    }
}
