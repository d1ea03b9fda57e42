//! Decorated boundary strata: a stable graph with psi exponents on legs
//! and half-edges and kappa indices on vertices, stored in canonical
//! coordinates so that isomorphic decorated strata are identical keys.

use crate::canon::{canonicalize_decorated, decorated_aut_order};
use crate::graph::{GraphJson, StableGraph};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::space::MarkedSpace;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Stratum {
    graph: StableGraph,
    /// psi exponent per leg position (legs are sorted by marking label).
    psi_leg: Vec<u32>,
    /// psi exponent per half-edge of the canonical representative.
    psi_he: Vec<u32>,
    /// kappa indices per vertex, sorted ascending.
    kappa: Vec<Vec<u32>>,
    enc: Vec<u8>,
}

impl Stratum {
    /// Canonicalizes a decorated graph given in arbitrary coordinates.
    pub fn build(
        graph: &StableGraph,
        psi_leg: &[u32],
        psi_he: &[u32],
        kappa: &[Vec<u32>],
    ) -> Stratum {
        debug_assert_eq!(psi_leg.len(), graph.num_legs());
        debug_assert_eq!(psi_he.len(), 2 * graph.num_edges());
        debug_assert_eq!(kappa.len(), graph.num_vertices());
        let mut kappa_sorted = kappa.to_vec();
        for k in &mut kappa_sorted {
            k.sort_unstable();
        }
        let c = canonicalize_decorated(graph, psi_leg, psi_he, &kappa_sorted);
        let mut psi_he_new = vec![0u32; psi_he.len()];
        for (h, &img) in c.he_map.iter().enumerate() {
            psi_he_new[img] = psi_he[h];
        }
        let mut kappa_new = vec![Vec::new(); kappa_sorted.len()];
        for (v, &img) in c.vertex_map.iter().enumerate() {
            kappa_new[img] = kappa_sorted[v].clone();
        }
        Stratum {
            graph: c.graph,
            psi_leg: psi_leg.to_vec(),
            psi_he: psi_he_new,
            kappa: kappa_new,
            enc: c.enc,
        }
    }

    pub fn undecorated(graph: &StableGraph) -> Stratum {
        Stratum::build(
            graph,
            &vec![0; graph.num_legs()],
            &vec![0; 2 * graph.num_edges()],
            &vec![Vec::new(); graph.num_vertices()],
        )
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }

    pub fn psi_leg(&self) -> &[u32] {
        &self.psi_leg
    }

    pub fn psi_he(&self) -> &[u32] {
        &self.psi_he
    }

    pub fn kappa(&self) -> &[Vec<u32>] {
        &self.kappa
    }

    pub fn encoding(&self) -> &[u8] {
        &self.enc
    }

    pub fn degree(&self) -> u32 {
        self.graph.num_edges() as u32
            + self.psi_leg.iter().sum::<u32>()
            + self.psi_he.iter().sum::<u32>()
            + self.kappa.iter().flatten().sum::<u32>()
    }

    /// Total decoration degree sitting on vertex `v`.
    pub fn local_degree(&self, v: usize) -> u32 {
        let mut d: u32 = self.kappa[v].iter().sum();
        for h in self.graph.half_edges_at(v) {
            d += self.psi_he[h];
        }
        for (i, &(_, w)) in self.graph.legs().iter().enumerate() {
            if w == v {
                d += self.psi_leg[i];
            }
        }
        d
    }

    /// True when some vertex carries more decoration degree than its
    /// moduli dimension; such a stratum is the zero class.
    pub fn is_trivially_zero(&self) -> bool {
        (0..self.graph.num_vertices()).any(|v| {
            let dim_v = 3 * self.graph.genus_of(v) as i64 - 3 + self.graph.valence(v) as i64;
            self.local_degree(v) as i64 > dim_v
        })
    }

    /// Automorphisms of the graph that fix the decoration.
    pub fn decorated_aut_order(&self) -> u64 {
        decorated_aut_order(&self.graph, &self.psi_he, &self.kappa)
    }

    /// Relabels markings and re-canonicalizes (`perm[old - 1] = new`).
    pub fn relabel(&self, perm: &[u32]) -> Stratum {
        let graph = self.graph.relabel_markings(perm);
        // Legs re-sort by new label; carry psi exponents along.
        let mut pairs: Vec<(u32, u32)> = self
            .graph
            .legs()
            .iter()
            .enumerate()
            .map(|(i, &(m, _))| (perm[m as usize - 1], self.psi_leg[i]))
            .collect();
        pairs.sort_unstable();
        let psi_leg: Vec<u32> = pairs.into_iter().map(|(_, e)| e).collect();
        Stratum::build(&graph, &psi_leg, &self.psi_he, &self.kappa)
    }
}

#[derive(Serialize, Deserialize)]
pub struct StratumJson {
    pub graph: GraphJson,
    pub psi_legs: BTreeMap<String, u32>,
    pub psi_half_edges: BTreeMap<String, u32>,
    pub kappa: Vec<Vec<u32>>,
    pub coeff: String,
}

impl Stratum {
    pub fn to_json(&self, coeff: &Rat) -> StratumJson {
        StratumJson {
            graph: GraphJson::from(&self.graph),
            psi_legs: self
                .graph
                .legs()
                .iter()
                .enumerate()
                .filter(|&(i, _)| self.psi_leg[i] > 0)
                .map(|(i, &(m, _))| (m.to_string(), self.psi_leg[i]))
                .collect(),
            psi_half_edges: self
                .psi_he
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(h, &e)| (h.to_string(), e))
                .collect(),
            kappa: self.kappa.clone(),
            coeff: format_rat(coeff),
        }
    }

    pub fn from_json(j: &StratumJson) -> Option<(Stratum, Rat)> {
        let graph = StableGraph::from(&j.graph);
        let mut psi_leg = vec![0u32; graph.num_legs()];
        for (i, &(m, _)) in graph.legs().iter().enumerate() {
            if let Some(&e) = j.psi_legs.get(&m.to_string()) {
                psi_leg[i] = e;
            }
        }
        let mut psi_he = vec![0u32; 2 * graph.num_edges()];
        for (k, &e) in &j.psi_half_edges {
            let h: usize = k.parse().ok()?;
            if h >= psi_he.len() {
                return None;
            }
            psi_he[h] = e;
        }
        if j.kappa.len() != graph.num_vertices() {
            return None;
        }
        Some((
            Stratum::build(&graph, &psi_leg, &psi_he, &j.kappa),
            parse_rat(&j.coeff)?,
        ))
    }
}

/// Enumerates all decorated strata of the given total degree, one per
/// isomorphism class. These span the tautological group in that degree.
pub fn decorated_strata(space: MarkedSpace, degree: u32) -> crate::error::Result<Vec<Stratum>> {
    let mut out: BTreeMap<Vec<u8>, Stratum> = BTreeMap::new();
    for e in 0..=degree.min(space.dim()) {
        for reg in crate::enumerate::graphs_with_edges(space, e)?.iter() {
            let rem = degree - e;
            let g = &reg.graph;
            let nl = g.num_legs();
            let nh = 2 * g.num_edges();
            let nv = g.num_vertices();
            // Distribute `rem` over psi slots and per-vertex kappa weight.
            let slots = nl + nh + nv;
            distribute(rem, slots, &mut |alloc| {
                let psi_leg = alloc[..nl].to_vec();
                let psi_he = alloc[nl..nl + nh].to_vec();
                // Each vertex's kappa budget splits into partitions.
                let budgets = &alloc[nl + nh..];
                let kappas: Vec<Vec<Vec<u32>>> =
                    budgets.iter().map(|&b| partitions(b)).collect();
                let mut idx = vec![0usize; nv];
                loop {
                    let kappa: Vec<Vec<u32>> = (0..nv).map(|v| kappas[v][idx[v]].clone()).collect();
                    let s = Stratum::build(g, &psi_leg, &psi_he, &kappa);
                    if !s.is_trivially_zero() {
                        out.entry(s.enc.clone()).or_insert(s);
                    }
                    // Odometer over kappa partition choices.
                    let mut v = 0;
                    loop {
                        if v == nv {
                            return;
                        }
                        idx[v] += 1;
                        if idx[v] < kappas[v].len() {
                            break;
                        }
                        idx[v] = 0;
                        v += 1;
                    }
                }
            });
        }
    }
    Ok(out.into_values().collect())
}

/// All partitions of `n` as sorted ascending lists (kappa multisets).
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 1..=n.min(max) {
            for mut rest in go(n - first, first) {
                rest.push(first);
                out.push(rest);
            }
        }
        out
    }
    go(n, n.max(1))
        .into_iter()
        .map(|mut p| {
            p.sort_unstable();
            p
        })
        .collect()
}

/// Calls `f` with every allocation of `total` into `slots` buckets.
fn distribute(total: u32, slots: usize, f: &mut impl FnMut(&[u32])) {
    fn go(rem: u32, alloc: &mut Vec<u32>, slots: usize, f: &mut impl FnMut(&[u32])) {
        if alloc.len() == slots {
            if rem == 0 {
                f(alloc);
            }
            return;
        }
        let last = alloc.len() + 1 == slots;
        let range = if last { rem..=rem } else { 0..=rem };
        for x in range {
            alloc.push(x);
            go(rem - x, alloc, slots, f);
            alloc.pop();
        }
    }
    if slots == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    go(total, &mut Vec::new(), slots, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(g: u32, n: u32) -> MarkedSpace {
        MarkedSpace::new(g, n).unwrap()
    }

    #[test]
    fn degree_counts_everything() {
        let g = StableGraph::new(vec![2, 0], vec![(1, 1), (2, 1)], vec![(0, 1)]);
        let s = Stratum::build(&g, &[0, 0], &[1, 0], &[vec![], vec![]]);
        assert_eq!(s.degree(), 2);
    }

    #[test]
    fn decorated_collisions_merge() {
        let g = StableGraph::new(vec![1, 1], vec![], vec![(0, 1)]);
        let a = Stratum::build(&g, &[], &[1, 0], &[vec![], vec![]]);
        let b = Stratum::build(&g, &[], &[0, 1], &[vec![], vec![]]);
        assert_eq!(a.encoding(), b.encoding());
    }

    #[test]
    fn trivially_zero_detection() {
        // psi^2 on a genus-0 vertex of valence 3 exceeds its dimension 0.
        let g = StableGraph::new(vec![0, 2], vec![(1, 0), (2, 0)], vec![(0, 1)]);
        let s = Stratum::build(&g, &[2, 0], &[0, 0], &[vec![], vec![]]);
        assert!(s.is_trivially_zero());
    }

    #[test]
    fn strata_counts_on_small_spaces() {
        // Codimension-1 strata of the closed genus-2 space.
        let graphs: Vec<_> = decorated_strata(space(2, 0), 1)
            .unwrap()
            .into_iter()
            .filter(|s| s.graph().num_edges() == 1)
            .collect();
        assert_eq!(graphs.len(), 2);
        // Degree-1 decorated strata also include smooth kappa_1.
        let all = decorated_strata(space(2, 0), 1).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn relabel_moves_decorations() {
        let g = StableGraph::new(vec![2, 0], vec![(1, 0), (2, 1), (3, 1)], vec![(0, 1)]);
        let s = Stratum::build(&g, &[1, 2, 0], &[0, 0], &[vec![], vec![]]);
        let t = s.relabel(&[1, 3, 2]); // swap markings 2 and 3
        assert_eq!(t.degree(), s.degree());
        // Marking 3 now carries the exponent 2.
        let pos3 = t.graph().legs().iter().position(|&(m, _)| m == 3).unwrap();
        assert_eq!(t.psi_leg()[pos3], 2);
    }

    #[test]
    fn partitions_are_complete() {
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
        assert_eq!(partitions(3).len(), 3); // 3, 1+2, 1+1+1
    }
}
