//! Constructors for the named generator classes. Each returns the stack
//! fundamental class of its locus: the pushforward term carries the
//! automorphism correction `1/|Aut|` in its coefficient.

use crate::class::TautClass;
use crate::enumerate::register;
use crate::error::{Error, Result};
use crate::graph::StableGraph;
use crate::mult::DivisorGen;
use crate::rat::{rat, Rat};
use crate::space::MarkedSpace;
use crate::stratum::Stratum;
use num_bigint::BigInt;
use std::collections::BTreeSet;

fn invalid(space: MarkedSpace, symbol: &str, reason: &str) -> Error {
    Error::InvalidSymbol {
        symbol: symbol.to_string(),
        g: space.g,
        n: space.n,
        reason: reason.to_string(),
    }
}

/// Stack fundamental class of the closed stratum of a stable graph.
pub fn boundary_stratum_class(space: MarkedSpace, graph: &StableGraph) -> Result<TautClass> {
    graph.validate(space)?;
    let reg = register(graph);
    Ok(TautClass::from_term(
        space,
        Stratum::undecorated(&reg.graph),
        Rat::new(BigInt::from(1), BigInt::from(reg.aut)),
    ))
}

pub fn psi_class(space: MarkedSpace, i: u32) -> Result<TautClass> {
    if i == 0 || i > space.n {
        return Err(invalid(space, &format!("psi{i}"), "marking out of range"));
    }
    let smooth = StableGraph::smooth(space);
    let mut psi_leg = vec![0; space.n as usize];
    psi_leg[i as usize - 1] = 1;
    Ok(TautClass::from_term(
        space,
        Stratum::build(&smooth, &psi_leg, &[], &vec![Vec::new(); 1]),
        Rat::from_integer(1.into()),
    ))
}

/// Smooth stratum decorated with kappa_a.
pub fn kappa_class(space: MarkedSpace, a: u32) -> Result<TautClass> {
    if a == 0 || a > space.dim() {
        return Err(invalid(space, &format!("kappa{a}"), "index out of range"));
    }
    let smooth = StableGraph::smooth(space);
    Ok(TautClass::from_term(
        space,
        Stratum::build(
            &smooth,
            &vec![0; space.n as usize],
            &[],
            &vec![vec![a]],
        ),
        Rat::from_integer(1.into()),
    ))
}

pub fn delta_irr(space: MarkedSpace) -> Result<TautClass> {
    if space.g == 0 {
        return Err(invalid(space, "dirr", "no irreducible-node divisor at genus 0"));
    }
    let legs = (1..=space.n).map(|m| (m, 0)).collect();
    let graph = StableGraph::new(vec![space.g - 1], legs, vec![(0, 0)]);
    boundary_stratum_class(space, &graph)
}

/// The separating boundary divisor with side data (h, J), normalized.
pub fn delta_sep(space: MarkedSpace, h: u32, side: BTreeSet<u32>) -> Result<TautClass> {
    let gen = DivisorGen::delta_sep(space, h, side)?;
    divisor_class(space, &gen)
}

/// The class of any divisor generator.
pub fn divisor_class(space: MarkedSpace, gen: &DivisorGen) -> Result<TautClass> {
    match gen {
        DivisorGen::Psi(i) => psi_class(space, *i),
        DivisorGen::DeltaIrr => delta_irr(space),
        DivisorGen::DeltaSep { h, side } => {
            let legs = (1..=space.n)
                .map(|m| (m, if side.contains(&m) { 0 } else { 1 }))
                .collect();
            let graph = StableGraph::new(vec![*h, space.g - h], legs, vec![(0, 1)]);
            boundary_stratum_class(space, &graph)
        }
    }
}

/// All distinct separating classes with genus-h side, as divisor
/// generators (deduplicated through the (h, J) ~ (g-h, J^c) symmetry).
pub fn delta_h_gens(space: MarkedSpace, h: u32) -> Vec<DivisorGen> {
    let mut seen = BTreeSet::new();
    let n = space.n;
    for mask in 0u32..(1 << n) {
        let side: BTreeSet<u32> = (1..=n).filter(|&m| mask & (1 << (m - 1)) != 0).collect();
        if let Ok(gen) = DivisorGen::delta_sep(space, h, side) {
            seen.insert(gen);
        }
    }
    seen.into_iter().collect()
}

/// The aggregate delta_1: sum of all distinct separating classes whose
/// side genus is 1.
pub fn delta1_aggregate(space: MarkedSpace) -> Result<TautClass> {
    let gens = delta_h_gens(space, 1);
    if gens.is_empty() {
        return Err(invalid(space, "d1", "no genus-1 separating divisor here"));
    }
    let mut out = TautClass::zero(space);
    for gen in gens {
        out.add(&divisor_class(space, &gen)?);
    }
    Ok(out)
}

/// lambda as a boundary combination: delta_irr/12 at genus 1, and
/// delta_irr/10 + delta_1/5 at genus 2. Zero at genus 0.
pub fn lambda(space: MarkedSpace) -> Result<TautClass> {
    match space.g {
        0 => Ok(TautClass::zero(space)),
        1 => Ok(delta_irr(space)?.scaled(&rat(1, 12))),
        2 => {
            let mut out = delta_irr(space)?.scaled(&rat(1, 10));
            out.add(&delta1_aggregate(space)?.scaled(&rat(1, 5)));
            Ok(out)
        }
        _ => Err(invalid(
            space,
            "la",
            "no boundary expression for lambda above genus 2",
        )),
    }
}

/// gamma_{1:J}: elliptic component carrying exactly the markings in J,
/// meeting the genus-(g-2) component in two points. Genus 2 only.
pub fn gamma1(space: MarkedSpace, side: BTreeSet<u32>) -> Result<TautClass> {
    if space.g != 2 {
        return Err(invalid(space, "gamma", "only supported at genus 2"));
    }
    if side.iter().any(|&m| m == 0 || m > space.n) {
        return Err(invalid(space, "gamma", "marking out of range"));
    }
    if side.len() as u32 + 1 > space.n {
        return Err(invalid(
            space,
            &format!("gamma{{1:{side:?}}}"),
            "genus-0 side needs a marking for stability",
        ));
    }
    let legs = (1..=space.n)
        .map(|m| (m, if side.contains(&m) { 0 } else { 1 }))
        .collect();
    let graph = StableGraph::new(vec![1, 0], legs, vec![(0, 1), (0, 1)]);
    boundary_stratum_class(space, &graph)
}

/// The decorated class delta_{g, psi^{g-1}}: a genus-g vertex with
/// psi^{g-1} at its half-edge, attached to a chain of rational components
/// carrying the markings in increasing order outward. At n = 1 the chain
/// is empty and the class is psi^{g-1} itself.
pub fn delta2psi(space: MarkedSpace) -> Result<TautClass> {
    let g = space.g;
    if g < 1 {
        return Err(invalid(space, "d2psi", "needs positive genus"));
    }
    let n = space.n;
    if n == 1 {
        let smooth = StableGraph::smooth(space);
        return Ok(TautClass::from_term(
            space,
            Stratum::build(&smooth, &[g - 1], &[], &vec![Vec::new(); 1]),
            Rat::from_integer(1.into()),
        ));
    }
    // Vertices: 0 = genus-g core; 1..n-1 rational chain.
    let chain = (n - 1) as usize;
    let mut genus = vec![g];
    genus.extend(std::iter::repeat(0).take(chain));
    let mut legs: Vec<(u32, usize)> = (1..n).map(|m| (m, m as usize)).collect();
    legs.push((n, chain));
    let edges: Vec<(usize, usize)> = (0..chain).map(|k| (k, k + 1)).collect();
    let graph = StableGraph::new(genus, legs, edges);
    graph.validate(space)?;
    let reg = register(&graph);
    debug_assert_eq!(reg.aut, 1);
    // The core's half-edge in the input coordinates is half-edge 0; find
    // its canonical position by rebuilding the stratum from raw data.
    let mut psi_he = vec![0u32; 2 * graph.num_edges()];
    psi_he[0] = g - 1;
    Ok(TautClass::from_term(
        space,
        Stratum::build(
            &graph,
            &vec![0; n as usize],
            &psi_he,
            &vec![Vec::new(); graph.num_vertices()],
        ),
        Rat::from_integer(1.into()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::integrate;
    use crate::rat::int;

    fn space(g: u32, n: u32) -> MarkedSpace {
        MarkedSpace::new(g, n).unwrap()
    }

    #[test]
    fn delta_irr_on_elliptic_space_integrates_to_half() {
        let cls = delta_irr(space(1, 1)).unwrap();
        assert_eq!(integrate(&cls), rat(1, 2));
    }

    #[test]
    fn gamma_needs_room_on_rational_side() {
        assert!(gamma1(space(2, 2), BTreeSet::from([1, 2])).is_err());
        assert!(gamma1(space(2, 2), BTreeSet::new()).is_ok());
        assert!(gamma1(space(2, 3), BTreeSet::from([3])).is_ok());
    }

    #[test]
    fn gamma_coefficient_is_automorphism_corrected() {
        let cls = gamma1(space(2, 2), BTreeSet::new()).unwrap();
        assert_eq!(cls.num_terms(), 1);
        let (_, c) = cls.iter().next().unwrap();
        assert_eq!(c.clone(), rat(1, 2));
    }

    #[test]
    fn delta_sep_normalizes_mirror_data() {
        let sp = space(2, 2);
        let a = delta_sep(sp, 1, BTreeSet::from([1])).unwrap();
        let b = delta_sep(sp, 1, BTreeSet::from([2])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn delta_sep_rejects_unstable_sides() {
        assert!(delta_sep(space(2, 2), 0, BTreeSet::from([1])).is_err());
        assert!(delta_sep(space(2, 2), 0, BTreeSet::from([1, 2])).is_ok());
    }

    #[test]
    fn aggregate_delta1_counts_distinct_classes() {
        // On (2,2): delta_{1:()} and delta_{1:{1}} = delta_{1:{2}} only.
        let cls = delta1_aggregate(space(2, 2)).unwrap();
        assert_eq!(cls.num_terms(), 2);
        for (_, c) in cls.iter() {
            assert_eq!(c.clone(), int(1));
        }
    }

    #[test]
    fn delta2psi_shapes() {
        let cls = delta2psi(space(2, 2)).unwrap();
        assert_eq!(cls.num_terms(), 1);
        let (s, c) = cls.iter().next().unwrap();
        assert_eq!(c.clone(), int(1));
        assert_eq!(s.degree(), 2);
        assert_eq!(s.graph().num_vertices(), 2);
        let cls3 = delta2psi(space(2, 3)).unwrap();
        let (s3, _) = cls3.iter().next().unwrap();
        assert_eq!(s3.degree(), 3);
        assert_eq!(s3.graph().num_vertices(), 3);
    }

    #[test]
    fn lambda_exists_only_in_low_genus() {
        assert!(lambda(space(2, 0)).is_ok());
        assert!(lambda(space(3, 0)).is_err());
    }
}
