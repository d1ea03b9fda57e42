//! Products in the tautological ring.
//!
//! Two independent routes are implemented:
//!
//! * `mult_divisor` — the restriction rule for a single divisor generator:
//!   one term per one-edge degeneration whose new edge has the divisor's
//!   type, plus the excess term `(-psi - psi')` on every existing edge of
//!   that type.
//! * `mult` — the general product of decorated strata: a sum over generic
//!   common degenerations (graphs carrying compatible structures over both
//!   factors), decorations transported, with the excess factor on every
//!   edge identified in both factors.
//!
//! Both run over memoized structure tables: for canonical graphs `G` and
//! `A`, the table lists every way of realizing `A` as a contraction of `G`
//! at the half-edge level.

use crate::canon::{canonicalize_plain, isomorphisms, Morphism};
use crate::class::TautClass;
use crate::enumerate::{graphs_with_edges, register, RegGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, HalfEdge, StableGraph, VertexId};
use crate::rat::Rat;
use crate::space::MarkedSpace;
use crate::stratum::Stratum;
use dashmap::DashMap;
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::collections::BTreeSet;
use std::sync::Arc;

/// A divisor generator, as accepted by `mult_divisor`. Omega and lambda
/// are linear combinations of these and are expanded before this level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DivisorGen {
    Psi(u32),
    DeltaIrr,
    DeltaSep { h: u32, side: BTreeSet<u32> },
}

impl DivisorGen {
    /// Normalizes separating data and validates against the space.
    pub fn delta_sep(space: MarkedSpace, h: u32, side: BTreeSet<u32>) -> Result<DivisorGen> {
        if h > space.g || side.iter().any(|&m| m == 0 || m > space.n) {
            return Err(Error::InvalidSymbol {
                symbol: format!("d{h}:{side:?}"),
                g: space.g,
                n: space.n,
                reason: "side data out of range".into(),
            });
        }
        match crate::graph::normalized_sep(space.g, space.n, h, side) {
            EdgeKind::Separating { h, side } => {
                let comp = space.n as usize - side.len();
                let side_ok = 2 * h as i64 - 2 + side.len() as i64 + 1 > 0;
                let comp_ok = 2 * (space.g - h) as i64 - 2 + comp as i64 + 1 > 0;
                if !side_ok || !comp_ok {
                    return Err(Error::InvalidSymbol {
                        symbol: format!("d{h}:{side:?}"),
                        g: space.g,
                        n: space.n,
                        reason: "no stable one-edge graph with this side data".into(),
                    });
                }
                Ok(DivisorGen::DeltaSep { h, side })
            }
            EdgeKind::NonSeparating => unreachable!(),
        }
    }

    fn matches(&self, kind: &EdgeKind) -> bool {
        match (self, kind) {
            (DivisorGen::DeltaIrr, EdgeKind::NonSeparating) => true,
            (DivisorGen::DeltaSep { h, side }, EdgeKind::Separating { h: h2, side: s2 }) => {
                h == h2 && side == s2
            }
            _ => false,
        }
    }
}

/// A realization of graph `A` as a contraction of graph `G`: which edges
/// of `G` survive, where each half-edge of `A` lands, and how vertices of
/// `G` collapse onto vertices of `A`.
#[derive(Clone, Debug)]
pub struct Structure {
    pub used_edges: u64,
    /// A-half-edge -> G-half-edge (injective).
    pub he_map: Vec<HalfEdge>,
    /// G-vertex -> A-vertex.
    pub vmap: Vec<VertexId>,
}

static AUTS: Lazy<DashMap<Vec<u8>, Arc<Vec<Morphism>>>> = Lazy::new(DashMap::new);
static STRUCTS: Lazy<DashMap<(Vec<u8>, Vec<u8>), Arc<Vec<Structure>>>> = Lazy::new(DashMap::new);
static PAIR_MEMO: Lazy<DashMap<(Vec<u8>, Vec<u8>), Rat>> = Lazy::new(DashMap::new);

fn half_edge_automorphisms(reg: &RegGraph) -> Arc<Vec<Morphism>> {
    if let Some(hit) = AUTS.get(&reg.enc) {
        return hit.clone();
    }
    let val = Arc::new(isomorphisms(&reg.graph, &reg.graph));
    AUTS.insert(reg.enc.clone(), val.clone());
    val
}

/// All structures realizing `a` as a contraction of `g`.
pub fn structures(g: &RegGraph, a: &RegGraph) -> Arc<Vec<Structure>> {
    let key = (g.enc.clone(), a.enc.clone());
    if let Some(hit) = STRUCTS.get(&key) {
        return hit.clone();
    }
    let mut out = Vec::new();
    let eg = g.graph.num_edges();
    let ea = a.graph.num_edges();
    if eg >= ea {
        let contract = eg - ea;
        // Iterate subsets of edges of G of the right size to contract.
        for mask in 0u64..(1u64 << eg) {
            if mask.count_ones() as usize != contract {
                continue;
            }
            let to_contract: Vec<usize> = (0..eg).filter(|&e| mask & (1 << e) != 0).collect();
            let c = g.graph.contract_edges(to_contract);
            let canon = canonicalize_plain(&c.graph);
            if canon.enc != a.enc {
                continue;
            }
            // Base correspondence: G-half-edge -> A-half-edge.
            let mut base = vec![usize::MAX; 2 * ea];
            for h in 0..2 * eg {
                if let Some(mid) = c.he_map[h] {
                    base[canon.he_map[mid]] = h;
                }
            }
            let base_vmap: Vec<VertexId> = (0..g.graph.num_vertices())
                .map(|w| canon.vertex_map[c.vertex_map[w]])
                .collect();
            let used = !mask & ((1u64 << eg) - 1);
            for alpha in half_edge_automorphisms(a).iter() {
                let he_map: Vec<HalfEdge> = (0..2 * ea).map(|h| base[alpha.hemap[h]]).collect();
                let vmap: Vec<VertexId> = base_vmap.iter().map(|&v| alpha.vmap[v]).collect();
                out.push(Structure {
                    used_edges: used,
                    he_map,
                    vmap,
                });
            }
        }
    }
    let val = Arc::new(out);
    STRUCTS.insert(key, val.clone());
    val
}

/// Decoration data on a graph during product expansion.
#[derive(Clone)]
struct RawDecoration {
    psi_leg: Vec<u32>,
    psi_he: Vec<u32>,
    kappa: Vec<Vec<u32>>,
}

impl RawDecoration {
    fn empty(g: &StableGraph) -> Self {
        RawDecoration {
            psi_leg: vec![0; g.num_legs()],
            psi_he: vec![0; 2 * g.num_edges()],
            kappa: vec![Vec::new(); g.num_vertices()],
        }
    }
}

/// Transports the decorations of `s` onto `g` along a structure, except
/// kappa classes, which distribute over contraction fibers and are
/// returned as (value, candidate vertices) choice lists.
fn transport(
    s: &Stratum,
    st: &Structure,
    g: &StableGraph,
    dec: &mut RawDecoration,
    kappa_choices: &mut Vec<(u32, Vec<VertexId>)>,
) {
    for (i, &e) in s.psi_leg().iter().enumerate() {
        dec.psi_leg[i] += e;
    }
    for (h, &e) in s.psi_he().iter().enumerate() {
        if e > 0 {
            dec.psi_he[st.he_map[h]] += e;
        }
    }
    for (va, ks) in s.kappa().iter().enumerate() {
        if ks.is_empty() {
            continue;
        }
        let fiber: Vec<VertexId> = (0..g.num_vertices())
            .filter(|&w| st.vmap[w] == va)
            .collect();
        for &k in ks {
            kappa_choices.push((k, fiber.clone()));
        }
    }
}

/// Runs `visit` on every expanded monomial of the product of two decorated
/// strata terms, with the exact coefficient (including 1/|Aut G| and the
/// excess signs). Terms are not canonicalized here.
fn for_each_product_monomial<F: FnMut(&Arc<RegGraph>, &RawDecoration, &Rat)>(
    space: MarkedSpace,
    sa: &Stratum,
    ca: &Rat,
    sb: &Stratum,
    cb: &Rat,
    visit: &mut F,
) -> Result<()> {
    let reg_a = register(sa.graph());
    let reg_b = register(sb.graph());
    let ea = reg_a.graph.num_edges();
    let eb = reg_b.graph.num_edges();
    let lo = ea.max(eb) as u32;
    let hi = ((ea + eb) as u32).min(space.dim());
    for eg in lo..=hi {
        for reg_g in graphs_with_edges(space, eg)?.iter() {
            let sas = structures(reg_g, &reg_a);
            if sas.is_empty() {
                continue;
            }
            let sbs = structures(reg_g, &reg_b);
            if sbs.is_empty() {
                continue;
            }
            let full = (1u64 << eg) - 1;
            let base_coeff = ca.clone() * cb.clone()
                / Rat::from_integer(num_bigint::BigInt::from(reg_g.aut));
            for a in sas.iter() {
                for b in sbs.iter() {
                    if a.used_edges | b.used_edges != full {
                        continue;
                    }
                    let common = a.used_edges & b.used_edges;
                    let mut dec = RawDecoration::empty(&reg_g.graph);
                    let mut kappa_choices = Vec::new();
                    transport(sa, a, &reg_g.graph, &mut dec, &mut kappa_choices);
                    transport(sb, b, &reg_g.graph, &mut dec, &mut kappa_choices);
                    let excess_edges: Vec<usize> =
                        (0..eg as usize).filter(|&e| common & (1 << e) != 0).collect();
                    // Expand excess factors and kappa placements.
                    expand_monomials(
                        &reg_g,
                        dec,
                        &kappa_choices,
                        &excess_edges,
                        &base_coeff,
                        visit,
                    );
                }
            }
        }
    }
    Ok(())
}

fn expand_monomials<F: FnMut(&Arc<RegGraph>, &RawDecoration, &Rat)>(
    reg_g: &Arc<RegGraph>,
    dec: RawDecoration,
    kappa_choices: &[(u32, Vec<VertexId>)],
    excess_edges: &[usize],
    base_coeff: &Rat,
    visit: &mut F,
) {
    // Odometer over kappa fiber choices and excess half-edge choices.
    let mut kappa_idx = vec![0usize; kappa_choices.len()];
    loop {
        let mut with_kappa = dec.clone();
        for (ci, &(k, ref fiber)) in kappa_choices.iter().enumerate() {
            let v = fiber[kappa_idx[ci]];
            with_kappa.kappa[v].push(k);
        }
        for k in &mut with_kappa.kappa {
            k.sort_unstable();
        }
        let sign_coeff = if excess_edges.len() % 2 == 0 {
            base_coeff.clone()
        } else {
            -base_coeff.clone()
        };
        for excess_mask in 0u32..(1u32 << excess_edges.len()) {
            let mut m = with_kappa.clone();
            for (i, &e) in excess_edges.iter().enumerate() {
                let h = if excess_mask & (1 << i) != 0 {
                    2 * e
                } else {
                    2 * e + 1
                };
                m.psi_he[h] += 1;
            }
            visit(reg_g, &m, &sign_coeff);
        }
        // Advance the kappa odometer.
        let mut ci = 0;
        loop {
            if ci == kappa_choices.len() {
                return;
            }
            kappa_idx[ci] += 1;
            if kappa_idx[ci] < kappa_choices[ci].1.len() {
                break;
            }
            kappa_idx[ci] = 0;
            ci += 1;
        }
        if kappa_choices.is_empty() {
            return;
        }
    }
}

/// Product of two tautological classes on the same space.
pub fn mult(x: &TautClass, y: &TautClass) -> Result<TautClass> {
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch(
            x.space().g,
            x.space().n,
            y.space().g,
            y.space().n,
        ));
    }
    let space = x.space();
    let mut out = TautClass::zero(space);
    for (sa, ca) in x.iter() {
        for (sb, cb) in y.iter() {
            if (sa.degree() + sb.degree()) > space.dim() {
                continue;
            }
            for_each_product_monomial(space, sa, ca, sb, cb, &mut |reg_g, dec, coeff| {
                let s = Stratum::build(&reg_g.graph, &dec.psi_leg, &dec.psi_he, &dec.kappa);
                out.add_term(s, coeff.clone());
            })?;
        }
    }
    Ok(out)
}

/// Integral of the product of two classes, computed without materializing
/// canonical forms: the pairing workhorse.
pub fn mult_integrate(x: &TautClass, y: &TautClass) -> Result<Rat> {
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch(
            x.space().g,
            x.space().n,
            y.space().g,
            y.space().n,
        ));
    }
    let space = x.space();
    let dim = space.dim();
    let mut acc = Rat::zero();
    for (sa, ca) in x.iter() {
        for (sb, cb) in y.iter() {
            if sa.degree() + sb.degree() != dim {
                continue;
            }
            acc += ca.clone() * cb.clone() * pair_strata(space, sa, sb)?;
        }
    }
    Ok(acc)
}

/// Integral of the product of two single decorated strata (coefficient 1),
/// memoized on the pair of canonical encodings.
fn pair_strata(space: MarkedSpace, sa: &Stratum, sb: &Stratum) -> Result<Rat> {
    let key = if sa.encoding() <= sb.encoding() {
        (sa.encoding().to_vec(), sb.encoding().to_vec())
    } else {
        (sb.encoding().to_vec(), sa.encoding().to_vec())
    };
    if let Some(hit) = PAIR_MEMO.get(&key) {
        return Ok(hit.clone());
    }
    let one = Rat::from_integer(1.into());
    let mut acc = Rat::zero();
    for_each_product_monomial(space, sa, &one, sb, &one, &mut |reg_g, dec, coeff| {
        let val = integrate_raw(&reg_g.graph, dec);
        if !val.is_zero() {
            acc += coeff.clone() * val;
        }
    })?;
    PAIR_MEMO.insert(key, acc.clone());
    Ok(acc)
}

/// Vertex-by-vertex integral of a raw decorated graph (no 1/|Aut|; the
/// pushforward convention integrates factor moduli directly).
fn integrate_raw(g: &StableGraph, dec: &RawDecoration) -> Rat {
    let mut acc = Rat::from_integer(1.into());
    for v in 0..g.num_vertices() {
        let mut psis: Vec<u32> = Vec::new();
        for (i, &(_, w)) in g.legs().iter().enumerate() {
            if w == v {
                psis.push(dec.psi_leg[i]);
            }
        }
        for h in g.half_edges_at(v) {
            psis.push(dec.psi_he[h]);
        }
        let val = crate::integrate::vertex_integral(g.genus_of(v), &psis, &dec.kappa[v]);
        if val.is_zero() {
            return Rat::zero();
        }
        acc *= val;
    }
    acc
}

pub(crate) fn integrate_stratum(s: &Stratum) -> Rat {
    let dec = RawDecoration {
        psi_leg: s.psi_leg().to_vec(),
        psi_he: s.psi_he().to_vec(),
        kappa: s.kappa().to_vec(),
    };
    integrate_raw(s.graph(), &dec)
}

/// Clears the memoized stratum-pair integrals. Structure tables are kept;
/// benchmarks use this to measure the pairing loop itself.
pub fn clear_pairing_memo() {
    PAIR_MEMO.clear();
}

/// Multiplies a class by a single divisor generator via the restriction
/// rule. Must agree with `mult` against the generator's class; the test
/// suite asserts this on every sampled product.
pub fn mult_divisor(x: &TautClass, gen: &DivisorGen) -> Result<TautClass> {
    let space = x.space();
    if let DivisorGen::Psi(i) = gen {
        if *i == 0 || *i > space.n {
            return Err(Error::InvalidSymbol {
                symbol: format!("psi{i}"),
                g: space.g,
                n: space.n,
                reason: "marking out of range".into(),
            });
        }
        let mut out = TautClass::zero(space);
        for (s, c) in x.iter() {
            let pos = s
                .graph()
                .legs()
                .iter()
                .position(|&(m, _)| m == *i)
                .expect("marking present");
            let mut psi_leg = s.psi_leg().to_vec();
            psi_leg[pos] += 1;
            out.add_term(
                Stratum::build(s.graph(), &psi_leg, s.psi_he(), s.kappa()),
                c.clone(),
            );
        }
        return Ok(out);
    }

    let mut out = TautClass::zero(space);
    for (sa, ca) in x.iter() {
        let reg_a = register(sa.graph());
        let ea = reg_a.graph.num_edges();
        // (a) degeneration terms: one-edge refinements whose new edge has
        // the divisor's type, each counted once per structure, weighted
        // 1/|Aut G|.
        if (ea as u32) < space.dim() {
            for reg_g in graphs_with_edges(space, ea as u32 + 1)?.iter() {
                let kinds: Vec<EdgeKind> = (0..reg_g.graph.num_edges())
                    .map(|e| reg_g.graph.edge_kind(e))
                    .collect();
                if !kinds.iter().any(|k| gen.matches(k)) {
                    continue;
                }
                let coeff =
                    ca.clone() / Rat::from_integer(num_bigint::BigInt::from(reg_g.aut));
                for st in structures(reg_g, &reg_a).iter() {
                    let new_edge = (0..reg_g.graph.num_edges())
                        .find(|&e| st.used_edges & (1 << e) == 0)
                        .expect("one contracted edge");
                    if !gen.matches(&kinds[new_edge]) {
                        continue;
                    }
                    let mut dec = RawDecoration::empty(&reg_g.graph);
                    let mut kappa_choices = Vec::new();
                    transport(sa, st, &reg_g.graph, &mut dec, &mut kappa_choices);
                    expand_monomials(
                        reg_g,
                        dec,
                        &kappa_choices,
                        &[],
                        &coeff,
                        &mut |rg, d, c| {
                            out.add_term(
                                Stratum::build(&rg.graph, &d.psi_leg, &d.psi_he, &d.kappa),
                                c.clone(),
                            );
                        },
                    );
                }
            }
        }
        // (b) excess terms: (-psi - psi') on each existing edge of the
        // divisor's type.
        for e in 0..ea {
            if !gen.matches(&reg_a.graph.edge_kind(e)) {
                continue;
            }
            // The term graph is sa's graph itself; bump each half-edge.
            for h in [2 * e, 2 * e + 1] {
                let mut psi_he = sa.psi_he().to_vec();
                psi_he[h] += 1;
                out.add_term(
                    Stratum::build(sa.graph(), sa.psi_leg(), &psi_he, sa.kappa()),
                    -ca.clone(),
                );
            }
        }
    }
    Ok(out)
}
