//! Integration of tautological classes: vertex-by-vertex psi integrals via
//! the Witten kernel, with kappa classes peeled off through the comparison
//! with one added point.

use crate::class::TautClass;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::witten;
use dashmap::DashMap;
use num_traits::Zero;
use once_cell::sync::Lazy;

static MEMO: Lazy<DashMap<(u32, Vec<u32>, Vec<u32>), Rat>> = Lazy::new(DashMap::new);

/// ∫ over the (g, n) vertex space of ∏ psi_i^{d_i} · ∏ kappa_{a_j}.
///
/// Kappa classes are eliminated one at a time: kappa_a is the pushforward
/// of psi^{a+1} from the space with one added point, and the remaining
/// kappa_b pull back as kappa_b - psi_new^b. The correction terms merge
/// into the new point's psi power with alternating signs; comparison terms
/// for the old psi classes die against the positive psi_new power.
pub fn vertex_integral(g: u32, psis: &[u32], kappas: &[u32]) -> Rat {
    let mut p = psis.to_vec();
    p.sort_unstable();
    let mut k = kappas.to_vec();
    k.sort_unstable();
    vertex_integral_sorted(g, p, k)
}

fn vertex_integral_sorted(g: u32, psis: Vec<u32>, kappas: Vec<u32>) -> Rat {
    let dim = 3 * g as i64 - 3 + psis.len() as i64;
    let total: i64 = psis.iter().map(|&d| d as i64).sum::<i64>()
        + kappas.iter().map(|&a| a as i64).sum::<i64>();
    if total != dim {
        return Rat::zero();
    }
    if kappas.is_empty() {
        return witten::tau(g, &psis).expect("vertex space stable");
    }
    let key = (g, psis.clone(), kappas.clone());
    if let Some(hit) = MEMO.get(&key) {
        return hit.clone();
    }
    let (last, rest) = kappas.split_last().expect("nonempty");
    let m = rest.len();
    let mut acc = Rat::zero();
    for mask in 0u32..(1u32 << m) {
        let mut new_power = *last + 1;
        let mut remaining = Vec::new();
        for (j, &a) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                new_power += a;
            } else {
                remaining.push(a);
            }
        }
        let mut new_psis = psis.clone();
        new_psis.push(new_power);
        new_psis.sort_unstable();
        let term = vertex_integral_sorted(g, new_psis, remaining);
        if mask.count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    MEMO.insert(key, acc.clone());
    acc
}

/// Integrates a class over its space: only top-degree terms contribute,
/// each as the product of its vertex integrals.
pub fn integrate(cls: &TautClass) -> Rat {
    let dim = cls.space().dim();
    let mut acc = Rat::zero();
    for (s, c) in cls.iter() {
        if s.degree() != dim {
            continue;
        }
        acc += c.clone() * crate::mult::integrate_stratum(s);
    }
    acc
}

/// Pairs two classes of complementary degree: ∫ a·b.
pub fn pair(a: &TautClass, b: &TautClass) -> Result<Rat> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch(
            a.space().g,
            a.space().n,
            b.space().g,
            b.space().n,
        ));
    }
    let (da, db) = (a.homogeneous_degree()?, b.homogeneous_degree()?);
    if !a.is_zero() && !b.is_zero() && da + db != a.space().dim() {
        return Err(Error::DegreeMismatch(format!(
            "degrees {da} + {db} != dim {}",
            a.space().dim()
        )));
    }
    crate::mult::mult_integrate(a, b)
}
