//! Intersection arithmetic on the three-dimensional test family: the base
//! is Y x F, where Y is the plane blown up at the nine base points of a
//! cubic pencil and F is an elliptic tail. Divisor classes on (2,3)
//! restrict to integer lattice classes; three triple products and a small
//! linear solve recover the multiplicities of the recursive construction.

use crate::error::{Error, Result};
use crate::rat::{int, is_positive_integer, rat, Rat};
use serde::Serialize;
use std::collections::BTreeMap;

/// A divisor class on the product threefold: `h` times the hyperplane
/// pullback, nine exceptional coefficients, and a fiber coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeClass {
    pub h: i64,
    pub e: [i64; 9],
    pub f: i64,
}

impl LatticeClass {
    pub const ZERO: LatticeClass = LatticeClass {
        h: 0,
        e: [0; 9],
        f: 0,
    };

    fn hyperplane(c: i64) -> LatticeClass {
        LatticeClass {
            h: c,
            ..LatticeClass::ZERO
        }
    }

    fn sigma(c: i64) -> LatticeClass {
        LatticeClass {
            h: 0,
            e: [c; 9],
            f: 0,
        }
    }

    fn exceptional0(c: i64) -> LatticeClass {
        let mut e = [0; 9];
        e[0] = c;
        LatticeClass { h: 0, e, f: 0 }
    }

    pub fn fiber(c: i64) -> LatticeClass {
        LatticeClass {
            h: 0,
            e: [0; 9],
            f: c,
        }
    }

    pub fn plus(&self, other: &LatticeClass) -> LatticeClass {
        let mut e = [0i64; 9];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.e[i] + other.e[i];
        }
        LatticeClass {
            h: self.h + other.h,
            e,
            f: self.f + other.f,
        }
    }

    pub fn neg(&self) -> LatticeClass {
        let mut e = [0i64; 9];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = -self.e[i];
        }
        LatticeClass {
            h: -self.h,
            e,
            f: -self.f,
        }
    }
}

/// Intersection form of the blown-up plane: H^2 = 1, E_i^2 = -1, mixed
/// products vanish.
fn surface_pairing(a: &LatticeClass, b: &LatticeClass) -> i64 {
    a.h * b.h - a.e.iter().zip(b.e.iter()).map(|(x, y)| x * y).sum::<i64>()
}

/// Trilinear intersection form of the threefold: a surface-surface pairing
/// against one fiber coefficient. Products of three surface classes or
/// with two or more fiber factors vanish.
pub fn triple_product(a: &LatticeClass, b: &LatticeClass, c: &LatticeClass) -> i64 {
    surface_pairing(a, b) * c.f + surface_pairing(a, c) * b.f + surface_pairing(b, c) * a.f
}

pub const DIVISOR_NAMES: [&str; 6] = ["psi1", "delta_irr", "lambda", "d0:{2,3}", "d1:{1}", "d1:0"];

/// Restriction of the named divisor classes to the family. Divisors not
/// meeting the family (the other separating classes and the remaining
/// cotangent classes) restrict to zero; names that are not divisors at
/// all are an error.
pub fn restrict_divisor(name: &str) -> Result<LatticeClass> {
    match name {
        "psi1" => Ok(LatticeClass::fiber(1)),
        "delta_irr" | "dirr" => Ok(LatticeClass::hyperplane(36).plus(&LatticeClass::sigma(-12))),
        "lambda" | "la" => Ok(LatticeClass::hyperplane(3).plus(&LatticeClass::sigma(-1))),
        "d0:{2,3}" => Ok(LatticeClass::hyperplane(-3)
            .plus(&LatticeClass::sigma(1))
            .plus(&LatticeClass::exceptional0(-1))),
        "d1:{1}" => Ok(LatticeClass::hyperplane(-3)
            .plus(&LatticeClass::sigma(1))
            .plus(&LatticeClass::exceptional0(-1))
            .plus(&LatticeClass::fiber(-1))),
        "d1:0" | "d1:{}" => Ok(LatticeClass::exceptional0(1).plus(&LatticeClass::fiber(1))),
        "psi2" | "psi3" => Ok(LatticeClass::ZERO),
        _ if is_divisor_name(name) => Ok(LatticeClass::ZERO),
        _ => Err(Error::UnknownDivisor(name.to_string())),
    }
}

/// Separating-divisor names `d0:{...}` / `d1:{...}` / `d1:j` with markings
/// among 1..=3.
fn is_divisor_name(name: &str) -> bool {
    let rest = match (name.strip_prefix("d0:{"), name.strip_prefix("d1:{")) {
        (Some(r), _) | (_, Some(r)) => r,
        _ => return false,
    };
    match rest.strip_suffix('}') {
        Some("") => true,
        Some(list) => list
            .split(',')
            .all(|m| matches!(m.trim(), "1" | "2" | "3")),
        None => false,
    }
}

/// The restriction of the pulled-back one-point class: 3 omega_3 - lambda
/// - delta_1, where omega_3 restricts to minus the collision divisor and
/// the aggregate delta_1 meets the family in its two visible components.
pub fn restricted_hyp21() -> Result<LatticeClass> {
    let omega3 = restrict_divisor("d0:{2,3}")?.neg();
    let lambda = restrict_divisor("lambda")?;
    let delta1 = restrict_divisor("d1:{1}")?.plus(&restrict_divisor("d1:0")?);
    let mut acc = LatticeClass::ZERO;
    for _ in 0..3 {
        acc = acc.plus(&omega3);
    }
    Ok(acc.plus(&lambda.neg()).plus(&delta1.neg()))
}

/// The pulled-back two-point class as a sum of products of two restricted
/// divisor classes, with the printed coefficients of the divisor
/// polynomial.
pub fn restricted_hyp22_pullback() -> Result<Vec<(Rat, LatticeClass, LatticeClass)>> {
    // Under the pullback forgetting the third point, psi_1 restricts to
    // the fiber class and psi_2 to minus the collision divisor.
    let psi1 = restrict_divisor("psi1")?;
    let psi2 = restrict_divisor("d0:{2,3}")?.neg();
    let d11 = restrict_divisor("d1:{1}")?;
    let d10 = restrict_divisor("d1:0")?;
    let dirr = restrict_divisor("delta_irr")?;
    let mut terms = vec![
        (int(6), psi1, psi2),
        (rat(-3, 2), psi1, psi1),
        (rat(-3, 2), psi2, psi2),
    ];
    for psi in [psi1, psi2] {
        terms.push((rat(-21, 10), psi, d11));
        terms.push((rat(-3, 5), psi, d10));
        terms.push((rat(-1, 20), psi, dirr));
    }
    Ok(terms)
}

fn evaluate_against(third: &LatticeClass) -> Result<Rat> {
    let mut acc = Rat::from_integer(0.into());
    for (coeff, a, b) in restricted_hyp22_pullback()? {
        acc += coeff * int(triple_product(&a, &b, third));
    }
    Ok(acc)
}

/// Triple product of the two pulled-back classes on the family.
pub fn product_hyp21_hyp22() -> Result<Rat> {
    evaluate_against(&restricted_hyp21()?)
}

/// Triple product of the pulled-back two-point class with the collision
/// divisor.
pub fn product_hyp22_d023() -> Result<Rat> {
    evaluate_against(&restrict_divisor("d0:{2,3}")?)
}

/// The family meets the first torsion component transversally in 12 * 3
/// points: twelve rational nodal fibers times three nontrivial 2-torsion
/// points.
pub const XI1_FAMILY_DEGREE: i64 = 12 * 3;

/// The quoted pushforward constraints: forgetting the first point sends
/// the construction onto 5 times the two-point identity, giving
/// 4a + b = 5, 5b = 5, 4c + d = 5.
pub const PUSHFORWARD_TOTAL: i64 = 5;

#[derive(Clone, Debug, Serialize)]
pub struct Multiplicities {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
}

/// Solves the multiplicity system from the quoted pushforward constraints
/// and the recomputed family relation. Intersection multiplicities must
/// come out as positive integers; anything else signals a transcription
/// bug and is reported with the offending values.
pub fn solve_multiplicities() -> Result<(Rat, Rat, Rat, Rat)> {
    solve_with(&product_hyp21_hyp22()?, &product_hyp22_d023()?)
}

pub(crate) fn solve_with(family_lhs: &Rat, beta_coef: &Rat) -> Result<(Rat, Rat, Rat, Rat)> {
    let total = int(PUSHFORWARD_TOTAL);
    // 5 beta = 5.
    let beta = total.clone() / int(PUSHFORWARD_TOTAL);
    // 4 alpha + beta = 5.
    let alpha = (total.clone() - beta.clone()) / int(4);
    // family_lhs = beta * beta_coef + gamma * xi1_degree.
    let gamma = (family_lhs.clone() - beta.clone() * beta_coef.clone()) / int(XI1_FAMILY_DEGREE);
    // 4 gamma + delta = 5.
    let delta = total - int(4) * gamma.clone();
    let values = [
        ("alpha", &alpha),
        ("beta", &beta),
        ("gamma", &gamma),
        ("delta", &delta),
    ];
    let offending: Vec<String> = values
        .iter()
        .filter(|(_, v)| !is_positive_integer(v))
        .map(|(n, v)| format!("{n} = {v}"))
        .collect();
    if !offending.is_empty() {
        return Err(Error::Inconsistent(format!(
            "multiplicities must be positive integers; got {} (family relation {} = beta*{} + gamma*{})",
            offending.join(", "),
            family_lhs,
            beta_coef,
            XI1_FAMILY_DEGREE,
        )));
    }
    Ok((alpha, beta, gamma, delta))
}

#[derive(Serialize)]
pub struct FamilyReport {
    pub restrictions: BTreeMap<String, LatticeClass>,
    pub products: BTreeMap<String, i64>,
    pub multiplicities: Multiplicities,
}

/// Everything the CLI prints: the restriction table, the computed
/// intersection numbers, and the solved multiplicities.
pub fn family_report() -> Result<FamilyReport> {
    let mut restrictions = BTreeMap::new();
    for name in DIVISOR_NAMES {
        restrictions.insert(name.to_string(), restrict_divisor(name)?);
    }
    let p1 = product_hyp21_hyp22()?;
    let p2 = product_hyp22_d023()?;
    let to_int = |r: &Rat| -> Result<i64> {
        if r.denom() == &num_bigint::BigInt::from(1) {
            Ok(i64::try_from(r.numer().clone()).expect("small"))
        } else {
            Err(Error::Inconsistent(format!(
                "non-integer intersection number {r}"
            )))
        }
    };
    let mut products = BTreeMap::new();
    products.insert("hyp21_dot_pullback_hyp22".to_string(), to_int(&p1)?);
    products.insert("pullback_hyp22_dot_d023".to_string(), to_int(&p2)?);
    products.insert("xi1_family_degree".to_string(), XI1_FAMILY_DEGREE);
    let (alpha, beta, gamma, delta) = solve_multiplicities()?;
    Ok(FamilyReport {
        restrictions,
        products,
        multiplicities: Multiplicities {
            alpha: crate::rat::format_rat(&alpha),
            beta: crate::rat::format_rat(&beta),
            gamma: crate::rat::format_rat(&gamma),
            delta: crate::rat::format_rat(&delta),
        },
    })
}
