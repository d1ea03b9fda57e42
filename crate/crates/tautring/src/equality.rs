//! Numerical-equivalence testing: pair a class against every decorated
//! stratum of complementary degree. The spanning loop is embarrassingly
//! parallel; pairings never materialize canonical forms.

use crate::class::TautClass;
use crate::error::{Error, Result};
use crate::mult::mult_integrate;
use crate::par::{map_collect, Mode};
use crate::rat::{format_rat, Rat};
use crate::stratum::{decorated_strata, Stratum};
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PairingWitness {
    /// JSON of the complementary stratum producing a nonzero pairing.
    pub stratum: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub spanning_size: usize,
    pub witness: Option<PairingWitness>,
}

/// Pairs `cls` against every decorated stratum of complementary degree, in
/// the stable canonical order of the spanning set.
pub fn pairing_table(cls: &TautClass, mode: Mode) -> Result<Vec<(Stratum, Rat)>> {
    let space = cls.space();
    let deg = cls.homogeneous_degree()?;
    if cls.is_zero() {
        return Ok(Vec::new());
    }
    let comp = space.dim() - deg;
    let spanning = decorated_strata(space, comp)?;
    let values = map_collect(mode, &spanning, |s| {
        mult_integrate(
            cls,
            &TautClass::from_term(space, s.clone(), Rat::from_integer(1.into())),
        )
        .expect("same space by construction")
    });
    Ok(spanning.into_iter().zip(values).collect())
}

/// Verdict of `num_equal`: equal iff the difference pairs to zero against
/// the whole complementary spanning set.
pub fn num_equal(a: &TautClass, b: &TautClass, mode: Mode) -> Result<(bool, PairingReport)> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch(
            a.space().g,
            a.space().n,
            b.space().g,
            b.space().n,
        ));
    }
    let (da, db) = (a.homogeneous_degree()?, b.homogeneous_degree()?);
    if !a.is_zero() && !b.is_zero() && da != db {
        return Err(Error::DegreeMismatch(format!(
            "cannot compare degrees {da} and {db}"
        )));
    }
    let diff = a.minus(b);
    if diff.is_zero() {
        return Ok((
            true,
            PairingReport {
                spanning_size: 0,
                witness: None,
            },
        ));
    }
    let table = pairing_table(&diff, mode)?;
    let spanning_size = table.len();
    let witness = table.into_iter().find(|(_, v)| !v.is_zero()).map(|(s, v)| {
        PairingWitness {
            stratum: serde_json::to_string(&s.to_json(&Rat::from_integer(1.into())))
                .expect("stratum serializes"),
            value: format_rat(&v),
        }
    });
    Ok((
        witness.is_none(),
        PairingReport {
            spanning_size,
            witness,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::space::MarkedSpace;

    fn space(g: u32, n: u32) -> MarkedSpace {
        MarkedSpace::new(g, n).unwrap()
    }

    #[test]
    fn class_equals_itself() {
        let x = parse("psi1").unwrap().expand(space(2, 1)).unwrap();
        let (eq, report) = num_equal(&x, &x, Mode::default()).unwrap();
        assert!(eq);
        assert!(report.witness.is_none());
    }

    #[test]
    fn psi_classes_agree_on_symmetric_space() {
        // On (1,2) the two cotangent classes are numerically equivalent.
        let sp = space(1, 2);
        let a = parse("psi1").unwrap().expand(sp).unwrap();
        let b = parse("psi2").unwrap().expand(sp).unwrap();
        let (eq, report) = num_equal(&a, &b, Mode::default()).unwrap();
        assert!(eq, "witness: {:?}", report.witness);
        assert!(report.spanning_size > 0);
    }

    #[test]
    fn distinct_divisors_separate() {
        let sp = space(2, 1);
        let a = parse("psi1").unwrap().expand(sp).unwrap();
        let b = parse("dirr").unwrap().expand(sp).unwrap();
        let (eq, report) = num_equal(&a, &b, Mode::default()).unwrap();
        assert!(!eq);
        assert!(report.witness.is_some());
    }

    #[test]
    fn degree_mismatch_is_error() {
        let sp = space(2, 1);
        let a = parse("psi1").unwrap().expand(sp).unwrap();
        let b = parse("psi1*psi1").unwrap().expand(sp).unwrap();
        assert!(num_equal(&a, &b, Mode::default()).is_err());
    }

    #[test]
    fn fundamental_pairing_row_matches_direct_integration() {
        // Each top-degree decorated stratum paired with the fundamental
        // class is its own integral; at least one entry is nonzero.
        let sp = space(2, 0);
        let one = TautClass::fundamental(sp);
        let table = pairing_table(&one, Mode::default()).unwrap();
        assert!(!table.is_empty());
        let mut nonzero = 0;
        for (s, v) in table {
            let direct = crate::integrate::integrate(&TautClass::from_term(
                sp,
                s,
                crate::rat::int(1),
            ));
            assert_eq!(v, direct);
            if !v.is_zero() {
                nonzero += 1;
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn lambda_forms_agree_on_elliptic_space() {
        // la = dirr/12 on (1,1) holds numerically by construction; check
        // a derived identity instead: 12*la - dirr pairs to zero.
        let sp = space(1, 1);
        let a = parse("12*la").unwrap().expand(sp).unwrap();
        let b = parse("dirr").unwrap().expand(sp).unwrap();
        let (eq, _) = num_equal(&a, &b, Mode::default()).unwrap();
        assert!(eq);
    }
}
