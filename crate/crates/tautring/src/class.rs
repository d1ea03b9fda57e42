//! Tautological classes: finite formal sums of decorated strata with exact
//! rational coefficients, attached to a fixed marked space.
//!
//! A term `(S, c)` stands for `c` times the pushforward of the decoration
//! along the gluing map of the stratum's graph. Named generator classes
//! (see `generators`) absorb the stack-normalization `1/|Aut|` into their
//! coefficients, so their printed coefficients match the usual fundamental
//! classes of the loci.

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::space::MarkedSpace;
use crate::stratum::{Stratum, StratumJson};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct TautClass {
    space: MarkedSpace,
    terms: BTreeMap<Vec<u8>, (Stratum, Rat)>,
}

impl TautClass {
    pub fn zero(space: MarkedSpace) -> Self {
        TautClass {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn fundamental(space: MarkedSpace) -> Self {
        let mut cls = TautClass::zero(space);
        let smooth = crate::graph::StableGraph::smooth(space);
        cls.add_term(Stratum::undecorated(&smooth), Rat::from_integer(1.into()));
        cls
    }

    pub fn from_term(space: MarkedSpace, stratum: Stratum, coeff: Rat) -> Self {
        let mut cls = TautClass::zero(space);
        cls.add_term(stratum, coeff);
        cls
    }

    pub fn space(&self) -> MarkedSpace {
        self.space
    }

    pub fn add_term(&mut self, stratum: Stratum, coeff: Rat) {
        if coeff.is_zero()
            || stratum.degree() > self.space.dim()
            || stratum.is_trivially_zero()
        {
            return;
        }
        let key = stratum.encoding().to_vec();
        match self.terms.get_mut(&key) {
            Some((_, c)) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, (stratum, coeff));
            }
        }
    }

    pub fn add(&mut self, other: &TautClass) {
        assert_eq!(self.space, other.space, "space mismatch in class sum");
        for (s, c) in other.iter() {
            self.add_term(s.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &TautClass) {
        assert_eq!(self.space, other.space, "space mismatch in class sum");
        for (s, c) in other.iter() {
            self.add_term(s.clone(), -c.clone());
        }
    }

    pub fn plus(&self, other: &TautClass) -> TautClass {
        let mut out = self.clone();
        out.add(other);
        out
    }

    pub fn minus(&self, other: &TautClass) -> TautClass {
        let mut out = self.clone();
        out.sub(other);
        out
    }

    pub fn scaled(&self, by: &Rat) -> TautClass {
        let mut out = TautClass::zero(self.space);
        for (s, c) in self.iter() {
            out.add_term(s.clone(), c.clone() * by.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Stratum, &Rat)> {
        self.terms.values().map(|(s, c)| (s, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a given decorated stratum (zero when absent).
    pub fn coeff_of(&self, stratum: &Stratum) -> Rat {
        self.terms
            .get(stratum.encoding())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// The set of term degrees; a homogeneous class has exactly one.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.iter().map(|(s, _)| s.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn homogeneous_degree(&self) -> Result<u32> {
        match self.degrees().as_slice() {
            [] => Ok(0),
            [d] => Ok(*d),
            ds => Err(Error::DegreeMismatch(format!(
                "class is not homogeneous: degrees {ds:?}"
            ))),
        }
    }

    /// Relabels markings by the permutation `perm[old - 1] = new`.
    pub fn relabel(&self, perm: &[u32]) -> Result<TautClass> {
        if perm.len() != self.space.n as usize {
            return Err(Error::DegreeMismatch(format!(
                "permutation length {} does not match n = {}",
                perm.len(),
                self.space.n
            )));
        }
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=self.space.n).collect::<Vec<_>>() {
            return Err(Error::DegreeMismatch(format!(
                "not a permutation of 1..={}: {perm:?}",
                self.space.n
            )));
        }
        let mut out = TautClass::zero(self.space);
        for (s, c) in self.iter() {
            out.add_term(s.relabel(perm), c.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> ClassJson {
        ClassJson {
            space: self.space,
            terms: self.iter().map(|(s, c)| s.to_json(c)).collect(),
        }
    }

    pub fn from_json(j: &ClassJson) -> Result<TautClass> {
        let space = MarkedSpace::new(j.space.g, j.space.n)?;
        let mut out = TautClass::zero(space);
        for t in &j.terms {
            let (s, c) = Stratum::from_json(t).ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "bad stratum term".into(),
            })?;
            s.graph().validate(space)?;
            out.add_term(s, c);
        }
        Ok(out)
    }
}

impl PartialEq for TautClass {
    /// Structural equality of canonical forms (not numerical equivalence).
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((k1, (_, c1)), (k2, (_, c2)))| k1 == k2 && c1 == c2)
    }
}

impl Eq for TautClass {}

#[derive(Serialize, Deserialize)]
pub struct ClassJson {
    pub space: MarkedSpace,
    pub terms: Vec<StratumJson>,
}
