//! Symbolic polynomials in the named divisor and codimension-two
//! generators, used to transcribe class formulas before expansion, plus
//! the comparison rules for pulling them back along forgetful maps.

use crate::class::TautClass;
use crate::error::{Error, Result};
use crate::generators;
use crate::mult::{mult, mult_divisor, DivisorGen};
use crate::rat::{int, rat, Rat};
use crate::space::MarkedSpace;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sym {
    Psi(u32),
    Om(u32),
    Lambda,
    DIrr,
    DSep { h: u32, side: BTreeSet<u32> },
    /// Aggregate: sum of all distinct genus-1 separating classes.
    D1Agg,
    Gamma(BTreeSet<u32>),
    D2Psi,
}

impl Sym {
    pub fn degree(&self) -> u32 {
        match self {
            Sym::Gamma(_) | Sym::D2Psi => 2,
            _ => 1,
        }
    }

    fn relabel(&self, perm: &[u32]) -> Sym {
        let map_set = |s: &BTreeSet<u32>| s.iter().map(|&m| perm[m as usize - 1]).collect();
        match self {
            Sym::Psi(i) => Sym::Psi(perm[*i as usize - 1]),
            Sym::Om(i) => Sym::Om(perm[*i as usize - 1]),
            Sym::DSep { h, side } => Sym::DSep {
                h: *h,
                side: map_set(side),
            },
            Sym::Gamma(side) => Sym::Gamma(map_set(side)),
            other => other.clone(),
        }
    }
}

impl std::fmt::Display for Sym {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let set = |s: &BTreeSet<u32>| {
            s.iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Sym::Psi(i) => write!(f, "psi{i}"),
            Sym::Om(i) => write!(f, "om{i}"),
            Sym::Lambda => write!(f, "la"),
            Sym::DIrr => write!(f, "dirr"),
            Sym::DSep { h, side } => write!(f, "d{h}:{{{}}}", set(side)),
            Sym::D1Agg => write!(f, "d1"),
            Sym::Gamma(side) => write!(f, "gamma{{1:{}}}", set(side)),
            Sym::D2Psi => write!(f, "d2psi"),
        }
    }
}

/// A formal polynomial: a sum of monomials with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    pub monomials: Vec<(Rat, Vec<Sym>)>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr {
            monomials: vec![(int(1), Vec::new())],
        }
    }

    pub fn sym(s: Sym) -> Expr {
        Expr {
            monomials: vec![(int(1), vec![s])],
        }
    }

    pub fn scaled(&self, by: &Rat) -> Expr {
        Expr {
            monomials: self
                .monomials
                .iter()
                .map(|(c, m)| (c.clone() * by.clone(), m.clone()))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Expr) -> Expr {
        let mut monomials = self.monomials.clone();
        monomials.extend(other.monomials.iter().cloned());
        Expr { monomials }
    }

    pub fn minus(&self, other: &Expr) -> Expr {
        self.plus(&other.scaled(&int(-1)))
    }

    pub fn times(&self, other: &Expr) -> Expr {
        let mut monomials = Vec::new();
        for (c1, m1) in &self.monomials {
            for (c2, m2) in &other.monomials {
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                monomials.push((c1.clone() * c2.clone(), m));
            }
        }
        Expr { monomials }
    }

    pub fn relabel(&self, perm: &[u32]) -> Expr {
        Expr {
            monomials: self
                .monomials
                .iter()
                .map(|(c, m)| (c.clone(), m.iter().map(|s| s.relabel(perm)).collect()))
                .collect(),
        }
    }

    /// Expands each generator to its class and evaluates all products
    /// left to right.
    pub fn expand(&self, space: MarkedSpace) -> Result<TautClass> {
        let mut out = TautClass::zero(space);
        for (coeff, syms) in &self.monomials {
            let mut acc = TautClass::fundamental(space).scaled(coeff);
            for sym in syms {
                acc = apply_sym(&acc, sym, space)?;
                if acc.is_zero() {
                    break;
                }
            }
            out.add(&acc);
        }
        Ok(out)
    }

    /// The comparison rules along the forgetful map: the result lives on
    /// n + 1 markings, the new marking being n + 1. Only divisor symbols
    /// are admissible.
    pub fn pullback_forget(&self, space: MarkedSpace) -> Result<Expr> {
        let new = space.n + 1;
        let mut out = Expr::zero();
        for (coeff, syms) in &self.monomials {
            let mut acc = Expr {
                monomials: vec![(coeff.clone(), Vec::new())],
            };
            for sym in syms {
                let image = match sym {
                    Sym::Psi(i) => Expr::sym(Sym::Psi(*i)).minus(&Expr::sym(Sym::DSep {
                        h: 0,
                        side: BTreeSet::from([*i, new]),
                    })),
                    Sym::Om(i) => Expr::sym(Sym::Om(*i)),
                    Sym::Lambda => Expr::sym(Sym::Lambda),
                    Sym::DIrr => Expr::sym(Sym::DIrr),
                    Sym::D1Agg => Expr::sym(Sym::D1Agg),
                    Sym::DSep { h, side } => {
                        let mut bigger = side.clone();
                        bigger.insert(new);
                        Expr::sym(Sym::DSep {
                            h: *h,
                            side: side.clone(),
                        })
                        .plus(&Expr::sym(Sym::DSep {
                            h: *h,
                            side: bigger,
                        }))
                    }
                    other => {
                        return Err(Error::InvalidSymbol {
                            symbol: other.to_string(),
                            g: space.g,
                            n: space.n,
                            reason: "pullback is defined on divisor symbols only".into(),
                        })
                    }
                };
                acc = acc.times(&image);
            }
            out = out.plus(&acc);
        }
        Ok(out)
    }
}

fn apply_sym(acc: &TautClass, sym: &Sym, space: MarkedSpace) -> Result<TautClass> {
    match sym {
        Sym::Psi(i) => mult_divisor(acc, &DivisorGen::Psi(*i)),
        Sym::DIrr => {
            if space.g == 0 {
                return Err(Error::InvalidSymbol {
                    symbol: "dirr".into(),
                    g: 0,
                    n: space.n,
                    reason: "no irreducible-node divisor at genus 0".into(),
                });
            }
            mult_divisor(acc, &DivisorGen::DeltaIrr)
        }
        Sym::DSep { h, side } => {
            let gen = DivisorGen::delta_sep(space, *h, side.clone())?;
            mult_divisor(acc, &gen)
        }
        Sym::D1Agg => {
            let gens = generators::delta_h_gens(space, 1);
            if gens.is_empty() {
                return Err(Error::InvalidSymbol {
                    symbol: "d1".into(),
                    g: space.g,
                    n: space.n,
                    reason: "no genus-1 separating divisor here".into(),
                });
            }
            let mut out = TautClass::zero(space);
            for gen in gens {
                out.add(&mult_divisor(acc, &gen)?);
            }
            Ok(out)
        }
        Sym::Lambda => match space.g {
            0 => Ok(TautClass::zero(space)),
            1 => Ok(mult_divisor(acc, &DivisorGen::DeltaIrr)?.scaled(&rat(1, 12))),
            2 => {
                let mut out = mult_divisor(acc, &DivisorGen::DeltaIrr)?.scaled(&rat(1, 10));
                out.add(&apply_sym(acc, &Sym::D1Agg, space)?.scaled(&rat(1, 5)));
                Ok(out)
            }
            _ => Err(Error::InvalidSymbol {
                symbol: "la".into(),
                g: space.g,
                n: space.n,
                reason: "no boundary expression for lambda above genus 2".into(),
            }),
        },
        Sym::Om(i) => {
            let om = omega_expr(space, *i)?;
            let mut out = TautClass::zero(space);
            for (c, syms) in &om.monomials {
                debug_assert!(syms.len() <= 1);
                let mut part = acc.scaled(c);
                for s in syms {
                    part = apply_sym(&part, s, space)?;
                }
                out.add(&part);
            }
            Ok(out)
        }
        Sym::Gamma(side) => mult(acc, &generators::gamma1(space, side.clone())?),
        Sym::D2Psi => mult(acc, &generators::delta2psi(space)?),
    }
}

/// omega_i as a divisor polynomial: the full iterate of the pullback rule
/// applied to psi on the one-pointed space, relabeled so the remembered
/// marking is `i`.
pub fn omega_expr(space: MarkedSpace, i: u32) -> Result<Expr> {
    if i == 0 || i > space.n {
        return Err(Error::InvalidSymbol {
            symbol: format!("om{i}"),
            g: space.g,
            n: space.n,
            reason: "marking out of range".into(),
        });
    }
    let mut expr = Expr::sym(Sym::Psi(1));
    for m in 1..space.n {
        expr = expr.pullback_forget(MarkedSpace { g: space.g, n: m })?;
    }
    if i != 1 {
        let mut perm: Vec<u32> = (1..=space.n).collect();
        perm.swap(0, i as usize - 1);
        expr = expr.relabel(&perm);
    }
    Ok(expr)
}

/// Recursive-descent parser for the expression mini-language:
///
/// ```text
/// class    := ['-'] term (('+'|'-') term)*
/// term     := [rational '*']? factor ('*' factor)*
/// factor   := 'psi'i | 'om'i | 'la' | 'dirr' | 'd'h':{'J'}' | 'd1'
///           | 'gamma{1:'J'}' | 'd2psi' | '(' class ')'
/// rational := integer ['/' integer]
/// ```
pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.class()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let p = self.integer()?;
        if self.eat(b'/') {
            let q = self.integer()?;
            if q == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(rat(p, q))
        } else {
            Ok(int(p))
        }
    }

    fn class(&mut self) -> Result<Expr> {
        let mut acc = if self.eat(b'-') {
            self.term()?.scaled(&int(-1))
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.plus(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let c = self.rational()?;
            self.expect(b'*')?;
            Expr::one().scaled(&c)
        } else {
            Expr::one()
        };
        acc = acc.times(&self.factor()?);
        while self.eat(b'*') {
            acc = acc.times(&self.factor()?);
        }
        Ok(acc)
    }

    fn marking_set(&mut self) -> Result<BTreeSet<u32>> {
        self.expect(b'{')?;
        let mut set = BTreeSet::new();
        if self.peek() != Some(b'}') {
            loop {
                set.insert(self.integer()? as u32);
                if !self.eat(b',') {
                    break;
                }
            }
        }
        self.expect(b'}')?;
        Ok(set)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'(') {
            let e = self.class()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if self.keyword("psi") {
            return Ok(Expr::sym(Sym::Psi(self.integer()? as u32)));
        }
        if self.keyword("om") {
            return Ok(Expr::sym(Sym::Om(self.integer()? as u32)));
        }
        if self.keyword("la") {
            return Ok(Expr::sym(Sym::Lambda));
        }
        if self.keyword("dirr") {
            return Ok(Expr::sym(Sym::DIrr));
        }
        if self.keyword("d2psi") {
            return Ok(Expr::sym(Sym::D2Psi));
        }
        if self.keyword("gamma") {
            self.expect(b'{')?;
            let one = self.integer()?;
            if one != 1 {
                return Err(self.err("only gamma{1:J} is supported"));
            }
            self.expect(b':')?;
            let mut set = BTreeSet::new();
            if self.peek() != Some(b'}') {
                loop {
                    set.insert(self.integer()? as u32);
                    if !self.eat(b',') {
                        break;
                    }
                }
            }
            self.expect(b'}')?;
            return Ok(Expr::sym(Sym::Gamma(set)));
        }
        if self.keyword("d") {
            let h = self.integer()? as u32;
            if self.peek() == Some(b':') {
                self.pos += 1;
                let side = self.marking_set()?;
                return Ok(Expr::sym(Sym::DSep { h, side }));
            }
            if h == 1 {
                return Ok(Expr::sym(Sym::D1Agg));
            }
            return Err(self.err("only the aggregate d1 is supported"));
        }
        Err(self.err("expected a factor"))
    }
}
