//! Transcriptions of the published class formulas for the loci of marked
//! Weierstrass points on genus-2 curves, and the verification routines
//! exposed to the CLI. Every printed coefficient appears in exactly one
//! constant here.

use crate::class::TautClass;
use crate::equality::{num_equal, pairing_table};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Sym};
use crate::generators;
use crate::graph::StableGraph;
use crate::integrate::pair;
use crate::mult::mult;
use crate::par::{map_collect, Mode};
use crate::rat::{format_rat, int, rat, Rat};
use crate::report::VerificationReport;
use crate::space::MarkedSpace;
use crate::stratum::Stratum;
use std::collections::BTreeSet;
use std::time::Instant;

fn m21() -> MarkedSpace {
    MarkedSpace { g: 2, n: 1 }
}
fn m22() -> MarkedSpace {
    MarkedSpace { g: 2, n: 2 }
}
fn m23() -> MarkedSpace {
    MarkedSpace { g: 2, n: 3 }
}

/// The divisor class of the marked-Weierstrass-point locus on (2,1), in
/// its two printed forms.
pub const HYP21_BOUNDARY_FORM: &str = "3*om1 - 1/10*dirr - 6/5*d1";
pub const HYP21_LAMBDA_FORM: &str = "3*om1 - la - d1";

/// The codimension-two class on (2,2) as a divisor polynomial.
pub const HYP22_DIVISOR_FORM: &str =
    "6*psi1*psi2 - 3/2*(psi1*psi1 + psi2*psi2) \
     - (psi1 + psi2)*(21/10*d1:{1} + 3/5*d1:{} + 1/20*dirr)";

/// The same class as a product/pullback expression; the pulled-back
/// divisor polynomials coincide with the unpulled ones on (2,2).
pub const HYP22_PRODUCT_FORM: &str =
    "(3*om2 - la - d1)*(3*om1 - la - d1) - d0:{1,2}*(3*om1 - la - d1) - gamma{1:}";

/// The rational-tail Weierstrass stratum: both points on a rational tail
/// attached at a Weierstrass point.
pub const DELTA_2W_FORM: &str = "d0:{1,2}*(3*om1 - la - d1)";

/// Coefficients of the decorated-strata form of the (2,2) class.
#[derive(Clone, Debug)]
pub struct StrataCoeffs {
    pub d2w: Rat,
    pub d11: Rat,
    pub d01: Rat,
    pub d01_marked: Rat,
    pub gamma: Rat,
    pub d00: Rat,
}

pub fn strata_coeffs() -> StrataCoeffs {
    StrataCoeffs {
        d2w: int(5),
        d11: int(9),
        d01: rat(5, 8),
        d01_marked: rat(-1, 8),
        gamma: int(2),
        d00: rat(1, 24),
    }
}

/// The two torsion-divisor factors and the elliptic-bridge factor on
/// (2,3), from the boundary-component lemma.
pub const XI1_FORM: &str = "gamma{1:1}*(2*psi1 - d1:{1})";
pub const XI2_FORM: &str = "gamma{1:2}*(2*psi2 - d1:{2})";
pub const THETA_FORM: &str = "gamma{1:}*(psi1 - d0:{1,3})";
pub const THETA_ALT_FORM: &str = "gamma{1:}*(psi2 - d0:{2,3})";

/// The full codimension-three class on (2,3).
pub const HYP23_FORM: &str = "((3*om1 - la - d1)*(3*om2 - la - d1) \
     - (d0:{1,2} + d0:{1,2,3})*(3*om1 - la - d1) - gamma{1:} - gamma{1:3}) \
     *(3*om3 - la - d1 - d0:{1,3} - d0:{2,3}) \
     - gamma{1:1}*(2*psi1 - d1:{1}) - gamma{1:2}*(2*psi2 - d1:{2}) \
     - gamma{1:}*(psi1 - d0:{1,3})";

/// Pushforward drop of the n-pointed locus under forgetting one point:
/// the number of Weierstrass points not already marked.
pub fn weierstrass_drop(g: u32, n: u32) -> i64 {
    2 * g as i64 + 2 - (n as i64 - 1)
}

pub fn hyp21() -> Result<TautClass> {
    parse(HYP21_LAMBDA_FORM)?.expand(m21())
}

pub fn hyp22_divisor_form() -> Result<TautClass> {
    parse(HYP22_DIVISOR_FORM)?.expand(m22())
}

pub fn hyp22_product_form() -> Result<TautClass> {
    parse(HYP22_PRODUCT_FORM)?.expand(m22())
}

pub fn delta_2w() -> Result<TautClass> {
    parse(DELTA_2W_FORM)?.expand(m22())
}

/// Boundary strata of (2,2) entering the strata form, by their dual
/// graphs.
fn stratum_d11() -> StableGraph {
    StableGraph::new(vec![1, 0, 1], vec![(1, 1), (2, 1)], vec![(0, 1), (1, 2)])
}

fn stratum_d01(markings_on_elliptic: &[u32]) -> StableGraph {
    // Vertex 0: rational with a non-disconnecting node; vertex 1: elliptic
    // tail.
    let legs = [1u32, 2u32]
        .iter()
        .map(|&m| (m, usize::from(markings_on_elliptic.contains(&m))))
        .collect();
    StableGraph::new(vec![0, 1], legs, vec![(0, 0), (0, 1)])
}

fn stratum_d00() -> StableGraph {
    StableGraph::new(vec![0], vec![(1, 0), (2, 0)], vec![(0, 0), (0, 0)])
}

pub fn hyp22_strata_form() -> Result<TautClass> {
    hyp22_strata_form_with(&strata_coeffs())
}

pub(crate) fn hyp22_strata_form_with(c: &StrataCoeffs) -> Result<TautClass> {
    let sp = m22();
    let mut out = delta_2w()?.scaled(&c.d2w);
    out.add(&generators::boundary_stratum_class(sp, &stratum_d11())?.scaled(&c.d11));
    out.add(&generators::boundary_stratum_class(sp, &stratum_d01(&[]))?.scaled(&c.d01));
    for marked in [vec![1], vec![2], vec![1, 2]] {
        out.add(
            &generators::boundary_stratum_class(sp, &stratum_d01(&marked))?
                .scaled(&c.d01_marked),
        );
    }
    out.add(&generators::gamma1(sp, BTreeSet::new())?.scaled(&c.gamma));
    out.add(&generators::boundary_stratum_class(sp, &stratum_d00())?.scaled(&c.d00));
    Ok(out)
}

pub fn xi_class(i: u32) -> Result<TautClass> {
    let form = match i {
        1 => XI1_FORM,
        2 => XI2_FORM,
        _ => {
            return Err(Error::InvalidSymbol {
                symbol: format!("xi{i}"),
                g: 2,
                n: 3,
                reason: "only markings 1 and 2 carry torsion factors".into(),
            })
        }
    };
    parse(form)?.expand(m23())
}

pub fn theta_class() -> Result<TautClass> {
    parse(THETA_FORM)?.expand(m23())
}

pub fn theta_class_alt() -> Result<TautClass> {
    parse(THETA_ALT_FORM)?.expand(m23())
}

pub fn gamma_class(side: BTreeSet<u32>) -> Result<TautClass> {
    generators::gamma1(m23(), side)
}

pub fn hyp23() -> Result<TautClass> {
    parse(HYP23_FORM)?.expand(m23())
}

/// The recursive construction: pull the (2,2) class back along the map
/// forgetting the third point, multiply by the pulled-back divisor class
/// minus the two collision divisors, and subtract the boundary
/// components.
pub fn hyp23_via_prop51() -> Result<TautClass> {
    let pb22 = parse(HYP22_DIVISOR_FORM)?.pullback_forget(m22())?;
    let rho3 = rho_pullback_to(m23(), parse(HYP21_LAMBDA_FORM)?, 3)?;
    let second = rho3
        .minus(&Expr::sym(Sym::DSep {
            h: 0,
            side: BTreeSet::from([1, 3]),
        }))
        .minus(&Expr::sym(Sym::DSep {
            h: 0,
            side: BTreeSet::from([2, 3]),
        }));
    let mut out = mult(&pb22.expand(m23())?, &second.expand(m23())?)?;
    out.sub(&xi_class(1)?);
    out.sub(&xi_class(2)?);
    out.sub(&theta_class()?);
    Ok(out)
}

/// Pulls a one-pointed expression back to the n-pointed space remembering
/// marking `keep`: iterated forgetful pullbacks followed by a relabeling.
fn rho_pullback_to(space: MarkedSpace, expr: Expr, keep: u32) -> Result<Expr> {
    let mut e = expr;
    for m in 1..space.n {
        e = e.pullback_forget(MarkedSpace {
            g: space.g,
            n: m,
        })?;
    }
    if keep != 1 {
        // The remembered marking is 1; send it to `keep` and close ranks.
        let mut perm: Vec<u32> = Vec::with_capacity(space.n as usize);
        perm.push(keep);
        for m in 1..=space.n {
            if m != keep {
                perm.push(m);
            }
        }
        // perm currently lists images of (1, 2, ..., n) where old 1 -> keep
        // and the rest fill 1..n skipping keep, preserving order.
        let mut fill = (1..=space.n).filter(|&m| m != keep);
        let mut images = vec![0u32; space.n as usize];
        images[0] = keep;
        for slot in images.iter_mut().skip(1) {
            *slot = fill.next().expect("enough labels");
        }
        e = e.relabel(&images);
    }
    Ok(e)
}

/// Pullback of an expression along the map forgetting marking `j` on the
/// (n+1)-pointed space: the new marking is inserted at position `j`.
pub fn forgetful_pullback_at(small: MarkedSpace, expr: &Expr, j: u32) -> Result<Expr> {
    let mut e = expr.pullback_forget(small)?;
    let n = small.n + 1;
    if j != n {
        // New marking currently labeled n; relabel old markings >= j up by
        // one and send n to j.
        let mut images: Vec<u32> = Vec::with_capacity(n as usize);
        for m in 1..n {
            images.push(if m >= j { m + 1 } else { m });
        }
        images.push(j);
        e = e.relabel(&images);
    }
    Ok(e)
}

/// Degree-3 monomials in the divisor generators of a space, for the
/// projection-formula pushforward checks.
fn divisor_monomials_deg3(space: MarkedSpace) -> Vec<Expr> {
    let mut gens: Vec<Sym> = Vec::new();
    for i in 1..=space.n {
        gens.push(Sym::Psi(i));
        gens.push(Sym::Om(i));
    }
    gens.push(Sym::Lambda);
    gens.push(Sym::DIrr);
    for gen in generators::delta_h_gens(space, 1) {
        if let crate::mult::DivisorGen::DeltaSep { h, side } = gen {
            gens.push(Sym::DSep { h, side });
        }
    }
    for gen in generators::delta_h_gens(space, 0) {
        if let crate::mult::DivisorGen::DeltaSep { h, side } = gen {
            gens.push(Sym::DSep { h, side });
        }
    }
    let mut out = Vec::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            for c in b..gens.len() {
                out.push(Expr {
                    monomials: vec![(int(1), vec![gens[a].clone(), gens[b].clone(), gens[c].clone()])],
                });
            }
        }
    }
    out
}

pub const CHECK_NAMES: [&str; 10] = [
    "eq1-forms",
    "eq2-eq3",
    "eq2-eq4",
    "lemma41",
    "xi-theta-sym",
    "thm2-prop51",
    "thm2-s3",
    "thm2-push",
    "delta2psi",
    "sign-cert",
];

pub fn run_check(name: &str, mode: Mode) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match name {
        "eq1-forms" => check_eq1(mode),
        "eq2-eq3" => check_eq2_eq3(mode),
        "eq2-eq4" => check_eq2_eq4(mode),
        "lemma41" => check_lemma41(mode),
        "xi-theta-sym" => check_xi_theta_sym(mode),
        "thm2-prop51" => check_thm2_prop51(mode),
        "thm2-s3" => check_thm2_s3(mode),
        "thm2-push" => check_thm2_push(mode),
        "delta2psi" => check_delta2psi(mode),
        "sign-cert" => check_sign_cert(),
        _ => Err(Error::UnknownCheck(name.to_string())),
    }?;
    report.millis = start.elapsed().as_millis();
    Ok(report)
}

fn equality_check(
    name: &str,
    a: &TautClass,
    b: &TautClass,
    mode: Mode,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(name);
    let (eq, pairing) = num_equal(a, b, mode)?;
    report.spanning_size = Some(pairing.spanning_size);
    if !eq {
        let w = pairing.witness.expect("failing pairing has a witness");
        report.fail(format!(
            "nonzero pairing {} against {}",
            w.value, w.stratum
        ));
    }
    Ok(report)
}

fn check_eq1(mode: Mode) -> Result<VerificationReport> {
    let a = parse(HYP21_BOUNDARY_FORM)?.expand(m21())?;
    let b = parse(HYP21_LAMBDA_FORM)?.expand(m21())?;
    equality_check("eq1-forms", &a, &b, mode)
}

fn check_eq2_eq3(mode: Mode) -> Result<VerificationReport> {
    equality_check(
        "eq2-eq3",
        &hyp22_divisor_form()?,
        &hyp22_strata_form()?,
        mode,
    )
}

fn check_eq2_eq4(mode: Mode) -> Result<VerificationReport> {
    equality_check(
        "eq2-eq4",
        &hyp22_divisor_form()?,
        &hyp22_product_form()?,
        mode,
    )
}

pub(crate) fn lemma41_sides() -> Result<(TautClass, TautClass)> {
    let eq1 = parse(HYP21_LAMBDA_FORM)?;
    let pi2 = eq1.pullback_forget(m21())?; // forgets marking 2
    let pi1 = pi2.relabel(&[2, 1]); // forgets marking 1
    let lhs = mult(&pi1.expand(m22())?, &pi2.expand(m22())?)?;
    let mut rhs = hyp22_divisor_form()?;
    rhs.add(&generators::gamma1(m22(), BTreeSet::new())?);
    rhs.add(&delta_2w()?);
    Ok((lhs, rhs))
}

fn check_lemma41(mode: Mode) -> Result<VerificationReport> {
    let (lhs, rhs) = lemma41_sides()?;
    equality_check("lemma41", &lhs, &rhs, mode)
}

fn check_xi_theta_sym(mode: Mode) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("xi-theta-sym");
    let (eq_theta, p1) = num_equal(&theta_class()?, &theta_class_alt()?, mode)?;
    report.spanning_size = Some(p1.spanning_size);
    if !eq_theta {
        let w = p1.witness.expect("witness");
        report.fail(format!(
            "theta forms differ: pairing {} against {}",
            w.value, w.stratum
        ));
    }
    let swapped = xi_class(1)?.relabel(&[2, 1, 3])?;
    let (eq_xi, p2) = num_equal(&swapped, &xi_class(2)?, mode)?;
    if !eq_xi {
        let w = p2.witness.expect("witness");
        report.fail(format!(
            "xi relabeling mismatch: pairing {} against {}",
            w.value, w.stratum
        ));
    }
    Ok(report)
}

fn check_thm2_prop51(mode: Mode) -> Result<VerificationReport> {
    equality_check("thm2-prop51", &hyp23()?, &hyp23_via_prop51()?, mode)
}

fn check_thm2_s3(mode: Mode) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("thm2-s3");
    let cls = hyp23()?;
    let table = pairing_table(&cls, mode)?;
    report.spanning_size = Some(table.len());
    let by_enc: std::collections::BTreeMap<Vec<u8>, Rat> = table
        .iter()
        .map(|(s, v)| (s.encoding().to_vec(), v.clone()))
        .collect();
    let perms: [[u32; 3]; 5] = [
        [2, 1, 3],
        [1, 3, 2],
        [3, 2, 1],
        [2, 3, 1],
        [3, 1, 2],
    ];
    'outer: for perm in perms {
        for (s, v) in &table {
            let moved = s.relabel(&perm);
            let other = by_enc
                .get(moved.encoding())
                .expect("spanning set closed under relabeling");
            if other != v {
                report.fail(format!(
                    "permutation {perm:?} changes pairing {} -> {} at {}",
                    format_rat(v),
                    format_rat(other),
                    serde_json::to_string(&s.to_json(&int(1))).expect("stratum json"),
                ));
                continue 'outer;
            }
        }
    }
    Ok(report)
}

fn check_thm2_push(mode: Mode) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("thm2-push");
    let big = hyp23()?;
    let small = hyp22_divisor_form()?;
    let drop = int(weierstrass_drop(2, 3));
    let monomials = divisor_monomials_deg3(m22());
    report.spanning_size = Some(monomials.len() * 3);
    for j in 1..=3u32 {
        let failures = map_collect(mode, &monomials, |m| -> Result<Option<String>> {
            let pulled = forgetful_pullback_at(m22(), m, j)?.expand(m23())?;
            let lhs = pair(&big, &pulled)?;
            let rhs = drop.clone() * pair(&small, &m.expand(m22())?)?;
            if lhs != rhs {
                let sym = m
                    .monomials
                    .first()
                    .map(|(_, syms)| {
                        syms.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("*")
                    })
                    .unwrap_or_default();
                Ok(Some(format!(
                    "j={j}, M={sym}: {} != {}",
                    format_rat(&lhs),
                    format_rat(&rhs)
                )))
            } else {
                Ok(None)
            }
        });
        for f in failures {
            if let Some(w) = f? {
                report.fail(w);
            }
        }
    }
    Ok(report)
}

fn check_delta2psi(mode: Mode) -> Result<VerificationReport> {
    delta2psi_check_for(&generators::delta2psi(m22())?, mode)
}

pub(crate) fn delta2psi_check_for(cls: &TautClass, mode: Mode) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("delta2psi");
    let target = generators::psi_class(m21(), 1)?;
    let monomials = divisor_monomials_deg3(m21());
    report.spanning_size = Some(monomials.len());
    let failures = map_collect(mode, &monomials, |m| -> Result<Option<String>> {
        let pulled = m.pullback_forget(m21())?.expand(m22())?;
        let lhs = pair(cls, &pulled)?;
        let rhs = pair(&target, &m.expand(m21())?)?;
        if lhs != rhs {
            let sym = m
                .monomials
                .first()
                .map(|(_, syms)| {
                    syms.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("*")
                })
                .unwrap_or_default();
            Ok(Some(format!(
                "M={sym}: {} != {}",
                format_rat(&lhs),
                format_rat(&rhs)
            )))
        } else {
            Ok(None)
        }
    });
    for f in failures {
        if let Some(w) = f? {
            report.fail(w);
        }
    }
    Ok(report)
}

fn check_sign_cert() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("sign-cert");
    let cls = hyp22_strata_form()?;
    let expected = strata_coeffs().d01_marked;
    for marked in [vec![1], vec![2], vec![1, 2]] {
        let graph = stratum_d01(&marked);
        let reg = crate::enumerate::register(&graph);
        let stratum = Stratum::undecorated(&reg.graph);
        // Stack-normalized coefficient: term coefficient times |Aut|.
        let coeff = cls.coeff_of(&stratum) * int(reg.aut as i64);
        if coeff != expected {
            report.fail(format!(
                "coefficient at markings {marked:?} is {}, expected {}",
                format_rat(&coeff),
                format_rat(&expected)
            ));
        } else if coeff >= Rat::from_integer(0.into()) {
            report.fail(format!(
                "coefficient at markings {marked:?} is not negative: {}",
                format_rat(&coeff)
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Mode;

    #[test]
    fn hyp21_has_degree_one() {
        let cls = hyp21().unwrap();
        assert_eq!(cls.homogeneous_degree().unwrap(), 1);
    }

    #[test]
    fn eq1_two_forms_agree() {
        let r = run_check("eq1-forms", Mode::default()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn hyp22_forms_have_degree_two() {
        assert_eq!(hyp22_divisor_form().unwrap().homogeneous_degree().unwrap(), 2);
        assert_eq!(hyp22_strata_form().unwrap().homogeneous_degree().unwrap(), 2);
        assert_eq!(hyp22_product_form().unwrap().homogeneous_degree().unwrap(), 2);
    }

    #[test]
    fn pullback_of_hyp21_is_plain_form() {
        // pi_1^*(3 om - la - d1) = 3 om2 - la - d1 on (2,2).
        let eq1 = parse(HYP21_LAMBDA_FORM).unwrap();
        let pi1 = eq1.pullback_forget(m21()).unwrap().relabel(&[2, 1]);
        let a = pi1.expand(m22()).unwrap();
        let b = parse("3*om2 - la - d1").unwrap().expand(m22()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eq2_equals_eq3_under_pairing() {
        let r = run_check("eq2-eq3", Mode::default()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn eq2_equals_eq4_under_pairing() {
        let r = run_check("eq2-eq4", Mode::default()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn lemma41_holds_and_dropping_gamma_fails() {
        let r = run_check("lemma41", Mode::default()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        let (lhs, mut rhs) = lemma41_sides().unwrap();
        rhs.sub(&generators::gamma1(m22(), BTreeSet::new()).unwrap());
        let (eq, pairing) = num_equal(&lhs, &rhs, Mode::default()).unwrap();
        assert!(!eq);
        assert!(pairing.witness.is_some());
    }

    #[test]
    fn sign_certificate() {
        let r = run_check("sign-cert", Mode::default()).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn xi_classes_have_degree_three() {
        assert_eq!(xi_class(1).unwrap().homogeneous_degree().unwrap(), 3);
        assert_eq!(theta_class().unwrap().homogeneous_degree().unwrap(), 3);
    }

    #[test]
    fn unknown_check_name_errors() {
        assert!(matches!(
            run_check("nosuch", Mode::default()),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn mutated_eq3_coefficient_flips_eq2_eq3() {
        let mut coeffs = strata_coeffs();
        coeffs.d11 += int(1);
        let mutated = hyp22_strata_form_with(&coeffs).unwrap();
        let (eq, pairing) =
            num_equal(&hyp22_divisor_form().unwrap(), &mutated, Mode::default()).unwrap();
        assert!(!eq);
        assert!(pairing.witness.is_some());
    }

    #[test]
    fn mutation_sample_flips_checks() {
        // Perturbing a transcription coefficient by +1 is the same as
        // adding one copy of the corresponding monomial.
        let mode = Mode::default();
        // Eq (2): 6 -> 7 on the psi1*psi2 coefficient.
        let mut eq2 = hyp22_divisor_form().unwrap();
        eq2.add(&parse("psi1*psi2").unwrap().expand(m22()).unwrap());
        let (eq, _) = num_equal(&eq2, &hyp22_strata_form().unwrap(), mode).unwrap();
        assert!(!eq, "mutated divisor form still passes");
        // Product form: drop the collision term entirely.
        let mutated = parse("(3*om2 - la - d1)*(3*om1 - la - d1) - gamma{1:}")
            .unwrap()
            .expand(m22())
            .unwrap();
        let (eq, _) = num_equal(&hyp22_divisor_form().unwrap(), &mutated, mode).unwrap();
        assert!(!eq, "mutated product form still passes");
        // Three-point class: bump the theta coefficient.
        let mut wrong = hyp23_via_prop51().unwrap();
        wrong.sub(&theta_class().unwrap());
        let (eq, _) = num_equal(&hyp23().unwrap(), &wrong, mode).unwrap();
        assert!(!eq, "mutated recursive construction still passes");
    }

    #[test]
    fn mutated_delta2psi_side_fails() {
        // Decorate the genus-0 half-edge instead of the genus-2 one.
        let sp = m22();
        let graph = StableGraph::new(vec![2, 0], vec![(1, 1), (2, 1)], vec![(0, 1)]);
        let mut psi_he = vec![0u32; 2];
        psi_he[1] = 1; // rational side
        let wrong = TautClass::from_term(
            sp,
            Stratum::build(&graph, &[0, 0], &psi_he, &[vec![], vec![]]),
            int(1),
        );
        let r = delta2psi_check_for(&wrong, Mode::default()).unwrap();
        assert!(!r.pass);
    }
}
