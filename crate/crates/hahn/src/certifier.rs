//! Irreducibility certificates: applies the known sufficient conditions to a
//! series and emits a machine-checkable record of every verified premise.
//!
//! The decision ladder, strongest conclusion first:
//!
//! 0. Support strictly below 0: verdict `IN_J` (such series factor
//!    indefinitely and are never irreducible).
//! 1. Order type `w^(w^a)` (multiplicatively principal): `IRREDUCIBLE` with
//!    tag `berarducci_10_5`, no randomness premise needed; when the order
//!    type is exactly `w` with support supremum 0, upgraded to `PRIME` with
//!    tag `pitteloud_omega`.
//! 2. Principal of order type `w^alpha` where `alpha` matches one of the two
//!    supported head shapes, and the series is certified random (or its
//!    singleton tuple hereditarily independent): `IRREDUCIBLE` with tag
//!    `printhm_1` (strict-tail head) or `printhm_2` (two terms plus a finite
//!    part, which additionally yields `not_sum_of_reducibles`).
//! 3. Support supremum 0 with order type `m*w^alpha + beta`, `beta < w^alpha`,
//!    where the maximal parts of the normal form are certified hereditarily
//!    independent: `IRREDUCIBLE` with tag `genthm`.
//! 4. Otherwise `UNKNOWN`, naming the first failing premise.
//!
//! A certificate never asserts more than its premises support: every verdict
//! other than `UNKNOWN`/`NOT_APPLICABLE` is backed by `CertifiedTrue`
//! judgments that replay deterministically under the same config.

use serde::Serialize;

use crate::dsl::format_series;
use crate::exponent::Exponent;
use crate::independence::{
    hereditary_independent, is_random, rv_j_linearly_independent, IndependenceError,
    IndependenceJudgment, RandomnessCriterion,
};
use crate::ordinal::{Ordinal, ShapeTag};
use crate::series::Series;
use crate::valuation::ValuationReport;

/// Budgets shared by the judgment routines; part of the certificate so runs
/// are reproducible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Config {
    pub depth_budget: usize,
    pub probe_depth: usize,
    pub floor: Option<Exponent>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            depth_budget: 3,
            probe_depth: 8,
            floor: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
struct ConfigOut {
    depth_budget: usize,
    probe_depth: usize,
    floor: Option<String>,
}

/// One serialized judgment: `status` is `certified_true`, `certified_false`,
/// `unknown`, or `not_evaluated`; `rule` carries the rule name, witness, or
/// cause.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct JudgmentSection {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    pub rule: Option<String>,
}

impl JudgmentSection {
    fn not_evaluated() -> JudgmentSection {
        JudgmentSection {
            status: "not_evaluated".into(),
            criterion: None,
            rule: None,
        }
    }

    fn from_judgment(j: &IndependenceJudgment, criterion: Option<&str>) -> JudgmentSection {
        let (status, rule) = match j {
            IndependenceJudgment::CertifiedTrue { rule } => ("certified_true", rule.clone()),
            IndependenceJudgment::CertifiedFalse { witness } => {
                ("certified_false", witness.clone())
            }
            IndependenceJudgment::Unknown { cause } => ("unknown", cause.clone()),
        };
        JudgmentSection {
            status: status.into(),
            criterion: criterion.map(String::from),
            rule: Some(rule),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ShapeOut {
    tags: Vec<String>,
}

/// The full certificate; serialization order is the declaration order, so the
/// emitted document has a stable key order byte-for-byte.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub input: String,
    pub ot: Option<String>,
    pub sup: Option<String>,
    #[serde(rename = "in_J")]
    pub in_j: bool,
    #[serde(rename = "v_J")]
    pub v_j: Option<String>,
    #[serde(rename = "deg_J")]
    pub deg_j: Option<String>,
    #[serde(rename = "deg_J_r")]
    pub deg_j_r: Option<String>,
    #[serde(rename = "deg_J_p")]
    pub deg_j_p: Option<String>,
    pub deg: Option<String>,
    #[serde(rename = "crit_J")]
    pub crit_j: Option<String>,
    pub alpha_shape: ShapeOut,
    pub randomness: JudgmentSection,
    pub hereditary: JudgmentSection,
    pub verdict: String,
    pub theorem: String,
    pub not_sum_of_reducibles: bool,
    pub plus_r_clause: Option<String>,
    config: ConfigOut,
    /// The failing premise when the verdict is UNKNOWN/NOT_APPLICABLE.
    pub cause: Option<String>,
}

impl Certificate {
    /// The stable serialized document (pretty JSON, fixed key order).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn is_definite(&self) -> bool {
        matches!(self.verdict.as_str(), "IRREDUCIBLE" | "PRIME" | "IN_J")
    }
}

struct Builder {
    report: ValuationReport,
    input: String,
    config: Config,
}

impl Builder {
    fn finish(
        self,
        alpha_shape: Vec<String>,
        randomness: JudgmentSection,
        hereditary: JudgmentSection,
        verdict: &str,
        theorem: &str,
        not_sum_of_reducibles: bool,
        plus_r_clause: Option<String>,
        cause: Option<String>,
    ) -> Certificate {
        let r = &self.report;
        Certificate {
            input: self.input.clone(),
            ot: r.ot.as_ref().ok().map(|o| o.to_string()),
            sup: r.sup.as_ref().map(|(e, _)| e.to_string()),
            in_j: r.in_j,
            v_j: r.v_j.as_ref().map(|o| o.to_string()),
            deg_j: r.deg_j.as_ref().map(fmt_extended),
            deg_j_r: r.deg_j_r.as_ref().map(|o| o.to_string()),
            deg_j_p: r.deg_j_p.as_ref().map(|o| o.to_string()),
            deg: r.deg.as_ref().map(fmt_extended),
            crit_j: r.crit_j.as_ref().map(|e| e.to_string()),
            alpha_shape: ShapeOut { tags: alpha_shape },
            randomness,
            hereditary,
            verdict: verdict.into(),
            theorem: theorem.into(),
            not_sum_of_reducibles,
            plus_r_clause,
            config: ConfigOut {
                depth_budget: self.config.depth_budget,
                probe_depth: self.config.probe_depth,
                floor: self.config.floor.as_ref().map(|e| e.to_string()),
            },
            cause,
        }
    }
}

/// `Some(o)` prints as the ordinal, `None` as the formal minimum `-infinity`.
fn fmt_extended(v: &Option<Ordinal>) -> String {
    match v {
        Some(o) => o.to_string(),
        None => "-infinity".into(),
    }
}

fn shape_tag_name(t: &ShapeTag) -> String {
    match t {
        ShapeTag::AddPrincipal(b) => format!("add_principal(beta={b})"),
        ShapeTag::TwoPlusK(b1, b2, k) => format!("two_plus_k(beta1={b1}, beta2={b2}, k={k})"),
        ShapeTag::ThreeHead(bs) => {
            let list: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
            format!("three_head({})", list.join(", "))
        }
    }
}

const PLUS_R_PRINTHM: &str =
    "b+r for any principal series r of order type less than w^alpha";
const PLUS_R_GENTHM: &str =
    "b+r for any r with ot(r) < w^alpha and sup(b+r) = 0";

/// Runs the decision ladder on `b` and emits the certificate.
pub fn certify(b: &Series, config: &Config) -> Certificate {
    let builder = Builder {
        report: ValuationReport::compute(b),
        input: format_series(b),
        config: config.clone(),
    };

    // Rung 0: everything strictly below 0 factors indefinitely.
    if builder.report.in_j {
        return builder.finish(
            vec![],
            JudgmentSection::not_evaluated(),
            JudgmentSection::not_evaluated(),
            "IN_J",
            "none",
            false,
            None,
            None,
        );
    }

    let ot = match builder.report.ot.clone() {
        Ok(o) => o,
        Err(e) => {
            return builder.finish(
                vec![],
                JudgmentSection::not_evaluated(),
                JudgmentSection::not_evaluated(),
                "UNKNOWN",
                "none",
                false,
                None,
                Some(format!("order type not certified: {e:?}")),
            )
        }
    };
    let sup_is_zero = matches!(&builder.report.sup, Some((e, _)) if e.is_zero());

    // Rung 1: multiplicatively principal order type needs no randomness.
    if ot.is_multiplicatively_principal() {
        if ot == Ordinal::omega() && sup_is_zero {
            return builder.finish(
                vec![],
                JudgmentSection::not_evaluated(),
                JudgmentSection::not_evaluated(),
                "PRIME",
                "pitteloud_omega",
                false,
                Some("b+1 is also prime; berarducci_10_5 also applies".into()),
                None,
            );
        }
        return builder.finish(
            vec![],
            JudgmentSection::not_evaluated(),
            JudgmentSection::not_evaluated(),
            "IRREDUCIBLE",
            "berarducci_10_5",
            false,
            Some("b+1 is also irreducible".into()),
            None,
        );
    }

    // Constants and other finite order types carry no ladder theorem.
    if ot.as_nat().is_some() {
        return builder.finish(
            vec![],
            JudgmentSection::not_evaluated(),
            JudgmentSection::not_evaluated(),
            "UNKNOWN",
            "none",
            false,
            None,
            Some("finite order type: units and finite sums are out of scope".into()),
        );
    }

    // Shared premise of rungs 2 and 3: the head exponent alpha and its shape.
    let principal = b.is_principal().unwrap_or(false);
    let (m, alpha, beta) = head_decomposition(&ot);
    let shape = alpha.classify_shape().ok().unwrap_or_default();
    let shape_names: Vec<String> = shape.iter().map(shape_tag_name).collect();
    let two_plus_k = shape.iter().any(|t| matches!(t, ShapeTag::TwoPlusK(..)));
    let three_head = shape.iter().any(|t| matches!(t, ShapeTag::ThreeHead(..)));
    if !two_plus_k && !three_head {
        return builder.finish(
            shape_names,
            JudgmentSection::not_evaluated(),
            JudgmentSection::not_evaluated(),
            "UNKNOWN",
            "none",
            false,
            None,
            Some("alpha matches no supported head shape".into()),
        );
    }
    // The two-term-plus-finite shape carries the stronger corollary, so it
    // wins the tie when both match.
    let (theorem, not_sum) = if two_plus_k {
        ("printhm_2", true)
    } else {
        ("printhm_1", false)
    };

    // Rung 2: principal and random (or hereditarily independent alone).
    if principal && sup_is_zero {
        let (randomness, random_true) = randomness_sections(b);
        let hereditary = match hereditary_independent(
            std::slice::from_ref(b),
            config.depth_budget,
        ) {
            Ok(j) => JudgmentSection::from_judgment(&j, None),
            Err(e) => JudgmentSection {
                status: "unknown".into(),
                criterion: None,
                rule: Some(format!("{e:?}")),
            },
        };
        if random_true || hereditary.status == "certified_true" {
            return builder.finish(
                shape_names,
                randomness,
                hereditary,
                "IRREDUCIBLE",
                theorem,
                not_sum,
                Some(PLUS_R_PRINTHM.into()),
                None,
            );
        }
        return builder.finish(
            shape_names,
            randomness,
            hereditary,
            "UNKNOWN",
            "none",
            false,
            None,
            Some("neither randomness criterion nor hereditary independence certified".into()),
        );
    }

    // Rung 3: sup 0, ot = m*w^alpha + beta, with the m maximal normal-form
    // parts jointly certified.
    if sup_is_zero && beta_below(&beta, &alpha) {
        let (randomness, _) = randomness_sections(b);
        match maximal_parts(b, &alpha) {
            Ok(parts) if parts.len() == m as usize && !parts.is_empty() => {
                let hereditary = match hereditary_independent(&parts, config.depth_budget) {
                    Ok(j) => JudgmentSection::from_judgment(&j, None),
                    Err(e) => JudgmentSection {
                        status: "unknown".into(),
                        criterion: None,
                        rule: Some(format!("{e:?}")),
                    },
                };
                if hereditary.status == "certified_true" {
                    return builder.finish(
                        shape_names,
                        randomness,
                        hereditary,
                        "IRREDUCIBLE",
                        "genthm",
                        false,
                        Some(PLUS_R_GENTHM.into()),
                        None,
                    );
                }
                return builder.finish(
                    shape_names,
                    randomness,
                    hereditary,
                    "UNKNOWN",
                    "none",
                    false,
                    None,
                    Some(
                        "joint independence of the maximal normal-form parts not certified"
                            .into(),
                    ),
                );
            }
            Ok(parts) => {
                return builder.finish(
                    shape_names,
                    randomness,
                    JudgmentSection::not_evaluated(),
                    "UNKNOWN",
                    "none",
                    false,
                    None,
                    Some(format!(
                        "normal form exposes {} maximal parts where the order type demands {m}",
                        parts.len()
                    )),
                );
            }
            Err(e) => {
                return builder.finish(
                    shape_names,
                    randomness,
                    JudgmentSection::not_evaluated(),
                    "UNKNOWN",
                    "none",
                    false,
                    None,
                    Some(format!("normal form not certified: {e:?}")),
                );
            }
        }
    }

    builder.finish(
        shape_names,
        JudgmentSection::not_evaluated(),
        JudgmentSection::not_evaluated(),
        "UNKNOWN",
        "none",
        false,
        None,
        Some("support supremum is not 0, so no ladder rung applies".into()),
    )
}

/// Both randomness criteria; returns the section to embed (the certifying
/// criterion if any, otherwise the exponent-side result) and whether one
/// certified.
fn randomness_sections(b: &Series) -> (JudgmentSection, bool) {
    let by_exp = is_random(b, RandomnessCriterion::ByExponents);
    if by_exp.is_true() {
        return (
            JudgmentSection::from_judgment(&by_exp, Some("by_exponents")),
            true,
        );
    }
    let by_coeff = is_random(b, RandomnessCriterion::ByCoefficients);
    if by_coeff.is_true() {
        return (
            JudgmentSection::from_judgment(&by_coeff, Some("by_coefficients")),
            true,
        );
    }
    // Prefer a definite refutation over an unknown for the record.
    if by_coeff.is_false() && !by_exp.is_false() {
        return (
            JudgmentSection::from_judgment(&by_coeff, Some("by_coefficients")),
            false,
        );
    }
    (
        JudgmentSection::from_judgment(&by_exp, Some("by_exponents")),
        false,
    )
}

/// CNF head data: `ot = w^alpha * m + beta`.
fn head_decomposition(ot: &Ordinal) -> (u64, Ordinal, Ordinal) {
    let terms = ot.terms();
    let (alpha, m) = terms[0].clone();
    let beta = Ordinal::from_terms(terms[1..].to_vec()).unwrap_or_else(|_| Ordinal::zero());
    (m, alpha, beta)
}

fn beta_below(beta: &Ordinal, alpha: &Ordinal) -> bool {
    beta.is_zero() || beta.cantor_degree().map(|d| *d < *alpha).unwrap_or(false)
}

/// The normal-form parts of maximal order type `w^alpha`, as standalone
/// series (each has support supremum 0).
fn maximal_parts(b: &Series, alpha: &Ordinal) -> Result<Vec<Series>, crate::series::SeriesError> {
    let want = Ordinal::omega_pow(alpha).map_err(crate::series::SeriesError::Ordinal)?;
    let mut out = Vec::new();
    for (_, part) in b.normal_form()? {
        if part.ot()? == want {
            out.push(part);
        }
    }
    Ok(out)
}

/// Transfers a base certificate for `b` to `b + r`, checking the r-side
/// conditions of the governing theorem.
pub fn certify_plus_r(b: &Series, r: &Series, config: &Config) -> Certificate {
    let base = certify(b, config);
    let sum = b.add(r);
    let builder = Builder {
        report: ValuationReport::compute(&sum),
        input: format_series(&sum),
        config: config.clone(),
    };
    let not_applicable = |builder: Builder, cause: String| {
        builder.finish(
            base.alpha_shape.tags.clone(),
            base.randomness.clone(),
            base.hereditary.clone(),
            "NOT_APPLICABLE",
            "none",
            false,
            None,
            Some(cause),
        )
    };

    match base.theorem.as_str() {
        "berarducci_10_5" | "pitteloud_omega" => {
            if *r != Series::one() {
                return not_applicable(
                    builder,
                    format!("{} covers only r = 1", base.theorem),
                );
            }
        }
        "printhm_1" | "printhm_2" => {
            let principal = r.is_principal().unwrap_or(false);
            let small = match (r.ot(), b.ot()) {
                (Ok(ro), Ok(bo)) => ro < bo,
                _ => false,
            };
            if !principal || !small {
                return not_applicable(
                    builder,
                    "r must be principal with ot(r) < ot(b)".into(),
                );
            }
        }
        "genthm" => {
            let small = match (r.ot(), b.ot()) {
                (Ok(ro), Ok(bo)) => {
                    let alpha = bo.terms()[0].0.clone();
                    ro.is_zero() || ro.cantor_degree().map(|d| *d < alpha).unwrap_or(false)
                }
                _ => false,
            };
            let sum_sup_zero = matches!(sum.sup_support(), Some((e, _)) if e.is_zero());
            if !small || !sum_sup_zero {
                return not_applicable(
                    builder,
                    "r must satisfy ot(r) < w^alpha and sup(b+r) = 0".into(),
                );
            }
        }
        _ => {
            return not_applicable(
                builder,
                format!("base certificate is {} ({})", base.verdict, base.theorem),
            );
        }
    }

    builder.finish(
        base.alpha_shape.tags.clone(),
        base.randomness.clone(),
        base.hereditary.clone(),
        &base.verdict,
        &base.theorem,
        base.not_sum_of_reducibles,
        base.plus_r_clause.clone(),
        None,
    )
}

/// Judgment on the maximal finite-support divisor of `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DivisorJudgment {
    /// The divisor is the unit 1, by the named rule.
    CertifiedUnit { rule: String },
    Unknown { cause: String },
}

/// Certifies that the maximal finite-support divisor of `b` is trivial: the
/// certified route requires the principal normal-form parts of each positive
/// degree to have independent rv classes. Purely structural negatives (for
/// instance a series presented as `t^gamma * principal`) come back `Unknown`,
/// never a false unit claim.
pub fn maximal_finite_divisor_trivial(
    b: &Series,
    config: &Config,
) -> Result<DivisorJudgment, IndependenceError> {
    if b.is_zero() {
        return Err(IndependenceError::PreconditionViolated(
            "the zero series has no divisor decomposition".into(),
        ));
    }
    let Some((sup, _)) = b.sup_support() else {
        unreachable!("nonzero series has a support supremum");
    };
    if !sup.is_zero() {
        return Ok(DivisorJudgment::Unknown {
            cause: "sup(b) != 0: a monomial divisor is exhibited by the presentation".into(),
        });
    }
    let parts = match b.normal_form() {
        Ok(p) => p,
        Err(e) => {
            return Ok(DivisorJudgment::Unknown {
                cause: format!("normal form not certified: {e:?}"),
            })
        }
    };
    // Group the principal parts by deg_J and certify each group's rv classes.
    let mut groups: std::collections::BTreeMap<Ordinal, Vec<Series>> =
        std::collections::BTreeMap::new();
    for (_, part) in parts {
        match crate::valuation::deg_j(&part) {
            Ok(Some(d)) if !d.is_zero() => groups.entry(d).or_default().push(part),
            Ok(_) => {} // constants and J-parts sit in the remainder r
            Err(e) => {
                return Ok(DivisorJudgment::Unknown {
                    cause: format!("deg_J of a part not certified: {e:?}"),
                })
            }
        }
    }
    if groups.is_empty() {
        // No infinite parts at all: b is a constant plus something in J.
        return Ok(DivisorJudgment::CertifiedUnit {
            rule: "constant_head".into(),
        });
    }
    for (d, group) in &groups {
        match rv_j_linearly_independent(group, config.probe_depth)? {
            IndependenceJudgment::CertifiedTrue { .. } => {}
            IndependenceJudgment::CertifiedFalse { witness } => {
                return Ok(DivisorJudgment::Unknown {
                    cause: format!("rv classes at deg_J {d} are dependent: {witness}"),
                })
            }
            IndependenceJudgment::Unknown { cause } => {
                return Ok(DivisorJudgment::Unknown {
                    cause: format!("rv independence at deg_J {d} not certified: {cause}"),
                })
            }
        }
    }
    Ok(DivisorJudgment::CertifiedUnit {
        rule: "rv_independent_parts".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_series;

    fn cert(text: &str) -> Certificate {
        certify(&parse_series(text).unwrap(), &Config::default())
    }

    #[test]
    fn monomial_below_zero_is_in_j() {
        let c = cert("t^(-1)");
        assert_eq!(c.verdict, "IN_J");
        assert_eq!(c.theorem, "none");
        assert!(c.in_j);
    }

    #[test]
    fn harmonic_series_is_prime() {
        let c = cert("Sum[n: harm(1)](1 * t^(-1/(n+1)))");
        assert_eq!(c.verdict, "PRIME");
        assert_eq!(c.theorem, "pitteloud_omega");
        assert_eq!(c.ot.as_deref(), Some("w"));
        assert!(!c.not_sum_of_reducibles);
    }

    #[test]
    fn conway_series_via_plus_one() {
        let b = parse_series("Sum[n: harm(1)](1 * t^(-1/(n+1)))").unwrap();
        let c = certify_plus_r(&b, &Series::one(), &Config::default());
        assert!(c.is_definite(), "verdict {}", c.verdict);
        assert_eq!(c.ot.as_deref(), Some("w + 1"));
        let doc = c.to_json();
        assert!(doc.contains("berarducci_10_5"), "{doc}");
        // Transfer is refused when the order-type bound fails.
        let same = certify_plus_r(&b, &b, &Config::default());
        assert_eq!(same.verdict, "NOT_APPLICABLE");
    }

    #[test]
    fn fresh_two_dim_series_hits_printhm_2() {
        let c = cert("Sum[m: iharm(1,0), n: iharm(1,1)](fresh(0) * t^(s(m) + s(n)))");
        assert_eq!(c.verdict, "IRREDUCIBLE");
        assert_eq!(c.theorem, "printhm_2");
        assert!(c.not_sum_of_reducibles);
        assert_eq!(c.ot.as_deref(), Some("w^2"));
        assert_eq!(c.randomness.status, "certified_true");
        assert_eq!(c.randomness.criterion.as_deref(), Some("by_coefficients"));
        assert!(c.plus_r_clause.is_some());
    }

    #[test]
    fn product_of_randoms_is_not_certified() {
        let b = parse_series("Sum[n: iharm(1,0)](fresh(1) * t^(s(n)))").unwrap();
        let c = parse_series("Sum[n: iharm(1,1)](fresh(2) * t^(s(n)))").unwrap();
        let cert = certify(&b.mul(&c), &Config::default());
        assert_eq!(cert.verdict, "UNKNOWN");
        assert_eq!(cert.theorem, "none");
        assert!(cert.cause.is_some());
    }

    #[test]
    fn two_cluster_sum_hits_genthm() {
        let text = "Sum[n: iharm(1,0)](fresh(1) * t^(-2 + s(n))) \
                    + Sum[n: iharm(1,1)](fresh(2) * t^(s(n)))";
        let c = cert(text);
        assert_eq!(c.verdict, "IRREDUCIBLE", "cause {:?}", c.cause);
        assert_eq!(c.theorem, "genthm");
        assert_eq!(c.ot.as_deref(), Some("w*2"));
        assert_eq!(c.hereditary.status, "certified_true");
    }

    #[test]
    fn certificates_are_deterministic() {
        let text = "Sum[m: iharm(1,0), n: iharm(1,1)](fresh(0) * t^(s(m) + s(n)))";
        assert_eq!(cert(text).to_json(), cert(text).to_json());
    }

    #[test]
    fn divisor_triviality_judgments() {
        let config = Config::default();
        let unit = parse_series("3").unwrap();
        assert!(matches!(
            maximal_finite_divisor_trivial(&unit, &config).unwrap(),
            DivisorJudgment::CertifiedUnit { .. }
        ));
        // A monomial factor is exhibited by the presentation itself.
        let shifted = parse_series("Sum[n: iharm(1,0)](fresh(1) * t^(-1 + s(n)))").unwrap();
        assert!(matches!(
            maximal_finite_divisor_trivial(&shifted, &config).unwrap(),
            DivisorJudgment::Unknown { .. }
        ));
        let two_cluster = parse_series(
            "Sum[n: iharm(1,0)](fresh(1) * t^(-2 + s(n))) \
             + Sum[n: iharm(1,1)](fresh(2) * t^(s(n)))",
        )
        .unwrap();
        match maximal_finite_divisor_trivial(&two_cluster, &config).unwrap() {
            DivisorJudgment::CertifiedUnit { rule } => {
                assert_eq!(rule, "rv_independent_parts")
            }
            DivisorJudgment::Unknown { cause } => panic!("expected unit: {cause}"),
        }
    }
}
