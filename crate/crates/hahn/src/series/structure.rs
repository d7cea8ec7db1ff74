//! Support structure of a series: order type, clustering, normal form.
//!
//! The support of a family is known only through its presentation, so order
//! types are computed against *certificates*: a family must be certified
//! injective (distinct index tuples give distinct points) and pairs of
//! families certified disjoint before their union's order type is trusted.
//! Certificates are sound but incomplete; when one is missing the order type
//! is reported unknown with honest bounds rather than guessed.

use std::collections::{BTreeMap, BTreeSet};

use crate::exponent::{q_linearly_independent, Exponent};
use crate::ordinal::{Ordinal, OrdinalError};
use crate::primes::prime_owner;

use super::solve::solve_family;
use super::{Family, Ladder, Series};

/// Failure modes of structural queries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeriesError {
    /// The order type could not be certified; `lower` counts support points
    /// actually enumerated, `upper` is the natural sum of per-family bounds.
    OrderTypeUnknown { lower: Ordinal, upper: Ordinal },
    /// The support could not be split into principal parts.
    SeparationUnverifiable,
    Ordinal(OrdinalError),
}

impl std::fmt::Display for SeriesError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesError::OrderTypeUnknown { lower, upper } => {
                write!(f, "order type unknown (between {lower} and {upper})")
            }
            SeriesError::SeparationUnverifiable => {
                write!(f, "support cannot be separated into principal parts")
            }
            SeriesError::Ordinal(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SeriesError {}

impl From<OrdinalError> for SeriesError {
    fn from(e: OrdinalError) -> Self {
        SeriesError::Ordinal(e)
    }
}

/// A maximal run of families whose supports cannot be separated by a gap:
/// every later family starts at or below the running supremum.
#[derive(Clone, Debug)]
pub struct Cluster {
    pub families: Vec<Family>,
    /// Supremum of the cluster's presented support.
    pub sup: Exponent,
    /// Whether the supremum is an actual support point (a monomial sits there).
    pub sup_attained: bool,
}

/// The square-root tags a family's exponents can carry, split into the seeds
/// of its independence ladders (which own infinitely many primes each) and
/// the fixed radicands coming from its base and non-independence scales.
struct PrimeProfile {
    /// Seed of each independence ladder, with the least index it can reach.
    seed_starts: BTreeMap<u32, u64>,
    /// Radicands fixed in the base exponent.
    base_radicands: BTreeSet<u64>,
    /// Radicands contributed by non-independence ladder scales.
    scale_radicands: BTreeSet<u64>,
    /// Union of the two above.
    static_radicands: BTreeSet<u64>,
}

impl PrimeProfile {
    /// Whether some rung of this family's dimensions can carry `sqrt(r)`.
    fn producible(&self, r: u64) -> bool {
        if self.scale_radicands.contains(&r) {
            return true;
        }
        match prime_owner(r) {
            Some((s, n)) => self.seed_starts.get(&s).is_some_and(|start| n >= *start),
            None => false,
        }
    }
}

fn prime_profile(f: &Family) -> Option<PrimeProfile> {
    let mut seed_starts = BTreeMap::new();
    let base_radicands: BTreeSet<u64> = f.base.radicands().collect();
    let mut scale_radicands: BTreeSet<u64> = BTreeSet::new();
    for d in &f.dims {
        match &d.ladder {
            Ladder::IndepHarmonic { scale, seed } => {
                if !scale.is_rational() {
                    return None;
                }
                if seed_starts.insert(*seed, d.start).is_some() {
                    return None; // duplicate seed: prime tags would collide
                }
            }
            other => {
                scale_radicands.extend(other.scale().radicands());
            }
        }
    }
    let static_radicands: BTreeSet<u64> =
        base_radicands.union(&scale_radicands).copied().collect();
    Some(PrimeProfile {
        seed_starts,
        base_radicands,
        scale_radicands,
        static_radicands,
    })
}

/// Whether none of `radicands` is a prime the seed's ladder can still reach:
/// radicands owned by the seed with index below `start` are harmless (the
/// ladder never revisits them), everything else owned by the seed can collide
/// with a rung's square-root tag.
fn seed_clear(seed: u32, start: u64, radicands: &BTreeSet<u64>) -> bool {
    radicands.iter().all(|r| match prime_owner(*r) {
        Some((s, n)) if s == seed => n < start,
        _ => true,
    })
}

/// Certifies that distinct index tuples of `f` give distinct support points.
///
/// Always true in at most one dimension (ladders are strictly monotone). In
/// higher dimension, true when the independence ladders carry untouched prime
/// tags (pinning their indices in any equality of two values) and the
/// remaining scales are Q-linearly independent.
pub fn injective_certified(f: &Family) -> bool {
    if f.dims.len() <= 1 {
        return true;
    }
    let Some(profile) = prime_profile(f) else {
        return false;
    };
    let mut plain_scales = Vec::new();
    for d in &f.dims {
        if !matches!(d.ladder, Ladder::IndepHarmonic { .. }) {
            plain_scales.push(d.ladder.scale().clone());
        }
    }
    if plain_scales.len() > 1 && !q_linearly_independent(&plain_scales) {
        return false;
    }
    profile
        .seed_starts
        .iter()
        .all(|(s, start)| seed_clear(*s, *start, &profile.static_radicands))
}

/// Certifies that the point set generated by the families `a` is Q-linearly
/// independent over the rational span of the point set generated by `b`: any
/// rational combination of `a`-points landing in that span must be trivial.
///
/// Sufficient condition: every `a` family mints a private square-root tag per
/// point — a single free independence-ladder dimension whose reachable primes
/// are untouched by its own fixed radicands, by every other `a` family, and
/// by every `b` family (so the tag coordinate of a combination is a single
/// rational multiple of one point's coefficient) — or is a monomial carrying
/// a fixed radicand nobody else can produce.
pub fn independent_over_certified(a: &[Family], b: &[Family]) -> bool {
    let others = |skip: usize| {
        a.iter()
            .enumerate()
            .filter(move |(j, _)| *j != skip)
            .map(|(_, g)| g)
            .chain(b.iter())
    };
    for (i, f) in a.iter().enumerate() {
        let Some(pf) = prime_profile(f) else {
            return false;
        };
        if f.dims.is_empty() {
            // A single point: certified by a fixed radicand that no other
            // family fixes or can produce.
            let private = pf.base_radicands.iter().any(|r| {
                others(i).all(|g| match prime_profile(g) {
                    Some(pg) => !pg.static_radicands.contains(r) && !pg.producible(*r),
                    None => false,
                })
            });
            if !private {
                return false;
            }
            continue;
        }
        // Multiple free dimensions admit rectangle relations among the
        // points themselves; no private tag pins a whole point.
        if f.dims.len() != 1 {
            return false;
        }
        if !matches!(f.dims[0].ladder, Ladder::IndepHarmonic { .. }) {
            return false;
        }
        let (&seed, &start) = pf.seed_starts.iter().next().expect("one iharm dim");
        if !seed_clear(seed, start, &pf.static_radicands) {
            return false;
        }
        for g in others(i) {
            let Some(pg) = prime_profile(g) else {
                return false;
            };
            if pg.seed_starts.contains_key(&seed)
                || !seed_clear(seed, start, &pg.static_radicands)
            {
                return false;
            }
        }
    }
    true
}

/// Certifies that the supports of two *distinct* families are disjoint.
/// Monomial-vs-family cases are decided exactly; free-vs-free cases use the
/// interval gap or the prime tags of one side's independence ladders.
pub fn pair_disjoint_certified(f: &Family, g: &Family) -> bool {
    match (f.is_monomial(), g.is_monomial()) {
        (true, true) => f.base != g.base,
        (true, false) => solve_family(g, &f.base).is_empty(),
        (false, true) => solve_family(f, &g.base).is_empty(),
        (false, false) => {
            // Interval gap: one support lies entirely below the other's
            // minimum (free supports sit strictly below their sup).
            if *f.acc() <= g.min_value() || *g.acc() <= f.min_value() {
                return true;
            }
            let (Some(pf), Some(pg)) = (prime_profile(f), prime_profile(g)) else {
                return false;
            };
            // If some seed ladder of one side has no counterpart on the other
            // side and its reachable primes appear in neither side's fixed
            // radicands, that side's points carry square-root tags the other
            // side can never produce.
            let tagged_apart = |a: &PrimeProfile, b: &PrimeProfile| {
                a.seed_starts.iter().any(|(s, start)| {
                    !b.seed_starts.contains_key(s)
                        && seed_clear(*s, *start, &a.static_radicands)
                        && seed_clear(*s, *start, &b.static_radicands)
                })
            };
            // A radicand fixed in one base that neither side's dimensions can
            // produce is a tag carried by every point of that side and by no
            // point of the other.
            let base_apart = |a: &PrimeProfile, b: &PrimeProfile| {
                a.base_radicands.iter().any(|r| {
                    !b.base_radicands.contains(r) && !a.producible(*r) && !b.producible(*r)
                })
            };
            tagged_apart(&pf, &pg)
                || tagged_apart(&pg, &pf)
                || base_apart(&pf, &pg)
                || base_apart(&pg, &pf)
        }
    }
}

impl Series {
    /// `(sup of support, attained)`; `None` for the zero series.
    pub fn sup_support(&self) -> Option<(Exponent, bool)> {
        let mut best: Option<(Exponent, bool)> = None;
        for f in self.families() {
            let cand = (f.acc().clone(), f.is_monomial());
            best = Some(match best {
                None => cand,
                Some(b) => max_sup(b, cand),
            });
        }
        best
    }

    /// The least support point; `None` for the zero series.
    pub fn min_support(&self) -> Option<Exponent> {
        self.families().iter().map(|f| f.min_value()).min()
    }

    /// Membership in the ideal of series supported away from 0: zero, or
    /// sup(support) strictly negative.
    pub fn is_in_j(&self) -> bool {
        match self.sup_support() {
            None => true,
            Some((s, _)) => s.sign().is_lt(),
        }
    }

    /// Maximal runs of families that cannot be separated by a support gap,
    /// in increasing support order.
    pub fn clusters(&self) -> Vec<Cluster> {
        let mut out: Vec<Cluster> = Vec::new();
        for f in self.families() {
            let fmin = f.min_value();
            let fsup = (f.acc().clone(), f.is_monomial());
            match out.last_mut() {
                Some(c) if !(fmin >= c.sup && (fmin > c.sup || !c.sup_attained)) => {
                    let merged = max_sup((c.sup.clone(), c.sup_attained), fsup);
                    c.sup = merged.0;
                    c.sup_attained = merged.1;
                    c.families.push(f.clone());
                }
                _ => out.push(Cluster {
                    families: vec![f.clone()],
                    sup: fsup.0,
                    sup_attained: fsup.1,
                }),
            }
        }
        out
    }

    /// The order type of the support, when certifiable: the ordinal sum of
    /// the cluster order types in support order.
    pub fn ot(&self) -> Result<Ordinal, SeriesError> {
        let mut total = Ordinal::zero();
        for c in self.clusters() {
            match cluster_ot(&c) {
                Ok(o) => total = total.add(&o)?,
                Err(_) => return Err(self.ot_unknown()),
            }
        }
        Ok(total)
    }

    fn ot_unknown(&self) -> SeriesError {
        let (pts, _) = self.enumerate_with_budget(64, 20_000);
        let lower = Ordinal::from_nat(pts.len() as u64);
        let mut upper = Ordinal::zero();
        for f in self.families() {
            let part = Ordinal::omega_pow(&Ordinal::from_nat(f.dim_count() as u64))
                .unwrap_or_else(|_| Ordinal::omega());
            upper = upper.nat_sum(&part).unwrap_or(upper);
        }
        SeriesError::OrderTypeUnknown { lower, upper }
    }

    /// Decomposition `b = sum_i t^{gamma_i} b_i` with the parts in increasing
    /// support order, each `b_i` of additively principal order type with
    /// support supremum 0. Returns `(gamma_i, b_i)` pairs.
    pub fn normal_form(&self) -> Result<Vec<(Exponent, Series)>, SeriesError> {
        let mut parts = Vec::new();
        for c in self.clusters() {
            // Certify the cluster's order type first.
            cluster_ot(&c).map_err(|issue| match issue {
                ClusterIssue::Interleaved => SeriesError::SeparationUnverifiable,
                ClusterIssue::Uncertified => self.ot_unknown(),
                ClusterIssue::Ordinal(e) => SeriesError::Ordinal(e),
            })?;
            let shift = c.sup.neg();
            let (monos, free): (Vec<Family>, Vec<Family>) = c
                .families
                .iter()
                .cloned()
                .partition(|f| f.is_monomial() && *f.acc() == c.sup);
            if !free.is_empty() {
                let part = Series::from_families(free).shift(&shift);
                parts.push((c.sup.clone(), part));
            }
            if !monos.is_empty() {
                let part = Series::from_families(monos).shift(&shift);
                parts.push((c.sup.clone(), part));
            }
        }
        Ok(parts)
    }

    /// Whether the support has additively principal order type with
    /// supremum 0 (possibly attained, for the order type 1 case).
    pub fn is_principal(&self) -> Result<bool, SeriesError> {
        let Some((sup, _)) = self.sup_support() else {
            return Ok(false);
        };
        if !matches!(sup.sign(), std::cmp::Ordering::Equal) {
            return Ok(false);
        }
        Ok(self.ot()?.is_additively_principal())
    }
}

fn max_sup(a: (Exponent, bool), b: (Exponent, bool)) -> (Exponent, bool) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Equal => (a.0, a.1 || b.1),
    }
}

enum ClusterIssue {
    /// An interior family has as many dimensions as the sup families: the
    /// supports interleave and the cluster is not a single principal block.
    Interleaved,
    /// A required injectivity or disjointness certificate is missing.
    Uncertified,
    Ordinal(OrdinalError),
}

impl From<OrdinalError> for ClusterIssue {
    fn from(e: OrdinalError) -> Self {
        ClusterIssue::Ordinal(e)
    }
}

/// Order type of one cluster: `w^d_max (+1)` where `d_max` is the maximal
/// dimension among families accumulating at the cluster sup, and the `+1`
/// accounts for a monomial sitting on the sup itself.
fn cluster_ot(c: &Cluster) -> Result<Ordinal, ClusterIssue> {
    let at_sup_free: Vec<&Family> = c
        .families
        .iter()
        .filter(|f| !f.is_monomial() && *f.acc() == c.sup)
        .collect();
    let attained = c
        .families
        .iter()
        .any(|f| f.is_monomial() && *f.acc() == c.sup);
    if at_sup_free.is_empty() {
        // A lone monomial (interior families would have forced a split).
        debug_assert_eq!(c.families.len(), 1);
        return Ok(Ordinal::one());
    }
    let d_max = at_sup_free.iter().map(|f| f.dim_count()).max().unwrap();
    for f in &c.families {
        if f.is_monomial() {
            continue;
        }
        if *f.acc() != c.sup && f.dim_count() >= d_max {
            return Err(ClusterIssue::Interleaved);
        }
        if !injective_certified(f) {
            return Err(ClusterIssue::Uncertified);
        }
    }
    let frees: Vec<&Family> = c.families.iter().filter(|f| !f.is_monomial()).collect();
    for (i, f) in frees.iter().enumerate() {
        for g in &frees[i + 1..] {
            if !pair_disjoint_certified(f, g) {
                return Err(ClusterIssue::Uncertified);
            }
        }
    }
    let mut o = Ordinal::omega_pow(&Ordinal::from_nat(d_max as u64))?;
    if attained {
        o = o.add(&Ordinal::one())?;
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;
    use num_rational::BigRational;

    fn harm(num: i64, den: i64) -> Ladder {
        Ladder::Harmonic {
            scale: Exponent::from_frac(num, den),
        }
    }

    fn iharm(seed: u32) -> Ladder {
        Ladder::IndepHarmonic {
            scale: Exponent::from_int(1),
            seed,
        }
    }

    fn fam_at(base: Exponent, ladders: Vec<Ladder>) -> Family {
        Family::new(base, ladders, Coeff::one(), vec![])
    }

    #[test]
    fn omega_plus_one() {
        // 1 + the harmonic family: support {-1/(n+1)} u {0}.
        let b = Series::one().add(&Series::from_families(vec![fam_at(
            Exponent::zero(),
            vec![harm(1, 1)],
        )]));
        assert_eq!(b.ot().unwrap(), Ordinal::omega().add(&Ordinal::one()).unwrap());
        assert_eq!(b.sup_support(), Some((Exponent::zero(), true)));
        assert!(!b.is_in_j());
    }

    #[test]
    fn independent_square_is_omega_squared() {
        let b = Series::from_families(vec![fam_at(Exponent::zero(), vec![iharm(0), iharm(1)])]);
        assert_eq!(
            b.ot().unwrap(),
            Ordinal::omega_pow(&Ordinal::from_nat(2)).unwrap()
        );
        assert!(b.is_principal().unwrap());
    }

    #[test]
    fn plain_harmonic_square_is_unknown() {
        // harm x harm has massive collisions: no injectivity certificate.
        let b = Series::from_families(vec![fam_at(Exponent::zero(), vec![harm(1, 1), harm(1, 1)])]);
        match b.ot() {
            Err(SeriesError::OrderTypeUnknown { lower, upper }) => {
                assert!(lower >= Ordinal::from_nat(10));
                assert_eq!(upper, Ordinal::omega_pow(&Ordinal::from_nat(2)).unwrap());
            }
            other => panic!("expected unknown order type, got {other:?}"),
        }
    }

    #[test]
    fn separated_clusters_sum() {
        // t^-1 * family + family: w + w = w * 2.
        let low = fam_at(Exponent::from_int(-1), vec![harm(1, 2)]);
        let high = fam_at(Exponent::zero(), vec![harm(1, 2)]);
        let b = Series::from_families(vec![low, high]);
        assert_eq!(b.clusters().len(), 2);
        let w = Ordinal::omega();
        assert_eq!(b.ot().unwrap(), w.add(&w).unwrap());
        assert!(!b.is_principal().unwrap());
    }

    #[test]
    fn monomials_only() {
        let b = Series::monomial(Coeff::one(), Exponent::from_int(-1))
            .add(&Series::monomial(Coeff::one(), Exponent::sqrt(2).neg()))
            .add(&Series::one());
        assert_eq!(b.ot().unwrap(), Ordinal::from_nat(3));
        assert_eq!(b.min_support(), Some(Exponent::sqrt(2).neg()));
    }

    #[test]
    fn normal_form_splits_attained_sup() {
        let fam = fam_at(Exponent::zero(), vec![harm(1, 1)]);
        let b = Series::one().add(&Series::from_families(vec![fam.clone()]));
        let parts = b.normal_form().unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, Exponent::zero());
        assert_eq!(parts[0].1, Series::from_families(vec![fam]));
        assert_eq!(parts[1].1, Series::one());
        for (_, p) in &parts {
            assert!(p.ot().unwrap().is_additively_principal());
        }
    }

    #[test]
    fn disjointness_certificates() {
        // Interval rule: everything of f sits below g's minimum.
        let f = fam_at(Exponent::from_int(-2), vec![harm(1, 1)]);
        let g = fam_at(Exponent::zero(), vec![harm(1, 4)]);
        assert!(pair_disjoint_certified(&f, &g));
        // Prime rule: disjoint seeds at the same accumulation point.
        let a = fam_at(Exponent::zero(), vec![iharm(0)]);
        let b = fam_at(Exponent::zero(), vec![iharm(1)]);
        assert!(pair_disjoint_certified(&a, &b));
        // Identical plain ladders at the same base: no certificate.
        let c = fam_at(Exponent::zero(), vec![harm(1, 1)]);
        let d = fam_at(Exponent::from_int(0), vec![harm(1, 2)]);
        assert!(!pair_disjoint_certified(&c, &d));
        // Monomial membership is decided exactly.
        let m = Family::monomial(Coeff::one(), Exponent::from_frac(-1, 3));
        assert!(!pair_disjoint_certified(&m, &c)); // -1/3 is a rung
        let m2 = Family::monomial(Coeff::one(), Exponent::sqrt(2).neg());
        assert!(pair_disjoint_certified(&m2, &c));
    }

    #[test]
    fn injectivity_certificates() {
        assert!(injective_certified(&fam_at(Exponent::zero(), vec![harm(1, 1)])));
        assert!(injective_certified(&fam_at(
            Exponent::zero(),
            vec![iharm(0), iharm(1)]
        )));
        assert!(!injective_certified(&fam_at(
            Exponent::zero(),
            vec![harm(1, 1), harm(1, 1)]
        )));
        assert!(!injective_certified(&fam_at(
            Exponent::zero(),
            vec![iharm(0), iharm(0)]
        )));
        // Mixed: one independence ladder, one plain ladder.
        assert!(injective_certified(&fam_at(
            Exponent::zero(),
            vec![iharm(0), harm(1, 1)]
        )));
        // Geometric ratio scaling stays certifiable alongside a seed.
        assert!(injective_certified(&fam_at(
            Exponent::zero(),
            vec![
                iharm(2),
                Ladder::Geometric {
                    scale: Exponent::from_int(1),
                    ratio: BigRational::new(1.into(), 2.into()),
                },
            ]
        )));
    }
}
