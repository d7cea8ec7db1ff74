//! Randomness and hereditary independence certification.
//!
//! "Random" means the closure of the support (minus 0) is a Q-linearly
//! independent set of reals, or alternatively that the coefficients are
//! algebraically independent indeterminates. "Mutually random" adds pairwise
//! disjointness of the support closures. Hereditary rv_J-independence of a
//! tuple is the recursive hypothesis behind the strongest irreducibility
//! theorems; it quantifies over infinitely many germ tuples, so certification
//! is rule-based (named sufficient conditions) and falsification is a
//! budget-bounded witness search. `Unknown` is an honest third answer.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::coeff::{Coeff, Var};
use crate::exponent::{q_linearly_independent, Exponent};
use crate::ordinal::Ordinal;
use crate::primes::prime_owner;
use crate::series::{
    independent_over_certified, pair_disjoint_certified, CoeffFactor, Family, FreshComp, Ladder,
    Series,
};
use crate::valuation::{
    big_points, cl_streams, deg_j, points_of_min_degree, PointSet, ValuationError,
};

/// Three-valued outcome of an independence query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndependenceJudgment {
    /// The named sufficient rule fired.
    CertifiedTrue { rule: String },
    /// A concrete, replayable counterexample.
    CertifiedFalse { witness: String },
    /// No rule fired and no witness was found within budget.
    Unknown { cause: String },
}

impl IndependenceJudgment {
    pub fn is_true(&self) -> bool {
        matches!(self, IndependenceJudgment::CertifiedTrue { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, IndependenceJudgment::CertifiedFalse { .. })
    }

    fn unknown(cause: impl Into<String>) -> IndependenceJudgment {
        IndependenceJudgment::Unknown {
            cause: cause.into(),
        }
    }

    fn holds(rule: impl Into<String>) -> IndependenceJudgment {
        IndependenceJudgment::CertifiedTrue { rule: rule.into() }
    }

    fn fails(witness: impl Into<String>) -> IndependenceJudgment {
        IndependenceJudgment::CertifiedFalse {
            witness: witness.into(),
        }
    }
}

/// Which definition of randomness is being certified.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RandomnessCriterion {
    /// `cl(supp(b)) \ {0}` is Q-linearly independent.
    ByExponents,
    /// The coefficients are algebraically independent over Q.
    ByCoefficients,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndependenceError {
    PreconditionViolated(String),
    Valuation(ValuationError),
}

impl std::fmt::Display for IndependenceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IndependenceError::PreconditionViolated(s) => {
                write!(f, "precondition violated: {s}")
            }
            IndependenceError::Valuation(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IndependenceError {}

impl From<ValuationError> for IndependenceError {
    fn from(e: ValuationError) -> Self {
        IndependenceError::Valuation(e)
    }
}

/// The per-family exponent analysis shared by the randomness rules: every
/// free dimension must be an independence ladder with rational scale (so each
/// support point carries a square-root tag reserved for its index), seeds
/// must be unique, and every other exponent in sight (monomial exponents,
/// family bases) must avoid the tags the ladders can still reach.
struct ExponentAnalysis {
    /// seed -> least reachable index, over all free dimensions.
    seed_starts: BTreeMap<u32, u64>,
    /// Exponents with no per-point tag: monomial exponents and nonzero bases.
    untagged: Vec<Exponent>,
    /// A family with two or more free dimensions (sum-form points are
    /// Q-dependent across rectangles), if present: family index.
    multi_dim: Option<usize>,
}

fn analyze_exponents(families: &[Family]) -> Result<ExponentAnalysis, String> {
    let mut a = ExponentAnalysis {
        seed_starts: BTreeMap::new(),
        untagged: Vec::new(),
        multi_dim: None,
    };
    for (i, f) in families.iter().enumerate() {
        if f.is_monomial() {
            a.untagged.push(f.base.clone());
            continue;
        }
        if f.dims.len() >= 2 && a.multi_dim.is_none() {
            a.multi_dim = Some(i);
        }
        let mut tagged = true;
        for d in &f.dims {
            match &d.ladder {
                Ladder::IndepHarmonic { scale, seed } => {
                    if !scale.is_rational() {
                        return Err(format!("family {i}: irrational ladder scale"));
                    }
                    if a.seed_starts.insert(*seed, d.start).is_some() {
                        return Err(format!("family {i}: duplicate seed {seed}"));
                    }
                }
                _ => tagged = false,
            }
        }
        if !tagged {
            return Err(format!("family {i}: non-independence ladder"));
        }
        if !f.base.is_zero() {
            a.untagged.push(f.base.clone());
        }
    }
    Ok(a)
}

/// Whether `e` carries a radicand some listed seed ladder can still reach.
fn touches_reachable_seed(e: &Exponent, seed_starts: &BTreeMap<u32, u64>) -> bool {
    e.radicands().any(|r| match prime_owner(r) {
        Some((s, n)) => seed_starts.get(&s).is_some_and(|start| n >= *start),
        None => false,
    })
}

/// Randomness of one series under the chosen criterion.
pub fn is_random(b: &Series, criterion: RandomnessCriterion) -> IndependenceJudgment {
    match criterion {
        RandomnessCriterion::ByExponents => is_random_by_exponents(b.families()),
        RandomnessCriterion::ByCoefficients => is_random_by_coefficients(b.families()),
    }
}

fn is_random_by_exponents(families: &[Family]) -> IndependenceJudgment {
    // Falsification first: these witnesses are exact regardless of the
    // certification rules.
    for (i, f) in families.iter().enumerate() {
        if f.dims.len() >= 2 && crate::series::injective_certified(f) {
            // Four rectangle corners satisfy (n,m) + (n',m') = (n,m') + (n',m):
            // the combination 1,1,-1,-1 vanishes.
            let d = f.dims.len();
            let mut lo = vec![0u64; d];
            for (j, dim) in f.dims.iter().enumerate() {
                lo[j] = dim.start;
            }
            let mut hi = lo.clone();
            hi[0] += 1;
            hi[1] += 1;
            let mut cross1 = lo.clone();
            cross1[0] += 1;
            let mut cross2 = lo.clone();
            cross2[1] += 1;
            return IndependenceJudgment::fails(format!(
                "family {i}: 1*({:?}) + 1*({:?}) - 1*({:?}) - 1*({:?}) = 0",
                f.exponent_at(&lo),
                f.exponent_at(&hi),
                f.exponent_at(&cross1),
                f.exponent_at(&cross2),
            ));
        }
        if !f.is_monomial()
            && f.base.is_rational()
            && f.dims.len() == 1
            && !matches!(f.dims[0].ladder, Ladder::IndepHarmonic { .. })
            && f.dims[0].ladder.scale().is_rational()
        {
            let x1 = f.exponent_at(&vec![f.dims[0].start]);
            let x2 = f.exponent_at(&vec![f.dims[0].start + 1]);
            return IndependenceJudgment::fails(format!(
                "family {i}: rational support points {x1} and {x2} are Q-dependent",
            ));
        }
    }
    let a = match analyze_exponents(families) {
        Ok(a) => a,
        Err(cause) => return IndependenceJudgment::unknown(cause),
    };
    if let Some(i) = a.multi_dim {
        // Not injectivity-certified (or the witness above would have fired).
        return IndependenceJudgment::unknown(format!(
            "family {i} has several free dimensions; rectangle relations not excluded",
        ));
    }
    for e in &a.untagged {
        if touches_reachable_seed(e, &a.seed_starts) {
            return IndependenceJudgment::unknown(format!(
                "exponent {e} carries a radicand an independence ladder can reach",
            ));
        }
    }
    if !q_linearly_independent(&a.untagged) {
        // An exact dependence among the finitely many untagged exponents.
        return IndependenceJudgment::fails(format!(
            "Q-dependent monomial exponents / accumulation points: {:?}",
            a.untagged.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        ));
    }
    IndependenceJudgment::holds("independent_ladders")
}

/// The coefficient atoms of a certified all-fresh presentation.
enum CoeffAtom {
    /// A free family whose tuples each mint `X_{tag, tuple}` with the listed
    /// start offsets.
    Stream { tag: u64, starts: Vec<u64> },
    /// A pinned indeterminate (monomial coefficient).
    Pinned(Var),
}

fn coeff_atom(f: &Family) -> Result<CoeffAtom, String> {
    if f.is_monomial() {
        let Some((q, v)) = f.scalar.as_scaled_var() else {
            return Err(format!(
                "monomial at {} has coefficient {} (not a scaled indeterminate)",
                f.base, f.scalar
            ));
        };
        if q.is_zero() {
            return Err("zero coefficient".into());
        }
        return Ok(CoeffAtom::Pinned(v));
    }
    if f.scalar.as_rational().is_none() {
        return Err("non-rational family scalar".into());
    }
    let mut fresh: Option<(u64, Vec<u64>)> = None;
    for factor in &f.factors {
        match factor {
            CoeffFactor::Fresh { tag, comps } => {
                if fresh.is_some() {
                    return Err("two fresh factors in one family".into());
                }
                // The fresh factor must move with every free dimension so
                // distinct tuples mint distinct indeterminates.
                let covered: BTreeSet<usize> = comps
                    .iter()
                    .filter_map(|c| match c {
                        FreshComp::Dim(i) => Some(*i),
                        FreshComp::Const(_) => None,
                    })
                    .collect();
                if covered.len() != f.dims.len() {
                    return Err("fresh factor does not cover every dimension".into());
                }
                let starts = f.dims.iter().map(|d| d.start).collect();
                fresh = Some((*tag, starts));
            }
            CoeffFactor::Cycle { values, .. } => {
                if values
                    .iter()
                    .any(|v| v.as_rational().is_none_or(|q| q.is_zero()))
                {
                    return Err("cycle factor with non-rational or zero value".into());
                }
            }
        }
    }
    match fresh {
        Some((tag, starts)) => Ok(CoeffAtom::Stream { tag, starts }),
        None => Err("free family without a fresh factor".into()),
    }
}

fn is_random_by_coefficients(families: &[Family]) -> IndependenceJudgment {
    let mut atoms = Vec::new();
    for f in families {
        match coeff_atom(f) {
            Ok(a) => atoms.push(a),
            Err(cause) => return IndependenceJudgment::unknown(cause),
        }
    }
    // Distinctness: stream tags pairwise distinct; a pinned X_{tag, idx} must
    // not be mintable by a stream of the same tag (indices below the starts
    // are out of reach and therefore fine).
    let mut stream_tags: BTreeMap<u64, &Vec<u64>> = BTreeMap::new();
    for a in &atoms {
        if let CoeffAtom::Stream { tag, starts } = a {
            if stream_tags.insert(*tag, starts).is_some() {
                return IndependenceJudgment::unknown(format!(
                    "two free families share fresh tag {tag}"
                ));
            }
        }
    }
    let mut pinned: BTreeSet<&Var> = BTreeSet::new();
    for a in &atoms {
        if let CoeffAtom::Pinned(v) = a {
            if !pinned.insert(v) {
                return IndependenceJudgment::unknown(format!("indeterminate {v:?} repeats"));
            }
            if let Var::Fresh { tag, indices } = v {
                if let Some(starts) = stream_tags.get(tag) {
                    let reachable = indices.len() == starts.len()
                        && indices.iter().zip(starts.iter()).all(|(i, s)| i >= s);
                    if reachable {
                        return IndependenceJudgment::unknown(format!(
                            "indeterminate {v:?} collides with the free family tagged {tag}"
                        ));
                    }
                }
            }
        }
    }
    IndependenceJudgment::holds("fresh_coefficients")
}

/// The closure streams of each series, excluding the one presenting the bare
/// point 0 (closure intersections are taken modulo 0).
fn nonzero_streams(b: &Series) -> Vec<Family> {
    cl_streams(b)
        .into_iter()
        .map(|(s, _)| s)
        .filter(|s| !(s.dims.is_empty() && s.base.is_zero()))
        .collect()
}

/// Mutual randomness: each series random and the support closures pairwise
/// intersecting only in 0.
pub fn mutually_random(bs: &[Series]) -> IndependenceJudgment {
    // Structural duplicates are an exact counterexample.
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if bs[i] == bs[j] && !bs[i].is_zero() {
                return IndependenceJudgment::fails(format!(
                    "series {i} and {j} coincide, so their support closures do",
                ));
            }
            if let Some(witness) = common_closure_point(&bs[i], &bs[j]) {
                return IndependenceJudgment::fails(format!(
                    "series {i} and {j} share the closure point {witness}",
                ));
            }
        }
    }
    // Jointly fresh coefficients certify on their own.
    let all: Vec<Family> = bs.iter().flat_map(|b| b.families().to_vec()).collect();
    if is_random_by_coefficients(&all).is_true() {
        return IndependenceJudgment::holds("fresh_coefficients");
    }
    // Exponent route: the union of all families must satisfy the ladder rule
    // (which gives joint Q-independence), and closure streams must be
    // pairwise disjoint across distinct series.
    let joint = is_random_by_exponents(&all);
    if !joint.is_true() {
        return match joint {
            IndependenceJudgment::CertifiedFalse { witness } => {
                IndependenceJudgment::unknown(format!(
                    "joint exponent system is Q-dependent ({witness}); no coefficient rule fires"
                ))
            }
            other => other,
        };
    }
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            for s in nonzero_streams(&bs[i]) {
                for u in nonzero_streams(&bs[j]) {
                    if !pair_disjoint_certified(&s, &u) {
                        return IndependenceJudgment::unknown(format!(
                            "closure streams of series {i} and {j} not certified disjoint",
                        ));
                    }
                }
            }
        }
    }
    IndependenceJudgment::holds("mutually_random")
}

/// A certified common point of the two closures (other than 0), if one is
/// exhibited structurally.
fn common_closure_point(a: &Series, b: &Series) -> Option<Exponent> {
    let sa = nonzero_streams(a);
    let sb = nonzero_streams(b);
    for s in &sa {
        for u in &sb {
            if s.dims.is_empty() {
                // A closed point of a: in cl(supp(b)) iff some stream hits it.
                if u.dims.is_empty() {
                    if s.base == u.base {
                        return Some(s.base.clone());
                    }
                } else if !crate::series::solve_family(u, &s.base).is_empty() {
                    return Some(s.base.clone());
                }
            } else if u.dims.is_empty() {
                if !crate::series::solve_family(s, &u.base).is_empty() {
                    return Some(u.base.clone());
                }
            } else if s == u {
                return Some(s.min_value());
            }
        }
    }
    None
}

/// `Lim(b)`: the accumulation points of `cl(supp(b))`. These are the points
/// whose germ still carries a base-0 family, plus possibly 0 itself.
pub struct LimPoints {
    inner: PointSet,
    includes_zero: bool,
}

pub fn lim_points(b: &Series) -> LimPoints {
    let includes_zero = b
        .families()
        .iter()
        .any(|f| !f.is_monomial() && f.acc().is_zero());
    LimPoints {
        inner: points_of_min_degree(b, Ordinal::one()),
        includes_zero,
    }
}

impl LimPoints {
    pub fn contains(&self, gamma: &Exponent) -> Result<bool, ValuationError> {
        if gamma.is_zero() {
            return Ok(self.includes_zero);
        }
        self.inner.contains(gamma)
    }

    /// The first `n` accumulation points in increasing order (0, if a member,
    /// is last and appears only when the rest is exhausted early).
    pub fn first(&self, n: usize) -> Result<Vec<Exponent>, ValuationError> {
        let mut out = self.inner.first(n)?;
        if out.len() < n && self.includes_zero {
            out.push(Exponent::zero());
        }
        Ok(out)
    }

    pub fn symbolic(&self) -> Result<Series, ValuationError> {
        let mut s = self.inner.symbolic()?;
        if self.includes_zero {
            s = s.add(&Series::one());
        }
        Ok(s)
    }
}

/// Common `deg_J` of a tuple, or the precondition error.
fn common_deg_j(bs: &[Series]) -> Result<Ordinal, IndependenceError> {
    if bs.is_empty() {
        return Err(IndependenceError::PreconditionViolated(
            "empty tuple".into(),
        ));
    }
    let mut common: Option<Ordinal> = None;
    for b in bs {
        let d = deg_j(b)?.ok_or_else(|| {
            IndependenceError::PreconditionViolated("a member lies in J".into())
        })?;
        match &common {
            None => common = Some(d),
            Some(c) if *c == d => {}
            Some(c) => {
                return Err(IndependenceError::PreconditionViolated(format!(
                    "deg_J values differ: {c} vs {d}"
                )))
            }
        }
    }
    Ok(common.unwrap())
}

/// K-linear independence of `rv_J(b_1), …, rv_J(b_n)`.
pub fn rv_j_linearly_independent(
    bs: &[Series],
    probe_depth: usize,
) -> Result<IndependenceJudgment, IndependenceError> {
    let d = common_deg_j(bs)?;
    if d.is_zero() {
        return Err(IndependenceError::PreconditionViolated(
            "deg_J must be at least 1".into(),
        ));
    }
    // Fresh coefficients: distinct indeterminates admit no K-linear relation
    // that cancels the leading families.
    let all: Vec<Family> = bs.iter().flat_map(|b| b.families().to_vec()).collect();
    if is_random_by_coefficients(&all).is_true() {
        return Ok(IndependenceJudgment::holds("fresh_coefficients"));
    }
    // Disjoint base-0 supports: no cross terms can cancel.
    let mut disjoint = true;
    'outer: for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            for f in base0_families(&bs[i]) {
                for g in base0_families(&bs[j]) {
                    if !pair_disjoint_certified(f, g) {
                        disjoint = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    if disjoint {
        return Ok(IndependenceJudgment::holds("disjoint_supports"));
    }
    // Falsification: probe matrix over the first common support points. A
    // kernel vector is only a candidate; it is verified by checking that the
    // combination's deg_J actually drops.
    if let Some(k) = probe_kernel(bs, probe_depth) {
        let mut combo = Series::zero();
        for (b, ki) in bs.iter().zip(&k) {
            combo = combo.add(&b.scale(ki));
        }
        let dropped = match deg_j(&combo) {
            Ok(None) => true,
            Ok(Some(dc)) => dc < d,
            Err(_) => false,
        };
        if dropped {
            return Ok(IndependenceJudgment::fails(format!(
                "coefficients {:?} give a combination of smaller deg_J",
                k.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            )));
        }
    }
    Ok(IndependenceJudgment::unknown(
        "no disjointness or freshness rule fires and no kernel witness verified",
    ))
}

fn base0_families(b: &Series) -> Vec<&Family> {
    b.families()
        .iter()
        .filter(|f| !f.is_monomial() && f.acc().is_zero())
        .collect()
}

/// A nonzero kernel vector of the probe coefficient matrix: rows are the
/// first `probe_depth` support points of the base-0 parts, columns the
/// series. Solved exactly over the coefficient field.
fn probe_kernel(bs: &[Series], probe_depth: usize) -> Option<Vec<Coeff>> {
    let union = Series::from_families(
        bs.iter()
            .flat_map(|b| base0_families(b).into_iter().cloned())
            .map(|mut f| {
                f.scalar = Coeff::one();
                f.factors.clear();
                f
            })
            .collect(),
    );
    let (points, _) = union.enumerate(probe_depth);
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for (e, _) in &points {
        rows.push(bs.iter().map(|b| b.coefficient_at(e)).collect());
    }
    kernel_vector(rows, bs.len())
}

/// Gaussian elimination over the coefficient field; returns a nonzero kernel
/// vector if the columns are dependent on the probed rows.
fn kernel_vector(mut rows: Vec<Vec<Coeff>>, cols: usize) -> Option<Vec<Coeff>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut used = 0usize;
    for c in 0..cols {
        let Some(r) = (used..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(used, r);
        let inv = rows[used][c].clone();
        for x in rows[used].iter_mut() {
            *x = x.div(&inv);
        }
        let pivot_row = rows[used].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != used && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivot_of_col[c] = Some(used);
        used += 1;
    }
    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut k = vec![Coeff::zero(); cols];
    k[free] = Coeff::one();
    for c in 0..cols {
        if let Some(r) = pivot_of_col[c] {
            k[c] = rows[r][free].neg();
        }
    }
    Some(k)
}

/// Hereditary rv_J-independence of a tuple, certified through the named
/// sufficient rules or refuted through budget-bounded germ sampling.
pub fn hereditary_independent(
    bs: &[Series],
    depth_budget: usize,
) -> Result<IndependenceJudgment, IndependenceError> {
    let d = common_deg_j(bs)?;
    if d.is_zero() {
        // The theorems quantify over deg_J >= 1 tuples; rv classes of
        // degree-0 series are always K-dependent, so nothing is certified.
        return Ok(IndependenceJudgment::unknown("degree-0 tuple"));
    }
    // Rule (i): mutual randomness.
    let mr = mutually_random(bs);
    if mr.is_true() {
        return Ok(IndependenceJudgment::holds("mutually_random"));
    }
    // Rule (ii): isolated support points pairwise disjoint and jointly tagged
    // (each point carries its own square-root tag, so the isolated points are
    // Q-independent over anything spanned by the accumulation points).
    if certify_isolated_over_big(bs) {
        return Ok(IndependenceJudgment::holds("cor_isolated_over_big"));
    }
    // Rule (iii): accumulation points pairwise disjoint and jointly tagged.
    if certify_big_over_isolated(bs) {
        return Ok(IndependenceJudgment::holds("cor_big_over_isolated"));
    }
    // Axiom (1) falsification: rv_J-dependence of the tuple itself.
    if !d.is_zero() {
        if let IndependenceJudgment::CertifiedFalse { witness } =
            rv_j_linearly_independent(bs, 2 * bs.len().max(4))?
        {
            return Ok(IndependenceJudgment::fails(format!(
                "witness(rv_J dependence: {witness})"
            )));
        }
    }
    // Axiom (2) falsification: recurse on sampled germ tuples.
    if depth_budget > 0 {
        let mut germs: Vec<Series> = Vec::new();
        for b in bs {
            let Ok(set) = big_points(b, None) else {
                continue;
            };
            let Ok(points) = set.first(2) else { continue };
            for gamma in points {
                let g = b.translated_truncate(&gamma);
                // Germs are only sampled to hunt for counterexamples; very
                // wide presentations make the valuation scans quadratic, so
                // they are skipped rather than searched.
                if g.families().len() > 8 {
                    continue;
                }
                if !g.is_zero() && deg_j(&g).is_ok_and(|d| d.is_some()) {
                    germs.push(g);
                }
            }
        }
        // Group sampled germs by deg_J and recurse on each group.
        let mut by_deg: BTreeMap<Ordinal, Vec<Series>> = BTreeMap::new();
        for g in germs {
            if let Ok(Some(dg)) = deg_j(&g) {
                if !dg.is_zero() {
                    by_deg.entry(dg).or_default().push(g);
                }
            }
        }
        for (_, group) in by_deg {
            if group.len() < 2 {
                continue;
            }
            if let Ok(IndependenceJudgment::CertifiedFalse { witness }) =
                hereditary_independent(&group, depth_budget - 1)
            {
                return Ok(IndependenceJudgment::fails(format!(
                    "witness(germ tuple: {witness})"
                )));
            }
        }
    }
    Ok(IndependenceJudgment::unknown(match mr {
        IndependenceJudgment::Unknown { cause } => cause,
        _ => "no certification rule fires; witness search exhausted its budget".into(),
    }))
}

/// Rule (ii) premises: the isolated supports are pairwise disjoint across
/// members, and the union of isolated points is Q-linearly independent over
/// the rational span of the union of big points (each isolated point carries
/// a private square-root tag absent from every big-point stream).
fn certify_isolated_over_big(bs: &[Series]) -> bool {
    if !pairwise_disjoint_across(bs, |b| b.families().to_vec()) {
        return false;
    }
    let isolated: Vec<Family> = bs.iter().flat_map(|b| b.families().to_vec()).collect();
    let Some(big) = joint_big_families(bs) else {
        return false;
    };
    independent_over_certified(&isolated, &big)
}

/// The families presenting the union of the members' certified big-point
/// sets; `None` when any member's set cannot be certified symbolically.
fn joint_big_families(bs: &[Series]) -> Option<Vec<Family>> {
    let mut out = Vec::new();
    for b in bs {
        let set = big_points(b, None).ok()?;
        let sym = set.symbolic().ok()?;
        out.extend(sym.families().to_vec());
    }
    Some(out)
}

/// Rule (iii) premises: the certified big-point sets are nonempty and
/// pairwise disjoint across members, and their union is Q-linearly
/// independent over the rational span of the union of isolated points (each
/// big point carries a private square-root tag absent from every isolated
/// support point).
fn certify_big_over_isolated(bs: &[Series]) -> bool {
    let mut parts: Vec<Vec<Family>> = Vec::new();
    for b in bs {
        let Ok(set) = big_points(b, None) else {
            return false;
        };
        let Ok(sym) = set.symbolic() else {
            return false;
        };
        if sym.is_zero() {
            return false;
        }
        parts.push(sym.families().to_vec());
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            for f in &parts[i] {
                for g in &parts[j] {
                    if !pair_disjoint_certified(f, g) {
                        return false;
                    }
                }
            }
        }
    }
    let big: Vec<Family> = parts.concat();
    let isolated: Vec<Family> = bs.iter().flat_map(|b| b.families().to_vec()).collect();
    independent_over_certified(&big, &isolated)
}

fn pairwise_disjoint_across(bs: &[Series], parts: impl Fn(&Series) -> Vec<Family>) -> bool {
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            for f in parts(&bs[i]) {
                for g in parts(&bs[j]) {
                    if !pair_disjoint_certified(&f, &g) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;

    fn iharm(seed: u32) -> Ladder {
        Ladder::IndepHarmonic {
            scale: Exponent::from_int(1),
            seed,
        }
    }

    fn harm1() -> Ladder {
        Ladder::Harmonic {
            scale: Exponent::from_int(1),
        }
    }

    fn plain(base: i64, ladders: Vec<Ladder>) -> Series {
        Series::from_families(vec![Family::new(
            Exponent::from_int(base),
            ladders,
            Coeff::one(),
            vec![],
        )])
    }

    fn fresh(base: i64, ladders: Vec<Ladder>, tag: u64) -> Series {
        let dims = ladders.len();
        Series::from_families(vec![Family::new(
            Exponent::from_int(base),
            ladders,
            Coeff::one(),
            vec![CoeffFactor::Fresh {
                tag,
                comps: (0..dims).map(FreshComp::Dim).collect(),
            }],
        )])
    }

    #[test]
    fn single_independent_ladder_is_exponent_random() {
        let b = plain(0, vec![iharm(0)]);
        assert!(is_random(&b, RandomnessCriterion::ByExponents).is_true());
        // With an extra monomial at an untagged irrational exponent, still
        // certified. (sqrt(6) is no ladder's tag: 6 is not prime.)
        let c = b.add(&Series::monomial(Coeff::one(), Exponent::sqrt(6).neg()));
        assert!(is_random(&c, RandomnessCriterion::ByExponents).is_true());
        // sqrt(2) is the seed-0 ladder's own first tag: not certified.
        let d = b.add(&Series::monomial(Coeff::one(), Exponent::sqrt(2).neg()));
        assert!(matches!(
            is_random(&d, RandomnessCriterion::ByExponents),
            IndependenceJudgment::Unknown { .. }
        ));
    }

    #[test]
    fn harmonic_family_fails_by_exponents() {
        let b = plain(0, vec![harm1()]);
        assert!(is_random(&b, RandomnessCriterion::ByExponents).is_false());
    }

    #[test]
    fn rational_monomial_pair_refuted() {
        let b = plain(0, vec![iharm(0)])
            .add(&Series::monomial(Coeff::one(), Exponent::from_int(-1)))
            .add(&Series::monomial(Coeff::one(), Exponent::from_int(-2)));
        assert!(is_random(&b, RandomnessCriterion::ByExponents).is_false());
    }

    #[test]
    fn sum_form_two_dim_family_refuted() {
        let b = plain(0, vec![iharm(0), iharm(1)]);
        let j = is_random(&b, RandomnessCriterion::ByExponents);
        assert!(j.is_false(), "got {j:?}");
    }

    #[test]
    fn fresh_coefficients_certify() {
        let b = fresh(0, vec![iharm(0)], 7);
        assert!(is_random(&b, RandomnessCriterion::ByCoefficients).is_true());
        // Even with rational exponents.
        let c = fresh(0, vec![harm1()], 3);
        assert!(is_random(&c, RandomnessCriterion::ByCoefficients).is_true());
        // Constant coefficients are not certified.
        let d = plain(0, vec![harm1()]);
        assert!(!is_random(&d, RandomnessCriterion::ByCoefficients).is_true());
    }

    #[test]
    fn truncation_keeps_fresh_certificate() {
        // Splitting a fresh family into pinned monomials plus a tail keeps
        // all indeterminates distinct.
        let b = fresh(0, vec![iharm(0)], 5);
        let t = b.truncate(&Exponent::from_frac(-1, 3));
        assert!(is_random(&t, RandomnessCriterion::ByCoefficients).is_true());
    }

    #[test]
    fn mutual_randomness_via_disjoint_seeds() {
        let b = plain(0, vec![iharm(0)]);
        let c = plain(0, vec![iharm(1)]);
        assert!(mutually_random(&[b.clone(), c.clone()]).is_true());
        assert!(mutually_random(&[b.clone(), b.clone()]).is_false());
        // h2's base -1 is itself a support point of h: closures intersect.
        let h = plain(0, vec![harm1()]);
        let h2 = plain(-1, vec![harm1()]);
        assert!(mutually_random(&[h.clone(), h2]).is_false());
        // Same harmonic ladder shifted to an irrational base: the supports
        // are disjoint but carry no tags, so no rule fires.
        let h3 = Series::from_families(vec![Family::new(
            Exponent::sqrt(2).neg(),
            vec![harm1()],
            Coeff::one(),
            vec![],
        )]);
        assert!(matches!(
            mutually_random(&[h, h3]),
            IndependenceJudgment::Unknown { .. }
        ));
    }

    #[test]
    fn lim_points_of_simple_families() {
        let b = plain(0, vec![harm1()]);
        let lim = lim_points(&b);
        assert!(lim.contains(&Exponent::zero()).unwrap());
        assert!(!lim.contains(&Exponent::from_int(-1)).unwrap());
        assert_eq!(lim.first(3).unwrap(), vec![Exponent::zero()]);
        let m = Series::monomial(Coeff::one(), Exponent::from_int(-1)).add(&Series::one());
        let lim = lim_points(&m);
        assert!(!lim.contains(&Exponent::zero()).unwrap());
        assert_eq!(lim.first(3).unwrap(), Vec::<Exponent>::new());
    }

    #[test]
    fn lim_points_of_two_dim_family() {
        let b = plain(0, vec![iharm(0), iharm(1)]);
        let lim = lim_points(&b);
        // Partial limits of either ladder are accumulation points.
        let p = iharm(0).value(1);
        assert!(lim.contains(&p).unwrap());
        assert!(lim.contains(&Exponent::zero()).unwrap());
        // A two-rung sum is isolated.
        let q = iharm(0).value(0).add(&iharm(1).value(0));
        assert!(!lim.contains(&q).unwrap());
    }

    #[test]
    fn rv_j_independence_of_disjoint_pair() {
        let b = plain(0, vec![iharm(0)]);
        let c = plain(0, vec![iharm(1)]);
        let j = rv_j_linearly_independent(&[b, c], 8).unwrap();
        assert!(j.is_true(), "got {j:?}");
    }

    #[test]
    fn rv_j_dependence_of_scaled_copy() {
        let b = plain(0, vec![iharm(0)]);
        let b2 = b.scale(&Coeff::from_int(2));
        let j = rv_j_linearly_independent(&[b.clone(), b2], 8).unwrap();
        assert!(j.is_false(), "got {j:?}");
    }

    #[test]
    fn rv_j_precondition_checks() {
        let b = plain(0, vec![iharm(0)]);
        let deep = plain(0, vec![iharm(1), iharm(2)]);
        assert!(matches!(
            rv_j_linearly_independent(&[b.clone(), deep], 8),
            Err(IndependenceError::PreconditionViolated(_))
        ));
        let constant = Series::one();
        assert!(matches!(
            rv_j_linearly_independent(&[constant.clone(), constant], 8),
            Err(IndependenceError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn hereditary_independence_of_mutually_random_pair() {
        let b = plain(0, vec![iharm(0)]);
        let c = plain(0, vec![iharm(1)]);
        let j = hereditary_independent(&[b, c], 3).unwrap();
        assert_eq!(
            j,
            IndependenceJudgment::CertifiedTrue {
                rule: "mutually_random".into()
            }
        );
    }

    #[test]
    fn hereditary_independence_refutes_duplicates() {
        let b = plain(0, vec![iharm(0)]);
        let j = hereditary_independent(&[b.clone(), b], 1).unwrap();
        assert!(j.is_false(), "got {j:?}");
    }

    #[test]
    fn hereditary_independence_refutes_rv_dependent_pair() {
        // b and b + t^{-2} differ by a member of J: rv_J classes coincide.
        let b = plain(0, vec![harm1()]);
        let c = b.add(&Series::monomial(Coeff::one(), Exponent::from_int(-2)));
        let j = hereditary_independent(&[b, c], 1).unwrap();
        assert!(j.is_false(), "got {j:?}");
    }

    #[test]
    fn hereditary_independence_unknown_for_untagged_harmonics() {
        // Disjoint rational vs sqrt(2)-scaled harmonic supports: genuinely
        // independent, but carrying no tags — no rule fires either way.
        let b = plain(0, vec![harm1()]);
        let c = Series::from_families(vec![Family::new(
            Exponent::zero(),
            vec![Ladder::Harmonic {
                scale: Exponent::sqrt(2),
            }],
            Coeff::one(),
            vec![],
        )]);
        let j = hereditary_independent(&[b, c], 1).unwrap();
        assert!(matches!(j, IndependenceJudgment::Unknown { .. }), "got {j:?}");
    }

    #[test]
    fn kernel_vector_on_plain_matrix() {
        // Columns (1, 2) and (2, 4) are dependent: kernel (-2, 1).
        let rows = vec![
            vec![Coeff::from_int(1), Coeff::from_int(2)],
            vec![Coeff::from_int(2), Coeff::from_int(4)],
        ];
        let k = kernel_vector(rows, 2).unwrap();
        assert_eq!(k.len(), 2);
        // Verify: k1*col1 + k2*col2 = 0 on both rows.
        let rows = [
            [Coeff::from_int(1), Coeff::from_int(2)],
            [Coeff::from_int(2), Coeff::from_int(4)],
        ];
        for row in &rows {
            let s = row[0].mul(&k[0]).add(&row[1].mul(&k[1]));
            assert!(s.is_zero(), "residue {s}");
        }
        // Independent columns: no kernel.
        let rows = vec![
            vec![Coeff::from_int(1), Coeff::from_int(0)],
            vec![Coeff::from_int(0), Coeff::from_int(1)],
        ];
        assert!(kernel_vector(rows, 2).is_none());
    }
}
