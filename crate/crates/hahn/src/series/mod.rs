//! Finitely presented generalized power series.
//!
//! A [`Series`] is a finite union of [`Family`] blocks. Each family
//! contributes the support points `base + sum_i ladder_i(n_i)` over free
//! index tuples `(n_i)` with `n_i >= start_i`, where every [`Ladder`] is a
//! strictly increasing negative sequence converging to 0. Coefficients are
//! `scalar * prod(factors)` in `Q(X1, X2, ...)`: periodic cycles over one
//! index and fresh indeterminates minted per tuple.
//!
//! Families are kept in a canonical form with every dimension free: fixing an
//! index folds its exponent contribution into `base` and its coefficient
//! contribution into `scalar`. Construction normalizes a series by dropping
//! zero-coefficient families and merging families that agree up to scalar, so
//! structural cancellation (`b - b = 0`) is exact.

mod enumerate;
mod solve;
mod structure;

pub use solve::{
    least_point_geq, min_sum, min_sum_above, solve_family, solve_sum, truncate_above_family,
    Coord,
};
pub use structure::{
    independent_over_certified, injective_certified, pair_disjoint_certified, Cluster, SeriesError,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coeff::{Coeff, Var};
use crate::exponent::Exponent;
use crate::primes::{ladder_prime_index, nth_prime};

/// A strictly increasing sequence of negative exponents converging to 0,
/// scaled by a positive `scale`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Ladder {
    /// `value(n) = -scale / (n + 1)`.
    Harmonic { scale: Exponent },
    /// `value(n) = -scale * ratio^n` with `0 < ratio < 1`.
    Geometric { scale: Exponent, ratio: BigRational },
    /// `value(n) = -scale * (1/(n+1) + e_n)` where
    /// `e_n = sqrt(p)/(4*ceil(sqrt(p))*(n+1)*(n+2))` for the fresh prime `p`
    /// reserved for `(seed, n)`. The perturbations keep consecutive values
    /// ordered and make the value set Q-linearly independent by construction.
    IndepHarmonic { scale: Exponent, seed: u32 },
}

impl Ladder {
    /// The n-th rung, an exact exponent in `(-scale * c, 0)`.
    pub fn value(&self, n: u64) -> Exponent {
        let n1 = BigRational::from_integer(BigInt::from(n) + BigInt::one());
        match self {
            Ladder::Harmonic { scale } => scale.scale(&-n1.recip()),
            Ladder::Geometric { scale, ratio } => {
                let mut r = BigRational::one();
                for _ in 0..n {
                    r *= ratio;
                }
                scale.scale(&-r)
            }
            Ladder::IndepHarmonic { scale, seed } => {
                let p = nth_prime(ladder_prime_index(*seed, n));
                let ceil_sqrt = {
                    let s = num_integer::Roots::sqrt(&p);
                    if s * s == p {
                        s
                    } else {
                        s + 1
                    }
                };
                let n2 = &n1 + BigRational::one();
                // q = 1 / (4 * ceil(sqrt(p)) * (n+1) * (n+2)).
                let q = (BigRational::from_integer(BigInt::from(4 * ceil_sqrt)) * &n1 * n2)
                    .recip();
                let e_n = Exponent::sqrt_scaled(q, p);
                let harm = Exponent::from_rational(n1.recip());
                scale.mul(&harm.add(&e_n)).neg()
            }
        }
    }

    pub fn scale(&self) -> &Exponent {
        match self {
            Ladder::Harmonic { scale }
            | Ladder::Geometric { scale, .. }
            | Ladder::IndepHarmonic { scale, .. } => scale,
        }
    }
}

/// One free dimension of a family: a ladder enumerated from `start`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dim {
    pub ladder: Ladder,
    pub start: u64,
}

/// A component of a fresh-variable index: either a live dimension or an index
/// already pinned by truncation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FreshComp {
    Dim(usize),
    Const(u64),
}

/// A multiplicative coefficient factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoeffFactor {
    /// `values[n_dim mod values.len()]`; covers alternating signs.
    Cycle { dim: usize, values: Vec<Coeff> },
    /// A fresh indeterminate per value of the component tuple.
    Fresh { tag: u64, comps: Vec<FreshComp> },
}

/// One block of a series; see the module documentation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Family {
    pub base: Exponent,
    pub dims: Vec<Dim>,
    pub scalar: Coeff,
    pub factors: Vec<CoeffFactor>,
}

impl Family {
    /// A single point `coeff * t^exponent`.
    pub fn monomial(coeff: Coeff, exponent: Exponent) -> Family {
        Family {
            base: exponent,
            dims: Vec::new(),
            scalar: coeff,
            factors: Vec::new(),
        }
    }

    /// A family over the given ladders starting at index 0 in each dimension.
    pub fn new(base: Exponent, ladders: Vec<Ladder>, scalar: Coeff, factors: Vec<CoeffFactor>) -> Family {
        Family {
            base,
            dims: ladders.into_iter().map(|ladder| Dim { ladder, start: 0 }).collect(),
            scalar,
            factors,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.dims.is_empty()
    }

    /// The supremum of the family's support: its accumulation point when free
    /// dimensions exist, the point itself for a monomial.
    pub fn acc(&self) -> &Exponent {
        &self.base
    }

    /// The attained minimum of the support.
    pub fn min_value(&self) -> Exponent {
        let mut m = self.base.clone();
        for d in &self.dims {
            m = m.add(&d.ladder.value(d.start));
        }
        m
    }

    /// The support point at index tuple `idx` (length = `dims.len()`, entries
    /// `>= start`).
    pub fn exponent_at(&self, idx: &[u64]) -> Exponent {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut e = self.base.clone();
        for (d, n) in self.dims.iter().zip(idx) {
            debug_assert!(*n >= d.start);
            e = e.add(&d.ladder.value(*n));
        }
        e
    }

    /// The coefficient at index tuple `idx`.
    pub fn coefficient_at(&self, idx: &[u64]) -> Coeff {
        let mut c = self.scalar.clone();
        for f in &self.factors {
            match f {
                CoeffFactor::Cycle { dim, values } => {
                    c = c.mul(&values[(idx[*dim] % values.len() as u64) as usize]);
                }
                CoeffFactor::Fresh { tag, comps } => {
                    let indices = comps
                        .iter()
                        .map(|comp| match comp {
                            FreshComp::Dim(i) => idx[*i],
                            FreshComp::Const(n) => *n,
                        })
                        .collect();
                    c = c.mul(&Coeff::var(Var::Fresh { tag: *tag, indices }));
                }
            }
        }
        c
    }

    /// Pins dimension `i` to index `n`, folding its exponent contribution into
    /// the base and its coefficient contribution into the scalar; keeps the
    /// canonical all-free form.
    pub fn fix_dim(&self, i: usize, n: u64) -> Family {
        debug_assert!(n >= self.dims[i].start);
        let mut out = self.clone();
        let dim = out.dims.remove(i);
        out.base = out.base.add(&dim.ladder.value(n));
        let mut factors = Vec::with_capacity(out.factors.len());
        for f in out.factors {
            match f {
                CoeffFactor::Cycle { dim, values } => {
                    if dim == i {
                        out.scalar = out
                            .scalar
                            .mul(&values[(n % values.len() as u64) as usize]);
                    } else {
                        let dim = if dim > i { dim - 1 } else { dim };
                        factors.push(CoeffFactor::Cycle { dim, values });
                    }
                }
                CoeffFactor::Fresh { tag, comps } => {
                    let comps: Vec<FreshComp> = comps
                        .into_iter()
                        .map(|c| match c {
                            FreshComp::Dim(d) if d == i => FreshComp::Const(n),
                            FreshComp::Dim(d) if d > i => FreshComp::Dim(d - 1),
                            other => other,
                        })
                        .collect();
                    if comps.iter().all(|c| matches!(c, FreshComp::Const(_))) {
                        let indices = comps
                            .iter()
                            .map(|c| match c {
                                FreshComp::Const(n) => *n,
                                FreshComp::Dim(_) => unreachable!(),
                            })
                            .collect();
                        out.scalar = out.scalar.mul(&Coeff::var(Var::Fresh { tag, indices }));
                    } else {
                        factors.push(CoeffFactor::Fresh { tag, comps });
                    }
                }
            }
        }
        out.factors = factors;
        out
    }

    /// The product family: supports add pointwise, coefficients multiply.
    pub fn product(&self, rhs: &Family) -> Family {
        let off = self.dims.len();
        let mut dims = self.dims.clone();
        dims.extend(rhs.dims.iter().cloned());
        let mut factors = self.factors.clone();
        for f in &rhs.factors {
            factors.push(match f {
                CoeffFactor::Cycle { dim, values } => CoeffFactor::Cycle {
                    dim: dim + off,
                    values: values.clone(),
                },
                CoeffFactor::Fresh { tag, comps } => CoeffFactor::Fresh {
                    tag: *tag,
                    comps: comps
                        .iter()
                        .map(|c| match c {
                            FreshComp::Dim(d) => FreshComp::Dim(d + off),
                            FreshComp::Const(n) => FreshComp::Const(*n),
                        })
                        .collect(),
                },
            });
        }
        Family {
            base: self.base.add(&rhs.base),
            dims,
            scalar: self.scalar.mul(&rhs.scalar),
            factors,
        }
    }

    /// Number of free dimensions.
    pub fn dim_count(&self) -> usize {
        self.dims.len()
    }

    fn merge_key(&self) -> (Exponent, Vec<Dim>, Vec<CoeffFactor>) {
        (self.base.clone(), self.dims.clone(), self.factors.clone())
    }
}

/// Raises the starts of families that share base and ladders to a common
/// value, splitting the skipped indices off as exact lower-dimensional
/// families. Fixing an index is an identity on the presented series, so this
/// is a pure change of presentation; it makes structural cancellation robust
/// against tails that begin at different offsets (as produced by different
/// truncation routes).
fn align_starts(work: &mut Vec<Family>) {
    loop {
        let mut groups: std::collections::BTreeMap<(Exponent, Vec<Ladder>), Vec<usize>> =
            std::collections::BTreeMap::new();
        for (i, f) in work.iter().enumerate() {
            let ladders: Vec<Ladder> = f.dims.iter().map(|d| d.ladder.clone()).collect();
            groups.entry((f.base.clone(), ladders)).or_default().push(i);
        }
        let mut split_at: Option<(usize, usize, u64)> = None;
        'outer: for idxs in groups.values() {
            if idxs.len() < 2 {
                continue;
            }
            for dim in 0..work[idxs[0]].dims.len() {
                let target = idxs.iter().map(|&i| work[i].dims[dim].start).max().unwrap();
                for &i in idxs {
                    if work[i].dims[dim].start < target {
                        split_at = Some((i, dim, target));
                        break 'outer;
                    }
                }
            }
        }
        let Some((i, dim, target)) = split_at else { return };
        let f = work.swap_remove(i);
        for n in f.dims[dim].start..target {
            work.push(f.fix_dim(dim, n));
        }
        let mut tail = f;
        tail.dims[dim].start = target;
        work.push(tail);
    }
}

/// A generalized power series with well-ordered support in the nonpositive
/// reals, presented as a finite union of families. Always normalized.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Series {
    families: Vec<Family>,
}

impl Series {
    pub fn zero() -> Series {
        Series::default()
    }

    pub fn one() -> Series {
        Series::monomial(Coeff::one(), Exponent::zero())
    }

    pub fn monomial(coeff: Coeff, exponent: Exponent) -> Series {
        assert!(
            !exponent.sign().is_gt(),
            "support must lie in the nonpositive reals"
        );
        Series::from_families(vec![Family::monomial(coeff, exponent)])
    }

    /// Normalizing constructor: drops zero scalars and merges families that
    /// agree up to scalar (so `b - b` collapses to the empty series exactly).
    /// Families sharing base and ladders but with different starts are first
    /// aligned (the gap split off as exact monomials), so that tails produced
    /// by different truncation routes also cancel structurally.
    pub fn from_families(families: Vec<Family>) -> Series {
        let mut work: Vec<Family> = families.into_iter().filter(|f| !f.scalar.is_zero()).collect();
        align_starts(&mut work);
        let mut merged: std::collections::BTreeMap<(Exponent, Vec<Dim>, Vec<CoeffFactor>), Coeff> =
            std::collections::BTreeMap::new();
        for f in work {
            debug_assert!(
                !f.min_value().sign().is_gt() && !f.base.sign().is_gt(),
                "support must lie in the nonpositive reals"
            );
            let key = f.merge_key();
            match merged.get_mut(&key) {
                Some(s) => *s = s.add(&f.scalar),
                None => {
                    merged.insert(key, f.scalar);
                }
            }
        }
        let mut families: Vec<Family> = merged
            .into_iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|((base, dims, factors), scalar)| Family {
                base,
                dims,
                scalar,
                factors,
            })
            .collect();
        families.sort_by(|a, b| a.min_value().cmp(&b.min_value()).then_with(|| a.cmp(b)));
        Series { families }
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    /// Structurally zero (empty after normalization).
    pub fn is_zero(&self) -> bool {
        self.families.is_empty()
    }

    pub fn add(&self, rhs: &Series) -> Series {
        let mut fams = self.families.clone();
        fams.extend(rhs.families.iter().cloned());
        Series::from_families(fams)
    }

    pub fn neg(&self) -> Series {
        self.scale(&Coeff::from_int(-1))
    }

    pub fn sub(&self, rhs: &Series) -> Series {
        self.add(&rhs.neg())
    }

    /// Scalar multiplication by a coefficient.
    pub fn scale(&self, k: &Coeff) -> Series {
        Series::from_families(
            self.families
                .iter()
                .map(|f| {
                    let mut f = f.clone();
                    f.scalar = f.scalar.mul(k);
                    f
                })
                .collect(),
        )
    }

    pub fn scale_rational(&self, q: &BigRational) -> Series {
        self.scale(&Coeff::from_rational(q))
    }

    /// Ring product: one product family per pair of families.
    pub fn mul(&self, rhs: &Series) -> Series {
        let mut fams = Vec::with_capacity(self.families.len() * rhs.families.len());
        for f in &self.families {
            for g in &rhs.families {
                fams.push(f.product(g));
            }
        }
        Series::from_families(fams)
    }

    /// `t^delta * b`: shifts every support point by `delta` (which must keep
    /// the support nonpositive; callers shift truncations).
    pub fn shift(&self, delta: &Exponent) -> Series {
        Series::from_families(
            self.families
                .iter()
                .map(|f| {
                    let mut f = f.clone();
                    f.base = f.base.add(delta);
                    f
                })
                .collect(),
        )
    }

    /// The restriction `b_{|gamma}`: the part of `b` supported on
    /// `(-inf, gamma]`, as an exact finite union of families.
    pub fn truncate(&self, gamma: &Exponent) -> Series {
        let mut fams = Vec::new();
        for f in &self.families {
            fams.extend(solve::truncate_family(f, gamma));
        }
        Series::from_families(fams)
    }

    /// The part of `b` supported strictly above `gamma`, so that
    /// `b = b.truncate(gamma) + b.truncate_above(gamma)` pointwise.
    pub fn truncate_above(&self, gamma: &Exponent) -> Series {
        let mut fams = Vec::new();
        for f in &self.families {
            fams.extend(solve::truncate_above_family(f, gamma));
        }
        Series::from_families(fams)
    }

    /// The germ `b^{|gamma} = t^{-gamma} * b_{|gamma}`.
    pub fn translated_truncate(&self, gamma: &Exponent) -> Series {
        self.truncate(gamma).shift(&gamma.neg())
    }

    /// Exact coefficient of `t^e` (aggregating every index tuple of every
    /// family that hits `e`; always terminates).
    pub fn coefficient_at(&self, e: &Exponent) -> Coeff {
        let mut c = Coeff::zero();
        for f in &self.families {
            for idx in solve::solve_family(f, e) {
                c = c.add(&f.coefficient_at(&idx));
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn iharm(seed: u32) -> Ladder {
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

    #[test]
    fn ladder_values_increase_to_zero() {
        for ladder in [
            harm1(),
            iharm(0),
            iharm(3),
            Ladder::Geometric {
                scale: Exponent::from_int(2),
                ratio: BigRational::new(BigInt::from(1), BigInt::from(3)),
            },
        ] {
            let mut prev = ladder.value(0);
            assert!(prev.sign().is_lt());
            for n in 1..24 {
                let v = ladder.value(n);
                assert!(v.sign().is_lt(), "{ladder:?} value {n} should be negative");
                assert!(v > prev, "{ladder:?} must be strictly increasing at {n}");
                prev = v;
            }
        }
    }

    #[test]
    fn harmonic_values_are_exact() {
        assert_eq!(harm1().value(0), Exponent::from_int(-1));
        assert_eq!(harm1().value(1), Exponent::from_frac(-1, 2));
    }

    #[test]
    fn structural_cancellation() {
        let b = Series::from_families(vec![Family::new(
            Exponent::zero(),
            vec![iharm(0)],
            Coeff::one(),
            vec![],
        )]);
        assert!(b.sub(&b).is_zero());
        let two_b = b.add(&b);
        assert_eq!(two_b.families().len(), 1);
        assert_eq!(two_b.families()[0].scalar, Coeff::from_int(2));
    }

    #[test]
    fn fixing_dims_folds_canonically() {
        let f = Family::new(
            Exponent::zero(),
            vec![harm1(), iharm(0)],
            Coeff::one(),
            vec![CoeffFactor::Fresh {
                tag: 7,
                comps: vec![FreshComp::Dim(0), FreshComp::Dim(1)],
            }],
        );
        let fixed = f.fix_dim(0, 3);
        assert_eq!(fixed.dims.len(), 1);
        assert_eq!(fixed.base, Exponent::from_frac(-1, 4));
        // The fresh factor still refers to the surviving dimension.
        let c = fixed.coefficient_at(&[5]);
        assert_eq!(
            c,
            Coeff::var(Var::Fresh {
                tag: 7,
                indices: vec![3, 5]
            })
        );
        // Fixing both dims folds the variable into the scalar.
        let point = fixed.fix_dim(0, 5);
        assert!(point.is_monomial());
        assert_eq!(point.factors.len(), 0);
        assert_eq!(
            point.scalar,
            Coeff::var(Var::Fresh {
                tag: 7,
                indices: vec![3, 5]
            })
        );
    }

    #[test]
    fn product_routes_agree_structurally() {
        // (fix then multiply) == (multiply then fix): the canonical form must
        // make the two routes literally equal so subtraction cancels.
        let b = Family::new(Exponent::zero(), vec![iharm(0)], Coeff::one(), vec![]);
        let c = Family::new(Exponent::zero(), vec![iharm(1)], Coeff::from_int(3), vec![]);
        let route1 = b.fix_dim(0, 2).product(&c);
        let route2 = b.product(&c).fix_dim(0, 2);
        assert_eq!(route1, route2);
    }
}
