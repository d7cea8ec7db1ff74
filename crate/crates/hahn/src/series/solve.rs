//! Exact region arithmetic over ladder dimensions.
//!
//! Every routine terminates because each ladder is a strictly increasing
//! negative sequence converging to 0, so the set of tuple-sums is
//! well-ordered: every nonempty subset has a least element, and only finitely
//! many rungs of any one ladder lie below a negative threshold. The workhorse
//! is [`min_sum_above`], the least tuple-sum strictly greater than a negative
//! bound, which bounds every scan.

use crate::exponent::Exponent;

use super::{Dim, Family};

/// One coordinate of a truncation box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coord {
    Fixed(u64),
    Free { start: u64 },
}

fn val(d: &Dim, n: u64) -> Exponent {
    d.ladder.value(n)
}

/// The minimum tuple-sum (all indices at their starts).
pub fn min_sum(dims: &[Dim]) -> Exponent {
    let mut m = Exponent::zero();
    for d in dims {
        m = m.add(&val(d, d.start));
    }
    m
}

/// Least sum `sum_i ladder_i(n_i)` over tuples with `n_i >= start_i` that is
/// strictly greater than `g`, for `g < 0`. Exists because sums above `g` are
/// nonempty (coordinates converge to 0) and well-ordered.
pub fn min_sum_above(dims: &[Dim], g: &Exponent) -> Exponent {
    debug_assert!(g.sign().is_lt());
    if dims.is_empty() {
        return Exponent::zero();
    }
    let (d1, rest) = dims.split_first().unwrap();
    let mu = min_sum_above(rest, g);
    let mut best: Option<Exponent> = None;
    let mut n = d1.start;
    loop {
        let v1 = val(d1, n);
        if v1 > *g {
            let thresh = g.sub(&v1); // < 0 since v1 > g
            let cand = v1.add(&min_sum_above(rest, &thresh));
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
            // Once the threshold drops below the least rest-sum above g, the
            // candidate is v1 + mu and later columns only give larger values.
            if thresh < mu {
                break;
            }
        }
        n += 1;
    }
    best.unwrap()
}

/// All index tuples whose ladder sum equals `target` exactly. Finite and
/// complete.
pub fn solve_sum(dims: &[Dim], target: &Exponent) -> Vec<Vec<u64>> {
    if dims.is_empty() {
        return if target.sign() == std::cmp::Ordering::Equal {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    if !target.sign().is_lt() {
        // Nonempty tuples sum strictly below 0.
        return Vec::new();
    }
    let (d1, rest) = dims.split_first().unwrap();
    // Least rest-sum strictly above the target bounds the scan: residuals
    // decrease toward `target`, and rest-sums matching a residual are > target,
    // hence >= mu.
    let mu = min_sum_above(rest, target);
    let mut out = Vec::new();
    let mut n = d1.start;
    loop {
        let v1 = val(d1, n);
        let residual = target.sub(&v1);
        if residual < mu && residual.sign().is_lt() {
            break;
        }
        if !residual.sign().is_gt() {
            for mut sub in solve_sum(rest, &residual) {
                let mut t = vec![n];
                t.append(&mut sub);
                out.push(t);
            }
        }
        n += 1;
    }
    out
}

/// Disjoint boxes covering `{ tuple : sum <= g }` for `g < 0` (the index set
/// kept by a truncation). Three contiguous phases along the first dimension:
/// columns where every rest-tuple stays below (kept whole), columns where the
/// kept rest-set still depends on the column (fixed and recursed), and the
/// tail where the kept rest-set has stabilized to `{rest-sum <= g}` (one box
/// with the first dimension free). Boxes for `g < 0` have at most
/// `dims.len() - 1` free coordinates.
pub fn keep_boxes(dims: &[Dim], g: &Exponent) -> Vec<Vec<Coord>> {
    if !g.sign().is_lt() {
        return vec![dims.iter().map(|d| Coord::Free { start: d.start }).collect()];
    }
    if dims.is_empty() {
        return Vec::new();
    }
    let (d1, rest) = dims.split_first().unwrap();
    let mu = min_sum_above(rest, g);
    let mut boxes = Vec::new();
    let mut n = d1.start;
    loop {
        let v1 = val(d1, n);
        let slack = g.sub(&v1);
        if !slack.sign().is_lt() {
            // v1 <= g: every rest-tuple is kept in this column.
            let mut b = vec![Coord::Fixed(n)];
            b.extend(rest.iter().map(|d| Coord::Free { start: d.start }));
            boxes.push(b);
        } else if slack < mu {
            // No rest-sum lies in (g, slack] anymore: the kept rest-set equals
            // {rest-sum <= g} for this and every later column.
            for sub in keep_boxes(rest, g) {
                let mut b = vec![Coord::Free { start: n }];
                b.extend(sub);
                boxes.push(b);
            }
            break;
        } else {
            for sub in keep_boxes(rest, &slack) {
                let mut b = vec![Coord::Fixed(n)];
                b.extend(sub);
                boxes.push(b);
            }
        }
        n += 1;
    }
    boxes
}

/// Disjoint boxes covering `{ tuple : sum > g }` for `g < 0` (the index set
/// removed by a truncation). Mirror image of [`keep_boxes`]: columns with
/// nonnegative slack contribute nothing, mixed columns are fixed and
/// recursed, and in the tail the removed rest-set has stabilized to
/// `{rest-sum > g}`.
pub fn above_boxes(dims: &[Dim], g: &Exponent) -> Vec<Vec<Coord>> {
    if !g.sign().is_lt() {
        return Vec::new();
    }
    if dims.is_empty() {
        // The empty tuple has sum 0 > g.
        return vec![Vec::new()];
    }
    let (d1, rest) = dims.split_first().unwrap();
    let mu = min_sum_above(rest, g);
    let mut boxes = Vec::new();
    let mut n = d1.start;
    loop {
        let v1 = val(d1, n);
        let slack = g.sub(&v1);
        if !slack.sign().is_lt() {
            // v1 <= g: no rest-tuple can raise the sum above g.
        } else if slack < mu {
            // No rest-sum in (g, slack]: `{rest-sum > slack}` equals
            // `{rest-sum > g}` from this column on.
            for sub in above_boxes(rest, g) {
                let mut b = vec![Coord::Free { start: n }];
                b.extend(sub);
                boxes.push(b);
            }
            break;
        } else {
            for sub in above_boxes(rest, &slack) {
                let mut b = vec![Coord::Fixed(n)];
                b.extend(sub);
                boxes.push(b);
            }
        }
        n += 1;
    }
    boxes
}

/// The families presenting the part of `f` supported strictly above `gamma`.
pub fn truncate_above_family(f: &Family, gamma: &Exponent) -> Vec<Family> {
    let g = gamma.sub(&f.base);
    if f.dims.is_empty() {
        return if f.base > *gamma { vec![f.clone()] } else { Vec::new() };
    }
    if !g.sign().is_lt() {
        return Vec::new();
    }
    above_boxes(&f.dims, &g)
        .into_iter()
        .map(|coords| apply_box(f, &coords))
        .collect()
}

/// The least support point of `f` that is `>= x`, if any.
pub fn least_point_geq(f: &Family, x: &Exponent) -> Option<Exponent> {
    if f.dims.is_empty() {
        return if f.base >= *x { Some(f.base.clone()) } else { None };
    }
    let m = f.min_value();
    if m >= *x {
        return Some(m);
    }
    if !solve_family(f, x).is_empty() {
        return Some(x.clone());
    }
    let g = x.sub(&f.base);
    if g.sign().is_lt() {
        // Least point strictly above x; exists since the support accumulates
        // at `base > x`.
        Some(f.base.add(&min_sum_above(&f.dims, &g)))
    } else {
        // base <= x: every point is < base <= x.
        None
    }
}

/// All index tuples of `f` hitting the exact support point `e`.
pub fn solve_family(f: &Family, e: &Exponent) -> Vec<Vec<u64>> {
    solve_sum(&f.dims, &e.sub(&f.base))
}

/// The families presenting `f_{|gamma}` (support restricted to
/// `(-inf, gamma]`), each in canonical all-free form.
pub fn truncate_family(f: &Family, gamma: &Exponent) -> Vec<Family> {
    let g = gamma.sub(&f.base);
    if f.dims.is_empty() {
        return if f.base <= *gamma { vec![f.clone()] } else { Vec::new() };
    }
    if !g.sign().is_lt() {
        return vec![f.clone()];
    }
    keep_boxes(&f.dims, &g)
        .into_iter()
        .map(|coords| apply_box(f, &coords))
        .collect()
}

/// Specializes a family to one box: pins `Fixed` coordinates (folding them
/// into base and scalar) and advances the starts of `Free` coordinates.
pub fn apply_box(f: &Family, coords: &[Coord]) -> Family {
    debug_assert_eq!(coords.len(), f.dims.len());
    let mut out = f.clone();
    // Fix from the highest index down so earlier positions stay valid.
    for (i, c) in coords.iter().enumerate().rev() {
        match c {
            Coord::Fixed(n) => out = out.fix_dim(i, *n),
            Coord::Free { start } => {
                debug_assert!(*start >= out.dims[i].start);
                out.dims[i].start = *start;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coeff;
    use crate::series::{Ladder, Series};

    fn harm(num: i64, den: i64) -> Ladder {
        Ladder::Harmonic {
            scale: Exponent::from_frac(num, den),
        }
    }

    fn fam(ladders: Vec<Ladder>) -> Family {
        Family::new(Exponent::zero(), ladders, Coeff::one(), vec![])
    }

    #[test]
    fn min_sum_above_single_harmonic() {
        // -1/(n+1) > -1/3 first at n = 3 (value -1/4).
        let dims = fam(vec![harm(1, 1)]).dims;
        assert_eq!(
            min_sum_above(&dims, &Exponent::from_frac(-1, 3)),
            Exponent::from_frac(-1, 4)
        );
    }

    #[test]
    fn min_sum_above_matches_brute_force() {
        let dims = fam(vec![harm(1, 1), harm(1, 1)]).dims;
        for (num, den) in [(-1i64, 2i64), (-2, 3), (-1, 5), (-7, 6)] {
            let g = Exponent::from_frac(num, den);
            let got = min_sum_above(&dims, &g);
            let mut best: Option<Exponent> = None;
            for n in 0..64u64 {
                for m in 0..64u64 {
                    let s = dims[0].ladder.value(n).add(&dims[1].ladder.value(m));
                    if s > g && best.as_ref().map_or(true, |b| s < *b) {
                        best = Some(s);
                    }
                }
            }
            assert_eq!(got, best.unwrap(), "bound {num}/{den}");
        }
    }

    #[test]
    fn solve_finds_all_representations() {
        // -1/2 - 1/3 = -5/6 has exactly the two symmetric representations.
        let dims = fam(vec![harm(1, 1), harm(1, 1)]).dims;
        let mut sols = solve_sum(&dims, &Exponent::from_frac(-5, 6));
        sols.sort();
        assert_eq!(sols, vec![vec![1, 2], vec![2, 1]]);
        // -2 = -1 - 1 only.
        assert_eq!(solve_sum(&dims, &Exponent::from_int(-2)), vec![vec![0, 0]]);
        // -1/2 = sum of two unit fractions: (2,5), (3,3), (5,2) as indices.
        let mut sols = solve_sum(&dims, &Exponent::from_frac(-1, 2));
        sols.sort();
        assert_eq!(sols, vec![vec![2, 5], vec![3, 3], vec![5, 2]]);
        // No representation of an irrational target.
        assert!(solve_sum(&dims, &Exponent::sqrt(2).neg()).is_empty());
    }

    #[test]
    fn truncation_is_exact_on_enumeration() {
        let f = fam(vec![harm(1, 1), harm(1, 2)]);
        let b = Series::from_families(vec![f]);
        let gamma = Exponent::from_frac(-1, 2);
        let tb = b.truncate(&gamma);
        let (pts, _) = tb.enumerate(30);
        assert!(!pts.is_empty());
        for (e, c) in &pts {
            assert!(*e <= gamma, "point {e:?} escapes the cut");
            assert_eq!(*c, b.coefficient_at(e));
        }
        let (all, _) = b.enumerate(60);
        for (e, _) in &all {
            if *e > gamma {
                assert!(tb.coefficient_at(e).is_zero());
            } else {
                assert_eq!(tb.coefficient_at(e), b.coefficient_at(e));
            }
        }
    }

    #[test]
    fn truncation_box_dimension_drops() {
        // Cutting strictly below the sup leaves only boxes that pin at least
        // one coordinate.
        let f = fam(vec![harm(1, 1), harm(1, 1)]);
        let tb = Series::from_families(vec![f]).truncate(&Exponent::from_frac(-1, 4));
        assert!(!tb.is_zero());
        for fam in tb.families() {
            assert!(fam.dim_count() <= 1, "kept family {fam:?} keeps full dim");
        }
    }

    #[test]
    fn truncation_boxes_are_disjoint() {
        // Disjointness shows up as coefficient exactness: if two boxes
        // overlapped, the overlap's coefficient would double.
        let f = fam(vec![harm(1, 1), harm(1, 1), harm(1, 3)]);
        let b = Series::from_families(vec![f]);
        let gamma = Exponent::from_frac(-3, 4);
        let tb = b.truncate(&gamma);
        let (pts, _) = tb.enumerate(40);
        for (e, c) in &pts {
            assert_eq!(*c, b.coefficient_at(e));
        }
    }

    #[test]
    fn above_and_below_complement_each_other() {
        let f = fam(vec![harm(1, 1), harm(1, 2)]);
        let b = Series::from_families(vec![f.clone()]);
        let gamma = Exponent::from_frac(-2, 3);
        let below = Series::from_families(truncate_family(&f, &gamma));
        let above = Series::from_families(truncate_above_family(&f, &gamma));
        // Above-part points really are above, and the two parts recompose b.
        let (ap, _) = above.enumerate(25);
        assert!(!ap.is_empty());
        for (e, c) in &ap {
            assert!(*e > gamma);
            assert_eq!(*c, b.coefficient_at(e));
        }
        let recombined = below.add(&above);
        let (want, _) = b.enumerate(40);
        let (got, _) = recombined.enumerate(40);
        assert_eq!(want, got);
    }

    #[test]
    fn least_point_geq_scans_exactly() {
        let f = fam(vec![harm(1, 1)]);
        // Support {-1/(n+1)}; least point >= -1/3 is -1/3 itself.
        assert_eq!(
            least_point_geq(&f, &Exponent::from_frac(-1, 3)),
            Some(Exponent::from_frac(-1, 3))
        );
        // Least point >= -2/5 is -1/3.
        assert_eq!(
            least_point_geq(&f, &Exponent::from_frac(-2, 5)),
            Some(Exponent::from_frac(-1, 3))
        );
        // Below the minimum: the minimum.
        assert_eq!(
            least_point_geq(&f, &Exponent::from_int(-7)),
            Some(Exponent::from_int(-1))
        );
        // At or above the accumulation point: nothing.
        assert_eq!(least_point_geq(&f, &Exponent::zero()), None);
        let m = Family::monomial(Coeff::one(), Exponent::from_int(-2));
        assert_eq!(
            least_point_geq(&m, &Exponent::from_int(-2)),
            Some(Exponent::from_int(-2))
        );
        assert_eq!(least_point_geq(&m, &Exponent::from_int(-1)), None);
    }

    #[test]
    fn truncate_keeps_everything_at_zero_cut() {
        let f = fam(vec![harm(1, 1)]);
        let b = Series::from_families(vec![f]);
        assert_eq!(b.truncate(&Exponent::zero()), b);
    }

    #[test]
    fn truncate_then_truncate_deeper_composes() {
        // Presentations may differ (box boundaries depend on the cut order),
        // so compare the series pointwise.
        let f = fam(vec![harm(1, 1), harm(1, 1)]);
        let b = Series::from_families(vec![f]);
        let g1 = Exponent::from_frac(-1, 3);
        let g2 = Exponent::from_frac(-2, 3);
        let direct = b.truncate(&g2);
        let composed = b.truncate(&g1).truncate(&g2);
        let (p1, _) = direct.enumerate(50);
        let (p2, _) = composed.enumerate(50);
        assert_eq!(p1, p2);
        // The difference cancels pointwise everywhere we can see.
        let residue = direct.sub(&composed);
        assert!(residue.enumerate_with_budget(5, 50_000).0.is_empty());
    }
}
