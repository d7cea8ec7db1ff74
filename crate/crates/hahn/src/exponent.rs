//! Exact exponents: the subfield of the reals generated by rationals and
//! square roots of squarefree integers, `q0 + sum_d q_d * sqrt(d)`.
//!
//! Equality is decided symbolically (square roots of distinct squarefree
//! integers are linearly independent over Q), order by adaptive-precision
//! interval refinement, which terminates because a symbolically nonzero value
//! is numerically nonzero. Q-linear independence of a finite set is decided
//! by exact rank computation on the coordinate vectors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::primes::squarefree_split;

/// Starting interval precision in bits; doubled each refinement round.
const START_BITS: u32 = 32;
/// Hard precision cap. Reaching it without separating from zero indicates an
/// internal invariant violation (a symbolically nonzero value is never this
/// small), so we panic rather than mis-order exponents.
const MAX_BITS: u32 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ExponentError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `rat + sum_{d} roots[d] * sqrt(d)` with every key `d >= 2` squarefree and
/// every stored coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Exponent {
    rat: BigRational,
    roots: BTreeMap<u64, BigRational>,
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        Exponent {
            rat: q,
            roots: BTreeMap::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Exponent::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as an exponent; `q` must be nonzero.
    pub fn from_frac(p: i64, q: i64) -> Self {
        Exponent::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(n)` for `n >= 1`, normalized: `sqrt(k^2 * f) = k * sqrt(f)`.
    pub fn sqrt(n: u64) -> Self {
        let (k, f) = squarefree_split(n);
        let k = BigRational::from_integer(BigInt::from(k));
        if f == 1 {
            Exponent::from_rational(k)
        } else {
            let mut roots = BTreeMap::new();
            roots.insert(f, k);
            Exponent {
                rat: BigRational::zero(),
                roots,
            }
        }
    }

    /// `q * sqrt(n)` normalized.
    pub fn sqrt_scaled(q: BigRational, n: u64) -> Self {
        Exponent::sqrt(n).scale(&q)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.roots.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.roots.is_empty()
    }

    /// The rational part `q0`.
    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    /// Squarefree radicands with nonzero coefficient.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.roots.keys().copied()
    }

    pub fn add(&self, rhs: &Exponent) -> Exponent {
        let mut out = self.clone();
        out.rat += &rhs.rat;
        for (d, q) in &rhs.roots {
            let entry = out.roots.entry(*d).or_insert_with(BigRational::zero);
            *entry += q;
            if entry.is_zero() {
                out.roots.remove(d);
            }
        }
        out
    }

    pub fn neg(&self) -> Exponent {
        Exponent {
            rat: -self.rat.clone(),
            roots: self.roots.iter().map(|(d, q)| (*d, -q.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Exponent) -> Exponent {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Exponent {
        if q.is_zero() {
            return Exponent::zero();
        }
        Exponent {
            rat: &self.rat * q,
            roots: self.roots.iter().map(|(d, c)| (*d, c * q)).collect(),
        }
    }

    /// Full product; closed because `sqrt(a) * sqrt(b) = g * sqrt(ab / g^2)`
    /// with `g = gcd(a, b)`.
    pub fn mul(&self, rhs: &Exponent) -> Exponent {
        let mut out = rhs.scale(&self.rat);
        for (d, q) in &self.roots {
            out = out.add(&rhs.scale(q).mul_sqrt(*d));
        }
        out
    }

    /// `self * sqrt(d)` for squarefree `d`.
    fn mul_sqrt(&self, d: u64) -> Exponent {
        let mut out = Exponent::sqrt_scaled(self.rat.clone(), d);
        for (e, q) in &self.roots {
            // sqrt(e) * sqrt(d) = g * sqrt(e*d/g^2), g = gcd(e, d).
            let g = num_integer::gcd(*e, d);
            let rad = (e / g) * (d / g);
            let coeff = q * BigRational::from_integer(BigInt::from(g));
            out = out.add(&Exponent::sqrt_scaled(coeff, rad));
        }
        out
    }

    /// Sign relative to zero, decided exactly.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if self.roots.is_empty() {
            return self.rat.cmp(&BigRational::zero());
        }
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.eval_interval(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            assert!(
                bits < MAX_BITS,
                "interval refinement failed to separate a symbolically nonzero exponent from zero"
            );
            bits *= 2;
        }
    }

    /// A rational interval `[lo, hi]` containing the value, with width at most
    /// about `2^-bits` times the coefficient mass.
    pub fn eval_interval(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let scale2 = &scale * &scale;
        let mut lo = self.rat.clone();
        let mut hi = self.rat.clone();
        for (d, q) in &self.roots {
            // floor(sqrt(d * 4^bits)) / 2^bits <= sqrt(d) < (floor + 1) / 2^bits.
            let s = (BigInt::from(*d) * &scale2).sqrt();
            let r_lo = BigRational::new(s.clone(), scale.clone());
            let r_hi = BigRational::new(s + BigInt::one(), scale.clone());
            if q.is_positive() {
                lo += q * &r_lo;
                hi += q * &r_hi;
            } else {
                lo += q * &r_hi;
                hi += q * &r_lo;
            }
        }
        (lo, hi)
    }

    /// A rational approximation good to about `bits` bits.
    pub fn approx(&self, bits: u32) -> BigRational {
        let (lo, hi) = self.eval_interval(bits);
        (lo + hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Coordinate vector over the basis `{1} union {sqrt(d)}` for the given
    /// radicand list.
    fn coords(&self, basis: &[u64]) -> Vec<BigRational> {
        let mut v = Vec::with_capacity(basis.len() + 1);
        v.push(self.rat.clone());
        for d in basis {
            v.push(self.roots.get(d).cloned().unwrap_or_else(BigRational::zero));
        }
        v
    }

    /// Parses `exp := rterm (('+'|'-') rterm)*` with
    /// `rterm := RAT | RAT '*' 'sqrt(' NAT ')' | 'sqrt(' NAT ')'`.
    pub fn parse(input: &str) -> Result<Exponent, ExponentError> {
        let mut p = EParser {
            src: input.as_bytes(),
            pos: 0,
        };
        let e = p.exponent()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(ExponentError::Parse {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        Ok(e)
    }
}

/// Decides Q-linear independence of the given exponents via exact rank
/// computation over the coordinate basis `{1} union {sqrt(d)}`.
pub fn q_linearly_independent(xs: &[Exponent]) -> bool {
    let mut basis: Vec<u64> = xs
        .iter()
        .flat_map(|x| x.radicands().collect::<Vec<_>>())
        .collect();
    basis.sort_unstable();
    basis.dedup();
    let mut rows: Vec<Vec<BigRational>> = xs.iter().map(|x| x.coords(&basis)).collect();
    // Gaussian elimination; rank == number of vectors iff independent.
    let cols = basis.len() + 1;
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if !rows[r][col].is_zero() {
                let f = &rows[r][col] / &p;
                for c in col..cols {
                    let sub = &rows[rank][c] * &f;
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank == xs.len()
}

/// Numeric total order; consistent with `Eq` because the representation is
/// canonical (equal values have identical representations).
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct EParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> EParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExponentError> {
        Err(ExponentError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn nat(&mut self) -> Result<u64, ExponentError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ExponentError::Parse {
                pos: start,
                msg: "number out of range".into(),
            })
    }

    /// An unsigned rational `NAT ('/' NAT)?`.
    fn rat(&mut self) -> Result<BigRational, ExponentError> {
        let n = self.nat()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.nat()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(BigInt::from(n), BigInt::from(d)))
        } else {
            Ok(BigRational::from_integer(BigInt::from(n)))
        }
    }

    fn exponent(&mut self) -> Result<Exponent, ExponentError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let mut acc = self.rterm(neg)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    let t = self.rterm(false)?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    let t = self.rterm(true)?;
                    acc = acc.add(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn rterm(&mut self, neg: bool) -> Result<Exponent, ExponentError> {
        self.skip_ws();
        let e = if self.src[self.pos..].starts_with(b"sqrt(") {
            self.pos += 5;
            let d = self.nat()?;
            if d == 0 {
                return self.err("sqrt of zero");
            }
            if self.peek() != Some(b')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
            Exponent::sqrt(d)
        } else {
            let q = self.rat()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                let save = self.pos;
                self.pos += 1;
                self.skip_ws();
                if self.src[self.pos..].starts_with(b"sqrt(") {
                    self.pos += 5;
                    let d = self.nat()?;
                    if d == 0 {
                        return self.err("sqrt of zero");
                    }
                    if self.peek() != Some(b')') {
                        return self.err("expected ')'");
                    }
                    self.pos += 1;
                    Exponent::sqrt_scaled(q, d)
                } else {
                    self.pos = save;
                    Exponent::from_rational(q)
                }
            } else {
                Exponent::from_rational(q)
            }
        };
        Ok(if neg { e.neg() } else { e })
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut write_term =
            |f: &mut fmt::Formatter<'_>, q: &BigRational, rad: Option<u64>| -> fmt::Result {
                let neg = q.is_negative();
                let mag = q.abs();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                match rad {
                    None => write!(f, "{mag}"),
                    Some(d) => {
                        if mag.is_one() {
                            write!(f, "sqrt({d})")
                        } else {
                            write!(f, "{mag}*sqrt({d})")
                        }
                    }
                }
            };
        if !self.rat.is_zero() {
            write_term(f, &self.rat, None)?;
        }
        for (d, q) in &self.roots {
            write_term(f, q, Some(*d))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(s: &str) -> Exponent {
        Exponent::parse(s).unwrap()
    }

    #[test]
    fn sqrt_normalization() {
        assert_eq!(Exponent::sqrt(12), exp("2*sqrt(3)"));
        assert_eq!(Exponent::sqrt(49), exp("7"));
        assert_eq!(Exponent::sqrt(1), exp("1"));
        assert_eq!(Exponent::sqrt(18), exp("3*sqrt(2)"));
    }

    #[test]
    fn comparison_through_intervals() {
        // sqrt(2) + sqrt(3) vs sqrt(10): 3.146... < 3.162...
        assert!(exp("sqrt(2) + sqrt(3)") < exp("sqrt(10)"));
        assert!(exp("sqrt(2)") > exp("7/5"));
        assert!(exp("sqrt(2)") < exp("3/2"));
        assert!(exp("-1 - 1/2") < exp("-1"));
        // 2*sqrt(2) == sqrt(8) exactly.
        assert_eq!(exp("2*sqrt(2)").cmp(&exp("sqrt(8)")), Ordering::Equal);
    }

    #[test]
    fn close_call_needs_refinement() {
        // sqrt(2) - 1 vs 5741/13860 differ around 1e-8 (continued fraction
        // convergent); sign must still come out exactly.
        let a = exp("sqrt(2) - 1 - 5741/13860");
        assert_ne!(a.sign(), Ordering::Equal);
    }

    #[test]
    fn products_stay_in_the_field() {
        // (1 + sqrt(2)) * (1 - sqrt(2)) = -1.
        let p = exp("1 + sqrt(2)").mul(&exp("1 - sqrt(2)"));
        assert_eq!(p, exp("-1"));
        // sqrt(2) * sqrt(3) = sqrt(6).
        assert_eq!(exp("sqrt(2)").mul(&exp("sqrt(3)")), exp("sqrt(6)"));
        // sqrt(6) * sqrt(10) = 2*sqrt(15).
        assert_eq!(exp("sqrt(6)").mul(&exp("sqrt(10)")), exp("2*sqrt(15)"));
    }

    #[test]
    fn linear_independence() {
        assert!(q_linearly_independent(&[
            exp("1"),
            exp("sqrt(2)"),
            exp("sqrt(3)")
        ]));
        // sqrt(8) = 2*sqrt(2): dependent.
        assert!(!q_linearly_independent(&[exp("sqrt(2)"), exp("sqrt(8)")]));
        // Two rationals are always dependent.
        assert!(!q_linearly_independent(&[exp("-1"), exp("-1/2")]));
        // Mixed values with a hidden relation.
        assert!(!q_linearly_independent(&[
            exp("1 + sqrt(2)"),
            exp("1 - sqrt(2)"),
            exp("2")
        ]));
        assert!(q_linearly_independent(&[exp("-1")]));
        assert!(q_linearly_independent(&[]));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "-1", "3/4", "-1/2 + sqrt(2)", "1 - 2*sqrt(3) + sqrt(5)"] {
            let e = exp(s);
            assert_eq!(exp(&e.to_string()), e, "round trip through {e}");
        }
    }
}
