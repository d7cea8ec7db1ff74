//! Coefficients: the rational function field Q(X1, X2, ...), represented as
//! fractions of multivariate integer polynomials.
//!
//! Two kinds of indeterminates exist: user variables `X[i]` from the series
//! DSL and fresh variables minted per index tuple by generic-coefficient
//! families. Fractions are normalized by integer content and denominator
//! sign; equality is decided by cross-multiplication, so reduction beyond
//! content is a non-issue for exactness. Polynomial denominators only ever
//! arise inside probe-matrix elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial indeterminate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// DSL variable `X[i]`.
    User(u64),
    /// Fresh indeterminate minted for index tuple `indices` of the generic
    /// family tagged `tag`.
    Fresh { tag: u64, indices: Vec<u64> },
}

/// A power product of variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub BTreeMap<Var, u32>);

impl Monomial {
    fn one() -> Self {
        Monomial::default()
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &rhs.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }
}

/// A multivariate polynomial with integer coefficients, sparse canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly(pub BTreeMap<Monomial, BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn from_int(n: BigInt) -> Self {
        let mut t = BTreeMap::new();
        if !n.is_zero() {
            t.insert(Monomial::one(), n);
        }
        Poly(t)
    }

    pub fn var(v: Var) -> Self {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        let mut t = BTreeMap::new();
        t.insert(Monomial(m), BigInt::one());
        Poly(t)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.0.clone();
        for (m, c) in &rhs.0 {
            let e = out.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.remove(m);
            }
        }
        Poly(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &rhs.0 {
                let m = m1.mul(m2);
                let e = out.entry(m).or_insert_with(BigInt::zero);
                *e += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly(out)
    }

    /// Gcd of all coefficients (zero for the zero polynomial).
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.0.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Sign of the leading (first in monomial order) coefficient.
    fn lead_sign_negative(&self) -> bool {
        self.0.values().next().map(|c| c.is_negative()).unwrap_or(false)
    }

    fn div_int(&self, d: &BigInt) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c / d)).collect())
    }

    /// All variables occurring in the polynomial.
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys().flat_map(|m| m.0.keys())
    }
}

/// An element of Q(X1, X2, ...): `num / den` with `den != 0`, normalized by
/// integer content and denominator sign, `0` represented as `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coeff {
    num: Poly,
    den: Poly,
}

impl Coeff {
    fn build(num: Poly, den: Poly) -> Coeff {
        assert!(!den.is_zero(), "zero denominator in coefficient");
        if num.is_zero() {
            return Coeff {
                num: Poly::zero(),
                den: Poly::from_int(BigInt::one()),
            };
        }
        let g = num.content().gcd(&den.content());
        let (mut num, mut den) = (num.div_int(&g), den.div_int(&g));
        if den.lead_sign_negative() {
            num = num.neg();
            den = den.neg();
        }
        Coeff { num, den }
    }

    pub fn zero() -> Coeff {
        Coeff::build(Poly::zero(), Poly::from_int(BigInt::one()))
    }

    pub fn one() -> Coeff {
        Coeff::from_int(1)
    }

    pub fn from_int(n: i64) -> Coeff {
        Coeff::build(Poly::from_int(BigInt::from(n)), Poly::from_int(BigInt::one()))
    }

    pub fn from_rational(q: &BigRational) -> Coeff {
        Coeff::build(
            Poly::from_int(q.numer().clone()),
            Poly::from_int(q.denom().clone()),
        )
    }

    pub fn var(v: Var) -> Coeff {
        Coeff::build(Poly::var(v), Poly::from_int(BigInt::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// `Some(q)` when the value is the rational constant `q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    /// `Some((q, v))` when the value is `q * v` for a single variable `v`.
    pub fn as_scaled_var(&self) -> Option<(BigRational, Var)> {
        let d = self.den.as_constant()?;
        if self.num.0.len() != 1 {
            return None;
        }
        let (m, c) = self.num.0.iter().next()?;
        if m.0.len() != 1 {
            return None;
        }
        let (v, e) = m.0.iter().next()?;
        if *e != 1 {
            return None;
        }
        Some((BigRational::new(c.clone(), d), v.clone()))
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        Coeff::build(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        Coeff::build(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &Coeff) -> Coeff {
        assert!(!rhs.is_zero(), "division by zero coefficient");
        Coeff::build(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    /// Semantic equality by cross-multiplication (robust against unreduced
    /// fractions from elimination).
    pub fn equiv(&self, rhs: &Coeff) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// All variables in numerator or denominator.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.num.vars().chain(self.den.vars()).cloned().collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (v, e) in &m.0 {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        match v {
            Var::User(i) => write!(f, "X[{i}]")?,
            Var::Fresh { tag, indices } => {
                write!(f, "F{tag}[")?;
                for (k, i) in indices.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{i}")?;
                }
                write!(f, "]")?;
            }
        }
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (m, c) in &p.0 {
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mag = c.abs();
        if m.0.is_empty() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            fmt_monomial(m, f)?;
        }
    }
    Ok(())
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_const = self.den.as_constant();
        match den_const {
            Some(d) if d.is_one() => fmt_poly(&self.num, f),
            Some(d) => {
                if self.num.0.len() > 1 {
                    write!(f, "(")?;
                    fmt_poly(&self.num, f)?;
                    write!(f, ")/{d}")
                } else {
                    fmt_poly(&self.num, f)?;
                    write!(f, "/{d}")
                }
            }
            None => {
                write!(f, "(")?;
                fmt_poly(&self.num, f)?;
                write!(f, ")/(")?;
                fmt_poly(&self.den, f)?;
                write!(f, ")")
            }
        }
    }
}
