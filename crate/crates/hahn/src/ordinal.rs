//! Ordinals below epsilon_0 in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + w^e2*c2 + ... + w^ek*ck` with
//! strictly decreasing ordinal exponents `e1 > e2 > ... > ek` and positive
//! integer coefficients. The empty sum is 0. On top of the usual
//! (non-commutative) ordinal sum we provide the Hessenberg natural sum and
//! natural product, which are the operations the valuation theory needs:
//! `(On, nat_sum, nat_prod)` is isomorphic to a polynomial semiring, and the
//! degree valuation is a homomorphism onto it.
//!
//! Public items: [`Ordinal`], [`ShapeTag`], [`OrdinalError`], parsing via
//! [`Ordinal::parse`] and canonical printing via `Display`.

use std::fmt;

use thiserror::Error;

/// Maximum nesting depth of exponents. Exceeding it is a checked error, not a
/// stack overflow.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OrdinalError {
    #[error("ordinal exponent nesting deeper than {MAX_DEPTH}")]
    DepthExceeded,
    #[error("operation undefined for the ordinal 0")]
    ZeroOrdinal,
    #[error("coefficient overflow in ordinal arithmetic")]
    Overflow,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An ordinal below epsilon_0 in Cantor normal form.
///
/// Invariant: `terms` holds `(exponent, coefficient)` pairs with strictly
/// decreasing exponents and coefficients >= 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

/// Shape classification of an ordinal `a`, used as a side condition on the
/// exponent `alpha` of an order type `w^alpha` by the certifier. The variants
/// are not mutually exclusive; classification returns every tag that applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeTag {
    /// `a = w^beta` (additively principal, 1 counts as `w^0`).
    AddPrincipal(Ordinal),
    /// `a = w^beta1 + w^beta2 + k` with `beta1 >= beta2` and `k` finite.
    TwoPlusK(Ordinal, Ordinal, u64),
    /// `a = w^beta1 + ... + w^betan` with `beta1 >= beta2 >= beta3 > beta4 >
    /// ... > betan` (at most the first three summands may tie).
    ThreeHead(Vec<Ordinal>),
}

impl Ordinal {
    /// The ordinal 0.
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    /// The ordinal 1.
    pub fn one() -> Self {
        Ordinal::from_nat(1)
    }

    /// The ordinal omega.
    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(Ordinal::one(), 1)],
        }
    }

    /// A finite ordinal.
    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// Builds `sum w^e_i * c_i` from raw terms (any order, zero coefficients
    /// allowed and dropped); merges duplicate exponents with natural addition
    /// of coefficients.
    pub fn from_terms(mut raw: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        raw.retain(|(_, c)| *c > 0);
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(Ordinal, u64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            if let Some(last) = terms.last_mut() {
                if last.0 == e {
                    last.1 = last.1.checked_add(c).ok_or(OrdinalError::Overflow)?;
                    continue;
                }
            }
            terms.push((e, c));
        }
        let o = Ordinal { terms };
        o.check_depth()?;
        Ok(o)
    }

    /// `w^a`.
    pub fn omega_pow(a: &Ordinal) -> Result<Self, OrdinalError> {
        let o = Ordinal {
            terms: vec![(a.clone(), 1)],
        };
        o.check_depth()?;
        Ok(o)
    }

    fn check_depth(&self) -> Result<(), OrdinalError> {
        fn depth(o: &Ordinal) -> usize {
            1 + o.terms.iter().map(|(e, _)| depth(e)).max().unwrap_or(0)
        }
        if depth(self) > MAX_DEPTH {
            Err(OrdinalError::DepthExceeded)
        } else {
            Ok(())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns `Some(n)` when the ordinal is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 if self.terms[0].0.is_zero() => Some(self.terms[0].1),
            _ => None,
        }
    }

    /// The CNF terms, leading term first.
    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    /// Cantor degree: the leading exponent. Errors on 0.
    pub fn cantor_degree(&self) -> Result<&Ordinal, OrdinalError> {
        self.terms
            .first()
            .map(|(e, _)| e)
            .ok_or(OrdinalError::ZeroOrdinal)
    }

    /// Standard (non-commutative) ordinal sum.
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let d = &rhs.terms[0].0;
        let mut terms: Vec<(Ordinal, u64)> = self
            .terms
            .iter()
            .filter(|(e, _)| e > d)
            .cloned()
            .collect();
        let absorbed: u64 = self
            .terms
            .iter()
            .find(|(e, _)| e == d)
            .map(|(_, c)| *c)
            .unwrap_or(0);
        let lead = absorbed
            .checked_add(rhs.terms[0].1)
            .ok_or(OrdinalError::Overflow)?;
        terms.push((d.clone(), lead));
        terms.extend(rhs.terms[1..].iter().cloned());
        Ok(Ordinal { terms })
    }

    /// Hessenberg natural sum: merge of the `w^e` term multisets.
    pub fn nat_sum(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut raw = self.terms.clone();
        raw.extend(rhs.terms.iter().cloned());
        Ordinal::from_terms(raw)
    }

    /// Hessenberg natural product: `w^a * w^b = w^(a nat_sum b)` extended
    /// bilinearly over CNF terms.
    pub fn nat_prod(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut raw = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.nat_sum(e2)?;
                let c = c1.checked_mul(*c2).ok_or(OrdinalError::Overflow)?;
                raw.push((e, c));
            }
        }
        Ordinal::from_terms(raw)
    }

    /// Left multiplication by `w^beta` in ordinary ordinal arithmetic:
    /// `w^beta * a`. Uses left distributivity and `w^beta * w^e * c =
    /// w^(beta + e) * c`.
    pub fn mul_omega_pow_left(beta: &Ordinal, a: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut acc = Ordinal::zero();
        for (e, c) in &a.terms {
            let exp = beta.add(e)?;
            let term = Ordinal {
                terms: vec![(exp, *c)],
            };
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `a = w^beta` for some `beta` (closed under ordinal sum on the left).
    pub fn is_additively_principal(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1
    }

    /// `a = w^(w^beta)` for some `beta` (closed under natural product below).
    pub fn is_multiplicatively_principal(&self) -> bool {
        self.is_additively_principal() && self.terms[0].0.is_additively_principal()
    }

    /// Splits `a` into `(residual, principal)` where `principal = w^(e_k)` is
    /// one unit of the last CNF term and `a = residual + principal`. Errors
    /// on 0.
    pub fn split_residual_principal(&self) -> Result<(Ordinal, Ordinal), OrdinalError> {
        let (e_last, c_last) = self.terms.last().ok_or(OrdinalError::ZeroOrdinal)?.clone();
        let principal = Ordinal {
            terms: vec![(e_last.clone(), 1)],
        };
        let mut res_terms: Vec<(Ordinal, u64)> =
            self.terms[..self.terms.len() - 1].to_vec();
        if c_last > 1 {
            res_terms.push((e_last, c_last - 1));
        }
        Ok((Ordinal { terms: res_terms }, principal))
    }

    /// Every shape tag that applies to `self` (see [`ShapeTag`]). Errors on 0.
    pub fn classify_shape(&self) -> Result<Vec<ShapeTag>, OrdinalError> {
        if self.is_zero() {
            return Err(OrdinalError::ZeroOrdinal);
        }
        let mut tags = Vec::new();
        if self.is_additively_principal() {
            tags.push(ShapeTag::AddPrincipal(self.terms[0].0.clone()));
        }
        // ThreeHead: expanded exponent list b1 >= b2 >= b3 > b4 > ... > bn.
        // Inside a CNF term the expanded copies tie, so a term starting at
        // expanded position p with coefficient c is admissible iff its last
        // internal tie sits at position <= 2, i.e. p + c - 2 <= 2 (or c = 1).
        {
            let mut ok = true;
            let mut pos: u64 = 1; // expanded position of the current term
            for (_, c) in &self.terms {
                if *c > 1 && pos + *c - 2 > 2 {
                    ok = false;
                    break;
                }
                pos += *c;
            }
            if ok {
                let mut head = Vec::new();
                for (e, c) in &self.terms {
                    for _ in 0..*c {
                        head.push(e.clone());
                    }
                }
                tags.push(ShapeTag::ThreeHead(head));
            }
        }
        // TwoPlusK: expanded list is [b1, b2, 0, 0, ..., 0].
        {
            let zero = Ordinal::zero();
            let z: u64 = self
                .terms
                .iter()
                .find(|(e, _)| e.is_zero())
                .map(|(_, c)| *c)
                .unwrap_or(0);
            let nonzero: Vec<(Ordinal, u64)> = self
                .terms
                .iter()
                .filter(|(e, _)| !e.is_zero())
                .cloned()
                .collect();
            let nz: u64 = nonzero.iter().map(|(_, c)| *c).sum();
            let tag = match nz {
                0 if z >= 2 => Some(ShapeTag::TwoPlusK(zero.clone(), zero.clone(), z - 2)),
                1 if z >= 1 => Some(ShapeTag::TwoPlusK(nonzero[0].0.clone(), zero.clone(), z - 1)),
                2 => {
                    let (b1, b2) = if nonzero.len() == 1 {
                        (nonzero[0].0.clone(), nonzero[0].0.clone())
                    } else {
                        (nonzero[0].0.clone(), nonzero[1].0.clone())
                    };
                    Some(ShapeTag::TwoPlusK(b1, b2, z))
                }
                _ => None,
            };
            if let Some(t) = tag {
                tags.push(t);
            }
        }
        Ok(tags)
    }

    /// Parses the grammar
    /// `ord := term ('+' term)* ; term := 'w' ('^' '(' ord ')' | '^' NAT)? ('*' NAT)? | NAT`.
    pub fn parse(input: &str) -> Result<Ordinal, OrdinalError> {
        let mut p = Parser {
            src: input.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let o = p.ordinal()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(OrdinalError::Parse {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        Ok(o)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), OrdinalError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(OrdinalError::Parse {
                pos: self.pos,
                msg: format!("expected '{}'", b as char),
            })
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(OrdinalError::Parse {
                pos: self.pos,
                msg: "expected a natural number".into(),
            });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Parse {
                pos: start,
                msg: "natural number out of range".into(),
            })
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') {
                self.pos += 1;
                self.skip_ws();
                let t = self.term()?;
                acc = acc.add(&t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        self.skip_ws();
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let mut exp = Ordinal::one();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    if self.peek() == Some(b'(') {
                        self.pos += 1;
                        exp = self.ordinal()?;
                        self.skip_ws();
                        self.eat(b')')?;
                    } else if self.peek() == Some(b'w') {
                        // Shorthand: `w^w`; deeper exponents need parentheses.
                        self.pos += 1;
                        exp = Ordinal::omega();
                    } else {
                        exp = Ordinal::from_nat(self.nat()?);
                    }
                }
                let mut coeff = 1;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    coeff = self.nat()?;
                    if coeff == 0 {
                        return Err(OrdinalError::Parse {
                            pos: self.pos,
                            msg: "zero coefficient".into(),
                        });
                    }
                }
                let w = Ordinal::omega_pow(&exp)?;
                Ordinal::from_terms(vec![(w.terms[0].0.clone(), coeff)])
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(OrdinalError::Parse {
                pos: self.pos,
                msg: "expected 'w' or a natural number".into(),
            }),
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            match e.as_nat() {
                Some(1) => write!(f, "w")?,
                Some(n) => write!(f, "w^{n}")?,
                None if *e == Ordinal::omega() => write!(f, "w^w")?,
                None => write!(f, "w^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "0",
            "1",
            "5",
            "w",
            "w + 1",
            "w*3 + 2",
            "w^2*3 + w + 5",
            "w^(w^2 + 1)*2 + w^w + 3",
            "w^(w)",
        ] {
            let o = ord(s);
            let printed = o.to_string();
            assert_eq!(ord(&printed), o, "round trip through {printed:?}");
        }
        assert_eq!(ord("w^(w)").to_string(), "w^w");
    }

    #[test]
    fn ordinal_sum_absorbs() {
        // 1 + w = w, w + 1 = w + 1.
        assert_eq!(ord("1").add(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w").add(&ord("1")).unwrap(), ord("w + 1"));
        // (w + 1) + w = w*2.
        assert_eq!(ord("w + 1").add(&ord("w")).unwrap(), ord("w*2"));
        // w^2 + (w + 1) keeps everything.
        assert_eq!(ord("w^2").add(&ord("w + 1")).unwrap(), ord("w^2 + w + 1"));
        // Coefficient merge at equal degree.
        assert_eq!(ord("w*2 + 1").add(&ord("w*3")).unwrap(), ord("w*5"));
    }

    #[test]
    fn natural_operations_commute() {
        let a = ord("w^2 + 1");
        let b = ord("w*3");
        assert_eq!(a.nat_sum(&b).unwrap(), b.nat_sum(&a).unwrap());
        assert_eq!(a.nat_prod(&b).unwrap(), b.nat_prod(&a).unwrap());
        assert_eq!(a.nat_sum(&b).unwrap(), ord("w^2 + w*3 + 1"));
        // w^2*3 nat_prod w*2 = w^3*6.
        assert_eq!(
            ord("w^2*3").nat_prod(&ord("w*2")).unwrap(),
            ord("w^3*6")
        );
    }

    #[test]
    fn omega_powers_multiply_by_exponent_sum() {
        let a = ord("w + 1");
        let b = ord("w^2");
        let lhs = Ordinal::omega_pow(&a)
            .unwrap()
            .nat_prod(&Ordinal::omega_pow(&b).unwrap())
            .unwrap();
        let rhs = Ordinal::omega_pow(&a.nat_sum(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compare_is_cnf_lexicographic() {
        assert!(ord("w^2*5") < ord("w^w"));
        assert!(ord("w + 1") > ord("w"));
        assert!(ord("w*2") > ord("w + 5"));
        assert!(ord("0") < ord("1"));
    }

    #[test]
    fn split_takes_one_unit_of_last_term() {
        let (r, p) = ord("w").split_residual_principal().unwrap();
        assert_eq!((r, p), (ord("0"), ord("w")));
        let (r, p) = ord("w^2 + w*2").split_residual_principal().unwrap();
        assert_eq!((r, p), (ord("w^2 + w"), ord("w")));
        let (r, p) = ord("3").split_residual_principal().unwrap();
        assert_eq!((r, p), (ord("2"), ord("1")));
    }

    #[test]
    fn principality_predicates() {
        assert!(ord("w").is_additively_principal());
        assert!(ord("w").is_multiplicatively_principal());
        assert!(ord("w^2").is_additively_principal());
        assert!(!ord("w^2").is_multiplicatively_principal());
        assert!(ord("w^w").is_multiplicatively_principal());
        assert!(!ord("w*2").is_additively_principal());
        assert!(!ord("1").is_multiplicatively_principal());
    }

    #[test]
    fn shape_classification() {
        // 2 = w^0 + w^0 + 0.
        let tags = ord("2").classify_shape().unwrap();
        assert!(tags
            .iter()
            .any(|t| matches!(t, ShapeTag::TwoPlusK(a, b, 0) if a.is_zero() && b.is_zero())));
        // w*3 + 2 fails ThreeHead (the tail of zeros ties beyond position 3).
        let tags = ord("w*3 + 2").classify_shape().unwrap();
        assert!(!tags.iter().any(|t| matches!(t, ShapeTag::ThreeHead(_))));
        // w*2 + 1 is both TwoPlusK(1,1,1) and ThreeHead.
        let tags = ord("w*2 + 1").classify_shape().unwrap();
        assert!(tags.iter().any(
            |t| matches!(t, ShapeTag::TwoPlusK(a, b, 1) if a.as_nat() == Some(1) && b.as_nat() == Some(1))
        ));
        assert!(tags.iter().any(|t| matches!(t, ShapeTag::ThreeHead(_))));
        // w^w is AddPrincipal(w).
        let tags = ord("w^w").classify_shape().unwrap();
        assert!(tags
            .iter()
            .any(|t| matches!(t, ShapeTag::AddPrincipal(b) if *b == ord("w"))));
    }

    #[test]
    fn depth_cap_is_checked() {
        let mut o = Ordinal::one();
        for _ in 0..MAX_DEPTH {
            match Ordinal::omega_pow(&o) {
                Ok(next) => o = next,
                Err(OrdinalError::DepthExceeded) => return,
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert!(Ordinal::omega_pow(&o).is_err());
    }

    #[test]
    fn left_multiplication_by_omega_power() {
        // w * (w + 1) = w^2 + w.
        assert_eq!(
            Ordinal::mul_omega_pow_left(&ord("1"), &ord("w + 1")).unwrap(),
            ord("w^2 + w")
        );
        // w^2 * 3 = w^2*3.
        assert_eq!(
            Ordinal::mul_omega_pow_left(&ord("2"), &ord("3")).unwrap(),
            ord("w^2*3")
        );
        // w * w^2 = w^3  (beta + e ordinal sum in the exponent).
        assert_eq!(
            Ordinal::mul_omega_pow_left(&ord("1"), &ord("w^2")).unwrap(),
            ord("w^3")
        );
    }
}
