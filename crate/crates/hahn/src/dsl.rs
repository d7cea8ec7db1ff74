//! Text syntax for series: a small expression language with `let` bindings,
//! and the canonical renderer that inverts it.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! program  := ('let' IDENT '=' series ';')*
//! series   := mterm (('+'|'-') mterm)*
//! mterm    := factor (('*'|'/') factor)*          -- '/' by a constant only
//! factor   := ['-'] atom ['^' NAT]
//! atom     := NAT | 'X[' NAT ']' | 'F'TAG'[' NAT,* ']'
//!           | 't^(' expexpr ')' | 'Sum[' binder,+ '](' body ')'
//!           | '(' series ')' | IDENT
//! binder   := IDENT ':' ladder ['@' NAT]
//! ladder   := 'harm(' exp ')' | 'geo(' exp ',' RAT ')' | 'iharm(' exp ',' NAT ')'
//! body     := (coefffactor '*')* 't^(' expexpr ')'
//! coefffactor := 'alt(' series,+ ';' IDENT ')' | 'fresh(' NAT [';' comp,*] ')'
//!              | constant factor
//! expexpr  := sum of rational/sqrt terms, 's(' IDENT ')' ladder references,
//!             and the harmonic shorthand '-c/(IDENT+1)'
//! ```
//!
//! Every constant subexpression is evaluated in the coefficient field, so the
//! printed form of any coefficient parses back; rendering uses `format_series`
//! (also exposed as `Display for Series`), and the two are mutually inverse:
//! `format(parse(x))` is the canonical form of `x`, and `parse(format(s))`
//! reconstructs `s` exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeff::{Coeff, Var};
use crate::exponent::Exponent;
use crate::series::{CoeffFactor, Dim, Family, FreshComp, Ladder, Series};

/// A syntax or binding error with a 1-based source position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.column, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

/// Parses a program of `let NAME = series;` statements. Later statements may
/// reference earlier names. Returns the bindings in order.
pub fn parse_program(text: &str) -> Result<Vec<(String, Series)>, ParseError> {
    parse_program_with_seed(text, 0)
}

/// Like [`parse_program`], with `seed_offset` added to every `iharm` seed so
/// separate invocations can draw from disjoint prime pools.
pub fn parse_program_with_seed(
    text: &str,
    seed_offset: u32,
) -> Result<Vec<(String, Series)>, ParseError> {
    let mut p = Parser::new(text, seed_offset)?;
    let mut out: Vec<(String, Series)> = Vec::new();
    while !p.at_eof() {
        p.keyword("let")?;
        let name = p.binding_name()?;
        p.punct('=')?;
        let s = p.series()?;
        p.punct(';')?;
        p.env.push((name.clone(), s.clone()));
        out.push((name, s));
    }
    Ok(out)
}

/// Parses a single series expression (no `let`).
pub fn parse_series(text: &str) -> Result<Series, ParseError> {
    parse_series_with_seed(text, 0)
}

/// Like [`parse_series`], with an `iharm` seed offset.
pub fn parse_series_with_seed(text: &str, seed_offset: u32) -> Result<Series, ParseError> {
    let mut p = Parser::new(text, seed_offset)?;
    let s = p.series()?;
    if !p.at_eof() {
        return Err(p.error("end of input"));
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Nat(BigInt),
    Punct(char),
    Eof,
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let (tl, tc) = (line, column);
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push(Lexed {
                tok: Tok::Nat(digits.parse().expect("digit string")),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    name.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push(Lexed {
                tok: Tok::Ident(name),
                line: tl,
                column: tc,
            });
            continue;
        }
        if "()[]+-*/^,;:=@".contains(c) {
            chars.next();
            column += 1;
            out.push(Lexed {
                tok: Tok::Punct(c),
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(ParseError {
            line: tl,
            column: tc,
            expected: format!("a token (found {c:?})"),
        });
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const RESERVED: &[&str] = &[
    "let", "Sum", "harm", "geo", "iharm", "alt", "fresh", "sqrt", "s", "t", "X",
];

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    seed_offset: u32,
    env: Vec<(String, Series)>,
}

/// The binders in scope inside one `Sum` body, positionally aligned with the
/// family's dims.
type Binders = Vec<(String, Ladder)>;

impl Parser {
    fn new(text: &str, seed_offset: u32) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            seed_offset,
            env: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            expected: expected.into(),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("'{c}'")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(format!("'{kw}'"))),
        }
    }

    fn peek_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn nat(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn small_nat(&mut self) -> Result<u64, ParseError> {
        let err = self.error("a machine-sized number");
        let n = self.nat()?;
        u64::try_from(&n).map_err(|_| err)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    fn binding_name(&mut self) -> Result<String, ParseError> {
        let err = self.error("an unreserved name");
        let name = self.ident()?;
        if RESERVED.contains(&name.as_str()) || is_fresh_var_name(&name) {
            return Err(err);
        }
        Ok(name)
    }

    // -- series expressions -------------------------------------------------

    fn series(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.mterm()?;
        loop {
            if self.eat_punct('+') {
                acc = acc.add(&self.mterm()?);
            } else if self.eat_punct('-') {
                acc = acc.sub(&self.mterm()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn mterm(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_punct('*') {
                acc = acc.mul(&self.factor()?);
            } else if *self.peek() == Tok::Punct('/') {
                let at = self.pos;
                self.bump();
                let rhs = self.factor()?;
                let c = as_constant(&rhs).ok_or_else(|| {
                    positioned(&self.toks[at], "a constant divisor")
                })?;
                if c.is_zero() {
                    return Err(positioned(&self.toks[at], "a nonzero divisor"));
                }
                acc = acc.scale(&Coeff::one().div(&c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Series, ParseError> {
        let neg = self.eat_punct('-');
        let mut s = self.atom()?;
        if self.eat_punct('^') {
            let at = self.pos;
            let e = self.small_nat()?;
            if e > 64 {
                return Err(positioned(&self.toks[at], "an exponent at most 64"));
            }
            let base = s.clone();
            s = Series::one();
            for _ in 0..e {
                s = s.mul(&base);
            }
        }
        Ok(if neg { s.neg() } else { s })
    }

    fn atom(&mut self) -> Result<Series, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                let q = BigRational::from_integer(n);
                Ok(Series::monomial(Coeff::from_rational(&q), Exponent::zero()))
            }
            Tok::Punct('(') => {
                self.bump();
                let s = self.series()?;
                self.punct(')')?;
                Ok(s)
            }
            Tok::Ident(name) if name == "t" => {
                self.bump();
                self.punct('^')?;
                self.punct('(')?;
                let at = self.pos;
                let (e, _) = self.expexpr(&[])?;
                self.punct(')')?;
                if e.sign().is_gt() {
                    return Err(positioned(&self.toks[at], "a nonpositive exponent"));
                }
                Ok(Series::monomial(Coeff::one(), e))
            }
            Tok::Ident(name) if name == "Sum" => self.sum(),
            Tok::Ident(name) if name == "X" => {
                self.bump();
                self.punct('[')?;
                let i = self.small_nat()?;
                self.punct(']')?;
                Ok(Series::monomial(Coeff::var(Var::User(i)), Exponent::zero()))
            }
            Tok::Ident(name) if is_fresh_var_name(&name) && *self.peek2() == Tok::Punct('[') => {
                self.bump();
                let tag: u64 = name[1..].parse().map_err(|_| self.error("a fresh tag"))?;
                self.punct('[')?;
                let mut indices = Vec::new();
                if *self.peek() != Tok::Punct(']') {
                    loop {
                        indices.push(self.small_nat()?);
                        if !self.eat_punct(',') {
                            break;
                        }
                    }
                }
                self.punct(']')?;
                Ok(Series::monomial(
                    Coeff::var(Var::Fresh { tag, indices }),
                    Exponent::zero(),
                ))
            }
            Tok::Ident(name) => {
                let err = self.error(format!("a known binding (no binding named '{name}')"));
                self.bump();
                match self.env.iter().rev().find(|(n, _)| *n == name) {
                    Some((_, s)) => Ok(s.clone()),
                    None => Err(err),
                }
            }
            _ => Err(self.error("a series term")),
        }
    }

    // -- Sum families --------------------------------------------------------

    fn sum(&mut self) -> Result<Series, ParseError> {
        self.keyword("Sum")?;
        self.punct('[')?;
        let mut names: Binders = Vec::new();
        let mut dims: Vec<Dim> = Vec::new();
        loop {
            let at = self.pos;
            let name = self.binding_name()?;
            if names.iter().any(|(n, _)| *n == name) {
                return Err(positioned(&self.toks[at], "a distinct binder name"));
            }
            self.punct(':')?;
            let ladder = self.ladder()?;
            let start = if self.eat_punct('@') { self.small_nat()? } else { 0 };
            names.push((name, ladder.clone()));
            dims.push(Dim { ladder, start });
            if !self.eat_punct(',') {
                break;
            }
        }
        self.punct(']')?;
        self.punct('(')?;

        let mut scalar = Coeff::one();
        let mut factors: Vec<CoeffFactor> = Vec::new();
        let (base, used);
        loop {
            if self.peek_ident("t") {
                self.bump();
                self.punct('^')?;
                self.punct('(')?;
                let at = self.pos;
                let (b, u) = self.expexpr(&names)?;
                self.punct(')')?;
                if b.sign().is_gt() {
                    return Err(positioned(&self.toks[at], "a nonpositive base exponent"));
                }
                base = b;
                used = u;
                break;
            } else if self.peek_ident("alt") {
                factors.push(self.alt_factor(&names)?);
            } else if self.peek_ident("fresh") {
                factors.push(self.fresh_factor(&names, dims.len())?);
            } else {
                let at = self.pos;
                let f = self.scalar_factor()?;
                let c = as_constant(&f)
                    .ok_or_else(|| positioned(&self.toks[at], "a constant coefficient"))?;
                scalar = scalar.mul(&c);
            }
            self.punct('*')?;
        }
        self.punct(')')?;

        for (i, (name, _)) in names.iter().enumerate() {
            if !used[i] {
                return Err(self.error(format!("the exponent to reference binder '{name}'")));
            }
        }
        Ok(Series::from_families(vec![Family {
            base,
            dims,
            scalar,
            factors,
        }]))
    }

    fn ladder(&mut self) -> Result<Ladder, ParseError> {
        let kind = self.ident()?;
        self.punct('(')?;
        let at = self.pos;
        let (scale, _) = self.expexpr(&[])?;
        if !scale.sign().is_gt() {
            return Err(positioned(&self.toks[at], "a positive scale"));
        }
        let ladder = match kind.as_str() {
            "harm" => Ladder::Harmonic { scale },
            "geo" => {
                self.punct(',')?;
                let at = self.pos;
                let ratio = self.rational()?;
                if !ratio.is_positive() || ratio >= BigRational::one() {
                    return Err(positioned(&self.toks[at], "a ratio strictly between 0 and 1"));
                }
                Ladder::Geometric { scale, ratio }
            }
            "iharm" => {
                self.punct(',')?;
                let at = self.pos;
                let seed = self.small_nat()?;
                let seed = u32::try_from(seed)
                    .ok()
                    .and_then(|s| s.checked_add(self.seed_offset))
                    .filter(|s| *s < 16)
                    .ok_or_else(|| positioned(&self.toks[at], "a seed below 16"))?;
                Ladder::IndepHarmonic { scale, seed }
            }
            _ => return Err(self.error("'harm', 'geo', or 'iharm'")),
        };
        self.punct(')')?;
        Ok(ladder)
    }

    fn alt_factor(&mut self, names: &[(String, Ladder)]) -> Result<CoeffFactor, ParseError> {
        self.keyword("alt")?;
        self.punct('(')?;
        let mut values = Vec::new();
        loop {
            let at = self.pos;
            let f = self.series()?;
            let c = as_constant(&f)
                .ok_or_else(|| positioned(&self.toks[at], "a constant cycle value"))?;
            values.push(c);
            if !self.eat_punct(',') {
                break;
            }
        }
        self.punct(';')?;
        let dim = self.binder_ref(names)?;
        self.punct(')')?;
        Ok(CoeffFactor::Cycle { dim, values })
    }

    fn fresh_factor(&mut self, names: &[(String, Ladder)], ndims: usize) -> Result<CoeffFactor, ParseError> {
        self.keyword("fresh")?;
        self.punct('(')?;
        let tag = self.small_nat()?;
        let comps = if self.eat_punct(';') {
            let mut comps = Vec::new();
            loop {
                match self.peek() {
                    Tok::Nat(_) => comps.push(FreshComp::Const(self.small_nat()?)),
                    _ => comps.push(FreshComp::Dim(self.binder_ref(names)?)),
                }
                if !self.eat_punct(',') {
                    break;
                }
            }
            comps
        } else {
            (0..ndims).map(FreshComp::Dim).collect()
        };
        self.punct(')')?;
        Ok(CoeffFactor::Fresh { tag, comps })
    }

    fn binder_ref(&mut self, names: &[(String, Ladder)]) -> Result<usize, ParseError> {
        let err = self.error("a binder name in scope");
        let name = self.ident()?;
        names.iter().position(|(n, _)| *n == name).ok_or(err)
    }

    /// A scalar coefficient factor inside a `Sum` body: a series factor,
    /// optionally divided, but never crossing a `*` (which separates factors).
    fn scalar_factor(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Punct('/') {
            let at = self.pos;
            self.bump();
            let rhs = self.factor()?;
            let c = as_constant(&rhs)
                .filter(|c| !c.is_zero())
                .ok_or_else(|| positioned(&self.toks[at], "a nonzero constant divisor"))?;
            acc = acc.scale(&Coeff::one().div(&c));
        }
        Ok(acc)
    }

    // -- exponent expressions -------------------------------------------------

    /// Parses the body of `t^(...)`: a signed sum of rational/sqrt constants,
    /// `s(name)` ladder references, and the shorthand `-c/(name+1)` for a
    /// harmonic binder of scale `c`. Returns the constant part and the per-dim
    /// usage flags (each binder must be referenced exactly once overall).
    fn expexpr(&mut self, names: &[(String, Ladder)]) -> Result<(Exponent, Vec<bool>), ParseError> {
        let mut base = Exponent::zero();
        let mut used = vec![false; names.len()];
        let mut first = true;
        loop {
            let negative = if first {
                first = false;
                self.eat_punct('-')
            } else if self.eat_punct('+') {
                false
            } else if self.eat_punct('-') {
                true
            } else {
                return Ok((base, used));
            };
            self.exp_term(names, negative, &mut base, &mut used)?;
        }
    }

    fn exp_term(
        &mut self,
        names: &[(String, Ladder)],
        negative: bool,
        base: &mut Exponent,
        used: &mut [bool],
    ) -> Result<(), ParseError> {
        if self.peek_ident("s") && *self.peek2() == Tok::Punct('(') {
            let at = self.pos;
            self.bump();
            self.punct('(')?;
            let dim = self.binder_ref(names)?;
            self.punct(')')?;
            if negative {
                return Err(positioned(&self.toks[at], "an unnegated ladder reference"));
            }
            if used[dim] {
                return Err(positioned(&self.toks[at], "each binder at most once"));
            }
            used[dim] = true;
            return Ok(());
        }
        if self.peek_ident("sqrt") {
            let e = self.sqrt_term(BigRational::one())?;
            *base = base.add(&if negative { e.neg() } else { e });
            return Ok(());
        }
        let at = self.pos;
        let num = self.nat()?;
        let mut q = BigRational::from_integer(num);
        if self.eat_punct('/') {
            if *self.peek() == Tok::Punct('(') {
                // Harmonic shorthand: `-c/(name+1)` is rung `n` of `harm(c)`.
                self.bump();
                let dim = self.binder_ref(names)?;
                self.punct('+')?;
                let one = self.nat()?;
                self.punct(')')?;
                if !one.is_one() || !negative {
                    return Err(positioned(&self.toks[at], "the shorthand -c/(name+1)"));
                }
                let want = Exponent::from_rational(q);
                match &names[dim].1 {
                    Ladder::Harmonic { scale } if *scale == want => {}
                    _ => {
                        return Err(positioned(
                            &self.toks[at],
                            "a numerator matching the binder's harmonic scale",
                        ))
                    }
                }
                if used[dim] {
                    return Err(positioned(&self.toks[at], "each binder at most once"));
                }
                used[dim] = true;
                return Ok(());
            }
            let den = self.nat()?;
            if den.is_zero() {
                return Err(positioned(&self.toks[at], "a nonzero denominator"));
            }
            q /= BigRational::from_integer(den);
        }
        let e = if self.eat_punct('*') {
            self.sqrt_term(q)?
        } else {
            Exponent::from_rational(q)
        };
        *base = base.add(&if negative { e.neg() } else { e });
        Ok(())
    }

    fn sqrt_term(&mut self, scale: BigRational) -> Result<Exponent, ParseError> {
        self.keyword("sqrt")?;
        self.punct('(')?;
        let d = self.small_nat()?;
        self.punct(')')?;
        Ok(Exponent::sqrt_scaled(scale, d))
    }

    // -- misc -----------------------------------------------------------------

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.nat()?;
        let mut q = BigRational::from_integer(num);
        if self.eat_punct('/') {
            let at = self.pos;
            let den = self.nat()?;
            if den.is_zero() {
                return Err(positioned(&self.toks[at], "a nonzero denominator"));
            }
            q /= BigRational::from_integer(den);
        }
        Ok(q)
    }
}

fn positioned(at: &Lexed, expected: impl Into<String>) -> ParseError {
    ParseError {
        line: at.line,
        column: at.column,
        expected: expected.into(),
    }
}

fn is_fresh_var_name(name: &str) -> bool {
    let mut cs = name.chars();
    cs.next() == Some('F') && {
        let rest = cs.as_str();
        !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
    }
}

/// `Some(c)` when the series is the constant `c` (including zero).
fn as_constant(s: &Series) -> Option<Coeff> {
    match s.families() {
        [] => Some(Coeff::zero()),
        [f] if f.dims.is_empty() && f.base.is_zero() => Some(f.scalar.clone()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

/// The canonical text form; `parse_series(format_series(s))` reconstructs `s`.
pub fn format_series(s: &Series) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, f) in s.families().iter().enumerate() {
        let (neg, body) = format_family(f);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_series(self))
    }
}

/// Renders one family as `(sign, magnitude text)`; the sign is split out so
/// the series joiner can use ` - `.
fn format_family(f: &Family) -> (bool, String) {
    let (neg, scalar) = split_sign(&f.scalar);
    if f.dims.is_empty() {
        if f.base.is_zero() {
            return (neg, coeff_atom(&scalar));
        }
        if scalar.is_one() {
            return (neg, format!("t^({})", f.base));
        }
        return (neg, format!("{} * t^({})", coeff_atom(&scalar), f.base));
    }
    let mut out = String::from("Sum[");
    for (i, d) in f.dims.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("n{i}: "));
        match &d.ladder {
            Ladder::Harmonic { scale } => out.push_str(&format!("harm({scale})")),
            Ladder::Geometric { scale, ratio } => out.push_str(&format!("geo({scale}, {ratio})")),
            Ladder::IndepHarmonic { scale, seed } => {
                out.push_str(&format!("iharm({scale}, {seed})"))
            }
        }
        if d.start > 0 {
            out.push_str(&format!(" @ {}", d.start));
        }
    }
    out.push_str("](");
    out.push_str(&coeff_atom(&scalar));
    for factor in &f.factors {
        out.push_str(" * ");
        match factor {
            CoeffFactor::Cycle { dim, values } => {
                out.push_str("alt(");
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&coeff_atom(v));
                }
                out.push_str(&format!("; n{dim})"));
            }
            CoeffFactor::Fresh { tag, comps } => {
                out.push_str(&format!("fresh({tag}; "));
                for (i, c) in comps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    match c {
                        FreshComp::Dim(d) => out.push_str(&format!("n{d}")),
                        FreshComp::Const(k) => out.push_str(&k.to_string()),
                    }
                }
                out.push(')');
            }
        }
    }
    out.push_str(" * t^(");
    let mut first = true;
    if !f.base.is_zero() {
        out.push_str(&f.base.to_string());
        first = false;
    }
    for i in 0..f.dims.len() {
        if !first {
            out.push_str(" + ");
        }
        first = false;
        out.push_str(&format!("s(n{i})"));
    }
    if first {
        out.push('0');
    }
    out.push_str("))");
    (neg, out)
}

/// Splits a rational sign off a coefficient so the renderer can print ` - `.
fn split_sign(c: &Coeff) -> (bool, Coeff) {
    match c.as_rational() {
        Some(q) if q.is_negative() => (true, c.neg()),
        _ => (false, c.clone()),
    }
}

/// A coefficient in factor position: bare when it is a rational or a single
/// variable, parenthesized otherwise.
fn coeff_atom(c: &Coeff) -> String {
    if let Some(q) = c.as_rational() {
        return q.to_string();
    }
    if let Some((q, v)) = c.as_scaled_var() {
        if q.is_one() {
            return Coeff::var(v).to_string();
        }
    }
    format!("({c})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;

    fn parse(text: &str) -> Series {
        parse_series(text).unwrap()
    }

    fn roundtrip(s: &Series) {
        let text = format_series(s);
        let back = parse_series(&text).unwrap_or_else(|e| panic!("{e} in {text:?}"));
        assert_eq!(&back, s, "round-trip through {text:?}");
        assert_eq!(format_series(&back), text, "canonical form is a fixpoint");
    }

    #[test]
    fn harmonic_family_parses() {
        let b = parse("Sum[n: harm(1)](1 * t^(-1/(n+1)))");
        assert_eq!(b.families().len(), 1);
        let f = &b.families()[0];
        assert_eq!(f.dims.len(), 1);
        assert!(f.base.is_zero());
        assert_eq!(
            f.dims[0].ladder,
            Ladder::Harmonic { scale: Exponent::from_int(1) }
        );
        assert_eq!(b.ot().unwrap(), Ordinal::omega());
        roundtrip(&b);
    }

    #[test]
    fn alternating_iharm_family_parses() {
        let c = parse("Sum[n: iharm(1,0)](alt(1,-1;n) * t^(s(n)))");
        let f = &c.families()[0];
        assert_eq!(f.dims[0].ladder, Ladder::IndepHarmonic { scale: Exponent::from_int(1), seed: 0 });
        assert_eq!(
            f.factors,
            vec![CoeffFactor::Cycle { dim: 0, values: vec![Coeff::from_int(1), Coeff::from_int(-1)] }]
        );
        assert_eq!(c.coefficient_at(&Ladder::IndepHarmonic { scale: Exponent::from_int(1), seed: 0 }.value(3)), Coeff::from_int(-1));
        roundtrip(&c);
    }

    #[test]
    fn monomial_sum_parses() {
        let d = parse("t^(-1) + 1");
        assert_eq!(d.families().len(), 2);
        assert_eq!(d.ot().unwrap(), Ordinal::from_nat(2));
        roundtrip(&d);
    }

    #[test]
    fn constant_arithmetic_and_division() {
        let s = parse("3/4 * t^(-2) - (1 - 1/2) * t^(-2)");
        assert_eq!(s.coefficient_at(&Exponent::from_int(-2)), Coeff::from_rational(&num_rational::BigRational::new(1.into(), 4.into())));
        let z = parse("X[1]^2 * t^(-1) - X[1] * X[1] * t^(-1)");
        assert!(z.is_zero());
        let half = parse("t^(-1)/2");
        assert_eq!(half.coefficient_at(&Exponent::from_int(-1)), Coeff::from_rational(&num_rational::BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn programs_bind_and_reference() {
        let prog = "let b = Sum[n: harm(1)](1 * t^(-1/(n+1)));\nlet c = b + 1;\nlet d = b * c;";
        let bindings = parse_program(prog).unwrap();
        assert_eq!(bindings.len(), 3);
        let (name, c) = &bindings[1];
        assert_eq!(name, "c");
        assert_eq!(c.ot().unwrap(), Ordinal::omega().add(&Ordinal::one()).unwrap());
    }

    #[test]
    fn seed_offset_shifts_iharm() {
        let base = parse("Sum[n: iharm(1,0)](1 * t^(s(n)))");
        let shifted = parse_series_with_seed("Sum[n: iharm(1,0)](1 * t^(s(n)))", 3).unwrap();
        assert_ne!(base, shifted);
        let direct = parse("Sum[n: iharm(1,3)](1 * t^(s(n)))");
        assert_eq!(shifted, direct);
    }

    #[test]
    fn positioned_errors() {
        let e = parse_series("t^(1/2)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse_program("let b = t^(-1);\nlet c = b +;").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 12);
        let e = parse_series("Sum[n: harm(1)](1 * t^(-1))").unwrap_err();
        assert!(e.expected.contains("binder 'n'"), "{e}");
        let e = parse_series("Sum[n: harm(2)](1 * t^(-1/(n+1)))").unwrap_err();
        assert!(e.expected.contains("harmonic scale"), "{e}");
        let e = parse_series("b + 1").unwrap_err();
        assert!(e.expected.contains("no binding named 'b'"), "{e}");
    }

    #[test]
    fn roundtrip_survives_algebra() {
        let b = parse("Sum[n: iharm(1,0)](1 * t^(s(n)))");
        let c = parse("Sum[n: iharm(1,1)](alt(1,-1;n) * t^(-1 + s(n)))");
        roundtrip(&b.mul(&c));
        roundtrip(&b.add(&c));
        let gamma = Ladder::IndepHarmonic { scale: Exponent::from_int(1), seed: 0 }.value(4);
        roundtrip(&b.truncate(&gamma));
        roundtrip(&b.translated_truncate(&gamma));
    }

    #[test]
    fn roundtrip_fresh_and_multidim() {
        let g = parse("Sum[m: harm(1), n: geo(1, 1/2)](fresh(7) * t^(-1/(m+1) + s(n)))");
        let f = &g.families()[0];
        assert_eq!(f.factors, vec![CoeffFactor::Fresh { tag: 7, comps: vec![FreshComp::Dim(0), FreshComp::Dim(1)] }]);
        roundtrip(&g);
        // Truncation pins indices, leaving Const components and nonzero starts.
        let gamma = Exponent::from_frac(-1, 3);
        roundtrip(&g.truncate(&gamma));
        // Scaled by a variable: scalar is no longer rational.
        roundtrip(&g.scale(&Coeff::var(Var::User(2))));
    }

    #[test]
    fn roundtrip_irrational_scales() {
        let s = parse("Sum[n: harm(sqrt(2))](1 * t^(-sqrt(3) + s(n)))");
        let f = &s.families()[0];
        assert_eq!(f.base, Exponent::sqrt(3).neg());
        roundtrip(&s);
        roundtrip(&parse("2 * t^(-3/2*sqrt(5)) - t^(-1/8)"));
    }

    #[test]
    fn format_is_canonical_across_presentations() {
        let a = parse("Sum[n: harm(1)](1 * t^(-1/(n+1)))");
        let b = parse("Sum[k: harm(1)](1/2 * t^(s(k))) + Sum[k: harm(1)](1/2 * t^(s(k)))");
        assert_eq!(format_series(&a), format_series(&b));
    }
}
