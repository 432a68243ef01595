//! Multivariate polynomials over GF(2) in the jet variables
//! x_i, y_i, z_i (plus internal auxiliary variables).
//!
//! Coefficients are implicit: a polynomial is a finite set of monomials and
//! addition is symmetric difference, which is exactly GF(2) arithmetic.
//! The term set is kept in a fixed canonical order (graded reverse
//! lexicographic with x_m > ... > x_0 > y_m > ... > y_0 > z_m > ... > z_0 >
//! auxiliaries), so printing, parsing and serialization are bit-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::EngineError;
use crate::field::{FieldElem, GfField};

/// Exponents are capped; overflowing this in any operation is a hard error
/// (it would indicate a runaway computation, not a meaningful result).
pub const MAX_EXP: u16 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    Y,
    Z,
    /// Internal-only variables (saturation/radical witnesses). Never printed
    /// in user-facing results.
    Aux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId {
    pub family: Family,
    pub index: u32,
}

impl VarId {
    pub fn x(index: u32) -> Self {
        VarId { family: Family::X, index }
    }
    pub fn y(index: u32) -> Self {
        VarId { family: Family::Y, index }
    }
    pub fn z(index: u32) -> Self {
        VarId { family: Family::Z, index }
    }
    pub fn aux(index: u32) -> Self {
        VarId { family: Family::Aux, index }
    }

    /// Total order on variables used for printing: x's first (descending
    /// index), then y's, then z's, then auxiliaries (ascending slot).
    /// Smaller key = earlier in print order = higher precedence.
    pub fn print_key(&self) -> (u8, i64) {
        match self.family {
            Family::X => (0, -(self.index as i64)),
            Family::Y => (1, -(self.index as i64)),
            Family::Z => (2, -(self.index as i64)),
            Family::Aux => (3, self.index as i64),
        }
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.print_key().cmp(&other.print_key())
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.family {
            Family::X => "x",
            Family::Y => "y",
            Family::Z => "z",
            Family::Aux => "w",
        };
        write!(f, "{}{}", letter, self.index)
    }
}

impl serde::Serialize for VarId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A power product. Pairs are sorted by print order and exponents are
/// nonzero; the empty product is the monomial 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pairs: Vec<(VarId, u16)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { pairs: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { pairs: vec![(v, 1)] }
    }

    /// Build from (variable, exponent) pairs; repeated variables have their
    /// exponents added. Exponents above [`MAX_EXP`] are a hard error.
    pub fn from_pairs(iter: impl IntoIterator<Item = (VarId, u16)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in iter {
            if e == 0 {
                continue;
            }
            *map.entry(v).or_insert(0) += e as u32;
        }
        let pairs = map
            .into_iter()
            .map(|(v, e)| {
                assert!(e <= MAX_EXP as u32, "exponent overflow on {v}: {e} > {MAX_EXP}");
                (v, e as u16)
            })
            .collect();
        Monomial { pairs }
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, v: VarId) -> u16 {
        self.pairs.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.exponent(v) > 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u16)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn support_len(&self) -> usize {
        self.pairs.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.pairs.iter().chain(other.pairs.iter()).copied())
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        let mut rest = self.pairs.iter().copied().collect::<BTreeMap<_, _>>();
        for &(v, e) in &other.pairs {
            let have = rest.remove(&v)?;
            if have < e {
                return None;
            }
            if have > e {
                rest.insert(v, have - e);
            }
        }
        pairs.extend(rest);
        Some(Monomial { pairs })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.try_div(self).is_some()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<VarId, u16> = self.pairs.iter().copied().collect();
        for &(v, e) in &other.pairs {
            let cur = map.entry(v).or_insert(0);
            *cur = (*cur).max(e);
        }
        Monomial { pairs: map.into_iter().collect() }
    }

    /// If the monomial is a single variable to the first power, return it.
    pub fn as_single_var(&self) -> Option<VarId> {
        match self.pairs.as_slice() {
            [(v, 1)] => Some(*v),
            _ => None,
        }
    }

    /// Canonical graded-reverse-lexicographic comparison (print precedence).
    fn canonical_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk variables from lowest precedence upward; first disagreement:
        // the smaller exponent belongs to the larger monomial.
        let mut a = self.pairs.iter().rev().peekable();
        let mut b = other.pairs.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                        a.next();
                        b.next();
                    } else if va > vb {
                        // va has lower precedence and appears only in self.
                        let _ = ea;
                        return Ordering::Less;
                    } else {
                        return Ordering::Greater;
                    }
                }
                // Remaining variables appear in only one monomial; that
                // monomial has a positive exponent at a lower-precedence spot.
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.pairs {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial over GF(2): the set of monomials with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeSet::new() }
    }

    pub fn one() -> Self {
        Polynomial::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Polynomial { terms }
    }

    pub fn var(v: VarId) -> Self {
        Polynomial::from_monomial(Monomial::var(v))
    }

    /// Sum of monomials with GF(2) cancellation: a monomial appearing an
    /// even number of times vanishes.
    pub fn from_terms(iter: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Polynomial::zero();
        for m in iter {
            p.toggle(m);
        }
        p
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().unwrap().is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order; the last one is the leading term.
    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|m| m.degree()).max()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|t| t.mul(m)).collect() }
    }

    /// Characteristic-2 squaring: cross terms cancel, so the square is the
    /// term-wise square.
    pub fn square(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial::from_pairs(m.iter().map(|(v, e)| (v, e.checked_mul(2).unwrap()))))
                .collect(),
        }
    }

    pub fn pow(&self, e: u16) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// All variables occurring in the polynomial.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.iter().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|m| m.contains(v))
    }

    /// Largest index of the given family occurring in the polynomial.
    pub fn max_index(&self, family: Family) -> Option<u32> {
        self.vars().into_iter().filter(|v| v.family == family).map(|v| v.index).max()
    }

    /// Set every variable matched by `killed` to zero, i.e. drop every
    /// monomial containing one. This is reduction modulo a coordinate ideal.
    pub fn drop_monomials_containing(&self, killed: impl Fn(VarId) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|m| !m.iter().any(|(v, _)| killed(v)))
                .cloned()
                .collect(),
        }
    }

    /// Simultaneous substitution: variables mapped to `None` stay themselves.
    pub fn substitute(&self, map: impl Fn(VarId) -> Option<Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for m in &self.terms {
            let mut term = Polynomial::one();
            for (v, e) in m.iter() {
                let base = match map(v) {
                    Some(p) => p,
                    None => Polynomial::var(v),
                };
                term = term.mul(&base.pow(e));
            }
            out = out.add(&term);
        }
        out
    }

    /// Injective variable renaming (index shifts, family swaps).
    pub fn rename_vars(&self, f: impl Fn(VarId) -> VarId) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|m| Monomial::from_pairs(m.iter().map(|(v, e)| (f(v), e)))),
        )
    }

    /// Evaluate over GF(2^k) with the given variable assignment.
    pub fn evaluate(&self, field: &GfField, assign: impl Fn(VarId) -> FieldElem) -> FieldElem {
        let mut acc: FieldElem = 0;
        for m in &self.terms {
            let mut prod: FieldElem = 1;
            for (v, e) in m.iter() {
                let val = assign(v);
                if val == 0 {
                    prod = 0;
                    break;
                }
                prod = field.mul(prod, field.pow(val, e as u64));
            }
            acc = field.add(acc, prod);
        }
        acc
    }

    /// Parse the canonical grammar: `0`, or `±`-separated terms, each `1` or
    /// a `*`-separated product of `x<i>`/`y<i>`/`z<i>` factors with optional
    /// `^<e>`. `-` is accepted as `+` (characteristic 2).
    pub fn parse(text: &str) -> Result<Polynomial, EngineError> {
        Parser { bytes: text.as_bytes(), pos: 0 }.parse_poly()
    }

    /// Like [`Polynomial::parse`], also rejecting indices above the session
    /// order bound `m`.
    pub fn parse_bounded(text: &str, m: u32) -> Result<Polynomial, EngineError> {
        let p = Polynomial::parse(text)?;
        for v in p.vars() {
            if v.index > m {
                return Err(EngineError::IndexOutOfRange { index: v.index, m });
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> EngineError {
        EngineError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, EngineError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn factor(&mut self) -> Result<(VarId, u16), EngineError> {
        let family = match self.peek() {
            Some(b'x') => Family::X,
            Some(b'y') => Family::Y,
            Some(b'z') => Family::Z,
            _ => return Err(self.err("expected a variable (x<i>, y<i> or z<i>)")),
        };
        self.pos += 1;
        let index = self.number()? as u32;
        let mut exp: u16 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            if e == 0 || e > MAX_EXP as u64 {
                return Err(self.err("exponent must be between 1 and 64"));
            }
            exp = e as u16;
        }
        Ok((VarId { family, index }, exp))
    }

    fn term(&mut self) -> Result<Monomial, EngineError> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut pairs = vec![self.factor()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                pairs.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(Monomial::from_pairs(pairs))
    }

    fn parse_poly(&mut self) -> Result<Polynomial, EngineError> {
        self.skip_ws();
        if self.peek() == Some(b'0') {
            self.pos += 1;
            self.skip_ws();
            if self.pos != self.bytes.len() {
                return Err(self.err("trailing input after 0"));
            }
            return Ok(Polynomial::zero());
        }
        let mut p = Polynomial::zero();
        p.toggle(self.term()?);
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') | Some(b'-') => {
                    self.pos += 1;
                    p.toggle(self.term()?);
                }
                _ => return Err(self.err("expected + or end of input")),
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn addition_is_symmetric_difference() {
        // (x1 + y1) + (y1 + z1) = x1 + z1 over GF(2).
        let sum = p("x1 + y1").add(&p("y1 + z1"));
        assert_eq!(sum, p("x1 + z1"));
        // p + p = 0.
        assert!(p("x1*y2 + z3^2").add(&p("x1*y2 + z3^2")).is_zero());
    }

    #[test]
    fn multiplication_expands_and_cancels() {
        // (y1 + z1)^2 = y1^2 + z1^2 in characteristic 2.
        let sq = p("y1 + z1").mul(&p("y1 + z1"));
        assert_eq!(sq, p("y1^2 + z1^2"));
        assert_eq!(sq, p("y1 + z1").square());
        // y1*z1*(y1 + z1) spelled out.
        let prod = p("y1*z1").mul(&p("y1 + z1"));
        assert_eq!(prod, p("y1^2*z1 + y1*z1^2"));
    }

    #[test]
    fn canonical_print_order() {
        // Graded reverse lex, descending, with precedence
        // x_m > .. > x_0 > y_m > .. > y_0 > z_m > .. > z_0; degree dominates.
        let q = p("y0^2*z0 + x0^2 + y0*z0^2");
        assert_eq!(q.to_string(), "y0^2*z0 + y0*z0^2 + x0^2");
        assert_eq!(p("z1^2*y2 + x2^2").to_string(), "y2*z1^2 + x2^2");
        assert_eq!(p("x1 + x1^2").to_string(), "x1^2 + x1");
        // Same degree: the smaller exponent on the lowest-precedence
        // variable wins, so y2^2*z1 precedes y3*z1^2.
        assert_eq!(p("y3*z1^2 + y2^2*z1").to_string(), "y2^2*z1 + y3*z1^2");
    }

    #[test]
    fn display_parse_round_trip() {
        for s in [
            "0",
            "1",
            "y0^2*z0 + y0*z0^2 + x0^2",
            "y2*z1^2 + x2^2",
            "y2^2*z1 + y3*z1^2",
            "x12^64 + y1",
        ] {
            let q = p(s);
            assert_eq!(q.to_string(), s);
            assert_eq!(Polynomial::parse(&q.to_string()).unwrap(), q);
        }
    }

    #[test]
    fn minus_is_plus() {
        assert_eq!(p("x1 - y1"), p("x1 + y1"));
    }

    #[test]
    fn parse_errors_carry_position() {
        match Polynomial::parse("x1 + q2") {
            Err(EngineError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(Polynomial::parse("x1^0").is_err());
        assert!(Polynomial::parse("x1^65").is_err());
        assert!(Polynomial::parse("x1 *").is_err());
    }

    #[test]
    fn parse_bounded_rejects_large_indices() {
        assert!(Polynomial::parse_bounded("x3 + y1", 5).is_ok());
        match Polynomial::parse_bounded("x6", 5) {
            Err(EngineError::IndexOutOfRange { index: 6, m: 5 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn substitution_and_rename() {
        // z1 -> y1 + z1 on y1*z1.
        let q = p("y1*z1").substitute(|v| {
            (v == VarId::z(1)).then(|| p("y1 + z1"))
        });
        assert_eq!(q, p("y1^2 + y1*z1"));
        // Swap y and z.
        let swapped = p("y2^2*z1 + y3*z1^2").rename_vars(|v| match v.family {
            Family::Y => VarId::z(v.index),
            Family::Z => VarId::y(v.index),
            _ => v,
        });
        assert_eq!(swapped, p("y1^2*z3 + y1*z2^2"));
    }

    #[test]
    fn evaluate_over_gf4() {
        // x0^2 + y0^2*z0 + y0*z0^2 + x0*y0*z0 at (0, ω, ω^2) over GF(4)
        // evaluates to ω^4 + ω^5 = ω + ω^2 = 1 (table-driven check).
        let f = GfField::new(2).unwrap();
        let w = 0b10;
        let w2 = f.mul(w, w);
        let g0 = p("x0^2 + y0^2*z0 + y0*z0^2 + x0*y0*z0");
        let val = g0.evaluate(&f, |v| match (v.family, v.index) {
            (Family::X, 0) => 0,
            (Family::Y, 0) => w,
            (Family::Z, 0) => w2,
            _ => 0,
        });
        assert_eq!(val, 1);
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn exponent_overflow_is_a_hard_error() {
        let big = Monomial::from_pairs([(VarId::x(1), 40)]);
        let _ = big.mul(&big);
    }

    #[test]
    fn leading_term_grevlex_examples() {
        // Among same-degree monomials with y-precedence below x, grevlex
        // puts y2^2*z1 above y3*z1^2 (reverse-lex on the lowest variable).
        let q = p("y2^2*z1 + y3*z1^2");
        assert_eq!(q.leading().unwrap().to_string(), "y2^2*z1");
        // Degree wins first.
        assert_eq!(p("x2^2 + y2*z1^2").leading().unwrap().to_string(), "y2*z1^2");
    }
}
