//! Free graded-commutative algebras over a field.
//!
//! An [`AlgebraSpec`] fixes an ordered list of generators with positive
//! degrees. Even generators are polynomial, odd generators exterior. A
//! [`Monomial`] is kept in normal form: factors sorted by generator index,
//! odd exponents at most 1. Multiplying two monomials merges the factor lists
//! and picks up the Koszul sign `(-1)^t`, where `t` counts the odd-odd
//! transpositions needed to restore index order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    pub index: usize,
}

impl GeneratorSpec {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    generators: Vec<GeneratorSpec>,
    by_name: BTreeMap<String, usize>,
}

/// `+1` or `-1`.
pub type Sign = i8;

impl AlgebraSpec {
    /// Generators get indices in input order. Names must be distinct and
    /// degrees at least 1, so every graded piece is finite dimensional.
    pub fn new<S: AsRef<str>>(generators: &[(S, i64)]) -> Result<Arc<Self>> {
        let mut gens = Vec::with_capacity(generators.len());
        let mut by_name = BTreeMap::new();
        for (index, (name, degree)) in generators.iter().enumerate() {
            let name = name.as_ref().to_string();
            if *degree < 1 {
                return Err(Error::NonPositiveDegree {
                    name,
                    degree: *degree,
                });
            }
            if by_name.insert(name.clone(), index).is_some() {
                return Err(Error::DuplicateGenerator(name));
            }
            let degree = u32::try_from(*degree).map_err(|_| {
                Error::InvalidArgument(format!("degree {degree} of `{name}` is too large"))
            })?;
            gens.push(GeneratorSpec {
                name,
                degree,
                index,
            });
        }
        Ok(Arc::new(Self {
            generators: gens,
            by_name,
        }))
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn generator(&self, name: &str) -> Result<&GeneratorSpec> {
        self.index_of(name)
            .map(|i| &self.generators[i])
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn is_odd(&self, index: usize) -> bool {
        self.generators[index].is_odd()
    }

    /// Builds a normal-form monomial from `(generator index, exponent)`
    /// pairs in any order. Returns `None` when an odd generator ends up with
    /// exponent ≥ 2 (the monomial vanishes); the sign from reordering is
    /// discarded, use [`AlgebraSpec::multiply_monomials`] when it matters.
    pub fn monomial(&self, factors: &[(usize, u32)]) -> Option<Monomial> {
        let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
        for &(i, e) in factors {
            assert!(i < self.len(), "generator index {i} out of range");
            if e > 0 {
                *exps.entry(i).or_default() += e;
            }
        }
        if exps.iter().any(|(&i, &e)| self.is_odd(i) && e > 1) {
            return None;
        }
        let factors: Vec<(usize, u32)> = exps.into_iter().collect();
        let degree = factors
            .iter()
            .map(|&(i, e)| e * self.generators[i].degree)
            .sum();
        Some(Monomial { factors, degree })
    }

    /// Product in normal form with its Koszul sign, or `None` if it
    /// vanishes because an odd generator would be squared.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Sign, Monomial)> {
        let mut out = Vec::with_capacity(a.factors.len() + b.factors.len());
        // Number of odd factors of `a` not yet emitted.
        let mut odd_left_in_a = a.factors.iter().filter(|(i, _)| self.is_odd(*i)).count();
        let mut transpositions = 0usize;
        let (mut ia, mut ib) = (0, 0);
        while ia < a.factors.len() || ib < b.factors.len() {
            let take_a = match (a.factors.get(ia), b.factors.get(ib)) {
                (Some(&(ga, _)), Some(&(gb, _))) => {
                    if ga == gb {
                        if self.is_odd(ga) {
                            return None;
                        }
                        let (g, ea) = a.factors[ia];
                        out.push((g, ea + b.factors[ib].1));
                        ia += 1;
                        ib += 1;
                        continue;
                    }
                    ga < gb
                }
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_a {
                let (g, e) = a.factors[ia];
                if self.is_odd(g) {
                    odd_left_in_a -= 1;
                }
                out.push((g, e));
                ia += 1;
            } else {
                let (g, e) = b.factors[ib];
                if self.is_odd(g) {
                    transpositions += odd_left_in_a;
                }
                out.push((g, e));
                ib += 1;
            }
        }
        let sign = if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        };
        Some((
            sign,
            Monomial {
                factors: out,
                degree: a.degree + b.degree,
            },
        ))
    }

    /// All monomials of total degree `n`, in descending lexicographic order
    /// of their exponent vectors (generator order). Degree 0 gives `[1]`.
    pub fn degree_basis(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, u32)> = Vec::new();
        self.fill_basis(0, n, &mut stack, &mut out);
        out
    }

    fn fill_basis(
        &self,
        index: usize,
        remaining: u32,
        stack: &mut Vec<(usize, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            let degree = stack
                .iter()
                .map(|&(i, e)| e * self.generators[i].degree)
                .sum();
            out.push(Monomial {
                factors: stack.clone(),
                degree,
            });
            return;
        }
        if index == self.generators.len() {
            return;
        }
        let deg = self.generators[index].degree;
        let max_exp = if self.is_odd(index) {
            1.min(remaining / deg)
        } else {
            remaining / deg
        };
        for e in (0..=max_exp).rev() {
            if e > 0 {
                stack.push((index, e));
            }
            self.fill_basis(index + 1, remaining - e * deg, stack, out);
            if e > 0 {
                stack.pop();
            }
        }
    }

    /// Index lookup for a degree basis.
    pub fn basis_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
        basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect()
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors
            .iter()
            .map(|&(i, e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A normal-form product of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(usize, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
            degree: 0,
        }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.factors
            .iter()
            .find(|(i, _)| *i == index)
            .map_or(0, |(_, e)| *e)
    }

    /// Number of generator factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

/// Degree first, then descending lexicographic order on exponent vectors.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (mut a, mut b) = (self.factors.iter(), other.factors.iter());
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    // the shorter list has a zero where the other is positive
                    (None, Some(_)) => return Ordering::Greater,
                    (Some(_), None) => return Ordering::Less,
                    (Some(&(ia, ea)), Some(&(ib, eb))) => {
                        if ia != ib {
                            // the lower index is present (positive) in one only
                            return if ia < ib {
                                Ordering::Less
                            } else {
                                Ordering::Greater
                            };
                        }
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of monomials with nonzero coefficients.
#[derive(Debug, Clone)]
pub struct Element<F> {
    algebra: Arc<AlgebraSpec>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: PartialEq> PartialEq for Element<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra)
            && self.terms == other.terms
    }
}

impl<F: Field> Element<F> {
    pub fn zero(algebra: &Arc<AlgebraSpec>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<AlgebraSpec>) -> Self {
        Self::from_monomial(algebra, Monomial::one(), F::one())
    }

    pub fn from_monomial(algebra: &Arc<AlgebraSpec>, monomial: Monomial, coefficient: F) -> Self {
        let mut e = Self::zero(algebra);
        e.add_term(monomial, coefficient);
        e
    }

    pub fn generator(algebra: &Arc<AlgebraSpec>, name: &str) -> Result<Self> {
        let index = algebra.generator(name)?.index;
        let m = algebra
            .monomial(&[(index, 1)])
            .expect("single generator is a valid monomial");
        Ok(Self::from_monomial(algebra, m, F::one()))
    }

    /// Builds `Σ c · m` from terms; duplicate monomials are summed.
    pub fn from_terms(
        algebra: &Arc<AlgebraSpec>,
        terms: impl IntoIterator<Item = (Monomial, F)>,
    ) -> Self {
        let mut e = Self::zero(algebra);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// Parses expressions such as `b2*v5 + 4 v7` or `1/4 b2^4`. Factors are
    /// multiplied left to right, so `v7*v5` equals `-v5*v7`.
    pub fn parse(algebra: &Arc<AlgebraSpec>, text: &str) -> Result<Self> {
        parse::parse_element(algebra, text)
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<u32> {
        if self.is_homogeneous() {
            self.terms.keys().next().map(Monomial::degree)
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let v = slot.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-F::one())
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.algebra);
        }
        Self {
            algebra: Arc::clone(&self.algebra),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = self.algebra.multiply_monomials(ma, mb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.algebra);
        for _ in 0..k {
            out = out.try_mul(self).expect("same algebra");
        }
        out
    }

    /// Rewrites this element in `target`, matching generators by name and
    /// re-multiplying factors so Koszul signs follow the new order.
    pub fn transport(&self, target: &Arc<AlgebraSpec>) -> Result<Self> {
        let images: Vec<Self> = self
            .algebra
            .generators()
            .iter()
            .map(|g| Self::generator(target, &g.name))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut prod = Self::one(target);
            for &(i, e) in m.factors() {
                prod = prod.try_mul(&images[i].pow(e))?;
            }
            out = out.try_add(&prod.scaled(c))?;
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = self.algebra.render_monomial(m);
            if magnitude == F::one() {
                write!(f, "{body}")?;
            } else if m.is_one() {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*{body}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live in different algebras; use the
        /// `try_` method to get an error instead.
        impl<'a, F: Field> $trait<&'a Element<F>> for &'a Element<F> {
            type Output = Element<F>;
            fn $method(self, rhs: &'a Element<F>) -> Element<F> {
                self.$checked(rhs)
                    .expect("operands belong to the same algebra")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<F: Field> Neg for &Element<F> {
    type Output = Element<F>;
    fn neg(self) -> Element<F> {
        self.negated()
    }
}

mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Token {
        Number(i64),
        Ident(String),
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
    }

    fn tokenize(text: &str) -> Result<Vec<Token>> {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' => i += 1,
                '+' => {
                    out.push(Token::Plus);
                    i += 1;
                }
                '-' | '−' => {
                    out.push(Token::Minus);
                    i += 1;
                }
                '*' | '·' => {
                    out.push(Token::Star);
                    i += 1;
                }
                '/' => {
                    out.push(Token::Slash);
                    i += 1;
                }
                '^' => {
                    out.push(Token::Caret);
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("number `{s}` out of range")))?;
                    out.push(Token::Number(n));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    out.push(Token::Ident(chars[start..i].iter().collect()));
                }
                other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
            }
        }
        Ok(out)
    }

    pub(super) fn parse_element<F: Field>(
        algebra: &Arc<AlgebraSpec>,
        text: &str,
    ) -> Result<Element<F>> {
        let tokens = tokenize(text)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut pos = 0;
        let mut total = Element::zero(algebra);
        let mut first = true;
        while pos < tokens.len() {
            let mut negative = false;
            match tokens[pos] {
                Token::Plus => pos += 1,
                Token::Minus => {
                    negative = true;
                    pos += 1;
                }
                _ if first => {}
                _ => return Err(Error::Parse(format!("expected `+` or `-` at token {pos}"))),
            }
            first = false;
            let (term, next) = parse_term(algebra, &tokens, pos)?;
            pos = next;
            total = total.try_add(&if negative { term.negated() } else { term })?;
        }
        Ok(total)
    }

    fn parse_term<F: Field>(
        algebra: &Arc<AlgebraSpec>,
        tokens: &[Token],
        mut pos: usize,
    ) -> Result<(Element<F>, usize)> {
        let mut value = Element::one(algebra);
        let mut consumed_any = false;
        loop {
            match tokens.get(pos) {
                Some(Token::Number(n)) => {
                    let mut c = F::from_int(*n);
                    pos += 1;
                    if tokens.get(pos) == Some(&Token::Slash) {
                        match tokens.get(pos + 1) {
                            Some(Token::Number(0)) => {
                                return Err(Error::Parse("division by zero".into()))
                            }
                            Some(Token::Number(den)) => {
                                c = c / F::from_int(*den);
                                pos += 2;
                            }
                            _ => return Err(Error::Parse("expected denominator after `/`".into())),
                        }
                    }
                    value = value.scaled(&c);
                }
                Some(Token::Ident(name)) => {
                    let mut g = Element::generator(algebra, name)?;
                    pos += 1;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        match tokens.get(pos + 1) {
                            Some(Token::Number(e)) if *e >= 0 => {
                                g = g.pow(
                                    u32::try_from(*e)
                                        .map_err(|_| Error::Parse("exponent too large".into()))?,
                                );
                                pos += 2;
                            }
                            _ => {
                                return Err(Error::Parse(format!(
                                    "expected exponent after `{name}^`"
                                )))
                            }
                        }
                    }
                    value = value.try_mul(&g)?;
                }
                _ => break,
            }
            consumed_any = true;
            if tokens.get(pos) == Some(&Token::Star) {
                pos += 1;
                if !matches!(tokens.get(pos), Some(Token::Number(_) | Token::Ident(_))) {
                    return Err(Error::Parse("dangling `*`".into()));
                }
            }
        }
        if !consumed_any {
            return Err(Error::Parse(format!("expected a term at token {pos}")));
        }
        Ok((value, pos))
    }
}
