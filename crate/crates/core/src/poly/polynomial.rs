use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, PolyError, Rational};

/// Multivariate polynomial over the rationals.
///
/// Terms are kept strictly descending in `order` with no zero coefficients, so
/// the representation is canonical for a fixed order and the zero polynomial
/// is the empty term list.
#[derive(Clone)]
pub struct Polynomial {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Rational, Monomial)>,
}

impl Polynomial {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Polynomial { nvars, order, terms: Vec::new() }
    }

    pub fn one(nvars: usize, order: MonomialOrder) -> Self {
        Self::constant(nvars, order, Rational::one())
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Rational) -> Self {
        Self::from_monomial(order, c, Monomial::one(nvars))
    }

    pub fn var(nvars: usize, order: MonomialOrder, index: usize) -> Self {
        Self::from_monomial(order, Rational::one(), Monomial::var(nvars, index))
    }

    pub fn from_monomial(order: MonomialOrder, c: Rational, m: Monomial) -> Self {
        let nvars = m.nvars();
        let terms = if c.is_zero() { Vec::new() } else { vec![(c, m)] };
        Polynomial { nvars, order, terms }
    }

    /// Canonical form of an arbitrary term list: merges duplicate monomials,
    /// drops zero coefficients and sorts descending in `order`.
    pub fn from_terms(nvars: usize, order: MonomialOrder, mut raw: Vec<(Rational, Monomial)>) -> Self {
        assert!(raw.iter().all(|(_, m)| m.nvars() == nvars), "term arity differs from ring arity");
        raw.sort_by(|a, b| order.compare(&b.1, &a.1));
        let mut terms: Vec<(Rational, Monomial)> = Vec::with_capacity(raw.len());
        for (c, m) in raw {
            match terms.last_mut() {
                Some(last) if last.1 == m => last.0 += c,
                _ => {
                    if let Some(last) = terms.last() {
                        if last.0.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push((c, m));
                }
            }
        }
        if terms.last().is_some_and(|t| t.0.is_zero()) {
            terms.pop();
        }
        Polynomial { nvars, order, terms }
    }

    /// Wraps an already canonical term list.
    pub(crate) fn from_sorted_terms(nvars: usize, order: MonomialOrder, terms: Vec<(Rational, Monomial)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| order.compare(&w[0].1, &w[1].1) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.0.is_zero()));
        Polynomial { nvars, order, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Rational, Monomial)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Rational, Monomial)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&(Rational, Monomial)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Lowest total degree among the terms (the order of vanishing at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m)) => {
                let d = m.degree();
                self.terms.iter().all(|(_, t)| t.degree() == d)
            }
        }
    }

    /// True iff every term has the same weighted degree.
    pub fn is_weighted_homogeneous(&self, weights: &[u64]) -> bool {
        let wdeg = |m: &Monomial| -> u64 { m.exponents().iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum() };
        match self.terms.first() {
            None => true,
            Some((_, m)) => {
                let d = wdeg(m);
                self.terms.iter().all(|(_, t)| wdeg(t) == d)
            }
        }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        Polynomial { nvars: self.nvars, order, terms }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let other = other.with_order(self.order);
        Ok(self.merge(other.terms.iter().map(|(c, m)| (c.clone(), m.clone()))))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let other = other.with_order(self.order);
        Ok(self.merge(other.terms.iter().map(|(c, m)| (-c, m.clone()))))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.nvars, self.order));
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let large = large.with_order(self.order);
        let mut acc = Polynomial::zero(self.nvars, self.order);
        for (c, m) in &small.terms {
            acc = acc.merge(large.terms.iter().map(|(d, n)| (c * d, m.mul(n))));
        }
        Ok(acc)
    }

    /// Merges a descending term stream (already in `self.order`) into `self`.
    fn merge<I>(&self, other: I) -> Polynomial
    where
        I: Iterator<Item = (Rational, Monomial)>,
    {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len());
        let mut left = self.terms.iter().peekable();
        let mut right = other.peekable();
        loop {
            match (left.peek(), right.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(left.next().unwrap().clone()),
                (None, Some(_)) => out.push(right.next().unwrap()),
                (Some(a), Some(b)) => match order.compare(&a.1, &b.1) {
                    Ordering::Greater => out.push(left.next().unwrap().clone()),
                    Ordering::Less => out.push(right.next().unwrap()),
                    Ordering::Equal => {
                        let (c, m) = left.next().unwrap().clone();
                        let (d, _) = right.next().unwrap();
                        let s = c + d;
                        if !s.is_zero() {
                            out.push((s, m));
                        }
                    }
                },
            }
        }
        Polynomial { nvars: self.nvars, order, terms: out }
    }

    /// `self - c * m * g`, with `g` in the same order.
    pub fn sub_mul_term(&self, c: &Rational, m: &Monomial, g: &Polynomial) -> Polynomial {
        debug_assert_eq!(g.order, self.order);
        self.merge(g.terms.iter().map(|(d, n)| (-(c * d), m.mul(n))))
    }

    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.order);
        }
        // multiplication by a monomial preserves the order of terms
        let terms = self.terms.iter().map(|(d, n)| (c * d, m.mul(n))).collect();
        Polynomial { nvars: self.nvars, order: self.order, terms }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        self.mul_term(c, &Monomial::one(self.nvars))
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / g` when `g` divides `self`, `None` otherwise.
    pub fn divide_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        if g.is_zero() {
            return None;
        }
        let g = g.with_order(self.order);
        let (gc, gm) = g.leading_term().unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((c, m)) = rem.leading_term() {
            let t = m.div(gm)?;
            let q = c / gc;
            rem = rem.sub_mul_term(&q, &t, &g);
            quot.push((q, t));
        }
        Some(Polynomial { nvars: self.nvars, order: self.order, terms: quot })
    }

    /// The same polynomial in a ring with `nvars` variables, its own variables
    /// placed starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize, order: MonomialOrder) -> Polynomial {
        let raw = self.terms.iter().map(|(c, m)| (c.clone(), m.embed(nvars, offset))).collect();
        Polynomial::from_terms(nvars, order, raw)
    }

    /// Inverse of `embed(nvars + count, count, _)`; the first `count`
    /// variables must not occur.
    pub fn drop_leading_vars(&self, count: usize, order: MonomialOrder) -> Polynomial {
        let raw = self.terms.iter().map(|(c, m)| (c.clone(), m.drop_leading(count))).collect();
        Polynomial::from_terms(self.nvars - count, order, raw)
    }

    pub fn involves_only_vars_from(&self, first: usize) -> bool {
        self.terms.iter().all(|(_, m)| m.exponents()[..first].iter().all(|&e| e == 0))
    }

    /// Clears denominators and content so the result has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (c, _) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for (c, _) in &self.terms {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut scale = Rational::new(den, num);
        if self.leading_coeff().unwrap().is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.order == other.order {
            return self.terms == other.terms;
        }
        self.terms == other.with_order(self.order).terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        sorted.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(c, m)| (-c, m.clone())).collect();
        Polynomial { nvars: self.nvars, order: self.order, terms }
    }
}

/// Text rendering in the shared polynomial syntax, e.g. `-x^2+3/2*y*z`.
pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, m)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    _ => factors.push(format!("{}^{}", self.names[v], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
