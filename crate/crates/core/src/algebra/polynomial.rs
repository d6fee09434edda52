use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed};

use super::{AlgebraError, FieldSpec, Monomial, MonomialOrder, Scalar};

/// `k[x_1, ..., x_n]` with a fixed monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: FieldSpec,
    variables: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    /// Degrevlex ring with the first listed variable most significant.
    pub fn new(field: FieldSpec, variables: Vec<String>) -> Result<Arc<Self>, AlgebraError> {
        let order = MonomialOrder::degrevlex(variables.len());
        Self::with_order(field, variables, order)
    }

    pub fn with_order(
        field: FieldSpec,
        variables: Vec<String>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>, AlgebraError> {
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(AlgebraError::InvalidVariableName(v.clone()));
            }
            if variables[..i].contains(v) {
                return Err(AlgebraError::DuplicateVariable(v.clone()));
            }
        }
        if order.precedence().len() != variables.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: variables.len(),
                got: order.precedence().len(),
            });
        }
        Ok(Arc::new(PolyRing { field, variables, order }))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub type Term = (Monomial, Scalar);

/// A polynomial in canonical form: terms strictly descending under the ring's
/// order, no zero coefficients. The empty term list is `0`.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial, AlgebraError> {
    a.check_ring(b)?;
    Ok(match op {
        ArithOp::Add => a.merge(b, false),
        ArithOp::Sub => a.merge(b, true),
        ArithOp::Mul => a.mul_unchecked(b),
    })
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, 1), ring.field.one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        let terms = if ring.field.is_zero(&c) { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds the canonical form of an arbitrary term list.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        let field = ring.field;
        let order = &ring.order;
        let mut terms = terms;
        for (m, _) in &terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity");
        }
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if field.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if field.is_zero(lc) {
                out.pop();
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    /// Re-runs canonicalization; the identity on any constructed value.
    pub fn normalized(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.clone())
    }

    /// Reinterprets the polynomial in a ring with the same field and
    /// variables but possibly a different order.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Self, AlgebraError> {
        if ring.field != self.ring.field || ring.variables != self.ring.variables {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Self::from_terms(ring, self.terms.clone()))
    }

    /// Wraps terms that are already canonical (strictly descending, nonzero).
    pub(crate) fn from_canonical_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order.compare(&w[0].0, &w[1].0).is_gt()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &FieldSpec {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Smallest total degree of a term (the `m`-adic order); `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() < bound).cloned().collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if self.ring.field.is_one(c) => self.clone(),
            Some(c) => {
                let inv = self.ring.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    /// `c * m * self`; ordering is preserved because monomial orders are
    /// multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), field.mul(a, c))).collect(),
        }
    }

    /// `self - c * m * g` in one merge pass.
    pub fn sub_term_multiple(&self, c: &Scalar, m: &Monomial, g: &Polynomial) -> Self {
        let field = &self.ring.field;
        let neg = field.neg(c);
        let shifted = g.terms.iter().map(|(t, a)| (t.mul(m), field.mul(a, &neg)));
        merge_sorted(&self.ring, self.terms.iter().cloned(), shifted)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        poly_arith(self, other, ArithOp::Add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        poly_arith(self, other, ArithOp::Sub)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        poly_arith(self, other, ArithOp::Mul)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            let mut cp = self.ring.field.one();
            let mut base = c.clone();
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    cp = self.ring.field.mul(&cp, &base);
                }
                base = self.ring.field.mul(&base, &base);
                e >>= 1;
            }
            return Self::monomial(&self.ring, m.pow(k), cp);
        }
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Replaces each variable `x_i` by `images[i]` and expands.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self, AlgebraError> {
        if images.len() != self.ring.nvars() {
            return Err(AlgebraError::ArityMismatch {
                expected: self.ring.nvars(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(g) => g.ring.clone(),
            None => self.ring.clone(),
        };
        for g in images {
            if !same_ring(&g.ring, &target) {
                return Err(AlgebraError::RingMismatch);
            }
        }
        if target.field != self.ring.field {
            return Err(AlgebraError::RingMismatch);
        }

        // powers[i][e] for every exponent e of x_i that occurs in self.
        let mut powers: Vec<BTreeMap<u32, Polynomial>> = vec![BTreeMap::new(); images.len()];
        for (i, img) in images.iter().enumerate() {
            let mut needed: Vec<u32> = self.terms.iter().map(|(m, _)| m.exponents()[i]).collect();
            needed.sort_unstable();
            needed.dedup();
            let mut prev = (0, Self::one(&target));
            for e in needed {
                let p = if e == prev.0 {
                    prev.1.clone()
                } else {
                    prev.1.mul_unchecked(&img.pow(e - prev.0))
                };
                powers[i].insert(e, p.clone());
                prev = (e, p);
            }
        }

        let mut acc: Vec<Term> = Vec::new();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    prod = prod.mul_unchecked(&powers[i][&e]);
                }
            }
            acc.extend(prod.terms);
        }
        Ok(Self::from_terms(&target, acc))
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let field = self.ring.field;
        if negate {
            let rhs = other.terms.iter().map(|(m, c)| (m.clone(), field.neg(c)));
            merge_sorted(&self.ring, self.terms.iter().cloned(), rhs)
        } else {
            merge_sorted(&self.ring, self.terms.iter().cloned(), other.terms.iter().cloned())
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.is_monomial() {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let field = &self.ring.field;
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), field.mul(ca, cb)));
            }
        }
        Self::from_terms(&self.ring, acc)
    }
}

fn merge_sorted(
    ring: &Arc<PolyRing>,
    lhs: impl Iterator<Item = Term>,
    rhs: impl Iterator<Item = Term>,
) -> Polynomial {
    let field = ring.field;
    let order = &ring.order;
    let mut lhs = lhs.peekable();
    let mut rhs = rhs.peekable();
    let mut out = Vec::new();
    loop {
        let which = match (lhs.peek(), rhs.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some(a), Some(b)) => order.compare(&a.0, &b.0),
        };
        match which {
            Ordering::Greater => out.push(lhs.next().unwrap()),
            Ordering::Less => out.push(rhs.next().unwrap()),
            Ordering::Equal => {
                let (m, a) = lhs.next().unwrap();
                let (_, b) = rhs.next().unwrap();
                let c = field.add(&a, &b);
                if !field.is_zero(&c) {
                    out.push((m, c));
                }
            }
        }
    }
    Polynomial { ring: ring.clone(), terms: out }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                poly_arith(self, rhs, $op).expect("polynomials from different rings")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, ArithOp::Add);
forward_op!(Sub, sub, ArithOp::Sub);
forward_op!(Mul, mul, ArithOp::Mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let field = self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Renders in the input grammar: `-x^3 + y^2`, `2*x*y - 1`. Non-integral
/// rationals print as `1/2*x`, which the input grammar does not accept.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let q = field.signed_repr(c);
            let negative = q.is_negative();
            let abs = q.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                if abs.is_integer() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.variables[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.variables[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
