//! Exact multivariate polynomials over the rationals.
//!
//! Terms are stored sparsely and kept sorted in DegLex-descending order, so
//! the leading term is the first entry and the initial term is the last one.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// A point of affine space with rational coordinates.
pub type Point = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn origin(n: usize) -> Point {
    vec![Q::zero(); n]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at offset {pos}")]
    NegativeExponent { pos: usize },
    #[error("zero polynomial has no initial term")]
    ZeroPolynomial,
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("division is not exact")]
    NotDivisible,
}

/// Ordered variable names of a polynomial ring over Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<RingRef, PolyError> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let ok = n
                .chars()
                .next()
                .map(|c| c.is_ascii_alphabetic() || c == '_')
                .unwrap_or(false)
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(PolyError::InvalidRing(alloc::format!("bad variable name `{n}`")));
            }
            if out.iter().any(|m| m == n) {
                return Err(PolyError::InvalidRing(alloc::format!("duplicate variable `{n}`")));
            }
            out.push(n.to_owned());
        }
        Ok(Arc::new(Ring { names: out }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector. `Ord` is DegLex: total degree first, then exponents
/// compared lexicographically from the first variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    /// Support as a squarefree monomial.
    pub fn radical(&self) -> Monomial {
        Monomial(self.0.iter().map(|&e| u32::from(e > 0)).collect())
    }

    pub fn extend(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.extend(core::iter::repeat_n(0, extra));
        Monomial(e)
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::one();
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                acc *= num_traits::pow(point[i].clone(), e as usize);
            }
        }
        acc
    }

    pub fn fmt_with(&self, ring: &Ring) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ring.name(i).to_string()),
                _ => parts.push(alloc::format!("{}^{}", ring.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// All exponent vectors of total degree `d` in `n` variables, DegLex-descending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// All exponent vectors of total degree at most `k`.
pub fn monomials_up_to(n: usize, k: u32) -> Vec<Monomial> {
    (0..=k).flat_map(|d| monomials_of_degree(n, d)).collect()
}

pub fn deglex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0))
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        deglex_cmp(self, other)
    }
}

/// Polynomial over Q in a fixed ring.
#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<(Monomial, Q)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.names == other.ring.names && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl core::hash::Hash for Poly {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

/// Data attached to the DegLex-smallest term of a nonzero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialData {
    pub exponent: Monomial,
    pub coefficient: Q,
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Q) -> Poly {
        let n = ring.nvars();
        Poly::from_terms(ring, vec![(Monomial::one(n), c)])
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, Q::one())
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.nvars(), i), Q::one())
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Q) -> Poly {
        Poly::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &RingRef, terms: Vec<(Monomial, Q)>) -> Poly {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            *map.entry(m).or_insert_with(Q::zero) += c;
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { ring: ring.clone(), terms }
    }

    /// Trusts the caller: terms must be DegLex-descending with no zeros.
    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<(Monomial, Q)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Q)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Q {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Q::zero(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Smallest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    /// DegLex-largest term.
    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    /// DegLex-smallest exponent with its coefficient.
    pub fn initial_data(&self) -> Result<InitialData, PolyError> {
        let (m, c) = self.terms.last().ok_or(PolyError::ZeroPolynomial)?;
        Ok(InitialData { exponent: m.clone(), coefficient: c.clone() })
    }

    fn same_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring.names == other.ring.names,
            "polynomials belong to different rings"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *map.entry(a.mul(b)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point);
        }
        acc
    }

    pub fn vanishes_at(&self, point: &[Q]) -> bool {
        self.eval(point).is_zero()
    }

    /// Replaces variable `i` by `images[i]`; the images may live in another ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut cache: Vec<Vec<Poly>> = vec![Vec::new(); images.len()];
        let mut acc = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() < e as usize {
                    let next = match powers.last() {
                        Some(p) => p.mul(&images[i]),
                        None => images[i].clone(),
                    };
                    powers.push(next);
                }
                t = t.mul(&powers[e as usize - 1]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `f(x + a)`: moves the point `a` to the origin.
    pub fn translate(&self, a: &[Q]) -> Poly {
        if a.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| Poly::var(&self.ring, i).add(&Poly::constant(&self.ring, a[i].clone())))
            .collect();
        self.substitute(&images)
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[var];
                e[var] -= 1;
                (Monomial(e), c * q(i64::from(k)))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Gradient evaluated at a point.
    pub fn gradient_at(&self, point: &[Q]) -> Vec<Q> {
        (0..self.ring.nvars()).map(|i| self.derivative(i).eval(point)).collect()
    }

    /// Drops every term of total degree above `k`.
    pub fn truncate(&self, k: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= k).cloned().collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    /// Variables occurring in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    /// Re-embeds into `ring`, which must have at least as many variables;
    /// the extra variables are appended.
    pub fn extend_to(&self, ring: &RingRef) -> Poly {
        let extra = ring.nvars() - self.ring.nvars();
        Poly {
            ring: ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())).collect(),
        }
    }

    /// Exact division; fails when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        self.same_ring(divisor);
        let (lm, lc) = divisor.terms.first().ok_or(PolyError::NotDivisible)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return Err(PolyError::NotDivisible);
            }
            let qm = m.div(lm);
            let qc = c / lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot = quot.add(&Poly::monomial(&self.ring, qm, qc));
        }
        Ok(quot)
    }

    pub fn parse(ring: &RingRef, text: &str) -> Result<Poly, PolyError> {
        let mut p = Parser { ring, src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Err(PolyError::Syntax { pos: p.pos, msg: "empty expression".into() });
        }
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(PolyError::Syntax { pos: p.pos, msg: "unexpected trailing input".into() });
        }
        Ok(out)
    }
}

fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                f.write_str(&fmt_q(&a))?;
            } else if a.is_one() {
                f.write_str(&m.fmt_with(&self.ring))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), m.fmt_with(&self.ring))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn format_q(c: &Q) -> String {
    fmt_q(c)
}

struct Parser<'a> {
    ring: &'a RingRef,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(PolyError::Syntax {
                            pos: at,
                            msg: "division only by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            if self.peek() == Some(b'-') {
                return Err(PolyError::NegativeExponent { pos: at });
            }
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| PolyError::Syntax { pos: at, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PolyError::Syntax { pos: start, msg: "expected integer".into() });
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>()
            .map_err(|_| PolyError::Syntax { pos: start, msg: "bad integer".into() })
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(PolyError::Syntax { pos: self.pos, msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(self.ring, Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self.ring.index_of(name).ok_or_else(|| PolyError::UnknownVariable {
                    name: name.to_owned(),
                    pos: start,
                })?;
                Ok(Poly::var(self.ring, i))
            }
            Some(_) => Err(PolyError::Syntax { pos: self.pos, msg: "unexpected character".into() }),
            None => Err(PolyError::Syntax { pos: self.pos, msg: "unexpected end of input".into() }),
        }
    }
}
