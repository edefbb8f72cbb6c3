//! Exact multivariate polynomials over the rationals.
//!
//! The variable universe is fixed: the auxiliary unknowns `a`, `b`, `c` used by
//! the quadrilateral elimination and up to six vorticities `G1..G6`.

mod groebner;
mod parse;
pub mod quadrilateral;

pub use groebner::{groebner_basis, ideal_member, normal_form, s_polynomial, Budget, GroebnerError};
pub use parse::{ParseError, TermJson};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Number of variables in the fixed universe.
pub const NVARS: usize = 9;

/// Largest vertex count with a vorticity variable.
pub const MAX_VERTICES: usize = NVARS - 3;

const NAMES: [&str; NVARS] = ["a", "b", "c", "G1", "G2", "G3", "G4", "G5", "G6"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u8);

impl VarId {
    pub const A: VarId = VarId(0);
    pub const B: VarId = VarId(1);
    pub const C: VarId = VarId(2);

    pub fn new(index: usize) -> Option<VarId> {
        (index < NVARS).then_some(VarId(index as u8))
    }

    /// Vorticity variable `G_i`, 1-based.
    pub fn gamma(i: usize) -> VarId {
        assert!((1..=MAX_VERTICES).contains(&i), "vorticity index {i} out of range");
        VarId(2 + i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The 1-based vertex a vorticity variable belongs to, if it is one.
    pub fn vertex(self) -> Option<usize> {
        (self.0 >= 3).then(|| self.0 as usize - 2)
    }

    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<VarId> {
        let ascii = name.replace('Γ', "G");
        NAMES.iter().position(|n| *n == ascii).map(|i| VarId(i as u8))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([u16; NVARS]);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial([0; NVARS])
    }

    pub fn var(v: VarId) -> Monomial {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: [u16; NVARS]) -> Monomial {
        Monomial(exps)
    }

    pub fn exponent(&self, v: VarId) -> u16 {
        self.0[v.index()]
    }

    pub fn exponents(&self) -> &[u16; NVARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut e = other.0;
        for (x, y) in e.iter_mut().zip(self.0.iter()) {
            *x -= *y;
        }
        Some(Monomial(e))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = (*x).max(*y);
        }
        Monomial(e)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, u16)> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (VarId(i as u8), *e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str(" * ")?;
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GrevLex,
    Lex,
}

/// A monomial order together with the variable priority (highest first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    priority: [VarId; NVARS],
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::grevlex()
    }
}

impl MonomialOrder {
    /// Graded reverse lexicographic with `a > b > c > G1 > ... > G6`.
    pub fn grevlex() -> Self {
        MonomialOrder { kind: OrderKind::GrevLex, priority: natural_priority() }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: natural_priority() }
    }

    /// Order with a custom priority list. Variables missing from `priority`
    /// are appended in natural order below the listed ones.
    pub fn with_priority(kind: OrderKind, priority: &[VarId]) -> Self {
        let mut p = Vec::with_capacity(NVARS);
        for v in priority {
            if !p.contains(v) {
                p.push(*v);
            }
        }
        for v in natural_priority() {
            if !p.contains(&v) {
                p.push(v);
            }
        }
        let mut arr = natural_priority();
        arr.copy_from_slice(&p);
        MonomialOrder { kind, priority: arr }
    }

    pub fn priority(&self) -> &[VarId; NVARS] {
        &self.priority
    }

    pub fn cmp(&self, x: &Monomial, y: &Monomial) -> Ordering {
        self.key(x).cmp(&self.key(y))
    }

    /// A key whose natural ordering coincides with this monomial order.
    pub fn key(&self, m: &Monomial) -> SortKey {
        let mut k = [0i32; NVARS + 1];
        match self.kind {
            OrderKind::Lex => {
                for (slot, v) in k[1..].iter_mut().zip(self.priority.iter()) {
                    *slot = m.exponent(*v) as i32;
                }
            }
            OrderKind::GrevLex => {
                k[0] = m.degree() as i32;
                for (slot, v) in k[1..].iter_mut().zip(self.priority.iter().rev()) {
                    *slot = -(m.exponent(*v) as i32);
                }
            }
        }
        SortKey(k)
    }

    pub fn monomial(&self, key: &SortKey) -> Monomial {
        let mut e = [0u16; NVARS];
        match self.kind {
            OrderKind::Lex => {
                for (x, v) in key.0[1..].iter().zip(self.priority.iter()) {
                    e[v.index()] = *x as u16;
                }
            }
            OrderKind::GrevLex => {
                for (x, v) in key.0[1..].iter().zip(self.priority.iter().rev()) {
                    e[v.index()] = (-*x) as u16;
                }
            }
        }
        Monomial(e)
    }
}

fn natural_priority() -> [VarId; NVARS] {
    let mut p = [VarId(0); NVARS];
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = VarId(i as u8);
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortKey([i32; NVARS + 1]);

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: VarId) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(v))
    }

    /// Vorticity `G_i`, 1-based.
    pub fn gamma(i: usize) -> Self {
        Polynomial::var(VarId::gamma(i))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|x, y| order.cmp(&y.0, &x.0));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(Monomial, Rational)> {
        self.terms.iter().max_by(|x, y| order.cmp(x.0, y.0)).map(|(m, c)| (*m, c.clone()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divide by the leading coefficient under `order`.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => Polynomial::zero(),
        }
    }

    /// Variables that occur with nonzero exponent.
    pub fn variables(&self) -> Vec<VarId> {
        let mut seen = [false; NVARS];
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        (0..NVARS).filter(|i| seen[*i]).map(|i| VarId(i as u8)).collect()
    }

    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Exact evaluation; unassigned variables evaluate as zero.
    pub fn eval(&self, point: &[Rational; NVARS]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                for _ in 0..e {
                    t *= &point[v.index()];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute values for some variables; the rest stay symbolic.
    pub fn substitute(&self, values: &[Option<Rational>; NVARS]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = *m.exponents();
            for (i, e) in exps.iter_mut().enumerate() {
                if let Some(val) = &values[i] {
                    for _ in 0..*e {
                        coeff *= val;
                    }
                    *e = 0;
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        out
    }

    /// Rename variables; `map[i]` is the image of variable `i`.
    pub fn rename(&self, map: &[VarId; NVARS]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut e = [0u16; NVARS];
            for (v, x) in m.vars() {
                e[map[v.index()].index()] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Text form with terms in `order`, e.g. `G1^2 - 1/2 * G2`.
    pub fn to_text(&self, order: &MonomialOrder) -> String {
        let terms = self.sorted_terms(order);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.to_string());
            } else {
                s.push_str(&format!("{abs} * {m}"));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&MonomialOrder::grevlex()))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

/// `p/q` as a rational, for tests and literals.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
