//! Exact arithmetic in GF(p^m).
//!
//! A [`Field`] is an immutable, cheaply clonable handle. Elements are plain
//! [`Fe`] values: the integer `sum c_i p^i` of their coefficient digits over
//! the prime field. Flat fields are GF(p)[x]/(f) with `f` the smallest monic
//! irreducible of degree `m`; tower fields are GF(p^2)[y]/(g) with `g` of
//! degree `m/2` over GF(p^2). In both cases the base-p digits of an element
//! are its coefficients, so addition is digit-wise and does not care which
//! presentation is in use.

mod poly;
mod tower;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tower::TowerIso;

/// Largest order for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("tower representation needs an even extension degree, got {0}")]
    OddTower(u32),
    #[error("field order {0}^{1} does not fit the element encoding")]
    TooLarge(u64, u32),
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducible(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient vector {0:?} is not a valid element")]
    BadCoefficients(Vec<u64>),
    #[error("fields differ: {0} vs {1}")]
    Mismatch(String, String),
}

/// A field element, encoded as the integer of its base-p coefficient digits.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable field descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub tower: bool,
    /// Monic modulus over the base field, little-endian, each coefficient an
    /// element encoding of the base (GF(p), or GF(p^2) for towers).
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    degree: u32,
    order: u32,
    tower: bool,
    base: Option<Field>,
    modulus: Vec<Fe>,
    rel_degree: u32,
    base_order: u32,
    inv2: Fe,
    tables: Option<LogTables>,
}

#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.degree == other.0.degree && self.0.tower == other.0.tower)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.tower {
            write!(f, "GF({}^2)[y]/deg {}", self.0.p, self.0.rel_degree)
        } else if self.0.degree == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.degree)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Distinct prime divisors by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^m`, returning `None` for anything else.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let divs = prime_divisors(q);
    if divs.len() != 1 {
        return None;
    }
    let p = divs[0];
    let mut m = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        m += 1;
    }
    Some((p, m))
}

/// Canonical residue of `x` modulo `r`.
pub fn reduce_int(x: i64, r: u64) -> u64 {
    x.rem_euclid(r as i64) as u64
}

/// Coordinatewise reduction of an integer pair.
pub fn reduce_pair((x, y): (i64, i64), r: u64) -> (u64, u64) {
    (reduce_int(x, r), reduce_int(y, r))
}

/// Elementwise reduction of a set of integer pairs; the result is a set again.
pub fn reduce_pairs(points: &[(i64, i64)], r: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<_> = points.iter().map(|&pt| reduce_pair(pt, r)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Field {
    /// Builds GF(p^m). With `tower`, the field is GF(p^2)[y]/(g) for the
    /// smallest irreducible `g` of degree m/2 over GF(p^2).
    pub fn new(p: u64, m: u32, tower: bool) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if tower && m % 2 != 0 {
            return Err(FieldError::OddTower(m));
        }
        let order = (p as u128).checked_pow(m).filter(|&q| q < u32::MAX as u128);
        let Some(order) = order else {
            return Err(FieldError::TooLarge(p, m));
        };
        let p32 = p as u32;
        let inv2 = if p == 2 { Fe::ZERO } else { Fe(((p + 1) / 2) as u32) };
        if m == 1 {
            return Ok(Field(Arc::new(Inner {
                p: p32,
                degree: 1,
                order: order as u32,
                tower: false,
                base: None,
                modulus: Vec::new(),
                rel_degree: 1,
                base_order: p32,
                inv2,
                tables: None,
            })));
        }
        let (base, rel_degree) = if tower {
            (Field::new(p, 2, false)?, m / 2)
        } else {
            (Field::new(p, 1, false)?, m)
        };
        let modulus = poly::smallest_irreducible(&base, rel_degree as usize)
            .ok_or(FieldError::NoIrreducible(rel_degree))?;
        let base_order = base.order() as u32;
        let mut inner = Inner {
            p: p32,
            degree: m,
            order: order as u32,
            tower,
            base: Some(base),
            modulus,
            rel_degree,
            base_order,
            inv2,
            tables: None,
        };
        if order as u64 <= TABLE_LIMIT {
            let tmp = Field(Arc::new(inner));
            let tables = tmp.build_tables();
            inner = Arc::try_unwrap(tmp.0).unwrap_or_else(|_| unreachable!());
            inner.tables = Some(tables);
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(p, 1, false)
    }

    /// Field of order `q`, flat presentation.
    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NonPrime(q))?;
        Field::new(p, m, false)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            m: self.0.degree,
            tower: self.0.tower,
            modulus: self.0.modulus.iter().map(|c| c.0).collect(),
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let f = Field::new(spec.p as u64, spec.m, spec.tower)?;
        if !spec.modulus.is_empty() && spec.modulus != f.spec().modulus {
            return Err(FieldError::Mismatch(format!("{:?}", spec.modulus), format!("{:?}", f.spec().modulus)));
        }
        Ok(f)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order as u64
    }

    pub fn is_tower(&self) -> bool {
        self.0.tower
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1
    }

    /// The field this one is a simple extension of (`None` for prime fields).
    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    /// Degree over [`Field::base`].
    pub fn relative_degree(&self) -> u32 {
        self.0.rel_degree
    }

    /// Modulus over the base field, monic, little-endian.
    pub fn modulus(&self) -> &[Fe] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.order).map(Fe)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.order
    }

    /// Image of an integer in the prime subfield.
    pub fn int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The adjoined root `x` (flat) or `y` (tower).
    pub fn generator(&self) -> Option<Fe> {
        if self.0.degree == 1 || self.0.rel_degree < 2 {
            None
        } else {
            Some(Fe(self.0.base_order))
        }
    }

    /// Coefficients over GF(p), little-endian, length `degree`.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.degree)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe, FieldError> {
        let p = self.0.p as u64;
        if coeffs.len() > self.0.degree as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::BadCoefficients(coeffs.to_vec()));
        }
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = acc * p + c;
        }
        Ok(Fe(acc as u32))
    }

    /// Coefficients over the base field (GF(p^2) for towers), length
    /// `relative_degree`.
    pub fn base_coeffs(&self, a: Fe) -> Vec<Fe> {
        let b = self.0.base_order;
        let mut v = a.0;
        (0..self.0.rel_degree)
            .map(|_| {
                let d = v % b;
                v /= b;
                Fe(d)
            })
            .collect()
    }

    pub fn from_base_coeffs(&self, coeffs: &[Fe]) -> Fe {
        debug_assert!(coeffs.len() <= self.0.rel_degree as usize);
        let b = self.0.base_order as u64;
        let mut acc = 0u64;
        for c in coeffs.iter().rev() {
            debug_assert!((c.0 as u64) < b);
            acc = acc * b + c.0 as u64;
        }
        Fe(acc as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.degree == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            let mut d = x % p + y % p;
            if d >= p {
                d -= p;
            }
            out += d * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.degree == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            let d = x % p;
            if d != 0 {
                out += (p - d) * place;
            }
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.0.degree == 1 {
            let p = self.0.p;
            return Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.0.degree == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        match &self.0.tables {
            Some(t) => {
                let n = self.0.order - 1;
                let mut e = t.log[a.0 as usize] + t.log[b.0 as usize];
                if e >= n {
                    e -= n;
                }
                Fe(t.exp[e as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// Multiplication by the integer 2.
    pub fn double(&self, a: Fe) -> Fe {
        self.add(a, a)
    }

    /// Division by 2; only meaningful in odd characteristic.
    pub fn half(&self, a: Fe) -> Fe {
        debug_assert!(self.0.p != 2);
        self.mul(a, self.0.inv2)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if let (Some(t), false) = (&self.0.tables, a.0 == 0) {
            let n = (self.0.order - 1) as u64;
            let l = t.log[a.0 as usize] as u64;
            return Fe(t.exp[((l * (e % n)) % n) as usize]);
        }
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.order - 1;
            let l = t.log[a.0 as usize];
            return Ok(Fe(t.exp[((n - l) % n) as usize]));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dispatching form of the arithmetic operations; unary ops ignore `b`.
    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe, FieldError> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
        })
    }

    /// Euler's criterion; every element is a square in characteristic 2.
    pub fn is_square(&self, a: Fe) -> bool {
        if a.0 == 0 || self.0.p == 2 {
            return true;
        }
        if let Some(t) = &self.0.tables {
            return t.log[a.0 as usize] % 2 == 0;
        }
        self.pow(a, (self.order() - 1) / 2) == Fe::ONE
    }

    pub fn multiplicative_order(&self, a: Fe) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut n = self.order() - 1;
        for r in prime_divisors(n) {
            while n % r == 0 && self.pow(a, n / r) == Fe::ONE {
                n /= r;
            }
        }
        Some(n)
    }

    /// Smallest element (by encoding) generating the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        let n = self.order() - 1;
        let divs = prime_divisors(n);
        (1..self.0.order)
            .map(Fe)
            .find(|&e| divs.iter().all(|&r| self.pow_slow(e, n / r) != Fe::ONE))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_nolog(acc, base);
            }
            base = self.mul_nolog(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_nolog(&self, a: Fe, b: Fe) -> Fe {
        if self.0.degree == 1 {
            self.mul(a, b)
        } else {
            self.mul_slow(a, b)
        }
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let base = self.0.base.as_ref().expect("extension field");
        let x = self.base_coeffs(a);
        let y = self.base_coeffs(b);
        let prod = poly::mul(base, &x, &y);
        let r = poly::rem(base, &prod, &self.0.modulus);
        self.from_base_coeffs(&r)
    }

    fn build_tables(&self) -> LogTables {
        let g = self.primitive_element();
        let n = self.0.order as usize - 1;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; n + 1];
        let mut cur = Fe::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { exp, log }
    }
}
