//! Exact arithmetic in the quadratic field Q(sqrt q).
//!
//! Every value taken by a convolution function on pairs of flags is an integer
//! combination of powers of `sqrt q`, so all scalars live in Q(sqrt q) for the
//! concrete `q` of the base field. Values are stored as `a + b*sqrt(q)` with
//! arbitrary precision rationals. The modulus `q` is held once by a
//! [`QuadField`] context rather than by each value.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("q must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("division by zero in Q(sqrt {q})")]
    DivisionByZero { q: u64 },
    #[error("malformed scalar: {0}")]
    Malformed(String),
}

/// A value `a + b*sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRootQ {
    a: BigRational,
    b: BigRational,
}

impl QRootQ {
    pub fn zero() -> Self {
        QRootQ { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        QRootQ::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QRootQ { a: BigRational::from_integer(BigInt::from(n)), b: BigRational::zero() }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QRootQ { a, b: BigRational::zero() }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `sqrt q`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Multiply by an integer.
    pub fn scale_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(BigInt::from(n));
        QRootQ { a: &self.a * &n, b: &self.b * &n }
    }
}

impl Default for QRootQ {
    fn default() -> Self {
        QRootQ::zero()
    }
}

impl fmt::Display for QRootQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*r", self.b),
            (false, false) => write!(f, "{} + ({})*r", self.a, self.b),
        }
    }
}

impl Add<&QRootQ> for &QRootQ {
    type Output = QRootQ;
    fn add(self, rhs: &QRootQ) -> QRootQ {
        QRootQ { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Add for QRootQ {
    type Output = QRootQ;
    fn add(self, rhs: QRootQ) -> QRootQ {
        QRootQ { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl AddAssign<&QRootQ> for QRootQ {
    fn add_assign(&mut self, rhs: &QRootQ) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl Sub<&QRootQ> for &QRootQ {
    type Output = QRootQ;
    fn sub(self, rhs: &QRootQ) -> QRootQ {
        QRootQ { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Sub for QRootQ {
    type Output = QRootQ;
    fn sub(self, rhs: QRootQ) -> QRootQ {
        QRootQ { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl SubAssign<&QRootQ> for QRootQ {
    fn sub_assign(&mut self, rhs: &QRootQ) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for QRootQ {
    type Output = QRootQ;
    fn neg(self) -> QRootQ {
        QRootQ { a: -self.a, b: -self.b }
    }
}

impl Neg for &QRootQ {
    type Output = QRootQ;
    fn neg(self) -> QRootQ {
        QRootQ { a: -&self.a, b: -&self.b }
    }
}

/// The field Q(sqrt q) for a fixed `q >= 2`.
///
/// When `q` is a perfect square the field collapses to Q and every value is
/// kept with `b = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    q: u64,
    root: Option<u64>,
}

impl QuadField {
    pub fn new(q: u64) -> Result<Self, ArithError> {
        if q < 2 {
            return Err(ArithError::BadModulus(q));
        }
        let r = q.sqrt();
        let root = if r * r == q { Some(r) } else { None };
        Ok(QuadField { q, root })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn q_big(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q))
    }

    /// `sqrt(q)^k` for any integer `k`.
    pub fn qpow(&self, k: i64) -> QRootQ {
        if let Some(r) = self.root {
            let base = BigRational::from_integer(BigInt::from(r));
            return QRootQ::from_rational(rat_pow(&base, k));
        }
        let q = self.q_big();
        if k % 2 == 0 {
            QRootQ::from_rational(rat_pow(&q, k / 2))
        } else {
            // sqrt(q)^k = q^((k-1)/2) * sqrt(q), valid for negative odd k too.
            QRootQ { a: BigRational::zero(), b: rat_pow(&q, (k - 1).div_euclid(2)) }
        }
    }

    /// The element `sqrt q` itself.
    pub fn root(&self) -> QRootQ {
        self.qpow(1)
    }

    pub fn mul(&self, x: &QRootQ, y: &QRootQ) -> QRootQ {
        if x.b.is_zero() && y.b.is_zero() {
            return QRootQ::from_rational(&x.a * &y.a);
        }
        let q = self.q_big();
        QRootQ {
            a: &x.a * &y.a + &x.b * &y.b * q,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }

    /// `a^2 - q b^2`, the norm down to Q.
    pub fn norm(&self, x: &QRootQ) -> BigRational {
        &x.a * &x.a - &x.b * &x.b * self.q_big()
    }

    pub fn inv(&self, x: &QRootQ) -> Result<QRootQ, ArithError> {
        if x.is_zero() {
            return Err(ArithError::DivisionByZero { q: self.q });
        }
        if x.b.is_zero() {
            return Ok(QRootQ::from_rational(x.a.recip()));
        }
        // q is not a square here, so the norm of a nonzero element is nonzero.
        let n = self.norm(x);
        Ok(QRootQ { a: &x.a / &n, b: -(&x.b / &n) })
    }

    pub fn div(&self, x: &QRootQ, y: &QRootQ) -> Result<QRootQ, ArithError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Floating point shadow `a + b*sqrt(q)`.
    pub fn to_f64(&self, x: &QRootQ) -> f64 {
        let a = x.a.to_f64().unwrap_or(f64::NAN);
        let b = x.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.q as f64).sqrt()
    }

    /// JSON form `{"a": "p/r", "b": "s/t", "q": n}`.
    pub fn to_json(&self, x: &QRootQ) -> Value {
        json!({ "a": x.a.to_string(), "b": x.b.to_string(), "q": self.q })
    }

    pub fn from_json(&self, v: &Value) -> Result<QRootQ, ArithError> {
        let field = |k: &str| -> Result<BigRational, ArithError> {
            let s = v
                .get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| ArithError::Malformed(format!("missing string field {k:?}")))?;
            s.parse::<BigRational>().map_err(|e| ArithError::Malformed(format!("{s}: {e}")))
        };
        let q = v.get("q").and_then(Value::as_u64);
        if q != Some(self.q) {
            return Err(ArithError::Malformed(format!("expected q = {}, got {:?}", self.q, q)));
        }
        let (a, b) = (field("a")?, field("b")?);
        if self.root.is_some() && !b.is_zero() {
            return Err(ArithError::Malformed("nonzero b over a perfect square q".into()));
        }
        Ok(QRootQ { a, b })
    }
}

fn rat_pow(base: &BigRational, k: i64) -> BigRational {
    let e = k.unsigned_abs();
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    if k.is_negative() {
        acc.recip()
    } else {
        acc
    }
}
