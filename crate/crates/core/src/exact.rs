//! Exact arithmetic in the real quadratic field Q(√3).
//!
//! Every coordinate produced by the honeypie reflections lies in Q(√3), so all
//! geometric predicates (equality, ordering of lengths, angle comparisons) are
//! decided here without any floating-point rounding. Rationals are kept in
//! lowest terms with a positive denominator; small values live in machine
//! integers and spill into big integers only when a result no longer fits.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical form.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// numerator, denominator; denominator > 0, gcd = 1.
    Small(i64, i64),
    /// Only used when the value does not fit `Small`.
    Big(BigRational),
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    pub fn integer(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `n / d`. Panics if `d == 0`; use [`Rational::checked_div`] for fallible division.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with positive denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Rational::integer(n.div_floor(d)),
            Repr::Big(b) => Rational::from_big(b.floor()),
        }
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self - &self.floor()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rational::from_big(self.to_big() / rhs.to_big()),
        })
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn square(&self) -> Rational {
        self * self
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Rational::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rational::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rational::ZERO,
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Rational::from_big(-self.to_big()),
            },
            Repr::Big(b) => Rational::from_big(-b.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add);
forward_binop!(Rational, Sub, sub);
forward_binop!(Rational, Mul, mul);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The number `a + b√3` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QSqrt3 {
    a: Rational,
    b: Rational,
}

impl QSqrt3 {
    pub const ZERO: QSqrt3 = QSqrt3 { a: Rational::ZERO, b: Rational::ZERO };
    pub const ONE: QSqrt3 = QSqrt3 { a: Rational::ONE, b: Rational::ZERO };
    /// √3
    pub const SQRT3: QSqrt3 = QSqrt3 { a: Rational::ZERO, b: Rational::ONE };

    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt3 { a, b: Rational::ZERO }
    }

    /// `(an/ad) + (bn/bd)√3`
    pub fn frac(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt3 { a: Rational::new(an, ad), b: Rational::new(bn, bd) }
    }

    pub fn int(n: i64) -> Self {
        QSqrt3::rational(Rational::integer(n))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `a - b√3`
    pub fn conjugate(&self) -> Self {
        QSqrt3 { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a² - 3b²`, zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.a.square() - &(&Rational::integer(3) * &self.b.square())
    }

    /// Sign of the real value, decided with rational comparisons only.
    pub fn sign(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: the term with the larger square dominates
        let a2 = self.a.square();
        let b2 = &Rational::integer(3) * &self.b.square();
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Ordering of real values (the derived `Ord` is structural, not numeric).
    pub fn value_cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QSqrt3 { a: self.a.checked_div(&n)?, b: (-&self.b).checked_div(&n)? })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Floating shadow of the exact value; diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Reduces the rational part modulo 1, leaving the √3 part intact.
    pub fn fract_rational(&self) -> Self {
        QSqrt3 { a: self.a.fract(), b: self.b.clone() }
    }

    /// True if the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }
}

impl From<i64> for QSqrt3 {
    fn from(n: i64) -> Self {
        QSqrt3::int(n)
    }
}

impl From<Rational> for QSqrt3 {
    fn from(r: Rational) -> Self {
        QSqrt3::rational(r)
    }
}

impl<'a> Add<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: &QSqrt3) -> QSqrt3 {
        // (a + b√3)(c + d√3) = (ac + 3bd) + (ad + bc)√3
        if rhs.b.is_zero() {
            return QSqrt3 { a: &self.a * &rhs.a, b: &self.b * &rhs.a };
        }
        if self.b.is_zero() {
            return QSqrt3 { a: &self.a * &rhs.a, b: &self.a * &rhs.b };
        }
        let bd = &self.b * &rhs.b;
        QSqrt3 {
            a: &(&self.a * &rhs.a) + &(&bd + &(&bd + &bd)),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }
}

impl<'a> Div<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    /// Panics on division by zero; use [`QSqrt3::checked_div`] to handle it.
    fn div(self, rhs: &QSqrt3) -> QSqrt3 {
        self.checked_div(rhs).expect("division by zero in Q(sqrt3)")
    }
}

impl Neg for &QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3 { a: -&self.a, b: -&self.b }
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        -&self
    }
}

forward_binop!(QSqrt3, Add, add);
forward_binop!(QSqrt3, Sub, sub);
forward_binop!(QSqrt3, Mul, mul);
forward_binop!(QSqrt3, Div, div);

impl fmt::Display for QSqrt3 {
    /// `p/q+r/s*sqrt3`, omitting zero terms; a unit √3 coefficient is written `sqrt3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b_term = |f: &mut fmt::Formatter<'_>, b: &Rational| {
            if *b == Rational::ONE {
                write!(f, "sqrt3")
            } else if *b == -Rational::ONE {
                write!(f, "-sqrt3")
            } else {
                write!(f, "{b}*sqrt3")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => b_term(f, &self.b),
            (false, false) => {
                write!(f, "{}", self.a)?;
                if self.b.signum() > 0 {
                    write!(f, "+")?;
                }
                b_term(f, &self.b)
            }
        }
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QSqrt3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let Some(head) = t.strip_suffix("sqrt3") else {
            return Ok(QSqrt3::rational(t.parse().map_err(|_| bad())?));
        };
        // head is "", "-", "+", "<coef>*", "<a>+<coef>*", "<a>+", "<a>-", ...
        let head = head.strip_suffix('*').unwrap_or(head);
        // the rational part ends at the last sign that is not leading
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if a_str.is_empty() { Rational::ZERO } else { a_str.parse().map_err(|_| bad())? };
        let b = match b_str {
            "" | "+" => Rational::ONE,
            "-" => -Rational::ONE,
            other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        Ok(QSqrt3 { a, b })
    }
}

impl serde::Serialize for QSqrt3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for QSqrt3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Point or vector of E³ with coordinates in Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, serde::Serialize, serde::Deserialize)]
pub struct Vec3Q(pub [QSqrt3; 3]);

impl Vec3Q {
    pub fn new(x: QSqrt3, y: QSqrt3, z: QSqrt3) -> Self {
        Vec3Q([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3Q::default()
    }

    pub fn x(&self) -> &QSqrt3 {
        &self.0[0]
    }

    pub fn y(&self) -> &QSqrt3 {
        &self.0[1]
    }

    pub fn z(&self) -> &QSqrt3 {
        &self.0[2]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(QSqrt3::is_zero)
    }

    pub fn scale(&self, k: &QSqrt3) -> Self {
        Vec3Q([&self.0[0] * k, &self.0[1] * k, &self.0[2] * k])
    }

    pub fn dot(&self, o: &Vec3Q) -> QSqrt3 {
        &(&(&self.0[0] * &o.0[0]) + &(&self.0[1] * &o.0[1])) + &(&self.0[2] * &o.0[2])
    }

    pub fn cross(&self, o: &Vec3Q) -> Vec3Q {
        let [a1, a2, a3] = &self.0;
        let [b1, b2, b3] = &o.0;
        Vec3Q([
            &(a2 * b3) - &(a3 * b2),
            &(a3 * b1) - &(a1 * b3),
            &(a1 * b2) - &(a2 * b1),
        ])
    }

    pub fn norm_sq(&self) -> QSqrt3 {
        self.dot(self)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.0[0].to_f64(), self.0[1].to_f64(), self.0[2].to_f64()]
    }
}

impl<'a> Add<&'a Vec3Q> for &'a Vec3Q {
    type Output = Vec3Q;
    fn add(self, o: &Vec3Q) -> Vec3Q {
        Vec3Q([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }
}

impl<'a> Sub<&'a Vec3Q> for &'a Vec3Q {
    type Output = Vec3Q;
    fn sub(self, o: &Vec3Q) -> Vec3Q {
        Vec3Q([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }
}

impl Neg for &Vec3Q {
    type Output = Vec3Q;
    fn neg(self) -> Vec3Q {
        Vec3Q([-&self.0[0], -&self.0[1], -&self.0[2]])
    }
}

forward_binop!(Vec3Q, Add, add);
forward_binop!(Vec3Q, Sub, sub);

impl fmt::Display for Vec3Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for Vec3Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 3×3 matrix over Q(√3), row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Mat3Q(pub [[QSqrt3; 3]; 3]);

impl Mat3Q {
    pub fn identity() -> Self {
        let mut m = Mat3Q::default();
        for i in 0..3 {
            m.0[i][i] = QSqrt3::ONE;
        }
        m
    }

    pub fn from_rows(rows: [Vec3Q; 3]) -> Self {
        let [r0, r1, r2] = rows;
        Mat3Q([r0.0, r1.0, r2.0])
    }

    pub fn from_cols(cols: [&Vec3Q; 3]) -> Self {
        let mut m = Mat3Q::default();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = c.0[i].clone();
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| if i == j { self.0[i][j] == QSqrt3::ONE } else { self.0[i][j].is_zero() })
        })
    }

    pub fn transpose(&self) -> Self {
        let mut m = Mat3Q::default();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].clone();
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat3Q) -> Mat3Q {
        let mut m = Mat3Q::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = QSqrt3::ZERO;
                for k in 0..3 {
                    if self.0[i][k].is_zero() || o.0[k][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.0[i][k] * &o.0[k][j]);
                }
                m.0[i][j] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vec3Q) -> Vec3Q {
        let row = |i: usize| {
            let mut acc = QSqrt3::ZERO;
            for k in 0..3 {
                if self.0[i][k].is_zero() || v.0[k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.0[i][k] * &v.0[k]);
            }
            acc
        };
        Vec3Q([row(0), row(1), row(2)])
    }

    pub fn det(&self) -> QSqrt3 {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        let t0 = &m[0][0] * &minor(1, 2, 2, 1);
        let t1 = &m[0][1] * &minor(0, 2, 2, 0);
        let t2 = &m[0][2] * &minor(0, 1, 1, 0);
        &(&t0 - &t1) + &t2
    }

    /// Exact inverse via the adjugate.
    pub fn inverse(&self) -> Result<Mat3Q> {
        let det = self.det();
        let inv_det = det.recip()?;
        let m = &self.0;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0]);
        // adjugate = transpose of cofactor matrix
        let adj = [
            [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
            [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
            [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
        ];
        let mut out = Mat3Q::default();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = &adj[i][j] * &inv_det;
            }
        }
        Ok(out)
    }
}
