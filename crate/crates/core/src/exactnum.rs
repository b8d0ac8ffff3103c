//! Exact arithmetic in a real quadratic field ℚ(√d).
//!
//! Every length, coordinate and window endpoint in the crate is a
//! [`QuadraticRational`]. Comparisons are decided exactly from the rational
//! parts; floating point only appears in [`QuadraticRational::to_f64`], which
//! is used for reports.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("discriminant mismatch: sqrt({0}) vs sqrt({1})")]
    DiscriminantMismatch(u64, u64),
    #[error("discriminant {0} is not square-free (or is 1)")]
    NotSquareFree(u64),
    #[error("cannot parse number {0:?}: {1}")]
    Parse(String, String),
}

/// Field operation selector for [`QuadraticRational::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The number `rat + surd·√disc`.
///
/// Both parts are kept in lowest terms with positive denominators, so two
/// values are equal iff they are structurally equal. Pure rationals carry the
/// discriminant of the field they were created in; `disc == 0` denotes the
/// field ℚ itself and forces `surd == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticRational {
    rat: BigRational,
    surd: BigRational,
    disc: u64,
}

fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return true;
    }
    if d == 1 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// A field context ℚ(√d); a convenience factory for values sharing `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    disc: u64,
}

impl QuadField {
    pub fn new(disc: u64) -> Result<Self, NumError> {
        if !is_square_free(disc) {
            return Err(NumError::NotSquareFree(disc));
        }
        Ok(QuadField { disc })
    }

    /// ℚ itself.
    pub fn rationals() -> Self {
        QuadField { disc: 0 }
    }

    /// ℚ(√5), home of the golden ratio.
    pub fn golden() -> Self {
        QuadField { disc: 5 }
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn zero(&self) -> QuadraticRational {
        self.int(0)
    }

    pub fn one(&self) -> QuadraticRational {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> QuadraticRational {
        QuadraticRational {
            rat: BigRational::from_integer(BigInt::from(n)),
            surd: BigRational::zero(),
            disc: self.disc,
        }
    }

    pub fn ratio(&self, p: i64, q: i64) -> QuadraticRational {
        QuadraticRational {
            rat: BigRational::new(BigInt::from(p), BigInt::from(q)),
            surd: BigRational::zero(),
            disc: self.disc,
        }
    }

    /// `(p1/q1) + (p2/q2)·√d`.
    pub fn elem(&self, p1: i64, q1: i64, p2: i64, q2: i64) -> QuadraticRational {
        self.from_parts(
            BigRational::new(p1.into(), q1.into()),
            BigRational::new(p2.into(), q2.into()),
        )
    }

    pub fn from_parts(&self, rat: BigRational, surd: BigRational) -> QuadraticRational {
        let surd = if self.disc == 0 { BigRational::zero() } else { surd };
        QuadraticRational { rat, surd, disc: self.disc }
    }

    /// The golden ratio (1+√5)/2. Panics outside ℚ(√5).
    pub fn tau(&self) -> QuadraticRational {
        assert_eq!(self.disc, 5, "tau lives in Q(sqrt 5)");
        self.elem(1, 2, 1, 2)
    }

    /// Parse text form, rejecting a `sqrt(d')` with `d' != d`. Pure
    /// rationals are lifted into this field.
    pub fn parse(&self, s: &str) -> Result<QuadraticRational, NumError> {
        let v: QuadraticRational = s.parse()?;
        if v.disc == self.disc || v.is_rational() {
            Ok(QuadraticRational { disc: self.disc, ..v })
        } else {
            Err(NumError::DiscriminantMismatch(v.disc, self.disc))
        }
    }

    /// `n·a + m·b` for integer coefficients.
    pub fn combine(&self, n: i64, a: &QuadraticRational, m: i64, b: &QuadraticRational) -> QuadraticRational {
        &a.scale_int(n) + &b.scale_int(m)
    }
}

impl QuadraticRational {
    pub fn new(rat: BigRational, surd: BigRational, disc: u64) -> Result<Self, NumError> {
        let field = QuadField::new(disc)?;
        if disc == 0 && !surd.is_zero() {
            return Err(NumError::Parse(
                format!("{rat} + {surd}*sqrt(0)"),
                "surd part requires a non-zero discriminant".into(),
            ));
        }
        Ok(field.from_parts(rat, surd))
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn field(&self) -> QuadField {
        QuadField { disc: self.disc }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.surd.is_zero() && self.rat.is_integer()
    }

    fn check(&self, other: &Self) -> Result<(), NumError> {
        if self.disc == other.disc {
            Ok(())
        } else {
            Err(NumError::DiscriminantMismatch(self.disc, other.disc))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        self.check(other)?;
        Ok(QuadraticRational {
            rat: &self.rat + &other.rat,
            surd: &self.surd + &other.surd,
            disc: self.disc,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumError> {
        self.check(other)?;
        Ok(QuadraticRational {
            rat: &self.rat - &other.rat,
            surd: &self.surd - &other.surd,
            disc: self.disc,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        self.check(other)?;
        let d = BigRational::from_integer(BigInt::from(self.disc));
        Ok(QuadraticRational {
            rat: &self.rat * &other.rat + &self.surd * &other.surd * d,
            surd: &self.rat * &other.surd + &self.surd * &other.rat,
            disc: self.disc,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        self.check(other)?;
        if other.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // x / y = x·ȳ / N(y)
        let norm = other.norm();
        let num = self.checked_mul(&other.conj())?;
        Ok(QuadraticRational {
            rat: num.rat / &norm,
            surd: num.surd / &norm,
            disc: self.disc,
        })
    }

    pub fn arith(op: ArithOp, x: &Self, y: &Self) -> Result<Self, NumError> {
        match op {
            ArithOp::Add => x.checked_add(y),
            ArithOp::Sub => x.checked_sub(y),
            ArithOp::Mul => x.checked_mul(y),
            ArithOp::Div => x.checked_div(y),
        }
    }

    /// Galois conjugate `rat − surd·√d`.
    pub fn conj(&self) -> Self {
        QuadraticRational {
            rat: self.rat.clone(),
            surd: -&self.surd,
            disc: self.disc,
        }
    }

    /// Field norm `rat² − surd²·d`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat
            - &self.surd * &self.surd * BigRational::from_integer(BigInt::from(self.disc))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(n));
        QuadraticRational {
            rat: &self.rat * &k,
            surd: &self.surd * &k,
            disc: self.disc,
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadraticRational {
            rat: &self.rat * k,
            surd: &self.surd * k,
            disc: self.disc,
        }
    }

    /// Exact sign in {−1, 0, +1}.
    pub fn sign(&self) -> i32 {
        let sp = sign_of(&self.rat);
        let sq = sign_of(&self.surd);
        if sq == 0 || sp == sq {
            return if sp != 0 { sp } else { sq };
        }
        if sp == 0 {
            return sq;
        }
        // opposite signs: compare p² with q²d; equality is impossible for
        // square-free d > 1 unless both vanish.
        let p2 = &self.rat * &self.rat;
        let q2d = &self.surd * &self.surd * BigRational::from_integer(BigInt::from(self.disc));
        if p2 > q2d {
            sp
        } else {
            sq
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Double-precision approximation, for reports only.
    pub fn to_f64(&self) -> f64 {
        let sqrt_d = (self.disc as f64).sqrt();
        let p = self.rat.to_f64().unwrap_or(f64::NAN);
        let q = self.surd.to_f64().unwrap_or(f64::NAN);
        if sign_of(&self.rat) * sign_of(&self.surd) >= 0 {
            p + q * sqrt_d
        } else {
            // avoid cancellation: (p² − q²d) / (p − q√d)
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            n / (p - q * sqrt_d)
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        // bracket the surd term with an integer square root, then correct
        let surd_approx = if self.surd.is_zero() {
            BigRational::zero()
        } else {
            let m = &self.surd * &self.surd * BigRational::from_integer(BigInt::from(self.disc));
            let (a, b) = (m.numer().clone(), m.denom().clone());
            let s = (&a * &b).sqrt();
            let v = BigRational::new(s, b);
            if self.surd.is_negative() {
                -v
            } else {
                v
            }
        };
        let mut guess = (&self.rat + surd_approx).floor().to_integer();
        let field = self.field();
        loop {
            let g = field.from_parts(BigRational::from_integer(guess.clone()), BigRational::zero());
            if (self - &g).sign() < 0 {
                guess -= 1;
                continue;
            }
            let g1 = field.from_parts(BigRational::from_integer(&guess + 1), BigRational::zero());
            if (self - &g1).sign() >= 0 {
                guess += 1;
                continue;
            }
            return guess;
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Distance-to-nearest-integer data: the nearest integer, and whether
    /// `self` lies strictly closer than `margin` to a half-integer.
    pub fn nearest_integer(&self, margin: &BigRational) -> (BigInt, bool) {
        let half = self.field().from_parts(BigRational::new(1.into(), 2.into()), BigRational::zero());
        let k = (self + &half).floor();
        // nearest half-integers are k − 1/2 and k + 1/2
        let kq = self.field().from_parts(BigRational::from_integer(k.clone()), BigRational::zero());
        let off = self - &kq; // in [−1/2, 1/2)
        let to_half = &half - &off.abs();
        let near_half = to_half.sign() >= 0 && (to_half - self.field().from_parts(margin.clone(), BigRational::zero())).sign() < 0;
        (k, near_half)
    }

    /// Compact text form without spaces, used as presentation labels.
    pub fn compact(&self) -> String {
        self.to_string().replace(' ', "")
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Ord for QuadraticRational {
    /// Panics on mixed discriminants.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.checked_sub(other).expect("comparison across fields").sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for QuadraticRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a QuadraticRational> for &'a QuadraticRational {
            type Output = QuadraticRational;
            fn $m(self, rhs: &'a QuadraticRational) -> QuadraticRational {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $tr<QuadraticRational> for QuadraticRational {
            type Output = QuadraticRational;
            fn $m(self, rhs: QuadraticRational) -> QuadraticRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadraticRational> for QuadraticRational {
            type Output = QuadraticRational;
            fn $m(self, rhs: &'a QuadraticRational) -> QuadraticRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QuadraticRational> for &'a QuadraticRational {
            type Output = QuadraticRational;
            fn $m(self, rhs: QuadraticRational) -> QuadraticRational {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        QuadraticRational {
            rat: -&self.rat,
            surd: -&self.surd,
            disc: self.disc,
        }
    }
}

impl Neg for QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        -&self
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadraticRational {
    /// `p/q + r/s*sqrt(d)`, omitting zero parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", fmt_ratio(&self.rat));
        }
        let coeff = |c: &BigRational| {
            if c.is_one() {
                String::new()
            } else {
                format!("{}*", fmt_ratio(c))
            }
        };
        let s = format!("sqrt({})", self.disc);
        if self.rat.is_zero() {
            if self.surd.is_negative() {
                write!(f, "-{}{}", coeff(&-&self.surd), s)
            } else {
                write!(f, "{}{}", coeff(&self.surd), s)
            }
        } else if self.surd.is_negative() {
            write!(f, "{} - {}{}", fmt_ratio(&self.rat), coeff(&-&self.surd), s)
        } else {
            write!(f, "{} + {}{}", fmt_ratio(&self.rat), coeff(&self.surd), s)
        }
    }
}

fn parse_ratio(s: &str, whole: &str) -> Result<BigRational, NumError> {
    let err = |m: &str| NumError::Parse(whole.to_string(), m.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err("bad integer"))?;
    let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for QuadraticRational {
    type Err = NumError;

    /// Accepts `p/q + r/s*sqrt(d)` with either part omitted, whitespace
    /// ignored, and `sqrt(d)` standing for `1*sqrt(d)`.
    fn from_str(text: &str) -> Result<Self, NumError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |m: &str| NumError::Parse(text.to_string(), m.to_string());
        if s.is_empty() {
            return Err(err("empty"));
        }
        // split into signed terms at top-level + / −
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if (c == '+' || c == '-') && depth == 0 && i > 0 && !cur.ends_with('/') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        terms.push(cur);
        let mut rat = BigRational::zero();
        let mut surd = BigRational::zero();
        let mut disc: Option<u64> = None;
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (value, is_surd) = if let Some(pos) = body.find("sqrt(") {
                let coeff = &body[..pos];
                let rest = &body[pos + 5..];
                let inner = rest.strip_suffix(')').ok_or_else(|| err("unclosed sqrt"))?;
                let d: u64 = inner.parse().map_err(|_| err("bad discriminant"))?;
                if let Some(prev) = disc {
                    if prev != d {
                        return Err(NumError::DiscriminantMismatch(prev, d));
                    }
                }
                disc = Some(d);
                let c = match coeff {
                    "" => BigRational::one(),
                    c => parse_ratio(c.strip_suffix('*').ok_or_else(|| err("expected '*' before sqrt"))?, text)?,
                };
                (c, true)
            } else {
                (parse_ratio(body, text)?, false)
            };
            let value = if neg { -value } else { value };
            if is_surd {
                surd += value;
            } else {
                rat += value;
            }
        }
        QuadraticRational::new(rat, surd, disc.unwrap_or(0))
    }
}

impl Serialize for QuadraticRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadraticRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
