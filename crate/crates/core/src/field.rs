//! Exact scalars over ℚ, ℚ(i) and GF(p), with the involution used by `★`.
//!
//! Every [`Scalar`] carries its field, and arithmetic between scalars of
//! different fields is refused. Rationals are [`BigRational`]s, so values are
//! always reduced with a positive denominator and equality is structural.
//!
//! Literal grammar (shared by every text format):
//!
//! * rationals: `-12`, `3/4`
//! * Gaussian rationals: `a`, `bi`, `i`, `-i`, `a+bi`, `a-bi`, with `a`, `b`
//!   integers or fractions (`1/2-3/4i`)
//! * GF(p): integers, reduced mod p on input

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Modulus of a prime field.
///
/// Only odd primes can be built through [`PrimeModulus::new`]. GF(2) lies
/// outside the hypothesis of the consistency theorem and is available only
/// through [`PrimeModulus::char2_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    /// GF(2), for the characteristic-2 probe tooling only.
    pub fn char2_probe() -> Self {
        PrimeModulus(2)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_char2(self) -> bool {
        self.0 == 2
    }

    fn reduce_bigint(self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        v.mod_floor(&p).to_u64().expect("residue fits in u64")
    }

    fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.0 as u128 - b as u128) % self.0 as u128) as u64
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn inv(self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.0 as i128) as u64)
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin; these witnesses cover all of u64.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The field a scalar or matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rationals,
    GaussianRationals,
    Prime(PrimeModulus),
}

impl FieldTag {
    /// Odd prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        PrimeModulus::new(p).map(FieldTag::Prime)
    }

    pub fn gf2_probe() -> Self {
        FieldTag::Prime(PrimeModulus::char2_probe())
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldTag::Rationals | FieldTag::GaussianRationals => 0,
            FieldTag::Prime(p) => p.get(),
        }
    }

    pub fn is_char2(self) -> bool {
        self.characteristic() == 2
    }

    /// True when conjugation is not the identity.
    pub fn has_conjugation(self) -> bool {
        self == FieldTag::GaussianRationals
    }

    pub fn modulus(self) -> Option<PrimeModulus> {
        match self {
            FieldTag::Prime(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::GaussianRationals => write!(f, "QI"),
            FieldTag::Prime(p) => write!(f, "GF {}", p.get()),
        }
    }
}

impl Serialize for FieldTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian { re: BigRational, im: BigRational },
    Modular { value: u64, modulus: PrimeModulus },
}

impl Scalar {
    pub fn zero(tag: FieldTag) -> Self {
        Self::from_i64(tag, 0)
    }

    pub fn one(tag: FieldTag) -> Self {
        Self::from_i64(tag, 1)
    }

    pub fn from_i64(tag: FieldTag, v: i64) -> Self {
        Self::from_ratio(tag, BigRational::from_integer(v.into()))
            .expect("integers embed in every field")
    }

    /// Embed a rational. Fails in GF(p) when the denominator vanishes mod p.
    pub fn from_ratio(tag: FieldTag, r: BigRational) -> Result<Self> {
        Ok(match tag {
            FieldTag::Rationals => Scalar::Rational(r),
            FieldTag::GaussianRationals => Scalar::Gaussian {
                re: r,
                im: BigRational::zero(),
            },
            FieldTag::Prime(p) => {
                let num = p.reduce_bigint(r.numer());
                let den = p.reduce_bigint(r.denom());
                let inv = p.inv(den).ok_or(Error::DivisionByZero)?;
                Scalar::Modular {
                    value: p.mul(num, inv),
                    modulus: p,
                }
            }
        })
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar::Gaussian { re, im }
    }

    /// The imaginary unit of ℚ(i).
    pub fn i() -> Self {
        Scalar::Gaussian {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn modular(modulus: PrimeModulus, value: u64) -> Self {
        Scalar::Modular {
            value: value % modulus.get(),
            modulus,
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rationals,
            Scalar::Gaussian { .. } => FieldTag::GaussianRationals,
            Scalar::Modular { modulus, .. } => FieldTag::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gaussian { re, im } => re.is_one() && im.is_zero(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Real part (the value itself outside ℚ(i)).
    pub fn real_part(&self) -> Scalar {
        match self {
            Scalar::Gaussian { re, .. } => Scalar::Rational(re.clone()),
            other => other.clone(),
        }
    }

    /// Imaginary part as a rational; zero outside ℚ(i).
    pub fn imag_part(&self) -> Scalar {
        match self {
            Scalar::Gaussian { im, .. } => Scalar::Rational(im.clone()),
            other => Scalar::zero(other.tag()),
        }
    }

    /// Field involution: complex conjugation on ℚ(i), identity elsewhere.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Gaussian { re, im } => Scalar::Gaussian {
                re: re.clone(),
                im: -im,
            },
            other => other.clone(),
        }
    }

    fn check_same(&self, rhs: &Scalar) -> Result<()> {
        if self.tag() == rhs.tag() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.tag().to_string(),
                right: rhs.tag().to_string(),
            })
        }
    }

    /// Checked binary arithmetic.
    pub fn arith(&self, rhs: &Scalar, op: ArithOp) -> Result<Scalar> {
        self.check_same(rhs)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(rhs),
            ArithOp::Sub => self.sub_unchecked(rhs),
            ArithOp::Mul => self.mul_unchecked(rhs),
            ArithOp::Div => self.mul_unchecked(&rhs.inv()?),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Gaussian { re, im } => {
                let norm = re * re + im * im;
                Scalar::Gaussian {
                    re: re / &norm,
                    im: -im / &norm,
                }
            }
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: modulus.inv(*value).expect("nonzero residue"),
                modulus: *modulus,
            },
        })
    }

    fn add_unchecked(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a + c,
                    im: b + d,
                }
            }
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: modulus.add(*a, *b),
                    modulus: *modulus,
                }
            }
            _ => mismatch_panic(self, rhs),
        }
    }

    fn sub_unchecked(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a - c,
                    im: b - d,
                }
            }
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: modulus.sub(*a, *b),
                    modulus: *modulus,
                }
            }
            _ => mismatch_panic(self, rhs),
        }
    }

    fn mul_unchecked(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian { re: a, im: b }, Scalar::Gaussian { re: c, im: d }) => {
                Scalar::Gaussian {
                    re: a * c - b * d,
                    im: a * d + b * c,
                }
            }
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular {
                    value: modulus.mul(*a, *b),
                    modulus: *modulus,
                }
            }
            _ => mismatch_panic(self, rhs),
        }
    }

    fn neg_unchecked(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Gaussian { re, im } => Scalar::Gaussian { re: -re, im: -im },
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: modulus.sub(0, *value),
                modulus: *modulus,
            },
        }
    }

    /// Parse a literal in the given field.
    pub fn parse(text: &str, tag: FieldTag) -> Result<Scalar, String> {
        let s = text.trim();
        if s.is_empty() {
            return Err("empty scalar literal".into());
        }
        match tag {
            FieldTag::Rationals => parse_rational(s).map(Scalar::Rational),
            FieldTag::GaussianRationals => parse_gaussian(s),
            FieldTag::Prime(p) => {
                let v = parse_integer(s)?;
                Ok(Scalar::Modular {
                    value: p.reduce_bigint(&v),
                    modulus: p,
                })
            }
        }
    }
}

#[cold]
fn mismatch_panic(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.tag(), b.tag())
}

fn parse_integer(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid integer literal `{s}`"));
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|e| format!("`{s}`: {e}"))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    match s.split_once('/') {
        None => parse_integer(s).map(BigRational::from_integer),
        Some((num, den)) => {
            let num = parse_integer(num)?;
            if den.starts_with(['+', '-']) {
                return Err(format!("invalid denominator in `{s}`"));
            }
            let den = parse_integer(den)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

fn parse_gaussian(s: &str) -> Result<Scalar, String> {
    let Some(body) = s.strip_suffix('i') else {
        return parse_rational(s).map(|re| Scalar::gaussian(re, BigRational::zero()));
    };
    // Split before the last sign that is not leading: `a+bi`, `a-bi`.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last();
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        BigRational::zero()
    } else {
        parse_rational(re_text)?
    };
    let im = match im_text {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        t => parse_rational(t)?,
    };
    Ok(Scalar::gaussian(re, im))
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
            Scalar::Gaussian { re, im } => {
                if im.is_zero() {
                    return fmt_rational(re, f);
                }
                if !re.is_zero() {
                    fmt_rational(re, f)?;
                    if im.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if im.is_one() {
                    write!(f, "i")
                } else if (-im).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(im, f)?;
                    write!(f, "i")
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// Operator impls panic on a field mismatch; use `Scalar::arith` for a
// checked variant. Matrices guarantee a single field for all entries.
macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$imp(rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$imp(rhs)
            }
        }
    };
}

binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.arith(rhs, ArithOp::Div).expect("scalar division")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_unchecked()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_unchecked()
    }
}
