//! Field elements for the colorings.
//!
//! Three kinds share one [`Scalar`] type so that the ansatz and relation code
//! can run unchanged over exact rationals, a prime field, or `f64`:
//!
//! * `rational`: arbitrary-precision fractions, always in lowest terms;
//! * `prime:p`: residues modulo a prime `p >= 101`;
//! * `float64`: IEEE doubles, only ever compared with a tolerance.
//!
//! Text forms: rationals print as `num/den` (`5` for integers), residues as
//! decimal integers, doubles as their shortest round-trip decimal.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest prime modulus accepted for `prime:p` fields.
pub const MIN_PRIME: u64 = 101;

/// Bound on numerators and denominators of sampled rationals.
pub const RATIONAL_SAMPLE_BOUND: i64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldConfig {
    Rational,
    Prime { p: u64 },
    Float64,
}

impl FieldConfig {
    /// A prime field, rejecting composite or too-small moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p < MIN_PRIME {
            return Err(Error::InvalidField(format!(
                "modulus {p} is below the minimum {MIN_PRIME}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(FieldConfig::Prime { p })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldConfig::Float64)
    }

    /// Re-checks the prime invariant for configurations that came from
    /// deserialization.
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldConfig::Prime { p } => FieldConfig::prime(p).map(|_| ()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rational => f.write_str("rational"),
            FieldConfig::Prime { p } => write!(f, "prime:{p}"),
            FieldConfig::Float64 => f.write_str("float64"),
        }
    }
}

impl FromStr for FieldConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(FieldConfig::Rational),
            "float64" => Ok(FieldConfig::Float64),
            _ => {
                let p = s
                    .strip_prefix("prime:")
                    .ok_or_else(|| Error::InvalidField(format!("unknown field {s:?}")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad modulus in {s:?}")))?;
                FieldConfig::prime(p)
            }
        }
    }
}

/// Deterministic Miller-Rabin; the base set is exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An element of one of the supported fields.
///
/// `==` is structural. For `Float` it compares bit patterns, which is not a
/// numerical comparison; numerical code goes through [`Scalar::exact_eq`] or
/// [`Scalar::approx_eq`].
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
    Float(f64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, p: q }) => p == q && a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Scalar {
    pub fn from_i64(field: FieldConfig, v: i64) -> Scalar {
        match field {
            FieldConfig::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldConfig::Prime { p } => Scalar::Prime {
                value: (v as i128).rem_euclid(p as i128) as u64,
                p,
            },
            FieldConfig::Float64 => Scalar::Float(v as f64),
        }
    }

    /// `num/den` reduced into `field`. Fails when `den` is zero or not invertible.
    pub fn from_fraction(field: FieldConfig, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match field {
            FieldConfig::Rational => Ok(Scalar::Rational(BigRational::new(num.into(), den.into()))),
            _ => Scalar::from_i64(field, num).checked_div(&Scalar::from_i64(field, den)),
        }
    }

    pub fn zero(field: FieldConfig) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldConfig) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn field(&self) -> FieldConfig {
        match self {
            Scalar::Rational(_) => FieldConfig::Rational,
            Scalar::Prime { p, .. } => FieldConfig::Prime { p: *p },
            Scalar::Float(_) => FieldConfig::Float64,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Prime { value, .. } => *value as f64,
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: mul_mod(*a, *b, *p),
                p: *p,
            },
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            // Fermat: a^(p-2) = a^-1.
            Scalar::Prime { value, p } => Scalar::Prime {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
            Scalar::Float(a) => Scalar::Float(1.0 / a),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    /// Exact equality; refuses float64 operands.
    pub fn exact_eq(&self, other: &Scalar) -> Result<bool> {
        self.same_field(other)?;
        if !self.field().is_exact() {
            return Err(Error::InexactComparison);
        }
        Ok(self == other)
    }

    /// `|a - b| <= tol` in `f64`; for exact kinds this is the exact comparison.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> Result<bool> {
        self.same_field(other)?;
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => Ok((a - b).abs() <= tol),
            _ => Ok(self == other),
        }
    }

    /// Parses the text form of a scalar of the given field.
    pub fn parse(field: FieldConfig, text: &str) -> Result<Scalar> {
        let bad = |reason: &str| Error::ParseScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        match field {
            FieldConfig::Rational => {
                let (num, den) = match t.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (t, "1"),
                };
                let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
                let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldConfig::Prime { p } => {
                let v: i128 = t.parse().map_err(|_| bad("not an integer"))?;
                Ok(Scalar::Prime {
                    value: v.rem_euclid(p as i128) as u64,
                    p,
                })
            }
            FieldConfig::Float64 => {
                let v: f64 = t.parse().map_err(|_| bad("not a number"))?;
                Ok(Scalar::Float(v))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// Operator forms panic on field mismatch or division by zero; both are
// programming errors at the call sites that use them.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("Scalar::", stringify!($method)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Draws one scalar from the field's sampling pool.
pub fn sample_scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldConfig) -> Scalar {
    match field {
        FieldConfig::Rational => {
            let b = RATIONAL_SAMPLE_BOUND;
            let num = rng.gen_range(-b..=b);
            let den = loop {
                let d = rng.gen_range(-b..=b);
                if d != 0 {
                    break d;
                }
            };
            Scalar::Rational(BigRational::new(num.into(), den.into()))
        }
        FieldConfig::Prime { p } => Scalar::Prime {
            value: rng.gen_range(0..p),
            p,
        },
        FieldConfig::Float64 => Scalar::Float(rng.gen_range(-1.0..=1.0)),
    }
}

/// True when the stored rational is canonical: lowest terms, positive denominator.
pub fn is_canonical(r: &BigRational) -> bool {
    use num_integer::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
