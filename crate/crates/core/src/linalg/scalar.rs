use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Base field of a computation: the rationals or a prime field `F_p` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    Rationals,
    Prime { p: u32 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    /// The prime field `F_p`, rejecting composites and `p >= 2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        Ok(Field::Prime { p: p as u32 })
    }

    /// Re-checks a deserialized field.
    pub fn validate(self) -> Result<Field> {
        match self {
            Field::Rationals => Ok(self),
            Field::Prime { p } => Field::prime(p as u64),
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime { p } => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Rational::from_int(n)),
            Field::Prime { p } => Scalar::F { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    /// Image of a rational in this field; `None` when the denominator vanishes mod p.
    pub fn from_rational(self, r: &Rational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(Scalar::Q(r.clone())),
            Field::Prime { p } => {
                let m = num_bigint::BigInt::from(p);
                let reduce = |x: num_bigint::BigInt| -> i64 {
                    let v = ((x % &m) + &m) % &m;
                    i64::try_from(v).expect("reduced below p")
                };
                let n = self.from_i64(reduce(r.numer()));
                let d = self.from_i64(reduce(r.denom()));
                d.inv().map(|di| n.mul_ref(&di))
            }
        }
    }

    /// Sign `(-1)^k` as a field element.
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// All field elements when the field is finite and small enough to enumerate.
    pub fn elements(self, limit: u32) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime { p } if p <= limit => Some((0..p).map(|v| Scalar::F { v, p }).collect()),
            _ => None,
        }
    }

    pub fn short_name(self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Prime { p } => format!("F{p}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short_name())
    }
}

/// An element of a [`Field`]. Mixing elements of different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    F { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::F { p, .. } => Field::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::F { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::F { v, .. } => *v == 1,
        }
    }

    pub fn add_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => {
                Scalar::F { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("field mismatch in addition"),
        }
    }

    pub fn sub_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.sub(b)),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => {
                Scalar::F { v: ((*a as u64 + (*p - *b) as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("field mismatch in subtraction"),
        }
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => {
                Scalar::F { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("field mismatch in multiplication"),
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::F { v, p } => Scalar::F { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(a) => a.inv().map(Scalar::Q),
            Scalar::F { v, p } => {
                if *v == 0 {
                    return None;
                }
                Some(Scalar::F { v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, p: *p })
            }
        }
    }

    /// `self += a * b`, the inner-loop update of elimination and products.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (&mut *self, a, b) {
            (Scalar::F { v, p }, Scalar::F { v: x, .. }, Scalar::F { v: y, .. }) => {
                let m = *p as u64;
                *v = ((*v as u64 + (*x as u64 * *y as u64) % m) % m) as u32;
            }
            _ => {
                let t = self.add_ref(&a.mul_ref(b));
                *self = t;
            }
        }
    }

    /// The value as a rational, when over the rationals.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::F { .. } => None,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::F { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_ref(o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.sub_ref(o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_ref(o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(2147483647).is_ok());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1 << 31).is_err());
    }

    #[test]
    fn modular_inverse_and_negation() {
        let f = Field::prime(7).unwrap();
        for n in 1..7 {
            let a = f.from_i64(n);
            assert!(a.mul_ref(&a.inv().unwrap()).is_one());
            assert!(a.add_ref(&a.neg_ref()).is_zero());
        }
        assert!(f.zero().inv().is_none());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = Field::prime(5).unwrap();
        let half = f.from_rational(&Rational::new(1, 2)).unwrap();
        assert_eq!(half, f.from_i64(3));
        assert!(f.from_rational(&Rational::new(1, 5)).is_none());
        assert_eq!(f.from_rational(&Rational::new(-7, 3)).unwrap(), f.from_i64(1));
    }

    #[test]
    fn field_json_shape() {
        let s = serde_json::to_string(&Field::Prime { p: 5 }).unwrap();
        assert_eq!(s, r#"{"kind":"prime","p":5}"#);
        let q: Field = serde_json::from_str(r#"{"kind":"rationals"}"#).unwrap();
        assert_eq!(q, Field::Rationals);
    }
}
