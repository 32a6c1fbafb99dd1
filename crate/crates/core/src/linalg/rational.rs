//! Exact rationals with an `i64` fast path.
//!
//! Values are always normalized: the denominator is positive and coprime to
//! the numerator, and a value that fits in `i64/i64` is stored inline.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

/// A normalized exact rational number.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// Builds `num/den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(n.unsigned_abs(), d as u128);
        if g > 1 {
            n /= g as i128;
            d /= g as i128;
        }
        if n >= i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with positive denominators.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.denom().is_one(),
        }
    }

    /// The value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Rational(Repr::Small(s, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(n) => Self::from_i128(n, z),
                        None => Self::from_big(self.to_big() + other.to_big()),
                    },
                    _ => Self::from_big(self.to_big() + other.to_big()),
                }
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) if *n != i64::MIN => Rational(Repr::Small(-n, *d)),
            _ => Self::from_big(-self.to_big()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Rational(Repr::Small(p, 1));
                    }
                }
                let n = (*a as i128) * (*c as i128);
                let z = (*b as i128) * (*d as i128);
                Self::from_i128(n, z)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
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
            Repr::Big(r) => {
                1u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Error returned when a string is not of the form `a` or `a/b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Self::from_bigints(n, d))
    }
}

/// Rational roots of a polynomial with rational coefficients (low degree first).
///
/// Returns `None` when the rational root test would need to factor integers
/// beyond `10^12`.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    // strip factors of x
    let mut shift = 0;
    while c[shift].is_zero() {
        shift += 1;
    }
    if shift > 0 {
        roots.push(Rational::ZERO);
        c.drain(..shift);
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let a0 = ints[0].abs().to_u64()?;
    let an = ints.last().unwrap().abs().to_u64()?;
    const LIMIT: u64 = 1_000_000_000_000;
    if a0 > LIMIT || an > LIMIT {
        return None;
    }
    let ps = divisors(a0);
    let qs = divisors(an);
    let mut seen = std::collections::BTreeSet::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let r = Rational::from_bigints(BigInt::from(*p as i64 * sign), BigInt::from(*q));
                if seen.insert(r.clone()) && eval(&c, &r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Some(roots)
}

fn eval(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::ZERO, |acc, a| acc.mul(x).add(a))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
        assert_eq!(Rational::new(3, 3), Rational::ONE);
        assert_eq!(Rational::new(0, -7), Rational::ZERO);
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_int(i64::MAX);
        let s = big.add(&big);
        assert_eq!(s.to_string(), "18446744073709551614");
        let back = s.sub(&big);
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let p = big.mul(&big).div(&big).unwrap();
        assert_eq!(p, big);
    }

    #[test]
    fn parse_and_display() {
        let r: Rational = "-6/8".parse().unwrap();
        assert_eq!(r.to_string(), "-3/4");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!("17".parse::<Rational>().unwrap(), Rational::from_int(17));
    }

    #[test]
    fn roots_of_quadratic() {
        // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
        let c = [Rational::new(-3, 2), Rational::new(5, 2), Rational::ONE];
        let mut r = rational_roots(&c).unwrap();
        r.sort();
        assert_eq!(r, vec![Rational::from_int(-3), Rational::new(1, 2)]);
        // x^2 + 1 has none
        let c = [Rational::ONE, Rational::ZERO, Rational::ONE];
        assert!(rational_roots(&c).unwrap().is_empty());
    }
}
