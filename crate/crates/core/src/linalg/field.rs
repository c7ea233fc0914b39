//! Coefficient fields: the rationals and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Exact rational number used for every matrix entry the library stores.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// A prime field, rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) && p < (1 << 31) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Rationals
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "q" | "Q" | "rationals" => Ok(FieldSpec::Rationals),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| LinalgError::BadField(other.to_string()))?;
                FieldSpec::prime(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field arithmetic on a concrete element representation.
pub(crate) trait FieldOps {
    type E: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_rational(&self, x: &Rational) -> Result<Self::E, LinalgError>;
    fn to_rational(&self, x: &Self::E) -> Rational;
}

pub(crate) struct QOps;

impl FieldOps for QOps {
    type E = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, x: &Rational) -> Result<Rational, LinalgError> {
        Ok(x.clone())
    }
    fn to_rational(&self, x: &Rational) -> Rational {
        x.clone()
    }
}

pub(crate) struct FpOps {
    pub p: u64,
}

impl FpOps {
    fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u64().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl FieldOps for FpOps {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_rational(&self, x: &Rational) -> Result<u64, LinalgError> {
        let num = self.reduce_int(x.numer());
        let den = self.reduce_int(x.denom());
        if den == 0 {
            return Err(LinalgError::DenominatorVanishes { p: self.p });
        }
        Ok(num * self.inv(&den) % self.p)
    }
    fn to_rational(&self, x: &u64) -> Rational {
        Rational::from_integer(BigInt::from(*x))
    }
}

/// Clears denominators of a sparse rational row and divides out the content,
/// giving a primitive integer row with the same span.
pub(crate) fn primitive_integer_row(row: &[(usize, Rational)]) -> Vec<(usize, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, x) in row {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<(usize, BigInt)> = row
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (*c, (x * Rational::from_integer(lcm.clone())).to_integer()))
        .collect();
    make_primitive(ints)
}

pub(crate) fn make_primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let mut g = BigInt::zero();
    for (_, x) in &row {
        g = g.gcd(x);
        if g.is_one() {
            return row;
        }
    }
    if g.is_zero() {
        row.clear();
        return row;
    }
    for (_, x) in row.iter_mut() {
        *x /= &g;
    }
    if row.first().map(|(_, x)| x.is_negative()).unwrap_or(false) {
        for (_, x) in row.iter_mut() {
            *x = -x.clone();
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_flags() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("101".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(101));
        assert!("4".parse::<FieldSpec>().is_err());
        assert!("x".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = FpOps { p: 101 };
        for a in 1..101 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), 51);
        let g = FpOps { p: 2 };
        assert!(g.from_rational(&half).is_err());
    }
}
