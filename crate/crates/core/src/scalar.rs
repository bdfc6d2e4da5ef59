//! Exact coefficients: arbitrary-precision rationals or residues modulo a prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// The coefficient ring κ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ring {
    Rational,
    Prime(u64),
}

impl Ring {
    pub fn prime(p: u64) -> Result<Ring> {
        if !(2..=(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::BadShape(format!("{p} is not a supported prime modulus")));
        }
        Ok(Ring::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Ring::Prime(p) => Scalar::Modular { value: n.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    /// Parses "3", "-3/4" or "2 mod 5" (the modulus must match this ring).
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadShape(format!("cannot read scalar {text:?} over {self}"));
        let text = text.trim();
        if let Some((value, modulus)) = text.split_once("mod") {
            let modulus: u64 = modulus.trim().parse().map_err(|_| bad())?;
            if self != Ring::Prime(modulus) {
                return Err(bad());
            }
            let value: BigInt = value.trim().parse().map_err(|_| bad())?;
            let p = BigInt::from(modulus);
            let r = ((value % &p) + &p) % &p;
            return Ok(Scalar::Modular { value: r.try_into().map_err(|_| bad())?, modulus });
        }
        let q: BigRational = match text.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(text.parse().map_err(|_| bad())?),
        };
        match self {
            Ring::Rational => Ok(Scalar::Rational(q)),
            Ring::Prime(_) => {
                let num = self.big(q.numer());
                let den = self.big(q.denom());
                let inv = den.inverse().ok_or_else(bad)?;
                Ok(num * inv)
            }
        }
    }

    fn big(self, n: &BigInt) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Ring::Prime(p) => {
                let m = BigInt::from(p);
                let r: u64 = (((n % &m) + &m) % &m).try_into().expect("residue fits");
                Scalar::Modular { value: r, modulus: p }
            }
        }
    }

    /// Uniform residue over 𝔽_p; small integers in [-3, 3] over ℚ.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Ring::Rational => self.int(rng.gen_range(-3..=3)),
            Ring::Prime(p) => Scalar::Modular { value: rng.gen_range(0..p), modulus: p },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        loop {
            let c = self.random(rng);
            if !c.is_zero() {
                return c;
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "rational"),
            Ring::Prime(p) => write!(f, "mod {p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rational,
            Scalar::Modular { modulus, .. } => Ring::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => {
                Scalar::Modular { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        })
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "scalars from different prime fields");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular { value: (a + b) % p, modulus: p }
            }
            _ => panic!("scalars from different rings"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q }) => {
                let p = same_modulus(*p, *q);
                Scalar::Modular { value: a * b % p, modulus: p }
            }
            _ => panic!("scalars from different rings"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => {
                Scalar::Modular { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let q = Ring::Rational.parse("6/-8").unwrap();
        assert_eq!(q.to_string(), "-3/4");
    }

    #[test]
    fn modular_parse_and_inverse() {
        let f5 = Ring::prime(5).unwrap();
        let two = f5.parse("2 mod 5").unwrap();
        assert_eq!(two.inverse().unwrap(), f5.int(3));
        assert_eq!(f5.parse("1/2").unwrap(), f5.int(3));
        assert_eq!(f5.parse("-1").unwrap(), f5.int(4));
        assert!(f5.parse("2 mod 7").is_err());
        assert!(Ring::prime(6).is_err());
    }
}
