//! Coefficient fields: prime fields `F_p` with `p` a machine-word prime, and
//! the rationals with arbitrary-precision numerators and denominators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::AlgebraError;

/// The characteristic of a coefficient field: `0` for `Q`, a prime `p` for `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    characteristic: u64,
}

/// An exact field element. Which variant is valid is decided by the
/// [`FieldSpec`] the value belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Residue in `[0, p)`.
    Mod(u64),
    /// Rational in lowest terms with positive denominator.
    Rational(BigRational),
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self, AlgebraError> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(AlgebraError::NotAPrime(characteristic))
        }
    }

    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if p == 0 {
            return Err(AlgebraError::NotAPrime(0));
        }
        Self::new(p)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::zero()),
            _ => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::one()),
            _ => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(v.clone())),
            p => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod(r.to_u64().expect("residue fits in u64"))
            }
        }
    }

    /// Maps `num / den` into the field; `None` when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let d = self.from_bigint(den);
        if self.is_zero(&d) {
            return None;
        }
        Some(self.div(&self.from_bigint(num), &d))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.characteristic as u128;
                Scalar::Mod(((*x as u128 + *y as u128) % p) as u64)
            }
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            _ => mixed(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Mod(0) => Scalar::Mod(0),
            Scalar::Mod(x) => Scalar::Mod(self.characteristic - x),
            Scalar::Rational(x) => Scalar::Rational(-x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mul_mod(*x, *y, self.characteristic)),
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            _ => mixed(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Scalar::Mod(x) => Scalar::Mod(pow_mod(*x, self.characteristic - 2, self.characteristic)),
            Scalar::Rational(x) => Scalar::Rational(x.recip()),
        })
    }

    /// Panics on division by zero.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b).expect("division by zero scalar"))
    }

    /// Integer representative used for printing: symmetric residues for
    /// `F_p`, so that `p - 1` renders as `-1`.
    pub fn signed_repr(&self, a: &Scalar) -> BigRational {
        match a {
            Scalar::Mod(x) => {
                let v = if *x > self.characteristic / 2 {
                    BigInt::from(*x) - BigInt::from(self.characteristic)
                } else {
                    BigInt::from(*x)
                };
                BigRational::from_integer(v)
            }
            Scalar::Rational(q) => q.clone(),
        }
    }

    /// Formats a scalar using [`Self::signed_repr`].
    pub fn display<'a>(&'a self, a: &'a Scalar) -> impl fmt::Display + 'a {
        ScalarDisplay { field: self, value: a }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "QQ"),
            p => write!(f, "GF({p})"),
        }
    }
}

struct ScalarDisplay<'a> {
    field: &'a FieldSpec,
    value: &'a Scalar,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.field.signed_repr(self.value);
        if q.is_integer() {
            write!(f, "{}", q.numer())
        } else if q.is_negative() {
            write!(f, "-{}/{}", -q.numer(), q.denom())
        } else {
            write!(f, "{}/{}", q.numer(), q.denom())
        }
    }
}

#[cold]
fn mixed() -> ! {
    panic!("scalars from different fields combined")
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

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_555));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(matches!(FieldSpec::new(6), Err(AlgebraError::NotAPrime(6))));
        assert!(FieldSpec::prime(0).is_err());
        assert!(FieldSpec::new(0).unwrap().is_rational());
    }

    #[test]
    fn large_prime_arithmetic_does_not_overflow() {
        let f = FieldSpec::new(18_446_744_073_709_551_557).unwrap();
        let a = f.from_i64(-1);
        let b = f.add(&a, &a);
        assert_eq!(b, f.from_i64(-2));
        assert_eq!(f.mul(&a, &a), f.one());
        let inv = f.inv(&b).unwrap();
        assert!(f.is_one(&f.mul(&inv, &b)));
    }

    #[test]
    fn rationals_stay_reduced() {
        let f = FieldSpec::rationals();
        let a = f.from_ratio(&BigInt::from(4), &BigInt::from(-6)).unwrap();
        match &a {
            Scalar::Rational(q) => {
                assert_eq!(q.numer(), &BigInt::from(-2));
                assert_eq!(q.denom(), &BigInt::from(3));
            }
            _ => unreachable!(),
        }
        assert_eq!(f.display(&a).to_string(), "-2/3");
    }

    #[test]
    fn symmetric_printing_mod_p() {
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(f.display(&f.from_i64(4)).to_string(), "-1");
        assert_eq!(f.display(&f.from_i64(2)).to_string(), "2");
        assert_eq!(f.display(&f.from_i64(3)).to_string(), "-2");
        assert!(f.from_ratio(&BigInt::from(1), &BigInt::from(10)).is_none());
    }
}
