//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Field`]. Two implementations are
//! provided: the prime field [`Fp`] (the default, with `p = 2^31 - 1`) and the
//! rationals [`Rational`]. No floating point is used anywhere.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// An exact field of coefficients.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `0` for the rationals, `p` for `F_p`.
    const CHARACTERISTIC: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;

    /// A uniformly random element (for prime fields) or a random small
    /// integer (for the rationals).
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// A random element that is guaranteed nonzero.
    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c = Self::random(rng);
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Small-integer representative used when printing, if there is one.
    /// Returns `None` when the element has no short integer form.
    fn as_small_int(&self) -> Option<i64>;
}

/// The prime field `Z/PZ`. `P` must be an odd prime below `2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

/// The default coefficient field, `F_p` with `p = 2^31 - 1`.
pub type Gf = Fp<2147483647>;

impl<const P: u64> Fp<P> {
    const CHECK: () = assert!(P > (1 << 20) && P < (1 << 32), "modulus out of range");

    #[inline]
    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Fp(v % P)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    #[inline]
    fn zero() -> Self {
        Fp(0)
    }
    #[inline]
    fn one() -> Self {
        Fp(1)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Fp::new(r as u64)
    }
    fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(P);
        let mut r = v % &m;
        if r.is_negative() {
            r += &m;
        }
        Fp::new(r.to_u64().expect("reduced residue fits in u64"))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp::new(rng.gen_range(0..P))
    }
    fn as_small_int(&self) -> Option<i64> {
        if self.0 <= P / 2 {
            Some(self.0 as i64)
        } else {
            Some(-((P - self.0) as i64))
        }
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_small_int() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}", self.0),
        }
    }
}

/// Arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Rational(self.0 + o.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Rational(self.0 - o.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Rational(self.0 * o.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Field for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Self {
        assert!(!self.0.is_zero(), "inverse of zero");
        Rational(self.0.recip())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_bigint(v: &BigInt) -> Self {
        Rational(BigRational::from_integer(v.clone()))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Schwartz-Zippel over a set of 2^21 integers.
        Rational::from_i64(rng.gen_range(-(1i64 << 20)..(1i64 << 20)))
    }
    fn as_small_int(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp_field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = Gf::random(&mut rng);
            let b = Gf::random(&mut rng);
            let c = Gf::random(&mut rng);
            assert_eq!((a + b) * c, a * c + b * c);
            assert_eq!(a - a, Gf::zero());
            assert_eq!(a + (-a), Gf::zero());
            if !a.is_zero() {
                assert_eq!(a * a.inv(), Gf::one());
            }
        }
    }

    #[test]
    fn fp_signed_representatives() {
        assert_eq!(Gf::from_i64(-1).as_small_int(), Some(-1));
        assert_eq!(Gf::from_i64(-1).value(), 2147483646);
        assert_eq!(Gf::from_bigint(&BigInt::from(-2147483648i64)), Gf::from_i64(-1));
        assert_eq!(format!("{}", Gf::from_i64(-7)), "-7");
    }

    #[test]
    fn rational_inverse() {
        let a = Rational::from_ratio(3, 7);
        assert_eq!(a.clone() * a.inv(), Rational::one());
        assert_eq!(format!("{a}"), "3/7");
        assert_eq!(Rational::from_ratio(6, 3).as_small_int(), Some(2));
    }
}
