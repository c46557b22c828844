//! The scalar interface shared by the two arithmetic backends.
//!
//! Series evaluation, products and the identity expressions are generic over
//! [`Scalar`]; the exact backend ([`CRat`]) is instantiated when all data is
//! rational and every sum terminates, the ball backend ([`Ball`]) everywhere
//! else.

use std::fmt;

use super::ball::Ball;
use super::mag::Mag;
use super::rat::CRat;
use crate::error::{Error, Result};

pub trait Scalar:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Sized + 'static
{
    /// True for backends whose arithmetic is exact (zero-radius by construction).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn sqrt(&self) -> Result<Self>;

    fn pow_i64(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Rigorous upper bound of the modulus over the enclosure.
    fn abs_ub(&self) -> Mag;

    /// Rigorous lower bound of the modulus over the enclosure (zero when the
    /// value cannot be certified away from zero).
    fn abs_lb(&self) -> Mag;

    /// The value is zero, known exactly.
    fn is_exact_zero(&self) -> bool;

    /// The enclosure cannot exclude zero.
    fn may_be_zero(&self) -> bool {
        self.abs_lb().is_zero()
    }

    /// Upper bound of `|self - rhs|`.
    fn dist_ub(&self, rhs: &Self) -> Mag;

    /// Working precision in bits; 0 means exact/unbounded.
    fn prec_bits(&self) -> u32;

    /// Widen the enclosure by an absolute error (tail bounds). The exact
    /// backend only accepts zero.
    fn add_error(&self, err: Mag) -> Result<Self>;
}

impl Scalar for CRat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        CRat::from_i64(v)
    }

    fn add(&self, rhs: &Self) -> Self {
        CRat::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        CRat::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        CRat::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        CRat::neg(self)
    }

    fn inv(&self) -> Result<Self> {
        CRat::inv(self)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        CRat::div(self, rhs)
    }

    fn sqrt(&self) -> Result<Self> {
        CRat::sqrt(self)
    }

    fn pow_i64(&self, k: i64) -> Result<Self> {
        CRat::pow_i64(self, k)
    }

    fn abs_ub(&self) -> Mag {
        CRat::abs_ub(self)
    }

    fn abs_lb(&self) -> Mag {
        CRat::abs_lb(self)
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn dist_ub(&self, rhs: &Self) -> Mag {
        CRat::dist_ub(self, rhs)
    }

    fn prec_bits(&self) -> u32 {
        0
    }

    fn add_error(&self, err: Mag) -> Result<Self> {
        if err.is_zero() {
            Ok(self.clone())
        } else {
            Err(Error::Domain(
                "exact backend cannot absorb a truncation error".into(),
            ))
        }
    }
}

impl Scalar for Ball {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Ball::from_i64(v)
    }

    fn add(&self, rhs: &Self) -> Self {
        Ball::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Ball::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Ball::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        Ball::neg(self)
    }

    fn inv(&self) -> Result<Self> {
        Ball::inv(self)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ball::div(self, rhs)
    }

    fn sqrt(&self) -> Result<Self> {
        Ball::sqrt(self)
    }

    fn pow_i64(&self, k: i64) -> Result<Self> {
        Ball::pow_i64(self, k)
    }

    fn abs_ub(&self) -> Mag {
        Ball::abs_ub(self)
    }

    fn abs_lb(&self) -> Mag {
        Ball::abs_lb(self)
    }

    fn is_exact_zero(&self) -> bool {
        Ball::is_exact_zero(self)
    }

    fn dist_ub(&self, rhs: &Self) -> Mag {
        Ball::dist_ub(self, rhs)
    }

    fn prec_bits(&self) -> u32 {
        self.prec()
    }

    fn add_error(&self, err: Mag) -> Result<Self> {
        Ok(Ball::add_error(self, err))
    }
}
