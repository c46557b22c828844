//! Nonnegative magnitude bounds with directed rounding.
//!
//! A [`Mag`] stores a dyadic number `man * 2^(exp-64)` with a normalized
//! 64-bit mantissa. Every operation comes in an `_up` (result >= exact) and,
//! where needed, a `_down` (result <= exact) flavour, so tail bounds and ball
//! radii stay rigorous no matter how they are combined. Think of it as a
//! cheap scalar companion to the arbitrary-precision midpoints: ~60 bits of
//! relative accuracy, never wrong in direction.

use std::cmp::Ordering;
use std::fmt;

/// A nonnegative magnitude `man * 2^(exp-64)`.
///
/// Invariant: either `man == 0` (the value zero, `exp` is then 0) or the top
/// bit of `man` is set, so the value lies in `[2^(exp-1), 2^exp)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

const EXP_CLAMP: i64 = 1 << 62;

fn clamp_exp(e: i64) -> i64 {
    e.clamp(-EXP_CLAMP, EXP_CLAMP)
}

/// Floor of the integer square root of a `u128`.
fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    // f64 seed, then Newton steps and an exact fix-up.
    let mut x = (v as f64).sqrt() as u128 + 2;
    for _ in 0..8 {
        let next = (x + v / x) >> 1;
        if next >= x {
            break;
        }
        x = next;
    }
    while x.checked_mul(x).map_or(true, |sq| sq > v) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= v) {
        x += 1;
    }
    x
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    pub fn zero() -> Mag {
        Mag::ZERO
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: 1 << 63,
            exp: clamp_exp(e + 1),
        }
    }

    pub fn one() -> Mag {
        Mag::pow2(0)
    }

    /// Normalize `mant * 2^pow2`, rounding up.
    pub fn from_parts_up(mant: u128, pow2: i64) -> Mag {
        Mag::from_parts(mant, pow2, true)
    }

    /// Normalize `mant * 2^pow2`, rounding down (truncation).
    pub fn from_parts_down(mant: u128, pow2: i64) -> Mag {
        Mag::from_parts(mant, pow2, false)
    }

    fn from_parts(mant: u128, pow2: i64, up: bool) -> Mag {
        if mant == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - mant.leading_zeros() as i64;
        if bits <= 64 {
            let man = (mant as u64) << (64 - bits);
            return Mag {
                man,
                exp: clamp_exp(pow2 + bits),
            };
        }
        let shift = (bits - 64) as u32;
        let mut man = (mant >> shift) as u64;
        let mut exp = pow2 + bits;
        if up && (mant & ((1u128 << shift) - 1)) != 0 {
            man = man.wrapping_add(1);
            if man == 0 {
                man = 1 << 63;
                exp += 1;
            }
        }
        Mag {
            man,
            exp: clamp_exp(exp),
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_parts_up(v as u128, 0)
    }

    /// Exact conversion from a finite nonnegative `f64` (dyadic, so lossless).
    pub fn from_f64(f: f64) -> Mag {
        assert!(f.is_finite() && f >= 0.0, "Mag::from_f64 needs finite nonnegative input");
        if f == 0.0 {
            return Mag::ZERO;
        }
        let bits = f.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, pow2) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Mag::from_parts_up(mant as u128, pow2)
    }

    /// Approximate value for display; saturates to infinity when huge.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp - 64;
        if e > 1000 {
            return f64::INFINITY;
        }
        if e < -1088 {
            return 0.0;
        }
        (self.man as f64) * (e as f64).exp2()
    }

    /// Bit position of the leading bit; value lies in `[2^(exp-1), 2^exp)`.
    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Normalized 64-bit mantissa; the value is `mantissa * 2^(exponent-64)`.
    pub fn mantissa(&self) -> u64 {
        self.man
    }

    pub fn add_up(&self, rhs: &Mag) -> Mag {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.cmp_mag(rhs) == Ordering::Less {
            (rhs, self)
        } else {
            (self, rhs)
        };
        let diff = hi.exp - lo.exp;
        if diff >= 64 {
            // lo < 1 ulp of hi
            let mut man = hi.man.wrapping_add(1);
            let mut exp = hi.exp;
            if man == 0 {
                man = 1 << 63;
                exp += 1;
            }
            return Mag { man, exp: clamp_exp(exp) };
        }
        let shifted = (lo.man >> diff) as u128;
        let sticky = (lo.man & ((1u64 << diff) - 1)) != 0;
        let sum = hi.man as u128 + shifted + u128::from(sticky);
        Mag::from_parts_up(sum, hi.exp - 64)
    }

    pub fn add_down(&self, rhs: &Mag) -> Mag {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.cmp_mag(rhs) == Ordering::Less {
            (rhs, self)
        } else {
            (self, rhs)
        };
        let diff = hi.exp - lo.exp;
        if diff >= 64 {
            return *hi;
        }
        let sum = hi.man as u128 + (lo.man >> diff) as u128;
        Mag::from_parts_down(sum, hi.exp - 64)
    }

    /// Lower bound of `max(self - rhs, 0)`.
    pub fn sub_down(&self, rhs: &Mag) -> Mag {
        if rhs.is_zero() {
            return *self;
        }
        if self.cmp_mag(rhs) != Ordering::Greater {
            return Mag::ZERO;
        }
        // self > rhs and both normalized, hence self.exp >= rhs.exp.
        let shift = self.exp - rhs.exp;
        let va = (self.man as u128) << 64;
        let vb_up = if shift >= 128 {
            1u128
        } else {
            let scaled = (rhs.man as u128) << 64;
            let kept = scaled >> shift;
            let sticky = shift > 0 && (scaled & ((1u128 << shift) - 1)) != 0;
            kept + u128::from(sticky)
        };
        Mag::from_parts_down(va.saturating_sub(vb_up), self.exp - 128)
    }

    /// Lower bound of `1 - self`; zero when `self >= 1`.
    pub fn one_minus_down(&self) -> Mag {
        Mag::one().sub_down(self)
    }

    pub fn mul_up(&self, rhs: &Mag) -> Mag {
        if self.is_zero() || rhs.is_zero() {
            return Mag::ZERO;
        }
        let p = self.man as u128 * rhs.man as u128;
        Mag::from_parts_up(p, (self.exp - 64) + (rhs.exp - 64))
    }

    pub fn mul_down(&self, rhs: &Mag) -> Mag {
        if self.is_zero() || rhs.is_zero() {
            return Mag::ZERO;
        }
        let p = self.man as u128 * rhs.man as u128;
        Mag::from_parts_down(p, (self.exp - 64) + (rhs.exp - 64))
    }

    /// Upper bound of `self / rhs`; `rhs` must be nonzero.
    pub fn div_up(&self, rhs: &Mag) -> Mag {
        assert!(!rhs.is_zero(), "Mag::div_up by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let numer = (self.man as u128) << 63;
        let q = numer / rhs.man as u128 + 1;
        Mag::from_parts_up(q, (self.exp - 64) - 63 - (rhs.exp - 64))
    }

    /// Lower bound of `self / rhs`; `rhs` must be nonzero.
    pub fn div_down(&self, rhs: &Mag) -> Mag {
        assert!(!rhs.is_zero(), "Mag::div_down by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let numer = (self.man as u128) << 63;
        let q = numer / rhs.man as u128;
        Mag::from_parts_down(q, (self.exp - 64) - 63 - (rhs.exp - 64))
    }

    /// Exact scaling by `2^e`.
    pub fn mul_pow2(&self, e: i64) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag {
            man: self.man,
            exp: clamp_exp(self.exp + e),
        }
    }

    pub fn pow_up(&self, k: u32) -> Mag {
        let mut acc = Mag::one();
        let mut base = *self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_up(&base);
            }
            base = base.mul_up(&base);
            k >>= 1;
        }
        acc
    }

    pub fn pow_down(&self, k: u32) -> Mag {
        let mut acc = Mag::one();
        let mut base = *self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_down(&base);
            }
            base = base.mul_down(&base);
            k >>= 1;
        }
        acc
    }

    pub fn sqrt_up(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let (mant, half_e) = self.sqrt_scale();
        Mag::from_parts_up(isqrt_u128(mant) + 1, half_e)
    }

    pub fn sqrt_down(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let (mant, half_e) = self.sqrt_scale();
        Mag::from_parts_down(isqrt_u128(mant), half_e)
    }

    fn sqrt_scale(&self) -> (u128, i64) {
        // value = man * 2^e with e = exp-64; shift so the exponent is even
        // and the mantissa carries ~126 bits into the square root.
        let e = self.exp - 64;
        let sh: i64 = if (e - 62) % 2 == 0 { 62 } else { 63 };
        let mant = (self.man as u128) << sh;
        ((mant), (e - sh) / 2)
    }

    /// Upper bound of `sqrt(self^2 + rhs^2)`.
    pub fn hypot_up(&self, rhs: &Mag) -> Mag {
        self.mul_up(self).add_up(&rhs.mul_up(rhs)).sqrt_up()
    }

    /// Lower bound of `sqrt(self^2 + rhs^2)`.
    pub fn hypot_down(&self, rhs: &Mag) -> Mag {
        self.mul_down(self).add_down(&rhs.mul_down(rhs)).sqrt_down()
    }

    pub fn max(&self, rhs: &Mag) -> Mag {
        if self.cmp_mag(rhs) == Ordering::Less {
            *rhs
        } else {
            *self
        }
    }

    pub fn min(&self, rhs: &Mag) -> Mag {
        if self.cmp_mag(rhs) == Ordering::Greater {
            *rhs
        } else {
            *self
        }
    }

    pub fn cmp_mag(&self, rhs: &Mag) -> Ordering {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => match self.exp.cmp(&rhs.exp) {
                Ordering::Equal => self.man.cmp(&rhs.man),
                ord => ord,
            },
        }
    }

    pub fn lt(&self, rhs: &Mag) -> bool {
        self.cmp_mag(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Mag) -> bool {
        self.cmp_mag(rhs) != Ordering::Greater
    }

    pub fn gt(&self, rhs: &Mag) -> bool {
        self.cmp_mag(rhs) == Ordering::Greater
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let approx = self.to_f64();
        if approx.is_finite() && approx > 0.0 {
            write!(f, "{approx:.3e}")
        } else {
            write!(f, "2^{}", self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(m: &Mag, v: f64) -> bool {
        let x = m.to_f64();
        (x - v).abs() <= v.abs() * 1e-12 + 1e-300
    }

    #[test]
    fn construction_and_ordering() {
        assert!(Mag::zero().is_zero());
        assert!(close(&Mag::one(), 1.0));
        assert!(close(&Mag::pow2(-10), 2f64.powi(-10)));
        assert!(close(&Mag::from_u64(12345), 12345.0));
        assert!(Mag::from_f64(0.5).lt(&Mag::one()));
        assert_eq!(Mag::from_f64(0.75).cmp_mag(&Mag::from_f64(0.75)), Ordering::Equal);
    }

    #[test]
    fn directed_arithmetic_brackets_exact_value() {
        let cases: Vec<(f64, f64)> = vec![
            (1.5, 2.25),
            (0.3, 0.7),
            (1e-20, 3.5e17),
            (123456.789, 0.0001),
            (2f64.powi(-400), 2f64.powi(300)),
        ];
        for (a, b) in cases {
            let ma = Mag::from_f64(a);
            let mb = Mag::from_f64(b);
            assert!(ma.add_up(&mb).to_f64() >= a + b || !(a + b).is_finite());
            assert!(ma.add_down(&mb).to_f64() <= a + b);
            assert!(ma.mul_up(&mb).to_f64() >= a * b * (1.0 - 1e-12));
            assert!(ma.mul_down(&mb).to_f64() <= a * b * (1.0 + 1e-12));
            assert!(ma.div_up(&mb).to_f64() >= a / b * (1.0 - 1e-12));
            assert!(ma.div_down(&mb).to_f64() <= a / b * (1.0 + 1e-12));
            let up = ma.div_up(&mb);
            let down = ma.div_down(&mb);
            assert!(down.le(&up));
        }
    }

    #[test]
    fn sub_down_clamps_and_bounds() {
        let a = Mag::from_f64(1.0);
        let b = Mag::from_f64(0.25);
        assert!(close(&a.sub_down(&b), 0.75));
        assert!(b.sub_down(&a).is_zero());
        assert!(a.sub_down(&a).is_zero());
        // near-cancellation stays a valid (possibly zero) lower bound
        let c = Mag::from_f64(1.0 - 1e-17);
        let d = a.sub_down(&c);
        assert!(d.to_f64() <= 1e-17 * 1.01);
        assert!(close(&Mag::from_f64(0.9).one_minus_down(), 0.1));
    }

    #[test]
    fn sqrt_and_hypot() {
        for v in [2.0f64, 0.5, 1e10, 3.0e-9, 7.0] {
            let m = Mag::from_f64(v);
            assert!(m.sqrt_up().to_f64() >= v.sqrt() * (1.0 - 1e-12));
            assert!(m.sqrt_down().to_f64() <= v.sqrt() * (1.0 + 1e-12));
            assert!(m.sqrt_down().le(&m.sqrt_up()));
        }
        let a = Mag::from_f64(3.0);
        let b = Mag::from_f64(4.0);
        assert!(a.hypot_up(&b).to_f64() >= 5.0);
        assert!(a.hypot_down(&b).to_f64() <= 5.0);
        assert!((a.hypot_up(&b).to_f64() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn powers() {
        let q = Mag::from_f64(0.8);
        let up = q.pow_up(100).to_f64();
        let down = q.pow_down(100).to_f64();
        let exact = 0.8f64.powi(100);
        assert!(down <= exact && exact <= up);
        assert!((up - down) / exact < 1e-10);
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt_u128(0), 0);
        assert_eq!(isqrt_u128(1), 1);
        assert_eq!(isqrt_u128(15), 3);
        assert_eq!(isqrt_u128(16), 4);
        assert_eq!(isqrt_u128(u128::MAX), (1u128 << 64) - 1);
        let v = (1u128 << 100) + 12345;
        let s = isqrt_u128(v);
        assert!(s * s <= v && (s + 1) * (s + 1) > v);
    }
}
