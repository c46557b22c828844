//! Arbitrary-precision dyadic floating point: `m * 2^e` with a `BigInt`
//! mantissa.
//!
//! Values are exact; precision enters only through [`Mpf::round`], and every
//! rounding operation reports the committed error as a [`Mag`] so callers
//! (the ball layer) can fold it into a rigorous radius.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::mag::Mag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mpf {
    m: BigInt,
    e: i64,
}

impl Mpf {
    pub fn zero() -> Mpf {
        Mpf { m: BigInt::zero(), e: 0 }
    }

    pub fn from_i64(v: i64) -> Mpf {
        Mpf { m: BigInt::from(v), e: 0 }
    }

    pub fn from_bigint(m: BigInt, e: i64) -> Mpf {
        Mpf { m, e }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    fn bits(&self) -> i64 {
        self.m.magnitude().bits() as i64
    }

    /// `|self| < 2^top_exp` and, when nonzero, `|self| >= 2^(top_exp-1)`.
    fn top_exp(&self) -> i64 {
        self.e + self.bits()
    }

    pub fn neg(&self) -> Mpf {
        Mpf { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> Mpf {
        Mpf { m: self.m.abs(), e: self.e }
    }

    /// Upper bound of `|self|`.
    pub fn mag_ub(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let bits = self.bits();
        let mag = self.m.magnitude();
        if bits <= 64 {
            Mag::from_parts_up(mag.to_u64_digits()[0] as u128, self.e)
        } else {
            let shift = (bits - 64) as usize;
            let kept = mag >> shift;
            let sticky = (&kept << shift) != *mag;
            let mut mant = kept.to_u64_digits()[0] as u128;
            if sticky {
                mant += 1;
            }
            Mag::from_parts_up(mant, self.e + shift as i64)
        }
    }

    /// Lower bound of `|self|`.
    pub fn mag_lb(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let bits = self.bits();
        let mag = self.m.magnitude();
        if bits <= 64 {
            Mag::from_parts_down(mag.to_u64_digits()[0] as u128, self.e)
        } else {
            let shift = (bits - 64) as usize;
            let kept = mag >> shift;
            let mant = kept.to_u64_digits()[0] as u128;
            Mag::from_parts_down(mant, self.e + shift as i64)
        }
    }

    /// Round to `prec` mantissa bits (round half away from zero). Returns the
    /// rounded value and a bound on the committed error. `prec == 0` means
    /// "exact": no rounding at all.
    pub fn round(&self, prec: u32) -> (Mpf, Mag) {
        if prec == 0 || self.is_zero() {
            return (self.clone(), Mag::ZERO);
        }
        let shift = self.bits() - prec as i64;
        if shift <= 0 {
            return (self.clone(), Mag::ZERO);
        }
        let shift = shift as usize;
        let half = BigInt::from(1) << (shift - 1);
        let mag: BigInt = self.m.magnitude().clone().into();
        let rounded = (mag + half) >> shift;
        let m = if self.is_negative() { -rounded } else { rounded };
        let err = Mag::pow2(self.e + shift as i64 - 1);
        (Mpf { m, e: self.e + shift as i64 }, err)
    }

    /// `self + rhs` rounded to `prec` bits.
    pub fn add(&self, rhs: &Mpf, prec: u32) -> (Mpf, Mag) {
        if self.is_zero() {
            return rhs.round(prec);
        }
        if rhs.is_zero() {
            return self.round(prec);
        }
        let (hi, lo) = if self.top_exp() >= rhs.top_exp() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if prec > 0 && hi.top_exp() - lo.top_exp() > prec as i64 + 4 {
            // the small addend is far below one ulp of the result
            let (r, err) = hi.round(prec);
            return (r, err.add_up(&lo.mag_ub()));
        }
        let e = hi.e.min(lo.e);
        let sum = (&hi.m << (hi.e - e) as usize) + (&lo.m << (lo.e - e) as usize);
        Mpf { m: sum, e }.round(prec)
    }

    pub fn sub(&self, rhs: &Mpf, prec: u32) -> (Mpf, Mag) {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Mpf, prec: u32) -> (Mpf, Mag) {
        Mpf {
            m: &self.m * &rhs.m,
            e: self.e + rhs.e,
        }
        .round(prec)
    }

    /// Exact product (no rounding); mantissas grow.
    pub fn mul_exact(&self, rhs: &Mpf) -> Mpf {
        Mpf {
            m: &self.m * &rhs.m,
            e: self.e + rhs.e,
        }
    }

    /// Exact difference.
    pub fn sub_exact(&self, rhs: &Mpf) -> Mpf {
        let e = self.e.min(rhs.e);
        let m = (&self.m << (self.e - e) as usize) - (&rhs.m << (rhs.e - e) as usize);
        Mpf { m, e }
    }

    /// Exact sum.
    pub fn add_exact(&self, rhs: &Mpf) -> Mpf {
        let e = self.e.min(rhs.e);
        let m = (&self.m << (self.e - e) as usize) + (&rhs.m << (rhs.e - e) as usize);
        Mpf { m, e }
    }

    /// `self / rhs` rounded to `prec` bits; `rhs` must be nonzero.
    pub fn div(&self, rhs: &Mpf, prec: u32) -> (Mpf, Mag) {
        assert!(!rhs.is_zero(), "Mpf::div by zero");
        if self.is_zero() {
            return (Mpf::zero(), Mag::ZERO);
        }
        let prec = if prec == 0 { 128 } else { prec };
        let sh = (prec as i64 + 2 + rhs.bits() - self.bits()).max(0) as usize;
        let q = (&self.m << sh) / &rhs.m;
        let e = self.e - sh as i64 - rhs.e;
        // truncated quotient: error below one ulp
        let trunc_err = Mag::pow2(e);
        let (r, round_err) = Mpf { m: q, e }.round(prec);
        (r, trunc_err.add_up(&round_err))
    }

    /// Square root of a nonnegative value, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32) -> (Mpf, Mag) {
        assert!(!self.is_negative(), "Mpf::sqrt of negative value");
        if self.is_zero() {
            return (Mpf::zero(), Mag::ZERO);
        }
        let prec = if prec == 0 { 128 } else { prec };
        let mut sh = (2 * (prec as i64 + 2) - self.bits()).max(0);
        if (self.e - sh) % 2 != 0 {
            sh += 1;
        }
        let scaled = self.m.magnitude() << sh as usize;
        let root: BigInt = scaled.sqrt().into();
        let e = (self.e - sh) / 2;
        let trunc_err = Mag::pow2(e);
        let (r, round_err) = Mpf { m: root, e }.round(prec);
        (r, trunc_err.add_up(&round_err))
    }

    /// Round `num/den` to `prec` bits; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> (Mpf, Mag) {
        Mpf::from_bigint(num.clone(), 0).div(&Mpf::from_bigint(den.clone(), 0), prec)
    }

    /// Exact comparison of `|self|` and `|rhs|`.
    pub fn cmp_abs(&self, rhs: &Mpf) -> Ordering {
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top_exp(), rhs.top_exp());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let e = self.e.min(rhs.e);
        let a = self.m.magnitude() << (self.e - e) as usize;
        let b = rhs.m.magnitude() << (rhs.e - e) as usize;
        a.cmp(&b)
    }

    /// Exact value as a rational (test oracle support).
    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), BigInt::from(1) << (-self.e) as usize)
        }
    }

    /// Scientific-notation decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        // first estimate of floor(log10 |x|)
        let mut e10 = ((self.top_exp() as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        for _ in 0..4 {
            let p = digits as i64 - 1 - e10;
            let mut num: BigInt = self.m.magnitude().clone().into();
            let mut den = BigInt::from(1);
            if p >= 0 {
                num *= num_traits::pow(BigInt::from(10), p as usize);
            } else {
                den *= num_traits::pow(BigInt::from(10), (-p) as usize);
            }
            if self.e >= 0 {
                num <<= self.e as usize;
            } else {
                den <<= (-self.e) as usize;
            }
            let int = num / den;
            let s = int.to_string();
            if s.len() == digits {
                let mantissa = if digits == 1 {
                    s
                } else {
                    format!("{}.{}", &s[..1], &s[1..])
                };
                return format!("{sign}{mantissa}e{e10}");
            }
            e10 += s.len() as i64 - digits as i64;
        }
        unreachable!("decimal exponent search did not settle");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn mpf(v: f64) -> Mpf {
        // dyadic f64 -> exact Mpf
        assert!(v.is_finite());
        let bits = v.abs().to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(mant) * if v < 0.0 { -1 } else { 1 };
        Mpf::from_bigint(m, exp)
    }

    fn assert_encloses(value: &Mpf, err: &Mag, exact: f64) {
        let v = value.to_rational();
        let ex = BigRational::from_float(exact).unwrap();
        let diff = if v > ex { &v - &ex } else { &ex - &v };
        let diff_f = diff.to_f64().unwrap_or(f64::MAX);
        assert!(
            diff_f <= err.to_f64() * 1.0001 + 1e-280,
            "diff {diff_f} exceeds bound {err}"
        );
    }

    #[test]
    fn exact_small_ops() {
        let a = mpf(1.5);
        let b = mpf(2.25);
        let (s, e) = a.add(&b, 64);
        assert!(e.is_zero());
        assert_eq!(s.to_rational(), BigRational::from_float(3.75).unwrap());
        let (p, e) = a.mul(&b, 64);
        assert!(e.is_zero());
        assert_eq!(p.to_rational(), BigRational::from_float(3.375).unwrap());
    }

    #[test]
    fn rounding_reports_error() {
        let (v, err) = Mpf::from_ratio(&BigInt::from(1), &BigInt::from(3), 64);
        assert!(!err.is_zero());
        assert_encloses(&v, &err, 1.0 / 3.0);
        // doubling precision shrinks the committed error
        let (_, e64) = Mpf::from_ratio(&BigInt::from(1), &BigInt::from(3), 64);
        let (_, e128) = Mpf::from_ratio(&BigInt::from(1), &BigInt::from(3), 128);
        assert!(e128.lt(&e64));
    }

    #[test]
    fn division_and_sqrt_enclose() {
        let a = mpf(7.0);
        let b = mpf(3.0);
        let (q, err) = a.div(&b, 80);
        assert_encloses(&q, &err, 7.0 / 3.0);
        let (r, err) = mpf(2.0).sqrt(80);
        assert_encloses(&r, &err, std::f64::consts::SQRT_2);
    }

    #[test]
    fn far_apart_addition_uses_shortcut() {
        let big = mpf(1.0);
        let tiny = Mpf::from_bigint(BigInt::from(1), -300);
        let (s, err) = big.add(&tiny, 64);
        assert_eq!(s.to_rational(), BigRational::from_integer(1.into()));
        assert!(!err.is_zero());
        assert!(err.le(&Mag::pow2(-250)));
    }

    #[test]
    fn cmp_abs_exact() {
        assert_eq!(mpf(2.0).cmp_abs(&mpf(-2.0)), Ordering::Equal);
        assert_eq!(mpf(1.999).cmp_abs(&mpf(2.0)), Ordering::Less);
        let a = Mpf::from_bigint(BigInt::from(3), 10); // 3072
        let b = Mpf::from_bigint(BigInt::from(3073), 0);
        assert_eq!(a.cmp_abs(&b), Ordering::Less);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(mpf(0.375).to_decimal(3), "3.75e-1");
        assert_eq!(mpf(-12.0).to_decimal(4), "-1.200e1");
        assert_eq!(Mpf::zero().to_decimal(5), "0");
        assert_eq!(mpf(1.0).to_decimal(1), "1e0");
        let (third, _) = Mpf::from_ratio(&BigInt::from(1), &BigInt::from(3), 128);
        assert!(third.to_decimal(10).starts_with("3.333333333e-1"));
    }
}
