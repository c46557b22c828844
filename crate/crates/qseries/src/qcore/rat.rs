//! Exact complex-rational arithmetic.
//!
//! [`CRat`] is the "exact" scalar backend: a complex number with `BigRational`
//! components. All field operations are exact; terminating sums and finite
//! q-products over rational data therefore verify with residual exactly zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mag::Mag;
use super::mpf::Mpf;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

/// Upper bound of `|r|` as a [`Mag`].
pub fn rat_mag_ub(r: &BigRational) -> Mag {
    if r.is_zero() {
        return Mag::ZERO;
    }
    let (v, err) = Mpf::from_ratio(r.numer(), r.denom(), 96);
    v.mag_ub().add_up(&err)
}

/// Lower bound of `|r|` as a [`Mag`].
pub fn rat_mag_lb(r: &BigRational) -> Mag {
    if r.is_zero() {
        return Mag::ZERO;
    }
    let (v, err) = Mpf::from_ratio(r.numer(), r.denom(), 96);
    v.mag_lb().sub_down(&err)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> CRat {
        CRat { re, im }
    }

    pub fn from_i64(v: i64) -> CRat {
        CRat {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> CRat {
        assert!(den != 0);
        CRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> CRat {
        CRat { re, im: BigRational::zero() }
    }

    pub fn zero() -> CRat {
        CRat::from_i64(0)
    }

    pub fn one() -> CRat {
        CRat::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn neg(&self) -> CRat {
        CRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn inv(&self) -> Result<CRat> {
        if self.is_zero() {
            return Err(Error::Pole("exact division by zero".into()));
        }
        let d = &self.re * &self.re + &self.im * &self.im;
        Ok(CRat {
            re: &self.re / &d,
            im: -(&self.im / &d),
        })
    }

    pub fn div(&self, rhs: &CRat) -> Result<CRat> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Exact principal square root; only rationals that are perfect squares
    /// (of either sign, with zero imaginary part) are representable.
    pub fn sqrt(&self) -> Result<CRat> {
        if !self.im.is_zero() {
            return Err(Error::Domain(
                "exact sqrt of a non-real value is not representable".into(),
            ));
        }
        if self.re.is_negative() {
            let root = rational_sqrt(&(-self.re.clone())).ok_or_else(|| {
                Error::Domain("exact sqrt of a non-square rational".into())
            })?;
            return Ok(CRat { re: BigRational::zero(), im: root });
        }
        let root = rational_sqrt(&self.re)
            .ok_or_else(|| Error::Domain("exact sqrt of a non-square rational".into()))?;
        Ok(CRat::from_real(root))
    }

    pub fn pow_i64(&self, k: i64) -> Result<CRat> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = CRat::one();
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

    pub fn abs_ub(&self) -> Mag {
        rat_mag_ub(&self.re).hypot_up(&rat_mag_ub(&self.im))
    }

    pub fn abs_lb(&self) -> Mag {
        rat_mag_lb(&self.re).hypot_down(&rat_mag_lb(&self.im))
    }

    pub fn dist_ub(&self, rhs: &CRat) -> Mag {
        self.sub(rhs).abs_ub()
    }

    /// `|self|^2`, which is rational even when `|self|` is not.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Render a rational exactly: a finite decimal when the denominator is of the
/// form 2^a 5^b (with at most 40 fractional digits), otherwise "num/den".
pub fn format_rational(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let den = r.denom().magnitude().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let mut rest = den;
    let two = 2u32.into();
    let five = 5u32.into();
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    let frac_digits = twos.max(fives);
    if rest.is_one() && frac_digits <= 40 {
        let scale = num_traits::pow(BigInt::from(10), frac_digits as usize);
        let scaled = (r.numer() * &scale / r.denom()).magnitude().to_string();
        let sign = if r.is_negative() { "-" } else { "" };
        if frac_digits == 0 {
            return format!("{sign}{scaled}");
        }
        let digits = frac_digits as usize;
        let padded = format!("{scaled:0>width$}", width = digits + 1);
        let (int_part, frac_part) = padded.split_at(padded.len() - digits);
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse rational '{s}'"));
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| bad())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let f = BigInt::from_str(frac_part).map_err(|_| bad())?;
        let mag = i.magnitude() * &scale.magnitude().clone() + f.magnitude();
        let mut v = BigRational::new(mag.into(), scale);
        if neg {
            v = -v;
        }
        return Ok(v);
    }
    let n = BigInt::from_str(s).map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let im_abs = format_rational(&self.im.abs());
        let im_str = if im_abs.contains('/') {
            format!("({im_abs})i")
        } else {
            format!("{im_abs}i")
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_str}")
        } else {
            write!(f, "{}{sign}{im_str}", format_rational(&self.re))
        }
    }
}

impl FromStr for CRat {
    type Err = Error;

    /// Parse "3/7", "0.5", "0.5+0.25i", "-1/3-(2/5)i", "2i".
    fn from_str(s: &str) -> Result<CRat> {
        let s = s.trim().replace(' ', "");
        let bad = || Error::Config(format!("cannot parse value '{s}'"));
        if !s.ends_with('i') {
            return Ok(CRat::from_real(parse_rational(&s)?));
        }
        let body = &s[..s.len() - 1];
        // split off the imaginary term: find the last +/- not at position 0
        // and not inside parentheses
        let bytes = body.as_bytes();
        let mut depth = 0i32;
        let mut split = None;
        for (i, &b) in bytes.iter().enumerate().rev() {
            match b {
                b')' => depth += 1,
                b'(' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] != b'/' => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let strip = |t: &str| -> String {
            let t = t.trim();
            if t.starts_with('+') { t[1..].to_string() } else { t.to_string() }
        };
        let mut im_txt = strip(im_str);
        let neg = im_txt.starts_with('-');
        if neg {
            im_txt = im_txt[1..].to_string();
        }
        if im_txt.starts_with('(') && im_txt.ends_with(')') {
            im_txt = im_txt[1..im_txt.len() - 1].to_string();
        }
        if im_txt.is_empty() {
            im_txt = "1".to_string();
        }
        let mut im = parse_rational(&im_txt).map_err(|_| bad())?;
        if neg {
            im = -im;
        }
        let re = if re_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(&strip(re_str)).map_err(|_| bad())?
        };
        Ok(CRat::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CRat {
        s.parse().unwrap()
    }

    #[test]
    fn field_ops_are_exact() {
        let a = c("1/3+2i");
        let b = c("3/7-1/2i");
        let prod = a.mul(&b);
        let back = prod.div(&b).unwrap();
        assert_eq!(a, back);
        assert_eq!(a.mul(&a.inv().unwrap()), CRat::one());
        assert!(CRat::zero().inv().is_err());
    }

    #[test]
    fn sqrt_perfect_squares_only() {
        assert_eq!(c("9/4").sqrt().unwrap(), c("3/2"));
        assert_eq!(c("-9/4").sqrt().unwrap(), c("3/2i"));
        assert!(c("2").sqrt().is_err());
        assert!(c("1+1i").sqrt().is_err());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let a = c("2/3+1/5i");
        let mut acc = CRat::one();
        for _ in 0..7 {
            acc = acc.mul(&a);
        }
        assert_eq!(a.pow_i64(7).unwrap(), acc);
        assert_eq!(a.pow_i64(-3).unwrap(), a.pow_i64(3).unwrap().inv().unwrap());
        assert_eq!(a.pow_i64(0).unwrap(), CRat::one());
    }

    #[test]
    fn magnitude_bounds_bracket_true_value() {
        let a = c("3+4i"); // |a| = 5
        assert!(a.abs_lb().to_f64() <= 5.0);
        assert!(a.abs_ub().to_f64() >= 5.0);
        assert!((a.abs_ub().to_f64() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn display_round_trips() {
        for s in ["0.5+0.25i", "3/7", "-2", "1/3-(2/5)i", "0.125", "2i", "-0.75i"] {
            let v = c(s);
            let printed = v.to_string();
            assert_eq!(c(&printed), v, "{s} -> {printed}");
        }
        assert_eq!(c("1/2").to_string(), "0.5");
        assert_eq!(c("1/3").to_string(), "1/3");
        assert_eq!(c("0.5+0.25i").to_string(), "0.5+0.25i");
    }
}
