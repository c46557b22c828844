//! Complex ball arithmetic: an arbitrary-precision midpoint plus an absolute
//! error radius.
//!
//! Every operation produces a ball that rigorously encloses the exact result
//! whenever the inputs enclose theirs. Multiplicative operations certify
//! their midpoints a posteriori: compute an approximation `s`, then bound the
//! defect from the exactly-computed residual (`s*m - 1` for inversion,
//! `s^2 - m` for square roots). Denominators whose certified modulus falls
//! below the singularity margin `2^(-P/2)` raise [`Error::Precision`] instead
//! of producing a useless enclosure.

use std::fmt;

use num_rational::BigRational;

use super::mag::Mag;
use super::mpf::Mpf;
use super::rat::CRat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    re: Mpf,
    im: Mpf,
    rad: Mag,
    prec: u32,
}

fn eff_prec(p: u32) -> u32 {
    if p == 0 {
        64
    } else {
        p
    }
}

impl Ball {
    pub fn zero() -> Ball {
        Ball {
            re: Mpf::zero(),
            im: Mpf::zero(),
            rad: Mag::ZERO,
            prec: 0,
        }
    }

    /// Exact small integer; adopts the partner's precision in arithmetic.
    pub fn from_i64(v: i64) -> Ball {
        Ball {
            re: Mpf::from_i64(v),
            im: Mpf::zero(),
            rad: Mag::ZERO,
            prec: 0,
        }
    }

    pub fn from_parts(re: Mpf, im: Mpf, rad: Mag, prec: u32) -> Ball {
        Ball { re, im, rad, prec }
    }

    /// Round an exact complex rational into a `prec`-bit ball.
    pub fn from_crat(x: &CRat, prec: u32) -> Ball {
        let (re, er) = Mpf::from_ratio(x.re.numer(), x.re.denom(), prec);
        let (im, ei) = Mpf::from_ratio(x.im.numer(), x.im.denom(), prec);
        Ball {
            re,
            im,
            rad: er.hypot_up(&ei),
            prec,
        }
    }

    pub fn re(&self) -> &Mpf {
        &self.re
    }

    pub fn im(&self) -> &Mpf {
        &self.im
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Ball {
        self.prec = prec;
        self
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    fn join_prec(&self, rhs: &Ball) -> u32 {
        self.prec.max(rhs.prec)
    }

    /// Upper bound of the midpoint modulus.
    pub fn mid_abs_ub(&self) -> Mag {
        self.re.mag_ub().hypot_up(&self.im.mag_ub())
    }

    /// Lower bound of the midpoint modulus.
    pub fn mid_abs_lb(&self) -> Mag {
        self.re.mag_lb().hypot_down(&self.im.mag_lb())
    }

    /// Upper bound of `|x|` over the whole ball.
    pub fn abs_ub(&self) -> Mag {
        self.mid_abs_ub().add_up(&self.rad)
    }

    /// Certified lower bound of `|x|` over the whole ball (zero when the ball
    /// may contain zero).
    pub fn abs_lb(&self) -> Mag {
        self.mid_abs_lb().sub_down(&self.rad)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn conj(&self) -> Ball {
        Ball {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    /// Swell the radius by an absolute amount.
    pub fn add_error(&self, err: Mag) -> Ball {
        Ball {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: self.rad.add_up(&err),
            prec: self.prec,
        }
    }

    pub fn add(&self, rhs: &Ball) -> Ball {
        let prec = self.join_prec(rhs);
        let (re, er) = self.re.add(&rhs.re, prec);
        let (im, ei) = self.im.add(&rhs.im, prec);
        Ball {
            re,
            im,
            rad: self.rad.add_up(&rhs.rad).add_up(&er.hypot_up(&ei)),
            prec,
        }
    }

    pub fn sub(&self, rhs: &Ball) -> Ball {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Ball) -> Ball {
        let prec = self.join_prec(rhs);
        let (rr, e1) = self.re.mul(&rhs.re, prec);
        let (ii, e2) = self.im.mul(&rhs.im, prec);
        let (ri, e3) = self.re.mul(&rhs.im, prec);
        let (ir, e4) = self.im.mul(&rhs.re, prec);
        let (re, e5) = rr.sub(&ii, prec);
        let (im, e6) = ri.add(&ir, prec);
        let re_err = e1.add_up(&e2).add_up(&e5);
        let im_err = e3.add_up(&e4).add_up(&e6);
        let ma = self.mid_abs_ub();
        let mb = rhs.mid_abs_ub();
        let rad = ma
            .mul_up(&rhs.rad)
            .add_up(&mb.mul_up(&self.rad))
            .add_up(&self.rad.mul_up(&rhs.rad))
            .add_up(&re_err.hypot_up(&im_err));
        Ball { re, im, rad, prec }
    }

    /// Reciprocal with singularity margin: errors out unless the ball's
    /// modulus is certified to be at least `2^(-P/2)`.
    pub fn inv(&self) -> Result<Ball> {
        if self.is_exact_zero() {
            return Err(Error::Pole("division by exact zero".into()));
        }
        let prec = eff_prec(self.prec);
        let mid_lb = self.mid_abs_lb();
        let ball_lb = mid_lb.sub_down(&self.rad);
        let margin = Mag::pow2(-((prec as i64) / 2));
        if ball_lb.lt(&margin) {
            return Err(Error::Precision(format!(
                "denominator modulus not certified above 2^-{} at {} bits",
                prec / 2,
                prec
            )));
        }
        // midpoint: conj(m) / |m|^2 with guard bits; certified afterwards
        let wide = prec + 32;
        let (d1, _) = self.re.mul(&self.re, wide);
        let (d2, _) = self.im.mul(&self.im, wide);
        let (den, _) = d1.add(&d2, wide);
        let (sre, _) = self.re.div(&den, prec);
        let (sim0, _) = self.im.div(&den, prec);
        let sim = sim0.neg();
        // residual t = s*m - 1, computed exactly
        let t_re = sre
            .mul_exact(&self.re)
            .sub_exact(&sim.mul_exact(&self.im))
            .sub_exact(&Mpf::from_i64(1));
        let t_im = sre.mul_exact(&self.im).add_exact(&sim.mul_exact(&self.re));
        let t_mag = t_re.mag_ub().hypot_up(&t_im.mag_ub());
        let mid_err = t_mag.div_up(&mid_lb);
        // |1/x - 1/m| <= r / (|m| (|m| - r))
        let prop = self.rad.div_up(&mid_lb.mul_down(&ball_lb));
        Ok(Ball {
            re: sre,
            im: sim,
            rad: prop.add_up(&mid_err),
            prec: self.prec,
        })
    }

    pub fn div(&self, rhs: &Ball) -> Result<Ball> {
        let prec = self.join_prec(rhs);
        let mut inv = rhs.inv()?;
        inv.prec = prec.max(inv.prec);
        Ok(self.mul(&inv))
    }

    /// Principal square root. Requires the ball to avoid zero and, unless the
    /// input is an exact real, the branch cut along the negative real axis.
    pub fn sqrt(&self) -> Result<Ball> {
        if self.is_exact_zero() {
            return Ok(Ball::zero());
        }
        let prec = eff_prec(self.prec);
        // exact real values sit on the axis but are unambiguous
        if self.rad.is_zero() && self.im.is_zero() {
            let (root, err) = self.re.abs().sqrt(prec);
            let ball = if self.re.is_negative() {
                Ball {
                    re: Mpf::zero(),
                    im: root,
                    rad: err,
                    prec: self.prec,
                }
            } else {
                Ball {
                    re: root,
                    im: Mpf::zero(),
                    rad: err,
                    prec: self.prec,
                }
            };
            return Ok(ball);
        }
        let mid_lb = self.mid_abs_lb();
        let ball_lb = mid_lb.sub_down(&self.rad);
        if ball_lb.is_zero() {
            return Err(Error::Precision(
                "sqrt of a ball not certified away from zero".into(),
            ));
        }
        let im_away = self.im.mag_lb().gt(&self.rad);
        let re_positive = !self.re.is_negative() && self.re.mag_lb().gt(&self.rad);
        if !(im_away || re_positive) {
            return Err(Error::Precision(
                "sqrt of a ball that may cross the branch cut".into(),
            ));
        }
        // midpoint approximation, certified below via s^2 - m
        let wide = prec + 32;
        let (h2a, _) = self.re.mul(&self.re, wide);
        let (h2b, _) = self.im.mul(&self.im, wide);
        let (h2, _) = h2a.add(&h2b, wide);
        let (h, _) = h2.sqrt(wide);
        let half = Mpf::from_bigint(1.into(), -1);
        let (sre, sim) = if !self.re.is_negative() {
            let (t2, _) = h.add(&self.re, wide);
            let (t2h, _) = t2.mul(&half, wide);
            let (t, _) = t2h.sqrt(prec);
            let (tw, _) = t.mul(&Mpf::from_i64(2), wide);
            let (s, _) = self.im.div(&tw, prec);
            (t, s)
        } else {
            let (w2, _) = h.sub(&self.re, wide);
            let (w2h, _) = w2.mul(&half, wide);
            let (w, _) = w2h.sqrt(prec);
            let (ww, _) = w.mul(&Mpf::from_i64(2), wide);
            let (s, _) = self.im.abs().div(&ww, prec);
            let signed_w = if self.im.is_negative() { w.neg() } else { w };
            (s, signed_w)
        };
        // |s - sqrt(m)| <= |s^2 - m| / Re(s)  (both s and sqrt(m) lie in the
        // closed right half plane)
        let t_re = sre
            .mul_exact(&sre)
            .sub_exact(&sim.mul_exact(&sim))
            .sub_exact(&self.re);
        let t_im_half = sre.mul_exact(&sim);
        let t_im = t_im_half.add_exact(&t_im_half).sub_exact(&self.im);
        let t_mag = t_re.mag_ub().hypot_up(&t_im.mag_ub());
        let sre_lb = sre.mag_lb();
        if sre_lb.is_zero() {
            return Err(Error::Precision("sqrt midpoint too close to the cut".into()));
        }
        let mid_err = t_mag.div_up(&sre_lb);
        // derivative bound over the disk: 1 / (2 sqrt(min |x|))
        let prop = self.rad.div_up(&ball_lb.sqrt_down().mul_pow2(1));
        Ok(Ball {
            re: sre,
            im: sim,
            rad: prop.add_up(&mid_err),
            prec: self.prec,
        })
    }

    pub fn pow_i64(&self, k: i64) -> Result<Ball> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Ball::from_i64(1).with_prec(self.prec);
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

    /// Upper bound of the distance between the two midpoints plus both radii;
    /// an upper bound for `|x - y|` over the balls.
    pub fn dist_ub(&self, rhs: &Ball) -> Mag {
        let dre = self.re.sub_exact(&rhs.re).mag_ub();
        let dim = self.im.sub_exact(&rhs.im).mag_ub();
        dre.hypot_up(&dim).add_up(&self.rad).add_up(&rhs.rad)
    }

    /// Whether the two balls intersect (consistent enclosures always do).
    pub fn overlaps(&self, rhs: &Ball) -> bool {
        let dre = self.re.sub_exact(&rhs.re).mag_lb();
        let dim = self.im.sub_exact(&rhs.im).mag_lb();
        let mid_dist_lb = dre.hypot_down(&dim);
        mid_dist_lb.le(&self.rad.add_up(&rhs.rad))
    }

    /// Exact check that the rational point lies within `rad + slack` of the
    /// midpoint.
    pub fn contains_crat(&self, x: &CRat, slack: Mag) -> bool {
        let dre = self.re.to_rational() - &x.re;
        let dim = self.im.to_rational() - &x.im;
        let dist_sq = &dre * &dre + &dim * &dim;
        let r = self.rad.add_up(&slack);
        let r_rat = mag_to_rational(&r);
        dist_sq <= &r_rat * &r_rat
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        if self.im.is_zero() {
            format!("{} +/- {}", self.re.to_decimal(digits), self.rad)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            format!(
                "{} {} {}i +/- {}",
                self.re.to_decimal(digits),
                sign,
                self.im.abs().to_decimal(digits),
                self.rad
            )
        }
    }
}

/// Exact dyadic value of a `Mag` as a rational.
pub fn mag_to_rational(m: &Mag) -> BigRational {
    if m.is_zero() {
        return BigRational::from_integer(0.into());
    }
    Mpf::from_bigint(m.mantissa().into(), m.exponent() - 64).to_rational()
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn crat(re: (i64, i64), im: (i64, i64)) -> CRat {
        CRat::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    #[test]
    fn ops_contain_exact_results() {
        let a = crat((1, 3), (2, 7));
        let b = crat((-5, 11), (1, 2));
        let ba = Ball::from_crat(&a, 128);
        let bb = Ball::from_crat(&b, 128);
        assert!(ba.add(&bb).contains_crat(&a.add(&b), Mag::ZERO));
        assert!(ba.sub(&bb).contains_crat(&a.sub(&b), Mag::ZERO));
        assert!(ba.mul(&bb).contains_crat(&a.mul(&b), Mag::ZERO));
        assert!(ba
            .div(&bb)
            .unwrap()
            .contains_crat(&a.div(&b).unwrap(), Mag::ZERO));
        assert!(ba
            .inv()
            .unwrap()
            .contains_crat(&a.inv().unwrap(), Mag::ZERO));
        let p = ba.pow_i64(5).unwrap();
        assert!(p.contains_crat(&a.pow_i64(5).unwrap(), Mag::ZERO));
    }

    #[test]
    fn division_by_uncertifiable_ball_errors() {
        assert!(matches!(Ball::from_i64(0).inv(), Err(Error::Pole(_))));
        // tiny midpoint below the margin at 64 bits
        let tiny = Ball::from_parts(
            Mpf::from_bigint(BigInt::from(1), -40),
            Mpf::zero(),
            Mag::ZERO,
            64,
        );
        assert!(matches!(tiny.inv(), Err(Error::Precision(_))));
        // same midpoint is fine at higher working precision
        let ok = Ball::from_parts(
            Mpf::from_bigint(BigInt::from(1), -40),
            Mpf::zero(),
            Mag::ZERO,
            128,
        );
        assert!(ok.inv().is_ok());
    }

    #[test]
    fn sqrt_principal_branch() {
        // sqrt(9/4) = 3/2
        let b = Ball::from_crat(&crat((9, 4), (0, 1)), 128);
        let r = b.sqrt().unwrap();
        assert!(r.contains_crat(&crat((3, 2), (0, 1)), Mag::ZERO));
        // sqrt(-9/4) = (3/2) i for the exact real case
        let b = Ball::from_crat(&crat((-9, 4), (0, 1)), 128);
        let r = b.sqrt().unwrap();
        assert!(r.contains_crat(&crat((0, 1), (3, 2)), Mag::ZERO));
        // sqrt(2i) = 1 + i
        let b = Ball::from_crat(&crat((0, 1), (2, 1)), 128);
        let r = b.sqrt().unwrap();
        assert!(r.contains_crat(&crat((1, 1), (1, 1)), Mag::ZERO));
        // fuzzy ball straddling the cut is rejected
        let bad = Ball::from_parts(
            Mpf::from_i64(-1),
            Mpf::zero(),
            Mag::pow2(-20),
            64,
        );
        assert!(bad.sqrt().is_err());
    }

    #[test]
    fn sqrt_square_round_trip() {
        let x = crat((3, 5), (7, 2));
        let b = Ball::from_crat(&x, 192);
        let s = b.sqrt().unwrap();
        let sq = s.mul(&s);
        assert!(sq.contains_crat(&x, Mag::ZERO));
        assert!(sq.rad().to_f64() < 1e-50);
    }

    #[test]
    fn precision_governs_radius() {
        let x = crat((1, 3), (1, 7));
        let lo = Ball::from_crat(&x, 64).inv().unwrap();
        let hi = Ball::from_crat(&x, 128).inv().unwrap();
        assert!(hi.rad().lt(&lo.rad()));
    }
}
