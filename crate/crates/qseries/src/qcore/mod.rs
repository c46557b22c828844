//! Arithmetic kernel: exact rationals, complex balls, and q-shifted
//! factorials of finite (any integer) or infinite order.
//!
//! The q-shifted factorial is
//!
//! ```text
//!            | (1-x)(1-xq)...(1-xq^(n-1))     n > 0
//! (x;q)_n  = | 1                              n = 0
//!            | 1 / [(1-xq^n)...(1-xq^-1)]     n < 0
//!
//! (x;q)_inf = prod_{k>=0} (1 - x q^k)         |q| < 1
//! ```
//!
//! `qfac_ratio` evaluates the bracketed product quotients
//! `[(a;q)_n (b;q)_n ... ] / [(c;q)_n (d;q)_n ...]` used throughout the
//! identity catalog.

pub mod ball;
pub mod mag;
pub mod mpf;
pub mod rat;
pub mod scalar;

pub use ball::Ball;
pub use mag::Mag;
pub use mpf::Mpf;
pub use rat::CRat;
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// Order of a q-shifted factorial: any integer, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

/// `(x;q)_n` for any integer order `n`.
///
/// Negative orders divide by the factors `(1 - x q^j)`, `j = n..-1`; a factor
/// that is exactly zero is a pole of the symbol and raises [`Error::Pole`],
/// one that cannot be certified nonzero raises [`Error::Precision`].
pub fn qpoch<S: Scalar>(x: &S, q: &S, n: i64) -> Result<S> {
    let one = S::one();
    if n == 0 {
        return Ok(one);
    }
    if n > 0 {
        let mut prod = one.clone();
        let mut xq = x.clone();
        for _ in 0..n {
            prod = prod.mul(&one.sub(&xq));
            xq = xq.mul(q);
        }
        return Ok(prod);
    }
    // n < 0: reciprocal of the product over j = n..-1
    let qinv = q
        .inv()
        .map_err(|e| e.with_context("negative q-Pochhammer order needs invertible q"))?;
    let mut prod = one.clone();
    let mut xq = x.mul(&qinv);
    for _ in 0..(-n) {
        let factor = one.sub(&xq);
        if factor.is_exact_zero() {
            return Err(Error::Pole(
                "negative-order q-Pochhammer factor vanishes".into(),
            ));
        }
        prod = prod.mul(&factor);
        xq = xq.mul(&qinv);
    }
    prod.inv()
}

/// `(x;q)_inf`, with the truncation tail folded into the enclosure.
///
/// The partial product stops at the first `K >= 16` whose rigorous tail bound
/// (from `|x| |q|^K / (1-|q|)`) drops below `tol`. Ball backend only, except
/// for the trivial `x = 0` case.
pub fn qpoch_inf<S: Scalar>(x: &S, q: &S, tol: f64) -> Result<S> {
    let one = S::one();
    if x.is_exact_zero() {
        return Ok(one);
    }
    if S::EXACT {
        return Err(Error::Domain(
            "infinite q-product requires ball arithmetic".into(),
        ));
    }
    let q_ub = q.abs_ub();
    let gap = q_ub.one_minus_down();
    if gap.is_zero() {
        return Err(Error::Domain("|q| < 1 could not be certified".into()));
    }
    let tol_mag = Mag::from_f64(tol);
    let x_ub = x.abs_ub();
    let mut prod = one.clone();
    let mut xq = x.clone();
    let mut qk = Mag::one();
    let max_factors = 1_000_000u64;
    for k in 0..max_factors {
        if k >= 16 {
            // sum of remaining |x q^j| and the resulting relative tail bound
            let s = x_ub.mul_up(&qk).div_up(&gap);
            if s.le(&Mag::from_f64(0.5)) {
                let tail = s.mul_pow2(1);
                if tail.le(&tol_mag) {
                    let err = prod.abs_ub().mul_up(&tail);
                    return prod.add_error(err);
                }
            }
        }
        prod = prod.mul(&one.sub(&xq));
        xq = xq.mul(q);
        qk = qk.mul_up(&q_ub);
    }
    Err(Error::Budget(
        "infinite q-product did not meet its tail tolerance".into(),
    ))
}

/// Bracketed quotient of q-shifted factorials:
/// `prod (a;q)_n / prod (b;q)_n` for finite or infinite `n`.
pub fn qfac_ratio<S: Scalar>(
    numers: &[S],
    denoms: &[S],
    q: &S,
    order: PochOrder,
    tol: f64,
) -> Result<S> {
    let mut acc = S::one();
    for (i, a) in numers.iter().enumerate() {
        let p = match order {
            PochOrder::Finite(n) => qpoch(a, q, n),
            PochOrder::Infinite => qpoch_inf(a, q, tol),
        }
        .map_err(|e| e.with_context(&format!("bracket numerator {i}")))?;
        acc = acc.mul(&p);
    }
    for (j, b) in denoms.iter().enumerate() {
        let p = match order {
            PochOrder::Finite(n) => qpoch(b, q, n),
            PochOrder::Infinite => qpoch_inf(b, q, tol),
        }
        .map_err(|e| e.with_context(&format!("bracket denominator {j}")))?;
        acc = acc
            .div(&p)
            .map_err(|e| e.with_context(&format!("bracket denominator {j}")))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> CRat {
        CRat::from_ratio(num, den)
    }

    #[test]
    fn qpoch_definition_cases() {
        let q = r(1, 2);
        // empty product
        assert_eq!(qpoch(&r(7, 3), &q, 0).unwrap(), CRat::one());
        // (1/2; 1/2)_2 = (1 - 1/2)(1 - 1/4) = 3/8
        assert_eq!(qpoch(&r(1, 2), &q, 2).unwrap(), r(3, 8));
        // (1/3; 1/2)_{-1} = 1/(1 - (1/3)*2) = 3
        assert_eq!(qpoch(&r(1, 3), &q, -1).unwrap(), r(3, 1));
    }

    #[test]
    fn qpoch_negative_order_pole() {
        // (1/2; 1/2)_{-1}: factor 1 - (1/2)*2 = 0
        assert!(matches!(
            qpoch(&r(1, 2), &r(1, 2), -1),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn qfac_ratio_cases() {
        let q = r(1, 2);
        // identical numerator and denominator
        let one = qfac_ratio(&[r(5, 7)], &[r(5, 7)], &q, PochOrder::Finite(3), 0.0).unwrap();
        assert_eq!(one, CRat::one());
        // empty infinite bracket
        let empty: [CRat; 0] = [];
        assert_eq!(
            qfac_ratio(&empty, &empty, &q, PochOrder::Infinite, 1e-20).unwrap(),
            CRat::one()
        );
        // [(1/2) / (1/3)]_2 = (3/8) / ((2/3)(5/6)) = 27/40
        let v = qfac_ratio(&[r(1, 2)], &[r(1, 3)], &q, PochOrder::Finite(2), 0.0).unwrap();
        assert_eq!(v, r(27, 40));
    }

    #[test]
    fn qpoch_inf_trivial_and_exact_mode() {
        let q = r(1, 2);
        assert_eq!(qpoch_inf(&CRat::zero(), &q, 1e-20).unwrap(), CRat::one());
        assert!(matches!(
            qpoch_inf(&r(1, 3), &q, 1e-20),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn qpoch_inf_matches_long_partial_product() {
        // oracle: 200-term exact partial product of (1/2; 1/2)_inf
        let q = r(1, 2);
        let mut oracle = CRat::one();
        let mut xq = r(1, 2);
        for _ in 0..=200 {
            oracle = oracle.mul(&CRat::one().sub(&xq));
            xq = xq.mul(&q);
        }
        let qb = Ball::from_crat(&r(1, 2), 160);
        let xb = Ball::from_crat(&r(1, 2), 160);
        let val = qpoch_inf(&xb, &qb, 1e-30).unwrap();
        // the oracle itself sits within 2^-195 of the true value
        assert!(val.contains_crat(&oracle, Mag::pow2(-195)));
        assert!(val.rad().to_f64() < 1e-29);
    }

    #[test]
    fn qpoch_inf_telescoping() {
        // (x;q)_inf = (x;q)_n * (x q^n; q)_inf
        let x = r(2, 3);
        let q = r(3, 5);
        for n in [1i64, 2, 5, 9] {
            let xb = Ball::from_crat(&x, 128);
            let qb = Ball::from_crat(&q, 128);
            let full = qpoch_inf(&xb, &qb, 1e-30).unwrap();
            let head = qpoch(&xb, &qb, n).unwrap();
            let shifted = xb.mul(&qb.pow_i64(n).unwrap());
            let tail = qpoch_inf(&shifted, &qb, 1e-30).unwrap();
            assert!(full.overlaps(&head.mul(&tail)));
        }
    }

    #[test]
    fn qpoch_inf_domain_guard() {
        let qb = Ball::from_crat(&r(3, 2), 64);
        let xb = Ball::from_crat(&r(1, 3), 64);
        assert!(matches!(qpoch_inf(&xb, &qb, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn ball_qpoch_contains_exact() {
        let x = r(2, 7);
        let q = r(4, 9);
        for n in [-3i64, -1, 0, 1, 4, 11] {
            let exact = qpoch(&x, &q, n).unwrap();
            let ball = qpoch(
                &Ball::from_crat(&x, 96),
                &Ball::from_crat(&q, 96),
                n,
            )
            .unwrap();
            assert!(ball.contains_crat(&exact, Mag::ZERO), "n = {n}");
        }
    }
}
