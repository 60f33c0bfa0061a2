//! Closed-form bounds on q, evaluated exactly.
//!
//! Quantities involving √2 or √q are compared by isolating the radical and
//! squaring under sign guards, so every predicate here is exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::gf::prime_power;

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// Sign of `a + b·√m` for integers `a, b` and `m ≥ 0`.
pub fn sign_with_root(a: &BigInt, b: &BigInt, m: &BigInt) -> Ordering {
    let root_term = b.sign() != num_bigint::Sign::NoSign && !m.is_zero();
    let sb = if root_term { b.cmp(&BigInt::zero()) } else { Ordering::Equal };
    let sa = a.cmp(&BigInt::zero());
    match (sa, sb) {
        (x, Ordering::Equal) => x,
        (Ordering::Equal, y) => y,
        (x, y) if x == y => x,
        // opposite signs: compare a² with b²m
        (x, _) => match (a * a).cmp(&(b * b * m)) {
            Ordering::Greater => x,
            Ordering::Less => x.reverse(),
            Ordering::Equal => Ordering::Equal,
        },
    }
}

/// `δ = (n+1)(d−1)^n`
pub fn discriminant_degree(n: u32, d: u32) -> u64 {
    (n as u64 + 1) * (d as u64 - 1).pow(n)
}

/// Threshold `((1+√2)/2)² K² = (3K² + 2K²√2)/4` with `K = δ(δ−1)(δ−2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub delta: u64,
    #[serde(rename = "K")]
    pub k: u64,
    /// Floating approximation, for display only.
    pub threshold_approx: f64,
    pub threshold_display: String,
}

impl ThresholdReport {
    pub fn new(delta: u64) -> Self {
        let k = delta * delta.saturating_sub(1) * delta.saturating_sub(2);
        let approx = (3.0 + 2.0 * std::f64::consts::SQRT_2) / 4.0 * (k as f64).powi(2);
        ThresholdReport {
            delta,
            k,
            threshold_approx: approx,
            threshold_display: display_threshold(approx),
        }
    }

    /// `q > threshold`, tested as `4q − 3K² > 0 ∧ (4q − 3K²)² > 8K⁴`.
    pub fn q_passes(&self, q: u64) -> bool {
        let k2 = big(self.k) * big(self.k);
        let lhs = big(4) * big(q) - big(3) * &k2;
        lhs.is_positive() && &lhs * &lhs > big(8) * &k2 * &k2
    }

    /// Smallest integer exceeding the threshold.
    pub fn smallest_passing_integer(&self) -> u64 {
        let (mut lo, mut hi) = (0u64, 1u64);
        while !self.q_passes(hi) {
            lo = hi;
            hi *= 2;
        }
        if self.q_passes(lo) {
            return lo;
        }
        // invariant: lo fails, hi passes
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.q_passes(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Smallest prime power exceeding the threshold.
    pub fn smallest_passing_prime_power(&self) -> u64 {
        (self.smallest_passing_integer().max(2)..)
            .find(|&q| prime_power(q).is_some())
            .expect("prime powers are unbounded")
    }
}

fn display_threshold(x: f64) -> String {
    if x < 1e6 {
        format!("{x:.1}")
    } else {
        format!("{x:.4e}")
    }
}

/// Threshold on q for smooth members of pencils of degree-d hypersurfaces in P^n.
pub fn theorem_threshold(n: u32, d: u32) -> ThresholdReport {
    ThresholdReport::new(discriminant_degree(n, d))
}

/// Threshold on q for a plane curve of degree δ to miss some F_q-line.
pub fn curve_prop_threshold(delta: u64) -> ThresholdReport {
    ThresholdReport::new(delta)
}

/// `(3δ⁴ − 4δ³ + 5δ²)/2`
pub fn kaltofen_threshold(delta: u64) -> BigRational {
    let d = big(delta);
    let num = big(3) * d.pow(4) - big(4) * d.pow(3) + big(5) * d.pow(2);
    BigRational::new(num, big(2))
}

/// Exact test that the curve threshold is at least the slicing threshold:
/// `(3 + 2√2) K² ≥ 2(3δ⁴ − 4δ³ + 5δ²)`.
pub fn curve_threshold_dominates_kaltofen(delta: u64) -> bool {
    let rep = ThresholdReport::new(delta);
    let k2 = big(rep.k) * big(rep.k);
    let kal = kaltofen_threshold(delta);
    // (3K² − 4·kal) + 2K²·√2 ≥ 0, with 4·kal an integer
    let a = big(3) * &k2 - (kal * BigRational::from_integer(big(4))).to_integer();
    let b = big(2) * &k2;
    sign_with_root(&a, &b, &big(2)) != Ordering::Less
}

/// `δ²/4`
pub fn reducible_point_bound(delta: u64) -> BigRational {
    BigRational::new(big(delta) * big(delta), big(4))
}

/// `(δ²/4)(q+1) < q² + q + 1`
pub fn reducible_lines_suffice(delta: u64, q: u64) -> bool {
    big(delta) * big(delta) * (big(q) + 1) < big(4) * (big(q) * big(q) + big(q) + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficiencyChain {
    pub q: u64,
    pub delta: u64,
    /// `q² > K q√q + [(δ−1)²(δ−2)² + (δ−1)] q + (δ+1)(δ−1)(δ−2)√q`
    pub main: bool,
    /// `2q > (δ+1)(δ−1)(δ−2)√q`
    pub side: bool,
    /// `q > K√q + (δ−1)²(δ−2)² + (δ+1)`
    pub quadratic: bool,
    pub passes_threshold: bool,
}

impl SufficiencyChain {
    pub fn all_hold(&self) -> bool {
        self.main && self.side && self.quadratic
    }
}

pub fn proof_sufficiency_chain(q: u64, delta: u64) -> SufficiencyChain {
    let d = big(delta);
    let qb = big(q);
    let dm1: BigInt = &d - 1;
    let dm2: BigInt = &d - 2;
    let k: BigInt = &d * &dm1 * &dm2;
    let prod: BigInt = &dm1 * &dm2;
    let sq = &prod * &prod;
    let b_coef: BigInt = (&d + 1) * &dm1 * &dm2;
    let pos = |a: BigInt, b: BigInt| sign_with_root(&a, &b, &qb) == Ordering::Greater;
    SufficiencyChain {
        q,
        delta,
        main: pos(&qb * &qb - (&sq + &dm1) * &qb, BigInt::zero() - &k * &qb - &b_coef),
        side: pos(big(2) * &qb, -b_coef.clone()),
        quadratic: pos(&qb - (&sq + &d + 1), -k.clone()),
        passes_threshold: ThresholdReport::new(delta).q_passes(q),
    }
}

/// `δ²(δ−1)²(δ−2)² ≥ 4(δ−1)²(δ−2)² + 4(δ+1)`
pub fn quadratic_step_holds(delta: u64) -> bool {
    let d = big(delta);
    let prod: BigInt = (&d - 1) * (&d - 2);
    let sq = &prod * &prod;
    &d * &d * &sq >= big(4) * &sq + big(4) * (&d + 1)
}

/// `((δ+1)(δ−1)(δ−2)/2)² < (3 + 2√2)K²/4`
pub fn side_condition_below_threshold(delta: u64) -> bool {
    let d = big(delta);
    let b = (&d + 1) * (&d - 1) * (&d - 2);
    let k = &d * (&d - 1) * (&d - 2);
    let k2 = &k * &k;
    // (3K² − b²) + 2K²√2 > 0
    sign_with_root(&(big(3) * &k2 - &b * &b), &(big(2) * k2), &big(2)) == Ordering::Greater
}

impl ThresholdReport {
    /// The exact threshold as `(a + b√2)/4` with `a = 3K²`, `b = 2K²`.
    pub fn exact_parts(&self) -> (BigInt, BigInt) {
        let k2 = big(self.k) * big(self.k);
        (big(3) * &k2, big(2) * k2)
    }
}

/// Float value of a rational, for display.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
