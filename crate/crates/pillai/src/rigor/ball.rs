//! Ball arithmetic: arbitrary-precision reals with a certified error radius.
//!
//! A `BallReal` stores a dyadic midpoint, a dyadic radius and the working
//! precision in bits. The represented set is the closed interval
//! [midpoint − radius, midpoint + radius] and every operation returns a ball
//! that contains the image of its input intervals. Midpoints round to
//! nearest; everything affecting the radius rounds outward. Exact integers
//! and rationals embed as radius-0 balls (rationals keep a one-ulp radius
//! when the denominator is not a power of two).
//!
//! The logarithm is the one transcendental function the crate needs. It is
//! computed from the atanh series: with x = f·2^k, f ∈ [1/2, 1),
//!     ln x = k·ln 2 + 2·atanh((f−1)/(f+1)),
//! where |z| = |f−1|/(f+1) ≤ 1/3 keeps the series tail geometric with ratio
//! z² ≤ 1/9, and ln 2 itself is 2·atanh(1/3). The series is summed in ball
//! arithmetic at a guarded working precision and the truncation tail is added
//! to the radius explicitly, so the result is a certified enclosure.

use super::dyadic::{Dir, Dyadic};
use crate::Error;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// Mantissa bits kept for radii. Radii only need an order of magnitude, and
/// a short mantissa keeps the error bookkeeping cheap.
const RAD_BITS: u32 = 16;

/// Guard bits used inside the logarithm kernel.
const LN_GUARD: u32 = 32;

/// Outcome of a sign certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignCert {
    Positive,
    Negative,
    Undecidable,
}

#[derive(Clone, Debug)]
pub struct BallReal {
    /// Center of the enclosure; rounds to nearest at `precision` bits.
    pub midpoint: Dyadic,
    /// Certified error radius; always rounded upward.
    pub radius: Dyadic,
    /// Working precision in bits.
    pub precision: u32,
}

impl BallReal {
    /// Build a ball from an exact midpoint and an exact upper bound on the
    /// radius, rounding the midpoint to `prec` bits and folding the rounding
    /// error into the radius.
    fn make(mid_exact: Dyadic, rad_exact: Dyadic, prec: u32) -> BallReal {
        debug_assert!(rad_exact.signum() >= 0);
        let (mid, err) = mid_exact.round_nearest(prec);
        let radius = rad_exact.add(&err).round_abs_up(RAD_BITS);
        BallReal { midpoint: mid, radius, precision: prec }
    }

    /// Exact dyadic as a radius-0 ball. The mantissa is kept in full even if
    /// longer than `prec`.
    pub fn exact_dyadic(d: Dyadic, prec: u32) -> BallReal {
        BallReal { midpoint: d, radius: Dyadic::zero(), precision: prec }
    }

    pub fn exact_bigint(n: &BigInt, prec: u32) -> BallReal {
        BallReal::exact_dyadic(Dyadic::from_bigint(n), prec)
    }

    pub fn exact_i64(n: i64, prec: u32) -> BallReal {
        BallReal::exact_dyadic(Dyadic::from_i64(n), prec)
    }

    /// Enclosure of the rational p/q.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> BallReal {
        let (lo, hi) =
            Dyadic::div_bounds(&Dyadic::from_bigint(p), &Dyadic::from_bigint(q), prec + 2);
        BallReal::from_endpoints(lo, hi, prec)
    }

    /// Ball covering [lo, hi].
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> BallReal {
        debug_assert!(lo.le(&hi));
        let mid = lo.add(&hi).half();
        let rad = hi.sub(&lo).half();
        BallReal::make(mid, rad, prec)
    }

    pub fn lower(&self) -> Dyadic {
        self.midpoint.sub(&self.radius)
    }

    pub fn upper(&self) -> Dyadic {
        self.midpoint.add(&self.radius)
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Re-round an existing ball to a (typically coarser) precision.
    pub fn round_to(&self, prec: u32) -> BallReal {
        BallReal::make(self.midpoint.clone(), self.radius.clone(), prec)
    }

    /// Widen the radius by an exact amount.
    pub fn add_error(&self, extra: &Dyadic) -> BallReal {
        debug_assert!(extra.signum() >= 0);
        BallReal {
            midpoint: self.midpoint.clone(),
            radius: self.radius.add(extra).round_abs_up(RAD_BITS),
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> BallReal {
        BallReal {
            midpoint: self.midpoint.neg(),
            radius: self.radius.clone(),
            precision: self.precision,
        }
    }

    pub fn add(&self, other: &BallReal) -> BallReal {
        let prec = self.precision.min(other.precision);
        BallReal::make(self.midpoint.add(&other.midpoint), self.radius.add(&other.radius), prec)
    }

    pub fn sub(&self, other: &BallReal) -> BallReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BallReal) -> BallReal {
        let prec = self.precision.min(other.precision);
        let mid = self.midpoint.mul(&other.midpoint);
        let rad = self
            .midpoint
            .abs()
            .mul(&other.radius)
            .add(&other.midpoint.abs().mul(&self.radius))
            .add(&self.radius.mul(&other.radius));
        BallReal::make(mid, rad, prec)
    }

    /// Exact scaling by an integer: no midpoint rounding, so multiplying an
    /// exact ball by a big integer stays exact. The reduction step depends on
    /// this when forming τ·q for 50-digit q.
    pub fn mul_bigint(&self, k: &BigInt) -> BallReal {
        let kd = Dyadic::from_bigint(k);
        BallReal {
            midpoint: self.midpoint.mul(&kd),
            radius: self.radius.mul(&kd.abs()).round_abs_up(RAD_BITS),
            precision: self.precision,
        }
    }

    pub fn mul_i64(&self, k: i64) -> BallReal {
        self.mul_bigint(&BigInt::from(k))
    }

    /// Exact translation by an integer.
    pub fn add_bigint(&self, k: &BigInt) -> BallReal {
        BallReal {
            midpoint: self.midpoint.add(&Dyadic::from_bigint(k)),
            radius: self.radius.clone(),
            precision: self.precision,
        }
    }

    pub fn add_i64(&self, k: i64) -> BallReal {
        self.add_bigint(&BigInt::from(k))
    }

    pub fn div(&self, other: &BallReal) -> Result<BallReal, Error> {
        let prec = self.precision.min(other.precision);
        let (blo, bhi) = (other.lower(), other.upper());
        if blo.signum() <= 0 && bhi.signum() >= 0 {
            return Err(Error::DivisorContainsZero);
        }
        let (alo, ahi) = (self.lower(), self.upper());
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for num in [&alo, &ahi] {
            for den in [&blo, &bhi] {
                let (l, h) = Dyadic::div_bounds(num, den, prec + 2);
                lo = Some(match lo {
                    None => l,
                    Some(c) => c.min(&l),
                });
                hi = Some(match hi {
                    None => h,
                    Some(c) => c.max(&h),
                });
            }
        }
        Ok(BallReal::from_endpoints(lo.unwrap(), hi.unwrap(), prec))
    }

    /// Division by a small exact integer.
    pub fn div_i64(&self, k: i64) -> Result<BallReal, Error> {
        self.div(&BallReal::exact_i64(k, self.precision))
    }

    pub fn pow_u32(&self, e: u32) -> BallReal {
        let mut result = BallReal::exact_i64(1, self.precision);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn sqrt(&self) -> Result<BallReal, Error> {
        let lo = self.lower();
        if lo.signum() < 0 {
            return Err(Error::NegativeSqrt);
        }
        let (slo, _) = Dyadic::sqrt_bounds(&lo, self.precision + 2);
        let (_, shi) = Dyadic::sqrt_bounds(&self.upper(), self.precision + 2);
        Ok(BallReal::from_endpoints(slo, shi, self.precision))
    }

    /// Enclosure of |x|.
    pub fn abs_ball(&self) -> BallReal {
        let (lo, hi) = (self.lower(), self.upper());
        if lo.signum() >= 0 {
            self.clone()
        } else if hi.signum() <= 0 {
            self.neg()
        } else {
            BallReal::from_endpoints(Dyadic::zero(), lo.abs().max(&hi.abs()), self.precision)
        }
    }

    /// Enclosure of max(x, y) (endpoint-wise).
    pub fn max_ball(&self, other: &BallReal) -> BallReal {
        let prec = self.precision.min(other.precision);
        BallReal::from_endpoints(
            self.lower().max(&other.lower()),
            self.upper().max(&other.upper()),
            prec,
        )
    }

    pub fn contains_zero(&self) -> bool {
        self.lower().signum() <= 0 && self.upper().signum() >= 0
    }

    /// Certify the sign of the represented value, when the interval permits.
    pub fn certified_sign(&self) -> SignCert {
        if self.lower().signum() > 0 {
            SignCert::Positive
        } else if self.upper().signum() < 0 {
            SignCert::Negative
        } else {
            SignCert::Undecidable
        }
    }

    /// Distance to the nearest integer, as (that integer, certified ball
    /// inside [0, 1/2]). Requires radius < 1/4; with a wider ball the nearest
    /// integer is ambiguous. Soundness uses only that x ↦ ‖x‖ is 1-Lipschitz,
    /// so the enclosure stays valid even if the interval straddles a
    /// half-integer.
    pub fn nearest_int_distance(&self) -> Result<(BigInt, BallReal), Error> {
        let quarter = Dyadic::pow2(-2);
        if !self.radius.lt(&quarter) {
            return Err(Error::AmbiguousNearestInteger);
        }
        let (n, t) = self.midpoint.nearest_bigint();
        let t_abs = t.abs();
        let half = Dyadic::pow2(-1);
        let lo = t_abs.sub(&self.radius).max(&Dyadic::zero());
        let hi = t_abs.add(&self.radius).min(&half);
        Ok((n, BallReal::from_endpoints(lo, hi, self.precision)))
    }

    /// Natural logarithm; the ball must be certified positive.
    pub fn ln(&self) -> Result<BallReal, Error> {
        let lo = self.lower();
        if lo.signum() <= 0 {
            return Err(Error::NonPositiveLog);
        }
        let w = self.precision + LN_GUARD;
        let ln_mid = ln_dyadic(&self.midpoint, w);
        // Mean value theorem: |ln x − ln mid| ≤ radius / lo for x in the ball.
        let prop = if self.radius.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::div_dir(&self.radius, &lo, RAD_BITS, Dir::Up)
        };
        Ok(ln_mid.add_error(&prop).round_to(self.precision))
    }

    /// (lower, upper) decimal strings with outward rounding.
    pub fn decimal_interval(&self, digits: u32) -> (String, String) {
        (
            self.lower().decimal_string_dir(digits, Dir::Down),
            self.upper().decimal_string_dir(digits, Dir::Up),
        )
    }

    pub fn to_interval_string(&self, digits: u32) -> String {
        let (lo, hi) = self.decimal_interval(digits);
        format!("[{lo}, {hi}]")
    }

    pub fn approx_f64(&self) -> f64 {
        self.midpoint.to_f64_approx()
    }
}

/// Certified enclosure of ln(d) for an exact dyadic d > 0, at working
/// precision w.
fn ln_dyadic(d: &Dyadic, w: u32) -> BallReal {
    debug_assert!(d.signum() > 0);
    let s = d.bits() as i64;
    let k = d.exponent() + s;
    // f = d / 2^k lies in [1/2, 1).
    let f = d.shl(-k);
    let one = Dyadic::one();
    let num = BallReal::exact_dyadic(f.sub(&one), w);
    let den = BallReal::exact_dyadic(f.add(&one), w);
    let z = num.div(&den).expect("f + 1 >= 3/2 is bounded away from zero");
    let s_ball = atanh_series(&z, w);
    ln2_ball(w).mul_i64(k).add(&s_ball.mul_i64(2))
}

/// Certified Σ_{j≥0} z^{2j+1}/(2j+1) for |z| ≤ 11/32, at precision w.
fn atanh_series(z: &BallReal, w: u32) -> BallReal {
    let bound = Dyadic::new(BigInt::from(11), -5);
    assert!(
        z.upper().abs().le(&bound) && z.lower().abs().le(&bound),
        "atanh series argument out of range"
    );
    // Tail after N terms: |z|^(2N+1)/((2N+1)(1−z²)) ≤ 2^(−3N) for |z| ≤ 11/32.
    let n_terms = (w as usize) / 3 + 8;
    let zsq = z.mul(z);
    let mut p = z.clone();
    let mut acc = BallReal::exact_i64(0, w);
    for j in 0..n_terms {
        acc = acc.add(&p.div_i64((2 * j + 1) as i64).expect("odd divisor"));
        if j + 1 < n_terms {
            p = p.mul(&zsq);
        }
    }
    acc.add_error(&Dyadic::pow2(-(3 * n_terms as i64)))
}

/// ln 2 = 2·atanh(1/3), cached per working precision.
fn ln2_ball(w: u32) -> BallReal {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, BallReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(v) = guard.get(&w) {
            return v.clone();
        }
    }
    let third = BallReal::from_ratio(&BigInt::from(1), &BigInt::from(3), w);
    let v = atanh_series(&third, w).mul_i64(2);
    cache.lock().unwrap().insert(w, v.clone());
    v
}
