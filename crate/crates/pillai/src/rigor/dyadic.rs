//! Exact dyadic rationals `man * 2^exp` with arbitrary-precision mantissa.
//!
//! Every inexact real in this crate is represented as a ball whose midpoint
//! and radius are dyadics. Dyadic addition, subtraction and multiplication
//! are exact; division and roots only exist in explicitly directed-rounding
//! form, so any rounding decision is visible at the call site. That is the
//! property the certification layers rely on: an operation either returns the
//! exact value or states which side of it the result lies on.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for the inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    /// Toward negative infinity (result ≤ exact value).
    Down,
    /// Toward positive infinity (result ≥ exact value).
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// An exact dyadic rational. Normalized so that the mantissa is odd or zero,
/// which makes the representation canonical and `Eq` structural.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
        } else if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    /// 2^k as a dyadic.
    pub fn pow2(k: i64) -> Dyadic {
        Dyadic { man: BigInt::one(), exp: k }
    }

    pub fn from_bigint(n: &BigInt) -> Dyadic {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Mantissa bit length (0 for zero).
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Position of the most significant bit: |self| < 2^msb_exp and, when
    /// nonzero, |self| ≥ 2^(msb_exp - 1).
    pub fn msb_exp(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: if self.man.is_zero() { 0 } else { self.exp } }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Exact sum.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.exp >= other.exp {
            let sh = (self.exp - other.exp) as usize;
            Dyadic::new((&self.man << sh) + &other.man, other.exp)
        } else {
            let sh = (other.exp - self.exp) as usize;
            Dyadic::new(&self.man + (&other.man << sh), self.exp)
        }
    }

    /// Exact difference.
    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    /// Exact product with 2^k.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { man: self.man.clone(), exp: self.exp + k }
        }
    }

    pub fn mul_i64(&self, k: i64) -> Dyadic {
        Dyadic::new(&self.man * k, self.exp)
    }

    /// Exact halving.
    pub fn half(&self) -> Dyadic {
        self.shl(-1)
    }

    pub fn cmp(&self, other: &Dyadic) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a < b => Ordering::Less,
            (a, b) if a > b => Ordering::Greater,
            (0, 0) => Ordering::Equal,
            _ => {
                // Same nonzero sign: compare exactly via the difference.
                match self.sub(other).signum() {
                    -1 => Ordering::Less,
                    0 => Ordering::Equal,
                    _ => Ordering::Greater,
                }
            }
        }
    }

    pub fn lt(&self, other: &Dyadic) -> bool {
        self.cmp(other) == Ordering::Less
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        self.cmp(other) != Ordering::Greater
    }

    pub fn max(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Less { other.clone() } else { self.clone() }
    }

    pub fn min(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Greater { other.clone() } else { self.clone() }
    }

    /// Round to at most `prec` mantissa bits, to nearest (ties away from
    /// zero). Returns the rounded value and an upper bound on the absolute
    /// rounding error (zero when exact).
    pub fn round_nearest(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let sh = (bits - prec as u64) as usize;
        let mag = self.man.magnitude();
        let mut q: BigUint = mag >> sh;
        let r: BigUint = mag - (&q << sh);
        let half: BigUint = BigUint::one() << (sh - 1);
        if r >= half {
            q += 1u32;
        }
        let man = BigInt::from_biguint(self.man.sign(), q);
        // Error at most half an ulp of the kept position.
        (Dyadic::new(man, self.exp + sh as i64), Dyadic::pow2(self.exp + sh as i64 - 1))
    }

    /// Round to at most `prec` mantissa bits in the given direction.
    pub fn round_dir(&self, prec: u32, dir: Dir) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let sh = (bits - prec as u64) as usize;
        let mag = self.man.magnitude();
        let q: BigUint = mag >> sh;
        let inexact = (&q << sh) != *mag;
        let bump = match (self.man.sign(), dir) {
            (Sign::Plus, Dir::Up) => inexact,
            (Sign::Minus, Dir::Down) => inexact,
            _ => false,
        };
        let q = if bump { q + 1u32 } else { q };
        Dyadic::new(BigInt::from_biguint(self.man.sign(), q), self.exp + sh as i64)
    }

    /// Round the magnitude up (away from zero) to at most `prec` mantissa
    /// bits. Used for error radii, which only ever need upper bounds.
    pub fn round_abs_up(&self, prec: u32) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let sh = (bits - prec as u64) as usize;
        let mag = self.man.magnitude();
        let q: BigUint = mag >> sh;
        let q = if (&q << sh) != *mag { q + 1u32 } else { q };
        Dyadic::new(BigInt::from_biguint(self.man.sign(), q), self.exp + sh as i64)
    }

    /// Certified enclosure lo ≤ a/b ≤ hi with roughly `prec` significant
    /// bits. `b` must be nonzero.
    pub fn div_bounds(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let extra = (prec as i64 + 2 + b.bits() as i64 - a.bits() as i64).max(0) as usize;
        let amag = a.man.magnitude() << extra;
        let bmag = b.man.magnitude();
        let q: BigUint = &amag / bmag;
        let inexact = (&q * bmag) != amag;
        let exp = a.exp - b.exp - extra as i64;
        let (lo_mag, hi_mag) = if inexact { (q.clone(), q + 1u32) } else { (q.clone(), q) };
        let negative = a.man.sign() != b.man.sign();
        if negative {
            (
                Dyadic::new(-BigInt::from(hi_mag), exp).round_dir(prec, Dir::Down),
                Dyadic::new(-BigInt::from(lo_mag), exp).round_dir(prec, Dir::Up),
            )
        } else {
            (
                Dyadic::new(BigInt::from(lo_mag), exp).round_dir(prec, Dir::Down),
                Dyadic::new(BigInt::from(hi_mag), exp).round_dir(prec, Dir::Up),
            )
        }
    }

    /// Directed quotient: a value on the chosen side of a/b.
    pub fn div_dir(a: &Dyadic, b: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        let (lo, hi) = Dyadic::div_bounds(a, b, prec);
        match dir {
            Dir::Down => lo,
            Dir::Up => hi,
        }
    }

    /// Certified enclosure of √a (a ≥ 0) with roughly `prec` significant bits.
    pub fn sqrt_bounds(a: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        assert!(a.signum() >= 0, "dyadic sqrt of negative value");
        if a.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let target = 2 * prec as i64 + 4;
        let mut s = (target - a.bits() as i64).max(0);
        if (a.exp - s) % 2 != 0 {
            s += 1;
        }
        let mag = a.man.magnitude() << (s as usize);
        let r = mag.sqrt();
        let inexact = (&r * &r) != mag;
        let exp = (a.exp - s) / 2;
        let lo = Dyadic::new(BigInt::from(r.clone()), exp);
        let hi = if inexact { Dyadic::new(BigInt::from(r + 1u32), exp) } else { lo.clone() };
        (lo.round_dir(prec, Dir::Down), hi.round_dir(prec, Dir::Up))
    }

    /// Certified enclosure of the n-th root of a ≥ 0.
    pub fn nth_root_bounds(a: &Dyadic, n: u32, prec: u32) -> (Dyadic, Dyadic) {
        assert!(a.signum() >= 0, "dyadic root of negative value");
        assert!(n >= 1);
        if a.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let target = n as i64 * (prec as i64 + 2);
        let mut s = (target - a.bits() as i64).max(0);
        while (a.exp - s) % n as i64 != 0 {
            s += 1;
        }
        let mag = a.man.magnitude() << (s as usize);
        let r = mag.nth_root(n);
        let inexact = r.pow(n) != mag;
        let exp = (a.exp - s) / n as i64;
        let lo = Dyadic::new(BigInt::from(r.clone()), exp);
        let hi = if inexact { Dyadic::new(BigInt::from(r + 1u32), exp) } else { lo.clone() };
        (lo.round_dir(prec, Dir::Down), hi.round_dir(prec, Dir::Up))
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as usize))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Largest integer ≤ self (exact).
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as usize)
        } else {
            let sh = (-self.exp) as usize;
            let mag = self.man.magnitude() >> sh;
            match self.man.sign() {
                Sign::Minus => {
                    let q = BigInt::from_biguint(Sign::Minus, mag);
                    if (&q << sh) == self.man.clone() { q } else { q - 1 }
                }
                _ => BigInt::from(mag),
            }
        }
    }

    /// Smallest integer ≥ self (exact).
    pub fn ceil_bigint(&self) -> BigInt {
        -(self.neg().floor_bigint())
    }

    /// Nearest integer (ties toward +∞) together with the exact signed
    /// distance self − nearest.
    pub fn nearest_bigint(&self) -> (BigInt, Dyadic) {
        let shifted = self.add(&Dyadic::pow2(-1));
        let n = shifted.floor_bigint();
        let t = self.sub(&Dyadic::from_bigint(&n));
        (n, t)
    }

    /// Decimal string with `digits` fractional digits, rounded in the given
    /// direction. The output parses back exactly as a rational on the stated
    /// side of the true value.
    pub fn decimal_string_dir(&self, digits: u32, dir: Dir) -> String {
        let ten_pow = BigInt::from(10u32).pow(digits);
        let scaled: BigInt = if self.exp >= 0 {
            (&self.man << (self.exp as usize)) * &ten_pow
        } else {
            let sh = (-self.exp) as usize;
            let prod = &self.man * &ten_pow;
            let mag = prod.magnitude() >> sh;
            let q = BigInt::from_biguint(prod.sign(), mag.clone());
            let inexact = (prod.magnitude() >> sh) << sh != *prod.magnitude();
            match (prod.sign(), dir, inexact) {
                (Sign::Plus, Dir::Up, true) => q + 1,
                (Sign::Minus, _, true) => {
                    // magnitude shift truncated toward zero; value is more negative
                    if dir == Dir::Down {
                        q - 1
                    } else {
                        q
                    }
                }
                _ => q,
            }
        };
        let neg = scaled.sign() == Sign::Minus;
        let mag = scaled.magnitude().to_string();
        let mag = if mag.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        let (int_part, frac_part) = mag.split_at(mag.len() - digits as usize);
        let frac_trimmed = frac_part.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int_part);
        if !frac_trimmed.is_empty() {
            out.push('.');
            out.push_str(frac_trimmed);
        }
        if out == "-0" {
            out = "0".to_string();
        }
        out
    }

    /// Lossy conversion for progress output and diagnostics only; never used
    /// in a certified comparison.
    pub fn to_f64_approx(&self) -> f64 {
        let bits = self.bits();
        if bits == 0 {
            return 0.0;
        }
        let (r, _) = self.round_nearest(64);
        let m = r.man.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} * 2^{} ~ {})", self.man, self.exp, self.to_f64_approx())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn d(man: i64, exp: i64) -> Dyadic {
        Dyadic::new(BigInt::from(man), exp)
    }

    #[test]
    fn normalization_makes_representation_canonical() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(-6, 1), d(-3, 2));
        assert_eq!(Dyadic::new(BigInt::zero(), 55), Dyadic::zero());
    }

    #[test]
    fn exact_ring_ops() {
        let a = d(3, -2); // 0.75
        let b = d(5, -1); // 2.5
        assert_eq!(a.add(&b), d(13, -2)); // 3.25
        assert_eq!(b.sub(&a), d(7, -2)); // 1.75
        assert_eq!(a.mul(&b), d(15, -3)); // 1.875
        assert_eq!(a.half(), d(3, -3));
    }

    #[test]
    fn rounding_directions_bracket_the_value() {
        let v = d((1 << 20) + 12345, -20);
        for prec in [4u32, 8, 12, 19] {
            let lo = v.round_dir(prec, Dir::Down);
            let hi = v.round_dir(prec, Dir::Up);
            assert!(lo.le(&v) && v.le(&hi));
            assert!(lo.bits() <= prec as u64 && hi.bits() <= prec as u64 + 1);
            let (near, err) = v.round_nearest(prec);
            assert!(near.sub(&v).abs().le(&err));
        }
        let neg = v.neg();
        let lo = neg.round_dir(6, Dir::Down);
        let hi = neg.round_dir(6, Dir::Up);
        assert!(lo.le(&neg) && neg.le(&hi));
    }

    #[test]
    fn division_bounds_enclose_exact_quotients() {
        let a = d(1, 0);
        let b = d(3, 0);
        let (lo, hi) = Dyadic::div_bounds(&a, &b, 64);
        // 1/3 is not dyadic, so the bounds are strict and tight.
        assert!(lo.lt(&hi));
        let third_lo = lo.to_rational();
        let third_hi = hi.to_rational();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(third_lo < third && third < third_hi);
        let width = hi.sub(&lo);
        assert!(width.le(&Dyadic::pow2(-64)));

        // Exact case: no widening.
        let (lo, hi) = Dyadic::div_bounds(&d(10, 0), &d(5, 0), 16);
        assert_eq!(lo, hi);
        assert_eq!(lo, d(2, 0));

        // Signs.
        let (lo, hi) = Dyadic::div_bounds(&d(-1, 0), &d(3, 0), 32);
        assert!(lo.lt(&hi));
        assert!(lo.signum() < 0 && hi.signum() < 0);
    }

    #[test]
    fn sqrt_bounds_enclose() {
        let (lo, hi) = Dyadic::sqrt_bounds(&d(2, 0), 80);
        assert!(lo.mul(&lo).le(&d(2, 0)));
        assert!(d(2, 0).le(&hi.mul(&hi)));
        assert!(hi.sub(&lo).le(&Dyadic::pow2(-78)));
        let (lo, hi) = Dyadic::sqrt_bounds(&d(9, 0), 20);
        assert_eq!(lo, d(3, 0));
        assert_eq!(hi, d(3, 0));
    }

    #[test]
    fn nth_root_bounds_enclose() {
        let (lo, hi) = Dyadic::nth_root_bounds(&d(69, 0), 3, 100);
        let target = d(69, 0);
        assert!(lo.mul(&lo).mul(&lo).le(&target));
        assert!(target.le(&hi.mul(&hi).mul(&hi)));
        let (lo, hi) = Dyadic::nth_root_bounds(&d(27, 0), 3, 20);
        assert_eq!(lo, hi);
        assert_eq!(lo, d(3, 0));
    }

    #[test]
    fn floor_ceil_nearest() {
        assert_eq!(d(7, -1).floor_bigint(), BigInt::from(3)); // 3.5
        assert_eq!(d(7, -1).ceil_bigint(), BigInt::from(4));
        assert_eq!(d(-7, -1).floor_bigint(), BigInt::from(-4));
        assert_eq!(d(-7, -1).ceil_bigint(), BigInt::from(-3));
        assert_eq!(d(12, 0).floor_bigint(), BigInt::from(12));
        let (n, t) = d(13, -2).nearest_bigint(); // 3.25
        assert_eq!(n, BigInt::from(3));
        assert_eq!(t, d(1, -2));
        let (n, t) = d(-13, -2).nearest_bigint();
        assert_eq!(n, BigInt::from(-3));
        assert_eq!(t, d(-1, -2));
        // Tie: 2.5 rounds toward +inf.
        let (n, t) = d(5, -1).nearest_bigint();
        assert_eq!(n, BigInt::from(3));
        assert_eq!(t, d(-1, -1));
    }

    #[test]
    fn decimal_strings_are_directed() {
        let third_lo = Dyadic::div_dir(&d(1, 0), &d(3, 0), 128, Dir::Down);
        let s_lo = third_lo.decimal_string_dir(10, Dir::Down);
        let s_hi = third_lo.decimal_string_dir(10, Dir::Up);
        assert!(s_lo.starts_with("0.33333333") && s_hi.starts_with("0.33333333"));
        assert!(s_lo < s_hi);
        assert_eq!(d(3, 0).decimal_string_dir(5, Dir::Down), "3");
        assert_eq!(d(-7, -1).decimal_string_dir(3, Dir::Down), "-3.5");
        assert_eq!(d(-7, -1).decimal_string_dir(3, Dir::Up), "-3.5");
        assert_eq!(d(-1, -4).decimal_string_dir(1, Dir::Down), "-0.1");
        assert_eq!(d(-1, -4).decimal_string_dir(1, Dir::Up), "0");
    }

    #[test]
    fn comparisons() {
        assert!(d(1, -3).lt(&d(1, -2)));
        assert!(d(-1, 5).lt(&d(1, -10)));
        assert_eq!(d(3, 4).cmp(&d(3, 4)), Ordering::Equal);
        assert_eq!(d(5, 0).max(&d(9, -1)), d(5, 0)); // 5 vs 4.5
    }
}
