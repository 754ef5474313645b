//! Logarithmic heights and the two big bound engines built on them.
//!
//! The absolute bound on the exponents comes from a chain of three
//! ingredients. The Weil height h(γ) of an algebraic number measures its
//! arithmetic complexity; for a root of a primitive integer polynomial
//! a₀x^d + … it is (1/d)(log a₀ + Σ log max(|γ⁽ⁱ⁾|, 1)) over the
//! conjugates. Matveev's theorem turns heights into a lower bound for a
//! nonzero linear form in logarithms: |Λ| > exp(−V) with
//! V = 1.4·30^{t+3}·t^{4.5}·D²(1+log D)(1+log B)·A₁⋯A_t. Finally an
//! absolute-value bootstrap of the Gúzman Santos–Luca type converts an
//! inequality x < Y·(log x)^m into the unconditional x < 2^m·Y·(log Y)^m.
//!
//! Everything here evaluates in ball arithmetic and rounds outward, so a
//! returned bound is always safe to compare against a printed constant.
//! Bounds of the shape C·(1 + log n)^p, ubiquitous in the chain, get a
//! small symbolic representation ([`LogPowerBound`]) so that additive
//! constants can be folded rigorously given a floor for n instead of being
//! dropped by hand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rigor::{BallReal, Dyadic};
use crate::Error;

/// An algebraic number described by its primitive minimal polynomial and
/// certified moduli of all conjugates.
///
/// `minpoly_coeffs` lists a₀..a_d from the leading coefficient down;
/// `conjugate_abs` holds one ball |γ⁽ⁱ⁾| per root, in any order.
#[derive(Clone, Debug)]
pub struct AlgebraicNumberDesc {
    pub minpoly_coeffs: Vec<BigInt>,
    pub conjugate_abs: Vec<BallReal>,
}

impl AlgebraicNumberDesc {
    pub fn validate(&self) -> Result<(), Error> {
        if self.minpoly_coeffs.len() < 2 {
            return Err(Error::Config("minimal polynomial must have degree >= 1".into()));
        }
        if self.minpoly_coeffs[0].is_zero() || self.minpoly_coeffs[0].is_negative() {
            return Err(Error::Config("leading coefficient must be positive".into()));
        }
        let mut g = self.minpoly_coeffs[0].clone();
        for c in &self.minpoly_coeffs[1..] {
            g = g.gcd(c);
        }
        if g != BigInt::from(1) {
            return Err(Error::NotReduced(format!("polynomial content is {g}, not 1")));
        }
        let degree = self.minpoly_coeffs.len() - 1;
        if self.conjugate_abs.len() != degree {
            return Err(Error::Config(format!(
                "{} conjugate moduli supplied for degree {degree}",
                self.conjugate_abs.len()
            )));
        }
        Ok(())
    }
}

/// Height of the reduced rational p/q: log max(|p|, q).
pub fn height_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<BallReal, Error> {
    if q.is_zero() || q.is_negative() {
        return Err(Error::Config("denominator must be positive".into()));
    }
    let g = p.gcd(q);
    if g != BigInt::from(1) {
        return Err(Error::NotReduced(format!("gcd({p}, {q}) = {g}")));
    }
    let m = p.abs().max(q.clone());
    if m == BigInt::from(1) {
        return Ok(BallReal::exact_i64(0, prec));
    }
    BallReal::exact_bigint(&m, prec).ln()
}

/// Height from the minimal polynomial: (1/d)(log a₀ + Σ log max(|γ⁽ⁱ⁾|, 1)).
///
/// A conjugate ball straddling 1 contributes the interval [0, log upper],
/// which keeps the result an enclosure rather than failing: max(·, 1) is
/// applied to both endpoints before taking the log.
pub fn height_from_minpoly(desc: &AlgebraicNumberDesc, prec: u32) -> Result<BallReal, Error> {
    desc.validate()?;
    let one = Dyadic::one();
    let mut sum = BallReal::exact_bigint(&desc.minpoly_coeffs[0], prec).ln()?;
    for cab in &desc.conjugate_abs {
        let lo = cab.lower().max(&one);
        let hi = cab.upper().max(&one);
        let clamped = BallReal::from_endpoints(lo, hi, prec);
        sum = sum.add(&clamped.ln()?);
    }
    let h = sum.div_i64(desc.minpoly_coeffs.len() as i64 - 1)?;
    // Heights are nonnegative; the lower endpoint may round a hair below 0.
    let lo = h.lower().max(&Dyadic::zero());
    let hi = h.upper().max(&Dyadic::zero());
    Ok(BallReal::from_endpoints(lo, hi, prec))
}

/// The standard height-combination bounds. These return upper bounds, not
/// exact heights.
#[derive(Clone, Copy, Debug)]
pub enum HeightRule {
    /// h(η ± γ) ≤ h(η) + h(γ) + log 2.
    Sum,
    /// h(ηγ^{±1}) ≤ h(η) + h(γ).
    Product,
    /// h(γ^s) = |s|·h(γ).
    Power(i64),
}

pub fn height_bound(rule: HeightRule, inputs: &[BallReal]) -> Result<BallReal, Error> {
    match rule {
        HeightRule::Sum => {
            let [h1, h2] = two(inputs)?;
            let prec = h1.precision.max(h2.precision);
            Ok(h1.add(h2).add(&BallReal::exact_i64(2, prec).ln()?))
        }
        HeightRule::Product => {
            let [h1, h2] = two(inputs)?;
            Ok(h1.add(h2))
        }
        HeightRule::Power(s) => match inputs {
            [h] => Ok(h.mul_i64(s.abs())),
            _ => Err(Error::Config("power rule takes one height".into())),
        },
    }
}

fn two(inputs: &[BallReal]) -> Result<[&BallReal; 2], Error> {
    match inputs {
        [a, b] => Ok([a, b]),
        _ => Err(Error::Config("rule takes two heights".into())),
    }
}

/// Data for one invocation of Matveev's theorem over a degree-D field:
/// t logarithms with height majorants Aᵢ and exponent majorant B.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub d: u32,
    pub b: BallReal,
    pub a: Vec<BallReal>,
}

impl MatveevInstance {
    pub fn new(d: u32, b: BallReal, a: Vec<BallReal>) -> Result<Self, Error> {
        if d == 0 || a.is_empty() {
            return Err(Error::Config("need a positive degree and at least one A".into()));
        }
        // Side condition Aᵢ ≥ 0.16. The caller owns the hypothesis for
        // the true values (an exactly-0.16 input cannot certify a weak
        // inequality through outward rounding); what is rejected here is a
        // ball certifiably below the floor. [`matveev_a`] builds values
        // whose lower endpoints clear it outright.
        let floor = BigRational::new(BigInt::from(4), BigInt::from(25));
        for (i, ai) in a.iter().enumerate() {
            if ai.upper().to_rational() < floor {
                return Err(Error::HypothesisViolated(format!(
                    "A_{} certified below 0.16",
                    i + 1
                )));
            }
        }
        if b.lower().signum() <= 0 {
            return Err(Error::HypothesisViolated("B must be certified positive".into()));
        }
        Ok(MatveevInstance { d, b, a })
    }

    pub fn t(&self) -> u32 {
        self.a.len() as u32
    }
}

/// Builds a height majorant A ≥ max{D·h(γ), |log γ|, 0.16} whose lower
/// endpoint certifiably clears the 0.16 floor (the floor is rounded up to
/// a dyadic; enlarging an A only weakens the final bound, which is the
/// safe direction).
pub fn matveev_a(d: u32, height: &BallReal, log_abs: &BallReal) -> BallReal {
    let prec = height.precision.max(log_abs.precision);
    let (_, floor_up) = Dyadic::div_bounds(
        &Dyadic::from_bigint(&BigInt::from(4)),
        &Dyadic::from_bigint(&BigInt::from(25)),
        prec,
    );
    let floor = BallReal::exact_dyadic(floor_up, prec);
    height
        .mul_i64(d as i64)
        .max_ball(&log_abs.abs_ball())
        .max_ball(&floor)
}

/// The structural factor 1.4·30^{t+3}·t^{4.5}·D²·(1 + log D): everything
/// in Matveev's V except (1 + log B) and the product of the Aᵢ.
pub fn matveev_coefficient(t: u32, d: u32, prec: u32) -> Result<BallReal, Error> {
    let w = prec + 16;
    let pow30 = BigInt::from(30).pow(t + 3);
    let t4 = BigInt::from(t).pow(4);
    // t^{4.5} = t⁴·√t.
    let sqrt_t = BallReal::exact_i64(t as i64, w).sqrt()?;
    let one_plus_log_d = BallReal::exact_i64(d as i64, w).ln()?.add_i64(1);
    let v = BallReal::from_ratio(&BigInt::from(7), &BigInt::from(5), w)
        .mul_bigint(&pow30)
        .mul_bigint(&t4)
        .mul(&sqrt_t)
        .mul_i64((d as i64) * (d as i64))
        .mul(&one_plus_log_d);
    Ok(v.round_to(prec))
}

/// Matveev's lower bound: returns the certified
/// V = 1.4·30^{t+3}·t^{4.5}·D²(1+log D)(1+log B)·A₁⋯A_t, so that any
/// NONZERO linear form covered by the instance satisfies log|Λ| > −V.
/// Nonvanishing stays with the caller.
pub fn matveev_lower_bound(inst: &MatveevInstance) -> Result<BallReal, Error> {
    let prec = inst
        .a
        .iter()
        .map(|x| x.precision)
        .max()
        .unwrap_or(inst.b.precision)
        .max(inst.b.precision);
    let mut v = matveev_coefficient(inst.t(), inst.d, prec + 16)?;
    v = v.mul(&inst.b.ln()?.add_i64(1));
    for ai in &inst.a {
        v = v.mul(ai);
    }
    Ok(v.round_to(prec))
}

/// A bound of the shape coeff·(1 + log n)^pow, the currency of the chain.
#[derive(Clone, Debug)]
pub struct LogPowerBound {
    pub coeff: BallReal,
    pub pow: u32,
}

impl LogPowerBound {
    pub fn new(coeff: BallReal, pow: u32) -> Self {
        LogPowerBound { coeff, pow }
    }

    /// Value at a concrete enclosure of (1 + log n).
    pub fn eval(&self, one_plus_log_n: &BallReal) -> BallReal {
        self.coeff.mul(&one_plus_log_n.pow_u32(self.pow))
    }

    pub fn scale(&self, c: &BallReal) -> LogPowerBound {
        LogPowerBound { coeff: self.coeff.mul(c), pow: self.pow }
    }

    pub fn mul(&self, other: &LogPowerBound) -> LogPowerBound {
        LogPowerBound { coeff: self.coeff.mul(&other.coeff), pow: self.pow + other.pow }
    }

    /// Raises the power from `pow` to `target` (a (1+log n) factor is ≥ 1
    /// whenever n ≥ 1, so this only weakens the bound).
    pub fn raise_pow(&self, target: u32) -> LogPowerBound {
        assert!(target >= self.pow);
        LogPowerBound { coeff: self.coeff.clone(), pow: target }
    }

    /// Folds an additive constant into the coefficient, valid for n ≥ n₀:
    /// C·(1+log n)^p + c ≤ (C + c/(1+log n₀)^p)·(1+log n)^p.
    pub fn add_const(&self, c: &BallReal, n_floor: u64) -> Result<LogPowerBound, Error> {
        let prec = self.coeff.precision;
        let opl = BallReal::exact_i64(n_floor as i64, prec + 16).ln()?.add_i64(1);
        let coeff = self.coeff.add(&c.div(&opl.pow_u32(self.pow))?);
        Ok(LogPowerBound { coeff: coeff.round_to(prec), pow: self.pow })
    }

    /// Adds two bounds, raising the lower power first (valid for n ≥ 1).
    pub fn add(&self, other: &LogPowerBound) -> LogPowerBound {
        let pow = self.pow.max(other.pow);
        LogPowerBound {
            coeff: self.raise_pow(pow).coeff.add(&other.raise_pow(pow).coeff),
            pow,
        }
    }
}

/// Absolute-bound bootstrap: if Y > (4m²)^m and Y > x/(log x)^m, then
/// x < 2^m·Y·(log Y)^m. Returns that right-hand side.
///
/// The hypothesis check is strict and exact; equality is a violation.
pub fn guzman_luca_bound(m: u32, y: &BallReal) -> Result<BallReal, Error> {
    if m == 0 {
        return Err(Error::Config("exponent m must be positive".into()));
    }
    let threshold = BigInt::from(4u32 * m * m).pow(m);
    if !Dyadic::from_bigint(&threshold).lt(&y.lower()) {
        return Err(Error::HypothesisViolated(format!(
            "Y not certified > (4m^2)^m = {threshold}"
        )));
    }
    let log_y = y.ln()?;
    Ok(y.mul(&log_y.pow_u32(m)).mul_bigint(&BigInt::from(2).pow(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{real_root, RecurrenceSpec};

    fn ln_ball(k: i64, prec: u32) -> BallReal {
        BallReal::exact_i64(k, prec).ln().unwrap()
    }

    fn assert_encloses(ball: &BallReal, value: f64, tol: f64) {
        let lo = ball.lower().to_f64_approx();
        let hi = ball.upper().to_f64_approx();
        assert!(lo <= value && value <= hi, "{value} outside [{lo}, {hi}]");
        assert!(hi - lo < tol, "enclosure [{lo}, {hi}] wider than {tol}");
    }

    #[test]
    fn rational_heights() {
        let h = height_rational(&BigInt::from(1), &BigInt::from(1), 128).unwrap();
        assert!(h.is_exact() && h.midpoint.is_zero());
        let h = height_rational(&BigInt::from(3), &BigInt::from(1), 128).unwrap();
        assert_encloses(&h, 1.0986122886681098, 1e-20);
        let h = height_rational(&BigInt::from(-7), &BigInt::from(2), 128).unwrap();
        assert_encloses(&h, 1.9459101490553132, 1e-20);
        assert!(matches!(
            height_rational(&BigInt::from(6), &BigInt::from(4), 128),
            Err(Error::NotReduced(_))
        ));
        assert!(height_rational(&BigInt::from(1), &BigInt::from(-2), 128).is_err());
    }

    #[test]
    fn minpoly_height_of_the_binet_coefficient() {
        // a = α(α+1)/(3α²−1) has minimal polynomial 23x³ − 23x² + 6x − 1
        // with all roots inside the unit disk, so h(a) = (1/3)log 23. The
        // conjugate moduli come from exact symmetric-function relations:
        // |b|² · a = 1/23 (product of roots).
        let spec = RecurrenceSpec::padovan_analytic();
        let alpha = real_root(&spec, 192).unwrap();
        let a = alpha
            .mul(&alpha.add_i64(1))
            .div(&alpha.mul(&alpha).mul_i64(3).add_i64(-1))
            .unwrap();
        let babs = BallReal::exact_i64(1, 192).div(&a.mul_i64(23)).unwrap().sqrt().unwrap();
        assert!(babs.upper().to_f64_approx() < 1.0);
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![
                BigInt::from(23),
                BigInt::from(-23),
                BigInt::from(6),
                BigInt::from(-1),
            ],
            conjugate_abs: vec![a.abs_ball(), babs.clone(), babs],
        };
        let h = height_from_minpoly(&desc, 192).unwrap();
        let expect = ln_ball(23, 192).div_i64(3).unwrap();
        assert!(h.sub(&expect).contains_zero());
        assert!(h.radius.le(&Dyadic::pow2(-150)));
    }

    #[test]
    fn minpoly_height_of_the_plastic_number() {
        // x³ − x − 1: only α lies outside the unit disk, so h(α) = (1/3)log α
        // and 3h(α) = log α.
        let spec = RecurrenceSpec::padovan_analytic();
        let alpha = real_root(&spec, 192).unwrap();
        // |β|² = 1/α exactly (product of all roots is 1).
        let babs = BallReal::exact_i64(1, 192).div(&alpha).unwrap().sqrt().unwrap();
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(-1),
            ],
            conjugate_abs: vec![alpha.clone(), babs.clone(), babs],
        };
        let h = height_from_minpoly(&desc, 192).unwrap();
        assert!(h.mul_i64(3).sub(&alpha.ln().unwrap()).contains_zero());
    }

    #[test]
    fn minpoly_height_degenerate_and_straddling() {
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![BigInt::from(1), BigInt::from(-1)],
            conjugate_abs: vec![BallReal::exact_i64(1, 128)],
        };
        let h = height_from_minpoly(&desc, 128).unwrap();
        assert!(h.lower().signum() >= 0);
        assert!(h.upper().le(&Dyadic::pow2(-100)));

        // A conjugate ball straddling 1 stays an enclosure with a zero floor.
        let straddle = BallReal::from_endpoints(
            Dyadic::new(BigInt::from(63), -6),
            Dyadic::new(BigInt::from(66), -6),
            128,
        );
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![BigInt::from(2), BigInt::from(0), BigInt::from(-1)],
            conjugate_abs: vec![straddle.clone(), straddle],
        };
        let h = height_from_minpoly(&desc, 128).unwrap();
        assert!(h.lower().signum() >= 0);
        assert!(h.upper().to_f64_approx() > 0.3); // (1/2)(log 2 + 2·log 1.03…)
    }

    #[test]
    fn nonprimitive_and_malformed_descriptions_are_rejected() {
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![BigInt::from(46), BigInt::from(-46), BigInt::from(12), BigInt::from(-2)],
            conjugate_abs: vec![
                BallReal::exact_i64(0, 64),
                BallReal::exact_i64(0, 64),
                BallReal::exact_i64(0, 64),
            ],
        };
        assert!(matches!(desc.validate(), Err(Error::NotReduced(_))));
        let desc = AlgebraicNumberDesc {
            minpoly_coeffs: vec![BigInt::from(1), BigInt::from(-1), BigInt::from(0)],
            conjugate_abs: vec![BallReal::exact_i64(1, 64)],
        };
        assert!(desc.validate().is_err());
    }

    #[test]
    fn height_bound_combinators() {
        let zero = BallReal::exact_i64(0, 128);
        let ln2 = ln_ball(2, 128);
        let s = height_bound(HeightRule::Sum, &[zero.clone(), zero.clone()]).unwrap();
        assert!(s.sub(&ln2).contains_zero());
        let h = ln_ball(23, 128).div_i64(3).unwrap();
        let p = height_bound(HeightRule::Power(-1), &[h.clone()]).unwrap();
        assert!(p.sub(&h).contains_zero());

        // h(a(α^k − 1)) ≤ h(a) + k·h(α) + log 2 assembled from the rules.
        let spec = RecurrenceSpec::padovan_analytic();
        let alpha = real_root(&spec, 128).unwrap();
        let h_alpha = alpha.ln().unwrap().div_i64(3).unwrap();
        let k = 17;
        let pow = height_bound(HeightRule::Power(k), &[h_alpha.clone()]).unwrap();
        let diff = height_bound(HeightRule::Sum, &[pow, zero]).unwrap();
        let total = height_bound(HeightRule::Product, &[h.clone(), diff]).unwrap();
        let direct = h
            .add(&h_alpha.mul_i64(k))
            .add(&ln_ball(2, 128));
        assert!(total.sub(&direct).contains_zero());
    }

    #[test]
    fn matveev_unit_instance_is_exact() {
        // t = 1, D = 1, B = 1, A = 0.16: V = 1.4·30⁴·0.16 = 181440 with no
        // hidden factors.
        let inst = MatveevInstance::new(
            1,
            BallReal::exact_i64(1, 128),
            vec![BallReal::from_ratio(&BigInt::from(4), &BigInt::from(25), 128)],
        )
        .unwrap();
        let v = matveev_lower_bound(&inst).unwrap();
        assert_encloses(&v, 181440.0, 1e-25);
    }

    #[test]
    fn matveev_padovan_coefficient_stays_under_the_printed_constant() {
        let spec = RecurrenceSpec::padovan_analytic();
        let alpha = real_root(&spec, 192).unwrap();
        let ln_alpha = alpha.ln().unwrap();
        let coeff = matveev_coefficient(3, 3, 192)
            .unwrap()
            .mul(&ln_ball(23, 192))
            .mul(&ln_alpha)
            .mul(&ln_ball(3, 192).mul_i64(3));
        // Recomputed structural factor: ≈ 7.8586×10¹², below the printed
        // 7.97×10¹² and within 2% of it.
        assert!(coeff.upper().to_f64_approx() < 7.97e12);
        assert!(coeff.lower().to_f64_approx() > 7.97e12 * 0.98);
        assert!(coeff.upper().to_f64_approx() < 7.87e12);
        assert!(coeff.lower().to_f64_approx() > 7.85e12);
    }

    #[test]
    fn matveev_a_clears_the_floor_certifiably() {
        let tiny = BallReal::exact_i64(0, 128);
        let a = matveev_a(3, &tiny, &tiny);
        // The floor dominates and its lower endpoint is >= 4/25 exactly.
        let floor = BigRational::new(BigInt::from(4), BigInt::from(25));
        assert!(a.lower().to_rational() >= floor);
        assert!(a.upper().to_f64_approx() < 0.1600001);

        // When D·h dominates, the floor disappears.
        let spec = RecurrenceSpec::padovan_analytic();
        let alpha = real_root(&spec, 128).unwrap();
        let ln_alpha = alpha.ln().unwrap();
        let h_alpha = ln_alpha.div_i64(3).unwrap();
        let a = matveev_a(3, &h_alpha, &ln_alpha);
        assert!(a.sub(&ln_alpha).contains_zero());
    }

    #[test]
    fn matveev_requires_the_side_conditions() {
        assert!(MatveevInstance::new(
            3,
            BallReal::exact_i64(10, 64),
            vec![BallReal::from_ratio(&BigInt::from(3), &BigInt::from(20), 64)], // 0.15 < 0.16
        )
        .is_err());
        assert!(MatveevInstance::new(3, BallReal::exact_i64(10, 64), vec![]).is_err());
    }

    #[test]
    fn log_power_bounds_fold_and_evaluate() {
        let prec = 128;
        let b = LogPowerBound::new(BallReal::exact_i64(100, prec), 2);
        // 100(1+log n)² + 50 ≤ (100 + 50/(1+log 500)²)(1+log n)² for n ≥ 500.
        let folded = b.add_const(&BallReal::exact_i64(50, prec), 500).unwrap();
        assert!(folded.coeff.lower().to_f64_approx() > 100.9);
        assert!(folded.coeff.upper().to_f64_approx() < 101.0);
        // Evaluation at n = 500 dominates the unfolded value.
        let opl = ln_ball(500, prec).add_i64(1);
        let lhs = b.eval(&opl).add(&BallReal::exact_i64(50, prec));
        let rhs = folded.eval(&opl);
        assert!(lhs.upper().le(&rhs.upper()));

        let prod = b.mul(&LogPowerBound::new(BallReal::exact_i64(2, prec), 1));
        assert_eq!(prod.pow, 3);
        let sum = b.add(&LogPowerBound::new(BallReal::exact_i64(7, prec), 1));
        assert_eq!(sum.pow, 2);
        assert_encloses(&sum.coeff, 107.0, 1e-20);
    }

    #[test]
    fn bootstrap_examples() {
        // m = 1, Y = 100 → 2·100·log 100 ≈ 921.03.
        let y = BallReal::exact_i64(100, 128);
        let x = guzman_luca_bound(1, &y).unwrap();
        assert_encloses(&x, 921.0340371976183, 1e-10);

        // Boundary Y = (4m²)^m is not strict, so it must be rejected.
        let y = BallReal::exact_i64(46656, 128);
        assert!(matches!(guzman_luca_bound(3, &y), Err(Error::HypothesisViolated(_))));

        // m = 3, Y = 3.10×10³⁹ lands under 2×10⁴⁶.
        let y = BallReal::from_ratio(&BigInt::from(31), &BigInt::from(10), 192)
            .mul_bigint(&BigInt::from(10).pow(39));
        let x = guzman_luca_bound(3, &y).unwrap();
        assert!(x.upper().to_f64_approx() < 2.0e46);
        assert!(x.lower().to_f64_approx() > 1.8e46);
    }
}
