//! Certified continued fractions and the Dujella–Pethő reduction.
//!
//! The reduction step of the pipeline needs two things done rigorously.
//!
//! First, continued-fraction expansions of irrationals like log α/log 3,
//! with every partial quotient provably correct. The expansion runs interval
//! Euclid on the exact rational endpoints of a ball: when both endpoints
//! have the same floor, every real in the ball shares that quotient, so the
//! prefix is certified for the true value; when the floors disagree the
//! ball is re-evaluated at higher precision. Convergents are then exact
//! integer pairs.
//!
//! Second, the reduction lemma itself: if p/q is a convergent of τ with
//! q > 6M and ε := ‖μq‖ − M‖τq‖ > 0 (‖·‖ = distance to the nearest
//! integer), then 0 < |uτ − v + μ| < A·B^{−w} has no integer solution with
//! 0 < u ≤ M and w ≥ log(Aq/ε)/log B. Certifying ε > 0 needs ‖τq‖ through
//! a ball of τ scaled by a ~165-bit exact integer, which is why ball-by-
//! integer multiplication is exact in the rigor layer. ε is used through
//! its certified lower endpoint and the w-threshold through upper
//! endpoints, so every reported bound errs on the safe side.
//!
//! A round may need the lemma for hundreds of different μ against the same
//! τ (the μ-families): the expansion and the ‖τq‖ balls are computed once
//! per precision level and shared, and members that cannot be certified at
//! any scanned convergent are reported as exceptional rather than aborting
//! the family.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rigor::{BallReal, Dyadic, PrecisionPolicy};
use crate::Error;

/// A real number re-evaluable at any precision: bits in, certified ball out.
pub type BallProvider = Arc<dyn Fn(u32) -> Result<BallReal, Error> + Send + Sync>;

/// Wraps a fixed ball as a provider (exact data, no refinement).
pub fn constant_provider(x: BallReal) -> BallProvider {
    Arc::new(move |_bits| Ok(x.clone()))
}

/// How many convergents past the first qualifying one a reduction scans
/// before giving up on certifying ε > 0.
pub const CONVERGENT_LOOKAHEAD: usize = 16;

/// A certified continued-fraction prefix with exact convergents.
#[derive(Clone, Debug)]
pub struct CFExpansion {
    pub quotients: Vec<BigInt>,
    /// (p_k, q_k), aligned with `quotients`.
    pub convergents: Vec<(BigInt, BigInt)>,
    pub certified_through: usize,
    pub source_precision: u32,
}

#[derive(Clone, Debug)]
pub enum ExpandStop {
    /// Certify at least this many quotients.
    Terms(usize),
    /// Certify until q_k exceeds the threshold, then `lookahead` more.
    QExceeds { threshold: BigInt, lookahead: usize },
}

impl CFExpansion {
    /// Exact convergent (p_k, q_k), in lowest terms by construction.
    pub fn convergent(&self, k: usize) -> Result<(BigInt, BigInt), Error> {
        self.convergents.get(k).cloned().ok_or(Error::IndexBeyondCertified {
            index: k,
            certified_through: self.certified_through,
        })
    }

    /// Smallest k with q_k > threshold.
    pub fn first_q_exceeding(&self, threshold: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > threshold)
    }
}

/// Runs interval Euclid on the exact endpoints of x's ball, refining until
/// the stop condition is met by certified quotients alone.
pub fn expand(
    x: &BallProvider,
    stop: &ExpandStop,
    policy: &PrecisionPolicy,
) -> Result<CFExpansion, Error> {
    let mut last_bits = policy.initial_bits;
    for bits in policy.schedule() {
        last_bits = bits;
        let ball = x(bits)?;
        let (quotients, terminated) = certified_quotients(&ball, stop);
        if let Some(quotients) = truncate_at_stop(quotients, stop, terminated) {
            let convergents = convergents_of(&quotients);
            let certified_through = quotients.len().saturating_sub(1);
            return Ok(CFExpansion {
                quotients,
                convergents,
                certified_through,
                source_precision: bits,
            });
        }
    }
    Err(Error::PrecisionExhausted {
        bits: last_bits,
        what: "certifying continued-fraction quotients through the stop condition".into(),
    })
}

/// Quotients shared by every real in the ball, plus whether the expansion
/// terminated exactly (rational input).
fn certified_quotients(ball: &BallReal, stop: &ExpandStop) -> (Vec<BigInt>, bool) {
    let mut lo = ball.lower().to_rational();
    let mut hi = ball.upper().to_rational();
    let mut quotients = Vec::new();
    let mut q_prev = (BigInt::one(), BigInt::zero()); // (q_{-2}, q_{-1})
    let mut past_threshold: Option<usize> = None;
    loop {
        let a = lo.floor().to_integer();
        if a != hi.floor().to_integer() {
            return (quotients, false);
        }
        // Track the running q to decide QExceeds without re-deriving
        // convergents here.
        let q_new = &a * &q_prev.1 + &q_prev.0;
        q_prev = (q_prev.1.clone(), q_new.clone());
        quotients.push(a.clone());
        match stop {
            ExpandStop::Terms(n) => {
                if quotients.len() >= *n {
                    return (quotients, false);
                }
            }
            ExpandStop::QExceeds { threshold, lookahead } => {
                if past_threshold.is_none() && q_new > *threshold {
                    past_threshold = Some(quotients.len() - 1);
                }
                if let Some(k0) = past_threshold {
                    if quotients.len() > k0 + lookahead {
                        return (quotients, false);
                    }
                }
            }
        }
        let a = BigRational::from_integer(a);
        let rlo = &hi - &a;
        let rhi = &lo - &a;
        if rlo.is_zero() && rhi.is_zero() {
            return (quotients, true);
        }
        if rlo.is_zero() || rhi.is_zero() || rlo.is_negative() {
            // An endpoint sits on the integer boundary; nothing further can
            // be certified from this ball.
            return (quotients, false);
        }
        lo = rlo.recip();
        hi = rhi.recip();
    }
}

/// Checks the stop condition against a certified prefix and truncates to it.
fn truncate_at_stop(
    mut quotients: Vec<BigInt>,
    stop: &ExpandStop,
    terminated: bool,
) -> Option<Vec<BigInt>> {
    match stop {
        ExpandStop::Terms(n) => {
            if quotients.len() >= *n {
                quotients.truncate(*n);
                Some(quotients)
            } else if terminated {
                Some(quotients) // rational input: natural end of expansion
            } else {
                None
            }
        }
        ExpandStop::QExceeds { threshold, lookahead } => {
            let conv = convergents_of(&quotients);
            let k0 = conv.iter().position(|(_, q)| q > threshold)?;
            if quotients.len() > k0 + lookahead {
                quotients.truncate(k0 + lookahead + 1);
                Some(quotients)
            } else if terminated {
                Some(quotients)
            } else {
                None
            }
        }
    }
}

fn convergents_of(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one()); // p_{-2}, p_{-1}
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        out.push((p.clone(), q.clone()));
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// One linear-form reduction problem: 0 < |uτ − v + μ| < A·B^{−w} with
/// 0 < u ≤ M.
#[derive(Clone)]
pub struct ReductionProblem {
    pub tau: BallProvider,
    pub mu: BallProvider,
    pub a: BallReal,
    pub b: BallReal,
    pub m_cap: BigInt,
}

/// A successful application of the reduction lemma at one convergent.
///
/// The contract: no solution has u ≤ M and w ≥ `w_bound`; equivalently the
/// largest exponent a solution could still have is `w_bound − 1`.
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub convergent_index: usize,
    pub q: BigInt,
    /// Ball of ε = ‖μq‖ − M‖τq‖, certified positive.
    pub epsilon: BallReal,
    /// Certified ⌈log(Aq/ε)/log B⌉, computed from ε's lower endpoint and
    /// upper endpoints of A, q, 1/log B.
    pub w_bound: BigInt,
}

/// Shared state for running many reductions against the same τ: the
/// certified expansion and the ‖τ·q_k‖ balls per precision level.
pub struct ReductionEngine {
    tau: BallProvider,
    policy: PrecisionPolicy,
    m_cap: BigInt,
    exp: CFExpansion,
    base_index: usize,
    tau_dist: BTreeMap<(usize, u32), BallReal>,
}

impl ReductionEngine {
    pub fn new(
        tau: BallProvider,
        m_cap: BigInt,
        policy: &PrecisionPolicy,
    ) -> Result<Self, Error> {
        if m_cap < BigInt::one() {
            return Err(Error::Config("M must be a positive integer".into()));
        }
        let six_m = &m_cap * BigInt::from(6);
        let stop = ExpandStop::QExceeds { threshold: six_m.clone(), lookahead: CONVERGENT_LOOKAHEAD };
        let exp = expand(&tau, &stop, policy)?;
        let base_index = exp
            .first_q_exceeding(&six_m)
            .ok_or_else(|| Error::Unsupported("no convergent with q > 6M certified".into()))?;
        Ok(ReductionEngine {
            tau,
            policy: policy.clone(),
            m_cap,
            exp,
            base_index,
            tau_dist: BTreeMap::new(),
        })
    }

    /// Index of the first convergent with q > 6M.
    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn expansion(&self) -> &CFExpansion {
        &self.exp
    }

    pub fn m_cap(&self) -> &BigInt {
        &self.m_cap
    }

    /// ‖τ·q_k‖ at the given precision, cached across members of a family.
    fn tau_distance(&mut self, k: usize, bits: u32) -> Result<BallReal, Error> {
        if let Some(d) = self.tau_dist.get(&(k, bits)) {
            return Ok(d.clone());
        }
        let q = &self.exp.convergent(k)?.1;
        let d = (self.tau)(bits)?.mul_bigint(q).nearest_int_distance()?.1;
        self.tau_dist.insert((k, bits), d.clone());
        Ok(d)
    }

    /// Applies the lemma for one μ, scanning convergents k₀..k₀+lookahead
    /// and refining precision per convergent until ε's sign is certified.
    pub fn reduce(
        &mut self,
        mu: &BallProvider,
        a: &BallReal,
        b: &BallReal,
    ) -> Result<ReductionOutcome, Error> {
        if a.lower().signum() <= 0 {
            return Err(Error::HypothesisViolated("A must be certified positive".into()));
        }
        if b.lower().le(&Dyadic::one()) {
            return Err(Error::HypothesisViolated("B must be certified > 1".into()));
        }
        let last = self.exp.certified_through;
        let mut attempts = 0usize;
        for k in self.base_index..=last {
            attempts += 1;
            let q = self.exp.convergent(k)?.1;
            let schedule: Vec<u32> = self.policy.schedule().collect();
            for bits in schedule {
                let tau_d = match self.tau_distance(k, bits) {
                    Ok(d) => d,
                    Err(Error::AmbiguousNearestInteger) => continue,
                    Err(e) => return Err(e),
                };
                let mu_d = match mu(bits)?.mul_bigint(&q).nearest_int_distance() {
                    Ok((_, d)) => d,
                    Err(Error::AmbiguousNearestInteger) => continue,
                    Err(e) => return Err(e),
                };
                let eps = mu_d.sub(&tau_d.mul_bigint(&self.m_cap));
                if eps.lower().signum() > 0 {
                    let w_bound = w_threshold(a, &q, &eps, b, bits)?;
                    return Ok(ReductionOutcome { convergent_index: k, q, epsilon: eps, w_bound });
                }
                if eps.upper().signum() < 0 {
                    break; // certified negative at this convergent, try the next
                }
            }
        }
        Err(Error::EpsilonNeverPositive { attempts })
    }
}

/// Certified upper threshold ⌈log(Aq/ε)/log B⌉ from outward endpoints.
fn w_threshold(
    a: &BallReal,
    q: &BigInt,
    eps: &BallReal,
    b: &BallReal,
    bits: u32,
) -> Result<BigInt, Error> {
    let eps_lo = BallReal::exact_dyadic(eps.lower(), bits);
    let ratio = a.mul_bigint(q).div(&eps_lo)?;
    let w = ratio.ln()?.div(&b.ln()?)?;
    let w_bound = w.upper().ceil_bigint();
    Ok(w_bound.max(BigInt::one()))
}

/// One-shot reduction for a single μ.
pub fn dp_reduce(
    prob: &ReductionProblem,
    policy: &PrecisionPolicy,
) -> Result<ReductionOutcome, Error> {
    let mut engine = ReductionEngine::new(prob.tau.clone(), prob.m_cap.clone(), policy)?;
    engine.reduce(&prob.mu, &prob.a, &prob.b)
}

/// Aggregated result of a μ-family: per-member outcomes, the worst ε and
/// w over the family, and the members that could not be certified.
#[derive(Clone, Debug, Default)]
pub struct FamilyOutcome {
    pub per_member: Vec<(String, ReductionOutcome)>,
    pub min_epsilon: Option<Dyadic>,
    pub max_w_bound: Option<BigInt>,
    pub exceptional: Vec<String>,
}

/// Runs the lemma for every member against the engine's shared τ data.
/// Members whose ε cannot be certified positive at any scanned convergent
/// land in `exceptional`; hard errors still abort.
pub fn family_reduce(
    engine: &mut ReductionEngine,
    members: &[(String, BallProvider)],
    a: &BallReal,
    b: &BallReal,
) -> Result<FamilyOutcome, Error> {
    if members.is_empty() {
        return Err(Error::Config("empty reduction family".into()));
    }
    let mut out = FamilyOutcome::default();
    for (label, mu) in members {
        match engine.reduce(mu, a, b) {
            Ok(outcome) => {
                let eps_lo = outcome.epsilon.lower();
                out.min_epsilon = Some(match out.min_epsilon.take() {
                    Some(m) => m.min(&eps_lo),
                    None => eps_lo,
                });
                out.max_w_bound = Some(match out.max_w_bound.take() {
                    Some(m) => m.max(outcome.w_bound.clone()),
                    None => outcome.w_bound.clone(),
                });
                out.per_member.push((label.clone(), outcome));
            }
            Err(Error::EpsilonNeverPositive { .. }) | Err(Error::PrecisionExhausted { .. }) => {
                out.exceptional.push(label.clone());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
