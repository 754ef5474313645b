//! Exhaustive census of repeated values of P_n − b^m.
//!
//! The Diophantine question driving this crate asks which integers c admit
//! at least two representations c = P_n − b^m with exponents in a box.
//! Sequence terms are exact integers, so the census is pure integer
//! arithmetic: enumerate the box, bucket by value, keep the buckets with
//! enough members. No rounding enters and the output is complete for the
//! box, not a numerical heuristic.
//!
//! Two details need care. First, small Padovan terms repeat (P_1 = P_2 =
//! P_3 = 1 and P_4 = P_5 = 2), which would make every integer of the form
//! 1 − b^m "multi-represented" by the trivial family P_1 − b^m = P_2 − b^m.
//! A skip list removes the duplicate indices so each value is counted once,
//! at its canonical index. Second, there are two index conventions in
//! circulation for the same census, differing in whether the value 1 and
//! the exponent m = 0 participate; both are first-class here because they
//! genuinely give different answers.
//!
//! Completeness beyond the box is an analytic statement (the certified
//! growth bounds convert "a second representation exists" into an upper
//! bound on m; see the pipeline module), so this module deliberately stays
//! simple: enumerate, bucket, filter, diff.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::sequence::SequenceOracle;
use crate::Error;

/// Exponent pair (n, m) recording one representation c = P_n − b^m.
pub type Representation = (u32, u32);

/// Map from a value c to every representation of it found in a box,
/// each list sorted by ascending n.
pub type SolutionTable = BTreeMap<BigInt, Vec<Representation>>;

/// Rectangular exponent range with an index skip list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub n_min: u32,
    pub n_max: u32,
    pub m_min: u32,
    pub m_max: u32,
    /// Indices excluded so that repeated sequence values are counted at a
    /// single canonical index.
    pub skip_n: Vec<u32>,
}

impl SearchBox {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_min > self.n_max {
            return Err(Error::OutOfRange(format!(
                "empty index range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.m_min > self.m_max {
            return Err(Error::OutOfRange(format!(
                "empty exponent range {}..={}",
                self.m_min, self.m_max
            )));
        }
        Ok(())
    }

    fn keeps(&self, n: u32) -> bool {
        n >= self.n_min && n <= self.n_max && !self.skip_n.contains(&n)
    }
}

/// Index conventions for the Padovan census.
///
/// `Stated` is the inclusive normalization: n ≥ 3 with the duplicate index
/// n = 4 removed (1 is counted at n = 3, 2 at n = 5) and m ≥ 0. `Theorem`
/// starts at the first term that is at least 2 and requires m ≥ 1; it is
/// the convention under which the sporadic list has exactly five members.
/// The two give provably different answers, so neither is a default that
/// silently shadows the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Stated,
    Theorem,
}

impl Convention {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "stated" => Ok(Convention::Stated),
            "theorem" => Ok(Convention::Theorem),
            other => Err(Error::Config(format!(
                "unknown convention '{other}' (expected 'stated' or 'theorem')"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Stated => "stated",
            Convention::Theorem => "theorem",
        }
    }

    /// The search box this convention induces for given caps.
    pub fn search_box(self, n_max: u32, m_max: u32) -> SearchBox {
        match self {
            Convention::Stated => SearchBox {
                n_min: 3,
                n_max,
                m_min: 0,
                m_max,
                skip_n: vec![4],
            },
            Convention::Theorem => SearchBox {
                n_min: 5,
                n_max,
                m_min: 1,
                m_max,
                skip_n: vec![],
            },
        }
    }
}

/// Enumerates every kept pair in the box and buckets c = Q_n − base^m by
/// value. Exact integer arithmetic throughout.
pub fn enumerate(
    oracle: &SequenceOracle,
    base: &BigInt,
    bx: &SearchBox,
) -> Result<SolutionTable, Error> {
    bx.validate()?;
    if *base < BigInt::from(2) {
        return Err(Error::Config(format!("base must be at least 2, got {base}")));
    }

    let mut powers = Vec::with_capacity((bx.m_max - bx.m_min + 1) as usize);
    let mut p = base.pow(bx.m_min);
    for _ in bx.m_min..bx.m_max {
        powers.push(p.clone());
        p *= base;
    }
    powers.push(p);

    let mut table: SolutionTable = BTreeMap::new();
    for n in bx.n_min..=bx.n_max {
        if !bx.keeps(n) {
            continue;
        }
        let term = oracle.term(n as usize);
        for (i, power) in powers.iter().enumerate() {
            let m = bx.m_min + i as u32;
            let c = &term - power;
            table.entry(c).or_default().push((n, m));
        }
    }
    // The outer loop ascends in n, so each bucket is already sorted by n;
    // distinct representations of one value never share an m (the kept
    // subsequence is injective), so this is a total order.
    Ok(table)
}

/// Keeps only the values with at least `threshold` representations.
pub fn multi_represented(table: SolutionTable, threshold: usize) -> SolutionTable {
    table
        .into_iter()
        .filter(|(_, reps)| reps.len() >= threshold)
        .collect()
}

/// Exact recheck of a single claimed representation.
pub fn verify_representation(
    oracle: &SequenceOracle,
    base: &BigInt,
    n: u32,
    m: u32,
    c: &BigInt,
) -> bool {
    oracle.term(n as usize) - base.pow(m) == *c
}

/// Outcome of comparing a computed table against a claimed one.
///
/// `extras` are values the search found that the claim omits, `missing`
/// the reverse, and `mismatched` values present on both sides whose
/// representation lists disagree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimDiff {
    pub extras: Vec<BigInt>,
    pub missing: Vec<BigInt>,
    pub mismatched: Vec<BigInt>,
}

impl ClaimDiff {
    pub fn is_empty(&self) -> bool {
        self.extras.is_empty() && self.missing.is_empty() && self.mismatched.is_empty()
    }
}

pub fn diff_against_claims(found: &SolutionTable, claims: &SolutionTable) -> ClaimDiff {
    let mut diff = ClaimDiff::default();
    for (c, reps) in found {
        match claims.get(c) {
            None => diff.extras.push(c.clone()),
            Some(claimed) if claimed != reps => diff.mismatched.push(c.clone()),
            Some(_) => {}
        }
    }
    for c in claims.keys() {
        if !found.contains_key(c) {
            diff.missing.push(c.clone());
        }
    }
    diff
}
