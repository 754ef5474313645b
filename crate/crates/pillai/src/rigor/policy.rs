//! Adaptive precision: retry a computation at geometrically increasing
//! precision until it becomes decidable or the budget is exhausted.

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub growth_factor: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: 192, growth_factor: 2, max_bits: 1 << 16 }
    }
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, max_bits: u32) -> Result<Self, Error> {
        let p = PrecisionPolicy { initial_bits, growth_factor: 2, max_bits };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.initial_bits == 0 || self.max_bits < self.initial_bits || self.growth_factor < 2 {
            return Err(Error::Config(format!(
                "invalid precision policy: initial {} bits, growth {}, max {} bits",
                self.initial_bits, self.growth_factor, self.max_bits
            )));
        }
        Ok(())
    }

    /// The increasing precision schedule: initial, initial·g, …, capped at max.
    pub fn schedule(&self) -> impl Iterator<Item = u32> + '_ {
        let mut bits = Some(self.initial_bits);
        std::iter::from_fn(move || {
            let cur = bits?;
            bits = if cur >= self.max_bits {
                None
            } else {
                Some(cur.saturating_mul(self.growth_factor).min(self.max_bits))
            };
            Some(cur)
        })
    }
}

/// One refinement step: either the computation decided its answer at this
/// precision, or it asks to be re-run at a higher one.
pub enum Refined<T> {
    Decided(T),
    Undecided,
}

/// Re-run `step` along the policy's precision schedule until it decides.
/// `what` labels the computation in the PrecisionExhausted error.
pub fn with_refinement<T>(
    policy: &PrecisionPolicy,
    what: &str,
    mut step: impl FnMut(u32) -> Result<Refined<T>, Error>,
) -> Result<T, Error> {
    let mut last = policy.initial_bits;
    for bits in policy.schedule() {
        last = bits;
        match step(bits)? {
            Refined::Decided(t) => return Ok(t),
            Refined::Undecided => {}
        }
    }
    Err(Error::PrecisionExhausted { bits: last, what: what.to_string() })
}
