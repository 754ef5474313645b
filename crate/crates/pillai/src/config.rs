//! Flat key=value configuration for the pipeline and the CLI.
//!
//! A configuration pins everything the certificate depends on: the
//! recurrence, the power base, the exhaustive-search box, the precision
//! policy, and the derivation mode. The canonical serialization sorts the
//! keys, so equal configurations hash to the same digest and the digest
//! recorded in a certificate identifies the run that produced it.

use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::rigor::PrecisionPolicy;
use crate::search::Convention;
use crate::sequence::RecurrenceSpec;
use crate::Error;

/// Which derivation of the linking inequalities the pipeline runs.
///
/// `Faithful` mirrors the reference chain: the difference of sequence terms
/// is lowered through the recurrence identity T_n − T_{n−3} = T_{n−2}
/// (which needs n − n₁ ≥ 3 as a recorded hypothesis) and the reduction
/// rounds run the reference A-constants wherever those dominate the
/// certified numerators. `Strict` replaces the identity with the
/// unconditional certified gap link and derives every A-constant from the
/// certified numerator itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Faithful,
    Strict,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode, Error> {
        match s {
            "faithful" => Ok(Mode::Faithful),
            "strict" => Ok(Mode::Strict),
            other => Err(Error::Config(format!(
                "unknown mode {other:?}; expected \"faithful\" or \"strict\""
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Faithful => "faithful",
            Mode::Strict => "strict",
        }
    }
}

/// Everything a pipeline run depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppConfig {
    /// Order of the linear recurrence (2 or 3).
    pub order: usize,
    /// Coefficients c₀..c_{order−1} in T_{k+order} = Σ cᵢ·T_{k+i}.
    pub coefficients: Vec<BigInt>,
    /// Initial terms T₀..T_{order−1}.
    pub initial: Vec<BigInt>,
    /// The power base b in c = T_n − b^m.
    pub base: BigInt,
    /// Exhaustive-search ceiling for the sequence index.
    pub nmax: u32,
    /// Exhaustive-search ceiling for the exponent.
    pub mmax: u32,
    /// Index ranges the search keeps.
    pub convention: Convention,
    /// Starting precision of the refinement schedule, in bits.
    pub initial_bits: u32,
    /// Precision ceiling of the refinement schedule, in bits.
    pub max_bits: u32,
    /// Derivation mode for the bounding chain.
    pub mode: Mode,
}

impl AppConfig {
    /// The configuration the shipped certificate is generated from:
    /// the Padovan sequence against powers of 3, searched to n ≤ 500,
    /// m ≤ 200.
    pub fn canonical() -> AppConfig {
        AppConfig {
            order: 3,
            coefficients: vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)],
            initial: vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)],
            base: BigInt::from(3),
            nmax: 500,
            mmax: 200,
            convention: Convention::Theorem,
            initial_bits: 192,
            max_bits: 1 << 16,
            mode: Mode::Faithful,
        }
    }

    /// Parses the flat key=value format. Unknown and duplicated keys are
    /// rejected; omitted keys keep their canonical defaults. `#` starts a
    /// comment, blank lines are skipped.
    pub fn parse_str(text: &str) -> Result<AppConfig, Error> {
        let mut cfg = AppConfig::canonical();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got {line:?}", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(Error::Config(format!("line {}: empty value for {key}", lineno + 1)));
            }
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config(format!("duplicate key {key}")));
            }
            seen.push(key.to_string());
            cfg.apply(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let bad = |what: &str| Error::Config(format!("invalid {key}: {what}"));
        match key {
            "recurrence.order" => {
                self.order = value.parse::<usize>().map_err(|e| bad(&e.to_string()))?;
            }
            "recurrence.coefficients" => {
                self.coefficients = parse_int_list(value).map_err(|e| bad(&e))?;
            }
            "recurrence.initial" => {
                self.initial = parse_int_list(value).map_err(|e| bad(&e))?;
            }
            "base" => {
                self.base = BigInt::from_str(value).map_err(|e| bad(&e.to_string()))?;
            }
            "search.nmax" => {
                self.nmax = value.parse::<u32>().map_err(|e| bad(&e.to_string()))?;
            }
            "search.mmax" => {
                self.mmax = value.parse::<u32>().map_err(|e| bad(&e.to_string()))?;
            }
            "search.convention" => {
                self.convention = Convention::parse(value)?;
            }
            "precision.initial_bits" => {
                self.initial_bits = value.parse::<u32>().map_err(|e| bad(&e.to_string()))?;
            }
            "precision.max_bits" => {
                self.max_bits = value.parse::<u32>().map_err(|e| bad(&e.to_string()))?;
            }
            "mode" => {
                self.mode = Mode::parse(value)?;
            }
            other => {
                return Err(Error::Config(format!("unknown configuration key {other:?}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(2..=3).contains(&self.order) {
            return Err(Error::Config(format!(
                "recurrence.order must be 2 or 3, got {}",
                self.order
            )));
        }
        if self.coefficients.len() != self.order {
            return Err(Error::Config(format!(
                "recurrence.coefficients must list {} values, got {}",
                self.order,
                self.coefficients.len()
            )));
        }
        if self.initial.len() != self.order {
            return Err(Error::Config(format!(
                "recurrence.initial must list {} values, got {}",
                self.order,
                self.initial.len()
            )));
        }
        if self.base < BigInt::from(2) {
            return Err(Error::Config(format!("base must be at least 2, got {}", self.base)));
        }
        if self.nmax < 30 {
            return Err(Error::Config(format!("search.nmax must be at least 30, got {}", self.nmax)));
        }
        if self.mmax < 2 {
            return Err(Error::Config(format!("search.mmax must be at least 2, got {}", self.mmax)));
        }
        if self.initial_bits < 64 {
            return Err(Error::Config(format!(
                "precision.initial_bits must be at least 64, got {}",
                self.initial_bits
            )));
        }
        if self.max_bits < self.initial_bits {
            return Err(Error::Config(format!(
                "precision.max_bits ({}) is below precision.initial_bits ({})",
                self.max_bits, self.initial_bits
            )));
        }
        Ok(())
    }

    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy {
            initial_bits: self.initial_bits,
            growth_factor: 2,
            max_bits: self.max_bits,
        }
    }

    pub fn recurrence(&self) -> Result<RecurrenceSpec, Error> {
        RecurrenceSpec::new(self.coefficients.clone(), self.initial.clone())
    }

    /// The sorted key=value rendering the digest is taken over.
    pub fn to_canonical_string(&self) -> String {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "base={}", self.base);
        let _ = writeln!(s, "mode={}", self.mode.name());
        let _ = writeln!(s, "precision.initial_bits={}", self.initial_bits);
        let _ = writeln!(s, "precision.max_bits={}", self.max_bits);
        let _ = writeln!(s, "recurrence.coefficients={}", join(&self.coefficients));
        let _ = writeln!(s, "recurrence.initial={}", join(&self.initial));
        let _ = writeln!(s, "recurrence.order={}", self.order);
        let _ = writeln!(s, "search.convention={}", self.convention.name());
        let _ = writeln!(s, "search.mmax={}", self.mmax);
        let _ = writeln!(s, "search.nmax={}", self.nmax);
        s
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_canonical_string().as_bytes());
        let out = h.finalize();
        let mut s = String::with_capacity(64);
        for b in out {
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

fn parse_int_list(value: &str) -> Result<Vec<BigInt>, String> {
    value
        .split(',')
        .map(|part| BigInt::from_str(part.trim()).map_err(|e| e.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trips_through_parse() {
        let cfg = AppConfig::canonical();
        let parsed = AppConfig::parse_str(&cfg.to_canonical_string()).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn comments_blanks_and_overrides() {
        let text = "\
# pipeline settings
search.nmax = 120   # tighter box

mode = strict
";
        let cfg = AppConfig::parse_str(text).unwrap();
        assert_eq!(cfg.nmax, 120);
        assert_eq!(cfg.mode, Mode::Strict);
        // Untouched keys keep canonical defaults.
        assert_eq!(cfg.mmax, 200);
        assert_eq!(cfg.base, BigInt::from(3));
    }

    #[test]
    fn unknown_key_rejected() {
        let err = AppConfig::parse_str("search.depth=3").unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("search.depth")));
    }

    #[test]
    fn duplicate_key_rejected() {
        let err = AppConfig::parse_str("base=3\nbase=5").unwrap_err();
        assert!(matches!(err, Error::Config(ref m) if m.contains("duplicate")));
    }

    #[test]
    fn arity_mismatch_rejected() {
        let err = AppConfig::parse_str("recurrence.coefficients=1,1").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn digest_is_stable_and_key_order_free() {
        let a = AppConfig::parse_str("base=3\nsearch.nmax=500").unwrap();
        let b = AppConfig::parse_str("search.nmax=500\nbase=3").unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
        let c = AppConfig::parse_str("search.nmax=501").unwrap();
        assert_ne!(a.digest(), c.digest());
    }
}
