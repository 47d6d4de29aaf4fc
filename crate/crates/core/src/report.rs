//! Check reports and seeded sampling shared by the validation routines.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::group::GroupElement;

/// Default seed for every sampled check ("NIL5" in ASCII).
pub const DEFAULT_SEED: u64 = 0x4E49_4C35;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub samples: usize,
    pub bound: i64,
    pub seed: u64,
}

impl SampleConfig {
    pub const fn new(samples: usize, bound: i64, seed: u64) -> Self {
        SampleConfig {
            samples,
            bound,
            seed,
        }
    }

    /// 200 triples with coordinates in [-3, 3].
    pub const fn group_default() -> Self {
        Self::new(200, 3, DEFAULT_SEED)
    }

    /// 500 triples with coordinates in [-3, 3].
    pub const fn cocycle_default() -> Self {
        Self::new(500, 3, DEFAULT_SEED)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn random_element<R: Rng>(rng: &mut R, m: usize, bound: i64) -> GroupElement {
    GroupElement::new((0..m).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
}

/// Random element of the kernel of the canonical homomorphism.
pub fn random_kernel_element<R: Rng>(rng: &mut R, m: usize, bound: i64) -> GroupElement {
    let mut g = random_element(rng, m, bound);
    if m > 0 {
        g.0[0] = BigInt::from(0);
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of points (or symbolic items) examined.
    pub evaluated: usize,
    /// True when the outcome is settled: an exhaustive pass or a counterexample.
    pub conclusive: bool,
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn pass(name: &str, evaluated: usize, conclusive: bool) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: true,
            evaluated,
            conclusive,
            witness: None,
        }
    }

    pub fn fail(name: &str, evaluated: usize, witness: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: false,
            evaluated,
            conclusive: true,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, outcome: CheckOutcome) {
        self.checks.push(outcome);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            let kind = if c.conclusive { "conclusive" } else { "sampled" };
            write!(f, "  [{status}] {} ({} {kind})", c.name, c.evaluated)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
