//! Exhaustive and sampled checks of parity, synchronisation, the radius
//! claim and `+1` invariance.
//!
//! Exhaustive runs split the `k^n` index range into chunks handled by the
//! rayon pool; chunk results merge associatively (sum of counts, max
//! transient, lowest failing index), so reports do not depend on the
//! number of workers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::digraph::{diameter, distance_matrix, semantic_digraph};
use crate::engine::{find_limit, reference_k_parity, Classification};
use crate::error::{Error, Result};
use crate::network::{Configuration, Dynamics, NetworkSpec, Symbol};

/// Default cap on `k^n` for exhaustive runs.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_EXHAUSTIVE_BUDGET`].
pub const BUDGET_ENV: &str = "CLIQUENET_BUDGET";

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    DecidesKParity,
    Synchronises,
    RadiusClaim,
    PlusOneInvariance,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::DecidesKParity => "parity",
            Property::Synchronises => "sync",
            Property::RadiusClaim => "radius",
            Property::PlusOneInvariance => "plus1",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity" => Ok(Property::DecidesKParity),
            "sync" => Ok(Property::Synchronises),
            "radius" => Ok(Property::RadiusClaim),
            "plus1" => Ok(Property::PlusOneInvariance),
            _ => Err(Error::Parse(format!("unknown property {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sampled { count, seed } => write!(f, "sample:{count}:{seed}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(Mode::Exhaustive);
        }
        let bad = || Error::Parse(format!("mode must be exhaustive or sample:<n>:<seed>, got {s:?}"));
        let rest = s.strip_prefix("sample:").ok_or_else(bad)?;
        let (count, seed) = rest.split_once(':').ok_or_else(bad)?;
        Ok(Mode::Sampled {
            count: count.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: DEFAULT_EXHAUSTIVE_BUDGET,
        }
    }
}

impl VerifyOptions {
    /// Reads the budget from `CLIQUENET_BUDGET`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|budget| VerifyOptions { budget })
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub network_id: String,
    pub property: Property,
    pub mode: Mode,
    pub pass: bool,
    /// Minimised failing configuration; present iff `pass` is false.
    pub counterexample: Option<Configuration>,
    /// Radius used with the counterexample (radius claim only).
    pub counterexample_radius: Option<usize>,
    /// Largest transient seen; only parity and sync runs measure one.
    pub max_transient_observed: usize,
    pub configs_checked: u64,
    pub k: usize,
}

impl VerificationReport {
    /// Stable `key: value` lines, one field per line.
    pub fn to_text(&self) -> String {
        let counterexample = match &self.counterexample {
            Some(c) => match self.counterexample_radius {
                Some(r) => format!("{} r={r}", c.format(self.k)),
                None => c.format(self.k),
            },
            None => "none".to_string(),
        };
        format!(
            "network: {}\nproperty: {}\nmode: {}\nconfigs_checked: {}\nmax_transient_observed: {}\npass: {}\ncounterexample: {}\n",
            self.network_id,
            self.property,
            self.mode,
            self.configs_checked,
            self.max_transient_observed,
            self.pass,
            counterexample
        )
    }
}

/// Short stable label for reports.
pub fn network_id(network: &NetworkSpec) -> String {
    let offsets = if network.all_offsets(0) {
        "parity".to_string()
    } else if network.all_offsets(1) {
        "sync".to_string()
    } else {
        "mixed".to_string()
    };
    match network.plan() {
        Some(p) => format!(
            "k={} n={} {} plan(k={}, {}, cliques={})",
            network.k(),
            network.n(),
            offsets,
            p.k(),
            p.shape(),
            p.cliques()
        ),
        None => format!("k={} n={} {}", network.k(), network.n(), offsets),
    }
}

/// Per-configuration outcome: pass flag and observed transient.
type Outcome = (bool, usize);

struct Checker<'a> {
    network: &'a NetworkSpec,
    property: Property,
    diameter: usize,
    /// Distance matrix, only for the radius claim.
    dist: Vec<Vec<Option<usize>>>,
}

impl<'a> Checker<'a> {
    fn new(network: &'a NetworkSpec, property: Property) -> Result<Self> {
        match property {
            Property::DecidesKParity | Property::RadiusClaim => {
                if let Some(i) = network.offsets().position(|o| o != 0) {
                    return Err(Error::NotParity(i));
                }
            }
            Property::Synchronises => {
                if let Some(i) = network.offsets().position(|o| o != 1) {
                    return Err(Error::NotSynchroniser(i));
                }
            }
            Property::PlusOneInvariance => {}
        }
        let g = semantic_digraph(network);
        let diameter = match property {
            Property::PlusOneInvariance => 0,
            _ => diameter(&g)?,
        };
        let dist = if property == Property::RadiusClaim {
            distance_matrix(&g)
        } else {
            Vec::new()
        };
        Ok(Checker {
            network,
            property,
            diameter,
            dist,
        })
    }

    /// `radius` selects a single radius for the radius claim; `None` checks
    /// all radii up to the diameter.
    fn check(&self, x: &Configuration, radius: Option<usize>) -> Outcome {
        let k = self.network.k();
        match self.property {
            Property::DecidesKParity => {
                match find_limit(self.network, x, self.diameter + k + 1) {
                    Ok(r) => (
                        r.classification
                            == Classification::UniformFixedPoint(reference_k_parity(x, k))
                            && r.transient_length <= self.diameter,
                        r.transient_length,
                    ),
                    Err(_) => (false, 0),
                }
            }
            Property::Synchronises => match find_limit(self.network, x, self.diameter + k + 1) {
                Ok(r) => (
                    r.is_increasing_uniform_cycle(k) && r.transient_length <= self.diameter,
                    r.transient_length,
                ),
                Err(_) => (false, 0),
            },
            Property::RadiusClaim => (self.check_radius(x, radius), 0),
            Property::PlusOneInvariance => {
                let lhs = self.network.step(&x.plus_one(k));
                let rhs = self.network.step(x).map(|y| y.plus_one(k));
                (matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b), 0)
            }
        }
    }

    fn check_radius(&self, x: &Configuration, radius: Option<usize>) -> bool {
        let k = self.network.k();
        let n = self.network.n();
        let last = radius.unwrap_or(self.diameter);
        let mut state = x.symbols().to_vec();
        let mut next = vec![0; n];
        for r in 0..=last {
            if radius.is_none() || radius == Some(r) {
                for i in 0..n {
                    let expected: u64 = (0..n)
                        .filter(|&j| self.dist[i][j].is_some_and(|d| d <= r))
                        .map(|j| x.symbols()[j] as u64)
                        .sum();
                    if (expected % k as u64) as Symbol != state[i] {
                        return false;
                    }
                }
            }
            if r < last {
                self.network.step_into(&state, &mut next);
                std::mem::swap(&mut state, &mut next);
            }
        }
        true
    }

    /// Greedily lowers symbols while the configuration keeps failing.
    fn minimise(&self, mut x: Configuration, radius: Option<usize>) -> Configuration {
        loop {
            let mut changed = false;
            for i in 0..x.len() {
                while x.symbols()[i] > 0 {
                    let mut y = x.clone();
                    y.symbols_mut()[i] -= 1;
                    if self.check(&y, radius).0 {
                        break;
                    }
                    x = y;
                    changed = true;
                }
            }
            if !changed {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Partial {
    checked: u64,
    max_transient: usize,
    /// Lowest failing position in the enumeration order.
    failure: Option<(u64, Configuration, Option<usize>)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.checked += other.checked;
        self.max_transient = self.max_transient.max(other.max_transient);
        self.failure = match (self.failure, other.failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Runs `property` over the configurations selected by `mode`.
pub fn verify(
    network: &NetworkSpec,
    property: Property,
    mode: Mode,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let checker = Checker::new(network, property)?;
    let n = network.n();
    let k = network.k();
    let partial = match mode {
        Mode::Exhaustive => {
            let total = (k as u128)
                .checked_pow(n as u32)
                .filter(|&t| t <= options.budget)
                .ok_or(Error::BudgetExceeded {
                    required: (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
                    budget: options.budget,
                })? as u64;
            let chunks = total.div_ceil(CHUNK);
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut p = Partial::default();
                    for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                        let x = Configuration::from_index(idx, n, k);
                        let (ok, t) = checker.check(&x, None);
                        p.checked += 1;
                        p.max_transient = p.max_transient.max(t);
                        if !ok && p.failure.is_none() {
                            p.failure = Some((idx, x, None));
                        }
                    }
                    p
                })
                .reduce(Partial::default, Partial::merge)
        }
        Mode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<(Configuration, Option<usize>)> = (0..count)
                .map(|_| {
                    let x = random_configuration(&mut rng, n, k);
                    let r = (property == Property::RadiusClaim)
                        .then(|| rng.gen_range(0..=checker.diameter));
                    (x, r)
                })
                .collect();
            samples
                .into_par_iter()
                .enumerate()
                .map(|(i, (x, r))| {
                    let (ok, t) = checker.check(&x, r);
                    Partial {
                        checked: 1,
                        max_transient: t,
                        failure: (!ok).then_some((i as u64, x, r)),
                    }
                })
                .reduce(Partial::default, Partial::merge)
        }
    };
    let (counterexample, counterexample_radius) = match partial.failure {
        Some((_, x, r)) => (Some(checker.minimise(x, r)), r),
        None => (None, None),
    };
    Ok(VerificationReport {
        network_id: network_id(network),
        property,
        mode,
        pass: counterexample.is_none(),
        counterexample,
        counterexample_radius,
        max_transient_observed: partial.max_transient,
        configs_checked: partial.checked,
        k,
    })
}

/// Re-runs a single configuration through the property check.
pub fn recheck(
    network: &NetworkSpec,
    property: Property,
    x: &Configuration,
    radius: Option<usize>,
) -> Result<bool> {
    network.check(x)?;
    Ok(Checker::new(network, property)?.check(x, radius).0)
}

/// Symbols drawn uniformly with `gen_range(0..k)` from the given stream.
pub fn random_configuration<R: Rng>(rng: &mut R, n: usize, k: usize) -> Configuration {
    Configuration::new((0..n).map(|_| rng.gen_range(0..k) as Symbol).collect())
}

pub fn verify_decides_k_parity(
    network: &NetworkSpec,
    mode: Mode,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    verify(network, Property::DecidesKParity, mode, options)
}

pub fn verify_synchronises(
    network: &NetworkSpec,
    mode: Mode,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    verify(network, Property::Synchronises, mode, options)
}

/// Samples `(x, r)` with `r <= diameter` and checks that after `r` steps
/// every automaton holds the sum mod k of `x` over its radius-`r` ball.
pub fn verify_radius_claim(
    network: &NetworkSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify(
        network,
        Property::RadiusClaim,
        Mode::Sampled {
            count: samples,
            seed,
        },
        &VerifyOptions::default(),
    )
}

pub fn verify_plus_one_invariance(
    network: &NetworkSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify(
        network,
        Property::PlusOneInvariance,
        Mode::Sampled {
            count: samples,
            seed,
        },
        &VerifyOptions::default(),
    )
}
