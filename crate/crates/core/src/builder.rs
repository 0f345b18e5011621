//! Clique-tree construction.
//!
//! A plan starts from the single self-regulated automaton 0. Step `t`
//! appends the `k` automata `1 + t*k ..= (t+1)*k` and joins them with the
//! attach point `attach[t]` into a clique of size `k + 1`. All rules are
//! sums modulo `k`, so the result decides k-parity; flipping every offset
//! to 1 turns it into a synchroniser.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{check_alphabet, LocalRule, NetworkSpec, Symbol};

/// How attach points are chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanShape {
    /// Attach to the last automaton of the previous clique: a chain of cliques.
    Line,
    /// Attach every clique to automaton 0.
    Star,
    /// Uniform attach points from a ChaCha8 stream seeded with the value.
    Random(u64),
    Explicit(Vec<usize>),
}

/// The shape recorded alongside a plan. Explicit plans carry no generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeTag {
    Line,
    Star,
    Random(u64),
    Explicit,
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeTag::Line => f.write_str("line"),
            ShapeTag::Star => f.write_str("star"),
            ShapeTag::Random(seed) => write!(f, "random:{seed}"),
            ShapeTag::Explicit => f.write_str("explicit"),
        }
    }
}

impl FromStr for ShapeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(ShapeTag::Line),
            "star" => Ok(ShapeTag::Star),
            "explicit" => Ok(ShapeTag::Explicit),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(ShapeTag::Random)
                .ok_or_else(|| Error::InvalidPlan(format!("unknown shape {s:?}"))),
        }
    }
}

/// A clique-tree recipe: alphabet size plus one attach point per clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTreePlan {
    k: usize,
    shape: ShapeTag,
    attach: Vec<usize>,
}

impl CliqueTreePlan {
    pub fn explicit(k: usize, attach: Vec<usize>) -> Result<Self> {
        Self::with_shape(k, ShapeTag::Explicit, attach)
    }

    pub(crate) fn with_shape(k: usize, shape: ShapeTag, attach: Vec<usize>) -> Result<Self> {
        check_alphabet(k)?;
        for (step, &a) in attach.iter().enumerate() {
            let available = 1 + step * k;
            if a >= available {
                return Err(Error::AttachOutOfRange {
                    step,
                    attach: a,
                    available,
                });
            }
        }
        Ok(CliqueTreePlan { k, shape, attach })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn shape(&self) -> ShapeTag {
        self.shape
    }

    pub fn attach_sequence(&self) -> &[usize] {
        &self.attach
    }

    /// Number of `(k+1)`-cliques.
    pub fn cliques(&self) -> usize {
        self.attach.len()
    }

    pub fn size(&self) -> usize {
        1 + self.k * self.attach.len()
    }

    /// Automata added by clique `t`.
    pub fn new_automata(&self, t: usize) -> std::ops::Range<usize> {
        1 + t * self.k..1 + (t + 1) * self.k
    }
}

/// Builds a plan with `cliques` cliques of size `k + 1`, i.e. `n = 1 + k * cliques`.
pub fn make_plan(k: usize, cliques: usize, shape: PlanShape) -> Result<CliqueTreePlan> {
    check_alphabet(k)?;
    if cliques < 1 {
        return Err(Error::InvalidPlan("a plan needs at least one clique".into()));
    }
    match shape {
        PlanShape::Line => {
            let attach = (0..cliques).map(|t| t * k).collect();
            CliqueTreePlan::with_shape(k, ShapeTag::Line, attach)
        }
        PlanShape::Star => CliqueTreePlan::with_shape(k, ShapeTag::Star, vec![0; cliques]),
        PlanShape::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let attach = (0..cliques).map(|t| rng.gen_range(0..1 + t * k)).collect();
            CliqueTreePlan::with_shape(k, ShapeTag::Random(seed), attach)
        }
        PlanShape::Explicit(attach) => {
            if attach.len() != cliques {
                return Err(Error::InvalidPlan(format!(
                    "explicit attach sequence has {} entries, expected {cliques}",
                    attach.len()
                )));
            }
            CliqueTreePlan::explicit(k, attach)
        }
    }
}

/// Parity network of a plan: every offset is 0.
pub fn build_ct(plan: &CliqueTreePlan) -> Result<NetworkSpec> {
    // Re-check: plans can be assembled from deserialised parts.
    let plan = CliqueTreePlan::with_shape(plan.k, plan.shape, plan.attach.clone())?;
    let k = plan.k;
    let mut neighbors: Vec<Vec<usize>> = Vec::with_capacity(plan.size());
    neighbors.push(vec![0]);
    for (t, &a) in plan.attach.iter().enumerate() {
        let fresh = plan.new_automata(t);
        let mut clique: Vec<usize> = Vec::with_capacity(k + 1);
        clique.push(a);
        clique.extend(fresh.clone());
        for _ in fresh.clone() {
            neighbors.push(clique.clone());
        }
        neighbors[a].extend(fresh);
    }
    let rules = neighbors
        .into_iter()
        .map(|nb| LocalRule::new(nb, 0))
        .collect();
    Ok(NetworkSpec::from_parts(k, rules, Some(plan)))
}

/// Adds 1 to every local function; requires a parity network.
pub fn to_synchroniser(network: &NetworkSpec) -> Result<NetworkSpec> {
    if let Some(i) = network.offsets().position(|o| o != 0) {
        return Err(Error::NotParity(i));
    }
    let rules = network.rules().iter().map(|r| r.with_offset(1)).collect();
    Ok(NetworkSpec::from_parts(
        network.k(),
        rules,
        network.plan().cloned(),
    ))
}

/// Reduces the alphabet from `k` to a divisor `target_k`. Since
/// `(s mod mk) mod k = s mod k`, swapping the modulus is exactly the
/// composition of the network with the symbol projection `v -> v mod k`.
pub fn project(network: &NetworkSpec, target_k: usize) -> Result<NetworkSpec> {
    check_alphabet(target_k)?;
    if network.k() % target_k != 0 {
        return Err(Error::Projection {
            k: network.k(),
            target: target_k,
        });
    }
    let rules = network
        .rules()
        .iter()
        .map(|r| r.with_offset(r.offset() % target_k as Symbol))
        .collect();
    Ok(NetworkSpec::from_parts(
        target_k,
        rules,
        network.plan().cloned(),
    ))
}

/// Appends an automaton computing `x_source + 1`, which gives synchronisers
/// of size `n + 1`. The new automaton influences nothing, so the network is
/// no longer strongly connected, and the plan is dropped.
pub fn extend_even(network: &NetworkSpec, source: usize) -> Result<NetworkSpec> {
    if let Some(i) = network.offsets().position(|o| o != 1) {
        return Err(Error::NotSynchroniser(i));
    }
    if source >= network.n() {
        return Err(Error::IndexOutOfRange {
            index: source,
            n: network.n(),
        });
    }
    let mut rules = network.rules().to_vec();
    rules.push(LocalRule::new(vec![source], 1));
    NetworkSpec::new(network.k(), rules)
}
