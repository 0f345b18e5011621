//! Parallel dynamics: trajectories, limit cycles and convergence times.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::network::{k_parity, Configuration, Dynamics, Symbol};

/// Default cap on `states * n` cells kept by [`simulate`] (256 MiB of symbols).
pub const DEFAULT_STATE_BUDGET: usize = 1 << 28;

/// A recorded orbit `x, F(x), F^2(x), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub k: usize,
    pub states: Vec<Configuration>,
    /// Set when the memory budget cut the run short.
    pub truncated: bool,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.states.first().map_or(0, Configuration::len)
    }

    /// Number of steps taken, i.e. `states.len() - 1`.
    pub fn steps(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn last(&self) -> &Configuration {
        self.states.last().expect("trajectory always holds its initial state")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    UniformFixedPoint(Symbol),
    /// Every configuration of the cycle is uniform and the cycle has length > 1.
    UniformCycle,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceResult {
    /// Smallest `t` with `F^t(x)` on the limit cycle.
    pub transient_length: usize,
    pub cycle_length: usize,
    /// Cycle in visit order, starting from the first configuration reached on it.
    pub cycle: Vec<Configuration>,
    pub classification: Classification,
}

impl ConvergenceResult {
    /// True when the cycle is `s, s+1, .., s+k-1` over uniform configurations.
    pub fn is_increasing_uniform_cycle(&self, k: usize) -> bool {
        if self.cycle_length != k {
            return false;
        }
        let symbols: Option<Vec<Symbol>> = self.cycle.iter().map(|c| c.uniform_symbol()).collect();
        match symbols {
            Some(s) => (0..k).all(|i| s[(i + 1) % k] as usize == (s[i] as usize + 1) % k),
            None => false,
        }
    }
}

pub fn simulate<D: Dynamics + ?Sized>(
    network: &D,
    x0: &Configuration,
    steps: usize,
) -> Result<Trajectory> {
    simulate_with_budget(network, x0, steps, DEFAULT_STATE_BUDGET)
}

/// Runs `steps` parallel updates, keeping every state. Stops early with
/// `truncated = true` once `states * n` would exceed `budget` cells.
pub fn simulate_with_budget<D: Dynamics + ?Sized>(
    network: &D,
    x0: &Configuration,
    steps: usize,
    budget: usize,
) -> Result<Trajectory> {
    network.check(x0)?;
    let n = network.size().max(1);
    let max_states = (budget / n).max(1);
    let wanted = steps.saturating_add(1);
    let kept = wanted.min(max_states);
    let mut states = Vec::with_capacity(kept);
    states.push(x0.clone());
    let mut buf = vec![0; network.size()];
    while states.len() < kept {
        network.step_into(states.last().unwrap().symbols(), &mut buf);
        states.push(Configuration::new(buf.clone()));
    }
    Ok(Trajectory {
        k: network.alphabet(),
        states,
        truncated: kept < wanted,
    })
}

/// Iterates from `x0` until a configuration repeats. Every visited
/// configuration is stored in a hash map keyed by the full configuration,
/// so lookups never confuse distinct states.
pub fn find_limit<D: Dynamics + ?Sized>(
    network: &D,
    x0: &Configuration,
    max_steps: usize,
) -> Result<ConvergenceResult> {
    network.check(x0)?;
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    let mut history: Vec<Configuration> = Vec::new();
    let mut current = x0.clone();
    let mut buf = vec![0; network.size()];
    for t in 0..=max_steps {
        if let Some(&first) = seen.get(&current) {
            let cycle = history.split_off(first);
            return Ok(summarise(first, cycle));
        }
        network.step_into(current.symbols(), &mut buf);
        let next = Configuration::new(buf.clone());
        seen.insert(current.clone(), t);
        history.push(std::mem::replace(&mut current, next));
    }
    Err(Error::Undetermined(max_steps))
}

fn summarise(transient_length: usize, cycle: Vec<Configuration>) -> ConvergenceResult {
    let cycle_length = cycle.len();
    let classification = match cycle[0].uniform_symbol() {
        Some(s) if cycle_length == 1 => Classification::UniformFixedPoint(s),
        _ if cycle.iter().all(|c| c.uniform_symbol().is_some()) => Classification::UniformCycle,
        _ => Classification::Other,
    };
    ConvergenceResult {
        transient_length,
        cycle_length,
        cycle,
        classification,
    }
}

/// The expected answer to k-parity: sum of all symbols mod `k`.
pub fn reference_k_parity(x: &Configuration, k: usize) -> Symbol {
    k_parity(x.symbols(), k)
}

/// Steps needed to reach the limit cycle. `bound` should be at least the
/// diameter; the search also allows one extra lap of an alphabet-sized cycle.
pub fn convergence_time<D: Dynamics + ?Sized>(
    network: &D,
    x0: &Configuration,
    bound: usize,
) -> Result<usize> {
    let limit = bound.saturating_add(network.alphabet() + 1);
    let res = find_limit(network, x0, limit).map_err(|e| match e {
        Error::Undetermined(_) => Error::NotConverged(bound),
        other => other,
    })?;
    if res.transient_length > bound {
        return Err(Error::NotConverged(bound));
    }
    Ok(res.transient_length)
}
