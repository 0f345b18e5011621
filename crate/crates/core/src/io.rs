//! On-disk formats.
//!
//! Network files are compact JSON with keys in a fixed order:
//!
//! ```text
//! {"k":2,"n":3,"offsets":[0,0,0],"neighbors":[[0,1,2],[0,1,2],[0,1,2]],"plan":{"k":2,"shape":"line","attach":[0]}}
//! ```
//!
//! `plan` is optional. When present, rebuilding it must reproduce the
//! neighbour lists exactly, otherwise the file is rejected.
//!
//! Trajectory files are a `k n steps` header followed by one configuration
//! per line, in the same text form as [`Configuration::parse`].

use serde::{Deserialize, Serialize};

use crate::builder::{build_ct, make_plan, CliqueTreePlan, PlanShape, ShapeTag};
use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::network::{Configuration, LocalRule, NetworkSpec, Symbol};

#[derive(Serialize, Deserialize)]
struct PlanFile {
    k: usize,
    shape: String,
    attach: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    k: usize,
    n: usize,
    offsets: Vec<Symbol>,
    neighbors: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plan: Option<PlanFile>,
}

pub fn write_network(network: &NetworkSpec) -> String {
    let file = NetworkFile {
        k: network.k(),
        n: network.n(),
        offsets: network.offsets().collect(),
        neighbors: network
            .rules()
            .iter()
            .map(|r| r.neighbors().to_vec())
            .collect(),
        plan: network.plan().map(|p| PlanFile {
            k: p.k(),
            shape: p.shape().to_string(),
            attach: p.attach_sequence().to_vec(),
        }),
    };
    serde_json::to_string(&file).expect("network serialisation cannot fail")
}

pub fn read_network(text: &str) -> Result<NetworkSpec> {
    let file: NetworkFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("network file: {e}")))?;
    if file.offsets.len() != file.n || file.neighbors.len() != file.n {
        return Err(Error::Format(format!(
            "n = {} but {} offsets and {} neighbour lists",
            file.n,
            file.offsets.len(),
            file.neighbors.len()
        )));
    }
    let rules: Vec<LocalRule> = file
        .neighbors
        .iter()
        .zip(&file.offsets)
        .map(|(nb, &o)| LocalRule::new(nb.clone(), o))
        .collect();
    for (i, (rule, raw)) in rules.iter().zip(&file.neighbors).enumerate() {
        if rule.neighbors() != raw.as_slice() {
            return Err(Error::Format(format!(
                "neighbours of automaton {i} are not sorted and distinct"
            )));
        }
    }
    let network = NetworkSpec::new(file.k, rules)?;
    let plan = match file.plan {
        Some(p) => Some(read_plan(p, &network)?),
        None => None,
    };
    Ok(network.with_plan(plan))
}

fn read_plan(p: PlanFile, network: &NetworkSpec) -> Result<CliqueTreePlan> {
    let shape: ShapeTag = p.shape.parse()?;
    let cliques = p.attach.len();
    let plan = match shape {
        ShapeTag::Explicit => CliqueTreePlan::explicit(p.k, p.attach)?,
        other => {
            let generator = match other {
                ShapeTag::Line => PlanShape::Line,
                ShapeTag::Star => PlanShape::Star,
                ShapeTag::Random(seed) => PlanShape::Random(seed),
                ShapeTag::Explicit => unreachable!(),
            };
            let plan = make_plan(p.k, cliques, generator)?;
            if plan.attach_sequence() != p.attach.as_slice() {
                return Err(Error::Format(format!(
                    "attach sequence does not match shape {shape}"
                )));
            }
            plan
        }
    };
    if plan.k() % network.k() != 0 {
        return Err(Error::Format(format!(
            "plan alphabet {} is not a multiple of network alphabet {}",
            plan.k(),
            network.k()
        )));
    }
    let rebuilt = build_ct(&plan)?;
    let same = rebuilt.n() == network.n()
        && rebuilt
            .rules()
            .iter()
            .zip(network.rules())
            .all(|(a, b)| a.neighbors() == b.neighbors());
    if !same {
        return Err(Error::Format(
            "stored neighbour lists differ from those rebuilt from the plan".into(),
        ));
    }
    Ok(plan)
}

pub fn write_trajectory(trajectory: &Trajectory) -> String {
    let mut out = format!(
        "{} {} {}\n",
        trajectory.k,
        trajectory.n(),
        trajectory.steps()
    );
    for state in &trajectory.states {
        out.push_str(&state.format(trajectory.k));
        out.push('\n');
    }
    out
}

pub fn read_trajectory(text: &str) -> Result<Trajectory> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty trajectory file".into()))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|f| f.parse().map_err(|_| Error::Format(format!("bad header {header:?}"))))
        .collect::<Result<_>>()?;
    let [k, n, steps] = fields[..] else {
        return Err(Error::Format(format!("header must be `k n steps`, got {header:?}")));
    };
    let states: Vec<Configuration> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| Configuration::parse(l, k))
        .collect::<Result<_>>()?;
    if states.len() != steps + 1 {
        return Err(Error::Format(format!(
            "header announces {} states, found {}",
            steps + 1,
            states.len()
        )));
    }
    if let Some(bad) = states.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(Trajectory {
        k,
        states,
        truncated: false,
    })
}

/// What a CLI run did, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub version: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialisation cannot fail");
        s.push('\n');
        s
    }
}
