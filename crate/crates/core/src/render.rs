//! Space-time diagrams (binary PGM) and Graphviz output.

use std::fmt::Write as _;

use crate::analysis::semantic_digraph;
use crate::builder::CliqueTreePlan;
use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::network::{Configuration, Dynamics, NetworkSpec};

/// Largest configuration space drawn by [`render_dynamics_dot`].
pub const MAX_STATE_GRAPH: u64 = 4096;

/// Column order of a space-time diagram: `order[c]` is the automaton drawn
/// in column `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenOrder(Vec<usize>);

impl FlattenOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Format(format!(
                    "column order is not a permutation of 0..{}",
                    order.len()
                )));
            }
        }
        Ok(FlattenOrder(order))
    }

    pub fn identity(n: usize) -> Self {
        FlattenOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Depth-first pre-order over the clique tree: each automaton is followed
/// by the cliques attached to it, in plan order, and each of those by its
/// new automata (with their own subtrees) in index order. Line plans come
/// out as the natural chain `0, 1, .., n-1`.
pub fn flatten(plan: &CliqueTreePlan) -> FlattenOrder {
    let n = plan.size();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, &a) in plan.attach_sequence().iter().enumerate() {
        children[a].extend(plan.new_automata(t));
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children[v].iter().rev());
    }
    FlattenOrder(order)
}

/// Grey level of a symbol: `floor(s * 255 / (k - 1))`.
pub fn grey(symbol: u8, k: usize) -> u8 {
    (symbol as usize * 255 / (k - 1)) as u8
}

/// Binary PGM: one row per state, time going down, `order` picking columns.
pub fn render_pgm(trajectory: &Trajectory, order: &FlattenOrder) -> Result<Vec<u8>> {
    let k = trajectory.k;
    if k < 2 {
        return Err(Error::Alphabet(k));
    }
    let n = trajectory.n();
    if order.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: order.len(),
        });
    }
    let height = trajectory.states.len();
    let mut out = format!("P5\n{n} {height}\n255\n").into_bytes();
    out.reserve(n * height);
    for state in &trajectory.states {
        if state.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: state.len(),
            });
        }
        out.extend(order.as_slice().iter().map(|&i| grey(state.symbols()[i], k)));
    }
    Ok(out)
}

/// Graphviz text of the interaction digraph, optionally followed by a second
/// graph with the full configuration space (`k^n <= 4096`).
pub fn render_dynamics_dot(network: &NetworkSpec, with_state_graph: bool) -> Result<String> {
    let g = semantic_digraph(network);
    let mut s = String::from("digraph interaction {\n");
    for u in 0..g.n() {
        writeln!(s, "  {u};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(s, "  {u} -> {v};").unwrap();
    }
    s.push_str("}\n");
    if with_state_graph {
        let k = network.k();
        let total = (k as u64)
            .checked_pow(network.n() as u32)
            .filter(|&t| t <= MAX_STATE_GRAPH)
            .ok_or(Error::BudgetExceeded {
                required: (k as u128).checked_pow(network.n() as u32).unwrap_or(u128::MAX),
                budget: MAX_STATE_GRAPH as u128,
            })?;
        s.push_str("digraph dynamics {\n");
        let mut buf = vec![0; network.n()];
        for idx in 0..total {
            let x = Configuration::from_index(idx, network.n(), k);
            network.step_into(x.symbols(), &mut buf);
            let y = Configuration::new(buf.clone());
            writeln!(s, "  \"{}\" -> \"{}\";", x.format(k), y.format(k)).unwrap();
        }
        s.push_str("}\n");
    }
    Ok(s)
}
