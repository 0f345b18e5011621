//! Networks, configurations and the parallel update.
//!
//! Automata are indexed from 0. Every local function is a sum modulo `k`
//! over a neighbour set plus a constant offset:
//! `f_i(x) = (sum_{j in neighbors(i)} x_j + offset_i) mod k`.

use std::fmt;

use crate::builder::CliqueTreePlan;
use crate::error::{Error, Result};

/// A symbol of the alphabet `{0, .., k-1}`. Alphabets are capped at 256.
pub type Symbol = u8;

pub const MAX_ALPHABET: usize = 256;

pub(crate) fn check_alphabet(k: usize) -> Result<()> {
    if (2..=MAX_ALPHABET).contains(&k) {
        Ok(())
    } else {
        Err(Error::Alphabet(k))
    }
}

/// A vector of symbols, one per automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<Symbol>);

impl Configuration {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Configuration(symbols)
    }

    pub fn uniform(symbol: Symbol, n: usize) -> Self {
        Configuration(vec![symbol; n])
    }

    /// All zeros except `symbol` at `index`.
    pub fn single(n: usize, index: usize, symbol: Symbol) -> Result<Self> {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut v = vec![0; n];
        v[index] = symbol;
        Ok(Configuration(v))
    }

    /// The `index`-th configuration of `{0..k-1}^n` in base-`k` order, most
    /// significant symbol first (so index 1 of length 3 is `001`).
    pub fn from_index(mut index: u64, n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (index % k as u64) as Symbol;
            index /= k as u64;
        }
        Configuration(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    /// Returns the common symbol if every entry is equal.
    pub fn uniform_symbol(&self) -> Option<Symbol> {
        let (&first, rest) = self.0.split_first()?;
        rest.iter().all(|&s| s == first).then_some(first)
    }

    /// Componentwise `+1 mod k`.
    pub fn plus_one(&self, k: usize) -> Self {
        Configuration(
            self.0
                .iter()
                .map(|&s| ((s as usize + 1) % k) as Symbol)
                .collect(),
        )
    }

    /// Checks entries against the alphabet and, when given, the expected length.
    pub fn validate(&self, k: usize, n: Option<usize>) -> Result<()> {
        if let Some(n) = n {
            if self.0.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: self.0.len(),
                });
            }
        }
        match self.0.iter().find(|&&s| s as usize >= k) {
            Some(&s) => Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                k,
            }),
            None => Ok(()),
        }
    }

    /// Parses base-`k` digits (`"110"`) or comma-separated integers
    /// (`"2,0,11"`). Alphabets above 10 must use the comma form.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        check_alphabet(k)?;
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let values: Vec<usize> = if text.contains(',') || k > 10 {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("not an integer: {:?}", t.trim())))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("not a digit: {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        if let Some(&bad) = values.iter().find(|&&v| v >= k) {
            return Err(Error::SymbolOutOfRange { symbol: bad, k });
        }
        Ok(Configuration(values.into_iter().map(|v| v as Symbol).collect()))
    }

    /// Inverse of [`Configuration::parse`].
    pub fn format(&self, k: usize) -> String {
        if k <= 10 {
            self.0.iter().map(|&s| char::from(b'0' + s)).collect()
        } else {
            self.0
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl From<Vec<Symbol>> for Configuration {
    fn from(v: Vec<Symbol>) -> Self {
        Configuration(v)
    }
}

/// Sum of all symbols modulo `k`; the reference answer to the k-parity problem.
pub fn k_parity(x: &[Symbol], k: usize) -> Symbol {
    (x.iter().map(|&s| s as u64).sum::<u64>() % k as u64) as Symbol
}

/// `f_i(x) = (sum of x over neighbors + offset) mod k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    neighbors: Vec<usize>,
    offset: Symbol,
}

impl LocalRule {
    /// Neighbours are sorted and deduplicated.
    pub fn new(mut neighbors: Vec<usize>, offset: Symbol) -> Self {
        neighbors.sort_unstable();
        neighbors.dedup();
        LocalRule { neighbors, offset }
    }

    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn offset(&self) -> Symbol {
        self.offset
    }

    pub(crate) fn with_offset(&self, offset: Symbol) -> Self {
        LocalRule {
            neighbors: self.neighbors.clone(),
            offset,
        }
    }

    #[inline]
    fn eval(&self, x: &[Symbol], k: usize) -> Symbol {
        let sum: usize = self.neighbors.iter().map(|&j| x[j] as usize).sum();
        ((sum + self.offset as usize) % k) as Symbol
    }
}

/// Anything with a synchronous, deterministic update over `{0..k-1}^n`.
pub trait Dynamics: Sync {
    fn alphabet(&self) -> usize;

    fn size(&self) -> usize;

    /// Local function of automaton `i`. Callers guarantee `i < size()` and a
    /// well-formed `x`.
    fn local(&self, i: usize, x: &[Symbol]) -> Symbol;

    fn step_into(&self, x: &[Symbol], out: &mut [Symbol]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.local(i, x);
        }
    }

    fn check(&self, x: &Configuration) -> Result<()> {
        x.validate(self.alphabet(), Some(self.size()))
    }

    /// One parallel step; `x` is left untouched.
    fn apply(&self, x: &Configuration) -> Result<Configuration> {
        self.check(x)?;
        let mut out = vec![0; self.size()];
        self.step_into(x.symbols(), &mut out);
        Ok(Configuration(out))
    }
}

/// A violated clique-tree structural property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtViolation {
    MissingSelfLoop(usize),
    Asymmetric { from: usize, to: usize },
    Degree { automaton: usize, degree: usize },
    Size(usize),
}

impl fmt::Display for CtViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtViolation::MissingSelfLoop(i) => write!(f, "automaton {i} is not auto-regulated"),
            CtViolation::Asymmetric { from, to } => {
                write!(f, "{from} influences {to} but not the other way")
            }
            CtViolation::Degree { automaton, degree } => write!(
                f,
                "automaton {automaton} has {degree} influencers, not 1 mod k"
            ),
            CtViolation::Size(n) => write!(f, "size {n} is not 1 mod k"),
        }
    }
}

/// An automata network over a fixed alphabet with sum-mod-k local rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    k: usize,
    rules: Vec<LocalRule>,
    plan: Option<CliqueTreePlan>,
}

impl NetworkSpec {
    pub fn new(k: usize, rules: Vec<LocalRule>) -> Result<Self> {
        check_alphabet(k)?;
        let n = rules.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("network has no automata".into()));
        }
        for (i, rule) in rules.iter().enumerate() {
            if let Some(&j) = rule.neighbors.iter().find(|&&j| j >= n) {
                return Err(Error::InvalidNetwork(format!(
                    "automaton {i} lists neighbour {j} >= n = {n}"
                )));
            }
            if rule.neighbors.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidNetwork(format!(
                    "neighbours of automaton {i} are not sorted and distinct"
                )));
            }
            if rule.offset as usize >= k {
                return Err(Error::InvalidNetwork(format!(
                    "offset {} of automaton {i} outside alphabet",
                    rule.offset
                )));
            }
        }
        Ok(NetworkSpec {
            k,
            rules,
            plan: None,
        })
    }

    pub(crate) fn from_parts(k: usize, rules: Vec<LocalRule>, plan: Option<CliqueTreePlan>) -> Self {
        NetworkSpec { k, rules, plan }
    }

    pub fn with_plan(mut self, plan: Option<CliqueTreePlan>) -> Self {
        self.plan = plan;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> Result<&LocalRule> {
        self.rules.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            n: self.n(),
        })
    }

    /// The clique-tree recipe this network was built from, if any.
    pub fn plan(&self) -> Option<&CliqueTreePlan> {
        self.plan.as_ref()
    }

    pub fn offsets(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.rules.iter().map(|r| r.offset)
    }

    /// True when every offset equals `offset`.
    pub fn all_offsets(&self, offset: Symbol) -> bool {
        self.offsets().all(|o| o == offset)
    }

    pub fn eval_local(&self, rule_index: usize, x: &Configuration) -> Result<Symbol> {
        let rule = self.rule(rule_index)?;
        self.check(x)?;
        Ok(rule.eval(x.symbols(), self.k))
    }

    pub fn step(&self, x: &Configuration) -> Result<Configuration> {
        self.apply(x)
    }

    /// Structural clique-tree properties: self-loops, symmetric influence,
    /// in-degree 1 mod k and size 1 mod k. Empty means all hold.
    pub fn ct_violations(&self) -> Vec<CtViolation> {
        let n = self.n();
        let mut out = Vec::new();
        if n % self.k != 1 {
            out.push(CtViolation::Size(n));
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.neighbors.binary_search(&i).is_err() {
                out.push(CtViolation::MissingSelfLoop(i));
            }
            if rule.neighbors.len() % self.k != 1 {
                out.push(CtViolation::Degree {
                    automaton: i,
                    degree: rule.neighbors.len(),
                });
            }
            for &j in &rule.neighbors {
                if self.rules[j].neighbors.binary_search(&i).is_err() {
                    // j lists as influencer of i, so j -> i exists but i -> j does not
                    out.push(CtViolation::Asymmetric { from: j, to: i });
                }
            }
        }
        out
    }

    pub fn is_clique_tree(&self) -> bool {
        self.ct_violations().is_empty()
    }
}

impl Dynamics for NetworkSpec {
    fn alphabet(&self) -> usize {
        self.k
    }

    fn size(&self) -> usize {
        self.rules.len()
    }

    #[inline]
    fn local(&self, i: usize, x: &[Symbol]) -> Symbol {
        self.rules[i].eval(x, self.k)
    }
}

/// Networks given by explicit lookup tables. Only used for non-linear
/// fixtures; the builder never produces these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTableNetwork {
    k: usize,
    inputs: Vec<Vec<usize>>,
    tables: Vec<Vec<Symbol>>,
}

impl TruthTableNetwork {
    /// Tabulates `f(i, values)` where `values` lists the symbols of
    /// `inputs[i]` in the given order.
    pub fn from_fn<F>(k: usize, inputs: Vec<Vec<usize>>, f: F) -> Result<Self>
    where
        F: Fn(usize, &[Symbol]) -> Symbol,
    {
        check_alphabet(k)?;
        let n = inputs.len();
        let mut tables = Vec::with_capacity(n);
        for (i, ins) in inputs.iter().enumerate() {
            if let Some(&j) = ins.iter().find(|&&j| j >= n) {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
            let rows = (k as u64)
                .checked_pow(ins.len() as u32)
                .filter(|&r| r <= 1 << 24)
                .ok_or_else(|| Error::InvalidNetwork(format!("table of automaton {i} too large")))?;
            let mut table = Vec::with_capacity(rows as usize);
            for row in 0..rows {
                let values = Configuration::from_index(row, ins.len(), k);
                let out = f(i, values.symbols());
                if out as usize >= k {
                    return Err(Error::SymbolOutOfRange {
                        symbol: out as usize,
                        k,
                    });
                }
                table.push(out);
            }
            tables.push(table);
        }
        Ok(TruthTableNetwork { k, inputs, tables })
    }

    pub fn inputs(&self, i: usize) -> &[usize] {
        &self.inputs[i]
    }
}

impl Dynamics for TruthTableNetwork {
    fn alphabet(&self) -> usize {
        self.k
    }

    fn size(&self) -> usize {
        self.inputs.len()
    }

    fn local(&self, i: usize, x: &[Symbol]) -> Symbol {
        let row = self.inputs[i]
            .iter()
            .fold(0usize, |acc, &j| acc * self.k + x[j] as usize);
        self.tables[i][row]
    }
}
