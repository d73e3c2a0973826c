//! Exhaustive arrowing search and Ramsey-number computation.
//!
//! Depth-first over hyperedges in colex order, colors tried in increasing
//! index. After each assignment only cores meeting the new edge are
//! re-examined for a monochromatic target. The tree is cut at a fixed depth
//! into subtree tasks; the lowest-index task holding a counterexample wins,
//! so serial and parallel runs return identical decisions.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{detect_any, detect_any_partial, find_in_class, ColorClass, Scope};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{edge_count, Colex, Coloring, PartialColoring};
use crate::pattern::PatternSpec;
use crate::symmetry::{LexState, SymmetryGroup};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Pruning {
    None,
    /// With identical targets, color `i` never exceeds the largest color used so far plus one.
    FirstEdge,
    /// First-edge plus lex-leader pruning over vertex relabelings.
    #[default]
    LexLeader,
}

impl Pruning {
    pub fn name(self) -> &'static str {
        match self {
            Pruning::None => "none",
            Pruning::FirstEdge => "first-edge",
            Pruning::LexLeader => "lex-leader",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub pruning: Pruning,
    /// Reject a branch as soon as its prefix holds a monochromatic target.
    /// When off, complete colorings are checked at the leaves only.
    pub early_witness: bool,
    pub threads: usize,
    /// Depth at which the tree is cut into tasks; defaults to `min(edges, 10)`.
    pub split_depth: Option<usize>,
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            pruning: Pruning::default(),
            early_witness: true,
            threads: 1,
            split_depth: None,
            max_nodes: None,
            max_seconds: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Arrows,
    NotArrows,
    Indeterminate,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Arrows => "arrows",
            Status::NotArrows => "does not arrow",
            Status::Indeterminate => "indeterminate (budget)",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub symmetry_prunes: u64,
    pub witness_prunes: u64,
    /// Not serialized, so reports stay byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        (self.nodes, self.symmetry_prunes, self.witness_prunes)
            == (other.nodes, other.symmetry_prunes, other.witness_prunes)
    }
}

impl Eq for SearchStats {}

impl SearchStats {
    fn add(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.symmetry_prunes += other.symmetry_prunes;
        self.witness_prunes += other.witness_prunes;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub n: usize,
    pub r: usize,
    pub targets: Vec<Option<PatternSpec>>,
    pub status: Status,
    pub pruning: Pruning,
    pub counterexample: Option<Coloring>,
    pub stats: SearchStats,
}

impl Decision {
    pub fn arrows(&self) -> bool {
        self.status == Status::Arrows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperToken {
    pub pruning: Pruning,
    pub nodes: u64,
    pub seed: u64,
}

/// The least arrowing host size with a counterexample one below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub r: usize,
    pub k: usize,
    pub targets: Vec<Option<PatternSpec>>,
    pub value: usize,
    pub lower_witness: Coloring,
    pub upper_token: UpperToken,
}

impl Certificate {
    /// Re-checks the lower witness; the upper bound needs a fresh [`decide`].
    pub fn verify_lower(&self) -> Result<()> {
        let w = &self.lower_witness;
        if w.n() + 1 != self.value || w.r() != self.r || w.k() != self.k {
            return Err(invalid(
                "lower witness does not match the certificate parameters",
            ));
        }
        match detect_any(w, &self.targets)? {
            None => Ok(()),
            Some((color, _)) => Err(Error::Internal(format!(
                "lower witness contains a target in color {color}"
            ))),
        }
    }
}

/// Whether the colored prefix already holds a monochromatic target.
pub fn prune_subsumed(pc: &PartialColoring, targets: &[Option<PatternSpec>]) -> Result<bool> {
    Ok(detect_any_partial(pc, targets)?.is_some())
}

fn check_problem(n: usize, r: usize, targets: &[Option<PatternSpec>]) -> Result<()> {
    PartialColoring::empty(n, r, targets.len())?;
    for spec in targets.iter().flatten() {
        if spec.s() > r {
            return Err(Error::UniformityMismatch {
                pattern: spec.s(),
                host: r,
            });
        }
    }
    Ok(())
}

struct Problem<'a> {
    n: usize,
    r: usize,
    k: usize,
    targets: &'a [Option<PatternSpec>],
    edges: Vec<u64>,
    spans: Vec<usize>,
    color_symmetric: bool,
    pruning: Pruning,
    early_witness: bool,
    group: Option<SymmetryGroup>,
}

struct Budget {
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    tick_every: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
    winner: AtomicUsize,
}

const TICK: u64 = 4096;

enum Flow {
    Found,
    Exhausted,
    /// Budget ran out or a lower-index task already won.
    Stopped,
}

struct Worker<'p> {
    p: &'p Problem<'p>,
    budget: &'p Budget,
    task: usize,
    classes: Vec<ColorClass>,
    word: Vec<u8>,
    lex: Option<LexState>,
    stats: SearchStats,
    pending: u64,
    /// Frontier collection mode: prefixes reaching this depth are recorded, not expanded.
    frontier: Option<(usize, Vec<Vec<u8>>)>,
}

impl<'p> Worker<'p> {
    fn new(p: &'p Problem<'p>, budget: &'p Budget, task: usize) -> Worker<'p> {
        Worker {
            p,
            budget,
            task,
            classes: (0..p.k).map(|_| ColorClass::new(p.n, p.r)).collect(),
            word: Vec::with_capacity(p.edges.len()),
            lex: p.group.as_ref().map(LexState::new),
            stats: SearchStats::default(),
            pending: 0,
            frontier: None,
        }
    }

    /// Loads a frontier prefix; false if the prefix itself is rejected.
    fn load(&mut self, prefix: &[u8]) -> bool {
        for (i, &c) in prefix.iter().enumerate() {
            self.classes[c as usize].push(i, self.p.edges[i]);
            self.word.push(c);
        }
        match (&mut self.lex, &self.p.group) {
            (Some(state), Some(group)) => state.replay(group, &self.word),
            _ => true,
        }
    }

    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending < self.budget.tick_every {
            return true;
        }
        self.flush()
    }

    fn flush(&mut self) -> bool {
        let total = self.budget.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self.budget.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.budget.exhausted.store(true, Ordering::Relaxed);
        }
        !self.budget.exhausted.load(Ordering::Relaxed)
            && self.budget.winner.load(Ordering::Relaxed) > self.task
    }

    fn color_limit(&self) -> usize {
        if self.p.pruning == Pruning::None || !self.p.color_symmetric {
            return self.p.k;
        }
        let used = self.word.iter().max().map_or(0, |&c| c as usize + 1);
        (used + 1).min(self.p.k)
    }

    fn dfs(&mut self) -> Flow {
        let i = self.word.len();
        if let Some((depth, out)) = &mut self.frontier {
            if i == *depth {
                out.push(self.word.clone());
                return Flow::Exhausted;
            }
        }
        if i == self.p.edges.len() {
            if !self.p.early_witness {
                let c = Coloring::new(self.p.n, self.p.r, self.p.k, self.word.clone())
                    .expect("valid word");
                if detect_any(&c, self.p.targets)
                    .expect("checked problem")
                    .is_some()
                {
                    self.stats.witness_prunes += 1;
                    return Flow::Exhausted;
                }
            }
            return Flow::Found;
        }
        let edge = self.p.edges[i];
        let scope = Scope {
            m: self.p.spans[i],
            focus: edge,
        };
        for color in 0..self.color_limit() as u8 {
            self.stats.nodes += 1;
            if !self.tick() {
                return Flow::Stopped;
            }
            if self.p.early_witness {
                if let Some(spec) = &self.p.targets[color as usize] {
                    self.classes[color as usize].push(i, edge);
                    let hit =
                        find_in_class(&self.classes[color as usize], color, spec, scope).is_some();
                    self.classes[color as usize].pop(i);
                    if hit {
                        self.stats.witness_prunes += 1;
                        continue;
                    }
                }
            }
            self.word.push(color);
            if let (Some(state), Some(group)) = (&mut self.lex, &self.p.group) {
                if !state.advance(group, &self.word) {
                    self.stats.symmetry_prunes += 1;
                    self.word.pop();
                    continue;
                }
            }
            self.classes[color as usize].push(i, edge);
            let flow = self.dfs();
            self.classes[color as usize].pop(i);
            if !matches!(flow, Flow::Exhausted) {
                return flow;
            }
            self.word.pop();
        }
        Flow::Exhausted
    }
}

fn build_problem<'a>(
    n: usize,
    r: usize,
    targets: &'a [Option<PatternSpec>],
    options: &SearchOptions,
) -> Result<Problem<'a>> {
    check_problem(n, r, targets)?;
    let k = targets.len();
    let edges: Vec<u64> = if r <= n {
        Colex::new(n, r).collect()
    } else {
        Vec::new()
    };
    let spans = edges
        .iter()
        .map(|&e| 64 - e.leading_zeros() as usize)
        .collect();
    let color_symmetric = targets.windows(2).all(|w| w[0] == w[1]);
    let group = match options.pruning {
        Pruning::LexLeader if !edges.is_empty() => {
            Some(SymmetryGroup::new(n, r, k, color_symmetric)?)
        }
        _ => None,
    };
    Ok(Problem {
        n,
        r,
        k,
        targets,
        edges,
        spans,
        color_symmetric,
        pruning: options.pruning,
        early_witness: options.early_witness,
        group,
    })
}

/// Whether every k-coloring of K_n^(r) holds a monochromatic target, where
/// color `i` must avoid `targets[i]` (`None` leaves it unconstrained).
pub fn decide(
    n: usize,
    r: usize,
    targets: &[Option<PatternSpec>],
    options: &SearchOptions,
) -> Result<Decision> {
    let start = Instant::now();
    let p = build_problem(n, r, targets, options)?;
    if options.threads == 0 {
        return Err(invalid("thread count must be at least 1"));
    }
    let budget = Budget {
        nodes: AtomicU64::new(0),
        max_nodes: options.max_nodes,
        // Small node budgets are enforced exactly.
        tick_every: options
            .max_nodes
            .map_or(TICK, |m| if m < 64 * TICK { 1 } else { TICK }),
        deadline: options
            .max_seconds
            .map(|s| start + Duration::from_secs_f64(s.max(0.0))),
        exhausted: AtomicBool::new(false),
        winner: AtomicUsize::new(usize::MAX),
    };
    if options.max_nodes == Some(0) || options.max_seconds.is_some_and(|s| s <= 0.0) {
        budget.exhausted.store(true, Ordering::Relaxed);
    }

    let depth = options.split_depth.unwrap_or(10).min(p.edges.len());
    let mut root = Worker::new(&p, &budget, usize::MAX - 1);
    root.frontier = Some((depth, Vec::new()));
    let root_flow = if budget.exhausted.load(Ordering::Relaxed) {
        Flow::Stopped
    } else {
        root.dfs()
    };
    let mut stats = root.stats.clone();
    let prefixes = root.frontier.take().map(|(_, v)| v).unwrap_or_default();

    let run = |task: usize| -> (Flow, SearchStats, Vec<u8>) {
        let mut w = Worker::new(&p, &budget, task);
        let flow = if !w.load(&prefixes[task]) {
            Flow::Exhausted
        } else {
            let flow = w.dfs();
            w.flush();
            flow
        };
        if matches!(flow, Flow::Found) {
            budget.winner.fetch_min(task, Ordering::Relaxed);
        }
        (flow, w.stats, w.word)
    };
    let results: Vec<(Flow, SearchStats, Vec<u8>)> = if matches!(root_flow, Flow::Stopped) {
        Vec::new()
    } else if options.threads == 1 {
        let mut out = Vec::with_capacity(prefixes.len());
        for task in 0..prefixes.len() {
            let res = run(task);
            let stop = !matches!(res.0, Flow::Exhausted);
            out.push(res);
            if stop {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| (0..prefixes.len()).into_par_iter().map(run).collect())
    };

    let mut status = if matches!(root_flow, Flow::Stopped) {
        Status::Indeterminate
    } else {
        Status::Arrows
    };
    let mut counterexample = None;
    for (flow, task_stats, word) in results {
        stats.add(&task_stats);
        match flow {
            Flow::Exhausted => continue,
            Flow::Found => {
                let c = Coloring::new(n, r, targets.len(), word)?;
                if let Some((color, _)) = detect_any(&c, targets)? {
                    return Err(Error::Internal(format!(
                        "counterexample contains a target in color {color}"
                    )));
                }
                status = Status::NotArrows;
                counterexample = Some(c);
            }
            Flow::Stopped => status = Status::Indeterminate,
        }
        break;
    }
    stats.wall_time = start.elapsed();
    Ok(Decision {
        n,
        r,
        targets: targets.to_vec(),
        status,
        pruning: options.pruning,
        counterexample,
        stats,
    })
}

/// A coloring avoiding every target, if one exists. Budget exhaustion is an error.
pub fn find_counterexample(
    n: usize,
    r: usize,
    targets: &[Option<PatternSpec>],
    options: &SearchOptions,
) -> Result<Option<Coloring>> {
    let d = decide(n, r, targets, options)?;
    match d.status {
        Status::Indeterminate => Err(Error::Indeterminate { n }),
        _ => Ok(d.counterexample),
    }
}

/// Least `N` in `[lo, hi]` such that K_N^(r) arrows the targets.
pub fn ramsey_number(
    r: usize,
    targets: &[Option<PatternSpec>],
    lo: usize,
    hi: usize,
    options: &SearchOptions,
) -> Result<Certificate> {
    if lo == 0 || lo > hi {
        return Err(invalid(format!("bad search range [{lo}, {hi}]")));
    }
    check_problem(hi, r, targets)?;
    let mut below = decide(lo - 1, r, targets, options)?;
    match below.status {
        Status::Indeterminate => return Err(Error::Indeterminate { n: lo - 1 }),
        Status::Arrows => {
            return Err(invalid(format!(
                "K_{}^({r}) already arrows; lower the range",
                lo - 1
            )))
        }
        Status::NotArrows => {}
    }
    for n in lo..=hi {
        let d = decide(n, r, targets, options)?;
        match d.status {
            Status::Indeterminate => return Err(Error::Indeterminate { n }),
            Status::NotArrows => below = d,
            Status::Arrows => {
                let cert = Certificate {
                    r,
                    k: targets.len(),
                    targets: targets.to_vec(),
                    value: n,
                    lower_witness: below
                        .counterexample
                        .expect("non-arrowing decisions carry a counterexample"),
                    upper_token: UpperToken {
                        pruning: options.pruning,
                        nodes: d.stats.nodes,
                        seed: 0,
                    },
                };
                cert.verify_lower()?;
                return Ok(cert);
            }
        }
    }
    Err(Error::NotFound { lo, hi })
}

/// Shorthand for all-Berge-clique targets.
pub fn berge_targets(sizes: &[usize]) -> Vec<Option<PatternSpec>> {
    sizes.iter().map(|&t| Some(PatternSpec::berge(t))).collect()
}

/// Number of raw colorings, as a power of two when k = 2.
pub fn raw_edges(n: usize, r: usize) -> usize {
    if r > n {
        0
    } else {
        edge_count(n, r)
    }
}
