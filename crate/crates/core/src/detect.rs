//! Monochromatic structure detection with checkable witnesses.
//!
//! Every detector enumerates core placements in colex order of the core
//! vertex set and returns the first placement that embeds the pattern, so
//! results are deterministic. Per placement:
//!
//! * Berge: left-saturating matching of pattern edges into same-color
//!   hyperedges that contain their image.
//! * Trace: each pattern edge needs a same-color hyperedge whose
//!   intersection with the core is exactly its image.
//! * Expansion: as trace, with the outside parts pairwise disjoint. One
//!   outside vertex per edge is a matching problem; larger outside parts are
//!   packed by depth-first search.
//! * Suspension: one outside set `U` shared by every pattern edge.
//! * Shadow: cliques in the graph of pairs covered by same-color hyperedges.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{edge_count, rank_unchecked, Bits, Colex, Coloring, Edge, PartialColoring};
use crate::pattern::{Kind, PatternSpec};

pub use crate::matching::max_bipartite_matching;

/// One pattern edge and the host hyperedge carrying it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeAssignment {
    pub pattern_edge: Vec<usize>,
    pub host_edge: Vec<usize>,
}

/// Outside vertices of an expansion (one set per listed edge) or of a
/// suspension (one shared set).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Extra {
    PerEdge(Vec<Vec<usize>>),
    Shared(Vec<usize>),
}

/// Certificate that a coloring contains a monochromatic copy of a target.
///
/// `core[i]` is the host vertex of pattern vertex `i`. `edges` is empty for
/// shadow witnesses; the covering hyperedges are re-derived from the coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: Kind,
    pub color: u8,
    pub core: Vec<usize>,
    pub edges: Vec<EdgeAssignment>,
    #[serde(default)]
    pub extra: Option<Extra>,
}

impl Witness {
    pub fn core_set(&self) -> u64 {
        self.core
            .iter()
            .fold(0, |m, &v| m | 1u64.checked_shl(v as u32).unwrap_or(0))
    }
}

/// Hyperedges of a single color, kept as a list plus a rank-indexed bitset.
#[derive(Clone, Debug)]
pub(crate) struct ColorClass {
    r: usize,
    edges: Vec<u64>,
    member: Vec<u64>,
}

impl ColorClass {
    pub(crate) fn new(n: usize, r: usize) -> ColorClass {
        ColorClass {
            r,
            edges: Vec::new(),
            member: vec![0; edge_count(n, r).div_ceil(64)],
        }
    }

    pub(crate) fn from_prefix(n: usize, r: usize, colors: &[u8], color: u8) -> ColorClass {
        let mut class = ColorClass::new(n, r);
        for (rank, mask) in Colex::new(n, r).enumerate().take(colors.len()) {
            if colors[rank] == color {
                class.push(rank, mask);
            }
        }
        class
    }

    #[inline]
    pub(crate) fn push(&mut self, rank: usize, mask: u64) {
        self.edges.push(mask);
        self.member[rank / 64] |= 1 << (rank % 64);
    }

    #[inline]
    pub(crate) fn pop(&mut self, rank: usize) {
        self.edges.pop();
        self.member[rank / 64] &= !(1 << (rank % 64));
    }

    /// Whether the r-set `mask` belongs to the class.
    #[inline]
    fn contains(&self, mask: u64) -> bool {
        let rank = rank_unchecked(Edge(mask));
        self.member
            .get(rank / 64)
            .is_some_and(|w| w >> (rank % 64) & 1 == 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.edges.len()
    }
}

/// Restricts a search to cores inside `[m]`, and, when `focus` is nonzero,
/// to cores meeting `focus` in at least `s` vertices (the new-edge filter).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scope {
    pub m: usize,
    pub focus: u64,
}

impl Scope {
    pub(crate) fn full(n: usize) -> Scope {
        Scope { m: n, focus: 0 }
    }
}

#[inline]
fn image(pattern_edge: Edge, phi: &[usize]) -> u64 {
    pattern_edge.vertices().fold(0, |m, v| m | 1 << phi[v])
}

/// Reusable buffers for the bitset matcher.
#[derive(Default)]
struct Scratch {
    words: usize,
    adj: Vec<u64>,
    owner: Vec<u32>,
    visited: Vec<u64>,
    matched: Vec<u32>,
}

const FREE: u32 = u32::MAX;

impl Scratch {
    fn reset(&mut self, left: usize, right: usize) {
        self.words = right.div_ceil(64).max(1);
        self.adj.clear();
        self.adj.resize(left * self.words, 0);
        self.owner.clear();
        self.owner.resize(self.words * 64, FREE);
        self.matched.clear();
        self.matched.resize(left, FREE);
    }

    fn row(&mut self, i: usize) -> &mut [u64] {
        &mut self.adj[i * self.words..(i + 1) * self.words]
    }

    fn saturate(&mut self, left: usize) -> bool {
        for i in 0..left {
            self.visited.clear();
            self.visited.resize(self.words, 0);
            if !self.augment(i) {
                return false;
            }
        }
        true
    }

    fn augment(&mut self, i: usize) -> bool {
        for w in 0..self.words {
            loop {
                let free = self.adj[i * self.words + w] & !self.visited[w];
                if free == 0 {
                    break;
                }
                let b = free.trailing_zeros() as usize;
                self.visited[w] |= 1 << b;
                let j = w * 64 + b;
                let owner = self.owner[j];
                if owner == FREE || self.augment(owner as usize) {
                    self.owner[j] = i as u32;
                    self.matched[i] = j as u32;
                    return true;
                }
            }
        }
        false
    }
}

struct Detector<'a> {
    class: &'a ColorClass,
    spec: &'a PatternSpec,
    color: u8,
    scope: Scope,
    /// Pattern edges as pattern-vertex masks.
    pedges: &'a [Edge],
    extra_size: usize,
    scratch: Scratch,
}

impl<'a> Detector<'a> {
    fn new(class: &'a ColorClass, color: u8, spec: &'a PatternSpec, scope: Scope) -> Detector<'a> {
        Detector {
            class,
            spec,
            color,
            scope,
            pedges: spec.pattern.edges(),
            extra_size: class.r - spec.s(),
            scratch: Scratch::default(),
        }
    }

    fn vertex_budget_ok(&self) -> bool {
        let t = self.spec.t();
        let needed = match self.spec.kind {
            Kind::Expansion => t + self.extra_size * self.pedges.len(),
            Kind::Suspension => t + self.extra_size,
            _ => t,
        };
        if self.scope.m < needed {
            return false;
        }
        match self.spec.kind {
            Kind::Shadow => !self.class.edges.is_empty(),
            _ => self.class.len() >= self.pedges.len(),
        }
    }

    fn run(&mut self) -> Option<Witness> {
        if !self.vertex_budget_ok() {
            return None;
        }
        if self.spec.kind == Kind::Shadow && self.spec.pattern.is_complete() {
            return self.shadow_clique();
        }
        let t = self.spec.t();
        let s = self.spec.s();
        let complete = self.spec.pattern.is_complete();
        let order = degree_order(self.spec);
        let mut phi = vec![0usize; t];
        for core in Colex::new(self.scope.m, t) {
            if self.scope.focus != 0 && ((core & self.scope.focus).count_ones() as usize) < s {
                continue;
            }
            let found = if complete {
                for (slot, v) in phi.iter_mut().zip(Bits(core)) {
                    *slot = v;
                }
                self.check(&phi, core)
            } else {
                self.assign(&order, 0, core, 0, &mut phi)
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Backtracking bijection from pattern vertices (in `order`) onto `core`.
    fn assign(
        &mut self,
        order: &[(usize, Vec<usize>)],
        depth: usize,
        core: u64,
        used: u64,
        phi: &mut [usize],
    ) -> Option<Witness> {
        if depth == order.len() {
            return self.check(phi, core);
        }
        let (pv, closing) = &order[depth];
        for v in Bits(core & !used) {
            phi[*pv] = v;
            if closing
                .iter()
                .all(|&i| self.edge_feasible(image(self.pedges[i], phi), core))
            {
                if let Some(w) = self.assign(order, depth + 1, core, used | 1 << v, phi) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Necessary condition for a single pattern edge image.
    fn edge_feasible(&self, h: u64, core: u64) -> bool {
        match self.spec.kind {
            Kind::Berge | Kind::Shadow => self.class.edges.iter().any(|&e| e & h == h),
            _ => self.class.edges.iter().any(|&e| e & core == h),
        }
    }

    fn check(&mut self, phi: &[usize], core: u64) -> Option<Witness> {
        match self.spec.kind {
            Kind::Berge => self.check_berge(phi),
            Kind::Trace => self.check_trace(phi, core),
            Kind::Expansion => self.check_expansion(phi, core),
            Kind::Suspension => self.check_suspension(phi, core),
            Kind::Shadow => self.check_shadow(phi),
        }
    }

    fn witness(
        &self,
        phi: &[usize],
        hosts: impl IntoIterator<Item = u64>,
        extra: Option<Extra>,
    ) -> Witness {
        let edges = self
            .pedges
            .iter()
            .zip(hosts)
            .map(|(&pe, h)| EdgeAssignment {
                pattern_edge: pe.to_vec(),
                host_edge: Edge(h).to_vec(),
            })
            .collect();
        Witness {
            kind: self.spec.kind,
            color: self.color,
            core: phi.to_vec(),
            edges,
            extra,
        }
    }

    fn check_berge(&mut self, phi: &[usize]) -> Option<Witness> {
        let left = self.pedges.len();
        let class = self.class;
        self.scratch.reset(left, class.edges.len());
        for (i, &pe) in self.pedges.iter().enumerate() {
            let h = image(pe, phi);
            let row = self.scratch.row(i);
            let mut any = false;
            for (j, &e) in class.edges.iter().enumerate() {
                if e & h == h {
                    row[j / 64] |= 1 << (j % 64);
                    any = true;
                }
            }
            if !any {
                return None;
            }
        }
        if !self.scratch.saturate(left) {
            return None;
        }
        let hosts: Vec<u64> = self
            .scratch
            .matched
            .iter()
            .map(|&j| class.edges[j as usize])
            .collect();
        Some(self.witness(phi, hosts, None))
    }

    fn check_trace(&mut self, phi: &[usize], core: u64) -> Option<Witness> {
        let mut hosts = Vec::with_capacity(self.pedges.len());
        for &pe in self.pedges {
            let h = image(pe, phi);
            hosts.push(*self.class.edges.iter().find(|&&e| e & core == h)?);
        }
        Some(self.witness(phi, hosts, None))
    }

    fn check_expansion(&mut self, phi: &[usize], core: u64) -> Option<Witness> {
        let images: Vec<u64> = self.pedges.iter().map(|&pe| image(pe, phi)).collect();
        let mut candidates: Vec<Vec<u64>> = Vec::with_capacity(images.len());
        for &h in &images {
            let mut outs: Vec<u64> = self
                .class
                .edges
                .iter()
                .filter(|&&e| e & core == h)
                .map(|&e| e ^ h)
                .collect();
            if outs.is_empty() {
                return None;
            }
            outs.sort_unstable();
            candidates.push(outs);
        }
        let outside = low_mask(self.scope.m) & !core;
        let chosen: Vec<u64> = match self.extra_size {
            0 => vec![0; images.len()],
            1 => {
                self.scratch.reset(images.len(), 64);
                for (i, outs) in candidates.iter().enumerate() {
                    self.scratch.row(i)[0] = outs.iter().fold(0, |m, &x| m | x);
                }
                if !self.scratch.saturate(images.len()) {
                    return None;
                }
                self.scratch.matched.iter().map(|&j| 1u64 << j).collect()
            }
            d => {
                let mut chosen = vec![0u64; images.len()];
                let mut done = vec![false; images.len()];
                if !pack(
                    &candidates,
                    d,
                    outside,
                    0,
                    &mut done,
                    &mut chosen,
                    images.len(),
                ) {
                    return None;
                }
                chosen
            }
        };
        let hosts: Vec<u64> = images.iter().zip(&chosen).map(|(h, x)| h | x).collect();
        let extra = Extra::PerEdge(chosen.iter().map(|&x| Edge(x).to_vec()).collect());
        Some(self.witness(phi, hosts, Some(extra)))
    }

    fn check_suspension(&mut self, phi: &[usize], core: u64) -> Option<Witness> {
        let images: Vec<u64> = self.pedges.iter().map(|&pe| image(pe, phi)).collect();
        let first = images[0];
        let mut shared: Vec<u64> = self
            .class
            .edges
            .iter()
            .filter(|&&e| e & core == first)
            .map(|&e| e ^ first)
            .collect();
        shared.sort_unstable();
        let u = shared
            .into_iter()
            .find(|&u| images[1..].iter().all(|&h| self.class.contains(h | u)))?;
        let hosts: Vec<u64> = images.iter().map(|h| h | u).collect();
        Some(self.witness(phi, hosts, Some(Extra::Shared(Edge(u).to_vec()))))
    }

    fn shadow_graph(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.scope.m];
        for &e in &self.class.edges {
            for v in Bits(e) {
                if v < self.scope.m {
                    adj[v] |= e & !(1 << v);
                }
            }
        }
        adj
    }

    fn check_shadow(&mut self, phi: &[usize]) -> Option<Witness> {
        let adj = self.shadow_graph();
        self.pedges
            .iter()
            .all(|&pe| {
                let mut vs = pe.vertices();
                let (a, b) = (phi[vs.next().unwrap()], phi[vs.next().unwrap()]);
                adj[a] >> b & 1 == 1
            })
            .then(|| Witness {
                kind: Kind::Shadow,
                color: self.color,
                core: phi.to_vec(),
                edges: Vec::new(),
                extra: None,
            })
    }

    /// Pivoting Bron–Kerbosch over the shadow graph; keeps the colex-least
    /// admissible t-subset of any maximal clique of size at least t.
    fn shadow_clique(&mut self) -> Option<Witness> {
        let t = self.spec.t();
        let adj = self.shadow_graph();
        let mut best: Option<u64> = None;
        let focus = self.scope.focus;
        let mut report = |q: u64| {
            let pick = if focus == 0 {
                first_bits(q, t)
            } else {
                if (q & focus).count_ones() < 2 {
                    return;
                }
                let anchor = first_bits(q & focus, 2);
                anchor | first_bits(q & !anchor, t - 2)
            };
            if best.is_none_or(|b| pick < b) {
                best = Some(pick);
            }
        };
        bron_kerbosch(&adj, 0, low_mask(self.scope.m), 0, t, &mut report);
        let core = best?;
        Some(Witness {
            kind: Kind::Shadow,
            color: self.color,
            core: Edge(core).to_vec(),
            edges: Vec::new(),
            extra: None,
        })
    }
}

fn bron_kerbosch(
    adj: &[u64],
    r: u64,
    mut p: u64,
    mut x: u64,
    t: usize,
    report: &mut impl FnMut(u64),
) {
    if (r.count_ones() + p.count_ones()) < t as u32 {
        return;
    }
    if p == 0 {
        if x == 0 {
            report(r);
        }
        return;
    }
    let pivot = Bits(p | x)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("nonempty");
    for v in Bits(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], t, report);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

#[inline]
fn low_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// The `count` smallest elements of `set`.
fn first_bits(set: u64, count: usize) -> u64 {
    Bits(set).take(count).fold(0, |m, v| m | 1 << v)
}

/// Disjoint packing of outside sets, fewest remaining candidates first.
fn pack(
    candidates: &[Vec<u64>],
    d: usize,
    free: u64,
    placed: usize,
    done: &mut [bool],
    chosen: &mut [u64],
    total: usize,
) -> bool {
    if placed == total {
        return true;
    }
    if (free.count_ones() as usize) < d * (total - placed) {
        return false;
    }
    let mut pick = None;
    let mut fewest = usize::MAX;
    for (i, outs) in candidates.iter().enumerate() {
        if done[i] {
            continue;
        }
        let live = outs.iter().filter(|&&x| x & !free == 0).count();
        if live == 0 {
            return false;
        }
        if live < fewest {
            fewest = live;
            pick = Some(i);
        }
    }
    let i = pick.expect("an unplaced edge remains");
    done[i] = true;
    for &x in &candidates[i] {
        if x & !free == 0 {
            chosen[i] = x;
            if pack(candidates, d, free & !x, placed + 1, done, chosen, total) {
                return true;
            }
        }
    }
    done[i] = false;
    false
}

/// Pattern vertices by decreasing degree, each with the pattern edges whose
/// last vertex (in that order) it is.
fn degree_order(spec: &PatternSpec) -> Vec<(usize, Vec<usize>)> {
    let pattern = &spec.pattern;
    let mut vs: Vec<usize> = (0..pattern.t()).collect();
    vs.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));
    let mut placed = 0u64;
    vs.into_iter()
        .map(|v| {
            placed |= 1 << v;
            let closing = pattern
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.contains(v) && e.mask() & !placed == 0)
                .map(|(i, _)| i)
                .collect();
            (v, closing)
        })
        .collect()
}

pub(crate) fn find_in_class(
    class: &ColorClass,
    color: u8,
    spec: &PatternSpec,
    scope: Scope,
) -> Option<Witness> {
    Detector::new(class, color, spec, scope).run()
}

fn check_query(r: usize, k: usize, color: u8, spec: &PatternSpec) -> Result<()> {
    if color as usize >= k {
        return Err(invalid(format!("color {color} out of range for k = {k}")));
    }
    if spec.s() > r {
        return Err(Error::UniformityMismatch {
            pattern: spec.s(),
            host: r,
        });
    }
    Ok(())
}

fn detect_prefix(
    n: usize,
    r: usize,
    k: usize,
    colors: &[u8],
    color: u8,
    spec: &PatternSpec,
) -> Result<Option<Witness>> {
    check_query(r, k, color, spec)?;
    let class = ColorClass::from_prefix(n, r, colors, color);
    Ok(find_in_class(&class, color, spec, Scope::full(n)))
}

/// Monochromatic copy of `spec` (any kind) in the given color.
pub fn detect(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_prefix(c.n(), c.r(), c.k(), c.colors(), color, spec)
}

/// As [`detect`], treating blank hyperedges as absent.
pub fn detect_partial(
    pc: &PartialColoring,
    color: u8,
    spec: &PatternSpec,
) -> Result<Option<Witness>> {
    detect_prefix(pc.n(), pc.r(), pc.k(), pc.prefix(), color, spec)
}

fn detect_kind(
    c: &Coloring,
    color: u8,
    spec: &PatternSpec,
    expected: Kind,
) -> Result<Option<Witness>> {
    if spec.kind != expected {
        return Err(Error::KindMismatch {
            expected,
            found: spec.kind,
        });
    }
    detect(c, color, spec)
}

/// Berge copy: injective core, distinct hyperedges containing each edge image.
pub fn detect_berge(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_kind(c, color, spec, Kind::Berge)
}

pub fn detect_trace(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_kind(c, color, spec, Kind::Trace)
}

pub fn detect_expansion(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_kind(c, color, spec, Kind::Expansion)
}

pub fn detect_suspension(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_kind(c, color, spec, Kind::Suspension)
}

pub fn detect_shadow(c: &Coloring, color: u8, spec: &PatternSpec) -> Result<Option<Witness>> {
    detect_kind(c, color, spec, Kind::Shadow)
}

fn check_targets(k: usize, targets: &[Option<PatternSpec>]) -> Result<()> {
    if targets.len() != k {
        return Err(invalid(format!(
            "{} targets given for {k} colors",
            targets.len()
        )));
    }
    Ok(())
}

/// First color (in index order) whose target appears monochromatically.
pub fn detect_any(c: &Coloring, targets: &[Option<PatternSpec>]) -> Result<Option<(u8, Witness)>> {
    check_targets(c.k(), targets)?;
    for (color, target) in targets.iter().enumerate() {
        if let Some(spec) = target {
            if let Some(w) = detect(c, color as u8, spec)? {
                return Ok(Some((color as u8, w)));
            }
        }
    }
    Ok(None)
}

/// [`detect_any`] over the colored prefix of a partial coloring.
pub fn detect_any_partial(
    pc: &PartialColoring,
    targets: &[Option<PatternSpec>],
) -> Result<Option<(u8, Witness)>> {
    check_targets(pc.k(), targets)?;
    for (color, target) in targets.iter().enumerate() {
        if let Some(spec) = target {
            if let Some(w) = detect_partial(pc, color as u8, spec)? {
                return Ok(Some((color as u8, w)));
            }
        }
    }
    Ok(None)
}

/// Why a witness fails to certify its claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessViolation {
    Kind { expected: Kind, found: Kind },
    ColorRange(u8),
    Uniformity,
    CoreSize { expected: usize, found: usize },
    CoreRange(usize),
    CoreInjectivity(usize),
    EdgeCount { expected: usize, found: usize },
    PatternEdge(Vec<usize>),
    HostEdge(Vec<usize>),
    Injectivity(Vec<usize>),
    Color { host_edge: Vec<usize>, found: u8 },
    Containment(Vec<usize>),
    Trace(Vec<usize>),
    Extra(String),
    ShadowPair(usize, usize),
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use WitnessViolation::*;
        match self {
            Kind { expected, found } => write!(f, "kind: witness is {found}, target is {expected}"),
            ColorRange(c) => write!(f, "color-range: color {c} not in the coloring"),
            Uniformity => f.write_str("uniformity: pattern uniformity exceeds host"),
            CoreSize { expected, found } => {
                write!(f, "core-size: expected {expected}, found {found}")
            }
            CoreRange(v) => write!(f, "core-range: vertex {v} outside the host"),
            CoreInjectivity(v) => write!(f, "core-injectivity: host vertex {v} used twice"),
            EdgeCount { expected, found } => {
                write!(f, "edge-count: expected {expected}, found {found}")
            }
            PatternEdge(e) => write!(
                f,
                "pattern-edge: {e:?} missing, repeated or not in the pattern"
            ),
            HostEdge(e) => write!(f, "host-edge: {e:?} is not a hyperedge of the host"),
            Injectivity(e) => write!(f, "injectivity: host edge {e:?} assigned twice"),
            Color { host_edge, found } => {
                write!(f, "color: host edge {host_edge:?} has color {found}")
            }
            Containment(e) => write!(
                f,
                "containment: host edge of pattern edge {e:?} misses its core image"
            ),
            Trace(e) => write!(
                f,
                "trace: host edge of pattern edge {e:?} meets the core elsewhere"
            ),
            Extra(msg) => write!(f, "extra: {msg}"),
            ShadowPair(a, b) => write!(f, "shadow: no hyperedge of the color covers {{{a},{b}}}"),
        }
    }
}

/// Re-checks a witness against the coloring, independently of the detectors.
pub fn verify_witness(
    c: &Coloring,
    w: &Witness,
    spec: &PatternSpec,
) -> Result<(), WitnessViolation> {
    use WitnessViolation as V;
    if w.kind != spec.kind {
        return Err(V::Kind {
            expected: spec.kind,
            found: w.kind,
        });
    }
    if w.color as usize >= c.k() {
        return Err(V::ColorRange(w.color));
    }
    if spec.s() > c.r() {
        return Err(V::Uniformity);
    }
    let pattern = &spec.pattern;
    if w.core.len() != pattern.t() {
        return Err(V::CoreSize {
            expected: pattern.t(),
            found: w.core.len(),
        });
    }
    let mut core_set = 0u64;
    for &v in &w.core {
        if v >= c.n() {
            return Err(V::CoreRange(v));
        }
        if core_set >> v & 1 == 1 {
            return Err(V::CoreInjectivity(v));
        }
        core_set |= 1 << v;
    }
    let map = |pe: &[usize]| pe.iter().fold(0u64, |m, &v| m | 1 << w.core[v]);

    if spec.kind == Kind::Shadow {
        for pe in pattern.edges() {
            let pair: Vec<usize> = pe.to_vec();
            let need = map(&pair);
            let covered = c
                .edges()
                .any(|(e, col)| col == w.color && e.mask() & need == need);
            if !covered {
                return Err(V::ShadowPair(w.core[pair[0]], w.core[pair[1]]));
            }
        }
        return Ok(());
    }

    if w.edges.len() != pattern.edge_count() {
        return Err(V::EdgeCount {
            expected: pattern.edge_count(),
            found: w.edges.len(),
        });
    }
    let mut seen_pattern = Vec::new();
    let mut seen_host = Vec::new();
    let mut hosts = Vec::with_capacity(w.edges.len());
    for a in &w.edges {
        let pe = Edge::from_vertices(&a.pattern_edge)
            .map_err(|_| V::PatternEdge(a.pattern_edge.clone()))?;
        if !pattern.edges().contains(&pe) || seen_pattern.contains(&pe) {
            return Err(V::PatternEdge(a.pattern_edge.clone()));
        }
        seen_pattern.push(pe);
        let he = Edge::from_vertices(&a.host_edge).map_err(|_| V::HostEdge(a.host_edge.clone()))?;
        if he.len() != c.r() || he.span() > c.n() {
            return Err(V::HostEdge(a.host_edge.clone()));
        }
        if spec.kind == Kind::Berge && seen_host.contains(&he) {
            return Err(V::Injectivity(a.host_edge.clone()));
        }
        seen_host.push(he);
        let found = c
            .color_of(he)
            .map_err(|_| V::HostEdge(a.host_edge.clone()))?;
        if found != w.color {
            return Err(V::Color {
                host_edge: a.host_edge.clone(),
                found,
            });
        }
        let img = map(&a.pattern_edge);
        if he.mask() & img != img {
            return Err(V::Containment(a.pattern_edge.clone()));
        }
        if spec.kind != Kind::Berge && he.mask() & core_set != img {
            return Err(V::Trace(a.pattern_edge.clone()));
        }
        hosts.push((img, he.mask()));
    }
    let d = c.r() - spec.s();
    match spec.kind {
        Kind::Expansion => {
            let sets = match &w.extra {
                Some(Extra::PerEdge(sets)) => sets.clone(),
                Some(Extra::Shared(v)) if v.is_empty() && w.edges.is_empty() => Vec::new(),
                _ => return Err(V::Extra("expansion needs one outside set per edge".into())),
            };
            if sets.len() != hosts.len() {
                return Err(V::Extra(format!(
                    "{} outside sets for {} edges",
                    sets.len(),
                    hosts.len()
                )));
            }
            let mut used = 0u64;
            for (set, &(img, host)) in sets.iter().zip(&hosts) {
                let x = Edge::from_vertices(set)
                    .map_err(|_| V::Extra(format!("bad outside set {set:?}")))?;
                if x.len() != d {
                    return Err(V::Extra(format!(
                        "outside set {set:?} does not have {d} vertices"
                    )));
                }
                if x.mask() & core_set != 0 {
                    return Err(V::Extra(format!("outside set {set:?} meets the core")));
                }
                if x.mask() & used != 0 {
                    return Err(V::Extra(format!("outside set {set:?} overlaps another")));
                }
                if img | x.mask() != host {
                    return Err(V::Extra(format!(
                        "outside set {set:?} does not complete its host edge"
                    )));
                }
                used |= x.mask();
            }
        }
        Kind::Suspension => {
            let u = match &w.extra {
                Some(Extra::Shared(u)) => u.clone(),
                Some(Extra::PerEdge(v)) if v.is_empty() => Vec::new(),
                _ => return Err(V::Extra("suspension needs one shared outside set".into())),
            };
            let u = Edge::from_vertices(&u)
                .map_err(|_| V::Extra(format!("bad suspension set {u:?}")))?;
            if u.len() != d || u.mask() & core_set != 0 {
                return Err(V::Extra(format!(
                    "suspension set {u} must have {d} vertices outside the core"
                )));
            }
            if let Some(&(img, _)) = hosts.iter().find(|&&(img, host)| img | u.mask() != host) {
                return Err(V::Extra(format!(
                    "host edge over {} is not image plus {u}",
                    Edge(img)
                )));
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coloring_with_red(n: usize, red: &[&[usize]]) -> Coloring {
        let red: Vec<Edge> = red
            .iter()
            .map(|e| Edge::from_vertices(e).unwrap())
            .collect();
        Coloring::from_fn(n, 3, 2, |e| red.contains(&e) as u8).unwrap()
    }

    fn spec(text: &str) -> PatternSpec {
        text.parse().unwrap()
    }

    const RED: u8 = 1;
    const BLUE: u8 = 0;

    #[test]
    fn berge_small_cases() {
        let all_red = Coloring::monochromatic(4, 3, 2, RED).unwrap();
        assert!(detect_berge(&all_red, RED, &spec("berge:K3"))
            .unwrap()
            .is_some());
        let half = Coloring::new(4, 3, 2, vec![0, 1, 0, 1]).unwrap();
        for color in [BLUE, RED] {
            assert!(detect_berge(&half, color, &spec("berge:K3"))
                .unwrap()
                .is_none());
        }
        let one_blue = coloring_with_red(5, &[]);
        assert!(detect_berge(&one_blue, BLUE, &spec("berge:K2"))
            .unwrap()
            .is_some());
    }

    #[test]
    fn trace_cases() {
        let c = coloring_with_red(4, &[&[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let w = detect_trace(&c, RED, &spec("trace:K3")).unwrap().unwrap();
        assert_eq!(w.core, vec![0, 1, 2]);
        assert_eq!(verify_witness(&c, &w, &spec("trace:K3")), Ok(()));
        let single = coloring_with_red(3, &[&[0, 1, 2]]);
        assert!(detect_trace(&single, RED, &spec("trace:K3"))
            .unwrap()
            .is_none());
        let w = detect_trace(&single, RED, &spec("trace:K2"))
            .unwrap()
            .unwrap();
        assert_eq!(w.core, vec![0, 1]);
    }

    #[test]
    fn expansion_cases() {
        let c = coloring_with_red(6, &[&[0, 1, 3], &[0, 2, 4], &[1, 2, 5]]);
        let w = detect_expansion(&c, RED, &spec("expansion:K3"))
            .unwrap()
            .unwrap();
        assert_eq!(w.core, vec![0, 1, 2]);
        assert_eq!(
            w.extra,
            Some(Extra::PerEdge(vec![vec![3], vec![4], vec![5]]))
        );
        let shared = coloring_with_red(5, &[&[0, 1, 4], &[0, 2, 4], &[1, 2, 4]]);
        assert!(detect_expansion(&shared, RED, &spec("expansion:K3"))
            .unwrap()
            .is_none());
        assert!(detect_trace(&shared, RED, &spec("trace:K3"))
            .unwrap()
            .is_some());
        let blue = Coloring::monochromatic(9, 3, 2, BLUE).unwrap();
        let w = detect_expansion(&blue, BLUE, &spec("expansion:K3"))
            .unwrap()
            .unwrap();
        assert_eq!(verify_witness(&blue, &w, &spec("expansion:K3")), Ok(()));
    }

    #[test]
    fn expansion_with_two_outside_vertices() {
        let c = Coloring::monochromatic(9, 4, 2, RED).unwrap();
        let target = spec("expansion:K3");
        let w = detect_expansion(&c, RED, &target).unwrap().unwrap();
        assert_eq!(verify_witness(&c, &w, &target), Ok(()));
        let short = Coloring::monochromatic(8, 4, 2, RED).unwrap();
        assert!(detect_expansion(&short, RED, &target).unwrap().is_none());
    }

    #[test]
    fn suspension_cases() {
        let c = coloring_with_red(4, &[&[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let w = detect_suspension(&c, RED, &spec("suspension:K3"))
            .unwrap()
            .unwrap();
        assert_eq!(w.core, vec![0, 1, 2]);
        assert_eq!(w.extra, Some(Extra::Shared(vec![3])));
        assert!(detect_trace(&c, RED, &spec("trace:K3")).unwrap().is_some());
        assert!(detect_suspension(&c, RED, &spec("suspension:K4"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn shadow_cases() {
        let c = coloring_with_red(5, &[&[0, 1, 2]]);
        let w = detect_shadow(&c, RED, &spec("shadow:K3")).unwrap().unwrap();
        assert_eq!(w.core, vec![0, 1, 2]);
        let all = Coloring::monochromatic(5, 3, 2, RED).unwrap();
        assert!(detect_shadow(&all, RED, &spec("shadow:K5"))
            .unwrap()
            .is_some());
    }

    #[test]
    fn errors() {
        let c = Coloring::monochromatic(5, 3, 2, RED).unwrap();
        assert!(matches!(
            detect_berge(&c, RED, &spec("berge:K4^(4)")),
            Err(Error::UniformityMismatch { .. })
        ));
        assert!(matches!(
            detect_berge(&c, RED, &spec("trace:K3")),
            Err(Error::KindMismatch { .. })
        ));
        assert!(detect(&c, 2, &spec("berge:K3")).is_err());
    }

    #[test]
    fn tampered_witnesses() {
        let c = Coloring::monochromatic(5, 3, 2, RED).unwrap();
        let target = spec("berge:K3");
        let w = detect_berge(&c, RED, &target).unwrap().unwrap();
        assert_eq!(verify_witness(&c, &w, &target), Ok(()));

        let mut dup = w.clone();
        dup.edges[1].host_edge = dup.edges[0].host_edge.clone();
        assert!(matches!(
            verify_witness(&c, &dup, &target),
            Err(WitnessViolation::Injectivity(_))
        ));

        let mixed = Coloring::from_fn(5, 3, 2, |e| (e.mask() != 0b111) as u8).unwrap();
        let mut wrong = w.clone();
        wrong.edges[0].host_edge = vec![0, 1, 2];
        assert!(matches!(
            verify_witness(&mixed, &wrong, &target),
            Err(WitnessViolation::Color { .. })
        ));

        let mut bad_core = w;
        bad_core.core = vec![0, 0, 1];
        assert!(matches!(
            verify_witness(&c, &bad_core, &target),
            Err(WitnessViolation::CoreInjectivity(0))
        ));
    }

    #[test]
    fn detect_any_color_order() {
        let all_red = Coloring::monochromatic(4, 3, 2, RED).unwrap();
        let targets = [Some(spec("berge:K2")), Some(spec("berge:K3"))];
        let (color, _) = detect_any(&all_red, &targets).unwrap().unwrap();
        assert_eq!(color, RED);
        let half = Coloring::new(4, 3, 2, vec![0, 1, 0, 1]).unwrap();
        let diag = [Some(spec("berge:K3")), Some(spec("berge:K3"))];
        assert!(detect_any(&half, &diag).unwrap().is_none());
        let (color, _) = detect_any(&half, &[Some(spec("berge:K2")), None])
            .unwrap()
            .unwrap();
        assert_eq!(color, BLUE);
        assert!(detect_any(&half, &diag[..1]).is_err());
    }

    #[test]
    fn non_clique_pattern() {
        // Path 0-1-2 needs two hyperedges sharing the middle vertex's pair partners.
        let c = coloring_with_red(4, &[&[0, 1, 2], &[1, 2, 3]]);
        let path = spec("berge:G3{0-1,1-2}");
        let w = detect_berge(&c, RED, &path).unwrap().unwrap();
        assert_eq!(verify_witness(&c, &w, &path), Ok(()));
        let star = spec("berge:G4{0-1,0-2,0-3}");
        assert!(detect_berge(&c, RED, &star).unwrap().is_none());
    }

    #[test]
    fn witness_json_shape() {
        let c = coloring_with_red(4, &[&[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let w = detect_suspension(&c, RED, &spec("suspension:K3"))
            .unwrap()
            .unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["kind"], "suspension");
        assert_eq!(json["extra"], serde_json::json!([3]));
        assert_eq!(json["edges"][0]["pattern_edge"], serde_json::json!([0, 1]));
        let back: Witness = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
    }
}
