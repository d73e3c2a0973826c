//! Complete r-uniform hypergraphs on at most 64 vertices.
//!
//! Hyperedges are bitmasks over the vertex set. Ordering the r-subsets by
//! their mask value gives colex order, so the hyperedges spanned by the first
//! m vertices always form a prefix of the edge list.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_VERTICES: usize = 64;

const fn pascal() -> [[u64; 65]; 65] {
    let mut t = [[0u64; 65]; 65];
    let mut n = 0;
    while n <= 64 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1].saturating_add(if k < n { t[n - 1][k] } else { 0 });
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; 65]; 65] = pascal();

/// `C(n, k)`, zero when `k > n`. Panics if `n > 64`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOMIAL[n][k]
    }
}

/// Number of hyperedges of the complete r-uniform hypergraph on n vertices.
#[inline]
pub fn edge_count(n: usize, r: usize) -> usize {
    binomial(n, r) as usize
}

/// Iterates the set bits of a mask in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// A set of vertices stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub u64);

impl Edge {
    pub fn from_vertices(vertices: &[usize]) -> Result<Edge> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= MAX_VERTICES {
                return Err(Error::InvalidEdge(format!("vertex {v} out of range")));
            }
            if mask & (1 << v) != 0 {
                return Err(Error::InvalidEdge(format!("vertex {v} repeated")));
            }
            mask |= 1 << v;
        }
        Ok(Edge(mask))
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Edge) -> bool {
        self.0 & !other.0 == 0
    }

    /// One past the largest vertex, i.e. the smallest m with the edge inside [m].
    #[inline]
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn vertices(self) -> Bits {
        Bits(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Colex rank of a hyperedge within `E(K_n^(r))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

fn check_params(n: usize, r: usize) -> Result<()> {
    if r < 2 {
        return Err(invalid(format!("uniformity r = {r} must be at least 2")));
    }
    if n > MAX_VERTICES {
        return Err(invalid(format!(
            "n = {n} exceeds the {MAX_VERTICES}-vertex limit"
        )));
    }
    Ok(())
}

/// Next mask with the same popcount (Gosper's hack); `None` on overflow.
#[inline]
fn next_same_weight(x: u64) -> Option<u64> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// All `size`-subsets of `[n]` in colex order, without parameter checks.
pub(crate) fn subsets(n: usize, size: usize) -> Vec<Edge> {
    Colex::new(n, size).map(Edge).collect()
}

/// Lazily enumerates the `size`-subsets of `[n]` as masks, in colex order.
pub(crate) struct Colex {
    next: Option<u64>,
    remaining: u64,
}

impl Colex {
    pub(crate) fn new(n: usize, size: usize) -> Colex {
        let remaining = binomial(n, size);
        let first = match size {
            0 => 0,
            64 => u64::MAX,
            _ => (1u64 << size) - 1,
        };
        Colex {
            next: (remaining > 0).then_some(first),
            remaining,
        }
    }
}

impl Iterator for Colex {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let x = self.next?;
        self.remaining -= 1;
        self.next = if self.remaining == 0 || x == 0 {
            None
        } else {
            next_same_weight(x)
        };
        Some(x)
    }
}

/// Every r-subset of `[n]`, in strictly increasing colex order.
pub fn complete_edge_set(n: usize, r: usize) -> Result<Vec<Edge>> {
    check_params(n, r)?;
    if r > n {
        return Err(invalid(format!("uniformity r = {r} exceeds n = {n}")));
    }
    Ok(subsets(n, r))
}

/// Colex rank without validation. `edge` must be a subset of `[64]`.
#[inline]
pub fn rank_unchecked(edge: Edge) -> usize {
    let mut rank = 0u64;
    for (i, v) in edge.vertices().enumerate() {
        rank += binomial(v, i + 1);
    }
    rank as usize
}

/// Colex rank of an r-subset of `[n]`.
pub fn edge_rank(edge: Edge, n: usize) -> Result<EdgeId> {
    if edge.is_empty() {
        return Err(Error::InvalidEdge("empty edge".into()));
    }
    if edge.span() > n {
        return Err(Error::InvalidEdge(format!(
            "{edge} is not a subset of [{n}]"
        )));
    }
    Ok(EdgeId(rank_unchecked(edge)))
}

/// Inverse of [`edge_rank`] for r-subsets.
pub fn edge_unrank(id: EdgeId, r: usize) -> Edge {
    let mut rank = id.0 as u64;
    let mut mask = 0u64;
    let mut hi = 64;
    for i in (1..=r).rev() {
        let mut c = i - 1;
        while c + 1 < hi && binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        mask |= 1 << c;
        hi = c;
    }
    Edge(mask)
}

/// An assignment of one of `k` colors to every hyperedge of `K_n^(r)`.
///
/// `colors[i]` is the color of the hyperedge with colex rank `i`. When
/// `n < r` the hypergraph has no hyperedges and `colors` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    r: usize,
    k: u16,
    colors: Vec<u8>,
}

/// Interchange form of a coloring: `{"n", "r", "k", "colors"}`, 0-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub colors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringViolation {
    Parameters(String),
    Length {
        expected: usize,
        found: usize,
    },
    ColorRange {
        index: usize,
        color: usize,
        k: usize,
    },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringViolation::Parameters(msg) => write!(f, "parameters: {msg}"),
            ColoringViolation::Length { expected, found } => {
                write!(f, "length: expected {expected} colors, found {found}")
            }
            ColoringViolation::ColorRange { index, color, k } => {
                write!(f, "color-range: entry {index} has color {color}, k = {k}")
            }
        }
    }
}

/// Checks the coloring invariants, reporting the first violation.
pub fn validate_coloring(doc: &ColoringDoc) -> Result<(), ColoringViolation> {
    if doc.r < 2 {
        return Err(ColoringViolation::Parameters(format!("r = {} < 2", doc.r)));
    }
    if doc.n > MAX_VERTICES {
        return Err(ColoringViolation::Parameters(format!(
            "n = {} > {MAX_VERTICES}",
            doc.n
        )));
    }
    if !(2..=256).contains(&doc.k) {
        return Err(ColoringViolation::Parameters(format!(
            "k = {} outside [2, 256]",
            doc.k
        )));
    }
    let expected = edge_count(doc.n, doc.r);
    if doc.colors.len() != expected {
        return Err(ColoringViolation::Length {
            expected,
            found: doc.colors.len(),
        });
    }
    if let Some((index, &color)) = doc.colors.iter().enumerate().find(|(_, &c)| c >= doc.k) {
        return Err(ColoringViolation::ColorRange {
            index,
            color,
            k: doc.k,
        });
    }
    Ok(())
}

impl Coloring {
    pub fn new(n: usize, r: usize, k: usize, colors: Vec<u8>) -> Result<Coloring> {
        let doc = ColoringDoc {
            n,
            r,
            k,
            colors: colors.iter().map(|&c| c as usize).collect(),
        };
        validate_coloring(&doc).map_err(|v| invalid(v.to_string()))?;
        Ok(Coloring {
            n,
            r,
            k: k as u16,
            colors,
        })
    }

    /// Colors every hyperedge with `f(edge)`.
    pub fn from_fn(
        n: usize,
        r: usize,
        k: usize,
        mut f: impl FnMut(Edge) -> u8,
    ) -> Result<Coloring> {
        check_params(n, r)?;
        let colors = subsets(n, r).into_iter().map(&mut f).collect();
        Coloring::new(n, r, k, colors)
    }

    pub fn monochromatic(n: usize, r: usize, k: usize, color: u8) -> Result<Coloring> {
        Coloring::from_fn(n, r, k, |_| color)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of colors.
    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color_at(&self, id: EdgeId) -> u8 {
        self.colors[id.0]
    }

    /// Color of an r-subset of `[n]`.
    pub fn color_of(&self, edge: Edge) -> Result<u8> {
        if edge.len() != self.r {
            return Err(Error::InvalidEdge(format!(
                "{edge} is not an {}-subset",
                self.r
            )));
        }
        Ok(self.colors[edge_rank(edge, self.n)?.0])
    }

    /// Hyperedges paired with their colors, in colex order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, u8)> + '_ {
        subsets(self.n, self.r)
            .into_iter()
            .zip(self.colors.iter().copied())
    }

    pub fn color_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k()];
        for &c in &self.colors {
            counts[c as usize] += 1;
        }
        counts
    }

    /// Restriction to the first `m` vertices (a colex prefix).
    pub fn restrict(&self, m: usize) -> Result<Coloring> {
        if m > self.n {
            return Err(invalid(format!(
                "cannot restrict {} vertices to {m}",
                self.n
            )));
        }
        Coloring::new(
            m,
            self.r,
            self.k(),
            self.colors[..edge_count(m, self.r)].to_vec(),
        )
    }

    /// Applies a permutation of the color labels.
    pub fn relabel_colors(&self, map: &[u8]) -> Result<Coloring> {
        if map.len() != self.k() {
            return Err(invalid("color map length differs from k"));
        }
        Coloring::new(
            self.n,
            self.r,
            self.k(),
            self.colors.iter().map(|&c| map[c as usize]).collect(),
        )
    }

    pub fn to_doc(&self) -> ColoringDoc {
        ColoringDoc {
            n: self.n,
            r: self.r,
            k: self.k(),
            colors: self.colors.iter().map(|&c| c as usize).collect(),
        }
    }

    pub fn from_doc(doc: &ColoringDoc) -> Result<Coloring> {
        validate_coloring(doc).map_err(|v| invalid(v.to_string()))?;
        Coloring::new(
            doc.n,
            doc.r,
            doc.k,
            doc.colors.iter().map(|&c| c as u8).collect(),
        )
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ColoringDoc::deserialize(d)?;
        Coloring::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

/// A coloring of the colex prefix of length `assigned`; later hyperedges are blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    n: usize,
    r: usize,
    k: usize,
    colors: Vec<u8>,
}

impl PartialColoring {
    pub fn new(n: usize, r: usize, k: usize, prefix: Vec<u8>) -> Result<PartialColoring> {
        check_params(n, r)?;
        if !(2..=256).contains(&k) {
            return Err(invalid(format!("k = {k} outside [2, 256]")));
        }
        if prefix.len() > edge_count(n, r) {
            return Err(invalid("prefix longer than the edge set"));
        }
        if prefix.iter().any(|&c| c as usize >= k) {
            return Err(invalid("prefix color out of range"));
        }
        Ok(PartialColoring {
            n,
            r,
            k,
            colors: prefix,
        })
    }

    pub fn empty(n: usize, r: usize, k: usize) -> Result<PartialColoring> {
        PartialColoring::new(n, r, k, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Length of the colored prefix.
    pub fn assigned(&self) -> usize {
        self.colors.len()
    }

    pub fn prefix(&self) -> &[u8] {
        &self.colors
    }

    pub fn is_complete(&self) -> bool {
        self.colors.len() == edge_count(self.n, self.r)
    }

    pub fn push(&mut self, color: u8) -> Result<()> {
        if self.is_complete() || color as usize >= self.k {
            return Err(invalid("cannot extend partial coloring"));
        }
        self.colors.push(color);
        Ok(())
    }

    pub fn into_coloring(self) -> Result<Coloring> {
        Coloring::new(self.n, self.r, self.k, self.colors)
    }
}

impl From<&Coloring> for PartialColoring {
    fn from(c: &Coloring) -> Self {
        PartialColoring {
            n: c.n,
            r: c.r,
            k: c.k(),
            colors: c.colors.clone(),
        }
    }
}

/// A bijection on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Permutation> {
        let n = image.len();
        if n > MAX_VERTICES {
            return Err(invalid("permutation longer than 64"));
        }
        let mut seen = 0u64;
        for &v in &image {
            if v >= n || seen >> v & 1 == 1 {
                return Err(invalid(format!("{image:?} is not a permutation")));
            }
            seen |= 1 << v;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The transposition of `a` and `b` on `[n]`.
    pub fn swap(n: usize, a: usize, b: usize) -> Permutation {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation {
            image: inner.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn map_edge(&self, edge: Edge) -> Edge {
        Edge(edge.vertices().fold(0u64, |m, v| m | 1 << self.image[v]))
    }
}

/// Relabels vertices: the result colors `p(e)` with the color `c` gave `e`.
pub fn apply_permutation(c: &Coloring, p: &Permutation) -> Result<Coloring> {
    if p.len() != c.n {
        return Err(invalid(format!(
            "permutation on {} points applied to a coloring on {} vertices",
            p.len(),
            c.n
        )));
    }
    let mut colors = vec![0u8; c.colors.len()];
    for (edge, color) in c.edges() {
        colors[rank_unchecked(p.map_edge(edge))] = color;
    }
    Coloring::new(c.n, c.r, c.k(), colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(vs: &[usize]) -> Edge {
        Edge::from_vertices(vs).unwrap()
    }

    #[test]
    fn colex_order_small() {
        let edges = complete_edge_set(4, 3).unwrap();
        assert_eq!(
            edges,
            vec![e(&[0, 1, 2]), e(&[0, 1, 3]), e(&[0, 2, 3]), e(&[1, 2, 3])]
        );
        assert_eq!(complete_edge_set(3, 3).unwrap(), vec![e(&[0, 1, 2])]);
        assert_eq!(complete_edge_set(6, 4).unwrap().len(), 15);
    }

    #[test]
    fn colex_iterator_edge_cases() {
        assert_eq!(Colex::new(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(Colex::new(2, 3).count(), 0);
        assert_eq!(Colex::new(64, 63).count(), 64);
        assert_eq!(Colex::new(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
    }

    #[test]
    fn edge_set_rejects_bad_params() {
        assert!(complete_edge_set(3, 4).is_err());
        assert!(complete_edge_set(5, 1).is_err());
        assert!(complete_edge_set(65, 3).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(edge_rank(e(&[0, 1, 2]), 4).unwrap(), EdgeId(0));
        assert_eq!(edge_rank(e(&[1, 2, 3]), 4).unwrap(), EdgeId(3));
        assert!(edge_rank(e(&[1, 2, 5]), 4).is_err());
        assert!(edge_rank(Edge(0), 4).is_err());
    }

    #[test]
    fn rank_unrank_exhaustive() {
        for n in 2..=10 {
            for r in 2..=5.min(n) {
                for (i, edge) in complete_edge_set(n, r).unwrap().into_iter().enumerate() {
                    assert_eq!(edge_rank(edge, n).unwrap(), EdgeId(i));
                    assert_eq!(edge_unrank(EdgeId(i), r), edge);
                }
            }
        }
    }

    #[test]
    fn colex_prefix_is_subhypergraph() {
        let all = complete_edge_set(9, 3).unwrap();
        for m in 3..=9 {
            let prefix = &all[..edge_count(m, 3)];
            assert!(prefix.iter().all(|edge| edge.span() <= m));
        }
    }

    #[test]
    fn validation_reports() {
        let ok = ColoringDoc {
            n: 4,
            r: 3,
            k: 2,
            colors: vec![0, 1, 0, 1],
        };
        assert_eq!(validate_coloring(&ok), Ok(()));
        let short = ColoringDoc {
            colors: vec![0, 1, 0],
            ..ok.clone()
        };
        assert_eq!(
            validate_coloring(&short),
            Err(ColoringViolation::Length {
                expected: 4,
                found: 3
            })
        );
        let range = ColoringDoc {
            colors: vec![0, 1, 2, 1],
            ..ok
        };
        assert_eq!(
            validate_coloring(&range),
            Err(ColoringViolation::ColorRange {
                index: 2,
                color: 2,
                k: 2
            })
        );
    }

    #[test]
    fn empty_host_when_r_exceeds_n() {
        let c = Coloring::new(2, 3, 2, vec![]).unwrap();
        assert!(c.is_empty());
        assert!(Coloring::new(2, 3, 2, vec![0]).is_err());
    }

    #[test]
    fn permutation_identity_and_inverse() {
        let c = Coloring::from_fn(6, 3, 2, |e| (e.mask() % 3 == 0) as u8).unwrap();
        let id = Permutation::identity(6);
        assert_eq!(apply_permutation(&c, &id).unwrap(), c);
        let p = Permutation::new(vec![3, 0, 5, 1, 2, 4]).unwrap();
        let back = apply_permutation(&apply_permutation(&c, &p).unwrap(), &p.inverse()).unwrap();
        assert_eq!(back, c);
        assert!(apply_permutation(&c, &Permutation::identity(5)).is_err());
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn coloring_json_round_trip() {
        let c = Coloring::new(4, 3, 2, vec![0, 1, 1, 0]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"n":4,"r":3,"k":2,"colors":[0,1,1,0]}"#);
        let back: Coloring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Coloring>(r#"{"n":4,"r":3,"k":2,"colors":[0,1]}"#).is_err());
    }
}
