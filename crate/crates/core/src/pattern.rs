//! Target structures: a structure kind applied to an s-uniform pattern hypergraph.
//!
//! Text grammar, used by the CLI and by every JSON document that names a
//! target:
//!
//! ```text
//! <kind>:K<t>                 clique K_t (graph, s = 2)
//! <kind>:K<t>^(<s>)           complete s-uniform K_t^(s)
//! <kind>:G<t>{0-1,1-2,...}    explicit edge list on t vertices (s inferred, or G<t>^(<s>){...})
//! ```
//!
//! `<kind>` is one of `berge`, `trace`, `expansion`, `suspension`, `shadow`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{binomial, subsets, Bits, Edge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Berge,
    Trace,
    Expansion,
    Suspension,
    Shadow,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Berge,
        Kind::Trace,
        Kind::Expansion,
        Kind::Suspension,
        Kind::Shadow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Berge => "berge",
            Kind::Trace => "trace",
            Kind::Expansion => "expansion",
            Kind::Suspension => "suspension",
            Kind::Shadow => "shadow",
        }
    }

    /// Prefix used in mathematical notation (`BK_4`, `∂K_3`, ...).
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Berge => "B",
            Kind::Trace => "T",
            Kind::Expansion => "H",
            Kind::Suspension => "S",
            Kind::Shadow => "∂",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown structure kind `{s}`")))
    }
}

/// An s-uniform hypergraph on pattern vertices `0..t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    t: usize,
    s: usize,
    edges: Vec<Edge>,
}

/// File form of an explicit pattern: `{"t": 4, "s": 2, "edges": [[0,1],[1,2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDoc {
    pub t: usize,
    pub s: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Pattern {
    /// The complete s-uniform hypergraph `K_t^(s)`.
    pub fn clique(t: usize, s: usize) -> Result<Pattern> {
        if s < 2 || t < s || t > 64 {
            return Err(invalid(format!(
                "clique K_{t}^({s}) needs 2 <= s <= t <= 64"
            )));
        }
        if binomial(t, s) > 1 << 16 {
            return Err(invalid(format!("K_{t}^({s}) has too many edges")));
        }
        Ok(Pattern {
            t,
            s,
            edges: subsets(t, s),
        })
    }

    pub fn from_edges(t: usize, s: usize, edges: &[Vec<usize>]) -> Result<Pattern> {
        if s < 2 || t < s || t > 64 {
            return Err(invalid(format!(
                "pattern needs 2 <= s <= t <= 64 (t = {t}, s = {s})"
            )));
        }
        if edges.is_empty() {
            return Err(invalid("pattern has no edges"));
        }
        let mut masks = Vec::with_capacity(edges.len());
        for e in edges {
            let edge = Edge::from_vertices(e)?;
            if edge.len() != s || edge.span() > t {
                return Err(Error::InvalidEdge(format!(
                    "pattern edge {e:?} is not an {s}-subset of [{t}]"
                )));
            }
            masks.push(edge);
        }
        masks.sort();
        if masks.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("pattern has a repeated edge"));
        }
        Ok(Pattern { t, s, edges: masks })
    }

    pub fn from_doc(doc: &PatternDoc) -> Result<Pattern> {
        Pattern::from_edges(doc.t, doc.s, &doc.edges)
    }

    pub fn to_doc(&self) -> PatternDoc {
        PatternDoc {
            t: self.t,
            s: self.s,
            edges: self.edges.iter().map(|e| e.to_vec()).collect(),
        }
    }

    /// Number of pattern vertices.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Pattern uniformity.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Pattern edges as masks over pattern vertices, in colex order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when the pattern is `K_t^(s)`.
    pub fn is_complete(&self) -> bool {
        self.edges.len() as u64 == binomial(self.t, self.s)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.is_complete() { 'K' } else { 'G' };
        write!(f, "{head}{}", self.t)?;
        if self.s != 2 {
            write!(f, "^({})", self.s)?;
        }
        if !self.is_complete() {
            f.write_str("{")?;
            for (i, e) in self.edges.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                let vs: Vec<String> = Bits(e.mask()).map(|v| v.to_string()).collect();
                f.write_str(&vs.join("-"))?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Pattern> {
        let bad = || Error::Parse(format!("malformed pattern `{text}`"));
        let (head, rest) = text.split_at(text.chars().next().map_or(0, char::len_utf8));
        let complete = match head {
            "K" => true,
            "G" => false,
            _ => return Err(bad()),
        };
        let digits = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        let t: usize = rest[..digits].parse().map_err(|_| bad())?;
        let mut rest = &rest[digits..];
        let mut s = None;
        if let Some(tail) = rest.strip_prefix("^(") {
            let close = tail.find(')').ok_or_else(bad)?;
            s = Some(tail[..close].parse::<usize>().map_err(|_| bad())?);
            rest = &tail[close + 1..];
        }
        if complete {
            if !rest.is_empty() {
                return Err(bad());
            }
            return Pattern::clique(t, s.unwrap_or(2));
        }
        let body = rest
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(bad)?;
        let edges = body
            .split(',')
            .map(|e| {
                e.split('-')
                    .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let s = s.unwrap_or_else(|| edges.first().map_or(2, Vec::len));
        Pattern::from_edges(t, s, &edges)
    }
}

/// A target: structure kind plus pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    pub kind: Kind,
    pub pattern: Pattern,
}

impl PatternSpec {
    pub fn new(kind: Kind, pattern: Pattern) -> Result<PatternSpec> {
        if kind == Kind::Shadow && pattern.s() != 2 {
            return Err(invalid("shadow targets need a graph pattern (s = 2)"));
        }
        Ok(PatternSpec { kind, pattern })
    }

    /// `kind` applied to `K_t` (s = 2).
    pub fn clique(kind: Kind, t: usize) -> Result<PatternSpec> {
        PatternSpec::new(kind, Pattern::clique(t, 2)?)
    }

    pub fn berge(t: usize) -> PatternSpec {
        PatternSpec::clique(Kind::Berge, t).expect("valid Berge clique")
    }

    pub fn s(&self) -> usize {
        self.pattern.s()
    }

    pub fn t(&self) -> usize {
        self.pattern.t()
    }

    /// Compact notation such as `BK4`, `TK5^(3)` or `∂K3`.
    pub fn short(&self) -> String {
        format!("{}{}", self.kind.symbol(), self.pattern)
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.pattern)
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<PatternSpec> {
        let (kind, pattern) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("target `{text}` lacks `<kind>:`")))?;
        PatternSpec::new(kind.trim().parse()?, pattern.trim().parse()?)
    }
}

impl Serialize for PatternSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Renders a per-color target list as `BK3/BK4` (`-` for an unconstrained color).
pub fn targets_short(targets: &[Option<PatternSpec>]) -> String {
    targets
        .iter()
        .map(|t| {
            t.as_ref()
                .map_or_else(|| "-".to_string(), PatternSpec::short)
        })
        .collect::<Vec<_>>()
        .join("/")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_clique_forms() {
        let p: PatternSpec = "berge:K4".parse().unwrap();
        assert_eq!(p.kind, Kind::Berge);
        assert_eq!((p.t(), p.s(), p.pattern.edge_count()), (4, 2, 6));
        let p: PatternSpec = "trace:K5^(3)".parse().unwrap();
        assert_eq!((p.t(), p.s(), p.pattern.edge_count()), (5, 3, 10));
        assert!(p.pattern.is_complete());
        assert_eq!(p.to_string(), "trace:K5^(3)");
        assert_eq!("shadow:K3".parse::<PatternSpec>().unwrap().short(), "∂K3");
    }

    #[test]
    fn parse_explicit_edges() {
        let p: PatternSpec = "berge:G4{0-1,1-2,2-3}".parse().unwrap();
        assert!(!p.pattern.is_complete());
        assert_eq!(p.pattern.edge_count(), 3);
        assert_eq!(p.to_string(), "berge:G4{0-1,1-2,2-3}");
        let q: PatternSpec = "suspension:G4^(3){0-1-2,1-2-3}".parse().unwrap();
        assert_eq!(q.s(), 3);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "berge",
            "berg:K4",
            "berge:K",
            "berge:X4",
            "shadow:K4^(3)",
            "berge:K1",
            "berge:G3{0-5}",
        ] {
            assert!(bad.parse::<PatternSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn render_parse_round_trip_all_kinds() {
        for kind in Kind::ALL {
            for (t, s) in [(2, 2), (3, 2), (5, 2), (4, 3), (6, 4)] {
                if kind == Kind::Shadow && s != 2 {
                    continue;
                }
                let spec = PatternSpec::new(kind, Pattern::clique(t, s).unwrap()).unwrap();
                assert_eq!(spec.to_string().parse::<PatternSpec>().unwrap(), spec);
            }
            let path = PatternSpec::new(
                kind,
                Pattern::from_edges(4, 2, &[vec![2, 3], vec![0, 1]]).unwrap(),
            )
            .unwrap();
            assert_eq!(path.to_string().parse::<PatternSpec>().unwrap(), path);
        }
    }

    #[test]
    fn serde_as_grammar_string() {
        let p = PatternSpec::berge(4);
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"berge:K4\"");
        let back: PatternSpec = serde_json::from_str("\"berge:K4\"").unwrap();
        assert_eq!(back, p);
    }
}
