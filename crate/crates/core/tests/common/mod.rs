//! Slow reference implementations used as test oracles.
//!
//! Each containment test follows the textbook definition directly: try every
//! placement of the pattern vertices and check the defining condition. The
//! Berge oracle uses Hall's condition over all subsets of pattern edges
//! instead of an augmenting-path matching.

#![allow(dead_code)]

use berge_ramsey::hypergraph::{binomial, Coloring};
use berge_ramsey::pattern::{Kind, PatternSpec};
use berge_ramsey::search::berge_targets;
use rand::Rng;

/// Ordered injective maps `[t] -> [n]`; increasing ones only when `increasing`.
fn placements(n: usize, t: usize, increasing: bool, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        n: usize,
        t: usize,
        increasing: bool,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == t {
            return f(cur);
        }
        let start = if increasing {
            cur.last().map_or(0, |&v| v + 1)
        } else {
            0
        };
        for v in start..n {
            if cur.contains(&v) {
                continue;
            }
            cur.push(v);
            if rec(n, t, increasing, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(n, t, increasing, &mut Vec::new(), f)
}

fn subsets_of(set: u64, size: usize) -> Vec<u64> {
    let items: Vec<u64> = (0..64)
        .filter(|&v| set >> v & 1 == 1)
        .map(|v| 1u64 << v)
        .collect();
    let mut out = Vec::new();
    fn rec(items: &[u64], size: usize, acc: u64, out: &mut Vec<u64>) {
        if size == 0 {
            out.push(acc);
            return;
        }
        for (i, &x) in items.iter().enumerate() {
            rec(&items[i + 1..], size - 1, acc | x, out);
        }
    }
    rec(&items, size, 0, &mut out);
    out
}

fn hall(candidates: &[Vec<usize>]) -> bool {
    let m = candidates.len();
    (1u32..1 << m).all(|sub| {
        let mut union: Vec<usize> = (0..m)
            .filter(|i| sub >> i & 1 == 1)
            .flat_map(|i| candidates[i].iter().copied())
            .collect();
        union.sort_unstable();
        union.dedup();
        union.len() >= sub.count_ones() as usize
    })
}

fn disjoint_pick(options: &[Vec<u64>], used: u64) -> bool {
    match options.split_first() {
        None => true,
        Some((first, rest)) => first
            .iter()
            .any(|&x| x & used == 0 && disjoint_pick(rest, used | x)),
    }
}

/// Whether color `color` of `c` contains `spec`, by exhaustive search.
pub fn brute_contains(c: &Coloring, color: u8, spec: &PatternSpec) -> bool {
    let class: Vec<u64> = c
        .edges()
        .filter(|&(_, col)| col == color)
        .map(|(e, _)| e.mask())
        .collect();
    let n = c.n();
    let r = c.r();
    let pattern = &spec.pattern;
    placements(n, pattern.t(), pattern.is_complete(), &mut |phi| {
        let core: u64 = phi.iter().fold(0, |m, &v| m | 1 << v);
        let images: Vec<u64> = pattern
            .edges()
            .iter()
            .map(|pe| pe.vertices().fold(0, |m, v| m | 1 << phi[v]))
            .collect();
        match spec.kind {
            Kind::Berge => {
                let candidates: Vec<Vec<usize>> = images
                    .iter()
                    .map(|&h| (0..class.len()).filter(|&j| class[j] & h == h).collect())
                    .collect();
                hall(&candidates)
            }
            Kind::Trace => images.iter().all(|&h| class.iter().any(|&e| e & core == h)),
            Kind::Expansion => {
                let outs: Vec<Vec<u64>> = images
                    .iter()
                    .map(|&h| {
                        class
                            .iter()
                            .filter(|&&e| e & core == h)
                            .map(|&e| e & !core)
                            .collect()
                    })
                    .collect();
                disjoint_pick(&outs, 0)
            }
            Kind::Suspension => {
                let outside = ((1u64 << n) - 1) & !core;
                subsets_of(outside, r - pattern.s())
                    .into_iter()
                    .any(|u| images.iter().all(|&h| class.contains(&(h | u))))
            }
            Kind::Shadow => images.iter().all(|&h| class.iter().any(|&e| e & h == h)),
        }
    })
}

pub fn brute_any(c: &Coloring, targets: &[Option<PatternSpec>]) -> bool {
    targets.iter().enumerate().any(|(color, t)| {
        t.as_ref()
            .is_some_and(|spec| brute_contains(c, color as u8, spec))
    })
}

/// Every coloring of K_n^(r) with k colors, as color words.
pub fn all_words(n: usize, r: usize, k: usize) -> impl Iterator<Item = Vec<u8>> {
    let len = binomial(n, r) as u32;
    let total = (k as u64).pow(len);
    (0..total).map(move |mut x| {
        (0..len)
            .map(|_| {
                let d = (x % k as u64) as u8;
                x /= k as u64;
                d
            })
            .collect()
    })
}

/// Arrowing by brute force over all colorings.
pub fn naive_arrows(n: usize, r: usize, targets: &[Option<PatternSpec>]) -> bool {
    all_words(n, r, targets.len())
        .all(|w| brute_any(&Coloring::new(n, r, targets.len(), w).unwrap(), targets))
}

pub fn random_coloring(rng: &mut impl Rng, n: usize, r: usize, k: usize) -> Coloring {
    let len = binomial(n, r) as usize;
    Coloring::new(
        n,
        r,
        k,
        (0..len).map(|_| rng.gen_range(0..k) as u8).collect(),
    )
    .unwrap()
}

pub fn clique(kind: Kind, t: usize) -> PatternSpec {
    PatternSpec::clique(kind, t).unwrap()
}

pub fn bk(sizes: &[usize]) -> Vec<Option<PatternSpec>> {
    berge_targets(sizes)
}

/// The implications between clique structures that hold in every coloring.
pub const NESTING: &[(Kind, Kind)] = &[
    (Kind::Expansion, Kind::Trace),
    (Kind::Suspension, Kind::Trace),
    (Kind::Trace, Kind::Berge),
    (Kind::Berge, Kind::Shadow),
];
