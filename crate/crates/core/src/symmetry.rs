//! Lex-leader symmetry breaking over vertex (and optionally color) relabelings.
//!
//! A group element `(π, σ)` sends the color word `w` to `w'` with
//! `w'[j] = σ(w[rank(π⁻¹(e_j))])`, i.e. the coloring relabeled by `π` with its
//! colors renamed by `σ`. A prefix is a lex-leader when no element provably
//! maps it to a strictly smaller word.

use crate::error::{invalid, Result};
use crate::hypergraph::{edge_count, rank_unchecked, Colex, Edge, PartialColoring, Permutation};

/// Up to this many vertices the whole of S_n is used; above it only the
/// transpositions (still sound, just weaker).
pub const FULL_GROUP_MAX_N: usize = 8;

const FULL_COLOR_GROUP_MAX_K: usize = 4;

/// Finite set of `(vertex permutation, color permutation)` pairs, stored as
/// precomputed edge maps.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    edges: usize,
    /// `edge_maps[p * edges + j] = rank(π_p⁻¹(e_j))`.
    edge_maps: Vec<u16>,
    vertex_perms: usize,
    color_perms: Vec<Vec<u8>>,
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn transpositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect()];
    for b in 1..n {
        for a in 0..b {
            out.push(Permutation::swap(n, a, b).image().to_vec());
        }
    }
    out
}

impl SymmetryGroup {
    /// Vertex relabelings of K_n^(r), combined with all color renamings when
    /// `color_symmetric` (every color has the same target).
    pub fn new(n: usize, r: usize, k: usize, color_symmetric: bool) -> Result<SymmetryGroup> {
        let edges = edge_count(n, r);
        if edges > u16::MAX as usize {
            return Err(invalid(format!(
                "K_{n}^({r}) has too many edges for symmetry pruning"
            )));
        }
        let vertex = if n <= FULL_GROUP_MAX_N {
            all_permutations(n)
        } else {
            transpositions(n)
        };
        let colors: Vec<Vec<u8>> = match (color_symmetric, k <= FULL_COLOR_GROUP_MAX_K) {
            (false, _) => vec![(0..k as u8).collect()],
            (true, true) => all_permutations(k)
                .into_iter()
                .map(|p| p.into_iter().map(|c| c as u8).collect())
                .collect(),
            (true, false) => transpositions(k)
                .into_iter()
                .map(|p| p.into_iter().map(|c| c as u8).collect())
                .collect(),
        };
        let masks: Vec<u64> = Colex::new(n, r).collect();
        let mut edge_maps = Vec::with_capacity(vertex.len() * edges);
        for image in &vertex {
            let inv = Permutation::new(image.clone())?.inverse();
            edge_maps.extend(
                masks
                    .iter()
                    .map(|&m| rank_unchecked(inv.map_edge(Edge(m))) as u16),
            );
        }
        Ok(SymmetryGroup {
            edges,
            edge_maps,
            vertex_perms: vertex.len(),
            color_perms: colors,
        })
    }

    /// Number of group elements, identity included.
    pub fn len(&self) -> usize {
        self.vertex_perms * self.color_perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    fn parts(&self, g: usize) -> (&[u16], &[u8]) {
        let (p, c) = (g / self.color_perms.len(), g % self.color_perms.len());
        (
            &self.edge_maps[p * self.edges..(p + 1) * self.edges],
            &self.color_perms[c],
        )
    }

    /// Compares `w` with its image under element `g`, starting at `pos`.
    #[inline]
    fn compare(&self, g: usize, word: &[u8], mut pos: usize) -> Step {
        let (map, sigma) = self.parts(g);
        while pos < word.len() {
            let src = map[pos] as usize;
            if src >= word.len() {
                return Step::Open(pos);
            }
            let image = sigma[word[src] as usize];
            if image < word[pos] {
                return Step::Smaller;
            }
            if image > word[pos] {
                return Step::Larger;
            }
            pos += 1;
        }
        Step::Open(pos)
    }
}

enum Step {
    /// The image is equal on `0..pos` and undecided at `pos`.
    Open(usize),
    Smaller,
    Larger,
}

/// True iff no element of `group` maps the colored prefix to a strictly
/// colex-smaller color word.
pub fn is_lex_leader(pc: &PartialColoring, group: &SymmetryGroup) -> bool {
    (0..group.len()).all(|g| !matches!(group.compare(g, pc.prefix(), 0), Step::Smaller))
}

/// Incremental lex-leader test along one branch of the search.
///
/// `levels[d]` holds the elements still tied with the identity after the
/// first `d` colors, each with the position where the comparison stalled.
#[derive(Clone, Debug)]
pub(crate) struct LexState {
    levels: Vec<Vec<(u32, u32)>>,
}

impl LexState {
    pub(crate) fn new(group: &SymmetryGroup) -> LexState {
        // Element 0 is the identity pair.
        let root = (1..group.len() as u32).map(|g| (g, 0)).collect();
        let mut levels = vec![Vec::new(); group.edges + 1];
        levels[0] = root;
        LexState { levels }
    }

    /// Extends level `word.len() - 1` to level `word.len()`; false when some
    /// element now maps the prefix to a smaller word.
    pub(crate) fn advance(&mut self, group: &SymmetryGroup, word: &[u8]) -> bool {
        let d = word.len();
        let (done, rest) = self.levels.split_at_mut(d);
        let prev = &done[d - 1];
        let next = &mut rest[0];
        next.clear();
        for &(g, pos) in prev {
            match group.compare(g as usize, word, pos as usize) {
                Step::Smaller => return false,
                Step::Larger => {}
                Step::Open(p) => next.push((g, p as u32)),
            }
        }
        true
    }

    /// Rebuilds the levels for a fixed prefix; false if the prefix is pruned.
    pub(crate) fn replay(&mut self, group: &SymmetryGroup, word: &[u8]) -> bool {
        (1..=word.len()).all(|d| self.advance(group, &word[..d]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{apply_permutation, Coloring};
    use std::collections::HashSet;

    #[test]
    fn permutation_listing() {
        assert_eq!(all_permutations(3).len(), 6);
        assert_eq!(all_permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(all_permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn group_matches_apply_permutation() {
        let group = SymmetryGroup::new(5, 3, 2, false).unwrap();
        let c = Coloring::new(5, 3, 2, vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 1]).unwrap();
        for (p, image) in all_permutations(5).into_iter().enumerate() {
            let moved = apply_permutation(&c, &Permutation::new(image).unwrap()).unwrap();
            let (map, _) = group.parts(p);
            let expected: Vec<u8> = map.iter().map(|&j| c.colors()[j as usize]).collect();
            assert_eq!(moved.colors(), &expected[..]);
        }
    }

    #[test]
    fn simple_cases() {
        let group = SymmetryGroup::new(4, 3, 2, false).unwrap();
        let mono = PartialColoring::new(4, 3, 2, vec![1, 1, 1]).unwrap();
        assert!(is_lex_leader(&mono, &group));
        // {0,1,2} red but {0,1,3} blue: swapping 2 and 3 gives a word starting with 0.
        let swap = PartialColoring::new(4, 3, 2, vec![1, 0]).unwrap();
        assert!(!is_lex_leader(&swap, &group));
        assert!(is_lex_leader(
            &PartialColoring::empty(4, 3, 2).unwrap(),
            &group
        ));
    }

    #[test]
    fn leaders_count_orbits() {
        for n in 3..=5 {
            let group = SymmetryGroup::new(n, 3, 2, false).unwrap();
            let perms: Vec<Permutation> = all_permutations(n)
                .into_iter()
                .map(|p| Permutation::new(p).unwrap())
                .collect();
            let m = edge_count(n, 3);
            let mut seen = HashSet::new();
            let mut orbits = 0;
            let mut leaders = 0;
            for bits in 0u32..1 << m {
                let colors: Vec<u8> = (0..m).map(|j| (bits >> j & 1) as u8).collect();
                let c = Coloring::new(n, 3, 2, colors.clone()).unwrap();
                if seen.insert(colors.clone()) {
                    orbits += 1;
                    for p in &perms {
                        seen.insert(apply_permutation(&c, p).unwrap().colors().to_vec());
                    }
                }
                if is_lex_leader(&PartialColoring::from(&c), &group) {
                    leaders += 1;
                }
            }
            assert_eq!(leaders, orbits, "n = {n}");
        }
    }

    #[test]
    fn incremental_agrees_with_direct() {
        let group = SymmetryGroup::new(5, 3, 2, true).unwrap();
        let mut state = LexState::new(&group);
        let word = [0u8, 0, 1, 0, 1, 1, 0, 1, 0, 0];
        for d in 1..=word.len() {
            let pc = PartialColoring::new(5, 3, 2, word[..d].to_vec()).unwrap();
            let direct = is_lex_leader(&pc, &group);
            assert_eq!(state.advance(&group, &word[..d]), direct, "depth {d}");
            if !direct {
                break;
            }
        }
    }
}
