//! Maximum bipartite matching by augmenting paths.

/// Maximum matching of a bipartite graph given as right-neighbour lists per
/// left vertex. Entry `i` of the result is the right vertex matched to left
/// vertex `i`, if any. The left side is saturated iff Hall's condition holds.
pub fn max_bipartite_matching(adjacency: &[Vec<usize>]) -> Vec<Option<usize>> {
    let right = adjacency
        .iter()
        .flatten()
        .map(|&j| j + 1)
        .max()
        .unwrap_or(0);
    let mut matcher = Matcher::new(adjacency.len(), right);
    for i in 0..adjacency.len() {
        matcher.augment(adjacency, i);
    }
    matcher.left
}

struct Matcher {
    left: Vec<Option<usize>>,
    owner: Vec<usize>,
    stamp: Vec<u32>,
    round: u32,
}

const FREE: usize = usize::MAX;

impl Matcher {
    fn new(left: usize, right: usize) -> Matcher {
        Matcher {
            left: vec![None; left],
            owner: vec![FREE; right],
            stamp: vec![0; right],
            round: 0,
        }
    }

    fn augment(&mut self, adjacency: &[Vec<usize>], i: usize) -> bool {
        self.round += 1;
        self.try_path(adjacency, i)
    }

    fn try_path(&mut self, adjacency: &[Vec<usize>], i: usize) -> bool {
        for &j in &adjacency[i] {
            if self.stamp[j] == self.round {
                continue;
            }
            self.stamp[j] = self.round;
            if self.owner[j] == FREE || self.try_path(adjacency, self.owner[j]) {
                self.owner[j] = i;
                self.left[i] = Some(j);
                return true;
            }
        }
        false
    }
}
