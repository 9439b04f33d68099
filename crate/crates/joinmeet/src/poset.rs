//! Finite posets: cover relations, transitive closure and reduction,
//! induced subposets, isomorphism testing.

use crate::{Error, Result};

/// A finite poset over opaque string labels.
///
/// The order relation is stored as a dense boolean matrix (reflexive and
/// transitively closed); `covers` is kept as the transitive reduction.
/// Values are immutable after construction.
#[derive(Debug, Clone)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `a <= b` in the poset order.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Covering pairs `(a, b)` with `a` covered by `b`, i.e. the transitive
    /// reduction of the order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, b: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(_, u)| u == b)
            .map(|&(l, _)| l)
            .collect()
    }

    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(l, _)| l == a)
            .map(|&(_, u)| u)
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| b == a || !self.leq(b, a)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| b == a || !self.leq(a, b)))
            .collect()
    }

    /// Length of the longest chain ending at each element (0 for minimal).
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.lt(b, a)).count());
        let mut h = vec![0usize; n];
        for &a in &order {
            for b in 0..n {
                if self.lt(b, a) {
                    h[a] = h[a].max(h[b] + 1);
                }
            }
        }
        h
    }

    /// Rank of the poset: the biggest length of a chain.
    pub fn rank(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Largest antichain size, by brute force over subsets for small posets
    /// and a greedy chain cover bound otherwise.  Only used on join
    /// irreducible posets, which stay tiny here.
    pub fn width(&self) -> usize {
        let n = self.len();
        assert!(n <= 20, "width check is brute force");
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if members.len() <= best {
                continue;
            }
            let antichain = members
                .iter()
                .enumerate()
                .all(|(k, &a)| members[k + 1..].iter().all(|&b| !self.comparable(a, b)));
            if antichain {
                best = members.len();
            }
        }
        best
    }

    /// Induced subposet on the given element indices, in the given order.
    pub fn subposet(&self, members: &[usize]) -> Poset {
        let m = members.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        let labels = members.iter().map(|&a| self.labels[a].clone()).collect();
        Poset {
            labels,
            covers: reduction(&leq, m),
            leq,
        }
    }

    /// A linear extension ordered by height, ties broken by element index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let h = self.heights();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (h[a], a));
        order
    }

    /// Searches for an order isomorphism onto `other`; returns the image of
    /// each element.  Backtracking with (height, cover degree) refinement.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let sig = |p: &Poset| -> Vec<(usize, usize, usize)> {
            let h = p.heights();
            (0..p.len())
                .map(|a| (h[a], p.lower_covers(a).len(), p.upper_covers(a).len()))
                .collect()
        };
        let s1 = sig(self);
        let s2 = sig(other);
        {
            let mut a = s1.clone();
            let mut b = s2.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return None;
            }
        }
        // assign elements in height order
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| s1[a]);
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            k: usize,
            order: &[usize],
            p: &Poset,
            q: &Poset,
            s1: &[(usize, usize, usize)],
            s2: &[(usize, usize, usize)],
            image: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let a = order[k];
            for b in 0..q.len() {
                if used[b] || s1[a] != s2[b] {
                    continue;
                }
                let ok = order[..k].iter().all(|&c| {
                    p.leq(a, c) == q.leq(b, image[c]) && p.leq(c, a) == q.leq(image[c], b)
                });
                if ok {
                    image[a] = b;
                    used[b] = true;
                    if go(k + 1, order, p, q, s1, s2, image, used) {
                        return true;
                    }
                    used[b] = false;
                    image[a] = usize::MAX;
                }
            }
            false
        }
        if go(0, &order, self, other, &s1, &s2, &mut image, &mut used) {
            Some(image)
        } else {
            None
        }
    }
}

/// Builds a poset from labels and covering pairs: computes the transitive
/// closure and re-reduces the covers.  Rejects cycles and unknown labels.
pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
    let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let n = labels.len();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    let index = |s: &S| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == s.as_ref())
            .ok_or_else(|| Error::UnknownLabel(s.as_ref().to_string()))
    };
    let mut edges = vec![Vec::new(); n];
    for (a, b) in covers {
        edges[index(a)?].push(index(b)?);
    }
    // transitive closure by DFS, with cycle detection
    let mut leq = vec![false; n * n];
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    fn dfs(
        a: usize,
        edges: &[Vec<usize>],
        leq: &mut [bool],
        state: &mut [u8],
        n: usize,
        labels: &[String],
    ) -> Result<()> {
        state[a] = 1;
        leq[a * n + a] = true;
        for &b in &edges[a] {
            match state[b] {
                1 => return Err(Error::CycleDetected(labels[b].clone())),
                0 => dfs(b, edges, leq, state, n, labels)?,
                _ => {}
            }
            for c in 0..n {
                if leq[b * n + c] {
                    leq[a * n + c] = true;
                }
            }
        }
        state[a] = 2;
        Ok(())
    }
    for a in 0..n {
        if state[a] == 0 {
            dfs(a, &edges, &mut leq, &mut state, n, &labels)?;
        }
    }
    // antisymmetry: a cycle through covers is caught above, but a <= b <= a
    // with a != b cannot occur once the closure is acyclic
    for a in 0..n {
        for b in 0..n {
            if a != b && leq[a * n + b] && leq[b * n + a] {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
        }
    }
    Ok(Poset {
        covers: reduction(&leq, n),
        labels,
        leq,
    })
}

/// Transitive reduction of a closed relation: `(a, b)` is a cover iff
/// `a < b` with nothing strictly between.
fn reduction(leq: &[bool], n: usize) -> Vec<(usize, usize)> {
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a * n + b] {
                continue;
            }
            let between = (0..n)
                .any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
            if !between {
                covers.push((a, b));
            }
        }
    }
    covers
}

/// Builds a poset directly from a reflexive, transitively closed relation.
pub(crate) fn from_leq(labels: Vec<String>, leq: Vec<bool>) -> Poset {
    let n = labels.len();
    debug_assert_eq!(leq.len(), n * n);
    Poset {
        covers: reduction(&leq, n),
        labels,
        leq,
    }
}

/// An antichain on `k` elements labeled `a1..ak`.
pub fn antichain(k: usize) -> Poset {
    let labels: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let mut leq = vec![false; k * k];
    for i in 0..k {
        leq[i * k + i] = true;
    }
    from_leq(labels, leq)
}

/// A chain on `k` elements labeled `c1 < c2 < ... < ck`.
pub fn chain(k: usize) -> Poset {
    let labels: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
    let mut leq = vec![false; k * k];
    for i in 0..k {
        for j in i..k {
            leq[i * k + j] = true;
        }
    }
    from_leq(labels, leq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_transitive() {
        let p = from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers().len(), 2);
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_)));
    }

    #[test]
    fn unknown_label_is_rejected() {
        let err = from_covers(&["a"], &[("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel(_)));
    }

    #[test]
    fn redundant_covers_are_reduced() {
        let p =
            from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(p.covers().len(), 2);
        assert!(!p.covers().contains(&(0, 2)));
    }

    #[test]
    fn figure_one_poset_has_rank_three() {
        let covers = [
            ("1", "2"),
            ("1", "3"),
            ("1", "6"),
            ("2", "4"),
            ("2", "5"),
            ("3", "4"),
            ("3", "7"),
            ("6", "5"),
            ("6", "7"),
            ("4", "8"),
            ("5", "8"),
            ("7", "8"),
        ];
        let p = from_covers(&["1", "2", "3", "4", "5", "6", "7", "8"], &covers).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.rank(), 3);
    }

    #[test]
    fn isomorphism_finds_relabeling() {
        let p = from_covers(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
            .unwrap();
        let q = from_covers(&["w", "x", "y", "z"], &[("z", "x"), ("z", "y"), ("x", "w"), ("y", "w")])
            .unwrap();
        let iso = p.isomorphism(&q).unwrap();
        assert_eq!(iso[0], 3);
        assert_eq!(iso[3], 0);
        assert!(p.isomorphism(&chain(4)).is_none());
    }

    #[test]
    fn width_of_grid_is_two() {
        let p = from_covers(
            &["00", "01", "10", "11"],
            &[("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")],
        )
        .unwrap();
        assert_eq!(p.width(), 2);
        assert_eq!(antichain(3).width(), 3);
        assert_eq!(chain(5).width(), 1);
    }
}
