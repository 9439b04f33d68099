//! Lattice classification: simple / planar / thin predicates, grid
//! sublattices and intervals, the pair poset of a thin lattice, and the
//! enumerations used by the survey commands.

use crate::lattice::{
    as_lattice, grid_lattice, ideals_lattice, is_distributive, join_irreducibles,
    lattice_isomorphic, rank_profile, Lattice,
};
use crate::poset::{from_leq, Poset};
use crate::{Error, Result};

/// Everything the `classify` command reports about one lattice.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub distributive: bool,
    pub simple: bool,
    pub planar: bool,
    pub thin: bool,
    pub theta: Option<u32>,
    pub rho: Vec<u32>,
    pub has_d54_sublattice: bool,
    /// Intervals `[a, b]` isomorphic to the grid `D_{2^r 3^s}` (`r <= s`,
    /// both at least 1), as (bottom, top, r, s) element indices.
    pub grid_intervals: Vec<(usize, usize, u32, u32)>,
    /// Some `i0` with `rho(i0) = rho(i0+1) = 3`.
    pub consecutive_theta3: bool,
}

/// Apexes of a lattice: elements comparable to everything.
pub fn apexes(l: &Lattice) -> Vec<usize> {
    (0..l.len())
        .filter(|&a| (0..l.len()).all(|b| l.comparable(a, b)))
        .collect()
}

/// Simple: no apex besides bottom and top.
pub fn is_simple(l: &Lattice) -> (bool, Vec<usize>) {
    let ap = apexes(l);
    let simple = ap.len() == 2 || (l.len() == 1 && ap.len() == 1);
    (
        simple && ap.contains(&l.bottom()) && ap.contains(&l.top()),
        ap,
    )
}

/// Planar (for distributive lattices): among any three join-irreducibles,
/// two are comparable, i.e. the join-irreducible poset has width <= 2.
pub fn is_planar(l: &Lattice) -> Result<bool> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let p = join_irreducibles(l);
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !p.comparable(a, b) && !p.comparable(a, c) && !p.comparable(b, c) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Thin: simple with exactly two elements in every intermediate rank level.
pub fn is_thin(l: &Lattice) -> Result<bool> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let rp = rank_profile(l);
    if rp.d < 2 {
        return Ok(false);
    }
    let levels = rp.rho[1..rp.d as usize].iter().all(|&r| r == 2);
    Ok(levels && is_simple(l).0)
}

/// Searches for eight elements closed under join and meet and isomorphic to
/// the 2x4 grid `D_{2*3^3}`.  Seeds: an element `u` plus a 3-chain
/// incomparable to it; the closure is accepted iff it has exactly eight
/// elements and is grid-isomorphic.
pub fn find_d54_sublattice(l: &Lattice) -> Option<Vec<usize>> {
    let n = l.len();
    let reference = grid_lattice(1, 3);
    for u in 0..n {
        let incomp: Vec<usize> = (0..n).filter(|&v| !l.comparable(u, v)).collect();
        for &v1 in &incomp {
            for &v2 in &incomp {
                if !l.poset().lt(v1, v2) {
                    continue;
                }
                for &v3 in &incomp {
                    if !l.poset().lt(v2, v3) {
                        continue;
                    }
                    let closure = l.sublattice_closure(&[u, v1, v2, v3]);
                    if closure.len() != 8 {
                        continue;
                    }
                    let sub = l.induced(&closure).expect("closed subset is a lattice");
                    if lattice_isomorphic(&sub, &reference).is_some() {
                        return Some(closure);
                    }
                }
            }
        }
    }
    None
}

/// All intervals `[a, b]` isomorphic to the `(r+1) x (s+1)` grid.
pub fn find_grid_intervals(l: &Lattice, r: u32, s: u32) -> Result<Vec<(usize, usize)>> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let reference = grid_lattice(r, s);
    let want = ((r + 1) * (s + 1)) as usize;
    let mut out = Vec::new();
    for a in 0..l.len() {
        for b in 0..l.len() {
            if !l.leq(a, b) {
                continue;
            }
            let members: Vec<usize> = (0..l.len())
                .filter(|&z| l.leq(a, z) && l.leq(z, b))
                .collect();
            if members.len() != want {
                continue;
            }
            let iv = l.interval(a, b)?;
            if lattice_isomorphic(&iv, &reference).is_some() {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

pub fn classify(l: &Lattice) -> Result<ClassificationReport> {
    let distributive = is_distributive(l);
    if !distributive {
        let rp = rank_profile(l);
        return Ok(ClassificationReport {
            distributive,
            simple: is_simple(l).0,
            planar: false,
            thin: false,
            theta: rp.theta,
            rho: rp.rho,
            has_d54_sublattice: find_d54_sublattice(l).is_some(),
            grid_intervals: Vec::new(),
            consecutive_theta3: false,
        });
    }
    let rp = rank_profile(l);
    let consecutive_theta3 = rp.rho.windows(2).any(|w| w[0] == 3 && w[1] == 3);
    let mut grid_intervals = Vec::new();
    let max_r = rp.d.min(6);
    for r in 1..=max_r {
        for s in r..=max_r {
            if (r + 1) * (s + 1) > l.len() as u32 {
                continue;
            }
            for (a, b) in find_grid_intervals(l, r, s)? {
                grid_intervals.push((a, b, r, s));
            }
        }
    }
    grid_intervals.sort();
    Ok(ClassificationReport {
        distributive,
        simple: is_simple(l).0,
        planar: is_planar(l)?,
        thin: is_thin(l)?,
        theta: rp.theta,
        rho: rp.rho,
        has_d54_sublattice: find_d54_sublattice(l).is_some(),
        grid_intervals,
        consecutive_theta3,
    })
}

/// Coordinates of each lattice element over a two-chain decomposition of
/// the join-irreducible poset: `a` maps to the pair of chain-prefix sizes
/// of its ideal of join-irreducibles.  `None` when no decomposition into
/// two chains exists (the incomparability graph is not bipartite).
pub fn two_chain_coordinates(l: &Lattice) -> Option<Vec<(u32, u32)>> {
    let p = join_irreducibles(l);
    let n = p.len();
    let mut color = vec![usize::MAX; n];
    for start in 0..n {
        if color[start] != usize::MAX {
            continue;
        }
        color[start] = 0;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if u != v && !p.comparable(u, v) {
                    if color[u] == usize::MAX {
                        color[u] = 1 - color[v];
                        stack.push(u);
                    } else if color[u] == color[v] {
                        return None;
                    }
                }
            }
        }
    }
    let ji_in_l: Vec<usize> = (0..n)
        .map(|q| l.poset().index_of(p.label(q)).expect("subposet label"))
        .collect();
    Some(
        (0..l.len())
            .map(|a| {
                let mut i = 0;
                let mut j = 0;
                for q in 0..n {
                    if l.leq(ji_in_l[q], a) {
                        if color[q] == 0 {
                            i += 1;
                        } else {
                            j += 1;
                        }
                    }
                }
                (i, j)
            })
            .collect(),
    )
}

/// The chain labeling of a thin lattice: the `x` chain and the `y` chain
/// between bottom and top.  Once `x1, y1` are fixed the rest is forced:
/// at each rank exactly one element extends each chain.
#[derive(Debug, Clone)]
pub struct ThinLabeling {
    pub x_chain: Vec<usize>,
    pub y_chain: Vec<usize>,
}

/// The pair poset of a thin lattice: points `(i, j)` of the grid with
/// `x_i` and `y_j` incomparable, inheriting the componentwise order.
#[derive(Debug, Clone)]
pub struct QLattice {
    pub labeling: ThinLabeling,
    /// 1-based grid pairs `(i, j)`, sorted.
    pub pairs: Vec<(u32, u32)>,
}

impl QLattice {
    pub fn n(&self) -> usize {
        self.labeling.x_chain.len()
    }

    /// Is the pair set totally ordered under the componentwise order?
    pub fn is_chain(&self) -> bool {
        for (k, &(i1, j1)) in self.pairs.iter().enumerate() {
            for &(i2, j2) in &self.pairs[k + 1..] {
                let le = i1 <= i2 && j1 <= j2;
                let ge = i2 <= i1 && j2 <= j1;
                if !le && !ge {
                    return false;
                }
            }
        }
        true
    }

    /// The pair set as a poset under componentwise order, labeled `(i,j)`.
    pub fn poset(&self) -> Poset {
        let m = self.pairs.len();
        let mut leq = vec![false; m * m];
        for (a, &(i1, j1)) in self.pairs.iter().enumerate() {
            for (b, &(i2, j2)) in self.pairs.iter().enumerate() {
                leq[a * m + b] = i1 <= i2 && j1 <= j2;
            }
        }
        let labels = self
            .pairs
            .iter()
            .map(|&(i, j)| format!("({i},{j})"))
            .collect();
        from_leq(labels, leq)
    }
}

pub fn thin_labeling(l: &Lattice) -> Result<ThinLabeling> {
    if !is_thin(l)? {
        return Err(Error::NotThin);
    }
    let rp = rank_profile(l);
    let d = rp.d as usize;
    let levels: Vec<Vec<usize>> = (0..=d)
        .map(|r| {
            (0..l.len())
                .filter(|&a| rp.rank_of[a] as usize == r)
                .collect()
        })
        .collect();
    // x1 is the atom with more join-irreducibles above it; ties break by
    // element index
    let ji = join_irreducibles(l);
    let chain_len = |atom: usize| -> usize {
        (0..ji.len())
            .filter(|&p| {
                let q = l.poset().index_of(ji.label(p)).unwrap();
                l.leq(atom, q)
            })
            .count()
    };
    let (a, b) = (levels[1][0], levels[1][1]);
    let (x1, y1) = if chain_len(a) >= chain_len(b) {
        (a, b)
    } else {
        (b, a)
    };
    let mut x_chain = vec![x1];
    let mut y_chain = vec![y1];
    for r in 2..d {
        let (u, v) = (levels[r][0], levels[r][1]);
        let (px, py) = (x_chain[r - 2], y_chain[r - 2]);
        // exactly one of u, v sits above both previous chain elements
        let above_both = |z: usize| l.leq(px, z) && l.leq(py, z);
        let (xi, yi) = match (above_both(u), above_both(v)) {
            (true, false) => {
                if l.leq(px, v) {
                    (v, u)
                } else {
                    (u, v)
                }
            }
            (false, true) => {
                if l.leq(px, u) {
                    (u, v)
                } else {
                    (v, u)
                }
            }
            _ => return Err(Error::NotThin),
        };
        if !(l.leq(px, xi) && l.leq(py, yi)) {
            return Err(Error::NotThin);
        }
        x_chain.push(xi);
        y_chain.push(yi);
    }
    Ok(ThinLabeling { x_chain, y_chain })
}

/// Builds the pair poset `Q_L` of a thin lattice.
pub fn q_lattice(l: &Lattice) -> Result<QLattice> {
    let labeling = thin_labeling(l)?;
    let n = labeling.x_chain.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !l.comparable(labeling.x_chain[i], labeling.y_chain[j]) {
                pairs.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    pairs.sort_unstable();
    // the pair set must be closed under the grid join and meet
    for &(i1, j1) in &pairs {
        for &(i2, j2) in &pairs {
            assert!(
                pairs.binary_search(&(i1.max(i2), j1.max(j2))).is_ok()
                    && pairs.binary_search(&(i1.min(i2), j1.min(j2))).is_ok(),
                "pair poset is not a sublattice of the grid"
            );
        }
    }
    Ok(QLattice { labeling, pairs })
}

/// All thin lattices of the given rank, one per binary choice vector: at
/// each intermediate step the new level is glued over `x_(i-1)` or over
/// `y_(i-1)`.  Yields `2^(rank-2)` lattices.
pub fn thin_lattices(rank: u32) -> Vec<Lattice> {
    assert!(rank >= 2);
    let steps = rank as usize - 2;
    let mut out = Vec::new();
    for mask in 0u64..(1 << steps) {
        out.push(snake_lattice(rank, mask));
    }
    out
}

/// One snake lattice: bit `i-2` of `choices` decides the gluing between
/// rank levels `i-1` and `i`.
pub fn snake_lattice(rank: u32, choices: u64) -> Lattice {
    let d = rank as usize;
    let mut labels = vec!["bot".to_string()];
    for i in 1..d {
        labels.push(format!("x{i}"));
        labels.push(format!("y{i}"));
    }
    labels.push("top".to_string());
    let x = |i: usize| 2 * i - 1;
    let y = |i: usize| 2 * i;
    let top = 2 * d - 1;
    let mut covers: Vec<(usize, usize)> = vec![(0, x(1)), (0, y(1))];
    for i in 2..d {
        covers.push((x(i - 1), x(i)));
        covers.push((y(i - 1), y(i)));
        if choices >> (i - 2) & 1 == 0 {
            covers.push((x(i - 1), y(i)));
        } else {
            covers.push((y(i - 1), x(i)));
        }
    }
    covers.push((x(d - 1), top));
    covers.push((y(d - 1), top));
    let cover_labels: Vec<(String, String)> = covers
        .iter()
        .map(|&(a, b)| (labels[a].clone(), labels[b].clone()))
        .collect();
    let p = crate::poset::from_covers(&labels, &cover_labels).expect("snake covers are acyclic");
    as_lattice(&p).expect("snake poset is a lattice")
}

/// All posets that are a disjoint union of two chains (sizes `p >= q`) with
/// arbitrary compatible cross relations, over all `p + q <= max_size`,
/// deduplicated up to isomorphism.
pub fn two_chain_posets(max_size: usize) -> Vec<Poset> {
    let mut out: Vec<Poset> = Vec::new();
    for total in 1..=max_size {
        for q in 0..=total / 2 {
            let p = total - q;
            for poset in two_chain_posets_sized(p, q) {
                if out.iter().all(|seen| seen.isomorphism(&poset).is_none()) {
                    out.push(poset);
                }
            }
        }
    }
    out
}

fn two_chain_posets_sized(p: usize, q: usize) -> Vec<Poset> {
    // cross relations a_i < b_j are encoded by thresholds
    // t_j = max{i : a_i < b_j} (0 when none), nondecreasing in j; dually
    // u_i for b_j < a_i
    let mut out = Vec::new();
    let ts = monotone_maps(q, p);
    let us = monotone_maps(p, q);
    for t in &ts {
        'next: for u in &us {
            // acyclicity: a_i < b_j and b_j < a_k forces i < k
            for j in 0..q {
                let k = t[j];
                if k >= 1 && u[k - 1] >= j + 1 {
                    continue 'next;
                }
            }
            for i in 0..p {
                let j = u[i];
                if j >= 1 && t[j - 1] >= i + 1 {
                    continue 'next;
                }
            }
            let n = p + q;
            let mut leq = vec![false; n * n];
            let ai = |i: usize| i;
            let bj = |j: usize| p + j;
            for i in 0..p {
                for k in i..p {
                    leq[ai(i) * n + ai(k)] = true;
                }
            }
            for j in 0..q {
                for k in j..q {
                    leq[bj(j) * n + bj(k)] = true;
                }
            }
            for j in 0..q {
                for i in 0..t[j] {
                    for k in j..q {
                        leq[ai(i) * n + bj(k)] = true;
                    }
                }
            }
            for i in 0..p {
                for j in 0..u[i] {
                    for k in i..p {
                        leq[bj(j) * n + ai(k)] = true;
                    }
                }
            }
            let labels: Vec<String> = (1..=p)
                .map(|i| format!("a{i}"))
                .chain((1..=q).map(|j| format!("b{j}")))
                .collect();
            out.push(from_leq(labels, leq));
        }
    }
    out
}

/// All nondecreasing maps `[1..len] -> [0..=bound]` as vectors.
fn monotone_maps(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            let lo = v.last().copied().unwrap_or(0);
            for x in lo..=bound {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The planar distributive lattices for the polynomial-ring survey:
/// `J(P)` over all two-chain posets with at most `max_poset` elements.
pub fn planar_survey_lattices(max_poset: usize) -> Vec<(Poset, Lattice)> {
    two_chain_posets(max_poset)
        .into_iter()
        .map(|p| {
            let l = ideals_lattice(&p).expect("two-chain ideals fit the cap");
            (p, l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::divisor_lattice;
    use crate::poset::{chain, from_covers};

    fn b3() -> Lattice {
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
        as_lattice(&from_covers(&["1", "2", "3", "4", "5", "6", "7", "8"], &covers).unwrap())
            .unwrap()
    }

    #[test]
    fn b3_is_simple_and_nonplanar() {
        let l = b3();
        let (simple, ap) = is_simple(&l);
        assert!(simple);
        let mut names: Vec<&str> = ap.iter().map(|&a| l.label(a)).collect();
        names.sort();
        assert_eq!(names, ["1", "8"]);
        assert!(!is_planar(&l).unwrap());
        assert!(!is_thin(&l).unwrap());
    }

    #[test]
    fn chains_are_not_simple() {
        let l = as_lattice(&chain(3)).unwrap();
        let (simple, ap) = is_simple(&l);
        assert!(!simple);
        assert_eq!(ap.len(), 3);
    }

    #[test]
    fn divisor_grids_are_planar() {
        for n in [6u64, 12, 36, 54, 108, 324] {
            assert!(is_planar(&divisor_lattice(n).unwrap()).unwrap());
        }
        assert!(is_simple(&divisor_lattice(54).unwrap()).0);
    }

    #[test]
    fn thin_divisor_lattices() {
        for s in 1..=4 {
            let l = divisor_lattice(2 * 3u64.pow(s)).unwrap();
            assert!(is_thin(&l).unwrap(), "D_(2*3^{s}) must be thin");
        }
        assert!(!is_thin(&divisor_lattice(36).unwrap()).unwrap());
    }

    #[test]
    fn d54_sublattice_of_itself_and_not_of_d36() {
        let d54 = divisor_lattice(54).unwrap();
        let hit = find_d54_sublattice(&d54).unwrap();
        assert_eq!(hit.len(), 8);
        assert!(find_d54_sublattice(&divisor_lattice(36).unwrap()).is_none());
    }

    #[test]
    fn d54_found_in_large_thin_lattice() {
        let l = divisor_lattice(2 * 3u64.pow(5)).unwrap();
        assert!(find_d54_sublattice(&l).is_some());
        let report = classify(&l).unwrap();
        assert!(report.thin);
        assert!(report.has_d54_sublattice);
    }

    #[test]
    fn grid_intervals_of_d108() {
        let d108 = divisor_lattice(108).unwrap();
        let whole = find_grid_intervals(&d108, 2, 3).unwrap();
        assert_eq!(whole, vec![(d108.bottom(), d108.top())]);
        let chains = find_grid_intervals(&as_lattice(&chain(6)).unwrap(), 1, 1).unwrap();
        assert!(chains.is_empty());
    }

    #[test]
    fn classify_b3() {
        let r = classify(&b3()).unwrap();
        assert!(r.distributive && r.simple);
        assert!(!r.planar && !r.thin);
        assert_eq!(r.theta, Some(3));
        assert_eq!(r.rho, vec![1, 3, 3, 1]);
    }

    #[test]
    fn q_lattice_of_divisor_thins() {
        // D_18 = D_(2*3^2): the pair poset is the chain (1,1) < (2,1) < (2,2)
        let q = q_lattice(&divisor_lattice(18).unwrap()).unwrap();
        assert_eq!(q.pairs, vec![(1, 1), (2, 1), (2, 2)]);
        assert!(q.is_chain());
        // D_54 adds the crossing pair and stops being a chain
        let q = q_lattice(&divisor_lattice(54).unwrap()).unwrap();
        assert_eq!(q.pairs, vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]);
        assert!(!q.is_chain());
    }

    #[test]
    fn divisor_thin_labeling_puts_long_chain_on_x() {
        let l = divisor_lattice(54).unwrap();
        let lab = thin_labeling(&l).unwrap();
        let names: Vec<&str> = lab.x_chain.iter().map(|&a| l.label(a)).collect();
        assert_eq!(names, ["3", "9", "27"]);
        let names: Vec<&str> = lab.y_chain.iter().map(|&a| l.label(a)).collect();
        assert_eq!(names, ["2", "6", "18"]);
    }

    #[test]
    fn snake_enumeration_counts_and_validates() {
        for rank in 2..=6u32 {
            let all = thin_lattices(rank);
            assert_eq!(all.len(), 1 << (rank - 2));
            for l in &all {
                assert!(is_thin(l).unwrap());
                assert_eq!(rank_profile(l).d, rank);
            }
        }
        // the all-zero choice vector is the divisor grid
        let straight = snake_lattice(4, 0);
        assert!(lattice_isomorphic(&straight, &divisor_lattice(54).unwrap()).is_some());
    }

    #[test]
    fn thin_implies_planar_on_enumeration() {
        for rank in 2..=7u32 {
            for l in thin_lattices(rank) {
                assert!(is_planar(&l).unwrap());
            }
        }
    }

    #[test]
    fn two_chain_posets_small_counts() {
        assert_eq!(two_chain_posets(1).len(), 1);
        // two elements: chain and antichain
        assert_eq!(
            two_chain_posets(2).iter().filter(|p| p.len() == 2).count(),
            2
        );
        // three-element posets that split into two chains: the chain, the
        // two V shapes, and chain-plus-isolated-point (not the antichain)
        assert_eq!(
            two_chain_posets(3).iter().filter(|p| p.len() == 3).count(),
            4
        );
    }

    #[test]
    fn survey_lattices_are_planar_distributive() {
        for (p, l) in planar_survey_lattices(5) {
            assert!(is_distributive(&l));
            assert!(is_planar(&l).unwrap(), "J(P) of width-2 poset is planar");
            assert_eq!(rank_profile(&l).d as usize, p.len());
        }
    }

    #[test]
    fn grid_interval_in_theta3_simple_planar_fixture() {
        // lemma instance: a simple planar distributive lattice with
        // theta = 3 contains a D_(2^2*3^2) interval
        let l = divisor_lattice(36).unwrap();
        assert_eq!(rank_profile(&l).theta, Some(3));
        assert!(!find_grid_intervals(&l, 2, 2).unwrap().is_empty());
    }
}
