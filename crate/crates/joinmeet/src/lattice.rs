//! Finite lattices: join/meet tables, distributivity, join-irreducibles,
//! Birkhoff duality, divisor lattices and rank statistics.

use crate::poset::Poset;
use crate::{BoundFailure, Error, Result};

/// A finite lattice: a poset together with verified join and meet tables.
#[derive(Debug, Clone)]
pub struct Lattice {
    poset: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.poset.comparable(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Incomparable pairs `(i, j)` with `i < j` in element order.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.comparable(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The interval `[a, b]` as a sublattice (with induced order).
    pub fn interval(&self, a: usize, b: usize) -> Result<Lattice> {
        if !self.leq(a, b) {
            return Err(Error::BadInput(format!(
                "interval requires {} <= {}",
                self.label(a),
                self.label(b)
            )));
        }
        let members: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(a, z) && self.leq(z, b))
            .collect();
        as_lattice(&self.poset.subposet(&members))
    }

    /// Closure of a set of elements under join and meet.
    pub fn sublattice_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.len()];
        let mut stack: Vec<usize> = seed.to_vec();
        for &s in seed {
            members[s] = true;
        }
        while let Some(a) = stack.pop() {
            for b in 0..self.len() {
                if !members[b] {
                    continue;
                }
                for c in [self.join(a, b), self.meet(a, b)] {
                    if !members[c] {
                        members[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        (0..self.len()).filter(|&i| members[i]).collect()
    }

    /// The induced lattice on a join/meet-closed subset.
    pub fn induced(&self, members: &[usize]) -> Result<Lattice> {
        as_lattice(&self.poset.subposet(members))
    }
}

/// Upgrades a poset to a lattice by brute-force bound search, or reports a
/// witness pair with no unique bound.
pub fn as_lattice(p: &Poset) -> Result<Lattice> {
    let n = p.len();
    if n == 0 {
        return Err(Error::BadInput("empty poset is not a lattice".into()));
    }
    let mut join = vec![0usize; n * n];
    let mut meet = vec![0usize; n * n];
    for a in 0..n {
        for b in a..n {
            let ubs: Vec<usize> = (0..n).filter(|&c| p.leq(a, c) && p.leq(b, c)).collect();
            let lub: Vec<usize> = ubs
                .iter()
                .copied()
                .filter(|&c| ubs.iter().all(|&d| p.leq(c, d)))
                .collect();
            let j = match (ubs.is_empty(), lub.len()) {
                (true, _) => {
                    return Err(Error::NotALattice {
                        a: p.label(a).into(),
                        b: p.label(b).into(),
                        reason: BoundFailure::NoUpperBound,
                    })
                }
                (false, 1) => lub[0],
                _ => {
                    return Err(Error::NotALattice {
                        a: p.label(a).into(),
                        b: p.label(b).into(),
                        reason: BoundFailure::NonUniqueLub,
                    })
                }
            };
            let lbs: Vec<usize> = (0..n).filter(|&c| p.leq(c, a) && p.leq(c, b)).collect();
            let glb: Vec<usize> = lbs
                .iter()
                .copied()
                .filter(|&c| lbs.iter().all(|&d| p.leq(d, c)))
                .collect();
            let m = match (lbs.is_empty(), glb.len()) {
                (true, _) => {
                    return Err(Error::NotALattice {
                        a: p.label(a).into(),
                        b: p.label(b).into(),
                        reason: BoundFailure::NoLowerBound,
                    })
                }
                (false, 1) => glb[0],
                _ => {
                    return Err(Error::NotALattice {
                        a: p.label(a).into(),
                        b: p.label(b).into(),
                        reason: BoundFailure::NonUniqueGlb,
                    })
                }
            };
            join[a * n + b] = j;
            join[b * n + a] = j;
            meet[a * n + b] = m;
            meet[b * n + a] = m;
        }
    }
    let bottom = (0..n)
        .find(|&z| (0..n).all(|c| p.leq(z, c)))
        .expect("meets exist, so a bottom exists");
    let top = (0..n)
        .find(|&z| (0..n).all(|c| p.leq(c, z)))
        .expect("joins exist, so a top exists");
    Ok(Lattice {
        poset: p.clone(),
        join,
        meet,
        bottom,
        top,
    })
}

/// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` for all triples; the dual identity is
/// checked as well.
pub fn is_distributive(l: &Lattice) -> bool {
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
                    return false;
                }
                if l.join(a, l.meet(b, c)) != l.meet(l.join(a, b), l.join(a, c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// The subposet of join-irreducible elements: nonbottom `a` such that
/// `a = b ∨ c` forces `a ∈ {b, c}`.  Cross-checked against the covering
/// characterization (exactly one lower cover).
pub fn join_irreducibles(l: &Lattice) -> Poset {
    let n = l.len();
    let by_def: Vec<usize> = (0..n)
        .filter(|&a| {
            a != l.bottom()
                && (0..n).all(|b| {
                    (0..n).all(|c| l.join(b, c) != a || a == b || a == c)
                })
        })
        .collect();
    let by_covers: Vec<usize> = (0..n)
        .filter(|&a| a != l.bottom() && l.poset().lower_covers(a).len() == 1)
        .collect();
    assert_eq!(by_def, by_covers, "join-irreducible characterizations disagree");
    l.poset().subposet(&by_def)
}

/// The lattice `J(P)` of poset ideals (downward-closed subsets) of `p`,
/// ordered by inclusion.  Labels encode the sorted member set.
pub fn ideals_lattice(p: &Poset) -> Result<Lattice> {
    ideals_lattice_capped(p, 100_000)
}

pub fn ideals_lattice_capped(p: &Poset, cap: usize) -> Result<Lattice> {
    let n = p.len();
    assert!(n < 64, "ideal enumeration uses u64 bitsets");
    let mut seen = std::collections::HashSet::new();
    let mut ideals: Vec<u64> = Vec::new();
    let mut frontier = vec![0u64];
    seen.insert(0u64);
    while let Some(i) = frontier.pop() {
        ideals.push(i);
        if ideals.len() > cap {
            return Err(Error::SizeLimitExceeded(format!(
                "more than {cap} poset ideals"
            )));
        }
        for x in 0..n {
            if i >> x & 1 == 1 {
                continue;
            }
            let below_in = (0..n).all(|y| !p.lt(y, x) || i >> y & 1 == 1);
            if below_in {
                let next = i | 1 << x;
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
    }
    ideals.sort_by_key(|&i| (i.count_ones(), members_of(i, n, p)));
    let labels: Vec<String> = ideals
        .iter()
        .map(|&i| format!("{{{}}}", members_of(i, n, p).join(",")))
        .collect();
    let m = ideals.len();
    let mut leq = vec![false; m * m];
    for a in 0..m {
        for b in 0..m {
            leq[a * m + b] = ideals[a] & !ideals[b] == 0;
        }
    }
    let l = as_lattice(&crate::poset::from_leq(labels, leq))?;
    assert_eq!(
        rank_profile(&l).d as usize,
        n,
        "rank of J(P) must equal |P|"
    );
    Ok(l)
}

fn members_of(ideal: u64, n: usize, p: &Poset) -> Vec<String> {
    let mut v: Vec<String> = (0..n)
        .filter(|&x| ideal >> x & 1 == 1)
        .map(|x| p.label(x).to_string())
        .collect();
    v.sort();
    v
}

/// The divisors of `n` ordered by divisibility, labeled by decimal value.
pub fn divisor_lattice(n: u64) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::BadInput("divisor lattice needs n >= 1".into()));
    }
    if n > 1_000_000_000_000 {
        return Err(Error::SizeLimitExceeded("factorization budget".into()));
    }
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    let m = divs.len();
    let labels: Vec<String> = divs.iter().map(|d| d.to_string()).collect();
    let mut leq = vec![false; m * m];
    for a in 0..m {
        for b in 0..m {
            leq[a * m + b] = divs[b] % divs[a] == 0;
        }
    }
    as_lattice(&crate::poset::from_leq(labels, leq))
}

/// Rank statistics of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    /// Longest chain from the bottom up to each element.
    pub rank_of: Vec<u32>,
    /// Rank of the lattice.
    pub d: u32,
    /// `rho[i]` = number of elements of rank `i`.
    pub rho: Vec<u32>,
    /// `max(rho[1..d])`, defined when `d >= 2`.
    pub theta: Option<u32>,
}

pub fn rank_profile(l: &Lattice) -> RankProfile {
    let rank_of: Vec<u32> = l.poset().heights().into_iter().map(|h| h as u32).collect();
    let d = rank_of[l.top()];
    let mut rho = vec![0u32; d as usize + 1];
    for &r in &rank_of {
        rho[r as usize] += 1;
    }
    let theta = if d >= 2 {
        Some(*rho[1..d as usize].iter().max().unwrap())
    } else {
        None
    };
    RankProfile {
        rank_of,
        d,
        rho,
        theta,
    }
}

/// Join/meet-preserving bijection between two lattices, if any.  An order
/// isomorphism between lattices preserves joins and meets, so this reduces
/// to poset isomorphism; the cheap invariants are compared first.
pub fn lattice_isomorphic(l1: &Lattice, l2: &Lattice) -> Option<Vec<usize>> {
    if l1.len() != l2.len() {
        return None;
    }
    if rank_profile(l1).rho != rank_profile(l2).rho {
        return None;
    }
    let iso = l1.poset().isomorphism(l2.poset())?;
    for a in 0..l1.len() {
        for b in 0..l1.len() {
            debug_assert_eq!(iso[l1.join(a, b)], l2.join(iso[a], iso[b]));
            debug_assert_eq!(iso[l1.meet(a, b)], l2.meet(iso[a], iso[b]));
        }
    }
    Some(iso)
}

/// The grid lattice `D_{2^r * 3^s}`, the standard `(r+1) x (s+1)` shape.
pub fn grid_lattice(r: u32, s: u32) -> Lattice {
    divisor_lattice(2u64.pow(r) * 3u64.pow(s)).expect("grid within budget")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain, from_covers};

    pub(crate) fn b3_poset() -> Poset {
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
        from_covers(&["1", "2", "3", "4", "5", "6", "7", "8"], &covers).unwrap()
    }

    #[test]
    fn antichain_is_not_a_lattice() {
        let err = as_lattice(&antichain(2)).unwrap_err();
        assert!(matches!(
            err,
            Error::NotALattice {
                reason: BoundFailure::NoUpperBound,
                ..
            }
        ));
    }

    #[test]
    fn figure_one_join_meet() {
        let l = as_lattice(&b3_poset()).unwrap();
        let i = |s: &str| l.poset().index_of(s).unwrap();
        assert_eq!(l.join(i("2"), i("3")), i("4"));
        assert_eq!(l.meet(i("2"), i("3")), i("1"));
        assert_eq!(l.bottom(), i("1"));
        assert_eq!(l.top(), i("8"));
    }

    #[test]
    fn chains_are_lattices() {
        let l = as_lattice(&chain(4)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(l.join(a, b), a.max(b));
                assert_eq!(l.meet(a, b), a.min(b));
            }
        }
    }

    #[test]
    fn diamond_m3_is_not_distributive() {
        let p = from_covers(
            &["0", "a", "b", "c", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "1"),
                ("b", "1"),
                ("c", "1"),
            ],
        )
        .unwrap();
        let l = as_lattice(&p).unwrap();
        assert!(!is_distributive(&l));
    }

    #[test]
    fn boolean_and_divisor_lattices_are_distributive() {
        assert!(is_distributive(&as_lattice(&b3_poset()).unwrap()));
        assert!(is_distributive(&divisor_lattice(36).unwrap()));
    }

    #[test]
    fn join_irreducibles_examples() {
        let l = as_lattice(&chain(3)).unwrap();
        let p = join_irreducibles(&l);
        assert_eq!(p.len(), 2);
        assert_eq!(p.rank(), 1);

        let b3 = as_lattice(&b3_poset()).unwrap();
        let p = join_irreducibles(&b3);
        let mut labels: Vec<&str> = p.labels().iter().map(|s| s.as_str()).collect();
        labels.sort();
        assert_eq!(labels, ["2", "3", "6"]);
        assert_eq!(p.covers().len(), 0);

        let d36 = divisor_lattice(36).unwrap();
        let p = join_irreducibles(&d36);
        let mut labels: Vec<&str> = p.labels().iter().map(|s| s.as_str()).collect();
        labels.sort();
        assert_eq!(labels, ["2", "3", "4", "9"]);
        assert_eq!(p.covers().len(), 2); // 2 < 4 and 3 < 9
    }

    #[test]
    fn ideals_of_antichain_and_chain() {
        let b = ideals_lattice(&antichain(3)).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(rank_profile(&b).rho, vec![1, 3, 3, 1]);
        let c = ideals_lattice(&chain(3)).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(rank_profile(&c).rho, vec![1, 1, 1, 1]);
    }

    #[test]
    fn birkhoff_roundtrip_on_b3() {
        let b3 = as_lattice(&b3_poset()).unwrap();
        let dual = ideals_lattice(&join_irreducibles(&b3)).unwrap();
        assert!(lattice_isomorphic(&b3, &dual).is_some());
    }

    #[test]
    fn divisor_lattice_shapes() {
        let d36 = divisor_lattice(36).unwrap();
        assert_eq!(
            d36.poset().labels(),
            &["1", "2", "3", "4", "6", "9", "12", "18", "36"]
        );
        let d54 = divisor_lattice(54).unwrap();
        assert_eq!(d54.len(), 8);
        assert!(lattice_isomorphic(&d54, &grid_lattice(1, 3)).is_some());
        let d24 = divisor_lattice(24).unwrap();
        assert!(lattice_isomorphic(&d54, &d24).is_some());
        let d30 = divisor_lattice(30).unwrap();
        let b3 = as_lattice(&b3_poset()).unwrap();
        assert!(lattice_isomorphic(&d30, &b3).is_some());
        assert!(lattice_isomorphic(&b3, &d36).is_none());
    }

    #[test]
    fn rank_profiles() {
        let b3 = as_lattice(&b3_poset()).unwrap();
        let rp = rank_profile(&b3);
        assert_eq!(rp.rho, vec![1, 3, 3, 1]);
        assert_eq!(rp.theta, Some(3));

        let rp = rank_profile(&divisor_lattice(54).unwrap());
        assert_eq!(rp.rho, vec![1, 2, 2, 2, 1]);
        assert_eq!(rp.theta, Some(2));

        let rp = rank_profile(&as_lattice(&chain(5)).unwrap());
        assert_eq!(rp.rho, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn divisor_six_is_two_by_two() {
        let d6 = divisor_lattice(6).unwrap();
        let sq = ideals_lattice(&antichain(2)).unwrap();
        assert!(lattice_isomorphic(&d6, &sq).is_some());
    }

    #[test]
    fn rank_modularity_on_distributive_fixtures() {
        for l in [
            as_lattice(&b3_poset()).unwrap(),
            divisor_lattice(36).unwrap(),
            divisor_lattice(54).unwrap(),
            divisor_lattice(108).unwrap(),
        ] {
            let rp = rank_profile(&l);
            for a in 0..l.len() {
                for b in 0..l.len() {
                    assert_eq!(
                        rp.rank_of[a] + rp.rank_of[b],
                        rp.rank_of[l.join(a, b)] + rp.rank_of[l.meet(a, b)]
                    );
                }
            }
        }
    }

    #[test]
    fn join_meet_axioms_exhaustive() {
        for l in [
            as_lattice(&b3_poset()).unwrap(),
            divisor_lattice(54).unwrap(),
            ideals_lattice(&antichain(3)).unwrap(),
        ] {
            let n = l.len();
            for a in 0..n {
                assert_eq!(l.join(a, a), a);
                assert_eq!(l.meet(a, a), a);
                for b in 0..n {
                    assert_eq!(l.join(a, b), l.join(b, a));
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    for c in 0..n {
                        assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                        assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn interval_of_divisor_lattice() {
        let d108 = divisor_lattice(108).unwrap();
        let a = d108.poset().index_of("1").unwrap();
        let b = d108.poset().index_of("54").unwrap();
        let iv = d108.interval(a, b).unwrap();
        assert!(lattice_isomorphic(&iv, &divisor_lattice(54).unwrap()).is_some());
    }
}
