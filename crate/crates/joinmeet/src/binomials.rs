//! Join-meet binomials `f_ij = x_i x_j - x_(i∨j) x_(i∧j)` of a lattice,
//! together with a monomial order under which `x_i x_j` leads.

use crate::lattice::{is_distributive, rank_profile, Lattice};
use crate::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial, Ring, RingHandle};
use crate::{Error, Result};
use num::{BigInt, BigRational};

/// The binomial system of a lattice: one ring variable per element, one
/// binomial per incomparable pair, and an order with `in(f_ij) = x_i x_j`.
#[derive(Debug, Clone)]
pub struct JoinMeetSystem {
    lattice: Lattice,
    ring: RingHandle,
    pairs: Vec<(usize, usize)>,
    binomials: Vec<Polynomial>,
    order: MonomialOrder,
}

impl JoinMeetSystem {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    /// Incomparable pairs `(i, j)`, `i < j` in element order, sorted.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn binomials(&self) -> &[Polynomial] {
        &self.binomials
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Display tag of the k-th generator, `i,j` by element label.
    pub fn pair_tag(&self, k: usize) -> String {
        let (i, j) = self.pairs[k];
        format!("{},{}", self.lattice.label(i), self.lattice.label(j))
    }

    pub fn binomial_for(&self, a: &str, b: &str) -> Option<&Polynomial> {
        let i = self.lattice.poset().index_of(a)?;
        let j = self.lattice.poset().index_of(b)?;
        let key = (i.min(j), i.max(j));
        self.pairs
            .iter()
            .position(|&p| p == key)
            .map(|k| &self.binomials[k])
    }
}

/// The ring `K[x_a : a in L]`, one variable per lattice element.
pub fn lattice_ring(l: &Lattice) -> RingHandle {
    Ring::new(
        l.poset()
            .labels()
            .iter()
            .map(|s| format!("x[{s}]"))
            .collect(),
    )
}

fn weight_order(l: &Lattice) -> MonomialOrder {
    let rp = rank_profile(l);
    let c = rp.d as u64 * rp.d as u64 + 1;
    let weights: Vec<u64> = rp
        .rank_of
        .iter()
        .map(|&r| c - (r as u64) * (r as u64))
        .collect();
    // tiebreak by lex over a linear extension (larger element, larger var)
    let ext = l.poset().linear_extension();
    let mut rank = vec![0u32; l.len()];
    for (pos, &v) in ext.iter().enumerate() {
        rank[v] = pos as u32;
    }
    MonomialOrder::weight(weights, MonomialOrder::LexRanked { rank })
}

/// Weight order with `weight(x_a) = C - rank(a)^2`: rank modularity makes
/// `x_i x_j` outweigh `x_(i∨j) x_(i∧j)` on every incomparable pair of a
/// distributive lattice.
pub fn rank_weight_order(l: &Lattice) -> Result<MonomialOrder> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    Ok(weight_order(l))
}

/// A weight order favoring the diagonal cells of the two-chain grid
/// coordinates.  On grid lattices this picks leading terms whose exponent
/// vectors can stay linearly independent where the rank-weight order's
/// cannot, so it serves as a second candidate for the algebraic
/// independence certificate.  `None` when the join-irreducible poset does
/// not split into two chains.
pub fn grid_diagonal_order(l: &Lattice) -> Result<Option<MonomialOrder>> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let Some(coords) = crate::classify::two_chain_coordinates(l) else {
        return Ok(None);
    };
    let weights: Vec<u64> = coords
        .iter()
        .map(|&(i, j)| if i == j { 1 } else { 0 })
        .collect();
    let ext = l.poset().linear_extension();
    let mut rank = vec![0u32; l.len()];
    for (pos, &v) in ext.iter().enumerate() {
        rank[v] = pos as u32;
    }
    Ok(Some(MonomialOrder::weight(
        weights,
        MonomialOrder::LexRanked { rank },
    )))
}

/// Builds the join-meet system, asserting the leading-term guarantee.
pub fn join_meet_system(l: &Lattice) -> Result<JoinMeetSystem> {
    let (sys, warnings) = join_meet_system_lenient(l);
    if let Some(w) = warnings.into_iter().next() {
        return Err(w);
    }
    Ok(sys)
}

/// Same, but collects order-guarantee failures as warnings instead of
/// failing; nothing is proved about non-distributive lattices, yet the
/// binomials themselves are still well defined.
pub fn join_meet_system_lenient(l: &Lattice) -> (JoinMeetSystem, Vec<Error>) {
    let ring = lattice_ring(l);
    let order = weight_order(l);
    let one = BigRational::from(BigInt::from(1));
    let mut pairs = Vec::new();
    let mut binomials = Vec::new();
    let mut warnings = Vec::new();
    for (i, j) in l.incomparable_pairs() {
        let lead = Monomial::var(i).mul(&Monomial::var(j));
        let trail = Monomial::var(l.join(i, j)).mul(&Monomial::var(l.meet(i, j)));
        let f = Polynomial::term(&ring, lead.clone(), one.clone())
            .sub(&Polynomial::term(&ring, trail, one.clone()))
            .expect("same ring");
        match f.leading_term(&order) {
            Some((m, _)) if *m == lead => {}
            _ => warnings.push(Error::OrderGuaranteeFailed(
                l.label(i).to_string(),
                l.label(j).to_string(),
            )),
        }
        pairs.push((i, j));
        binomials.push(f);
    }
    (
        JoinMeetSystem {
            lattice: l.clone(),
            ring,
            pairs,
            binomials,
            order,
        },
        warnings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{as_lattice, divisor_lattice};
    use crate::poly::format_poly;
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
    fn b3_has_nine_binomials() {
        let sys = join_meet_system(&b3()).unwrap();
        assert_eq!(sys.len(), 9);
        let tags: Vec<String> = (0..9).map(|k| sys.pair_tag(k)).collect();
        let mut expected = vec![
            "2,3", "2,6", "3,6", "4,5", "4,7", "5,7", "2,7", "3,5", "4,6",
        ];
        expected.sort();
        let mut got = tags.clone();
        got.sort();
        assert_eq!(got, expected);
        let f = sys.binomial_for("2", "3").unwrap();
        assert_eq!(format_poly(f, sys.order()), "x[2]*x[3] - x[1]*x[4]");
        let f = sys.binomial_for("5", "7").unwrap();
        assert_eq!(format_poly(f, sys.order()), "x[5]*x[7] - x[6]*x[8]");
    }

    #[test]
    fn chain_has_no_binomials() {
        let l = as_lattice(&chain(5)).unwrap();
        let sys = join_meet_system(&l).unwrap();
        assert!(sys.is_empty());
    }

    #[test]
    fn binomials_are_homogeneous_quadrics() {
        for l in [b3(), divisor_lattice(108).unwrap()] {
            let sys = join_meet_system(&l).unwrap();
            assert_eq!(sys.len(), l.incomparable_pairs().len());
            for f in sys.binomials() {
                assert_eq!(f.homogeneous_degree(), Some(2));
                assert_eq!(f.num_terms(), 2);
            }
        }
    }

    #[test]
    fn rank_weight_order_guarantee_exhaustive_on_d108() {
        let l = divisor_lattice(108).unwrap();
        let order = rank_weight_order(&l).unwrap();
        let sys = join_meet_system(&l).unwrap();
        for (k, &(i, j)) in sys.pairs().iter().enumerate() {
            let lead = Monomial::var(i).mul(&Monomial::var(j));
            let (m, _) = sys.binomials()[k].leading_term(&order).unwrap();
            assert_eq!(*m, lead);
        }
    }

    #[test]
    fn rank_weight_order_favors_incomparable_product_on_b3() {
        // pair (2,3): squared ranks 1+1 beat 0+4, so x2*x3 leads
        let l = b3();
        let order = rank_weight_order(&l).unwrap();
        let i2 = l.poset().index_of("2").unwrap();
        let i3 = l.poset().index_of("3").unwrap();
        let i1 = l.poset().index_of("1").unwrap();
        let i4 = l.poset().index_of("4").unwrap();
        let lead = Monomial::var(i2).mul(&Monomial::var(i3));
        let trail = Monomial::var(i1).mul(&Monomial::var(i4));
        assert_eq!(order.cmp(&lead, &trail), std::cmp::Ordering::Greater);
    }

    #[test]
    fn non_distributive_lattice_is_rejected_by_rank_weight_order() {
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
        assert!(matches!(rank_weight_order(&l), Err(Error::NotDistributive)));
    }

    #[test]
    fn d36_binomials_are_grid_minors_up_to_sign() {
        let l = divisor_lattice(36).unwrap();
        let sys = join_meet_system(&l).unwrap();
        assert_eq!(sys.len(), 9);
        // grid positions: divisor 2^a 3^b sits at (a, b)
        let ring = sys.ring();
        let var = |a: u32, b: u32| {
            let d = 2u64.pow(a) * 3u64.pow(b);
            let idx = l.poset().index_of(&d.to_string()).unwrap();
            Polynomial::var(ring, idx)
        };
        let mut minors = Vec::new();
        for a1 in 0..2 {
            for a2 in a1 + 1..3 {
                for b1 in 0..2 {
                    for b2 in b1 + 1..3 {
                        let m = var(a1, b1)
                            .mul(&var(a2, b2))
                            .unwrap()
                            .sub(&var(a1, b2).mul(&var(a2, b1)).unwrap())
                            .unwrap();
                        minors.push(m);
                    }
                }
            }
        }
        for f in sys.binomials() {
            assert!(
                minors.iter().any(|m| *m == *f || m.neg() == *f),
                "binomial is not a 2x2 minor"
            );
        }
    }
}
