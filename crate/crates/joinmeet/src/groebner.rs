//! Buchberger engine: reduced Groebner bases, degree-capped runs,
//! elimination ideals, and lifting a toric basis to a kernel basis.

use crate::order::MonomialOrder;
use crate::poly::{format_poly, normal_form, Monomial, Polynomial};
use crate::{Budget, Error, Result};
use num::{BigRational, One};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    /// Inter-reduced monic generators, sorted by leading monomial descending.
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
    /// Weighted-degree cap the run was truncated at, if any.
    pub degree_cap: Option<u64>,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_term(&self.order).expect("nonzero").0.clone())
            .collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.generators
            .iter()
            .flat_map(|g| g.terms().map(|(m, _)| m.degree()))
            .max()
            .unwrap_or(0)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        normal_form(p, &self.generators, &self.order)
    }

    pub fn render(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| format_poly(g, &self.order))
            .collect()
    }
}

fn spoly(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (lf, cf) = f.leading_term(order).expect("nonzero");
    let (lg, cg) = g.leading_term(order).expect("nonzero");
    let l = lf.lcm(lg);
    let mf = l.try_div(lf).unwrap();
    let mg = l.try_div(lg).unwrap();
    let one = BigRational::one();
    f.mul_term(&mf, &(&one / cf))
        .sub(&g.mul_term(&mg, &(&one / cg)))
        .expect("same ring")
}

/// Weighted degree of the pair's lcm, the normal selection key.
fn pair_degree(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> u64 {
    let (lf, _) = f.leading_term(order).expect("nonzero");
    let (lg, _) = g.leading_term(order).expect("nonzero");
    lf.lcm(lg).weighted_degree(f.ring())
}

/// Buchberger with normal pair selection, coprimality and chain pruning.
/// With `degree_cap` set and weighted-homogeneous input, the result is a
/// truncated basis valid for all questions up to that weighted degree.
pub fn buchberger(
    gens: &[Polynomial],
    order: &MonomialOrder,
    degree_cap: Option<u64>,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic(order));
        }
    }
    // pair queue keyed by lcm weighted degree (smallest first)
    let mut queue: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            queue.push(Reverse((pair_degree(&basis[i], &basis[j], order), i, j)));
            pending.insert((i, j));
        }
    }
    let mut processed: u64 = 0;
    while let Some(Reverse((deg, i, j))) = queue.pop() {
        pending.remove(&(i, j));
        if let Some(cap) = degree_cap {
            if deg > cap {
                continue;
            }
        }
        processed += 1;
        if processed > budget.gb_pairs {
            return Err(Error::BudgetExceeded(format!(
                "groebner pair queue past {}",
                budget.gb_pairs
            )));
        }
        let (li, _) = basis[i].leading_term(order).unwrap();
        let (lj, _) = basis[j].leading_term(order).unwrap();
        if li.coprime(lj) {
            continue;
        }
        // chain criterion: some k with lt(k) | lcm(i,j) and both chained
        // pairs already treated
        let lcm_ij = li.lcm(lj);
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (lk, _) = basis[k].leading_term(order).unwrap();
            lk.divides(&lcm_ij)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order)?;
        if !r.is_zero() {
            let r = r.monic(order);
            let new = basis.len();
            for k in 0..new {
                queue.push(Reverse((pair_degree(&basis[k], &r, order), k, new)));
                pending.insert((k, new));
            }
            basis.push(r);
        }
    }
    // minimalize: drop generators whose leading term another one divides
    let leads: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_term(order).unwrap().0.clone())
        .collect();
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] && leads[j].divides(&leads[i]) && (leads[i] != leads[j] || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let kept: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // full inter-reduction for the reduced basis
    let mut reduced: Vec<Polynomial> = Vec::new();
    for i in 0..kept.len() {
        let others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let r = normal_form(&kept[i], &others, order)?;
        assert!(!r.is_zero(), "minimal generator reduced to zero");
        reduced.push(r.monic(order));
    }
    reduced.sort_by(|a, b| {
        let (la, _) = a.leading_term(order).unwrap();
        let (lb, _) = b.leading_term(order).unwrap();
        order.cmp(lb, la)
    });
    let gb = GroebnerBasis {
        generators: reduced,
        order: order.clone(),
        reduced: true,
        degree_cap,
    };
    verify_buchberger_criterion(&gb)?;
    Ok(gb)
}

/// Reduces every S-polynomial of the basis to zero; this is asserted on all
/// produced bases rather than assumed.  For a degree-capped run only pairs
/// within the cap are binding.
pub fn verify_buchberger_criterion(gb: &GroebnerBasis) -> Result<()> {
    for i in 0..gb.generators.len() {
        for j in i + 1..gb.generators.len() {
            if let Some(cap) = gb.degree_cap {
                if pair_degree(&gb.generators[i], &gb.generators[j], &gb.order) > cap {
                    continue;
                }
            }
            let s = spoly(&gb.generators[i], &gb.generators[j], &gb.order);
            let r = normal_form(&s, &gb.generators, &gb.order)?;
            if !r.is_zero() {
                return Err(Error::TheoremViolation(format!(
                    "S-polynomial of generators {i} and {j} does not reduce to zero"
                )));
            }
        }
    }
    Ok(())
}

/// Groebner basis of `ideal(gens) ∩ K[keep]` via a block order that
/// eliminates the complement; `inner` orders the kept variables.
pub fn eliminate(
    gens: &[Polynomial],
    keep: &[bool],
    inner: MonomialOrder,
    degree_cap: Option<u64>,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let eliminated: Vec<bool> = keep.iter().map(|k| !k).collect();
    let order = MonomialOrder::block(eliminated, MonomialOrder::DegRevLex, inner.clone());
    let gb = buchberger(gens, &order, degree_cap, budget)?;
    let kept: Vec<Polynomial> = gb
        .generators
        .into_iter()
        .filter(|g| {
            g.terms()
                .all(|(m, _)| m.exps().iter().all(|&(v, _)| keep[v as usize]))
        })
        .collect();
    Ok(GroebnerBasis {
        generators: kept,
        order: inner,
        reduced: true,
        degree_cap,
    })
}

/// Groebner basis of the toric ideal `ker(y_e -> in(f_e))`, computed by
/// elimination in a combined ring with the `y` block kept, under
/// `order_on_a`.  Every basis element is checked to be a binomial.
pub fn toric_initial_kernel(
    m: &crate::kernel::PresentationMap,
    order_on_s: &MonomialOrder,
    order_on_a: &MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let s = m.len();
    let nx = m.target().nvars();
    // combined ring: y variables first so `order_on_a` applies unchanged
    let mut vars: Vec<String> = m.source().var_names().to_vec();
    vars.extend(m.target().var_names().iter().cloned());
    let combined = crate::poly::Ring::new(vars);
    let mut gens = Vec::new();
    for (k, f) in m.images().iter().enumerate() {
        let (lm, _) = f
            .leading_term(order_on_s)
            .ok_or_else(|| Error::BadInput("zero image".into()))?;
        let shifted = Monomial::from_exps(
            lm.exps().iter().map(|&(v, e)| (v + s as u32, e)).collect(),
        );
        let g = Polynomial::var(&combined, k)
            .sub(&Polynomial::term(
                &combined,
                shifted,
                num::BigRational::one(),
            ))
            .expect("same ring");
        gens.push(g);
    }
    let keep: Vec<bool> = (0..s + nx).map(|v| v < s).collect();
    let gb = eliminate(&gens, &keep, order_on_a.clone(), None, budget)?;
    let down: Vec<Polynomial> = gb
        .generators
        .iter()
        .map(|g| {
            let mut out = Polynomial::zero(m.source());
            for (mono, c) in g.terms() {
                out = out
                    .add(&Polynomial::term(m.source(), mono.clone(), c.clone()))
                    .expect("same ring");
            }
            out
        })
        .collect();
    for g in &down {
        assert!(g.num_terms() <= 2, "toric kernel basis element is not a binomial");
    }
    Ok(GroebnerBasis {
        generators: down,
        order: order_on_a.clone(),
        reduced: true,
        degree_cap: None,
    })
}

/// Lifts a Groebner basis of the toric kernel of the leading-monomial map
/// to one of `ker(pi)`: each toric basis element needs a kernel element
/// with the same initial monomial.  Candidates come from the exact graded
/// kernel, echelonized against `order_on_a`; the chosen lift is the reduced
/// representative with that leading monomial.  The lifted set is then
/// confirmed by the full Buchberger criterion.  Fails with
/// `HypothesisUnmet(j)` when some initial monomial has no kernel lift.
pub fn lift_groebner(
    m: &crate::kernel::PresentationMap,
    order_on_s: &MonomialOrder,
    order_on_a: &MonomialOrder,
    max_degree: u32,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    // the recipe needs pairwise distinct initial monomials
    let mut leads: Vec<Monomial> = Vec::new();
    for f in m.images() {
        let (lm, _) = f
            .leading_term(order_on_s)
            .ok_or_else(|| Error::BadInput("zero image".into()))?;
        if leads.contains(lm) {
            return Err(Error::BadInput(
                "initial monomials of the images are not pairwise distinct".into(),
            ));
        }
        leads.push(lm.clone());
    }
    let toric = toric_initial_kernel(m, order_on_s, order_on_a, budget)?;
    let mut lifted: Vec<Polynomial> = Vec::new();
    let mut slices: std::collections::HashMap<u32, Vec<(Monomial, Polynomial)>> =
        std::collections::HashMap::new();
    for (j, g) in toric.generators.iter().enumerate() {
        let (in_g, _) = g.leading_term(order_on_a).expect("nonzero");
        let d = in_g.degree();
        if d > max_degree {
            return Err(Error::BudgetExceeded(format!(
                "toric basis element of degree {d} beyond the lift cap {max_degree}"
            )));
        }
        let slice = match slices.entry(d) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(kernel_slice_by_order(m, d, order_on_a, budget)?)
            }
        };
        match slice.iter().find(|(lm, _)| lm == in_g) {
            Some((_, h)) => lifted.push(h.clone()),
            None => return Err(Error::HypothesisUnmet(j)),
        }
    }
    lifted.sort_by(|a, b| {
        let (la, _) = a.leading_term(order_on_a).unwrap();
        let (lb, _) = b.leading_term(order_on_a).unwrap();
        order_on_a.cmp(lb, la)
    });
    lifted.dedup();
    let gb = GroebnerBasis {
        generators: lifted,
        order: order_on_a.clone(),
        reduced: false,
        degree_cap: None,
    };
    verify_buchberger_criterion(&gb)?;
    Ok(gb)
}

/// The degree-`d` kernel of the presentation, echelonized with coordinates
/// sorted descending under `order`: one reduced representative per leading
/// monomial.
fn kernel_slice_by_order(
    m: &crate::kernel::PresentationMap,
    d: u32,
    order: &MonomialOrder,
    budget: &Budget,
) -> Result<Vec<(Monomial, Polynomial)>> {
    use crate::linalg::SparseVec;
    use num::BigInt;
    let (tuples, kernel) = crate::kernel::rational_kernel_slice(m, d, budget)?;
    let monos: Vec<Monomial> = tuples
        .iter()
        .map(|t| crate::kernel::tuple_to_monomial(t))
        .collect();
    // permutation: position 0 = largest monomial under `order`
    let mut perm: Vec<usize> = (0..monos.len()).collect();
    perm.sort_by(|&a, &b| order.cmp(&monos[b], &monos[a]));
    let mut pos_of = vec![0u32; monos.len()];
    for (pos, &old) in perm.iter().enumerate() {
        pos_of[old] = pos as u32;
    }
    let permuted: Vec<SparseVec<BigInt>> = kernel
        .iter()
        .map(|v| {
            let mut w: SparseVec<BigInt> = v
                .iter()
                .map(|(ti, c)| (pos_of[*ti as usize], c.clone()))
                .collect();
            w.sort_by_key(|&(c, _)| c);
            w
        })
        .collect();
    let rref = crate::linalg::reduced_echelon(permuted);
    Ok(rref
        .into_iter()
        .map(|v| {
            let lead = monos[perm[v[0].0 as usize]].clone();
            let mut p = Polynomial::zero(m.source());
            for (pos, c) in &v {
                p = p
                    .add(&Polynomial::term(
                        m.source(),
                        monos[perm[*pos as usize]].clone(),
                        num::BigRational::from(c.clone()),
                    ))
                    .expect("same ring");
            }
            (lead, p.monic(order))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, Ring};

    #[test]
    fn twisted_cubic_elimination() {
        // eliminate x from (t - x^2, u - x^3): the kernel is (t^3 - u^2)
        let r = Ring::new(vec!["x", "t", "u"]);
        let x = Polynomial::var(&r, 0);
        let t = Polynomial::var(&r, 1);
        let u = Polynomial::var(&r, 2);
        let g1 = t.sub(&x.mul(&x).unwrap()).unwrap();
        let g2 = u.sub(&x.mul(&x).unwrap().mul(&x).unwrap()).unwrap();
        let gb = eliminate(
            &[g1, g2],
            &[false, true, true],
            MonomialOrder::DegRevLex,
            None,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(gb.generators.len(), 1);
        let t3 = t.mul(&t).unwrap().mul(&t).unwrap();
        let u2 = u.mul(&u).unwrap();
        assert_eq!(gb.generators[0], t3.sub(&u2).unwrap());
    }

    #[test]
    fn keep_everything_returns_input_basis() {
        let r = Ring::new(vec!["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.mul(&x).unwrap().sub(&y).unwrap();
        let gb = eliminate(
            &[f.clone()],
            &[true, true],
            MonomialOrder::Lex,
            None,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(gb.generators, vec![f]);
    }

    #[test]
    fn lex_basis_of_parabola_pair() {
        // {x^2 - y, y^2 - x} under lex x > y: the basis contains y^4 - y
        let r = Ring::new(vec!["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.mul(&x).unwrap().sub(&y).unwrap();
        let g = y.mul(&y).unwrap().sub(&x).unwrap();
        let gb = buchberger(&[f, g], &MonomialOrder::Lex, None, &Budget::default()).unwrap();
        let y2 = y.mul(&y).unwrap();
        let y4 = y2.mul(&y2).unwrap();
        let expect = y4.sub(&y).unwrap();
        assert!(gb.generators.contains(&expect), "basis: {:?}", gb.render());
    }

    #[test]
    fn single_polynomial_is_its_own_basis() {
        let r = Ring::new(vec!["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let f = x
            .mul(&x)
            .unwrap()
            .scalar_mul(&BigRational::from_integer(3.into()));
        let gb = buchberger(&[f], &MonomialOrder::DegLex, None, &Budget::default()).unwrap();
        assert_eq!(gb.generators.len(), 1);
        assert_eq!(gb.generators[0], x.mul(&x).unwrap()); // monic
    }

    fn b3_system() -> crate::binomials::JoinMeetSystem {
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
        let p = crate::poset::from_covers(&["1", "2", "3", "4", "5", "6", "7", "8"], &covers)
            .unwrap();
        crate::binomials::join_meet_system(&crate::lattice::as_lattice(&p).unwrap()).unwrap()
    }

    #[test]
    fn b3_binomial_ideal_has_squarefree_quadratic_initial_ideal() {
        // the nine binomials are a Groebner basis of the ideal they
        // generate: the initial ideal is exactly the nine incomparable
        // products x_i x_j
        let sys = b3_system();
        let gb = buchberger(sys.binomials(), sys.order(), None, &Budget::default()).unwrap();
        let mut leads = gb.leading_monomials();
        let mut expected: Vec<Monomial> = sys
            .pairs()
            .iter()
            .map(|&(i, j)| Monomial::var(i).mul(&Monomial::var(j)))
            .collect();
        leads.sort();
        expected.sort();
        assert_eq!(leads, expected);
    }

    #[test]
    fn b3_presentation_ideal_eliminates_to_two_quadrics() {
        let sys = b3_system();
        let m = crate::kernel::PresentationMap::from_system(&sys);
        let gb = crate::kernel::eliminate_kernel(&m, &Budget::default(), |_| 0).unwrap();
        assert_eq!(gb.generators.len(), 2);
        assert!(gb.generators.iter().all(|g| g.homogeneous_degree() == Some(2)));
        for g in &gb.generators {
            assert!(m.substitute(g).unwrap().is_zero());
        }
    }

    #[test]
    fn lift_on_thin_divisor_lattice() {
        let l = crate::lattice::divisor_lattice(54).unwrap();
        let sys = crate::binomials::join_meet_system(&l).unwrap();
        let m = crate::kernel::PresentationMap::from_system(&sys);
        let gb = lift_groebner(
            &m,
            sys.order(),
            &MonomialOrder::DegRevLex,
            4,
            &Budget::default(),
        )
        .unwrap();
        // one Pluecker-type trinomial presents the kernel
        assert_eq!(gb.generators.len(), 1);
        assert_eq!(gb.generators[0].num_terms(), 3);
        assert!(m.substitute(&gb.generators[0]).unwrap().is_zero());
        // cross-check against the elimination oracle: same ideal
        let oracle = crate::kernel::eliminate_kernel(&m, &Budget::default(), |_| 0).unwrap();
        for g in &gb.generators {
            assert!(oracle.normal_form(g).unwrap().is_zero());
        }
        for g in &oracle.generators {
            assert!(gb.normal_form(g).unwrap().is_zero());
        }
    }

    #[test]
    fn lift_of_single_generator_is_empty() {
        let r = Ring::new(vec!["x", "y"]);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.mul(&y).unwrap();
        let m = crate::kernel::PresentationMap::new(&r, vec!["xy".into()], vec![f]).unwrap();
        let gb = lift_groebner(
            &m,
            &MonomialOrder::DegRevLex,
            &MonomialOrder::DegRevLex,
            3,
            &Budget::default(),
        )
        .unwrap();
        assert!(gb.generators.is_empty());
    }

    #[test]
    fn lift_hypothesis_fails_on_boolean_rank_three() {
        // the toric kernel of the monomial map has three quadrics, but the
        // presentation kernel is two dimensional in degree 2, so some
        // initial monomial cannot be matched
        let sys = b3_system();
        let m = crate::kernel::PresentationMap::from_system(&sys);
        let err = lift_groebner(
            &m,
            sys.order(),
            &MonomialOrder::DegRevLex,
            4,
            &Budget::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::HypothesisUnmet(_)));
    }
}
