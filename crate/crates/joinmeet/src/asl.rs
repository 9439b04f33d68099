//! Straightening laws: standard monomials, straightening relations, the
//! ASL-1 / ASL-2 / weakly-ASL checks, the transfer criterion through the
//! initial algebra, the Hibi toric presentation, and the Pluecker identity
//! on thin divisor lattices.

use crate::classify::QLattice;
use crate::kernel::{KernelEngine, PresentationMap};
use crate::lattice::{divisor_lattice, join_irreducibles, Lattice};
use crate::linalg::{self, SparseVec};
use crate::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial, Ring, RingHandle};
use crate::poset::Poset;
use crate::{Budget, Error, Result};
use num::{BigInt, BigRational, Integer, One};
use std::collections::HashMap;

pub use crate::classify::q_lattice;

/// A multichain `g1 <= g2 <= ... <= gd` of poset element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMonomial {
    pub chain: Vec<usize>,
}

/// All multichains of length `d`, deterministically ordered.  Each chain is
/// listed once, sorted along the poset order.
pub fn standard_monomials(p: &Poset, d: usize) -> Vec<StandardMonomial> {
    fn rec(p: &Poset, d: usize, cur: &mut Vec<usize>, out: &mut Vec<StandardMonomial>) {
        if cur.len() == d {
            out.push(StandardMonomial { chain: cur.clone() });
            return;
        }
        for e in 0..p.len() {
            if cur.last().map_or(true, |&last| p.leq(last, e)) {
                cur.push(e);
                rec(p, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(p, d, &mut Vec::new(), &mut out);
    out
}

impl StandardMonomial {
    /// The product of the generator images along the chain.
    pub fn image(&self, m: &PresentationMap, injection: &[usize]) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(m.target(), BigRational::one());
        for &e in &self.chain {
            acc = acc.mul(&m.images()[injection[e]])?;
        }
        Ok(acc)
    }

    pub fn render(&self, p: &Poset) -> String {
        self.chain
            .iter()
            .map(|&e| p.label(e).to_string())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Shared interner turning polynomials into integer rows; each row is
/// scaled by the lcm of its denominators, returned alongside.
fn integer_rows(polys: &[Polynomial]) -> (Vec<SparseVec<BigInt>>, Vec<BigInt>) {
    let mut intern: HashMap<Monomial, u32> = HashMap::new();
    let mut rows = Vec::new();
    let mut lambdas = Vec::new();
    for p in polys {
        let mut lambda = BigInt::one();
        for (_, c) in p.terms() {
            lambda = lambda.lcm(c.denom());
        }
        let mut row: SparseVec<BigInt> = p
            .terms()
            .map(|(m, c)| {
                let next = intern.len() as u32;
                let id = *intern.entry(m.clone()).or_insert(next);
                (id, c.numer() * (&lambda / c.denom()))
            })
            .collect();
        row.sort_by_key(|&(c, _)| c);
        rows.push(row);
        lambdas.push(lambda);
    }
    (rows, lambdas)
}

/// Expression of a product of two incomparable generators in the standard
/// monomial basis.
#[derive(Debug, Clone)]
pub struct StraighteningRelation {
    pub alpha: usize,
    pub beta: usize,
    pub terms: Vec<(BigRational, StandardMonomial)>,
    /// Every term's minimal chain element lies below both factors.
    pub asl2_ok: bool,
    /// The expression is the unique one over all standard monomials.
    pub unique: bool,
}

impl StraighteningRelation {
    /// The relation as a polynomial `y_a y_b - sum r_i y_(g_i1) y_(g_i2) ...`
    /// in the presentation variables.
    pub fn as_presentation_polynomial(
        &self,
        m: &PresentationMap,
        injection: &[usize],
    ) -> Polynomial {
        let lead = Monomial::var(injection[self.alpha]).mul(&Monomial::var(injection[self.beta]));
        let mut p = Polynomial::term(m.source(), lead, BigRational::one());
        for (c, sm) in &self.terms {
            let mono = sm
                .chain
                .iter()
                .fold(Monomial::one(), |acc, &e| acc.mul(&Monomial::var(injection[e])));
            p = p
                .sub(&Polynomial::term(m.source(), mono, c.clone()))
                .expect("same ring");
        }
        p
    }
}

/// Solves for an expression of `target` in the images of the given
/// standard monomials; echelon-deterministic coefficients.
fn express_in_standard(
    m: &PresentationMap,
    injection: &[usize],
    monomials: &[StandardMonomial],
    target: &Polynomial,
) -> Result<Option<(Vec<BigRational>, bool)>> {
    let mut polys: Vec<Polynomial> = Vec::with_capacity(monomials.len() + 1);
    for sm in monomials {
        polys.push(sm.image(m, injection)?);
    }
    polys.push(target.clone());
    let (mut rows, lambdas) = integer_rows(&polys);
    let target_row = rows.pop().expect("target present");
    let target_lambda = lambdas[lambdas.len() - 1].clone();
    match linalg::express_rational(&rows, &target_row) {
        None => Ok(None),
        Some((coeffs, unique)) => {
            let adjusted: Vec<BigRational> = coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| {
                    c * BigRational::new(lambdas[k].clone(), target_lambda.clone())
                })
                .collect();
            Ok(Some((adjusted, unique)))
        }
    }
}

/// Straightens the product `f_alpha f_beta` of two incomparable poset
/// elements: first looks for an expression whose terms all start below both
/// factors, then for any standard expression.  `NoExpression` witnesses an
/// ASL-1 failure.
pub fn straighten(
    m: &PresentationMap,
    p: &Poset,
    injection: &[usize],
    alpha: usize,
    beta: usize,
) -> Result<StraighteningRelation> {
    if p.comparable(alpha, beta) {
        return Err(Error::BadInput(format!(
            "straighten needs an incomparable pair, got {} and {}",
            p.label(alpha),
            p.label(beta)
        )));
    }
    let target = m.images()[injection[alpha]].mul(&m.images()[injection[beta]])?;
    let all = standard_monomials(p, 2);
    let below: Vec<StandardMonomial> = all
        .iter()
        .filter(|sm| {
            let g1 = sm.chain[0];
            p.leq(g1, alpha) && p.leq(g1, beta)
        })
        .cloned()
        .collect();
    // uniqueness is judged over the full standard basis
    let full = express_in_standard(m, injection, &all, &target)?;
    let Some((full_coeffs, unique)) = full else {
        return Err(Error::NoExpression(
            p.label(alpha).to_string(),
            p.label(beta).to_string(),
        ));
    };
    let restricted = express_in_standard(m, injection, &below, &target)?;
    let (coeffs, monomials, asl2_ok): (Vec<BigRational>, &[StandardMonomial], bool) =
        match &restricted {
            Some((c, _)) => (c.clone(), &below, true),
            None => (full_coeffs, &all, false),
        };
    let terms: Vec<(BigRational, StandardMonomial)> = coeffs
        .into_iter()
        .zip(monomials.iter().cloned())
        .filter(|(c, _)| !num::Zero::is_zero(c))
        .collect();
    Ok(StraighteningRelation {
        alpha,
        beta,
        terms,
        asl2_ok,
        unique,
    })
}

/// Per-degree ASL-1 verdicts: images of the degree-`d` standard monomials
/// are linearly independent and span the full degree-`d` piece of the
/// subalgebra (dimension equality against the graded evaluation rank).
pub fn asl1_check(
    m: &PresentationMap,
    p: &Poset,
    injection: &[usize],
    max_deg: u32,
    budget: &Budget,
) -> Result<Vec<bool>> {
    if p.len() != m.len() {
        return Err(Error::BadInput(
            "poset size must match the generator count".into(),
        ));
    }
    let mut hilbert = Vec::new();
    let mut eng = KernelEngine::<BigInt>::new(m, BigInt::one(), *budget);
    for _ in 1..=max_deg {
        hilbert.push(eng.advance()?.hilbert);
    }
    let mut out = Vec::new();
    for d in 1..=max_deg as usize {
        let sms = standard_monomials(p, d);
        let polys: Vec<Polynomial> = sms
            .iter()
            .map(|sm| sm.image(m, injection))
            .collect::<Result<_>>()?;
        let (rows, _) = integer_rows(&polys);
        let rank = linalg::rank(rows);
        out.push(rank == sms.len() && rank == hilbert[d - 1]);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PairVerdict {
    pub alpha: usize,
    pub beta: usize,
    pub relation: StraighteningRelation,
    /// Unique expression satisfying the minimal-element condition.
    pub asl2_ok: bool,
}

#[derive(Debug, Clone)]
pub struct AslReport {
    pub max_degree: u32,
    pub asl1: Vec<bool>,
    pub pairs: Vec<PairVerdict>,
    /// Every incomparable pair straightens with the minimal-element
    /// condition (existence only).
    pub weakly: bool,
    /// ASL-1 in all checked degrees plus unique condition-satisfying
    /// straightenings.
    pub full_asl: bool,
}

/// Runs the ASL checks for a generator family arranged along a poset.
pub fn asl_check(
    m: &PresentationMap,
    p: &Poset,
    injection: &[usize],
    max_deg: u32,
    budget: &Budget,
) -> Result<AslReport> {
    let asl1 = asl1_check(m, p, injection, max_deg, budget)?;
    let mut pairs = Vec::new();
    let mut weakly = true;
    let mut asl2_all = true;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p.comparable(a, b) {
                continue;
            }
            match straighten(m, p, injection, a, b) {
                Ok(rel) => {
                    let ok = rel.asl2_ok && rel.unique;
                    weakly &= rel.asl2_ok;
                    asl2_all &= ok;
                    pairs.push(PairVerdict {
                        alpha: a,
                        beta: b,
                        asl2_ok: ok,
                        relation: rel,
                    });
                }
                Err(Error::NoExpression(_, _)) => {
                    weakly = false;
                    asl2_all = false;
                }
                Err(e) => return Err(e),
            }
        }
    }
    let full_asl = asl1.iter().all(|&b| b) && asl2_all;
    Ok(AslReport {
        max_degree: max_deg,
        asl1,
        pairs,
        weakly,
        full_asl,
    })
}

#[derive(Debug, Clone)]
pub struct TransferReport {
    pub target: AslReport,
    pub initial: AslReport,
    /// The transfer criterion: initial algebra a full ASL plus target
    /// weakly ASL must force the target to be a full ASL.
    pub consistent: bool,
}

/// The transfer criterion through the initial algebra: check the monomial
/// images `in(f_e)` as an ASL on the same poset, check the target, and
/// verify the implication the two lemmas give.
pub fn asl_transfer_check(
    m: &PresentationMap,
    order_on_s: &MonomialOrder,
    p: &Poset,
    injection: &[usize],
    max_deg: u32,
    budget: &Budget,
) -> Result<TransferReport> {
    let monomial_images: Vec<Polynomial> = m
        .images()
        .iter()
        .map(|f| {
            let (lm, _) = f.leading_term(order_on_s).expect("nonzero image");
            Polynomial::term(m.target(), lm.clone(), BigRational::one())
        })
        .collect();
    let initial_map = PresentationMap::new(m.target(), m.tags().to_vec(), monomial_images)?;
    let initial = asl_check(&initial_map, p, injection, max_deg, budget)?;
    let target = asl_check(m, p, injection, max_deg, budget)?;
    let consistent = !(initial.full_asl && target.weakly) || target.full_asl;
    Ok(TransferReport {
        target,
        initial,
        consistent,
    })
}

/// The uniform-degree Hibi presentation of a distributive lattice: over
/// `K[x_p : p join-irreducible][t]`, element `a` maps to
/// `t^(1+|P|-|I_a|) * prod_(p in I_a) x_p`. All images share degree
/// `|P| + 1` and satisfy `phi(a) phi(b) = phi(a∨b) phi(a∧b)`.
pub fn hibi_presentation(l: &Lattice) -> Result<PresentationMap> {
    let p = join_irreducibles(l);
    let np = p.len();
    let mut vars: Vec<String> = p.labels().iter().map(|s| format!("x[{s}]")).collect();
    vars.push("t".to_string());
    let ring = Ring::new(vars);
    let ji_in_l: Vec<usize> = (0..np)
        .map(|q| l.poset().index_of(p.label(q)).expect("subposet label"))
        .collect();
    let mut tags = Vec::new();
    let mut images = Vec::new();
    for a in 0..l.len() {
        let mut exps: Vec<(u32, u32)> = Vec::new();
        let mut size = 0;
        for q in 0..np {
            if l.leq(ji_in_l[q], a) {
                exps.push((q as u32, 1));
                size += 1;
            }
        }
        exps.push((np as u32, (1 + np - size) as u32));
        tags.push(l.label(a).to_string());
        images.push(Polynomial::term(
            &ring,
            Monomial::from_exps(exps),
            BigRational::one(),
        ));
    }
    PresentationMap::new(&ring, tags, images)
}

/// Maps the pair poset of a thin lattice onto the generator indices of its
/// join-meet presentation: pair `(i, j)` to the generator tagged with the
/// element pair `x_i, y_j`.
pub fn q_injection(l: &Lattice, q: &QLattice, m: &PresentationMap) -> Vec<usize> {
    q.pairs
        .iter()
        .map(|&(i, j)| {
            let a = q.labeling.x_chain[i as usize - 1];
            let b = q.labeling.y_chain[j as usize - 1];
            let (lo, hi) = (a.min(b), a.max(b));
            let tag = format!("{},{}", l.label(lo), l.label(hi));
            m.tags()
                .iter()
                .position(|t| *t == tag)
                .expect("pair tag present")
        })
        .collect()
}

// --- the Pluecker identity on thin divisor lattices ------------------------

/// The ring `K[x_0..x_(n-1), y_1..y_n]` of the divisor-chain labeling.
pub fn chain_ring(n: usize) -> RingHandle {
    let mut vars: Vec<String> = (0..n).map(|a| format!("x{a}")).collect();
    vars.extend((1..=n).map(|b| format!("y{b}")));
    Ring::new(vars)
}

/// `f_(a,b) = x_a y_b - y_(a+1) x_(b-1)` for the incomparable pair
/// `(x_a, y_b)` of `D_(2*3^(n-1))`, `1 <= b <= a <= n-1`.
pub fn chain_binomial(ring: &RingHandle, n: usize, a: usize, b: usize) -> Polynomial {
    let x = |i: usize| Polynomial::var(ring, i);
    let y = |j: usize| Polynomial::var(ring, n + j - 1);
    x(a)
        .mul(&y(b))
        .unwrap()
        .sub(&y(a + 1).mul(&x(b - 1)).unwrap())
        .unwrap()
}

/// Checks one instance of the quadratic relation
/// `f_(l,i) f_(k,j) = f_(k,i) f_(l,j) - f_(j-1,i) f_(l,k+1)` by symbolic
/// expansion.  The indices must satisfy `1 <= i < j <= k < l <= n-1`.
pub fn plucker_tuple_identity(n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<bool> {
    if !(1 <= i && i < j && j <= k && k < l && l <= n - 1) {
        return Err(Error::BadInput(format!(
            "tuple ({i},{j},{k},{l}) violates 1 <= i < j <= k < l <= {}",
            n - 1
        )));
    }
    let ring = chain_ring(n);
    let f = |a: usize, b: usize| chain_binomial(&ring, n, a, b);
    let lhs = f(l, i).mul(&f(k, j))?;
    let rhs = f(k, i)
        .mul(&f(l, j))?
        .sub(&f(j - 1, i).mul(&f(l, k + 1))?)?;
    Ok(lhs == rhs)
}

/// Full sweep of the identity over all valid tuples, plus a cross-check
/// that the symbols really are the join-meet binomials of
/// `D_(2*3^(n-1))` under the chain labeling.
pub fn plucker_identity_check(n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::BadInput("need n >= 2".into()));
    }
    let ring = chain_ring(n);
    // identify ring variables with lattice elements: x_a = 3^a, y_b = 2*3^(b-1)
    let l = divisor_lattice(2 * 3u64.pow(n as u32 - 1))?;
    let var_of_label: HashMap<String, usize> = (0..n)
        .map(|a| (3u64.pow(a as u32).to_string(), a))
        .chain((1..=n).map(|b| (
            (2 * 3u64.pow(b as u32 - 1)).to_string(),
            n + b - 1,
        )))
        .collect();
    let images: Vec<Polynomial> = (0..l.len())
        .map(|e| Polynomial::var(&ring, var_of_label[l.label(e)]))
        .collect();
    let sys = crate::binomials::join_meet_system(&l)?;
    for (idx, &(a, b)) in sys.pairs().iter().enumerate() {
        let mapped = sys.binomials()[idx].substitute(&ring, &images)?;
        // the lattice pair { x_a, y_b } has a >= b
        let (xa, yb) = {
            let la = l.label(a);
            let lb = l.label(b);
            let va = var_of_label[la];
            let vb = var_of_label[lb];
            if va < n { (va, vb - n + 1) } else { (vb, va - n + 1) }
        };
        let expect = chain_binomial(&ring, n, xa, yb);
        if mapped != expect && mapped.neg() != expect {
            return Ok(false);
        }
    }
    for i in 1..n {
        for j in i + 1..n {
            for k in j..n {
                for l2 in k + 1..n {
                    if !plucker_tuple_identity(n, i, j, k, l2)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
