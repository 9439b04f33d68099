//! Exact sparse multivariate polynomials over the rationals.

use crate::order::MonomialOrder;
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

/// A polynomial ring: variable names plus grading weights (default 1).
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    vars: Vec<String>,
    weights: Vec<u32>,
}

pub type RingHandle = Arc<Ring>;

impl Ring {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> RingHandle {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let weights = vec![1; vars.len()];
        Arc::new(Ring { vars, weights })
    }

    pub fn with_weights<S: Into<String>>(vars: Vec<S>, weights: Vec<u32>) -> RingHandle {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        assert_eq!(vars.len(), weights.len());
        Arc::new(Ring { vars, weights })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }
}

fn same_ring(a: &RingHandle, b: &RingHandle) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A monomial as a sparse exponent map; no zero exponents are stored and
/// the total degree is cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: Vec::new(),
            degree: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        Monomial {
            exps: vec![(i as u32, 1)],
            degree: 1,
        }
    }

    pub fn from_exps(mut exps: Vec<(u32, u32)>) -> Self {
        exps.retain(|&(_, e)| e > 0);
        exps.sort_unstable_by_key(|&(v, _)| v);
        let degree = exps.iter().map(|&(_, e)| e).sum();
        Monomial { exps, degree }
    }

    pub fn exps(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps
            .iter()
            .find(|&&(v, _)| v as usize == var)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weighted_degree(&self, ring: &Ring) -> u64 {
        self.exps
            .iter()
            .map(|&(v, e)| ring.weight(v as usize) as u64 * e as u64)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            match (self.exps.get(i), other.exps.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) if v == w => {
                    exps.push((v, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(v, e)), Some(&(w, _))) if v < w => {
                    exps.push((v, e));
                    i += 1;
                }
                (Some(_), Some(&(w, f))) => {
                    exps.push((w, f));
                    j += 1;
                }
                (Some(&(v, e)), None) => {
                    exps.push((v, e));
                    i += 1;
                }
                (None, Some(&(w, f))) => {
                    exps.push((w, f));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    /// `self / other`, or `None` when not divisible.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            if let Some(&(w, f)) = other.exps.get(j) {
                if w < v {
                    return None; // other has a variable self lacks
                }
                if w == v {
                    if f > e {
                        return None;
                    }
                    rem = e - f;
                    j += 1;
                }
            }
            if rem > 0 {
                exps.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            exps,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.try_div(self).is_some()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            match (self.exps.get(i), other.exps.get(j)) {
                (Some(&(v, e)), Some(&(w, f))) if v == w => {
                    exps.push((v, e.max(f)));
                    i += 1;
                    j += 1;
                }
                (Some(&(v, e)), Some(&(w, _))) if v < w => {
                    exps.push((v, e));
                    i += 1;
                }
                (Some(_), Some(&(w, f))) => {
                    exps.push((w, f));
                    j += 1;
                }
                (Some(&(v, e)), None) => {
                    exps.push((v, e));
                    i += 1;
                }
                (None, Some(&(w, f))) => {
                    exps.push((w, f));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial::from_exps(exps)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                std::cmp::Ordering::Equal => return false,
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
            }
        }
        true
    }
}

/// An exact sparse polynomial; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    ring: RingHandle,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ring: &RingHandle) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &RingHandle, c: BigRational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(ring: &RingHandle, c: i64) -> Self {
        Self::constant(ring, BigRational::from(BigInt::from(c)))
    }

    pub fn var(ring: &RingHandle, i: usize) -> Self {
        Self::term(ring, Monomial::var(i), BigRational::one())
    }

    pub fn term(ring: &RingHandle, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            out.insert(m1.mul(m), c1 * c);
        }
        out
    }

    /// Leading (maximal) term under the given order.
    pub fn leading_term<'a>(&'a self, order: &MonomialOrder) -> Option<(&'a Monomial, &'a BigRational)> {
        self.terms
            .iter()
            .max_by(|(m1, _), (m2, _)| order.cmp(m1, m2))
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scalar_mul(&inv)
            }
        }
    }

    /// Weighted-homogeneous degree, or `None` when the terms mix degrees.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(&self.ring));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Substitutes `images[i]` for variable `i`; images share a target ring.
    pub fn substitute(&self, target: &RingHandle, images: &[Polynomial]) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(target, c.clone());
            for &(v, e) in m.exps() {
                for _ in 0..e {
                    acc = acc.mul(&images[v as usize])?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

/// Remainder of `p` on division by `divisors`: no remainder term is
/// divisible by any divisor's leading term.
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Result<Polynomial> {
    let ring = p.ring().clone();
    let leads: Vec<(Monomial, BigRational)> = divisors
        .iter()
        .map(|d| {
            d.leading_term(order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .ok_or_else(|| Error::BadInput("division by zero polynomial".into()))
        })
        .collect::<Result<_>>()?;
    for d in divisors {
        if !same_ring(&ring, d.ring()) {
            return Err(Error::RingMismatch);
        }
    }
    let mut work = p.clone();
    let mut remainder = Polynomial::zero(&ring);
    while let Some((m, c)) = work
        .leading_term(order)
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        let mut reduced = false;
        for (i, (lm, lc)) in leads.iter().enumerate() {
            if let Some(q) = m.try_div(lm) {
                let factor = &c / lc;
                work = work.sub(&divisors[i].mul_term(&q, &factor))?;
                reduced = true;
                break;
            }
        }
        if !reduced {
            remainder.insert(m.clone(), c.clone());
            let mut w = work;
            w.terms.remove(&m);
            work = w;
        }
    }
    Ok(remainder)
}

fn format_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders a term's monomial part, e.g. `x[2]*x[3]^2`.
fn format_monomial(ring: &Ring, m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut s = String::new();
    for (k, &(v, e)) in m.exps().iter().enumerate() {
        if k > 0 {
            s.push('*');
        }
        s.push_str(ring.var_name(v as usize));
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    s
}

/// Canonical text form: terms sorted descending by the active order,
/// coefficients as `num` or `num/den`, unit coefficients elided.
pub fn format_poly(p: &Polynomial, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Monomial, &BigRational)> = p.terms().collect();
    terms.sort_by(|(m1, _), (m2, _)| order.cmp(m2, m1));
    let mut s = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -(*c).clone() } else { (*c).clone() };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(&p.ring, m);
        if abs.is_one() {
            s.push_str(&mono);
        } else if mono == "1" {
            s.push_str(&format_coeff(&abs));
        } else {
            s.push_str(&format_coeff(&abs));
            s.push('*');
            s.push_str(&mono);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_ring() -> RingHandle {
        Ring::new(vec!["x", "y"])
    }

    #[test]
    fn product_of_sum_and_difference() {
        let r = xy_ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let expected = x
            .mul(&x)
            .unwrap()
            .sub(&y.mul(&y).unwrap())
            .unwrap();
        assert_eq!(p, expected);
        assert_eq!(format_poly(&p, &MonomialOrder::Lex), "x^2 - y^2");
    }

    #[test]
    fn normal_form_examples() {
        let r = xy_ring();
        let x = Polynomial::var(&r, 0);
        let x2 = x.mul(&x).unwrap();
        let nf = normal_form(&x2, &[x.clone()], &MonomialOrder::Lex).unwrap();
        assert!(nf.is_zero());

        // dividing x^2*y + 1 by {x*y - 1} leaves x + 1
        let y = Polynomial::var(&r, 1);
        let one = Polynomial::from_int(&r, 1);
        let f = x2.mul(&y).unwrap().add(&one).unwrap();
        let d = x.mul(&y).unwrap().sub(&one).unwrap();
        let nf = normal_form(&f, &[d], &MonomialOrder::DegLex).unwrap();
        assert_eq!(nf, x.add(&one).unwrap());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r1 = xy_ring();
        let r2 = Ring::new(vec!["z"]);
        let err = Polynomial::var(&r1, 0).add(&Polynomial::var(&r2, 0));
        assert!(matches!(err, Err(Error::RingMismatch)));
    }

    #[test]
    fn monomial_division() {
        let m1 = Monomial::from_exps(vec![(0, 2), (1, 1)]);
        let m2 = Monomial::from_exps(vec![(0, 1)]);
        assert_eq!(m1.try_div(&m2), Some(Monomial::from_exps(vec![(0, 1), (1, 1)])));
        assert_eq!(m2.try_div(&m1), None);
        assert_eq!(m1.lcm(&m2), m1);
        assert!(m2.coprime(&Monomial::var(1)));
        assert!(!m1.coprime(&m2));
    }

    #[test]
    fn substitution_composes() {
        let r = xy_ring();
        let t = Ring::new(vec!["u"]);
        let u = Polynomial::var(&t, 0);
        let u2 = u.mul(&u).unwrap();
        // x -> u, y -> u^2 turns x*y - x into u^3 - u
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = x.mul(&y).unwrap().sub(&x).unwrap();
        let img = p.substitute(&t, &[u.clone(), u2]).unwrap();
        let u3 = u.mul(&u).unwrap().mul(&u).unwrap();
        assert_eq!(img, u3.sub(&u).unwrap());
    }
}
