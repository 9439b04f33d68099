//! Monomial orders: lex, graded (reverse) lex, weight and block orders.
//!
//! The convention throughout is that variable 0 is the largest variable
//! under `Lex`/`DegLex`/`DegRevLex`.  The ranked variants take an explicit
//! ranking (`rank[i]` larger means variable `i` is larger), which is how
//! reverse-lex orders induced by a linear extension of a poset are built.

use crate::poly::Monomial;
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    DegRevLex,
    /// Lex with an explicit variable ranking.
    LexRanked { rank: Vec<u32> },
    /// Graded reverse lex with an explicit variable ranking.
    GrevLexRanked { rank: Vec<u32> },
    /// Compare by total weight, break ties with another order.  Weights are
    /// nonnegative so that 1 stays minimal.
    Weight {
        weights: Vec<u64>,
        tiebreak: Box<MonomialOrder>,
    },
    /// Compare the restriction to a variable block first, then the rest.
    Block {
        first: Vec<bool>,
        outer: Box<MonomialOrder>,
        inner: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    pub fn weight(weights: Vec<u64>, tiebreak: MonomialOrder) -> Self {
        MonomialOrder::Weight {
            weights,
            tiebreak: Box::new(tiebreak),
        }
    }

    pub fn block(first: Vec<bool>, outer: MonomialOrder, inner: MonomialOrder) -> Self {
        MonomialOrder::Block {
            first,
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| lex(a, b)),
            MonomialOrder::DegRevLex => {
                a.degree().cmp(&b.degree()).then_with(|| revlex(a, b))
            }
            MonomialOrder::LexRanked { rank } => lex_ranked(a, b, rank),
            MonomialOrder::GrevLexRanked { rank } => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex_ranked(a, b, rank)),
            MonomialOrder::Weight { weights, tiebreak } => {
                let wa: u128 = a
                    .exps()
                    .iter()
                    .map(|&(v, e)| weights[v as usize] as u128 * e as u128)
                    .sum();
                let wb: u128 = b
                    .exps()
                    .iter()
                    .map(|&(v, e)| weights[v as usize] as u128 * e as u128)
                    .sum();
                wa.cmp(&wb).then_with(|| tiebreak.cmp(a, b))
            }
            MonomialOrder::Block {
                first,
                outer,
                inner,
            } => {
                let fa = restrict(a, first, true);
                let fb = restrict(b, first, true);
                outer.cmp(&fa, &fb).then_with(|| {
                    let ra = restrict(a, first, false);
                    let rb = restrict(b, first, false);
                    inner.cmp(&ra, &rb)
                })
            }
        }
    }
}

fn restrict(m: &Monomial, mask: &[bool], keep: bool) -> Monomial {
    Monomial::from_exps(
        m.exps()
            .iter()
            .copied()
            .filter(|&(v, _)| mask[v as usize] == keep)
            .collect(),
    )
}

/// Scan ascending variable index; the first difference decides, larger
/// exponent wins.
fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    let (ae, be) = (a.exps(), b.exps());
    loop {
        match (ae.get(i), be.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(v, e)), Some(&(w, f))) => {
                if v < w {
                    return Ordering::Greater;
                }
                if w < v {
                    return Ordering::Less;
                }
                if e != f {
                    return e.cmp(&f);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

/// Scan descending variable index; at the first difference the monomial
/// with the larger exponent is the smaller one.
fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    let (ae, be) = (a.exps(), b.exps());
    let (mut i, mut j) = (ae.len(), be.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Greater, // b has a trailing (small) variable
            (_, 0) => return Ordering::Less,
            _ => {
                let (v, e) = ae[i - 1];
                let (w, f) = be[j - 1];
                if v > w {
                    return Ordering::Less;
                }
                if w > v {
                    return Ordering::Greater;
                }
                if e != f {
                    return f.cmp(&e);
                }
                i -= 1;
                j -= 1;
            }
        }
    }
}

fn lex_ranked(a: &Monomial, b: &Monomial, rank: &[u32]) -> Ordering {
    // visit variables from largest rank to smallest
    let mut vars: Vec<u32> = a
        .exps()
        .iter()
        .chain(b.exps().iter())
        .map(|&(v, _)| v)
        .collect();
    vars.sort_unstable_by_key(|&v| std::cmp::Reverse(rank[v as usize]));
    vars.dedup();
    for v in vars {
        let (e, f) = (a.exponent(v as usize), b.exponent(v as usize));
        if e != f {
            return e.cmp(&f);
        }
    }
    Ordering::Equal
}

fn revlex_ranked(a: &Monomial, b: &Monomial, rank: &[u32]) -> Ordering {
    // visit variables from smallest rank upward; larger exponent means smaller
    let mut vars: Vec<u32> = a
        .exps()
        .iter()
        .chain(b.exps().iter())
        .map(|&(v, _)| v)
        .collect();
    vars.sort_unstable_by_key(|&v| rank[v as usize]);
    vars.dedup();
    for v in vars {
        let (e, f) = (a.exponent(v as usize), b.exponent(v as usize));
        if e != f {
            return f.cmp(&e);
        }
    }
    Ordering::Equal
}
