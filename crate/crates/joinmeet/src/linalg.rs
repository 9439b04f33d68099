//! Sparse exact linear algebra: fraction-free integer elimination with
//! content reduction, and a prime-field fast path for dimension counts.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::collections::HashMap;

/// Sparse vector: (column, coefficient) sorted by column, no zeros.
pub type SparseVec<T> = Vec<(u32, T)>;

pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `(alpha, beta)` with `alpha * a + beta * b = 0`, `alpha` nonzero.
    fn elim_coeffs(a: &Self, b: &Self) -> (Self, Self);
    /// Canonical joint rescaling of a row (and an attached tail).
    fn normalize(main: &mut SparseVec<Self>, tail: Option<&mut SparseVec<Self>>)
    where
        Self: Sized;
}

impl Scalar for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn elim_coeffs(a: &Self, b: &Self) -> (Self, Self) {
        let g = a.gcd(b);
        (b / &g, -(a / &g))
    }
    fn normalize(main: &mut SparseVec<Self>, tail: Option<&mut SparseVec<Self>>) {
        let mut content = BigInt::zero();
        for (_, c) in main.iter() {
            content = content.gcd(c);
        }
        if let Some(t) = &tail {
            for (_, c) in t.iter() {
                content = content.gcd(c);
            }
        }
        if Zero::is_zero(&content) {
            return;
        }
        let lead_negative = main
            .first()
            .map(|(_, c)| c.is_negative())
            .or_else(|| tail.as_ref().and_then(|t| t.first().map(|(_, c)| c.is_negative())))
            .unwrap_or(false);
        if lead_negative {
            content = -content;
        }
        if content.is_one() {
            return;
        }
        for (_, c) in main.iter_mut() {
            *c = &*c / &content;
        }
        if let Some(t) = tail {
            for (_, c) in t.iter_mut() {
                *c = &*c / &content;
            }
        }
    }
}

/// An element of the prime field `F_p`; the modulus travels with the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Fp {
        let r = v.rem_euclid(p as i64) as u64;
        Fp { v: r, p }
    }

    pub fn one(p: u64) -> Fp {
        Fp { v: 1, p }
    }

    fn inv(&self) -> Fp {
        // Fermat: p is prime
        let mut base = self.v as u128;
        let mut exp = self.p - 2;
        let p = self.p as u128;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Fp {
            v: acc as u64,
            p: self.p,
        }
    }
}

impl Scalar for Fp {
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn mul(&self, other: &Self) -> Self {
        Fp {
            v: (self.v as u128 * other.v as u128 % self.p as u128) as u64,
            p: self.p,
        }
    }
    fn add(&self, other: &Self) -> Self {
        let mut s = self.v + other.v;
        if s >= self.p {
            s -= self.p;
        }
        Fp { v: s, p: self.p }
    }
    fn neg(&self) -> Self {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
    fn elim_coeffs(a: &Self, b: &Self) -> (Self, Self) {
        (Fp::one(a.p), a.mul(&b.inv()).neg())
    }
    fn normalize(main: &mut SparseVec<Self>, tail: Option<&mut SparseVec<Self>>) {
        let lead = main
            .first()
            .map(|&(_, c)| c)
            .or_else(|| tail.as_ref().and_then(|t| t.first().map(|&(_, c)| c)));
        let Some(lead) = lead else { return };
        if lead.v == 1 {
            return;
        }
        let inv = lead.inv();
        for (_, c) in main.iter_mut() {
            *c = c.mul(&inv);
        }
        if let Some(t) = tail {
            for (_, c) in t.iter_mut() {
                *c = c.mul(&inv);
            }
        }
    }
}

/// `alpha * a + beta * b`, merging sorted sparse vectors.
pub fn combine<T: Scalar>(alpha: &T, a: &SparseVec<T>, beta: &T, b: &SparseVec<T>) -> SparseVec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((c1, v1)), Some((c2, v2))) if c1 == c2 => {
                let v = alpha.mul(v1).add(&beta.mul(v2));
                if !v.is_zero() {
                    out.push((*c1, v));
                }
                i += 1;
                j += 1;
            }
            (Some((c1, v1)), Some((c2, _))) if c1 < c2 => {
                out.push((*c1, alpha.mul(v1)));
                i += 1;
            }
            (Some(_), Some((c2, v2))) => {
                out.push((*c2, beta.mul(v2)));
                j += 1;
            }
            (Some((c1, v1)), None) => {
                out.push((*c1, alpha.mul(v1)));
                i += 1;
            }
            (None, Some((c2, v2))) => {
                out.push((*c2, beta.mul(v2)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// An incremental row space in echelon form (pivot = smallest column).
pub struct Echelon<T> {
    rows: Vec<SparseVec<T>>,
    pivot_of: HashMap<u32, usize>,
}

impl<T: Scalar> Default for Echelon<T> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }
}

impl<T: Scalar> Echelon<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<T>] {
        &self.rows
    }

    /// Reduces the leading entries of `row` against the stored pivots.
    pub fn reduce(&self, mut row: SparseVec<T>) -> SparseVec<T> {
        while let Some(&(c, _)) = row.first() {
            let Some(&pi) = self.pivot_of.get(&c) else {
                break;
            };
            let pivot = &self.rows[pi];
            let (alpha, beta) = T::elim_coeffs(&row[0].1, &pivot[0].1);
            row = combine(&alpha, &row, &beta, pivot);
            T::normalize(&mut row, None);
        }
        row
    }

    /// Inserts a row; returns `false` when it was already in the span.
    pub fn insert(&mut self, row: SparseVec<T>) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        T::normalize(&mut row, None);
        self.pivot_of.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, row: SparseVec<T>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Rank of a sparse matrix given by rows.
pub fn rank<T: Scalar, I: IntoIterator<Item = SparseVec<T>>>(rows: I) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Left kernel: all vectors `c` with `sum_k c_k row_k = 0`, echelonized over
/// the row coordinates, plus the matrix rank.  `one` seeds the identity tail.
pub fn row_kernel<T: Scalar>(rows: &[SparseVec<T>], one: &T) -> (Vec<SparseVec<T>>, usize) {
    let mut stored: Vec<(SparseVec<T>, SparseVec<T>)> = Vec::new();
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    let mut kernel: Vec<SparseVec<T>> = Vec::new();
    for (k, left) in rows.iter().enumerate() {
        let mut l = left.clone();
        let mut r: SparseVec<T> = vec![(k as u32, one.clone())];
        loop {
            let Some(&(c, _)) = l.first() else {
                T::normalize(&mut r, None);
                kernel.push(r);
                break;
            };
            match pivot_of.get(&c) {
                Some(&pi) => {
                    let (pl, pr) = &stored[pi];
                    let (alpha, beta) = T::elim_coeffs(&l[0].1, &pl[0].1);
                    l = combine(&alpha, &l, &beta, pl);
                    r = combine(&alpha, &r, &beta, pr);
                    T::normalize(&mut l, Some(&mut r));
                }
                None => {
                    pivot_of.insert(c, stored.len());
                    stored.push((l, r));
                    break;
                }
            }
        }
    }
    (reduced_echelon(kernel), stored.len())
}

/// Gauss-Jordan canonical form: pivots eliminated from all other rows,
/// rows sorted by pivot column, canonical scaling.
pub fn reduced_echelon<T: Scalar>(vecs: Vec<SparseVec<T>>) -> Vec<SparseVec<T>> {
    let mut ech = Echelon::new();
    for v in vecs {
        ech.insert(v);
    }
    let mut rows = ech.rows;
    rows.sort_by_key(|r| r[0].0);
    // back-substitute: clear each pivot column from the earlier rows
    for i in (0..rows.len()).rev() {
        let pivot = rows[i].clone();
        let pc = pivot[0].0;
        for j in 0..i {
            if let Some(pos) = rows[j].iter().position(|&(c, _)| c == pc) {
                let (alpha, beta) = T::elim_coeffs(&rows[j][pos].1, &pivot[0].1);
                let mut nr = combine(&alpha, &rows[j], &beta, &pivot);
                T::normalize(&mut nr, None);
                rows[j] = nr;
            }
        }
    }
    for r in rows.iter_mut() {
        T::normalize(r, None);
    }
    rows
}

/// Expresses `target` as a rational combination of `basis` vectors.
/// Returns the coefficients and whether the expression is unique.
pub fn express_rational(
    basis: &[SparseVec<BigInt>],
    target: &SparseVec<BigInt>,
) -> Option<(Vec<BigRational>, bool)> {
    let mut rows: Vec<SparseVec<BigInt>> = basis.to_vec();
    rows.push(target.clone());
    let (kernel, _) = row_kernel(&rows, &BigInt::one());
    let t = basis.len() as u32;
    let unique = !kernel
        .iter()
        .any(|k| k.iter().all(|&(c, _)| c != t));
    let hit = kernel
        .iter()
        .find(|k| k.iter().any(|&(c, _)| c == t))?;
    let ct = hit
        .iter()
        .find(|&&(c, _)| c == t)
        .map(|(_, v)| v.clone())
        .unwrap();
    let mut coeffs = vec![BigRational::zero(); basis.len()];
    for (c, v) in hit {
        if *c != t {
            coeffs[*c as usize] = -BigRational::new(v.clone(), ct.clone());
        }
    }
    Some((coeffs, unique))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn row(vals: &[(u32, i64)]) -> SparseVec<BigInt> {
        vals.iter().map(|&(c, v)| (c, bi(v))).collect()
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)])];
        let (kernel, rank) = row_kernel(&rows, &BigInt::one());
        assert_eq!(rank, 1);
        assert_eq!(kernel, vec![row(&[(0, 2), (1, -1)])]);
    }

    #[test]
    fn kernel_of_independent_rows_is_empty() {
        let rows = vec![row(&[(0, 1)]), row(&[(1, 1)]), row(&[(0, 1), (2, 5)])];
        let (kernel, rank) = row_kernel(&rows, &BigInt::one());
        assert_eq!(rank, 3);
        assert!(kernel.is_empty());
    }

    #[test]
    fn fraction_free_stays_primitive() {
        let rows = vec![
            row(&[(0, 6), (1, 10)]),
            row(&[(0, 15), (1, 25)]),
            row(&[(0, 2), (1, 3)]),
        ];
        let (kernel, rank) = row_kernel(&rows, &BigInt::one());
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 1);
        // 5*r0 - 2*r1 = 0
        assert_eq!(kernel[0], row(&[(0, 5), (1, -2)]));
    }

    #[test]
    fn fp_agrees_with_bigint_on_rank() {
        let p = 2147483647u64;
        let int_rows = vec![
            row(&[(0, 3), (2, -7), (5, 1)]),
            row(&[(1, 2), (2, 4)]),
            row(&[(0, 3), (1, 2), (2, -3), (5, 1)]),
            row(&[(3, 11)]),
        ];
        let fp_rows: Vec<SparseVec<Fp>> = int_rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(c, v)| {
                        let v64: i64 = v.try_into().unwrap();
                        (*c, Fp::new(v64, p))
                    })
                    .collect()
            })
            .collect();
        let (kq, rq) = row_kernel(&int_rows, &BigInt::one());
        let (kp, rp) = row_kernel(&fp_rows, &Fp::one(p));
        assert_eq!(rq, rp);
        assert_eq!(kq.len(), kp.len());
    }

    #[test]
    fn express_rational_finds_combination() {
        let basis = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 2)])];
        let target = row(&[(0, 2), (1, 5)]);
        let (coeffs, unique) = express_rational(&basis, &target).unwrap();
        assert!(unique);
        assert_eq!(coeffs[0], BigRational::from(bi(2)));
        assert_eq!(coeffs[1], BigRational::new(bi(3), bi(2)));
        assert!(express_rational(&basis, &row(&[(2, 1)])).is_none());
    }

    #[test]
    fn reduced_echelon_is_canonical() {
        let vecs = vec![
            row(&[(0, 2), (1, 2), (2, 2)]),
            row(&[(1, 3), (2, 6)]),
        ];
        let r = reduced_echelon(vecs);
        assert_eq!(r, vec![row(&[(0, 1), (2, -1)]), row(&[(1, 1), (2, 2)])]);
    }
}
