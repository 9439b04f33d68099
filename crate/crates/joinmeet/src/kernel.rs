//! Presentation maps `y_e -> f_e` and the graded kernel of the induced
//! surjection onto the generated subalgebra: per-degree kernel dimensions,
//! minimal generators, polynomial-ring and quadratic-generation verdicts.
//!
//! Dimension counts may run over a large prime field for speed; any
//! generator or verdict-bearing nonzero element is re-derived and verified
//! over the rationals before it is reported.

use crate::binomials::{join_meet_system, lattice_ring, JoinMeetSystem};
use crate::classify;
use crate::lattice::{is_distributive, Lattice};
use crate::linalg::{self, Echelon, Fp, Scalar, SparseVec};
use crate::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial, Ring, RingHandle};
use crate::{Budget, Error, Result};
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    Rationals,
    Prime(u64),
}

impl FieldMode {
    pub fn tag(&self) -> String {
        match self {
            FieldMode::Rationals => "Q".to_string(),
            FieldMode::Prime(p) => format!("fp:{p}"),
        }
    }
}

/// Association of presentation variables `y_e` with homogeneous generator
/// polynomials of a common degree.
#[derive(Debug, Clone)]
pub struct PresentationMap {
    source: RingHandle,
    target: RingHandle,
    tags: Vec<String>,
    images: Vec<Polynomial>,
    image_degree: Option<u64>,
}

impl PresentationMap {
    pub fn new(target: &RingHandle, tags: Vec<String>, images: Vec<Polynomial>) -> Result<Self> {
        if tags.len() != images.len() {
            return Err(Error::BadInput("one tag per image".into()));
        }
        for (i, t) in tags.iter().enumerate() {
            if tags[..i].contains(t) {
                return Err(Error::DuplicateLabel(t.clone()));
            }
        }
        let mut degree = None;
        for (t, f) in tags.iter().zip(&images) {
            if f.is_zero() {
                return Err(Error::BadInput(format!("image of {t} is zero")));
            }
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| Error::BadInput(format!("image of {t} is not homogeneous")))?;
            match degree {
                None => degree = Some(d),
                Some(g) if g == d => {}
                Some(g) => {
                    return Err(Error::BadInput(format!(
                        "image of {t} has degree {d}, expected {g}"
                    )))
                }
            }
        }
        let source = Ring::new(tags.iter().map(|t| format!("y[{t}]")).collect::<Vec<_>>());
        Ok(PresentationMap {
            source,
            target: target.clone(),
            tags,
            images,
            image_degree: degree,
        })
    }

    /// Presentation of the join-meet algebra: `y_(i,j) -> f_ij`.
    pub fn from_system(sys: &JoinMeetSystem) -> PresentationMap {
        let tags: Vec<String> = (0..sys.len()).map(|k| sys.pair_tag(k)).collect();
        PresentationMap::new(sys.ring(), tags, sys.binomials().to_vec())
            .expect("join-meet binomials are homogeneous quadrics")
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn source(&self) -> &RingHandle {
        &self.source
    }

    pub fn target(&self) -> &RingHandle {
        &self.target
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_degree(&self) -> Option<u64> {
        self.image_degree
    }

    /// Evaluates a polynomial in the `y` variables at the images.
    pub fn substitute(&self, p: &Polynomial) -> Result<Polynomial> {
        p.substitute(&self.target, &self.images)
    }
}

/// `true` iff the exponent vectors of the leading monomials are linearly
/// independent over the rationals, which certifies that the generators are
/// algebraically independent.
pub fn leading_exponents_independent(m: &PresentationMap, order: &MonomialOrder) -> bool {
    let rows: Vec<SparseVec<BigInt>> = m
        .images
        .iter()
        .map(|f| {
            let (lm, _) = f.leading_term(order).expect("images nonzero");
            lm.exps()
                .iter()
                .map(|&(v, e)| (v, BigInt::from(e)))
                .collect()
        })
        .collect();
    linalg::rank(rows) == m.len()
}

// --- graded kernel engine -------------------------------------------------

pub(crate) trait KScalar: Scalar {
    fn from_bigint(v: &BigInt, proto: &Self) -> Self;
}

impl KScalar for BigInt {
    fn from_bigint(v: &BigInt, _proto: &Self) -> Self {
        v.clone()
    }
}

impl KScalar for Fp {
    fn from_bigint(v: &BigInt, proto: &Self) -> Self {
        let m = v.mod_floor(&BigInt::from(proto.p));
        Fp {
            v: m.to_u64().expect("reduced residue fits"),
            p: proto.p,
        }
    }
}

/// Nondecreasing index tuples of length `d` over `0..s`, in lex order.
pub(crate) fn multisets(s: usize, d: usize) -> Vec<Vec<u16>> {
    fn rec(s: u16, d: usize, start: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for e in start..s {
            cur.push(e);
            rec(s, d, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s as u16, d, 0, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn tuple_to_monomial(t: &[u16]) -> Monomial {
    let mut exps: Vec<(u32, u32)> = Vec::new();
    for &e in t {
        match exps.iter_mut().find(|(v, _)| *v == e as u32) {
            Some((_, k)) => *k += 1,
            None => exps.push((e as u32, 1)),
        }
    }
    Monomial::from_exps(exps)
}

fn clear_denominators(p: &Polynomial) -> (Vec<(Monomial, BigInt)>, BigInt) {
    let mut delta = BigInt::one();
    for (_, c) in p.terms() {
        delta = delta.lcm(c.denom());
    }
    let terms = p
        .terms()
        .map(|(m, c)| (m.clone(), c.numer() * (&delta / c.denom())))
        .collect();
    (terms, delta)
}

/// The per-degree kernel state machine.  Rows are products of the
/// denominator-cleared images; the per-row scale factors are undone on the
/// kernel vectors, so the reported vectors are exact for any rational input.
pub(crate) struct KernelEngine<T: KScalar> {
    one: T,
    budget: Budget,
    int_images: Vec<Vec<(Monomial, BigInt)>>,
    deltas: Vec<BigInt>,
    monos: HashMap<Monomial, u32>,
    degree: usize,
    tuples: Vec<Vec<u16>>,
    tuple_index: HashMap<Vec<u16>, u32>,
    rows: Vec<SparseVec<T>>,
    kernel: Vec<SparseVec<T>>,
}

pub(crate) struct SliceOut<T> {
    pub degree: u32,
    pub tuples: Vec<Vec<u16>>,
    pub dim_kernel: usize,
    pub hilbert: usize,
    /// Corrected kernel basis in reduced echelon form over tuple indices.
    pub kernel: Vec<SparseVec<T>>,
    /// Kernel vectors independent from `A_1 * kernel_(d-1)`.
    pub minimal: Vec<SparseVec<T>>,
}

impl<T: KScalar> KernelEngine<T> {
    pub fn new(m: &PresentationMap, one: T, budget: Budget) -> Self {
        let mut int_images = Vec::new();
        let mut deltas = Vec::new();
        for f in &m.images {
            let (terms, delta) = clear_denominators(f);
            int_images.push(terms);
            deltas.push(delta);
        }
        let mut monos = HashMap::new();
        monos.insert(Monomial::one(), 0);
        KernelEngine {
            one: one.clone(),
            budget,
            int_images,
            deltas,
            monos,
            degree: 0,
            tuples: vec![vec![]],
            tuple_index: HashMap::from([(vec![], 0u32)]),
            rows: vec![vec![(0, one)]],
            kernel: Vec::new(),
        }
    }

    fn intern(&mut self, m: Monomial) -> u32 {
        let next = self.monos.len() as u32;
        *self.monos.entry(m).or_insert(next)
    }

    fn mono_of(&self, id: u32) -> Monomial {
        // ids are dense; linear scan is fine at the sizes involved
        self.monos
            .iter()
            .find(|&(_, &v)| v == id)
            .map(|(m, _)| m.clone())
            .expect("interned")
    }

    /// row * F_e with coefficients in T.
    fn mul_row(&mut self, row_idx: usize, e: usize) -> SparseVec<T> {
        let row = self.rows[row_idx].clone();
        let terms: Vec<(Monomial, BigInt)> = self.int_images[e].clone();
        let mut acc: Vec<(u32, T)> = Vec::with_capacity(row.len() * terms.len());
        for (col, c) in &row {
            let m = self.mono_of(*col);
            for (tm, tc) in &terms {
                let id = self.intern(m.mul(tm));
                acc.push((id, c.mul(&T::from_bigint(tc, &self.one))));
            }
        }
        acc.sort_by_key(|&(c, _)| c);
        let mut out: SparseVec<T> = Vec::with_capacity(acc.len());
        for (c, v) in acc {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => {
                    *lv = lv.add(&v);
                    if lv.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        out
    }

    /// Computes the next degree slice.
    pub fn advance(&mut self) -> Result<SliceOut<T>> {
        let s = self.int_images.len();
        let d = self.degree + 1;
        let tuples = multisets(s, d);
        let mut tuple_index = HashMap::with_capacity(tuples.len());
        for (k, t) in tuples.iter().enumerate() {
            tuple_index.insert(t.clone(), k as u32);
        }
        let mut rows: Vec<SparseVec<T>> = Vec::with_capacity(tuples.len());
        for t in &tuples {
            let rest: Vec<u16> = t[1..].to_vec();
            let prev = self.tuple_index[&rest] as usize;
            let row = self.mul_row(prev, t[0] as usize);
            rows.push(row);
            let cells = rows.len() as u64 * self.monos.len() as u64;
            if cells > self.budget.matrix_cells {
                return Err(Error::BudgetExceeded(format!(
                    "kernel matrix at degree {d}: {cells} cells"
                )));
            }
        }
        let (raw_kernel, rank) = linalg::row_kernel(&rows, &self.one);
        // undo the per-row denominator scaling
        let lambda = |t: &[u16]| -> BigInt {
            t.iter()
                .fold(BigInt::one(), |acc, &e| acc * &self.deltas[e as usize])
        };
        let mut kernel: Vec<SparseVec<T>> = Vec::with_capacity(raw_kernel.len());
        for vec in raw_kernel {
            let mut v: SparseVec<T> = vec
                .into_iter()
                .map(|(ti, c)| {
                    let l = lambda(&tuples[ti as usize]);
                    (ti, c.mul(&T::from_bigint(&l, &self.one)))
                })
                .collect();
            T::normalize(&mut v, None);
            kernel.push(v);
        }
        // minimal generators: kernel vectors outside A_1 * kernel_(d-1)
        let mut span: Echelon<T> = Echelon::new();
        for e in 0..s {
            for k in &self.kernel {
                let mut prod: SparseVec<T> = k
                    .iter()
                    .map(|(pti, c)| {
                        let mut t = self.tuples[*pti as usize].clone();
                        let pos = t.partition_point(|&x| x <= e as u16);
                        t.insert(pos, e as u16);
                        (tuple_index[&t], c.clone())
                    })
                    .collect();
                prod.sort_by_key(|&(c, _)| c);
                span.insert(prod);
            }
        }
        let mut minimal = Vec::new();
        for v in &kernel {
            if span.insert(v.clone()) {
                minimal.push(v.clone());
            }
        }
        let out = SliceOut {
            degree: d as u32,
            tuples: tuples.clone(),
            dim_kernel: kernel.len(),
            hilbert: rank,
            kernel: kernel.clone(),
            minimal,
        };
        self.degree = d;
        self.tuples = tuples;
        self.tuple_index = tuple_index;
        self.rows = rows;
        self.kernel = kernel;
        Ok(out)
    }
}

fn vec_to_poly(source: &RingHandle, tuples: &[Vec<u16>], v: &SparseVec<BigInt>) -> Polynomial {
    let mut p = Polynomial::zero(source);
    let mut acc = Polynomial::zero(source);
    for (ti, c) in v {
        let m = tuple_to_monomial(&tuples[*ti as usize]);
        acc = acc
            .add(&Polynomial::term(
                source,
                m,
                BigRational::from(c.clone()),
            ))
            .expect("same ring");
    }
    p = p.add(&acc).expect("same ring");
    p
}

/// Exact kernel slice over the rationals: tuples and reduced kernel basis.
pub(crate) fn rational_kernel_slice(
    m: &PresentationMap,
    degree: u32,
    budget: &Budget,
) -> Result<(Vec<Vec<u16>>, Vec<SparseVec<BigInt>>)> {
    let mut eng = KernelEngine::<BigInt>::new(m, BigInt::one(), *budget);
    let mut out = None;
    for _ in 0..degree {
        out = Some(eng.advance()?);
    }
    let s = out.expect("degree >= 1");
    Ok((s.tuples, s.kernel))
}

// --- reports ---------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DegreeSlice {
    pub degree: u32,
    pub dim_kernel: usize,
    pub hilbert: usize,
    /// Basis of `kernel_d` modulo `A_1 * kernel_(d-1)`, as source-ring
    /// polynomials over the rationals, each verified to substitute to zero.
    pub minimal_generators: Vec<Polynomial>,
    /// Full kernel basis; present in rational mode only.
    pub kernel_basis: Option<Vec<Polynomial>>,
}

#[derive(Debug, Clone)]
pub struct GradedKernelReport {
    pub cap: u32,
    pub field: FieldMode,
    pub slices: Vec<DegreeSlice>,
}

impl GradedKernelReport {
    pub fn slice(&self, degree: u32) -> &DegreeSlice {
        &self.slices[degree as usize - 1]
    }

    pub fn kernel_zero_through(&self, degree: u32) -> bool {
        self.slices
            .iter()
            .take(degree as usize)
            .all(|s| s.dim_kernel == 0)
    }

    pub fn minimal_generators_empty(&self, lo: u32, hi: u32) -> bool {
        (lo..=hi).all(|d| self.slice(d).minimal_generators.is_empty())
    }
}

fn verify_zero_substitution(m: &PresentationMap, g: &Polynomial) -> Result<()> {
    if g.is_zero() {
        return Err(Error::TheoremViolation(
            "zero polynomial reported as kernel generator".into(),
        ));
    }
    let img = m.substitute(g)?;
    if img.is_zero() {
        Ok(())
    } else {
        Err(Error::TheoremViolation(
            "reported kernel generator does not substitute to zero".into(),
        ))
    }
}

/// Rebuilds a kernel vector over the rationals from its support: the exact
/// kernel of the evaluation matrix restricted to the given tuples.
fn rationalize_support(
    m: &PresentationMap,
    support: &[Vec<u16>],
) -> Result<Option<Vec<(Vec<u16>, BigInt)>>> {
    let mut rows: Vec<SparseVec<BigInt>> = Vec::new();
    let mut intern: HashMap<Monomial, u32> = HashMap::new();
    let mut lambdas: Vec<BigInt> = Vec::new();
    for t in support {
        let mut img = Polynomial::constant(&m.target, BigRational::one());
        for &e in t {
            img = img.mul(&m.images[e as usize])?;
        }
        let (terms, delta) = clear_denominators(&img);
        lambdas.push(delta);
        let mut row: SparseVec<BigInt> = terms
            .into_iter()
            .map(|(mono, c)| {
                let next = intern.len() as u32;
                let id = *intern.entry(mono).or_insert(next);
                (id, c)
            })
            .collect();
        row.sort_by_key(|&(c, _)| c);
        rows.push(row);
    }
    let (kernel, _) = linalg::row_kernel(&rows, &BigInt::one());
    let Some(first) = kernel.into_iter().next() else {
        return Ok(None);
    };
    let mut v: Vec<(Vec<u16>, BigInt)> = first
        .into_iter()
        .map(|(k, c)| (support[k as usize].clone(), c * &lambdas[k as usize]))
        .collect();
    // canonical scaling
    let mut content = BigInt::zero();
    for (_, c) in &v {
        content = content.gcd(c);
    }
    if v.first().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        content = -content;
    }
    if !Zero::is_zero(&content) && !content.is_one() {
        for (_, c) in v.iter_mut() {
            *c = &*c / &content;
        }
    }
    Ok(Some(v))
}

fn support_poly(source: &RingHandle, v: &[(Vec<u16>, BigInt)]) -> Polynomial {
    let mut p = Polynomial::zero(source);
    for (t, c) in v {
        p = p
            .add(&Polynomial::term(
                source,
                tuple_to_monomial(t),
                BigRational::from(c.clone()),
            ))
            .expect("same ring");
    }
    p
}

/// Full graded kernel report.  In prime mode the dimensions come from the
/// prime field while every reported generator is reconstructed over the
/// rationals from its support and verified by substitution.
pub fn graded_kernel(
    m: &PresentationMap,
    cap: u32,
    field: FieldMode,
    budget: &Budget,
) -> Result<GradedKernelReport> {
    let mut slices = Vec::new();
    match field {
        FieldMode::Rationals => {
            let mut eng = KernelEngine::<BigInt>::new(m, BigInt::one(), *budget);
            for _ in 1..=cap {
                let s = eng.advance()?;
                let gens: Vec<Polynomial> = s
                    .minimal
                    .iter()
                    .map(|v| vec_to_poly(&m.source, &s.tuples, v))
                    .collect();
                for g in &gens {
                    verify_zero_substitution(m, g)?;
                }
                let basis: Vec<Polynomial> = s
                    .kernel
                    .iter()
                    .map(|v| vec_to_poly(&m.source, &s.tuples, v))
                    .collect();
                slices.push(DegreeSlice {
                    degree: s.degree,
                    dim_kernel: s.dim_kernel,
                    hilbert: s.hilbert,
                    minimal_generators: gens,
                    kernel_basis: Some(basis),
                });
            }
        }
        FieldMode::Prime(p) => {
            let mut eng = KernelEngine::<Fp>::new(m, Fp::one(p), *budget);
            for _ in 1..=cap {
                let s = eng.advance()?;
                let mut gens = Vec::new();
                for v in &s.minimal {
                    let support: Vec<Vec<u16>> = v
                        .iter()
                        .map(|&(ti, _)| s.tuples[ti as usize].clone())
                        .collect();
                    let Some(rv) = rationalize_support(m, &support)? else {
                        return Err(Error::TheoremViolation(format!(
                            "degree-{} prime-field generator has no rational support \
                             solution; rerun with --field q",
                            s.degree
                        )));
                    };
                    let g = support_poly(&m.source, &rv);
                    verify_zero_substitution(m, &g)?;
                    gens.push(g);
                }
                slices.push(DegreeSlice {
                    degree: s.degree,
                    dim_kernel: s.dim_kernel,
                    hilbert: s.hilbert,
                    minimal_generators: gens,
                    kernel_basis: None,
                });
            }
        }
    }
    Ok(GradedKernelReport {
        cap,
        field,
        slices,
    })
}

/// Degree-by-degree kernel-zero scan with early exit.  Zero dimensions over
/// the prime field certify zero over the rationals (specialization cannot
/// raise the rank); any nonzero hit is confirmed by an exact rational
/// witness that substitutes to zero.
#[derive(Debug, Clone)]
pub struct KernelZeroVerdict {
    pub cap: u32,
    pub zero_up_to_cap: bool,
    pub first_nonzero_degree: Option<u32>,
    pub witness: Option<Polynomial>,
}

pub fn kernel_zero_verdict(
    m: &PresentationMap,
    cap: u32,
    budget: &Budget,
) -> Result<KernelZeroVerdict> {
    let mut eng = KernelEngine::<Fp>::new(m, Fp::one(DEFAULT_PRIME), *budget);
    for _ in 1..=cap {
        let s = eng.advance()?;
        if s.dim_kernel == 0 {
            continue;
        }
        let v = &s.kernel[0];
        let support: Vec<Vec<u16>> = v
            .iter()
            .map(|&(ti, _)| s.tuples[ti as usize].clone())
            .collect();
        match rationalize_support(m, &support)? {
            Some(rv) => {
                let g = support_poly(&m.source, &rv);
                verify_zero_substitution(m, &g)?;
                return Ok(KernelZeroVerdict {
                    cap,
                    zero_up_to_cap: false,
                    first_nonzero_degree: Some(s.degree),
                    witness: Some(g),
                });
            }
            None => {
                // prime-field artifact: settle this degree exactly
                let (tuples, kernel) = rational_kernel_slice(m, s.degree, budget)?;
                if let Some(first) = kernel.first() {
                    let g = vec_to_poly(&m.source, &tuples, first);
                    verify_zero_substitution(m, &g)?;
                    return Ok(KernelZeroVerdict {
                        cap,
                        zero_up_to_cap: false,
                        first_nonzero_degree: Some(s.degree),
                        witness: Some(g),
                    });
                }
            }
        }
    }
    Ok(KernelZeroVerdict {
        cap,
        zero_up_to_cap: true,
        first_nonzero_degree: None,
        witness: None,
    })
}

/// Three-way polynomial-ring verdict with theorem cross-check: the
/// combinatorial criterion (planar without a `D_54` sublattice), the
/// leading-exponent certificate, and the degree-capped kernel test must
/// agree on distributive inputs.
#[derive(Debug, Clone)]
pub struct PolynomialRingVerdict {
    pub cap: u32,
    pub combinatorial: bool,
    pub independent_leading_exponents: bool,
    pub kernel_zero_up_to_cap: bool,
    pub first_nonzero_degree: Option<u32>,
}

/// The algebraic-independence certificate, tried under two canonical
/// orders: the rank-weight order (incomparable products lead) and, when the
/// join-irreducibles split into two chains, the grid-diagonal weight order.
/// Independence of the leading exponents under either order certifies the
/// generators algebraically independent.
pub fn polynomial_ring_certificate(
    l: &Lattice,
    sys: &JoinMeetSystem,
    m: &PresentationMap,
) -> Result<bool> {
    if leading_exponents_independent(m, sys.order()) {
        return Ok(true);
    }
    if let Some(diag) = crate::binomials::grid_diagonal_order(l)? {
        return Ok(leading_exponents_independent(m, &diag));
    }
    Ok(false)
}

pub fn is_polynomial_ring(l: &Lattice, cap: u32, budget: &Budget) -> Result<PolynomialRingVerdict> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let combinatorial =
        classify::is_planar(l)? && classify::find_d54_sublattice(l).is_none();
    let sys = join_meet_system(l)?;
    let m = PresentationMap::from_system(&sys);
    let certificate = polynomial_ring_certificate(l, &sys, &m)?;
    let kz = kernel_zero_verdict(&m, cap, budget)?;
    if combinatorial != kz.zero_up_to_cap {
        return Err(Error::TheoremViolation(format!(
            "combinatorial verdict {} disagrees with kernel verdict {} (cap {})",
            combinatorial, kz.zero_up_to_cap, cap
        )));
    }
    if certificate && !kz.zero_up_to_cap {
        return Err(Error::TheoremViolation(
            "independent leading exponents with a nonzero kernel".into(),
        ));
    }
    Ok(PolynomialRingVerdict {
        cap,
        combinatorial,
        independent_leading_exponents: certificate,
        kernel_zero_up_to_cap: kz.zero_up_to_cap,
        first_nonzero_degree: kz.first_nonzero_degree,
    })
}

/// Certifies `kernel_d = span(A_(d-2) * kernel_2)` over the rationals using
/// one exact degree-2 kernel plus two prime-field ranks: the exact products
/// give a lower bound that meets the prime-field upper bound, so equality
/// holds over the rationals.
fn degree_generated_by_quadrics(
    m: &PresentationMap,
    d: u32,
    k2_tuples: &[Vec<u16>],
    k2: &[SparseVec<BigInt>],
    budget: &Budget,
) -> Result<bool> {
    let one = Fp::one(DEFAULT_PRIME);
    let mut eng = KernelEngine::<Fp>::new(m, one, *budget);
    let mut slice = None;
    for _ in 0..d {
        slice = Some(eng.advance()?);
    }
    let slice = slice.expect("d >= 1");
    let dim_p = slice.dim_kernel;
    // products y^u * k2 for all (d-2)-multisets u, reduced mod p
    let mut index = HashMap::new();
    for (k, t) in slice.tuples.iter().enumerate() {
        index.insert(t.clone(), k as u32);
    }
    let mut ech: Echelon<Fp> = Echelon::new();
    for u in multisets(m.len(), d as usize - 2) {
        for k in k2 {
            let mut prod: SparseVec<Fp> = k
                .iter()
                .map(|(ti, c)| {
                    let mut t = k2_tuples[*ti as usize].clone();
                    t.extend_from_slice(&u);
                    t.sort_unstable();
                    (index[&t], Fp::from_bigint(c, &one))
                })
                .collect();
            prod.sort_by_key(|&(c, _)| c);
            ech.insert(prod);
        }
    }
    Ok(ech.rank() == dim_p)
}

/// Quadratic-generation report: minimal generators vanish above degree 2 up
/// to the cap, plus (for thin lattices, where the pair-poset reverse-lex
/// order exists) whether the full elimination Groebner basis is quadratic.
#[derive(Debug, Clone)]
pub struct QuadraticReport {
    pub cap: u32,
    pub generated_in_degree_2_up_to_cap: bool,
    pub first_non_quadratic_degree: Option<u32>,
    /// Rationally verified minimal generator of degree >= 3, when present.
    pub witness: Option<Polynomial>,
    /// Max degree 2 for the reduced kernel basis; `None` when the full
    /// elimination did not run (non-thin lattice or budget).
    pub quadratic_gb: Option<bool>,
}

pub fn quadratic_presentation_check(
    l: &Lattice,
    cap: u32,
    budget: &Budget,
) -> Result<QuadraticReport> {
    if !is_distributive(l) {
        return Err(Error::NotDistributive);
    }
    let sys = join_meet_system(l)?;
    let m = PresentationMap::from_system(&sys);
    let (quad_ok, first_bad, witness) = quadratic_generation_verdict(&m, cap, budget)?;
    let quadratic_gb = match presentation_groebner_basis(l, &m, budget) {
        Ok(Some(gb)) => Some(gb.max_degree() <= 2),
        Ok(None) => None,
        Err(Error::BudgetExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(QuadraticReport {
        cap,
        generated_in_degree_2_up_to_cap: quad_ok,
        first_non_quadratic_degree: first_bad,
        witness,
        quadratic_gb,
    })
}

/// Shared verdict machinery: is the kernel generated in degree <= 2 up to
/// the cap?  Returns a rational witness when not.
pub fn quadratic_generation_verdict(
    m: &PresentationMap,
    cap: u32,
    budget: &Budget,
) -> Result<(bool, Option<u32>, Option<Polynomial>)> {
    let (k2_tuples, k2) = rational_kernel_slice(m, 2, budget)?;
    for d in 3..=cap {
        if degree_generated_by_quadrics(m, d, &k2_tuples, &k2, budget)? {
            continue;
        }
        let witness = minimal_generator_witness(m, d, &k2_tuples, &k2, budget)?;
        match witness {
            Some(w) => return Ok((false, Some(d), Some(w))),
            None => {
                return Err(Error::TheoremViolation(format!(
                    "prime-field mismatch at degree {d} without a rational witness; \
                     rerun with --field q"
                )))
            }
        }
    }
    Ok((true, None, None))
}

/// A kernel element of degree `d` outside `A_(d-2) * kernel_2`, verified
/// over the rationals: it substitutes to zero and stays nonzero after exact
/// reduction against the quadratically generated subspace.
fn minimal_generator_witness(
    m: &PresentationMap,
    d: u32,
    k2_tuples: &[Vec<u16>],
    k2: &[SparseVec<BigInt>],
    budget: &Budget,
) -> Result<Option<Polynomial>> {
    // prime-field pass to locate candidates
    let one = Fp::one(DEFAULT_PRIME);
    let mut eng = KernelEngine::<Fp>::new(m, one, *budget);
    let mut slice = None;
    for _ in 0..d {
        slice = Some(eng.advance()?);
    }
    let slice = slice.expect("d >= 1");
    let mut index = HashMap::new();
    for (k, t) in slice.tuples.iter().enumerate() {
        index.insert(t.clone(), k as u32);
    }
    // exact echelon of the quadratically generated subspace
    let mut quad_span: Echelon<BigInt> = Echelon::new();
    for u in multisets(m.len(), d as usize - 2) {
        for k in k2 {
            let mut prod: SparseVec<BigInt> = k
                .iter()
                .map(|(ti, c)| {
                    let mut t = k2_tuples[*ti as usize].clone();
                    t.extend_from_slice(&u);
                    t.sort_unstable();
                    (index[&t], c.clone())
                })
                .collect();
            prod.sort_by_key(|&(c, _)| c);
            quad_span.insert(prod);
        }
    }
    for v in &slice.kernel {
        let support: Vec<Vec<u16>> = v
            .iter()
            .map(|&(ti, _)| slice.tuples[ti as usize].clone())
            .collect();
        let Some(rv) = rationalize_support(m, &support)? else {
            continue;
        };
        let as_vec: SparseVec<BigInt> = {
            let mut w: SparseVec<BigInt> = rv
                .iter()
                .map(|(t, c)| (index[t], c.clone()))
                .collect();
            w.sort_by_key(|&(c, _)| c);
            w
        };
        if quad_span.reduce(as_vec).is_empty() {
            continue;
        }
        let g = support_poly(&m.source, &rv);
        verify_zero_substitution(m, &g)?;
        return Ok(Some(g));
    }
    Ok(None)
}

/// The elimination Groebner basis of the presentation kernel, under the
/// reverse-lex order from a linear extension of the thin lattice's pair
/// poset.  `None` for non-thin lattices.
pub fn presentation_groebner_basis(
    l: &Lattice,
    m: &PresentationMap,
    budget: &Budget,
) -> Result<Option<crate::groebner::GroebnerBasis>> {
    if !classify::is_thin(l)? {
        return Ok(None);
    }
    let q = classify::q_lattice(l)?;
    // match presentation tags to grid pairs to rank the y variables
    let grid_pos: HashMap<String, (u32, u32)> = q
        .pairs
        .iter()
        .map(|&(i, j)| {
            let a = q.labeling.x_chain[i as usize - 1];
            let b = q.labeling.y_chain[j as usize - 1];
            let (lo, hi) = (a.min(b), a.max(b));
            (
                format!("{},{}", l.label(lo), l.label(hi)),
                (i, j),
            )
        })
        .collect();
    let gb = eliminate_kernel(m, budget, |tag| {
        let (i, j) = grid_pos[tag];
        // linear extension of the grid order: by i + j, then i
        (i + j) * 64 + i
    })?;
    Ok(Some(gb))
}

/// Computes the full kernel of the presentation by elimination: the ideal
/// `(y_e - f_e)` in the combined ring, eliminating the target variables.
/// `rank_of_tag` induces the reverse-lex order on the `y` block.
pub fn eliminate_kernel(
    m: &PresentationMap,
    budget: &Budget,
    rank_of_tag: impl Fn(&str) -> u32,
) -> Result<crate::groebner::GroebnerBasis> {
    let nx = m.target().nvars();
    let s = m.len();
    let mut vars: Vec<String> = m.target().var_names().to_vec();
    let mut weights = vec![1u32; nx];
    for tag in m.tags() {
        vars.push(format!("y[{tag}]"));
        weights.push(2);
    }
    let combined = Ring::with_weights(vars, weights);
    // generators y_e - f_e
    let mut gens = Vec::new();
    for (k, f) in m.images().iter().enumerate() {
        let mut g = Polynomial::var(&combined, nx + k);
        let mut shifted = Polynomial::zero(&combined);
        for (mono, c) in f.terms() {
            shifted = shifted
                .add(&Polynomial::term(&combined, mono.clone(), c.clone()))
                .expect("same ring");
        }
        g = g.sub(&shifted).expect("same ring");
        gens.push(g);
    }
    // grid-rank ordering for the kept block: larger rank = larger variable
    let mut rank = vec![0u32; nx + s];
    let mut order_keys: Vec<(u32, usize)> = (0..s)
        .map(|k| (rank_of_tag(&m.tags()[k]), k))
        .collect();
    order_keys.sort();
    for (pos, &(_, k)) in order_keys.iter().enumerate() {
        rank[nx + k] = pos as u32 + 1;
    }
    let inner = MonomialOrder::GrevLexRanked { rank };
    let keep: Vec<bool> = (0..nx + s).map(|v| v >= nx).collect();
    let gb = crate::groebner::eliminate(&gens, &keep, inner, None, budget)?;
    // map the y-only generators down to the source ring
    let down: Vec<Polynomial> = gb
        .generators
        .iter()
        .map(|g| {
            let mut out = Polynomial::zero(&m.source);
            for (mono, c) in g.terms() {
                let shifted = Monomial::from_exps(
                    mono.exps()
                        .iter()
                        .map(|&(v, e)| (v - nx as u32, e))
                        .collect(),
                );
                out = out
                    .add(&Polynomial::term(&m.source, shifted, c.clone()))
                    .expect("same ring");
            }
            out
        })
        .collect();
    let rank_src: Vec<u32> = (0..s)
        .map(|k| {
            let mut r = 0;
            for (pos, &(_, kk)) in {
                let mut ok: Vec<(u32, usize)> =
                    (0..s).map(|k2| (rank_of_tag(&m.tags()[k2]), k2)).collect();
                ok.sort();
                ok
            }
            .iter()
            .enumerate()
            {
                if kk == k {
                    r = pos as u32 + 1;
                }
            }
            r
        })
        .collect();
    Ok(crate::groebner::GroebnerBasis {
        generators: down,
        order: MonomialOrder::GrevLexRanked { rank: rank_src },
        reduced: gb.reduced,
        degree_cap: gb.degree_cap,
    })
}

/// Applies the interval retraction (variables outside `[a, b]` to zero) to
/// the join-meet system of `l`; the nonzero images are exactly the
/// binomials of the interval lattice, which is asserted.
pub fn retract_images(l: &Lattice, a: usize, b: usize) -> Result<(Lattice, PresentationMap)> {
    let sys = join_meet_system(l)?;
    let interval = l.interval(a, b)?;
    let iv_ring = lattice_ring(&interval);
    let images: Vec<Polynomial> = (0..l.len())
        .map(|v| match interval.poset().index_of(l.label(v)) {
            Some(w) => Polynomial::var(&iv_ring, w),
            None => Polynomial::zero(&iv_ring),
        })
        .collect();
    let mut tags = Vec::new();
    let mut retracted = Vec::new();
    for (k, f) in sys.binomials().iter().enumerate() {
        let img = f.substitute(&iv_ring, &images)?;
        if !img.is_zero() {
            tags.push(sys.pair_tag(k));
            retracted.push(img);
        }
    }
    // the retraction must land exactly on the interval's own binomials
    let iv_sys = join_meet_system(&interval)?;
    assert_eq!(
        retracted.len(),
        iv_sys.len(),
        "retraction image count differs from the interval system"
    );
    for f in &retracted {
        assert!(
            iv_sys.binomials().contains(f),
            "retraction produced a non-binomial image"
        );
    }
    let m = PresentationMap::new(&iv_ring, tags, retracted)?;
    Ok((interval, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{as_lattice, divisor_lattice};
    use crate::poly::format_poly;
    use crate::poset::from_covers;

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

    fn b3_map() -> PresentationMap {
        PresentationMap::from_system(&join_meet_system(&b3()).unwrap())
    }

    /// The two quadrics displayed for the boolean lattice of rank 3.
    pub(crate) fn b3_paper_quadrics(m: &PresentationMap) -> Vec<Polynomial> {
        let y = |a: &str, b: &str| {
            let tag = format!("{a},{b}");
            let k = m.tags().iter().position(|t| *t == tag).unwrap();
            Polynomial::var(&m.source, k)
        };
        let q1 = y("3", "6")
            .mul(&y("4", "5"))
            .unwrap()
            .add(&y("2", "7").mul(&y("4", "6")).unwrap())
            .unwrap()
            .sub(&y("3", "5").mul(&y("4", "6")).unwrap())
            .unwrap()
            .sub(&y("2", "6").mul(&y("4", "7")).unwrap())
            .unwrap();
        let q2 = y("2", "7")
            .mul(&y("3", "5"))
            .unwrap()
            .sub(&y("2", "7").mul(&y("4", "6")).unwrap())
            .unwrap()
            .add(&y("2", "6").mul(&y("4", "7")).unwrap())
            .unwrap()
            .sub(&y("2", "3").mul(&y("5", "7")).unwrap())
            .unwrap();
        vec![q1, q2]
    }

    #[test]
    fn b3_paper_quadrics_substitute_to_zero() {
        let m = b3_map();
        for q in b3_paper_quadrics(&m) {
            assert!(m.substitute(&q).unwrap().is_zero());
        }
    }

    #[test]
    fn b3_kernel_dimension_two_no_cubic_generators() {
        let m = b3_map();
        let report = graded_kernel(&m, 3, FieldMode::Rationals, &Budget::default()).unwrap();
        assert_eq!(report.slice(1).dim_kernel, 0);
        assert_eq!(report.slice(2).dim_kernel, 2);
        assert_eq!(report.slice(2).minimal_generators.len(), 2);
        assert!(report.slice(3).minimal_generators.is_empty());
        // dims add up: dim kernel + hilbert = number of y-monomials
        assert_eq!(report.slice(2).hilbert + 2, 45);
    }

    #[test]
    fn b3_paper_quadrics_lie_in_kernel_span() {
        let m = b3_map();
        let (tuples, kernel) = rational_kernel_slice(&m, 2, &Budget::default()).unwrap();
        assert_eq!(kernel.len(), 2);
        let mut index = HashMap::new();
        for (k, t) in tuples.iter().enumerate() {
            index.insert(tuple_to_monomial(t), k as u32);
        }
        let mut ech: Echelon<BigInt> = Echelon::new();
        for v in &kernel {
            ech.insert(v.clone());
        }
        for q in b3_paper_quadrics(&m) {
            let mut row: SparseVec<BigInt> = q
                .terms()
                .map(|(mono, c)| {
                    assert!(c.denom().is_one());
                    (index[mono], c.numer().clone())
                })
                .collect();
            row.sort_by_key(|&(c, _)| c);
            assert!(ech.contains(row), "paper quadric outside kernel span");
        }
    }

    #[test]
    fn d36_kernel_zero_through_degree_four() {
        let l = divisor_lattice(36).unwrap();
        let sys = join_meet_system(&l).unwrap();
        let m = PresentationMap::from_system(&sys);
        let report = graded_kernel(&m, 4, FieldMode::Rationals, &Budget::default()).unwrap();
        assert!(report.kernel_zero_through(4));
        // the rank-weight leading terms x_i x_j sit on a seven-vertex
        // support graph, so those exponents are dependent; the diagonal
        // order certifies independence
        assert!(!leading_exponents_independent(&m, sys.order()));
        let diag = crate::binomials::grid_diagonal_order(&l).unwrap().unwrap();
        assert!(leading_exponents_independent(&m, &diag));
        assert!(polynomial_ring_certificate(&l, &sys, &m).unwrap());
    }

    #[test]
    fn d54_kernel_is_the_pluecker_trinomial() {
        let l = divisor_lattice(54).unwrap();
        let m = PresentationMap::from_system(&join_meet_system(&l).unwrap());
        let report = graded_kernel(&m, 2, FieldMode::Rationals, &Budget::default()).unwrap();
        assert_eq!(report.slice(2).dim_kernel, 1);
        let g = &report.slice(2).minimal_generators[0];
        assert_eq!(g.num_terms(), 3);
        assert!(m.substitute(g).unwrap().is_zero());
    }

    #[test]
    fn prime_mode_matches_rational_mode_on_b3() {
        let m = b3_map();
        let q = graded_kernel(&m, 3, FieldMode::Rationals, &Budget::default()).unwrap();
        let p = graded_kernel(&m, 3, FieldMode::Prime(DEFAULT_PRIME), &Budget::default()).unwrap();
        for d in 1..=3 {
            assert_eq!(q.slice(d).dim_kernel, p.slice(d).dim_kernel);
            assert_eq!(q.slice(d).hilbert, p.slice(d).hilbert);
            assert_eq!(
                q.slice(d).minimal_generators.len(),
                p.slice(d).minimal_generators.len()
            );
        }
        for g in &p.slice(2).minimal_generators {
            assert!(m.substitute(g).unwrap().is_zero());
        }
    }

    #[test]
    fn leading_exponents_of_b3_cannot_be_independent() {
        let sys = join_meet_system(&b3()).unwrap();
        let m = PresentationMap::from_system(&sys);
        // nine exponent vectors in eight coordinates
        assert!(!leading_exponents_independent(&m, sys.order()));
    }

    #[test]
    fn polynomial_ring_verdicts() {
        let budget = Budget::default();
        let v = is_polynomial_ring(&divisor_lattice(36).unwrap(), 4, &budget).unwrap();
        assert!(v.combinatorial && v.independent_leading_exponents && v.kernel_zero_up_to_cap);

        let v = is_polynomial_ring(&divisor_lattice(54).unwrap(), 4, &budget).unwrap();
        assert!(!v.combinatorial && !v.kernel_zero_up_to_cap);
        assert_eq!(v.first_nonzero_degree, Some(2));

        let v = is_polynomial_ring(&b3(), 4, &budget).unwrap();
        assert!(!v.combinatorial && !v.kernel_zero_up_to_cap);
        assert_eq!(v.first_nonzero_degree, Some(2));
    }

    #[test]
    fn d108_has_a_minimal_cubic_generator() {
        let l = divisor_lattice(108).unwrap();
        let r = quadratic_presentation_check(&l, 3, &Budget::default()).unwrap();
        assert!(!r.generated_in_degree_2_up_to_cap);
        assert_eq!(r.first_non_quadratic_degree, Some(3));
        let w = r.witness.unwrap();
        assert_eq!(w.homogeneous_degree(), Some(3));
        let m = PresentationMap::from_system(&join_meet_system(&l).unwrap());
        assert!(m.substitute(&w).unwrap().is_zero());
    }

    #[test]
    fn thin_lattices_are_quadratically_presented() {
        for rank in 3..=5u32 {
            for l in crate::classify::thin_lattices(rank) {
                let r = quadratic_presentation_check(&l, 4, &Budget::default()).unwrap();
                assert!(r.generated_in_degree_2_up_to_cap);
                assert_eq!(r.quadratic_gb, Some(true));
            }
        }
    }

    #[test]
    fn retract_to_interval_recovers_interval_binomials() {
        let l = divisor_lattice(108).unwrap();
        let a = l.poset().index_of("1").unwrap();
        let b = l.poset().index_of("54").unwrap();
        let (iv, m) = retract_images(&l, a, b).unwrap();
        assert_eq!(iv.len(), 8);
        assert_eq!(m.len(), 6);
        // whole-lattice retraction is the identity presentation
        let (_, whole) = retract_images(&l, l.bottom(), l.top()).unwrap();
        assert_eq!(whole.len(), 18);
        // a chain interval has no incomparable pairs
        let c_lo = l.poset().index_of("1").unwrap();
        let c_hi = l.poset().index_of("4").unwrap();
        let (_, chain_map) = retract_images(&l, c_lo, c_hi).unwrap();
        assert!(chain_map.is_empty());
    }

    #[test]
    fn normal_form_determinism_under_division() {
        // dividing a product of binomials by the system is reproducible
        let sys = join_meet_system(&b3()).unwrap();
        let f = sys.binomial_for("2", "3").unwrap();
        let g = sys.binomial_for("5", "7").unwrap();
        let prod = f.mul(g).unwrap();
        let nf1 =
            crate::poly::normal_form(&prod, sys.binomials(), sys.order()).unwrap();
        let nf2 =
            crate::poly::normal_form(&prod, sys.binomials(), sys.order()).unwrap();
        assert_eq!(nf1, nf2);
        assert_eq!(
            format_poly(&nf1, sys.order()),
            format_poly(&nf2, sys.order())
        );
    }
}
