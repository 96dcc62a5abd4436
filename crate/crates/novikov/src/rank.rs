//! Rank engines for matrices over the Laurent ring.
//!
//! `exact_rank` works over the fraction field by fraction-free (Bareiss)
//! elimination with unit-content stripping; `specialized_rank` evaluates at a
//! point and ranks the scalar matrix; `generic_rank` drives either engine and
//! can cross-check them against each other.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, SpecPoint};
use crate::linalg;

/// A sparse matrix over the Laurent ring in `ring_rank` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    ring_rank: usize,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, ring_rank: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            ring_rank,
            entries: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring_rank(&self) -> usize {
        self.ring_rank
    }

    pub fn num_nonzero(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stores an entry (dropping it if zero). Panics on shape or ring-rank
    /// mismatch — matrices are built by code that owns both.
    pub fn set(&mut self, i: usize, j: usize, value: LaurentPoly) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of shape");
        assert_eq!(value.rank(), self.ring_rank, "ring rank mismatch");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// Adds to an entry in place.
    pub fn add_to(&mut self, i: usize, j: usize, value: &LaurentPoly) {
        let current = self.entry(i, j);
        self.set(i, j, current.try_add(value).expect("ring ranks match"));
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&LaurentPoly> {
        self.entries.get(&(i, j))
    }

    /// The entry as an owned polynomial (zero when absent).
    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.ring_rank))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly)> {
        self.entries.iter()
    }

    pub fn from_dense(ring_rank: usize, rows: Vec<Vec<LaurentPoly>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = LaurentMatrix::new(nrows, ncols, ring_rank);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<LaurentPoly>> {
        let mut out =
            vec![vec![LaurentPoly::zero(self.ring_rank); self.cols]; self.rows];
        for (&(i, j), p) in &self.entries {
            out[i][j] = p.clone();
        }
        out
    }

    /// Matrix product over the Laurent ring.
    pub fn mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != other.rows || self.ring_rank != other.ring_rank {
            return Err(Error::RankMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = LaurentMatrix::new(self.rows, other.cols, self.ring_rank);
        for (&(i, k), a) in &self.entries {
            for j in 0..other.cols {
                if let Some(b) = other.get(k, j) {
                    let prod = a.try_mul(b)?;
                    out.add_to(i, j, &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn eval_mod(&self, coords: &[u64], p: u64) -> Result<Vec<Vec<u64>>> {
        let mut out = vec![vec![0u64; self.cols]; self.rows];
        for (&(i, j), poly) in &self.entries {
            out[i][j] = poly.eval_mod(coords, p)?;
        }
        Ok(out)
    }

    pub fn eval_rational(&self, coords: &[BigRational]) -> Result<linalg::QMatrix> {
        let mut out = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (&(i, j), poly) in &self.entries {
            out[i][j] = poly.eval_rational(coords)?;
        }
        Ok(out)
    }

    pub fn eval_complex(&self, coords: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::<Complex64>::zeros(self.rows, self.cols);
        for (&(i, j), poly) in &self.entries {
            out[(i, j)] = poly.eval_complex(coords)?;
        }
        Ok(out)
    }
}

/// Which engine computed a rank, and with what guarantees.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EngineReport {
    /// Fraction-free elimination over the fraction field; unconditional.
    Exact,
    /// Exact scalar elimination after evaluating at one given point.
    SpecializedAt { point: String, exact_arithmetic: bool },
    /// SVD thresholding at a unit-complex point.
    Numerical { tolerance: f64, ambiguous: bool },
    /// Maximum over random finite-field specializations.
    Randomized { trials: usize, primes: Vec<u64> },
    /// Exact engine agreed with the randomized engine.
    CrossChecked { trials: usize, primes: Vec<u64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct RankResult {
    pub rank: usize,
    pub engine: EngineReport,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Engine selector for generic-rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Specialize,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "specialize" => Ok(Method::Specialize),
            "both" => Ok(Method::Both),
            other => Err(Error::Usage(format!(
                "unknown method `{other}` (expected exact, specialize, or both)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Exact => "exact",
            Method::Specialize => "specialize",
            Method::Both => "both",
        };
        write!(f, "{s}")
    }
}

/// Rank over the fraction field of the Laurent ring.
///
/// Elimination runs on an integer core: each row is scaled by the least
/// common denominator of its coefficients (row scalings never change rank),
/// exponent vectors become fixed-width keys under the lexicographic order,
/// and the matrix is reduced fraction-free — each update is
/// `(pivot·a[i][j] − a[i][k]·a[k][j]) / previous pivot`, the division exact
/// over ℤ[z±] by the Sylvester minor identity. Between steps only unit
/// monomial content is stripped per row and column, which keeps every
/// working entry a unit multiple of an integer minor and so preserves the
/// exact divisibility.
pub fn exact_rank(m: &LaurentMatrix) -> RankResult {
    let start = Instant::now();
    let rank = exact_rank_impl(m);
    RankResult {
        rank,
        engine: EngineReport::Exact,
        elapsed: start.elapsed(),
    }
}

/// Widest ring rank the elimination key accommodates.
const MAX_VARS: usize = 8;

/// Bits per variable in the packed exponent key.
const FIELD_BITS: u32 = 16;

/// Bias added to each stored exponent so fields stay nonnegative.
const FIELD_BIAS: i64 = 1 << 14;

/// Exponent magnitude allowed at the start of an elimination step (checked
/// whenever monomial content is stripped, i.e. every step). Intermediate
/// values within a step stay below 4× this, far inside the biased field, so
/// packed arithmetic can never borrow across fields.
const FIELD_LIMIT: i64 = 2048;

/// Exponent key of the integer core: eight 16-bit biased fields packed into
/// one integer, variable 0 in the most significant field. Integer comparison
/// is then the lexicographic order on exponent vectors — a monomial order —
/// and adding exponent vectors is a single add (the bias is re-subtracted).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Exp(u128);

/// The zero exponent vector: every field holds exactly the bias.
const EXP_ZERO: Exp = Exp(0x4000_4000_4000_4000_4000_4000_4000_4000);

fn exp_add(a: &Exp, b: &Exp) -> Exp {
    Exp(a.0 + b.0 - EXP_ZERO.0)
}

fn exp_sub(a: &Exp, b: &Exp) -> Exp {
    Exp(a.0 + EXP_ZERO.0 - b.0)
}

/// Packs an exponent vector, refusing anything outside the safe field range.
fn exp_pack(v: &[i64]) -> Exp {
    let mut acc = 0u128;
    for k in 0..MAX_VARS {
        let x = v.get(k).copied().unwrap_or(0);
        assert!(
            x.abs() <= FIELD_LIMIT,
            "exponent {x} exceeds the elimination key range"
        );
        acc |= ((x + FIELD_BIAS) as u128) << (FIELD_BITS * (MAX_VARS - 1 - k) as u32);
    }
    Exp(acc)
}

fn exp_unpack(e: &Exp) -> [i64; MAX_VARS] {
    let mut out = [0i64; MAX_VARS];
    for (k, slot) in out.iter_mut().enumerate() {
        let shift = FIELD_BITS * (MAX_VARS - 1 - k) as u32;
        *slot = ((e.0 >> shift) & 0xFFFF) as i64 - FIELD_BIAS;
    }
    out
}

/// Elimination coefficient: a machine integer that promotes itself to a big
/// integer on overflow. Minor coefficients at desk scale almost always fit
/// `i128`, and keeping them unboxed removes an allocation from every product
/// in the elimination's inner loop. Every small-path operation is `checked_`;
/// `None` promotes, so no wraparound can slip through.
#[derive(Clone, Debug)]
enum Coeff {
    Small(i128),
    Big(Box<BigInt>),
}

impl Coeff {
    fn zero() -> Self {
        Coeff::Small(0)
    }

    fn is_zero(&self) -> bool {
        match self {
            Coeff::Small(x) => *x == 0,
            Coeff::Big(b) => b.is_zero(),
        }
    }

    fn from_bigint(b: BigInt) -> Self {
        match i128::try_from(&b) {
            Ok(x) => Coeff::Small(x),
            Err(_) => Coeff::Big(Box::new(b)),
        }
    }

    fn to_bigint(&self) -> BigInt {
        match self {
            Coeff::Small(x) => BigInt::from(*x),
            Coeff::Big(b) => (**b).clone(),
        }
    }

    fn mul(a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Small(x), Coeff::Small(y)) => match x.checked_mul(*y) {
                Some(p) => Coeff::Small(p),
                None => Coeff::from_bigint(BigInt::from(*x) * *y),
            },
            _ => Coeff::from_bigint(a.to_bigint() * b.to_bigint()),
        }
    }

    fn neg(self) -> Coeff {
        match self {
            Coeff::Small(x) => match x.checked_neg() {
                Some(n) => Coeff::Small(n),
                None => Coeff::from_bigint(-BigInt::from(x)),
            },
            Coeff::Big(b) => Coeff::from_bigint(-*b),
        }
    }

    fn add_assign(&mut self, other: &Coeff) {
        match (&mut *self, other) {
            (Coeff::Small(x), Coeff::Small(y)) => match x.checked_add(*y) {
                Some(s) => *x = s,
                None => *self = Coeff::from_bigint(BigInt::from(*x) + *y),
            },
            _ => *self = Coeff::from_bigint(self.to_bigint() + other.to_bigint()),
        }
    }

    fn sub_assign(&mut self, other: &Coeff) {
        match (&mut *self, other) {
            (Coeff::Small(x), Coeff::Small(y)) => match x.checked_sub(*y) {
                Some(s) => *x = s,
                None => *self = Coeff::from_bigint(BigInt::from(*x) - *y),
            },
            _ => *self = Coeff::from_bigint(self.to_bigint() - other.to_bigint()),
        }
    }

    /// Quotient and remainder, truncating like the integers do.
    fn div_rem(&self, other: &Coeff) -> (Coeff, Coeff) {
        if let (Coeff::Small(x), Coeff::Small(y)) = (self, other) {
            // i128::MIN / -1 is the one overflowing case; fall through to it.
            if let (Some(q), Some(r)) = (x.checked_div(*y), x.checked_rem(*y)) {
                return (Coeff::Small(q), Coeff::Small(r));
            }
        }
        let (q, r) = self.to_bigint().div_rem(&other.to_bigint());
        (Coeff::from_bigint(q), Coeff::from_bigint(r))
    }
}

/// Integer Laurent polynomial private to the exact engine: terms sorted by
/// exponent key, coefficients in the small/big hybrid. All elimination
/// arithmetic stays in this form; nothing here ever reduces a fraction.
#[derive(Clone, Debug, Default)]
struct IPoly {
    terms: Vec<(Exp, Coeff)>,
}

impl IPoly {
    fn zero() -> Self {
        IPoly { terms: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn leading(&self) -> Option<&(Exp, Coeff)> {
        self.terms.last()
    }

    /// Shifts every exponent by `delta` in place; order is preserved because
    /// the shift is uniform.
    fn shift(&mut self, delta: &Exp) {
        for (e, _) in &mut self.terms {
            *e = exp_add(e, delta);
        }
    }

    /// Division by a single term, exact by construction of the callers.
    fn div_term(&self, de: &Exp, dc: &Coeff) -> Self {
        IPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(dc);
                    assert!(r.is_zero(), "inexact elimination (unit divisor)");
                    (exp_sub(e, de), q)
                })
                .collect(),
        }
    }

    /// Exact division in ℤ[z±] by leading-term elimination. Panics if the
    /// divisor does not in fact divide `self` — with fraction-free updates
    /// that can only mean a bug, and a loud stop beats a silent wrong rank.
    fn exact_div(&self, divisor: &Self) -> Self {
        if let [(de, dc)] = divisor.terms.as_slice() {
            return self.div_term(de, dc);
        }
        let (de, dc) = divisor.leading().expect("division by zero polynomial");
        let lower = &divisor.terms[..divisor.terms.len() - 1];
        let mut rem: BTreeMap<Exp, Coeff> = self.terms.iter().cloned().collect();
        let mut quotient: Vec<(Exp, Coeff)> = Vec::new();
        // Each pass cancels the remainder's current leading term, and every
        // key it inserts is strictly smaller, so passes = quotient terms for
        // a true multiple. The cap turns non-divisibility into a loud bug.
        let cap = 4 + self.num_terms() * (2 + divisor.num_terms()) * 8;
        for _ in 0..cap {
            let Some((&re, _)) = rem.last_key_value() else {
                quotient.reverse();
                return IPoly { terms: quotient };
            };
            let rc = rem.remove(&re).expect("leading key present");
            let qe = exp_sub(&re, de);
            let (qc, rr) = rc.div_rem(dc);
            assert!(rr.is_zero(), "inexact elimination (leading coefficient)");
            for (te, tc) in lower {
                let key = exp_add(te, &qe);
                let slot = rem.entry(key).or_insert_with(Coeff::zero);
                slot.sub_assign(&Coeff::mul(&qc, tc));
                if slot.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.push((qe, qc));
        }
        panic!("exact division did not terminate: the divisor is not a factor");
    }
}

/// Pushes every term of the product `a·b` (negated when asked) onto `buf`.
fn push_products(buf: &mut Vec<(Exp, Coeff)>, a: &IPoly, b: &IPoly, negate: bool) {
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let prod = Coeff::mul(ca, cb);
            let prod = if negate { prod.neg() } else { prod };
            buf.push((exp_add(ea, eb), prod));
        }
    }
}

/// Sorts raw product terms and collapses equal exponents. Sort + linear
/// merge beats tree inserts by a wide margin at the sizes elimination
/// produces, and the buffer is bounded by the caller.
fn collapse(mut buf: Vec<(Exp, Coeff)>) -> IPoly {
    buf.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    let mut terms: Vec<(Exp, Coeff)> = Vec::new();
    for (e, c) in buf {
        match terms.last_mut() {
            Some((le, lc)) if *le == e => lc.add_assign(&c),
            _ => terms.push((e, c)),
        }
    }
    terms.retain(|(_, c)| !c.is_zero());
    IPoly { terms }
}

/// An axis-aligned exponent box with mixed-radix strides, variable 0 at the
/// highest stride so that flat-index order coincides with the packed-key
/// lexicographic order. Late elimination steps produce polynomials that are
/// dense inside such a box, where a flat accumulator crushes tree maps.
struct ExpBox {
    mins: [i64; MAX_VARS],
    strides: [i64; MAX_VARS],
    len: usize,
    /// Σ mins·strides, subtracted once so offsets start at zero.
    base: i64,
}

/// Upper bound on dense accumulator slots (i128 each, so ≈ 64 MB).
const DENSE_LIMIT: usize = 1 << 22;

impl ExpBox {
    fn from_bounds(mins: [i64; MAX_VARS], maxs: [i64; MAX_VARS]) -> Option<ExpBox> {
        let mut strides = [0i64; MAX_VARS];
        let mut len: i64 = 1;
        for k in (0..MAX_VARS).rev() {
            strides[k] = len;
            let ext = maxs[k] - mins[k] + 1;
            len = len.checked_mul(ext)?;
            if len as usize > DENSE_LIMIT {
                return None;
            }
        }
        let base: i64 = mins.iter().zip(&strides).map(|(m, s)| m * s).sum();
        Some(ExpBox {
            mins,
            strides,
            len: len as usize,
            base,
        })
    }

    /// Raw linear form Σ e·stride of a term, before the base shift.
    fn raw(&self, e: &Exp) -> i64 {
        exp_unpack(e)
            .iter()
            .zip(&self.strides)
            .map(|(x, s)| x * s)
            .sum()
    }

    fn exp_at(&self, idx: usize) -> Exp {
        let mut rest = idx as i64;
        let mut v = [0i64; MAX_VARS];
        for k in 0..MAX_VARS {
            v[k] = self.mins[k] + rest / self.strides[k];
            rest %= self.strides[k];
        }
        exp_pack(&v)
    }
}

/// Per-variable exponent bounds of a polynomial; `None` when it is zero.
fn poly_bounds(p: &IPoly) -> Option<([i64; MAX_VARS], [i64; MAX_VARS])> {
    let mut it = p.terms.iter();
    let first = exp_unpack(&it.next()?.0);
    let (mut mins, mut maxs) = (first, first);
    for (e, _) in it {
        for (k, x) in exp_unpack(e).iter().enumerate() {
            mins[k] = mins[k].min(*x);
            maxs[k] = maxs[k].max(*x);
        }
    }
    Some((mins, maxs))
}

/// Flat accumulator: machine-integer slots with a big-integer spill lane for
/// the (rare) overflowing slot. Indices never collide across lanes in a
/// wrong way — a slot's true value is always `arr[idx] + spill[idx]`.
struct DenseAcc {
    arr: Vec<i128>,
    spill: BTreeMap<usize, BigInt>,
}

impl DenseAcc {
    fn new(len: usize) -> Self {
        DenseAcc {
            arr: vec![0i128; len],
            spill: BTreeMap::new(),
        }
    }

    fn add(&mut self, idx: usize, c: &Coeff) {
        match c {
            Coeff::Small(x) => match self.arr[idx].checked_add(*x) {
                Some(s) => self.arr[idx] = s,
                None => {
                    let moved = BigInt::from(self.arr[idx]) + *x;
                    self.arr[idx] = 0;
                    *self.spill.entry(idx).or_insert_with(BigInt::zero) += moved;
                }
            },
            Coeff::Big(b) => {
                *self.spill.entry(idx).or_insert_with(BigInt::zero) += &**b;
            }
        }
    }

    fn sub(&mut self, idx: usize, c: &Coeff) {
        match c {
            Coeff::Small(x) => match self.arr[idx].checked_sub(*x) {
                Some(s) => self.arr[idx] = s,
                None => {
                    let moved = BigInt::from(self.arr[idx]) - *x;
                    self.arr[idx] = 0;
                    *self.spill.entry(idx).or_insert_with(BigInt::zero) += moved;
                }
            },
            Coeff::Big(b) => {
                *self.spill.entry(idx).or_insert_with(BigInt::zero) -= &**b;
            }
        }
    }

    fn take(&mut self, idx: usize) -> Coeff {
        let small = std::mem::take(&mut self.arr[idx]);
        match self.spill.remove(&idx) {
            None => Coeff::Small(small),
            Some(big) => Coeff::from_bigint(big + small),
        }
    }

    fn is_slot_zero(&self, idx: usize) -> bool {
        self.arr[idx] == 0 && !self.spill.contains_key(&idx)
    }
}

/// Dense path of the fraction-free numerator `p·aij − ais·asj`: accumulate
/// both products into one flat box. Returns `None` when the box would be too
/// large, letting the caller fall back to sparse accumulation.
fn dense_mul_sub(p: &IPoly, aij: &IPoly, ais: &IPoly, asj: &IPoly) -> Option<IPoly> {
    let mut bounds: Option<([i64; MAX_VARS], [i64; MAX_VARS])> = None;
    for (x, y) in [(p, aij), (ais, asj)] {
        let (Some((xm, xx)), Some((ym, yx))) = (poly_bounds(x), poly_bounds(y)) else {
            continue;
        };
        let mut mins = [0i64; MAX_VARS];
        let mut maxs = [0i64; MAX_VARS];
        for k in 0..MAX_VARS {
            mins[k] = xm[k] + ym[k];
            maxs[k] = xx[k] + yx[k];
        }
        bounds = Some(match bounds {
            None => (mins, maxs),
            Some((mut bm, mut bx)) => {
                for k in 0..MAX_VARS {
                    bm[k] = bm[k].min(mins[k]);
                    bx[k] = bx[k].max(maxs[k]);
                }
                (bm, bx)
            }
        });
    }
    let (mins, maxs) = bounds?;
    let bx = ExpBox::from_bounds(mins, maxs)?;
    let mut acc = DenseAcc::new(bx.len);
    for (x, y, negate) in [(p, aij, false), (ais, asj, true)] {
        for (ea, ca) in &x.terms {
            let ra = bx.raw(ea) - bx.base;
            for (eb, cb) in &y.terms {
                let idx = (ra + bx.raw(eb)) as usize;
                let prod = Coeff::mul(ca, cb);
                if negate {
                    acc.sub(idx, &prod);
                } else {
                    acc.add(idx, &prod);
                }
            }
        }
    }
    let mut terms = Vec::new();
    for idx in 0..bx.len {
        if !acc.is_slot_zero(idx) {
            terms.push((bx.exp_at(idx), acc.take(idx)));
        }
    }
    Some(IPoly { terms })
}

/// Dense long division: the remainder lives in the numerator's own box (for
/// an exact quotient every intermediate remainder term stays inside it), and
/// one monotone downward pass over the box produces the quotient. Returns
/// `None` when the box is too large for the flat accumulator.
fn dense_exact_div(num: &IPoly, divisor: &IPoly) -> Option<IPoly> {
    let (mins, maxs) = poly_bounds(num)?;
    let bx = ExpBox::from_bounds(mins, maxs)?;
    let (de, dc) = divisor.leading().expect("division by zero polynomial");
    let dr = bx.raw(de);
    // Offsets from a remainder's leading slot down to each lower divisor
    // term's slot; positive because the order is stride-compatible.
    let lower: Vec<(i64, &Coeff)> = divisor.terms[..divisor.terms.len() - 1]
        .iter()
        .map(|(te, tc)| (dr - bx.raw(te), tc))
        .collect();
    if lower.iter().any(|(d, _)| *d <= 0) {
        // Possible only when the divisor is not a factor (its spread then
        // needn't fit the box); let the sparse path raise the loud panic.
        return None;
    }
    let mut acc = DenseAcc::new(bx.len);
    for (e, c) in &num.terms {
        acc.add((bx.raw(e) - bx.base) as usize, c);
    }
    let mut quotient: Vec<(Exp, Coeff)> = Vec::new();
    for idx in (0..bx.len).rev() {
        if acc.is_slot_zero(idx) {
            continue;
        }
        let rc = acc.take(idx);
        let (qc, rr) = rc.div_rem(dc);
        assert!(rr.is_zero(), "inexact elimination (leading coefficient)");
        for (delta, tc) in &lower {
            let at = idx as i64 - delta;
            assert!(at >= 0, "inexact elimination (term escaped the box)");
            acc.sub(at as usize, &Coeff::mul(&qc, tc));
        }
        quotient.push((exp_sub(&bx.exp_at(idx), de), qc));
    }
    quotient.reverse();
    Some(IPoly { terms: quotient })
}

/// Memory guard for the sort-merge path: beyond this many raw product terms
/// (≈ tens of MB), accumulate densely or through a map instead.
const SORT_MERGE_LIMIT: usize = 1 << 18;

/// Work threshold past which division switches to the dense path.
const DENSE_DIV_WORK: usize = 1 << 14;

/// One fraction-free update: `(p·aij − ais·asj) / prev`, with `prev = None`
/// standing for the first step's implicit divisor 1.
fn bareiss_update(
    p: &IPoly,
    aij: &IPoly,
    ais: &IPoly,
    asj: &IPoly,
    prev: Option<&IPoly>,
) -> IPoly {
    let raw = p.num_terms() * aij.num_terms() + ais.num_terms() * asj.num_terms();
    let num = if raw <= SORT_MERGE_LIMIT {
        let mut buf = Vec::with_capacity(raw);
        push_products(&mut buf, p, aij, false);
        push_products(&mut buf, ais, asj, true);
        collapse(buf)
    } else if let Some(dense) = dense_mul_sub(p, aij, ais, asj) {
        dense
    } else {
        let mut acc: BTreeMap<Exp, Coeff> = BTreeMap::new();
        for (x, y, negate) in [(p, aij, false), (ais, asj, true)] {
            for (ea, ca) in &x.terms {
                for (eb, cb) in &y.terms {
                    let key = exp_add(ea, eb);
                    let prod = Coeff::mul(ca, cb);
                    let slot = acc.entry(key).or_insert_with(Coeff::zero);
                    if negate {
                        slot.sub_assign(&prod);
                    } else {
                        slot.add_assign(&prod);
                    }
                    if slot.is_zero() {
                        acc.remove(&key);
                    }
                }
            }
        }
        IPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    };
    match prev {
        None => num,
        Some(_) if num.is_zero() => num,
        Some(d) if d.num_terms() == 1 || num.num_terms() * d.num_terms() <= DENSE_DIV_WORK => {
            num.exact_div(d)
        }
        Some(d) => dense_exact_div(&num, d).unwrap_or_else(|| num.exact_div(d)),
    }
}

/// Converts to the integer core: per row, coefficients are multiplied by the
/// least common denominator of the row (a nonzero scalar row scaling, so the
/// rank is untouched) and exponents move into packed keys.
fn to_integer_rows(m: &LaurentMatrix) -> Vec<Vec<IPoly>> {
    assert!(
        m.ring_rank <= MAX_VARS,
        "exact engine supports ring rank up to {MAX_VARS}, got {}",
        m.ring_rank
    );
    let mut out = vec![vec![IPoly::zero(); m.cols]; m.rows];
    for i in 0..m.rows {
        let mut den_lcm = BigInt::one();
        for j in 0..m.cols {
            if let Some(p) = m.get(i, j) {
                for (_, c) in p.terms() {
                    den_lcm = den_lcm.lcm(c.denom());
                }
            }
        }
        for j in 0..m.cols {
            let Some(p) = m.get(i, j) else { continue };
            let mut terms: Vec<(Exp, Coeff)> = p
                .terms()
                .map(|(e, c)| {
                    (
                        exp_pack(e.entries()),
                        Coeff::from_bigint(c.numer() * (&den_lcm / c.denom())),
                    )
                })
                .collect();
            terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            out[i][j] = IPoly { terms };
        }
    }
    out
}

/// Strips the common unit-monomial factor from each active row and column.
/// Units of ℤ[z±] divide everything, so later exact divisions stay exact,
/// and exponents stay near zero instead of drifting upward step by step.
/// Doubles as the per-step range check on every live exponent.
fn strip_monomial_content(a: &mut [Vec<IPoly>], step: usize) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for i in step..rows {
        strip_monomial_slice(a[i][step..].iter_mut());
    }
    for j in step..cols {
        strip_monomial_slice(a[step..].iter_mut().map(|row| &mut row[j]));
    }
}

fn strip_monomial_slice<'a>(entries: impl Iterator<Item = &'a mut IPoly>) {
    let entries: Vec<&'a mut IPoly> = entries.collect();
    let mut mins: Option<[i64; MAX_VARS]> = None;
    for p in entries.iter() {
        for (e, _) in &p.terms {
            let u = exp_unpack(e);
            for x in u {
                assert!(
                    x.abs() <= FIELD_LIMIT,
                    "exponent {x} exceeds the elimination key range"
                );
            }
            mins = Some(match mins {
                None => u,
                Some(mut m) => {
                    for (slot, x) in m.iter_mut().zip(u) {
                        *slot = (*slot).min(x);
                    }
                    m
                }
            });
        }
    }
    let Some(mins) = mins else { return };
    if mins.iter().all(|&x| x == 0) {
        return;
    }
    let neg: Vec<i64> = mins.iter().map(|&x| -x).collect();
    let delta = exp_pack(&neg);
    for p in entries {
        p.shift(&delta);
    }
}

fn exact_rank_impl(m: &LaurentMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    if rows == 0 || cols == 0 || m.is_zero() {
        return 0;
    }
    let mut a = to_integer_rows(m);

    let n = rows.min(cols);
    let mut prev: Option<IPoly> = None;
    let mut rank = 0;
    for step in 0..n {
        strip_monomial_content(&mut a, step);
        // Markowitz-style pivot: fewest terms, ties at lowest (row, col)
        let mut pivot: Option<(usize, usize, usize)> = None;
        for i in step..rows {
            for j in step..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let t = a[i][j].num_terms();
                if pivot.map(|(pt, pi, pj)| (t, i, j) < (pt, pi, pj)).unwrap_or(true) {
                    pivot = Some((t, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else {
            break;
        };
        a.swap(step, pi);
        for row in a.iter_mut() {
            row.swap(step, pj);
        }
        rank += 1;

        let pivot_poly = a[step][step].clone();
        for i in step + 1..rows {
            if a[i][step].is_zero() && a[i].iter().skip(step + 1).all(IPoly::is_zero) {
                continue;
            }
            for j in step + 1..cols {
                a[i][j] = bareiss_update(
                    &pivot_poly,
                    &a[i][j],
                    &a[i][step],
                    &a[step][j],
                    prev.as_ref(),
                );
            }
            a[i][step] = IPoly::zero();
        }
        prev = Some(pivot_poly);
    }
    rank
}

/// Rank of the matrix specialized at one point.
///
/// Finite-field and exact-rational points use exact scalar elimination.
/// Unit-torus points whose coordinates are all ±1 (half-integer turns) are
/// upgraded to exact rational evaluation; other torus points use SVD with the
/// given relative tolerance, flagging ambiguity when some singular value lies
/// within a factor 10 of the threshold.
pub fn specialized_rank(m: &LaurentMatrix, at: &SpecPoint, tolerance: f64) -> Result<RankResult> {
    let start = Instant::now();
    if at.rank() != m.ring_rank {
        return Err(Error::RankMismatch {
            left: m.ring_rank,
            right: at.rank(),
        });
    }
    at.validate()?;
    if m.rows == 0 || m.cols == 0 {
        return Ok(RankResult {
            rank: 0,
            engine: EngineReport::SpecializedAt {
                point: at.describe(),
                exact_arithmetic: true,
            },
            elapsed: start.elapsed(),
        });
    }
    let (rank, engine) = match at {
        SpecPoint::FiniteField { prime, coords } => {
            let evaluated = m.eval_mod(coords, *prime)?;
            (
                linalg::rank_mod(evaluated, *prime),
                EngineReport::SpecializedAt {
                    point: at.describe(),
                    exact_arithmetic: true,
                },
            )
        }
        _ => {
            if let Some(coords) = at.exact_coords() {
                let evaluated = m.eval_rational(&coords)?;
                (
                    linalg::rank_rational(&evaluated),
                    EngineReport::SpecializedAt {
                        point: at.describe(),
                        exact_arithmetic: true,
                    },
                )
            } else {
                let coords = at.unit_coords().expect("non-exact point is unit-complex");
                let evaluated = m.eval_complex(&coords)?;
                let (rank, ambiguous) = svd_rank(&evaluated, tolerance);
                (rank, EngineReport::Numerical { tolerance, ambiguous })
            }
        }
    };
    Ok(RankResult {
        rank,
        engine,
        elapsed: start.elapsed(),
    })
}

/// Numerical rank: singular values above tolerance·σ_max, with an ambiguity
/// flag when any singular value sits within a factor 10 of the threshold.
fn svd_rank(m: &DMatrix<Complex64>, tolerance: f64) -> (usize, bool) {
    let sv = m.singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        return (0, false);
    }
    let threshold = tolerance * sigma_max;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let ambiguous = sv
        .iter()
        .any(|&s| s > threshold / 10.0 && s < threshold * 10.0);
    (rank, ambiguous)
}

/// The generic rank of the matrix: rank over the fraction field, equal to the
/// specialized rank at every point outside a proper subvariety.
///
/// `Specialize` takes the maximum over `trials` random finite-field points —
/// a one-sided estimate (specialization can only lose rank), correct with
/// high probability by Schwartz–Zippel. `Both` runs the exact engine too and
/// errors if they disagree. Trial t draws from stream t of a seeded ChaCha
/// generator, so results are reproducible regardless of evaluation order.
pub fn generic_rank(
    m: &LaurentMatrix,
    method: Method,
    trials: usize,
    seed: u64,
) -> Result<RankResult> {
    let start = Instant::now();
    match method {
        Method::Exact => Ok(exact_rank(m)),
        Method::Specialize => {
            let (rank, primes) = randomized_rank(m, trials, seed)?;
            Ok(RankResult {
                rank,
                engine: EngineReport::Randomized { trials, primes },
                elapsed: start.elapsed(),
            })
        }
        Method::Both => {
            let exact = exact_rank(m);
            let (rank, primes) = randomized_rank(m, trials, seed)?;
            if rank != exact.rank {
                return Err(Error::EngineDisagreement {
                    exact: exact.rank,
                    specialized: rank,
                });
            }
            Ok(RankResult {
                rank: exact.rank,
                engine: EngineReport::CrossChecked { trials, primes },
                elapsed: start.elapsed(),
            })
        }
    }
}

fn randomized_rank(m: &LaurentMatrix, trials: usize, seed: u64) -> Result<(usize, Vec<u64>)> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    let mut best = 0;
    let mut primes = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let point = SpecPoint::random_finite_field(&mut rng, m.ring_rank);
        if let SpecPoint::FiniteField { prime, .. } = &point {
            primes.push(*prime);
        }
        let result = specialized_rank(m, &point, 0.0)?;
        best = best.max(result.rank);
    }
    Ok((best, primes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ExponentVec;
    use rand::Rng;

    fn z_minus_one() -> LaurentPoly {
        LaurentPoly::var(1, 0)
            .try_sub(&LaurentPoly::one(1))
            .unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn nonzero_one_by_one_has_rank_one() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one()]]);
        assert_eq!(exact_rank(&m).rank, 1);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = LaurentMatrix::new(3, 4, 2);
        assert_eq!(exact_rank(&m).rank, 0);
        let empty = LaurentMatrix::new(0, 5, 1);
        assert_eq!(exact_rank(&empty).rank, 0);
        assert_eq!(
            generic_rank(&empty, Method::Specialize, 3, 1).unwrap().rank,
            0
        );
    }

    #[test]
    fn proportional_columns_have_rank_one() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one(), z_minus_one()]]);
        assert_eq!(exact_rank(&m).rank, 1);
    }

    #[test]
    fn specialization_at_the_jump_point_drops_rank() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one()]]);
        let at_one = SpecPoint::Rational {
            coords: vec![BigRational::one()],
        };
        assert_eq!(specialized_rank(&m, &at_one, 1e-8).unwrap().rank, 0);

        let ff = SpecPoint::FiniteField {
            prime: 101,
            coords: vec![5],
        };
        assert_eq!(specialized_rank(&m, &ff, 1e-8).unwrap().rank, 1);
    }

    #[test]
    fn torus_boundary_matrix_ranks_agree_across_engines() {
        // D₁ of the two-variable one-vertex torus model: [z₁−1, z₂−1, z₁z₂−1]
        let d1 = LaurentMatrix::from_dense(
            2,
            vec![vec![
                LaurentPoly::var(2, 0).try_sub(&LaurentPoly::one(2)).unwrap(),
                LaurentPoly::var(2, 1).try_sub(&LaurentPoly::one(2)).unwrap(),
                LaurentPoly::monomial(ExponentVec::new(vec![1, 1]))
                    .try_sub(&LaurentPoly::one(2))
                    .unwrap(),
            ]],
        );
        let exact = exact_rank(&d1).rank;
        assert_eq!(exact, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pt = SpecPoint::random_unit(&mut rng, 2);
        let numerical = specialized_rank(&d1, &pt, 1e-8).unwrap();
        assert_eq!(numerical.rank, exact);
        match numerical.engine {
            EngineReport::Numerical { ambiguous, .. } => assert!(!ambiguous),
            other => panic!("expected numerical engine, got {other:?}"),
        }
    }

    #[test]
    fn randomized_engine_finds_generic_rank() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one()]]);
        let r = generic_rank(&m, Method::Specialize, 5, 7).unwrap();
        assert_eq!(r.rank, 1);
        match r.engine {
            EngineReport::Randomized { trials, primes } => {
                assert_eq!(trials, 5);
                assert_eq!(primes.len(), 5);
                assert!(primes.iter().all(|&p| (1u64 << 30..1 << 31).contains(&p)));
            }
            other => panic!("expected randomized engine, got {other:?}"),
        }
    }

    #[test]
    fn both_mode_cross_checks() {
        let m = LaurentMatrix::from_dense(
            1,
            vec![
                vec![z_minus_one(), LaurentPoly::one(1)],
                vec![LaurentPoly::zero(1), z_minus_one()],
            ],
        );
        let r = generic_rank(&m, Method::Both, 3, 11).unwrap();
        assert_eq!(r.rank, 2);
        assert!(matches!(r.engine, EngineReport::CrossChecked { .. }));
    }

    #[test]
    fn zero_trials_is_an_error() {
        let m = LaurentMatrix::new(1, 1, 1);
        assert!(matches!(
            generic_rank(&m, Method::Specialize, 0, 1),
            Err(Error::InvalidTrials)
        ));
    }

    #[test]
    fn determinism_per_seed() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one(), LaurentPoly::one(1)]]);
        let a = generic_rank(&m, Method::Specialize, 4, 99).unwrap();
        let b = generic_rank(&m, Method::Specialize, 4, 99).unwrap();
        assert_eq!(a.rank, b.rank);
        match (a.engine, b.engine) {
            (
                EngineReport::Randomized { primes: pa, .. },
                EngineReport::Randomized { primes: pb, .. },
            ) => assert_eq!(pa, pb),
            _ => panic!("expected randomized engines"),
        }
    }

    fn random_sparse(rng: &mut ChaCha8Rng) -> LaurentMatrix {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let r = rng.gen_range(1..=3);
        let mut m = LaurentMatrix::new(rows, cols, r);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.4) {
                    let nterms = rng.gen_range(1..=3);
                    let p = LaurentPoly::from_terms(
                        r,
                        (0..nterms).map(|_| {
                            (
                                ExponentVec::new(
                                    (0..r).map(|_| rng.gen_range(-2..=2)).collect(),
                                ),
                                rat(rng.gen_range(-3i64..=3), 1),
                            )
                        }),
                    )
                    .unwrap();
                    m.set(i, j, p);
                }
            }
        }
        m
    }

    #[test]
    fn specialization_never_exceeds_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let m = random_sparse(&mut rng);
            let exact = exact_rank(&m).rank;
            assert!(exact <= m.rows().min(m.cols()));
            for _ in 0..2 {
                let pt = SpecPoint::random_finite_field(&mut rng, m.ring_rank());
                let spec = specialized_rank(&m, &pt, 0.0).unwrap().rank;
                assert!(
                    spec <= exact,
                    "specialized rank {spec} exceeds exact rank {exact}"
                );
            }
        }
    }

    #[test]
    fn unit_row_scaling_preserves_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let m = random_sparse(&mut rng);
            let base = exact_rank(&m).rank;
            let mut scaled = m.clone();
            let row = rng.gen_range(0..m.rows());
            let unit_exp =
                ExponentVec::new((0..m.ring_rank()).map(|_| rng.gen_range(-2..=2i64)).collect());
            let coeff = rat(rng.gen_range(1..=3), rng.gen_range(1..=3));
            for j in 0..m.cols() {
                let e = scaled.entry(row, j).mul_term(&coeff, &unit_exp);
                scaled.set(row, j, e);
            }
            assert_eq!(exact_rank(&scaled).rank, base);
        }
    }

    #[test]
    fn block_diagonal_rank_adds() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let a = random_sparse(&mut rng);
            let b = random_sparse(&mut rng);
            if a.ring_rank() != b.ring_rank() {
                continue;
            }
            let r = a.ring_rank();
            let mut block =
                LaurentMatrix::new(a.rows() + b.rows(), a.cols() + b.cols(), r);
            for (&(i, j), p) in a.iter() {
                block.set(i, j, p.clone());
            }
            for (&(i, j), p) in b.iter() {
                block.set(a.rows() + i, a.cols() + j, p.clone());
            }
            assert_eq!(
                exact_rank(&block).rank,
                exact_rank(&a).rank + exact_rank(&b).rank
            );
        }
    }

    #[test]
    fn matrix_product_works() {
        // [[z, 1]] · [[1], [−z]] = [0]
        let z = LaurentPoly::var(1, 0);
        let a = LaurentMatrix::from_dense(1, vec![vec![z.clone(), LaurentPoly::one(1)]]);
        let b = LaurentMatrix::from_dense(1, vec![vec![LaurentPoly::one(1)], vec![z.neg()]]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.rows(), 1);
        assert_eq!(prod.cols(), 1);
        assert!(prod.is_zero());
    }

    #[test]
    fn numerical_rank_flags_near_threshold_values() {
        // entries far from the threshold: unambiguous
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one()]]);
        let pt = SpecPoint::UnitComplex {
            turns: vec![rat(1, 4)],
        };
        let r = specialized_rank(&m, &pt, 1e-8).unwrap();
        assert_eq!(r.rank, 1);
        match r.engine {
            EngineReport::Numerical { ambiguous, .. } => assert!(!ambiguous),
            other => panic!("expected numerical, got {other:?}"),
        }
        // forcing an enormous tolerance makes the lone singular value ambiguous
        let r = specialized_rank(&m, &pt, 0.5).unwrap();
        match r.engine {
            EngineReport::Numerical { ambiguous, .. } => assert!(ambiguous),
            other => panic!("expected numerical, got {other:?}"),
        }
    }

    #[test]
    fn half_turn_points_use_exact_arithmetic() {
        let m = LaurentMatrix::from_dense(1, vec![vec![z_minus_one()]]);
        let trivial = SpecPoint::trivial(1);
        let r = specialized_rank(&m, &trivial, 1e-8).unwrap();
        assert_eq!(r.rank, 0);
        match r.engine {
            EngineReport::SpecializedAt {
                exact_arithmetic, ..
            } => assert!(exact_arithmetic),
            other => panic!("expected exact specialization, got {other:?}"),
        }
        // z = −1 (half turn): z−1 = −2, rank 1, still exact
        let half = SpecPoint::UnitComplex {
            turns: vec![rat(1, 2)],
        };
        let r = specialized_rank(&m, &half, 1e-8).unwrap();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn bareiss_handles_dense_polynomial_blowup() {
        // Vandermonde-flavored matrix in two variables; rank is full.
        let z1 = LaurentPoly::var(2, 0);
        let z2 = LaurentPoly::var(2, 1);
        let one = LaurentPoly::one(2);
        let m = LaurentMatrix::from_dense(
            2,
            vec![
                vec![one.clone(), z1.clone(), z1.try_mul(&z1).unwrap()],
                vec![one.clone(), z2.clone(), z2.try_mul(&z2).unwrap()],
                vec![
                    one.clone(),
                    z1.try_mul(&z2).unwrap(),
                    z1.try_mul(&z2).unwrap().try_mul(&z1.try_mul(&z2).unwrap()).unwrap(),
                ],
            ],
        );
        assert_eq!(exact_rank(&m).rank, 3);
        let r = generic_rank(&m, Method::Both, 5, 3).unwrap();
        assert_eq!(r.rank, 3);
    }

    /// Random integer polynomial on a few variables for the core tests.
    fn random_ipoly(rng: &mut impl Rng, vars: usize, terms: usize) -> IPoly {
        let mut buf = Vec::new();
        for _ in 0..terms {
            let mut v = vec![0i64; MAX_VARS];
            for slot in v.iter_mut().take(vars) {
                *slot = rng.gen_range(-6..=6);
            }
            buf.push((exp_pack(&v), Coeff::Small(rng.gen_range(-50..=50))));
        }
        collapse(buf)
    }

    fn ipoly_to_map(p: &IPoly) -> BTreeMap<Exp, BigInt> {
        p.terms
            .iter()
            .map(|(e, c)| (*e, c.to_bigint()))
            .collect()
    }

    #[test]
    fn dense_product_matches_sorted_merge() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..40 {
            let p = random_ipoly(&mut rng, 3, 30);
            let a = random_ipoly(&mut rng, 3, 25);
            let b = random_ipoly(&mut rng, 3, 20);
            let c = random_ipoly(&mut rng, 3, 15);
            let mut buf = Vec::new();
            push_products(&mut buf, &p, &a, false);
            push_products(&mut buf, &b, &c, true);
            let sparse = collapse(buf);
            let dense = dense_mul_sub(&p, &a, &b, &c).expect("box fits");
            assert_eq!(ipoly_to_map(&sparse), ipoly_to_map(&dense));
        }
    }

    #[test]
    fn dense_division_inverts_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..40 {
            let a = random_ipoly(&mut rng, 2, 18);
            let b = random_ipoly(&mut rng, 2, 12);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let mut buf = Vec::new();
            push_products(&mut buf, &a, &b, false);
            let prod = collapse(buf);
            let q1 = dense_exact_div(&prod, &b).expect("box fits");
            assert_eq!(ipoly_to_map(&q1), ipoly_to_map(&a));
            let q2 = prod.exact_div(&a);
            assert_eq!(ipoly_to_map(&q2), ipoly_to_map(&b));
        }
    }

    #[test]
    fn coefficients_promote_on_overflow() {
        let big = Coeff::Small(i128::MAX / 2);
        let prod = Coeff::mul(&big, &big);
        let expected = BigInt::from(i128::MAX / 2) * (i128::MAX / 2);
        assert_eq!(prod.to_bigint(), expected);
        let mut sum = Coeff::Small(i128::MAX);
        sum.add_assign(&Coeff::Small(i128::MAX));
        assert_eq!(sum.to_bigint(), BigInt::from(i128::MAX) * 2);
        let mut diff = Coeff::Small(i128::MIN);
        diff.sub_assign(&Coeff::Small(i128::MAX));
        assert_eq!(
            diff.to_bigint(),
            BigInt::from(i128::MIN) - i128::MAX
        );
        let (q, r) = Coeff::Small(i128::MIN).div_rem(&Coeff::Small(-1));
        assert_eq!(q.to_bigint(), -BigInt::from(i128::MIN));
        assert!(r.is_zero());
    }

    #[test]
    fn packed_exponents_round_trip_and_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for _ in 0..200 {
            let v: Vec<i64> = (0..MAX_VARS).map(|_| rng.gen_range(-2048..=2048)).collect();
            let w: Vec<i64> = (0..MAX_VARS).map(|_| rng.gen_range(-1000..=1000)).collect();
            let (pv, pw) = (exp_pack(&v), exp_pack(&w));
            assert_eq!(exp_unpack(&pv).to_vec(), v);
            // packed comparison is lexicographic on the vectors
            assert_eq!(pv.cmp(&pw), v.cmp(&w));
            // packed addition is componentwise addition
            let sum: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
            assert_eq!(exp_unpack(&exp_add(&pv, &pw)).to_vec(), sum);
            let diff: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
            assert_eq!(exp_unpack(&exp_sub(&pv, &pw)).to_vec(), diff);
        }
    }
}
