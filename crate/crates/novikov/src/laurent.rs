//! Multivariate Laurent polynomials with exact rational coefficients, and the
//! specialization points at which they are evaluated.
//!
//! A polynomial lives in ℚ[z₁^{±1}, …, z_r^{±1}] for a fixed rank `r` that is
//! carried on every value and checked at every operation. Terms are stored in
//! a canonical map keyed by exponent vector; no zero coefficient is ever
//! stored, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::modular;

/// A point of the exponent lattice ℤʳ.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on entries. The order is translation-invariant, which is
/// what leading-term extraction during exact division relies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVec(Vec<i64>);

impl ExponentVec {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVec(entries)
    }

    pub fn zero(rank: usize) -> Self {
        ExponentVec(vec![0; rank])
    }

    /// The standard basis vector e_var (the exponent of the variable z_var).
    pub fn unit(rank: usize, var: usize) -> Self {
        let mut entries = vec![0; rank];
        entries[var] = 1;
        ExponentVec(entries)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        ExponentVec(self.0.iter().map(|a| -a).collect())
    }
}

impl Ord for ExponentVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A Laurent polynomial in `rank` variables over ℚ, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<ExponentVec, BigRational>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigRational::one())
    }

    pub fn constant(rank: usize, value: BigRational) -> Self {
        let mut p = Self::zero(rank);
        if !value.is_zero() {
            p.terms.insert(ExponentVec::zero(rank), value);
        }
        p
    }

    pub fn int_constant(rank: usize, value: i64) -> Self {
        Self::constant(rank, BigRational::from_integer(BigInt::from(value)))
    }

    /// The monomial z^exps with coefficient 1.
    pub fn monomial(exps: ExponentVec) -> Self {
        Self::term(BigRational::one(), exps)
    }

    /// The single-term polynomial coeff·z^exps.
    pub fn term(coeff: BigRational, exps: ExponentVec) -> Self {
        let rank = exps.rank();
        let mut p = Self::zero(rank);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// The variable z_var.
    pub fn var(rank: usize, var: usize) -> Self {
        Self::monomial(ExponentVec::unit(rank, var))
    }

    /// Builds a polynomial from arbitrary (exponents, coefficient) pairs,
    /// merging duplicates and dropping zero coefficients.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVec, BigRational)>,
    {
        let mut p = Self::zero(rank);
        for (e, c) in terms {
            if e.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: e.rank(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: ExponentVec, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the polynomial is a single term, i.e. a unit of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &ExponentVec) -> Option<&BigRational> {
        self.terms.get(exps)
    }

    /// The graded-lex-largest term, if any.
    pub fn leading(&self) -> Option<(&ExponentVec, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// If the polynomial is constant (including zero), its value.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        LaurentPoly {
            rank: self.rank,
            terms,
        }
    }

    pub fn scale(&self, by: &BigRational) -> Self {
        if by.is_zero() {
            return Self::zero(self.rank);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * by))
            .collect();
        LaurentPoly {
            rank: self.rank,
            terms,
        }
    }

    /// Multiplies by the unit coeff·z^exps (single term).
    pub fn mul_term(&self, coeff: &BigRational, exps: &ExponentVec) -> Self {
        debug_assert_eq!(exps.rank(), self.rank);
        if coeff.is_zero() {
            return Self::zero(self.rank);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.add(exps), c * coeff))
            .collect();
        LaurentPoly {
            rank: self.rank,
            terms,
        }
    }

    /// Per-variable minimum exponent over all terms (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut mins = vec![0i64; self.rank];
        for (i, m) in mins.iter_mut().enumerate() {
            *m = self
                .terms
                .keys()
                .map(|e| e.entries()[i])
                .min()
                .unwrap_or(0);
        }
        mins
    }

    /// Sum over variables of (max exponent − min exponent): the degree budget
    /// that enters the Schwartz–Zippel vanishing bound after monomial
    /// normalization.
    pub fn degree_spread(&self) -> i64 {
        if self.terms.len() <= 1 {
            return 0;
        }
        (0..self.rank)
            .map(|i| {
                let es = self.terms.keys().map(|e| e.entries()[i]);
                let max = es.clone().max().unwrap();
                let min = es.min().unwrap();
                max - min
            })
            .sum()
    }

    /// Exact quotient self / divisor, by repeated cancellation of graded-lex
    /// leading terms.
    ///
    /// Callers must guarantee divisibility (the Bareiss recurrence does);
    /// a non-multiple input is an internal invariant violation and panics.
    /// Evaluates at finite-field unit coordinates (all nonzero mod p).
    pub fn eval_mod(&self, coords: &[u64], p: u64) -> Result<u64> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: coords.len(),
            });
        }
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = rational_mod(c, p)?;
            for (x, &k) in coords.iter().zip(e.entries()) {
                let base = if k >= 0 {
                    *x % p
                } else {
                    modular::inv_mod(*x % p, p)
                };
                t = modular::mul_mod(t, modular::pow_mod(base, k.unsigned_abs(), p), p);
            }
            acc = modular::add_mod(acc, t, p);
        }
        Ok(acc)
    }

    /// Evaluates at exact nonzero rational coordinates.
    pub fn eval_rational(&self, coords: &[BigRational]) -> Result<BigRational> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: coords.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in coords.iter().zip(e.entries()) {
                t *= rat_pow(x, k);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates at complex coordinates in double precision.
    pub fn eval_complex(&self, coords: &[Complex64]) -> Result<Complex64> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: coords.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (x, &k) in coords.iter().zip(e.entries()) {
                t *= x.powi(k as i32);
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical text form, leading term first: `(-1) [1,0] + (3/2) [0,-2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {e}")?;
        }
        Ok(())
    }
}

/// Reduces an exact rational modulo p (denominator inverted mod p).
fn rational_mod(q: &BigRational, p: u64) -> Result<u64> {
    let big_p = BigInt::from(p);
    let numer = ((q.numer() % &big_p) + &big_p) % &big_p;
    let denom = ((q.denom() % &big_p) + &big_p) % &big_p;
    let n = numer.to_u64().expect("reduced residue fits u64");
    let d = denom.to_u64().expect("reduced residue fits u64");
    if d == 0 {
        return Err(Error::UnluckyPrime { prime: p });
    }
    Ok(modular::mul_mod(n, modular::inv_mod(d, p), p))
}

/// x^k for signed k on exact rationals (x nonzero when k < 0).
pub(crate) fn rat_pow(x: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let base = if k < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    let mut sq = base;
    let mut n = k.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &sq;
        }
        let next = &sq * &sq;
        sq = next;
        n >>= 1;
    }
    acc
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("rational representable in f64")
}

/// Parses the canonical polynomial grammar.
///
/// poly  := "0" | term (" + " term)*
/// term  := "(" rational ")" "[" int ("," int)* "]"
///
/// `line` is used only for error positions.
pub fn parse_poly(s: &str, rank: usize, line: usize) -> Result<LaurentPoly> {
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos] == b' ' || bytes[*pos] == b'\t') {
            *pos += 1;
        }
    };
    let col = |pos: usize| pos + 1;

    skip_ws(&mut pos);
    if bytes.get(pos) == Some(&b'0') {
        let mut end = pos + 1;
        skip_ws(&mut end);
        if end == bytes.len() {
            return Ok(LaurentPoly::zero(rank));
        }
    }

    let mut poly = LaurentPoly::zero(rank);
    loop {
        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'(') {
            return Err(Error::parse(
                line,
                col(pos),
                "expected '(' opening a coefficient",
            ));
        }
        pos += 1;
        let close = s[pos..].find(')').ok_or_else(|| {
            Error::parse(line, col(pos), "unterminated coefficient: missing ')'")
        })?;
        let coeff_str = s[pos..pos + close].trim();
        let coeff: BigRational = coeff_str.parse().map_err(|_| {
            Error::parse(
                line,
                col(pos),
                format!("invalid rational coefficient `{coeff_str}`"),
            )
        })?;
        pos += close + 1;

        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'[') {
            return Err(Error::parse(
                line,
                col(pos),
                "expected '[' opening an exponent tuple",
            ));
        }
        let bracket_col = col(pos);
        pos += 1;
        let close = s[pos..]
            .find(']')
            .ok_or_else(|| Error::parse(line, col(pos), "unterminated exponent tuple"))?;
        let inner = &s[pos..pos + close];
        let mut exps = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                let part = part.trim();
                let e: i64 = part.parse().map_err(|_| {
                    Error::parse(line, bracket_col, format!("invalid exponent `{part}`"))
                })?;
                exps.push(e);
            }
        }
        if exps.len() != rank {
            return Err(Error::parse(
                line,
                bracket_col,
                format!("exponent tuple has {} entries, expected {rank}", exps.len()),
            ));
        }
        pos += close + 1;
        poly.add_term(ExponentVec::new(exps), coeff);

        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Ok(poly);
        }
        if bytes.get(pos) == Some(&b'+') {
            pos += 1;
            continue;
        }
        return Err(Error::parse(
            line,
            col(pos),
            "expected '+' between terms or end of polynomial",
        ));
    }
}

/// A specialization point: a flat-line-bundle monodromy, given in one of the
/// three coordinate rings the engines understand.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecPoint {
    /// Unit coordinates in the prime field F_p.
    FiniteField { prime: u64, coords: Vec<u64> },
    /// Points of the unit torus (S¹)ʳ, stored as rational turns: the
    /// coordinate is e^{2πi·turn}.
    UnitComplex { turns: Vec<BigRational> },
    /// Exact nonzero rational coordinates in (ℚ*)ʳ.
    Rational { coords: Vec<BigRational> },
}

impl SpecPoint {
    pub fn rank(&self) -> usize {
        match self {
            SpecPoint::FiniteField { coords, .. } => coords.len(),
            SpecPoint::UnitComplex { turns } => turns.len(),
            SpecPoint::Rational { coords } => coords.len(),
        }
    }

    /// The trivial monodromy point z = (1,…,1) on the unit torus.
    pub fn trivial(rank: usize) -> Self {
        SpecPoint::UnitComplex {
            turns: vec![BigRational::zero(); rank],
        }
    }

    /// Checks that every coordinate is a unit of its ring.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpecPoint::FiniteField { prime, coords } => {
                if !modular::is_prime(*prime) {
                    return Err(Error::NotAUnit {
                        reason: format!("{prime} is not prime"),
                    });
                }
                for &c in coords {
                    if c % prime == 0 {
                        return Err(Error::NotAUnit {
                            reason: format!("coordinate {c} is zero mod {prime}"),
                        });
                    }
                }
                Ok(())
            }
            SpecPoint::UnitComplex { .. } => Ok(()),
            SpecPoint::Rational { coords } => {
                if coords.iter().any(|c| c.is_zero()) {
                    return Err(Error::NotAUnit {
                        reason: "rational coordinate is zero".into(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Complex coordinates of a unit-torus point.
    pub fn unit_coords(&self) -> Option<Vec<Complex64>> {
        match self {
            SpecPoint::UnitComplex { turns } => Some(
                turns
                    .iter()
                    .map(|t| {
                        let angle = std::f64::consts::TAU * rat_to_f64(t);
                        Complex64::from_polar(1.0, angle)
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Exact rational coordinates, when the point admits them. A unit-torus
    /// point qualifies exactly when every turn is a half-integer (coordinate
    /// ±1); this is what lets the trivial point be probed without floats.
    pub fn exact_coords(&self) -> Option<Vec<BigRational>> {
        match self {
            SpecPoint::Rational { coords } => Some(coords.clone()),
            SpecPoint::UnitComplex { turns } => {
                let two = BigInt::from(2);
                turns
                    .iter()
                    .map(|t| {
                        if t.denom().is_one() {
                            Some(BigRational::one())
                        } else if *t.denom() == two {
                            Some(-BigRational::one())
                        } else {
                            None
                        }
                    })
                    .collect()
            }
            SpecPoint::FiniteField { .. } => None,
        }
    }

    /// A uniform random unit point of F_p^r for a fresh random prime
    /// p ∈ [2³⁰, 2³¹).
    pub fn random_finite_field(rng: &mut impl Rng, rank: usize) -> Self {
        let prime = modular::sample_prime(rng, 1 << 30, 1 << 31);
        let coords = (0..rank).map(|_| rng.gen_range(1..prime)).collect();
        SpecPoint::FiniteField { prime, coords }
    }

    /// A uniform random point of the unit torus: independent uniform turns
    /// with 53-bit resolution.
    pub fn random_unit(rng: &mut impl Rng, rank: usize) -> Self {
        const DEN: i64 = 1 << 53;
        let turns = (0..rank)
            .map(|_| {
                BigRational::new(BigInt::from(rng.gen_range(0..DEN)), BigInt::from(DEN))
            })
            .collect();
        SpecPoint::UnitComplex { turns }
    }

    /// Short human-readable provenance for reports.
    pub fn describe(&self) -> String {
        match self {
            SpecPoint::FiniteField { prime, coords } => {
                format!("F_{prime} point {coords:?}")
            }
            SpecPoint::UnitComplex { turns } => {
                let ts: Vec<String> = turns.iter().map(|t| t.to_string()).collect();
                format!("torus point with turns ({})", ts.join(", "))
            }
            SpecPoint::Rational { coords } => {
                let cs: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                format!("rational point ({})", cs.join(", "))
            }
        }
    }
}

/// Parses one torus point given as comma-separated rational turns,
/// e.g. `0,1/4` for (1, i) at rank 2.
pub fn parse_turn_point(s: &str, rank: usize, line: usize) -> Result<SpecPoint> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != rank {
        return Err(Error::parse(
            line,
            1,
            format!("point has {} coordinates, expected {rank}", parts.len()),
        ));
    }
    let mut turns = Vec::with_capacity(rank);
    for part in parts {
        let t: BigRational = part
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("invalid rational turn `{part}`")))?;
        turns.push(t);
    }
    Ok(SpecPoint::UnitComplex { turns })
}
