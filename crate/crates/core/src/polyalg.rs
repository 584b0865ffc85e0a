//! Exact sparse multivariate polynomials over the rationals.
//!
//! Variables are `x1, x2, ...` (1-based). Monomials are ordered
//! lexicographically with `x1 > x2 > ... > xn`, so the leading monomial of a
//! polynomial is the last key of its term map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The coefficient field: arbitrary-precision rationals in lowest terms.
pub type ExactScalar = BigRational;

/// Anything with exact (or floating) ring operations. Continuants and
/// transfer matrices are written once against this trait and instantiated
/// with rationals, floats and polynomials.
pub trait Ring:
    Clone
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Add<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Add<Output = Self>
        + Mul<Output = Self>
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("point has {got} coordinates but the polynomial lives in {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("variable index {0} is out of range")]
    VarOutOfRange(usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// `p/q` shorthand used all over the test suites.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Parses `"3"`, `"-2/7"` or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<ExactScalar, PolyError> {
    let t = text.trim();
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(PolyError::Parse(text.to_string()));
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits
            .parse()
            .map_err(|_| PolyError::Parse(text.to_string()))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    BigRational::from_str(t).map_err(|_| PolyError::Parse(text.to_string()))
}

/// A power product `x_i1^e1 * x_i2^e2 * ...`; zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        assert!(i >= 1, "variables are 1-based");
        Monomial(vec![(i, 1)])
    }

    pub fn from_exponents<I: IntoIterator<Item = (usize, u32)>>(exps: I) -> Self {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in exps {
            assert!(v >= 1, "variables are 1-based");
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(v, _)| v == var)
            .map_or(0, |&(_, e)| e)
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn max_var(&self) -> usize {
        self.0.last().map_or(0, |&(v, _)| v)
    }

    /// True when the two monomials share no variable.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .all(|&(v, _)| other.0.iter().all(|&(w, _)| w != v))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&t), None) => {
                    out.push(t);
                    a.next();
                }
                (None, Some(&&t)) => {
                    out.push(t);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Lex order with `x1 > x2 > ...`: compare exponents of x1, then x2, ...
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0.iter(), other.0.iter());
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // the one carrying the smaller-indexed variable is larger
                        return vb.cmp(&va);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in canonical form: no zero coefficients are stored.
#[derive(Clone, Debug, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, ExactScalar>,
    nvars: usize,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl SparsePoly {
    pub fn zero_in(nvars: usize) -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    /// The variable `x_i` as a degree-one polynomial.
    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), ExactScalar::one())
    }

    pub fn term(m: Monomial, c: ExactScalar) -> Self {
        let nvars = m.max_var();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms, nvars }
    }

    /// Sum of the listed variables.
    pub fn linear_sum<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        vars.into_iter()
            .fold(SparsePoly::zero(), |acc, v| acc + SparsePoly::var(v))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ExactScalar)>>(terms: I) -> Self {
        let mut p = SparsePoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Declares a larger ambient variable count. Never shrinks below the
    /// largest variable actually present.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        let used = self.terms.keys().map(Monomial::max_var).max().unwrap_or(0);
        self.nvars = nvars.max(used);
        self
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coefficient(&Monomial::one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when no term involves `x_var`.
    pub fn is_free_of(&self, var: usize) -> bool {
        self.terms.keys().all(|m| m.exponent(var) == 0)
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        self.nvars = self.nvars.max(m.max_var());
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

    pub fn scale(&self, c: &ExactScalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero_in(self.nvars);
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one().with_nvars(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `point`; `point[i-1]` is substituted for `x_i`.
    pub fn eval(&self, point: &[ExactScalar]) -> Result<ExactScalar, PolyError> {
        if point.len() < self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(var, e) in m.exponents() {
                v *= num_traits::pow(point[var - 1].clone(), e as usize);
            }
            total += v;
        }
        Ok(total)
    }

    /// Evaluation into any ring, e.g. floats or other polynomials.
    pub fn eval_in<T: Ring>(
        &self,
        point: &[T],
        embed: impl Fn(&ExactScalar) -> T,
    ) -> Result<T, PolyError> {
        if point.len() < self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut v = embed(c);
            for &(var, e) in m.exponents() {
                for _ in 0..e {
                    v = v * point[var - 1].clone();
                }
            }
            total = total + v;
        }
        Ok(total)
    }

    /// Lex-greatest monomial under `x1 > x2 > ... > xn`.
    pub fn leading_monomial_lex(&self) -> Result<&Monomial, PolyError> {
        self.terms
            .keys()
            .next_back()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_coefficient_lex(&self) -> Result<&ExactScalar, PolyError> {
        self.terms
            .values()
            .next_back()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Simultaneous substitution `x_i -> assignments[i]`; unassigned variables
    /// are kept.
    pub fn substitute(&self, assignments: &BTreeMap<usize, SparsePoly>) -> SparsePoly {
        let mut powers: HashMap<(usize, u32), SparsePoly> = HashMap::new();
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            let mut keep = Vec::new();
            let mut factor = SparsePoly::one();
            for &(var, e) in m.exponents() {
                match assignments.get(&var) {
                    Some(q) => {
                        let pw = powers.entry((var, e)).or_insert_with(|| q.pow(e));
                        factor = &factor * &*pw;
                    }
                    None => keep.push((var, e)),
                }
            }
            let kept = SparsePoly::term(Monomial::from_exponents(keep), c.clone());
            out = out + &kept * &factor;
        }
        let ambient = assignments
            .values()
            .map(SparsePoly::nvars)
            .chain(std::iter::once(self.nvars))
            .max()
            .unwrap_or(0);
        out.with_nvars(ambient)
    }

    /// Formal partial derivative with respect to `x_k`.
    pub fn partial_derivative(&self, k: usize) -> SparsePoly {
        let mut out = SparsePoly::zero_in(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(k);
            if e == 0 {
                continue;
            }
            let lowered = Monomial::from_exponents(m.exponents().iter().map(|&(v, x)| {
                if v == k {
                    (v, x - 1)
                } else {
                    (v, x)
                }
            }));
            out.add_term(lowered, c * ExactScalar::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("polynomial json is infallible")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SparsePoly, PolyError> {
        let raw: PolyJson =
            serde_json::from_value(v.clone()).map_err(|e| PolyError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: BTreeMap<String, u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl From<&SparsePoly> for PolyJson {
    fn from(p: &SparsePoly) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    exps: m
                        .exponents()
                        .iter()
                        .map(|&(v, e)| (v.to_string(), e))
                        .collect(),
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for SparsePoly {
    type Error = PolyError;

    fn try_from(raw: PolyJson) -> Result<Self, PolyError> {
        let mut p = SparsePoly::zero_in(raw.nvars);
        for t in raw.terms {
            let mut exps = Vec::new();
            for (k, e) in t.exps {
                let v: usize = k.parse().map_err(|_| PolyError::Parse(k.clone()))?;
                if v == 0 {
                    return Err(PolyError::VarOutOfRange(0));
                }
                exps.push((v, e));
            }
            p.add_term(Monomial::from_exponents(exps), parse_rational(&t.coef)?);
        }
        if p.terms.keys().any(|m| m.max_var() > raw.nvars) {
            return Err(PolyError::VarOutOfRange(
                p.terms.keys().map(Monomial::max_var).max().unwrap_or(0),
            ));
        }
        Ok(p)
    }
}

impl Zero for SparsePoly {
    fn zero() -> Self {
        SparsePoly::zero_in(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SparsePoly {
    fn one() -> Self {
        SparsePoly::constant(ExactScalar::one())
    }
}

impl Add<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&SparsePoly> for SparsePoly {
    fn add_assign(&mut self, rhs: &SparsePoly) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for SparsePoly {
    type Output = SparsePoly;

    fn add(mut self, rhs: SparsePoly) -> SparsePoly {
        self += &rhs;
        self
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            nvars: self.nvars,
        }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl Sub<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.nvars = out.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: SparsePoly) -> SparsePoly {
        &self - &rhs
    }
}

impl Mul<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero_in(self.nvars.max(rhs.nvars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: SparsePoly) -> SparsePoly {
        &self * &rhs
    }
}

impl fmt::Display for SparsePoly {
    /// Terms from the lex-greatest down, e.g. `x1*x2*x3 - x1 - x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SparsePoly {
    type Err = PolyError;

    /// Accepts the rendering produced by `Display`, e.g. `"2*x1^2*x3 - 1/3*x2 + 5"`.
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let err = || PolyError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(current.is_empty() && i == 0) {
                if current.is_empty() {
                    return Err(err());
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err());
        }
        terms.push((negative, current));

        let mut p = SparsePoly::zero();
        for (neg, body) in terms {
            let mut coef = ExactScalar::one();
            let mut exps = Vec::new();
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, e) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.parse::<u32>().map_err(|_| err())?),
                        None => (rest, 1),
                    };
                    let var: usize = var.parse().map_err(|_| err())?;
                    if var == 0 {
                        return Err(PolyError::VarOutOfRange(0));
                    }
                    exps.push((var, e));
                } else {
                    coef *= parse_rational(factor).map_err(|_| err())?;
                }
            }
            if neg {
                coef = -coef;
            }
            p.add_term(Monomial::from_exponents(exps), coef);
        }
        Ok(p)
    }
}

/// Rank over the rationals by Gaussian elimination.
pub fn matrix_rank(rows: &[Vec<ExactScalar>]) -> usize {
    let mut m: Vec<Vec<ExactScalar>> = rows.to_vec();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| col < m[r].len() && !m[r][col].is_zero())
        else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || col >= row.len() || row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            let end = pivot_row.len().min(row.len());
            for (v, p) in row[col..end].iter_mut().zip(&pivot_row[col..end]) {
                *v -= &factor * p;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
