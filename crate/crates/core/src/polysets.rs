//! Constraint sets attached to bracket strings: one linear form per round
//! bracket (the sum of its content) plus the special forms coming from the
//! angle pair and its bars.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::brackets::{BracketString, Kind};
use crate::continuant::collapse_map;
use crate::polyalg::{int, matrix_rank, ExactScalar, SparsePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolySetError {
    #[error("WRONG_KIND: style {style} needs a {expected} string, got {got}")]
    WrongKind {
        style: Style,
        expected: Kind,
        got: Kind,
    },
}

/// `Σ_{k ∈ indices} x_k − constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub indices: BTreeSet<usize>,
    pub constant: ExactScalar,
}

/// `(Σ_{left} x_k)(Σ_{right} x_k) − constant`, with `left` holding the
/// smallest index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub constant: ExactScalar,
}

impl LinearForm {
    pub fn new(indices: BTreeSet<usize>, constant: ExactScalar) -> Self {
        assert!(
            !indices.is_empty(),
            "linear form needs at least one variable"
        );
        LinearForm { indices, constant }
    }

    pub fn homogeneous(indices: BTreeSet<usize>) -> Self {
        Self::new(indices, ExactScalar::zero())
    }

    pub fn to_poly(&self, nvars: usize) -> SparsePoly {
        (SparsePoly::linear_sum(self.indices.iter().copied())
            - SparsePoly::constant(self.constant.clone()))
        .with_nvars(nvars)
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        sum_at(&self.indices, point) - &self.constant
    }
}

impl QuadForm {
    pub fn new(a: BTreeSet<usize>, b: BTreeSet<usize>, constant: ExactScalar) -> Self {
        assert!(
            !a.is_empty() && !b.is_empty(),
            "quadratic form needs two nonempty factors"
        );
        assert!(
            a.is_disjoint(&b),
            "quadratic form factors must have disjoint supports"
        );
        let (left, right) = if a.first() < b.first() {
            (a, b)
        } else {
            (b, a)
        };
        QuadForm {
            left,
            right,
            constant,
        }
    }

    pub fn to_poly(&self, nvars: usize) -> SparsePoly {
        let l = SparsePoly::linear_sum(self.left.iter().copied());
        let r = SparsePoly::linear_sum(self.right.iter().copied());
        (&l * &r - SparsePoly::constant(self.constant.clone())).with_nvars(nvars)
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        sum_at(&self.left, point) * sum_at(&self.right, point) - &self.constant
    }
}

fn sum_at(indices: &BTreeSet<usize>, point: &[ExactScalar]) -> ExactScalar {
    indices
        .iter()
        .fold(ExactScalar::zero(), |acc, &k| acc + &point[k - 1])
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    Linear(LinearForm),
    Quad(QuadForm),
}

impl Form {
    pub fn support(&self) -> BTreeSet<usize> {
        match self {
            Form::Linear(l) => l.indices.clone(),
            Form::Quad(q) => q.left.union(&q.right).copied().collect(),
        }
    }

    pub fn constant(&self) -> &ExactScalar {
        match self {
            Form::Linear(l) => &l.constant,
            Form::Quad(q) => &q.constant,
        }
    }

    pub fn to_poly(&self, nvars: usize) -> SparsePoly {
        match self {
            Form::Linear(l) => l.to_poly(nvars),
            Form::Quad(q) => q.to_poly(nvars),
        }
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        match self {
            Form::Linear(l) => l.eval(point),
            Form::Quad(q) => q.eval(point),
        }
    }

    fn map_indices(&self, f: impl Fn(usize) -> usize) -> Form {
        let m = |s: &BTreeSet<usize>| s.iter().map(|&k| f(k)).collect::<BTreeSet<_>>();
        match self {
            Form::Linear(l) => Form::Linear(LinearForm::new(m(&l.indices), l.constant.clone())),
            Form::Quad(q) => Form::Quad(QuadForm::new(m(&q.left), m(&q.right), q.constant.clone())),
        }
    }

    /// Recognises a polynomial of either shape; `None` for anything else.
    pub fn from_poly(p: &SparsePoly) -> Option<Form> {
        let constant = -p.constant_term();
        let mut linear = BTreeSet::new();
        let mut pairs = Vec::new();
        for (mono, coef) in p.terms() {
            if mono.is_one() {
                continue;
            }
            if !coef.is_one() {
                return None;
            }
            let exps = mono.exponents();
            match (mono.degree(), exps) {
                (1, [(k, 1)]) => {
                    linear.insert(*k);
                }
                (2, [(a, 1), (b, 1)]) => pairs.push((*a, *b)),
                _ => return None,
            }
        }
        match (linear.is_empty(), pairs.is_empty()) {
            (false, true) => Some(Form::Linear(LinearForm::new(linear, constant))),
            (true, false) => {
                let a = pairs.iter().map(|&(a, _)| a).min()?;
                let right: BTreeSet<usize> = pairs
                    .iter()
                    .filter(|&&(x, _)| x == a)
                    .map(|&(_, y)| y)
                    .collect();
                let r0 = *right.first()?;
                let left: BTreeSet<usize> = pairs
                    .iter()
                    .filter_map(|&(x, y)| {
                        if y == r0 {
                            Some(x)
                        } else if x == r0 {
                            Some(y)
                        } else {
                            None
                        }
                    })
                    .collect();
                if left.len() * right.len() != pairs.len() || !left.is_disjoint(&right) {
                    return None;
                }
                let q = QuadForm::new(left, right, constant);
                (q.to_poly(p.nvars()) == *p).then_some(Form::Quad(q))
            }
            _ => None,
        }
    }
}

fn fmt_sum(set: &BTreeSet<usize>) -> String {
    set.iter()
        .map(|k| format!("x{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fmt_constant(c: &ExactScalar) -> String {
    if c.is_zero() {
        String::new()
    } else if *c < ExactScalar::zero() {
        format!(" + {}", -c)
    } else {
        format!(" - {c}")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Linear(l) => write!(f, "{}{}", fmt_sum(&l.indices), fmt_constant(&l.constant)),
            Form::Quad(q) => write!(
                f,
                "({})*({}){}",
                fmt_sum(&q.left),
                fmt_sum(&q.right),
                fmt_constant(&q.constant)
            ),
        }
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Form::Linear(l) => {
                let mut s = serializer.serialize_struct("LinearForm", 4)?;
                s.serialize_field("type", "linear")?;
                s.serialize_field("indices", &l.indices)?;
                s.serialize_field("constant", &l.constant.to_string())?;
                s.serialize_field("text", &self.to_string())?;
                s.end()
            }
            Form::Quad(q) => {
                let mut s = serializer.serialize_struct("QuadForm", 5)?;
                s.serialize_field("type", "quad")?;
                s.serialize_field("left", &q.left)?;
                s.serialize_field("right", &q.right)?;
                s.serialize_field("constant", &q.constant.to_string())?;
                s.serialize_field("text", &self.to_string())?;
                s.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolySet {
    pub ambient: usize,
    pub forms: Vec<Form>,
}

impl PolySet {
    pub fn new(ambient: usize, forms: Vec<Form>) -> Self {
        PolySet { ambient, forms }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn to_polys(&self) -> Vec<SparsePoly> {
        self.forms.iter().map(|f| f.to_poly(self.ambient)).collect()
    }

    pub fn from_polys(ambient: usize, polys: &[SparsePoly]) -> Option<PolySet> {
        let forms = polys
            .iter()
            .map(Form::from_poly)
            .collect::<Option<Vec<_>>>()?;
        Some(PolySet { ambient, forms })
    }

    /// The forms as a set, ignoring order and repeats.
    pub fn form_set(&self) -> BTreeSet<Form> {
        self.forms.iter().cloned().collect()
    }

    /// Every index incremented by one; the ambient space grows by one.
    pub fn shift_plus_one(&self) -> PolySet {
        PolySet {
            ambient: self.ambient + 1,
            forms: self
                .forms
                .iter()
                .map(|f| f.map_indices(|k| k + 1))
                .collect(),
        }
    }

    /// Union without repeats, keeping first occurrences in order.
    pub fn union(&self, other: &PolySet) -> PolySet {
        let mut seen = BTreeSet::new();
        let forms = self
            .forms
            .iter()
            .chain(&other.forms)
            .filter(|f| seen.insert((*f).clone()))
            .cloned()
            .collect();
        PolySet {
            ambient: self.ambient.max(other.ambient),
            forms,
        }
    }

    /// Forms whose support lies in `lo..=hi`.
    pub fn within(&self, lo: usize, hi: usize) -> BTreeSet<Form> {
        self.forms
            .iter()
            .filter(|f| f.support().iter().all(|&k| lo <= k && k <= hi))
            .cloned()
            .collect()
    }

    /// Forms touching some index outside `lo..=hi`.
    pub fn outside(&self, lo: usize, hi: usize) -> BTreeSet<Form> {
        let inside = self.within(lo, hi);
        self.form_set().difference(&inside).cloned().collect()
    }

    pub fn linear_forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.forms.iter().filter_map(|f| match f {
            Form::Linear(l) => Some(l),
            Form::Quad(_) => None,
        })
    }

    /// Rank of the homogeneous parts of the linear forms.
    pub fn linear_rank(&self) -> usize {
        let rows: Vec<Vec<ExactScalar>> = self
            .linear_forms()
            .map(|l| {
                (1..=self.ambient)
                    .map(|k| {
                        if l.indices.contains(&k) {
                            int(1)
                        } else {
                            int(0)
                        }
                    })
                    .collect()
            })
            .collect();
        matrix_rank(&rows)
    }

    pub fn satisfied_by(&self, point: &[ExactScalar]) -> bool {
        self.forms.iter().all(|f| f.eval(point).is_zero())
    }

    /// Pulls each form back along the map that merges `x_{k-1}` and `x_{k+1}`
    /// (inverse of collapsing the pair at `k, k+1`).
    pub fn pullback_collapse(&self, k: usize) -> Vec<SparsePoly> {
        let map = collapse_map(k, self.ambient);
        self.to_polys()
            .iter()
            .map(|p| p.substitute(&map).with_nvars(self.ambient + 2))
            .collect()
    }
}

impl fmt::Display for PolySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|form| form.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Style {
    Par,
    Ang,
    Bra,
    TbraEps,
    TbraTwo,
    QbraTwo,
}

impl Style {
    pub const ALL: [Style; 6] = [
        Style::Par,
        Style::Ang,
        Style::Bra,
        Style::TbraEps,
        Style::TbraTwo,
        Style::QbraTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Style::Par => "par",
            Style::Ang => "ang",
            Style::Bra => "bra",
            Style::TbraEps => "tbra-eps",
            Style::TbraTwo => "tbra-two",
            Style::QbraTwo => "qbra-two",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            Style::Par => Kind::Par,
            Style::Ang => Kind::Ang,
            Style::Bra => Kind::Bra,
            Style::TbraEps | Style::TbraTwo => Kind::Tbra,
            Style::QbraTwo => Kind::Qbra,
        }
    }

    /// Whether the style reads a constant.
    pub fn takes_constant(self) -> bool {
        matches!(self, Style::Ang | Style::Bra | Style::TbraEps)
    }

    /// Builds the set; `c` is ignored by the styles that fix their constant.
    pub fn build(self, b: &BracketString, c: &ExactScalar) -> Result<PolySet, PolySetError> {
        match self {
            Style::Par => par_set(b),
            Style::Ang => ang_set(b, c),
            Style::Bra => bra_set(b, c),
            Style::TbraEps => tbra_eps_set(b, c),
            Style::TbraTwo => tbra_two_set(b),
            Style::QbraTwo => qbra_two_set(b),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Style::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                format!("unknown style '{s}' (expected par|ang|bra|tbra-eps|tbra-two|qbra-two)")
            })
    }
}

fn check(b: &BracketString, style: Style) -> Result<(), PolySetError> {
    if b.kind() != style.kind() {
        return Err(PolySetError::WrongKind {
            style,
            expected: style.kind(),
            got: b.kind(),
        });
    }
    Ok(())
}

/// Round-bracket forms keyed by position, then the special forms keyed by the
/// position of the bracket that opens them, so the set lists in string order.
fn assemble(b: &BracketString, special: Vec<(usize, Form)>) -> PolySet {
    let content = b.content();
    let mut keyed: BTreeMap<usize, Form> = content
        .rounds
        .into_iter()
        .map(|(i, set)| (i, Form::Linear(LinearForm::homogeneous(set))))
        .collect();
    keyed.extend(special);
    PolySet {
        ambient: b.ambient(),
        forms: keyed.into_values().collect(),
    }
}

fn segments(b: &BracketString) -> Vec<(usize, BTreeSet<usize>)> {
    let chain = b.matching().chain();
    chain.iter().copied().zip(b.content().special).collect()
}

/// `f_b`: the content sum of every left bracket.
pub fn par_set(b: &BracketString) -> Result<PolySet, PolySetError> {
    check(b, Style::Par)?;
    Ok(assemble(b, Vec::new()))
}

/// Round forms plus `Σ_{angle content} x − c`.
pub fn ang_set(b: &BracketString, c: &ExactScalar) -> Result<PolySet, PolySetError> {
    check(b, Style::Ang)?;
    let special = segments(b)
        .into_iter()
        .map(|(pos, set)| (pos, Form::Linear(LinearForm::new(set, c.clone()))))
        .collect();
    Ok(assemble(b, special))
}

/// Round forms plus `(Σ_{angle} x)(Σ_{bar} x) − c`, keyed at the bar.
pub fn bra_set(b: &BracketString, c: &ExactScalar) -> Result<PolySet, PolySetError> {
    check(b, Style::Bra)?;
    Ok(assemble(b, chain_products(b, c)))
}

/// Round forms plus one `Σ x − ε` per segment of the triple bra-ket.
pub fn tbra_eps_set(b: &BracketString, eps: &ExactScalar) -> Result<PolySet, PolySetError> {
    check(b, Style::TbraEps)?;
    let special = segments(b)
        .into_iter()
        .map(|(pos, set)| (pos, Form::Linear(LinearForm::new(set, eps.clone()))))
        .collect();
    Ok(assemble(b, special))
}

/// Round forms plus the products of consecutive segments, each minus 2.
pub fn tbra_two_set(b: &BracketString) -> Result<PolySet, PolySetError> {
    check(b, Style::TbraTwo)?;
    Ok(assemble(b, chain_products(b, &int(2))))
}

pub fn qbra_two_set(b: &BracketString) -> Result<PolySet, PolySetError> {
    check(b, Style::QbraTwo)?;
    Ok(assemble(b, chain_products(b, &int(2))))
}

fn chain_products(b: &BracketString, c: &ExactScalar) -> Vec<(usize, Form)> {
    let segs = segments(b);
    segs.windows(2)
        .map(|w| {
            (
                w[1].0,
                Form::Quad(QuadForm::new(w[0].1.clone(), w[1].1.clone(), c.clone())),
            )
        })
        .collect()
}

/// `x_k` as a homogeneous linear form.
pub fn single_var(k: usize) -> Form {
    Form::Linear(LinearForm::homogeneous([k].into()))
}
