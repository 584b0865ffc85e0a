//! Exact random points on the zero locus of a constraint set.
//!
//! Linear forms are solved by exact row reduction, pivoting on the highest
//! index so each form's last variable is the one determined. Product forms
//! must act on whole segments disjoint from everything else; the segment sums
//! are fixed by walking the graph whose edges are the products, and each
//! segment's last variable absorbs its sum.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::polyalg::{int, ExactScalar, SparsePoly};
use crate::polysets::{Form, PolySet};

pub const MAX_RETRIES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("UNSATISFIABLE_CHAIN: {0}")]
    UnsatisfiableChain(String),
    #[error("RETRY_EXHAUSTED: no consistent draw after {0} attempts")]
    RetryExhausted(usize),
    #[error("INCONSISTENT_LINEAR_SYSTEM: the linear forms have no common zero")]
    InconsistentLinear,
    #[error("UNSUPPORTED_STRUCTURE: {0}")]
    Unsupported(String),
    #[error("INVALID_CONFIG: {0}")]
    InvalidConfig(String),
}

impl SampleError {
    pub fn code(&self) -> &'static str {
        match self {
            SampleError::UnsatisfiableChain(_) => "UNSATISFIABLE_CHAIN",
            SampleError::RetryExhausted(_) => "RETRY_EXHAUSTED",
            SampleError::InconsistentLinear => "INCONSISTENT_LINEAR_SYSTEM",
            SampleError::Unsupported(_) => "UNSUPPORTED_STRUCTURE",
            SampleError::InvalidConfig(_) => "INVALID_CONFIG",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub count: usize,
    pub height: i64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(count: usize, height: i64, seed: u64) -> Result<Self, SampleError> {
        if count < 1 {
            return Err(SampleError::InvalidConfig(
                "count must be at least 1".into(),
            ));
        }
        if height < 2 {
            return Err(SampleError::InvalidConfig(
                "height must be at least 2".into(),
            ));
        }
        Ok(SampleConfig {
            count,
            height,
            seed,
        })
    }

    /// Independent generator for unit of work `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            count: 25,
            height: 12,
            seed: 0xC0FFEE,
        }
    }
}

/// `p/q` with `|p| <= height`, `1 <= q <= height`.
pub fn random_rational<R: Rng>(rng: &mut R, height: i64, nonzero: bool) -> ExactScalar {
    let den = rng.gen_range(1..=height);
    loop {
        let num = rng.gen_range(-height..=height);
        if !(nonzero && num == 0) {
            return ExactScalar::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

/// `x_pivot = constant − Σ coeff · x_free`.
#[derive(Clone, Debug)]
struct Pivot {
    var: usize,
    constant: ExactScalar,
    coeffs: Vec<(usize, ExactScalar)>,
}

#[derive(Clone, Debug)]
pub struct Sampler {
    ambient: usize,
    pivots: Vec<Pivot>,
    segments: Vec<BTreeSet<usize>>,
    /// `(a, b, c)`: sum(segment a) · sum(segment b) = c.
    edges: Vec<(usize, usize, ExactScalar)>,
    source: PolySet,
}

fn row_reduce(forms: &[(BTreeSet<usize>, ExactScalar)]) -> Result<Vec<Pivot>, SampleError> {
    // columns are the variables in decreasing index order
    let cols: Vec<usize> = forms
        .iter()
        .flat_map(|(s, _)| s.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(c, &v)| (v, c)).collect();
    let width = cols.len();
    let mut rows: Vec<Vec<ExactScalar>> = forms
        .iter()
        .map(|(s, c)| {
            let mut r = vec![ExactScalar::zero(); width + 1];
            for v in s {
                r[col_of[v]] = int(1);
            }
            r[width] = c.clone();
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = ExactScalar::one() / &rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row[col..=width].iter_mut().zip(&pivot_row[col..=width]) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[width].is_zero()) {
        return Err(SampleError::InconsistentLinear);
    }
    Ok(pivot_cols
        .iter()
        .enumerate()
        .map(|(r, &pc)| Pivot {
            var: cols[pc],
            constant: rows[r][width].clone(),
            coeffs: (0..width)
                .filter(|&c| c != pc && !rows[r][c].is_zero())
                .map(|c| (cols[c], rows[r][c].clone()))
                .collect(),
        })
        .collect())
}

impl Sampler {
    pub fn new(set: &PolySet) -> Result<Self, SampleError> {
        let mut linear = Vec::new();
        let mut segments: Vec<BTreeSet<usize>> = Vec::new();
        let mut edge_map: BTreeMap<(usize, usize), ExactScalar> = BTreeMap::new();
        let segment_id = |s: &BTreeSet<usize>,
                          segments: &mut Vec<BTreeSet<usize>>|
         -> Result<usize, SampleError> {
            if let Some(i) = segments.iter().position(|t| t == s) {
                return Ok(i);
            }
            if segments.iter().any(|t| !t.is_disjoint(s)) {
                return Err(SampleError::Unsupported(
                    "product factors overlap without coinciding".into(),
                ));
            }
            segments.push(s.clone());
            Ok(segments.len() - 1)
        };
        for form in &set.forms {
            match form {
                Form::Linear(l) => linear.push((l.indices.clone(), l.constant.clone())),
                Form::Quad(q) => {
                    let a = segment_id(&q.left, &mut segments)?;
                    let b = segment_id(&q.right, &mut segments)?;
                    let key = (a.min(b), a.max(b));
                    if let Some(prev) = edge_map.insert(key, q.constant.clone()) {
                        if prev != q.constant {
                            return Err(SampleError::UnsatisfiableChain(format!(
                                "the same pair of factors must multiply to both {prev} and {}",
                                q.constant
                            )));
                        }
                    }
                }
            }
        }
        let seg_vars: BTreeSet<usize> = segments.iter().flatten().copied().collect();
        if linear.iter().any(|(s, _)| !s.is_disjoint(&seg_vars)) {
            return Err(SampleError::Unsupported(
                "a linear form shares variables with a product factor".into(),
            ));
        }
        if let Some(k) = set
            .forms
            .iter()
            .flat_map(|f| f.support())
            .find(|&k| k == 0 || k > set.ambient)
        {
            return Err(SampleError::Unsupported(format!(
                "x{k} lies outside the {} ambient variables",
                set.ambient
            )));
        }
        let pivots = row_reduce(&linear)?;
        let edges = edge_map.into_iter().map(|((a, b), c)| (a, b, c)).collect();
        Ok(Sampler {
            ambient: set.ambient,
            pivots,
            segments,
            edges,
            source: set.clone(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_linear(&self) -> bool {
        self.segments.is_empty()
    }

    fn segment_sums<R: Rng>(
        &self,
        rng: &mut R,
        height: i64,
    ) -> Result<Vec<ExactScalar>, SampleError> {
        let k = self.segments.len();
        let mut adj: Vec<Vec<(usize, ExactScalar)>> = vec![Vec::new(); k];
        for (a, b, c) in &self.edges {
            adj[*a].push((*b, c.clone()));
            adj[*b].push((*a, c.clone()));
        }
        let must_be_nonzero: Vec<bool> = adj
            .iter()
            .map(|e| e.iter().any(|(_, c)| !c.is_zero()))
            .collect();
        let draw = |rng: &mut R, i: usize| {
            if !must_be_nonzero[i] && rng.gen_ratio(1, 3) {
                ExactScalar::zero()
            } else {
                random_rational(rng, height, true)
            }
        };
        'attempt: for _ in 0..MAX_RETRIES {
            let mut value: Vec<Option<ExactScalar>> = vec![None; k];
            for root in 0..k {
                if value[root].is_some() {
                    continue;
                }
                value[root] = Some(draw(rng, root));
                let mut queue = VecDeque::from([root]);
                while let Some(a) = queue.pop_front() {
                    let sa = value[a].clone().unwrap();
                    for (b, c) in &adj[a] {
                        let wanted = if !sa.is_zero() {
                            Some(c / &sa)
                        } else if c.is_zero() {
                            None
                        } else {
                            continue 'attempt;
                        };
                        match (&value[*b], wanted) {
                            (Some(sb), Some(w)) if *sb != w => continue 'attempt,
                            (Some(_), _) => {}
                            (None, w) => {
                                value[*b] = Some(w.unwrap_or_else(|| draw(rng, *b)));
                                queue.push_back(*b);
                            }
                        }
                    }
                }
            }
            return Ok(value.into_iter().map(Option::unwrap).collect());
        }
        Err(SampleError::RetryExhausted(MAX_RETRIES))
    }

    pub fn sample<R: Rng>(
        &self,
        rng: &mut R,
        height: i64,
    ) -> Result<Vec<ExactScalar>, SampleError> {
        let mut point: Vec<Option<ExactScalar>> = vec![None; self.ambient];
        let sums = self.segment_sums(rng, height)?;
        for (seg, sum) in self.segments.iter().zip(sums) {
            let last = *seg.last().unwrap();
            let mut rest = ExactScalar::zero();
            for &v in seg.iter().filter(|&&v| v != last) {
                let r = random_rational(rng, height, false);
                rest += &r;
                point[v - 1] = Some(r);
            }
            point[last - 1] = Some(sum - rest);
        }
        let pivot_vars: BTreeSet<usize> = self.pivots.iter().map(|p| p.var).collect();
        for v in 1..=self.ambient {
            if point[v - 1].is_none() && !pivot_vars.contains(&v) {
                point[v - 1] = Some(random_rational(rng, height, false));
            }
        }
        for p in &self.pivots {
            let value = p.coeffs.iter().fold(p.constant.clone(), |acc, (v, c)| {
                acc - c * point[v - 1].as_ref().unwrap()
            });
            point[p.var - 1] = Some(value);
        }
        let point: Vec<ExactScalar> = point.into_iter().map(Option::unwrap).collect();
        debug_assert!(
            self.source.satisfied_by(&point),
            "sampled point misses the locus"
        );
        Ok(point)
    }

    /// `cfg.count` points from stream `stream`.
    pub fn sample_many(
        &self,
        cfg: &SampleConfig,
        stream: u64,
    ) -> Result<Vec<Vec<ExactScalar>>, SampleError> {
        let mut rng = cfg.rng(stream);
        (0..cfg.count)
            .map(|_| self.sample(&mut rng, cfg.height))
            .collect()
    }

    /// For purely linear loci, the general solution: each coordinate as a
    /// polynomial in the free variables.
    pub fn symbolic_solution(&self) -> Option<Vec<SparsePoly>> {
        if !self.is_linear() {
            return None;
        }
        let mut values: Vec<SparsePoly> = (1..=self.ambient).map(SparsePoly::var).collect();
        for p in &self.pivots {
            let mut v = SparsePoly::constant(p.constant.clone());
            for (free, c) in &p.coeffs {
                v = &v - &SparsePoly::var(*free).scale(c);
            }
            values[p.var - 1] = v.with_nvars(self.ambient);
        }
        Some(values)
    }
}
