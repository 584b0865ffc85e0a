//! The AC variety `AC_n = V(u[1,n] − 1, u[1,n−1], u[2,n])`: its Gröbner basis
//! with explicit membership certificates, the rational parametrization, the
//! Jacobian of the basis, and exact checks of inclusions between loci.

mod battery;
mod sampling;

pub use battery::{
    verify_theorem_battery, BatteryError, BatteryFailure, BatteryReport, CaseReport,
    SymbolicStatus, TheoremId,
};
pub use sampling::{random_rational, SampleConfig, SampleError, Sampler};

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::continuant::{u_at, ContinuantTable, IndexRange, Status};
use crate::polyalg::{int, matrix_rank, ExactScalar, SparsePoly};
use crate::polysets::PolySet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("DIMENSION_TOO_SMALL: need n >= {min}, got {n}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("TAIL_LENGTH: n = {n} needs {expected} tail values x4..x{n}, got {got}")]
    TailLength {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("DENOMINATOR_ZERO: u[4,{n}] vanishes on the tail")]
    DenominatorZero { n: usize },
}

impl VarietyError {
    pub fn code(&self) -> &'static str {
        match self {
            VarietyError::DimensionTooSmall { .. } => "DIMENSION_TOO_SMALL",
            VarietyError::TailLength { .. } => "TAIL_LENGTH",
            VarietyError::DenominatorZero { .. } => "DENOMINATOR_ZERO",
        }
    }
}

fn need(n: usize, min: usize) -> Result<(), VarietyError> {
    if n < min {
        return Err(VarietyError::DimensionTooSmall { n, min });
    }
    Ok(())
}

/// `[u[1,n] − 1, u[1,n−1], u[2,n]]`.
pub fn ac_generators(n: usize) -> Result<[SparsePoly; 3], VarietyError> {
    need(n, 3)?;
    let t = ContinuantTable::new(n);
    Ok([
        t.get(1, n) - &SparsePoly::one(),
        t.get(1, n - 1).clone(),
        t.get(2, n).clone(),
    ])
}

/// `u[2,n−1] + 1`, which may replace `u[1,n] − 1` as the first generator.
pub fn ac_alternative_first(n: usize) -> Result<SparsePoly, VarietyError> {
    need(n, 3)?;
    let t = ContinuantTable::new(n);
    Ok(t.get(2, n - 1) + &SparsePoly::one())
}

/// Whether `point` satisfies all three generators exactly.
pub fn on_ac(point: &[ExactScalar]) -> bool {
    let n = point.len();
    n >= 3 && ac_residuals(point).iter().all(Zero::is_zero)
}

/// `(u[1,n] − 1, u[1,n−1], u[2,n])` at `point`.
pub fn ac_residuals(point: &[ExactScalar]) -> [ExactScalar; 3] {
    let n = point.len();
    let r = |lo, hi| u_at(point, IndexRange::new(lo, hi).unwrap());
    [r(1, n) - int(1), r(1, n - 1), r(2, n)]
}

/// `[u[3,n] + 1, u[4,n] + x_2, u[3,n−1] + x_1]`.
pub fn groebner_basis(n: usize) -> Result<[SparsePoly; 3], VarietyError> {
    need(n, 4)?;
    let t = ContinuantTable::new(n);
    let one = SparsePoly::one();
    Ok([
        t.get(3, n) + &one,
        t.get(4, n) + &SparsePoly::var(2),
        t.get(3, n - 1) + &SparsePoly::var(1),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    pub direction: &'static str,
    pub target: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub n: usize,
    pub basis: Vec<String>,
    pub leading_monomials: Vec<String>,
    pub pairwise_coprime: bool,
    pub identities: Vec<CertificateEntry>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.pairwise_coprime && self.identities.iter().all(|e| e.status == Status::Pass)
    }
}

fn combo(coeffs: &[SparsePoly], gens: &[SparsePoly]) -> SparsePoly {
    coeffs
        .iter()
        .zip(gens)
        .fold(SparsePoly::zero(), |acc, (c, g)| &acc + &(c * g))
}

/// Verifies that each basis element is an explicit combination of the AC
/// generators and vice versa, and that the leading monomials are pairwise
/// coprime (so the basis property follows from Buchberger's criterion).
pub fn certificate_check(n: usize) -> Result<CertificateReport, VarietyError> {
    need(n, 4)?;
    let t = ContinuantTable::new(n);
    let u = |lo, hi| t.get(lo, hi).clone();
    let x = SparsePoly::var;
    let one = SparsePoly::one();
    let zero = SparsePoly::zero();
    let gens = ac_generators(n)?;
    let basis = groebner_basis(n)?;
    let x1x2_1 = &(&x(1) * &x(2)) - &one;
    let c = &u(2, n - 1) + &one;

    let mut identities = Vec::new();
    let mut record =
        |direction: &'static str, target: String, lhs: &SparsePoly, rhs: SparsePoly| {
            identities.push(CertificateEntry {
                direction,
                target,
                status: if *lhs == rhs {
                    Status::Pass
                } else {
                    Status::Fail
                },
            });
        };

    // basis inside the ideal of the generators
    record(
        "basis-in-ideal",
        "u[3,n] + 1".into(),
        &basis[0],
        combo(&[-&one, zero.clone(), x(1)], &gens),
    );
    record(
        "basis-in-ideal",
        "u[4,n] + x2".into(),
        &basis[1],
        combo(&[-x(2), zero.clone(), x1x2_1.clone()], &gens),
    );
    record(
        "basis-in-ideal",
        "u[2,n-1] + 1".into(),
        &c,
        combo(&[-u(2, n - 1), u(2, n), zero.clone()], &gens),
    );
    record(
        "basis-in-ideal",
        "u[3,n-1] + x1".into(),
        &basis[2],
        combo(
            &[
                -(&x(1) * &u(2, n - 1)),
                &(&x(1) * &u(2, n)) - &one,
                zero.clone(),
            ],
            &gens,
        ),
    );

    // generators inside the ideal of the basis
    record(
        "ideal-in-basis",
        "u[2,n]".into(),
        &gens[2],
        combo(&[x(2), -&one, zero.clone()], &basis),
    );
    record(
        "ideal-in-basis",
        "u[1,n] - 1".into(),
        &gens[0],
        combo(&[x1x2_1.clone(), -x(1), zero.clone()], &basis),
    );
    let c1 = &(&u(1, n - 1) * &x(2)) - &(&u(2, n - 1) * &x1x2_1);
    let c2 = &(&u(2, n - 1) * &x(1)) - &u(1, n - 1);
    record(
        "ideal-in-basis",
        "u[2,n-1] + 1".into(),
        &c,
        combo(&[c1.clone(), c2.clone(), zero], &basis),
    );
    record(
        "ideal-in-basis",
        "u[1,n-1]".into(),
        &gens[1],
        combo(&[&x(1) * &c1, &x(1) * &c2, -&one], &basis),
    );

    let lms: Vec<_> = basis
        .iter()
        .map(|g| g.leading_monomial_lex().unwrap().clone())
        .collect();
    let pairwise_coprime = (0..3).all(|i| (i + 1..3).all(|j| lms[i].is_coprime(&lms[j])));
    Ok(CertificateReport {
        n,
        basis: basis.iter().map(|g| g.to_string()).collect(),
        leading_monomials: lms.iter().map(|m| m.to_string()).collect(),
        pairwise_coprime,
        identities,
    })
}

/// `x_i + 1` as explicit combinations of the three generators of `AC_3`, which
/// together with the point `(−1,−1,−1)` lying on it pins `AC_3` down exactly.
pub fn ac3_certificates() -> Vec<CertificateEntry> {
    let g = ac_generators(3).unwrap();
    let x = SparsePoly::var;
    let one = SparsePoly::one();
    let plus_one = |k| &x(k) + &one;
    let x1_cert = &(&x(3) * &g[1]) - &g[0];
    let x3_cert = &(&x(1) * &g[2]) - &g[0];
    let x2_cert = &(&x(2) * &x1_cert) - &g[1];
    [(1, x1_cert), (2, x2_cert), (3, x3_cert)]
        .into_iter()
        .map(|(k, cert)| CertificateEntry {
            direction: "ideal-contains",
            target: format!("x{k} + 1"),
            status: if cert == plus_one(k) {
                Status::Pass
            } else {
                Status::Fail
            },
        })
        .collect()
}

/// The two lines making up `AC_4`, at parameter `t`.
pub fn ac4_line_points(t: &ExactScalar) -> [Vec<ExactScalar>; 2] {
    let z = ExactScalar::zero();
    [
        vec![z.clone(), t.clone(), z.clone(), -t],
        vec![t.clone(), z.clone(), -t, z],
    ]
}

/// Completes `x_4..x_n` to a point of `AC_n`.
pub fn rational_parametrization(
    n: usize,
    tail: &[ExactScalar],
) -> Result<Vec<ExactScalar>, VarietyError> {
    need(n, 5)?;
    if tail.len() != n - 3 {
        return Err(VarietyError::TailLength {
            n,
            expected: n - 3,
            got: tail.len(),
        });
    }
    let mut point = vec![ExactScalar::zero(); 3];
    point.extend_from_slice(tail);
    let u = |lo, hi| u_at(&point, IndexRange::new(lo, hi).unwrap());
    let d = u(4, n);
    if d.is_zero() {
        return Err(VarietyError::DenominatorZero { n });
    }
    let x2 = -d.clone();
    let x3 = (u(5, n) - int(1)) / &d;
    let x1 = (u(4, n - 1) - int(1)) / &d;
    point[0] = x1;
    point[1] = x2;
    point[2] = x3;
    Ok(point)
}

/// A random tail with `u[4,n] ≠ 0`, completed to a point of `AC_n`.
pub fn random_ac_point<R: Rng>(
    n: usize,
    height: i64,
    rng: &mut R,
) -> Result<Vec<ExactScalar>, VarietyError> {
    need(n, 5)?;
    loop {
        let tail: Vec<ExactScalar> = (0..n - 3)
            .map(|_| random_rational(rng, height, false))
            .collect();
        match rational_parametrization(n, &tail) {
            Err(VarietyError::DenominatorZero { .. }) => continue,
            other => return other,
        }
    }
}

/// `∂u[i,j]/∂x_k = u[i,k−1] u[k+1,j]` for `i <= k <= j`, else 0.
fn continuant_partial(point: &[ExactScalar], i: usize, j: usize, k: usize) -> ExactScalar {
    if k < i || k > j {
        return ExactScalar::zero();
    }
    let r = |lo, hi| u_at(point, IndexRange::new(lo, hi).unwrap());
    r(i, k - 1) * r(k + 1, j)
}

/// Rows `∂/∂x_k` of `x_1 + u[3,n−1]`, `x_2 + u[4,n]`, `u[3,n] + 1` (the basis
/// in reverse order, so columns 1 and 2 of the first two rows are the identity).
pub fn jacobian(point: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
    let n = point.len();
    assert!(n >= 4, "the Jacobian of the basis needs n >= 4");
    let delta = |a: usize, b: usize| if a == b { int(1) } else { int(0) };
    let row = |own: Option<usize>, i: usize, j: usize| -> Vec<ExactScalar> {
        (1..=n)
            .map(|k| {
                own.map(|v| delta(v, k)).unwrap_or_default() + continuant_partial(point, i, j, k)
            })
            .collect()
    };
    vec![row(Some(1), 3, n - 1), row(Some(2), 4, n), row(None, 3, n)]
}

pub fn jacobian_rank(point: &[ExactScalar]) -> usize {
    matrix_rank(&jacobian(point))
}

/// Whether the origin lies on `AC_n`; it does exactly when `4 | n`.
pub fn origin_membership(n: usize) -> Result<bool, VarietyError> {
    need(n, 3)?;
    Ok(on_ac(&vec![ExactScalar::zero(); n]))
}

/// "Every point of V(source) has `u[target] = expected`."
#[derive(Clone, Debug)]
pub struct InclusionClaim {
    pub source: PolySet,
    pub target: IndexRange,
    pub expected: ExactScalar,
    pub ambient: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionFailure {
    pub point: Vec<String>,
    pub value: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub target: String,
    pub expected: String,
    pub points: usize,
    pub failures: Vec<InclusionFailure>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_inclusion(
    claim: &InclusionClaim,
    cfg: &SampleConfig,
) -> Result<InclusionReport, SampleError> {
    let mut source = claim.source.clone();
    source.ambient = source.ambient.max(claim.ambient);
    let sampler = Sampler::new(&source)?;
    let points = sampler.sample_many(cfg, 0)?;
    let failures = points
        .iter()
        .filter_map(|p| {
            let value = u_at(p, claim.target);
            (value != claim.expected).then(|| InclusionFailure {
                point: p.iter().map(|v| v.to_string()).collect(),
                value: value.to_string(),
                expected: claim.expected.to_string(),
            })
        })
        .collect();
    Ok(InclusionReport {
        target: claim.target.to_string(),
        expected: claim.expected.to_string(),
        points: points.len(),
        failures,
    })
}
