//! Continuants `u[i,j]` (determinants of the tridiagonal matrices with
//! `x_i, ..., x_j` on the diagonal and `-1` beside it) and the 2x2 transfer
//! matrices `A(x) = [[0, -1], [1, x]]` whose ordered products encode them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::polyalg::{ExactScalar, Ring, SparsePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContinuantError {
    #[error("invalid index range [{lo},{hi}]: need lo >= 1 and hi >= lo - 1")]
    InvalidRange { lo: usize, hi: usize },
    #[error("range [{lo},{hi}] exceeds the {nvars} available variables")]
    OutOfAmbient { lo: usize, hi: usize, nvars: usize },
}

/// Index range `[lo, hi]` of a continuant. `hi = lo - 1` is the empty range
/// (value 1), `hi = lo` the singleton (value `x_lo`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexRange {
    lo: usize,
    hi: usize,
}

impl IndexRange {
    pub fn new(lo: usize, hi: usize) -> Result<Self, ContinuantError> {
        if lo == 0 || hi + 1 < lo {
            return Err(ContinuantError::InvalidRange { lo, hi });
        }
        Ok(IndexRange { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi + 1 == self.lo
    }

    /// The coordinates of `point` this range reads (point is 1-based in x).
    pub fn slice<'a, T>(&self, point: &'a [T]) -> &'a [T] {
        &point[self.lo - 1..self.hi]
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u[{},{}]", self.lo, self.hi)
    }
}

/// `u(v_1, ..., v_m)` by the three-term recurrence
/// `u[1,k] = v_k u[1,k-1] - u[1,k-2]`; the empty sequence gives 1.
pub fn u_eval<T: Ring>(values: &[T]) -> T {
    let mut prev = T::zero();
    let mut cur = T::one();
    for v in values {
        let next = v.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `u[range]` evaluated at a full point (coordinate `x_i` is `point[i-1]`).
pub fn u_at<T: Ring>(point: &[T], range: IndexRange) -> T {
    u_eval(range.slice(point))
}

fn check_ambient(range: IndexRange, nvars: usize) -> Result<(), ContinuantError> {
    if range.hi > nvars {
        return Err(ContinuantError::OutOfAmbient {
            lo: range.lo,
            hi: range.hi,
            nvars,
        });
    }
    Ok(())
}

/// The continuant `u[lo,hi]` as a polynomial, built right to left:
/// `u[lo,j] = x_j u[lo,j-1] - u[lo,j-2]`.
pub fn u_poly(range: IndexRange, nvars: usize) -> Result<SparsePoly, ContinuantError> {
    check_ambient(range, nvars)?;
    let mut prev = SparsePoly::zero_in(nvars);
    let mut cur = SparsePoly::one().with_nvars(nvars);
    for j in range.lo..=range.hi {
        let next = &(&SparsePoly::var(j) * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur.with_nvars(nvars))
}

/// The same continuant built from the left end:
/// `u[i,hi] = x_i u[i+1,hi] - u[i+2,hi]`.
pub fn u_poly_leftward(range: IndexRange, nvars: usize) -> Result<SparsePoly, ContinuantError> {
    check_ambient(range, nvars)?;
    let mut prev = SparsePoly::zero_in(nvars);
    let mut cur = SparsePoly::one().with_nvars(nvars);
    for i in (range.lo..=range.hi).rev() {
        let next = &(&SparsePoly::var(i) * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur.with_nvars(nvars))
}

/// Every continuant `u[i,j]` with `1 <= i <= j+1 <= nvars+1`, filled once by
/// dynamic programming over ranges.
#[derive(Clone, Debug)]
pub struct ContinuantTable {
    nvars: usize,
    table: BTreeMap<(usize, usize), SparsePoly>,
}

impl ContinuantTable {
    pub fn new(nvars: usize) -> Self {
        let mut table = BTreeMap::new();
        for lo in 1..=nvars + 1 {
            let mut prev = SparsePoly::zero_in(nvars);
            let mut cur = SparsePoly::one().with_nvars(nvars);
            table.insert((lo, lo - 1), cur.clone());
            for hi in lo..=nvars {
                let next = &(&SparsePoly::var(hi) * &cur) - &prev;
                prev = cur;
                cur = next;
                table.insert((lo, hi), cur.clone());
            }
        }
        ContinuantTable { nvars, table }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `u[lo,hi]`; panics outside `1 <= lo <= hi + 1 <= nvars + 1`.
    pub fn get(&self, lo: usize, hi: usize) -> &SparsePoly {
        self.table
            .get(&(lo, hi))
            .unwrap_or_else(|| panic!("u[{lo},{hi}] outside table of {} variables", self.nvars))
    }
}

/// A 2x2 matrix over any ring.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix<T> {
    pub entries: [[T; 2]; 2],
}

impl<T: Ring> TransferMatrix<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        TransferMatrix {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `A(x) = [[0, -1], [1, x]]`.
    pub fn step(x: T) -> Self {
        Self::new(T::zero(), -T::one(), T::one(), x)
    }

    /// `diag(-1, 1)`, the conjugator relating `A(x)` to its transpose.
    pub fn sign_flip() -> Self {
        Self::new(-T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        let [[e, f], [g, h]] = &rhs.entries;
        Self::new(
            a.clone() * e.clone() + b.clone() * g.clone(),
            a.clone() * f.clone() + b.clone() * h.clone(),
            c.clone() * e.clone() + d.clone() * g.clone(),
            c.clone() * f.clone() + d.clone() * h.clone(),
        )
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.entries.clone();
        Self::new(a, c, b, d)
    }

    pub fn neg(&self) -> Self {
        let [[a, b], [c, d]] = self.entries.clone();
        Self::new(-a, -b, -c, -d)
    }

    pub fn det(&self) -> T {
        let [[a, b], [c, d]] = self.entries.clone();
        a * d - b * c
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> TransferMatrix<U> {
        let [[a, b], [c, d]] = &self.entries;
        TransferMatrix {
            entries: [[f(a), f(b)], [f(c), f(d)]],
        }
    }
}

/// `A(v_1) A(v_2) ... A(v_n)`; the empty product is the identity.
pub fn transfer_product<T: Ring>(values: &[T]) -> TransferMatrix<T> {
    values.iter().fold(TransferMatrix::identity(), |acc, v| {
        acc.mul(&TransferMatrix::step(v.clone()))
    })
}

/// `A(v_n) A(v_{n-1}) ... A(v_1)`.
pub fn transfer_product_reversed<T: Ring>(values: &[T]) -> TransferMatrix<T> {
    values
        .iter()
        .rev()
        .fold(TransferMatrix::identity(), |acc, v| {
            acc.mul(&TransferMatrix::step(v.clone()))
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub n: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    fn record(&mut self, identity: &str, n: usize, lhs: &SparsePoly, rhs: &SparsePoly) {
        self.record_bool(identity, n, lhs == rhs, || format!("{lhs}  !=  {rhs}"));
    }

    fn record_matrix(
        &mut self,
        identity: &str,
        n: usize,
        lhs: &TransferMatrix<SparsePoly>,
        rhs: &TransferMatrix<SparsePoly>,
    ) {
        self.record_bool(identity, n, lhs == rhs, || {
            let show = |m: &TransferMatrix<SparsePoly>| {
                let [[a, b], [c, d]] = &m.entries;
                format!("[[{a}, {b}], [{c}, {d}]]")
            };
            format!("{}  !=  {}", show(lhs), show(rhs))
        });
    }

    fn record_bool(&mut self, identity: &str, n: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.push(IdentityCheck {
            identity: identity.to_string(),
            n,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: (!ok).then(detail),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn count(&self, identity: &str) -> usize {
        self.checks
            .iter()
            .filter(|c| c.identity == identity)
            .count()
    }
}

pub const ID_RECURRENCE_LEFT: &str = "recurrence-left";
pub const ID_RECURRENCE_RIGHT: &str = "recurrence-right";
pub const ID_ZERO_INSERTION: &str = "zero-insertion";
pub const ID_REVERSED_PRODUCT: &str = "reversed-product";
pub const ID_FORWARD_PRODUCT: &str = "forward-product";
pub const ID_TRANSPOSE_CONJUGATION: &str = "transpose-conjugation";
pub const ID_ZERO_COLLAPSE: &str = "zero-collapse";
pub const ID_DETERMINANT: &str = "determinant";
pub const ID_PARTIAL_DERIVATIVE: &str = "partial-derivative";

/// Checks every continuant and transfer-matrix identity symbolically for all
/// `2 <= n <= n_max`. A mismatch becomes a failed report entry.
pub fn verify_identities(n_max: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let x = SparsePoly::var;

    // A(x) A(0) A(y) = -A(x + y), independent of n.
    {
        let lhs = TransferMatrix::step(x(1))
            .mul(&TransferMatrix::step(SparsePoly::zero()))
            .mul(&TransferMatrix::step(x(2)));
        let rhs = TransferMatrix::step(x(1) + x(2)).neg();
        report.record_matrix(ID_ZERO_INSERTION, 2, &lhs, &rhs);
    }
    // tA(x) = D A(x) D with D = diag(-1, 1).
    {
        let d = TransferMatrix::<SparsePoly>::sign_flip();
        let a = TransferMatrix::step(x(1));
        report.record_matrix(
            ID_TRANSPOSE_CONJUGATION,
            1,
            &a.transpose(),
            &d.mul(&a).mul(&d),
        );
    }

    let table = ContinuantTable::new(n_max.max(2));
    for n in 2..=n_max {
        let u = |lo: usize, hi: usize| table.get(lo, hi).clone();
        let vars: Vec<SparsePoly> = (1..=n).map(x).collect();

        report.record(
            ID_RECURRENCE_LEFT,
            n,
            &u(1, n),
            &(&(&x(1) * &u(2, n)) - &u(3, n)),
        );
        report.record(
            ID_RECURRENCE_RIGHT,
            n,
            &u(1, n),
            &(&(&x(n) * &u(1, n - 1)) - &u(1, n - 2)),
        );
        // cross-check the left-to-right builder against the table
        let left = u_poly_leftward(IndexRange::new(1, n).unwrap(), n).unwrap();
        report.record(ID_RECURRENCE_LEFT, n, &left, &u(1, n));

        let reversed = transfer_product_reversed(&vars);
        let expected_rev = TransferMatrix::new(-u(2, n - 1), -u(1, n - 1), u(2, n), u(1, n));
        report.record_matrix(ID_REVERSED_PRODUCT, n, &reversed, &expected_rev);

        let forward = transfer_product(&vars);
        let expected_fwd = TransferMatrix::new(-u(2, n - 1), -u(2, n), u(1, n - 1), u(1, n));
        report.record_matrix(ID_FORWARD_PRODUCT, n, &forward, &expected_fwd);

        let d = TransferMatrix::<SparsePoly>::sign_flip();
        report.record_matrix(
            ID_TRANSPOSE_CONJUGATION,
            n,
            &forward,
            &d.mul(&reversed.transpose()).mul(&d),
        );

        // x_k = 0 collapses its neighbours: u(.., x_{k-1}, 0, x_{k+1}, ..) = -u(.., x_{k-1}+x_{k+1}, ..)
        for k in 2..n {
            let zeroed: BTreeMap<usize, SparsePoly> = [(k, SparsePoly::zero())].into();
            let lhs = u(1, n).substitute(&zeroed);
            let shorter = ContinuantTable::new(n - 2);
            let rhs = -shorter.get(1, n - 2).substitute(&collapse_map(k, n - 2));
            report.record(ID_ZERO_COLLAPSE, n, &lhs, &rhs);
        }

        let det_lhs = &(&(-u(1, n)) * &u(2, n - 1)) + &(&u(1, n - 1) * &u(2, n));
        report.record(ID_DETERMINANT, n, &det_lhs, &SparsePoly::one());
        report.record(ID_DETERMINANT, n, &forward.det(), &SparsePoly::one());

        for k in 1..=n {
            let lhs = u(1, n).partial_derivative(k);
            let rhs = &u(1, k - 1) * &u(k + 1, n);
            report.record(ID_PARTIAL_DERIVATIVE, n, &lhs, &rhs);
        }
    }
    report
}

/// Pullback of the map `(x_1..x_m+2) -> (x_1, .., x_{k-2}, x_{k-1}+x_{k+1}, x_{k+2}, ..)`
/// as an assignment `y_j -> polynomial in x`, for a target with `target_vars` coordinates.
pub fn collapse_map(k: usize, target_vars: usize) -> BTreeMap<usize, SparsePoly> {
    assert!(k >= 2, "collapse position must have a left neighbour");
    (1..=target_vars)
        .map(|j| {
            let image = if j + 2 <= k {
                SparsePoly::var(j)
            } else if j + 1 == k {
                SparsePoly::var(k - 1) + SparsePoly::var(k + 1)
            } else {
                SparsePoly::var(j + 2)
            };
            (j, image)
        })
        .collect()
}

/// Convenience: exact continuant of rationals.
pub fn u_eval_exact(values: &[ExactScalar]) -> ExactScalar {
    u_eval(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, rat};

    fn p(s: &str) -> SparsePoly {
        s.parse().unwrap()
    }

    fn range(lo: usize, hi: usize) -> IndexRange {
        IndexRange::new(lo, hi).unwrap()
    }

    #[test]
    fn small_continuants() {
        assert_eq!(u_poly(range(1, 2), 2).unwrap(), p("x1*x2 - 1"));
        assert_eq!(
            u_poly(range(1, 4), 4).unwrap(),
            p("x1*x2*x3*x4 - x1*x2 - x3*x4 - x1*x4 + 1")
        );
        assert_eq!(
            u_poly(range(1, 5), 5).unwrap(),
            p("x1*x2*x3*x4*x5 - x1*x2*x3 - x1*x2*x5 - x1*x4*x5 - x3*x4*x5 + x1 + x3 + x5")
        );
        assert_eq!(u_poly(range(3, 2), 5).unwrap(), SparsePoly::one());
        assert_eq!(u_poly(range(4, 4), 5).unwrap(), SparsePoly::var(4));
    }

    #[test]
    fn invalid_ranges() {
        assert_eq!(
            IndexRange::new(0, 3),
            Err(ContinuantError::InvalidRange { lo: 0, hi: 3 })
        );
        assert_eq!(
            IndexRange::new(5, 2),
            Err(ContinuantError::InvalidRange { lo: 5, hi: 2 })
        );
        assert!(matches!(
            u_poly(range(1, 6), 4),
            Err(ContinuantError::OutOfAmbient { .. })
        ));
    }

    #[test]
    fn scalar_evaluation() {
        assert_eq!(u_eval(&[int(-1), int(-1), int(-1)]), int(1));
        assert_eq!(u_eval(&[int(2)]), int(2));
        assert_eq!(u_eval::<ExactScalar>(&[]), int(1));
        for m in 1..=6 {
            let zeros = vec![int(0); 2 * m];
            let expected = if m % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(u_eval(&zeros), expected, "length {}", 2 * m);
        }
        assert!((u_eval(&[0.5f64, 4.0]) - 1.0).abs() < 1e-15);
        assert_eq!(u_eval(&[rat(1, 2), int(2)]), int(0));
    }

    #[test]
    fn symbolic_transfer_products() {
        let n2 = transfer_product(&[SparsePoly::var(1), SparsePoly::var(2)]);
        let expected = TransferMatrix::new(p("-1"), p("-x2"), p("x1"), p("x1*x2 - 1"));
        assert_eq!(n2, expected);
        assert_eq!(
            transfer_product::<SparsePoly>(&[]),
            TransferMatrix::identity()
        );
        let vars: Vec<SparsePoly> = (1..=5).map(SparsePoly::var).collect();
        assert_eq!(transfer_product(&vars).det(), SparsePoly::one());
    }

    #[test]
    fn identities_hold_through_eight() {
        let report = verify_identities(8);
        assert!(report.all_passed(), "{:?}", report.first_failure());
        assert_eq!(
            report.count(ID_ZERO_COLLAPSE),
            (2..=8).map(|n| n - 2).sum::<usize>()
        );
        assert_eq!(report.count(ID_PARTIAL_DERIVATIVE), (2..=8).sum::<usize>());
    }

    #[test]
    fn table_agrees_with_direct_builder() {
        let t = ContinuantTable::new(7);
        for lo in 1..=7 {
            for hi in lo - 1..=7 {
                assert_eq!(t.get(lo, hi), &u_poly(range(lo, hi), 7).unwrap());
            }
        }
    }

    #[test]
    fn collapse_map_shape() {
        let m = collapse_map(6, 7);
        assert_eq!(m[&4], SparsePoly::var(4));
        assert_eq!(m[&5], p("x5 + x7"));
        assert_eq!(m[&6], SparsePoly::var(8));
        assert_eq!(m[&7], SparsePoly::var(9));
    }
}
