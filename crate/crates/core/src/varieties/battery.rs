//! Exhaustive inclusion batteries: for every string of a family, sample the
//! hypothesis locus exactly and test each conclusion at every point. Purely
//! linear hypotheses also get a symbolic check on their general solution.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::sampling::{SampleConfig, Sampler};
use crate::brackets::{enumerate, enumerate_angle_first, BracketError, BracketString, Kind};
use crate::continuant::{u_at, u_eval, IndexRange};
use crate::polyalg::{int, rat, ExactScalar, SparsePoly};
use crate::polysets::{
    ang_set, bra_set, par_set, qbra_two_set, tbra_eps_set, tbra_two_set, PolySet,
};
use crate::transforms::{ass, ass_braket, ass_tbra, ass_to_qbra, ass_to_tbra, bra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    AngValue,
    BraValue,
    ParPair,
    BraKetting,
    AcMultipleOfFour,
    TbraValue,
    TbraSplit,
    AcOdd,
    QbraValue,
    TbraVanishing,
    AcTwoModFour,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::AngValue,
        TheoremId::BraValue,
        TheoremId::ParPair,
        TheoremId::BraKetting,
        TheoremId::AcMultipleOfFour,
        TheoremId::TbraValue,
        TheoremId::TbraSplit,
        TheoremId::AcOdd,
        TheoremId::QbraValue,
        TheoremId::TbraVanishing,
        TheoremId::AcTwoModFour,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TheoremId::AngValue => "4.1",
            TheoremId::BraValue => "5.1",
            TheoremId::ParPair => "6.1",
            TheoremId::BraKetting => "7.1",
            TheoremId::AcMultipleOfFour => "7.2",
            TheoremId::TbraValue => "8.1",
            TheoremId::TbraSplit => "9.2",
            TheoremId::AcOdd => "9.1",
            TheoremId::QbraValue => "10.1",
            TheoremId::TbraVanishing => "10.2",
            TheoremId::AcTwoModFour => "11.1",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::AngValue => "b in Ang_n, c in {0,1,-2,3/7}: V(f_b(c)) in V(u[1,2n-1] - (-1)^(n-1) c)",
            TheoremId::BraValue => "b in Bra_n, c in {0,1,-2,3/7}: V(f_b(c)) in V(u[1,2n] - (-1)^(n-1) (c-1))",
            TheoremId::ParPair => {
                "b in Par_n: V(f_b) & V(f_ass(b)^(+1)) in V(u[1,2n-1]) & V(u[2,2n]); the union has n+1 independent forms"
            }
            TheoremId::BraKetting => "b in Par_n: V(f_b) & V(f_ass(b)^(+1)) in V(f_bra(b)(0))",
            TheoremId::AcMultipleOfFour => "N = 0 mod 4, b in Par_(N/2): V(f_b) & V(f_ass(b)^(+1)) in AC_N",
            TheoremId::TbraValue => "b in Tbra_n, e = +-1: V(f_b(e)) in V(u[1,2n+1] - (-1)^n e)",
            TheoremId::TbraSplit => {
                "b in Bra_<n, e = +-1, b'' = ass_to_tbra(b): V(f_b''(e)) in V(f_b(1)) & V(f_ass_braket(b)^(+1)(1))"
            }
            TheoremId::AcOdd => "b in Bra_<n: V(f_ass_to_tbra(b)((-1)^n)) in AC_(2n+1)",
            TheoremId::QbraValue => "b in Qbra_n: V(f_b(2)) in V(u[1,2n] - (-1)^(n-1))",
            TheoremId::TbraVanishing => "b in Tbra_n: V(f_b(2)) in V(u[1,2n+1])",
            TheoremId::AcTwoModFour => {
                "b in Tbra_<n, b'' = ass_to_qbra(b): V(f_b''(2)) in V(f_b(2)) & V(f_ass_tbra(b)^(+1)(2)) \
                 & V(u[1,2n+1]) & V(u[2,2n+2]) & V(u[1,2n+2] - (-1)^n); in AC_(2n+2) for even n"
            }
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| {
                let ids: Vec<&str> = TheoremId::ALL.iter().map(|t| t.id()).collect();
                format!("unknown theorem '{s}' (expected one of {})", ids.join(", "))
            })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BatteryError {
    #[error("INVALID_SIZE: {0}")]
    InvalidSize(String),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

impl BatteryError {
    pub fn code(&self) -> &'static str {
        match self {
            BatteryError::InvalidSize(_) => "INVALID_SIZE",
            BatteryError::Bracket(e) => e.code(),
        }
    }
}

#[derive(Clone, Debug)]
enum Conclusion {
    Value {
        range: IndexRange,
        expected: ExactScalar,
    },
    Vanishes {
        label: String,
        set: PolySet,
    },
}

impl Conclusion {
    fn value(lo: usize, hi: usize, expected: ExactScalar) -> Self {
        Conclusion::Value {
            range: IndexRange::new(lo, hi).unwrap(),
            expected,
        }
    }

    fn label(&self) -> String {
        match self {
            Conclusion::Value { range, expected } => format!("{range} = {expected}"),
            Conclusion::Vanishes { label, .. } => format!("{label} vanishes"),
        }
    }

    fn holds_at(&self, point: &[ExactScalar]) -> Result<(), String> {
        match self {
            Conclusion::Value { range, expected } => {
                let v = u_at(point, *range);
                if v == *expected {
                    Ok(())
                } else {
                    Err(format!("{range} = {v}"))
                }
            }
            Conclusion::Vanishes { set, .. } => {
                match set.forms.iter().find(|f| !f.eval(point).is_zero()) {
                    None => Ok(()),
                    Some(f) => Err(format!("{f} = {}", f.eval(point))),
                }
            }
        }
    }

    fn holds_symbolically(&self, solution: &[SparsePoly]) -> Result<(), String> {
        match self {
            Conclusion::Value { range, expected } => {
                let v = u_eval(range.slice(solution)) - SparsePoly::constant(expected.clone());
                if v.is_zero() {
                    Ok(())
                } else {
                    Err(format!("{range} - {expected} = {v}"))
                }
            }
            Conclusion::Vanishes { set, .. } => {
                for f in &set.forms {
                    let v = f
                        .to_poly(set.ambient)
                        .eval_in(solution, |c| SparsePoly::constant(c.clone()))
                        .map_err(|e| e.to_string())?;
                    if !v.is_zero() {
                        return Err(format!("{f} = {v}"));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Case {
    string: String,
    param: Option<String>,
    hypothesis: PolySet,
    conclusions: Vec<Conclusion>,
    /// Number of distinct forms in the hypothesis and the rank of their span.
    expected_independent: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolicStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub string: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    pub points: usize,
    pub symbolic: SymbolicStatus,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryFailure {
    pub string: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub theorem: String,
    pub statement: String,
    pub n: usize,
    pub cases: Vec<CaseReport>,
    pub failures: Vec<BatteryFailure>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_points(&self) -> usize {
        self.cases.iter().map(|c| c.points).sum()
    }
}

fn sign(e: usize) -> ExactScalar {
    if e.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn constant_params() -> Vec<ExactScalar> {
    vec![int(0), int(1), int(-2), rat(3, 7)]
}

fn eps_params() -> Vec<ExactScalar> {
    vec![int(1), int(-1)]
}

/// `u[1,N] = 1`, `u[1,N−1] = 0`, `u[2,N] = 0`.
fn ac_conclusions(dim: usize) -> Vec<Conclusion> {
    vec![
        Conclusion::value(1, dim, int(1)),
        Conclusion::value(1, dim - 1, int(0)),
        Conclusion::value(2, dim, int(0)),
    ]
}

fn family(kind: Kind, n: usize) -> Result<Vec<BracketString>, BatteryError> {
    Ok(enumerate(kind, n)?)
}

fn angle_family(kind: Kind, n: usize) -> Result<Vec<BracketString>, BatteryError> {
    Ok(enumerate_angle_first(kind, n)?)
}

/// Hypothesis shared by the round-bracket theorems: `f_b ∪ f_ass(b)^(+1)`.
fn par_pair(b: &BracketString) -> PolySet {
    par_set(b)
        .unwrap()
        .union(&par_set(&ass(b).unwrap()).unwrap().shift_plus_one())
}

fn build_cases(id: TheoremId, n: usize) -> Result<Vec<Case>, BatteryError> {
    let mut cases = Vec::new();
    let mut push = |b: &BracketString,
                    param: Option<&ExactScalar>,
                    hypothesis,
                    conclusions,
                    expected_independent| {
        cases.push(Case {
            string: b.render(),
            param: param.map(|p| p.to_string()),
            hypothesis,
            conclusions,
            expected_independent,
        })
    };
    match id {
        TheoremId::AngValue => {
            for b in family(Kind::Ang, n)? {
                for c in constant_params() {
                    let expected = sign(n - 1) * &c;
                    push(
                        &b,
                        Some(&c),
                        ang_set(&b, &c).unwrap(),
                        vec![Conclusion::value(1, 2 * n - 1, expected)],
                        None,
                    );
                }
            }
        }
        TheoremId::BraValue => {
            for b in family(Kind::Bra, n)? {
                for c in constant_params() {
                    let expected = sign(n - 1) * (&c - int(1));
                    push(
                        &b,
                        Some(&c),
                        bra_set(&b, &c).unwrap(),
                        vec![Conclusion::value(1, 2 * n, expected)],
                        None,
                    );
                }
            }
        }
        TheoremId::ParPair => {
            for b in family(Kind::Par, n)? {
                let conclusions = vec![
                    Conclusion::value(1, 2 * n - 1, int(0)),
                    Conclusion::value(2, 2 * n, int(0)),
                ];
                push(&b, None, par_pair(&b), conclusions, Some(n + 1));
            }
        }
        TheoremId::BraKetting => {
            for b in family(Kind::Par, n)? {
                let target = bra_set(&bra(&b).unwrap(), &int(0)).unwrap();
                let conclusions = vec![Conclusion::Vanishes {
                    label: "f_bra(b)(0)".into(),
                    set: target,
                }];
                push(&b, None, par_pair(&b), conclusions, None);
            }
        }
        TheoremId::AcMultipleOfFour => {
            if n == 0 || !n.is_multiple_of(4) {
                return Err(BatteryError::InvalidSize(format!(
                    "AC dimension {n} must be a positive multiple of 4"
                )));
            }
            for b in family(Kind::Par, n / 2)? {
                push(&b, None, par_pair(&b), ac_conclusions(n), None);
            }
        }
        TheoremId::TbraValue => {
            for b in family(Kind::Tbra, n)? {
                for e in eps_params() {
                    let expected = sign(n) * &e;
                    let hyp = tbra_eps_set(&b, &e).unwrap();
                    push(
                        &b,
                        Some(&e),
                        hyp,
                        vec![Conclusion::value(1, 2 * n + 1, expected)],
                        None,
                    );
                }
            }
        }
        TheoremId::TbraSplit => {
            for b in angle_family(Kind::Bra, n)? {
                let b2 = ass_to_tbra(&b).unwrap();
                let first = bra_set(&b, &int(1)).unwrap();
                let second = bra_set(&ass_braket(&b).unwrap(), &int(1))
                    .unwrap()
                    .shift_plus_one();
                for e in eps_params() {
                    let conclusions = vec![
                        Conclusion::Vanishes {
                            label: "f_b(1)".into(),
                            set: first.clone(),
                        },
                        Conclusion::Vanishes {
                            label: "f_ass_braket(b)^(+1)(1)".into(),
                            set: second.clone(),
                        },
                    ];
                    push(
                        &b,
                        Some(&e),
                        tbra_eps_set(&b2, &e).unwrap(),
                        conclusions,
                        None,
                    );
                }
            }
        }
        TheoremId::AcOdd => {
            for b in angle_family(Kind::Bra, n)? {
                let hyp = tbra_eps_set(&ass_to_tbra(&b).unwrap(), &sign(n)).unwrap();
                push(&b, None, hyp, ac_conclusions(2 * n + 1), None);
            }
        }
        TheoremId::QbraValue => {
            for b in family(Kind::Qbra, n)? {
                push(
                    &b,
                    None,
                    qbra_two_set(&b).unwrap(),
                    vec![Conclusion::value(1, 2 * n, sign(n - 1))],
                    None,
                );
            }
        }
        TheoremId::TbraVanishing => {
            for b in family(Kind::Tbra, n)? {
                push(
                    &b,
                    None,
                    tbra_two_set(&b).unwrap(),
                    vec![Conclusion::value(1, 2 * n + 1, int(0))],
                    None,
                );
            }
        }
        TheoremId::AcTwoModFour => {
            for b in angle_family(Kind::Tbra, n)? {
                let hyp = qbra_two_set(&ass_to_qbra(&b).unwrap()).unwrap();
                let conclusions = vec![
                    Conclusion::Vanishes {
                        label: "f_b(2)".into(),
                        set: tbra_two_set(&b).unwrap(),
                    },
                    Conclusion::Vanishes {
                        label: "f_ass_tbra(b)^(+1)(2)".into(),
                        set: tbra_two_set(&ass_tbra(&b).unwrap())
                            .unwrap()
                            .shift_plus_one(),
                    },
                    Conclusion::value(1, 2 * n + 1, int(0)),
                    Conclusion::value(2, 2 * n + 2, int(0)),
                    Conclusion::value(1, 2 * n + 2, sign(n)),
                ];
                push(&b, None, hyp, conclusions, None);
            }
        }
    }
    Ok(cases)
}

fn run_case(case: &Case, cfg: &SampleConfig, stream: u64) -> (CaseReport, Vec<BatteryFailure>) {
    let mut failures = Vec::new();
    let mut fail = |check: String, detail: String, point: Option<&[ExactScalar]>| {
        failures.push(BatteryFailure {
            string: case.string.clone(),
            param: case.param.clone(),
            check,
            detail,
            point: point.map(|p| p.iter().map(|v| v.to_string()).collect()),
        })
    };

    if let Some(expected) = case.expected_independent {
        let count = case.hypothesis.form_set().len();
        let rank = case.hypothesis.linear_rank();
        if count != expected || rank != expected {
            fail(
                "independent forms".into(),
                format!("{count} forms of rank {rank}, expected {expected}"),
                None,
            );
        }
    }

    let sampler = match Sampler::new(&case.hypothesis) {
        Ok(s) => s,
        Err(e) => {
            fail("sampling".into(), e.to_string(), None);
            let report = CaseReport {
                string: case.string.clone(),
                param: case.param.clone(),
                points: 0,
                symbolic: SymbolicStatus::NotApplicable,
                failures: failures.len(),
            };
            return (report, failures);
        }
    };

    let symbolic = match sampler.symbolic_solution() {
        None => SymbolicStatus::NotApplicable,
        Some(solution) => {
            let mut status = SymbolicStatus::Pass;
            for c in &case.conclusions {
                if let Err(detail) = c.holds_symbolically(&solution) {
                    status = SymbolicStatus::Fail;
                    fail(format!("symbolic: {}", c.label()), detail, None);
                }
            }
            status
        }
    };

    let mut points = 0;
    match sampler.sample_many(cfg, stream) {
        Err(e) => fail("sampling".into(), e.to_string(), None),
        Ok(sampled) => {
            points = sampled.len();
            for p in &sampled {
                for c in &case.conclusions {
                    if let Err(detail) = c.holds_at(p) {
                        fail(c.label(), detail, Some(p));
                    }
                }
            }
        }
    }

    let report = CaseReport {
        string: case.string.clone(),
        param: case.param.clone(),
        points,
        symbolic,
        failures: failures.len(),
    };
    (report, failures)
}

/// Runs the battery for one size. `n` is the string size, except for the
/// multiple-of-four AC theorem where it is the dimension of the AC variety.
/// Each case draws from its own stream, so the report depends only on `cfg`.
pub fn verify_theorem_battery(
    id: TheoremId,
    n: usize,
    cfg: &SampleConfig,
) -> Result<BatteryReport, BatteryError> {
    let cases = build_cases(id, n)?;
    let results: Vec<(CaseReport, Vec<BatteryFailure>)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| run_case(case, cfg, i as u64))
        .collect();
    let mut reports = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (r, f) in results {
        reports.push(r);
        failures.extend(f);
    }
    Ok(BatteryReport {
        theorem: id.id().to_string(),
        statement: id.statement().to_string(),
        n,
        cases: reports,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SampleConfig {
        SampleConfig::new(6, 9, 0xC0FFEE).unwrap()
    }

    #[test]
    fn every_battery_passes_at_small_sizes() {
        for id in TheoremId::ALL {
            let sizes: &[usize] = match id {
                TheoremId::AcMultipleOfFour => &[4, 8],
                TheoremId::QbraValue => &[2, 3],
                _ => &[1, 2, 3],
            };
            for &n in sizes {
                let r = verify_theorem_battery(id, n, &cfg()).unwrap();
                assert!(r.passed(), "{id} n={n}: {:?}", r.failures.first());
                assert!(!r.cases.is_empty());
            }
        }
    }

    #[test]
    fn linear_hypotheses_get_symbolic_checks() {
        let r = verify_theorem_battery(TheoremId::AcMultipleOfFour, 8, &cfg()).unwrap();
        assert!(r.cases.iter().all(|c| c.symbolic == SymbolicStatus::Pass));
        assert_eq!(r.cases.len(), 14);
        let r = verify_theorem_battery(TheoremId::QbraValue, 2, &cfg()).unwrap();
        assert!(r
            .cases
            .iter()
            .all(|c| c.symbolic == SymbolicStatus::NotApplicable));
    }

    #[test]
    fn wrong_sign_is_caught() {
        // Deliberately wrong conclusion: the battery machinery must flag it.
        let b = BracketString::parse("<>()").unwrap();
        let case = Case {
            string: b.render(),
            param: None,
            hypothesis: ang_set(&b, &int(1)).unwrap(),
            conclusions: vec![Conclusion::value(1, 3, int(1))],
            expected_independent: None,
        };
        let (report, failures) = run_case(&case, &cfg(), 0);
        assert_eq!(report.symbolic, SymbolicStatus::Fail);
        assert!(failures.len() > 1);
    }

    #[test]
    fn size_validation() {
        assert_eq!(
            verify_theorem_battery(TheoremId::AcMultipleOfFour, 6, &cfg())
                .unwrap_err()
                .code(),
            "INVALID_SIZE"
        );
        assert_eq!(
            verify_theorem_battery(TheoremId::AngValue, 9, &cfg())
                .unwrap_err()
                .code(),
            "SIZE_GUARD"
        );
        assert!("12.9".parse::<TheoremId>().is_err());
        assert_eq!("9.1".parse::<TheoremId>().unwrap(), TheoremId::AcOdd);
    }

    #[test]
    fn reports_are_reproducible() {
        let a =
            serde_json::to_string(&verify_theorem_battery(TheoremId::BraValue, 3, &cfg()).unwrap())
                .unwrap();
        let b =
            serde_json::to_string(&verify_theorem_battery(TheoremId::BraValue, 3, &cfg()).unwrap())
                .unwrap();
        assert_eq!(a, b);
    }
}
