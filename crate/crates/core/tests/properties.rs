use std::collections::BTreeSet;

use acmoduli::brackets::{enumerate, enumerate_angle_first, minus2, BracketString, Kind};
use acmoduli::continuant::{transfer_product, u_eval, u_poly, u_poly_leftward, IndexRange};
use acmoduli::polyalg::{int, rat, ExactScalar, Monomial, SparsePoly};
use acmoduli::polygons::{det, quad_classify, regular_star, star_admissible, synthesize, Point2};
use acmoduli::polysets::{bra_set, par_set, PolySet};
use acmoduli::transforms::{ass, ass_braket, ass_tbra, ass_to_qbra, ass_to_tbra, bra};
use acmoduli::varieties::{on_ac, random_ac_point};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = ExactScalar> {
    (-12i64..=12, 1i64..=6).prop_map(|(a, b)| rat(a, b))
}

fn poly(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    let term = (prop::collection::vec(0u32..3, nvars), rational());
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        SparsePoly::from_terms(terms.into_iter().map(|(exps, c)| {
            (
                Monomial::from_exponents(exps.into_iter().enumerate().map(|(i, e)| (i + 1, e))),
                c,
            )
        }))
        .with_nvars(nvars)
    })
}

/// Determinant by cofactor expansion along the first row.
fn laplace_det(m: &[Vec<ExactScalar>]) -> ExactScalar {
    match m.len() {
        0 => ExactScalar::one(),
        1 => m[0][0].clone(),
        n => {
            let mut total = ExactScalar::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<ExactScalar>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].clone() * laplace_det(&minor);
                total = if col % 2 == 0 {
                    total + term
                } else {
                    total - term
                };
            }
            total
        }
    }
}

fn tridiagonal(xs: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        xs[i].clone()
                    } else if i.abs_diff(j) == 1 {
                        int(-1)
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert!((a.clone() - a.clone()).is_zero());
    }

    #[test]
    fn eval_is_a_homomorphism(a in poly(3), b in poly(3), pt in prop::collection::vec(rational(), 3)) {
        let ev = |p: &SparsePoly| p.eval(&pt).unwrap();
        prop_assert_eq!(ev(&(a.clone() * b.clone())), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(a.clone() + b.clone())), ev(&a) + ev(&b));
    }

    #[test]
    fn text_and_json_round_trip(a in poly(4)) {
        let back: SparsePoly = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(SparsePoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn continuant_is_tridiagonal_determinant(xs in prop::collection::vec(rational(), 0..8)) {
        prop_assert_eq!(u_eval(&xs), laplace_det(&tridiagonal(&xs)));
    }

    #[test]
    fn transfer_products_are_unimodular(xs in prop::collection::vec(rational(), 1..10)) {
        let m = transfer_product(&xs);
        prop_assert_eq!(m.det(), int(1));
    }

    #[test]
    fn parse_accepts_exactly_balanced_round_strings(bits in prop::collection::vec(any::<bool>(), 1..14)) {
        let text: String = bits.iter().map(|&b| if b { '(' } else { ')' }).collect();
        let mut depth = 0i32;
        let balanced = bits.iter().all(|&b| {
            depth += if b { 1 } else { -1 };
            depth >= 0
        }) && depth == 0;
        prop_assert_eq!(BracketString::parse(&text).is_ok(), balanced);
    }

    #[test]
    fn exact_ac_points_give_closed_equal_area_chains(
        n in 5usize..=9,
        seed in any::<u64>(),
        basis in prop::collection::vec(-5i64..=5, 4),
    ) {
        let p0 = Point2::new(int(basis[0]), int(basis[1]));
        let p1 = Point2::new(int(basis[2]), int(basis[3]));
        prop_assume!(!det(&p0, &p1).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let point = random_ac_point(n, 8, &mut rng).unwrap();
        prop_assert!(on_ac(&point));
        let chain = synthesize(&point, p0.clone(), p1.clone()).unwrap();
        prop_assert!(chain.closed);
        let base = det(&p0, &p1);
        for a in chain.area_report().areas {
            prop_assert_eq!(&a, &base);
        }
    }

    #[test]
    fn quad_classifier_agrees_with_center_solver(
        coords in prop::collection::vec(-6i64..=6, 6),
        t in rational(),
        mode in 0u8..3,
    ) {
        let p0 = Point2::new(int(coords[0]), int(coords[1]));
        let p1 = Point2::new(int(coords[2]), int(coords[3]));
        let p2 = Point2::new(int(coords[4]), int(coords[5]));
        let half = rat(1, 2);
        let p3 = match mode {
            // on the line through p1 and the midpoint of p0 p2
            0 => {
                let m = p0.add(&p2).scale(&half);
                p1.add(&m.sub(&p1).scale(&t))
            }
            // midpoint of p1 p3 on the line p0 p2
            1 => {
                let m = p0.add(&p2.sub(&p0).scale(&t));
                m.scale(&int(2)).sub(&p1)
            }
            _ => Point2::new(t.clone(), t.clone() * rat(3, 7) + int(coords[0])),
        };
        let quad = [p0, p1, p2, p3];
        prop_assume!(!quad_classify(&quad).degenerate);
        prop_assert_eq!(quad_classify(&quad).verdict.has_center(), center_exists(&quad));
    }
}

/// Solves `[p_i − c, p_{i+1} − c]` all equal for `c` and reports whether some
/// solution gives a nonzero common value.
fn center_exists(p: &[Point2<ExactScalar>; 4]) -> bool {
    let area = |i: usize, c: &Point2<ExactScalar>| det(&p[i].sub(c), &p[(i + 1) % 4].sub(c));
    let origin = Point2::new(int(0), int(0));
    let ex = Point2::new(int(1), int(0));
    let ey = Point2::new(int(0), int(1));
    // A_i(c) − A_{i+1}(c) is affine in c: rows [a, b | r] with a cx + b cy = r.
    let mut rows: Vec<[ExactScalar; 3]> = (0..3)
        .map(|i| {
            let g = |c: &Point2<ExactScalar>| area(i, c) - area(i + 1, c);
            let g0 = g(&origin);
            [g(&ex) - g0.clone(), g(&ey) - g0.clone(), -g0]
        })
        .collect();
    // Gaussian elimination on the 3x2 system.
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..2 {
        let Some(pr) = (r..3).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let lead = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[2].is_zero()) {
        return false;
    }
    // Particular solution plus, when underdetermined, extra points on the solution set.
    let particular = |free: ExactScalar| {
        let mut c = [int(0), int(0)];
        let free_col = (0..2).find(|col| !pivots.contains(col));
        if let Some(fc) = free_col {
            c[fc] = free.clone();
        }
        for (row, &col) in pivots.iter().enumerate() {
            let other = 1 - col;
            let shift = if pivots.contains(&other) {
                int(0)
            } else {
                rows[row][other].clone() * c[other].clone()
            };
            c[col] = rows[row][2].clone() - shift;
        }
        Point2::new(c[0].clone(), c[1].clone())
    };
    [int(0), int(1), int(-3)]
        .into_iter()
        .any(|s| !area(0, &particular(s)).is_zero())
}

#[test]
fn recurrences_agree_up_to_ten() {
    for n in 1..=10 {
        for lo in 1..=n {
            for hi in lo - 1..=n {
                let r = IndexRange::new(lo, hi).unwrap();
                assert_eq!(
                    u_poly(r, n).unwrap(),
                    u_poly_leftward(r, n).unwrap(),
                    "u[{lo},{hi}]"
                );
            }
        }
    }
}

#[test]
fn partial_derivatives_factor_up_to_eight() {
    for n in 1..=8 {
        let full = u_poly(IndexRange::new(1, n).unwrap(), n).unwrap();
        for k in 1..=n {
            let left = u_poly(IndexRange::new(1, k - 1).unwrap(), n).unwrap();
            let right = u_poly(IndexRange::new(k + 1, n).unwrap(), n).unwrap();
            assert_eq!(full.partial_derivative(k), left * right, "n={n} k={k}");
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn par_counts_are_catalan() {
    for n in 1..=8 {
        let catalan = binomial(2 * n as u64, n as u64) / (n as u64 + 1);
        assert_eq!(
            enumerate(Kind::Par, n).unwrap().len() as u64,
            catalan,
            "n={n}"
        );
    }
}

/// Content by scanning: position `m` belongs to whichever segment is open
/// after reading `b_1..b_m`. Returns round contents keyed by opener and the
/// special segments in order.
type Contents = (Vec<(usize, BTreeSet<usize>)>, Vec<BTreeSet<usize>>);

fn scan_content(text: &str) -> Contents {
    let chars: Vec<char> = text.chars().collect();
    let mut stack: Vec<(bool, usize)> = Vec::new();
    let mut rounds: Vec<(usize, BTreeSet<usize>)> = Vec::new();
    let mut special: Vec<BTreeSet<usize>> = Vec::new();
    for m in 1..chars.len() {
        match chars[m - 1] {
            '(' => {
                rounds.push((m, BTreeSet::new()));
                stack.push((false, rounds.len() - 1));
            }
            '<' => {
                special.push(BTreeSet::new());
                stack.push((true, special.len() - 1));
            }
            '|' => {
                stack.pop();
                special.push(BTreeSet::new());
                stack.push((true, special.len() - 1));
            }
            _ => {
                stack.pop();
            }
        }
        match stack.last() {
            Some(&(false, idx)) => {
                rounds[idx].1.insert(m);
            }
            Some(&(true, idx)) => {
                special[idx].insert(m);
            }
            None => {}
        }
    }
    (rounds, special)
}

/// Maximum nesting depth between `i` and its partner.
fn depth_rank(text: &str, i: usize) -> usize {
    let mut depth = 0usize;
    let mut best = 0;
    for c in text.chars().skip(i - 1) {
        if c == '(' {
            depth += 1;
            best = best.max(depth);
        } else if c == ')' {
            depth -= 1;
            if depth == 0 {
                break;
            }
        }
    }
    best
}

#[test]
fn content_matches_scanning_oracle() {
    for kind in Kind::ALL {
        let max_n = if kind == Kind::Par { 6 } else { 4 };
        let min_n = if kind == Kind::Qbra { 2 } else { 1 };
        for n in min_n..=max_n {
            for b in enumerate(kind, n).unwrap() {
                let text = b.render();
                let cm = b.content();
                let (rounds, special) = scan_content(&text);
                let rounds: Vec<_> = rounds.into_iter().filter(|(_, s)| !s.is_empty()).collect();
                let ours: Vec<_> = cm.rounds.iter().map(|(k, v)| (*k, v.clone())).collect();
                assert_eq!(ours, rounds, "{text}");
                assert_eq!(cm.special, special, "{text}");
                for (i, _) in &ours {
                    assert_eq!(
                        b.rank(*i).unwrap(),
                        depth_rank(&text, *i),
                        "{text} rank at {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn par_contents_are_parity_homogeneous_and_disjoint() {
    let mut strings_at_six = 0;
    for n in 1..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let cm = b.content();
            let mut seen = BTreeSet::new();
            for set in cm.rounds.values() {
                let parities: BTreeSet<usize> = set.iter().map(|m| m % 2).collect();
                assert_eq!(parities.len(), 1, "{b}");
                for m in set {
                    assert!(seen.insert(*m), "{b}: {m} repeated");
                    assert!(*m >= 1 && *m < b.len());
                }
            }
            if n == 6 {
                strings_at_six += 1;
            }
        }
    }
    assert_eq!(strings_at_six, 132);
}

#[test]
fn parse_render_round_trip() {
    for kind in Kind::ALL {
        let min_n = if kind == Kind::Qbra { 2 } else { 1 };
        for n in min_n..=5 {
            for b in enumerate(kind, n).unwrap() {
                let back = BracketString::parse(&b.render()).unwrap();
                assert_eq!(back.kind(), kind);
                assert_eq!(back.n(), n);
                assert_eq!(back, b);
            }
        }
    }
}

fn sorted_sets(sets: impl IntoIterator<Item = BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    let mut v: Vec<_> = sets.into_iter().collect();
    v.sort();
    v
}

#[test]
fn collapse_shifts_contents_by_minus_two() {
    for n in 2..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let cm = b.content();
            for k in b.collapsible_positions() {
                let collapsed = b.collapse(k).unwrap();
                assert_eq!(collapsed.n(), n - 1);
                let expected = sorted_sets(
                    cm.rounds
                        .iter()
                        .filter(|(j, _)| **j != k)
                        .map(|(_, s)| s.iter().map(|&m| minus2(k, m)).collect()),
                );
                let got = sorted_sets(collapsed.content().rounds.into_values());
                assert_eq!(got, expected, "{b} at {k}");
            }
        }
    }
}

fn poly_strings(polys: &[SparsePoly]) -> BTreeSet<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

#[test]
fn collapse_pullback_drops_exactly_x_k() {
    for n in 2..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let fb = par_set(&b).unwrap();
            for k in b.collapsible_positions() {
                let pulled = par_set(&b.collapse(k).unwrap())
                    .unwrap()
                    .pullback_collapse(k);
                let mut expected = poly_strings(&fb.to_polys());
                assert!(
                    expected.remove(&SparsePoly::var(k).to_string()),
                    "{b}: x{k} not in f_b"
                );
                assert_eq!(poly_strings(&pulled), expected, "{b} at {k}");
            }
        }
    }
}

#[test]
fn par_sets_are_independent_and_round_trip() {
    for n in 1..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let s = par_set(&b).unwrap();
            assert_eq!(s.len(), n);
            assert_eq!(s.linear_rank(), n);
            let back = PolySet::from_polys(s.ambient, &s.to_polys()).unwrap();
            assert_eq!(back.form_set(), s.form_set());
        }
    }
}

fn slice(text: &str, lo: usize, hi: usize) -> String {
    if lo > hi {
        return String::new();
    }
    text.chars().skip(lo - 1).take(hi + 1 - lo).collect()
}

fn positions(text: &str, c: char) -> Vec<usize> {
    text.chars()
        .enumerate()
        .filter(|(_, x)| *x == c)
        .map(|(i, _)| i + 1)
        .collect()
}

/// The piecewise index definitions, applied by string slicing.
mod sliced {
    use super::{positions, slice};
    use acmoduli::brackets::BracketString;

    pub fn ass(b: &BracketString) -> String {
        let t = b.render();
        let i = b.partner(1).unwrap();
        format!("{}({})", slice(&t, 2, i - 1), slice(&t, i + 1, t.len()))
    }

    pub fn bra(b: &BracketString) -> String {
        let t = b.render();
        let i = b.partner(1).unwrap();
        format!("<{}|{}>", slice(&t, 2, i - 1), slice(&t, i + 1, t.len()))
    }

    pub fn ass_braket(t: &str) -> String {
        let i = positions(t, '|')[0];
        let j = positions(t, '>')[0];
        format!(
            "{}<{}|{}>",
            slice(t, 2, i - 1),
            slice(t, i + 1, j - 1),
            slice(t, j + 1, t.len())
        )
    }

    pub fn ass_to_tbra(t: &str) -> String {
        let i = positions(t, '|')[0];
        let j = positions(t, '>')[0];
        format!(
            "<{}|{}|{}>",
            slice(t, 2, i - 1),
            slice(t, i + 1, j - 1),
            slice(t, j + 1, t.len())
        )
    }

    pub fn ass_tbra(t: &str) -> String {
        let bars = positions(t, '|');
        let (i, j, k) = (bars[0], bars[1], positions(t, '>')[0]);
        format!(
            "{}<{}|{}|{}>",
            slice(t, 2, i - 1),
            slice(t, i + 1, j - 1),
            slice(t, j + 1, k - 1),
            slice(t, k + 1, t.len())
        )
    }

    pub fn ass_to_qbra(t: &str) -> String {
        let bars = positions(t, '|');
        let (i, j, k) = (bars[0], bars[1], positions(t, '>')[0]);
        format!(
            "<{}|{}|{}|{}>",
            slice(t, 2, i - 1),
            slice(t, i + 1, j - 1),
            slice(t, j + 1, k - 1),
            slice(t, k + 1, t.len())
        )
    }
}

fn revalidate(out: &BracketString, kind: Kind) {
    let again = BracketString::parse(&out.render()).unwrap();
    assert_eq!(again.kind(), kind);
    assert_eq!(&again, out);
}

#[test]
fn transforms_match_slicing_oracle_and_revalidate() {
    for n in 1..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let a = ass(&b).unwrap();
            assert_eq!(a.render(), sliced::ass(&b), "ass {b}");
            revalidate(&a, Kind::Par);
            let k = bra(&b).unwrap();
            assert_eq!(k.render(), sliced::bra(&b), "bra {b}");
            assert_eq!(k.len(), 2 * n + 1);
            revalidate(&k, Kind::Bra);
        }
    }
    for n in 1..=5 {
        for b in enumerate_angle_first(Kind::Bra, n).unwrap() {
            let t = b.render();
            let a = ass_braket(&b).unwrap();
            assert_eq!(a.render(), sliced::ass_braket(&t), "ass_braket {t}");
            revalidate(&a, Kind::Bra);
            let c = ass_to_tbra(&b).unwrap();
            assert_eq!(c.render(), sliced::ass_to_tbra(&t), "ass_to_tbra {t}");
            revalidate(&c, Kind::Tbra);
        }
        for b in enumerate_angle_first(Kind::Tbra, n).unwrap() {
            let t = b.render();
            let a = ass_tbra(&b).unwrap();
            assert_eq!(a.render(), sliced::ass_tbra(&t), "ass_tbra {t}");
            assert_eq!(a.len(), 2 * n + 2);
            revalidate(&a, Kind::Tbra);
            let q = ass_to_qbra(&b).unwrap();
            assert_eq!(q.render(), sliced::ass_to_qbra(&t), "ass_to_qbra {t}");
            assert_eq!(q.len(), 2 * n + 3);
            revalidate(&q, Kind::Qbra);
        }
    }
}

#[test]
fn ass_overlap_has_union_n_plus_one() {
    for n in 1..=6 {
        for b in enumerate(Kind::Par, n).unwrap() {
            let fb = par_set(&b).unwrap();
            let shifted = par_set(&ass(&b).unwrap()).unwrap().shift_plus_one();
            let (lo, hi) = (2, 2 * n - 1);
            assert_eq!(fb.within(lo, hi), shifted.within(lo, hi), "{b}");
            assert_eq!(fb.outside(lo, hi).len(), 1, "{b}");
            assert_eq!(shifted.outside(lo, hi).len(), 1, "{b}");
            assert_eq!(fb.union(&shifted).len(), n + 1, "{b}");
        }
    }
}

#[test]
fn braket_overlap_has_union_n_plus_one() {
    for c in [int(0), int(1), rat(3, 7)] {
        for n in 1..=5 {
            for b in enumerate_angle_first(Kind::Bra, n).unwrap() {
                let fb = bra_set(&b, &c).unwrap();
                let shifted = bra_set(&ass_braket(&b).unwrap(), &c)
                    .unwrap()
                    .shift_plus_one();
                let (lo, hi) = (2, 2 * n);
                assert_eq!(fb.within(lo, hi), shifted.within(lo, hi), "{b}");
                assert_eq!(fb.outside(lo, hi).len(), 1, "{b}");
                assert_eq!(shifted.outside(lo, hi).len(), 1, "{b}");
                assert_eq!(fb.union(&shifted).len(), n + 1, "{b}");
            }
        }
    }
}

#[test]
fn stars_close_for_every_admissible_pair() {
    for n in 3..=12 {
        for k in 0..=n {
            match regular_star(n, k) {
                Ok(star) => {
                    assert!(star_admissible(n, k));
                    assert!(star.closed && star.closure_residual < 1e-9, "{{{n}/{k}}}");
                    let report = star.area_report();
                    assert!(
                        report.common.is_some() && report.max_deviation < 1e-9,
                        "{{{n}/{k}}}"
                    );
                }
                Err(_) => assert!(!star_admissible(n, k)),
            }
        }
    }
}
