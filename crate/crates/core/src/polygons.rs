//! Polygons with the origin as area center, built from the vertex recurrence
//! `p_{i+1} = a_i p_i − p_{i−1}`; area reports, the quadrilateral criteria,
//! regular stars, and SVG / JSON output.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::polyalg::{parse_rational, ExactScalar, Ring};

pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("DEGENERATE_BASIS: [p0, p1] = 0")]
    DegenerateBasis,
    #[error("TOO_FEW_VERTICES: need at least 3 coefficients, got {0}")]
    TooFewVertices(usize),
    #[error("STAR_RANGE: {{{n}/{k}}} needs n >= 3, 1 <= k <= n-1 and 2k != n")]
    StarRange { n: usize, k: usize },
    #[error("JSON: {0}")]
    Json(String),
}

impl PolygonError {
    pub fn code(&self) -> &'static str {
        match self {
            PolygonError::DegenerateBasis => "DEGENERATE_BASIS",
            PolygonError::TooFewVertices(_) => "TOO_FEW_VERTICES",
            PolygonError::StarRange { .. } => "STAR_RANGE",
            PolygonError::Json(_) => "JSON",
        }
    }
}

/// Coordinates: exact rationals or 64-bit floats.
pub trait Coord: Ring + PartialEq + fmt::Debug + Send + Sync {
    const MODE: &'static str;

    fn to_f64(&self) -> f64;
    fn approx_eq(&self, other: &Self) -> bool;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;

    fn approx_zero(&self) -> bool {
        self.approx_eq(&Self::zero())
    }
}

impl Coord for ExactScalar {
    const MODE: &'static str = "exact";

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Option<Self> {
        parse_rational(v.as_str()?).ok()
    }
}

impl Coord for f64 {
    const MODE: &'static str = "float";

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOLERANCE * (1.0 + self.abs().max(other.abs()))
    }

    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Option<Self> {
        v.as_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Coord> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn scale(&self, a: &T) -> Self {
        Point2::new(a.clone() * self.x.clone(), a.clone() * self.y.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point2::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Point2::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.x.approx_eq(&o.x) && self.y.approx_eq(&o.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// `[p, q]`, twice the signed area of the triangle `(0, p, q)`.
pub fn det<T: Coord>(p: &Point2<T>, q: &Point2<T>) -> T {
    p.x.clone() * q.y.clone() - p.y.clone() * q.x.clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolygonChain<T> {
    pub vertices: Vec<Point2<T>>,
    /// Generating coefficients; empty for a chain given by its vertices.
    pub coeffs: Vec<T>,
    /// Whether the recurrence returns to `p_0, p_1` after `n` steps (always
    /// true for a chain given by its vertices).
    pub closed: bool,
    /// Distance of `(p_n, p_{n+1})` from `(p_0, p_1)`, largest coordinate.
    pub closure_residual: f64,
}

pub fn synthesize<T: Coord>(
    coeffs: &[T],
    p0: Point2<T>,
    p1: Point2<T>,
) -> Result<PolygonChain<T>, PolygonError> {
    let n = coeffs.len();
    if n < 3 {
        return Err(PolygonError::TooFewVertices(n));
    }
    if det(&p0, &p1).approx_zero() {
        return Err(PolygonError::DegenerateBasis);
    }
    let mut pts = vec![p0, p1];
    for a in coeffs {
        let k = pts.len();
        let next = pts[k - 1].scale(a).sub(&pts[k - 2]);
        pts.push(next);
    }
    let residual = [(&pts[n], &pts[0]), (&pts[n + 1], &pts[1])]
        .iter()
        .map(|(a, b)| {
            let d = a.sub(b);
            d.x.to_f64().abs().max(d.y.to_f64().abs())
        })
        .fold(0.0, f64::max);
    let closed = pts[n].approx_eq(&pts[0]) && pts[n + 1].approx_eq(&pts[1]);
    pts.truncate(n);
    Ok(PolygonChain {
        vertices: pts,
        coeffs: coeffs.to_vec(),
        closed,
        closure_residual: residual,
    })
}

impl<T: Coord> PolygonChain<T> {
    pub fn from_vertices(vertices: Vec<Point2<T>>) -> Self {
        PolygonChain {
            vertices,
            coeffs: Vec::new(),
            closed: true,
            closure_residual: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area_report(&self) -> AreaReport<T> {
        let n = self.vertices.len();
        let areas: Vec<T> = (0..n)
            .map(|i| det(&self.vertices[i], &self.vertices[(i + 1) % n]))
            .collect();
        let first = areas[0].clone();
        let all_equal = areas.iter().all(|a| a.approx_eq(&first));
        let max_deviation = areas
            .iter()
            .map(|a| (a.to_f64() - first.to_f64()).abs())
            .fold(0.0, f64::max);
        let common = (all_equal && !first.approx_zero()).then_some(first);
        AreaReport {
            areas,
            common,
            max_deviation,
        }
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &Point2<T>| json!([p.x.to_json(), p.y.to_json()]);
        json!({
            "mode": T::MODE,
            "coeffs": self.coeffs.iter().map(Coord::to_json).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(pt).collect::<Vec<_>>(),
            "closed": self.closed,
            "closure_residual": self.closure_residual,
            "areas": self.area_report().areas.iter().map(Coord::to_json).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds a chain from [`PolygonChain::to_json`] output.
    pub fn from_json(v: &Value) -> Result<Self, PolygonError> {
        let err = |m: &str| PolygonError::Json(m.to_string());
        if v["mode"].as_str() != Some(T::MODE) {
            return Err(err("mode mismatch"));
        }
        let scalars = |key: &str| -> Result<Vec<T>, PolygonError> {
            v[key]
                .as_array()
                .ok_or_else(|| err(&format!("missing '{key}'")))?
                .iter()
                .map(|x| T::from_json(x).ok_or_else(|| err(&format!("bad number in '{key}'"))))
                .collect()
        };
        let coeffs = scalars("coeffs")?;
        let vertices = v["vertices"]
            .as_array()
            .ok_or_else(|| err("missing 'vertices'"))?
            .iter()
            .map(|p| {
                let x = T::from_json(&p[0]).ok_or_else(|| err("bad vertex"))?;
                let y = T::from_json(&p[1]).ok_or_else(|| err("bad vertex"))?;
                Ok(Point2::new(x, y))
            })
            .collect::<Result<Vec<_>, PolygonError>>()?;
        let closed = v["closed"]
            .as_bool()
            .ok_or_else(|| err("missing 'closed'"))?;
        let closure_residual = v["closure_residual"].as_f64().unwrap_or(0.0);
        Ok(PolygonChain {
            vertices,
            coeffs,
            closed,
            closure_residual,
        })
    }

    /// SVG 1.1 drawing: the `n` triangles fanned from the origin, the chain,
    /// and a marker at the origin. The y axis points up.
    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> = self
            .vertices
            .iter()
            .map(|p| p.to_f64())
            .map(|(x, y)| (x, -y))
            .collect();
        let xs = pts.iter().map(|p| p.0).chain([0.0]);
        let ys = pts.iter().map(|p| p.1).chain([0.0]);
        let (min_x, max_x) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        let (min_y, max_y) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
        let margin = 0.05 * span;
        let (vx, vy) = (min_x - margin, min_y - margin);
        let (vw, vh) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);
        let stroke = span / 200.0;
        let coords = |ps: &[(f64, f64)]| {
            ps.iter()
                .map(|(x, y)| format!("{x:.6},{y:.6}"))
                .collect::<Vec<_>>()
                .join(" ")
        };

        let mut svg = String::new();
        let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            svg,
            r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}" width="600" height="600">"##
        );
        let _ = writeln!(
            svg,
            r##"  <g fill="#4a90d9" fill-opacity="0.18" stroke="none">"##
        );
        let n = pts.len();
        for i in 0..n {
            let tri = [(0.0, 0.0), pts[i], pts[(i + 1) % n]];
            let _ = writeln!(svg, r##"    <polygon points="{}"/>"##, coords(&tri));
        }
        let _ = writeln!(svg, "  </g>");
        let _ = writeln!(
            svg,
            r##"  <polygon points="{}" fill="none" stroke="#1a1a1a" stroke-width="{stroke:.6}" stroke-linejoin="round"/>"##,
            coords(&pts)
        );
        let _ = writeln!(
            svg,
            r##"  <circle cx="0" cy="0" r="{:.6}" fill="#d0021b"/>"##,
            stroke * 3.0
        );
        let _ = writeln!(svg, "</svg>");
        svg
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AreaReport<T> {
    /// `[p_i, p_{i+1}]` for `i = 0..n−1`, wrapping around.
    pub areas: Vec<T>,
    /// The shared value when all areas agree and are nonzero.
    pub common: Option<T>,
    pub max_deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadVerdict {
    MidpointOf02OnLine13,
    MidpointOf13OnLine02,
    None,
}

impl QuadVerdict {
    pub fn code(self) -> &'static str {
        match self {
            QuadVerdict::MidpointOf02OnLine13 => "HAS_CENTER_VIA_119",
            QuadVerdict::MidpointOf13OnLine02 => "HAS_CENTER_VIA_120",
            QuadVerdict::None => "NONE",
        }
    }

    pub fn has_center(self) -> bool {
        self != QuadVerdict::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadClassification {
    pub verdict: QuadVerdict,
    /// Midpoint of `p0 p2` lies on the line `p1 p3`.
    pub midpoint_02_on_13: bool,
    /// Midpoint of `p1 p3` lies on the line `p0 p2`.
    pub midpoint_13_on_02: bool,
    /// Some three cyclically consecutive vertices are collinear.
    pub degenerate: bool,
}

fn collinear<T: Coord>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>) -> bool {
    det(&b.sub(a), &c.sub(a)).approx_zero()
}

/// `mid` on the line through distinct `a`, `b`; doubled to stay in the ring.
fn midpoint_on_line<T: Coord>(e: &Point2<T>, f: &Point2<T>, a: &Point2<T>, b: &Point2<T>) -> bool {
    if a.approx_eq(b) {
        return false;
    }
    let twice_mid = e.add(f);
    let d = b.sub(a);
    let rel = twice_mid.sub(&a.add(a));
    det(&d, &rel).approx_zero()
}

/// Whether the quadrilateral has an area center, through the two midpoint
/// criteria. When both hold the first is reported.
pub fn quad_classify<T: Coord>(p: &[Point2<T>; 4]) -> QuadClassification {
    let a = midpoint_on_line(&p[0], &p[2], &p[1], &p[3]);
    let b = midpoint_on_line(&p[1], &p[3], &p[0], &p[2]);
    let degenerate = (0..4).any(|i| collinear(&p[i], &p[(i + 1) % 4], &p[(i + 2) % 4]));
    let verdict = if a {
        QuadVerdict::MidpointOf02OnLine13
    } else if b {
        QuadVerdict::MidpointOf13OnLine02
    } else {
        QuadVerdict::None
    };
    QuadClassification {
        verdict,
        midpoint_02_on_13: a,
        midpoint_13_on_02: b,
        degenerate,
    }
}

/// `2 cos(2kπ/n)`, the common coefficient of the star `{n/k}`.
pub fn star_coefficient(n: usize, k: usize) -> f64 {
    2.0 * (2.0 * PI * k as f64 / n as f64).cos()
}

pub fn star_admissible(n: usize, k: usize) -> bool {
    n >= 3 && k >= 1 && k < n && 2 * k != n
}

/// The regular star `{n/k}` on the unit circle, starting at `(1, 0)`.
pub fn regular_star(n: usize, k: usize) -> Result<PolygonChain<f64>, PolygonError> {
    if !star_admissible(n, k) {
        return Err(PolygonError::StarRange { n, k });
    }
    let theta = 2.0 * PI * k as f64 / n as f64;
    let c = star_coefficient(n, k);
    synthesize(
        &vec![c; n],
        Point2::new(1.0, 0.0),
        Point2::new(theta.cos(), theta.sin()),
    )
}

/// True when the exact chain closes and every area equals `[p_0, p_1]`.
pub fn is_exact_area_centered(chain: &PolygonChain<ExactScalar>) -> bool {
    let report = chain.area_report();
    let base = det(&chain.vertices[0], &chain.vertices[1]);
    chain.closed && !base.is_zero() && report.areas.iter().all(|a| *a == base)
}
