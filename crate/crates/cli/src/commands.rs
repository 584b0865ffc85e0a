use std::fs;
use std::path::Path;
use std::str::FromStr;

use acmoduli::brackets::{enumerate, BracketString, Kind};
use acmoduli::continuant::{u_eval, u_poly, verify_identities, IndexRange, Status};
use acmoduli::polyalg::{parse_rational, ExactScalar};
use acmoduli::polygons::{
    quad_classify, regular_star, star_coefficient, synthesize, Coord, Point2, PolygonChain,
};
use acmoduli::polysets::{PolySet, Style};
use acmoduli::transforms::Transform;
use acmoduli::varieties::{
    ac_residuals, certificate_check, jacobian_rank, on_ac, rational_parametrization,
    verify_theorem_battery, SampleConfig, Sampler, TheoremId,
};
use serde_json::{json, Value};

use crate::args::{Command, GlobalOpts, UCommand};
use crate::report::{CliError, Report};

const FLOAT_TOLERANCE: f64 = 1e-9;

pub fn dispatch(cmd: &Command, g: &GlobalOpts) -> Result<Report, CliError> {
    match cmd {
        Command::U {
            action: UCommand::Eval { values },
        } => u_eval_cmd(values),
        Command::U {
            action: UCommand::Poly { range, nvars },
        } => u_poly_cmd(range[0], range[1], *nvars),
        Command::Identities { nmax } => identities(*nmax),
        Command::Parse { string } => parse_cmd(string),
        Command::Content { string } => content(string),
        Command::Rank { string } => rank(string),
        Command::Enumerate { kind, n } => enumerate_cmd(kind, *n),
        Command::Transform { kind, string } => transform(kind, string),
        Command::Polyset {
            string,
            style,
            constant,
        } => polyset(string, style, constant),
        Command::Sample {
            string,
            style,
            constant,
        } => sample(string, style, constant, g),
        Command::Check { theorem, n } => check(theorem, *n, g),
        Command::Groebner { n } => groebner(*n),
        Command::Parametrize { n, tail } => parametrize(*n, tail),
        Command::Polygon {
            coeffs,
            p0,
            p1,
            float,
            svg,
        } => polygon(coeffs, p0, p1, *float, svg.as_deref()),
        Command::Star { n, k, svg } => star(*n, *k, svg.as_deref()),
        Command::Quad { points } => quad(points),
    }
}

fn rational(s: &str) -> Result<ExactScalar, CliError> {
    Ok(parse_rational(s)?)
}

fn rationals(values: &[String]) -> Result<Vec<ExactScalar>, CliError> {
    values.iter().map(|v| rational(v)).collect()
}

fn bracket(s: &str) -> Result<BracketString, CliError> {
    Ok(BracketString::parse(s)?)
}

fn parsed<T: FromStr<Err = String>>(s: &str) -> Result<T, CliError> {
    T::from_str(s).map_err(CliError::usage)
}

fn strings(values: &[ExactScalar]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn tuple(values: &[ExactScalar]) -> String {
    format!("({})", strings(values).join(", "))
}

fn sample_config(g: &GlobalOpts) -> Result<SampleConfig, CliError> {
    Ok(SampleConfig::new(g.count, g.height, g.seed)?)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::new("IO", format!("{}: {e}", path.display())))
}

fn u_eval_cmd(values: &[String]) -> Result<Report, CliError> {
    let xs = rationals(values)?;
    let v = u_eval(&xs);
    let mut r = Report::new("u eval", json!({ "values": strings(&xs) }));
    r.line(format!("u[1,{}] = {v}", xs.len()));
    r.result(json!({ "n": xs.len(), "value": v.to_string() }));
    Ok(r)
}

fn u_poly_cmd(lo: usize, hi: usize, nvars: usize) -> Result<Report, CliError> {
    let range = IndexRange::new(lo, hi)?;
    let p = u_poly(range, nvars)?;
    let mut r = Report::new("u poly", json!({ "range": [lo, hi], "nvars": nvars }));
    r.line(format!("{range} = {p}"));
    r.result(json!({ "range": range.to_string(), "poly": p.to_string(), "terms": p.to_json() }));
    Ok(r)
}

fn identities(nmax: usize) -> Result<Report, CliError> {
    let report = verify_identities(nmax);
    let mut r = Report::new("identities", json!({ "nmax": nmax }));
    let mut names: Vec<&str> = Vec::new();
    for c in &report.checks {
        if !names.contains(&c.identity.as_str()) {
            names.push(&c.identity);
        }
        let v = serde_json::to_value(c).expect("identity check serializes");
        if c.status == Status::Fail {
            r.failure(v.clone());
        }
        r.result(v);
    }
    for name in names {
        let checks: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.identity == name)
            .collect();
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        let status = if failed == 0 { "pass" } else { "FAIL" };
        r.line(format!("{name:<22} {:>4} checks  {status}", checks.len()));
    }
    for f in report.checks.iter().filter(|c| c.status == Status::Fail) {
        r.line(format!(
            "failed: {} n={} {}",
            f.identity,
            f.n,
            f.detail.as_deref().unwrap_or("")
        ));
    }
    r.line(format!(
        "{} checks, {} failed",
        report.checks.len(),
        r.failures.len()
    ));
    Ok(r)
}

fn parse_cmd(s: &str) -> Result<Report, CliError> {
    let b = bracket(s)?;
    let pairs: Vec<[usize; 2]> = b
        .round_lefts()
        .into_iter()
        .map(|i| [i, b.partner(i).expect("left bracket")])
        .collect();
    let chain = b.matching().chain().to_vec();
    let mut r = Report::new("parse", json!({ "string": s }));
    r.line(format!(
        "{b}: kind {}, n = {}, length {}",
        b.kind().name(),
        b.n(),
        b.len()
    ));
    let rendered: Vec<String> = pairs.iter().map(|[i, j]| format!("{i}-{j}")).collect();
    r.line(format!("round pairs: {}", rendered.join(" ")));
    if !chain.is_empty() {
        let rendered: Vec<String> = chain.iter().map(|i| i.to_string()).collect();
        r.line(format!("angle chain: {}", rendered.join(" -> ")));
    }
    r.result(json!({
        "string": b.render(),
        "kind": b.kind().name(),
        "n": b.n(),
        "length": b.len(),
        "pairs": pairs,
        "chain": chain,
    }));
    Ok(r)
}

fn content(s: &str) -> Result<Report, CliError> {
    let b = bracket(s)?;
    let cm = b.content();
    let mut r = Report::new("content", json!({ "string": s }));
    r.line(cm.to_string());
    r.result(json!({
        "string": b.render(),
        "content": cm,
        "rendered": cm.to_string(),
        "num": cm.num(),
    }));
    Ok(r)
}

fn rank(s: &str) -> Result<Report, CliError> {
    let b = bracket(s)?;
    let mut r = Report::new("rank", json!({ "string": s }));
    let mut ranks = serde_json::Map::new();
    for i in b.round_lefts() {
        let k = b.rank(i)?;
        r.line(format!("b{i}: rank {k}"));
        ranks.insert(i.to_string(), json!(k));
    }
    r.line(format!("height {}", b.height()));
    r.result(json!({ "string": b.render(), "ranks": ranks, "height": b.height() }));
    Ok(r)
}

fn enumerate_cmd(kind: &str, n: usize) -> Result<Report, CliError> {
    let k: Kind = parsed(kind)?;
    let all = enumerate(k, n)?;
    let mut r = Report::new("enumerate", json!({ "kind": k.name(), "n": n }));
    for b in &all {
        r.line(b.render());
        r.result(json!(b.render()));
    }
    Ok(r)
}

fn transform(kind: &str, s: &str) -> Result<Report, CliError> {
    let t: Transform = parsed(kind)?;
    let b = bracket(s)?;
    let out = t.apply(&b)?;
    let mut r = Report::new("transform", json!({ "kind": t.name(), "string": s }));
    r.line(out.render());
    r.result(
        json!({ "input": b.render(), "output": out.render(), "output_kind": out.kind().name() }),
    );
    Ok(r)
}

fn build_set(
    s: &str,
    style: &str,
    constant: &str,
) -> Result<(BracketString, Style, ExactScalar, PolySet), CliError> {
    let b = bracket(s)?;
    let st: Style = parsed(style)?;
    let c = rational(constant)?;
    let set = st.build(&b, &c)?;
    Ok((b, st, c, set))
}

fn polyset(s: &str, style: &str, constant: &str) -> Result<Report, CliError> {
    let (b, st, c, set) = build_set(s, style, constant)?;
    let mut r = Report::new(
        "polyset",
        json!({ "string": s, "style": st.name(), "const": c.to_string() }),
    );
    r.line(set.to_string());
    r.result(json!({ "string": b.render(), "set": set, "text": set.to_string() }));
    Ok(r)
}

fn sample(s: &str, style: &str, constant: &str, g: &GlobalOpts) -> Result<Report, CliError> {
    let (_, st, c, set) = build_set(s, style, constant)?;
    let cfg = sample_config(g)?;
    let points = Sampler::new(&set)?.sample_many(&cfg, 0)?;
    let mut r = Report::new(
        "sample",
        json!({
            "string": s, "style": st.name(), "const": c.to_string(),
            "count": g.count, "height": g.height, "seed": g.seed,
        }),
    );
    r.line(format!("{set}"));
    for p in &points {
        let ok = set.satisfied_by(p);
        r.line(format!(
            "{}{}",
            tuple(p),
            if ok { "" } else { "  NOT ON THE SET" }
        ));
        if !ok {
            r.failure(json!({ "point": strings(p), "check": "satisfies every form" }));
        }
        r.result(json!(strings(p)));
    }
    Ok(r)
}

fn check(theorem: &str, n: usize, g: &GlobalOpts) -> Result<Report, CliError> {
    let id: TheoremId = parsed(theorem)?;
    let cfg = sample_config(g)?;
    let report = verify_theorem_battery(id, n, &cfg)?;
    let mut r = Report::new(
        "check",
        json!({ "theorem": id.id(), "n": n, "count": g.count, "height": g.height, "seed": g.seed }),
    );
    r.line(format!("{} (n = {n}): {}", id.id(), id.statement()));
    r.line(format!(
        "{} cases, {} exact points, {} failures",
        report.cases.len(),
        report.total_points(),
        report.failures.len()
    ));
    for f in &report.failures {
        let param = f
            .param
            .as_deref()
            .map(|p| format!(" [{p}]"))
            .unwrap_or_default();
        r.line(format!(
            "FAIL {}{param}: {} ({})",
            f.string, f.check, f.detail
        ));
        r.failure(serde_json::to_value(f).expect("failure serializes"));
    }
    for c in &report.cases {
        r.result(serde_json::to_value(c).expect("case serializes"));
    }
    Ok(r)
}

fn groebner(n: usize) -> Result<Report, CliError> {
    let cert = certificate_check(n)?;
    let mut r = Report::new("groebner", json!({ "n": n }));
    r.line(format!("basis: {}", cert.basis.join(", ")));
    r.line(format!(
        "leading monomials: {}",
        cert.leading_monomials.join(", ")
    ));
    r.line(format!("pairwise coprime: {}", cert.pairwise_coprime));
    for e in &cert.identities {
        let status = if e.status == Status::Pass {
            "pass"
        } else {
            "FAIL"
        };
        r.line(format!("{:<10} {:<40} {status}", e.direction, e.target));
        if e.status == Status::Fail {
            r.failure(serde_json::to_value(e).expect("entry serializes"));
        }
    }
    if !cert.pairwise_coprime {
        r.failure(json!({ "check": "leading monomials pairwise coprime" }));
    }
    r.result(serde_json::to_value(&cert).expect("certificate serializes"));
    Ok(r)
}

fn parametrize(n: usize, tail: &[String]) -> Result<Report, CliError> {
    let tail = rationals(tail)?;
    let p = rational_parametrization(n, &tail)?;
    let residuals = ac_residuals(&p);
    let on = on_ac(&p);
    let rank = jacobian_rank(&p);
    let mut r = Report::new("parametrize", json!({ "n": n, "tail": strings(&tail) }));
    r.line(format!("point: {}", tuple(&p)));
    r.line(format!("on AC_{n}: {on}"));
    r.line(format!("Jacobian rank: {rank}"));
    if !on {
        r.failure(json!({ "check": "on AC_n", "residuals": strings(&residuals) }));
    }
    r.result(json!({ "point": strings(&p), "on_ac": on, "jacobian_rank": rank }));
    Ok(r)
}

fn point<T: Coord>(
    s: &str,
    parse: impl Fn(&str) -> Result<T, CliError>,
) -> Result<Point2<T>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!("expected 'x,y', got '{s}'")));
    }
    Ok(Point2::new(parse(parts[0])?, parse(parts[1])?))
}

fn float(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::new("PARSE", format!("cannot parse {s:?} as a number")))
}

fn chain_report<T: Coord>(
    r: &mut Report,
    chain: &PolygonChain<T>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let area = chain.area_report();
    let fmt_pt = |p: &Point2<T>| format!("({}, {})", p.x.to_json(), p.y.to_json()).replace('"', "");
    let verts: Vec<String> = chain.vertices.iter().map(fmt_pt).collect();
    let areas: Vec<String> = area
        .areas
        .iter()
        .map(|a| a.to_json().to_string().replace('"', ""))
        .collect();
    r.line(format!("vertices: {}", verts.join(" ")));
    r.line(format!(
        "closed: {} (residual {:e})",
        chain.closed, chain.closure_residual
    ));
    r.line(format!("areas: {}", areas.join(" ")));
    match &area.common {
        Some(c) => r.line(format!(
            "area center at the origin, common area {}",
            c.to_json().to_string().replace('"', "")
        )),
        None => r.line(format!(
            "no common nonzero area (max deviation {:e})",
            area.max_deviation
        )),
    }
    let mut doc = chain.to_json();
    doc["common"] = area
        .common
        .as_ref()
        .map(Coord::to_json)
        .unwrap_or(Value::Null);
    doc["max_deviation"] = json!(area.max_deviation);
    if !chain.closed {
        r.failure(json!({ "check": "closed", "residual": chain.closure_residual }));
    }
    if area.common.is_none() {
        r.failure(json!({ "check": "equal nonzero areas", "max_deviation": area.max_deviation }));
    }
    if let Some(path) = svg {
        write_file(path, &chain.to_svg())?;
        r.line(format!("svg written to {}", path.display()));
        doc["svg"] = json!(path.display().to_string());
    }
    r.result(doc);
    Ok(())
}

fn polygon(
    coeffs: &[String],
    p0: &str,
    p1: &str,
    use_float: bool,
    svg: Option<&Path>,
) -> Result<Report, CliError> {
    let params = json!({ "coeffs": coeffs, "p0": p0, "p1": p1, "mode": if use_float { "float" } else { "exact" } });
    let mut r = Report::new("polygon", params);
    if use_float {
        let a: Vec<f64> = coeffs.iter().map(|c| float(c)).collect::<Result<_, _>>()?;
        let chain = synthesize(&a, point(p0, float)?, point(p1, float)?)?;
        chain_report(&mut r, &chain, svg)?;
    } else {
        let a = rationals(coeffs)?;
        let chain = synthesize(&a, point(p0, rational)?, point(p1, rational)?)?;
        chain_report(&mut r, &chain, svg)?;
    }
    Ok(r)
}

fn star(n: usize, k: usize, svg: Option<&Path>) -> Result<Report, CliError> {
    let chain = regular_star(n, k)?;
    let mut r = Report::new("star", json!({ "n": n, "k": k }));
    let c = star_coefficient(n, k);
    r.line(format!(
        "{{{n}/{k}}}: coefficient 2cos(2*{k}*pi/{n}) = {c:.12}"
    ));
    chain_report(&mut r, &chain, svg)?;
    if chain.closure_residual >= FLOAT_TOLERANCE {
        r.failure(json!({ "check": "closure residual", "value": chain.closure_residual }));
    }
    if let Some(doc) = r.results.last_mut() {
        doc["coefficient"] = json!(c);
    }
    Ok(r)
}

fn quad(values: &[String]) -> Result<Report, CliError> {
    if values.len() != 8 {
        return Err(CliError::usage(format!(
            "--points needs 8 numbers, got {}",
            values.len()
        )));
    }
    let v = rationals(values)?;
    let pts: [Point2<ExactScalar>; 4] =
        std::array::from_fn(|i| Point2::new(v[2 * i].clone(), v[2 * i + 1].clone()));
    let q = quad_classify(&pts);
    let mut r = Report::new("quad", json!({ "points": strings(&v) }));
    r.line(q.verdict.code());
    r.line(format!(
        "midpoint of p0p2 on line p1p3: {}",
        q.midpoint_02_on_13
    ));
    r.line(format!(
        "midpoint of p1p3 on line p0p2: {}",
        q.midpoint_13_on_02
    ));
    if q.degenerate {
        r.line("warning: three consecutive vertices are collinear");
    }
    r.result(json!({
        "verdict": q.verdict.code(),
        "midpoint_02_on_13": q.midpoint_02_on_13,
        "midpoint_13_on_02": q.midpoint_13_on_02,
        "degenerate": q.degenerate,
    }));
    Ok(r)
}
