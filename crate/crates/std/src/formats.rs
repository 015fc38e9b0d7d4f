//! Graph, path and measure inputs.
//!
//! Numbers in JSON may be numbers or strings. Strings may be fractions
//! (`"1/3"`); decimals are read as the exact fraction they spell.

use std::fs;
use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};
use kgraph::exact::Real;
use kgraph::graph::library;
use kgraph::graph::InfinitePathSpec;
use kgraph::measures::{CylinderMeasure, Gammas, KakutaniSpec, Lambda2NSpec, MarkovSpec, Product2NSpec};
use kgraph::{Degree, InfinitePath, KGraph, KGraphSpec, Path};
use serde_json::Value;

/// Graph name used by commands that take no graph argument.
pub const DEFAULT_GRAPH: &str = "one_vertex_fefe";

/// Read a file, or stdin for `-`.
pub fn read_source(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(src).with_context(|| format!("reading {src}"))
}

/// `-` (stdin), a library graph name, or a JSON file.
pub fn load_graph_spec(src: &str) -> Result<KGraphSpec> {
    if src != "-" && library::NAMES.contains(&src) {
        return Ok(library::standard_library(src, None, None)?);
    }
    parse_graph_spec(&read_source(src)?).with_context(|| format!("graph {src}"))
}

pub fn parse_graph_spec(text: &str) -> Result<KGraphSpec> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_graph(src: &str) -> Result<KGraph> {
    Ok(KGraph::from_spec(&load_graph_spec(src)?)?)
}

pub fn real(v: &Value) -> Result<Real> {
    match v {
        Value::Number(n) => Ok(Real::parse(&n.to_string())?),
        Value::String(s) => Ok(Real::parse(s)?),
        other => bail!("expected a number, got {other}"),
    }
}

fn reals(v: &Value) -> Result<Vec<Real>> {
    v.as_array().ok_or_else(|| anyhow!("expected a list of numbers, got {v}"))?.iter().map(real).collect()
}

fn matrix(v: &Value) -> Result<Vec<Vec<Real>>> {
    v.as_array().ok_or_else(|| anyhow!("expected a matrix, got {v}"))?.iter().map(reals).collect()
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| anyhow!("missing field `{key}`"))
}

fn gammas(v: &Value) -> Result<Gammas> {
    match field(v, "type")?.as_str() {
        Some("geometric") => Ok(Gammas::geometric(real(field(v, "c")?)?, real(field(v, "r")?)?)),
        Some("explicit") => {
            let tail = v.get("tailBound").or_else(|| v.get("tail_bound")).ok_or_else(|| anyhow!("missing field `tailBound`"))?;
            Ok(Gammas::Explicit { values: reals(field(v, "values")?)?, tail_bound: real(tail)? })
        }
        _ => bail!("gammas need \"type\": \"geometric\" or \"explicit\""),
    }
}

/// What a measure spec describes, before it meets a graph.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    Pf,
    Kakutani(KakutaniSpec),
    Markov(MarkovSpec),
    Lambda2N(Lambda2NSpec),
    /// Shorthand `lambda2n_x<x>`: each cycle vector is `(x, (1-x)/(m-1), ...)`.
    Lambda2NUniform(Real),
    Product2N(Product2NSpec),
}

impl MeasureSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = field(v, "kind")?.as_str().ok_or_else(|| anyhow!("`kind` must be a string"))?;
        let none = Value::Object(Default::default());
        let p = v.get("params").unwrap_or(&none);
        Ok(match kind {
            "pf" => MeasureSpec::Pf,
            "kakutani" => MeasureSpec::Kakutani(KakutaniSpec::new(gammas(field(p, "gammas")?)?)),
            "markov" => match p.get("x") {
                Some(x) => MeasureSpec::Markov(MarkovSpec::symmetric(real(x)?)),
                None => {
                    let t = matrix(p.get("T").or_else(|| p.get("t")).ok_or_else(|| anyhow!("markov needs `x` or `T`"))?)?;
                    let lambda = match p.get("lambda") {
                        Some(l) => reals(l)?,
                        None => vec![Real::int(1); t.len()],
                    };
                    MeasureSpec::Markov(MarkovSpec::new(t, lambda))
                }
            },
            "lambda2n" => {
                let perm = match p.get("perm") {
                    Some(Value::Array(a)) => Some(
                        a.iter()
                            .map(|v| v.as_u64().map(|n| n as usize).ok_or_else(|| anyhow!("perm entries must be positive integers")))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    Some(_) => bail!("`perm` must be a list"),
                    None => None,
                };
                MeasureSpec::Lambda2N(Lambda2NSpec::new(perm, matrix(field(p, "x")?)?))
            }
            "product2n" => {
                let d = field(p, "deltas")?.as_array().ok_or_else(|| anyhow!("`deltas` must be a list"))?;
                MeasureSpec::Product2N(Product2NSpec::new(d.iter().map(gammas).collect::<Result<_>>()?))
            }
            other => bail!("unknown measure kind `{other}`"),
        })
    }

    /// `pf`, `kakutani` (γ_i = 4^-i), `kakutani_r<r>` (γ_i = r^i),
    /// `markov_x<x>`, `lambda2n_x<x>`.
    pub fn shorthand(s: &str) -> Option<Result<Self>> {
        let num = |t: &str| Real::parse(t).map_err(anyhow::Error::from);
        if s == "pf" {
            return Some(Ok(MeasureSpec::Pf));
        }
        if s == "kakutani" {
            return Some(Ok(MeasureSpec::Kakutani(KakutaniSpec::new(Gammas::geometric(Real::int(1), Real::ratio(1, 4))))));
        }
        if let Some(r) = s.strip_prefix("kakutani_r") {
            return Some(num(r).map(|r| MeasureSpec::Kakutani(KakutaniSpec::new(Gammas::geometric(Real::int(1), r)))));
        }
        if let Some(x) = s.strip_prefix("markov_x") {
            return Some(num(x).map(|x| MeasureSpec::Markov(MarkovSpec::symmetric(x))));
        }
        if let Some(x) = s.strip_prefix("lambda2n_x") {
            return Some(num(x).map(MeasureSpec::Lambda2NUniform));
        }
        None
    }

    /// A shorthand, a JSON file, or inline JSON.
    pub fn load(src: &str) -> Result<Self> {
        if let Some(spec) = Self::shorthand(src) {
            return spec;
        }
        let text = if src.trim_start().starts_with('{') { src.to_string() } else { read_source(src)? };
        let v: Value = serde_json::from_str(&text).with_context(|| format!("measure spec {src}"))?;
        Self::from_json(&v).with_context(|| format!("measure spec {src}"))
    }

    pub fn build(&self, g: &KGraph) -> Result<CylinderMeasure> {
        Ok(match self {
            MeasureSpec::Pf => CylinderMeasure::pf(g)?,
            MeasureSpec::Kakutani(s) => CylinderMeasure::kakutani(g, s.clone())?,
            MeasureSpec::Markov(s) => CylinderMeasure::markov(g, s.clone())?,
            MeasureSpec::Lambda2N(s) => CylinderMeasure::lambda2n(g, s.clone())?,
            MeasureSpec::Lambda2NUniform(x) => {
                // the outer vertices are all but the center
                let m = g.vertex_count().saturating_sub(1).max(2);
                let q = x.exact.clone().ok_or_else(|| anyhow!("lambda2n_x needs an exact x"))?;
                let rest = (num_rational::BigRational::from_integer(1.into()) - q)
                    / num_rational::BigRational::from_integer((m as i64 - 1).into());
                let mut v = vec![Real::rational(rest); m];
                v[0] = x.clone();
                let cycles = star_cycles(g)?;
                CylinderMeasure::lambda2n(g, Lambda2NSpec::new(None, vec![v; cycles]))?
            }
            MeasureSpec::Product2N(s) => CylinderMeasure::product2n(g, s.clone())?,
        })
    }
}

/// Number of cycles of the permutation a star graph was built from.
fn star_cycles(g: &KGraph) -> Result<usize> {
    let m = g.vertex_count() - 1;
    let n = m / 2;
    // squares b:Q_{φ(i)}>v r:v>Q_{φ(i)} = r:Q_i>v b:v>Q_i pin φ down
    let mut phi = vec![usize::MAX; m];
    for i in 1..=m {
        let qi = library::outer_vertex(n, i);
        let head = library::star_edge('r', &qi, "v");
        let tail = library::star_edge('b', "v", &qi);
        let (Ok(h), Ok(t)) = (g.edge_id(&head), g.edge_id(&tail)) else {
            bail!("lambda2n_x needs a lambda_2N graph");
        };
        let Some((b, _)) = g.swap(h, t) else { bail!("lambda2n_x needs a lambda_2N graph") };
        let src = g.vertex_name(g.edge(b).source).to_string();
        phi[i - 1] = (1..=m).find(|&j| library::outer_vertex(n, j) == src).ok_or_else(|| anyhow!("lambda2n_x needs a lambda_2N graph"))? - 1;
    }
    let mut seen = vec![false; m];
    let mut count = 0;
    for s in 0..m {
        if !seen[s] {
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = phi[i];
            }
        }
    }
    Ok(count)
}

pub fn load_measure(g: &KGraph, src: &str) -> Result<CylinderMeasure> {
    MeasureSpec::load(src)?.build(g)
}

/// Comma (or whitespace) separated edge ids. An empty list is only
/// allowed together with a vertex name after `@`, as in `@v`.
pub fn parse_path(g: &KGraph, s: &str) -> Result<Path> {
    if let Some(v) = s.trim().strip_prefix('@') {
        return Ok(g.path_from_names(&[], Some(v.trim()))?);
    }
    let names = split_names(s);
    if names.is_empty() {
        bail!("empty path; write @vertex for a vertex path");
    }
    Ok(g.path_from_names(&names, None)?)
}

fn split_names(s: &str) -> Vec<&str> {
    s.split([',', ' ']).map(str::trim).filter(|t| !t.is_empty()).collect()
}

/// `prefix;cycle` or just `cycle` as edge ids, `default` / `default:v`
/// for the greedy path from the first vertex / from `v`, or a JSON file
/// holding `{"prefix": [...], "cycle": [...]}`.
pub fn parse_infinite_path(g: &KGraph, s: &str) -> Result<InfinitePath> {
    let s = s.trim();
    if s == "default" {
        let v = g.vertex_ids().next().ok_or_else(|| anyhow!("graph has no vertices"))?;
        return Ok(InfinitePath::default_from(g, v)?);
    }
    if let Some(v) = s.strip_prefix("default:") {
        return Ok(InfinitePath::default_from(g, g.vertex_id(v.trim())?)?);
    }
    let spec = if s.ends_with(".json") || s.starts_with('{') {
        let text = if s.starts_with('{') { s.to_string() } else { read_source(s)? };
        serde_json::from_str::<InfinitePathSpec>(&text).with_context(|| format!("path spec {s}"))?
    } else {
        let (prefix, cycle) = s.split_once(';').unwrap_or(("", s));
        let own = |t: &str| split_names(t).into_iter().map(String::from).collect();
        InfinitePathSpec { prefix: own(prefix), cycle: own(cycle) }
    };
    Ok(InfinitePath::from_spec(g, &spec)?)
}

/// `"2,1"` style lists.
pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow!("{what}: cannot read `{t}`")))
        .collect()
}

/// A degree; a single number `n` means `(n, ..., n)`.
pub fn parse_degree(s: &str, k: usize, what: &str) -> Result<Degree> {
    let v: Vec<u32> = parse_list(s, what)?;
    match v.len() {
        1 => Ok(Degree::square(k, v[0])),
        n if n == k => Ok(Degree(v)),
        n => bail!("{what}: expected {k} entries, got {n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn fefe() -> KGraph {
        KGraph::from_spec(&library::one_vertex_fefe()).unwrap()
    }

    #[test]
    fn numbers_are_exact() {
        let r = real(&json!(0.3)).unwrap();
        assert_eq!(r, Real::ratio(3, 10));
        assert_eq!(real(&json!("1/4")).unwrap(), Real::ratio(1, 4));
        assert!(real(&json!([1])).is_err());
    }

    #[test]
    fn measure_specs() {
        let m = MeasureSpec::from_json(&json!({"kind": "markov", "params": {"x": "0.3"}})).unwrap();
        assert_eq!(m, MeasureSpec::Markov(MarkovSpec::symmetric(Real::ratio(3, 10))));
        assert_eq!(MeasureSpec::load("markov_x0.3").unwrap(), m);
        let k = MeasureSpec::from_json(&json!({"kind": "kakutani", "params": {"gammas": {"type": "geometric", "c": 1, "r": "1/4"}}}))
            .unwrap();
        assert_eq!(MeasureSpec::load("kakutani").unwrap(), k);
        let e = json!({"kind": "kakutani", "params": {"gammas": {"type": "explicit", "values": [0.25, 0.0625], "tailBound": "1/100"}}});
        assert!(matches!(MeasureSpec::from_json(&e).unwrap(), MeasureSpec::Kakutani(_)));
        assert!(MeasureSpec::from_json(&json!({"kind": "lebesgue"})).is_err());
        assert!(MeasureSpec::load("markov_xabc").is_err());
    }

    #[test]
    fn lambda2n_shorthand_builds() {
        let g = KGraph::from_spec(&library::standard_library("lambda_2N", None, None).unwrap()).unwrap();
        let m = load_measure(&g, "lambda2n_x0.3").unwrap();
        assert!(m.check_kolmogorov(3).unwrap().passed);
        assert!(load_measure(&fefe(), "lambda2n_x0.3").is_err());
    }

    #[test]
    fn infinite_paths() {
        let g = fefe();
        let x = parse_infinite_path(&g, "e,f1").unwrap();
        let y = parse_infinite_path(&g, r#"{"cycle": ["e", "f1"]}"#).unwrap();
        assert_eq!(x, y);
        let z = parse_infinite_path(&g, "e,f1;e,f2").unwrap();
        assert_eq!(z.prefix_len(), 1);
        assert!(parse_infinite_path(&g, "default").is_ok());
        assert!(parse_infinite_path(&g, "e").is_err());
    }

    #[test]
    fn degrees_and_paths() {
        assert_eq!(parse_degree("2", 2, "b").unwrap(), Degree(vec![2, 2]));
        assert_eq!(parse_degree("1,3", 2, "b").unwrap(), Degree(vec![1, 3]));
        assert!(parse_degree("1,2,3", 2, "b").is_err());
        let g = fefe();
        assert_eq!(parse_path(&g, "e, f1").unwrap().len(), 2);
        assert!(parse_path(&g, "@v").unwrap().is_vertex());
        assert!(parse_path(&g, "").is_err());
    }
}
