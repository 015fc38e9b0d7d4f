//! Geometric SBFS system files.
//!
//! ```json
//! {"graph": "three_vertex_eight_edge",
//!  "domains": {"u": {"intervals": [[0, "1/3"]]}},
//!  "maps": {"a0": [{"domain": {"intervals": [["1/3", "2/3"]]}, "fx": {"x": 1, "1": "-1/3"}}]},
//!  "ranges": {"a0": {"intervals": [[0, "1/3"]]}}}
//! ```
//!
//! A plane region is `{"cells": [{"x": [lo, hi], "y": [lo, hi]}]}`; a cell
//! may add `"constraints": [poly, ...]` (each `> 0`) and then needs
//! `"area"`. Polynomials map monomials (`"1"`, `"x"`, `"y"`, `"x^2"`,
//! `"x*y"`, `"y^2"`) to coefficients.

use std::collections::BTreeMap;
use std::path::Path as FsPath;

use anyhow::{anyhow, bail, Context, Result};
use kgraph::geometric::{monomial_name, Cell, GeometricSBFS, Interval, Piece, PiecewiseMap, Poly2, Region, Q, SYSTEM_NAMES};
use kgraph::geometric::standard_system;
use kgraph::{KGraph, KGraphSpec};
use serde_json::{json, Map, Value};

use crate::formats::{load_graph_spec, read_source, real};

fn rational(v: &Value) -> Result<Q> {
    real(v)?.exact.ok_or_else(|| anyhow!("{v} is not an exact number"))
}

fn q_json(q: &Q) -> Value {
    if q.is_integer() {
        if let Ok(n) = q.to_integer().to_string().parse::<i64>() {
            return json!(n);
        }
    }
    json!(q.to_string())
}

/// Read a monomial key into exponents of `x` and `y`.
pub fn parse_monomial(key: &str) -> Result<(u32, u32)> {
    let key = key.trim();
    if key == "1" || key.is_empty() {
        return Ok((0, 0));
    }
    let (mut i, mut j) = (0, 0);
    let mut rest = key.replace(['*', ' '], "");
    while !rest.is_empty() {
        let var = rest.remove(0);
        let mut exp = 1;
        if rest.starts_with('^') {
            rest.remove(0);
            let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
            exp = digits.parse().map_err(|_| anyhow!("bad exponent in monomial `{key}`"))?;
            rest.drain(..digits.len());
        }
        match var {
            'x' => i += exp,
            'y' => j += exp,
            _ => bail!("unknown monomial `{key}`"),
        }
    }
    Ok((i, j))
}

pub fn poly_from_json(v: &Value) -> Result<Poly2> {
    if !v.is_object() {
        // a bare number is a constant
        return Ok(Poly2::constant(rational(v)?));
    }
    let obj = v.as_object().unwrap();
    let terms = obj.iter().map(|(k, c)| Ok((parse_monomial(k)?, rational(c)?))).collect::<Result<Vec<_>>>()?;
    Ok(Poly2::from_terms(terms))
}

pub fn poly_to_json(p: &Poly2) -> Value {
    let mut m = Map::new();
    for (&(i, j), c) in p.terms() {
        m.insert(monomial_name(i, j).unwrap_or_else(|| "1".into()), q_json(c));
    }
    Value::Object(m)
}

fn interval(v: &Value) -> Result<Interval> {
    match v.as_array().map(Vec::as_slice) {
        Some([lo, hi]) => Ok(Interval::new(rational(lo)?, rational(hi)?)?),
        _ => bail!("an interval is [lo, hi], got {v}"),
    }
}

fn interval_json(i: &Interval) -> Value {
    json!([q_json(&i.lo), q_json(&i.hi)])
}

pub fn region_from_json(v: &Value) -> Result<Region> {
    if let Some(parts) = v.get("intervals") {
        let parts = parts.as_array().ok_or_else(|| anyhow!("`intervals` must be a list"))?;
        let r = Region::Line(parts.iter().map(interval).collect::<Result<_>>()?);
        r.check()?;
        return Ok(r);
    }
    if let Some(cells) = v.get("cells") {
        let cells = cells.as_array().ok_or_else(|| anyhow!("`cells` must be a list"))?;
        let mut out = Vec::new();
        for c in cells {
            let x = interval(c.get("x").ok_or_else(|| anyhow!("cell needs `x`"))?)?;
            let y = interval(c.get("y").ok_or_else(|| anyhow!("cell needs `y`"))?)?;
            let constraints = match c.get("constraints") {
                Some(Value::Array(a)) => a.iter().map(poly_from_json).collect::<Result<Vec<_>>>()?,
                Some(_) => bail!("`constraints` must be a list"),
                None => Vec::new(),
            };
            let area = c.get("area").map(rational).transpose()?;
            out.push(Cell { x, y, constraints, area });
        }
        let r = Region::Plane(out);
        r.check()?;
        return Ok(r);
    }
    bail!("a region needs `intervals` or `cells`, got {v}")
}

pub fn region_to_json(r: &Region) -> Value {
    match r {
        Region::Line(parts) => json!({"intervals": parts.iter().map(interval_json).collect::<Vec<_>>()}),
        Region::Plane(cells) => {
            let cells: Vec<Value> = cells
                .iter()
                .map(|c| {
                    let mut m = Map::new();
                    m.insert("x".into(), interval_json(&c.x));
                    m.insert("y".into(), interval_json(&c.y));
                    if !c.constraints.is_empty() {
                        m.insert("constraints".into(), c.constraints.iter().map(poly_to_json).collect());
                    }
                    if let Some(a) = &c.area {
                        m.insert("area".into(), q_json(a));
                    }
                    Value::Object(m)
                })
                .collect();
            json!({ "cells": cells })
        }
    }
}

fn named<T>(v: &Value, what: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<(String, T)>> {
    let obj = v.as_object().ok_or_else(|| anyhow!("`{what}` must be an object"))?;
    obj.iter().map(|(k, x)| Ok((k.clone(), f(x).with_context(|| format!("{what}.{k}"))?))).collect()
}

fn map_from_json(v: &Value) -> Result<PiecewiseMap> {
    let pieces = v.as_array().ok_or_else(|| anyhow!("a map is a list of pieces"))?;
    let pieces = pieces
        .iter()
        .map(|p| {
            let domain = region_from_json(p.get("domain").ok_or_else(|| anyhow!("piece needs `domain`"))?)?;
            let fx = poly_from_json(p.get("fx").ok_or_else(|| anyhow!("piece needs `fx`"))?)?;
            let fy = p.get("fy").map(poly_from_json).transpose()?;
            Ok(Piece::new(domain, fx, fy)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PiecewiseMap::new(pieces)?)
}

/// Parse a system file. A graph given by file name is looked up relative
/// to `base`.
pub fn system_from_json(v: &Value, base: Option<&FsPath>) -> Result<GeometricSBFS> {
    let graph = v.get("graph").ok_or_else(|| anyhow!("system needs `graph`"))?;
    let spec: KGraphSpec = match graph {
        Value::String(s) => {
            let rel = base.map(|b| b.join(s)).filter(|p| p.exists());
            match rel {
                Some(p) => load_graph_spec(&p.to_string_lossy())?,
                None => load_graph_spec(s)?,
            }
        }
        other => serde_json::from_value(other.clone()).context("inline graph")?,
    };
    let g = KGraph::from_spec(&spec)?;
    let domains = named(v.get("domains").ok_or_else(|| anyhow!("system needs `domains`"))?, "domains", region_from_json)?;
    let maps = named(v.get("maps").ok_or_else(|| anyhow!("system needs `maps`"))?, "maps", map_from_json)?;
    let ranges = named(v.get("ranges").ok_or_else(|| anyhow!("system needs `ranges`"))?, "ranges", region_from_json)?;
    Ok(GeometricSBFS::new(g, domains, maps, ranges)?)
}

/// Serialize with the graph inlined.
pub fn system_to_json(s: &GeometricSBFS) -> Value {
    let g = s.graph();
    let mut domains = BTreeMap::new();
    for v in g.vertex_ids() {
        domains.insert(g.vertex_name(v).to_string(), region_to_json(s.domain(v)));
    }
    let mut maps = BTreeMap::new();
    let mut ranges = BTreeMap::new();
    for e in g.edge_ids() {
        let name = g.edge(e).name.clone();
        let pieces: Vec<Value> = s
            .map(e)
            .pieces()
            .iter()
            .map(|p| {
                let mut m = Map::new();
                m.insert("domain".into(), region_to_json(p.domain()));
                m.insert("fx".into(), poly_to_json(p.fx()));
                if let Some(fy) = p.fy() {
                    m.insert("fy".into(), poly_to_json(fy));
                }
                Value::Object(m)
            })
            .collect();
        maps.insert(name.clone(), Value::Array(pieces));
        ranges.insert(name, region_to_json(s.range(e)));
    }
    json!({
        "graph": serde_json::to_value(g.to_spec()).expect("graph specs serialize"),
        "domains": domains,
        "maps": maps,
        "ranges": ranges,
    })
}

/// A library system name, `-`, or a JSON file.
pub fn load_system(src: &str) -> Result<GeometricSBFS> {
    if SYSTEM_NAMES.contains(&src) {
        return Ok(standard_system(src)?);
    }
    let text = read_source(src)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("system {src}"))?;
    let base = if src == "-" { None } else { FsPath::new(src).parent() };
    system_from_json(&v, base).with_context(|| format!("system {src}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kgraph::geometric::{ex34_system, ex35_system, q, validate_sbfs_conditions};

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial("1").unwrap(), (0, 0));
        assert_eq!(parse_monomial("x*y").unwrap(), (1, 1));
        assert_eq!(parse_monomial("xy").unwrap(), (1, 1));
        assert_eq!(parse_monomial("y^2").unwrap(), (0, 2));
        assert!(parse_monomial("z").is_err());
        for i in 0..3 {
            for j in 0..3 - i {
                let name = monomial_name(i, j).unwrap_or_else(|| "1".into());
                assert_eq!(parse_monomial(&name).unwrap(), (i, j));
            }
        }
    }

    #[test]
    fn polys_round_trip() {
        let p = poly_from_json(&json!({"x": 1, "y": 1, "x*y": -1})).unwrap();
        assert_eq!(p.eval(&q(1, 2), &q(1, 2)), q(3, 4));
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
        assert_eq!(poly_from_json(&json!("1/3")).unwrap(), Poly2::constant(q(1, 3)));
    }

    #[test]
    fn library_systems_round_trip() {
        for s in [ex34_system(), ex35_system()] {
            let back = system_from_json(&system_to_json(&s), None).unwrap();
            assert_eq!(back, s);
            assert!(validate_sbfs_conditions(&back).unwrap().passed());
        }
    }

    #[test]
    fn bad_regions() {
        assert!(region_from_json(&json!({"intervals": [[1, 0]]})).is_err());
        assert!(region_from_json(&json!({"boxes": []})).is_err());
        let cut = json!({"cells": [{"x": [0, 1], "y": [0, 1], "constraints": [{"y": 1, "x": -1}]}]});
        assert!(region_from_json(&cut).is_err());
    }
}
