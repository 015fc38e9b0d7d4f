//! Semibranching function systems given by explicit maps on subsets of
//! the unit interval or square, with Lebesgue measure.

mod library;
mod maps;
mod poly;
mod pw;
mod region;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

pub use library::{binary_system, ex34_system, ex35_system, standard_system, SYSTEM_NAMES};
pub use maps::{rn_derivative_exact, rn_derivative_geometric, Piece, PiecewiseMap};
pub use poly::{monomial_name, q, q_to_f64, Poly2, Q};
pub use region::{Cell, Interval, Region, Side, BOUNDARY_EPS};

use crate::graph::{product_graph, EdgeId, KGraph, VertexId};
use crate::{Error, Result};

/// Grid size per axis for the coding-map commutation check.
pub const GRID: usize = 100;
/// Sample points per edge (a 10 × 10 grid in the plane).
pub const EDGE_SAMPLES: usize = 100;
/// Residual allowed for sampled identities between polynomial maps.
pub const POLY_TOL: f64 = 1e-9;
/// Residual allowed for sampled identities between affine maps.
pub const AFFINE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricSBFS {
    graph: KGraph,
    domains: Vec<Region>,
    maps: Vec<PiecewiseMap>,
    ranges: Vec<Region>,
}

fn resolve<T>(
    names: Vec<(String, T)>,
    count: usize,
    lookup: impl Fn(&str) -> Result<usize>,
    what: &str,
) -> Result<Vec<T>> {
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    for (name, item) in names {
        let i = lookup(&name)?;
        if slots[i].replace(item).is_some() {
            return Err(Error::InvalidInput(format!("{what} for `{name}` given twice")));
        }
    }
    slots.into_iter().enumerate().map(|(i, s)| s.ok_or_else(|| Error::InvalidInput(format!("missing {what} #{i}")))).collect()
}

impl GeometricSBFS {
    pub fn new(
        graph: KGraph,
        domains: Vec<(String, Region)>,
        maps: Vec<(String, PiecewiseMap)>,
        ranges: Vec<(String, Region)>,
    ) -> Result<Self> {
        let dangling = |kind: &'static str, name: &str| Error::DanglingReference { what: "system".into(), kind, name: name.into() };
        let vertex = |n: &str| graph.vertex_id(n).map(VertexId::index).map_err(|_| dangling("vertex", n));
        let edge = |n: &str| graph.edge_id(n).map(EdgeId::index).map_err(|_| dangling("edge", n));
        let domains = resolve(domains, graph.vertex_count(), vertex, "domain")?;
        let maps = resolve(maps, graph.edge_count(), edge, "map")?;
        let ranges = resolve(ranges, graph.edge_count(), edge, "range")?;
        let dim = domains[0].dimension();
        for r in domains.iter().chain(&ranges) {
            r.check()?;
        }
        if domains.iter().chain(&ranges).any(|r| r.dimension() != dim) || maps.iter().any(|m| m.dimension() != dim) {
            return Err(Error::MalformedRegion("regions and maps of one system must share a dimension".into()));
        }
        Ok(GeometricSBFS { graph, domains, maps, ranges })
    }

    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    pub fn dimension(&self) -> usize {
        self.domains[0].dimension()
    }

    pub fn domain(&self, v: VertexId) -> &Region {
        &self.domains[v.index()]
    }

    pub fn map(&self, e: EdgeId) -> &PiecewiseMap {
        &self.maps[e.index()]
    }

    pub fn range(&self, e: EdgeId) -> &Region {
        &self.ranges[e.index()]
    }

    pub fn map_by_name(&self, name: &str) -> Result<&PiecewiseMap> {
        Ok(self.map(self.graph.edge_id(name)?))
    }

    /// `τ^{e_i}` at `p`: the inverse of the branch whose range contains
    /// `p`. `Err` when `p` sits on a range boundary.
    fn coding(&self, color: usize, p: [f64; 2]) -> core::result::Result<Option<[f64; 2]>, ()> {
        let coords = &p[..self.dimension()];
        let mut hit = None;
        for e in self.graph.edge_ids().filter(|&e| self.graph.edge(e).color == color) {
            match self.range(e).side(coords) {
                Side::Inside => hit = Some(e),
                Side::Boundary => return Err(()),
                Side::Outside => {}
            }
        }
        Ok(hit.and_then(|e| self.map(e).invert(p)))
    }

    fn edge_name(&self, e: EdgeId) -> &str {
        &self.graph.edge(e).name
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct ConditionCheck {
    pub name: String,
    pub passed: bool,
    /// Some part of the check relied on grid sampling.
    pub sampled: bool,
    pub cases: usize,
    pub max_defect: f64,
    pub worst: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the five conditions, in order.
    pub const CONDITIONS: [&'static str; 5] = ["(i)", "(ii)", "(iii)", "(iv)", "(v)"];
}

struct Acc {
    check: ConditionCheck,
}

impl Acc {
    fn new(name: &str) -> Self {
        Acc { check: ConditionCheck { name: name.into(), passed: true, sampled: false, cases: 0, max_defect: 0.0, worst: None } }
    }

    fn note(&mut self, defect: f64, fail: bool, what: impl FnOnce() -> String) {
        let c = &mut self.check;
        c.cases += 1;
        if fail {
            c.passed = false;
        }
        if defect > c.max_defect || (fail && c.worst.is_none()) || defect.is_nan() {
            c.max_defect = if defect.is_nan() { f64::INFINITY } else { defect.max(c.max_defect) };
            c.worst = Some(what());
        }
    }

    fn exact(&mut self, defect: &Q, what: impl FnOnce() -> String) {
        self.note(q_to_f64(&defect.abs()), !defect.is_zero(), what);
    }

    // a NaN residual fails
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn sampled(&mut self, residual: f64, tol: f64, what: impl FnOnce() -> String) {
        self.check.sampled = true;
        self.note(residual, !(residual <= tol), what);
    }

    fn done(self) -> ConditionCheck {
        self.check
    }
}

/// Sampled `μ(a \ b)`-style defect: the share of `a`'s sample points that
/// fall outside `b`.
fn sampled_escape(a: &Region, b: &Region, n: usize) -> f64 {
    let pts = a.sample(n);
    if pts.is_empty() {
        return 0.0;
    }
    let out = pts.iter().filter(|p| b.side(&p[..a.dimension()]) == Side::Outside).count();
    out as f64 / pts.len() as f64
}

fn sampled_overlap(a: &Region, b: &Region, n: usize) -> f64 {
    let pts = a.sample(n);
    if pts.is_empty() {
        return 0.0;
    }
    let inside = pts.iter().filter(|p| b.side(&p[..a.dimension()]) == Side::Inside).count();
    inside as f64 / pts.len() as f64
}

fn per_axis(dim: usize, total: usize) -> usize {
    if dim == 1 { total } else { num_traits::Float::sqrt(total as f64) as usize }
}

/// `μ(a △ b)` when exact.
fn symmetric_difference(a: &Region, b: &Region) -> Option<Q> {
    let both = a.intersection_measure(b)?;
    let two = Q::from_integer(2.into());
    Some(a.measure().ok()? + b.measure().ok()? - two * both)
}

/// Checks (i)–(v) for the edge maps, plus three sanity checks: declared
/// ranges are the actual images, `Φ > 0` on every piece, and each coding
/// map undoes its prefixing maps.
pub fn validate_sbfs_conditions(s: &GeometricSBFS) -> Result<ConditionReport> {
    let g = &s.graph;
    let dim = s.dimension();
    let edge_axis = per_axis(dim, EDGE_SAMPLES);
    let mut report = ConditionReport::default();

    let mut acc = Acc::new("(i)");
    for v in g.vertex_ids() {
        let m = s.domain(v).measure()?;
        acc.note(0.0, !m.is_positive(), || format!("μ(D_{}) = 0", g.vertex_name(v)));
    }
    for e in g.edge_ids() {
        let d = s.domain(g.edge(e).source);
        let pieces = s.map(e).domain();
        match symmetric_difference(d, &pieces) {
            Some(q) => acc.exact(&q, || format!("pieces of τ_{} do not cover D_{}", s.edge_name(e), g.vertex_name(g.edge(e).source))),
            None => {
                let r = sampled_escape(d, &pieces, edge_axis) + sampled_escape(&pieces, d, edge_axis);
                acc.sampled(r, 0.0, || format!("pieces of τ_{} do not match D_{}", s.edge_name(e), g.vertex_name(g.edge(e).source)));
            }
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("(ii)");
    let vs: Vec<VertexId> = g.vertex_ids().collect();
    for (i, &v) in vs.iter().enumerate() {
        for &w in &vs[i + 1..] {
            let what = || format!("D_{} ∩ D_{}", g.vertex_name(v), g.vertex_name(w));
            match s.domain(v).intersection_measure(s.domain(w)) {
                Some(q) => acc.exact(&q, what),
                None => acc.sampled(sampled_overlap(s.domain(v), s.domain(w), edge_axis), 0.0, what),
            }
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("(iii)");
    for sq in g.squares() {
        let (l, a) = sq.lhs;
        let (n, b) = sq.rhs;
        let name = || format!("{}{} = {}{}", s.edge_name(l), s.edge_name(a), s.edge_name(n), s.edge_name(b));
        for (outer, inner) in [(l, a), (n, b)] {
            let what = || format!("R_{} ⊄ D_{} in {}", s.edge_name(inner), s.edge_name(outer), name());
            let (r, d) = (s.range(inner), s.domain(g.edge(outer).source));
            match r.intersection_measure(d) {
                Some(both) => acc.exact(&(r.measure()? - both), what),
                None => acc.sampled(sampled_escape(r, d, edge_axis), 0.0, what),
            }
        }
        if dim == 1 {
            let lhs = pw::compose(&pw::of_map(s.map(l)), &pw::of_map(s.map(a)));
            let rhs = pw::compose(&pw::of_map(s.map(n)), &pw::of_map(s.map(b)));
            acc.exact(&pw::disagreement(&lhs, &rhs), name);
        } else if [l, a, n, b].iter().all(|&e| s.map(e).pieces().len() == 1) {
            let comp = |f: EdgeId, h: EdgeId| {
                let (pf, ph) = (&s.map(f).pieces()[0], &s.map(h).pieces()[0]);
                let (hx, hy) = (ph.fx(), ph.fy().unwrap());
                (pf.fx().compose(hx, hy), pf.fy().unwrap().compose(hx, hy))
            };
            let same = comp(l, a) == comp(n, b);
            acc.note(if same { 0.0 } else { 1.0 }, !same, name);
        } else {
            let mut worst = 0.0f64;
            for p in s.domain(g.edge(a).source).sample(edge_axis) {
                let go = |f: EdgeId, h: EdgeId| s.map(h).apply(p).and_then(|q| s.map(f).apply(q));
                if let (Ok(x), Ok(y)) = (go(l, a), go(n, b)) {
                    worst = worst.max((x[0] - y[0]).abs() + (x[1] - y[1]).abs());
                }
            }
            acc.sampled(worst, POLY_TOL, name);
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("(iv)");
    for i in 0..g.k() {
        for j in i + 1..g.k() {
            let what = || format!("τ^e{} τ^e{} against τ^e{} τ^e{}", i + 1, j + 1, j + 1, i + 1);
            if dim == 1 {
                let code = |c: usize| {
                    let branches: pw::Pw = g.edge_ids().filter(|&e| g.edge(e).color == c).flat_map(|e| pw::of_map(s.map(e))).collect();
                    pw::inverse(&branches)
                };
                let (ci, cj) = (code(i), code(j));
                acc.exact(&pw::disagreement(&pw::compose(&ci, &cj), &pw::compose(&cj, &ci)), what);
            } else {
                let mut worst = 0.0f64;
                for v in g.vertex_ids() {
                    for p in s.domain(v).sample(GRID) {
                        let chain = |a: usize, b: usize| -> core::result::Result<Option<[f64; 2]>, ()> {
                            match s.coding(b, p)? {
                                Some(q) => s.coding(a, q),
                                None => Ok(None),
                            }
                        };
                        match (chain(i, j), chain(j, i)) {
                            (Ok(Some(x)), Ok(Some(y))) => worst = worst.max((x[0] - y[0]).abs() + (x[1] - y[1]).abs()),
                            (Ok(None), Ok(None)) | (Err(()), _) | (_, Err(())) => {}
                            _ => worst = f64::INFINITY,
                        }
                    }
                }
                let tol = if g.edge_ids().all(|e| s.map(e).is_affine()) { AFFINE_TOL } else { POLY_TOL };
                acc.sampled(worst, tol, what);
            }
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("(v)");
    for v in g.vertex_ids() {
        let d = s.domain(v);
        for c in 0..g.k() {
            let into: Vec<EdgeId> = g.edges_into(v, c).to_vec();
            let what = || format!("D_{} against ranges of color {}", g.vertex_name(v), c + 1);
            let union = match d {
                Region::Line(_) => Some(Region::Line(into.iter().flat_map(|&e| match s.range(e) {
                    Region::Line(p) => p.clone(),
                    Region::Plane(_) => Vec::new(),
                }).collect())),
                Region::Plane(_) => None,
            };
            if let Some(u) = union {
                let mut defect = d.measure()? - d.intersection_measure(&u).unwrap();
                for (k, &e) in into.iter().enumerate() {
                    for &f in &into[k + 1..] {
                        defect += s.range(e).intersection_measure(s.range(f)).unwrap();
                    }
                }
                acc.exact(&defect, what);
                continue;
            }
            let mut sampled = 0.0;
            let mut exact_part = d.measure()?;
            let mut any_sampled = false;
            for (k, &e) in into.iter().enumerate() {
                let r = s.range(e);
                match r.intersection_measure(d) {
                    Some(both) => exact_part -= both,
                    None => {
                        any_sampled = true;
                        sampled += sampled_escape(r, d, edge_axis);
                        exact_part -= r.measure()?;
                    }
                }
                for &f in &into[k + 1..] {
                    match r.intersection_measure(s.range(f)) {
                        Some(q) => exact_part += q,
                        None => {
                            any_sampled = true;
                            sampled += sampled_overlap(r, s.range(f), edge_axis);
                        }
                    }
                }
            }
            acc.exact(&exact_part, what);
            if any_sampled {
                acc.sampled(sampled, 0.0, what);
            }
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("ranges");
    for e in g.edge_ids() {
        let (m, r) = (s.map(e), s.range(e));
        let what = || format!("τ_{}(D) against declared R_{}", s.edge_name(e), s.edge_name(e));
        if dim == 1 {
            let image = Region::Line(m.pieces().iter().flat_map(|p| p.image_intervals()).collect());
            acc.exact(&symmetric_difference(&image, r).unwrap(), what);
            continue;
        }
        if let Some(area) = m.pieces().iter().map(|p| p.image_area()).sum::<Option<Q>>() {
            acc.exact(&(area - r.measure()?), what);
        }
        let src = s.domain(g.edge(e).source);
        let forward = src.sample(edge_axis).iter().filter(|p| m.apply(**p).map_or(true, |t| r.side(&t) == Side::Outside)).count();
        let backward = r.sample(edge_axis).iter().filter(|p| m.invert(**p).is_none()).count();
        acc.sampled((forward + backward) as f64, 0.0, what);
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("positive rn");
    for e in g.edge_ids() {
        for (k, p) in s.map(e).pieces().iter().enumerate() {
            let ok = p.rn_polynomial().is_ok();
            acc.sampled(if ok { 0.0 } else { 1.0 }, 0.0, || format!("Φ of τ_{} vanishes or changes sign on piece {k}", s.edge_name(e)));
        }
    }
    report.checks.push(acc.done());

    let mut acc = Acc::new("coding inverts prefixing");
    for e in g.edge_ids() {
        let c = g.edge(e).color;
        let tol = if s.map(e).is_affine() { AFFINE_TOL } else { POLY_TOL };
        let mut worst = 0.0f64;
        for p in s.domain(g.edge(e).source).sample(edge_axis) {
            let Ok(t) = s.map(e).apply(p) else { continue };
            match s.coding(c, t) {
                Ok(Some(back)) => worst = worst.max((back[0] - p[0]).abs() + (back[1] - p[1]).abs()),
                Ok(None) => worst = f64::INFINITY,
                Err(()) => {}
            }
        }
        acc.sampled(worst, tol, || format!("τ^e{} τ_{}", c + 1, s.edge_name(e)));
    }
    report.checks.push(acc.done());
    Ok(report)
}

fn failed_conditions(r: &ConditionReport) -> String {
    r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
}

/// The system on `Λ1 × Λ2` acting on one coordinate at a time.
pub fn product_sbfs(s1: &GeometricSBFS, s2: &GeometricSBFS) -> Result<GeometricSBFS> {
    if s1.dimension() != 1 || s2.dimension() != 1 {
        return Err(Error::InvalidInput("products are taken of systems on the line".into()));
    }
    for (k, s) in [s1, s2].into_iter().enumerate() {
        let r = validate_sbfs_conditions(s)?;
        if !r.passed() {
            return Err(Error::InvalidInput(format!("factor {} fails {}", k + 1, failed_conditions(&r))));
        }
    }
    let (g1, g2) = (&s1.graph, &s2.graph);
    let pair = |a: &str, b: &str| format!("{a}|{b}");
    let mut domains = Vec::new();
    for w in g1.vertex_ids() {
        for v in g2.vertex_ids() {
            domains.push((pair(g1.vertex_name(w), g2.vertex_name(v)), Region::product(s1.domain(w), s2.domain(v))?));
        }
    }
    let (mut maps, mut ranges) = (Vec::new(), Vec::new());
    for e in g1.edge_ids() {
        for v in g2.vertex_ids() {
            let dv = s2.domain(v);
            let pieces = s1.map(e).pieces().iter().map(|p| Piece::new(Region::product(p.domain(), dv)?, p.fx().clone(), Some(Poly2::y())));
            let name = pair(s1.edge_name(e), g2.vertex_name(v));
            maps.push((name.clone(), PiecewiseMap::new(pieces.collect::<Result<_>>()?)?));
            ranges.push((name, Region::product(s1.range(e), dv)?));
        }
    }
    for u in g1.vertex_ids() {
        let du = s1.domain(u);
        for f in g2.edge_ids() {
            let pieces = s2.map(f).pieces().iter().map(|p| {
                Piece::new(Region::product(du, p.domain())?, Poly2::x(), Some(p.fx().compose(&Poly2::y(), &Poly2::zero())))
            });
            let name = pair(g1.vertex_name(u), s2.edge_name(f));
            maps.push((name.clone(), PiecewiseMap::new(pieces.collect::<Result<_>>()?)?));
            ranges.push((name, Region::product(du, s2.range(f))?));
        }
    }
    GeometricSBFS::new(product_graph(g1, g2), domains, maps, ranges)
}

#[cfg(test)]
mod tests;
