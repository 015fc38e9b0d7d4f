//! The systems worked out by hand: the three-vertex graph on `(0, 1)`, the
//! one-vertex graph on the unit square, and binary expansion for the
//! two-loop 1-graph.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::maps::{Piece, PiecewiseMap};
use super::poly::{q, Poly2, Q};
use super::region::{Cell, Interval, Region};
use super::{product_sbfs, GeometricSBFS};
use crate::graph::{library, KGraph};
use crate::{Error, Result};

pub const SYSTEM_NAMES: [&str; 4] = ["three_vertex_eight_edge", "one_vertex_fefe", "two_loops", "two_loops_squared"];

fn iv(a: Q, b: Q) -> Interval {
    Interval::new(a, b).expect("library intervals are nonempty")
}

fn thirds(k: i64) -> Interval {
    iv(q(k, 3), q(k + 1, 3))
}

fn line(i: Interval) -> Region {
    Region::Line(vec![i])
}

/// `x ↦ a x + b` on `dom`.
fn affine(dom: Interval, a: Q, b: Q) -> PiecewiseMap {
    PiecewiseMap::single(Piece::affine(dom, a, b).expect("library maps are affine"))
}

pub fn ex34_system() -> GeometricSBFS {
    let g = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
    let d = |v: &str| match v {
        "u" => thirds(0),
        "v" => thirds(1),
        _ => thirds(2),
    };
    // (edge, source, slope, intercept, range)
    let table: [(&str, &str, Q, Q, Interval); 8] = [
        ("a0", "v", q(1, 1), q(-1, 3), thirds(0)),
        ("a1", "v", q(1, 1), q(1, 3), thirds(2)),
        ("c0", "u", q(1, 2), q(1, 2), iv(q(1, 2), q(2, 3))),
        ("c1", "w", q(1, 2), q(0, 1), iv(q(1, 3), q(1, 2))),
        ("d0", "v", q(-1, 1), q(2, 3), thirds(0)),
        ("d1", "v", q(-1, 1), q(4, 3), thirds(2)),
        ("b0", "u", q(-1, 2), q(1, 2), iv(q(1, 3), q(1, 2))),
        ("b1", "w", q(-1, 2), q(1, 1), iv(q(1, 2), q(2, 3))),
    ];
    let domains = ["u", "v", "w"].iter().map(|v| (String::from(*v), line(d(v)))).collect();
    let mut maps = Vec::new();
    let mut ranges = Vec::new();
    for (e, src, a, b, r) in table {
        maps.push((String::from(e), affine(d(src), a, b)));
        ranges.push((String::from(e), line(r)));
    }
    GeometricSBFS::new(g, domains, maps, ranges).unwrap()
}

pub fn ex35_system() -> GeometricSBFS {
    let g = KGraph::from_spec(&library::one_vertex_fefe()).unwrap();
    let unit = || iv(q(0, 1), q(1, 1));
    let square = || Region::Plane(vec![Cell::rect(unit(), unit())]);
    let one = Poly2::constant(Q::one());
    let (x, y) = (Poly2::x(), Poly2::y());
    let xy = &x * &y;
    let map = |fx: Poly2, fy: Poly2| PiecewiseMap::single(Piece::new(square(), fx, Some(fy)).unwrap());
    let maps = vec![
        ("f1".into(), map(x.clone(), x.clone() + y.clone() - xy.clone())),
        ("f2".into(), map(x.clone(), xy)),
        ("e".into(), map(one.clone() - x.clone(), one - y.clone())),
    ];
    let half = |c: Poly2| Region::Plane(vec![Cell::cut(unit(), unit(), vec![c], q(1, 2))]);
    let ranges = vec![("f1".into(), half(y.clone() - x.clone())), ("f2".into(), half(x - y)), ("e".into(), square())];
    GeometricSBFS::new(g, vec![("v".into(), square())], maps, ranges).unwrap()
}

/// `τ_a(x) = x/2`, `τ_b(x) = (x+1)/2` on `(0, 1)`.
pub fn binary_system() -> GeometricSBFS {
    let g = KGraph::from_spec(&library::two_loops()).unwrap();
    let unit = || iv(q(0, 1), q(1, 1));
    let maps = vec![("a".into(), affine(unit(), q(1, 2), q(0, 1))), ("b".into(), affine(unit(), q(1, 2), q(1, 2)))];
    let ranges = vec![("a".into(), line(iv(q(0, 1), q(1, 2)))), ("b".into(), line(iv(q(1, 2), q(1, 1))))];
    GeometricSBFS::new(g, vec![("p".into(), line(unit()))], maps, ranges).unwrap()
}

pub fn standard_system(name: &str) -> Result<GeometricSBFS> {
    match name {
        "three_vertex_eight_edge" => Ok(ex34_system()),
        "one_vertex_fefe" => Ok(ex35_system()),
        "two_loops" => Ok(binary_system()),
        "two_loops_squared" => product_sbfs(&binary_system(), &binary_system()),
        other => Err(Error::UnknownLibraryGraph(other.into())),
    }
}
