use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::poly::{q_to_f64, Poly2, Q};
use crate::{Error, Result};

/// Margin used to call a sampled point a boundary point.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Inside,
    Boundary,
    Outside,
}

/// The open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo >= hi {
            return Err(Error::MalformedRegion(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&o.lo).clone();
        let hi = (&self.hi).min(&o.hi).clone();
        (lo < hi).then_some(Interval { lo, hi })
    }

    fn side(&self, x: f64) -> Side {
        let (lo, hi) = (q_to_f64(&self.lo), q_to_f64(&self.hi));
        if x > lo + BOUNDARY_EPS && x < hi - BOUNDARY_EPS {
            Side::Inside
        } else if x >= lo - BOUNDARY_EPS && x <= hi + BOUNDARY_EPS {
            Side::Boundary
        } else {
            Side::Outside
        }
    }

    fn bounds_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.lo), q_to_f64(&self.hi))
    }
}

/// A box `x × y` cut down by strict inequalities `p > 0`. A cut box has
/// no computable area of its own and must declare one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub x: Interval,
    pub y: Interval,
    pub constraints: Vec<Poly2>,
    pub area: Option<Q>,
}

impl Cell {
    pub fn rect(x: Interval, y: Interval) -> Self {
        Cell { x, y, constraints: Vec::new(), area: None }
    }

    pub fn cut(x: Interval, y: Interval, constraints: Vec<Poly2>, area: Q) -> Self {
        Cell { x, y, constraints, area: Some(area) }
    }

    pub fn is_box(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn area(&self) -> Result<Q> {
        if self.is_box() {
            return Ok(self.x.len() * self.y.len());
        }
        match &self.area {
            Some(a) if !a.is_negative() => Ok(a.clone()),
            Some(a) => Err(Error::MalformedRegion(format!("negative area {a}"))),
            None => Err(Error::MalformedRegion("cell with constraints needs a declared area".into())),
        }
    }

    fn side(&self, x: f64, y: f64) -> Side {
        let mut side = match (self.x.side(x), self.y.side(y)) {
            (Side::Inside, Side::Inside) => Side::Inside,
            (Side::Outside, _) | (_, Side::Outside) => return Side::Outside,
            _ => Side::Boundary,
        };
        for c in &self.constraints {
            let v = c.eval_f64(x, y);
            if v < -BOUNDARY_EPS {
                return Side::Outside;
            }
            if v <= BOUNDARY_EPS {
                side = Side::Boundary;
            }
        }
        side
    }

    fn intersect_box(&self, o: &Cell) -> Option<Cell> {
        Some(Cell::rect(self.x.intersect(&o.x)?, self.y.intersect(&o.y)?))
    }
}

/// A finite union of parts that overlap at most in measure zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Line(Vec<Interval>),
    Plane(Vec<Cell>),
}

impl Region {
    pub fn interval(lo: Q, hi: Q) -> Result<Self> {
        Ok(Region::Line(alloc::vec![Interval::new(lo, hi)?]))
    }

    pub fn rect(x: (Q, Q), y: (Q, Q)) -> Result<Self> {
        Ok(Region::Plane(alloc::vec![Cell::rect(Interval::new(x.0, x.1)?, Interval::new(y.0, y.1)?)]))
    }

    pub fn dimension(&self) -> usize {
        match self {
            Region::Line(_) => 1,
            Region::Plane(_) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Line(p) => p.is_empty(),
            Region::Plane(p) => p.is_empty(),
        }
    }

    /// True when every part is an interval or an uncut box, so measures
    /// of intersections are exact.
    pub fn is_exact(&self) -> bool {
        match self {
            Region::Line(_) => true,
            Region::Plane(cells) => cells.iter().all(Cell::is_box),
        }
    }

    /// Parts must be nonempty and, where exactly checkable, disjoint.
    pub fn check(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::MalformedRegion("region has no parts".into()));
        }
        let overlap = match self {
            Region::Line(p) => pairwise(p, |a, b| a.intersect(b).map(|i| i.len())),
            Region::Plane(p) => {
                for c in p {
                    c.area()?;
                }
                pairwise(p, |a, b| if a.is_box() && b.is_box() { a.intersect_box(b).map(|c| c.area().unwrap()) } else { None })
            }
        };
        match overlap {
            Some(m) => Err(Error::MalformedRegion(format!("parts overlap in measure {m}"))),
            None => Ok(()),
        }
    }

    pub fn measure(&self) -> Result<Q> {
        match self {
            Region::Line(p) => Ok(p.iter().map(Interval::len).fold(Q::zero(), |a, b| a + b)),
            Region::Plane(p) => p.iter().map(Cell::area).try_fold(Q::zero(), |a, b| Ok(a + b?)),
        }
    }

    pub fn side(&self, p: &[f64]) -> Side {
        let sides: Vec<Side> = match self {
            Region::Line(parts) => parts.iter().map(|i| i.side(p[0])).collect(),
            Region::Plane(parts) => parts.iter().map(|c| c.side(p[0], p[1])).collect(),
        };
        if sides.contains(&Side::Inside) {
            Side::Inside
        } else if sides.contains(&Side::Boundary) {
            Side::Boundary
        } else {
            Side::Outside
        }
    }

    /// Sorted, with touching intervals merged. Only for `Line`.
    pub fn normalized(&self) -> Vec<Interval> {
        let Region::Line(parts) = self else { return Vec::new() };
        let mut v = parts.clone();
        v.sort();
        let mut out: Vec<Interval> = Vec::new();
        for i in v {
            match out.last_mut() {
                Some(last) if i.lo <= last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                    }
                }
                _ => out.push(i),
            }
        }
        out
    }

    /// `μ(self ∩ other)` when both regions are exact.
    pub fn intersection_measure(&self, other: &Region) -> Option<Q> {
        match (self, other) {
            (Region::Line(_), Region::Line(_)) => {
                let (a, b) = (self.normalized(), other.normalized());
                Some(a.iter().flat_map(|i| b.iter().filter_map(move |j| i.intersect(j))).map(|i| i.len()).fold(Q::zero(), |x, y| x + y))
            }
            (Region::Plane(a), Region::Plane(b)) if self.is_exact() && other.is_exact() => Some(
                a.iter()
                    .flat_map(|c| b.iter().filter_map(move |d| c.intersect_box(d)))
                    .map(|c| c.area().unwrap())
                    .fold(Q::zero(), |x, y| x + y),
            ),
            _ => None,
        }
    }

    /// `[x0, x1] × [y0, y1]` (the `y` range is `[0, 0]` on a line).
    pub fn bounding_box(&self) -> [(f64, f64); 2] {
        let mut bx = (f64::INFINITY, f64::NEG_INFINITY);
        let mut by = (f64::INFINITY, f64::NEG_INFINITY);
        let grow = |b: &mut (f64, f64), (lo, hi): (f64, f64)| {
            b.0 = b.0.min(lo);
            b.1 = b.1.max(hi);
        };
        match self {
            Region::Line(p) => {
                for i in p {
                    grow(&mut bx, i.bounds_f64());
                }
                by = (0.0, 0.0);
            }
            Region::Plane(p) => {
                for c in p {
                    grow(&mut bx, c.x.bounds_f64());
                    grow(&mut by, c.y.bounds_f64());
                }
            }
        }
        [bx, by]
    }

    /// Deterministic interior sample: an `n`-point grid on a line, an
    /// `n × n` grid in the plane with the rows offset so that no point
    /// sits on the diagonal. Boundary points are dropped.
    pub fn sample(&self, n: usize) -> Vec<[f64; 2]> {
        let [(x0, x1), (y0, y1)] = self.bounding_box();
        let mut out = Vec::new();
        for i in 0..n {
            let x = x0 + (x1 - x0) * (i as f64 + 0.5) / n as f64;
            if self.dimension() == 1 {
                if self.side(&[x]) == Side::Inside {
                    out.push([x, 0.0]);
                }
                continue;
            }
            for j in 0..n {
                let y = y0 + (y1 - y0) * (j as f64 + 0.381_966) / n as f64;
                if self.side(&[x, y]) == Side::Inside {
                    out.push([x, y]);
                }
            }
        }
        out
    }

    /// Cartesian product of two line regions.
    pub fn product(a: &Region, b: &Region) -> Result<Region> {
        match (a, b) {
            (Region::Line(p), Region::Line(q)) => {
                Ok(Region::Plane(p.iter().flat_map(|i| q.iter().map(move |j| Cell::rect(i.clone(), j.clone()))).collect()))
            }
            _ => Err(Error::MalformedRegion("products are only taken of line regions".into())),
        }
    }
}

fn pairwise<T>(parts: &[T], overlap: impl Fn(&T, &T) -> Option<Q>) -> Option<Q> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if let Some(m) = overlap(a, b) {
                return Some(m);
            }
        }
    }
    None
}
