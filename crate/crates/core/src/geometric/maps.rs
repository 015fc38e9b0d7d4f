use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::poly::{q_to_f64, Poly2, Q};
use super::region::{Interval, Region, Side};
use crate::{Error, Result};

/// A polynomial with its coefficients already converted to `f64`.
#[derive(Clone, Debug, PartialEq)]
struct Fast(Vec<(i32, i32, f64)>);

impl Fast {
    fn new(p: &Poly2) -> Self {
        Fast(p.terms().map(|(&(i, j), c)| (i as i32, j as i32, q_to_f64(c))).collect())
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.iter().map(|&(i, j, c)| c * num_traits::Float::powi(x, i) * num_traits::Float::powi(y, j)).sum()
    }
}

/// One branch of a prefixing map: affine `fx(x)` on a line, or a pair of
/// polynomials of total degree at most 2 in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    domain: Region,
    fx: Poly2,
    fy: Option<Poly2>,
    jac: Poly2,
    fast: [Fast; 7],
}

impl Piece {
    pub fn new(domain: Region, fx: Poly2, fy: Option<Poly2>) -> Result<Self> {
        domain.check()?;
        let bad = |why: &str| Error::InvalidInput(format!("piece map {why}"));
        let jac = match (domain.dimension(), &fy) {
            (1, None) => {
                if fx.uses_y() || fx.degree() > 1 {
                    return Err(bad("on a line must be affine in x"));
                }
                fx.d_dx()
            }
            (2, Some(fy)) => {
                if fx.degree() > 2 || fy.degree() > 2 {
                    return Err(bad("in the plane must have total degree at most 2"));
                }
                &fx.d_dx() * &fy.d_dy() - &fx.d_dy() * &fy.d_dx()
            }
            (1, Some(_)) => return Err(bad("on a line takes no y component")),
            _ => return Err(bad("in the plane needs a y component")),
        };
        let fyp = fy.clone().unwrap_or_default();
        let fast = [&fx, &fyp, &fx.d_dx(), &fx.d_dy(), &fyp.d_dx(), &fyp.d_dy(), &jac].map(Fast::new);
        Ok(Piece { domain, fx, fy, jac, fast })
    }

    pub fn affine(domain: Interval, a: Q, b: Q) -> Result<Self> {
        Self::new(Region::Line(alloc::vec![domain]), Poly2::affine(a, b), None)
    }

    pub fn domain(&self) -> &Region {
        &self.domain
    }

    pub fn fx(&self) -> &Poly2 {
        &self.fx
    }

    pub fn fy(&self) -> Option<&Poly2> {
        self.fy.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn is_affine(&self) -> bool {
        self.fx.degree() <= 1 && self.fy.as_ref().is_none_or(|p| p.degree() <= 1)
    }

    /// Slope on a line, Jacobian determinant in the plane.
    pub fn jacobian(&self) -> &Poly2 {
        &self.jac
    }

    /// `|J|` as a polynomial, after checking that `J` keeps one sign and
    /// does not vanish on an interior sample.
    pub fn rn_polynomial(&self) -> Result<Poly2> {
        let mut sign = 0i8;
        for p in self.domain.sample(if self.dimension() == 1 { 100 } else { 10 }) {
            let j = self.fast[6].eval(p[0], p[1]);
            let s = if j > 0.0 { 1 } else if j < 0.0 { -1 } else { 0 };
            if s == 0 || (sign != 0 && s != sign) {
                return Err(Error::DegeneratePiece);
            }
            sign = s;
        }
        Ok(if sign < 0 { -self.jac.clone() } else { self.jac.clone() })
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let y = if self.fy.is_some() { self.fast[1].eval(p[0], p[1]) } else { 0.0 };
        [self.fast[0].eval(p[0], p[1]), y]
    }

    pub fn jacobian_at(&self, p: [f64; 2]) -> f64 {
        self.fast[6].eval(p[0], p[1])
    }

    /// The preimage of `t` inside this piece, by Newton's method in the
    /// plane.
    pub fn invert(&self, t: [f64; 2]) -> Option<[f64; 2]> {
        let p = if self.dimension() == 1 {
            let a = self.fast[2].eval(0.0, 0.0);
            [(t[0] - self.fast[0].eval(0.0, 0.0)) / a, 0.0]
        } else {
            let [(x0, x1), (y0, y1)] = self.domain.bounding_box();
            let mut p = [(x0 + x1) / 2.0, (y0 + y1) / 2.0];
            for _ in 0..60 {
                let f = self.apply(p);
                let r = [f[0] - t[0], f[1] - t[1]];
                if r[0].abs() + r[1].abs() < 1e-15 {
                    break;
                }
                let [a, b, c, d] = [2, 3, 4, 5].map(|k| self.fast[k].eval(p[0], p[1]));
                let det = a * d - b * c;
                if det == 0.0 {
                    return None;
                }
                p = [p[0] - (d * r[0] - b * r[1]) / det, p[1] - (a * r[1] - c * r[0]) / det];
            }
            let f = self.apply(p);
            if (f[0] - t[0]).abs() + (f[1] - t[1]).abs() > 1e-12 {
                return None;
            }
            p
        };
        let coords = &p[..self.dimension()];
        (self.domain.side(coords) != Side::Outside).then_some(p)
    }

    /// Exact image of a line piece.
    pub(crate) fn image_intervals(&self) -> Vec<Interval> {
        let Region::Line(parts) = &self.domain else { return Vec::new() };
        let (a, b) = (self.fx.coeff(1, 0), self.fx.coeff(0, 0));
        parts
            .iter()
            .map(|i| {
                let (u, v) = (&a * &i.lo + &b, &a * &i.hi + &b);
                if u < v { Interval { lo: u, hi: v } } else { Interval { lo: v, hi: u } }
            })
            .collect()
    }

    /// `∫ |J|` over a piece whose parts are all uncut boxes.
    pub(crate) fn image_area(&self) -> Option<Q> {
        let Region::Plane(cells) = &self.domain else { return None };
        let rn = self.rn_polynomial().ok()?;
        let mut total = Q::zero();
        for c in cells {
            if !c.is_box() {
                return None;
            }
            total += rn.integrate_box(&c.x.lo, &c.x.hi, &c.y.lo, &c.y.hi);
        }
        Some(total.abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap {
    pieces: Vec<Piece>,
}

impl PiecewiseMap {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidInput("a map needs at least one piece".into()));
        };
        if pieces.iter().any(|p| p.dimension() != first.dimension()) {
            return Err(Error::MalformedRegion("pieces of one map live in different dimensions".into()));
        }
        Ok(PiecewiseMap { pieces })
    }

    pub fn single(piece: Piece) -> Self {
        PiecewiseMap { pieces: alloc::vec![piece] }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dimension(&self) -> usize {
        self.pieces[0].dimension()
    }

    pub fn is_affine(&self) -> bool {
        self.pieces.iter().all(Piece::is_affine)
    }

    /// Union of the piece domains.
    pub fn domain(&self) -> Region {
        match self.pieces[0].domain() {
            Region::Line(_) => Region::Line(
                self.pieces.iter().flat_map(|p| match p.domain() {
                    Region::Line(v) => v.clone(),
                    Region::Plane(_) => Vec::new(),
                }).collect(),
            ),
            Region::Plane(_) => Region::Plane(
                self.pieces.iter().flat_map(|p| match p.domain() {
                    Region::Plane(v) => v.clone(),
                    Region::Line(_) => Vec::new(),
                }).collect(),
            ),
        }
    }

    pub fn piece_at(&self, p: &[f64]) -> Result<&Piece> {
        let mut boundary = false;
        for piece in &self.pieces {
            match piece.domain().side(p) {
                Side::Inside => return Ok(piece),
                Side::Boundary => boundary = true,
                Side::Outside => {}
            }
        }
        Err(if boundary { Error::OnBoundary } else { Error::OutOfDomain })
    }

    pub fn apply(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        Ok(self.piece_at(&p[..self.dimension()])?.apply(p))
    }

    pub fn invert(&self, t: [f64; 2]) -> Option<[f64; 2]> {
        self.pieces.iter().find_map(|p| p.invert(t))
    }
}

/// `Φ` at an interior point: `|slope|` on a line, `|det J|` in the plane.
pub fn rn_derivative_geometric(map: &PiecewiseMap, point: &[f64]) -> Result<f64> {
    if point.len() != map.dimension() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, map lives in dimension {}", point.len(), map.dimension())));
    }
    let piece = map.piece_at(point)?;
    let j = piece.jacobian_at([point[0], point.get(1).copied().unwrap_or(0.0)]).abs();
    if j == 0.0 {
        return Err(Error::DegeneratePiece);
    }
    Ok(j)
}

/// `Φ` at a rational interior point, exactly.
pub fn rn_derivative_exact(map: &PiecewiseMap, point: &[Q]) -> Result<Q> {
    let f: Vec<f64> = point.iter().map(q_to_f64).collect();
    if f.len() != map.dimension() {
        return Err(Error::InvalidInput(format!("point has {} coordinates, map lives in dimension {}", f.len(), map.dimension())));
    }
    let piece = map.piece_at(&f)?;
    let zero = Q::zero();
    let j = piece.jacobian().eval(&point[0], point.get(1).unwrap_or(&zero)).abs();
    if j.is_zero() {
        return Err(Error::DegeneratePiece);
    }
    Ok(j)
}
