//! Exact piecewise affine maps on the line.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::maps::PiecewiseMap;
use super::poly::Q;
use super::region::Interval;

/// `x ↦ a x + b` on `dom`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Affine {
    pub dom: Interval,
    pub a: Q,
    pub b: Q,
}

pub(crate) type Pw = Vec<Affine>;

pub(crate) fn of_map(m: &PiecewiseMap) -> Pw {
    let mut out = Vec::new();
    for p in m.pieces() {
        let (a, b) = (p.fx().coeff(1, 0), p.fx().coeff(0, 0));
        if let super::Region::Line(parts) = p.domain() {
            for i in parts {
                out.push(Affine { dom: i.clone(), a: a.clone(), b: b.clone() });
            }
        }
    }
    out
}

/// Branchwise inverse: defined on the image of each branch.
pub(crate) fn inverse(f: &Pw) -> Pw {
    f.iter()
        .map(|g| {
            let (u, v) = (&g.a * &g.dom.lo + &g.b, &g.a * &g.dom.hi + &g.b);
            let dom = if u < v { Interval { lo: u, hi: v } } else { Interval { lo: v, hi: u } };
            let a = Q::one() / &g.a;
            Affine { dom, b: -(&g.b * &a), a }
        })
        .collect()
}

/// `f ∘ g`, defined where `g` is defined and lands in the domain of `f`.
pub(crate) fn compose(f: &Pw, g: &Pw) -> Pw {
    let mut out = Vec::new();
    for gp in g {
        for fp in f {
            // preimage of fp.dom under gp
            let (u, v) = ((&fp.dom.lo - &gp.b) / &gp.a, (&fp.dom.hi - &gp.b) / &gp.a);
            let pre = if u < v { Interval { lo: u, hi: v } } else { Interval { lo: v, hi: u } };
            if let Some(dom) = gp.dom.intersect(&pre) {
                out.push(Affine { dom, a: &fp.a * &gp.a, b: &fp.a * &gp.b + &fp.b });
            }
        }
    }
    out
}

fn at<'a>(f: &'a Pw, x: &Q) -> Option<&'a Affine> {
    f.iter().find(|p| &p.dom.lo < x && x < &p.dom.hi)
}

/// Length of the set where `f` and `g` differ, counting points where only
/// one of them is defined.
pub(crate) fn disagreement(f: &Pw, g: &Pw) -> Q {
    let mut cuts: Vec<Q> = f.iter().chain(g).flat_map(|p| [p.dom.lo.clone(), p.dom.hi.clone()]).collect();
    cuts.sort();
    cuts.dedup();
    let two = Q::from_integer(2.into());
    let mut total = Q::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let same = match (at(f, &mid), at(g, &mid)) {
            (None, None) => true,
            (Some(p), Some(q)) => p.a == q.a && p.b == q.b,
            _ => false,
        };
        if !same {
            total += &w[1] - &w[0];
        }
    }
    total.abs()
}
