use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// A polynomial in `x, y` with rational coefficients, keyed by the
/// exponent pair. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Q>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Q, i: u32, j: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Q::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Q::one(), 0, 1)
    }

    /// `a x + b`.
    pub fn affine(a: Q, b: Q) -> Self {
        Self::monomial(a, 1, 0) + Self::constant(b)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Q)>) -> Self {
        let mut p = Poly2::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, k: (u32, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn uses_y(&self) -> bool {
        self.terms.keys().any(|&(_, j)| j > 0)
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        (0..n).fold(Poly2::constant(Q::one()), |acc, _| &acc * self)
    }

    /// `p(fx(x, y), fy(x, y))`.
    pub fn compose(&self, fx: &Poly2, fy: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            let t = &(&fx.pow(i) * &fy.pow(j)) * &Poly2::constant(c.clone());
            out = out + t;
        }
        out
    }

    pub fn d_dx(&self) -> Poly2 {
        Poly2::from_terms(self.terms.iter().filter(|((i, _), _)| *i > 0).map(|(&(i, j), c)| ((i - 1, j), c * Q::from_integer(i.into()))))
    }

    pub fn d_dy(&self) -> Poly2 {
        Poly2::from_terms(self.terms.iter().filter(|((_, j), _)| *j > 0).map(|(&(i, j), c)| ((i, j - 1), c * Q::from_integer(j.into()))))
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let mut s = Q::zero();
        for (&(i, j), c) in &self.terms {
            s += c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize);
        }
        s
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), c)| q_to_f64(c) * powi(x, i) * powi(y, j)).sum()
    }

    /// `∫∫ p dx dy` over `(x0, x1) × (y0, y1)`.
    pub fn integrate_box(&self, x0: &Q, x1: &Q, y0: &Q, y1: &Q) -> Q {
        let prim = |a: &Q, b: &Q, n: u32| -> Q {
            let m = (n + 1) as usize;
            (num_traits::pow(b.clone(), m) - num_traits::pow(a.clone(), m)) / Q::from_integer(BigInt::from(m))
        };
        self.terms.iter().map(|(&(i, j), c)| c * prim(x0, x1, i) * prim(y0, y1, j)).fold(Q::zero(), |a, b| a + b)
    }
}

fn powi(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |a, _| a * x)
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, o: Poly2) -> Poly2 {
        for (k, c) in o.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, o: Poly2) -> Poly2 {
        self + (-o)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                out.add_term((i + k, j + l), c * d);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(i, j), c)| format!("{c}{}", monomial_name(i, j).map(|m| format!("*{m}")).unwrap_or_default())).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `x^2*y`, or `None` for the constant monomial.
pub fn monomial_name(i: u32, j: u32) -> Option<String> {
    let var = |v: &str, n: u32| match n {
        0 => None,
        1 => Some(String::from(v)),
        n => Some(format!("{v}^{n}")),
    };
    match (var("x", i), var("y", j)) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(format!("{a}*{b}")),
    }
}
