//! Scalars: rationals, floats, and sums of rational multiples of square
//! roots, which is what `Φ^{±1/2}` needs to stay exact.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// A parameter value: always a float, and a rational when known exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    pub approx: f64,
    pub exact: Option<BigRational>,
}

impl Real {
    pub fn rational(q: BigRational) -> Self {
        Real { approx: ToPrimitive::to_f64(&q).unwrap_or(f64::NAN), exact: Some(q) }
    }

    pub fn float(x: f64) -> Self {
        Real { approx: x, exact: None }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    /// `"3"`, `"-3/10"`, `"0.3"`, `"1e-3"`: decimal literals are read as the
    /// exact decimal fraction they spell.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot read `{s}` as a number"));
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Self::rational(BigRational::new(n, d)));
        }
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
        if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = alloc::format!("{int}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10u32);
        let mut q = BigRational::from_integer(digits);
        if scale >= 0 {
            q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
        } else {
            q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
        }
        Ok(Self::rational(if neg { -q } else { q }))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", self.approx),
        }
    }
}

/// Arithmetic that measures take values in: `f64` or `BigRational`.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_real(r: &Real) -> Result<Self>;
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Whether this is the exact field.
    const EXACT: bool;

    fn powi(&self, n: i32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc * self.clone();
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn from_real(r: &Real) -> Result<Self> {
        Ok(r.approx)
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_real(r: &Real) -> Result<Self> {
        r.exact.clone().ok_or_else(|| Error::NotExact(r.approx.to_string()))
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Coefficients of step functions. `Mass` is the field masses live in;
/// square roots of positive masses must be representable.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Zero
{
    type Mass: Field;
    fn from_mass(m: &Self::Mass) -> Self;
    fn sqrt_mass(m: &Self::Mass) -> Result<Self>;
    fn to_f64(&self) -> f64;
    fn from_i64(n: i64) -> Self {
        Self::from_mass(&<Self::Mass as Field>::from_i64(n))
    }
}

impl Scalar for f64 {
    type Mass = f64;
    fn from_mass(m: &f64) -> Self {
        *m
    }
    fn sqrt_mass(m: &f64) -> Result<Self> {
        if *m < 0.0 {
            return Err(Error::InvalidInput(format!("square root of negative {m}")));
        }
        Ok(libm::sqrt(*m))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

mod libm {
    pub fn sqrt(x: f64) -> f64 {
        num_traits::Float::sqrt(x)
    }
}

/// `Σ c_r √r` with rational `c_r` and distinct squarefree `r`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<BigUint, BigRational>,
}

impl Surd {
    pub fn rational(q: BigRational) -> Self {
        Self::term(q, BigUint::one())
    }

    fn term(c: BigRational, r: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(r, c);
        }
        Surd { terms }
    }

    /// `√q` for rational `q >= 0`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidInput(format!("square root of negative {q}")));
        }
        if q.is_zero() {
            return Ok(Surd::default());
        }
        // √(p/d) = √(p d) / d
        let p = q.numer().magnitude();
        let d = q.denom().magnitude();
        let (s, t) = split_square(&(p * d))?;
        let c = BigRational::new(BigInt::from(s), BigInt::from(d.clone()));
        Ok(Self::term(c, t))
    }

    /// The rational value, if there are no irrational terms.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| Field::to_f64(c) * libm::sqrt(r.to_f64().unwrap_or(f64::NAN)))
            .sum()
    }

    fn add_term(&mut self, r: BigUint, c: BigRational) {
        let e = self.terms.entry(r).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            let zeros: alloc::vec::Vec<_> = self.terms.iter().filter(|(_, c)| c.is_zero()).map(|(r, _)| r.clone()).collect();
            for z in zeros {
                self.terms.remove(&z);
            }
        }
    }
}

/// `n = s² t` with `t` squarefree.
fn split_square(n: &BigUint) -> Result<(BigUint, BigUint)> {
    const BOUND: u64 = 1_000_000;
    let mut s = BigUint::one();
    let mut t = BigUint::one();
    let mut r = n.clone();
    let mut d: u64 = 2;
    while d <= BOUND && BigUint::from(d) * BigUint::from(d) <= r {
        let dd = BigUint::from(d);
        let mut e = 0u32;
        while (&r % &dd).is_zero() {
            r /= &dd;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &dd;
        }
        if e % 2 == 1 {
            t *= &dd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let b = BigUint::from(BOUND);
    if r.is_one() {
    } else if d <= BOUND || r < &b * &b {
        // trial division ran past √r, so r is prime
        t *= r;
    } else {
        let root = r.sqrt();
        if &root * &root == r {
            s *= root;
        } else if r < &b * &b * &b {
            // at most two prime factors above the bound, and not a square
            t *= r;
        } else {
            return Err(Error::NotExact(format!("cannot factor {n}")));
        }
    }
    Ok((s, t))
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::rational(BigRational::one())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        for (r, c) in rhs.terms {
            self.add_term(r, c);
        }
        self
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let mut out = Surd::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                // √a √b = g √((a/g)(b/g)) for squarefree a, b
                let g = a.gcd(b);
                let r = (a / &g) * (b / &g);
                let c = ca * cb * BigRational::from_integer(BigInt::from(g));
                out.add_term(r, c);
            }
        }
        out
    }
}

impl Scalar for Surd {
    type Mass = BigRational;
    fn from_mass(m: &BigRational) -> Self {
        Surd::rational(m.clone())
    }
    fn sqrt_mass(m: &BigRational) -> Result<Self> {
        Surd::sqrt_rational(m)
    }
    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}√{r}")?;
            }
        }
        Ok(())
    }
}

/// Debug rendering of a rational for reports.
pub fn rational_string(q: &BigRational) -> String {
    format!("{q}")
}
