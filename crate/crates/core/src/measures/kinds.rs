//! Parameters of the non-PF measure kinds.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{Field, Real};
use crate::{Error, Result};

fn bad(msg: alloc::string::String) -> Error {
    Error::InvalidParams(msg)
}

/// A sequence `i ↦ γ_i`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gammas {
    /// `γ_i = c · r^i`.
    Geometric { c: Real, r: Real },
    /// Listed terms, then an unknown tail. `tail_bound` bounds
    /// `Σ s|γ_i|/(1 - s|γ_i|)` over the unlisted terms, `s` being the
    /// scale the consumer asks for (2 for Kakutani, 1 otherwise).
    Explicit { values: Vec<Real>, tail_bound: Real },
}

impl Gammas {
    pub fn geometric(c: Real, r: Real) -> Self {
        Gammas::Geometric { c, r }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Gammas::Geometric { c, r } => c.is_exact() && r.is_exact(),
            Gammas::Explicit { values, .. } => values.iter().all(Real::is_exact),
        }
    }

    /// Term `i`, where the list (if explicit) starts at index `start`.
    pub fn at(&self, i: usize, start: usize) -> Real {
        match self {
            Gammas::Geometric { c, r } => match (&c.exact, &r.exact) {
                (Some(c), Some(r)) => Real::rational(c * num_traits::pow(r.clone(), i)),
                _ => Real::float(c.approx * num_traits::Float::powi(r.approx, i as i32)),
            },
            Gammas::Explicit { values, .. } => {
                i.checked_sub(start).and_then(|j| values.get(j)).cloned().unwrap_or_else(|| Real::int(0))
            }
        }
    }

    /// Upper bound for `Σ_{i > n} s|γ_i| / (1 - s|γ_i|)`.
    pub fn tail(&self, n: usize, start: usize, s: f64) -> f64 {
        let bound = match self {
            Gammas::Geometric { c, r } => {
                let (c, r) = (c.approx.abs(), r.approx.abs());
                let head = s * c * num_traits::Float::powi(r, n as i32 + 1);
                head / ((1.0 - r) * (1.0 - head))
            }
            Gammas::Explicit { values, tail_bound } => {
                let listed: f64 = values
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j + start > n)
                    .map(|(_, g)| s * g.approx.abs() / (1.0 - s * g.approx.abs()))
                    .sum();
                listed + tail_bound.approx
            }
        };
        bound * (1.0 + 1e-12)
    }

    /// Checks `s|γ_i| < 1` for every `i ≥ start`.
    fn check(&self, start: usize, s: f64, what: &str) -> Result<()> {
        match self {
            Gammas::Geometric { c, r } => {
                if r.approx.abs() >= 1.0 {
                    return Err(bad(format!("{what}: ratio {r} must have |r| < 1")));
                }
                let first = self.at(start, start);
                if s * first.approx.abs() >= 1.0 {
                    return Err(bad(format!("{what}: first term {first} too large (c = {c})")));
                }
            }
            Gammas::Explicit { values, tail_bound } => {
                if let Some(g) = values.iter().find(|g| s * g.approx.abs() >= 1.0) {
                    return Err(bad(format!("{what}: term {g} too large")));
                }
                if tail_bound.approx < 0.0 {
                    return Err(bad(format!("{what}: negative tail bound")));
                }
            }
        }
        Ok(())
    }
}

/// Product measure with letter probabilities `½ ± γ_t`, `t ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KakutaniSpec {
    pub gammas: Gammas,
}

impl KakutaniSpec {
    pub fn new(gammas: Gammas) -> Self {
        KakutaniSpec { gammas }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        self.gammas.check(1, 2.0, "gammas")
    }

    pub fn gamma(&self, t: usize) -> Real {
        self.gammas.at(t, 1)
    }

    /// Certified multiplicative error of the ratio at `depth` when the
    /// numerator is shifted by up to `shift` letters.
    pub fn mult_error(&self, depth: usize, shift: usize) -> f64 {
        libm_exp(2.0 * self.gammas.tail(depth.saturating_sub(shift), 1, 2.0))
    }
}

pub(crate) fn libm_exp(x: f64) -> f64 {
    num_traits::Float::exp(x)
}

/// Two-state Markov chain on the letters of the one-vertex graph.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSpec {
    pub t: Vec<Vec<Real>>,
    pub lambda: Vec<Real>,
}

impl MarkovSpec {
    pub fn new(t: Vec<Vec<Real>>, lambda: Vec<Real>) -> Self {
        MarkovSpec { t, lambda }
    }

    /// `T_x = [[x, 1-x], [1-x, x]]` with uniform `λ`.
    pub fn symmetric(x: Real) -> Self {
        let y = match &x.exact {
            Some(q) => Real::rational(BigRational::one() - q),
            None => Real::float(1.0 - x.approx),
        };
        MarkovSpec { t: vec![vec![x.clone(), y.clone()], vec![y, x]], lambda: vec![Real::int(1), Real::int(1)] }
    }

    fn exact(&self) -> bool {
        self.t.iter().flatten().chain(&self.lambda).all(Real::is_exact)
    }

    /// Normalizes `λ` to a probability vector and checks the chain.
    pub(crate) fn validated(self) -> Result<Self> {
        if self.t.len() != 2 || self.t.iter().any(|r| r.len() != 2) || self.lambda.len() != 2 {
            return Err(bad("markov: T must be 2x2 and lambda of length 2".into()));
        }
        if self.t.iter().flatten().chain(&self.lambda).any(|x| x.approx <= 0.0) {
            return Err(bad("markov: entries of T and lambda must be positive".into()));
        }
        if self.exact() {
            self.validated_in::<BigRational>(|d| !d.is_zero(), |d| !d.is_zero())
        } else {
            self.validated_in::<f64>(|d| d.abs() > 1e-12, |d| d.abs() > 1e-10)
        }
    }

    fn validated_in<M: Field>(self, row_bad: impl Fn(&M) -> bool, fix_bad: impl Fn(&M) -> bool) -> Result<Self> {
        let t: Vec<Vec<M>> =
            self.t.iter().map(|r| r.iter().map(M::from_real).collect::<Result<_>>()).collect::<Result<_>>()?;
        let l: Vec<M> = self.lambda.iter().map(M::from_real).collect::<Result<_>>()?;
        for (i, r) in t.iter().enumerate() {
            if row_bad(&(r[0].clone() + r[1].clone() - M::one())) {
                return Err(bad(format!("markov: row {} of T does not sum to 1", i + 1)));
            }
        }
        let total = l[0].clone() + l[1].clone();
        let l: Vec<M> = l.into_iter().map(|x| x / total.clone()).collect();
        for j in 0..2 {
            let lt = l[0].clone() * t[0][j].clone() + l[1].clone() * t[1][j].clone();
            if fix_bad(&(lt - l[j].clone())) {
                return Err(bad("markov: lambda is not fixed by T".into()));
            }
        }
        let lambda = if M::EXACT {
            let total = self.lambda[0].exact.clone().unwrap() + self.lambda[1].exact.clone().unwrap();
            self.lambda.iter().map(|x| Real::rational(x.exact.clone().unwrap() / &total)).collect()
        } else {
            l.iter().map(|x| Real::float(x.to_f64())).collect()
        };
        Ok(MarkovSpec { t: self.t, lambda })
    }

    /// `T(i+1, j+1) = T(i, j)` and uniform `λ`: the letter shift preserves
    /// the chain, so Radon-Nikodym ratios are constant from level 1.
    pub fn shift_invariant(&self) -> bool {
        let eq = |a: &Real, b: &Real| match (&a.exact, &b.exact) {
            (Some(x), Some(y)) => x == y,
            _ => (a.approx - b.approx).abs() <= 1e-12,
        };
        eq(&self.t[0][0], &self.t[1][1]) && eq(&self.t[0][1], &self.t[1][0]) && eq(&self.lambda[0], &self.lambda[1])
    }
}

/// Markov measure on the star graphs. One probability vector per cycle of
/// `φ`, cycles ordered by their least element.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda2NSpec {
    /// Expected permutation (1-based); checked against the graph.
    pub perm: Option<Vec<usize>>,
    pub x: Vec<Vec<Real>>,
    /// Derived transition matrix, filled in at construction.
    pub t: Vec<Vec<Real>>,
}

impl Lambda2NSpec {
    pub fn new(perm: Option<Vec<usize>>, x: Vec<Vec<Real>>) -> Self {
        Lambda2NSpec { perm, x, t: Vec::new() }
    }

    pub(crate) fn resolved(mut self, phi: &[usize]) -> Result<Self> {
        let m = phi.len();
        if let Some(p) = &self.perm {
            if p.len() != m || p.iter().zip(phi).any(|(a, b)| *a != b + 1) {
                return Err(bad(format!("lambda2n: permutation {p:?} does not match the graph")));
            }
        }
        let cycles = cycles(phi);
        if self.x.len() != cycles.len() {
            return Err(bad(format!("lambda2n: need {} vectors (one per cycle), got {}", cycles.len(), self.x.len())));
        }
        for x in &self.x {
            if x.len() != m || x.iter().any(|v| v.approx <= 0.0 || v.approx >= 1.0) {
                return Err(bad(format!("lambda2n: each vector needs {m} entries in (0,1)")));
            }
            let sum_ok = if x.iter().all(Real::is_exact) {
                x.iter().map(|v| v.exact.clone().unwrap()).fold(BigRational::zero(), |a, b| a + b).is_one()
            } else {
                (x.iter().map(|v| v.approx).sum::<f64>() - 1.0).abs() <= 1e-12
            };
            if !sum_ok {
                return Err(bad("lambda2n: vectors must sum to 1".into()));
            }
        }
        let inv = {
            let mut inv = vec![0; m];
            for (i, &j) in phi.iter().enumerate() {
                inv[j] = i;
            }
            inv
        };
        let mut t = vec![Vec::new(); m];
        for (c, cycle) in cycles.iter().enumerate() {
            // cycle[n] = φ^n(c_m); row cycle[n] reads x^c at φ^{-n}(j)
            for (n, &i) in cycle.iter().enumerate() {
                t[i] = (0..m)
                    .map(|j| {
                        let mut q = j;
                        for _ in 0..n {
                            q = inv[q];
                        }
                        self.x[c][q].clone()
                    })
                    .collect();
            }
        }
        for i in 0..m {
            for j in 0..m {
                if t[i][j] != t[phi[i]][phi[j]] {
                    return Err(bad(format!(
                        "lambda2n: T_x({}, {}) differs from T_x(φ({0}), φ({1})); cycles of φ of unequal length need matching vectors",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        self.perm = Some(phi.iter().map(|j| j + 1).collect());
        self.t = t;
        Ok(self)
    }
}

/// Cycles of a 0-based permutation, each starting at its least element.
pub(crate) fn cycles(phi: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; phi.len()];
    let mut out = Vec::new();
    for s in 0..phi.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = phi[i];
        }
        out.push(c);
    }
    out
}

/// Weights `(1 + α_i)/2N` on the star graphs, `α_i = ±δ^j_i` for `u_j`
/// and `w_j`. Sequences are indexed from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Product2NSpec {
    pub deltas: Vec<Gammas>,
}

impl Product2NSpec {
    pub fn new(deltas: Vec<Gammas>) -> Self {
        Product2NSpec { deltas }
    }

    pub(crate) fn validate(&self, m: usize) -> Result<()> {
        if !m.is_multiple_of(2) || self.deltas.len() != m / 2 {
            return Err(bad(format!("product2n: need {} delta sequences", m / 2)));
        }
        for d in &self.deltas {
            d.check(0, 1.0, "deltas")?;
        }
        Ok(())
    }

    /// Weight of outer vertex `q` (0-based, `u`s first) at string position `i`.
    pub fn weight<M: Field>(&self, q: usize, i: usize) -> Result<M> {
        let n = self.deltas.len();
        let m = M::from_i64(2 * n as i64);
        let d = M::from_real(&self.deltas[q % n].at(i, 0))?;
        let a = if q < n { d } else { -d };
        Ok((M::one() + a) / m)
    }

    /// Certified multiplicative error for ratios at `depth` with numerators
    /// shifted by up to `shift` blocks.
    pub fn mult_error(&self, depth: usize, shift: usize) -> f64 {
        let from = 2 * depth.saturating_sub(shift + 1);
        let worst = self.deltas.iter().map(|d| d.tail(from, 0, 1.0)).fold(0.0, f64::max);
        libm_exp(2.0 * worst)
    }
}
