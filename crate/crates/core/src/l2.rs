//! Step functions on square cylinders and the operators `S_λ` on
//! `L²(Λ^∞, μ)`.
//!
//! `S_λ ξ(x) = χ_{Z(λ)}(x) Φ_λ(σ^{d(λ)} x)^{-1/2} ξ(σ^{d(λ)} x)` and
//! `S_λ^* ξ(x) = Φ_λ(x)^{1/2} ξ(λx)`, where `Φ_λ(x) = lim μ(Z(λ x(0,n)))/μ(Z(x(0,n)))`.
//! For the exact kinds `Φ_λ` is constant on square cylinders from a fixed
//! level on; Kakutani and product measures use the ratio at the working
//! level, which is off by at most their certified error.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::exact::{Scalar, Surd};
use crate::graph::{KGraph, Path};
use crate::measures::{CylinderMeasure, Kind};
use crate::report::CKReport;
use crate::{Degree, Error, Result};

/// `Σ c_λ χ_{Z(λ)}` over paths of degree `(level, ..., level)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<S> {
    level: u32,
    coeffs: BTreeMap<Path, S>,
}

impl<S: Scalar> StepFunction<S> {
    pub fn zero(level: u32) -> Self {
        StepFunction { level, coeffs: BTreeMap::new() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &BTreeMap<Path, S> {
        &self.coeffs
    }

    pub fn get(&self, p: &Path) -> S {
        self.coeffs.get(p).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_at(&mut self, p: Path, c: S) {
        let sum = match self.coeffs.remove(&p) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(p, sum);
        }
    }

    /// `c · χ_{Z(λ)}` for square `λ`.
    pub fn basis(lambda: Path, c: S) -> Result<Self> {
        let level = lambda
            .degree()
            .square_level()
            .ok_or_else(|| Error::InvalidInput(format!("basis cylinder must be square, got degree {}", lambda.degree())))?;
        let mut f = Self::zero(level);
        f.add_at(lambda, c);
        Ok(f)
    }

    /// `χ_{Z(λ)}` for any `λ`, written at the least square level.
    pub fn indicator(g: &KGraph, lambda: &Path) -> Result<Self> {
        let level = lambda.degree().max_entry();
        let ext = Degree::square(g.k(), level).checked_sub(lambda.degree()).unwrap();
        let mut f = Self::zero(level);
        for alpha in g.paths_of_degree(&ext, Some(lambda.source())) {
            f.add_at(g.compose(lambda, &alpha)?, S::from_i64(1));
        }
        Ok(f)
    }

    pub fn refine(&self, g: &KGraph, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::LevelDecrease { from: self.level, to: level });
        }
        if level == self.level {
            return Ok(self.clone());
        }
        let ext = Degree::square(g.k(), level - self.level);
        let mut out = Self::zero(level);
        for (p, c) in &self.coeffs {
            for alpha in g.paths_of_degree(&ext, Some(p.source())) {
                out.add_at(g.compose(p, &alpha)?, c.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.level);
        for (p, a) in &self.coeffs {
            out.add_at(p.clone(), a.clone() * c.clone());
        }
        out
    }

    /// `self + c · other` at the common level.
    pub fn axpy(&self, g: &KGraph, c: &S, other: &Self) -> Result<Self> {
        let level = self.level.max(other.level);
        let mut out = self.refine(g, level)?;
        for (p, a) in other.refine(g, level)?.coeffs {
            out.add_at(p, a * c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, g: &KGraph, other: &Self) -> Result<Self> {
        self.axpy(g, &S::from_i64(1), other)
    }

    pub fn sub(&self, g: &KGraph, other: &Self) -> Result<Self> {
        self.axpy(g, &S::from_i64(-1), other)
    }
}

fn mass<S: Scalar>(m: &CylinderMeasure, p: &Path) -> Result<S> {
    Ok(S::from_mass(&m.mass::<S::Mass>(p)?))
}

pub fn inner_product<S: Scalar>(m: &CylinderMeasure, f: &StepFunction<S>, h: &StepFunction<S>) -> Result<S> {
    let g = m.graph();
    let level = f.level.max(h.level);
    let (f, h) = (f.refine(g, level)?, h.refine(g, level)?);
    let mut total = S::zero();
    for (p, a) in &f.coeffs {
        if let Some(b) = h.coeffs.get(p) {
            total = total + a.clone() * b.clone() * mass(m, p)?;
        }
    }
    Ok(total)
}

/// Squared `L²` norm.
pub fn norm_sq<S: Scalar>(m: &CylinderMeasure, f: &StepFunction<S>) -> Result<S> {
    inner_product(m, f, f)
}

/// Level from which the operators can act on cylinders.
fn working_level(m: &CylinderMeasure) -> Result<u32> {
    match (m.rn_depth(), m.kind()) {
        (Some(d), _) => Ok(d),
        (None, Kind::Kakutani(_) | Kind::Product2N(_)) => Ok(0),
        (None, k) => Err(Error::UnsupportedMeasure(format!(
            "{} measure has no Radon-Nikodym derivative constant on cylinders",
            k.name()
        ))),
    }
}

fn phi<S: Scalar>(m: &CylinderMeasure, lambda: &Path, eta: &Path) -> Result<S::Mass> {
    m.phi::<S::Mass>(lambda, eta)
}

pub fn apply_s<S: Scalar>(m: &CylinderMeasure, lambda: &Path, f: &StepFunction<S>) -> Result<StepFunction<S>> {
    let g = m.graph();
    let level = f.level.max(working_level(m)?);
    let f = f.refine(g, level)?;
    let top = level + lambda.degree().max_entry();
    let ext = Degree::square(g.k(), lambda.degree().max_entry()).checked_sub(lambda.degree()).unwrap();
    let mut out = StepFunction::zero(top);
    for (eta, c) in &f.coeffs {
        if eta.range() != lambda.source() {
            continue;
        }
        let w = S::sqrt_mass(&(<S::Mass as num_traits::One>::one() / phi::<S>(m, lambda, eta)?))?;
        let c = c.clone() * w;
        let le = g.compose(lambda, eta)?;
        for alpha in g.paths_of_degree(&ext, Some(eta.source())) {
            out.add_at(g.compose(&le, &alpha)?, c.clone());
        }
    }
    Ok(out)
}

pub fn apply_s_adjoint<S: Scalar>(m: &CylinderMeasure, lambda: &Path, f: &StepFunction<S>) -> Result<StepFunction<S>> {
    let g = m.graph();
    let level = f.level.max(working_level(m)?);
    let head = Degree::square(g.k(), f.level);
    let mut out = StepFunction::zero(level);
    for zeta in g.paths_of_degree(&Degree::square(g.k(), level), Some(lambda.source())) {
        let lz = g.compose(lambda, &zeta)?;
        let (h, _) = g.factor(&lz, &head).unwrap();
        let Some(c) = f.coeffs.get(&h) else { continue };
        let w = S::sqrt_mass(&phi::<S>(m, lambda, &zeta)?)?;
        out.add_at(zeta, c.clone() * w);
    }
    Ok(out)
}

/// `t_λ` or `t_λ^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Letter {
    pub path: Path,
    pub starred: bool,
}

impl Letter {
    pub fn t(path: Path) -> Self {
        Letter { path, starred: false }
    }

    pub fn t_star(path: Path) -> Self {
        Letter { path, starred: true }
    }
}

/// The operator product `w[0] w[1] ⋯` applied to `f`, rightmost first.
pub fn apply_word<S: Scalar>(m: &CylinderMeasure, word: &[Letter], f: &StepFunction<S>) -> Result<StepFunction<S>> {
    let mut out = f.clone();
    for l in word.iter().rev() {
        out = if l.starred { apply_s_adjoint(m, &l.path, &out)? } else { apply_s(m, &l.path, &out)? };
    }
    Ok(out)
}

/// `‖h‖₂`; exactly 0 only for the zero function.
fn defect<S: Scalar>(m: &CylinderMeasure, h: &StepFunction<S>) -> Result<f64> {
    if h.is_zero() {
        return Ok(0.0);
    }
    let n = norm_sq(m, h)?.to_f64();
    Ok(num_traits::Float::sqrt(n).max(f64::MIN_POSITIVE))
}

/// Every path with degree componentwise at most `bound`.
fn paths_up_to(g: &KGraph, bound: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for d in bound.below() {
        out.extend(g.paths_of_degree(&d, None));
    }
    out
}

/// Checks CK1-CK4, the product formula for `t_λ^* t_η` and the adjoint
/// pairing on every basis vector of square level `level`, for paths of
/// degree at most `bound`. `tol` defaults to 0 for exact measures and
/// `1e-9` otherwise; approximate measures add their certified error.
pub fn verify_ck_l2(m: &CylinderMeasure, level: u32, bound: &Degree, tol: Option<f64>) -> Result<CKReport> {
    working_level(m)?;
    if bound.k() != m.graph().k() {
        return Err(Error::InvalidInput(format!("degree bound {bound} has the wrong number of colors")));
    }
    if m.is_exact() && m.rn_depth().is_some() {
        run_ck::<Surd>(m, level, bound, tol.unwrap_or(0.0), true)
    } else {
        let base = tol.unwrap_or(1e-9);
        let tol = match m.rn_depth() {
            Some(_) => base,
            None => {
                // each operator is off by its certified factor; products
                // of up to four operators on unit-norm vectors
                let worst = paths_up_to(m.graph(), bound).iter().map(|p| m.rn_error(p, level as usize)).fold(1.0, f64::max);
                base + 4.0 * (worst * worst - 1.0)
            }
        };
        run_ck::<f64>(m, level, bound, tol, false)
    }
}

fn run_ck<S: Scalar>(m: &CylinderMeasure, level: u32, bound: &Degree, tol: f64, exact: bool) -> Result<CKReport> {
    let g = m.graph();
    let k = g.k();
    let basis: Vec<StepFunction<S>> = g
        .paths_of_degree(&Degree::square(k, level), None)
        .into_iter()
        .map(|p| StepFunction::basis(p, S::from_i64(1)))
        .collect::<Result<_>>()?;
    let paths = paths_up_to(g, bound);
    let vertices: Vec<Path> = g.vertex_ids().map(|v| g.vertex_path(v)).collect();
    let name = |p: &Path| -> String { if p.is_vertex() { String::from(g.vertex_name(p.range())) } else { g.display_path(p) } };
    let mut report = CKReport::new(tol, exact);

    let mut t = report.tally("CK1");
    for f in &basis {
        for v in &vertices {
            let sv = apply_s(m, v, f)?;
            let adj = apply_s_adjoint(m, v, f)?;
            t.record(defect(m, &sv.sub(g, &adj)?)?, || format!("t_{0} = t_{0}^*", name(v)));
            for w in &vertices {
                let mut lhs = apply_s(m, v, &apply_s(m, w, f)?)?;
                if v == w {
                    lhs = lhs.sub(g, &sv)?;
                }
                t.record(defect(m, &lhs)?, || format!("t_{} t_{}", name(v), name(w)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("CK2");
    for lambda in &paths {
        for mu in &paths {
            if lambda.source() != mu.range() || !(lambda.degree() + mu.degree()).le(bound) {
                continue;
            }
            let lm = g.compose(lambda, mu)?;
            for f in &basis {
                let lhs = apply_s(m, lambda, &apply_s(m, mu, f)?)?;
                let rhs = apply_s(m, &lm, f)?;
                t.record(defect(m, &lhs.sub(g, &rhs)?)?, || format!("t_{} t_{}", name(lambda), name(mu)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("CK3");
    for lambda in &paths {
        let s = g.vertex_path(lambda.source());
        for f in &basis {
            let lhs = apply_s_adjoint(m, lambda, &apply_s(m, lambda, f)?)?;
            let rhs = apply_s(m, &s, f)?;
            t.record(defect(m, &lhs.sub(g, &rhs)?)?, || format!("t_{0}^* t_{0}", name(lambda)));
        }
    }
    report.push(t);

    let mut t = report.tally("CK4");
    for n in bound.below() {
        if n.is_zero() {
            continue;
        }
        for v in &vertices {
            let from_v = g.paths_of_degree(&n, Some(v.range()));
            for f in &basis {
                let mut sum = StepFunction::zero(f.level);
                for lambda in &from_v {
                    sum = sum.add(g, &apply_s(m, lambda, &apply_s_adjoint(m, lambda, f)?)?)?;
                }
                let rhs = apply_s(m, v, f)?;
                t.record(defect(m, &sum.sub(g, &rhs)?)?, || format!("Σ t_λ t_λ^* over {} Λ^{n}", name(v)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("product formula");
    for lambda in &paths {
        for eta in &paths {
            let pairs = g.lambda_min(lambda, eta);
            for f in &basis {
                let lhs = apply_s_adjoint(m, lambda, &apply_s(m, eta, f)?)?;
                let mut rhs = StepFunction::zero(f.level);
                for (a, b) in &pairs {
                    rhs = rhs.add(g, &apply_s(m, a, &apply_s_adjoint(m, b, f)?)?)?;
                }
                t.record(defect(m, &lhs.sub(g, &rhs)?)?, || format!("t_{}^* t_{}", name(lambda), name(eta)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("adjoint");
    for lambda in &paths {
        for f in &basis {
            let sf = apply_s(m, lambda, f)?;
            for h in &basis {
                let lhs: S = inner_product(m, &apply_s_adjoint(m, lambda, h)?, f)?;
                let rhs: S = inner_product(m, h, &sf)?;
                let d = lhs - rhs;
                let d = if d.is_zero() { 0.0 } else { d.to_f64().abs().max(f64::MIN_POSITIVE) };
                t.record(d, || format!("<t_{}^* h, f> = <h, t_{0} f>", name(lambda)));
            }
        }
    }
    report.push(t);
    Ok(report)
}
