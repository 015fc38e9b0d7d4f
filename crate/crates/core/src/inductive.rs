//! The representation on `H_x = lim ℓ²(Λ r(x_i))` for an eventually periodic
//! `x = x_1 x_2 ⋯`, in its discrete form `ℓ²(⊔ G_i)` with
//! `G_i = Λ r(x_i) \ Λ x_{i-1}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::graph::{InfinitePath, KGraph, Path};
use crate::report::CKReport;
use crate::{Degree, Error, Result};

/// `[ξ^i_μ]` with `μ ∈ G_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub stage: usize,
    pub mu: Path,
}

/// Finitely supported integer combination of basis classes.
pub type Vector = BTreeMap<Basis, i64>;

fn add_to(v: &mut Vector, b: Basis, c: i64) {
    let e = v.entry(b.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        v.remove(&b);
    }
}

fn sub(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (k, c) in b {
        add_to(&mut out, k.clone(), -c);
    }
    out
}

fn norm(v: &Vector) -> f64 {
    num_traits::Float::sqrt(v.values().map(|c| (c * c) as f64).sum::<f64>())
}

pub fn basis_vector(b: Basis) -> Vector {
    let mut v = Vector::new();
    v.insert(b, 1);
    v
}

/// `H_x` for a fixed path `x`.
#[derive(Clone, Debug)]
pub struct Inductive<'g> {
    g: &'g KGraph,
    x: InfinitePath,
}

impl<'g> Inductive<'g> {
    pub fn new(g: &'g KGraph, x: InfinitePath) -> Self {
        Inductive { g, x }
    }

    pub fn path(&self) -> &InfinitePath {
        &self.x
    }

    /// `x_a x_{a+1} ⋯ x_{b-1}`.
    fn segments(&self, a: usize, b: usize) -> Path {
        let mut p = self.g.vertex_path(self.x.stage_vertex(a));
        for i in a..b {
            p = self.g.compose(&p, self.x.block(i)).unwrap();
        }
        p
    }

    /// Strip trailing `x_{i-1}`, `x_{i-2}`, ... as long as they occur.
    pub fn canonical_rep(&self, stage: usize, mu: &Path) -> Result<Basis> {
        if stage == 0 {
            return Err(Error::InvalidInput("stages are numbered from 1".into()));
        }
        if mu.source() != self.x.stage_vertex(stage) {
            return Err(Error::SourceMismatch(format!(
                "s({}) is not r(x_{stage})",
                self.g.display_path(mu)
            )));
        }
        let one = Degree::square(self.g.k(), 1);
        let (mut i, mut mu) = (stage, mu.clone());
        while i > 1 {
            let Some(head) = mu.degree().checked_sub(&one) else { break };
            let (nu, tail) = self.g.factor(&mu, &head).unwrap();
            if &tail != self.x.block(i - 1) {
                break;
            }
            mu = nu;
            i -= 1;
        }
        Ok(Basis { stage: i, mu })
    }

    fn is_canonical(&self, b: &Basis) -> bool {
        self.canonical_rep(b.stage, &b.mu).as_ref() == Ok(b)
    }

    pub fn t_basis(&self, lambda: &Path, b: &Basis) -> Option<Basis> {
        if lambda.source() != b.mu.range() {
            return None;
        }
        Some(self.canonical_rep(b.stage, &self.g.compose(lambda, &b.mu).unwrap()).unwrap())
    }

    /// Append just enough segments of `x` for `λ` to fit, then test
    /// whether `λ` is a prefix.
    pub fn t_star_basis(&self, lambda: &Path, b: &Basis) -> Option<Basis> {
        if lambda.range() != b.mu.range() {
            return None;
        }
        let short = lambda.degree().0.iter().zip(&b.mu.degree().0).map(|(l, m)| l.saturating_sub(*m)).max().unwrap_or(0);
        let j = b.stage + short as usize;
        let long = self.g.compose(&b.mu, &self.segments(b.stage, j)).unwrap();
        let (head, tail) = self.g.factor(&long, lambda.degree()).unwrap();
        (&head == lambda).then(|| self.canonical_rep(j, &tail).unwrap())
    }

    pub fn apply_t(&self, lambda: &Path, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (b, c) in v {
            if let Some(r) = self.t_basis(lambda, b) {
                add_to(&mut out, r, *c);
            }
        }
        out
    }

    pub fn apply_t_adjoint(&self, lambda: &Path, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (b, c) in v {
            if let Some(r) = self.t_star_basis(lambda, b) {
                add_to(&mut out, r, *c);
            }
        }
        out
    }

    /// Canonical basis elements with stage at most `stages` and degree at
    /// most `(bound, ..., bound)`.
    pub fn probe_basis(&self, bound: u32, stages: usize) -> Vec<Basis> {
        let k = self.g.k();
        let mut out = Vec::new();
        for i in 1..=stages {
            for d in Degree::square(k, bound).below() {
                for mu in self.g.paths_from(self.x.stage_vertex(i), &d) {
                    let b = Basis { stage: i, mu };
                    if self.is_canonical(&b) {
                        out.push(b);
                    }
                }
            }
        }
        out
    }

    /// `τ_λ(η) = ρ` where `ρ ∈ G_j` and `λη = ρ x_j ⋯ x_{i-1}`, found by
    /// trying each `j` from the bottom rather than by stripping.
    pub fn tau(&self, lambda: &Path, eta: &Basis) -> Option<Basis> {
        if lambda.source() != eta.mu.range() {
            return None;
        }
        let le = self.g.compose(lambda, &eta.mu).unwrap();
        let i = eta.stage;
        for j in 1..=i {
            let tail_deg = Degree::square(self.g.k(), (i - j) as u32);
            let Some(head_deg) = le.degree().checked_sub(&tail_deg) else { continue };
            let (rho, tail) = self.g.factor(&le, &head_deg).unwrap();
            if tail == self.segments(j, i) && self.in_g(j, &rho) {
                return Some(Basis { stage: j, mu: rho });
            }
        }
        None
    }

    /// `ρ ∈ G_j`: not of the form `ν x_{j-1}`.
    fn in_g(&self, j: usize, rho: &Path) -> bool {
        if rho.source() != self.x.stage_vertex(j) {
            return false;
        }
        if j == 1 {
            return true;
        }
        let one = Degree::square(self.g.k(), 1);
        match rho.degree().checked_sub(&one) {
            None => true,
            Some(h) => &self.g.factor(rho, &h).unwrap().1 != self.x.block(j - 1),
        }
    }

    /// Coding map `τ^n` on `G_j ∩ R_λ`, `d(λ) = n`.
    pub fn coding_map(&self, n: &Degree, rho: &Basis) -> Option<Basis> {
        let j = rho.stage;
        let mut i = j;
        while !n.le(&(rho.mu.degree() + &Degree::square(self.g.k(), (i - j) as u32))) {
            i += 1;
        }
        let long = self.g.compose(&rho.mu, &self.segments(j, i)).unwrap();
        let (_, tail) = self.g.factor(&long, n)?;
        Some(Basis { stage: i, mu: tail }).filter(|b| self.in_g(i, &b.mu))
    }

    /// `S_λ δ_η = δ_{τ_λ(η)}`.
    pub fn sbfs_apply(&self, lambda: &Path, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (b, c) in v {
            if let Some(r) = self.tau(lambda, b) {
                add_to(&mut out, r, *c);
            }
        }
        out
    }
}

fn paths_up_to(g: &KGraph, bound: u32) -> Vec<Path> {
    let mut out = Vec::new();
    for d in Degree::square(g.k(), bound).below() {
        out.extend(g.paths_of_degree(&d, None));
    }
    out
}

/// Exhaustive CK check on the canonical basis. Also compares `T_λ` with
/// the discrete semibranching formula and checks the coding maps.
pub fn verify_ck_inductive(model: &Inductive, degree_bound: u32, stage_bound: usize) -> Result<CKReport> {
    if degree_bound == 0 || stage_bound == 0 {
        return Err(Error::InvalidInput("bounds must be at least 1".into()));
    }
    let g = model.g;
    let basis = model.probe_basis(degree_bound, stage_bound);
    let paths = paths_up_to(g, degree_bound);
    let vertices: Vec<Path> = g.vertex_ids().map(|v| g.vertex_path(v)).collect();
    let name = |p: &Path| -> String { if p.is_vertex() { String::from(g.vertex_name(p.range())) } else { g.display_path(p) } };
    let show = |b: &Basis| format!("[ξ^{}_{}]", b.stage, name(&b.mu));
    let mut report = CKReport::new(0.0, true);
    let bound = Degree::square(g.k(), degree_bound);

    let mut t = report.tally("CK1");
    for b in &basis {
        let f = basis_vector(b.clone());
        for v in &vertices {
            let tv = model.apply_t(v, &f);
            t.record(norm(&sub(&tv, &model.apply_t_adjoint(v, &f))), || format!("T_{0} = T_{0}^* at {1}", name(v), show(b)));
            for w in &vertices {
                let mut lhs = model.apply_t(v, &model.apply_t(w, &f));
                if v == w {
                    lhs = sub(&lhs, &tv);
                }
                t.record(norm(&lhs), || format!("T_{} T_{} at {}", name(v), name(w), show(b)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("CK2");
    for lambda in &paths {
        for mu in &paths {
            if lambda.source() != mu.range() || !(lambda.degree() + mu.degree()).le(&bound) {
                continue;
            }
            let lm = g.compose(lambda, mu)?;
            for b in &basis {
                let f = basis_vector(b.clone());
                let d = sub(&model.apply_t(lambda, &model.apply_t(mu, &f)), &model.apply_t(&lm, &f));
                t.record(norm(&d), || format!("T_{} T_{} at {}", name(lambda), name(mu), show(b)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("CK3");
    for lambda in &paths {
        let s = g.vertex_path(lambda.source());
        for b in &basis {
            let f = basis_vector(b.clone());
            let d = sub(&model.apply_t_adjoint(lambda, &model.apply_t(lambda, &f)), &model.apply_t(&s, &f));
            t.record(norm(&d), || format!("T_{0}^* T_{0} at {1}", name(lambda), show(b)));
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
            for b in &basis {
                let f = basis_vector(b.clone());
                let mut sum = Vector::new();
                for lambda in &from_v {
                    for (k, c) in model.apply_t(lambda, &model.apply_t_adjoint(lambda, &f)) {
                        add_to(&mut sum, k, c);
                    }
                }
                let d = sub(&sum, &model.apply_t(v, &f));
                t.record(norm(&d), || format!("Σ T_λ T_λ^* over {} Λ^{n} at {}", name(v), show(b)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("product formula");
    for lambda in &paths {
        for eta in &paths {
            let pairs = g.lambda_min(lambda, eta);
            for b in &basis {
                let f = basis_vector(b.clone());
                let lhs = model.apply_t_adjoint(lambda, &model.apply_t(eta, &f));
                let mut rhs = Vector::new();
                for (a, c) in &pairs {
                    for (k, x) in model.apply_t(a, &model.apply_t_adjoint(c, &f)) {
                        add_to(&mut rhs, k, x);
                    }
                }
                t.record(norm(&sub(&lhs, &rhs)), || format!("T_{}^* T_{} at {}", name(lambda), name(eta), show(b)));
            }
        }
    }
    report.push(t);

    // counting inner product: <T_λ^* u, w> = <u, T_λ w>
    let mut t = report.tally("adjoint");
    for lambda in &paths {
        for u in &basis {
            let lhs = model.t_star_basis(lambda, u);
            for w in &basis {
                let a = (lhs.as_ref() == Some(w)) as i64;
                let b = (model.t_basis(lambda, w).as_ref() == Some(u)) as i64;
                t.record((a - b).abs() as f64, || format!("T_{} between {} and {}", name(lambda), show(u), show(w)));
            }
        }
    }
    report.push(t);

    let mut t = report.tally("semibranching formula");
    for lambda in &paths {
        for b in &basis {
            let f = basis_vector(b.clone());
            let d = sub(&model.apply_t(lambda, &f), &model.sbfs_apply(lambda, &f));
            t.record(norm(&d), || format!("T_{} vs S_{0} at {}", name(lambda), show(b)));
        }
    }
    report.push(t);

    let mut t = report.tally("coding map");
    for lambda in &paths {
        for b in &basis {
            let Some(r) = model.tau(lambda, b) else { continue };
            let back = model.coding_map(lambda.degree(), &r);
            t.record(if back.as_ref() == Some(b) { 0.0 } else { 1.0 }, || format!("τ^{} τ_{} at {}", lambda.degree(), name(lambda), show(b)));
        }
    }
    report.push(t);
    Ok(report)
}

/// A point of `T^k`, exactly as a root of unity when possible.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugePoint {
    /// `z_c = exp(2πi e_c / order)`.
    Root { order: u32, exps: Vec<i64> },
    Float(Vec<Complex64>),
}

impl GaugePoint {
    pub fn new_float(z: Vec<Complex64>) -> Result<Self> {
        if let Some(w) = z.iter().find(|w| (w.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::NotUnimodular(format!("{w}")));
        }
        Ok(GaugePoint::Float(z))
    }

    /// `(ω^j, ω^{3j}, ω^{5j}, ...)`, `ω = e^{2πi/8}`, for `j = 0..8`.
    pub fn samples(k: usize) -> Vec<GaugePoint> {
        (0..8).map(|j| GaugePoint::Root { order: 8, exps: (0..k).map(|c| ((2 * c as i64 + 1) * j) % 8).collect() }).collect()
    }

    pub fn k(&self) -> usize {
        match self {
            GaugePoint::Root { exps, .. } => exps.len(),
            GaugePoint::Float(z) => z.len(),
        }
    }

    /// `z^e` for an integer vector `e`.
    fn power(&self, e: &[i64]) -> Phase {
        match self {
            GaugePoint::Root { order, exps } => {
                let n = *order as i64;
                Phase::Root(exps.iter().zip(e).map(|(a, b)| a * b).sum::<i64>().rem_euclid(n), n)
            }
            GaugePoint::Float(z) => {
                Phase::Float(z.iter().zip(e).fold(Complex64::new(1.0, 0.0), |acc, (w, &p)| acc * w.powi(p as i32)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Phase {
    Root(i64, i64),
    Float(Complex64),
}

impl Phase {
    fn mul(self, o: Phase) -> Phase {
        match (self, o) {
            (Phase::Root(a, n), Phase::Root(b, _)) => Phase::Root((a + b) % n, n),
            (a, b) => Phase::Float(a.to_complex() * b.to_complex()),
        }
    }

    fn to_complex(self) -> Complex64 {
        match self {
            Phase::Root(a, n) => Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * a as f64 / n as f64),
            Phase::Float(z) => z,
        }
    }

    fn distance(self, o: Phase) -> f64 {
        match (self, o) {
            (Phase::Root(a, _), Phase::Root(b, _)) => (a != b) as i64 as f64,
            (a, b) => (a.to_complex() - b.to_complex()).norm(),
        }
    }
}

fn exponent(b: &Basis) -> Vec<i64> {
    b.mu.degree().0.iter().map(|&d| d as i64 - b.stage as i64).collect()
}

/// `U_z T_λ U_z^* = z^{d(λ)} T_λ` on the probed basis, and `U_z` agrees on
/// `(i, μ)` and `(i+1, μ x_i)`.
pub fn gauge_check(model: &Inductive, z: &GaugePoint, degree_bound: u32, stage_bound: usize) -> Result<CKReport> {
    let g = model.g;
    if z.k() != g.k() {
        return Err(Error::InvalidInput(format!("gauge point has {} coordinates, graph has {} colors", z.k(), g.k())));
    }
    let exact = matches!(z, GaugePoint::Root { .. });
    let mut report = CKReport::new(if exact { 0.0 } else { 1e-12 }, exact);
    let basis = model.probe_basis(degree_bound, stage_bound);
    let neg = |e: Vec<i64>| -> Vec<i64> { e.into_iter().map(|x| -x).collect() };

    let mut t = report.tally("covariance");
    for lambda in paths_up_to(g, degree_bound) {
        let want = z.power(&lambda.degree().0.iter().map(|&d| d as i64).collect::<Vec<_>>());
        for b in &basis {
            let Some(r) = model.t_basis(&lambda, b) else { continue };
            let got = z.power(&exponent(&r)).mul(z.power(&neg(exponent(b))));
            t.record(got.distance(want), || format!("U_z T_{} U_z^* at stage {}", g.display_path(&lambda), b.stage));
        }
    }
    report.push(t);

    let mut t = report.tally("well-defined");
    for b in &basis {
        let lifted = Basis { stage: b.stage + 1, mu: g.compose(&b.mu, model.x.block(b.stage))? };
        t.record(z.power(&exponent(b)).distance(z.power(&exponent(&lifted))), || format!("stage {}", b.stage));
    }
    report.push(t);
    Ok(report)
}

/// The unitary `H_x -> H_y` for `σ^m(x) = σ^n(y)`.
pub struct Intertwiner<'a, 'g> {
    x: &'a Inductive<'g>,
    y: &'a Inductive<'g>,
    m: Degree,
    n: Degree,
}

impl<'a, 'g> Intertwiner<'a, 'g> {
    pub fn new(x: &'a Inductive<'g>, y: &'a Inductive<'g>, m: Degree, n: Degree, check_depth: usize) -> Result<Self> {
        if !x.x.tails_agree(x.g, &m, &y.x, &n, check_depth) {
            return Err(Error::TailMismatch(format!("σ^{m}(x) and σ^{n}(y) differ within {check_depth} segments")));
        }
        Ok(Intertwiner { x, y, m, n })
    }

    /// Target stage `j` and `q` with `λ_{i,j} = x(P·1, P·1 + q)`, where
    /// stage `i` sits at position `P = i - 1` along `x`.
    fn target(&self, i: usize) -> (usize, Degree) {
        let k = self.m.k();
        let p = (i - 1) as u32;
        let mut j = 1;
        loop {
            let pj = Degree::square(k, (j - 1) as u32);
            if let Some(a) = pj.checked_sub(&self.n) {
                if let Some(q) = a.checked_sub(&Degree::square(k, p).checked_sub(&self.m).unwrap()) {
                    return (j, q);
                }
            }
            j += 1;
        }
    }

    /// `φ[ξ^i_μ]_x = [ξ^j_{μ λ_{i,j}}]_y` after lifting `i` past `m`.
    pub fn apply(&self, b: &Basis) -> Basis {
        let g = self.x.g;
        let (mut i, mut mu) = (b.stage, b.mu.clone());
        while !self.m.le(&Degree::square(g.k(), (i - 1) as u32)) {
            mu = g.compose(&mu, self.x.x.block(i)).unwrap();
            i += 1;
        }
        let (j, q) = self.target(i);
        let start = Degree::square(g.k(), (i - 1) as u32);
        let lambda = self.x.x.window(g, &start, &(&start + &q)).unwrap();
        self.y.canonical_rep(j, &g.compose(&mu, &lambda).unwrap()).unwrap()
    }

    /// A preimage of a `y`-class, following the surjectivity argument.
    pub fn preimage(&self, b: &Basis) -> Option<Basis> {
        let g = self.x.g;
        let mut i = 1;
        while !self.m.le(&Degree::square(g.k(), (i - 1) as u32)) {
            i += 1;
        }
        loop {
            let (t, q) = self.target(i);
            if t >= b.stage && q.le(&Degree::square(g.k(), (t - b.stage) as u32)) {
                let long = g.compose(&b.mu, &self.y.segments(b.stage, t)).ok()?;
                let head = long.degree().checked_sub(&q)?;
                let (nu, _) = g.factor(&long, &head)?;
                let pre = self.x.canonical_rep(i, &nu).ok()?;
                return (self.apply(&pre) == *b).then_some(pre);
            }
            i += 1;
        }
    }
}

/// Checks the shift-tail unitary on the probed `x`-basis.
pub fn shift_tail_intertwiner(phi: &Intertwiner, degree_bound: u32, stage_bound: usize) -> Result<CKReport> {
    let g = phi.x.g;
    let mut report = CKReport::new(0.0, true);
    let basis = phi.x.probe_basis(degree_bound, stage_bound);
    let name = |p: &Path| -> String { if p.is_vertex() { String::from(g.vertex_name(p.range())) } else { g.display_path(p) } };

    let mut t = report.tally("well-defined");
    for b in &basis {
        let lifted = Basis { stage: b.stage + 1, mu: g.compose(&b.mu, phi.x.x.block(b.stage))? };
        t.record((phi.apply(b) != phi.apply(&lifted)) as i64 as f64, || format!("stage {} {}", b.stage, name(&b.mu)));
    }
    report.push(t);

    let mut t = report.tally("injective");
    let mut seen: BTreeMap<Basis, Basis> = BTreeMap::new();
    for b in &basis {
        let image = phi.apply(b);
        let clash = seen.insert(image, b.clone()).is_some();
        t.record(clash as i64 as f64, || format!("stage {} {}", b.stage, name(&b.mu)));
    }
    report.push(t);

    let mut t = report.tally("intertwining");
    for lambda in paths_up_to(g, degree_bound) {
        for b in &basis {
            let lhs = phi.x.t_basis(&lambda, b).map(|r| phi.apply(&r));
            let rhs = phi.y.t_basis(&lambda, &phi.apply(b));
            t.record((lhs != rhs) as i64 as f64, || format!("T_{} at stage {}", name(&lambda), b.stage));
            let lhs = phi.x.t_star_basis(&lambda, b).map(|r| phi.apply(&r));
            let rhs = phi.y.t_star_basis(&lambda, &phi.apply(b));
            t.record((lhs != rhs) as i64 as f64, || format!("T_{}^* at stage {}", name(&lambda), b.stage));
        }
    }
    report.push(t);

    let mut t = report.tally("surjective");
    for b in phi.y.probe_basis(degree_bound, stage_bound) {
        t.record(phi.preimage(&b).is_none() as i64 as f64, || format!("y stage {} {}", b.stage, name(&b.mu)));
    }
    report.push(t);
    Ok(report)
}

/// `π_{y_{s(μ)}}(t_μ)[ξ^1_{s(μ)}] = [ξ^1_μ] ≠ 0` for every `μ` within the
/// bound, plus the CK relations in each summand.
pub fn direct_sum_nonzero_check(g: &KGraph, choice: &[InfinitePath], degree_bound: u32) -> Result<CKReport> {
    if choice.len() != g.vertex_count() {
        return Err(Error::BadChoice(format!("need one path per vertex, got {}", choice.len())));
    }
    for (v, y) in g.vertex_ids().zip(choice) {
        if y.range() != v {
            return Err(Error::BadChoice(format!("path chosen for {} starts at {}", g.vertex_name(v), g.vertex_name(y.range()))));
        }
    }
    let models: Vec<Inductive> = choice.iter().map(|y| Inductive::new(g, y.clone())).collect();
    let mut report = CKReport::new(0.0, true);
    let mut t = report.tally("t_mu nonzero");
    for mu in paths_up_to(g, degree_bound) {
        let model = &models[mu.source().index()];
        let start = Basis { stage: 1, mu: g.vertex_path(mu.source()) };
        let got = model.apply_t(&mu, &basis_vector(start));
        let want = basis_vector(Basis { stage: 1, mu: mu.clone() });
        let ok = got == want && !got.is_empty();
        t.record(!ok as i64 as f64, || g.display_path(&mu));
    }
    report.push(t);
    let distinct: BTreeSet<usize> = (0..choice.len()).filter(|&i| !choice[..i].contains(&choice[i])).collect();
    for i in distinct {
        let sub = verify_ck_inductive(&models[i], degree_bound, 2)?;
        let mut t = report.tally(&format!("CK in summand {}", g.vertex_name(choice[i].range())));
        for r in &sub.relations {
            for _ in 0..r.cases {
                t.record(r.max_defect, || r.name.clone());
            }
        }
        report.push(t);
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
