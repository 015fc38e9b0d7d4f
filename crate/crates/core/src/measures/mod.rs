//! Cylinder measures on `Λ^∞`.
//!
//! Apart from the Perron-Frobenius measure, every measure here is a chain:
//! a square path of level `n` splits into blocks of degree `(1, ..., 1)` and
//! its mass is `vertex_mass(r) · Π_t step(t, block_{t-1}, block_t)`.

mod hellinger;
mod kinds;
mod rn;

use alloc::format;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::exact::{Field, Real};
use crate::graph::{EdgeId, KGraph, Path, VertexId};
use crate::linalg;
use crate::{Degree, Error, Result};

pub use hellinger::{equivalence_verdict, hellinger_profile, HellingerProfile, Verdict, VerdictReport};
pub use kinds::{Gammas, KakutaniSpec, Lambda2NSpec, MarkovSpec, Product2NSpec};
pub use rn::RnEstimate;

/// Perron-Frobenius data: `A_i κ = ρ_i κ`, `Σ κ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfData {
    pub rho: Vec<Real>,
    pub kappa: Vec<Real>,
    pub residual: f64,
}

impl PfData {
    pub fn is_exact(&self) -> bool {
        self.rho.iter().chain(&self.kappa).all(Real::is_exact)
    }
}

pub fn pf_data(g: &KGraph) -> Result<PfData> {
    if !g.structural_flags().strongly_connected {
        return Err(Error::NotStronglyConnected);
    }
    let mats: Vec<_> = (1..=g.k()).map(|c| g.vertex_matrix(c).unwrap()).collect();
    let p = linalg::perron(&mats)?;
    let ints: Option<Vec<i64>> = p
        .rho
        .iter()
        .map(|r| {
            let n = libm_round(*r);
            ((r - n).abs() < 1e-9).then_some(n as i64)
        })
        .collect();
    if let Some(ints) = ints {
        if let Some(kappa) = linalg::exact_kappa(&mats, &ints) {
            return Ok(PfData {
                rho: ints.iter().map(|&n| Real::int(n)).collect(),
                kappa: kappa.into_iter().map(Real::rational).collect(),
                residual: 0.0,
            });
        }
    }
    Ok(PfData {
        rho: p.rho.into_iter().map(Real::float).collect(),
        kappa: p.kappa.into_iter().map(Real::float).collect(),
        residual: p.residual,
    })
}

fn libm_round(x: f64) -> f64 {
    num_traits::Float::round(x)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Pf(PfData),
    Kakutani(KakutaniSpec),
    Markov(MarkovSpec),
    Lambda2N(Lambda2NSpec),
    Product2N(Product2NSpec),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Pf(_) => "pf",
            Kind::Kakutani(_) => "kakutani",
            Kind::Markov(_) => "markov",
            Kind::Lambda2N(_) => "lambda2n",
            Kind::Product2N(_) => "product2n",
        }
    }
}

/// How blocks are read as letters.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Layout {
    General,
    /// One vertex, two blue loops (letters 0, 1) and one red loop.
    OneVertex { blue: [EdgeId; 2] },
    /// Center vertex joined to outer vertices `Q_1..Q_m` by one edge of each
    /// color each way. `phi[i] = j` when the red-blue path through `Q_i` at
    /// the center equals the blue-red path through `Q_j` (0-based).
    Star { center: VertexId, outer: Vec<VertexId>, phi: Vec<usize> },
}

impl Layout {
    fn one_vertex(g: &KGraph) -> Option<Layout> {
        if g.k() != 2 || g.vertex_count() != 1 {
            return None;
        }
        let v = VertexId(0);
        let blue = g.edges_into(v, 0);
        (blue.len() == 2 && g.edges_into(v, 1).len() == 1).then(|| Layout::OneVertex { blue: [blue[0], blue[1]] })
    }

    fn star(g: &KGraph) -> Option<Layout> {
        if g.k() != 2 || g.vertex_count() < 2 {
            return None;
        }
        let center = g.vertex_ids().find(|&c| {
            g.vertex_ids().filter(|&q| q != c).all(|q| {
                (0..2).all(|col| {
                    let into = g.edges_into(q, col);
                    let out = g.edges_out_of(q, col);
                    into.len() == 1 && out.len() == 1 && g.edge(into[0]).source == c && g.edge(out[0]).range == c
                })
            })
        })?;
        let outer: Vec<VertexId> = g.vertex_ids().filter(|&q| q != center).collect();
        let index = |v: VertexId| outer.iter().position(|&q| q == v);
        let mut phi = Vec::with_capacity(outer.len());
        for &q in &outer {
            // red Q -> center, then blue center -> Q
            let red = g.edges_out_of(q, 1)[0];
            let blue = g.edges_into(q, 0)[0];
            let (b, _) = g.swap(red, blue)?;
            phi.push(index(g.edge(b).source)?);
        }
        Some(Layout::Star { center, outer, phi })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMeasure {
    graph: KGraph,
    kind: Kind,
    layout: Layout,
}

impl CylinderMeasure {
    pub fn pf(g: &KGraph) -> Result<Self> {
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Pf(pf_data(g)?), layout: Layout::General })
    }

    fn one_vertex_layout(g: &KGraph, kind: &'static str) -> Result<Layout> {
        Layout::one_vertex(g).ok_or_else(|| Error::UnsupportedGraphForKind {
            kind,
            why: "needs one vertex with two blue loops and one red loop".into(),
        })
    }

    fn star_layout(g: &KGraph, kind: &'static str) -> Result<Layout> {
        Layout::star(g).ok_or_else(|| Error::UnsupportedGraphForKind {
            kind,
            why: "needs a center joined to every other vertex by one edge of each color each way".into(),
        })
    }

    pub fn kakutani(g: &KGraph, spec: KakutaniSpec) -> Result<Self> {
        let layout = Self::one_vertex_layout(g, "kakutani")?;
        spec.validate()?;
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Kakutani(spec), layout })
    }

    pub fn markov(g: &KGraph, spec: MarkovSpec) -> Result<Self> {
        let layout = Self::one_vertex_layout(g, "markov")?;
        let spec = spec.validated()?;
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Markov(spec), layout })
    }

    /// Skip parameter checks; for building deliberately broken measures.
    pub fn markov_unchecked(g: &KGraph, spec: MarkovSpec) -> Result<Self> {
        let layout = Self::one_vertex_layout(g, "markov")?;
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Markov(spec), layout })
    }

    pub fn lambda2n(g: &KGraph, spec: Lambda2NSpec) -> Result<Self> {
        let layout = Self::star_layout(g, "lambda2n")?;
        let Layout::Star { phi, .. } = &layout else { unreachable!() };
        let spec = spec.resolved(phi)?;
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Lambda2N(spec), layout })
    }

    pub fn product2n(g: &KGraph, spec: Product2NSpec) -> Result<Self> {
        let layout = Self::star_layout(g, "product2n")?;
        let Layout::Star { outer, .. } = &layout else { unreachable!() };
        spec.validate(outer.len())?;
        Ok(CylinderMeasure { graph: g.clone(), kind: Kind::Product2N(spec), layout })
    }

    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Whether every parameter is rational, so masses can be exact.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            Kind::Pf(pf) => pf.is_exact(),
            Kind::Kakutani(s) => s.gammas.is_exact(),
            Kind::Markov(s) => s.t.iter().flatten().chain(&s.lambda).all(Real::is_exact),
            Kind::Lambda2N(s) => s.t.iter().flatten().all(Real::is_exact),
            Kind::Product2N(s) => s.deltas.iter().all(Gammas::is_exact),
        }
    }

    /// Level from which `Φ_λ` is constant on square cylinders, if it is
    /// ever exactly constant.
    pub fn rn_depth(&self) -> Option<u32> {
        match &self.kind {
            Kind::Pf(_) => Some(0),
            Kind::Markov(s) => s.shift_invariant().then_some(1),
            Kind::Lambda2N(_) => Some(1),
            Kind::Kakutani(_) | Kind::Product2N(_) => None,
        }
    }

    fn check_path(&self, p: &Path) -> Result<()> {
        if p.edges().iter().any(|e| e.index() >= self.graph.edge_count()) || p.range().index() >= self.graph.vertex_count() {
            return Err(Error::PathNotInGraph(format!("{p:?}")));
        }
        Ok(())
    }

    pub fn mass<M: Field>(&self, p: &Path) -> Result<M> {
        self.check_path(p)?;
        if let Kind::Pf(pf) = &self.kind {
            return pf_mass(pf, p);
        }
        match p.degree().square_level() {
            Some(_) => self.chain_mass(p),
            None => {
                let level = p.degree().max_entry();
                let ext = Degree::square(self.graph.k(), level).checked_sub(p.degree()).unwrap();
                let mut total = M::zero();
                for alpha in self.graph.paths_of_degree(&ext, Some(p.source())) {
                    total = total + self.chain_mass(&self.graph.compose(p, &alpha)?)?;
                }
                Ok(total)
            }
        }
    }

    pub fn mass_f64(&self, p: &Path) -> Result<f64> {
        self.mass::<f64>(p)
    }

    pub fn mass_exact(&self, p: &Path) -> Result<BigRational> {
        self.mass::<BigRational>(p)
    }

    fn chain_mass<M: Field>(&self, p: &Path) -> Result<M> {
        let mut m = self.vertex_mass::<M>(p.range())?;
        let mut prev: Option<Path> = None;
        for (t, b) in self.graph.blocks(p).into_iter().enumerate() {
            m = m * self.step::<M>(t + 1, prev.as_ref(), &b)?;
            prev = Some(b);
        }
        Ok(m)
    }

    /// Mass of `Z(v)`.
    pub fn vertex_mass<M: Field>(&self, v: VertexId) -> Result<M> {
        let half = || M::one() / M::from_i64(2);
        match (&self.kind, &self.layout) {
            (Kind::Pf(pf), _) => M::from_real(&pf.kappa[v.index()]),
            (Kind::Kakutani(_) | Kind::Markov(_), _) => Ok(M::one()),
            (Kind::Lambda2N(_), Layout::Star { center, outer, .. }) => {
                if v == *center {
                    Ok(half())
                } else {
                    Ok(half() / M::from_i64(outer.len() as i64))
                }
            }
            (Kind::Product2N(s), Layout::Star { center, outer, .. }) => {
                if v == *center {
                    Ok(half())
                } else {
                    let q = outer.iter().position(|&o| o == v).unwrap();
                    Ok(half() * s.weight::<M>(q, 0)?)
                }
            }
            _ => unreachable!("layout fixed at construction"),
        }
    }

    /// Letter carried by a block of degree `(1, 1)`.
    fn letter(&self, block: &Path) -> usize {
        match &self.layout {
            Layout::OneVertex { blue } => {
                let e = self.graph.reorder(block, &[1, 0]);
                if e[1] == blue[0] {
                    0
                } else {
                    1
                }
            }
            Layout::Star { center, outer, .. } => {
                let e = self.graph.reorder(block, &[1, 0]);
                let q = if block.range() == *center { self.graph.edge(e[0]).source } else { self.graph.edge(e[1]).source };
                outer.iter().position(|&o| o == q).unwrap()
            }
            Layout::General => unreachable!("letters need a layout"),
        }
    }

    /// Factor contributed by block `t` (1-based) given the previous block.
    pub fn step<M: Field>(&self, t: usize, prev: Option<&Path>, block: &Path) -> Result<M> {
        match &self.kind {
            Kind::Pf(pf) => {
                let mut m = M::from_real(&pf.kappa[block.source().index()])? / M::from_real(&pf.kappa[block.range().index()])?;
                for r in &pf.rho {
                    m = m / M::from_real(r)?;
                }
                Ok(m)
            }
            Kind::Kakutani(s) => {
                let g = M::from_real(&s.gamma(t))?;
                let half = M::one() / M::from_i64(2);
                Ok(if self.letter(block) == 0 { half + g } else { half - g })
            }
            Kind::Markov(s) => {
                let b = self.letter(block);
                match prev {
                    None => M::from_real(&s.lambda[b]),
                    Some(p) => M::from_real(&s.t[self.letter(p)][b]),
                }
            }
            Kind::Lambda2N(s) => {
                let Layout::Star { center, outer, .. } = &self.layout else { unreachable!() };
                let b = self.letter(block);
                let from = match prev {
                    Some(p) => Some(self.letter(p)),
                    None if block.range() == *center => None,
                    None => Some(outer.iter().position(|&o| o == block.range()).unwrap()),
                };
                match from {
                    None => Ok(M::one() / M::from_i64(outer.len() as i64)),
                    Some(a) => M::from_real(&s.t[a][b]),
                }
            }
            Kind::Product2N(s) => {
                let Layout::Star { center, .. } = &self.layout else { unreachable!() };
                let pos = if block.range() == *center { 2 * t - 1 } else { 2 * t };
                s.weight(self.letter(block), pos)
            }
        }
    }

    /// Kolmogorov additivity on all square cylinders up to `depth`.
    pub fn check_kolmogorov(&self, depth: u32) -> Result<ConsistencyReport> {
        if self.is_exact() {
            self.kolmogorov_in::<BigRational>(depth)
        } else {
            self.kolmogorov_in::<f64>(depth)
        }
    }

    fn kolmogorov_in<M: Field>(&self, depth: u32) -> Result<ConsistencyReport> {
        let g = &self.graph;
        let k = g.k();
        let one = Degree::square(k, 1);
        let mut total = M::zero();
        for v in g.vertex_ids() {
            total = total + self.vertex_mass::<M>(v)?;
        }
        let total_defect = (total - M::one()).to_f64().abs();
        let mut cases = 0usize;
        let mut max_defect = 0f64;
        let mut worst = None;
        for level in 0..depth {
            for lambda in g.paths_of_degree(&Degree::square(k, level), None) {
                let m: M = self.mass(&lambda)?;
                let mut sum = M::zero();
                for mu in g.paths_of_degree(&one, Some(lambda.source())) {
                    sum = sum + self.mass(&g.compose(&lambda, &mu)?)?;
                }
                let d = (m - sum).to_f64().abs();
                cases += 1;
                if d > max_defect {
                    max_defect = d;
                    worst = Some(g.display_path(&lambda));
                }
            }
        }
        let tol = if M::EXACT { 0.0 } else { 1e-12 };
        Ok(ConsistencyReport {
            depth,
            cases,
            exact: M::EXACT,
            max_defect,
            total_mass_defect: total_defect,
            worst,
            passed: max_defect <= tol && total_defect <= tol,
        })
    }
}

fn pf_mass<M: Field>(pf: &PfData, p: &Path) -> Result<M> {
    let mut m = M::from_real(&pf.kappa[p.source().index()])?;
    for (r, &d) in pf.rho.iter().zip(&p.degree().0) {
        m = m / M::from_real(r)?.powi(d as i32);
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    pub depth: u32,
    pub cases: usize,
    pub exact: bool,
    pub max_defect: f64,
    pub total_mass_defect: f64,
    /// Cylinder with the largest defect.
    pub worst: Option<alloc::string::String>,
    pub passed: bool,
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}
