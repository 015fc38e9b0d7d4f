//! Radon-Nikodym ratios `μ(Z(λη)) / μ(Z(η))`.

use alloc::format;

use num_rational::BigRational;
use num_traits::Zero;

use super::{CylinderMeasure, Kind};
use crate::exact::Field;
use crate::graph::{InfinitePath, Path};
use crate::{Degree, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RnEstimate {
    pub value: f64,
    /// The ratio as a rational when the measure is exact.
    pub exact: Option<BigRational>,
    /// The limit lies in `[value / mult_error, value · mult_error]`.
    pub mult_error: f64,
    /// Square level of the base cylinder used.
    pub depth: usize,
    /// First depth from which the ratio no longer changed (point queries).
    pub stabilized_at: Option<usize>,
}

impl RnEstimate {
    pub fn is_exact(&self) -> bool {
        self.mult_error == 1.0
    }
}

impl CylinderMeasure {
    /// `μ(Z(λη)) / μ(Z(η))` for any `η` with `r(η) = s(λ)`.
    pub fn phi<M: Field>(&self, lambda: &Path, eta: &Path) -> Result<M> {
        if let Kind::Pf(pf) = self.kind() {
            // mass ratios telescope to ρ^{-d(λ)}
            let mut m = M::one();
            for (r, &d) in pf.rho.iter().zip(&lambda.degree().0) {
                m = m / M::from_real(r)?.powi(d as i32);
            }
            return Ok(m);
        }
        let den: M = self.mass(eta)?;
        if den.is_zero() {
            return Err(Error::ZeroMassBase);
        }
        let num: M = self.mass(&self.graph().compose(lambda, eta)?)?;
        Ok(num / den)
    }

    /// Multiplicative error of the ratio at square level `depth`.
    pub fn rn_error(&self, lambda: &Path, depth: usize) -> f64 {
        let shift = lambda.degree().max_entry() as usize;
        match self.kind() {
            Kind::Kakutani(s) => s.mult_error(depth, shift),
            Kind::Product2N(s) => s.mult_error(depth, shift),
            _ => match self.rn_depth() {
                Some(d) if depth >= d as usize => 1.0,
                _ => f64::INFINITY,
            },
        }
    }

    /// Extends `base` to a square path of level at least `depth` (and at
    /// least the level from which ratios are constant), then compares.
    pub fn rn_on_cylinder(&self, lambda: &Path, base: &Path, depth: usize) -> Result<RnEstimate> {
        let g = self.graph();
        if lambda.source() != base.range() {
            return Err(Error::SourceMismatch(format!(
                "s({}) is not r({})",
                g.display_path(lambda),
                g.display_path(base)
            )));
        }
        let floor = self.rn_depth().unwrap_or(0) as usize;
        let level = depth.max(floor).max(base.degree().max_entry() as usize);
        let ext = Degree::square(g.k(), level as u32).checked_sub(base.degree()).unwrap();
        let tail = g
            .paths_of_degree(&ext, Some(base.source()))
            .into_iter()
            .find(|t| !self.mass_f64(&g.compose(base, t).unwrap()).map(|m| m.is_zero()).unwrap_or(true))
            .ok_or(Error::ZeroMassBase)?;
        let eta = g.compose(base, &tail)?;
        self.estimate_at(lambda, &eta, level)
    }

    fn estimate_at(&self, lambda: &Path, eta: &Path, level: usize) -> Result<RnEstimate> {
        let (value, exact) = if self.is_exact() {
            let q: BigRational = self.phi(lambda, eta)?;
            (super::ratio_to_f64(&q), Some(q))
        } else {
            (self.phi::<f64>(lambda, eta)?, None)
        };
        Ok(RnEstimate { value, exact, mult_error: self.rn_error(lambda, level), depth: level, stabilized_at: None })
    }

    /// Ratio along the prefixes of `x`, reporting when it stopped moving.
    pub fn rn_at_point(&self, lambda: &Path, x: &InfinitePath, depth: usize) -> Result<RnEstimate> {
        let g = self.graph();
        if x.range() != lambda.source() {
            return Err(Error::RangeMismatch(format!(
                "r(x) = {} but s(λ) = {}",
                g.vertex_name(x.range()),
                g.vertex_name(lambda.source())
            )));
        }
        let floor = self.rn_depth().unwrap_or(0) as usize;
        let depth = depth.max(floor);
        let mut last: Option<RnEstimate> = None;
        let mut since = floor;
        for d in floor..=depth {
            let est = self.estimate_at(lambda, &x.prefix_path(g, d), d)?;
            if let Some(prev) = &last {
                let same = match (&prev.exact, &est.exact) {
                    (Some(a), Some(b)) => a == b,
                    _ => prev.value == est.value,
                };
                if !same {
                    since = d;
                }
            }
            last = Some(est);
        }
        let mut est = last.unwrap();
        est.stabilized_at = Some(since);
        Ok(est)
    }
}
