//! Hellinger affinities `H_n = Σ_{d(λ) = (n, ..., n)} √(μ(Z(λ)) ν(Z(λ)))`.

use alloc::vec;
use alloc::vec::Vec;

use super::CylinderMeasure;
use crate::{Degree, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HellingerProfile {
    /// `H_0` (vertex cylinders).
    pub h0: f64,
    /// `H_1, ..., H_depth`.
    pub h: Vec<f64>,
    /// Whether both measures gave every probed cylinder positive mass.
    pub positive: bool,
}

impl HellingerProfile {
    /// `H_n / H_{n-1}` for `n = 1..=depth`.
    pub fn ratios(&self) -> Vec<f64> {
        let mut prev = self.h0;
        self.h
            .iter()
            .map(|&h| {
                let r = if prev > 0.0 { h / prev } else { 0.0 };
                prev = h;
                r
            })
            .collect()
    }
}

/// Runs over block chains, so the cost is linear in `depth`.
pub fn hellinger_profile(m1: &CylinderMeasure, m2: &CylinderMeasure, depth: usize) -> Result<HellingerProfile> {
    if m1.graph() != m2.graph() {
        return Err(Error::GraphMismatch);
    }
    let g = m1.graph();
    let blocks = g.paths_of_degree(&Degree::square(g.k(), 1), None);
    let mut positive = true;
    let mut h0 = 0.0;
    let mut vm = Vec::with_capacity(g.vertex_count());
    for v in g.vertex_ids() {
        let (a, b) = (m1.vertex_mass::<f64>(v)?, m2.vertex_mass::<f64>(v)?);
        positive &= a > 0.0 && b > 0.0;
        let s = libm_sqrt(a * b);
        vm.push(s);
        h0 += s;
    }
    let mut h = Vec::with_capacity(depth);
    // state[i]: summed affinity of level-t chains ending in blocks[i]
    let mut state = vec![0.0; blocks.len()];
    for t in 1..=depth {
        let mut next = vec![0.0; blocks.len()];
        for (j, b) in blocks.iter().enumerate() {
            if t == 1 {
                let (a, c) = (m1.step::<f64>(1, None, b)?, m2.step::<f64>(1, None, b)?);
                positive &= a > 0.0 && c > 0.0;
                next[j] = vm[b.range().index()] * libm_sqrt(a * c);
                continue;
            }
            for (i, p) in blocks.iter().enumerate() {
                if p.source() != b.range() {
                    continue;
                }
                let (a, c) = (m1.step::<f64>(t, Some(p), b)?, m2.step::<f64>(t, Some(p), b)?);
                positive &= a > 0.0 && c > 0.0;
                next[j] += state[i] * libm_sqrt(a * c);
            }
        }
        state = next;
        h.push(state.iter().sum());
    }
    Ok(HellingerProfile { h0, h, positive })
}

fn libm_sqrt(x: f64) -> f64 {
    num_traits::Float::sqrt(x.max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Singular,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Singular => "singular",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub profile: HellingerProfile,
    /// Largest `H_n / H_{n-1}` over the last `depth/2` levels.
    pub max_tail_ratio: f64,
    /// `|H_depth - H_{depth-1}|`.
    pub last_step: f64,
}

pub const SINGULAR_GAP: f64 = 1e-6;
pub const CONVERGED: f64 = 1e-9;
pub const POSITIVE_LIMIT: f64 = 1e-6;

pub fn equivalence_verdict(m1: &CylinderMeasure, m2: &CylinderMeasure, depth: usize) -> Result<VerdictReport> {
    if depth < 2 {
        return Err(Error::InsufficientDepth { given: depth, needed: 2 });
    }
    let profile = hellinger_profile(m1, m2, depth)?;
    let ratios = profile.ratios();
    let max_tail_ratio = ratios[depth - depth / 2..].iter().copied().fold(f64::MIN, f64::max);
    let last = profile.h[depth - 1];
    let last_step = (last - profile.h[depth - 2]).abs();
    let verdict = if max_tail_ratio <= 1.0 - SINGULAR_GAP {
        Verdict::Singular
    } else if last_step < CONVERGED && last > POSITIVE_LIMIT && profile.positive {
        Verdict::Equivalent
    } else {
        Verdict::Inconclusive
    };
    Ok(VerdictReport { verdict, profile, max_tail_ratio, last_step })
}
