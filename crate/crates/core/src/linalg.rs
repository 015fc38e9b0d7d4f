//! Perron vectors of commuting non-negative integer matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Common Perron eigenvector `κ` (summing to 1) with eigenvalues `ρ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Perron {
    pub rho: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Largest `|A_i κ - ρ_i κ|` entry.
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration on `I + Σ A_i`, which is primitive when the `A_i`
/// come from a strongly connected graph; its Perron vector is the common
/// one of the commuting `A_i`.
pub fn perron(mats: &[Vec<Vec<u64>>]) -> Result<Perron> {
    let n = mats.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InvalidInput("empty vertex set".into()));
    }
    let mut b = vec![vec![0f64; n]; n];
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = 1.0;
        for m in mats {
            for j in 0..n {
                row[j] += m[i][j] as f64;
            }
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut iterations = 0;
    for it in 1..=100_000 {
        iterations = it;
        let mut y = mat_vec_f(&b, &x);
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|t| *t /= s);
        let change = x.iter().zip(&y).map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        x = y;
        if change < 1e-15 {
            break;
        }
    }
    if x.iter().any(|&t| t <= 0.0) {
        return Err(Error::NotStronglyConnected);
    }
    let top = (0..n).max_by(|&a, &b| x[a].total_cmp(&x[b])).unwrap();
    let mut rho = Vec::with_capacity(mats.len());
    let mut residual = 0f64;
    for m in mats {
        let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&t| t as f64).collect()).collect();
        let ax = mat_vec_f(&mf, &x);
        let r = ax[top] / x[top];
        residual = residual.max(ax.iter().zip(&x).map(|(a, k)| (a - r * k).abs()).fold(0.0, f64::max));
        rho.push(r);
    }
    if residual > 1e-10 {
        return Err(Error::NoCommonEigenvector(residual));
    }
    Ok(Perron { rho, kappa: x, residual, iterations })
}

fn mat_vec_f(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for t in m[r].iter_mut() {
            *t = t.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// The unique positive `κ` with `A_i κ = ρ_i κ` for integer `ρ_i` and
/// `Σ κ = 1`, solved exactly; `None` if it is not unique or not positive.
pub fn exact_kappa(mats: &[Vec<Vec<u64>>], rho: &[i64]) -> Option<Vec<BigRational>> {
    let n = mats.first()?.len();
    let q = |t: i64| BigRational::from_integer(t.into());
    let mut sys: Vec<Vec<BigRational>> = Vec::new();
    for (m, &r) in mats.iter().zip(rho) {
        for i in 0..n {
            let mut row: Vec<BigRational> = (0..n).map(|j| q(m[i][j] as i64 - if i == j { r } else { 0 })).collect();
            row.push(BigRational::zero());
            sys.push(row);
        }
    }
    let mut ones = vec![BigRational::one(); n];
    ones.push(BigRational::one());
    sys.push(ones);
    let pivots = rref(&mut sys);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    let kappa: Vec<BigRational> = (0..n).map(|i| sys[i][n].clone()).collect();
    kappa.iter().all(|k| k.is_positive()).then_some(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn ex34() -> Vec<Vec<Vec<u64>>> {
        let a = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        vec![a.clone(), a]
    }

    #[test]
    fn example_three_vertex_against_eigen_oracle() {
        let p = perron(&ex34()).unwrap();
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let eig = SymmetricEigen::new(m);
        let i = eig.eigenvalues.imax();
        let v = eig.eigenvectors.column(i);
        let s: f64 = v.iter().sum();
        for (k, o) in p.kappa.iter().zip(v.iter()) {
            assert!((k - o / s).abs() < 1e-12);
        }
        for r in &p.rho {
            assert!((r - eig.eigenvalues[i]).abs() < 1e-10);
            assert!((r - 2f64.sqrt()).abs() < 1e-10);
        }
        assert!((p.kappa[1] - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn one_vertex_is_exact() {
        let mats = vec![vec![vec![2]], vec![vec![1]]];
        let p = perron(&mats).unwrap();
        assert_eq!(p.rho, vec![2.0, 1.0]);
        assert_eq!(exact_kappa(&mats, &[2, 1]), Some(vec![BigRational::one()]));
    }

    #[test]
    fn non_common_eigenvector() {
        // commuting fails: no common Perron vector
        let a = vec![vec![0, 1], vec![1, 0]];
        let b = vec![vec![1, 1], vec![0, 1]];
        assert!(matches!(perron(&[a, b]), Err(Error::NoCommonEigenvector(_))));
    }
}
