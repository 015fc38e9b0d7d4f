use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

/// Multi-degree in `N^k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// `(n, n, ..., n)`.
    pub fn square(k: usize, n: u32) -> Self {
        Degree(vec![n; k])
    }

    pub fn unit(k: usize, color: usize) -> Self {
        let mut d = vec![0; k];
        d[color] = 1;
        Degree(d)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    /// Level `n` if the degree is `(n, ..., n)`.
    pub fn square_level(&self) -> Option<u32> {
        let first = *self.0.first()?;
        self.0.iter().all(|&n| n == first).then_some(first)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn min_entry(&self) -> u32 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// Coordinatewise `<=`.
    pub fn le(&self, other: &Degree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `self - other`, if non-negative.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    /// Color word with colors ascending, the shape of a normal form.
    pub fn sorted_colors(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.total() as usize);
        for (c, &n) in self.0.iter().enumerate() {
            w.extend(core::iter::repeat_n(c, n as usize));
        }
        w
    }

    /// All degrees `d` with `0 <= d <= self`, in lexicographic order.
    pub fn below(&self) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.k())];
        for c in 0..self.k() {
            let mut next = Vec::new();
            for d in &out {
                for n in 0..=self.0[c] {
                    let mut e = d.clone();
                    e.0[c] = n;
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Partial order comparison.
    pub fn partial_cmp_coord(&self, other: &Degree) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => None,
        }
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_and_sub() {
        let a = Degree(vec![1, 3]);
        let b = Degree(vec![2, 0]);
        assert_eq!(a.join(&b), Degree(vec![2, 3]));
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!((&a + &b).checked_sub(&b), Some(a.clone()));
        assert_eq!(a.sorted_colors(), vec![0, 1, 1, 1]);
    }

    #[test]
    fn below_counts() {
        assert_eq!(Degree(vec![2, 1]).below().len(), 6);
        assert!(Degree(vec![2, 2]).below().iter().all(|d| d.le(&Degree(vec![2, 2]))));
    }
}
