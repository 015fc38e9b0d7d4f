//! The example graphs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::KGraphSpec;
use crate::{Error, Result};

pub const NAMES: [&str; 4] = ["one_vertex_fefe", "three_vertex_eight_edge", "lambda_2N", "two_loops"];

/// One vertex `v`, blue loops `f1, f2`, red loop `e`, with
/// `e f1 = f2 e` and `e f2 = f1 e`.
pub fn one_vertex_fefe() -> KGraphSpec {
    let mut s = KGraphSpec::new(2);
    s.vertex("v")
        .edge("f1", 1, "v", "v")
        .edge("f2", 1, "v", "v")
        .edge("e", 2, "v", "v")
        .square(["f2", "e"], ["e", "f1"])
        .square(["f1", "e"], ["e", "f2"]);
    s
}

/// Three vertices `u, v, w`; blue `a0: v->u, a1: v->w, c0: u->v, c1: w->v`
/// and red `d0: v->u, d1: v->w, b0: u->v, b1: w->v`.
pub fn three_vertex_eight_edge() -> KGraphSpec {
    let mut s = KGraphSpec::new(2);
    s.vertex("u").vertex("v").vertex("w");
    s.edge("a0", 1, "v", "u")
        .edge("a1", 1, "v", "w")
        .edge("c0", 1, "u", "v")
        .edge("c1", 1, "w", "v")
        .edge("d0", 2, "v", "u")
        .edge("d1", 2, "v", "w")
        .edge("b0", 2, "u", "v")
        .edge("b1", 2, "w", "v");
    s.square(["a0", "b0"], ["d0", "c0"])
        .square(["a1", "b1"], ["d1", "c1"])
        .square(["a1", "b0"], ["d1", "c0"])
        .square(["a0", "b1"], ["d0", "c1"])
        .square(["c0", "d0"], ["b1", "a1"])
        .square(["c1", "d1"], ["b0", "a0"]);
    s
}

/// Name of the outer vertex `Q_i`, 1-based: `u1..uN` then `w1..wN`.
pub fn outer_vertex(n: usize, i: usize) -> String {
    if i <= n {
        format!("u{i}")
    } else {
        format!("w{}", i - n)
    }
}

/// Edge `color` (`'b'` or `'r'`) from `source` to `range`.
pub fn star_edge(color: char, source: &str, range: &str) -> String {
    format!("{color}:{source}>{range}")
}

/// Check that `perm` (1-based images) is a permutation of `1..=len`.
pub fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::InvalidPermutation(format!("expected {len} entries, got {}", perm.len())));
    }
    let mut seen = alloc::vec![false; len];
    for &p in perm {
        if p == 0 || p > len || core::mem::replace(&mut seen[p - 1], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 1..={len}")));
        }
    }
    Ok(())
}

/// Center `v`, outer vertices `Q_1..Q_2N`, one edge of each color in each
/// direction between `v` and every `Q_i`. The red-blue path through `Q_i`
/// at `v` equals the blue-red path through `Q_φ(i)`.
pub fn lambda_2n(n: usize, perm: &[usize]) -> Result<KGraphSpec> {
    if n == 0 {
        return Err(Error::InvalidPermutation("N must be positive".into()));
    }
    check_permutation(perm, 2 * n)?;
    let q: Vec<String> = (1..=2 * n).map(|i| outer_vertex(n, i)).collect();
    let mut s = KGraphSpec::new(2);
    s.vertex("v");
    for name in &q {
        s.vertex(name);
    }
    for name in &q {
        s.edge(&star_edge('b', "v", name), 1, "v", name)
            .edge(&star_edge('b', name, "v"), 1, name, "v")
            .edge(&star_edge('r', "v", name), 2, "v", name)
            .edge(&star_edge('r', name, "v"), 2, name, "v");
    }
    for i in 0..2 * n {
        let p = &q[perm[i] - 1];
        s.square(
            [&star_edge('b', p, "v"), &star_edge('r', "v", p)],
            [&star_edge('r', &q[i], "v"), &star_edge('b', "v", &q[i])],
        );
    }
    for qi in &q {
        for qj in &q {
            s.square(
                [&star_edge('b', "v", qi), &star_edge('r', qj, "v")],
                [&star_edge('r', "v", qi), &star_edge('b', qj, "v")],
            );
        }
    }
    Ok(s)
}

/// The 1-graph with one vertex and two loops `a, b`.
pub fn two_loops() -> KGraphSpec {
    let mut s = KGraphSpec::new(1);
    s.vertex("p").edge("a", 1, "p", "p").edge("b", 1, "p", "p");
    s
}

/// Look a graph up by name. `lambda_2N` needs `n` and a permutation and
/// defaults to `N = 1`, `φ = (1 2)`.
pub fn standard_library(name: &str, n: Option<usize>, perm: Option<&[usize]>) -> Result<KGraphSpec> {
    match name {
        "one_vertex_fefe" => Ok(one_vertex_fefe()),
        "three_vertex_eight_edge" => Ok(three_vertex_eight_edge()),
        "two_loops" => Ok(two_loops()),
        "lambda_2N" => {
            let n = n.unwrap_or(1);
            match perm {
                Some(p) => lambda_2n(n, p),
                None => {
                    // default: swap u_j with w_j
                    let p: Vec<usize> = (1..=2 * n).map(|i| if i <= n { i + n } else { i - n }).collect();
                    lambda_2n(n, &p)
                }
            }
        }
        other => Err(Error::UnknownLibraryGraph(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate_kgraph, KGraph};

    #[test]
    fn shapes() {
        let s = one_vertex_fefe();
        assert_eq!((s.vertices.len(), s.edges.len(), s.squares.len()), (1, 3, 2));
        let s = three_vertex_eight_edge();
        assert_eq!((s.vertices.len(), s.edges.len(), s.squares.len()), (3, 8, 6));
        let s = lambda_2n(1, &[2, 1]).unwrap();
        assert_eq!(s.vertices.len(), 3);
        assert!(validate_kgraph(&s).unwrap().passed());
    }

    #[test]
    fn bad_permutations() {
        assert!(matches!(lambda_2n(1, &[1, 1]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(lambda_2n(2, &[1, 2]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(standard_library("nope", None, None), Err(Error::UnknownLibraryGraph(_))));
    }

    #[test]
    fn every_permutation_of_four_gives_a_2_graph() {
        let mut p = [1, 2, 3, 4];
        // Heap's algorithm over S_4
        let mut c = [0usize; 4];
        let mut count = 1;
        KGraph::from_spec(&lambda_2n(2, &p).unwrap()).unwrap();
        let mut i = 0;
        while i < 4 {
            if c[i] < i {
                if i % 2 == 0 { p.swap(0, i) } else { p.swap(c[i], i) }
                KGraph::from_spec(&lambda_2n(2, &p).unwrap()).unwrap();
                count += 1;
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(count, 24);
    }
}
