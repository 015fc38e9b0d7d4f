use alloc::format;
use alloc::string::String;

use super::{KGraph, KGraphSpec};

fn pair(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

/// `Λ1 × Λ2` with vertices `w|v`, edges `λ|v` (colors of `Λ1`) and `u|ν`
/// (colors of `Λ2`, shifted by `k1`).
pub fn product_graph(g1: &KGraph, g2: &KGraph) -> KGraph {
    let k1 = g1.k();
    let mut s = KGraphSpec::new(k1 + g2.k());
    for w in g1.vertex_ids() {
        for v in g2.vertex_ids() {
            s.vertex(&pair(g1.vertex_name(w), g2.vertex_name(v)));
        }
    }
    for e in g1.edge_ids() {
        let e = g1.edge(e);
        for v in g2.vertex_ids() {
            let v = g2.vertex_name(v);
            s.edge(&pair(&e.name, v), e.color + 1, &pair(g1.vertex_name(e.source), v), &pair(g1.vertex_name(e.range), v));
        }
    }
    for u in g1.vertex_ids() {
        let u = g1.vertex_name(u);
        for f in g2.edge_ids() {
            let f = g2.edge(f);
            s.edge(&pair(u, &f.name), k1 + f.color + 1, &pair(u, g2.vertex_name(f.source)), &pair(u, g2.vertex_name(f.range)));
        }
    }
    let n1 = |e| g1.edge(e).name.as_str();
    let n2 = |e| g2.edge(e).name.as_str();
    for sq in g1.squares() {
        for v in g2.vertex_ids() {
            let v = g2.vertex_name(v);
            s.square(
                [&pair(n1(sq.lhs.0), v), &pair(n1(sq.lhs.1), v)],
                [&pair(n1(sq.rhs.0), v), &pair(n1(sq.rhs.1), v)],
            );
        }
    }
    for sq in g2.squares() {
        for u in g1.vertex_ids() {
            let u = g1.vertex_name(u);
            s.square(
                [&pair(u, n2(sq.lhs.0)), &pair(u, n2(sq.lhs.1))],
                [&pair(u, n2(sq.rhs.0)), &pair(u, n2(sq.rhs.1))],
            );
        }
    }
    for l in g1.edge_ids() {
        let le = g1.edge(l);
        for f in g2.edge_ids() {
            let fe = g2.edge(f);
            s.square(
                [&pair(&le.name, g2.vertex_name(fe.range)), &pair(g1.vertex_name(le.source), &fe.name)],
                [&pair(g1.vertex_name(le.range), &fe.name), &pair(&le.name, g2.vertex_name(fe.source))],
            );
        }
    }
    KGraph::from_spec(&s).expect("product of k-graphs is a k-graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::library;
    use alloc::vec;
    use alloc::vec::Vec;

    fn kron(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let (p, n) = (a.len(), b.len());
        let mut out = vec![vec![0; p * n]; p * n];
        for i in 0..p {
            for j in 0..p {
                for s in 0..n {
                    for t in 0..n {
                        out[i * n + s][j * n + t] = a[i][j] * b[s][t];
                    }
                }
            }
        }
        out
    }

    fn identity(n: usize) -> Vec<Vec<u64>> {
        (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
    }

    #[test]
    fn one_vertex_squared() {
        let g = KGraph::from_spec(&library::one_vertex_fefe()).unwrap();
        let p = product_graph(&g, &g);
        assert_eq!(p.k(), 4);
        assert_eq!(p.vertex_count(), 1);
        let diag: Vec<u64> = (1..=4).map(|c| p.vertex_matrix(c).unwrap()[0][0]).collect();
        assert_eq!(diag, [2, 1, 2, 1]);
    }

    #[test]
    fn kronecker_structure() {
        let g1 = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
        let g2 = KGraph::from_spec(&library::one_vertex_fefe()).unwrap();
        let g3 = KGraph::from_spec(&library::lambda_2n(1, &[2, 1]).unwrap()).unwrap();
        for (a, b) in [(&g1, &g2), (&g2, &g1), (&g1, &g3)] {
            let p = product_graph(a, b);
            assert_eq!(p.vertex_count(), a.vertex_count() * b.vertex_count());
            for c in 1..=a.k() {
                assert_eq!(p.vertex_matrix(c).unwrap(), kron(&a.vertex_matrix(c).unwrap(), &identity(b.vertex_count())));
            }
            for c in 1..=b.k() {
                assert_eq!(p.vertex_matrix(a.k() + c).unwrap(), kron(&identity(a.vertex_count()), &b.vertex_matrix(c).unwrap()));
            }
        }
    }
}
