use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{EdgeId, KGraph, VertexId};
use crate::{Degree, Error, Result};

/// A morphism in normal form: colors ascend left to right, and the edge
/// list reads range to source.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    edges: Vec<EdgeId>,
    degree: Degree,
}

impl Path {
    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl KGraph {
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path { range: v, source: v, edges: Vec::new(), degree: Degree::zero(self.k) }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let edge = self.edge(e);
        Path {
            range: edge.range,
            source: edge.source,
            edges: vec![e],
            degree: Degree::unit(self.k, edge.color),
        }
    }

    fn check_composable(&self, seq: &[EdgeId]) -> Result<()> {
        for w in seq.windows(2) {
            if self.edge(w[0]).source != self.edge(w[1]).range {
                return Err(Error::NotComposable(format!(
                    "source of {} is not the range of {}",
                    self.edge(w[0]).name,
                    self.edge(w[1]).name
                )));
            }
        }
        Ok(())
    }

    /// Sort colors by adjacent square swaps.
    pub fn normal_form(&self, seq: &[EdgeId]) -> Result<Path> {
        let Some(&first) = seq.first() else {
            return Err(Error::InvalidInput("empty edge sequence has no range; use vertex_path".into()));
        };
        self.check_composable(seq)?;
        let mut edges = seq.to_vec();
        self.bubble_sort(&mut edges)?;
        let mut degree = Degree::zero(self.k);
        for e in &edges {
            degree.0[self.edge(*e).color] += 1;
        }
        Ok(Path {
            range: self.edge(first).range,
            source: self.edge(*seq.last().unwrap()).source,
            edges,
            degree,
        })
    }

    fn bubble_sort(&self, edges: &mut [EdgeId]) -> Result<()> {
        let n = edges.len();
        for end in (1..n).rev() {
            let mut swapped = false;
            for i in 0..end {
                if self.edge(edges[i]).color > self.edge(edges[i + 1]).color {
                    let (a, b) = self.swap(edges[i], edges[i + 1]).ok_or_else(|| {
                        Error::IncompleteBijection(format!(
                            "({}, {})",
                            self.edge(edges[i]).name,
                            self.edge(edges[i + 1]).name
                        ))
                    })?;
                    edges[i] = a;
                    edges[i + 1] = b;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        Ok(())
    }

    /// Resolve edge names and normalize; an empty list needs `base`.
    pub fn path_from_names(&self, names: &[&str], base: Option<&str>) -> Result<Path> {
        if names.is_empty() {
            let v = base.ok_or_else(|| Error::InvalidInput("empty path needs a base vertex".into()))?;
            return Ok(self.vertex_path(self.vertex_id(v)?));
        }
        let ids = names.iter().map(|n| self.edge_id(n)).collect::<Result<Vec<_>>>()?;
        self.normal_form(&ids)
    }

    pub fn path_names(&self, p: &Path) -> Vec<String> {
        p.edges.iter().map(|e| self.edge(*e).name.clone()).collect()
    }

    /// Human-readable form: edge names, or the vertex name for a vertex path.
    pub fn display_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            return String::from(self.vertex_name(p.range));
        }
        self.path_names(p).join(" ")
    }

    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path> {
        if lambda.source != mu.range {
            return Err(Error::NotComposable(format!(
                "s({}) != r({})",
                self.display_path(lambda),
                self.display_path(mu)
            )));
        }
        if lambda.is_vertex() {
            return Ok(mu.clone());
        }
        if mu.is_vertex() {
            return Ok(lambda.clone());
        }
        let mut edges = Vec::with_capacity(lambda.len() + mu.len());
        edges.extend_from_slice(&lambda.edges);
        edges.extend_from_slice(&mu.edges);
        self.bubble_sort(&mut edges)?;
        Ok(Path {
            range: lambda.range,
            source: mu.source,
            edges,
            degree: &lambda.degree + &mu.degree,
        })
    }

    /// The edge sequence of `p` whose colors read `word`.
    ///
    /// `word` must be a rearrangement of the colors of `p`.
    pub fn reorder(&self, p: &Path, word: &[usize]) -> Vec<EdgeId> {
        debug_assert_eq!(word.len(), p.len());
        let mut edges = p.edges.clone();
        for (pos, &c) in word.iter().enumerate() {
            let q = (pos..edges.len())
                .find(|&q| self.edge(edges[q]).color == c)
                .expect("color word does not match the path degree");
            for t in (pos..q).rev() {
                let (a, b) = self.swap(edges[t], edges[t + 1]).expect("validated graph has every square");
                edges[t] = a;
                edges[t + 1] = b;
            }
        }
        edges
    }

    fn raw_path(&self, edges: &[EdgeId], fallback: VertexId) -> Path {
        match edges {
            [] => self.vertex_path(fallback),
            _ => {
                let mut degree = Degree::zero(self.k);
                for e in edges {
                    degree.0[self.edge(*e).color] += 1;
                }
                let mut edges = edges.to_vec();
                // a subword of a normal form need not be sorted after reorder
                self.bubble_sort(&mut edges).expect("validated graph has every square");
                Path {
                    range: self.edge(edges[0]).range,
                    source: self.edge(*edges.last().unwrap()).source,
                    edges,
                    degree,
                }
            }
        }
    }

    /// Unique factorization `p = head tail` with `d(head) = head_degree`.
    pub fn factor(&self, p: &Path, head_degree: &Degree) -> Option<(Path, Path)> {
        let tail_degree = p.degree.checked_sub(head_degree)?;
        let mut word = head_degree.sorted_colors();
        let split = word.len();
        word.extend(tail_degree.sorted_colors());
        let edges = self.reorder(p, &word);
        let head = self.raw_path(&edges[..split], p.range);
        let tail_base = if split == 0 { p.range } else { head.source };
        let tail = self.raw_path(&edges[split..], tail_base);
        Some((head, tail))
    }

    /// The segment `p(m, n)` for `m <= n <= d(p)`.
    pub fn segment(&self, p: &Path, m: &Degree, n: &Degree) -> Option<Path> {
        let (_, rest) = self.factor(p, m)?;
        let len = n.checked_sub(m)?;
        let (mid, _) = self.factor(&rest, &len)?;
        Some(mid)
    }

    /// Split a square path of level `n` into its `n` blocks of degree `(1, ..., 1)`.
    pub fn blocks(&self, p: &Path) -> Vec<Path> {
        let n = p.degree.square_level().expect("blocks needs a square path");
        let one = Degree::square(self.k, 1);
        let mut rest = p.clone();
        let mut out = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let (head, tail) = self.factor(&rest, &one).unwrap();
            out.push(head);
            rest = tail;
        }
        out
    }

    fn enumerate(&self, word: &[usize], range: Option<VertexId>, source: Option<VertexId>) -> Vec<Path> {
        let mut out = Vec::new();
        if word.is_empty() {
            for v in self.vertex_ids() {
                if range.is_none_or(|r| r == v) && source.is_none_or(|s| s == v) {
                    out.push(self.vertex_path(v));
                }
            }
            return out;
        }
        let mut stack = Vec::with_capacity(word.len());
        if let (None, Some(s)) = (range, source) {
            // build from the source end
            self.dfs_back(word, s, &mut stack, &mut out);
        } else {
            let starts: Vec<VertexId> = match range {
                Some(r) => vec![r],
                None => self.vertex_ids().collect(),
            };
            for r in starts {
                self.dfs_fwd(word, r, source, &mut stack, &mut out);
            }
        }
        out
    }

    fn dfs_fwd(&self, word: &[usize], at: VertexId, source: Option<VertexId>, stack: &mut Vec<EdgeId>, out: &mut Vec<Path>) {
        let depth = stack.len();
        if depth == word.len() {
            if source.is_none_or(|s| s == at) {
                out.push(self.sorted_path(stack));
            }
            return;
        }
        for &e in self.edges_into(at, word[depth]) {
            stack.push(e);
            self.dfs_fwd(word, self.edge(e).source, source, stack, out);
            stack.pop();
        }
    }

    fn dfs_back(&self, word: &[usize], at: VertexId, stack: &mut Vec<EdgeId>, out: &mut Vec<Path>) {
        let depth = stack.len();
        if depth == word.len() {
            let mut seq = stack.clone();
            seq.reverse();
            out.push(self.sorted_path(&seq));
            return;
        }
        let c = word[word.len() - 1 - depth];
        for &e in self.edges_out_of(at, c) {
            stack.push(e);
            self.dfs_back(word, self.edge(e).range, stack, out);
            stack.pop();
        }
    }

    fn sorted_path(&self, seq: &[EdgeId]) -> Path {
        let mut degree = Degree::zero(self.k);
        for e in seq {
            degree.0[self.edge(*e).color] += 1;
        }
        Path {
            range: self.edge(seq[0]).range,
            source: self.edge(*seq.last().unwrap()).source,
            edges: seq.to_vec(),
            degree,
        }
    }

    /// `v Λ^n`, or all of `Λ^n` without a range filter.
    pub fn paths_of_degree(&self, n: &Degree, range: Option<VertexId>) -> Vec<Path> {
        self.enumerate(&n.sorted_colors(), range, None)
    }

    /// `Λ^n w`.
    pub fn paths_from(&self, source: VertexId, n: &Degree) -> Vec<Path> {
        self.enumerate(&n.sorted_colors(), None, Some(source))
    }

    /// `v Λ^n w`.
    pub fn paths_between(&self, range: VertexId, n: &Degree, source: VertexId) -> Vec<Path> {
        self.enumerate(&n.sorted_colors(), Some(range), Some(source))
    }

    /// Minimal common extensions: all `(α, β)` with `λα = ηβ` of degree
    /// `d(λ) ∨ d(η)`.
    pub fn lambda_min(&self, lambda: &Path, eta: &Path) -> Vec<(Path, Path)> {
        if lambda.range != eta.range {
            return Vec::new();
        }
        let m = lambda.degree.join(&eta.degree);
        let ext = m.checked_sub(&lambda.degree).unwrap();
        let mut out = Vec::new();
        for alpha in self.paths_of_degree(&ext, Some(lambda.source)) {
            let whole = self.compose(lambda, &alpha).unwrap();
            let (head, beta) = self.factor(&whole, &eta.degree).unwrap();
            if &head == eta {
                out.push((alpha, beta));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{library, mat_mul, KGraphSpec};
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn fefe() -> KGraph {
        KGraph::from_spec(&library::one_vertex_fefe()).unwrap()
    }

    fn three() -> KGraph {
        KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap()
    }

    fn p(g: &KGraph, names: &[&str]) -> Path {
        g.path_from_names(names, None).unwrap()
    }

    #[test]
    fn one_vertex_rules() {
        let g = fefe();
        assert_eq!(g.path_names(&p(&g, &["e", "f2"])), ["f1", "e"]);
        assert_eq!(g.path_names(&p(&g, &["e", "f1", "e"])), ["f2", "e", "e"]);
        let e = p(&g, &["e"]);
        let f1 = p(&g, &["f1"]);
        assert_eq!(g.path_names(&g.compose(&e, &f1).unwrap()), ["f2", "e"]);
        assert_eq!(g.path_names(&g.compose(&f1, &e).unwrap()), ["f1", "e"]);
        let v = g.vertex_path(VertexId(0));
        assert_eq!(g.compose(&v, &f1).unwrap(), f1);
    }

    #[test]
    fn not_composable() {
        let g = three();
        let a0 = p(&g, &["a0"]);
        assert!(matches!(g.compose(&a0, &a0), Err(Error::NotComposable(_))));
        assert!(matches!(g.normal_form(&[g.edge_id("a0").unwrap(); 2]), Err(Error::NotComposable(_))));
    }

    #[test]
    fn counts_match_matrix_products() {
        for spec in [library::one_vertex_fefe(), library::three_vertex_eight_edge(), library::lambda_2n(1, &[2, 1]).unwrap()] {
            let g = KGraph::from_spec(&spec).unwrap();
            let n = g.vertex_count();
            for total in 0..=6u32 {
                for a in 0..=total {
                    let d = Degree(vec![a, total - a]);
                    let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
                    for c in 0..2 {
                        for _ in 0..d.0[c] {
                            m = mat_mul(&m, &g.vertex_matrix(c + 1).unwrap());
                        }
                    }
                    let all = g.paths_of_degree(&d, None);
                    assert_eq!(all.len() as u64, m.iter().flatten().sum::<u64>());
                    for v in g.vertex_ids() {
                        let row: u64 = m[v.index()].iter().sum();
                        assert_eq!(g.paths_of_degree(&d, Some(v)).len() as u64, row);
                        let col: u64 = m.iter().map(|r| r[v.index()]).sum();
                        assert_eq!(g.paths_from(v, &d).len() as u64, col);
                    }
                    let distinct: BTreeSet<_> = all.iter().collect();
                    assert_eq!(distinct.len(), all.len());
                }
            }
        }
    }

    #[test]
    fn small_enumerations() {
        let g = fefe();
        let paths = g.paths_of_degree(&Degree(vec![1, 1]), None);
        let names: Vec<_> = paths.iter().map(|q| g.path_names(q)).collect();
        assert_eq!(names, [["f1", "e"], ["f2", "e"]]);
        assert_eq!(g.paths_of_degree(&Degree(vec![0, 0]), None).len(), 1);

        let g = three();
        let v = g.vertex_id("v").unwrap();
        assert_eq!(g.paths_of_degree(&Degree(vec![1, 1]), Some(v)).len(), 2);
        assert_eq!(g.paths_of_degree(&Degree(vec![0, 0]), None).len(), 3);
    }

    /// All pairs with `λα = ηβ` at degree `d(λ) ∨ d(η)`, by brute force.
    fn lambda_min_oracle(g: &KGraph, l: &Path, e: &Path) -> BTreeSet<(Path, Path)> {
        let m = l.degree().join(e.degree());
        let da = m.checked_sub(l.degree()).unwrap();
        let db = m.checked_sub(e.degree()).unwrap();
        let mut out = BTreeSet::new();
        for a in g.paths_of_degree(&da, None) {
            for b in g.paths_of_degree(&db, None) {
                if let (Ok(x), Ok(y)) = (g.compose(l, &a), g.compose(e, &b)) {
                    if x == y {
                        out.insert((a.clone(), b.clone()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn lambda_min_matches_oracle() {
        for spec in [library::one_vertex_fefe(), library::three_vertex_eight_edge()] {
            let g = KGraph::from_spec(&spec).unwrap();
            let small: Vec<Path> = Degree(vec![2, 2])
                .below()
                .iter()
                .filter(|d| d.total() <= 2)
                .flat_map(|d| g.paths_of_degree(d, None))
                .collect();
            for l in &small {
                for e in &small {
                    let got: BTreeSet<_> = g.lambda_min(l, e).into_iter().collect();
                    assert_eq!(got, lambda_min_oracle(&g, l, e));
                }
            }
        }
    }

    #[test]
    fn lambda_min_examples() {
        let g = fefe();
        let e = p(&g, &["e"]);
        let f1 = p(&g, &["f1"]);
        let got = g.lambda_min(&e, &f1);
        assert_eq!(got.len(), 1);
        assert_eq!(g.path_names(&got[0].0), ["f2"]);
        assert_eq!(g.path_names(&got[0].1), ["e"]);
        let same = g.lambda_min(&e, &e);
        assert_eq!(same, vec![(g.vertex_path(e.source()), g.vertex_path(e.source()))]);

        let g = three();
        assert!(g.lambda_min(&p(&g, &["a0"]), &p(&g, &["c0"])).is_empty());
    }

    #[test]
    fn factor_round_trips() {
        let g = three();
        for d in Degree(vec![2, 2]).below() {
            for q in g.paths_of_degree(&Degree(vec![2, 2]), None) {
                let (h, t) = g.factor(&q, &d).unwrap();
                assert_eq!(h.degree(), &d);
                assert_eq!(g.compose(&h, &t).unwrap(), q);
            }
        }
    }

    #[test]
    fn blocks_compose_back() {
        let g = fefe();
        for q in g.paths_of_degree(&Degree(vec![3, 3]), None) {
            let bs = g.blocks(&q);
            assert_eq!(bs.len(), 3);
            let back = bs.iter().skip(1).fold(bs[0].clone(), |acc, b| g.compose(&acc, b).unwrap());
            assert_eq!(back, q);
        }
    }

    fn random_sequence(g: &KGraph, start: usize, choices: &[usize]) -> Vec<EdgeId> {
        let mut at = VertexId((start % g.vertex_count()) as u32);
        let mut seq = Vec::new();
        for &c in choices {
            let into: Vec<EdgeId> = (0..g.k()).flat_map(|col| g.edges_into(at, col).iter().copied()).collect();
            let e = into[c % into.len()];
            seq.push(e);
            at = g.edge(e).source;
        }
        seq
    }

    /// Rewrite by random swap choices until sorted.
    fn random_rewrite(g: &KGraph, seq: &[EdgeId], picks: &[usize]) -> Vec<EdgeId> {
        let mut s = seq.to_vec();
        let mut i = 0;
        loop {
            let bad: Vec<usize> = (0..s.len().saturating_sub(1))
                .filter(|&t| g.edge(s[t]).color > g.edge(s[t + 1]).color)
                .collect();
            if bad.is_empty() {
                return s;
            }
            let t = bad[picks.get(i).copied().unwrap_or(0) % bad.len()];
            i += 1;
            let (a, b) = g.swap(s[t], s[t + 1]).unwrap();
            s[t] = a;
            s[t + 1] = b;
        }
    }

    proptest! {
        #[test]
        fn normal_form_is_confluent_and_idempotent(
            lib in 0usize..3,
            start in 0usize..8,
            choices in proptest::collection::vec(0usize..8, 1..8),
            picks in proptest::collection::vec(0usize..8, 0..64),
        ) {
            let spec: KGraphSpec = match lib {
                0 => library::one_vertex_fefe(),
                1 => library::three_vertex_eight_edge(),
                _ => library::lambda_2n(2, &[2, 3, 4, 1]).unwrap(),
            };
            let g = KGraph::from_spec(&spec).unwrap();
            let seq = random_sequence(&g, start, &choices);
            let nf = g.normal_form(&seq).unwrap();
            prop_assert_eq!(nf.edges(), &random_rewrite(&g, &seq, &picks)[..]);
            prop_assert_eq!(&g.normal_form(nf.edges()).unwrap(), &nf);
            let mut counts = vec![0u32; g.k()];
            for e in &seq { counts[g.edge(*e).color] += 1; }
            prop_assert_eq!(nf.degree(), &Degree(counts));
        }
    }
}
