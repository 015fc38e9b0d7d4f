//! k-graphs presented by a colored skeleton and factorization squares.

mod infinite;
pub mod library;
mod path;
mod product;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use infinite::{InfinitePath, InfinitePathSpec};
pub use path::Path;
pub use product::product_graph;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name-based presentation, the shape of the JSON file format.
/// Colors are 1-based here and 0-based everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KGraphSpec {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub squares: Vec<SquareSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeSpec {
    pub id: String,
    pub color: usize,
    pub source: String,
    pub range: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SquareSpec {
    pub lhs: [String; 2],
    pub rhs: [String; 2],
}

impl SquareSpec {
    pub fn new(lhs: [&str; 2], rhs: [&str; 2]) -> Self {
        SquareSpec {
            lhs: lhs.map(String::from),
            rhs: rhs.map(String::from),
        }
    }
}

impl KGraphSpec {
    pub fn new(k: usize) -> Self {
        KGraphSpec { k, vertices: Vec::new(), edges: Vec::new(), squares: Vec::new() }
    }

    pub fn vertex(&mut self, name: &str) -> &mut Self {
        self.vertices.push(name.to_string());
        self
    }

    /// `color` is 1-based.
    pub fn edge(&mut self, id: &str, color: usize, source: &str, range: &str) -> &mut Self {
        self.edges.push(EdgeSpec {
            id: id.to_string(),
            color,
            source: source.to_string(),
            range: range.to_string(),
        });
        self
    }

    pub fn square(&mut self, lhs: [&str; 2], rhs: [&str; 2]) -> &mut Self {
        self.squares.push(SquareSpec::new(lhs, rhs));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// 0-based.
    pub color: usize,
    pub source: VertexId,
    pub range: VertexId,
}

/// A square `lhs0 lhs1 = rhs0 rhs1` with `lhs` colored (i, j), i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Square {
    pub lhs: (EdgeId, EdgeId),
    pub rhs: (EdgeId, EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    missing: Option<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `Ok` iff every check passed; a missing square surfaces as
    /// [`Error::IncompleteBijection`].
    pub fn ensure(&self) -> Result<()> {
        if let Some(pair) = &self.missing {
            return Err(Error::IncompleteBijection(pair.clone()));
        }
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::InvalidGraph(format!("{}: {}", c.name, c.detail))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralFlags {
    pub strongly_connected: bool,
    pub has_sources: bool,
    pub row_finite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGraph {
    k: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    vertex_ids: BTreeMap<String, VertexId>,
    edge_ids: BTreeMap<String, EdgeId>,
    // both orientations of every square
    partner: BTreeMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    // [range][color]
    into: Vec<Vec<Vec<EdgeId>>>,
    // [source][color]
    out_of: Vec<Vec<Vec<EdgeId>>>,
}

/// Resolve names and check well-formedness, without any k-graph checks.
fn resolve(spec: &KGraphSpec) -> Result<KGraph> {
    if spec.k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let mut vertex_ids = BTreeMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if vertex_ids.insert(v.clone(), VertexId(i as u32)).is_some() {
            return Err(Error::DuplicateId { kind: "vertex", name: v.clone() });
        }
    }
    let lookup_v = |what: &str, name: &str| {
        vertex_ids.get(name).copied().ok_or_else(|| Error::DanglingReference {
            what: what.to_string(),
            kind: "vertex",
            name: name.to_string(),
        })
    };
    let mut edges = Vec::with_capacity(spec.edges.len());
    let mut edge_ids = BTreeMap::new();
    for (i, e) in spec.edges.iter().enumerate() {
        if e.color == 0 || e.color > spec.k {
            return Err(Error::ColorOutOfRange { color: e.color, k: spec.k });
        }
        let what = format!("edge `{}`", e.id);
        let source = lookup_v(&what, &e.source)?;
        let range = lookup_v(&what, &e.range)?;
        if edge_ids.insert(e.id.clone(), EdgeId(i as u32)).is_some() {
            return Err(Error::DuplicateId { kind: "edge", name: e.id.clone() });
        }
        edges.push(Edge { name: e.id.clone(), color: e.color - 1, source, range });
    }
    let n = spec.vertices.len();
    let mut into = vec![vec![Vec::new(); spec.k]; n];
    let mut out_of = vec![vec![Vec::new(); spec.k]; n];
    for (i, e) in edges.iter().enumerate() {
        into[e.range.index()][e.color].push(EdgeId(i as u32));
        out_of[e.source.index()][e.color].push(EdgeId(i as u32));
    }

    let mut squares = Vec::with_capacity(spec.squares.len());
    let mut partner = BTreeMap::new();
    let mut seen_lhs = BTreeSet::new();
    for sq in &spec.squares {
        let label = format!("{}{} = {}{}", sq.lhs[0], sq.lhs[1], sq.rhs[0], sq.rhs[1]);
        let lookup_e = |name: &String| {
            edge_ids.get(name).copied().ok_or_else(|| Error::DanglingReference {
                what: format!("square {label}"),
                kind: "edge",
                name: name.clone(),
            })
        };
        let mut lhs = (lookup_e(&sq.lhs[0])?, lookup_e(&sq.lhs[1])?);
        let mut rhs = (lookup_e(&sq.rhs[0])?, lookup_e(&sq.rhs[1])?);
        let col = |e: EdgeId| edges[e.index()].color;
        if col(lhs.0) > col(lhs.1) {
            core::mem::swap(&mut lhs, &mut rhs);
        }
        let (a, b, c, d) = (&edges[lhs.0.index()], &edges[lhs.1.index()], &edges[rhs.0.index()], &edges[rhs.1.index()]);
        let ok = a.color < b.color
            && c.color == b.color
            && d.color == a.color
            && a.source == b.range
            && c.source == d.range
            && a.range == c.range
            && b.source == d.source;
        if !ok {
            return Err(Error::MalformedSquare(label));
        }
        if !seen_lhs.insert(lhs) {
            return Err(Error::DuplicateSquare(label));
        }
        squares.push(Square { lhs, rhs });
        partner.insert(lhs, rhs);
        partner.insert(rhs, lhs);
    }

    Ok(KGraph {
        k: spec.k,
        vertices: spec.vertices.clone(),
        edges,
        squares,
        vertex_ids,
        edge_ids,
        partner,
        into,
        out_of,
    })
}

/// Check that `spec` presents a genuine k-graph.
///
/// Structural problems (unknown ids, duplicate ids, badly shaped squares,
/// two squares with one left-hand side) are returned as errors. The
/// k-graph conditions themselves are reported check by check.
pub fn validate_kgraph(spec: &KGraphSpec) -> Result<ValidationReport> {
    let g = resolve(spec)?;
    Ok(g.semantic_checks())
}

impl KGraph {
    /// Build and validate.
    pub fn from_spec(spec: &KGraphSpec) -> Result<KGraph> {
        let g = resolve(spec)?;
        g.semantic_checks().ensure()?;
        Ok(g)
    }

    pub fn to_spec(&self) -> KGraphSpec {
        let name = |e: EdgeId| self.edges[e.index()].name.clone();
        KGraphSpec {
            k: self.k,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.name.clone(),
                    color: e.color + 1,
                    source: self.vertices[e.source.index()].clone(),
                    range: self.vertices[e.range.index()].clone(),
                })
                .collect(),
            squares: self
                .squares
                .iter()
                .map(|s| SquareSpec {
                    lhs: [name(s.lhs.0), name(s.lhs.1)],
                    rhs: [name(s.rhs.0), name(s.rhs.1)],
                })
                .collect(),
        }
    }

    fn semantic_checks(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let mut missing = None;

        // every composable bicolored pair sits in exactly one square
        let mut problems: Vec<String> = Vec::new();
        let mut rhs_seen = BTreeSet::new();
        for sq in &self.squares {
            if !rhs_seen.insert(sq.rhs) {
                problems.push(format!("{} is the right-hand side of two squares", self.pair_name(sq.rhs)));
            }
        }
        for a in self.edge_ids() {
            let ea = self.edge(a);
            for &b in self.into[ea.source.index()].iter().flatten() {
                let cb = self.edge(b).color;
                if cb == ea.color || self.partner.contains_key(&(a, b)) {
                    continue;
                }
                let name = self.pair_name((a, b));
                if missing.is_none() {
                    missing = Some(name.clone());
                }
                problems.push(format!("{name} has no square"));
            }
        }
        checks.push(Check {
            name: "square bijectivity".into(),
            passed: problems.is_empty(),
            detail: summarize(&problems, self.squares.len(), "squares"),
        });

        if self.k >= 3 {
            let bad = if problems.is_empty() { self.hexagon_failures() } else { vec!["skipped: squares incomplete".into()] };
            checks.push(Check {
                name: "hexagon".into(),
                passed: bad.is_empty(),
                detail: summarize(&bad, 0, "tricolored triples"),
            });
        }

        let mats: Vec<_> = (0..self.k).map(|c| self.vertex_matrix_0(c)).collect();
        let mut noncommuting = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                if mat_mul(&mats[i], &mats[j]) != mat_mul(&mats[j], &mats[i]) {
                    noncommuting.push(format!("A{} A{} != A{} A{}", i + 1, j + 1, j + 1, i + 1));
                }
            }
        }
        checks.push(Check {
            name: "commuting vertex matrices".into(),
            passed: noncommuting.is_empty(),
            detail: summarize(&noncommuting, self.k * (self.k - 1) / 2, "pairs"),
        });
        ValidationReport { checks, missing }
    }

    /// Reverse every composable tricolored triple by `s1 s2 s1` and by
    /// `s2 s1 s2`; a k-graph needs both to agree.
    fn hexagon_failures(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for a in self.edge_ids() {
            let ea = self.edge(a);
            for &b in self.into[ea.source.index()].iter().flatten() {
                let eb = self.edge(b);
                if eb.color == ea.color {
                    continue;
                }
                for &c in self.into[eb.source.index()].iter().flatten() {
                    let ec = self.edge(c);
                    if ec.color == ea.color || ec.color == eb.color {
                        continue;
                    }
                    let mut p = [a, b, c];
                    let mut q = [a, b, c];
                    for (w, order) in [(&mut p, [0, 1, 0]), (&mut q, [1, 0, 1])] {
                        for s in order {
                            let (x, y) = self.partner[&(w[s], w[s + 1])];
                            w[s] = x;
                            w[s + 1] = y;
                        }
                    }
                    if p != q {
                        bad.push(format!("{} {} {}", ea.name, eb.name, ec.name));
                    }
                }
            }
        }
        bad
    }

    fn pair_name(&self, (a, b): (EdgeId, EdgeId)) -> String {
        format!("({}, {})", self.edge(a).name, self.edge(b).name)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_ids.get(name).copied().ok_or_else(|| Error::DanglingReference {
            what: "lookup".into(),
            kind: "vertex",
            name: name.to_string(),
        })
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_ids.get(name).copied().ok_or_else(|| Error::DanglingReference {
            what: "lookup".into(),
            kind: "edge",
            name: name.to_string(),
        })
    }

    /// Edges of `color` with range `v`.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.into[v.index()][color]
    }

    /// Edges of `color` with source `v`.
    pub fn edges_out_of(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.out_of[v.index()][color]
    }

    /// The other side of the square containing the adjacent pair `(a, b)`.
    pub fn swap(&self, a: EdgeId, b: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.partner.get(&(a, b)).copied()
    }

    fn vertex_matrix_0(&self, color: usize) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0u64; n]; n];
        for e in &self.edges {
            if e.color == color {
                m[e.range.index()][e.source.index()] += 1;
            }
        }
        m
    }

    /// `A_i(v, w)` = number of edges of color `i` (1-based) from `w` to `v`.
    pub fn vertex_matrix(&self, color: usize) -> Result<Vec<Vec<u64>>> {
        if color == 0 || color > self.k {
            return Err(Error::ColorOutOfRange { color, k: self.k });
        }
        Ok(self.vertex_matrix_0(color - 1))
    }

    pub fn structural_flags(&self) -> StructuralFlags {
        let n = self.vertices.len();
        let reach = |start: usize, forward: bool| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for e in &self.edges {
                    let (from, to) = if forward { (e.source, e.range) } else { (e.range, e.source) };
                    if from.index() == v && !seen[to.index()] {
                        seen[to.index()] = true;
                        queue.push_back(to.index());
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        let strongly_connected = n > 0 && reach(0, true) && reach(0, false);
        // a source in the k-graph sense: some v with v Λ^{e_i} empty
        let has_sources = (0..n).any(|v| (0..self.k).any(|c| self.into[v][c].is_empty()));
        StructuralFlags { strongly_connected, has_sources, row_finite: true }
    }
}

fn summarize(problems: &[String], count: usize, what: &str) -> String {
    match problems {
        [] if count > 0 => format!("{count} {what} ok"),
        [] => "ok".into(),
        [one] => one.clone(),
        [first, rest @ ..] => format!("{first} (+{} more)", rest.len()),
    }
}

pub(crate) fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut c = vec![vec![0u64; n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::library;
    use super::*;

    #[test]
    fn library_graphs_validate() {
        for spec in [
            library::one_vertex_fefe(),
            library::three_vertex_eight_edge(),
            library::lambda_2n(1, &[2, 1]).unwrap(),
            library::lambda_2n(2, &[2, 3, 4, 1]).unwrap(),
        ] {
            let report = validate_kgraph(&spec).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn one_graph_passes_vacuously() {
        let mut s = KGraphSpec::new(1);
        s.vertex("v").edge("a", 1, "v", "v").edge("b", 1, "v", "v");
        assert!(validate_kgraph(&s).unwrap().passed());
    }

    #[test]
    fn missing_square_is_incomplete_bijection() {
        let mut s = KGraphSpec::new(2);
        s.vertex("v").edge("f1", 1, "v", "v").edge("f2", 1, "v", "v").edge("e", 2, "v", "v");
        s.square(["f1", "e"], ["e", "f2"]);
        let report = validate_kgraph(&s).unwrap();
        assert!(!report.passed());
        assert!(matches!(report.ensure(), Err(Error::IncompleteBijection(p)) if p.contains("f2")));
    }

    #[test]
    fn structural_errors() {
        let mut s = KGraphSpec::new(2);
        s.vertex("v").edge("a", 1, "v", "w");
        assert!(matches!(validate_kgraph(&s), Err(Error::DanglingReference { .. })));

        let mut s = library::one_vertex_fefe();
        let dup = s.squares[0].clone();
        s.squares.push(dup);
        assert!(matches!(validate_kgraph(&s), Err(Error::DuplicateSquare(_))));

        let mut s = KGraphSpec::new(2);
        s.vertex("v").edge("a", 3, "v", "v");
        assert!(matches!(validate_kgraph(&s), Err(Error::ColorOutOfRange { color: 3, k: 2 })));
    }

    #[test]
    fn vertex_matrices() {
        let g = KGraph::from_spec(&library::one_vertex_fefe()).unwrap();
        assert_eq!(g.vertex_matrix(1).unwrap(), vec![vec![2]]);
        assert_eq!(g.vertex_matrix(2).unwrap(), vec![vec![1]]);
        assert!(matches!(g.vertex_matrix(3), Err(Error::ColorOutOfRange { .. })));

        let g = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
        assert_eq!(g.vertex_matrix(1).unwrap(), vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
    }

    #[test]
    fn flags() {
        for spec in [library::one_vertex_fefe(), library::three_vertex_eight_edge()] {
            let f = KGraph::from_spec(&spec).unwrap().structural_flags();
            assert_eq!(f, StructuralFlags { strongly_connected: true, has_sources: false, row_finite: true });
        }
        let mut s = library::one_vertex_fefe();
        s.vertex("lonely");
        let f = KGraph::from_spec(&s).unwrap().structural_flags();
        assert!(!f.strongly_connected);
    }

    #[test]
    fn broken_hexagon_is_reported() {
        // product of the one-vertex graph with a 1-graph, then corrupt one square
        let one = library::one_vertex_fefe();
        let mut two = KGraphSpec::new(1);
        two.vertex("p").edge("a", 1, "p", "p").edge("b", 1, "p", "p");
        let g = product_graph(&KGraph::from_spec(&one).unwrap(), &KGraph::from_spec(&two).unwrap());
        let mut spec = g.to_spec();
        assert!(validate_kgraph(&spec).unwrap().passed());
        // swap the targets of two mixed squares, keeping bijectivity
        let i = spec.squares.iter().position(|s| s.lhs[0] == "f1|p" && s.lhs[1] == "v|a").unwrap();
        let j = spec.squares.iter().position(|s| s.lhs[0] == "f1|p" && s.lhs[1] == "v|b").unwrap();
        let ri = spec.squares[i].rhs.clone();
        spec.squares[i].rhs = spec.squares[j].rhs.clone();
        spec.squares[j].rhs = ri;
        let report = validate_kgraph(&spec).unwrap();
        let hex = report.checks.iter().find(|c| c.name == "hexagon").unwrap();
        assert!(!hex.passed, "{report:?}");
    }
}
