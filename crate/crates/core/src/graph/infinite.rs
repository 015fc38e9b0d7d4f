use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{KGraph, Path, VertexId};
use crate::{Degree, Error, Result};

/// `prefix cycle cycle cycle ...` as edge names.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InfinitePathSpec {
    #[cfg_attr(feature = "serde", serde(default))]
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

/// An eventually periodic infinite path, cut into segments
/// `x = x_1 x_2 x_3 ...` of degree `(1, ..., 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitePath {
    range: VertexId,
    prefix: Vec<Path>,
    cycle: Vec<Path>,
}

impl InfinitePath {
    pub fn new(g: &KGraph, prefix: &Path, cycle: &Path) -> Result<Self> {
        let bad = |why: String| Error::InvalidInfinitePath(why);
        let Some(p) = prefix.degree().square_level() else {
            return Err(bad(format!("prefix degree {} is not a multiple of (1,...,1)", prefix.degree())));
        };
        match cycle.degree().square_level() {
            Some(c) if c > 0 => {}
            _ => return Err(bad(format!("cycle degree {} is not a positive multiple of (1,...,1)", cycle.degree()))),
        }
        if cycle.source() != cycle.range() {
            return Err(bad("cycle does not return to its range".into()));
        }
        if prefix.source() != cycle.range() {
            return Err(bad("cycle does not start at the source of the prefix".into()));
        }
        let prefix_blocks = if p == 0 { Vec::new() } else { g.blocks(prefix) };
        Ok(InfinitePath { range: prefix.range(), prefix: prefix_blocks, cycle: g.blocks(cycle) })
    }

    pub fn from_spec(g: &KGraph, spec: &InfinitePathSpec) -> Result<Self> {
        fn names(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        if spec.cycle.is_empty() {
            return Err(Error::InvalidInfinitePath("empty cycle".into()));
        }
        let cycle = g.path_from_names(&names(&spec.cycle), None)?;
        let prefix = if spec.prefix.is_empty() {
            g.vertex_path(cycle.range())
        } else {
            g.path_from_names(&names(&spec.prefix), None)?
        };
        Self::new(g, &prefix, &cycle)
    }

    pub fn to_spec(&self, g: &KGraph) -> InfinitePathSpec {
        let names = |blocks: &[Path]| blocks.iter().flat_map(|b| g.path_names(b)).collect();
        InfinitePathSpec { prefix: names(&self.prefix), cycle: names(&self.cycle) }
    }

    /// Follow the first path of degree `(1, ..., 1)` out of each vertex
    /// until a vertex repeats.
    pub fn default_from(g: &KGraph, v: VertexId) -> Result<Self> {
        let one = Degree::square(g.k(), 1);
        let mut seen: Vec<VertexId> = Vec::new();
        let mut blocks: Vec<Path> = Vec::new();
        let mut at = v;
        loop {
            if let Some(t) = seen.iter().position(|&w| w == at) {
                let cycle = blocks.split_off(t);
                return Ok(InfinitePath { range: v, prefix: blocks, cycle });
            }
            seen.push(at);
            let next = g
                .paths_of_degree(&one, Some(at))
                .into_iter()
                .next()
                .ok_or_else(|| Error::BadChoice(format!("no path of degree {one} into {}", g.vertex_name(at))))?;
            at = next.source();
            blocks.push(next);
        }
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Segment `x_i`, 1-based.
    pub fn block(&self, i: usize) -> &Path {
        assert!(i >= 1, "segments are numbered from 1");
        if i <= self.prefix.len() {
            &self.prefix[i - 1]
        } else {
            &self.cycle[(i - 1 - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// `v_i = r(x_i)`.
    pub fn stage_vertex(&self, i: usize) -> VertexId {
        self.block(i).range()
    }

    /// `x(0, n·(1, ..., 1))`.
    pub fn prefix_path(&self, g: &KGraph, n: usize) -> Path {
        let mut p = g.vertex_path(self.range);
        for i in 1..=n {
            p = g.compose(&p, self.block(i)).expect("consecutive segments compose");
        }
        p
    }

    /// `x(a, b)` for `a <= b`.
    pub fn window(&self, g: &KGraph, a: &Degree, b: &Degree) -> Option<Path> {
        let level = b.max_entry() as usize;
        g.segment(&self.prefix_path(g, level), a, b)
    }

    /// `σ^{n·(1, ..., 1)}(x)`.
    pub fn shift_blocks(&self, n: usize) -> InfinitePath {
        if n <= self.prefix.len() {
            return InfinitePath {
                range: self.block(n + 1).range(),
                prefix: self.prefix[n..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let r = (n - self.prefix.len()) % self.cycle.len();
        let mut cycle = self.cycle[r..].to_vec();
        cycle.extend_from_slice(&self.cycle[..r]);
        InfinitePath { range: cycle[0].range(), prefix: Vec::new(), cycle }
    }

    /// Whether `σ^m(x)` and `σ^n(y)` agree on their first `depth` segments.
    pub fn tails_agree(&self, g: &KGraph, m: &Degree, other: &InfinitePath, n: &Degree, depth: usize) -> bool {
        let d = Degree::square(g.k(), depth as u32);
        self.window(g, m, &(m + &d)) == other.window(g, n, &(n + &d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::library;
    use alloc::vec;

    fn fefe() -> KGraph {
        KGraph::from_spec(&library::one_vertex_fefe()).unwrap()
    }

    #[test]
    fn prefixes_of_ef1_cycle() {
        let g = fefe();
        let x = InfinitePath::from_spec(&g, &InfinitePathSpec { prefix: vec![], cycle: vec!["e".into(), "f1".into()] }).unwrap();
        assert!(x.prefix_path(&g, 0).is_vertex());
        assert_eq!(g.path_names(&x.prefix_path(&g, 1)), ["f2", "e"]);
        let four = g.path_from_names(&["e", "f1", "e", "f1"], None).unwrap();
        assert_eq!(x.prefix_path(&g, 2), four);
        for n in 0..5 {
            let (h, _) = g.factor(&x.prefix_path(&g, n + 1), &Degree::square(2, n as u32)).unwrap();
            assert_eq!(h, x.prefix_path(&g, n));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let g = fefe();
        let spec = InfinitePathSpec { prefix: vec![], cycle: vec!["e".into()] };
        assert!(matches!(InfinitePath::from_spec(&g, &spec), Err(Error::InvalidInfinitePath(_))));
        let g = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
        // a0 b0 goes u <- v <- u, a closed cycle at u
        let spec = InfinitePathSpec { prefix: vec!["c0".into(), "d0".into()], cycle: vec!["a0".into(), "b0".into()] };
        assert!(InfinitePath::from_spec(&g, &spec).is_err());
    }

    #[test]
    fn default_paths_close_up() {
        let g = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
        for v in g.vertex_ids() {
            let x = InfinitePath::default_from(&g, v).unwrap();
            assert_eq!(x.range(), v);
            assert!(x.period() >= 1);
            let back = InfinitePath::from_spec(&g, &x.to_spec(&g)).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn shifting_drops_segments() {
        let g = KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap();
        let x = InfinitePath::default_from(&g, g.vertex_id("v").unwrap()).unwrap();
        for n in 0..4 {
            let y = x.shift_blocks(n);
            for i in 1..6 {
                assert_eq!(y.block(i), x.block(i + n));
            }
            assert!(x.tails_agree(&g, &Degree::square(2, n as u32), &y, &Degree::zero(2), 4));
        }
    }
}
