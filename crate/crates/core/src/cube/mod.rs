//! One-skeletons of square complexes (CAT(0) cube-complex machinery).
//!
//! Complexes are specified by vertices, edges and designated squares; higher
//! cubes are implicit. Everything downstream (hyperplanes, separation,
//! intervals, medians, partitions, dimension) depends only on this data.

pub mod blowup;
pub mod hyperplane;
pub mod median;
pub mod partition;
pub mod propmax;

use crate::error::{Error, Result};

/// Square-complex one-skeleton with designated 2-cells.
#[derive(Debug, Clone)]
pub struct CubeComplex {
    pub n_vertices: usize,
    /// Normalized `u < v`.
    pub edges: Vec<(u32, u32)>,
    /// Cyclic boundary order.
    pub squares: Vec<[u32; 4]>,
    /// Per vertex: `(neighbor, edge_id)` sorted by neighbor index.
    pub adj: Vec<Vec<(u32, u32)>>,
    pub declared_dimension: Option<u32>,
    /// Key it was built from, for reports.
    pub key: String,
}

impl CubeComplex {
    /// Validates and assembles a complex: edges well-formed, square
    /// boundaries are 4-cycles of distinct vertices, graph connected and
    /// bipartite (odd loops cannot occur in a cube-complex skeleton).
    pub fn new(
        key: impl Into<String>,
        n_vertices: usize,
        mut edges: Vec<(u32, u32)>,
        squares: Vec<[u32; 4]>,
        declared_dimension: Option<u32>,
    ) -> Result<CubeComplex> {
        let key = key.into();
        if n_vertices == 0 {
            return Err(Error::NotCat0("complex has no vertices".into()));
        }
        for e in &mut edges {
            if e.0 == e.1 {
                return Err(Error::NotCat0(format!("loop edge at vertex {}", e.0)));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.1 as usize >= n_vertices {
                return Err(Error::NotCat0(format!("edge endpoint {} out of range", e.1)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n_vertices];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u as usize].push((v, id as u32));
            adj[v as usize].push((u, id as u32));
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        let cx = CubeComplex {
            n_vertices,
            edges,
            squares,
            adj,
            declared_dimension,
            key,
        };
        for (i, sq) in cx.squares.iter().enumerate() {
            let mut distinct = sq.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != 4 {
                return Err(Error::NotCat0(format!("square {i} has repeated vertices")));
            }
            for k in 0..4 {
                let (a, b) = (sq[k], sq[(k + 1) % 4]);
                if cx.edge_id(a, b).is_none() {
                    return Err(Error::NotCat0(format!(
                        "square {i} boundary {a}-{b} is not an edge"
                    )));
                }
            }
        }
        // connected + bipartite via one BFS
        let mut color = vec![u8::MAX; cx.n_vertices];
        let mut queue = std::collections::VecDeque::from([0u32]);
        color[0] = 0;
        let mut seen = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &cx.adj[v as usize] {
                if color[w as usize] == u8::MAX {
                    color[w as usize] = 1 - color[v as usize];
                    seen += 1;
                    queue.push_back(w);
                } else if color[w as usize] == color[v as usize] {
                    return Err(Error::NotCat0(
                        "graph contains an odd cycle (not bipartite)".into(),
                    ));
                }
            }
        }
        if seen != cx.n_vertices {
            return Err(Error::NotCat0("graph is not connected".into()));
        }
        Ok(cx)
    }

    pub fn edge_id(&self, a: u32, b: u32) -> Option<u32> {
        self.adj[a as usize]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| self.adj[a as usize][i].1)
    }

    pub fn bfs_distances(&self, from: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n_vertices];
        let mut queue = std::collections::VecDeque::from([from]);
        dist[from as usize] = 0;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Parses the complex file format: lines `vertices n`, `edge u v`,
/// `square a b c d` (cyclic order) and optional `dimension n`; vertex ids
/// are 0-based. Blank lines and `#` comments are ignored.
pub fn parse_complex_file(key: &str, text: &str) -> Result<CubeComplex> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    let mut dim = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let head = it.next().unwrap();
        let nums: Vec<u32> = it
            .map(|t| {
                t.parse::<u32>().map_err(|_| {
                    Error::BadComplexFile(format!("line {}: bad number `{t}`", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        match (head, nums.as_slice()) {
            ("vertices", [k]) => n = Some(*k as usize),
            ("edge", [u, v]) => edges.push((*u, *v)),
            ("square", [a, b, c, d]) => squares.push([*a, *b, *c, *d]),
            ("dimension", [k]) => dim = Some(*k),
            _ => {
                return Err(Error::BadComplexFile(format!(
                    "line {}: unrecognized `{line}`",
                    lineno + 1
                )))
            }
        }
    }
    let n = n.ok_or_else(|| Error::BadComplexFile("missing `vertices n` line".into()))?;
    CubeComplex::new(key, n, edges, squares, dim)
}

/// Resolves a complex key: `grid:d:side`, `tree:arity:depth`,
/// `treeprod:a:d:a:d`, `cube:n`, or `file:<path>`.
pub fn resolve_complex(key: &str) -> Result<CubeComplex> {
    let parts: Vec<&str> = key.split(':').collect();
    let parse = |s: &str| -> Result<u32> {
        s.parse::<u32>()
            .map_err(|_| Error::BadKey {
                key: key.to_string(),
                reason: format!("bad number `{s}`"),
            })
    };
    match parts.as_slice() {
        ["grid", d, side] => grid(key, parse(d)?, parse(side)?),
        ["tree", arity, depth] => tree(key, parse(arity)?, parse(depth)?),
        ["treeprod", a1, d1, a2, d2] => {
            treeprod(key, parse(a1)?, parse(d1)?, parse(a2)?, parse(d2)?)
        }
        ["cube", n] => hypercube(key, parse(n)?),
        ["file", path] => parse_complex_file(key, &std::fs::read_to_string(path)?),
        _ => Err(Error::UnknownKey(key.to_string())),
    }
}

/// `side^d` lattice patch of `Z^d`.
pub fn grid(key: &str, d: u32, side: u32) -> Result<CubeComplex> {
    if d == 0 || side < 2 || (side as u64).pow(d) > 1 << 22 {
        return Err(Error::BadKey {
            key: key.to_string(),
            reason: "need d >= 1, side >= 2, side^d <= 2^22".into(),
        });
    }
    let n = (side as usize).pow(d);
    let stride: Vec<usize> = (0..d).map(|i| (side as usize).pow(i)).collect();
    let coord = |v: usize, i: usize| (v / stride[i]) % side as usize;
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for v in 0..n {
        for i in 0..d as usize {
            if coord(v, i) + 1 < side as usize {
                let vi = v + stride[i];
                edges.push((v as u32, vi as u32));
                for j in (i + 1)..d as usize {
                    if coord(v, j) + 1 < side as usize {
                        let vj = v + stride[j];
                        let vij = vi + stride[j];
                        squares.push([v as u32, vi as u32, vij as u32, vj as u32]);
                    }
                }
            }
        }
    }
    CubeComplex::new(key, n, edges, squares, Some(d))
}

/// Rooted tree where every node has `arity` children, `depth` levels below
/// the root. No squares.
pub fn tree(key: &str, arity: u32, depth: u32) -> Result<CubeComplex> {
    if arity == 0 {
        return Err(Error::BadKey {
            key: key.to_string(),
            reason: "arity must be positive".into(),
        });
    }
    let mut n: u64 = 1;
    let mut level = 1u64;
    for _ in 0..depth {
        level *= u64::from(arity);
        n += level;
        if n > 1 << 22 {
            return Err(Error::BadKey {
                key: key.to_string(),
                reason: "tree too large".into(),
            });
        }
    }
    let mut edges = Vec::new();
    // BFS indexing: children of node v are arity*v + 1 ... arity*v + arity
    for v in 0..n {
        for c in 1..=u64::from(arity) {
            let w = u64::from(arity) * v + c;
            if w < n {
                edges.push((v as u32, w as u32));
            }
        }
    }
    CubeComplex::new(key, n as usize, edges, Vec::new(), Some(1))
}

/// Product of two trees; squares are pairs of tree edges.
pub fn treeprod(key: &str, a1: u32, d1: u32, a2: u32, d2: u32) -> Result<CubeComplex> {
    let t1 = tree("tmp", a1, d1)?;
    let t2 = tree("tmp", a2, d2)?;
    let (n1, n2) = (t1.n_vertices, t2.n_vertices);
    let n = n1 * n2;
    if n > 1 << 22 {
        return Err(Error::BadKey {
            key: key.to_string(),
            reason: "product too large".into(),
        });
    }
    let idx = |u: usize, v: usize| (u * n2 + v) as u32;
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for &(u, up) in &t1.edges {
        for v in 0..n2 {
            edges.push((idx(u as usize, v), idx(up as usize, v)));
        }
    }
    for u in 0..n1 {
        for &(v, vp) in &t2.edges {
            edges.push((idx(u, v as usize), idx(u, vp as usize)));
        }
    }
    for &(u, up) in &t1.edges {
        for &(v, vp) in &t2.edges {
            squares.push([
                idx(u as usize, v as usize),
                idx(up as usize, v as usize),
                idx(up as usize, vp as usize),
                idx(u as usize, vp as usize),
            ]);
        }
    }
    CubeComplex::new(key, n, edges, squares, Some(2))
}

/// Skeleton of the `n`-cube.
pub fn hypercube(key: &str, n: u32) -> Result<CubeComplex> {
    if n == 0 || n > 20 {
        return Err(Error::BadKey {
            key: key.to_string(),
            reason: "need 1 <= n <= 20".into(),
        });
    }
    let size = 1usize << n;
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for v in 0..size {
        for i in 0..n {
            let vi = v ^ (1 << i);
            if vi > v {
                edges.push((v as u32, vi as u32));
            }
            for j in (i + 1)..n {
                let vj = v ^ (1 << j);
                let vij = vi ^ (1 << j);
                if v < vi.min(vj) {
                    squares.push([v as u32, vi as u32, vij as u32, vj as u32]);
                }
            }
        }
    }
    CubeComplex::new(key, size, edges, squares, Some(n))
}

/// Catalog of built-in complex constructors.
pub fn complex_templates() -> Vec<&'static str> {
    vec![
        "cube:<n>",
        "file:<path>",
        "grid:<d>:<side>",
        "tree:<arity>:<depth>",
        "treeprod:<a>:<d>:<a>:<d>",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_have_expected_sizes() {
        let g = resolve_complex("grid:2:10").unwrap();
        assert_eq!(g.n_vertices, 100);
        assert_eq!(g.edges.len(), 180);
        assert_eq!(g.squares.len(), 81);

        let t = resolve_complex("tree:3:5").unwrap();
        assert_eq!(t.n_vertices, 364);
        assert_eq!(t.edges.len(), 363);

        let tp = resolve_complex("treeprod:2:3:2:3").unwrap();
        assert_eq!(tp.n_vertices, 225);
        assert_eq!(tp.squares.len(), 196);

        let c = resolve_complex("cube:4").unwrap();
        assert_eq!(c.n_vertices, 16);
        assert_eq!(c.edges.len(), 32);
        assert_eq!(c.squares.len(), 24);
    }

    #[test]
    fn non_bipartite_rejected() {
        let err = CubeComplex::new("tri", 3, vec![(0, 1), (1, 2), (0, 2)], vec![], None);
        assert!(matches!(err, Err(Error::NotCat0(_))));
    }

    #[test]
    fn square_boundary_must_exist() {
        let err = CubeComplex::new(
            "bad",
            4,
            vec![(0, 1), (1, 2), (2, 3)],
            vec![[0, 1, 2, 3]],
            None,
        );
        assert!(matches!(err, Err(Error::NotCat0(_))));
    }

    #[test]
    fn file_roundtrip() {
        let text = "vertices 4\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 0\nsquare 0 1 2 3\ndimension 2\n";
        let cx = parse_complex_file("file:sq", text).unwrap();
        assert_eq!(cx.n_vertices, 4);
        assert_eq!(cx.squares.len(), 1);
        assert_eq!(cx.declared_dimension, Some(2));
    }
}
