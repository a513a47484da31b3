//! Hyperplanes as equivalence classes of edges under square-opposition,
//! halfspace signatures, the crossing graph and the dimension estimate.

use super::CubeComplex;
use crate::error::{Error, Result};
use serde::Serialize;

/// All hyperplanes of a complex, with per-vertex halfspace signatures.
#[derive(Debug)]
pub struct Hyperplanes {
    pub count: usize,
    /// Hyperplane id per edge.
    pub edge_class: Vec<u32>,
    /// Edge ids per hyperplane.
    pub members: Vec<Vec<u32>>,
    /// Per-vertex halfspace bitset: bit `h` tells which side of hyperplane
    /// `h` the vertex lies on.
    pub signatures: Vec<Vec<u64>>,
    blocks: usize,
    /// Crossing relation as bitset rows (from co-occurrence in a square).
    pub crossings: Vec<Vec<u64>>,
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, x: u32) -> u32 {
        if self.0[x as usize] != x {
            let r = self.find(self.0[x as usize]);
            self.0[x as usize] = r;
            r
        } else {
            x
        }
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra as usize] = rb;
        }
    }
}

/// Partitions the edges into hyperplanes by the transitive closure of
/// square-opposition and verifies each class separates the complex into
/// exactly two halfspaces.
pub fn compute_hyperplanes(cx: &CubeComplex) -> Result<Hyperplanes> {
    let m = cx.edges.len();
    let mut dsu = Dsu((0..m as u32).collect());
    for sq in &cx.squares {
        let e = |a: u32, b: u32| cx.edge_id(a, b).expect("validated square boundary");
        dsu.union(e(sq[0], sq[1]), e(sq[2], sq[3]));
        dsu.union(e(sq[1], sq[2]), e(sq[3], sq[0]));
    }
    // deterministic ids ordered by smallest member edge
    let mut class_of_root: std::collections::HashMap<u32, u32> = Default::default();
    let mut edge_class = vec![0u32; m];
    let mut members: Vec<Vec<u32>> = Vec::new();
    for e in 0..m as u32 {
        let r = dsu.find(e);
        let id = *class_of_root.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            (members.len() - 1) as u32
        });
        edge_class[e as usize] = id;
        members[id as usize].push(e);
    }
    let count = members.len();
    let blocks = count.div_ceil(64);

    // halfspaces: delete the class, flood-fill, demand exactly two components
    let mut signatures = vec![vec![0u64; blocks]; cx.n_vertices];
    for (h, edges_of_h) in members.iter().enumerate() {
        let mut comp = vec![u8::MAX; cx.n_vertices];
        let removed: std::collections::HashSet<u32> = edges_of_h.iter().copied().collect();
        let mut n_comp = 0u8;
        for start in 0..cx.n_vertices as u32 {
            if comp[start as usize] != u8::MAX {
                continue;
            }
            if n_comp >= 2 {
                return Err(Error::NotCat0(format!(
                    "hyperplane {h} splits the complex into more than two parts"
                )));
            }
            let mut stack = vec![start];
            comp[start as usize] = n_comp;
            while let Some(v) = stack.pop() {
                for &(w, eid) in &cx.adj[v as usize] {
                    if removed.contains(&eid) || comp[w as usize] != u8::MAX {
                        continue;
                    }
                    comp[w as usize] = n_comp;
                    stack.push(w);
                }
            }
            n_comp += 1;
        }
        if n_comp != 2 {
            return Err(Error::NotCat0(format!(
                "hyperplane {h} does not separate the complex"
            )));
        }
        for &e in edges_of_h {
            let (u, v) = cx.edges[e as usize];
            if comp[u as usize] == comp[v as usize] {
                return Err(Error::NotCat0(format!(
                    "edge {e} of hyperplane {h} does not cross between halfspaces"
                )));
            }
        }
        for v in 0..cx.n_vertices {
            if comp[v] == 1 {
                signatures[v][h / 64] |= 1u64 << (h % 64);
            }
        }
    }

    // crossing graph from squares
    let mut crossings = vec![vec![0u64; blocks]; count];
    for sq in &cx.squares {
        let e = |a: u32, b: u32| cx.edge_id(a, b).unwrap();
        let h1 = edge_class[e(sq[0], sq[1]) as usize] as usize;
        let h2 = edge_class[e(sq[1], sq[2]) as usize] as usize;
        if h1 == h2 {
            return Err(Error::NotCat0(
                "a hyperplane crosses itself inside a square".into(),
            ));
        }
        crossings[h1][h2 / 64] |= 1u64 << (h2 % 64);
        crossings[h2][h1 / 64] |= 1u64 << (h1 % 64);
    }

    Ok(Hyperplanes {
        count,
        edge_class,
        members,
        signatures,
        blocks,
        crossings,
    })
}

impl Hyperplanes {
    /// Number of hyperplanes separating `p` from `q`.
    pub fn separating_count(&self, p: u32, q: u32) -> u32 {
        self.signatures[p as usize]
            .iter()
            .zip(&self.signatures[q as usize])
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// Whether hyperplane `h` separates `p` from `q`.
    pub fn separates(&self, h: u32, p: u32, q: u32) -> bool {
        let (blk, bit) = (h as usize / 64, h % 64);
        ((self.signatures[p as usize][blk] ^ self.signatures[q as usize][blk]) >> bit) & 1 == 1
    }

    pub fn cross(&self, a: u32, b: u32) -> bool {
        (self.crossings[a as usize][b as usize / 64] >> (b % 64)) & 1 == 1
    }

    /// Ids of hyperplanes separating `p` from `q`.
    pub fn separating_set(&self, p: u32, q: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for blk in 0..self.blocks {
            let mut x = self.signatures[p as usize][blk] ^ self.signatures[q as usize][blk];
            while x != 0 {
                let bit = x.trailing_zeros();
                out.push((blk * 64) as u32 + bit);
                x &= x - 1;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SageevCheck {
    pub bfs_distance: u32,
    pub separating: u32,
    pub equal: bool,
}

/// Distance vs separating-hyperplane count for one pair.
pub fn sageev_distance_check(
    cx: &CubeComplex,
    hp: &Hyperplanes,
    p: u32,
    q: u32,
) -> SageevCheck {
    let bfs = cx.bfs_distances(p)[q as usize];
    let sep = hp.separating_count(p, q);
    SageevCheck {
        bfs_distance: bfs,
        separating: sep,
        equal: bfs == sep,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionEstimate {
    pub dimension: u32,
    /// Lower bound only, when the clique search hit its budget.
    pub exact: bool,
    /// One maximum family of pairwise-crossing hyperplanes.
    pub witness: Vec<u32>,
}

/// Maximum size of a pairwise-crossing hyperplane family: max clique of the
/// crossing graph, exact by branch-and-bound at desk scale.
pub fn dimension_estimate(hp: &Hyperplanes, node_budget: u64) -> DimensionEstimate {
    let n = hp.count;
    let mut best: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    let mut exact = true;
    // order by crossing degree, densest first
    let mut order: Vec<u32> = (0..n as u32).collect();
    let deg = |h: u32| {
        hp.crossings[h as usize]
            .iter()
            .map(|b| b.count_ones())
            .sum::<u32>()
    };
    order.sort_by_key(|&h| std::cmp::Reverse(deg(h)));

    fn extend(
        hp: &Hyperplanes,
        cand: &[u32],
        current: &mut Vec<u32>,
        best: &mut Vec<u32>,
        nodes: &mut u64,
        budget: u64,
        exact: &mut bool,
    ) {
        *nodes += 1;
        if *nodes > budget {
            *exact = false;
            return;
        }
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() + cand.len() <= best.len() {
            return;
        }
        for (i, &h) in cand.iter().enumerate() {
            if current.len() + (cand.len() - i) <= best.len() {
                return;
            }
            let next: Vec<u32> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&k| hp.cross(h, k))
                .collect();
            current.push(h);
            extend(hp, &next, current, best, nodes, budget, exact);
            current.pop();
        }
    }
    let mut current = Vec::new();
    extend(
        hp,
        &order,
        &mut current,
        &mut best,
        &mut nodes,
        node_budget,
        &mut exact,
    );
    DimensionEstimate {
        dimension: best.len().max(1) as u32,
        exact,
        witness: best,
    }
}

#[cfg(test)]
mod tests {
    use super::super::resolve_complex;
    use super::*;

    #[test]
    fn single_square_has_two_hyperplanes() {
        let cx = CubeComplex::new(
            "sq",
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![[0, 1, 2, 3]],
            None,
        )
        .unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        assert_eq!(hp.count, 2);
        assert!(hp.cross(0, 1));
    }

    #[test]
    fn grid_3x3_has_six_hyperplanes() {
        // 3x3 patch of Z^2: 3 vertical + 3 horizontal... the 3x3 vertex grid
        // has 2 columns + 2 rows of squares, giving 2+2... side=3 means 3
        // vertices per axis: hyperplanes = 2 per axis? No: one hyperplane per
        // gap between consecutive layers: side-1 per axis on a side^2 patch.
        // For the spec's "3x3 grid patch" (3x3 squares = 4x4 vertices) we get
        // 3 vertical + 3 horizontal.
        let cx = resolve_complex("grid:2:4").unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        assert_eq!(hp.count, 6);
    }

    #[test]
    fn tree_has_one_hyperplane_per_edge() {
        let cx = resolve_complex("tree:2:3").unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        assert_eq!(hp.count, cx.edges.len());
        let d = dimension_estimate(&hp, 1_000_000);
        assert_eq!(d.dimension, 1);
        assert!(d.exact);
    }

    #[test]
    fn cube_dimension_and_separation() {
        let cx = resolve_complex("cube:3").unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        assert_eq!(hp.count, 3);
        let d = dimension_estimate(&hp, 1_000_000);
        assert_eq!(d.dimension, 3);
        // opposite corners of the 3-cube: distance 3, three separating
        let chk = sageev_distance_check(&cx, &hp, 0, 7);
        assert_eq!(chk.bfs_distance, 3);
        assert_eq!(chk.separating, 3);
        assert!(chk.equal);
    }

    #[test]
    fn grid_dimension_is_two() {
        let cx = resolve_complex("grid:2:5").unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        let d = dimension_estimate(&hp, 1_000_000);
        assert_eq!(d.dimension, 2);
    }
}
