//! Intervals, medians and interval growth, over a cached distance matrix.
//!
//! Membership uses the distance-sum characterization
//! `t ∈ I(x,y) ⇔ d(x,t) + d(t,y) = d(x,y)`; geodesics are never
//! enumerated explicitly.

use super::CubeComplex;
use crate::error::{Error, Result};
use crate::fit::{loglog_shifted_upper_window, LineFit};
use serde::Serialize;

/// Upper bound on vertices for the dense distance matrix.
pub const MAX_MATRIX_VERTICES: usize = 8192;

/// Dense all-pairs distances (u16), the distance oracle for interval and
/// median computations.
pub struct DistanceMatrix {
    pub n: usize,
    d: Vec<u16>,
}

impl DistanceMatrix {
    pub fn build(cx: &CubeComplex) -> Result<DistanceMatrix> {
        let n = cx.n_vertices;
        if n > MAX_MATRIX_VERTICES {
            return Err(Error::BudgetExceeded {
                context: "distance matrix",
                cap: MAX_MATRIX_VERTICES,
            });
        }
        let mut d = vec![0u16; n * n];
        for v in 0..n {
            let row = cx.bfs_distances(v as u32);
            for (w, &dist) in row.iter().enumerate() {
                d[v * n + w] = u16::try_from(dist).expect("diameter fits u16");
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    #[inline]
    pub fn d(&self, a: u32, b: u32) -> u32 {
        u32::from(self.d[a as usize * self.n + b as usize])
    }
}

/// `I(x,y) = {t : d(x,t) + d(t,y) = d(x,y)}`.
pub fn interval(dm: &DistanceMatrix, x: u32, y: u32) -> Vec<u32> {
    let dxy = dm.d(x, y);
    (0..dm.n as u32)
        .filter(|&t| dm.d(x, t) + dm.d(t, y) == dxy)
        .collect()
}

/// The median set `I(x,y) ∩ I(y,z) ∩ I(z,x)`; nonempty exactly when the
/// complex behaves like a CAT(0) cube complex.
pub fn median_set(dm: &DistanceMatrix, x: u32, y: u32, z: u32) -> Vec<u32> {
    let (dxy, dyz, dzx) = (dm.d(x, y), dm.d(y, z), dm.d(z, x));
    (0..dm.n as u32)
        .filter(|&t| {
            dm.d(x, t) + dm.d(t, y) == dxy
                && dm.d(y, t) + dm.d(t, z) == dyz
                && dm.d(z, t) + dm.d(t, x) == dzx
        })
        .collect()
}

/// Fast nonemptiness check for the median set.
pub fn has_median(dm: &DistanceMatrix, x: u32, y: u32, z: u32) -> bool {
    let (dxy, dyz, dzx) = (dm.d(x, y), dm.d(y, z), dm.d(z, x));
    (0..dm.n as u32).any(|t| {
        dm.d(x, t) + dm.d(t, y) == dxy
            && dm.d(y, t) + dm.d(t, z) == dyz
            && dm.d(z, t) + dm.d(t, x) == dzx
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalGrowth {
    /// `(r, |I(x,y) ∩ B(x,r)|)` for `r = 0..=r_max`.
    pub counts: Vec<(u32, u64)>,
    /// Polynomial bound `count <= c (r+1)^n` verified for every `r`.
    pub bound_ok: bool,
    /// First violated radius, if any.
    pub violation: Option<u32>,
    /// Slope of `ln count` vs `ln(1+r)` over the upper half window.
    pub fit: Option<LineFit>,
}

/// Counts `|I(x,y) ∩ B(x,r)|` and checks it against `c (r+1)^n`.
pub fn interval_growth(
    dm: &DistanceMatrix,
    x: u32,
    y: u32,
    r_max: u32,
    c: f64,
    n: u32,
) -> IntervalGrowth {
    let iv = interval(dm, x, y);
    let mut counts = Vec::with_capacity(r_max as usize + 1);
    let mut bound_ok = true;
    let mut violation = None;
    for r in 0..=r_max {
        let count = iv.iter().filter(|&&t| dm.d(x, t) <= r).count() as u64;
        let bound = c * f64::from(r + 1).powi(n as i32);
        if count as f64 > bound && violation.is_none() {
            bound_ok = false;
            violation = Some(r);
        }
        counts.push((r, count));
    }
    let pts: Vec<(u32, f64)> = counts.iter().map(|&(r, c)| (r, c as f64)).collect();
    let fit = loglog_shifted_upper_window(&pts);
    IntervalGrowth {
        counts,
        bound_ok,
        violation,
        fit,
    }
}

#[cfg(test)]
mod tests {
    use super::super::resolve_complex;
    use super::*;

    fn grid_index(side: u32, x: u32, y: u32) -> u32 {
        x + side * y
    }

    #[test]
    fn grid_median_contains_componentwise_median() {
        // (0,0), (2,0), (1,3) in a 10x10 grid: median contains (1,0)
        let cx = resolve_complex("grid:2:10").unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let a = grid_index(10, 0, 0);
        let b = grid_index(10, 2, 0);
        let c = grid_index(10, 1, 3);
        let med = median_set(&dm, a, b, c);
        assert!(med.contains(&grid_index(10, 1, 0)));
    }

    #[test]
    fn degenerate_triple_returns_endpoint() {
        let cx = resolve_complex("grid:2:4").unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let med = median_set(&dm, 0, 0, 9);
        assert!(med.contains(&0));
        // x = y forces the median to be x itself
        assert_eq!(med, vec![0]);
    }

    #[test]
    fn tree_median_is_unique_steiner_point() {
        let cx = resolve_complex("tree:2:3").unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        // three leaves under different branches meet at a single point
        let leaves: Vec<u32> = (0..cx.n_vertices as u32)
            .filter(|&v| cx.adj[v as usize].len() == 1)
            .collect();
        let med = median_set(&dm, leaves[0], leaves[1], leaves[2]);
        assert_eq!(med.len(), 1);
    }

    #[test]
    fn tree_interval_is_geodesic() {
        let cx = resolve_complex("tree:3:4").unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let x = 5u32;
        let y = 100u32;
        let d = dm.d(x, y);
        for r in 0..=d {
            let g = interval_growth(&dm, x, y, r, 1.0, 1);
            assert!(g.bound_ok);
            assert_eq!(g.counts[r as usize].1, u64::from(r) + 1);
        }
    }

    #[test]
    fn interval_closed_under_median_with_endpoints() {
        let cx = resolve_complex("grid:2:5").unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let (x, y) = (0u32, 24u32);
        let iv = interval(&dm, x, y);
        for &s in iv.iter().step_by(3) {
            for &t in iv.iter().step_by(4) {
                for m in median_set(&dm, s, t, x) {
                    assert!(iv.contains(&m));
                }
                for m in median_set(&dm, s, t, y) {
                    assert!(iv.contains(&m));
                }
            }
        }
    }
}
