//! Blowing up bounded vertex stabilizers into a free-action space.
//!
//! `Y = ⊔_v G_v` carries the metric: distinct points over one vertex are at
//! distance 1, points over distinct vertices `a, b` at distance `d(a, b)`.
//! The retract sets lift through the fiber projection, with the growth
//! polynomial scaled by the stabilizer bound.

use super::median::{has_median, interval, DistanceMatrix};
use super::CubeComplex;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Disjoint union of stabilizer copies over the vertices of a base complex.
#[derive(Debug)]
pub struct BlowupSpace {
    /// Stabilizer size per base vertex, each in `1..=c`.
    pub sizes: Vec<u32>,
    /// Uniform stabilizer bound `c`.
    pub c: u32,
    /// Prefix sums for point indexing.
    offsets: Vec<u64>,
}

/// A point of the blow-up: base vertex plus fiber index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupPoint {
    pub vertex: u32,
    pub copy: u32,
}

impl BlowupSpace {
    pub fn new(cx: &CubeComplex, sizes: Vec<u32>, c: u32) -> Result<BlowupSpace> {
        if sizes.len() != cx.n_vertices {
            return Err(Error::Config(format!(
                "need one stabilizer size per vertex ({} != {})",
                sizes.len(),
                cx.n_vertices
            )));
        }
        for &s in &sizes {
            if s == 0 || s > c {
                return Err(Error::StabilizerBound { bound: c, found: s });
            }
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0u64;
        for &s in &sizes {
            offsets.push(acc);
            acc += u64::from(s);
        }
        offsets.push(acc);
        Ok(BlowupSpace { sizes, c, offsets })
    }

    pub fn total_points(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    /// Projection to the base is `vertex`; this is distance-preserving up
    /// to an additive 1.
    pub fn distance(&self, dm: &DistanceMatrix, p: BlowupPoint, q: BlowupPoint) -> u32 {
        if p.vertex == q.vertex {
            u32::from(p.copy != q.copy)
        } else {
            dm.d(p.vertex, q.vertex)
        }
    }

    /// `|C_Y(x,y) ∩ B_Y(x,r)|` for `C_Y = π^{-1}(I(πx, πy))`.
    pub fn lifted_interval_count(
        &self,
        dm: &DistanceMatrix,
        x: BlowupPoint,
        y: BlowupPoint,
        r: u32,
    ) -> u64 {
        let iv = interval(dm, x.vertex, y.vertex);
        if r == 0 {
            // only x itself (its vertex is always in the interval)
            return 1;
        }
        iv.iter()
            .filter(|&&v| dm.d(x.vertex, v) <= r)
            .map(|&v| u64::from(self.sizes[v as usize]))
            .sum()
    }

    /// Base interval count, for the exact-scaling comparison.
    pub fn base_interval_count(&self, dm: &DistanceMatrix, x: u32, y: u32, r: u32) -> u64 {
        interval(dm, x, y)
            .iter()
            .filter(|&&v| dm.d(x, v) <= r)
            .count() as u64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub total_points: u64,
    pub triples_checked: u64,
    pub median_failures: u64,
    pub pairs_checked: u64,
    /// `(x, y, r)` where the lifted count exceeded `c * (r+1)^n`.
    pub growth_failures: Vec<(u32, u32, u32)>,
    /// Lifted count always within factor `c` of the base count.
    pub scaling_ok: bool,
    /// All stabilizer sizes equal the bound `c`.
    pub uniform: bool,
    /// When all stabilizers equal `c`: lifted = c * base, exactly.
    pub exact_scaling: bool,
    /// Lifted diameters within 1 of base diameters.
    pub diameter_ok: bool,
    pub all_pass: bool,
}

/// Verifies the lifted conditions (i)-(iii) on the blow-up: medians lift
/// through the fiber projection, interval growth is bounded by `c (r+1)^n`,
/// and diameters change by at most 1.
pub fn blowup_check(
    cx: &CubeComplex,
    dm: &DistanceMatrix,
    bs: &BlowupSpace,
    dimension: u32,
    seed: u64,
    samples: u64,
) -> Result<BlowupReport> {
    let n = cx.n_vertices as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exhaustive = u64::from(n).pow(3) <= samples;
    let mut triples: Vec<(u32, u32, u32)> = Vec::new();
    if exhaustive {
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    triples.push((x, y, z));
                }
            }
        }
    } else {
        for _ in 0..samples {
            triples.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    // (i): a lifted median set is the preimage of the base one, so
    // nonemptiness is inherited; verify on the base.
    let mut median_failures = 0u64;
    for &(x, y, z) in &triples {
        if !has_median(dm, x, y, z) {
            median_failures += 1;
        }
    }

    let uniform = bs.sizes.iter().all(|&s| s == bs.c);
    let mut growth_failures = Vec::new();
    let mut scaling_ok = true;
    let mut exact_scaling = uniform;
    let mut diameter_ok = true;
    let mut pairs_checked = 0u64;
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    if u64::from(n) * u64::from(n) <= samples {
        for x in 0..n {
            for y in 0..n {
                pairs.push((x, y));
            }
        }
    } else {
        for _ in 0..samples {
            pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    for &(x, y) in &pairs {
        pairs_checked += 1;
        let px = BlowupPoint { vertex: x, copy: 0 };
        let py = BlowupPoint { vertex: y, copy: 0 };
        let d = dm.d(x, y);
        for r in 0..=d.max(1) {
            let lifted = bs.lifted_interval_count(dm, px, py, r);
            let base = bs.base_interval_count(dm, x, y, r);
            let bound = f64::from(bs.c) * f64::from(r + 1).powi(dimension as i32);
            if lifted as f64 > bound {
                growth_failures.push((x, y, r));
            }
            if lifted > u64::from(bs.c) * base {
                scaling_ok = false;
            }
            if uniform && r >= 1 && lifted != u64::from(bs.c) * base {
                exact_scaling = false;
            }
        }
        // (iii): lifted diameter within 1 of the base interval diameter
        let iv = interval(dm, x, y);
        let mut base_diam = 0u32;
        for (i, &s) in iv.iter().enumerate() {
            for &t in &iv[i + 1..] {
                base_diam = base_diam.max(dm.d(s, t));
            }
        }
        let fiber_pair = iv.iter().any(|&v| bs.sizes[v as usize] >= 2);
        let lifted_diam = if fiber_pair { base_diam.max(1) } else { base_diam };
        if lifted_diam > base_diam + 1 {
            diameter_ok = false;
        }
    }

    let all_pass = median_failures == 0
        && growth_failures.is_empty()
        && scaling_ok
        && diameter_ok
        && (!uniform || exact_scaling);
    Ok(BlowupReport {
        total_points: bs.total_points(),
        triples_checked: triples.len() as u64,
        median_failures,
        pairs_checked,
        growth_failures,
        scaling_ok,
        uniform,
        exact_scaling,
        diameter_ok,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::super::resolve_complex;
    use super::*;

    fn four_cycle() -> CubeComplex {
        CubeComplex::new(
            "cycle4",
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![[0, 1, 2, 3]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn trivial_stabilizers_are_isometric() {
        let cx = four_cycle();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let bs = BlowupSpace::new(&cx, vec![1; 4], 1).unwrap();
        assert_eq!(bs.total_points(), 4);
        let rep = blowup_check(&cx, &dm, &bs, 2, 0, 1000).unwrap();
        assert!(rep.all_pass);
        for a in 0..4u32 {
            for b in 0..4u32 {
                let p = BlowupPoint { vertex: a, copy: 0 };
                let q = BlowupPoint { vertex: b, copy: 0 };
                assert_eq!(bs.distance(&dm, p, q), dm.d(a, b));
            }
        }
    }

    #[test]
    fn constant_stabilizer_doubles_counts() {
        let cx = four_cycle();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let bs = BlowupSpace::new(&cx, vec![2; 4], 2).unwrap();
        let rep = blowup_check(&cx, &dm, &bs, 2, 0, 1000).unwrap();
        assert!(rep.all_pass);
        assert!(rep.exact_scaling);
    }

    #[test]
    fn mixed_sizes_respect_factor_three() {
        let cx = four_cycle();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let bs = BlowupSpace::new(&cx, vec![1, 2, 3, 2], 3).unwrap();
        let rep = blowup_check(&cx, &dm, &bs, 2, 0, 1000).unwrap();
        assert!(rep.all_pass);
        assert!(rep.scaling_ok);
    }

    #[test]
    fn oversized_stabilizer_rejected() {
        let cx = resolve_complex("grid:2:3").unwrap();
        let err = BlowupSpace::new(&cx, vec![4; 9], 3);
        assert!(matches!(err, Err(Error::StabilizerBound { .. })));
    }

    #[test]
    fn same_fiber_distance_is_one() {
        let cx = four_cycle();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let bs = BlowupSpace::new(&cx, vec![3; 4], 3).unwrap();
        let p = BlowupPoint { vertex: 2, copy: 0 };
        let q = BlowupPoint { vertex: 2, copy: 2 };
        assert_eq!(bs.distance(&dm, p, q), 1);
        assert_eq!(bs.distance(&dm, p, p), 0);
    }
}
