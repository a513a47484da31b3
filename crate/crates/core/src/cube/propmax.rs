//! Checking the three retract-map conditions on a complex: nonempty
//! medians, polynomially bounded interval growth, and interval diameter
//! equal to the endpoint distance.

use super::hyperplane::{dimension_estimate, Hyperplanes};
use super::median::{has_median, interval, interval_growth, DistanceMatrix};
use super::CubeComplex;
use crate::error::Result;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct PropMaxSample {
    /// Enumerate all triples when the vertex count is at most this.
    pub exhaustive_threshold: usize,
    /// Sampled triples above the threshold.
    pub sample_triples: u64,
    /// Pairs for the growth and diameter conditions.
    pub sample_pairs: u64,
    pub seed: u64,
    /// Constant `c` of the growth bound `c (r+1)^n`.
    pub growth_c: f64,
}

impl Default for PropMaxSample {
    fn default() -> Self {
        PropMaxSample {
            exhaustive_threshold: 500,
            sample_triples: 10_000,
            sample_pairs: 1_000,
            seed: 0,
            growth_c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropMaxReport {
    pub dimension: u32,
    pub triples_checked: u64,
    pub triples_exhaustive: bool,
    /// Witnesses `(x, y, z)` with empty median set.
    pub median_failures: Vec<(u32, u32, u32)>,
    pub pairs_checked: u64,
    /// Witnesses `(x, y, r, count)` violating the growth bound.
    pub growth_failures: Vec<(u32, u32, u32, u64)>,
    /// Witnesses `(x, y, diam, d)` with interval diameter != distance.
    pub diameter_failures: Vec<(u32, u32, u32, u32)>,
    /// Interval-growth exponent fitted on a diametral pair.
    pub fitted_exponent: Option<f64>,
    pub all_pass: bool,
}

/// Runs conditions (i)-(iii) on a complex: (i) median nonempty for all
/// (exhaustive or sampled) triples, (ii) `|I(x,y) ∩ B(x,r)| <= c (r+1)^n`,
/// (iii) `diam I(x,y) = d(x,y)`.
pub fn prop_max_check(
    cx: &CubeComplex,
    hp: &Hyperplanes,
    dm: &DistanceMatrix,
    sample: PropMaxSample,
) -> Result<PropMaxReport> {
    let n = cx.n_vertices as u32;
    let dim = dimension_estimate(hp, 10_000_000);

    // (i) medians
    let exhaustive = cx.n_vertices <= sample.exhaustive_threshold;
    let mut median_failures: Vec<(u32, u32, u32)> = Vec::new();
    let mut triples_checked = 0u64;
    if exhaustive {
        let results: Vec<(u64, Vec<(u32, u32, u32)>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut fails = Vec::new();
                let mut count = 0u64;
                for y in x..n {
                    for z in y..n {
                        count += 1;
                        if !has_median(dm, x, y, z) {
                            fails.push((x, y, z));
                        }
                    }
                }
                (count, fails)
            })
            .collect();
        for (c, mut f) in results {
            triples_checked += c;
            median_failures.append(&mut f);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
        for _ in 0..sample.sample_triples {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            triples_checked += 1;
            if !has_median(dm, x, y, z) {
                median_failures.push((x, y, z));
            }
        }
    }

    // (ii) + (iii) on sampled pairs (exhaustive when small)
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    if u64::from(n) * u64::from(n) / 2 <= sample.sample_pairs {
        for x in 0..n {
            for y in (x + 1)..n {
                pairs.push((x, y));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample.seed ^ 0x9e37_79b9);
        while (pairs.len() as u64) < sample.sample_pairs {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x != y {
                pairs.push((x, y));
            }
        }
    }
    let mut growth_failures = Vec::new();
    let mut diameter_failures = Vec::new();
    for &(x, y) in &pairs {
        let d = dm.d(x, y);
        let g = interval_growth(dm, x, y, d, sample.growth_c, dim.dimension);
        if let Some(r) = g.violation {
            growth_failures.push((x, y, r, g.counts[r as usize].1));
        }
        // diameter of the interval equals the endpoint distance
        let iv = interval(dm, x, y);
        let mut diam = 0u32;
        for (i, &s) in iv.iter().enumerate() {
            for &t in &iv[i + 1..] {
                diam = diam.max(dm.d(s, t));
            }
        }
        if diam != d {
            diameter_failures.push((x, y, diam, d));
        }
    }

    // fitted exponent on a diametral pair
    let mut far = (0u32, 0u32, 0u32);
    for x in 0..n {
        for y in (x + 1)..n {
            let d = dm.d(x, y);
            if d > far.2 {
                far = (x, y, d);
            }
        }
    }
    // fit only up to half the diameter: past that the count saturates
    // toward |I(x,y)| on a bounded patch and the slope flattens
    let fitted_exponent = if far.2 >= 4 {
        interval_growth(dm, far.0, far.1, far.2 / 2, sample.growth_c, dim.dimension)
            .fit
            .map(|f| f.slope)
    } else {
        None
    };

    let all_pass =
        median_failures.is_empty() && growth_failures.is_empty() && diameter_failures.is_empty();
    Ok(PropMaxReport {
        dimension: dim.dimension,
        triples_checked,
        triples_exhaustive: exhaustive,
        median_failures,
        pairs_checked: pairs.len() as u64,
        growth_failures,
        diameter_failures,
        fitted_exponent,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::super::hyperplane::compute_hyperplanes;
    use super::super::resolve_complex;
    use super::*;

    fn run(key: &str) -> PropMaxReport {
        let cx = resolve_complex(key).unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        prop_max_check(&cx, &hp, &dm, PropMaxSample::default()).unwrap()
    }

    #[test]
    fn small_grid_passes_with_exponent_two() {
        let rep = run("grid:2:10");
        assert!(rep.all_pass);
        assert!(rep.triples_exhaustive);
        assert_eq!(rep.dimension, 2);
        let e = rep.fitted_exponent.unwrap();
        assert!((e - 2.0).abs() < 0.5, "exponent {e}");
    }

    #[test]
    fn binary_tree_passes_with_exponent_one() {
        let rep = run("tree:2:5");
        assert!(rep.all_pass);
        let e = rep.fitted_exponent.unwrap();
        assert!((e - 1.0).abs() < 0.2, "exponent {e}");
    }

    #[test]
    fn tree_product_passes_with_exponent_at_most_two() {
        let rep = run("treeprod:2:3:2:3");
        assert!(rep.all_pass);
        assert_eq!(rep.dimension, 2);
        let e = rep.fitted_exponent.unwrap();
        assert!(e <= 2.0 + 0.3, "exponent {e}");
    }
}
