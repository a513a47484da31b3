//! Empirical rapid-decay profile: best observed `‖f‖_*`-lower-bound to
//! `‖f‖₂` ratios per support radius, with a fitted exponent.

use super::norms::{l1, l2};
use super::opnorm::{opnorm_schedule, OpnormEstimate};
use super::SparseGroupFunction;
use crate::error::Result;
use crate::fit::{loglog_shifted, LineFit};
use crate::group::metric::WordMetric;
use crate::group::Elem;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct RdSampler {
    /// Seeded random 0/1 functions per radius, in addition to `χ_B` and `χ_S`.
    pub random_per_radius: u32,
    pub seed: u64,
    /// Element cap for the truncation schedule.
    pub max_elements: usize,
    pub tol: f64,
    pub max_iter: u32,
}

impl Default for RdSampler {
    fn default() -> Self {
        RdSampler {
            random_per_radius: 20,
            seed: 0,
            max_elements: 200_000,
            tol: super::opnorm::DEFAULT_TOL,
            max_iter: super::opnorm::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RdRow {
    pub r: u32,
    pub sample_id: u32,
    pub support: usize,
    pub l1: f64,
    pub l2: f64,
    /// Best lower bound for `‖f‖_*/‖f‖₂` observed for this sample.
    pub ratio_lower: f64,
    pub truncation: u32,
    pub iterations: u32,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RdProfile {
    pub rows: Vec<RdRow>,
    /// `(r, max ratio over the samples at r)`.
    pub max_ratio: Vec<(u32, f64)>,
    /// Slope of `ln max_ratio` against `ln(1+r)`: the empirical RD exponent.
    pub fit: Option<LineFit>,
}

/// Deterministic sample of nonnegative functions per radius (`χ_{B(r)}`,
/// `χ_{S(r)}`, seeded 0/1 functions), each scored by the largest truncated
/// power-iteration estimate of `‖f‖_*` relative to `‖f‖₂`.
pub fn rd_profile(metric: &mut WordMetric, r_max: u32, sampler: RdSampler) -> Result<RdProfile> {
    let mut rows = Vec::new();
    let mut max_ratio = Vec::new();
    for r in 1..=r_max {
        metric.ensure_radius(r)?;
        let mut samples: Vec<SparseGroupFunction<f64>> = Vec::new();
        samples.push(SparseGroupFunction::ball_indicator(metric, r)?);
        samples.push(SparseGroupFunction::sphere_indicator(metric, r)?);
        let ball: Vec<Elem> = metric.ball_iter(r).cloned().collect();
        for i in 0..sampler.random_per_radius {
            let mut rng =
                ChaCha8Rng::seed_from_u64(sampler.seed ^ (u64::from(r) << 32) ^ u64::from(i));
            let mut f = SparseGroupFunction::zero(metric.model());
            for e in &ball {
                if rng.gen_bool(0.5) {
                    f.set(e.clone(), 1.0);
                }
            }
            if f.is_zero() {
                f.set(metric.model().identity(), 1.0);
            }
            samples.push(f);
        }
        let mut best = 0.0f64;
        for (sample_id, f) in samples.iter().enumerate() {
            let ests = opnorm_schedule(
                metric,
                f,
                r,
                sampler.max_elements,
                sampler.tol,
                sampler.max_iter,
            )?;
            let last: &OpnormEstimate = ests.last().expect("schedule is nonempty");
            let ratio = last.sigma / l2(f);
            best = best.max(ratio);
            rows.push(RdRow {
                r,
                sample_id: sample_id as u32,
                support: f.support_size(),
                l1: l1(f),
                l2: l2(f),
                ratio_lower: ratio,
                truncation: last.truncation,
                iterations: last.iterations,
                converged: last.converged,
            });
        }
        max_ratio.push((r, best));
    }
    let fit = loglog_shifted(&max_ratio);
    Ok(RdProfile {
        rows,
        max_ratio,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::registry::{finite_from_table, resolve};

    fn small_sampler() -> RdSampler {
        RdSampler {
            random_per_radius: 3,
            seed: 7,
            max_elements: 20_000,
            tol: 1e-10,
            max_iter: 2000,
        }
    }

    #[test]
    fn z_exponent_near_half() {
        let mut metric = WordMetric::new(resolve("zd:1").unwrap());
        let p = rd_profile(&mut metric, 6, small_sampler()).unwrap();
        let slope = p.fit.unwrap().slope;
        assert!((slope - 0.5).abs() < 0.2, "slope {slope}");
        // the extremizer is chi_B: ratio approaches sqrt(|B(r)|)
        for &(r, ratio) in &p.max_ratio {
            let bound = ((2 * r + 1) as f64).sqrt();
            assert!(ratio <= bound + 1e-9, "r={r} ratio={ratio} bound={bound}");
        }
    }

    #[test]
    fn trivial_group_ratios_are_one() {
        let m = finite_from_table("finite:trivial", "1\n1\n1\n").unwrap();
        let mut metric = WordMetric::new(m);
        let p = rd_profile(&mut metric, 3, small_sampler()).unwrap();
        for &(_, ratio) in &p.max_ratio {
            assert!((ratio - 1.0).abs() < 1e-9);
        }
    }
}
