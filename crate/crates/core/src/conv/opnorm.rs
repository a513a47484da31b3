//! Operator-norm lower bounds for convolution operators.
//!
//! `‖f‖_*` is a supremum over all of `l²(G)`; at desk scale only lower
//! bounds are certifiable, either by an explicit witness quotient or by
//! power iteration on a ball truncation. Both are monotone underestimates.

use super::norms::{l2, l2_sq};
use super::{convolve, SparseGroupFunction};
use crate::error::{Error, Result};
use crate::group::metric::WordMetric;
use crate::group::Elem;
use crate::scalar::Coefficient;
use serde::Serialize;
use std::collections::HashMap;

/// `‖f*g‖₂ / ‖g‖₂`; a certified lower bound for `‖f‖_*`.
pub fn opnorm_witness<S: Coefficient>(
    metric: &WordMetric,
    f: &SparseGroupFunction<S>,
    g: &SparseGroupFunction<S>,
) -> Result<f64> {
    if g.is_zero() {
        return Err(Error::ZeroWitness);
    }
    let fg = convolve(metric.model(), f, g)?;
    Ok(l2(&fg) / l2(g))
}

/// Exact square of the witness quotient, `‖f*g‖₂² / ‖g‖₂²`.
pub fn opnorm_witness_sq<S>(
    metric: &WordMetric,
    f: &SparseGroupFunction<S>,
    g: &SparseGroupFunction<S>,
) -> Result<S::Real>
where
    S: Coefficient,
    S::Real: std::ops::Div<Output = S::Real>,
{
    if g.is_zero() {
        return Err(Error::ZeroWitness);
    }
    let fg = convolve(metric.model(), f, g)?;
    Ok(l2_sq(&fg) / l2_sq(g))
}

/// Power-iteration defaults: relative Rayleigh tolerance and iteration cap.
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: u32 = 5000;

#[derive(Debug, Clone, Serialize)]
pub struct OpnormEstimate {
    /// Largest singular value of `g ↦ f*g` restricted to functions
    /// supported in `B(e, truncation)`.
    pub sigma: f64,
    pub truncation: u32,
    pub iterations: u32,
    pub converged: bool,
    pub domain_size: usize,
}

/// Largest singular value of the convolution operator `g ↦ f*g` restricted
/// to `l²(B(e, R))`, by power iteration on the self-adjoint composition
/// `T†T`. Nondecreasing in `R` and in the iteration count; always a lower
/// bound for `‖f‖_*`.
pub fn opnorm_estimate(
    metric: &mut WordMetric,
    f: &SparseGroupFunction<f64>,
    truncation: u32,
    tol: f64,
    max_iter: u32,
) -> Result<OpnormEstimate> {
    let r_f = f.support_radius(metric)?;
    assert!(
        truncation >= r_f,
        "truncation {truncation} below support radius {r_f}"
    );
    if f.is_zero() {
        return Ok(OpnormEstimate {
            sigma: 0.0,
            truncation,
            iterations: 0,
            converged: true,
            domain_size: 0,
        });
    }
    metric.ensure_radius(truncation + r_f)?;
    let model = metric.model().clone();

    let domain: Vec<&Elem> = metric.ball_iter(truncation).collect();
    let image_index: HashMap<&Elem, u32> = metric
        .ball_iter(truncation + r_f)
        .enumerate()
        .map(|(i, e)| (e, i as u32))
        .collect();
    let image_len = image_index.len();

    // one scatter table per support element of f
    let mut tables: Vec<(f64, Vec<u32>)> = Vec::with_capacity(f.support_size());
    for (mu, c) in f.iter() {
        let tab: Vec<u32> = domain
            .iter()
            .map(|nu| {
                let gamma = model.multiply(mu, nu);
                *image_index
                    .get(&gamma)
                    .expect("product stays in the enlarged ball")
            })
            .collect();
        tables.push((c.to_f64_lossy(), tab));
    }

    // start vector: chi_{B(e, min(R, 2))}, normalized
    let start_r = truncation.min(2);
    let start_n = metric.ball_size(start_r) as usize;
    let mut v = vec![0.0f64; domain.len()];
    let inv = 1.0 / (start_n as f64).sqrt();
    for x in v.iter_mut().take(start_n) {
        *x = inv;
    }

    let mut w = vec![0.0f64; image_len];
    let mut rho_prev = 0.0f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        w.iter_mut().for_each(|x| *x = 0.0);
        for (c, tab) in &tables {
            for (j, &i) in tab.iter().enumerate() {
                w[i as usize] += c * v[j];
            }
        }
        // rho = ‖T v‖² = ⟨v, T†T v⟩ for unit v
        let rho: f64 = w.iter().map(|x| x * x).sum();
        if rho == 0.0 {
            return Ok(OpnormEstimate {
                sigma: 0.0,
                truncation,
                iterations,
                converged: true,
                domain_size: domain.len(),
            });
        }
        // v ← T†w, normalized
        let mut u = vec![0.0f64; domain.len()];
        for (c, tab) in &tables {
            for (j, &i) in tab.iter().enumerate() {
                u[j] += c * w[i as usize];
            }
        }
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (x, y) in v.iter_mut().zip(&u) {
            *x = y / nu;
        }
        if (rho - rho_prev).abs() <= tol * rho {
            rho_prev = rho;
            converged = true;
            break;
        }
        rho_prev = rho;
    }
    Ok(OpnormEstimate {
        sigma: rho_prev.sqrt(),
        truncation,
        iterations,
        converged,
        domain_size: domain.len(),
    })
}

/// Truncation schedule `R ∈ {r, 2r, 4r, 8r}` capped by the element budget;
/// the trace makes convergence auditable.
pub fn opnorm_schedule(
    metric: &mut WordMetric,
    f: &SparseGroupFunction<f64>,
    base_radius: u32,
    max_elements: usize,
    tol: f64,
    max_iter: u32,
) -> Result<Vec<OpnormEstimate>> {
    let r = base_radius.max(1);
    let mut out = Vec::new();
    for factor in [1u32, 2, 4, 8] {
        let truncation = r * factor;
        let r_f = f.support_radius(metric)?;
        match metric.ensure_radius(truncation + r_f) {
            Ok(()) => {}
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
        if metric.ball_size(truncation + r_f) as usize > max_elements {
            break;
        }
        out.push(opnorm_estimate(metric, f, truncation, tol, max_iter)?);
    }
    if out.is_empty() {
        // always provide at least the minimal truncation
        let r_f = f.support_radius(metric)?;
        out.push(opnorm_estimate(metric, f, r.max(r_f), tol, max_iter)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::registry::resolve;
    use crate::RealFn;

    #[test]
    fn delta_is_unitary() {
        let m = resolve("free:2").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let a = m.parse_word("a").unwrap();
        let f = RealFn::delta(&m, a);
        let est = opnorm_estimate(&mut metric, &f, 3, DEFAULT_TOL, 100).unwrap();
        assert!((est.sigma - 1.0).abs() < 1e-9);
        let g = RealFn::ball_indicator(&mut metric, 2).unwrap();
        let w = opnorm_witness(&metric, &f, &g).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_interval_estimate_approaches_l1() {
        // f = chi_{B(2)} in Z has ‖f‖_* = ‖f‖₁ = 5 (amenable case)
        let m = resolve("zd:1").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let f = RealFn::ball_indicator(&mut metric, 2).unwrap();
        let ests = opnorm_schedule(&mut metric, &f, 2, 100_000, DEFAULT_TOL, 2000).unwrap();
        // monotone nondecreasing in R
        for pair in ests.windows(2) {
            assert!(pair[1].sigma >= pair[0].sigma - 1e-9);
        }
        let last = ests.last().unwrap();
        assert!(last.sigma > 4.5 && last.sigma <= 5.0 + 1e-9, "{}", last.sigma);
    }

    #[test]
    fn rayleigh_is_monotone_in_iterations() {
        let m = resolve("zd:2").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let f = RealFn::ball_indicator(&mut metric, 1).unwrap();
        let mut prev = 0.0;
        for iters in [1, 2, 4, 8, 16, 32] {
            let est = opnorm_estimate(&mut metric, &f, 8, 0.0, iters).unwrap();
            assert!(est.sigma >= prev - 1e-12);
            prev = est.sigma;
        }
    }
}
