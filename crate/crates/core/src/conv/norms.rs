//! `l^1`, `l^2` and weighted Sobolev norms.

use super::SparseGroupFunction;
use crate::error::Result;
use crate::group::metric::WordMetric;
use crate::scalar::{Coefficient, RealScalar};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// `‖f‖₂²`, exact in the coefficient ring.
pub fn l2_sq<S: Coefficient>(f: &SparseGroupFunction<S>) -> S::Real {
    f.iter()
        .map(|(_, v)| v.abs_sq())
        .fold(S::Real::zero(), |a, b| a + b)
}

pub fn l2<S: Coefficient>(f: &SparseGroupFunction<S>) -> f64 {
    l2_sq(f).to_f64().unwrap_or(f64::NAN).sqrt()
}

/// `‖f‖₁`, exact for real coefficient rings.
pub fn l1_exact<S>(f: &SparseGroupFunction<S>) -> S
where
    S: Coefficient + RealScalar,
{
    f.iter().map(|(_, v)| v.abs()).fold(S::zero(), |a, b| a + b)
}

pub fn l1<S: Coefficient>(f: &SparseGroupFunction<S>) -> f64 {
    f.iter()
        .map(|(_, v)| v.abs_sq().to_f64().unwrap_or(f64::NAN).sqrt())
        .sum()
}

fn pow_real<R: RealScalar>(base: &R, e: u32) -> R {
    let mut acc = R::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// `‖f‖_{ℓ,s}² = Σ |f(γ)|² (1+ℓ(γ))^{2s}` for integer `s`, exact.
pub fn sobolev_sq_int<S: Coefficient>(
    f: &SparseGroupFunction<S>,
    s: u32,
    metric: &mut WordMetric,
) -> Result<S::Real> {
    let mut acc = S::Real::zero();
    for (e, v) in f.iter() {
        let l = metric.word_length(e)?;
        let w = pow_real(&S::Real::from_u64(u64::from(l) + 1), 2 * s);
        acc = acc + v.abs_sq() * w;
    }
    Ok(acc)
}

/// Weighted `l^2` norm `sqrt(Σ |f(γ)|² (1+ℓ(γ))^{2s})` for arbitrary
/// nonnegative `s`. At `s = 0` this is the `l^2` norm.
pub fn sobolev<S: Coefficient>(
    f: &SparseGroupFunction<S>,
    s: f64,
    metric: &mut WordMetric,
) -> Result<f64> {
    let mut acc = 0.0;
    for (e, v) in f.iter() {
        let l = metric.word_length(e)?;
        acc += v.abs_sq().to_f64().unwrap_or(f64::NAN) * (f64::from(l) + 1.0).powf(2.0 * s);
    }
    Ok(acc.sqrt())
}

/// Where an operator-norm lower bound came from.
#[derive(Debug, Clone, Serialize)]
pub enum OpnormProvenance {
    /// Quotient `‖f*g‖₂ / ‖g‖₂` for an explicit witness `g`.
    Witness { witness_support: usize },
    /// Truncated power iteration on `B(e, truncation)`.
    PowerIteration {
        truncation: u32,
        iterations: u32,
        converged: bool,
    },
}

/// Norm summary for one function.
#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub l1: f64,
    pub l2: f64,
    /// Requested Sobolev norms as `(s, value)`.
    pub sobolev: Vec<(f64, f64)>,
    pub opnorm_lower: Option<f64>,
    pub opnorm_provenance: Option<OpnormProvenance>,
}

impl NormReport {
    pub fn gather<S: Coefficient>(
        f: &SparseGroupFunction<S>,
        s_values: &[f64],
        metric: &mut WordMetric,
    ) -> Result<NormReport> {
        let mut sob = Vec::new();
        for &s in s_values {
            sob.push((s, sobolev(f, s, metric)?));
        }
        Ok(NormReport {
            l1: l1(f),
            l2: l2(f),
            sobolev: sob,
            opnorm_lower: None,
            opnorm_provenance: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::registry::resolve;
    use crate::group::Elem;
    use crate::{RationalFn, RealFn};
    use num_bigint::BigInt;
    use num_rational::Ratio;

    #[test]
    fn sobolev_at_zero_is_l2() {
        let m = resolve("zd:2").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let f = RealFn::from_pairs(
            &m,
            [
                (m.parse_word("x").unwrap(), 1.5),
                (m.parse_word("x y").unwrap(), -2.0),
            ],
        );
        let s0 = sobolev(&f, 0.0, &mut metric).unwrap();
        assert!((s0 - l2(&f)).abs() < 1e-12);
    }

    #[test]
    fn sobolev_of_delta_is_shifted_power() {
        // delta at distance r has ‖δ‖_{ℓ,1} = 1 + r
        let m = resolve("zd:1").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let f = RealFn::delta(&m, Elem::Vector(vec![7]));
        let v = sobolev(&f, 1.0, &mut metric).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exact_norms_are_rational() {
        let m = resolve("free:2").unwrap();
        let mut metric = WordMetric::new(m.clone());
        let q = |n: i64, d: i64| Ratio::new(BigInt::from(n), BigInt::from(d));
        let f = RationalFn::from_pairs(
            &m,
            [
                (m.parse_word("a").unwrap(), q(1, 2)),
                (m.parse_word("b a").unwrap(), q(-1, 3)),
            ],
        );
        assert_eq!(l2_sq(&f), q(13, 36));
        assert_eq!(l1_exact(&f), q(5, 6));
        // (1+1)^2 * 1/4 + (1+2)^2 * 1/9 = 1 + 1 = 2
        assert_eq!(sobolev_sq_int(&f, 1, &mut metric).unwrap(), q(2, 1));
    }
}
