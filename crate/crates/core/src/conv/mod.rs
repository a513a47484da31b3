//! Sparse group-algebra functions and exact convolution.

pub mod mozes;
pub mod norms;
pub mod opnorm;
pub mod rdprofile;

use crate::error::{Error, Result};
use crate::group::metric::WordMetric;
use crate::group::{Elem, GroupModel};
use crate::scalar::{Coefficient, FourParts};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Finitely supported function on a group, the carrier of all norms and
/// convolutions. Stored entries are nonzero; iteration order is canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseGroupFunction<S: Coefficient> {
    model_key: String,
    entries: BTreeMap<Elem, S>,
}

impl<S: Coefficient> SparseGroupFunction<S> {
    pub fn zero(model: &GroupModel) -> Self {
        SparseGroupFunction {
            model_key: model.key().to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn delta(model: &GroupModel, at: Elem) -> Self {
        let mut f = Self::zero(model);
        f.set(at, S::one());
        f
    }

    /// Characteristic function of a finite set.
    pub fn indicator<I: IntoIterator<Item = Elem>>(model: &GroupModel, set: I) -> Self {
        let mut f = Self::zero(model);
        for e in set {
            f.set(e, S::one());
        }
        f
    }

    /// `χ_{B(e, r)}`
    pub fn ball_indicator(metric: &mut WordMetric, r: u32) -> Result<Self> {
        metric.ensure_radius(r)?;
        Ok(Self::indicator(
            &metric.model().clone(),
            metric.ball_iter(r).cloned().collect::<Vec<_>>(),
        ))
    }

    /// `χ_{S(r)}`
    pub fn sphere_indicator(metric: &mut WordMetric, r: u32) -> Result<Self> {
        metric.ensure_radius(r)?;
        Ok(Self::indicator(
            &metric.model().clone(),
            metric.sphere(r).to_vec(),
        ))
    }

    pub fn from_pairs<I: IntoIterator<Item = (Elem, S)>>(model: &GroupModel, pairs: I) -> Self {
        let mut f = Self::zero(model);
        for (e, v) in pairs {
            let cur = f.entries.remove(&e).unwrap_or_else(S::zero);
            f.set(e, cur + v);
        }
        f
    }

    pub fn model_key(&self) -> &str {
        &self.model_key
    }

    /// Sets a value, dropping explicit zeros.
    pub fn set(&mut self, at: Elem, value: S) {
        if value.is_zero() {
            self.entries.remove(&at);
        } else {
            self.entries.insert(at, value);
        }
    }

    pub fn get(&self, at: &Elem) -> S {
        self.entries.get(at).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Elem> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elem, &S)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Max word length over the support.
    pub fn support_radius(&self, metric: &mut WordMetric) -> Result<u32> {
        let mut r = 0;
        for e in self.entries.keys() {
            r = r.max(metric.word_length(e)?);
        }
        Ok(r)
    }

    /// `f̌(γ) = f(γ^{-1})`
    pub fn involute(&self, model: &GroupModel) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(e, v)| (model.invert(e), v.clone()))
            .collect();
        SparseGroupFunction {
            model_key: self.model_key.clone(),
            entries,
        }
    }

    pub fn map_values<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> SparseGroupFunction<T> {
        let mut out = SparseGroupFunction {
            model_key: self.model_key.clone(),
            entries: BTreeMap::new(),
        };
        for (e, v) in &self.entries {
            out.set(e.clone(), f(v));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_model(other)?;
        let mut out = self.clone();
        for (e, v) in &other.entries {
            let cur = out.get(e);
            out.set(e.clone(), cur + v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_model(other)?;
        let mut out = self.clone();
        for (e, v) in &other.entries {
            let cur = out.get(e);
            out.set(e.clone(), cur - v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = SparseGroupFunction {
            model_key: self.model_key.clone(),
            entries: BTreeMap::new(),
        };
        for (e, v) in &self.entries {
            out.set(e.clone(), v.clone() * c.clone());
        }
        out
    }

    fn check_model(&self, other: &Self) -> Result<()> {
        if self.model_key != other.model_key {
            return Err(Error::ModelMismatch(
                self.model_key.clone(),
                other.model_key.clone(),
            ));
        }
        Ok(())
    }
}

/// Exact sparse convolution `f*g(γ) = Σ_μ f(μ) g(μ^{-1}γ)`. The support of
/// the result is contained in `supp(f)·supp(g)`.
pub fn convolve<S: Coefficient>(
    model: &GroupModel,
    f: &SparseGroupFunction<S>,
    g: &SparseGroupFunction<S>,
) -> Result<SparseGroupFunction<S>> {
    f.check_model(g)?;
    let mut out = SparseGroupFunction::zero(model);
    for (mu, a) in &f.entries {
        for (nu, b) in &g.entries {
            let gamma = model.multiply(mu, nu);
            let cur = out.get(&gamma);
            out.set(gamma, cur + a.clone() * b.clone());
        }
    }
    Ok(out)
}

/// `f*g*h(e)`, evaluated as `⟨f*g, ȟ⟩` with `ȟ(γ) = h(γ^{-1})`.
pub fn triple_eval<S: Coefficient>(
    model: &GroupModel,
    f: &SparseGroupFunction<S>,
    g: &SparseGroupFunction<S>,
    h: &SparseGroupFunction<S>,
) -> Result<S> {
    let fg = convolve(model, f, g)?;
    fg.check_model(h)?;
    let mut acc = S::zero();
    for (gamma, v) in &fg.entries {
        let hv = h.get(&model.invert(gamma));
        acc = acc + v.clone() * hv;
    }
    Ok(acc)
}

/// Result of splitting `f = f1 - f2 + i(f3 - f4)` into nonnegative parts
/// with disjoint supports.
#[derive(Debug)]
pub struct Decomposition<S: Coefficient + FourParts>
where
    S::Real: Coefficient,
{
    pub parts: [SparseGroupFunction<S::Real>; 4],
    /// `f1 - f2 + i(f3 - f4) = f`, exactly.
    pub reassembles: bool,
    /// `‖f‖₂² = Σ ‖f_i‖₂²`, exactly.
    pub norm_identity: bool,
    /// supports of `(f1, f2)` and of `(f3, f4)` are disjoint.
    pub disjoint_supports: bool,
}

impl<S: Coefficient + FourParts> Decomposition<S>
where
    S::Real: Coefficient,
{
    pub fn ok(&self) -> bool {
        self.reassembles && self.norm_identity && self.disjoint_supports
    }
}

/// Computes the four nonnegative parts of `f` and checks the square-norm
/// identity and exact reassembly.
pub fn decomposition_check<S>(
    model: &GroupModel,
    f: &SparseGroupFunction<S>,
) -> Decomposition<S>
where
    S: Coefficient + FourParts,
    S::Real: Coefficient<Real = S::Real>,
{
    let mut parts: [SparseGroupFunction<S::Real>; 4] = [
        SparseGroupFunction::zero(model),
        SparseGroupFunction::zero(model),
        SparseGroupFunction::zero(model),
        SparseGroupFunction::zero(model),
    ];
    for (e, v) in &f.entries {
        let q = v.four_parts();
        for (i, piece) in q.into_iter().enumerate() {
            parts[i].set(e.clone(), piece);
        }
    }
    let mut reassembles = true;
    for (e, v) in &f.entries {
        let back = S::assemble([
            parts[0].get(e),
            parts[1].get(e),
            parts[2].get(e),
            parts[3].get(e),
        ]);
        if back != *v {
            reassembles = false;
        }
    }
    for part in &parts {
        for e in part.support() {
            if f.get(e).is_zero() {
                reassembles = false;
            }
        }
    }
    let total: S::Real = parts
        .iter()
        .map(norms::l2_sq)
        .fold(S::Real::zero(), |a, b| a + b);
    let norm_identity = total == norms::l2_sq(f);
    let disjoint_supports = parts[0].support().all(|e| parts[1].get(e).is_zero())
        && parts[2].support().all(|e| parts[3].get(e).is_zero());
    Decomposition {
        parts,
        reassembles,
        norm_identity,
        disjoint_supports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::registry::resolve;
    use crate::{Rational, RationalFn};
    use num_bigint::BigInt;
    use num_rational::Ratio;

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn point_masses_convolve_to_product() {
        let m = resolve("free:2").unwrap();
        let a = m.parse_word("a").unwrap();
        let b = m.parse_word("b").unwrap();
        let ab = m.parse_word("a b").unwrap();
        let f = RationalFn::delta(&m, a);
        let g = RationalFn::delta(&m, b);
        let fg = convolve(&m, &f, &g).unwrap();
        assert_eq!(fg.get(&ab), q(1, 1));
        assert_eq!(fg.support_size(), 1);
    }

    #[test]
    fn interval_convolution_in_z() {
        // chi_{[0,1]} * chi_{[0,1]} has values (1,2,1) on (0,1,2)
        let m = resolve("zd:1").unwrap();
        let pts = |ks: &[i64]| {
            RationalFn::indicator(&m, ks.iter().map(|&k| Elem::Vector(vec![k])))
        };
        let f = pts(&[0, 1]);
        let fg = convolve(&m, &f, &f).unwrap();
        assert_eq!(fg.get(&Elem::Vector(vec![0])), q(1, 1));
        assert_eq!(fg.get(&Elem::Vector(vec![1])), q(2, 1));
        assert_eq!(fg.get(&Elem::Vector(vec![2])), q(1, 1));
    }

    #[test]
    fn triple_eval_of_interval_indicators() {
        // f = g = h = chi_{[-1,1]} in Z: brute force over triples
        // (a,b,c) in {-1,0,1}^3 with a+b+c = 0 gives 7.
        let mut oracle = 0i64;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    if a + b + c == 0 {
                        oracle += 1;
                    }
                }
            }
        }
        let m = resolve("zd:1").unwrap();
        let f = RationalFn::indicator(&m, (-1..=1).map(|k| Elem::Vector(vec![k])));
        let v = triple_eval(&m, &f, &f, &f).unwrap();
        assert_eq!(v, q(oracle, 1));
        assert_eq!(oracle, 7);
    }

    #[test]
    fn triple_eval_of_deltas() {
        let m = resolve("zd:2").unwrap();
        let d = RationalFn::delta(&m, m.identity());
        assert_eq!(triple_eval(&m, &d, &d, &d).unwrap(), q(1, 1));
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let m1 = resolve("zd:1").unwrap();
        let m2 = resolve("zd:2").unwrap();
        let f = RationalFn::delta(&m1, m1.identity());
        let g = RationalFn::delta(&m2, m2.identity());
        assert!(matches!(
            convolve(&m1, &f, &g),
            Err(Error::ModelMismatch(..))
        ));
    }

    #[test]
    fn decomposition_of_signed_function() {
        let m = resolve("free:2").unwrap();
        let a = m.parse_word("a").unwrap();
        let b = m.parse_word("b").unwrap();
        let f = RationalFn::from_pairs(&m, [(a, q(1, 1)), (b, q(-1, 1))]);
        let d = decomposition_check(&m, &f);
        assert!(d.ok());
        assert_eq!(norms::l2_sq(&f), q(2, 1));
        assert_eq!(d.parts[0].support_size(), 1);
        assert_eq!(d.parts[1].support_size(), 1);
        assert!(d.parts[2].is_zero() && d.parts[3].is_zero());
    }
}
