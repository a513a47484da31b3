//! The `V_δ` / `C_H` / `C(x,y)` construction and its triple-intersection
//! test, with empirical calibration of `(δ, K)`.
//!
//! `C(x,y)` collects, over δ-paths from `x` to `y` inside the thickened
//! hull `V_δ(x,y)`, the coset-meeting points (including single-vertex
//! transient meetings: the triple-intersection argument needs a path that
//! merely passes through a coset to count as entering and leaving it at
//! that point) together with coset balls `B_H(entry, d+K) ∪ B_H(exit, d+K)`
//! around each visit. Endpoints are always included.

use super::bcp::{bcp_probe, BcpCaps};
use super::paths::meeting_blocks;
use super::{formula_distance, ParabolicFamily};
use crate::error::{Error, Result};
use crate::group::metric::WordMetric;
use crate::group::{Elem, GroupModel};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, Copy)]
pub struct CsetCaps {
    /// δ-paths enumerated per pair.
    pub max_paths: usize,
    /// Distinct penetration blocks collected per pair.
    pub max_blocks: usize,
}

impl Default for CsetCaps {
    fn default() -> Self {
        CsetCaps {
            max_paths: 10_000,
            max_blocks: 10_000,
        }
    }
}

/// Computed `C(x,y)` with its provenance.
#[derive(Debug, Clone)]
pub struct CSet {
    pub elements: BTreeSet<Elem>,
    /// Deduplicated coset visits `(parabolic, rep, entry, exit)`.
    pub blocks: Vec<(usize, Elem, Elem, Elem)>,
    /// The path enumeration hit its cap; the set may be partial.
    pub capped: bool,
}

/// Engine holding the subgroup-ball cache.
pub struct CsetEngine {
    pub model: Arc<GroupModel>,
    pub family: ParabolicFamily,
    pub caps: CsetCaps,
    h_balls: BTreeMap<(usize, u32), Vec<Elem>>,
}

impl CsetEngine {
    pub fn new(model: Arc<GroupModel>, family: ParabolicFamily, caps: CsetCaps) -> Result<Self> {
        if !model.has_length_formula() {
            return Err(Error::Config(
                "c-set computation needs a model with a closed-form word length".into(),
            ));
        }
        Ok(CsetEngine {
            model,
            family,
            caps,
            h_balls: BTreeMap::new(),
        })
    }

    fn h_ball(&mut self, parabolic: usize, rho: u32) -> &[Elem] {
        let p = self
            .family
            .parabolics
            .iter()
            .find(|p| p.index == parabolic)
            .expect("known parabolic");
        self.h_balls
            .entry((parabolic, rho))
            .or_insert_with(|| p.subgroup_ball(&self.model, rho))
    }

    /// `V_δ(x,y) = {t : d(x,t) + d(t,y) <= d(x,y) + δ}`, enumerated by
    /// bounded expansion from `x` (every point of the set is reachable
    /// inside it). `delta2` is on the doubled-integer grid; word-metric
    /// sums are integers, so only `⌊delta2/2⌋` matters here.
    pub fn v_delta(&self, x: &Elem, y: &Elem, delta2: u32) -> Vec<Elem> {
        let model = &self.model;
        let delta = u64::from(delta2 / 2);
        let d = formula_distance(model, x, y);
        let budget = d + delta;
        let mut seen: BTreeSet<Elem> = BTreeSet::new();
        let mut out = Vec::new();
        let mut frontier = vec![x.clone()];
        seen.insert(x.clone());
        out.push(x.clone());
        while let Some(t) = frontier.pop() {
            for (s, _) in model.symmetric_generators() {
                let u = model.multiply(&t, s);
                if seen.contains(&u) {
                    continue;
                }
                if formula_distance(model, x, &u) + formula_distance(model, &u, y) <= budget {
                    seen.insert(u.clone());
                    out.push(u.clone());
                    frontier.push(u);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Enumerates simple δ-paths from `x` to `y` through `V_δ` and collects
    /// deduplicated coset-visit blocks.
    fn delta_path_blocks(
        &mut self,
        x: &Elem,
        y: &Elem,
        delta2: u32,
    ) -> (Vec<(usize, Elem, Elem, Elem)>, bool) {
        let model = self.model.clone();
        let delta = u64::from(delta2 / 2);
        let d = formula_distance(&model, x, y);
        let budget = d + delta;
        let mut blocks: BTreeSet<(usize, Elem, Elem, Elem)> = BTreeSet::new();
        let mut paths = 0usize;
        let mut capped = false;
        let mut stack_path: Vec<Elem> = vec![x.clone()];

        fn dfs(
            engine_model: &GroupModel,
            family: &ParabolicFamily,
            y: &Elem,
            remaining: u64,
            path: &mut Vec<Elem>,
            blocks: &mut BTreeSet<(usize, Elem, Elem, Elem)>,
            paths: &mut usize,
            caps: CsetCaps,
            capped: &mut bool,
        ) {
            if *paths >= caps.max_paths || blocks.len() >= caps.max_blocks {
                *capped = true;
                return;
            }
            let cur = path.last().unwrap().clone();
            if cur == *y {
                *paths += 1;
                for b in meeting_blocks(engine_model, family, path) {
                    blocks.insert(b);
                }
                return;
            }
            for (s, _) in engine_model.symmetric_generators() {
                let u = engine_model.multiply(&cur, s);
                if path.contains(&u) {
                    continue;
                }
                let du = formula_distance(engine_model, &u, y);
                if du + 1 > remaining {
                    continue;
                }
                path.push(u);
                dfs(
                    engine_model,
                    family,
                    y,
                    remaining - 1,
                    path,
                    blocks,
                    paths,
                    caps,
                    capped,
                );
                path.pop();
            }
        }
        dfs(
            &model,
            &self.family,
            y,
            budget,
            &mut stack_path,
            &mut blocks,
            &mut paths,
            self.caps,
            &mut capped,
        );
        (blocks.into_iter().collect(), capped)
    }

    /// The full `C(x,y)` for the given `(δ, K)`.
    pub fn c_set(&mut self, x: &Elem, y: &Elem, delta2: u32, k: u32) -> Result<CSet> {
        let mut elements: BTreeSet<Elem> = BTreeSet::new();
        elements.insert(x.clone());
        elements.insert(y.clone());
        for t in self.v_delta(x, y, delta2) {
            elements.insert(t);
        }
        let (blocks, capped) = self.delta_path_blocks(x, y, delta2);
        let model = self.model.clone();
        for (pi, _, entry, exit) in &blocks {
            let d = formula_distance(&model, entry, exit);
            let rho = u32::try_from(d).unwrap() + k;
            for center in [entry, exit] {
                for h in self.h_ball(*pi, rho).to_vec() {
                    elements.insert(model.multiply(center, &h));
                }
            }
        }
        Ok(CSet {
            elements,
            blocks,
            capped,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TripleCheck {
    pub nonempty: bool,
    pub witness: Option<Elem>,
    pub capped: bool,
}

/// Whether `C(x,y) ∩ C(y,z) ∩ C(z,x)` is nonempty, with a witness.
pub fn triple_intersection_check(
    engine: &mut CsetEngine,
    x: &Elem,
    y: &Elem,
    z: &Elem,
    delta2: u32,
    k: u32,
) -> Result<TripleCheck> {
    let cxy = engine.c_set(x, y, delta2, k)?;
    let cyz = engine.c_set(y, z, delta2, k)?;
    let czx = engine.c_set(z, x, delta2, k)?;
    let capped = cxy.capped || cyz.capped || czx.capped;
    let witness = cxy
        .elements
        .iter()
        .find(|t| cyz.elements.contains(*t) && czx.elements.contains(*t))
        .cloned();
    Ok(TripleCheck {
        nonempty: witness.is_some(),
        witness,
        capped,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    /// Smallest workable δ on the doubled-integer grid.
    pub delta2: u32,
    /// Observed BCP constant at the probe radius.
    pub k: u32,
    pub sample_size: u64,
    /// K observed at radii `r-2, r-1, r`.
    pub bcp_trend: Vec<u64>,
}

#[derive(Debug, Clone, Copy)]
pub struct CalibrateOpts {
    pub delta2_max: u32,
    pub sample_triples: u64,
    pub seed: u64,
    pub caps: CsetCaps,
    pub bcp_caps: BcpCaps,
}

impl Default for CalibrateOpts {
    fn default() -> Self {
        CalibrateOpts {
            delta2_max: 8,
            sample_triples: 300,
            seed: 0,
            caps: CsetCaps::default(),
            bcp_caps: BcpCaps::default(),
        }
    }
}

/// Finds the smallest δ on the doubled grid, with `K` taken from the BCP
/// probe, such that sampled triples in `B(e,r)` all have nonempty c-set
/// triple intersections. Fails when the observed BCP constant keeps
/// growing with the radius (the family is then not a relatively
/// hyperbolic structure) or when no δ up to the bound works.
pub fn delta_calibrate(
    metric: &mut WordMetric,
    family: &ParabolicFamily,
    r: u32,
    opts: CalibrateOpts,
) -> Result<Calibration> {
    let model = metric.model().clone();
    for p in &family.parabolics {
        if p.gen_indices.len() == model.generators().len() {
            return Err(Error::DegenerateFamily(
                "parabolic equals the whole group".into(),
            ));
        }
    }
    let probe = bcp_probe(metric, family, 1, r, opts.bcp_caps)?;
    let trend: Vec<u64> = probe.trend.iter().map(|t| t.k).collect();
    if trend.len() >= 3 && trend.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::CalibrationFailed(format!(
            "observed BCP constant grows with the radius: {trend:?}"
        )));
    }
    let k = u32::try_from(probe.k).unwrap_or(u32::MAX);

    metric.ensure_radius(r)?;
    let ball: Vec<Elem> = metric.ball_iter(r).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut triples = Vec::new();
    for _ in 0..opts.sample_triples {
        let pick = |rng: &mut ChaCha8Rng| ball[rng.gen_range(0..ball.len())].clone();
        triples.push((pick(&mut rng), pick(&mut rng), pick(&mut rng)));
    }
    let mut engine = CsetEngine::new(model, family.clone(), opts.caps)?;
    'delta: for delta2 in 0..=opts.delta2_max {
        for (x, y, z) in &triples {
            let check = triple_intersection_check(&mut engine, x, y, z, delta2, k)?;
            if !check.nonempty {
                continue 'delta;
            }
        }
        return Ok(Calibration {
            delta2,
            k,
            sample_size: triples.len() as u64,
            bcp_trend: trend,
        });
    }
    Err(Error::CalibrationFailed(format!(
        "no delta <= {} makes all {} sampled triples intersect",
        opts.delta2_max as f64 / 2.0,
        opts.sample_triples
    )))
}

#[cfg(test)]
mod tests {
    use super::super::resolve_family;
    use super::*;
    use crate::group::registry::resolve;

    fn engine(key: &str) -> (Arc<GroupModel>, CsetEngine) {
        let model = resolve(key).unwrap();
        let family = resolve_family(&model).unwrap();
        let e = CsetEngine::new(model.clone(), family, CsetCaps::default()).unwrap();
        (model, e)
    }

    #[test]
    fn degenerate_pair_is_singleton() {
        let (model, mut eng) = engine("freeprod:zd:2,free:1#parabolic=0");
        let x = model.parse_word("x a").unwrap();
        let c = eng.c_set(&x, &x, 0, 0).unwrap();
        assert_eq!(c.elements.len(), 1);
        assert!(c.elements.contains(&x));
    }

    #[test]
    fn same_coset_pair_contains_both_h_balls() {
        let (model, mut eng) = engine("freeprod:zd:2,free:1#parabolic=0");
        // x, y in the coset a·H with d(x,y) = 2
        let x = model.parse_word("a x").unwrap();
        let y = model.parse_word("a y x").unwrap();
        let k = 1u32;
        let c = eng.c_set(&x, &y, 0, k).unwrap();
        let d = formula_distance(&model, &x, &y) as u32;
        let family = resolve_family(&model).unwrap();
        let p = &family.parabolics[0];
        for h in p.subgroup_ball(&model, d + k) {
            assert!(c.elements.contains(&model.multiply(&x, &h)));
            assert!(c.elements.contains(&model.multiply(&y, &h)));
        }
    }

    #[test]
    fn cset_is_equivariant_on_translates() {
        let (model, mut eng) = engine("freeprod:zd:2,free:1#parabolic=0");
        let x = model.parse_word("x").unwrap();
        let y = model.parse_word("a y").unwrap();
        let g = model.parse_word("y a").unwrap();
        let c = eng.c_set(&x, &y, 2, 1).unwrap();
        let gc: BTreeSet<Elem> = c
            .elements
            .iter()
            .map(|t| model.multiply(&g, t))
            .collect();
        let cg = eng
            .c_set(&model.multiply(&g, &x), &model.multiply(&g, &y), 2, 1)
            .unwrap();
        assert_eq!(gc, cg.elements);
    }

    #[test]
    fn colinear_triple_in_free_factor_has_witness() {
        // e, a^m, a^k lie on one geodesic in the free factor; the middle
        // point is a coset-meeting mark of the long pair's geodesic.
        let (model, mut eng) = engine("freeprod:zd:2,free:1#parabolic=0");
        let e = model.identity();
        let am = model.parse_word("a^2").unwrap();
        let ak = model.parse_word("a^4").unwrap();
        let chk = triple_intersection_check(&mut eng, &e, &am, &ak, 0, 0).unwrap();
        assert!(chk.nonempty);
        assert_eq!(chk.witness, Some(am));
    }

    #[test]
    fn z2_axis_family_fails_calibration() {
        let model = resolve("zd:2#parabolic=x").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model);
        let got = delta_calibrate(
            &mut metric,
            &family,
            5,
            CalibrateOpts {
                sample_triples: 40,
                ..CalibrateOpts::default()
            },
        );
        assert!(matches!(got, Err(Error::CalibrationFailed(_))), "{got:?}");
    }

    #[test]
    fn free_product_calibrates_at_delta_zero() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model);
        let cal = delta_calibrate(
            &mut metric,
            &family,
            4,
            CalibrateOpts {
                sample_triples: 60,
                ..CalibrateOpts::default()
            },
        )
        .unwrap();
        assert_eq!(cal.delta2, 0);
        assert_eq!(cal.k, 0);
    }
}
