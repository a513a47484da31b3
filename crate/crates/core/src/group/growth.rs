//! Ball-growth profiling and subgroup distortion measurement.

use super::metric::WordMetric;
use super::Elem;
use crate::error::Result;
use crate::fit::{loglog_upper_window, LineFit};
use serde::Serialize;

/// Tunable thresholds for growth classification.
#[derive(Debug, Clone, Copy)]
pub struct GrowthOptions {
    /// Flag "superpolynomial" when every successive ball ratio over the
    /// fit window stays above this.
    pub superpoly_ratio: f64,
    /// Warn when the log-log fit residual exceeds this.
    pub residual_warn: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            superpoly_ratio: 1.5,
            residual_warn: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthProfile {
    /// `|B(e, r)|` for `r = 0..=r_max`.
    pub ball_sizes: Vec<u64>,
    /// Least-squares slope of `ln |B(r)|` vs `ln r` over the upper half
    /// of the radius range.
    pub fit: Option<LineFit>,
    /// Smallest successive ratio `|B(r+1)|/|B(r)|` over the fit window.
    pub min_window_ratio: f64,
    pub superpolynomial: bool,
    pub fit_unstable: bool,
}

/// Ball sizes `|B(r)|`, a polynomial-degree estimate, and an exponential
/// growth flag. Requires `r_max >= 4`.
pub fn growth_profile(
    metric: &mut WordMetric,
    r_max: u32,
    opts: GrowthOptions,
) -> Result<GrowthProfile> {
    assert!(r_max >= 4, "growth profile needs r_max >= 4");
    metric.ensure_radius(r_max)?;
    let ball_sizes: Vec<u64> = (0..=r_max).map(|r| metric.ball_size(r)).collect();
    let pts: Vec<(u32, f64)> = (1..=r_max)
        .map(|r| (r, ball_sizes[r as usize] as f64))
        .collect();
    let fit = loglog_upper_window(&pts);
    let lo = r_max.div_ceil(2);
    let min_window_ratio = (lo..r_max)
        .map(|r| ball_sizes[r as usize + 1] as f64 / ball_sizes[r as usize] as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(GrowthProfile {
        superpolynomial: min_window_ratio > opts.superpoly_ratio,
        fit_unstable: fit.map(|f| f.rms_residual > opts.residual_warn).unwrap_or(true),
        ball_sizes,
        fit,
        min_window_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistortionClass {
    Undistorted,
    Distorted,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionRow {
    pub intrinsic: u32,
    pub induced: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    /// One row per subgroup element enumerated (identity excluded):
    /// word length in the subgroup generators vs in the ambient ones.
    pub rows: Vec<DistortionRow>,
    /// `D(r)` = max intrinsic length among elements of induced length `<= r`.
    pub distortion_function: Vec<(u32, u32)>,
    /// Log-log slope of the distortion function over its upper window.
    pub fit: Option<LineFit>,
    pub class: DistortionClass,
    /// Some elements exceeded the ambient enumeration budget and were dropped.
    pub truncated: bool,
}

/// Distortion slope above which the subgroup is classified distorted; a
/// quasi-isometric embedding keeps `D(r)/r` bounded, i.e. slope near 1.
pub const DISTORTION_SLOPE_THRESHOLD: f64 = 1.5;

/// Compares intrinsic subgroup word length with the induced ambient length
/// over the subgroup elements of intrinsic length `<= r_max`.
pub fn subgroup_distortion(
    metric: &mut WordMetric,
    subgroup_generators: &[Elem],
    r_max: u32,
) -> Result<DistortionReport> {
    let model = metric.model().clone();
    let mut sym: Vec<Elem> = Vec::new();
    for g in subgroup_generators {
        sym.push(g.clone());
        let inv = model.invert(g);
        if !sym.contains(&inv) {
            sym.push(inv);
        }
    }
    // intrinsic breadth-first enumeration
    let mut intrinsic: std::collections::HashMap<Elem, u32> =
        std::collections::HashMap::from([(model.identity(), 0)]);
    let mut frontier = vec![model.identity()];
    let mut rows = Vec::new();
    let mut truncated = false;
    for r in 1..=r_max {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &sym {
                let h = model.multiply(g, s);
                if !intrinsic.contains_key(&h) {
                    intrinsic.insert(h.clone(), r);
                    next.push(h);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
        if frontier.is_empty() {
            break;
        }
        if intrinsic.len() > metric.budget() {
            truncated = true;
            break;
        }
        for h in &frontier {
            match metric.word_length(h) {
                Ok(induced) => rows.push(DistortionRow {
                    intrinsic: r,
                    induced,
                }),
                Err(crate::Error::BudgetExceeded { .. }) => truncated = true,
                Err(e) => return Err(e),
            }
        }
    }
    let max_induced = rows.iter().map(|r| r.induced).max().unwrap_or(0);
    let mut distortion_function = Vec::new();
    for r in 1..=max_induced {
        let d = rows
            .iter()
            .filter(|row| row.induced <= r)
            .map(|row| row.intrinsic)
            .max()
            .unwrap_or(0);
        if d > 0 {
            distortion_function.push((r, d));
        }
    }
    let pts: Vec<(u32, f64)> = distortion_function
        .iter()
        .map(|&(r, d)| (r, d as f64))
        .collect();
    let fit = loglog_upper_window(&pts);
    let class = match fit {
        Some(f) if f.slope > DISTORTION_SLOPE_THRESHOLD => DistortionClass::Distorted,
        _ => DistortionClass::Undistorted,
    };
    Ok(DistortionReport {
        rows,
        distortion_function,
        fit,
        class,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::super::registry::resolve;
    use super::*;

    #[test]
    fn z_growth_is_linear() {
        let mut m = WordMetric::new(resolve("zd:1").unwrap());
        let p = growth_profile(&mut m, 12, GrowthOptions::default()).unwrap();
        assert_eq!(p.ball_sizes[12], 25);
        let slope = p.fit.unwrap().slope;
        assert!((slope - 1.0).abs() < 0.2, "slope {slope}");
        assert!(!p.superpolynomial);
    }

    #[test]
    fn axis_in_z2_is_undistorted() {
        let model = resolve("zd:2").unwrap();
        let mut m = WordMetric::new(model.clone());
        let axis = model.parse_word("x").unwrap();
        let rep = subgroup_distortion(&mut m, &[axis], 10).unwrap();
        assert_eq!(rep.class, DistortionClass::Undistorted);
        assert!(rep.rows.iter().all(|r| r.intrinsic == r.induced));
    }

    #[test]
    fn cyclic_subgroup_of_bs12_is_distorted() {
        let model = resolve("bs:1:2").unwrap();
        let mut m = WordMetric::new(model.clone());
        let a = model.parse_word("a").unwrap();
        let rep = subgroup_distortion(&mut m, &[a], 64).unwrap();
        assert_eq!(rep.class, DistortionClass::Distorted);
        // a^(2^k) = t^k a t^-k has induced length <= 2k+1
        let g = model.parse_word("a^64").unwrap();
        let w = model.parse_word("t^6 a t^-6").unwrap();
        assert_eq!(g, w);
        let row = rep.rows.iter().find(|r| r.intrinsic == 64).unwrap();
        assert!(row.induced <= 13, "induced {}", row.induced);
    }
}
