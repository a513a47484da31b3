//! The lattice obstruction report: characteristic functions of the finite
//! upper-unitriangular subgroups `L_n` of `PGL_2(F_p[t,t^-1])` have witness
//! ratio `sqrt(p^(n+1))·‖χ_n‖₂` while sitting inside linearly sized balls,
//! so no polynomial bound in the support radius can hold.

use super::norms::l2_sq;
use super::{convolve, SparseGroupFunction};
use crate::error::{Error, Result};
use crate::group::laurent::{Laurent, PglMat};
use crate::group::metric::WordMetric;
use crate::group::registry::resolve;
use crate::group::Elem;
use crate::scalar::RealScalar;
use crate::{Rational, RationalFn};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct MozesRow {
    pub n: u32,
    /// `|L_n|`; must equal `p^(n+1)`.
    pub subgroup_order: u64,
    pub order_ok: bool,
    /// `χ_n * χ_n = |L_n| · χ_n`, exactly.
    pub convolution_identity_ok: bool,
    /// witness ratio squared `‖χ*χ‖₂²/‖χ‖₂²` equals `p^(n+1)·‖χ‖₂²`, exactly.
    pub ratio_identity_ok: bool,
    /// `[[1,t^n],[0,1]] = T^n A T^{-n}` verified by exact multiplication,
    /// so its word length is at most `2n+1`.
    pub three_factor_identity_ok: bool,
    pub word_length_bound: u32,
    /// Exact breadth-first word length, when affordable.
    pub bfs_word_length: Option<u32>,
    /// Breadth-first search proved the element lies outside `B(e, 2n+1)`.
    pub bfs_violation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MozesReport {
    pub p: u8,
    pub rows: Vec<MozesRow>,
    /// Witness ratios grow like `sqrt(p)^(n+1)` while the support radius
    /// grows linearly in `n`.
    pub superpolynomial_vs_linear: bool,
    pub all_ok: bool,
}

impl MozesReport {
    pub fn ok(&self) -> bool {
        self.all_ok
    }
}

fn unipotent(poly: Laurent, p: u8) -> Elem {
    Elem::Pgl(PglMat::new(
        [Laurent::one(), poly, Laurent::zero(), Laurent::one()],
        p,
    ))
}

/// Elements of `L_n`: upper unitriangular matrices with polynomial entries
/// of degree at most `n`.
pub fn l_n_elements(p: u8, n: u32) -> Vec<Elem> {
    let mut out = Vec::new();
    let count = u64::from(p).pow(n + 1);
    for code in 0..count {
        let mut c = code;
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        for _ in 0..=n {
            coeffs.push((c % u64::from(p)) as u8);
            c /= u64::from(p);
        }
        let mut poly = Laurent::zero();
        for (i, &ci) in coeffs.iter().enumerate() {
            poly = poly.add(&Laurent::monomial(ci, i as i16, p), p);
        }
        out.push(unipotent(poly, p));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Runs the exact obstruction computation for `p ∈ {2,3,5}`, `n <= n_max <= 4`.
pub fn mozes_obstruction(p: u8, n_max: u32, bfs_budget: usize) -> Result<MozesReport> {
    if ![2, 3, 5].contains(&p) {
        return Err(Error::Config(format!("p must be 2, 3 or 5, got {p}")));
    }
    if n_max > 4 {
        return Err(Error::Config("n_max must be at most 4".into()));
    }
    let model = resolve(&format!("pgl2:{p}"))?;
    let mut metric = WordMetric::with_budget(model.clone(), bfs_budget);
    let t_gen = model.parse_word("t")?;
    let a_gen = model.parse_word("a")?;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let elems = l_n_elements(p, n);
        let subgroup_order = elems.len() as u64;
        let expected = u64::from(p).pow(n + 1);
        let order_ok = subgroup_order == expected;

        let chi: RationalFn = SparseGroupFunction::indicator(&model, elems.clone());
        let conv = convolve(&model, &chi, &chi)?;
        let scaled = chi.scale(&Rational::from_u64(subgroup_order));
        let convolution_identity_ok = conv == scaled;

        // exact witness ratio squared against p^(n+1) · ‖χ‖₂²
        let ratio_sq = l2_sq(&conv) / l2_sq(&chi);
        let expected_ratio_sq = Rational::from_u64(expected) * l2_sq(&chi);
        let ratio_identity_ok = ratio_sq == expected_ratio_sq;

        // T^n A T^{-n} = [[1, t^n], [0, 1]]
        let mut w = model.identity();
        for _ in 0..n {
            w = model.multiply(&w, &t_gen);
        }
        w = model.multiply(&w, &a_gen);
        let t_inv = model.invert(&t_gen);
        for _ in 0..n {
            w = model.multiply(&w, &t_inv);
        }
        let target = unipotent(Laurent::monomial(1, n as i16, p), p);
        let three_factor_identity_ok = w == target;

        let word_length_bound = 2 * n + 1;
        let (bfs_word_length, bfs_violation) =
            match metric.word_length_upto(&target, word_length_bound) {
                Ok(Some(l)) => (Some(l), false),
                Ok(None) => (None, true),
                Err(Error::BudgetExceeded { .. }) => (None, false),
                Err(e) => return Err(e),
            };

        rows.push(MozesRow {
            n,
            subgroup_order,
            order_ok,
            convolution_identity_ok,
            ratio_identity_ok,
            three_factor_identity_ok,
            word_length_bound,
            bfs_word_length,
            bfs_violation,
        });
    }
    // ratio grows geometrically (factor sqrt(p) per step); support radius
    // bound grows by a constant 3 per step
    let superpolynomial_vs_linear = rows
        .windows(2)
        .all(|w| w[1].subgroup_order == w[0].subgroup_order * u64::from(p));
    let all_ok = superpolynomial_vs_linear
        && rows.iter().all(|r| {
            r.order_ok
                && r.convolution_identity_ok
                && r.ratio_identity_ok
                && r.three_factor_identity_ok
                && !r.bfs_violation
        });
    Ok(MozesReport {
        p,
        rows,
        superpolynomial_vs_linear,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_small_cases() {
        let rep = mozes_obstruction(2, 1, 100_000).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.rows[0].subgroup_order, 2); // |L_0| = 2
        assert_eq!(rep.rows[1].subgroup_order, 4); // |L_1| = 4
        assert_eq!(rep.rows[1].bfs_word_length, Some(3));
    }

    #[test]
    fn p3_exact_ratio() {
        let rep = mozes_obstruction(3, 2, 200_000).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.rows[2].subgroup_order, 27);
    }
}
