//! Word metrics: breadth-first ball and sphere enumeration with caching.

use super::{Elem, GroupModel};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// Default enumeration cap; keeps desk-scale runs under a minute.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Cached word metric of a model. Spheres are built single-writer (method
/// calls take `&mut self`) and frozen thereafter; the element order inside
/// each sphere is canonical (sorted), so enumeration is deterministic.
#[derive(Debug)]
pub struct WordMetric {
    model: Arc<GroupModel>,
    dist: HashMap<Elem, u32>,
    spheres: Vec<Vec<Elem>>,
    budget: usize,
    /// The whole group has been enumerated (frontier emptied).
    exhausted: bool,
}

impl WordMetric {
    pub fn new(model: Arc<GroupModel>) -> Self {
        Self::with_budget(model, DEFAULT_BUDGET)
    }

    pub fn with_budget(model: Arc<GroupModel>, budget: usize) -> Self {
        let e = model.identity();
        WordMetric {
            model,
            dist: HashMap::from([(e.clone(), 0)]),
            spheres: vec![vec![e]],
            budget,
            exhausted: false,
        }
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Radius enumerated so far.
    pub fn radius(&self) -> u32 {
        self.spheres.len() as u32 - 1
    }

    /// Enumerates spheres up to radius `r` (or until the group is
    /// exhausted). Fails without side effects on the cap.
    pub fn ensure_radius(&mut self, r: u32) -> Result<()> {
        while self.spheres.len() <= r as usize && !self.exhausted {
            let prev = self.spheres.last().unwrap();
            let mut layer: Vec<Elem> = Vec::new();
            for g in prev {
                for (s, _) in self.model.symmetric_generators() {
                    let h = self.model.multiply(g, s);
                    if !self.dist.contains_key(&h) {
                        layer.push(h);
                    }
                }
            }
            layer.sort_unstable();
            layer.dedup();
            if self.dist.len() + layer.len() > self.budget {
                return Err(Error::BudgetExceeded {
                    context: "ball enumeration",
                    cap: self.budget,
                });
            }
            if layer.is_empty() {
                self.exhausted = true;
                break;
            }
            let d = self.spheres.len() as u32;
            for h in &layer {
                self.dist.insert(h.clone(), d);
            }
            self.spheres.push(layer);
        }
        Ok(())
    }

    /// Sphere `S_r = {g : L(g) = r}` in canonical order. Empty when the
    /// group was exhausted earlier.
    pub fn sphere(&self, r: u32) -> &[Elem] {
        self.spheres
            .get(r as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Iterates `B(e, r)` in length-then-canonical order.
    pub fn ball_iter(&self, r: u32) -> impl Iterator<Item = &Elem> {
        self.spheres
            .iter()
            .take(r as usize + 1)
            .flat_map(|s| s.iter())
    }

    pub fn ball_size(&self, r: u32) -> u64 {
        self.spheres
            .iter()
            .take(r as usize + 1)
            .map(|s| s.len() as u64)
            .sum()
    }

    /// The ball `{g : L(g) <= r}` as an owned, canonically ordered vector.
    pub fn ball(&mut self, r: u32) -> Result<Vec<Elem>> {
        self.ensure_radius(r)?;
        Ok(self.ball_iter(r).cloned().collect())
    }

    pub fn cached_length(&self, g: &Elem) -> Option<u32> {
        self.dist.get(g).copied()
    }

    /// Exact word length. Uses the model's closed form when available,
    /// otherwise grows the breadth-first cache.
    pub fn word_length(&mut self, g: &Elem) -> Result<u32> {
        if let Some(l) = self.model.length_formula(g) {
            return Ok(l as u32);
        }
        loop {
            if let Some(&d) = self.dist.get(g) {
                return Ok(d);
            }
            if self.exhausted {
                return Err(Error::NotGenerated);
            }
            let next = self.radius() + 1;
            self.ensure_radius(next)?;
        }
    }

    /// Word length if it does not exceed `max_r`.
    pub fn word_length_upto(&mut self, g: &Elem, max_r: u32) -> Result<Option<u32>> {
        if let Some(l) = self.model.length_formula(g) {
            return Ok((l as u32 <= max_r).then_some(l as u32));
        }
        self.ensure_radius(max_r)?;
        Ok(self.dist.get(g).copied().filter(|&d| d <= max_r))
    }

    /// Left-invariant distance `d(a, b) = L(a^{-1} b)`.
    pub fn distance(&mut self, a: &Elem, b: &Elem) -> Result<u32> {
        let rel = self.model.multiply(&self.model.invert(a), b);
        self.word_length(&rel)
    }
}

#[cfg(test)]
mod tests {
    use super::super::registry::resolve;
    use super::*;

    #[test]
    fn z2_ball_sizes() {
        let mut m = WordMetric::new(resolve("zd:2").unwrap());
        m.ensure_radius(5).unwrap();
        let sizes: Vec<u64> = (0..=5).map(|r| m.ball_size(r)).collect();
        assert_eq!(sizes, vec![1, 5, 13, 25, 41, 61]);
    }

    #[test]
    fn f2_sphere_sizes() {
        let mut m = WordMetric::new(resolve("free:2").unwrap());
        m.ensure_radius(5).unwrap();
        for k in 1..=5u32 {
            assert_eq!(m.sphere(k).len() as u64, 4 * 3u64.pow(k - 1));
        }
        assert_eq!(m.ball_size(2), 17);
    }

    #[test]
    fn budget_error_leaves_state_usable() {
        let mut m = WordMetric::with_budget(resolve("free:2").unwrap(), 20);
        assert!(m.ensure_radius(1).is_ok());
        let err = m.ensure_radius(3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert_eq!(m.ball_size(1), 5);
    }

    #[test]
    fn finite_group_exhausts() {
        let text = "3\n1 2 3\n2 3 1\n3 1 2\n2\n";
        let model = super::super::registry::finite_from_table("finite:z3", text).unwrap();
        let mut m = WordMetric::new(model);
        m.ensure_radius(10).unwrap();
        assert_eq!(m.ball_size(10), 3);
        // unreachable elements would error; all of Z/3 is reachable
        assert_eq!(m.word_length(&Elem::Finite(2)).unwrap(), 1);
    }

    #[test]
    fn distance_is_left_invariant() {
        let model = resolve("heisenberg").unwrap();
        let mut m = WordMetric::new(model.clone());
        let a = model.parse_word("a b").unwrap();
        let b = model.parse_word("b^-1 a a").unwrap();
        let c = model.parse_word("a b a^-1").unwrap();
        let d1 = m.distance(&a, &b).unwrap();
        let d2 = m
            .distance(&model.multiply(&c, &a), &model.multiply(&c, &b))
            .unwrap();
        assert_eq!(d1, d2);
    }
}
