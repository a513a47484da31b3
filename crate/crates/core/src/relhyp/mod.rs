//! Coned-off Cayley graphs, coset penetration and the relative
//! triple-intersection machinery.
//!
//! All operations here need exact coset bookkeeping, so they are restricted
//! to models with decidable parabolic membership: free-product factors,
//! coordinate subgroups of `Z^d`, and cyclic `⟨a⟩` inside free groups.
//! These models also admit closed-form word lengths, which the `V_δ`
//! expansion relies on.

pub mod bcp;
pub mod cset;
pub mod paths;
pub mod quasiconv;

use crate::error::{Error, Result};
use crate::group::metric::WordMetric;
use crate::group::{Elem, Family, GroupModel, Letter};
use std::collections::HashMap;
use std::sync::Arc;

/// Decidable realization of one parabolic subgroup `H_i`.
#[derive(Debug, Clone)]
pub enum ParabolicKind {
    /// A full factor of a free product.
    FreeFactor(u8),
    /// Coordinate subgroup of `Z^d` spanned by the given axes.
    ZdAxes(Vec<usize>),
    /// Cyclic subgroup generated by one free-group generator.
    FreeLetter(u8),
}

#[derive(Debug, Clone)]
pub struct Parabolic {
    /// Position in the model's parabolic list.
    pub index: usize,
    pub kind: ParabolicKind,
    /// Generator indices of `S_{H_i}`.
    pub gen_indices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ParabolicFamily {
    pub parabolics: Vec<Parabolic>,
}

/// Resolves the model's declared generator sublists into decidable
/// parabolics, or reports why it cannot.
pub fn resolve_family(model: &GroupModel) -> Result<ParabolicFamily> {
    if model.parabolics().is_empty() {
        return Err(Error::NoParabolics);
    }
    let mut parabolics = Vec::new();
    for (index, sub) in model.parabolics().iter().enumerate() {
        let kind = match &model.family {
            Family::FreeProduct(..) => {
                // must be exactly the generators of one factor
                let f = model.gen_origin[sub[0]];
                let full: Vec<usize> = model
                    .gen_origin
                    .iter()
                    .enumerate()
                    .filter(|(_, &o)| o == f)
                    .map(|(i, _)| i)
                    .collect();
                let mut sorted = sub.clone();
                sorted.sort_unstable();
                if sorted != full {
                    return Err(Error::UnsupportedParabolic);
                }
                ParabolicKind::FreeFactor(f)
            }
            Family::Zd { .. } => ParabolicKind::ZdAxes(sub.clone()),
            Family::Free { .. } if sub.len() == 1 => ParabolicKind::FreeLetter(sub[0] as u8),
            _ => return Err(Error::UnsupportedParabolic),
        };
        parabolics.push(Parabolic {
            index,
            kind,
            gen_indices: sub.clone(),
        });
    }
    Ok(ParabolicFamily { parabolics })
}

impl Parabolic {
    pub fn contains_letter(&self, l: Letter) -> bool {
        self.gen_indices.contains(&(l.gen as usize))
    }

    /// Membership in `H`.
    pub fn is_member(&self, model: &GroupModel, e: &Elem) -> bool {
        match (&self.kind, e) {
            (ParabolicKind::FreeFactor(f), Elem::Syllables(s)) => {
                s.is_empty() || (s.len() == 1 && s[0].0 == *f)
            }
            (ParabolicKind::ZdAxes(axes), Elem::Vector(v)) => v
                .iter()
                .enumerate()
                .all(|(i, &x)| x == 0 || axes.contains(&i)),
            (ParabolicKind::FreeLetter(g), Elem::Free(w)) => {
                let letter = *g as i8 + 1;
                w.iter().all(|&l| l == letter || l == -letter)
            }
            _ => panic!("element does not match model `{}`", model.key()),
        }
    }

    /// Canonical representative of the left coset `eH`: the element with
    /// the trailing `H`-part stripped, so `rep(x) = rep(y) ⇔ xH = yH`.
    pub fn coset_rep(&self, model: &GroupModel, e: &Elem) -> Elem {
        match (&self.kind, e) {
            (ParabolicKind::FreeFactor(f), Elem::Syllables(s)) => {
                if s.last().map(|(g, _)| *g == *f).unwrap_or(false) {
                    Elem::Syllables(s[..s.len() - 1].to_vec())
                } else {
                    e.clone()
                }
            }
            (ParabolicKind::ZdAxes(axes), Elem::Vector(v)) => {
                let mut out = v.clone();
                for &i in axes {
                    out[i] = 0;
                }
                Elem::Vector(out)
            }
            (ParabolicKind::FreeLetter(g), Elem::Free(w)) => {
                let letter = *g as i8 + 1;
                let mut end = w.len();
                while end > 0 && (w[end - 1] == letter || w[end - 1] == -letter) {
                    end -= 1;
                }
                Elem::Free(w[..end].to_vec())
            }
            _ => panic!("element does not match model `{}`", model.key()),
        }
    }

    /// `d(e, H) = min_h L(h^{-1} e)`: strip the leading `H`-part.
    pub fn distance_to_subgroup(&self, model: &GroupModel, e: &Elem) -> u64 {
        match (&self.kind, e) {
            (ParabolicKind::FreeFactor(f), Elem::Syllables(s)) => {
                let skip = usize::from(s.first().map(|(g, _)| *g == *f).unwrap_or(false));
                model
                    .length_formula(&Elem::Syllables(s[skip..].to_vec()))
                    .expect("free products of formulaic factors")
            }
            (ParabolicKind::ZdAxes(axes), Elem::Vector(v)) => v
                .iter()
                .enumerate()
                .filter(|(i, _)| !axes.contains(i))
                .map(|(_, &x)| x.unsigned_abs())
                .sum(),
            (ParabolicKind::FreeLetter(g), Elem::Free(w)) => {
                let letter = *g as i8 + 1;
                let skip = w.iter().take_while(|&&l| l == letter || l == -letter).count();
                (w.len() - skip) as u64
            }
            _ => panic!("element does not match model `{}`", model.key()),
        }
    }

    /// `H ∩ B(e, rho)` as ambient elements, in canonical order.
    pub fn subgroup_ball(&self, model: &GroupModel, rho: u32) -> Vec<Elem> {
        let mut out = vec![model.identity()];
        let mut seen: std::collections::HashSet<Elem> =
            out.iter().cloned().collect();
        let gens: Vec<Elem> = self
            .gen_indices
            .iter()
            .flat_map(|&i| {
                let g = model.generators()[i].elem.clone();
                let gi = model.invert(&g);
                if gi == g {
                    vec![g]
                } else {
                    vec![g, gi]
                }
            })
            .collect();
        let mut frontier = out.clone();
        for _ in 0..rho {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &gens {
                    let y = model.multiply(x, s);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        out.sort_unstable();
        out
    }
}

/// Distance helper on formulaic models.
pub fn formula_distance(model: &GroupModel, a: &Elem, b: &Elem) -> u64 {
    let rel = model.multiply(&model.invert(a), b);
    model
        .length_formula(&rel)
        .expect("caller guarantees a formulaic model")
}

/// Node of a coned-off ball: a group element or a cone vertex.
pub const CONE_BASE: u32 = 1 << 30;

/// Edge label in the coned-off graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatEdge {
    /// Original Cayley edge with its generator letter (weight 1).
    Gen(Letter),
    /// Half-edge to/from a cone vertex (weight 1/2).
    Cone,
}

/// Finite truncation of the coned-off Cayley graph: the ball `B(e, r)` in
/// the word metric plus one cone vertex per parabolic coset meeting it.
/// All distances are on the doubled scale (half-edges count 1, Cayley
/// edges count 2).
pub struct ConedOffBall {
    pub model: Arc<GroupModel>,
    pub family: ParabolicFamily,
    pub radius: u32,
    /// Ball elements, sphere-by-sphere canonical order.
    pub verts: Vec<Elem>,
    pub vert_index: HashMap<Elem, u32>,
    /// `(parabolic index, coset representative)`, sorted.
    pub cones: Vec<(usize, Elem)>,
    pub cone_index: HashMap<(usize, Elem), u32>,
    /// Adjacency over node ids: vertices `0..verts.len()`, cone `i` is
    /// `verts.len() + i`. Weights on the doubled scale.
    pub adj: Vec<Vec<(u32, u32, HatEdge)>>,
}

impl ConedOffBall {
    pub fn build(metric: &mut WordMetric, family: &ParabolicFamily, r: u32) -> Result<ConedOffBall> {
        let model = metric.model().clone();
        for p in &family.parabolics {
            if p.gen_indices.len() == model.generators().len() {
                return Err(Error::DegenerateFamily(
                    "a parabolic equals the whole group; its coned-off graph has diameter <= 1"
                        .into(),
                ));
            }
        }
        // pairwise-trivial-intersection spot check within the ball
        metric.ensure_radius(r)?;
        let verts: Vec<Elem> = metric.ball_iter(r).cloned().collect();
        for (i, p) in family.parabolics.iter().enumerate() {
            for q in &family.parabolics[i + 1..] {
                for v in &verts {
                    if !model.is_identity(v)
                        && p.is_member(&model, v)
                        && q.is_member(&model, v)
                    {
                        return Err(Error::DegenerateFamily(format!(
                            "parabolics {} and {} share the nontrivial element {}",
                            p.index,
                            q.index,
                            model.render(v)
                        )));
                    }
                }
            }
        }
        let vert_index: HashMap<Elem, u32> = verts
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let mut cones: Vec<(usize, Elem)> = Vec::new();
        let mut cone_index: HashMap<(usize, Elem), u32> = HashMap::new();
        for p in &family.parabolics {
            for v in &verts {
                let rep = p.coset_rep(&model, v);
                let key = (p.index, rep);
                if !cone_index.contains_key(&key) {
                    cone_index.insert(key.clone(), 0);
                    cones.push(key);
                }
            }
        }
        cones.sort_unstable_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        cone_index.clear();
        for (i, c) in cones.iter().enumerate() {
            cone_index.insert(c.clone(), i as u32);
        }

        let nv = verts.len() as u32;
        let mut adj: Vec<Vec<(u32, u32, HatEdge)>> =
            vec![Vec::new(); verts.len() + cones.len()];
        for (vi, v) in verts.iter().enumerate() {
            for (s, letter) in model.symmetric_generators() {
                let w = model.multiply(v, s);
                if let Some(&wi) = vert_index.get(&w) {
                    adj[vi].push((wi, 2, HatEdge::Gen(*letter)));
                }
            }
            for p in &family.parabolics {
                let rep = p.coset_rep(&model, v);
                let ci = cone_index[&(p.index, rep)] + nv;
                adj[vi].push((ci, 1, HatEdge::Cone));
                adj[ci as usize].push((vi as u32, 1, HatEdge::Cone));
            }
        }
        Ok(ConedOffBall {
            model,
            family: family.clone(),
            radius: r,
            verts,
            vert_index,
            cones,
            cone_index,
            adj,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    /// Dijkstra on the doubled-integer scale from one node.
    pub fn hat_distances(&self, from: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut heap = std::collections::BinaryHeap::new();
        dist[from as usize] = 0;
        heap.push(std::cmp::Reverse((0u32, from)));
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if d > dist[v as usize] {
                continue;
            }
            for &(w, wt, _) in &self.adj[v as usize] {
                let nd = d + wt;
                if nd < dist[w as usize] {
                    dist[w as usize] = nd;
                    heap.push(std::cmp::Reverse((nd, w)));
                }
            }
        }
        dist
    }

    /// Hat-distance between two ball elements, doubled scale.
    pub fn hat_distance_doubled(&self, a: &Elem, b: &Elem) -> Option<u32> {
        let ai = *self.vert_index.get(a)?;
        let bi = *self.vert_index.get(b)?;
        Some(self.hat_distances(ai)[bi as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::registry::resolve;

    #[test]
    fn coset_reps_partition_the_ball() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let p = &family.parabolics[0];
        let mut metric = WordMetric::new(model.clone());
        metric.ensure_radius(4).unwrap();
        for v in metric.ball_iter(4) {
            let rep = p.coset_rep(&model, v);
            // same coset iff same rep
            let rel = model.multiply(&model.invert(&rep), v);
            assert!(p.is_member(&model, &rel));
            assert_eq!(p.coset_rep(&model, &rep), rep);
        }
    }

    #[test]
    fn cone_vertices_collapse_cosets() {
        // F2 with H = <a>: d_hat(a^3, e) = 1 (two half-edges via the cone)
        let model = resolve("free:2#parabolic=a").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model.clone());
        let ball = ConedOffBall::build(&mut metric, &family, 3).unwrap();
        let a3 = model.parse_word("a^3").unwrap();
        let e = model.identity();
        assert_eq!(ball.hat_distance_doubled(&a3, &e), Some(2));
        // d_hat <= d always
        let b = model.parse_word("b a b").unwrap();
        let d_hat = ball.hat_distance_doubled(&b, &e).unwrap();
        assert!(d_hat <= 2 * 3);
    }

    #[test]
    fn no_parabolics_is_an_error() {
        let model = resolve("free:2").unwrap();
        assert!(matches!(resolve_family(&model), Err(Error::NoParabolics)));
    }

    #[test]
    fn whole_group_family_is_degenerate() {
        let model = resolve("zd:2#parabolic=x,y").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model);
        assert!(matches!(
            ConedOffBall::build(&mut metric, &family, 3),
            Err(Error::DegenerateFamily(_))
        ));
    }

    #[test]
    fn subgroup_ball_sizes() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let p = &family.parabolics[0];
        assert_eq!(p.subgroup_ball(&model, 0).len(), 1);
        assert_eq!(p.subgroup_ball(&model, 1).len(), 5);
        assert_eq!(p.subgroup_ball(&model, 2).len(), 13);
    }
}
