//! Empirical bounded-coset-penetration probe.
//!
//! For pairs of relative quasi-geodesics with a common start and endpoints
//! in a common coset, measures (case 2) the distance between entry and
//! exit points in cosets both penetrate, and (case 1) the distance
//! traveled in cosets only one of them penetrates. The terminal coset is
//! deemed penetrated by both paths (entry compared, no traversal
//! condition), matching how free products satisfy the property.

use super::paths::blocks_backtrack;
use super::{formula_distance, ConedOffBall, HatEdge, ParabolicFamily};
use crate::error::{Error, Result};
use crate::group::metric::WordMetric;
use crate::group::Elem;
use serde::Serialize;
use std::collections::BTreeMap;

/// Penetration signature of one hat-path: per visited coset, entry/exit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    /// `(parabolic, coset rep) -> (entry, exit, traversal)`
    pub visits: BTreeMap<(usize, Elem), (Elem, Elem, u64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct BcpCaps {
    /// Raw paths walked per endpoint before giving up.
    pub max_paths: usize,
    /// Distinct signatures kept per endpoint.
    pub max_signatures: usize,
    /// Endpoint pairs examined per coset.
    pub max_pairs_per_coset: usize,
}

impl Default for BcpCaps {
    fn default() -> Self {
        BcpCaps {
            max_paths: 10_000,
            max_signatures: 32,
            max_pairs_per_coset: 4_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BcpRow {
    pub pair_id: u64,
    /// Word-metric distance between the two endpoints.
    pub d: u64,
    /// Hat-distance between the endpoints, doubled scale.
    pub d_hat: u32,
    pub cosets_penetrated: usize,
    pub k_case1: u64,
    pub k_case2: u64,
    pub backtracked: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BcpRadiusReport {
    pub radius: u32,
    pub quasi_constant: u32,
    pub pairs_checked: u64,
    pub k_case1: u64,
    pub k_case2: u64,
    /// `max(k_case1, k_case2)`: the observed BCP constant.
    pub k: u64,
    pub backtracking_paths_skipped: u64,
    pub signature_caps_hit: bool,
    pub rows: Vec<BcpRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BcpReport {
    /// Per-radius observations at `r-2, r-1, r`.
    pub trend: Vec<BcpRadiusReport>,
    /// K observed at the largest radius.
    pub k: u64,
    /// K is non-increasing along the trend.
    pub stable: bool,
}

/// Enumerates hat-paths from the identity to `target` with total doubled
/// length at most `budget`, returning deduplicated penetration signatures.
/// Paths that backtrack (revisit a left coset) are dropped and counted.
fn signatures_to(
    ball: &ConedOffBall,
    dist_e: &[u32],
    target: u32,
    budget: u32,
    caps: BcpCaps,
    skipped: &mut u64,
    caps_hit: &mut bool,
) -> Vec<Signature> {
    let model = &ball.model;
    let nv = ball.verts.len() as u32;
    let mut sigs: Vec<Signature> = Vec::new();
    let mut paths_walked = 0usize;
    // stack-based DFS over reversed edges: state = (node, remaining budget, path)
    let mut path_nodes: Vec<u32> = vec![target];
    fn dfs(
        ball: &ConedOffBall,
        dist_e: &[u32],
        node: u32,
        remaining: u32,
        path_nodes: &mut Vec<u32>,
        sigs: &mut Vec<Signature>,
        paths_walked: &mut usize,
        caps: BcpCaps,
        skipped: &mut u64,
        caps_hit: &mut bool,
        model: &crate::group::GroupModel,
        nv: u32,
    ) {
        if *paths_walked >= caps.max_paths || sigs.len() >= caps.max_signatures {
            *caps_hit = true;
            return;
        }
        if node == 0 && dist_e[0] == 0 {
            // path complete (node 0 is the identity by construction)
            *paths_walked += 1;
            if let Some(sig) = extract_signature(ball, model, nv, path_nodes, skipped) {
                if !sigs.contains(&sig) {
                    sigs.push(sig);
                }
            }
            return;
        }
        for &(u, w, _) in &ball.adj[node as usize] {
            if w > remaining || dist_e[u as usize] > remaining - w {
                continue;
            }
            if path_nodes.contains(&u) {
                continue;
            }
            path_nodes.push(u);
            dfs(
                ball,
                dist_e,
                u,
                remaining - w,
                path_nodes,
                sigs,
                paths_walked,
                caps,
                skipped,
                caps_hit,
                model,
                nv,
            );
            path_nodes.pop();
        }
    }
    dfs(
        ball,
        dist_e,
        target,
        budget,
        &mut path_nodes,
        &mut sigs,
        &mut paths_walked,
        caps,
        skipped,
        caps_hit,
        model,
        nv,
    );
    sigs.sort_unstable();
    sigs
}

/// Builds the merged penetration signature of a node path (stored reversed,
/// target first). Returns `None` for backtracking paths.
fn extract_signature(
    ball: &ConedOffBall,
    model: &crate::group::GroupModel,
    nv: u32,
    path_rev: &[u32],
    skipped: &mut u64,
) -> Option<Signature> {
    let nodes: Vec<u32> = path_rev.iter().rev().copied().collect();
    // records in path order: (parabolic, rep, entry, exit)
    let mut records: Vec<(usize, Elem, Elem, Elem)> = Vec::new();
    let mut i = 0;
    while i + 1 < nodes.len() {
        let (a, b) = (nodes[i], nodes[i + 1]);
        if b >= nv {
            // vertex -> cone -> vertex
            let (pi, rep) = ball.cones[(b - nv) as usize].clone();
            let entry = ball.verts[a as usize].clone();
            let exit_node = nodes.get(i + 2).copied().expect("paths end at vertices");
            let exit = ball.verts[exit_node as usize].clone();
            push_record(&mut records, (pi, rep, entry, exit));
            i += 2;
            continue;
        }
        // plain Cayley edge: penetrates when its letter lies in a parabolic
        let label = ball.adj[a as usize]
            .iter()
            .find(|&&(n, _, lab)| n == b && matches!(lab, HatEdge::Gen(_)))
            .map(|&(_, _, lab)| lab);
        if let Some(HatEdge::Gen(letter)) = label {
            if let Some(p) = ball
                .family
                .parabolics
                .iter()
                .find(|p| p.contains_letter(letter))
            {
                let entry = ball.verts[a as usize].clone();
                let exit = ball.verts[b as usize].clone();
                let rep = p.coset_rep(model, &entry);
                push_record(&mut records, (p.index, rep, entry, exit));
            }
        }
        i += 1;
    }
    if blocks_backtrack(&records) {
        *skipped += 1;
        return None;
    }
    let mut visits = BTreeMap::new();
    for (pi, rep, entry, exit) in records {
        let traversal = formula_distance(model, &entry, &exit);
        visits.insert((pi, rep), (entry, exit, traversal));
    }
    Some(Signature { visits })
}

/// Appends a record, merging with the previous one when it continues the
/// same coset visit.
fn push_record(records: &mut Vec<(usize, Elem, Elem, Elem)>, rec: (usize, Elem, Elem, Elem)) {
    if let Some(last) = records.last_mut() {
        if last.0 == rec.0 && last.1 == rec.1 && last.3 == rec.2 {
            last.3 = rec.3;
            return;
        }
    }
    records.push(rec);
}

/// Probes the BCP constant at one radius.
pub fn bcp_probe_at(
    metric: &mut WordMetric,
    family: &ParabolicFamily,
    quasi_constant: u32,
    radius: u32,
    caps: BcpCaps,
) -> Result<BcpRadiusReport> {
    if quasi_constant < 1 {
        return Err(Error::Config("quasi-geodesic constant must be >= 1".into()));
    }
    let model = metric.model().clone();
    if !model.has_length_formula() {
        return Err(Error::Config(
            "bcp probe needs a model with a closed-form word length".into(),
        ));
    }
    let ball = ConedOffBall::build(metric, family, radius)?;
    let dist_e = ball.hat_distances(0); // vertex 0 is the identity (length 0)
    debug_assert!(ball.verts[0] == model.identity());

    // signatures per endpoint, computed lazily
    let mut skipped = 0u64;
    let mut caps_hit = false;
    let mut sig_cache: Vec<Option<Vec<Signature>>> = vec![None; ball.verts.len()];

    let mut rows = Vec::new();
    let mut k1_all = 0u64;
    let mut k2_all = 0u64;
    let mut pair_id = 0u64;

    for p in &family.parabolics {
        // cosets of this parabolic meeting the ball
        let mut cosets: BTreeMap<Elem, Vec<u32>> = BTreeMap::new();
        for (vi, v) in ball.verts.iter().enumerate() {
            cosets
                .entry(p.coset_rep(&model, v))
                .or_default()
                .push(vi as u32);
        }
        for (rep, members) in cosets {
            let mut pairs = 0usize;
            'pairs: for (ai, &y1) in members.iter().enumerate() {
                for &y2 in &members[ai..] {
                    if pairs >= caps.max_pairs_per_coset {
                        caps_hit = true;
                        break 'pairs;
                    }
                    pairs += 1;
                    pair_id += 1;
                    for &y in [y1, y2].iter() {
                        if sig_cache[y as usize].is_none() {
                            let budget = dist_e[y as usize] * quasi_constant;
                            sig_cache[y as usize] = Some(signatures_to(
                                &ball,
                                &dist_e,
                                y,
                                budget,
                                caps,
                                &mut skipped,
                                &mut caps_hit,
                            ));
                        }
                    }
                    let sigs1 = sig_cache[y1 as usize].as_ref().unwrap().clone();
                    let sigs2 = sig_cache[y2 as usize].as_ref().unwrap();
                    let e1 = &ball.verts[y1 as usize];
                    let e2 = &ball.verts[y2 as usize];
                    let terminal = (p.index, rep.clone());
                    let mut row_k1 = 0u64;
                    let mut row_k2 = 0u64;
                    let mut cosets_pen = 0usize;
                    for s1 in &sigs1 {
                        for s2 in sigs2.iter() {
                            let (k1, k2, np) =
                                compare_signatures(&model, s1, s2, &terminal, e1, e2);
                            row_k1 = row_k1.max(k1);
                            row_k2 = row_k2.max(k2);
                            cosets_pen = cosets_pen.max(np);
                        }
                    }
                    k1_all = k1_all.max(row_k1);
                    k2_all = k2_all.max(row_k2);
                    rows.push(BcpRow {
                        pair_id,
                        d: formula_distance(&model, e1, e2),
                        d_hat: {
                            // both endpoints lie in one coset: two half-edges
                            if y1 == y2 {
                                0
                            } else {
                                2
                            }
                        },
                        cosets_penetrated: cosets_pen,
                        k_case1: row_k1,
                        k_case2: row_k2,
                        backtracked: false,
                    });
                }
            }
        }
    }
    Ok(BcpRadiusReport {
        radius,
        quasi_constant,
        pairs_checked: rows.len() as u64,
        k_case1: k1_all,
        k_case2: k2_all,
        k: k1_all.max(k2_all),
        backtracking_paths_skipped: skipped,
        signature_caps_hit: caps_hit,
        rows,
    })
}

/// Case-1/case-2 comparison of two signatures; returns the max coset count.
fn compare_signatures(
    model: &crate::group::GroupModel,
    s1: &Signature,
    s2: &Signature,
    terminal: &(usize, Elem),
    end1: &Elem,
    end2: &Elem,
) -> (u64, u64, usize) {
    let mut k1 = 0u64;
    let mut k2 = 0u64;
    // terminal coset: compare entries, defaulting to the endpoint itself
    let t1 = s1.visits.get(terminal).map(|v| &v.0).unwrap_or(end1);
    let t2 = s2.visits.get(terminal).map(|v| &v.0).unwrap_or(end2);
    k2 = k2.max(formula_distance(model, t1, t2));
    for (key, (entry1, exit1, trav1)) in &s1.visits {
        if key == terminal {
            continue;
        }
        match s2.visits.get(key) {
            Some((entry2, exit2, _)) => {
                k2 = k2.max(formula_distance(model, entry1, entry2));
                k2 = k2.max(formula_distance(model, exit1, exit2));
            }
            None => k1 = k1.max(*trav1),
        }
    }
    for (key, (_, _, trav2)) in &s2.visits {
        if key != terminal && !s1.visits.contains_key(key) {
            k1 = k1.max(*trav2);
        }
    }
    (k1, k2, s1.visits.len().max(s2.visits.len()))
}

/// Probes radii `r-2, r-1, r` and reports the trend.
pub fn bcp_probe(
    metric: &mut WordMetric,
    family: &ParabolicFamily,
    quasi_constant: u32,
    radius: u32,
    caps: BcpCaps,
) -> Result<BcpReport> {
    let lo = radius.saturating_sub(2).max(1);
    let mut trend = Vec::new();
    for r in lo..=radius {
        trend.push(bcp_probe_at(metric, family, quasi_constant, r, caps)?);
    }
    let k = trend.last().map(|t| t.k).unwrap_or(0);
    let stable = trend.windows(2).all(|w| w[1].k <= w[0].k);
    Ok(BcpReport { trend, k, stable })
}

#[cfg(test)]
mod tests {
    use super::super::resolve_family;
    use super::*;
    use crate::group::registry::resolve;

    #[test]
    fn free_group_with_cyclic_parabolic_has_k_zero() {
        let model = resolve("free:2#parabolic=a").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model);
        let rep = bcp_probe_at(&mut metric, &family, 1, 4, BcpCaps::default()).unwrap();
        assert_eq!(rep.k, 0, "unique geodesics in a tree");
    }

    #[test]
    fn z2_axis_case1_grows_with_radius() {
        // Z^2 relative to the x-axis fails BCP: the two L-shaped geodesics
        // around a square penetrate different rows, and the traversal in a
        // row grows with the radius.
        let model = resolve("zd:2#parabolic=x").unwrap();
        let family = resolve_family(&model).unwrap();
        let mut metric = WordMetric::new(model);
        let r3 = bcp_probe_at(&mut metric, &family, 1, 3, BcpCaps::default()).unwrap();
        let r5 = bcp_probe_at(&mut metric, &family, 1, 5, BcpCaps::default()).unwrap();
        assert!(r3.k >= 1);
        assert!(r5.k > r3.k, "K grows: {} -> {}", r3.k, r5.k);
    }
}
