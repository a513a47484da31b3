//! Greedy minimal partition of the separating hyperplanes into
//! parallelism classes along a deterministic geodesic.

use super::hyperplane::Hyperplanes;
use super::median::DistanceMatrix;
use super::CubeComplex;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct MinimalPartition {
    /// Hyperplanes crossed by the chosen geodesic, in crossing order.
    pub crossing_order: Vec<u32>,
    /// Parallelism classes (pairwise non-crossing within each class).
    pub classes: Vec<Vec<u32>>,
    /// One hyperplane per class, pairwise crossing.
    pub witness: Vec<u32>,
}

/// Builds the greedy partition along the lexicographically least geodesic
/// (smallest neighbor index at each step): the first hyperplane crossed
/// seeds `P_1`, later ones join the first class they do not cross.
pub fn minimal_partition(
    cx: &CubeComplex,
    hp: &Hyperplanes,
    dm: &DistanceMatrix,
    x: u32,
    y: u32,
) -> Result<MinimalPartition> {
    if x == y {
        return Err(Error::Config("minimal_partition needs x != y".into()));
    }
    // lexicographically least geodesic by neighbor index at each step
    let mut crossing_order = Vec::new();
    let mut cur = x;
    while cur != y {
        let (next, eid) = cx.adj[cur as usize]
            .iter()
            .copied()
            .find(|&(w, _)| dm.d(w, y) + 1 == dm.d(cur, y))
            .expect("connected graph has a descending neighbor");
        crossing_order.push(hp.edge_class[eid as usize]);
        cur = next;
    }
    // Sageev: a geodesic crosses each separating hyperplane exactly once
    let mut sorted = crossing_order.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != crossing_order.len() {
        return Err(Error::NotCat0(
            "geodesic crosses a hyperplane twice".into(),
        ));
    }

    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut assigned = vec![false; crossing_order.len()];
    loop {
        let mut class: Vec<u32> = Vec::new();
        for (i, &h) in crossing_order.iter().enumerate() {
            if assigned[i] {
                continue;
            }
            if class.iter().all(|&k| !hp.cross(h, k)) {
                class.push(h);
                assigned[i] = true;
            }
        }
        if class.is_empty() {
            break;
        }
        classes.push(class);
    }

    let witness = find_crossing_transversal(hp, &classes).ok_or_else(|| {
        Error::NotCat0("no pairwise-crossing transversal through the classes".into())
    })?;
    Ok(MinimalPartition {
        crossing_order,
        classes,
        witness,
    })
}

/// Searches for one hyperplane per class such that the chosen family is
/// pairwise crossing.
fn find_crossing_transversal(hp: &Hyperplanes, classes: &[Vec<u32>]) -> Option<Vec<u32>> {
    fn rec(hp: &Hyperplanes, classes: &[Vec<u32>], chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == classes.len() {
            return true;
        }
        let idx = chosen.len();
        for &h in &classes[idx] {
            if chosen.iter().all(|&k| hp.cross(h, k)) {
                chosen.push(h);
                if rec(hp, classes, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    rec(hp, classes, &mut chosen).then_some(chosen)
}

#[cfg(test)]
mod tests {
    use super::super::hyperplane::{compute_hyperplanes, dimension_estimate};
    use super::super::resolve_complex;
    use super::*;

    #[test]
    fn tree_partition_is_one_class() {
        let cx = resolve_complex("tree:3:3").unwrap();
        let hp = compute_hyperplanes(&cx).unwrap();
        let dm = DistanceMatrix::build(&cx).unwrap();
        let p = minimal_partition(&cx, &hp, &dm, 1, 20).unwrap();
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.witness.len(), 1);
    }

    #[test]
    fn grid_diagonal_partition_is_two_classes() {
        for k in 2..=4u32 {
            let side = k + 1;
            let cx = resolve_complex(&format!("grid:2:{side}")).unwrap();
            let hp = compute_hyperplanes(&cx).unwrap();
            let dm = DistanceMatrix::build(&cx).unwrap();
            // (0,0) -> (k,k)
            let y = k + side * k;
            let p = minimal_partition(&cx, &hp, &dm, 0, y).unwrap();
            assert_eq!(p.classes.len(), 2, "k={k}");
            assert!(hp.cross(p.witness[0], p.witness[1]));
        }
    }

    #[test]
    fn ncube_corners_give_singleton_classes() {
        for n in 2..=4u32 {
            let cx = resolve_complex(&format!("cube:{n}")).unwrap();
            let hp = compute_hyperplanes(&cx).unwrap();
            let dm = DistanceMatrix::build(&cx).unwrap();
            let far = (1u32 << n) - 1;
            let p = minimal_partition(&cx, &hp, &dm, 0, far).unwrap();
            assert_eq!(p.classes.len(), n as usize);
            assert!(p.classes.iter().all(|c| c.len() == 1));
            // equality with the dimension estimate
            let dim = dimension_estimate(&hp, 1_000_000);
            assert_eq!(p.classes.len() as u32, dim.dimension);
        }
    }
}
