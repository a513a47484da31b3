//! Path decomposition into maximal coset subwords (read right to left the
//! decomposition is the same set of runs) and penetration records.

use super::{formula_distance, Parabolic, ParabolicFamily};
use crate::error::Result;
use crate::group::{Elem, GroupModel, Letter};
use serde::Serialize;

/// Piece of a decomposed path: either letters outside every parabolic, or
/// a maximal run of letters from one `S_{H_i}`.
#[derive(Debug, Clone)]
pub enum PathPiece {
    Residual {
        letters: Vec<Letter>,
    },
    CosetSubword {
        parabolic: usize,
        letters: Vec<Letter>,
        /// Vertex where the run starts.
        entry: Elem,
        /// Vertex where the run ends.
        exit: Elem,
        coset_rep: Elem,
    },
}

#[derive(Debug, Clone)]
pub struct PathDecomposition {
    pub start: Elem,
    pub end: Elem,
    pub pieces: Vec<PathPiece>,
}

impl PathDecomposition {
    /// Concatenating the pieces reproduces the original word.
    pub fn reassemble(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match p {
                PathPiece::Residual { letters } => out.extend_from_slice(letters),
                PathPiece::CosetSubword { letters, .. } => out.extend_from_slice(letters),
            }
        }
        out
    }
}

fn letter_parabolic(family: &ParabolicFamily, l: Letter) -> Option<usize> {
    family
        .parabolics
        .iter()
        .position(|p| p.contains_letter(l))
}

/// Identifies maximal `S_{H_i}`-subwords of a word walked from `start`.
pub fn decompose_path(
    model: &GroupModel,
    family: &ParabolicFamily,
    start: &Elem,
    letters: &[Letter],
) -> PathDecomposition {
    let mut pieces: Vec<PathPiece> = Vec::new();
    let mut cur = start.clone();
    let mut i = 0;
    while i < letters.len() {
        let who = letter_parabolic(family, letters[i]);
        let mut j = i;
        let entry = cur.clone();
        while j < letters.len() && letter_parabolic(family, letters[j]) == who {
            cur = model.multiply(&cur, &model.letter_elem(letters[j]));
            j += 1;
        }
        let run = letters[i..j].to_vec();
        match who {
            None => pieces.push(PathPiece::Residual { letters: run }),
            Some(pi) => {
                let p = &family.parabolics[pi];
                pieces.push(PathPiece::CosetSubword {
                    parabolic: pi,
                    letters: run,
                    entry: entry.clone(),
                    exit: cur.clone(),
                    coset_rep: p.coset_rep(model, &entry),
                });
            }
        }
        i = j;
    }
    PathDecomposition {
        start: start.clone(),
        end: cur,
        pieces,
    }
}

/// One coset visit of a path.
#[derive(Debug, Clone, Serialize)]
pub struct PenetrationRecord {
    pub parabolic: usize,
    #[serde(skip)]
    pub coset_rep: Elem,
    #[serde(skip)]
    pub entry: Elem,
    #[serde(skip)]
    pub exit: Elem,
    /// `d(entry, exit)` in the word metric.
    pub gamma_distance: u64,
}

/// Penetration records of a decomposed path in order, plus the
/// backtracking flag (a coset revisited after being left).
pub fn penetration_points(
    model: &GroupModel,
    decomp: &PathDecomposition,
) -> Result<(Vec<PenetrationRecord>, bool)> {
    let mut records: Vec<PenetrationRecord> = Vec::new();
    for piece in &decomp.pieces {
        if let PathPiece::CosetSubword {
            parabolic,
            entry,
            exit,
            coset_rep,
            ..
        } = piece
        {
            records.push(PenetrationRecord {
                parabolic: *parabolic,
                coset_rep: coset_rep.clone(),
                entry: entry.clone(),
                exit: exit.clone(),
                gamma_distance: formula_distance(model, entry, exit),
            });
        }
    }
    let mut backtracking = false;
    for (i, r) in records.iter().enumerate() {
        for s in &records[i + 1..] {
            if r.parabolic == s.parabolic && r.coset_rep == s.coset_rep {
                backtracking = true;
            }
        }
    }
    Ok((records, backtracking))
}

/// Coset-meeting marks of a vertex path: per parabolic, maximal blocks of
/// consecutive vertices lying in one coset (transient single-vertex
/// meetings included). These are the points the triple-intersection
/// construction collects.
pub fn meeting_blocks(
    model: &GroupModel,
    family: &ParabolicFamily,
    vertices: &[Elem],
) -> Vec<(usize, Elem, Elem, Elem)> {
    // (parabolic, coset_rep, entry, exit)
    let mut out = Vec::new();
    for p in &family.parabolics {
        let mut i = 0;
        while i < vertices.len() {
            let rep = p.coset_rep(model, &vertices[i]);
            let mut j = i;
            while j + 1 < vertices.len() && p.coset_rep(model, &vertices[j + 1]) == rep {
                j += 1;
            }
            out.push((p.index, rep, vertices[i].clone(), vertices[j].clone()));
            i = j + 1;
        }
    }
    out
}

/// Whether the blocks of one parabolic revisit a coset non-contiguously.
pub fn blocks_backtrack(blocks: &[(usize, Elem, Elem, Elem)]) -> bool {
    for (i, b) in blocks.iter().enumerate() {
        for c in &blocks[i + 1..] {
            if b.0 == c.0 && b.1 == c.1 {
                return true;
            }
        }
    }
    false
}

pub(crate) fn _parabolic_of<'a>(family: &'a ParabolicFamily, idx: usize) -> &'a Parabolic {
    &family.parabolics[idx]
}

#[cfg(test)]
mod tests {
    use super::super::resolve_family;
    use super::*;
    use crate::group::registry::resolve;

    #[test]
    fn single_subword_for_parabolic_word() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let letters = model.parse_letters("x y x^-1").unwrap();
        let d = decompose_path(&model, &family, &model.identity(), &letters);
        assert_eq!(d.pieces.len(), 1);
        assert!(matches!(&d.pieces[0], PathPiece::CosetSubword { .. }));
        assert_eq!(d.reassemble(), letters);
    }

    #[test]
    fn no_parabolic_letters_no_subwords() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let letters = model.parse_letters("a a a^-1").unwrap();
        let d = decompose_path(&model, &family, &model.identity(), &letters);
        assert_eq!(d.pieces.len(), 1);
        assert!(matches!(&d.pieces[0], PathPiece::Residual { .. }));
    }

    #[test]
    fn sandwiched_subword_is_maximal() {
        // w = a x y x a: one coset subword "x y x"
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let letters = model.parse_letters("a x y x a").unwrap();
        let d = decompose_path(&model, &family, &model.identity(), &letters);
        assert_eq!(d.pieces.len(), 3);
        let (recs, backtrack) = penetration_points(&model, &d).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(!backtrack);
        assert_eq!(recs[0].gamma_distance, 3);
        assert_eq!(recs[0].entry, model.parse_word("a").unwrap());
        assert_eq!(recs[0].exit, model.parse_word("a x y x").unwrap());
    }

    #[test]
    fn leave_and_reenter_sets_backtracking() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        // x (coset eH), a a^-1 (leaves and comes back), x again: same coset
        let letters = model.parse_letters("x a a^-1 x").unwrap();
        let d = decompose_path(&model, &family, &model.identity(), &letters);
        let (recs, backtrack) = penetration_points(&model, &d).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(backtrack);
    }

    #[test]
    fn normal_form_word_penetrates_in_syllable_order() {
        let model = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        let family = resolve_family(&model).unwrap();
        let letters = model.parse_letters("x x a y a x").unwrap();
        let d = decompose_path(&model, &family, &model.identity(), &letters);
        let (recs, backtrack) = penetration_points(&model, &d).unwrap();
        assert!(!backtrack);
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].gamma_distance, 2);
        assert_eq!(recs[1].gamma_distance, 1);
        assert_eq!(recs[2].gamma_distance, 1);
    }
}
