//! Group models with exact arithmetic and decidable equality.
//!
//! Every model carries a canonical form per element; two elements are equal
//! iff their canonical forms are identical, so `Elem` derives `Eq + Ord +
//! Hash` and all higher layers treat elements as opaque keys.

pub mod growth;
pub mod laurent;
pub mod metric;
pub mod registry;

use crate::error::{Error, Result};
use laurent::PglMat;
use std::fmt::Write as _;
use std::sync::Arc;

/// Canonical form of a group element. The variant must match the model's
/// family; all operations go through [`GroupModel`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Elem {
    /// Freely reduced word; letter `k > 0` is generator `k-1`, `k < 0` its inverse.
    Free(Vec<i8>),
    /// Point of `Z^d`.
    Vector(Vec<i64>),
    /// Upper unitriangular integer matrix `(x, y, z)`.
    Heisenberg(i64, i64, i64),
    /// Affine normal form of `BS(1,2)`: the map `x -> 2^scale * x + num / 2^exp`
    /// with `num` odd or `(num, exp) = (0, 0)`.
    Baumslag { scale: i32, num: i64, exp: u32 },
    /// Normalized matrix class in `PGL_2(F_p[t,t^-1])`.
    Pgl(PglMat),
    /// Index into a finite Cayley table.
    Finite(u16),
    /// Direct product pair.
    Pair(Box<Elem>, Box<Elem>),
    /// Free product normal form: alternating syllables `(factor, element)`,
    /// each a non-identity element of its factor.
    Syllables(Vec<(u8, Elem)>),
}

/// One named generator of a model.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub elem: Elem,
}

/// Letter of a word over `S ∪ S^{-1}`: base generator index plus sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

/// Finite group given by its Cayley table (0-based internally).
#[derive(Debug)]
pub struct FiniteTable {
    pub order: u16,
    /// `mul[a * order + b]`
    pub mul: Vec<u16>,
    pub inv: Vec<u16>,
    pub identity: u16,
}

#[derive(Debug)]
pub(crate) enum Family {
    Free { rank: u8 },
    Zd { dim: u8 },
    Heisenberg,
    Bs12,
    Pgl2 { p: u8 },
    Finite(Arc<FiniteTable>),
    Product(Arc<GroupModel>, Arc<GroupModel>),
    FreeProduct(Arc<GroupModel>, Arc<GroupModel>),
}

/// A finitely generated group with a marked generating set.
///
/// Immutable after construction; share via `Arc`.
#[derive(Debug)]
pub struct GroupModel {
    key: String,
    pub(crate) family: Family,
    gens: Vec<Generator>,
    /// `S ∪ S^{-1}` with the originating letter, in deterministic order.
    sym_gens: Vec<(Elem, Letter)>,
    /// Factor index each generator came from (products only; else zeros).
    pub(crate) gen_origin: Vec<u8>,
    /// Generator-index sublists `S_{H_i}`, pairwise disjoint.
    parabolics: Vec<Vec<usize>>,
}

impl GroupModel {
    pub(crate) fn assemble(
        key: String,
        family: Family,
        gens: Vec<Generator>,
        gen_origin: Vec<u8>,
        parabolics: Vec<Vec<usize>>,
    ) -> Result<Arc<GroupModel>> {
        let mut seen = std::collections::HashSet::new();
        for sub in &parabolics {
            for &i in sub {
                if !seen.insert(i) {
                    return Err(Error::OverlappingParabolics);
                }
            }
        }
        let mut model = GroupModel {
            key,
            family,
            gens,
            sym_gens: Vec::new(),
            gen_origin,
            parabolics,
        };
        let mut sym = Vec::new();
        for (i, g) in model.gens.iter().enumerate() {
            sym.push((
                g.elem.clone(),
                Letter {
                    gen: i as u8,
                    inverse: false,
                },
            ));
            let inv = model.invert(&g.elem);
            if inv != g.elem {
                sym.push((
                    inv,
                    Letter {
                        gen: i as u8,
                        inverse: true,
                    },
                ));
            }
        }
        model.sym_gens = sym;
        Ok(Arc::new(model))
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Involution closure `S ∪ S^{-1}` in the fixed enumeration order.
    pub fn symmetric_generators(&self) -> &[(Elem, Letter)] {
        &self.sym_gens
    }

    pub fn parabolics(&self) -> &[Vec<usize>] {
        &self.parabolics
    }

    pub fn identity(&self) -> Elem {
        match &self.family {
            Family::Free { .. } => Elem::Free(Vec::new()),
            Family::Zd { dim } => Elem::Vector(vec![0; *dim as usize]),
            Family::Heisenberg => Elem::Heisenberg(0, 0, 0),
            Family::Bs12 => Elem::Baumslag {
                scale: 0,
                num: 0,
                exp: 0,
            },
            Family::Pgl2 { .. } => Elem::Pgl(PglMat::identity()),
            Family::Finite(t) => Elem::Finite(t.identity),
            Family::Product(a, b) => {
                Elem::Pair(Box::new(a.identity()), Box::new(b.identity()))
            }
            Family::FreeProduct(..) => Elem::Syllables(Vec::new()),
        }
    }

    pub fn is_identity(&self, e: &Elem) -> bool {
        *e == self.identity()
    }

    pub fn multiply(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.family, a, b) {
            (Family::Free { .. }, Elem::Free(u), Elem::Free(v)) => {
                let mut out = u.clone();
                for &l in v {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Elem::Free(out)
            }
            (Family::Zd { .. }, Elem::Vector(u), Elem::Vector(v)) => {
                Elem::Vector(u.iter().zip(v).map(|(x, y)| x + y).collect())
            }
            (Family::Heisenberg, Elem::Heisenberg(x1, y1, z1), Elem::Heisenberg(x2, y2, z2)) => {
                Elem::Heisenberg(x1 + x2, y1 + y2, z1 + z2 + x1 * y2)
            }
            (Family::Bs12, a @ Elem::Baumslag { .. }, b @ Elem::Baumslag { .. }) => {
                bs_multiply(a, b)
            }
            (Family::Pgl2 { p }, Elem::Pgl(m), Elem::Pgl(n)) => Elem::Pgl(m.mul(n, *p)),
            (Family::Finite(t), Elem::Finite(x), Elem::Finite(y)) => {
                Elem::Finite(t.mul[*x as usize * t.order as usize + *y as usize])
            }
            (Family::Product(fa, fb), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => Elem::Pair(
                Box::new(fa.multiply(a1, b1)),
                Box::new(fb.multiply(a2, b2)),
            ),
            (Family::FreeProduct(fa, fb), Elem::Syllables(u), Elem::Syllables(v)) => {
                let factor = |f: u8| -> &GroupModel {
                    if f == 0 {
                        fa
                    } else {
                        fb
                    }
                };
                let mut out: Vec<(u8, Elem)> = u.clone();
                for (f, s) in v {
                    match out.last() {
                        Some((g, _)) if g == f => {
                            let (_, top) = out.pop().unwrap();
                            let m = factor(*f);
                            let merged = m.multiply(&top, s);
                            if !m.is_identity(&merged) {
                                out.push((*f, merged));
                            }
                        }
                        _ => out.push((*f, s.clone())),
                    }
                }
                Elem::Syllables(out)
            }
            _ => panic!("element does not belong to model `{}`", self.key),
        }
    }

    pub fn invert(&self, a: &Elem) -> Elem {
        match (&self.family, a) {
            (Family::Free { .. }, Elem::Free(u)) => {
                Elem::Free(u.iter().rev().map(|&l| -l).collect())
            }
            (Family::Zd { .. }, Elem::Vector(u)) => Elem::Vector(u.iter().map(|x| -x).collect()),
            (Family::Heisenberg, Elem::Heisenberg(x, y, z)) => {
                Elem::Heisenberg(-x, -y, -z + x * y)
            }
            (Family::Bs12, &Elem::Baumslag { scale, num, exp }) => {
                // inverse of x -> 2^k x + r is x -> 2^-k x - r/2^k
                if scale >= 0 {
                    bs_normalize(-scale, -num, exp + scale.unsigned_abs())
                } else {
                    let shifted = (-i128::from(num)) << scale.unsigned_abs().min(96);
                    bs_normalize(
                        -scale,
                        i64::try_from(shifted).expect("BS(1,2) coordinate overflow at desk scale"),
                        exp,
                    )
                }
            }
            (Family::Pgl2 { p }, Elem::Pgl(m)) => Elem::Pgl(m.inverse(*p)),
            (Family::Finite(t), Elem::Finite(x)) => Elem::Finite(t.inv[*x as usize]),
            (Family::Product(fa, fb), Elem::Pair(x, y)) => {
                Elem::Pair(Box::new(fa.invert(x)), Box::new(fb.invert(y)))
            }
            (Family::FreeProduct(fa, fb), Elem::Syllables(u)) => Elem::Syllables(
                u.iter()
                    .rev()
                    .map(|(f, s)| {
                        let m: &GroupModel = if *f == 0 { fa } else { fb };
                        (*f, m.invert(s))
                    })
                    .collect(),
            ),
            _ => panic!("element does not belong to model `{}`", self.key),
        }
    }

    /// Re-normalizes a possibly non-canonical form. Canonicalization is
    /// idempotent and a no-op on elements produced by model operations.
    pub fn canonicalize(&self, a: &Elem) -> Elem {
        match (&self.family, a) {
            (Family::Free { .. }, Elem::Free(u)) => {
                let mut out: Vec<i8> = Vec::with_capacity(u.len());
                for &l in u {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Elem::Free(out)
            }
            (Family::Bs12, Elem::Baumslag { scale, num, exp }) => bs_normalize(*scale, *num, *exp),
            (Family::Pgl2 { p }, Elem::Pgl(m)) => Elem::Pgl(m.normalized(*p)),
            (Family::Product(fa, fb), Elem::Pair(x, y)) => Elem::Pair(
                Box::new(fa.canonicalize(x)),
                Box::new(fb.canonicalize(y)),
            ),
            (Family::FreeProduct(fa, fb), Elem::Syllables(u)) => {
                let mut acc = Elem::Syllables(Vec::new());
                for (f, s) in u {
                    let m: &GroupModel = if *f == 0 { fa } else { fb };
                    let s = m.canonicalize(s);
                    if !m.is_identity(&s) {
                        acc = self.multiply(&acc, &Elem::Syllables(vec![(*f, s)]));
                    }
                }
                acc
            }
            _ => a.clone(),
        }
    }

    /// Exact word length when the model admits a closed form
    /// (free groups, `Z^d` and free products of such).
    pub fn length_formula(&self, e: &Elem) -> Option<u64> {
        match (&self.family, e) {
            (Family::Free { .. }, Elem::Free(u)) => Some(u.len() as u64),
            (Family::Zd { .. }, Elem::Vector(u)) => Some(u.iter().map(|x| x.unsigned_abs()).sum()),
            (Family::FreeProduct(fa, fb), Elem::Syllables(u)) => {
                let mut total = 0u64;
                for (f, s) in u {
                    let m: &GroupModel = if *f == 0 { fa } else { fb };
                    total += m.length_formula(s)?;
                }
                Some(total)
            }
            _ => None,
        }
    }

    /// Whether `length_formula` is total on this model.
    pub fn has_length_formula(&self) -> bool {
        match &self.family {
            Family::Free { .. } | Family::Zd { .. } => true,
            Family::FreeProduct(a, b) => a.has_length_formula() && b.has_length_formula(),
            _ => false,
        }
    }

    /// Parses a whitespace-separated word such as `a b^-2 t` into an element.
    pub fn parse_word(&self, word: &str) -> Result<Elem> {
        let mut acc = self.identity();
        for letter in self.parse_letters(word)? {
            acc = self.multiply(&acc, &self.letter_elem(letter));
        }
        Ok(acc)
    }

    /// Parses a word into explicit letters of `S ∪ S^{-1}` (powers expanded).
    pub fn parse_letters(&self, word: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in word.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (label, exp) = match tok.split_once('^') {
                Some((l, e)) => (
                    l,
                    e.parse::<i32>().map_err(|_| Error::BadWord {
                        word: word.to_string(),
                        reason: format!("bad exponent in `{tok}`"),
                    })?,
                ),
                None => (tok, 1),
            };
            let gen = self
                .gens
                .iter()
                .position(|g| g.label == label)
                .ok_or_else(|| Error::BadWord {
                    word: word.to_string(),
                    reason: format!("unknown generator `{label}`"),
                })?;
            for _ in 0..exp.unsigned_abs() {
                out.push(Letter {
                    gen: gen as u8,
                    inverse: exp < 0,
                });
            }
        }
        Ok(out)
    }

    pub fn letter_elem(&self, l: Letter) -> Elem {
        let base = &self.gens[l.gen as usize].elem;
        if l.inverse {
            self.invert(base)
        } else {
            base.clone()
        }
    }

    pub fn letter_label(&self, l: Letter) -> String {
        let lab = &self.gens[l.gen as usize].label;
        if l.inverse {
            format!("{lab}^-1")
        } else {
            lab.clone()
        }
    }

    /// Human-readable canonical form, used in reports and witnesses.
    pub fn render(&self, e: &Elem) -> String {
        match (&self.family, e) {
            (Family::Free { .. }, Elem::Free(u)) => {
                if u.is_empty() {
                    return "e".to_string();
                }
                u.iter()
                    .map(|&l| {
                        let g = &self.gens[(l.unsigned_abs() - 1) as usize].label;
                        if l < 0 {
                            format!("{g}^-1")
                        } else {
                            g.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            }
            (Family::Zd { .. }, Elem::Vector(u)) => {
                let mut s = String::from("(");
                for (i, x) in u.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{x}");
                }
                s.push(')');
                s
            }
            (Family::Heisenberg, Elem::Heisenberg(x, y, z)) => format!("(x={x},y={y},z={z})"),
            (Family::Bs12, Elem::Baumslag { scale, num, exp }) => {
                format!("(2^{scale}·x + {num}/2^{exp})")
            }
            (Family::Pgl2 { .. }, Elem::Pgl(m)) => m.render(),
            (Family::Finite(_), Elem::Finite(i)) => format!("#{i}"),
            (Family::Product(fa, fb), Elem::Pair(x, y)) => {
                format!("({}, {})", fa.render(x), fb.render(y))
            }
            (Family::FreeProduct(fa, fb), Elem::Syllables(u)) => {
                if u.is_empty() {
                    return "e".to_string();
                }
                u.iter()
                    .map(|(f, s)| {
                        let m: &GroupModel = if *f == 0 { fa } else { fb };
                        format!("[{}]", m.render(s))
                    })
                    .collect::<Vec<_>>()
                    .join("·")
            }
            _ => format!("{e:?}"),
        }
    }
}

/// Normal form for `BS(1,2)` as the affine map `x -> 2^scale x + num/2^exp`.
fn bs_normalize(scale: i32, mut num: i64, mut exp: u32) -> Elem {
    if num == 0 {
        return Elem::Baumslag { scale, num: 0, exp: 0 };
    }
    while num % 2 == 0 && exp > 0 {
        num /= 2;
        exp -= 1;
    }
    Elem::Baumslag { scale, num, exp }
}

fn bs_multiply(a: &Elem, b: &Elem) -> Elem {
    let (
        &Elem::Baumslag { scale: k1, num: n1, exp: e1 },
        &Elem::Baumslag { scale: k2, num: n2, exp: e2 },
    ) = (a, b)
    else {
        unreachable!()
    };
    // composite translation part: 2^{k1} * n2/2^{e2} + n1/2^{e1}
    // write both over 2^{e}: e = max(e2', e1) with e2' = e2 - k1 (clamped via shifts)
    let (mut n2s, mut e2s) = (i128::from(n2), i64::from(e2) - i64::from(k1));
    if e2s < 0 {
        n2s <<= (-e2s).min(96) as u32;
        e2s = 0;
    }
    let (mut n1s, e1s) = (i128::from(n1), i64::from(e1));
    let e = e1s.max(e2s);
    n1s <<= (e - e1s).min(96) as u32;
    n2s <<= (e - e2s).min(96) as u32;
    let mut num = n1s + n2s;
    let mut exp = e as u32;
    if num == 0 {
        exp = 0;
    }
    while num % 2 == 0 && exp > 0 {
        num /= 2;
        exp -= 1;
    }
    Elem::Baumslag {
        scale: k1 + k2,
        num: i64::try_from(num).expect("BS(1,2) coordinate overflow at desk scale"),
        exp,
    }
}

#[cfg(test)]
mod tests {
    use super::registry::resolve;
    use super::*;

    #[test]
    fn bs_relation_holds() {
        // t a t^-1 = a^2
        let m = resolve("bs:1:2").unwrap();
        let a = m.parse_word("a").unwrap();
        let lhs = m.parse_word("t a t^-1").unwrap();
        let a2 = m.multiply(&a, &a);
        assert_eq!(lhs, a2);
    }

    #[test]
    fn bs_inverse_roundtrip() {
        let m = resolve("bs:1:2").unwrap();
        for w in ["a", "t", "t a", "a t^-1 a", "t^-2 a^3 t"] {
            let g = m.parse_word(w).unwrap();
            assert_eq!(m.multiply(&g, &m.invert(&g)), m.identity(), "word {w}");
            assert_eq!(m.multiply(&m.invert(&g), &g), m.identity(), "word {w}");
        }
    }

    #[test]
    fn heisenberg_commutator_is_central() {
        let m = resolve("heisenberg").unwrap();
        let a = m.parse_word("a").unwrap();
        let b = m.parse_word("b").unwrap();
        let comm = m.parse_word("a b a^-1 b^-1").unwrap();
        assert_eq!(comm, Elem::Heisenberg(0, 0, 1));
        // central: commutes with both generators
        assert_eq!(m.multiply(&comm, &a), m.multiply(&a, &comm));
        assert_eq!(m.multiply(&comm, &b), m.multiply(&b, &comm));
    }

    #[test]
    fn free_product_normal_form_multiplication() {
        let m = resolve("freeprod:zd:2,free:1").unwrap();
        // x from Z^2 factor, a from Z factor
        let g = m.parse_word("x a x").unwrap();
        let h = m.parse_word("x^-1 a^-1 x^-1 y").unwrap();
        let prod = m.multiply(&g, &h);
        assert_eq!(prod, m.parse_word("y").unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for key in ["free:2", "zd:2", "heisenberg", "bs:1:2", "pgl2:2", "freeprod:zd:2,free:1"] {
            let m = resolve(key).unwrap();
            for w in ["e", "a", "x y x^-1"] {
                let Ok(g) = m.parse_word(w) else { continue };
                let c = m.canonicalize(&g);
                assert_eq!(c, m.canonicalize(&c), "{key} {w}");
                assert_eq!(c, g, "{key} {w}");
            }
        }
    }
}
