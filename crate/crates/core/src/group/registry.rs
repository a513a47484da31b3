//! String-keyed registry of group models.
//!
//! Keys: `free:k`, `zd:d`, `heisenberg`, `bs:1:2`, `pgl2:p`,
//! `finite:<table-file>`, `product:<key>,<key>`, `freeprod:<key>,<key>`.
//! A `#parabolic=<spec>` suffix marks generator sublists `S_{H_i}`; spec
//! items are factor indices (free products) or generator labels, separated
//! by `+` for several subgroups, e.g. `freeprod:zd:2,free:1#parabolic=0`
//! or `free:2#parabolic=a`.

use super::{Elem, Family, FiniteTable, Generator, GroupModel};
use crate::error::{Error, Result};
use std::sync::Arc;

const FREE_LABELS: &[&str] = &[
    "a", "b", "c", "d", "f", "g", "h", "i", "j", "k", "l", "m", "n",
];
const VECTOR_LABELS: &[&str] = &["x", "y", "z", "w", "u", "v"];

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::BadKey {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Resolves a registry key into an immutable model.
pub fn resolve(key: &str) -> Result<Arc<GroupModel>> {
    let (base, parab) = match key.split_once('#') {
        Some((b, rest)) => {
            let spec = rest
                .strip_prefix("parabolic=")
                .ok_or_else(|| bad(key, "expected `#parabolic=...`"))?;
            (b, Some(spec))
        }
        None => (key, None),
    };
    let model = resolve_base(base)?;
    match parab {
        None => Ok(model),
        Some(spec) => attach_parabolics(model, base, spec),
    }
}

fn resolve_base(key: &str) -> Result<Arc<GroupModel>> {
    if key == "heisenberg" {
        let gens = vec![
            Generator {
                label: "a".into(),
                elem: Elem::Heisenberg(1, 0, 0),
            },
            Generator {
                label: "b".into(),
                elem: Elem::Heisenberg(0, 1, 0),
            },
        ];
        return GroupModel::assemble(key.into(), Family::Heisenberg, gens, vec![0, 0], vec![]);
    }
    if key == "bs:1:2" {
        let gens = vec![
            Generator {
                label: "a".into(),
                elem: Elem::Baumslag {
                    scale: 0,
                    num: 1,
                    exp: 0,
                },
            },
            Generator {
                label: "t".into(),
                elem: Elem::Baumslag {
                    scale: 1,
                    num: 0,
                    exp: 0,
                },
            },
        ];
        return GroupModel::assemble(key.into(), Family::Bs12, gens, vec![0, 0], vec![]);
    }
    if let Some(k) = key.strip_prefix("free:") {
        let rank: u8 = k.parse().map_err(|_| bad(key, "rank must be a number"))?;
        if rank == 0 || rank as usize > FREE_LABELS.len() {
            return Err(bad(key, format!("rank must be 1..={}", FREE_LABELS.len())));
        }
        let gens = (0..rank)
            .map(|i| Generator {
                label: FREE_LABELS[i as usize].into(),
                elem: Elem::Free(vec![i as i8 + 1]),
            })
            .collect();
        return GroupModel::assemble(
            key.into(),
            Family::Free { rank },
            gens,
            vec![0; rank as usize],
            vec![],
        );
    }
    if let Some(d) = key.strip_prefix("zd:") {
        let dim: u8 = d.parse().map_err(|_| bad(key, "dimension must be a number"))?;
        if dim == 0 || dim as usize > VECTOR_LABELS.len() {
            return Err(bad(key, format!("dimension must be 1..={}", VECTOR_LABELS.len())));
        }
        let gens = (0..dim)
            .map(|i| {
                let mut v = vec![0i64; dim as usize];
                v[i as usize] = 1;
                Generator {
                    label: VECTOR_LABELS[i as usize].into(),
                    elem: Elem::Vector(v),
                }
            })
            .collect();
        return GroupModel::assemble(
            key.into(),
            Family::Zd { dim },
            gens,
            vec![0; dim as usize],
            vec![],
        );
    }
    if let Some(p) = key.strip_prefix("pgl2:") {
        let p: u8 = p.parse().map_err(|_| bad(key, "p must be a number"))?;
        if ![2, 3, 5, 7].contains(&p) {
            return Err(bad(key, "p must be one of 2, 3, 5, 7"));
        }
        use super::laurent::{Laurent, PglMat};
        let t = PglMat::new(
            [
                Laurent::monomial(1, 1, p),
                Laurent::zero(),
                Laurent::zero(),
                Laurent::one(),
            ],
            p,
        );
        let upper = PglMat::new(
            [
                Laurent::one(),
                Laurent::one(),
                Laurent::zero(),
                Laurent::one(),
            ],
            p,
        );
        let lower = PglMat::new(
            [
                Laurent::one(),
                Laurent::zero(),
                Laurent::one(),
                Laurent::one(),
            ],
            p,
        );
        let gens = vec![
            Generator {
                label: "t".into(),
                elem: Elem::Pgl(t),
            },
            Generator {
                label: "a".into(),
                elem: Elem::Pgl(upper),
            },
            Generator {
                label: "b".into(),
                elem: Elem::Pgl(lower),
            },
        ];
        return GroupModel::assemble(key.into(), Family::Pgl2 { p }, gens, vec![0, 0, 0], vec![]);
    }
    if let Some(path) = key.strip_prefix("finite:") {
        let table = std::fs::read_to_string(path).map_err(|e| {
            Error::BadTable(format!("cannot read `{path}`: {e}"))
        })?;
        return finite_from_table(key, &table);
    }
    if let Some(rest) = key.strip_prefix("product:") {
        let (a, b) = split_pair(key, rest)?;
        return combine(key, a, b, false);
    }
    if let Some(rest) = key.strip_prefix("freeprod:") {
        let (a, b) = split_pair(key, rest)?;
        return combine(key, a, b, true);
    }
    Err(Error::UnknownKey(key.to_string()))
}

/// Splits `rest` at the unique comma position where both halves resolve.
fn split_pair(key: &str, rest: &str) -> Result<(Arc<GroupModel>, Arc<GroupModel>)> {
    for (i, _) in rest.match_indices(',') {
        let (l, r) = (&rest[..i], &rest[i + 1..]);
        if let (Ok(a), Ok(b)) = (resolve_base(l), resolve_base(r)) {
            return Ok((a, b));
        }
    }
    Err(bad(key, "expected two resolvable keys separated by a comma"))
}

fn combine(
    key: &str,
    a: Arc<GroupModel>,
    b: Arc<GroupModel>,
    free: bool,
) -> Result<Arc<GroupModel>> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut origin = Vec::new();
    let mut taken: std::collections::HashSet<String> = std::collections::HashSet::new();
    for (fi, factor) in [&a, &b].into_iter().enumerate() {
        for g in factor.generators() {
            let mut label = g.label.clone();
            let mut k = fi;
            while !taken.insert(label.clone()) {
                label = format!("{}{}", g.label, k);
                k += 2;
            }
            let elem = if free {
                Elem::Syllables(vec![(fi as u8, g.elem.clone())])
            } else {
                let (l, r) = if fi == 0 {
                    (g.elem.clone(), b.identity())
                } else {
                    (a.identity(), g.elem.clone())
                };
                Elem::Pair(Box::new(l), Box::new(r))
            };
            gens.push(Generator { label, elem });
            origin.push(fi as u8);
        }
    }
    let family = if free {
        Family::FreeProduct(a, b)
    } else {
        Family::Product(a, b)
    };
    GroupModel::assemble(key.into(), family, gens, origin, vec![])
}

fn attach_parabolics(base: Arc<GroupModel>, base_key: &str, spec: &str) -> Result<Arc<GroupModel>> {
    let mut subs: Vec<Vec<usize>> = Vec::new();
    for item in spec.split('+') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Ok(fi) = item.parse::<u8>() {
            if !matches!(base.family, Family::FreeProduct(..) | Family::Product(..)) {
                return Err(bad(base_key, "factor-index parabolic needs a product model"));
            }
            let sub: Vec<usize> = base
                .gen_origin
                .iter()
                .enumerate()
                .filter(|(_, &o)| o == fi)
                .map(|(i, _)| i)
                .collect();
            if sub.is_empty() {
                return Err(bad(base_key, format!("no factor with index {fi}")));
            }
            subs.push(sub);
        } else {
            let sub: Vec<usize> = item
                .split(',')
                .map(|lab| {
                    base.generators()
                        .iter()
                        .position(|g| g.label == lab.trim())
                        .ok_or_else(|| bad(base_key, format!("unknown generator `{lab}`")))
                })
                .collect::<Result<_>>()?;
            subs.push(sub);
        }
    }
    // rebuild with the same structure plus the parabolic marking
    let key = format!("{base_key}#parabolic={spec}");
    let gens = base.generators().to_vec();
    let origin = base.gen_origin.clone();
    let family = clone_family(&base.family);
    GroupModel::assemble(key, family, gens, origin, subs)
}

fn clone_family(f: &Family) -> Family {
    match f {
        Family::Free { rank } => Family::Free { rank: *rank },
        Family::Zd { dim } => Family::Zd { dim: *dim },
        Family::Heisenberg => Family::Heisenberg,
        Family::Bs12 => Family::Bs12,
        Family::Pgl2 { p } => Family::Pgl2 { p: *p },
        Family::Finite(t) => Family::Finite(Arc::clone(t)),
        Family::Product(a, b) => Family::Product(Arc::clone(a), Arc::clone(b)),
        Family::FreeProduct(a, b) => Family::FreeProduct(Arc::clone(a), Arc::clone(b)),
    }
}

/// Parses the finite-table format: first line `n`, then `n` rows of `n`
/// 1-based indices, then one line of 1-based generator indices.
pub fn finite_from_table(key: &str, text: &str) -> Result<Arc<GroupModel>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::BadTable("empty file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::BadTable("first line must be the order n".into()))?;
    if n == 0 || n > u16::MAX as usize {
        return Err(Error::BadTable("order out of range".into()));
    }
    let mut mul = vec![0u16; n * n];
    for i in 0..n {
        let row = lines
            .next()
            .ok_or_else(|| Error::BadTable(format!("missing row {}", i + 1)))?;
        let entries: Vec<usize> = row
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::BadTable(format!("bad entry `{t}`"))))
            .collect::<std::result::Result<_, _>>()?;
        if entries.len() != n {
            return Err(Error::BadTable(format!("row {} must have {n} entries", i + 1)));
        }
        for (j, &v) in entries.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::BadTable(format!("entry {v} out of 1..={n}")));
            }
            mul[i * n + j] = (v - 1) as u16;
        }
    }
    let gen_line = lines
        .next()
        .ok_or_else(|| Error::BadTable("missing generator line".into()))?;
    let gen_idx: Vec<u16> = gen_line
        .split_whitespace()
        .map(|t| {
            let v: usize = t
                .parse()
                .map_err(|_| Error::BadTable(format!("bad generator `{t}`")))?;
            if v == 0 || v > n {
                return Err(Error::BadTable(format!("generator {v} out of range")));
            }
            Ok((v - 1) as u16)
        })
        .collect::<Result<_>>()?;
    if gen_idx.is_empty() {
        return Err(Error::BadTable("need at least one generator".into()));
    }

    // identity: the unique e with e*x = x for all x
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| mul[e * n + x] == x as u16 && mul[x * n + e] == x as u16))
        .ok_or_else(|| Error::BadTable("table has no identity".into()))? as u16;
    let mut inv = vec![u16::MAX; n];
    for a in 0..n {
        let b = (0..n)
            .find(|&b| mul[a * n + b] == identity && mul[b * n + a] == identity)
            .ok_or_else(|| Error::BadTable(format!("element {} has no inverse", a + 1)))?;
        inv[a] = b as u16;
    }
    let table = Arc::new(FiniteTable {
        order: n as u16,
        mul,
        inv,
        identity,
    });
    let gens = gen_idx
        .iter()
        .enumerate()
        .map(|(i, &g)| Generator {
            label: format!("g{}", i + 1),
            elem: Elem::Finite(g),
        })
        .collect::<Vec<_>>();
    let k = gens.len();
    GroupModel::assemble(key.into(), Family::Finite(table), gens, vec![0; k], vec![])
}

/// Keys of the built-in models that need no parameters or files, used by
/// experiment sweeps and the catalog listing.
pub fn builtin_keys() -> Vec<&'static str> {
    vec![
        "bs:1:2",
        "free:1",
        "free:2",
        "free:3",
        "freeprod:zd:2,free:1#parabolic=0",
        "freeprod:zd:2,zd:2#parabolic=0+1",
        "heisenberg",
        "pgl2:2",
        "pgl2:3",
        "product:free:2,zd:1",
        "zd:1",
        "zd:2",
        "zd:3",
    ]
}

/// Key templates for the catalog listing.
pub fn key_templates() -> Vec<&'static str> {
    vec![
        "bs:1:2",
        "finite:<table-file>",
        "free:<k>",
        "freeprod:<key>,<key>",
        "heisenberg",
        "pgl2:<p>",
        "product:<key>,<key>",
        "zd:<d>",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_all_builtins() {
        for key in builtin_keys() {
            let m = resolve(key).unwrap();
            assert_eq!(m.multiply(&m.identity(), &m.identity()), m.identity(), "{key}");
        }
    }

    #[test]
    fn parabolic_by_label() {
        let m = resolve("free:2#parabolic=a").unwrap();
        assert_eq!(m.parabolics(), &[vec![0usize]]);
    }

    #[test]
    fn parabolic_by_factor() {
        let m = resolve("freeprod:zd:2,free:1#parabolic=0").unwrap();
        assert_eq!(m.parabolics(), &[vec![0usize, 1]]);
        assert_eq!(m.generators().len(), 3);
    }

    #[test]
    fn overlapping_parabolics_rejected() {
        assert!(matches!(
            resolve("freeprod:zd:2,free:1#parabolic=0+x"),
            Err(Error::OverlappingParabolics)
        ));
    }

    #[test]
    fn finite_table_parses() {
        // Z/3 with generator 2 (1-based): elements 1,2,3 ~ 0,1,2
        let text = "3\n1 2 3\n2 3 1\n3 1 2\n2\n";
        let m = finite_from_table("finite:test", text).unwrap();
        let g = &m.generators()[0].elem;
        let g2 = m.multiply(g, g);
        let g3 = m.multiply(&g2, g);
        assert_eq!(g3, m.identity());
        assert_ne!(g2, m.identity());
    }
}
