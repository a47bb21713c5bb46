//! Built-in groups and representations with explicit matrices.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GROUP_ORDER_CAP, PERMUTATION_CAP};
use crate::linalg::{self, c, CMat, ONE, ZERO};
use crate::rep::{Representation, TwoCocycle};

pub const KEYS: &[&str] = &["C2", "V4", "S3", "Q8", "D4", "A4", "S4", "SL23", "S3xS3"];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: String,
    pub group: Arc<FiniteGroup>,
    pub reps: Vec<(String, Representation)>,
}

impl CatalogEntry {
    pub fn rep(&self, name: &str) -> Option<&Representation> {
        self.reps.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn rep_names(&self) -> Vec<&str> {
        self.reps.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Parse `catalog:KEY:REP` (the `catalog:` prefix is optional).
pub fn resolve(key: &str) -> Result<(CatalogEntry, Representation)> {
    let rest = key.strip_prefix("catalog:").unwrap_or(key);
    let (key, name) = rest
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("expected catalog:KEY:REP, got {key:?}")))?;
    let entry = entry(key)?;
    let rep = entry.rep(name).cloned().ok_or_else(|| {
        Error::InvalidInput(format!(
            "catalog entry {key} has no representation {name:?}"
        ))
    })?;
    Ok((entry, rep))
}

pub fn entry(key: &str) -> Result<CatalogEntry> {
    let (group, reps) = match key {
        "C2" => {
            let g = Arc::new(
                FiniteGroup::from_permutations(&[vec![1, 0]], PERMUTATION_CAP)?.with_name("C2"),
            );
            let sign = scalar_rep(&g, |x| if x == g.identity() { ONE } else { -ONE })?;
            (
                g.clone(),
                vec![
                    ("triv", Representation::trivial(g.clone(), 1)),
                    ("sign", sign),
                    ("regular", Representation::regular(g)),
                ],
            )
        }
        "V4" => {
            let c2 = FiniteGroup::from_permutations(&[vec![1, 0]], PERMUTATION_CAP)?;
            let g =
                Arc::new(FiniteGroup::direct_product(&c2, &c2, GROUP_ORDER_CAP)?.with_name("V4"));
            // (a, b) ↦ σx^a σz^b, with σz^{b1} σx^{a2} = (−1)^{b1 a2} σx^{a2} σz^{b1}.
            let sx = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
            let sz = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
            let pow = |m: &CMat, k: usize| {
                if k == 0 {
                    linalg::identity(2)
                } else {
                    m.clone()
                }
            };
            let bits = |x: usize| (x / 2, x % 2);
            let mats = (0..4).map(|x| {
                let (a, b) = bits(x);
                pow(&sx, a) * pow(&sz, b)
            });
            let values = (0..16)
                .map(|i| {
                    let (_, b1) = bits(i / 4);
                    let (a2, _) = bits(i % 4);
                    if b1 * a2 == 1 {
                        -ONE
                    } else {
                        ONE
                    }
                })
                .collect();
            let pauli =
                Representation::new(g.clone(), mats.collect(), Some(TwoCocycle::new(4, values)?))?;
            (
                g.clone(),
                vec![("triv", Representation::trivial(g, 1)), ("pauli", pauli)],
            )
        }
        "S3" => {
            let w = c(-0.5, 3f64.sqrt() / 2.0);
            let r = diag(&[w, w.conj()]);
            let s = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
            let (g, std) = matrix_group(&[r, s], "S3")?;
            let triv = Representation::trivial(g.clone(), 1);
            let sign = scalar_rep(&g, |x| std.matrix(x).determinant())?;
            let triv_plus_sign = Representation::direct_sum(&[triv.clone(), sign.clone()])?;
            let all = Representation::direct_sum(&[triv.clone(), sign.clone(), std.clone()])?;
            let regular = Representation::regular(g.clone());
            (
                g,
                vec![
                    ("triv", triv),
                    ("sign", sign),
                    ("std", std),
                    ("trivPlusSign", triv_plus_sign),
                    ("trivSignStd", all),
                    ("regular", regular),
                ],
            )
        }
        "Q8" => {
            let i = diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
            let j = CMat::from_row_slice(2, 2, &[ZERO, -ONE, ONE, ZERO]);
            with_triv(matrix_group(&[i, j], "Q8")?)
        }
        "D4" => {
            let r = CMat::from_row_slice(2, 2, &[ZERO, -ONE, ONE, ZERO]);
            let s = diag(&[ONE, -ONE]);
            with_triv(matrix_group(&[r, s], "D4")?)
        }
        "A4" => {
            let p = cyclic_perm3();
            let d = diag(&[ONE, -ONE, -ONE]);
            with_triv(matrix_group(&[p, d], "A4")?)
        }
        "S4" => {
            let p = cyclic_perm3();
            let quarter =
                CMat::from_row_slice(3, 3, &[ZERO, -ONE, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ONE]);
            with_triv(matrix_group(&[p, quarter], "S4")?)
        }
        "SL23" => {
            // Binary tetrahedral group, isomorphic to SL(2,3).
            let i = diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
            let j = CMat::from_row_slice(2, 2, &[ZERO, -ONE, ONE, ZERO]);
            let k = &i * &j;
            let a = (linalg::identity(2) + &i + &j + &k).scale(0.5);
            with_triv(matrix_group(&[a, i], "SL23")?)
        }
        "S3xS3" => {
            let base = entry("S3")?;
            let g = Arc::new(FiniteGroup::direct_product(
                &base.group,
                &base.group,
                GROUP_ORDER_CAP,
            )?);
            let std = base.rep("std").expect("S3 std");
            let outer = Representation::outer_tensor(std, std, g.clone())?;
            (
                g.clone(),
                vec![("triv", Representation::trivial(g, 1)), ("stdxstd", outer)],
            )
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown catalog key {other:?}"
            )))
        }
    };
    Ok(CatalogEntry {
        key: key.to_string(),
        group,
        reps: reps.into_iter().map(|(n, r)| (n.to_string(), r)).collect(),
    })
}

fn with_triv(
    (g, std): (Arc<FiniteGroup>, Representation),
) -> (Arc<FiniteGroup>, Vec<(&'static str, Representation)>) {
    (
        g.clone(),
        vec![("triv", Representation::trivial(g, 1)), ("std", std)],
    )
}

fn diag(values: &[num_complex::Complex64]) -> CMat {
    CMat::from_diagonal(&linalg::CVec::from_column_slice(values))
}

fn cyclic_perm3() -> CMat {
    CMat::from_row_slice(3, 3, &[ZERO, ZERO, ONE, ONE, ZERO, ZERO, ZERO, ONE, ZERO])
}

fn scalar_rep(
    g: &Arc<FiniteGroup>,
    f: impl Fn(usize) -> num_complex::Complex64,
) -> Result<Representation> {
    Representation::from_fn(g.clone(), |x| CMat::from_element(1, 1, f(x)))
}

fn matrix_key(m: &CMat) -> Vec<(i64, i64)> {
    m.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// Close a set of invertible matrices under multiplication; the group is
/// ordered breadth-first from the identity and the matrices form its
/// defining representation.
pub fn matrix_group(gens: &[CMat], name: &str) -> Result<(Arc<FiniteGroup>, Representation)> {
    let d = gens[0].nrows();
    let mut elems = vec![linalg::identity(d)];
    let mut index: HashMap<Vec<(i64, i64)>, usize> = HashMap::from([(matrix_key(&elems[0]), 0)]);
    let mut head = 0;
    while head < elems.len() {
        for g in gens {
            let next = &elems[head] * g;
            let key = matrix_key(&next);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                if elems.len() >= PERMUTATION_CAP {
                    return Err(Error::CapExceeded {
                        what: "matrix group closure",
                        size: elems.len() + 1,
                        cap: PERMUTATION_CAP,
                    });
                }
                e.insert(elems.len());
                elems.push(next);
            }
        }
        head += 1;
    }
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&matrix_key(&(a * b))]).collect())
        .collect();
    let group = Arc::new(FiniteGroup::from_mult_table(&table)?.with_name(name));
    let rep = Representation::new(group.clone(), elems, None)?;
    Ok((group, rep))
}
