//! JSON formats for groups, representations and catalog entries.
//!
//! Complex numbers are `[re, im]`; matrices are row-major lists of rows.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, PERMUTATION_CAP};
use crate::linalg::CMat;
use crate::rep::{Representation, TwoCocycle};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult_table: Option<Vec<Vec<usize>>>,
    /// Generators as image lists; composition is `(p·q)(x) = p(q(x))`.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        alias = "permutations"
    )]
    pub perm_generators: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CocycleJson {
    pub values: JsonMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RepresentationJson {
    pub dim: usize,
    /// One matrix per group element, in element order.
    pub matrices: Vec<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleJson>,
}

/// Input file for the command-line tools.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    pub group: GroupJson,
    #[serde(alias = "rep")]
    pub representation: RepresentationJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NamedRepresentationJson {
    pub name: String,
    #[serde(flatten)]
    pub rep: RepresentationJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CatalogEntryJson {
    pub key: String,
    pub group: GroupJson,
    pub representations: Vec<NamedRepresentationJson>,
}

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    // Normalize -0.0 so output bytes do not depend on rounding history.
    [z.re + 0.0, z.im + 0.0]
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, what: &str) -> Result<CMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidInput(format!("{what}: ragged matrix")));
    }
    Ok(CMat::from_fn(r, c, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn group_to_json(g: &FiniteGroup) -> GroupJson {
    GroupJson {
        name: g.name().map(str::to_string),
        order: Some(g.order()),
        mult_table: Some(g.mult_table()),
        perm_generators: None,
    }
}

pub fn group_from_json(g: &GroupJson) -> Result<Arc<FiniteGroup>> {
    let group = match (&g.mult_table, &g.perm_generators) {
        (Some(t), None) => FiniteGroup::from_mult_table(t)?,
        (None, Some(p)) => FiniteGroup::from_permutations(p, PERMUTATION_CAP)?,
        _ => {
            return Err(Error::InvalidInput(
                "group needs exactly one of mult_table or perm_generators".into(),
            ))
        }
    };
    if let Some(n) = g.order.filter(|&n| n != group.order()) {
        return Err(Error::InvalidInput(format!(
            "declared order {n} but the group has {} elements",
            group.order()
        )));
    }
    Ok(Arc::new(match &g.name {
        Some(n) => group.with_name(n.clone()),
        None => group,
    }))
}

pub fn rep_to_json(r: &Representation) -> RepresentationJson {
    RepresentationJson {
        dim: r.dim(),
        matrices: r.matrices().iter().map(matrix_to_json).collect(),
        cocycle: r
            .cocycle()
            .filter(|c| !c.is_trivial(0.0))
            .map(|c| CocycleJson {
                values: c
                    .rows()
                    .iter()
                    .map(|row| row.iter().map(|z| complex_to_json(*z)).collect())
                    .collect(),
            }),
    }
}

pub fn rep_from_json(group: Arc<FiniteGroup>, r: &RepresentationJson) -> Result<Representation> {
    if r.matrices.len() != group.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices for a group of order {}",
            r.matrices.len(),
            group.order()
        )));
    }
    let mats = r
        .matrices
        .iter()
        .enumerate()
        .map(|(g, m)| {
            let m = matrix_from_json(m, &format!("matrix {g}"))?;
            if m.shape() != (r.dim, r.dim) {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {g} is {}×{}, expected {}×{}",
                    m.nrows(),
                    m.ncols(),
                    r.dim,
                    r.dim
                )));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let cocycle = match &r.cocycle {
        Some(c) => {
            let rows: Vec<Vec<Complex64>> = c
                .values
                .iter()
                .map(|row| row.iter().map(|z| Complex64::new(z[0], z[1])).collect())
                .collect();
            Some(TwoCocycle::from_rows(&rows)?)
        }
        None => None,
    };
    Representation::new(group, mats, cocycle)
}

/// Byte offset of a 1-based (line, column) position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    text.len()
}

/// Deserialize with errors that carry a byte offset.
pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn parse_input(text: &str) -> Result<(Arc<FiniteGroup>, Representation)> {
    let input: InputJson = from_str(text)?;
    let group = group_from_json(&input.group)?;
    let rep = rep_from_json(group.clone(), &input.representation)?;
    Ok((group, rep))
}

pub fn input_to_json(r: &Representation) -> InputJson {
    InputJson {
        group: group_to_json(r.group()),
        representation: rep_to_json(r),
    }
}

pub fn export_entry(e: &CatalogEntry) -> CatalogEntryJson {
    CatalogEntryJson {
        key: e.key.clone(),
        group: group_to_json(&e.group),
        representations: e
            .reps
            .iter()
            .map(|(name, r)| NamedRepresentationJson {
                name: name.clone(),
                rep: rep_to_json(r),
            })
            .collect(),
    }
}

pub fn import_entry(j: &CatalogEntryJson) -> Result<CatalogEntry> {
    let group = group_from_json(&j.group)?;
    let reps = j
        .representations
        .iter()
        .map(|n| Ok((n.name.clone(), rep_from_json(group.clone(), &n.rep)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogEntry {
        key: j.key.clone(),
        group,
        reps,
    })
}
