//! Lifting an action by algebra automorphisms of `M_d(ℂ)` to a projective
//! representation.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{self, CMat};
use crate::matalg::matrix_unit;
use crate::rep::{cocycle_from_matrices, Representation};

/// Up to this size every product of matrix units is checked; above it only
/// the products of the adjacent units `E_{i,i+1}`, `E_{i+1,i}`.
const FULL_CHECK_DIM: usize = 8;

fn apply(op: &CMat, a: &CMat) -> CMat {
    let d = a.nrows();
    linalg::unvectorize((op * linalg::vectorize(a)).as_slice(), d, d)
}

/// `E_{i,i+1}` and `E_{i+1,i}`; together they generate `M_d` as an algebra.
fn generating_units(d: usize) -> Vec<CMat> {
    (0..d.saturating_sub(1))
        .flat_map(|i| [matrix_unit(d, i, i + 1), matrix_unit(d, i + 1, i)])
        .collect()
}

fn automorphism_residual(op: &CMat, d: usize) -> f64 {
    let id = linalg::identity(d);
    let mut worst = linalg::frob(&(apply(op, &id) - &id));
    let units: Vec<CMat> = if d <= FULL_CHECK_DIM {
        (0..d * d).map(|k| matrix_unit(d, k % d, k / d)).collect()
    } else {
        generating_units(d)
    };
    let images: Vec<CMat> = units.iter().map(|u| apply(op, u)).collect();
    for (a, ia) in units.iter().zip(&images) {
        for (b, ib) in units.iter().zip(&images) {
            let dev = linalg::frob(&(apply(op, &(a * b)) - ia * ib));
            worst = worst.max(dev);
        }
    }
    worst
}

/// Given `π(g)` for every group element as a `d² × d²` matrix on
/// column-major vectorized matrices, find `ρ(g)` with
/// `π(g)(a) = ρ(g) a ρ(g)⁻¹`.
///
/// Each `ρ(g)` is scaled to determinant one and then phase-normalized, so
/// `ρ(1) = I`. The returned representation carries the cocycle
/// `α(g,h) = ρ(g)ρ(h)ρ(gh)⁻¹`.
pub fn skolem_noether_lift(
    group: Arc<FiniteGroup>,
    action: &[CMat],
    tol: f64,
) -> Result<Representation> {
    if action.len() != group.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} action matrices for a group of order {}",
            action.len(),
            group.order()
        )));
    }
    let d2 = action[0].nrows();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 || action.iter().any(|m| m.shape() != (d2, d2)) {
        return Err(Error::DimensionMismatch(
            "action matrices must be square of size d²".into(),
        ));
    }
    let id = linalg::identity(d);
    let gens = generating_units(d);
    let check = tol.max(1e-12) * (d as f64).max(1.0);
    let mut mats = Vec::with_capacity(action.len());
    for (g, op) in action.iter().enumerate() {
        let residual = automorphism_residual(op, d);
        if residual > check {
            return Err(Error::NotAnAutomorphism {
                element: g,
                residual,
            });
        }
        // X a = π(a) X for every generating unit a.
        let x = if gens.is_empty() {
            linalg::identity(d)
        } else {
            let blocks: Vec<CMat> = gens
                .iter()
                .map(|a| {
                    linalg::sandwich_operator(&apply(op, a), &id)
                        - linalg::sandwich_operator(&id, a)
                })
                .collect();
            let ns = linalg::nullspace(&linalg::vstack(&blocks, d2), tol.max(1e-10));
            if ns.ncols() != 1 {
                return Err(Error::NonSimpleAction {
                    element: g,
                    dim: ns.ncols(),
                });
            }
            linalg::unvectorize(ns.column(0).as_slice(), d, d)
        };
        let det = x.clone().determinant();
        if det.norm() < 1e-300 {
            return Err(Error::NonSimpleAction { element: g, dim: 0 });
        }
        let mut x = x / det.powf(1.0 / d as f64);
        linalg::normalize_phase(&mut x);
        mats.push(x.map(linalg::clean));
    }
    let cocycle = cocycle_from_matrices(&group, &mats)?;
    let rep = Representation::new(group, mats, Some(cocycle))?;
    rep.validate(tol.max(1e-8))?;
    Ok(rep)
}

/// Largest `‖π(g)(a) − ρ(g) a ρ(g)⁻¹‖` over all elements and matrix units.
pub fn lift_residual(action: &[CMat], rep: &Representation) -> f64 {
    let d = rep.dim();
    let mut worst = 0.0f64;
    for (g, op) in action.iter().enumerate() {
        let r = rep.matrix(g);
        let r_inv = linalg::inverse(r).expect("lifted matrices are invertible");
        for k in 0..d * d {
            let a = matrix_unit(d, k % d, k / d);
            worst = worst.max(linalg::frob(&(apply(op, &a) - r * &a * &r_inv)));
        }
    }
    worst
}

/// Scalar `c` with `a = c·b`, if one exists within `tol`.
pub fn scalar_ratio(a: &CMat, b: &CMat, tol: f64) -> Option<Complex64> {
    let c = linalg::hs_inner(b, a) / linalg::hs_inner(b, b);
    (linalg::frob(&(a - b * c)) <= tol * linalg::frob(a).max(1.0)).then_some(c)
}
