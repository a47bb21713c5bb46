//! Dense complex linear algebra helpers shared by every module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. A d×d matrix is identified
//! with a vector of length d² through column-major vectorization, so the
//! Hilbert–Schmidt inner product `tr(A* B)` is the ordinary Hermitian inner
//! product of the vectorized forms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Column-major vectorization.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v)
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Orthonormal basis (as columns) of the null space of `a`.
///
/// A singular value counts as zero when it is at most `tol · max(1, σ_max)`.
pub fn nullspace(a: &CMat, tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let m = a.nrows();
    // nalgebra returns a thin SVD; pad with zero rows so that V is square.
    let padded = if m < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol * smax.max(1.0);
    let cols: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return CMat::zeros(n, 0);
    }
    // The SVD vectors are already orthonormal; reorthogonalize to absorb rounding.
    let ns = orthonormalize(&CMat::from_columns(&cols), tol);
    if ns.ncols() == cols.len() && (a * &ns).norm() <= 10.0 * cutoff * (cols.len() as f64).sqrt() {
        return ns;
    }
    hermitian_nullspace(a, cols.len(), tol)
}

/// Fallback: the `k` eigenvectors of `a*a` with smallest eigenvalues.
fn hermitian_nullspace(a: &CMat, k: usize, tol: f64) -> CMat {
    let eig = (a.adjoint() * a).symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let cols: Vec<CVec> = idx[..k]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    orthonormalize(&CMat::from_columns(&cols), tol)
}

/// Orthonormal basis (as columns) of the column space of `a`.
///
/// Modified Gram–Schmidt with one reorthogonalization pass; a column is
/// dropped when its residual norm falls below `tol · max(1, ‖a‖_max-column)`.
pub fn orthonormalize(a: &CMat, tol: f64) -> CMat {
    let n = a.nrows();
    let scale = a
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut basis: Vec<CVec> = Vec::new();
    for col in a.column_iter() {
        let mut v: CVec = col.into_owned();
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&v);
                v.axpy(-p, b, ONE);
            }
        }
        let norm = v.norm();
        if norm > tol * scale {
            basis.push(v.unscale(norm));
        }
    }
    if basis.is_empty() {
        CMat::zeros(n, 0)
    } else {
        CMat::from_columns(&basis)
    }
}

/// Concatenate column blocks that share a row count.
pub fn hstack(blocks: &[CMat], rows: usize) -> CMat {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Stack row blocks that share a column count.
pub fn vstack(blocks: &[CMat], cols: usize) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Block-diagonal matrix.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues with
/// matching orthonormal eigenvector columns.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let herm = (h + h.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<CVec> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (values, CMat::from_columns(&cols))
}

/// Group indices of sorted values into clusters separated by more than `gap`.
pub fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if (v - values[*last.last().unwrap()]).abs() <= gap => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}

/// Positive square root of a Hermitian positive definite matrix, together
/// with its inverse.
pub fn hermitian_sqrt(h: &CMat) -> (CMat, CMat) {
    let (vals, vecs) = hermitian_eigen(h);
    let d = h.nrows();
    let mut s = CMat::zeros(d, d);
    let mut s_inv = CMat::zeros(d, d);
    for (i, v) in vals.iter().enumerate() {
        let r = v.max(0.0).sqrt();
        s[(i, i)] = c(r, 0.0);
        s_inv[(i, i)] = c(1.0 / r, 0.0);
    }
    (&vecs * s * vecs.adjoint(), &vecs * s_inv * vecs.adjoint())
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Kronecker product `a ⊗ b` with `a` carrying the outer index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Matrix of `X ↦ a X b` acting on column-major vectorizations.
pub fn sandwich_operator(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}

/// Snap tiny components to zero so serialized output is stable.
pub fn clean(z: Complex64) -> Complex64 {
    let snap = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    c(snap(z.re), snap(z.im))
}

/// Scale so that the first entry (row-major) whose modulus is maximal, up to
/// a relative slack of 1e-9, becomes positive real. Returns the phase used.
pub fn normalize_phase(m: &mut CMat) -> Complex64 {
    let max = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return ONE;
    }
    let mut pick = ZERO;
    'outer: for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].norm() >= max * (1.0 - 1e-9) {
                pick = m[(i, j)];
                break 'outer;
            }
        }
    }
    let phase = pick / pick.norm();
    let inv = phase.conj();
    m.iter_mut().for_each(|z| *z *= inv);
    phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn nullspace_of_wide_matrix() {
        // x + y + z = 0 in C^3
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ONE]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!(frob(&(&a * &ns)) < 1e-12);
        assert!(frob(&(ns.adjoint() * &ns - identity(2))) < 1e-12);
    }

    #[test]
    fn nullspace_full_rank_is_empty() {
        let ns = nullspace(&identity(3), 1e-10);
        assert_eq!(ns.ncols(), 0);
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 4, 2);
        let dep = hstack(&[a.clone(), &a * random_matrix(&mut rng, 2, 3)], 4);
        let q = orthonormalize(&dep, 1e-10);
        assert_eq!(q.ncols(), 2);
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 3, 3);
        let b = random_matrix(&mut rng, 3, 3);
        let x = random_matrix(&mut rng, 3, 3);
        let lhs = sandwich_operator(&a, &b) * vectorize(&x);
        let rhs = vectorize(&(&a * &x * &b));
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_matrix(&mut rng, 3, 3);
        let h = t.adjoint() * &t + identity(3);
        let (s, s_inv) = hermitian_sqrt(&h);
        assert!(frob(&(&s * &s - &h)) < 1e-9);
        assert!(frob(&(&s * &s_inv - identity(3))) < 1e-9);
    }

    #[test]
    fn phase_normalization_is_deterministic() {
        let mut m = CMat::from_row_slice(1, 2, &[c(0.0, 2.0), c(1.0, 0.0)]);
        normalize_phase(&mut m);
        assert!((m[(0, 0)] - c(2.0, 0.0)).norm() < 1e-12);
    }
}
