//! Subspaces of the d×d complex matrices.

use crate::linalg::{self, CMat, CVec};

/// A subspace of `M_d(ℂ)` carried by a Hilbert–Schmidt orthonormal basis.
///
/// The basis is stored as the columns of a `d² × k` matrix of column-major
/// vectorizations.
#[derive(Debug, Clone)]
pub struct MatrixSubspace {
    d: usize,
    basis: CMat,
}

impl MatrixSubspace {
    pub fn zero(d: usize) -> Self {
        MatrixSubspace {
            d,
            basis: CMat::zeros(d * d, 0),
        }
    }

    pub fn full(d: usize) -> Self {
        MatrixSubspace {
            d,
            basis: linalg::identity(d * d),
        }
    }

    /// `ℂ·I`
    pub fn scalars(d: usize) -> Self {
        Self::from_matrices(d, &[linalg::identity(d)], crate::DEFAULT_TOL)
    }

    pub fn from_matrices(d: usize, mats: &[CMat], tol: f64) -> Self {
        let cols: Vec<CVec> = mats.iter().map(linalg::vectorize).collect();
        Self::from_vectors(d, &cols, tol)
    }

    pub fn from_vectors(d: usize, cols: &[CVec], tol: f64) -> Self {
        if cols.is_empty() {
            return Self::zero(d);
        }
        Self::from_column_matrix(d, &CMat::from_columns(cols), tol)
    }

    /// Span of the columns of a `d² × m` matrix.
    pub fn from_column_matrix(d: usize, cols: &CMat, tol: f64) -> Self {
        assert_eq!(cols.nrows(), d * d, "columns must have length d²");
        MatrixSubspace {
            d,
            basis: linalg::orthonormalize(cols, tol),
        }
    }

    /// Wrap columns that are already orthonormal.
    pub(crate) fn from_orthonormal(d: usize, basis: CMat) -> Self {
        MatrixSubspace { d, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn matrices(&self) -> Vec<CMat> {
        self.basis
            .column_iter()
            .map(|col| linalg::unvectorize(col.as_slice(), self.d, self.d))
            .collect()
    }

    pub fn project_vec(&self, v: &CVec) -> CVec {
        &self.basis * (self.basis.adjoint() * v)
    }

    pub fn project(&self, m: &CMat) -> CMat {
        let p = self.project_vec(&linalg::vectorize(m));
        linalg::unvectorize(p.as_slice(), self.d, self.d)
    }

    /// Coordinates of `m` in the orthonormal basis.
    pub fn coordinates(&self, m: &CMat) -> CVec {
        self.basis.adjoint() * linalg::vectorize(m)
    }

    pub fn residual(&self, m: &CMat) -> f64 {
        let v = linalg::vectorize(m);
        (&v - self.project_vec(&v)).norm()
    }

    /// `‖M − Proj(M)‖ ≤ tol·‖M‖`
    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        self.residual(m) <= tol * linalg::frob(m).max(f64::MIN_POSITIVE)
    }

    pub fn contains_vec(&self, v: &CVec, tol: f64) -> bool {
        (v - self.project_vec(v)).norm() <= tol * v.norm().max(f64::MIN_POSITIVE)
    }

    /// Largest residual of `other`'s basis vectors after projection onto `self`.
    pub fn containment_residual(&self, other: &MatrixSubspace) -> f64 {
        if other.dim() == 0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * &other.basis);
        (&other.basis - proj)
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn contains_subspace(&self, other: &MatrixSubspace, tol: f64) -> bool {
        self.d == other.d && self.containment_residual(other) <= tol
    }

    /// Mutual containment (symmetric projection residual).
    pub fn approx_eq(&self, other: &MatrixSubspace, tol: f64) -> bool {
        self.d == other.d
            && self.dim() == other.dim()
            && self.containment_residual(other) <= tol
            && other.containment_residual(self) <= tol
    }

    pub fn contains_identity(&self, tol: f64) -> bool {
        self.contains(&linalg::identity(self.d), tol)
    }

    pub fn sum(&self, other: &MatrixSubspace, tol: f64) -> MatrixSubspace {
        let stacked = linalg::hstack(&[self.basis.clone(), other.basis.clone()], self.d * self.d);
        Self::from_column_matrix(self.d, &stacked, tol)
    }

    pub fn intersection(&self, other: &MatrixSubspace, tol: f64) -> MatrixSubspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.d);
        }
        // x = Q_S c lies in T iff (I − P_T) Q_S c = 0.
        let outside = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        let coeffs = linalg::nullspace(&outside, tol);
        Self::from_column_matrix(self.d, &(&self.basis * coeffs), tol)
    }

    /// Orthogonal projector onto the subspace (a basis-independent invariant).
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Basis-independent sort key: the projector rounded to 1e-6.
    pub fn fingerprint(&self) -> Vec<(i64, i64)> {
        let q = |x: f64| {
            let v = (x * 1e6).round() as i64;
            if v == 0 {
                0
            } else {
                v
            }
        };
        let p = self.projector();
        let mut out = Vec::with_capacity(p.len());
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                out.push((q(p[(i, j)].re), q(p[(i, j)].im)));
            }
        }
        out
    }

    /// Image under a linear map on vectorized matrices.
    pub fn map(&self, op: &CMat, tol: f64) -> MatrixSubspace {
        Self::from_column_matrix(self.d, &(op * &self.basis), tol)
    }
}
