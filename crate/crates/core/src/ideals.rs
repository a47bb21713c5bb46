//! Invariant subspaces of a representation and the matching one-sided
//! ideals of its endomorphism algebra.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ONE};
use crate::matalg;
use crate::rep::Representation;
use crate::subspace::MatrixSubspace;

/// Largest lattice that is materialized element by element.
pub const LATTICE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::InvalidInput(format!(
                "side must be left or right, got {other:?}"
            ))),
        }
    }
}

/// A subspace of `ℂ^d` with orthonormal basis columns.
#[derive(Debug, Clone)]
pub struct SubspaceOfV {
    d: usize,
    basis: CMat,
}

impl SubspaceOfV {
    pub fn zero(d: usize) -> Self {
        SubspaceOfV {
            d,
            basis: CMat::zeros(d, 0),
        }
    }

    pub fn full(d: usize) -> Self {
        SubspaceOfV {
            d,
            basis: linalg::identity(d),
        }
    }

    /// Column span of `cols` (a `d × m` matrix).
    pub fn span(cols: &CMat, tol: f64) -> Self {
        SubspaceOfV {
            d: cols.nrows(),
            basis: linalg::orthonormalize(cols, tol),
        }
    }

    pub fn from_vectors(d: usize, vecs: &[CVec], tol: f64) -> Self {
        if vecs.is_empty() {
            return Self::zero(d);
        }
        Self::span(&CMat::from_columns(vecs), tol)
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

    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement.
    pub fn complement(&self, tol: f64) -> SubspaceOfV {
        if self.dim() == 0 {
            return Self::full(self.d);
        }
        SubspaceOfV {
            d: self.d,
            basis: linalg::nullspace(&self.basis.adjoint(), tol),
        }
    }

    fn residual(&self, other: &SubspaceOfV) -> f64 {
        if other.dim() == 0 {
            return 0.0;
        }
        (&other.basis - self.projector() * &other.basis)
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &SubspaceOfV, tol: f64) -> bool {
        self.d == other.d && self.residual(other) <= tol
    }

    pub fn approx_eq(&self, other: &SubspaceOfV, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains(other, tol) && other.contains(self, tol)
    }

    /// Stability under every generator of the representation.
    pub fn is_invariant(&self, rep: &Representation, tol: f64) -> bool {
        rep.group().generators().iter().all(|&g| {
            let image = SubspaceOfV {
                d: self.d,
                basis: rep.matrix(g) * &self.basis,
            };
            self.residual(&image) <= tol
        })
    }
}

#[derive(Debug, Clone)]
pub struct OneSidedIdeal {
    pub side: Side,
    pub space: MatrixSubspace,
    pub source: SubspaceOfV,
}

impl OneSidedIdeal {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn outer_products(left: &CMat, right: &CMat, rows: usize, cols: usize) -> CMat {
    // Columns vec(u w*) for u in `left`, w in `right`.
    let mut out = CMat::zeros(rows * cols, left.ncols() * right.ncols());
    let mut k = 0;
    for u in left.column_iter() {
        for w in right.column_iter() {
            let m = u * w.adjoint();
            out.set_column(k, &linalg::vectorize(&m));
            k += 1;
        }
    }
    out
}

/// `Ann(L) = { f : f(L) = 0 }`, a left ideal of dimension `d (d − dim L)`.
pub fn ann(l: &SubspaceOfV, tol: f64) -> OneSidedIdeal {
    let d = l.d;
    let perp = l.complement(tol);
    let basis = outer_products(&linalg::identity(d), &perp.basis, d, d);
    OneSidedIdeal {
        side: Side::Left,
        space: MatrixSubspace::from_orthonormal(d, basis),
        source: l.clone(),
    }
}

/// `Coann(L) = { f : f(V) ⊆ L }`, a right ideal of dimension `d · dim L`.
pub fn coann(l: &SubspaceOfV, _tol: f64) -> OneSidedIdeal {
    let d = l.d;
    let basis = outer_products(&l.basis, &linalg::identity(d), d, d);
    OneSidedIdeal {
        side: Side::Right,
        space: MatrixSubspace::from_orthonormal(d, basis),
        source: l.clone(),
    }
}

/// The ideal attached to `l` on the given side.
pub fn ideal_of(l: &SubspaceOfV, side: Side, tol: f64) -> OneSidedIdeal {
    match side {
        Side::Left => ann(l, tol),
        Side::Right => coann(l, tol),
    }
}

/// Whether `A·I ⊆ I` (left) or `I·A ⊆ I` (right).
pub fn is_ideal(space: &MatrixSubspace, side: Side, tol: f64) -> bool {
    let full = MatrixSubspace::full(space.ambient_dim());
    let prod = match side {
        Side::Left => matalg::span_product(&full, space, tol),
        Side::Right => matalg::span_product(space, &full, tol),
    };
    space.contains_subspace(&prod, crate::SUBSPACE_EQ_TOL)
}

/// Common kernel of a left ideal, or joint image of a right ideal.
pub fn ideal_to_subspace(space: &MatrixSubspace, side: Side, tol: f64) -> Result<SubspaceOfV> {
    if !is_ideal(space, side, tol) {
        return Err(Error::NotAnIdeal { side: side.name() });
    }
    let d = space.ambient_dim();
    if space.dim() == 0 {
        return Ok(match side {
            Side::Left => SubspaceOfV::full(d),
            Side::Right => SubspaceOfV::zero(d),
        });
    }
    let mats = space.matrices();
    Ok(match side {
        Side::Left => SubspaceOfV {
            d,
            basis: linalg::nullspace(&linalg::vstack(&mats, d), tol),
        },
        Side::Right => SubspaceOfV::span(&linalg::hstack(&mats, d), tol),
    })
}

/// One factor of the infinite-lattice parametrization: the invariant
/// subspaces of an isotypic component of type `irrep` and multiplicity
/// `n` correspond to the subspaces of `ℂⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParametrizationFactor {
    pub irrep: usize,
    pub irrep_dim: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub enum InvariantSubspaces {
    /// Every sum of isotypic components, indexed by bitmask over the components.
    Finite(Vec<SubspaceOfV>),
    /// Lattice isomorphic to the product of subspace lattices of `ℂ^{nᵢ}`.
    Parametrization(Vec<ParametrizationFactor>),
}

impl InvariantSubspaces {
    pub fn is_finite(&self) -> bool {
        matches!(self, InvariantSubspaces::Finite(_))
    }

    pub fn max_multiplicity(&self) -> usize {
        match self {
            InvariantSubspaces::Finite(_) => 1,
            InvariantSubspaces::Parametrization(f) => {
                f.iter().map(|x| x.multiplicity).max().unwrap_or(0)
            }
        }
    }

    pub fn into_finite(self) -> Result<Vec<SubspaceOfV>> {
        match self {
            InvariantSubspaces::Finite(v) => Ok(v),
            p => Err(Error::InfiniteLattice {
                multiplicity: p.max_multiplicity(),
            }),
        }
    }
}

/// All `G`-invariant subspaces of a multiplicity-free `V`, or the
/// parametrization of the lattice when some multiplicity exceeds one.
pub fn invariant_subspaces(v: &Representation, tol: f64) -> Result<InvariantSubspaces> {
    let comps = v.isotypic_decomposition(tol)?;
    if comps.iter().any(|c| c.multiplicity > 1) {
        return Ok(InvariantSubspaces::Parametrization(
            comps
                .iter()
                .map(|c| ParametrizationFactor {
                    irrep: c.irrep,
                    irrep_dim: c.irrep_dim,
                    multiplicity: c.multiplicity,
                })
                .collect(),
        ));
    }
    let m = comps.len();
    if m >= usize::BITS as usize || (1usize << m) > LATTICE_CAP {
        return Err(Error::CapExceeded {
            what: "invariant subspace lattice",
            size: 1usize.checked_shl(m as u32).unwrap_or(usize::MAX),
            cap: LATTICE_CAP,
        });
    }
    let d = v.dim();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0..(1usize << m) {
        let mut p = CMat::zeros(d, d);
        for (i, c) in comps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p += &c.projector;
            }
        }
        // An orthonormal basis of the range, without relying on P being Hermitian.
        let sub = if mask == 0 {
            SubspaceOfV::zero(d)
        } else {
            SubspaceOfV::span(&p, 1e-6)
        };
        out.push(sub);
    }
    Ok(InvariantSubspaces::Finite(out))
}

/// Check the lattice correspondence on every pair of a finite list:
/// `L ⊆ L′ ⟺ Ann(L′) ⊆ Ann(L)` and `L ⊆ L′ ⟺ Coann(L) ⊆ Coann(L′)`.
fn verify_order(subs: &[SubspaceOfV], ideals: &[OneSidedIdeal], side: Side) -> Result<()> {
    let eq = crate::SUBSPACE_EQ_TOL;
    for (i, a) in subs.iter().enumerate() {
        for (j, b) in subs.iter().enumerate() {
            let sub_le = b.contains(a, eq);
            let ideal_le = match side {
                Side::Left => ideals[i].space.contains_subspace(&ideals[j].space, eq),
                Side::Right => ideals[j].space.contains_subspace(&ideals[i].space, eq),
            };
            if sub_le != ideal_le {
                return Err(Error::AssertionFailure(format!(
                    "{} ideal correspondence is not order-{} at pair ({i}, {j})",
                    side.name(),
                    if side == Side::Left {
                        "reversing"
                    } else {
                        "preserving"
                    }
                )));
            }
        }
    }
    Ok(())
}

/// All `G`-invariant one-sided ideals of `End(V)` on one side.
pub fn invariant_ideals(v: &Representation, side: Side, tol: f64) -> Result<Vec<OneSidedIdeal>> {
    let subs = invariant_subspaces(v, tol)?.into_finite()?;
    let ideals: Vec<OneSidedIdeal> = subs.iter().map(|l| ideal_of(l, side, tol)).collect();
    verify_order(&subs, &ideals, side)?;
    Ok(ideals)
}

/// A subspace of `Hom(V, W)`, stored as vectorized `rows × cols` matrices.
#[derive(Debug, Clone)]
pub struct HomSubspace {
    pub rows: usize,
    pub cols: usize,
    pub basis: CMat,
    pub source: SubspaceOfV,
}

impl HomSubspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrices(&self) -> Vec<CMat> {
        self.basis
            .column_iter()
            .map(|c| linalg::unvectorize(c.as_slice(), self.rows, self.cols))
            .collect()
    }

    fn contains(&self, m: &CMat, tol: f64) -> bool {
        let v = linalg::vectorize(m);
        let p = &self.basis * (self.basis.adjoint() * &v);
        (&v - p).norm() <= tol * v.norm().max(1.0)
    }
}

fn matrix_units(d: usize) -> impl Iterator<Item = CMat> {
    (0..d * d).map(move |k| {
        let mut m = CMat::zeros(d, d);
        m[(k % d, k / d)] = ONE;
        m
    })
}

/// Submodules of `Hom(V, W)`: for `Left`, the `End(W)`-submodules
/// `{ f : f(L) = 0 }` with `L` invariant in `V`; for `Right`, the
/// `End(V)`-submodules `{ f : f(V) ⊆ L }` with `L` invariant in `W`.
pub fn hom_lattice(
    v: &Representation,
    w: &Representation,
    side: Side,
    tol: f64,
) -> Result<Vec<HomSubspace>> {
    let (dv, dw) = (v.dim(), w.dim());
    let out: Vec<HomSubspace> = match side {
        Side::Left => invariant_subspaces(v, tol)?
            .into_finite()?
            .into_iter()
            .map(|l| {
                let perp = l.complement(tol);
                HomSubspace {
                    rows: dw,
                    cols: dv,
                    basis: outer_products(&linalg::identity(dw), &perp.basis, dw, dv),
                    source: l,
                }
            })
            .collect(),
        Side::Right => invariant_subspaces(w, tol)?
            .into_finite()?
            .into_iter()
            .map(|l| HomSubspace {
                rows: dw,
                cols: dv,
                basis: outer_products(&l.basis, &linalg::identity(dv), dw, dv),
                source: l,
            })
            .collect(),
    };
    let check = tol.max(1e-8) * 1e2;
    for s in &out {
        for f in s.matrices() {
            let closed = match side {
                Side::Left => matrix_units(dw).all(|a| s.contains(&(a * &f), check)),
                Side::Right => matrix_units(dv).all(|a| s.contains(&(&f * a), check)),
            };
            if !closed {
                return Err(Error::AssertionFailure(format!(
                    "{} Hom submodule is not closed under multiplication",
                    side.name()
                )));
            }
        }
    }
    Ok(out)
}

/// Invariant one-sided ideals of `⊕ End(Vᵢ)`: products of the per-component
/// lattices.
#[derive(Debug, Clone)]
pub struct SemisimpleLattice {
    pub component_dims: Vec<usize>,
    pub per_component: Vec<Vec<SubspaceOfV>>,
}

impl SemisimpleLattice {
    pub fn counts(&self) -> Vec<usize> {
        self.per_component.iter().map(Vec::len).collect()
    }

    /// Number of invariant ideals on either side.
    pub fn total(&self) -> u128 {
        self.per_component.iter().map(|l| l.len() as u128).product()
    }

    /// The ideals as block-diagonal subspaces of `M_{Σ dᵢ}`.
    pub fn ideals(&self, side: Side, tol: f64) -> Result<Vec<MatrixSubspace>> {
        let total = self.total();
        if total > LATTICE_CAP as u128 {
            return Err(Error::CapExceeded {
                what: "semisimple ideal lattice",
                size: total.min(usize::MAX as u128) as usize,
                cap: LATTICE_CAP,
            });
        }
        let n: usize = self.component_dims.iter().sum();
        let offsets: Vec<usize> = self
            .component_dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let blocks: Vec<Vec<CMat>> = self
            .per_component
            .iter()
            .zip(&offsets)
            .map(|(list, &off)| {
                list.iter()
                    .map(|l| {
                        let local = ideal_of(l, side, tol).space.basis().clone();
                        embed_block(&local, l.d, off, n)
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = vec![0usize; blocks.len()];
        loop {
            let parts: Vec<CMat> = idx
                .iter()
                .zip(&blocks)
                .map(|(&i, b)| b[i].clone())
                .collect();
            out.push(MatrixSubspace::from_orthonormal(
                n,
                linalg::hstack(&parts, n * n),
            ));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < blocks[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Place vectorized `d × d` matrices in the diagonal block at `off` of `M_n`.
fn embed_block(local: &CMat, d: usize, off: usize, n: usize) -> CMat {
    let mut out = CMat::zeros(n * n, local.ncols());
    for (k, col) in local.column_iter().enumerate() {
        for j in 0..d {
            for i in 0..d {
                out[((off + j) * n + off + i, k)] = col[j * d + i];
            }
        }
    }
    out
}

pub fn semisimple_ideal_lattice(
    components: &[Representation],
    tol: f64,
) -> Result<SemisimpleLattice> {
    let mut per_component = Vec::with_capacity(components.len());
    for v in components {
        per_component.push(invariant_subspaces(v, tol)?.into_finite()?);
    }
    Ok(SemisimpleLattice {
        component_dims: components.iter().map(Representation::dim).collect(),
        per_component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const TOL: f64 = 1e-9;

    fn e1() -> SubspaceOfV {
        SubspaceOfV::from_vectors(2, &[CVec::from_vec(vec![ONE, linalg::ZERO])], TOL)
    }

    #[test]
    fn ann_and_coann_dimensions() {
        assert_eq!(ann(&SubspaceOfV::zero(3), TOL).dim(), 9);
        assert_eq!(ann(&SubspaceOfV::full(3), TOL).dim(), 0);
        let a = ann(&e1(), TOL);
        assert_eq!(a.dim(), 2);
        assert!(a.space.contains(&matalg::matrix_unit(2, 0, 1), 1e-9));
        assert!(!a.space.contains(&matalg::matrix_unit(2, 0, 0), 1e-9));
        let c = coann(&e1(), TOL);
        assert_eq!(c.dim(), 2);
        assert!(c.space.contains(&matalg::matrix_unit(2, 0, 1), 1e-9));
        assert!(c.space.contains(&matalg::matrix_unit(2, 0, 0), 1e-9));
        assert!(!c.space.contains(&matalg::matrix_unit(2, 1, 0), 1e-9));
    }

    #[test]
    fn ideal_to_subspace_examples() {
        let zero = MatrixSubspace::zero(2);
        assert_eq!(ideal_to_subspace(&zero, Side::Left, TOL).unwrap().dim(), 2);
        assert_eq!(
            ideal_to_subspace(&MatrixSubspace::full(2), Side::Left, TOL)
                .unwrap()
                .dim(),
            0
        );
        let first_col_zero = MatrixSubspace::from_matrices(
            2,
            &[matalg::matrix_unit(2, 0, 1), matalg::matrix_unit(2, 1, 1)],
            TOL,
        );
        assert!(ideal_to_subspace(&first_col_zero, Side::Left, TOL)
            .unwrap()
            .approx_eq(&e1(), 1e-9));
        let diag = MatrixSubspace::from_matrices(
            2,
            &[matalg::matrix_unit(2, 0, 0), matalg::matrix_unit(2, 1, 1)],
            TOL,
        );
        assert!(matches!(
            ideal_to_subspace(&diag, Side::Left, TOL),
            Err(Error::NotAnIdeal { side: "left" })
        ));
    }

    #[test]
    fn invariant_subspace_examples() {
        let s3 = catalog::entry("S3").unwrap();
        let irr = invariant_subspaces(s3.rep("std").unwrap(), TOL)
            .unwrap()
            .into_finite()
            .unwrap();
        assert_eq!(
            irr.iter().map(SubspaceOfV::dim).collect::<Vec<_>>(),
            vec![0, 2]
        );
        let two = invariant_subspaces(s3.rep("trivPlusSign").unwrap(), TOL)
            .unwrap()
            .into_finite()
            .unwrap();
        assert_eq!(two.len(), 4);
        let doubled = Representation::trivial(s3.group.clone(), 2);
        match invariant_subspaces(&doubled, TOL).unwrap() {
            InvariantSubspaces::Parametrization(f) => assert_eq!(f[0].multiplicity, 2),
            other => panic!("expected parametrization, got {other:?}"),
        }
    }

    #[test]
    fn invariant_ideal_examples() {
        let s3 = catalog::entry("S3").unwrap();
        for side in [Side::Left, Side::Right] {
            let irr = invariant_ideals(s3.rep("std").unwrap(), side, TOL).unwrap();
            assert_eq!(
                irr.iter().map(OneSidedIdeal::dim).collect::<Vec<_>>(),
                vec![4, 0]
                    .into_iter()
                    .map(|x| if side == Side::Left { x } else { 4 - x })
                    .collect::<Vec<_>>()
            );
            assert_eq!(
                invariant_ideals(s3.rep("trivPlusSign").unwrap(), side, TOL)
                    .unwrap()
                    .len(),
                4
            );
            assert_eq!(
                invariant_ideals(s3.rep("trivSignStd").unwrap(), side, TOL)
                    .unwrap()
                    .len(),
                8
            );
        }
        let doubled = Representation::trivial(s3.group.clone(), 2);
        assert!(matches!(
            invariant_ideals(&doubled, Side::Left, TOL),
            Err(Error::InfiniteLattice { multiplicity: 2 })
        ));
    }

    #[test]
    fn hom_lattice_examples() {
        let s3 = catalog::entry("S3").unwrap();
        let v = s3.rep("trivPlusSign").unwrap();
        let w = s3.rep("triv").unwrap();
        let left = hom_lattice(v, w, Side::Left, TOL).unwrap();
        let mut dims: Vec<usize> = left.iter().map(HomSubspace::dim).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 1, 1, 2]);
        let std = s3.rep("std").unwrap();
        let sign = s3.rep("sign").unwrap();
        for side in [Side::Left, Side::Right] {
            let dims: Vec<usize> = hom_lattice(std, sign, side, TOL)
                .unwrap()
                .iter()
                .map(HomSubspace::dim)
                .collect();
            let mut sorted = dims.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 2]);
        }
    }

    #[test]
    fn semisimple_lattice_counts() {
        let s3 = catalog::entry("S3").unwrap();
        let std = s3.rep("std").unwrap().clone();
        let one = semisimple_ideal_lattice(std::slice::from_ref(&std), TOL).unwrap();
        assert_eq!(one.total(), 2);
        let two = semisimple_ideal_lattice(&[std.clone(), std.clone()], TOL).unwrap();
        assert_eq!(two.total(), 4);
        let mixed =
            semisimple_ideal_lattice(&[s3.rep("trivPlusSign").unwrap().clone(), std], TOL).unwrap();
        assert_eq!(mixed.total(), 8);
        let ideals = mixed.ideals(Side::Left, TOL).unwrap();
        assert_eq!(ideals.len(), 8);
        for i in &ideals {
            assert!(matalg::is_product_closed(i, TOL));
        }
    }
}
