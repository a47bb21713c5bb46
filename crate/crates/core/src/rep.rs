//! Complex matrix representations, linear or twisted by a 2-cocycle.

use std::sync::Arc;

use num_complex::Complex64;

use crate::character::{self, ClassFunction};
use crate::error::{Error, Result};
use crate::group::{left_transversal, FiniteGroup, Subgroup};
use crate::linalg::{self, CMat, ONE, ZERO};

/// Default cap on the dimension of an induced representation.
pub const INDUCTION_CAP: usize = 4096;

/// Scalar table `α(x, y)` with `ρ(x)ρ(y) = α(x, y) ρ(xy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCocycle {
    order: usize,
    values: Vec<Complex64>,
}

impl TwoCocycle {
    pub fn new(order: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != order * order {
            return Err(Error::DimensionMismatch(format!(
                "cocycle table has {} entries, expected {}",
                values.len(),
                order * order
            )));
        }
        Ok(TwoCocycle { order, values })
    }

    pub fn trivial(order: usize) -> Self {
        TwoCocycle {
            order,
            values: vec![ONE; order * order],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "cocycle table is not square".into(),
            ));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.values[x * self.order + y]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.values.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().all(|v| (v - ONE).norm() <= tol)
    }

    /// Cocycle identity and normalization at the identity; returns the
    /// largest deviation.
    pub fn validate(&self, group: &FiniteGroup, tol: f64) -> Result<f64> {
        let n = group.order();
        if n != self.order {
            return Err(Error::DimensionMismatch(
                "cocycle order differs from group order".into(),
            ));
        }
        let e = group.identity();
        let mut worst = (0.0, [0, 0, 0]);
        for x in 0..n {
            for (dev, w) in [
                ((self.get(e, x) - ONE).norm(), [e, x, e]),
                ((self.get(x, e) - ONE).norm(), [x, e, e]),
            ] {
                if dev > worst.0 {
                    worst = (dev, w);
                }
            }
            for y in 0..n {
                let xy = group.mul(x, y);
                for z in 0..n {
                    let lhs = self.get(x, y) * self.get(xy, z);
                    let rhs = self.get(y, z) * self.get(x, group.mul(y, z));
                    let dev = (lhs - rhs).norm();
                    if dev > worst.0 {
                        worst = (dev, [x, y, z]);
                    }
                }
            }
        }
        if worst.0 > tol {
            return Err(Error::NotACocycle {
                witness: worst.1,
                deviation: worst.0,
            });
        }
        Ok(worst.0)
    }

    /// Restrict to a subgroup (local indexing of `sub.as_group()`).
    pub fn restrict(&self, sub: &Subgroup) -> TwoCocycle {
        let m = sub.members();
        let k = m.len();
        let values = (0..k * k).map(|i| self.get(m[i / k], m[i % k])).collect();
        TwoCocycle { order: k, values }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub max_deviation: f64,
    pub worst_pair: (usize, usize),
    pub unitary: bool,
}

#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<CMat>,
    cocycle: Option<TwoCocycle>,
}

#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    pub projector: CMat,
    /// Index into the group's character table.
    pub irrep: usize,
    pub character: ClassFunction,
    pub multiplicity: usize,
    pub irrep_dim: usize,
    pub dim: usize,
}

impl Representation {
    /// Shape-checked constructor; see [`Representation::validate`] for the
    /// homomorphism law.
    pub fn new(
        group: Arc<FiniteGroup>,
        matrices: Vec<CMat>,
        cocycle: Option<TwoCocycle>,
    ) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices.first().map_or(0, |m| m.nrows());
        if dim == 0
            || matrices
                .iter()
                .any(|m| m.nrows() != dim || m.ncols() != dim)
        {
            return Err(Error::DimensionMismatch(
                "matrices must be square of a common nonzero size".into(),
            ));
        }
        if let Some(c) = &cocycle {
            if c.order != group.order() {
                return Err(Error::DimensionMismatch(
                    "cocycle order differs from group order".into(),
                ));
            }
        }
        Ok(Representation {
            group,
            dim,
            matrices,
            cocycle,
        })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize) -> CMat) -> Result<Self> {
        let matrices = (0..group.order()).map(f).collect();
        Self::new(group, matrices, None)
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![linalg::identity(dim); group.order()];
        Representation {
            group,
            dim,
            matrices,
            cocycle: None,
        }
    }

    /// `ρ(g) e_x = e_{gx}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = CMat::zeros(n, n);
                for x in 0..n {
                    m[(group.mul(g, x), x)] = ONE;
                }
                m
            })
            .collect();
        Representation {
            group,
            dim: n,
            matrices,
            cocycle: None,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn cocycle(&self) -> Option<&TwoCocycle> {
        self.cocycle.as_ref()
    }

    pub fn cocycle_value(&self, g: usize, h: usize) -> Complex64 {
        self.cocycle.as_ref().map_or(ONE, |c| c.get(g, h))
    }

    pub fn is_linear(&self) -> bool {
        self.cocycle
            .as_ref()
            .is_none_or(|c| c.is_trivial(crate::DEFAULT_TOL))
    }

    fn require_linear(&self) -> Result<()> {
        if self.is_linear() {
            Ok(())
        } else {
            Err(Error::NotLinear)
        }
    }

    /// Check `ρ(1) = I` and `ρ(g)ρ(h) = α(g,h)ρ(gh)` for all pairs.
    pub fn validate(&self, tol: f64) -> Result<ValidationReport> {
        let g = &self.group;
        let n = g.order();
        if let Some(c) = &self.cocycle {
            c.validate(g, tol)?;
        }
        let e = g.identity();
        let id_dev = linalg::frob(&(&self.matrices[e] - linalg::identity(self.dim)));
        let mut worst = (id_dev, (e, e));
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                let target = self.matrices[ab].scale(1.0) * self.cocycle_value(a, b);
                let scale = linalg::frob(&target).max(1.0);
                let dev = linalg::frob(&(&self.matrices[a] * &self.matrices[b] - target)) / scale;
                if dev > worst.0 {
                    worst = (dev, (a, b));
                }
            }
        }
        if worst.0 > tol {
            return Err(Error::NotARepresentation {
                g: worst.1 .0,
                h: worst.1 .1,
                deviation: worst.0,
            });
        }
        Ok(ValidationReport {
            max_deviation: worst.0,
            worst_pair: worst.1,
            unitary: self.is_unitary(tol),
        })
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = linalg::identity(self.dim);
        self.matrices
            .iter()
            .all(|m| linalg::frob(&(m * m.adjoint() - &id)) <= tol)
    }

    /// `g ↦ T ρ(g) T⁻¹`.
    pub fn conjugate_by(&self, t: &CMat) -> Result<Representation> {
        let t_inv = linalg::inverse(t)
            .ok_or_else(|| Error::InvalidInput("basis change is singular".into()))?;
        let matrices = self.matrices.iter().map(|m| t * m * &t_inv).collect();
        Ok(Representation {
            group: self.group.clone(),
            dim: self.dim,
            matrices,
            cocycle: self.cocycle.clone(),
        })
    }

    /// Equivalent unitary representation `T ρ T⁻¹` and the basis change `T`.
    ///
    /// Projective inputs are first rescaled to `|det ρ(g)| = 1` so that the
    /// cocycle takes values on the unit circle.
    pub fn unitarize(&self) -> Result<(Representation, CMat)> {
        let mut work = self.clone();
        if !self.is_linear() {
            let d = self.dim as f64;
            for m in work.matrices.iter_mut() {
                let det = m.clone().determinant().norm();
                *m = m.scale(det.powf(-1.0 / d));
            }
            work.cocycle = Some(cocycle_from_matrices(&work.group, &work.matrices)?);
        }
        let n = work.group.order() as f64;
        let mut h = CMat::zeros(self.dim, self.dim);
        for m in &work.matrices {
            h += m.adjoint() * m;
        }
        h /= Complex64::new(n, 0.0);
        let (t, t_inv) = linalg::hermitian_sqrt(&h);
        let matrices = work.matrices.iter().map(|m| &t * m * &t_inv).collect();
        Ok((
            Representation {
                group: work.group,
                dim: self.dim,
                matrices,
                cocycle: work.cocycle,
            },
            t,
        ))
    }

    pub fn character(&self) -> Result<ClassFunction> {
        self.require_linear()?;
        Ok(ClassFunction::new(
            self.group
                .conjugacy_classes()
                .iter()
                .map(|class| linalg::trace(&self.matrices[class[0]]))
                .collect(),
        ))
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        let chi = self.character()?;
        Ok(character::round_integer(character::inner_product(&self.group, &chi, &chi))? == 1)
    }

    /// Conjugation action `π(g)(M) = ρ(g) M ρ(g)⁻¹` on column-major
    /// vectorized d×d matrices. Cocycle scalars cancel, so the result is
    /// always linear.
    pub fn adjoint(&self) -> Representation {
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let m_inv = linalg::inverse(m).expect("representation matrices are invertible");
                linalg::sandwich_operator(m, &m_inv)
            })
            .collect();
        Representation {
            group: self.group.clone(),
            dim: self.dim * self.dim,
            matrices,
            cocycle: None,
        }
    }

    /// Projectors `(dᵢ/|G|) Σ conj(χᵢ(g)) ρ(g)` for every irreducible that
    /// occurs.
    pub fn isotypic_decomposition(&self, tol: f64) -> Result<Vec<IsotypicComponent>> {
        self.require_linear()?;
        let table = self.group.character_table();
        let chi = self.character()?;
        let n = self.group.order() as f64;
        let mut out = Vec::new();
        let mut total = CMat::zeros(self.dim, self.dim);
        for (idx, irr) in table.characters.iter().enumerate() {
            let mult = character::multiplicity(&self.group, irr, &chi)?;
            if mult == 0 {
                continue;
            }
            let irrep_dim = irr.degree().round() as usize;
            let mut p = CMat::zeros(self.dim, self.dim);
            for (g, m) in self.matrices.iter().enumerate() {
                p += m * irr.at(&self.group, g).conj();
            }
            p *= Complex64::new(irrep_dim as f64 / n, 0.0);
            let idem = linalg::frob(&(&p * &p - &p));
            if idem > tol.max(1e-8) * (self.dim as f64).max(1.0) {
                return Err(Error::ToleranceFailure(format!(
                    "isotypic projector {idx} not idempotent ({idem:.3e})"
                )));
            }
            total += &p;
            out.push(IsotypicComponent {
                projector: p,
                irrep: idx,
                character: irr.clone(),
                multiplicity: mult,
                irrep_dim,
                dim: mult * irrep_dim,
            });
        }
        let dev = linalg::frob(&(total - linalg::identity(self.dim)));
        if dev > tol.max(1e-8) * (self.dim as f64).max(1.0) {
            return Err(Error::ToleranceFailure(format!(
                "isotypic projectors do not sum to I ({dev:.3e})"
            )));
        }
        Ok(out)
    }

    /// Restriction to a subgroup, as a representation of `sub.as_group()`.
    pub fn restrict(&self, sub: &Subgroup) -> Representation {
        Representation {
            group: sub.as_group(),
            dim: self.dim,
            matrices: sub
                .members()
                .iter()
                .map(|&h| self.matrices[h].clone())
                .collect(),
            cocycle: self.cocycle.as_ref().map(|c| c.restrict(sub)),
        }
    }

    pub fn direct_sum(reps: &[Representation]) -> Result<Representation> {
        let first = reps
            .first()
            .ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        if reps
            .iter()
            .any(|r| !Arc::ptr_eq(&r.group, &first.group) || !r.is_linear())
        {
            return Err(Error::InvalidInput(
                "direct sum needs linear representations of one group".into(),
            ));
        }
        let matrices = (0..first.group.order())
            .map(|g| {
                linalg::block_diag(
                    &reps
                        .iter()
                        .map(|r| r.matrices[g].clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Representation::new(first.group.clone(), matrices, None)
    }

    /// Internal tensor product of two representations of the same group.
    pub fn tensor(&self, other: &Representation) -> Result<Representation> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::InvalidInput(
                "tensor factors must share a group".into(),
            ));
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| linalg::kron(a, b))
            .collect();
        let cocycle = match (&self.cocycle, &other.cocycle) {
            (None, None) => None,
            _ => {
                let n = self.group.order();
                let values = (0..n * n)
                    .map(|i| self.cocycle_value(i / n, i % n) * other.cocycle_value(i / n, i % n))
                    .collect();
                Some(TwoCocycle::new(n, values)?)
            }
        };
        Representation::new(self.group.clone(), matrices, cocycle)
    }

    /// Outer tensor product on `FiniteGroup::direct_product(a.group, b.group)`.
    pub fn outer_tensor(
        a: &Representation,
        b: &Representation,
        product: Arc<FiniteGroup>,
    ) -> Result<Representation> {
        let n2 = b.group.order();
        if product.order() != a.group.order() * n2 {
            return Err(Error::DimensionMismatch("product group order".into()));
        }
        if !a.is_linear() || !b.is_linear() {
            return Err(Error::NotLinear);
        }
        let matrices = (0..product.order())
            .map(|x| linalg::kron(&a.matrices[x / n2], &b.matrices[x % n2]))
            .collect();
        Representation::new(product, matrices, None)
    }
}

/// `α(g,h) = tr(ρ(gh)⁻¹ ρ(g) ρ(h)) / d`.
pub fn cocycle_from_matrices(group: &FiniteGroup, matrices: &[CMat]) -> Result<TwoCocycle> {
    let n = group.order();
    let d = matrices[0].nrows() as f64;
    let inverses: Vec<CMat> = matrices
        .iter()
        .map(|m| linalg::inverse(m).ok_or_else(|| Error::InvalidInput("singular matrix".into())))
        .collect::<Result<_>>()?;
    let mut values = vec![ZERO; n * n];
    for g in 0..n {
        for h in 0..n {
            values[g * n + h] =
                linalg::trace(&(&inverses[group.mul(g, h)] * &matrices[g] * &matrices[h])) / d;
        }
    }
    TwoCocycle::new(n, values)
}

/// Character of `Ind_H^G` of a class function of `H`.
pub fn induced_character(sub: &Subgroup, chi: &ClassFunction) -> ClassFunction {
    let g = sub.parent();
    let hg = sub.as_group();
    let values = g
        .conjugacy_classes()
        .iter()
        .map(|class| {
            let rep = class[0];
            let mut s = ZERO;
            for x in 0..g.order() {
                let y = g.mul(g.mul(g.inv(x), rep), x);
                if let Some(local) = sub.local_index(y) {
                    s += chi.at(&hg, local);
                }
            }
            s / sub.order() as f64
        })
        .collect();
    ClassFunction::new(values)
}

/// Character of the restriction of a class function of `G` to `H`.
pub fn restricted_character(sub: &Subgroup, chi: &ClassFunction) -> ClassFunction {
    let g = sub.parent();
    let hg = sub.as_group();
    ClassFunction::new(
        hg.conjugacy_classes()
            .iter()
            .map(|class| chi.at(g, sub.members()[class[0]]))
            .collect(),
    )
}

/// Induce a linear representation of `sub.as_group()` to the parent group.
///
/// Basis order: blocks follow the left transversal, inner index follows the
/// basis of `w`.
pub fn induce(sub: &Subgroup, w: &Representation, cap: usize) -> Result<Representation> {
    if !Arc::ptr_eq(w.group(), &sub.as_group()) {
        return Err(Error::InvalidInput(
            "representation is not over the given subgroup".into(),
        ));
    }
    w.require_linear()?;
    let l = sub.index();
    let dim = l * w.dim();
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "induced representation dimension",
            size: dim,
            cap,
        });
    }
    let g = sub.parent();
    let t = left_transversal(g, sub);
    let k = w.dim();
    let matrices = (0..g.order())
        .map(|x| {
            let mut m = CMat::zeros(dim, dim);
            for j in 0..l {
                let (i, h) = t.decompose(x, j);
                let local = sub.local_index(h).expect("decomposition lands in H");
                m.view_mut((i * k, j * k), (k, k))
                    .copy_from(w.matrix(local));
            }
            m
        })
        .collect();
    Representation::new(g.clone(), matrices, None)
}

/// Whether `χ_V = Ind_H^G χ_W`. When true, the multiplicity of `W` in
/// `Res_H V` must be one.
pub fn is_induced_from(
    v: &Representation,
    sub: &Subgroup,
    w: &Representation,
    tol: f64,
) -> Result<bool> {
    if v.dim() != sub.index() * w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim V = {} but [G:H]·dim W = {}",
            v.dim(),
            sub.index() * w.dim()
        )));
    }
    let chi_v = v.character()?;
    let chi_w = w.character()?;
    let induced = induced_character(sub, &chi_w);
    if !induced.approx_eq(&chi_v, tol.max(crate::ROUNDING_TOL)) {
        return Ok(false);
    }
    let res = restricted_character(sub, &chi_v);
    let mult = character::multiplicity(&sub.as_group(), &chi_w, &res)?;
    if mult != 1 {
        return Err(Error::AssertionFailure(format!(
            "characters match but W occurs {mult} times in Res_H V"
        )));
    }
    Ok(true)
}

/// Basis of `{ f : f ρ_V(g) = ρ_W(g) f }` as `dim W × dim V` matrices.
pub fn equivariant_hom_space(
    v: &Representation,
    w: &Representation,
    tol: f64,
) -> Result<Vec<CMat>> {
    if !Arc::ptr_eq(v.group(), w.group()) {
        return Err(Error::InvalidInput(
            "representations must share a group".into(),
        ));
    }
    let (dv, dw) = (v.dim(), w.dim());
    let iv = linalg::identity(dv);
    let iw = linalg::identity(dw);
    let gens = v.group().generators();
    let blocks: Vec<CMat> = gens
        .iter()
        .map(|&g| {
            linalg::sandwich_operator(&iw, v.matrix(g))
                - linalg::sandwich_operator(w.matrix(g), &iv)
        })
        .collect();
    let ns = if blocks.is_empty() {
        linalg::identity(dv * dw)
    } else {
        linalg::nullspace(&linalg::vstack(&blocks, dv * dw), tol)
    };
    Ok(ns
        .column_iter()
        .map(|col| linalg::unvectorize(col.as_slice(), dw, dv))
        .collect())
}
