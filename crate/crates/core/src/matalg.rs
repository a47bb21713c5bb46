//! Products, centralizers and Wedderburn structure of matrix subalgebras.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{self, CMat, CVec, ONE};
use crate::rep::Representation;
use crate::subspace::MatrixSubspace;
use crate::{EIGEN_GAP, MAX_RETRIES};

/// Span of all products `m n` with `m ∈ M`, `n ∈ N`.
pub fn span_product(m: &MatrixSubspace, n: &MatrixSubspace, tol: f64) -> MatrixSubspace {
    let d = m.ambient_dim();
    let left = m.matrices();
    let right = n.matrices();
    let mut cols = Vec::with_capacity(left.len() * right.len());
    for a in &left {
        for b in &right {
            cols.push(linalg::vectorize(&(a * b)));
        }
    }
    MatrixSubspace::from_vectors(d, &cols, tol)
}

/// Whether `S·S ⊆ S`.
pub fn is_product_closed(s: &MatrixSubspace, tol: f64) -> bool {
    let mats = s.matrices();
    // Basis elements have unit norm, so an absolute residual is the right scale.
    let check = tol.max(crate::SUBSPACE_EQ_TOL * 1e-2);
    mats.iter()
        .all(|a| mats.iter().all(|b| s.residual(&(a * b)) <= check))
}

/// Smallest product-closed subspace containing `s` (and `I` when asked).
pub fn generated_algebra(s: &MatrixSubspace, include_identity: bool, tol: f64) -> MatrixSubspace {
    let d = s.ambient_dim();
    let mut current = if include_identity {
        s.sum(&MatrixSubspace::scalars(d), tol)
    } else {
        s.clone()
    };
    loop {
        let next = current.sum(&span_product(&current, &current, tol), tol);
        if next.dim() == current.dim() {
            return current;
        }
        current = next;
    }
}

/// `{ X : X b = b X for all b ∈ B }`
pub fn centralizer(b: &MatrixSubspace, tol: f64) -> MatrixSubspace {
    let d = b.ambient_dim();
    if b.dim() == 0 {
        return MatrixSubspace::full(d);
    }
    let id = linalg::identity(d);
    let blocks: Vec<CMat> = b
        .matrices()
        .iter()
        .map(|m| linalg::sandwich_operator(&id, m) - linalg::sandwich_operator(m, &id))
        .collect();
    let ns = linalg::nullspace(&linalg::vstack(&blocks, d * d), tol);
    MatrixSubspace::from_orthonormal(d, ns)
}

pub fn center(b: &MatrixSubspace, tol: f64) -> MatrixSubspace {
    b.intersection(&centralizer(b, tol), tol)
}

/// `Z₀(B)`: span of the central primitive idempotents.
pub fn z0(b: &MatrixSubspace, seed: u64, tol: f64) -> Result<MatrixSubspace> {
    let e = central_primitive_idempotents(b, seed, tol)?;
    Ok(MatrixSubspace::from_matrices(b.ambient_dim(), &e, tol))
}

/// Structure constants: `L[i]` is left multiplication by basis element `i`
/// in the orthonormal basis of `B`. Fails if `B` is not product-closed.
fn left_multiplication(b: &MatrixSubspace, tol: f64) -> Result<Vec<CMat>> {
    let mats = b.matrices();
    let k = mats.len();
    let mut out = Vec::with_capacity(k);
    for a in &mats {
        let mut l = CMat::zeros(k, k);
        for (j, m) in mats.iter().enumerate() {
            let prod = a * m;
            if b.residual(&prod) > tol.max(1e-7) {
                return Err(Error::InvalidInput(
                    "subspace is not closed under multiplication".into(),
                ));
            }
            l.set_column(j, &b.coordinates(&prod));
        }
        out.push(l);
    }
    Ok(out)
}

/// Nondegeneracy of the trace form `tr(L_x L_y)`. On failure the error
/// carries a radical element as witness.
pub fn semisimplicity_certificate(b: &MatrixSubspace, tol: f64) -> Result<()> {
    if b.dim() == 0 {
        return Ok(());
    }
    let ls = left_multiplication(b, tol)?;
    let k = ls.len();
    let gram = CMat::from_fn(k, k, |i, j| linalg::trace(&(&ls[i] * &ls[j])));
    let radical = linalg::nullspace(&gram, tol.max(1e-10));
    if radical.ncols() > 0 {
        let witness = b.basis() * radical.column(0);
        let m = linalg::unvectorize(witness.as_slice(), b.ambient_dim(), b.ambient_dim());
        return Err(Error::NotSemisimple(format!(
            "trace form has a {}-dimensional radical; witness {:?}",
            radical.ncols(),
            round_matrix(&m)
        )));
    }
    Ok(())
}

fn round_matrix(m: &CMat) -> Vec<Vec<(f64, f64)>> {
    let r = |x: f64| (x * 1e6).round() / 1e6 + 0.0;
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| (r(m[(i, j)].re), r(m[(i, j)].im)))
                .collect()
        })
        .collect()
}

/// Multiplicative identity of `B`, if it has one.
pub fn unit_element(b: &MatrixSubspace, tol: f64) -> Option<CMat> {
    if b.dim() == 0 {
        return None;
    }
    let d = b.ambient_dim();
    let mats = b.matrices();
    let k = mats.len();
    // Σ_i x_i b_i b_j = b_j and Σ_i x_i b_j b_i = b_j for every j.
    let mut a = CMat::zeros(2 * k * d * d, k);
    let mut rhs = CVec::zeros(2 * k * d * d);
    for (j, bj) in mats.iter().enumerate() {
        let target = linalg::vectorize(bj);
        for side in 0..2 {
            let row0 = (2 * j + side) * d * d;
            rhs.rows_mut(row0, d * d).copy_from(&target);
            for (i, bi) in mats.iter().enumerate() {
                let prod = if side == 0 { bi * bj } else { bj * bi };
                a.view_mut((row0, i), (d * d, 1))
                    .copy_from(&linalg::vectorize(&prod));
            }
        }
    }
    // Least squares through QR; the basis is independent, so `a` has full column rank.
    let qr = a.clone().qr();
    let x = qr.r().solve_upper_triangular(&(qr.q().adjoint() * &rhs))?;
    if (&a * &x - &rhs).norm() > tol.max(1e-8) * (k as f64).sqrt() * 10.0 {
        return None;
    }
    let u = b.basis() * x;
    Some(linalg::unvectorize(u.as_slice(), d, d))
}

fn idempotent_key(e: &CMat) -> (i64, Vec<(i64, i64)>) {
    let q = |x: f64| {
        let v = (x * 1e6).round() as i64;
        if v == 0 {
            0
        } else {
            v
        }
    };
    let rank = linalg::trace(e).re.round() as i64;
    let mut entries = Vec::new();
    for i in 0..e.nrows() {
        for j in 0..e.ncols() {
            entries.push((-q(e[(i, j)].re), -q(e[(i, j)].im)));
        }
    }
    (rank, entries)
}

/// Central primitive idempotents `e₁, …, e_l` of a semisimple algebra.
///
/// A random element `z` of the center is diagonalized through its
/// multiplication operator on the center; with distinct eigenvalues
/// `λ₁, …, λ_l`, Lagrange interpolation gives `eᵢ = Π_{j≠i} (z − λⱼ)/(λᵢ − λⱼ)`.
/// Output is sorted by rank, then by entries, so it does not depend on the seed.
pub fn central_primitive_idempotents(b: &MatrixSubspace, seed: u64, tol: f64) -> Result<Vec<CMat>> {
    semisimplicity_certificate(b, tol)?;
    if b.dim() == 0 {
        return Ok(Vec::new());
    }
    let d = b.ambient_dim();
    let unit =
        unit_element(b, tol).ok_or_else(|| Error::NotSemisimple("algebra has no unit".into()))?;
    let z = center(b, tol);
    let basis = z.matrices();
    let l = basis.len();
    if l == 1 {
        return Ok(vec![unit]);
    }
    let scale = linalg::frob(&unit).max(1.0);
    let check_tol = tol.max(1e-8) * scale * 1e2;
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut elem = CMat::zeros(d, d);
        for m in &basis {
            elem += m * linalg::random_complex(&mut rng);
        }
        let mut op = CMat::zeros(l, l);
        for (j, m) in basis.iter().enumerate() {
            op.set_column(j, &z.coordinates(&(&elem * m)));
        }
        let Some(eigs) = op.eigenvalues() else {
            continue;
        };
        let lambdas: Vec<Complex64> = eigs.iter().copied().collect();
        let spread = lambdas
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let distinct =
            (0..l).all(|i| (0..i).all(|j| (lambdas[i] - lambdas[j]).norm() > EIGEN_GAP * spread));
        if !distinct {
            continue;
        }
        let mut idem = Vec::with_capacity(l);
        for i in 0..l {
            let mut e = unit.clone();
            for j in 0..l {
                if i != j {
                    e = e * (&elem - &unit * lambdas[j]) / (lambdas[i] - lambdas[j]);
                }
            }
            idem.push(e);
        }
        let mut ok = true;
        let mut total = CMat::zeros(d, d);
        for (i, a) in idem.iter().enumerate() {
            total += a;
            for (j, c) in idem.iter().enumerate() {
                let target = if i == j { a.clone() } else { CMat::zeros(d, d) };
                if linalg::frob(&(a * c - target)) > check_tol {
                    ok = false;
                }
            }
        }
        if !ok || linalg::frob(&(total - &unit)) > check_tol {
            continue;
        }
        idem.sort_by_key(idempotent_key);
        return Ok(idem);
    }
    Err(Error::NotSemisimple(format!(
        "central idempotent recovery failed after {MAX_RETRIES} attempts"
    )))
}

#[derive(Debug, Clone)]
pub struct Wedderburn {
    pub idempotents: Vec<CMat>,
    pub components: Vec<MatrixSubspace>,
    /// `kᵢ` with `eᵢB ≅ M_{kᵢ}(ℂ)`.
    pub component_dims: Vec<usize>,
    /// `m'ᵢ`: multiplicity of the simple `eᵢB`-module in `ℂ^d`.
    pub multiplicities: Vec<usize>,
}

impl Wedderburn {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    pub fn all_isomorphic(&self) -> bool {
        self.component_dims.windows(2).all(|w| w[0] == w[1])
    }

    pub fn equal_multiplicities(&self) -> bool {
        self.multiplicities.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn wedderburn_decompose(b: &MatrixSubspace, seed: u64, tol: f64) -> Result<Wedderburn> {
    let idempotents = central_primitive_idempotents(b, seed, tol)?;
    let d = b.ambient_dim();
    let mats = b.matrices();
    let mut components = Vec::new();
    let mut component_dims = Vec::new();
    let mut multiplicities = Vec::new();
    for e in &idempotents {
        let comp =
            MatrixSubspace::from_matrices(d, &mats.iter().map(|m| e * m).collect::<Vec<_>>(), tol);
        let k = (comp.dim() as f64).sqrt().round() as usize;
        if k * k != comp.dim() {
            return Err(Error::NotSemisimple(format!(
                "component of dimension {} is not a full matrix algebra",
                comp.dim()
            )));
        }
        let rank = linalg::trace(e).re.round() as usize;
        if !rank.is_multiple_of(k) {
            return Err(Error::NotSemisimple(format!(
                "idempotent rank {rank} is not a multiple of {k}"
            )));
        }
        components.push(comp);
        component_dims.push(k);
        multiplicities.push(rank / k);
    }
    Ok(Wedderburn {
        idempotents,
        components,
        component_dims,
        multiplicities,
    })
}

/// Summary of the induction datum a subalgebra was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatumSummary {
    pub subgroup: Vec<usize>,
    pub w_dim: usize,
    pub c_dim: usize,
    pub factor_dims: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct InvariantSubalgebra {
    pub space: MatrixSubspace,
    pub unital: bool,
    pub idempotents: Vec<CMat>,
    pub component_dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
    pub induction_datum: Option<DatumSummary>,
}

impl InvariantSubalgebra {
    /// Attach Wedderburn metadata to a product-closed subspace.
    pub fn analyze(space: MatrixSubspace, seed: u64, tol: f64) -> Result<Self> {
        let w = wedderburn_decompose(&space, seed, tol)?;
        Ok(InvariantSubalgebra {
            unital: space.contains_identity(tol.max(1e-8)),
            space,
            idempotents: w.idempotents,
            component_dims: w.component_dims,
            multiplicities: w.multiplicities,
            induction_datum: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn num_components(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_simple(&self) -> bool {
        self.idempotents.len() == 1
    }
}

/// Whether `π(g)(b) ∈ B` for every generator `g` and basis element `b`.
pub fn is_invariant(b: &MatrixSubspace, adjoint: &Representation, tol: f64) -> bool {
    adjoint.group().generators().iter().all(|&g| {
        let image = adjoint.matrix(g) * b.basis();
        image
            .column_iter()
            .all(|col| b.contains_vec(&col.into_owned(), tol.max(1e-8)))
    })
}

/// All Wedderburn components isomorphic and all simple modules occurring
/// with one multiplicity. Cross-checked against the centralizer, whose
/// components must then be isomorphic as well.
pub fn is_symmetrically_embedded(b: &MatrixSubspace, seed: u64, tol: f64) -> Result<bool> {
    let w = wedderburn_decompose(b, seed, tol)?;
    let direct = w.all_isomorphic() && w.equal_multiplicities();
    let zw = wedderburn_decompose(&centralizer(b, tol), seed, tol)?;
    let dual = w.all_isomorphic() && zw.all_isomorphic();
    if direct != dual {
        return Err(Error::AssertionFailure(format!(
            "symmetric embedding criteria disagree: components {:?}, multiplicities {:?}, centralizer components {:?}",
            w.component_dims, w.multiplicities, zw.component_dims
        )));
    }
    Ok(direct)
}

/// `Z(Z(B)) = B`
pub fn double_centralizer_check(b: &MatrixSubspace, tol: f64) -> bool {
    centralizer(&centralizer(b, tol), tol).approx_eq(b, crate::SUBSPACE_EQ_TOL)
}

#[derive(Debug, Clone)]
pub struct PermutationAction {
    /// `perms[g][i] = j` when `π(g)(eᵢ) = eⱼ`.
    pub perms: Vec<Vec<usize>>,
    pub transitive: bool,
}

/// Permutation of the central primitive idempotents induced by the adjoint action.
pub fn permutation_action(
    idempotents: &[CMat],
    adjoint: &Representation,
    tol: f64,
) -> Result<PermutationAction> {
    let group = adjoint.group();
    let vecs: Vec<CVec> = idempotents.iter().map(linalg::vectorize).collect();
    let match_tol = tol.max(1e-8) * 1e2;
    let mut perms = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let mut perm = Vec::with_capacity(vecs.len());
        for (i, v) in vecs.iter().enumerate() {
            let image = adjoint.matrix(g) * v;
            let scale = v.norm().max(1.0);
            let j = vecs
                .iter()
                .position(|w| (&image - w).norm() < match_tol * scale)
                .ok_or(Error::MatchFailure {
                    element: g,
                    index: i,
                })?;
            perm.push(j);
        }
        perms.push(perm);
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            let gh = group.mul(g, h);
            if (0..vecs.len()).any(|i| perms[g][perms[h][i]] != perms[gh][i]) {
                return Err(Error::AssertionFailure(format!(
                    "idempotent permutation is not a homomorphism at ({g}, {h})"
                )));
            }
        }
    }
    let transitive = vecs.is_empty() || {
        let mut orbit = vec![false; vecs.len()];
        for p in &perms {
            orbit[p[0]] = true;
        }
        orbit.iter().all(|&x| x)
    };
    Ok(PermutationAction { perms, transitive })
}

/// Stabilizer of `eᵢ`; its index must equal the number of idempotents.
pub fn inertia_subgroup(
    idempotents: &[CMat],
    adjoint: &Representation,
    i: usize,
    tol: f64,
) -> Result<Subgroup> {
    let action = permutation_action(idempotents, adjoint, tol)?;
    let members: Vec<usize> = (0..adjoint.group().order())
        .filter(|&g| action.perms[g][i] == i)
        .collect();
    let sub = Subgroup::new(adjoint.group().clone(), members)?;
    if sub.index() != idempotents.len() {
        return Err(Error::AssertionFailure(format!(
            "inertia subgroup has index {} but there are {} idempotents",
            sub.index(),
            idempotents.len()
        )));
    }
    Ok(sub)
}

/// Matrix unit `E_ij` in `M_d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = ONE;
    m
}
