//! Invariant subalgebras by isotypic subset scan, central simple ones
//! among them, and the tensor factorizations they induce.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideals::LATTICE_CAP;
use crate::linalg::{self, CMat};
use crate::matalg;
use crate::rep::{cocycle_from_matrices, Representation};
use crate::subspace::MatrixSubspace;
use crate::{MAX_RETRIES, SUBSPACE_EQ_TOL};

#[derive(Debug, Clone)]
pub struct ScanResult {
    /// Product-closed invariant subspaces containing `I`, sorted by (dim, fingerprint).
    pub unital: Vec<MatrixSubspace>,
    /// Product-closed invariant subspaces without `I`, including `{0}`.
    pub nonunital: Vec<MatrixSubspace>,
    /// The adjoint action was multiplicity free, so the lists are complete.
    pub certified: bool,
}

pub(crate) fn sort_dedupe(list: &mut Vec<MatrixSubspace>) {
    list.sort_by_key(|a| (a.dim(), a.fingerprint()));
    let mut out: Vec<MatrixSubspace> = Vec::with_capacity(list.len());
    for s in list.drain(..) {
        if !out.iter().any(|t| t.approx_eq(&s, SUBSPACE_EQ_TOL)) {
            out.push(s);
        }
    }
    *list = out;
}

fn subspace_of_projector(d: usize, p: &CMat) -> MatrixSubspace {
    MatrixSubspace::from_column_matrix(d, p, 1e-6)
}

/// Scan sums of isotypic components of the adjoint action on `End(W)`.
///
/// `adjoint` acts on column-major vectorized `d × d` matrices. With a
/// multiplicity-free action every invariant subspace is such a sum, so the
/// scan is exhaustive; otherwise it is extended by the algebras generated
/// by each component together with `I`, and left uncertified.
pub fn multfree_scan(adjoint: &Representation, tol: f64) -> Result<ScanResult> {
    let d2 = adjoint.dim();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 {
        return Err(Error::DimensionMismatch(format!(
            "adjoint dimension {d2} is not a square"
        )));
    }
    let comps = adjoint.isotypic_decomposition(tol)?;
    let m = comps.len();
    if m >= usize::BITS as usize || (1usize << m) > LATTICE_CAP {
        return Err(Error::CapExceeded {
            what: "isotypic subset scan",
            size: 1usize.checked_shl(m as u32).unwrap_or(usize::MAX),
            cap: LATTICE_CAP,
        });
    }
    let spaces: Vec<MatrixSubspace> = comps
        .iter()
        .map(|c| subspace_of_projector(d, &c.projector))
        .collect();
    let certified = comps.iter().all(|c| c.multiplicity == 1);
    let id = linalg::identity(d);

    let candidates: Vec<MatrixSubspace> = if certified {
        // The product of two components is invariant, hence a sum of components.
        let support: Vec<Vec<u64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let prod = matalg::span_product(&spaces[i], &spaces[j], tol);
                        let mut mask = 0u64;
                        for (k, s) in spaces.iter().enumerate() {
                            if prod.dim() > 0 && prod.containment_residual(s) < 1e-6 {
                                mask |= 1 << k;
                            }
                        }
                        mask
                    })
                    .collect()
            })
            .collect();
        (0..(1u64 << m))
            .filter(|&mask| {
                (0..m).filter(|&i| mask >> i & 1 == 1).all(|i| {
                    (0..m)
                        .filter(|&j| mask >> j & 1 == 1)
                        .all(|j| support[i][j] & !mask == 0)
                })
            })
            .map(|mask| sum_of(d, &spaces, mask))
            .collect()
    } else {
        let mut list: Vec<MatrixSubspace> = (0..(1u64 << m))
            .into_par_iter()
            .map(|mask| sum_of(d, &spaces, mask))
            .filter(|s| matalg::is_product_closed(s, tol))
            .collect();
        for s in &spaces {
            let gen = matalg::generated_algebra(s, true, tol);
            if matalg::is_invariant(&gen, adjoint, tol) {
                list.push(gen);
            }
        }
        list
    };

    let mut unital = Vec::new();
    let mut nonunital = Vec::new();
    for s in candidates {
        if s.contains(&id, 1e-8) {
            unital.push(s);
        } else {
            nonunital.push(s);
        }
    }
    sort_dedupe(&mut unital);
    sort_dedupe(&mut nonunital);
    Ok(ScanResult {
        unital,
        nonunital,
        certified,
    })
}

fn sum_of(d: usize, spaces: &[MatrixSubspace], mask: u64) -> MatrixSubspace {
    let parts: Vec<CMat> = spaces
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, s)| s.basis().clone())
        .collect();
    if parts.is_empty() {
        return MatrixSubspace::zero(d);
    }
    MatrixSubspace::from_column_matrix(d, &linalg::hstack(&parts, d * d), 1e-10)
}

/// Center equal to the scalars and a nondegenerate trace form.
pub fn is_central_simple(b: &MatrixSubspace, tol: f64) -> bool {
    b.dim() > 0
        && b.contains_identity(1e-8)
        && matalg::center(b, tol).dim() == 1
        && matalg::semisimplicity_certificate(b, tol).is_ok()
}

/// Central simple subalgebras of `End(W)` stable under conjugation by `W`.
///
/// The list is certified complete when the adjoint action is multiplicity
/// free, or when `dim W` is 1 or prime (then `ℂ` and `End(W)` are the only
/// central simple subalgebras containing `I`).
pub fn central_simple_invariant_subalgebras(
    w: &Representation,
    tol: f64,
) -> Result<(Vec<MatrixSubspace>, bool)> {
    let scan = multfree_scan(&w.adjoint(), tol)?;
    let d = w.dim();
    let mut out: Vec<MatrixSubspace> = scan
        .unital
        .into_iter()
        .filter(|b| is_central_simple(b, tol))
        .collect();
    out.push(MatrixSubspace::scalars(d));
    out.push(MatrixSubspace::full(d));
    sort_dedupe(&mut out);
    Ok((out, scan.certified || is_prime_or_one(d)))
}

fn is_prime_or_one(n: usize) -> bool {
    n == 1 || (n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k)))
}

#[derive(Debug, Clone)]
pub struct DualPairFactorization {
    pub b: MatrixSubspace,
    pub z: MatrixSubspace,
    pub a_dim: usize,
    pub b_dim: usize,
    pub sigma: Representation,
    pub tau: Representation,
    /// `λ_g` with `S⁻¹ρ(g)S = λ_g σ(g) ⊗ τ(g)`.
    pub scalars: Vec<Complex64>,
    /// Columns `e_{j1} u_k` at index `j·b + k`.
    pub basis_change: CMat,
    /// Largest relative reconstruction error over all group elements.
    pub residual: f64,
}

/// Split eigenvalues into `count` clusters of equal size `size`.
fn equal_clusters(
    values: &[Complex64],
    count: usize,
    size: usize,
    gap: f64,
) -> Option<Vec<Complex64>> {
    let mut centers: Vec<(Complex64, usize)> = Vec::new();
    for v in values {
        match centers.iter_mut().find(|(c, _)| (c - v).norm() <= gap) {
            Some(entry) => entry.1 += 1,
            None => centers.push((*v, 1)),
        }
    }
    (centers.len() == count && centers.iter().all(|(_, n)| *n == size))
        .then(|| centers.into_iter().map(|(c, _)| c).collect())
}

fn random_element(b: &MatrixSubspace, rng: &mut ChaCha8Rng) -> CMat {
    let d = b.ambient_dim();
    let mut x = CMat::zeros(d, d);
    for m in b.matrices() {
        x += m * linalg::random_complex(rng);
    }
    x
}

/// Primitive idempotents `p₁, …, p_a` of `B ≅ M_a`, each of rank `d / a`.
fn primitive_idempotents(b: &MatrixSubspace, a: usize, seed: u64, tol: f64) -> Result<Vec<CMat>> {
    let d = b.ambient_dim();
    let id = linalg::identity(d);
    if a == 1 {
        return Ok(vec![id]);
    }
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let x = random_element(b, &mut rng);
        let Some(eigs) = x.clone().eigenvalues() else {
            continue;
        };
        let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let Some(lambdas) = equal_clusters(eigs.as_slice(), a, d / a, 1e-6 * scale) else {
            continue;
        };
        let mut ps = Vec::with_capacity(a);
        for i in 0..a {
            let mut p = id.clone();
            for j in 0..a {
                if i != j {
                    p = p * (&x - &id * lambdas[j]) / (lambdas[i] - lambdas[j]);
                }
            }
            ps.push(p);
        }
        let ok = ps
            .iter()
            .all(|p| linalg::frob(&(p * p - p)) < tol.max(1e-8) * 1e3 * linalg::frob(p).max(1.0));
        if ok {
            return Ok(ps);
        }
    }
    Err(Error::NotCentralSimple(format!(
        "no splitting element found after {MAX_RETRIES} attempts"
    )))
}

/// Rank-one factorization `M = σ ⊗ τ` by rearrangement; returns the
/// relative residual of the best rank-one fit.
///
/// The rearranged matrix is `vec(σ) vec(τ)ᵀ`, so its largest column is a
/// multiple of `vec(σ)` and projecting onto it gives `vec(τ)`. This avoids
/// the left singular vectors of nalgebra's complex SVD, which are unreliable
/// for exactly rank-one input with zero columns.
fn kron_factor(m: &CMat, a: usize, b: usize) -> (CMat, CMat, f64) {
    let r = CMat::from_fn(a * a, b * b, |row, col| {
        let (i1, j1) = (row % a, row / a);
        let (i2, j2) = (col % b, col / b);
        m[(i1 * b + i2, j1 * b + j2)]
    });
    let best = (0..r.ncols())
        .max_by(|&x, &y| {
            r.column(x)
                .norm()
                .total_cmp(&r.column(y).norm())
                .then(y.cmp(&x))
        })
        .expect("nonempty");
    let x = r.column(best).into_owned();
    let xx = x.norm_squared().max(f64::MIN_POSITIVE);
    let t = r.adjoint() * &x / Complex64::new(xx, 0.0);
    let tau_vec: Vec<Complex64> = t.iter().map(|z| z.conj()).collect();
    let fit = &x * CMat::from_row_slice(1, b * b, &tau_vec);
    let ratio = linalg::frob(&(&r - fit)) / linalg::frob(&r).max(f64::MIN_POSITIVE);
    let sigma = linalg::unvectorize(x.as_slice(), a, a);
    let tau = linalg::unvectorize(&tau_vec, b, b);
    (sigma, tau, ratio)
}

fn normalize_factor(m: &mut CMat) {
    let n = m.nrows() as f64;
    let det = m.clone().determinant().norm();
    if det > 0.0 {
        *m = m.scale(det.powf(-1.0 / n));
    }
    linalg::normalize_phase(m);
    *m = m.map(linalg::clean);
}

/// Realize `W ≅ ℂ^a ⊗ ℂ^b` with `B = M_a ⊗ 1` and recover the projective
/// factors `σ`, `τ` of `W`.
pub fn extract_factorization(
    b: &MatrixSubspace,
    w: &Representation,
    seed: u64,
    tol: f64,
) -> Result<DualPairFactorization> {
    let d = w.dim();
    if b.ambient_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "subalgebra lives in M_{} but dim W = {d}",
            b.ambient_dim()
        )));
    }
    let a = (b.dim() as f64).sqrt().round() as usize;
    if a * a != b.dim() || !d.is_multiple_of(a) {
        return Err(Error::NotCentralSimple(format!(
            "dimension {} is not a square dividing ({d})²",
            b.dim()
        )));
    }
    if !is_central_simple(b, tol) {
        return Err(Error::NotCentralSimple(
            "center is larger than the scalars or the algebra is not semisimple".into(),
        ));
    }
    let bb = d / a;
    let ps = primitive_idempotents(b, a, seed, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let y = random_element(b, &mut rng);
    let u = linalg::orthonormalize(&ps[0], 1e-6);
    if u.ncols() != bb {
        return Err(Error::NotCentralSimple(format!(
            "primitive idempotent has rank {}, expected {bb}",
            u.ncols()
        )));
    }
    let mut cols = Vec::with_capacity(d);
    for (j, p) in ps.iter().enumerate() {
        let mut e = if j == 0 {
            ps[0].clone()
        } else {
            p * &y * &ps[0]
        };
        let norm = linalg::frob(&e);
        if norm < 1e-10 {
            return Err(Error::NotCentralSimple("degenerate matrix unit".into()));
        }
        e /= Complex64::new(norm, 0.0);
        let block = e * &u;
        for k in 0..bb {
            cols.push(block.column(k).into_owned());
        }
    }
    let s = CMat::from_columns(&cols);
    let s_inv = linalg::inverse(&s).ok_or(Error::BlocksNotDirect(0.0))?;

    let mut sigmas = Vec::with_capacity(w.group().order());
    let mut taus = Vec::with_capacity(w.group().order());
    for (g, m) in w.matrices().iter().enumerate() {
        let local = &s_inv * m * &s;
        let (mut sg, mut tg, ratio) = kron_factor(&local, a, bb);
        if ratio > tol.max(1e-8) * 1e2 {
            return Err(Error::FactorRecoveryFailure { element: g, ratio });
        }
        normalize_factor(&mut sg);
        normalize_factor(&mut tg);
        sigmas.push(sg);
        taus.push(tg);
    }
    let mut scalars = Vec::with_capacity(sigmas.len());
    let mut residual = 0.0f64;
    for (g, m) in w.matrices().iter().enumerate() {
        let prod = &s * linalg::kron(&sigmas[g], &taus[g]) * &s_inv;
        let lambda = linalg::hs_inner(&prod, m) / linalg::hs_inner(&prod, &prod);
        let dev = linalg::frob(&(m - &prod * lambda)) / linalg::frob(m).max(1.0);
        if dev > tol.max(1e-8) * 1e2 {
            return Err(Error::FactorRecoveryFailure {
                element: g,
                ratio: dev,
            });
        }
        residual = residual.max(dev);
        scalars.push(lambda);
    }
    let group = w.group().clone();
    let sigma_cocycle = cocycle_from_matrices(&group, &sigmas)?;
    let tau_cocycle = cocycle_from_matrices(&group, &taus)?;
    let sigma = Representation::new(group.clone(), sigmas, Some(sigma_cocycle))?;
    let tau = Representation::new(group, taus, Some(tau_cocycle))?;
    Ok(DualPairFactorization {
        b: b.clone(),
        z: matalg::centralizer(b, tol),
        a_dim: a,
        b_dim: bb,
        sigma,
        tau,
        scalars,
        basis_change: s,
        residual,
    })
}

impl DualPairFactorization {
    /// Largest deviation of `α_ρ(g,h) = α_σ(g,h) α_τ(g,h) λ_g λ_h / λ_{gh}`.
    pub fn cocycle_deviation(&self, w: &Representation) -> f64 {
        let g = w.group();
        let mut worst = 0.0f64;
        for x in 0..g.order() {
            for y in 0..g.order() {
                let xy = g.mul(x, y);
                let rhs = self.sigma.cocycle_value(x, y)
                    * self.tau.cocycle_value(x, y)
                    * self.scalars[x]
                    * self.scalars[y]
                    / self.scalars[xy];
                worst = worst.max((w.cocycle_value(x, y) - rhs).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::matalg::matrix_unit;

    const TOL: f64 = 1e-9;

    #[test]
    fn scan_examples() {
        let c2 = catalog::entry("C2").unwrap();
        let one = multfree_scan(&c2.rep("sign").unwrap().adjoint(), TOL).unwrap();
        assert!(one.certified);
        assert_eq!(one.unital.len(), 1);
        let s3 = catalog::entry("S3").unwrap();
        let scan = multfree_scan(&s3.rep("std").unwrap().adjoint(), TOL).unwrap();
        assert!(scan.certified);
        assert_eq!(
            scan.unital
                .iter()
                .map(MatrixSubspace::dim)
                .collect::<Vec<_>>(),
            vec![1, 2, 4]
        );
        assert_eq!(
            scan.nonunital
                .iter()
                .map(MatrixSubspace::dim)
                .collect::<Vec<_>>(),
            vec![0]
        );
        let q8 = catalog::entry("Q8").unwrap();
        let scan = multfree_scan(&q8.rep("std").unwrap().adjoint(), TOL).unwrap();
        assert!(scan.certified);
        assert_eq!(
            scan.unital
                .iter()
                .map(MatrixSubspace::dim)
                .collect::<Vec<_>>(),
            vec![1, 2, 2, 2, 4]
        );
    }

    #[test]
    fn central_simple_examples() {
        let c2 = catalog::entry("C2").unwrap();
        let (list, certified) =
            central_simple_invariant_subalgebras(c2.rep("sign").unwrap(), TOL).unwrap();
        assert_eq!(list.len(), 1);
        assert!(certified);
        let s3 = catalog::entry("S3").unwrap();
        let (list, _) = central_simple_invariant_subalgebras(s3.rep("std").unwrap(), TOL).unwrap();
        assert_eq!(
            list.iter().map(MatrixSubspace::dim).collect::<Vec<_>>(),
            vec![1, 4]
        );
        let ss = catalog::entry("S3xS3").unwrap();
        let (list, certified) =
            central_simple_invariant_subalgebras(ss.rep("stdxstd").unwrap(), TOL).unwrap();
        assert!(certified);
        let left = MatrixSubspace::from_matrices(
            4,
            &(0..4)
                .map(|k| linalg::kron(&matrix_unit(2, k % 2, k / 2), &linalg::identity(2)))
                .collect::<Vec<_>>(),
            TOL,
        );
        let right = matalg::centralizer(&left, TOL);
        assert!(list.iter().any(|b| b.approx_eq(&left, 1e-6)));
        assert!(list.iter().any(|b| b.approx_eq(&right, 1e-6)));
    }

    #[test]
    fn trivial_factorizations() {
        let s3 = catalog::entry("S3").unwrap();
        let w = s3.rep("std").unwrap();
        let f = extract_factorization(&MatrixSubspace::full(2), w, 0, TOL).unwrap();
        assert_eq!((f.a_dim, f.b_dim), (2, 1));
        assert!(f.residual < 1e-8);
        let f = extract_factorization(&MatrixSubspace::scalars(2), w, 0, TOL).unwrap();
        assert_eq!((f.a_dim, f.b_dim), (1, 2));
        assert!(f.residual < 1e-8);
        let cartan =
            MatrixSubspace::from_matrices(2, &[matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)], TOL);
        assert!(matches!(
            extract_factorization(&cartan, w, 0, TOL),
            Err(Error::NotCentralSimple(_))
        ));
    }

    #[test]
    fn outer_tensor_factorization() {
        let ss = catalog::entry("S3xS3").unwrap();
        let w = ss.rep("stdxstd").unwrap();
        let left = MatrixSubspace::from_matrices(
            4,
            &(0..4)
                .map(|k| linalg::kron(&matrix_unit(2, k % 2, k / 2), &linalg::identity(2)))
                .collect::<Vec<_>>(),
            TOL,
        );
        let f = extract_factorization(&left, w, 0, TOL).unwrap();
        assert_eq!((f.a_dim, f.b_dim), (2, 2));
        assert!(f.residual < 1e-8, "residual {}", f.residual);
        assert!(f.cocycle_deviation(w) < 1e-8);
        let g = extract_factorization(&f.z, w, 0, TOL).unwrap();
        assert_eq!((g.a_dim, g.b_dim), (2, 2));
        assert!(g.residual < 1e-8);
        assert_eq!(f.b.dim() * f.z.dim(), 16);
    }

    #[test]
    fn twisted_dual_pairs_factor() {
        // Besides M2⊗1 and 1⊗M2 there is a pair mixing sign and standard
        // components, e.g. span{1, J⊗1, X⊗J, Y⊗J}.
        let ss = catalog::entry("S3xS3").unwrap();
        let w = ss.rep("stdxstd").unwrap();
        let (list, certified) = central_simple_invariant_subalgebras(w, TOL).unwrap();
        assert!(certified);
        let proper: Vec<_> = list.iter().filter(|b| b.dim() == 4).collect();
        assert_eq!(proper.len(), 4);
        for b in proper {
            let f = extract_factorization(b, w, 0, TOL).unwrap();
            assert!(f.residual < 1e-8, "residual {}", f.residual);
            assert!(f.cocycle_deviation(w) < 1e-8);
            assert!(list.iter().any(|c| c.approx_eq(&f.z, 1e-6)));
        }
    }
}
