//! Invariant subalgebras of `End(V)` from induction data.
//!
//! Every unital `G`-invariant subalgebra of `End(V)` for irreducible `V` is
//! `Θ(H, W, C)`: the block-diagonal algebra whose blocks are the translates
//! `ρ(gᵢ) C ρ(gᵢ)⁻¹` of an `H`-invariant central simple subalgebra `C` of
//! `End(W)`, where `V = Ind_H^G W`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::character::{self, ClassFunction};
use crate::error::{Error, Result};
use crate::factor;
use crate::group::{all_subgroups, left_transversal, Subgroup, Transversal, GROUP_ORDER_CAP};
use crate::linalg::{self, CMat};
use crate::matalg::{self, DatumSummary, InvariantSubalgebra};
use crate::rep::{self, Representation};
use crate::subspace::MatrixSubspace;
use crate::SUBSPACE_EQ_TOL;

/// Smallest singular value, relative to the largest, accepted for the
/// matrix of translated blocks.
const DIRECT_SUM_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct InductionPair {
    pub subgroup: Subgroup,
    /// Representation of `subgroup.as_group()`.
    pub w: Representation,
    /// Projector of `V` onto the distinguished copy of `W` in `Res_H V`.
    pub copy_projector: CMat,
    /// Orthonormal basis of that copy; `W(h) = U* ρ(h) U`.
    pub copy_basis: CMat,
    pub transversal: Transversal,
}

impl InductionPair {
    pub fn index(&self) -> usize {
        self.subgroup.index()
    }
}

#[derive(Debug, Clone)]
pub struct InductionDatum {
    /// Index into [`Enumeration::pairs`].
    pub pair: usize,
    /// `H`-invariant central simple subalgebra of `End(W)`.
    pub c: MatrixSubspace,
    /// `(a, b)` with `C ≅ M_a` and `a·b = dim W`.
    pub factor_dims: (usize, usize),
}

/// Character of `W` as a function on the elements of `H`.
fn element_character(w: &Representation) -> Vec<Complex64> {
    w.matrices().iter().map(linalg::trace).collect()
}

/// Pairs `(H, W)` with `V ≅ Ind_H^G W`, one per subgroup class and per
/// `N_G(H)`-orbit of constituents. Always starts with `(G, V)`.
pub fn induction_pairs(v: &Representation, tol: f64) -> Result<Vec<InductionPair>> {
    if !v.is_irreducible()? {
        return Err(Error::InvalidInput(
            "representation is not irreducible".into(),
        ));
    }
    let g = v.group();
    let d = v.dim();
    let subgroups = all_subgroups(g, GROUP_ORDER_CAP)?;
    let mut out = Vec::new();
    // Largest subgroup first so that (G, V) leads.
    for sub in subgroups.into_iter().rev() {
        if !d.is_multiple_of(sub.index()) {
            continue;
        }
        let k = d / sub.index();
        let hg = sub.as_group();
        let res = v.restrict(&sub);
        let chi_v = v.character()?;
        let mut seen: Vec<Vec<Complex64>> = Vec::new();
        for comp in res.isotypic_decomposition(tol)? {
            if comp.irrep_dim != k || comp.multiplicity != 1 {
                continue;
            }
            let induced = rep::induced_character(&sub, &comp.character);
            if !induced.approx_eq(&chi_v, crate::ROUNDING_TOL) {
                continue;
            }
            let u = linalg::orthonormalize(&comp.projector, 1e-6);
            if u.ncols() != k {
                return Err(Error::ToleranceFailure(format!(
                    "copy of W has rank {} instead of {k}",
                    u.ncols()
                )));
            }
            let u_adj = u.adjoint();
            let w = Representation::from_fn(hg.clone(), |h| &u_adj * res.matrix(h) * &u)?;
            let chi = element_character(&w);
            // Skip constituents conjugate under N_G(H) to one already taken.
            let normalizer = sub.normalizer();
            let duplicate = seen.iter().any(|prev| {
                normalizer.iter().any(|&x| {
                    sub.members().iter().enumerate().all(|(i, &h)| {
                        let j = sub
                            .local_index(g.conj(x, h))
                            .expect("normalizer preserves H");
                        (chi[j] - prev[i]).norm() < crate::ROUNDING_TOL
                    })
                })
            });
            if duplicate {
                continue;
            }
            seen.push(chi);
            let transversal = left_transversal(g, &sub);
            out.push(InductionPair {
                subgroup: sub.clone(),
                w,
                copy_projector: comp.projector,
                copy_basis: u,
                transversal,
            });
        }
    }
    Ok(out)
}

/// `Bmat = [ρ(g₁)U … ρ(g_l)U]`, checked to be invertible.
fn block_matrix(v: &Representation, reps: &[usize], copy_basis: &CMat) -> Result<(CMat, CMat)> {
    let d = v.dim();
    let blocks: Vec<CMat> = reps.iter().map(|&g| v.matrix(g) * copy_basis).collect();
    let bmat = linalg::hstack(&blocks, d);
    if bmat.ncols() != d {
        return Err(Error::BlocksNotDirect(0.0));
    }
    let sv = bmat.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= DIRECT_SUM_TOL * max.max(1.0) {
        return Err(Error::BlocksNotDirect(min / max.max(f64::MIN_POSITIVE)));
    }
    let inv = linalg::inverse(&bmat).ok_or(Error::BlocksNotDirect(min))?;
    Ok((bmat, inv))
}

/// The block-diagonal image of `Ind_H^G C` in `End(V)` for transversal
/// representatives `reps`.
pub fn theta_raw(
    v: &Representation,
    reps: &[usize],
    copy_basis: &CMat,
    c: &MatrixSubspace,
    tol: f64,
) -> Result<MatrixSubspace> {
    let d = v.dim();
    let k = copy_basis.ncols();
    if c.ambient_dim() != k {
        return Err(Error::DimensionMismatch(format!(
            "C lives in M_{} but dim W = {k}",
            c.ambient_dim()
        )));
    }
    let (bmat, inv) = block_matrix(v, reps, copy_basis)?;
    let mut mats = Vec::with_capacity(reps.len() * c.dim());
    for i in 0..reps.len() {
        for m in c.matrices() {
            let mut block = CMat::zeros(d, d);
            block.view_mut((i * k, i * k), (k, k)).copy_from(&m);
            mats.push(&bmat * block * &inv);
        }
    }
    Ok(MatrixSubspace::from_matrices(d, &mats, tol))
}

/// `Θ(H, W, C)` with Wedderburn metadata, checked for `G`-invariance and
/// for having `[G:H]` times as many components as `C`.
pub fn theta(
    pair: &InductionPair,
    c: &MatrixSubspace,
    v: &Representation,
    seed: u64,
    tol: f64,
) -> Result<InvariantSubalgebra> {
    let space = theta_raw(v, &pair.transversal.reps, &pair.copy_basis, c, tol)?;
    if !matalg::is_invariant(&space, &v.adjoint(), tol) {
        return Err(Error::AssertionFailure(
            "induced subalgebra is not G-invariant".into(),
        ));
    }
    let mut alg = InvariantSubalgebra::analyze(space, seed, tol)?;
    let c_components = matalg::wedderburn_decompose(c, seed, tol)?.len();
    if alg.num_components() != pair.index() * c_components {
        return Err(Error::AssertionFailure(format!(
            "induced subalgebra has {} components, expected {}·{}",
            alg.num_components(),
            pair.index(),
            c_components
        )));
    }
    let a = (c.dim() as f64).sqrt().round() as usize;
    alg.induction_datum = Some(DatumSummary {
        subgroup: pair.subgroup.members().to_vec(),
        w_dim: pair.w.dim(),
        c_dim: c.dim(),
        factor_dims: (a * a == c.dim()).then(|| (a, pair.w.dim() / a.max(1))),
    });
    Ok(alg)
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub pairs: Vec<InductionPair>,
    /// Sorted by (dimension, fingerprint).
    pub subalgebras: Vec<InvariantSubalgebra>,
    /// The datum each subalgebra was first produced from; `None` only for
    /// entries supplied from outside the induction pipeline.
    pub data: Vec<Option<InductionDatum>>,
    pub complete: bool,
    /// `(|H|, dim W)` for pairs whose central simple list is not certified.
    pub uncertified_pairs: Vec<(usize, usize)>,
    /// Centralizers that had to be added to close the list.
    pub closure_added: usize,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.subalgebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subalgebras.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subalgebras
            .iter()
            .map(InvariantSubalgebra::dim)
            .collect()
    }

    pub fn position(&self, s: &MatrixSubspace) -> Option<usize> {
        self.subalgebras
            .iter()
            .position(|b| b.space.approx_eq(s, SUBSPACE_EQ_TOL))
    }
}

/// The finite matrix group generated by `ρ(G)` with its defining
/// representation; `v` itself when it is linear. Group elements of the
/// cover are indexed independently of `G`.
pub fn linear_cover(v: &Representation) -> Result<Representation> {
    if v.is_linear() {
        return Ok(v.clone());
    }
    let g = v.group();
    let gens: Vec<CMat> = g
        .generators()
        .iter()
        .map(|&x| v.matrix(x).clone())
        .collect();
    let name = format!("cover of {}", g.name().unwrap_or("G"));
    let (cover, rep) = catalog::matrix_group(&gens, &name)?;
    if cover.order() > GROUP_ORDER_CAP {
        return Err(Error::CapExceeded {
            what: "linear cover",
            size: cover.order(),
            cap: GROUP_ORDER_CAP,
        });
    }
    Ok(rep)
}

/// All unital `G`-invariant subalgebras of `End(V)` for irreducible `V`.
///
/// For projective `V` the pairs and induction data refer to
/// [`linear_cover`]`(V)`.
pub fn enumerate_invariant_subalgebras(
    v: &Representation,
    seed: u64,
    tol: f64,
) -> Result<Enumeration> {
    let v = &linear_cover(v)?;
    let pairs = induction_pairs(v, tol)?;
    let per_pair: Vec<Result<(Vec<(InvariantSubalgebra, InductionDatum)>, bool)>> = pairs
        .par_iter()
        .enumerate()
        .map(|(pi, pair)| {
            let (cs, certified) = factor::central_simple_invariant_subalgebras(&pair.w, tol)?;
            let k = pair.w.dim();
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                let alg = theta(pair, &c, v, seed, tol)?;
                let a = (c.dim() as f64).sqrt().round() as usize;
                out.push((
                    alg,
                    InductionDatum {
                        pair: pi,
                        c,
                        factor_dims: (a, k / a),
                    },
                ));
            }
            Ok((out, certified))
        })
        .collect();

    let mut subalgebras: Vec<InvariantSubalgebra> = Vec::new();
    let mut data: Vec<Option<InductionDatum>> = Vec::new();
    let mut uncertified_pairs = Vec::new();
    for (pi, result) in per_pair.into_iter().enumerate() {
        let (items, certified) = result?;
        if !certified {
            uncertified_pairs.push((pairs[pi].subgroup.order(), pairs[pi].w.dim()));
        }
        for (alg, datum) in items {
            if !subalgebras
                .iter()
                .any(|b| b.space.approx_eq(&alg.space, SUBSPACE_EQ_TOL))
            {
                subalgebras.push(alg);
                data.push(Some(datum));
            }
        }
    }

    // Close under centralizers.
    let mut closure_added = 0;
    let mut i = 0;
    while i < subalgebras.len() {
        let z = matalg::centralizer(&subalgebras[i].space, tol);
        if !subalgebras
            .iter()
            .any(|b| b.space.approx_eq(&z, SUBSPACE_EQ_TOL))
        {
            subalgebras.push(InvariantSubalgebra::analyze(z, seed, tol)?);
            data.push(None);
            closure_added += 1;
        }
        i += 1;
    }

    let mut order: Vec<usize> = (0..subalgebras.len()).collect();
    let keys: Vec<(usize, Vec<(i64, i64)>)> = subalgebras
        .iter()
        .map(|b| (b.dim(), b.space.fingerprint()))
        .collect();
    order.sort_by(|&x, &y| keys[x].cmp(&keys[y]));
    let mut sorted_algs = Vec::with_capacity(order.len());
    let mut sorted_data = Vec::with_capacity(order.len());
    for idx in order {
        sorted_algs.push(subalgebras[idx].clone());
        sorted_data.push(data[idx].clone());
    }
    Ok(Enumeration {
        complete: uncertified_pairs.is_empty(),
        pairs,
        subalgebras: sorted_algs,
        data: sorted_data,
        uncertified_pairs,
        closure_added,
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn conjugate_subgroups(a: &Subgroup, b: &Subgroup) -> bool {
    a.order() == b.order()
        && (0..a.parent().order()).any(|x| a.conjugate(x).members() == b.members())
}

/// Structural checks on every entry of an enumeration.
pub fn verify_classification(
    v: &Representation,
    en: &Enumeration,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    let v = &match linear_cover(v) {
        Ok(c) => c,
        Err(e) => {
            report.check(false, || format!("linear cover: {e}"));
            return report;
        }
    };
    let adj = v.adjoint();
    let d = v.dim();
    report.check(en.position(&MatrixSubspace::scalars(d)).is_some(), || {
        "scalars missing from the list".into()
    });
    report.check(en.position(&MatrixSubspace::full(d)).is_some(), || {
        "full algebra missing from the list".into()
    });
    for (i, b) in en.subalgebras.iter().enumerate() {
        let s = &b.space;
        let tag = format!("subalgebra {i} (dim {})", s.dim());
        report.check(matalg::is_invariant(s, &adj, tol), || {
            format!("{tag}: not G-invariant")
        });
        report.check(matalg::is_product_closed(s, tol), || {
            format!("{tag}: not closed under products")
        });
        report.check(s.contains_identity(1e-8), || {
            format!("{tag}: does not contain I")
        });
        if let Err(e) = matalg::semisimplicity_certificate(s, tol) {
            report.check(false, || format!("{tag}: {e}"));
            continue;
        }
        match matalg::is_symmetrically_embedded(s, seed, tol) {
            Ok(ok) => report.check(ok, || format!("{tag}: not symmetrically embedded")),
            Err(e) => report.check(false, || format!("{tag}: {e}")),
        }
        report.check(matalg::double_centralizer_check(s, tol), || {
            format!("{tag}: differs from its double centralizer")
        });
        let z = matalg::centralizer(s, tol);
        report.check(en.position(&z).is_some(), || {
            format!("{tag}: centralizer not in the list")
        });
        let idem = match matalg::central_primitive_idempotents(s, seed, tol) {
            Ok(e) => e,
            Err(e) => {
                report.check(false, || format!("{tag}: {e}"));
                continue;
            }
        };
        match matalg::permutation_action(&idem, &adj, tol) {
            Ok(act) => report.check(act.transitive, || {
                format!("{tag}: permutation action not transitive")
            }),
            Err(e) => {
                report.check(false, || format!("{tag}: {e}"));
                continue;
            }
        }
        let inertia = matalg::inertia_subgroup(&idem, &adj, 0, tol);
        match &inertia {
            Ok(h) => report.check(h.index() == idem.len(), || {
                format!("{tag}: inertia index differs from component count")
            }),
            Err(e) => report.check(false, || format!("{tag}: {e}")),
        }
        let Some(Some(datum)) = en.data.get(i) else {
            continue;
        };
        let pair = &en.pairs[datum.pair];
        match theta_raw(v, &pair.transversal.reps, &pair.copy_basis, &datum.c, tol) {
            Ok(t) => report.check(t.approx_eq(s, SUBSPACE_EQ_TOL), || {
                format!("{tag}: recorded datum does not reproduce it")
            }),
            Err(e) => report.check(false, || format!("{tag}: {e}")),
        }
        report.check(s.dim() == pair.index() * datum.c.dim(), || {
            format!("{tag}: dimension is not [G:H]·dim C")
        });
        if let Ok(h) = inertia {
            report.check(conjugate_subgroups(&h, &pair.subgroup), || {
                format!("{tag}: inertia subgroup not conjugate to the datum's H")
            });
        }
        let scalars_c = MatrixSubspace::scalars(pair.w.dim());
        match (
            matalg::z0(s, seed, tol),
            theta_raw(v, &pair.transversal.reps, &pair.copy_basis, &scalars_c, tol),
        ) {
            (Ok(z0), Ok(t)) => report.check(z0.approx_eq(&t, SUBSPACE_EQ_TOL), || {
                format!("{tag}: Z0 differs from Θ(H, W, ℂ)")
            }),
            (Err(e), _) | (_, Err(e)) => report.check(false, || format!("{tag}: {e}")),
        }
    }
    report
}

/// `Θ(C ∩ C′) = Θ(C) ∩ Θ(C′)` and `C ⊆ C′ ⟺ Θ(C) ⊆ Θ(C′)`.
pub fn theta_lattice_check(
    pair: &InductionPair,
    c1: &MatrixSubspace,
    c2: &MatrixSubspace,
    v: &Representation,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let th = |c: &MatrixSubspace| theta_raw(v, &pair.transversal.reps, &pair.copy_basis, c, tol);
    let (t1, t2) = (th(c1)?, th(c2)?);
    let meet = th(&c1.intersection(c2, tol))?;
    report.check(
        meet.approx_eq(&t1.intersection(&t2, tol), SUBSPACE_EQ_TOL),
        || "Θ does not preserve intersections".into(),
    );
    let eq = SUBSPACE_EQ_TOL;
    report.check(
        c2.contains_subspace(c1, eq) == t2.contains_subspace(&t1, eq),
        || "Θ does not reflect C ⊆ C′".into(),
    );
    report.check(
        c1.contains_subspace(c2, eq) == t1.contains_subspace(&t2, eq),
        || "Θ does not reflect C′ ⊆ C".into(),
    );
    report.check(t1.dim() == pair.index() * c1.dim(), || {
        "dim Θ(C) ≠ [G:H]·dim C".into()
    });
    // Independence of the transversal: multiply every representative by an element of H.
    let h = pair.subgroup.members();
    let shifted: Vec<usize> = pair
        .transversal
        .reps
        .iter()
        .enumerate()
        .map(|(i, &g)| v.group().mul(g, h[(i + 1) % h.len()]))
        .collect();
    let t1_shifted = theta_raw(v, &shifted, &pair.copy_basis, c1, tol)?;
    report.check(t1_shifted.approx_eq(&t1, SUBSPACE_EQ_TOL), || {
        "Θ depends on the transversal".into()
    });
    Ok(report)
}

/// `Θ^G_K(Θ^K_H(C)) = Θ^G_H(C)` for `H ≤ K ≤ G` and a pair `(H, W)`.
pub fn transitivity_check(
    v: &Representation,
    pair: &InductionPair,
    k: &Subgroup,
    c: &MatrixSubspace,
    tol: f64,
) -> Result<bool> {
    let h = &pair.subgroup;
    let direct = theta_raw(v, &pair.transversal.reps, &pair.copy_basis, c, tol)?;
    // U = Ind_H^K W sits in V as the span of the K-translates of the W copy.
    let h_in_k = h.within(k)?;
    let inner_t = left_transversal(&k.as_group(), &h_in_k);
    let inner_reps: Vec<usize> = inner_t.reps.iter().map(|&x| k.members()[x]).collect();
    let translates: Vec<CMat> = inner_reps
        .iter()
        .map(|&x| v.matrix(x) * &pair.copy_basis)
        .collect();
    let u_basis = linalg::orthonormalize(&linalg::hstack(&translates, v.dim()), 1e-8);
    if u_basis.ncols() != h_in_k.index() * pair.w.dim() {
        return Err(Error::BlocksNotDirect(0.0));
    }
    let u_adj = u_basis.adjoint();
    let u_rep = Representation::from_fn(k.as_group(), |x| {
        &u_adj * v.matrix(k.members()[x]) * &u_basis
    })?;
    let w_in_u = &u_adj * &pair.copy_basis;
    let inner = theta_raw(&u_rep, &inner_t.reps, &w_in_u, c, tol)?;
    let outer_t = left_transversal(v.group(), k);
    let composed = theta_raw(v, &outer_t.reps, &u_basis, &inner, tol)?;
    Ok(composed.approx_eq(&direct, SUBSPACE_EQ_TOL))
}

/// Nonunital product-closed invariant subspaces of `End(V)`, and whether
/// the scan was exhaustive. For primitive `V` the answer must be `{0}`.
pub fn nonunital_scan(v: &Representation, tol: f64) -> Result<(Vec<MatrixSubspace>, bool)> {
    let scan = factor::multfree_scan(&v.adjoint(), tol)?;
    if is_primitive(v, tol)? && (scan.nonunital.len() != 1 || scan.nonunital[0].dim() != 0) {
        return Err(Error::AssertionFailure(format!(
            "primitive representation has {} nonunital invariant subalgebras",
            scan.nonunital.len()
        )));
    }
    Ok((scan.nonunital, scan.certified))
}

/// Not induced from any proper subgroup.
pub fn is_primitive(v: &Representation, tol: f64) -> Result<bool> {
    Ok(induction_pairs(&linear_cover(v)?, tol)?.len() == 1)
}

/// Unital subalgebras found by the brute-force scan of the adjoint action.
pub fn oracle(v: &Representation, tol: f64) -> Result<(Vec<MatrixSubspace>, bool)> {
    let scan = factor::multfree_scan(&v.adjoint(), tol)?;
    Ok((scan.unital, scan.certified))
}

/// Whether an enumeration and a list of subspaces agree as sets.
pub fn same_subspaces(en: &Enumeration, other: &[MatrixSubspace]) -> bool {
    en.len() == other.len() && other.iter().all(|s| en.position(s).is_some())
}

/// Multiplicity of `χ_W` in `Res_H χ_V`; used to double check pairs.
pub fn copy_multiplicity(v: &Representation, pair: &InductionPair) -> Result<usize> {
    let res = rep::restricted_character(&pair.subgroup, &v.character()?);
    let chi_w: ClassFunction = pair.w.character()?;
    character::multiplicity(&pair.subgroup.as_group(), &chi_w, &res)
}
